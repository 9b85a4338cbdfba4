//! General linear representations of finite chains (type-A quivers) over a
//! prime field: interval (barcode) decomposition by rank counts, kernels,
//! images and cokernels of morphisms, and the canonical matchings of
//! barcodes induced by injections and surjections.

use crate::field::{Matrix, PrimeField};

/// An interval bar [lo, hi] on a chain with vertices 0..len.
pub type Bar = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("bar ({0}, {1}) is not an interval of the chain")]
    BadBar(usize, usize),
    #[error("matrix shapes do not match the dimension vector")]
    ShapeMismatch,
    #[error("morphism does not commute with the edge maps at vertex {0}")]
    NotCommuting(usize),
    #[error("morphism is not {0} as claimed")]
    WrongMode(&'static str),
}

/// A representation of the chain 0 < 1 < ... < len-1.
#[derive(Clone, Debug)]
pub struct ChainRep {
    pub field: PrimeField,
    pub dims: Vec<usize>,
    /// maps[i] has shape (dims[i+1], dims[i]).
    pub maps: Vec<Matrix>,
}

impl ChainRep {
    pub fn new(field: PrimeField, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<ChainRep, ChainError> {
        if maps.len() + 1 != dims.len() && !(dims.is_empty() && maps.is_empty()) {
            return Err(ChainError::ShapeMismatch);
        }
        for (i, m) in maps.iter().enumerate() {
            if m.rows != dims[i + 1] || m.cols != dims[i] {
                return Err(ChainError::ShapeMismatch);
            }
        }
        Ok(ChainRep { field, dims, maps })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Block-diagonal representation of a bar multiset, identity maps inside
    /// each bar. Basis order at each vertex follows the bar order.
    pub fn from_barcode(field: PrimeField, len: usize, bars: &[Bar]) -> Result<ChainRep, ChainError> {
        for &(lo, hi) in bars {
            if lo > hi || hi >= len {
                return Err(ChainError::BadBar(lo, hi));
            }
        }
        let dims: Vec<usize> = (0..len)
            .map(|v| bars.iter().filter(|&&(lo, hi)| lo <= v && v <= hi).count())
            .collect();
        let mut maps = Vec::new();
        for v in 0..len.saturating_sub(1) {
            let alive_now: Vec<usize> = bars
                .iter()
                .enumerate()
                .filter(|&(_, &(lo, hi))| lo <= v && v <= hi)
                .map(|(k, _)| k)
                .collect();
            let alive_next: Vec<usize> = bars
                .iter()
                .enumerate()
                .filter(|&(_, &(lo, hi))| lo <= v + 1 && v + 1 <= hi)
                .map(|(k, _)| k)
                .collect();
            let mut m = Matrix::zero(alive_next.len(), alive_now.len());
            for (j, bar) in alive_now.iter().enumerate() {
                if let Some(i) = alive_next.iter().position(|b| b == bar) {
                    m.set(i, j, 1);
                }
            }
            maps.push(m);
        }
        ChainRep::new(field, dims, maps)
    }

    /// Composite map from vertex i to vertex j (i <= j).
    fn composite(&self, i: usize, j: usize) -> Matrix {
        let mut m = Matrix::identity(self.dims[i]);
        for v in i..j {
            m = self.maps[v].mul(&self.field, &m);
        }
        m
    }

    /// The interval decomposition, recovered from the ranks of composites:
    /// the number of bars [i, j] is r(i,j) - r(i-1,j) - r(i,j+1) + r(i-1,j+1).
    pub fn barcode(&self) -> Vec<Bar> {
        let n = self.len();
        let r = |i: isize, j: isize| -> isize {
            if i < 0 || j >= n as isize || i > j {
                return 0;
            }
            if j < 0 || i >= n as isize {
                return 0;
            }
            self.composite(i as usize, j as usize).rank(&self.field) as isize
        };
        let mut bars = Vec::new();
        for i in 0..n as isize {
            for j in i..n as isize {
                let mult = r(i, j) - r(i - 1, j) - r(i, j + 1) + r(i - 1, j + 1);
                debug_assert!(mult >= 0);
                for _ in 0..mult {
                    bars.push((i as usize, j as usize));
                }
            }
        }
        bars.sort_unstable();
        bars
    }
}

/// A morphism of chain representations: one block per vertex.
#[derive(Clone, Debug)]
pub struct ChainMap {
    /// blocks[v] has shape (target.dims[v], source.dims[v]).
    pub blocks: Vec<Matrix>,
}

impl ChainMap {
    pub fn new(source: &ChainRep, target: &ChainRep, blocks: Vec<Matrix>) -> Result<ChainMap, ChainError> {
        if blocks.len() != source.len() || source.len() != target.len() {
            return Err(ChainError::ShapeMismatch);
        }
        let field = source.field;
        for (v, b) in blocks.iter().enumerate() {
            if b.rows != target.dims[v] || b.cols != source.dims[v] {
                return Err(ChainError::ShapeMismatch);
            }
        }
        for v in 0..source.len().saturating_sub(1) {
            let lhs = target.maps[v].mul(&field, &blocks[v]);
            let rhs = blocks[v + 1].mul(&field, &source.maps[v]);
            if lhs != rhs {
                return Err(ChainError::NotCommuting(v));
            }
        }
        Ok(ChainMap { blocks })
    }

    pub fn is_injective(&self, field: &PrimeField) -> bool {
        self.blocks.iter().all(|b| b.rank(field) == b.cols)
    }

    pub fn is_surjective(&self, field: &PrimeField) -> bool {
        self.blocks.iter().all(|b| b.rank(field) == b.rows)
    }
}

/// Kernel, image and cokernel of a morphism, with their induced edge maps.
/// The image also keeps its embedding into the target for containment tests.
pub struct MapPieces {
    pub kernel: ChainRep,
    pub image: ChainRep,
    pub cokernel: ChainRep,
    /// image_basis[v]: columns form a basis of im(f)(v) inside target(v).
    pub image_basis: Vec<Matrix>,
}

pub fn kernel_image_cokernel(
    source: &ChainRep,
    target: &ChainRep,
    f: &ChainMap,
) -> Result<MapPieces, ChainError> {
    let field = source.field;
    let n = source.len();

    let kernel_basis: Vec<Matrix> = f.blocks.iter().map(|b| b.nullspace(&field)).collect();
    let image_basis: Vec<Matrix> = f.blocks.iter().map(|b| b.column_space(&field)).collect();

    let mut kernel_maps = Vec::new();
    let mut image_maps = Vec::new();
    let mut cok_maps = Vec::new();

    // Complement coordinates for the cokernel at each vertex.
    let cok_rows: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let pivots = image_basis[v].pivot_rows(&field);
            (0..target.dims[v]).filter(|r| !pivots.contains(r)).collect()
        })
        .collect();

    // Reduce a target vector modulo the image, then read off the complement
    // coordinates.
    let quotient = |v: usize, vec: &[u32]| -> Vec<u32> {
        let basis = &image_basis[v];
        let mut reduced = vec.to_vec();
        if basis.cols > 0 {
            // Solve for the image component on the pivot rows.
            let pivots = basis.pivot_rows(&field);
            let mut sub = Matrix::zero(pivots.len(), basis.cols);
            for (i, &r) in pivots.iter().enumerate() {
                for j in 0..basis.cols {
                    sub.set(i, j, basis.get(r, j));
                }
            }
            let rhs: Vec<u32> = pivots.iter().map(|&r| reduced[r]).collect();
            let coeffs = sub.solve(&field, &rhs).expect("pivot rows determine the image component");
            for r in 0..target.dims[v] {
                let mut acc = reduced[r];
                for (j, &c) in coeffs.iter().enumerate() {
                    acc = field.sub(acc, field.mul(c, basis.get(r, j)));
                }
                reduced[r] = acc;
            }
        }
        cok_rows[v].iter().map(|&r| reduced[r]).collect()
    };

    for v in 0..n.saturating_sub(1) {
        // Kernel: source map sends ker(v) into ker(v+1).
        let pushed = source.maps[v].mul(&field, &kernel_basis[v]);
        let induced = kernel_basis[v + 1]
            .express(&field, &pushed)
            .ok_or(ChainError::NotCommuting(v))?;
        kernel_maps.push(induced);

        // Image: target map sends im(v) into im(v+1).
        let pushed = target.maps[v].mul(&field, &image_basis[v]);
        let induced = image_basis[v + 1]
            .express(&field, &pushed)
            .ok_or(ChainError::NotCommuting(v))?;
        image_maps.push(induced);

        // Cokernel: push complement representatives and take the quotient.
        let mut m = Matrix::zero(cok_rows[v + 1].len(), cok_rows[v].len());
        for (j, &r) in cok_rows[v].iter().enumerate() {
            let mut e = vec![0; target.dims[v]];
            e[r] = 1;
            let pushed = target.maps[v].mul_vec(&field, &e);
            let q = quotient(v + 1, &pushed);
            for (i, &val) in q.iter().enumerate() {
                m.set(i, j, val);
            }
        }
        cok_maps.push(m);
    }

    let kernel = ChainRep::new(field, kernel_basis.iter().map(|b| b.cols).collect(), kernel_maps)?;
    let image = ChainRep::new(field, image_basis.iter().map(|b| b.cols).collect(), image_maps)?;
    let cokernel = ChainRep::new(field, cok_rows.iter().map(|r| r.len()).collect(), cok_maps)?;
    Ok(MapPieces {
        kernel,
        image,
        cokernel,
        image_basis,
    })
}

/// A partial bijection between two bar multisets, by occurrence index into
/// the canonically sorted barcodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMatching {
    pub pairs: Vec<(usize, usize)>,
}

/// Canonical matching for an injection A into C: bars pair within each
/// right-endpoint class, in order of birth; the receiving bar is born no
/// later. Inputs must be sorted.
pub fn canonical_injection_matching(a: &[Bar], c: &[Bar]) -> Result<InducedMatching, ChainError> {
    matching_by(a, c, |&(_, hi)| hi, |&(lo, _)| lo, "injective")
}

/// Canonical matching for a surjection A onto C, given as a map from B(C)
/// into B(A): bars pair within each left-endpoint class, longest first.
pub fn canonical_surjection_matching(c: &[Bar], a: &[Bar]) -> Result<InducedMatching, ChainError> {
    matching_by(c, a, |&(lo, _)| lo, |&(_, hi)| usize::MAX - hi, "surjective")
}

fn matching_by(
    from: &[Bar],
    to: &[Bar],
    class_of: impl Fn(&Bar) -> usize,
    order_of: impl Fn(&Bar) -> usize,
    mode: &'static str,
) -> Result<InducedMatching, ChainError> {
    let mut pairs = Vec::new();
    let classes: std::collections::BTreeSet<usize> = from.iter().map(&class_of).collect();
    for class in classes {
        let mut group_from: Vec<usize> = (0..from.len()).filter(|&i| class_of(&from[i]) == class).collect();
        let mut group_to: Vec<usize> = (0..to.len()).filter(|&j| class_of(&to[j]) == class).collect();
        group_from.sort_by_key(|&i| (order_of(&from[i]), i));
        group_to.sort_by_key(|&j| (order_of(&to[j]), j));
        if group_from.len() > group_to.len() {
            return Err(ChainError::WrongMode(mode));
        }
        for (i, j) in group_from.into_iter().zip(group_to) {
            pairs.push((i, j));
        }
    }
    pairs.sort_unstable();
    Ok(InducedMatching { pairs })
}

/// The canonical matching induced by an injective or surjective morphism.
/// For injections it maps B(source) to B(target); for surjections it maps
/// B(target) to B(source).
pub fn induced_matching(
    source: &ChainRep,
    target: &ChainRep,
    f: &ChainMap,
    injective: bool,
) -> Result<InducedMatching, ChainError> {
    let field = source.field;
    if injective {
        if !f.is_injective(&field) {
            return Err(ChainError::WrongMode("injective"));
        }
        canonical_injection_matching(&source.barcode(), &target.barcode())
    } else {
        if !f.is_surjective(&field) {
            return Err(ChainError::WrongMode("surjective"));
        }
        canonical_surjection_matching(&target.barcode(), &source.barcode())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn barcode_roundtrip() {
        let field = PrimeField::new(5).unwrap();
        let bars = vec![(0, 2), (1, 3), (1, 1), (0, 2)];
        let rep = ChainRep::from_barcode(field, 4, &bars).unwrap();
        let mut expected = bars.clone();
        expected.sort_unstable();
        assert_eq!(rep.barcode(), expected);

        // Empty barcode gives the zero representation.
        let zero = ChainRep::from_barcode(field, 3, &[]).unwrap();
        assert!(zero.is_empty());
        assert!(zero.barcode().is_empty());
    }

    #[test]
    fn barcode_of_explicit_reps() {
        let field = f2();
        // dims (1,1) with zero map: two singletons.
        let rep = ChainRep::new(field, vec![1, 1], vec![Matrix::zero(1, 1)]).unwrap();
        assert_eq!(rep.barcode(), vec![(0, 0), (1, 1)]);
        // dims (1,2,1), maps [1;0] then [0 1]: bars [0,1] and [1,2].
        let m0 = Matrix::from_rows(vec![vec![1], vec![0]]);
        let m1 = Matrix::from_rows(vec![vec![0, 1]]);
        let rep = ChainRep::new(field, vec![1, 2, 1], vec![m0, m1]).unwrap();
        assert_eq!(rep.barcode(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn morphism_validation() {
        let field = f2();
        let a = ChainRep::from_barcode(field, 3, &[(0, 2)]).unwrap();
        let b = ChainRep::from_barcode(field, 3, &[(0, 1)]).unwrap();
        // The characteristic map [0,2] -> [0,1] is a valid morphism...
        let blocks = vec![
            Matrix::from_rows(vec![vec![1]]),
            Matrix::from_rows(vec![vec![1]]),
            Matrix::zero(0, 1),
        ];
        assert!(ChainMap::new(&a, &b, blocks).is_ok());
        // ...but the other diagonal scaling is not.
        let blocks = vec![
            Matrix::from_rows(vec![vec![1]]),
            Matrix::from_rows(vec![vec![0]]),
            Matrix::zero(0, 1),
        ];
        assert!(matches!(
            ChainMap::new(&a, &b, blocks),
            Err(ChainError::NotCommuting(0))
        ));
    }

    #[test]
    fn kernel_image_cokernel_of_characteristic_map() {
        // Phi between overlapping bars [2,5] -> [1,4] on a 6-chain:
        // kernel is the bar [5,5], image is [2,4], cokernel is [1,1].
        let field = f2();
        let source = ChainRep::from_barcode(field, 6, &[(2, 5)]).unwrap();
        let target = ChainRep::from_barcode(field, 6, &[(1, 4)]).unwrap();
        let blocks: Vec<Matrix> = (0..6)
            .map(|v| {
                let s = (2..=5).contains(&v) as usize;
                let t = (1..=4).contains(&v) as usize;
                let mut m = Matrix::zero(t, s);
                if s == 1 && t == 1 {
                    m.set(0, 0, 1);
                }
                m
            })
            .collect();
        let f = ChainMap::new(&source, &target, blocks).unwrap();
        let pieces = kernel_image_cokernel(&source, &target, &f).unwrap();
        assert_eq!(pieces.kernel.barcode(), vec![(5, 5)]);
        assert_eq!(pieces.image.barcode(), vec![(2, 4)]);
        assert_eq!(pieces.cokernel.barcode(), vec![(1, 1)]);
    }

    #[test]
    fn identity_and_zero_map_pieces() {
        let field = PrimeField::new(3).unwrap();
        let rep = ChainRep::from_barcode(field, 4, &[(0, 3), (1, 2)]).unwrap();
        let id_blocks: Vec<Matrix> = rep.dims.iter().map(|&d| Matrix::identity(d)).collect();
        let id = ChainMap::new(&rep, &rep, id_blocks).unwrap();
        let pieces = kernel_image_cokernel(&rep, &rep, &id).unwrap();
        assert!(pieces.kernel.is_empty());
        assert!(pieces.cokernel.is_empty());
        assert_eq!(pieces.image.barcode(), rep.barcode());

        let zero_blocks: Vec<Matrix> = rep.dims.iter().map(|&d| Matrix::zero(d, d)).collect();
        let zero = ChainMap::new(&rep, &rep, zero_blocks).unwrap();
        let pieces = kernel_image_cokernel(&rep, &rep, &zero).unwrap();
        assert_eq!(pieces.kernel.barcode(), rep.barcode());
        assert_eq!(pieces.cokernel.barcode(), rep.barcode());
        assert!(pieces.image.is_empty());
    }

    #[test]
    fn canonical_matchings() {
        // Isomorphic barcodes match identically.
        let bars = vec![(0, 1), (0, 1), (2, 3)];
        let m = canonical_injection_matching(&bars, &bars).unwrap();
        assert_eq!(m.pairs, vec![(0, 0), (1, 1), (2, 2)]);

        // Inclusion [2,3] into [1,3] (+ an unrelated [2,2] in the target):
        // the bar pairs with the one sharing its right endpoint.
        let a = vec![(2, 3)];
        let c = vec![(1, 3), (2, 2)];
        let m = canonical_injection_matching(&a, &c).unwrap();
        assert_eq!(m.pairs, vec![(0, 0)]);

        // Quotient [1,3] onto [1,2]: pairs by shared left endpoint.
        let c = vec![(1, 2)];
        let a = vec![(1, 3)];
        let m = canonical_surjection_matching(&c, &a).unwrap();
        assert_eq!(m.pairs, vec![(0, 0)]);

        // An over-full class is not an injection.
        assert!(canonical_injection_matching(&[(0, 1), (1, 1)], &[(0, 1)]).is_err());
    }

    #[test]
    fn induced_matching_checks_mode() {
        let field = f2();
        let a = ChainRep::from_barcode(field, 3, &[(1, 2)]).unwrap();
        let c = ChainRep::from_barcode(field, 3, &[(0, 2)]).unwrap();
        let blocks: Vec<Matrix> = (0..3)
            .map(|v| {
                let s = (1..=2).contains(&v) as usize;
                let mut m = Matrix::zero(1, s);
                if s == 1 {
                    m.set(0, 0, 1);
                }
                m
            })
            .collect();
        let f = ChainMap::new(&a, &c, blocks).unwrap();
        assert!(f.is_injective(&field));
        assert!(!f.is_surjective(&field));
        let m = induced_matching(&a, &c, &f, true).unwrap();
        assert_eq!(m.pairs, vec![(0, 0)]);
        assert!(matches!(
            induced_matching(&a, &c, &f, false),
            Err(ChainError::WrongMode("surjective"))
        ));
    }
}
