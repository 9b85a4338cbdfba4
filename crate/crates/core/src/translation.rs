//! The translation monoid T(P) on a suspended poset: inflationary monotone
//! self-maps fixing the top. Provides heights, composition, the closed-form
//! maximal translations of the n-Vee lemmas, and exhaustive enumeration as a
//! brute-force oracle.

use crate::poset::{Poset, PosetError, Vertex};
use serde::{Deserialize, Serialize};

/// A monotone inflationary self-map of a suspended poset, fixing the top.
/// Serialized as the image array in canonical vertex order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Translation {
    map: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TranslationError {
    #[error("map has {0} entries but the poset has {1} vertices")]
    WrongLength(usize, usize),
    #[error("map is not inflationary at vertex {0}")]
    NotInflationary(Vertex),
    #[error("map is not monotone on the pair ({0}, {1})")]
    NotMonotone(Vertex, Vertex),
    #[error("map must fix the suspension point")]
    MovesTop,
    #[error(transparent)]
    Poset(#[from] PosetError),
}

impl Translation {
    pub fn new(poset: &Poset, map: Vec<Vertex>) -> Result<Translation, TranslationError> {
        if map.len() != poset.len() {
            return Err(TranslationError::WrongLength(map.len(), poset.len()));
        }
        let inf = poset.infinity().ok_or(PosetError::NotSuspended)?;
        if map[inf] != inf {
            return Err(TranslationError::MovesTop);
        }
        for x in poset.vertices() {
            if !poset.leq(x, map[x]) {
                return Err(TranslationError::NotInflationary(x));
            }
        }
        // Monotone on covers implies monotone everywhere.
        for &(x, y) in poset.covers() {
            if !poset.leq(map[x], map[y]) {
                return Err(TranslationError::NotMonotone(x, y));
            }
        }
        Ok(Translation { map })
    }

    pub fn identity(poset: &Poset) -> Translation {
        Translation {
            map: poset.vertices().collect(),
        }
    }

    /// The translation sending every vertex to the suspension point.
    pub fn all_to_top(poset: &Poset) -> Translation {
        let inf = poset.infinity().expect("suspended poset");
        Translation {
            map: vec![inf; poset.len()],
        }
    }

    pub fn apply(&self, x: Vertex) -> Vertex {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// Pointwise order on translations.
    pub fn le(&self, other: &Translation, poset: &Poset) -> bool {
        self.map
            .iter()
            .zip(&other.map)
            .all(|(&a, &b)| poset.leq(a, b))
    }
}

/// h(Lambda) = max over x of the ascending displacement cost of x -> Lambda x.
pub fn height(poset: &Poset, t: &Translation) -> u64 {
    poset
        .vertices()
        .map(|x| poset.ascent(x, t.apply(x)))
        .max()
        .unwrap_or(0)
}

/// Functional composition in application order: `compose(s, t)` applies `s`
/// first, so that acting by `s` then by `t` equals acting by `compose(s, t)`.
pub fn compose(poset: &Poset, s: &Translation, t: &Translation) -> Translation {
    let map: Vec<Vertex> = s.map.iter().map(|&x| t.apply(x)).collect();
    debug_assert!(Translation::new(poset, map.clone()).is_ok());
    Translation { map }
}

/// All ascending displacement costs {ascent(x, y) : x <= y}, sorted and
/// deduplicated. Every height of a maximal translation is one of these, so
/// they are the thresholds scanned by widths and distances.
pub fn candidate_thresholds(poset: &Poset) -> Vec<u64> {
    let mut out = Vec::new();
    for x in poset.vertices() {
        for y in poset.up_set(x).iter() {
            out.push(poset.ascent(x, y));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The closed-form maximal translation of height <= eps on an n-Vee.
///
/// Three regimes: below a*T+b the minimum stays put and every branch is
/// pushed as far as its own ascent allows; between a*T+b and a*T_max+b (a
/// nonempty window only for asymmetric shapes) the short branches are sent
/// to the top and the minimum enters the longest branch; from a*T_max+b on
/// everything is sent to the top. A 1-Vee is always in the middle regime.
pub fn maximal_translation(poset: &Poset, eps: u64) -> Result<Translation, PosetError> {
    let shape = poset.require_shape()?;
    let inf = poset.infinity().ok_or(PosetError::NotSuspended)?;
    let m = poset.minimum().expect("n-Vee has a unique minimum");
    let a = poset.weight().a;
    let b = poset.weight().b;
    let cap = a * shape.longest_length() as u64 + b;
    if eps >= cap {
        return Ok(Translation::all_to_top(poset));
    }
    let single = shape.branches.len() == 1;
    let move_m = a * shape.second_length() as u64 + b;

    let push_along = |x: Vertex, branch: &[Vertex]| -> Vertex {
        let mut best = x;
        for &y in branch.iter().filter(|&&y| poset.leq(x, y)) {
            if poset.ascent(x, y) <= eps {
                best = y;
            }
        }
        if poset.ascent(x, inf) <= eps {
            best = inf;
        }
        best
    };

    let mut map = vec![inf; poset.len()];
    map[inf] = inf;
    if single || eps >= move_m {
        // Middle regime: everything lives on the longest branch.
        let long = &shape.branches[shape.longest];
        map[m] = push_along(m, long);
        for &x in long {
            map[x] = push_along(x, long);
        }
        for (i, branch) in shape.branches.iter().enumerate() {
            if i != shape.longest {
                for &x in branch {
                    map[x] = inf;
                }
            }
        }
    } else {
        map[m] = m;
        for branch in &shape.branches {
            for &x in branch {
                map[x] = push_along(x, branch);
            }
        }
    }
    debug_assert!(Translation::new(poset, map.clone()).is_ok());
    Ok(Translation { map })
}

/// Every inflationary monotone self-map of the suspended poset fixing the
/// top, exactly once. Brute-force oracle; capped.
pub fn enumerate_translations(poset: &Poset, cap: usize) -> Result<Vec<Translation>, PosetError> {
    poset.infinity().ok_or(PosetError::NotSuspended)?;
    if poset.len() > cap {
        return Err(PosetError::CapExceeded(poset.len(), cap));
    }
    let mut out = Vec::new();
    let mut assignment: Vec<Vertex> = poset.vertices().collect();
    poset.for_each_translation_rec(0, &mut assignment, &mut |map| {
        out.push(Translation { map: map.to_vec() })
    });
    Ok(out)
}

/// Sorted distinct heights realized by the closed-form maximal translations.
pub fn height_spectrum(poset: &Poset) -> Result<Vec<u64>, PosetError> {
    let mut heights: Vec<u64> = candidate_thresholds(poset)
        .into_iter()
        .map(|eps| maximal_translation(poset, eps).map(|t| height(poset, &t)))
        .collect::<Result<_, _>>()?;
    heights.sort_unstable();
    heights.dedup();
    Ok(heights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(poset: &Poset, map: &[Vertex]) -> Translation {
        Translation::new(poset, map.to_vec()).unwrap()
    }

    #[test]
    fn validation_rejects_bad_maps() {
        let p = Poset::nvee(&[2], (1, 1)).unwrap(); // m, x1, x2, inf
        assert!(matches!(
            Translation::new(&p, vec![0, 1, 2, 2]),
            Err(TranslationError::MovesTop)
        ));
        assert!(matches!(
            Translation::new(&p, vec![1, 0, 2, 3]),
            Err(TranslationError::NotInflationary(1))
        ));
        // m -> x2 but x1 -> x1 breaks monotonicity on the cover (m, x1).
        assert!(matches!(
            Translation::new(&p, vec![2, 1, 2, 3]),
            Err(TranslationError::NotMonotone(0, 1))
        ));
    }

    #[test]
    fn height_of_identity_and_shifts() {
        let p = Poset::nvee(&[3], (1, 1)).unwrap();
        assert_eq!(height(&p, &Translation::identity(&p)), 0);
        // Shift-by-one m->x1, ..., x3->inf: every step is one unit edge.
        let shift = t(&p, &[1, 2, 3, 4, 4]);
        assert_eq!(height(&p, &shift), 1);
    }

    #[test]
    fn closed_form_that_moves_m_costs_at_least_at_plus_b() {
        // 2-Vee [1,2], (1,1): the first closed-form translation sending m
        // into the long branch appears at eps = a*T + b and has that height.
        let p = Poset::nvee(&[1, 2], (1, 1)).unwrap();
        let move_m = 1 * 1 + 1;
        let lam = maximal_translation(&p, move_m).unwrap();
        assert!(lam.apply(0) != 0);
        assert!(height(&p, &lam) >= move_m);
        // Below that threshold the closed form fixes m.
        let lam = maximal_translation(&p, move_m - 1).unwrap();
        assert_eq!(lam.apply(0), 0);
    }

    #[test]
    fn compose_is_application_order() {
        let p = Poset::nvee(&[3], (1, 1)).unwrap();
        let id = Translation::identity(&p);
        let lam = maximal_translation(&p, 1).unwrap();
        assert_eq!(compose(&p, &id, &lam), lam);
        assert_eq!(compose(&p, &lam, &id), lam);
        // Lambda_1 squared on the chain: m->x2, x1->x3, x2->inf, x3->inf.
        let sq = compose(&p, &lam, &lam);
        assert_eq!(sq.as_slice(), &[2, 3, 4, 4, 4]);
    }

    #[test]
    fn lambda_a_squared_on_the_two_vee() {
        // 2-Vee [3,6] with a < b: Lambda_a shifts each branch one step and
        // fixes the branch tops; its square moves y1 -> y3 and x2 -> x3.
        let p = Poset::nvee(&[3, 6], (1, 2)).unwrap();
        let lam = maximal_translation(&p, 1).unwrap();
        assert_eq!(lam.as_slice(), &[0, 2, 3, 3, 5, 6, 7, 8, 9, 9, 10]);
        let sq = compose(&p, &lam, &lam);
        assert_eq!(sq.apply(4), 6); // y1 -> y3
        assert_eq!(sq.apply(2), 3); // x2 -> x3
    }

    #[test]
    fn maximal_translation_examples() {
        let p = Poset::nvee(&[3], (1, 1)).unwrap();
        assert!(maximal_translation(&p, 0).unwrap().is_identity());
        // eps = 1 on the 1-Vee pushes everything one step, x3 into the top.
        assert_eq!(maximal_translation(&p, 1).unwrap().as_slice(), &[1, 2, 3, 4, 4]);
        // At a*T_max + b everything is annihilated.
        assert_eq!(
            maximal_translation(&p, 4).unwrap(),
            Translation::all_to_top(&p)
        );
    }

    #[test]
    fn enumerate_tiny_chain() {
        // Chain m < x1 plus the top: exactly 5 translations.
        let p = Poset::nvee(&[1], (1, 1)).unwrap();
        let all = enumerate_translations(&p, 10).unwrap();
        assert_eq!(all.len(), 5);
        assert!(all.contains(&Translation::identity(&p)));
        assert!(all.contains(&Translation::all_to_top(&p)));
    }

    #[test]
    fn enumerate_cap() {
        let p = Poset::nvee(&[4, 4], (1, 1)).unwrap();
        assert!(matches!(
            enumerate_translations(&p, 5),
            Err(PosetError::CapExceeded(_, 5))
        ));
    }

    #[test]
    fn spectrum_examples() {
        let p = Poset::nvee(&[3], (1, 1)).unwrap();
        assert_eq!(height_spectrum(&p).unwrap(), vec![0, 1, 2, 3, 4]);

        let q = Poset::nvee(&[3], (1, 2)).unwrap();
        let spec = height_spectrum(&q).unwrap();
        for v in [0, 1, 2, 3] {
            assert!(spec.contains(&v));
        }
        // Values involving b: x1 -> inf costs 2a+b, all-to-top costs 3a+b.
        assert!(spec.contains(&4));
        assert!(spec.contains(&5));
    }

    #[test]
    fn spectrum_max_is_at_plus_b_of_longest() {
        for lens in [vec![3], vec![1, 2], vec![2, 3], vec![1, 1, 2], vec![3, 6]] {
            for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 3)] {
                let p = Poset::nvee(&lens, (a, b)).unwrap();
                let spec = height_spectrum(&p).unwrap();
                let t_max = *lens.iter().max().unwrap() as u64;
                assert_eq!(*spec.last().unwrap(), a * t_max + b);
                assert_eq!(spec[0], 0);
            }
        }
    }

    #[test]
    fn closed_form_is_idempotent_in_height() {
        for lens in [vec![3], vec![1, 3], vec![2, 3]] {
            let p = Poset::nvee(&lens, (1, 2)).unwrap();
            for eps in candidate_thresholds(&p) {
                let lam = maximal_translation(&p, eps).unwrap();
                let h = height(&p, &lam);
                assert!(h <= eps);
                assert_eq!(maximal_translation(&p, h).unwrap(), lam);
            }
        }
    }

    #[test]
    fn closed_form_chain_is_totally_ordered() {
        for lens in [vec![4], vec![1, 3], vec![1, 1, 2]] {
            let p = Poset::nvee(&lens, (2, 3)).unwrap();
            let cands = candidate_thresholds(&p);
            for w in cands.windows(2) {
                let lo = maximal_translation(&p, w[0]).unwrap();
                let hi = maximal_translation(&p, w[1]).unwrap();
                assert!(lo.le(&hi, &p), "chain broken between {} and {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn dominance_holds_on_one_vees() {
        // On a totally ordered set every translation of height <= eps is
        // pointwise below the closed form.
        let p = Poset::nvee(&[3], (1, 2)).unwrap();
        let all = enumerate_translations(&p, 10).unwrap();
        for eps in candidate_thresholds(&p) {
            let lam = maximal_translation(&p, eps).unwrap();
            for g in all.iter().filter(|g| height(&p, g) <= eps) {
                assert!(g.le(&lam, &p));
            }
        }
    }

    #[test]
    fn dominance_fails_on_wider_vees() {
        // Documented counterexample to the closed-form dominance on n >= 2:
        // on the 2-Vee [1,2] with weights (1,1) the translation m -> y1,
        // x1 -> top, y1 -> y2, y2 -> top is valid with height max(a, b) = 1,
        // yet the closed form of level 1 keeps m fixed. See the acceptance
        // suite for the full analysis.
        let p = Poset::nvee(&[1, 2], (1, 1)).unwrap();
        let rogue = t(&p, &[2, 4, 3, 4, 4]);
        assert_eq!(height(&p, &rogue), 1);
        let lam = maximal_translation(&p, 1).unwrap();
        assert_eq!(lam.apply(0), 0);
        assert!(!rogue.le(&lam, &p));
    }
}
