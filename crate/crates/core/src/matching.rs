//! Epsilon-matchings and the bottleneck distance, the Hall-style half
//! matching, the matching induced by an interleaving (piecewise over the
//! minimum and the branches), and the diagonal interleaving built back from
//! a matching.

use crate::chain::{
    canonical_injection_matching, canonical_surjection_matching, kernel_image_cokernel, Bar,
    ChainError, ChainMap, ChainRep,
};
use crate::convex::{width, Barcode, ConvexModule};
use crate::field::{Matrix, PrimeField};
use crate::interleaving::{
    build_system, check_interleaving, diagonal_groups, pair_feasible, pairwise_convex_distance,
    InterleavingError, ScalarMorphism,
};
use crate::poset::{Poset, PosetError, Vertex};
use crate::translation::{compose, height, maximal_translation, Translation};
use serde::Serialize;

/// A partial bijection between bar occurrences of two barcodes, with the
/// threshold it certifies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub eps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MatchingError {
    #[error("Hall condition fails on the index set {0:?}")]
    HallViolation(Vec<usize>),
    #[error("the given morphisms are not an interleaving")]
    NotAnInterleaving,
    #[error("the translation is not maximal for its height")]
    NotMaximal,
    #[error("matching is not admissible: {0}")]
    NotAdmissible(AdmissibilityFailure),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Interleaving(#[from] InterleavingError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AdmissibilityFailure {
    #[error("matching is not injective")]
    NotInjective,
    #[error("bar {index} on the {side} side has width {width} > eps but is unmatched")]
    WideUnmatched {
        side: &'static str,
        index: usize,
        width: u64,
    },
    #[error("matched pair ({s}, {t}) is at distance {d2} > eps")]
    PairTooFar { s: usize, t: usize, d2: u64 },
}

/// d_2 between every pair of bars.
pub fn pair_distance_matrix(
    poset: &Poset,
    i: &Barcode,
    m: &Barcode,
) -> Result<Vec<Vec<u64>>, InterleavingError> {
    i.iter()
        .map(|a| m.iter().map(|b| pairwise_convex_distance(poset, a, b)).collect())
        .collect()
}

/// Checks conditions (i)-(iii): wide bars matched on both sides, matched
/// pairs within eps, injectivity.
pub fn check_admissibility(
    poset: &Poset,
    i: &Barcode,
    m: &Barcode,
    matching: &Matching,
) -> Result<Result<(), AdmissibilityFailure>, MatchingError> {
    let mut seen_s = vec![false; i.len()];
    let mut seen_t = vec![false; m.len()];
    for &(s, t) in &matching.pairs {
        if seen_s[s] || seen_t[t] {
            return Ok(Err(AdmissibilityFailure::NotInjective));
        }
        seen_s[s] = true;
        seen_t[t] = true;
    }
    for (s, bar) in i.iter().enumerate() {
        let w = width(poset, bar)?;
        if w > matching.eps && !seen_s[s] {
            return Ok(Err(AdmissibilityFailure::WideUnmatched {
                side: "source",
                index: s,
                width: w,
            }));
        }
    }
    for (t, bar) in m.iter().enumerate() {
        let w = width(poset, bar)?;
        if w > matching.eps && !seen_t[t] {
            return Ok(Err(AdmissibilityFailure::WideUnmatched {
                side: "target",
                index: t,
                width: w,
            }));
        }
    }
    for &(s, t) in &matching.pairs {
        let d2 = pairwise_convex_distance(poset, &i.bars()[s], &m.bars()[t])?;
        if d2 > matching.eps {
            return Ok(Err(AdmissibilityFailure::PairTooFar { s, t, d2 }));
        }
    }
    Ok(Ok(()))
}

/// Kuhn's augmenting search: can every vertex of `forced` be matched into
/// `avail` along the given adjacency?
fn saturates(forced: &[usize], adj: &dyn Fn(usize) -> Vec<usize>, avail: &[bool]) -> bool {
    let n_right = avail.len();
    let mut owner: Vec<Option<usize>> = vec![None; n_right];
    fn try_augment(
        s: usize,
        adj: &dyn Fn(usize) -> Vec<usize>,
        avail: &[bool],
        owner: &mut Vec<Option<usize>>,
        visited: &mut Vec<bool>,
    ) -> bool {
        for t in adj(s) {
            if !avail[t] || visited[t] {
                continue;
            }
            visited[t] = true;
            if owner[t].is_none()
                || try_augment(owner[t].unwrap(), adj, avail, owner, visited)
            {
                owner[t] = Some(s);
                return true;
            }
        }
        false
    }
    forced.iter().all(|&s| {
        let mut visited = vec![false; n_right];
        try_augment(s, adj, avail, &mut owner, &mut visited)
    })
}

/// An eps-matching between two barcodes if one exists: every bar of width
/// greater than eps must be matched, and matched pairs must be within eps.
///
/// Feasibility is the pair of one-sided Hall conditions (simultaneous
/// coverage then follows); the returned matching covers the forced sets and
/// is the lexicographic greedy one.
pub fn epsilon_matching(
    poset: &Poset,
    i: &Barcode,
    m: &Barcode,
    eps: u64,
) -> Result<Option<Matching>, MatchingError> {
    let d2 = pair_distance_matrix(poset, i, m)?;
    let wi: Vec<u64> = i.iter().map(|b| width(poset, b)).collect::<Result<_, _>>()?;
    let wm: Vec<u64> = m.iter().map(|b| width(poset, b)).collect::<Result<_, _>>()?;
    let forced_s: Vec<usize> = (0..i.len()).filter(|&s| wi[s] > eps).collect();
    let forced_t: Vec<usize> = (0..m.len()).filter(|&t| wm[t] > eps).collect();

    let mut avail_s = vec![true; i.len()];
    let mut avail_t = vec![true; m.len()];
    let feasible = |avail_s: &[bool], avail_t: &[bool], skip_s: &[usize], skip_t: &[usize]| {
        let fs: Vec<usize> = forced_s
            .iter()
            .copied()
            .filter(|s| avail_s[*s] && !skip_s.contains(s))
            .collect();
        let ft: Vec<usize> = forced_t
            .iter()
            .copied()
            .filter(|t| avail_t[*t] && !skip_t.contains(t))
            .collect();
        let right = |s: usize| (0..m.len()).filter(|&t| d2[s][t] <= eps).collect::<Vec<_>>();
        let left = |t: usize| (0..i.len()).filter(|&s| d2[s][t] <= eps).collect::<Vec<_>>();
        saturates(&fs, &right, avail_t) && saturates(&ft, &left, avail_s)
    };
    if !feasible(&avail_s, &avail_t, &[], &[]) {
        return Ok(None);
    }

    let mut pairs = Vec::new();
    for &s in &forced_s {
        let mut chosen = None;
        for t in (0..m.len()).filter(|&t| avail_t[t] && d2[s][t] <= eps) {
            let mut next_s = avail_s.clone();
            let mut next_t = avail_t.clone();
            next_s[s] = false;
            next_t[t] = false;
            if feasible(&next_s, &next_t, &[], &[]) {
                chosen = Some(t);
                break;
            }
        }
        let t = chosen.expect("feasibility is preserved by greedy choices");
        pairs.push((s, t));
        avail_s[s] = false;
        avail_t[t] = false;
    }
    let open_t: Vec<usize> = forced_t.iter().copied().filter(|&t| avail_t[t]).collect();
    for t in open_t {
        let mut chosen = None;
        for s in (0..i.len()).filter(|&s| avail_s[s] && d2[s][t] <= eps) {
            let mut next_s = avail_s.clone();
            let mut next_t = avail_t.clone();
            next_s[s] = false;
            next_t[t] = false;
            if feasible(&next_s, &next_t, &[], &[]) {
                chosen = Some(s);
                break;
            }
        }
        let s = chosen.expect("feasibility is preserved by greedy choices");
        pairs.push((s, t));
        avail_s[s] = false;
        avail_t[t] = false;
    }
    pairs.sort_unstable();
    Ok(Some(Matching { pairs, eps }))
}

/// D_B: the least threshold over the candidate grid (pairwise distances and
/// widths) admitting an eps-matching.
pub fn bottleneck_distance(poset: &Poset, i: &Barcode, m: &Barcode) -> Result<u64, MatchingError> {
    let mut candidates = vec![0];
    for row in pair_distance_matrix(poset, i, m)? {
        candidates.extend(row);
    }
    for bar in i.iter().chain(m.iter()) {
        candidates.push(width(poset, bar)?);
    }
    candidates.sort_unstable();
    candidates.dedup();
    for eps in candidates {
        if epsilon_matching(poset, i, m, eps)?.is_some() {
            return Ok(eps);
        }
    }
    unreachable!("the empty matching is admissible once every width is reached")
}

/// Lemma-style half matching: an injection F with F(s) in x(s), built by the
/// recursive minimal-tight-set procedure; on failure, a minimal index set
/// violating the Hall condition.
pub fn half_matching(x: &[Vec<usize>]) -> Result<Vec<usize>, Vec<usize>> {
    // Full Hall check first, so violations are witnessed in the original
    // instance; the recursive construction then cannot fail.
    let k = x.len();
    for size in 1..=k {
        for mask in 0u64..(1 << k) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let subset: Vec<usize> = (0..k).filter(|&j| mask >> j & 1 == 1).collect();
            if union_size(&subset, x) < size {
                return Err(subset);
            }
        }
    }
    let mut assignment = vec![usize::MAX; x.len()];
    let active: Vec<usize> = (0..x.len()).collect();
    let sets: Vec<Vec<usize>> = x.to_vec();
    solve_half(&active, &sets, &mut assignment)
        .expect("reduced instances inherit the Hall condition");
    Ok(assignment)
}

fn union_size(subset: &[usize], sets: &[Vec<usize>]) -> usize {
    let mut all: Vec<usize> = subset.iter().flat_map(|&s| sets[s].iter().copied()).collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

fn solve_half(
    active: &[usize],
    sets: &[Vec<usize>],
    assignment: &mut Vec<usize>,
) -> Result<(), Vec<usize>> {
    if active.is_empty() {
        return Ok(());
    }
    // Scan subsets by size, then lexicographically: report the first Hall
    // violation, otherwise remember the minimal tight set.
    let k = active.len();
    let mut tight: Option<Vec<usize>> = None;
    for size in 1..=k {
        for mask in 0u64..(1 << k) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let subset: Vec<usize> = (0..k).filter(|&j| mask >> j & 1 == 1).map(|j| active[j]).collect();
            let u = union_size(&subset, sets);
            if u < size {
                return Err(subset);
            }
            if u == size && tight.is_none() {
                tight = Some(subset);
            }
        }
        if tight.is_some() {
            break;
        }
    }
    match tight {
        Some(s0) => {
            let s_first = s0[0];
            let t0 = sets[s_first][0];
            assignment[s_first] = t0;
            let rest0: Vec<usize> = s0[1..].to_vec();
            let reduced: Vec<Vec<usize>> = sets
                .iter()
                .map(|set| set.iter().copied().filter(|&t| t != t0).collect())
                .collect();
            solve_half(&rest0, &reduced, assignment)?;
            let used: Vec<usize> = s0.iter().map(|&s| assignment[s]).collect();
            let remaining: Vec<usize> = active.iter().copied().filter(|s| !s0.contains(s)).collect();
            let reduced: Vec<Vec<usize>> = sets
                .iter()
                .map(|set| set.iter().copied().filter(|t| !used.contains(t)).collect())
                .collect();
            solve_half(&remaining, &reduced, assignment)
        }
        None => {
            let s1 = active[0];
            let t1 = sets[s1][0];
            assignment[s1] = t1;
            let reduced: Vec<Vec<usize>> = sets
                .iter()
                .map(|set| set.iter().copied().filter(|&t| t != t1).collect())
                .collect();
            solve_half(&active[1..], &reduced, assignment)
        }
    }
}

/// A suspended chain carved out of the poset: the listed vertices in
/// ascending order, with the restricted translation (usize::MAX is the top).
struct ChainContext {
    vertices: Vec<Vertex>,
    lam: Vec<usize>,
}

impl ChainContext {
    fn new(vertices: Vec<Vertex>, lam: &Translation) -> ChainContext {
        let pos = |v: Vertex| vertices.iter().position(|&w| w == v);
        let lam = vertices
            .iter()
            .map(|&v| pos(lam.apply(v)).unwrap_or(usize::MAX))
            .collect();
        ChainContext { vertices, lam }
    }

    fn interval_of(&self, module: &ConvexModule) -> Option<Bar> {
        let positions: Vec<usize> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(_, &v)| module.contains(v))
            .map(|(k, _)| k)
            .collect();
        match (positions.first(), positions.last()) {
            (Some(&lo), Some(&hi)) => Some((lo, hi)),
            _ => None,
        }
    }

    /// Preimage of an interval under the restricted translation.
    fn act(&self, bar: Bar) -> Option<Bar> {
        let hit: Vec<usize> = (0..self.vertices.len())
            .filter(|&p| {
                let q = self.lam[p];
                q != usize::MAX && bar.0 <= q && q <= bar.1
            })
            .collect();
        match (hit.first(), hit.last()) {
            (Some(&lo), Some(&hi)) => Some((lo, hi)),
            _ => None,
        }
    }
}

/// Occurrence resolver: the k-th copy of each interval class in a sorted
/// barcode corresponds to the k-th original index under the given ordering
/// key (the fixed enumeration of isomorphic bars).
fn occurrences_by_class(bars: &[(usize, Bar)], keys: &[Vec<Vertex>]) -> Vec<usize> {
    // bars: (original index, interval); keys: support order for ties.
    let mut order: Vec<usize> = (0..bars.len()).collect();
    order.sort_by(|&a, &b| {
        bars[a]
            .1
            .cmp(&bars[b].1)
            .then_with(|| keys[a].cmp(&keys[b]))
            .then_with(|| bars[a].0.cmp(&bars[b].0))
    });
    // order[k] = list position whose bar is the k-th occurrence in the
    // canonically sorted barcode.
    order
}

/// Runs the totally-ordered matcher for one block: decompose im(phi), pull
/// back along the surjection, push forward along the injection, then lift
/// bars of M.Lambda to bars of M under the fixed enumeration.
#[allow(clippy::too_many_arguments)]
fn chain_matcher(
    ctx: &ChainContext,
    i_bars: &[(usize, Bar)],
    i_keys: &[Vec<Vertex>],
    m_bars: &[(usize, Bar)],
    m_keys: &[Vec<Vertex>],
    phi_scalar: &dyn Fn(usize, usize) -> u32,
    field: &PrimeField,
) -> Result<Vec<(usize, usize)>, MatchingError> {
    let len = ctx.vertices.len();
    let i_intervals: Vec<Bar> = i_bars.iter().map(|&(_, b)| b).collect();
    let i_rep = ChainRep::from_barcode(*field, len, &i_intervals)?;

    // M.Lambda bars, keeping only the surviving ones, tagged by list index.
    let mut mlam: Vec<(usize, Bar)> = Vec::new();
    for (k, &(_, b)) in m_bars.iter().enumerate() {
        if let Some(img) = ctx.act(b) {
            mlam.push((k, img));
        }
    }
    let mlam_intervals: Vec<Bar> = mlam.iter().map(|&(_, b)| b).collect();
    let mlam_rep = ChainRep::from_barcode(*field, len, &mlam_intervals)?;

    // The morphism into M.Lambda as vertexwise blocks.
    let mut blocks = Vec::new();
    for v in 0..len {
        let alive_i: Vec<usize> = (0..i_bars.len())
            .filter(|&k| i_intervals[k].0 <= v && v <= i_intervals[k].1)
            .collect();
        let alive_m: Vec<usize> = (0..mlam.len())
            .filter(|&k| mlam[k].1 .0 <= v && v <= mlam[k].1 .1)
            .collect();
        let mut block = Matrix::zero(alive_m.len(), alive_i.len());
        for (col, &ik) in alive_i.iter().enumerate() {
            for (row, &mk) in alive_m.iter().enumerate() {
                let (orig_s, _) = i_bars[ik];
                let (orig_t, _) = m_bars[mlam[mk].0];
                block.set(row, col, phi_scalar(orig_s, orig_t) % field.order());
            }
        }
        blocks.push(block);
    }
    let phi_map = ChainMap::new(&i_rep, &mlam_rep, blocks)?;
    let pieces = kernel_image_cokernel(&i_rep, &mlam_rep, &phi_map)?;
    let im_bars = pieces.image.barcode();

    let theta_rho = canonical_surjection_matching(&im_bars, &i_rep.barcode())?;
    let theta_iota = canonical_injection_matching(&im_bars, &mlam_rep.barcode())?;

    // Occurrence maps back to list indices.
    let i_occ = occurrences_by_class(i_bars, i_keys);
    let mlam_tagged: Vec<(usize, Bar)> = mlam.iter().map(|&(k, b)| (m_bars[k].0, b)).collect();
    let mlam_keys: Vec<Vec<Vertex>> = mlam.iter().map(|&(k, _)| m_keys[k].clone()).collect();
    let mlam_occ = occurrences_by_class(&mlam_tagged, &mlam_keys);

    let mut pairs = Vec::new();
    for &(im_occ, i_occ_idx) in &theta_rho.pairs {
        if let Some(&(_, m_occ_idx)) = theta_iota.pairs.iter().find(|&&(a, _)| a == im_occ) {
            let s_list = i_occ[i_occ_idx];
            let m_list = mlam_occ[m_occ_idx];
            pairs.push((i_bars[s_list].0, mlam_tagged[m_list].0));
        }
    }
    Ok(pairs)
}

/// The matching induced by a verified (Lambda, Lambda)-interleaving at a
/// maximal translation: bars are split by minimal vertex, the block at the
/// minimum is matched through the Hall argument on nonvanishing composites,
/// and every totally ordered block goes through the chain matcher.
pub fn induced_matching_from_interleaving(
    poset: &Poset,
    i: &Barcode,
    m: &Barcode,
    phi: &ScalarMorphism,
    psi: &ScalarMorphism,
    lam: &Translation,
    field: &PrimeField,
) -> Result<Matching, MatchingError> {
    if !check_interleaving(poset, i, m, phi, psi, lam, lam, field)? {
        return Err(MatchingError::NotAnInterleaving);
    }
    let eps = height(poset, lam);
    if *lam != maximal_translation(poset, eps)? {
        return Err(MatchingError::NotMaximal);
    }
    let shape = poset.require_shape()?;
    let m0 = poset.minimum().expect("n-Vee");

    // Diagonalize: cross-block entries may be dropped without breaking the
    // triangles.
    let groups = diagonal_groups(poset, i, m, lam);
    let mut dphi = phi.clone();
    let mut dpsi = psi.clone();
    let group_of_s: Vec<usize> = (0..i.len())
        .map(|s| groups.iter().position(|(gi, _)| gi.contains(&s)).unwrap())
        .collect();
    let group_of_t: Vec<usize> = (0..m.len())
        .map(|t| groups.iter().position(|(_, gm)| gm.contains(&t)).unwrap())
        .collect();
    for s in 0..i.len() {
        for t in 0..m.len() {
            if group_of_s[s] != group_of_t[t] {
                dphi.entries[s][t] = 0;
                dpsi.entries[t][s] = 0;
            }
        }
    }
    debug_assert_eq!(
        check_interleaving(poset, i, m, &dphi, &dpsi, lam, lam, field),
        Ok(true),
        "diagonalization must preserve the interleaving"
    );

    let fixes_m = lam.apply(m0) == m0;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (gi, gm) in &groups {
        if gi.is_empty() && gm.is_empty() {
            continue;
        }
        let is_m_block = fixes_m
            && gi.iter().all(|&s| i.bars()[s].contains(m0))
            && gm.iter().all(|&t| m.bars()[t].contains(m0))
            && (gi.iter().any(|&s| i.bars()[s].contains(m0))
                || gm.iter().any(|&t| m.bars()[t].contains(m0)));
        if is_m_block {
            // The Hall argument of the fixed-minimum block: match s to some
            // t with a nonvanishing composite through M_t.Lambda.
            let x: Vec<Vec<usize>> = gi
                .iter()
                .map(|&s| {
                    gm.iter()
                        .enumerate()
                        .filter(|&(_, &t)| {
                            field.mul(dphi.entries[s][t], dpsi.entries[t][s]) != 0
                        })
                        .map(|(k, _)| k)
                        .collect()
                })
                .collect();
            let f = half_matching(&x).map_err(|w| {
                MatchingError::HallViolation(w.into_iter().map(|k| gi[k]).collect())
            })?;
            for (k, &fk) in f.iter().enumerate() {
                pairs.push((gi[k], gm[fk]));
            }
            continue;
        }
        // A totally ordered block: either a branch (minimum excluded) or,
        // when the minimum moves, the longest branch together with it.
        let chain_vertices: Vec<Vertex> = if fixes_m {
            let min = gi
                .first()
                .map(|&s| i.bars()[s].min_vertex(poset))
                .or_else(|| gm.first().map(|&t| m.bars()[t].min_vertex(poset)))
                .unwrap();
            let branch = poset.branch_of(min).expect("branch block");
            shape.branches[branch].clone()
        } else {
            let block_min = |bar: &ConvexModule| {
                let v = bar.min_vertex(poset);
                v == m0 || poset.branch_of(v) == Some(shape.longest)
            };
            if !gi.iter().all(|&s| block_min(&i.bars()[s]))
                || !gm.iter().all(|&t| block_min(&m.bars()[t]))
            {
                // Short-branch block: annihilated by Lambda, nothing to match.
                continue;
            }
            let mut vs = vec![m0];
            vs.extend_from_slice(&shape.branches[shape.longest]);
            vs
        };
        let ctx = ChainContext::new(chain_vertices, lam);
        let i_bars: Vec<(usize, Bar)> = gi
            .iter()
            .filter_map(|&s| ctx.interval_of(&i.bars()[s]).map(|b| (s, b)))
            .collect();
        let m_bars: Vec<(usize, Bar)> = gm
            .iter()
            .filter_map(|&t| ctx.interval_of(&m.bars()[t]).map(|b| (t, b)))
            .collect();
        let i_keys: Vec<Vec<Vertex>> = i_bars.iter().map(|&(s, _)| i.bars()[s].support().to_vec()).collect();
        let m_keys: Vec<Vec<Vertex>> = m_bars.iter().map(|&(t, _)| m.bars()[t].support().to_vec()).collect();
        let scalars = |s: usize, t: usize| dphi.entries[s][t];
        pairs.extend(chain_matcher(
            &ctx, &i_bars, &i_keys, &m_bars, &m_keys, &scalars, field,
        )?);
    }
    pairs.sort_unstable();
    Ok(Matching { pairs, eps })
}

/// From an eps-matching back to a block-diagonal interleaving at the
/// maximal translation of that level: matched pairs carry the canonical
/// scalars, unmatched bars the zero morphism.
pub fn diagonal_interleaving_from_matching(
    poset: &Poset,
    i: &Barcode,
    m: &Barcode,
    matching: &Matching,
) -> Result<(ScalarMorphism, ScalarMorphism, Translation), MatchingError> {
    if let Err(failure) = check_admissibility(poset, i, m, matching)? {
        return Err(MatchingError::NotAdmissible(failure));
    }
    let lam = maximal_translation(poset, matching.eps)?;
    let sq = compose(poset, &lam, &lam);
    let mut phi = ScalarMorphism::zero(i.len(), m.len());
    let mut psi = ScalarMorphism::zero(m.len(), i.len());
    for &(s, t) in &matching.pairs {
        let bi = &i.bars()[s];
        let bm = &m.bars()[t];
        debug_assert!(pair_feasible(poset, bi, bm, &lam));
        let i_alive = !bi
            .support()
            .intersect(crate::convex::act(poset, bi, &sq).bars().first().map_or(crate::poset::VertexSet::EMPTY, |b| b.support()))
            .is_empty();
        let m_alive = !bm
            .support()
            .intersect(crate::convex::act(poset, bm, &sq).bars().first().map_or(crate::poset::VertexSet::EMPTY, |b| b.support()))
            .is_empty();
        if i_alive || m_alive {
            phi.entries[s][t] = 1;
            psi.entries[t][s] = 1;
        }
    }
    Ok((phi, psi, lam))
}

/// Convenience wrapper asserting that the diagonal interleaving from a
/// matching verifies, used by tests and the harness.
pub fn matching_yields_interleaving(
    poset: &Poset,
    i: &Barcode,
    m: &Barcode,
    matching: &Matching,
    field: &PrimeField,
) -> Result<bool, MatchingError> {
    let (phi, psi, lam) = diagonal_interleaving_from_matching(poset, i, m, matching)?;
    Ok(check_interleaving(poset, i, m, &phi, &psi, &lam, &lam, field)?)
}

/// Keeps the bilinear system of a block reachable for diagnostics.
pub fn block_system(
    poset: &Poset,
    i: &Barcode,
    m: &Barcode,
    lam: &Translation,
) -> crate::interleaving::InterleavingSystem {
    build_system(poset, i, m, lam, lam)
}
