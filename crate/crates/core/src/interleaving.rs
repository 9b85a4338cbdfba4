//! Interleavings between direct sums of convex modules: morphisms are
//! scalar matrices against canonical-hom patterns, so the set of
//! (Lambda, Gamma)-interleavings is the solution set of a bilinear system
//! with one equation per commuting-triangle entry per vertex. Distances are
//! decided by exact witness search over small prime fields.

use crate::convex::{act, canonical_hom, Barcode, ConvexModule};
use crate::field::PrimeField;
use crate::poset::{Poset, PosetError, Vertex, VertexSet};
use crate::translation::{candidate_thresholds, compose, maximal_translation, Translation};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InterleavingError {
    #[error("scalar matrix has shape ({0}, {1}), expected ({2}, {3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("scalar at ({0}, {1}) must vanish: the hom space is zero")]
    ZeroPatternViolated(usize, usize),
    #[error("system has {0} variables, over the exhaustive cap {1}")]
    CountCapExceeded(usize, usize),
    #[error("witness search exhausted its node budget without deciding")]
    BudgetExhausted,
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// A morphism I -> M.Lambda between barcodes, as the matrix of scalars
/// against the canonical patterns; entries are forced to zero wherever the
/// hom space vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMorphism {
    /// entries[s][t]: coefficient of Phi_{I_s, M_t.Lambda}.
    pub entries: Vec<Vec<u32>>,
}

impl ScalarMorphism {
    pub fn zero(rows: usize, cols: usize) -> ScalarMorphism {
        ScalarMorphism {
            entries: vec![vec![0; cols]; rows],
        }
    }
}

/// Identifies where an equation came from: which commuting triangle, which
/// matrix entry, which evaluation vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Triangle {
    /// psi.Lambda after phi equals the structure map of I.
    Source,
    /// phi.Gamma after psi equals the structure map of M.
    Target,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub triangle: Triangle,
    /// (row, column) of the matrix identity being evaluated.
    pub pair: (usize, usize),
    pub vertex: Vertex,
}

/// One bilinear equation: a sum of phi*psi monomials equated to 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equation {
    /// Monomials (phi variable index, psi variable index).
    pub terms: Vec<(usize, usize)>,
    pub rhs: u32,
    pub provenance: Vec<Provenance>,
}

/// The bilinear system whose solutions over a field are exactly the
/// (Lambda, Gamma)-interleavings between two barcodes.
#[derive(Clone, Debug, Serialize)]
pub struct InterleavingSystem {
    /// (s, t) pairs with Hom(I_s, M_t.Lambda) nonzero.
    pub phi_vars: Vec<(usize, usize)>,
    /// (t, s) pairs with Hom(M_t, I_s.Gamma) nonzero.
    pub psi_vars: Vec<(usize, usize)>,
    pub equations: Vec<Equation>,
    pub source_len: usize,
    pub target_len: usize,
}

fn support_of_action(poset: &Poset, module: &ConvexModule, t: &Translation) -> VertexSet {
    match act(poset, module, t).bars() {
        [] => VertexSet::EMPTY,
        [one] => one.support(),
        _ => panic!("translation action on an n-Vee stays indecomposable"),
    }
}

/// Builds the variety of (Lambda, Gamma)-interleavings between I and M:
/// variables for the nonvanishing hom entries, one equation per triangle
/// entry per witnessing vertex, duplicates merged with provenance kept.
pub fn build_system(
    poset: &Poset,
    i: &Barcode,
    m: &Barcode,
    lam: &Translation,
    gam: &Translation,
) -> InterleavingSystem {
    let ns = i.len();
    let nt = m.len();
    // Module supports after the relevant composite translations. Acting by
    // Gamma then Lambda is the composite "Lambda first" in our convention.
    let m_lam: Vec<VertexSet> = m.iter().map(|b| support_of_action(poset, b, lam)).collect();
    let i_gam: Vec<VertexSet> = i.iter().map(|b| support_of_action(poset, b, gam)).collect();
    let gam_lam = compose(poset, lam, gam); // p -> Gamma(Lambda p)
    let lam_gam = compose(poset, gam, lam); // p -> Lambda(Gamma p)
    let i_gl: Vec<VertexSet> = i.iter().map(|b| support_of_action(poset, b, &gam_lam)).collect();
    let m_lg: Vec<VertexSet> = m.iter().map(|b| support_of_action(poset, b, &lam_gam)).collect();

    let mut phi_vars = Vec::new();
    let mut phi_index = vec![vec![None; nt]; ns];
    for (s, bar_i) in i.iter().enumerate() {
        for (t, sup) in m_lam.iter().enumerate() {
            if sup.is_empty() {
                continue;
            }
            let target = ConvexModule::new(poset, *sup).expect("action support is convex");
            if canonical_hom(poset, bar_i, &target).nonzero {
                phi_index[s][t] = Some(phi_vars.len());
                phi_vars.push((s, t));
            }
        }
    }
    let mut psi_vars = Vec::new();
    let mut psi_index = vec![vec![None; ns]; nt];
    for (t, bar_m) in m.iter().enumerate() {
        for (s, sup) in i_gam.iter().enumerate() {
            if sup.is_empty() {
                continue;
            }
            let target = ConvexModule::new(poset, *sup).expect("action support is convex");
            if canonical_hom(poset, bar_m, &target).nonzero {
                psi_index[t][s] = Some(psi_vars.len());
                psi_vars.push((t, s));
            }
        }
    }

    let mut equations: Vec<Equation> = Vec::new();
    let mut add = |terms: Vec<(usize, usize)>, rhs: u32, prov: Provenance| {
        let mut terms = terms;
        terms.sort_unstable();
        match equations.iter_mut().find(|e| e.terms == terms && e.rhs == rhs) {
            Some(e) => e.provenance.push(prov),
            None => equations.push(Equation {
                terms,
                rhs,
                provenance: vec![prov],
            }),
        }
    };

    // First triangle: entry (s', s) of [psi.Lambda][phi] against the
    // diagonal structure pattern of I, evaluated wherever the composite can
    // be nonzero.
    for s in 0..ns {
        for s_prime in 0..ns {
            let domain = i.bars()[s].support().intersect(i_gl[s_prime]);
            for p in domain.iter() {
                let terms: Vec<(usize, usize)> = (0..nt)
                    .filter(|&t| m_lam[t].contains(p))
                    .filter_map(|t| Some((phi_index[s][t]?, psi_index[t][s_prime]?)))
                    .collect();
                let rhs = u32::from(s == s_prime);
                if terms.is_empty() && rhs == 0 {
                    continue;
                }
                add(
                    terms,
                    rhs,
                    Provenance {
                        triangle: Triangle::Source,
                        pair: (s, s_prime),
                        vertex: p,
                    },
                );
            }
        }
    }
    // Second triangle: entry (t', t) of [phi.Gamma][psi] against the
    // diagonal structure pattern of M.
    for t in 0..nt {
        for t_prime in 0..nt {
            let domain = m.bars()[t].support().intersect(m_lg[t_prime]);
            for p in domain.iter() {
                let terms: Vec<(usize, usize)> = (0..ns)
                    .filter(|&s| i_gam[s].contains(p))
                    .filter_map(|s| Some((phi_index[s][t_prime]?, psi_index[t][s]?)))
                    .collect();
                let rhs = u32::from(t == t_prime);
                if terms.is_empty() && rhs == 0 {
                    continue;
                }
                add(
                    terms,
                    rhs,
                    Provenance {
                        triangle: Triangle::Target,
                        pair: (t, t_prime),
                        vertex: p,
                    },
                );
            }
        }
    }

    InterleavingSystem {
        phi_vars,
        psi_vars,
        equations,
        source_len: ns,
        target_len: nt,
    }
}

impl InterleavingSystem {
    pub fn vars(&self) -> usize {
        self.phi_vars.len() + self.psi_vars.len()
    }

    /// Distinct equations as (terms, rhs) pairs, for fixture comparison.
    pub fn normalized_equations(&self) -> Vec<(Vec<(usize, usize)>, u32)> {
        let mut eqs: Vec<(Vec<(usize, usize)>, u32)> = self
            .equations
            .iter()
            .map(|e| (e.terms.clone(), e.rhs))
            .collect();
        eqs.sort();
        eqs
    }

    /// Evaluates the system at concrete scalar matrices.
    pub fn satisfied_by(
        &self,
        field: &PrimeField,
        phi: &ScalarMorphism,
        psi: &ScalarMorphism,
    ) -> bool {
        self.equations.iter().all(|eq| {
            let sum = eq.terms.iter().fold(0, |acc, &(pv, qv)| {
                let (s, t) = self.phi_vars[pv];
                let (t2, s2) = self.psi_vars[qv];
                field.add(acc, field.mul(phi.entries[s][t], psi.entries[t2][s2]))
            });
            sum == eq.rhs
        })
    }

    /// One equation per line: monomials as lam[s,t]*mu[t,s], constants 0/1.
    pub fn render_text(&self, lam: &Translation, gam: &Translation) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "# lambda = {:?}", lam.as_slice()).unwrap();
        writeln!(out, "# gamma  = {:?}", gam.as_slice()).unwrap();
        for &(s, t) in &self.phi_vars {
            writeln!(out, "# var lam[{s},{t}]: Hom(I_{s}, M_{t}.lambda)").unwrap();
        }
        for &(t, s) in &self.psi_vars {
            writeln!(out, "# var mu[{t},{s}]: Hom(M_{t}, I_{s}.gamma)").unwrap();
        }
        for eq in &self.equations {
            let lhs = if eq.terms.is_empty() {
                "0".to_string()
            } else {
                eq.terms
                    .iter()
                    .map(|&(pv, qv)| {
                        let (s, t) = self.phi_vars[pv];
                        let (t2, s2) = self.psi_vars[qv];
                        format!("lam[{s},{t}]*mu[{t2},{s2}]")
                    })
                    .collect::<Vec<_>>()
                    .join(" + ")
            };
            writeln!(out, "{lhs} = {}", eq.rhs).unwrap();
        }
        out
    }
}

/// Verifies the two commuting triangles at every vertex for the given
/// scalar morphisms, rejecting shapes or zero-pattern violations outright.
pub fn check_interleaving(
    poset: &Poset,
    i: &Barcode,
    m: &Barcode,
    phi: &ScalarMorphism,
    psi: &ScalarMorphism,
    lam: &Translation,
    gam: &Translation,
    field: &PrimeField,
) -> Result<bool, InterleavingError> {
    let (ns, nt) = (i.len(), m.len());
    if phi.entries.len() != ns || phi.entries.iter().any(|r| r.len() != nt) {
        let got = (phi.entries.len(), phi.entries.first().map_or(0, |r| r.len()));
        return Err(InterleavingError::ShapeMismatch(got.0, got.1, ns, nt));
    }
    if psi.entries.len() != nt || psi.entries.iter().any(|r| r.len() != ns) {
        let got = (psi.entries.len(), psi.entries.first().map_or(0, |r| r.len()));
        return Err(InterleavingError::ShapeMismatch(got.0, got.1, nt, ns));
    }
    let sys = build_system(poset, i, m, lam, gam);
    let mut allowed_phi = vec![vec![false; nt]; ns];
    for &(s, t) in &sys.phi_vars {
        allowed_phi[s][t] = true;
    }
    let mut allowed_psi = vec![vec![false; ns]; nt];
    for &(t, s) in &sys.psi_vars {
        allowed_psi[t][s] = true;
    }
    for s in 0..ns {
        for t in 0..nt {
            if phi.entries[s][t] % field.order() != 0 && !allowed_phi[s][t] {
                return Err(InterleavingError::ZeroPatternViolated(s, t));
            }
            if psi.entries[t][s] % field.order() != 0 && !allowed_psi[t][s] {
                return Err(InterleavingError::ZeroPatternViolated(t, s));
            }
        }
    }
    Ok(sys.satisfied_by(field, phi, psi))
}

/// Outcome of a witness search: a satisfying assignment, a proof of
/// emptiness, or an inconclusive randomized pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Witness { phi: Vec<u32>, psi: Vec<u32> },
    Empty,
    Unknown,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveConfig {
    /// Backtracking node budget before falling back to randomized search.
    pub node_budget: u64,
    /// Random assignments tried in the fallback.
    pub random_tries: u32,
    pub seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            node_budget: 4_000_000,
            random_tries: 512,
            seed: 0x5eed,
        }
    }
}

/// Exact backtracking over the bilinear system: most-constrained variable
/// first, with single-unknown propagation inside equations. Complete within
/// the node budget; a randomized pass afterwards can still find witnesses.
pub fn solve_over_field(
    sys: &InterleavingSystem,
    field: &PrimeField,
    config: &SolveConfig,
) -> SolveOutcome {
    let np = sys.phi_vars.len();
    let nv = np + sys.psi_vars.len();
    // Immediate contradictions: rhs 1 with no monomials.
    if sys.equations.iter().any(|e| e.terms.is_empty() && e.rhs != 0) {
        return SolveOutcome::Empty;
    }
    let eq_terms: Vec<Vec<(usize, usize)>> = sys
        .equations
        .iter()
        .map(|e| e.terms.iter().map(|&(p, q)| (p, np + q)).collect())
        .collect();
    let occurrences: Vec<Vec<usize>> = {
        let mut occ = vec![Vec::new(); nv];
        for (k, terms) in eq_terms.iter().enumerate() {
            for &(a, b) in terms {
                occ[a].push(k);
                occ[b].push(k);
            }
        }
        for o in &mut occ {
            o.dedup();
        }
        occ
    };

    struct Search<'a> {
        field: &'a PrimeField,
        eq_terms: &'a [Vec<(usize, usize)>],
        rhs: Vec<u32>,
        occurrences: &'a [Vec<usize>],
        assignment: Vec<Option<u32>>,
        nodes: u64,
        budget: u64,
    }

    impl Search<'_> {
        /// Checks every equation touching `var`; propagates forced values.
        /// Returns the list of extra assignments made, or None on conflict.
        fn propagate(&mut self, var: usize) -> Option<Vec<usize>> {
            let mut forced = Vec::new();
            let mut queue = vec![var];
            while let Some(v) = queue.pop() {
                for &k in &self.occurrences[v] {
                    let mut sum = 0;
                    let mut unknown: Option<usize> = None;
                    let mut coeff = 0;
                    let mut open = false;
                    for &(a, b) in &self.eq_terms[k] {
                        match (self.assignment[a], self.assignment[b]) {
                            (Some(x), Some(y)) => sum = self.field.add(sum, self.field.mul(x, y)),
                            (Some(x), None) => {
                                if unknown.is_none() || unknown == Some(b) {
                                    unknown = Some(b);
                                    coeff = self.field.add(coeff, x);
                                } else {
                                    open = true;
                                }
                            }
                            (None, Some(y)) => {
                                if unknown.is_none() || unknown == Some(a) {
                                    unknown = Some(a);
                                    coeff = self.field.add(coeff, y);
                                } else {
                                    open = true;
                                }
                            }
                            (None, None) => open = true,
                        }
                        if open {
                            break;
                        }
                    }
                    if open {
                        continue;
                    }
                    match unknown {
                        None => {
                            if sum != self.rhs[k] {
                                for &f in &forced {
                                    self.assignment[f] = None;
                                }
                                return None;
                            }
                        }
                        Some(u) => {
                            let need = self.field.sub(self.rhs[k], sum);
                            if coeff == 0 {
                                if need != 0 {
                                    for &f in &forced {
                                        self.assignment[f] = None;
                                    }
                                    return None;
                                }
                            } else {
                                let value = self.field.mul(need, self.field.inv(coeff));
                                self.assignment[u] = Some(value);
                                forced.push(u);
                                queue.push(u);
                            }
                        }
                    }
                }
            }
            Some(forced)
        }

        fn next_var(&self) -> Option<usize> {
            // Most-constrained: prefer variables in equations with the
            // fewest unassigned variables.
            let mut best: Option<(usize, usize)> = None;
            for (k, terms) in self.eq_terms.iter().enumerate() {
                let mut unassigned = Vec::new();
                for &(a, b) in terms {
                    if self.assignment[a].is_none() {
                        unassigned.push(a);
                    }
                    if self.assignment[b].is_none() {
                        unassigned.push(b);
                    }
                }
                unassigned.sort_unstable();
                unassigned.dedup();
                if unassigned.is_empty() {
                    continue;
                }
                let _ = k;
                if best.is_none_or(|(_, n)| unassigned.len() < n) {
                    best = Some((unassigned[0], unassigned.len()));
                }
            }
            match best {
                Some((v, _)) => Some(v),
                None => self.assignment.iter().position(Option::is_none),
            }
        }

        fn dfs(&mut self) -> Option<bool> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            let Some(var) = self.next_var() else {
                return Some(true);
            };
            for value in self.field.elements() {
                self.assignment[var] = Some(value);
                if let Some(forced) = self.propagate(var) {
                    match self.dfs() {
                        Some(true) => return Some(true),
                        Some(false) => {}
                        None => return None,
                    }
                    for f in forced {
                        self.assignment[f] = None;
                    }
                }
                self.assignment[var] = None;
            }
            Some(false)
        }
    }

    let mut search = Search {
        field,
        eq_terms: &eq_terms,
        rhs: sys.equations.iter().map(|e| e.rhs).collect(),
        occurrences: &occurrences,
        assignment: vec![None; nv],
        nodes: 0,
        budget: config.node_budget,
    };
    match search.dfs() {
        Some(true) => {
            let values: Vec<u32> = search
                .assignment
                .iter()
                .map(|a| a.unwrap_or(0))
                .collect();
            SolveOutcome::Witness {
                phi: values[..np].to_vec(),
                psi: values[np..].to_vec(),
            }
        }
        Some(false) => SolveOutcome::Empty,
        None => {
            // Randomized fallback: sample assignments and test.
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed);
            for _ in 0..config.random_tries {
                let values: Vec<u32> = (0..nv).map(|_| rng.gen_range(0..field.order())).collect();
                let good = eq_terms.iter().zip(sys.equations.iter()).all(|(terms, eq)| {
                    let sum = terms
                        .iter()
                        .fold(0, |acc, &(a, b)| field.add(acc, field.mul(values[a], values[b])));
                    sum == eq.rhs
                });
                if good {
                    return SolveOutcome::Witness {
                        phi: values[..np].to_vec(),
                        psi: values[np..].to_vec(),
                    };
                }
            }
            SolveOutcome::Unknown
        }
    }
}

/// Exact number of F_p points of the variety, by exhaustive enumeration.
pub fn count_points(
    sys: &InterleavingSystem,
    field: &PrimeField,
    var_cap: usize,
) -> Result<u64, InterleavingError> {
    let nv = sys.vars();
    if nv > var_cap {
        return Err(InterleavingError::CountCapExceeded(nv, var_cap));
    }
    let np = sys.phi_vars.len();
    let q = field.order() as u64;
    let total = q.pow(nv as u32);
    let mut count = 0;
    let mut values = vec![0u32; nv];
    for idx in 0..total {
        let mut rem = idx;
        for v in values.iter_mut() {
            *v = (rem % q) as u32;
            rem /= q;
        }
        let ok = sys.equations.iter().all(|eq| {
            let sum = eq.terms.iter().fold(0, |acc, &(p, m)| {
                field.add(acc, field.mul(values[p], values[np + m]))
            });
            sum == eq.rhs
        });
        if ok {
            count += 1;
        }
    }
    Ok(count)
}

/// A distance certificate: the level, the translation, the scalars, and the
/// field they satisfy the triangles over.
#[derive(Clone, Debug)]
pub struct DistanceWitness {
    pub eps: u64,
    pub lam: Translation,
    pub phi: ScalarMorphism,
    pub psi: ScalarMorphism,
    pub field_order: u32,
}

/// Hom(I, M.Lambda) != 0: whether a phi-type scalar variable exists.
pub fn canonical_hom_nonzero(
    poset: &Poset,
    i: &ConvexModule,
    m: &ConvexModule,
    lam: &Translation,
) -> bool {
    let sup = support_of_action(poset, m, lam);
    !sup.is_empty()
        && canonical_hom(poset, i, &ConvexModule::new(poset, sup).expect("convex action")).nonzero
}

/// Partition of bar indices that splits the interleaving variety into
/// independent blocks (by minimal support vertex, following the structure
/// of translations fixing or moving the minimum).
pub(crate) fn diagonal_groups(poset: &Poset, i: &Barcode, m: &Barcode, lam: &Translation) -> Vec<(Vec<usize>, Vec<usize>)> {
    let shape = poset.require_shape().expect("n-Vee");
    let m0 = poset.minimum().expect("n-Vee");
    let fixes_m = lam.apply(m0) == m0;
    let key = |bar: &ConvexModule| -> usize {
        if fixes_m {
            if bar.contains(m0) {
                0
            } else {
                1 + poset.branch_of(bar.min_vertex(poset)).expect("branch vertex")
            }
        } else {
            // The minimum has entered the longest branch: bars rooted there
            // (or at m) form one block, each short branch another.
            let min = bar.min_vertex(poset);
            match poset.branch_of(min) {
                None => 0,
                Some(b) if b == shape.longest => 0,
                Some(b) => 1 + b,
            }
        }
    };
    let mut groups: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> = Default::default();
    for (s, bar) in i.iter().enumerate() {
        groups.entry(key(bar)).or_default().0.push(s);
    }
    for (t, bar) in m.iter().enumerate() {
        groups.entry(key(bar)).or_default().1.push(t);
    }
    groups.into_values().collect()
}

fn sub_barcode(b: &Barcode, idx: &[usize]) -> Barcode {
    Barcode::new(idx.iter().map(|&k| b.bars()[k]).collect())
}

/// Decides whether a (Lambda_eps, Lambda_eps)-interleaving exists over the
/// field, splitting into diagonal blocks first; returns assembled scalars.
fn witness_at(
    poset: &Poset,
    i: &Barcode,
    m: &Barcode,
    widths: (&[u64], &[u64]),
    eps: u64,
    lam: &Translation,
    field: &PrimeField,
    config: &SolveConfig,
) -> Result<Option<(ScalarMorphism, ScalarMorphism)>, InterleavingError> {
    let (wi, wm) = widths;
    let mut phi = ScalarMorphism::zero(i.len(), m.len());
    let mut psi = ScalarMorphism::zero(m.len(), i.len());
    // Zero-interleaving shortcut for the whole instance.
    if wi.iter().chain(wm).all(|&w| w <= eps) {
        return Ok(Some((phi, psi)));
    }
    let m0 = poset.minimum().expect("n-Vee");
    for (gi, gm) in diagonal_groups(poset, i, m, lam) {
        if gi.iter().all(|&s| wi[s] <= eps) && gm.iter().all(|&t| wm[t] <= eps) {
            continue; // zero block
        }
        // A live block evaluated at a fixed minimum forces equal sizes:
        // the triangles restrict to mutually inverse matrices there.
        if lam.apply(m0) == m0
            && gi.iter().all(|&s| i.bars()[s].contains(m0))
            && gm.iter().all(|&t| m.bars()[t].contains(m0))
            && gi.len() != gm.len()
        {
            return Ok(None);
        }
        let bi = sub_barcode(i, &gi);
        let bm = sub_barcode(m, &gm);
        let sys = build_system(poset, &bi, &bm, lam, lam);
        match solve_over_field(&sys, field, config) {
            SolveOutcome::Witness { phi: pv, psi: qv } => {
                for (k, &(s, t)) in sys.phi_vars.iter().enumerate() {
                    phi.entries[gi[s]][gm[t]] = pv[k];
                }
                for (k, &(t, s)) in sys.psi_vars.iter().enumerate() {
                    psi.entries[gm[t]][gi[s]] = qv[k];
                }
            }
            SolveOutcome::Empty => return Ok(None),
            SolveOutcome::Unknown => return Err(InterleavingError::BudgetExhausted),
        }
    }
    Ok(Some((phi, psi)))
}

/// D(I, M) over the given field: the least candidate threshold whose
/// variety of (Lambda_eps, Lambda_eps)-interleavings has an F_p point.
pub fn distance_with_witness(
    poset: &Poset,
    i: &Barcode,
    m: &Barcode,
    field: &PrimeField,
    config: &SolveConfig,
) -> Result<DistanceWitness, InterleavingError> {
    let wi: Vec<u64> = i
        .iter()
        .map(|b| crate::convex::width(poset, b))
        .collect::<Result<_, _>>()?;
    let wm: Vec<u64> = m
        .iter()
        .map(|b| crate::convex::width(poset, b))
        .collect::<Result<_, _>>()?;
    for eps in candidate_thresholds(poset) {
        let lam = maximal_translation(poset, eps)?;
        if let Some((phi, psi)) = witness_at(poset, i, m, (&wi, &wm), eps, &lam, field, config)? {
            debug_assert_eq!(
                check_interleaving(poset, i, m, &phi, &psi, &lam, &lam, field),
                Ok(true)
            );
            return Ok(DistanceWitness {
                eps,
                lam,
                phi,
                psi,
                field_order: field.order(),
            });
        }
    }
    unreachable!("the zero interleaving exists once every width is reached")
}

/// The interleaving distance, as the minimum over the requested fields of
/// the per-field witness-search distance.
pub fn interleaving_distance(
    poset: &Poset,
    i: &Barcode,
    m: &Barcode,
    fields: &[u32],
) -> Result<u64, InterleavingError> {
    let mut best = None;
    for &p in fields {
        let field = PrimeField::new(p).expect("prime field order");
        let w = distance_with_witness(poset, i, m, &field, &SolveConfig::default())?;
        best = Some(best.map_or(w.eps, |b: u64| b.min(w.eps)));
    }
    Ok(best.expect("at least one field"))
}

/// d_2 on Sigma: the interleaving distance of singleton barcodes, decided
/// combinatorially. A level works iff every structure-pattern point of
/// either bar is covered by the pair of canonical homs, or both bars are
/// already annihilated; this is field-independent.
pub fn pairwise_convex_distance(
    poset: &Poset,
    s1: &ConvexModule,
    s2: &ConvexModule,
) -> Result<u64, InterleavingError> {
    for eps in candidate_thresholds(poset) {
        let lam = maximal_translation(poset, eps)?;
        if pair_feasible(poset, s1, s2, &lam) {
            return Ok(eps);
        }
    }
    unreachable!("both bars die at the top threshold")
}

pub(crate) fn pair_feasible(poset: &Poset, i: &ConvexModule, m: &ConvexModule, lam: &Translation) -> bool {
    let sq = compose(poset, lam, lam);
    let i_sq = i.support().intersect(support_of_action(poset, i, &sq));
    let m_sq = m.support().intersect(support_of_action(poset, m, &sq));
    if i_sq.is_empty() && m_sq.is_empty() {
        return true; // zero interleaving
    }
    let m_lam = support_of_action(poset, m, lam);
    let i_lam = support_of_action(poset, i, lam);
    let phi_ok = !m_lam.is_empty()
        && canonical_hom(poset, i, &ConvexModule::new(poset, m_lam).unwrap()).nonzero;
    let psi_ok = !i_lam.is_empty()
        && canonical_hom(poset, m, &ConvexModule::new(poset, i_lam).unwrap()).nonzero;
    if !(phi_ok && psi_ok) {
        return false;
    }
    i_sq.is_subset_of(m_lam) && m_sq.is_subset_of(i_lam)
}
