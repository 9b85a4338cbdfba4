//! The worked examples that double as machine-checked fixtures: the 2-Vee
//! decomposition example, the 1-Vee distance staircase, and a searched
//! reconstruction of the partially specified 2-Vee variety example.

use crate::convex::{act, enumerate_sigma, Barcode, ConvexModule};
use crate::field::PrimeField;
use crate::interleaving::{build_system, canonical_hom_nonzero, count_points, InterleavingSystem};
use crate::poset::{Poset, Vertex, VertexSet};
use crate::translation::{candidate_thresholds, compose, maximal_translation, Translation};

fn module(poset: &Poset, vs: &[Vertex]) -> ConvexModule {
    ConvexModule::from_vertices(poset, vs).expect("fixture support is convex")
}

/// The 2-Vee P = [m,x3] ∪ [m,y6] with its seven named modules and the
/// level-a translation. Weight (1,2) keeps the branch tops in place under
/// Lambda_a, as the pictures assume.
pub struct TwoVeeExample {
    pub poset: Poset,
    pub lam: Translation,
    /// I = A + B + X.
    pub i: Barcode,
    /// M = C + D + Y + Z.
    pub m: Barcode,
    pub x_block: (Barcode, Barcode),
    pub m_block: (Barcode, Barcode),
}

pub fn two_vee_example() -> TwoVeeExample {
    let poset = Poset::nvee(&[3, 6], (1, 2)).unwrap();
    let lam = maximal_translation(&poset, 1).unwrap();
    let a = module(&poset, &[0, 1, 2, 4, 5]);
    let b = module(&poset, &[0, 1, 2, 4]);
    let c = module(&poset, &[0, 1, 2, 4, 5]);
    let d = module(&poset, &[0, 1, 4, 5]);
    let x = module(&poset, &[6, 7, 8]);
    let y = module(&poset, &[6, 7, 8]);
    let z = module(&poset, &[7, 8]);
    TwoVeeExample {
        i: Barcode::new(vec![a, b, x]),
        m: Barcode::new(vec![c, d, y, z]),
        x_block: (Barcode::new(vec![x]), Barcode::new(vec![y, z])),
        m_block: (Barcode::new(vec![a, b]), Barcode::new(vec![c, d])),
        poset,
        lam,
    }
}

/// The 1-Vee staircase example: P = [m,x3] with a < b, bars A = [m,x2],
/// B = [m,x1], C = [m]. The supports are pinned by the relation list in
/// `verify_relations`, which must pass before they are used as fixtures.
pub struct StaircaseExample {
    pub poset: Poset,
    pub a: ConvexModule,
    pub b: ConvexModule,
    pub c: ConvexModule,
}

pub fn staircase_example() -> StaircaseExample {
    let poset = Poset::nvee(&[3], (1, 2)).unwrap();
    StaircaseExample {
        a: module(&poset, &[0, 1, 2]),
        b: module(&poset, &[0, 1]),
        c: module(&poset, &[0]),
        poset,
    }
}

impl StaircaseExample {
    /// Re-derives every relation that pins the three supports down.
    pub fn verify_relations(&self) -> Result<(), String> {
        let p = &self.poset;
        let wa = p.weight().a;
        let lam_a = maximal_translation(p, wa).map_err(|e| e.to_string())?;
        let lam_2a = maximal_translation(p, 2 * wa).map_err(|e| e.to_string())?;
        let single = |bc: Barcode| -> Option<ConvexModule> { bc.bars().first().copied() };
        if single(act(p, &self.a, &lam_a)) != Some(self.b) {
            return Err("A.Lambda_a is not B".into());
        }
        if single(act(p, &self.b, &lam_a)) != Some(self.c) {
            return Err("B.Lambda_a is not C".into());
        }
        if single(act(p, &self.a, &lam_2a)) != Some(self.c) {
            return Err("A.Lambda_2a is not C".into());
        }
        if !act(p, &self.b, &lam_2a).is_empty() {
            return Err("B.Lambda_2a is not zero".into());
        }
        let sq = compose(p, &lam_a, &lam_a);
        // Hom(A.Lambda, B.Lambda^2) vanishes, as does the structure pattern
        // of B at Lambda^2.
        if !act(p, &self.b, &sq).is_empty() {
            return Err("B.Lambda_a^2 is not zero".into());
        }
        // Annihilation at heights >= 3a.
        let lam_3a = maximal_translation(p, 3 * wa).map_err(|e| e.to_string())?;
        if !act(p, &self.a, &lam_3a).is_empty() || !act(p, &self.b, &lam_3a).is_empty() {
            return Err("A and B must die at 3a".into());
        }
        Ok(())
    }

    /// The variety point counts along the candidate thresholds.
    pub fn staircase(&self, field: &PrimeField) -> Vec<(u64, u64)> {
        let p = &self.poset;
        let i = Barcode::new(vec![self.a]);
        let m = Barcode::new(vec![self.b]);
        candidate_thresholds(p)
            .into_iter()
            .map(|eps| {
                let lam = maximal_translation(p, eps).unwrap();
                let sys = build_system(p, &i, &m, &lam, &lam);
                (eps, count_points(&sys, field, 12).unwrap())
            })
            .collect()
    }
}

/// A reconstruction target for the partially specified 2-Vee example at
/// Lambda_2a: the four supports are searched for rather than guessed.
pub struct VarietyReconstruction {
    pub poset: Poset,
    pub lam: Translation,
    pub a: ConvexModule,
    pub b: ConvexModule,
    pub c: ConvexModule,
    pub d: ConvexModule,
    pub system: InterleavingSystem,
}

/// Searches the 2-Vee [3,6] for supports A, B, C, D such that the variety
/// of (Lambda_2a, Lambda_2a)-interleavings between A + B and C + D is cut
/// out by exactly the target ideal shape: the six named scalars exist,
/// the two remaining entries are forced zero, and the deduplicated system is
/// { lambda*alpha = 1, mu*beta = 1, alpha*rho + gamma*mu = 0,
///   lambda*gamma + rho*beta = 0 }.
pub fn reconstruct_variety_example() -> Option<VarietyReconstruction> {
    let poset = Poset::nvee(&[3, 6], (1, 3)).unwrap();
    let lam = maximal_translation(&poset, 2).unwrap();
    let sigma = enumerate_sigma(&poset, 16).unwrap();
    let m0 = 0;
    let with_m: Vec<&ConvexModule> = sigma.iter().filter(|s| s.contains(m0)).collect();
    let without_m: Vec<&ConvexModule> = sigma.iter().filter(|s| !s.contains(m0)).collect();

    // The expected normalized system, in build_system variable order:
    // phi vars (0,0)=lambda, (1,0)=rho, (1,1)=mu;
    // psi vars (0,0)=alpha, (1,0)=gamma, (1,1)=beta.
    let expected: Vec<(Vec<(usize, usize)>, u32)> = vec![
        (vec![(0, 0)], 1),
        (vec![(0, 1), (1, 2)], 0),
        (vec![(1, 0), (2, 1)], 0),
        (vec![(2, 2)], 1),
    ];
    let f2 = PrimeField::new(2).unwrap();
    let f3 = PrimeField::new(3).unwrap();

    let sq = compose(&poset, &lam, &lam);
    let pattern = |s: &ConvexModule| -> VertexSet {
        s.support().intersect(
            act(&poset, s, &sq)
                .bars()
                .first()
                .map_or(VertexSet::EMPTY, |b| b.support()),
        )
    };
    // The structure map of the source evaluates to the identity exactly at
    // m and at one height-one branch vertex v: nonzero at {m, v} on the
    // first summand and at {v} on the second.
    let height_one: Vec<Vertex> = poset
        .base_vertices()
        .filter(|&v| poset.branch_height(v) == Some(1))
        .collect();

    for &a in &with_m {
        for &c in &with_m {
            for &b in &without_m {
                for &d in &without_m {
                    let pa = pattern(a);
                    let pb = pattern(b);
                    let ok_pattern = height_one.iter().any(|&v| {
                        pa == VertexSet::from_iter([m0, v]) && pb == VertexSet::singleton(v)
                    });
                    if !ok_pattern {
                        continue;
                    }
                    if !canonical_hom_nonzero(&poset, a, c, &lam)
                        || !canonical_hom_nonzero(&poset, b, c, &lam)
                        || !canonical_hom_nonzero(&poset, b, d, &lam)
                        || !canonical_hom_nonzero(&poset, c, a, &lam)
                        || !canonical_hom_nonzero(&poset, d, a, &lam)
                        || !canonical_hom_nonzero(&poset, d, b, &lam)
                        || canonical_hom_nonzero(&poset, a, d, &lam)
                        || canonical_hom_nonzero(&poset, c, b, &lam)
                    {
                        continue;
                    }
                    let i = Barcode::new(vec![*a, *b]);
                    let m = Barcode::new(vec![*c, *d]);
                    // Barcode sorting must keep (A, B) and (C, D) in order.
                    if i.bars()[0] != *a || m.bars()[0] != *c {
                        continue;
                    }
                    let sys = build_system(&poset, &i, &m, &lam, &lam);
                    if sys.phi_vars != vec![(0, 0), (1, 0), (1, 1)]
                        || sys.psi_vars != vec![(0, 0), (1, 0), (1, 1)]
                    {
                        continue;
                    }
                    if sys.normalized_equations() != expected {
                        continue;
                    }
                    if count_points(&sys, &f2, 12).unwrap() != 2
                        || count_points(&sys, &f3, 12).unwrap() != 12
                    {
                        continue;
                    }
                    return Some(VarietyReconstruction {
                        poset: poset.clone(),
                        lam: lam.clone(),
                        a: *a,
                        b: *b,
                        c: *c,
                        d: *d,
                        system: sys,
                    });
                }
            }
        }
    }
    None
}

/// The suspended six-chain with a fixed non-maximal translation and the
/// two modules whose hom space dies after translating.
pub struct SixChainExample {
    pub poset: Poset,
    pub lam: Translation,
    pub i: ConvexModule,
    pub m: ConvexModule,
}

pub fn six_chain_example() -> SixChainExample {
    let poset = Poset::nvee(&[5], (1, 1)).unwrap();
    // 1 -> 2, 2 -> 3, 3 -> 3, 4 -> 5, 5 -> 6, 6 -> top in the chain's own
    // labels; the listed supports force the top element to leave.
    let lam = Translation::new(&poset, vec![1, 2, 2, 4, 5, 6, 6]).unwrap();
    SixChainExample {
        i: module(&poset, &[3, 4, 5]),
        m: module(&poset, &[2, 3]),
        poset,
        lam,
    }
}
