//! Persistence modules over suspended n-Vee posets: exact computation of the
//! interleaving distance by finite-field witness search, the bottleneck
//! distance by certified matchings, and machine verification that the two
//! agree.
//!
//! The pipeline, bottom-up: [`poset`] builds weighted suspended posets and
//! their two displacement costs; [`translation`] provides the monoid of
//! inflationary monotone maps with its closed-form maximal elements;
//! [`convex`] is the calculus of convex modules (supports, homs, trims,
//! widths); [`chain`] does exact linear algebra for representations of
//! totally ordered shapes; [`interleaving`] turns commuting triangles into
//! bilinear systems and searches them over prime fields; [`matching`]
//! handles epsilon-matchings and converts interleavings to matchings and
//! back; [`harness`] verifies the isometry on seeded instances; and
//! [`fixtures`] holds the worked examples used as golden tests.

pub mod chain;
pub mod convex;
pub mod field;
pub mod fixtures;
pub mod harness;
pub mod interleaving;
pub mod matching;
pub mod poset;
pub mod translation;

pub use convex::{
    act, act_barcode, branch_restrict, canonical_hom, compose_canonical, enumerate_sigma,
    hom_dim, is_convex_support, trim_minus, trim_plus, width, Barcode, BarcodeSpec, CanonicalHom,
    ConvexError, ConvexModule,
};
pub use field::{FieldError, Matrix, PrimeField};
pub use interleaving::{
    build_system, check_interleaving, count_points, distance_with_witness, interleaving_distance,
    pairwise_convex_distance, solve_over_field, DistanceWitness, InterleavingError,
    InterleavingSystem, ScalarMorphism, SolveConfig, SolveOutcome,
};
pub use matching::{
    bottleneck_distance, check_admissibility, diagonal_interleaving_from_matching,
    epsilon_matching, half_matching, induced_matching_from_interleaving, Matching, MatchingError,
};
pub use poset::{
    NVeeRejection, NVeeShape, Poset, PosetError, PosetSpec, Vertex, VertexSet, Weight,
};
pub use translation::{
    candidate_thresholds, compose, enumerate_translations, height, height_spectrum,
    maximal_translation, Translation, TranslationError,
};
