//! Exact multivariate polynomial algebra for the third-level system.

pub mod elimination;
pub mod eval;
pub mod groebner;
pub mod ideal;
pub mod json;
pub mod poly;
pub mod systems;

pub use elimination::{bareiss_eliminate, minors, numeric_bottom_right, numeric_consistent, EfDerivation, PolyMatrix};
pub use eval::{eval_poly, Assignment, CompiledPoly};
pub use groebner::{groebner, is_groebner_basis};
pub use ideal::{
    fp_images, ideal_intersect, ideal_member, membership_cofactors, q_ideal, verify_decomposition_certificate,
    CertificateReport, ExactCofactorSummary, Ideal, MembershipFailure, QIdeal, DEFAULT_PRIMES,
};
pub use json::PolyFile;
pub use poly::{FpPoly, Monomial, MonomialOrder, MultiPoly, QPoly, VarTable};
pub use systems::{
    build_augmented_system, build_linear_system, build_semiclifford_system, build_third_level_system, canonical_vars,
};
