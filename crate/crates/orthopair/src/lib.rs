//! Exact pairings of free modules on finite topological spaces.
//!
//! The crate computes with matrices over the integers and rationals without
//! rounding: Smith and Hermite normal forms, kernels, images, saturations and
//! complements, sheaf-style module families on finite spaces, bilinear
//! pairings with their orthogonals and radicals, and the hyperbolic
//! decomposition of a totally isotropic submodule under a nondegenerate skew
//! pairing.

pub mod error;
pub mod io;
pub mod matrix;
pub mod ops;
pub mod pairing;
pub mod sample;
pub mod scalar;
pub mod sheaf;
pub mod snf;
pub mod submodule;
pub mod suites;
pub mod topology;
pub mod witt;

pub use error::{Error, Result};
pub use io::{
    matrix_from_json, matrix_to_json, parse_workspace, Repro, SubmoduleFamily, Workspace,
};
pub use matrix::ExactMatrix;
pub use ops::{run_op, validate_report, value_matches, OPERATIONS};
pub use pairing::{
    orthogonal_sum, CodimReport, DualProjections, DualRestriction, Pairing, PairingViolation,
};
pub use scalar::{gcd_ext, Ring, Scalar};
pub use sheaf::{direct_sum, PresheafViolation, SheafAxiomReport, SheafModule};
pub use snf::{column_hermite, inverse, rank, same_span, smith_normal_form, Smith};
pub use submodule::{
    complement, dimension_formula_check, factor_through_injection, factor_through_surjection,
    image_basis, intersect, kernel_basis, quotient_presentation, saturate, solve, DimensionReport,
    QuotientPresentation, SubmoduleBasis,
};
pub use suites::{
    default_cases, default_max_rank, default_ring, gauss_det, gauss_rank, minor_invariant_factors,
    run_suite, SuiteFailure, SuiteOutcome, SUITE_NAMES,
};
pub use topology::{FiniteSpace, TopologyViolation};
pub use witt::{
    decompose_at, find_partner, hyperbolic_decomposition, split_nonisotropic, verify_witt,
    HyperbolicPlane, WittCheck, WittDecomposition, WittResult,
};

// Every code block in the guide compiles and runs under `cargo test --doc`,
// one module per chapter so a failure names its source.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/scalars.md")]
    pub mod scalars {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    pub mod matrices {}
    #[doc = include_str!("../../../book/src/submodules.md")]
    pub mod submodules {}
    #[doc = include_str!("../../../book/src/sheaves.md")]
    pub mod sheaves {}
    #[doc = include_str!("../../../book/src/pairings.md")]
    pub mod pairings {}
    #[doc = include_str!("../../../book/src/witt.md")]
    pub mod witt {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
