//! Whole-space Poisson solver on a uniform grid: `L²` projection of the
//! source onto piecewise polynomials, exact near field through precomputed
//! interaction matrices, and a solid-harmonics fast multipole method for the
//! far field. The result is the projection of `u = G ⋆ f_h` onto piecewise
//! polynomials two degrees higher.
//!
//! The FMM runs in double precision; only the interaction matrices carry
//! high precision.

mod grid;
mod harmonics;
mod solve;
mod study;
mod tree;

pub use grid::{
    build_grid, mollifier, mollifier_case, mollifier_rhs, CellPredicate, Grid, ScalarField, SourceField,
    SUPPORT_SAMPLES,
};
pub use harmonics::{harmonic_index, regular_harmonics, singular_harmonics, SolidHarmonics};
pub use solve::{
    cell_multipoles, error_norms, error_points, far_coefficients, l2p_matrix, near_coefficients, p2m_matrix,
    project_source, projection_points, solve, solve_coefficients, CellCoefficients, Diagnostics, ErrorNorms, NearField,
    Solution, Timings,
};
pub use study::{
    convergence_study, fit_exponent, observed_orders, write_errors_csv, write_timings_csv, StudyConfig, StudyRow,
};
pub use tree::{far_partners, fmm_pass, Expansion, ExpansionKind};
