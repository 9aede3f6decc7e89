//! Numerical verification of Myers-type compactness criteria for the
//! Bakry-Emery Ricci tensor on rotationally symmetric smooth metric measure
//! spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`model_space`] closed forms for the constant-curvature comparison spaces;
//! * [`radial`] warped-product manifolds `dr² + φ(r)² g_{S^{n-1}}` with a radial
//!   weight `f`, and the growth functions used by the criteria;
//! * [`riccati`] the Jacobi/Riccati integrator with conjugate-point and
//!   blow-up events;
//! * [`comparison`] grid verification of the f-mean curvature comparison bounds;
//! * [`criteria`] the explicit compactness constants and criterion evaluation;
//! * [`ambrose`] the divergence-type criterion and the doubling-sequence
//!   blow-up argument.

pub mod ambrose;
pub mod comparison;
pub mod criteria;
mod error;
pub mod model_space;
pub mod numerics;
pub mod radial;
pub mod riccati;

pub use error::{Error, Result};

pub use ambrose::{
    ambrose_diagnosis, blowup_sequence_verify, check_fprime_condition, partial_ricci_integral, sequence_times,
    AmbroseReport, BlowupSequenceReport, DivergenceTrend, SequenceStatus, SequenceTerm,
};
pub use comparison::{
    verify_ibp_chain, verify_mf_bounds, verify_mf_bounds_k, verify_thm21, verify_thm22, ComparisonReport, GridOptions,
    GridPoint, Verdict,
};
pub use criteria::{
    cgt_diameter, const_c1, const_c2, const_c3, const_c4, const_c5, const_c6, epsilon_optimize, evaluate_criterion,
    evaluate_criterion_on_grid, qiu_delta2, tail_integral, wan_constant, C3Convention, CompactnessVerdict,
    CriterionParams, OptimizedVariant, Variant, CRITERION_GRID_POINTS,
};
pub use model_space::{m_h_effective, valid_range, ModelSpaceParams, Window};
pub use radial::{GrowthFunction, RadialManifold, WarpProfile, WeightFunction, R_MIN};
pub use riccati::{
    constant_ric_oracle, integrate_jacobi, integrate_riccati_from, RiccatiTrajectory, TrajectorySample, DEFAULT_STEP,
};
