//! Small numerical kernels: adaptive quadrature, golden-section search and
//! cubic interpolation.

pub mod golden;
pub mod interp;
pub mod quadrature;

pub use golden::{golden_section_min, Minimum};
pub use interp::{CubicSpline, MonotoneCubic};
pub use quadrature::{integrate, Quadrature};
