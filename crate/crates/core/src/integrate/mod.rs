//! Numerical integration back ends: an adaptive Dormand–Prince integrator
//! with dense evaluation, and adaptive Gauss–Kronrod quadrature.

mod quad;
mod rk;

pub use quad::{gauss_kronrod, gauss_kronrod_vec, QuadError, QuadTolerance};
pub use rk::{integrate, DenseTrajectory, OdeError, OdeRhs, Tolerance};
