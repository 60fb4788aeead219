//! Affine geometry of convex plane curves.

mod affine;
mod area;
mod conic;
mod frame;
mod raw;
mod vector;

use thiserror::Error;

use crate::integrate::{OdeError, QuadError};
use crate::odekernel::KernelError;

pub use affine::{affine_curvature_at, curvature_from_graph, reconstruct_from_curvature, reparam_unit_speed, AffineCurve, Jet3};
pub use area::{area_function, area_ode_residual, AreaFunction};
pub use conic::Conic;
pub use frame::{adapted_frame, graphing_parameter_set, AdaptedFrame};
pub use raw::{affine_arclength, check_orientation, Ellipse, FnCurve, GraphCurve, Jet4, MovedCurve, ParametricCurve};
pub use vector::{wedge, AffineMap, PlaneVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("curve is not positively oriented at t = {t} (c' ∧ c'' = {wedge})")]
    Orientation { t: f64, wedge: f64 },
    #[error("graph is not convex at x = {x} (f'' = {f2})")]
    Convexity { x: f64, f2: f64 },
    #[error("parameter {s} outside [{lo}, {hi}]")]
    OutsideDomain { s: f64, lo: f64, hi: f64 },
    #[error("point ({x}, {y}) is not on the curve")]
    NotOnCurve { x: f64, y: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}
