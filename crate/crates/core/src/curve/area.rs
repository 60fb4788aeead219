//! Signed area swept by a curve as seen from a fixed apex.

use std::sync::Arc;

use super::affine::AffineCurve;
use super::vector::{wedge, PlaneVector};
use super::CurveError;
use crate::integrate::{gauss_kronrod, QuadTolerance, Tolerance};
use crate::odekernel::{constant_fn, solve_ivp, Coefficient, IVPSolution, LinearOperator};

/// `A(s) = 1/2 int_a^s (c(σ) - p0) ∧ c'(σ) dσ`, positive where the curve
/// turns counterclockwise around `p0`.
#[derive(Debug, Clone)]
pub struct AreaFunction {
    curve: AffineCurve,
    a: f64,
    p0: PlaneVector,
}

pub fn area_function(curve: &AffineCurve, a: f64, p0: PlaneVector) -> Result<AreaFunction, CurveError> {
    curve.checked_jet(a)?;
    Ok(AreaFunction {
        curve: curve.clone(),
        a,
        p0,
    })
}

impl AreaFunction {
    pub fn curve(&self) -> &AffineCurve {
        &self.curve
    }

    pub fn base(&self) -> f64 {
        self.a
    }

    pub fn apex(&self) -> PlaneVector {
        self.p0
    }

    /// `A(s)` by adaptive quadrature of the defining integral.
    pub fn eval(&self, s: f64) -> Result<f64, CurveError> {
        self.curve.checked_jet(s)?;
        let v = gauss_kronrod(
            |t| {
                let j = self.curve.jet(t);
                wedge(j[0] - self.p0, j[1])
            },
            self.a,
            s,
            QuadTolerance {
                abs: 1e-13,
                rel: 1e-13,
            },
        )?;
        Ok(0.5 * v)
    }

    /// `A'(s) = 1/2 (c(s) - p0) ∧ c'(s)`.
    pub fn derivative(&self, s: f64) -> f64 {
        let j = self.curve.jet(s);
        0.5 * wedge(j[0] - self.p0, j[1])
    }

    /// `A''(s) = 1/2 (c(s) - p0) ∧ c''(s)`.
    pub fn second_derivative(&self, s: f64) -> f64 {
        let j = self.curve.jet(s);
        0.5 * wedge(j[0] - self.p0, j[2])
    }

    /// `(A(a), A'(a), A''(a))`.
    pub fn initial_jet(&self) -> [f64; 3] {
        [0.0, self.derivative(self.a), self.second_derivative(self.a)]
    }

    /// The same function computed as the solution of
    /// `A''' + kappa A' = 1/2` with the initial jet at the base point.
    pub fn ode_solution(&self, tol: Tolerance) -> Result<IVPSolution, CurveError> {
        let c = self.curve.clone();
        let kappa = Coefficient::Function(Arc::new(move |s| c.curvature(s)));
        let op = LinearOperator::single_term(3, 1, kappa, self.curve.domain())?;
        Ok(solve_ivp(&op, constant_fn(0.5), self.a, &self.initial_jet(), tol)?)
    }
}

/// `max |A''' + kappa A' - 1/2|` over `grid`. `A'` is a central difference
/// of the quadrature values and `A'''` a second difference of the closed
/// form `A'`.
pub fn area_ode_residual(area: &AreaFunction, grid: &[f64]) -> Result<f64, CurveError> {
    let dom = area.curve.domain();
    let h1 = 1e-4 * dom.len().max(1.0);
    let h3 = 1e-3 * dom.len().max(1.0);
    let mut worst: f64 = 0.0;
    for &s in grid {
        let s = s.clamp(dom.lo + h3, dom.hi - h3);
        let d1 = (area.eval(s + h1)? - area.eval(s - h1)?) / (2.0 * h1);
        let d3 = (area.derivative(s + h3) - 2.0 * area.derivative(s) + area.derivative(s - h3)) / (h3 * h3);
        let r = (d3 + area.curve.curvature(s) * d1 - 0.5).abs();
        worst = worst.max(r);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::frame::AdaptedFrame;
    use crate::specialfns::{abar, DomainInterval};

    #[test]
    fn parabola_area() {
        let c = AffineCurve::constant_curvature(0.0, 0.0, AdaptedFrame::standard(), DomainInterval::new(0.0, 3.0)).unwrap();
        let a = area_function(&c, 0.0, PlaneVector::ZERO).unwrap();
        assert_eq!(a.eval(0.0).unwrap(), 0.0);
        for s in [0.5, 2.0, 3.0] {
            assert!((a.eval(s).unwrap() - s * s * s / 12.0).abs() < 1e-12);
        }
        let ode = a.ode_solution(Tolerance::default()).unwrap();
        assert!((ode.value(2.0).unwrap() - 8.0 / 12.0).abs() < 1e-10);
        assert!(area_ode_residual(&a, &c.domain().grid(11)).unwrap() < 1e-6);
    }

    #[test]
    fn constant_curvature_area_is_abar() {
        for k in [-1.3, 0.8] {
            let c = AffineCurve::constant_curvature(k, 0.0, AdaptedFrame::standard(), DomainInterval::new(0.0, 2.0)).unwrap();
            let a = area_function(&c, 0.0, c.position(0.0)).unwrap();
            assert!((a.eval(1.7).unwrap() - abar(k, 1.7)).abs() < 1e-12);
        }
    }
}
