//! Non-degenerate conics as constant curvature curves.

use serde::{Deserialize, Serialize};

use super::affine::AffineCurve;
use super::frame::AdaptedFrame;
use super::vector::{wedge, PlaneVector};
use super::CurveError;
use crate::specialfns::DomainInterval;

/// `a x^2 + b xy + c y^2 + d x + e y + f = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl Conic {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Self {
        Conic { a, b, c, d, e, f }
    }

    pub fn eval(&self, p: PlaneVector) -> f64 {
        let (x, y) = (p.x, p.y);
        self.a * x * x + self.b * x * y + self.c * y * y + self.d * x + self.e * y + self.f
    }

    pub fn gradient(&self, p: PlaneVector) -> PlaneVector {
        PlaneVector::new(
            2.0 * self.a * p.x + self.b * p.y + self.d,
            self.b * p.x + 2.0 * self.c * p.y + self.e,
        )
    }

    /// Determinant of the quadratic part `[[a, b/2], [b/2, c]]`.
    pub fn quadratic_det(&self) -> f64 {
        self.a * self.c - 0.25 * self.b * self.b
    }

    /// Determinant of the full symmetric 3x3 matrix.
    pub fn full_det(&self) -> f64 {
        let (a, b, c, d, e, f) = (self.a, self.b / 2.0, self.c, self.d / 2.0, self.e / 2.0, self.f);
        a * (c * f - e * e) - b * (b * f - e * d) + d * (b * e - c * d)
    }

    /// Constant affine curvature `det A / |det M|^(2/3)`; fails for degenerate conics.
    pub fn affine_curvature(&self) -> Result<f64, CurveError> {
        let m = self.full_det();
        if m == 0.0 || !m.is_finite() {
            return Err(CurveError::Degenerate("conic is degenerate".into()));
        }
        Ok(self.quadratic_det() / m.abs().powf(2.0 / 3.0))
    }

    /// Quadratic form `v^T (2A) v`.
    fn second_form(&self, v: PlaneVector) -> f64 {
        2.0 * self.a * v.x * v.x + 2.0 * self.b * v.x * v.y + 2.0 * self.c * v.y * v.y
    }

    /// Direction of the affine normal at `p`: towards the center, or along
    /// the axis for a parabola.
    fn normal_direction(&self, p: PlaneVector) -> PlaneVector {
        let det = self.quadratic_det();
        if det != 0.0 {
            let rhs = PlaneVector::new(-self.d / 2.0, -self.e / 2.0);
            let h = self.b / 2.0;
            let center = PlaneVector::new((rhs.x * self.c - h * rhs.y) / det, (self.a * rhs.y - h * rhs.x) / det);
            center - p
        } else if self.a != 0.0 || self.b != 0.0 {
            PlaneVector::new(-self.b / 2.0, self.a)
        } else {
            PlaneVector::new(-self.c, self.b / 2.0)
        }
    }

    /// Unit affine speed parameterization with `c(0) = p`, as a constant
    /// curvature curve on `domain`. The direction of travel is the one that
    /// makes the curve positively oriented.
    pub fn unit_speed_curve(&self, p: PlaneVector, domain: DomainInterval) -> Result<AffineCurve, CurveError> {
        let k = self.affine_curvature()?;
        let g = self.gradient(p);
        let scale = 1.0 + self.a.abs() + self.b.abs() + self.c.abs() + self.d.abs() + self.e.abs() + self.f.abs();
        if self.eval(p).abs() > 1e-9 * scale * (1.0 + p.dot(p)) {
            return Err(CurveError::NotOnCurve { x: p.x, y: p.y });
        }
        let t_hat = PlaneVector::new(-g.y, g.x);
        let h = self.second_form(t_hat);
        if h == 0.0 || t_hat.norm() == 0.0 {
            return Err(CurveError::Degenerate(format!("singular point ({}, {})", p.x, p.y)));
        }
        let lambda = (1.0 / h).cbrt();
        let tangent = lambda * t_hat;
        let d = self.normal_direction(p);
        let gd = g.dot(d);
        if gd == 0.0 {
            return Err(CurveError::Degenerate("normal direction is tangent".into()));
        }
        let mu = -lambda * lambda * h / gd;
        let normal = mu * d;
        debug_assert!((wedge(tangent, normal) - 1.0).abs() < 1e-9);
        AffineCurve::constant_curvature(k, 0.0, AdaptedFrame::new(p, tangent, normal), domain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curvature_of_standard_conics() {
        assert!((Conic::new(1.0, 0.0, 1.0, 0.0, 0.0, -1.0).affine_curvature().unwrap() - 1.0).abs() < 1e-15);
        let r: f64 = 2.0;
        let circle = Conic::new(1.0, 0.0, 1.0, 0.0, 0.0, -r * r);
        assert!((circle.affine_curvature().unwrap() - r.powf(-4.0 / 3.0)).abs() < 1e-15);
        for k in [-2.0, 0.0, 0.5] {
            let c = Conic::new(1.0, 0.0, k, 0.0, -2.0, 0.0);
            assert!((c.affine_curvature().unwrap() - k).abs() < 1e-15);
        }
        let hyp = Conic::new(1.0, -1.0, -1.0, 0.0, 0.0, -1.0);
        let alpha2 = 2f64.powf(-2.0 / 3.0) * 5f64.cbrt();
        assert!((hyp.affine_curvature().unwrap() + alpha2).abs() < 1e-14);
        assert!(Conic::new(1.0, 0.0, -1.0, 0.0, 0.0, 0.0).affine_curvature().is_err());
    }

    #[test]
    fn hyperbola_parameterization() {
        let hyp = Conic::new(1.0, -1.0, -1.0, 0.0, 0.0, -1.0);
        let c = hyp.unit_speed_curve(PlaneVector::new(1.0, 0.0), DomainInterval::new(-2.0, 5.0)).unwrap();
        let alpha = 2f64.powf(-1.0 / 3.0) * 5f64.powf(1.0 / 6.0);
        let s5 = 5f64.sqrt();
        for s in [-2.0, 0.0, 1.0, 4.0] {
            let u = alpha * s;
            let want = PlaneVector::new(u.cosh() - u.sinh() / s5, -2.0 * u.sinh() / s5);
            assert!((c.position(s) - want).norm() < 1e-12 * want.norm().max(1.0));
            assert!(hyp.eval(c.position(s)).abs() < 1e-10 * want.dot(want).max(1.0));
        }
    }

    #[test]
    fn parabola_and_ellipse() {
        // y = x^2 / 2 as a conic
        let par = Conic::new(1.0, 0.0, 0.0, 0.0, -2.0, 0.0);
        let c = par.unit_speed_curve(PlaneVector::ZERO, DomainInterval::new(-1.0, 1.0)).unwrap();
        assert!((c.position(0.5) - PlaneVector::new(0.5, 0.125)).norm() < 1e-15);
        let ell = Conic::new(1.0, 0.0, 4.0, 0.0, 0.0, -4.0);
        let c = ell.unit_speed_curve(PlaneVector::new(2.0, 0.0), DomainInterval::new(0.0, 3.0)).unwrap();
        for s in [0.5, 2.5] {
            assert!(ell.eval(c.position(s)).abs() < 1e-12);
        }
        assert!(ell.unit_speed_curve(PlaneVector::new(0.0, 0.0), DomainInterval::new(0.0, 1.0)).is_err());
    }
}
