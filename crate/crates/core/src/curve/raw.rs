//! Plane curves in an arbitrary regular parameter, and their affine arc length.

use std::sync::Arc;

use super::vector::{wedge, AffineMap, PlaneVector};
use super::CurveError;
use crate::integrate::{gauss_kronrod, QuadTolerance};
use crate::poly::Polynomial;

/// Position and derivatives of orders 1 through 4.
pub type Jet4 = [PlaneVector; 5];

/// A curve `t -> c(t)` with four derivatives.
pub trait ParametricCurve: Send + Sync {
    fn jet(&self, t: f64) -> Jet4;

    fn point(&self, t: f64) -> PlaneVector {
        self.jet(t)[0]
    }

    /// `c'(t) ∧ c''(t)`.
    fn speed_wedge(&self, t: f64) -> f64 {
        let j = self.jet(t);
        wedge(j[1], j[2])
    }
}

/// A curve given by a closure returning its jet.
#[derive(Clone)]
pub struct FnCurve(pub Arc<dyn Fn(f64) -> Jet4 + Send + Sync>);

impl ParametricCurve for FnCurve {
    fn jet(&self, t: f64) -> Jet4 {
        (self.0)(t)
    }
}

/// The graph `t -> (t, f(t))` of a function given with four derivatives.
#[derive(Clone)]
pub struct GraphCurve(pub Arc<dyn Fn(f64) -> [f64; 5] + Send + Sync>);

impl GraphCurve {
    pub fn polynomial(p: Polynomial) -> Self {
        GraphCurve(Arc::new(move |x| p.jet::<5>(x)))
    }
}

impl ParametricCurve for GraphCurve {
    fn jet(&self, t: f64) -> Jet4 {
        let f = (self.0)(t);
        [
            PlaneVector::new(t, f[0]),
            PlaneVector::new(1.0, f[1]),
            PlaneVector::new(0.0, f[2]),
            PlaneVector::new(0.0, f[3]),
            PlaneVector::new(0.0, f[4]),
        ]
    }
}

/// `center + (a cos t, b sin t)`.
#[derive(Debug, Clone, Copy)]
pub struct Ellipse {
    pub center: PlaneVector,
    pub a: f64,
    pub b: f64,
}

impl ParametricCurve for Ellipse {
    fn jet(&self, t: f64) -> Jet4 {
        let (s, c) = t.sin_cos();
        let (a, b) = (self.a, self.b);
        [
            self.center + PlaneVector::new(a * c, b * s),
            PlaneVector::new(-a * s, b * c),
            PlaneVector::new(-a * c, -b * s),
            PlaneVector::new(a * s, -b * c),
            PlaneVector::new(a * c, b * s),
        ]
    }
}

/// A curve moved by an affine map.
#[derive(Clone)]
pub struct MovedCurve<C> {
    pub inner: C,
    pub motion: AffineMap,
}

impl<C: ParametricCurve> ParametricCurve for MovedCurve<C> {
    fn jet(&self, t: f64) -> Jet4 {
        let j = self.inner.jet(t);
        [
            self.motion.apply(j[0]),
            self.motion.linear(j[1]),
            self.motion.linear(j[2]),
            self.motion.linear(j[3]),
            self.motion.linear(j[4]),
        ]
    }
}

impl<C: ParametricCurve + ?Sized> ParametricCurve for Arc<C> {
    fn jet(&self, t: f64) -> Jet4 {
        (**self).jet(t)
    }
}

const ORIENTATION_SAMPLES: usize = 1001;

/// Check `c' ∧ c'' > 0` on a sample grid of `[t0, t1]`.
pub fn check_orientation(curve: &dyn ParametricCurve, t0: f64, t1: f64) -> Result<(), CurveError> {
    let n = ORIENTATION_SAMPLES;
    for i in 0..n {
        let t = t0 + (t1 - t0) * i as f64 / (n - 1) as f64;
        let w = curve.speed_wedge(t);
        if !(w > 0.0) {
            return Err(CurveError::Orientation { t, wedge: w });
        }
    }
    Ok(())
}

/// `int_{t0}^{t1} (c' ∧ c'')^(1/3) dt` for a positively oriented convex arc.
pub fn affine_arclength(curve: &dyn ParametricCurve, t0: f64, t1: f64) -> Result<f64, CurveError> {
    if !(t0 <= t1) {
        return Err(CurveError::Invalid(format!("parameter interval [{t0}, {t1}] is empty")));
    }
    check_orientation(curve, t0, t1)?;
    let mut bad: Option<(f64, f64)> = None;
    let v = gauss_kronrod(
        |t| {
            let w = curve.speed_wedge(t);
            if w > 0.0 {
                w.cbrt()
            } else {
                bad.get_or_insert((t, w));
                f64::NAN
            }
        },
        t0,
        t1,
        QuadTolerance::default(),
    );
    if let Some((t, wedge)) = bad {
        return Err(CurveError::Orientation { t, wedge });
    }
    Ok(v?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_length() {
        let c = GraphCurve::polynomial(Polynomial::new(vec![0.0, 0.0, 0.5]));
        assert!((affine_arclength(&c, 0.0, 5.0).unwrap() - 5.0).abs() < 1e-12);
        let c2 = GraphCurve::polynomial(Polynomial::new(vec![0.0, 0.0, 1.0]));
        // (t, t^2) has c' ∧ c'' = 2
        assert!((affine_arclength(&c2, 0.0, 1.0).unwrap() - 2f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn circle_length() {
        let c = Ellipse {
            center: PlaneVector::ZERO,
            a: 1.0,
            b: 1.0,
        };
        let l = affine_arclength(&c, 0.0, std::f64::consts::TAU).unwrap();
        assert!((l - std::f64::consts::TAU).abs() < 1e-11);
        let r: f64 = 2.0;
        let big = Ellipse {
            center: PlaneVector::ZERO,
            a: r,
            b: r,
        };
        let l = affine_arclength(&big, 0.0, std::f64::consts::TAU).unwrap();
        assert!((l - std::f64::consts::TAU * r.powf(2.0 / 3.0)).abs() < 1e-10);
    }

    #[test]
    fn wrong_orientation_is_rejected() {
        let c = GraphCurve::polynomial(Polynomial::new(vec![0.0, 0.0, -0.5]));
        assert!(matches!(affine_arclength(&c, 0.0, 1.0), Err(CurveError::Orientation { .. })));
        let cubic = GraphCurve::polynomial(Polynomial::new(vec![0.0, 0.0, 0.0, 1.0]));
        assert!(affine_arclength(&cubic, -1.0, 1.0).is_err());
    }
}
