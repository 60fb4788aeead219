//! Adapted affine coordinates at a curve point and the graphing set.

use serde::Serialize;

use super::affine::AffineCurve;
use super::vector::{wedge, PlaneVector};
use super::CurveError;
use crate::roots::bisect;
use crate::specialfns::DomainInterval;

/// Origin with tangent and normal directions; coordinates `(xi, eta)` of a
/// point `v` solve `v - origin = xi * tangent + eta * normal`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdaptedFrame {
    pub origin: PlaneVector,
    pub tangent: PlaneVector,
    pub normal: PlaneVector,
}

impl AdaptedFrame {
    pub fn new(origin: PlaneVector, tangent: PlaneVector, normal: PlaneVector) -> Self {
        AdaptedFrame { origin, tangent, normal }
    }

    /// Origin at zero with the standard basis.
    pub fn standard() -> Self {
        AdaptedFrame::new(PlaneVector::ZERO, PlaneVector::new(1.0, 0.0), PlaneVector::new(0.0, 1.0))
    }

    /// `tangent ∧ normal`.
    pub fn determinant(&self) -> f64 {
        wedge(self.tangent, self.normal)
    }

    pub fn to_adapted(&self, v: PlaneVector) -> PlaneVector {
        let d = v - self.origin;
        let det = self.determinant();
        PlaneVector::new(wedge(d, self.normal) / det, wedge(self.tangent, d) / det)
    }

    pub fn from_adapted(&self, xi: f64, eta: f64) -> PlaneVector {
        self.origin + xi * self.tangent + eta * self.normal
    }

    /// Components of a direction (no translation).
    pub fn direction_to_adapted(&self, v: PlaneVector) -> PlaneVector {
        let det = self.determinant();
        PlaneVector::new(wedge(v, self.normal) / det, wedge(self.tangent, v) / det)
    }
}

/// Frame at `c(s0)` spanned by `c'(s0)` and `c''(s0)`.
pub fn adapted_frame(curve: &AffineCurve, s0: f64) -> Result<AdaptedFrame, CurveError> {
    let j = curve.checked_jet(s0)?;
    Ok(AdaptedFrame::new(j[0], j[1], j[2]))
}

/// The connected component of `s0` in `{ s : x'(s) > 0 }`, with `x` the first
/// adapted coordinate at `c(s0)`. Ends are domain ends or zeros of `x'`
/// located to 1e-10.
pub fn graphing_parameter_set(curve: &AffineCurve, s0: f64) -> Result<DomainInterval, CurveError> {
    let frame = adapted_frame(curve, s0)?;
    let dom = curve.domain();
    let xprime = |s: f64| frame.direction_to_adapted(curve.jet(s)[1]).x;
    let step = 1e-3 * dom.len();
    let scan = |dir: f64, end: f64| -> f64 {
        if step == 0.0 {
            return end;
        }
        let mut prev = s0;
        loop {
            let next = if dir > 0.0 { (prev + step).min(end) } else { (prev - step).max(end) };
            if xprime(next) <= 0.0 {
                return bisect(xprime, prev.min(next), prev.max(next), 1e-10);
            }
            if next == end {
                return end;
            }
            prev = next;
        }
    };
    let lo = scan(-1.0, dom.lo);
    let hi = scan(1.0, dom.hi);
    Ok(DomainInterval::new(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn frame_round_trip() {
        let f = AdaptedFrame::new(PlaneVector::new(1.0, 2.0), PlaneVector::new(2.0, 1.0), PlaneVector::new(1.0, 1.0));
        assert_eq!(f.determinant(), 1.0);
        let v = PlaneVector::new(-0.3, 4.0);
        let a = f.to_adapted(v);
        assert!((f.from_adapted(a.x, a.y) - v).norm() < 1e-14);
        assert_eq!(f.to_adapted(f.origin), PlaneVector::ZERO);
    }

    #[test]
    fn circle_frame_and_graphing_set() {
        let frame = AdaptedFrame::new(PlaneVector::new(1.0, 0.0), PlaneVector::new(0.0, 1.0), PlaneVector::new(-1.0, 0.0));
        let c = AffineCurve::constant_curvature(1.0, 0.0, frame, DomainInterval::new(-3.0, 3.0)).unwrap();
        let f = adapted_frame(&c, 0.0).unwrap();
        assert!((f.tangent - PlaneVector::new(0.0, 1.0)).norm() < 1e-15);
        assert!((f.normal - PlaneVector::new(-1.0, 0.0)).norm() < 1e-15);
        let g = graphing_parameter_set(&c, 0.0).unwrap();
        assert!((g.lo + FRAC_PI_2).abs() < 1e-9 && (g.hi - FRAC_PI_2).abs() < 1e-9, "{g:?}");
    }

    #[test]
    fn parabola_graphs_everywhere() {
        let c = AffineCurve::constant_curvature(0.0, 0.0, AdaptedFrame::standard(), DomainInterval::new(-2.0, 5.0)).unwrap();
        assert_eq!(graphing_parameter_set(&c, 1.0).unwrap(), DomainInterval::new(-2.0, 5.0));
    }
}
