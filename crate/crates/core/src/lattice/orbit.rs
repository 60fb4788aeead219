//! Orbits of evenly spaced lattice points under a curve- and
//! lattice-preserving motion.

use num_traits::ToPrimitive;
use serde::Serialize;

use super::exact::{point_to_f64, rat_to_f64, ExactAffine, ExactPoint, ImplicitPoly};
use super::{fundamental_area, motion_preserves_lattice, triangle_multiplier, Lattice, LatticeError, LatticePoint, LatticePointSet};
use crate::curve::AffineCurve;
use crate::report::Hypothesis;
use crate::specialfns::{hk, DomainInterval};

/// Spacing tolerance in arc length units.
const SPACING_TOL: f64 = 1e-9;
const RELATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct OrbitCertificate {
    /// Common affine distance `L` between consecutive seed points.
    pub spacing: f64,
    pub curvature: f64,
    #[serde(skip)]
    pub motion: ExactAffine,
    /// Trace of the linear part of the motion.
    pub trace: f64,
    pub points: LatticePointSet,
    /// `H_{k0}(L) - A_L / 2`.
    pub relation_residual: f64,
    pub checks: Vec<Hypothesis>,
}

impl OrbitCertificate {
    pub fn verified(&self) -> bool {
        self.checks.iter().all(|h| h.holds)
    }
}

/// Starting from four evenly spaced lattice points on a constant curvature
/// curve with `Area(p2 p3 p4) = A_L / 2`, build the motion `p_j -> p_{j+1}`
/// exactly and follow its orbit for `count` points. Each orbit point is
/// checked for lattice membership (exactly), for lying on the curve at the
/// expected parameter, and against `implicit` when given.
pub fn equal_spaced_orbit(
    curve: &AffineCurve,
    lat: &Lattice,
    seed: [(i64, i64); 4],
    count: usize,
    implicit: Option<&ImplicitPoly>,
) -> Result<OrbitCertificate, LatticeError> {
    let k0 = curve
        .constant_curvature_value()
        .ok_or_else(|| LatticeError::Invalid("curve must have constant curvature".into()))?;
    let exact: Vec<ExactPoint> = seed
        .iter()
        .map(|&(m, n)| lat.exact_lattice_point(m, n))
        .collect::<Option<_>>()
        .ok_or_else(|| LatticeError::Inexact("lattice has no exact generators".into()))?;
    let mut checks = Vec::new();

    let params: Vec<Option<f64>> = exact.iter().map(|p| curve.locate(point_to_f64(p))).collect();
    checks.push(Hypothesis::new(
        "seed points on the curve",
        params.iter().all(Option::is_some),
        format!("{params:?}"),
    ));
    let params: Vec<f64> = params.into_iter().map(|s| s.unwrap_or(f64::NAN)).collect();
    let gaps: Vec<f64> = params.windows(2).map(|w| w[1] - w[0]).collect();
    let spacing = gaps.iter().sum::<f64>() / 3.0;
    let even = gaps.iter().all(|g| *g > 0.0 && (g - spacing).abs() <= SPACING_TOL);
    checks.push(Hypothesis::new(
        "seed evenly spaced in increasing order",
        even,
        format!("gaps {gaps:?}"),
    ));
    let half_cell = triangle_multiplier(seed[1], seed[2], seed[3]) == Ok(1);
    checks.push(Hypothesis::new(
        "Area(p2 p3 p4) = A_L / 2",
        half_cell,
        format!("multiplier {:?}", triangle_multiplier(seed[1], seed[2], seed[3])),
    ));

    let src = [exact[0].clone(), exact[1].clone(), exact[2].clone()];
    let dst = [exact[1].clone(), exact[2].clone(), exact[3].clone()];
    let motion = ExactAffine::from_correspondences(&src, &dst).ok_or(LatticeError::Degenerate)?;
    let mc = motion_preserves_lattice(&motion, lat, [seed[0], seed[1], seed[2]])?;
    checks.push(Hypothesis::new(
        "motion is special and preserves the lattice",
        mc.preserves && mc.generators_mapped_in,
        format!("{mc:?}"),
    ));
    let fourth = motion.apply(&exact[2]) == exact[3];
    checks.push(Hypothesis::new("motion maps p3 to p4", fourth, ""));

    let s1 = params[0];
    let mut points = LatticePointSet {
        exact: true,
        ..Default::default()
    };
    let mut on_curve = true;
    let mut in_lattice = true;
    let mut on_equation = true;
    if spacing.is_finite() && s1.is_finite() {
        let span = DomainInterval::new(s1, s1 + spacing * count.saturating_sub(1) as f64);
        let extended = curve.with_domain(span)?;
        let mut p = exact[0].clone();
        for j in 0..count {
            let s = s1 + spacing * j as f64;
            let pos = point_to_f64(&p);
            let expected = extended.position(s);
            on_curve &= (expected - pos).norm() <= 1e-9 * pos.norm().max(1.0);
            if let Some(imp) = implicit {
                on_equation &= imp.contains(&p);
            }
            match lat.coords_exact(&p)? {
                Some((m, n)) => points.points.push(LatticePoint {
                    m: m.to_i64().unwrap_or(i64::MAX),
                    n: n.to_i64().unwrap_or(i64::MAX),
                    position: pos,
                    s,
                }),
                None => in_lattice = false,
            }
            p = motion.apply(&p);
        }
    } else {
        on_curve = false;
    }
    checks.push(Hypothesis::new("orbit points are lattice points", in_lattice, ""));
    checks.push(Hypothesis::new("orbit points at the expected curve parameters", on_curve, ""));
    if implicit.is_some() {
        checks.push(Hypothesis::new("orbit points satisfy the curve equation exactly", on_equation, ""));
    }

    let target = fundamental_area(lat) / 2.0;
    let relation_residual = match hk(k0, spacing) {
        Ok(h) => h - target,
        Err(_) => f64::NAN,
    };
    checks.push(Hypothesis::new(
        "H_k0(L) = A_L / 2",
        relation_residual.abs() <= RELATION_TOL * target.max(1.0),
        format!("residual {relation_residual:.3e}"),
    ));

    Ok(OrbitCertificate {
        spacing,
        curvature: k0,
        trace: rat_to_f64(&motion.trace()),
        motion,
        points,
        relation_residual,
        checks,
    })
}

/// `2 cos(theta)` rounded, when it is within 1e-9 of an integer: the only
/// rotation angles a lattice-preserving rotation can have.
pub fn circle_rotation_trace(theta: f64) -> Option<i64> {
    let t = 2.0 * theta.cos();
    let r = t.round();
    ((t - r).abs() <= 1e-9).then_some(r as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{AdaptedFrame, Conic, PlaneVector};
    use std::f64::consts::PI;

    fn fib(n: usize) -> i64 {
        let (mut a, mut b) = (0i64, 1i64);
        for _ in 0..n {
            (a, b) = (b, a + b);
        }
        a
    }

    #[test]
    fn hyperbola_fibonacci_orbit() {
        let c = Conic::new(1.0, -1.0, -1.0, 0.0, 0.0, -1.0)
            .unit_speed_curve(PlaneVector::new(1.0, 0.0), DomainInterval::new(-0.5, 4.0))
            .unwrap();
        let imp = ImplicitPoly::conic_int(1, -1, -1, 0, 0, -1);
        let cert = equal_spaced_orbit(&c, &Lattice::standard(), [(1, 0), (1, -1), (2, -3), (5, -8)], 10, Some(&imp)).unwrap();
        assert!(cert.verified(), "{:?}", cert.checks);
        assert_eq!(cert.motion, ExactAffine::from_integers([[1, -1], [-1, 2]], [0, 0]));
        for (j, p) in cert.points.coords().into_iter().enumerate().skip(1) {
            let j = j + 1;
            assert_eq!(p, (fib(2 * j - 3), -fib(2 * j - 2)));
        }
        assert!(cert.relation_residual.abs() < 1e-12);
    }

    #[test]
    fn parabola_orbit() {
        // y = x(x+1)/2 through the origin
        let frame = AdaptedFrame::new(PlaneVector::ZERO, PlaneVector::new(1.0, 0.5), PlaneVector::new(0.0, 1.0));
        let c = AffineCurve::constant_curvature(0.0, 0.0, frame, DomainInterval::new(0.0, 3.0)).unwrap();
        let cert = equal_spaced_orbit(&c, &Lattice::standard(), [(0, 0), (1, 1), (2, 3), (3, 6)], 9, None).unwrap();
        assert!(cert.verified(), "{:?}", cert.checks);
        for (j, p) in cert.points.coords().into_iter().enumerate() {
            let j = j as i64;
            assert_eq!(p, (j, j * (j + 1) / 2));
        }
        assert_eq!(cert.trace, 2.0);
    }

    #[test]
    fn uneven_seed_is_flagged() {
        let frame = AdaptedFrame::new(PlaneVector::ZERO, PlaneVector::new(1.0, 0.5), PlaneVector::new(0.0, 1.0));
        let c = AffineCurve::constant_curvature(0.0, 0.0, frame, DomainInterval::new(0.0, 5.0)).unwrap();
        let cert = equal_spaced_orbit(&c, &Lattice::standard(), [(0, 0), (1, 1), (2, 3), (4, 10)], 5, None).unwrap();
        assert!(!cert.verified());
    }

    #[test]
    fn rotation_traces() {
        for (theta, t) in [(PI / 3.0, 1), (PI / 2.0, 0), (2.0 * PI / 3.0, -1), (PI, -2)] {
            assert_eq!(circle_rotation_trace(theta), Some(t));
        }
        assert_eq!(circle_rotation_trace(PI / 4.0), None);
        assert_eq!(circle_rotation_trace(0.3), None);
    }
}
