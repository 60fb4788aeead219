//! Lattice points on an arc by bounding-box scan.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::{BiPoly, ImplicitPoly, IntPoly};
use super::{integer_roots_low_degree, Lattice, LatticeError, LatticePoint, LatticePointSet};
use crate::curve::{AffineCurve, PlaneVector};

/// Axis-aligned clipping window; infinite bounds are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn all() -> Self {
        Window {
            x_min: f64::NEG_INFINITY,
            x_max: f64::INFINITY,
            y_min: f64::NEG_INFINITY,
            y_max: f64::INFINITY,
        }
    }

    pub fn y_range(lo: f64, hi: f64) -> Self {
        Window {
            y_min: lo,
            y_max: hi,
            ..Window::all()
        }
    }

    pub fn x_range(lo: f64, hi: f64) -> Self {
        Window {
            x_min: lo,
            x_max: hi,
            ..Window::all()
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.x_min <= self.x_max && self.y_min <= self.y_max)
    }

    pub fn contains(&self, p: PlaneVector) -> bool {
        let tol = 1e-12 * p.norm().max(1.0);
        p.x >= self.x_min - tol && p.x <= self.x_max + tol && p.y >= self.y_min - tol && p.y <= self.y_max + tol
    }

    fn intersect(&self, other: &Window) -> Window {
        Window {
            x_min: self.x_min.max(other.x_min),
            x_max: self.x_max.min(other.x_max),
            y_min: self.y_min.max(other.y_min),
            y_max: self.y_max.min(other.y_max),
        }
    }
}

/// Largest number of lattice cells a scan may visit.
const MAX_CELLS: f64 = 5e7;
const SAMPLES: usize = 2001;
/// Relative distance for floating-point membership.
const INEXACT_TOL: f64 = 1e-9;

/// All lattice points on `curve` (within `window`). With an exact lattice
/// and an implicit equation the membership test is exact: each column of
/// the lattice box is solved for integer roots, or scanned when the
/// equation has degree above two in the second coordinate. Otherwise the
/// box is scanned with a floating-point distance test and the result is
/// flagged as inexact. Points are then located on the arc by parameter.
pub fn enumerate_on_arc(
    curve: &AffineCurve,
    implicit: Option<&ImplicitPoly>,
    lat: &Lattice,
    window: Option<&Window>,
) -> Result<LatticePointSet, LatticeError> {
    let window = window.copied().unwrap_or_else(Window::all);
    let samples = curve.sample(SAMPLES);
    let pad = samples
        .windows(2)
        .map(|w| (w[1].1 - w[0].1).norm())
        .fold(0.0, f64::max)
        + 1e-9;
    let mut arc_box = Window {
        x_min: f64::INFINITY,
        x_max: f64::NEG_INFINITY,
        y_min: f64::INFINITY,
        y_max: f64::NEG_INFINITY,
    };
    for (_, p) in &samples {
        arc_box.x_min = arc_box.x_min.min(p.x - pad);
        arc_box.x_max = arc_box.x_max.max(p.x + pad);
        arc_box.y_min = arc_box.y_min.min(p.y - pad);
        arc_box.y_max = arc_box.y_max.max(p.y + pad);
    }
    let bx = arc_box.intersect(&window);
    if bx.is_empty() {
        return Ok(LatticePointSet {
            exact: implicit.is_some() && lat.is_exact(),
            ..Default::default()
        });
    }

    let corners = [
        PlaneVector::new(bx.x_min, bx.y_min),
        PlaneVector::new(bx.x_min, bx.y_max),
        PlaneVector::new(bx.x_max, bx.y_min),
        PlaneVector::new(bx.x_max, bx.y_max),
    ];
    let (mut m_lo, mut m_hi, mut n_lo, mut n_hi) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for c in corners {
        let (m, n) = lat.coords_f64(c);
        m_lo = m_lo.min(m);
        m_hi = m_hi.max(m);
        n_lo = n_lo.min(n);
        n_hi = n_hi.max(n);
    }
    if (m_hi - m_lo + 3.0) > MAX_CELLS || !(m_hi - m_lo).is_finite() {
        return Err(LatticeError::Invalid("bounding box too large to scan".into()));
    }
    let (m_lo, m_hi) = (m_lo.floor() as i64 - 1, m_hi.ceil() as i64 + 1);
    let (n_lo, n_hi) = (n_lo.floor() as i64 - 1, n_hi.ceil() as i64 + 1);

    let accept = |m: i64, n: i64| -> Option<LatticePoint> {
        let p = lat.point(m, n);
        if !window.contains(p) {
            return None;
        }
        let s = curve.locate(p)?;
        Some(LatticePoint { m, n, position: p, s })
    };

    let mut set = LatticePointSet::default();
    let found: Vec<LatticePoint> = match (implicit, lat.exact_basis()) {
        (Some(imp), Some(basis)) => {
            set.exact = true;
            let xs = BiPoly::linear(basis.v1[0].clone(), basis.v2[0].clone(), basis.v0[0].clone());
            let ys = BiPoly::linear(basis.v1[1].clone(), basis.v2[1].clone(), basis.v0[1].clone());
            let poly = imp.poly.compose(&xs, &ys).to_integer();
            let full_scan = poly.degree_in_n() > 2;
            if full_scan && (m_hi - m_lo + 1) as f64 * (n_hi - n_lo + 1) as f64 > MAX_CELLS {
                return Err(LatticeError::Invalid("bounding box too large to scan".into()));
            }
            (m_lo..=m_hi)
                .into_par_iter()
                .flat_map_iter(|m| column_hits(&poly, m, n_lo, n_hi).into_iter().filter_map(move |n| accept(m, n)))
                .collect()
        }
        _ => {
            set.warnings.push(if implicit.is_none() {
                "no exact equation for the curve: membership tested to relative distance 1e-9".into()
            } else {
                "lattice is not exact: membership tested to relative distance 1e-9".into()
            });
            if (m_hi - m_lo + 1) as f64 * (n_hi - n_lo + 1) as f64 > MAX_CELLS {
                return Err(LatticeError::Invalid("bounding box too large to scan".into()));
            }
            let near_arc = |p: PlaneVector| samples.iter().any(|(_, q)| (*q - p).norm() <= pad);
            (m_lo..=m_hi)
                .into_par_iter()
                .flat_map_iter(|m| {
                    (n_lo..=n_hi).filter_map(move |n| {
                        let p = lat.point(m, n);
                        if !near_arc(p) {
                            return None;
                        }
                        let hit = accept(m, n)?;
                        let close = (curve.position(hit.s) - p).norm() <= INEXACT_TOL * p.norm().max(1.0);
                        close.then_some(hit)
                    })
                })
                .collect()
        }
    };
    set.points = found;
    set.points.sort_by(|a, b| a.s.total_cmp(&b.s));
    Ok(set)
}

/// Values of `n` in `[n_lo, n_hi]` with `poly(m, n) = 0`.
fn column_hits(poly: &IntPoly, m: i64, n_lo: i64, n_hi: i64) -> Vec<i64> {
    let coeffs = poly.column(m);
    let in_range = |n: &BigInt| n.to_i64().filter(|v| (n_lo..=n_hi).contains(v));
    match integer_roots_low_degree(&coeffs) {
        Some(roots) => roots.iter().filter_map(in_range).collect(),
        None => (n_lo..=n_hi).filter(|&n| poly.is_zero_at(m, n)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{AdaptedFrame, Conic};
    use crate::lattice::{parse_rational, rat};
    use crate::specialfns::DomainInterval;

    fn parabola(hi: f64) -> (AffineCurve, ImplicitPoly) {
        // (s, s(s-1)/2): c(0) = 0, c' = (1, -1/2), c'' = (0, 1)
        let frame = AdaptedFrame::new(PlaneVector::ZERO, PlaneVector::new(1.0, -0.5), PlaneVector::new(0.0, 1.0));
        let c = AffineCurve::constant_curvature(0.0, 0.0, frame, DomainInterval::new(0.0, hi)).unwrap();
        let half = parse_rational("1/2").unwrap();
        (c, ImplicitPoly::graph(&[rat(0), -half.clone(), half]))
    }

    #[test]
    fn parabola_points() {
        let (c, imp) = parabola(3.0);
        let set = enumerate_on_arc(&c, Some(&imp), &Lattice::standard(), None).unwrap();
        assert!(set.exact);
        assert_eq!(set.coords(), vec![(0, 0), (1, 0), (2, 1), (3, 3)]);
        assert!(set.points.windows(2).all(|w| w[0].s < w[1].s));
        let inexact = enumerate_on_arc(&c, None, &Lattice::standard(), None).unwrap();
        assert!(!inexact.exact && !inexact.warnings.is_empty());
        assert_eq!(inexact.coords(), set.coords());
    }

    #[test]
    fn hyperbola_window() {
        let c = Conic::new(1.0, -1.0, -1.0, 0.0, 0.0, -1.0)
            .unit_speed_curve(PlaneVector::new(1.0, 0.0), DomainInterval::new(-2.0, 4.0))
            .unwrap();
        let imp = ImplicitPoly::conic_int(1, -1, -1, 0, 0, -1);
        let set = enumerate_on_arc(&c, Some(&imp), &Lattice::standard(), Some(&Window::y_range(-8.0, 0.0))).unwrap();
        assert_eq!(set.coords(), vec![(1, 0), (1, -1), (2, -3), (5, -8)]);
        let none = enumerate_on_arc(&c, Some(&imp), &Lattice::standard(), Some(&Window::y_range(1.0, 0.0))).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn circle_points_on_other_lattice() {
        // x^2 + y^2 = 25 in the lattice with basis (1, 0), (0, 1/2)
        let c = Conic::new(1.0, 0.0, 1.0, 0.0, 0.0, -25.0)
            .unit_speed_curve(PlaneVector::new(5.0, 0.0), DomainInterval::new(0.0, 1.0))
            .unwrap();
        let full = 2.0 * std::f64::consts::PI / c.curvature(0.0).sqrt();
        let c = c.with_domain(DomainInterval::new(0.0, full)).unwrap();
        let imp = ImplicitPoly::conic_int(1, 0, 1, 0, 0, -25);
        let z2 = enumerate_on_arc(&c, Some(&imp), &Lattice::standard(), None).unwrap();
        assert_eq!(z2.len(), 12);
        let lat = Lattice::parse(["0", "0"], ["1", "0"], ["0", "0.5"]).unwrap();
        let fine = enumerate_on_arc(&c, Some(&imp), &lat, None).unwrap();
        assert_eq!(fine.len(), 12);
        assert!(fine.coords().contains(&(3, 8)));
    }
}
