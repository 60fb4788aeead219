//! Plane lattices, lattice points on convex arcs and certified bounds on
//! their number.

mod bounds;
mod enumerate;
mod exact;
mod orbit;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CurveError, PlaneVector};
use crate::specialfns::SpecialFnError;

pub use bounds::{
    bound_general, bound_rigid, bound_sharp, bound_three_points, bound_two_points, CountBoundCertificate, CountInputs,
    CountTheorem,
};
pub use enumerate::{enumerate_on_arc, Window};
pub use exact::{
    exact_point, exact_sub, exact_wedge, integer_roots_low_degree, parse_rational, point_to_f64, rat, rat_to_f64,
    BiPoly, ExactAffine, ExactPoint, ImplicitPoly, IntPoly,
};
pub use orbit::{circle_rotation_trace, equal_spaced_orbit, OrbitCertificate};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("lattice generators are dependent")]
    Dependent,
    #[error("degenerate triangle: points are collinear")]
    Degenerate,
    #[error("exact arithmetic unavailable: {0}")]
    Inexact(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Special(#[from] SpecialFnError),
}

/// Exact generators `(v0, v1, v2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactBasis {
    pub v0: ExactPoint,
    pub v1: ExactPoint,
    pub v2: ExactPoint,
}

/// `{ v0 + m v1 + n v2 : m, n integers }`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub v0: PlaneVector,
    pub v1: PlaneVector,
    pub v2: PlaneVector,
    exact: Option<ExactBasis>,
}

impl Lattice {
    /// A lattice known only in floating point.
    pub fn new(v0: PlaneVector, v1: PlaneVector, v2: PlaneVector) -> Result<Self, LatticeError> {
        let det = v1.wedge(v2);
        if det == 0.0 || !det.is_finite() || !v0.is_finite() {
            return Err(LatticeError::Dependent);
        }
        Ok(Lattice { v0, v1, v2, exact: None })
    }

    pub fn exact(v0: ExactPoint, v1: ExactPoint, v2: ExactPoint) -> Result<Self, LatticeError> {
        if exact_wedge(&v1, &v2).is_zero() {
            return Err(LatticeError::Dependent);
        }
        Ok(Lattice {
            v0: point_to_f64(&v0),
            v1: point_to_f64(&v1),
            v2: point_to_f64(&v2),
            exact: Some(ExactBasis { v0, v1, v2 }),
        })
    }

    pub fn integer(v0: [i64; 2], v1: [i64; 2], v2: [i64; 2]) -> Result<Self, LatticeError> {
        Self::exact(exact_point(v0[0], v0[1]), exact_point(v1[0], v1[1]), exact_point(v2[0], v2[1]))
    }

    /// The integer lattice.
    pub fn standard() -> Self {
        Self::integer([0, 0], [1, 0], [0, 1]).expect("independent")
    }

    /// Generators given as integer, decimal or fraction strings.
    pub fn parse(v0: [&str; 2], v1: [&str; 2], v2: [&str; 2]) -> Result<Self, LatticeError> {
        let p = |v: [&str; 2]| -> Result<ExactPoint, LatticeError> { Ok([parse_rational(v[0])?, parse_rational(v[1])?]) };
        Self::exact(p(v0)?, p(v1)?, p(v2)?)
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_basis(&self) -> Option<&ExactBasis> {
        self.exact.as_ref()
    }

    /// The same lattice with `v2` negated when `v1 ∧ v2 < 0`; the flag
    /// reports whether a sign change was made.
    pub fn oriented(&self) -> (Lattice, bool) {
        if self.v1.wedge(self.v2) > 0.0 {
            return (self.clone(), false);
        }
        let exact = self.exact.as_ref().map(|e| ExactBasis {
            v0: e.v0.clone(),
            v1: e.v1.clone(),
            v2: [-e.v2[0].clone(), -e.v2[1].clone()],
        });
        (
            Lattice {
                v0: self.v0,
                v1: self.v1,
                v2: -self.v2,
                exact,
            },
            true,
        )
    }

    pub fn point(&self, m: i64, n: i64) -> PlaneVector {
        self.v0 + (m as f64) * self.v1 + (n as f64) * self.v2
    }

    pub fn exact_lattice_point(&self, m: i64, n: i64) -> Option<ExactPoint> {
        let e = self.exact.as_ref()?;
        let (m, n) = (rat(m), rat(n));
        Some([
            &e.v0[0] + &m * &e.v1[0] + &n * &e.v2[0],
            &e.v0[1] + &m * &e.v1[1] + &n * &e.v2[1],
        ])
    }

    /// Real coordinates `(m, n)` of `p` in the basis.
    pub fn coords_f64(&self, p: PlaneVector) -> (f64, f64) {
        let d = p - self.v0;
        let det = self.v1.wedge(self.v2);
        (d.wedge(self.v2) / det, self.v1.wedge(d) / det)
    }

    /// Exact integer coordinates of `p`, or `None` when `p` is not a
    /// lattice point.
    pub fn coords_exact(&self, p: &ExactPoint) -> Result<Option<(BigInt, BigInt)>, LatticeError> {
        let e = self
            .exact
            .as_ref()
            .ok_or_else(|| LatticeError::Inexact("lattice has no exact generators".into()))?;
        let d = exact_sub(p, &e.v0);
        let det = exact_wedge(&e.v1, &e.v2);
        let m = exact_wedge(&d, &e.v2) / &det;
        let n = exact_wedge(&e.v1, &d) / &det;
        Ok((m.is_integer() && n.is_integer()).then(|| (m.to_integer(), n.to_integer())))
    }

    /// The coordinates `m(x, y)` and `n(x, y)` as exact linear polynomials.
    pub fn coordinate_forms(&self) -> Option<(BiPoly, BiPoly)> {
        let e = self.exact.as_ref()?;
        let det = exact_wedge(&e.v1, &e.v2);
        // m = ((p - v0) ∧ v2) / det, n = (v1 ∧ (p - v0)) / det
        let m = BiPoly::linear(
            &e.v2[1] / &det,
            -&e.v2[0] / &det,
            -exact_wedge(&e.v0, &e.v2) / &det,
        );
        let n = BiPoly::linear(
            -&e.v1[1] / &det,
            &e.v1[0] / &det,
            -exact_wedge(&e.v1, &e.v0) / &det,
        );
        Some((m, n))
    }

    /// Whether `p` is within `tol` (in lattice coordinates) of a lattice point.
    pub fn coords_approx(&self, p: PlaneVector, tol: f64) -> Option<(i64, i64)> {
        let (m, n) = self.coords_f64(p);
        let (rm, rn) = (m.round(), n.round());
        ((m - rm).abs() <= tol && (n - rn).abs() <= tol).then_some((rm as i64, rn as i64))
    }
}

/// `A_L = |v1 ∧ v2|`.
pub fn fundamental_area(lat: &Lattice) -> f64 {
    match fundamental_area_exact(lat) {
        Some(a) => rat_to_f64(&a),
        None => lat.v1.wedge(lat.v2).abs(),
    }
}

pub fn fundamental_area_exact(lat: &Lattice) -> Option<BigRational> {
    lat.exact.as_ref().map(|e| exact_wedge(&e.v1, &e.v2).abs())
}

/// A lattice point found on an arc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub m: i64,
    pub n: i64,
    pub position: PlaneVector,
    /// Affine arc length parameter on the curve.
    pub s: f64,
}

/// Lattice points ordered by curve parameter.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LatticePointSet {
    pub points: Vec<LatticePoint>,
    /// Membership was decided with exact arithmetic.
    pub exact: bool,
    pub warnings: Vec<String>,
}

impl LatticePointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn coords(&self) -> Vec<(i64, i64)> {
        self.points.iter().map(|p| (p.m, p.n)).collect()
    }

    pub fn positions(&self) -> Vec<PlaneVector> {
        self.points.iter().map(|p| p.position).collect()
    }
}

/// The integer `|(m2-m1)(n3-n1) - (n2-n1)(m3-m1)|` with
/// `Area = multiplier * A_L / 2`.
pub fn triangle_multiplier(p1: (i64, i64), p2: (i64, i64), p3: (i64, i64)) -> Result<u64, LatticeError> {
    let d = |a: i64, b: i64| a as i128 - b as i128;
    let w = d(p2.0, p1.0) * d(p3.1, p1.1) - d(p2.1, p1.1) * d(p3.0, p1.0);
    if w == 0 {
        return Err(LatticeError::Degenerate);
    }
    w.unsigned_abs()
        .to_u64()
        .ok_or_else(|| LatticeError::Invalid("multiplier overflows u64".into()))
}

/// The smallest triangle multiplier over the known points of a curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierCertificate {
    pub value: u64,
    /// A triple attaining the minimum.
    pub witness: Option<[(i64, i64); 3]>,
    pub points_considered: usize,
    /// Fewer than three points: the conservative value 1 is returned.
    pub default_used: bool,
}

/// Minimum of [`triangle_multiplier`] over all triples of `found`. This is
/// certified only over the listed points. Collinear triples are skipped.
pub fn m_of_curve(found: &LatticePointSet) -> MultiplierCertificate {
    let pts = found.coords();
    let mut best: Option<(u64, [(i64, i64); 3])> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if let Ok(v) = triangle_multiplier(pts[i], pts[j], pts[k]) {
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, [pts[i], pts[j], pts[k]]));
                    }
                }
            }
        }
    }
    MultiplierCertificate {
        value: best.map_or(1, |b| b.0),
        witness: best.map(|b| b.1),
        points_considered: pts.len(),
        default_used: best.is_none(),
    }
}

/// For `a x^2 + b xy + c y^2 = r` on the integer lattice with `a, c, r`
/// odd and `b` even, every integer point has `x + y` odd, so any three
/// such points have an even multiplier: returns `Some(2)`.
pub fn parity_multiplier(a: i64, b: i64, c: i64, r: i64) -> Option<u64> {
    let odd = |v: i64| v.rem_euclid(2) == 1;
    (odd(a) && odd(c) && odd(r) && !odd(b)).then_some(2)
}

/// Whether two exact lattices are the same point set.
pub fn lattice_equal(a: &Lattice, b: &Lattice) -> Result<bool, LatticeError> {
    let (ea, eb) = match (a.exact_basis(), b.exact_basis()) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(LatticeError::Inexact("lattice equality needs exact generators".into())),
    };
    let contains_all = |outer: &Lattice, inner: &ExactBasis| -> Result<bool, LatticeError> {
        let shifted = |v: &ExactPoint| [&inner.v0[0] + &v[0], &inner.v0[1] + &v[1]];
        Ok(outer.coords_exact(&inner.v0)?.is_some()
            && outer.coords_exact(&shifted(&inner.v1))?.is_some()
            && outer.coords_exact(&shifted(&inner.v2))?.is_some())
    };
    Ok(contains_all(a, eb)? && contains_all(b, ea)?)
}

/// Outcome of [`motion_preserves_lattice`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MotionCheck {
    pub special: bool,
    pub images_in_lattice: bool,
    /// The image triangle has area `A_L / 2`.
    pub half_cell_area: bool,
    /// `phi(v0)`, `phi(v0 + v1)`, `phi(v0 + v2)` are lattice points.
    pub generators_mapped_in: bool,
    pub preserves: bool,
}

/// Certify that a special affine motion maps the lattice onto itself from
/// the images of three lattice points spanning a half cell.
pub fn motion_preserves_lattice(
    motion: &ExactAffine,
    lat: &Lattice,
    pts: [(i64, i64); 3],
) -> Result<MotionCheck, LatticeError> {
    let special = motion.det() == rat(1);
    let mut image_coords = Vec::with_capacity(3);
    for (m, n) in pts {
        let p = lat
            .exact_lattice_point(m, n)
            .ok_or_else(|| LatticeError::Inexact("lattice has no exact generators".into()))?;
        image_coords.push(lat.coords_exact(&motion.apply(&p))?);
    }
    let images_in_lattice = image_coords.iter().all(Option::is_some);
    let half_cell_area = images_in_lattice && {
        let c: Vec<(i64, i64)> = image_coords
            .iter()
            .flatten()
            .map(|(m, n)| (m.to_i64().unwrap_or(i64::MAX), n.to_i64().unwrap_or(i64::MAX)))
            .collect();
        triangle_multiplier(c[0], c[1], c[2]) == Ok(1)
    };
    let mut generators_mapped_in = true;
    for (m, n) in [(0, 0), (1, 0), (0, 1)] {
        let p = lat.exact_lattice_point(m, n).expect("exact lattice");
        generators_mapped_in &= lat.coords_exact(&motion.apply(&p))?.is_some();
    }
    Ok(MotionCheck {
        special,
        images_in_lattice,
        half_cell_area,
        generators_mapped_in,
        preserves: special && images_in_lattice && half_cell_area,
    })
}
