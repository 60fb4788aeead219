//! Curves and lattices on which the lattice point bounds are attained.

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::curve::{AdaptedFrame, AffineCurve, Conic, CurveError, PlaneVector};
use crate::lattice::{
    bound_rigid, bound_sharp, circle_rotation_trace, enumerate_on_arc, fundamental_area, rat, BiPoly,
    CountBoundCertificate, CountTheorem, ImplicitPoly, Lattice, LatticeError, LatticePointSet,
};
use crate::specialfns::{hk, DomainInterval};

/// `2^(-1/3) 5^(1/6)`, the growth rate of the unit speed branch of
/// `x^2 - xy - y^2 = 1`.
pub fn golden_hyperbola_alpha() -> f64 {
    2f64.powf(-1.0 / 3.0) * 5f64.powf(1.0 / 6.0)
}

/// Affine distance between consecutive integer points on that branch,
/// `arcsinh(sqrt(5)/2) / alpha`.
pub fn golden_hyperbola_spacing() -> f64 {
    (5f64.sqrt() / 2.0).asinh() / golden_hyperbola_alpha()
}

/// Integer points `(f_{2j-3}, -f_{2j-2})` for `j >= 2`, with `(1, 0)` at
/// `j = 1`; `f` is the Fibonacci sequence from `f_0 = 0, f_1 = 1`.
pub fn fibonacci_point(j: usize) -> (i64, i64) {
    if j <= 1 {
        return (1, 0);
    }
    let fib = |n: usize| {
        let (mut a, mut b) = (0i64, 1i64);
        for _ in 0..n {
            (a, b) = (b, a + b);
        }
        a
    };
    (fib(2 * j - 3), -fib(2 * j - 2))
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpInstance {
    pub name: String,
    #[serde(skip)]
    pub curve: AffineCurve,
    #[serde(skip)]
    pub implicit: Option<ImplicitPoly>,
    #[serde(skip)]
    pub lattice: Lattice,
    /// Lattice coordinates of the points on the arc, in arc order.
    pub expected: Vec<(i64, i64)>,
    pub expected_bound: u64,
    pub theorem: CountTheorem,
    pub k0: f64,
    pub k1: f64,
    pub length: f64,
    pub spacing: f64,
    pub notes: Vec<String>,
}

impl SharpInstance {
    pub fn enumerate(&self) -> Result<LatticePointSet, LatticeError> {
        enumerate_on_arc(&self.curve, self.implicit.as_ref(), &self.lattice, None)
    }

    /// The bound of the attained theorem, from the instance data with
    /// multiplier 1.
    pub fn certificate(&self) -> Result<CountBoundCertificate, LatticeError> {
        let area = fundamental_area(&self.lattice);
        match self.theorem {
            CountTheorem::Rigid => bound_rigid(self.k0, self.k1, self.length, 1, area),
            _ => bound_sharp(self.k0, self.k1, self.length, 1, area),
        }
    }
}

fn oriented(lat: &Lattice, notes: &mut Vec<String>) -> Lattice {
    let (lat, flipped) = lat.oriented();
    if flipped {
        notes.push("v2 replaced by -v2 so that v1 ∧ v2 > 0".into());
    }
    lat
}

/// Implicit equation `P(m(x, y), n(x, y)) = 0` from one in lattice coordinates.
fn implicit_in_lattice(lat: &Lattice, in_coords: BiPoly) -> Option<ImplicitPoly> {
    let (m, n) = lat.coordinate_forms()?;
    Some(ImplicitPoly {
        poly: in_coords.compose(&m, &n),
    })
}

/// Parabola `c(s) = v0 + (αs) v1 + (αs)(αs - 1)/2 v2` with
/// `α = (v1 ∧ v2)^(-1/3)`, through the lattice points with coordinates
/// `(j, j(j-1)/2)` at spacing `1/α`. The sharp arc runs over `j = 0..=2m0+1`
/// and the rigid arc over `j = 1..=2m0+1`.
pub fn parabola_instance(lat: &Lattice, m0: u64, rigid: bool) -> Result<SharpInstance, LatticeError> {
    if rigid && m0 == 0 {
        return Err(LatticeError::Invalid("the rigid arc needs m0 >= 1".into()));
    }
    let mut notes = Vec::new();
    let lat = oriented(lat, &mut notes);
    let alpha = lat.v1.wedge(lat.v2).powf(-1.0 / 3.0);
    let spacing = 1.0 / alpha;
    let frame = AdaptedFrame::new(lat.v0, alpha * lat.v1 - (alpha / 2.0) * lat.v2, (alpha * alpha) * lat.v2);
    let first = if rigid { 1 } else { 0 };
    let last = 2 * m0 as i64 + 1;
    let domain = DomainInterval::new(first as f64 * spacing, last as f64 * spacing);
    let curve = AffineCurve::constant_curvature(0.0, 0.0, frame, domain)?;
    // 2n - m^2 + m = 0
    let mut eq = BiPoly::zero();
    eq.add_term(0, 1, rat(2));
    eq.add_term(2, 0, rat(-1));
    eq.add_term(1, 0, rat(1));
    let implicit = implicit_in_lattice(&lat, eq);
    let expected = (first..=last).map(|j| (j, j * (j - 1) / 2)).collect::<Vec<_>>();
    Ok(SharpInstance {
        name: format!("parabola m0={m0}{}", if rigid { " rigid" } else { "" }),
        curve,
        implicit,
        lattice: lat,
        expected_bound: expected.len() as u64,
        expected,
        theorem: if rigid { CountTheorem::Rigid } else { CountTheorem::Sharp },
        k0: 0.0,
        k1: 0.0,
        length: domain.len(),
        spacing,
        notes,
    })
}

/// The branch of `x^2 - xy - y^2 = 1` through `(1, 0)` with the integer
/// lattice: the sharp arc is `[0, (2m0+1)L]`, the rigid arc `[L, (2m0+1)L]`.
pub fn hyperbola_zxz_instance(m0: u64, rigid: bool) -> Result<SharpInstance, LatticeError> {
    if m0 == 0 {
        return Err(LatticeError::Invalid("m0 must be at least 1".into()));
    }
    let alpha = golden_hyperbola_alpha();
    let l = golden_hyperbola_spacing();
    let first = if rigid { 1 } else { 0 };
    let last = 2 * m0 as usize + 1;
    let domain = DomainInterval::new(first as f64 * l, last as f64 * l);
    let curve = Conic::new(1.0, -1.0, -1.0, 0.0, 0.0, -1.0).unit_speed_curve(PlaneVector::new(1.0, 0.0), domain)?;
    let expected = (first..=last).map(|i| fibonacci_point(i + 1)).collect::<Vec<_>>();
    Ok(SharpInstance {
        name: format!("hyperbola x^2-xy-y^2=1 m0={m0}{}", if rigid { " rigid" } else { "" }),
        curve,
        implicit: Some(ImplicitPoly::conic_int(1, -1, -1, 0, 0, -1)),
        lattice: Lattice::standard(),
        expected_bound: expected.len() as u64,
        expected,
        theorem: if rigid { CountTheorem::Rigid } else { CountTheorem::Sharp },
        k0: -alpha * alpha,
        k1: -alpha * alpha,
        length: domain.len(),
        spacing: l,
        notes: Vec::new(),
    })
}

/// The same configuration carried to `L(v0, v1, v2)` by
/// `(x, y) -> v0 + x v1 + y v2`: `ĉ(s) = v0 + X(s/β) v1 + Y(s/β) v2` with
/// `(X, Y)` the unit speed branch and `β = (v1 ∧ v2)^(1/3)`. Then the
/// spacing is `βL` and the curvature `-α²/β²`.
pub fn hyperbola_general_instance(lat: &Lattice, m0: u64, rigid: bool) -> Result<SharpInstance, LatticeError> {
    let base = hyperbola_zxz_instance(m0, rigid)?;
    let mut notes = Vec::new();
    let lat = oriented(lat, &mut notes);
    let beta = lat.v1.wedge(lat.v2).cbrt();
    let map = |v: PlaneVector| v.x * lat.v1 + v.y * lat.v2;
    let start = Conic::new(1.0, -1.0, -1.0, 0.0, 0.0, -1.0)
        .unit_speed_curve(PlaneVector::new(1.0, 0.0), DomainInterval::new(0.0, 1.0))?
        .jet(0.0);
    let frame = AdaptedFrame::new(lat.v0 + map(start[0]), (1.0 / beta) * map(start[1]), (1.0 / (beta * beta)) * map(start[2]));
    let k = base.k0 / (beta * beta);
    let domain = DomainInterval::new(base.curve.domain().lo * beta, base.curve.domain().hi * beta);
    let curve = AffineCurve::constant_curvature(k, 0.0, frame, domain)?;
    let mut eq = BiPoly::zero();
    eq.add_term(2, 0, BigRational::one());
    eq.add_term(1, 1, rat(-1));
    eq.add_term(0, 2, rat(-1));
    eq.add_term(0, 0, rat(-1));
    Ok(SharpInstance {
        name: format!("transferred hyperbola m0={m0}{}", if rigid { " rigid" } else { "" }),
        curve,
        implicit: implicit_in_lattice(&lat, eq),
        lattice: lat,
        expected: base.expected,
        expected_bound: base.expected_bound,
        theorem: base.theorem,
        k0: k,
        k1: k,
        length: domain.len(),
        spacing: base.spacing * beta,
        notes,
    })
}

/// A lattice through four evenly spaced points of a circle.
#[derive(Debug, Clone, Serialize)]
pub struct CircleFixture {
    pub name: String,
    #[serde(skip)]
    pub lattice: Lattice,
    /// Lattice coordinates of the four seed points in arc order.
    pub seed: [(i64, i64); 4],
    /// Rotation angle between consecutive points.
    pub angle: f64,
    /// Lattice points on the whole circle.
    pub points_on_circle: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CircleInstance {
    pub k: f64,
    pub radius: f64,
    #[serde(skip)]
    pub curve: AffineCurve,
    pub square: CircleFixture,
    pub hexagonal: CircleFixture,
    pub notes: Vec<String>,
}

/// Outcome of checking a circle fixture.
#[derive(Debug, Clone, Serialize)]
pub struct CircleCheck {
    pub spacing: f64,
    pub angle: f64,
    /// `2 cos(angle)` when it is an integer.
    pub trace: Option<i64>,
    /// `H_k(L) - A_L / 2`.
    pub relation_residual: f64,
    pub found: usize,
}

/// Circle of radius `k^(-3/4)` about the origin with unit affine speed
/// `c(s) = r (cos(sqrt(k) s), sin(sqrt(k) s))`, on one full turn, with the
/// square and hexagonal lattices through evenly spaced points.
pub fn circle_instance(k: f64) -> Result<CircleInstance, CurveError> {
    if !(k > 0.0) {
        return Err(CurveError::Invalid(format!("circle curvature must be positive, got {k}")));
    }
    let r = k.powf(-0.75);
    let w = k.sqrt();
    let frame = AdaptedFrame::new(PlaneVector::new(r, 0.0), PlaneVector::new(0.0, r * w), PlaneVector::new(-r * k, 0.0));
    let curve = AffineCurve::constant_curvature(k, 0.0, frame, DomainInterval::new(0.0, 2.0 * PI / w))?;
    let square = CircleFixture {
        name: "square".into(),
        lattice: Lattice::new(PlaneVector::new(r, 0.0), PlaneVector::new(-r, r), PlaneVector::new(-r, -r))
            .expect("independent"),
        seed: [(0, 0), (1, 0), (1, 1), (0, 1)],
        angle: PI / 2.0,
        points_on_circle: 4,
    };
    let hexagonal = CircleFixture {
        name: "hexagonal".into(),
        lattice: Lattice::new(PlaneVector::ZERO, PlaneVector::new(r, 0.0), PlaneVector::new(r / 2.0, r * 3f64.sqrt() / 2.0))
            .expect("independent"),
        seed: [(1, 0), (0, 1), (-1, 1), (-1, 0)],
        angle: PI / 3.0,
        points_on_circle: 6,
    };
    Ok(CircleInstance {
        k,
        radius: r,
        curve,
        square,
        hexagonal,
        notes: vec![
            "a lattice-preserving rotation has integer trace 2cos(theta), so theta is a multiple of pi/2 or \
             pi/3; the bounds can be attained only with at most six lattice points on the circle"
                .into(),
        ],
    })
}

impl CircleInstance {
    /// Spacing of the fixture's seed along the circle, the rotation angle
    /// it implies, and the relation `H_k(L) = A_L / 2`.
    pub fn check(&self, fixture: &CircleFixture) -> Result<CircleCheck, LatticeError> {
        let params: Vec<f64> = fixture
            .seed
            .iter()
            .map(|&(m, n)| self.curve.locate(fixture.lattice.point(m, n)))
            .collect::<Option<_>>()
            .ok_or_else(|| LatticeError::Invalid("seed point not on the circle".into()))?;
        let spacing = (params[3] - params[0]) / 3.0;
        let angle = self.k.sqrt() * spacing;
        let found = enumerate_on_arc(&self.curve, None, &fixture.lattice, None)?;
        Ok(CircleCheck {
            spacing,
            angle,
            trace: circle_rotation_trace(angle),
            relation_residual: hk(self.k, spacing)? - fundamental_area(&fixture.lattice) / 2.0,
            found: dedup_closed(&found),
        })
    }
}

/// Number of distinct points, identifying the two ends of a closed curve.
fn dedup_closed(set: &LatticePointSet) -> usize {
    let mut coords = set.coords();
    coords.sort_unstable();
    coords.dedup();
    coords.len()
}
