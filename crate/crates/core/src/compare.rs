//! Area, coordinate and inscribed-triangle bounds for curves with affine
//! curvature bounds, each returned as a checked [`BoundReport`].

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::curve::{adapted_frame, area_function, graphing_parameter_set, wedge, AffineCurve, CurveError};
use crate::integrate::Tolerance;
use crate::odekernel::{
    check_forward_positive, constant_fn, solve_ivp, Coefficient, KernelError, LinearOperator, Positivity, ScalarFn,
};
use crate::report::{default_slack, near_equality, BoundReport, Hypothesis, Statement};
use crate::specialfns::{abar, hk, sk, xbar, ybar, DomainInterval, SpecialFnError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompareError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Special(#[from] SpecialFnError),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy)]
pub struct CompareSettings {
    pub ode: Tolerance,
    /// Samples used for curvature and pointwise checks.
    pub sample_n: usize,
    /// Grid for kernel positivity checks.
    pub positivity_grid: usize,
    /// Fixed inequality slack; `None` uses `1e-7 * max(1, |bound|)`.
    pub slack: Option<f64>,
}

impl Default for CompareSettings {
    fn default() -> Self {
        CompareSettings {
            ode: Tolerance::default(),
            sample_n: 201,
            positivity_grid: 201,
            slack: None,
        }
    }
}

impl CompareSettings {
    fn slack(&self, bound: f64) -> f64 {
        self.slack.unwrap_or_else(|| default_slack(bound))
    }
}

/// Tolerance for sampled curvature bounds and constancy checks.
const CURVATURE_TOL: f64 = 1e-8;

fn require_domain(c: &AffineCurve, lo: f64, hi: f64) -> Result<(), CompareError> {
    let dom = c.domain();
    let slack = 1e-12 * dom.len().max(1.0);
    if lo < dom.lo - slack || hi > dom.hi + slack {
        return Err(CompareError::Invalid(format!(
            "[{lo}, {hi}] is not inside the curve domain [{}, {}]",
            dom.lo, dom.hi
        )));
    }
    Ok(())
}

/// Smallest and largest sampled curvature on `[lo, hi]`.
pub fn sampled_curvature_range(c: &AffineCurve, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    DomainInterval::new(lo, hi)
        .grid(n)
        .into_iter()
        .map(|s| c.curvature(s))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), k| (a.min(k), b.max(k)))
}

fn curvature_is_constant(c: &AffineCurve, lo: f64, hi: f64, k: f64, n: usize) -> bool {
    DomainInterval::new(lo, hi)
        .grid(n)
        .into_iter()
        .all(|s| (c.curvature(s) - k).abs() <= 1e-6 * k.abs().max(1.0))
}

/// Compare the area `A(L)` swept from `c(0)` with the solution of
/// `Abar''' + kappa_bar Abar' = 1/2`, zero initial data: `kappa <= kappa_bar`
/// gives `A(L) >= Abar(L)` and `kappa >= kappa_bar` gives `A(L) <= Abar(L)`.
pub fn area_compare(
    c: &AffineCurve,
    kappa_bar: ScalarFn,
    l: f64,
    settings: &CompareSettings,
) -> Result<BoundReport, CompareError> {
    if !(l > 0.0) {
        return Err(CompareError::Invalid(format!("length must be positive, got {l}")));
    }
    require_domain(c, 0.0, l)?;
    let interval = DomainInterval::new(0.0, l);
    let grid = interval.grid(settings.sample_n);

    let mut below = true;
    let mut above = true;
    let mut gap: f64 = 0.0;
    for &s in &grid {
        let d = c.curvature(s) - kappa_bar(s);
        gap = gap.max(d.abs());
        below &= d <= CURVATURE_TOL;
        above &= d >= -CURVATURE_TOL;
    }
    let mut hyps = vec![Hypothesis::new(
        "curvatures ordered",
        below || above,
        format!("max |kappa - kappa_bar| = {gap:.3e}"),
    )];

    let op = LinearOperator::single_term(3, 1, Coefficient::Function(kappa_bar.clone()), interval)?;
    let pos = check_forward_positive(&op, interval, settings.positivity_grid, 1e-9)?;
    let detail = match pos.verdict {
        Positivity::CertifiedPositiveOnGrid => format!("min K = {:.3e}", pos.min_value),
        Positivity::Violation { s, r, value } => format!("K({s}; {r}) = {value:.3e}"),
    };
    hyps.push(Hypothesis::new("kernel forward positive", pos.is_positive(), detail));

    let area = area_function(c, 0.0, c.position(0.0))?;
    let min_slope = grid.iter().skip(1).map(|&s| area.derivative(s)).fold(f64::INFINITY, f64::min);
    hyps.push(Hypothesis::new(
        "area increasing",
        min_slope > 0.0,
        format!("min A' = {min_slope:.3e}"),
    ));

    let a_l = area.eval(l)?;
    let abar_sol = solve_ivp(&op, constant_fn(0.5), 0.0, &[0.0; 3], settings.ode)?;
    let abar_l = abar_sol.value(l)?;
    let (lhs, rhs) = if above && !below { (a_l, abar_l) } else { (abar_l, a_l) };
    let mut report = BoundReport::new(Statement::AreaComparison, hyps, lhs, rhs, settings.slack(rhs))
        .with_witness(l, "area at the end of the arc");
    if below && above {
        report.note("curvatures coincide on the samples: both orderings apply");
    }
    if near_equality(a_l, abar_l) {
        report.equality = true;
        if below && above {
            report.note("equality: kappa equals kappa_bar on the samples");
        } else {
            report.note(format!("near equality although kappa and kappa_bar differ by up to {gap:.3e}"));
        }
    }
    Ok(report)
}

/// `(Abar_{k1}(L), Abar_{k0}(L))`, the area bounds for `k0 <= kappa <= k1`.
pub fn area_bounds(k0: f64, k1: f64, l: f64) -> Result<(f64, f64), CompareError> {
    if k0 > k1 {
        return Err(CompareError::Invalid(format!("need k0 <= k1, got k0 = {k0}, k1 = {k1}")));
    }
    Ok((abar(k1, l), abar(k0, l)))
}

/// Check `Abar_{k1}(s) <= A(s) <= Abar_{k0}(s)` on samples of `[0, L]`,
/// with `A` swept from `c(0)`. The report's `lhs` is the largest sampled
/// excess over either bound, compared against zero.
pub fn area_sandwich_check(
    c: &AffineCurve,
    k0: f64,
    k1: f64,
    l: f64,
    settings: &CompareSettings,
) -> Result<BoundReport, CompareError> {
    let (lower_l, upper_l) = area_bounds(k0, k1, l)?;
    require_domain(c, 0.0, l)?;
    let (kmin, kmax) = sampled_curvature_range(c, 0.0, l, settings.sample_n);
    let hyps = vec![Hypothesis::new(
        "curvature within [k0, k1]",
        kmin >= k0 - CURVATURE_TOL && kmax <= k1 + CURVATURE_TOL,
        format!("sampled curvature range [{kmin}, {kmax}]"),
    )];
    let area = area_function(c, 0.0, c.position(0.0))?;
    let mut worst = (f64::NEG_INFINITY, 0.0);
    let mut value_l = 0.0;
    for s in DomainInterval::new(0.0, l).grid(settings.sample_n.min(41)) {
        let a = area.eval(s)?;
        let excess = (abar(k1, s) - a).max(a - abar(k0, s));
        if excess > worst.0 {
            worst = (excess, s);
        }
        value_l = a;
    }
    let mut report = BoundReport::new(Statement::AreaSandwich, hyps, worst.0, 0.0, settings.slack(upper_l))
        .with_witness(worst.1, "largest excess over the area bounds");
    report.note(format!("A(L) = {value_l}, bounds [{lower_l}, {upper_l}]"));
    if near_equality(value_l, upper_l) {
        report.equality = true;
        report.note(if curvature_is_constant(c, 0.0, l, k0, settings.sample_n) {
            "upper bound attained: curvature constant k0"
        } else {
            "upper bound attained numerically but curvature is not constant k0"
        });
    }
    if near_equality(value_l, lower_l) {
        report.equality = true;
        report.note(if curvature_is_constant(c, 0.0, l, k1, settings.sample_n) {
            "lower bound attained: curvature constant k1"
        } else {
            "lower bound attained numerically but curvature is not constant k1"
        });
    }
    Ok(report)
}

/// Check the adapted-coordinate bounds at `c(s0)` for `|s - s0| <= L`:
/// `xbar_{k1}(|u|) <= |x| <= xbar_{k0}(|u|)` and
/// `ybar_{k1}(u) <= y <= ybar_{k0}(u)`, and that the graphing interval
/// contains `(-R, R)` with `R = s_{k1}(L)`. The report's `lhs` is the
/// largest sampled excess, compared against zero.
pub fn coord_bounds_check(
    c: &AffineCurve,
    s0: f64,
    k0: f64,
    k1: f64,
    l: f64,
    settings: &CompareSettings,
) -> Result<BoundReport, CompareError> {
    if !(l > 0.0) || k0 > k1 {
        return Err(CompareError::Invalid(format!("need L > 0 and k0 <= k1, got L = {l}, k0 = {k0}, k1 = {k1}")));
    }
    require_domain(c, s0 - l, s0 + l)?;
    let (kmin, kmax) = sampled_curvature_range(c, s0 - l, s0 + l, settings.sample_n);
    let limit = (PI / (2.0 * l)).powi(2);
    let hyps = vec![
        Hypothesis::new(
            "curvature within [k0, k1]",
            kmin >= k0 - CURVATURE_TOL && kmax <= k1 + CURVATURE_TOL,
            format!("sampled curvature range [{kmin}, {kmax}]"),
        ),
        Hypothesis::new("k1 <= (pi / 2L)^2", k1 <= limit, format!("k1 = {k1}, limit {limit}")),
    ];
    let frame = adapted_frame(c, s0)?;
    let mut worst = (f64::NEG_INFINITY, s0, "");
    let mut bump = |v: f64, u: f64, what: &'static str| {
        if v > worst.0 {
            worst = (v, u, what);
        }
    };
    let n = settings.sample_n | 1;
    for u in DomainInterval::new(-l, l).grid(n) {
        let p = frame.to_adapted(c.position(s0 + u));
        let au = u.abs();
        let ax = if u >= 0.0 { p.x } else { -p.x };
        bump(xbar(k1, au) - ax, u, "x lower");
        bump(ax - xbar(k0, au), u, "x upper");
        bump(ybar(k1, au) - p.y, u, "y lower");
        bump(p.y - ybar(k0, au), u, "y upper");
    }
    let set = graphing_parameter_set(c, s0)?;
    let r = sk(k1, l);
    let x_lo = frame.to_adapted(c.position(set.lo)).x;
    let x_hi = frame.to_adapted(c.position(set.hi)).x;
    bump(x_lo + r, set.lo - s0, "graphing interval");
    bump(r - x_hi, set.hi - s0, "graphing interval");

    let scale = xbar(k0, l).abs().max(ybar(k0, l).abs());
    let mut report = BoundReport::new(Statement::CoordinateBounds, hyps, worst.0, 0.0, settings.slack(scale))
        .with_witness(worst.1, format!("binding check: {}", worst.2));
    report.note(format!(
        "graphing interval [{x_lo}, {x_hi}] against R = {r}; parameter set [{}, {}]",
        set.lo - s0,
        set.hi - s0
    ));

    // equality at the ends of the window
    for end in [-l, l] {
        let p = frame.to_adapted(c.position(s0 + end));
        let ax = p.x.abs();
        let sides = [
            (ax, xbar(k1, l), k1, "x lower"),
            (ax, xbar(k0, l), k0, "x upper"),
            (p.y, ybar(k1, l), k1, "y lower"),
            (p.y, ybar(k0, l), k0, "y upper"),
        ];
        for (v, b, k, name) in sides {
            if near_equality(v, b) {
                report.equality = true;
                let (lo, hi) = if end < 0.0 { (s0 + end, s0) } else { (s0, s0 + end) };
                let constant = curvature_is_constant(c, lo, hi, k, settings.sample_n);
                report.note(format!(
                    "{name} bound attained at u = {end}: curvature {} constant {k}",
                    if constant { "is" } else { "is NOT" }
                ));
            }
        }
    }
    Ok(report)
}

/// Upper bound `Abar_{k0}(Λ)` on inscribed triangles of an arc with
/// `kappa >= k0` and affine length `Λ`.
pub fn triangle_bound_arc(k0: f64, lambda: f64) -> Result<f64, CompareError> {
    if !(lambda > 0.0) {
        return Err(CompareError::Invalid(format!("affine length must be positive, got {lambda}")));
    }
    Ok(abar(k0, lambda))
}

/// Upper bound `H_{k0}(Λ/2)` on inscribed triangles of an arc with
/// `k0 <= kappa <= k1 <= (pi/Λ)^2`; the caller checks the `k1` condition.
pub fn triangle_bound_rect(k0: f64, lambda: f64) -> Result<f64, CompareError> {
    if !(lambda > 0.0) {
        return Err(CompareError::Invalid(format!("affine length must be positive, got {lambda}")));
    }
    Ok(hk(k0, lambda / 2.0)?)
}

/// `(ratio - 1)` of the triangle spanned by the endpoints and midpoint of a
/// constant curvature `k0 < 0` arc of length `Λ` against `Abar_{k0}(Λ)`, in
/// closed form: `-(s_k(L) - L) / (s_k(L) c_k(L) - L)` with `L = Λ/2`.
pub fn triangle_arc_ratio_gap(k0: f64, lambda: f64) -> f64 {
    let l = lambda / 2.0;
    let x = (-k0).sqrt() * l;
    -(x.sinh() - x) / (x.sinh() * x.cosh() - x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriangleBound {
    /// `Abar_{k0}(Λ)`; requires `kappa >= k0`.
    Arc,
    /// `H_{k0}(Λ/2)`; requires `k0 <= kappa <= k1 <= (pi/Λ)^2`.
    Rect,
}

/// Area of the triangle with vertices `c(params[i])` against the selected
/// bound for the whole curve.
pub fn verify_triangle_bound(
    c: &AffineCurve,
    params: [f64; 3],
    kind: TriangleBound,
    k0: f64,
    k1: f64,
    settings: &CompareSettings,
) -> Result<BoundReport, CompareError> {
    let dom = c.domain();
    if !(params[0] < params[1] && params[1] < params[2]) {
        return Err(CompareError::Invalid(format!("vertex parameters must increase: {params:?}")));
    }
    require_domain(c, params[0], params[2])?;
    let lambda = dom.len();
    let (kmin, kmax) = sampled_curvature_range(c, dom.lo, dom.hi, settings.sample_n);
    let mut hyps = vec![Hypothesis::new(
        "curvature >= k0",
        kmin >= k0 - CURVATURE_TOL,
        format!("sampled minimum {kmin}"),
    )];
    let bound = match kind {
        TriangleBound::Arc => triangle_bound_arc(k0, lambda)?,
        TriangleBound::Rect => {
            let limit = (PI / lambda).powi(2);
            hyps.push(Hypothesis::new(
                "curvature <= k1",
                kmax <= k1 + CURVATURE_TOL,
                format!("sampled maximum {kmax}"),
            ));
            hyps.push(Hypothesis::new("k1 <= (pi / length)^2", k1 <= limit, format!("k1 = {k1}, limit {limit}")));
            triangle_bound_rect(k0, lambda)?
        }
    };
    let [p1, p2, p3] = params.map(|s| c.position(s));
    let area = 0.5 * wedge(p2 - p1, p3 - p1).abs();
    let statement = match kind {
        TriangleBound::Arc => Statement::TriangleArc,
        TriangleBound::Rect => Statement::TriangleRect,
    };
    let mut report = BoundReport::new(statement, hyps, area, bound, settings.slack(bound));
    if area == 0.0 {
        report.note("degenerate (collinear) vertices");
    }
    match kind {
        TriangleBound::Arc => report.note("the inequality is strict; exact equality cannot occur"),
        TriangleBound::Rect => {
            if near_equality(area, bound) {
                report.equality = true;
                let constant = curvature_is_constant(c, dom.lo, dom.hi, k0, settings.sample_n);
                report.note(format!(
                    "bound attained: curvature {} constant k0",
                    if constant { "is" } else { "is NOT" }
                ));
            }
        }
    }
    Ok(report)
}

/// Smooth random curvature with values in `[k0, k1]`:
/// `k0 + (k1 - k0) * sigma(s)` with `sigma` a normalized random
/// trigonometric sum.
pub fn random_curvature<R: Rng + ?Sized>(rng: &mut R, k0: f64, k1: f64) -> ScalarFn {
    let terms: Vec<(f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.random_range(0.1..1.0),
                rng.random_range(0.2..3.0),
                rng.random_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    let total: f64 = terms.iter().map(|t| t.0).sum();
    Arc::new(move |s| {
        let v: f64 = terms.iter().map(|(a, w, p)| a * (w * s + p).sin()).sum();
        let sigma = (0.5 * (1.0 + v / total)).clamp(0.0, 1.0);
        k0 + (k1 - k0) * sigma
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{AdaptedFrame, Conic, PlaneVector};
    use crate::report::Verdict;

    fn fast() -> CompareSettings {
        CompareSettings {
            positivity_grid: 41,
            ..Default::default()
        }
    }

    fn constant(k: f64, lo: f64, hi: f64) -> AffineCurve {
        AffineCurve::constant_curvature(k, 0.0, AdaptedFrame::standard(), DomainInterval::new(lo, hi)).unwrap()
    }

    fn hyperbola(lo: f64, hi: f64) -> AffineCurve {
        Conic::new(1.0, -1.0, -1.0, 0.0, 0.0, -1.0)
            .unit_speed_curve(PlaneVector::new(1.0, 0.0), DomainInterval::new(lo, hi))
            .unwrap()
    }

    #[test]
    fn parabola_against_negative_profile() {
        let rep = area_compare(&constant(0.0, 0.0, 2.0), constant_fn(-1.0), 2.0, &fast()).unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert!((rep.lhs - 2.0 / 3.0).abs() < 1e-10);
        assert!((rep.rhs - abar(-1.0, 2.0)).abs() < 1e-9);
        assert!(!rep.equality);
    }

    #[test]
    fn identical_curvature_sets_equality() {
        let rep = area_compare(&constant(-0.5, 0.0, 1.5), constant_fn(-0.5), 1.5, &fast()).unwrap();
        assert!(rep.holds() && rep.equality);
    }

    #[test]
    fn hyperbola_against_parabola_profile() {
        let rep = area_compare(&hyperbola(0.0, 1.0), constant_fn(0.0), 1.0, &fast()).unwrap();
        assert!(rep.holds());
        // kappa <= kappa_bar: Abar(L) <= A(L)
        assert!((rep.lhs - 1.0 / 12.0).abs() < 1e-10);
        assert!(rep.rhs > 1.0 / 12.0);
    }

    #[test]
    fn area_bounds_values() {
        assert_eq!(area_bounds(0.0, 0.0, 1.0).unwrap(), (1.0 / 12.0, 1.0 / 12.0));
        let (lo, hi) = area_bounds(-1.0, 0.0, 2.0).unwrap();
        assert!((lo - 2.0 / 3.0).abs() < 1e-15 && (hi - 0.813_430_203_9).abs() < 1e-9);
        let (lo, _) = area_bounds(0.0, 1.0, 1.0).unwrap();
        assert!((lo - (1.0 - 1f64.sin()) / 2.0).abs() < 1e-15);
        assert!(area_bounds(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn coordinate_bounds_on_parabola() {
        let rep = coord_bounds_check(&constant(0.0, -1.0, 1.0), 0.0, -1.0, 1.0, 1.0, &fast()).unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert!(!rep.equality);
    }

    #[test]
    fn coordinate_bounds_equality_on_hyperbola() {
        let alpha2 = 2f64.powf(-2.0 / 3.0) * 5f64.cbrt();
        let rep = coord_bounds_check(&hyperbola(-1.0, 1.0), 0.0, -alpha2, 0.0, 1.0, &fast()).unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert!(rep.equality);
        assert!(rep.notes.iter().any(|n| n.contains("upper") && n.contains("is constant")));
    }

    #[test]
    fn coordinate_bounds_reject_large_k1() {
        let rep = coord_bounds_check(&constant(2.0, -1.5, 1.5), 0.0, 2.0, 2.0, 1.5, &fast()).unwrap();
        assert_eq!(rep.verdict, Verdict::HypothesesFailed);
    }

    #[test]
    fn triangle_bounds() {
        assert!((triangle_bound_arc(0.0, 1.0).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        assert_eq!(triangle_bound_rect(0.0, 2.0).unwrap(), 0.5);
        let c = constant(0.0, 0.0, 3.0);
        // parabola (s, s^2/2) rather than (s, s(s-1)/2): area of c(0), c(1), c(3)
        let rep = verify_triangle_bound(&c, [0.0, 1.0, 3.0], TriangleBound::Arc, 0.0, 0.0, &fast()).unwrap();
        assert!(rep.holds());
        assert!((rep.lhs - 0.5 * wedge(c.position(1.0), c.position(3.0)).abs()).abs() < 1e-15);
        assert!((rep.rhs - 2.25).abs() < 1e-15);
        let sym = constant(-1.0, -1.0, 1.0);
        let rep = verify_triangle_bound(&sym, [-1.0, 0.0, 1.0], TriangleBound::Rect, -1.0, -1.0, &fast()).unwrap();
        assert!(rep.holds() && rep.equality);
    }

    #[test]
    fn random_curvature_stays_in_range() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let k = random_curvature(&mut rng, -2.0, 0.5);
            for i in 0..100 {
                let v = k(i as f64 * 0.1 - 5.0);
                assert!((-2.0..=0.5).contains(&v));
            }
        }
    }

    #[test]
    fn triangle_ratio_gap_matches_geometry_and_vanishes() {
        for (k0, lambda) in [(-1.0, 2.0), (-25.0, 1.0), (-100.0, 1.0)] {
            let l = lambda / 2.0;
            let c = constant(k0, -l, l);
            let [p1, p2, p3] = [-l, 0.0, l].map(|s| c.position(s));
            let ratio = 0.5 * wedge(p2 - p1, p3 - p1).abs() / abar(k0, lambda);
            let gap = triangle_arc_ratio_gap(k0, lambda);
            assert!((ratio - 1.0 - gap).abs() < 1e-12 * gap.abs().max(1e-3), "{k0}: {ratio} {gap}");
        }
        let mut prev = f64::NEG_INFINITY;
        for k0 in [-1.0, -10.0, -100.0, -1000.0] {
            let gap = triangle_arc_ratio_gap(k0, 1.0);
            assert!(gap < 0.0 && gap > prev);
            prev = gap;
        }
        // leading term is -2 e^{-x} with x = sqrt|k0| Λ/2
        let x: f64 = 20.0;
        let gap = triangle_arc_ratio_gap(-(2.0 * x).powi(2), 1.0);
        assert!((gap * x.exp() + 2.0).abs() < 1e-6);
    }
}
