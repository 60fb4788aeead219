//! Monic linear ODE operators, their Lagrange kernels and the comparison
//! theorem for `y^(n) + kappa y^(l) = f` as an executable check.
//!
//! The Lagrange kernel `K(s; r)` of `D y = y^(n) + sum a_j y^(j)` is, for
//! fixed `r`, the solution of `D K = 0` with jet `(0, ..., 0, 1)` at `s = r`.
//! A non-homogeneous problem with zero initial data at `r` is then solved by
//! `y^(j)(s) = int_r^s d^j/ds^j K(s; t) f(t) dt` for `j < n`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::integrate::{
    gauss_kronrod_vec, integrate, DenseTrajectory, OdeError, OdeRhs, QuadError, QuadTolerance, Tolerance,
};
use crate::report::{default_slack, near_equality, BoundReport, Hypothesis, Statement};
use crate::specialfns::DomainInterval;

/// A real function of one variable, shareable across threads.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub fn constant_fn(c: f64) -> ScalarFn {
    Arc::new(move |_| c)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("operator order must be at least 1")]
    ZeroOrder,
    #[error("expected {expected} initial values, got {got}")]
    InitialLength { expected: usize, got: usize },
    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutsideInterval {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// One coefficient `a_j(s)`.
#[derive(Clone)]
pub enum Coefficient {
    Zero,
    Constant(f64),
    Function(ScalarFn),
}

impl Coefficient {
    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Coefficient::Zero => 0.0,
            Coefficient::Constant(c) => *c,
            Coefficient::Function(f) => f(s),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Coefficient::Zero) || matches!(self, Coefficient::Constant(c) if *c == 0.0)
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Zero => write!(f, "0"),
            Coefficient::Constant(c) => write!(f, "{c}"),
            Coefficient::Function(_) => write!(f, "a(s)"),
        }
    }
}

/// `D y = y^(n) + sum_{j<n} a_j(s) y^(j)` on an interval.
#[derive(Clone, Debug)]
pub struct LinearOperator {
    coeffs: Vec<Coefficient>,
    interval: DomainInterval,
    label: String,
}

impl LinearOperator {
    /// `coeffs[j]` multiplies `y^(j)`; the order is `coeffs.len()`.
    pub fn new(coeffs: Vec<Coefficient>, interval: DomainInterval) -> Result<Self, KernelError> {
        if coeffs.is_empty() {
            return Err(KernelError::ZeroOrder);
        }
        let label = describe(&coeffs);
        Ok(LinearOperator {
            coeffs,
            interval,
            label,
        })
    }

    pub fn constant(coeffs: &[f64], interval: DomainInterval) -> Result<Self, KernelError> {
        Self::new(coeffs.iter().map(|&c| Coefficient::Constant(c)).collect(), interval)
    }

    /// `y^(n) + kappa(s) y^(l)`.
    pub fn single_term(n: usize, l: usize, kappa: Coefficient, interval: DomainInterval) -> Result<Self, KernelError> {
        if l >= n {
            return Err(KernelError::InvalidArgument(format!("need l < n, got l = {l}, n = {n}")));
        }
        let mut coeffs = vec![Coefficient::Zero; n];
        coeffs[l] = kappa;
        Self::new(coeffs, interval)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn interval(&self) -> DomainInterval {
        self.interval
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn coeff(&self, j: usize, s: f64) -> f64 {
        self.coeffs[j].eval(s)
    }

    /// `sum_j a_j(s) jet[j]`.
    pub fn apply_lower(&self, s: f64, jet: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .zip(jet)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, y)| c.eval(s) * y)
            .sum()
    }

    /// First-order system for the state `(y, y', ..., y^(n-1))`.
    pub fn first_order_rhs(&self, forcing: Option<ScalarFn>) -> OdeRhs {
        let op = self.clone();
        Arc::new(move |s, y: &[f64], dy: &mut [f64]| {
            let n = y.len();
            dy[..n - 1].copy_from_slice(&y[1..]);
            let f = forcing.as_ref().map_or(0.0, |f| f(s));
            dy[n - 1] = f - op.apply_lower(s, y);
        })
    }

    fn check_point(&self, what: &'static str, s: f64) -> Result<(), KernelError> {
        if self.interval.contains(s) {
            Ok(())
        } else {
            Err(KernelError::OutsideInterval {
                what,
                value: s,
                lo: self.interval.lo,
                hi: self.interval.hi,
            })
        }
    }
}

fn describe(coeffs: &[Coefficient]) -> String {
    let n = coeffs.len();
    let mut out = format!("y^({n})");
    for (j, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        out.push_str(&format!(" + {c:?}*y^({j})"));
    }
    out
}

#[derive(Clone)]
enum Repr {
    Dense(DenseTrajectory),
    Kernel { kernel: KernelFn, quad: QuadTolerance },
}

/// Solution of `D y = f` with prescribed jet at `r`.
#[derive(Clone)]
pub struct IVPSolution {
    op: LinearOperator,
    forcing: ScalarFn,
    r: f64,
    init: Vec<f64>,
    repr: Repr,
}

impl fmt::Debug for IVPSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IVPSolution")
            .field("op", &self.op.label)
            .field("r", &self.r)
            .field("init", &self.init)
            .finish()
    }
}

impl IVPSolution {
    pub fn domain(&self) -> DomainInterval {
        self.op.interval
    }

    pub fn initial_point(&self) -> f64 {
        self.r
    }

    pub fn initial_values(&self) -> &[f64] {
        &self.init
    }

    pub fn operator(&self) -> &LinearOperator {
        &self.op
    }

    /// `(y, y', ..., y^(n-1))` at `s`.
    pub fn jet(&self, s: f64) -> Result<Vec<f64>, KernelError> {
        self.op.check_point("s", s)?;
        match &self.repr {
            Repr::Dense(traj) => Ok(traj.eval(s)?),
            Repr::Kernel { kernel, quad } => kernel.integrate_forcing(&self.forcing, self.r, s, *quad),
        }
    }

    pub fn value(&self, s: f64) -> Result<f64, KernelError> {
        Ok(self.jet(s)?[0])
    }

    /// `y^(n)(s)` read off the equation.
    pub fn top_derivative(&self, s: f64, jet: &[f64]) -> f64 {
        (self.forcing)(s) - self.op.apply_lower(s, jet)
    }

    /// `|y^(n) + sum a_j y^(j) - f|` at `s`, with `y^(n)` from a central
    /// difference of `y^(n-1)`.
    pub fn residual(&self, s: f64) -> Result<f64, KernelError> {
        let dom = self.op.interval;
        let h = 1e-4 * dom.len().max(1.0);
        let (a, b) = ((s - h).max(dom.lo), (s + h).min(dom.hi));
        let n = self.op.order();
        let ja = self.jet(a)?;
        let jb = self.jet(b)?;
        let js = self.jet(s)?;
        let top = (jb[n - 1] - ja[n - 1]) / (b - a);
        Ok((top + self.op.apply_lower(s, &js) - (self.forcing)(s)).abs())
    }
}

/// Solve `D y = f`, `y^(j)(r) = init[j]`, over the operator's interval.
pub fn solve_ivp(
    op: &LinearOperator,
    forcing: ScalarFn,
    r: f64,
    init: &[f64],
    tol: Tolerance,
) -> Result<IVPSolution, KernelError> {
    if init.len() != op.order() {
        return Err(KernelError::InitialLength {
            expected: op.order(),
            got: init.len(),
        });
    }
    op.check_point("r", r)?;
    let rhs = op.first_order_rhs(Some(forcing.clone()));
    let traj = integrate(rhs, r, init, op.interval, tol)?;
    Ok(IVPSolution {
        op: op.clone(),
        forcing,
        r,
        init: init.to_vec(),
        repr: Repr::Dense(traj),
    })
}

const CACHE_LIMIT: usize = 1 << 14;

struct KernelInner {
    op: LinearOperator,
    tol: Tolerance,
    columns: Mutex<HashMap<u64, Arc<DenseTrajectory>>>,
}

/// The Lagrange kernel of an operator, solved lazily one column `K(.; r)`
/// at a time and memoized on `r`.
#[derive(Clone)]
pub struct KernelFn {
    inner: Arc<KernelInner>,
}

impl fmt::Debug for KernelFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KernelFn").field("op", &self.inner.op.label).finish()
    }
}

pub fn lagrange_kernel(op: &LinearOperator, tol: Tolerance) -> KernelFn {
    KernelFn {
        inner: Arc::new(KernelInner {
            op: op.clone(),
            tol,
            columns: Mutex::new(HashMap::new()),
        }),
    }
}

fn unit_jet(n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[n - 1] = 1.0;
    v
}

impl KernelFn {
    pub fn operator(&self) -> &LinearOperator {
        &self.inner.op
    }

    /// The column `s -> K(s; r)` over the whole operator interval.
    pub fn column(&self, r: f64) -> Result<Arc<DenseTrajectory>, KernelError> {
        let key = r.to_bits();
        if let Some(c) = self.inner.columns.lock().expect("kernel cache poisoned").get(&key) {
            return Ok(c.clone());
        }
        let op = &self.inner.op;
        op.check_point("r", r)?;
        let traj = integrate(op.first_order_rhs(None), r, &unit_jet(op.order()), op.interval, self.inner.tol)?;
        let traj = Arc::new(traj);
        let mut cache = self.inner.columns.lock().expect("kernel cache poisoned");
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, traj.clone());
        Ok(traj)
    }

    /// `K(s; r)`.
    pub fn eval(&self, s: f64, r: f64) -> Result<f64, KernelError> {
        Ok(self.jet(s, r)?[0])
    }

    /// `(K, dK/ds, ..., d^(n-1)K/ds^(n-1))` at `(s; r)`.
    pub fn jet(&self, s: f64, r: f64) -> Result<Vec<f64>, KernelError> {
        self.inner.op.check_point("s", s)?;
        Ok(self.column(r)?.eval(s)?)
    }

    pub fn cached_columns(&self) -> usize {
        self.inner.columns.lock().expect("kernel cache poisoned").len()
    }

    fn integrate_forcing(&self, f: &ScalarFn, r: f64, s: f64, quad: QuadTolerance) -> Result<Vec<f64>, KernelError> {
        let n = self.inner.op.order();
        let mut failure: Option<KernelError> = None;
        let res = gauss_kronrod_vec(
            |t, out| match self.jet(s, t) {
                Ok(j) => {
                    let ft = f(t);
                    for (o, v) in out.iter_mut().zip(&j) {
                        *o = v * ft;
                    }
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    out.fill(f64::NAN);
                }
            },
            r,
            s,
            n,
            quad,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(res?)
    }
}

/// Solve `D y = f` with zero initial data at `r` through the kernel integral.
pub fn solve_via_kernel(
    op: &LinearOperator,
    forcing: ScalarFn,
    r: f64,
    tol: Tolerance,
) -> Result<IVPSolution, KernelError> {
    op.check_point("r", r)?;
    let kernel = lagrange_kernel(op, tol);
    Ok(IVPSolution {
        op: op.clone(),
        forcing,
        r,
        init: vec![0.0; op.order()],
        repr: Repr::Kernel {
            kernel,
            quad: QuadTolerance::default(),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Positivity {
    CertifiedPositiveOnGrid,
    Violation { s: f64, r: f64, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub operator: String,
    pub interval: DomainInterval,
    pub grid_n: usize,
    pub tolerance: f64,
    pub min_value: f64,
    pub min_at: (f64, f64),
    pub verdict: Positivity,
}

impl PositivityReport {
    pub fn is_positive(&self) -> bool {
        self.verdict == Positivity::CertifiedPositiveOnGrid
    }
}

/// Sample `K(s; r)` for grid points `s > r` of `interval` and certify
/// forward positivity when every value is at least `-tol`.
pub fn check_forward_positive(
    op: &LinearOperator,
    interval: DomainInterval,
    grid_n: usize,
    tol: f64,
) -> Result<PositivityReport, KernelError> {
    if grid_n < 2 {
        return Err(KernelError::InvalidArgument(format!("grid_n must be >= 2, got {grid_n}")));
    }
    if !op.interval.contains_interval(&interval) {
        return Err(KernelError::InvalidArgument(format!(
            "interval [{}, {}] not inside operator interval [{}, {}]",
            interval.lo, interval.hi, op.interval.lo, op.interval.hi
        )));
    }
    let grid = interval.grid(grid_n);
    let rhs = op.first_order_rhs(None);
    let jet0 = unit_jet(op.order());
    let columns: Vec<Result<(f64, f64, f64), KernelError>> = (0..grid_n - 1)
        .into_par_iter()
        .map(|j| {
            let r = grid[j];
            let traj = integrate(rhs.clone(), r, &jet0, DomainInterval::new(r, interval.hi), Tolerance::default())?;
            let mut best = (f64::INFINITY, r, r);
            for &s in &grid[j + 1..] {
                let v = traj.eval(s)?[0];
                if v < best.0 {
                    best = (v, s, r);
                }
            }
            Ok(best)
        })
        .collect();
    let mut min = (f64::INFINITY, interval.lo, interval.lo);
    for c in columns {
        let c = c?;
        if c.0 < min.0 {
            min = c;
        }
    }
    let verdict = if min.0 >= -tol {
        Positivity::CertifiedPositiveOnGrid
    } else {
        Positivity::Violation {
            s: min.1,
            r: min.2,
            value: min.0,
        }
    };
    Ok(PositivityReport {
        operator: op.label.clone(),
        interval,
        grid_n,
        tolerance: tol,
        min_value: min.0,
        min_at: (min.1, min.2),
        verdict,
    })
}

/// Knobs for [`compare_solutions`].
#[derive(Debug, Clone, Copy)]
pub struct ComparisonSettings {
    pub ode: Tolerance,
    /// Sample points for the solution comparison.
    pub grid_n: usize,
    /// Grid for the kernel positivity check.
    pub positivity_grid: usize,
    /// Value tolerance for the sign checks.
    pub sign_tol: f64,
    /// Fixed inequality slack; `None` uses `1e-7 * max(1, |bound|)`.
    pub slack: Option<f64>,
}

impl Default for ComparisonSettings {
    fn default() -> Self {
        ComparisonSettings {
            ode: Tolerance::default(),
            grid_n: 201,
            positivity_grid: 201,
            sign_tol: 1e-9,
            slack: None,
        }
    }
}

/// Which way the coefficients are ordered on the sample grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Order {
    Below,
    Above,
    Equal,
    Crossing,
}

fn coefficient_order(kappa: &ScalarFn, kappa_bar: &ScalarFn, grid: &[f64]) -> (Order, f64) {
    let mut below = true;
    let mut above = true;
    let mut max_gap: f64 = 0.0;
    for &s in grid {
        let d = kappa(s) - kappa_bar(s);
        max_gap = max_gap.max(d.abs());
        if d > 1e-12 {
            below = false;
        }
        if d < -1e-12 {
            above = false;
        }
    }
    let order = match (below, above) {
        (true, true) => Order::Equal,
        (true, false) => Order::Below,
        (false, true) => Order::Above,
        (false, false) => Order::Crossing,
    };
    (order, max_gap)
}

/// Solve `y^(n) + kappa y^(l) = f` and `ybar^(n) + kappa_bar ybar^(l) = f`
/// from the same jet at the left end of `interval` and check that the
/// solutions are ordered opposite to the coefficients.
///
/// Both hypotheses are checked on grids and recorded in the report: forward
/// positivity of the `kappa_bar` kernel, and `y^(l) > -tol` everywhere with
/// `y^(l) > 0` on at least 99% of samples. The report's `lhs <= rhs` is
/// the sampled worst case of `ybar <= y` (or `y <= ybar` when
/// `kappa >= kappa_bar`).
#[allow(clippy::too_many_arguments)]
pub fn compare_solutions(
    kappa: ScalarFn,
    kappa_bar: ScalarFn,
    n: usize,
    l: usize,
    forcing: ScalarFn,
    init: &[f64],
    interval: DomainInterval,
    settings: &ComparisonSettings,
) -> Result<BoundReport, KernelError> {
    let op = LinearOperator::single_term(n, l, Coefficient::Function(kappa.clone()), interval)?;
    let op_bar = LinearOperator::single_term(n, l, Coefficient::Function(kappa_bar.clone()), interval)?;
    let a = interval.lo;
    let y = solve_ivp(&op, forcing.clone(), a, init, settings.ode)?;
    let ybar = solve_ivp(&op_bar, forcing, a, init, settings.ode)?;
    let grid = interval.grid(settings.grid_n);

    let mut hyps = Vec::new();
    let (order, max_gap) = coefficient_order(&kappa, &kappa_bar, &grid);
    hyps.push(Hypothesis::new(
        "coefficients ordered",
        order != Order::Crossing,
        format!("{order:?}, max |kappa - kappa_bar| = {max_gap:.3e}"),
    ));

    let pos = check_forward_positive(&op_bar, interval, settings.positivity_grid, settings.sign_tol)?;
    let detail = match &pos.verdict {
        Positivity::CertifiedPositiveOnGrid => format!("min K = {:.3e}", pos.min_value),
        Positivity::Violation { s, r, value } => format!("K({s}; {r}) = {value:.3e}"),
    };
    hyps.push(Hypothesis::new("(a) kernel forward positive", pos.is_positive(), detail));

    let mut y_vals = Vec::with_capacity(grid.len());
    let mut ybar_vals = Vec::with_capacity(grid.len());
    let mut positive = 0usize;
    let mut worst_l = (f64::INFINITY, a);
    for &s in &grid {
        let jy = y.jet(s)?;
        let d = jy[l];
        if d > 0.0 {
            positive += 1;
        }
        if d < worst_l.0 {
            worst_l = (d, s);
        }
        y_vals.push(jy[0]);
        ybar_vals.push(ybar.value(s)?);
    }
    let frac = positive as f64 / grid.len() as f64;
    let sign_ok = worst_l.0 > -settings.sign_tol && frac >= 0.99;
    hyps.push(Hypothesis::new(
        "(b) y^(l) positive almost everywhere",
        sign_ok,
        format!("min y^({l}) = {:.3e} at s = {}, positive on {:.2}% of samples", worst_l.0, worst_l.1, 100.0 * frac),
    ));

    // lower - upper is maximized at the witness
    let (lower, upper): (&[f64], &[f64]) = match order {
        Order::Above => (&y_vals, &ybar_vals),
        _ => (&ybar_vals, &y_vals),
    };
    let mut worst = 0;
    for i in 0..grid.len() {
        if lower[i] - upper[i] > lower[worst] - upper[worst] {
            worst = i;
        }
    }
    let slack = settings.slack.unwrap_or_else(|| default_slack(upper[worst]));
    let mut report = BoundReport::new(Statement::OdeComparison, hyps, lower[worst], upper[worst], slack)
        .with_witness(grid[worst], "largest sampled excess of the lower solution");

    let last = grid.len() - 1;
    if near_equality(y_vals[last], ybar_vals[last]) {
        report.equality = true;
        if order == Order::Equal {
            report.note("endpoint values agree and the coefficients coincide on the sample grid");
        } else {
            report.note(format!(
                "endpoint values agree to 1e-6 but the coefficients differ by up to {max_gap:.3e}"
            ));
        }
    }
    if order == Order::Equal {
        report.note("coefficients coincide: both orderings apply");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;
    use crate::specialfns::{abar, sk, ybar};

    fn iv(lo: f64, hi: f64) -> DomainInterval {
        DomainInterval::new(lo, hi)
    }

    #[test]
    fn third_derivative_with_constant_forcing() {
        let op = LinearOperator::constant(&[0.0, 0.0, 0.0], iv(0.0, 3.0)).unwrap();
        let y = solve_ivp(&op, constant_fn(0.5), 0.0, &[0.0; 3], Tolerance::default()).unwrap();
        for s in [0.0, 0.5, 1.7, 3.0] {
            assert!((y.value(s).unwrap() - s * s * s / 12.0).abs() < 1e-10);
        }
    }

    #[test]
    fn oscillator_is_sine() {
        let op = LinearOperator::constant(&[1.0, 0.0], iv(0.0, 6.0)).unwrap();
        let y = solve_ivp(&op, constant_fn(0.0), 0.0, &[0.0, 1.0], Tolerance::default()).unwrap();
        for s in [0.3, 2.0, 5.9] {
            assert!((y.value(s).unwrap() - s.sin()).abs() < 1e-9);
        }
        assert!(y.residual(2.0).unwrap() < 1e-6);
    }

    #[test]
    fn interior_initial_point() {
        let op = LinearOperator::constant(&[0.0, -1.0, 0.0], iv(-1.0, 2.0)).unwrap();
        let y = solve_ivp(&op, constant_fn(0.0), 0.0, &[0.0, 1.0, 0.0], Tolerance::default()).unwrap();
        assert!((y.value(1.0).unwrap() - 1f64.sinh()).abs() < 1e-10);
        assert!((y.value(-1.0).unwrap() + 1f64.sinh()).abs() < 1e-10);
    }

    #[test]
    fn bad_arguments() {
        let op = LinearOperator::constant(&[0.0, 0.0], iv(0.0, 1.0)).unwrap();
        assert!(matches!(
            solve_ivp(&op, constant_fn(0.0), 0.0, &[0.0], Tolerance::default()),
            Err(KernelError::InitialLength { expected: 2, got: 1 })
        ));
        assert!(solve_ivp(&op, constant_fn(0.0), 2.0, &[0.0, 0.0], Tolerance::default()).is_err());
        assert!(LinearOperator::new(vec![], iv(0.0, 1.0)).is_err());
        assert!(LinearOperator::single_term(2, 2, Coefficient::Zero, iv(0.0, 1.0)).is_err());
    }

    #[test]
    fn kernel_closed_forms() {
        for k in [-4.0, -1.0, 0.0, 1.0, 4.0] {
            let p = lagrange_kernel(&LinearOperator::constant(&[k, 0.0], iv(0.0, 2.0)).unwrap(), Tolerance::default());
            let q = lagrange_kernel(
                &LinearOperator::constant(&[0.0, k, 0.0], iv(0.0, 2.0)).unwrap(),
                Tolerance::default(),
            );
            for r in [0.0, 0.4, 1.1] {
                for s in [0.0, 0.7, 1.3, 2.0] {
                    assert!((p.eval(s, r).unwrap() - sk(k, s - r)).abs() < 1e-8);
                    assert!((q.eval(s, r).unwrap() - ybar(k, s - r)).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn kernel_memoizes_columns() {
        let op = LinearOperator::constant(&[0.0, 1.0, 0.0], iv(0.0, 1.0)).unwrap();
        let k = lagrange_kernel(&op, Tolerance::default());
        k.eval(0.5, 0.2).unwrap();
        k.eval(0.9, 0.2).unwrap();
        assert_eq!(k.cached_columns(), 1);
        assert_eq!(k.jet(0.2, 0.2).unwrap(), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn kernel_solution_matches_closed_form() {
        let op = LinearOperator::constant(&[0.0, 1.0, 0.0], iv(0.0, 2.0)).unwrap();
        let y = solve_via_kernel(&op, constant_fn(0.5), 0.0, Tolerance::default()).unwrap();
        for s in [0.0, 0.6, 2.0] {
            let j = y.jet(s).unwrap();
            assert!((j[0] - abar(1.0, s)).abs() < 1e-9);
            assert!((j[1] - 0.5 * ybar(1.0, s)).abs() < 1e-9);
        }
        let zero = solve_via_kernel(&op, constant_fn(0.0), 0.0, Tolerance::default()).unwrap();
        assert_eq!(zero.value(1.5).unwrap(), 0.0);
    }

    #[test]
    fn positivity_examples() {
        let q = LinearOperator::constant(&[0.0, 3.0, 0.0], iv(0.0, 5.0)).unwrap();
        assert!(check_forward_positive(&q, q.interval(), 41, 1e-9).unwrap().is_positive());
        // sin(2(s - r))/2 changes sign once s - r > pi/2
        let p = LinearOperator::constant(&[4.0, 0.0], iv(0.0, 2.0)).unwrap();
        let rep = check_forward_positive(&p, p.interval(), 41, 1e-9).unwrap();
        assert!(matches!(rep.verdict, Positivity::Violation { .. }));
        assert!(rep.min_value < -1e-9);
        let var = LinearOperator::single_term(
            3,
            1,
            Coefficient::Function(Arc::new(|s: f64| -1.0 + 0.5 * s.sin())),
            iv(0.0, 4.0),
        )
        .unwrap();
        assert!(check_forward_positive(&var, var.interval(), 41, 1e-9).unwrap().is_positive());
    }

    #[test]
    fn comparison_examples() {
        let set = ComparisonSettings {
            positivity_grid: 41,
            ..Default::default()
        };
        let rep = compare_solutions(
            constant_fn(-1.0),
            constant_fn(0.0),
            3,
            1,
            constant_fn(0.5),
            &[0.0; 3],
            iv(0.0, 2.0),
            &set,
        )
        .unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert!(!rep.equality);

        let rep = compare_solutions(
            constant_fn(0.0),
            constant_fn(1.0),
            2,
            0,
            constant_fn(0.0),
            &[0.0, 1.0],
            iv(0.0, std::f64::consts::PI),
            &set,
        )
        .unwrap();
        assert!(rep.holds(), "{rep:?}");

        let same = compare_solutions(
            constant_fn(-0.5),
            constant_fn(-0.5),
            3,
            1,
            constant_fn(0.5),
            &[0.0; 3],
            iv(0.0, 1.0),
            &set,
        )
        .unwrap();
        assert!(same.holds() && same.equality);
    }

    #[test]
    fn comparison_reports_failed_positivity() {
        // kernel of y'' + 4y is not forward positive on [0, 3]
        let set = ComparisonSettings {
            positivity_grid: 41,
            ..Default::default()
        };
        let rep = compare_solutions(
            constant_fn(0.0),
            constant_fn(4.0),
            2,
            0,
            constant_fn(0.0),
            &[0.0, 1.0],
            iv(0.0, 3.0),
            &set,
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::HypothesesFailed);
        assert!(rep.failed_hypotheses().any(|h| h.name.starts_with("(a)")));
    }
}
