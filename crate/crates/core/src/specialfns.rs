//! The k-parametric trigonometric functions `c_k`, `s_k` and the constant
//! curvature comparison profiles built from them.
//!
//! For `k > 0` the functions are the ordinary circular functions rescaled by
//! `sqrt(k)`, for `k < 0` the hyperbolic ones, and `k = 0` is the polynomial
//! limit. Every function is evaluated by its Taylor series in `x = k s^2` when
//! `|x|` is small so that values are smooth (and accurate) across `k = 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roots::invert_increasing;

/// `|k s^2|` below which the series branch is used.
pub const SERIES_SWITCH: f64 = 0.5;

/// Absolute argument tolerance of the inverse functions.
pub const INVERSE_TOL: f64 = 1e-12;

const MAX_SERIES_TERMS: usize = 40;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialFnError {
    #[error("{function}: argument {arg} outside [{lo}, {hi}]")]
    OutOfDomain {
        function: &'static str,
        arg: f64,
        lo: f64,
        hi: f64,
    },
    #[error("{function}: non-finite input")]
    NonFinite { function: &'static str },
}

/// A closed real interval `[lo, hi]`; `hi` may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainInterval {
    pub lo: f64,
    pub hi: f64,
}

impl DomainInterval {
    /// Panics if `lo > hi` or either end is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        Self::try_new(lo, hi).expect("DomainInterval requires lo <= hi")
    }

    pub fn try_new(lo: f64, hi: f64) -> Option<Self> {
        (lo <= hi).then_some(DomainInterval { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    pub fn contains(&self, s: f64) -> bool {
        self.lo <= s && s <= self.hi
    }

    /// Containment with an absolute slack at both ends.
    pub fn contains_approx(&self, s: f64, slack: f64) -> bool {
        self.lo - slack <= s && s <= self.hi + slack
    }

    pub fn contains_interval(&self, other: &DomainInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// `n >= 2` evenly spaced points including both endpoints.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let n = n.max(2);
        let h = self.len() / (n - 1) as f64;
        (0..n)
            .map(|i| if i == n - 1 { self.hi } else { self.lo + h * i as f64 })
            .collect()
    }
}

/// Curvature constant selecting the oscillatory, parabolic or hyperbolic branch.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct KParam(pub f64);

impl From<f64> for KParam {
    fn from(k: f64) -> Self {
        KParam(k)
    }
}

/// Sum of `(-x)^n / (2n + offset)!` for n >= 0.
fn series(x: f64, offset: u32) -> f64 {
    let mut denom = 1.0;
    for i in 1..=offset {
        denom *= i as f64;
    }
    let mut term = 1.0 / denom;
    let mut sum = term;
    for n in 1..MAX_SERIES_TERMS as u32 {
        let a = (2 * n + offset - 1) as f64;
        let b = (2 * n + offset) as f64;
        term *= -x / (a * b);
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-2 * sum.abs() {
            break;
        }
    }
    sum
}

#[inline]
fn use_series(k: f64, s: f64) -> bool {
    (k * s * s).abs() < SERIES_SWITCH
}

/// `c_k(s)`: cos(sqrt(k) s), 1 or cosh(sqrt(-k) s).
pub fn ck(k: f64, s: f64) -> f64 {
    if use_series(k, s) {
        series(k * s * s, 0)
    } else if k > 0.0 {
        (k.sqrt() * s).cos()
    } else {
        ((-k).sqrt() * s).cosh()
    }
}

/// `s_k(s)`: the solution of `u'' + k u = 0`, `u(0) = 0`, `u'(0) = 1`.
pub fn sk(k: f64, s: f64) -> f64 {
    if use_series(k, s) {
        s * series(k * s * s, 1)
    } else if k > 0.0 {
        let r = k.sqrt();
        (r * s).sin() / r
    } else {
        let r = (-k).sqrt();
        (r * s).sinh() / r
    }
}

/// Tangential coordinate of the unit-speed constant curvature `k` curve.
pub fn xbar(k: f64, s: f64) -> f64 {
    sk(k, s)
}

/// Normal coordinate `(1 - c_k(s)) / k` of the constant curvature `k` curve.
pub fn ybar(k: f64, s: f64) -> f64 {
    if use_series(k, s) {
        s * s * series(k * s * s, 2)
    } else if k > 0.0 {
        let h = (k.sqrt() * s * 0.5).sin();
        2.0 * h * h / k
    } else {
        let h = ((-k).sqrt() * s * 0.5).sinh();
        2.0 * h * h / -k
    }
}

/// Area `(s - s_k(s)) / (2k)` swept by the constant curvature `k` curve
/// against its chord from the base point.
pub fn abar(k: f64, s: f64) -> f64 {
    if use_series(k, s) {
        0.5 * s * s * s * series(k * s * s, 3)
    } else {
        (s - sk(k, s)) / (2.0 * k)
    }
}

/// Right end of the interval on which `hk` is a homeomorphism (`+inf` for k <= 0).
pub fn hk_domain(k: f64) -> DomainInterval {
    if k > 0.0 {
        DomainInterval::new(0.0, PI / (2.0 * k.sqrt()))
    } else {
        DomainInterval::new(0.0, f64::INFINITY)
    }
}

/// Range of `hk` over `hk_domain(k)`.
pub fn gk_domain(k: f64) -> DomainInterval {
    if k > 0.0 {
        DomainInterval::new(0.0, k.powf(-1.5))
    } else {
        DomainInterval::new(0.0, f64::INFINITY)
    }
}

fn hk_raw(k: f64, s: f64) -> f64 {
    xbar(k, s) * ybar(k, s)
}

fn hk_and_derivative(k: f64, s: f64) -> (f64, f64) {
    let x = xbar(k, s);
    let y = ybar(k, s);
    (x * y, ck(k, s) * y + x * x)
}

/// `H_k(s) = xbar_k(s) * ybar_k(s)`, half the area of the comparison rectangle.
pub fn hk(k: f64, s: f64) -> Result<f64, SpecialFnError> {
    if !k.is_finite() || !s.is_finite() {
        return Err(SpecialFnError::NonFinite { function: "hk" });
    }
    let dom = hk_domain(k);
    if s < 0.0 || s > dom.hi {
        return Err(SpecialFnError::OutOfDomain {
            function: "hk",
            arg: s,
            lo: dom.lo,
            hi: dom.hi,
        });
    }
    if k > 0.0 && s == dom.hi {
        return Ok(k.powf(-1.5));
    }
    Ok(hk_raw(k, s))
}

/// Inverse of [`hk`] on `gk_domain(k)`.
pub fn gk(k: f64, a: f64) -> Result<f64, SpecialFnError> {
    if !k.is_finite() || !a.is_finite() {
        return Err(SpecialFnError::NonFinite { function: "gk" });
    }
    let range = gk_domain(k);
    if a < 0.0 || a > range.hi {
        return Err(SpecialFnError::OutOfDomain {
            function: "gk",
            arg: a,
            lo: range.lo,
            hi: range.hi,
        });
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    if k == 0.0 {
        return Ok((2.0 * a).cbrt());
    }
    if k > 0.0 {
        let hi = hk_domain(k).hi;
        if a == range.hi {
            return Ok(hi);
        }
        return Ok(invert_increasing(|s| hk_and_derivative(k, s), a, 0.0, hi, INVERSE_TOL));
    }
    let hi = grow_bracket(|s| hk_raw(k, s), a, (2.0 * a).cbrt());
    Ok(invert_increasing(|s| hk_and_derivative(k, s), a, 0.0, hi, INVERSE_TOL))
}

/// Inverse of [`abar`] on `[0, inf)`.
pub fn fk(k: f64, a: f64) -> Result<f64, SpecialFnError> {
    if !k.is_finite() || !a.is_finite() {
        return Err(SpecialFnError::NonFinite { function: "fk" });
    }
    if a < 0.0 {
        return Err(SpecialFnError::OutOfDomain {
            function: "fk",
            arg: a,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    if k == 0.0 {
        return Ok((12.0 * a).cbrt());
    }
    let hi = grow_bracket(|s| abar(k, s), a, (12.0 * a).cbrt());
    Ok(invert_increasing(
        |s| (abar(k, s), 0.5 * ybar(k, s)),
        a,
        0.0,
        hi,
        INVERSE_TOL,
    ))
}

/// Smallest `guess * 2^j` with `f >= target`, for increasing unbounded `f`.
fn grow_bracket(f: impl Fn(f64) -> f64, target: f64, guess: f64) -> f64 {
    let mut hi = guess.max(f64::MIN_POSITIVE);
    while f(hi) < target && hi.is_finite() {
        hi *= 2.0;
    }
    hi
}
