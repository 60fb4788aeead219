//! Seeded random sweeps over the comparison statements.
//!
//! Trial `i` draws from its own ChaCha stream `(seed, i)`, so results do
//! not depend on how trials are scheduled across threads.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::compare::{
    area_compare, area_sandwich_check, coord_bounds_check, random_curvature, verify_triangle_bound, CompareError,
    CompareSettings, TriangleBound,
};
use crate::curve::{reconstruct_from_curvature, AdaptedFrame, AffineCurve};
use crate::odekernel::{compare_solutions, constant_fn, ComparisonSettings, ScalarFn};
use crate::report::{BoundReport, Verdict};
use crate::specialfns::DomainInterval;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepParams {
    pub k0: f64,
    pub k1: f64,
    /// Arc length `L`; its meaning per statement is documented on each sweep.
    pub length: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub trial: usize,
    pub case: String,
    pub report: BoundReport,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub holds: usize,
    pub violated: usize,
    pub hypotheses_failed: usize,
    pub equality: usize,
}

pub fn summarize(trials: &[TrialReport]) -> SweepSummary {
    let mut s = SweepSummary::default();
    for t in trials {
        match t.report.verdict {
            Verdict::Holds => s.holds += 1,
            Verdict::Violated => s.violated += 1,
            Verdict::HypothesesFailed => s.hypotheses_failed += 1,
        }
        s.equality += t.report.equality as usize;
    }
    s
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn check(p: &SweepParams) -> Result<(), CompareError> {
    if !(p.k0 <= p.k1) || !p.k0.is_finite() || !p.k1.is_finite() {
        return Err(CompareError::Invalid(format!("need finite k0 <= k1, got {} and {}", p.k0, p.k1)));
    }
    if !(p.length > 0.0) || !p.length.is_finite() {
        return Err(CompareError::Invalid(format!("length must be positive, got {}", p.length)));
    }
    Ok(())
}

fn run<T, F>(p: &SweepParams, f: F) -> Result<Vec<T>, CompareError>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> Result<T, CompareError> + Sync,
{
    check(p)?;
    (0..p.trials)
        .into_par_iter()
        .map(|i| f(i, &mut trial_rng(p.seed, i)))
        .collect()
}

/// Random curvature with values in `[k0, k1]`; constant when `k0 = k1`.
fn curvature_in(rng: &mut ChaCha8Rng, k0: f64, k1: f64) -> ScalarFn {
    if k0 == k1 {
        constant_fn(k0)
    } else {
        random_curvature(rng, k0, k1)
    }
}

/// `k0 + (upper - k0) u` with random `u` in `[0, 1]`: a curvature between
/// `k0` and a given upper curvature.
fn curvature_below(rng: &mut ChaCha8Rng, k0: f64, upper: ScalarFn) -> ScalarFn {
    let u = random_curvature(rng, 0.0, 1.0);
    Arc::new(move |s| k0 + (upper(s) - k0) * u(s))
}

fn reconstruct(kappa: ScalarFn, lo: f64, hi: f64) -> Result<AffineCurve, CompareError> {
    Ok(reconstruct_from_curvature(kappa, DomainInterval::new(lo, hi), 0.0, AdaptedFrame::standard())?)
}

/// `y^(n) + kappa y^(l) = 1` against `kappa_bar = k1`, with `kappa` random
/// in `[k0, k1]` on `[0, L]` and zero initial data.
pub fn ode_comparison_sweep(
    p: &SweepParams,
    n: usize,
    l: usize,
    settings: &ComparisonSettings,
) -> Result<Vec<TrialReport>, CompareError> {
    let interval = DomainInterval::new(0.0, p.length);
    run(p, |trial, rng| {
        let kappa = curvature_in(rng, p.k0, p.k1);
        let init = vec![0.0; n];
        let report = compare_solutions(kappa, constant_fn(p.k1), n, l, constant_fn(1.0), &init, interval, settings)?;
        Ok(TrialReport {
            trial,
            case: "kappa_bar = k1".into(),
            report,
        })
    })
}

/// Area comparison on `[0, L]` with `kappa <= kappa_bar`. Trials cycle
/// through the positivity cases for `kappa_bar`: constant `k1`, a random
/// function `<= min(k1, 0)`, and a random function `<= k1`.
pub fn area_comparison_sweep(p: &SweepParams, settings: &CompareSettings) -> Result<Vec<TrialReport>, CompareError> {
    run(p, |trial, rng| {
        let lower = if trial % 3 == 1 { p.k0.min(0.0) } else { p.k0 };
        let (case, kappa_bar) = match trial % 3 {
            0 => ("constant kappa_bar", constant_fn(p.k1)),
            1 => ("kappa_bar <= 0", curvature_in(rng, lower, p.k1.min(0.0))),
            _ => ("kappa_bar <= k1", curvature_in(rng, p.k0, p.k1)),
        };
        let kappa = curvature_below(rng, lower, kappa_bar.clone());
        let c = reconstruct(kappa, 0.0, p.length)?;
        Ok(TrialReport {
            trial,
            case: case.into(),
            report: area_compare(&c, kappa_bar, p.length, settings)?,
        })
    })
}

/// Two-sided area bounds on `[0, L]` for random `kappa` in `[k0, k1]`.
pub fn sandwich_sweep(p: &SweepParams, settings: &CompareSettings) -> Result<Vec<TrialReport>, CompareError> {
    run(p, |trial, rng| {
        let c = reconstruct(curvature_in(rng, p.k0, p.k1), 0.0, p.length)?;
        Ok(TrialReport {
            trial,
            case: "kappa in [k0, k1]".into(),
            report: area_sandwich_check(&c, p.k0, p.k1, p.length, settings)?,
        })
    })
}

/// Adapted-coordinate bounds at `s0 = 0` for random `kappa` in `[k0, k1]`
/// on `[-L, L]`.
pub fn coordinate_sweep(p: &SweepParams, settings: &CompareSettings) -> Result<Vec<TrialReport>, CompareError> {
    run(p, |trial, rng| {
        let c = reconstruct(curvature_in(rng, p.k0, p.k1), -p.length, p.length)?;
        Ok(TrialReport {
            trial,
            case: "kappa in [k0, k1]".into(),
            report: coord_bounds_check(&c, 0.0, p.k0, p.k1, p.length, settings)?,
        })
    })
}

/// `per_curve` random inscribed triangles on each of `trials` random arcs
/// of length `L` with `kappa` in `[k0, k1]`. Every triangle is a report.
pub fn triangle_sweep(
    p: &SweepParams,
    kind: TriangleBound,
    per_curve: usize,
    settings: &CompareSettings,
) -> Result<Vec<TrialReport>, CompareError> {
    let nested = run(p, |trial, rng| {
        let c = reconstruct(curvature_in(rng, p.k0, p.k1), 0.0, p.length)?;
        (0..per_curve)
            .map(|j| {
                let params = random_vertices(rng, p.length);
                Ok(TrialReport {
                    trial,
                    case: format!("triangle {j}"),
                    report: verify_triangle_bound(&c, params, kind, p.k0, p.k1, settings)?,
                })
            })
            .collect::<Result<Vec<_>, CompareError>>()
    })?;
    Ok(nested.into_iter().flatten().collect())
}

/// Three increasing parameters in `[0, L]`, occasionally pinned to the
/// ends and the midpoint.
pub fn random_vertices<R: Rng + ?Sized>(rng: &mut R, l: f64) -> [f64; 3] {
    if rng.random_bool(0.05) {
        return [0.0, 0.5 * l, l];
    }
    loop {
        let mut v = [rng.random_range(0.0..=l), rng.random_range(0.0..=l), rng.random_range(0.0..=l)];
        v.sort_by(f64::total_cmp);
        if v[1] - v[0] > 1e-9 * l && v[2] - v[1] > 1e-9 * l {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k0: f64, k1: f64, length: f64, trials: usize) -> SweepParams {
        SweepParams {
            k0,
            k1,
            length,
            trials,
            seed: 0,
        }
    }

    #[test]
    fn sweeps_are_deterministic() {
        let p = params(-1.0, 0.0, 2.0, 6);
        let s = CompareSettings::default();
        let a = area_comparison_sweep(&p, &s).unwrap();
        let b = area_comparison_sweep(&p, &s).unwrap();
        let lhs: Vec<f64> = a.iter().map(|t| t.report.lhs).collect();
        assert_eq!(lhs, b.iter().map(|t| t.report.lhs).collect::<Vec<_>>());
        assert_eq!(summarize(&a).holds, 6, "{a:#?}");
    }

    #[test]
    fn ode_sweep_gates_on_conjugate_points() {
        let s = ComparisonSettings::default();
        let ok = ode_comparison_sweep(&params(-1.0, 1.0, 2.0, 3), 2, 0, &s).unwrap();
        assert_eq!(summarize(&ok).holds, 3, "{ok:#?}");
        let k1 = (std::f64::consts::PI / 2.0).powi(2) * 1.5;
        let bad = ode_comparison_sweep(&params(-1.0, k1, 2.0, 3), 2, 0, &s).unwrap();
        assert_eq!(summarize(&bad).hypotheses_failed, 3);
    }

    #[test]
    fn constant_curvature_sweep_hits_equality() {
        let p = params(-0.5, -0.5, 1.0, 2);
        let r = coordinate_sweep(&p, &CompareSettings::default()).unwrap();
        let sum = summarize(&r);
        assert_eq!((sum.holds, sum.equality), (2, 2), "{r:#?}");
    }

    #[test]
    fn triangle_sweep_counts_every_triangle() {
        let p = params(-1.0, 0.0, 1.5, 3);
        let r = triangle_sweep(&p, TriangleBound::Rect, 20, &CompareSettings::default()).unwrap();
        assert_eq!(r.len(), 60);
        assert_eq!(summarize(&r).holds, 60);
    }

    #[test]
    fn bad_parameters_are_rejected() {
        let s = CompareSettings::default();
        assert!(sandwich_sweep(&params(1.0, 0.0, 1.0, 1), &s).is_err());
        assert!(sandwich_sweep(&params(0.0, 1.0, -1.0, 1), &s).is_err());
    }
}
