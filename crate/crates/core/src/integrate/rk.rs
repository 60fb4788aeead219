use std::sync::Arc;

use thiserror::Error;

use crate::specialfns::DomainInterval;

/// Right-hand side `dy/dt = f(t, y)` writing into the output slice.
pub type OdeRhs = Arc<dyn Fn(f64, &[f64], &mut [f64]) + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("step size underflow at t = {at}")]
    StepUnderflow { at: f64 },
    #[error("solution became non-finite at t = {at}")]
    NonFinite { at: f64 },
    #[error("step budget exhausted at t = {at}")]
    TooManySteps { at: f64 },
    #[error("initial point {t0} outside [{lo}, {hi}]")]
    InitialPointOutside { t0: f64, lo: f64, hi: f64 },
    #[error("expected {expected} initial values, got {got}")]
    InitialLength { expected: usize, got: usize },
    #[error("evaluation point {t} outside [{lo}, {hi}]")]
    OutsideDomain { t: f64, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rtol: 1e-10,
            atol: 1e-12,
        }
    }
}

const MAX_STEPS: usize = 200_000;

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct Stages {
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
}

impl Stages {
    fn new(dim: usize) -> Self {
        Stages {
            k: std::array::from_fn(|_| vec![0.0; dim]),
            tmp: vec![0.0; dim],
        }
    }
}

/// One Dormand–Prince step. `st.k[0]` must hold `f(t, y)` on entry.
/// Writes the 5th order result to `out` and returns it; `st.k[6]` is `f(t + h, out)`.
fn dp_step(rhs: &OdeRhs, t: f64, y: &[f64], h: f64, st: &mut Stages, out: &mut [f64]) {
    let dim = y.len();
    for s in 1..7 {
        for i in 0..dim {
            let mut acc = 0.0;
            for (j, a) in A[s].iter().enumerate().take(s) {
                acc += a * st.k[j][i];
            }
            st.tmp[i] = y[i] + h * acc;
        }
        rhs(t + C[s] * h, &st.tmp, &mut st.k[s]);
    }
    // stage 7 was evaluated at the 5th order solution, which is tmp
    out.copy_from_slice(&st.tmp);
}

fn error_norm(y0: &[f64], y1: &[f64], st: &Stages, h: f64, tol: Tolerance) -> f64 {
    let dim = y0.len();
    let mut acc = 0.0;
    for i in 0..dim {
        let mut e = 0.0;
        for (j, ej) in E.iter().enumerate() {
            e += ej * st.k[j][i];
        }
        e *= h;
        let sc = tol.atol + tol.rtol * y0[i].abs().max(y1[i].abs());
        acc += (e / sc).powi(2);
    }
    (acc / dim as f64).sqrt()
}

fn rms(v: &[f64], scale: &[f64]) -> f64 {
    (v.iter().zip(scale).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / v.len() as f64).sqrt()
}

/// Accepted mesh of one integration direction (flat state storage).
#[derive(Debug, Clone, Default)]
struct Mesh {
    times: Vec<f64>,
    states: Vec<f64>,
}

impl Mesh {
    fn push(&mut self, t: f64, y: &[f64]) {
        self.times.push(t);
        self.states.extend_from_slice(y);
    }

    fn state(&self, i: usize, dim: usize) -> &[f64] {
        &self.states[i * dim..(i + 1) * dim]
    }
}

fn initial_step(rhs: &OdeRhs, t0: f64, y0: &[f64], f0: &[f64], dir: f64, tol: Tolerance) -> f64 {
    let sc: Vec<f64> = y0.iter().map(|y| tol.atol + tol.rtol * y.abs()).collect();
    let d0 = rms(y0, &sc);
    let d1 = rms(f0, &sc);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, f)| y + dir * h0 * f).collect();
    let mut f1 = vec![0.0; y0.len()];
    rhs(t0 + dir * h0, &y1, &mut f1);
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms(&diff, &sc) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}

fn integrate_direction(
    rhs: &OdeRhs,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    tol: Tolerance,
) -> Result<Mesh, OdeError> {
    let dim = y0.len();
    let mut mesh = Mesh::default();
    mesh.push(t0, y0);
    if t_end == t0 {
        return Ok(mesh);
    }
    let dir = (t_end - t0).signum();
    let mut st = Stages::new(dim);
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut y_new = vec![0.0; dim];
    rhs(t, &y, &mut st.k[0]);
    let mut h = initial_step(rhs, t0, y0, &st.k[0].clone(), dir, tol).min((t_end - t0).abs());
    let mut last_rejected = false;
    for _ in 0..MAX_STEPS {
        let remaining = (t_end - t).abs();
        if remaining <= 0.0 {
            return Ok(mesh);
        }
        let mut finishing = false;
        if h >= remaining * (1.0 - 1e-12) {
            h = remaining;
            finishing = true;
        }
        if h <= 1e-13 * t.abs().max(1.0) {
            return Err(OdeError::StepUnderflow { at: t });
        }
        dp_step(rhs, t, &y, dir * h, &mut st, &mut y_new);
        let err = error_norm(&y, &y_new, &st, h, tol);
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            if h <= 1e-13 * t.abs().max(1.0) * 10.0 {
                return Err(OdeError::NonFinite { at: t });
            }
            h *= 0.1;
            last_rejected = true;
            continue;
        }
        if err <= 1.0 {
            t = if finishing { t_end } else { t + dir * h };
            std::mem::swap(&mut y, &mut y_new);
            mesh.push(t, &y);
            let k6 = std::mem::take(&mut st.k[6]);
            st.k[6] = std::mem::replace(&mut st.k[0], k6);
            if finishing {
                return Ok(mesh);
            }
            let mut fac = 0.9 * err.max(1e-10).powf(-0.2);
            fac = fac.clamp(0.2, 5.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            h *= fac;
            last_rejected = false;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            last_rejected = true;
        }
    }
    Err(OdeError::TooManySteps { at: t })
}

/// Solution of an ODE initial value problem on a closed interval, with
/// evaluation at arbitrary points.
///
/// Off-mesh values are produced by a single Dormand–Prince step from the
/// nearest accepted mesh point towards the initial point, which is never
/// longer than the accepted step that covered it.
#[derive(Clone)]
pub struct DenseTrajectory {
    rhs: OdeRhs,
    dim: usize,
    t0: f64,
    domain: DomainInterval,
    forward: Mesh,
    backward: Mesh,
}

impl std::fmt::Debug for DenseTrajectory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DenseTrajectory")
            .field("dim", &self.dim)
            .field("t0", &self.t0)
            .field("domain", &self.domain)
            .field("steps", &(self.forward.times.len() + self.backward.times.len()))
            .finish()
    }
}

/// Integrate `y' = rhs(t, y)`, `y(t0) = y0` over all of `domain`.
pub fn integrate(
    rhs: OdeRhs,
    t0: f64,
    y0: &[f64],
    domain: DomainInterval,
    tol: Tolerance,
) -> Result<DenseTrajectory, OdeError> {
    if !domain.contains(t0) {
        return Err(OdeError::InitialPointOutside {
            t0,
            lo: domain.lo,
            hi: domain.hi,
        });
    }
    let forward = integrate_direction(&rhs, t0, y0, domain.hi, tol)?;
    let backward = integrate_direction(&rhs, t0, y0, domain.lo, tol)?;
    Ok(DenseTrajectory {
        rhs,
        dim: y0.len(),
        t0,
        domain,
        forward,
        backward,
    })
}

impl DenseTrajectory {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> DomainInterval {
        self.domain
    }

    pub fn initial_point(&self) -> f64 {
        self.t0
    }

    pub fn mesh_len(&self) -> usize {
        self.forward.times.len() + self.backward.times.len() - 1
    }

    /// State at `t`, rejecting points outside the domain (relative slack 1e-12).
    pub fn eval(&self, t: f64) -> Result<Vec<f64>, OdeError> {
        let slack = 1e-12 * self.domain.len().max(1.0);
        if !self.domain.contains_approx(t, slack) || t.is_nan() {
            return Err(OdeError::OutsideDomain {
                t,
                lo: self.domain.lo,
                hi: self.domain.hi,
            });
        }
        Ok(self.eval_unchecked(t))
    }

    /// State at `t`; outside the domain this extrapolates one step from the boundary.
    pub fn eval_unchecked(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(t, &mut out);
        out
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let (mesh, forward) = if t >= self.t0 {
            (&self.forward, true)
        } else {
            (&self.backward, false)
        };
        // last mesh index whose time has not passed t (in integration direction)
        let idx = if forward {
            mesh.times.partition_point(|&m| m <= t)
        } else {
            mesh.times.partition_point(|&m| m >= t)
        }
        .max(1)
            - 1;
        let tm = mesh.times[idx];
        let ym = mesh.state(idx, self.dim);
        if tm == t {
            out.copy_from_slice(ym);
            return;
        }
        let mut st = Stages::new(self.dim);
        (self.rhs)(tm, ym, &mut st.k[0]);
        dp_step(&self.rhs, tm, ym, t - tm, &mut st, out);
    }

    /// Accepted mesh points in increasing order.
    pub fn mesh_points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.backward.times.iter().rev().copied().collect();
        pts.extend(self.forward.times.iter().skip(1));
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator() -> OdeRhs {
        Arc::new(|_t, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -y[0];
        })
    }

    #[test]
    fn harmonic_oscillator_dense() {
        let dom = DomainInterval::new(-3.0, 10.0);
        let sol = integrate(oscillator(), 0.0, &[0.0, 1.0], dom, Tolerance::default()).unwrap();
        for i in 0..=130 {
            let t = -3.0 + 0.1 * i as f64;
            let y = sol.eval(t).unwrap();
            assert!((y[0] - t.sin()).abs() < 1e-9, "t={t} err={}", y[0] - t.sin());
            assert!((y[1] - t.cos()).abs() < 1e-9);
        }
        assert!(sol.eval(10.5).is_err());
    }

    #[test]
    fn exponential_growth_relative_accuracy() {
        let rhs: OdeRhs = Arc::new(|_t, y: &[f64], dy: &mut [f64]| dy[0] = y[0]);
        let sol = integrate(rhs, 0.0, &[1.0], DomainInterval::new(0.0, 20.0), Tolerance::default())
            .unwrap();
        let v = sol.eval(20.0).unwrap()[0];
        assert!((v / 20f64.exp() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn blow_up_is_reported() {
        let rhs: OdeRhs = Arc::new(|_t, y: &[f64], dy: &mut [f64]| dy[0] = y[0] * y[0]);
        let res = integrate(rhs, 0.0, &[1.0], DomainInterval::new(0.0, 2.0), Tolerance::default());
        match res {
            Err(OdeError::StepUnderflow { at }) | Err(OdeError::NonFinite { at }) => {
                assert!((at - 1.0).abs() < 1e-2, "at = {at}")
            }
            other => panic!("expected failure near t=1, got {other:?}"),
        }
    }

    #[test]
    fn rejects_initial_point_outside() {
        let r = integrate(oscillator(), 5.0, &[0.0, 1.0], DomainInterval::new(0.0, 1.0), Tolerance::default());
        assert!(matches!(r, Err(OdeError::InitialPointOutside { .. })));
    }
}
