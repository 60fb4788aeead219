//! Curves parameterized by affine arc length.

use std::fmt;
use std::sync::Arc;

use super::frame::AdaptedFrame;
use super::raw::{affine_arclength, ParametricCurve};
use super::vector::{wedge, AffineMap, PlaneVector};
use super::CurveError;
use crate::integrate::{integrate, DenseTrajectory, OdeRhs, Tolerance};
use crate::odekernel::ScalarFn;
use crate::specialfns::{ck, sk, xbar, ybar, DomainInterval};

/// `(c, c', c'', c''')` at one parameter value.
pub type Jet3 = [PlaneVector; 4];

#[derive(Clone)]
enum Repr {
    /// `origin + xbar_k(s - s0) T + ybar_k(s - s0) N`.
    Constant { k: f64, s0: f64, frame: AdaptedFrame },
    /// A raw curve composed with the solution `t(s)` of `dt/ds = (c' ∧ c'')^(-1/3)`.
    Reparam { raw: Arc<dyn ParametricCurve>, t_of_s: DenseTrajectory },
    /// Solution of `c''' = -kappa c'` for the state `(c, c', c'')`.
    Reconstructed { kappa: ScalarFn, traj: DenseTrajectory },
    Moved { inner: Box<AffineCurve>, motion: AffineMap },
}

/// A plane curve with unit affine speed, `c' ∧ c'' = 1`, on a closed
/// parameter interval.
#[derive(Clone)]
pub struct AffineCurve {
    domain: DomainInterval,
    repr: Repr,
}

impl fmt::Debug for AffineCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.repr {
            Repr::Constant { k, .. } => format!("constant curvature {k}"),
            Repr::Reparam { .. } => "reparameterized".to_string(),
            Repr::Reconstructed { .. } => "reconstructed".to_string(),
            Repr::Moved { .. } => "moved".to_string(),
        };
        f.debug_struct("AffineCurve")
            .field("domain", &self.domain)
            .field("kind", &kind)
            .finish()
    }
}

const FRAME_TOL: f64 = 1e-9;

impl AffineCurve {
    /// The constant curvature `k` curve through `frame.origin` at `s0`, with
    /// `c'(s0) = frame.tangent`, `c''(s0) = frame.normal`.
    pub fn constant_curvature(k: f64, s0: f64, frame: AdaptedFrame, domain: DomainInterval) -> Result<Self, CurveError> {
        let det = frame.determinant();
        if (det - 1.0).abs() > FRAME_TOL {
            return Err(CurveError::Invalid(format!("frame determinant {det} is not 1")));
        }
        if !k.is_finite() {
            return Err(CurveError::Invalid("curvature must be finite".into()));
        }
        Ok(AffineCurve {
            domain,
            repr: Repr::Constant { k, s0, frame },
        })
    }

    pub fn domain(&self) -> DomainInterval {
        self.domain
    }

    /// The same curve restricted (or extended, for closed-form curves) to `domain`.
    pub fn with_domain(&self, domain: DomainInterval) -> Result<Self, CurveError> {
        let extendable = match &self.repr {
            Repr::Constant { .. } => true,
            Repr::Moved { inner, .. } => inner.with_domain(domain).is_ok(),
            _ => false,
        };
        if !extendable && !self.domain.contains_interval(&domain) {
            return Err(CurveError::OutsideDomain {
                s: if domain.lo < self.domain.lo { domain.lo } else { domain.hi },
                lo: self.domain.lo,
                hi: self.domain.hi,
            });
        }
        let repr = match &self.repr {
            Repr::Moved { inner, motion } => Repr::Moved {
                inner: Box::new(inner.with_domain(domain)?),
                motion: *motion,
            },
            r => r.clone(),
        };
        Ok(AffineCurve { domain, repr })
    }

    /// Curvature constant, when the curve is built as a constant curvature curve.
    pub fn constant_curvature_value(&self) -> Option<f64> {
        match &self.repr {
            Repr::Constant { k, .. } => Some(*k),
            Repr::Moved { inner, .. } => inner.constant_curvature_value(),
            _ => None,
        }
    }

    /// `(c, c', c'', c''')` at `s`. Points slightly outside the domain are
    /// extrapolated; use [`AffineCurve::checked_jet`] to reject them.
    pub fn jet(&self, s: f64) -> Jet3 {
        match &self.repr {
            Repr::Constant { k, s0, frame } => {
                let u = s - s0;
                let (t, n) = (frame.tangent, frame.normal);
                let (x, y) = (xbar(*k, u), ybar(*k, u));
                let (c, sn) = (ck(*k, u), sk(*k, u));
                [
                    frame.origin + x * t + y * n,
                    c * t + sn * n,
                    (-k * sn) * t + c * n,
                    (-k * c) * t + (-k * sn) * n,
                ]
            }
            Repr::Reparam { raw, t_of_s } => reparam_jet(raw.as_ref(), t_of_s.eval_unchecked(s)[0]),
            Repr::Reconstructed { kappa, traj } => {
                let y = traj.eval_unchecked(s);
                let c1 = PlaneVector::new(y[2], y[3]);
                [
                    PlaneVector::new(y[0], y[1]),
                    c1,
                    PlaneVector::new(y[4], y[5]),
                    -kappa(s) * c1,
                ]
            }
            Repr::Moved { inner, motion } => {
                let j = inner.jet(s);
                [
                    motion.apply(j[0]),
                    motion.linear(j[1]),
                    motion.linear(j[2]),
                    motion.linear(j[3]),
                ]
            }
        }
    }

    pub fn checked_jet(&self, s: f64) -> Result<Jet3, CurveError> {
        if !self.domain.contains_approx(s, 1e-12 * self.domain.len().max(1.0)) {
            return Err(CurveError::OutsideDomain {
                s,
                lo: self.domain.lo,
                hi: self.domain.hi,
            });
        }
        Ok(self.jet(s))
    }

    pub fn position(&self, s: f64) -> PlaneVector {
        self.jet(s)[0]
    }

    /// Affine curvature `kappa(s)`.
    pub fn curvature(&self, s: f64) -> f64 {
        match &self.repr {
            Repr::Constant { k, .. } => *k,
            Repr::Reconstructed { kappa, .. } => kappa(s),
            Repr::Moved { inner, .. } => inner.curvature(s),
            Repr::Reparam { .. } => {
                let j = self.jet(s);
                wedge(j[2], j[3])
            }
        }
    }

    /// Apply a special affine motion.
    pub fn transformed(&self, motion: AffineMap) -> Result<Self, CurveError> {
        if !motion.is_special(1e-12) {
            return Err(CurveError::Invalid(format!("motion determinant {} is not 1", motion.det())));
        }
        Ok(AffineCurve {
            domain: self.domain,
            repr: Repr::Moved {
                inner: Box::new(self.clone()),
                motion,
            },
        })
    }

    /// `n` evenly spaced parameters with positions.
    pub fn sample(&self, n: usize) -> Vec<(f64, PlaneVector)> {
        self.domain.grid(n).into_iter().map(|s| (s, self.position(s))).collect()
    }

    /// Parameter of the point `p`, if `p` lies on the curve within a
    /// relative distance of 1e-7 and the parameter is in the domain up to 1e-9.
    pub fn locate(&self, p: PlaneVector) -> Option<f64> {
        const SAMPLES: usize = 2001;
        let dom = self.domain;
        let mut best = (f64::INFINITY, dom.lo);
        for s in dom.grid(SAMPLES) {
            let d = (self.position(s) - p).norm();
            if d < best.0 {
                best = (d, s);
            }
        }
        let step = dom.len() / (SAMPLES - 1) as f64;
        let (lo, hi) = (dom.lo - 2.0 * step, dom.hi + 2.0 * step);
        let mut s = best.1;
        for _ in 0..60 {
            let j = self.jet(s);
            let d = j[0] - p;
            let g = d.dot(j[1]);
            let dg = j[1].dot(j[1]) + d.dot(j[2]);
            if dg <= 0.0 {
                break;
            }
            let next = (s - g / dg).clamp(lo, hi);
            let done = (next - s).abs() <= 1e-15 * s.abs().max(1.0);
            s = next;
            if done {
                break;
            }
        }
        let dist = (self.position(s) - p).norm();
        if dist > 1e-7 * p.norm().max(1.0) || !dom.contains_approx(s, 1e-9) {
            return None;
        }
        Some(s.clamp(dom.lo, dom.hi))
    }
}

/// Jet of `c(t(s))` in `s`, with `t' = phi(t) = g(t)^(-1/3)`, `g = c' ∧ c''`.
fn reparam_jet(raw: &dyn ParametricCurve, t: f64) -> Jet3 {
    let j = raw.jet(t);
    let g = wedge(j[1], j[2]);
    let g1 = wedge(j[1], j[3]);
    let g2 = wedge(j[2], j[3]) + wedge(j[1], j[4]);
    let phi = g.powf(-1.0 / 3.0);
    let dphi = -g1 / (3.0 * g) * phi;
    let ddphi = phi * (4.0 * g1 * g1 / (9.0 * g * g) - g2 / (3.0 * g));
    let t1 = phi;
    let t2 = dphi * phi;
    let t3 = (ddphi * phi + dphi * dphi) * phi;
    [
        j[0],
        t1 * j[1],
        (t1 * t1) * j[2] + t2 * j[1],
        (t1 * t1 * t1) * j[3] + (3.0 * t1 * t2) * j[2] + t3 * j[1],
    ]
}

/// Reparameterize `raw` on `[t0, t1]` by affine arc length, `s in [0, Λ]`.
pub fn reparam_unit_speed(raw: Arc<dyn ParametricCurve>, t0: f64, t1: f64) -> Result<AffineCurve, CurveError> {
    let total = affine_arclength(raw.as_ref(), t0, t1)?;
    let r = raw.clone();
    let rhs: OdeRhs = Arc::new(move |_s, y: &[f64], dy: &mut [f64]| {
        let g = r.speed_wedge(y[0]);
        dy[0] = if g > 0.0 { g.powf(-1.0 / 3.0) } else { f64::NAN };
    });
    let domain = DomainInterval::new(0.0, total);
    let tol = Tolerance {
        rtol: 1e-12,
        atol: 1e-13,
    };
    let t_of_s = integrate(rhs, 0.0, &[t0], domain, tol)?;
    Ok(AffineCurve {
        domain,
        repr: Repr::Reparam { raw, t_of_s },
    })
}

/// The unique unit-speed curve with curvature `kappa` passing through
/// `frame.origin` at `s0` with tangent `frame.tangent` and normal
/// `frame.normal`.
pub fn reconstruct_from_curvature(
    kappa: ScalarFn,
    domain: DomainInterval,
    s0: f64,
    frame: AdaptedFrame,
) -> Result<AffineCurve, CurveError> {
    let det = frame.determinant();
    if (det - 1.0).abs() > FRAME_TOL {
        return Err(CurveError::Invalid(format!("frame determinant {det} is not 1")));
    }
    let k = kappa.clone();
    let rhs: OdeRhs = Arc::new(move |s, y: &[f64], dy: &mut [f64]| {
        let kv = k(s);
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = y[4];
        dy[3] = y[5];
        dy[4] = -kv * y[2];
        dy[5] = -kv * y[3];
    });
    let (p, t, n) = (frame.origin, frame.tangent, frame.normal);
    let y0 = [p.x, p.y, t.x, t.y, n.x, n.y];
    let tol = Tolerance {
        rtol: 1e-12,
        atol: 1e-13,
    };
    let traj = integrate(rhs, s0, &y0, domain, tol)?;
    Ok(AffineCurve {
        domain,
        repr: Repr::Reconstructed { kappa, traj },
    })
}

/// `kappa = c'' ∧ c'''` at `s`.
pub fn affine_curvature_at(curve: &AffineCurve, s: f64) -> Result<f64, CurveError> {
    let j = curve.checked_jet(s)?;
    Ok(wedge(j[2], j[3]))
}

/// Affine curvature of the graph `y = f(x)` from `f` and four derivatives:
/// `-1/2 ((f'')^(-2/3))''`.
pub fn curvature_from_graph(f: &dyn Fn(f64) -> [f64; 5], x: f64) -> Result<f64, CurveError> {
    let d = f(x);
    let (f2, f3, f4) = (d[2], d[3], d[4]);
    if !(f2 > 0.0) {
        return Err(CurveError::Convexity { x, f2 });
    }
    Ok(f4 / (3.0 * f2.powf(5.0 / 3.0)) - 5.0 * f3 * f3 / (9.0 * f2.powf(8.0 / 3.0)))
}
