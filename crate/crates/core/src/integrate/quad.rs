use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("integrand not finite near t = {at}")]
    NonFinite { at: f64 },
    #[error("subdivision limit reached with error estimate {estimate:e}")]
    NoConvergence { estimate: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for QuadTolerance {
    fn default() -> Self {
        QuadTolerance {
            abs: 1e-11,
            rel: 1e-12,
        }
    }
}

const MAX_INTERVALS: usize = 2000;

// Kronrod abscissae (descending), with Gauss nodes at odd indices.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Piece {
    a: f64,
    b: f64,
    value: Vec<f64>,
    err: f64,
}

fn rule(f: &mut impl FnMut(f64, &mut [f64]), a: f64, b: f64, dim: usize, buf: &mut [f64]) -> Result<Piece, QuadError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kr = vec![0.0; dim];
    let mut ga = vec![0.0; dim];
    for (i, x) in XGK.iter().enumerate() {
        let nodes: &[f64] = if i == 7 { &[0.0] } else { &[-1.0, 1.0] };
        for sgn in nodes {
            let t = c + sgn * h * x;
            f(t, buf);
            if buf.iter().any(|v| !v.is_finite()) {
                return Err(QuadError::NonFinite { at: t });
            }
            for d in 0..dim {
                kr[d] += WGK[i] * buf[d];
                if i % 2 == 1 {
                    ga[d] += WG[i / 2] * buf[d];
                }
            }
        }
    }
    let mut err: f64 = 0.0;
    for d in 0..dim {
        kr[d] *= h;
        ga[d] *= h;
        err = err.max((kr[d] - ga[d]).abs());
    }
    Ok(Piece { a, b, value: kr, err })
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of a vector-valued integrand.
///
/// `f(t, out)` writes the `dim` components at `t`. The interval with the
/// largest error estimate is bisected until the summed estimate falls below
/// `max(abs, rel * |I|)`, with `|I|` the largest component magnitude.
pub fn gauss_kronrod_vec(
    mut f: impl FnMut(f64, &mut [f64]),
    a: f64,
    b: f64,
    dim: usize,
    tol: QuadTolerance,
) -> Result<Vec<f64>, QuadError> {
    if a == b {
        return Ok(vec![0.0; dim]);
    }
    let mut buf = vec![0.0; dim];
    let mut pieces = vec![rule(&mut f, a, b, dim, &mut buf)?];
    loop {
        let mut total = vec![0.0; dim];
        let mut err = 0.0;
        for p in &pieces {
            for d in 0..dim {
                total[d] += p.value[d];
            }
            err += p.err;
        }
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if err <= tol.abs.max(tol.rel * scale) {
            return Ok(total);
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(QuadError::NoConvergence { estimate: err });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            // cannot split further; accept what we have
            return Ok(total);
        }
        pieces.push(rule(&mut f, p.a, mid, dim, &mut buf)?);
        pieces.push(rule(&mut f, mid, p.b, dim, &mut buf)?);
    }
}

/// Scalar form of [`gauss_kronrod_vec`]. Reversed limits flip the sign.
pub fn gauss_kronrod(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: QuadTolerance,
) -> Result<f64, QuadError> {
    gauss_kronrod_vec(|t, out| out[0] = f(t), a, b, 1, tol).map(|v| v[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = gauss_kronrod(|t| t.powi(6) - 3.0 * t, 0.0, 2.0, QuadTolerance::default()).unwrap();
        assert!((v - (128.0 / 7.0 - 6.0)).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_and_reversed() {
        let tol = QuadTolerance::default();
        let v = gauss_kronrod(|t| (10.0 * t).sin(), 0.0, 3.0, tol).unwrap();
        let exact = (1.0 - 30f64.cos()) / 10.0;
        assert!((v - exact).abs() < 1e-11);
        let r = gauss_kronrod(|t| (10.0 * t).sin(), 3.0, 0.0, tol).unwrap();
        assert!((r + exact).abs() < 1e-11);
    }

    #[test]
    fn endpoint_singularity_converges() {
        let v = gauss_kronrod(f64::sqrt, 0.0, 1.0, QuadTolerance::default()).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn vector_components() {
        let v = gauss_kronrod_vec(
            |t, out| {
                out[0] = t.exp();
                out[1] = t.cos();
            },
            0.0,
            1.0,
            2,
            QuadTolerance::default(),
        )
        .unwrap();
        assert!((v[0] - (1f64.exp() - 1.0)).abs() < 1e-12);
        assert!((v[1] - 1f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn nan_is_reported() {
        let e = gauss_kronrod(|t| if t > 0.5 { f64::NAN } else { t }, 0.0, 1.0, QuadTolerance::default());
        assert!(matches!(e, Err(QuadError::NonFinite { .. })));
    }
}
