//! Safeguarded Newton inversion of monotone functions.

const MAX_ITER: usize = 300;

/// Solve `f(x) = target` for increasing `f` on `[lo, hi]`.
///
/// `f_df` returns the value and derivative. Newton steps are taken when they
/// stay inside the current bracket, bisection otherwise. Stops when the
/// step or bracket shrinks below `tol` or the bracket cannot be split further.
pub fn invert_increasing(
    f_df: impl Fn(f64) -> (f64, f64),
    target: f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> f64 {
    if f_df(lo).0 >= target {
        return lo;
    }
    if f_df(hi).0 <= target {
        return hi;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let (fx, dfx) = f_df(x);
        let r = fx - target;
        if r == 0.0 {
            return x;
        }
        if r < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = if dfx > 0.0 { x - r / dfx } else { f64::NAN };
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let mid = 0.5 * (lo + hi);
        if (next - x).abs() <= tol || hi - lo <= tol || mid == lo || mid == hi {
            return next;
        }
        x = next;
    }
    x
}

/// Plain bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid == lo || mid == hi {
            return mid;
        }
        let fm = f(mid);
        if (fm <= 0.0) == (flo <= 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root() {
        let x = invert_increasing(|x| (x * x * x, 3.0 * x * x), 27.0, 0.0, 10.0, 1e-14);
        assert!((x - 3.0).abs() < 1e-13);
    }

    #[test]
    fn flat_derivative_falls_back_to_bisection() {
        // derivative vanishes at the root
        let x = invert_increasing(|x| (x.powi(3), 0.0), 0.125, -1.0, 1.0, 1e-13);
        assert!((x - 0.5).abs() < 1e-12);
    }

    #[test]
    fn clamps_outside_range() {
        assert_eq!(invert_increasing(|x| (x, 1.0), -5.0, 0.0, 1.0, 1e-12), 0.0);
        assert_eq!(invert_increasing(|x| (x, 1.0), 5.0, 0.0, 1.0, 1e-12), 1.0);
    }

    #[test]
    fn bisect_cos() {
        let x = bisect(f64::cos, 0.0, 3.0, 1e-14);
        assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    }
}
