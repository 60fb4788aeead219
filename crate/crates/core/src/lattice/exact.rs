//! Rational points, polynomials and affine maps for exact lattice tests.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LatticeError;
use crate::curve::{AffineMap, PlaneVector};

pub type ExactPoint = [BigRational; 2];

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn exact_point(x: i64, y: i64) -> ExactPoint {
    [rat(x), rat(y)]
}

pub fn point_to_f64(p: &ExactPoint) -> PlaneVector {
    PlaneVector::new(rat_to_f64(&p[0]), rat_to_f64(&p[1]))
}

pub fn exact_wedge(a: &ExactPoint, b: &ExactPoint) -> BigRational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

pub fn exact_sub(a: &ExactPoint, b: &ExactPoint) -> ExactPoint {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

/// Parse an integer, decimal (`-1.25`, `3e-2`) or fraction (`7/3`) exactly.
pub fn parse_rational(text: &str) -> Result<BigRational, LatticeError> {
    let t = text.trim();
    let bad = || LatticeError::Parse(format!("not a rational number: {text:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = t.split_once('/') {
        let num = parse_rational(num)?;
        let den = parse_rational(den)?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(num / den);
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all).map_err(|_| bad())?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Bivariate polynomial with rational coefficients, keyed by `(i, j)` for
/// `x^i y^j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(0, 0, c);
        p
    }

    /// `a x + b y + c`.
    pub fn linear(a: BigRational, b: BigRational, c: BigRational) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(1, 0, a);
        p.add_term(0, 1, b);
        p.add_term(0, 0, c);
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            out.add_term(i, j, a * c);
        }
        out
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut out = BiPoly::constant(BigRational::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// `self(x_sub(x, y), y_sub(x, y))`.
    pub fn compose(&self, x_sub: &BiPoly, y_sub: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            out = out.add(&x_sub.pow(i).mul(&y_sub.pow(j)).scale(c));
        }
        out
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (&(i, j), c)| {
            acc + c * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize)
        })
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| rat_to_f64(c) * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }

    /// The primitive integer polynomial with the same zero set.
    pub fn to_integer(&self) -> IntPoly {
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut terms: BTreeMap<(u32, u32), BigInt> = self
            .terms
            .iter()
            .map(|(&k, c)| (k, (c * BigRational::from_integer(lcm.clone())).to_integer()))
            .collect();
        let g = terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for c in terms.values_mut() {
                *c = &*c / &g;
            }
        }
        IntPoly::new(terms)
    }
}

/// Bivariate integer polynomial evaluated exactly at integer points.
#[derive(Debug, Clone, PartialEq)]
pub struct IntPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
    small: Option<Vec<((u32, u32), i128)>>,
}

impl IntPoly {
    fn new(terms: BTreeMap<(u32, u32), BigInt>) -> Self {
        let small = terms
            .iter()
            .map(|(&k, c)| c.to_i128().map(|v| (k, v)))
            .collect::<Option<Vec<_>>>();
        IntPoly { terms, small }
    }

    pub fn degree_in_n(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    fn eval_small(small: &[((u32, u32), i128)], m: i64, n: i64) -> Option<i128> {
        let (m, n) = (m as i128, n as i128);
        let mut acc: i128 = 0;
        for &((i, j), c) in small {
            let term = c.checked_mul(m.checked_pow(i)?)?.checked_mul(n.checked_pow(j)?)?;
            acc = acc.checked_add(term)?;
        }
        Some(acc)
    }

    /// Exact value at `(m, n)`, in `i128` when no step overflows.
    pub fn eval(&self, m: i64, n: i64) -> BigInt {
        if let Some(v) = self.small.as_deref().and_then(|s| Self::eval_small(s, m, n)) {
            return BigInt::from(v);
        }
        let (bm, bn) = (BigInt::from(m), BigInt::from(n));
        self.terms.iter().fold(BigInt::zero(), |acc, (&(i, j), c)| {
            acc + c * num_traits::pow(bm.clone(), i as usize) * num_traits::pow(bn.clone(), j as usize)
        })
    }

    pub fn is_zero_at(&self, m: i64, n: i64) -> bool {
        self.eval(m, n).is_zero()
    }

    /// Coefficients of the polynomial in `n` at fixed `m`, constant first.
    pub fn column(&self, m: i64) -> Vec<BigInt> {
        let bm = BigInt::from(m);
        let mut out = vec![BigInt::zero(); self.degree_in_n() as usize + 1];
        for (&(i, j), c) in &self.terms {
            out[j as usize] += c * num_traits::pow(bm.clone(), i as usize);
        }
        while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }
}

/// Integer roots of a polynomial of degree at most two, or `None` when the
/// degree is higher or the polynomial vanishes identically.
pub fn integer_roots_low_degree(coeffs: &[BigInt]) -> Option<Vec<BigInt>> {
    match coeffs {
        [c0] => {
            if c0.is_zero() {
                None
            } else {
                Some(Vec::new())
            }
        }
        [c0, c1] => {
            let (q, r) = (-c0).div_rem(c1);
            Some(if r.is_zero() { vec![q] } else { Vec::new() })
        }
        [c0, c1, c2] => {
            let disc = c1 * c1 - BigInt::from(4) * c2 * c0;
            if disc.is_negative() {
                return Some(Vec::new());
            }
            let root = disc.sqrt();
            if &root * &root != disc {
                return Some(Vec::new());
            }
            let den = BigInt::from(2) * c2;
            let mut out = Vec::new();
            for num in [-c1 + &root, -c1 - &root] {
                let (q, r) = num.div_rem(&den);
                if r.is_zero() && !out.contains(&q) {
                    out.push(q);
                }
            }
            Some(out)
        }
        _ => None,
    }
}

/// An exact implicit equation `F(x, y) = 0` for a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitPoly {
    pub poly: BiPoly,
}

impl ImplicitPoly {
    /// `a x^2 + b xy + c y^2 + d x + e y + f = 0`.
    pub fn conic(coeffs: [BigRational; 6]) -> Self {
        let [a, b, c, d, e, f] = coeffs;
        let mut p = BiPoly::zero();
        p.add_term(2, 0, a);
        p.add_term(1, 1, b);
        p.add_term(0, 2, c);
        p.add_term(1, 0, d);
        p.add_term(0, 1, e);
        p.add_term(0, 0, f);
        ImplicitPoly { poly: p }
    }

    pub fn conic_int(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> Self {
        Self::conic([rat(a), rat(b), rat(c), rat(d), rat(e), rat(f)])
    }

    /// `y = sum coeffs[i] x^i`.
    pub fn graph(coeffs: &[BigRational]) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(0, 1, BigRational::one());
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(i as u32, 0, -c.clone());
        }
        ImplicitPoly { poly: p }
    }

    pub fn contains(&self, p: &ExactPoint) -> bool {
        self.poly.eval(&p[0], &p[1]).is_zero()
    }

    pub fn eval_f64(&self, p: PlaneVector) -> f64 {
        self.poly.eval_f64(p.x, p.y)
    }
}

/// `v -> M v + b` with rational entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactAffine {
    pub m: [[BigRational; 2]; 2],
    pub b: ExactPoint,
}

impl ExactAffine {
    pub fn from_integers(m: [[i64; 2]; 2], b: [i64; 2]) -> Self {
        ExactAffine {
            m: m.map(|row| row.map(rat)),
            b: b.map(rat),
        }
    }

    /// Exact binary value of each `f64` entry.
    pub fn from_affine_map(map: &AffineMap) -> Option<Self> {
        let r = |v: f64| BigRational::from_float(v);
        Some(ExactAffine {
            m: [[r(map.m[0][0])?, r(map.m[0][1])?], [r(map.m[1][0])?, r(map.m[1][1])?]],
            b: [r(map.b.x)?, r(map.b.y)?],
        })
    }

    pub fn identity() -> Self {
        Self::from_integers([[1, 0], [0, 1]], [0, 0])
    }

    pub fn apply(&self, p: &ExactPoint) -> ExactPoint {
        [
            &self.m[0][0] * &p[0] + &self.m[0][1] * &p[1] + &self.b[0],
            &self.m[1][0] * &p[0] + &self.m[1][1] * &p[1] + &self.b[1],
        ]
    }

    pub fn det(&self) -> BigRational {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn trace(&self) -> BigRational {
        &self.m[0][0] + &self.m[1][1]
    }

    pub fn to_affine_map(&self) -> AffineMap {
        let f = rat_to_f64;
        AffineMap::new(
            [[f(&self.m[0][0]), f(&self.m[0][1])], [f(&self.m[1][0]), f(&self.m[1][1])]],
            PlaneVector::new(f(&self.b[0]), f(&self.b[1])),
        )
    }

    /// The affine map with `src[i] -> dst[i]`; `None` when `src` is collinear.
    pub fn from_correspondences(src: &[ExactPoint; 3], dst: &[ExactPoint; 3]) -> Option<Self> {
        let u1 = exact_sub(&src[1], &src[0]);
        let u2 = exact_sub(&src[2], &src[0]);
        let w1 = exact_sub(&dst[1], &dst[0]);
        let w2 = exact_sub(&dst[2], &dst[0]);
        let det = exact_wedge(&u1, &u2);
        if det.is_zero() {
            return None;
        }
        // M = W U^{-1}, U = [u1 u2] column-wise
        let inv = [[&u2[1] / &det, -&u2[0] / &det], [-&u1[1] / &det, &u1[0] / &det]];
        let m = [
            [
                &w1[0] * &inv[0][0] + &w2[0] * &inv[1][0],
                &w1[0] * &inv[0][1] + &w2[0] * &inv[1][1],
            ],
            [
                &w1[1] * &inv[0][0] + &w2[1] * &inv[1][0],
                &w1[1] * &inv[0][1] + &w2[1] * &inv[1][1],
            ],
        ];
        let img = [
            &m[0][0] * &src[0][0] + &m[0][1] * &src[0][1],
            &m[1][0] * &src[0][0] + &m[1][1] * &src[0][1],
        ];
        let b = [&dst[0][0] - &img[0], &dst[0][1] - &img[1]];
        Some(ExactAffine { m, b })
    }
}
