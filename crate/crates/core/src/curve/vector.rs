use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

/// A vector (or point) of the affine plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlaneVector {
    pub x: f64,
    pub y: f64,
}

impl PlaneVector {
    pub const ZERO: PlaneVector = PlaneVector { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        PlaneVector { x, y }
    }

    pub fn wedge(self, w: PlaneVector) -> f64 {
        wedge(self, w)
    }

    pub fn dot(self, w: PlaneVector) -> f64 {
        self.x * w.x + self.y * w.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// `v ∧ w = v.x w.y - v.y w.x`.
#[inline]
pub fn wedge(v: PlaneVector, w: PlaneVector) -> f64 {
    v.x * w.y - v.y * w.x
}

impl Add for PlaneVector {
    type Output = PlaneVector;
    fn add(self, o: PlaneVector) -> PlaneVector {
        PlaneVector::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for PlaneVector {
    fn add_assign(&mut self, o: PlaneVector) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for PlaneVector {
    type Output = PlaneVector;
    fn sub(self, o: PlaneVector) -> PlaneVector {
        PlaneVector::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for PlaneVector {
    type Output = PlaneVector;
    fn neg(self) -> PlaneVector {
        PlaneVector::new(-self.x, -self.y)
    }
}

impl Mul<PlaneVector> for f64 {
    type Output = PlaneVector;
    fn mul(self, v: PlaneVector) -> PlaneVector {
        PlaneVector::new(self * v.x, self * v.y)
    }
}

impl Mul<f64> for PlaneVector {
    type Output = PlaneVector;
    fn mul(self, a: f64) -> PlaneVector {
        PlaneVector::new(self.x * a, self.y * a)
    }
}

impl From<(f64, f64)> for PlaneVector {
    fn from((x, y): (f64, f64)) -> Self {
        PlaneVector::new(x, y)
    }
}

/// `v -> M v + b`. Special when `det M = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    /// Row-major 2x2 matrix.
    pub m: [[f64; 2]; 2],
    pub b: PlaneVector,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap {
        m: [[1.0, 0.0], [0.0, 1.0]],
        b: PlaneVector::ZERO,
    };

    pub fn new(m: [[f64; 2]; 2], b: PlaneVector) -> Self {
        AffineMap { m, b }
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn is_special(&self, tol: f64) -> bool {
        (self.det() - 1.0).abs() <= tol
    }

    pub fn linear(&self, v: PlaneVector) -> PlaneVector {
        PlaneVector::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y,
            self.m[1][0] * v.x + self.m[1][1] * v.y,
        )
    }

    pub fn apply(&self, v: PlaneVector) -> PlaneVector {
        self.linear(v) + self.b
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let a = &self.m;
        let o = &other.m;
        let m = [
            [a[0][0] * o[0][0] + a[0][1] * o[1][0], a[0][0] * o[0][1] + a[0][1] * o[1][1]],
            [a[1][0] * o[0][0] + a[1][1] * o[1][0], a[1][0] * o[0][1] + a[1][1] * o[1][1]],
        ];
        AffineMap { m, b: self.apply(other.b) }
    }

    pub fn inverse(&self) -> Option<AffineMap> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let m = [
            [self.m[1][1] / d, -self.m[0][1] / d],
            [-self.m[1][0] / d, self.m[0][0] / d],
        ];
        let lin = AffineMap { m, b: PlaneVector::ZERO };
        let b = -lin.linear(self.b);
        Some(AffineMap { m, b })
    }

    /// Random special affine motion: a product of a rotation, a unimodular
    /// diagonal stretch and a shear, followed by a translation.
    pub fn random_special<R: Rng + ?Sized>(rng: &mut R) -> AffineMap {
        let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let st: f64 = rng.random_range(0.5..2.0);
        let sh: f64 = rng.random_range(-1.0..1.0);
        let rot = AffineMap::new([[th.cos(), -th.sin()], [th.sin(), th.cos()]], PlaneVector::ZERO);
        let stretch = AffineMap::new([[st, 0.0], [0.0, 1.0 / st]], PlaneVector::ZERO);
        let shear = AffineMap::new([[1.0, sh], [0.0, 1.0]], PlaneVector::ZERO);
        let mut m = rot.compose(&stretch).compose(&shear);
        m.b = PlaneVector::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn wedge_values() {
        assert_eq!(wedge(PlaneVector::new(1.0, 0.0), PlaneVector::new(0.0, 1.0)), 1.0);
        let v = PlaneVector::new(3.5, -2.0);
        assert_eq!(wedge(v, v), 0.0);
        assert_eq!(wedge(PlaneVector::new(2.0, -3.0), PlaneVector::new(5.0, -8.0)), -1.0);
    }

    #[test]
    fn random_motions_are_special() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = AffineMap::random_special(&mut rng);
            assert!(m.is_special(1e-12));
            let inv = m.inverse().unwrap();
            let p = PlaneVector::new(0.3, -1.7);
            let q = inv.apply(m.apply(p));
            assert!((q - p).norm() < 1e-12);
            // wedge is preserved by the linear part
            let (v, w) = (PlaneVector::new(1.0, 2.0), PlaneVector::new(-0.5, 4.0));
            assert!((wedge(m.linear(v), m.linear(w)) - wedge(v, w)).abs() < 1e-12);
        }
    }
}
