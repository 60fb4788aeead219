//! Real polynomials in one variable, evaluated with derivatives.

use serde::{Deserialize, Serialize};

/// `sum coeffs[i] x^i`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Polynomial { coeffs }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Value and the first `N - 1` derivatives at `x`.
    pub fn jet<const N: usize>(&self, x: f64) -> [f64; N] {
        let mut out = [0.0; N];
        let mut c = self.coeffs.clone();
        for o in out.iter_mut() {
            *o = c.iter().rev().fold(0.0, |acc, v| acc * x + v);
            if c.is_empty() {
                break;
            }
            c = c.iter().enumerate().skip(1).map(|(i, v)| v * i as f64).collect();
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_of_cubic() {
        let p = Polynomial::new(vec![1.0, -2.0, 0.0, 3.0]);
        let j: [f64; 5] = p.jet(2.0);
        assert_eq!(j, [21.0, 34.0, 36.0, 18.0, 0.0]);
        assert_eq!(p.eval(2.0), 21.0);
        assert_eq!(p.degree(), 3);
    }
}
