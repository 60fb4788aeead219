//! Upper bounds on the number of lattice points on an arc, as certificates
//! that carry their inputs and checked hypotheses.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::LatticeError;
use crate::report::Hypothesis;
use crate::specialfns::{abar, fk, gk, hk};

/// Relative tolerance for non-strict inequalities that may hold with equality.
const BOUNDARY_TOL: f64 = 1e-10;
/// `Λ / (2L)` within this of an integer counts as that integer.
const INTEGER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountTheorem {
    /// At most two points when `Abar_{k0}(Λ) <= m A_L / 2`.
    #[serde(rename = "2pts1")]
    TwoPoints,
    /// `2 ceil(Λ / F_{k0}(m A_L / 2))` from a lower curvature bound.
    #[serde(rename = "low_aff_bd")]
    LowerCurvature,
    /// At most three points when `H_{k0}(Λ/2) <= m A_L / 2`.
    #[serde(rename = "2pts2")]
    ThreePoints,
    /// `2m + 2` with `L = G_{k0}(m A_L / 2)`, `m = floor(Λ / 2L)`.
    #[serde(rename = "sharp_lat")]
    Sharp,
    /// `2m + 1` when `Λ / 2L` is an integer `m`.
    #[serde(rename = "rigid_lat")]
    Rigid,
}

impl CountTheorem {
    pub fn id(self) -> &'static str {
        match self {
            CountTheorem::TwoPoints => "2pts1",
            CountTheorem::LowerCurvature => "low_aff_bd",
            CountTheorem::ThreePoints => "2pts2",
            CountTheorem::Sharp => "sharp_lat",
            CountTheorem::Rigid => "rigid_lat",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountInputs {
    pub k0: f64,
    pub k1: Option<f64>,
    /// Affine length of the arc.
    pub lambda: f64,
    /// Triangle multiplier `m(C, L)`.
    pub multiplier: u64,
    /// Fundamental area `A_L`.
    pub cell_area: f64,
}

impl CountInputs {
    /// `m A_L / 2`.
    pub fn half_area(&self) -> f64 {
        self.multiplier as f64 * self.cell_area / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountBoundCertificate {
    pub theorem: CountTheorem,
    pub inputs: CountInputs,
    /// The spacing `L` where the bound uses one.
    pub spacing: Option<f64>,
    /// The integer `m` of the spaced bounds.
    pub m: Option<u64>,
    /// The bound the formula gives; it is a conclusion only when every
    /// hypothesis holds.
    pub bound: u64,
    pub hypotheses: Vec<Hypothesis>,
    pub notes: Vec<String>,
}

impl CountBoundCertificate {
    fn new(theorem: CountTheorem, inputs: CountInputs, bound: u64) -> Self {
        CountBoundCertificate {
            theorem,
            inputs,
            spacing: None,
            m: None,
            bound,
            hypotheses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }

    /// The certified bound, or `None` when a hypothesis fails.
    pub fn conclusion(&self) -> Option<u64> {
        self.hypotheses_hold().then_some(self.bound)
    }
}

fn validate(inputs: &CountInputs) -> Result<(), LatticeError> {
    if !(inputs.lambda > 0.0 && inputs.lambda.is_finite()) {
        return Err(LatticeError::Invalid(format!("affine length must be positive, got {}", inputs.lambda)));
    }
    if inputs.multiplier == 0 {
        return Err(LatticeError::Invalid("triangle multiplier must be at least 1".into()));
    }
    if !(inputs.cell_area > 0.0 && inputs.cell_area.is_finite()) {
        return Err(LatticeError::Invalid(format!("cell area must be positive, got {}", inputs.cell_area)));
    }
    if !inputs.k0.is_finite() {
        return Err(LatticeError::Invalid("k0 must be finite".into()));
    }
    if let Some(k1) = inputs.k1 {
        if !(k1 >= inputs.k0) {
            return Err(LatticeError::Invalid(format!("need k0 <= k1, got k0 = {}, k1 = {k1}", inputs.k0)));
        }
    }
    Ok(())
}

fn at_most(value: f64, limit: f64) -> bool {
    value <= limit + BOUNDARY_TOL * limit.abs().max(1.0)
}

/// At most two lattice points when `Abar_{k0}(Λ) <= m A_L / 2`.
pub fn bound_two_points(k0: f64, lambda: f64, multiplier: u64, cell_area: f64) -> Result<CountBoundCertificate, LatticeError> {
    let inputs = CountInputs {
        k0,
        k1: None,
        lambda,
        multiplier,
        cell_area,
    };
    validate(&inputs)?;
    let area = abar(k0, lambda);
    let mut cert = CountBoundCertificate::new(CountTheorem::TwoPoints, inputs, 2);
    cert.hypotheses.push(Hypothesis::new(
        "Abar_k0(length) <= m A_L / 2",
        at_most(area, inputs.half_area()),
        format!("{area} against {}", inputs.half_area()),
    ));
    Ok(cert)
}

/// `2 ceil(Λ / F_{k0}(m A_L / 2))`.
pub fn bound_general(k0: f64, lambda: f64, multiplier: u64, cell_area: f64) -> Result<CountBoundCertificate, LatticeError> {
    let inputs = CountInputs {
        k0,
        k1: None,
        lambda,
        multiplier,
        cell_area,
    };
    validate(&inputs)?;
    let f = fk(k0, inputs.half_area())?;
    let pieces = (lambda / f).ceil().max(1.0) as u64;
    let mut cert = CountBoundCertificate::new(CountTheorem::LowerCurvature, inputs, 2 * pieces);
    cert.spacing = Some(f);
    cert.m = Some(pieces);
    cert.notes.push(format!(
        "requires every sub-arc of affine length at most {f} to be convex"
    ));
    Ok(cert)
}

/// At most three lattice points when `H_{k0}(Λ/2) <= m A_L / 2` and
/// `k1 <= (pi/Λ)^2`.
pub fn bound_three_points(
    k0: f64,
    k1: f64,
    lambda: f64,
    multiplier: u64,
    cell_area: f64,
) -> Result<CountBoundCertificate, LatticeError> {
    let inputs = CountInputs {
        k0,
        k1: Some(k1),
        lambda,
        multiplier,
        cell_area,
    };
    validate(&inputs)?;
    let half = lambda / 2.0;
    let limit = (PI / lambda).powi(2);
    let mut cert = CountBoundCertificate::new(CountTheorem::ThreePoints, inputs, 3);
    cert.spacing = Some(half);
    cert.hypotheses.push(Hypothesis::new(
        "k1 <= (pi / length)^2",
        k1 <= limit,
        format!("k1 = {k1}, limit {limit}"),
    ));
    let target = inputs.half_area();
    match hk(k0, half) {
        Ok(h) => {
            cert.hypotheses.push(Hypothesis::new(
                "H_k0(length / 2) <= m A_L / 2",
                at_most(h, target),
                format!("{h} against {target}"),
            ));
            if (h - target).abs() <= BOUNDARY_TOL * target.max(1.0) {
                cert.notes.push(
                    "equality in the area condition: three points force constant curvature k0 with the \
                     points at the endpoints and the midpoint"
                        .into(),
                );
            }
        }
        Err(e) => cert
            .hypotheses
            .push(Hypothesis::new("H_k0(length / 2) <= m A_L / 2", false, e.to_string())),
    }
    Ok(cert)
}

fn spaced(
    theorem: CountTheorem,
    k0: f64,
    k1: f64,
    lambda: f64,
    multiplier: u64,
    cell_area: f64,
) -> Result<(CountBoundCertificate, f64, f64), LatticeError> {
    let inputs = CountInputs {
        k0,
        k1: Some(k1),
        lambda,
        multiplier,
        cell_area,
    };
    validate(&inputs)?;
    let spacing = gk(k0, inputs.half_area())?;
    let mut cert = CountBoundCertificate::new(theorem, inputs, 0);
    cert.spacing = Some(spacing);
    if k1 > 0.0 {
        let limit = (PI / (2.0 * spacing)).powi(2);
        cert.hypotheses.push(Hypothesis::new(
            "k1 <= (pi / 2L)^2",
            k1 <= limit,
            format!("k1 = {k1}, limit {limit}"),
        ));
    }
    Ok((cert, spacing, lambda / (2.0 * spacing)))
}

/// `2m + 2` with `L = G_{k0}(m A_L / 2)` and `m = floor(Λ / 2L)`. A ratio
/// within 1e-9 below an integer is rounded up so the bound stays valid.
pub fn bound_sharp(
    k0: f64,
    k1: f64,
    lambda: f64,
    multiplier: u64,
    cell_area: f64,
) -> Result<CountBoundCertificate, LatticeError> {
    let (mut cert, _, ratio) = spaced(CountTheorem::Sharp, k0, k1, lambda, multiplier, cell_area)?;
    let m = (ratio + INTEGER_TOL * ratio.max(1.0)).floor() as u64;
    cert.m = Some(m);
    cert.bound = 2 * m + 2;
    Ok(cert)
}

/// `2m + 1` when `m = Λ / 2L` is an integer (to 1e-9), for an arc that is
/// not a closed curve.
pub fn bound_rigid(
    k0: f64,
    k1: f64,
    lambda: f64,
    multiplier: u64,
    cell_area: f64,
) -> Result<CountBoundCertificate, LatticeError> {
    let (mut cert, spacing, ratio) = spaced(CountTheorem::Rigid, k0, k1, lambda, multiplier, cell_area)?;
    let m = ratio.round();
    if (ratio - m).abs() > INTEGER_TOL * ratio.max(1.0) || m < 1.0 {
        return Err(LatticeError::Invalid(format!(
            "length / 2L = {ratio} is not a positive integer; use the sharp bound"
        )));
    }
    let m = m as u64;
    cert.m = Some(m);
    cert.bound = 2 * m + 1;
    cert.notes.push(format!(
        "equality only for constant curvature k0 with the points evenly spaced at affine distance {spacing}, \
         endpoints included"
    ));
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points() {
        assert_eq!(bound_two_points(0.0, 1.0, 1, 1.0).unwrap().conclusion(), Some(2));
        assert_eq!(bound_two_points(0.0, 3.0, 1, 1.0).unwrap().conclusion(), None);
        let edge = fk(0.0, 0.5).unwrap();
        assert_eq!(bound_two_points(0.0, edge, 1, 1.0).unwrap().conclusion(), Some(2));
        assert!(bound_two_points(0.0, 0.0, 1, 1.0).is_err());
        assert!(bound_two_points(0.0, 1.0, 0, 1.0).is_err());
    }

    #[test]
    fn general() {
        let c = bound_general(0.0, 3.0, 1, 1.0).unwrap();
        assert!((c.spacing.unwrap() - 6f64.cbrt()).abs() < 1e-10);
        assert_eq!(c.conclusion(), Some(4));
        assert_eq!(bound_general(0.0, 1e-12, 1, 1.0).unwrap().bound, 2);
        let f = fk(-1.0, 0.5).unwrap();
        assert_eq!(bound_general(-1.0, f, 1, 1.0).unwrap().bound, 2);
    }

    #[test]
    fn three_points() {
        assert_eq!(bound_three_points(0.0, 0.0, 2.0, 1, 1.0).unwrap().conclusion(), Some(3));
        let c = bound_three_points(0.0, 0.0, 3.0, 1, 1.0).unwrap();
        assert_eq!(c.conclusion(), None);
        assert!(!c.hypotheses[1].holds);
        let c = bound_three_points(0.0, 3.0, 2.0, 1, 1.0).unwrap();
        assert!(!c.hypotheses[0].holds);
        assert!(!bound_three_points(0.0, 0.0, 2.0, 1, 1.0).unwrap().notes.is_empty());
    }

    #[test]
    fn sharp_and_rigid() {
        for m0 in 1..6u64 {
            let c = bound_sharp(0.0, 0.0, (2 * m0 + 1) as f64, 1, 1.0).unwrap();
            assert_eq!((c.m, c.conclusion()), (Some(m0), Some(2 * m0 + 2)));
            let r = bound_rigid(0.0, 0.0, (2 * m0) as f64, 1, 1.0).unwrap();
            assert_eq!(r.conclusion(), Some(2 * m0 + 1));
        }
        assert_eq!(bound_sharp(0.0, 0.0, 1.5, 1, 1.0).unwrap().bound, 2);
        // an integer ratio slightly under m still gives m
        assert_eq!(bound_sharp(0.0, 0.0, 4.0 - 1e-13, 1, 1.0).unwrap().m, Some(2));
        assert!(bound_rigid(0.0, 0.0, 3.0, 1, 1.0).is_err());
        let c = bound_sharp(0.0, 10.0, 3.0, 1, 1.0).unwrap();
        assert_eq!(c.conclusion(), None);
        let r = bound_rigid(0.0, 0.0, 2.0, 1, 1.0).unwrap();
        let t = bound_three_points(0.0, 0.0, 2.0, 1, 1.0).unwrap();
        assert_eq!(r.conclusion(), t.conclusion());
    }

    #[test]
    fn ids() {
        assert_eq!(CountTheorem::Sharp.id(), "sharp_lat");
        assert_eq!(serde_json::to_string(&CountTheorem::TwoPoints).unwrap(), "\"2pts1\"");
    }
}
