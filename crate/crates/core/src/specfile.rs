//! Curve and lattice description files.
//!
//! Both are TOML documents whose numbers are strings, so that decimal
//! literals are read without an intermediate float. A curve file:
//!
//! ```toml
//! name = "golden hyperbola"
//! type = "conic"                                 # a x^2 + b xy + c y^2 + d x + e y + f = 0
//! coeffs = ["1", "-1", "-1", "0", "0", "-1"]
//! point = ["1", "0"]                             # c(0)
//! domain = ["0", "3.2"]                          # affine arc length
//! ```
//!
//! Other types: `parabola` (`a`, `b`, `c` for `y = a x^2 + b x + c`,
//! domain in `x`), `graph` (`coeffs` ascending, domain in `x`),
//! `constant-curvature` (`k`, `s0`, `origin`, `tangent`, `normal`, domain in
//! arc length) and `curvature-ivp` (`kappa` ascending polynomial in `s`,
//! same frame fields). Any type may carry an exact `[[implicit]]` equation
//! as a list of `{ x = i, y = j, coef = "p/q" }` terms.
//!
//! A lattice file has `origin`, `v1`, `v2`, each a pair of integer, decimal
//! or fraction strings.

use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{reconstruct_from_curvature, reparam_unit_speed, AdaptedFrame, AffineCurve, Conic, CurveError, GraphCurve, PlaneVector};
use crate::lattice::{parse_rational, rat_to_f64, BiPoly, ImplicitPoly, Lattice, LatticeError};
use crate::odekernel::ScalarFn;
use crate::poly::Polynomial;
use crate::sharp::SharpInstance;
use crate::specialfns::DomainInterval;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
}

impl From<CurveError> for SpecError {
    fn from(e: CurveError) -> Self {
        SpecError::Domain(e.to_string())
    }
}

impl From<LatticeError> for SpecError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Parse(m) => SpecError::Parse(m),
            other => SpecError::Domain(other.to_string()),
        }
    }
}

/// One term `coef x^x y^y` of an implicit equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub x: u32,
    pub y: u32,
    pub coef: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CurveKind {
    Parabola {
        a: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c: Option<String>,
        domain: [String; 2],
    },
    Conic {
        coeffs: [String; 6],
        point: [String; 2],
        domain: [String; 2],
    },
    Graph {
        coeffs: Vec<String>,
        domain: [String; 2],
    },
    ConstantCurvature {
        k: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s0: Option<String>,
        origin: [String; 2],
        tangent: [String; 2],
        normal: [String; 2],
        domain: [String; 2],
    },
    CurvatureIvp {
        kappa: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s0: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        origin: Option<[String; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tangent: Option<[String; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        normal: Option<[String; 2]>,
        domain: [String; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub kind: CurveKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub implicit: Option<Vec<Term>>,
}

/// A curve read from a spec, with its exact equation when one is known.
#[derive(Debug, Clone)]
pub struct BuiltCurve {
    pub name: String,
    pub curve: AffineCurve,
    pub implicit: Option<ImplicitPoly>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    #[serde(default = "zero_pair")]
    pub origin: [String; 2],
    pub v1: [String; 2],
    pub v2: [String; 2],
}

fn zero_pair() -> [String; 2] {
    ["0".into(), "0".into()]
}

/// Decimal literal to the nearest double; `p/q` is also accepted.
pub fn parse_real(text: &str) -> Result<f64, SpecError> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        if v.is_finite() {
            return Ok(v);
        }
    }
    if t.contains('/') {
        if let Ok(r) = parse_rational(t) {
            return Ok(rat_to_f64(&r));
        }
    }
    Err(SpecError::Parse(format!("not a finite number: {text:?}")))
}

fn parse_pair(p: &[String; 2]) -> Result<PlaneVector, SpecError> {
    Ok(PlaneVector::new(parse_real(&p[0])?, parse_real(&p[1])?))
}

fn parse_domain(d: &[String; 2]) -> Result<DomainInterval, SpecError> {
    let (lo, hi) = (parse_real(&d[0])?, parse_real(&d[1])?);
    DomainInterval::try_new(lo, hi).ok_or_else(|| SpecError::Domain(format!("empty domain [{lo}, {hi}]")))
}

fn exact(text: &str) -> Result<BigRational, SpecError> {
    Ok(parse_rational(text)?)
}

fn ascending(coeffs: &[String]) -> Result<Vec<f64>, SpecError> {
    coeffs.iter().map(|c| parse_real(c)).collect()
}

impl CurveSpec {
    pub fn from_toml(text: &str) -> Result<Self, SpecError> {
        toml::from_str(text).map_err(|e| SpecError::Parse(e.message().to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("curve spec serializes")
    }

    pub fn build(&self) -> Result<BuiltCurve, SpecError> {
        let (curve, derived) = match &self.kind {
            CurveKind::Parabola { a, b, c, domain } => {
                let zero = "0".to_string();
                let (b, c) = (b.as_ref().unwrap_or(&zero), c.as_ref().unwrap_or(&zero));
                let (af, bf, cf) = (parse_real(a)?, parse_real(b)?, parse_real(c)?);
                let d = parse_domain(domain)?;
                if !(af > 0.0) {
                    return Err(SpecError::Domain(format!("parabola needs a > 0, got {af}")));
                }
                // x = x0 + λ s with λ = (2a)^(-1/3) has unit affine speed.
                let lambda = (2.0 * af).cbrt().recip();
                let x0 = d.lo;
                let frame = AdaptedFrame::new(
                    PlaneVector::new(x0, af * x0 * x0 + bf * x0 + cf),
                    lambda * PlaneVector::new(1.0, 2.0 * af * x0 + bf),
                    (lambda * lambda) * PlaneVector::new(0.0, 2.0 * af),
                );
                let len = (d.hi - d.lo) / lambda;
                let curve = AffineCurve::constant_curvature(0.0, 0.0, frame, DomainInterval::new(0.0, len))?;
                let implicit = ImplicitPoly::graph(&[exact(c)?, exact(b)?, exact(a)?]);
                (curve, Some(implicit))
            }
            CurveKind::Conic { coeffs, point, domain } => {
                let f: Vec<f64> = ascending(coeffs)?;
                let conic = Conic::new(f[0], f[1], f[2], f[3], f[4], f[5]);
                let curve = conic.unit_speed_curve(parse_pair(point)?, parse_domain(domain)?)?;
                let q: Vec<BigRational> = coeffs.iter().map(|c| exact(c)).collect::<Result<_, _>>()?;
                let q: [BigRational; 6] = q.try_into().expect("six coefficients");
                (curve, Some(ImplicitPoly::conic(q)))
            }
            CurveKind::Graph { coeffs, domain } => {
                let d = parse_domain(domain)?;
                let raw = GraphCurve::polynomial(Polynomial::new(ascending(coeffs)?));
                let curve = reparam_unit_speed(Arc::new(raw), d.lo, d.hi)?;
                let q: Vec<BigRational> = coeffs.iter().map(|c| exact(c)).collect::<Result<_, _>>()?;
                (curve, Some(ImplicitPoly::graph(&q)))
            }
            CurveKind::ConstantCurvature {
                k,
                s0,
                origin,
                tangent,
                normal,
                domain,
            } => {
                let s0 = s0.as_deref().map(parse_real).transpose()?.unwrap_or(0.0);
                let frame = AdaptedFrame::new(parse_pair(origin)?, parse_pair(tangent)?, parse_pair(normal)?);
                let curve = AffineCurve::constant_curvature(parse_real(k)?, s0, frame, parse_domain(domain)?)?;
                (curve, None)
            }
            CurveKind::CurvatureIvp {
                kappa,
                s0,
                origin,
                tangent,
                normal,
                domain,
            } => {
                let d = parse_domain(domain)?;
                let s0 = s0.as_deref().map(parse_real).transpose()?.unwrap_or(d.lo);
                let std = AdaptedFrame::standard();
                let pick = |p: &Option<[String; 2]>, fallback: PlaneVector| -> Result<PlaneVector, SpecError> {
                    p.as_ref().map(parse_pair).transpose().map(|v| v.unwrap_or(fallback))
                };
                let frame = AdaptedFrame::new(pick(origin, std.origin)?, pick(tangent, std.tangent)?, pick(normal, std.normal)?);
                let poly = Polynomial::new(ascending(kappa)?);
                let k: ScalarFn = Arc::new(move |s| poly.eval(s));
                (reconstruct_from_curvature(k, d, s0, frame)?, None)
            }
        };
        let implicit = match &self.implicit {
            Some(terms) => {
                let mut p = BiPoly::zero();
                for t in terms {
                    p.add_term(t.x, t.y, exact(&t.coef)?);
                }
                if p.is_zero() {
                    return Err(SpecError::Domain("implicit equation is identically zero".into()));
                }
                Some(ImplicitPoly { poly: p })
            }
            None => derived,
        };
        Ok(BuiltCurve {
            name: self.name.clone().unwrap_or_else(|| self.kind_name().into()),
            curve,
            implicit,
        })
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            CurveKind::Parabola { .. } => "parabola",
            CurveKind::Conic { .. } => "conic",
            CurveKind::Graph { .. } => "graph",
            CurveKind::ConstantCurvature { .. } => "constant-curvature",
            CurveKind::CurvatureIvp { .. } => "curvature-ivp",
        }
    }
}

impl LatticeSpec {
    pub fn from_toml(text: &str) -> Result<Self, SpecError> {
        toml::from_str(text).map_err(|e| SpecError::Parse(e.message().to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("lattice spec serializes")
    }

    pub fn build(&self) -> Result<Lattice, SpecError> {
        let s = |p: &[String; 2]| [p[0].clone(), p[1].clone()];
        let (o, a, b) = (s(&self.origin), s(&self.v1), s(&self.v2));
        Ok(Lattice::parse(
            [&o[0], &o[1]],
            [&a[0], &a[1]],
            [&b[0], &b[1]],
        )?)
    }

    /// Exact generators when known, otherwise the shortest decimal that
    /// reads back to the same double.
    pub fn from_lattice(lat: &Lattice) -> Self {
        match lat.exact_basis() {
            Some(b) => {
                let p = |v: &[BigRational; 2]| [v[0].to_string(), v[1].to_string()];
                LatticeSpec {
                    origin: p(&b.v0),
                    v1: p(&b.v1),
                    v2: p(&b.v2),
                }
            }
            None => LatticeSpec {
                origin: float_pair(lat.v0),
                v1: float_pair(lat.v1),
                v2: float_pair(lat.v2),
            },
        }
    }
}

fn float_pair(v: PlaneVector) -> [String; 2] {
    [format!("{:?}", v.x), format!("{:?}", v.y)]
}

/// Curve and lattice specs reproducing a sharp instance. The curve is
/// written as a constant curvature curve through its initial jet, with the
/// instance's exact equation attached.
pub fn instance_specs(inst: &SharpInstance) -> (CurveSpec, LatticeSpec) {
    let d = inst.curve.domain();
    let j = inst.curve.jet(d.lo);
    let implicit = inst.implicit.as_ref().map(|imp| {
        imp.poly
            .terms()
            .map(|(&(x, y), c)| Term { x, y, coef: c.to_string() })
            .collect()
    });
    let curve = CurveSpec {
        name: Some(inst.name.clone()),
        kind: CurveKind::ConstantCurvature {
            k: format!("{:?}", inst.k0),
            s0: Some(format!("{:?}", d.lo)),
            origin: float_pair(j[0]),
            tangent: float_pair(j[1]),
            normal: float_pair(j[2]),
            domain: [format!("{:?}", d.lo), format!("{:?}", d.hi)],
        },
        implicit,
    };
    (curve, LatticeSpec::from_lattice(&inst.lattice))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate_on_arc;
    use crate::sharp::{hyperbola_zxz_instance, parabola_instance};

    #[test]
    fn parabola_arclength_is_exact() {
        let spec = CurveSpec::from_toml("type = \"parabola\"\na = \"0.5\"\ndomain = [\"0\", \"5\"]\n").unwrap();
        let b = spec.build().unwrap();
        assert_eq!(b.curve.domain().len(), 5.0);
        let p = b.curve.position(2.0);
        assert!((p.x - 2.0).abs() < 1e-14 && (p.y - 2.0).abs() < 1e-14);
        assert_eq!(b.name, "parabola");
    }

    #[test]
    fn conic_has_golden_curvature() {
        let text = "type = \"conic\"\ncoeffs = [\"1\", \"-1\", \"-1\", \"0\", \"0\", \"-1\"]\npoint = [\"1\", \"0\"]\ndomain = [\"0\", \"2\"]\n";
        let b = CurveSpec::from_toml(text).unwrap().build().unwrap();
        let alpha = crate::sharp::golden_hyperbola_alpha();
        assert!((b.curve.curvature(1.0) + alpha * alpha).abs() < 1e-9);
        assert!(b.implicit.unwrap().contains(&crate::lattice::exact_point(5, -8)));
    }

    #[test]
    fn graph_and_ivp_build() {
        let g = CurveSpec::from_toml("type = \"graph\"\ncoeffs = [\"0\", \"0\", \"0.5\"]\ndomain = [\"-1\", \"2\"]\n")
            .unwrap()
            .build()
            .unwrap();
        assert!((g.curve.domain().len() - 3.0).abs() < 1e-9);
        let ivp = CurveSpec::from_toml("type = \"curvature-ivp\"\nkappa = [\"-1\"]\ndomain = [\"0\", \"1\"]\n")
            .unwrap()
            .build()
            .unwrap();
        assert!((ivp.curve.curvature(0.5) + 1.0).abs() < 1e-8);
        assert!(ivp.implicit.is_none());
    }

    #[test]
    fn decimal_literals_round_to_nearest() {
        assert_eq!(parse_real("0.1").unwrap(), 0.1);
        assert_eq!(parse_real("1e-3").unwrap(), 0.001);
        assert_eq!(parse_real("1/4").unwrap(), 0.25);
        assert!(matches!(parse_real("abc"), Err(SpecError::Parse(_))));
        assert!(matches!(parse_real("inf"), Err(SpecError::Parse(_))));
    }

    #[test]
    fn errors_are_classified() {
        assert!(matches!(CurveSpec::from_toml("type = \"spiral\""), Err(SpecError::Parse(_))));
        assert!(matches!(CurveSpec::from_toml("type = \"parabola\"\na = 1\n"), Err(SpecError::Parse(_))));
        let concave = CurveSpec::from_toml("type = \"parabola\"\na = \"-1\"\ndomain = [\"0\", \"1\"]\n").unwrap();
        assert!(matches!(concave.build(), Err(SpecError::Domain(_))));
        let dep = LatticeSpec::from_toml("v1 = [\"1\", \"2\"]\nv2 = [\"2\", \"4\"]\n").unwrap();
        assert!(matches!(dep.build(), Err(SpecError::Domain(_))));
    }

    #[test]
    fn exported_instances_enumerate_the_same_points() {
        let lat = Lattice::integer([0, 0], [1, 0], [0, 2]).unwrap();
        for inst in [parabola_instance(&lat, 2, false).unwrap(), hyperbola_zxz_instance(2, true).unwrap()] {
            let (c, l) = instance_specs(&inst);
            let c = CurveSpec::from_toml(&c.to_toml()).unwrap().build().unwrap();
            let l = LatticeSpec::from_toml(&l.to_toml()).unwrap().build().unwrap();
            assert_eq!(l, inst.lattice);
            let found = enumerate_on_arc(&c.curve, c.implicit.as_ref(), &l, None).unwrap();
            assert_eq!(found.coords(), inst.expected, "{}", inst.name);
        }
    }
}
