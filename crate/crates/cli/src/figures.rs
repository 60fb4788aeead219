//! Point data for the figures: curve samples and marked points, one row
//! per point with columns `series,label,x,y`.

use std::sync::Arc;

use serde_json::json;

use affine_geom::curve::{reconstruct_from_curvature, AdaptedFrame, AffineCurve, Conic, PlaneVector};
use affine_geom::sharp::{circle_instance, fibonacci_point, golden_hyperbola_spacing, CircleFixture};
use affine_geom::specialfns::{xbar, ybar, DomainInterval};

use crate::output::{domain, num, CliError, Outcome, Sink, Table, SCHEMA};
use crate::{CmdResult, Figure, FigureArgs, Global};

struct Rows(Vec<(String, String, PlaneVector)>);

impl Rows {
    fn point(&mut self, series: &str, label: &str, p: PlaneVector) {
        self.0.push((series.into(), label.into(), p));
    }

    fn curve(&mut self, series: &str, c: &AffineCurve, n: usize) {
        for s in c.domain().grid(n.max(2)) {
            self.point(series, "", c.position(s));
        }
    }
}

fn constant(k: f64, lo: f64, hi: f64) -> Result<AffineCurve, CliError> {
    AffineCurve::constant_curvature(k, 0.0, AdaptedFrame::standard(), DomainInterval::new(lo, hi)).map_err(domain)
}

/// A curve `c` with `kappa = 0` and a comparison curve with
/// `kappa_bar = -1` from the same start and frame, with arc endpoints.
fn fig1(rows: &mut Rows, n: usize) -> Result<(), CliError> {
    let c = constant(0.0, 0.0, 2.0)?;
    let cbar = constant(-1.0, 0.0, 2.0)?;
    rows.curve("c", &c, n);
    rows.curve("cbar", &cbar, n);
    rows.point("c", "c(a)", c.position(0.0));
    rows.point("c", "c(b)", c.position(2.0));
    rows.point("cbar", "cbar(a)", cbar.position(0.0));
    rows.point("cbar", "cbar(b)", cbar.position(2.0));
    Ok(())
}

/// The conic `x^2 + k0 y^2 - 2y = 0` with `k0 = -1` on `[-L, L]`, `L = 1`,
/// and the triangle of its endpoints and midpoint.
fn fig5(rows: &mut Rows, n: usize) -> Result<(), CliError> {
    let (k0, l) = (-1.0, 1.0);
    rows.curve("curve", &constant(k0, -l, l)?, n);
    rows.point("triangle", "p1", PlaneVector::new(xbar(k0, -l), ybar(k0, -l)));
    rows.point("triangle", "p2", PlaneVector::ZERO);
    rows.point("triangle", "p3", PlaneVector::new(xbar(k0, l), ybar(k0, l)));
    Ok(())
}

/// An arc with curvature in `[-1, 0]` in adapted coordinates at `p0`,
/// inside the rectangle of the `k0 = -1` profiles, with an inscribed
/// triangle.
fn fig6(rows: &mut Rows, n: usize) -> Result<(), CliError> {
    let (k0, l) = (-1.0, 1.0);
    let kappa = Arc::new(|s: f64| -0.5 - 0.5 * (2.0 * s).sin());
    let c = reconstruct_from_curvature(kappa, DomainInterval::new(-l, l), 0.0, AdaptedFrame::standard()).map_err(domain)?;
    rows.curve("curve", &c, n);
    let (x, y) = (xbar(k0, l), ybar(k0, l));
    for (i, (px, py)) in [(-x, 0.0), (x, 0.0), (x, y), (-x, y), (-x, 0.0)].into_iter().enumerate() {
        rows.point("rectangle", &format!("corner{}", i % 4), PlaneVector::new(px, py));
    }
    rows.point("points", "p0", c.position(0.0));
    rows.point("points", "p1", c.position(-l));
    rows.point("points", "p2", c.position(-l / 3.0));
    rows.point("points", "p3", c.position(l));
    Ok(())
}

/// The branch of `x^2 - xy - y^2 = 1` through `(1, 0)` over `-8 <= y <= 0`
/// and its four integer points there.
fn fig7(rows: &mut Rows, n: usize) -> Result<(), CliError> {
    let l = golden_hyperbola_spacing();
    let c = Conic::new(1.0, -1.0, -1.0, 0.0, 0.0, -1.0)
        .unit_speed_curve(PlaneVector::new(1.0, 0.0), DomainInterval::new(-0.25 * l, 3.1 * l))
        .map_err(domain)?;
    rows.curve("curve", &c, n);
    for j in 1..=4 {
        let (x, y) = fibonacci_point(j);
        rows.point("lattice", &format!("p{j}"), PlaneVector::new(x as f64, y as f64));
    }
    Ok(())
}

fn lattice_near_circle(rows: &mut Rows, fx: &CircleFixture, radius: f64) {
    let series = format!("{}-lattice", fx.name);
    for m in -3i64..=3 {
        for k in -3i64..=3 {
            let p = fx.lattice.point(m, k);
            if p.norm() <= 1.6 * radius {
                rows.point(&series, "", p);
            }
        }
    }
    for (i, &(m, k)) in fx.seed.iter().enumerate() {
        rows.point(&fx.name, &format!("p{}", i + 1), fx.lattice.point(m, k));
    }
}

/// The unit circle (`k = 1`) with the square and hexagonal lattices
/// through four evenly spaced points.
fn fig8(rows: &mut Rows, n: usize) -> Result<(), CliError> {
    let ci = circle_instance(1.0).map_err(domain)?;
    rows.curve("circle", &ci.curve, n);
    lattice_near_circle(rows, &ci.square, ci.radius);
    lattice_near_circle(rows, &ci.hexagonal, ci.radius);
    Ok(())
}

pub fn figures(_g: &Global, a: &FigureArgs, sink: &Sink) -> CmdResult {
    let mut rows = Rows(Vec::new());
    let id = match a.figure {
        Figure::Fig1 => {
            fig1(&mut rows, a.samples)?;
            "fig1"
        }
        Figure::Fig5 => {
            fig5(&mut rows, a.samples)?;
            "fig5"
        }
        Figure::Fig6 => {
            fig6(&mut rows, a.samples)?;
            "fig6"
        }
        Figure::Fig7 => {
            fig7(&mut rows, a.samples)?;
            "fig7"
        }
        Figure::Fig8 => {
            fig8(&mut rows, a.samples)?;
            "fig8"
        }
    };
    let mut t = Table::new(&["series", "label", "x", "y"]);
    for (series, label, p) in &rows.0 {
        t.push(vec![series.clone(), label.clone(), num(p.x), num(p.y)]);
    }
    let points: Vec<_> = rows
        .0
        .iter()
        .map(|(series, label, p)| json!({ "series": series, "label": label, "x": p.x, "y": p.y }))
        .collect();
    sink.emit(json!({ "schema": SCHEMA, "command": "figures", "figure": id, "points": points }), t)?;
    Ok(Outcome::Ok)
}
