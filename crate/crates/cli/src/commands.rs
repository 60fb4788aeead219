use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use affine_geom::compare::{
    area_compare, area_sandwich_check, coord_bounds_check, sampled_curvature_range, verify_triangle_bound, CompareSettings,
    TriangleBound,
};
use affine_geom::curve::{area_function, PlaneVector};
use affine_geom::integrate::Tolerance;
use affine_geom::lattice::{
    bound_general, bound_rigid, bound_sharp, bound_three_points, bound_two_points, enumerate_on_arc, fundamental_area,
    m_of_curve, CountBoundCertificate, CountTheorem, Lattice, LatticeError,
};
use affine_geom::odekernel::{
    check_forward_positive, constant_fn, lagrange_kernel, Coefficient, ComparisonSettings, LinearOperator,
};
use affine_geom::report::{BoundReport, Verdict};
use affine_geom::sharp::{circle_instance, hyperbola_general_instance, hyperbola_zxz_instance, parabola_instance, SharpInstance};
use affine_geom::specfile::{instance_specs, BuiltCurve, CurveSpec, LatticeSpec};
use affine_geom::specialfns::{sk, ybar, DomainInterval};
use affine_geom::sweep::{
    area_comparison_sweep, coordinate_sweep, ode_comparison_sweep, random_vertices, sandwich_sweep, summarize, trial_rng,
    triangle_sweep, SweepParams, TrialReport,
};

use crate::output::{domain, num, CliError, Outcome, Sink, Table, SCHEMA};
use crate::{
    AreaArgs, BoundsArgs, CmdResult, CountArgs, CurveArgs, ExampleArgs, ExampleName, Global, KernelArgs, Statement,
    TheoremChoice, VerifyArgs,
};

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load_curve(path: &Path) -> Result<BuiltCurve, CliError> {
    let spec = CurveSpec::from_toml(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(spec.build()?)
}

fn load_lattice(path: &Path) -> Result<Lattice, CliError> {
    let spec = LatticeSpec::from_toml(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(spec.build()?)
}

fn tolerance(g: &Global) -> Tolerance {
    match g.tol {
        Some(rtol) => Tolerance {
            rtol,
            atol: rtol * 1e-2,
        },
        None => Tolerance::default(),
    }
}

fn compare_settings(g: &Global) -> CompareSettings {
    CompareSettings {
        ode: tolerance(g),
        ..CompareSettings::default()
    }
}

fn grid(d: DomainInterval, n: usize) -> Vec<f64> {
    d.grid(n.max(2))
}

pub fn arclength(_g: &Global, a: &CurveArgs, sink: &Sink) -> CmdResult {
    let c = load_curve(&a.curve)?;
    let d = c.curve.domain();
    let value = d.len();
    eprintln!("arclength {}", num(value));
    let mut t = Table::new(&["s", "x", "y"]);
    for s in grid(d, a.samples) {
        let p = c.curve.position(s);
        t.push(vec![num(s), num(p.x), num(p.y)]);
    }
    sink.emit(
        json!({ "schema": SCHEMA, "command": "arclength", "curve": c.name, "domain": [d.lo, d.hi], "value": value }),
        t,
    )?;
    Ok(Outcome::Ok)
}

pub fn curvature(_g: &Global, a: &CurveArgs, sink: &Sink) -> CmdResult {
    let c = load_curve(&a.curve)?;
    let d = c.curve.domain();
    let samples: Vec<(f64, f64)> = grid(d, a.samples.max(201)).into_iter().map(|s| (s, c.curve.curvature(s))).collect();
    let (min, max) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, k)| (lo.min(k), hi.max(k)));
    let mean = samples.iter().map(|p| p.1).sum::<f64>() / samples.len() as f64;
    let constant = max - min <= 1e-8 * mean.abs().max(1.0);
    let value = c.curve.constant_curvature_value().or(constant.then_some(mean));
    match value {
        Some(v) => eprintln!("curvature {} (constant)", num(v)),
        None => eprintln!("curvature in [{}, {}]", num(min), num(max)),
    }
    let mut t = Table::new(&["s", "kappa"]);
    for s in grid(d, a.samples) {
        t.push(vec![num(s), num(c.curve.curvature(s))]);
    }
    sink.emit(
        json!({
            "schema": SCHEMA, "command": "curvature", "curve": c.name, "domain": [d.lo, d.hi],
            "constant": constant, "value": value, "min": min, "max": max,
        }),
        t,
    )?;
    Ok(Outcome::Ok)
}

pub fn area(g: &Global, a: &AreaArgs, sink: &Sink) -> CmdResult {
    let c = load_curve(&a.curve.curve)?;
    let d = c.curve.domain();
    let apex = a.apex.map_or_else(|| c.curve.position(d.lo), |(x, y)| PlaneVector::new(x, y));
    let area = area_function(&c.curve, d.lo, apex).map_err(domain)?;
    let quad = area.eval(d.hi).map_err(domain)?;
    let ode = area.ode_solution(tolerance(g)).map_err(domain)?;
    let via_ode = ode.value(d.hi).map_err(domain)?;
    eprintln!("area {} (ode {})", num(quad), num(via_ode));
    let mut t = Table::new(&["s", "area"]);
    for s in grid(d, a.curve.samples) {
        t.push(vec![num(s), num(area.eval(s).map_err(domain)?)]);
    }
    sink.emit(
        json!({
            "schema": SCHEMA, "command": "area", "curve": c.name, "domain": [d.lo, d.hi],
            "apex": [apex.x, apex.y], "value": quad, "ode_value": via_ode, "difference": (quad - via_ode).abs(),
        }),
        t,
    )?;
    Ok(Outcome::Ok)
}

/// Closed form of the kernel of `y^(n) + k y^(l)` when one is known.
fn kernel_closed_form(n: usize, l: usize, k: f64, u: f64) -> Option<f64> {
    if k == 0.0 {
        let fact: f64 = (1..n).map(|i| i as f64).product();
        return Some(u.powi(n as i32 - 1) / fact);
    }
    match (n, l) {
        (2, 0) => Some(sk(k, u)),
        (3, 1) => Some(ybar(k, u)),
        _ => None,
    }
}

pub fn kernel(g: &Global, a: &KernelArgs, sink: &Sink) -> CmdResult {
    let interval = DomainInterval::try_new(a.from, a.to).ok_or_else(|| CliError::Domain("empty interval".into()))?;
    let r = a.r.unwrap_or(a.from);
    if !interval.contains(r) {
        return Err(CliError::Domain(format!("base point {r} outside the interval")));
    }
    let op = LinearOperator::single_term(a.n, a.l, Coefficient::Constant(a.k), interval).map_err(domain)?;
    let kf = lagrange_kernel(&op, tolerance(g));
    let mut t = Table::new(&["s", "kernel", "closed_form"]);
    let mut max_err: Option<f64> = None;
    for s in grid(DomainInterval::new(r, a.to), a.samples) {
        let v = kf.eval(s, r).map_err(domain)?;
        let closed = kernel_closed_form(a.n, a.l, a.k, s - r);
        if let Some(cf) = closed {
            max_err = Some(max_err.unwrap_or(0.0).max((v - cf).abs()));
        }
        t.push(vec![num(s), num(v), closed.map(num).unwrap_or_default()]);
    }
    let pos = check_forward_positive(&op, interval, 101, 1e-9).map_err(domain)?;
    eprintln!(
        "{}: forward positive {}, max |K - closed form| {}",
        op.label(),
        pos.is_positive(),
        max_err.map_or("n/a".into(), num)
    );
    sink.emit(
        json!({
            "schema": SCHEMA, "command": "kernel", "operator": op.label(), "interval": [a.from, a.to], "r": r,
            "max_closed_form_error": max_err, "positivity": pos,
        }),
        t,
    )?;
    Ok(Outcome::Ok)
}

fn outcome_of(reports: &[&BoundReport]) -> Outcome {
    reports.iter().fold(Outcome::Ok, |o, r| {
        o.worst(match r.verdict {
            Verdict::Holds => Outcome::Ok,
            Verdict::HypothesesFailed => Outcome::HypothesesFailed,
            Verdict::Violated => Outcome::Violated,
        })
    })
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Violated => "violated",
        Verdict::HypothesesFailed => "hypotheses_failed",
    }
}

pub fn verify(g: &Global, a: &VerifyArgs, sink: &Sink) -> CmdResult {
    let settings = compare_settings(g);
    let (trials, params): (Vec<TrialReport>, Value) = match &a.curve {
        None => {
            let p = SweepParams {
                k0: a.k0.unwrap_or(-1.0),
                k1: a.k1.unwrap_or(0.0),
                length: a.length.unwrap_or(1.0),
                trials: a.trials,
                seed: g.seed,
            };
            let trials = match a.statement {
                Statement::OdeComparison => {
                    let cs = ComparisonSettings {
                        ode: tolerance(g),
                        ..ComparisonSettings::default()
                    };
                    ode_comparison_sweep(&p, a.n, a.l, &cs)
                }
                Statement::AreaComparison => area_comparison_sweep(&p, &settings),
                Statement::AreaSandwich => sandwich_sweep(&p, &settings),
                Statement::CoordinateBounds => coordinate_sweep(&p, &settings),
                Statement::TriangleArc => triangle_sweep(&p, TriangleBound::Arc, a.per_curve, &settings),
                Statement::TriangleRect => triangle_sweep(&p, TriangleBound::Rect, a.per_curve, &settings),
            }
            .map_err(domain)?;
            let mut v = serde_json::to_value(p).expect("plain data");
            if a.statement == Statement::OdeComparison {
                v["n"] = json!(a.n);
                v["l"] = json!(a.l);
            }
            (trials, v)
        }
        Some(path) => verify_curve(g, a, path, &settings)?,
    };
    for t in &trials {
        let r = &t.report;
        eprintln!(
            "trial {} [{}]: {} lhs={} rhs={}{}",
            t.trial,
            t.case,
            verdict_name(r.verdict),
            num(r.lhs),
            num(r.rhs),
            if r.equality { " equality" } else { "" }
        );
    }
    let summary = summarize(&trials);
    eprintln!(
        "{}: {} holds, {} violated, {} hypotheses failed, {} equality (seed {})",
        a.statement.id(),
        summary.holds,
        summary.violated,
        summary.hypotheses_failed,
        summary.equality,
        g.seed
    );
    let mut t = Table::new(&["trial", "case", "verdict", "lhs", "rhs", "slack", "equality"]);
    for tr in &trials {
        let r = &tr.report;
        t.push(vec![
            tr.trial.to_string(),
            tr.case.clone(),
            verdict_name(r.verdict).into(),
            num(r.lhs),
            num(r.rhs),
            num(r.slack),
            r.equality.to_string(),
        ]);
    }
    let outcome = outcome_of(&trials.iter().map(|t| &t.report).collect::<Vec<_>>());
    sink.emit(
        json!({
            "schema": SCHEMA, "command": "verify", "statement": a.statement.id(), "seed": g.seed,
            "params": params, "summary": summary, "reports": trials,
        }),
        t,
    )?;
    Ok(outcome)
}

fn verify_curve(g: &Global, a: &VerifyArgs, path: &Path, settings: &CompareSettings) -> Result<(Vec<TrialReport>, Value), CliError> {
    let c = load_curve(path)?;
    let curve = &c.curve;
    let d = curve.domain();
    let (kmin, kmax) = sampled_curvature_range(curve, d.lo, d.hi, 401);
    let k0 = a.k0.unwrap_or(kmin);
    let k1 = a.k1.unwrap_or(kmax);
    let one = |case: &str, report: BoundReport| {
        vec![TrialReport {
            trial: 0,
            case: case.into(),
            report,
        }]
    };
    let mut params = json!({ "curve": c.name, "k0": k0, "k1": k1, "seed": g.seed });
    let trials = match a.statement {
        Statement::OdeComparison => {
            return Err(CliError::Parse("thm3.4 compares ODE solutions and takes no curve".into()));
        }
        Statement::AreaComparison => {
            let l = a.length.unwrap_or(d.hi);
            let kbar = a.kbar.unwrap_or(k0);
            params["L"] = json!(l);
            params["kbar"] = json!(kbar);
            one("constant kappa_bar", area_compare(curve, constant_fn(kbar), l, settings).map_err(domain)?)
        }
        Statement::AreaSandwich => {
            let l = a.length.unwrap_or(d.hi);
            params["L"] = json!(l);
            one("curve", area_sandwich_check(curve, k0, k1, l, settings).map_err(domain)?)
        }
        Statement::CoordinateBounds => {
            let s0 = a.s0.unwrap_or(0.5 * (d.lo + d.hi));
            let l = a.length.unwrap_or((s0 - d.lo).min(d.hi - s0));
            params["s0"] = json!(s0);
            params["L"] = json!(l);
            one("curve", coord_bounds_check(curve, s0, k0, k1, l, settings).map_err(domain)?)
        }
        Statement::TriangleArc | Statement::TriangleRect => {
            let kind = if a.statement == Statement::TriangleArc {
                TriangleBound::Arc
            } else {
                TriangleBound::Rect
            };
            params["trials"] = json!(a.trials);
            (0..a.trials)
                .map(|i| {
                    let v = random_vertices(&mut trial_rng(g.seed, i), d.len()).map(|s| s + d.lo);
                    Ok(TrialReport {
                        trial: i,
                        case: "triangle".into(),
                        report: verify_triangle_bound(curve, v, kind, k0, k1, settings).map_err(domain)?,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?
        }
    };
    Ok((trials, params))
}

fn certificate(theorem: CountTheorem, k0: f64, k1: Option<f64>, lambda: f64, m: u64, area: f64) -> Result<CountBoundCertificate, LatticeError> {
    let k1v = k1.unwrap_or(k0);
    match theorem {
        CountTheorem::TwoPoints => bound_two_points(k0, lambda, m, area),
        CountTheorem::LowerCurvature => bound_general(k0, lambda, m, area),
        CountTheorem::ThreePoints => bound_three_points(k0, k1v, lambda, m, area),
        CountTheorem::Sharp => bound_sharp(k0, k1v, lambda, m, area),
        CountTheorem::Rigid => bound_rigid(k0, k1v, lambda, m, area),
    }
}

fn certificate_outcome(c: &CountBoundCertificate) -> Outcome {
    if c.hypotheses_hold() {
        Outcome::Ok
    } else {
        Outcome::HypothesesFailed
    }
}

fn hypothesis_lines(c: &CountBoundCertificate) {
    for h in &c.hypotheses {
        eprintln!("  {} {}: {}", if h.holds { "ok  " } else { "FAIL" }, h.name, h.detail);
    }
}

fn certificate_table(c: &CountBoundCertificate) -> Table {
    let mut t = Table::new(&["theorem", "bound", "m", "spacing", "hypotheses_hold"]);
    t.push(vec![
        c.theorem.id().into(),
        c.bound.to_string(),
        c.m.map(|m| m.to_string()).unwrap_or_default(),
        c.spacing.map(num).unwrap_or_default(),
        c.hypotheses_hold().to_string(),
    ]);
    t
}

pub fn bounds(_g: &Global, a: &BoundsArgs, sink: &Sink) -> CmdResult {
    let cert = certificate(a.theorem, a.k0, a.k1, a.lambda, a.multiplier, a.cell_area).map_err(domain)?;
    match cert.conclusion() {
        Some(b) => eprintln!("{}: at most {b} lattice points", cert.theorem.id()),
        None => eprintln!("{}: hypotheses fail, no conclusion (formula gives {})", cert.theorem.id(), cert.bound),
    }
    hypothesis_lines(&cert);
    let outcome = certificate_outcome(&cert);
    let table = certificate_table(&cert);
    sink.emit(json!({ "schema": SCHEMA, "command": "bounds", "certificate": cert }), table)?;
    Ok(outcome)
}

pub fn count(_g: &Global, a: &CountArgs, sink: &Sink) -> CmdResult {
    let c = load_curve(&a.curve)?;
    let lat = match &a.lattice {
        Some(p) => load_lattice(p)?,
        None => Lattice::standard(),
    };
    let found = enumerate_on_arc(&c.curve, c.implicit.as_ref(), &lat, a.window.as_ref()).map_err(domain)?;
    for w in &found.warnings {
        eprintln!("warning: {w}");
    }
    let d = c.curve.domain();
    let (kmin, kmax) = match c.curve.constant_curvature_value() {
        Some(k) => (k, k),
        None => sampled_curvature_range(&c.curve, d.lo, d.hi, 401),
    };
    let (k0, k1) = (a.k0.unwrap_or(kmin), a.k1.unwrap_or(kmax));
    let mult = m_of_curve(&found);
    let m = a.multiplier.unwrap_or(mult.value);
    let area = fundamental_area(&lat);
    let lambda = d.len();
    let cert = match a.theorem {
        TheoremChoice::Auto => certificate(CountTheorem::Rigid, k0, Some(k1), lambda, m, area)
            .or_else(|_| certificate(CountTheorem::Sharp, k0, Some(k1), lambda, m, area)),
        other => {
            let th = match other {
                TheoremChoice::TwoPoints => CountTheorem::TwoPoints,
                TheoremChoice::LowerCurvature => CountTheorem::LowerCurvature,
                TheoremChoice::ThreePoints => CountTheorem::ThreePoints,
                TheoremChoice::Sharp => CountTheorem::Sharp,
                _ => CountTheorem::Rigid,
            };
            certificate(th, k0, Some(k1), lambda, m, area)
        }
    }
    .map_err(domain)?;
    let n = found.len() as u64;
    let (outcome, marker) = match cert.conclusion() {
        None => (Outcome::HypothesesFailed, None),
        Some(b) if n > b => (Outcome::Violated, None),
        Some(b) => (Outcome::Ok, (n == b).then_some("SHARP")),
    };
    eprintln!(
        "{}: bound {}, count {}{}",
        cert.theorem.id(),
        cert.bound,
        n,
        marker.map(|m| format!(", {m}")).unwrap_or_default()
    );
    hypothesis_lines(&cert);
    let mut t = Table::new(&["m", "n", "x", "y", "s"]);
    for p in &found.points {
        t.push(vec![p.m.to_string(), p.n.to_string(), num(p.position.x), num(p.position.y), num(p.s)]);
    }
    sink.emit(
        json!({
            "schema": SCHEMA, "command": "count", "curve": c.name, "theorem": cert.theorem.id(),
            "bound": cert.bound, "count": n, "sharp": marker.is_some(), "marker": marker,
            "certificate": cert, "multiplier": mult, "exact": found.exact, "warnings": found.warnings,
            "points": found.points.iter().map(|p| json!({
                "m": p.m, "n": p.n, "x": p.position.x, "y": p.position.y, "s": p.s,
            })).collect::<Vec<_>>(),
        }),
        t,
    )?;
    Ok(outcome)
}

fn slug(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' })
        .collect::<String>()
        .split('-')
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join("-")
}

pub fn examples(_g: &Global, a: &ExampleArgs, sink: &Sink) -> CmdResult {
    use ExampleName::*;
    let want = |n: ExampleName| a.name == All || a.name == n;
    let lat = match &a.lattice {
        Some(p) => load_lattice(p)?,
        None => Lattice::standard(),
    };
    let general_lat = match &a.lattice {
        Some(_) => lat.clone(),
        None => Lattice::integer([0, 0], [2, 0], [1, 4]).expect("independent"),
    };
    let mut instances: Vec<SharpInstance> = Vec::new();
    for rigid in [false, true] {
        if want(Parabola) {
            instances.push(parabola_instance(&lat, a.m0, rigid).map_err(domain)?);
        }
        if want(Hyperbola) {
            instances.push(hyperbola_zxz_instance(a.m0, rigid).map_err(domain)?);
        }
        if want(HyperbolaGeneral) {
            instances.push(hyperbola_general_instance(&general_lat, a.m0, rigid).map_err(domain)?);
        }
    }
    if let Some(dir) = &a.export {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    let mut outcome = Outcome::Ok;
    let mut rows = Vec::new();
    let mut t = Table::new(&["name", "theorem", "expected_bound", "bound", "count", "matches_expected", "sharp"]);
    for inst in &instances {
        let found = inst.enumerate().map_err(domain)?;
        let cert = inst.certificate().map_err(domain)?;
        let coords = found.coords();
        let matches = coords == inst.expected;
        let sharp = cert.conclusion() == Some(found.len() as u64);
        if !matches || !sharp || cert.bound != inst.expected_bound {
            outcome = outcome.worst(Outcome::Violated);
        }
        eprintln!(
            "{}: bound {}, count {}{}{}",
            inst.name,
            cert.bound,
            found.len(),
            if sharp { ", SHARP" } else { "" },
            if matches { "" } else { ", points differ from the expected ones" }
        );
        if let Some(dir) = &a.export {
            let (cs, ls) = instance_specs(inst);
            let base = slug(&inst.name);
            let write = |suffix: &str, text: String| {
                let p = dir.join(format!("{base}.{suffix}.toml"));
                fs::write(&p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
            };
            write("curve", cs.to_toml())?;
            write("lattice", ls.to_toml())?;
        }
        t.push(vec![
            inst.name.clone(),
            inst.theorem.id().into(),
            inst.expected_bound.to_string(),
            cert.bound.to_string(),
            found.len().to_string(),
            matches.to_string(),
            sharp.to_string(),
        ]);
        rows.push(json!({
            "instance": inst, "found": coords, "bound": cert.bound, "count": found.len(),
            "matches_expected": matches, "sharp": sharp, "certificate": cert,
        }));
    }
    let mut circle = Value::Null;
    if want(Circle) {
        let ci = circle_instance(a.k).map_err(domain)?;
        let mut checks = Vec::new();
        for fx in [&ci.square, &ci.hexagonal] {
            let chk = ci.check(fx).map_err(domain)?;
            eprintln!(
                "circle k={} {}: angle {}, 2cos(angle) {}, {} lattice points",
                num(a.k),
                fx.name,
                num(chk.angle),
                chk.trace.map_or("not an integer".into(), |v| v.to_string()),
                chk.found
            );
            if chk.trace.is_none() || chk.found != fx.points_on_circle {
                outcome = outcome.worst(Outcome::Violated);
            }
            t.push(vec![
                format!("circle {}", fx.name),
                String::new(),
                String::new(),
                String::new(),
                chk.found.to_string(),
                (chk.found == fx.points_on_circle).to_string(),
                String::new(),
            ]);
            checks.push(json!({ "fixture": fx, "check": chk }));
        }
        circle = json!({ "instance": ci, "fixtures": checks });
    }
    sink.emit(
        json!({ "schema": SCHEMA, "command": "examples", "m0": a.m0, "instances": rows, "circle": circle }),
        t,
    )?;
    Ok(outcome)
}
