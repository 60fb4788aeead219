use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use affine_geom::compare::{area_sandwich_check, CompareSettings};
use affine_geom::curve::{
    affine_arclength, affine_curvature_at, area_function, reconstruct_from_curvature, reparam_unit_speed, wedge,
    AdaptedFrame, AffineCurve, AffineMap, Ellipse, MovedCurve, PlaneVector,
};
use affine_geom::integrate::Tolerance;
use affine_geom::lattice::{
    circle_rotation_trace, equal_spaced_orbit, fundamental_area, Lattice,
};
use affine_geom::odekernel::{
    compare_solutions, constant_fn, lagrange_kernel, solve_ivp, Coefficient, ComparisonSettings, LinearOperator,
    ScalarFn,
};
use affine_geom::poly::Polynomial;
use affine_geom::report::Verdict;
use affine_geom::sharp::{hyperbola_general_instance, hyperbola_zxz_instance, parabola_instance, SharpInstance};
use affine_geom::specialfns::{abar, ck, fk, gk, hk, hk_domain, sk, DomainInterval};
use affine_geom::sweep::{coordinate_sweep, sandwich_sweep, summarize, SweepParams};

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig::with_cases(n)
}

fn poly_fn(coeffs: Vec<f64>) -> ScalarFn {
    let p = Polynomial::new(coeffs);
    Arc::new(move |s| p.eval(s))
}

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn derivative_identities(k in -10.0f64..10.0, s in -3.0f64..3.0) {
        let h = 1e-5;
        let dc = (ck(k, s + h) - ck(k, s - h)) / (2.0 * h);
        let ds = (sk(k, s + h) - sk(k, s - h)) / (2.0 * h);
        let scale = ck(k, s).abs().max(1.0);
        prop_assert!((dc + k * sk(k, s)).abs() <= 1e-6 * scale);
        prop_assert!((ds - ck(k, s)).abs() <= 1e-6 * scale);
    }

    #[test]
    fn profile_inverses_round_trip(k in -5.0f64..5.0, t in 0.02f64..0.98) {
        let dom = hk_domain(k);
        let s = t * dom.hi.min(3.0);
        prop_assert!((gk(k, hk(k, s).unwrap()).unwrap() - s).abs() <= 1e-10);
        let s = 3.0 * t;
        prop_assert!((fk(k, abar(k, s)).unwrap() - s).abs() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(cases(20))]

    #[test]
    fn kernel_initial_jet(
        n in 2usize..=3,
        coeffs in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 3),
        r in 0.0f64..1.0,
    ) {
        let op = LinearOperator::new(
            coeffs.into_iter().take(n).map(|c| Coefficient::Function(poly_fn(c))).collect(),
            DomainInterval::new(0.0, 1.0),
        ).unwrap();
        let jet = lagrange_kernel(&op, Tolerance::default()).jet(r, r).unwrap();
        for (j, v) in jet.iter().enumerate() {
            let want = if j == n - 1 { 1.0 } else { 0.0 };
            prop_assert!((v - want).abs() <= 1e-8, "j = {}: {}", j, v);
        }
    }

    #[test]
    fn unit_speed_after_reparameterization(a in 0.5f64..4.0, b in 0.5f64..4.0, t0 in 0.0f64..3.0) {
        let c = reparam_unit_speed(
            Arc::new(Ellipse { center: PlaneVector::ZERO, a, b }),
            t0,
            t0 + 2.5,
        ).unwrap();
        for s in c.domain().grid(1000) {
            let j = c.jet(s);
            prop_assert!((wedge(j[1], j[2]) - 1.0).abs() <= 1e-8);
        }
    }

    #[test]
    fn reconstruction_round_trip(coeffs in prop::collection::vec(-1.0f64..1.0, 1..4)) {
        let kappa = poly_fn(coeffs.clone());
        let c = reconstruct_from_curvature(kappa.clone(), DomainInterval::new(-1.0, 1.5), 0.0, AdaptedFrame::standard())
            .unwrap();
        for s in c.domain().grid(41) {
            prop_assert!((affine_curvature_at(&c, s).unwrap() - kappa(s)).abs() <= 1e-6);
        }
    }

    #[test]
    fn area_derivative_ladder(k in -2.0f64..2.0, s in 0.3f64..1.7) {
        let kappa = poly_fn(vec![k, 0.3]);
        let c = reconstruct_from_curvature(kappa, DomainInterval::new(0.0, 2.0), 0.0, AdaptedFrame::standard()).unwrap();
        let area = area_function(&c, 0.0, PlaneVector::new(0.3, -0.2)).unwrap();
        let h = 1e-4;
        let d1 = (area.eval(s + h).unwrap() - area.eval(s - h).unwrap()) / (2.0 * h);
        let d2 = (area.derivative(s + h) - area.derivative(s - h)) / (2.0 * h);
        prop_assert!((d1 - area.derivative(s)).abs() <= 1e-6);
        prop_assert!((d2 - area.second_derivative(s)).abs() <= 1e-6);
    }

    #[test]
    fn sturm_no_sign_change(
        k0 in -2.0f64..2.4,
        depth in 0.0f64..2.0,
        w in 0.5f64..4.0,
        len in 0.5f64..2.0,
    ) {
        // kappa <= k0 <= (pi / len)^2
        let limit = (PI / len).powi(2);
        let k0 = k0.min(limit);
        let kappa: ScalarFn = Arc::new(move |s: f64| k0 - depth * (w * s).sin().powi(2));
        let op = LinearOperator::single_term(2, 0, Coefficient::Function(kappa), DomainInterval::new(0.0, len)).unwrap();
        let u = solve_ivp(&op, constant_fn(0.0), 0.0, &[0.0, 1.0], Tolerance::default()).unwrap();
        for s in DomainInterval::new(0.0, len).grid(201).into_iter().skip(1).take(199) {
            prop_assert!(u.value(s).unwrap() > 0.0, "u({}) <= 0", s);
        }
    }

    #[test]
    fn comparison_with_nonpositive_coefficients(
        kb in -2.0f64..0.0,
        gap in 0.0f64..1.5,
        w in 0.5f64..3.0,
        third in any::<bool>(),
    ) {
        let kappa_bar: ScalarFn = Arc::new(move |s: f64| kb * (0.5 + 0.5 * (w * s).cos().powi(2)));
        let kb2 = kappa_bar.clone();
        let kappa: ScalarFn = Arc::new(move |s: f64| kb2(s) - gap * (1.0 + (w * s).sin()) / 2.0);
        let (n, l) = if third { (3, 1) } else { (2, 0) };
        let settings = ComparisonSettings { positivity_grid: 41, ..ComparisonSettings::default() };
        let rep = compare_solutions(kappa, kappa_bar, n, l, constant_fn(1.0), &vec![0.0; n], DomainInterval::new(0.0, 2.0), &settings)
            .unwrap();
        prop_assert_eq!(rep.verdict, Verdict::Holds, "{:?}", rep);
    }

    #[test]
    fn affine_invariance(seed in any::<u64>(), t0 in 0.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let motion = AffineMap::random_special(&mut rng);
        let e = Ellipse { center: PlaneVector::new(0.5, 1.0), a: 2.0, b: 1.0 };
        let moved = MovedCurve { inner: e, motion };
        let len = affine_arclength(&e, t0, t0 + 2.0).unwrap();
        let len_moved = affine_arclength(&moved, t0, t0 + 2.0).unwrap();
        prop_assert!((len - len_moved).abs() <= 1e-9 * len);

        let c = reparam_unit_speed(Arc::new(e), t0, t0 + 2.0).unwrap();
        let cm = c.transformed(motion).unwrap();
        let p0 = PlaneVector::new(-0.3, 0.4);
        let a = area_function(&c, 0.0, p0).unwrap().eval(1.5).unwrap();
        let am = area_function(&cm, 0.0, motion.apply(p0)).unwrap().eval(1.5).unwrap();
        prop_assert!((a - am).abs() <= 1e-9 * a.abs().max(1.0));
    }
}

#[test]
fn area_and_rectangle_bounds_for_nonpositive_curvature() {
    let settings = CompareSettings::default();
    let p = SweepParams {
        k0: -2.0,
        k1: -0.25,
        length: 2.0,
        trials: 100,
        seed: 11,
    };
    let sandwich = summarize(&sandwich_sweep(&p, &settings).unwrap());
    assert_eq!(sandwich.holds, 100, "{sandwich:?}");
    let rect = summarize(&coordinate_sweep(&p, &settings).unwrap());
    assert_eq!(rect.holds, 100, "{rect:?}");
}

#[test]
fn equality_only_for_constant_curvature() {
    let settings = CompareSettings::default();
    let (k0, k1, l) = (-1.0, 0.5, 2.0);
    let exact = AffineCurve::constant_curvature(k0, 0.0, AdaptedFrame::standard(), DomainInterval::new(0.0, l)).unwrap();
    assert!(area_sandwich_check(&exact, k0, k1, l, &settings).unwrap().equality);
    let nudged = AffineCurve::constant_curvature(k0 + 0.01, 0.0, AdaptedFrame::standard(), DomainInterval::new(0.0, l))
        .unwrap();
    let rep = area_sandwich_check(&nudged, k0, k1, l, &settings).unwrap();
    assert_eq!(rep.verdict, Verdict::Holds);
    assert!(!rep.equality);
}

fn all_instances() -> Vec<SharpInstance> {
    let general = Lattice::integer([0, 0], [2, 0], [1, 4]).unwrap();
    let mut out = Vec::new();
    for rigid in [false, true] {
        for m0 in 1..=3 {
            out.push(parabola_instance(&Lattice::standard(), m0, rigid).unwrap());
            out.push(parabola_instance(&general, m0, rigid).unwrap());
            out.push(hyperbola_zxz_instance(m0, rigid).unwrap());
            out.push(hyperbola_general_instance(&general, m0, rigid).unwrap());
        }
    }
    out
}

#[test]
fn sharp_instances_are_consistent() {
    for inst in all_instances() {
        let found = inst.enumerate().unwrap();
        assert!(found.exact, "{}", inst.name);
        assert_eq!(found.coords(), inst.expected, "{}", inst.name);
        let cert = inst.certificate().unwrap();
        assert!(cert.hypotheses_hold(), "{}: {:?}", inst.name, cert.hypotheses);
        assert_eq!(cert.bound, inst.expected_bound, "{}", inst.name);
        assert_eq!(found.len() as u64, cert.bound, "{}", inst.name);

        // the bound again from the raw inputs
        let area = fundamental_area(&inst.lattice);
        let spacing = gk(inst.k0, area / 2.0).unwrap();
        let ratio = inst.length / (2.0 * spacing);
        let m = (ratio + 1e-9).floor() as u64;
        let raw = if cert.theorem.id() == "rigid_lat" { 2 * m + 1 } else { 2 * m + 2 };
        assert_eq!(raw, cert.bound, "{}", inst.name);
        assert!((spacing - inst.spacing).abs() < 1e-9, "{}", inst.name);
        assert!((hk(inst.k0, inst.spacing).unwrap() - area / 2.0).abs() < 1e-10, "{}", inst.name);

        let dom = inst.curve.domain();
        for s in dom.grid(25) {
            assert!((affine_curvature_at(&inst.curve, s).unwrap() - inst.k0).abs() < 1e-8, "{}", inst.name);
        }
    }
}

#[test]
fn orbits_stay_on_their_conics() {
    let hyperbola = hyperbola_zxz_instance(4, false).unwrap();
    let cert = equal_spaced_orbit(
        &hyperbola.curve,
        &hyperbola.lattice,
        [(1, 0), (1, -1), (2, -3), (5, -8)],
        9,
        hyperbola.implicit.as_ref(),
    )
    .unwrap();
    assert!(cert.verified(), "{:?}", cert.checks);
    for (x, y) in cert.points.coords() {
        let (x, y) = (x as i128, y as i128);
        assert_eq!(x * x - x * y - y * y, 1);
    }
    let parabola = parabola_instance(&Lattice::standard(), 4, false).unwrap();
    let seed: Vec<(i64, i64)> = parabola.expected.iter().take(4).copied().collect();
    let cert = equal_spaced_orbit(
        &parabola.curve,
        &parabola.lattice,
        [seed[0], seed[1], seed[2], seed[3]],
        9,
        parabola.implicit.as_ref(),
    )
    .unwrap();
    assert!(cert.verified(), "{:?}", cert.checks);
    for (m, n) in cert.points.coords() {
        assert_eq!(2 * n, m * (m - 1));
    }
}

#[test]
fn integral_trace_only_at_crystallographic_angles() {
    for i in 1..=720 {
        let theta = PI * i as f64 / 360.0;
        let integral = circle_rotation_trace(theta).is_some();
        let expected = [120, 180, 240, 360, 480, 540, 600, 720].contains(&i);
        assert_eq!(integral, expected, "theta = {i} pi / 360");
    }
}
