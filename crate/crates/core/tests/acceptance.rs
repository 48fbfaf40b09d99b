//! Acceptance criteria. Each test prints one PASS/FAIL line with the
//! measured value and its tolerance, then asserts. Lines go straight to
//! stderr so they show up without `--nocapture`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ruled_core::commands::{cmd_verify, Check};
use ruled_core::expr::{eval_f64, eval_jet3, Bindings, Expression};
use ruled_core::image::{check_prop6, image_frames, DEFAULT_IMAGE_SAMPLES};
use ruled_core::laplace::{classify_image, gamma_curvature, laplace_at, Verdict, CLASSIFY_REL_TOL};
use ruled_core::oracle::{fit_line, laplacian_oracle, OracleConfig};
use ruled_core::relnorm::SupportField;
use ruled_core::scene::{builtin, builtin_names, Scene, SupportSource};
use ruled_core::surface::{recover_invariants, InvariantTriple, Surface, Vec3};

fn report(n: u32, what: &str, ok: bool, detail: String) -> bool {
    let line = format!("{} criterion {n}: {what}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    ok
}

fn scene(name: &str) -> Scene {
    builtin(name).unwrap().build().unwrap()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// 5×5 interior points of the scene domain.
fn interior_points(s: &Scene) -> Vec<(f64, f64)> {
    let g = s.grid();
    let du = g.u_max - g.u_min;
    let us = linspace(g.u_min + 0.1 * du, g.u_max - 0.1 * du, 5);
    let vs = linspace(0.8 * g.v_min, 0.8 * g.v_max, 5);
    us.iter().flat_map(|&u| vs.iter().map(move |&v| (u, v))).collect()
}

#[test]
fn criterion_1_laplacian_oracle_equivalence() {
    let plain = OracleConfig { richardson: false, ..OracleConfig::default() };
    let extrapolated = OracleConfig::default();
    let (mut worst_plain, mut worst_rich, mut points) = (0.0f64, 0.0f64, 0usize);
    for name in builtin_names() {
        let s = scene(name);
        for (u, v) in interior_points(&s) {
            let exact = laplace_at(&s.surface, &s.support, u, v).unwrap().l;
            let a = laplacian_oracle(&s.surface, &s.support, u, v, &plain).unwrap();
            let b = laplacian_oracle(&s.surface, &s.support, u, v, &extrapolated).unwrap();
            worst_plain = worst_plain.max((a - exact).norm() / (1.0 + exact.norm()));
            worst_rich = worst_rich.max((b - exact).norm() / (1.0 + exact.norm()));
            points += 1;
        }
    }
    let ok = worst_plain <= 1e-4 && worst_rich <= 1e-6 && points >= 6 * 25;
    assert!(report(
        1,
        "finite-difference Laplacian vs closed form",
        ok,
        format!("{points} points, max dev {worst_plain:.2e} (tol 1e-4), with extrapolation {worst_rich:.2e} (tol 1e-6)")
    ));
}

/// A random skew surface with a random positive support function.
fn random_scene(rng: &mut ChaCha8Rng) -> (Surface, SupportField) {
    let mut r = |lo: f64, hi: f64| rng.gen_range(lo..hi);
    let kappa = format!("{} + {}*u", r(-1.5, 1.5), r(-1.0, 1.0));
    let b1 = r(-0.5, 0.5);
    let b0 = (b1.abs() + r(0.3, 1.5)) * if r(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
    let delta = format!("{b0} + {b1}*sin({}*u)", r(0.5, 2.0));
    let lambda = format!("{} + {}*u^2", r(-2.0, 2.0), r(-1.0, 1.0));
    let d1 = r(-0.5, 0.5);
    let q = format!("({} + {d1}*sin(u + {}*v))/w^{}", d1.abs() + r(0.5, 2.0), r(-1.0, 1.0), r(0.0, 1.5));
    let inv = InvariantTriple::parse(&kappa, &delta, &lambda, (0.0, 1.0), Bindings::new()).unwrap();
    (Surface::new(inv, 1e-3).unwrap(), SupportField::parse_general(&q, Bindings::new()).unwrap())
}

#[test]
fn criterion_2_asymptotic_plane() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let (mut structural, mut oracle) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let (surface, support) = random_scene(&mut rng);
        for _ in 0..4 {
            let (u, v) = (rng.gen_range(0.05..0.95), rng.gen_range(-2.0..2.0));
            let z = surface.frame(u).unwrap().z;
            let l = laplace_at(&surface, &support, u, v).unwrap();
            structural = structural.max(l.l.dot(&z).abs());
            let num = laplacian_oracle(&surface, &support, u, v, &OracleConfig::default()).unwrap();
            oracle = oracle.max(num.dot(&z).abs());
        }
    }
    let ok = structural <= 1e-12 && oracle <= 1e-5;
    assert!(report(
        2,
        "Laplace normal lies in the asymptotic plane (50 random surfaces)",
        ok,
        format!("closed form max |<L,z>| {structural:.2e} (tol 1e-12), oracle {oracle:.2e} (tol 1e-5)")
    ));
}

fn max_l_v(s: &Scene) -> f64 {
    let mut m = 0.0f64;
    for u in s.grid().us() {
        for v in s.grid().vs() {
            m = m.max(laplace_at(&s.surface, &s.support, u, v).unwrap().l_v.norm());
        }
    }
    m
}

#[test]
fn criterion_3_constant_along_rulings() {
    let conoidal = ["helicoid", "example1", "example2", "prop2"];
    let mut worst_const = 0.0f64;
    let mut least_varying = f64::INFINITY;
    for name in conoidal {
        let cfg = builtin(name).unwrap();
        worst_const = worst_const.max(max_l_v(&cfg.build().unwrap()));

        let mut bent = cfg.clone();
        bent.invariants.kappa = "0.3".into();
        least_varying = least_varying.min(max_l_v(&bent.build().unwrap()));

        let mut v_dependent = cfg.clone();
        v_dependent.support = match &cfg.support {
            SupportSource::Conoidal { f } => SupportSource::General { q: format!("({f})*(1 + 0.1*v^2)/w") },
            SupportSource::General { q } => SupportSource::General { q: format!("({q})*(1 + 0.1*v^2)") },
        };
        least_varying = least_varying.min(max_l_v(&v_dependent.build().unwrap()));
    }
    let ok = worst_const <= 1e-9 && least_varying >= 1e-3;
    assert!(report(
        3,
        "L constant along rulings exactly for conoidal surfaces with q = f/w",
        ok,
        format!("max |L_v| {worst_const:.2e} (tol 1e-9); mutated scenes min of max |L_v| {least_varying:.2e} (needs >= 1e-3)")
    ));
}

#[test]
fn criterion_4_point_image() {
    let s = scene("prop2");
    let r = classify_image(&s.surface, &s.support, s.grid(), CLASSIFY_REL_TOL).unwrap();
    let gamma: Vec<Vec3> = r.gamma_samples.clone().unwrap_or_default().into_iter().map(Vec3::from).collect();
    let mut diameter = 0.0f64;
    for a in &gamma {
        for b in &gamma {
            diameter = diameter.max((a - b).norm());
        }
    }
    // the canonical frame at u = 0 is the standard basis, so the frame
    // components (c1 sin 0 - c2 cos 0, c1 cos 0 + c2 sin 0) = (0, 1) give (0, 1, 0)
    let expected = Vec3::new(0.0, 1.0, 0.0);
    let centroid_err = (Vec3::from(r.centroid) - expected).norm();
    let oracle_err = interior_points(&s)
        .into_iter()
        .map(|(u, v)| (laplacian_oracle(&s.surface, &s.support, u, v, &OracleConfig::default()).unwrap() - expected).norm())
        .fold(0.0, f64::max);
    let ok = r.verdict == Verdict::Point && diameter <= 1e-8 * r.scale && centroid_err <= 1e-6 && oracle_err <= 1e-6;
    assert!(report(
        4,
        "point image",
        ok,
        format!(
            "verdict {}, diameter/scale {:.2e} (tol 1e-8), |point - (0,1,0)| {centroid_err:.2e} (tol 1e-6), oracle {oracle_err:.2e}",
            r.verdict,
            diameter / r.scale
        )
    ));
}

fn example_measures(name: &str, f: &str) -> (f64, f64) {
    let s = scene(name);
    let f = Expression::parse(f).unwrap();
    let mut support = s.support.clone();
    support.kind = ruled_core::relnorm::SupportKind::Conoidal(f.clone());
    let mut k_max = 0.0f64;
    let mut gamma = Vec::new();
    for u in s.grid().us() {
        k_max = k_max.max(gamma_curvature(s.invariants(), &f, u).unwrap());
        gamma.push(laplace_at(&s.surface, &support, u, 0.0).unwrap().l);
    }
    (k_max, fit_line(&gamma).unwrap().residual)
}

#[test]
fn criterion_5_straight_line_examples() {
    let (k1, r1) = example_measures("example1", "c/cos(u)");
    let (k2, r2) = example_measures("example2", "c*sin(u)^3/cos(2*u)");
    let (p1, _) = example_measures("example1", "c/cos(u) + 0.1");
    let (p2, _) = example_measures("example2", "c*sin(u)^3/cos(2*u) + 0.1");
    let ok = k1.max(k2) <= 1e-8 && r1.max(r2) <= 1e-8 && p1.min(p2) > 1e-3;
    assert!(report(
        5,
        "straight image curves",
        ok,
        format!(
            "curvature {:.2e}/{:.2e} (tol 1e-8), line residual {:.2e}/{:.2e} (tol 1e-8), perturbed curvature {:.2e}/{:.2e} (needs > 1e-3)",
            k1, k2, r1, r2, p1, p2
        )
    ));
}

#[test]
fn criterion_6_image_invariants_round_trip() {
    let inv = InvariantTriple::parse("1", "1", "0", (0.0, 1.0), Bindings::new()).unwrap();
    let surface = Surface::new(inv, 1e-3).unwrap();
    let frames = image_frames(&surface, &Expression::parse("1").unwrap(), DEFAULT_IMAGE_SAMPLES).unwrap();
    let mut worst = 0.0f64;
    for r in recover_invariants(&frames).unwrap() {
        worst = worst.max((r.delta - 1.0).abs()).max((r.kappa - 1.0).abs()).max((r.lambda + 1.0).abs());
    }
    assert!(report(
        6,
        "image invariants recovered from the reconstructed image surface",
        worst <= 1e-4,
        format!("max |(delta*, kappa*, lambda*) - (1, 1, -1)| {worst:.2e} (tol 1e-4)")
    ));
}

#[test]
fn criterion_7_image_criteria_table() {
    let surf = |k: &str, d: &str, l: &str, iv: (f64, f64), b: Bindings| {
        Surface::new(InvariantTriple::parse(k, d, l, iv, b).unwrap(), 1e-3).unwrap()
    };
    let none = Bindings::new;
    let prop6f = builtin("prop6f").unwrap();
    let cases: Vec<(&str, Surface, &str)> = vec![
        ("orthoid", surf("0.7", "1 + 0.2*u", "0.1", (0.0, 1.0), none()), "(1 + 0.2*u)*(cos(u) + 0.5*sin(u))"),
        ("curvature line", surf("0.5 + 0.2*u", "1 + 0.3*u^2", "-0.4", (0.0, 1.5), none()), "(1 + 0.3*u^2)*(2 - 0.7*u)"),
        (
            "congruent",
            surf("(1 + 0.1*u^2)/(1 + 0.3*u)", "1 + 0.1*u^2", "-(1 + 0.3*u)/(1 + 0.1*u^2)", (0.0, 1.5), none()),
            "(1 + 0.1*u^2)*(1 + 0.3*u)",
        ),
        ("edlinger", prop6f.build().unwrap().surface, "(1 + 0.2*sin(u))*(c1 + c2*u)"),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, surface, f) in cases {
        let r = check_prop6(&surface, &Expression::parse(f).unwrap(), DEFAULT_IMAGE_SAMPLES).unwrap();
        let c = match name {
            "orthoid" => r.orthoid,
            "curvature line" => r.striction_curvature_line,
            "congruent" => r.congruent,
            _ => r.edlinger,
        };
        ok &= c.holds && c.closed_form <= 1e-8 && c.geometric <= 1e-4;
        parts.push(format!("{name} {:.1e}/{:.1e}", c.closed_form, c.geometric));
    }
    let s = scene("sect4c");
    let f = s.conoidal_f().unwrap().clone();
    let mut asym = 0.0f64;
    for u in s.grid().us() {
        let i = ruled_core::image::image_jets(s.invariants(), &f, u).unwrap().invariants();
        asym = asym.max((i.kappa_star - i.lambda_star).abs());
    }
    ok &= asym <= 1e-8;
    assert!(report(
        7,
        "image surface criteria (closed form/geometric, tol 1e-8/1e-4)",
        ok,
        format!("{}; closing example |kappa* - lambda*| {asym:.2e} (tol 1e-8)", parts.join(", "))
    ));
}

/// Random expressions in `u` that stay finite and smooth on [-1, 1].
fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.6) { "u".into() } else { format!("{:.3}", rng.gen_range(-2.0..2.0)) };
    }
    let a = random_expr(rng, depth - 1);
    match rng.gen_range(0..11) {
        0 => format!("({a} + {})", random_expr(rng, depth - 1)),
        1 => format!("({a} - {})", random_expr(rng, depth - 1)),
        2 => format!("({a} * {})", random_expr(rng, depth - 1)),
        3 => format!("({a} / (2 + cos({})))", random_expr(rng, depth - 1)),
        4 => format!("sin({a})"),
        5 => format!("cos({a})"),
        6 => format!("exp(sin({a}))"),
        7 => format!("sqrt(1 + ({a})^2)"),
        8 => format!("log(2 + sin({a}))"),
        9 => format!("(sin({a}))^{}", rng.gen_range(2..4)),
        _ => format!("tan(0.5*sin({a}))"),
    }
}

#[test]
fn criterion_8_jet_derivatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let b = Bindings::new();
    let (mut worst1, mut worst2) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let e = Expression::parse(&random_expr(&mut rng, 4)).unwrap();
        for _ in 0..10 {
            let u = rng.gen_range(-1.0..1.0);
            let j = eval_jet3(&e, u, &b).unwrap();
            let f = |x: f64| eval_f64(&e, x, &b).unwrap();
            let (h1, h2) = (1e-5, 1e-4);
            let d1 = (f(u + h1) - f(u - h1)) / (2.0 * h1);
            let d2 = (f(u + h2) - 2.0 * f(u) + f(u - h2)) / (h2 * h2);
            worst1 = worst1.max((j.d1 - d1).abs() / (1e-6 * (1.0 + j.d1.abs())));
            worst2 = worst2.max((j.d2 - d2).abs() / (1e-4 * (1.0 + j.d2.abs())));
        }
    }
    let ok = worst1 <= 1.0 && worst2 <= 1.0;
    assert!(report(
        8,
        "jet derivatives vs central differences (100 expressions x 10 points)",
        ok,
        format!("max error / tolerance: first {worst1:.2e}, second {worst2:.2e} (must be <= 1)")
    ));
}

#[test]
fn criterion_9_determinism() {
    let mut same = true;
    for name in builtin_names() {
        let a = cmd_verify(&scene(name), &Check::ALL).render();
        let b = cmd_verify(&scene(name), &Check::ALL).render();
        same &= a == b;
    }
    assert!(report(9, "verify reports are byte-identical across runs", same, "six builtin scenes".into()));
}
