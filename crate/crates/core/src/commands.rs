//! Batch operations behind the command-line front-end: CSV evaluation,
//! classification, verification reports and mesh export. All output is
//! deterministic for a fixed scene.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::image::{
    check_prop4, check_prop5, check_prop6, image_jets, segment_by_sign, Criterion, DEFAULT_IMAGE_SAMPLES,
};
use crate::laplace::{classify_image, gamma_curvature, laplace_at, laplace_from_jets, ClassificationReport, Verdict};
use crate::oracle::{fit_line, laplacian_oracle};
use crate::relnorm::{equiaffine_normal, relative_normal};
use crate::scene::Scene;
use crate::surface::{patch_point, Vec3};

/// Formats like C's `%.12g`.
pub fn fmt_g(x: f64) -> String {
    const P: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..P).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mant), exp.abs())
    } else {
        trim(&format!("{:.*}", (P - 1 - exp) as usize, x))
    }
}

fn push_row(out: &mut String, cells: &[f64]) {
    let row: Vec<String> = cells.iter().map(|&c| fmt_g(c)).collect();
    out.push_str(&row.join(","));
    out.push('\n');
}

pub const EVAL_HEADER: &str = "u,v,x,y,z,xi_x,xi_y,xi_z,xi_e,xi_n,xi_zf,K,q,q_aff,\
ybar_x,ybar_y,ybar_z,ybar_e,ybar_n,ybar_zf,yaff_x,yaff_y,yaff_z,yaff_e,yaff_n,yaff_zf,L1,L2,L_x,L_y,L_z";

/// Evaluation points: the scene's explicit points, or its grid.
pub fn eval_points(scene: &Scene) -> Vec<(f64, f64)> {
    match &scene.config.points {
        Some(p) => p.iter().map(|[u, v]| (*u, *v)).collect(),
        None => {
            let vs = scene.grid().vs();
            scene.grid().us().into_iter().flat_map(|u| vs.iter().map(move |&v| (u, v))).collect()
        }
    }
}

/// One CSV row per evaluation point with the surface, both normalizations
/// and the Laplace normal.
pub fn cmd_eval(scene: &Scene) -> Result<String> {
    let inv = scene.invariants();
    let mut out = String::from(EVAL_HEADER);
    out.push('\n');
    for (u, v) in eval_points(scene) {
        let frame = scene.surface.frame(u)?;
        let pt = patch_point(inv, &frame, v)?;
        let rel = relative_normal(&pt, &frame, inv, &scene.support)?;
        let (yaff, q_aff) = equiaffine_normal(&pt, &frame, inv)?;
        let l = laplace_at(&scene.surface, &scene.support, u, v)?;
        let xi_f = frame.to_frame(&pt.xi);
        let yaff_f = frame.to_frame(&yaff);
        let mut cells = vec![u, v, pt.x.x, pt.x.y, pt.x.z, pt.xi.x, pt.xi.y, pt.xi.z];
        cells.extend(xi_f);
        cells.extend([pt.k, rel.q.value, q_aff, rel.y.x, rel.y.y, rel.y.z]);
        cells.extend(rel.y_frame);
        cells.extend([yaff.x, yaff.y, yaff.z]);
        cells.extend(yaff_f);
        cells.extend([l.l1, l.l2, l.l.x, l.l.y, l.l.z]);
        push_row(&mut out, &cells);
    }
    Ok(out)
}

/// Seeded interior points for the oracle, clear of the `u` boundary.
pub fn oracle_points(scene: &Scene, count: usize) -> Vec<(f64, f64)> {
    let g = scene.grid();
    let margin = 0.05 * (g.u_max - g.u_min);
    let mut rng = ChaCha8Rng::seed_from_u64(scene.config.seed);
    (0..count)
        .map(|_| (rng.gen_range(g.u_min + margin..=g.u_max - margin), rng.gen_range(g.v_min..=g.v_max)))
        .collect()
}

/// Largest oracle deviations over a point set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleStats {
    pub points: usize,
    /// `max ‖oracle - L‖ / (1 + ‖L‖)`.
    pub max_deviation: f64,
    /// `max |⟨oracle, z⟩|`.
    pub max_z: f64,
}

pub fn oracle_stats(scene: &Scene, points: &[(f64, f64)]) -> Result<OracleStats> {
    let cfg = scene.config.tolerances.oracle_config;
    let mut stats = OracleStats { points: points.len(), max_deviation: 0.0, max_z: 0.0 };
    for &(u, v) in points {
        let num = laplacian_oracle(&scene.surface, &scene.support, u, v, &cfg)?;
        let exact = laplace_at(&scene.surface, &scene.support, u, v)?.l;
        let z = scene.surface.frame(u)?.z;
        stats.max_deviation = stats.max_deviation.max((num - exact).norm() / (1.0 + exact.norm()));
        stats.max_z = stats.max_z.max(num.dot(&z).abs());
    }
    Ok(stats)
}

const VERDICT_CLAIMS: [Verdict; 4] = [Verdict::Point, Verdict::StraightLine, Verdict::PlanarCurve, Verdict::Surface];

fn claimed_verdict(scene: &Scene) -> Option<Verdict> {
    VERDICT_CLAIMS.into_iter().find(|v| scene.config.has_claim(v.as_str()))
}

/// Image invariants summarised over one `δ*` sign segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentSummary {
    pub u_start: f64,
    pub u_end: f64,
    pub positive: bool,
    pub delta_star: (f64, f64),
    pub lambda_star: (f64, f64),
}

pub fn image_segments(scene: &Scene) -> Result<Vec<SegmentSummary>> {
    let f = scene
        .conoidal_f()
        .ok_or_else(|| Error::InvalidInput("image invariants need a support function of the form f/w".into()))?;
    let us = scene.grid().us();
    let inv: Vec<_> =
        us.iter().map(|&u| image_jets(scene.invariants(), f, u).map(|j| j.invariants())).collect::<Result<_>>()?;
    let ds: Vec<f64> = inv.iter().map(|i| i.delta_star).collect();
    let range = |xs: &mut dyn Iterator<Item = f64>| xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    Ok(segment_by_sign(&ds)
        .into_iter()
        .map(|s| SegmentSummary {
            u_start: us[s.start],
            u_end: us[s.end - 1],
            positive: s.positive,
            delta_star: range(&mut inv[s.start..s.end].iter().map(|i| i.delta_star)),
            lambda_star: range(&mut inv[s.start..s.end].iter().map(|i| i.lambda_star)),
        })
        .collect())
}

/// Number of seeded oracle points used by `classify` and `verify`.
pub const ORACLE_POINTS: usize = 25;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyOutcome {
    pub report: ClassificationReport,
    pub oracle: OracleStats,
    pub passed: bool,
    pub text: String,
}

pub fn cmd_classify(scene: &Scene) -> Result<ClassifyOutcome> {
    let tol = &scene.config.tolerances;
    let report = classify_image(&scene.surface, &scene.support, scene.grid(), tol.classify)?;
    let oracle = oracle_stats(scene, &oracle_points(scene, ORACLE_POINTS))?;
    let mut text = String::new();
    let _ = writeln!(text, "scene: {}", scene.config.name);
    let _ = writeln!(text, "verdict: {}", report.verdict);
    for e in &report.evidence {
        let _ = writeln!(text, "  {:<21} {:>12.3e}  (threshold {:.1e})", e.test, e.value, e.threshold);
    }
    let c = report.centroid;
    let _ = writeln!(text, "  centroid              ({}, {}, {})", fmt_g(c[0]), fmt_g(c[1]), fmt_g(c[2]));
    if let Some(d) = report.direction {
        let _ = writeln!(text, "  direction             ({}, {}, {})", fmt_g(d[0]), fmt_g(d[1]), fmt_g(d[2]));
    }
    let oracle_ok = oracle.max_deviation <= tol.oracle;
    let _ = writeln!(
        text,
        "oracle: {} points, max deviation {:.3e} (tol {:.1e}), max |<L,z>| {:.3e}",
        oracle.points, oracle.max_deviation, tol.oracle, oracle.max_z
    );
    if scene.conoidal_f().is_some() && scene.kappa_nonvanishing(crate::image::CONOIDAL_TOL)? {
        for s in image_segments(scene)? {
            let _ = writeln!(
                text,
                "image segment u in [{}, {}] delta* {}: delta* in [{:.6e}, {:.6e}], lambda* in [{:.6e}, {:.6e}]",
                fmt_g(s.u_start),
                fmt_g(s.u_end),
                if s.positive { "> 0" } else { "< 0" },
                s.delta_star.0,
                s.delta_star.1,
                s.lambda_star.0,
                s.lambda_star.1
            );
        }
    }
    let claim_ok = match claimed_verdict(scene) {
        Some(v) => {
            let _ = writeln!(text, "claimed: {v}");
            v == report.verdict
        }
        None => true,
    };
    let passed = oracle_ok && claim_ok;
    let _ = writeln!(text, "result: {}", if passed { "pass" } else { "fail" });
    Ok(ClassifyOutcome { report, oracle, passed, text })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Prop1,
    Prop2,
    Prop3,
    Prop4,
    Prop5,
    Prop6,
    Oracle,
    Examples,
}

impl Check {
    pub const ALL: [Check; 8] =
        [Check::Prop1, Check::Prop2, Check::Prop3, Check::Prop4, Check::Prop5, Check::Prop6, Check::Oracle, Check::Examples];

    pub fn name(self) -> &'static str {
        match self {
            Check::Prop1 => "prop1",
            Check::Prop2 => "prop2",
            Check::Prop3 => "prop3",
            Check::Prop4 => "prop4",
            Check::Prop5 => "prop5",
            Check::Prop6 => "prop6",
            Check::Oracle => "oracle",
            Check::Examples => "examples",
        }
    }

    /// Parses a comma-separated set; `all` selects every check.
    pub fn parse_set(s: &str) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            if item == "all" {
                out.extend(Check::ALL);
                continue;
            }
            let c = Check::ALL
                .into_iter()
                .find(|c| c.name() == item)
                .ok_or_else(|| Error::InvalidInput(format!("unknown check `{item}`")))?;
            out.push(c);
        }
        if out.is_empty() {
            return Err(Error::InvalidInput("empty check set".into()));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::NotApplicable => "n/a",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub check: Check,
    pub status: Status,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub scene: String,
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status != Status::Fail)
    }

    pub fn outcome(&self, check: Check) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.check == check)
    }

    pub fn render(&self) -> String {
        let mut s = format!("scene: {}\n", self.scene);
        for o in &self.outcomes {
            let _ = writeln!(s, "[{:>4}] {}", o.status.label(), o.check.name());
            for d in &o.details {
                let _ = writeln!(s, "       {d}");
            }
        }
        let _ = writeln!(s, "overall: {}", if self.passed() { "pass" } else { "FAIL" });
        s
    }
}

struct Outcome {
    status: Status,
    details: Vec<String>,
}

impl Outcome {
    fn na(reason: &str) -> Self {
        Self { status: Status::NotApplicable, details: vec![reason.to_string()] }
    }

    fn judged(ok: bool, details: Vec<String>) -> Self {
        Self { status: if ok { Status::Pass } else { Status::Fail }, details }
    }
}

/// Runs the selected checks. Evaluation failures make the check fail with
/// the error as diagnostic; checks whose hypotheses do not hold for the
/// scene are reported as not applicable.
pub fn cmd_verify(scene: &Scene, which: &[Check]) -> VerifyReport {
    let mut classification: Option<Result<ClassificationReport>> = None;
    let mut outcomes = Vec::new();
    for &check in which {
        let run = match check {
            Check::Prop1 => verify_prop1(scene),
            Check::Prop2 | Check::Prop3 => {
                let c = classification.get_or_insert_with(|| {
                    classify_image(&scene.surface, &scene.support, scene.grid(), scene.config.tolerances.classify)
                });
                match c {
                    Ok(r) if check == Check::Prop2 => verify_prop2(scene, r),
                    Ok(r) => verify_prop3(scene, r),
                    Err(e) => Err(e.clone()),
                }
            }
            Check::Prop4 => verify_prop4(scene),
            Check::Prop5 => verify_prop5(scene),
            Check::Prop6 => verify_prop6(scene),
            Check::Oracle => verify_oracle(scene),
            Check::Examples => verify_examples(scene),
        };
        let o = run.unwrap_or_else(|e| Outcome { status: Status::Fail, details: vec![format!("error: {e}")] });
        outcomes.push(CheckOutcome { check, status: o.status, details: o.details });
    }
    VerifyReport { scene: scene.config.name.clone(), outcomes }
}

fn verify_prop1(scene: &Scene) -> Result<Outcome> {
    let tol = &scene.config.tolerances;
    let inv = scene.invariants();
    let vs = scene.grid().vs();
    let mut max_lv = 0.0f64;
    let mut max_qw_v = 0.0f64;
    let kappa_zero = scene.kappa_vanishes(1e-12)?;
    for u in scene.grid().us() {
        let frame = scene.surface.frame(u)?;
        let j = inv.jets(u)?;
        for &v in &vs {
            let q = scene.support.eval(u, v, j.delta)?;
            let w = crate::relnorm::w_jet(v, j.delta);
            let qw = q * w;
            max_qw_v = max_qw_v.max(qw.dv.abs() / qw.value.abs());
            max_lv = max_lv.max(laplace_from_jets(u, v, &frame, &j, q).l_v.norm());
        }
    }
    let predicted = kappa_zero && max_qw_v <= 1e-12;
    let ok = if predicted { max_lv <= tol.ruling_constant } else { max_lv >= tol.ruling_varying };
    Ok(Outcome::judged(
        ok,
        vec![
            format!("kappa = 0: {kappa_zero}; max |d(qw)/dv|/|qw| = {max_qw_v:.3e}"),
            format!(
                "L constant along rulings predicted: {predicted}; max |L_v| = {max_lv:.3e} (needs {} {:.1e})",
                if predicted { "<=" } else { ">=" },
                if predicted { tol.ruling_constant } else { tol.ruling_varying }
            ),
        ],
    ))
}

/// Diameter bound for a point image, relative to `max ‖L‖`.
pub const POINT_DIAMETER_TOL: f64 = 1e-8;

/// Distance bound between the image point and the expected one.
pub const POINT_POSITION_TOL: f64 = 1e-6;

fn gamma_diameter(r: &ClassificationReport) -> f64 {
    let pts: Vec<Vec3> = r.gamma_samples.iter().flatten().map(|p| Vec3::from(*p)).collect();
    let mut d = 0.0f64;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

fn verify_prop2(scene: &Scene, r: &ClassificationReport) -> Result<Outcome> {
    let claimed = scene.config.has_claim("point");
    if !claimed && r.verdict != Verdict::Point {
        return Ok(Outcome::na(&format!("image is a {}", r.verdict)));
    }
    let mut ok = r.verdict == Verdict::Point;
    let mut details = vec![format!("verdict: {}", r.verdict)];
    if ok {
        let d = gamma_diameter(r) / r.scale;
        ok &= d <= POINT_DIAMETER_TOL;
        details.push(format!("diameter/scale = {d:.3e} (tol {POINT_DIAMETER_TOL:.0e})"));
        let c = Vec3::from(r.centroid);
        details.push(format!("point = ({}, {}, {})", fmt_g(c.x), fmt_g(c.y), fmt_g(c.z)));
        if let Some(p) = scene.config.expect_point {
            let dist = (c - Vec3::from(p)).norm();
            ok &= dist <= POINT_POSITION_TOL;
            details.push(format!("distance to expected point = {dist:.3e} (tol {POINT_POSITION_TOL:.0e})"));
        }
    }
    Ok(Outcome::judged(ok, details))
}

/// Relative agreement required between the closed-form curvature of the
/// image curve and its finite-difference estimate.
pub const CURVATURE_CROSS_TOL: f64 = 1e-5;

fn verify_prop3(scene: &Scene, r: &ClassificationReport) -> Result<Outcome> {
    if r.verdict == Verdict::Surface {
        return Ok(Outcome::na("image is a surface"));
    }
    let tol = scene.config.tolerances.classify;
    let mut details = vec![format!("verdict: {}", r.verdict)];
    let mut ok = true;
    if let Some(p) = r.evidence("plane-residual") {
        ok &= p <= tol;
        details.push(format!("plane residual = {p:.3e} (tol {tol:.0e})"));
    }
    if let Some(v) = claimed_verdict(scene) {
        ok &= v == r.verdict;
        details.push(format!("claimed: {v}"));
    }
    if let (Some(f), true, Verdict::PlanarCurve | Verdict::StraightLine) =
        (scene.conoidal_f(), scene.kappa_vanishes(1e-12)?, r.verdict)
    {
        let worst = curvature_cross_check(scene, f)?;
        ok &= worst <= CURVATURE_CROSS_TOL;
        details.push(format!("curvature vs finite differences: max deviation {worst:.3e} (tol {CURVATURE_CROSS_TOL:.0e})"));
    }
    Ok(Outcome::judged(ok, details))
}

/// Compares the closed-form curvature of `Γ(u) = L(u, 0)` with
/// `‖Γ' × Γ''‖ / ‖Γ'‖³` from fourth-order differences, relative to
/// `1 + k`.
pub fn curvature_cross_check(scene: &Scene, f: &crate::expr::Expression) -> Result<f64> {
    let h = 1e-3;
    let g = scene.grid();
    let gamma = |u: f64| laplace_at(&scene.surface, &scene.support, u, 0.0).map(|s| s.l);
    let mut worst = 0.0f64;
    for u in g.us() {
        if u - 2.0 * h < g.u_min || u + 2.0 * h > g.u_max {
            continue;
        }
        let p = [gamma(u - 2.0 * h)?, gamma(u - h)?, gamma(u)?, gamma(u + h)?, gamma(u + 2.0 * h)?];
        let d1 = (p[0] - p[1] * 8.0 + p[3] * 8.0 - p[4]) / (12.0 * h);
        let d2 = (-p[0] + p[1] * 16.0 - p[2] * 30.0 + p[3] * 16.0 - p[4]) / (12.0 * h * h);
        let fd = d1.cross(&d2).norm() / d1.norm().powi(3);
        let k = gamma_curvature(scene.invariants(), f, u)?;
        worst = worst.max((fd - k).abs() / (1.0 + k));
    }
    Ok(worst)
}

fn image_hypotheses(scene: &Scene) -> Result<Option<&crate::expr::Expression>> {
    match scene.conoidal_f() {
        Some(f) if scene.kappa_nonvanishing(crate::image::CONOIDAL_TOL)? => Ok(Some(f)),
        Some(_) => Ok(None),
        None => Ok(None),
    }
}

const IMAGE_NA: &str = "needs kappa != 0 on the domain and a support function f/w";

fn criterion_line(name: &str, c: &Criterion) -> String {
    format!("{name}: {} (closed form {:.3e}, geometric {:.3e})", c.holds, c.closed_form, c.geometric)
}

fn verify_prop4(scene: &Scene) -> Result<Outcome> {
    let Some(f) = image_hypotheses(scene)? else { return Ok(Outcome::na(IMAGE_NA)) };
    let r = check_prop4(&scene.surface, f, &scene.grid().us())?;
    let mut ok = true;
    let mut details = vec![
        criterion_line("tangents parallel", &r.parallel),
        format!("  f = c delta: {}; kappa lambda + 1 = 0: {}", r.f_proportional_to_delta, r.striction_curvature_line),
        criterion_line("tangents orthogonal", &r.orthogonal),
    ];
    for (claim, holds) in [("striction-parallel", r.parallel.holds), ("striction-orthogonal", r.orthogonal.holds)] {
        if scene.config.has_claim(claim) {
            ok &= holds;
            details.push(format!("claimed: {claim}"));
        }
    }
    Ok(Outcome::judged(ok, details))
}

fn verify_prop5(scene: &Scene) -> Result<Outcome> {
    let Some(f) = image_hypotheses(scene)? else { return Ok(Outcome::na(IMAGE_NA)) };
    let r = check_prop5(&scene.surface, f, &scene.grid().us())?;
    let mut ok = true;
    let mut details = vec![format!(
        "directrix = striction line: {} (separation {:.3e}, (f/delta)' {:.3e})",
        r.coincide, r.max_separation, r.max_g_prime
    )];
    if scene.config.has_claim("directrix-striction") {
        ok &= r.coincide;
        details.push("claimed: directrix-striction".into());
    }
    Ok(Outcome::judged(ok, details))
}

fn verify_prop6(scene: &Scene) -> Result<Outcome> {
    let Some(f) = image_hypotheses(scene)? else { return Ok(Outcome::na(IMAGE_NA)) };
    let r = check_prop6(&scene.surface, f, DEFAULT_IMAGE_SAMPLES)?;
    let table = [
        ("normals-parallel", &r.normals_parallel),
        ("orthoid", &r.orthoid),
        ("striction-asymptotic", &r.striction_asymptotic),
        ("striction-curvature-line", &r.striction_curvature_line),
        ("congruent", &r.congruent),
        ("edlinger", &r.edlinger),
    ];
    let mut ok = true;
    let mut details = vec![format!("delta* sign segments: {}", r.segments)];
    for (name, c) in table {
        details.push(criterion_line(name, c));
        if scene.config.has_claim(name) {
            ok &= c.holds;
            details.push(format!("  claimed: {name}"));
        }
    }
    Ok(Outcome::judged(ok, details))
}

fn verify_oracle(scene: &Scene) -> Result<Outcome> {
    let tol = scene.config.tolerances.oracle;
    let s = oracle_stats(scene, &oracle_points(scene, ORACLE_POINTS))?;
    Ok(Outcome::judged(
        s.max_deviation <= tol,
        vec![
            format!("{} seeded points, max |oracle - L|/(1+|L|) = {:.3e} (tol {tol:.0e})", s.points, s.max_deviation),
            format!("max |<oracle, z>| = {:.3e}", s.max_z),
        ],
    ))
}

/// Line residual bound for straight image curves.
pub const LINE_RESIDUAL_TOL: f64 = 1e-8;

/// Bound on `|κ* - λ*|` for a striction line that is an asymptotic line.
pub const ASYMPTOTIC_TOL: f64 = 1e-8;

fn verify_examples(scene: &Scene) -> Result<Outcome> {
    let tol = scene.config.tolerances.curvature;
    let us = scene.grid().us();
    let mut details = Vec::new();
    let mut ok = true;
    let mut applicable = false;
    if let (true, Some(f), true) = (scene.config.has_claim("straight-line"), scene.conoidal_f(), scene.kappa_vanishes(1e-12)?) {
        applicable = true;
        let mut k_max = 0.0f64;
        let mut gamma = Vec::with_capacity(us.len());
        for &u in &us {
            k_max = k_max.max(gamma_curvature(scene.invariants(), f, u)?);
            gamma.push(laplace_at(&scene.surface, &scene.support, u, 0.0)?.l);
        }
        let line = fit_line(&gamma)?;
        ok &= k_max <= tol && line.residual <= LINE_RESIDUAL_TOL;
        details.push(format!("max image curve curvature = {k_max:.3e} (tol {tol:.0e})"));
        details.push(format!("line residual = {:.3e} (tol {LINE_RESIDUAL_TOL:.0e})", line.residual));
    }
    if let (true, Some(f)) = (scene.config.has_claim("striction-asymptotic"), image_hypotheses(scene)?) {
        applicable = true;
        let mut worst = 0.0f64;
        for &u in &us {
            let i = image_jets(scene.invariants(), f, u)?.invariants();
            worst = worst.max((i.kappa_star - i.lambda_star).abs());
        }
        ok &= worst <= ASYMPTOTIC_TOL;
        details.push(format!("max |kappa* - lambda*| = {worst:.3e} (tol {ASYMPTOTIC_TOL:.0e})"));
    }
    if !applicable {
        return Ok(Outcome::na("scene makes no straight-line or striction-asymptotic claim"));
    }
    Ok(Outcome::judged(ok, details))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshTarget {
    Surface,
    ImageSurface,
    Gamma,
    /// Image curve samples as CSV `u,x,y,z,k`.
    GammaCsv,
}

impl MeshTarget {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "surface" => Ok(Self::Surface),
            "image-surface" => Ok(Self::ImageSurface),
            "gamma" => Ok(Self::Gamma),
            "gamma-csv" => Ok(Self::GammaCsv),
            _ => Err(Error::InvalidInput(format!(
                "unknown target `{s}` (expected surface, image-surface, gamma or gamma-csv)"
            ))),
        }
    }
}

fn vertex_line(out: &mut String, p: &Vec3) {
    let _ = writeln!(out, "v {} {} {}", fmt_g(p.x), fmt_g(p.y), fmt_g(p.z));
}

fn grid_mesh(scene: &Scene, point: impl Fn(f64, f64) -> Result<Vec3>) -> Result<String> {
    let (us, vs) = (scene.grid().us(), scene.grid().vs());
    let mut out = String::new();
    for &u in &us {
        for &v in &vs {
            vertex_line(&mut out, &point(u, v)?);
        }
    }
    let nv = vs.len();
    let idx = |i: usize, j: usize| i * nv + j + 1;
    for i in 0..us.len() - 1 {
        for j in 0..nv - 1 {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            let _ = writeln!(out, "f {a} {b} {c}");
            let _ = writeln!(out, "f {a} {c} {d}");
        }
    }
    Ok(out)
}

pub fn cmd_mesh(scene: &Scene, target: MeshTarget) -> Result<String> {
    match target {
        MeshTarget::Surface => grid_mesh(scene, |u, v| scene.surface.point(u, v).map(|p| p.x)),
        MeshTarget::ImageSurface => {
            let f = scene
                .conoidal_f()
                .ok_or_else(|| Error::InvalidInput("image surface needs a support function f/w".into()))?;
            for u in scene.grid().us() {
                image_jets(scene.invariants(), f, u)?;
            }
            grid_mesh(scene, |u, v| laplace_at(&scene.surface, &scene.support, u, v).map(|s| s.l))
        }
        MeshTarget::Gamma => {
            let us = scene.grid().us();
            let mut out = String::new();
            for &u in &us {
                vertex_line(&mut out, &laplace_at(&scene.surface, &scene.support, u, 0.0)?.l);
            }
            for i in 1..us.len() {
                let _ = writeln!(out, "l {} {}", i, i + 1);
            }
            Ok(out)
        }
        MeshTarget::GammaCsv => {
            let f = scene
                .conoidal_f()
                .ok_or_else(|| Error::InvalidInput("image curve curvature needs a support function f/w".into()))?;
            let mut out = String::from("u,x,y,z,k\n");
            for u in scene.grid().us() {
                let p = laplace_at(&scene.surface, &scene.support, u, 0.0)?.l;
                let k = gamma_curvature(scene.invariants(), f, u)?;
                push_row(&mut out, &[u, p.x, p.y, p.z, k]);
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::builtin;

    fn scene(name: &str) -> Scene {
        builtin(name).unwrap().build().unwrap()
    }

    #[test]
    fn percent_g_formatting() {
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(-0.25), "-0.25");
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_g(123456789012.0), "123456789012");
        assert_eq!(fmt_g(1234567890123.0), "1.23456789012e+12");
        assert_eq!(fmt_g(1e-5), "1e-05");
        assert_eq!(fmt_g(0.0001), "0.0001");
        assert_eq!(fmt_g(-2.5e-7), "-2.5e-07");
        assert_eq!(fmt_g(1e100), "1e+100");
        assert_eq!(fmt_g(0.1 + 0.2), "0.3");
    }

    #[test]
    fn eval_helicoid_columns() {
        let mut cfg = builtin("helicoid").unwrap();
        cfg.points = Some(vec![[0.0, 1.0], [0.5, 0.0]]);
        let csv = cmd_eval(&cfg.build().unwrap()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        let header: Vec<&str> = lines[0].split(',').collect();
        let col = |row: usize, name: &str| -> f64 {
            let i = header.iter().position(|h| *h == name).unwrap();
            lines[row].split(',').nth(i).unwrap().parse().unwrap()
        };
        assert_eq!(col(1, "K"), -0.25);
        assert_eq!((col(2, "xi_e"), col(2, "xi_n"), col(2, "xi_zf")), (0.0, 1.0, 0.0));
        for row in 1..=2 {
            assert_eq!(col(row, "ybar_zf"), 0.0);
        }
    }

    #[test]
    fn mesh_counts() {
        let mut cfg = builtin("helicoid").unwrap();
        cfg.domain.nu = 10;
        cfg.domain.nv = 10;
        let mesh = cmd_mesh(&cfg.build().unwrap(), MeshTarget::Surface).unwrap();
        assert_eq!(mesh.lines().filter(|l| l.starts_with("v ")).count(), 100);
        assert_eq!(mesh.lines().filter(|l| l.starts_with("f ")).count(), 162);
    }

    #[test]
    fn image_mesh_requires_non_conoidal_surface() {
        assert!(matches!(cmd_mesh(&scene("helicoid"), MeshTarget::ImageSurface), Err(Error::Conoidal { .. })));
        assert!(cmd_mesh(&scene("sect4c"), MeshTarget::ImageSurface).is_ok());
    }

    #[test]
    fn check_sets() {
        assert_eq!(Check::parse_set("oracle,prop1").unwrap(), vec![Check::Prop1, Check::Oracle]);
        assert_eq!(Check::parse_set("all").unwrap().len(), 8);
        assert!(Check::parse_set("prop9").is_err());
    }

    #[test]
    fn builtin_scenes_verify() {
        for name in crate::scene::builtin_names() {
            let r = cmd_verify(&scene(name), &Check::ALL);
            assert!(r.passed(), "{}", r.render());
        }
    }

    #[test]
    fn perturbed_example_fails() {
        let mut cfg = builtin("example1").unwrap();
        cfg.support = crate::scene::SupportSource::Conoidal { f: "c/cos(u) + 0.1".into() };
        let r = cmd_verify(&cfg.build().unwrap(), &[Check::Examples]);
        assert!(!r.passed());
    }

    #[test]
    fn classify_builtins() {
        let expected = [
            ("helicoid", Verdict::PlanarCurve),
            ("example1", Verdict::StraightLine),
            ("example2", Verdict::StraightLine),
            ("prop2", Verdict::Point),
            ("prop6f", Verdict::Surface),
        ];
        for (name, v) in expected {
            let o = cmd_classify(&scene(name)).unwrap();
            assert_eq!(o.report.verdict, v, "{name}");
            assert!(o.passed, "{}", o.text);
        }
    }
}
