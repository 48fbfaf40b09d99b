//! The Laplace normal image `Φ*` of a non-conoidal surface with support
//! function `q = f(u) / w`.
//!
//! `Φ*` is again ruled, with rulings parallel to those of `Φ`, so it shares
//! the Kruppa frame and the conical curvature. With `g = f / δ`:
//!
//! ```text
//! r* = g n,   s* = g n - g' e,
//! δ* = κ g,   κ* = κ,   λ* = -(g'' + g) / (κ g)
//! ```
//!
//! Constants in `f` are resolved against the invariants' bindings.

use crate::error::{Error, ExprContext, Result};
use crate::expr::{eval_jet3, Expression, Jet3};
use crate::laplace::laplace_from_jets;
use crate::relnorm::SupportField;
use crate::surface::{recover_invariants, FramePoint, InvariantJets, InvariantTriple, Surface, Vec3};

/// `|κ|` below this is treated as a conoidal ruling.
pub const CONOIDAL_TOL: f64 = 1e-12;

/// Tolerance for closed-form residuals.
pub const CLOSED_FORM_TOL: f64 = 1e-8;

/// Tolerance for invariants recovered from reconstructed frames.
pub const GEOMETRIC_TOL: f64 = 1e-4;

/// Tolerance for angles between normals.
pub const NORMAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageInvariants {
    pub delta_star: f64,
    pub kappa_star: f64,
    pub lambda_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageFramePoint {
    pub u: f64,
    /// Directrix point `g n`.
    pub r_star: Vec3,
    /// Striction point `g n - g' e`.
    pub s_star: Vec3,
    pub ruling: Vec3,
}

/// Jets along the ruling at `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageJets {
    pub inv: InvariantJets,
    pub f: Jet3,
    /// `g = f / δ`.
    pub g: Jet3,
}

pub fn image_jets(inv: &InvariantTriple, f: &Expression, u: f64) -> Result<ImageJets> {
    let j = inv.jets(u)?;
    if j.kappa.value.abs() < CONOIDAL_TOL {
        return Err(Error::Conoidal { u });
    }
    let fj = eval_jet3(f, u, &inv.constants).field("f")?;
    if fj.value.abs() < crate::relnorm::ZERO_SUPPORT_TOL {
        return Err(Error::ZeroSupport { u, v: 0.0 });
    }
    Ok(ImageJets { inv: j, f: fj, g: fj / j.delta })
}

impl ImageJets {
    pub fn invariants(&self) -> ImageInvariants {
        let (k, g) = (self.inv.kappa.value, self.g);
        ImageInvariants { delta_star: k * g.value, kappa_star: k, lambda_star: -(g.d2 + g.value) / (k * g.value) }
    }

    /// `s*'` in `(e, n, z)`, differentiated through the frame equations.
    pub fn striction_tangent_frame(&self) -> [f64; 3] {
        let (a, b) = (-self.g.derivative(), self.g);
        let k = self.inv.kappa.value;
        [a.d1 - b.value, a.value + b.d1, k * b.value]
    }
}

pub fn image_surface(inv: &InvariantTriple, f: &Expression, frame: &FramePoint) -> Result<(ImageFramePoint, ImageInvariants)> {
    let j = image_jets(inv, f, frame.u)?;
    let g = j.g;
    let point = ImageFramePoint {
        u: frame.u,
        r_star: frame.n * g.value,
        s_star: frame.n * g.value - frame.e * g.d1,
        ruling: frame.e,
    };
    Ok((point, j.invariants()))
}

/// A maximal run of samples on which `δ*` keeps its sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    /// One past the last sample.
    pub end: usize,
    pub positive: bool,
}

/// Splits samples at sign changes of `δ*`.
pub fn segment_by_sign(delta_star: &[f64]) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::new();
    for (i, d) in delta_star.iter().enumerate() {
        let positive = *d > 0.0;
        match out.last_mut() {
            Some(s) if s.positive == positive => s.end = i + 1,
            _ => out.push(Segment { start: i, end: i + 1, positive }),
        }
    }
    out
}

/// Outcome of one criterion decided by two independent routes.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Criterion {
    pub holds: bool,
    /// Largest closed-form residual over the samples.
    pub closed_form: f64,
    /// Largest residual of the geometric test over the samples.
    pub geometric: f64,
}

/// Values within this factor above their tolerance are too close to call and
/// do not count as a disagreement.
const AMBIGUOUS_BAND: f64 = 1e3;

fn reconcile(name: &str, closed: f64, closed_tol: f64, geometric: f64, geometric_tol: f64) -> Result<Criterion> {
    let a = closed <= closed_tol;
    let b = geometric <= geometric_tol;
    let ambiguous = (closed > closed_tol && closed <= AMBIGUOUS_BAND * closed_tol)
        || (geometric > geometric_tol && geometric <= AMBIGUOUS_BAND * geometric_tol);
    if a != b && !ambiguous {
        return Err(Error::Mismatch(format!(
            "{name}: closed-form residual {closed:e} (tol {closed_tol:e}) vs geometric residual {geometric:e} (tol {geometric_tol:e})"
        )));
    }
    Ok(Criterion { holds: a, closed_form: closed, geometric })
}

fn rel(x: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        x.abs()
    } else {
        x.abs() / scale
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Prop4Report {
    /// Tangents of `Σ` and `Γ*` parallel at every sample.
    pub parallel: Criterion,
    /// `f = cδ` part of the parallelism condition.
    pub f_proportional_to_delta: bool,
    /// `κλ + 1 = 0` part of the parallelism condition.
    pub striction_curvature_line: bool,
    pub orthogonal: Criterion,
    /// Per-sample `(u, parallel, orthogonal)` decisions of the geometric test.
    pub samples: Vec<(f64, bool, bool)>,
}

/// Compares the tangents `s' = δ(λe + z)` of the striction line of `Φ` and
/// `r*' = -g e + g' n + κ g z` of the directrix of `Φ*`.
pub fn check_prop4(surface: &Surface, f: &Expression, us: &[f64]) -> Result<Prop4Report> {
    let inv = surface.invariants();
    let mut closed_par = 0.0f64;
    let mut closed_g = 0.0f64;
    let mut closed_kl = 0.0f64;
    let mut geo_par = 0.0f64;
    let mut closed_orth = 0.0f64;
    let mut geo_orth = 0.0f64;
    let mut samples = Vec::with_capacity(us.len());
    for &u in us {
        let frame = surface.frame(u)?;
        let j = image_jets(inv, f, u)?;
        let (k, d, l, g) = (j.inv.kappa.value, j.inv.delta.value, j.inv.lambda.value, j.g);
        let ds = frame.to_ambient(d * l, 0.0, d);
        let dr = frame.to_ambient(-g.value, g.d1, k * g.value);
        let (ns, nr) = (ds.norm(), dr.norm());
        if ns == 0.0 || nr == 0.0 {
            return Err(Error::Degenerate(format!("zero tangent at u = {u}")));
        }
        let par = ds.cross(&dr).norm() / (ns * nr);
        let orth = ds.dot(&dr).abs() / (ns * nr);
        geo_par = geo_par.max(par);
        geo_orth = geo_orth.max(orth);
        let rg = rel(g.d1, g.value.abs() + g.d1.abs());
        let rkl = rel(k * l + 1.0, (k * l).abs() + 1.0);
        closed_g = closed_g.max(rg);
        closed_kl = closed_kl.max(rkl);
        closed_par = closed_par.max(rg.max(rkl));
        closed_orth = closed_orth.max(rel(k - l, k.abs() + l.abs()));
        samples.push((u, par <= CLOSED_FORM_TOL, orth <= CLOSED_FORM_TOL));
    }
    Ok(Prop4Report {
        parallel: reconcile("tangents parallel", closed_par, CLOSED_FORM_TOL, geo_par, CLOSED_FORM_TOL)?,
        f_proportional_to_delta: closed_g <= CLOSED_FORM_TOL,
        striction_curvature_line: closed_kl <= CLOSED_FORM_TOL,
        orthogonal: reconcile("tangents orthogonal", closed_orth, CLOSED_FORM_TOL, geo_orth, CLOSED_FORM_TOL)?,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Prop5Report {
    /// `max |s* - r*|` relative to `max |r*|`.
    pub max_separation: f64,
    /// `max |g'|` relative to `max |g|`.
    pub max_g_prime: f64,
    pub coincide: bool,
}

/// Tolerance for the coincidence of `Γ*` and `Σ*`.
pub const COINCIDENCE_TOL: f64 = 1e-9;

/// `Γ*` coincides with `Σ*` exactly when `(f/δ)' ≡ 0`.
pub fn check_prop5(surface: &Surface, f: &Expression, us: &[f64]) -> Result<Prop5Report> {
    let inv = surface.invariants();
    let (mut sep, mut r_max, mut gp, mut g_max) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &u in us {
        let frame = surface.frame(u)?;
        let (p, _) = image_surface(inv, f, &frame)?;
        let g = image_jets(inv, f, u)?.g;
        sep = sep.max((p.s_star - p.r_star).norm());
        r_max = r_max.max(p.r_star.norm());
        gp = gp.max(g.d1.abs());
        g_max = g_max.max(g.value.abs());
    }
    let max_separation = rel(sep, r_max);
    let max_g_prime = rel(gp, g_max);
    let a = max_separation <= COINCIDENCE_TOL;
    if a != (max_g_prime <= COINCIDENCE_TOL) {
        return Err(Error::Mismatch(format!(
            "striction/directrix separation {max_separation:e} disagrees with (f/delta)' = {max_g_prime:e}"
        )));
    }
    Ok(Prop5Report { max_separation, max_g_prime, coincide: a })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Prop6Report {
    pub normals_parallel: Criterion,
    pub orthoid: Criterion,
    pub striction_asymptotic: Criterion,
    pub striction_curvature_line: Criterion,
    pub congruent: Criterion,
    pub edlinger: Criterion,
    /// Number of `δ*` sign segments the samples split into.
    pub segments: usize,
}

/// Number of samples used for the reconstruction of `Φ*`.
pub const DEFAULT_IMAGE_SAMPLES: usize = 201;

/// Frames of `Φ*` on a uniform grid of `samples` points over the
/// invariants' interval, with `s` replaced by `s*`.
pub fn image_frames(surface: &Surface, f: &Expression, samples: usize) -> Result<Vec<FramePoint>> {
    let inv = surface.invariants();
    let n = samples.max(5);
    let h = (inv.u_max - inv.u_min) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let u = if i == n - 1 { inv.u_max } else { inv.u_min + h * i as f64 };
            let frame = surface.frame(u)?;
            let (p, _) = image_surface(inv, f, &frame)?;
            Ok(FramePoint { s: p.s_star, ..frame })
        })
        .collect()
}

/// Decides the six criteria on `Φ*` two ways: from closed-form relations
/// between `f`, `δ`, `κ`, `λ` evaluated by jets, and from invariants
/// recovered numerically from the reconstructed frames of `Φ*`.
pub fn check_prop6(surface: &Surface, f: &Expression, samples: usize) -> Result<Prop6Report> {
    let inv = surface.invariants();
    let frames = image_frames(surface, f, samples)?;
    let jets: Vec<ImageJets> = frames.iter().map(|fr| image_jets(inv, f, fr.u)).collect::<Result<_>>()?;
    let delta_star: Vec<f64> = jets.iter().map(|j| j.invariants().delta_star).collect();
    let segments = segment_by_sign(&delta_star);

    let mut recovered = Vec::new();
    for s in &segments {
        if s.end - s.start >= 5 {
            for r in recover_invariants(&frames[s.start..s.end])? {
                recovered.push((r, s.start));
            }
        }
    }
    if recovered.is_empty() {
        return Err(Error::Degenerate("no segment of the image is long enough to reconstruct".into()));
    }

    // closed-form residuals
    let (mut ra, mut rb, mut rc, mut rd, mut re, mut rf) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for j in &jets {
        let (k, d, l) = (j.inv.kappa, j.inv.delta, j.inv.lambda.value);
        let (f, g) = (j.f, j.g);
        ra = ra.max(rel(f.d1 - f.value * d.d1 / (2.0 * d.value), f.d1.abs() + (f.value * d.d1 / (2.0 * d.value)).abs() + f.value.abs()));
        rb = rb.max(rel(g.d2 + g.value, g.d2.abs() + g.value.abs()));
        let k2 = k.value * k.value + 1.0;
        rc = rc.max(rel(d.value * g.d2 + f.value * k2, (d.value * g.d2).abs() + (f.value * k2).abs()));
        let rg2 = rel(g.d2, g.d2.abs() + g.value.abs());
        rd = rd.max(rg2);
        let target = d * d / k;
        let r_f = rel(f.value - target.value, f.value.abs() + target.value.abs());
        let dk = d / k;
        let lam = -dk.d2 / d.value - 1.0 / k.value;
        re = re.max(r_f.max(rel(l - lam, l.abs() + lam.abs())));
        let kg = k * g;
        rf = rf.max(rg2.max(rel(kg.d1, kg.value.abs() + kg.d1.abs())));
    }

    // geometric residuals
    let (mut gb, mut gc, mut gd, mut ge) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut ds_min, mut ds_max, mut ds_abs) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for (r, _) in &recovered {
        let j = inv.jets(r.u)?;
        gb = gb.max(r.lambda.abs());
        gc = gc.max(rel(r.kappa - r.lambda, 1.0 + r.kappa.abs()));
        gd = gd.max((1.0 + r.kappa * r.lambda).abs());
        let dev = [
            rel(r.delta - j.delta.value, 1.0 + j.delta.value.abs()),
            rel(r.kappa - j.kappa.value, 1.0 + j.kappa.value.abs()),
            rel(r.lambda - j.lambda.value, 1.0 + j.lambda.value.abs()),
        ];
        ge = ge.max(dev.into_iter().fold(0.0, f64::max));
        ds_min = ds_min.min(r.delta);
        ds_max = ds_max.max(r.delta);
        ds_abs = ds_abs.max(r.delta.abs());
    }
    let gf = gd.max(rel(ds_max - ds_min, ds_abs));

    let ga = normal_angle(surface, f, &frames)?;

    Ok(Prop6Report {
        normals_parallel: reconcile("normals parallel", ra, CLOSED_FORM_TOL, ga, NORMAL_TOL)?,
        orthoid: reconcile("orthoid", rb, CLOSED_FORM_TOL, gb, GEOMETRIC_TOL)?,
        striction_asymptotic: reconcile("striction asymptotic", rc, CLOSED_FORM_TOL, gc, GEOMETRIC_TOL)?,
        striction_curvature_line: reconcile("striction curvature line", rd, CLOSED_FORM_TOL, gd, GEOMETRIC_TOL)?,
        congruent: reconcile("congruent", re, CLOSED_FORM_TOL, ge, GEOMETRIC_TOL)?,
        edlinger: reconcile("edlinger", rf, CLOSED_FORM_TOL, gf, GEOMETRIC_TOL)?,
        segments: segments.len(),
    })
}

/// Largest sine of the angle between the Euclidean normal of `Φ` and the
/// normal `L_u × L_v` of `Φ*`, over `v ∈ {-1, 0, 1}`.
fn normal_angle(surface: &Surface, f: &Expression, frames: &[FramePoint]) -> Result<f64> {
    let inv = surface.invariants();
    let support = SupportField::conoidal(f.clone(), inv.constants.clone())?;
    let mut worst = 0.0f64;
    for frame in frames {
        let j = inv.jets(frame.u)?;
        for v in [-1.0, 0.0, 1.0] {
            let q = support.eval(frame.u, v, j.delta)?;
            let l = laplace_from_jets(frame.u, v, frame, &j, q);
            let n_star = l.l_u.cross(&l.l_v);
            let norm = n_star.norm();
            if norm <= 1e-12 * l.l_u.norm() * l.l_v.norm() {
                continue;
            }
            let xi = crate::surface::patch_point(inv, frame, v)?.xi;
            worst = worst.max(xi.cross(&(n_star / norm)).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Bindings;

    fn bind(pairs: &[(&str, f64)]) -> Bindings {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn surface(k: &str, d: &str, l: &str, interval: (f64, f64), b: Bindings) -> Surface {
        Surface::new(InvariantTriple::parse(k, d, l, interval, b).unwrap(), 1e-3).unwrap()
    }

    fn expr(s: &str) -> Expression {
        Expression::parse(s).unwrap()
    }

    fn us(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn unit_invariants_give_unit_image() {
        let s = surface("1", "1", "0", (0.0, 1.0), Bindings::new());
        let frame = s.frame(0.4).unwrap();
        let (p, i) = image_surface(s.invariants(), &expr("1"), &frame).unwrap();
        assert_eq!(i, ImageInvariants { delta_star: 1.0, kappa_star: 1.0, lambda_star: -1.0 });
        assert!((p.s_star - frame.n).norm() < 1e-15);
        assert!((p.r_star - p.s_star).cross(&p.ruling).norm() < 1e-15);
    }

    #[test]
    fn conoidal_surfaces_are_rejected() {
        let s = surface("0", "1", "0", (0.0, 1.0), Bindings::new());
        let frame = s.frame(0.4).unwrap();
        assert!(matches!(image_surface(s.invariants(), &expr("1"), &frame), Err(Error::Conoidal { .. })));
    }

    #[test]
    fn striction_tangent_has_no_central_normal_component() {
        let inv = InvariantTriple::parse("0.5+u", "1+u^2", "0.3", (0.0, 2.0), Bindings::new()).unwrap();
        let f = expr("exp(u/2)*cos(u)+2");
        for u in [0.0, 0.5, 1.3, 2.0] {
            let j = image_jets(&inv, &f, u).unwrap();
            let t = j.striction_tangent_frame();
            assert!(t[1].abs() < 1e-8 * (1.0 + t[0].abs() + t[2].abs()));
            let i = j.invariants();
            assert!((t[2] - i.delta_star).abs() < 1e-12);
            assert!((t[0] - i.delta_star * i.lambda_star).abs() < 1e-10);
        }
    }

    #[test]
    fn sign_segments() {
        let s = segment_by_sign(&[1.0, 2.0, -1.0, -3.0, -2.0, 4.0]);
        assert_eq!(
            s,
            vec![
                Segment { start: 0, end: 2, positive: true },
                Segment { start: 2, end: 5, positive: false },
                Segment { start: 5, end: 6, positive: true }
            ]
        );
    }

    #[test]
    fn prop4_cases() {
        let grid = us(0.0, 1.0, 11);
        let s = surface("-1", "1+u/2", "1", (0.0, 1.0), Bindings::new());
        let r = check_prop4(&s, &expr("1+u/2"), &grid).unwrap();
        assert!(r.parallel.holds && r.f_proportional_to_delta && r.striction_curvature_line);
        assert!(!r.orthogonal.holds);

        let s = surface("1", "1", "1", (0.0, 1.0), Bindings::new());
        let r = check_prop4(&s, &expr("2+u"), &grid).unwrap();
        assert!(r.orthogonal.holds && !r.parallel.holds);

        let s = surface("1", "1", "0", (0.0, 1.0), Bindings::new());
        let r = check_prop4(&s, &expr("1"), &grid).unwrap();
        assert!(!r.orthogonal.holds && !r.parallel.holds);
        assert!(r.f_proportional_to_delta && !r.striction_curvature_line);
    }

    #[test]
    fn prop5_both_directions() {
        let grid = us(0.0, 1.0, 21);
        let s = surface("1", "1+u^2", "0", (0.0, 1.0), Bindings::new());
        assert!(check_prop5(&s, &expr("3*(1+u^2)"), &grid).unwrap().coincide);
        assert!(!check_prop5(&s, &expr("3*(1+u^2)+u"), &grid).unwrap().coincide);
    }

    #[test]
    fn prop6_edlinger_family() {
        let b = bind(&[("c1", 1.0), ("c2", 0.5), ("c3", 0.8)]);
        let s = surface("c3/(c1+c2*u)", "1+0.2*sin(u)", "0.3", (0.0, 2.0), b);
        let r = check_prop6(&s, &expr("(1+0.2*sin(u))*(c1+c2*u)"), DEFAULT_IMAGE_SAMPLES).unwrap();
        assert!(r.edlinger.holds && r.striction_curvature_line.holds);
        assert!(!r.orthoid.holds && !r.congruent.holds && !r.normals_parallel.holds);
    }

    #[test]
    fn prop6_orthoid_family() {
        let s = surface("0.7", "1+0.2*u", "0.1", (0.0, 1.0), Bindings::new());
        let r = check_prop6(&s, &expr("(1+0.2*u)*(cos(u)+0.5*sin(u))"), DEFAULT_IMAGE_SAMPLES).unwrap();
        assert!(r.orthoid.holds && !r.edlinger.holds);
        assert!(r.orthoid.geometric < 1e-4);
    }

    #[test]
    fn prop6_congruent_family() {
        let s = surface("(1+0.1*u^2)/(1+0.3*u)", "1+0.1*u^2", "-(1+0.3*u)/(1+0.1*u^2)", (0.0, 1.5), Bindings::new());
        let r = check_prop6(&s, &expr("(1+0.1*u^2)*(1+0.3*u)"), DEFAULT_IMAGE_SAMPLES).unwrap();
        assert!(r.congruent.holds, "{r:?}");
        assert!(r.congruent.geometric < 1e-4);
    }

    #[test]
    fn prop6_parallel_normals_with_equiaffine_support() {
        let s = surface("0.9", "2+sin(u)", "0.4", (0.0, 1.5), Bindings::new());
        let r = check_prop6(&s, &expr("3*sqrt(2+sin(u))"), DEFAULT_IMAGE_SAMPLES).unwrap();
        assert!(r.normals_parallel.holds);
        assert!(r.normals_parallel.geometric < 1e-6);
        let r = check_prop6(&s, &expr("3*sqrt(2+sin(u))+u"), DEFAULT_IMAGE_SAMPLES).unwrap();
        assert!(!r.normals_parallel.holds);
    }

    #[test]
    fn closing_example_is_striction_asymptotic() {
        let b = bind(&[("c1", 0.75), ("c2", 1.25), ("c3", 1.0), ("c4", 0.2)]);
        let s = surface("c1", "1+0.3*cos(u)", "0.2", (0.0, 1.2), b);
        let f = expr("(1+0.3*cos(u))*(c3*cos(c2*u)+c4*sin(c2*u))");
        for u in us(0.0, 1.2, 13) {
            let i = image_jets(s.invariants(), &f, u).unwrap().invariants();
            assert!((i.kappa_star - i.lambda_star).abs() < 1e-8);
        }
        let r = check_prop6(&s, &f, DEFAULT_IMAGE_SAMPLES).unwrap();
        assert!(r.striction_asymptotic.holds);
    }

    #[test]
    fn reconstruction_matches_closed_form_invariants() {
        let s = surface("0.5+0.3*u", "1+0.2*u^2", "0.7-u/4", (0.0, 1.5), Bindings::new());
        let f = expr("2+sin(2*u)");
        let frames = image_frames(&s, &f, DEFAULT_IMAGE_SAMPLES).unwrap();
        for r in recover_invariants(&frames).unwrap() {
            let i = image_jets(s.invariants(), &f, r.u).unwrap().invariants();
            assert!((r.delta - i.delta_star).abs() < 1e-4 * (1.0 + i.delta_star.abs()));
            assert!((r.kappa - i.kappa_star).abs() < 1e-4 * (1.0 + i.kappa_star.abs()));
            assert!((r.lambda - i.lambda_star).abs() < 1e-4 * (1.0 + i.lambda_star.abs()));
        }
    }
}
