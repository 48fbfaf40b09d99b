//! The Laplace normal field `L = Δx / 2` of a relatively normalized ruled
//! surface, classification of its image, and the closed-form families for
//! which the image degenerates.
//!
//! In the Kruppa frame `L = L1 e + L2 n` with
//!
//! ```text
//! L1 = w q (2κv + δ') / (2δ²),   L2 = w q / δ
//! ```
//!
//! so `L` always lies in the asymptotic plane spanned by `e` and `n`.

use crate::error::{Error, ExprContext, Result};
use crate::expr::{eval_jet3, BiJet1, BiJet2, Bindings, Expression, Jet3, Scalar, Var};
use crate::oracle::{fit_line, fit_plane, singular_values};
use crate::relnorm::{w_jet, SupportField};
use crate::surface::{FramePoint, InvariantJets, InvariantTriple, Surface, SurfacePoint, Vec3};

/// A rectangular `(u, v)` sampling grid, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Grid {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub nu: usize,
    pub nv: usize,
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

impl Grid {
    pub fn us(&self) -> Vec<f64> {
        linspace(self.u_min, self.u_max, self.nu)
    }

    pub fn vs(&self) -> Vec<f64> {
        linspace(self.v_min, self.v_max, self.nv)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu < 2 || self.nv < 2 {
            return Err(Error::InvalidInput(format!("grid needs nu, nv >= 2, got {}x{}", self.nu, self.nv)));
        }
        if !(self.u_min < self.u_max) || !(self.v_min <= self.v_max) {
            return Err(Error::InvalidInput("grid bounds are not ordered".into()));
        }
        Ok(())
    }

    /// Same bounds with at least `n` samples per direction.
    pub fn at_least(&self, n: usize) -> Self {
        Self { nu: self.nu.max(n), nv: self.nv.max(n), ..*self }
    }
}

/// Frame components of `L = (L1, L2)`.
pub fn laplace_components<T: Scalar>(kappa: T, delta: T, ddelta: T, v: T, w: T, q: T) -> [T; 2] {
    let wq = w * q;
    [wq * (T::cst(2.0) * kappa * v + ddelta) / (T::cst(2.0) * delta * delta), wq / delta]
}

/// The Laplace normal and its partials at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceSample {
    pub u: f64,
    pub v: f64,
    pub l1: f64,
    pub l2: f64,
    pub l: Vec3,
    pub l_u: Vec3,
    pub l_v: Vec3,
    /// `L_u` in `(e, n, z)`.
    pub l_u_frame: [f64; 3],
    /// `L_v` in `(e, n, z)`; the third component is structurally zero.
    pub l_v_frame: [f64; 3],
}

/// Evaluates the Laplace normal at `pt`.
pub fn laplace_field(
    pt: &SurfacePoint,
    frame: &FramePoint,
    inv: &InvariantTriple,
    support: &SupportField,
) -> Result<LaplaceSample> {
    let j = inv.jets(pt.u)?;
    let q = support.eval(pt.u, pt.v, j.delta)?;
    Ok(laplace_from_jets(pt.u, pt.v, frame, &j, q))
}

pub(crate) fn laplace_from_jets(u: f64, v: f64, frame: &FramePoint, j: &InvariantJets, q: BiJet2) -> LaplaceSample {
    let [l1, l2] = laplace_components(
        BiJet1::new(j.kappa.value, j.kappa.d1, 0.0),
        BiJet1::new(j.delta.value, j.delta.d1, 0.0),
        BiJet1::new(j.delta.d1, j.delta.d2, 0.0),
        BiJet1::new(v, 0.0, 1.0),
        w_jet(v, j.delta).first_order(),
        q.first_order(),
    );
    let kappa = j.kappa.value;
    let l_u_frame = [l1.du - l2.value, l1.value + l2.du, kappa * l2.value];
    let l_v_frame = [l1.dv, l2.dv, 0.0];
    LaplaceSample {
        u,
        v,
        l1: l1.value,
        l2: l2.value,
        l: frame.to_ambient(l1.value, l2.value, 0.0),
        l_u: frame.to_ambient(l_u_frame[0], l_u_frame[1], l_u_frame[2]),
        l_v: frame.to_ambient(l_v_frame[0], l_v_frame[1], 0.0),
        l_u_frame,
        l_v_frame,
    }
}

/// Laplace normal of `surface` at `(u, v)`.
pub fn laplace_at(surface: &Surface, support: &SupportField, u: f64, v: f64) -> Result<LaplaceSample> {
    let frame = surface.frame(u)?;
    let j = surface.invariants().jets(u)?;
    let q = support.eval(u, v, j.delta)?;
    Ok(laplace_from_jets(u, v, &frame, &j, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Point,
    StraightLine,
    PlanarCurve,
    Surface,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Point => "point",
            Verdict::StraightLine => "straight-line",
            Verdict::PlanarCurve => "planar-curve",
            Verdict::Surface => "surface",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Evidence {
    pub test: &'static str,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
    /// `L(u, 0)` along the grid's `u` samples when the image is degenerate.
    pub gamma_samples: Option<Vec<[f64; 3]>>,
    /// Fitted direction (line) or normal (plane) when available.
    pub direction: Option<[f64; 3]>,
    /// Centroid of the image samples.
    pub centroid: [f64; 3],
    /// `max ‖L‖` over the grid.
    pub scale: f64,
}

impl ClassificationReport {
    pub fn evidence(&self, test: &str) -> Option<f64> {
        self.evidence.iter().find(|e| e.test == test).map(|e| e.value)
    }
}

/// Relative tolerance for the point, line and plane residuals.
pub const CLASSIFY_REL_TOL: f64 = 1e-6;

/// Smallest grid accepted by [`classify_image`] in each direction.
pub const MIN_CLASSIFY_SAMPLES: usize = 20;

/// Classifies the Laplace normal image over `grid`.
///
/// The image is a surface exactly when `rank(L_u, L_v) = 2` somewhere. When
/// the rank is at most one everywhere the image is a curve or a point; its
/// samples are then tested for being a point, a line, and a plane, with
/// residuals measured relative to `max ‖L‖`.
pub fn classify_image(surface: &Surface, support: &SupportField, grid: &Grid, rel_tol: f64) -> Result<ClassificationReport> {
    grid.validate()?;
    if grid.nu < MIN_CLASSIFY_SAMPLES || grid.nv < MIN_CLASSIFY_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "classification needs at least {MIN_CLASSIFY_SAMPLES}x{MIN_CLASSIFY_SAMPLES} samples, got {}x{}",
            grid.nu, grid.nv
        )));
    }
    let us = grid.us();
    let vs = grid.vs();
    let mut samples = Vec::with_capacity(us.len() * vs.len());
    let mut gamma = Vec::with_capacity(us.len());
    let mut scale = 0.0f64;
    let mut max_lv = 0.0f64;
    let mut max_s1 = 0.0f64;
    let mut max_s2 = 0.0f64;
    let mut max_kappa = 0.0f64;
    let mut max_line_res = 0.0f64;
    for &u in &us {
        let frame = surface.frame(u)?;
        let j = surface.invariants().jets(u)?;
        max_kappa = max_kappa.max(j.kappa.value.abs());
        max_line_res = max_line_res.max(line_family_residual(j.delta).abs());
        for &v in &vs {
            let q = support.eval(u, v, j.delta)?;
            let s = laplace_from_jets(u, v, &frame, &j, q);
            scale = scale.max(s.l.norm());
            max_lv = max_lv.max(s.l_v.norm());
            let sv = singular_values(&[s.l_u, s.l_v]);
            max_s1 = max_s1.max(sv[0]);
            max_s2 = max_s2.max(sv[1]);
            samples.push(s.l);
        }
        let q0 = support.eval(u, 0.0, j.delta)?;
        gamma.push(laplace_from_jets(u, 0.0, &frame, &j, q0).l);
    }
    if scale == 0.0 {
        return Err(Error::Degenerate("Laplace normal vanishes on the whole grid".into()));
    }
    let centroid = samples.iter().fold(Vec3::zeros(), |a, b| a + b) / samples.len() as f64;
    let rank2 = if max_s1 <= rel_tol * scale { 0.0 } else { max_s2 / max_s1 };
    let mut evidence = vec![
        Evidence { test: "max|L_v|/scale", value: max_lv / scale, threshold: rel_tol },
        Evidence { test: "rank2(L_u,L_v)", value: rank2, threshold: rel_tol },
        Evidence { test: "max|kappa|", value: max_kappa, threshold: rel_tol },
        Evidence { test: "line-family-residual", value: max_line_res, threshold: rel_tol },
    ];
    let report = |verdict, evidence, direction: Option<Vec3>, gamma_samples| ClassificationReport {
        verdict,
        evidence,
        gamma_samples,
        direction: direction.map(|d: Vec3| [d.x, d.y, d.z]),
        centroid: [centroid.x, centroid.y, centroid.z],
        scale,
    };
    if rank2 > rel_tol {
        return Ok(report(Verdict::Surface, evidence, None, None));
    }
    let gamma_out = Some(gamma.iter().map(|p| [p.x, p.y, p.z]).collect());

    let diameter = diameter(&samples) / scale;
    evidence.push(Evidence { test: "diameter/scale", value: diameter, threshold: rel_tol });
    if diameter <= rel_tol {
        return Ok(report(Verdict::Point, evidence, None, gamma_out));
    }
    let line = fit_line(&samples)?;
    evidence.push(Evidence { test: "line-residual", value: line.residual, threshold: rel_tol });
    let plane = fit_plane(&samples)?;
    evidence.push(Evidence { test: "plane-residual", value: plane.residual, threshold: rel_tol });
    if line.residual <= rel_tol {
        return Ok(report(Verdict::StraightLine, evidence, line.direction, gamma_out));
    }
    if plane.residual <= rel_tol {
        return Ok(report(Verdict::PlanarCurve, evidence, plane.direction, gamma_out));
    }
    Err(Error::Mismatch(format!(
        "rank(L_u, L_v) <= 1 on the grid but the image is not planar (plane residual {:e})",
        plane.residual
    )))
}

fn diameter(points: &[Vec3]) -> f64 {
    let mut d = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// `(2δδ'' - 3δ'² - 4δ²) / δ²`: zero exactly for `δ = c₂ cos⁻²(u + c₁)`.
pub fn line_family_residual(delta: Jet3) -> f64 {
    let (d, d1, d2) = (delta.value, delta.d1, delta.d2);
    (2.0 * d * d2 - 3.0 * d1 * d1 - 4.0 * d * d) / (d * d)
}

/// Coefficients of the curvature of the image curve of a conoidal surface
/// with support `f / w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// The bracket whose 3/2 power is the denominator.
    pub d_base: f64,
}

pub fn gamma_coefficients(delta: Jet3, f: Jet3) -> GammaCoefficients {
    let (d, d1, d2, d3) = (delta.value, delta.d1, delta.d2, delta.d3);
    let (f0, f1) = (f.value, f.d1);
    let a = d * d * (2.0 * d * d2 - 3.0 * d1 * d1 - 4.0 * d * d);
    let b = 2.0 * d * (6.0 * d * d1 * d2 - 4.0 * d * d * d1 - 6.0 * d1 * d1 * d1 - d * d * d3);
    let c = 4.0 * d.powi(4) + 7.0 * d * d * d1 * d1 + 6.0 * d1.powi(4) - 2.0 * d.powi(3) * d2 - 6.0 * d * d1 * d1 * d2
        + d * d * d1 * d3;
    let p = d1 * f0 - 2.0 * d * f1;
    let r = 2.0 * (d * d + d1 * d1) * f0 - d * (d1 * f1 + d2 * f0);
    GammaCoefficients { a, b, c, d_base: d * d * p * p + r * r }
}

/// Numerator `A f f'' - 2 A f'² + B f f' + C f²`; the image curve is a
/// straight line exactly where it vanishes.
pub fn gamma_numerator(delta: Jet3, f: Jet3) -> f64 {
    let k = gamma_coefficients(delta, f);
    let (f0, f1, f2) = (f.value, f.d1, f.d2);
    k.a * f0 * f2 - 2.0 * k.a * f1 * f1 + k.b * f0 * f1 + k.c * f0 * f0
}

/// Unsigned curvature of the image curve `Γ(u) = (f/δ)(δ'/(2δ) e + n)` of a
/// conoidal surface with support function `f / w`:
///
/// ```text
/// k = 2|δ|³ |A f f'' - 2A f'² + B f f' + C f²| / D^{3/2}
/// ```
pub fn gamma_curvature(inv: &InvariantTriple, f: &Expression, u: f64) -> Result<f64> {
    let kappa = eval_jet3(&inv.kappa, u, &inv.constants).field("kappa")?;
    if kappa.value.abs() > 1e-12 {
        return Err(Error::InvalidInput(format!("image curve curvature needs kappa = 0, got {} at u = {u}", kappa.value)));
    }
    let delta = eval_jet3(&inv.delta, u, &inv.constants).field("delta")?;
    if delta.value.abs() < crate::surface::TORSAL_TOL {
        return Err(Error::Torsal { u, delta: delta.value });
    }
    let fj = eval_jet3(f, u, &inv.constants).field("f")?;
    let k = gamma_coefficients(delta, fj);
    if !(k.d_base > 0.0) {
        return Err(Error::Degenerate(format!("curvature denominator vanishes at u = {u}")));
    }
    let num = gamma_numerator(delta, fj);
    Ok(2.0 * delta.value.abs().powi(3) * num.abs() / k.d_base.powf(1.5))
}

/// The point-image family: `κ = 0`, `δ = c₃ (c₁ cos u + c₂ sin u)⁻²`,
/// `q = |c₃|^{1/2} q_AFF`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFamily {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub kappa: Expression,
    pub delta: Expression,
    /// `f = (c₃ δ)^{1/2}`, so that `q = f / w`.
    pub f: Expression,
    pub support: SupportField,
    pub constants: Bindings,
}

fn family_bindings(pairs: &[(&str, f64)]) -> Bindings {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub fn family_case1_delta(c1: f64, c2: f64, c3: f64) -> Result<PointFamily> {
    if c3 == 0.0 {
        return Err(Error::InvalidInput("c3 must be nonzero".into()));
    }
    if c1 == 0.0 && c2 == 0.0 {
        return Err(Error::InvalidInput("(c1, c2) must not both vanish".into()));
    }
    let constants = family_bindings(&[("c1", c1), ("c2", c2), ("c3", c3)]);
    let delta_src = "c3*(c1*cos(u) + c2*sin(u))^(-2)";
    let kappa = Expression::parse("0").field("kappa")?;
    let delta = Expression::parse(delta_src).field("delta")?;
    let f = Expression::parse(&format!("sqrt(c3*{delta_src})")).field("f")?;
    let q = Expression::parse("abs(c3)/(abs(c1*cos(u) + c2*sin(u))*w)").field("q")?;
    let support = SupportField::general(q, constants.clone())?;
    Ok(PointFamily { c1, c2, c3, kappa, delta, f, support, constants })
}

impl PointFamily {
    pub fn invariants(&self, lambda: Expression, interval: (f64, f64)) -> Result<InvariantTriple> {
        InvariantTriple::new(self.kappa.clone(), self.delta.clone(), lambda, interval, self.constants.clone())
    }

    /// Predicted constant image point in `(e, n)` components at `u`.
    pub fn point_frame(&self, u: f64) -> [f64; 2] {
        let (s, c) = u.sin_cos();
        [self.c1 * s - self.c2 * c, self.c1 * c + self.c2 * s]
    }

    /// The two relations `(δ'f/δ²)' - 2f/δ` and `δ'f/δ² + 2(f/δ)'`.
    pub fn point_relations(&self, u: f64) -> Result<[f64; 2]> {
        let delta = eval_jet3(&self.delta, u, &self.constants).field("delta")?;
        let f = eval_jet3(&self.f, u, &self.constants).field("f")?;
        let dd = delta.derivative();
        let first = dd * f / (delta * delta);
        let ratio = f / delta;
        Ok([first.d1 - 2.0 * ratio.value, first.value + 2.0 * ratio.d1])
    }
}

/// The straight-line family: `κ = 0`, `δ = c₂ cos⁻²(u + c₁)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineFamily {
    pub c1: f64,
    pub c2: f64,
    pub kappa: Expression,
    pub delta: Expression,
    pub constants: Bindings,
}

pub fn family_case2_delta(c1: f64, c2: f64) -> Result<LineFamily> {
    if c2 == 0.0 {
        return Err(Error::InvalidInput("c2 must be nonzero".into()));
    }
    let constants = family_bindings(&[("c1", c1), ("c2", c2)]);
    Ok(LineFamily {
        c1,
        c2,
        kappa: Expression::parse("0").field("kappa")?,
        delta: Expression::parse("c2*cos(u + c1)^(-2)").field("delta")?,
        constants,
    })
}

impl LineFamily {
    /// Invariants on `interval`, which must avoid the poles `u + c₁ = π/2 + kπ`.
    pub fn invariants(&self, lambda: Expression, interval: (f64, f64)) -> Result<InvariantTriple> {
        use std::f64::consts::{FRAC_PI_2, PI};
        let (a, b) = (interval.0 + self.c1, interval.1 + self.c1);
        let k = ((a - FRAC_PI_2) / PI).ceil();
        if FRAC_PI_2 + k * PI <= b {
            return Err(Error::InvalidInput(format!(
                "interval [{}, {}] contains a pole of cos^-2(u + c1)",
                interval.0, interval.1
            )));
        }
        lambda.check(&[Var::U], &self.constants).field("lambda")?;
        InvariantTriple::new(self.kappa.clone(), self.delta.clone(), lambda, interval, self.constants.clone())
    }

    /// The constant unit direction of the image line in `(e, n)` components at `u`.
    pub fn direction_frame(&self, u: f64) -> [f64; 2] {
        let (s, c) = (u + self.c1).sin_cos();
        [s, c]
    }

    pub fn line_family_residual(&self, u: f64) -> Result<f64> {
        let delta = eval_jet3(&self.delta, u, &self.constants).field("delta")?;
        Ok(line_family_residual(delta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surface(k: &str, d: &str, l: &str, interval: (f64, f64), b: &Bindings) -> Surface {
        Surface::new(InvariantTriple::parse(k, d, l, interval, b.clone()).unwrap(), 1e-3).unwrap()
    }

    fn bind(pairs: &[(&str, f64)]) -> Bindings {
        family_bindings(pairs)
    }

    fn grid(u: (f64, f64), v: (f64, f64)) -> Grid {
        Grid { u_min: u.0, u_max: u.1, v_min: v.0, v_max: v.1, nu: 20, nv: 20 }
    }

    #[test]
    fn helicoid_with_one_over_w_is_the_central_normal() {
        let s = surface("0", "1", "0", (0.0, 1.0), &Bindings::new());
        let q = SupportField::parse_conoidal("1", Bindings::new()).unwrap();
        let l = laplace_at(&s, &q, 0.0, 0.7).unwrap();
        assert!((l.l - Vec3::y()).norm() < 1e-15);
        assert!(l.l_v.norm() < 1e-15);
    }

    #[test]
    fn helicoid_with_inverse_sqrt_w() {
        let s = surface("0", "1", "0", (0.0, 1.0), &Bindings::new());
        let q = SupportField::parse_general("w^(-0.5)", Bindings::new()).unwrap();
        let l = laplace_at(&s, &q, 0.0, 1.0).unwrap();
        assert!((l.l - Vec3::y() * 2f64.powf(0.25)).norm() < 1e-14);
    }

    #[test]
    fn laplace_normal_lies_in_asymptotic_plane() {
        let s = surface("1.5*cos(u)", "0.5+u^2", "2*u", (0.0, 2.0), &Bindings::new());
        let q = SupportField::parse_general("(3 + sin(u*v))/w^1.5", Bindings::new()).unwrap();
        for (u, v) in [(0.1, -2.0), (1.0, 0.0), (1.9, 4.0)] {
            let l = laplace_at(&s, &q, u, v).unwrap();
            let f = s.frame(u).unwrap();
            assert!(l.l.dot(&f.z).abs() < 1e-12);
            assert!(l.l_v.dot(&f.z).abs() < 1e-12);
        }
    }

    #[test]
    fn classification_examples() {
        let none = Bindings::new();
        let family = family_case1_delta(1.0, 0.0, 1.0).unwrap();
        let inv = family.invariants(Expression::parse("0").unwrap(), (0.0, 1.2)).unwrap();
        let s = Surface::new(inv, 1e-3).unwrap();
        let r = classify_image(&s, &family.support, &grid((0.0, 1.2), (-3.0, 3.0)), CLASSIFY_REL_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Point);
        assert!((Vec3::from(r.centroid) - Vec3::y()).norm() < 1e-6);

        let s = surface("0", "1", "0", (-1.0, 1.0), &none);
        let q = SupportField::parse_general("1/(cos(u)*w)", none.clone()).unwrap();
        let r = classify_image(&s, &q, &grid((-1.0, 1.0), (-3.0, 3.0)), CLASSIFY_REL_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::StraightLine);

        let q = SupportField::parse_general("1/w", none.clone()).unwrap();
        let r = classify_image(&s, &q, &grid((-1.0, 1.0), (-3.0, 3.0)), CLASSIFY_REL_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::PlanarCurve);
        for p in r.gamma_samples.unwrap() {
            assert!((Vec3::from(p).norm() - 1.0).abs() < 1e-10);
        }

        let s = surface("0.5", "1", "0", (0.0, 1.0), &none);
        let q = SupportField::parse_general("1", none).unwrap();
        let r = classify_image(&s, &q, &grid((0.0, 1.0), (-3.0, 3.0)), CLASSIFY_REL_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Surface);
    }

    #[test]
    fn line_family_with_general_support_is_still_a_line() {
        // rank(L_u, L_v) = 1 although L_v does not vanish
        let family = family_case2_delta(0.3, 2.0).unwrap();
        let inv = family.invariants(Expression::parse("0.5").unwrap(), (-1.0, 1.0)).unwrap();
        let s = Surface::new(inv, 1e-3).unwrap();
        let q = SupportField::parse_general("(2 + sin(u) + 0.3*v/(1+v^2))/sqrt(w)", Bindings::new()).unwrap();
        let r = classify_image(&s, &q, &grid((-1.0, 1.0), (-2.0, 2.0)), CLASSIFY_REL_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::StraightLine);
        assert!(r.evidence("max|L_v|/scale").unwrap() > 1e-3);
        let [a, b] = family.direction_frame(-1.0);
        let dir = Vec3::from(r.direction.unwrap());
        assert!(dir.cross(&Vec3::new(a, b, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn classification_rejects_small_grids() {
        let s = surface("0", "1", "0", (0.0, 1.0), &Bindings::new());
        let q = SupportField::parse_general("1/w", Bindings::new()).unwrap();
        let g = Grid { nu: 5, ..grid((0.0, 1.0), (-1.0, 1.0)) };
        assert!(matches!(classify_image(&s, &q, &g, CLASSIFY_REL_TOL), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn image_curve_curvature_of_the_examples_vanishes() {
        let inv = InvariantTriple::parse("0", "1", "0", (-1.0, 1.0), Bindings::new()).unwrap();
        let f = Expression::parse("1/cos(u)").unwrap();
        for u in [-0.9, -0.2, 0.0, 0.5, 0.95] {
            assert!(gamma_curvature(&inv, &f, u).unwrap() < 1e-12);
        }
        let inv = InvariantTriple::parse("0", "sin(u)^2", "0", (0.1, 0.75), Bindings::new()).unwrap();
        let f = Expression::parse("sin(u)^3/cos(2*u)").unwrap();
        for u in [0.1, 0.3, 0.5, 0.7] {
            assert!(gamma_curvature(&inv, &f, u).unwrap() < 1e-9);
        }
    }

    #[test]
    fn unit_circle_has_unit_curvature() {
        let inv = InvariantTriple::parse("0", "1", "0", (-1.0, 1.0), Bindings::new()).unwrap();
        let k = gamma_curvature(&inv, &Expression::parse("1").unwrap(), 0.3).unwrap();
        assert!((k - 1.0).abs() < 1e-14);
        // a circle of radius f/δ = 2 has curvature 1/2
        let k = gamma_curvature(&inv, &Expression::parse("2").unwrap(), 0.3).unwrap();
        assert!((k - 0.5).abs() < 1e-14);
    }

    #[test]
    fn curvature_requires_conoidal_surface() {
        let inv = InvariantTriple::parse("1", "1", "0", (-1.0, 1.0), Bindings::new()).unwrap();
        assert!(gamma_curvature(&inv, &Expression::parse("1").unwrap(), 0.0).is_err());
    }

    #[test]
    fn point_family_parameters() {
        let fam = family_case1_delta(1.0, 0.0, 1.0).unwrap();
        for u in [0.0, 0.4, 1.0] {
            let d = eval_jet3(&fam.delta, u, &fam.constants).unwrap();
            assert!((d.value - 1.0 / (u.cos() * u.cos())).abs() < 1e-14);
            let f = eval_jet3(&fam.f, u, &fam.constants).unwrap();
            assert!((f.value - 1.0 / u.cos()).abs() < 1e-14);
            assert_eq!(fam.point_frame(u), [u.sin(), u.cos()]);
            let [r1, r2] = fam.point_relations(u).unwrap();
            assert!(r1.abs() < 1e-9 && r2.abs() < 1e-9);
        }
        let fam = family_case1_delta(0.0, 1.0, 1.0).unwrap();
        assert!(eval_jet3(&fam.delta, 0.0, &fam.constants).is_err());
        let d = eval_jet3(&fam.delta, 1.0, &fam.constants).unwrap();
        assert!((d.value - 1.0 / (1f64.sin().powi(2))).abs() < 1e-14);
        assert!(family_case1_delta(1.0, 0.0, 0.0).is_err());
        assert!(family_case1_delta(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn line_family_residual_and_poles() {
        let fam = family_case2_delta(0.0, 1.0).unwrap();
        for i in 0..=20 {
            let u = -1.0 + 0.1 * i as f64;
            assert!(fam.line_family_residual(u).unwrap().abs() < 1e-9);
        }
        assert!(fam.invariants(Expression::parse("0").unwrap(), (1.0, 2.0)).is_err());
        assert!(family_case2_delta(0.0, 0.0).is_err());
        let _ = bind(&[]);
    }
}
