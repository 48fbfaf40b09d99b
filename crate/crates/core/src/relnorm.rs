//! Relative normalizations given by a support function `q`.
//!
//! The relative normal is assembled directly in the Kruppa frame; the
//! covector is `X = ξ / q` and the relative metric `G = h / q`.

use crate::error::{Error, ExprContext, Result};
use crate::expr::{eval_bijet2, eval_jet3, BiJet1, BiJet2, Bindings, Expression, Jet3, Scalar, Var};
use crate::surface::{FramePoint, InvariantJets, InvariantTriple, SurfacePoint, Vec3};

/// Support values smaller than this in magnitude are treated as zero.
pub const ZERO_SUPPORT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub enum SupportKind {
    /// `q(u, v, w)` given directly.
    General(Expression),
    /// `q = f(u) / w`.
    Conoidal(Expression),
}

/// A support function together with its constant bindings.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportField {
    pub kind: SupportKind,
    pub constants: Bindings,
}

impl SupportField {
    pub fn general(q: Expression, constants: Bindings) -> Result<Self> {
        q.check(&[Var::U, Var::V, Var::W], &constants).field("q")?;
        Ok(Self { kind: SupportKind::General(q), constants })
    }

    pub fn conoidal(f: Expression, constants: Bindings) -> Result<Self> {
        f.check(&[Var::U], &constants).field("f")?;
        Ok(Self { kind: SupportKind::Conoidal(f), constants })
    }

    pub fn parse_general(q: &str, constants: Bindings) -> Result<Self> {
        Self::general(Expression::parse(q).field("q")?, constants)
    }

    pub fn parse_conoidal(f: &str, constants: Bindings) -> Result<Self> {
        Self::conoidal(Expression::parse(f).field("f")?, constants)
    }

    /// `f(u)` when the support function is of the form `f / w`.
    pub fn conoidal_f(&self) -> Option<&Expression> {
        match &self.kind {
            SupportKind::Conoidal(f) => Some(f),
            SupportKind::General(_) => None,
        }
    }

    /// `q` and its partials up to order two at `(u, v)`.
    pub fn eval(&self, u: f64, v: f64, delta: Jet3) -> Result<BiJet2> {
        let w = w_jet(v, delta);
        let q = match &self.kind {
            SupportKind::General(q) => eval_bijet2(q, u, v, w, &self.constants).field("q")?,
            SupportKind::Conoidal(f) => eval_jet3(f, u, &self.constants).field("f")?.lift() / w,
        };
        if q.value.abs() < ZERO_SUPPORT_TOL {
            return Err(Error::ZeroSupport { u, v });
        }
        Ok(q)
    }
}

/// `w = sqrt(v² + δ(u)²)` as a second-order jet in `(u, v)`.
pub fn w_jet(v: f64, delta: Jet3) -> BiJet2 {
    let d = delta.lift();
    let v = BiJet2::var_v(v);
    (v * v + d * d).sqrt()
}

/// Equiaffine support function `|K|^{1/4} = |δ|^{1/2} / w` as a jet.
pub fn q_aff_jet(v: f64, delta: Jet3) -> BiJet2 {
    let d = delta.lift();
    let abs_d = if delta.value < 0.0 { -d } else { d };
    abs_d.sqrt() / w_jet(v, delta)
}

/// Components of the relative normal in `(e, n, z)`.
#[allow(clippy::too_many_arguments)]
pub fn normal_components<T: Scalar>(kappa: T, delta: T, ddelta: T, v: T, w: T, q: T, q_u: T, q_v: T) -> [T; 3] {
    let e = -(w * (delta * q_u + q_v * (kappa * w * w + ddelta * v))) / (delta * delta);
    let n = (delta * delta * q - w * w * v * q_v) / (delta * w);
    let z = -(v * q + w * w * q_v) / w;
    [e, n, z]
}

/// Relative structure at one surface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeStructure {
    pub q: BiJet2,
    /// Covector of the tangent plane.
    pub covector: Vec3,
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    /// Relative normal, ambient.
    pub y: Vec3,
    /// Relative normal in `(e, n, z)`.
    pub y_frame: [f64; 3],
    pub y_u: Vec3,
    pub y_v: Vec3,
}

impl RelativeStructure {
    pub fn det_g(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }
}

/// Relative normalization induced by `support` at `pt`.
pub fn relative_normal(
    pt: &SurfacePoint,
    frame: &FramePoint,
    inv: &InvariantTriple,
    support: &SupportField,
) -> Result<RelativeStructure> {
    let j = inv.jets(pt.u)?;
    let q = support.eval(pt.u, pt.v, j.delta)?;
    Ok(relative_normal_from_jets(pt, frame, &j, q))
}

pub(crate) fn relative_normal_from_jets(pt: &SurfacePoint, frame: &FramePoint, j: &InvariantJets, q: BiJet2) -> RelativeStructure {
    let w = w_jet(pt.v, j.delta).first_order();
    let kappa = BiJet1::new(j.kappa.value, j.kappa.d1, 0.0);
    let delta = BiJet1::new(j.delta.value, j.delta.d1, 0.0);
    let ddelta = BiJet1::new(j.delta.d1, j.delta.d2, 0.0);
    let v = BiJet1::new(pt.v, 0.0, 1.0);
    let [a, b, c] = normal_components(kappa, delta, ddelta, v, w, q.first_order(), q.partial_u(), q.partial_v());
    let k = j.kappa.value;
    let y = frame.to_ambient(a.value, b.value, c.value);
    let y_u = frame.to_ambient(a.du - b.value, a.value + b.du - k * c.value, c.du + k * b.value);
    let y_v = frame.to_ambient(a.dv, b.dv, c.dv);
    RelativeStructure {
        q,
        covector: pt.xi / q.value,
        g11: pt.h11 / q.value,
        g12: pt.h12 / q.value,
        g22: pt.h22 / q.value,
        y,
        y_frame: [a.value, b.value, c.value],
        y_u,
        y_v,
    }
}

/// Equiaffine normal `(ε/|δ|^{1/2}) ((2κv + δ')/(2δ) e + n)` and `q_AFF`.
pub fn equiaffine_normal(pt: &SurfacePoint, frame: &FramePoint, inv: &InvariantTriple) -> Result<(Vec3, f64)> {
    let j = inv.jets(pt.u)?;
    Ok(equiaffine_from_jets(pt, frame, &j))
}

pub(crate) fn equiaffine_from_jets(pt: &SurfacePoint, frame: &FramePoint, j: &InvariantJets) -> (Vec3, f64) {
    let (kappa, delta, ddelta) = (j.kappa.value, j.delta.value, j.delta.d1);
    let eps = delta.signum();
    let scale = eps / delta.abs().sqrt();
    let y = frame.to_ambient(scale * (2.0 * kappa * pt.v + ddelta) / (2.0 * delta), scale, 0.0);
    (y, delta.abs().sqrt() / pt.w)
}
