//! Reconstruction of a skew ruled surface from its fundamental invariants.
//!
//! The surface is `x(u, v) = s(u) + v e(u)`, where `u` is the arc length of the
//! spherical curve `e(u)` and `s(u)` is the line of striction. The moving
//! frame `(e, n, z)` obeys
//!
//! ```text
//! e' = n,   n' = -e + κ z,   z' = -κ n,   s' = δ (λ e + z)
//! ```
//!
//! and is integrated with classical RK4 plus Gram-Schmidt after every step.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, ExprContext, Result};
use crate::expr::{eval_f64, eval_jet3, Bindings, Expression, Jet3, Var};

pub type Vec3 = Vector3<f64>;

/// Below this `|δ|` a ruling is treated as torsal.
pub const TORSAL_TOL: f64 = 1e-12;

/// Default RK4 step for frame integration.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Tolerance for orthonormality and handedness checks on frames.
pub const FRAME_TOL: f64 = 1e-9;

/// Conical curvature `κ`, parameter of distribution `δ` and `λ = cot σ` as
/// functions of `u` on `[u_min, u_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantTriple {
    pub kappa: Expression,
    pub delta: Expression,
    pub lambda: Expression,
    pub u_min: f64,
    pub u_max: f64,
    pub constants: Bindings,
}

/// Jets of the three invariants at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantJets {
    pub kappa: Jet3,
    pub delta: Jet3,
    pub lambda: Jet3,
}

impl InvariantTriple {
    pub fn new(
        kappa: Expression,
        delta: Expression,
        lambda: Expression,
        interval: (f64, f64),
        constants: Bindings,
    ) -> Result<Self> {
        let (u_min, u_max) = interval;
        if !(u_min < u_max) || !u_min.is_finite() || !u_max.is_finite() {
            return Err(Error::InvalidInput(format!("invalid interval [{u_min}, {u_max}]")));
        }
        kappa.check(&[Var::U], &constants).field("kappa")?;
        delta.check(&[Var::U], &constants).field("delta")?;
        lambda.check(&[Var::U], &constants).field("lambda")?;
        Ok(Self { kappa, delta, lambda, u_min, u_max, constants })
    }

    /// Parses the three invariants from strings.
    pub fn parse(kappa: &str, delta: &str, lambda: &str, interval: (f64, f64), constants: Bindings) -> Result<Self> {
        Self::new(
            Expression::parse(kappa).field("kappa")?,
            Expression::parse(delta).field("delta")?,
            Expression::parse(lambda).field("lambda")?,
            interval,
            constants,
        )
    }

    pub fn jets(&self, u: f64) -> Result<InvariantJets> {
        let b = &self.constants;
        Ok(InvariantJets {
            kappa: eval_jet3(&self.kappa, u, b).field("kappa")?,
            delta: eval_jet3(&self.delta, u, b).field("delta")?,
            lambda: eval_jet3(&self.lambda, u, b).field("lambda")?,
        })
    }

    /// `(κ, δ, λ)` at `u`, rejecting torsal rulings.
    pub fn values(&self, u: f64) -> Result<(f64, f64, f64)> {
        let b = &self.constants;
        let kappa = eval_f64(&self.kappa, u, b).field("kappa")?;
        let delta = eval_f64(&self.delta, u, b).field("delta")?;
        let lambda = eval_f64(&self.lambda, u, b).field("lambda")?;
        if delta.abs() < TORSAL_TOL {
            return Err(Error::Torsal { u, delta });
        }
        Ok((kappa, delta, lambda))
    }

    /// Same surface shape with a different `λ`.
    pub fn with_lambda(&self, lambda: Expression) -> Result<Self> {
        Self::new(self.kappa.clone(), self.delta.clone(), lambda, (self.u_min, self.u_max), self.constants.clone())
    }
}

/// The striction angle `σ ∈ (-π/2, π/2]` with `cot σ = λ`.
pub fn striction_angle(lambda: f64) -> f64 {
    let s = std::f64::consts::FRAC_PI_2 - lambda.atan();
    if s > std::f64::consts::FRAC_PI_2 {
        s - std::f64::consts::PI
    } else {
        s
    }
}

/// Kruppa frame and striction point at `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePoint {
    pub u: f64,
    pub e: Vec3,
    pub n: Vec3,
    pub z: Vec3,
    pub s: Vec3,
}

impl FramePoint {
    /// Standard basis with the striction point at the origin.
    pub fn canonical(u: f64) -> Self {
        Self { u, e: Vec3::x(), n: Vec3::y(), z: Vec3::z(), s: Vec3::zeros() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidFrame { u: self.u, reason });
        for (name, v) in [("e", self.e), ("n", self.n), ("z", self.z)] {
            if (v.norm() - 1.0).abs() > FRAME_TOL {
                return bad(format!("|{name}| = {}", v.norm()));
            }
        }
        for (name, d) in [("<e,n>", self.e.dot(&self.n)), ("<e,z>", self.e.dot(&self.z)), ("<n,z>", self.n.dot(&self.z))] {
            if d.abs() > FRAME_TOL {
                return bad(format!("{name} = {d:e}"));
            }
        }
        let det = self.det();
        if det <= 0.0 {
            return bad(format!("left-handed frame, det = {det}"));
        }
        Ok(())
    }

    pub fn det(&self) -> f64 {
        Matrix3::from_columns(&[self.e, self.n, self.z]).determinant()
    }

    /// Ambient vector with components `(a, b, c)` in `(e, n, z)`.
    pub fn to_ambient(&self, a: f64, b: f64, c: f64) -> Vec3 {
        self.e * a + self.n * b + self.z * c
    }

    /// Components of `x` in `(e, n, z)`.
    pub fn to_frame(&self, x: &Vec3) -> [f64; 3] {
        [x.dot(&self.e), x.dot(&self.n), x.dot(&self.z)]
    }

    fn state(&self) -> [Vec3; 4] {
        [self.e, self.n, self.z, self.s]
    }

    fn from_state(u: f64, st: [Vec3; 4]) -> Self {
        Self { u, e: st[0], n: st[1], z: st[2], s: st[3] }
    }

    fn orthonormalized(mut self) -> Self {
        self.e = self.e.normalize();
        self.n = (self.n - self.e * self.e.dot(&self.n)).normalize();
        self.z = (self.z - self.e * self.e.dot(&self.z) - self.n * self.n.dot(&self.z)).normalize();
        self
    }
}

fn frame_rhs(inv: &InvariantTriple, u: f64, st: &[Vec3; 4]) -> Result<[Vec3; 4]> {
    let (kappa, delta, lambda) = inv.values(u)?;
    let [e, n, z, _] = *st;
    Ok([n, -e + z * kappa, -n * kappa, (e * lambda + z) * delta])
}

fn rk4_step(inv: &InvariantTriple, frame: &FramePoint, h: f64) -> Result<FramePoint> {
    let u = frame.u;
    let y = frame.state();
    let add = |a: &[Vec3; 4], k: &[Vec3; 4], c: f64| -> [Vec3; 4] {
        [a[0] + k[0] * c, a[1] + k[1] * c, a[2] + k[2] * c, a[3] + k[3] * c]
    };
    let k1 = frame_rhs(inv, u, &y)?;
    let k2 = frame_rhs(inv, u + 0.5 * h, &add(&y, &k1, 0.5 * h))?;
    let k3 = frame_rhs(inv, u + 0.5 * h, &add(&y, &k2, 0.5 * h))?;
    let k4 = frame_rhs(inv, u + h, &add(&y, &k3, h))?;
    let mut out = y;
    for i in 0..4 {
        out[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
    }
    Ok(FramePoint::from_state(u + h, out).orthonormalized())
}

/// Frames on a uniform grid `u0 + k·step` covering `[u_min, u_max]`, able to
/// produce the frame at any parameter in that interval.
#[derive(Debug, Clone)]
pub struct FrameTrack {
    inv: InvariantTriple,
    step: f64,
    nodes: Vec<FramePoint>,
}

impl FrameTrack {
    pub fn nodes(&self) -> &[FramePoint] {
        &self.nodes
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn invariants(&self) -> &InvariantTriple {
        &self.inv
    }

    /// Frame at an arbitrary `u ∈ [u_min, u_max]`: one partial RK4 step from
    /// the nearest node.
    pub fn at(&self, u: f64) -> Result<FramePoint> {
        let slack = 1e-12 * (1.0 + self.inv.u_max.abs().max(self.inv.u_min.abs()));
        if !(u >= self.inv.u_min - slack && u <= self.inv.u_max + slack) {
            return Err(Error::OutOfRange { u, lo: self.inv.u_min, hi: self.inv.u_max });
        }
        let first = self.nodes[0].u;
        let idx = ((u - first) / self.step).round().clamp(0.0, (self.nodes.len() - 1) as f64) as usize;
        let node = &self.nodes[idx];
        let du = u - node.u;
        if du == 0.0 {
            return Ok(*node);
        }
        let mut f = rk4_step(&self.inv, node, du)?;
        f.u = u;
        Ok(f)
    }
}

/// Integrates the frame ODE from `frame0` at `u0` over the whole interval of
/// `inv`, forwards and backwards, with fixed step `step`.
pub fn integrate_frame(inv: &InvariantTriple, u0: f64, frame0: FramePoint, step: f64) -> Result<FrameTrack> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidInput(format!("step must be positive, got {step}")));
    }
    if u0 < inv.u_min || u0 > inv.u_max {
        return Err(Error::OutOfRange { u: u0, lo: inv.u_min, hi: inv.u_max });
    }
    let mut start = frame0;
    start.u = u0;
    start.validate()?;
    inv.values(u0)?;

    let eps = 1e-9;
    let n_fwd = ((inv.u_max - u0) / step + eps).floor() as usize;
    let n_bwd = ((u0 - inv.u_min) / step + eps).floor() as usize;

    let mut backward = Vec::with_capacity(n_bwd);
    let mut cur = start;
    for k in 1..=n_bwd {
        let mut next = rk4_step(inv, &cur, -step)?;
        next.u = u0 - k as f64 * step;
        backward.push(next);
        cur = next;
    }
    let mut nodes: Vec<FramePoint> = backward.into_iter().rev().collect();
    nodes.push(start);
    let mut cur = start;
    for k in 1..=n_fwd {
        let mut next = rk4_step(inv, &cur, step)?;
        next.u = u0 + k as f64 * step;
        nodes.push(next);
        cur = next;
    }
    Ok(FrameTrack { inv: inv.clone(), step, nodes })
}

/// Point of the surface with its Euclidean fundamental quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub u: f64,
    pub v: f64,
    pub x: Vec3,
    pub x_u: Vec3,
    pub x_v: Vec3,
    /// Unit normal `(δ n - v z) / w`.
    pub xi: Vec3,
    /// `sqrt(v² + δ²)`.
    pub w: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
    /// Gaussian curvature `-δ² / w⁴`.
    pub k: f64,
}

/// Evaluates the patch `x = s + v e` and its fundamental quantities.
///
/// The second fundamental form is taken with respect to the unit normal, so
/// `h12 = δ / w` and `det h = -δ² / w²`, consistent with `K = -δ² / w⁴`.
pub fn patch_point(inv: &InvariantTriple, frame: &FramePoint, v: f64) -> Result<SurfacePoint> {
    let u = frame.u;
    let j = inv.jets(u)?;
    let (kappa, delta, ddelta, lambda) = (j.kappa.value, j.delta.value, j.delta.d1, j.lambda.value);
    if delta.abs() < TORSAL_TOL {
        return Err(Error::Torsal { u, delta });
    }
    let w = (v * v + delta * delta).sqrt();
    let s_prime = (frame.e * lambda + frame.z) * delta;
    Ok(SurfacePoint {
        u,
        v,
        x: frame.s + frame.e * v,
        x_u: s_prime + frame.n * v,
        x_v: frame.e,
        xi: (frame.n * delta - frame.z * v) / w,
        w,
        h11: -(kappa * v * v + ddelta * v + delta * delta * (kappa - lambda)) / w,
        h12: delta / w,
        h22: 0.0,
        k: -delta * delta / (w * w * w * w),
    })
}

/// A reconstructed surface: invariants plus their integrated frame.
#[derive(Debug, Clone)]
pub struct Surface {
    track: FrameTrack,
}

impl Surface {
    /// Integrates from the canonical frame at `u_min`.
    pub fn new(inv: InvariantTriple, step: f64) -> Result<Self> {
        let u0 = inv.u_min;
        let track = integrate_frame(&inv, u0, FramePoint::canonical(u0), step)?;
        Ok(Self { track })
    }

    pub fn from_track(track: FrameTrack) -> Self {
        Self { track }
    }

    pub fn invariants(&self) -> &InvariantTriple {
        &self.track.inv
    }

    pub fn track(&self) -> &FrameTrack {
        &self.track
    }

    pub fn frame(&self, u: f64) -> Result<FramePoint> {
        self.track.at(u)
    }

    pub fn point(&self, u: f64, v: f64) -> Result<SurfacePoint> {
        patch_point(&self.track.inv, &self.frame(u)?, v)
    }
}

/// Invariants recovered numerically from frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveredInvariants {
    pub u: f64,
    pub kappa: f64,
    pub delta: f64,
    pub lambda: f64,
}

/// Recovers `κ = (e, e', e'')`, `δ = (s', e, e')` and `λ = <s', e>/δ` from
/// frames on a uniform grid by fourth-order central differences. Values are
/// returned at the interior nodes `2..len-2`.
pub fn recover_invariants(frames: &[FramePoint]) -> Result<Vec<RecoveredInvariants>> {
    if frames.len() < 5 {
        return Err(Error::InvalidInput(format!("need at least 5 frames, got {}", frames.len())));
    }
    for f in frames {
        f.validate()?;
    }
    let h = frames[1].u - frames[0].u;
    if !(h > 0.0) {
        return Err(Error::InvalidInput("frames must be ordered by increasing u".into()));
    }
    for pair in frames.windows(2) {
        let d = pair[1].u - pair[0].u;
        if (d - h).abs() > 1e-9 * h.max(1.0) {
            return Err(Error::InvalidInput(format!("non-uniform grid near u = {}", pair[0].u)));
        }
    }
    let d1 = |get: &dyn Fn(&FramePoint) -> Vec3, k: usize| -> Vec3 {
        (get(&frames[k - 2]) - get(&frames[k - 1]) * 8.0 + get(&frames[k + 1]) * 8.0 - get(&frames[k + 2])) / (12.0 * h)
    };
    let d2 = |get: &dyn Fn(&FramePoint) -> Vec3, k: usize| -> Vec3 {
        (-get(&frames[k - 2]) + get(&frames[k - 1]) * 16.0 - get(&frames[k]) * 30.0 + get(&frames[k + 1]) * 16.0
            - get(&frames[k + 2]))
            / (12.0 * h * h)
    };
    let e_of = |f: &FramePoint| f.e;
    let s_of = |f: &FramePoint| f.s;
    let triple = |a: Vec3, b: Vec3, c: Vec3| Matrix3::from_columns(&[a, b, c]).determinant();

    let mut out = Vec::with_capacity(frames.len() - 4);
    #[allow(clippy::needless_range_loop)]
    for k in 2..frames.len() - 2 {
        let e = frames[k].e;
        let de = d1(&e_of, k);
        let dde = d2(&e_of, k);
        let ds = d1(&s_of, k);
        let kappa = triple(e, de, dde);
        let delta = triple(ds, e, de);
        if delta.abs() < TORSAL_TOL {
            return Err(Error::Torsal { u: frames[k].u, delta });
        }
        out.push(RecoveredInvariants { u: frames[k].u, kappa, delta, lambda: ds.dot(&e) / delta });
    }
    Ok(out)
}
