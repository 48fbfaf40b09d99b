//! Numerical cross-checks that do not share code paths with the closed-form
//! Laplace normal: a finite-difference Laplace–Beltrami operator, and
//! SVD-based rank and fitting helpers.

use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};
use crate::relnorm::SupportField;
use crate::surface::{Surface, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct OracleConfig {
    /// Outer finite-difference step.
    pub fd_step: f64,
    /// Combine steps `h` and `h/2` to cancel the leading error term.
    pub richardson: bool,
    /// Relative threshold for numerical rank decisions.
    pub svd_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { fd_step: 1e-4, richardson: true, svd_tol: 1e-6 }
    }
}

/// `|det G|` below this is treated as a degenerate relative metric.
pub const METRIC_DET_TOL: f64 = 1e-14;

struct Flux {
    f_u: Vec3,
    f_v: Vec3,
    sqrt_det: f64,
}

fn flux(surface: &Surface, support: &SupportField, u: f64, v: f64) -> Result<Flux> {
    let pt = surface.point(u, v)?;
    let j = surface.invariants().jets(u)?;
    let q = support.eval(u, v, j.delta)?.value;
    let g = Matrix2::new(pt.h11, pt.h12, pt.h12, pt.h22) / q;
    let det = g.determinant();
    if det.abs() < METRIC_DET_TOL {
        return Err(Error::Degenerate(format!("relative metric is singular at ({u}, {v})")));
    }
    let gi = g.try_inverse().ok_or_else(|| Error::Degenerate(format!("relative metric is singular at ({u}, {v})")))?;
    let s = det.abs().sqrt();
    Ok(Flux {
        f_u: (pt.x_u * gi[(0, 0)] + pt.x_v * gi[(0, 1)]) * s,
        f_v: (pt.x_u * gi[(1, 0)] + pt.x_v * gi[(1, 1)]) * s,
        sqrt_det: s,
    })
}

fn divergence(surface: &Surface, support: &SupportField, u: f64, v: f64, h: f64) -> Result<Vec3> {
    let weights = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
    let mut acc = Vec3::zeros();
    for (k, c) in weights {
        acc += flux(surface, support, u + k * h, v)?.f_u * c;
        acc += flux(surface, support, u, v + k * h)?.f_v * c;
    }
    Ok(acc / (12.0 * h))
}

/// `Δx / 2` for the relative metric `G = h / q`, computed as
/// `|det G|^{-1/2} ∂_i(|det G|^{1/2} G^{ij} x_j) / 2` with nested central
/// differences. Only the value of `q` is used, never its derivatives.
pub fn laplacian_oracle(surface: &Surface, support: &SupportField, u: f64, v: f64, cfg: &OracleConfig) -> Result<Vec3> {
    let h = cfg.fd_step;
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!("finite-difference step must be positive, got {h}")));
    }
    let inv = surface.invariants();
    if u - 2.0 * h < inv.u_min || u + 2.0 * h > inv.u_max {
        return Err(Error::OutOfRange { u, lo: inv.u_min + 2.0 * h, hi: inv.u_max - 2.0 * h });
    }
    let centre = flux(surface, support, u, v)?;
    let div = if cfg.richardson {
        let coarse = divergence(surface, support, u, v, h)?;
        let fine = divergence(surface, support, u, v, h / 2.0)?;
        (fine * 16.0 - coarse) / 15.0
    } else {
        divergence(surface, support, u, v, h)?
    };
    Ok(div / (2.0 * centre.sqrt_det))
}

fn rows(points: &[Vec3]) -> DMatrix<f64> {
    DMatrix::from_fn(points.len(), 3, |i, j| points[i][j])
}

/// Singular values of the matrix whose rows are `vectors`, in decreasing
/// order and padded with zeros to length three.
pub fn singular_values(vectors: &[Vec3]) -> [f64; 3] {
    if vectors.is_empty() {
        return [0.0; 3];
    }
    let mut s: Vec<f64> = rows(vectors).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    let mut out = [0.0; 3];
    for (o, x) in out.iter_mut().zip(s) {
        *o = x;
    }
    out
}

/// Number of singular values above `tol` times the largest one; zero when
/// the largest is itself below `tol`.
pub fn numerical_rank(vectors: &[Vec3], tol: f64) -> usize {
    let s = singular_values(vectors);
    if s[0] <= tol {
        return 0;
    }
    s.iter().filter(|&&x| x > tol * s[0]).count()
}

/// Total-least-squares fit of a line or plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    pub centroid: Vec3,
    /// Line direction or plane normal; `None` when the samples coincide.
    pub direction: Option<Vec3>,
    /// Discarded singular values relative to the largest one.
    pub residual: f64,
    pub coincident: bool,
}

fn principal(points: &[Vec3]) -> Result<(Vec3, [f64; 3], [Vec3; 3])> {
    if points.len() < 2 {
        return Err(Error::InvalidInput(format!("fit needs at least two samples, got {}", points.len())));
    }
    let centroid = points.iter().fold(Vec3::zeros(), |a, b| a + b) / points.len() as f64;
    let centred: Vec<Vec3> = points.iter().map(|p| p - centroid).collect();
    let svd = rows(&centred).svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::Degenerate("SVD did not converge".into()))?;
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut s = [0.0; 3];
    let mut dirs = [Vec3::zeros(); 3];
    for (k, &i) in idx.iter().enumerate() {
        s[k] = svd.singular_values[i];
        dirs[k] = Vec3::new(v_t[(i, 0)], v_t[(i, 1)], v_t[(i, 2)]);
    }
    // with only two rows the third direction is the complement
    if idx.len() < 3 {
        dirs[2] = dirs[0].cross(&dirs[1]).normalize();
    }
    Ok((centroid, s, dirs))
}

fn coincident(centroid: &Vec3, s: &[f64; 3], n: usize) -> bool {
    s[0] <= 1e-14 * centroid.norm().max(1.0) * (n as f64).sqrt()
}

pub fn fit_line(points: &[Vec3]) -> Result<Fit> {
    let (centroid, s, dirs) = principal(points)?;
    if coincident(&centroid, &s, points.len()) {
        return Ok(Fit { centroid, direction: None, residual: 0.0, coincident: true });
    }
    Ok(Fit { centroid, direction: Some(dirs[0]), residual: s[1].hypot(s[2]) / s[0], coincident: false })
}

pub fn fit_plane(points: &[Vec3]) -> Result<Fit> {
    let (centroid, s, dirs) = principal(points)?;
    if coincident(&centroid, &s, points.len()) {
        return Ok(Fit { centroid, direction: None, residual: 0.0, coincident: true });
    }
    Ok(Fit { centroid, direction: Some(dirs[2]), residual: s[2] / s[0], coincident: false })
}
