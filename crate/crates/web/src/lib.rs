//! WebAssembly bindings for the browser demo. Each operation takes a scene
//! as JSON and returns JSON; the plain functions are usable natively.

use ruled_core::laplace::{classify_image, gamma_curvature, laplace_at};
use ruled_core::scene::{builtin, builtin_names, Scene, SceneConfig};
use ruled_core::surface::Vec3;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

type Out = Result<String, String>;

fn scene(config_json: &str) -> Result<Scene, String> {
    SceneConfig::from_json(config_json).and_then(|c| c.build()).map_err(|e| e.to_string())
}

fn xyz(p: &Vec3) -> Value {
    json!([p.x, p.y, p.z])
}

fn triangles(nu: usize, nv: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(2 * (nu - 1) * (nv - 1));
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            let (a, b, c, d) = (i * nv + j, (i + 1) * nv + j, (i + 1) * nv + j + 1, i * nv + j + 1);
            out.push([a, b, c]);
            out.push([a, c, d]);
        }
    }
    out
}

fn grid_vertices(s: &Scene, point: impl Fn(f64, f64) -> ruled_core::Result<Vec3>) -> Result<Vec<Value>, String> {
    let vs = s.grid().vs();
    let mut out = Vec::new();
    for u in s.grid().us() {
        for &v in &vs {
            out.push(xyz(&point(u, v).map_err(|e| e.to_string())?));
        }
    }
    Ok(out)
}

/// Names of the builtin scenes as a JSON array.
pub fn builtin_names_json() -> String {
    json!(builtin_names().collect::<Vec<_>>()).to_string()
}

/// A builtin scene as pretty-printed JSON.
pub fn builtin_scene_json(name: &str) -> Out {
    builtin(name).map(|c| c.to_json()).ok_or_else(|| format!("unknown scene `{name}`"))
}

/// Triangle mesh of the surface and its striction line.
pub fn surface_mesh_json(config_json: &str) -> Out {
    let s = scene(config_json)?;
    let vertices = grid_vertices(&s, |u, v| s.surface.point(u, v).map(|p| p.x))?;
    let striction: Vec<Value> = s
        .grid()
        .us()
        .into_iter()
        .map(|u| s.surface.frame(u).map(|f| xyz(&f.s)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    Ok(json!({
        "vertices": vertices,
        "triangles": triangles(s.grid().nu, s.grid().nv),
        "striction": striction,
    })
    .to_string())
}

/// Laplace normal image over the grid together with its classification.
pub fn laplace_image_json(config_json: &str) -> Out {
    let s = scene(config_json)?;
    let tol = s.config.tolerances.classify;
    let grid = s.grid().at_least(ruled_core::laplace::MIN_CLASSIFY_SAMPLES);
    let report = classify_image(&s.surface, &s.support, &grid, tol).map_err(|e| e.to_string())?;
    let vertices = grid_vertices(&s, |u, v| laplace_at(&s.surface, &s.support, u, v).map(|l| l.l))?;
    let evidence: Vec<Value> =
        report.evidence.iter().map(|e| json!({ "test": e.test, "value": e.value, "threshold": e.threshold })).collect();
    Ok(json!({
        "verdict": report.verdict.as_str(),
        "evidence": evidence,
        "centroid": report.centroid,
        "direction": report.direction,
        "vertices": vertices,
        "triangles": triangles(s.grid().nu, s.grid().nv),
        "gamma": report.gamma_samples,
    })
    .to_string())
}

/// Curvature of the image curve `Γ(u) = L(u, 0)` of a conoidal surface.
pub fn gamma_curvature_json(config_json: &str) -> Out {
    let s = scene(config_json)?;
    let f = s.conoidal_f().ok_or("the support function must have the form f/w")?;
    let mut us = Vec::new();
    let mut ks = Vec::new();
    let mut points = Vec::new();
    for u in s.grid().us() {
        let k = gamma_curvature(s.invariants(), f, u).map_err(|e| e.to_string())?;
        let l = laplace_at(&s.surface, &s.support, u, 0.0).map_err(|e| e.to_string())?;
        us.push(u);
        ks.push(k);
        points.push(xyz(&l.l));
    }
    Ok(json!({ "u": us, "k": ks, "points": points }).to_string())
}

fn js(r: Out) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = builtinNames)]
pub fn wasm_builtin_names() -> String {
    builtin_names_json()
}

#[wasm_bindgen(js_name = builtinScene)]
pub fn wasm_builtin_scene(name: &str) -> Result<String, JsValue> {
    js(builtin_scene_json(name))
}

#[wasm_bindgen(js_name = surfaceMesh)]
pub fn wasm_surface_mesh(config_json: &str) -> Result<String, JsValue> {
    js(surface_mesh_json(config_json))
}

#[wasm_bindgen(js_name = laplaceImage)]
pub fn wasm_laplace_image(config_json: &str) -> Result<String, JsValue> {
    js(laplace_image_json(config_json))
}

#[wasm_bindgen(js_name = gammaCurvature)]
pub fn wasm_gamma_curvature(config_json: &str) -> Result<String, JsValue> {
    js(gamma_curvature_json(config_json))
}
