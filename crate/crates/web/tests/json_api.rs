use ruled_web::{builtin_names_json, builtin_scene_json, gamma_curvature_json, laplace_image_json, surface_mesh_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn scene(name: &str) -> String {
    builtin_scene_json(name).unwrap()
}

#[test]
fn lists_builtins() {
    let names = parse(&builtin_names_json());
    assert_eq!(names.as_array().unwrap().len(), 6);
    assert!(builtin_scene_json("nope").is_err());
}

#[test]
fn surface_mesh_sizes() {
    let m = parse(&surface_mesh_json(&scene("helicoid")).unwrap());
    assert_eq!(m["vertices"].as_array().unwrap().len(), 21 * 21);
    assert_eq!(m["triangles"].as_array().unwrap().len(), 2 * 20 * 20);
    assert_eq!(m["striction"].as_array().unwrap().len(), 21);
}

#[test]
fn laplace_image_verdicts() {
    for (name, verdict) in [("helicoid", "planar-curve"), ("example1", "straight-line"), ("prop2", "point"), ("sect4c", "surface")] {
        let r = parse(&laplace_image_json(&scene(name)).unwrap());
        assert_eq!(r["verdict"], verdict, "{name}");
    }
}

#[test]
fn gamma_curvature_of_the_unit_circle() {
    let r = parse(&gamma_curvature_json(&scene("helicoid")).unwrap());
    for k in r["k"].as_array().unwrap() {
        assert!((k.as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
    assert!(gamma_curvature_json(&scene("prop2")).is_err());
    assert!(gamma_curvature_json("{").is_err());
}
