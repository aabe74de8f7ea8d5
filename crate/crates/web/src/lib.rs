//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string so the page needs no glue beyond
//! `JSON.parse`.

use serde_json::{json, Value};
use spinpair::cluster::{self, ClusterGraph};
use spinpair::concurrence::{energy_estimate_c1, gamma_concurrence, lattice_constants};
use spinpair::report::{self, sig12, ReportConfig};
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Preset ids offered by the page.
#[wasm_bindgen]
pub fn presets() -> String {
    json!([
        "chain:8",
        "chain:10",
        "chain:12",
        "tictactoe:12",
        "tri:10",
        "davidstar:12",
        "complete:6",
        "complete:8",
        "square:4x4",
        "tri:4x4"
    ])
    .to_string()
}

/// Drawing coordinates for each site, roughly unit spacing.
pub fn layout(graph: &ClusterGraph) -> Vec<(f64, f64)> {
    let n = graph.num_sites();
    let h = 3f64.sqrt() / 2.0;
    let circle = |r: f64, k: usize, m: usize, phase: f64| {
        let a = std::f64::consts::TAU * k as f64 / m as f64 + phase;
        (r * a.cos(), r * a.sin())
    };
    match graph.name() {
        "square:4x4" => (0..16).map(|s| ((s % 4) as f64, (s / 4) as f64)).collect(),
        "tri:4x4" => (0..16)
            .map(|s| {
                let (x, y) = (s % 4, s / 4);
                (x as f64 + if y % 2 == 0 { 0.5 } else { 0.0 }, y as f64 * h)
            })
            .collect(),
        "tri:10" => (0..10)
            .map(|s| match s {
                0..=2 => (s as f64 + 0.5, 0.0),
                3..=6 => ((s - 3) as f64, h),
                _ => ((s - 7) as f64 + 0.5, 2.0 * h),
            })
            .collect(),
        "tictactoe:12" => [
            (1, 0),
            (2, 0),
            (0, 1),
            (1, 1),
            (2, 1),
            (3, 1),
            (0, 2),
            (1, 2),
            (2, 2),
            (3, 2),
            (1, 3),
            (2, 3),
        ]
        .iter()
        .map(|&(x, y)| (x as f64, y as f64))
        .collect(),
        // inner hexagon on even sites, tips further out
        "davidstar:12" => (0..12)
            .map(|s| circle(if s % 2 == 0 { 1.0 } else { 1.9 }, s, 12, 0.0))
            .collect(),
        _ => (0..n).map(|s| circle(n as f64 / 4.0, s, n, 0.0)).collect(),
    }
}

fn load(source: &str) -> Result<ClusterGraph, JsValue> {
    let source = source.trim();
    if source.starts_with('{') {
        cluster::load_cluster(source).map_err(js_err)
    } else {
        cluster::preset(source).map_err(js_err)
    }
}

/// Ground state and pair report for a preset id or cluster JSON text.
#[wasm_bindgen]
pub fn cluster_report(source: &str) -> Result<String, JsValue> {
    let graph = load(source)?;
    let rep = report::run_report(&graph, &ReportConfig::default()).map_err(js_err)?;
    let sites: Vec<Value> = layout(&graph)
        .into_iter()
        .map(|(x, y)| json!([x, y]))
        .collect();
    Ok(json!({
        "sites": sites,
        "edges": graph.edges(),
        "report": rep.to_json(),
    })
    .to_string())
}

/// C(m) of the maximal-spin states for m = 0..=n, with the explicit-state
/// check for n ≤ 12.
#[wasm_bindgen]
pub fn dicke_curve(n: usize) -> Result<String, JsValue> {
    let rows = report::dicke_table(n).map_err(js_err)?;
    Ok(report::dicke_json(n, &rows).to_string())
}

/// The Γ rule C(Γ) on [−1/4, 1/4] and the energy estimator C1(|e_g|) for
/// the given bond density, plus the named lattice values.
#[wasm_bindgen]
pub fn estimator_curves(bonds_per_site: f64, points: usize) -> Result<String, JsValue> {
    let points = points.clamp(2, 2000);
    let step = |k: usize| k as f64 / (points - 1) as f64;
    let gamma: Vec<Value> = (0..points)
        .map(|k| {
            let g = -0.25 + 0.5 * step(k);
            Ok(json!([g, gamma_concurrence(g)?]))
        })
        .collect::<spinpair::Result<_>>()
        .map_err(js_err)?;
    // |e_g| cannot exceed 3/4 per bond
    let e_max = 0.75 * bonds_per_site;
    let energy: Vec<Value> = (0..points)
        .map(|k| {
            let e = e_max * step(k);
            Ok(json!([e, energy_estimate_c1(e, bonds_per_site)?]))
        })
        .collect::<spinpair::Result<_>>()
        .map_err(js_err)?;
    let lattices: Vec<Value> = lattice_constants()
        .into_iter()
        .map(|l| {
            Ok(json!({
                "name": l.name,
                "e_g_abs": sig12(l.e_g_abs),
                "bonds_per_site": l.bonds_per_site,
                "c1": sig12(energy_estimate_c1(l.e_g_abs, l.bonds_per_site)?),
            }))
        })
        .collect::<spinpair::Result<_>>()
        .map_err(js_err)?;
    Ok(json!({ "gamma_rule": gamma, "estimator": energy, "lattices": lattices }).to_string())
}
