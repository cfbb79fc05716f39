use std::fmt::Display;

use serde::Serialize;

use super::graph::ZdGraph;
use crate::ring::FiniteRing;

/// DOT text of the undirected view.
pub fn to_dot<E: Clone + Display>(g: &ZdGraph<E>, name: &str) -> String {
    let mut out = format!("graph \"{}\" {{\n", name.replace('"', "'"));
    for (a, x) in g.vertices().iter().enumerate() {
        out.push_str(&format!("  {a} [label=\"{x}\"];\n"));
    }
    for a in 0..g.len() {
        for b in g.neighbors(a).ones().filter(|&b| b > a) {
            out.push_str(&format!("  {a} -- {b};\n"));
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Serialize)]
pub struct GraphJson {
    pub vertices: Vec<[u64; 4]>,
    pub edges: Vec<[usize; 2]>,
}

/// `{vertices: [coefficient tuples], edges: [[u, v], ...]}` with one
/// undirected edge per pair, `u < v`.
pub fn to_json_value<R: FiniteRing>(ring: &R, g: &ZdGraph<R::Elem>) -> GraphJson {
    let vertices = g.vertices().iter().map(|x| ring.coords(x)).collect();
    let mut edges = Vec::new();
    for a in 0..g.len() {
        edges.extend(g.neighbors(a).ones().filter(|&b| b > a).map(|b| [a, b]));
    }
    GraphJson { vertices, edges }
}

#[derive(Debug, Serialize)]
pub struct GraphStats {
    pub ring: String,
    pub ring_size: u64,
    pub vertices: usize,
    pub directed_edges: usize,
    pub undirected_edges: usize,
    pub reversible: bool,
    pub twin_classes: usize,
}
