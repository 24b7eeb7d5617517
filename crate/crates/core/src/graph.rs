//! Inverse-matching graphs and DOT rendering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{inv, Guard, IrreduciblePoly};
use crate::loops::ClosedLoop;
use crate::poly::{ElementIndex, Poly};

/// Undirected edge `u <= v`, tagged with a one-based basis position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: u64,
    pub v: u64,
    pub basis: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingGraph {
    pub p: u32,
    pub n: usize,
    pub bases: Vec<IrreduciblePoly>,
    pub vertices: Vec<u64>,
    pub edges: Vec<Edge>,
}

/// The inverse matching of a single basis.
pub fn build_matching(f: &IrreduciblePoly, include_constants: bool, guard: Guard) -> Result<MatchingGraph> {
    build_union(std::slice::from_ref(f), include_constants, guard)
}

/// Union of the inverse matchings of several bases, edges tagged 1, 2, ...
pub fn build_union(
    bases: &[IrreduciblePoly],
    include_constants: bool,
    guard: Guard,
) -> Result<MatchingGraph> {
    let first = bases.first().ok_or(Error::EmptySchedule)?;
    crate::chain::BasisSchedule::new(bases.to_vec())?;
    let p = first.prime();
    let q = first.field_size(guard)?;
    let lo = if include_constants { 1 } else { p.get() as u64 };
    let vertices: Vec<u64> = (lo..q).collect();
    let mut edges = Vec::new();
    for (b, f) in bases.iter().enumerate() {
        for &u in &vertices {
            let v = inv(&Poly::from_index(p, ElementIndex(u)), f)?.index().0;
            if u <= v {
                edges.push(Edge { u, v, basis: b + 1 });
            }
        }
    }
    edges.sort_by_key(|e| (e.basis, e.u, e.v));
    Ok(MatchingGraph {
        p: p.get(),
        n: first.degree(),
        bases: bases.to_vec(),
        vertices,
        edges,
    })
}

impl MatchingGraph {
    /// Vertex degrees; a self-loop counts once.
    pub fn degrees(&self) -> BTreeMap<u64, usize> {
        let mut deg: BTreeMap<u64, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for e in &self.edges {
            *deg.entry(e.u).or_default() += 1;
            if e.u != e.v {
                *deg.entry(e.v).or_default() += 1;
            }
        }
        deg
    }

    pub fn self_loops(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self.edges.iter().filter(|e| e.u == e.v).map(|e| e.u).collect();
        out.dedup();
        out
    }

    /// Decomposes a two-basis union into alternating cycles, each starting at
    /// its minimum vertex and leaving along its basis-1 edge. Returns `None`
    /// unless every vertex meets exactly one edge of each basis.
    pub fn alternating_cycles(&self) -> Option<Vec<Vec<u64>>> {
        let mut partner: [BTreeMap<u64, u64>; 2] = [BTreeMap::new(), BTreeMap::new()];
        for e in &self.edges {
            let side = partner.get_mut(e.basis.checked_sub(1)?)?;
            let fresh = side.insert(e.u, e.v).is_none();
            let fresh_back = e.u == e.v || side.insert(e.v, e.u).is_none();
            if !(fresh && fresh_back) {
                return None;
            }
        }
        if self.vertices.iter().any(|v| !partner[0].contains_key(v) || !partner[1].contains_key(v)) {
            return None;
        }
        let mut seen = BTreeSet::new();
        let mut cycles = Vec::new();
        for &start in &self.vertices {
            if seen.contains(&start) {
                continue;
            }
            let mut cycle = Vec::new();
            let (mut cur, mut side) = (start, 0);
            loop {
                if !seen.insert(cur) {
                    return None;
                }
                cycle.push(cur);
                cur = partner[side][&cur];
                side = 1 - side;
                if cur == start {
                    if side != 0 {
                        return None;
                    }
                    break;
                }
            }
            cycles.push(cycle);
        }
        Some(cycles)
    }
}

const COLORS: [&str; 6] = ["blue", "red", "darkgreen", "orange", "purple", "brown"];
const STYLES: [&str; 3] = ["solid", "dashed", "dotted"];

fn edge_attrs(basis: usize) -> String {
    let i = basis - 1;
    format!(
        "color={}, style={}",
        COLORS[i % COLORS.len()],
        STYLES[i % STYLES.len()]
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotOptions {
    pub name: String,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions {
            name: "ffchain".to_string(),
        }
    }
}

pub enum DotSource<'a> {
    Graph(&'a MatchingGraph),
    Loop(&'a ClosedLoop),
}

pub fn export_dot(source: DotSource<'_>, options: &DotOptions) -> String {
    match source {
        DotSource::Graph(g) => graph_dot(g, options),
        DotSource::Loop(l) => loop_dot(l, options),
    }
}

fn node_line(out: &mut String, p: u32, n: usize, v: u64, extra: &str) {
    let prime = crate::Prime::new(p as u64).expect("graph built from a valid prime");
    let label = Poly::from_index(prime, ElementIndex(v)).digit_string(n);
    let _ = writeln!(out, "  \"{v}\" [label=\"{label}\", tooltip=\"#{v}\"{extra}];");
}

fn graph_dot(g: &MatchingGraph, options: &DotOptions) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{}\" {{", options.name);
    let _ = writeln!(out, "  node [shape=circle];");
    for &v in &g.vertices {
        node_line(&mut out, g.p, g.n, v, "");
    }
    for e in &g.edges {
        let _ = writeln!(out, "  \"{}\" -- \"{}\" [{}];", e.u, e.v, edge_attrs(e.basis));
    }
    out.push_str("}\n");
    out
}

fn loop_dot(l: &ClosedLoop, options: &DotOptions) -> String {
    let p = l.schedule.prime().get();
    let n = l.schedule.degree();
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", options.name);
    let _ = writeln!(out, "  node [shape=circle];");
    for (v, steps) in l.visits() {
        let names: Vec<String> = steps.iter().map(|s| format!("a{s}")).collect();
        node_line(&mut out, p, n, v.0, &format!(", xlabel=\"{}\"", names.join(",")));
    }
    for i in 1..=l.k() {
        let from = l.elements[i - 1].index().0;
        let to = l.elements[i].index().0;
        let basis = l.schedule.phase_of_step(i) + 1;
        let _ = writeln!(out, "  \"{from}\" -> \"{to}\" [{}];", edge_attrs(basis));
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Serialize)]
struct EdgeJson {
    u: String,
    v: String,
    basis_index: usize,
}

#[derive(Debug, Serialize)]
struct GraphJson {
    p: u32,
    n: usize,
    bases: Vec<String>,
    vertices: Vec<String>,
    edges: Vec<EdgeJson>,
}

/// JSON mirror of a graph's vertex and edge lists, in indexed encoding.
pub fn graph_json(g: &MatchingGraph) -> serde_json::Value {
    let doc = GraphJson {
        p: g.p,
        n: g.n,
        bases: g.bases.iter().map(|f| f.index().to_string()).collect(),
        vertices: g.vertices.iter().map(|&v| ElementIndex(v).to_string()).collect(),
        edges: g
            .edges
            .iter()
            .map(|e| EdgeJson {
                u: ElementIndex(e.u).to_string(),
                v: ElementIndex(e.v).to_string(),
                basis_index: e.basis,
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("plain data serializes")
}
