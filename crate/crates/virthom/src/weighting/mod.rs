//! Weightings on labelled transition digraphs and their expansion into
//! rose coverings.
//!
//! A weighting assigns strictly positive weights to vertices and edges so
//! that for every vertex and every label, the `s`-labelled edges leaving the
//! vertex sum to its weight, and the `s`-labelled edges entering it do too.
//! Integer weightings expand into finite covers of the rose: `w(v)` vertex
//! copies, `w(e)` edge copies, glued by seeded bijections.

mod haar;
pub mod solver;

pub use haar::{haar_weighting, HaarMode};

use crate::ratio::{denominator_lcm, format_ratio, is_integral};
use crate::rose::{CoverProjection, RoseCover, RoseError};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum WeightingError {
    #[error("vertex {vertex} out of range ({num_vertices} vertices)")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },
    #[error("label {label} out of range ({num_labels} labels)")]
    LabelOutOfRange { label: usize, num_labels: usize },
    #[error("duplicate edge {src} -> {dst} with label {label}")]
    DuplicateEdge { src: usize, dst: usize, label: usize },
    #[error("digraph admits no weighting: {0} degree condition(s) violated")]
    InvalidDigraph(usize),
    #[error("no strictly positive weighting exists")]
    Infeasible,
    #[error("weighting shape does not match the digraph")]
    ShapeMismatch,
    #[error("weights must be strictly positive")]
    NotPositive,
    #[error("weights must be integers")]
    NotIntegral,
    #[error("weighting is not balanced (max residual {0})")]
    NotBalanced(String),
    #[error("total vertex weight {0} exceeds the expansion cap {1}")]
    TooLarge(String, usize),
    #[error("Monte Carlo sampling produced a zero estimate for edge {edge}; increase samples")]
    ZeroEdgeEstimate { edge: usize },
    #[error("digraph edges do not match the measured transitions: edge {edge} has zero measure")]
    ZeroMeasureEdge { edge: usize },
    #[error(transparent)]
    Rose(#[from] RoseError),
}

/// Largest permitted total fiber size for cover expansion.
pub const EXPANSION_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct YEdge {
    pub src: usize,
    pub dst: usize,
    pub label: usize,
}

/// Finite oriented graph with `S`-labelled edges, at most one edge per
/// `(src, dst, label)` triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDigraph {
    num_vertices: usize,
    num_labels: usize,
    edges: Vec<YEdge>,
}

/// A vertex missing an outgoing or incoming edge for some label; such a
/// digraph admits no strictly positive weighting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeViolation {
    pub vertex: usize,
    pub label: usize,
    pub outgoing: bool,
}

impl LabeledDigraph {
    pub fn new(num_vertices: usize, num_labels: usize) -> LabeledDigraph {
        LabeledDigraph {
            num_vertices,
            num_labels,
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, label: usize) -> Result<usize, WeightingError> {
        if src >= self.num_vertices || dst >= self.num_vertices {
            return Err(WeightingError::VertexOutOfRange {
                vertex: src.max(dst),
                num_vertices: self.num_vertices,
            });
        }
        if label >= self.num_labels {
            return Err(WeightingError::LabelOutOfRange {
                label,
                num_labels: self.num_labels,
            });
        }
        if self
            .edges
            .iter()
            .any(|e| e.src == src && e.dst == dst && e.label == label)
        {
            return Err(WeightingError::DuplicateEdge { src, dst, label });
        }
        self.edges.push(YEdge { src, dst, label });
        Ok(self.edges.len() - 1)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn edges(&self) -> &[YEdge] {
        &self.edges
    }

    pub fn edges_out(&self, v: usize, label: usize) -> impl Iterator<Item = (usize, &YEdge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.src == v && e.label == label)
    }

    pub fn edges_in(&self, v: usize, label: usize) -> impl Iterator<Item = (usize, &YEdge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.dst == v && e.label == label)
    }

    /// Vertices lacking an outgoing or incoming edge for some label.
    pub fn degree_violations(&self) -> Vec<DegreeViolation> {
        let mut out = vec![vec![0usize; self.num_labels]; self.num_vertices];
        let mut inc = vec![vec![0usize; self.num_labels]; self.num_vertices];
        for e in &self.edges {
            out[e.src][e.label] += 1;
            inc[e.dst][e.label] += 1;
        }
        let mut violations = Vec::new();
        for v in 0..self.num_vertices {
            for label in 0..self.num_labels {
                if out[v][label] == 0 {
                    violations.push(DegreeViolation {
                        vertex: v,
                        label,
                        outgoing: true,
                    });
                }
                if inc[v][label] == 0 {
                    violations.push(DegreeViolation {
                        vertex: v,
                        label,
                        outgoing: false,
                    });
                }
            }
        }
        violations
    }
}

/// Strictly positive rational weights on vertices and edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weighting {
    pub vertex: Vec<BigRational>,
    pub edge: Vec<BigRational>,
}

impl Weighting {
    pub fn matches(&self, y: &LabeledDigraph) -> bool {
        self.vertex.len() == y.num_vertices() && self.edge.len() == y.edges().len()
    }

    pub fn is_positive(&self) -> bool {
        self.vertex.iter().chain(self.edge.iter()).all(|w| w.is_positive())
    }

    pub fn is_integral(&self) -> bool {
        self.vertex.iter().chain(self.edge.iter()).all(is_integral)
    }

    /// Multiplies every weight by the least common multiple of all
    /// denominators, producing an integer weighting.
    pub fn clear_denominators(&self) -> Weighting {
        let lcm = denominator_lcm(self.vertex.iter().chain(self.edge.iter()));
        let factor = BigRational::from_integer(lcm);
        Weighting {
            vertex: self.vertex.iter().map(|w| w * &factor).collect(),
            edge: self.edge.iter().map(|w| w * &factor).collect(),
        }
    }

    pub fn total_vertex_weight(&self) -> BigRational {
        self.vertex.iter().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn total_edge_weight(&self) -> BigRational {
        self.edge.iter().fold(BigRational::zero(), |a, b| a + b)
    }
}

/// One balance constraint residual: (sum of `label`-edges in `direction` at
/// `vertex`) minus the vertex weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual {
    pub vertex: usize,
    pub label: usize,
    pub outgoing: bool,
    pub residual: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    pub residuals: Vec<Residual>,
    pub max_abs_residual: BigRational,
}

impl BalanceReport {
    pub fn is_exactly_balanced(&self) -> bool {
        self.max_abs_residual.is_zero()
    }
}

/// Exhaustive per-(vertex, label, direction) balance residuals.
pub fn verify_weighting(y: &LabeledDigraph, w: &Weighting) -> Result<BalanceReport, WeightingError> {
    if !w.matches(y) {
        return Err(WeightingError::ShapeMismatch);
    }
    let mut residuals = Vec::new();
    let mut max_abs = BigRational::zero();
    for v in 0..y.num_vertices() {
        for label in 0..y.num_labels() {
            for outgoing in [true, false] {
                let sum = if outgoing {
                    y.edges_out(v, label)
                        .map(|(i, _)| w.edge[i].clone())
                        .fold(BigRational::zero(), |a, b| a + b)
                } else {
                    y.edges_in(v, label)
                        .map(|(i, _)| w.edge[i].clone())
                        .fold(BigRational::zero(), |a, b| a + b)
                };
                let residual = sum - &w.vertex[v];
                let abs = crate::ratio::abs(&residual);
                if abs > max_abs {
                    max_abs = abs;
                }
                residuals.push(Residual {
                    vertex: v,
                    label,
                    outgoing,
                    residual,
                });
            }
        }
    }
    Ok(BalanceReport {
        residuals,
        max_abs_residual: max_abs,
    })
}

/// All-ones edge weighting, valid exactly when every vertex has the same
/// in- and out-degree for every label. This is the unique minimum-total
/// weighting in that case, since every edge sits at its lower bound.
fn uniform_degree_weighting(y: &LabeledDigraph) -> Option<Weighting> {
    let mut out = vec![vec![0usize; y.num_labels()]; y.num_vertices()];
    let mut inc = vec![vec![0usize; y.num_labels()]; y.num_vertices()];
    for e in y.edges() {
        out[e.src][e.label] += 1;
        inc[e.dst][e.label] += 1;
    }
    let mut vertex = Vec::with_capacity(y.num_vertices());
    for v in 0..y.num_vertices() {
        let d = out[v][0];
        for label in 0..y.num_labels() {
            if out[v][label] != d || inc[v][label] != d {
                return None;
            }
        }
        vertex.push(BigRational::from_integer(d.into()));
    }
    Some(Weighting {
        vertex,
        edge: vec![BigRational::one(); y.edges().len()],
    })
}

/// Smallest-total strictly positive integer weighting on `y`.
///
/// Solves the balance equations over exact rationals with every edge weight
/// bounded below by 1 (any positive weighting rescales to one of these),
/// minimizing total edge weight with a deterministic pivot rule, then clears
/// denominators.
pub fn solve_integer_weighting(y: &LabeledDigraph) -> Result<Weighting, WeightingError> {
    let violations = y.degree_violations();
    if !violations.is_empty() {
        return Err(WeightingError::InvalidDigraph(violations.len()));
    }
    if let Some(w) = uniform_degree_weighting(y) {
        return Ok(w);
    }

    // Shifted variables x_e = w_e - 1 >= 0. For each vertex the label-0
    // outgoing sum plays the role of the vertex weight.
    let num_edges = y.edges().len();
    let mut out_deg = vec![vec![0i64; y.num_labels()]; y.num_vertices()];
    let mut in_deg = vec![vec![0i64; y.num_labels()]; y.num_vertices()];
    for e in y.edges() {
        out_deg[e.src][e.label] += 1;
        in_deg[e.dst][e.label] += 1;
    }
    let mut constraints: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
    for v in 0..y.num_vertices() {
        let base: Vec<(usize, i64)> = y.edges_out(v, 0).map(|(i, _)| (i, -1i64)).collect();
        for label in 0..y.num_labels() {
            for outgoing in [true, false] {
                if label == 0 && outgoing {
                    continue;
                }
                let mut coeffs = vec![BigRational::zero(); num_edges];
                for &(i, c) in &base {
                    coeffs[i] += BigRational::from_integer(c.into());
                }
                let it: Vec<usize> = if outgoing {
                    y.edges_out(v, label).map(|(i, _)| i).collect()
                } else {
                    y.edges_in(v, label).map(|(i, _)| i).collect()
                };
                for i in it {
                    coeffs[i] += BigRational::one();
                }
                let degree = if outgoing {
                    out_deg[v][label]
                } else {
                    in_deg[v][label]
                };
                let rhs = BigRational::from_integer((out_deg[v][0] - degree).into());
                constraints.push((coeffs, rhs));
            }
        }
    }
    let objective = vec![BigRational::one(); num_edges];
    match solver::solve_min(num_edges, &constraints, &objective) {
        solver::LpResult::Infeasible => Err(WeightingError::Infeasible),
        // Total weight is bounded below by the edge count, so the LP cannot
        // be unbounded; treat it as infeasibility of the model.
        solver::LpResult::Unbounded => Err(WeightingError::Infeasible),
        solver::LpResult::Optimal { x, .. } => {
            let one = BigRational::one();
            let edge: Vec<BigRational> = x.iter().map(|v| v + &one).collect();
            let mut vertex = Vec::with_capacity(y.num_vertices());
            for v in 0..y.num_vertices() {
                let s = y
                    .edges_out(v, 0)
                    .map(|(i, _)| edge[i].clone())
                    .fold(BigRational::zero(), |a, b| a + b);
                vertex.push(s);
            }
            Ok(Weighting { vertex, edge }.clear_denominators())
        }
    }
}

/// Expansion of an integer-weighted digraph into a covering of the rose.
#[derive(Debug, Clone)]
pub struct CoverExpansion {
    pub cover: RoseCover,
    pub projection: CoverProjection,
    /// Fiber total before discarding everything but the basepoint component.
    pub total_vertices_before_pruning: usize,
}

impl CoverExpansion {
    /// True when no pruning happened, i.e. fiber sizes match the weighting.
    pub fn is_full_cover(&self) -> bool {
        self.cover.num_vertices() == self.total_vertices_before_pruning
    }
}

/// Expands `(y, w)` into a rose covering: `w(v)` vertices over `v`, `w(e)`
/// edges over `e`, endpoints glued by seeded bijections. Only the component
/// of the basepoint (the first vertex over `base_vertex`) is retained.
pub fn expand_cover(
    y: &LabeledDigraph,
    w: &Weighting,
    base_vertex: usize,
    seed: u64,
) -> Result<CoverExpansion, WeightingError> {
    if !w.matches(y) {
        return Err(WeightingError::ShapeMismatch);
    }
    if base_vertex >= y.num_vertices() {
        return Err(WeightingError::VertexOutOfRange {
            vertex: base_vertex,
            num_vertices: y.num_vertices(),
        });
    }
    if !w.is_positive() {
        return Err(WeightingError::NotPositive);
    }
    if !w.is_integral() {
        return Err(WeightingError::NotIntegral);
    }
    let balance = verify_weighting(y, w)?;
    if !balance.is_exactly_balanced() {
        return Err(WeightingError::NotBalanced(format_ratio(
            &balance.max_abs_residual,
        )));
    }
    let total = w.total_vertex_weight();
    let cap = BigRational::from_integer(EXPANSION_CAP.into());
    if total > cap {
        return Err(WeightingError::TooLarge(format_ratio(&total), EXPANSION_CAP));
    }

    let fiber: Vec<usize> = w
        .vertex
        .iter()
        .map(|v| usize::try_from(v.to_integer()).expect("capped above"))
        .collect();
    let copies: Vec<usize> = w
        .edge
        .iter()
        .map(|v| usize::try_from(v.to_integer()).expect("balanced, so bounded by cap"))
        .collect();
    let mut offset = Vec::with_capacity(y.num_vertices());
    let mut acc = 0usize;
    for &f in &fiber {
        offset.push(acc);
        acc += f;
    }
    let total_vertices = acc;

    // Initial and terminal vertex of every edge copy, chosen by one seeded
    // shuffle per (vertex, label, direction) in a fixed iteration order.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut init_of: Vec<Vec<usize>> = copies.iter().map(|&c| vec![usize::MAX; c]).collect();
    let mut term_of: Vec<Vec<usize>> = copies.iter().map(|&c| vec![usize::MAX; c]).collect();
    for v in 0..y.num_vertices() {
        for label in 0..y.num_labels() {
            for outgoing in [true, false] {
                let mut slots: Vec<usize> = (0..fiber[v]).collect();
                slots.shuffle(&mut rng);
                let edge_ids: Vec<usize> = if outgoing {
                    y.edges_out(v, label).map(|(i, _)| i).collect()
                } else {
                    y.edges_in(v, label).map(|(i, _)| i).collect()
                };
                let mut pos = 0usize;
                for i in edge_ids {
                    for c in 0..copies[i] {
                        let x_vertex = offset[v] + slots[pos];
                        pos += 1;
                        if outgoing {
                            init_of[i][c] = x_vertex;
                        } else {
                            term_of[i][c] = x_vertex;
                        }
                    }
                }
                debug_assert_eq!(pos, fiber[v]);
            }
        }
    }

    let num_labels = y.num_labels();
    let mut out_perm = vec![vec![usize::MAX; total_vertices]; num_labels];
    let mut edge_image = vec![vec![usize::MAX; total_vertices]; num_labels];
    for (i, e) in y.edges().iter().enumerate() {
        for c in 0..copies[i] {
            let a = init_of[i][c];
            let b = term_of[i][c];
            out_perm[e.label][a] = b;
            edge_image[e.label][a] = i;
        }
    }

    let full = RoseCover::new(total_vertices, offset[base_vertex], out_perm.clone())?;
    // Discard all but the basepoint component, keeping original vertex order.
    let mut keep = vec![false; total_vertices];
    let mut queue = std::collections::VecDeque::new();
    keep[full.basepoint()] = true;
    queue.push_back(full.basepoint());
    while let Some(v) = queue.pop_front() {
        for gen in 0..num_labels {
            for nxt in [full.out_target(gen, v), full.in_source(gen, v)] {
                if !keep[nxt] {
                    keep[nxt] = true;
                    queue.push_back(nxt);
                }
            }
        }
    }
    let mut relabel = vec![usize::MAX; total_vertices];
    let mut kept = 0usize;
    for v in 0..total_vertices {
        if keep[v] {
            relabel[v] = kept;
            kept += 1;
        }
    }
    let mut pruned_perm = vec![vec![usize::MAX; kept]; num_labels];
    let mut pruned_edges = vec![vec![usize::MAX; kept]; num_labels];
    let mut vertex_map = vec![usize::MAX; kept];
    for v in 0..total_vertices {
        if !keep[v] {
            continue;
        }
        let nv = relabel[v];
        let y_vertex = match offset.binary_search(&v) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        vertex_map[nv] = y_vertex;
        for gen in 0..num_labels {
            pruned_perm[gen][nv] = relabel[out_perm[gen][v]];
            pruned_edges[gen][nv] = edge_image[gen][v];
        }
    }
    let cover = RoseCover::new(kept, relabel[full.basepoint()], pruned_perm)?;
    Ok(CoverExpansion {
        cover,
        projection: CoverProjection {
            vertex_map,
            edge_map: pruned_edges,
        },
        total_vertices_before_pruning: total_vertices,
    })
}

/// JSON form of a labelled digraph; labels are named and sorted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DigraphData {
    pub num_vertices: usize,
    pub labels: Vec<String>,
    pub edges: Vec<DigraphEdgeData>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DigraphEdgeData {
    pub src: usize,
    pub dst: usize,
    pub label: String,
}

impl DigraphData {
    pub fn build(&self) -> Result<LabeledDigraph, WeightingError> {
        let mut y = LabeledDigraph::new(self.num_vertices, self.labels.len());
        for e in &self.edges {
            let label = self
                .labels
                .iter()
                .position(|l| *l == e.label)
                .ok_or(WeightingError::LabelOutOfRange {
                    label: usize::MAX,
                    num_labels: self.labels.len(),
                })?;
            y.add_edge(e.src, e.dst, label)?;
        }
        Ok(y)
    }

    pub fn from_graph(y: &LabeledDigraph, labels: &[String]) -> DigraphData {
        DigraphData {
            num_vertices: y.num_vertices(),
            labels: labels.to_vec(),
            edges: y
                .edges()
                .iter()
                .map(|e| DigraphEdgeData {
                    src: e.src,
                    dst: e.dst,
                    label: labels[e.label].clone(),
                })
                .collect(),
        }
    }
}

/// JSON form of a weighting: exact values as `p` or `p/q` strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightingData {
    pub vertex: Vec<String>,
    pub edge: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub provenance: BTreeMap<String, String>,
}

impl WeightingData {
    pub fn from_weighting(w: &Weighting) -> WeightingData {
        WeightingData {
            vertex: w.vertex.iter().map(format_ratio).collect(),
            edge: w.edge.iter().map(format_ratio).collect(),
            provenance: BTreeMap::new(),
        }
    }

    pub fn build(&self) -> Option<Weighting> {
        let vertex = self
            .vertex
            .iter()
            .map(|s| crate::ratio::parse_ratio(s))
            .collect::<Option<Vec<_>>>()?;
        let edge = self
            .edge
            .iter()
            .map(|s| crate::ratio::parse_ratio(s))
            .collect::<Option<Vec<_>>>()?;
        Some(Weighting { vertex, edge })
    }
}
