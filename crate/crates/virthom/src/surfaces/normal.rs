//! Normal-surface synthesis from a vertex set: boundary edge sets, face
//! parity, specified arcs and discs, cell counts, and the count-bound
//! constants.
//!
//! For a set `A` of skeleton vertices, the midpoints of the boundary edges
//! are the 0-cells; every face containing boundary edges contains exactly
//! two and contributes the arc joining their midpoints; every tetrahedron
//! meeting the boundary has three or four of its edges in it and
//! contributes a triangular or quadrilateral disc. The union of the discs
//! is a closed surface separating `A` from its complement.

use super::triangulation::{SkeletonGraph, Triangulation, TET_EDGES};
use num_rational::Rational64;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("vertex set must be a nonempty set of skeleton vertices")]
    EmptyVertexSet,
    #[error("vertex {vertex} out of range ({num_vertices} skeleton vertices)")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },
    #[error("face parity violated on {0} face(s); input data is inconsistent")]
    ParityViolation(usize),
    #[error("tetrahedron {tet} meets {count} boundary edges; only 0, 3 or 4 are possible")]
    ImpossibleEdgeCount { tet: usize, count: usize },
}

/// A nonempty finite set of skeleton vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    members: BTreeSet<usize>,
}

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(
        members: I,
        num_vertices: usize,
    ) -> Result<VertexSet, SurfaceError> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if members.is_empty() {
            return Err(SurfaceError::EmptyVertexSet);
        }
        if let Some(&v) = members.iter().find(|&&v| v >= num_vertices) {
            return Err(SurfaceError::VertexOutOfRange {
                vertex: v,
                num_vertices,
            });
        }
        Ok(VertexSet { members })
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }
}

/// Indices of edges with exactly one endpoint in `A`. Loops never qualify.
pub fn boundary_set(graph: &SkeletonGraph, a: &VertexSet) -> Vec<usize> {
    graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| a.contains(u) != a.contains(v))
        .map(|(i, _)| i)
        .collect()
}

#[derive(Debug, Clone)]
pub struct ParityReport {
    pub faces_checked: usize,
    /// `(face class, boundary-edge count)` for faces with a count other
    /// than 0 or 2; empty for consistent triangulations.
    pub violations: Vec<(usize, usize)>,
}

impl ParityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Is an edge class in the boundary of `A`? Evaluated through the endpoint
/// vertex classes.
fn edge_in_boundary(tri: &Triangulation, a: &VertexSet, tet: usize, u: usize, v: usize) -> bool {
    a.contains(tri.corner_class(tet, u)) != a.contains(tri.corner_class(tet, v))
}

/// Every face of the triangulation must contain 0 or 2 boundary edges.
pub fn face_parity_check(tri: &Triangulation, a: &VertexSet) -> ParityReport {
    let mut violations = Vec::new();
    let reps = tri.face_representatives();
    for (class, &(tet, face)) in reps.iter().enumerate() {
        let corners: Vec<usize> = (0..4).filter(|&c| c != face).collect();
        let mut count = 0;
        for i in 0..3 {
            for j in i + 1..3 {
                if edge_in_boundary(tri, a, tet, corners[i], corners[j]) {
                    count += 1;
                }
            }
        }
        if count != 0 && count != 2 {
            violations.push((class, count));
        }
    }
    ParityReport {
        faces_checked: reps.len(),
        violations,
    }
}

/// The seven closed normal curves in the boundary of a tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveType {
    /// Links one vertex; bounds a triangular disc.
    Triangle { vertex: usize },
    /// Separates one corner pair from the complementary pair; bounds a
    /// quadrilateral disc. The pair containing corner 0 is stored.
    Quad { pair: (usize, usize) },
}

/// Exactly seven types: four vertex-linking triangles and the three ways
/// to split the corners into two pairs.
pub fn enumerate_normal_curve_types() -> Vec<CurveType> {
    let mut out: Vec<CurveType> = (0..4).map(|vertex| CurveType::Triangle { vertex }).collect();
    for other in 1..4 {
        out.push(CurveType::Quad { pair: (0, other) });
    }
    out
}

/// One disc of the synthesized surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscCell {
    pub tet: usize,
    pub kind: CurveType,
}

/// The synthesized normal surface as a cell complex.
#[derive(Debug, Clone)]
pub struct NormalSurfaceComplex {
    /// Edge classes in the boundary of `A`; their midpoints are the 0-cells.
    pub zero_cells: Vec<usize>,
    /// One specified normal arc per face class containing boundary edges:
    /// `(face class, zero-cell index, zero-cell index)`.
    pub one_cells: Vec<(usize, usize, usize)>,
    pub two_cells: Vec<DiscCell>,
}

impl NormalSurfaceComplex {
    pub fn counts(&self) -> CellCounts {
        CellCounts {
            zero_cells: self.zero_cells.len(),
            one_cells: self.one_cells.len(),
            two_cells: self.two_cells.len(),
        }
    }

    /// Euler characteristic of the surface.
    pub fn euler_characteristic(&self) -> i64 {
        self.zero_cells.len() as i64 - self.one_cells.len() as i64 + self.two_cells.len() as i64
    }

    /// Connected components through shared 0-cells.
    pub fn num_components(&self) -> usize {
        let n = self.zero_cells.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for &(_, a, b) in &self.one_cells {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        (0..n).filter(|&x| find(&mut parent, x) == x).count()
    }

    /// First Betti number of a closed orientable surface complex:
    /// `2 * components - euler characteristic`.
    pub fn b1(&self) -> i64 {
        2 * self.num_components() as i64 - self.euler_characteristic()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellCounts {
    pub zero_cells: usize,
    pub one_cells: usize,
    pub two_cells: usize,
}

/// Builds the surface determined by `A`: arcs in parity-2 faces, one
/// triangle or quadrilateral per tetrahedron meeting the boundary.
pub fn build_surface(
    tri: &Triangulation,
    a: &VertexSet,
) -> Result<NormalSurfaceComplex, SurfaceError> {
    let parity = face_parity_check(tri, a);
    if !parity.is_clean() {
        return Err(SurfaceError::ParityViolation(parity.violations.len()));
    }
    // 0-cells: boundary edge classes (sorted).
    let mut zero_set = BTreeSet::new();
    for t in 0..tri.num_tetrahedra() {
        for (u, v) in TET_EDGES {
            if edge_in_boundary(tri, a, t, u, v) {
                zero_set.insert(tri.edge_class(t, u, v));
            }
        }
    }
    let zero_cells: Vec<usize> = zero_set.iter().copied().collect();
    let zero_index = |class: usize| zero_cells.binary_search(&class).expect("present");

    // 1-cells: one arc per face class with two boundary edges.
    let mut one_cells = Vec::new();
    for (class, &(tet, face)) in tri.face_representatives().iter().enumerate() {
        let corners: Vec<usize> = (0..4).filter(|&c| c != face).collect();
        let mut hits = Vec::new();
        for i in 0..3 {
            for j in i + 1..3 {
                if edge_in_boundary(tri, a, tet, corners[i], corners[j]) {
                    hits.push(tri.edge_class(tet, corners[i], corners[j]));
                }
            }
        }
        if hits.len() == 2 {
            one_cells.push((class, zero_index(hits[0]), zero_index(hits[1])));
        }
    }

    // 2-cells: by the membership pattern of each tetrahedron's corners.
    let mut two_cells = Vec::new();
    for t in 0..tri.num_tetrahedra() {
        let inside: Vec<bool> = (0..4).map(|c| a.contains(tri.corner_class(t, c))).collect();
        let boundary_edges = TET_EDGES
            .iter()
            .filter(|&&(u, v)| edge_in_boundary(tri, a, t, u, v))
            .count();
        let in_count = inside.iter().filter(|&&x| x).count();
        match boundary_edges {
            0 => {}
            3 => {
                // One corner cut off: the lone corner on its own side.
                let lone = if in_count == 1 {
                    inside.iter().position(|&x| x).expect("one inside")
                } else {
                    inside.iter().position(|&x| !x).expect("one outside")
                };
                two_cells.push(DiscCell {
                    tet: t,
                    kind: CurveType::Triangle { vertex: lone },
                });
            }
            4 => {
                // Two corners on each side; store the pair containing 0.
                let mate = (1..4)
                    .find(|&c| inside[c] == inside[0])
                    .expect("2+2 split");
                two_cells.push(DiscCell {
                    tet: t,
                    kind: CurveType::Quad { pair: (0, mate) },
                });
            }
            other => {
                return Err(SurfaceError::ImpossibleEdgeCount {
                    tet: t,
                    count: other,
                });
            }
        }
    }
    Ok(NormalSurfaceComplex {
        zero_cells,
        one_cells,
        two_cells,
    })
}

/// Per-triangulation constants bounding the surface cell counts by the
/// boundary size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClaimConstants {
    /// 0-cells per boundary edge: exactly one midpoint each.
    pub k0: Rational64,
    /// 1-cells: half the maximal number of faces running over an edge
    /// class, counted with multiplicity.
    pub k1: Rational64,
    /// 2-cells: each disc has at least three sides, so `(2/3) k1`.
    pub k2: Rational64,
}

pub fn claim_constants(tri: &Triangulation) -> ClaimConstants {
    let max_faces_over_edge = tri.faces_over_edge_classes().into_iter().max().unwrap_or(0);
    let k1 = Rational64::new(max_faces_over_edge as i64, 2);
    ClaimConstants {
        k0: Rational64::from_integer(1),
        k1,
        k2: Rational64::new(2, 3) * k1,
    }
}

/// Evaluation of the count bounds and the homology-rank estimates for one
/// `(triangulation, A)` instance. `k4` bounds the number of intersection
/// points between the singular locus and any specified normal disc; it is
/// orbifold data supplied by the caller.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimReport {
    pub counts: CellCounts,
    pub boundary_size: usize,
    pub a_size: usize,
    pub constants: ClaimConstants,
    pub zero_cells_within_bound: bool,
    pub one_cells_within_bound: bool,
    pub two_cells_within_bound: bool,
    /// `k3 = k1 + k4 k2`: surface homology rank per boundary edge.
    pub k3: Rational64,
    /// `k5 = k4 k2 / 2`: boundary correction in the interior bound.
    pub k5: Rational64,
    /// Upper bound `k3 |dA|` for the mod-2 rank of the surface.
    pub surface_rank_upper: Rational64,
    /// Lower bound `|A|/2 - k5 |dA|` for the mod-2 rank of the side
    /// containing `A`.
    pub interior_rank_lower: Rational64,
}

impl ClaimReport {
    pub fn all_bounds_hold(&self) -> bool {
        self.zero_cells_within_bound && self.one_cells_within_bound && self.two_cells_within_bound
    }
}

pub fn claim_bounds_eval(
    counts: CellCounts,
    a_size: usize,
    boundary_size: usize,
    k4: u64,
    constants: ClaimConstants,
) -> ClaimReport {
    let b = Rational64::from_integer(boundary_size as i64);
    let k4 = Rational64::from_integer(k4 as i64);
    let k3 = constants.k1 + k4 * constants.k2;
    let k5 = k4 * constants.k2 / Rational64::from_integer(2);
    ClaimReport {
        counts,
        boundary_size,
        a_size,
        constants,
        zero_cells_within_bound: Rational64::from_integer(counts.zero_cells as i64)
            <= constants.k0 * b,
        one_cells_within_bound: Rational64::from_integer(counts.one_cells as i64)
            <= constants.k1 * b,
        two_cells_within_bound: Rational64::from_integer(counts.two_cells as i64)
            <= constants.k2 * b,
        k3,
        k5,
        surface_rank_upper: k3 * b,
        interior_rank_lower: Rational64::new(a_size as i64, 2) - k5 * b,
    }
}

/// Certified upper bound for the mod-2 homology rank of the surface: its
/// number of 1-cells.
pub fn d2_upper_bound_surface(complex: &NormalSurfaceComplex) -> usize {
    complex.one_cells.len()
}
