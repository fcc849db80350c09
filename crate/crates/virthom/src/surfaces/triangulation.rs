//! Closed triangulations of 3-manifolds from face-gluing data, and their
//! identification classes (vertices, edges, faces) and 1-skeletons.
//!
//! Face `f` of a tetrahedron is the one opposite vertex `f`. A gluing of
//! face `f` of tet `t` names a target tetrahedron and a permutation of
//! vertex labels carrying `f` to the target's opposite vertex. Gluings must
//! be involutive, never glue a face to itself, and carry a consistent
//! orientation (a tetrahedron sign assignment in which gluings with odd
//! permutations connect same-sign tetrahedra).

use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("face {face} of tetrahedron {tet} is unglued; the triangulation must be closed")]
    Unglued { tet: usize, face: usize },
    #[error("gluing of face {face} of tetrahedron {tet} is not involutive")]
    NotInvolutive { tet: usize, face: usize },
    #[error("face {face} of tetrahedron {tet} is glued to itself")]
    SelfGlued { tet: usize, face: usize },
    #[error("target tetrahedron {target} out of range ({num_tets} tetrahedra)")]
    TargetOutOfRange { target: usize, num_tets: usize },
    #[error("gluing permutations admit no consistent orientation")]
    NotOrientable,
    #[error("cannot parse `{0}` as a vertex permutation")]
    BadPermutation(String),
    #[error("cannot parse gluing `{0}`; expected `tet:perm` like `1:0132`")]
    BadGluing(String),
    #[error("line {0}: expected 4 gluing entries")]
    BadLine(usize),
    #[error("empty triangulation")]
    Empty,
}

/// Permutation of the four vertex labels of a tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub fn new(images: [u8; 4]) -> Result<Perm4, TriangulationError> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i as usize] {
                return Err(TriangulationError::BadPermutation(format!("{images:?}")));
            }
            seen[i as usize] = true;
        }
        Ok(Perm4(images))
    }

    pub fn identity() -> Perm4 {
        Perm4([0, 1, 2, 3])
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn inverse(&self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &img) in self.0.iter().enumerate() {
            inv[img as usize] = i as u8;
        }
        Perm4(inv)
    }

    pub fn is_odd(&self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    }

    pub fn parse(s: &str) -> Result<Perm4, TriangulationError> {
        let digits: Vec<u8> = s
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| TriangulationError::BadPermutation(s.to_string()))?;
        let images: [u8; 4] = digits
            .try_into()
            .map_err(|_| TriangulationError::BadPermutation(s.to_string()))?;
        Perm4::new(images)
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|d| d.to_string()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceGluing {
    pub tet: usize,
    pub perm: Perm4,
}

/// The six edges of a tetrahedron as sorted corner pairs.
pub const TET_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn edge_slot(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    TET_EDGES.iter().position(|&e| e == (a, b)).expect("valid corner pair")
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
    /// Compact class ids in order of first appearance.
    fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut id = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = vec![0usize; n];
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            out[x] = id[r];
        }
        (out, next)
    }
}

/// A closed orientable triangulation with all identification classes
/// computed up front.
#[derive(Debug, Clone)]
pub struct Triangulation {
    gluings: Vec<[FaceGluing; 4]>,
    corner_class: Vec<usize>,
    num_vertex_classes: usize,
    edge_class: Vec<usize>,
    num_edge_classes: usize,
    face_class: Vec<usize>,
    num_face_classes: usize,
}

impl Triangulation {
    pub fn new(raw: Vec<[Option<FaceGluing>; 4]>) -> Result<Triangulation, TriangulationError> {
        let num_tets = raw.len();
        if num_tets == 0 {
            return Err(TriangulationError::Empty);
        }
        let mut gluings = Vec::with_capacity(num_tets);
        for (t, faces) in raw.iter().enumerate() {
            let mut row = [FaceGluing {
                tet: 0,
                perm: Perm4::identity(),
            }; 4];
            for (f, g) in faces.iter().enumerate() {
                let g = g.ok_or(TriangulationError::Unglued { tet: t, face: f })?;
                if g.tet >= num_tets {
                    return Err(TriangulationError::TargetOutOfRange {
                        target: g.tet,
                        num_tets,
                    });
                }
                row[f] = g;
            }
            gluings.push(row);
        }
        // Involution and no self-gluing.
        for t in 0..num_tets {
            for f in 0..4 {
                let g = gluings[t][f];
                let tf = g.perm.apply(f);
                if g.tet == t && tf == f {
                    return Err(TriangulationError::SelfGlued { tet: t, face: f });
                }
                let back = gluings[g.tet][tf];
                if back.tet != t || back.perm != g.perm.inverse() {
                    return Err(TriangulationError::NotInvolutive { tet: t, face: f });
                }
            }
        }
        // Orientability: sign per tetrahedron; odd gluing permutations
        // preserve the sign, even ones flip it.
        let mut sign = vec![0i8; num_tets];
        sign[0] = 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(t) = queue.pop_front() {
            for f in 0..4 {
                let g = gluings[t][f];
                let expected = if g.perm.is_odd() { sign[t] } else { -sign[t] };
                if sign[g.tet] == 0 {
                    sign[g.tet] = expected;
                    queue.push_back(g.tet);
                } else if sign[g.tet] != expected {
                    return Err(TriangulationError::NotOrientable);
                }
            }
        }
        if sign.contains(&0) {
            // Disconnected triangulations are out of scope.
            return Err(TriangulationError::NotOrientable);
        }

        // Identification classes.
        let mut corners = UnionFind::new(4 * num_tets);
        let mut edges = UnionFind::new(6 * num_tets);
        let mut faces = UnionFind::new(4 * num_tets);
        for t in 0..num_tets {
            for f in 0..4 {
                let g = gluings[t][f];
                faces.union(t * 4 + f, g.tet * 4 + g.perm.apply(f));
                for c in 0..4 {
                    if c == f {
                        continue;
                    }
                    corners.union(t * 4 + c, g.tet * 4 + g.perm.apply(c));
                }
                for (a, b) in TET_EDGES {
                    if a == f || b == f {
                        continue;
                    }
                    let image = edge_slot(g.perm.apply(a), g.perm.apply(b));
                    edges.union(t * 6 + edge_slot(a, b), g.tet * 6 + image);
                }
            }
        }
        let (corner_class, num_vertex_classes) = corners.classes();
        let (edge_class, num_edge_classes) = edges.classes();
        let (face_class, num_face_classes) = faces.classes();
        Ok(Triangulation {
            gluings,
            corner_class,
            num_vertex_classes,
            edge_class,
            num_edge_classes,
            face_class,
            num_face_classes,
        })
    }

    pub fn num_tetrahedra(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> FaceGluing {
        self.gluings[tet][face]
    }

    pub fn num_vertex_classes(&self) -> usize {
        self.num_vertex_classes
    }

    pub fn num_edge_classes(&self) -> usize {
        self.num_edge_classes
    }

    pub fn num_face_classes(&self) -> usize {
        self.num_face_classes
    }

    /// Vertex class of corner `c` of tetrahedron `t`.
    pub fn corner_class(&self, tet: usize, corner: usize) -> usize {
        self.corner_class[tet * 4 + corner]
    }

    /// Edge class of the edge joining corners `a` and `b` of `tet`.
    pub fn edge_class(&self, tet: usize, a: usize, b: usize) -> usize {
        self.edge_class[tet * 6 + edge_slot(a, b)]
    }

    pub fn face_class(&self, tet: usize, face: usize) -> usize {
        self.face_class[tet * 4 + face]
    }

    /// One `(tet, face)` representative per face class.
    pub fn face_representatives(&self) -> Vec<(usize, usize)> {
        let mut reps = vec![None; self.num_face_classes];
        for t in 0..self.num_tetrahedra() {
            for f in 0..4 {
                let c = self.face_class(t, f);
                if reps[c].is_none() {
                    reps[c] = Some((t, f));
                }
            }
        }
        reps.into_iter().map(|r| r.expect("every class has a representative")).collect()
    }

    /// Endpoint vertex classes of each edge class.
    pub fn edge_endpoints(&self) -> Vec<(usize, usize)> {
        let mut ends = vec![None; self.num_edge_classes];
        for t in 0..self.num_tetrahedra() {
            for (a, b) in TET_EDGES {
                let c = self.edge_class(t, a, b);
                if ends[c].is_none() {
                    ends[c] = Some((self.corner_class(t, a), self.corner_class(t, b)));
                }
            }
        }
        ends.into_iter().map(|e| e.expect("represented")).collect()
    }

    /// `V - E + F - T`; zero for closed 3-manifolds.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertex_classes as i64 - self.num_edge_classes as i64
            + self.num_face_classes as i64
            - self.num_tetrahedra() as i64
    }

    /// The 1-skeleton: one graph vertex per vertex class, one edge per edge
    /// class (loops and parallel edges kept).
    pub fn one_skeleton(&self) -> SkeletonGraph {
        SkeletonGraph::new(self.num_vertex_classes, self.edge_endpoints())
            .expect("classes are in range")
    }

    /// Face-slot incidences over each edge class: how many faces of the
    /// triangulation run over the 1-cell, counted with multiplicity (a face
    /// whose sides hit the class twice counts twice).
    pub fn faces_over_edge_classes(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.num_edge_classes];
        for (t, f) in self.face_representatives() {
            let corners: Vec<usize> = (0..4).filter(|&c| c != f).collect();
            for i in 0..3 {
                for j in i + 1..3 {
                    counts[self.edge_class(t, corners[i], corners[j])] += 1;
                }
            }
        }
        counts
    }

    /// Plain-text format: one tetrahedron per line, four `tet:perm`
    /// entries (`perm` = images of vertices 0123), e.g. `1:0123 1:0123 ...`.
    pub fn parse(text: &str) -> Result<Triangulation, TriangulationError> {
        let mut raw = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let entries: Vec<&str> = line.split_whitespace().collect();
            if entries.len() != 4 {
                return Err(TriangulationError::BadLine(lineno + 1));
            }
            let mut row: [Option<FaceGluing>; 4] = [None; 4];
            for (f, entry) in entries.iter().enumerate() {
                if *entry == "-" {
                    continue;
                }
                let (tet, perm) = entry
                    .split_once(':')
                    .ok_or_else(|| TriangulationError::BadGluing(entry.to_string()))?;
                let tet: usize = tet
                    .parse()
                    .map_err(|_| TriangulationError::BadGluing(entry.to_string()))?;
                row[f] = Some(FaceGluing {
                    tet,
                    perm: Perm4::parse(perm)?,
                });
            }
            raw.push(row);
        }
        Triangulation::new(raw)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for t in 0..self.num_tetrahedra() {
            let entries: Vec<String> = (0..4)
                .map(|f| {
                    let g = self.gluings[t][f];
                    format!("{}:{}", g.tet, g.perm.render())
                })
                .collect();
            out.push_str(&entries.join(" "));
            out.push('\n');
        }
        out
    }

    /// The double of a tetrahedron: two tets glued by the identity on all
    /// four faces (a 2-tet triangulation of the 3-sphere with K4 skeleton).
    pub fn doubled_tetrahedron() -> Triangulation {
        let g = |tet| {
            Some(FaceGluing {
                tet,
                perm: Perm4::identity(),
            })
        };
        Triangulation::new(vec![[g(1), g(1), g(1), g(1)], [g(0), g(0), g(0), g(0)]])
            .expect("valid")
    }

    /// The double of a chain of `k` tetrahedra stacked face to face.
    pub fn doubled_chain(k: usize) -> Triangulation {
        assert!(k >= 1);
        // Chain: tet i glues face 0 to face 1 of tet i+1... simpler: glue
        // face 0 of tet i to face 0 of tet i+1 with a transposition fixing
        // the shared triangle's labels requires care; instead glue face 0
        // of i to face 1 of i+1 via the transposition (0 1).
        let swap01 = Perm4::new([1, 0, 2, 3]).expect("valid");
        let mut raw: Vec<[Option<FaceGluing>; 4]> = vec![[None; 4]; 2 * k];
        // Copies: 0..k is the chain, k..2k its mirror. Within each copy,
        // link i and i+1; across copies, glue remaining boundary faces by
        // the identity.
        for copy in 0..2 {
            let base = copy * k;
            for i in 0..k.saturating_sub(1) {
                raw[base + i][0] = Some(FaceGluing {
                    tet: base + i + 1,
                    perm: swap01,
                });
                raw[base + i + 1][1] = Some(FaceGluing {
                    tet: base + i,
                    perm: swap01,
                });
            }
        }
        for i in 0..k {
            for f in 0..4 {
                if raw[i][f].is_none() {
                    raw[i][f] = Some(FaceGluing {
                        tet: k + i,
                        perm: Perm4::identity(),
                    });
                    raw[k + i][f] = Some(FaceGluing {
                        tet: i,
                        perm: Perm4::identity(),
                    });
                }
            }
        }
        Triangulation::new(raw).expect("doubled chain is valid")
    }

    /// Boundary of the 4-simplex: five tetrahedra on five vertices, another
    /// triangulation of the 3-sphere.
    pub fn four_simplex_boundary() -> Triangulation {
        // Tet i has global vertices {0..4} minus i, in increasing order as
        // local labels 0..3. Local face opposite the corner holding global
        // j glues to tet j.
        let globals = |i: usize| -> Vec<usize> { (0..5).filter(|&v| v != i).collect() };
        let mut raw: Vec<[Option<FaceGluing>; 4]> = vec![[None; 4]; 5];
        for i in 0..5 {
            let gi = globals(i);
            for (local_f, &j) in gi.iter().enumerate() {
                // Face opposite local_f (which holds global j) glues to
                // tet j; shared global vertices map by label.
                let gj = globals(j);
                let mut images = [0u8; 4];
                for (a, &ga) in gi.iter().enumerate() {
                    if ga == j {
                        // The opposite corner maps to tet j's corner
                        // holding global i.
                        images[a] = gj.iter().position(|&v| v == i).expect("present") as u8;
                    } else {
                        images[a] = gj.iter().position(|&v| v == ga).expect("shared") as u8;
                    }
                }
                raw[i][local_f] = Some(FaceGluing {
                    tet: j,
                    perm: Perm4::new(images).expect("bijection"),
                });
            }
        }
        Triangulation::new(raw).expect("boundary of the 4-simplex is valid")
    }
}

/// A finite multigraph with loops: the 1-skeleton of a triangulation, or
/// any graph handed to the Cheeger routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonGraph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl SkeletonGraph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<SkeletonGraph, TriangulationError> {
        for &(a, b) in &edges {
            if a >= num_vertices || b >= num_vertices {
                return Err(TriangulationError::TargetOutOfRange {
                    target: a.max(b),
                    num_tets: num_vertices,
                });
            }
        }
        Ok(SkeletonGraph {
            num_vertices,
            edges,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Valences; loops contribute 2.
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0usize; self.num_vertices];
        for &(a, b) in &self.edges {
            val[a] += 1;
            val[b] += 1;
        }
        val
    }

    pub fn cycle(n: usize) -> SkeletonGraph {
        SkeletonGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("valid")
    }

    pub fn complete(n: usize) -> SkeletonGraph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        SkeletonGraph::new(n, edges).expect("valid")
    }
}
