//! Presentations, mod-p homology ranks, singular-graph Betti numbers, and
//! the Golod-Shafarevich infiniteness test.
//!
//! The homology rank `d_p` is the dimension of `H_1` with `Z/p`
//! coefficients, computed as (generators) minus the GF(p) rank of the
//! relator exponent-sum matrix. The singular graph of an orbifold carries
//! local-group tags and edge orders; extracting the order-divisible part
//! and taking its first Betti number gives a certified lower bound for the
//! homology rank of the meridional presentation.

use crate::words::{Word, WordError};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrbifoldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("relator uses generator {gen} but the presentation has {rank}")]
    RelatorOutOfRange { gen: usize, rank: usize },
    #[error("edge order must be at least 2, got {0}")]
    BadOrder(u32),
    #[error("edge endpoint {vertex} out of range ({num_vertices} vertices)")]
    BadEndpoint { vertex: usize, num_vertices: usize },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A finite group presentation: generator count plus reduced relator words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub num_generators: usize,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(num_generators: usize, relators: Vec<Word>) -> Result<Presentation, OrbifoldError> {
        for r in &relators {
            if r.rank() != num_generators {
                return Err(OrbifoldError::RelatorOutOfRange {
                    gen: r.rank(),
                    rank: num_generators,
                });
            }
        }
        Ok(Presentation {
            num_generators,
            relators,
        })
    }

    /// Deficiency-style bound: `|R| - |X|` at most the singular component
    /// count.
    pub fn deficiency_bound_check(&self, num_sing_components: usize) -> bool {
        self.relators.len() as i64 - self.num_generators as i64 <= num_sing_components as i64
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![0i64; self.num_generators];
                for l in r.letters() {
                    row[l.gen] += l.exp as i64;
                }
                row
            })
            .collect()
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// GF(p) rank by Gaussian elimination.
fn rank_mod_p(matrix: &[Vec<i64>], p: u64) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<u64>> = matrix
        .iter()
        .map(|row| row.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| m[r][col] != 0);
        let Some(pr) = pivot else { continue };
        m.swap(rank, pr);
        let inv = mod_inverse(m[rank][col], p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..cols {
                    let sub = factor * m[rank][c] % p;
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p for prime p.
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

/// Dimension of `H_1` with `Z/p` coefficients for the presented group:
/// generators minus the GF(p) rank of the exponent-sum matrix.
pub fn dp_rank(pres: &Presentation, p: u64) -> Result<usize, OrbifoldError> {
    if !is_prime(p) {
        return Err(OrbifoldError::NotPrime(p));
    }
    Ok(pres.num_generators - rank_mod_p(&pres.exponent_matrix(), p))
}

/// Golod-Shafarevich verdict for `<X | R>` with homology rank `d`:
/// `d^2/4 - d + |X| - |R| > 0` forces the group infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GsVerdict {
    Infinite,
    Inconclusive,
}

pub fn golod_shafarevich(d_p: u64, num_gens: u64, num_rels: u64) -> GsVerdict {
    // Exact integer arithmetic on 4x the quantity.
    let d = d_p as i128;
    let lhs = d * d - 4 * d + 4 * (num_gens as i128 - num_rels as i128);
    if lhs > 0 {
        GsVerdict::Infinite
    } else {
        GsVerdict::Inconclusive
    }
}

/// Local group of a singular point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "n")]
pub enum LocalGroup {
    Cyclic(u32),
    /// Order `2n`; `n = 2` is the Klein four-group.
    Dihedral(u32),
    KleinFour,
    A4,
    S4,
    A5,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularVertex {
    pub local_group: LocalGroup,
}

/// An edge of the singular graph: an arc between vertices or a closed
/// curve, with its singularity order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SingularEdge {
    Arc { ends: (usize, usize), order: u32 },
    Circle { circle: bool, order: u32 },
}

impl SingularEdge {
    pub fn order(&self) -> u32 {
        match self {
            SingularEdge::Arc { order, .. } => *order,
            SingularEdge::Circle { order, .. } => *order,
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, SingularEdge::Circle { .. })
    }
}

/// The singular locus of an orbifold as a labelled graph: trivalent
/// vertices with non-cyclic local groups, arcs and circles with orders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct SingularGraph {
    pub vertices: Vec<SingularVertex>,
    pub edges: Vec<SingularEdge>,
}

impl SingularGraph {
    pub fn validate(&self) -> Result<Vec<String>, OrbifoldError> {
        for e in &self.edges {
            if e.order() < 2 {
                return Err(OrbifoldError::BadOrder(e.order()));
            }
            if let SingularEdge::Arc { ends, .. } = e {
                for &v in [&ends.0, &ends.1] {
                    if v >= self.vertices.len() {
                        return Err(OrbifoldError::BadEndpoint {
                            vertex: v,
                            num_vertices: self.vertices.len(),
                        });
                    }
                }
            }
        }
        Ok(self.warnings())
    }

    /// Structural warnings, not hard errors: geometric orbifolds satisfy
    /// these but abstract inputs may not.
    pub fn warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let incident: Vec<u32> = self
                .edges
                .iter()
                .flat_map(|e| match e {
                    SingularEdge::Arc { ends, order } => {
                        let mut hits = Vec::new();
                        if ends.0 == i {
                            hits.push(*order);
                        }
                        if ends.1 == i {
                            hits.push(*order);
                        }
                        hits
                    }
                    SingularEdge::Circle { .. } => Vec::new(),
                })
                .collect();
            if !matches!(v.local_group, LocalGroup::Cyclic(_)) && incident.len() != 3 {
                warnings.push(format!(
                    "vertex {i} has valence {} but a non-cyclic local group",
                    incident.len()
                ));
            }
            let dihedral_n = match v.local_group {
                LocalGroup::Dihedral(n) => Some(n),
                LocalGroup::KleinFour => Some(2),
                _ => None,
            };
            if let Some(n) = dihedral_n {
                let twos = incident.iter().filter(|&&o| o == 2).count();
                let ns = incident.iter().filter(|&&o| o == n).count();
                // Two order-2 edges and one order-n edge; for n = 2 that
                // collapses to three order-2 edges.
                let ok = if n == 2 {
                    twos == 3
                } else {
                    twos == 2 && ns == 1
                };
                if !ok {
                    warnings.push(format!(
                        "vertex {i} with dihedral local group of order {} should meet two order-2 edges and one order-{n} edge",
                        2 * n
                    ));
                }
            }
        }
        warnings
    }

    /// Edges whose order is a multiple of `p`, with their incident vertices
    /// (the closure).
    pub fn sing_p_extract(&self, p: u64) -> Result<SingularGraph, OrbifoldError> {
        if !is_prime(p) {
            return Err(OrbifoldError::NotPrime(p));
        }
        let keep: Vec<&SingularEdge> = self
            .edges
            .iter()
            .filter(|e| u64::from(e.order()) % p == 0)
            .collect();
        let mut vertex_used = vec![false; self.vertices.len()];
        for e in &keep {
            if let SingularEdge::Arc { ends, .. } = e {
                vertex_used[ends.0] = true;
                vertex_used[ends.1] = true;
            }
        }
        let mut relabel = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        for (i, used) in vertex_used.iter().enumerate() {
            if *used {
                relabel[i] = vertices.len();
                vertices.push(self.vertices[i].clone());
            }
        }
        let edges = keep
            .into_iter()
            .map(|e| match e {
                SingularEdge::Arc { ends, order } => SingularEdge::Arc {
                    ends: (relabel[ends.0], relabel[ends.1]),
                    order: *order,
                },
                SingularEdge::Circle { order, .. } => SingularEdge::Circle {
                    circle: true,
                    order: *order,
                },
            })
            .collect();
        Ok(SingularGraph { vertices, edges })
    }

    /// First Betti number: `|E| - |V| + #components` over the vertexed
    /// part, plus one per closed curve.
    pub fn b1(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        let mut arc_count = 0usize;
        let mut circle_count = 0usize;
        for e in &self.edges {
            match e {
                SingularEdge::Arc { ends, .. } => {
                    arc_count += 1;
                    let (a, b) = (find(&mut parent, ends.0), find(&mut parent, ends.1));
                    if a != b {
                        parent[a] = b;
                    }
                }
                SingularEdge::Circle { .. } => circle_count += 1,
            }
        }
        let components = (0..n).filter(|&v| find(&mut parent, v) == v).count();
        (arc_count + components + circle_count).saturating_sub(n)
    }

    /// Sum over vertices of `val(v)/2 - 1`, i.e. minus the Euler
    /// characteristic of the vertexed part. Satisfies
    /// `b1 >= chi_lower_bound + #non-circle components`.
    pub fn chi_lower_bound(&self) -> Rational64 {
        let mut valence = vec![0i64; self.vertices.len()];
        for e in &self.edges {
            if let SingularEdge::Arc { ends, .. } = e {
                valence[ends.0] += 1;
                valence[ends.1] += 1;
            }
        }
        valence
            .iter()
            .map(|&v| Rational64::new(v, 2) - Rational64::from_integer(1))
            .sum()
    }

    pub fn num_components(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        let mut circles = 0usize;
        for e in &self.edges {
            match e {
                SingularEdge::Arc { ends, .. } => {
                    let (a, b) = (find(&mut parent, ends.0), find(&mut parent, ends.1));
                    if a != b {
                        parent[a] = b;
                    }
                }
                SingularEdge::Circle { .. } => circles += 1,
            }
        }
        (0..n).filter(|&v| find(&mut parent, v) == v).count() + circles
    }

    pub fn num_non_circle_components(&self) -> usize {
        self.num_components() - self.edges.iter().filter(|e| e.is_circle()).count()
    }
}

/// Orbifold data: a presentation of the complement of the singular locus,
/// one meridian word (with its order) per codimension-2 component, and the
/// singular graph itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbifoldData {
    pub complement: Presentation,
    pub meridians: Vec<(Word, u32)>,
    pub singular_graph: SingularGraph,
}

/// Adds one relator `mu_i^{n_i}` per meridian to the complement
/// presentation.
pub fn meridional_presentation(data: &OrbifoldData) -> Result<Presentation, OrbifoldError> {
    let mut relators = data.complement.relators.clone();
    for (mu, order) in &data.meridians {
        if mu.rank() != data.complement.num_generators {
            return Err(OrbifoldError::RelatorOutOfRange {
                gen: mu.rank(),
                rank: data.complement.num_generators,
            });
        }
        relators.push(mu.pow(*order as i64));
    }
    Presentation::new(data.complement.num_generators, relators)
}

/// First Betti number of the closure of the order-divisible singular part:
/// a certified lower bound for the mod-p homology rank of the orbifold.
pub fn dp_lower_bound(data: &OrbifoldData, p: u64) -> Result<usize, OrbifoldError> {
    Ok(data.singular_graph.sing_p_extract(p)?.b1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn word(alpha: &Alphabet, s: &str) -> Word {
        Word::parse(alpha, s).unwrap()
    }

    fn theta_graph() -> SingularGraph {
        SingularGraph {
            vertices: vec![
                SingularVertex {
                    local_group: LocalGroup::Dihedral(3),
                },
                SingularVertex {
                    local_group: LocalGroup::Dihedral(3),
                },
            ],
            edges: vec![
                SingularEdge::Arc {
                    ends: (0, 1),
                    order: 2,
                },
                SingularEdge::Arc {
                    ends: (0, 1),
                    order: 2,
                },
                SingularEdge::Arc {
                    ends: (0, 1),
                    order: 3,
                },
            ],
        }
    }

    fn circle(order: u32) -> SingularEdge {
        SingularEdge::Circle {
            circle: true,
            order,
        }
    }

    #[test]
    fn dp_rank_single_relator() {
        let alpha = Alphabet::of_size(1).unwrap();
        let pres = Presentation::new(1, vec![word(&alpha, "a a")]).unwrap();
        assert_eq!(dp_rank(&pres, 2).unwrap(), 1);
        assert_eq!(dp_rank(&pres, 3).unwrap(), 0);
    }

    #[test]
    fn dp_rank_commutator_is_full() {
        let alpha = Alphabet::of_size(2).unwrap();
        let pres = Presentation::new(2, vec![word(&alpha, "a b a^-1 b^-1")]).unwrap();
        for p in [2, 3, 5, 7] {
            assert_eq!(dp_rank(&pres, p).unwrap(), 2);
        }
    }

    #[test]
    fn dp_rank_rejects_composites() {
        let pres = Presentation::new(1, vec![]).unwrap();
        assert_eq!(dp_rank(&pres, 4).unwrap_err(), OrbifoldError::NotPrime(4));
        assert_eq!(dp_rank(&pres, 1).unwrap_err(), OrbifoldError::NotPrime(1));
    }

    /// Oracle: d_p = log_p of the number of assignments of generator
    /// images in Z/p satisfying every relator's exponent sum.
    fn dp_rank_oracle(pres: &Presentation, p: u64) -> usize {
        let matrix = pres.exponent_matrix();
        let n = pres.num_generators;
        let mut assignment = vec![0u64; n];
        let mut count = 0u64;
        loop {
            let ok = matrix.iter().all(|row| {
                row.iter()
                    .zip(&assignment)
                    .map(|(&c, &x)| c.rem_euclid(p as i64) as u64 * x % p)
                    .sum::<u64>()
                    % p
                    == 0
            });
            if ok {
                count += 1;
            }
            // Increment base-p odometer.
            let mut i = 0;
            loop {
                if i == n {
                    let mut k = 0usize;
                    let mut c = count;
                    while c > 1 {
                        assert_eq!(c % p, 0);
                        c /= p;
                        k += 1;
                    }
                    return k;
                }
                assignment[i] += 1;
                if assignment[i] == p {
                    assignment[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    #[test]
    fn dp_rank_matches_counting_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let gens = rng.gen_range(1..=5);
            let num_rel = rng.gen_range(0..=6);
            let mut relators = Vec::new();
            for _ in 0..num_rel {
                let len = rng.gen_range(0..=6);
                let raw: Vec<crate::words::Letter> = (0..len)
                    .map(|_| crate::words::Letter {
                        gen: rng.gen_range(0..gens),
                        exp: if rng.gen::<bool>() { 1 } else { -1 },
                    })
                    .collect();
                relators.push(Word::reduce(gens, &raw).unwrap());
            }
            let pres = Presentation::new(gens, relators).unwrap();
            let p = [2u64, 3, 5][rng.gen_range(0..3)];
            assert_eq!(dp_rank(&pres, p).unwrap(), dp_rank_oracle(&pres, p));
        }
    }

    #[test]
    fn meridional_presentation_adds_power_relators() {
        let alpha = Alphabet::of_size(2).unwrap();
        let complement = Presentation::new(2, vec![]).unwrap();
        let data = OrbifoldData {
            complement: complement.clone(),
            meridians: vec![(word(&alpha, "a"), 2)],
            singular_graph: SingularGraph::default(),
        };
        let m = meridional_presentation(&data).unwrap();
        assert_eq!(m.relators.len(), 1);
        assert_eq!(m.relators[0], word(&alpha, "a a"));

        let empty = OrbifoldData {
            complement: complement.clone(),
            meridians: vec![],
            singular_graph: SingularGraph::default(),
        };
        assert_eq!(meridional_presentation(&empty).unwrap(), complement);
    }

    #[test]
    fn meridional_accounting_matches_component_count() {
        // Balanced complement presentation plus r meridians keeps
        // |R| - |X| = r, within the singular component bound.
        let alpha = Alphabet::of_size(2).unwrap();
        let complement =
            Presentation::new(2, vec![word(&alpha, "a b a^-1 b^-1"), word(&alpha, "b")]).unwrap();
        let data = OrbifoldData {
            complement,
            meridians: vec![(word(&alpha, "a"), 3), (word(&alpha, "b a"), 2)],
            singular_graph: SingularGraph {
                vertices: vec![],
                edges: vec![circle(3), circle(2)],
            },
        };
        let m = meridional_presentation(&data).unwrap();
        assert!(m.deficiency_bound_check(2));
        assert!(!m.deficiency_bound_check(1));
    }

    #[test]
    fn deficiency_examples() {
        let p33 = Presentation::new(3, vec![Word::empty(3); 3]).unwrap();
        assert!(p33.deficiency_bound_check(0));
        let p24 = Presentation::new(2, vec![Word::empty(2); 4]).unwrap();
        assert!(!p24.deficiency_bound_check(1));
    }

    #[test]
    fn sing_p_extraction() {
        let g = SingularGraph {
            vertices: vec![],
            edges: vec![circle(2), circle(2)],
        };
        assert!(g.sing_p_extract(3).unwrap().edges.is_empty());

        // Dihedral vertex pattern: two order-2 edges and one order-p edge.
        let d = theta_graph();
        let s2 = d.sing_p_extract(2).unwrap();
        assert_eq!(s2.edges.len(), 2);
        let s3 = d.sing_p_extract(3).unwrap();
        assert_eq!(s3.edges.len(), 1);
        assert_eq!(s3.vertices.len(), 2);

        let mixed = SingularGraph {
            vertices: vec![],
            edges: vec![circle(2), circle(4), circle(6)],
        };
        assert_eq!(mixed.sing_p_extract(2).unwrap().edges.len(), 3);
    }

    #[test]
    fn betti_numbers() {
        let one_circle = SingularGraph {
            vertices: vec![],
            edges: vec![circle(2)],
        };
        assert_eq!(one_circle.b1(), 1);
        assert_eq!(theta_graph().b1(), 2);
        let mut both = theta_graph();
        both.edges.push(circle(2));
        both.edges.push(circle(3));
        assert_eq!(both.b1(), 4);
    }

    #[test]
    fn chi_bound_examples() {
        let theta = theta_graph();
        assert_eq!(theta.chi_lower_bound(), Rational64::from_integer(1));
        assert_eq!(theta.num_non_circle_components(), 1);
        assert!(theta.b1() as i64 >= 1 + 1);

        // Single arc: a tree with two valence-1 ends.
        let arc = SingularGraph {
            vertices: vec![
                SingularVertex {
                    local_group: LocalGroup::Cyclic(2),
                },
                SingularVertex {
                    local_group: LocalGroup::Cyclic(2),
                },
            ],
            edges: vec![SingularEdge::Arc {
                ends: (0, 1),
                order: 2,
            }],
        };
        assert_eq!(arc.chi_lower_bound(), Rational64::from_integer(-1));
        assert_eq!(arc.b1(), 0);

        // Trivalent vertex with three arcs to valence-1 ends.
        let star = SingularGraph {
            vertices: vec![
                SingularVertex {
                    local_group: LocalGroup::Dihedral(2),
                },
                SingularVertex {
                    local_group: LocalGroup::Cyclic(2),
                },
                SingularVertex {
                    local_group: LocalGroup::Cyclic(2),
                },
                SingularVertex {
                    local_group: LocalGroup::Cyclic(2),
                },
            ],
            edges: (1..=3)
                .map(|i| SingularEdge::Arc {
                    ends: (0, i),
                    order: 2,
                })
                .collect(),
        };
        assert_eq!(star.chi_lower_bound(), Rational64::from_integer(-1));
    }

    #[test]
    fn equality_for_connected_non_circle_graphs() {
        let theta = theta_graph();
        let bound = theta.chi_lower_bound()
            + Rational64::from_integer(theta.num_non_circle_components() as i64);
        assert_eq!(Rational64::from_integer(theta.b1() as i64), bound);
    }

    #[test]
    fn dp_lower_bound_cases() {
        let two_circles = OrbifoldData {
            complement: Presentation::new(1, vec![]).unwrap(),
            meridians: vec![],
            singular_graph: SingularGraph {
                vertices: vec![],
                edges: vec![circle(3), circle(3)],
            },
        };
        assert_eq!(dp_lower_bound(&two_circles, 3).unwrap(), 2);

        // A theta whose edges all have even order: the extraction keeps
        // the whole graph, so the bound is its Betti number 2.
        let klein_theta = SingularGraph {
            vertices: vec![
                SingularVertex {
                    local_group: LocalGroup::KleinFour,
                },
                SingularVertex {
                    local_group: LocalGroup::KleinFour,
                },
            ],
            edges: (0..3)
                .map(|_| SingularEdge::Arc {
                    ends: (0, 1),
                    order: 2,
                })
                .collect(),
        };
        let theta = OrbifoldData {
            complement: Presentation::new(1, vec![]).unwrap(),
            meridians: vec![],
            singular_graph: klein_theta,
        };
        assert_eq!(dp_lower_bound(&theta, 2).unwrap(), 2);
        // The mixed-order theta keeps only its two order-2 edges: a bigon.
        let mixed = OrbifoldData {
            complement: Presentation::new(1, vec![]).unwrap(),
            meridians: vec![],
            singular_graph: theta_graph(),
        };
        assert_eq!(dp_lower_bound(&mixed, 2).unwrap(), 1);
        assert_eq!(dp_lower_bound(&mixed, 3).unwrap(), 0);
    }

    #[test]
    fn lower_bound_consistent_with_rank() {
        // A circle of order p whose meridian is the generator `a` of a
        // free complement presentation.
        let alpha = Alphabet::of_size(2).unwrap();
        for p in [2u64, 3, 5] {
            let data = OrbifoldData {
                complement: Presentation::new(2, vec![]).unwrap(),
                meridians: vec![(word(&alpha, "a"), p as u32)],
                singular_graph: SingularGraph {
                    vertices: vec![],
                    edges: vec![circle(p as u32)],
                },
            };
            let m = meridional_presentation(&data).unwrap();
            assert!(dp_rank(&m, p).unwrap() >= dp_lower_bound(&data, p).unwrap());
        }
    }

    #[test]
    fn gs_threshold() {
        // d = 9, |R| - |X| = 9: 81/4 - 18 = 9/4 > 0.
        assert_eq!(golod_shafarevich(9, 0, 9), GsVerdict::Infinite);
        // Boundary: d = 8, |R| - |X| = 8 gives exactly zero.
        assert_eq!(golod_shafarevich(8, 0, 8), GsVerdict::Inconclusive);
        // d = 5 with |X| = |R|: 25/4 - 5 > 0.
        assert_eq!(golod_shafarevich(5, 3, 3), GsVerdict::Infinite);
    }

    #[test]
    fn gs_reduces_to_nine_threshold_when_deficiency_matches_rank() {
        for d in 0..=20u64 {
            let verdict = golod_shafarevich(d, 0, d);
            if d >= 9 {
                assert_eq!(verdict, GsVerdict::Infinite, "d = {d}");
            } else {
                assert_eq!(verdict, GsVerdict::Inconclusive, "d = {d}");
            }
        }
        // Slack only helps: |R| - |X| below d keeps the verdict infinite
        // once d clears the threshold.
        for d in 9..=20u64 {
            for deficit in 0..=d {
                assert_eq!(golod_shafarevich(d, d, d + deficit), GsVerdict::Infinite);
            }
        }
    }

    #[test]
    fn rank_invariant_under_meridian_power_moves() {
        // Replacing mu^n by mu when gcd(n, p) = 1 and deleting mu^n when
        // p | n leaves the mod-p rank unchanged.
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let gens = rng.gen_range(1..=4);
            let p = [2u64, 3, 5][rng.gen_range(0..3)];
            let mut base_relators = Vec::new();
            for _ in 0..rng.gen_range(0..=2) {
                let len = rng.gen_range(0..=4);
                let raw: Vec<crate::words::Letter> = (0..len)
                    .map(|_| crate::words::Letter {
                        gen: rng.gen_range(0..gens),
                        exp: if rng.gen::<bool>() { 1 } else { -1 },
                    })
                    .collect();
                base_relators.push(Word::reduce(gens, &raw).unwrap());
            }
            let mut meridians = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let len = rng.gen_range(1..=3);
                let raw: Vec<crate::words::Letter> = (0..len)
                    .map(|_| crate::words::Letter {
                        gen: rng.gen_range(0..gens),
                        exp: if rng.gen::<bool>() { 1 } else { -1 },
                    })
                    .collect();
                let mu = Word::reduce(gens, &raw).unwrap();
                let order = rng.gen_range(2..=6u32);
                meridians.push((mu, order));
            }
            let complement = Presentation::new(gens, base_relators.clone()).unwrap();
            let data = OrbifoldData {
                complement,
                meridians: meridians.clone(),
                singular_graph: SingularGraph::default(),
            };
            let full = meridional_presentation(&data).unwrap();
            let full_rank = dp_rank(&full, p).unwrap();

            // Transformed: drop p-divisible powers, strip coprime powers.
            let mut transformed = base_relators;
            for (mu, order) in &meridians {
                if u64::from(*order) % p == 0 {
                    continue;
                }
                transformed.push(mu.clone());
            }
            let alt = Presentation::new(gens, transformed).unwrap();
            assert_eq!(dp_rank(&alt, p).unwrap(), full_rank);
        }
    }

    #[test]
    fn dihedral_warning_rules() {
        let theta = theta_graph();
        assert!(theta.validate().unwrap().is_empty());

        // A dihedral(3) vertex with the wrong incident orders.
        let bad = SingularGraph {
            vertices: vec![SingularVertex {
                local_group: LocalGroup::Dihedral(3),
            }],
            edges: vec![
                SingularEdge::Arc {
                    ends: (0, 0),
                    order: 3,
                },
                SingularEdge::Arc {
                    ends: (0, 0),
                    order: 3,
                },
            ],
        };
        // Loops at the vertex: valence 4 (wrong) and orders wrong.
        let warnings = bad.validate().unwrap();
        assert!(!warnings.is_empty());

        // Klein four-group: three order-2 edges.
        let klein = SingularGraph {
            vertices: vec![
                SingularVertex {
                    local_group: LocalGroup::KleinFour,
                },
                SingularVertex {
                    local_group: LocalGroup::KleinFour,
                },
            ],
            edges: vec![
                SingularEdge::Arc {
                    ends: (0, 1),
                    order: 2,
                },
                SingularEdge::Arc {
                    ends: (0, 1),
                    order: 2,
                },
                SingularEdge::Arc {
                    ends: (0, 1),
                    order: 2,
                },
            ],
        };
        assert!(klein.validate().unwrap().is_empty());
    }
}
