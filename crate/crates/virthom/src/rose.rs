//! Finite coverings of the rose (wedge of circles) with `|S|` petals.
//!
//! A covering is stored as one permutation of the vertex set per generator:
//! `out_perm[s][v]` is the endpoint of the `s`-labelled edge leaving `v`.
//! Words trace paths deterministically in both directions, and the loops
//! based at the basepoint are exactly the elements of the corresponding
//! finite-index subgroup `F'` of the free group.

use crate::words::{Alphabet, Letter, Word, WordError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RoseError {
    #[error("vertex {vertex} out of range for {num_vertices} vertices")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },
    #[error("need at least one vertex and one generator")]
    Degenerate,
    #[error("map for generator {gen} is not a bijection on the vertex set")]
    NotBijective { gen: usize },
    #[error("expected {rank} generator maps, got {got}")]
    WrongRank { rank: usize, got: usize },
    #[error("graph is not connected from the basepoint, so it is not a covering of the rose")]
    NotACovering,
    #[error(transparent)]
    Word(#[from] WordError),
}

/// The `s`-labelled edge leaving `src`; together with a sign this names
/// every directed edge traversal in the cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeRef {
    pub src: usize,
    pub gen: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathTrace {
    pub end: usize,
    pub steps: Vec<(EdgeRef, i8)>,
}

/// Finite covering graph of the rose: per-generator vertex permutations
/// plus a basepoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoseCover {
    rank: usize,
    num_vertices: usize,
    basepoint: usize,
    out_perm: Vec<Vec<usize>>,
    in_perm: Vec<Vec<usize>>,
}

impl RoseCover {
    pub fn new(
        num_vertices: usize,
        basepoint: usize,
        out_perm: Vec<Vec<usize>>,
    ) -> Result<Self, RoseError> {
        if num_vertices == 0 || out_perm.is_empty() {
            return Err(RoseError::Degenerate);
        }
        if basepoint >= num_vertices {
            return Err(RoseError::VertexOutOfRange {
                vertex: basepoint,
                num_vertices,
            });
        }
        let rank = out_perm.len();
        let mut in_perm = vec![vec![usize::MAX; num_vertices]; rank];
        for (gen, map) in out_perm.iter().enumerate() {
            if map.len() != num_vertices {
                return Err(RoseError::NotBijective { gen });
            }
            for (v, &w) in map.iter().enumerate() {
                if w >= num_vertices {
                    return Err(RoseError::VertexOutOfRange {
                        vertex: w,
                        num_vertices,
                    });
                }
                if in_perm[gen][w] != usize::MAX {
                    return Err(RoseError::NotBijective { gen });
                }
                in_perm[gen][w] = v;
            }
        }
        Ok(RoseCover {
            rank,
            num_vertices,
            basepoint,
            out_perm,
            in_perm,
        })
    }

    /// The rose itself: one vertex, every generator a loop (index-1 cover).
    pub fn rose(rank: usize) -> RoseCover {
        RoseCover::new(1, 0, vec![vec![0]; rank.max(1)]).expect("rose is valid")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn out_target(&self, gen: usize, v: usize) -> usize {
        self.out_perm[gen][v]
    }

    pub fn in_source(&self, gen: usize, v: usize) -> usize {
        self.in_perm[gen][v]
    }

    /// True iff every labelled map is a bijection (guaranteed by
    /// construction) and the graph is connected: the defining property of a
    /// covering of the rose.
    pub fn is_rose_covering(&self) -> bool {
        self.component_of(self.basepoint).iter().all(|&c| c)
    }

    fn component_of(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.num_vertices];
        let mut queue = VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for gen in 0..self.rank {
                for w in [self.out_perm[gen][v], self.in_perm[gen][v]] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        seen
    }

    /// Follows `word` from `start`: out-edges for exponent +1, in-edges for
    /// -1. Total because the per-label maps are bijections.
    pub fn trace_path(&self, start: usize, word: &Word) -> Result<PathTrace, RoseError> {
        if start >= self.num_vertices {
            return Err(RoseError::VertexOutOfRange {
                vertex: start,
                num_vertices: self.num_vertices,
            });
        }
        if word.rank() != self.rank {
            return Err(RoseError::Word(WordError::RankMismatch {
                left: word.rank(),
                right: self.rank,
            }));
        }
        let mut cur = start;
        let mut steps = Vec::with_capacity(word.len());
        for l in word.letters() {
            let (edge, next) = self.step(cur, *l);
            steps.push((edge, l.exp));
            cur = next;
        }
        Ok(PathTrace { end: cur, steps })
    }

    /// Single traversal step; returns the edge used and the new vertex.
    pub fn step(&self, v: usize, l: Letter) -> (EdgeRef, usize) {
        if l.exp > 0 {
            let next = self.out_perm[l.gen][v];
            (EdgeRef { src: v, gen: l.gen }, next)
        } else {
            let src = self.in_perm[l.gen][v];
            (EdgeRef { src, gen: l.gen }, src)
        }
    }

    /// Membership in `F' = pi_1(cover, basepoint)`: words whose path from the
    /// basepoint is a loop.
    pub fn is_in_subgroup(&self, word: &Word) -> Result<bool, RoseError> {
        Ok(self.trace_path(self.basepoint, word)?.end == self.basepoint)
    }

    /// `[F : F']`, the number of vertices of a connected cover.
    pub fn subgroup_index(&self) -> Result<usize, RoseError> {
        if !self.is_rose_covering() {
            return Err(RoseError::NotACovering);
        }
        Ok(self.num_vertices)
    }

    /// Nielsen-Schreier rank of `F'`: `|V|(|S|-1) + 1`.
    pub fn subgroup_rank(&self) -> Result<usize, RoseError> {
        Ok(self.subgroup_index()? * (self.rank - 1) + 1)
    }

    /// A free basis of `F'` from a breadth-first spanning tree based at the
    /// basepoint, with generator-index tie-breaking: one basis word per
    /// non-tree edge.
    pub fn schreier_basis(&self) -> Result<Vec<Word>, RoseError> {
        if !self.is_rose_covering() {
            return Err(RoseError::NotACovering);
        }
        // word_to[v] spells the tree path basepoint -> v.
        let mut word_to: Vec<Option<Word>> = vec![None; self.num_vertices];
        let mut tree_edges: Vec<bool> = vec![false; self.num_vertices * self.rank];
        word_to[self.basepoint] = Some(Word::empty(self.rank));
        let mut queue = VecDeque::new();
        queue.push_back(self.basepoint);
        while let Some(v) = queue.pop_front() {
            let base = word_to[v].clone().expect("visited");
            for gen in 0..self.rank {
                let fwd = self.out_perm[gen][v];
                if word_to[fwd].is_none() {
                    tree_edges[v * self.rank + gen] = true;
                    word_to[fwd] =
                        Some(base.concat(&Word::letter(self.rank, gen, 1)?).expect("rank"));
                    queue.push_back(fwd);
                }
                let back = self.in_perm[gen][v];
                if word_to[back].is_none() {
                    tree_edges[back * self.rank + gen] = true;
                    word_to[back] =
                        Some(base.concat(&Word::letter(self.rank, gen, -1)?).expect("rank"));
                    queue.push_back(back);
                }
            }
        }
        let mut basis = Vec::new();
        for v in 0..self.num_vertices {
            for gen in 0..self.rank {
                if tree_edges[v * self.rank + gen] {
                    continue;
                }
                let target = self.out_perm[gen][v];
                let w_v = word_to[v].clone().expect("connected");
                let w_t = word_to[target].clone().expect("connected");
                let word = w_v
                    .concat(&Word::letter(self.rank, gen, 1)?)?
                    .concat(&w_t.invert())?;
                basis.push(word);
            }
        }
        Ok(basis)
    }

    /// GraphViz rendering; vertex annotations show the image in the
    /// transition digraph when a projection is supplied.
    pub fn to_dot(&self, alphabet: &Alphabet, projection: Option<&CoverProjection>) -> String {
        let mut out = String::from("digraph cover {\n");
        for v in 0..self.num_vertices {
            let mark = if v == self.basepoint { ", shape=doublecircle" } else { "" };
            match projection {
                Some(p) => out.push_str(&format!(
                    "  v{v} [label=\"{v} | cell {}\"{mark}];\n",
                    p.vertex_map[v]
                )),
                None => out.push_str(&format!("  v{v} [label=\"{v}\"{mark}];\n")),
            }
        }
        for gen in 0..self.rank {
            for v in 0..self.num_vertices {
                out.push_str(&format!(
                    "  v{v} -> v{} [label=\"{}\"];\n",
                    self.out_perm[gen][v],
                    alphabet.name(gen)
                ));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_data(&self, alphabet: &Alphabet) -> RoseCoverData {
        let mut out_perm = BTreeMap::new();
        for gen in 0..self.rank {
            out_perm.insert(alphabet.name(gen).to_string(), self.out_perm[gen].clone());
        }
        RoseCoverData {
            num_vertices: self.num_vertices,
            basepoint: self.basepoint,
            out_perm,
        }
    }
}

/// JSON form of a cover: `{num_vertices, basepoint, out_perm: {label: [..]}}`.
/// Labels are sorted, and supply the alphabet.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoseCoverData {
    pub num_vertices: usize,
    pub basepoint: usize,
    pub out_perm: BTreeMap<String, Vec<usize>>,
}

impl RoseCoverData {
    pub fn build(&self) -> Result<(Alphabet, RoseCover), RoseError> {
        let names: Vec<String> = self.out_perm.keys().cloned().collect();
        let alphabet = Alphabet::new(names)?;
        let maps: Vec<Vec<usize>> = self.out_perm.values().cloned().collect();
        let cover = RoseCover::new(self.num_vertices, self.basepoint, maps)?;
        Ok((alphabet, cover))
    }
}

/// Projection from a cover onto the transition digraph it was expanded
/// from: vertex fibers and, for each out-edge `(gen, src)`, the digraph
/// edge it copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverProjection {
    pub vertex_map: Vec<usize>,
    /// `edge_map[gen][src]` = index of the digraph edge under the
    /// `gen`-labelled edge leaving `src`.
    pub edge_map: Vec<Vec<usize>>,
}

impl CoverProjection {
    pub fn edge_image(&self, e: EdgeRef) -> usize {
        self.edge_map[e.gen][e.src]
    }
}
