//! Graph Cheeger constants: exact minimization over balanced vertex sets,
//! and a spectral sweep upper bound from a Fiedler-style ordering.
//!
//! Finite-graph convention: minimize `|dA| / |A|` over nonempty `A` with
//! `2 |A| <= |V|`. Sweep sets are prefixes of the second-Laplacian-
//! eigenvector ordering, so the sweep value always dominates the exact one.

use super::triangulation::SkeletonGraph;
use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::Rational64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheegerError {
    #[error("need at least two vertices")]
    TooSmall,
    #[error("exact mode handles at most {cap} vertices, got {got}")]
    CapExceeded { cap: usize, got: usize },
}

fn boundary_count(graph: &SkeletonGraph, mask: u64) -> usize {
    graph
        .edges()
        .iter()
        .filter(|&&(u, v)| ((mask >> u) & 1) != ((mask >> v) & 1))
        .count()
}

/// Exact Cheeger constant by exhaustive enumeration of balanced subsets.
pub fn cheeger_exact(graph: &SkeletonGraph, cap: usize) -> Result<Rational64, CheegerError> {
    let n = graph.num_vertices();
    if n < 2 {
        return Err(CheegerError::TooSmall);
    }
    if n > cap || n > 63 {
        return Err(CheegerError::CapExceeded {
            cap: cap.min(63),
            got: n,
        });
    }
    let mut best: Option<Rational64> = None;
    for mask in 1u64..(1 << n) {
        let size = mask.count_ones() as usize;
        if size == 0 || 2 * size > n {
            continue;
        }
        let ratio = Rational64::new(boundary_count(graph, mask) as i64, size as i64);
        if best.as_ref().is_none_or(|b| ratio < *b) {
            best = Some(ratio);
        }
    }
    Ok(best.expect("n >= 2 admits a singleton"))
}

/// Sweep upper bound: order vertices by the eigenvector of the second
/// smallest Laplacian eigenvalue (ties by index) and take the best
/// balanced prefix.
pub fn cheeger_sweep(graph: &SkeletonGraph) -> Result<Rational64, CheegerError> {
    let n = graph.num_vertices();
    if n < 2 {
        return Err(CheegerError::TooSmall);
    }
    let mut laplacian = DMatrix::<f64>::zeros(n, n);
    for &(u, v) in graph.edges() {
        if u == v {
            continue;
        }
        laplacian[(u, u)] += 1.0;
        laplacian[(v, v)] += 1.0;
        laplacian[(u, v)] -= 1.0;
        laplacian[(v, u)] -= 1.0;
    }
    let eigen = SymmetricEigen::new(laplacian);
    // Index of the second smallest eigenvalue.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[a]
            .partial_cmp(&eigen.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let fiedler = eigen.eigenvectors.column(order[1]);
    let mut vertex_order: Vec<usize> = (0..n).collect();
    vertex_order.sort_by(|&a, &b| {
        fiedler[a]
            .partial_cmp(&fiedler[b])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut mask = 0u64;
    let mut best: Option<Rational64> = None;
    for (k, &v) in vertex_order.iter().enumerate() {
        mask |= 1 << v;
        let size = k + 1;
        if 2 * size > n {
            break;
        }
        let ratio = Rational64::new(boundary_count(graph, mask) as i64, size as i64);
        if best.as_ref().is_none_or(|b| ratio < *b) {
            best = Some(ratio);
        }
    }
    Ok(best.expect("prefix of size one is balanced for n >= 2"))
}
