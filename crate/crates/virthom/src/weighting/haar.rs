//! Haar-measure weightings on a transition digraph.
//!
//! Vertex weights are cell measures; the weight of an `s`-labelled edge
//! `i -> j` is the measure of the part of cell `i` that lands in cell `j`
//! under right multiplication by `phi(s)`. Right-invariance of the measure
//! is what makes these balance, and the exact backends exhibit that with
//! zero residual.

use super::{LabeledDigraph, Weighting, WeightingError};
use crate::models::{LatticeModel, PartitionView};
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaarMode {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

/// Computes the Haar weighting of `y`, which must have been built from the
/// same `(model, partition, phi)` tuple.
///
/// Exact mode requires a backend with exactly measurable cells and balances
/// with zero residual. Monte Carlo mode estimates the same measures from
/// `samples` Haar-distributed points; an existing edge that receives no
/// sample is an undersampling error, never silently patched.
pub fn haar_weighting<M: LatticeModel>(
    y: &LabeledDigraph,
    model: &M,
    partition: &M::Partition,
    phi: &[M::Elem],
    mode: HaarMode,
) -> Result<Weighting, WeightingError> {
    if partition.cell_count() != y.num_vertices() || phi.len() != y.num_labels() {
        return Err(WeightingError::ShapeMismatch);
    }
    match mode {
        HaarMode::Exact => exact_weighting(y, model, partition, phi),
        HaarMode::MonteCarlo { samples, seed } => {
            monte_carlo_weighting(y, model, partition, phi, samples, seed)
        }
    }
}

fn exact_weighting<M: LatticeModel>(
    y: &LabeledDigraph,
    model: &M,
    partition: &M::Partition,
    phi: &[M::Elem],
) -> Result<Weighting, WeightingError> {
    let vertex: Vec<BigRational> = (0..y.num_vertices()).map(|v| partition.measure(v)).collect();
    let mut edge = vec![BigRational::zero(); y.edges().len()];
    for v in 0..y.num_vertices() {
        for (label, image) in phi.iter().enumerate() {
            let transitions = model
                .exact_transitions(partition, v, image)
                .ok_or_else(|| WeightingError::ShapeMismatch)?;
            for t in transitions {
                if let Some((idx, _)) = y
                    .edges_out(v, label)
                    .find(|(_, e)| e.dst == t.to_cell)
                {
                    edge[idx] += t.measure;
                }
                // A transition without a matching edge means y was built
                // from different data; the zero-measure check below
                // reports the mismatch.
            }
        }
    }
    for (i, w) in edge.iter().enumerate() {
        if w.is_zero() {
            return Err(WeightingError::ZeroMeasureEdge { edge: i });
        }
    }
    Ok(Weighting { vertex, edge })
}

fn monte_carlo_weighting<M: LatticeModel>(
    y: &LabeledDigraph,
    model: &M,
    partition: &M::Partition,
    phi: &[M::Elem],
    samples: usize,
    seed: u64,
) -> Result<Weighting, WeightingError> {
    if samples == 0 {
        return Err(WeightingError::ZeroEdgeEstimate { edge: 0 });
    }
    let mut vertex_hits = vec![0u64; y.num_vertices()];
    let mut edge_hits = vec![0u64; y.edges().len()];
    // Edge lookup by (src, label, dst).
    let mut lookup = std::collections::HashMap::new();
    for (i, e) in y.edges().iter().enumerate() {
        lookup.insert((e.src, e.label, e.dst), i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = model.sample_point(&mut rng);
        let i = model.cell_of(partition, &x);
        vertex_hits[i] += 1;
        for (label, image) in phi.iter().enumerate() {
            let j = model.cell_of(partition, &model.point_act(&x, image));
            if let Some(&idx) = lookup.get(&(i, label, j)) {
                edge_hits[idx] += 1;
            }
            // Transitions that were never promoted to edges of y are
            // dropped: the estimate targets the supplied digraph.
        }
    }
    for (i, &hits) in edge_hits.iter().enumerate() {
        if hits == 0 {
            return Err(WeightingError::ZeroEdgeEstimate { edge: i });
        }
    }
    let n = BigRational::from_integer((samples as u64).into());
    Ok(Weighting {
        vertex: vertex_hits
            .iter()
            .map(|&h| BigRational::from_integer(h.into()) / &n)
            .collect(),
        edge: edge_hits
            .iter()
            .map(|&h| BigRational::from_integer(h.into()) / &n)
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{FiniteModel, FloatTorus, GroupOps, LatticeModel, RationalTorus};
    use crate::ratio::parse_ratio;
    use crate::weighting::verify_weighting;
    use num_traits::{One, Signed, ToPrimitive};

    fn r(s: &str) -> BigRational {
        parse_ratio(s).unwrap()
    }

    fn z4_graph_and_setup() -> (LabeledDigraph, FiniteModel, crate::models::finite::FinitePartition, Vec<usize>) {
        let m = FiniteModel::z4_mod2();
        let part = m.partition(&r("1/2")).unwrap();
        let mut y = LabeledDigraph::new(2, 1);
        y.add_edge(0, 1, 0).unwrap();
        y.add_edge(1, 0, 0).unwrap();
        (y, m, part, vec![1usize])
    }

    #[test]
    fn exact_counting_weights_on_z4() {
        let (y, m, part, phi) = z4_graph_and_setup();
        let w = haar_weighting(&y, &m, &part, &phi, HaarMode::Exact).unwrap();
        assert_eq!(w.vertex, vec![r("1"), r("1")]);
        assert_eq!(w.edge, vec![r("1"), r("1")]);
        assert!(verify_weighting(&y, &w).unwrap().is_exactly_balanced());
    }

    #[test]
    fn single_loop_forced_by_balance() {
        let t = RationalTorus::new(1).unwrap();
        let part = t.partition(&r("2")).unwrap();
        let mut y = LabeledDigraph::new(1, 1);
        y.add_edge(0, 0, 0).unwrap();
        let phi = vec![t.elem(&[r("1/3")]).unwrap()];
        let w = haar_weighting(&y, &t, &part, &phi, HaarMode::Exact).unwrap();
        assert_eq!(w.vertex, vec![r("1")]);
        assert_eq!(w.edge, vec![r("1")]);
    }

    #[test]
    fn torus_grid_rectangle_overlap_areas() {
        // 4x4 grid, phi(s) = (3/10, 7/10): per-axis overlaps are 1/5 and
        // 1/20, so edge weights lie in {1/25, 1/100, 1/400} and each
        // vertex's out-edges sum to the cell area 1/16.
        let t = RationalTorus::new(2).unwrap();
        let part = t.partition(&r("1/4")).unwrap();
        let phi = vec![t.elem(&[r("3/10"), r("7/10")]).unwrap()];
        let mut y = LabeledDigraph::new(16, 1);
        for v in 0..16 {
            for tr in t.exact_transitions(&part, v, &phi[0]).unwrap() {
                y.add_edge(v, tr.to_cell, 0).unwrap();
            }
        }
        assert_eq!(y.edges().len(), 64); // 4 targets per cell
        let w = haar_weighting(&y, &t, &part, &phi, HaarMode::Exact).unwrap();
        let expected = [r("1/25"), r("1/100"), r("1/400")];
        for e in &w.edge {
            assert!(expected.contains(e), "unexpected weight {e}");
        }
        let report = verify_weighting(&y, &w).unwrap();
        assert!(report.is_exactly_balanced());
        for v in 0..16 {
            assert_eq!(w.vertex[v], r("1/16"));
        }
    }

    #[test]
    fn monte_carlo_residuals_within_binomial_error() {
        let t = FloatTorus::new(2).unwrap();
        let part = t.partition(&r("1/2")).unwrap();
        let phi = vec![vec![0.3, 0.7]];
        let mut y = LabeledDigraph::new(4, 1);
        // Build edges from a coarse sample first.
        let exact = RationalTorus::new(2).unwrap();
        let epart = exact.partition(&r("1/2")).unwrap();
        let ephi = vec![exact.elem(&[r("3/10"), r("7/10")]).unwrap()];
        for v in 0..4 {
            for tr in exact.exact_transitions(&epart, v, &ephi[0]).unwrap() {
                y.add_edge(v, tr.to_cell, 0).unwrap();
            }
        }
        let samples = 1_000_000usize;
        let w = haar_weighting(&y, &t, &part, &phi, HaarMode::MonteCarlo { samples, seed: 424242 })
            .unwrap();
        let report = verify_weighting(&y, &w).unwrap();
        // Binomial error model: each constraint residual is a difference of
        // two frequency estimates of the same measure, so its standard
        // error is at most sqrt(2 * mu (1 - mu) / N) with mu <= 1/4 here.
        let se = (2.0 * 0.25 * 0.75 / samples as f64).sqrt();
        let max = report.max_abs_residual.to_f64().unwrap();
        assert!(max <= 5.0 * se, "residual {max} exceeds 5 * {se}");
    }

    #[test]
    fn monte_carlo_zero_edge_estimate_is_an_error() {
        let t = FloatTorus::new(1).unwrap();
        let part = t.partition(&r("1/2")).unwrap();
        let phi = vec![vec![0.26]];
        let mut y = LabeledDigraph::new(2, 1);
        y.add_edge(0, 0, 0).unwrap();
        y.add_edge(0, 1, 0).unwrap();
        y.add_edge(1, 0, 0).unwrap();
        y.add_edge(1, 1, 0).unwrap();
        // One sample cannot hit all four edges.
        let err = haar_weighting(&y, &t, &part, &phi, HaarMode::MonteCarlo { samples: 1, seed: 1 })
            .unwrap_err();
        assert!(matches!(err, WeightingError::ZeroEdgeEstimate { .. }));
    }

    #[test]
    fn exact_balance_is_right_invariance_made_testable() {
        // Over many random rational translations, the exact weighting
        // balances with zero residual.
        use rand::SeedableRng;
        let t = RationalTorus::new(2).unwrap();
        let part = t.partition(&r("1/3")).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let phi = vec![t.sample_elem(&[], &mut rng), t.sample_elem(&[], &mut rng)];
            let mut y = LabeledDigraph::new(part.cell_count(), 2);
            for v in 0..part.cell_count() {
                for (label, image) in phi.iter().enumerate() {
                    for tr in t.exact_transitions(&part, v, image).unwrap() {
                        y.add_edge(v, tr.to_cell, label).unwrap();
                    }
                }
            }
            let w = haar_weighting(&y, &t, &part, &phi, HaarMode::Exact).unwrap();
            assert!(w.vertex.iter().all(|x| x.is_positive()));
            assert!(w.edge.iter().all(|x| x.is_positive()));
            assert!(verify_weighting(&y, &w).unwrap().is_exactly_balanced());
            assert_eq!(w.total_vertex_weight(), BigRational::one());
        }
    }
}
