//! Expanding a weighted digraph into a covering of the rose, and reading
//! off the subgroup it accepts.
//!
//! The bijections gluing edge copies to vertex copies are genuinely
//! arbitrary, so they are drawn from a seeded generator: different seeds
//! may give different (even disconnected, then pruned) covers, while a
//! fixed seed is fully reproducible.
//!
//! Run with: cargo run --example expand_cover

use virthom::ratio::parse_ratio;
use virthom::weighting::{expand_cover, LabeledDigraph, Weighting};
use virthom::words::Alphabet;

fn main() {
    // One vertex with a single loop, weight 2: the cover is either the
    // connected double cover or two disjoint loops (pruned back to the
    // rose), depending on the seeded bijection.
    let mut y = LabeledDigraph::new(1, 1);
    y.add_edge(0, 0, 0).unwrap();
    let w = Weighting {
        vertex: vec![parse_ratio("2").unwrap()],
        edge: vec![parse_ratio("2").unwrap()],
    };
    for seed in 0..6 {
        let exp = expand_cover(&y, &w, 0, seed).unwrap();
        println!(
            "seed {seed}: {} vertices before pruning, index {} after, covering = {}",
            exp.total_vertices_before_pruning,
            exp.cover.num_vertices(),
            exp.cover.is_rose_covering(),
        );
    }

    // A two-label digraph expanded with weight 3 everywhere it balances.
    let mut y2 = LabeledDigraph::new(2, 2);
    y2.add_edge(0, 1, 0).unwrap();
    y2.add_edge(1, 0, 0).unwrap();
    y2.add_edge(0, 0, 1).unwrap();
    y2.add_edge(1, 1, 1).unwrap();
    let three = parse_ratio("3").unwrap();
    let w2 = Weighting {
        vertex: vec![three.clone(), three.clone()],
        edge: vec![three.clone(), three.clone(), three.clone(), three],
    };
    let alphabet2 = Alphabet::of_size(2).unwrap();
    let exp = expand_cover(&y2, &w2, 0, 42).unwrap();
    println!(
        "\ntwo-label expansion: index {}, rank {}",
        exp.cover.subgroup_index().unwrap(),
        exp.cover.subgroup_rank().unwrap(),
    );
    println!("Schreier basis of the accepted subgroup:");
    for b in exp.cover.schreier_basis().unwrap() {
        println!("  {}", b.format(&alphabet2));
    }
    println!(
        "\nGraphViz rendering of the cover:\n{}",
        exp.cover.to_dot(&alphabet2, Some(&exp.projection))
    );
}
