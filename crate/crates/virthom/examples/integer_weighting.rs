//! Weightings on a labelled transition digraph: the measure-theoretic
//! weighting, the integer solution of the balance equations, and the
//! residual report.
//!
//! Run with: cargo run --example integer_weighting

use virthom::models::{LatticeModel, RationalTorus};
use virthom::ratio::{format_ratio, parse_ratio};
use virthom::weighting::{
    haar_weighting, solve_integer_weighting, verify_weighting, HaarMode, LabeledDigraph,
};

fn main() {
    // Hand-built digraph: one label, edges 0->0, 0->1, 1->0. Balance forces
    // w(e01) = w(e10) = w(1) and w(e00) = w(0) - w(1); the smallest strictly
    // positive integer solution is w = (2, 1) with unit edges.
    let mut y = LabeledDigraph::new(2, 1);
    y.add_edge(0, 0, 0).unwrap();
    y.add_edge(0, 1, 0).unwrap();
    y.add_edge(1, 0, 0).unwrap();
    let w = solve_integer_weighting(&y).unwrap();
    println!(
        "hand-built digraph: vertex weights {:?}, edge weights {:?}",
        w.vertex.iter().map(format_ratio).collect::<Vec<_>>(),
        w.edge.iter().map(format_ratio).collect::<Vec<_>>(),
    );
    let report = verify_weighting(&y, &w).unwrap();
    println!(
        "balance residuals: {} constraints, max |residual| = {}",
        report.residuals.len(),
        format_ratio(&report.max_abs_residual),
    );

    // Measure-theoretic weighting on a 4x4 torus grid: cell measures and
    // overlap areas balance exactly because the measure is right-invariant.
    let torus = RationalTorus::new(2).unwrap();
    let r = |s: &str| parse_ratio(s).unwrap();
    let part = torus.partition(&r("1/4")).unwrap();
    let phi = vec![torus.elem(&[r("3/10"), r("7/10")]).unwrap()];
    let mut grid = LabeledDigraph::new(16, 1);
    for v in 0..16 {
        for t in torus.exact_transitions(&part, v, &phi[0]).unwrap() {
            grid.add_edge(v, t.to_cell, 0).unwrap();
        }
    }
    let haar = haar_weighting(&grid, &torus, &part, &phi, HaarMode::Exact).unwrap();
    println!(
        "torus 4x4 grid with shift (3/10, 7/10): {} edges, sample edge weights {:?}",
        grid.edges().len(),
        haar.edge.iter().take(4).map(format_ratio).collect::<Vec<_>>(),
    );
    let haar_report = verify_weighting(&grid, &haar).unwrap();
    println!(
        "exact measure weighting balances: max residual = {}",
        format_ratio(&haar_report.max_abs_residual),
    );
    let integral = solve_integer_weighting(&grid).unwrap();
    println!(
        "integer weighting: total vertex weight {}, total edge weight {}",
        format_ratio(&integral.total_vertex_weight()),
        format_ratio(&integral.total_edge_weight()),
    );
}
