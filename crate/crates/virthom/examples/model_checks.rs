//! Axiom spot-checks across all backends, including the matrix model used
//! for defect arithmetic only.
//!
//! Run with: cargo run --example model_checks

use virthom::models::{
    group_checks, lattice_checks, FiniteModel, GroupOps, MatrixModel, RationalTorus,
};
use virthom::perturb::choose_delta;
use virthom::ratio::{format_ratio, parse_ratio};

fn main() {
    let samples = 200;

    let finite = FiniteModel::z4_mod2();
    let finite_report = lattice_checks(&finite, &[1], samples, 1);
    println!(
        "finite Z/4 with lattice {{0, 2}}: all passed = {}",
        finite_report.all_passed()
    );

    let torus = RationalTorus::new(2).unwrap();
    let r = |s: &str| parse_ratio(s).unwrap();
    let phi = vec![torus.elem(&[r("1/3"), r("1/5")]).unwrap()];
    let torus_report = lattice_checks(&torus, &phi, samples, 2);
    println!(
        "rational torus: all passed = {}",
        torus_report.all_passed()
    );

    let matrix = MatrixModel::new();
    let images = MatrixModel::schottky_pair(2.0).unwrap();
    let matrix_report = group_checks(&matrix, &images, samples, 3);
    println!(
        "matrix model ({}): all passed = {}",
        matrix.describe(),
        matrix_report.all_passed()
    );
    for entry in &matrix_report.entries {
        println!("  {:<32} {}", entry.name, entry.passed);
    }

    // The matrix model still certifies a conjugation radius from the
    // generator norms, even though it cannot run the pipeline.
    for eps in ["1/10", "1/100"] {
        let delta = choose_delta(&matrix, &images, &r(eps)).unwrap();
        println!(
            "epsilon = {eps}: certified delta = {} (~{:.6})",
            format_ratio(&delta),
            num_traits::ToPrimitive::to_f64(&delta).unwrap(),
        );
    }
}
