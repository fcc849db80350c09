//! The pipeline on the exact rational torus: every quantity, including the
//! one-letter defect bound, is an exact rational comparison.
//!
//! epsilon = 1/4 certifies delta = 1/8, hence an 8x8 grid of half-open
//! cells centered on the (1/8)Z^2 lattice points. Generic translation
//! images split each cell across four targets, and the integer weighting
//! expands into a cover whose loops evaluate to the zero translation
//! exactly.
//!
//! Run with: cargo run --example perturb_torus

use virthom::models::RationalTorus;
use virthom::perturb::{run_pipeline, verify_epsilon_perturbation, PipelineConfig};
use virthom::ratio::parse_ratio;
use virthom::words::Alphabet;

fn main() {
    let model = RationalTorus::new(2).unwrap();
    let r = |s: &str| parse_ratio(s).unwrap();
    let phi = vec![
        model.elem(&[r("1/3"), r("1/6")]).unwrap(),
        model.elem(&[r("1/5"), r("1/10")]).unwrap(),
    ];
    let alphabet = Alphabet::of_size(2).unwrap();
    let mut config = PipelineConfig::new(r("1/4"), 9);
    config.verify_len = 6;

    let (result, report) = run_pipeline(&model, alphabet, phi, &config).unwrap();
    println!("{}", report.to_json());

    let defects = verify_epsilon_perturbation(&model, &result, 6).unwrap();
    println!(
        "checked {} words: max one-letter defect {} (epsilon = 1/4), {} failures",
        defects.words_checked, defects.max_defect, defects.failure_count
    );
}
