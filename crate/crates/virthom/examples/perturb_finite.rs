//! End-to-end pipeline on an exact finite backend.
//!
//! The model is Z/4 with the index-2 subgroup {0, 2} as lattice, and the
//! single generator mapping to 1. The pipeline partitions the two cosets
//! into singleton cells, builds the swap digraph, weights it, expands the
//! double cover of the rose, and verifies that the perturbed map restricts
//! to a homomorphism on the accepted subgroup (the even-length words).
//!
//! Run with: cargo run --example perturb_finite

use virthom::models::FiniteModel;
use virthom::perturb::{phi_epsilon, run_pipeline, PipelineConfig};
use virthom::ratio::parse_ratio;
use virthom::words::{Alphabet, Word};

fn main() {
    let model = FiniteModel::z4_mod2();
    let alphabet = Alphabet::of_size(1).unwrap();
    let mut config = PipelineConfig::new(parse_ratio("1/2").unwrap(), 7);
    config.verify_len = 8;

    let (result, report) = run_pipeline(&model, alphabet.clone(), vec![1], &config).unwrap();
    println!("{}", report.to_json());

    let s = Word::letter(1, 0, 1).unwrap();
    println!("accepted subgroup F' inside F = F(s):");
    for k in 0..=4i64 {
        let w = s.pow(k);
        println!(
            "  {:<12} accepted = {:<5} phi_eps = {}",
            w.format(&alphabet),
            result.cover.is_in_subgroup(&w).unwrap(),
            phi_epsilon(&model, &result, &w).unwrap(),
        );
    }
    println!(
        "index {} / rank {} / basis {:?}",
        result.cover.subgroup_index().unwrap(),
        result.cover.subgroup_rank().unwrap(),
        result
            .cover
            .schreier_basis()
            .unwrap()
            .iter()
            .map(|b| b.format(&alphabet))
            .collect::<Vec<_>>(),
    );
}
