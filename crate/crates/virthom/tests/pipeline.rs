//! End-to-end pipeline runs on the exact and sampled backends.

use num_rational::BigRational;
use virthom::models::{
    FiniteModel, FloatTorus, GroupOps, LatticeModel, MetricScalar, RationalTorus,
};
use virthom::perturb::{
    cocycle_consistent, phi_epsilon, run_pipeline, verify_epsilon_perturbation,
    verify_virtual_hom, EdgeDetection, PipelineConfig,
};
use virthom::ratio::parse_ratio;
use virthom::words::{enumerate_words, Alphabet, Letter, Word};

fn r(s: &str) -> BigRational {
    parse_ratio(s).unwrap()
}

#[test]
fn z4_end_to_end() {
    let model = FiniteModel::z4_mod2();
    let alphabet = Alphabet::of_size(1).unwrap();
    let mut config = PipelineConfig::new(r("1/2"), 7);
    config.verify_len = 8;
    let (result, report) = run_pipeline(&model, alphabet, vec![1], &config).unwrap();

    assert!(report.success, "{}", report.to_json());
    assert_eq!(report.subgroup_index, 2);
    assert_eq!(report.subgroup_rank, 1);
    assert_eq!(report.haar_balanced, Some(true));
    assert_eq!(report.defect_failures.failure_count, 0);
    assert_eq!(report.membership_failures.failure_count, 0);
    assert_eq!(report.hom_failures.failure_count, 0);
    assert_eq!(report.max_one_letter_defect, "0");

    // F' is exactly the even-length words in s.
    let s = Word::letter(1, 0, 1).unwrap();
    for k in 0..=8i64 {
        let accepted = result.cover.is_in_subgroup(&s.pow(k)).unwrap();
        assert_eq!(accepted, k % 2 == 0, "k = {k}");
    }
    // phi_eps(s^2) = 2, a lattice element.
    let value = phi_epsilon(&model, &result, &s.pow(2)).unwrap();
    assert_eq!(value, 2);
    assert!(model.is_in_lattice(&value));
    // phi_eps of the empty word is the identity.
    assert_eq!(phi_epsilon(&model, &result, &Word::empty(1)).unwrap(), 0);

    assert!(cocycle_consistent(&model, &result, 6).unwrap());
}

#[test]
fn rose_cover_of_exact_homomorphism_is_a_homomorphism() {
    // Trivial lattice quotient: one coset, index-1 cover, phi_eps = phi.
    let model = FiniteModel::new(FiniteModel::cyclic_table(6), vec![0, 1, 2, 3, 4, 5]).unwrap();
    let alphabet = Alphabet::of_size(2).unwrap();
    let mut config = PipelineConfig::new(r("1/2"), 1);
    config.verify_len = 5;
    let (result, report) = run_pipeline(&model, alphabet, vec![1, 4], &config).unwrap();
    assert!(report.success);
    assert_eq!(report.subgroup_index, 1);
    // Every word is accepted and phi_eps is multiplicative everywhere.
    assert_eq!(report.membership_failures.failure_count, 0);
    assert_eq!(report.hom_failures.failure_count, 0);
    for w in enumerate_words(2, 4) {
        assert!(result.cover.is_in_subgroup(&w).unwrap());
    }
}

#[test]
fn rational_torus_end_to_end_is_exact() {
    let model = RationalTorus::new(2).unwrap();
    let alphabet = Alphabet::of_size(2).unwrap();
    let phi = vec![
        model.elem(&[r("1/3"), r("0")]).unwrap(),
        model.elem(&[r("0"), r("1/3")]).unwrap(),
    ];
    let mut config = PipelineConfig::new(r("1/2"), 11);
    config.verify_len = 4;
    let (result, report) = run_pipeline(&model, alphabet, phi.clone(), &config).unwrap();
    assert!(report.success, "{}", report.to_json());
    assert_eq!(report.delta, "1/4");
    assert_eq!(report.cells, 16);
    assert_eq!(report.haar_balanced, Some(true));
    assert_eq!(report.membership_failures.failure_count, 0);
    assert_eq!(report.hom_failures.failure_count, 0);
    assert_eq!(report.defect_failures.failure_count, 0);

    // Defects are nonzero (the covering genuinely perturbs) but within
    // epsilon, by exact rational comparison.
    let defects = verify_epsilon_perturbation(&model, &result, 4).unwrap();
    assert!(defects.max_defect <= r("1/2"));
    assert!(defects.max_defect > r("0"));

    // Accepted words evaluate to the identity translation exactly.
    let hom = verify_virtual_hom(&model, &result, 4).unwrap();
    assert!(hom.is_clean());
    assert!(hom.accepted_checked > 0);

    assert!(cocycle_consistent(&model, &result, 4).unwrap());
}

#[test]
fn float_torus_sampled_detection_matches_exact_shape() {
    let model = FloatTorus::new(2).unwrap();
    let alphabet = Alphabet::of_size(1).unwrap();
    let phi = vec![vec![0.3, 0.7]];
    let mut config = PipelineConfig::new(r("1/2"), 5);
    config.verify_len = 5;
    config.detection = Some(EdgeDetection::Sampled { per_cell: 1024 });
    let (result, report) = run_pipeline(&model, alphabet, phi, &config).unwrap();
    assert!(report.success, "{}", report.to_json());
    // 4x4 grid; the generic shift meets four cells per source cell.
    assert_eq!(report.cells, 16);
    assert_eq!(report.digraph_edges, 64);
    assert!(report.haar_balanced.is_none());

    let defects = verify_epsilon_perturbation(&model, &result, 5).unwrap();
    assert!(defects.is_clean());
    assert!(defects.max_defect <= 0.5);
}

#[test]
fn undersampling_is_reported_not_patched() {
    let model = FloatTorus::new(2).unwrap();
    let alphabet = Alphabet::of_size(1).unwrap();
    let phi = vec![vec![0.3, 0.7]];
    let mut config = PipelineConfig::new(r("1/16"), 5);
    config.detection = Some(EdgeDetection::Sampled { per_cell: 1 });
    let err = run_pipeline(&model, alphabet, phi, &config).unwrap_err();
    assert!(matches!(
        err,
        virthom::perturb::PipelineError::Undersampled { .. }
    ));
}

#[test]
fn phi_eps_is_spelling_invariant() {
    // Evaluate unreduced spellings (with cancelling pairs inserted) by
    // stepping the cover letter by letter; the result must agree with the
    // library's reduced-word evaluation.
    use rand::{Rng, SeedableRng};
    let model = FiniteModel::new(
        FiniteModel::dihedral_table(6),
        FiniteModel::subgroup_closure(&FiniteModel::dihedral_table(6), &[1]),
    )
    .unwrap();
    let alphabet = Alphabet::of_size(2).unwrap();
    let mut config = PipelineConfig::new(r("1/2"), 23);
    config.verify_len = 4;
    let (result, _) = run_pipeline(&model, alphabet, vec![6, 7], &config).unwrap();

    let raw_eval = |letters: &[Letter]| -> usize {
        let mut vertex = result.cover.basepoint();
        let mut acc = model.identity();
        for &l in letters {
            let (edge, next) = result.cover.step(vertex, l);
            let psi = &result.psi[result.projection.edge_image(edge)];
            let factor = if l.exp > 0 { *psi } else { model.inv(psi) };
            acc = model.mul(&acc, &factor);
            vertex = next;
        }
        acc
    };

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let len = rng.gen_range(0..6);
        let mut letters: Vec<Letter> = (0..len)
            .map(|_| Letter {
                gen: rng.gen_range(0..2),
                exp: if rng.gen::<bool>() { 1 } else { -1 },
            })
            .collect();
        let reduced = Word::reduce(2, &letters).unwrap();
        let direct = phi_epsilon(&model, &result, &reduced).unwrap();
        // Insert a few cancelling pairs at random positions.
        for _ in 0..rng.gen_range(1..4) {
            let pos = rng.gen_range(0..=letters.len());
            let l = Letter {
                gen: rng.gen_range(0..2),
                exp: if rng.gen::<bool>() { 1 } else { -1 },
            };
            letters.insert(pos, l.inverse());
            letters.insert(pos, l);
        }
        assert_eq!(raw_eval(&letters), direct);
        // And the reduced word is unchanged by the insertions.
        assert_eq!(Word::reduce(2, &letters).unwrap(), reduced);
    }
}

#[test]
fn reports_are_deterministic_per_seed() {
    let model = FiniteModel::z4_mod2();
    let alphabet = Alphabet::of_size(1).unwrap();
    let mut config = PipelineConfig::new(r("1/2"), 42);
    config.verify_len = 6;
    let (_, report_a) = run_pipeline(&model, alphabet.clone(), vec![1], &config).unwrap();
    let (_, report_b) = run_pipeline(&model, alphabet, vec![1], &config).unwrap();
    assert_eq!(report_a.to_json(), report_b.to_json());
}

#[test]
fn accepted_set_is_closed_under_group_operations() {
    let model = FiniteModel::new(FiniteModel::cyclic_table(8), vec![0, 4]).unwrap();
    let alphabet = Alphabet::of_size(2).unwrap();
    let mut config = PipelineConfig::new(r("1/2"), 13);
    config.verify_len = 4;
    let (result, report) = run_pipeline(&model, alphabet, vec![1, 3], &config).unwrap();
    assert!(report.success);
    let words = enumerate_words(2, 4);
    let accepted: Vec<&Word> = words
        .iter()
        .filter(|w| result.cover.is_in_subgroup(w).unwrap())
        .collect();
    assert!(!accepted.is_empty());
    for u in accepted.iter().take(12) {
        assert!(result
            .cover
            .is_in_subgroup(&u.invert())
            .unwrap());
        for v in accepted.iter().take(12) {
            let prod = u.concat(v).unwrap();
            assert!(result.cover.is_in_subgroup(&prod).unwrap());
            // Multiplicativity of phi_eps on the subgroup.
            let lhs = phi_epsilon(&model, &result, &prod).unwrap();
            let rhs = model.mul(
                &phi_epsilon(&model, &result, u).unwrap(),
                &phi_epsilon(&model, &result, v).unwrap(),
            );
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn defect_scalar_zero_only_on_exact_matches() {
    // MetricScalar sanity for both scalar types used by the backends.
    assert!(<BigRational as MetricScalar>::zero().is_zero_value());
    assert!(<f64 as MetricScalar>::zero().is_zero_value());
    assert!(r("1/3").close_to(&r("1/3")));
    assert!(!r("1/3").close_to(&r("1/4")));
}
