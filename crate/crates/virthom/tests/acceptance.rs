//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured quantities (run with `--nocapture` to see them all).
//! Every tolerance is pinned in code.

use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use virthom::models::{
    sullivan_lambda0, FiniteModel, LatticeModel, PartitionView, RationalTorus,
};
use virthom::orbifold::{
    dp_rank, golod_shafarevich, meridional_presentation, GsVerdict, OrbifoldData, Presentation,
    SingularGraph,
};
use virthom::perturb::{run_pipeline, PipelineConfig};
use virthom::ratio::parse_ratio;
use virthom::surfaces::{
    boundary_set, build_surface, cheeger_exact, cheeger_sweep, claim_constants,
    enumerate_normal_curve_types, face_parity_check, CurveType, SkeletonGraph, Triangulation,
    VertexSet,
};
use virthom::weighting::{
    haar_weighting, solve_integer_weighting, verify_weighting, HaarMode, LabeledDigraph,
};
use virthom::words::{Alphabet, Letter, Word};

fn r(s: &str) -> BigRational {
    parse_ratio(s).unwrap()
}

/// Random finite model: a group of order at most 60 from the cyclic,
/// dihedral and product families, a random subgroup, and 1..=3 random
/// generator images.
fn random_finite_model(rng: &mut ChaCha8Rng) -> (FiniteModel, Vec<usize>) {
    let table = match rng.gen_range(0..3) {
        0 => FiniteModel::cyclic_table(rng.gen_range(2..=60)),
        1 => FiniteModel::dihedral_table(rng.gen_range(2..=30)),
        _ => {
            let a = rng.gen_range(2..=7);
            let b = rng.gen_range(2..=(60 / a).max(2));
            FiniteModel::product_table(
                &FiniteModel::cyclic_table(a),
                &FiniteModel::cyclic_table(b),
            )
        }
    };
    let order = table.len();
    let num_lattice_gens = rng.gen_range(1..=2);
    let gens: Vec<usize> = (0..num_lattice_gens)
        .map(|_| rng.gen_range(0..order))
        .collect();
    let lattice = FiniteModel::subgroup_closure(&table, &gens);
    let model = FiniteModel::new(table, lattice).expect("families are groups");
    let rank = rng.gen_range(1..=3);
    let phi: Vec<usize> = (0..rank).map(|_| rng.gen_range(0..order)).collect();
    (model, phi)
}

#[test]
fn criterion_1_exact_pipeline_on_random_finite_models() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let mut total_words = 0u64;
    for case in 0..25 {
        let (model, phi) = random_finite_model(&mut rng);
        let alphabet = Alphabet::of_size(phi.len()).unwrap();
        let mut config = PipelineConfig::new(r("1/2"), 1000 + case);
        config.verify_len = 8;
        let (result, report) = run_pipeline(&model, alphabet, phi, &config)
            .unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert!(result.cover.is_rose_covering(), "case {case}");
        assert!(report.is_rose_covering, "case {case}");
        assert_eq!(
            report.defect_failures.failure_count, 0,
            "case {case}: epsilon defects"
        );
        assert_eq!(
            report.membership_failures.failure_count, 0,
            "case {case}: membership"
        );
        assert_eq!(
            report.hom_failures.failure_count, 0,
            "case {case}: multiplicativity"
        );
        assert_eq!(report.max_one_letter_defect, "0", "case {case}");
        total_words += report.defect_failures.checked + report.accepted_words_checked;
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "took {elapsed:?}, budget is 60 s"
    );
    println!(
        "ACCEPTANCE 1 PASS: 25 random finite models (order <= 60, |S| <= 3), \
         verify length 8, zero defects and zero failures; {total_words} words checked in {elapsed:?}"
    );
}

#[test]
fn criterion_2_rational_torus_eight_grid() {
    let model = RationalTorus::new(2).unwrap();
    let phi = vec![
        model.elem(&[r("1/3"), r("1/6")]).unwrap(),
        model.elem(&[r("1/5"), r("1/10")]).unwrap(),
    ];
    let alphabet = Alphabet::of_size(2).unwrap();
    let mut config = PipelineConfig::new(r("1/4"), 0xC2);
    config.verify_len = 6;
    let (result, report) = run_pipeline(&model, alphabet, phi, &config).unwrap();
    // delta = epsilon / 2 and an 8x8 grid.
    assert_eq!(result.delta, r("1/8"));
    assert_eq!(report.cells, 64);
    assert!(report.success, "{}", report.to_json());
    // Exact rational comparison of the worst one-letter defect; run one
    // length deeper so defects are measured both at all products of
    // length <= 6 and at all prefixes of length <= 6.
    let defects =
        virthom::perturb::verify_epsilon_perturbation(&model, &result, 7).unwrap();
    assert_eq!(defects.failure_count, 0);
    assert!(defects.max_defect <= r("1/4"));
    println!(
        "ACCEPTANCE 2 PASS: rational torus, 8x8 grid, epsilon 1/4, delta 1/8; \
         max defect {} <= 1/4 over {} words (exact comparison)",
        defects.max_defect, defects.words_checked
    );
}

/// Random valid transition digraph together with exact Haar data: a
/// rational torus with a random grid and random generator images.
fn random_torus_instance(
    rng: &mut ChaCha8Rng,
) -> (
    RationalTorus,
    <RationalTorus as LatticeModel>::Partition,
    Vec<Vec<BigRational>>,
    LabeledDigraph,
) {
    let dim = rng.gen_range(1..=2);
    let model = RationalTorus::new(dim).unwrap();
    let n = rng.gen_range(1..=4);
    let part = model
        .partition(&BigRational::new(1.into(), (n as i64).into()))
        .unwrap();
    let rank = rng.gen_range(1..=2);
    let phi: Vec<Vec<BigRational>> = (0..rank)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let den = rng.gen_range(2..=12i64);
                    let num = rng.gen_range(0..den);
                    BigRational::new(num.into(), den.into())
                })
                .collect()
        })
        .collect();
    let mut y = LabeledDigraph::new(part.cell_count(), rank);
    for v in 0..part.cell_count() {
        for (label, image) in phi.iter().enumerate() {
            for t in model.exact_transitions(&part, v, image).unwrap() {
                y.add_edge(v, t.to_cell, label).unwrap();
            }
        }
    }
    (model, part, phi, y)
}

/// Random valid digraph with no measure attached: the label-quotient of a
/// random rose covering by a random vertex grouping. These have uneven
/// degrees, so they exercise the simplex path of the integer solver.
fn random_quotient_digraph(rng: &mut ChaCha8Rng) -> LabeledDigraph {
    let n = rng.gen_range(2..=6);
    let rank = rng.gen_range(1..=2);
    let k = rng.gen_range(1..=n);
    let cells: Vec<usize> = (0..n)
        .map(|v| if v < k { v } else { rng.gen_range(0..k) })
        .collect();
    let mut y = LabeledDigraph::new(k, rank);
    for gen in 0..rank {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            p.swap(i, rng.gen_range(0..=i));
        }
        for v in 0..n {
            let _ = y.add_edge(cells[v], cells[p[v]], gen); // duplicates merged
        }
    }
    y
}

#[test]
fn criterion_3_haar_balance_and_integer_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    let check_solver = |y: &LabeledDigraph, case: usize| {
        let solved = solve_integer_weighting(y).unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert!(solved.is_positive(), "case {case}");
        assert!(solved.is_integral(), "case {case}");
        assert!(
            verify_weighting(y, &solved).unwrap().is_exactly_balanced(),
            "case {case}"
        );
        // Determinism: identical input, identical output.
        assert_eq!(solved, solve_integer_weighting(y).unwrap(), "case {case}");
    };
    for case in 0..200 {
        // Measured instances: exact Haar weightings balance with zero
        // residual (right-invariance of the measure, made testable).
        let (model, part, phi, y) = random_torus_instance(&mut rng);
        let haar = haar_weighting(&y, &model, &part, &phi, HaarMode::Exact).unwrap();
        let report = verify_weighting(&y, &haar).unwrap();
        assert!(
            report.max_abs_residual.is_zero(),
            "case {case}: Haar residual {}",
            report.max_abs_residual
        );
        check_solver(&y, case);
        // Quotient instances drive the solver's simplex path.
        let quotient = random_quotient_digraph(&mut rng);
        check_solver(&quotient, 1000 + case);
    }
    println!(
        "ACCEPTANCE 3 PASS: 200 measured + 200 quotient digraphs; exact Haar weightings \
         balance with zero residual; integer weightings positive, balanced, deterministic"
    );
}

#[test]
fn criterion_4_golod_shafarevich_threshold() {
    let start = Instant::now();
    for d in 0..=20u64 {
        let verdict = golod_shafarevich(d, 0, d);
        let expected = if d >= 9 {
            GsVerdict::Infinite
        } else {
            GsVerdict::Inconclusive
        };
        assert_eq!(verdict, expected, "d = {d}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_micros() < 1000, "took {elapsed:?}, budget 1 ms");
    println!(
        "ACCEPTANCE 4 PASS: verdict is infinite exactly for d >= 9 when |R| - |X| = d, \
         d in [0, 20], in {elapsed:?}"
    );
}

#[test]
fn criterion_5_curve_catalogue_parity_and_count_bounds() {
    let types = enumerate_normal_curve_types();
    assert_eq!(types.len(), 7);
    assert_eq!(
        types
            .iter()
            .filter(|t| matches!(t, CurveType::Triangle { .. }))
            .count(),
        4
    );
    assert_eq!(
        types
            .iter()
            .filter(|t| matches!(t, CurveType::Quad { .. }))
            .count(),
        3
    );

    let corpus: Vec<Triangulation> = {
        let mut c = vec![
            Triangulation::doubled_tetrahedron(),
            Triangulation::four_simplex_boundary(),
        ];
        for k in 2..=5 {
            c.push(Triangulation::doubled_chain(k));
        }
        c
    };
    assert!(corpus.iter().all(|t| t.num_tetrahedra() <= 10));
    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
    let mut samples = 0usize;
    while samples < 1000 {
        let tri = &corpus[rng.gen_range(0..corpus.len())];
        let n = tri.num_vertex_classes();
        let size = rng.gen_range(1..=n);
        let a = VertexSet::new((0..size).map(|_| rng.gen_range(0..n)), n).unwrap();
        let parity = face_parity_check(tri, &a);
        assert!(parity.is_clean(), "parity violated");
        let surface = build_surface(tri, &a).unwrap();
        let skel = tri.one_skeleton();
        let boundary = boundary_set(&skel, &a).len();
        let constants = claim_constants(tri);
        // k0 = 1 exactly: 0-cells are the boundary midpoints.
        assert_eq!(constants.k0, Rational64::from_integer(1));
        assert_eq!(surface.counts().zero_cells, boundary);
        // k2 = (2/3) k1, and the 2-cell count obeys it.
        assert_eq!(constants.k2, Rational64::new(2, 3) * constants.k1);
        assert!(
            Rational64::from_integer(surface.counts().two_cells as i64)
                <= constants.k2 * Rational64::from_integer(boundary as i64)
        );
        assert!(
            Rational64::from_integer(surface.counts().one_cells as i64)
                <= constants.k1 * Rational64::from_integer(boundary as i64)
        );
        samples += 1;
    }
    println!(
        "ACCEPTANCE 5 PASS: 7 curve types (4 triangles + 3 quadrilaterals); zero parity \
         violations and count bounds hold on 1000 random (T, A) samples"
    );
}

#[test]
fn criterion_6_homology_ranks_against_oracle() {
    // Oracle: count solutions over Z/p of the exponent-sum system.
    fn oracle(pres: &Presentation, p: u64) -> usize {
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

    let mut rng = ChaCha8Rng::seed_from_u64(0xC6);
    let random_word = |rng: &mut ChaCha8Rng, gens: usize, max_len: usize| {
        let len = rng.gen_range(0..=max_len);
        let raw: Vec<Letter> = (0..len)
            .map(|_| Letter {
                gen: rng.gen_range(0..gens),
                exp: if rng.gen::<bool>() { 1 } else { -1 },
            })
            .collect();
        Word::reduce(gens, &raw).unwrap()
    };

    for case in 0..200 {
        let gens = rng.gen_range(1..=5);
        let relators: Vec<Word> = (0..rng.gen_range(0..=6))
            .map(|_| random_word(&mut rng, gens, 6))
            .collect();
        let pres = Presentation::new(gens, relators).unwrap();
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        assert_eq!(
            dp_rank(&pres, p).unwrap(),
            oracle(&pres, p),
            "case {case} p = {p}"
        );
    }

    // The rank mechanism on meridional presentations: dropping
    // p-divisible powers and stripping coprime powers preserves d_p.
    for case in 0..100 {
        let gens = rng.gen_range(1..=4);
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let base: Vec<Word> = (0..rng.gen_range(0..=2))
            .map(|_| random_word(&mut rng, gens, 4))
            .collect();
        let meridians: Vec<(Word, u32)> = (0..rng.gen_range(1..=3))
            .map(|_| (random_word(&mut rng, gens, 3), rng.gen_range(2..=6)))
            .collect();
        let data = OrbifoldData {
            complement: Presentation::new(gens, base.clone()).unwrap(),
            meridians: meridians.clone(),
            singular_graph: SingularGraph::default(),
        };
        let full = meridional_presentation(&data).unwrap();
        let mut transformed = base;
        for (mu, order) in &meridians {
            if u64::from(*order) % p != 0 {
                transformed.push(mu.clone());
            }
        }
        let alt = Presentation::new(gens, transformed).unwrap();
        assert_eq!(
            dp_rank(&full, p).unwrap(),
            dp_rank(&alt, p).unwrap(),
            "case {case} p = {p}"
        );
    }
    println!(
        "ACCEPTANCE 6 PASS: dp_rank matches the counting oracle on 200 random presentations \
         (p in {{2, 3, 5}}); meridian power moves preserve the rank on 100 instances"
    );
}

#[test]
fn criterion_7_cheeger_values_and_sweep_domination() {
    let k4 = SkeletonGraph::complete(4);
    assert_eq!(cheeger_exact(&k4, 20).unwrap(), Rational64::from_integer(2));
    let c6 = SkeletonGraph::cycle(6);
    assert_eq!(cheeger_exact(&c6, 20).unwrap(), Rational64::new(2, 3));

    let mut rng = ChaCha8Rng::seed_from_u64(0xC7);
    for case in 0..100 {
        let n = rng.gen_range(2..=16);
        let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        for _ in 0..rng.gen_range(0..2 * n) {
            edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
        }
        let g = SkeletonGraph::new(n, edges).unwrap();
        let exact = cheeger_exact(&g, 16).unwrap();
        let sweep = cheeger_sweep(&g).unwrap();
        assert!(sweep >= exact, "case {case}: sweep {sweep} < exact {exact}");
    }
    println!(
        "ACCEPTANCE 7 PASS: h(K4) = 2, h(C6) = 2/3; sweep >= exact on 100 random graphs \
         with |V| <= 16"
    );
}

#[test]
fn criterion_8_sullivan_formula() {
    assert!((sullivan_lambda0(1.0).unwrap() - 1.0).abs() < 1e-12);
    assert!(sullivan_lambda0(2.0).unwrap().abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(0xC8);
    for _ in 0..100 {
        let t: f64 = rng.gen();
        let v = sullivan_lambda0(1.0 + t).unwrap();
        assert!((v + t * t - 1.0).abs() < 1e-12, "t = {t}");
    }
    println!(
        "ACCEPTANCE 8 PASS: lambda0(1) = 1, lambda0(2) = 0, lambda0(1+t) + t^2 = 1 \
         on 100 samples within 1e-12"
    );
}

#[test]
fn criterion_9_cli_runs_are_byte_identical_per_seed() {
    use std::process::Command;
    let dir = tempfile::tempdir().unwrap();
    let model_path = dir.path().join("z4.json");
    std::fs::write(
        &model_path,
        r#"{"type": "cyclic", "order": 4, "lattice": [0, 2], "generators": [1]}"#,
    )
    .unwrap();
    let graph_path = dir.path().join("y.json");
    std::fs::write(
        &graph_path,
        r#"{"num_vertices": 2, "labels": ["s"], "edges": [
            {"src": 0, "dst": 0, "label": "s"},
            {"src": 0, "dst": 1, "label": "s"},
            {"src": 1, "dst": 0, "label": "s"}]}"#,
    )
    .unwrap();
    let bin = env!("CARGO_BIN_EXE_virthom");
    let invocations: Vec<Vec<String>> = vec![
        vec![
            "perturb".into(),
            "run".into(),
            "--model".into(),
            model_path.display().to_string(),
            "--epsilon".into(),
            "1/2".into(),
            "--seed".into(),
            "7".into(),
            "--verify-len".into(),
            "8".into(),
        ],
        vec![
            "weight".into(),
            "solve".into(),
            "--graph".into(),
            graph_path.display().to_string(),
        ],
        vec![
            "cover".into(),
            "expand".into(),
            "--graph".into(),
            graph_path.display().to_string(),
            "--seed".into(),
            "11".into(),
        ],
        vec![
            "orb".into(),
            "gs".into(),
            "--dp".into(),
            "9".into(),
            "--gens".into(),
            "0".into(),
            "--rels".into(),
            "9".into(),
        ],
    ];
    for args in &invocations {
        let run = |i: usize| {
            let out = Command::new(bin)
                .args(args)
                .env("VIRTHOM_SEED", "0")
                .output()
                .unwrap_or_else(|e| panic!("spawn {i}: {e}"));
            assert!(
                out.status.success(),
                "args {args:?}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            out.stdout
        };
        let first = run(0);
        let second = run(1);
        assert_eq!(first, second, "args {args:?} differ between runs");
        assert!(!first.is_empty());
    }
    println!(
        "ACCEPTANCE 9 PASS: repeated CLI runs with identical seeds produce byte-identical \
         reports ({} invocations)",
        invocations.len()
    );
}
