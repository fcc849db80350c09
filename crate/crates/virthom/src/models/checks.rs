//! Sampled validation of model axioms: metric and group identities,
//! left-invariance, and lattice-invariance of the coset projection.

use super::{GroupOps, LatticeModel, MetricScalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelCheckReport {
    pub model: String,
    pub samples: usize,
    pub seed: u64,
    pub entries: Vec<CheckEntry>,
}

impl ModelCheckReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

fn entry(name: &str, passed: bool, detail: String) -> CheckEntry {
    CheckEntry {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Group and metric axioms on seeded samples: identity laws, inverses,
/// `d(x, x) = 0`, positivity on distinct pairs, and left-invariance.
pub fn group_checks<M: GroupOps>(
    model: &M,
    phi: &[M::Elem],
    samples: usize,
    seed: u64,
) -> ModelCheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = model.identity();
    let mut identity_ok = true;
    let mut inverse_ok = true;
    let mut self_dist_ok = true;
    let mut positive_ok = true;
    let mut invariance_ok = true;
    let mut worst_invariance = String::from("0");
    for _ in 0..samples {
        let g = model.sample_elem(phi, &mut rng);
        let x = model.sample_elem(phi, &mut rng);
        let y = model.sample_elem(phi, &mut rng);
        if !model.elem_eq(&model.mul(&g, &id), &g) || !model.elem_eq(&model.mul(&id, &g), &g) {
            identity_ok = false;
        }
        if !model.elem_eq(&model.mul(&g, &model.inv(&g)), &id) {
            inverse_ok = false;
        }
        if !model.dist(&g, &g).is_zero_value() {
            self_dist_ok = false;
        }
        if !model.elem_eq(&x, &y) && model.dist(&x, &y).is_zero_value() {
            positive_ok = false;
        }
        let lhs = model.dist(&model.mul(&g, &x), &model.mul(&g, &y));
        let rhs = model.dist(&x, &y);
        if !lhs.close_to(&rhs) {
            invariance_ok = false;
            worst_invariance = format!("{lhs} vs {rhs}");
        }
    }
    ModelCheckReport {
        model: model.describe(),
        samples,
        seed,
        entries: vec![
            entry("identity_laws", identity_ok, String::new()),
            entry("inverses", inverse_ok, String::new()),
            entry("metric_self_distance_zero", self_dist_ok, String::new()),
            entry("metric_positive_on_distinct", positive_ok, String::new()),
            entry(
                "metric_left_invariance",
                invariance_ok,
                if invariance_ok {
                    String::new()
                } else {
                    worst_invariance
                },
            ),
        ],
    }
}

/// [`group_checks`] plus coset-space axioms: projection is invariant under
/// left multiplication by lattice elements, and acting on projected points
/// agrees with projecting products.
pub fn lattice_checks<M: LatticeModel>(
    model: &M,
    phi: &[M::Elem],
    samples: usize,
    seed: u64,
) -> ModelCheckReport {
    let mut report = group_checks(model, phi, samples, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut projection_ok = true;
    let mut action_ok = true;
    let mut lattice_closed_ok = true;
    for _ in 0..samples {
        let g = model.sample_elem(phi, &mut rng);
        let h = model.sample_elem(phi, &mut rng);
        if let Some(gamma) = model.sample_lattice_elem(&mut rng) {
            if !model.point_eq(&model.project(&model.mul(&gamma, &g)), &model.project(&g)) {
                projection_ok = false;
            }
            if !model.is_in_lattice(&gamma) || !model.is_in_lattice(&model.inv(&gamma)) {
                lattice_closed_ok = false;
            }
        }
        let via_action = model.point_act(&model.project(&g), &h);
        let via_product = model.project(&model.mul(&g, &h));
        if !model.point_eq(&via_action, &via_product) {
            action_ok = false;
        }
    }
    report
        .entries
        .push(entry("projection_lattice_invariance", projection_ok, String::new()));
    report
        .entries
        .push(entry("projection_respects_action", action_ok, String::new()));
    report
        .entries
        .push(entry("lattice_closure_samples", lattice_closed_ok, String::new()));
    report
}
