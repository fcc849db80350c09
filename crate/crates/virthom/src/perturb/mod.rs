//! The perturbation pipeline.
//!
//! Given a lattice model, generator images `phi` and a tolerance `epsilon`,
//! the pipeline:
//!
//! 1. certifies a conjugation radius `delta` from `epsilon`,
//! 2. partitions the coset space into cells of diameter at most `delta`,
//! 3. builds the labelled transition digraph `Y` between cells,
//! 4. decorates each edge with a group element `psi(e)` that moves the
//!    source representative exactly onto the target representative and
//!    stays within `epsilon` of the generator image,
//! 5. finds a strictly positive integer weighting of `Y` and expands it
//!    into a finite covering `X` of the rose,
//! 6. defines `phi_eps(word)` as the product of the `psi` decorations
//!    along the traced path from the basepoint, and
//! 7. verifies both the one-letter defect bound and the restriction of
//!    `phi_eps` to a homomorphism on the subgroup accepted by `X`.
//!
//! On exact backends every check is an exact comparison.

mod report;
mod verify;

pub use report::{PipelineReport, VerifySummary};
pub use verify::{
    cocycle_consistent, verify_epsilon_perturbation, verify_virtual_hom, DefectReport, HomReport,
};

use crate::models::{
    DisplacementBound, ExactTransition, GroupOps, LatticeModel, MetricScalar, ModelError,
    PartitionView,
};
use crate::ratio::format_ratio;
use crate::rose::{CoverProjection, RoseCover, RoseError};
use crate::weighting::{
    expand_cover, haar_weighting, solve_integer_weighting, verify_weighting, HaarMode,
    LabeledDigraph, Weighting, WeightingError,
};
use crate::words::{Alphabet, Word};
use num_rational::BigRational;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Weighting(#[from] WeightingError),
    #[error(transparent)]
    Rose(#[from] RoseError),
    #[error("edge {edge} of the transition digraph has no stored witness")]
    MissingWitness { edge: usize },
    #[error("witness for edge {edge} does not connect its cell representatives")]
    BadWitness { edge: usize },
    #[error("sampling found no outgoing {label}-edge from cell {cell}; increase --samples")]
    Undersampled { cell: usize, label: usize },
    #[error("generator images must be nonempty")]
    NoGenerators,
}

/// How transitions between cells are discovered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeDetection {
    /// Exact per-cell transition data from the model.
    Exact,
    /// Seeded sampling: `per_cell` points in every cell, one pass per label.
    Sampled { per_cell: usize },
}

/// Default sample count per (cell, label) pair in sampled edge detection.
pub const DEFAULT_SAMPLES_PER_CELL: usize = 64;

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub epsilon: BigRational,
    pub seed: u64,
    pub verify_len: usize,
    pub detection: Option<EdgeDetection>,
}

impl PipelineConfig {
    pub fn new(epsilon: BigRational, seed: u64) -> PipelineConfig {
        PipelineConfig {
            epsilon,
            seed,
            verify_len: 6,
            detection: None,
        }
    }
}

/// Whether the epsilon pre-check (`d(gamma, id) > epsilon` for nontrivial
/// lattice elements) was certified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EpsilonPrecheck {
    Certified,
    TrivialLattice,
    Unchecked,
}

/// The partition, digraph, decorations, weighting and cover produced by the
/// pipeline, with enough context to evaluate `phi_eps` on any word.
#[derive(Debug)]
pub struct PerturbationResult<M: LatticeModel> {
    pub alphabet: Alphabet,
    pub phi: Vec<M::Elem>,
    pub epsilon: BigRational,
    pub delta: BigRational,
    pub precheck: EpsilonPrecheck,
    pub partition: M::Partition,
    pub digraph: LabeledDigraph,
    /// Witness pair per digraph edge: an interior source point and its
    /// image under the generator.
    pub witnesses: Vec<(M::Point, M::Point)>,
    pub psi: Vec<M::Elem>,
    /// Worst observed `d(psi(e), phi(s))` over edges (and inverses).
    pub max_psi_defect: M::Dist,
    pub haar: Option<Weighting>,
    pub weighting: Weighting,
    pub cover: RoseCover,
    pub projection: CoverProjection,
    pub total_vertices_before_pruning: usize,
    pub detection: EdgeDetection,
    pub seed: u64,
}

impl<M: LatticeModel> PerturbationResult<M> {
    pub fn subgroup_index(&self) -> usize {
        self.cover.num_vertices()
    }
}

/// Certified conjugation radius for the model: if both conjugators are
/// within `delta` of the identity, every generator image moves by at most
/// `epsilon`.
pub fn choose_delta<M: GroupOps>(
    model: &M,
    phi: &[M::Elem],
    epsilon: &BigRational,
) -> Result<BigRational, ModelError> {
    if !epsilon.is_positive() {
        return Err(ModelError::EpsilonNotPositive);
    }
    model.certify_delta(phi, epsilon)
}

/// Partition of the coset space into cells of diameter at most `delta`.
pub fn build_partition<M: LatticeModel>(
    model: &M,
    delta: &BigRational,
) -> Result<M::Partition, ModelError> {
    if !delta.is_positive() {
        return Err(ModelError::DeltaNotPositive);
    }
    model.partition(delta)
}

/// Builds the transition digraph: an `s`-labelled edge from cell `i` to
/// cell `j` whenever some interior point of `i` lands in `j` under right
/// multiplication by `phi(s)`. Returns the digraph and one witness pair
/// per edge.
pub fn build_transition_digraph<M: LatticeModel>(
    model: &M,
    partition: &M::Partition,
    phi: &[M::Elem],
    detection: EdgeDetection,
    seed: u64,
) -> Result<(LabeledDigraph, Vec<(M::Point, M::Point)>), PipelineError> {
    if phi.is_empty() {
        return Err(PipelineError::NoGenerators);
    }
    let cells = partition.cell_count();
    let mut digraph = LabeledDigraph::new(cells, phi.len());
    let mut witnesses: Vec<(M::Point, M::Point)> = Vec::new();
    match detection {
        EdgeDetection::Exact => {
            for v in 0..cells {
                for (label, image) in phi.iter().enumerate() {
                    let transitions: Vec<ExactTransition<M::Point>> = model
                        .exact_transitions(partition, v, image)
                        .ok_or(ModelError::PartitionUnavailable(
                            "model has no exact transition data; use sampled detection".into(),
                        ))?;
                    for t in transitions {
                        let dst = model.point_act(&t.witness_src, image);
                        digraph.add_edge(v, t.to_cell, label)?;
                        witnesses.push((t.witness_src, dst));
                    }
                }
            }
        }
        EdgeDetection::Sampled { per_cell } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for v in 0..cells {
                for (label, image) in phi.iter().enumerate() {
                    let mut found = std::collections::BTreeMap::new();
                    for _ in 0..per_cell {
                        let x = model.sample_point_in_cell(partition, v, &mut rng);
                        let y = model.point_act(&x, image);
                        let j = model.cell_of(partition, &y);
                        found.entry(j).or_insert((x, y));
                    }
                    if found.is_empty() {
                        return Err(PipelineError::Undersampled { cell: v, label });
                    }
                    for (j, (x, y)) in found {
                        digraph.add_edge(v, j, label)?;
                        witnesses.push((x, y));
                    }
                }
            }
        }
    }
    // Every vertex needs an in-edge and an out-edge per label for a
    // weighting to exist; in sampled mode a missing in-edge means the
    // sampling was too sparse.
    if let Some(v) = digraph.degree_violations().first() {
        return Err(PipelineError::Undersampled {
            cell: v.vertex,
            label: v.label,
        });
    }
    Ok((digraph, witnesses))
}

/// Decorates each edge `i -> j` with `psi(e) = g_i . phi(s) . g_j^{-1}`,
/// where `g_i` connects the representative of `i` to the stored witness.
/// Then `rep_i . psi(e) = rep_j` exactly, and `psi(e)` is within `epsilon`
/// of `phi(s)`.
pub fn assign_psi<M: LatticeModel>(
    model: &M,
    partition: &M::Partition,
    digraph: &LabeledDigraph,
    witnesses: &[(M::Point, M::Point)],
    phi: &[M::Elem],
) -> Result<(Vec<M::Elem>, M::Dist), PipelineError> {
    if witnesses.len() != digraph.edges().len() {
        return Err(PipelineError::MissingWitness {
            edge: witnesses.len().min(digraph.edges().len()),
        });
    }
    let mut psi = Vec::with_capacity(digraph.edges().len());
    let mut max_defect = M::Dist::zero();
    for (idx, e) in digraph.edges().iter().enumerate() {
        let (src_witness, dst_witness) = &witnesses[idx];
        let rep_i = partition.representative(e.src);
        let rep_j = partition.representative(e.dst);
        let g_i = model.connector(&rep_i, src_witness)?;
        let g_j = model.connector(&rep_j, dst_witness)?;
        let image = &phi[e.label];
        let value = model.mul(&model.mul(&g_i, image), &model.inv(&g_j));
        // rep_i . psi = rep_j must hold exactly.
        if !model.point_eq(&model.point_act(&rep_i, &value), &rep_j) {
            return Err(PipelineError::BadWitness { edge: idx });
        }
        let d_fwd = model.dist(&value, image);
        let d_bwd = model.dist(&model.inv(&value), &model.inv(image));
        for d in [d_fwd, d_bwd] {
            if d > max_defect {
                max_defect = d;
            }
        }
        psi.push(value);
    }
    Ok((psi, max_defect))
}

/// Evaluates the perturbed map on a word: trace the path from the cover's
/// basepoint and multiply the edge decorations (inverted on backward
/// steps). Words are reduced by construction, and insertion or removal of
/// a cancelling pair does not change the value.
pub fn phi_epsilon<M: LatticeModel>(
    model: &M,
    result: &PerturbationResult<M>,
    word: &Word,
) -> Result<M::Elem, PipelineError> {
    let trace = result.cover.trace_path(result.cover.basepoint(), word)?;
    let mut acc = model.identity();
    for (edge, exp) in trace.steps {
        let y_edge = result.projection.edge_image(edge);
        let decorated = &result.psi[y_edge];
        let factor = if exp > 0 {
            decorated.clone()
        } else {
            model.inv(decorated)
        };
        acc = model.mul(&acc, &factor);
    }
    Ok(acc)
}

/// Runs the whole pipeline and bundles the verification reports.
pub fn run_pipeline<M: LatticeModel>(
    model: &M,
    alphabet: Alphabet,
    phi: Vec<M::Elem>,
    config: &PipelineConfig,
) -> Result<(PerturbationResult<M>, PipelineReport), PipelineError> {
    if phi.is_empty() || phi.len() != alphabet.size() {
        return Err(PipelineError::NoGenerators);
    }
    if !config.epsilon.is_positive() {
        return Err(PipelineError::Model(ModelError::EpsilonNotPositive));
    }
    let precheck = match model.min_lattice_displacement() {
        DisplacementBound::NoNontrivialElements => EpsilonPrecheck::TrivialLattice,
        DisplacementBound::Uncertified => EpsilonPrecheck::Unchecked,
        DisplacementBound::AtLeast(bound) => {
            if config.epsilon >= bound {
                return Err(PipelineError::Model(ModelError::EpsilonTooLarge {
                    epsilon: format_ratio(&config.epsilon),
                    bound: format_ratio(&bound),
                }));
            }
            EpsilonPrecheck::Certified
        }
    };
    let delta = choose_delta(model, &phi, &config.epsilon)?;
    let partition = build_partition(model, &delta)?;
    let detection = config.detection.unwrap_or(if model.is_exact() {
        EdgeDetection::Exact
    } else {
        EdgeDetection::Sampled {
            per_cell: DEFAULT_SAMPLES_PER_CELL,
        }
    });
    let (digraph, witnesses) =
        build_transition_digraph(model, &partition, &phi, detection, config.seed)?;
    let (psi, max_psi_defect) = assign_psi(model, &partition, &digraph, &witnesses, &phi)?;

    // The measure-theoretic weighting exists exactly on exact backends and
    // doubles as a cross-check; the expanded weighting always comes from
    // the integer solver.
    let haar = if matches!(detection, EdgeDetection::Exact) {
        Some(haar_weighting(
            &digraph,
            model,
            &partition,
            &phi,
            HaarMode::Exact,
        )?)
    } else {
        None
    };
    let haar_balanced = match &haar {
        Some(w) => Some(verify_weighting(&digraph, w)?.is_exactly_balanced()),
        None => None,
    };
    let weighting = solve_integer_weighting(&digraph)?;
    let expansion = expand_cover(&digraph, &weighting, partition.identity_cell(), config.seed)?;

    let mut result = PerturbationResult {
        alphabet,
        phi,
        epsilon: config.epsilon.clone(),
        delta,
        precheck,
        partition,
        digraph,
        witnesses,
        psi,
        max_psi_defect,
        haar,
        weighting,
        cover: expansion.cover,
        projection: expansion.projection,
        total_vertices_before_pruning: expansion.total_vertices_before_pruning,
        detection,
        seed: config.seed,
    };

    let defects = verify_epsilon_perturbation(model, &result, config.verify_len)?;
    let hom = verify_virtual_hom(model, &result, config.verify_len)?;
    let report = report::build_report(model, &mut result, &defects, &hom, haar_balanced, config);
    Ok((result, report))
}
