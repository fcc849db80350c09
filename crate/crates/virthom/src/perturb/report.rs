//! Serializable pipeline report. Field order is fixed and every numeric
//! claim carries its provenance (exact or sampled with count and seed), so
//! identical runs serialize byte-identically.

use super::verify::{DefectReport, HomReport};
use super::{EdgeDetection, EpsilonPrecheck, PerturbationResult, PipelineConfig};
use crate::models::LatticeModel;
use crate::ratio::format_ratio;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub checked: u64,
    pub failure_count: u64,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub version: String,
    pub model: String,
    pub epsilon: String,
    pub delta: String,
    pub precheck: String,
    pub provenance: String,
    pub seed: u64,
    pub verify_len: usize,
    pub cells: usize,
    pub digraph_vertices: usize,
    pub digraph_edges: usize,
    pub psi_max_defect: String,
    pub haar_balanced: Option<bool>,
    pub weight_vertex_total: String,
    pub weight_edge_total: String,
    pub cover_vertices_before_pruning: usize,
    pub cover_vertices: usize,
    pub subgroup_index: usize,
    pub subgroup_rank: usize,
    pub is_rose_covering: bool,
    pub max_one_letter_defect: String,
    pub defect_checks: u64,
    pub defect_failures: VerifySummary,
    pub accepted_words_checked: u64,
    pub membership_failures: VerifySummary,
    pub hom_pairs_checked: u64,
    pub hom_failures: VerifySummary,
    pub success: bool,
}

impl PipelineReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub(super) fn build_report<M: LatticeModel>(
    model: &M,
    result: &mut PerturbationResult<M>,
    defects: &DefectReport<M::Dist>,
    hom: &HomReport,
    haar_balanced: Option<bool>,
    config: &PipelineConfig,
) -> PipelineReport {
    let provenance = match result.detection {
        EdgeDetection::Exact => "exact".to_string(),
        EdgeDetection::Sampled { per_cell } => {
            format!("sampled(per_cell={per_cell}, seed={})", result.seed)
        }
    };
    let is_covering = result.cover.is_rose_covering();
    let success = defects.is_clean() && hom.is_clean() && is_covering;
    PipelineReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        model: model.describe(),
        epsilon: format_ratio(&result.epsilon),
        delta: format_ratio(&result.delta),
        precheck: match result.precheck {
            EpsilonPrecheck::Certified => "certified".to_string(),
            EpsilonPrecheck::TrivialLattice => "trivial_lattice".to_string(),
            EpsilonPrecheck::Unchecked => "unchecked".to_string(),
        },
        provenance,
        seed: result.seed,
        verify_len: config.verify_len,
        cells: result.digraph.num_vertices(),
        digraph_vertices: result.digraph.num_vertices(),
        digraph_edges: result.digraph.edges().len(),
        psi_max_defect: format!("{}", result.max_psi_defect),
        haar_balanced,
        weight_vertex_total: format_ratio(&result.weighting.total_vertex_weight()),
        weight_edge_total: format_ratio(&result.weighting.total_edge_weight()),
        cover_vertices_before_pruning: result.total_vertices_before_pruning,
        cover_vertices: result.cover.num_vertices(),
        subgroup_index: result.cover.num_vertices(),
        subgroup_rank: result.cover.num_vertices() * (result.alphabet.size() - 1) + 1,
        is_rose_covering: is_covering,
        max_one_letter_defect: format!("{}", defects.max_defect),
        defect_checks: defects.letter_checks,
        defect_failures: VerifySummary {
            checked: defects.words_checked,
            failure_count: defects.failure_count,
            failures: defects
                .failures
                .iter()
                .map(|f| format!("word `{}` letter `{}` defect {}", f.word, f.letter, f.defect))
                .collect(),
        },
        accepted_words_checked: hom.accepted_checked,
        membership_failures: VerifySummary {
            checked: hom.accepted_checked,
            failure_count: hom.membership_failure_count,
            failures: hom.membership_failures.clone(),
        },
        hom_pairs_checked: hom.pairs_checked,
        hom_failures: VerifySummary {
            checked: hom.pairs_checked,
            failure_count: hom.hom_failure_count,
            failures: hom
                .hom_failures
                .iter()
                .map(|(a, b)| format!("f' `{a}` f `{b}`"))
                .collect(),
        },
        success,
    }
}
