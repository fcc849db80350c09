//! Word-length-bounded brute-force verification of the perturbation
//! properties. Failure lists are sorted by discovery in a fixed depth-first
//! order and capped, so reports are deterministic.

use super::{PerturbationResult, PipelineError};
use crate::models::{LatticeModel, MetricScalar};
use crate::words::{Alphabet, Letter, Word};

const FAILURE_CAP: usize = 100;

#[derive(Debug, Clone)]
pub struct DefectFailure {
    pub word: String,
    pub letter: String,
    pub defect: String,
}

/// Result of checking `d(phi_eps(f s^k), phi_eps(f) phi(s^k)) <= epsilon`
/// over all reduced `f` with `len(f) < max_len` and all letters `s^k`.
#[derive(Debug, Clone)]
pub struct DefectReport<D> {
    pub max_len: usize,
    pub words_checked: u64,
    pub letter_checks: u64,
    pub max_defect: D,
    pub failure_count: u64,
    pub failures: Vec<DefectFailure>,
}

impl<D> DefectReport<D> {
    pub fn is_clean(&self) -> bool {
        self.failure_count == 0
    }
}

struct DefectWalk<'a, M: LatticeModel> {
    model: &'a M,
    result: &'a PerturbationResult<M>,
    epsilon: M::Dist,
    alphabet: &'a Alphabet,
    letters: Vec<Letter>,
    /// Path snapshots from the basepoint: (cover vertex, accumulated value).
    snapshots: Vec<(usize, M::Elem)>,
    report: DefectReport<M::Dist>,
}

impl<M: LatticeModel> DefectWalk<'_, M> {
    fn current_word(&self) -> String {
        Word::reduce(self.alphabet.size(), &self.letters)
            .expect("letters are valid")
            .format(self.alphabet)
    }

    fn check_node(&mut self) {
        self.report.words_checked += 1;
        let (vertex, value) = self.snapshots.last().expect("root pushed").clone();
        let rank = self.result.cover.rank();
        for gen in 0..rank {
            for exp in [1i8, -1i8] {
                let letter = Letter { gen, exp };
                // phi_eps(f s^k): reduced evaluation — stepping back when
                // the letter cancels, multiplying by psi otherwise.
                let lhs = if self.letters.last().is_some_and(|l| l.gen == gen && l.exp == -exp) {
                    self.snapshots[self.snapshots.len() - 2].1.clone()
                } else {
                    let (edge, _) = self.result.cover.step(vertex, letter);
                    let psi = &self.result.psi[self.result.projection.edge_image(edge)];
                    let factor = if exp > 0 {
                        psi.clone()
                    } else {
                        self.model.inv(psi)
                    };
                    self.model.mul(&value, &factor)
                };
                let image = if exp > 0 {
                    self.result.phi[gen].clone()
                } else {
                    self.model.inv(&self.result.phi[gen])
                };
                let rhs = self.model.mul(&value, &image);
                let defect = self.model.dist(&lhs, &rhs);
                self.report.letter_checks += 1;
                if defect > self.report.max_defect {
                    self.report.max_defect = defect.clone();
                }
                if defect > self.epsilon {
                    self.report.failure_count += 1;
                    if self.report.failures.len() < FAILURE_CAP {
                        let suffix = Word::letter(rank, gen, exp).expect("valid");
                        self.report.failures.push(DefectFailure {
                            word: self.current_word(),
                            letter: suffix.format(self.alphabet),
                            defect: format!("{defect}"),
                        });
                    }
                }
            }
        }
    }

    fn walk(&mut self, depth_left: usize) {
        self.check_node();
        if depth_left == 0 {
            return;
        }
        let (vertex, value) = self.snapshots.last().expect("root pushed").clone();
        for gen in 0..self.result.cover.rank() {
            for exp in [1i8, -1i8] {
                let letter = Letter { gen, exp };
                if self.letters.last().is_some_and(|l| l.gen == gen && l.exp == -exp) {
                    continue;
                }
                let (edge, next) = self.result.cover.step(vertex, letter);
                let psi = &self.result.psi[self.result.projection.edge_image(edge)];
                let factor = if exp > 0 {
                    psi.clone()
                } else {
                    self.model.inv(psi)
                };
                let next_value = self.model.mul(&value, &factor);
                self.letters.push(letter);
                self.snapshots.push((next, next_value));
                self.walk(depth_left - 1);
                self.snapshots.pop();
                self.letters.pop();
            }
        }
    }
}

/// Exhaustive one-letter defect check up to the configured word length.
pub fn verify_epsilon_perturbation<M: LatticeModel>(
    model: &M,
    result: &PerturbationResult<M>,
    max_len: usize,
) -> Result<DefectReport<M::Dist>, PipelineError> {
    let mut report = DefectReport {
        max_len,
        words_checked: 0,
        letter_checks: 0,
        max_defect: M::Dist::zero(),
        failure_count: 0,
        failures: Vec::new(),
    };
    if max_len == 0 {
        // Vacuous: no word has length below zero.
        return Ok(report);
    }
    let alphabet = result.alphabet.clone();
    let mut walk = DefectWalk {
        model,
        result,
        epsilon: M::Dist::from_ratio(&result.epsilon),
        alphabet: &alphabet,
        letters: Vec::new(),
        snapshots: vec![(result.cover.basepoint(), model.identity())],
        report,
    };
    walk.walk(max_len - 1);
    report = walk.report;
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct HomReport {
    pub max_len: usize,
    /// Loops at the basepoint with length at most `max_len`.
    pub accepted_checked: u64,
    pub membership_failure_count: u64,
    pub membership_failures: Vec<String>,
    /// Pairs `(f', f)` with `f'` accepted and `|f'| + |f| <= max_len`.
    pub pairs_checked: u64,
    pub hom_failure_count: u64,
    pub hom_failures: Vec<(String, String)>,
}

impl HomReport {
    pub fn is_clean(&self) -> bool {
        self.membership_failure_count == 0 && self.hom_failure_count == 0
    }
}

struct MembershipWalk<'a, M: LatticeModel> {
    model: &'a M,
    result: &'a PerturbationResult<M>,
    max_len: usize,
    letters: Vec<Letter>,
    /// Path snapshots from the basepoint: (cover vertex, accumulated value).
    snapshots: Vec<(usize, M::Elem)>,
    report: HomReport,
}

impl<M: LatticeModel> MembershipWalk<'_, M> {
    fn visit(&mut self, depth_left: usize) {
        let (vertex, value) = self.snapshots.last().expect("root pushed").clone();
        if vertex == self.result.cover.basepoint() {
            self.report.accepted_checked += 1;
            // Membership in the lattice is the identity-coset test.
            let in_lattice = self.model.is_in_lattice(&value);
            let fixes_base = self.model.point_eq(
                &self.model.point_act(&self.model.identity_point(), &value),
                &self.model.identity_point(),
            );
            let fprime_text = || {
                Word::reduce(self.result.alphabet.size(), &self.letters)
                    .expect("valid letters")
                    .format(&self.result.alphabet)
            };
            if !in_lattice || !fixes_base {
                self.report.membership_failure_count += 1;
                if self.report.membership_failures.len() < FAILURE_CAP {
                    self.report.membership_failures.push(fprime_text());
                }
            }
            // Multiplicativity against every continuation within budget,
            // streamed off this accepted prefix.
            let mut pairs = PairWalk {
                model: self.model,
                result: self.result,
                concat_snapshots: self.snapshots.clone(),
                concat_letters: self.letters.clone(),
                f_snapshots: vec![(self.result.cover.basepoint(), self.model.identity())],
                f_letters: Vec::new(),
                fprime_value: &value,
                fprime_text: fprime_text(),
                report: &mut self.report,
            };
            pairs.walk(self.max_len - self.letters.len());
        }
        if depth_left == 0 {
            return;
        }
        let (vertex, value) = self.snapshots.last().expect("root pushed").clone();
        for gen in 0..self.result.cover.rank() {
            for exp in [1i8, -1i8] {
                let letter = Letter { gen, exp };
                if self.letters.last().is_some_and(|l| l.gen == gen && l.exp == -exp) {
                    continue;
                }
                let (edge, next) = self.result.cover.step(vertex, letter);
                let psi = &self.result.psi[self.result.projection.edge_image(edge)];
                let factor = if exp > 0 {
                    psi.clone()
                } else {
                    self.model.inv(psi)
                };
                let next_value = self.model.mul(&value, &factor);
                self.letters.push(letter);
                self.snapshots.push((next, next_value));
                self.visit(depth_left - 1);
                self.snapshots.pop();
                self.letters.pop();
            }
        }
    }
}

struct PairWalk<'a, M: LatticeModel> {
    model: &'a M,
    result: &'a PerturbationResult<M>,
    /// Reduced concatenation `f' . f` as path snapshots from the basepoint.
    concat_snapshots: Vec<(usize, M::Elem)>,
    concat_letters: Vec<Letter>,
    /// Path snapshots of `f` alone.
    f_snapshots: Vec<(usize, M::Elem)>,
    f_letters: Vec<Letter>,
    fprime_value: &'a M::Elem,
    fprime_text: String,
    report: &'a mut HomReport,
}

impl<M: LatticeModel> PairWalk<'_, M> {
    fn step_factor(&self, vertex: usize, letter: Letter) -> (usize, M::Elem) {
        let (edge, next) = self.result.cover.step(vertex, letter);
        let psi = &self.result.psi[self.result.projection.edge_image(edge)];
        let factor = if letter.exp > 0 {
            psi.clone()
        } else {
            self.model.inv(psi)
        };
        (next, factor)
    }

    fn check_pair(&mut self) {
        self.report.pairs_checked += 1;
        // Fresh evaluation of phi_eps(reduce(f' f)) via the concat path.
        let lhs = &self.concat_snapshots.last().expect("seeded").1;
        let f_value = &self.f_snapshots.last().expect("seeded").1;
        let rhs = self.model.mul(self.fprime_value, f_value);
        if !self.model.elem_eq(lhs, &rhs) {
            self.report.hom_failure_count += 1;
            if self.report.hom_failures.len() < FAILURE_CAP {
                let f = Word::reduce(self.result.alphabet.size(), &self.f_letters)
                    .expect("valid letters");
                self.report
                    .hom_failures
                    .push((self.fprime_text.clone(), f.format(&self.result.alphabet)));
            }
        }
    }

    fn walk(&mut self, depth_left: usize) {
        self.check_pair();
        if depth_left == 0 {
            return;
        }
        for gen in 0..self.result.cover.rank() {
            for exp in [1i8, -1i8] {
                let letter = Letter { gen, exp };
                if self.f_letters.last().is_some_and(|l| l.gen == gen && l.exp == -exp) {
                    continue;
                }
                // Extend f.
                let (fv, f_factor) = {
                    let (v, _) = *self.f_snapshots.last().expect("seeded");
                    self.step_factor(v, letter)
                };
                let f_value = self
                    .model
                    .mul(&self.f_snapshots.last().expect("seeded").1, &f_factor);
                self.f_letters.push(letter);
                self.f_snapshots.push((fv, f_value));

                // Extend (or cancel within) the reduced concatenation.
                let popped = if self
                    .concat_letters
                    .last()
                    .is_some_and(|l| l.gen == gen && l.exp == -exp)
                {
                    let snap = self.concat_snapshots.pop().expect("nonempty");
                    let cl = self.concat_letters.pop().expect("nonempty");
                    Some((snap, cl))
                } else {
                    let (v, _) = *self.concat_snapshots.last().expect("seeded");
                    let (cv, c_factor) = self.step_factor(v, letter);
                    let c_value = self
                        .model
                        .mul(&self.concat_snapshots.last().expect("seeded").1, &c_factor);
                    self.concat_letters.push(letter);
                    self.concat_snapshots.push((cv, c_value));
                    None
                };

                self.walk(depth_left - 1);

                match popped {
                    Some((snap, l)) => {
                        self.concat_snapshots.push(snap);
                        self.concat_letters.push(l);
                    }
                    None => {
                        self.concat_snapshots.pop();
                        self.concat_letters.pop();
                    }
                }
                self.f_snapshots.pop();
                self.f_letters.pop();
            }
        }
    }
}

/// Verifies the virtual-homomorphism property:
///
/// * membership: every accepted word of length at most `max_len` maps into
///   the lattice (equivalently, fixes the identity coset);
/// * multiplicativity: `phi_eps(f' f) = phi_eps(f') phi_eps(f)` for every
///   accepted `f'` and every `f` with `|f'| + |f| <= max_len`, with the
///   left side evaluated afresh on the reduced concatenation.
pub fn verify_virtual_hom<M: LatticeModel>(
    model: &M,
    result: &PerturbationResult<M>,
    max_len: usize,
) -> Result<HomReport, PipelineError> {
    let report = HomReport {
        max_len,
        accepted_checked: 0,
        membership_failure_count: 0,
        membership_failures: Vec::new(),
        pairs_checked: 0,
        hom_failure_count: 0,
        hom_failures: Vec::new(),
    };
    let mut membership = MembershipWalk {
        model,
        result,
        max_len,
        letters: Vec::new(),
        snapshots: vec![(result.cover.basepoint(), model.identity())],
        report,
    };
    membership.visit(max_len);
    Ok(membership.report)
}

/// The end vertex of every traced word sits over the cell of
/// `beta_1 . phi_eps(word)`; checked for all words up to `max_len`.
pub fn cocycle_consistent<M: LatticeModel>(
    model: &M,
    result: &PerturbationResult<M>,
    max_len: usize,
) -> Result<bool, PipelineError> {
    fn walk<M: LatticeModel>(
        model: &M,
        result: &PerturbationResult<M>,
        letters: &mut Vec<Letter>,
        vertex: usize,
        value: &M::Elem,
        depth_left: usize,
    ) -> bool {
        let base_point = model.identity_point();
        let moved = model.point_act(&base_point, value);
        let expected_cell = model.cell_of(&result.partition, &moved);
        if result.projection.vertex_map[vertex] != expected_cell {
            return false;
        }
        if depth_left == 0 {
            return true;
        }
        for gen in 0..result.cover.rank() {
            for exp in [1i8, -1i8] {
                let letter = Letter { gen, exp };
                if letters.last().is_some_and(|l| l.gen == gen && l.exp == -exp) {
                    continue;
                }
                let (edge, next) = result.cover.step(vertex, letter);
                let psi = &result.psi[result.projection.edge_image(edge)];
                let factor = if exp > 0 { psi.clone() } else { model.inv(psi) };
                let next_value = model.mul(value, &factor);
                letters.push(letter);
                let ok = walk(model, result, letters, next, &next_value, depth_left - 1);
                letters.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    let mut letters = Vec::new();
    Ok(walk(
        model,
        result,
        &mut letters,
        result.cover.basepoint(),
        &model.identity(),
        max_len,
    ))
}
