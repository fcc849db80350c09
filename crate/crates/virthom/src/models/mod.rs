//! Pluggable group backends: exact finite quotients, the rational and
//! floating torus, and a 2x2 complex matrix group for defect measurement.
//!
//! A backend supplies group arithmetic, a left-invariant metric, and — when
//! it carries a lattice and a compact coset space — projection to the coset
//! space, a Haar sampler, and partitions into small-diameter cells. The
//! perturbation pipeline is generic over [`LatticeModel`]; the matrix model
//! implements only [`GroupOps`] since it certifies no lattice.

pub mod checks;
pub mod finite;
pub mod matrix;
pub mod torus;

pub use checks::{group_checks, lattice_checks, CheckEntry, ModelCheckReport};
pub use finite::FiniteModel;
pub use matrix::{Mat2, MatrixModel};
pub use torus::{FloatTorus, RationalTorus};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use std::fmt::{Debug, Display};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("epsilon must be positive")]
    EpsilonNotPositive,
    #[error("delta must be positive")]
    DeltaNotPositive,
    #[error("epsilon {epsilon} is not below the certified minimum lattice displacement {bound}")]
    EpsilonTooLarge { epsilon: String, bound: String },
    #[error("model cannot certify a delta: {0}")]
    CannotCertifyDelta(String),
    #[error("model cannot build a partition: {0}")]
    PartitionUnavailable(String),
    #[error("no connector between the given coset points")]
    ConnectorUnavailable,
    #[error("invalid model data: {0}")]
    BadModel(String),
}

/// Metric values: exact rationals for exact backends, floats elsewhere.
pub trait MetricScalar: Clone + PartialOrd + Debug + Display {
    fn zero() -> Self;
    fn from_ratio(r: &BigRational) -> Self;
    fn is_zero_value(&self) -> bool;
    /// Equality up to the scalar's native resolution (exact for rationals).
    fn close_to(&self, other: &Self) -> bool;
}

impl MetricScalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }
    fn is_zero_value(&self) -> bool {
        Zero::is_zero(self)
    }
    fn close_to(&self, other: &Self) -> bool {
        self == other
    }
}

impl MetricScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_ratio(r: &BigRational) -> Self {
        r.to_f64().expect("rational fits f64")
    }
    fn is_zero_value(&self) -> bool {
        *self == 0.0
    }
    fn close_to(&self, other: &Self) -> bool {
        (self - other).abs() <= 1e-9 * (1.0 + self.abs() + other.abs())
    }
}

/// Group arithmetic plus a left-invariant metric.
pub trait GroupOps {
    type Elem: Clone + PartialEq + Debug;
    type Dist: MetricScalar;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn dist(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Dist;
    /// Exact equality on exact backends, tolerance-based on float backends.
    fn elem_eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn is_exact(&self) -> bool;
    fn describe(&self) -> String;
    fn format_elem(&self, e: &Self::Elem) -> String;

    /// A certified `delta`: whenever `d(g1, id) <= delta` and
    /// `d(g2, id) <= delta`, every generator image `phi(s)` (and its
    /// inverse) satisfies `d(g1 phi(s) g2, phi(s)) <= epsilon`.
    fn certify_delta(
        &self,
        phi: &[Self::Elem],
        epsilon: &BigRational,
    ) -> Result<BigRational, ModelError>;

    /// Seeded sample of a group element, for axiom spot-checks.
    fn sample_elem(&self, phi: &[Self::Elem], rng: &mut ChaCha8Rng) -> Self::Elem;
}

/// Raising a word in the generators to its image: `phi` extended to `F`.
pub fn evaluate_word<M: GroupOps + ?Sized>(
    model: &M,
    phi: &[M::Elem],
    word: &crate::words::Word,
) -> M::Elem {
    let mut acc = model.identity();
    for l in word.letters() {
        let img = if l.exp > 0 {
            phi[l.gen].clone()
        } else {
            model.inv(&phi[l.gen])
        };
        acc = model.mul(&acc, &img);
    }
    acc
}

/// Lower bound certificate for `d(gamma, id)` over nontrivial lattice
/// elements; drives the epsilon pre-check.
#[derive(Debug, Clone, PartialEq)]
pub enum DisplacementBound {
    /// The lattice is trivial, so no constraint on epsilon arises.
    NoNontrivialElements,
    AtLeast(BigRational),
    /// The model cannot certify a bound; recorded as unchecked.
    Uncertified,
}

/// One exact transition out of a partition cell under right multiplication:
/// the target cell, the measure of the overlap, and an interior witness.
#[derive(Debug, Clone)]
pub struct ExactTransition<P> {
    pub to_cell: usize,
    pub measure: BigRational,
    pub witness_src: P,
}

/// Read access to a partition of the coset space into small cells.
pub trait PartitionView<P> {
    fn cell_count(&self) -> usize;
    fn representative(&self, cell: usize) -> P;
    /// Haar measure of the cell (exact for exact backends).
    fn measure(&self, cell: usize) -> BigRational;
    fn identity_cell(&self) -> usize;
    fn delta(&self) -> &BigRational;
}

/// A group model carrying a lattice and a compact coset space `B`, enough
/// to run the full perturbation pipeline.
pub trait LatticeModel: GroupOps {
    type Point: Clone + PartialEq + Debug;
    type Partition: PartitionView<Self::Point> + Debug;

    fn project(&self, g: &Self::Elem) -> Self::Point;
    fn point_act(&self, x: &Self::Point, g: &Self::Elem) -> Self::Point;
    fn identity_point(&self) -> Self::Point;
    fn point_eq(&self, a: &Self::Point, b: &Self::Point) -> bool;
    fn is_in_lattice(&self, g: &Self::Elem) -> bool;
    fn min_lattice_displacement(&self) -> DisplacementBound;

    /// Partition of `B` into cells of diameter at most `delta`, with the
    /// identity coset interior to the identity cell.
    fn partition(&self, delta: &BigRational) -> Result<Self::Partition, ModelError>;
    fn cell_of(&self, part: &Self::Partition, x: &Self::Point) -> usize;
    /// Exact per-cell transition data; `None` on numeric backends.
    fn exact_transitions(
        &self,
        part: &Self::Partition,
        from: usize,
        g: &Self::Elem,
    ) -> Option<Vec<ExactTransition<Self::Point>>>;
    /// Haar sampler over `B`.
    fn sample_point(&self, rng: &mut ChaCha8Rng) -> Self::Point;
    fn sample_point_in_cell(
        &self,
        part: &Self::Partition,
        cell: usize,
        rng: &mut ChaCha8Rng,
    ) -> Self::Point;
    /// An element `g` with `from . g = to`, as small as the separation of
    /// the two points allows.
    fn connector(&self, from: &Self::Point, to: &Self::Point) -> Result<Self::Elem, ModelError>;
    /// Seeded sample from the lattice, if the model exposes one.
    fn sample_lattice_elem(&self, rng: &mut ChaCha8Rng) -> Option<Self::Elem>;
    fn format_point(&self, p: &Self::Point) -> String;
}

/// Bottom of the Laplacian spectrum from the Hausdorff dimension of the
/// limit set (Sullivan): `lambda_0 = D (2 - D)` for `D` in `[1, 2]`.
pub fn sullivan_lambda0(d: f64) -> Result<f64, ModelError> {
    if !(1.0..=2.0).contains(&d) {
        return Err(ModelError::BadModel(format!(
            "Hausdorff dimension {d} outside [1, 2]"
        )));
    }
    Ok(d * (2.0 - d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda0_endpoints_and_midpoint() {
        assert_eq!(sullivan_lambda0(2.0).unwrap(), 0.0);
        assert_eq!(sullivan_lambda0(1.0).unwrap(), 1.0);
        assert_eq!(sullivan_lambda0(1.5).unwrap(), 0.75);
        assert!(sullivan_lambda0(0.5).is_err());
        assert!(sullivan_lambda0(2.5).is_err());
    }

    #[test]
    fn lambda0_symmetry_about_one() {
        // lambda0(1 + t) + t^2 = 1.
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let v = sullivan_lambda0(1.0 + t).unwrap();
            assert!((v + t * t - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda0_decreasing_on_domain() {
        let mut prev = f64::INFINITY;
        for i in 0..=20 {
            let d = 1.0 + i as f64 / 20.0;
            let v = sullivan_lambda0(d).unwrap();
            assert!(v <= prev);
            prev = v;
        }
    }
}
