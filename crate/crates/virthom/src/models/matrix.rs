//! 2x2 complex matrices of determinant one, modulo sign.
//!
//! This backend supplies generator-image arithmetic and a left-invariant
//! metric surrogate `d(g, h) = min over signs of ||g^-1 h - I||_F`, which is
//! what defect measurement needs. It certifies no lattice, so it cannot run
//! the full pipeline; see the exact backends for that.

use super::{GroupOps, ModelError};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const DET_TOL: f64 = 1e-9;

/// A matrix `[[a, b], [c, d]]` with `det = 1`, canonicalized over sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub entries: [Complex64; 4],
}

impl Mat2 {
    pub fn new(entries: [Complex64; 4]) -> Result<Mat2, ModelError> {
        let m = Mat2 { entries }.canonical();
        let det = m.det();
        if (det - Complex64::new(1.0, 0.0)).norm() > DET_TOL {
            return Err(ModelError::BadModel(format!(
                "determinant {det} is not 1 within tolerance"
            )));
        }
        Ok(m)
    }

    pub fn identity() -> Mat2 {
        Mat2 {
            entries: [
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        }
    }

    pub fn det(&self) -> Complex64 {
        self.entries[0] * self.entries[3] - self.entries[1] * self.entries[2]
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let a = &self.entries;
        let b = &other.entries;
        Mat2 {
            entries: [
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ],
        }
        .canonical()
    }

    /// Adjugate inverse; exact for determinant one.
    pub fn inv(&self) -> Mat2 {
        let a = &self.entries;
        Mat2 {
            entries: [a[3], -a[1], -a[2], a[0]],
        }
        .canonical()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    fn sub_identity_norm(&self) -> f64 {
        let mut s = 0.0;
        for (i, e) in self.entries.iter().enumerate() {
            let d = if i == 0 || i == 3 {
                e - Complex64::new(1.0, 0.0)
            } else {
                *e
            };
            s += d.norm_sqr();
        }
        s.sqrt()
    }

    /// Sign representative with the dominant entry in the right half-plane
    /// (ties broken toward positive imaginary part).
    fn canonical(self) -> Mat2 {
        let lead = self
            .entries
            .iter()
            .enumerate()
            .max_by(|(i, x), (j, y)| {
                x.norm_sqr()
                    .partial_cmp(&y.norm_sqr())
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(j.cmp(i))
            })
            .map(|(_, e)| *e)
            .unwrap_or_default();
        let flip = lead.re < 0.0 || (lead.re == 0.0 && lead.im < 0.0);
        if flip {
            Mat2 {
                entries: self.entries.map(|e| -e),
            }
        } else {
            self
        }
    }

    /// Distance to `other` as min over signs of `||self^-1 other - I||_F`.
    pub fn dist(&self, other: &Mat2) -> f64 {
        let q = self.inv().mul(other);
        let direct = q.sub_identity_norm();
        let flipped = Mat2 {
            entries: q.entries.map(|e| -e),
        }
        .sub_identity_norm();
        direct.min(flipped)
    }

    /// A loxodromic diagonal element `diag(lambda, 1/lambda)`.
    pub fn diagonal(lambda: Complex64) -> Result<Mat2, ModelError> {
        if lambda.norm() < DET_TOL {
            return Err(ModelError::BadModel("lambda must be nonzero".into()));
        }
        Mat2::new([
            lambda,
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            lambda.inv(),
        ])
    }

    /// Parabolic translation `[[1, t], [0, 1]]`.
    pub fn parabolic(t: Complex64) -> Mat2 {
        Mat2::new([
            Complex64::new(1.0, 0.0),
            t,
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
        .expect("unit determinant")
    }
}

#[derive(Debug, Clone)]
pub struct MatrixModel;

impl MatrixModel {
    pub fn new() -> MatrixModel {
        MatrixModel
    }

    /// A pair of Schottky-style loxodromic generators with separated axes.
    pub fn schottky_pair(lambda: f64) -> Result<Vec<Mat2>, ModelError> {
        if lambda <= 1.0 {
            return Err(ModelError::BadModel("need |lambda| > 1".into()));
        }
        let a = Mat2::diagonal(Complex64::new(lambda, 0.0))?;
        let c = Mat2::parabolic(Complex64::new(1.0, 0.5));
        let b = c.mul(&a).mul(&c.inv());
        Ok(vec![a, b])
    }
}

impl Default for MatrixModel {
    fn default() -> Self {
        Self::new()
    }
}

impl GroupOps for MatrixModel {
    type Elem = Mat2;
    type Dist = f64;

    fn identity(&self) -> Mat2 {
        Mat2::identity()
    }
    fn mul(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        a.mul(b)
    }
    fn inv(&self, a: &Mat2) -> Mat2 {
        a.inv()
    }
    fn dist(&self, a: &Mat2, b: &Mat2) -> f64 {
        a.dist(b)
    }
    fn elem_eq(&self, a: &Mat2, b: &Mat2) -> bool {
        a.dist(b) <= 1e-9
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn describe(&self) -> String {
        "2x2 complex matrices modulo sign".into()
    }
    fn format_elem(&self, e: &Mat2) -> String {
        let [a, b, c, d] = e.entries;
        format!("[[{a}, {b}], [{c}, {d}]]")
    }

    /// `delta = min(1, eps / (2K + 1))` where `K` bounds the conjugation
    /// distortion `||phi(s)|| ||phi(s)^-1||` over the generator images; the
    /// bound follows from submultiplicativity of the Frobenius norm.
    fn certify_delta(&self, phi: &[Mat2], epsilon: &BigRational) -> Result<BigRational, ModelError> {
        if !epsilon.is_positive() {
            return Err(ModelError::EpsilonNotPositive);
        }
        let mut k: f64 = 0.0;
        for g in phi {
            k = k.max(g.frobenius_norm() * g.inv().frobenius_norm());
        }
        if !k.is_finite() {
            return Err(ModelError::CannotCertifyDelta(
                "generator norms are not finite".into(),
            ));
        }
        let eps = <f64 as crate::models::MetricScalar>::from_ratio(epsilon);
        let delta = (eps / (2.0 * k + 1.0)).min(1.0);
        BigRational::from_float(delta).ok_or_else(|| {
            ModelError::CannotCertifyDelta("delta does not fit a rational".into())
        })
    }

    fn sample_elem(&self, phi: &[Mat2], rng: &mut ChaCha8Rng) -> Mat2 {
        if phi.is_empty() {
            return Mat2::identity();
        }
        // Random short word in the generators and their inverses.
        let len = rng.gen_range(0..=6);
        let mut acc = Mat2::identity();
        for _ in 0..len {
            let g = &phi[rng.gen_range(0..phi.len())];
            let factor = if rng.gen::<bool>() { *g } else { g.inv() };
            acc = acc.mul(&factor);
        }
        acc
    }
}
