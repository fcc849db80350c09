//! Torus backends: translations of `R^d / Z^d` with the sup metric and
//! Lebesgue (= Haar) measure, trivial lattice, and centered half-open grid
//! partitions. The rational variant keeps the entire pipeline in exact
//! arithmetic; the floating variant exercises the sampled code paths.
//!
//! Grid cells are centered at `k/n`, so the identity sits in the interior
//! of its cell and every cell has sup-diameter exactly `1/n`.

use super::{
    DisplacementBound, ExactTransition, GroupOps, LatticeModel, ModelError, PartitionView,
};
use crate::ratio::format_ratio;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Exact-arithmetic torus of the given dimension.
#[derive(Debug, Clone)]
pub struct RationalTorus {
    dim: usize,
}

impl RationalTorus {
    pub fn new(dim: usize) -> Result<RationalTorus, ModelError> {
        if dim == 0 {
            return Err(ModelError::BadModel("torus dimension must be positive".into()));
        }
        Ok(RationalTorus { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elem(&self, coords: &[BigRational]) -> Result<Vec<BigRational>, ModelError> {
        if coords.len() != self.dim {
            return Err(ModelError::BadModel(format!(
                "expected {} coordinates, got {}",
                self.dim,
                coords.len()
            )));
        }
        Ok(coords.iter().map(frac).collect())
    }
}

#[derive(Debug, Clone)]
pub struct TorusPartition {
    dim: usize,
    cells_per_axis: usize,
    delta: BigRational,
}

impl TorusPartition {
    pub fn cells_per_axis(&self) -> usize {
        self.cells_per_axis
    }

    fn decode(&self, cell: usize) -> Vec<usize> {
        let mut k = Vec::with_capacity(self.dim);
        let mut rest = cell;
        for _ in 0..self.dim {
            k.push(rest % self.cells_per_axis);
            rest /= self.cells_per_axis;
        }
        k
    }

    fn encode(&self, k: &[usize]) -> usize {
        let mut idx = 0usize;
        for &ki in k.iter().rev() {
            idx = idx * self.cells_per_axis + ki;
        }
        idx
    }
}

impl PartitionView<Vec<BigRational>> for TorusPartition {
    fn cell_count(&self) -> usize {
        self.cells_per_axis.pow(self.dim as u32)
    }
    fn representative(&self, cell: usize) -> Vec<BigRational> {
        self.decode(cell)
            .into_iter()
            .map(|k| ratio(k as i64, self.cells_per_axis as i64))
            .collect()
    }
    fn measure(&self, _cell: usize) -> BigRational {
        ratio(1, self.cells_per_axis as i64).pow(self.dim as i32)
    }
    fn identity_cell(&self) -> usize {
        0
    }
    fn delta(&self) -> &BigRational {
        &self.delta
    }
}

/// Cells per axis for diameter `delta`: smallest `n` with `1/n <= delta`.
fn grid_resolution(delta: &BigRational) -> Result<usize, ModelError> {
    if !delta.is_positive() {
        return Err(ModelError::DeltaNotPositive);
    }
    let inv = delta.recip();
    let n = inv.ceil().to_integer();
    let n = n.to_usize().ok_or_else(|| {
        ModelError::PartitionUnavailable(format!("grid resolution {n} too large"))
    })?;
    Ok(n.max(1))
}

impl GroupOps for RationalTorus {
    type Elem = Vec<BigRational>;
    type Dist = BigRational;

    fn identity(&self) -> Vec<BigRational> {
        vec![BigRational::zero(); self.dim]
    }
    fn mul(&self, a: &Vec<BigRational>, b: &Vec<BigRational>) -> Vec<BigRational> {
        a.iter().zip(b).map(|(x, y)| frac(&(x + y))).collect()
    }
    fn inv(&self, a: &Vec<BigRational>) -> Vec<BigRational> {
        a.iter().map(|x| frac(&(-x))).collect()
    }
    fn dist(&self, a: &Vec<BigRational>, b: &Vec<BigRational>) -> BigRational {
        // Sup metric on the flat torus.
        let mut best = BigRational::zero();
        for (x, y) in a.iter().zip(b) {
            let d = frac(&(x - y));
            let d = d.clone().min(BigRational::one() - &d);
            if d > best {
                best = d;
            }
        }
        best
    }
    fn elem_eq(&self, a: &Vec<BigRational>, b: &Vec<BigRational>) -> bool {
        a == b
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn describe(&self) -> String {
        format!("rational torus of dimension {}", self.dim)
    }
    fn format_elem(&self, e: &Vec<BigRational>) -> String {
        let coords: Vec<String> = e.iter().map(format_ratio).collect();
        format!("({})", coords.join(", "))
    }

    fn certify_delta(
        &self,
        _phi: &[Vec<BigRational>],
        epsilon: &BigRational,
    ) -> Result<BigRational, ModelError> {
        if !epsilon.is_positive() {
            return Err(ModelError::EpsilonNotPositive);
        }
        // Translations commute: d(g1 + phi + g2, phi) = |g1 + g2| <= 2 delta.
        Ok(epsilon / BigRational::from_integer(2.into()))
    }

    fn sample_elem(&self, _phi: &[Vec<BigRational>], rng: &mut ChaCha8Rng) -> Vec<BigRational> {
        let denom = BigInt::from(1u64 << 32);
        (0..self.dim)
            .map(|_| BigRational::new(BigInt::from(rng.gen::<u32>()), denom.clone()))
            .collect()
    }
}

impl LatticeModel for RationalTorus {
    type Point = Vec<BigRational>;
    type Partition = TorusPartition;

    fn project(&self, g: &Vec<BigRational>) -> Vec<BigRational> {
        g.clone()
    }
    fn point_act(&self, x: &Vec<BigRational>, g: &Vec<BigRational>) -> Vec<BigRational> {
        self.mul(x, g)
    }
    fn identity_point(&self) -> Vec<BigRational> {
        self.identity()
    }
    fn point_eq(&self, a: &Vec<BigRational>, b: &Vec<BigRational>) -> bool {
        a == b
    }
    fn is_in_lattice(&self, g: &Vec<BigRational>) -> bool {
        g.iter().all(|x| x.is_zero())
    }
    fn min_lattice_displacement(&self) -> DisplacementBound {
        DisplacementBound::NoNontrivialElements
    }

    fn partition(&self, delta: &BigRational) -> Result<TorusPartition, ModelError> {
        Ok(TorusPartition {
            dim: self.dim,
            cells_per_axis: grid_resolution(delta)?,
            delta: delta.clone(),
        })
    }

    fn cell_of(&self, part: &TorusPartition, x: &Vec<BigRational>) -> usize {
        let n = part.cells_per_axis as i64;
        let k: Vec<usize> = x
            .iter()
            .map(|xi| {
                let scaled = xi * ratio(n, 1) + ratio(1, 2);
                let f = scaled.floor().to_integer();
                (f.mod_floor(&BigInt::from(n))).to_usize().expect("in range")
            })
            .collect();
        part.encode(&k)
    }

    fn exact_transitions(
        &self,
        part: &TorusPartition,
        from: usize,
        g: &Vec<BigRational>,
    ) -> Option<Vec<ExactTransition<Vec<BigRational>>>> {
        let n = part.cells_per_axis as i64;
        let width = ratio(1, n);
        let half = ratio(1, 2 * n);
        let k = part.decode(from);
        // Per axis: the translated interval [lo, lo + 1/n) meets one or two
        // grid cells; record (cell index, overlap length, overlap midpoint).
        let mut axis_options: Vec<Vec<(usize, BigRational, BigRational)>> = Vec::new();
        for (i, gi) in g.iter().enumerate() {
            let lo = ratio(k[i] as i64, n) - &half + gi;
            let scaled = &lo * ratio(n, 1) + ratio(1, 2);
            let j_raw = scaled.floor().to_integer();
            let j_lo = BigRational::new(j_raw.clone(), n.into()) - &half;
            let first_overlap = &j_lo + &width - &lo;
            let mut options = Vec::new();
            let cell_a = j_raw.mod_floor(&BigInt::from(n)).to_usize().expect("range");
            if first_overlap >= width {
                // Aligned: a single full-width target.
                let mid = &lo + &half;
                options.push((cell_a, width.clone(), mid));
            } else {
                let mid_a = (&lo + (&j_lo + &width)) / ratio(2, 1);
                options.push((cell_a, first_overlap.clone(), mid_a));
                let cell_b = (j_raw + BigInt::one())
                    .mod_floor(&BigInt::from(n))
                    .to_usize()
                    .expect("range");
                let second = &width - &first_overlap;
                let mid_b = ((&j_lo + &width) + (&lo + &width)) / ratio(2, 1);
                options.push((cell_b, second, mid_b));
            }
            axis_options.push(options);
        }
        // Cartesian product over axes; merge duplicate targets (possible
        // when n = 1).
        let mut acc: Vec<(Vec<usize>, BigRational, Vec<BigRational>)> =
            vec![(Vec::new(), BigRational::one(), Vec::new())];
        for options in &axis_options {
            let mut next = Vec::new();
            for (cells, measure, mids) in &acc {
                for (cell, len, mid) in options {
                    let mut cells2 = cells.clone();
                    cells2.push(*cell);
                    let mut mids2 = mids.clone();
                    mids2.push(mid.clone());
                    next.push((cells2, measure * len, mids2));
                }
            }
            acc = next;
        }
        let mut merged: std::collections::BTreeMap<usize, ExactTransition<Vec<BigRational>>> =
            std::collections::BTreeMap::new();
        for (cells, measure, mids) in acc {
            if measure.is_zero() {
                continue;
            }
            let to_cell = part.encode(&cells);
            let witness_src: Vec<BigRational> =
                mids.iter().zip(g).map(|(m, gi)| frac(&(m - gi))).collect();
            merged
                .entry(to_cell)
                .and_modify(|t| t.measure += &measure)
                .or_insert(ExactTransition {
                    to_cell,
                    measure,
                    witness_src,
                });
        }
        Some(merged.into_values().collect())
    }

    fn sample_point(&self, rng: &mut ChaCha8Rng) -> Vec<BigRational> {
        self.sample_elem(&[], rng)
    }

    fn sample_point_in_cell(
        &self,
        part: &TorusPartition,
        cell: usize,
        rng: &mut ChaCha8Rng,
    ) -> Vec<BigRational> {
        let n = part.cells_per_axis as i64;
        let rep = part.representative(cell);
        rep.iter()
            .map(|c| {
                let u = BigRational::new(BigInt::from(rng.gen::<u32>()), BigInt::from(1u64 << 32));
                let offset = (u - ratio(1, 2)) / ratio(n, 1);
                frac(&(c + offset))
            })
            .collect()
    }

    fn connector(&self, from: &Vec<BigRational>, to: &Vec<BigRational>) -> Result<Vec<BigRational>, ModelError> {
        Ok(from.iter().zip(to).map(|(f, t)| frac(&(t - f))).collect())
    }

    fn sample_lattice_elem(&self, _rng: &mut ChaCha8Rng) -> Option<Vec<BigRational>> {
        Some(self.identity())
    }

    fn format_point(&self, p: &Vec<BigRational>) -> String {
        self.format_elem(p)
    }
}

/// Floating-point torus; same geometry as [`RationalTorus`], used for the
/// sampled (Monte Carlo) code paths.
#[derive(Debug, Clone)]
pub struct FloatTorus {
    dim: usize,
    tol: f64,
}

impl FloatTorus {
    pub fn new(dim: usize) -> Result<FloatTorus, ModelError> {
        if dim == 0 {
            return Err(ModelError::BadModel("torus dimension must be positive".into()));
        }
        Ok(FloatTorus { dim, tol: 1e-9 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn wrap(x: f64) -> f64 {
        let f = x - x.floor();
        if f >= 1.0 {
            0.0
        } else {
            f
        }
    }
}

#[derive(Debug, Clone)]
pub struct FloatTorusPartition {
    dim: usize,
    cells_per_axis: usize,
    delta: BigRational,
}

impl FloatTorusPartition {
    fn decode(&self, cell: usize) -> Vec<usize> {
        let mut k = Vec::with_capacity(self.dim);
        let mut rest = cell;
        for _ in 0..self.dim {
            k.push(rest % self.cells_per_axis);
            rest /= self.cells_per_axis;
        }
        k
    }

    fn encode(&self, k: &[usize]) -> usize {
        let mut idx = 0usize;
        for &ki in k.iter().rev() {
            idx = idx * self.cells_per_axis + ki;
        }
        idx
    }
}

impl PartitionView<Vec<f64>> for FloatTorusPartition {
    fn cell_count(&self) -> usize {
        self.cells_per_axis.pow(self.dim as u32)
    }
    fn representative(&self, cell: usize) -> Vec<f64> {
        self.decode(cell)
            .into_iter()
            .map(|k| k as f64 / self.cells_per_axis as f64)
            .collect()
    }
    fn measure(&self, _cell: usize) -> BigRational {
        ratio(1, self.cells_per_axis as i64).pow(self.dim as i32)
    }
    fn identity_cell(&self) -> usize {
        0
    }
    fn delta(&self) -> &BigRational {
        &self.delta
    }
}

impl GroupOps for FloatTorus {
    type Elem = Vec<f64>;
    type Dist = f64;

    fn identity(&self) -> Vec<f64> {
        vec![0.0; self.dim]
    }
    fn mul(&self, a: &Vec<f64>, b: &Vec<f64>) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| Self::wrap(x + y)).collect()
    }
    fn inv(&self, a: &Vec<f64>) -> Vec<f64> {
        a.iter().map(|x| Self::wrap(-x)).collect()
    }
    fn dist(&self, a: &Vec<f64>, b: &Vec<f64>) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| {
                let d = Self::wrap(x - y);
                d.min(1.0 - d)
            })
            .fold(0.0, f64::max)
    }
    fn elem_eq(&self, a: &Vec<f64>, b: &Vec<f64>) -> bool {
        self.dist(a, b) <= self.tol
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn describe(&self) -> String {
        format!("floating torus of dimension {}", self.dim)
    }
    fn format_elem(&self, e: &Vec<f64>) -> String {
        let coords: Vec<String> = e.iter().map(|x| format!("{x:.6}")).collect();
        format!("({})", coords.join(", "))
    }

    fn certify_delta(&self, _phi: &[Vec<f64>], epsilon: &BigRational) -> Result<BigRational, ModelError> {
        if !epsilon.is_positive() {
            return Err(ModelError::EpsilonNotPositive);
        }
        Ok(epsilon / BigRational::from_integer(2.into()))
    }

    fn sample_elem(&self, _phi: &[Vec<f64>], rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..self.dim).map(|_| rng.gen::<f64>()).collect()
    }
}

impl LatticeModel for FloatTorus {
    type Point = Vec<f64>;
    type Partition = FloatTorusPartition;

    fn project(&self, g: &Vec<f64>) -> Vec<f64> {
        g.clone()
    }
    fn point_act(&self, x: &Vec<f64>, g: &Vec<f64>) -> Vec<f64> {
        self.mul(x, g)
    }
    fn identity_point(&self) -> Vec<f64> {
        self.identity()
    }
    fn point_eq(&self, a: &Vec<f64>, b: &Vec<f64>) -> bool {
        self.elem_eq(a, b)
    }
    fn is_in_lattice(&self, g: &Vec<f64>) -> bool {
        self.dist(g, &self.identity()) <= self.tol
    }
    fn min_lattice_displacement(&self) -> DisplacementBound {
        DisplacementBound::NoNontrivialElements
    }

    fn partition(&self, delta: &BigRational) -> Result<FloatTorusPartition, ModelError> {
        Ok(FloatTorusPartition {
            dim: self.dim,
            cells_per_axis: grid_resolution(delta)?,
            delta: delta.clone(),
        })
    }

    fn cell_of(&self, part: &FloatTorusPartition, x: &Vec<f64>) -> usize {
        let n = part.cells_per_axis as i64;
        let k: Vec<usize> = x
            .iter()
            .map(|xi| {
                let f = (xi * n as f64 + 0.5).floor() as i64;
                f.rem_euclid(n) as usize
            })
            .collect();
        part.encode(&k)
    }

    fn exact_transitions(
        &self,
        _part: &FloatTorusPartition,
        _from: usize,
        _g: &Vec<f64>,
    ) -> Option<Vec<ExactTransition<Vec<f64>>>> {
        None
    }

    fn sample_point(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        self.sample_elem(&[], rng)
    }

    fn sample_point_in_cell(
        &self,
        part: &FloatTorusPartition,
        cell: usize,
        rng: &mut ChaCha8Rng,
    ) -> Vec<f64> {
        let n = part.cells_per_axis as f64;
        part.representative(cell)
            .iter()
            .map(|c| Self::wrap(c + (rng.gen::<f64>() - 0.5) / n))
            .collect()
    }

    fn connector(&self, from: &Vec<f64>, to: &Vec<f64>) -> Result<Vec<f64>, ModelError> {
        Ok(from.iter().zip(to).map(|(f, t)| Self::wrap(t - f)).collect())
    }

    fn sample_lattice_elem(&self, _rng: &mut ChaCha8Rng) -> Option<Vec<f64>> {
        Some(self.identity())
    }

    fn format_point(&self, p: &Vec<f64>) -> String {
        self.format_elem(p)
    }
}
