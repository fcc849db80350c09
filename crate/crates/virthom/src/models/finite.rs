//! Exact finite quotient models: a finite group given by its multiplication
//! table, a subgroup playing the lattice, and the right coset space with
//! counting measure. The metric is discrete (distance 1 between distinct
//! elements), which forces singleton partition cells and makes every
//! pipeline quantity exact.

use super::{
    DisplacementBound, ExactTransition, GroupOps, LatticeModel, ModelError, PartitionView,
};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct FiniteModel {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    identity: usize,
    lattice: Vec<usize>,
    in_lattice: Vec<bool>,
    coset_of: Vec<usize>,
    coset_reps: Vec<usize>,
}

impl FiniteModel {
    /// Validates that `table` is a group table and `lattice` a subgroup.
    pub fn new(table: Vec<Vec<usize>>, lattice: Vec<usize>) -> Result<FiniteModel, ModelError> {
        let n = table.len();
        if n == 0 {
            return Err(ModelError::BadModel("empty multiplication table".into()));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(ModelError::BadModel("table is not square over 0..n".into()));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| ModelError::BadModel("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| ModelError::BadModel(format!("element {g} has no inverse")))?;
            inverse[g] = inv;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(ModelError::BadModel(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut in_lattice = vec![false; n];
        for &g in &lattice {
            if g >= n {
                return Err(ModelError::BadModel(format!("lattice element {g} out of range")));
            }
            in_lattice[g] = true;
        }
        if !in_lattice[identity] {
            return Err(ModelError::BadModel("lattice does not contain the identity".into()));
        }
        for &a in &lattice {
            if !in_lattice[inverse[a]] {
                return Err(ModelError::BadModel("lattice not closed under inverse".into()));
            }
            for &b in &lattice {
                if !in_lattice[table[a][b]] {
                    return Err(ModelError::BadModel("lattice not closed under product".into()));
                }
            }
        }
        let mut lattice: Vec<usize> = (0..n).filter(|&g| in_lattice[g]).collect();
        lattice.sort_unstable();
        // Right cosets: coset of g is { gamma g : gamma in lattice },
        // identified by its minimal element; ids in order of first
        // appearance of that minimum.
        let mut coset_of = vec![usize::MAX; n];
        let mut coset_reps = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let id = coset_reps.len();
            coset_reps.push(g);
            for &gamma in &lattice {
                coset_of[table[gamma][g]] = id;
            }
        }
        Ok(FiniteModel {
            table,
            inverse,
            identity,
            lattice,
            in_lattice,
            coset_of,
            coset_reps,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn lattice_order(&self) -> usize {
        self.lattice.len()
    }

    pub fn num_cosets(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn coset_representative(&self, coset: usize) -> usize {
        self.coset_reps[coset]
    }

    /// Cyclic group of order `n`.
    pub fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    /// Dihedral group of order `2n`: elements `0..n` are rotations `r^i`,
    /// `n..2n` are reflections `s r^i`.
    pub fn dihedral_table(n: usize) -> Vec<Vec<usize>> {
        let idx = |refl: bool, i: usize| if refl { n + i } else { i };
        (0..2 * n)
            .map(|a| {
                (0..2 * n)
                    .map(|b| {
                        let (ra, ia) = (a >= n, a % n);
                        let (rb, ib) = (b >= n, b % n);
                        // (s^x r^i)(s^y r^j) = s^(x+y) r^(j +- i).
                        if rb {
                            idx(!ra, (n + ib - ia % n) % n)
                        } else {
                            idx(ra, (ia + ib) % n)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Direct product of two group tables.
    pub fn product_table(a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let (na, nb) = (a.len(), b.len());
        let mut t = vec![vec![0usize; na * nb]; na * nb];
        for i1 in 0..na {
            for j1 in 0..nb {
                for i2 in 0..na {
                    for j2 in 0..nb {
                        t[i1 * nb + j1][i2 * nb + j2] = a[i1][i2] * nb + b[j1][j2];
                    }
                }
            }
        }
        t
    }

    /// Subgroup generated by `gens` inside the given table.
    pub fn subgroup_closure(table: &[Vec<usize>], gens: &[usize]) -> Vec<usize> {
        let n = table.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g))
            .expect("group table");
        let mut seen = vec![false; n];
        seen[identity] = true;
        let mut frontier = vec![identity];
        while let Some(g) = frontier.pop() {
            for &s in gens {
                let h = table[g][s];
                if !seen[h] {
                    seen[h] = true;
                    frontier.push(h);
                }
            }
        }
        (0..n).filter(|&g| seen[g]).collect()
    }

    /// The order-4 cyclic example: `Z/4` with lattice `{0, 2}`.
    pub fn z4_mod2() -> FiniteModel {
        FiniteModel::new(Self::cyclic_table(4), vec![0, 2]).expect("valid")
    }
}

#[derive(Debug, Clone)]
pub struct FinitePartition {
    cells: Vec<usize>,
    identity_cell: usize,
    delta: BigRational,
}

impl PartitionView<usize> for FinitePartition {
    fn cell_count(&self) -> usize {
        self.cells.len()
    }
    fn representative(&self, cell: usize) -> usize {
        self.cells[cell]
    }
    fn measure(&self, _cell: usize) -> BigRational {
        BigRational::one()
    }
    fn identity_cell(&self) -> usize {
        self.identity_cell
    }
    fn delta(&self) -> &BigRational {
        &self.delta
    }
}

impl GroupOps for FiniteModel {
    type Elem = usize;
    type Dist = BigRational;

    fn identity(&self) -> usize {
        self.identity
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.table[*a][*b]
    }
    fn inv(&self, a: &usize) -> usize {
        self.inverse[*a]
    }
    fn dist(&self, a: &usize, b: &usize) -> BigRational {
        if a == b {
            BigRational::zero()
        } else {
            BigRational::one()
        }
    }
    fn elem_eq(&self, a: &usize, b: &usize) -> bool {
        a == b
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn describe(&self) -> String {
        format!(
            "finite group of order {} with lattice of order {}",
            self.order(),
            self.lattice_order()
        )
    }
    fn format_elem(&self, e: &usize) -> String {
        e.to_string()
    }

    fn certify_delta(&self, _phi: &[usize], epsilon: &BigRational) -> Result<BigRational, ModelError> {
        if !epsilon.is_positive() {
            return Err(ModelError::EpsilonNotPositive);
        }
        // In the discrete metric only the identity is within 1/2 of the
        // identity, so conjugation by such elements is trivial.
        Ok(BigRational::new(1.into(), 2.into()))
    }

    fn sample_elem(&self, _phi: &[usize], rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(0..self.order())
    }
}

impl LatticeModel for FiniteModel {
    type Point = usize;
    type Partition = FinitePartition;

    fn project(&self, g: &usize) -> usize {
        self.coset_of[*g]
    }
    fn point_act(&self, x: &usize, g: &usize) -> usize {
        self.coset_of[self.table[self.coset_reps[*x]][*g]]
    }
    fn identity_point(&self) -> usize {
        self.coset_of[self.identity]
    }
    fn point_eq(&self, a: &usize, b: &usize) -> bool {
        a == b
    }
    fn is_in_lattice(&self, g: &usize) -> bool {
        self.in_lattice[*g]
    }
    fn min_lattice_displacement(&self) -> DisplacementBound {
        if self.lattice.len() > 1 {
            DisplacementBound::AtLeast(BigRational::one())
        } else {
            DisplacementBound::NoNontrivialElements
        }
    }

    fn partition(&self, delta: &BigRational) -> Result<FinitePartition, ModelError> {
        if !delta.is_positive() {
            return Err(ModelError::DeltaNotPositive);
        }
        // Singleton cells: diameter zero, one per coset.
        Ok(FinitePartition {
            cells: (0..self.num_cosets()).collect(),
            identity_cell: self.identity_point(),
            delta: delta.clone(),
        })
    }

    fn cell_of(&self, _part: &FinitePartition, x: &usize) -> usize {
        *x
    }

    fn exact_transitions(
        &self,
        _part: &FinitePartition,
        from: usize,
        g: &usize,
    ) -> Option<Vec<ExactTransition<usize>>> {
        let to = self.point_act(&from, g);
        Some(vec![ExactTransition {
            to_cell: to,
            measure: BigRational::one(),
            witness_src: from,
        }])
    }

    fn sample_point(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(0..self.num_cosets())
    }

    fn sample_point_in_cell(
        &self,
        part: &FinitePartition,
        cell: usize,
        _rng: &mut ChaCha8Rng,
    ) -> usize {
        part.cells[cell]
    }

    fn connector(&self, from: &usize, to: &usize) -> Result<usize, ModelError> {
        if from == to {
            Ok(self.identity)
        } else {
            Err(ModelError::ConnectorUnavailable)
        }
    }

    fn sample_lattice_elem(&self, rng: &mut ChaCha8Rng) -> Option<usize> {
        Some(self.lattice[rng.gen_range(0..self.lattice.len())])
    }

    fn format_point(&self, p: &usize) -> String {
        format!("coset {p}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn z4_cosets() {
        let m = FiniteModel::z4_mod2();
        assert_eq!(m.order(), 4);
        assert_eq!(m.num_cosets(), 2);
        // {0,2} and {1,3}.
        assert_eq!(m.project(&0), m.project(&2));
        assert_eq!(m.project(&1), m.project(&3));
        assert_ne!(m.project(&0), m.project(&1));
        assert_eq!(m.identity_point(), 0);
    }

    #[test]
    fn coset_count_divides_order() {
        let table = FiniteModel::dihedral_table(6);
        for gens in [vec![0], vec![6], vec![1], vec![6, 1]] {
            let lat = FiniteModel::subgroup_closure(&table, &gens);
            let m = FiniteModel::new(table.clone(), lat.clone()).unwrap();
            assert_eq!(m.num_cosets() * lat.len(), 12);
        }
    }

    #[test]
    fn dihedral_table_is_a_group() {
        for n in 2..=6 {
            let t = FiniteModel::dihedral_table(n);
            FiniteModel::new(t, vec![0]).unwrap();
        }
    }

    #[test]
    fn product_table_is_a_group() {
        let t = FiniteModel::product_table(
            &FiniteModel::cyclic_table(3),
            &FiniteModel::cyclic_table(4),
        );
        let m = FiniteModel::new(t, vec![0]).unwrap();
        assert_eq!(m.order(), 12);
    }

    #[test]
    fn bad_tables_rejected() {
        // Rows of the wrong length.
        assert!(FiniteModel::new(vec![vec![0, 1]], vec![0]).is_err());
        // A non-associative magma on 3 elements with an identity.
        let t = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 2, 1]];
        assert!(FiniteModel::new(t, vec![0]).is_err());
        // Lattice not closed.
        assert!(FiniteModel::new(FiniteModel::cyclic_table(4), vec![0, 1]).is_err());
    }

    #[test]
    fn projection_invariant_under_lattice_left_multiplication() {
        let m = FiniteModel::z4_mod2();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let g = m.sample_elem(&[], &mut rng);
            let gamma = m.sample_lattice_elem(&mut rng).unwrap();
            assert_eq!(m.project(&m.mul(&gamma, &g)), m.project(&g));
        }
    }

    #[test]
    fn transitions_follow_coset_arithmetic() {
        let m = FiniteModel::z4_mod2();
        let part = m.partition(&BigRational::new(1.into(), 2.into())).unwrap();
        // phi(s) = 1 swaps the two cosets.
        let t0 = m.exact_transitions(&part, 0, &1).unwrap();
        assert_eq!(t0.len(), 1);
        assert_eq!(t0[0].to_cell, 1);
        let t1 = m.exact_transitions(&part, 1, &1).unwrap();
        assert_eq!(t1[0].to_cell, 0);
    }
}
