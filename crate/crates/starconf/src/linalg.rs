//! Exact dense linear algebra over a configured field: rank, determinant,
//! linear solve, and kernel vectors.
//!
//! Elimination uses the first nonzero entry in column order as pivot; exact
//! arithmetic needs no numerical pivoting and the fixed order keeps every
//! derived object (solutions, kernel vectors, certificates) reproducible.

use crate::error::{Error, Result};
use crate::field::Field;

/// Row-major dense matrix carrying its field context.
#[derive(Clone, Debug)]
pub struct DenseMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> DenseMatrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        DenseMatrix { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            data.extend(row);
        }
        Ok(DenseMatrix { field, rows: nrows, cols: ncols, data })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mat_vec(&self, x: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "mat-vec: {} columns vs vector length {}",
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(x.iter()) {
                    acc = self.field.add(&acc, &self.field.mul(a, b));
                }
                acc
            })
            .collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    /// Forward elimination in place. Returns the pivot positions (row, col)
    /// and the number of row swaps performed. Scanning stops early once
    /// every row holds a pivot.
    fn echelonize(&mut self) -> (Vec<(usize, usize)>, usize) {
        let mut pivots = Vec::new();
        let mut swaps = 0usize;
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pivot_row) = (r..self.rows).find(|&i| !self.field.is_zero(self.get(i, c)))
            else {
                continue;
            };
            if pivot_row != r {
                self.swap_rows(pivot_row, r);
                swaps += 1;
            }
            let inv = self
                .field
                .inv(self.get(r, c))
                .expect("pivot is nonzero by construction");
            let field = self.field.clone();
            let cols = self.cols;
            let (head, tail) = self.data.split_at_mut((r + 1) * cols);
            let src = &head[r * cols + c..(r + 1) * cols];
            for i in 0..self.rows - r - 1 {
                let dst = &mut tail[i * cols + c..(i + 1) * cols];
                if field.is_zero(&dst[0]) {
                    continue;
                }
                let factor = field.mul(&dst[0], &inv);
                field.row_axpy_sub(dst, src, &factor);
            }
            pivots.push((r, c));
            r += 1;
        }
        (pivots, swaps)
    }

    /// Exact rank by Gaussian elimination on a working copy.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.echelonize().0.len()
    }

    /// Exact determinant; errors on non-square input.
    pub fn det(&self) -> Result<F::Elem> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut work = self.clone();
        let (pivots, swaps) = work.echelonize();
        if pivots.len() < self.rows {
            return Ok(self.field.zero());
        }
        let mut det = self.field.one();
        for &(r, c) in &pivots {
            det = self.field.mul(&det, work.get(r, c));
        }
        if swaps % 2 == 1 {
            det = self.field.neg(&det);
        }
        Ok(det)
    }

    /// Any exact solution of `self * x = rhs`, or `None` when the system is
    /// inconsistent. Free variables are set to zero, so the answer is
    /// deterministic even for underdetermined systems.
    pub fn solve(&self, rhs: &[F::Elem]) -> Result<Option<Vec<F::Elem>>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: {} rows vs rhs length {}",
                self.rows,
                rhs.len()
            )));
        }
        // Eliminate the augmented matrix [self | rhs].
        let mut aug = DenseMatrix::zeros(self.field.clone(), self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, rhs[i].clone());
        }
        let (pivots, _) = aug.echelonize();
        // A pivot landing in the augmented column marks an inconsistency, as
        // does any leftover nonzero below the last structural pivot.
        let structural: Vec<(usize, usize)> =
            pivots.iter().copied().filter(|&(_, c)| c < self.cols).collect();
        if pivots.len() > structural.len() {
            return Ok(None);
        }
        for i in structural.len()..self.rows {
            if !self.field.is_zero(aug.get(i, self.cols)) {
                return Ok(None);
            }
        }
        // Back-substitution with free variables zeroed.
        let mut x = vec![self.field.zero(); self.cols];
        for &(r, c) in structural.iter().rev() {
            let mut acc = aug.get(r, self.cols).clone();
            for j in c + 1..self.cols {
                let a = aug.get(r, j);
                if !self.field.is_zero(a) {
                    acc = self.field.sub(&acc, &self.field.mul(a, &x[j]));
                }
            }
            let inv = self.field.inv(aug.get(r, c)).expect("pivot nonzero");
            x[c] = self.field.mul(&acc, &inv);
        }
        Ok(Some(x))
    }

    /// A nonzero kernel vector when the matrix has nontrivial nullspace,
    /// computed by setting the first free variable to one and all others to
    /// zero; `None` for injective matrices.
    pub fn kernel_vector(&self) -> Option<Vec<F::Elem>> {
        let mut work = self.clone();
        let (pivots, _) = work.echelonize();
        if pivots.len() == self.cols {
            return None;
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let free = (0..self.cols).find(|c| !pivot_cols.contains(c))?;
        let mut x = vec![self.field.zero(); self.cols];
        x[free] = self.field.one();
        for &(r, c) in pivots.iter().rev() {
            if c > free {
                continue;
            }
            let mut acc = self.field.zero();
            for j in c + 1..self.cols {
                let a = work.get(r, j);
                if !self.field.is_zero(a) {
                    acc = self.field.sub(&acc, &self.field.mul(a, &x[j]));
                }
            }
            let inv = self.field.inv(work.get(r, c)).expect("pivot nonzero");
            x[c] = self.field.mul(&acc, &inv);
        }
        Some(x)
    }
}

/// The r x r adjacency matrix of the complete graph K_r: zero diagonal, ones
/// elsewhere. Its determinant is (-1)^(r-1) (r-1), so it is always
/// nonsingular; the diagonal blocks of every evaluation matrix factor
/// through it.
pub fn complete_graph_adjacency<F: Field>(field: F, r: usize) -> Result<DenseMatrix<F>> {
    if r < 2 {
        return Err(Error::InvalidTuple(format!(
            "complete-graph adjacency needs r >= 2, got {r}"
        )));
    }
    let mut m = DenseMatrix::zeros(field, r, r);
    for i in 0..r {
        for j in 0..r {
            if i != j {
                let one = m.field().one();
                m.set(i, j, one);
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, Fp, Rationals, DEFAULT_PRIME};
    use num::rational::BigRational;
    use rand::{RngCore, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn fp() -> Fp {
        Fp::new(DEFAULT_PRIME).unwrap()
    }

    fn random_matrix(field: &Fp, rows: usize, cols: usize, rng: &mut dyn RngCore) -> DenseMatrix<Fp> {
        let mut m = DenseMatrix::zeros(field.clone(), rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, field.sample(rng));
            }
        }
        m
    }

    /// Cofactor-expansion determinant, the independent oracle for small
    /// matrices.
    fn det_cofactor<F: Field>(m: &DenseMatrix<F>) -> F::Elem {
        let n = m.rows();
        let field = m.field().clone();
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = field.zero();
        for j in 0..n {
            if field.is_zero(m.get(0, j)) {
                continue;
            }
            let mut minor = DenseMatrix::zeros(field.clone(), n - 1, n - 1);
            for i in 1..n {
                let mut jj = 0;
                for k in 0..n {
                    if k == j {
                        continue;
                    }
                    minor.set(i - 1, jj, m.get(i, k).clone());
                    jj += 1;
                }
            }
            let term = field.mul(m.get(0, j), &det_cofactor(&minor));
            acc = if j % 2 == 0 { field.add(&acc, &term) } else { field.sub(&acc, &term) };
        }
        acc
    }

    #[test]
    fn rank_identity_and_zero() {
        let f = fp();
        assert_eq!(DenseMatrix::identity(f.clone(), 5).rank(), 5);
        assert_eq!(DenseMatrix::zeros(f, 3, 4).rank(), 0);
    }

    #[test]
    fn complete_graph_adjacency_shape_and_rank() {
        let f = fp();
        let a2 = complete_graph_adjacency(f.clone(), 2).unwrap();
        assert_eq!(*a2.get(0, 0), 0);
        assert_eq!(*a2.get(0, 1), 1);
        assert_eq!(*a2.get(1, 0), 1);
        assert_eq!(*a2.get(1, 1), 0);
        assert_eq!(complete_graph_adjacency(f.clone(), 3).unwrap().rank(), 3);
        assert_eq!(complete_graph_adjacency(f.clone(), 4).unwrap().rank(), 4);
        assert!(complete_graph_adjacency(f, 1).is_err());
    }

    #[test]
    fn complete_graph_adjacency_determinants() {
        // det = (-1)^(r-1) (r-1): the eigenvalues of J - I are r-1 once and
        // -1 with multiplicity r-1. Verified against the cofactor oracle for
        // r <= 5 and against the closed form up to r = 12.
        let f = fp();
        for r in 2..=12usize {
            let a = complete_graph_adjacency(f.clone(), r).unwrap();
            let expected = f.from_int(if (r - 1) % 2 == 0 { (r - 1) as i64 } else { -((r - 1) as i64) });
            assert_eq!(a.det().unwrap(), expected, "r = {r}");
            assert_eq!(a.rank(), r);
            if r <= 5 {
                assert_eq!(det_cofactor(&a), expected);
            }
        }
        // Named cases: det A_3 = 2, det A_4 = -3, det A_12 = -11.
        assert_eq!(
            complete_graph_adjacency(f.clone(), 3).unwrap().det().unwrap(),
            2
        );
        assert_eq!(
            complete_graph_adjacency(f.clone(), 4).unwrap().det().unwrap(),
            f.from_int(-3)
        );
        assert_eq!(
            complete_graph_adjacency(f.clone(), 12).unwrap().det().unwrap(),
            f.from_int(-11)
        );
    }

    #[test]
    fn det_matches_cofactor_oracle_on_random_matrices() {
        let f = fp();
        assert_eq!(DenseMatrix::identity(f.clone(), 3).det().unwrap(), 1);
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for n in 1..=5 {
            for _ in 0..10 {
                let m = random_matrix(&f, n, n, &mut rng);
                assert_eq!(m.det().unwrap(), det_cofactor(&m));
            }
        }
        assert!(random_matrix(&f, 2, 3, &mut rng).det().is_err());
    }

    #[test]
    fn rank_equals_rank_of_transpose() {
        let f = fp();
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        for _ in 0..20 {
            let m = random_matrix(&f, 7, 13, &mut rng);
            assert_eq!(m.rank(), m.transpose().rank());
        }
        // Products have bounded rank, so deficient cases are exercised too.
        for k in 1..=4 {
            let a = random_matrix(&f, 8, k, &mut rng);
            let b = random_matrix(&f, k, 9, &mut rng);
            let mut prod = DenseMatrix::zeros(f.clone(), 8, 9);
            for i in 0..8 {
                for j in 0..9 {
                    let mut acc = 0u64;
                    for t in 0..k {
                        acc = f.add(&acc, &f.mul(a.get(i, t), b.get(t, j)));
                    }
                    prod.set(i, j, acc);
                }
            }
            assert_eq!(prod.rank(), k);
            assert_eq!(prod.transpose().rank(), k);
        }
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let f = fp();
        let id = DenseMatrix::identity(f.clone(), 4);
        let rhs = vec![3u64, 1, 4, 1];
        assert_eq!(id.solve(&rhs).unwrap().unwrap(), rhs);

        let zero = DenseMatrix::zeros(f.clone(), 3, 3);
        assert!(zero.solve(&[1, 0, 0]).unwrap().is_none());
        assert!(zero.solve(&[0, 0]).is_err());
    }

    #[test]
    fn solve_singular_but_consistent_has_zero_residual() {
        let f = fp();
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for _ in 0..20 {
            // rhs drawn from the column space so the system is solvable.
            let m = random_matrix(&f, 6, 9, &mut rng);
            let x0: Vec<u64> = (0..9).map(|_| f.sample(&mut rng)).collect();
            let rhs = m.mat_vec(&x0).unwrap();
            let x = m.solve(&rhs).unwrap().expect("consistent by construction");
            assert_eq!(m.mat_vec(&x).unwrap(), rhs);
        }
    }

    #[test]
    fn solve_over_rationals_is_exact() {
        let q = Rationals;
        let m = DenseMatrix::from_rows(
            q.clone(),
            vec![
                vec![q.from_int(2), q.from_int(1)],
                vec![q.from_int(1), q.from_int(3)],
            ],
        )
        .unwrap();
        let rhs = vec![q.from_int(1), q.from_int(0)];
        let x = m.solve(&rhs).unwrap().unwrap();
        let expected: Vec<BigRational> = vec![
            q.from_decimal("3", Some("5")).unwrap(),
            q.from_decimal("-1", Some("5")).unwrap(),
        ];
        assert_eq!(x, expected);
    }

    #[test]
    fn kernel_vector_spans_nullspace() {
        let f = fp();
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        // 2x3 full-rank matrices have a one-dimensional kernel.
        for _ in 0..20 {
            let m = random_matrix(&f, 2, 3, &mut rng);
            if m.rank() < 2 {
                continue;
            }
            let v = m.kernel_vector().unwrap();
            assert!(v.iter().any(|x| *x != 0));
            assert!(m.mat_vec(&v).unwrap().iter().all(|x| *x == 0));
        }
        assert!(DenseMatrix::identity(f, 3).kernel_vector().is_none());
    }

    #[test]
    fn rank_drops_under_specialization_only_rarely() {
        // For random integer matrices, rank over Q is at least the rank of
        // the reduction mod p, with equality on almost every draw.
        let f = fp();
        let q = Rationals;
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let samples = 40;
        let mut agree = 0usize;
        for _ in 0..samples {
            // Build a 20x20 integer matrix of bounded rank k.
            let k = 5 + (rng.next_u64() % 10) as usize;
            let a: Vec<Vec<i64>> = (0..20)
                .map(|_| (0..k).map(|_| (rng.next_u64() % 19) as i64 - 9).collect())
                .collect();
            let b: Vec<Vec<i64>> = (0..k)
                .map(|_| (0..20).map(|_| (rng.next_u64() % 19) as i64 - 9).collect())
                .collect();
            let prod = |i: usize, j: usize| -> i64 {
                (0..k).map(|t| a[i][t] * b[t][j]).sum()
            };
            let mq = DenseMatrix::from_rows(
                q.clone(),
                (0..20)
                    .map(|i| (0..20).map(|j| q.from_int(prod(i, j))).collect())
                    .collect(),
            )
            .unwrap();
            let mp = DenseMatrix::from_rows(
                f.clone(),
                (0..20)
                    .map(|i| (0..20).map(|j| f.from_int(prod(i, j))).collect())
                    .collect(),
            )
            .unwrap();
            let rq = mq.rank();
            let rp = mp.rank();
            assert!(rq >= rp);
            if rq == rp {
                agree += 1;
            }
        }
        assert!(agree * 100 >= samples * 95, "agreement {agree}/{samples}");
    }
}
