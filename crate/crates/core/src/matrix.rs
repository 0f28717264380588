//! Dense matrices and subspaces over a [`Field`], with row reduction.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::Field;

/// Row-major dense matrix. Zero rows or zero columns are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<F>>) -> Self {
        assert_eq!(entries.len(), rows, "row count");
        let mut data = Vec::with_capacity(rows * cols);
        for row in entries {
            assert_eq!(row.len(), cols, "row length");
            data.extend(row);
        }
        Matrix { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: F) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<G>(&self, f: impl Fn(&F) -> Option<G>) -> Option<Matrix<G>> {
        let data = self.data.iter().map(f).collect::<Option<Vec<G>>>()?;
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|a| a.mul(s))
    }

    pub fn neg(&self) -> Self {
        self.map(Field::neg)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let mut best: Option<(usize, f64)> = None;
            for r in pivot_row..m.rows {
                let entry = m.get(r, col);
                if entry.is_zero() {
                    continue;
                }
                let mag = entry.magnitude();
                if best.map_or(true, |(_, b)| mag > b) {
                    best = Some((r, mag));
                }
            }
            let Some((r, _)) = best else { continue };
            m.swap_rows(r, pivot_row);
            let inv = m
                .get(pivot_row, col)
                .inv()
                .expect("nonzero pivot is invertible");
            for c in 0..m.cols {
                let v = m.get(pivot_row, c).mul(&inv);
                m.set(pivot_row, c, v);
            }
            m.set(pivot_row, col, F::one());
            for r in 0..m.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in 0..m.cols {
                    let v = m.get(r, c).sub(&factor.mul(m.get(pivot_row, c)));
                    m.set(r, c, v);
                }
                m.set(r, col, F::zero());
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self · x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = r.get(row, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.put_block(0, 0, self);
        aug.put_block(0, n, &Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        Some(r.block(0, n, n, n))
    }
}

/// A linear subspace of `F^ambient`, stored as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Matrix<F>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    pub fn span(ambient: usize, vectors: &[Vec<F>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = Matrix::from_rows(vectors.len(), ambient, vectors.to_vec());
        Self::from_rows_matrix(&m)
    }

    /// Row space of `m`.
    pub fn from_rows_matrix(m: &Matrix<F>) -> Self {
        let (r, pivots) = m.rref();
        let k = pivots.len();
        Subspace {
            ambient: m.cols(),
            basis: r.block(0, 0, k, m.cols()),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> Vec<Vec<F>> {
        (0..self.dim())
            .map(|r| self.basis.row(r).to_vec())
            .collect()
    }

    pub fn basis_matrix(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let single = Matrix::from_rows(1, self.ambient, vec![v.to_vec()]);
        self.basis.vstack(&single).rank() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        self.sum(other).dim() == self.dim()
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        Self::from_rows_matrix(&self.basis.vstack(&other.basis))
    }

    /// Rows `w` with `w · u = 0` for all `u` in the subspace; `x` lies in the
    /// subspace iff `W x = 0`.
    pub fn annihilator(&self) -> Matrix<F> {
        let ker = self.basis.kernel();
        if ker.is_empty() {
            return Matrix::zeros(0, self.ambient);
        }
        Matrix::from_rows(ker.len(), self.ambient, ker)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let stacked = self.annihilator().vstack(&other.annihilator());
        let ker = stacked.kernel();
        Self::span(self.ambient, &ker)
    }

    /// Image under a linear map given as a matrix acting on column vectors.
    pub fn image(&self, map: &Matrix<F>) -> Self {
        assert_eq!(map.cols(), self.ambient);
        let vectors: Vec<Vec<F>> = self.basis().iter().map(|b| map.mul_vec(b)).collect();
        Self::span(map.rows(), &vectors)
    }

    /// Coordinates of `v` in the echelon basis, read off at the pivot
    /// columns; `None` when `v` is outside the subspace.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let pivots: Vec<usize> = (0..self.dim())
            .map(|r| {
                self.basis
                    .row(r)
                    .iter()
                    .position(|x| !x.is_zero())
                    .expect("echelon rows are nonzero")
            })
            .collect();
        let coords: Vec<F> = pivots.iter().map(|&c| v[c].clone()).collect();
        let mut back = vec![F::zero(); self.ambient];
        for (r, c) in coords.iter().enumerate() {
            for (k, x) in self.basis.row(r).iter().enumerate() {
                back[k] = back[k].add(&x.mul(c));
            }
        }
        back.iter()
            .zip(v)
            .all(|(a, b)| a.sub(b).is_zero())
            .then_some(coords)
    }

    /// `{x : map · x ∈ target}`.
    pub fn preimage(map: &Matrix<F>, target: &Self) -> Self {
        assert_eq!(map.rows(), target.ambient);
        let constraint = target.annihilator().mul(map);
        Self::span(map.cols(), &constraint.kernel())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, q_int, Q};

    fn qm(rows: usize, cols: usize, entries: &[i64]) -> Matrix<Q> {
        Matrix::from_vec(rows, cols, entries.iter().map(|&x| q_int(x)).collect())
    }

    #[test]
    fn inverse_of_a2_cartan() {
        let c = qm(2, 2, &[2, -1, -1, 2]);
        let inv = c.inverse().unwrap();
        assert_eq!(
            inv,
            Matrix::from_vec(2, 2, vec![q(2, 3), q(1, 3), q(1, 3), q(2, 3)])
        );
        assert!(qm(2, 2, &[1, 2, 2, 4]).inverse().is_none());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = qm(2, 4, &[1, 2, 0, -1, 0, 1, 1, 1]);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(|x| x == &q_int(0)));
        }
    }

    #[test]
    fn subspace_intersection_and_preimage() {
        let u = Subspace::span(
            3,
            &[
                vec![q_int(1), q_int(0), q_int(0)],
                vec![q_int(0), q_int(1), q_int(0)],
            ],
        );
        let w = Subspace::span(
            3,
            &[
                vec![q_int(0), q_int(1), q_int(0)],
                vec![q_int(0), q_int(0), q_int(1)],
            ],
        );
        let i = u.intersection(&w);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[q_int(0), q_int(5), q_int(0)]));

        // projection onto the first coordinate; preimage of 0 is a plane
        let proj = qm(1, 3, &[1, 0, 0]);
        let pre = Subspace::preimage(&proj, &Subspace::zero(1));
        assert_eq!(pre.dim(), 2);
        assert!(pre.contains(&[q_int(0), q_int(1), q_int(1)]));
    }

    #[test]
    fn empty_shapes_behave() {
        let m: Matrix<Q> = Matrix::zeros(0, 3);
        assert_eq!(m.kernel().len(), 3);
        let z: Matrix<Q> = Matrix::zeros(2, 0);
        assert_eq!(z.rank(), 0);
        assert_eq!(Subspace::<Q>::full(0).dim(), 0);
    }
}
