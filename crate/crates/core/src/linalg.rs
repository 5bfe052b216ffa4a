//! Deterministic exact linear algebra over a [`FieldSpec`].
//!
//! Everything that leaves this module in a "reported" form is in canonical
//! reduced row echelon form, so two equal subspaces always compare equal
//! structurally.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: &[Vec<Scalar>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Convenience constructor from small signed integers.
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let conv: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, &conv, cols).expect("ragged rows")
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: Scalar) {
        let k = i * self.cols + j;
        self.data[k] = self.field.add(self.data[k], v);
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let f = self.field;
        let mut out = vec![f.zero(); self.rows];
        for (j, &x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o = f.add(*o, f.mul(a, x));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Matrix {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
            ..*self
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(self.field.neg(self.field.one())))
    }

    pub fn scale(&self, c: Scalar) -> Matrix {
        let f = self.field;
        Matrix {
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
            ..*self
        }
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let f = self.field;
        let mut aug: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
                r
            })
            .collect();
        let pivots = rref_rows(f, &mut aug, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Precondition("matrix is singular".into()));
        }
        let inv: Vec<Vec<Scalar>> = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Matrix::from_rows(f, &inv, n)
    }
}

/// Reduces `rows` in place to canonical RREF (zero rows dropped) and returns
/// the pivot columns.
pub fn rref_rows(f: FieldSpec, rows: &mut Vec<Vec<Scalar>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r][c..].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let (before, rest) = rows.split_at_mut(r);
        let (prow, after) = rest.split_first_mut().unwrap();
        for other in before.iter_mut().chain(after.iter_mut()) {
            let a = other[c];
            if a.is_zero() {
                continue;
            }
            for (x, &y) in other[c..].iter_mut().zip(&prow[c..]) {
                if !y.is_zero() {
                    *x = f.sub(*x, f.mul(a, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Canonical reduced row echelon form, padded with zero rows to the original
/// shape, together with the rank.
pub fn rref(m: &Matrix) -> (Matrix, usize) {
    let mut rows = m.row_vecs();
    let pivots = rref_rows(m.field, &mut rows, m.cols);
    let rank = pivots.len();
    rows.resize(m.rows, vec![m.field.zero(); m.cols]);
    (
        Matrix::from_rows(m.field, &rows, m.cols).expect("shape preserved"),
        rank,
    )
}

/// Right kernel `{v : m v = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    let f = m.field;
    let mut rows = m.row_vecs();
    let pivots = rref_rows(f, &mut rows, m.cols);
    kernel_from_reduced(f, m.cols, &rows, &pivots)
}

fn kernel_from_reduced(
    f: FieldSpec,
    cols: usize,
    rows: &[Vec<Scalar>],
    pivots: &[usize],
) -> Subspace {
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let basis: Vec<Vec<Scalar>> = (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![f.zero(); cols];
            v[free] = f.one();
            for (row, &pc) in rows.iter().zip(pivots) {
                v[pc] = f.neg(row[free]);
            }
            v
        })
        .collect();
    Subspace::span(f, cols, basis)
}

/// A subspace of `F^ambient`, stored as its canonical RREF basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![field.zero(); ambient];
                v[i] = field.one();
                v
            })
            .collect();
        Subspace {
            field,
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(field: FieldSpec, ambient: usize, vectors: Vec<Vec<Scalar>>) -> Self {
        let mut rows: Vec<Vec<Scalar>> = vectors
            .into_iter()
            .inspect(|v| assert_eq!(v.len(), ambient, "vector length != ambient dim"))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        let pivots = rref_rows(field, &mut rows, ambient);
        Subspace {
            field,
            ambient,
            basis: rows,
            pivots,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.field, &self.basis, self.ambient).expect("consistent")
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.ambient);
        let f = self.field;
        let coords: Vec<Scalar> = self.pivots.iter().map(|&c| v[c]).collect();
        let mut residual = v.to_vec();
        for (row, &a) in self.basis.iter().zip(&coords) {
            if a.is_zero() {
                continue;
            }
            for (x, &y) in residual.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = f.sub(*x, f.mul(a, y));
                }
            }
        }
        residual.iter().all(Scalar::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.basis.iter().all(|v| self.contains(v)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let vs = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Subspace::span(self.field, self.ambient, vs))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let f = self.field;
        let (ra, rb) = (self.dim(), other.dim());
        if ra == 0 || rb == 0 {
            return Ok(Subspace::zero(f, self.ambient));
        }
        // Solve sum x_i a_i - sum y_j b_j = 0.
        let mut cols: Vec<Vec<Scalar>> = self.basis.clone();
        cols.extend(
            other
                .basis
                .iter()
                .map(|b| b.iter().map(|&x| f.neg(x)).collect()),
        );
        let m = Matrix::from_columns(f, self.ambient, &cols);
        let ker = kernel(&m);
        let vs = ker
            .basis
            .iter()
            .map(|k| {
                let mut v = vec![f.zero(); self.ambient];
                for (a, &x) in self.basis.iter().zip(&k[..ra]) {
                    if x.is_zero() {
                        continue;
                    }
                    for (o, &y) in v.iter_mut().zip(a) {
                        *o = f.add(*o, f.mul(x, y));
                    }
                }
                v
            })
            .collect();
        Ok(Subspace::span(f, self.ambient, vs))
    }

    pub fn is_direct_sum(&self, other: &Subspace) -> Result<bool> {
        Ok(self.sum(other)?.dim() == self.dim() + other.dim())
    }

    /// Direct-sum test for any number of summands.
    pub fn is_direct_sum_of(parts: &[&Subspace]) -> Result<bool> {
        let Some(first) = parts.first() else {
            return Ok(true);
        };
        let mut acc = Subspace::zero(first.field, first.ambient);
        let mut total = 0;
        for p in parts {
            acc = acc.sum(p)?;
            total += p.dim();
        }
        Ok(acc.dim() == total)
    }
}

/// Coordinates with respect to a fixed, not necessarily canonical, basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisCoordinates {
    span: Subspace,
    // row r: coordinates of the r-th canonical basis vector in the given basis
    transition: Matrix,
}

impl BasisCoordinates {
    /// Fails if the vectors are dependent.
    pub fn new(field: FieldSpec, ambient: usize, basis: Vec<Vec<Scalar>>) -> Result<Self> {
        let k = basis.len();
        let span = Subspace::span(field, ambient, basis.clone());
        if span.dim() != k {
            return Err(Error::Precondition("basis vectors are linearly dependent".into()));
        }
        let rows: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|v| span.coordinates(v).expect("in span"))
            .collect();
        let transition = Matrix::from_rows(field, &rows, k)?.inverse()?;
        Ok(BasisCoordinates { span, transition })
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let c = self.span.coordinates(v)?;
        Some(self.transition.transpose().mul_vec(&c).expect("square"))
    }
}

type SparseRow = Vec<(u32, Scalar)>;

/// Incremental sparse Gaussian elimination.
///
/// Rows are kept fully reduced against each other's pivot columns, so an
/// incoming row needs one pass over its pivot-column entries. Pivot order is
/// the order in which independent rows arrive, which is deterministic for a
/// deterministic input stream; reported kernels and row spaces are
/// canonicalized afterwards.
#[derive(Debug, Clone)]
pub struct SparseReducer {
    field: FieldSpec,
    cols: usize,
    pivot_row: Vec<Option<u32>>,
    rows: Vec<SparseRow>,
    pivots: Vec<usize>,
    scratch: Vec<Scalar>,
    touched: Vec<u32>,
}

impl SparseReducer {
    pub fn new(field: FieldSpec, cols: usize) -> Self {
        SparseReducer {
            field,
            cols,
            pivot_row: vec![None; cols],
            rows: Vec::new(),
            pivots: Vec::new(),
            scratch: vec![field.zero(); cols],
            touched: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds a row given as `(column, value)` pairs (duplicates are summed).
    /// Returns `true` when the rank increased.
    pub fn push(&mut self, entries: &[(usize, Scalar)]) -> bool {
        let f = self.field;
        for &(c, v) in entries {
            if v.is_zero() {
                continue;
            }
            if self.scratch[c].is_zero() {
                self.touched.push(c as u32);
            }
            self.scratch[c] = f.add(self.scratch[c], v);
        }
        let n_initial = self.touched.len();
        for t in 0..n_initial {
            let c = self.touched[t] as usize;
            let a = self.scratch[c];
            if a.is_zero() {
                continue;
            }
            if let Some(r) = self.pivot_row[c] {
                for &(cc, v) in &self.rows[r as usize] {
                    let cc = cc as usize;
                    if self.scratch[cc].is_zero() {
                        self.touched.push(cc as u32);
                    }
                    self.scratch[cc] = f.sub(self.scratch[cc], f.mul(a, v));
                }
            }
        }
        self.touched.sort_unstable();
        self.touched.dedup();
        let mut row: SparseRow = Vec::new();
        for &c in &self.touched {
            let v = std::mem::replace(&mut self.scratch[c as usize], f.zero());
            if !v.is_zero() {
                row.push((c, v));
            }
        }
        self.touched.clear();
        if row.is_empty() {
            return false;
        }
        let (pc, lead) = row[0];
        let inv = f.inv(lead).expect("nonzero");
        for e in row.iter_mut() {
            e.1 = f.mul(e.1, inv);
        }
        for existing in self.rows.iter_mut() {
            if let Ok(pos) = existing.binary_search_by_key(&pc, |e| e.0) {
                let a = existing[pos].1;
                *existing = axpy_sparse(f, existing, f.neg(a), &row);
            }
        }
        self.pivot_row[pc as usize] = Some(self.rows.len() as u32);
        self.pivots.push(pc as usize);
        self.rows.push(row);
        true
    }

    pub fn kernel(&self) -> Subspace {
        let dense: Vec<Vec<Scalar>> = self.rows.iter().map(|r| self.densify(r)).collect();
        kernel_from_reduced(self.field, self.cols, &dense, &self.pivots)
    }

    pub fn row_space(&self) -> Subspace {
        let dense = self.rows.iter().map(|r| self.densify(r)).collect();
        Subspace::span(self.field, self.cols, dense)
    }

    fn densify(&self, r: &SparseRow) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.cols];
        for &(c, x) in r {
            v[c as usize] = x;
        }
        v
    }
}

/// A solution of `sum_s x_s vectors[s] = target` with free variables set to
/// zero, or `None` if `target` is outside the span.
pub fn solve(f: FieldSpec, vectors: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    let k = vectors.len();
    let mut rows: Vec<Vec<Scalar>> = (0..target.len())
        .map(|r| {
            let mut row: Vec<Scalar> = vectors.iter().map(|v| v[r]).collect();
            row.push(target[r]);
            row
        })
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();
    let pivots = rref_rows(f, &mut rows, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut x = vec![f.zero(); k];
    for (row, &c) in rows.iter().zip(&pivots) {
        x[c] = row[k];
    }
    Some(x)
}

/// `x + a*y` for sorted sparse rows.
fn axpy_sparse(f: FieldSpec, x: &SparseRow, a: Scalar, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i]);
            i += 1;
        } else if take_y {
            out.push((y[j].0, f.mul(a, y[j].1)));
            j += 1;
        } else {
            let v = f.add(x[i].1, f.mul(a, y[j].1));
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn f(p: u32) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn solve_particular_solution() {
        let f5 = f(5);
        let v = |xs: &[i64]| xs.iter().map(|&x| f5.from_i64(x)).collect::<Vec<_>>();
        let vs = vec![v(&[1, 0, 1]), v(&[0, 1, 1])];
        assert_eq!(solve(f5, &vs, &v(&[2, 3, 0])), Some(v(&[2, 3])));
        assert_eq!(solve(f5, &vs, &v(&[1, 1, 1])), None);
        // dependent columns: the free one is zero
        let dep = vec![v(&[1, 2]), v(&[2, 4])];
        assert_eq!(solve(f5, &dep, &v(&[3, 1])), Some(v(&[3, 0])));
        assert_eq!(solve(f5, &[], &v(&[0, 0])), Some(vec![]));
    }

    #[test]
    fn coordinates_in_a_given_basis() {
        let f5 = f(5);
        let v = |xs: &[i64]| xs.iter().map(|&x| f5.from_i64(x)).collect::<Vec<_>>();
        let bc = BasisCoordinates::new(f5, 3, vec![v(&[1, 1, 0]), v(&[0, 2, 1])]).unwrap();
        assert_eq!(bc.coordinates(&v(&[3, 1, 4])), Some(v(&[3, 4])));
        assert_eq!(bc.coordinates(&v(&[1, 0, 0])), None);
        assert!(BasisCoordinates::new(f5, 2, vec![v(&[1, 2]), v(&[2, 4])]).is_err());
    }

    #[test]
    fn rref_examples() {
        let f5 = f(5);
        let id = Matrix::identity(f5, 3);
        assert_eq!(rref(&id), (id.clone(), 3));

        let z = Matrix::zeros(f5, 2, 4);
        assert_eq!(rref(&z), (z.clone(), 0));

        let m = Matrix::from_i64(f5, &[&[2, 4], &[1, 2]]);
        let (r, rank) = rref(&m);
        assert_eq!(rank, 1);
        assert_eq!(r, Matrix::from_i64(f5, &[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn kernel_examples() {
        let f5 = f(5);
        assert_eq!(kernel(&Matrix::identity(f5, 4)).dim(), 0);
        assert_eq!(kernel(&Matrix::zeros(f(3), 3, 3)).dim(), 3);
        // v0 + 2 v1 = 0 over F5: solutions are multiples of (3, 1) = 3 * (1, 2).
        let k = kernel(&Matrix::from_i64(f5, &[&[1, 2]]));
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis()[0], vec![f5.from_i64(1), f5.from_i64(2)]);
    }

    #[test]
    fn subspace_lattice_examples() {
        let f5 = f(5);
        let e0 = vec![f5.one(), f5.zero()];
        let e01 = vec![f5.one(), f5.one()];
        let a = Subspace::span(f5, 2, vec![e0]);
        let b = Subspace::span(f5, 2, vec![e01]);
        assert!(a.is_direct_sum(&b).unwrap());
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(f5, 2));
        assert_eq!(a.intersect(&b).unwrap().dim(), 0);
        let zero = Subspace::zero(f5, 2);
        assert_eq!(a.sum(&zero).unwrap(), a);
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert!(a.sum(&Subspace::zero(f5, 3)).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let f7 = f(7);
        let m = Matrix::from_i64(f7, &[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(f7, 3));
        let sing = Matrix::from_i64(f7, &[&[1, 2], &[2, 4]]);
        assert!(sing.inverse().is_err());
    }

    fn random_matrix(rng: &mut impl Rng, fld: FieldSpec, r: usize, c: usize, density: f64) -> Matrix {
        let rows: Vec<Vec<Scalar>> = (0..r)
            .map(|_| {
                (0..c)
                    .map(|_| {
                        if rng.gen_bool(density) {
                            fld.from_i64(rng.gen_range(0..fld.p as i64))
                        } else {
                            fld.zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Matrix::from_rows(fld, &rows, c).unwrap()
    }

    #[test]
    fn sparse_reducer_agrees_with_dense() {
        let mut rng = rand_chacha_like();
        for p in [3, 5, 7] {
            let fld = f(p);
            for _ in 0..30 {
                let (r, c) = (rng.gen_range(1..12), rng.gen_range(1..12));
                let m = random_matrix(&mut rng, fld, r, c, 0.4);
                let mut red = SparseReducer::new(fld, c);
                for i in 0..r {
                    let entries: Vec<(usize, Scalar)> =
                        m.row(i).iter().copied().enumerate().collect();
                    red.push(&entries);
                }
                assert_eq!(red.rank(), m.rank());
                assert_eq!(red.kernel(), kernel(&m));
                assert_eq!(
                    red.row_space(),
                    Subspace::span(fld, c, m.row_vecs())
                );
            }
        }
    }

    fn rand_chacha_like() -> rand::rngs::StdRng {
        rand::rngs::StdRng::seed_from_u64(0x5eed)
    }

    fn arb_matrix(p: u32) -> impl Strategy<Value = Matrix> {
        (1usize..7, 1usize..7).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..p as i64, r * c).prop_map(move |vals| {
                let fld = FieldSpec::prime(p).unwrap();
                let rows: Vec<Vec<Scalar>> = vals
                    .chunks(c)
                    .map(|ch| ch.iter().map(|&v| fld.from_i64(v)).collect())
                    .collect();
                Matrix::from_rows(fld, &rows, c).unwrap()
            })
        })
    }

    fn arb_subspace(p: u32, n: usize) -> impl Strategy<Value = Subspace> {
        proptest::collection::vec(proptest::collection::vec(0..p as i64, n), 0..n + 1).prop_map(
            move |vs| {
                let fld = FieldSpec::prime(p).unwrap();
                Subspace::span(
                    fld,
                    n,
                    vs.into_iter()
                        .map(|v| v.into_iter().map(|x| fld.from_i64(x)).collect())
                        .collect(),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn rank_nullity_f3(m in arb_matrix(3)) {
            prop_assert_eq!(kernel(&m).dim() + m.rank(), m.cols());
        }

        #[test]
        fn rank_nullity_f5(m in arb_matrix(5)) {
            prop_assert_eq!(kernel(&m).dim() + m.rank(), m.cols());
            let k = kernel(&m);
            for v in k.basis() {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
            }
        }

        #[test]
        fn rref_idempotent(m in arb_matrix(5)) {
            let (r, _) = rref(&m);
            prop_assert_eq!(rref(&r).0, r);
        }

        #[test]
        fn modular_law(a in arb_subspace(3, 5), b in arb_subspace(3, 5), c in arb_subspace(3, 5)) {
            // a <= c  =>  (a + b) ∩ c = a + (b ∩ c); take a' = a ∩ c to force a' <= c.
            let a = a.intersect(&c).unwrap();
            let lhs = a.sum(&b).unwrap().intersect(&c).unwrap();
            let rhs = a.sum(&b.intersect(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn dimension_formula(a in arb_subspace(5, 6), b in arb_subspace(5, 6)) {
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
            prop_assert!(s.contains_subspace(&a).unwrap());
            prop_assert!(a.contains_subspace(&i).unwrap());
        }
    }
}
