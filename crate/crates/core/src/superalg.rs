//! Structure-constant superalgebras.
//!
//! Basis vectors are ordered with all even vectors first. Products are stored
//! densely by pair, each entry a sparse `(k, c)` list sorted by `k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{Matrix, SparseReducer, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    #[inline]
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    #[inline]
    pub fn from_bit(b: u8) -> Self {
        if b & 1 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    #[inline]
    pub fn add(self, other: Parity) -> Parity {
        Parity::from_bit(self.bit() ^ other.bit())
    }

    /// Whether the Koszul sign `(-1)^{|a||b|}` is `-1`.
    #[inline]
    pub fn sign_flip(self, other: Parity) -> bool {
        self == Parity::Odd && other == Parity::Odd
    }
}

/// A `Z2 x Z2` degree, written `[a, b]`.
pub type FineLabel = [u8; 2];

#[inline]
pub fn fine_add(a: FineLabel, b: FineLabel) -> FineLabel {
    [(a[0] + b[0]) & 1, (a[1] + b[1]) & 1]
}

pub const FINE_LABELS: [FineLabel; 4] = [[0, 0], [1, 0], [0, 1], [1, 1]];

pub type SparseVec = Vec<(usize, Scalar)>;

/// Outcome of an exhaustive identity check. On failure `witness` holds the
/// lexicographically first offending basis indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
    pub detail: Option<String>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            holds: true,
            witness: None,
            detail: None,
        }
    }

    pub fn fail(witness: Vec<usize>, detail: impl Into<String>) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
            detail: Some(detail.into()),
        }
    }

    pub fn from_bool(ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            Self::pass()
        } else {
            Verdict {
                holds: false,
                witness: None,
                detail: Some(detail.into()),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperAlgebra {
    field: FieldSpec,
    dim_even: usize,
    dim_odd: usize,
    labels: Vec<String>,
    table: Vec<SparseVec>,
    unit: Option<usize>,
    fine: Option<Vec<FineLabel>>,
}

impl SuperAlgebra {
    /// Builds and validates an algebra. `product(i, j)` gives `e_i e_j`.
    pub fn new(
        field: FieldSpec,
        dim_even: usize,
        dim_odd: usize,
        labels: Vec<String>,
        mut product: impl FnMut(usize, usize) -> SparseVec,
        unit: Option<usize>,
        fine: Option<Vec<FineLabel>>,
    ) -> Result<Self> {
        let n = dim_even + dim_odd;
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: labels.len(),
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(normalize(field, product(i, j)));
            }
        }
        let alg = SuperAlgebra {
            field,
            dim_even,
            dim_odd,
            labels,
            table,
            unit,
            fine,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        if let Some(fine) = &self.fine {
            if fine.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: fine.len(),
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                for &(k, c) in self.mul_basis(i, j) {
                    if k >= n {
                        return Err(Error::Malformed(format!("index {k} out of range")));
                    }
                    self.field.validate(c)?;
                    if self.parity(k) != self.parity(i).add(self.parity(j)) {
                        return Err(Error::Malformed(format!(
                            "product e{i}*e{j} has a component of the wrong parity at e{k}"
                        )));
                    }
                    if let Some(fl) = &self.fine {
                        if fl[k] != fine_add(fl[i], fl[j]) {
                            return Err(Error::Malformed(format!(
                                "product e{i}*e{j} violates the Z2^2 grading at e{k}"
                            )));
                        }
                    }
                }
            }
        }
        if let Some(u) = self.unit {
            if u >= n || self.parity(u) != Parity::Even {
                return Err(Error::Malformed("unit must be an even basis vector".into()));
            }
            let one = self.field.one();
            for i in 0..n {
                let want = vec![(i, one)];
                if self.mul_basis(u, i) != want.as_slice() || self.mul_basis(i, u) != want.as_slice() {
                    return Err(Error::Malformed(format!("e{u} is not a unit (fails at e{i})")));
                }
            }
        }
        Ok(())
    }

    /// A copy with one structure-constant entry replaced; skips validation
    /// of the unit so that deliberately broken tables can be studied.
    pub fn with_product(&self, i: usize, j: usize, value: SparseVec) -> Self {
        let mut a = self.clone();
        let n = a.dim();
        a.table[i * n + j] = normalize(a.field, value);
        a
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim_even + self.dim_odd
    }

    pub fn dim_even(&self) -> usize {
        self.dim_even
    }

    pub fn dim_odd(&self) -> usize {
        self.dim_odd
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn fine_labels(&self) -> Option<&[FineLabel]> {
        self.fine.as_deref()
    }

    #[inline]
    pub fn parity(&self, i: usize) -> Parity {
        if i < self.dim_even {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    #[inline]
    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim() + j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    pub fn zero_vector(&self) -> Vec<Scalar> {
        vec![self.field.zero(); self.dim()]
    }

    /// Parity of a vector, `None` for zero or inhomogeneous vectors.
    pub fn vector_parity(&self, v: &[Scalar]) -> Option<Parity> {
        let mut par = None;
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match par {
                None => par = Some(self.parity(i)),
                Some(q) if q != self.parity(i) => return None,
                _ => {}
            }
        }
        par
    }

    /// Parity of a homogeneous vector; zero counts as even.
    pub fn homogeneous_parity(&self, v: &[Scalar]) -> Result<Parity> {
        if v.iter().all(Scalar::is_zero) {
            return Ok(Parity::Even);
        }
        self.vector_parity(v).ok_or(Error::NotHomogeneous)
    }

    fn check_len(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Bilinear product of two coordinate vectors.
    pub fn multiply(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.mul_unchecked(u, v))
    }

    pub(crate) fn mul_unchecked(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let mut out = self.zero_vector();
        for (i, &a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = f.mul(a, b);
                for &(k, c) in self.mul_basis(i, j) {
                    out[k] = f.add(out[k], f.mul(ab, c));
                }
            }
        }
        out
    }

    fn mul_sparse_into(&self, u: &[(usize, Scalar)], v: &[(usize, Scalar)], coef: Scalar, acc: &mut Acc) {
        let f = self.field;
        for &(i, a) in u {
            for &(j, b) in v {
                let ab = f.mul(coef, f.mul(a, b));
                for &(k, c) in self.mul_basis(i, j) {
                    acc.add(f, k, f.mul(ab, c));
                }
            }
        }
    }

    fn mul_sparse(&self, u: &[(usize, Scalar)], v: &[(usize, Scalar)], acc: &mut Acc) -> SparseVec {
        self.mul_sparse_into(u, v, self.field.one(), acc);
        acc.drain(self.field)
    }

    /// Supercommutativity: `e_i e_j = (-1)^{|i||j|} e_j e_i`.
    pub fn check_supercommutative(&self) -> Verdict {
        let f = self.field;
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                let flip = self.parity(i).sign_flip(self.parity(j));
                let rhs: SparseVec = self
                    .mul_basis(j, i)
                    .iter()
                    .map(|&(k, c)| (k, f.signed(c, flip)))
                    .collect();
                if self.mul_basis(i, j) != rhs.as_slice() {
                    return Verdict::fail(vec![i, j], "e_i e_j != (-1)^{|i||j|} e_j e_i");
                }
            }
        }
        Verdict::pass()
    }

    /// Every structure constant is compatible with the fine labels.
    pub fn check_fine_grading(&self) -> Verdict {
        let Some(fl) = &self.fine else {
            return Verdict::from_bool(false, "no fine labels");
        };
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for &(k, _) in self.mul_basis(i, j) {
                    if fl[k] != fine_add(fl[i], fl[j]) {
                        return Verdict::fail(vec![i, j, k], "product leaves its Z2^2 component");
                    }
                }
            }
        }
        Verdict::pass()
    }

    /// `D(a, w)(c) = a(wc) - (-1)^{|a||w|} w(ac)`, accumulated with `coef`.
    fn inner_der_apply(
        &self,
        a: &[(usize, Scalar)],
        pa: Parity,
        w: &[(usize, Scalar)],
        pw: Parity,
        c: &[(usize, Scalar)],
        coef: Scalar,
        acc: &mut Acc,
        tmp: &mut Acc,
    ) {
        let f = self.field;
        let wc = self.mul_sparse(w, c, tmp);
        self.mul_sparse_into(a, &wc, coef, acc);
        let ac = self.mul_sparse(a, c, tmp);
        self.mul_sparse_into(w, &ac, f.signed(f.neg(coef), pa.sign_flip(pw)), acc);
    }

    /// The cyclic operator identity
    /// `(-1)^{z1 z3} D(z1, z2 z3) + (-1)^{z2 z1} D(z2, z3 z1) + (-1)^{z3 z2} D(z3, z1 z2) = 0`
    /// on every basis triple, tested against every basis vector.
    pub fn check_cyclic_identity(&self) -> Verdict {
        let f = self.field;
        let n = self.dim();
        let one = f.one();
        let mut acc = Acc::new(f, n);
        let mut tmp = Acc::new(f, n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (p1, p2, p3) = (self.parity(i), self.parity(j), self.parity(k));
                    let terms = [
                        (i, p1, self.mul_basis(j, k), p2.add(p3), p1.sign_flip(p3)),
                        (j, p2, self.mul_basis(k, i), p3.add(p1), p2.sign_flip(p1)),
                        (k, p3, self.mul_basis(i, j), p1.add(p2), p3.sign_flip(p2)),
                    ];
                    if terms.iter().all(|t| t.2.is_empty()) {
                        continue;
                    }
                    for c in 0..n {
                        let cv = [(c, one)];
                        for &(a, pa, w, pw, flip) in &terms {
                            if w.is_empty() {
                                continue;
                            }
                            self.inner_der_apply(&[(a, one)], pa, w, pw, &cv, f.signed(one, flip), &mut acc, &mut tmp);
                        }
                        if !acc.drain(f).is_empty() {
                            return Verdict::fail(
                                vec![i, j, k, c],
                                "cyclic identity fails on (z1, z2, z3) applied to the 4th basis vector",
                            );
                        }
                    }
                }
            }
        }
        Verdict::pass()
    }

    /// The Jordan superalgebra test used throughout: the cyclic operator
    /// identity.
    pub fn check_jordan_super(&self) -> Verdict {
        self.check_cyclic_identity()
    }

    /// Supercommutative, unital and satisfying the cyclic identity.
    pub fn is_unital_jordan_super(&self) -> Verdict {
        let sc = self.check_supercommutative();
        if !sc.holds {
            return sc;
        }
        if self.unit.is_none() {
            return Verdict::from_bool(false, "no unit");
        }
        self.check_jordan_super()
    }

    /// Super anticommutativity and the super Jacobi identity, treating the
    /// product as a bracket.
    pub fn check_super_lie(&self) -> Verdict {
        let f = self.field;
        let n = self.dim();
        let one = f.one();
        // anticommutativity: [a,b] = -(-1)^{|a||b|} [b,a]
        for i in 0..n {
            for j in i..n {
                let flip = !self.parity(i).sign_flip(self.parity(j));
                let rhs: SparseVec = self
                    .mul_basis(j, i)
                    .iter()
                    .map(|&(k, c)| (k, f.signed(c, flip)))
                    .collect();
                if self.mul_basis(i, j) != rhs.as_slice() {
                    return Verdict::fail(vec![i, j], "bracket is not super anticommutative");
                }
            }
        }
        // [a,[b,c]] - [[a,b],c] - (-1)^{|a||b|} [b,[a,c]] = 0
        let mut acc = Acc::new(f, n);
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul_basis(a, b);
                let flip_ab = self.parity(a).sign_flip(self.parity(b));
                for c in 0..n {
                    let bc = self.mul_basis(b, c);
                    let ac = self.mul_basis(a, c);
                    if ab.is_empty() && bc.is_empty() && ac.is_empty() {
                        continue;
                    }
                    self.mul_sparse_into(&[(a, one)], bc, one, &mut acc);
                    self.mul_sparse_into(ab, &[(c, one)], f.neg(one), &mut acc);
                    self.mul_sparse_into(&[(b, one)], ac, f.signed(f.neg(one), flip_ab), &mut acc);
                    if !acc.drain(f).is_empty() {
                        return Verdict::fail(vec![a, b, c], "super Jacobi identity fails");
                    }
                }
            }
        }
        Verdict::pass()
    }

    /// The matrix of `L_a`, requiring a homogeneous `a`.
    pub fn left_mult(&self, a: &[Scalar]) -> Result<LinearMap> {
        self.check_len(a)?;
        let parity = self.homogeneous_parity(a)?;
        let n = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|j| self.mul_unchecked(a, &self.basis_vector(j)))
            .collect();
        Ok(LinearMap::new(Matrix::from_columns(self.field, n, &cols), parity))
    }

    pub fn left_mult_basis(&self, i: usize) -> LinearMap {
        self.left_mult(&self.basis_vector(i)).expect("basis vectors are homogeneous")
    }

    /// `D(a, b): c -> a(bc) - (-1)^{|a||b|} b(ac)`.
    pub fn inner_derivation(&self, a: &[Scalar], b: &[Scalar]) -> Result<LinearMap> {
        self.check_len(a)?;
        self.check_len(b)?;
        let pa = self.homogeneous_parity(a)?;
        let pb = self.homogeneous_parity(b)?;
        let f = self.field;
        let n = self.dim();
        let sa = to_sparse(a);
        let sb = to_sparse(b);
        let mut acc = Acc::new(f, n);
        let mut tmp = Acc::new(f, n);
        let mut m = Matrix::zeros(f, n, n);
        for c in 0..n {
            self.inner_der_apply(&sa, pa, &sb, pb, &[(c, f.one())], f.one(), &mut acc, &mut tmp);
            for (k, v) in acc.drain(f) {
                m.set(k, c, v);
            }
        }
        Ok(LinearMap::new(m, pa.add(pb)))
    }

    pub fn inner_derivation_basis(&self, i: usize, j: usize) -> LinearMap {
        self.inner_derivation(&self.basis_vector(i), &self.basis_vector(j))
            .expect("basis vectors are homogeneous")
    }

    /// Super Leibniz rule `d(e_i e_j) = d(e_i) e_j + (-1)^{|d||i|} e_i d(e_j)`.
    pub fn is_derivation(&self, d: &LinearMap) -> Verdict {
        let n = self.dim();
        if d.matrix.rows() != n || d.matrix.cols() != n {
            return Verdict::from_bool(false, "map is not an endomorphism of the algebra");
        }
        if let Some(j) = (0..n).find(|&j| !self.column_has_parity(&d.matrix, j, self.parity(j).add(d.parity))) {
            return Verdict::fail(vec![j], "map does not have its declared parity");
        }
        let f = self.field;
        let cols: Vec<SparseVec> = (0..n).map(|j| column_sparse(&d.matrix, j)).collect();
        let one = f.one();
        let mut acc = Acc::new(f, n);
        for i in 0..n {
            let flip = d.parity.sign_flip(self.parity(i));
            for j in 0..n {
                // d(e_i e_j)
                for &(k, c) in self.mul_basis(i, j) {
                    for &(r, v) in &cols[k] {
                        acc.add(f, r, f.mul(c, v));
                    }
                }
                self.mul_sparse_into(&cols[i], &[(j, one)], f.neg(one), &mut acc);
                self.mul_sparse_into(&[(i, one)], &cols[j], f.signed(f.neg(one), flip), &mut acc);
                if !acc.drain(f).is_empty() {
                    return Verdict::fail(vec![i, j], "Leibniz rule fails");
                }
            }
        }
        Verdict::pass()
    }

    fn column_has_parity(&self, m: &Matrix, j: usize, want: Parity) -> bool {
        (0..m.rows()).all(|k| m.get(k, j).is_zero() || self.parity(k) == want)
    }

    /// `f(e_i e_j) = f(e_i) f(e_j)` for all basis pairs of the source.
    pub fn is_homomorphism(source: &SuperAlgebra, target: &SuperAlgebra, map: &LinearMap) -> Verdict {
        let (n, m) = (source.dim(), target.dim());
        if map.matrix.rows() != m || map.matrix.cols() != n {
            return Verdict::from_bool(false, "map has the wrong shape");
        }
        if map.parity != Parity::Even {
            return Verdict::from_bool(false, "homomorphisms must be even");
        }
        if let Some(j) = (0..n).find(|&j| !target.column_has_parity(&map.matrix, j, source.parity(j))) {
            return Verdict::fail(vec![j], "map does not preserve parity");
        }
        let f = source.field;
        let cols: Vec<SparseVec> = (0..n).map(|j| column_sparse(&map.matrix, j)).collect();
        let mut acc = Acc::new(f, m);
        for i in 0..n {
            for j in 0..n {
                for &(k, c) in source.mul_basis(i, j) {
                    for &(r, v) in &cols[k] {
                        acc.add(f, r, f.mul(c, v));
                    }
                }
                target.mul_sparse_into(&cols[i], &cols[j], f.neg(f.one()), &mut acc);
                if !acc.drain(f).is_empty() {
                    return Verdict::fail(vec![i, j], "f(e_i e_j) != f(e_i) f(e_j)");
                }
            }
        }
        Verdict::pass()
    }

    /// Bijective homomorphism onto itself that fixes the unit.
    pub fn is_automorphism(&self, map: &LinearMap) -> Verdict {
        let hom = Self::is_homomorphism(self, self, map);
        if !hom.holds {
            return hom;
        }
        if map.matrix.rank() != self.dim() {
            return Verdict::from_bool(false, "map is not bijective");
        }
        if let Some(u) = self.unit {
            if map.matrix.column(u) != self.basis_vector(u) {
                return Verdict::fail(vec![u], "unit is not fixed");
            }
        }
        Verdict::pass()
    }

    /// `{z : z s = 0 for all s in S}`.
    pub fn annihilator(&self, set: &[Vec<Scalar>]) -> Result<Subspace> {
        let n = self.dim();
        let f = self.field;
        let mut red = SparseReducer::new(f, n);
        for s in set {
            self.check_len(s)?;
            // coordinate r of z*s is sum_i z_i (e_i s)_r
            let images: Vec<Vec<Scalar>> = (0..n)
                .map(|i| self.mul_unchecked(&self.basis_vector(i), s))
                .collect();
            for r in 0..n {
                let row: Vec<(usize, Scalar)> = (0..n)
                    .filter(|&i| !images[i][r].is_zero())
                    .map(|i| (i, images[i][r]))
                    .collect();
                if !row.is_empty() {
                    red.push(&row);
                }
            }
        }
        Ok(red.kernel())
    }

    /// Elements of the even part that commute and associate with the even
    /// part: `z a = a z` and `(z a) b = z (a b)` for even basis `a, b`.
    pub fn center_even(&self) -> Subspace {
        let n = self.dim();
        let ne = self.dim_even;
        let f = self.field;
        let mut red = SparseReducer::new(f, n);
        // odd coordinates of z vanish
        for o in ne..n {
            red.push(&[(o, f.one())]);
        }
        let mut acc = Acc::new(f, n);
        let one = f.one();
        for a in 0..ne {
            for b in 0..ne {
                // per unknown z = e_z, the vector (e_z a) b - e_z (a b), grouped by output coordinate
                let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
                for z in 0..ne {
                    let za = self.mul_basis(z, a);
                    self.mul_sparse_into(za, &[(b, one)], one, &mut acc);
                    self.mul_sparse_into(&[(z, one)], self.mul_basis(a, b), f.neg(one), &mut acc);
                    for (r, v) in acc.drain(f) {
                        rows[r].push((z, v));
                    }
                }
                for row in rows.iter().filter(|r| !r.is_empty()) {
                    red.push(row);
                }
            }
            let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
            for z in 0..ne {
                self.mul_sparse_into(&[(z, one)], &[(a, one)], one, &mut acc);
                self.mul_sparse_into(&[(a, one)], &[(z, one)], f.neg(one), &mut acc);
                for (r, v) in acc.drain(f) {
                    rows[r].push((z, v));
                }
            }
            for row in rows.iter().filter(|r| !r.is_empty()) {
                red.push(row);
            }
        }
        red.kernel()
    }

    /// Span of all products `u v` with `u` in `a`, `v` in `b`.
    pub fn product_space(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let vs = a
            .basis()
            .iter()
            .flat_map(|u| b.basis().iter().map(move |v| self.mul_unchecked(u, v)))
            .collect();
        Subspace::span(self.field, self.dim(), vs)
    }

    /// Coordinate subspace spanned by the given basis indices.
    pub fn span_of_indices(&self, idx: impl IntoIterator<Item = usize>) -> Subspace {
        let vs = idx.into_iter().map(|i| self.basis_vector(i)).collect();
        Subspace::span(self.field, self.dim(), vs)
    }

    pub fn even_part(&self) -> Subspace {
        self.span_of_indices(0..self.dim_even)
    }

    pub fn odd_part(&self) -> Subspace {
        self.span_of_indices(self.dim_even..self.dim())
    }

    pub fn to_json(&self) -> AlgebraJson {
        AlgebraJson {
            field: self.field,
            dim_even: self.dim_even,
            dim_odd: self.dim_odd,
            labels: self.labels.clone(),
            unit: self.unit,
            fine_label: self.fine.clone(),
            products: self.nonzero_products(),
        }
    }

    fn nonzero_products(&self) -> Vec<(usize, usize, SparseVec)> {
        let n = self.dim();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.mul_basis(i, j).is_empty())
            .map(|(i, j)| (i, j, self.mul_basis(i, j).to_vec()))
            .collect()
    }

    pub fn from_json(j: &AlgebraJson) -> Result<Self> {
        let n = j.dim_even + j.dim_odd;
        let mut table: Vec<SparseVec> = vec![Vec::new(); n * n];
        for (i, jj, terms) in &j.products {
            if *i >= n || *jj >= n {
                return Err(Error::Malformed(format!("pair ({i}, {jj}) out of range")));
            }
            table[i * n + jj] = terms.clone();
        }
        let field = FieldSpec::new(j.field.p, j.field.ext)?;
        SuperAlgebra::new(
            field,
            j.dim_even,
            j.dim_odd,
            j.labels.clone(),
            |a, b| table[a * n + b].clone(),
            j.unit,
            j.fine_label.clone(),
        )
    }
}

/// Structure-constant JSON schema. Every nonzero ordered pair is listed
/// explicitly; no symmetry is implied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub field: FieldSpec,
    pub dim_even: usize,
    pub dim_odd: usize,
    pub labels: Vec<String>,
    pub unit: Option<usize>,
    pub fine_label: Option<Vec<FineLabel>>,
    pub products: Vec<(usize, usize, SparseVec)>,
}

/// A parity-homogeneous linear map; column `j` is the image of `e_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearMap {
    pub matrix: Matrix,
    pub parity: Parity,
}

impl LinearMap {
    pub fn new(matrix: Matrix, parity: Parity) -> Self {
        LinearMap { matrix, parity }
    }

    pub fn zero(field: FieldSpec, n: usize, parity: Parity) -> Self {
        LinearMap::new(Matrix::zeros(field, n, n), parity)
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        LinearMap::new(Matrix::identity(field, n), Parity::Even)
    }

    pub fn field(&self) -> FieldSpec {
        self.matrix.field()
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.matrix.mul_vec(v)
    }

    pub fn image_of_basis(&self, j: usize) -> Vec<Scalar> {
        self.matrix.column(j)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        Ok(LinearMap::new(
            self.matrix.mul(&other.matrix)?,
            self.parity.add(other.parity),
        ))
    }

    pub fn add(&self, other: &LinearMap) -> LinearMap {
        LinearMap::new(self.matrix.add(&other.matrix), self.parity)
    }

    pub fn scale(&self, c: Scalar) -> LinearMap {
        LinearMap::new(self.matrix.scale(c), self.parity)
    }

    /// `[a, b] = ab - (-1)^{|a||b|} ba`.
    pub fn supercommutator(a: &LinearMap, b: &LinearMap) -> Result<LinearMap> {
        let f = a.field();
        let ab = a.matrix.mul(&b.matrix)?;
        let ba = b.matrix.mul(&a.matrix)?;
        let ba = if a.parity.sign_flip(b.parity) {
            ba.scale(f.neg(f.one()))
        } else {
            ba
        };
        Ok(LinearMap::new(ab.sub(&ba), a.parity.add(b.parity)))
    }

    /// Column-major flattening: entry `(k, l)` goes to `l * rows + k`.
    pub fn flatten(&self) -> Vec<Scalar> {
        let m = &self.matrix;
        let mut v = Vec::with_capacity(m.rows() * m.cols());
        for l in 0..m.cols() {
            for k in 0..m.rows() {
                v.push(m.get(k, l));
            }
        }
        v
    }

    pub fn from_flat(field: FieldSpec, n: usize, flat: &[Scalar], parity: Parity) -> LinearMap {
        assert_eq!(flat.len(), n * n);
        let mut m = Matrix::zeros(field, n, n);
        for l in 0..n {
            for k in 0..n {
                m.set(k, l, flat[l * n + k]);
            }
        }
        LinearMap::new(m, parity)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

pub fn to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, &x)| (i, x))
        .collect()
}

pub fn column_sparse(m: &Matrix, j: usize) -> SparseVec {
    (0..m.rows())
        .filter(|&k| !m.get(k, j).is_zero())
        .map(|k| (k, m.get(k, j)))
        .collect()
}

fn normalize(f: FieldSpec, terms: SparseVec) -> SparseVec {
    let mut acc = Acc::new(f, terms.iter().map(|t| t.0 + 1).max().unwrap_or(0));
    for (k, c) in terms {
        acc.add(f, k, c);
    }
    acc.drain(f)
}

/// Dense accumulator that remembers which slots it touched.
pub(crate) struct Acc {
    vals: Vec<Scalar>,
    touched: Vec<usize>,
}

impl Acc {
    pub(crate) fn new(f: FieldSpec, n: usize) -> Self {
        Acc {
            vals: vec![f.zero(); n],
            touched: Vec::new(),
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, f: FieldSpec, k: usize, v: Scalar) {
        if v.is_zero() {
            return;
        }
        if self.vals[k].is_zero() {
            self.touched.push(k);
        }
        self.vals[k] = f.add(self.vals[k], v);
    }

    /// Returns the nonzero entries sorted by index and resets to zero.
    pub(crate) fn drain(&mut self, f: FieldSpec) -> SparseVec {
        self.touched.sort_unstable();
        self.touched.dedup();
        let mut out = Vec::new();
        for &k in &self.touched {
            let v = std::mem::replace(&mut self.vals[k], f.zero());
            if !v.is_zero() {
                out.push((k, v));
            }
        }
        self.touched.clear();
        out
    }
}
