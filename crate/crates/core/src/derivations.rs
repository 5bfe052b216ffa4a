//! Derivation superalgebras as exact kernels of the Leibniz system, inner
//! derivations, the named derivations of `K = Z + Zx` and of `JCK`, and the
//! `Z2^2` grading of `Der(J)`.

use crate::constructions::{ChengKac, DifferentialAlgebra, Kantor};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{self, Matrix, SparseReducer, Subspace};
use crate::superalg::{to_sparse, FineLabel, LinearMap, Parity, SparseVec, SuperAlgebra, Verdict, FINE_LABELS};

/// A graded space of derivations. Each part is a subspace of column-major
/// flattened `n x n` matrices (entry `(k, l)` at `l * n + k`), so bases are
/// canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationSpace {
    algebra: SuperAlgebra,
    even: Subspace,
    odd: Subspace,
}

impl DerivationSpace {
    pub fn new(algebra: SuperAlgebra, even: Subspace, odd: Subspace) -> Result<Self> {
        let n = algebra.dim();
        for (part, parity) in [(&even, Parity::Even), (&odd, Parity::Odd)] {
            if part.ambient_dim() != n * n {
                return Err(Error::DimensionMismatch {
                    expected: n * n,
                    got: part.ambient_dim(),
                });
            }
            for v in part.basis() {
                let bad = v.iter().enumerate().any(|(idx, x)| {
                    !x.is_zero() && algebra.parity(idx % n) != algebra.parity(idx / n).add(parity)
                });
                if bad {
                    return Err(Error::Precondition(format!("basis map is not {parity:?}")));
                }
            }
        }
        Ok(DerivationSpace { algebra, even, odd })
    }

    pub fn zero(algebra: &SuperAlgebra) -> Self {
        let n2 = algebra.dim() * algebra.dim();
        let f = algebra.field();
        DerivationSpace {
            algebra: algebra.clone(),
            even: Subspace::zero(f, n2),
            odd: Subspace::zero(f, n2),
        }
    }

    /// Span of homogeneous maps.
    pub fn span(algebra: &SuperAlgebra, maps: impl IntoIterator<Item = LinearMap>) -> Result<Self> {
        let n = algebra.dim();
        let f = algebra.field();
        let mut red = [SparseReducer::new(f, n * n), SparseReducer::new(f, n * n)];
        for d in maps {
            if d.matrix.rows() != n || d.matrix.cols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: d.matrix.rows(),
                });
            }
            red[d.parity.bit() as usize].push(&to_sparse(&d.flatten()));
        }
        let [e, o] = red;
        DerivationSpace::new(algebra.clone(), e.row_space(), o.row_space())
    }

    pub fn algebra(&self) -> &SuperAlgebra {
        &self.algebra
    }

    pub fn even(&self) -> &Subspace {
        &self.even
    }

    pub fn odd(&self) -> &Subspace {
        &self.odd
    }

    pub fn part(&self, parity: Parity) -> &Subspace {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    /// `(dim even, dim odd)`.
    pub fn dims(&self) -> (usize, usize) {
        (self.even.dim(), self.odd.dim())
    }

    pub fn dim(&self) -> usize {
        self.even.dim() + self.odd.dim()
    }

    fn maps(&self, parity: Parity) -> Vec<LinearMap> {
        let n = self.algebra.dim();
        let f = self.algebra.field();
        self.part(parity)
            .basis()
            .iter()
            .map(|v| LinearMap::from_flat(f, n, v, parity))
            .collect()
    }

    pub fn even_basis(&self) -> Vec<LinearMap> {
        self.maps(Parity::Even)
    }

    pub fn odd_basis(&self) -> Vec<LinearMap> {
        self.maps(Parity::Odd)
    }

    /// Even basis followed by odd basis.
    pub fn basis(&self) -> Vec<LinearMap> {
        let mut b = self.even_basis();
        b.extend(self.odd_basis());
        b
    }

    pub fn contains(&self, d: &LinearMap) -> bool {
        let n = self.algebra.dim();
        d.matrix.rows() == n && d.matrix.cols() == n && self.part(d.parity).contains(&d.flatten())
    }

    /// Coordinates of a homogeneous map in the order of [`basis`](Self::basis).
    pub fn coordinates(&self, d: &LinearMap) -> Option<Vec<Scalar>> {
        let f = self.algebra.field();
        let c = self.part(d.parity).coordinates(&d.flatten())?;
        let mut out = vec![f.zero(); self.dim()];
        let off = if d.parity == Parity::Even { 0 } else { self.even.dim() };
        out[off..off + c.len()].copy_from_slice(&c);
        Some(out)
    }

    pub fn contains_space(&self, other: &DerivationSpace) -> Result<bool> {
        Ok(self.even.contains_subspace(&other.even)? && self.odd.contains_subspace(&other.odd)?)
    }

    pub fn sum(&self, other: &DerivationSpace) -> Result<DerivationSpace> {
        DerivationSpace::new(self.algebra.clone(), self.even.sum(&other.even)?, self.odd.sum(&other.odd)?)
    }

    pub fn intersect(&self, other: &DerivationSpace) -> Result<DerivationSpace> {
        DerivationSpace::new(
            self.algebra.clone(),
            self.even.intersect(&other.even)?,
            self.odd.intersect(&other.odd)?,
        )
    }

    /// Whether the sum of the given spaces is direct, part by part.
    pub fn is_direct_sum_of(parts: &[&DerivationSpace]) -> Result<bool> {
        let evens: Vec<&Subspace> = parts.iter().map(|p| &p.even).collect();
        let odds: Vec<&Subspace> = parts.iter().map(|p| &p.odd).collect();
        Ok(Subspace::is_direct_sum_of(&evens)? && Subspace::is_direct_sum_of(&odds)?)
    }

    /// Every basis map satisfies the Leibniz rule. Witness: `[basis index, i, j]`.
    pub fn check_derivations(&self) -> Verdict {
        for (idx, d) in self.basis().iter().enumerate() {
            let v = self.algebra.is_derivation(d);
            if !v.holds {
                let mut w = vec![idx];
                w.extend(v.witness.unwrap_or_default());
                return Verdict::fail(w, v.detail.unwrap_or_default());
            }
        }
        Verdict::pass()
    }

    /// Closure under the super commutator. Witness: a pair of basis indices.
    pub fn check_subalgebra(&self) -> Verdict {
        let b = self.basis();
        for (i, x) in b.iter().enumerate() {
            for (j, y) in b.iter().enumerate().skip(i) {
                let c = LinearMap::supercommutator(x, y).expect("square maps of one size");
                if !self.contains(&c) {
                    return Verdict::fail(vec![i, j], "bracket leaves the space");
                }
            }
        }
        Verdict::pass()
    }
}

/// Degree key of a basis index: `parity << 2 | fine[0] | fine[1] << 1`.
/// Degrees add by XOR.
fn degree_keys(a: &SuperAlgebra) -> Vec<usize> {
    let fine = a.fine_labels();
    (0..a.dim())
        .map(|i| {
            let fl = fine.map_or(0, |fl| (fl[i][0] | (fl[i][1] << 1)) as usize);
            ((a.parity(i).bit() as usize) << 2) | fl
        })
        .collect()
}

fn fine_key(label: FineLabel) -> usize {
    (label[0] | (label[1] << 1)) as usize
}

struct RowBuf {
    rows: Vec<SparseVec>,
    touched: Vec<usize>,
}

impl RowBuf {
    #[inline]
    fn add(&mut self, r: usize, var: usize, c: Scalar) {
        if self.rows[r].is_empty() {
            self.touched.push(r);
        }
        self.rows[r].push((var, c));
    }
}

/// Solves the Leibniz system separately in every derivation degree for
/// which `want` holds. Each scalar equation `(i, j, r)` only involves the
/// unknowns of degree `deg r - deg i - deg j`, so the system splits.
/// Returns the kernels, indexed by degree key, in flattened coordinates.
fn solve_leibniz(a: &SuperAlgebra, want: impl Fn(usize) -> bool) -> Vec<Option<Subspace>> {
    let n = a.dim();
    let f = a.field();
    let key = degree_keys(a);
    let mut local = vec![0u32; n * n];
    let mut flat_of: Vec<Vec<usize>> = vec![Vec::new(); 8];
    for l in 0..n {
        for k in 0..n {
            let g = key[k] ^ key[l];
            local[l * n + k] = flat_of[g].len() as u32;
            flat_of[g].push(l * n + k);
        }
    }
    let mut reducers: Vec<Option<SparseReducer>> = (0..8)
        .map(|g| (!flat_of[g].is_empty() && want(g)).then(|| SparseReducer::new(f, flat_of[g].len())))
        .collect();
    let wanted: Vec<bool> = reducers.iter().map(Option::is_some).collect();

    let mut buf = RowBuf {
        rows: vec![Vec::new(); n],
        touched: Vec::new(),
    };
    let mut mapped: SparseVec = Vec::new();
    for i in 0..n {
        let odd_i = a.parity(i) == Parity::Odd;
        for j in 0..n {
            let base = key[i] ^ key[j];
            // d(e_i e_j)_r = sum_k c_k d[r][k]
            for &(k, c) in a.mul_basis(i, j) {
                for r in 0..n {
                    if wanted[key[r] ^ base] {
                        buf.add(r, k * n + r, c);
                    }
                }
            }
            // - (d(e_i) e_j)_r = - sum_s d[s][i] (e_s e_j)_r
            for s in 0..n {
                for &(r, c) in a.mul_basis(s, j) {
                    if wanted[key[r] ^ base] {
                        buf.add(r, i * n + s, f.neg(c));
                    }
                }
            }
            // - (-1)^{|d||i|} (e_i d(e_j))_r
            for s in 0..n {
                for &(r, c) in a.mul_basis(i, s) {
                    let g = key[r] ^ base;
                    if wanted[g] {
                        let flip = odd_i && g >= 4;
                        buf.add(r, j * n + s, f.signed(f.neg(c), flip));
                    }
                }
            }
            for &r in &buf.touched {
                let g = key[r] ^ base;
                mapped.clear();
                mapped.extend(buf.rows[r].iter().map(|&(v, c)| (local[v] as usize, c)));
                reducers[g].as_mut().expect("wanted").push(&mapped);
                buf.rows[r].clear();
            }
            buf.touched.clear();
        }
    }
    reducers
        .into_iter()
        .enumerate()
        .map(|(g, red)| {
            red.map(|red| {
                let vs = red
                    .kernel()
                    .basis()
                    .iter()
                    .map(|v| {
                        let mut full = vec![f.zero(); n * n];
                        for (t, &x) in v.iter().enumerate() {
                            full[flat_of[g][t]] = x;
                        }
                        full
                    })
                    .collect();
                Subspace::span(f, n * n, vs)
            })
        })
        .collect()
}

fn assemble(a: &SuperAlgebra, parts: Vec<Option<Subspace>>) -> DerivationSpace {
    let f = a.field();
    let n2 = a.dim() * a.dim();
    let mut by_parity = [Vec::new(), Vec::new()];
    for (g, part) in parts.into_iter().enumerate() {
        if let Some(s) = part {
            by_parity[g >> 2].extend(s.basis().iter().cloned());
        }
    }
    let [e, o] = by_parity;
    DerivationSpace::new(a.clone(), Subspace::span(f, n2, e), Subspace::span(f, n2, o))
        .expect("Leibniz kernels respect parity")
}

/// `Der(A)`, both parities.
pub fn derivation_algebra(a: &SuperAlgebra) -> DerivationSpace {
    assemble(a, solve_leibniz(a, |_| true))
}

/// The `Z2^2` component `Der(A)^label` (both parities), solving only the
/// equations of that degree.
pub fn derivation_component(a: &SuperAlgebra, label: FineLabel) -> Result<DerivationSpace> {
    if a.fine_labels().is_none() {
        return Err(Error::MissingFineLabels);
    }
    let want = fine_key(label);
    Ok(assemble(a, solve_leibniz(a, |g| g & 3 == want)))
}

/// `Inder(A)`: the span of all `D(e_i, e_j)`.
pub fn inner_derivation_algebra(a: &SuperAlgebra) -> DerivationSpace {
    let n = a.dim();
    let pairs = (0..n).flat_map(|i| (i..n).map(move |j| (i, j)));
    DerivationSpace::span(a, pairs.map(|(i, j)| a.inner_derivation_basis(i, j))).expect("shapes agree")
}

/// Span of `D(u, v)` over the given homogeneous pairs.
pub fn span_of_inner(
    a: &SuperAlgebra,
    pairs: impl IntoIterator<Item = (Vec<Scalar>, Vec<Scalar>)>,
) -> Result<DerivationSpace> {
    let mut maps = Vec::new();
    for (u, v) in pairs {
        maps.push(a.inner_derivation(&u, &v)?);
    }
    DerivationSpace::span(a, maps)
}

/// The `Z2^2` degree of a nonzero homogeneous map, `None` for zero or mixed.
pub fn fine_degree(a: &SuperAlgebra, d: &LinearMap) -> Result<Option<FineLabel>> {
    let fl = a.fine_labels().ok_or(Error::MissingFineLabels)?;
    let n = a.dim();
    let mut deg = None;
    for l in 0..n {
        for k in 0..n {
            if d.matrix.get(k, l).is_zero() {
                continue;
            }
            let g = [fl[k][0] ^ fl[l][0], fl[k][1] ^ fl[l][1]];
            match deg {
                None => deg = Some(g),
                Some(h) if h != g => return Ok(None),
                _ => {}
            }
        }
    }
    Ok(deg)
}

/// Splits a graded space of derivations into its `Z2^2` components, in the
/// order `[0,0], [1,0], [0,1], [1,1]`. Component `g` is spanned by the
/// degree-`g` parts of the basis; each is checked to lie in the space and
/// the components to add up to it.
pub fn grade_der(d: &DerivationSpace) -> Result<[DerivationSpace; 4]> {
    let a = d.algebra();
    let fl = a.fine_labels().ok_or(Error::MissingFineLabels)?;
    let n = a.dim();
    let f = a.field();
    let deg_of = |idx: usize| {
        let (k, l) = (idx % n, idx / n);
        fine_key([fl[k][0] ^ fl[l][0], fl[k][1] ^ fl[l][1]])
    };
    let project = |part: &Subspace, g: usize| -> Result<Subspace> {
        let vs: Vec<Vec<Scalar>> = part
            .basis()
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .map(|(idx, &x)| if deg_of(idx) == g { x } else { f.zero() })
                    .collect()
            })
            .collect();
        if let Some(bad) = vs.iter().position(|v| !part.contains(v)) {
            return Err(Error::Verification(format!(
                "space is not graded: component {:?} of basis map {bad} leaves it",
                FINE_LABELS[g.min(3)]
            )));
        }
        Ok(Subspace::span(f, n * n, vs))
    };
    let mut out = Vec::with_capacity(4);
    for label in FINE_LABELS {
        let g = fine_key(label);
        out.push(DerivationSpace::new(a.clone(), project(&d.even, g)?, project(&d.odd, g)?)?);
    }
    let refs: Vec<&DerivationSpace> = out.iter().collect();
    let total = out.iter().map(DerivationSpace::dim).sum::<usize>();
    if !DerivationSpace::is_direct_sum_of(&refs)? || total != d.dim() {
        return Err(Error::Verification("components do not add up to the space".into()));
    }
    Ok(out.try_into().expect("four components"))
}

/// The maps `f delta` for `f` in `Z`, one per basis vector of `Z`.
pub fn z_delta_maps(diff: &DifferentialAlgebra) -> Vec<LinearMap> {
    (0..diff.dim())
        .map(|s| diff.z.left_mult_basis(s).compose(&diff.delta).expect("same size"))
        .collect()
}

/// `Z delta` as a subspace of flattened `m x m` matrices.
pub fn z_delta(diff: &DifferentialAlgebra) -> Subspace {
    let m = diff.dim();
    Subspace::span(diff.field(), m * m, z_delta_maps(diff).iter().map(LinearMap::flatten).collect())
}

fn check_z_map(diff: &DifferentialAlgebra, mu: &LinearMap) -> Result<()> {
    let m = diff.dim();
    if mu.matrix.rows() != m || mu.matrix.cols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: mu.matrix.rows(),
        });
    }
    Ok(())
}

/// The element `a` of `Z` with `[mu, delta] = 2 a delta`.
pub fn commutator_coefficient(diff: &DifferentialAlgebra, mu: &LinearMap) -> Result<Vec<Scalar>> {
    check_z_map(diff, mu)?;
    let f = diff.field();
    if !diff.z.is_derivation(mu).holds {
        return Err(Error::Precondition("mu is not a derivation of Z".into()));
    }
    let comm = LinearMap::supercommutator(mu, &diff.delta)?.flatten();
    let two = f.from_i64(2);
    let cols: Vec<Vec<Scalar>> = z_delta_maps(diff)
        .iter()
        .map(|d| d.scale(two).flatten())
        .collect();
    linalg::solve(f, &cols, &comm).ok_or_else(|| Error::Precondition("[mu, delta] is not in Z delta".into()))
}

/// The named derivations of `K = Z + Zx`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KDerivation {
    /// The even derivation restricting to `mu` on `Z` with `x -> a x`.
    CheckMu(LinearMap),
    /// `Z -> 0`, `x -> a`.
    Eta(Vec<Scalar>),
    /// `z -> mu(z) x`, `x -> 0`, `fx -> delta(mu(f))`; needs characteristic 3,
    /// `mu` in `Z delta` and `[mu, delta] = 0`.
    MuMinus(LinearMap),
}

fn zmul_vec(diff: &DifferentialAlgebra, b: usize, a: &[Scalar]) -> SparseVec {
    diff.zmul(&[(b, diff.field().one())], &to_sparse(a))
}

fn z_column(mu: &LinearMap, b: usize) -> SparseVec {
    crate::superalg::column_sparse(&mu.matrix, b)
}

pub fn named_der_k(k: &Kantor, kind: &KDerivation) -> Result<LinearMap> {
    let diff = &k.diff;
    let f = diff.field();
    let m = k.m();
    let mut mat = Matrix::zeros(f, 2 * m, 2 * m);
    let parity = match kind {
        KDerivation::CheckMu(mu) => {
            let a = commutator_coefficient(diff, mu)?;
            for b in 0..m {
                for (r, c) in z_column(mu, b) {
                    mat.add_at(k.z(r), k.z(b), c);
                    mat.add_at(k.zx(r), k.zx(b), c);
                }
                for (r, c) in zmul_vec(diff, b, &a) {
                    mat.add_at(k.zx(r), k.zx(b), c);
                }
            }
            Parity::Even
        }
        KDerivation::Eta(a) => {
            if a.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: a.len() });
            }
            for b in 0..m {
                for (r, c) in zmul_vec(diff, b, a) {
                    mat.set(k.z(r), k.zx(b), c);
                }
            }
            Parity::Odd
        }
        KDerivation::MuMinus(mu) => {
            check_z_map(diff, mu)?;
            if f.p != 3 {
                return Err(Error::Precondition("mu^- exists only in characteristic 3".into()));
            }
            if !z_delta(diff).contains(&mu.flatten()) {
                return Err(Error::Precondition("mu is not in Z delta".into()));
            }
            // Leibniz on (x, fx) forces [mu, delta] = 0
            if !LinearMap::supercommutator(mu, &diff.delta)?.is_zero() {
                return Err(Error::Precondition("[mu, delta] != 0, so mu^- is not a derivation".into()));
            }
            return verified(&k.algebra, mu_minus_map(k, mu)?);
        }
    };
    let d = LinearMap::new(mat, parity);
    verified(&k.algebra, d)
}

/// The odd map `z -> mu(z) x`, `fx -> delta(mu(f))` for any even `Z`-map
/// `mu`, without checking that it is a derivation.
pub fn mu_minus_map(k: &Kantor, mu: &LinearMap) -> Result<LinearMap> {
    let diff = &k.diff;
    check_z_map(diff, mu)?;
    let m = k.m();
    let mut mat = Matrix::zeros(diff.field(), 2 * m, 2 * m);
    let dmu = diff.delta.compose(mu)?;
    for b in 0..m {
        for (r, c) in z_column(mu, b) {
            mat.set(k.zx(r), k.z(b), c);
        }
        for (r, c) in z_column(&dmu, b) {
            mat.set(k.z(r), k.zx(b), c);
        }
    }
    Ok(LinearMap::new(mat, Parity::Odd))
}

fn verified(a: &SuperAlgebra, d: LinearMap) -> Result<LinearMap> {
    let v = a.is_derivation(&d);
    if !v.holds {
        return Err(Error::Verification(format!("constructed map is not a derivation: {v:?}")));
    }
    Ok(d)
}

/// The named derivations of `J = JCK(Z, delta)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JDerivation {
    /// Extension of an even derivation of `K`: `f w_i -> mu(f) w_i`,
    /// `f x_i -> (mu(f) - a f) x_i`.
    TildePartial(LinearMap),
    /// Extension of `eta_a` with `x_j -> 0`.
    TildeEta(Vec<Scalar>),
}

pub fn named_der_j(j: &ChengKac, kind: &JDerivation) -> Result<LinearMap> {
    let diff = &j.diff;
    let f = diff.field();
    let m = j.m();
    let n = j.algebra.dim();
    let mut mat = Matrix::zeros(f, n, n);
    let parity = match kind {
        JDerivation::TildePartial(d) => {
            let kan = j.kantor();
            if d.matrix.rows() != 2 * m || d.matrix.cols() != 2 * m {
                return Err(Error::DimensionMismatch {
                    expected: 2 * m,
                    got: d.matrix.rows(),
                });
            }
            if d.parity != Parity::Even || !kan.algebra.is_derivation(d).holds {
                return Err(Error::Precondition("input is not an even derivation of K".into()));
            }
            let kidx = j.kantor_indices();
            for (cl, &jl) in kidx.iter().enumerate() {
                for (rk, &jk) in kidx.iter().enumerate() {
                    mat.set(jk, jl, d.matrix.get(rk, cl));
                }
            }
            // mu = d on Z, and d(x) = a x
            let x = kan.x();
            for b in 0..m {
                if (0..m).any(|r| !d.matrix.get(kan.zx(r), kan.z(b)).is_zero()) {
                    return Err(Error::Precondition("input does not preserve Z".into()));
                }
            }
            let a: Vec<Scalar> = (0..m).map(|r| d.matrix.get(kan.zx(r), x)).collect();
            for fam in 1..4 {
                for b in 0..m {
                    for r in 0..m {
                        let mu = d.matrix.get(kan.z(r), kan.z(b));
                        mat.set(j.even(fam, r), j.even(fam, b), mu);
                        mat.set(j.odd(fam, r), j.odd(fam, b), mu);
                    }
                    for (r, c) in zmul_vec(diff, b, &a) {
                        mat.add_at(j.odd(fam, r), j.odd(fam, b), f.neg(c));
                    }
                }
            }
            Parity::Even
        }
        JDerivation::TildeEta(a) => {
            if a.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: a.len() });
            }
            for b in 0..m {
                for (r, c) in zmul_vec(diff, b, a) {
                    mat.set(j.even(0, r), j.odd(0, b), c);
                    for fam in 1..4 {
                        mat.set(j.odd(fam, r), j.even(fam, b), f.neg(c));
                    }
                }
            }
            Parity::Odd
        }
    };
    verified(&j.algebra, LinearMap::new(mat, parity))
}

/// `Der(K)_0 + Inder(K)_1`.
pub fn bar_der_k(k: &Kantor) -> DerivationSpace {
    let der = derivation_algebra(&k.algebra);
    let inder = inner_derivation_algebra(&k.algebra);
    DerivationSpace::new(k.algebra.clone(), der.even, inder.odd).expect("same algebra")
}

/// The restriction of a derivation of `J` that preserves `K = Z + Zx`.
pub fn restrict_to_k(j: &ChengKac, d: &LinearMap) -> Result<LinearMap> {
    let kidx = j.kantor_indices();
    let n = j.algebra.dim();
    if d.matrix.rows() != n || d.matrix.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: d.matrix.rows() });
    }
    let mut pos = vec![None; n];
    for (t, &i) in kidx.iter().enumerate() {
        pos[i] = Some(t);
    }
    let f = j.field();
    let mut mat = Matrix::zeros(f, kidx.len(), kidx.len());
    for (cl, &jl) in kidx.iter().enumerate() {
        for r in 0..n {
            let v = d.matrix.get(r, jl);
            if v.is_zero() {
                continue;
            }
            let rk = pos[r].ok_or_else(|| Error::Precondition(format!("map sends {} outside K", j.algebra.label(jl))))?;
            mat.set(rk, cl, v);
        }
    }
    Ok(LinearMap::new(mat, d.parity))
}

/// An element of `Z` (dimension `m`) from `(basis index, coefficient)` pairs.
pub fn z_element(field: FieldSpec, m: usize, terms: &[(usize, i64)]) -> Vec<Scalar> {
    let mut v = vec![field.zero(); m];
    for &(k, c) in terms {
        v[k] = field.add(v[k], field.from_i64(c));
    }
    v
}
