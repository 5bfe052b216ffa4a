//! Lie superalgebras built from Jordan superalgebras: the Tits construction
//! `T(J, d) = (so3 (x) J) + d`, the 3-graded superalgebra
//! `K(J) = J_-1 + (L_J + Inder J) + J_1`, and explicit isomorphisms
//! `T(J) -> K(J)` and `Der(JCK) -> T(K, bar Der(K))`.

use serde::{Deserialize, Serialize};

use crate::constructions::ChengKac;
use crate::derivations::{bar_der_k, derivation_algebra, grade_der, inner_derivation_algebra, DerivationSpace};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{solve, BasisCoordinates, Matrix};
use crate::superalg::{to_sparse, LinearMap, Parity, SparseVec, SuperAlgebra, Verdict};
use crate::symmetry::{conjugate_der, phi_star_images, CoordinateAlgebra, S4Action};

/// A Lie superalgebra stored as a bracket table, optionally `Z`-graded
/// with degrees in `{-1, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieSuperAlgebra {
    table: SuperAlgebra,
    grading: Option<Vec<i8>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LieJson {
    pub field: FieldSpec,
    pub dim_even: usize,
    pub dim_odd: usize,
    pub labels: Vec<String>,
    pub brackets: Vec<(usize, usize, SparseVec)>,
    pub grading: Option<Vec<i8>>,
}

impl LieSuperAlgebra {
    pub fn new(table: SuperAlgebra, grading: Option<Vec<i8>>) -> Result<Self> {
        if let Some(g) = &grading {
            if g.len() != table.dim() {
                return Err(Error::DimensionMismatch {
                    expected: table.dim(),
                    got: g.len(),
                });
            }
        }
        Ok(LieSuperAlgebra { table, grading })
    }

    /// The bracket table viewed as a (non-associative) superalgebra.
    pub fn table(&self) -> &SuperAlgebra {
        &self.table
    }

    pub fn field(&self) -> FieldSpec {
        self.table.field()
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.table.dim_even(), self.table.dim_odd())
    }

    pub fn labels(&self) -> &[String] {
        self.table.labels()
    }

    pub fn grading(&self) -> Option<&[i8]> {
        self.grading.as_deref()
    }

    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.table.multiply(u, v)
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        self.table.mul_basis(i, j)
    }

    pub fn check_super_lie(&self) -> Verdict {
        self.table.check_super_lie()
    }

    /// `[L_a, L_b] <= L_{a+b}`, and zero when `|a + b| > 1`.
    pub fn check_grading(&self) -> Verdict {
        let Some(g) = &self.grading else {
            return Verdict::pass();
        };
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let want = g[i] + g[j];
                if let Some(&(k, _)) = self.bracket_basis(i, j).iter().find(|&&(k, _)| g[k] != want) {
                    return Verdict::fail(vec![i, j, k], "bracket leaves its graded piece");
                }
            }
        }
        Verdict::pass()
    }

    pub fn to_json(&self) -> LieJson {
        let a = self.table.to_json();
        LieJson {
            field: a.field,
            dim_even: a.dim_even,
            dim_odd: a.dim_odd,
            labels: a.labels,
            brackets: a.products,
            grading: self.grading.clone(),
        }
    }

    pub fn from_json(j: &LieJson) -> Result<Self> {
        let table = SuperAlgebra::from_json(&crate::superalg::AlgebraJson {
            field: j.field,
            dim_even: j.dim_even,
            dim_odd: j.dim_odd,
            labels: j.labels.clone(),
            unit: None,
            fine_label: None,
            products: j.brackets.clone(),
        })?;
        LieSuperAlgebra::new(table, j.grading.clone())
    }
}

/// Lays out logically indexed basis elements with the even ones first.
struct Layout {
    pos: Vec<usize>,
    logical: Vec<usize>,
    dim_even: usize,
}

impl Layout {
    fn new(parities: &[Parity]) -> Self {
        let mut logical: Vec<usize> = (0..parities.len()).filter(|&i| parities[i] == Parity::Even).collect();
        let dim_even = logical.len();
        logical.extend((0..parities.len()).filter(|&i| parities[i] == Parity::Odd));
        let mut pos = vec![0; parities.len()];
        for (p, &l) in logical.iter().enumerate() {
            pos[l] = p;
        }
        Layout { pos, logical, dim_even }
    }

    fn build(
        &self,
        f: FieldSpec,
        labels: &[String],
        grading: Option<&[i8]>,
        bracket: impl Fn(usize, usize) -> SparseVec,
    ) -> Result<LieSuperAlgebra> {
        let n = self.logical.len();
        let table = SuperAlgebra::new(
            f,
            self.dim_even,
            n - self.dim_even,
            self.logical.iter().map(|&l| labels[l].clone()).collect(),
            |i, j| {
                bracket(self.logical[i], self.logical[j])
                    .into_iter()
                    .map(|(k, c)| (self.pos[k], c))
                    .collect()
            },
            None,
            None,
        )?;
        let grading = grading.map(|g| self.logical.iter().map(|&l| g[l]).collect());
        LieSuperAlgebra::new(table, grading)
    }
}

/// `(E_i)_{jk} = -eps_{ijk}`, so `[E_i, E_{i+1}] = E_{i+2}`.
pub fn so3_matrices(f: FieldSpec) -> [Matrix; 3] {
    std::array::from_fn(|i| {
        let mut m = Matrix::zeros(f, 3, 3);
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        m.set(j, k, f.neg(f.one()));
        m.set(k, j, f.one());
        m
    })
}

pub fn trace_form(a: &Matrix, b: &Matrix) -> Result<Scalar> {
    let ab = a.mul(b)?;
    let f = ab.field();
    Ok((0..ab.rows()).fold(f.zero(), |s, i| f.add(s, ab.get(i, i))))
}

/// Coordinates of a skew-symmetric 3x3 matrix in the basis `E_1, E_2, E_3`.
fn so3_coords(m: &Matrix) -> [Scalar; 3] {
    let f = m.field();
    std::array::from_fn(|i| f.neg(m.get((i + 1) % 3, (i + 2) % 3)))
}

/// Brackets and half the trace form of the matrix model.
struct So3Data {
    bracket: [[[Scalar; 3]; 3]; 3],
    half_trace: [[Scalar; 3]; 3],
}

fn so3_data(f: FieldSpec) -> Result<So3Data> {
    let e = so3_matrices(f);
    let half = f.inv(f.from_i64(2))?;
    let mut bracket = [[[f.zero(); 3]; 3]; 3];
    let mut half_trace = [[f.zero(); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let c = e[a].mul(&e[b])?.sub(&e[b].mul(&e[a])?);
            bracket[a][b] = so3_coords(&c);
            half_trace[a][b] = f.mul(half, trace_form(&e[a], &e[b])?);
        }
    }
    Ok(So3Data { bracket, half_trace })
}

pub fn so3(f: FieldSpec) -> Result<LieSuperAlgebra> {
    let data = so3_data(f)?;
    let labels: Vec<String> = (1..=3).map(|i| format!("E{i}")).collect();
    Layout::new(&[Parity::Even; 3]).build(f, &labels, None, |a, b| {
        (0..3).map(|c| (c, data.bracket[a][b][c])).collect()
    })
}

/// `T(J, d)`. Logical order: `E_a (x) e_x` at `a * dim J + x`, then the
/// basis of `d`; positions in `lie` put even elements first.
#[derive(Debug, Clone)]
pub struct Tits {
    pub lie: LieSuperAlgebra,
    pub j: SuperAlgebra,
    pub d: DerivationSpace,
    pos: Vec<usize>,
}

impl Tits {
    /// Position of `E_{a+1} (x) e_x`.
    pub fn tensor(&self, a: usize, x: usize) -> usize {
        self.pos[a * self.j.dim() + x]
    }

    /// Position of the `k`-th basis derivation of `d`.
    pub fn der(&self, k: usize) -> usize {
        self.pos[3 * self.j.dim() + k]
    }
}

pub fn tits_construction(j: &SuperAlgebra, d: &DerivationSpace) -> Result<Tits> {
    if d.algebra() != j {
        return Err(Error::Precondition("d acts on a different algebra".into()));
    }
    let v = d.check_derivations();
    if !v.holds {
        return Err(Error::Precondition(format!("d contains a non-derivation: {v:?}")));
    }
    if !d.contains_space(&inner_derivation_algebra(j))? {
        return Err(Error::Precondition("d does not contain Inder(J)".into()));
    }
    let v = d.check_subalgebra();
    if !v.holds {
        return Err(Error::Precondition(format!("d is not a subalgebra: {v:?}")));
    }
    let f = j.field();
    let n = j.dim();
    let so = so3_data(f)?;
    let basis = d.basis();
    let r = basis.len();

    let mut inner = vec![Vec::new(); n * n];
    for x in 0..n {
        for y in 0..n {
            let c = d
                .coordinates(&j.inner_derivation_basis(x, y))
                .ok_or_else(|| Error::Precondition(format!("D(e{x}, e{y}) is not in d")))?;
            inner[x * n + y] = to_sparse(&c);
        }
    }
    let mut dd = vec![Vec::new(); r * r];
    for k in 0..r {
        for l in 0..r {
            let c = d
                .coordinates(&LinearMap::supercommutator(&basis[k], &basis[l])?)
                .ok_or_else(|| Error::Precondition("d is not closed under the bracket".into()))?;
            dd[k * r + l] = to_sparse(&c);
        }
    }
    let cols: Vec<Vec<SparseVec>> = basis
        .iter()
        .map(|b| (0..n).map(|x| to_sparse(&b.image_of_basis(x))).collect())
        .collect();

    let mut parities: Vec<Parity> = (0..3).flat_map(|_| (0..n).map(|x| j.parity(x))).collect();
    parities.extend(basis.iter().map(|b| b.parity));
    let mut labels: Vec<String> = (0..3)
        .flat_map(|a| (0..n).map(move |x| (a, x)))
        .map(|(a, x)| format!("E{}*{}", a + 1, j.label(x)))
        .collect();
    labels.extend((0..r).map(|k| format!("d{k}")));

    let der_on_tensor = |k: usize, b: usize, y: usize| -> SparseVec {
        cols[k][y].iter().map(|&(s, c)| (b * n + s, c)).collect()
    };
    let bracket = |u: usize, v: usize| -> SparseVec {
        match (u < 3 * n, v < 3 * n) {
            (true, true) => {
                let (a, x, b, y) = (u / n, u % n, v / n, v % n);
                let mut out = Vec::new();
                for c in 0..3 {
                    let s = so.bracket[a][b][c];
                    if !s.is_zero() {
                        out.extend(j.mul_basis(x, y).iter().map(|&(t, w)| (c * n + t, f.mul(s, w))));
                    }
                }
                let h = so.half_trace[a][b];
                if !h.is_zero() {
                    out.extend(inner[x * n + y].iter().map(|&(k, w)| (3 * n + k, f.mul(h, w))));
                }
                out
            }
            (false, true) => der_on_tensor(u - 3 * n, v / n, v % n),
            (true, false) => {
                let flip = !parities[u].sign_flip(parities[v]);
                der_on_tensor(v - 3 * n, u / n, u % n)
                    .into_iter()
                    .map(|(k, c)| (k, f.signed(c, flip)))
                    .collect()
            }
            (false, false) => dd[(u - 3 * n) * r + (v - 3 * n)]
                .iter()
                .map(|&(k, c)| (3 * n + k, c))
                .collect(),
        }
    };
    let layout = Layout::new(&parities);
    let lie = layout.build(f, &labels, None, bracket)?;
    Ok(Tits {
        lie,
        j: j.clone(),
        d: d.clone(),
        pos: layout.pos,
    })
}

/// `K(J)`. Logical order: `J_-1`, `L_J`, the basis of `Inder(J)`, `J_1`.
#[derive(Debug, Clone)]
pub struct Tkk {
    pub lie: LieSuperAlgebra,
    pub j: SuperAlgebra,
    pub inder: DerivationSpace,
    pos: Vec<usize>,
}

impl Tkk {
    pub fn minus(&self, x: usize) -> usize {
        self.pos[x]
    }

    pub fn left(&self, x: usize) -> usize {
        self.pos[self.j.dim() + x]
    }

    pub fn der(&self, k: usize) -> usize {
        self.pos[2 * self.j.dim() + k]
    }

    pub fn plus(&self, x: usize) -> usize {
        self.pos[2 * self.j.dim() + self.inder.dim() + x]
    }
}

pub fn tkk_3graded(j: &SuperAlgebra) -> Result<Tkk> {
    if j.unit().is_none() {
        return Err(Error::Precondition("J must have a unit".into()));
    }
    let v = j.is_unital_jordan_super();
    if !v.holds {
        return Err(Error::Precondition(format!("J is not a unital Jordan superalgebra: {v:?}")));
    }
    let f = j.field();
    let n = j.dim();
    let inder = inner_derivation_algebra(j);
    let dbasis = inder.basis();
    let r = dbasis.len();
    let ops: Vec<LinearMap> = (0..n).map(|x| j.left_mult_basis(x)).chain(dbasis.iter().cloned()).collect();
    let coords = BasisCoordinates::new(f, n * n, ops.iter().map(LinearMap::flatten).collect())
        .map_err(|_| Error::Precondition("L_J and Inder(J) intersect".into()))?;
    let l0 = n + r;

    let mut zero = vec![Vec::new(); l0 * l0];
    for s in 0..l0 {
        for t in 0..l0 {
            let c = coords
                .coordinates(&LinearMap::supercommutator(&ops[s], &ops[t])?.flatten())
                .ok_or_else(|| Error::Verification("L_J + Inder(J) is not closed".into()))?;
            zero[s * l0 + t] = to_sparse(&c);
        }
    }
    let mut plus_minus = vec![Vec::new(); n * n];
    for x in 0..n {
        for y in 0..n {
            let mut out: SparseVec = j.mul_basis(x, y).to_vec();
            let c = inder
                .coordinates(&j.inner_derivation_basis(x, y))
                .expect("inner derivations lie in Inder(J)");
            out.extend(to_sparse(&c).into_iter().map(|(k, w)| (n + k, w)));
            plus_minus[x * n + y] = out;
        }
    }
    let act: Vec<Vec<SparseVec>> = ops
        .iter()
        .map(|o| (0..n).map(|x| to_sparse(&o.image_of_basis(x))).collect())
        .collect();

    let mut parities: Vec<Parity> = (0..n).map(|x| j.parity(x)).collect();
    parities.extend((0..n).map(|x| j.parity(x)));
    parities.extend(dbasis.iter().map(|b| b.parity));
    parities.extend((0..n).map(|x| j.parity(x)));
    let mut labels: Vec<String> = (0..n).map(|x| format!("{}_-1", j.label(x))).collect();
    labels.extend((0..n).map(|x| format!("L({})", j.label(x))));
    labels.extend((0..r).map(|k| format!("d{k}")));
    labels.extend((0..n).map(|x| format!("{}_1", j.label(x))));
    let mut grading = vec![-1i8; n];
    grading.extend(std::iter::repeat_n(0, l0));
    grading.extend(std::iter::repeat_n(1, n));

    let plus0 = n + l0;
    // logical index -> (degree, index within its piece)
    let piece = |u: usize| -> (i8, usize) {
        if u < n {
            (-1, u)
        } else if u < plus0 {
            (0, u - n)
        } else {
            (1, u - plus0)
        }
    };
    let place = |deg: i8, terms: &[(usize, Scalar)], sign: bool| -> SparseVec {
        let off = match deg {
            -1 => 0,
            0 => n,
            _ => plus0,
        };
        terms.iter().map(|&(k, c)| (off + k, f.signed(c, sign))).collect()
    };
    let bracket_ordered = |u: usize, v: usize| -> Option<SparseVec> {
        let ((du, iu), (dv, iv)) = (piece(u), piece(v));
        match (du, dv) {
            (0, 0) => Some(place(0, &zero[iu * l0 + iv], false)),
            // L_a acts by -L_a on J_-1
            (0, d) => Some(place(d, &act[iu][iv], d == -1 && iu < n)),
            (1, -1) => Some(place(0, &plus_minus[iu * n + iv], false)),
            (1, 1) | (-1, -1) => Some(Vec::new()),
            _ => None,
        }
    };
    let bracket = |u: usize, v: usize| -> SparseVec {
        bracket_ordered(u, v).unwrap_or_else(|| {
            let flip = !parities[u].sign_flip(parities[v]);
            bracket_ordered(v, u)
                .expect("one order is covered")
                .into_iter()
                .map(|(k, c)| (k, f.signed(c, flip)))
                .collect()
        })
    };
    let layout = Layout::new(&parities);
    let lie = layout.build(f, &labels, Some(&grading), bracket)?;
    Ok(Tkk {
        lie,
        j: j.clone(),
        inder,
        pos: layout.pos,
    })
}

/// `(dim_even, dim_odd)` of `K(J)` without building its bracket table; the
/// sum `L_J + Inder(J)` is checked to be direct.
pub fn tkk_3graded_dims(j: &SuperAlgebra) -> Result<(usize, usize)> {
    let f = j.field();
    let n = j.dim();
    let inder = inner_derivation_algebra(j);
    let mut ops: Vec<Vec<Scalar>> = (0..n).map(|x| j.left_mult_basis(x).flatten()).collect();
    ops.extend(inder.basis().iter().map(LinearMap::flatten));
    if BasisCoordinates::new(f, n * n, ops).is_err() {
        return Err(Error::Precondition("L_J and Inder(J) intersect".into()));
    }
    let (de, dod) = inder.dims();
    Ok((3 * j.dim_even() + de, 3 * j.dim_odd() + dod))
}

/// A linear map between Lie superalgebras together with its verification.
#[derive(Debug, Clone)]
pub struct ExplicitIso {
    pub map: LinearMap,
    pub verified: Verdict,
}

/// Bracket-preserving on all basis pairs and bijective.
pub fn verify_iso(source: &LieSuperAlgebra, target: &LieSuperAlgebra, map: &LinearMap) -> Verdict {
    if source.dim() != target.dim() {
        return Verdict::from_bool(false, format!("dimensions {} and {} differ", source.dim(), target.dim()));
    }
    let v = SuperAlgebra::is_homomorphism(source.table(), target.table(), map);
    if !v.holds {
        return v;
    }
    Verdict::from_bool(map.matrix.rank() == source.dim(), "map is not bijective")
}

fn checked(source: &LieSuperAlgebra, target: &LieSuperAlgebra, map: LinearMap) -> Result<ExplicitIso> {
    let verified = verify_iso(source, target, &map);
    if !verified.holds {
        return Err(Error::Verification(format!(
            "not an isomorphism at basis elements {:?}: {}",
            verified.witness.clone().unwrap_or_default(),
            verified.detail.clone().unwrap_or_default()
        )));
    }
    Ok(ExplicitIso { map, verified })
}

/// An `sl2` triple in `so3`, as coordinates in `E_1, E_2, E_3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sl2Triple {
    pub e: [Scalar; 3],
    pub h: [Scalar; 3],
    pub f: [Scalar; 3],
}

/// `h = 2i E_3`, `e = E_1 + i E_2`, `f = -E_1 + i E_2`, checked against
/// `[h, e] = 2e`, `[h, f] = -2f`, `[e, f] = h`.
pub fn sl2_triple(f: FieldSpec) -> Result<Sl2Triple> {
    let i = f.sqrt_minus_one()?;
    let (zero, one) = (f.zero(), f.one());
    let t = Sl2Triple {
        e: [one, i, zero],
        h: [zero, zero, f.mul(f.from_i64(2), i)],
        f: [f.neg(one), i, zero],
    };
    let so = so3(f)?;
    let br = |a: &[Scalar; 3], b: &[Scalar; 3]| so.bracket(a, b);
    let scaled = |c: i64, a: &[Scalar; 3]| a.iter().map(|&x| f.mul(f.from_i64(c), x)).collect::<Vec<_>>();
    if br(&t.h, &t.e)? != scaled(2, &t.e) || br(&t.h, &t.f)? != scaled(-2, &t.f) || br(&t.e, &t.f)? != t.h.to_vec() {
        return Err(Error::Verification("sl2 triple relations fail".into()));
    }
    Ok(t)
}

/// `e (x) x -> x_1`, `h (x) x -> 2 L_x`, `f (x) x -> 2 x_-1`, `d -> d`.
pub fn sl2_identification(t: &Tits, k: &Tkk) -> Result<ExplicitIso> {
    if t.j != k.j || t.d != k.inder {
        return Err(Error::Precondition("T(J) and K(J) must be built on the same J and Inder(J)".into()));
    }
    let f = t.j.field();
    let triple = sl2_triple(f)?;
    let efh = [triple.e.to_vec(), triple.h.to_vec(), triple.f.to_vec()];
    let two = f.from_i64(2);
    let n = t.j.dim();
    let mut mat = Matrix::zeros(f, k.lie.dim(), t.lie.dim());
    for a in 0..3 {
        let mut unit = vec![f.zero(); 3];
        unit[a] = f.one();
        let c = solve(f, &efh, &unit).ok_or_else(|| Error::Verification("e, h, f do not span so3".into()))?;
        for x in 0..n {
            let col = t.tensor(a, x);
            mat.add_at(k.plus(x), col, c[0]);
            mat.add_at(k.left(x), col, f.mul(two, c[1]));
            mat.add_at(k.minus(x), col, f.mul(two, c[2]));
        }
    }
    for d in 0..t.d.dim() {
        mat.set(k.der(d), t.der(d), f.one());
    }
    checked(&t.lie, &k.lie, LinearMap::new(mat, Parity::Even))
}

/// The Lie superalgebra on `space.basis()` with the supercommutator.
pub fn derivation_lie(space: &DerivationSpace) -> Result<LieSuperAlgebra> {
    let basis = space.basis();
    let r = basis.len();
    let mut table = vec![Vec::new(); r * r];
    for a in 0..r {
        for b in 0..r {
            let c = space
                .coordinates(&LinearMap::supercommutator(&basis[a], &basis[b])?)
                .ok_or_else(|| Error::Verification("space is not closed under the bracket".into()))?;
            table[a * r + b] = to_sparse(&c);
        }
    }
    let parities: Vec<Parity> = basis.iter().map(|b| b.parity).collect();
    let labels: Vec<String> = (0..r).map(|k| format!("d{k}")).collect();
    Layout::new(&parities).build(space.algebra().field(), &labels, None, |a, b| table[a * r + b].clone())
}

/// `iota_3 = Phi`, `iota_1 = phi iota_3 phi^-1`, `iota_2 = phi^2 iota_3 phi^-2`,
/// with `a = 0, 1, 2` standing for `iota_1, iota_2, iota_3`.
pub fn iota(act: &S4Action, c: &CoordinateAlgebra, phi: &LinearMap, a: usize, z: usize) -> Result<LinearMap> {
    let i3 = c.derivation(&phi.image_of_basis(z));
    let mut g = LinearMap::identity(i3.field(), act.phi.matrix.rows());
    for _ in 0..(a + 1) % 3 {
        g = act.phi.compose(&g)?;
    }
    conjugate_der(&g, &i3)
}

#[derive(Debug, Clone)]
pub struct DerTkk {
    /// `T(K, bar Der(K)) -> Der(J)`.
    pub der_iso: ExplicitIso,
    /// `T(K) -> Inder(J)`.
    pub inder_iso: ExplicitIso,
    pub tits_der: Tits,
    pub tits_inner: Tits,
    pub der_j: LieSuperAlgebra,
    pub inder_j: LieSuperAlgebra,
}

/// `E_a (x) z -> iota_a(z)`, `d -> (Phi*)^-1(d)`, verified as isomorphisms
/// `T(K, bar Der(K)) -> Der(J)` and `T(K) -> Inder(J)`.
pub fn der_as_tkk(jv: &ChengKac, act: &S4Action, c: &CoordinateAlgebra, phi: &LinearMap) -> Result<DerTkk> {
    let k = jv.kantor();
    let f = jv.field();
    let nk = k.algebra.dim();
    let der = derivation_algebra(&jv.algebra);
    let inder = inner_derivation_algebra(&jv.algebra);
    let comp = grade_der(&der)?[0].clone();
    let comp_basis = comp.basis();
    let images = phi_star_images(c, phi, &comp)?;
    let star = BasisCoordinates::new(f, nk * nk, images.iter().map(LinearMap::flatten).collect())
        .map_err(|_| Error::Verification("Phi* is not injective".into()))?;
    let unstar = |d: &LinearMap| -> Result<LinearMap> {
        let coords = star
            .coordinates(&d.flatten())
            .ok_or_else(|| Error::Verification("derivation of K outside the image of Phi*".into()))?;
        let mut out = LinearMap::zero(f, jv.algebra.dim(), d.parity);
        for (t, w) in to_sparse(&coords) {
            out = out.add(&comp_basis[t].scale(w));
        }
        Ok(out)
    };
    let iotas: Vec<Vec<LinearMap>> = (0..3)
        .map(|a| (0..nk).map(|z| iota(act, c, phi, a, z)).collect::<Result<_>>())
        .collect::<Result<_>>()?;

    let build = |d: DerivationSpace, target: &DerivationSpace| -> Result<(Tits, LieSuperAlgebra, ExplicitIso)> {
        let t = tits_construction(&k.algebra, &d)?;
        let lie = derivation_lie(target)?;
        let mut mat = Matrix::zeros(f, target.dim(), t.lie.dim());
        let mut place = |col: usize, image: &LinearMap| -> Result<()> {
            let coords = target
                .coordinates(image)
                .ok_or_else(|| Error::Verification(format!("image of basis element {col} is outside the target")))?;
            for (r, w) in to_sparse(&coords) {
                mat.set(r, col, w);
            }
            Ok(())
        };
        for (a, row) in iotas.iter().enumerate() {
            for (z, im) in row.iter().enumerate() {
                place(t.tensor(a, z), im)?;
            }
        }
        for (kk, dk) in d.basis().iter().enumerate() {
            place(t.der(kk), &unstar(dk)?)?;
        }
        let iso = checked(&t.lie, &lie, LinearMap::new(mat, Parity::Even))?;
        Ok((t, lie, iso))
    };
    let (tits_der, der_j, der_iso) = build(bar_der_k(&k), &der)?;
    let (tits_inner, inder_j, inder_iso) = build(inner_derivation_algebra(&k.algebra), &inder)?;
    Ok(DerTkk {
        der_iso,
        inder_iso,
        tits_der,
        tits_inner,
        der_j,
        inder_j,
    })
}
