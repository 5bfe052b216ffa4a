//! Builders for the concrete algebras: truncated polynomials with `d/dt`,
//! the quadratic-form Jordan algebra, the Kantor double `K = Z + Zx`, and
//! the Cheng-Kac superalgebra `JCK(Z, d)` in the `w` and `v` bases.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::superalg::{column_sparse, FineLabel, LinearMap, Parity, SparseVec, SuperAlgebra};

/// A purely even commutative associative unital algebra `Z` with an even
/// derivation `delta` such that `Z delta(Z) = Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialAlgebra {
    pub z: SuperAlgebra,
    pub delta: LinearMap,
}

impl DifferentialAlgebra {
    pub fn new(z: SuperAlgebra, delta: LinearMap) -> Result<Self> {
        if z.dim_odd() != 0 || z.unit().is_none() {
            return Err(Error::Precondition("Z must be purely even and unital".into()));
        }
        if !z.check_supercommutative().holds {
            return Err(Error::Precondition("Z must be commutative".into()));
        }
        if delta.parity != Parity::Even || !z.is_derivation(&delta).holds {
            return Err(Error::Precondition("delta is not an even derivation of Z".into()));
        }
        let d = DifferentialAlgebra { z, delta };
        if !d.generates() {
            return Err(Error::Precondition("Z delta(Z) != Z".into()));
        }
        Ok(d)
    }

    /// `Z delta(Z) = Z` as subspaces.
    pub fn generates(&self) -> bool {
        let m = self.z.dim();
        let image = crate::linalg::Subspace::span(
            self.field(),
            m,
            (0..m).map(|j| self.delta.image_of_basis(j)).collect(),
        );
        self.z.product_space(&self.z.even_part(), &image).dim() == m
    }

    pub fn field(&self) -> FieldSpec {
        self.z.field()
    }

    pub fn dim(&self) -> usize {
        self.z.dim()
    }

    pub fn unit(&self) -> usize {
        self.z.unit().expect("checked on construction")
    }

    pub(crate) fn zmul(&self, u: &[(usize, Scalar)], v: &[(usize, Scalar)]) -> SparseVec {
        let f = self.field();
        let mut out: Vec<Scalar> = vec![f.zero(); self.dim()];
        for &(a, x) in u {
            for &(b, y) in v {
                let xy = f.mul(x, y);
                for &(k, c) in self.z.mul_basis(a, b) {
                    out[k] = f.add(out[k], f.mul(xy, c));
                }
            }
        }
        crate::superalg::to_sparse(&out)
    }

    pub(crate) fn delta_of(&self, a: usize) -> SparseVec {
        column_sparse(&self.delta.matrix, a)
    }
}

/// `Z = F[t : t^p = 0]` with `delta = d/dt`; `p` must be the characteristic.
pub fn truncated_poly(spec: FieldSpec, p: u32) -> Result<DifferentialAlgebra> {
    if p != spec.p {
        return Err(Error::Precondition(format!(
            "truncation degree {p} must equal the characteristic {}",
            spec.p
        )));
    }
    let m = p as usize;
    let labels = (0..m).map(|k| format!("t^{k}")).collect();
    let z = SuperAlgebra::new(
        spec,
        m,
        0,
        labels,
        |a, b| if a + b < m { vec![(a + b, spec.one())] } else { vec![] },
        Some(0),
        None,
    )?;
    let mut delta = crate::linalg::Matrix::zeros(spec, m, m);
    for k in 1..m {
        delta.set(k - 1, k, spec.from_i64(k as i64));
    }
    DifferentialAlgebra::new(z, LinearMap::new(delta, Parity::Even))
}

/// `F1 + Fw1 + Fw2 + Fw3` with `w1^2 = w2^2 = 1 = -w3^2`, `w_i w_j = 0`.
pub fn quadratic_jordan(spec: FieldSpec) -> SuperAlgebra {
    let eps = [spec.one(), spec.one(), spec.one(), spec.neg(spec.one())];
    SuperAlgebra::new(
        spec,
        4,
        0,
        ["1", "w1", "w2", "w3"].iter().map(|s| s.to_string()).collect(),
        |i, j| match (i, j) {
            (0, k) | (k, 0) => vec![(k, spec.one())],
            (i, j) if i == j => vec![(0, eps[i])],
            _ => vec![],
        },
        Some(0),
        None,
    )
    .expect("well-formed table")
}

/// The Kantor double `K = Z + Zx` together with the data it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kantor {
    pub algebra: SuperAlgebra,
    pub diff: DifferentialAlgebra,
}

impl Kantor {
    pub fn m(&self) -> usize {
        self.diff.dim()
    }

    /// Index of `z_a` (the `a`-th basis vector of `Z`).
    pub fn z(&self, a: usize) -> usize {
        a
    }

    /// Index of `z_a x`.
    pub fn zx(&self, a: usize) -> usize {
        self.m() + a
    }

    pub fn x(&self) -> usize {
        self.zx(self.diff.unit())
    }
}

/// `K = Z + Zx` with `f(gx) = (fg)x` and `(fx)(gx) = delta(f)g - f delta(g)`.
/// `odd_symbol` names the odd generator in labels (`x`, or `y` in the
/// symmetric basis).
pub fn kantor_double_named(d: &DifferentialAlgebra, odd_symbol: &str) -> Kantor {
    let f = d.field();
    let m = d.dim();
    let mut labels: Vec<String> = d.z.labels().to_vec();
    labels.extend(d.z.labels().iter().map(|l| format!("{l}*{odd_symbol}")));
    let one = f.one();
    let algebra = SuperAlgebra::new(
        f,
        m,
        m,
        labels,
        |i, j| {
            let (pi, a) = (i >= m, i % m);
            let (pj, b) = (j >= m, j % m);
            let fa = [(a, one)];
            let gb = [(b, one)];
            match (pi, pj) {
                (false, false) => d.zmul(&fa, &gb),
                (false, true) | (true, false) => shift(&d.zmul(&fa, &gb), m),
                (true, true) => {
                    let mut t = d.zmul(&d.delta_of(a), &gb);
                    t.extend(neg(f, &d.zmul(&fa, &d.delta_of(b))));
                    t
                }
            }
        },
        Some(d.unit()),
        None,
    )
    .expect("Kantor double table is well formed");
    Kantor {
        algebra,
        diff: d.clone(),
    }
}

pub fn kantor_double(d: &DifferentialAlgebra) -> Kantor {
    kantor_double_named(d, "x")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JBasis {
    /// `1, w_i, x, x_i` with `w1^2 = w2^2 = 1 = -w3^2`.
    W,
    /// `1, v_i, y, y_i` with `v_i^2 = -1`.
    V,
}

/// Index layout shared by both bases: family `i` (0 for `1`/`x`/`y`, 1..=3
/// for the indexed families) and `Z`-basis index `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JLayout {
    pub m: usize,
}

impl JLayout {
    #[inline]
    pub fn even(&self, family: usize, k: usize) -> usize {
        family * self.m + k
    }

    #[inline]
    pub fn odd(&self, family: usize, k: usize) -> usize {
        4 * self.m + family * self.m + k
    }

    /// `(parity, family, k)` of an index.
    #[inline]
    pub fn decode(&self, idx: usize) -> (Parity, usize, usize) {
        let m = self.m;
        if idx < 4 * m {
            (Parity::Even, idx / m, idx % m)
        } else {
            let r = idx - 4 * m;
            (Parity::Odd, r / m, r % m)
        }
    }

    pub fn dim(&self) -> usize {
        8 * self.m
    }

    /// The `Z2^2` degree of a family.
    pub fn family_label(family: usize) -> FineLabel {
        [[0, 0], [1, 0], [0, 1], [1, 1]][family]
    }

    /// Positions of `K = Z + Zx` inside `J`, in the order of [`Kantor`]'s basis.
    pub fn kantor_indices(&self) -> Vec<usize> {
        (0..self.m)
            .map(|k| self.even(0, k))
            .chain((0..self.m).map(|k| self.odd(0, k)))
            .collect()
    }
}

/// A Cheng-Kac Jordan superalgebra with its construction data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChengKac {
    pub algebra: SuperAlgebra,
    pub diff: DifferentialAlgebra,
    pub basis: JBasis,
    pub layout: JLayout,
}

/// `x_{i x j}` for the `w` basis: `x_{1x2} = x3`, `x_{1x3} = x2`,
/// `x_{3x2} = x1`, antisymmetric. Returns `(k, negative)`.
fn cross_w(i: usize, j: usize) -> Option<(usize, bool)> {
    match (i, j) {
        (1, 2) => Some((3, false)),
        (2, 1) => Some((3, true)),
        (1, 3) => Some((2, false)),
        (3, 1) => Some((2, true)),
        (3, 2) => Some((1, false)),
        (2, 3) => Some((1, true)),
        _ => None,
    }
}

/// `y_{i ^ j}` for the `v` basis: cyclic, `y_{1^2} = y3`, `y_{2^3} = y1`,
/// `y_{3^1} = y2`, antisymmetric.
fn wedge_v(i: usize, j: usize) -> Option<(usize, bool)> {
    match (i, j) {
        (1, 2) => Some((3, false)),
        (2, 1) => Some((3, true)),
        (2, 3) => Some((1, false)),
        (3, 2) => Some((1, true)),
        (3, 1) => Some((2, false)),
        (1, 3) => Some((2, true)),
        _ => None,
    }
}

pub fn cheng_kac(d: &DifferentialAlgebra, basis: JBasis) -> Result<ChengKac> {
    let f = d.field();
    if basis == JBasis::V {
        f.sqrt_minus_one()?;
    }
    let m = d.dim();
    let lay = JLayout { m };
    let one = f.one();
    let minus = f.neg(one);
    let (even_sym, odd_sym, sq): ([&str; 4], [&str; 4], [Scalar; 4]) = match basis {
        JBasis::W => (["1", "w1", "w2", "w3"], ["x", "x1", "x2", "x3"], [one, one, one, minus]),
        JBasis::V => (["1", "v1", "v2", "v3"], ["y", "y1", "y2", "y3"], [one, minus, minus, minus]),
    };
    // (f a_i)(g b_j) = sign * (fg) b_{i.j} for i, j >= 1
    let mixed = |i: usize, j: usize| -> Option<(usize, bool)> {
        match basis {
            JBasis::W => cross_w(i, j).map(|(k, s)| (k, !s)),
            JBasis::V => wedge_v(i, j),
        }
    };

    let mut labels = Vec::with_capacity(8 * m);
    for sym in even_sym.iter().chain(odd_sym.iter()) {
        for zl in d.z.labels() {
            labels.push(format!("{zl}*{sym}"));
        }
    }
    let fine: Vec<FineLabel> = (0..8 * m).map(|idx| JLayout::family_label(lay.decode(idx).1)).collect();

    let even_at = |fam: usize, v: SparseVec| -> SparseVec { v.into_iter().map(|(k, c)| (lay.even(fam, k), c)).collect() };
    let odd_at = |fam: usize, v: SparseVec| -> SparseVec { v.into_iter().map(|(k, c)| (lay.odd(fam, k), c)).collect() };
    let scaled = |v: SparseVec, c: Scalar| -> SparseVec { v.into_iter().map(|(k, x)| (k, f.mul(x, c))).collect() };

    // even (i, a) times odd (j, b)
    let even_odd = |i: usize, a: usize, j: usize, b: usize| -> SparseVec {
        let fa = [(a, one)];
        let gb = [(b, one)];
        match (i, j) {
            (0, j) => odd_at(j, d.zmul(&fa, &gb)),
            (i, 0) => odd_at(i, d.zmul(&d.delta_of(a), &gb)),
            (i, j) => match mixed(i, j) {
                Some((k, negative)) => odd_at(k, scaled(d.zmul(&fa, &gb), f.signed(one, negative))),
                None => vec![],
            },
        }
    };

    let algebra = SuperAlgebra::new(
        f,
        4 * m,
        4 * m,
        labels,
        |p, q| {
            let (pp, i, a) = lay.decode(p);
            let (pq, j, b) = lay.decode(q);
            let fa = [(a, one)];
            let gb = [(b, one)];
            match (pp, pq) {
                (Parity::Even, Parity::Even) => match (i, j) {
                    (0, k) | (k, 0) => even_at(k, d.zmul(&fa, &gb)),
                    (i, j) if i == j => even_at(0, scaled(d.zmul(&fa, &gb), sq[i])),
                    _ => vec![],
                },
                (Parity::Even, Parity::Odd) => even_odd(i, a, j, b),
                (Parity::Odd, Parity::Even) => even_odd(j, b, i, a),
                (Parity::Odd, Parity::Odd) => match (i, j) {
                    (0, 0) => {
                        let mut t = d.zmul(&d.delta_of(a), &gb);
                        t.extend(neg(f, &d.zmul(&fa, &d.delta_of(b))));
                        even_at(0, t)
                    }
                    (0, j) => even_at(j, neg(f, &d.zmul(&fa, &gb))),
                    (i, 0) => even_at(i, d.zmul(&fa, &gb)),
                    _ => vec![],
                },
            }
        },
        Some(lay.even(0, d.unit())),
        Some(fine),
    )?;
    Ok(ChengKac {
        algebra,
        diff: d.clone(),
        basis,
        layout: lay,
    })
}

impl ChengKac {
    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn m(&self) -> usize {
        self.layout.m
    }

    /// The element `z_k * family` in the even part.
    pub fn even(&self, family: usize, k: usize) -> usize {
        self.layout.even(family, k)
    }

    pub fn odd(&self, family: usize, k: usize) -> usize {
        self.layout.odd(family, k)
    }

    /// `1` (unit of `Z`) times the given family.
    pub fn even_gen(&self, family: usize) -> usize {
        self.layout.even(family, self.diff.unit())
    }

    pub fn odd_gen(&self, family: usize) -> usize {
        self.layout.odd(family, self.diff.unit())
    }

    /// The Kantor double `Z + Zx` built from the same `(Z, delta)`, with the
    /// odd generator named after this basis.
    pub fn kantor(&self) -> Kantor {
        kantor_double_named(&self.diff, if self.basis == JBasis::V { "y" } else { "x" })
    }

    pub fn kantor_indices(&self) -> Vec<usize> {
        self.layout.kantor_indices()
    }

    /// Coordinate subspace of a `Z2^2` component.
    pub fn fine_component(&self, label: FineLabel) -> crate::linalg::Subspace {
        let fl = self.algebra.fine_labels().expect("JCK carries fine labels");
        self.algebra
            .span_of_indices((0..self.algebra.dim()).filter(|&i| fl[i] == label))
    }
}

/// The even `Z`-linear isomorphism from the `w`-basis algebra to the
/// `v`-basis algebra: `w1 -> -i v1`, `w2 -> -i v2`, `w3 -> v3`, `x -> y`,
/// `x1 -> -i y1`, `x2 -> -i y2`, `x3 -> y3`. Verified before returning.
pub fn w_to_v_change(jw: &ChengKac, jv: &ChengKac) -> Result<LinearMap> {
    if jw.basis != JBasis::W || jv.basis != JBasis::V || jw.layout != jv.layout {
        return Err(Error::Precondition("expected matching w- and v-basis algebras".into()));
    }
    let f = jw.field();
    let i = f.sqrt_minus_one()?;
    let minus_i = f.neg(i);
    let coef = [f.one(), minus_i, minus_i, f.one()];
    let n = jw.algebra.dim();
    let mut m = crate::linalg::Matrix::zeros(f, n, n);
    for idx in 0..n {
        let (_, fam, _) = jw.layout.decode(idx);
        m.set(idx, idx, coef[fam]);
    }
    let map = LinearMap::new(m, Parity::Even);
    let v = SuperAlgebra::is_homomorphism(&jw.algebra, &jv.algebra, &map);
    if !v.holds {
        return Err(Error::Verification(format!("w -> v change is not a homomorphism: {v:?}")));
    }
    if map.matrix.rank() != n {
        return Err(Error::Verification("w -> v change is not bijective".into()));
    }
    Ok(map)
}

fn shift(v: &SparseVec, by: usize) -> SparseVec {
    v.iter().map(|&(k, c)| (k + by, c)).collect()
}

fn neg(f: FieldSpec, v: &SparseVec) -> SparseVec {
    v.iter().map(|&(k, c)| (k, f.neg(c))).collect()
}
