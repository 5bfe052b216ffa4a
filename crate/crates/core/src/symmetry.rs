//! The `S4` action on `JCK` in the `v` basis, the coordinate superalgebra
//! carried by the `[1,1]` component of `Der(J)`, and the maps `Phi` and
//! `Phi*` relating it to `K = Z + Zy`.

use std::collections::{HashSet, VecDeque};

use crate::constructions::{ChengKac, JBasis, Kantor};
use crate::derivations::{grade_der, DerivationSpace};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{BasisCoordinates, Matrix};
use crate::superalg::{column_sparse, LinearMap, Parity, SuperAlgebra, Verdict};

const MAX_ORDER: usize = 30;

/// Four generating automorphisms of `J` and the group they generate.
#[derive(Debug, Clone)]
pub struct S4Action {
    /// `-1` on the `[1,0]` and `[0,1]` components.
    pub tau1: LinearMap,
    /// `-1` on the `[0,1]` and `[1,1]` components.
    pub tau2: LinearMap,
    /// `v_i -> v_{i+1}`, `y_i -> y_{i+1}`.
    pub phi: LinearMap,
    /// `v1 <-> -v2`, `v3 -> -v3`, and likewise for the `y_i`.
    pub tau: LinearMap,
    /// Closure under composition, in breadth-first order from the identity.
    pub elements: Vec<LinearMap>,
}

/// The `Z`-linear even map sending family `i` to `sign * family target(i)`.
fn family_map(j: &ChengKac, image: impl Fn(usize) -> (usize, bool)) -> LinearMap {
    let f = j.field();
    let n = j.algebra.dim();
    let mut m = Matrix::zeros(f, n, n);
    for idx in 0..n {
        let (par, fam, k) = j.layout.decode(idx);
        let (to, negative) = image(fam);
        let row = match par {
            Parity::Even => j.even(to, k),
            Parity::Odd => j.odd(to, k),
        };
        m.set(row, idx, f.signed(f.one(), negative));
    }
    LinearMap::new(m, Parity::Even)
}

pub fn build_s4(jv: &ChengKac) -> Result<S4Action> {
    if jv.basis != JBasis::V {
        return Err(Error::Precondition("the S4 action is defined on the v basis".into()));
    }
    let tau1 = family_map(jv, |fam| (fam, fam == 1 || fam == 2));
    let tau2 = family_map(jv, |fam| (fam, fam == 2 || fam == 3));
    let phi = family_map(jv, |fam| (if fam == 0 { 0 } else { fam % 3 + 1 }, false));
    let tau = family_map(jv, |fam| match fam {
        0 => (0, false),
        1 => (2, true),
        2 => (1, true),
        _ => (3, true),
    });
    for (name, g) in [("tau1", &tau1), ("tau2", &tau2), ("phi", &phi), ("tau", &tau)] {
        let v = jv.algebra.is_automorphism(g);
        if !v.holds {
            return Err(Error::Verification(format!("{name} is not an automorphism: {v:?}")));
        }
    }
    let gens = [&tau1, &tau2, &phi, &tau];
    let n = jv.algebra.dim();
    let id = LinearMap::identity(jv.field(), n);
    let mut seen: HashSet<Matrix> = HashSet::from([id.matrix.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = s.compose(&g)?;
            if seen.insert(h.matrix.clone()) {
                elements.push(h.clone());
                queue.push_back(h);
                if elements.len() > MAX_ORDER {
                    return Err(Error::Verification(format!(
                        "generated group exceeds {MAX_ORDER} elements"
                    )));
                }
            }
        }
    }
    Ok(S4Action {
        tau1,
        tau2,
        phi,
        tau,
        elements,
    })
}

impl S4Action {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `s1 = tau`, `s2 = phi tau phi^-1`, `s3 = tau1 tau`.
    pub fn coxeter_generators(&self) -> Result<[LinearMap; 3]> {
        let phi_inv = LinearMap::new(self.phi.matrix.inverse()?, Parity::Even);
        Ok([
            self.tau.clone(),
            self.phi.compose(&self.tau)?.compose(&phi_inv)?,
            self.tau1.compose(&self.tau)?,
        ])
    }

    /// `s_i^2 = 1`, `(s1 s2)^3 = (s2 s3)^3 = 1`, `(s1 s3)^2 = 1`.
    /// Witness: the indices of the failing relation (one or two generators).
    pub fn check_coxeter(&self) -> Result<Verdict> {
        let s = self.coxeter_generators()?;
        let n = self.tau.matrix.rows();
        let id = Matrix::identity(self.tau.field(), n);
        let power = |g: &LinearMap, e: usize| -> Result<Matrix> {
            let mut acc = id.clone();
            for _ in 0..e {
                acc = g.matrix.mul(&acc)?;
            }
            Ok(acc)
        };
        for (i, g) in s.iter().enumerate() {
            if power(g, 2)? != id {
                return Ok(Verdict::fail(vec![i], "generator is not an involution"));
            }
        }
        for (a, b, e) in [(0, 1, 3), (1, 2, 3), (0, 2, 2)] {
            if power(&s[a].compose(&s[b])?, e)? != id {
                return Ok(Verdict::fail(vec![a, b], format!("(s{} s{})^{e} != 1", a + 1, b + 1)));
            }
        }
        Ok(Verdict::pass())
    }
}

/// `g d g^-1`.
pub fn conjugate_der(g: &LinearMap, d: &LinearMap) -> Result<LinearMap> {
    let inv = LinearMap::new(g.matrix.inverse()?, g.parity);
    let c = g.compose(d)?.compose(&inv)?;
    Ok(LinearMap::new(c.matrix, d.parity))
}

/// `Der(J)^[1,1]` with the product `X.Y = -tau[phi X, phi^2 Y]` and the
/// involution `X -> -tau X` (conjugation action). The carrier basis is
/// `D(v1, z_k v2)` for even and `D(v3, z_k y)` for odd elements.
#[derive(Debug, Clone)]
pub struct CoordinateAlgebra {
    pub carrier: Vec<LinearMap>,
    pub algebra: SuperAlgebra,
    /// Matrix of the involution in carrier coordinates.
    pub involution: Matrix,
    coords: BasisCoordinates,
}

impl CoordinateAlgebra {
    pub fn dim(&self) -> usize {
        self.carrier.len()
    }

    /// Carrier coordinates of a map, `None` if it is outside the carrier.
    pub fn coordinates(&self, d: &LinearMap) -> Option<Vec<Scalar>> {
        self.coords.coordinates(&d.flatten())
    }

    /// The derivation with the given carrier coordinates.
    pub fn derivation(&self, coords: &[Scalar]) -> LinearMap {
        let f = self.algebra.field();
        let n = self.carrier[0].matrix.rows();
        let mut acc = Matrix::zeros(f, n, n);
        let mut parity = Parity::Even;
        for (c, x) in coords.iter().zip(&self.carrier) {
            if !c.is_zero() {
                acc = acc.add(&x.matrix.scale(*c));
                parity = x.parity;
            }
        }
        LinearMap::new(acc, parity)
    }

    pub fn check_involution_trivial(&self) -> Verdict {
        let id = Matrix::identity(self.algebra.field(), self.dim());
        match (0..self.dim()).find(|&c| self.involution.column(c) != id.column(c)) {
            Some(c) => Verdict::fail(vec![c], "involution moves a basis element"),
            None => Verdict::pass(),
        }
    }

    /// Whether the carrier element with coordinates `u` is a two-sided unit.
    pub fn is_unit(&self, u: &[Scalar]) -> bool {
        let a = &self.algebra;
        (0..a.dim()).all(|i| {
            let e = a.basis_vector(i);
            a.multiply(u, &e).ok().as_ref() == Some(&e) && a.multiply(&e, u).ok().as_ref() == Some(&e)
        })
    }
}

fn carrier_basis(jv: &ChengKac) -> (Vec<LinearMap>, Vec<String>) {
    let m = jv.m();
    let u = jv.diff.unit();
    let a = &jv.algebra;
    let zl = jv.diff.z.labels();
    let mut maps = Vec::with_capacity(2 * m);
    let mut labels = Vec::with_capacity(2 * m);
    for k in 0..m {
        maps.push(a.inner_derivation_basis(jv.even(1, u), jv.even(2, k)));
        labels.push(format!("D(v1,{} v2)", zl[k]));
    }
    for k in 0..m {
        maps.push(a.inner_derivation_basis(jv.even(3, u), jv.odd(0, k)));
        labels.push(format!("D(v3,{} y)", zl[k]));
    }
    (maps, labels)
}

/// Builds the coordinate superalgebra on the `[1,1]` component of `der`
/// (a graded space of derivations of `jv` containing that component).
pub fn coordinate_algebra(jv: &ChengKac, der: &DerivationSpace, act: &S4Action) -> Result<CoordinateAlgebra> {
    if der.algebra() != &jv.algebra {
        return Err(Error::Precondition("derivations of a different algebra".into()));
    }
    let comp = grade_der(der)?[3].clone();
    let (carrier, labels) = carrier_basis(jv);
    let named = DerivationSpace::span(&jv.algebra, carrier.iter().cloned())?;
    if named != comp {
        return Err(Error::Verification(format!(
            "[1,1] component has dims {:?}, the named basis spans {:?}",
            comp.dims(),
            named.dims()
        )));
    }
    let f = jv.field();
    let n = jv.algebra.dim();
    let coords = BasisCoordinates::new(f, n * n, carrier.iter().map(LinearMap::flatten).collect())?;
    let phi2 = act.phi.compose(&act.phi)?;
    let by_phi: Vec<LinearMap> = carrier.iter().map(|x| conjugate_der(&act.phi, x)).collect::<Result<_>>()?;
    let by_phi2: Vec<LinearMap> = carrier.iter().map(|x| conjugate_der(&phi2, x)).collect::<Result<_>>()?;
    let minus = f.neg(f.one());
    let k = carrier.len();
    let locate = |d: &LinearMap, what: &str| -> Result<Vec<(usize, Scalar)>> {
        let c = coords
            .coordinates(&d.flatten())
            .ok_or_else(|| Error::Verification(format!("{what} escapes the [1,1] component")))?;
        Ok(crate::superalg::to_sparse(&c))
    };
    let mut table = vec![Vec::new(); k * k];
    for i in 0..k {
        for j in 0..k {
            let br = LinearMap::supercommutator(&by_phi[i], &by_phi2[j])?;
            let prod = conjugate_der(&act.tau, &br)?.scale(minus);
            table[i * k + j] = locate(&prod, "product")?;
        }
    }
    let mut involution = Matrix::zeros(f, k, k);
    for (c, x) in carrier.iter().enumerate() {
        let bar = conjugate_der(&act.tau, x)?.scale(minus);
        for (r, v) in locate(&bar, "involution")? {
            involution.set(r, c, v);
        }
    }
    let m = jv.m();
    let algebra = SuperAlgebra::new(f, m, m, labels, |i, j| table[i * k + j].clone(), None, None)?;
    Ok(CoordinateAlgebra {
        carrier,
        algebra,
        involution,
        coords,
    })
}

/// `Phi: K -> (Der(J)^[1,1], .)`, `f + g y -> D(v1, f v2) + i D(v3, g y)`,
/// as a matrix from `K`-coordinates to carrier coordinates. Verified to be
/// a bijective homomorphism.
pub fn phi_iso(k: &Kantor, c: &CoordinateAlgebra) -> Result<LinearMap> {
    let f = k.algebra.field();
    let i = f.sqrt_minus_one()?;
    let m = k.m();
    if c.dim() != 2 * m {
        return Err(Error::DimensionMismatch {
            expected: 2 * m,
            got: c.dim(),
        });
    }
    let mut mat = Matrix::zeros(f, 2 * m, 2 * m);
    for a in 0..m {
        mat.set(a, k.z(a), f.one());
        mat.set(m + a, k.zx(a), i);
    }
    let map = LinearMap::new(mat, Parity::Even);
    let v = SuperAlgebra::is_homomorphism(&k.algebra, &c.algebra, &map);
    if !v.holds {
        return Err(Error::Verification(format!("Phi is not a homomorphism: {v:?}")));
    }
    if map.matrix.rank() != 2 * m {
        return Err(Error::Verification("Phi is not bijective".into()));
    }
    Ok(map)
}

/// The structure constants of `c` transported to `K`'s basis along `phi`.
pub fn pullback(k: &Kantor, c: &CoordinateAlgebra, phi: &LinearMap) -> Result<SuperAlgebra> {
    let inv = phi.matrix.inverse()?;
    let a = &c.algebra;
    let n = a.dim();
    let cols: Vec<Vec<Scalar>> = (0..n).map(|j| phi.image_of_basis(j)).collect();
    SuperAlgebra::new(
        a.field(),
        k.algebra.dim_even(),
        k.algebra.dim_odd(),
        k.algebra.labels().to_vec(),
        |i, j| {
            let prod = a.multiply(&cols[i], &cols[j]).expect("sizes agree");
            crate::superalg::to_sparse(&inv.mul_vec(&prod).expect("sizes agree"))
        },
        k.algebra.unit(),
        None,
    )
}

/// `d -> (z -> Phi^-1 [d, Phi(z)])`, a map from derivations of `J` that
/// normalize the `[1,1]` component to endomorphisms of `K`.
pub fn phi_star(c: &CoordinateAlgebra, phi: &LinearMap, d: &LinearMap) -> Result<LinearMap> {
    let inv = phi.matrix.inverse()?;
    let f = c.algebra.field();
    let n = c.dim();
    let mut mat = Matrix::zeros(f, n, n);
    for z in 0..n {
        let image = c.derivation(&phi.image_of_basis(z));
        let br = LinearMap::supercommutator(d, &image)?;
        let coords = c
            .coordinates(&br)
            .ok_or_else(|| Error::Verification(format!("[d, Phi(e{z})] leaves the [1,1] component")))?;
        for (r, v) in column_sparse(&Matrix::from_columns(f, n, &[inv.mul_vec(&coords)?]), 0) {
            mat.set(r, z, v);
        }
    }
    Ok(LinearMap::new(mat, d.parity))
}

/// `Phi*` on a whole space, returning the images of `space.basis()`.
pub fn phi_star_images(c: &CoordinateAlgebra, phi: &LinearMap, space: &DerivationSpace) -> Result<Vec<LinearMap>> {
    space.basis().iter().map(|d| phi_star(c, phi, d)).collect()
}

/// Lie superalgebra homomorphism check for `Phi*` on the basis of `space`:
/// `Phi*([a, b]) = [Phi* a, Phi* b]`. Witness: pair of basis indices.
pub fn check_phi_star_bracket(c: &CoordinateAlgebra, phi: &LinearMap, space: &DerivationSpace) -> Result<Verdict> {
    let basis = space.basis();
    let images = phi_star_images(c, phi, space)?;
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let br = LinearMap::supercommutator(&basis[i], &basis[j])?;
            let lhs = phi_star(c, phi, &br)?;
            let rhs = LinearMap::supercommutator(&images[i], &images[j])?;
            if lhs.matrix != rhs.matrix {
                return Ok(Verdict::fail(vec![i, j], "Phi* does not preserve the bracket"));
            }
        }
    }
    Ok(Verdict::pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cheng_kac, truncated_poly};
    use crate::derivations::{derivation_algebra, derivation_component};
    use crate::field::FieldSpec;

    fn jv(p: u32) -> ChengKac {
        let f = FieldSpec::with_sqrt_minus_one(p).unwrap();
        cheng_kac(&truncated_poly(f, p).unwrap(), JBasis::V).unwrap()
    }

    #[test]
    fn generators_and_order() {
        let j = jv(5);
        let act = build_s4(&j).unwrap();
        assert_eq!(act.order(), 24);
        let id = Matrix::identity(j.field(), j.algebra.dim());
        let phi3 = act.phi.compose(&act.phi).unwrap().compose(&act.phi).unwrap();
        assert_eq!(phi3.matrix, id);
        assert_eq!(
            act.tau1.compose(&act.tau2).unwrap(),
            act.tau2.compose(&act.tau1).unwrap()
        );
        assert!(act.check_coxeter().unwrap().holds);
        for g in &act.elements {
            assert!(j.algebra.is_automorphism(g).holds);
        }
    }

    #[test]
    fn s4_needs_the_v_basis() {
        let f = FieldSpec::prime(5).unwrap();
        let jw = cheng_kac(&truncated_poly(f, 5).unwrap(), JBasis::W).unwrap();
        assert!(build_s4(&jw).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let j = jv(3);
        let act = build_s4(&j).unwrap();
        let u = j.diff.unit();
        for k in 0..j.m() {
            let d = j.algebra.inner_derivation_basis(j.even(1, u), j.even(2, k));
            let id = LinearMap::identity(j.field(), j.algebra.dim());
            assert_eq!(conjugate_der(&id, &d).unwrap(), d);
            let swapped = j.algebra.inner_derivation_basis(j.even(2, u), j.even(1, k));
            let minus = j.field().neg(j.field().one());
            assert_eq!(conjugate_der(&act.tau, &d).unwrap(), swapped);
            assert_eq!(swapped, d.scale(minus));
        }
        let comp = derivation_component(&j.algebra, [0, 0]).unwrap();
        for g in &act.elements {
            for d in comp.basis() {
                assert_eq!(conjugate_der(g, &d).unwrap(), d);
            }
        }
    }

    #[test]
    fn coordinate_algebra_matches_k() {
        let j = jv(5);
        let f = j.field();
        let act = build_s4(&j).unwrap();
        let der = derivation_algebra(&j.algebra);
        let c = coordinate_algebra(&j, &der, &act).unwrap();
        assert!(c.check_involution_trivial().holds);
        assert!(c.algebra.check_supercommutative().holds);
        let k = j.kantor();
        let phi = phi_iso(&k, &c).unwrap();
        assert_eq!(pullback(&k, &c, &phi).unwrap(), k.algebra);
        // Phi(1) = D(v1, v2), Phi(y) = i D(v3, y)
        let u = j.diff.unit();
        let one = c.derivation(&phi.image_of_basis(k.z(u)));
        assert_eq!(one, j.algebra.inner_derivation_basis(j.even(1, u), j.even(2, u)));
        let y = c.derivation(&phi.image_of_basis(k.x()));
        let i = f.sqrt_minus_one().unwrap();
        assert_eq!(y, j.algebra.inner_derivation_basis(j.even(3, u), j.odd(0, u)).scale(i));
        assert!(c.is_unit(&phi.image_of_basis(k.z(u))));
    }
}
