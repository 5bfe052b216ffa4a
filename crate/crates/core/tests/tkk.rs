use ckder_core::constructions::{cheng_kac, kantor_double, truncated_poly, ChengKac, JBasis};
use ckder_core::derivations::*;
use ckder_core::symmetry::*;
use ckder_core::tkk::*;
use ckder_core::{FieldSpec, LinearMap, Matrix, Parity, Scalar};

fn jv(p: u32) -> ChengKac {
    let f = FieldSpec::with_sqrt_minus_one(p).unwrap();
    cheng_kac(&truncated_poly(f, p).unwrap(), JBasis::V).unwrap()
}

/// Dense super Jacobi residual over all basis triples, written without the
/// sparse accumulators of the library.
fn jacobi_failures(l: &LieSuperAlgebra) -> usize {
    let f = l.field();
    let n = l.dim();
    let (ne, _) = l.dims();
    let odd = |i: usize| i >= ne;
    let br = |u: &[Scalar], v: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![f.zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                for &(k, c) in l.bracket_basis(i, j) {
                    out[k] = f.add(out[k], f.mul(c, f.mul(u[i], v[j])));
                }
            }
        }
        out
    };
    let e = |i: usize| {
        let mut v = vec![f.zero(); n];
        v[i] = f.one();
        v
    };
    let mut bad = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = br(&e(a), &br(&e(b), &e(c)));
                let r1 = br(&br(&e(a), &e(b)), &e(c));
                let r2 = br(&e(b), &br(&e(a), &e(c)));
                let s = if odd(a) && odd(b) { f.neg(f.one()) } else { f.one() };
                if (0..n).any(|k| lhs[k] != f.add(r1[k], f.mul(s, r2[k]))) {
                    bad += 1;
                }
            }
        }
    }
    bad
}

#[test]
fn library_jacobi_agrees_with_dense_oracle() {
    let f = FieldSpec::prime(3).unwrap();
    let k = kantor_double(&truncated_poly(f, 3).unwrap());
    let t = tits_construction(&k.algebra, &inner_derivation_algebra(&k.algebra)).unwrap();
    assert_eq!(jacobi_failures(&t.lie), 0);
    assert!(t.lie.check_super_lie().holds);

    // halving the trace term breaks the identity and both checkers notice
    let a = t.lie.table();
    let (i, j) = (t.tensor(0, k.x()), t.tensor(0, k.x()));
    let halved: Vec<(usize, Scalar)> = a.mul_basis(i, j).iter().map(|&(r, c)| (r, f.mul(c, f.from_i64(2)))).collect();
    assert!(!halved.is_empty());
    let broken = LieSuperAlgebra::new(a.with_product(i, j, halved), None).unwrap();
    assert!(jacobi_failures(&broken) > 0);
    assert!(!broken.check_super_lie().holds);
}

#[test]
fn tits_dimensions() {
    let f = FieldSpec::prime(5).unwrap();
    let k = kantor_double(&truncated_poly(f, 5).unwrap());
    let t = tits_construction(&k.algebra, &inner_derivation_algebra(&k.algebra)).unwrap();
    assert_eq!(t.lie.dim(), 3 * 10 + 10);

    let f = FieldSpec::prime(3).unwrap();
    let k = kantor_double(&truncated_poly(f, 3).unwrap());
    let bar = bar_der_k(&k);
    assert_eq!(bar.dims(), (3, 3));
    let t = tits_construction(&k.algebra, &bar).unwrap();
    assert_eq!(t.lie.dim(), 24);
    assert!(t.lie.check_super_lie().holds);
}

#[test]
fn cheng_kac_lie_superalgebra_p3() {
    let j = jv(3);
    let kj = tkk_3graded(&j.algebra).unwrap();
    assert_eq!(kj.lie.dim(), 96);
    assert_eq!(kj.lie.dims(), (48, 48));
    assert_eq!(tkk_3graded_dims(&j.algebra).unwrap(), (48, 48));
    assert!(kj.lie.check_super_lie().holds);
    assert!(kj.lie.check_grading().holds);
    let x = j.odd(0, j.diff.unit());
    assert!(kj.lie.bracket_basis(kj.plus(x), kj.plus(x)).is_empty());

    let tj = tits_construction(&j.algebra, &inner_derivation_algebra(&j.algebra)).unwrap();
    assert_eq!(tj.lie.dim(), 96);
    assert!(tj.lie.check_super_lie().holds);

    let iso = sl2_identification(&tj, &kj).unwrap();
    assert!(iso.verified.holds);
    // d -> d
    for d in 0..tj.d.dim() {
        let col = iso.map.image_of_basis(tj.der(d));
        let mut want = vec![j.field().zero(); kj.lie.dim()];
        want[kj.der(d)] = j.field().one();
        assert_eq!(col, want);
    }

    // a column swap is detected
    let mut m = iso.map.matrix.clone();
    let (a, b) = (tj.tensor(0, 0), tj.tensor(1, 0));
    for r in 0..m.rows() {
        let (u, v) = (m.get(r, a), m.get(r, b));
        m.set(r, a, v);
        m.set(r, b, u);
    }
    assert!(!verify_iso(&tj.lie, &kj.lie, &LinearMap::new(m, Parity::Even)).holds);
}

#[test]
fn half_h_acts_as_left_multiplication() {
    // [h/2 (x) a, e (x) b] = e (x) ab, matching [L_a, b_1] = (ab)_1
    let f = FieldSpec::with_sqrt_minus_one(3).unwrap();
    let k = kantor_double(&truncated_poly(f, 3).unwrap());
    let t = tits_construction(&k.algebra, &inner_derivation_algebra(&k.algebra)).unwrap();
    let kk = tkk_3graded(&k.algebra).unwrap();
    let iso = sl2_identification(&t, &kk).unwrap();
    let tr = sl2_triple(f).unwrap();
    let half = f.inv(f.from_i64(2)).unwrap();
    let n = k.algebra.dim();
    let tensor = |coef: &[Scalar; 3], x: usize, scale: Scalar| {
        let mut v = vec![f.zero(); t.lie.dim()];
        for a in 0..3 {
            v[t.tensor(a, x)] = f.mul(coef[a], scale);
        }
        v
    };
    for a in 0..n {
        for b in 0..n {
            let h_a = tensor(&tr.h, a, half);
            let e_b = tensor(&tr.e, b, f.one());
            let image = iso.map.apply(&t.lie.bracket(&h_a, &e_b).unwrap()).unwrap();
            let mut want = vec![f.zero(); kk.lie.dim()];
            for &(r, c) in k.algebra.mul_basis(a, b) {
                want[kk.plus(r)] = c;
            }
            assert_eq!(image, want);
            let mut l_a = vec![f.zero(); kk.lie.dim()];
            l_a[kk.left(a)] = f.one();
            let mut b1 = vec![f.zero(); kk.lie.dim()];
            b1[kk.plus(b)] = f.one();
            assert_eq!(kk.lie.bracket(&l_a, &b1).unwrap(), want);
        }
    }
}

fn setup(p: u32) -> (ChengKac, S4Action, CoordinateAlgebra, LinearMap) {
    let j = jv(p);
    let act = build_s4(&j).unwrap();
    let c = coordinate_algebra(&j, &derivation_algebra(&j.algebra), &act).unwrap();
    let phi = phi_iso(&j.kantor(), &c).unwrap();
    (j, act, c, phi)
}

#[test]
fn derivations_as_tits_superalgebras() {
    for p in [3, 5] {
        let (j, act, c, phi) = setup(p);
        let r = der_as_tkk(&j, &act, &c, &phi).unwrap();
        let p = p as usize;
        assert_eq!(r.tits_der.lie.dim(), 8 * p);
        assert_eq!(r.der_j.dim(), 8 * p);
        assert_eq!(r.tits_inner.lie.dim(), 8 * p);
        assert!(r.der_iso.verified.holds);
        assert!(r.inder_iso.verified.holds);
        assert!(r.tits_der.lie.check_super_lie().holds);
        assert!(r.der_j.check_super_lie().holds);
    }
}

#[test]
fn iota_identities() {
    let (j, act, c, phi) = setup(5);
    let k = j.kantor();
    let f = j.field();
    let u = j.diff.unit();
    let n = k.algebra.dim();
    let io = |a: usize, z: usize| iota(&act, &c, &phi, a, z).unwrap();
    // iota_3(f) = D(v1, f v2)
    for a in 0..k.m() {
        assert_eq!(io(2, k.z(a)), j.algebra.inner_derivation_basis(j.even(1, u), j.even(2, a)));
    }
    let combo = |a: usize, v: &[Scalar]| {
        let mut out = LinearMap::zero(f, j.algebra.dim(), Parity::Even);
        let mut any = false;
        for (z, &c) in v.iter().enumerate() {
            if !c.is_zero() {
                let t = io(a, z).scale(c);
                out = if any { out.add(&t) } else { t };
                any = true;
            }
        }
        out
    };
    for z in 0..n {
        for w in 0..n {
            let zw = k.algebra.multiply(&k.algebra.basis_vector(z), &k.algebra.basis_vector(w)).unwrap();
            for i in 0..3 {
                // iota_i(z w) = [iota_{i+1}(z), iota_{i+2}(w)]
                let lhs = LinearMap::supercommutator(&io((i + 1) % 3, z), &io((i + 2) % 3, w)).unwrap();
                assert_eq!(lhs.matrix, combo(i, &zw).matrix, "i = {i}, z = {z}, w = {w}");
            }
        }
    }
    // [[iota_i z, iota_i z'], iota_{i+1} z''] = -iota_{i+1}(D(z, z')(z''))
    for z in 0..n {
        for w in 0..n {
            let dzw = k.algebra.inner_derivation_basis(z, w);
            for v in 0..n {
                let rhs = combo(1, &dzw.image_of_basis(v)).scale(f.neg(f.one()));
                let lhs = LinearMap::supercommutator(
                    &LinearMap::supercommutator(&io(0, z), &io(0, w)).unwrap(),
                    &io(1, v),
                )
                .unwrap();
                assert_eq!(lhs.matrix, rhs.matrix);
            }
        }
    }
}

#[test]
fn wrong_iota_is_rejected() {
    let (j, act, c, phi) = setup(3);
    let r = der_as_tkk(&j, &act, &c, &phi).unwrap();
    // send E_1 (x) z where E_2 (x) z should go
    let t = &r.tits_der;
    let mut m: Matrix = r.der_iso.map.matrix.clone();
    for z in 0..j.kantor().algebra.dim() {
        let (a, b) = (t.tensor(0, z), t.tensor(1, z));
        for row in 0..m.rows() {
            let (x, y) = (m.get(row, a), m.get(row, b));
            m.set(row, a, y);
            m.set(row, b, x);
        }
    }
    assert!(!verify_iso(&t.lie, &r.der_j, &LinearMap::new(m, Parity::Even)).holds);
}
