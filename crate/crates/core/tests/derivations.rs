use ckder_core::constructions::{cheng_kac, truncated_poly, ChengKac, JBasis};
use ckder_core::derivations::*;
use ckder_core::{FieldSpec, LinearMap, Parity, Scalar, Subspace};

fn jck(p: u32) -> ChengKac {
    let f = FieldSpec::prime(p).unwrap();
    cheng_kac(&truncated_poly(f, p).unwrap(), JBasis::W).unwrap()
}

fn e(j: &ChengKac, i: usize) -> Vec<Scalar> {
    j.algebra.basis_vector(i)
}

fn span(j: &ChengKac, pairs: Vec<(usize, usize)>) -> DerivationSpace {
    span_of_inner(&j.algebra, pairs.into_iter().map(|(a, b)| (e(j, a), e(j, b)))).unwrap()
}

struct Named {
    d_x_zx: DerivationSpace,
    d_z_zx: DerivationSpace,
    d_wi_zwj: [DerivationSpace; 3],
    d_wi_zx: [DerivationSpace; 3],
    tilde: DerivationSpace,
}

fn named(j: &ChengKac) -> Named {
    let m = j.m();
    let u = j.diff.unit();
    let kan = j.kantor();
    let der_k = derivation_algebra(&kan.algebra);
    let tilde = DerivationSpace::span(
        &j.algebra,
        der_k
            .even_basis()
            .into_iter()
            .map(|d| named_der_j(j, &JDerivation::TildePartial(d)).unwrap()),
    )
    .unwrap();
    Named {
        d_x_zx: span(j, (0..m).map(|k| (j.odd(0, u), j.odd(0, k))).collect()),
        d_z_zx: span(
            j,
            (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).map(|(a, b)| (j.even(0, a), j.odd(0, b))).collect(),
        ),
        d_wi_zwj: [1, 2, 3].map(|i| {
            let next = i % 3 + 1;
            span(j, (0..m).map(|k| (j.even(i, u), j.even(next, k))).collect())
        }),
        d_wi_zx: [1, 2, 3].map(|i| span(j, (0..m).map(|k| (j.even(i, u), j.odd(0, k))).collect())),
        tilde,
    }
}

fn check_structure(p: u32) {
    let j = jck(p);
    let p = p as usize;
    let der = derivation_algebra(&j.algebra);
    let inder = inner_derivation_algebra(&j.algebra);
    assert!(der.check_derivations().holds);

    // dimension counts
    assert_eq!(inder.dims(), (4 * p, 4 * p));
    assert_eq!(inder.dim(), 8 * p);
    assert_eq!(der.dims().1, 4 * p);
    // truncated Z: every derivation is inner
    assert_eq!(der, inder);

    let n = named(&j);
    let comps = grade_der(&der).unwrap();
    let evens: Vec<&Subspace> = comps.iter().map(DerivationSpace::even).collect();
    let odds: Vec<&Subspace> = comps.iter().map(DerivationSpace::odd).collect();

    // even components: tilde-extensions, then D(w2, Zw3), D(w3, Zw1), D(w1, Zw2)
    assert_eq!(evens[0], n.tilde.even());
    assert_eq!(evens[1], n.d_wi_zwj[1].even());
    assert_eq!(evens[2], n.d_wi_zwj[2].even());
    assert_eq!(evens[3], n.d_wi_zwj[0].even());
    // odd components: D(Z, Zx), D(w1, Zx), D(w2, Zx), D(w3, Zx)
    assert_eq!(odds[0], n.d_z_zx.odd());
    for i in 0..3 {
        assert_eq!(odds[i + 1], n.d_wi_zx[i].odd());
    }
    for c in &comps {
        assert_eq!(c.dims(), (p, p));
    }

    // inner part of the [0,0] even component is D(x, Zx)
    let inder_comps = grade_der(&inder).unwrap();
    assert_eq!(inder_comps[0].even(), n.d_x_zx.even());

    // D(J0, J0) is the direct sum of the three D(w_i, Z w_{i+1})
    let m = j.m();
    let even_idx: Vec<usize> = (0..4 * m).collect();
    let d_j0_j0 = span(
        &j,
        even_idx.iter().flat_map(|&a| even_idx.iter().map(move |&b| (a, b))).collect(),
    );
    let parts: Vec<&DerivationSpace> = n.d_wi_zwj.iter().collect();
    assert!(DerivationSpace::is_direct_sum_of(&parts).unwrap());
    let sum = parts.iter().skip(1).fold(parts[0].clone(), |acc, s| acc.sum(s).unwrap());
    assert_eq!(sum, d_j0_j0);

    // Der(J)_0 = D(J0, J0) + tilde-extensions, Inder(J)_0 = D(J0, J0) + D(x, Zx)
    assert!(d_j0_j0.is_direct_sum(&n.tilde));
    assert_eq!(d_j0_j0.sum(&n.tilde).unwrap().even(), der.even());
    assert!(d_j0_j0.is_direct_sum(&n.d_x_zx));
    assert_eq!(d_j0_j0.sum(&n.d_x_zx).unwrap().even(), inder.even());

    // D(Z, Z x_i) = 0
    for fam in 1..4 {
        let s = span(
            &j,
            (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).map(|(a, b)| (j.even(0, a), j.odd(fam, b))).collect(),
        );
        assert_eq!(s.dim(), 0, "family {fam}");
    }

    // Inder(J)_1 = D(J0, x) + F D(t, t^{p-1} x), direct
    let d_j0_x = span(&j, even_idx.iter().map(|&a| (a, j.odd(0, j.diff.unit()))).collect());
    let extra = span(&j, vec![(j.even(0, 1), j.odd(0, p - 1))]);
    assert_eq!(extra.dim(), 1);
    assert!(d_j0_x.is_direct_sum(&extra));
    assert_eq!(d_j0_x.sum(&extra).unwrap().odd(), inder.odd());
}

trait DirectSum {
    fn is_direct_sum(&self, other: &DerivationSpace) -> bool;
}

impl DirectSum for DerivationSpace {
    fn is_direct_sum(&self, other: &DerivationSpace) -> bool {
        DerivationSpace::is_direct_sum_of(&[self, other]).unwrap()
    }
}

#[test]
fn graded_structure_of_der_p3() {
    check_structure(3);
}

#[test]
fn graded_structure_of_der_p5() {
    check_structure(5);
}

#[test]
fn restriction_of_the_trivial_component_onto_bar_der_k() {
    for p in [3, 5] {
        let j = jck(p);
        let kan = j.kantor();
        let comp = derivation_component(&j.algebra, [0, 0]).unwrap();
        let restricted = DerivationSpace::span(
            &kan.algebra,
            comp.basis().iter().map(|d| restrict_to_k(&j, d).unwrap()),
        )
        .unwrap();
        assert_eq!(restricted.dim(), comp.dim(), "injective, p = {p}");
        assert_eq!(restricted, bar_der_k(&kan), "p = {p}");
    }
}

#[test]
fn inner_derivations_of_k() {
    let j = jck(5);
    let kan = j.kantor();
    let diff = &kan.diff;
    let f = diff.field();
    let m = kan.m();
    // mu -> check-mu hits exactly Der(K)_0
    let der_k = derivation_algebra(&kan.algebra);
    let lifted = DerivationSpace::span(
        &kan.algebra,
        z_delta_maps(diff)
            .into_iter()
            .map(|mu| named_der_k(&kan, &KDerivation::CheckMu(mu)).unwrap()),
    )
    .unwrap();
    assert_eq!(lifted.even(), der_k.even());

    // D(fx, gx) restricted to Z is -2 f g delta
    let minus_two = f.from_i64(-2);
    for a in 0..m {
        for b in 0..m {
            let d = kan
                .algebra
                .inner_derivation_basis(kan.zx(a), kan.zx(b));
            let fg = ckder_core::superalg::to_sparse(
                &kan.algebra.multiply(&kan.algebra.basis_vector(a), &kan.algebra.basis_vector(b)).unwrap(),
            );
            let mut want = LinearMap::zero(f, m, Parity::Even);
            for (s, c) in fg {
                want = want.add(&z_delta_maps(diff)[s].scale(f.mul(c, minus_two)));
            }
            for col in 0..m {
                for row in 0..m {
                    assert_eq!(d.matrix.get(row, col), want.matrix.get(row, col));
                }
                for row in m..2 * m {
                    assert!(d.matrix.get(row, col).is_zero());
                }
            }
        }
    }

    // Inder(K)_1 = {eta_a} and tilde-eta lands in Inder(J)
    let inder_k = inner_derivation_algebra(&kan.algebra);
    let etas = DerivationSpace::span(
        &kan.algebra,
        (0..m).map(|s| named_der_k(&kan, &KDerivation::Eta(z_element(f, m, &[(s, 1)]))).unwrap()),
    )
    .unwrap();
    assert_eq!(etas.odd(), inder_k.odd());
    let inder_j = inner_derivation_algebra(&j.algebra);
    for s in 0..m {
        let a = z_element(f, m, &[(s, 1)]);
        let te = named_der_j(&j, &JDerivation::TildeEta(a.clone())).unwrap();
        assert!(inder_j.contains(&te));
        assert_eq!(
            restrict_to_k(&j, &te).unwrap(),
            named_der_k(&kan, &KDerivation::Eta(a)).unwrap()
        );
    }
}

#[test]
fn v_basis_has_the_same_dimensions() {
    let f = FieldSpec::with_sqrt_minus_one(3).unwrap();
    let j = cheng_kac(&truncated_poly(f, 3).unwrap(), JBasis::V).unwrap();
    let der = derivation_algebra(&j.algebra);
    assert_eq!(der.dims(), (12, 12));
    for c in grade_der(&der).unwrap() {
        assert_eq!(c.dims(), (3, 3));
    }
}

#[test]
fn mu_minus_maps_in_characteristic_3() {
    let f = FieldSpec::prime(3).unwrap();
    let kan = ckder_core::constructions::kantor_double(&truncated_poly(f, 3).unwrap());
    let zd = z_delta_maps(&kan.diff);
    // only mu = delta commutes with delta; t delta and t^2 delta give non-derivations
    let verdicts: Vec<bool> = zd
        .iter()
        .map(|mu| kan.algebra.is_derivation(&mu_minus_map(&kan, mu).unwrap()).holds)
        .collect();
    assert_eq!(verdicts, vec![true, false, false]);
    assert_eq!(
        mu_minus_map(&kan, &zd[0]).unwrap(),
        named_der_k(&kan, &KDerivation::MuMinus(zd[0].clone())).unwrap()
    );
}
