use std::sync::OnceLock;

use proptest::prelude::*;

use ckder_core::constructions::{cheng_kac, kantor_double, truncated_poly, ChengKac, JBasis};
use ckder_core::derivations::{derivation_algebra, inner_derivation_algebra};
use ckder_core::tkk::{tkk_3graded, LieJson, LieSuperAlgebra};
use ckder_core::{DerivationSpace, FieldSpec, LinearMap, Parity, Scalar, SuperAlgebra};

struct Fixture {
    j: ChengKac,
    der: DerivationSpace,
    lie: LieSuperAlgebra,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let f = FieldSpec::prime(3).unwrap();
        let diff = truncated_poly(f, 3).unwrap();
        let j = cheng_kac(&diff, JBasis::W).unwrap();
        let der = derivation_algebra(&j.algebra);
        let lie = tkk_3graded(&kantor_double(&diff).algebra).unwrap().lie;
        Fixture { j, der, lie }
    })
}

fn combo(f: FieldSpec, maps: &[LinearMap], coeffs: &[i64], parity: Parity, n: usize) -> LinearMap {
    maps.iter()
        .zip(coeffs)
        .fold(LinearMap::zero(f, n, parity), |acc, (m, &c)| acc.add(&m.scale(f.from_i64(c))))
}

/// A homogeneous vector of the given parity with the given coefficients.
fn homogeneous(a: &SuperAlgebra, odd: bool, coeffs: &[i64]) -> Vec<Scalar> {
    let f = a.field();
    let (ne, no) = (a.dim_even(), a.dim_odd());
    let mut v = vec![f.zero(); a.dim()];
    let range = if odd { ne..ne + no } else { 0..ne };
    for (i, c) in range.zip(coeffs.iter().cycle()) {
        v[i] = f.from_i64(*c);
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn combinations_of_derivations_are_derivations(
        odd in any::<bool>(),
        coeffs in prop::collection::vec(-1i64..=1, 24),
    ) {
        let fx = fixture();
        let f = fx.j.field();
        let (basis, parity) = if odd {
            (fx.der.odd_basis(), Parity::Odd)
        } else {
            (fx.der.even_basis(), Parity::Even)
        };
        let d = combo(f, &basis, &coeffs, parity, fx.j.algebra.dim());
        prop_assert!(fx.j.algebra.is_derivation(&d).holds);
        prop_assert!(fx.der.contains(&d));
    }

    #[test]
    fn derivations_close_under_supercommutator(
        (pa, pb) in (any::<bool>(), any::<bool>()),
        ca in prop::collection::vec(-1i64..=1, 24),
        cb in prop::collection::vec(-1i64..=1, 24),
    ) {
        let fx = fixture();
        let f = fx.j.field();
        let n = fx.j.algebra.dim();
        let pick = |odd: bool, c: &[i64]| if odd {
            combo(f, &fx.der.odd_basis(), c, Parity::Odd, n)
        } else {
            combo(f, &fx.der.even_basis(), c, Parity::Even, n)
        };
        let br = LinearMap::supercommutator(&pick(pa, &ca), &pick(pb, &cb)).unwrap();
        prop_assert!(fx.j.algebra.is_derivation(&br).holds);
    }

    #[test]
    fn lie_bracket_is_super_anticommutative(
        (pu, pv) in (any::<bool>(), any::<bool>()),
        cu in prop::collection::vec(-1i64..=1, 5),
        cv in prop::collection::vec(-1i64..=1, 7),
    ) {
        let l = &fixture().lie;
        let f = l.field();
        let u = homogeneous(l.table(), pu, &cu);
        let v = homogeneous(l.table(), pv, &cv);
        let uv = l.bracket(&u, &v).unwrap();
        let vu = l.bracket(&v, &u).unwrap();
        let sign = if pu && pv { f.one() } else { f.neg(f.one()) };
        let flipped: Vec<Scalar> = vu.iter().map(|&x| f.mul(sign, x)).collect();
        prop_assert_eq!(uv, flipped);
    }

    #[test]
    fn jordan_product_is_supercommutative(
        (pu, pv) in (any::<bool>(), any::<bool>()),
        cu in prop::collection::vec(-1i64..=1, 5),
        cv in prop::collection::vec(-1i64..=1, 3),
    ) {
        let a = &fixture().j.algebra;
        let f = a.field();
        let u = homogeneous(a, pu, &cu);
        let v = homogeneous(a, pv, &cv);
        let sign = if pu && pv { f.neg(f.one()) } else { f.one() };
        let vu: Vec<Scalar> = a.multiply(&v, &u).unwrap().iter().map(|&x| f.mul(sign, x)).collect();
        prop_assert_eq!(a.multiply(&u, &v).unwrap(), vu);
    }

    #[test]
    fn algebra_json_round_trips(p in prop::sample::select(vec![3u32, 5, 7]), split in any::<bool>()) {
        let f = if split {
            FieldSpec::with_sqrt_minus_one(p).unwrap()
        } else {
            FieldSpec::prime(p).unwrap()
        };
        let diff = truncated_poly(f, p).unwrap();
        let j = cheng_kac(&diff, if split { JBasis::V } else { JBasis::W }).unwrap();
        let text = serde_json::to_string(&j.algebra.to_json()).unwrap();
        let back = SuperAlgebra::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(&back, &j.algebra);
        let inder = inner_derivation_algebra(&kantor_double(&diff).algebra);
        prop_assert_eq!(inder.dims(), (p as usize, p as usize));
    }
}

#[test]
fn lie_json_round_trip() {
    let l = &fixture().lie;
    let text = serde_json::to_string(&l.to_json()).unwrap();
    let parsed: LieJson = serde_json::from_str(&text).unwrap();
    assert_eq!(&LieSuperAlgebra::from_json(&parsed).unwrap(), l);
}
