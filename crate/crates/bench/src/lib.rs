//! Fixtures shared by the benchmarks in `benches/`.

use ckder_core::constructions::{cheng_kac, truncated_poly, ChengKac, JBasis};
use ckder_core::FieldSpec;

/// JCK(Z, d) over F_p in the `w` basis.
pub fn jck_w(p: u32) -> ChengKac {
    let f = FieldSpec::prime(p).expect("prime");
    cheng_kac(&truncated_poly(f, p).expect("truncated"), JBasis::W).expect("jck")
}

/// JCK(Z, d) over the field containing a square root of -1, in the `v` basis.
pub fn jck_v(p: u32) -> ChengKac {
    let f = FieldSpec::with_sqrt_minus_one(p).expect("split field");
    cheng_kac(&truncated_poly(f, p).expect("truncated"), JBasis::V).expect("jck")
}
