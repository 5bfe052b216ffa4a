//! Exact arithmetic in `F_p` and in `F_p[u]/(u^2 + 1)`.
//!
//! Scalars are plain pairs of residues; every operation goes through the
//! [`FieldSpec`] that owns the modulus, so values stay `Copy` and cheap to
//! store in structure-constant tables.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An odd prime field, optionally extended by a square root of `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub ext: bool,
}

/// `a0 + a1*u`, with `u^2 = -1`. `a1` is zero outside the extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar {
    pub a0: u32,
    pub a1: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn new(p: u32, ext: bool) -> Result<Self> {
        if p < 3 || !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        if ext && p % 4 == 1 {
            return Err(Error::InvalidField(format!(
                "-1 is already a square mod {p}; the extension is not a field"
            )));
        }
        Ok(FieldSpec { p, ext })
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, false)
    }

    /// The smallest field of characteristic `p` containing a square root of `-1`.
    pub fn with_sqrt_minus_one(p: u32) -> Result<Self> {
        Self::new(p, p % 4 == 3)
    }

    pub fn has_sqrt_minus_one(&self) -> bool {
        self.ext || self.p % 4 == 1
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        let p = self.p as u64;
        if self.ext {
            p * p
        } else {
            p
        }
    }

    #[inline]
    pub fn zero(&self) -> Scalar {
        Scalar { a0: 0, a1: 0 }
    }

    #[inline]
    pub fn one(&self) -> Scalar {
        Scalar { a0: 1, a1: 0 }
    }

    /// The adjoined generator `u`. Only meaningful when `ext` is set.
    pub fn gen(&self) -> Scalar {
        Scalar { a0: 0, a1: 1 }
    }

    #[inline]
    pub fn from_i64(&self, v: i64) -> Scalar {
        Scalar {
            a0: v.rem_euclid(self.p as i64) as u32,
            a1: 0,
        }
    }

    pub fn from_pair(&self, a0: i64, a1: i64) -> Scalar {
        let p = self.p as i64;
        Scalar {
            a0: a0.rem_euclid(p) as u32,
            a1: if self.ext { a1.rem_euclid(p) as u32 } else { 0 },
        }
    }

    /// Checks that a deserialized scalar is canonically reduced for this field.
    pub fn validate(&self, x: Scalar) -> Result<Scalar> {
        if x.a0 >= self.p || x.a1 >= self.p || (!self.ext && x.a1 != 0) {
            return Err(Error::InvalidField(format!(
                "scalar {x:?} is not a reduced element of {self}"
            )));
        }
        Ok(x)
    }

    #[inline]
    pub fn add(&self, x: Scalar, y: Scalar) -> Scalar {
        let p = self.p;
        let mut a0 = x.a0 + y.a0;
        if a0 >= p {
            a0 -= p;
        }
        let mut a1 = x.a1 + y.a1;
        if a1 >= p {
            a1 -= p;
        }
        Scalar { a0, a1 }
    }

    #[inline]
    pub fn neg(&self, x: Scalar) -> Scalar {
        let p = self.p;
        Scalar {
            a0: if x.a0 == 0 { 0 } else { p - x.a0 },
            a1: if x.a1 == 0 { 0 } else { p - x.a1 },
        }
    }

    #[inline]
    pub fn sub(&self, x: Scalar, y: Scalar) -> Scalar {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Scalar, y: Scalar) -> Scalar {
        let p = self.p as u64;
        if x.a1 == 0 && y.a1 == 0 {
            return Scalar {
                a0: ((x.a0 as u64 * y.a0 as u64) % p) as u32,
                a1: 0,
            };
        }
        let (x0, x1, y0, y1) = (x.a0 as u64, x.a1 as u64, y.a0 as u64, y.a1 as u64);
        // (x0 + x1 u)(y0 + y1 u) = x0 y0 - x1 y1 + (x0 y1 + x1 y0) u
        let re = (x0 * y0 + (p - (x1 * y1) % p)) % p;
        let im = (x0 * y1 + x1 * y0) % p;
        Scalar {
            a0: re as u32,
            a1: im as u32,
        }
    }

    pub fn pow(&self, x: Scalar, mut e: u64) -> Scalar {
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: Scalar) -> Result<Scalar> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p as u64;
        // Norm of a0 + a1 u is a0^2 + a1^2, an element of F_p.
        let norm = (x.a0 as u64 * x.a0 as u64 + x.a1 as u64 * x.a1 as u64) % p;
        let ninv = mod_pow(norm, p - 2, p);
        Ok(Scalar {
            a0: ((x.a0 as u64 * ninv) % p) as u32,
            a1: (((p - x.a1 as u64) % p * ninv) % p) as u32,
        })
    }

    pub fn div(&self, x: Scalar, y: Scalar) -> Result<Scalar> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Multiplies by `(-1)^k`.
    #[inline]
    pub fn signed(&self, x: Scalar, negate: bool) -> Scalar {
        if negate {
            self.neg(x)
        } else {
            x
        }
    }

    /// The canonical square root of `-1`: the smallest representative in
    /// `1..=(p-1)/2` when `p = 1 mod 4`, the generator `u` in the extension.
    pub fn sqrt_minus_one(&self) -> Result<Scalar> {
        if self.ext {
            return Ok(self.gen());
        }
        if self.p % 4 == 3 {
            return Err(Error::NoSqrtMinusOne(self.p));
        }
        let p = self.p as u64;
        (1..=(p - 1) / 2)
            .find(|&r| (r * r + 1) % p == 0)
            .map(|r| self.from_i64(r as i64))
            .ok_or(Error::NoSqrtMinusOne(self.p))
    }

    /// Every element, in lexicographic `(a1, a0)` order.
    pub fn elements(&self) -> Vec<Scalar> {
        let hi = if self.ext { self.p } else { 1 };
        (0..hi)
            .flat_map(|a1| (0..self.p).map(move |a0| Scalar { a0, a1 }))
            .collect()
    }

    pub fn fmt_scalar(&self, x: Scalar) -> String {
        if !self.ext || x.a1 == 0 {
            format!("{}", x.a0)
        } else if x.a0 == 0 {
            format!("{}u", x.a1)
        } else {
            format!("{}+{}u", x.a0, x.a1)
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ext {
            write!(f, "F{}[u]/(u^2+1)", self.p)
        } else {
            write!(f, "F{}", self.p)
        }
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl Scalar {
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.a0 == 0 && self.a1 == 0
    }
}

// JSON form: `[a0]`, or `[a0, a1]` when the imaginary part is nonzero.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.a1 == 0 {
            [self.a0].serialize(s)
        } else {
            [self.a0, self.a1].serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<u32> = Vec::deserialize(d)?;
        match v.as_slice() {
            [a0] => Ok(Scalar { a0: *a0, a1: 0 }),
            [a0, a1] => Ok(Scalar { a0: *a0, a1: *a1 }),
            _ => Err(serde::de::Error::custom("scalar must be [a0] or [a0, a1]")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn spec_validation() {
        assert!(FieldSpec::new(2, false).is_err());
        assert!(FieldSpec::new(9, false).is_err());
        assert!(FieldSpec::new(5, true).is_err());
        assert!(FieldSpec::new(3, true).is_ok());
        assert!(FieldSpec::new(13, false).is_ok());
    }

    #[test]
    fn small_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.inv(f5.from_i64(2)).unwrap(), f5.from_i64(3));

        let f9 = FieldSpec::new(3, true).unwrap();
        assert_eq!(f9.inv(f9.gen()).unwrap(), f9.from_pair(0, 2));

        let f13 = FieldSpec::prime(13).unwrap();
        assert_eq!(f13.mul(f13.from_i64(5), f13.from_i64(5)), f13.from_i64(12));
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let f = FieldSpec::prime(7).unwrap();
        assert!(matches!(f.inv(f.zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn canonical_sqrt_minus_one() {
        assert_eq!(FieldSpec::prime(5).unwrap().sqrt_minus_one().unwrap().a0, 2);
        assert_eq!(FieldSpec::prime(13).unwrap().sqrt_minus_one().unwrap().a0, 5);
        let f9 = FieldSpec::new(3, true).unwrap();
        assert_eq!(f9.sqrt_minus_one().unwrap(), f9.gen());
        assert!(matches!(
            FieldSpec::prime(7).unwrap().sqrt_minus_one(),
            Err(Error::NoSqrtMinusOne(7))
        ));
        for p in [5, 13, 17, 29] {
            let f = FieldSpec::prime(p).unwrap();
            let i = f.sqrt_minus_one().unwrap();
            assert_eq!(f.add(f.mul(i, i), f.one()), f.zero());
        }
        for p in [3, 7, 11] {
            let f = FieldSpec::new(p, true).unwrap();
            let i = f.sqrt_minus_one().unwrap();
            assert_eq!(f.add(f.mul(i, i), f.one()), f.zero());
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        let specs = [(3, false), (5, false), (7, false), (3, true), (7, true)];
        for (p, ext) in specs {
            let f = FieldSpec::new(p, ext).unwrap();
            let els = f.elements();
            assert_eq!(els.len() as u64, f.order());
            for &x in &els {
                assert_eq!(f.add(x, f.neg(x)), f.zero());
                if !x.is_zero() {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
                }
                for &y in &els {
                    assert_eq!(f.add(x, y), f.add(y, x));
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    assert_eq!(f.sub(f.add(x, y), y), x);
                    for &z in els.iter().step_by(3) {
                        assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                        assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn json_forms() {
        let s = serde_json::to_string(&FieldSpec { p: 3, ext: true }).unwrap();
        assert_eq!(s, r#"{"p":3,"ext":true}"#);
        assert_eq!(serde_json::to_string(&Scalar { a0: 4, a1: 0 }).unwrap(), "[4]");
        assert_eq!(serde_json::to_string(&Scalar { a0: 0, a1: 2 }).unwrap(), "[0,2]");
        let back: Scalar = serde_json::from_str("[1,2]").unwrap();
        assert_eq!(back, Scalar { a0: 1, a1: 2 });
    }

    proptest! {
        #[test]
        fn inverse_roundtrip_large_prime(a in 1u32..2_147_483_647) {
            let f = FieldSpec { p: 2_147_483_647, ext: false };
            let x = Scalar { a0: a, a1: 0 };
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
        }

        #[test]
        fn extension_inverse(a0 in 0u32..11, a1 in 0u32..11) {
            let f = FieldSpec::new(11, true).unwrap();
            let x = Scalar { a0, a1 };
            prop_assume!(!x.is_zero());
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
        }
    }
}
