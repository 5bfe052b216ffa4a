//! Exact computations with Cheng-Kac Jordan superalgebras over finite fields.
//!
//! The crate builds structure-constant superalgebras over `F_p` or
//! `F_p[u]/(u^2+1)`, computes their derivation superalgebras by sparse exact
//! elimination, and checks the structure of `Der(JCK(Z, d))`: its `Z2^2`
//! grading, the `S4` symmetry, the coordinate superalgebra, and the
//! Tits-Kantor-Koecher descriptions.

pub mod error;
pub mod field;
pub mod linalg;
pub mod superalg;
pub mod constructions;
pub mod derivations;
pub mod symmetry;
pub mod tkk;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use linalg::{Matrix, Subspace};
pub use superalg::{LinearMap, Parity, SuperAlgebra, Verdict};
pub use derivations::DerivationSpace;
pub use symmetry::{CoordinateAlgebra, S4Action};
pub use tkk::{ExplicitIso, LieSuperAlgebra};
