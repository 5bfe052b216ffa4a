use std::path::Path;

use clap::ValueEnum;

use ckder_core::constructions::{cheng_kac, kantor_double, truncated_poly, JBasis};
use ckder_core::tkk::{so3, tkk_3graded};
use ckder_core::FieldSpec;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgebraName {
    #[value(name = "Z")]
    Z,
    #[value(name = "K")]
    K,
    #[value(name = "jck_w")]
    JckW,
    #[value(name = "jck_v")]
    JckV,
    #[value(name = "so3")]
    So3,
    #[value(name = "tkk_K")]
    TkkK,
    #[value(name = "ck_lie")]
    CkLie,
}

/// Pretty JSON for the named algebra, newline-terminated.
pub fn export_json(p: u32, which: AlgebraName) -> Result<String, CliError> {
    let base = FieldSpec::prime(p)?;
    let split = FieldSpec::with_sqrt_minus_one(p)?;
    match which {
        AlgebraName::Z => pretty(&truncated_poly(base, p)?.z.to_json()),
        AlgebraName::K => pretty(&kantor_double(&truncated_poly(base, p)?).algebra.to_json()),
        AlgebraName::JckW => pretty(&cheng_kac(&truncated_poly(base, p)?, JBasis::W)?.algebra.to_json()),
        AlgebraName::JckV => {
            pretty(&cheng_kac(&truncated_poly(split, p)?, JBasis::V)?.algebra.to_json())
        }
        AlgebraName::So3 => pretty(&so3(base)?.to_json()),
        AlgebraName::TkkK => {
            let k = kantor_double(&truncated_poly(base, p)?);
            pretty(&tkk_3graded(&k.algebra)?.lie.to_json())
        }
        AlgebraName::CkLie => {
            let j = cheng_kac(&truncated_poly(split, p)?, JBasis::V)?;
            pretty(&tkk_3graded(&j.algebra)?.lie.to_json())
        }
    }
}

fn pretty<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn export_to(p: u32, which: AlgebraName, out: &Path) -> Result<(), CliError> {
    let s = export_json(p, which)?;
    std::fs::write(out, s).map_err(|e| CliError::Io(out.display().to_string(), e))
}
