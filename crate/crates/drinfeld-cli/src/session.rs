//! Curve-spec files: the JSON description of the base field and Weierstrass
//! coefficients that every subcommand consumes.

use crate::{CliResult, Failure};
use drinfeld_core::{FieldDesc, FqElem, KContext};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// On-disk curve description: `{"p":3,"r":1,"modulus":null,"a":[[0],[0],[0],[2],[2]]}`.
/// `a` lists the Weierstrass coefficients a1, a2, a3, a4, a6 as little-endian
/// digit vectors over F_p; `modulus` (when present) gives the polynomial
/// basis of F_{p^r} and may be omitted or null to use the built-in default.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSpec {
    pub p: u32,
    pub r: usize,
    #[serde(default)]
    pub modulus: Option<Vec<u32>>,
    pub a: Vec<Vec<u32>>,
}

impl CurveSpec {
    pub fn from_json(text: &str) -> CliResult<CurveSpec> {
        let spec: CurveSpec = serde_json::from_str(text)
            .map_err(|e| Failure::Usage(format!("invalid curve spec: {e}")))?;
        if spec.a.len() != 5 {
            return Err(Failure::Usage(format!(
                "invalid curve spec: \"a\" must list exactly the 5 coefficients a1, a2, a3, a4, a6 (got {})",
                spec.a.len()
            )));
        }
        Ok(spec)
    }

    pub fn load(path: &Path) -> CliResult<CurveSpec> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Failure::Usage(format!("cannot read curve spec {}: {e}", path.display()))
        })?;
        CurveSpec::from_json(&text)
    }

    pub fn field(&self) -> CliResult<FieldDesc> {
        FieldDesc::new(self.p, self.r, self.modulus.as_deref()).map_err(Failure::from)
    }

    /// Parses the five Weierstrass coefficients into the given field.
    pub fn coefficients(&self, fd: &FieldDesc) -> CliResult<[FqElem; 5]> {
        let mut coeffs: [FqElem; 5] = [fd.zero(); 5];
        for (i, digits) in self.a.iter().enumerate() {
            coeffs[i] = fd.from_digits(digits).map_err(|e| {
                Failure::Usage(format!("invalid curve spec: coefficient {}: {e}", i + 1))
            })?;
        }
        Ok(coeffs)
    }

    /// Builds the full arithmetic context; fails on singular curves.
    pub fn context(&self) -> CliResult<KContext> {
        let fd = self.field()?;
        let coeffs = self.coefficients(&fd)?;
        KContext::new(&fd, coeffs).map_err(Failure::from)
    }
}
