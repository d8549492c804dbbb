//! Resource caps guarding the exponential parts of the library.
//!
//! Defaults can be overridden through the `TRACE_RELATIONS_CAP` environment
//! variable, a comma-separated list of `key=value` pairs, for example
//! `TRACE_RELATIONS_CAP=involution_degree=9,symmetrizer_terms=500000`.

use crate::error::{invalid, Error, Result};

pub const CAP_ENV_VAR: &str = "TRACE_RELATIONS_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `d` for which all fixed-point-free involutions on `2d` points are listed.
    pub involution_degree: usize,
    /// Largest `n^d` accepted by the brute-force tensor contraction.
    pub contraction_terms: u128,
    /// Largest `|P|·|Q|` accepted when expanding a Young symmetrizer.
    pub symmetrizer_terms: u128,
    /// Largest invariant basis accepted by the Monte Carlo engine.
    pub basis_size: usize,
    /// Largest number of standard tableaux enumerated for one shape.
    pub tableaux: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            involution_degree: 8,
            contraction_terms: 100_000_000,
            // 2^4 · (4!)^2: the two-column shape for n = 3.
            symmetrizer_terms: 9_216,
            basis_size: 1_500,
            tableaux: 100_000,
        }
    }
}

impl Limits {
    /// Defaults with the environment overrides applied.
    pub fn from_env() -> Result<Self> {
        match std::env::var(CAP_ENV_VAR) {
            Ok(spec) => Limits::default().with_overrides(&spec),
            Err(_) => Ok(Limits::default()),
        }
    }

    /// Caps that admit the n = 4 symmetrizer run (460,800 terms per symmetrizer).
    pub fn allow_long(mut self) -> Self {
        self.symmetrizer_terms = self.symmetrizer_terms.max(460_800);
        self
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| invalid(format!("{CAP_ENV_VAR}: expected key=value, got {item:?}")))?;
            let value: u128 = value
                .trim()
                .parse()
                .map_err(|_| invalid(format!("{CAP_ENV_VAR}: bad number in {item:?}")))?;
            match key.trim() {
                "involution_degree" => self.involution_degree = value as usize,
                "contraction_terms" => self.contraction_terms = value,
                "symmetrizer_terms" => self.symmetrizer_terms = value,
                "basis_size" => self.basis_size = value as usize,
                "tableaux" => self.tableaux = value as usize,
                other => return Err(invalid(format!("{CAP_ENV_VAR}: unknown key {other:?}"))),
            }
        }
        Ok(self)
    }

    pub(crate) fn check(what: &'static str, requested: u128, cap: u128) -> Result<()> {
        if requested > cap {
            Err(Error::ResourceCap { what, requested, cap })
        } else {
            Ok(())
        }
    }
}
