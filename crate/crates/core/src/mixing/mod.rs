//! Local and simultaneous ε-uniform mixing.
//!
//! The pipeline is: sign patterns over the adjacency idempotents give
//! candidate flat targets (real regular Hadamard matrices in the adjacency
//! algebra), an integer-relation scan on the eigenvalue angles decides
//! whether the required phases are simultaneously reachable, a time search
//! finds a concrete `t`, and the walk is simulated to certify the residual.

mod hadamard;
mod kronecker;
mod report;
mod time;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use hadamard::{
    hadamard_search, hadamard_search_with, kronecker_hadamard_seed, regular_hadamard_validate,
    scheme_coefficients, HadamardCertificate, MAX_PATTERN_BITS,
};
pub use kronecker::{
    family_parity_check, phase_condition_check, Family, KroneckerStatus, KroneckerVerdict,
    ParityTrace, Relation, DEFAULT_RELATION_BOUND, DEFAULT_TAU_REL,
};
pub use report::{
    local_mixing_report, simultaneous_mixing_check, CertificateSummary, MixingReport, Verdict,
};
pub use time::{phase_deficit, time_search, BudgetExhausted, TimeHit, TimeLimits};

/// Signs `(±E_0, (−1)^{σ_1} E_1, …)` selecting a candidate Hadamard matrix
/// `√n(±E_0 + Σ_r (−1)^{σ_r} E_r)`.
///
/// `sigma[r − 1]` holds `σ_r`; `None` marks an index outside the eigenvalue
/// support of the vertex in question, where the sign is unconstrained.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignPattern {
    pub sign_e0: i8,
    pub sigma: Vec<Option<u8>>,
}

impl SignPattern {
    pub fn new(sign_e0: i8, sigma: Vec<Option<u8>>) -> SignPattern {
        SignPattern { sign_e0, sigma }
    }

    /// Pattern with `+E_0` over `len` eigenvalue indices; bit `j` of `bits`
    /// is `σ_{j+1}`.
    pub fn from_bits(len: usize, bits: u64) -> SignPattern {
        let sigma = (1..len)
            .map(|r| Some(((bits >> (r - 1)) & 1) as u8))
            .collect();
        SignPattern { sign_e0: 1, sigma }
    }

    /// `σ_r`, with `σ_0 = 0` when `E_0` carries a plus sign.
    pub fn sigma(&self, r: usize) -> Option<u8> {
        if r == 0 {
            Some(u8::from(self.sign_e0 < 0))
        } else {
            self.sigma.get(r - 1).copied().flatten()
        }
    }

    /// Coefficient of `E_r`: `±1` for `r = 0`, `(−1)^{σ_r}` otherwise.
    /// Unconstrained indices count as `+1`.
    pub fn coefficient(&self, r: usize) -> f64 {
        if r == 0 {
            f64::from(self.sign_e0)
        } else if self.sigma(r) == Some(1) {
            -1.0
        } else {
            1.0
        }
    }

    pub fn negated(&self) -> SignPattern {
        SignPattern {
            sign_e0: -self.sign_e0,
            sigma: self.sigma.iter().map(|s| s.map(|b| 1 - b)).collect(),
        }
    }

    /// Representative with `+E_0`.
    pub fn canonical(&self) -> SignPattern {
        if self.sign_e0 < 0 {
            self.negated()
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}E0", if self.sign_e0 > 0 { '+' } else { '-' })?;
        for (i, s) in self.sigma.iter().enumerate() {
            match s {
                Some(0) => write!(f, ", +E{}", i + 1)?,
                Some(_) => write!(f, ", -E{}", i + 1)?,
                None => write!(f, ", ?E{}", i + 1)?,
            }
        }
        write!(f, ")")
    }
}

/// Whether times range over the reals or the integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeMode {
    Real,
    Integer,
}

impl fmt::Display for TimeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimeMode::Real => "real",
            TimeMode::Integer => "integer",
        })
    }
}

impl FromStr for TimeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "real" => Ok(TimeMode::Real),
            "integer" => Ok(TimeMode::Integer),
            other => Err(format!(
                "unknown time mode {other:?} (expected real or integer)"
            )),
        }
    }
}

/// Tolerances and search bounds for the mixing pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingConfig {
    pub tau_group: f64,
    pub tau_flat: f64,
    pub relation_bound: u32,
    pub tau_rel: f64,
    pub limits: TimeLimits,
    /// A report succeeds when its residual is at most `c_slack · ε`.
    pub c_slack: f64,
}

pub const DEFAULT_C_SLACK: f64 = 4.0;

impl Default for MixingConfig {
    fn default() -> Self {
        MixingConfig {
            tau_group: crate::spectra::DEFAULT_TAU_GROUP,
            tau_flat: crate::cospec::TAU_FLAT,
            relation_bound: DEFAULT_RELATION_BOUND,
            tau_rel: DEFAULT_TAU_REL,
            limits: TimeLimits::default(),
            c_slack: DEFAULT_C_SLACK,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_bits_and_negation() {
        let p = SignPattern::from_bits(3, 0b01);
        assert_eq!(p, SignPattern::new(1, vec![Some(1), Some(0)]));
        assert_eq!(p.coefficient(0), 1.0);
        assert_eq!(p.coefficient(1), -1.0);
        assert_eq!(p.coefficient(2), 1.0);
        let n = p.negated();
        assert_eq!(n, SignPattern::new(-1, vec![Some(0), Some(1)]));
        assert_eq!(n.canonical(), p);
        assert_eq!(p.to_string(), "(+E0, -E1, +E2)");
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("real".parse::<TimeMode>(), Ok(TimeMode::Real));
        assert_eq!("integer".parse::<TimeMode>(), Ok(TimeMode::Integer));
        assert!("complex".parse::<TimeMode>().is_err());
    }
}
