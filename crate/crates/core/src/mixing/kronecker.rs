//! Integer-relation checks on eigenvalue angles.
//!
//! The phases `tθ_r + σ_rπ` can all be pushed arbitrarily close to `0 mod 2π`
//! exactly when every integer relation among the angles is compatible with
//! the signs. For real times the relations are `Σ ℓ_r θ_r = 0`; for integer
//! times they are `Σ ℓ_r θ_r + 2πℓ_0 = 0`. In both cases compatibility means
//! `Σ ℓ_r σ_r` is even. The scan covers coefficient vectors with
//! `|ℓ_i| ≤ L`, so a "holds" verdict is a statement up to that bound.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::SrgParams;
use crate::mixing::TimeMode;

pub const DEFAULT_RELATION_BOUND: u32 = 20;
pub const DEFAULT_TAU_REL: f64 = 1e-9;

/// Near-relations with residual in `[τ_rel, GRAY_FACTOR·τ_rel)` make the
/// verdict inconclusive.
const GRAY_FACTOR: f64 = 100.0;

/// Upper limit on the number of coefficient vectors scanned.
const MAX_SCAN: u64 = 2_000_000_000;

/// An integer relation `Σ ℓ_r θ_r + 2π·offset = 0` (offset is always zero in
/// real-time mode).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub coefficients: Vec<i64>,
    pub offset: i64,
}

impl Relation {
    fn weighted_parity(&self, sigma: &[u8]) -> i64 {
        self.coefficients
            .iter()
            .zip(sigma)
            .map(|(l, &s)| l * i64::from(s))
            .sum::<i64>()
            .rem_euclid(2)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        write!(f, "({}; {})", terms.join(", "), self.offset)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KroneckerStatus {
    Holds,
    Violated(Relation),
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KroneckerVerdict {
    pub mode: TimeMode,
    pub status: KroneckerStatus,
    #[serde(rename = "L")]
    pub bound: u32,
    /// Primitive relations found, ordered by height then lexicographically.
    pub relations: Vec<Relation>,
}

impl KroneckerVerdict {
    pub fn holds(&self) -> bool {
        self.status == KroneckerStatus::Holds
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Scans integer relations among `angles` with coefficients bounded by
/// `bound` and checks each against the sign bits `sigma`.
pub fn phase_condition_check(
    angles: &[f64],
    sigma: &[u8],
    mode: TimeMode,
    bound: u32,
    tau_rel: f64,
) -> Result<KroneckerVerdict> {
    if angles.len() != sigma.len() {
        return Err(Error::Dimension {
            expected: angles.len(),
            got: sigma.len(),
        });
    }
    if let Some(bad) = angles.iter().find(|&&t| !(t > 0.0 && t < PI)) {
        return Err(Error::InvalidParameter(format!(
            "angle {bad} is not in (0, π)"
        )));
    }
    let dim = angles.len();
    let side = 2 * u64::from(bound) + 1;
    let total = u32::try_from(dim)
        .ok()
        .and_then(|d| side.checked_pow(d))
        .filter(|&t| t <= MAX_SCAN);
    let Some(total) = total else {
        log::warn!("relation scan over {dim} angles with bound {bound} is too large");
        return Ok(KroneckerVerdict {
            mode,
            status: KroneckerStatus::Inconclusive,
            bound,
            relations: Vec::new(),
        });
    };
    let lb = i64::from(bound);

    let hits: Vec<(Relation, bool)> = (0..total)
        .into_par_iter()
        .filter_map(|mut idx| {
            let mut coeffs = Vec::with_capacity(dim);
            for _ in 0..dim {
                coeffs.push((idx % side) as i64 - lb);
                idx /= side;
            }
            coeffs.reverse();
            // One representative of ±ℓ.
            match coeffs.iter().find(|&&c| c != 0) {
                Some(&c) if c > 0 => {}
                _ => return None,
            }
            let s: f64 = coeffs.iter().zip(angles).map(|(&l, &t)| l as f64 * t).sum();
            let (offset, residual) = match mode {
                TimeMode::Real => (0, s.abs()),
                TimeMode::Integer => {
                    let offset = (-s / (2.0 * PI)).round();
                    (offset as i64, (s + 2.0 * PI * offset).abs())
                }
            };
            if offset.abs() > lb || residual >= GRAY_FACTOR * tau_rel {
                return None;
            }
            let g = coeffs.iter().fold(offset, |acc, &c| gcd(acc, c));
            if g != 1 {
                return None;
            }
            Some((
                Relation {
                    coefficients: coeffs,
                    offset,
                },
                residual < tau_rel,
            ))
        })
        .collect();

    let gray = hits.iter().any(|(_, exact)| !exact);
    let mut relations: Vec<Relation> = hits
        .into_iter()
        .filter_map(|(r, exact)| exact.then_some(r))
        .collect();
    relations.sort_by_key(|r| {
        let height = r
            .coefficients
            .iter()
            .chain(std::iter::once(&r.offset))
            .map(|c| c.abs())
            .max()
            .unwrap_or(0);
        (height, r.coefficients.clone(), r.offset)
    });
    let status = match relations.iter().find(|r| r.weighted_parity(sigma) != 0) {
        Some(r) => KroneckerStatus::Violated(r.clone()),
        None if gray => KroneckerStatus::Inconclusive,
        None => KroneckerStatus::Holds,
    };
    Ok(KroneckerVerdict {
        mode,
        status,
        bound,
        relations,
    })
}

/// The two strongly regular families `(4m², 2m² ± m, m² ± m, m² ± m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Plus,
    Minus,
}

impl Family {
    pub fn params(self, m: usize) -> SrgParams {
        let n = 4 * m * m;
        match self {
            Family::Plus => SrgParams {
                n,
                k: 2 * m * m + m,
                a: m * m + m,
                c: m * m + m,
            },
            Family::Minus => SrgParams {
                n,
                k: 2 * m * m - m,
                a: m * m - m,
                c: m * m - m,
            },
        }
    }
}

/// Symbolic parity argument for one member of a family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityTrace {
    pub m: usize,
    pub family: Family,
    pub params: SrgParams,
    /// Restricted eigenvalues `(λ, τ)` from `x² − (a − c)x − (k − c) = 0`.
    pub eigenvalues: (i64, i64),
    /// `j` with `cos θ_λ = 1/j` and `cos θ_τ = −1/j`.
    pub denominator: i64,
    /// Canonical signs `(σ_λ, σ_τ)` of `±(J − 2A)` with `+E_0`.
    pub sigma: (u8, u8),
    pub angle_irrational: bool,
    pub steps: Vec<String>,
    pub holds: bool,
}

/// Reproduces the parity argument for the `(4m², 2m² ± m, m² ± m, m² ± m)`
/// family: with `θ_τ = π − θ_λ`, a relation `pθ_λ + qθ_τ ≡ 0 (mod 2π)`
/// becomes `(p − q)θ_λ + qπ ≡ 0`, and since `θ_λ/π` is irrational this forces
/// `p = q` with `q` even.
pub fn family_parity_check(m: usize, family: Family) -> Result<ParityTrace> {
    if m < 1 {
        return Err(Error::InvalidParameter(format!(
            "family index m must be >= 1, got {m}"
        )));
    }
    let params = family.params(m);
    let (k, a, c) = (params.k as i64, params.a as i64, params.c as i64);
    let n = params.n as i64;
    let mut steps = Vec::new();
    steps.push(format!("parameters {params}"));

    let disc = (a - c).pow(2) + 4 * (k - c);
    let root = (disc as f64).sqrt().round() as i64;
    if root * root != disc || (a - c + root) % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "restricted eigenvalues of {params} are not integers"
        )));
    }
    let lambda = (a - c + root) / 2;
    let tau = (a - c - root) / 2;
    steps.push(format!(
        "restricted eigenvalues solve x^2 - {}x - {} = 0: lambda = {lambda}, tau = {tau}",
        a - c,
        k - c
    ));
    if lambda != m as i64 || tau != -(m as i64) {
        return Err(Error::InvalidParameter(format!(
            "unexpected eigenvalues {lambda}, {tau} for m = {m}"
        )));
    }
    let j = k / lambda;
    steps.push(format!(
        "cos theta_lambda = {lambda}/{k} = 1/{j}, cos theta_tau = -1/{j}, so theta_tau = pi - theta_lambda"
    ));

    // (J − 2A) acts as n − 2k on 1, −2λ on E_λ and −2τ on E_τ.
    let on_ones = n - 2 * k;
    let flip = on_ones < 0;
    let sign_of = |v: i64| u8::from((v < 0) != flip);
    let sigma = (sign_of(-2 * lambda), sign_of(-2 * tau));
    steps.push(format!(
        "H = {}(J - 2A) has pattern (+E0, {}E_lambda, {}E_tau)",
        if flip { "-" } else { "" },
        if sigma.0 == 1 { '-' } else { '+' },
        if sigma.1 == 1 { '-' } else { '+' },
    ));

    // arccos(1/j)/π is rational only for 1/j ∈ {0, ±1/2, ±1}.
    let angle_irrational = j.abs() >= 3;
    let holds = if angle_irrational {
        steps.push(format!(
            "arccos(1/{j}) is not a rational multiple of pi, so (p - q) theta_lambda + q pi = 0 mod 2pi forces p = q and q even"
        ));
        steps.push(format!(
            "sigma-weighted sum p*{} + q*{} is even for even p, q",
            sigma.0, sigma.1
        ));
        true
    } else {
        steps.push(format!(
            "degenerate member: cos theta_lambda = 1/{j} makes theta_lambda a rational multiple of pi; the graph {params} is not primitive and the reduction does not apply"
        ));
        // θ_λ ∈ {0, π/3}: p = 1, q = 0 (j = 1) or p = 6, q = 0 (j = 2) is a
        // relation; it is compatible only if σ_λ·p is even.
        let witness_p: i64 = if j == 1 { 1 } else { 6 };
        (witness_p * i64::from(sigma.0)) % 2 == 0
    };

    Ok(ParityTrace {
        m,
        family,
        params,
        eigenvalues: (lambda, tau),
        denominator: j,
        sigma,
        angle_irrational,
        steps,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rook_relation_is_compatible() {
        let angles = [(1.0f64 / 3.0).acos(), (-1.0f64 / 3.0).acos()];
        let v = phase_condition_check(&angles, &[1, 0], TimeMode::Integer, 20, DEFAULT_TAU_REL)
            .unwrap();
        assert!(v.holds(), "{v:?}");
        assert_eq!(
            v.relations.first(),
            Some(&Relation {
                coefficients: vec![2, 2],
                offset: -1
            })
        );
        assert_eq!(v.bound, 20);
    }

    #[test]
    fn real_mode_relation_for_supplementary_angles() {
        // θ_1 + θ_2 = π is not a real-time relation; none should be found.
        let angles = [(1.0f64 / 3.0).acos(), (-1.0f64 / 3.0).acos()];
        let v =
            phase_condition_check(&angles, &[1, 0], TimeMode::Real, 20, DEFAULT_TAU_REL).unwrap();
        assert!(v.relations.is_empty());
        assert!(v.holds());
    }

    #[test]
    fn k4_single_angle_has_no_relation() {
        let v = phase_condition_check(
            &[(-1.0f64 / 3.0).acos()],
            &[1],
            TimeMode::Integer,
            20,
            DEFAULT_TAU_REL,
        )
        .unwrap();
        assert!(v.relations.is_empty());
        assert!(v.holds());
    }

    #[test]
    fn rational_angle() {
        let v = phase_condition_check(&[PI / 3.0], &[1], TimeMode::Integer, 20, DEFAULT_TAU_REL)
            .unwrap();
        assert_eq!(
            v.relations[0],
            Relation {
                coefficients: vec![6],
                offset: -1
            }
        );
        assert!(v.holds());
    }

    #[test]
    fn odd_relation_is_a_violation() {
        // Angles (π/2, π/4), σ = (0, 1): the only real relation is
        // θ_1 − 2θ_2 = 0 with even σ-sum; t = 4 solves it.
        let v = phase_condition_check(
            &[PI / 2.0, PI / 4.0],
            &[0, 1],
            TimeMode::Real,
            20,
            DEFAULT_TAU_REL,
        )
        .unwrap();
        assert!(v.holds());
        // Equal angles with different signs: (1, −1) has odd σ-sum.
        let v = phase_condition_check(&[1.0, 1.0], &[0, 1], TimeMode::Real, 5, DEFAULT_TAU_REL)
            .unwrap();
        assert_eq!(
            v.status,
            KroneckerStatus::Violated(Relation {
                coefficients: vec![1, -1],
                offset: 0
            })
        );
    }

    #[test]
    fn rejects_boundary_angles() {
        assert!(phase_condition_check(&[PI], &[1], TimeMode::Real, 3, 1e-9).is_err());
        assert!(phase_condition_check(&[0.0], &[1], TimeMode::Real, 3, 1e-9).is_err());
    }

    #[test]
    fn family_members() {
        let t = family_parity_check(1, Family::Plus).unwrap();
        assert!(t.holds);
        assert_eq!(
            t.params,
            SrgParams {
                n: 4,
                k: 3,
                a: 2,
                c: 2
            }
        );
        let t = family_parity_check(2, Family::Minus).unwrap();
        assert!(t.holds);
        assert_eq!(
            t.params,
            SrgParams {
                n: 16,
                k: 6,
                a: 2,
                c: 2
            }
        );
        assert_eq!(t.sigma, (1, 0));
        for fam in [Family::Plus, Family::Minus] {
            assert!(family_parity_check(5, fam).unwrap().holds);
        }
        assert!(family_parity_check(0, Family::Plus).is_err());
    }

    #[test]
    fn degenerate_minus_member() {
        // (4, 1, 0, 0) is two disjoint edges.
        let t = family_parity_check(1, Family::Minus).unwrap();
        assert!(!t.angle_irrational);
        assert!(!t.holds);
    }
}
