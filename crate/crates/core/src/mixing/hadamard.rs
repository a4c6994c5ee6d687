use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::mixing::SignPattern;
use crate::spectra::SpectralDecomposition;

/// At most this many nonzero eigenvalue indices are enumerated
/// (`2^12` patterns up to global negation).
pub const MAX_PATTERN_BITS: usize = 12;

/// A real regular Hadamard matrix, verified in integer arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HadamardCertificate {
    pub h: DMatrix<i64>,
    pub row_sum: i64,
    /// Sign pattern it was found from, if it came out of the adjacency algebra.
    pub pattern: Option<SignPattern>,
    pub symmetric: bool,
}

impl HadamardCertificate {
    pub fn order(&self) -> usize {
        self.h.nrows()
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.h
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }
}

fn integer_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r.checked_mul(r) == Some(n)).then_some(r)
}

/// Exact check that `h` is a ±1 matrix with `HHᵀ = nI` and constant row
/// sums. Names the first violated condition.
pub fn regular_hadamard_validate(h: &DMatrix<i64>) -> Result<HadamardCertificate> {
    let n = h.nrows();
    if h.ncols() != n || n == 0 {
        return Err(Error::NotHadamard(format!(
            "matrix is {}x{}, expected non-empty square",
            h.nrows(),
            h.ncols()
        )));
    }
    if let Some((idx, v)) = h.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
        // column-major storage
        return Err(Error::NotHadamard(format!(
            "entry ({}, {}) = {v} is not ±1",
            idx % n,
            idx / n
        )));
    }
    let gram = h * h.transpose();
    if gram != DMatrix::<i64>::identity(n, n) * n as i64 {
        return Err(Error::NotHadamard(format!("H·Hᵀ ≠ {n}I")));
    }
    if !(n <= 2 || n.is_multiple_of(4)) {
        return Err(Error::NotHadamard(format!(
            "order {n} is not 1, 2 or a multiple of 4"
        )));
    }
    let row_sum: i64 = h.row(0).iter().sum();
    if let Some(i) = (1..n).find(|&i| h.row(i).iter().sum::<i64>() != row_sum) {
        return Err(Error::NotHadamard(format!(
            "row sums are not constant (row 0: {row_sum}, row {i}: {})",
            h.row(i).iter().sum::<i64>()
        )));
    }
    match integer_sqrt(n as u64) {
        Some(root) if row_sum.unsigned_abs() == root => {}
        _ => {
            return Err(Error::NotHadamard(format!(
                "regular of order {n} with row sum {row_sum}: order must be the square of |row sum|"
            )))
        }
    }
    Ok(HadamardCertificate {
        symmetric: h == &h.transpose(),
        h: h.clone(),
        row_sum,
        pattern: None,
    })
}

/// [`hadamard_search_with`] at the default flatness tolerance.
pub fn hadamard_search(d: &SpectralDecomposition) -> Result<Vec<HadamardCertificate>> {
    hadamard_search_with(d, crate::cospec::TAU_FLAT)
}

/// Enumerates sign patterns with `+E_0` and keeps those for which
/// `√n(E_0 + Σ_r (−1)^{σ_r} E_r)` is within `tau_flat` of a ±1 matrix. Every
/// hit is rounded and re-verified exactly. The `−E_0` half of the patterns
/// only produces the negations of these matrices.
pub fn hadamard_search_with(
    d: &SpectralDecomposition,
    tau_flat: f64,
) -> Result<Vec<HadamardCertificate>> {
    let bits = d.len() - 1;
    if bits > MAX_PATTERN_BITS {
        return Err(Error::TooManyEigenvalues {
            count: d.len(),
            limit: MAX_PATTERN_BITS + 1,
        });
    }
    let n = d.n();
    let sn = (n as f64).sqrt();
    let candidates: Vec<Result<Option<HadamardCertificate>>> = (0..1u64 << bits)
        .into_par_iter()
        .map(|mask| {
            let pattern = SignPattern::from_bits(d.len(), mask);
            let mut m = DMatrix::<f64>::zeros(n, n);
            for r in 0..d.len() {
                m += d.idempotent(r) * pattern.coefficient(r);
            }
            m *= sn;
            if m.iter().any(|x| (x.abs() - 1.0).abs() > tau_flat) {
                return Ok(None);
            }
            let rounded = m.map(|x| if x > 0.0 { 1i64 } else { -1 });
            let mut cert = regular_hadamard_validate(&rounded)?;
            cert.pattern = Some(pattern);
            Ok(Some(cert))
        })
        .collect();
    let found: Vec<HadamardCertificate> = candidates
        .into_iter()
        .filter_map(Result::transpose)
        .collect::<Result<_>>()?;
    if !found.is_empty() {
        let square = integer_sqrt(n as u64).is_some();
        if !(square && n.is_multiple_of(4)) {
            return Err(Error::NotHadamard(format!(
                "found a regular Hadamard matrix of order {n}, which is not a perfect square divisible by 4"
            )));
        }
    }
    Ok(found)
}

/// Coefficients of `H` in the basis `{I, A, J − I − A}` of a strongly regular
/// graph's adjacency algebra, and the max-norm residual of that expansion.
/// The basis is orthogonal in the trace inner product, so the coefficients
/// are plain projections.
pub fn scheme_coefficients(g: &Graph, h: &DMatrix<i64>) -> ([f64; 3], f64) {
    let n = g.n();
    let a = g.adjacency_f64();
    let i = DMatrix::<f64>::identity(n, n);
    let c = DMatrix::<f64>::from_element(n, n, 1.0) - &i - &a;
    let hf = h.map(|v| v as f64);
    let basis = [i, a, c];
    let mut coeffs = [0.0; 3];
    let mut recon = DMatrix::<f64>::zeros(n, n);
    for (slot, b) in coeffs.iter_mut().zip(&basis) {
        let norm = b.norm_squared();
        *slot = if norm > 0.0 { hf.dot(b) / norm } else { 0.0 };
        recon += b * *slot;
    }
    (coeffs, (recon - hf).amax())
}

/// Regular Hadamard matrix of order `4m²` for `m` a power of two, built as a
/// Kronecker power of `J₄ − 2I₄`.
pub fn kronecker_hadamard_seed(m: usize) -> Result<DMatrix<i64>> {
    if m == 0 || !m.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "Kronecker seed needs m a power of two, got {m}"
        )));
    }
    let base = DMatrix::from_fn(4, 4, |i, j| if i == j { -1i64 } else { 1 });
    let mut h = base.clone();
    for _ in 0..m.trailing_zeros() {
        h = h.kronecker(&base);
    }
    Ok(h)
}
