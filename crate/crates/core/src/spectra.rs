//! Spectral idempotents and angles of a regular adjacency matrix.
//!
//! For a connected `k`-regular graph the adjacency matrix splits as
//! `A = Σ_r k·cos(θ_r)·E_r`, with `θ_0 = 0` and `E_0 = J/n`. Everything the
//! walk and mixing modules compute is phrased in terms of these `E_r`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::Graph;

/// Default relative grouping tolerance; eigenvalues closer than
/// `DEFAULT_TAU_GROUP · k` are treated as one eigenvalue.
pub const DEFAULT_TAU_GROUP: f64 = 1e-8;

/// Bound on every residual of the idempotent invariant suite.
pub const TAU_SPEC: f64 = 1e-9;

/// Support threshold factor; `E_r e_a` counts as nonzero above `1e-10·√n`.
pub const TAU_SUPP_FACTOR: f64 = 1e-10;

/// `A = Σ_r λ_r E_r` for a connected regular graph.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    n: usize,
    k: usize,
    eigenvalues: Vec<f64>,
    idempotents: Vec<DMatrix<f64>>,
    angles: Vec<f64>,
    multiplicities: Vec<usize>,
    has_minus_k: bool,
}

/// Max-norm residuals of the idempotent invariants.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SpectralResiduals {
    pub completeness: f64,
    pub idempotency: f64,
    pub orthogonality: f64,
    pub reconstruction: f64,
    pub symmetry: f64,
}

impl SpectralResiduals {
    pub fn max(&self) -> f64 {
        [
            self.completeness,
            self.idempotency,
            self.orthogonality,
            self.reconstruction,
            self.symmetry,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvalues in decreasing order, `λ_0 = k`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn idempotents(&self) -> &[DMatrix<f64>] {
        &self.idempotents
    }

    pub fn idempotent(&self, r: usize) -> &DMatrix<f64> {
        &self.idempotents[r]
    }

    /// `θ_r = arccos(λ_r / k)`, strictly increasing from `θ_0 = 0`.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Whether `−k` is an eigenvalue (the graph is bipartite).
    pub fn has_minus_k(&self) -> bool {
        self.has_minus_k
    }

    /// Index of the `−k` eigenvalue, when present.
    pub fn minus_k_index(&self) -> Option<usize> {
        self.has_minus_k.then(|| self.len() - 1)
    }

    /// Indices `r` with `θ_r ∈ (0, π)`.
    pub fn interior_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.len()).filter(move |&r| Some(r) != self.minus_k_index())
    }

    /// The column `E_r e_a`.
    pub fn project_vertex(&self, r: usize, a: usize) -> DVector<f64> {
        self.idempotents[r].column(a).into_owned()
    }

    /// Support threshold `τ_supp = 1e-10·√n`.
    pub fn support_tolerance(&self) -> f64 {
        TAU_SUPP_FACTOR * (self.n as f64).sqrt()
    }

    pub fn residuals(&self, adjacency: &DMatrix<f64>) -> SpectralResiduals {
        let n = self.n;
        let mut res = SpectralResiduals::default();
        let mut sum = DMatrix::<f64>::zeros(n, n);
        let mut recon = DMatrix::<f64>::zeros(n, n);
        for (r, e) in self.idempotents.iter().enumerate() {
            sum += e;
            recon += e * self.eigenvalues[r];
            res.symmetry = res.symmetry.max(max_abs(&(e - e.transpose())));
            res.idempotency = res.idempotency.max(max_abs(&(e * e - e)));
            for f in &self.idempotents[r + 1..] {
                res.orthogonality = res.orthogonality.max(max_abs(&(e * f)));
            }
        }
        res.completeness = max_abs(&(sum - DMatrix::<f64>::identity(n, n)));
        res.reconstruction = max_abs(&(recon - adjacency));
        res
    }
}

/// Groups the eigenvalues of `A` and assembles the spectral idempotents.
pub fn eigendecompose_symmetric(g: &Graph, tau_group: f64) -> Result<SpectralDecomposition> {
    let k = g.require_regular()?;
    if !g.is_connected() || k == 0 {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let kf = k as f64;
    let adjacency = g.adjacency_f64();
    let eig = SymmetricEigen::new(adjacency.clone());

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    // Consecutive eigenvalues within tau_group·k share an idempotent.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(group)
                if (eig.eigenvalues[*group.last().unwrap()] - eig.eigenvalues[i]).abs()
                    <= tau_group * kf =>
            {
                group.push(i)
            }
            _ => groups.push(vec![i]),
        }
    }

    let mut eigenvalues = Vec::with_capacity(groups.len());
    let mut idempotents = Vec::with_capacity(groups.len());
    let mut multiplicities = Vec::with_capacity(groups.len());
    for group in &groups {
        let mean = group.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / group.len() as f64;
        let mut e = DMatrix::<f64>::zeros(n, n);
        for &i in group {
            let v = eig.eigenvectors.column(i);
            e += v * v.transpose();
        }
        let e = (&e + e.transpose()) * 0.5;
        eigenvalues.push(mean);
        idempotents.push(e);
        multiplicities.push(group.len());
    }

    if (eigenvalues[0] - kf).abs() > 1e-6 * kf || multiplicities[0] != 1 {
        return Err(Error::Spectral(format!(
            "leading eigenvalue {} (multiplicity {}) does not match degree {k}",
            eigenvalues[0], multiplicities[0]
        )));
    }
    eigenvalues[0] = kf;
    let last = eigenvalues.len() - 1;
    let has_minus_k = last > 0 && (eigenvalues[last] + kf).abs() <= 1e-6 * kf;
    if has_minus_k {
        eigenvalues[last] = -kf;
    }
    let angles: Vec<f64> = eigenvalues
        .iter()
        .enumerate()
        .map(|(r, &lambda)| {
            if r == 0 {
                0.0
            } else if has_minus_k && r == last {
                PI
            } else {
                (lambda / kf).clamp(-1.0, 1.0).acos()
            }
        })
        .collect();
    if angles.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Spectral(format!(
            "angles are not strictly increasing: {angles:?} (grouping tolerance {tau_group})"
        )));
    }
    if has_minus_k != g.is_bipartite() {
        return Err(Error::Spectral(format!(
            "eigenvalue -k presence ({has_minus_k}) disagrees with bipartiteness ({})",
            g.is_bipartite()
        )));
    }

    let decomposition = SpectralDecomposition {
        n,
        k,
        eigenvalues,
        idempotents,
        angles,
        multiplicities,
        has_minus_k,
    };
    let residuals = decomposition.residuals(&adjacency);
    if residuals.max() > TAU_SPEC {
        return Err(Error::Spectral(format!(
            "residuals {residuals:?} exceed {TAU_SPEC:e} with grouping tolerance {tau_group}"
        )));
    }
    Ok(decomposition)
}

/// Indices `r` with `‖E_r e_a‖ > τ_supp`.
pub fn eigenvalue_support(d: &SpectralDecomposition, a: usize) -> Vec<usize> {
    let tol = d.support_tolerance();
    (0..d.len())
        .filter(|&r| d.idempotents[r].column(a).norm() > tol)
        .collect()
}
