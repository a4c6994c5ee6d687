use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::SpectralDecomposition;
use crate::walk::{transition_matrix, ArcSpace, State};

/// Tolerance of the projection invariant suite.
pub const TAU_WALK: f64 = 1e-9;

/// Names one eigenprojection of `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "index")]
pub enum ProjectionLabel {
    One,
    MinusOne,
    /// `F_{+θ_r}` for adjacency index `r`.
    Plus(usize),
    /// `F_{−θ_r}`.
    Minus(usize),
}

/// The pair `F_{±θ_r}` belonging to an adjacency eigenvalue with
/// `θ_r ∈ (0, π)`.
#[derive(Clone, Debug)]
pub struct ProjectionPair {
    pub index: usize,
    pub theta: f64,
    pub plus: DMatrix<Complex64>,
    pub minus: DMatrix<Complex64>,
}

/// Spectral resolution
/// `U = F_1 − F_{−1} + Σ_r (e^{iθ_r}F_{+θ_r} + e^{−iθ_r}F_{−θ_r})`.
#[derive(Clone, Debug)]
pub struct WalkSpectrum {
    transition: DMatrix<f64>,
    f_one: DMatrix<Complex64>,
    f_minus_one: DMatrix<Complex64>,
    pairs: Vec<ProjectionPair>,
}

fn cmax_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn complexify(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|v| Complex64::new(v, 0.0))
}

impl WalkSpectrum {
    pub fn dim(&self) -> usize {
        self.transition.nrows()
    }

    pub fn transition(&self) -> &DMatrix<f64> {
        &self.transition
    }

    pub fn f_one(&self) -> &DMatrix<Complex64> {
        &self.f_one
    }

    pub fn f_minus_one(&self) -> &DMatrix<Complex64> {
        &self.f_minus_one
    }

    pub fn pairs(&self) -> &[ProjectionPair] {
        &self.pairs
    }

    /// Every eigenprojection with its eigenphase in `(−π, π]`.
    pub fn projections(&self) -> Vec<(ProjectionLabel, f64, &DMatrix<Complex64>)> {
        let mut out = vec![
            (ProjectionLabel::One, 0.0, &self.f_one),
            (ProjectionLabel::MinusOne, PI, &self.f_minus_one),
        ];
        for p in &self.pairs {
            out.push((ProjectionLabel::Plus(p.index), p.theta, &p.plus));
            out.push((ProjectionLabel::Minus(p.index), -p.theta, &p.minus));
        }
        out
    }

    /// `U^t` on the principal branch, `(−1)^t := e^{iπt}`.
    pub fn power(&self, t: f64) -> DMatrix<Complex64> {
        self.projections().into_iter().fold(
            DMatrix::zeros(self.dim(), self.dim()),
            |acc, (_, phase, f)| acc + f * Complex64::from_polar(1.0, phase * t),
        )
    }

    /// Max-norm residuals of the projection suite.
    pub fn residuals(&self) -> WalkResiduals {
        let m = self.dim();
        let identity = DMatrix::<Complex64>::identity(m, m);
        let projections = self.projections();
        let mut res = WalkResiduals::default();
        let mut sum = DMatrix::<Complex64>::zeros(m, m);
        let mut resolution = DMatrix::<Complex64>::zeros(m, m);
        for (i, (_, phase, f)) in projections.iter().enumerate() {
            sum += *f;
            resolution += *f * Complex64::from_polar(1.0, *phase);
            res.hermitian = res.hermitian.max(cmax_abs(&(*f - f.adjoint())));
            res.idempotency = res.idempotency.max(cmax_abs(&(*f * *f - *f)));
            for (_, _, g) in &projections[i + 1..] {
                res.orthogonality = res.orthogonality.max(cmax_abs(&(*f * *g)));
            }
        }
        res.completeness = cmax_abs(&(sum - identity));
        res.resolution = cmax_abs(&(resolution - complexify(&self.transition)));
        res
    }

    /// Checks `D_t F_{±θ_r} D_tᵀ = (k/2)E_r`, `D_t F_1 D_tᵀ = kE_0` and, on
    /// bipartite graphs, `D_t F_{−1} D_tᵀ = kE_{−k}`.
    pub fn correspondence(&self, d: &SpectralDecomposition, arcs: &ArcSpace) -> Correspondence {
        let dt = complexify(arcs.tail_incidence());
        let dtt = dt.transpose();
        let k = arcs.k() as f64;
        let sandwich = |f: &DMatrix<Complex64>| &dt * f * &dtt;
        let pairs = self
            .pairs
            .iter()
            .map(|p| {
                let target = complexify(d.idempotent(p.index)) * Complex64::from(k / 2.0);
                (
                    p.index,
                    cmax_abs(&(sandwich(&p.plus) - &target)),
                    cmax_abs(&(sandwich(&p.minus) - &target)),
                )
            })
            .collect();
        let one =
            cmax_abs(&(sandwich(&self.f_one) - complexify(d.idempotent(0)) * Complex64::from(k)));
        let minus_target = match d.minus_k_index() {
            Some(r) => complexify(d.idempotent(r)) * Complex64::from(k),
            None => DMatrix::zeros(arcs.n(), arcs.n()),
        };
        let minus_one = cmax_abs(&(sandwich(&self.f_minus_one) - minus_target));
        Correspondence {
            pairs,
            one,
            minus_one,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct WalkResiduals {
    pub completeness: f64,
    pub hermitian: f64,
    pub idempotency: f64,
    pub orthogonality: f64,
    pub resolution: f64,
}

impl WalkResiduals {
    pub fn max(&self) -> f64 {
        [
            self.completeness,
            self.hermitian,
            self.idempotency,
            self.orthogonality,
            self.resolution,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Residuals of the adjacency/walk correspondence identities.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Correspondence {
    /// `(r, ‖D_t F_{+θ} D_tᵀ − (k/2)E_r‖, ‖D_t F_{−θ} D_tᵀ − (k/2)E_r‖)`.
    pub pairs: Vec<(usize, f64, f64)>,
    pub one: f64,
    /// Against `kE_{−k}` on bipartite graphs and against zero otherwise.
    pub minus_one: f64,
}

impl Correspondence {
    pub fn max_pair(&self) -> f64 {
        self.pairs
            .iter()
            .fold(0.0, |acc, &(_, p, m)| acc.max(p).max(m))
    }
}

/// Builds the eigenprojections of `U` from the adjacency idempotents.
///
/// For `θ_r ∈ (0, π)`:
/// `F_{±θ} = (D_t − e^{±iθ}D_h)ᵀ E_r (D_t − e^{∓iθ}D_h) / (2k sin²θ)`.
/// The `±1` eigenspaces are split off the remainder `P = I − Σ F_{±θ}` as
/// `F_{±1} = (P ± UP)/2`.
pub fn walk_spectrum(d: &SpectralDecomposition, arcs: &ArcSpace) -> Result<WalkSpectrum> {
    if d.n() != arcs.n() || d.k() != arcs.k() {
        return Err(Error::Dimension {
            expected: d.n(),
            got: arcs.n(),
        });
    }
    let m = arcs.len();
    let k = arcs.k() as f64;
    let dt = complexify(arcs.tail_incidence());
    let dh = complexify(arcs.head_incidence());
    let transition = transition_matrix(arcs);

    let pairs: Vec<ProjectionPair> = d
        .interior_indices()
        .map(|r| {
            let theta = d.angles()[r];
            let e = complexify(d.idempotent(r));
            let w = Complex64::from_polar(1.0, theta);
            let left = (&dt - &dh * w).transpose();
            let right = &dt - &dh * w.conj();
            let scale = Complex64::from(1.0 / (2.0 * k * theta.sin().powi(2)));
            let plus = &left * &e * &right * scale;
            let minus = plus.map(|z| z.conj());
            ProjectionPair {
                index: r,
                theta,
                plus,
                minus,
            }
        })
        .collect();

    let mut rest = DMatrix::<Complex64>::identity(m, m);
    for p in &pairs {
        rest -= &p.plus;
        rest -= &p.minus;
    }
    let u_rest = complexify(&transition) * &rest;
    let half = Complex64::from(0.5);
    let f_one = (&rest + &u_rest) * half;
    let f_minus_one = (&rest - &u_rest) * half;

    let ws = WalkSpectrum {
        transition,
        f_one,
        f_minus_one,
        pairs,
    };
    let residuals = ws.residuals();
    if residuals.max() > TAU_WALK {
        return Err(Error::WalkSpectrum(format!("{residuals:?}")));
    }
    let corr = ws.correspondence(d, arcs);
    if corr.max_pair() > TAU_WALK || corr.one > TAU_WALK {
        return Err(Error::WalkSpectrum(format!("correspondence {corr:?}")));
    }
    if corr.minus_one > TAU_WALK {
        log::warn!(
            "D_t F_-1 D_t^T deviates from k E_-k by {:e}",
            corr.minus_one
        );
    }
    Ok(ws)
}

/// `U^t x` through the spectral resolution; `t` may be any real number.
pub fn evolve(ws: &WalkSpectrum, x: &State, t: f64) -> Result<State> {
    if x.len() != ws.dim() {
        return Err(Error::Dimension {
            expected: ws.dim(),
            got: x.len(),
        });
    }
    let amps = x.amplitudes();
    let out = ws
        .projections()
        .into_iter()
        .fold(DVector::zeros(ws.dim()), |acc, (_, phase, f)| {
            acc + (f * amps) * Complex64::from_polar(1.0, phase * t)
        });
    Ok(State::from_raw(out))
}

/// Closed-form entries of `U^t x_a` at integer time `t`: the amplitude on
/// arc `(u, v)` is
/// `(1/√k)·( Σ_r (sin(tθ_r)(E_r)_{va} − sin((t−1)θ_r)(E_r)_{ua}) / sin θ_r
///   + (E_0)_{ua} + (−1)^t (E_{−k})_{ua} )`
/// with the sum over `θ_r ∈ (0, π)`.
pub fn entry_formula(
    d: &SpectralDecomposition,
    arcs: &ArcSpace,
    a: usize,
    t: u32,
) -> Result<State> {
    if a >= arcs.n() {
        return Err(Error::InvalidVertex {
            vertex: a,
            n: arcs.n(),
        });
    }
    let tf = f64::from(t);
    let sign = if t.is_multiple_of(2) { 1.0 } else { -1.0 };
    let e0 = d.idempotent(0);
    let interior: Vec<(f64, &DMatrix<f64>)> = d
        .interior_indices()
        .map(|r| (d.angles()[r], d.idempotent(r)))
        .collect();
    let scale = 1.0 / (arcs.k() as f64).sqrt();
    let amps = arcs.arcs().iter().map(|&(u, v)| {
        let mut s = e0[(u, a)];
        for &(theta, e) in &interior {
            s += ((tf * theta).sin() * e[(v, a)] - ((tf - 1.0) * theta).sin() * e[(u, a)])
                / theta.sin();
        }
        if let Some(r) = d.minus_k_index() {
            s += sign * d.idempotent(r)[(u, a)];
        }
        Complex64::new(s * scale, 0.0)
    });
    State::new(DVector::from_iterator(arcs.len(), amps))
}
