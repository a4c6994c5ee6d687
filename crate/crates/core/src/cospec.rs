//! Strong cospectrality of the vertex state `x_a` and a target state.
//!
//! Two checkers are provided. [`check_strong_cospectrality`] works with the
//! adjacency idempotents only: it reads `cos δ_r` off `E_r D_t y` and
//! resolves the sign of `δ_r` with `E_r D_h y`. [`check_strong_cospectrality_direct`]
//! works with the eigenprojections of `U` and compares `F x` with `F y`
//! projection by projection. On non-bipartite graphs and real targets the two
//! must agree; the tests use each as the other's oracle.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixing::SignPattern;
use crate::spectra::SpectralDecomposition;
use crate::walk::{ArcSpace, ProjectionLabel, State, WalkSpectrum};

pub const TAU_COSP: f64 = 1e-8;

/// Below this `|sin δ_r|` the sign of `δ_r` is unobservable and `δ_r` is
/// snapped to `0` or `π`.
pub const SIN_SNAP: f64 = 1e-6;

/// Default flatness tolerance on `√n·v` before integer rounding.
pub const TAU_FLAT: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cospectrality<W> {
    Cospectral(W),
    NotCospectral(String),
}

impl<W> Cospectrality<W> {
    pub fn is_cospectral(&self) -> bool {
        matches!(self, Cospectrality::Cospectral(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Cospectrality::Cospectral(w) => Some(w),
            Cospectrality::NotCospectral(_) => None,
        }
    }
}

/// Residuals of the tail and head equations for one eigenvalue index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquationResidual {
    pub index: usize,
    pub tail: f64,
    pub head: f64,
}

/// Sign of the `E_0` equation and one angle `δ_r` per eigenvalue index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CospectralityWitness {
    /// Global phase `φ` removed from the target; the remaining fields
    /// describe the real vector `e^{−iφ}y`.
    pub phase: f64,
    pub sign_e0: i8,
    /// `deltas[r]` for `r ≥ 1`; `None` where `E_r e_a = 0`. `deltas[0]` is
    /// always `None`.
    pub deltas: Vec<Option<f64>>,
    pub residuals: Vec<EquationResidual>,
}

impl CospectralityWitness {
    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .fold(0.0, |acc, r| acc.max(r.tail).max(r.head))
    }

    /// Rebuilds `(D_t y, D_h y)` as
    /// `√k(±E_0 + Σ cos δ_r E_r)e_a` and `√k(±E_0 + Σ cos(δ_r + θ_r) E_r)e_a`.
    pub fn reconstruct(&self, d: &SpectralDecomposition, a: usize) -> (DVector<f64>, DVector<f64>) {
        let sk = (d.k() as f64).sqrt();
        let e0 = d.project_vertex(0, a) * (sk * f64::from(self.sign_e0));
        let mut tail = e0.clone();
        let mut head = e0;
        for (r, delta) in self.deltas.iter().enumerate().skip(1) {
            if let Some(delta) = delta {
                let col = d.project_vertex(r, a);
                tail += &col * (sk * delta.cos());
                head += &col * (sk * (delta + d.angles()[r]).cos());
            }
        }
        (tail, head)
    }
}

/// Phase `δ` with `F x = e^{iδ} F y` for one eigenprojection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionPhase {
    pub label: ProjectionLabel,
    /// `None` when `F x = F y = 0`.
    pub delta: Option<f64>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectWitness {
    pub phases: Vec<ProjectionPhase>,
}

impl DirectWitness {
    pub fn phase(&self, label: ProjectionLabel) -> Option<f64> {
        self.phases
            .iter()
            .find(|p| p.label == label)
            .and_then(|p| p.delta)
    }
}

fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Distance between `e^{ia}` and `e^{ib}`.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    2.0 * (wrap_angle(a - b) / 2.0).sin().abs()
}

/// Writes `y = e^{iφ}·v` with `v` real, up to `tol` in the imaginary parts,
/// and returns `(φ, v)`. Targets that are already real keep `φ = 0`;
/// otherwise `φ` is the phase of the largest entry.
pub fn real_up_to_phase(y: &State, tol: f64) -> Option<(f64, DVector<f64>)> {
    let amps = y.amplitudes();
    if amps.iter().all(|z| z.im.abs() <= tol) {
        return Some((0.0, amps.map(|z| z.re)));
    }
    let pivot = amps
        .iter()
        .copied()
        .max_by(|p, q| p.norm().total_cmp(&q.norm()))?;
    let rot = pivot.conj() / pivot.norm();
    let rotated = amps.map(|z| z * rot);
    if rotated.iter().any(|z| z.im.abs() > tol) {
        return None;
    }
    Some((pivot.arg(), rotated.map(|z| z.re)))
}

/// Adjacency-level strong cospectrality test of `x_a` and `y` on a
/// non-bipartite graph. Targets that are not real up to a global phase are
/// rejected.
pub fn check_strong_cospectrality(
    d: &SpectralDecomposition,
    arcs: &ArcSpace,
    a: usize,
    y: &State,
) -> Result<Cospectrality<CospectralityWitness>> {
    if d.has_minus_k() {
        return Err(Error::Bipartite);
    }
    if a >= d.n() {
        return Err(Error::InvalidVertex {
            vertex: a,
            n: d.n(),
        });
    }
    if y.len() != arcs.len() {
        return Err(Error::Dimension {
            expected: arcs.len(),
            got: y.len(),
        });
    }
    let Some((phase, real)) = real_up_to_phase(y, TAU_COSP) else {
        return Ok(Cospectrality::NotCospectral(
            "target is not real up to a global phase".into(),
        ));
    };
    let sk = (d.k() as f64).sqrt();
    let tail = arcs.tail_incidence() * &real;
    let head = arcs.head_incidence() * &real;
    let supp_tol = d.support_tolerance();

    let mut residuals = Vec::with_capacity(d.len());
    let mut deltas = vec![None; d.len()];

    let e0a = d.project_vertex(0, a);
    let e0t = d.idempotent(0) * &tail;
    let e0h = d.idempotent(0) * &head;
    let ratio = e0a.dot(&e0t) / (sk * e0a.norm_squared());
    let sign_e0: i8 = if ratio >= 0.0 { 1 } else { -1 };
    let expected = &e0a * (sk * f64::from(sign_e0));
    let res0 = EquationResidual {
        index: 0,
        tail: (&expected - e0t).amax(),
        head: (&expected - e0h).amax(),
    };
    residuals.push(res0);
    if res0.tail.max(res0.head) > TAU_COSP {
        return Ok(Cospectrality::NotCospectral(format!(
            "E_0 equation fails (tail {:e}, head {:e})",
            res0.tail, res0.head
        )));
    }

    #[allow(clippy::needless_range_loop)]
    for r in 1..d.len() {
        let theta = d.angles()[r];
        let col = d.project_vertex(r, a);
        let proj_tail = d.idempotent(r) * &tail;
        let proj_head = d.idempotent(r) * &head;
        if col.norm() <= supp_tol {
            let res = EquationResidual {
                index: r,
                tail: proj_tail.amax(),
                head: proj_head.amax(),
            };
            residuals.push(res);
            if res.tail.max(res.head) > TAU_COSP {
                return Ok(Cospectrality::NotCospectral(format!(
                    "E_{r} e_a = 0 but the target has weight {:e} on E_{r}",
                    res.tail.max(res.head)
                )));
            }
            continue;
        }
        let cos_delta = col.dot(&proj_tail) / (sk * col.norm_squared());
        if cos_delta.abs() > 1.0 + TAU_COSP {
            return Ok(Cospectrality::NotCospectral(format!(
                "cos δ_{r} = {cos_delta} lies outside [-1, 1]"
            )));
        }
        let cos_delta = cos_delta.clamp(-1.0, 1.0);
        let tail_res = (&col * (sk * cos_delta) - &proj_tail).amax();
        let mut delta = cos_delta.acos();
        let head_res = |delta: f64| (&col * (sk * (delta + theta).cos()) - &proj_head).amax();
        let head_res = if delta.sin().abs() < SIN_SNAP {
            delta = if cos_delta > 0.0 { 0.0 } else { PI };
            head_res(delta)
        } else {
            let (pos, neg) = (head_res(delta), head_res(-delta));
            if neg < pos {
                delta = -delta;
                neg
            } else {
                pos
            }
        };
        residuals.push(EquationResidual {
            index: r,
            tail: tail_res,
            head: head_res,
        });
        if tail_res.max(head_res) > TAU_COSP {
            return Ok(Cospectrality::NotCospectral(format!(
                "E_{r} equations fail (tail {tail_res:e}, head {head_res:e})"
            )));
        }
        deltas[r] = Some(delta);
    }

    Ok(Cospectrality::Cospectral(CospectralityWitness {
        phase,
        sign_e0,
        deltas,
        residuals,
    }))
}

/// Walk-level test: for every eigenprojection `F` of `U`, `F x = e^{iδ} F y`
/// for some real `δ`, and `F y = 0` whenever `F x = 0`.
pub fn check_strong_cospectrality_direct(
    ws: &WalkSpectrum,
    x: &State,
    y: &State,
) -> Result<Cospectrality<DirectWitness>> {
    for s in [x, y] {
        if s.len() != ws.dim() {
            return Err(Error::Dimension {
                expected: ws.dim(),
                got: s.len(),
            });
        }
    }
    let mut phases = Vec::new();
    for (label, _, f) in ws.projections() {
        let fx = f * x.amplitudes();
        let fy = f * y.amplitudes();
        let (nx, ny) = (fx.camax(), fy.camax());
        if nx <= TAU_COSP {
            if ny > TAU_COSP {
                return Ok(Cospectrality::NotCospectral(format!(
                    "{label:?}: F x = 0 but |F y| = {ny:e}"
                )));
            }
            phases.push(ProjectionPhase {
                label,
                delta: None,
                residual: ny,
            });
            continue;
        }
        let overlap = fy.dotc(&fx);
        if overlap.norm() == 0.0 {
            return Ok(Cospectrality::NotCospectral(format!(
                "{label:?}: F x and F y are orthogonal"
            )));
        }
        let delta = overlap.arg();
        let residual = (&fx - &fy * Complex64::from_polar(1.0, delta)).camax();
        if residual > TAU_COSP {
            return Ok(Cospectrality::NotCospectral(format!(
                "{label:?}: |F x − e^(iδ) F y| = {residual:e}"
            )));
        }
        phases.push(ProjectionPhase {
            label,
            delta: Some(delta),
            residual,
        });
    }
    Ok(Cospectrality::Cospectral(DirectWitness { phases }))
}

/// Whether an adjacency-level witness and a walk-level witness describe the
/// same phases: `δ_r` on `F_{+θ_r}`, `−δ_r` on `F_{−θ_r}`, and the `E_0`
/// sign as the phase on `F_1`.
pub fn witnesses_agree(adj: &CospectralityWitness, direct: &DirectWitness, tol: f64) -> bool {
    // F x = e^{iδ} F(e^{−iφ}y) = e^{i(δ − φ)} F y
    let phi = adj.phase;
    let sign_phase = if adj.sign_e0 > 0 { 0.0 } else { PI };
    let one_ok = direct
        .phase(ProjectionLabel::One)
        .is_some_and(|p| phase_distance(p, sign_phase - phi) < tol);
    one_ok
        && adj.deltas.iter().enumerate().skip(1).all(|(r, delta)| {
            let plus = direct.phase(ProjectionLabel::Plus(r));
            let minus = direct.phase(ProjectionLabel::Minus(r));
            match (delta, plus, minus) {
                (Some(d), Some(p), Some(m)) => {
                    phase_distance(p, *d - phi) < tol && phase_distance(m, -*d - phi) < tol
                }
                (None, None, None) => true,
                _ => false,
            }
        })
}

/// The vertex vector `v = (±E_0 + Σ_{r≥1} (−1)^{σ_r} E_r) e_a` and whether
/// `√n·v` is a ±1 vector within `tol`.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnTarget {
    pub vector: DVector<f64>,
    pub flat: bool,
}

impl ColumnTarget {
    /// `√n·v` rounded to ±1, when flat.
    pub fn sign_vector(&self) -> Option<DVector<f64>> {
        self.flat.then(|| self.vector.map(|x| x.signum()))
    }
}

pub fn col_dt_target(
    d: &SpectralDecomposition,
    a: usize,
    pattern: &SignPattern,
    tol: f64,
) -> ColumnTarget {
    let mut v = DVector::<f64>::zeros(d.n());
    for r in 0..d.len() {
        v += d.project_vertex(r, a) * pattern.coefficient(r);
    }
    let sn = (d.n() as f64).sqrt();
    let flat = v.iter().all(|x| ((x * sn).abs() - 1.0).abs() <= tol);
    ColumnTarget { vector: v, flat }
}

/// The unit target `y = D_tᵀw / √(nk)` for a ±1 vertex vector `w`.
pub fn flat_target(arcs: &ArcSpace, w: &DVector<f64>) -> Result<State> {
    if w.len() != arcs.n() {
        return Err(Error::Dimension {
            expected: arcs.n(),
            got: w.len(),
        });
    }
    let scale = 1.0 / ((arcs.n() * arcs.k()) as f64).sqrt();
    let y = arcs.tail_incidence().transpose() * w * scale;
    State::from_real(&y)
}
