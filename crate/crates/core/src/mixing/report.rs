use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cospec::col_dt_target;
use crate::error::{Error, Result};
use crate::graphs::{validate_srg, Graph, SrgVerdict};
use crate::mixing::time::{time_search, TimeHit};
use crate::mixing::{
    hadamard_search_with, phase_condition_check, HadamardCertificate, KroneckerStatus,
    KroneckerVerdict, MixingConfig, SignPattern, TimeMode, MAX_PATTERN_BITS,
};
use crate::spectra::{eigendecompose_symmetric, eigenvalue_support, SpectralDecomposition};
use crate::walk::{build_arc_space, evolve, initial_state, walk_spectrum, ArcSpace, WalkSpectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Success,
    NoFlatTarget,
    PhaseObstruction,
    BudgetExhausted,
}

impl Verdict {
    pub fn is_success(self) -> bool {
        self == Verdict::Success
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Success => "success",
            Verdict::NoFlatTarget => "no-flat-target",
            Verdict::PhaseObstruction => "phase-obstruction",
            Verdict::BudgetExhausted => "budget-exhausted",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The sign pattern behind a target and, when it extends to a full regular
/// Hadamard matrix in the adjacency algebra, that matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub pattern: SignPattern,
    pub row_sum: Option<i64>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Vec<i64>>>,
}

impl CertificateSummary {
    fn new(pattern: SignPattern, cert: Option<&HadamardCertificate>) -> CertificateSummary {
        CertificateSummary {
            pattern,
            row_sum: cert.map(|c| c.row_sum),
            h: cert.map(HadamardCertificate::rows),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingReport {
    pub graph: String,
    /// `None` for a simultaneous check.
    pub vertex: Option<usize>,
    pub mode: TimeMode,
    pub epsilon: f64,
    pub certificate: Option<CertificateSummary>,
    pub kronecker: Option<KroneckerVerdict>,
    pub t: Option<f64>,
    pub gamma: Option<[f64; 2]>,
    pub residual: Option<f64>,
    pub verdict: Verdict,
    /// `max_r |e^{i(tθ_r + σ_rπ)} − 1|` at the reported time.
    pub phase_deficit: Option<f64>,
    /// Eigenvalue indices `r` with `E_r e_a ≠ 0` (for every `a` in a
    /// simultaneous check).
    pub support: Vec<usize>,
    pub notes: Vec<String>,
}

impl MixingReport {
    /// Copy with the Hadamard matrix removed from the certificate.
    pub fn without_matrix(&self) -> MixingReport {
        let mut r = self.clone();
        if let Some(c) = r.certificate.as_mut() {
            c.h = None;
        }
        r
    }
}

struct Prepared {
    d: SpectralDecomposition,
    arcs: ArcSpace,
    ws: WalkSpectrum,
}

fn prepare(g: &Graph, config: &MixingConfig) -> Result<Prepared> {
    g.require_regular()?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.is_bipartite() {
        return Err(Error::Bipartite);
    }
    let d = eigendecompose_symmetric(g, config.tau_group)?;
    let arcs = build_arc_space(g)?;
    let ws = walk_spectrum(&d, &arcs)?;
    Ok(Prepared { d, arcs, ws })
}

fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {eps}"
        )))
    }
}

fn scheme_note(g: &Graph) -> Result<Option<String>> {
    Ok(match validate_srg(g)? {
        SrgVerdict::Srg(p) => Some(format!(
            "strongly regular {p}: the certificate and time do not depend on the initial vertex"
        )),
        SrgVerdict::Complete => Some(
            "complete graph: the certificate and time do not depend on the initial vertex".into(),
        ),
        SrgVerdict::NotSrg => None,
    })
}

/// Outcome of pushing one sign pattern through the phase check, time search
/// and simulation.
struct Attempt {
    certificate: CertificateSummary,
    kronecker: KroneckerVerdict,
    hit: Option<TimeHit>,
    gamma: Option<Complex64>,
    residual: Option<f64>,
    verdict: Verdict,
}

impl Attempt {
    fn rank(&self) -> u8 {
        match self.verdict {
            Verdict::Success => 0,
            Verdict::BudgetExhausted => 1,
            Verdict::PhaseObstruction => 2,
            Verdict::NoFlatTarget => 3,
        }
    }
}

/// Phase check and time search for `pattern` on the indices `indices`;
/// `simulate` turns a time into `(γ, residual)`.
#[allow(clippy::too_many_arguments)]
fn attempt<F>(
    d: &SpectralDecomposition,
    indices: &[usize],
    certificate: CertificateSummary,
    eps: f64,
    mode: TimeMode,
    config: &MixingConfig,
    bound: f64,
    simulate: F,
) -> Result<Attempt>
where
    F: Fn(f64) -> Result<(Complex64, f64)>,
{
    let angles: Vec<f64> = indices.iter().map(|&r| d.angles()[r]).collect();
    let sigma: Vec<u8> = indices
        .iter()
        .map(|&r| certificate.pattern.sigma(r).unwrap_or(0))
        .collect();
    let kronecker =
        phase_condition_check(&angles, &sigma, mode, config.relation_bound, config.tau_rel)?;
    let mut out = Attempt {
        certificate,
        kronecker,
        hit: None,
        gamma: None,
        residual: None,
        verdict: Verdict::PhaseObstruction,
    };
    match &out.kronecker.status {
        KroneckerStatus::Violated(rel) => {
            log::info!(
                "pattern {} obstructed by relation {rel}",
                out.certificate.pattern
            );
            return Ok(out);
        }
        KroneckerStatus::Inconclusive => log::warn!(
            "phase condition inconclusive for pattern {}; searching for a time anyway",
            out.certificate.pattern
        ),
        KroneckerStatus::Holds => {}
    }
    let hit = match time_search(&angles, &sigma, eps, mode, &config.limits) {
        Ok(hit) => hit,
        Err(exhausted) => {
            out.hit = Some(exhausted.best);
            out.verdict = Verdict::BudgetExhausted;
            return Ok(out);
        }
    };
    let (gamma, residual) = simulate(hit.t)?;
    out.hit = Some(hit);
    out.gamma = Some(gamma);
    out.residual = Some(residual);
    out.verdict = if residual <= bound {
        Verdict::Success
    } else {
        Verdict::BudgetExhausted
    };
    Ok(out)
}

fn unit_phase(z: Complex64) -> Complex64 {
    if z.norm() > 0.0 {
        z / z.norm()
    } else {
        Complex64::new(1.0, 0.0)
    }
}

fn finish(mut report: MixingReport, attempts: Vec<Attempt>) -> MixingReport {
    let best = attempts.into_iter().min_by_key(Attempt::rank);
    match best {
        None => report.verdict = Verdict::NoFlatTarget,
        Some(a) => {
            report.certificate = Some(a.certificate);
            report.kronecker = Some(a.kronecker);
            report.t = a.hit.map(|h| h.t);
            report.phase_deficit = a.hit.map(|h| h.deficit);
            report.gamma = a.gamma.map(|g| [g.re, g.im]);
            report.residual = a.residual;
            report.verdict = a.verdict;
        }
    }
    report
}

/// Decides local ε-uniform mixing of the walk started at `a`.
///
/// Every sign pattern over the eigenvalue support of `a` whose column target
/// `(E_0 + Σ ±E_r)e_a` is flat is tried in turn. A pattern succeeds when the
/// phase condition holds, a time is found, and the simulated
/// `‖U^t x_a − γy‖` is at most `c_slack·ε` with `γ` the phase of
/// `⟨y, U^t x_a⟩`.
pub fn local_mixing_report(
    g: &Graph,
    a: usize,
    eps: f64,
    mode: TimeMode,
    config: &MixingConfig,
) -> Result<MixingReport> {
    g.check_vertex(a)?;
    check_epsilon(eps)?;
    let Prepared { d, arcs, ws } = prepare(g, config)?;
    let support = eigenvalue_support(&d, a);
    let indices: Vec<usize> = support.iter().copied().filter(|&r| r > 0).collect();
    if indices.len() > MAX_PATTERN_BITS {
        return Err(Error::TooManyEigenvalues {
            count: indices.len() + 1,
            limit: MAX_PATTERN_BITS + 1,
        });
    }

    let mut report = MixingReport {
        graph: g.name().to_string(),
        vertex: Some(a),
        mode,
        epsilon: eps,
        certificate: None,
        kronecker: None,
        t: None,
        gamma: None,
        residual: None,
        verdict: Verdict::NoFlatTarget,
        phase_deficit: None,
        support: support.clone(),
        notes: Vec::new(),
    };
    if support.len() < d.len() {
        report.notes.push(format!(
            "vertex {a} misses eigenvalue indices {:?}; their signs are unconstrained",
            (0..d.len())
                .filter(|r| !support.contains(r))
                .collect::<Vec<_>>()
        ));
    }

    let certificates = hadamard_search_with(&d, config.tau_flat)?;
    let x = initial_state(&arcs, a)?;
    let mut attempts = Vec::new();
    for bits in 0..1u64 << indices.len() {
        let mut sigma = vec![None; d.len() - 1];
        for (j, &r) in indices.iter().enumerate() {
            sigma[r - 1] = Some(((bits >> j) & 1) as u8);
        }
        let pattern = SignPattern::new(1, sigma);
        let column = col_dt_target(&d, a, &pattern, config.tau_flat);
        let Some(w) = column.sign_vector() else {
            continue;
        };
        let cert = certificates.iter().find(|c| {
            c.pattern
                .as_ref()
                .is_some_and(|p| indices.iter().all(|&r| p.sigma(r) == pattern.sigma(r)))
        });
        let y = crate::cospec::flat_target(&arcs, &w)?;
        let summary = CertificateSummary::new(pattern, cert);
        let simulate = |t: f64| -> Result<(Complex64, f64)> {
            let xt = evolve(&ws, &x, t)?;
            let gamma = unit_phase(y.inner(&xt));
            let residual = (xt.amplitudes() - y.amplitudes() * gamma).norm();
            Ok((gamma, residual))
        };
        let att = attempt(
            &d,
            &indices,
            summary,
            eps,
            mode,
            config,
            config.c_slack * eps,
            simulate,
        )?;
        let done = att.verdict.is_success();
        attempts.push(att);
        if done {
            break;
        }
    }
    let mut report = finish(report, attempts);
    if report.verdict.is_success() {
        report.notes.extend(scheme_note(g)?);
    }
    Ok(report)
}

/// Decides simultaneous ε-uniform mixing: whether `U^t D_tᵀ/√k` comes within
/// `c_slack·ε·√n` (Frobenius) of `γ·D_tᵀH/√(nk)` for a regular Hadamard
/// matrix `H` in the adjacency algebra.
pub fn simultaneous_mixing_check(
    g: &Graph,
    eps: f64,
    mode: TimeMode,
    config: &MixingConfig,
) -> Result<MixingReport> {
    check_epsilon(eps)?;
    let Prepared { d, arcs, ws } = prepare(g, config)?;
    let n = d.n();
    let supports: Vec<Vec<usize>> = (0..n).map(|a| eigenvalue_support(&d, a)).collect();
    let common: Vec<usize> = (0..d.len())
        .filter(|r| supports.iter().all(|s| s.contains(r)))
        .collect();

    let mut report = MixingReport {
        graph: g.name().to_string(),
        vertex: None,
        mode,
        epsilon: eps,
        certificate: None,
        kronecker: None,
        t: None,
        gamma: None,
        residual: None,
        verdict: Verdict::NoFlatTarget,
        phase_deficit: None,
        support: common.clone(),
        notes: Vec::new(),
    };
    if common.len() < d.len() {
        for (a, s) in supports
            .iter()
            .enumerate()
            .filter(|(_, s)| s.len() < d.len())
        {
            report
                .notes
                .push(format!("vertex {a} has eigenvalue support {s:?}"));
        }
        report
            .notes
            .push("eigenvalue support is not full at every vertex".into());
    }

    let certificates = hadamard_search_with(&d, config.tau_flat)?;
    let indices: Vec<usize> = (1..d.len()).collect();
    let scale = 1.0 / ((n * arcs.k()) as f64).sqrt();
    let dt_t = arcs.tail_incidence().transpose();
    let dt_c = dt_t.map(|v| Complex64::new(v, 0.0));
    let bound = config.c_slack * eps * (n as f64).sqrt();
    let mut attempts = Vec::new();
    for cert in &certificates {
        let pattern = cert
            .pattern
            .clone()
            .expect("search results carry a pattern");
        let hf = cert.h.map(|v| v as f64);
        let y: DMatrix<Complex64> = (&dt_t * hf * scale).map(|v| Complex64::new(v, 0.0));
        let simulate = |t: f64| -> Result<(Complex64, f64)> {
            let m = ws.power(t) * &dt_c * Complex64::from(1.0 / (arcs.k() as f64).sqrt());
            let gamma = unit_phase(y.ad_mul(&m).trace());
            Ok((gamma, (m - &y * gamma).norm()))
        };
        let att = attempt(
            &d,
            &indices,
            CertificateSummary::new(pattern, Some(cert)),
            eps,
            mode,
            config,
            bound,
            simulate,
        )?;
        let done = att.verdict.is_success();
        attempts.push(att);
        if done {
            break;
        }
    }
    let mut report = finish(report, attempts);
    if report.verdict.is_success() {
        report.notes.extend(scheme_note(g)?);
    }
    Ok(report)
}
