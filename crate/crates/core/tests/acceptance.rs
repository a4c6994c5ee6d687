//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use arc_walk::cospec::{
    check_strong_cospectrality, check_strong_cospectrality_direct, col_dt_target, flat_target,
    witnesses_agree,
};
use arc_walk::graphs::{complete_graph, cycle_graph, petersen_graph, rook_graph, Graph};
use arc_walk::mixing::{
    family_parity_check, hadamard_search, local_mixing_report, phase_condition_check,
    simultaneous_mixing_check, Family, KroneckerStatus, MixingConfig, SignPattern, TimeLimits,
    TimeMode, Verdict, DEFAULT_RELATION_BOUND, DEFAULT_TAU_REL,
};
use arc_walk::walk::{
    entry_formula, evolve, flatness_deficit, initial_state, realness_deficit, State,
};
use common::{complexify, inf_norm, setup, test_graphs, Setup};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn unitarity() -> Outcome {
    let (mut orth, mut resolution) = (0.0f64, 0.0f64);
    for g in test_graphs() {
        let s = setup(g);
        let u = s.ws.transition();
        let id = DMatrix::<f64>::identity(u.nrows(), u.ncols());
        orth = orth.max(inf_norm(&complexify(&(u.transpose() * u - id))));
        resolution = resolution.max(inf_norm(&(s.ws.power(1.0) - complexify(u))));
    }
    outcome(
        orth < 1e-10 && resolution < 1e-9,
        format!("|U^T U - I| = {orth:.2e} (< 1e-10), |U - sum e^(i theta) F| = {resolution:.2e} (< 1e-9)"),
    )
}

fn correspondence() -> Outcome {
    let (mut pairs, mut one, mut c4_minus) = (0.0f64, 0.0f64, f64::NAN);
    for g in test_graphs() {
        let s = setup(g);
        let c = s.ws.correspondence(&s.d, &s.arcs);
        pairs = pairs.max(c.max_pair());
        one = one.max(c.one);
        if s.g.name() == "C4" {
            c4_minus = c.minus_one;
        }
    }
    outcome(
        pairs < 1e-9 && one < 1e-9 && c4_minus < 1e-9,
        format!("pairs {pairs:.2e}, F_1 {one:.2e}, C4 F_-1 vs kE_-k {c4_minus:.2e} (all < 1e-9)"),
    )
}

fn entry_formula_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for g in test_graphs() {
        let s = setup(g);
        for a in 0..s.g.n() {
            let x = initial_state(&s.arcs, a).unwrap();
            for t in 0..=50u32 {
                let f = entry_formula(&s.d, &s.arcs, a, t).unwrap();
                let e = evolve(&s.ws, &x, f64::from(t)).unwrap();
                worst = worst.max((f.amplitudes() - e.amplitudes()).camax());
            }
        }
    }
    outcome(
        worst < 1e-8,
        format!("max deviation over t = 0..50, all vertices: {worst:.2e} (< 1e-8)"),
    )
}

fn dichotomy() -> Outcome {
    let mut im = 0.0f64;
    for g in test_graphs().into_iter().filter(|g| !g.is_bipartite()) {
        let s = setup(g);
        for a in 0..s.g.n() {
            let x = initial_state(&s.arcs, a).unwrap();
            for t in [0.3, 1.0, 4.7, 12.0] {
                im = im.max(realness_deficit(&evolve(&s.ws, &x, t).unwrap()));
            }
        }
    }
    let s = setup(cycle_graph(4).unwrap());
    let xt = evolve(&s.ws, &initial_state(&s.arcs, 0).unwrap(), 0.5).unwrap();
    let expected = 1.0 / (4.0 * 2f64.sqrt());
    let colors = s.g.color_class().unwrap();
    let mut dev = 0.0f64;
    let mut signs_ok = true;
    for (i, &(u, _)) in s.arcs.arcs().iter().enumerate() {
        let z = xt.amplitudes()[i].im;
        dev = dev.max((z.abs() - expected).abs());
        signs_ok &= z.signum() == f64::from(colors[u] * colors[0]);
    }
    outcome(
        im < 1e-10 && dev < 1e-10 && signs_ok,
        format!(
            "non-bipartite max|Im| {im:.2e} (< 1e-10); C4 t=0.5 ||Im| - 1/(4 sqrt 2)| {dev:.2e}, signs by colour class: {signs_ok}"
        ),
    )
}

fn k4_uniform_mixing() -> Outcome {
    let start = Instant::now();
    let s = setup(complete_graph(4).unwrap());
    let t = PI / (-1.0f64 / 3.0).acos();
    let xt = evolve(&s.ws, &initial_state(&s.arcs, 0).unwrap(), t).unwrap();
    let flat = flatness_deficit(&xt);
    let h_col = DVector::from_fn(4, |i, _| if i == 0 { -1.0 } else { 1.0 });
    let y = flat_target(&s.arcs, &h_col).unwrap();
    let ip = y.inner(&xt);
    let gamma = ip / ip.norm();
    let residual = (xt.amplitudes() - y.amplitudes() * gamma).norm();
    let elapsed = start.elapsed();
    outcome(
        flat < 1e-9 && residual < 1e-9 && elapsed < Duration::from_secs(1),
        format!(
            "t = {t:.12}: flatness {flat:.2e}, residual {residual:.2e} (< 1e-9), {elapsed:.2?}"
        ),
    )
}

fn hadamard_discovery() -> Outcome {
    let search = |g: &Graph| hadamard_search(&setup(g.clone()).d).unwrap();
    let k4 = complete_graph(4).unwrap();
    let rook = rook_graph(4).unwrap();
    let up_to_sign = |h: &DMatrix<i64>, target: &DMatrix<i64>| h == target || &(-h) == target;

    let k4_found = search(&k4);
    let j_minus_2i = DMatrix::from_fn(4, 4, |i, j| if i == j { -1i64 } else { 1 });
    let k4_ok = k4_found.len() == 1 && up_to_sign(&k4_found[0].h, &j_minus_2i);

    let rook_found = search(&rook);
    let j_minus_2a = rook.adjacency().map(|v| 1 - 2 * v);
    let rook_ok = rook_found.len() == 1 && up_to_sign(&rook_found[0].h, &j_minus_2a);

    let exact = k4_found.iter().chain(&rook_found).all(|c| {
        let n = c.order() as i64;
        &c.h * c.h.transpose() == DMatrix::<i64>::identity(c.order(), c.order()) * n
    });
    let petersen_empty = search(&petersen_graph()).is_empty();
    let k5_empty = search(&complete_graph(5).unwrap()).is_empty();
    outcome(
        k4_ok && rook_ok && exact && petersen_empty && k5_empty,
        format!(
            "K4 {{J-2I}}: {k4_ok}, rook(4) {{J-2A}}: {rook_ok}, exact HH^T = nI: {exact}, Petersen empty: {petersen_empty}, K5 empty: {k5_empty}"
        ),
    )
}

fn parity() -> Outcome {
    let mut failed = Vec::new();
    for m in 1..=5 {
        for family in [Family::Plus, Family::Minus] {
            match family_parity_check(m, family) {
                Ok(trace) if trace.holds => {}
                Ok(trace) => failed.push(format!(
                    "m={m} {family:?} {} ({})",
                    trace.params,
                    trace.steps.last().cloned().unwrap_or_default()
                )),
                Err(e) => failed.push(format!("m={m} {family:?}: {e}")),
            }
        }
    }
    let mut numeric_ok = true;
    for g in [complete_graph(4).unwrap(), rook_graph(4).unwrap()] {
        let s = setup(g);
        for cert in hadamard_search(&s.d).unwrap() {
            let pattern = cert.pattern.unwrap();
            let angles: Vec<f64> = (1..s.d.len()).map(|r| s.d.angles()[r]).collect();
            let sigma: Vec<u8> = (1..s.d.len()).map(|r| pattern.sigma(r).unwrap()).collect();
            for mode in [TimeMode::Real, TimeMode::Integer] {
                let v = phase_condition_check(
                    &angles,
                    &sigma,
                    mode,
                    DEFAULT_RELATION_BOUND,
                    DEFAULT_TAU_REL,
                )
                .unwrap();
                numeric_ok &= v.status == KroneckerStatus::Holds && v.bound == 20;
            }
        }
    }
    let detail = if failed.is_empty() {
        format!("all 10 family members hold; numeric scan on K4, rook(4) holds up to L = 20: {numeric_ok}")
    } else {
        format!(
            "{}/10 family members hold, failing: {}; numeric scan on K4, rook(4) holds up to L = 20: {numeric_ok}",
            10 - failed.len(),
            failed.join("; ")
        )
    };
    outcome(failed.is_empty() && numeric_ok, detail)
}

fn rook_integer_mixing() -> Outcome {
    let start = Instant::now();
    let g = rook_graph(4).unwrap();
    let cfg = MixingConfig {
        limits: TimeLimits {
            integer_budget: 1_000_000,
            ..TimeLimits::default()
        },
        ..MixingConfig::default()
    };
    let mut worst = 0.0f64;
    let mut all_success = true;
    let mut keys: Vec<(SignPattern, f64)> = Vec::new();
    for a in 0..g.n() {
        let r = local_mixing_report(&g, a, 0.1, TimeMode::Integer, &cfg).unwrap();
        all_success &= r.verdict == Verdict::Success;
        worst = worst.max(r.residual.unwrap_or(f64::INFINITY));
        if let (Some(c), Some(t)) = (r.certificate, r.t) {
            keys.push((c.pattern, t));
        }
    }
    let shared = keys.len() == g.n() && keys.windows(2).all(|w| w[0] == w[1]);
    let elapsed = start.elapsed();
    let t = keys.first().map_or(f64::NAN, |k| k.1);
    outcome(
        all_success && worst <= 0.4 && shared && elapsed < Duration::from_secs(60),
        format!(
            "16/16 success: {all_success}, max residual {worst:.3e} (<= 0.4), shared certificate and t = {t}: {shared}, {elapsed:.2?}"
        ),
    )
}

fn cross_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut lines = Vec::new();
    let mut all = true;
    for g in [
        complete_graph(4).unwrap(),
        petersen_graph(),
        rook_graph(4).unwrap(),
    ] {
        let s = setup(g);
        let (total, agree) = agreement(&s, &mut rng);
        all &= total == agree;
        lines.push(format!("{} {agree}/{total}", s.g.name()));
    }
    outcome(all, format!("agreement: {}", lines.join(", ")))
}

fn agreement(s: &Setup, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let a = 0;
    let x = initial_state(&s.arcs, a).unwrap();
    let mut targets: Vec<State> = Vec::new();
    for mask in 0..1u64 << (s.d.len() - 1) {
        let col = col_dt_target(&s.d, a, &SignPattern::from_bits(s.d.len(), mask), 1e-6);
        if let Some(w) = col.sign_vector() {
            targets.push(flat_target(&s.arcs, &w).unwrap());
        }
    }
    targets.push(x.clone());
    targets.push(initial_state(&s.arcs, 1).unwrap());
    for t in [1.0, 2.5, 7.0, 13.3] {
        targets.push(evolve(&s.ws, &x, t).unwrap());
    }
    while targets.len() < 10 {
        let t: f64 = rng.gen_range(0.0..30.0);
        targets.push(evolve(&s.ws, &x, t).unwrap());
    }
    for _ in 0..20 {
        let v = DVector::from_fn(s.arcs.len(), |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), 0.0)
        });
        targets.push(State::normalized(v).unwrap());
    }
    let mut agree = 0;
    for y in &targets {
        let adj = check_strong_cospectrality(&s.d, &s.arcs, a, y).unwrap();
        let direct = check_strong_cospectrality_direct(&s.ws, &x, y).unwrap();
        let same = match (adj.witness(), direct.witness()) {
            (Some(w), Some(dw)) => witnesses_agree(w, dw, 1e-6),
            (None, None) => true,
            _ => false,
        };
        agree += usize::from(same);
    }
    (targets.len(), agree)
}

fn simultaneous() -> Outcome {
    let cfg = MixingConfig::default();
    let k4 =
        simultaneous_mixing_check(&complete_graph(4).unwrap(), 1e-6, TimeMode::Real, &cfg).unwrap();
    let rook =
        simultaneous_mixing_check(&rook_graph(4).unwrap(), 0.1, TimeMode::Integer, &cfg).unwrap();
    let petersen = simultaneous_mixing_check(&petersen_graph(), 0.1, TimeMode::Real, &cfg).unwrap();
    outcome(
        k4.verdict == Verdict::Success
            && rook.verdict == Verdict::Success
            && petersen.verdict == Verdict::NoFlatTarget,
        format!(
            "K4 {} (residual {:.2e}), rook(4) {} (residual {:.3e}), Petersen {}",
            k4.verdict,
            k4.residual.unwrap_or(f64::NAN),
            rook.verdict,
            rook.residual.unwrap_or(f64::NAN),
            petersen.verdict
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("unitarity and spectral resolution", unitarity),
        ("adjacency/walk projection correspondence", correspondence),
        ("closed-form entries vs evolution", entry_formula_oracle),
        ("real/imaginary dichotomy", dichotomy),
        ("K4 uniform mixing", k4_uniform_mixing),
        ("Hadamard discovery", hadamard_discovery),
        ("parity and phase conditions", parity),
        ("rook(4) integer-time mixing", rook_integer_mixing),
        ("strong cospectrality cross-oracle", cross_oracle),
        ("simultaneous mixing", simultaneous),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
