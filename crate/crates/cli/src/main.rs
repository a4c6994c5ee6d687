use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use arc_walk::graphs::{
    complement, complete_graph, cycle_graph, parse_edge_list, petersen_graph, rook_graph,
    srg_from_regular_hadamard, validate_srg, Graph, SrgVerdict,
};
use arc_walk::mixing::{
    kronecker_hadamard_seed, local_mixing_report, simultaneous_mixing_check, MixingConfig,
    MixingReport, TimeMode,
};
use arc_walk::spectra::{eigendecompose_symmetric, eigenvalue_support, SpectralResiduals};
use arc_walk::walk::{
    arc_distribution, build_arc_space, evolve, flatness_deficit, imaginary_profile, initial_state,
    realness_deficit, walk_spectrum, Correspondence, ImaginaryProfile, WalkResiduals,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "arc-walk",
    version,
    about = "Grover-coin arc walks on regular graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectrum, strong regularity and walk/adjacency correspondence residuals.
    Analyze(AnalyzeArgs),
    /// Decide ε-uniform mixing from a vertex, or simultaneously from all vertices.
    Mix(MixArgs),
    /// Evolve the walk from a vertex and report the state and its deficits.
    Evolve(EvolveArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// k4, k<n>, c<n>, kn:<n>, cycle:<n>, rook:<q>, petersen,
    /// hadamard-srg:<m> (m = 1 or 2), complement:<builtin>
    #[arg(long)]
    builtin: Option<String>,
    /// Edge-list file: header "n m", then one "u v" pair per line.
    #[arg(long)]
    edges: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
    #[arg(long, default_value_t = arc_walk::spectra::DEFAULT_TAU_GROUP)]
    tau_group: f64,
}

#[derive(Args, Debug)]
struct MixArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
    #[arg(long, default_value_t = 0)]
    vertex: usize,
    /// Check all vertices at once against a common Hadamard matrix.
    #[arg(long)]
    simultaneous: bool,
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    #[arg(long, default_value = "real")]
    mode: TimeMode,
    /// Coefficient bound L for the integer-relation scan.
    #[arg(long = "bound-l")]
    bound_l: Option<u32>,
    /// Real-time search horizon.
    #[arg(long)]
    t_max: Option<f64>,
    /// Largest integer time scanned.
    #[arg(long)]
    budget: Option<u64>,
    /// Include the Hadamard matrix in the report.
    #[arg(long)]
    emit_matrix: bool,
    #[arg(long)]
    tau_group: Option<f64>,
    #[arg(long)]
    tau_flat: Option<f64>,
    #[arg(long)]
    tau_rel: Option<f64>,
    #[arg(long)]
    c_slack: Option<f64>,
}

#[derive(Args, Debug)]
struct EvolveArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    output: Output,
    #[arg(long, default_value_t = 0)]
    vertex: usize,
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = arc_walk::spectra::DEFAULT_TAU_GROUP)]
    tau_group: f64,
}

type CliResult<T> = Result<T, String>;

fn builtin(spec: &str) -> CliResult<Graph> {
    let param = |s: &str| -> CliResult<usize> {
        s.parse()
            .map_err(|_| format!("bad parameter {s:?} in builtin {spec:?}"))
    };
    let g = if let Some(inner) = spec.strip_prefix("complement:") {
        complement(&builtin(inner)?)
    } else if let Some((kind, arg)) = spec.split_once(':') {
        let v = param(arg)?;
        match kind {
            "kn" => complete_graph(v),
            "cycle" => cycle_graph(v),
            "rook" => rook_graph(v),
            "hadamard-srg" => {
                if v > 2 {
                    return Err(format!("hadamard-srg supports m = 1 or 2, got {v}"));
                }
                kronecker_hadamard_seed(v).and_then(|h| srg_from_regular_hadamard(&h))
            }
            _ => return Err(format!("unknown builtin {spec:?}")),
        }
        .map_err(|e| e.to_string())?
    } else if spec == "petersen" {
        petersen_graph()
    } else if let Some(n) = spec.strip_prefix('k') {
        complete_graph(param(n)?).map_err(|e| e.to_string())?
    } else if let Some(n) = spec.strip_prefix('c') {
        cycle_graph(param(n)?).map_err(|e| e.to_string())?
    } else {
        return Err(format!("unknown builtin {spec:?}"));
    };
    Ok(g)
}

fn load(source: &Source) -> CliResult<Graph> {
    match (&source.builtin, &source.edges) {
        (Some(b), None) => builtin(b),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "graph".into());
            parse_edge_list(&text)
                .map(|g| g.with_name(name))
                .map_err(|e| format!("{}: {e}", path.display()))
        }
        _ => Err("give exactly one of --builtin or --edges".into()),
    }
}

fn emit<T: Serialize>(value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct AnalyzeReport {
    graph: String,
    n: usize,
    degree: Option<usize>,
    connected: bool,
    bipartite: bool,
    srg: SrgVerdict,
    eigenvalues: Vec<f64>,
    multiplicities: Vec<usize>,
    angles: Vec<f64>,
    /// Eigenvalue support of each vertex.
    support: Vec<Vec<usize>>,
    spectral_residuals: SpectralResiduals,
    walk_residuals: WalkResiduals,
    correspondence: Correspondence,
}

fn analyze(args: &AnalyzeArgs) -> CliResult<ExitCode> {
    let g = load(&args.source)?;
    let d = eigendecompose_symmetric(&g, args.tau_group).map_err(|e| e.to_string())?;
    let arcs = build_arc_space(&g).map_err(|e| e.to_string())?;
    let ws = walk_spectrum(&d, &arcs).map_err(|e| e.to_string())?;
    let report = AnalyzeReport {
        graph: g.name().to_string(),
        n: g.n(),
        degree: g.degree(),
        connected: g.is_connected(),
        bipartite: g.is_bipartite(),
        srg: validate_srg(&g).map_err(|e| e.to_string())?,
        eigenvalues: d.eigenvalues().to_vec(),
        multiplicities: d.multiplicities().to_vec(),
        angles: d.angles().to_vec(),
        support: (0..g.n()).map(|a| eigenvalue_support(&d, a)).collect(),
        spectral_residuals: d.residuals(&g.adjacency_f64()),
        walk_residuals: ws.residuals(),
        correspondence: ws.correspondence(&d, &arcs),
    };
    match args.output.format {
        Format::Json => emit(&report)?,
        Format::Text => {
            println!("graph        {}", report.graph);
            println!("vertices     {}", report.n);
            println!(
                "degree       {}",
                report.degree.map_or("-".into(), |k| k.to_string())
            );
            println!("bipartite    {}", report.bipartite);
            match report.srg {
                SrgVerdict::Srg(p) => println!("srg          {p}"),
                SrgVerdict::Complete => println!("srg          complete"),
                SrgVerdict::NotSrg => println!("srg          no"),
            }
            println!(
                "{:>4} {:>12} {:>6} {:>12}",
                "r", "eigenvalue", "mult", "theta"
            );
            for r in 0..d.len() {
                println!(
                    "{r:>4} {:>12.6} {:>6} {:>12.9}",
                    report.eigenvalues[r], report.multiplicities[r], report.angles[r]
                );
            }
            let full = report.support.iter().all(|s| s.len() == d.len());
            if full {
                println!("support      full at every vertex");
            } else {
                for (a, s) in report.support.iter().enumerate() {
                    println!("support[{a}]   {s:?}");
                }
            }
            println!(
                "spectral residual       {:.3e}",
                report.spectral_residuals.max()
            );
            println!(
                "walk residual           {:.3e}",
                report.walk_residuals.max()
            );
            println!(
                "correspondence (pairs)  {:.3e}",
                report.correspondence.max_pair()
            );
            println!("correspondence (+1)     {:.3e}", report.correspondence.one);
            println!(
                "correspondence (-1)     {:.3e}",
                report.correspondence.minus_one
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn mix(args: &MixArgs) -> CliResult<ExitCode> {
    let g = load(&args.source)?;
    let mut config = MixingConfig::default();
    if let Some(l) = args.bound_l {
        config.relation_bound = l;
    }
    if let Some(t) = args.t_max {
        config.limits.t_max = Some(t);
    }
    if let Some(b) = args.budget {
        config.limits.integer_budget = b;
    }
    if let Some(v) = args.tau_group {
        config.tau_group = v;
    }
    if let Some(v) = args.tau_flat {
        config.tau_flat = v;
    }
    if let Some(v) = args.tau_rel {
        config.tau_rel = v;
    }
    if let Some(v) = args.c_slack {
        config.c_slack = v;
    }
    let report = if args.simultaneous {
        simultaneous_mixing_check(&g, args.epsilon, args.mode, &config)
    } else {
        local_mixing_report(&g, args.vertex, args.epsilon, args.mode, &config)
    }
    .map_err(|e| e.to_string())?;
    let report = if args.emit_matrix {
        report
    } else {
        report.without_matrix()
    };
    match args.output.format {
        Format::Json => emit(&report)?,
        Format::Text => print_mixing(&report, g.n()),
    }
    Ok(if report.verdict.is_success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn print_mixing(r: &MixingReport, n: usize) {
    println!("graph        {}", r.graph);
    match r.vertex {
        Some(a) => println!("vertex       {a}"),
        None => println!("vertex       all (simultaneous)"),
    }
    println!("mode         {}", r.mode);
    println!("epsilon      {:e}", r.epsilon);
    println!("verdict      {}", r.verdict);
    if let Some(c) = &r.certificate {
        println!("pattern      {}", c.pattern);
        if let Some(s) = c.row_sum {
            println!("row sum      {s}");
        }
        if let Some(h) = c.h.as_ref().filter(|_| n <= 20) {
            println!("H");
            for row in h {
                let cells: Vec<&str> = row
                    .iter()
                    .map(|&v| if v > 0 { " +" } else { " -" })
                    .collect();
                println!("  {}", cells.concat());
            }
        }
    }
    if let Some(k) = &r.kronecker {
        let status = match &k.status {
            arc_walk::mixing::KroneckerStatus::Holds => "holds".to_string(),
            arc_walk::mixing::KroneckerStatus::Violated(rel) => format!("violated by {rel}"),
            arc_walk::mixing::KroneckerStatus::Inconclusive => "inconclusive".to_string(),
        };
        println!(
            "phases       {status} (L = {}, {} relation(s))",
            k.bound,
            k.relations.len()
        );
    }
    if let Some(t) = r.t {
        println!("t            {t:.12}");
    }
    if let Some(d) = r.phase_deficit {
        println!("deficit      {d:.3e}");
    }
    if let Some([re, im]) = r.gamma {
        println!("gamma        {re:.9} {im:+.9}i");
    }
    if let Some(res) = r.residual {
        println!("residual     {res:.3e}");
    }
    for note in &r.notes {
        println!("note         {note}");
    }
}

#[derive(Serialize)]
struct EvolveReport {
    graph: String,
    vertex: usize,
    t: f64,
    state: Vec<[f64; 2]>,
    distribution: Vec<f64>,
    flatness_deficit: f64,
    realness_deficit: f64,
    imaginary_profile: Option<ImaginaryProfile>,
}

fn evolve_cmd(args: &EvolveArgs) -> CliResult<ExitCode> {
    let g = load(&args.source)?;
    let d = eigendecompose_symmetric(&g, args.tau_group).map_err(|e| e.to_string())?;
    let arcs = build_arc_space(&g).map_err(|e| e.to_string())?;
    let ws = walk_spectrum(&d, &arcs).map_err(|e| e.to_string())?;
    let x = initial_state(&arcs, args.vertex).map_err(|e| e.to_string())?;
    let xt = evolve(&ws, &x, args.t).map_err(|e| e.to_string())?;
    let report = EvolveReport {
        graph: g.name().to_string(),
        vertex: args.vertex,
        t: args.t,
        state: xt.to_pairs(),
        distribution: arc_distribution(&xt),
        flatness_deficit: flatness_deficit(&xt),
        realness_deficit: realness_deficit(&xt),
        imaginary_profile: imaginary_profile(&g, &arcs, &xt, args.vertex, args.t),
    };
    match args.output.format {
        Format::Json => emit(&report)?,
        Format::Text => {
            println!("graph        {}", report.graph);
            println!("vertex       {}", report.vertex);
            println!("t            {}", report.t);
            if g.n() <= 20 {
                println!("{:>6} {:>6} {:>14} {:>14}", "tail", "head", "re", "im");
                for (&(u, v), [re, im]) in arcs.arcs().iter().zip(&report.state) {
                    println!("{u:>6} {v:>6} {re:>14.9} {im:>14.9}");
                }
            }
            println!("flatness deficit  {:.3e}", report.flatness_deficit);
            println!("realness deficit  {:.3e}", report.realness_deficit);
            if let Some(p) = report.imaginary_profile {
                println!(
                    "|Im| expected {:.9}, observed [{:.9}, {:.9}], deviation {:.3e}",
                    p.expected_abs, p.min_abs, p.max_abs, p.max_deviation
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn configure_threads() {
    let Ok(value) = std::env::var("ARC_WALK_THREADS") else {
        return;
    };
    match value.parse::<usize>() {
        Ok(n) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
            {
                log::warn!("could not configure thread pool: {e}");
            }
        }
        Err(_) => log::warn!("ignoring ARC_WALK_THREADS={value:?}"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    configure_threads();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Mix(args) => mix(args),
        Command::Evolve(args) => evolve_cmd(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
