use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use spinpair::cluster::{self, ClusterGraph};
use spinpair::concurrence::{
    energy_estimate_c1, hypercubic_constant, infinite_range_constant, lattice_constants,
    LatticeConstant,
};
use spinpair::eigen::{DEFAULT_DEG_TOL, DEFAULT_K, DEFAULT_MAX_ITER, DEFAULT_SEED, DEFAULT_TOL};
use spinpair::report::{self, sig12, CheckStatus, ReportConfig};
use spinpair::{Error, SolverConfig};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_CONVERGENCE: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "spinpair",
    version,
    about = "Heisenberg cluster ground states and pair concurrence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ground energy, degeneracy and total spin.
    Ground(RunArgs),
    /// Full pair report: Γ, z, concurrence and classes for every pair.
    Pairs(RunArgs),
    /// Pair concurrence of the maximal-spin states for m = 0..N.
    Dicke(DickeArgs),
    /// Energy-based concurrence estimate C1.
    Estimate(EstimateArgs),
    /// Cross-formula and sum-rule checks; exits 1 if any check fails.
    Verify(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Preset id (e.g. chain:12, square:4x4) or path to a cluster JSON file.
    #[arg(long)]
    cluster: String,
    /// Down-spin count; defaults to N/2 rounded down.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_DEG_TOL)]
    deg_tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Worker threads for the matrix-vector product (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct DickeArgs {
    /// Number of sites.
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct EstimateArgs {
    /// chain, square, triangular, kagome, hypercubic:D or infinite-range:N.
    /// Without this or --energy, prints every named lattice.
    #[arg(long, conflicts_with_all = ["energy", "ratio"])]
    lattice: Option<String>,
    /// Ground energy per site |e_g|.
    #[arg(long, requires = "ratio")]
    energy: Option<f64>,
    /// Bonds per site N_n/N.
    #[arg(long, requires = "energy")]
    ratio: Option<f64>,
    #[command(flatten)]
    out: Output,
}

enum Failure {
    Lib(Error),
    Io(PathBuf, io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::NoConvergence { .. } | Error::WindowUnresolved { .. }) => {
                EXIT_CONVERGENCE
            }
            Failure::Lib(_) | Failure::Usage(_) => EXIT_VALIDATION,
            Failure::Io(..) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
            Failure::Usage(m) => write!(f, "{m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Ground(a) => {
            let (graph, cfg) = prepare(&a)?;
            let rep = with_threads(a.threads, || report::run_report(&graph, &cfg))?;
            let text = match a.out.format {
                Format::Json => {
                    let full = rep.to_json();
                    let summary = json!({
                        "cluster": full["cluster"],
                        "energy": full["energy"],
                        "avg_concurrence": full["avg_concurrence"],
                        "estimator_c1": full["estimator_c1"],
                    });
                    pretty(&summary)
                }
                Format::Csv => {
                    rep.to_csv()
                        .split("\n\n")
                        .next()
                        .unwrap_or_default()
                        .to_string()
                        + "\n"
                }
            };
            emit(&a.out, &text)?;
            Ok(0)
        }
        Command::Pairs(a) => {
            let (graph, cfg) = prepare(&a)?;
            let rep = with_threads(a.threads, || report::run_report(&graph, &cfg))?;
            let text = match a.out.format {
                Format::Json => pretty(&rep.to_json()),
                Format::Csv => rep.to_csv(),
            };
            emit(&a.out, &text)?;
            Ok(0)
        }
        Command::Verify(a) => {
            let (graph, cfg) = prepare(&a)?;
            let v = with_threads(a.threads, || report::verify(&graph, &cfg))?;
            let text = match a.out.format {
                Format::Json => pretty(&json!({
                    "cluster": v.cluster,
                    "passed": v.passed(),
                    "checks": v.checks.iter().map(|c| json!({
                        "name": c.name,
                        "status": status_name(c.status),
                        "detail": c.detail,
                    })).collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    let mut s = String::from("check,status,detail\n");
                    for c in &v.checks {
                        s += &format!(
                            "{},{},\"{}\"\n",
                            c.name,
                            status_name(c.status),
                            c.detail.replace('"', "'")
                        );
                    }
                    s
                }
            };
            emit(&a.out, &text)?;
            Ok(if v.passed() { 0 } else { EXIT_VERIFY_FAILED })
        }
        Command::Dicke(a) => {
            let rows = report::dicke_table(a.n)?;
            let text = match a.out.format {
                Format::Json => pretty(&report::dicke_json(a.n, &rows)),
                Format::Csv => report::dicke_csv(&rows),
            };
            emit(&a.out, &text)?;
            Ok(0)
        }
        Command::Estimate(a) => {
            let entries: Vec<LatticeConstant> = match (&a.lattice, a.energy, a.ratio) {
                (Some(name), _, _) => vec![lattice_by_name(name)?],
                (None, Some(e), Some(r)) => vec![LatticeConstant {
                    name: "custom",
                    e_g_abs: e.abs(),
                    bonds_per_site: r,
                }],
                _ => lattice_constants(),
            };
            let mut rows = Vec::new();
            for l in entries {
                rows.push((l, energy_estimate_c1(l.e_g_abs, l.bonds_per_site)?));
            }
            let text = match a.out.format {
                Format::Json => pretty(&Value::Array(
                    rows.iter()
                        .map(|(l, c)| {
                            json!({
                                "lattice": l.name,
                                "e_g_abs": sig12(l.e_g_abs),
                                "bonds_per_site": sig12(l.bonds_per_site),
                                "estimator_c1": sig12(*c),
                            })
                        })
                        .collect(),
                )),
                Format::Csv => {
                    let mut s = String::from("lattice,e_g_abs,bonds_per_site,estimator_c1\n");
                    for (l, c) in &rows {
                        s += &format!(
                            "{},{},{},{}\n",
                            l.name,
                            sig12(l.e_g_abs),
                            sig12(l.bonds_per_site),
                            sig12(*c)
                        );
                    }
                    s
                }
            };
            emit(&a.out, &text)?;
            Ok(0)
        }
    }
}

fn status_name(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::NotApplicable => "not-applicable",
    }
}

fn lattice_by_name(name: &str) -> Result<LatticeConstant, Failure> {
    let parse_n = |s: &str| {
        s.parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Failure::Usage(format!("bad lattice parameter in `{name}`")))
    };
    if let Some(d) = name.strip_prefix("hypercubic:") {
        return Ok(hypercubic_constant(parse_n(d)?));
    }
    if let Some(n) = name.strip_prefix("infinite-range:") {
        let n = parse_n(n)?;
        if n < 2 {
            return Err(Failure::Usage("infinite-range needs N >= 2".into()));
        }
        return Ok(infinite_range_constant(n));
    }
    lattice_constants().into_iter().find(|l| l.name == name).ok_or_else(|| {
        Failure::Usage(format!(
            "unknown lattice `{name}`; valid: chain, square, triangular, kagome, hypercubic:D, infinite-range:N"
        ))
    })
}

fn prepare(a: &RunArgs) -> Result<(ClusterGraph, ReportConfig), Failure> {
    for (flag, v) in [("--tol", a.tol), ("--deg-tol", a.deg_tol)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Failure::Usage(format!("{flag} must be positive, got {v}")));
        }
    }
    if a.k == 0 || a.max_iter == 0 {
        return Err(Failure::Usage("--k and --max-iter must be positive".into()));
    }
    let graph = load_graph(&a.cluster)?;
    let cfg = ReportConfig {
        sector_m: a.m,
        solver: SolverConfig {
            k: a.k,
            tol: a.tol,
            deg_tol: a.deg_tol,
            max_iter: a.max_iter,
            seed: a.seed,
        },
        ..ReportConfig::default()
    };
    Ok((graph, cfg))
}

/// Preset ids contain a colon; anything else (or an existing path) is read
/// as a cluster file.
fn load_graph(spec: &str) -> Result<ClusterGraph, Failure> {
    let path = Path::new(spec);
    if path.exists() || !spec.contains(':') {
        let text = fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
        return Ok(cluster::load_cluster(&text)?);
    }
    Ok(cluster::preset(spec)?)
}

fn with_threads<T: Send>(
    threads: usize,
    f: impl FnOnce() -> spinpair::Result<T> + Send,
) -> Result<T, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    Ok(pool.install(f)?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn emit(out: &Output, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(p.clone(), e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e)),
    }
}
