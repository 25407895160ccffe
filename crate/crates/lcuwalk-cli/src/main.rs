//! Command-line harness: single simulations, parameter sweeps, verification
//! suites, and instance generation.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 I/O error. Logging level comes from the LCUWALK_LOG environment
//! variable (error, info, debug).

use std::io::Write;
use std::path::PathBuf;

mod chart;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcuwalk::batch::{self, SimJob};
use lcuwalk::hamiltonian::{
    self, make_blown_up_parity, make_parity_path, make_random_sparse, ParitySpec, ParityVariant,
    SparseHamiltonian,
};
use lcuwalk::simulator::{self, Strategy};
use lcuwalk::verify;
use lcuwalk::{Error, Result};

#[derive(Parser)]
#[command(
    name = "lcuwalk",
    version,
    about = "Desk-scale simulator and verifier for walk-based Hamiltonian simulation"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one simulation against the exact oracle and emit a JSON report.
    Simulate(SimulateArgs),
    /// Sweep parameter axes and emit CSV rows.
    Sweep(SweepArgs),
    /// Run a verification suite with fixed seeds.
    Verify(VerifyArgs),
    /// Generate a Hamiltonian instance file.
    Instance(InstanceArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InstanceKind {
    Random,
    Parity,
    Blownup,
    File,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    H1,
    H2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Fixed,
    Tradeoff,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct InstanceSelect {
    /// Instance family.
    #[arg(long, value_enum, default_value = "random")]
    instance: InstanceKind,
    /// Qubit count for random instances.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Sparsity bound (random) or blow-up factor (blownup).
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Largest entry magnitude for random instances.
    #[arg(long, default_value_t = 1.0)]
    h_max: f64,
    /// RNG seed.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Path length N for parity families.
    #[arg(long = "N")]
    path_len: Option<usize>,
    /// Bit string x for parity families (e.g. 1011).
    #[arg(long)]
    x: Option<String>,
    /// Which path Hamiltonian to build for --instance parity.
    #[arg(long, value_enum, default_value = "h2")]
    variant: VariantArg,
    /// Instance file to load for --instance file.
    #[arg(long)]
    file: Option<PathBuf>,
}

/// An instance plus the bookkeeping needed for parity fidelity reporting.
struct BuiltInstance {
    h: SparseHamiltonian,
    parity: Option<(ParitySpec, ParityVariant)>,
    auto_time: Option<f64>,
}

impl InstanceSelect {
    fn build(&self) -> Result<BuiltInstance> {
        match self.instance {
            InstanceKind::Random => Ok(BuiltInstance {
                h: make_random_sparse(self.n, self.d, self.h_max, self.seed)?,
                parity: None,
                auto_time: None,
            }),
            InstanceKind::Parity => {
                let n_len = self.path_len.ok_or_else(|| {
                    Error::Parameter("--N is required for parity instances".into())
                })?;
                let bits = match (&self.x, self.variant) {
                    (Some(s), _) => ParitySpec::parse_bits(s)?,
                    (None, VariantArg::H1) => vec![false; n_len],
                    (None, VariantArg::H2) => {
                        return Err(Error::Parameter(
                            "--x is required for the twisted double path".into(),
                        ))
                    }
                };
                let spec = ParitySpec::new(n_len, bits, 1)?;
                let variant = match self.variant {
                    VariantArg::H1 => ParityVariant::H1,
                    VariantArg::H2 => ParityVariant::H2,
                };
                Ok(BuiltInstance {
                    h: make_parity_path(&spec, variant)?,
                    parity: Some((spec, variant)),
                    auto_time: Some(std::f64::consts::FRAC_PI_2),
                })
            }
            InstanceKind::Blownup => {
                let n_len = self.path_len.ok_or_else(|| {
                    Error::Parameter("--N is required for blown-up instances".into())
                })?;
                let bits = self
                    .x
                    .as_ref()
                    .map(|s| ParitySpec::parse_bits(s))
                    .transpose()?
                    .ok_or_else(|| {
                        Error::Parameter("--x is required for blown-up instances".into())
                    })?;
                let spec = ParitySpec::new(n_len, bits, self.d)?;
                let t_auto = n_len as f64 * std::f64::consts::PI / (2.0 * self.d as f64);
                Ok(BuiltInstance {
                    h: make_blown_up_parity(&spec)?,
                    parity: Some((spec, ParityVariant::H2)),
                    auto_time: Some(t_auto),
                })
            }
            InstanceKind::File => {
                let path = self
                    .file
                    .as_ref()
                    .ok_or_else(|| Error::Parameter("--file is required".into()))?;
                Ok(BuiltInstance {
                    h: hamiltonian::load_json(path)?,
                    parity: None,
                    auto_time: None,
                })
            }
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    select: InstanceSelect,
    /// Evolution time, or "auto" for the parity transport time.
    #[arg(long, default_value = "auto")]
    t: String,
    /// Total error budget.
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    /// Segment strategy.
    #[arg(long, value_enum, default_value = "fixed")]
    strategy: StrategyArg,
    /// Tradeoff exponent (only with --strategy tradeoff).
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Walk scale X; defaults to the largest entry magnitude.
    #[arg(long)]
    x_scale: Option<f64>,
    /// Where to write the JSON report (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Base qubit count for the random instances.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// RNG seed for the instances.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Comma-separated tau values (tau = t X d_pow2).
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    taus: Vec<f64>,
    /// Comma-separated error budgets.
    #[arg(long, value_delimiter = ',', default_value = "1e-6")]
    epsilons: Vec<f64>,
    /// Comma-separated sparsities.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    ds: Vec<usize>,
    /// Comma-separated tradeoff exponents; 0 selects fixed segments.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    alphas: Vec<f64>,
    /// Worker threads for the sweep (0 = library default).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Where to write the CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also emit a self-contained SVG chart of queries against tau.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name: walk, bessel, lcu, diamond, parity, simulation, scaling,
    /// or all.
    suite: String,
    /// RNG seed for the suite instances.
    #[arg(long, default_value_t = 20_240_901)]
    seed: u64,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct InstanceArgs {
    #[command(flatten)]
    select: InstanceSelect,
    /// Destination file.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("LCUWALK_LOG", "error"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Simulate(args) => cmd_simulate(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Instance(args) => cmd_instance(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Io(_) => 3u8,
                Error::Verification(_) => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn parse_time(raw: &str, auto: Option<f64>) -> Result<f64> {
    if raw == "auto" {
        return auto.ok_or_else(|| {
            Error::Parameter("--t auto is only defined for parity instances".into())
        });
    }
    raw.parse::<f64>()
        .map_err(|_| Error::Parameter(format!("invalid time '{raw}'")))
}

fn strategy_of(arg: StrategyArg, alpha: f64) -> Strategy {
    match arg {
        StrategyArg::Fixed => Strategy::FixedZ,
        StrategyArg::Tradeoff => Strategy::Tradeoff { alpha },
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode> {
    let built = args.select.build()?;
    let t = parse_time(&args.t, built.auto_time)?;
    let strategy = strategy_of(args.strategy, args.alpha);
    let plan = simulator::plan_segments(&built.h, t, args.eps, strategy, args.x_scale)?;
    let report = simulator::run(&built.h, &plan)?;
    let fidelity = built.parity.as_ref().map(|(spec, variant)| match variant {
        ParityVariant::H1 => {
            // transport |0> -> |N>
            report.effective[[spec.path_len, 0]].norm()
        }
        ParityVariant::H2 => {
            verify::parity_transport_fidelity(&report.effective, spec, built.h.dim())
        }
    });
    let summary = format!(
        "spectral_error = {:.3e}  diamond_bound = {:.3e}  queries = {}  segments = {}{}",
        report.spectral_error,
        report.diamond_bound,
        report.queries,
        report.segments,
        fidelity.map_or(String::new(), |f| format!("  parity_fidelity = {f:.7}")),
    );
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Parameter(format!("serialization: {e}")))?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, json + "\n")?;
            println!("{summary}");
            println!("report written to {}", path.display());
        }
        None => {
            println!("{json}");
            eprintln!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

const CSV_HEADER: &str = "tau,epsilon,d,alpha,k,segments,l,queries,spectral_error,wall_ms";

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    if args.taus.is_empty() || args.epsilons.is_empty() || args.ds.is_empty() || args.alphas.is_empty()
    {
        return Err(Error::Parameter("sweep axes must be non-empty".into()));
    }
    #[cfg(feature = "parallel")]
    if args.jobs > 0 {
        // best effort: the global pool can only be configured once
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build_global();
    }
    let mut jobs = Vec::new();
    let mut meta = Vec::new();
    for &tau in &args.taus {
        for &eps in &args.epsilons {
            for &d in &args.ds {
                for &alpha in &args.alphas {
                    let h = make_random_sparse(args.n, d, 1.0, args.seed)?;
                    let d_pow2 = d.next_power_of_two();
                    let t = tau / (h.h_max * d_pow2 as f64);
                    let strategy = if alpha == 0.0 {
                        Strategy::FixedZ
                    } else {
                        Strategy::Tradeoff { alpha }
                    };
                    meta.push((tau, eps, d, alpha));
                    jobs.push(SimJob {
                        label: format!("tau{tau}-eps{eps}-d{d}-a{alpha}"),
                        h,
                        t,
                        epsilon: eps,
                        strategy,
                        x_scale: None,
                    });
                }
            }
        }
    }
    let results = batch::run_all(&jobs);
    let mut reports = Vec::new();
    for (label, result) in results {
        reports.push(result.map_err(|e| Error::Verification(format!("{label}: {e}")))?);
    }
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for ((tau, eps, d, alpha), report) in meta.iter().zip(&reports) {
        csv.push_str(&format!(
            "{tau},{eps},{d},{alpha},{},{},{},{},{:e},{:.3}\n",
            report.k,
            report.segments,
            report.l,
            report.queries,
            report.spectral_error,
            report.wall_ms
        ));
    }
    // group rows by (epsilon, d, alpha) for the fit report and the chart
    let mut groups: std::collections::BTreeMap<String, Vec<(f64, f64, f64)>> =
        Default::default();
    for ((tau, eps, d, alpha), report) in meta.iter().zip(&reports) {
        groups
            .entry(format!("eps={eps} d={d} alpha={alpha}"))
            .or_default()
            .push((*tau, report.queries as f64, *eps));
    }
    for (label, rows) in &groups {
        if rows.len() < 3 {
            continue;
        }
        // least squares on the log-transformed envelope model
        // queries ~ c * tau * log(tau/eps) / loglog(tau/eps)
        let mut num = 0.0;
        let mut den = 0.0;
        let mut feats = Vec::new();
        for &(tau, q, eps) in rows {
            let x = (tau / eps).ln();
            let f = tau * x / x.ln();
            num += q * f;
            den += f * f;
            feats.push((q, f));
        }
        let c = num / den;
        let worst = feats
            .iter()
            .map(|(q, f)| ((q - c * f) / (c * f)).abs())
            .fold(0.0_f64, f64::max);
        eprintln!(
            "fit [{label}]: queries ~ {c:.2} tau log(tau/eps)/loglog(tau/eps), max rel residual {worst:.3}"
        );
    }
    if let Some(path) = &args.svg {
        let series: Vec<chart::Series> = groups
            .iter()
            .map(|(label, rows)| chart::Series {
                label: label.clone(),
                points: rows.iter().map(|&(tau, q, _)| (tau, q)).collect(),
            })
            .collect();
        std::fs::write(path, chart::render(&series))?;
    }
    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => {
            std::io::stdout().write_all(csv.as_bytes())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let reports = verify::suite_by_name(&args.suite, args.seed)?;
    let all_passed = reports.iter().all(|r| r.passed());
    match args.format {
        FormatArg::Json => {
            let json = serde_json::to_string_pretty(&reports)
                .map_err(|e| Error::Parameter(format!("serialization: {e}")))?;
            println!("{json}");
        }
        FormatArg::Text => {
            for r in &reports {
                println!("suite {} [{:.0} ms]", r.suite, r.wall_ms);
                for c in &r.checks {
                    println!(
                        "  {} {}: measured {:.3e}, bound {:.3e}",
                        if c.pass { "pass" } else { "FAIL" },
                        c.name,
                        c.measured,
                        c.bound
                    );
                }
            }
            println!("verdict: {}", if all_passed { "pass" } else { "FAIL" });
        }
    }
    if all_passed {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_instance(args: InstanceArgs) -> Result<ExitCode> {
    let built = args.select.build()?;
    hamiltonian::save_json(&built.h, &args.out)?;
    println!(
        "wrote {} ({} qubits, sparsity {})",
        args.out.display(),
        built.h.n,
        built.h.d
    );
    Ok(ExitCode::SUCCESS)
}
