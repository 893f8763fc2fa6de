//! Command-line front end: build and cache g-number systems from JSON specs,
//! run diagnostics, sweep zeta transforms, and reproduce the example studies.
//!
//! Exit codes: 0 on success / all contracts passing, 1 when a requested
//! contract fails, 2 for usage or configuration errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use sha2::{Digest, Sha256};

use beurling_core::diagnostics::{self, Counting};
use beurling_core::systems::{GNumberSystem, SystemSpec};
use beurling_core::zeta;

mod examples;

#[derive(Parser)]
#[command(name = "beurling", version, about = "Computable Beurling generalized number systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a system from a JSON spec and cache it.
    Build(BuildArgs),
    /// Run diagnostic checks against a built system.
    Diagnose(DiagnoseArgs),
    /// Sweep a Mellin transform over a grid of s = sigma + i t.
    Zeta(ZetaArgs),
    /// Tabulate M(x), M(x)/x and m(x) on a geometric grid.
    Mertens(MertensArgs),
    /// Run one of the example studies end to end.
    Example(ExampleArgs),
    /// Export one of a system's measures as CSV.
    Export(ExportArgs),
}

#[derive(Args)]
struct SpecArg {
    /// Path to a SystemSpec JSON file.
    #[arg(long)]
    spec: PathBuf,
    /// Cache directory (default: $BEURLING_CACHE_DIR or ./cache).
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    spec: SpecArg,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    spec: SpecArg,
    /// Comma-separated check names (default: all).
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,
    /// Write the JSON report here (default: stdout only).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write one CSV trace per check next to the report.
    #[arg(long)]
    traces: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureChoice {
    N,
    M,
    Psi,
    Pi,
}

#[derive(Args)]
struct ZetaArgs {
    #[command(flatten)]
    spec: SpecArg,
    /// Which measure to transform.
    #[arg(long, value_enum, default_value = "n")]
    measure: MeasureChoice,
    /// Real parts sigma (> 1), comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1.5")]
    sigma: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    t_min: f64,
    #[arg(long, default_value_t = 30.0)]
    t_max: f64,
    #[arg(long, default_value_t = 600)]
    t_steps: usize,
    /// Add the analytic density tail a X^(1-s)/(s-1) when the system has a
    /// density constant.
    #[arg(long)]
    tail: bool,
    /// Add a closed-form column (example1 or example2 systems).
    #[arg(long)]
    closed_form: bool,
    /// Output CSV path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MertensArgs {
    #[command(flatten)]
    spec: SpecArg,
    #[arg(long, default_value_t = 64)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExampleArgs {
    /// Which example study to run (1, 2 or 3).
    #[arg(long)]
    which: u8,
    /// Output directory for the artifact bundle.
    #[arg(long, default_value = "example-out")]
    out_dir: PathBuf,
    /// Largest x for the example-2 sweeps.
    #[arg(long, default_value_t = 1e5)]
    x_max: f64,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    spec: SpecArg,
    #[arg(long, value_enum, default_value = "n")]
    measure: MeasureChoice,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Diagnose(args) => cmd_diagnose(args),
        Command::Zeta(args) => cmd_zeta(args),
        Command::Mertens(args) => cmd_mertens(args),
        Command::Example(args) => examples::cmd_example(args.which, &args.out_dir, args.x_max),
        Command::Export(args) => cmd_export(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

// ---------------------------------------------------------------------------
// Spec loading and the cache
// ---------------------------------------------------------------------------

fn cache_dir(arg: &Option<PathBuf>) -> PathBuf {
    arg.clone()
        .or_else(|| std::env::var_os("BEURLING_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("cache"))
}

fn load_spec(path: &Path) -> anyhow::Result<(SystemSpec, String)> {
    let text = fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read spec {}: {e}", path.display()))?;
    let spec: SystemSpec = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("invalid spec {}: {e}", path.display()))?;
    // canonical form: serde_json maps are sorted, floats shortest round-trip
    let canonical = serde_json::to_string(&serde_json::to_value(&spec)?)?;
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    let digest = hasher.finalize();
    let key: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
    Ok((spec, key))
}

/// Build through the cache; returns the system and whether it was a cache hit.
fn obtain_system(args: &SpecArg) -> anyhow::Result<(GNumberSystem, bool)> {
    let (spec, key) = load_spec(&args.spec)?;
    let dir = cache_dir(&args.cache);
    fs::create_dir_all(&dir)?;
    let path = dir.join(format!("{key}.sys"));
    if path.exists() {
        let sys = beurling_core::io::load_system(&path)?;
        return Ok((sys, true));
    }
    let sys = spec.build()?;
    beurling_core::io::save_system(&sys, &path)?;
    Ok((sys, false))
}

fn support_len(m: &beurling_core::Measure) -> usize {
    match m {
        beurling_core::Measure::Lattice(l) => l.coeffs().len(),
        beurling_core::Measure::Stieltjes(s) => {
            s.atoms().len() + s.density().map_or(0, |g| g.len())
        }
    }
}

fn write_out(path: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(p, content)?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_build(args: BuildArgs) -> anyhow::Result<bool> {
    let (sys, hit) = obtain_system(&args.spec)?;
    println!(
        "{} `{}`: cutoff {}, prime support {}, dN support {}, dM support {}",
        if hit { "cache hit" } else { "built" },
        sys.label,
        sys.cutoff,
        support_len(&sys.pi),
        support_len(&sys.n),
        support_len(&sys.m),
    );
    if let Some(a) = sys.density_a {
        println!("declared density a = {a}");
    } else {
        let grid = diagnostics::top_grid(sys.cutoff, 2.0, 32);
        let (points, values) = diagnostics::counting_steps(&sys.n);
        let fit = diagnostics::density_fit(&Counting::Steps { points: &points, values: &values }, &grid)?;
        if let diagnostics::FitModel::Linear { a } = fit.model {
            println!(
                "fitted density a = {a:.6} (diverging: {})",
                fit.diverging
            );
        }
    }
    Ok(true)
}

fn cmd_diagnose(args: DiagnoseArgs) -> anyhow::Result<bool> {
    let (sys, _) = obtain_system(&args.spec)?;
    let report = diagnostics::run_checks(&sys, &args.checks)?;
    let json = serde_json::to_string_pretty(&report)?;
    match &args.out {
        Some(p) => {
            if let Some(parent) = p.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(p, &json)?;
        }
        None => println!("{json}"),
    }
    if args.traces {
        let base = args.out.as_deref().unwrap_or(Path::new("diagnostics.json"));
        let dir = base.parent().unwrap_or(Path::new("."));
        write_check_traces(&sys, dir)?;
    }
    for c in &report.checks {
        eprintln!(
            "{} {}: value {:.6e} vs threshold {:.0e}",
            if c.pass { "pass" } else { "FAIL" },
            c.name,
            c.value,
            c.threshold
        );
    }
    Ok(report.all_pass())
}

/// CSV traces behind the headline checks: psi/x, N/x, M/x and m over the
/// top decades.
fn write_check_traces(sys: &GNumberSystem, dir: &Path) -> anyhow::Result<()> {
    let grid = diagnostics::top_grid(sys.cutoff, 2.0, 128);
    let mut csv = String::from("x,psi_over_x,n_over_x,mertens_over_x,m_small\n");
    for &x in &grid {
        let psi = sys.chebyshev_psi(x)?;
        let n = sys.integers(x)?;
        let m = sys.mertens(x)?;
        let ms = diagnostics::m_small(sys, x)?;
        csv.push_str(&format!("{x},{},{},{},{ms}\n", psi / x, n / x, m / x));
    }
    fs::write(dir.join("trace.csv"), csv)?;
    Ok(())
}

fn cmd_zeta(args: ZetaArgs) -> anyhow::Result<bool> {
    let (sys, _) = obtain_system(&args.spec)?;
    for &s in &args.sigma {
        if s <= 1.0 {
            anyhow::bail!("sigma must exceed 1, got {s}");
        }
    }
    let measure = match args.measure {
        MeasureChoice::N => &sys.n,
        MeasureChoice::M => &sys.m,
        MeasureChoice::Psi => &sys.psi,
        MeasureChoice::Pi => &sys.pi,
    };
    let tail = match (args.tail, args.measure, sys.density_a) {
        (true, MeasureChoice::N, Some(a)) => Some(a),
        (true, _, _) => anyhow::bail!("--tail needs measure n and a declared density"),
        _ => None,
    };
    let mut csv = String::from("sigma,t,re,im");
    if args.closed_form {
        csv.push_str(",re_closed,im_closed");
    }
    csv.push('\n');
    let closed: Option<fn(Complex64) -> beurling_core::Result<Complex64>> = match sys.label.as_str()
    {
        "example1" => Some(zeta::example1_closed),
        "example2-continuous" => Some(zeta::example2_closed),
        _ => None,
    };
    if args.closed_form && closed.is_none() {
        anyhow::bail!("no closed form known for system `{}`", sys.label);
    }
    for &sigma in &args.sigma {
        let opts = match tail {
            Some(a) => zeta::TransformOptions::with_tail(a),
            None => zeta::TransformOptions::plain(),
        };
        let table = zeta::SweepTable::new(measure, sigma, opts)?;
        let dt = if args.t_steps == 0 {
            0.0
        } else {
            (args.t_max - args.t_min) / args.t_steps as f64
        };
        let values = table.sweep(args.t_min, dt, args.t_steps + 1);
        for (k, v) in values.iter().enumerate() {
            let t = args.t_min + k as f64 * dt;
            csv.push_str(&format!("{sigma},{t},{},{}", v.re, v.im));
            if let Some(f) = closed {
                // the closed forms describe zeta itself; report them next to
                // the matching measure transform (dN) and leave other
                // measures' rows empty
                match (args.measure, f(Complex64::new(sigma, t))) {
                    (MeasureChoice::N, Ok(z)) => csv.push_str(&format!(",{},{}", z.re, z.im)),
                    (MeasureChoice::Pi, Ok(z)) => {
                        let lz = z.ln();
                        csv.push_str(&format!(",{},{}", lz.re, lz.im));
                    }
                    _ => csv.push_str(",,"),
                }
            }
            csv.push('\n');
        }
    }
    write_out(&args.out, &csv)?;
    Ok(true)
}

fn cmd_mertens(args: MertensArgs) -> anyhow::Result<bool> {
    let (sys, _) = obtain_system(&args.spec)?;
    let grid = diagnostics::top_grid(sys.cutoff, 3.0, args.points);
    let mut csv = String::from("x,mertens,mertens_over_x,m_small\n");
    for &x in &grid {
        let m = sys.mertens(x)?;
        let ms = diagnostics::m_small(&sys, x)?;
        csv.push_str(&format!("{x},{m},{},{ms}\n", m / x));
    }
    write_out(&args.out, &csv)?;
    Ok(true)
}

fn cmd_export(args: ExportArgs) -> anyhow::Result<bool> {
    let (sys, _) = obtain_system(&args.spec)?;
    let measure = match args.measure {
        MeasureChoice::N => &sys.n,
        MeasureChoice::M => &sys.m,
        MeasureChoice::Psi => &sys.psi,
        MeasureChoice::Pi => &sys.pi,
    };
    beurling_core::io::write_measure(&args.out, measure)?;
    println!("wrote {}", args.out.display());
    Ok(true)
}
