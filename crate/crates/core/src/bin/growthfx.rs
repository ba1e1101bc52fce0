use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use growthfx::quad::GridSpec;
use growthfx::run::{
    default_csv_dir, exit_code, report_bundle, run, write_atomic, BundleFile, Command, Defaults,
    Format, Output, Params, RunConfig, EXIT_CONFIG,
};

#[derive(Parser)]
#[command(
    name = "growthfx",
    version,
    about = "Certify Fourier growth inequalities on R^n and rank-one symmetric spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Two-sided bounds for (1 - j_alpha(x)) / min{1, x^2}
    CertifyBessel(CheckArgs),
    /// Series vs Mehler-integral evaluation of 1 - j_alpha
    CertifyMehler(CheckArgs),
    /// Jacobi function bounds on a (mu, eta, t) grid
    CertifyJacobi(CheckArgs),
    /// |1 - phi_lambda(t)| against 1 - j_alpha(lambda t) for t <= t0
    CertifyComparison(CheckArgs),
    /// |1 - phi_lambda(t)| against min{1, (mu t)^2} on a strip
    CertifySymspace(CheckArgs),
    /// Growth inequalities on R^n for a corpus of radial profiles
    VerifyEuclid(CheckArgs),
    /// Growth inequalities on a symmetric space (radial reduction)
    VerifyHyp(CheckArgs),
    /// Run a list of checks (the default suite unless --config is given)
    ReportBundle(BundleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct CheckArgs {
    /// TOML file with parameter overrides (same keys as the flags, snake_case)
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    eta0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<f64>,
    #[arg(long)]
    eta_points: Option<usize>,
    /// Explicit eta values, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    eta_values: Option<Vec<f64>>,
    /// x grid, e.g. log:1e-6:1e4:2000
    #[arg(long)]
    grid: Option<GridSpec>,
    #[arg(long)]
    mu_grid: Option<GridSpec>,
    #[arg(long)]
    t_grid: Option<GridSpec>,
    #[arg(long)]
    spectral_grid: Option<GridSpec>,
    #[arg(long)]
    check_grid: Option<GridSpec>,
    #[arg(long)]
    bessel_grid: Option<GridSpec>,
    #[arg(long)]
    sym_mu_grid: Option<GridSpec>,
    #[arg(long)]
    sym_t_grid: Option<GridSpec>,
    /// Profile names, comma separated (gaussian, gaussian2, ball, bump, zero)
    #[arg(long, value_delimiter = ',')]
    corpus: Option<Vec<String>>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Report destination
    #[arg(long)]
    out: Option<PathBuf>,
    /// Format of --out
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Also write point data as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Also write an SVG ratio plot
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct BundleArgs {
    /// TOML file with [[check]] entries (name, command, params)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Checks to run concurrently
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Bundle report destination
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for per-check CSV point data (default: <out>_csv)
    #[arg(long)]
    csv_dir: Option<PathBuf>,
}

impl CheckArgs {
    fn params(&self) -> Result<Params, growthfx::Error> {
        let from_file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                toml::from_str::<Params>(&text)
                    .map_err(|e| growthfx::Error::Config(format!("{}: {e}", path.display())))?
            }
            None => Params::default(),
        };
        let flags = Params {
            alpha: self.alpha,
            beta: self.beta,
            n: self.n,
            p: self.p,
            t0: self.t0,
            eta0: self.eta0,
            eta: self.eta,
            eta_points: self.eta_points,
            eta_values: self.eta_values.clone(),
            grid: self.grid,
            mu_grid: self.mu_grid,
            t_grid: self.t_grid,
            spectral_grid: self.spectral_grid,
            check_grid: self.check_grid,
            bessel_grid: self.bessel_grid,
            sym_mu_grid: self.sym_mu_grid,
            sym_t_grid: self.sym_t_grid,
            corpus: self.corpus.clone(),
            tolerance: self.tolerance,
        };
        Ok(from_file.overlay(&flags))
    }

    fn output(&self) -> Output {
        Output {
            path: self.out.clone(),
            format: match self.format {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
            },
            csv: self.csv.clone(),
            svg: self.svg.clone(),
        }
    }
}

fn fail(e: &growthfx::Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(e) as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let Some(cmd) = cli.command else {
        eprintln!("error: no command given (try --help)");
        return ExitCode::from(EXIT_CONFIG as u8);
    };
    let defaults = match Defaults::load() {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let (command, args) = match cmd {
        Cmd::ReportBundle(b) => return bundle(b, &defaults),
        Cmd::CertifyBessel(a) => (Command::CertifyBessel, a),
        Cmd::CertifyMehler(a) => (Command::CertifyMehler, a),
        Cmd::CertifyJacobi(a) => (Command::CertifyJacobi, a),
        Cmd::CertifyComparison(a) => (Command::CertifyComparison, a),
        Cmd::CertifySymspace(a) => (Command::CertifySymspace, a),
        Cmd::VerifyEuclid(a) => (Command::VerifyEuclid, a),
        Cmd::VerifyHyp(a) => (Command::VerifyHyp, a),
    };
    let params = match args.params() {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let cfg = RunConfig {
        command,
        params,
        output: args.output(),
    };
    let outcome = run(&cfg, &defaults);
    if let Some(e) = &outcome.error {
        eprintln!("error: {e}");
    }
    if let Some(r) = &outcome.report {
        eprintln!(
            "{}: {} (inf_ratio {}, sup_ratio {}, {} violation(s), {} ms)",
            r.check_id,
            if r.pass { "pass" } else { "FAIL" },
            r.inf_ratio,
            r.sup_ratio,
            r.violation_count,
            r.runtime_ms
        );
        if cfg.output.path.is_none() {
            match r.to_json() {
                Ok(s) => println!("{s}"),
                Err(e) => return fail(&e),
            }
        }
    }
    ExitCode::from(outcome.exit as u8)
}

fn bundle(args: BundleArgs, defaults: &Defaults) -> ExitCode {
    let entries = match &args.config {
        Some(path) => match std::fs::read_to_string(path)
            .map_err(growthfx::Error::from)
            .and_then(|t| BundleFile::parse(&t))
        {
            Ok(e) => e,
            Err(e) => return fail(&e),
        },
        None => defaults.bundle.clone(),
    };
    let csv_dir = args
        .csv_dir
        .clone()
        .or_else(|| args.out.as_deref().map(default_csv_dir));
    let b = match report_bundle(&entries, defaults, args.jobs.max(1), csv_dir.as_deref()) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    for c in &b.checks {
        eprintln!(
            "{:<12} {:<20} {}{}",
            c.name,
            c.command.name(),
            if c.pass { "pass" } else { "FAIL" },
            c.error
                .as_deref()
                .map(|e| format!(" ({e})"))
                .unwrap_or_default()
        );
    }
    let json = match serde_json::to_string_pretty(&b) {
        Ok(j) => j,
        Err(e) => return fail(&e.into()),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = write_atomic(path, json.as_bytes()) {
                return fail(&e);
            }
        }
        None => println!("{json}"),
    }
    ExitCode::from(b.exit() as u8)
}
