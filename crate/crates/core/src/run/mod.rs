//! Configuration, dispatch and report output for the command-line driver.

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{
    BundleEntry, BundleFile, Command, Defaults, Format, Output, Params, RunConfig, DEFAULTS_ENV,
    DEFAULTS_TOML,
};
pub use output::{points_csv, ratio_svg, write_atomic};

use crate::certify::{self, CertReport, Num, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::specfun::OrderPair;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Exit status for an error: 3 for numerical failures, 2 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

fn etas_for(p: &Params, cmd: Command, default_bound: f64) -> Result<Vec<f64>> {
    if let Some(v) = &p.eta_values {
        return Ok(v.clone());
    }
    let bound = p.eta0.unwrap_or(default_bound);
    let k = p.req(&p.eta_points, "eta_points", cmd)?;
    if k == 0 {
        return Err(Error::Config("eta_points must be at least 1".into()));
    }
    if k == 1 || bound == 0.0 {
        return Ok(vec![0.0]);
    }
    Ok((0..k)
        .map(|i| -bound + 2.0 * bound * i as f64 / (k - 1) as f64)
        .collect())
}

/// Runs one check on fully resolved parameters.
pub fn execute(cmd: Command, p: &Params) -> Result<CertReport> {
    let order = || OrderPair::new(p.req(&p.alpha, "alpha", cmd)?, p.req(&p.beta, "beta", cmd)?);
    let mut rep = match cmd {
        Command::CertifyBessel => certify::certify_bessel_two_sided(
            p.req(&p.alpha, "alpha", cmd)?,
            &p.req(&p.grid, "grid", cmd)?,
        )?,
        Command::CertifyMehler => certify::certify_mehler_identity(
            p.req(&p.alpha, "alpha", cmd)?,
            &p.req(&p.grid, "grid", cmd)?,
            p.req(&p.tolerance, "tolerance", cmd)?,
        )?,
        Command::CertifyJacobi => {
            let o = order()?;
            let etas = etas_for(p, cmd, o.rho())?;
            certify::certify_jacobi_bullets(
                &o,
                &p.req(&p.mu_grid, "mu_grid", cmd)?,
                &etas,
                &p.req(&p.t_grid, "t_grid", cmd)?,
                p.req(&p.tolerance, "tolerance", cmd)?,
            )?
        }
        Command::CertifyComparison => {
            let o = order()?;
            let etas = etas_for(p, cmd, 0.0)?;
            let mut r = certify::certify_comparison(
                &o,
                p.req(&p.t0, "t0", cmd)?,
                &p.req(&p.mu_grid, "mu_grid", cmd)?,
                &etas,
                &p.req(&p.t_grid, "t_grid", cmd)?,
            )?;
            if let Some(tol) = p.tolerance {
                r.tolerance = Num(tol);
            }
            r
        }
        Command::CertifySymspace => {
            let o = order()?;
            certify::certify_symspace_min(
                &o,
                p.req(&p.eta0, "eta0", cmd)?,
                p.req(&p.eta_points, "eta_points", cmd)?,
                &p.req(&p.mu_grid, "mu_grid", cmd)?,
                &p.req(&p.t_grid, "t_grid", cmd)?,
            )?
        }
        Command::VerifyEuclid => certify::verify_euclid(&certify::EuclidSetup {
            n: p.req(&p.n, "n", cmd)?,
            p: p.req(&p.p, "p", cmd)?,
            corpus: p.req(&p.corpus, "corpus", cmd)?,
            t_grid: p.req(&p.t_grid, "t_grid", cmd)?,
            spectral_grid: p.req(&p.spectral_grid, "spectral_grid", cmd)?,
            bessel_grid: p.req(&p.bessel_grid, "bessel_grid", cmd)?,
            slack: p.req(&p.tolerance, "tolerance", cmd)?,
        })?,
        Command::VerifyHyp => certify::verify_hyp(&certify::HypSetup {
            alpha: p.req(&p.alpha, "alpha", cmd)?,
            beta: p.req(&p.beta, "beta", cmd)?,
            p: p.req(&p.p, "p", cmd)?,
            eta: p.eta.unwrap_or(0.0),
            corpus: p.req(&p.corpus, "corpus", cmd)?,
            t_grid: p.req(&p.t_grid, "t_grid", cmd)?,
            mu_grid: p.req(&p.mu_grid, "mu_grid", cmd)?,
            check_grid: p.req(&p.check_grid, "check_grid", cmd)?,
            agreement: p.req(&p.tolerance, "tolerance", cmd)?,
            sym_mu_grid: p.req(&p.sym_mu_grid, "sym_mu_grid", cmd)?,
            sym_t_grid: p.req(&p.sym_t_grid, "sym_t_grid", cmd)?,
        })?,
        Command::ReportBundle => {
            return Err(Error::Config(
                "report-bundle is not a single check; use report_bundle".into(),
            ))
        }
    };
    rep.param("config", p);
    Ok(rep)
}

/// Result of [`run`]: the report (if the check ran) and the exit status.
#[derive(Debug)]
pub struct RunOutcome {
    pub report: Option<CertReport>,
    pub exit: i32,
    pub error: Option<Error>,
}

/// Resolves `cfg` against `defaults`, runs the check and writes outputs.
/// Nothing is written when the configuration is rejected or the numerics
/// fail.
pub fn run(cfg: &RunConfig, defaults: &Defaults) -> RunOutcome {
    let fail = |e: Error| RunOutcome {
        exit: exit_code(&e),
        report: None,
        error: Some(e),
    };
    if cfg.command == Command::ReportBundle {
        return fail(Error::Config("use report_bundle for report-bundle".into()));
    }
    let params = defaults.resolve(cfg.command, &cfg.params);
    let mut report = match execute(cfg.command, &params) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    report.param("defaults_version", &defaults.version);
    if let Err(e) = write_outputs(&report, &cfg.output) {
        return fail(e);
    }
    RunOutcome {
        exit: if report.pass { EXIT_PASS } else { EXIT_FAIL },
        report: Some(report),
        error: None,
    }
}

pub fn write_outputs(report: &CertReport, out: &Output) -> Result<()> {
    if let Some(path) = &out.path {
        match out.format {
            Format::Json => write_atomic(path, report.to_json()?.as_bytes())?,
            Format::Csv => write_atomic(path, &points_csv(&report.points)?)?,
        }
    }
    if let Some(path) = &out.csv {
        write_atomic(path, &points_csv(&report.points)?)?;
    }
    if let Some(path) = &out.svg {
        write_atomic(path, ratio_svg(report).as_bytes())?;
    }
    Ok(())
}

/// Summary line of one bundle check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleCheck {
    pub name: String,
    pub command: Command,
    pub pass: bool,
    pub error: Option<String>,
    pub report: Option<CertReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    pub schema_version: String,
    pub defaults_version: String,
    pub checks: Vec<BundleCheck>,
    pub pass: bool,
    pub runtime_ms: u64,
}

impl Bundle {
    pub fn exit(&self) -> i32 {
        if self.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

/// Runs every entry (sorted by name) with up to `jobs` checks at a time.
/// A failing or erroring check is recorded and does not affect the others.
/// `csv_dir` receives `<name>.csv` point data per check.
pub fn report_bundle(
    entries: &[BundleEntry],
    defaults: &Defaults,
    jobs: usize,
    csv_dir: Option<&Path>,
) -> Result<Bundle> {
    let started = Instant::now();
    if entries.is_empty() {
        return Err(Error::Config("bundle has no checks".into()));
    }
    let mut entries = entries.to_vec();
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    for w in entries.windows(2) {
        if w[0].name == w[1].name {
            return Err(Error::Config(format!(
                "duplicate bundle check name `{}`",
                w[0].name
            )));
        }
    }
    if let Some(e) = entries.iter().find(|e| e.command == Command::ReportBundle) {
        return Err(Error::Config(format!(
            "bundle check `{}` cannot itself be a bundle",
            e.name
        )));
    }
    let one = |e: &BundleEntry| -> (BundleCheck, Option<Vec<u8>>) {
        let params = defaults.resolve(e.command, &e.params);
        match execute(e.command, &params) {
            Ok(mut r) => {
                r.param("defaults_version", &defaults.version);
                let csv = points_csv(&r.points).ok();
                let check = BundleCheck {
                    name: e.name.clone(),
                    command: e.command,
                    pass: r.pass,
                    error: None,
                    report: Some(r),
                };
                (check, csv)
            }
            Err(err) => (
                BundleCheck {
                    name: e.name.clone(),
                    command: e.command,
                    pass: false,
                    error: Some(err.to_string()),
                    report: None,
                },
                None,
            ),
        }
    };
    let results: Vec<(BundleCheck, Option<Vec<u8>>)> = if jobs <= 1 {
        entries.iter().map(one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {jobs} jobs: {e}")))?;
        pool.install(|| entries.par_iter().map(one).collect())
    };
    let mut checks = Vec::with_capacity(results.len());
    for (check, csv) in results {
        if let (Some(dir), Some(bytes)) = (csv_dir, csv) {
            write_atomic(&dir.join(format!("{}.csv", check.name)), &bytes)?;
        }
        checks.push(check);
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(Bundle {
        schema_version: SCHEMA_VERSION.to_string(),
        defaults_version: defaults.version.clone(),
        checks,
        pass,
        runtime_ms: started.elapsed().as_millis() as u64,
    })
}

/// Bundle JSON with every `runtime_ms` zeroed, for reproducibility checks.
pub fn without_runtimes(json: &str) -> Result<String> {
    let mut v: serde_json::Value = serde_json::from_str(json)?;
    fn strip(v: &mut serde_json::Value) {
        match v {
            serde_json::Value::Object(m) => {
                for (k, x) in m.iter_mut() {
                    if k == "runtime_ms" {
                        *x = serde_json::Value::from(0);
                    } else {
                        strip(x);
                    }
                }
            }
            serde_json::Value::Array(a) => a.iter_mut().for_each(strip),
            _ => {}
        }
    }
    strip(&mut v);
    Ok(serde_json::to_string_pretty(&v)?)
}

/// Default output path for a bundle's CSV directory next to `json`.
pub fn default_csv_dir(json: &Path) -> PathBuf {
    let stem = json
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "bundle".into());
    json.with_file_name(format!("{stem}_csv"))
}
