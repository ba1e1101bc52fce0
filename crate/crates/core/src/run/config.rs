use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::GridSpec;

/// Frozen defaults compiled into the binary.
pub const DEFAULTS_TOML: &str = include_str!("defaults.toml");

/// Environment variable naming a replacement defaults file.
pub const DEFAULTS_ENV: &str = "GROWTHFX_DEFAULTS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CertifyBessel,
    CertifyMehler,
    CertifyJacobi,
    CertifyComparison,
    CertifySymspace,
    VerifyEuclid,
    VerifyHyp,
    ReportBundle,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::CertifyBessel,
        Command::CertifyMehler,
        Command::CertifyJacobi,
        Command::CertifyComparison,
        Command::CertifySymspace,
        Command::VerifyEuclid,
        Command::VerifyHyp,
        Command::ReportBundle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::CertifyBessel => "certify-bessel",
            Command::CertifyMehler => "certify-mehler",
            Command::CertifyJacobi => "certify-jacobi",
            Command::CertifyComparison => "certify-comparison",
            Command::CertifySymspace => "certify-symspace",
            Command::VerifyEuclid => "verify-euclid",
            Command::VerifyHyp => "verify-hyp",
            Command::ReportBundle => "report-bundle",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown command `{s}`")))
    }
}

/// Typed parameters; `None` means "take the default".
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bessel_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sym_mu_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sym_t_grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),*) => {
        Params { $($field: $top.$field.clone().or_else(|| $base.$field.clone()),)* }
    };
}

impl Params {
    /// `top` wins wherever it is set.
    pub fn overlay(&self, top: &Params) -> Params {
        overlay!(
            self,
            top,
            alpha,
            beta,
            n,
            p,
            t0,
            eta0,
            eta,
            eta_points,
            eta_values,
            grid,
            mu_grid,
            t_grid,
            spectral_grid,
            check_grid,
            bessel_grid,
            sym_mu_grid,
            sym_t_grid,
            corpus,
            tolerance
        )
    }

    pub(crate) fn req<T: Clone>(&self, v: &Option<T>, name: &str, cmd: Command) -> Result<T> {
        v.clone()
            .ok_or_else(|| Error::Config(format!("`{cmd}` needs parameter `{name}` (no default)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Where results go. `path` receives the report (JSON) or the point data
/// (CSV) according to `format`; `csv` and `svg` are optional extras.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub output: Output,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            params: Params::default(),
            output: Output::default(),
        }
    }
}

/// One entry of a bundle: a named check with parameter overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleEntry {
    pub name: String,
    pub command: Command,
    #[serde(default)]
    pub params: Params,
}

/// The parsed defaults file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Defaults {
    pub version: String,
    #[serde(flatten)]
    pub commands: BTreeMap<Command, Params>,
    #[serde(default)]
    pub bundle: Vec<BundleEntry>,
}

impl Defaults {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("defaults file: {e}")))
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULTS_TOML).expect("built-in defaults parse")
    }

    /// The built-in defaults, or the file named by `GROWTHFX_DEFAULTS`.
    pub fn load() -> Result<Self> {
        match std::env::var_os(DEFAULTS_ENV) {
            Some(path) => Self::from_file(Path::new(&path)),
            None => Ok(Self::builtin()),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read defaults file {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    /// Defaults for `cmd` overlaid with `params`.
    pub fn resolve(&self, cmd: Command, params: &Params) -> Params {
        self.commands
            .get(&cmd)
            .cloned()
            .unwrap_or_default()
            .overlay(params)
    }
}

/// A list of bundle entries read from TOML (`[[check]]` tables).
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    #[serde(default)]
    pub check: Vec<BundleEntry>,
}

impl BundleFile {
    pub fn parse(text: &str) -> Result<Vec<BundleEntry>> {
        let f: BundleFile =
            toml::from_str(text).map_err(|e| Error::Config(format!("bundle config: {e}")))?;
        Ok(f.check)
    }
}
