use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Linear,
    Log,
}

/// A deterministic evaluation grid.
///
/// Nodes are regenerated from the four fields alone, so two runs with the same
/// spec see bit-identical nodes. The textual form is `kind:min:max:points`,
/// e.g. `log:1e-6:1e4:2000`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr")]
pub struct GridSpec {
    pub kind: GridKind,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn linear(min: f64, max: f64, points: usize) -> Result<Self> {
        Self::new(GridKind::Linear, min, max, points)
    }

    pub fn log(min: f64, max: f64, points: usize) -> Result<Self> {
        Self::new(GridKind::Log, min, max, points)
    }

    pub fn new(kind: GridKind, min: f64, max: f64, points: usize) -> Result<Self> {
        let spec = GridSpec {
            kind,
            min,
            max,
            points,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::Config(format!("grid bounds must be finite: {self}")));
        }
        if self.min >= self.max {
            return Err(Error::Config(format!("grid requires min < max: {self}")));
        }
        if self.kind == GridKind::Log && self.min <= 0.0 {
            return Err(Error::Config(format!("log grid requires min > 0: {self}")));
        }
        if self.points < 2 {
            return Err(Error::Config(format!(
                "grid needs at least 2 points: {self}"
            )));
        }
        Ok(())
    }

    /// The grid nodes, strictly increasing, with both endpoints exact.
    pub fn nodes(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        let mut out: Vec<f64> = match self.kind {
            GridKind::Linear => {
                let step = (self.max - self.min) / last;
                (0..n).map(|i| self.min + step * i as f64).collect()
            }
            GridKind::Log => {
                let (lo, hi) = (self.min.ln(), self.max.ln());
                let step = (hi - lo) / last;
                (0..n).map(|i| (lo + step * i as f64).exp()).collect()
            }
        };
        out[0] = self.min;
        out[n - 1] = self.max;
        out
    }

    /// A grid with twice the resolution over the same range.
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            points: 2 * self.points - 1,
            ..*self
        }
    }
}

/// Either the textual form or the full table.
#[derive(Deserialize)]
#[serde(untagged)]
enum GridRepr {
    Text(String),
    Table {
        kind: GridKind,
        min: f64,
        max: f64,
        points: usize,
    },
}

impl TryFrom<GridRepr> for GridSpec {
    type Error = Error;
    fn try_from(r: GridRepr) -> Result<Self> {
        match r {
            GridRepr::Text(s) => s.parse(),
            GridRepr::Table {
                kind,
                min,
                max,
                points,
            } => GridSpec::new(kind, min, max, points),
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            GridKind::Linear => "linear",
            GridKind::Log => "log",
        };
        write!(f, "{kind}:{:e}:{:e}:{}", self.min, self.max, self.points)
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::Config(format!(
                "grid `{s}` must have the form kind:min:max:points"
            )));
        }
        let kind = match parts[0] {
            "lin" | "linear" => GridKind::Linear,
            "log" => GridKind::Log,
            other => return Err(Error::Config(format!("unknown grid kind `{other}`"))),
        };
        let num = |p: &str| {
            p.parse::<f64>()
                .map_err(|_| Error::Config(format!("bad number `{p}` in grid `{s}`")))
        };
        let points = parts[3]
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("bad point count in grid `{s}`")))?;
        GridSpec::new(kind, num(parts[1])?, num(parts[2])?, points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cli_form() {
        let g: GridSpec = "log:1e-6:1e4:2000".parse().unwrap();
        assert_eq!(g.kind, GridKind::Log);
        assert_eq!(g.points, 2000);
        assert_eq!(g.min, 1e-6);
        let back: GridSpec = g.to_string().parse().unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!("log:0:1:10".parse::<GridSpec>().is_err());
        assert!("linear:2:1:10".parse::<GridSpec>().is_err());
        assert!("linear:0:1:1".parse::<GridSpec>().is_err());
        assert!("cubic:0:1:10".parse::<GridSpec>().is_err());
        assert!("linear:0:1".parse::<GridSpec>().is_err());
    }

    #[test]
    fn log_nodes_are_geometric() {
        let g = GridSpec::log(1e-3, 1e3, 7).unwrap();
        let nodes = g.nodes();
        assert_eq!(nodes.len(), 7);
        for w in nodes.windows(2) {
            assert!((w[1] / w[0] - 10.0).abs() < 1e-12);
        }
    }

    #[test]
    fn refinement_keeps_old_nodes() {
        let g = GridSpec::linear(0.0, 1.0, 11).unwrap();
        let fine = g.refined().nodes();
        for (i, x) in g.nodes().iter().enumerate() {
            assert!((fine[2 * i] - x).abs() < 1e-15);
        }
    }
}
