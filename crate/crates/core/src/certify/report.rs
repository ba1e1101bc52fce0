use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::quad::GridSpec;

/// Version tag written into every report.
pub const SCHEMA_VERSION: &str = "growthfx.report/1";

/// Violations kept verbatim in a report; the full count is always recorded.
pub const MAX_LISTED_VIOLATIONS: usize = 50;

/// A float that survives JSON: non-finite values are written as the
/// strings `"inf"`, `"-inf"` and `"nan"`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_finite() {
            s.serialize_f64(v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(Num(v)),
            Repr::Text(s) => match s.as_str() {
                "inf" => Ok(Num(f64::INFINITY)),
                "-inf" => Ok(Num(f64::NEG_INFINITY)),
                "nan" => Ok(Num(f64::NAN)),
                other => Err(serde::de::Error::custom(format!("not a number: `{other}`"))),
            },
        }
    }
}

impl From<f64> for Num {
    fn from(v: f64) -> Self {
        Num(v)
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Coordinates of a sweep point, e.g. `{"x": 3.14}` or `{"mu": 2, "t": 1}`.
pub type Point = BTreeMap<String, Num>;

pub fn point(coords: &[(&str, f64)]) -> Point {
    coords
        .iter()
        .map(|(k, v)| (k.to_string(), Num(*v)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub what: String,
    pub point: Point,
    pub observed: Num,
    pub bound: Num,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "paper-printed")]
    Printed,
    #[serde(rename = "corrected-derivation")]
    Corrected,
}

/// An explicit lower bound checked against the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticFloor {
    pub value: Num,
    pub provenance: Provenance,
    pub formula: String,
    pub holds: bool,
    pub counterexample: Option<Violation>,
}

/// One row of point data, written to CSV as `x_or_mu,t,lhs,rhs,ratio`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRow {
    pub series: String,
    pub x_or_mu: Option<f64>,
    pub t: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub schema_version: String,
    pub check_id: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub grids: BTreeMap<String, GridSpec>,
    pub inf_ratio: Num,
    pub sup_ratio: Num,
    pub analytic_floor: Option<AnalyticFloor>,
    pub floor_checks: Vec<AnalyticFloor>,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub skipped: usize,
    pub metrics: BTreeMap<String, Num>,
    pub notes: Vec<String>,
    pub tolerance: Num,
    pub pass: bool,
    pub runtime_ms: u64,
    #[serde(skip)]
    pub points: Vec<PointRow>,
}

impl CertReport {
    pub fn new(check_id: &str, tolerance: f64) -> Self {
        CertReport {
            schema_version: SCHEMA_VERSION.to_string(),
            check_id: check_id.to_string(),
            params: BTreeMap::new(),
            grids: BTreeMap::new(),
            inf_ratio: Num(f64::INFINITY),
            sup_ratio: Num(f64::NEG_INFINITY),
            analytic_floor: None,
            floor_checks: Vec::new(),
            violation_count: 0,
            violations: Vec::new(),
            skipped: 0,
            metrics: BTreeMap::new(),
            notes: Vec::new(),
            tolerance: Num(tolerance),
            pass: false,
            runtime_ms: 0,
            points: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.params.insert(key.to_string(), v);
    }

    pub fn grid(&mut self, key: &str, grid: &GridSpec) {
        self.grids.insert(key.to_string(), *grid);
    }

    pub fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), Num(value));
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn violate(&mut self, what: &str, point: Point, observed: f64, bound: f64) {
        self.violation_count += 1;
        if self.violations.len() < MAX_LISTED_VIOLATIONS {
            self.violations.push(Violation {
                what: what.to_string(),
                point,
                observed: Num(observed),
                bound: Num(bound),
            });
        }
    }

    /// Folds a ratio into the running inf/sup.
    pub fn observe_ratio(&mut self, r: f64) {
        self.inf_ratio.0 = self.inf_ratio.0.min(r);
        self.sup_ratio.0 = self.sup_ratio.0.max(r);
    }

    /// `pass` from the violation count; sorts point rows by `x_or_mu`, then `t`.
    pub(crate) fn finish(&mut self, started: std::time::Instant) {
        self.pass = self.violation_count == 0;
        self.points.sort_by(|a, b| {
            let key = |r: &PointRow| (r.x_or_mu.unwrap_or(0.0), r.t.unwrap_or(0.0));
            let (ka, kb) = (key(a), key(b));
            ka.0.total_cmp(&kb.0)
                .then(ka.1.total_cmp(&kb.1))
                .then(a.series.cmp(&b.series))
        });
        self.runtime_ms = started.elapsed().as_millis() as u64;
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
