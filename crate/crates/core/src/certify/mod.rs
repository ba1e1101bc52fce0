//! Grid certification of the inequalities: sweeps, empirical constants
//! and structured reports.
//!
//! Every constant in a report is a witness observed on the stated grids,
//! never a claim about the extremal constant.

mod growth;
mod lemmas;
mod report;

pub use growth::{verify_euclid, verify_hyp, EuclidSetup, HypSetup};
pub use lemmas::{
    certify_bessel_two_sided, certify_comparison, certify_jacobi_bullets, certify_mehler_identity,
    certify_symspace_min, FLOOR_SLACK, UNDERFLOW_SKIP,
};
pub use report::{
    point, AnalyticFloor, CertReport, Num, Point, PointRow, Provenance, Violation,
    MAX_LISTED_VIOLATIONS, SCHEMA_VERSION,
};
