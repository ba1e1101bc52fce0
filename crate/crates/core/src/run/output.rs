use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::certify::{CertReport, PointRow};
use crate::error::Result;

/// Writes `bytes` to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn cell(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:e}"),
        None => String::new(),
    }
}

/// Point data as CSV with the fixed header `x_or_mu,t,lhs,rhs,ratio`.
pub fn points_csv(rows: &[PointRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x_or_mu", "t", "lhs", "rhs", "ratio"])?;
    for r in rows {
        w.write_record([
            cell(r.x_or_mu),
            cell(r.t),
            cell(Some(r.lhs)),
            cell(Some(r.rhs)),
            cell(Some(r.ratio)),
        ])?;
    }
    w.into_inner()
        .map_err(|e| std::io::Error::other(e.to_string()).into())
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Ratio against the sweep variable on log-log axes, one polyline per
/// series. Rows with non-positive coordinates are left out.
pub fn ratio_svg(report: &CertReport) -> String {
    let (w, h, pad) = (640.0, 400.0, 50.0);
    let coords = |r: &PointRow| (r.x_or_mu.or(r.t).unwrap_or(f64::NAN), r.ratio);
    let usable: Vec<&PointRow> = report
        .points
        .iter()
        .filter(|r| {
            let (x, y) = coords(r);
            x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()
        })
        .collect();
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{pad}" y="20" font-family="sans-serif" font-size="14">{} (ratio, log-log)</text>"#,
        report.check_id
    );
    if usable.is_empty() {
        svg.push_str("</svg>\n");
        return svg;
    }
    let bounds = |f: &dyn Fn(&PointRow) -> f64| {
        usable
            .iter()
            .map(|r| f(r).log10())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
                (a.min(v), b.max(v))
            })
    };
    let (x0, mut x1) = bounds(&|r| coords(r).0);
    let (y0, mut y1) = bounds(&|r| coords(r).1);
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| pad + (x.log10() - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y.log10() - y0) / (y1 - y0) * (h - 2.0 * pad);
    let _ = writeln!(
        svg,
        r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    let label = |v: f64| format!("{:.3e}", 10f64.powf(v));
    let _ = writeln!(
        svg,
        r#"<text x="{pad}" y="{}" font-family="sans-serif" font-size="10">{}</text><text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#,
        h - pad + 14.0,
        label(x0),
        w - pad,
        h - pad + 14.0,
        label(x1)
    );
    let _ = writeln!(
        svg,
        r#"<text x="4" y="{}" font-family="sans-serif" font-size="10">{}</text><text x="4" y="{}" font-family="sans-serif" font-size="10">{}</text>"#,
        h - pad,
        label(y0),
        pad + 4.0,
        label(y1)
    );
    let mut series: Vec<&str> = usable.iter().map(|r| r.series.as_str()).collect();
    series.sort();
    series.dedup();
    for (k, s) in series.iter().enumerate() {
        let mut pts: Vec<(f64, f64)> = usable
            .iter()
            .filter(|r| r.series == *s)
            .map(|r| coords(r))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let color = PALETTE[k % PALETTE.len()];
        let line: Vec<String> = pts
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#,
            line.join(" ")
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" fill="{color}">{s}</text>"#,
            w - pad - 120.0,
            pad + 14.0 * (k as f64 + 1.0)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
