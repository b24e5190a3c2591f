//! Scan tables: CSV layout, parsing back, and the SVG plot.

use std::fmt::Write as _;

use bloch_core::extremal::ScanRow;

use crate::table::{num, Table};

pub const COLUMNS: &[&str] = &[
    "alpha",
    "p",
    "c_tilde",
    "ratio",
    "liminf_bound",
    "limsup_bound",
    "growth_lower",
    "growth_upper",
    "finite_upper_ratio",
    "residual",
    "sandwich_ok",
    "monotone_ok",
];

/// One scan row as stored in CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub alpha: f64,
    pub row: ScanRow,
}

pub fn table(alpha: f64, rows: &[ScanRow]) -> Table {
    let mut t = Table::new(COLUMNS);
    for r in rows {
        t.push(vec![
            num(alpha),
            num(r.p),
            num(r.c_tilde),
            num(r.ratio),
            num(r.liminf_bound),
            num(r.limsup_bound),
            num(r.growth_lower),
            num(r.growth_upper),
            num(r.finite_upper_ratio),
            num(r.residual),
            r.sandwich_ok.to_string(),
            r.monotone_ok.to_string(),
        ]);
    }
    t
}

pub fn parse(csv_bytes: &[u8]) -> Result<Vec<Record>, String> {
    let mut rd = csv::Reader::from_reader(csv_bytes);
    let header = rd.headers().map_err(|e| format!("report: unreadable CSV header: {e}"))?;
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(format!(
            "report: expected scan columns {}, found {}",
            COLUMNS.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        ));
    }
    let mut out = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| format!("report: row {}: {e}", i + 1))?;
        let f = |k: usize| -> Result<f64, String> {
            rec[k]
                .parse::<f64>()
                .map_err(|e| format!("report: row {}, column {}: {e}", i + 1, COLUMNS[k]))
        };
        let b = |k: usize| -> Result<bool, String> {
            rec[k]
                .parse::<bool>()
                .map_err(|e| format!("report: row {}, column {}: {e}", i + 1, COLUMNS[k]))
        };
        out.push(Record {
            alpha: f(0)?,
            row: ScanRow {
                p: f(1)?,
                c_tilde: f(2)?,
                ratio: f(3)?,
                liminf_bound: f(4)?,
                limsup_bound: f(5)?,
                growth_lower: f(6)?,
                growth_upper: f(7)?,
                finite_upper_ratio: f(8)?,
                residual: f(9)?,
                sandwich_ok: b(10)?,
                monotone_ok: b(11)?,
            },
        });
    }
    if out.is_empty() {
        return Err("report: the scan CSV has no rows".into());
    }
    Ok(out)
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

struct Series {
    label: &'static str,
    color: &'static str,
    dash: Option<&'static str>,
    markers: bool,
    values: Vec<f64>,
}

/// Static SVG 1.1 plot of `C̃_α(p)/p` with the bounds. The output depends
/// only on the records, so regenerating it from the CSV is byte-identical.
pub fn svg(records: &[Record]) -> String {
    let ps: Vec<f64> = records.iter().map(|r| r.row.p).collect();
    let series = [
        Series {
            label: "C~(p)/p (search)",
            color: "#1f4e9c",
            dash: None,
            markers: true,
            values: records.iter().map(|r| r.row.ratio).collect(),
        },
        Series {
            label: "growth lower / p",
            color: "#2a8a3e",
            dash: Some("6 3"),
            markers: false,
            values: records.iter().map(|r| r.row.growth_lower / r.row.p).collect(),
        },
        Series {
            label: "growth upper / p",
            color: "#b23b3b",
            dash: Some("6 3"),
            markers: false,
            values: records.iter().map(|r| r.row.growth_upper / r.row.p).collect(),
        },
        Series {
            label: "finite-p upper",
            color: "#8e5ab5",
            dash: Some("2 3"),
            markers: false,
            values: records.iter().map(|r| r.row.finite_upper_ratio).collect(),
        },
        Series {
            label: "liminf bound",
            color: "#2a8a3e",
            dash: Some("1 4"),
            markers: false,
            values: records.iter().map(|r| r.row.liminf_bound).collect(),
        },
        Series {
            label: "limsup bound",
            color: "#b23b3b",
            dash: Some("1 4"),
            markers: false,
            values: records.iter().map(|r| r.row.limsup_bound).collect(),
        },
    ];

    let (p_min, p_max) = ps.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &p| (a.min(p), b.max(p)));
    let log_x = p_min > 0.0 && p_max / p_min >= 8.0;
    let tx = |p: f64| if log_x { p.log2() } else { p };
    let (x0, x1) = if p_max > p_min { (tx(p_min), tx(p_max)) } else { (tx(p_min) - 1.0, tx(p_min) + 1.0) };
    let y_max = series
        .iter()
        .flat_map(|s| s.values.iter().copied())
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::max);
    let y_max = if y_max > 0.0 { nice_ceiling(1.1 * y_max) } else { 1.0 };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |p: f64| LEFT + (tx(p) - x0) / (x1 - x0) * plot_w;
    let sy = |v: f64| TOP + (1.0 - v / y_max) * plot_h;

    let alpha = records[0].alpha;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">C~(p)/p at alpha = {}</text>"#,
        LEFT + plot_w / 2.0,
        alpha
    );
    // axes and grid
    let _ = writeln!(
        s,
        r##"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333" stroke-width="1"/>"##
    );
    for k in 0..=5 {
        let v = y_max * k as f64 / 5.0;
        let y = sy(v);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd" stroke-width="1"/>"##,
            LEFT + plot_w
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{v:.3}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
    }
    for &p in &ps {
        let x = sx(p);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#333" stroke-width="1"/>"##,
            TOP + plot_h,
            TOP + plot_h + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{p}</text>"#,
            TOP + plot_h + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">p{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0,
        if log_x { " (log scale)" } else { "" }
    );

    for (i, ser) in series.iter().enumerate() {
        let pts: Vec<String> = ps
            .iter()
            .zip(&ser.values)
            .filter(|(_, v)| v.is_finite())
            .map(|(&p, &v)| format!("{:.2},{:.2}", sx(p), sy(v.min(y_max))))
            .collect();
        let dash = ser.dash.map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
        if !pts.is_empty() {
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.6"{dash}/>"#,
                pts.join(" "),
                ser.color
            );
        }
        if ser.markers {
            for pt in &pts {
                let (x, y) = pt.split_once(',').unwrap_or((pt, pt));
                let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="3" fill="{}"/>"#, ser.color);
            }
        }
        let ly = TOP + 14.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 14.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="1.6"{dash}/>"#,
            lx + 24.0,
            ser.color
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{}</text>"#,
            lx + 30.0,
            ly + 4.0,
            ser.label
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Smallest of 1, 2, 2.5, 5 times a power of ten that is at least `v`.
fn nice_ceiling(v: f64) -> f64 {
    let e = v.log10().floor();
    let base = 10f64.powf(e);
    [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * base)
        .find(|&c| c >= v)
        .unwrap_or(10.0 * base)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(p: f64) -> ScanRow {
        ScanRow {
            p,
            c_tilde: 0.1 * p,
            ratio: 0.1,
            liminf_bound: 0.06,
            limsup_bound: 0.13,
            growth_lower: 0.05 * p,
            growth_upper: 0.2 * p,
            finite_upper_ratio: 0.3,
            residual: f64::NAN,
            sandwich_ok: true,
            monotone_ok: p > 4.0,
        }
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![row(4.0), row(8.0), row(16.0)];
        let bytes = table(1.0, &rows).to_csv();
        let back = parse(&bytes).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back[1].row.p, 8.0);
        assert!(back[0].row.residual.is_nan());
        assert!(!back[0].row.monotone_ok);
        assert_eq!(table(1.0, &back.iter().map(|r| r.row.clone()).collect::<Vec<_>>()).to_csv(), bytes);
    }

    #[test]
    fn rejects_foreign_csv() {
        assert!(parse(b"a,b\n1,2\n").is_err());
        assert!(parse(COLUMNS.join(",").as_bytes()).is_err());
    }

    #[test]
    fn plot_is_valid_and_stable() {
        let recs = parse(&table(0.0, &[row(4.0), row(32.0)]).to_csv()).unwrap();
        let a = svg(&recs);
        assert_eq!(a, svg(&recs));
        assert!(a.starts_with("<?xml") && a.ends_with("</svg>\n"));
        assert!(a.contains("log scale"));
        assert_eq!(nice_ceiling(0.33), 0.5);
        assert_eq!(nice_ceiling(1.2), 2.0);
    }
}
