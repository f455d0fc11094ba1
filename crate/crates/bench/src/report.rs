use std::fmt::Write;

use mcube::Kind;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub spacing: f64,
    pub order: usize,
    pub kind: Kind,
    pub max_abs_err: f64,
    pub mean_abs_err: f64,
    pub queries_per_sec: f64,
    pub prepare_count_per_query: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Pretty,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "pretty" => Ok(Format::Pretty),
            other => Err(format!("unknown format `{other}` (expected tsv or pretty)")),
        }
    }
}

pub const COLUMNS: [&str; 7] = [
    "spacing",
    "order",
    "kind",
    "max_abs_err",
    "mean_abs_err",
    "qps",
    "prepares_per_query",
];

fn cells(row: &BenchRow) -> [String; 7] {
    [
        format!("{}", row.spacing),
        row.order.to_string(),
        row.kind.to_string(),
        format!("{:.6e}", row.max_abs_err),
        format!("{:.6e}", row.mean_abs_err),
        format!("{:.1}", row.queries_per_sec),
        format!("{}", row.prepare_count_per_query),
    ]
}

pub fn emit(rows: &[BenchRow], format: Format) -> String {
    let table: Vec<[String; 7]> = rows.iter().map(cells).collect();
    let mut out = String::new();
    match format {
        Format::Tsv => {
            out.push_str(&COLUMNS.join("\t"));
            out.push('\n');
            for r in &table {
                out.push_str(&r.join("\t"));
                out.push('\n');
            }
        }
        Format::Pretty => {
            let mut widths = COLUMNS.map(str::len);
            for r in &table {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.len());
                }
            }
            let line = |out: &mut String, items: &[&str]| {
                let padded: Vec<String> = items
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:>w$}"))
                    .collect();
                let _ = writeln!(out, "{}", padded.join("  "));
            };
            line(&mut out, &COLUMNS);
            for r in &table {
                let refs: Vec<&str> = r.iter().map(String::as_str).collect();
                line(&mut out, &refs);
            }
        }
    }
    out
}
