//! Report assembly and artifact writers.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::{CliError, Output};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

/// Everything a subcommand can produce; `json` always exists.
pub struct Artifacts {
    pub json: Value,
    pub csv: Option<String>,
    pub svg: Option<String>,
}

impl Artifacts {
    pub fn json(json: Value) -> Self {
        Artifacts { json, csv: None, svg: None }
    }
}

/// `{"command", "version", "config", ...body}`; body keys sit at top level
/// so a report reads `{"verdict": ..., "max_dev": ...}`.
pub fn document(command: &str, config: Value, body: Value) -> Value {
    let mut doc = Map::new();
    doc.insert("command".into(), command.into());
    doc.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    doc.insert("config".into(), config);
    match body {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("result".into(), other);
        }
    }
    Value::Object(doc)
}

fn render(format: Format, artifacts: &Artifacts, timestamp: bool) -> Result<String, CliError> {
    let missing = |what: &str| CliError::Usage(format!("this subcommand has no {what} output"));
    match format {
        Format::Json => {
            let mut json = artifacts.json.clone();
            if timestamp {
                let secs = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0);
                if let Value::Object(m) = &mut json {
                    m.insert("timestamp".into(), secs.into());
                }
            }
            let mut text = serde_json::to_string_pretty(&json)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => artifacts.csv.clone().ok_or_else(|| missing("csv")),
        Format::Svg => artifacts.svg.clone().ok_or_else(|| missing("svg")),
    }
}

/// Prints one format to stdout, or writes every requested format to
/// `DIR/<command>.<ext>` when `--out` is given.
pub fn emit(output: &Output, command: &str, default: Format, artifacts: &Artifacts) -> Result<(), CliError> {
    let formats = if output.format.is_empty() {
        vec![default]
    } else {
        output.format.clone()
    };
    match &output.out {
        None => {
            if formats.len() != 1 {
                return Err(CliError::Usage("several formats need --out DIR".into()));
            }
            print!("{}", render(formats[0], artifacts, output.timestamp)?);
        }
        Some(dir) => {
            let rendered = formats
                .iter()
                .map(|&f| render(f, artifacts, output.timestamp).map(|t| (f, t)))
                .collect::<Result<Vec<_>, _>>()?;
            std::fs::create_dir_all(dir)?;
            for (f, text) in rendered {
                let path = dir.join(format!("{command}.{}", f.extension()));
                std::fs::write(&path, text)?;
                eprintln!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

/// Scientific notation with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Line chart of the packing enclosure over one period.
pub fn svg_plot(samples: &[(f64, f64, f64)], level: f64, title: &str) -> String {
    const W: f64 = 800.0;
    const H: f64 = 400.0;
    const M: f64 = 60.0;
    let (x0, x1) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), s| (a.min(s.0), b.max(s.0)));
    let (y0, y1) = samples
        .iter()
        .fold((level, level), |(a, b), s| (a.min(s.1), b.max(s.2)));
    let pad = ((y1 - y0) * 0.1).max(level.abs() * 1e-3).max(1e-12);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let xspan = (x1 - x0).max(1e-12);
    let px = |x: f64| M + (x - x0) / xspan * (W - 2.0 * M);
    let py = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);
    let line = |pick: fn(&(f64, f64, f64)) -> f64| {
        samples.iter().fold(String::new(), |mut s, p| {
            let _ = write!(s, "{:.2},{:.2} ", px(p.0), py(pick(p)));
            s
        })
    };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<path d="M{M} {M} V{} H{}" fill="none" stroke="black"/>"#,
        H - M,
        W - M
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{M}" x2="{}" y1="{y:.2}" y2="{y:.2}" stroke="#888" stroke-dasharray="6 4"/>"##,
        W - M,
        y = py(level)
    );
    let _ = writeln!(
        svg,
        r##"<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{}"/>"##,
        line(|p| p.1)
    );
    let _ = writeln!(
        svg,
        r##"<polyline fill="none" stroke="#d62728" stroke-width="1" points="{}"/>"##,
        line(|p| p.2)
    );
    let label = |x: f64, y: f64, anchor: &str, text: String| {
        format!(
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{text}</text>"#
        )
    };
    let _ = writeln!(svg, "{}", label(M - 6.0, py(y0) + 4.0, "end", format!("{y0:.6}")));
    let _ = writeln!(svg, "{}", label(M - 6.0, py(y1) + 4.0, "end", format!("{y1:.6}")));
    let _ = writeln!(svg, "{}", label(px(x0), H - M + 16.0, "middle", format!("{x0}")));
    let _ = writeln!(svg, "{}", label(px(x1), H - M + 16.0, "middle", format!("{x1}")));
    let _ = writeln!(svg, "{}", label(W - M, M - 8.0, "end", "F lower (blue), F upper (red), level (dashed)".into()));
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
