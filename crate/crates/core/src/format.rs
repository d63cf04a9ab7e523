//! Text formats for tables (`.dt`) and measures (`.cm`).
//!
//! ```text
//! # six rows over three attributes
//! k 2
//! attrs f2 f4 f3
//! row 1 1 1 0
//! row 0 1 1 0
//! ```
//!
//! ```text
//! kind additive
//! default 1
//! weight f4 3
//! ```

use crate::error::{Error, Result};
use crate::measure::{ComplexityMeasure, Weights};
use crate::table::{Attribute, DecisionTable};
use crate::tree::parse_attribute;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Meaningful lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            None
        } else {
            Some((i + 1, l.split_whitespace().collect()))
        }
    })
}

fn number<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| parse_err(line, format!("expected a number, found `{s}`")))
}

pub fn parse_table(text: &str) -> Result<DecisionTable> {
    let mut k: Option<u32> = None;
    let mut columns: Option<Vec<Attribute>> = None;
    let mut rows = Vec::new();
    for (ln, words) in lines(text) {
        match words[0] {
            "k" => {
                if k.is_some() {
                    return Err(parse_err(ln, "repeated `k` line"));
                }
                if words.len() != 2 {
                    return Err(parse_err(ln, "expected `k <int>`"));
                }
                k = Some(number(ln, words[1])?);
            }
            "attrs" => {
                if k.is_none() || columns.is_some() {
                    return Err(parse_err(ln, "`attrs` must follow `k` once"));
                }
                let cols = words[1..]
                    .iter()
                    .map(|w| {
                        parse_attribute(w)
                            .ok_or_else(|| parse_err(ln, format!("bad attribute `{w}`")))
                    })
                    .collect::<Result<_>>()?;
                columns = Some(cols);
            }
            "row" => {
                let Some(cols) = &columns else {
                    return Err(parse_err(ln, "`row` before `attrs`"));
                };
                if words.len() != cols.len() + 2 {
                    return Err(parse_err(
                        ln,
                        format!("expected {} values and a decision", cols.len()),
                    ));
                }
                let values = words[1..=cols.len()]
                    .iter()
                    .map(|w| number(ln, w))
                    .collect::<Result<_>>()?;
                let d = number(ln, words[cols.len() + 1])?;
                rows.push((values, d));
            }
            other => return Err(parse_err(ln, format!("unknown keyword `{other}`"))),
        }
    }
    let k = k.ok_or_else(|| parse_err(1, "missing `k` line"))?;
    let columns = columns.ok_or_else(|| parse_err(1, "missing `attrs` line"))?;
    DecisionTable::new(k, columns, rows)
}

pub fn render_table(table: &DecisionTable) -> String {
    let mut out = format!("k {}\nattrs", table.k());
    for c in table.columns() {
        out.push_str(&format!(" {c}"));
    }
    out.push('\n');
    for r in table.rows() {
        out.push_str("row");
        for v in &r.values {
            out.push_str(&format!(" {v}"));
        }
        out.push_str(&format!(" {}\n", r.decision));
    }
    out
}

pub fn parse_measure(text: &str) -> Result<ComplexityMeasure> {
    let mut kind: Option<(usize, String)> = None;
    let mut default = 1u64;
    let mut overrides = Vec::new();
    for (ln, words) in lines(text) {
        match (words[0], words.len()) {
            ("kind", 2) => {
                if kind.is_some() {
                    return Err(parse_err(ln, "repeated `kind` line"));
                }
                kind = Some((ln, words[1].to_string()));
            }
            ("default", 2) => default = number(ln, words[1])?,
            ("weight", 3) => {
                let a = parse_attribute(words[1])
                    .ok_or_else(|| parse_err(ln, format!("bad attribute `{}`", words[1])))?;
                let w: u64 = number(ln, words[2])?;
                if w == 0 {
                    return Err(parse_err(ln, "weights must be positive"));
                }
                overrides.push((a, w));
            }
            _ => return Err(parse_err(ln, format!("cannot read `{}`", words.join(" ")))),
        }
    }
    let (ln, kind) = kind.ok_or_else(|| parse_err(1, "missing `kind` line"))?;
    let mut weights = Weights::new(default).map_err(|_| parse_err(ln, "default must be positive"))?;
    for (a, w) in &overrides {
        weights = weights.with(*a, *w);
    }
    match kind.as_str() {
        "depth" if overrides.is_empty() && default == 1 => Ok(ComplexityMeasure::Depth),
        "depth" => Err(parse_err(ln, "depth takes no weights")),
        "additive" => Ok(ComplexityMeasure::additive(weights)),
        "maxw" => Ok(ComplexityMeasure::max_weight(weights)),
        other => Err(parse_err(ln, format!("unknown kind `{other}`"))),
    }
}

/// Only single built-in measures have a file form.
pub fn render_measure(psi: &ComplexityMeasure) -> Result<String> {
    let (kind, w) = match psi {
        ComplexityMeasure::Depth => return Ok("kind depth\n".to_string()),
        ComplexityMeasure::Additive(w) => ("additive", w),
        ComplexityMeasure::MaxWeight(w) => ("maxw", w),
        _ => {
            return Err(Error::NotApplicable(format!(
                "{psi} has no measure file form"
            )))
        }
    };
    let mut out = format!("kind {kind}\ndefault {}\n", w.default_weight());
    for (a, x) in w.overrides() {
        out.push_str(&format!("weight {a} {x}\n"));
    }
    Ok(out)
}
