//! Deterministic text forms of polynomials.

use std::fmt::Write;

use clap::ValueEnum;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use umbral::algebra::{MPoly, MultiIndex, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Latex,
    Plain,
}

/// Variable names: `x, y, z` up to three variables, `x_1, …, x_d` beyond.
pub fn variable_names(dim: usize) -> Vec<String> {
    if dim <= 3 {
        ["x", "y", "z"][..dim].iter().map(ToString::to_string).collect()
    } else {
        (1..=dim).map(|i| format!("x_{i}")).collect()
    }
}

fn monomial(e: &MultiIndex, format: Format) -> String {
    let names = variable_names(e.dim());
    let sep = if e.dim() > 3 { " " } else { "" };
    let mut parts = Vec::new();
    for (i, &k) in e.entries().iter().enumerate() {
        let name = match (format, e.dim() > 3) {
            (Format::Latex, true) => format!("x_{{{}}}", i + 1),
            _ => names[i].clone(),
        };
        match (k, format) {
            (0, _) => {}
            (1, _) => parts.push(name),
            (k, Format::Latex) => parts.push(format!("{name}^{{{k}}}")),
            (k, _) => parts.push(format!("{name}^{k}")),
        }
    }
    parts.join(sep)
}

fn magnitude(c: &Rational, format: Format) -> String {
    let c = c.abs();
    match format {
        Format::Latex if !c.is_integer() => format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom()),
        _ => c.to_string(),
    }
}

/// Terms in descending graded-lex order, signs between them:
/// `x^2 - 2x`, `3/2 xy + 1`, `0`.
fn render_text(p: &MPoly, format: Format) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms().rev().enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mono = monomial(e, format);
        let mag = magnitude(c, format);
        if mono.is_empty() {
            out.push_str(&mag);
        } else if c.abs().is_one() {
            out.push_str(&mono);
        } else if c.is_integer() || format == Format::Latex {
            let _ = write!(out, "{mag}{mono}");
        } else {
            let _ = write!(out, "{mag} {mono}");
        }
    }
    out
}

/// Renders `p`; JSON is the compact term array in ascending graded-lex order.
pub fn render(p: &MPoly, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(&p.to_json()).expect("polynomials serialize"),
        Format::Latex | Format::Plain => render_text(p, format),
    }
}

/// `p_{(1,2)}` style labels for indexed families.
pub fn indexed_name(name: &str, n: &MultiIndex, format: Format) -> String {
    let idx = n.entries().iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    match format {
        Format::Latex => format!("{name}_{{{idx}}}"),
        _ => format!("{name}({idx})"),
    }
}
