//! Plain-text tables for terminal output.

use std::fmt::Write;

use maua_core::io::format_display;
use maua_core::{
    EvaluationResult, Ranking, SensitivityReport, Severity, SweepMethod, ValidationReport,
    WhatIfDelta,
};

#[derive(Clone, Copy)]
enum Align {
    Left,
    Right,
}

fn table(header: &[&str], align: &[Align], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let header: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    let mut out = String::new();
    for row in std::iter::once(&header).chain(rows) {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            let pad = widths[i] - cell.chars().count();
            match align[i] {
                Align::Left => {
                    line.push_str(cell);
                    line.extend(std::iter::repeat_n(' ', pad));
                }
                Align::Right => {
                    line.extend(std::iter::repeat_n(' ', pad));
                    line.push_str(cell);
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn report(report: &ValidationReport) -> String {
    let mut out = String::new();
    for issue in &report.issues {
        let tag = match issue.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        let _ = writeln!(out, "{tag}: {}: {}", issue.path, issue.message);
    }
    let errors = report.errors().count();
    let warnings = report.issues.len() - errors;
    let verdict = if report.ok { "ok" } else { "invalid" };
    let _ = writeln!(out, "{verdict} ({errors} error(s), {warnings} warning(s))");
    out
}

pub fn evaluation(result: &EvaluationResult, ranking: &Ranking) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", result.problem);
    let _ = writeln!(
        out,
        "{} aggregation, {} scale",
        result.aggregation.as_str(),
        result.display_scale.as_str()
    );
    let weights: Vec<String> = result
        .attributes
        .iter()
        .map(|a| format!("{} {}", a.name, format_display(a.weight)))
        .collect();
    let _ = writeln!(out, "weights: {}\n", weights.join(", "));

    let rows: Vec<Vec<String>> = ranking
        .entries
        .iter()
        .map(|e| {
            vec![
                e.rank.to_string(),
                e.name.clone(),
                format_display(result.display_scale.display(e.utility)),
                if e.tied {
                    "tied".to_owned()
                } else {
                    String::new()
                },
            ]
        })
        .collect();
    out.push_str(&table(
        &["rank", "option", "utility", ""],
        &[Align::Right, Align::Left, Align::Right, Align::Left],
        &rows,
    ));
    out
}

pub fn sensitivity(report: &SensitivityReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", report.problem);
    for attr in &report.attributes {
        let mode = match attr.method {
            SweepMethod::Critical => "critical weights".to_owned(),
            SweepMethod::Sweep { samples } => format!("sweep, {samples} samples"),
        };
        let _ = writeln!(out, "\n{} ({mode})", attr.attribute);
        let _ = writeln!(out, "  top at weight 0: {}", attr.top_at_zero);
        let _ = writeln!(out, "  top at weight 1: {}", attr.top_at_one);
        if attr.breakpoints.is_empty() {
            let _ = writeln!(out, "  no change in the top option");
            continue;
        }
        let rows: Vec<Vec<String>> = attr
            .breakpoints
            .iter()
            .map(|b| {
                vec![
                    format_display(b.t),
                    b.before.clone(),
                    "->".to_owned(),
                    b.after.clone(),
                ]
            })
            .collect();
        let body = table(
            &["weight", "from", "", "to"],
            &[Align::Right, Align::Left, Align::Left, Align::Left],
            &rows,
        );
        for line in body.lines() {
            let _ = writeln!(out, "  {line}");
        }
    }
    out
}

fn signed(v: f64) -> String {
    let text = format_display(v);
    if v >= 0.0 && !text.starts_with('-') {
        format!("+{text}")
    } else {
        text
    }
}

pub fn what_if(delta: &WhatIfDelta) -> String {
    let scale = delta.before.display_scale;
    let rows: Vec<Vec<String>> = delta
        .deltas
        .iter()
        .map(|d| {
            vec![
                d.name.clone(),
                format_display(scale.display(d.before)),
                format_display(scale.display(d.after)),
                signed(scale.display(d.delta)),
                format!("{} -> {}", d.rank_before, d.rank_after),
            ]
        })
        .collect();
    let mut out = format!("{}\n\n", delta.before.problem);
    out.push_str(&table(
        &["option", "before", "after", "change", "rank"],
        &[
            Align::Left,
            Align::Right,
            Align::Right,
            Align::Right,
            Align::Left,
        ],
        &rows,
    ));
    out
}
