//! Rendering of solve results as text, JSON, or CSV.
//!
//! JSON and CSV are deterministic: object keys are sorted, big
//! integers are decimal strings, and points are ordered by abscissa.

use clap::ValueEnum;
use descent_core::descent::DescentReport;
use descent_core::pell::{PellFundamental, QuarticPellSolutions};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

/// One `k` of a parametric family run.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub k: u64,
    /// Points with `y > 0`, ascending by `x`; empty when none or failed.
    pub points: Vec<(BigInt, BigInt)>,
    pub complete: bool,
    /// Why the row is not trustworthy as a complete answer, if it is not.
    pub flag: Option<String>,
}

fn big_str(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

fn point_value(x: &BigInt, y: &BigInt) -> Value {
    Value::Array(vec![big_str(x), big_str(y)])
}

/// The status label for a report: certified, height-limited, or partial.
pub fn status_line(report: &DescentReport) -> String {
    if report.complete {
        return "certified complete".into();
    }
    let skipped = report
        .twists
        .iter()
        .filter(|t| t.backend == "skipped")
        .count();
    if skipped > 0 {
        format!("partial, {skipped} of {} twists skipped", report.twists.len())
    } else {
        format!("complete up to height {}", report.height)
    }
}

/// The twist whose candidate list first mentions `x`, if any.
fn point_source(report: &DescentReport, x: &BigInt) -> Option<BigInt> {
    report
        .twists
        .iter()
        .find(|t| t.x_candidates.contains(x))
        .map(|t| t.twist.d.clone())
}

pub fn render_report(report: &DescentReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => report_text(report),
        OutputFormat::Json => report_json(report).to_string(),
        OutputFormat::Csv => report_csv(report),
    }
}

fn report_text(report: &DescentReport) -> String {
    let mut out = String::new();
    let push = |out: &mut String, line: String| {
        out.push_str(&line);
        out.push('\n');
    };
    push(&mut out, format!("equation: {}", report.problem.describe()));
    push(&mut out, format!("resultant: {}", report.resultant));
    let divisors = report
        .divisors
        .iter()
        .map(BigInt::to_string)
        .collect::<Vec<_>>()
        .join(", ");
    push(
        &mut out,
        format!("twist coefficients ({}): {divisors}", report.divisors.len()),
    );
    for t in &report.twists {
        let mut line = format!(
            "  d = {}: {}, complete = {}, {} candidate{}",
            t.twist.d,
            t.backend,
            t.complete,
            t.x_candidates.len(),
            if t.x_candidates.len() == 1 { "" } else { "s" },
        );
        if let Some(diag) = t.diagnostics.first() {
            line.push_str("; ");
            line.push_str(diag);
        }
        push(&mut out, line);
    }
    push(&mut out, format!("points ({}):", report.points.len()));
    for pt in &report.points {
        push(&mut out, format!("  ({}, {})", pt.x, pt.y));
    }
    match report.bound {
        Some(b) => push(&mut out, format!("bound on points with y > 0: {b}")),
        None => push(&mut out, "bound on points with y > 0: none stated".into()),
    }
    push(&mut out, format!("status: {}", status_line(report)));
    if !report.notes.is_empty() {
        push(&mut out, "notes:".into());
        for note in &report.notes {
            push(&mut out, format!("  - {note}"));
        }
    }
    out
}

fn report_json(report: &DescentReport) -> Value {
    let coeffs = |p: &descent_core::algebra::IntegerPolynomial| {
        Value::Array(p.coefficients().iter().map(big_str).collect())
    };
    let twists: Vec<Value> = report
        .twists
        .iter()
        .map(|t| {
            json!({
                "d": t.twist.d.to_string(),
                "kind": t.twist.kind.name(),
                "backend": t.backend,
                "complete": t.complete,
                "x_candidates": t.x_candidates.iter().map(BigInt::to_string).collect::<Vec<_>>(),
                "diagnostics": t.diagnostics,
            })
        })
        .collect();
    json!({
        "equation": report.problem.describe(),
        "p": report.problem.p,
        "scale": report.problem.scale.to_string(),
        "f": coeffs(&report.problem.f),
        "g": coeffs(&report.problem.g),
        "resultant": report.resultant.to_string(),
        "divisors": report.divisors.iter().map(BigInt::to_string).collect::<Vec<_>>(),
        "twists": twists,
        "points": report.points.iter().map(|pt| point_value(&pt.x, &pt.y)).collect::<Vec<_>>(),
        "complete": report.complete,
        "bound": report.bound,
        "height": report.height,
        "status": status_line(report),
        "notes": report.notes,
    })
}

fn report_csv(report: &DescentReport) -> String {
    let mut out = String::from("x,y,d_source,complete\n");
    for pt in &report.points {
        let source = point_source(report, &pt.x)
            .map(|d| d.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{source},{}\n",
            pt.x, pt.y, report.complete
        ));
    }
    out
}

pub fn render_table(
    family: &str,
    equation: &str,
    kmax: u64,
    rows: &[TableRow],
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::Text => table_text(equation, kmax, rows),
        OutputFormat::Json => table_json(family, equation, kmax, rows).to_string(),
        OutputFormat::Csv => table_csv(rows),
    }
}

fn format_points(points: &[(BigInt, BigInt)]) -> String {
    points
        .iter()
        .map(|(x, y)| format!("({x}, {y})"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn table_text(equation: &str, kmax: u64, rows: &[TableRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!("family: {equation}, 1 < k <= {kmax}\n"));
    let mut with_points = 0usize;
    for row in rows {
        if !row.points.is_empty() {
            with_points += 1;
            out.push_str(&format!("k = {}: {}\n", row.k, format_points(&row.points)));
        }
    }
    out.push_str(&format!(
        "rows with points: {with_points} of {}\n",
        rows.len()
    ));
    let flagged: Vec<&TableRow> = rows.iter().filter(|r| r.flag.is_some()).collect();
    if !flagged.is_empty() {
        out.push_str("flagged rows:\n");
        for row in flagged {
            out.push_str(&format!(
                "  k = {}: {}\n",
                row.k,
                row.flag.as_deref().unwrap_or("")
            ));
        }
    }
    out
}

fn table_json(family: &str, equation: &str, kmax: u64, rows: &[TableRow]) -> Value {
    let row_values: Vec<Value> = rows
        .iter()
        .filter(|r| !r.points.is_empty() || r.flag.is_some())
        .map(|r| {
            let mut obj = serde_json::Map::new();
            obj.insert("k".into(), json!(r.k));
            obj.insert(
                "points".into(),
                Value::Array(r.points.iter().map(|(x, y)| point_value(x, y)).collect()),
            );
            obj.insert("complete".into(), json!(r.complete));
            if let Some(flag) = &r.flag {
                obj.insert("flag".into(), json!(flag));
            }
            Value::Object(obj)
        })
        .collect();
    json!({
        "family": family,
        "equation": equation,
        "kmax": kmax,
        "rows": row_values,
    })
}

fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("k,x,y\n");
    for row in rows {
        for (x, y) in &row.points {
            out.push_str(&format!("{},{x},{y}\n", row.k));
        }
    }
    out
}

pub fn render_pell_fundamental(
    fund: Option<&PellFundamental>,
    d: &str,
    sign: i8,
    period: usize,
    format: OutputFormat,
) -> String {
    let rhs = if sign > 0 { "1" } else { "-1" };
    match format {
        OutputFormat::Text => match fund {
            Some(f) => format!(
                "equation: x^2 - {d} y^2 = {rhs}\nfundamental: x = {}, y = {}\nperiod length: {period}\n",
                f.x, f.y
            ),
            None => format!(
                "equation: x^2 - {d} y^2 = {rhs}\nno solution: the continued fraction period of sqrt({d}) has even length {period}\n"
            ),
        },
        OutputFormat::Json => match fund {
            Some(f) => json!({
                "d": d,
                "sign": sign,
                "period": period,
                "solvable": true,
                "x": f.x.to_string(),
                "y": f.y.to_string(),
            })
            .to_string(),
            None => json!({
                "d": d,
                "sign": sign,
                "period": period,
                "solvable": false,
            })
            .to_string(),
        },
        OutputFormat::Csv => {
            let mut out = String::from("d,sign,x,y,period\n");
            if let Some(f) = fund {
                out.push_str(&format!("{d},{sign},{},{},{period}\n", f.x, f.y));
            }
            out
        }
    }
}

pub fn render_pell_quartic(solved: &QuarticPellSolutions, format: OutputFormat) -> String {
    let constant = match solved.variant.name() {
        "minus" => "- 1",
        _ => "+ 1",
    };
    match format {
        OutputFormat::Text => {
            let mut out = format!("equation: {} y^2 = x^4 {constant}\n", solved.d);
            if solved.solutions.is_empty() {
                out.push_str("no solutions in positive integers\n");
            } else {
                let list = solved
                    .solutions
                    .iter()
                    .map(|(x, y)| format!("({x}, {y})"))
                    .collect::<Vec<_>>()
                    .join(", ");
                out.push_str(&format!("solutions (x, y): {list}\n"));
            }
            out
        }
        OutputFormat::Json => json!({
            "d": solved.d.to_string(),
            "variant": solved.variant.name(),
            "solutions": solved
                .solutions
                .iter()
                .map(|(x, y)| Value::Array(vec![
                    Value::String(x.to_string()),
                    Value::String(y.to_string()),
                ]))
                .collect::<Vec<_>>(),
        })
        .to_string(),
        OutputFormat::Csv => {
            let mut out = String::from("d,variant,x,y\n");
            for (x, y) in &solved.solutions {
                out.push_str(&format!("{},{},{x},{y}\n", solved.d, solved.variant.name()));
            }
            out
        }
    }
}

/// Points with `y > 0` from a report, for table rows.
pub fn positive_points(report: &DescentReport) -> Vec<(BigInt, BigInt)> {
    report
        .points
        .iter()
        .filter(|pt| !pt.y.is_zero())
        .map(|pt| (pt.x.clone(), pt.y.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use descent_core::algebra::IntegerPolynomial;
    use descent_core::descent::{solve_hyperelliptic, BackendChoice, SolveOptions};

    fn example_report() -> DescentReport {
        let f = IntegerPolynomial::from_i64(&[1, 1, 0, 1]);
        let g = IntegerPolynomial::from_i64(&[4, 4, -3, 2, 1]);
        let opts = SolveOptions {
            height: 10_000,
            backend: BackendChoice::Bounded,
            ..SolveOptions::default()
        };
        solve_hyperelliptic(&f, &g, &opts).unwrap()
    }

    #[test]
    fn json_points_are_sorted_decimal_strings() {
        let report = example_report();
        let rendered = render_report(&report, OutputFormat::Json);
        assert!(rendered
            .contains(r#""points":[["-2","12"],["-1","2"],["0","2"],["3","62"]]"#));
        assert!(serde_json::from_str::<Value>(&rendered).is_ok());
    }

    #[test]
    fn bounded_text_labels_the_height() {
        let report = example_report();
        let rendered = render_report(&report, OutputFormat::Text);
        assert!(rendered.contains("status: complete up to height 10000"));
        assert!(rendered.contains("resultant: -31"));
        assert!(rendered.contains("(3, 62)"));
    }

    #[test]
    fn csv_has_one_row_per_point() {
        let report = example_report();
        let rendered = render_report(&report, OutputFormat::Csv);
        let lines: Vec<&str> = rendered.lines().collect();
        assert_eq!(lines[0], "x,y,d_source,complete");
        assert_eq!(lines.len(), 1 + report.points.len());
        assert!(lines[1].starts_with("-2,12,"));
        assert!(lines[1].ends_with(",false"));
    }

    #[test]
    fn empty_csv_is_header_only() {
        let rows: Vec<TableRow> = Vec::new();
        assert_eq!(table_csv(&rows), "k,x,y\n");
    }

    #[test]
    fn rendering_is_deterministic() {
        let report = example_report();
        assert_eq!(
            render_report(&report, OutputFormat::Json),
            render_report(&report, OutputFormat::Json)
        );
        assert_eq!(
            render_report(&report, OutputFormat::Csv),
            render_report(&report, OutputFormat::Csv)
        );
    }
}
