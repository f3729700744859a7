//! Plain-text tables for the default (non `--json`) output.

use std::fmt::Write;

use serde_json::Value;

use crate::RunReport;

fn num(v: &Value) -> String {
    match v.as_f64() {
        Some(x) if v.is_f64() => format!("{x:.10}"),
        _ => v.to_string(),
    }
}

fn sci(v: &Value) -> String {
    v.as_f64()
        .map(|x| format!("{x:.2e}"))
        .unwrap_or_else(|| v.to_string())
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let _ = writeln!(out, "{}", line(header.to_vec()));
    for row in rows {
        let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
    }
}

pub fn render(report: &RunReport) -> String {
    let r = &report.result;
    let mut out = String::new();
    if let Some(spec) = &report.spec {
        let _ = writeln!(out, "{} {}", report.verb, spec);
    }
    match report.verb {
        "summands" => {
            let _ = writeln!(
                out,
                "count {}  (s={}, m={}, t={}; {} = {})",
                r["count"],
                r["s"],
                r["m"],
                r["t"],
                r["formula"].as_str().unwrap_or(""),
                r["formula_value"]
            );
            let rows: Vec<Vec<String>> = r["summands"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|s| {
                    vec![
                        s["troot"].as_str().unwrap_or("").to_string(),
                        s["fiber_size"].to_string(),
                        s["real_dimension"].to_string(),
                    ]
                })
                .collect();
            table(&mut out, &["t-root", "fiber", "dim"], &rows);
        }
        "troots" => {
            let _ = writeln!(
                out,
                "classification {}",
                r["classification"].as_str().unwrap_or("")
            );
            let rows: Vec<Vec<String>> = r["troots"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|s| {
                    vec![
                        s["id"].as_str().unwrap_or("").to_string(),
                        s["fiber_size"].to_string(),
                        s["real_dimension"].to_string(),
                    ]
                })
                .collect();
            table(&mut out, &["t-root", "fiber", "dim"], &rows);
        }
        "solve" => {
            let st = &r["starts"];
            let _ = writeln!(
                out,
                "seed {}  starts {}  converged {}  diverged {}  max_iters {}  singular {}",
                report.seed.unwrap_or(0),
                r["config"]["starts"],
                st["converged"],
                st["divergence"],
                st["max_iters"],
                st["singular"]
            );
            let sols = r["solutions"].as_array().cloned().unwrap_or_default();
            if sols.is_empty() {
                let _ = writeln!(out, "warning: no solutions found");
            } else {
                let mut header = vec!["#".to_string()];
                header.extend(
                    sols[0]["troots"]
                        .as_array()
                        .into_iter()
                        .flatten()
                        .map(|t| t.as_str().unwrap_or("").to_string()),
                );
                header.extend([
                    "einstein".into(),
                    "residual".into(),
                    "kaehler".into(),
                    "hits".into(),
                ]);
                let rows: Vec<Vec<String>> = sols
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        let mut row = vec![(i + 1).to_string()];
                        row.extend(s["lambda"].as_array().into_iter().flatten().map(num));
                        row.push(num(&s["einstein_constant"]));
                        row.push(sci(&s["residual_norm"]));
                        row.push(if s["kaehler"] == true { "yes" } else { "no" }.into());
                        row.push(s["multiplicity"].to_string());
                        row
                    })
                    .collect();
                let header: Vec<&str> = header.iter().map(String::as_str).collect();
                table(&mut out, &header, &rows);
            }
        }
        "verify" => {
            let rows: Vec<Vec<String>> = r["checks"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|c| {
                    vec![
                        if c["passed"] == true { "PASS" } else { "FAIL" }.into(),
                        c["name"].as_str().unwrap_or("").into(),
                        c["spec"].as_str().unwrap_or("-").into(),
                        sci(&c["value"]),
                        sci(&c["tolerance"]),
                        c["detail"].as_str().unwrap_or("").into(),
                    ]
                })
                .collect();
            table(
                &mut out,
                &["", "check", "spec", "value", "tol", "detail"],
                &rows,
            );
            let _ = writeln!(
                out,
                "{}",
                if r["passed"] == true {
                    "all checks passed"
                } else {
                    "some checks failed"
                }
            );
        }
        _ => {
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(r).unwrap_or_default()
            );
        }
    }
    if let Some(t) = report.timing {
        let _ = writeln!(out, "time {t:.3}s");
    }
    out
}
