use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

/// Envelope shared by every subcommand.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub tool: Tool,
    pub command: String,
    /// Arguments after the program name, verbatim.
    pub args: Vec<String>,
    /// SHA-256 of the input file, if the command read one.
    pub input_sha256: Option<String>,
    pub seed: Option<u64>,
    pub tol: f64,
    /// `PASS` when every certificate in `result` passed.
    pub verdict: &'static str,
    pub result: Value,
    pub timing_ms: f64,
}

impl RunReport {
    pub fn tool() -> Tool {
        Tool {
            name: "posmap",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Plain-text rendering of a serialized report.
pub fn render_text(report: &Value) -> String {
    let mut out = String::new();
    let get = |k: &str| report.get(k).cloned().unwrap_or(Value::Null);
    let _ = writeln!(
        out,
        "posmap {} {}",
        get("command").as_str().unwrap_or("?"),
        get("verdict").as_str().unwrap_or("?")
    );
    for key in ["input_sha256", "seed", "tol", "timing_ms"] {
        let v = get(key);
        if !v.is_null() {
            let _ = writeln!(out, "  {key}: {}", scalar(&v));
        }
    }
    if let Some(result) = report.get("result") {
        walk(result, "", &mut out);
    }
    out
}

fn walk(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            if let (Some(verdict), Some(margin)) = (map.get("verdict"), map.get("margin")) {
                let detail = map.get("detail").and_then(Value::as_str).unwrap_or("");
                let _ = writeln!(
                    out,
                    "{path}: {} (margin {}, {detail})",
                    verdict.as_str().unwrap_or("?"),
                    scalar(margin)
                );
                if let Some(Value::Array(checks)) = map.get("checks") {
                    for c in checks {
                        let _ = writeln!(
                            out,
                            "    {:<40} {} {}",
                            c.get("name").and_then(Value::as_str).unwrap_or("?"),
                            c.get("verdict").and_then(Value::as_str).unwrap_or("?"),
                            c.get("margin").map(scalar).unwrap_or_default()
                        );
                    }
                }
                return;
            }
            if let Some(Value::Array(rows)) = map.get("rows") {
                let _ = writeln!(out, "{path}:");
                for row in rows {
                    let cells: Vec<String> = row
                        .as_array()
                        .map(|r| r.iter().map(complex_cell).collect())
                        .unwrap_or_default();
                    let _ = writeln!(out, "    {}", cells.join("  "));
                }
                return;
            }
            for (k, child) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                walk(child, &p, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for (i, child) in items.iter().enumerate() {
                walk(child, &format!("{path}[{i}]"), out);
            }
        }
        Value::Array(items) if items.len() == 2 && items.iter().all(Value::is_number) => {
            let _ = writeln!(out, "{path}: {}", complex_cell(v));
        }
        _ => {
            let _ = writeln!(out, "{path}: {}", scalar(v));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn complex_cell(v: &Value) -> String {
    let part = |i: usize| v.get(i).and_then(Value::as_f64).unwrap_or(f64::NAN);
    let (re, im) = (part(0), part(1));
    format!("{re:+.6}{:+.6}i", im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn renders_certificates_and_matrices() {
        let report = json!({
            "command": "certify",
            "verdict": "FAIL",
            "tol": 1e-10,
            "result": {
                "matrix": {"rows": [[[1.0, 0.0], [0.0, -0.5]], [[0.0, 0.5], [2.0, 0.0]]]},
                "cp": {"verdict": "FAIL", "margin": -0.25, "detail": "lambda_min(H)", "checks": []}
            }
        });
        let text = render_text(&report);
        assert!(text.starts_with("posmap certify FAIL"));
        assert!(text.contains("cp: FAIL (margin -0.25, lambda_min(H))"));
        assert!(text.contains("+1.000000+0.000000i  +0.000000-0.500000i"));
    }
}
