use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use posmap_core::{ChoiMat64, Mat4f64};
use serde_json::Value;

/// Parses `1`, `-0.5`, `2i`, `-i`, `0.3+0.4i`, `1e-3-2e-2i` (`j` is accepted for `i`).
pub fn complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || anyhow!("cannot parse complex number {s:?}");
    if t.is_empty() {
        return Err(bad());
    }
    let number = |x: &str| -> Result<f64> {
        let v: f64 = match x {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => x.parse().map_err(|_| bad())?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        let re = t.parse::<f64>().map_err(|_| bad())?;
        if !re.is_finite() {
            return Err(bad());
        }
        return Ok(Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            if !re.is_finite() {
                return Err(bad());
            }
            Ok(Complex64::new(re, number(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, number(body)?)),
    }
}

/// Parses a vector in ℂ² written as two comma-separated complex numbers.
pub fn vector2(s: &str) -> Result<[Complex64; 2]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        bail!("expected two comma-separated entries, got {s:?}");
    }
    Ok([complex(parts[0])?, complex(parts[1])?])
}

/// Extracts a 4×4 matrix from either a bare `{"rows": ...}` document, an
/// object with a `matrix` field, or a report whose `result.matrix` holds it.
pub fn matrix(bytes: &[u8]) -> Result<ChoiMat64> {
    let doc: Value = serde_json::from_slice(bytes).context("input is not valid JSON")?;
    let node = if doc.get("rows").is_some() {
        &doc
    } else if let Some(m) = doc.get("matrix") {
        m
    } else if let Some(m) = doc.get("result").and_then(|r| r.get("matrix")) {
        m
    } else {
        bail!("no \"rows\" or \"matrix\" field in input");
    };
    let m: Mat4f64 = serde_json::from_value(node.clone()).context("malformed 4x4 matrix")?;
    Ok(ChoiMat64::from_mat4(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(complex("1+0i").unwrap(), c(1.0, 0.0));
        assert_eq!(complex("0").unwrap(), c(0.0, 0.0));
        assert_eq!(complex("-0.5").unwrap(), c(-0.5, 0.0));
        assert_eq!(complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(complex("0.3-0.4i").unwrap(), c(0.3, -0.4));
        assert_eq!(complex("1e-3+2E-2j").unwrap(), c(1e-3, 2e-2));
        assert_eq!(complex("-2.5e+1i").unwrap(), c(0.0, -25.0));
        assert_eq!(complex(" 1 - i ").unwrap(), c(1.0, -1.0));
    }

    #[test]
    fn complex_rejects_garbage() {
        for s in ["", "abc", "1+", "1+2", "nan", "1+infi", "i1"] {
            assert!(complex(s).is_err(), "{s}");
        }
    }

    #[test]
    fn matrix_locations() {
        let rows = r#"{"rows":[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]}"#;
        let bare = matrix(rows.as_bytes()).unwrap();
        let nested = matrix(format!(r#"{{"result":{{"matrix":{rows}}}}}"#).as_bytes()).unwrap();
        assert_eq!(bare, nested);
        assert!(matrix(b"{\"rows\": [[1]]}").is_err());
        assert!(matrix(b"not json").is_err());
    }
}
