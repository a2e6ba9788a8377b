//! Outcome of a positivity, complete-positivity, or face test.
//!
//! Margins use one sign convention throughout: a margin is the slack of the
//! tested inequality (`rhs - lhs`), so satisfied conditions have margin
//! `>= 0` and violated ones are negative. A test passes when every margin is
//! at least `-tol`. Equality conditions such as `z = 0` report `-|z|`.

use std::fmt;

use num_complex::Complex;
use serde::Serialize;

use crate::linalg::Mat2;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_margin<T: Real>(margin: T, tol: T) -> Self {
        if margin >= -tol {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// Evidence attached to a failing certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness<T: Real> {
    /// Unit vector `w` with `⟨w, M w⟩` equal to the offending eigenvalue.
    Vector { vector: Vec<Complex<T>> },
    /// Unit `v ∈ ℂ²` whose compressed matrix `[⟨v, H_ij v⟩]` is not PSD.
    BlockVector { vector: [Complex<T>; 2], compressed: Mat2<T> },
    /// Named scalar condition (minor, equality, or constraint) that failed.
    Condition { name: String },
}

/// One named sub-condition evaluated by a certifier.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check<T: Real> {
    pub name: String,
    pub margin: T,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate<T: Real> {
    pub verdict: Verdict,
    /// Smallest slack over the evaluated conditions.
    pub margin: T,
    pub witness: Option<Witness<T>>,
    /// Name of the first failed condition, or a summary tag on success.
    pub detail: String,
    /// Individual conditions in evaluation order; empty for single-number tests.
    pub checks: Vec<Check<T>>,
}

impl<T: Real> Certificate<T> {
    pub fn is_pass(&self) -> bool {
        self.verdict.is_pass()
    }

    /// Certificate for a single scalar test.
    pub fn single(margin: T, tol: T, detail: impl Into<String>, witness: Option<Witness<T>>) -> Self {
        let verdict = Verdict::from_margin(margin, tol);
        let detail = detail.into();
        let witness = match verdict {
            Verdict::Pass => None,
            Verdict::Fail => witness.or_else(|| {
                Some(Witness::Condition {
                    name: detail.clone(),
                })
            }),
        };
        Self {
            verdict,
            margin,
            witness,
            detail,
            checks: Vec::new(),
        }
    }

    /// Combines named margins; the first one below `-tol` decides the detail
    /// and the witness.
    pub fn from_checks(checks: Vec<(String, T)>, tol: T, pass_detail: &str) -> Self {
        let checks: Vec<Check<T>> = checks
            .into_iter()
            .map(|(name, margin)| Check {
                verdict: Verdict::from_margin(margin, tol),
                name,
                margin,
            })
            .collect();
        let margin = checks
            .iter()
            .map(|c| c.margin)
            .fold(T::infinity(), T::min);
        match checks.iter().find(|c| !c.verdict.is_pass()) {
            Some(failed) => Self {
                verdict: Verdict::Fail,
                margin,
                witness: Some(Witness::Condition {
                    name: failed.name.clone(),
                }),
                detail: failed.name.clone(),
                checks,
            },
            None => Self {
                verdict: Verdict::Pass,
                margin,
                witness: None,
                detail: pass_detail.to_string(),
                checks,
            },
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check<T>> {
        self.checks.iter().find(|c| c.name == name)
    }
}
