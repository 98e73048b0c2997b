//! Validation results and law-suite reports.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

/// One violated law together with a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: String,
    pub witness: String,
}

impl Violation {
    pub fn new(law: impl Into<String>, witness: impl Into<String>) -> Self {
        Violation {
            law: law.into(),
            witness: witness.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.law, self.witness)
    }
}

/// Collects violations, keeping only the first witness for each law.
#[derive(Debug, Clone, Default)]
pub struct Validation {
    seen: BTreeSet<String>,
    violations: Vec<Violation>,
}

impl Validation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fail(&mut self, law: &str, witness: impl FnOnce() -> String) {
        if self.seen.insert(law.to_string()) {
            self.violations.push(Violation::new(law, witness()));
        }
    }

    pub fn check(&mut self, ok: bool, law: &str, witness: impl FnOnce() -> String) {
        if !ok {
            self.fail(law, witness);
        }
    }

    pub fn has_failed(&self, law: &str) -> bool {
        self.seen.contains(law)
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn into_violations(self) -> Vec<Violation> {
        self.violations
    }

    pub fn into_result(self) -> crate::Result<()> {
        if self.violations.is_empty() {
            Ok(())
        } else {
            Err(crate::Error::Law(self.violations))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One line of law-suite output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub suite: String,
    pub instance: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl LawReport {
    pub fn pass(suite: &str, instance: impl Into<String>) -> Self {
        LawReport {
            suite: suite.to_string(),
            instance: instance.into(),
            verdict: Verdict::Pass,
            witness: None,
            detail: None,
            replay: None,
            elapsed_ms: None,
        }
    }

    pub fn fail(suite: &str, instance: impl Into<String>, witness: impl Into<String>) -> Self {
        LawReport {
            verdict: Verdict::Fail,
            witness: Some(witness.into()),
            ..Self::pass(suite, instance)
        }
    }

    pub fn from_violations(suite: &str, instance: impl Into<String>, v: &[Violation]) -> Self {
        if v.is_empty() {
            Self::pass(suite, instance)
        } else {
            let w = v
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            Self::fail(suite, instance, w)
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Human-readable single line.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "[{}] {} :: {}",
            match self.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
            },
            self.suite,
            self.instance
        );
        if let Some(d) = &self.detail {
            s.push_str(&format!(" -- {d}"));
        }
        if let Some(w) = &self.witness {
            s.push_str(&format!("\n    witness: {w}"));
        }
        if let Some(r) = &self.replay {
            s.push_str(&format!("\n    replay: {r}"));
        }
        if let Some(t) = self.elapsed_ms {
            s.push_str(&format!(" ({t} ms)"));
        }
        s
    }
}
