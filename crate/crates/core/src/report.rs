//! Structured pass/fail records for checked identities and inequalities.

use serde::{Deserialize, Serialize};

/// Relative slack allowed on every inequality check.
pub const INEQUALITY_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `lhs <= rhs`
    Inequality,
    /// `lhs == rhs` up to tolerance
    Identity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs` for inequalities, `-|lhs - rhs|` for identities.
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// `lhs <= rhs` with slack `tol * max(1, |rhs|)`.
    pub fn le(label: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = rhs - lhs;
        let pass = margin >= -tol * rhs.abs().max(1.0);
        Check { label: label.into(), kind: CheckKind::Inequality, lhs, rhs, margin, tolerance: tol, pass }
    }

    /// `|lhs - rhs| <= tol * max(1, |rhs|)`.
    pub fn eq(label: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let diff = (lhs - rhs).abs();
        let pass = diff <= tol * rhs.abs().max(1.0);
        Check { label: label.into(), kind: CheckKind::Identity, lhs, rhs, margin: -diff, tolerance: tol, pass }
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub checks: Vec<Check>,
    /// Measured quantities reported for study, never asserted.
    pub measurements: Vec<Measurement>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub label: String,
    pub value: f64,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport { name: name.into(), ..Default::default() }
    }

    pub fn push(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    pub fn measure(&mut self, label: impl Into<String>, value: f64) -> &mut Self {
        self.measurements.push(Measurement { label: label.into(), value });
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    /// Appends the checks and measurements of `other`, prefixing labels with its name.
    pub fn absorb(&mut self, other: VerificationReport) -> &mut Self {
        let prefix = other.name;
        for mut c in other.checks {
            c.label = format!("{prefix}/{}", c.label);
            self.checks.push(c);
        }
        for mut m in other.measurements {
            m.label = format!("{prefix}/{}", m.label);
            self.measurements.push(m);
        }
        self.notes.extend(other.notes);
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn measurement(&self, label: &str) -> Option<f64> {
        self.measurements.iter().find(|m| m.label == label).map(|m| m.value)
    }

    pub fn check(&self, label: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.label == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inequality_slack_scales_with_rhs() {
        assert!(Check::le("a", 1.0 + 5e-10, 1.0, 1e-9).pass);
        assert!(!Check::le("a", 1.0 + 2e-9, 1.0, 1e-9).pass);
        assert!(Check::le("a", 1000.0 + 5e-7, 1000.0, 1e-9).pass);
        assert!(Check::le("a", 0.0, 0.0, 1e-9).pass);
    }

    #[test]
    fn absorb_prefixes_labels() {
        let mut inner = VerificationReport::new("inner");
        inner.push(Check::eq("x", 1.0, 1.0, 0.0)).measure("m", 2.0);
        let mut outer = VerificationReport::new("outer");
        outer.absorb(inner);
        assert!(outer.check("inner/x").is_some());
        assert_eq!(outer.measurement("inner/m"), Some(2.0));
        assert!(outer.passed());
    }
}
