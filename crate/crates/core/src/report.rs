//! A uniform carrier for checked inequality instances.

use serde::Serialize;

/// Which comparison statement a report checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statement {
    /// `y'' ... + kappa y^(l) = f` solutions ordered like their coefficients.
    OdeComparison,
    /// Area swept from the base point against the comparison profile.
    AreaComparison,
    /// Two-sided area bound from curvature bounds `k0 <= kappa <= k1`.
    AreaSandwich,
    /// Adapted-coordinate rectangle bounds.
    CoordinateBounds,
    /// Inscribed triangle against the area profile of the whole arc.
    TriangleArc,
    /// Inscribed triangle against the rectangle profile at half length.
    TriangleRect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    HypothesesFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl Hypothesis {
    pub fn new(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Hypothesis {
            name: name.into(),
            holds,
            detail: detail.into(),
        }
    }
}

/// Where the binding value (or a violation) was found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub at: f64,
    pub detail: String,
}

/// A checked instance of `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub statement: Statement,
    pub hypotheses: Vec<Hypothesis>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub verdict: Verdict,
    pub equality: bool,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
}

impl BoundReport {
    /// Verdict is `Holds` iff every hypothesis holds and `lhs <= rhs + slack`.
    pub fn new(statement: Statement, hypotheses: Vec<Hypothesis>, lhs: f64, rhs: f64, slack: f64) -> Self {
        let verdict = if hypotheses.iter().any(|h| !h.holds) {
            Verdict::HypothesesFailed
        } else if lhs <= rhs + slack {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        BoundReport {
            statement,
            hypotheses,
            lhs,
            rhs,
            slack,
            verdict,
            equality: false,
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn with_witness(mut self, at: f64, detail: impl Into<String>) -> Self {
        self.witness = Some(Witness {
            at,
            detail: detail.into(),
        });
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn failed_hypotheses(&self) -> impl Iterator<Item = &Hypothesis> {
        self.hypotheses.iter().filter(|h| !h.holds)
    }
}

/// Inequality slack `1e-7 * max(1, |bound|)`.
pub fn default_slack(bound: f64) -> f64 {
    1e-7 * bound.abs().max(1.0)
}

/// Whether `|lhs - rhs|` is small enough to count as the equality case.
pub fn near_equality(lhs: f64, rhs: f64) -> bool {
    (lhs - rhs).abs() <= 1e-6 * rhs.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_rules() {
        let ok = BoundReport::new(Statement::TriangleArc, vec![], 1.0, 1.0, 1e-9);
        assert!(ok.holds());
        let bad = BoundReport::new(Statement::TriangleArc, vec![], 1.1, 1.0, 1e-9);
        assert_eq!(bad.verdict, Verdict::Violated);
        let hyp = BoundReport::new(
            Statement::TriangleArc,
            vec![Hypothesis::new("positive", false, "")],
            0.0,
            1.0,
            0.0,
        );
        assert_eq!(hyp.verdict, Verdict::HypothesesFailed);
        assert_eq!(hyp.failed_hypotheses().count(), 1);
    }
}
