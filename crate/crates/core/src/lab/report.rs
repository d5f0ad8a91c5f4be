use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// One checked inequality `lhs ≤ rhs`, stored as the excess `lhs - rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub name: String,
    pub excess: f64,
    pub tolerance: f64,
}

impl Residual {
    pub fn passed(&self) -> bool {
        self.excess <= self.tolerance
    }
}

/// What a report was computed on.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mesh: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub instance: Instance,
    pub verdict: Verdict,
    pub residuals: Vec<Residual>,
    /// Observed statistics that are not checked against anything.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub values: BTreeMap<String, f64>,
    /// How often each hypothesis was triggered.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub counts: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    #[serde(skip)]
    unmet: bool,
}

impl LemmaReport {
    pub fn new(lemma: impl Into<String>) -> LemmaReport {
        LemmaReport {
            lemma: lemma.into(),
            instance: Instance::default(),
            verdict: Verdict::Pass,
            residuals: Vec::new(),
            values: BTreeMap::new(),
            counts: BTreeMap::new(),
            notes: Vec::new(),
            unmet: false,
        }
    }

    pub fn with_instance(mut self, instance: Instance) -> LemmaReport {
        self.instance = instance;
        self
    }

    /// Records `lhs ≤ rhs + tolerance`.
    pub fn check(&mut self, name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> bool {
        let r = Residual { name: name.into(), excess: lhs - rhs, tolerance };
        let ok = r.passed();
        self.residuals.push(r);
        self.update();
        ok
    }

    pub fn value(&mut self, name: impl Into<String>, v: f64) {
        self.values.insert(name.into(), v);
    }

    pub fn count(&mut self, name: impl Into<String>, n: usize) {
        *self.counts.entry(name.into()).or_default() += n;
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// A precondition was unmet; the verdict becomes inconclusive unless a
    /// residual already fails.
    pub fn inconclusive(&mut self, reason: impl Into<String>) {
        self.notes.push(reason.into());
        self.unmet = true;
        self.update();
    }

    pub fn failures(&self) -> impl Iterator<Item = &Residual> {
        self.residuals.iter().filter(|r| !r.passed())
    }

    /// Largest excess over the tolerance among residuals with this name prefix.
    pub fn worst(&self, prefix: &str) -> Option<f64> {
        self.residuals
            .iter()
            .filter(|r| r.name.starts_with(prefix))
            .map(|r| r.excess - r.tolerance)
            .max_by(f64::total_cmp)
    }

    fn update(&mut self) {
        self.verdict = if self.residuals.iter().any(|r| !r.passed()) {
            Verdict::Fail
        } else if self.unmet {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
    }

    /// Absorbs another report's residuals, counts and notes.
    pub fn merge(&mut self, other: LemmaReport) {
        self.residuals.extend(other.residuals);
        self.values.extend(other.values);
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        self.notes.extend(other.notes);
        self.unmet |= other.unmet;
        self.update();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_residuals() {
        let mut r = LemmaReport::new("x");
        assert!(r.check("a", 1.0, 1.0, 0.0));
        assert_eq!(r.verdict, Verdict::Pass);
        r.inconclusive("no data");
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(!r.check("b", 2.0, 1.0, 0.5));
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(!r.check("nan", f64::NAN, 0.0, 1.0));
    }
}
