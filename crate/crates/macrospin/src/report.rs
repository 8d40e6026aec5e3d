//! Experiment reports: named moments, inequality evaluations, and
//! pass/fail verdicts, serializable with stable key ordering.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: f64,
    pub relation: String,
    pub bound: f64,
    pub satisfied: bool,
}

impl InequalityCheck {
    /// `relation` is one of `<`, `<=`, `>`, `>=`; `satisfied` records
    /// whether `lhs relation bound` holds.
    pub fn new(name: impl Into<String>, lhs: f64, relation: &str, bound: f64) -> Self {
        let satisfied = match relation {
            "<" => lhs < bound,
            "<=" => lhs <= bound,
            ">" => lhs > bound,
            ">=" => lhs >= bound,
            other => panic!("unknown relation `{other}`"),
        };
        InequalityCheck { name: name.into(), lhs, relation: relation.to_string(), bound, satisfied }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub tolerance: f64,
    pub detail: String,
}

impl Verdict {
    /// Verdict that `value` is within `tolerance` of `expected`.
    pub fn close(name: impl Into<String>, value: f64, expected: f64, tolerance: f64) -> Self {
        let err = (value - expected).abs();
        Verdict {
            name: name.into(),
            pass: err <= tolerance,
            tolerance,
            detail: format!("value {value:.12}, expected {expected:.12}, |err| {err:.3e}"),
        }
    }

    /// Verdict that `value` does not exceed `limit`.
    pub fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Verdict {
            name: name.into(),
            pass: value <= limit,
            tolerance: limit,
            detail: format!("value {value:.12}, limit {limit:.3e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportProvenance {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub cutoffs: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub parameters: BTreeMap<String, f64>,
    pub moments: BTreeMap<String, f64>,
    pub inequalities: Vec<InequalityCheck>,
    pub verdicts: Vec<Verdict>,
    pub provenance: ReportProvenance,
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>) -> Self {
        ExperimentReport {
            experiment: experiment.into(),
            parameters: BTreeMap::new(),
            moments: BTreeMap::new(),
            inequalities: Vec::new(),
            verdicts: Vec::new(),
            provenance: ReportProvenance::default(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// Canonical JSON: maps are BTreeMaps and lists keep insertion order,
    /// so identical reports serialize byte-identically.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Moment table only: `name,value` per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,value\n");
        for (name, value) in &self.moments {
            out.push_str(&format!("{name},{value:.15e}\n"));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("experiment: {}\n", self.experiment);
        if !self.parameters.is_empty() {
            out.push_str("parameters:\n");
            for (k, v) in &self.parameters {
                out.push_str(&format!("  {k} = {v}\n"));
            }
        }
        if !self.moments.is_empty() {
            out.push_str("moments:\n");
            for (k, v) in &self.moments {
                out.push_str(&format!("  {k} = {v:+.10}\n"));
            }
        }
        if !self.inequalities.is_empty() {
            out.push_str("inequalities:\n");
            for q in &self.inequalities {
                let mark = if q.satisfied { "holds" } else { "violated" };
                out.push_str(&format!(
                    "  {}: {:.10} {} {:.10}  [{mark}]\n",
                    q.name, q.lhs, q.relation, q.bound
                ));
            }
        }
        if !self.verdicts.is_empty() {
            out.push_str("verdicts:\n");
            for v in &self.verdicts {
                let mark = if v.pass { "pass" } else { "FAIL" };
                out.push_str(&format!("  [{mark}] {}: {}\n", v.name, v.detail));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentReport {
        let mut r = ExperimentReport::new("sample");
        r.parameters.insert("alpha".to_string(), 2.0);
        r.moments.insert("zz".to_string(), -0.999978);
        r.moments.insert("yy".to_string(), -0.999971);
        r.inequalities.push(InequalityCheck::new("steering", 0.01, "<", 1.0));
        r.verdicts.push(Verdict::close("zz anticorrelation", -0.999978, -1.0, 1e-3));
        r.provenance.seed = Some(7);
        r.provenance.cutoffs.insert("mode_a".to_string(), 44);
        r
    }

    #[test]
    fn json_round_trips_field_for_field() {
        let r = sample();
        let text = r.to_json().unwrap();
        let back = ExperimentReport::from_json(&text).unwrap();
        assert_eq!(r, back);
    }

    #[test]
    fn json_is_deterministic() {
        let a = sample().to_json().unwrap();
        let b = sample().to_json().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inequality_constructor_is_consistent() {
        assert!(InequalityCheck::new("a", 0.5, "<", 1.0).satisfied);
        assert!(!InequalityCheck::new("b", 1.5, "<", 1.0).satisfied);
        assert!(InequalityCheck::new("c", 2.0, ">=", 2.0).satisfied);
    }

    #[test]
    fn widening_a_tolerance_never_flips_pass_to_fail() {
        for tol in [1e-6, 1e-4, 1e-2, 1.0] {
            let v = Verdict::close("x", 0.9995, 1.0, tol);
            if tol >= 5e-4 {
                assert!(v.pass);
            }
        }
    }

    #[test]
    fn csv_lists_moments_in_sorted_order() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "name,value");
        assert!(lines[1].starts_with("yy,"));
        assert!(lines[2].starts_with("zz,"));
    }
}
