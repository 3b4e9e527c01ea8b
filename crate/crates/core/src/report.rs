//! Per-trial records, aggregation and exact binomial intervals.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::embed::{Certificate, Embedding, FailureReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub id: usize,
    pub seed: u64,
    pub adversary: String,
    pub success: bool,
    pub target_nodes: usize,
    pub nodes: usize,
    pub steps: usize,
    pub reservation_retries: usize,
    pub rollbacks: usize,
    pub cascade_sizes: Vec<usize>,
    pub max_cascade: usize,
    pub certificate: Option<Certificate>,
    pub failure: Option<FailureReport>,
    /// Outcome of the brute-force cross-check, when one was run.
    pub oracle: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Embedding>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    pub confidence: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Aggregate {
    pub fn new(successes: usize, trials: usize, confidence: f64) -> Self {
        let (ci_low, ci_high) = clopper_pearson(successes, trials, confidence);
        Aggregate {
            trials,
            successes,
            frequency: if trials == 0 {
                0.0
            } else {
                successes as f64 / trials as f64
            },
            confidence,
            ci_low,
            ci_high,
        }
    }
}

/// Exact two-sided binomial interval for `k` successes in `n` trials.
pub fn clopper_pearson(k: usize, n: usize, confidence: f64) -> (f64, f64) {
    assert!(k <= n, "more successes than trials");
    if n == 0 {
        return (0.0, 1.0);
    }
    let alpha = 1.0 - confidence;
    let (k, n) = (k as f64, n as f64);
    let lo = if k == 0.0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0).expect("positive shape").inverse_cdf(alpha / 2.0)
    };
    let hi = if k == n {
        1.0
    } else {
        Beta::new(k + 1.0, n - k).expect("positive shape").inverse_cdf(1.0 - alpha / 2.0)
    };
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// Fully resolved configuration of the run.
    pub config: serde_json::Value,
    pub records: Vec<TrialRecord>,
    pub aggregate: Aggregate,
    /// Aggregates per adversary name.
    pub by_adversary: BTreeMap<String, Aggregate>,
    /// Free-form key/value notes such as host statistics.
    pub notes: BTreeMap<String, serde_json::Value>,
}

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

impl ExperimentReport {
    /// Sorts records by id and recomputes every aggregate.
    pub fn new(config: serde_json::Value, mut records: Vec<TrialRecord>) -> Self {
        records.sort_by_key(|r| r.id);
        let ok = records.iter().filter(|r| r.success).count();
        let mut groups: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for r in &records {
            let e = groups.entry(r.adversary.clone()).or_default();
            e.0 += r.success as usize;
            e.1 += 1;
        }
        ExperimentReport {
            config,
            aggregate: Aggregate::new(ok, records.len(), DEFAULT_CONFIDENCE),
            by_adversary: groups
                .into_iter()
                .map(|(k, (s, t))| (k, Aggregate::new(s, t, DEFAULT_CONFIDENCE)))
                .collect(),
            records,
            notes: BTreeMap::new(),
        }
    }

    pub fn all_succeeded(&self) -> bool {
        self.aggregate.successes == self.aggregate.trials
    }

    pub fn any_refusal(&self) -> bool {
        self.records
            .iter()
            .any(|r| r.failure.as_ref().is_some_and(|f| f.is_hypothesis_refusal()))
    }

    /// Every success carries a passing certificate.
    pub fn successes_certified(&self) -> bool {
        self.records
            .iter()
            .filter(|r| r.success)
            .all(|r| r.certificate.as_ref().is_some_and(|c| c.passed()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per trial.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("id,seed,adversary,success,nodes,target,steps,retries,rollbacks,max_cascade\n");
        for r in &self.records {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.id,
                r.seed,
                r.adversary,
                r.success,
                r.nodes,
                r.target_nodes,
                r.steps,
                r.reservation_retries,
                r.rollbacks,
                r.max_cascade
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_edges() {
        assert_eq!(clopper_pearson(0, 0, 0.95), (0.0, 1.0));
        let (lo, hi) = clopper_pearson(0, 10, 0.95);
        assert_eq!(lo, 0.0);
        // 1 - 0.025^(1/10)
        assert!((hi - 0.308_5).abs() < 1e-3);
        let (lo, hi) = clopper_pearson(10, 10, 0.95);
        assert!((lo - 0.691_5).abs() < 1e-3);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn interval_contains_estimate() {
        for (k, n) in [(1, 20), (10, 20), (19, 20), (72, 80)] {
            let (lo, hi) = clopper_pearson(k, n, 0.95);
            let p = k as f64 / n as f64;
            assert!(lo < p && p < hi);
        }
        // known value: 5 of 10
        let (lo, hi) = clopper_pearson(5, 10, 0.95);
        assert!((lo - 0.187_1).abs() < 1e-3 && (hi - 0.812_9).abs() < 1e-3);
    }
}
