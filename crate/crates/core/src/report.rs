//! Uniform result record for every inequality, identity and mapping check.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Absolute-or-relative noise allowance for chains: `1e-12 · max(1, rhs)`.
pub const CHAIN_TOL: f64 = 1e-12;
/// A chain step closer than `1e-9 · max(1, rhs)` is flagged near-tight.
pub const NEAR_TIGHT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Relation {
    /// `values[0] <= values[1] <= ...`.
    Chain,
    /// `values[0] == values[1]` within a relative tolerance.
    Equality { rel_tol: f64 },
    /// `values[0]` is a discrepancy that must not exceed `tol`.
    Within { tol: f64 },
    /// Verdict aggregated from `parts`.
    Bundle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    NearTight,
    Violated,
    NotApplicable(String),
}

impl Verdict {
    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated)
    }

    pub fn is_not_applicable(&self) -> bool {
        matches!(self, Verdict::NotApplicable(_))
    }

    fn severity(&self) -> u8 {
        match self {
            Verdict::NotApplicable(_) => 0,
            Verdict::Holds => 1,
            Verdict::NearTight => 2,
            Verdict::Violated => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub key: String,
    /// The statement being checked, in plain notation.
    pub statement: String,
    /// `false` for the pinned non-theorems, which are expected to fail.
    pub proved: bool,
    pub relation: Relation,
    pub values: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; for chains, the smallest step.
    pub slack: f64,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// First 16 hex digits of the SHA-256 of the serialized inputs.
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub digest: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub parts: Vec<CheckReport>,
}

impl CheckReport {
    fn base(key: &str, statement: &str, relation: Relation, values: Vec<f64>) -> Self {
        let lhs = values.first().copied().unwrap_or(0.0);
        let rhs = values.last().copied().unwrap_or(0.0);
        Self {
            key: key.to_string(),
            statement: statement.to_string(),
            proved: true,
            relation,
            values,
            lhs,
            rhs,
            slack: rhs - lhs,
            verdict: Verdict::Holds,
            digest: String::new(),
            parts: Vec::new(),
        }
    }

    /// `values[0] <= values[1] <= ... <= values[last]`.
    pub fn chain(key: &str, statement: &str, values: Vec<f64>) -> Self {
        assert!(values.len() >= 2, "a chain needs two values");
        let mut r = Self::base(key, statement, Relation::Chain, values);
        let mut violated = false;
        let mut near = false;
        let mut min_step = f64::INFINITY;
        for w in r.values.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let scale = hi.abs().max(1.0);
            min_step = min_step.min(hi - lo);
            if lo > hi + CHAIN_TOL * scale {
                violated = true;
            } else if hi - lo < NEAR_TIGHT_TOL * scale {
                near = true;
            }
        }
        r.slack = min_step;
        r.verdict = if violated {
            Verdict::Violated
        } else if near {
            Verdict::NearTight
        } else {
            Verdict::Holds
        };
        r
    }

    pub fn equality(key: &str, statement: &str, lhs: f64, rhs: f64, rel_tol: f64) -> Self {
        let mut r = Self::base(
            key,
            statement,
            Relation::Equality { rel_tol },
            vec![lhs, rhs],
        );
        let scale = lhs.abs().max(rhs.abs());
        let ok = lhs == rhs || (lhs - rhs).abs() <= rel_tol * scale;
        r.slack = -(lhs - rhs).abs();
        r.verdict = if ok {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        r
    }

    /// A discrepancy measure checked against `tol`.
    pub fn within(key: &str, statement: &str, discrepancy: f64, tol: f64) -> Self {
        let mut r = Self::base(
            key,
            statement,
            Relation::Within { tol },
            vec![discrepancy, tol],
        );
        r.verdict = if discrepancy <= tol {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        r
    }

    /// Combines sub-checks; the verdict is the most severe part.
    pub fn bundle(key: &str, statement: &str, parts: Vec<CheckReport>) -> Self {
        let mut r = Self::base(key, statement, Relation::Bundle, Vec::new());
        let worst = parts
            .iter()
            .map(|p| &p.verdict)
            .max_by_key(|v| v.severity())
            .cloned();
        r.slack = parts
            .iter()
            .filter(|p| !p.verdict.is_not_applicable())
            .map(|p| p.slack)
            .fold(f64::INFINITY, f64::min);
        r.verdict = match worst {
            Some(v) => v,
            None => Verdict::NotApplicable("no parts".into()),
        };
        // lhs/rhs of the most severe part, tightest first.
        if let Some(p) = parts
            .iter()
            .filter(|p| !p.verdict.is_not_applicable())
            .max_by(|a, b| {
                a.verdict
                    .severity()
                    .cmp(&b.verdict.severity())
                    .then(b.slack.total_cmp(&a.slack))
            })
        {
            r.lhs = p.lhs;
            r.rhs = p.rhs;
        }
        r.parts = parts;
        r
    }

    pub fn not_applicable(key: &str, statement: &str, reason: impl Into<String>) -> Self {
        let mut r = Self::base(key, statement, Relation::Bundle, Vec::new());
        r.verdict = Verdict::NotApplicable(reason.into());
        r.slack = 0.0;
        r
    }

    pub fn unproved(mut self) -> Self {
        self.proved = false;
        self
    }

    pub fn with_digest<T: Serialize + ?Sized>(mut self, inputs: &T) -> Self {
        self.digest = digest(inputs);
        self
    }

    /// A proved statement that failed.
    pub fn is_failure(&self) -> bool {
        self.proved && self.verdict.is_violated()
    }

    /// One JSON object, no trailing newline.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

pub fn digest<T: Serialize + ?Sized>(inputs: &T) -> String {
    let bytes = serde_json::to_vec(inputs).expect("inputs serialize");
    hex::encode(&Sha256::digest(&bytes)[..8])
}
