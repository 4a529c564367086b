//! Structured outcome of a single verification check.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One check: a computed `value` compared with a `bound` up to `slack`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub n: usize,
    pub beta: f64,
    pub sigma: f64,
    pub weight: String,
    pub value: f64,
    pub bound: f64,
    pub slack: f64,
    pub status: Status,
    pub note: String,
}

impl CheckRecord {
    pub fn new(check_id: impl Into<String>, n: usize, beta: f64, sigma: f64) -> Self {
        Self {
            check_id: check_id.into(),
            n,
            beta,
            sigma,
            weight: String::new(),
            value: f64::NAN,
            bound: f64::NAN,
            slack: 0.0,
            status: Status::Skip,
            note: String::new(),
        }
    }

    pub fn weight(mut self, w: impl Into<String>) -> Self {
        self.weight = w.into();
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Records `value ≤ bound + slack`.
    pub fn upper(mut self, value: f64, bound: f64, slack: f64) -> Self {
        self.value = value;
        self.bound = bound;
        self.slack = slack;
        self.status = if value <= bound + slack { Status::Pass } else { Status::Fail };
        self
    }

    /// Records `|value − bound| ≤ slack`.
    pub fn close(mut self, value: f64, bound: f64, slack: f64) -> Self {
        self.value = value;
        self.bound = bound;
        self.slack = slack;
        self.status = if (value - bound).abs() <= slack { Status::Pass } else { Status::Fail };
        self
    }

    /// Records a boolean outcome.
    pub fn flag(mut self, ok: bool) -> Self {
        self.value = if ok { 1.0 } else { 0.0 };
        self.bound = 1.0;
        self.status = if ok { Status::Pass } else { Status::Fail };
        self
    }

    pub fn fail(mut self, note: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.note = note.into();
        self
    }

    pub fn skip(mut self, note: impl Into<String>) -> Self {
        self.status = Status::Skip;
        self.note = note.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons() {
        assert!(CheckRecord::new("a", 1, 1.0, 1.0).upper(1.0, 0.9, 0.11).passed());
        assert!(CheckRecord::new("a", 1, 1.0, 1.0).upper(1.0, 0.9, 0.05).failed());
        assert!(CheckRecord::new("a", 1, 1.0, 1.0).close(1.0, 1.1, 0.2).passed());
        assert!(CheckRecord::new("a", 1, 1.0, 1.0).close(f64::NAN, 1.1, 0.2).failed());
        assert_eq!(CheckRecord::new("a", 1, 1.0, 1.0).status, Status::Skip);
    }
}
