use std::fmt::Write as _;

use serde::Serialize;
use trigamma_cm::cm::Verdict;

use crate::output::num;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Inconclusive => "inconclusive",
            Status::Fail => "fail",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Inconclusive => Status::Inconclusive,
            Verdict::Fail => Status::Fail,
        }
    }
}

/// One checked claim. `margin` is positive when the claim holds with room to spare.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimRecord {
    pub id: String,
    pub anchor: &'static str,
    pub status: Status,
    pub margin: f64,
    pub grid: String,
    pub detail: String,
}

/// Exploratory data reported alongside a suite; never affects the exit code.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observation {
    pub id: String,
    pub anchor: &'static str,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub claims_checked: usize,
    pub passes: usize,
    pub fails: usize,
    pub inconclusives: usize,
    pub claims: Vec<ClaimRecord>,
    pub observations: Vec<Observation>,
}

impl SuiteResult {
    pub fn new(suite: &str, claims: Vec<ClaimRecord>, observations: Vec<Observation>) -> Self {
        let count = |s: Status| claims.iter().filter(|c| c.status == s).count();
        Self {
            suite: suite.to_string(),
            claims_checked: claims.len(),
            passes: count(Status::Pass),
            fails: count(Status::Fail),
            inconclusives: count(Status::Inconclusive),
            claims,
            observations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub claims_checked: usize,
    pub passes: usize,
    pub fails: usize,
    pub inconclusives: usize,
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn new(suites: Vec<SuiteResult>) -> Self {
        Self {
            schema: 1,
            claims_checked: suites.iter().map(|s| s.claims_checked).sum(),
            passes: suites.iter().map(|s| s.passes).sum(),
            fails: suites.iter().map(|s| s.fails).sum(),
            inconclusives: suites.iter().map(|s| s.inconclusives).sum(),
            suites,
        }
    }

    /// 0 all pass, 1 any failure, 3 unresolved claims but no failure.
    pub fn exit_code(&self) -> u8 {
        if self.fails > 0 {
            1
        } else if self.inconclusives > 0 {
            3
        } else {
            0
        }
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let _ = writeln!(
                out,
                "{}: {} claims, {} pass, {} fail, {} inconclusive",
                s.suite, s.claims_checked, s.passes, s.fails, s.inconclusives
            );
            for c in &s.claims {
                let _ = writeln!(
                    out,
                    "  {:<12} {}  margin {}  {}",
                    c.status.label(),
                    c.id,
                    num(c.margin),
                    c.detail
                );
            }
            for o in &s.observations {
                let _ = writeln!(out, "  {:<12} {}  {}", "observed", o.id, o.summary);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn claim(status: Status) -> ClaimRecord {
        ClaimRecord {
            id: "c".into(),
            anchor: "a",
            status,
            margin: 0.0,
            grid: String::new(),
            detail: String::new(),
        }
    }

    #[test]
    fn counts_and_exit_codes() {
        let s = SuiteResult::new("x", vec![claim(Status::Pass), claim(Status::Inconclusive)], vec![]);
        assert_eq!(s.passes + s.fails + s.inconclusives, s.claims_checked);
        assert_eq!(Report::new(vec![s.clone()]).exit_code(), 3);
        let f = SuiteResult::new("y", vec![claim(Status::Fail)], vec![]);
        assert_eq!(Report::new(vec![s, f]).exit_code(), 1);
        let ok = SuiteResult::new("z", vec![claim(Status::Pass)], vec![]);
        assert_eq!(Report::new(vec![ok]).exit_code(), 0);
    }
}
