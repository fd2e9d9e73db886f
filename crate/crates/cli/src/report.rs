//! Deterministic structured-text verification reports.
//!
//! One line per check: `check=<name> threshold=<t> observed=<v> status=<s>`
//! with `status` one of `pass`, `fail`, or `info` (observed-only, never
//! counted as a failure). Numbers use the shortest round-trip decimal form,
//! so identical runs render byte-identical reports.

/// One measured check.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub threshold: f64,
    pub observed: f64,
    /// `false` marks an informational line that is reported but not gated.
    pub asserted: bool,
}

impl CheckLine {
    pub fn passed(&self) -> bool {
        !self.asserted || self.observed <= self.threshold
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub suite: String,
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn new(suite: &str) -> Self {
        Report {
            suite: suite.to_string(),
            lines: Vec::new(),
        }
    }

    pub fn check(&mut self, name: String, threshold: f64, observed: f64) {
        self.lines.push(CheckLine {
            name,
            threshold,
            observed,
            asserted: true,
        });
    }

    pub fn info(&mut self, name: String, observed: f64) {
        self.lines.push(CheckLine {
            name,
            threshold: f64::NAN,
            observed,
            asserted: false,
        });
    }

    pub fn merge(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|l| !l.passed()).count()
    }

    pub fn all_pass(&self) -> bool {
        self.failures() == 0
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("suite={}\n", self.suite));
        for l in &self.lines {
            if l.asserted {
                let status = if l.passed() { "pass" } else { "fail" };
                out.push_str(&format!(
                    "check={} threshold={} observed={} status={}\n",
                    l.name, l.threshold, l.observed, status
                ));
            } else {
                out.push_str(&format!(
                    "check={} observed={} status=info\n",
                    l.name, l.observed
                ));
            }
        }
        out.push_str(&format!(
            "result={} checks={} failures={}\n",
            if self.all_pass() { "pass" } else { "fail" },
            self.lines.len(),
            self.failures()
        ));
        out
    }
}
