//! Check records and rendering for the verification suites.

use serde::Serialize;

/// One verification outcome, keyed by suite, case label, and check detail.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Record {
    pub suite: String,
    pub case: String,
    pub status: String,
    pub detail: String,
}

/// Accumulates records and renders them in a canonical sorted order.
#[derive(Debug, Clone, Default)]
pub struct Report {
    records: Vec<Record>,
}

impl Report {
    pub fn new() -> Self {
        Report { records: Vec::new() }
    }

    pub fn push(&mut self, suite: &str, case: &str, ok: bool, detail: String) {
        self.records.push(Record {
            suite: suite.to_string(),
            case: case.to_string(),
            status: if ok { "pass" } else { "fail" }.to_string(),
            detail,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.status == "pass")
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Sorts records so the emitted stream is independent of execution order.
    pub fn finalize(&mut self) {
        self.records
            .sort_by(|a, b| (&a.suite, &a.case, &a.detail).cmp(&(&b.suite, &b.case, &b.detail)));
    }

    /// Line-delimited JSON, one record per line.
    pub fn render_json(&self) -> String {
        let mut out = String::new();
        for rec in &self.records {
            out.push_str(&serde_json::to_string(rec).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    /// Aligned plain-text table with a one-line summary.
    pub fn render_table(&self) -> String {
        let headers = ["suite", "case", "status", "detail"];
        let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
        for rec in &self.records {
            let cols = [&rec.suite, &rec.case, &rec.status, &rec.detail];
            for (w, c) in widths.iter_mut().zip(cols) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let row = |cols: [&str; 4], widths: &[usize]| -> String {
            let mut line = String::new();
            for (i, (c, w)) in cols.iter().zip(widths).enumerate() {
                if i > 0 {
                    line.push_str("  ");
                }
                line.push_str(c);
                if i + 1 < cols.len() {
                    line.extend(std::iter::repeat(' ').take(w - c.len()));
                }
            }
            line.push('\n');
            line
        };
        out.push_str(&row(headers, &widths));
        for rec in &self.records {
            out.push_str(&row([&rec.suite, &rec.case, &rec.status, &rec.detail], &widths));
        }
        let failures = self.records.iter().filter(|r| r.status == "fail").count();
        if failures == 0 {
            out.push_str(&format!("all {} checks passed\n", self.records.len()));
        } else {
            out.push_str(&format!("{} of {} checks failed\n", failures, self.records.len()));
        }
        out
    }
}
