//! Verification reports: per-check records with error bounds, deterministic
//! text and CSV renderings. Wall-clock time is kept out of the renderings so
//! fixed-seed runs are byte-identical; it goes to stderr instead.

use crate::instance::fmt17;

#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub name: String,
    pub lhs: f64,
    pub rhs: Option<f64>,
    pub error_bound: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn info(name: impl Into<String>, value: f64) -> Self {
        CheckRecord {
            name: name.into(),
            lhs: value,
            rhs: None,
            error_bound: 0.0,
            pass: true,
        }
    }

    pub fn compare(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        error_bound: f64,
        pass: bool,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            lhs,
            rhs: Some(rhs),
            error_bound,
            pass,
        }
    }

    pub fn value_with_error(name: impl Into<String>, value: f64, error_bound: f64) -> Self {
        CheckRecord {
            name: name.into(),
            lhs: value,
            rhs: None,
            error_bound,
            pass: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub command: String,
    pub digest: String,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    /// Free-form trailing sections (text rendering only), e.g. instance dumps.
    pub appendix: Vec<(String, String)>,
}

impl VerificationReport {
    pub fn new(command: impl Into<String>, digest: impl Into<String>, seed: u64) -> Self {
        VerificationReport {
            command: command.into(),
            digest: digest.into(),
            seed,
            records: Vec::new(),
            appendix: Vec::new(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn overall_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("digest: {}\n", self.digest));
        out.push_str(&format!("seed: {}\n", self.seed));
        out.push_str(&format!(
            "{:<34} {:>24} {:>24} {:>24} {:>5}\n",
            "check", "value", "reference", "error_bound", "pass"
        ));
        for r in &self.records {
            out.push_str(&format!(
                "{:<34} {:>24} {:>24} {:>24} {:>5}\n",
                r.name,
                fmt17(r.lhs),
                r.rhs.map(fmt17).unwrap_or_else(|| "-".into()),
                fmt17(r.error_bound),
                if r.pass { "yes" } else { "NO" }
            ));
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.overall_pass() { "PASS" } else { "FAIL" }
        ));
        for (title, body) in &self.appendix {
            out.push_str(&format!("\n# {title}\n{body}"));
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("command,digest,seed,check,value,reference,error_bound,pass\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                self.command,
                self.digest,
                self.seed,
                r.name,
                fmt17(r.lhs),
                r.rhs.map(fmt17).unwrap_or_default(),
                fmt17(r.error_bound),
                if r.pass { "yes" } else { "no" }
            ));
        }
        out.push_str(&format!(
            "{},{},{},overall,,,,{}\n",
            self.command,
            self.digest,
            self.seed,
            if self.overall_pass() { "yes" } else { "no" }
        ));
        out
    }
}

/// A plot-ready CSV artifact: header plus rows of 17-digit numbers.
#[derive(Debug, Clone)]
pub struct CsvArtifact {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvArtifact {
    pub fn new<S: Into<String>>(header: Vec<S>) -> Self {
        CsvArtifact {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Cell helper: numbers at full precision, counts as integers.
pub fn num_cell(x: f64) -> String {
    fmt17(x)
}
