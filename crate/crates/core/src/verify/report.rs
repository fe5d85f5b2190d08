use serde::Serialize;

use super::SuiteConfig;
use crate::poly_json::PolyDoc;

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

/// A failed check together with the input that triggered it, for replay.
#[derive(Clone, Debug, Serialize)]
pub struct FailureRecord {
    pub check: String,
    pub input: Option<PolyDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteEntry {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub part: Option<String>,
    pub m: usize,
    pub k: Option<usize>,
    pub cases: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub elapsed_ms: u64,
    pub status: Status,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failing: Vec<FailureRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub rng: String,
    pub config: SuiteConfig,
    pub summary: Summary,
    pub entries: Vec<SuiteEntry>,
}

impl Report {
    pub fn new(cfg: &SuiteConfig, entries: Vec<SuiteEntry>) -> Self {
        let count = |s: Status| entries.iter().filter(|e| e.status == s).count();
        Report {
            tool: "hsca".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            rng: "ChaCha8Rng::seed_from_u64".into(),
            config: cfg.clone(),
            summary: Summary { pass: count(Status::Pass), fail: count(Status::Fail), skip: count(Status::Skip) },
            entries,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// 0 when no entry failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// The report with all timings zeroed; equal configs and seeds give
    /// byte-identical canonical JSON.
    pub fn canonical(&self) -> Report {
        let mut r = self.clone();
        for e in &mut r.entries {
            e.elapsed_ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per entry, for terminals.
    pub fn summary_lines(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|e| {
                let name = match &e.part {
                    Some(p) => format!("{}/{}", e.suite, p),
                    None => e.suite.clone(),
                };
                let k = e.k.map_or("-".to_string(), |k| k.to_string());
                format!(
                    "{:<4} {:<26} m={} k={:<2} cases={:<6} failures={:<4} max_residual={:.3e} {}ms",
                    e.status.label(),
                    name,
                    e.m,
                    k,
                    e.cases,
                    e.failures,
                    e.max_residual,
                    e.elapsed_ms
                )
            })
            .collect()
    }
}
