//! Verification suites over `(m, k)` grids, with JSON reports.

mod report;
pub mod sampling;
mod suites;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{HscaError, Result};

pub use report::{FailureRecord, Report, Status, SuiteEntry};
pub use sampling::random_h_field;

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Clifford,
    Almansi,
    Theorem1,
    Factorization,
    Maxwell,
    Stokes,
    Kernels,
    Fundamental,
    BorelProbe,
}

impl Suite {
    /// Canonical order, as run by `all`.
    pub const ALL: [Suite; 9] = [
        Suite::Clifford,
        Suite::Almansi,
        Suite::Theorem1,
        Suite::Factorization,
        Suite::Maxwell,
        Suite::Stokes,
        Suite::Kernels,
        Suite::Fundamental,
        Suite::BorelProbe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Clifford => "clifford",
            Suite::Almansi => "almansi",
            Suite::Theorem1 => "theorem1",
            Suite::Factorization => "factorization",
            Suite::Maxwell => "maxwell",
            Suite::Stokes => "stokes",
            Suite::Kernels => "kernels",
            Suite::Fundamental => "fundamental",
            Suite::BorelProbe => "borel_probe",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_list(name: &str) -> Result<Vec<Suite>> {
        if name == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![name.parse()?])
    }
}

impl FromStr for Suite {
    type Err = HscaError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| HscaError::UnknownSuite(s.to_string()))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    pub m_list: Vec<usize>,
    pub k_list: Vec<usize>,
    pub xdeg: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    #[serde(skip)]
    pub report_path: Option<PathBuf>,
    /// Worker threads; `0` uses the available parallelism.
    #[serde(skip)]
    pub workers: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suites: Suite::ALL.to_vec(),
            m_list: vec![3, 4, 5],
            k_list: vec![1, 2],
            xdeg: 4,
            samples: 100,
            seed: 42,
            tol: 1e-8,
            report_path: None,
            workers: 0,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HscaError::Parse(msg));
        if self.suites.is_empty() {
            return bad("no suites selected".into());
        }
        if self.m_list.is_empty() || self.k_list.is_empty() {
            return bad("m and k lists must be nonempty".into());
        }
        for &m in &self.m_list {
            crate::clifford::check_dim(m)?;
        }
        if let Some(&k) = self.k_list.iter().find(|&&k| k > 8) {
            return bad(format!("k = {k} is above the supported maximum 8"));
        }
        if self.samples == 0 {
            return bad("samples must be positive".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad("tol must be a positive number".into());
        }
        Ok(())
    }
}

/// One schedulable unit of work.
#[derive(Copy, Clone, Debug)]
pub(crate) struct Job {
    pub suite: Suite,
    pub m: usize,
    pub k: Option<usize>,
}

impl Job {
    /// Seed for this job's generator, independent of scheduling order.
    pub fn seed(&self, base: u64) -> u64 {
        let idx = Suite::ALL.iter().position(|s| *s == self.suite).unwrap_or(0) as u64;
        let k = self.k.map_or(0xff, |k| k as u64);
        base ^ (idx << 48 | (self.m as u64) << 32 | k << 16)
    }
}

fn plan(cfg: &SuiteConfig) -> Vec<Job> {
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    let mut ms = cfg.m_list.clone();
    ms.sort_unstable();
    ms.dedup();
    let mut ks = cfg.k_list.clone();
    ks.sort_unstable();
    ks.dedup();
    let mut jobs = Vec::new();
    for suite in suites {
        for &m in &ms {
            match suite {
                Suite::Clifford | Suite::Maxwell => jobs.push(Job { suite, m, k: None }),
                Suite::BorelProbe => {
                    let mut probe_ks = ks.clone();
                    if !probe_ks.contains(&0) {
                        probe_ks.insert(0, 0);
                    }
                    jobs.extend(probe_ks.into_iter().map(|k| Job { suite, m, k: Some(k) }));
                }
                _ => jobs.extend(ks.iter().map(|&k| Job { suite, m, k: Some(k) })),
            }
        }
    }
    jobs
}

/// Runs the configured suites on a worker pool and assembles the report in
/// canonical `(suite, m, k)` order.
pub fn run_suites(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let jobs = plan(cfg);
    let workers = match cfg.workers {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        n => n,
    }
    .min(jobs.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Vec<SuiteEntry>>>> = Mutex::new(vec![None; jobs.len()]);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let entries = suites::run_job(job, cfg);
                slots.lock().expect("result slots poisoned")[i] = Some(entries);
            });
        }
    });
    let entries = slots.into_inner().expect("result slots poisoned").into_iter().flatten().flatten().collect();
    Ok(Report::new(cfg, entries))
}

/// Runs one named suite (or `all`) with otherwise default settings from `cfg`.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Report> {
    let cfg = SuiteConfig { suites: Suite::parse_list(name)?, ..cfg.clone() };
    run_suites(&cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(Suite::parse_list("all").unwrap().len(), 9);
        assert!(matches!("bogus".parse::<Suite>(), Err(HscaError::UnknownSuite(_))));
    }

    #[test]
    fn job_seeds_are_distinct() {
        let cfg = SuiteConfig::default();
        let jobs = plan(&cfg);
        let mut seeds: Vec<u64> = jobs.iter().map(|j| j.seed(cfg.seed)).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), jobs.len());
    }
}
