//! Corpus files and the parallel corpus runner.
//!
//! A corpus file has one `<spec> ; <primes|auto>` per line, primes separated
//! by commas or spaces; `#` starts a comment.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use weightlab::arith::numtheory::prime_divisors;
use weightlab::chains::AwcReport;
use weightlab::error::{Error, Result};
use weightlab::k0::FawcReport;
use weightlab::perm::PermGroup;

use crate::run::{functorial_group, parse_group, verify_awc_group, RunConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Primes {
    Auto,
    List(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusLine {
    pub line: usize,
    pub spec: String,
    pub primes: Primes,
}

pub fn parse_corpus(text: &str) -> std::result::Result<Vec<CorpusLine>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (spec, primes) = match line.rsplit_once(';') {
            Some((s, p)) => (s.trim(), p.trim()),
            None => (line, "auto"),
        };
        if spec.is_empty() {
            return Err(format!("line {}: missing group spec", i + 1));
        }
        let primes = if primes.eq_ignore_ascii_case("auto") || primes.is_empty() {
            Primes::Auto
        } else {
            let list = primes
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| format!("line {}: bad prime {t:?}", i + 1))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Primes::List(list)
        };
        out.push(CorpusLine {
            line: i + 1,
            spec: spec.to_string(),
            primes,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    /// Awc holds but some functorial labels could not be evaluated.
    Unsupported,
    Fail,
    CapExceeded,
    Budget,
    InputError,
    Error,
}

impl Status {
    fn of_error(e: &Error) -> Status {
        match e {
            Error::CapExceeded { .. } => Status::CapExceeded,
            Error::BudgetExceeded { .. } => Status::Budget,
            Error::Syntax(_) | Error::InvalidArgument(_) => Status::InputError,
            _ => Status::Error,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryResult {
    pub spec: String,
    pub line: usize,
    pub p: Option<u64>,
    pub order: Option<usize>,
    pub status: Status,
    pub awc: Vec<AwcReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fawc: Option<Vec<FawcReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusResult {
    pub entries: Vec<EntryResult>,
    pub summary: BTreeMap<Status, usize>,
    pub failures: Vec<String>,
    pub millis: u128,
}

impl CorpusResult {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.status == Status::Pass)
    }

    pub fn count(&self, s: Status) -> usize {
        self.summary.get(&s).copied().unwrap_or(0)
    }
}

struct Job {
    line: usize,
    spec: String,
    group: std::result::Result<Arc<PermGroup>, Error>,
    p: Option<u64>,
}

fn expand(lines: &[CorpusLine], cfg: &RunConfig) -> Vec<Job> {
    let parsed: Vec<_> = lines
        .par_iter()
        .map(|l| parse_group(&l.spec, cfg).map(Arc::new))
        .collect();
    let mut jobs = Vec::new();
    for (l, g) in lines.iter().zip(parsed) {
        let primes = match (&l.primes, &g) {
            (Primes::List(ps), _) => ps.clone(),
            (Primes::Auto, Ok(g)) => prime_divisors(g.order() as u64),
            (Primes::Auto, Err(_)) => vec![],
        };
        if primes.is_empty() || g.is_err() {
            jobs.push(Job {
                line: l.line,
                spec: l.spec.clone(),
                group: g,
                p: primes.first().copied(),
            });
            continue;
        }
        for p in primes {
            jobs.push(Job {
                line: l.line,
                spec: l.spec.clone(),
                group: g.clone(),
                p: Some(p),
            });
        }
    }
    jobs
}

fn run_job(job: &Job, cfg: &RunConfig, with_functorial: bool) -> EntryResult {
    let start = Instant::now();
    let mut res = EntryResult {
        spec: job.spec.clone(),
        line: job.line,
        p: job.p,
        order: job.group.as_ref().ok().map(|g| g.order()),
        status: Status::Pass,
        awc: vec![],
        fawc: None,
        message: None,
        millis: 0,
    };
    let outcome = (|| -> Result<()> {
        let g = job.group.clone()?;
        let Some(p) = job.p else {
            // the trivial group has no prime divisors: nothing to check
            return Ok(());
        };
        res.awc = verify_awc_group(&job.spec, g.clone(), p, cfg)?;
        if res.awc.iter().any(|r| !r.passed()) {
            res.status = Status::Fail;
        }
        if with_functorial {
            let f = functorial_group(&job.spec, g, p, cfg)?;
            if f.iter().any(|r| !r.consistent()) {
                res.status = Status::Fail;
            } else if res.status == Status::Pass && f.iter().any(|r| !r.unsupported.is_empty()) {
                res.status = Status::Unsupported;
            }
            res.fawc = Some(f);
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        res.status = Status::of_error(&e);
        res.message = Some(e.to_string());
    }
    res.millis = start.elapsed().as_millis();
    res
}

/// Runs every entry in parallel; an error in one entry is recorded against
/// it and does not affect the others.
pub fn run_corpus(lines: &[CorpusLine], cfg: &RunConfig, with_functorial: bool) -> CorpusResult {
    let start = Instant::now();
    let jobs = expand(lines, cfg);
    let entries: Vec<EntryResult> = jobs
        .par_iter()
        .map(|j| run_job(j, cfg, with_functorial))
        .collect();
    let mut summary = BTreeMap::new();
    let mut failures = Vec::new();
    for e in &entries {
        *summary.entry(e.status).or_insert(0) += 1;
        if e.status != Status::Pass {
            let p = e.p.map_or("-".to_string(), |p| p.to_string());
            failures.push(format!(
                "{} (p = {p}): {:?}{}",
                e.spec,
                e.status,
                e.message
                    .as_deref()
                    .map_or(String::new(), |m| format!(": {m}"))
            ));
        }
    }
    CorpusResult {
        entries,
        summary,
        failures,
        millis: start.elapsed().as_millis(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines_and_comments() {
        let text = "# header\nS(3) ; 2, 3\n\nC(1) ; 2  # trailing\nA(4);auto\nD(8)\n";
        let l = parse_corpus(text).unwrap();
        assert_eq!(l.len(), 4);
        assert_eq!(l[0].primes, Primes::List(vec![2, 3]));
        assert_eq!(l[1].spec, "C(1)");
        assert_eq!(l[2].primes, Primes::Auto);
        assert_eq!(l[3].primes, Primes::Auto);
        assert!(parse_corpus("S(3) ; two").is_err());
        assert!(parse_corpus("").unwrap().is_empty());
    }

    #[test]
    fn isolates_bad_entries() {
        let cfg = RunConfig {
            cap: 100,
            ..Default::default()
        };
        let lines = parse_corpus("S(3) ; 3\nS(5) ; 2\nS(3 ; 2\nC(6) ; 4\nC(1)\n").unwrap();
        let r = run_corpus(&lines, &cfg, false);
        let st: Vec<Status> = r.entries.iter().map(|e| e.status).collect();
        assert_eq!(
            st,
            vec![
                Status::Pass,
                Status::CapExceeded,
                Status::InputError,
                Status::InputError,
                Status::Pass
            ]
        );
        assert_eq!(r.summary.values().sum::<usize>(), r.entries.len());
    }
}
