use std::fmt::Write as _;
use std::time::Duration;

use rayon::prelude::*;

use super::corpus::{CorpusEntry, Expect};
use crate::cdp::{decide, decide_via_s5, Budget, Verdict, VerdictKind};

/// Result of one check of one corpus entry.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub id: String,
    pub system: String,
    pub expect: Expect,
    pub expected_size: Option<usize>,
    pub verdict: Verdict,
}

impl BenchRow {
    pub fn kind(&self) -> VerdictKind {
        self.verdict.kind()
    }

    pub fn size(&self) -> Option<usize> {
        self.verdict.model_size()
    }

    pub fn elapsed(&self) -> Duration {
        self.verdict.elapsed
    }

    /// The verdict matches, and so does the countermodel size when one is
    /// expected.
    pub fn passed(&self) -> bool {
        let kind = match self.expect {
            Expect::Valid => VerdictKind::Valid,
            Expect::Invalid => VerdictKind::Invalid,
        };
        self.kind() == kind && self.expected_size.is_none_or(|n| self.size() == Some(n))
    }
}

/// Decides every check of every entry, in parallel when `jobs > 1`. Rows
/// come back in corpus order whatever the scheduling.
pub fn run_bench(entries: &[CorpusEntry], budget: &Budget, jobs: usize) -> Vec<BenchRow> {
    let tasks: Vec<(&CorpusEntry, usize)> =
        entries.iter().flat_map(|e| (0..e.checks.len()).map(move |i| (e, i))).collect();
    let one = |&(e, i): &(&CorpusEntry, usize)| {
        let check = &e.checks[i];
        let verdict = if check.via_s5 {
            decide_via_s5(&e.formula, budget)
        } else {
            decide(&e.formula, &check.system, budget)
        };
        let verdict = verdict.expect("corpus formulas are checked at load time");
        BenchRow {
            id: e.id.clone(),
            system: check.label(),
            expect: check.expect,
            expected_size: check.size,
            verdict,
        }
    };
    if jobs <= 1 {
        return tasks.iter().map(one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    pool.install(|| tasks.par_iter().map(one).collect())
}

fn opt(n: Option<usize>) -> String {
    n.map_or_else(|| "-".to_string(), |n| n.to_string())
}

/// Aligned table: id, system, expected and found verdicts, expected and
/// found countermodel sizes, time and status.
pub fn render_table(rows: &[BenchRow]) -> String {
    let header = ["id", "system", "expect", "verdict", "exp.size", "size", "time", "status"];
    let cells: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.id.clone(),
                r.system.clone(),
                r.expect.to_string(),
                r.kind().to_string(),
                opt(r.expected_size),
                opt(r.size()),
                format!("{:.3}s", r.elapsed().as_secs_f64()),
                if r.passed() { "ok" } else { "MISMATCH" }.to_string(),
            ]
        })
        .collect();
    let mut width = header.map(str::len);
    for row in &cells {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, row: &[&str]| {
        let padded: Vec<String> = row.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
        writeln!(out, "{}", padded.join("  ").trim_end()).ok();
    };
    line(&mut out, &header);
    line(&mut out, &width.map(|w| "-".repeat(w)).iter().map(String::as_str).collect::<Vec<_>>());
    for row in &cells {
        line(&mut out, &row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}

/// One `key=value` line per row for scripts.
pub fn render_records(rows: &[BenchRow]) -> String {
    rows.iter()
        .map(|r| {
            format!(
                "result id={} system={} expect={} verdict={} expected_size={} size={} ms={} status={}\n",
                r.id,
                r.system.replace(' ', ""),
                r.expect,
                r.kind(),
                opt(r.expected_size),
                opt(r.size()),
                r.elapsed().as_millis(),
                if r.passed() { "ok" } else { "mismatch" }
            )
        })
        .collect()
}

/// Summary of countermodel sizes among invalid verdicts, e.g.
/// `12 valid, 9 invalid (sizes: 1x3 2x5 3x1), 0 unknown`.
pub fn render_summary(rows: &[BenchRow]) -> String {
    let count = |k: VerdictKind| rows.iter().filter(|r| r.kind() == k).count();
    let mut sizes = std::collections::BTreeMap::new();
    for n in rows.iter().filter_map(BenchRow::size) {
        *sizes.entry(n).or_insert(0) += 1;
    }
    let hist: Vec<String> = sizes.iter().map(|(n, c)| format!("{n}x{c}")).collect();
    format!(
        "{} valid, {} invalid (sizes: {}), {} unknown; {}/{} as expected\n",
        count(VerdictKind::Valid),
        count(VerdictKind::Invalid),
        hist.join(" "),
        count(VerdictKind::Unknown),
        rows.iter().filter(|r| r.passed()).count(),
        rows.len()
    )
}
