//! Batch runs over a directory of `.cis` files.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{run_pipeline, RunConfig, RunReport, Status, SCHEMA_VERSION};

/// Width of the term-set size buckets: `1-5`, `6-10`, ...
pub const BUCKET_WIDTH: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    /// `"lo-hi"`, or `"unknown"` for files whose term set was never computed.
    pub range: String,
    pub total: usize,
    pub counts: BTreeMap<Status, usize>,
    /// Share of `total` per status, in percent.
    pub percent: BTreeMap<Status, f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub total: usize,
    pub by_status: BTreeMap<Status, usize>,
    pub buckets: Vec<Bucket>,
    /// `(decomposition size, term-set size)` of every compressed file.
    pub scatter: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub schema_version: u32,
    pub files: Vec<RunReport>,
    pub aggregate: Aggregate,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    file: &'a str,
    status: &'a str,
    termset_size: Option<usize>,
    decomposition_size: Option<usize>,
    canonical_size: Option<usize>,
    improved_size: Option<usize>,
    comq: Option<usize>,
    wall_time: f64,
}

fn bucket_of(size: Option<usize>) -> (usize, String) {
    match size {
        Some(n) => {
            let lo = n.saturating_sub(1) / BUCKET_WIDTH * BUCKET_WIDTH + 1;
            (lo, format!("{lo}-{}", lo + BUCKET_WIDTH - 1))
        }
        None => (usize::MAX, "unknown".into()),
    }
}

pub fn aggregate(files: &[RunReport]) -> Aggregate {
    let mut agg = Aggregate { total: files.len(), ..Aggregate::default() };
    let mut buckets: BTreeMap<usize, Bucket> = BTreeMap::new();
    for r in files {
        *agg.by_status.entry(r.status).or_default() += 1;
        let (lo, range) = bucket_of(r.termset_size);
        let b = buckets.entry(lo).or_insert_with(|| Bucket { range, total: 0, counts: BTreeMap::new(), percent: BTreeMap::new() });
        b.total += 1;
        *b.counts.entry(r.status).or_default() += 1;
        if let (Status::Compressed, Some(d), Some(t)) = (r.status, &r.decomposition, r.termset_size) {
            agg.scatter.push((d.size, t));
        }
    }
    for b in buckets.values_mut() {
        b.percent = b.counts.iter().map(|(s, c)| (*s, 100.0 * *c as f64 / b.total as f64)).collect();
    }
    agg.buckets = buckets.into_values().collect();
    agg.scatter.sort_unstable();
    agg
}

/// The `.cis` files of `dir`, sorted by path.
pub fn corpus_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "cis"))
        .collect();
    files.sort();
    Ok(files)
}

/// Runs every file with up to `workers` threads. Per-file artifacts go to
/// `<out>/<file stem>/`; `corpus.json` and `corpus.csv` to `<out>`.
pub fn run_corpus(cfg: &RunConfig, dir: &Path, workers: usize) -> io::Result<CorpusReport> {
    let files = corpus_files(dir)?;
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, RunReport)>> = Mutex::new(Vec::with_capacity(files.len()));
    std::thread::scope(|scope| {
        for _ in 0..workers.clamp(1, files.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = files.get(i) else { break };
                let mut file_cfg = cfg.clone();
                file_cfg.out_dir = cfg.out_dir.as_ref().map(|o| o.join(path.file_stem().unwrap_or_default()));
                let report = run_pipeline(&file_cfg, path);
                results.lock().expect("worker panicked").push((i, report));
            });
        }
    });
    let mut results = results.into_inner().expect("worker panicked");
    results.sort_by_key(|(i, _)| *i);
    let files: Vec<RunReport> = results.into_iter().map(|(_, r)| r).collect();
    let report = CorpusReport { schema_version: SCHEMA_VERSION, aggregate: aggregate(&files), files };
    if let Some(out) = &cfg.out_dir {
        fs::create_dir_all(out)?;
        fs::write(out.join("corpus.json"), serde_json::to_string_pretty(&report)?)?;
        fs::write(out.join("corpus.csv"), to_csv(&report.files)?)?;
    }
    Ok(report)
}

/// One row per file.
pub fn to_csv(files: &[RunReport]) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in files {
        w.serialize(CsvRow {
            file: r.file.as_deref().unwrap_or(""),
            status: r.status.as_str(),
            termset_size: r.termset_size,
            decomposition_size: r.decomposition.as_ref().map(|d| d.size),
            canonical_size: r.canonical_size,
            improved_size: r.improved_size,
            comq: r.comq,
            wall_time: r.wall_time,
        })?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
