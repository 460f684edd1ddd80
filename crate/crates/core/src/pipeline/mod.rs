//! The end-to-end driver: extract the term set, decompose it, compute and
//! improve a cut formula, and build the proof with one cut.

mod corpus;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::cutformula::{build_schematic_ehs, canonical_solution, check_solution, select_best, sf_improve, SfOptions, SfResult, SolutionCandidate, DEFAULT_SF_NODE_CAP};
use crate::decomposition::{build_delta_table, fold_delta_table_until, restrict_ci1, to_structure_decomposition, DecompositionError, DecompositionJson, TableOptions, DEFAULT_TERMSET_LIMIT};
use crate::evalidity::{EufOracle, ExternalOracle, Oracle};
use crate::herbrand::{encode_termset, herbrand_sequent};
use crate::parse::parse_input;
use crate::proofbuild::{build_proof_with_cut, check_proof_with, LKProof};

pub use corpus::{aggregate, corpus_files, run_corpus, to_csv, Aggregate, Bucket, CorpusReport, BUCKET_WIDTH};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Decompositions with a single grammar variable.
    Ci1,
    CiStar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleChoice {
    Internal,
    /// Shell command template for an SMT solver; see [`ExternalOracle`].
    External(String),
}

impl std::str::FromStr for OracleChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "internal" => Ok(OracleChoice::Internal),
            _ => match s.strip_prefix("cmd:") {
                Some(t) if !t.trim().is_empty() => Ok(OracleChoice::External(t.to_string())),
                _ => Err(format!("expected `internal` or `cmd:<template>`, got `{s}`")),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    pub oracle: OracleChoice,
    pub max_subset: Option<usize>,
    pub sf_node_cap: usize,
    pub timeout: Duration,
    /// Largest term set attempted.
    pub termset_limit: usize,
    /// Artifact directory; nothing is written when unset.
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::CiStar,
            oracle: OracleChoice::Internal,
            max_subset: None,
            sf_node_cap: DEFAULT_SF_NODE_CAP,
            timeout: DEFAULT_TIMEOUT,
            termset_limit: DEFAULT_TERMSET_LIMIT,
            out_dir: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.timeout.is_zero() {
            return Err("timeout must be positive".into());
        }
        if self.sf_node_cap == 0 {
            return Err("the improvement node cap must be positive".into());
        }
        Ok(())
    }

    pub fn make_oracle(&self) -> Box<dyn Oracle> {
        match &self.oracle {
            OracleChoice::Internal => Box::new(EufOracle::default()),
            OracleChoice::External(t) => Box::new(ExternalOracle::new(t.clone())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Compressed,
    Uncompressible,
    TooLarge,
    Timeout,
    Error,
}

impl Status {
    pub const ALL: [Status; 5] = [Status::Compressed, Status::Uncompressible, Status::TooLarge, Status::Timeout, Status::Error];

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Compressed => "compressed",
            Status::Uncompressible => "uncompressible",
            Status::TooLarge => "too_large",
            Status::Timeout => "timeout",
            Status::Error => "error",
        }
    }

    /// 0 for a completed analysis, 2 for bad input, 3 when a bound was hit.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Compressed | Status::Uncompressible => 0,
            Status::Error => 2,
            Status::TooLarge | Status::Timeout => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    #[serde(default)]
    pub file: Option<String>,
    pub mode: Mode,
    pub status: Status,
    pub termset_size: Option<usize>,
    pub decomposition: Option<DecompositionJson>,
    pub canonical_size: Option<usize>,
    pub improved_size: Option<usize>,
    pub comq: Option<usize>,
    pub proof_checked: bool,
    /// Subset bound of the table construction; search was exhaustive when unset.
    pub max_subset: Option<usize>,
    pub sf_nodes: Option<usize>,
    pub sf_truncated: bool,
    /// Seconds.
    pub wall_time: f64,
    pub message: Option<String>,
}

impl RunReport {
    fn new(mode: Mode, max_subset: Option<usize>) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            file: None,
            mode,
            status: Status::Error,
            termset_size: None,
            decomposition: None,
            canonical_size: None,
            improved_size: None,
            comq: None,
            proof_checked: false,
            max_subset,
            sf_nodes: None,
            sf_truncated: false,
            wall_time: 0.0,
            message: None,
        }
    }
}

/// Pretty-printed JSON with the field names of [`RunReport`].
pub fn emit_stats(r: &RunReport) -> String {
    serde_json::to_string_pretty(r).expect("reports serialize")
}

/// Everything a successful run produces besides its report.
#[derive(Clone, Debug, Default)]
pub struct Artifacts {
    pub decomposition: Option<DecompositionJson>,
    pub solution: Option<SolutionCandidate>,
    pub canonical: Option<SolutionCandidate>,
    pub sf: Option<SfResult>,
    pub proof: Option<LKProof>,
}

pub fn run_pipeline(cfg: &RunConfig, input: &Path) -> RunReport {
    let start = Instant::now();
    let mut report = match fs::read_to_string(input) {
        Ok(text) => run_source(cfg, &text).0,
        Err(e) => {
            let mut r = RunReport::new(cfg.mode, cfg.max_subset);
            r.message = Some(format!("cannot read {}: {e}", input.display()));
            r
        }
    };
    report.file = Some(input.display().to_string());
    report.wall_time = start.elapsed().as_secs_f64();
    if let Some(dir) = &cfg.out_dir {
        if let Err(e) = fs::create_dir_all(dir).and_then(|_| fs::write(dir.join("report.json"), emit_stats(&report))) {
            report.message.get_or_insert_with(|| format!("cannot write artifacts: {e}"));
        }
    }
    report
}

/// Runs the pipeline on `.cis` text. Artifacts other than `report.json` go
/// to `cfg.out_dir`.
pub fn run_source(cfg: &RunConfig, text: &str) -> (RunReport, Artifacts) {
    let start = Instant::now();
    let (mut r, a) = run_text(cfg, text, start);
    r.wall_time = start.elapsed().as_secs_f64();
    (r, a)
}

fn run_text(cfg: &RunConfig, text: &str, start: Instant) -> (RunReport, Artifacts) {
    let mut r = RunReport::new(cfg.mode, cfg.max_subset);
    let mut art = Artifacts::default();
    if let Err(e) = cfg.validate() {
        r.message = Some(e);
        return (r, art);
    }
    match stages(cfg, text, start, &mut r, &mut art) {
        Ok(status) => r.status = status,
        Err((status, msg)) => {
            r.status = status;
            r.message = Some(msg);
        }
    }
    if let Some(dir) = &cfg.out_dir {
        if let Err(e) = write_artifacts(dir, &art) {
            r.message.get_or_insert_with(|| format!("cannot write artifacts: {e}"));
        }
    }
    (r, art)
}

type StageResult = Result<Status, (Status, String)>;

fn stages(cfg: &RunConfig, text: &str, start: Instant, r: &mut RunReport, art: &mut Artifacts) -> StageResult {
    let deadline = start + cfg.timeout;
    let timed_out = || Instant::now() > deadline;
    let oracle = cfg.make_oracle();
    let oracle = oracle.as_ref();

    let (seq, h) = parse_input(text).map_err(|e| (Status::Error, e.to_string()))?;
    let t = encode_termset(&h);
    r.termset_size = Some(t.len());
    let hs = herbrand_sequent(&seq, &h);
    if !oracle.check(&hs).is_valid() {
        return Err((Status::Error, "the Herbrand sequent is not valid".into()));
    }
    if h.is_trivial() {
        return Ok(Status::Uncompressible);
    }
    if t.len() > cfg.termset_limit {
        return Err((Status::TooLarge, format!("term set has {} elements, limit is {}", t.len(), cfg.termset_limit)));
    }

    let opts = TableOptions { max_subset: cfg.max_subset, limit: cfg.termset_limit, deadline: Some(deadline) };
    let as_status = |e: DecompositionError| match e {
        DecompositionError::Timeout => (Status::Timeout, "timed out building decompositions".to_string()),
        e @ DecompositionError::TooLarge { .. } => (Status::TooLarge, e.to_string()),
    };
    let mut dt = build_delta_table(&t, &opts).map_err(as_status)?;
    if cfg.mode == Mode::Ci1 {
        dt = restrict_ci1(&dt);
    }
    let ds = fold_delta_table_until(&dt, &t, Some(deadline)).map_err(as_status)?;
    // Only strictly smaller decompositions compress.
    let Some(d) = ds.into_iter().find(|d| d.size() < t.len()) else {
        return Ok(Status::Uncompressible);
    };
    let sd = to_structure_decomposition(&d, seq.q()).map_err(|e| (Status::Error, e.to_string()))?;
    art.decomposition = Some(sd.to_json());
    r.decomposition = art.decomposition.clone();
    if timed_out() {
        return Err((Status::Timeout, "timed out after decomposition".into()));
    }

    let e = build_schematic_ehs(&seq, &sd).map_err(|e| (Status::Error, e.to_string()))?;
    let canonical = canonical_solution(&e).map_err(|e| (Status::Error, e.to_string()))?;
    if !check_solution(&e, &canonical.formula, oracle).is_valid() {
        return Err((Status::Error, "the canonical solution was not accepted by the oracle".into()));
    }
    r.canonical_size = Some(canonical.formula.size());
    art.canonical = Some(canonical.clone());

    let sf_opts = SfOptions { node_cap: cfg.sf_node_cap, equality: e.has_equality() && oracle.equality(), deadline: Some(deadline) };
    let sf = sf_improve(&e, &canonical, oracle, &sf_opts);
    r.sf_nodes = Some(sf.nodes);
    r.sf_truncated = sf.truncated;
    let mut pool = vec![canonical.clone()];
    pool.extend(sf.candidates.iter().cloned());
    let best = select_best(&pool).cloned().unwrap_or(canonical.clone());
    art.sf = Some(sf);

    // SF candidates pass the right-premise guard; the canonical one always builds.
    let (used, proof) = match build_proof_with_cut(&e, &best, oracle) {
        Ok(p) => (best, p),
        Err(_) => {
            let p = build_proof_with_cut(&e, &canonical, oracle).map_err(|e| (Status::Error, e.to_string()))?;
            (canonical, p)
        }
    };
    r.improved_size = Some(used.formula.size());
    art.solution = Some(used);
    if let Err(f) = check_proof_with(&proof, oracle) {
        art.proof = Some(proof);
        return Err((Status::Error, format!("constructed proof failed to check {f}")));
    }
    r.proof_checked = true;
    r.comq = Some(proof.metrics().comq);
    art.proof = Some(proof);
    Ok(Status::Compressed)
}

fn write_artifacts(dir: &Path, art: &Artifacts) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    if let Some(d) = &art.decomposition {
        fs::write(dir.join("decomposition.json"), serde_json::to_string_pretty(d)?)?;
    }
    if let Some(s) = &art.solution {
        fs::write(dir.join("solution.txt"), format!("{}\n", s.formula))?;
    }
    if let Some(sf) = &art.sf {
        fs::write(dir.join("sf_trace.json"), serde_json::to_string_pretty(&sf.trace)?)?;
    }
    if let Some(p) = &art.proof {
        fs::write(dir.join("proof.json"), p.to_json())?;
        fs::write(dir.join("proof.txt"), p.to_string())?;
    }
    Ok(())
}
