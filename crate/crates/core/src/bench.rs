//! Benchmark runner: simulator grids, the LLM recall harness, and report
//! emission.
//!
//! The simulator compares two arms per (dim, pairs, sigma) cell:
//! hypertoken-addressed storage (2-token bifix-free codewords over
//! quasi-orthogonal embeddings) against a baseline of single content
//! tokens whose embeddings carry induced pairwise coherence 0.5. The
//! baseline isolates what the codebook construction buys.
//!
//! Offline runs are a pure function of the config (including the optional
//! pinned timestamp): same config, same bytes.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagnostics::{channel_metrics, condition_numbers, estimate_rip_delta};
use crate::error::{Error as CoreError, Result};
use crate::latent::EmbeddingTable;
use crate::linalg::Matrix;
use crate::promptc::PromptMode;
use crate::seeding::{child_seed, tagged_seed};
use crate::store::{self, decode_all, pair_vocabulary, store as store_pairs, MemoryPair};

/// Pairwise coherence induced on the baseline arm's embeddings.
pub const BASELINE_COHERENCE: f64 = 0.5;

/// Chat-completion endpoint settings. The API key is read from the
/// `HDRAM_API_KEY` environment variable by the transport, never stored here.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EndpointConfig {
    pub base_url: String,
    pub model_name: String,
    pub temperature: f64,
    pub max_retries: u32,
    /// Base backoff between retries; doubles per attempt.
    pub backoff_ms: u64,
    pub max_tokens: u32,
    /// Concurrent in-flight requests.
    pub concurrency: usize,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            base_url: String::new(),
            model_name: String::new(),
            temperature: 0.0,
            max_retries: 2,
            backoff_ms: 250,
            max_tokens: 64,
            concurrency: 2,
        }
    }
}

/// Full benchmark configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub pair_counts: Vec<usize>,
    pub sigmas: Vec<f64>,
    pub trials: usize,
    pub tau: f64,
    pub output_path: String,
    pub endpoint: Option<EndpointConfig>,
    /// Pinned provenance timestamp; `None` means "now". Pinning it makes a
    /// run byte-reproducible.
    pub timestamp: Option<String>,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(CoreError::Validation("trials must be ≥ 1".into()));
        }
        if self.dims.is_empty() || self.pair_counts.is_empty() || self.sigmas.is_empty() {
            return Err(CoreError::Validation(
                "dims, pairs, and sigmas must be nonempty".into(),
            ));
        }
        if self.dims.iter().any(|&d| d < 2) {
            return Err(CoreError::Validation("all dims must be ≥ 2".into()));
        }
        if self.pair_counts.iter().any(|&n| n < 1) {
            return Err(CoreError::Validation("all pair counts must be ≥ 1".into()));
        }
        if self.sigmas.iter().any(|&s| s < 0.0) {
            return Err(CoreError::Validation("all sigmas must be ≥ 0".into()));
        }
        if !(self.tau > 0.0) {
            return Err(CoreError::Validation("tau must be > 0".into()));
        }
        Ok(())
    }
}

/// Which storage construction a row measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arm {
    Hypertoken,
    Baseline,
}

impl std::fmt::Display for Arm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Arm::Hypertoken => write!(f, "hypertoken"),
            Arm::Baseline => write!(f, "baseline"),
        }
    }
}

/// Serialize possibly non-finite floats as "inf"/"-inf"/"nan" strings so
/// JSON round trips exactly.
mod finite_or_str {
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = f64;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a float or \"inf\"/\"-inf\"/\"nan\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<f64, E> {
                Ok(v)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<f64, E> {
                match v {
                    "inf" => Ok(f64::INFINITY),
                    "-inf" => Ok(f64::NEG_INFINITY),
                    "nan" => Ok(f64::NAN),
                    other => Err(E::custom(format!("unexpected float string {other:?}"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// One metric record: the diagnostics CSV schema plus both recalls and the
/// arm discriminator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimRow {
    pub dim: usize,
    pub n: usize,
    pub sigma: f64,
    pub collision_rate: f64,
    pub entropy_bits: f64,
    #[serde(with = "finite_or_str")]
    pub snr_db: f64,
    #[serde(with = "finite_or_str")]
    pub kappa_ht: f64,
    #[serde(with = "finite_or_str")]
    pub kappa_raw: f64,
    pub rip_delta: f64,
    pub seed: u64,
    pub recall_kv: f64,
    pub recall_vk: f64,
    pub arm: Arm,
}

/// Fixed CSV column order.
pub const CSV_HEADER: &str =
    "dim,n,sigma,collision_rate,entropy_bits,snr_db,kappa_ht,kappa_raw,rip_delta,seed,recall_kv,recall_vk,arm";

impl SimRow {
    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.dim,
            self.n,
            self.sigma,
            self.collision_rate,
            self.entropy_bits,
            self.snr_db,
            self.kappa_ht,
            self.kappa_raw,
            self.rip_delta,
            self.seed,
            self.recall_kv,
            self.recall_vk,
            self.arm
        )
    }
}

/// Run provenance embedded in every JSON report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub config: BenchConfig,
    pub cell_seeds: Vec<u64>,
    pub version: String,
    pub timestamp: String,
}

/// Outcome of one LLM probe.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LlmOutcome {
    pub index: usize,
    pub arm: Arm,
    pub mode: PromptMode,
    pub expected: String,
    pub completion: Option<String>,
    pub correct: bool,
    pub attempts: u32,
    pub error: Option<String>,
}

/// Aggregate LLM recall per arm.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LlmSummary {
    pub outcomes: Vec<LlmOutcome>,
    pub recall_hypertoken: f64,
    pub recall_control: f64,
    /// hypertoken recall / control recall; `None` when there are no control
    /// prompts or control recall is zero.
    pub improvement_ratio: Option<f64>,
}

/// A full benchmark report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<SimRow>,
    pub llm: Option<LlmSummary>,
    pub provenance: Provenance,
}

fn make_provenance(config: &BenchConfig, cell_seeds: Vec<u64>) -> Provenance {
    let timestamp = config.timestamp.clone().unwrap_or_else(|| {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        format!("unix_epoch_secs:{secs}")
    });
    Provenance {
        config: config.clone(),
        cell_seeds,
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp,
    }
}

/// Single content-token pairs for the baseline arm.
fn baseline_pairs(n: usize) -> Vec<MemoryPair> {
    (0..n)
        .map(|i| {
            MemoryPair::new(
                crate::codebook::Codeword {
                    index: i,
                    tokens: vec![format!("bk_{i}")],
                },
                crate::codebook::Codeword {
                    index: i,
                    tokens: vec![format!("bv_{i}")],
                },
            )
        })
        .collect()
}

struct ArmStats {
    collision_rate: f64,
    entropy_bits: f64,
    snr_db: f64,
    recall_kv: f64,
    recall_vk: f64,
    rip_delta: f64,
    key_matrix: Matrix<f64>,
}

fn run_arm(
    arm: Arm,
    dim: usize,
    n: usize,
    sigma: f64,
    trials: usize,
    tau: f64,
    arm_seed: u64,
) -> Result<ArmStats> {
    let mut decodes = Vec::with_capacity(trials * n);
    let mut truths = Vec::with_capacity(trials * n);
    let mut kv_hits = 0usize;
    let mut vk_hits = 0usize;
    let mut key_matrix: Option<Matrix<f64>> = None;

    for t in 0..trials {
        let round_seed = child_seed(arm_seed, t as u64);
        let (bank, outcome) = match arm {
            Arm::Hypertoken => {
                let pairs = store::synthetic_pairs(n, "ht_");
                let vocab = pair_vocabulary(&pairs);
                let table: EmbeddingTable<f64> =
                    EmbeddingTable::new(&vocab, dim, child_seed(round_seed, 0))?;
                let phase = crate::latent::PhaseOperator::new(dim, child_seed(round_seed, 1))?;
                let bank = store_pairs(&pairs, &table, &phase)?;
                let outcome = decode_all(&bank, sigma, round_seed, tau)?;
                (bank, outcome)
            }
            Arm::Baseline => {
                let pairs = baseline_pairs(n);
                let vocab = pair_vocabulary(&pairs);
                let table: EmbeddingTable<f64> = EmbeddingTable::correlated(
                    &vocab,
                    dim,
                    child_seed(round_seed, 0),
                    BASELINE_COHERENCE,
                )?;
                let phase = crate::latent::PhaseOperator::new(dim, child_seed(round_seed, 1))?;
                let bank = store_pairs(&pairs, &table, &phase)?;
                let outcome = decode_all(&bank, sigma, round_seed, tau)?;
                (bank, outcome)
            }
        };
        kv_hits += outcome.kv_hits;
        vk_hits += outcome.vk_hits;
        truths.extend(0..n);
        decodes.extend(outcome.kv_decodes);
        if key_matrix.is_none() {
            let cols: Vec<Vec<f64>> = bank
                .key_projections()
                .iter()
                .map(|p| p.as_slice().to_vec())
                .collect();
            key_matrix = Some(Matrix::from_columns(&cols)?);
        }
    }

    let metrics = channel_metrics(&decodes, &truths, sigma)?;
    let key_matrix = key_matrix.expect("at least one trial ran");
    let rip = estimate_rip_delta(&key_matrix, 4.min(n), 200, child_seed(arm_seed, 7))?;
    let total = (trials * n) as f64;
    Ok(ArmStats {
        collision_rate: metrics.collision_rate,
        entropy_bits: metrics.decode_entropy_bits,
        snr_db: metrics.snr_db,
        recall_kv: kv_hits as f64 / total,
        recall_vk: vk_hits as f64 / total,
        rip_delta: rip.delta,
        key_matrix,
    })
}

/// Run the full simulator grid: two arms per (dim, pairs, sigma) cell.
pub fn run_sim_bench(config: &BenchConfig) -> Result<BenchReport> {
    config.validate()?;
    let mut rows = Vec::new();
    let mut cell_seeds = Vec::new();
    let mut cell_index = 0u64;
    for &dim in &config.dims {
        for &n in &config.pair_counts {
            for &sigma in &config.sigmas {
                let cell_seed = child_seed(config.seed, cell_index);
                cell_seeds.push(cell_seed);
                cell_index += 1;

                let ht = run_arm(
                    Arm::Hypertoken,
                    dim,
                    n,
                    sigma,
                    config.trials,
                    config.tau,
                    tagged_seed(cell_seed, "hypertoken"),
                )?;
                let base = run_arm(
                    Arm::Baseline,
                    dim,
                    n,
                    sigma,
                    config.trials,
                    config.tau,
                    tagged_seed(cell_seed, "baseline"),
                )?;

                // One κ comparison per cell: hypertoken columns vs the
                // coherent baseline columns.
                let cond = condition_numbers(&ht.key_matrix, &base.key_matrix)?;

                for (arm, stats) in [(Arm::Hypertoken, &ht), (Arm::Baseline, &base)] {
                    rows.push(SimRow {
                        dim,
                        n,
                        sigma,
                        collision_rate: stats.collision_rate,
                        entropy_bits: stats.entropy_bits,
                        snr_db: stats.snr_db,
                        kappa_ht: cond.kappa_ht,
                        kappa_raw: cond.kappa_raw,
                        rip_delta: stats.rip_delta,
                        seed: cell_seed,
                        recall_kv: stats.recall_kv,
                        recall_vk: stats.recall_vk,
                        arm,
                    });
                }
            }
        }
    }
    Ok(BenchReport {
        rows,
        llm: None,
        provenance: make_provenance(config, cell_seeds),
    })
}

/// Errors a chat endpoint can surface.
#[derive(Clone, Debug, Error)]
pub enum EndpointError {
    /// Credentials rejected; aborts the whole run.
    #[error("authentication failed: {0}")]
    Auth(String),
    /// Request timed out; retried up to max_retries.
    #[error("request timed out: {0}")]
    Timeout(String),
    /// Transient transport failure; retried up to max_retries.
    #[error("transient failure: {0}")]
    Transient(String),
    /// Unexpected response shape or status; not retried.
    #[error("protocol error: {0}")]
    Protocol(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

/// The minimal chat-completion request shape.
#[derive(Clone, Debug, Serialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    pub max_tokens: u32,
}

/// Transport abstraction so the harness can run against HTTP or a mock.
pub trait ChatEndpoint: Sync {
    fn complete(&self, request: &ChatRequest) -> std::result::Result<String, EndpointError>;
}

/// One prompt ready for the LLM harness.
#[derive(Clone, Debug)]
pub struct LlmPrompt {
    pub text: String,
    pub expected_answer: String,
    pub mode: PromptMode,
    pub arm: Arm,
}

/// Drive the endpoint over all prompts with a bounded worker pool.
///
/// Each prompt goes out as a single user message. Transient failures and
/// timeouts retry with exponential backoff up to `max_retries`; exhausted
/// prompts are marked failed and the run continues. An authentication
/// failure aborts the run.
pub fn run_llm_bench(
    config: &BenchConfig,
    endpoint: &dyn ChatEndpoint,
    prompts: &[LlmPrompt],
) -> Result<BenchReport> {
    let ep_config = config
        .endpoint
        .as_ref()
        .ok_or_else(|| CoreError::Validation("llm bench requires an endpoint config".into()))?;
    if prompts.is_empty() {
        return Err(CoreError::Validation("no prompts to run".into()));
    }

    let outcomes: Mutex<Vec<Option<LlmOutcome>>> = Mutex::new(vec![None; prompts.len()]);
    let cursor = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let auth_error: Mutex<Option<String>> = Mutex::new(None);
    let workers = ep_config.concurrency.max(1).min(prompts.len());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                if abort.load(Ordering::SeqCst) {
                    return;
                }
                let idx = cursor.fetch_add(1, Ordering::SeqCst);
                if idx >= prompts.len() {
                    return;
                }
                let prompt = &prompts[idx];
                let request = ChatRequest {
                    model: ep_config.model_name.clone(),
                    messages: vec![ChatMessage {
                        role: "user".into(),
                        content: prompt.text.clone(),
                    }],
                    temperature: ep_config.temperature,
                    max_tokens: ep_config.max_tokens,
                };

                let mut attempts = 0u32;
                let outcome = loop {
                    attempts += 1;
                    match endpoint.complete(&request) {
                        Ok(completion) => {
                            let correct = completion.trim() == prompt.expected_answer.trim();
                            break LlmOutcome {
                                index: idx,
                                arm: prompt.arm,
                                mode: prompt.mode,
                                expected: prompt.expected_answer.clone(),
                                completion: Some(completion),
                                correct,
                                attempts,
                                error: None,
                            };
                        }
                        Err(EndpointError::Auth(msg)) => {
                            *auth_error.lock().expect("poisoned") = Some(msg);
                            abort.store(true, Ordering::SeqCst);
                            return;
                        }
                        Err(e @ (EndpointError::Timeout(_) | EndpointError::Transient(_)))
                            if attempts <= ep_config.max_retries =>
                        {
                            let backoff = ep_config
                                .backoff_ms
                                .saturating_mul(1 << (attempts - 1).min(10));
                            std::thread::sleep(std::time::Duration::from_millis(backoff));
                            let _ = e;
                        }
                        Err(e) => {
                            break LlmOutcome {
                                index: idx,
                                arm: prompt.arm,
                                mode: prompt.mode,
                                expected: prompt.expected_answer.clone(),
                                completion: None,
                                correct: false,
                                attempts,
                                error: Some(e.to_string()),
                            };
                        }
                    }
                };
                outcomes.lock().expect("poisoned")[idx] = Some(outcome);
            });
        }
    });

    if let Some(msg) = auth_error.into_inner().expect("poisoned") {
        return Err(CoreError::Endpoint(format!(
            "authentication failed: {msg}; set HDRAM_API_KEY to a valid key"
        )));
    }

    let outcomes: Vec<LlmOutcome> = outcomes
        .into_inner()
        .expect("poisoned")
        .into_iter()
        .map(|o| o.expect("all prompts processed"))
        .collect();

    let recall_of = |arm: Arm| -> f64 {
        let total = outcomes.iter().filter(|o| o.arm == arm).count();
        if total == 0 {
            return 0.0;
        }
        let hits = outcomes
            .iter()
            .filter(|o| o.arm == arm && o.correct)
            .count();
        hits as f64 / total as f64
    };
    let recall_hypertoken = recall_of(Arm::Hypertoken);
    let recall_control = recall_of(Arm::Baseline);
    let has_control = outcomes.iter().any(|o| o.arm == Arm::Baseline);
    let improvement_ratio = if has_control && recall_control > 0.0 {
        Some(recall_hypertoken / recall_control)
    } else {
        None
    };

    Ok(BenchReport {
        rows: Vec::new(),
        llm: Some(LlmSummary {
            outcomes,
            recall_hypertoken,
            recall_control,
            improvement_ratio,
        }),
        provenance: make_provenance(config, Vec::new()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Write a report atomically (temp file + rename), returning the final
/// path: `<base>.csv` or `<base>.json`.
pub fn emit_report(report: &BenchReport, format: ReportFormat, base: &Path) -> Result<PathBuf> {
    let target = match format {
        ReportFormat::Csv => base.with_extension("csv"),
        ReportFormat::Json => base.with_extension("json"),
    };
    let parent = target.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(p) = parent {
        std::fs::create_dir_all(p)?;
    }
    let dir = parent.unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;

    match format {
        ReportFormat::Csv => {
            writeln!(tmp, "{CSV_HEADER}")?;
            for row in &report.rows {
                writeln!(tmp, "{}", row.csv_line())?;
            }
        }
        ReportFormat::Json => {
            let text = serde_json::to_string_pretty(report)?;
            tmp.write_all(text.as_bytes())?;
            tmp.write_all(b"\n")?;
        }
    }
    tmp.flush()?;
    tmp.persist(&target).map_err(|e| CoreError::Io(e.error))?;
    Ok(target)
}

/// Load a JSON report back, e.g. for `report convert`.
pub fn load_report(path: &Path) -> Result<BenchReport> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
