//! The holographic key-value memory.
//!
//! Pairs are stored as a superposed outer-product trace
//! M = Σᵢ Φ(kᵢ)·Φ(vᵢ)ᵀ. A forward read Mᵀ·Φ(k) lands near Φ(v) for the
//! stored pair plus crosstalk from the others; a reverse read M·Φ(v) lands
//! near Φ(k). One matrix therefore serves both K:V lookup and the V:K
//! reverse search, which is the whole point of keeping keys bifix-free.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::codebook::Codeword;
use crate::despread::{matched_filter_decode, DecodeResult};
use crate::error::{Error, Result};
use crate::latent::{add_noise, project_codeword, EmbeddingTable, LatentVector, PhaseOperator};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::seeding::child_seed;

/// One key → value association with an optional opaque payload.
#[derive(Clone, Debug, PartialEq)]
pub struct MemoryPair {
    pub key: Codeword,
    pub value: Codeword,
    pub payload: Option<String>,
}

impl MemoryPair {
    pub fn new(key: Codeword, value: Codeword) -> Self {
        MemoryPair {
            key,
            value,
            payload: None,
        }
    }

    pub fn with_payload(key: Codeword, value: Codeword, payload: impl Into<String>) -> Self {
        MemoryPair {
            key,
            value,
            payload: Some(payload.into()),
        }
    }
}

/// The holographic trace plus the codeword registry behind it.
#[derive(Clone, Debug)]
pub struct MemoryBank<S> {
    trace: Matrix<S>,
    keys: Vec<Codeword>,
    values: Vec<Codeword>,
    key_projections: Vec<LatentVector<S>>,
    value_projections: Vec<LatentVector<S>>,
    payloads: Vec<Option<String>>,
}

impl<S: Scalar> MemoryBank<S> {
    pub fn pair_count(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn trace(&self) -> &Matrix<S> {
        &self.trace
    }

    pub fn keys(&self) -> &[Codeword] {
        &self.keys
    }

    pub fn values(&self) -> &[Codeword] {
        &self.values
    }

    pub fn key_projections(&self) -> &[LatentVector<S>] {
        &self.key_projections
    }

    pub fn value_projections(&self) -> &[LatentVector<S>] {
        &self.value_projections
    }

    pub fn payload(&self, index: usize) -> Option<&str> {
        self.payloads.get(index).and_then(|p| p.as_deref())
    }

    /// Recompute Σ Φ(kᵢ)Φ(vᵢ)ᵀ from the stored projections and return the
    /// largest absolute deviation from the held trace.
    pub fn trace_defect(&self) -> S {
        let dim = self.trace.rows();
        let mut rebuilt = Matrix::zeros(dim, dim);
        for (k, v) in self.key_projections.iter().zip(&self.value_projections) {
            rebuilt.add_outer_product(k.as_slice(), v.as_slice());
        }
        let mut worst = S::zero();
        for i in 0..dim {
            for j in 0..dim {
                worst = worst.max((rebuilt.get(i, j) - self.trace.get(i, j)).abs());
            }
        }
        worst
    }
}

/// Store pairs into a fresh bank, accumulating outer products in input
/// order. Keys must be distinct codewords.
pub fn store<S: Scalar>(
    pairs: &[MemoryPair],
    table: &EmbeddingTable<S>,
    phase: &PhaseOperator<S>,
) -> Result<MemoryBank<S>> {
    let dim = table.dim();
    let mut seen: HashMap<&[String], usize> = HashMap::new();
    for (i, p) in pairs.iter().enumerate() {
        if let Some(&first) = seen.get(p.key.tokens.as_slice()) {
            return Err(Error::DuplicateKey { first, second: i });
        }
        seen.insert(p.key.tokens.as_slice(), i);
    }

    let mut trace = Matrix::zeros(dim, dim);
    let mut keys = Vec::with_capacity(pairs.len());
    let mut values = Vec::with_capacity(pairs.len());
    let mut key_projections = Vec::with_capacity(pairs.len());
    let mut value_projections = Vec::with_capacity(pairs.len());
    let mut payloads = Vec::with_capacity(pairs.len());

    for p in pairs {
        let pk = project_codeword(&p.key, table, phase)?;
        let pv = project_codeword(&p.value, table, phase)?;
        trace.add_outer_product(pk.as_slice(), pv.as_slice());
        keys.push(p.key.clone());
        values.push(p.value.clone());
        key_projections.push(pk);
        value_projections.push(pv);
        payloads.push(p.payload.clone());
    }

    Ok(MemoryBank {
        trace,
        keys,
        values,
        key_projections,
        value_projections,
        payloads,
    })
}

/// Forward K:V lookup: read r = Mᵀ·Φ(key), decode against value projections.
pub fn lookup_kv<S: Scalar>(
    bank: &MemoryBank<S>,
    key: &Codeword,
    table: &EmbeddingTable<S>,
    phase: &PhaseOperator<S>,
    tau: S,
) -> Result<DecodeResult<S>> {
    if bank.is_empty() {
        return Err(Error::EmptyMemory);
    }
    let q = project_codeword(key, table, phase)?;
    let read = LatentVector::new(bank.trace.matvec_transpose(q.as_slice()))?;
    matched_filter_decode(&read, &bank.value_projections, tau)
}

/// Reverse V:K lookup: read r = M·Φ(value), decode against key projections.
/// The transpose read is what realizes the reverse search.
pub fn lookup_vk<S: Scalar>(
    bank: &MemoryBank<S>,
    value: &Codeword,
    table: &EmbeddingTable<S>,
    phase: &PhaseOperator<S>,
    tau: S,
) -> Result<DecodeResult<S>> {
    if bank.is_empty() {
        return Err(Error::EmptyMemory);
    }
    let q = project_codeword(value, table, phase)?;
    let read = LatentVector::new(bank.trace.matvec(q.as_slice()))?;
    matched_filter_decode(&read, &bank.key_projections, tau)
}

/// Decode a pre-built noisy latent query against the bank's values.
pub fn lookup_kv_latent<S: Scalar>(
    bank: &MemoryBank<S>,
    query: &LatentVector<S>,
    tau: S,
) -> Result<DecodeResult<S>> {
    if bank.is_empty() {
        return Err(Error::EmptyMemory);
    }
    let read = LatentVector::new(bank.trace.matvec_transpose(query.as_slice()))?;
    matched_filter_decode(&read, &bank.value_projections, tau)
}

/// Decode a pre-built noisy latent query against the bank's keys.
pub fn lookup_vk_latent<S: Scalar>(
    bank: &MemoryBank<S>,
    query: &LatentVector<S>,
    tau: S,
) -> Result<DecodeResult<S>> {
    if bank.is_empty() {
        return Err(Error::EmptyMemory);
    }
    let read = LatentVector::new(bank.trace.matvec(query.as_slice()))?;
    matched_filter_decode(&read, &bank.key_projections, tau)
}

/// Deterministically synthesize `n` key and value codewords as 2-token
/// codewords over per-codeword tokens.
///
/// This is the codebook shape the round-trip and capacity experiments run
/// on: distinct fixed-length codewords are automatically bifix-free, and
/// fresh tokens per codeword keep the projections quasi-orthogonal (the
/// PUA-style "unique symbol" selection). Token-sharing product codes are
/// available through `codebook::build_product_codebook` when vocabulary
/// compression matters more than address margin.
pub fn synthetic_pairs(n: usize, namespace: &str) -> Vec<MemoryPair> {
    let make = |prefix: &str, i: usize| -> Codeword {
        Codeword {
            index: i,
            tokens: vec![format!("{prefix}0_{i}"), format!("{prefix}1_{i}")],
        }
    };
    (0..n)
        .map(|i| {
            MemoryPair::new(
                make(&format!("{namespace}k"), i),
                make(&format!("{namespace}v"), i),
            )
        })
        .collect()
}

/// All tokens used by a pair list, in first-appearance order.
pub fn pair_vocabulary(pairs: &[MemoryPair]) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for p in pairs {
        for t in p.key.tokens.iter().chain(&p.value.tokens) {
            if seen.insert(t.clone()) {
                out.push(t.clone());
            }
        }
    }
    out
}

/// Forward/reverse recall rates for one (dim, pair_count) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityCell {
    pub dim: usize,
    pub pairs: usize,
    pub recall_kv: f64,
    pub recall_vk: f64,
}

/// Mean forward and reverse recall over a (dims × pair_counts) grid.
///
/// Each cell runs `trials` rounds; a round builds a fresh bank from a
/// trial-seeded embedding table and decodes every key (forward) and every
/// value (reverse) under per-coordinate Gaussian noise of std `noise_sigma`.
pub fn capacity_curve<S: Scalar>(
    dims: &[usize],
    pair_counts: &[usize],
    noise_sigma: S,
    trials: usize,
    seed: u64,
) -> Result<Vec<CapacityCell>> {
    if trials < 1 {
        return Err(Error::Validation("trials must be ≥ 1".into()));
    }
    let mut cells = Vec::with_capacity(dims.len() * pair_counts.len());
    for (ci, (&dim, &n)) in dims
        .iter()
        .flat_map(|d| pair_counts.iter().map(move |n| (d, n)))
        .enumerate()
    {
        let cell_seed = child_seed(seed, ci as u64);
        let mut kv_hits = 0usize;
        let mut vk_hits = 0usize;
        for t in 0..trials {
            let trial_seed = child_seed(cell_seed, t as u64);
            let round = simulate_round(dim, n, noise_sigma, trial_seed)?;
            kv_hits += round.kv_hits;
            vk_hits += round.vk_hits;
        }
        let total = (trials * n) as f64;
        cells.push(CapacityCell {
            dim,
            pairs: n,
            recall_kv: kv_hits as f64 / total,
            recall_vk: vk_hits as f64 / total,
        });
    }
    Ok(cells)
}

pub(crate) struct RoundOutcome<S> {
    pub kv_hits: usize,
    pub vk_hits: usize,
    pub kv_decodes: Vec<DecodeResult<S>>,
}

pub(crate) fn simulate_round<S: Scalar>(
    dim: usize,
    n: usize,
    noise_sigma: S,
    seed: u64,
) -> Result<RoundOutcome<S>> {
    let pairs = synthetic_pairs(n, "ht_");
    let vocab = pair_vocabulary(&pairs);
    let table: EmbeddingTable<S> = EmbeddingTable::new(&vocab, dim, child_seed(seed, 0))?;
    let phase: PhaseOperator<S> = PhaseOperator::new(dim, child_seed(seed, 1))?;
    let bank = store(&pairs, &table, &phase)?;
    decode_all(&bank, noise_sigma, seed, S::one())
}

pub(crate) fn decode_all<S: Scalar>(
    bank: &MemoryBank<S>,
    noise_sigma: S,
    seed: u64,
    tau: S,
) -> Result<RoundOutcome<S>> {
    let n = bank.pair_count();
    let mut kv_hits = 0;
    let mut vk_hits = 0;
    let mut kv_decodes = Vec::with_capacity(n);
    for i in 0..n {
        let q = add_noise(
            &bank.key_projections[i],
            noise_sigma,
            child_seed(seed, 2 + 2 * i as u64),
        );
        let r = lookup_kv_latent(bank, &q, tau)?;
        if r.best_index == i {
            kv_hits += 1;
        }
        kv_decodes.push(r);

        let q = add_noise(
            &bank.value_projections[i],
            noise_sigma,
            child_seed(seed, 3 + 2 * i as u64),
        );
        let r = lookup_vk_latent(bank, &q, tau)?;
        if r.best_index == i {
            vk_hits += 1;
        }
    }
    Ok(RoundOutcome {
        kv_hits,
        vk_hits,
        kv_decodes,
    })
}

/// 99th percentile of decode margins for impostor keys (codewords that were
/// never stored), measured by Monte Carlo. Margins above the returned
/// threshold are trustworthy; below it a caller should reject the decode.
pub fn impostor_margin_threshold<S: Scalar>(
    dim: usize,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<S> {
    if trials < 1 {
        return Err(Error::Validation("trials must be ≥ 1".into()));
    }
    let mut margins: Vec<S> = Vec::with_capacity(trials);
    for t in 0..trials {
        let trial_seed = child_seed(seed, t as u64);
        let pairs = synthetic_pairs(n, "ht_");
        let impostor = Codeword {
            index: n,
            tokens: vec![format!("imp0_{t}"), format!("imp1_{t}")],
        };
        let mut vocab = pair_vocabulary(&pairs);
        vocab.extend(impostor.tokens.iter().cloned());
        let table: EmbeddingTable<S> = EmbeddingTable::new(&vocab, dim, child_seed(trial_seed, 0))?;
        let phase: PhaseOperator<S> = PhaseOperator::new(dim, child_seed(trial_seed, 1))?;
        let bank = store(&pairs, &table, &phase)?;
        let r = lookup_kv(&bank, &impostor, &table, &phase, S::one())?;
        margins.push(r.margin);
    }
    margins.sort_by(|a, b| a.partial_cmp(b).expect("finite margins"));
    let rank = ((trials as f64 * 0.99).ceil() as usize).clamp(1, trials) - 1;
    Ok(margins[rank])
}

/// One line of the pair-list file: `{"key_index":i,"value_index":j,"payload":"..."}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairRecord {
    pub key_index: usize,
    pub value_index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<String>,
}

/// Read a JSON-lines pair file.
pub fn read_pair_file(path: &Path) -> Result<Vec<PairRecord>> {
    let file = std::fs::File::open(path)?;
    let mut out = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

/// Write a JSON-lines pair file.
pub fn write_pair_file(path: &Path, records: &[PairRecord]) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    for r in records {
        writeln!(file, "{}", serde_json::to_string(r)?)?;
    }
    Ok(())
}

/// Materialize pair records against codebooks for keys and values.
pub fn resolve_pairs(
    records: &[PairRecord],
    key_book: &crate::codebook::Codebook,
    value_book: &crate::codebook::Codebook,
) -> Result<Vec<MemoryPair>> {
    records
        .iter()
        .map(|r| {
            let key = key_book
                .codeword(r.key_index)
                .ok_or_else(|| {
                    Error::Validation(format!("key_index {} out of range", r.key_index))
                })?
                .clone();
            let value = value_book
                .codeword(r.value_index)
                .ok_or_else(|| {
                    Error::Validation(format!("value_index {} out of range", r.value_index))
                })?
                .clone();
            Ok(MemoryPair {
                key,
                value,
                payload: r.payload.clone(),
            })
        })
        .collect()
}
