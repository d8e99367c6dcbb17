//! Prompt compilation: turn codebooks and key-value pairs into interleaved
//! hypertoken prompts, select low-probability symbols, and verify that no
//! hypertoken splits across token boundaries.
//!
//! The prompt grammar is fixed: one `<codeword>: <payload>` line per pair,
//! then a query line: `<codeword>:` for forward (kv) probes or
//! `<payload> →` for reverse (vk) probes.

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::codebook::{Codebook, Codeword};
use crate::error::{Error, Result};

/// First and last codepoints of the Unicode Private Use Area.
pub const PUA_START: u32 = 0xE000;
pub const PUA_END: u32 = 0xF8FF;

/// A tokenizer adapter: a pure, deterministic map from text to token ids,
/// with enough introspection to reconstruct byte spans.
pub trait TokenizeAdapter: Send + Sync {
    fn name(&self) -> &str;

    /// Tokenize text into ids. Must partition the input bytes exactly.
    fn tokenize(&self, text: &str) -> Vec<u32>;

    /// The byte content of a token id, if known.
    fn token_bytes(&self, id: u32) -> Option<Vec<u8>>;
}

/// A tokenizer plus its verified cache of single-token PUA characters.
pub struct TokenizerProfile {
    adapter: Box<dyn TokenizeAdapter>,
    pua_cache: OnceLock<Vec<String>>,
}

impl TokenizerProfile {
    pub fn new(adapter: Box<dyn TokenizeAdapter>) -> Self {
        TokenizerProfile {
            adapter,
            pua_cache: OnceLock::new(),
        }
    }

    pub fn name(&self) -> &str {
        self.adapter.name()
    }

    pub fn tokenize(&self, text: &str) -> Vec<u32> {
        self.adapter.tokenize(text)
    }

    pub fn token_bytes(&self, id: u32) -> Option<Vec<u8>> {
        self.adapter.token_bytes(id)
    }

    /// All PUA characters that tokenize to exactly one id, ascending by
    /// codepoint. Scanned once, then cached.
    pub fn pua_singletons(&self) -> &[String] {
        self.pua_cache.get_or_init(|| {
            let mut out = Vec::new();
            for cp in PUA_START..=PUA_END {
                let ch = char::from_u32(cp).expect("PUA codepoints are valid chars");
                let s = ch.to_string();
                if self.adapter.tokenize(&s).len() == 1 {
                    out.push(s);
                }
            }
            out
        })
    }
}

/// Greedy longest-match tokenizer over a supplied vocabulary, with single
/// bytes as fallback. Byte-fallback ids start at `vocab.len()`.
pub struct ReferenceTokenizer {
    name: String,
    vocab: Vec<String>,
    index: HashMap<Vec<u8>, u32>,
    max_token_bytes: usize,
}

impl ReferenceTokenizer {
    pub fn new(name: impl Into<String>, vocab: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(vocab.len());
        let mut max_token_bytes = 1;
        for (i, tok) in vocab.iter().enumerate() {
            if tok.is_empty() {
                return Err(Error::Validation(format!("vocab entry {i} is empty")));
            }
            if index.insert(tok.as_bytes().to_vec(), i as u32).is_some() {
                return Err(Error::Validation(format!("duplicate vocab entry {tok:?}")));
            }
            max_token_bytes = max_token_bytes.max(tok.len());
        }
        Ok(ReferenceTokenizer {
            name: name.into(),
            vocab,
            index,
            max_token_bytes,
        })
    }

    /// Load a vocabulary file: UTF-8, one token per line, line number = id.
    pub fn from_vocab_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let vocab: Vec<String> = text.lines().map(str::to_string).collect();
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "vocab".to_string());
        Self::new(name, vocab)
    }

    pub fn vocab_len(&self) -> usize {
        self.vocab.len()
    }
}

impl TokenizeAdapter for ReferenceTokenizer {
    fn name(&self) -> &str {
        &self.name
    }

    fn tokenize(&self, text: &str) -> Vec<u32> {
        let bytes = text.as_bytes();
        let mut ids = Vec::new();
        let mut pos = 0;
        while pos < bytes.len() {
            let limit = self.max_token_bytes.min(bytes.len() - pos);
            let mut matched = None;
            for len in (1..=limit).rev() {
                if let Some(&id) = self.index.get(&bytes[pos..pos + len]) {
                    matched = Some((id, len));
                    break;
                }
            }
            match matched {
                Some((id, len)) => {
                    ids.push(id);
                    pos += len;
                }
                None => {
                    ids.push(self.vocab.len() as u32 + u32::from(bytes[pos]));
                    pos += 1;
                }
            }
        }
        ids
    }

    fn token_bytes(&self, id: u32) -> Option<Vec<u8>> {
        let n = self.vocab.len() as u32;
        if id < n {
            Some(self.vocab[id as usize].as_bytes().to_vec())
        } else if id < n + 256 {
            Some(vec![(id - n) as u8])
        } else {
            None
        }
    }
}

/// How hypertoken symbols are chosen.
#[derive(Clone, Debug)]
pub enum SelectionPolicy {
    /// Scan the Private Use Area ascending, keeping single-token chars.
    Pua,
    /// Sort a provided (token, frequency) list ascending by frequency.
    Rare(Vec<(String, f64)>),
    /// Use the given symbols verbatim (after single-token verification).
    Explicit(Vec<String>),
}

/// Select `count` hypertoken symbols under the policy. Every returned
/// symbol is verified to tokenize to exactly one id.
pub fn select_hypertokens(
    profile: &TokenizerProfile,
    count: usize,
    policy: &SelectionPolicy,
) -> Result<Vec<String>> {
    if count < 1 {
        return Err(Error::Validation("count must be ≥ 1".into()));
    }
    let candidates: Vec<String> = match policy {
        SelectionPolicy::Pua => profile.pua_singletons().to_vec(),
        SelectionPolicy::Rare(freqs) => {
            let mut sorted = freqs.clone();
            sorted.sort_by(|a, b| {
                a.1.partial_cmp(&b.1)
                    .expect("finite frequencies")
                    .then(a.0.cmp(&b.0))
            });
            sorted
                .into_iter()
                .map(|(t, _)| t)
                .filter(|t| profile.tokenize(t).len() == 1)
                .collect()
        }
        SelectionPolicy::Explicit(list) => list
            .iter()
            .filter(|t| profile.tokenize(t).len() == 1)
            .cloned()
            .collect(),
    };
    if candidates.len() < count {
        return Err(Error::InsufficientSymbols {
            found: candidates.len(),
            need: count,
        });
    }
    Ok(candidates.into_iter().take(count).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PromptMode {
    Kv,
    Vk,
}

impl std::fmt::Display for PromptMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PromptMode::Kv => write!(f, "kv"),
            PromptMode::Vk => write!(f, "vk"),
        }
    }
}

/// Byte span of one hypertoken symbol occurrence inside the prompt text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypertokenSpan {
    pub byte_start: usize,
    pub byte_end: usize,
    pub symbol: String,
}

/// A compiled prompt plus the metadata needed to score and verify it.
#[derive(Clone, Debug)]
pub struct PromptArtifact {
    pub text: String,
    pub mode: PromptMode,
    pub query_codeword: Codeword,
    pub expected_answer: String,
    /// Set when a tokenizer profile was supplied at compile time.
    pub token_count: Option<usize>,
    /// Every hypertoken occurrence, recorded at compile time.
    pub hypertoken_spans: Vec<HypertokenSpan>,
}

/// JSON sidecar written next to the prompt text.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PromptSidecar {
    pub mode: PromptMode,
    pub query_index: usize,
    pub expected_answer: String,
    pub token_count: Option<usize>,
}

/// A (key codeword, payload) association to compile into the prompt.
#[derive(Clone, Debug)]
pub struct PromptPair {
    pub key: Codeword,
    pub payload: String,
}

/// Compile pairs and a query into a prompt.
///
/// kv mode asks for the payload stored under the query codeword; vk mode
/// presents the query codeword's payload and expects the codeword text
/// back. The optional profile fills in `token_count`.
pub fn compile_kv_prompt(
    codebook: &Codebook,
    pairs: &[PromptPair],
    query: &Codeword,
    mode: PromptMode,
    profile: Option<&TokenizerProfile>,
) -> Result<PromptArtifact> {
    if pairs.is_empty() {
        return Err(Error::Validation("pairs must be nonempty".into()));
    }
    if codebook.find(&query.tokens).is_none() {
        return Err(Error::UnknownQuery(query.text()));
    }
    let query_pair = pairs
        .iter()
        .find(|p| p.key.tokens == query.tokens)
        .ok_or_else(|| Error::UnknownQuery(query.text()))?;

    let mut text = String::new();
    let mut spans = Vec::new();
    let push_codeword = |text: &mut String, spans: &mut Vec<HypertokenSpan>, cw: &Codeword| {
        for tok in &cw.tokens {
            let start = text.len();
            text.push_str(tok);
            spans.push(HypertokenSpan {
                byte_start: start,
                byte_end: text.len(),
                symbol: tok.clone(),
            });
        }
    };

    for p in pairs {
        push_codeword(&mut text, &mut spans, &p.key);
        text.push_str(": ");
        text.push_str(&p.payload);
        text.push('\n');
    }
    let expected_answer = match mode {
        PromptMode::Kv => {
            push_codeword(&mut text, &mut spans, query);
            text.push(':');
            query_pair.payload.clone()
        }
        PromptMode::Vk => {
            text.push_str(&query_pair.payload);
            text.push_str(" →");
            query.text()
        }
    };

    let token_count = profile.map(|p| p.tokenize(&text).len());
    Ok(PromptArtifact {
        text,
        mode,
        query_codeword: query.clone(),
        expected_answer,
        token_count,
        hypertoken_spans: spans,
    })
}

/// Why a hypertoken occurrence failed verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// No contiguous token subsequence covers exactly this byte span.
    BoundarySplit,
    /// The span is covered, but by different ids than the symbol gets in
    /// isolation.
    ContextMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizationViolation {
    pub byte_start: usize,
    pub byte_end: usize,
    pub symbol: String,
    pub kind: ViolationKind,
}

/// Check every recorded hypertoken span against the profile's tokenization
/// of the full prompt. An empty report means the artifact is clean.
pub fn verify_tokenization(
    artifact: &PromptArtifact,
    profile: &TokenizerProfile,
) -> Vec<TokenizationViolation> {
    let ids = profile.tokenize(&artifact.text);
    // Reconstruct the byte span of each token.
    let mut offsets = Vec::with_capacity(ids.len() + 1);
    let mut pos = 0usize;
    offsets.push(0);
    for &id in &ids {
        let len = profile.token_bytes(id).map(|b| b.len()).unwrap_or(0);
        pos += len;
        offsets.push(pos);
    }

    let mut violations = Vec::new();
    for span in &artifact.hypertoken_spans {
        let start_tok = offsets.iter().position(|&o| o == span.byte_start);
        let end_tok = offsets.iter().position(|&o| o == span.byte_end);
        match (start_tok, end_tok) {
            (Some(a), Some(b)) if a < b => {
                let in_context = &ids[a..b];
                let isolated = profile.tokenize(&span.symbol);
                if in_context != isolated.as_slice() {
                    violations.push(TokenizationViolation {
                        byte_start: span.byte_start,
                        byte_end: span.byte_end,
                        symbol: span.symbol.clone(),
                        kind: ViolationKind::ContextMismatch,
                    });
                }
            }
            _ => violations.push(TokenizationViolation {
                byte_start: span.byte_start,
                byte_end: span.byte_end,
                symbol: span.symbol.clone(),
                kind: ViolationKind::BoundarySplit,
            }),
        }
    }
    violations
}

impl PromptArtifact {
    /// Write `<base>.txt` (prompt text) and `<base>.json` (sidecar).
    pub fn save(&self, base: &Path, query_index: usize) -> Result<()> {
        std::fs::write(base.with_extension("txt"), &self.text)?;
        let sidecar = PromptSidecar {
            mode: self.mode,
            query_index,
            expected_answer: self.expected_answer.clone(),
            token_count: self.token_count,
        };
        std::fs::write(
            base.with_extension("json"),
            serde_json::to_string(&sidecar)?,
        )?;
        Ok(())
    }

    /// Load a saved artifact (text + sidecar). Hypertoken spans are not
    /// persisted; re-compile to verify tokenization.
    pub fn load(base: &Path) -> Result<(Self, PromptSidecar)> {
        let text = std::fs::read_to_string(base.with_extension("txt"))?;
        let sidecar: PromptSidecar =
            serde_json::from_str(&std::fs::read_to_string(base.with_extension("json"))?)?;
        let artifact = PromptArtifact {
            text,
            mode: sidecar.mode,
            query_codeword: Codeword {
                index: sidecar.query_index,
                tokens: vec![],
            },
            expected_answer: sidecar.expected_answer.clone(),
            token_count: sidecar.token_count,
            hypertoken_spans: vec![],
        };
        Ok((artifact, sidecar))
    }
}
