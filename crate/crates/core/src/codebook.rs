//! Hypertoken codebooks: product-indexed fixed-length codes and general
//! variable-length sets, with bifix-free, Kraft–McMillan, and Hamming
//! checks.
//!
//! Codewords are sequences of tokens. A codeword set is bifix-free when no
//! member is a prefix or a suffix of a different member (at token
//! granularity); that is what lets a prompt be parsed unambiguously in both
//! the forward (K:V) and reverse (V:K) directions.

use std::collections::BTreeMap;
use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered token alphabet with optional per-symbol prior weights.
#[derive(Clone, Debug, PartialEq)]
pub struct TokenAlphabet {
    symbols: Vec<String>,
    weights: Option<Vec<f64>>,
}

impl TokenAlphabet {
    pub fn new<I, T>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::Validation("alphabet must be nonempty".into()));
        }
        let mut seen = HashSet::new();
        for s in &symbols {
            if !seen.insert(s.as_str()) {
                return Err(Error::Validation(format!(
                    "duplicate symbol {s:?} in alphabet"
                )));
            }
        }
        Ok(TokenAlphabet {
            symbols,
            weights: None,
        })
    }

    /// Attach prior probabilities: each weight must be positive and the sum
    /// must not exceed 1.
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.symbols.len() {
            return Err(Error::Validation("one weight per symbol required".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::Validation("weights must be > 0".into()));
        }
        let total: f64 = weights.iter().sum();
        if total > 1.0 + 1e-12 {
            return Err(Error::Validation(format!(
                "weights sum to {total}, must be ≤ 1"
            )));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.symbols.iter().any(|s| s == token)
    }
}

/// One codeword: an indexed token sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Codeword {
    pub index: usize,
    pub tokens: Vec<String>,
}

impl Codeword {
    pub fn new(index: usize, tokens: Vec<String>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::Validation("codeword must be nonempty".into()));
        }
        Ok(Codeword { index, tokens })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The codeword as it appears in a prompt: tokens concatenated.
    pub fn text(&self) -> String {
        self.tokens.concat()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodebookKind {
    Product,
    General,
}

/// How one codeword embeds in another.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BifixKind {
    Prefix,
    Suffix,
}

/// Witness that codeword `first` is a prefix/suffix of codeword `second`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BifixViolation {
    pub first: usize,
    pub second: usize,
    pub kind: BifixKind,
}

/// A validated codeword set plus its structural metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct Codebook {
    pub alphabets: Vec<TokenAlphabet>,
    pub codewords: Vec<Codeword>,
    pub kind: CodebookKind,
    /// Minimum pairwise Hamming distance; `None` for fewer than 2 codewords
    /// or unequal lengths.
    pub min_distance: Option<usize>,
    pub bifix_free: bool,
    pub bifix_violations: Vec<BifixViolation>,
}

impl Codebook {
    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn codeword(&self, index: usize) -> Option<&Codeword> {
        self.codewords.get(index)
    }

    /// Find a codeword by its token sequence.
    pub fn find(&self, tokens: &[String]) -> Option<&Codeword> {
        self.codewords.iter().find(|c| c.tokens == tokens)
    }

    /// Every distinct token across all alphabets, in alphabet order.
    pub fn vocabulary(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for a in &self.alphabets {
            for s in a.symbols() {
                if seen.insert(s.clone()) {
                    out.push(s.clone());
                }
            }
        }
        out
    }
}

/// Build the first `capacity` codewords of the alphabet product in
/// row-major order (last alphabet varies fastest).
///
/// The ordering makes index ↔ codeword a pure arithmetic bijection: for a
/// two-alphabet code, index i maps to (row i / |A₁|, col i mod |A₁|).
pub fn build_product_codebook(alphabets: Vec<TokenAlphabet>, capacity: usize) -> Result<Codebook> {
    if alphabets.is_empty() {
        return Err(Error::Validation(
            "product codebook needs at least one alphabet".into(),
        ));
    }
    if capacity == 0 {
        return Err(Error::Validation("capacity must be at least 1".into()));
    }
    let mut product: usize = 1;
    for a in &alphabets {
        product = product.saturating_mul(a.len());
    }
    if capacity > product {
        return Err(Error::CapacityExceeded {
            requested: capacity,
            available: product,
        });
    }

    let mut codewords = Vec::with_capacity(capacity);
    for index in 0..capacity {
        let mut tokens = Vec::with_capacity(alphabets.len());
        let mut rem = index;
        // Mixed-radix digits, most significant first.
        for p in 0..alphabets.len() {
            let mut radix = 1usize;
            for a in &alphabets[p + 1..] {
                radix *= a.len();
            }
            let digit = rem / radix;
            rem %= radix;
            tokens.push(alphabets[p].symbols()[digit].clone());
        }
        codewords.push(Codeword { index, tokens });
    }

    let (bifix_free, bifix_violations) = check_bifix_free(&codewords);
    let min_distance = if codewords.len() >= 2 {
        match min_hamming_distance_of(&codewords) {
            Ok(d) => Some(d),
            Err(Error::DuplicateCodeword { .. }) => Some(0),
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    Ok(Codebook {
        alphabets,
        codewords,
        kind: CodebookKind::Product,
        min_distance,
        bifix_free,
        bifix_violations,
    })
}

/// Assemble a general (free-form) codebook from explicit codewords,
/// computing the same metadata as the product constructor.
pub fn build_general_codebook(
    alphabets: Vec<TokenAlphabet>,
    token_lists: Vec<Vec<String>>,
) -> Result<Codebook> {
    if token_lists.is_empty() {
        return Err(Error::Validation(
            "codebook needs at least one codeword".into(),
        ));
    }
    let mut codewords = Vec::with_capacity(token_lists.len());
    for (index, tokens) in token_lists.into_iter().enumerate() {
        let cw = Codeword::new(index, tokens)?;
        for t in &cw.tokens {
            if !alphabets.is_empty() && !alphabets.iter().any(|a| a.contains(t)) {
                return Err(Error::Validation(format!(
                    "token {t:?} of codeword {index} is not in any alphabet"
                )));
            }
        }
        codewords.push(cw);
    }
    let (bifix_free, bifix_violations) = check_bifix_free(&codewords);
    let equal_lengths = codewords.windows(2).all(|w| w[0].len() == w[1].len());
    let min_distance = if codewords.len() >= 2 && equal_lengths {
        match min_hamming_distance_of(&codewords) {
            Ok(d) => Some(d),
            Err(Error::DuplicateCodeword { .. }) => Some(0),
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(Codebook {
        alphabets,
        codewords,
        kind: CodebookKind::General,
        min_distance,
        bifix_free,
        bifix_violations,
    })
}

/// True iff no codeword is a (proper or improper) prefix or suffix of a
/// different codeword. Violations list every offending ordered pair;
/// duplicates show up as both prefix and suffix hits.
pub fn check_bifix_free(codewords: &[Codeword]) -> (bool, Vec<BifixViolation>) {
    let mut violations = Vec::new();
    for (i, a) in codewords.iter().enumerate() {
        for (j, b) in codewords.iter().enumerate() {
            if i == j || a.len() > b.len() {
                continue;
            }
            if b.tokens[..a.len()] == a.tokens[..] {
                violations.push(BifixViolation {
                    first: i,
                    second: j,
                    kind: BifixKind::Prefix,
                });
            }
            if b.tokens[b.len() - a.len()..] == a.tokens[..] {
                violations.push(BifixViolation {
                    first: i,
                    second: j,
                    kind: BifixKind::Suffix,
                });
            }
        }
    }
    (violations.is_empty(), violations)
}

/// Σᵢ q^(−|cᵢ|): ≤ 1 is the Kraft–McMillan necessary condition for unique
/// decodability over a q-ary alphabet.
///
/// Lengths are grouped before dividing so that closed-form cases (a full
/// q-ary product code) come out exact.
pub fn kraft_mcmillan_sum(codewords: &[Codeword], alphabet_size: usize) -> Result<f64> {
    if alphabet_size < 2 {
        return Err(Error::Validation(format!(
            "alphabet size must be ≥ 2, got {alphabet_size}"
        )));
    }
    if codewords.is_empty() {
        return Err(Error::Validation("codeword list must be nonempty".into()));
    }
    let mut by_length: BTreeMap<usize, u64> = BTreeMap::new();
    for c in codewords {
        if c.is_empty() {
            return Err(Error::Validation("codeword lengths must be ≥ 1".into()));
        }
        *by_length.entry(c.len()).or_insert(0) += 1;
    }
    let q = alphabet_size as f64;
    let mut sum = 0.0;
    for (len, count) in by_length {
        sum += count as f64 / q.powi(len as i32);
    }
    Ok(sum)
}

fn min_hamming_distance_of(codewords: &[Codeword]) -> Result<usize> {
    let len = codewords[0].len();
    if codewords.iter().any(|c| c.len() != len) {
        return Err(Error::Validation(
            "Hamming distance requires equal-length codewords".into(),
        ));
    }
    let mut best: Option<usize> = None;
    for i in 0..codewords.len() {
        for j in (i + 1)..codewords.len() {
            let d = codewords[i]
                .tokens
                .iter()
                .zip(&codewords[j].tokens)
                .filter(|(a, b)| a != b)
                .count();
            if d == 0 {
                return Err(Error::DuplicateCodeword {
                    first: i,
                    second: j,
                });
            }
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    Ok(best.expect("at least one pair"))
}

/// Minimum pairwise Hamming distance of an equal-length codebook.
pub fn min_hamming_distance(codebook: &Codebook) -> Result<usize> {
    if codebook.codewords.len() < 2 {
        return Err(Error::UndefinedDistance(codebook.codewords.len()));
    }
    min_hamming_distance_of(&codebook.codewords)
}

/// On-disk JSON shape. Field names are declared in sorted order so the
/// serialized bytes are stable across save/load round trips.
#[derive(Serialize, Deserialize)]
struct CodebookFile {
    alphabets: Vec<Vec<String>>,
    bifix_free: bool,
    codewords: Vec<Codeword>,
    kind: CodebookKind,
    min_distance: Option<usize>,
}

impl Codebook {
    pub fn to_json(&self) -> Result<String> {
        let file = CodebookFile {
            alphabets: self
                .alphabets
                .iter()
                .map(|a| a.symbols().to_vec())
                .collect(),
            bifix_free: self.bifix_free,
            codewords: self.codewords.clone(),
            kind: self.kind,
            min_distance: self.min_distance,
        };
        Ok(serde_json::to_string(&file)?)
    }

    /// Parse and re-validate: indices must be 0..n−1, product codewords must
    /// draw token p from alphabet p, and the stored flags must agree with
    /// recomputation.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: CodebookFile = serde_json::from_str(text)?;
        let alphabets = file
            .alphabets
            .into_iter()
            .map(TokenAlphabet::new)
            .collect::<Result<Vec<_>>>()?;
        for (i, c) in file.codewords.iter().enumerate() {
            if c.index != i {
                return Err(Error::Validation(format!(
                    "codeword at position {i} carries index {}",
                    c.index
                )));
            }
            if c.is_empty() {
                return Err(Error::Validation(format!("codeword {i} is empty")));
            }
            if file.kind == CodebookKind::Product {
                if c.len() != alphabets.len() {
                    return Err(Error::Validation(format!(
                        "product codeword {i} has length {}, expected {}",
                        c.len(),
                        alphabets.len()
                    )));
                }
                for (p, t) in c.tokens.iter().enumerate() {
                    if !alphabets[p].contains(t) {
                        return Err(Error::Validation(format!(
                            "token {t:?} at position {p} of codeword {i} is not in alphabet {p}"
                        )));
                    }
                }
            }
        }
        let (bifix_free, bifix_violations) = check_bifix_free(&file.codewords);
        if bifix_free != file.bifix_free {
            return Err(Error::Validation(format!(
                "stored bifix_free={} disagrees with recomputed {}",
                file.bifix_free, bifix_free
            )));
        }
        Ok(Codebook {
            alphabets,
            codewords: file.codewords,
            kind: file.kind,
            min_distance: file.min_distance,
            bifix_free,
            bifix_violations,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphabet(symbols: &[&str]) -> TokenAlphabet {
        TokenAlphabet::new(symbols.iter().copied()).unwrap()
    }

    fn words(lists: &[&[&str]]) -> Vec<Codeword> {
        lists
            .iter()
            .enumerate()
            .map(|(i, toks)| Codeword {
                index: i,
                tokens: toks.iter().map(|t| t.to_string()).collect(),
            })
            .collect()
    }

    #[test]
    fn product_2x2_matches_row_major_order() {
        let cb = build_product_codebook(vec![alphabet(&["r1", "r2"]), alphabet(&["s1", "s2"])], 4)
            .unwrap();
        let texts: Vec<String> = cb.codewords.iter().map(|c| c.text()).collect();
        assert_eq!(texts, vec!["r1s1", "r1s2", "r2s1", "r2s2"]);
        assert!(cb.bifix_free);
        assert_eq!(cb.min_distance, Some(1));
    }

    #[test]
    fn product_3x3_puts_ad_at_index_zero() {
        let cb = build_product_codebook(
            vec![alphabet(&["a", "b", "c"]), alphabet(&["d", "e", "f"])],
            9,
        )
        .unwrap();
        assert_eq!(cb.codewords[0].tokens, vec!["a", "d"]);
        assert_eq!(cb.codewords[4].tokens, vec!["b", "e"]);
        assert_eq!(cb.min_distance, Some(1));
    }

    #[test]
    fn single_symbol_product() {
        let cb = build_product_codebook(vec![alphabet(&["x"])], 1).unwrap();
        assert_eq!(cb.codewords.len(), 1);
        assert_eq!(cb.codewords[0].tokens, vec!["x"]);
        assert_eq!(cb.min_distance, None);
    }

    #[test]
    fn capacity_over_product_size_errors() {
        let err = build_product_codebook(vec![alphabet(&["a", "b"])], 3).unwrap_err();
        assert!(matches!(
            err,
            Error::CapacityExceeded {
                requested: 3,
                available: 2
            }
        ));
    }

    #[test]
    fn duplicate_symbols_rejected() {
        assert!(TokenAlphabet::new(["a", "a"]).is_err());
    }

    #[test]
    fn capacity_prefix_keeps_row_major_order() {
        let cb = build_product_codebook(
            vec![alphabet(&["a", "b", "c"]), alphabet(&["d", "e", "f"])],
            5,
        )
        .unwrap();
        let texts: Vec<String> = cb.codewords.iter().map(|c| c.text()).collect();
        assert_eq!(texts, vec!["ad", "ae", "af", "bd", "be"]);
    }

    #[test]
    fn build_is_deterministic() {
        let mk = || {
            build_product_codebook(
                vec![alphabet(&["a", "b", "c"]), alphabet(&["d", "e", "f"])],
                9,
            )
            .unwrap()
        };
        assert_eq!(mk(), mk());
    }

    #[test]
    fn fixed_length_distinct_codewords_are_bifix_free() {
        let cws = words(&[&["a", "d"], &["a", "e"], &["b", "d"], &["b", "e"]]);
        let (ok, v) = check_bifix_free(&cws);
        assert!(ok);
        assert!(v.is_empty());
    }

    #[test]
    fn prefix_violation_is_reported() {
        let cws = words(&[&["a"], &["a", "b"]]);
        let (ok, v) = check_bifix_free(&cws);
        assert!(!ok);
        assert_eq!(
            v,
            vec![BifixViolation {
                first: 0,
                second: 1,
                kind: BifixKind::Prefix
            }]
        );
    }

    #[test]
    fn suffix_violation_is_reported() {
        let cws = words(&[&["b"], &["a", "b"]]);
        let (ok, v) = check_bifix_free(&cws);
        assert!(!ok);
        assert_eq!(
            v,
            vec![BifixViolation {
                first: 0,
                second: 1,
                kind: BifixKind::Suffix
            }]
        );
    }

    #[test]
    fn duplicates_are_violations() {
        let cws = words(&[&["a", "b"], &["a", "b"]]);
        let (ok, v) = check_bifix_free(&cws);
        assert!(!ok);
        // Each direction is both a prefix and a suffix of the other.
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn kraft_closed_forms() {
        let four = words(&[&["0", "0"], &["0", "1"], &["1", "0"], &["1", "1"]]);
        assert_eq!(kraft_mcmillan_sum(&four, 2).unwrap(), 1.0);

        let cb = build_product_codebook(
            vec![alphabet(&["a", "b", "c"]), alphabet(&["d", "e", "f"])],
            9,
        )
        .unwrap();
        assert_eq!(kraft_mcmillan_sum(&cb.codewords, 3).unwrap(), 1.0);

        let mixed = words(&[&["0"], &["1", "0"], &["1", "1", "0"], &["1", "1", "1"]]);
        assert_eq!(kraft_mcmillan_sum(&mixed, 2).unwrap(), 1.0);
    }

    #[test]
    fn kraft_rejects_unary_alphabet() {
        let cws = words(&[&["0"]]);
        assert!(kraft_mcmillan_sum(&cws, 1).is_err());
    }

    #[test]
    fn min_distance_of_full_product_is_one() {
        let cb = build_product_codebook(
            vec![alphabet(&["a", "b", "c"]), alphabet(&["d", "e", "f"])],
            9,
        )
        .unwrap();
        assert_eq!(min_hamming_distance(&cb).unwrap(), 1);
    }

    #[test]
    fn repetition_style_code_distance() {
        let cb = build_general_codebook(
            vec![alphabet(&["a", "b"])],
            vec![vec!["a".into(), "a".into()], vec!["b".into(), "b".into()]],
        )
        .unwrap();
        assert_eq!(min_hamming_distance(&cb).unwrap(), 2);
    }

    #[test]
    fn duplicate_codewords_error_on_distance() {
        let cws = words(&[&["a", "d"], &["a", "d"]]);
        let err = min_hamming_distance_of(&cws).unwrap_err();
        assert!(matches!(
            err,
            Error::DuplicateCodeword {
                first: 0,
                second: 1
            }
        ));
    }

    #[test]
    fn distance_needs_two_codewords() {
        let cb = build_product_codebook(vec![alphabet(&["x"])], 1).unwrap();
        assert!(matches!(
            min_hamming_distance(&cb),
            Err(Error::UndefinedDistance(1))
        ));
    }

    #[test]
    fn distance_rejects_unequal_lengths() {
        let cws = words(&[&["a"], &["a", "b"]]);
        assert!(matches!(
            min_hamming_distance_of(&cws),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        let cb = build_product_codebook(vec![alphabet(&["r1", "r2"]), alphabet(&["s1", "s2"])], 4)
            .unwrap();
        let a = cb.to_json().unwrap();
        let reloaded = Codebook::from_json(&a).unwrap();
        let b = reloaded.to_json().unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"kind\":\"product\""));
        assert!(a.contains("\"bifix_free\":true"));
    }

    #[test]
    fn json_rejects_tampered_flag() {
        let cb = build_product_codebook(vec![alphabet(&["r1", "r2"]), alphabet(&["s1", "s2"])], 4)
            .unwrap();
        let tampered = cb
            .to_json()
            .unwrap()
            .replace("\"bifix_free\":true", "\"bifix_free\":false");
        assert!(Codebook::from_json(&tampered).is_err());
    }

    #[test]
    fn json_rejects_index_gaps() {
        let text = r#"{"alphabets":[["a","b"]],"bifix_free":true,"codewords":[{"index":1,"tokens":["a"]}],"kind":"product","min_distance":null}"#;
        assert!(Codebook::from_json(text).is_err());
    }

    #[test]
    fn weights_validated() {
        let a = alphabet(&["x", "y"]);
        assert!(a.clone().with_weights(vec![0.5, 0.4]).is_ok());
        assert!(a.clone().with_weights(vec![0.9, 0.4]).is_err());
        assert!(a.clone().with_weights(vec![0.5, 0.0]).is_err());
        assert!(a.with_weights(vec![0.5]).is_err());
    }
}
