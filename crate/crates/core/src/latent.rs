//! The simulated transformer latent space: seeded random token embeddings,
//! phase-rotated codeword projection, superposition, and additive noise.
//!
//! The projection of a codeword (t₀ … t_{L−1}) is
//!
//! ```text
//! Φ(c) = (1/√L) Σ_p Rᵖ · e(t_p)
//! ```
//!
//! a position-dependent rotation followed by superposition. The rotation R
//! is a seeded random orthogonal transform, so projections preserve norms
//! and token order matters: (a,d) and (d,a) land in different directions.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codebook::Codeword;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, orthonormalize_columns, Matrix};
use crate::scalar::Scalar;
use crate::seeding::tagged_seed;

/// A d-dimensional latent activation vector.
#[derive(Clone, Debug, PartialEq)]
pub struct LatentVector<S> {
    coords: Vec<S>,
}

impl<S: Scalar> LatentVector<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Validation(
                "latent vector must have dimension ≥ 1".into(),
            ));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Validation(
                "latent vector has non-finite entries".into(),
            ));
        }
        Ok(LatentVector { coords })
    }

    pub fn zeros(dim: usize) -> Self {
        LatentVector {
            coords: vec![S::zero(); dim],
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize) -> S) -> Self {
        LatentVector {
            coords: (0..dim).map(f).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.coords
    }

    pub fn dot(&self, other: &Self) -> S {
        dot(&self.coords, &other.coords)
    }

    pub fn norm(&self) -> S {
        norm2(&self.coords).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == S::zero())
    }

    pub fn scale(&self, s: S) -> Self {
        LatentVector {
            coords: self.coords.iter().map(|&c| c * s).collect(),
        }
    }

    /// self += s · other
    pub fn add_scaled(&mut self, other: &Self, s: S) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += s * *b;
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == S::zero() {
            return Err(Error::Degenerate("cannot normalize a zero vector".into()));
        }
        Ok(self.scale(S::one() / n))
    }

    /// Cosine similarity; `None` if either vector is zero.
    pub fn cosine(&self, other: &Self) -> Option<S> {
        let na = self.norm();
        let nb = other.norm();
        if na == S::zero() || nb == S::zero() {
            return None;
        }
        Some(self.dot(other) / (na * nb))
    }
}

/// Seeded random token → latent-vector map (the simulated vocabulary).
///
/// Each token's vector is drawn from a ChaCha stream keyed by
/// (seed, token), so a token keeps its embedding no matter what else is in
/// the vocabulary, so trials that share tokens are comparable.
#[derive(Clone, Debug)]
pub struct EmbeddingTable<S> {
    dim: usize,
    seed: u64,
    sigma_init: S,
    vectors: HashMap<String, LatentVector<S>>,
    order: Vec<String>,
}

impl<S: Scalar> EmbeddingTable<S> {
    /// i.i.d. Gaussian coordinates, mean 0, std 1/√dim.
    pub fn new<T: AsRef<str>>(vocab: &[T], dim: usize, seed: u64) -> Result<Self> {
        let sigma = S::one() / S::from_usize_lossy(dim).sqrt();
        Self::with_sigma(vocab, dim, seed, sigma)
    }

    pub fn with_sigma<T: AsRef<str>>(
        vocab: &[T],
        dim: usize,
        seed: u64,
        sigma_init: S,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Validation(format!("dim must be ≥ 2, got {dim}")));
        }
        if !(sigma_init > S::zero()) {
            return Err(Error::Validation("sigma_init must be > 0".into()));
        }
        let mut vectors = HashMap::with_capacity(vocab.len());
        let mut order = Vec::with_capacity(vocab.len());
        for token in vocab {
            let token = token.as_ref();
            if vectors.contains_key(token) {
                return Err(Error::Validation(format!(
                    "duplicate token {token:?} in vocab"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(tagged_seed(seed, token));
            let v = LatentVector::from_fn(dim, |_| S::standard_normal(&mut rng) * sigma_init);
            vectors.insert(token.to_string(), v);
            order.push(token.to_string());
        }
        Ok(EmbeddingTable {
            dim,
            seed,
            sigma_init,
            vectors,
            order,
        })
    }

    /// Embeddings with induced pairwise coherence ρ: every vector shares a
    /// common component, eᵢ = √ρ·g₀ + √(1−ρ)·gᵢ. Models "ambiguous" content
    /// tokens for baseline comparisons.
    pub fn correlated<T: AsRef<str>>(
        vocab: &[T],
        dim: usize,
        seed: u64,
        coherence: S,
    ) -> Result<Self> {
        if !(coherence >= S::zero() && coherence < S::one()) {
            return Err(Error::Validation("coherence must be in [0, 1)".into()));
        }
        let mut table = Self::new(vocab, dim, seed)?;
        let sigma = table.sigma_init;
        let mut rng = ChaCha8Rng::seed_from_u64(tagged_seed(seed, "\u{0}common-component"));
        let common = LatentVector::from_fn(dim, |_| S::standard_normal(&mut rng) * sigma);
        let w_common = coherence.sqrt();
        let w_own = (S::one() - coherence).sqrt();
        for v in table.vectors.values_mut() {
            let mut mixed = common.scale(w_common);
            mixed.add_scaled(v, w_own);
            *v = mixed;
        }
        Ok(table)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sigma_init(&self) -> S {
        self.sigma_init
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&LatentVector<S>> {
        self.vectors.get(token)
    }

    /// Tokens in insertion order.
    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(String::as_str)
    }
}

/// Build `init_embeddings` per the module contract.
pub fn init_embeddings<S: Scalar, T: AsRef<str>>(
    vocab: &[T],
    dim: usize,
    seed: u64,
) -> Result<EmbeddingTable<S>> {
    EmbeddingTable::new(vocab, dim, seed)
}

/// A seeded random orthogonal transform; the "phase" applied per codeword
/// position.
#[derive(Clone, Debug)]
pub struct PhaseOperator<S> {
    rotation: Matrix<S>,
    seed: u64,
}

impl<S: Scalar> PhaseOperator<S> {
    /// QR-style orthonormalization of a seeded Gaussian matrix.
    pub fn new(dim: usize, seed: u64) -> Result<Self> {
        if dim < 1 {
            return Err(Error::Validation("phase operator needs dim ≥ 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(tagged_seed(seed, "\u{0}phase-operator"));
        let mut m = Matrix::from_fn(dim, dim, |_, _| S::standard_normal(&mut rng));
        orthonormalize_columns(&mut m)?;
        Ok(PhaseOperator { rotation: m, seed })
    }

    pub fn dim(&self) -> usize {
        self.rotation.rows()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rotation(&self) -> &Matrix<S> {
        &self.rotation
    }

    /// R·v
    pub fn apply(&self, v: &LatentVector<S>) -> LatentVector<S> {
        LatentVector {
            coords: self.rotation.matvec(v.as_slice()),
        }
    }

    /// Rᵖ·v by repeated application.
    pub fn apply_power(&self, v: &LatentVector<S>, p: usize) -> LatentVector<S> {
        let mut out = v.clone();
        for _ in 0..p {
            out = self.apply(&out);
        }
        out
    }

    /// ‖R·Rᵀ − I‖_max; ~machine epsilon for a healthy operator.
    pub fn orthogonality_defect(&self) -> S {
        let g = self.rotation.gram();
        let n = g.rows();
        let mut worst = S::zero();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { S::one() } else { S::zero() };
                worst = worst.max((g.get(i, j) - want).abs());
            }
        }
        worst
    }
}

/// Project a codeword into latent space: (1/√L) Σ_p Rᵖ·e(t_p), terms summed
/// in ascending position order for bit-reproducibility.
pub fn project_codeword<S: Scalar>(
    codeword: &Codeword,
    table: &EmbeddingTable<S>,
    phase: &PhaseOperator<S>,
) -> Result<LatentVector<S>> {
    if phase.dim() != table.dim() {
        return Err(Error::Validation(format!(
            "phase dim {} does not match table dim {}",
            phase.dim(),
            table.dim()
        )));
    }
    let len = codeword.len();
    if len == 0 {
        return Err(Error::Validation("cannot project an empty codeword".into()));
    }
    let mut acc = LatentVector::zeros(table.dim());
    for (p, token) in codeword.tokens.iter().enumerate() {
        let e = table
            .get(token)
            .ok_or_else(|| Error::UnknownToken(token.clone()))?;
        let rotated = phase.apply_power(e, p);
        acc.add_scaled(&rotated, S::one());
    }
    Ok(acc.scale(S::one() / S::from_usize_lossy(len).sqrt()))
}

/// Σ αᵢφᵢ plus i.i.d. Gaussian noise of per-coordinate std `noise_sigma`.
/// Terms are accumulated in coefficient order.
pub fn spread_signal<S: Scalar>(
    coeffs: &[S],
    basis: &[LatentVector<S>],
    noise_sigma: S,
    seed: u64,
) -> Result<LatentVector<S>> {
    if coeffs.len() != basis.len() {
        return Err(Error::Validation(format!(
            "{} coefficients for {} basis vectors",
            coeffs.len(),
            basis.len()
        )));
    }
    if basis.is_empty() {
        return Err(Error::Validation("basis must be nonempty".into()));
    }
    if noise_sigma < S::zero() {
        return Err(Error::Validation("noise_sigma must be ≥ 0".into()));
    }
    let dim = basis[0].dim();
    if basis.iter().any(|b| b.dim() != dim) {
        return Err(Error::Validation(
            "basis vectors have mixed dimensions".into(),
        ));
    }
    let mut out = LatentVector::zeros(dim);
    for (a, phi) in coeffs.iter().zip(basis) {
        out.add_scaled(phi, *a);
    }
    if noise_sigma > S::zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in out.coords.iter_mut() {
            *c += S::standard_normal(&mut rng) * noise_sigma;
        }
    }
    Ok(out)
}

/// Add seeded Gaussian noise to a vector; used for noisy query channels.
pub fn add_noise<S: Scalar>(v: &LatentVector<S>, sigma: S, seed: u64) -> LatentVector<S> {
    if sigma <= S::zero() {
        return v.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    LatentVector {
        coords: v
            .coords
            .iter()
            .map(|&c| c + S::standard_normal(&mut rng) * sigma)
            .collect(),
    }
}
