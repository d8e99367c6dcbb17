//! Matched-filter despreading and iterative decode refinement.
//!
//! Decoding a latent query against a codebook is correlation detection: the
//! winning index maximizes the cosine between the query and the codeword
//! projections. Cosines (rather than raw inner products) make the decision
//! scale-invariant while leaving the argmax unchanged for equal-norm
//! projections.

use crate::error::{Error, Result};
use crate::latent::LatentVector;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Ranked decode outcome over a candidate set.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult<S> {
    /// Argmax over scores; ties resolve to the lowest index.
    pub best_index: usize,
    /// Per-candidate cosine scores.
    pub scores: Vec<S>,
    /// softmax(scores / τ); sums to 1.
    pub distribution: Vec<S>,
    /// Top score minus runner-up. With a single candidate the runner-up
    /// defaults to the cosine floor −1.
    pub margin: S,
    /// Coherence per refinement step; empty for a plain one-shot decode.
    pub coherence_trace: Vec<S>,
}

impl<S: Scalar> DecodeResult<S> {
    /// Shannon entropy of the decode distribution, in bits.
    pub fn entropy_bits(&self) -> S {
        let ln2 = S::from_usize_lossy(2).ln();
        let mut h = S::zero();
        for &p in &self.distribution {
            if p > S::zero() {
                h -= p * (p.ln() / ln2);
            }
        }
        h
    }
}

/// Decode a query by matched filtering against codeword projections.
///
/// Scores are cosines; the distribution is softmax at temperature `tau`.
/// The query is normalized once up front, so any power-of-two rescaling of
/// the query yields bit-identical output.
pub fn matched_filter_decode<S: Scalar>(
    query: &LatentVector<S>,
    projections: &[LatentVector<S>],
    tau: S,
) -> Result<DecodeResult<S>> {
    if projections.is_empty() {
        return Err(Error::Validation("projection list must be nonempty".into()));
    }
    if !(tau > S::zero()) {
        return Err(Error::Validation("softmax temperature must be > 0".into()));
    }
    let qn = query.norm();
    if qn == S::zero() {
        return Err(Error::Degenerate("decode query is the zero vector".into()));
    }
    let unit_query = query.scale(S::one() / qn);

    let mut scores = Vec::with_capacity(projections.len());
    for (i, p) in projections.iter().enumerate() {
        if p.dim() != query.dim() {
            return Err(Error::Validation(format!(
                "projection {i} has dim {}, query has dim {}",
                p.dim(),
                query.dim()
            )));
        }
        let pn = p.norm();
        if pn == S::zero() {
            return Err(Error::Degenerate(format!("projection {i} has zero norm")));
        }
        scores.push(p.dot(&unit_query) / pn);
    }

    let mut best_index = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best_index] {
            best_index = i;
        }
    }
    let runner_up = scores
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != best_index)
        .map(|(_, &s)| s)
        .fold(-S::one(), S::max);
    let margin = scores[best_index] - runner_up;

    Ok(DecodeResult {
        best_index,
        distribution: softmax(&scores, tau),
        margin,
        scores,
        coherence_trace: Vec::new(),
    })
}

/// Numerically stable softmax of `scores / tau`.
fn softmax<S: Scalar>(scores: &[S], tau: S) -> Vec<S> {
    let max = scores.iter().fold(S::neg_infinity(), |m, &s| m.max(s));
    let exps: Vec<S> = scores.iter().map(|&s| ((s - max) / tau).exp()).collect();
    let mut total = S::zero();
    for &e in &exps {
        total += e;
    }
    exps.into_iter().map(|e| e / total).collect()
}

/// Power-iteration trajectory through the Krylov sequence of a symmetric
/// PSD operator.
#[derive(Clone, Debug)]
pub struct KrylovTrajectory<S> {
    /// Unit-norm iterates; `iterates[0]` is the normalized query.
    pub iterates: Vec<LatentVector<S>>,
    /// Rayleigh quotient of each iterate (same length as `iterates`).
    pub rayleigh: Vec<S>,
    pub converged: bool,
    /// Number of operator applications performed.
    pub steps: usize,
}

impl<S: Scalar> KrylovTrajectory<S> {
    pub fn final_iterate(&self) -> &LatentVector<S> {
        self.iterates
            .last()
            .expect("trajectory holds at least the start")
    }

    /// |coherence| of every iterate against the initial query; the natural
    /// input to `ehrenfest_time`. Saturates at the query's alignment with
    /// the dominant eigenvector, so horizon fits should use the decaying
    /// prefix.
    pub fn coherence_trace(&self) -> Vec<S> {
        let h0 = &self.iterates[0];
        self.iterates
            .iter()
            .map(|h| coherence(h, h0).expect("iterates are unit norm").abs())
            .collect()
    }
}

/// Refine a query toward the dominant eigenvector of `gram` by power
/// iteration: h ← A·h / ‖A·h‖.
///
/// Stops when the iterate moves less than `eps` or after `max_iters`
/// applications. For a symmetric PSD operator the recorded Rayleigh
/// quotients are non-decreasing.
pub fn krylov_refine<S: Scalar>(
    query: &LatentVector<S>,
    gram: &Matrix<S>,
    eps: S,
    max_iters: usize,
) -> Result<KrylovTrajectory<S>> {
    if gram.rows() != gram.cols() {
        return Err(Error::Validation("operator must be square".into()));
    }
    if gram.rows() != query.dim() {
        return Err(Error::Validation(format!(
            "operator dim {} does not match query dim {}",
            gram.rows(),
            query.dim()
        )));
    }
    if !(eps > S::zero()) {
        return Err(Error::Validation("eps must be > 0".into()));
    }
    if max_iters < 1 {
        return Err(Error::Validation("max_iters must be ≥ 1".into()));
    }
    let sym_tol = S::epsilon().sqrt() * gram.max_abs().max(S::one());
    if gram.symmetry_defect() > sym_tol {
        return Err(Error::Validation("operator must be symmetric".into()));
    }

    let h0 = query.normalized()?;
    let rayleigh0 = rayleigh_quotient(gram, &h0);
    let mut iterates = vec![h0];
    let mut rayleigh = vec![rayleigh0];
    let mut converged = false;
    let mut steps = 0;

    for _ in 0..max_iters {
        let prev = iterates.last().expect("nonempty");
        let applied =
            LatentVector::new(gram.matvec(prev.as_slice())).map_err(|_| Error::NullIterate)?;
        let norm = applied.norm();
        if norm == S::zero() {
            return Err(Error::NullIterate);
        }
        let next = applied.scale(S::one() / norm);
        steps += 1;

        let mut delta = S::zero();
        for (a, b) in next.as_slice().iter().zip(prev.as_slice()) {
            let d = *a - *b;
            delta += d * d;
        }
        let delta = delta.sqrt();

        rayleigh.push(rayleigh_quotient(gram, &next));
        iterates.push(next);
        if delta < eps {
            converged = true;
            break;
        }
    }

    Ok(KrylovTrajectory {
        iterates,
        rayleigh,
        converged,
        steps,
    })
}

/// hᵀ·A·h for a unit vector h.
fn rayleigh_quotient<S: Scalar>(a: &Matrix<S>, h: &LatentVector<S>) -> S {
    let ah = a.matvec(h.as_slice());
    let mut acc = S::zero();
    for (x, y) in h.as_slice().iter().zip(&ah) {
        acc += *x * *y;
    }
    acc
}

/// Cosine alignment between an iterated latent state and the initial query.
pub fn coherence<S: Scalar>(h_t: &LatentVector<S>, h_0: &LatentVector<S>) -> Result<S> {
    h_t.cosine(h_0)
        .ok_or_else(|| Error::Degenerate("coherence of a zero vector is undefined".into()))
}

/// Decode horizon from a coherence trace: fit log(cₜ) ≈ −λ̂·t by least
/// squares and return −log(eps)/λ̂.
pub fn ehrenfest_time<S: Scalar>(coherence_trace: &[S], eps: S) -> Result<S> {
    if coherence_trace.len() < 3 {
        return Err(Error::Validation(format!(
            "trace length must be ≥ 3, got {}",
            coherence_trace.len()
        )));
    }
    if !(eps > S::zero() && eps < S::one()) {
        return Err(Error::Validation("eps must be in (0, 1)".into()));
    }
    for &c in coherence_trace {
        if !(c > S::zero() && c <= S::one()) {
            return Err(Error::Domain(format!(
                "trace values must be in (0, 1], got {c}"
            )));
        }
    }

    // Least-squares slope of log(c) against step index.
    let n = S::from_usize_lossy(coherence_trace.len());
    let mut t_mean = S::zero();
    let mut y_mean = S::zero();
    for (t, &c) in coherence_trace.iter().enumerate() {
        t_mean += S::from_usize_lossy(t);
        y_mean += c.ln();
    }
    t_mean /= n;
    y_mean /= n;
    let mut num = S::zero();
    let mut den = S::zero();
    for (t, &c) in coherence_trace.iter().enumerate() {
        let dt = S::from_usize_lossy(t) - t_mean;
        num += dt * (c.ln() - y_mean);
        den += dt * dt;
    }
    let lambda = -(num / den);
    if lambda <= S::from_f64(1e-12).expect("constant fits") {
        return Err(Error::InfiniteHorizon);
    }
    Ok(-eps.ln() / lambda)
}
