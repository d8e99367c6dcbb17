//! Geometry diagnostics for the latent channel: restricted isometry,
//! Johnson–Lindenstrauss distortion, condition numbers, spectral gap,
//! decode-channel metrics, and coverage.
//!
//! Exact RIP verification is NP-hard; `estimate_rip_delta` is a sampling
//! estimate and is named as such. Norms inside the isometry estimators are
//! summed in canonical (ascending-magnitude) order so that projections
//! that are exact isometries in floating point (the identity, signed
//! permutations) report a deviation of exactly zero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::despread::DecodeResult;
use crate::error::{Error, Result};
use crate::latent::LatentVector;
use crate::linalg::{canonical_norm2, jacobi_eigen, singular_values, Matrix};
use crate::scalar::Scalar;
use crate::seeding::child_seed;

/// Sampled restricted-isometry deviation.
#[derive(Clone, Debug)]
pub struct RipEstimate<S> {
    /// max over samples of |‖Φx‖²/‖x‖² − 1|.
    pub delta: S,
    pub samples: usize,
    pub sparsity_k: usize,
    pub seed: u64,
}

/// Estimate the RIP constant of a projection by sampling k-sparse unit
/// vectors with Gaussian nonzeros.
pub fn estimate_rip_delta<S: Scalar>(
    projection: &Matrix<S>,
    sparsity_k: usize,
    samples: usize,
    seed: u64,
) -> Result<RipEstimate<S>> {
    let dim_in = projection.cols();
    if sparsity_k == 0 || sparsity_k > dim_in {
        return Err(Error::Validation(format!(
            "sparsity k={sparsity_k} must be in 1..={dim_in}"
        )));
    }
    if samples < 1 {
        return Err(Error::Validation("samples must be ≥ 1".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut delta = S::zero();
    let mut support: Vec<usize> = (0..dim_in).collect();
    for _ in 0..samples {
        // Partial Fisher–Yates: the first k entries become the support.
        for i in 0..sparsity_k {
            let j = rng.random_range(i..dim_in);
            support.swap(i, j);
        }
        let mut x = vec![S::zero(); dim_in];
        for &idx in &support[..sparsity_k] {
            x[idx] = S::standard_normal(&mut rng);
        }
        let nx = canonical_norm2(&x);
        if nx == S::zero() {
            continue;
        }
        let y = projection.matvec(&x);
        let ratio = canonical_norm2(&y) / nx;
        delta = delta.max((ratio - S::one()).abs());
    }
    Ok(RipEstimate {
        delta,
        samples,
        sparsity_k,
        seed,
    })
}

/// Johnson–Lindenstrauss distortion over a point set.
#[derive(Clone, Debug)]
pub struct JlReport<S> {
    /// max over pairs of |‖Px_i − Px_j‖²/‖x_i − x_j‖² − 1|.
    pub max_distortion: S,
    pub pairs_checked: usize,
    /// Coincident pairs (zero distance) skipped.
    pub pairs_skipped: usize,
}

pub fn jl_distortion<S: Scalar>(
    points: &[LatentVector<S>],
    projection: &Matrix<S>,
) -> Result<JlReport<S>> {
    if points.len() < 2 {
        return Err(Error::Validation("need at least 2 points".into()));
    }
    let dim = points[0].dim();
    if points.iter().any(|p| p.dim() != dim) {
        return Err(Error::Validation("points have mixed dimensions".into()));
    }
    if projection.cols() != dim {
        return Err(Error::Validation(format!(
            "projection expects dim {}, points have dim {dim}",
            projection.cols()
        )));
    }

    let projected: Vec<Vec<S>> = points
        .iter()
        .map(|p| projection.matvec(p.as_slice()))
        .collect();
    let mut max_distortion = S::zero();
    let mut pairs_checked = 0;
    let mut pairs_skipped = 0;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let dx: Vec<S> = points[i]
                .as_slice()
                .iter()
                .zip(points[j].as_slice())
                .map(|(a, b)| *a - *b)
                .collect();
            let denom = canonical_norm2(&dx);
            if denom == S::zero() {
                pairs_skipped += 1;
                continue;
            }
            let dy: Vec<S> = projected[i]
                .iter()
                .zip(&projected[j])
                .map(|(a, b)| *a - *b)
                .collect();
            let ratio = canonical_norm2(&dy) / denom;
            max_distortion = max_distortion.max((ratio - S::one()).abs());
            pairs_checked += 1;
        }
    }
    Ok(JlReport {
        max_distortion,
        pairs_checked,
        pairs_skipped,
    })
}

/// κ comparison between hypertoken and raw embedding matrices.
#[derive(Clone, Debug)]
pub struct ConditionReport<S> {
    pub kappa_ht: S,
    pub kappa_raw: S,
    /// kappa_ht / kappa_raw.
    pub ratio: S,
    pub ht_rank_deficient: bool,
    pub raw_rank_deficient: bool,
}

/// Condition numbers σ_max/σ_min of both column matrices. A rank-deficient
/// matrix reports κ = ∞ and sets its flag instead of erroring.
pub fn condition_numbers<S: Scalar>(
    ht_matrix: &Matrix<S>,
    raw_matrix: &Matrix<S>,
) -> Result<ConditionReport<S>> {
    let (kappa_ht, ht_rank_deficient) = kappa(ht_matrix)?;
    let (kappa_raw, raw_rank_deficient) = kappa(raw_matrix)?;
    Ok(ConditionReport {
        kappa_ht,
        kappa_raw,
        ratio: kappa_ht / kappa_raw,
        ht_rank_deficient,
        raw_rank_deficient,
    })
}

fn kappa<S: Scalar>(m: &Matrix<S>) -> Result<(S, bool)> {
    let sv = singular_values(m)?;
    let smax = sv[0];
    let smin = sv[sv.len() - 1];
    let floor = smax * S::epsilon() * S::from_usize_lossy(m.rows().max(m.cols()));
    if smin <= floor {
        return Ok((S::infinity(), true));
    }
    Ok((smax / smin, false))
}

/// Second eigenvalue of a k-NN cosine graph against the Ramanujan bound.
#[derive(Clone, Debug)]
pub struct SpectralGapReport<S> {
    pub lambda1: S,
    /// Largest eigenvalue magnitude excluding one copy of λ₁.
    pub lambda2: S,
    /// 2·√(k−1), the Ramanujan bound for a k-regular graph.
    pub ramanujan_bound: S,
}

/// Build the symmetric k-nearest-neighbor cosine graph over the vectors and
/// return its second adjacency eigenvalue magnitude.
pub fn spectral_gap<S: Scalar>(
    vectors: &[LatentVector<S>],
    degree_k: usize,
) -> Result<SpectralGapReport<S>> {
    let n = vectors.len();
    if degree_k == 0 {
        return Err(Error::Validation("degree k must be ≥ 1".into()));
    }
    if degree_k >= n {
        return Err(Error::Validation(format!(
            "degree k={degree_k} requires more than k vectors, got {n}"
        )));
    }

    let mut adjacency = Matrix::zeros(n, n);
    for i in 0..n {
        let mut sims: Vec<(usize, S)> = (0..n)
            .filter(|&j| j != i)
            .map(|j| {
                let c = vectors[i].cosine(&vectors[j]).unwrap_or(S::zero());
                (j, c)
            })
            .collect();
        sims.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .expect("finite cosines")
                .then(a.0.cmp(&b.0))
        });
        for &(j, _) in sims.iter().take(degree_k) {
            adjacency.set(i, j, S::one());
            adjacency.set(j, i, S::one());
        }
    }

    let eig = jacobi_eigen(&adjacency)?;
    let lambda1 = eig.values[0];
    let lambda2 = eig.values[1..]
        .iter()
        .fold(S::zero(), |m, &v| m.max(v.abs()));
    let bound = S::from_usize_lossy(2) * S::from_usize_lossy(degree_k - 1).sqrt();
    Ok(SpectralGapReport {
        lambda1,
        lambda2,
        ramanujan_bound: bound,
    })
}

/// Aggregate decode-channel quality over a batch of ground-truthed runs.
#[derive(Clone, Debug)]
pub struct ChannelMetrics<S> {
    /// Fraction of decodes whose argmax missed the ground truth.
    pub collision_rate: S,
    /// Mean Shannon entropy of the decode distributions, in bits.
    pub decode_entropy_bits: S,
    /// 20·log₁₀(mean margin / noise σ); +∞ when σ = 0.
    pub snr_db: S,
    pub trials: usize,
}

pub fn channel_metrics<S: Scalar>(
    decodes: &[DecodeResult<S>],
    truth: &[usize],
    noise_sigma: S,
) -> Result<ChannelMetrics<S>> {
    if decodes.is_empty() {
        return Err(Error::Validation("need at least one decode run".into()));
    }
    if decodes.len() != truth.len() {
        return Err(Error::Validation(
            "one ground-truth index per decode required".into(),
        ));
    }
    let n = S::from_usize_lossy(decodes.len());
    let mut collisions = 0usize;
    let mut entropy = S::zero();
    let mut margin = S::zero();
    for (d, &t) in decodes.iter().zip(truth) {
        if d.best_index != t {
            collisions += 1;
        }
        entropy += d.entropy_bits();
        margin += d.margin;
    }
    let mean_margin = margin / n;
    let snr_db = if noise_sigma == S::zero() {
        S::infinity()
    } else {
        let twenty = S::from_usize_lossy(20);
        twenty * (mean_margin / noise_sigma).log10()
    };
    Ok(ChannelMetrics {
        collision_rate: S::from_usize_lossy(collisions) / n,
        decode_entropy_bits: entropy / n,
        snr_db,
        trials: decodes.len(),
    })
}

/// Coverage check: does the hypertoken count satisfy |HT| ≥ c·log(1/δ),
/// and what fraction of random unit queries see at least one hypertoken
/// above the visibility threshold θ?
#[derive(Clone, Debug)]
pub struct CoverageReport<S> {
    /// ⌈c·ln(1/δ)⌉, the required hypertoken count.
    pub required: usize,
    pub satisfied: bool,
    pub empirical_coverage: S,
    pub theta: S,
    pub queries: usize,
}

pub fn coverage_estimate<S: Scalar>(
    projections: &[LatentVector<S>],
    c_const: f64,
    delta: f64,
    theta: S,
    queries: usize,
    seed: u64,
) -> Result<CoverageReport<S>> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Validation("delta must be in (0, 1)".into()));
    }
    if !(c_const > 0.0) {
        return Err(Error::Validation("c must be > 0".into()));
    }
    let required = (c_const * (1.0 / delta).ln()).ceil().max(0.0) as usize;
    let count = projections.len();

    if count == 0 {
        return Ok(CoverageReport {
            required,
            satisfied: false,
            empirical_coverage: S::zero(),
            theta,
            queries: 0,
        });
    }

    let dim = projections[0].dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut covered = 0usize;
    for _ in 0..queries {
        let q = LatentVector::from_fn(dim, |_| S::standard_normal(&mut rng));
        let visible = projections
            .iter()
            .any(|p| p.cosine(&q).is_some_and(|c| c.abs() >= theta));
        if visible {
            covered += 1;
        }
    }
    let coverage = if queries == 0 {
        S::zero()
    } else {
        S::from_usize_lossy(covered) / S::from_usize_lossy(queries)
    };
    Ok(CoverageReport {
        required,
        satisfied: count >= required,
        empirical_coverage: coverage,
        theta,
        queries,
    })
}

/// Seeded Gaussian projection with entries N(0, 1/rows); the standard
/// compressed-sensing sensing matrix used by the CLI diagnostics.
pub fn gaussian_projection<S: Scalar>(rows: usize, cols: usize, seed: u64) -> Matrix<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = S::one() / S::from_usize_lossy(rows).sqrt();
    Matrix::from_fn(rows, cols, |_, _| S::standard_normal(&mut rng) * scale)
}

/// A signed permutation of `dim` coordinates: an orthonormal map that is
/// exact in floating point.
pub fn signed_permutation<S: Scalar>(dim: usize, seed: u64) -> Matrix<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..dim).collect();
    for i in (1..dim).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    let mut m = Matrix::zeros(dim, dim);
    for (row, &col) in perm.iter().enumerate() {
        let sign = if rng.random::<bool>() {
            S::one()
        } else {
            -S::one()
        };
        m.set(row, col, sign);
    }
    m
}

/// Quasi-orthogonal hypertoken projections vs coherence-ρ raw embeddings,
/// as column matrices over the same shape. This is the standing comparison
/// population for the conditioning claim.
pub fn comparison_matrices<S: Scalar>(
    dim: usize,
    n: usize,
    raw_coherence: S,
    seed: u64,
) -> Result<(Matrix<S>, Matrix<S>)> {
    use crate::latent::{project_codeword, EmbeddingTable, PhaseOperator};
    use crate::store::{pair_vocabulary, synthetic_pairs};

    let pairs = synthetic_pairs(n, "cmp_");
    let vocab = pair_vocabulary(&pairs);
    let table: EmbeddingTable<S> = EmbeddingTable::new(&vocab, dim, child_seed(seed, 0))?;
    let phase: PhaseOperator<S> = PhaseOperator::new(dim, child_seed(seed, 1))?;
    let ht_cols: Vec<Vec<S>> = pairs
        .iter()
        .map(|p| {
            Ok(project_codeword(&p.key, &table, &phase)?
                .as_slice()
                .to_vec())
        })
        .collect::<Result<_>>()?;

    let raw_vocab: Vec<String> = (0..n).map(|i| format!("raw_{i}")).collect();
    let raw_table: EmbeddingTable<S> =
        EmbeddingTable::correlated(&raw_vocab, dim, child_seed(seed, 2), raw_coherence)?;
    let raw_cols: Vec<Vec<S>> = raw_vocab
        .iter()
        .map(|t| {
            raw_table
                .get(t)
                .expect("constructed vocab")
                .as_slice()
                .to_vec()
        })
        .collect();

    Ok((
        Matrix::from_columns(&ht_cols)?,
        Matrix::from_columns(&raw_cols)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::despread::matched_filter_decode;

    #[test]
    fn rip_of_identity_is_exactly_zero() {
        let p = Matrix::<f64>::identity(16);
        let r = estimate_rip_delta(&p, 4, 100, 0).unwrap();
        assert_eq!(r.delta, 0.0);
    }

    #[test]
    fn rip_of_signed_permutation_is_exactly_zero() {
        let p = signed_permutation::<f64>(16, 1);
        let r = estimate_rip_delta(&p, 4, 100, 2).unwrap();
        assert_eq!(r.delta, 0.0);
    }

    #[test]
    fn rip_rejects_oversized_sparsity() {
        let p = Matrix::<f64>::identity(4);
        assert!(estimate_rip_delta(&p, 5, 10, 0).is_err());
    }

    #[test]
    fn rip_of_gaussian_projection_is_moderate() {
        let p = gaussian_projection::<f64>(64, 256, 3);
        let r = estimate_rip_delta(&p, 4, 500, 4).unwrap();
        assert!(r.delta > 0.0 && r.delta < 1.5, "delta {}", r.delta);
    }

    #[test]
    fn jl_identity_and_signed_permutation_are_exact() {
        let points: Vec<LatentVector<f64>> = (0..8)
            .map(|i| LatentVector::from_fn(16, |j| ((i * 31 + j * 7) % 13) as f64 - 6.0))
            .collect();
        let r = jl_distortion(&points, &Matrix::identity(16)).unwrap();
        assert_eq!(r.max_distortion, 0.0);
        let r = jl_distortion(&points, &signed_permutation(16, 5)).unwrap();
        assert_eq!(r.max_distortion, 0.0);
    }

    #[test]
    fn jl_skips_coincident_points() {
        let a = LatentVector::new(vec![1.0, 2.0]).unwrap();
        let points = vec![
            a.clone(),
            a.clone(),
            LatentVector::new(vec![0.0, 1.0]).unwrap(),
        ];
        let r = jl_distortion(&points, &Matrix::identity(2)).unwrap();
        assert_eq!(r.pairs_skipped, 1);
        assert_eq!(r.pairs_checked, 2);
    }

    #[test]
    fn kappa_of_orthonormal_columns_is_one() {
        let m = Matrix::<f64>::from_columns(&[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 0.0]])
            .unwrap();
        let r = condition_numbers(&m, &m).unwrap();
        assert_eq!(r.kappa_ht, 1.0);
        assert_eq!(r.ratio, 1.0);
        assert!(!r.ht_rank_deficient);
    }

    #[test]
    fn duplicated_column_flags_rank_deficiency() {
        let m = Matrix::<f64>::from_columns(&[vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]]).unwrap();
        let good = Matrix::<f64>::identity(3);
        let r = condition_numbers(&m, &good).unwrap();
        assert!(r.ht_rank_deficient);
        assert!(r.kappa_ht.is_infinite());
        assert!(!r.raw_rank_deficient);
    }

    #[test]
    fn hypertoken_columns_beat_coherent_raw_columns() {
        let (ht, raw) = comparison_matrices::<f64>(256, 16, 0.5, 6).unwrap();
        let r = condition_numbers(&ht, &raw).unwrap();
        assert!(
            r.kappa_ht < r.kappa_raw,
            "kappa_ht {} !< kappa_raw {}",
            r.kappa_ht,
            r.kappa_raw
        );
    }

    #[test]
    fn spectral_gap_of_complete_graph() {
        // Four mutually-similar vectors with k=3 give K4.
        let vectors: Vec<LatentVector<f64>> = (0..4)
            .map(|i| LatentVector::from_fn(8, |j| if j == i { 0.2 } else { 1.0 }))
            .collect();
        let r = spectral_gap(&vectors, 3).unwrap();
        assert!((r.lambda1 - 3.0).abs() < 1e-9);
        assert!((r.lambda2 - 1.0).abs() < 1e-9);
        assert!((r.ramanujan_bound - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn disconnected_cliques_have_zero_gap() {
        // Two orthogonal clusters of 3; k=2 keeps edges in-cluster.
        let mut vectors = Vec::new();
        for c in 0..2 {
            for i in 0..3 {
                vectors.push(LatentVector::<f64>::from_fn(8, |j| {
                    let base = if (j < 4) == (c == 0) { 1.0 } else { 0.0 };
                    base + if j % 3 == i { 0.05 } else { 0.0 }
                }));
            }
        }
        let r = spectral_gap(&vectors, 2).unwrap();
        assert!(
            (r.lambda1 - r.lambda2).abs() < 1e-9,
            "gap {} vs {}",
            r.lambda1,
            r.lambda2
        );
    }

    #[test]
    fn spectral_gap_validates_degree() {
        let vectors: Vec<LatentVector<f64>> = (0..3)
            .map(|i| LatentVector::from_fn(4, |j| (i + j) as f64))
            .collect();
        assert!(spectral_gap(&vectors, 3).is_err());
    }

    #[test]
    fn channel_metrics_on_perfect_runs() {
        let v = LatentVector::new(vec![1.0, 0.0]).unwrap();
        let w = LatentVector::new(vec![0.0, 1.0]).unwrap();
        let projections = vec![v.clone(), w];
        let decodes: Vec<DecodeResult<f64>> = (0..4)
            .map(|_| matched_filter_decode(&v, &projections, 1.0).unwrap())
            .collect();
        let m = channel_metrics(&decodes, &[0, 0, 0, 0], 0.1).unwrap();
        assert_eq!(m.collision_rate, 0.0);
        assert_eq!(m.trials, 4);
        assert!(m.snr_db.is_finite());
        let m = channel_metrics(&decodes, &[1, 1, 1, 1], 0.0).unwrap();
        assert_eq!(m.collision_rate, 1.0);
        assert!(m.snr_db.is_infinite());
    }

    #[test]
    fn entropy_bounded_by_log2_n() {
        let v = LatentVector::new(vec![1.0, 0.0, 0.0]).unwrap();
        let projections = vec![
            v.clone(),
            LatentVector::new(vec![0.0, 1.0, 0.0]).unwrap(),
            LatentVector::new(vec![0.0, 0.0, 1.0]).unwrap(),
        ];
        let d = matched_filter_decode(&v, &projections, 1000.0).unwrap();
        let m = channel_metrics(&[d], &[0], 0.1).unwrap();
        let bound = 3f64.log2();
        assert!(m.decode_entropy_bits <= bound + 1e-9);
        assert!(
            m.decode_entropy_bits > 0.9 * bound,
            "near-uniform at high tau"
        );
    }

    #[test]
    fn coverage_threshold_count_for_half_delta() {
        let projections: Vec<LatentVector<f64>> =
            vec![LatentVector::from_fn(8, |j| if j == 0 { 1.0 } else { 0.0 })];
        let r = coverage_estimate(&projections, 1.0, 0.5, 0.2, 10, 0).unwrap();
        assert_eq!(r.required, 1);
        assert!(r.satisfied);
    }

    #[test]
    fn coverage_with_no_hypertokens() {
        let r = coverage_estimate::<f64>(&[], 1.0, 0.1, 0.2, 100, 0).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.empirical_coverage, 0.0);
    }

    #[test]
    fn coverage_at_the_calibrated_operating_point() {
        // d=64, |HT|=32, θ=0.20: the visibility tail per hypertoken is about
        // 0.11, so 32 independent hypertokens cover ≳97% of random queries.
        let vocab: Vec<String> = (0..32).map(|i| format!("ht{i}")).collect();
        let table: crate::latent::EmbeddingTable<f64> =
            crate::latent::EmbeddingTable::new(&vocab, 64, 7).unwrap();
        let projections: Vec<LatentVector<f64>> = vocab
            .iter()
            .map(|t| table.get(t).unwrap().clone())
            .collect();
        let r = coverage_estimate(&projections, 4.0, 0.05, 0.20, 10_000, 8).unwrap();
        assert!(
            r.empirical_coverage >= 0.95,
            "coverage {}",
            r.empirical_coverage
        );
        assert!(r.satisfied);
    }
}
