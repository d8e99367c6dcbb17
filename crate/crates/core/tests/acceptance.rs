//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Thresholds marked "oracle-fixed" were pinned by a pre-registered Monte
//! Carlo run before the tests were frozen; every other tolerance is exact
//! or analytic. Run with `cargo test --test acceptance -- --nocapture` to
//! see the per-criterion lines.

use hdram_core::bench::{
    emit_report, run_llm_bench, run_sim_bench, Arm, BenchConfig, ChatEndpoint, ChatRequest,
};
use hdram_core::codebook::{
    build_product_codebook, check_bifix_free, kraft_mcmillan_sum, Codeword, TokenAlphabet,
};
use hdram_core::despread::{ehrenfest_time, krylov_refine, matched_filter_decode};
use hdram_core::diagnostics::{
    comparison_matrices, condition_numbers, estimate_rip_delta, gaussian_projection, jl_distortion,
    signed_permutation,
};
use hdram_core::latent::{add_noise, EmbeddingTable, LatentVector, PhaseOperator};
use hdram_core::linalg::{jacobi_eigen, orthonormalize_columns, Matrix};
use hdram_core::seeding::child_seed;
use hdram_core::store::{
    lookup_kv_latent, lookup_vk_latent, pair_vocabulary, store, synthetic_pairs,
};

fn pass(criterion: &str) {
    println!("acceptance {criterion}: PASS");
}

// --- 1. Bifix-free oracle equivalence ---------------------------------

/// Enumerate every set of distinct binary strings with total length ≤ 12
/// and compare `check_bifix_free` against a string-level substring oracle.
#[test]
fn criterion_01_bifix_oracle_equivalence() {
    // Universe: all strings over {a, b} of length 1..=12, ordered by
    // (length, lex) so the budget prunes the recursion.
    let mut universe: Vec<String> = Vec::new();
    for len in 1..=12usize {
        for idx in 0..(1u32 << len) {
            let s: String = (0..len)
                .map(|b| {
                    if idx >> (len - 1 - b) & 1 == 0 {
                        'a'
                    } else {
                        'b'
                    }
                })
                .collect();
            universe.push(s);
        }
    }

    fn oracle_bifix_free(set: &[&String]) -> bool {
        for (i, x) in set.iter().enumerate() {
            for (j, y) in set.iter().enumerate() {
                if i != j && (y.starts_with(x.as_str()) || y.ends_with(x.as_str())) {
                    return false;
                }
            }
        }
        true
    }

    fn to_codewords(set: &[&String]) -> Vec<Codeword> {
        set.iter()
            .enumerate()
            .map(|(i, s)| Codeword {
                index: i,
                tokens: s.chars().map(|c| c.to_string()).collect(),
            })
            .collect()
    }

    let mut sets_checked = 0u64;
    let mut stack: Vec<&String> = Vec::new();
    fn recurse<'a>(
        universe: &'a [String],
        start: usize,
        budget: usize,
        stack: &mut Vec<&'a String>,
        sets_checked: &mut u64,
    ) {
        for i in start..universe.len() {
            let len = universe[i].len();
            if len > budget {
                break; // universe is sorted by length
            }
            stack.push(&universe[i]);
            let (got, _) = check_bifix_free(&to_codewords(stack));
            let want = oracle_bifix_free(stack);
            assert_eq!(got, want, "disagreement on {stack:?}");
            *sets_checked += 1;
            recurse(universe, i + 1, budget - len, stack, sets_checked);
            stack.pop();
        }
    }
    recurse(&universe, 0, 12, &mut stack, &mut sets_checked);
    assert_eq!(sets_checked, 146_573, "enumeration covered every set");
    pass("01 bifix-free oracle equivalence (146573 sets)");
}

// --- 2. Kraft–McMillan closed forms ------------------------------------

#[test]
fn criterion_02_kraft_mcmillan_closed_forms() {
    for q in [2usize, 3, 5] {
        for len in [1usize, 2, 3] {
            let alphabets: Vec<TokenAlphabet> = (0..len)
                .map(|p| TokenAlphabet::new((0..q).map(|i| format!("p{p}s{i}"))).unwrap())
                .collect();
            let cb = build_product_codebook(alphabets, q.pow(len as u32)).unwrap();
            let sum = kraft_mcmillan_sum(&cb.codewords, q).unwrap();
            assert_eq!(sum, 1.0, "q={q} L={len} gave {sum}");
        }
    }
    pass("02 Kraft-McMillan closed forms exact for q in {2,3,5}, L in {1,2,3}");
}

// --- 3. Noise-free exact recall ----------------------------------------

#[test]
fn criterion_03_noise_free_exact_recall() {
    for seed in 0..20u64 {
        let pairs = synthetic_pairs(16, "acc3_");
        let vocab = pair_vocabulary(&pairs);
        let table: EmbeddingTable<f64> =
            EmbeddingTable::new(&vocab, 64, child_seed(seed, 0)).unwrap();
        let phase = PhaseOperator::new(64, child_seed(seed, 1)).unwrap();
        let bank = store(&pairs, &table, &phase).unwrap();
        for i in 0..16 {
            let kv = lookup_kv_latent(&bank, &bank.key_projections()[i], 1.0).unwrap();
            assert_eq!(kv.best_index, i, "seed {seed} forward key {i}");
            let vk = lookup_vk_latent(&bank, &bank.value_projections()[i], 1.0).unwrap();
            assert_eq!(vk.best_index, i, "seed {seed} reverse value {i}");
        }
    }
    pass("03 noise-free recall 100% forward and reverse (d=64, n=16, 20 seeds)");
}

// --- 4. Decode scale invariance -----------------------------------------

#[test]
fn criterion_04_decode_scale_invariance() {
    use rand::{Rng, SeedableRng};
    let vocab: Vec<String> = (0..16).map(|i| format!("p{i}")).collect();
    let table: EmbeddingTable<f64> = EmbeddingTable::new(&vocab, 64, 404).unwrap();
    let projections: Vec<LatentVector<f64>> = vocab
        .iter()
        .map(|t| table.get(t).unwrap().clone())
        .collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(405);
    for _ in 0..1000 {
        let query = LatentVector::<f64>::from_fn(64, |_| rng.random_range(-1.0..1.0));
        // Random positive dyadic scale: exactly representable, so the
        // rescaled query is exactly s·q and bitwise invariance is defined.
        let scale = 2f64.powi(rng.random_range(-20..=20));
        let base = matched_filter_decode(&query, &projections, 1.0).unwrap();
        let scaled = matched_filter_decode(&query.scale(scale), &projections, 1.0).unwrap();
        assert_eq!(base.best_index, scaled.best_index);
        assert_eq!(
            base.scores, scaled.scores,
            "scores drifted at scale {scale}"
        );
        assert_eq!(base.distribution, scaled.distribution);
    }
    pass("04 decode scale invariance bit-exact over 1000 dyadic rescalings");
}

// --- 5. Krylov vs dense eigensolver oracle ------------------------------

#[test]
fn criterion_05_krylov_matches_dense_oracle() {
    use rand::{Rng, SeedableRng};
    for seed in 0..100u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9000 + seed);
        let dim = 64;
        // Random orthogonal basis.
        let mut q = Matrix::<f64>::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
        orthonormalize_columns(&mut q).unwrap();
        // Spectrum with eigengap ≥ 0.1: λ₁=1, everything else ≤ 0.9.
        let lambda2: f64 = rng.random_range(0.0..0.9);
        let mut rest: Vec<f64> = (0..dim - 1)
            .map(|_| rng.random_range(0.0..1.0) * lambda2)
            .collect();
        rest.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut spectrum = vec![1.0];
        spectrum.extend(rest);
        // A = Q Λ Qᵀ, symmetrized by construction.
        let mut scaled = q.clone();
        for j in 0..dim {
            for i in 0..dim {
                scaled.set(i, j, q.get(i, j) * spectrum[j]);
            }
        }
        let a = scaled.matmul(&q.transpose());
        let a = Matrix::from_fn(dim, dim, |i, j| (a.get(i, j) + a.get(j, i)) / 2.0);

        let query = LatentVector::<f64>::from_fn(dim, |_| rng.random_range(-1.0..1.0));
        let traj = krylov_refine(&query, &a, 1e-12, 200).unwrap();
        assert!(traj.steps <= 200);
        for w in traj.rayleigh.windows(2) {
            assert!(w[1] >= w[0] - 1e-9, "seed {seed}: Rayleigh decreased");
        }

        let dense = jacobi_eigen(&a).unwrap();
        let top = LatentVector::new(dense.vectors.column(0)).unwrap();
        let cos = traj.final_iterate().cosine(&top).unwrap().abs();
        assert!(cos >= 0.999, "seed {seed}: |cosine| {cos}");
    }
    pass("05 Krylov power iteration matches dense eigensolver (100 PSD matrices)");
}

// --- 6. Round-trip bidirectionality -------------------------------------

#[test]
fn criterion_06_round_trip_bidirectionality() {
    let sigma = 0.05;
    let n = 16;
    let trials = 1000;
    let mut hits = 0usize;
    let mut bank_cache = None;
    for t in 0..trials {
        let bank_index = (t / n) as u64;
        if bank_cache
            .as_ref()
            .map(|(i, _)| *i != bank_index)
            .unwrap_or(true)
        {
            let pairs = synthetic_pairs(n, "acc6_");
            let vocab = pair_vocabulary(&pairs);
            let table: EmbeddingTable<f64> =
                EmbeddingTable::new(&vocab, 256, child_seed(606, bank_index)).unwrap();
            let phase = PhaseOperator::new(256, child_seed(607, bank_index)).unwrap();
            bank_cache = Some((bank_index, store(&pairs, &table, &phase).unwrap()));
        }
        let (_, bank) = bank_cache.as_ref().unwrap();
        let key = t % n;
        let fwd_query = add_noise(
            &bank.key_projections()[key],
            sigma,
            child_seed(608, t as u64),
        );
        let value = lookup_kv_latent(bank, &fwd_query, 1.0).unwrap().best_index;
        let rev_query = add_noise(
            &bank.value_projections()[value],
            sigma,
            child_seed(609, t as u64),
        );
        let recovered = lookup_vk_latent(bank, &rev_query, 1.0).unwrap().best_index;
        if recovered == key {
            hits += 1;
        }
    }
    let rate = hits as f64 / trials as f64;
    // Threshold fixed by the pre-registered oracle run (observed 1.000).
    assert!(rate >= 0.99, "round-trip rate {rate}");
    pass("06 round-trip lookup_vk∘lookup_kv ≥ 99% (d=256, n=16, σ=0.05)");
}

// --- 7. RIP/JL isometry zeros and the Gaussian bound ---------------------

#[test]
fn criterion_07_rip_jl_isometry_zeros_and_gaussian_bound() {
    // Exact zeros: identity and signed-permutation (floating-point-exact
    // orthonormal) projections.
    let identity = Matrix::<f64>::identity(32);
    assert_eq!(estimate_rip_delta(&identity, 4, 200, 7).unwrap().delta, 0.0);
    let perm = signed_permutation::<f64>(32, 8);
    assert_eq!(estimate_rip_delta(&perm, 4, 200, 9).unwrap().delta, 0.0);

    let points: Vec<LatentVector<f64>> = (0..12)
        .map(|i| LatentVector::from_fn(32, |j| ((i * 13 + j * 5) % 17) as f64 - 8.0))
        .collect();
    assert_eq!(
        jl_distortion(&points, &identity).unwrap().max_distortion,
        0.0
    );
    assert_eq!(jl_distortion(&points, &perm).unwrap().max_distortion, 0.0);

    // A QR-derived rotation is orthonormal only to machine precision.
    let phase: PhaseOperator<f64> = PhaseOperator::new(32, 10).unwrap();
    let rip_rot = estimate_rip_delta(phase.rotation(), 4, 200, 11).unwrap();
    assert!(rip_rot.delta <= 1e-12, "rotation delta {}", rip_rot.delta);

    // Gaussian 256→64, k=4, 500 samples. ‖Px‖² follows χ²₆₄/64, whose
    // 500-sample max concentrates near 0.6, so the pre-registered oracle
    // fixed the per-seed bound at 0.9 (observed max 0.844).
    let mut within = 0;
    for seed in 0..100u64 {
        let p = gaussian_projection::<f64>(64, 256, 700 + seed);
        let r = estimate_rip_delta(&p, 4, 500, 800 + seed).unwrap();
        if r.delta <= 0.9 {
            within += 1;
        }
    }
    assert!(
        within >= 95,
        "only {within}/100 seeds within the oracle bound"
    );
    pass("07 RIP/JL exact zeros; Gaussian 256->64 delta ≤ 0.9 in ≥95/100 seeds");
}

// --- 8. Conditioning claim ------------------------------------------------

#[test]
fn criterion_08_hypertoken_conditioning_beats_raw() {
    for seed in 0..100u64 {
        let (ht, raw) = comparison_matrices::<f64>(256, 16, 0.5, seed).unwrap();
        let r = condition_numbers(&ht, &raw).unwrap();
        assert!(
            !r.ht_rank_deficient && !r.raw_rank_deficient,
            "seed {seed} rank-deficient"
        );
        assert!(
            r.kappa_ht < r.kappa_raw,
            "seed {seed}: kappa_ht {} !< kappa_raw {}",
            r.kappa_ht,
            r.kappa_raw
        );
    }
    pass("08 kappa(HT) < kappa(raw) in 100/100 seeds (d=256, n=16, coherence 0.5)");
}

// --- 9. Collision monotonicity in noise ----------------------------------

fn hypertoken_collision_rates(sigmas: &[f64]) -> Vec<f64> {
    let config = BenchConfig {
        seed: 909,
        dims: vec![64],
        pair_counts: vec![32],
        sigmas: sigmas.to_vec(),
        trials: 313, // 313 rounds × 32 keys ≈ 10 000 decode trials per σ
        tau: 1.0,
        output_path: String::new(),
        endpoint: None,
        timestamp: Some("acceptance".into()),
    };
    let report = run_sim_bench(&config).unwrap();
    sigmas
        .iter()
        .map(|&s| {
            report
                .rows
                .iter()
                .find(|r| r.arm == Arm::Hypertoken && r.sigma == s)
                .expect("row exists")
                .collision_rate
        })
        .collect()
}

#[test]
fn criterion_09_collision_rate_monotone_in_sigma() {
    let sigmas = [0.05, 0.1, 0.2, 0.4];
    let rates = hypertoken_collision_rates(&sigmas);
    let trials = 313.0 * 32.0;
    for (i, w) in rates.windows(2).enumerate() {
        // Strict increase up to 2σ Monte Carlo slack on the difference.
        let se = ((w[0] * (1.0 - w[0]) + w[1] * (1.0 - w[1])) / trials).sqrt();
        assert!(
            w[1] - w[0] > -2.0 * se,
            "collision rate fell from {} to {} between sigma {} and {}",
            w[0],
            w[1],
            sigmas[i],
            sigmas[i + 1]
        );
    }
    // The overall climb is far outside Monte Carlo error.
    let se_ends = ((rates[0] * (1.0 - rates[0]) + rates[3] * (1.0 - rates[3])) / trials).sqrt();
    assert!(
        rates[3] - rates[0] > 2.0 * se_ends,
        "no significant increase: {rates:?}"
    );
    println!("  collision rates over sigma {sigmas:?}: {rates:?}");
    pass("09 collision rate strictly increases across sigma (d=64, n=32, ~10k trials each)");
}

// --- 10. ECC-on vs ECC-off collision reduction ---------------------------

#[test]
fn criterion_10_hypertoken_halves_baseline_collisions() {
    let config = BenchConfig {
        seed: 1010,
        dims: vec![64],
        pair_counts: vec![32],
        sigmas: vec![0.3],
        trials: 313,
        tau: 1.0,
        output_path: String::new(),
        endpoint: None,
        timestamp: Some("acceptance".into()),
    };
    let report = run_sim_bench(&config).unwrap();
    let rate_of = |arm: Arm| {
        report
            .rows
            .iter()
            .find(|r| r.arm == arm)
            .expect("row exists")
            .collision_rate
    };
    let ht = rate_of(Arm::Hypertoken);
    let baseline = rate_of(Arm::Baseline);
    println!("  hypertoken collisions {ht:.4}, baseline {baseline:.4}");
    assert!(
        ht <= 0.5 * baseline,
        "hypertoken rate {ht} not ≤ 50% of baseline {baseline}"
    );
    pass("10 hypertoken arm collision rate ≤ 50% of baseline (d=64, n=32, σ=0.3)");
}

// --- 11. Ehrenfest analytic case ------------------------------------------

#[test]
fn criterion_11_ehrenfest_analytic_case() {
    let trace: Vec<f64> = (0..12).map(|t| (-0.5 * t as f64).exp()).collect();
    let te = ehrenfest_time(&trace, 0.01).unwrap();
    assert!((te - 9.2103).abs() <= 1e-3, "T_E {te}");
    pass("11 Ehrenfest time of exact exponential trace = 9.2103 ± 1e-3");
}

// --- 12. Harness self-test -------------------------------------------------

struct EchoExpected;
impl ChatEndpoint for EchoExpected {
    fn complete(&self, request: &ChatRequest) -> Result<String, hdram_core::bench::EndpointError> {
        // The fixture prompt carries its expected answer as the payload of
        // its single association line.
        Ok(request.messages[0]
            .content
            .lines()
            .next()
            .and_then(|l| l.split_once(": "))
            .map(|(_, v)| v.to_string())
            .unwrap_or_default())
    }
}

struct AlwaysEmpty;
impl ChatEndpoint for AlwaysEmpty {
    fn complete(&self, _: &ChatRequest) -> Result<String, hdram_core::bench::EndpointError> {
        Ok(String::new())
    }
}

#[test]
fn criterion_12_harness_self_test() {
    use hdram_core::bench::{EndpointConfig, LlmPrompt, ReportFormat};
    use hdram_core::promptc::PromptMode;

    let prompts: Vec<LlmPrompt> = (0..4)
        .map(|i| LlmPrompt {
            text: format!("k{i}: payload_{i}\nk{i}:"),
            expected_answer: format!("payload_{i}"),
            mode: PromptMode::Kv,
            arm: if i % 2 == 0 {
                Arm::Hypertoken
            } else {
                Arm::Baseline
            },
        })
        .collect();
    let config = BenchConfig {
        seed: 0,
        dims: vec![2],
        pair_counts: vec![1],
        sigmas: vec![0.0],
        trials: 1,
        tau: 1.0,
        output_path: String::new(),
        endpoint: Some(EndpointConfig {
            base_url: "mock".into(),
            model_name: "mock".into(),
            backoff_ms: 1,
            ..EndpointConfig::default()
        }),
        timestamp: Some("acceptance".into()),
    };

    let echo = run_llm_bench(&config, &EchoExpected, &prompts).unwrap();
    let summary = echo.llm.unwrap();
    assert_eq!(summary.recall_hypertoken, 1.0);
    assert_eq!(summary.recall_control, 1.0);

    let silent = run_llm_bench(&config, &AlwaysEmpty, &prompts).unwrap();
    let summary = silent.llm.unwrap();
    assert_eq!(summary.recall_hypertoken, 0.0);
    assert_eq!(summary.recall_control, 0.0);

    // Offline determinism: identical config → identical bytes, both formats.
    let dir = tempfile::tempdir().unwrap();
    let sim_config = BenchConfig {
        seed: 7,
        dims: vec![32],
        pair_counts: vec![4],
        sigmas: vec![0.0, 0.1],
        trials: 2,
        tau: 1.0,
        output_path: dir.path().join("det").to_string_lossy().into_owned(),
        endpoint: None,
        timestamp: Some("acceptance".into()),
    };
    let emit_both = |tag: &str| {
        let report = run_sim_bench(&sim_config).unwrap();
        let base = dir.path().join(tag);
        let csv = emit_report(&report, ReportFormat::Csv, &base).unwrap();
        let json = emit_report(&report, ReportFormat::Json, &base).unwrap();
        (std::fs::read(csv).unwrap(), std::fs::read(json).unwrap())
    };
    let (csv_a, json_a) = emit_both("first");
    let (csv_b, json_b) = emit_both("second");
    assert_eq!(
        csv_a, csv_b,
        "CSV bytes differ between identical offline runs"
    );
    assert_eq!(
        json_a, json_b,
        "JSON bytes differ between identical offline runs"
    );
    pass("12 harness self-test: echo recall 1.0, empty recall 0.0, offline runs byte-identical");
}
