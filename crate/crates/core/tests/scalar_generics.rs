//! The numeric kernels are generic over the scalar; these tests drive the
//! main pipeline at f32 and check it tracks the f64 path.

use hdram_core::despread::{krylov_refine, matched_filter_decode};
use hdram_core::diagnostics::estimate_rip_delta;
use hdram_core::latent::{EmbeddingTable, PhaseOperator};
use hdram_core::linalg::Matrix;
use hdram_core::seeding::child_seed;
use hdram_core::store::{lookup_kv, lookup_vk, pair_vocabulary, store, synthetic_pairs};
use hdram_core::{LatentVector32, LatentVector64};

#[test]
fn store_and_lookup_work_at_f32() {
    let pairs = synthetic_pairs(8, "f32_");
    let vocab = pair_vocabulary(&pairs);
    let table: EmbeddingTable<f32> = EmbeddingTable::new(&vocab, 64, 11).unwrap();
    let phase: PhaseOperator<f32> = PhaseOperator::new(64, 12).unwrap();
    let bank = store(&pairs, &table, &phase).unwrap();
    for (i, p) in pairs.iter().enumerate() {
        assert_eq!(
            lookup_kv(&bank, &p.key, &table, &phase, 1.0)
                .unwrap()
                .best_index,
            i
        );
        assert_eq!(
            lookup_vk(&bank, &p.value, &table, &phase, 1.0)
                .unwrap()
                .best_index,
            i
        );
    }
}

#[test]
fn f32_and_f64_decodes_agree_on_the_argmax() {
    let pairs = synthetic_pairs(8, "xp_");
    let vocab = pair_vocabulary(&pairs);
    let t32: EmbeddingTable<f32> = EmbeddingTable::new(&vocab, 64, 21).unwrap();
    let t64: EmbeddingTable<f64> = EmbeddingTable::new(&vocab, 64, 21).unwrap();
    // Same seed draws the same normal stream, so the f32 table is the f64
    // table rounded.
    for token in t32.tokens() {
        let a = t32.get(token).unwrap();
        let b = t64.get(token).unwrap();
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((f64::from(*x) - y).abs() < 1e-6);
        }
    }

    let q32: Vec<LatentVector32> = vocab.iter().map(|t| t32.get(t).unwrap().clone()).collect();
    let q64: Vec<LatentVector64> = vocab.iter().map(|t| t64.get(t).unwrap().clone()).collect();
    for i in 0..q32.len() {
        let r32 = matched_filter_decode(&q32[i], &q32, 1.0f32).unwrap();
        let r64 = matched_filter_decode(&q64[i], &q64, 1.0f64).unwrap();
        assert_eq!(r32.best_index, r64.best_index);
        assert!((f64::from(r32.margin) - r64.margin).abs() < 1e-4);
    }
}

#[test]
fn krylov_and_rip_run_at_f32() {
    let a = Matrix::<f32>::identity(16);
    let q = LatentVector32::from_fn(16, |i| (i as f32 + 1.0) / 16.0);
    let t = krylov_refine(&q, &a, 1e-6, 10).unwrap();
    assert!(t.converged);
    assert!((t.final_iterate().norm() - 1.0).abs() <= 1e-6);

    let r = estimate_rip_delta(&Matrix::<f32>::identity(32), 4, 50, child_seed(1, 2)).unwrap();
    assert_eq!(r.delta, 0.0);
}
