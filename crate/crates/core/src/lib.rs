//! Desk-scale holographic associative memory over a simulated transformer
//! latent space.
//!
//! The pipeline: build a bifix-free hypertoken codebook ([`codebook`]),
//! project codewords into a spread-spectrum latent channel ([`latent`]),
//! superpose key–value pairs into a holographic trace ([`store`]), and
//! recover them by matched-filter despreading with optional Krylov
//! refinement ([`despread`]). [`diagnostics`] quantifies the latent
//! geometry (RIP, JL distortion, condition numbers, spectral gap, channel
//! metrics, coverage); [`promptc`] compiles the same codebooks into
//! key-value prompts for real tokenized models; [`bench`] runs the
//! simulator grids and the LLM recall harness.
//!
//! All numeric kernels are generic over the scalar type (`f32`/`f64`) via
//! the [`Scalar`] trait; the `*64` aliases below are the concrete types
//! the CLI and benchmarks use.

pub mod bench;
pub mod codebook;
pub mod despread;
pub mod diagnostics;
pub mod error;
pub mod latent;
pub mod linalg;
pub mod promptc;
pub mod scalar;
pub mod seeding;
pub mod store;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Concrete single-precision aliases.
pub type LatentVector32 = latent::LatentVector<f32>;
pub type EmbeddingTable32 = latent::EmbeddingTable<f32>;
pub type PhaseOperator32 = latent::PhaseOperator<f32>;
pub type Matrix32 = linalg::Matrix<f32>;
pub type MemoryBank32 = store::MemoryBank<f32>;
pub type DecodeResult32 = despread::DecodeResult<f32>;

/// Concrete double-precision aliases (the default working precision).
pub type LatentVector64 = latent::LatentVector<f64>;
pub type EmbeddingTable64 = latent::EmbeddingTable<f64>;
pub type PhaseOperator64 = latent::PhaseOperator<f64>;
pub type Matrix64 = linalg::Matrix<f64>;
pub type MemoryBank64 = store::MemoryBank<f64>;
pub type DecodeResult64 = despread::DecodeResult<f64>;
