//! `hdram`: hypertoken codebooks, the holographic memory simulator,
//! latent-geometry diagnostics, prompt compilation, and the LLM recall
//! harness.
//!
//! Exit codes: 0 success, 1 validation error, 2 I/O error, 3 endpoint
//! error.

mod http;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hdram_core::bench::{self, Arm, BenchConfig, EndpointConfig, LlmPrompt, ReportFormat};
use hdram_core::codebook::{
    build_product_codebook, check_bifix_free, kraft_mcmillan_sum, Codebook, TokenAlphabet,
};
use hdram_core::diagnostics;
use hdram_core::latent::LatentVector;
use hdram_core::promptc::{
    compile_kv_prompt, verify_tokenization, PromptArtifact, PromptMode, PromptPair,
    ReferenceTokenizer, TokenizerProfile,
};
use hdram_core::store::{read_pair_file, PairRecord};
use hdram_core::{EmbeddingTable64, Error as CoreError};

#[derive(Parser)]
#[command(
    name = "hdram",
    version,
    about = "Hypertoken holographic memory toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and validate hypertoken codebooks.
    Codebook {
        #[command(subcommand)]
        action: CodebookAction,
    },
    /// Run the memory simulator.
    Simulate {
        #[command(subcommand)]
        action: SimulateAction,
    },
    /// Latent-geometry diagnostics.
    Diagnose {
        #[command(subcommand)]
        action: DiagnoseAction,
    },
    /// Compile and verify key-value prompts.
    Prompt {
        #[command(subcommand)]
        action: PromptAction,
    },
    /// Drive an external chat endpoint.
    Bench {
        #[command(subcommand)]
        action: BenchAction,
    },
    /// Convert saved reports between formats.
    Report {
        #[command(subcommand)]
        action: ReportAction,
    },
}

#[derive(Subcommand)]
enum CodebookAction {
    /// Generate a product codebook from alphabets.
    Gen(CodebookGenArgs),
    /// Validate a codebook file and print its metrics.
    Check(CodebookCheckArgs),
}

#[derive(Args)]
struct CodebookGenArgs {
    /// Alphabets as `a,b,c;d,e,f` (semicolon-separated positions).
    #[arg(long)]
    alphabets: String,
    /// Number of codewords; defaults to the full product.
    #[arg(long)]
    capacity: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CodebookCheckArgs {
    #[arg(long)]
    input: PathBuf,
    /// Alphabet size q for the Kraft–McMillan sum; defaults to the largest
    /// per-position alphabet.
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Subcommand)]
enum SimulateAction {
    /// Store/decode grids over (dims × pairs × sigmas), two arms per cell.
    Recall(SimulateArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated latent dimensions.
    #[arg(long, value_delimiter = ',', default_value = "64")]
    dims: Vec<usize>,
    /// Comma-separated stored-pair counts.
    #[arg(long, value_delimiter = ',', default_value = "16")]
    pairs: Vec<usize>,
    /// Comma-separated noise sigmas.
    #[arg(long, value_delimiter = ',', default_value = "0.0,0.1")]
    sigmas: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    /// Output base path (writes <out>.csv / <out>.json).
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Both)]
    format: FormatArg,
    /// Pin the provenance timestamp (makes runs byte-reproducible).
    #[arg(long)]
    timestamp: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Both,
}

#[derive(Subcommand)]
enum DiagnoseAction {
    /// Sampled restricted-isometry constant of a Gaussian projection.
    Rip(RipArgs),
    /// Johnson–Lindenstrauss distortion of a Gaussian projection.
    Jl(JlArgs),
    /// Condition numbers: hypertoken vs coherent raw columns.
    Kappa(KappaArgs),
    /// Spectral gap of the k-NN cosine graph.
    Spectrum(SpectrumArgs),
    /// Coverage probability of a hypertoken set.
    Coverage(CoverageArgs),
}

#[derive(Args)]
struct RipArgs {
    #[arg(long, default_value_t = 256)]
    dim_in: usize,
    #[arg(long, default_value_t = 64)]
    dim_out: usize,
    #[arg(long, default_value_t = 4)]
    sparsity: usize,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct JlArgs {
    #[arg(long, default_value_t = 32)]
    points: usize,
    #[arg(long, default_value_t = 512)]
    dim_in: usize,
    #[arg(long, default_value_t = 128)]
    dim_out: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct KappaArgs {
    #[arg(long, default_value_t = 256)]
    dim: usize,
    #[arg(long, default_value_t = 16)]
    n: usize,
    /// Pairwise coherence of the raw comparison columns.
    #[arg(long, default_value_t = 0.5)]
    coherence: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, default_value_t = 256)]
    dim: usize,
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    degree: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CoverageArgs {
    #[arg(long, default_value_t = 64)]
    dim: usize,
    #[arg(long, default_value_t = 32)]
    count: usize,
    /// Visibility threshold θ.
    #[arg(long, default_value_t = 0.2)]
    theta: f64,
    /// Constant c in |HT| ≥ c·log(1/δ).
    #[arg(long, default_value_t = 4.0)]
    c: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 10_000)]
    queries: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum PromptAction {
    /// Compile a prompt artifact from a codebook and pair list.
    Build(PromptBuildArgs),
    /// Recompile and verify a saved artifact against a tokenizer.
    Verify(PromptVerifyArgs),
}

#[derive(Args)]
struct PromptBuildArgs {
    #[arg(long)]
    codebook: PathBuf,
    /// JSON-lines pair file: {"key_index":i,"value_index":j,"payload":"..."}.
    #[arg(long)]
    pairs: PathBuf,
    /// Codebook index of the query key.
    #[arg(long)]
    query_index: usize,
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Vocabulary file for the reference tokenizer (one token per line).
    #[arg(long)]
    vocab: Option<PathBuf>,
    /// Output base path (writes <out>.txt and <out>.json).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Kv,
    Vk,
}

impl From<ModeArg> for PromptMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Kv => PromptMode::Kv,
            ModeArg::Vk => PromptMode::Vk,
        }
    }
}

#[derive(Args)]
struct PromptVerifyArgs {
    #[arg(long)]
    codebook: PathBuf,
    #[arg(long)]
    pairs: PathBuf,
    /// Base path of the saved artifact.
    #[arg(long)]
    artifact: PathBuf,
    #[arg(long)]
    vocab: PathBuf,
}

#[derive(Subcommand)]
enum BenchAction {
    /// Send saved prompts to a chat endpoint and score exact-match recall.
    Llm(BenchLlmArgs),
}

#[derive(Args)]
struct BenchLlmArgs {
    #[arg(long)]
    endpoint_url: String,
    #[arg(long)]
    model: String,
    /// Directory of hypertoken prompt artifacts (*.txt + *.json).
    #[arg(long)]
    prompts: PathBuf,
    /// Directory of plain-text control prompt artifacts.
    #[arg(long)]
    control_prompts: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    temperature: f64,
    #[arg(long, default_value_t = 2)]
    max_retries: u32,
    #[arg(long, default_value_t = 64)]
    max_tokens: u32,
    #[arg(long, default_value_t = 2)]
    concurrency: usize,
    #[arg(long, default_value_t = 30)]
    timeout_secs: u64,
    #[arg(long, default_value_t = 250)]
    backoff_ms: u64,
}

#[derive(Subcommand)]
enum ReportAction {
    /// Convert a JSON report to another format.
    Convert(ReportConvertArgs),
}

#[derive(Args)]
struct ReportConvertArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: ConvertFormatArg,
    /// Output base path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertFormatArg {
    Csv,
    Json,
}

enum CliError {
    Validation(String),
    Io(String),
    Endpoint(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Io(_) | CoreError::Json(_) => CliError::Io(e.to_string()),
            CoreError::Endpoint(_) => CliError::Endpoint(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl CliError {
    fn report(self) -> ExitCode {
        let (code, msg) = match self {
            CliError::Validation(m) => (1, m),
            CliError::Io(m) => (2, m),
            CliError::Endpoint(m) => (3, m),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap already formats help/version output.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Codebook { action } => match action {
            CodebookAction::Gen(args) => codebook_gen(args),
            CodebookAction::Check(args) => codebook_check(args),
        },
        Command::Simulate { action } => match action {
            SimulateAction::Recall(args) => simulate_recall(args),
        },
        Command::Diagnose { action } => diagnose(action),
        Command::Prompt { action } => match action {
            PromptAction::Build(args) => prompt_build(args),
            PromptAction::Verify(args) => prompt_verify(args),
        },
        Command::Bench { action } => match action {
            BenchAction::Llm(args) => bench_llm(args),
        },
        Command::Report { action } => match action {
            ReportAction::Convert(args) => report_convert(args),
        },
    }
}

fn parse_alphabets(spec: &str) -> Result<Vec<TokenAlphabet>, CliError> {
    spec.split(';')
        .map(|group| {
            let symbols: Vec<&str> = group
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect();
            TokenAlphabet::new(symbols).map_err(CliError::from)
        })
        .collect()
}

fn codebook_gen(args: CodebookGenArgs) -> Result<(), CliError> {
    let alphabets = parse_alphabets(&args.alphabets)?;
    let full: usize = alphabets.iter().map(TokenAlphabet::len).product();
    let capacity = args.capacity.unwrap_or(full);
    let cb = build_product_codebook(alphabets, capacity)?;
    cb.save(&args.out)?;
    println!(
        "wrote {} codewords (min_distance {:?}, bifix_free {}) to {}",
        cb.len(),
        cb.min_distance,
        cb.bifix_free,
        args.out.display()
    );
    Ok(())
}

fn codebook_check(args: CodebookCheckArgs) -> Result<(), CliError> {
    let cb = Codebook::load(&args.input)?;
    let (bifix_free, violations) = check_bifix_free(&cb.codewords);
    let q = args
        .q
        .or_else(|| cb.alphabets.iter().map(TokenAlphabet::len).max())
        .ok_or_else(|| CliError::Validation("codebook has no alphabets; pass --q".into()))?;
    let kraft = kraft_mcmillan_sum(&cb.codewords, q)?;
    println!("codewords: {}", cb.len());
    println!("bifix_free: {bifix_free}");
    for v in &violations {
        println!(
            "  violation: codeword {} is a {:?} of codeword {}",
            v.first, v.kind, v.second
        );
    }
    println!("kraft_mcmillan_sum (q={q}): {kraft}");
    println!("min_distance: {:?}", cb.min_distance);
    if !bifix_free || kraft > 1.0 + 1e-12 {
        return Err(CliError::Validation("codebook failed checks".into()));
    }
    Ok(())
}

fn simulate_recall(args: SimulateArgs) -> Result<(), CliError> {
    let config = BenchConfig {
        seed: args.seed,
        dims: args.dims,
        pair_counts: args.pairs,
        sigmas: args.sigmas,
        trials: args.trials,
        tau: args.tau,
        output_path: args.out.to_string_lossy().into_owned(),
        endpoint: None,
        timestamp: args.timestamp,
    };
    let report = bench::run_sim_bench(&config)?;
    emit(&report, &args.out, args.format)?;
    for row in &report.rows {
        println!(
            "d={} n={} sigma={} {}: recall_kv={:.4} recall_vk={:.4} collisions={:.4}",
            row.dim, row.n, row.sigma, row.arm, row.recall_kv, row.recall_vk, row.collision_rate
        );
    }
    Ok(())
}

fn emit(report: &bench::BenchReport, out: &Path, format: FormatArg) -> Result<(), CliError> {
    if matches!(format, FormatArg::Csv | FormatArg::Both) {
        let path = bench::emit_report(report, ReportFormat::Csv, out)?;
        println!("wrote {}", path.display());
    }
    if matches!(format, FormatArg::Json | FormatArg::Both) {
        let path = bench::emit_report(report, ReportFormat::Json, out)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn diagnose(action: DiagnoseAction) -> Result<(), CliError> {
    match action {
        DiagnoseAction::Rip(args) => {
            let projection =
                diagnostics::gaussian_projection::<f64>(args.dim_out, args.dim_in, args.seed);
            let r = diagnostics::estimate_rip_delta(
                &projection,
                args.sparsity,
                args.samples,
                args.seed,
            )?;
            println!(
                "rip_delta={} (k={}, samples={}, {}->{}, seed={})",
                r.delta, r.sparsity_k, r.samples, args.dim_in, args.dim_out, args.seed
            );
        }
        DiagnoseAction::Jl(args) => {
            let points: Vec<LatentVector<f64>> = {
                let vocab: Vec<String> = (0..args.points).map(|i| format!("p{i}")).collect();
                let table = EmbeddingTable64::new(&vocab, args.dim_in, args.seed)
                    .map_err(CliError::from)?;
                vocab
                    .iter()
                    .map(|t| table.get(t).unwrap().clone())
                    .collect()
            };
            let projection =
                diagnostics::gaussian_projection::<f64>(args.dim_out, args.dim_in, args.seed ^ 1);
            let r = diagnostics::jl_distortion(&points, &projection)?;
            println!(
                "jl_max_distortion={} (pairs={}, skipped={})",
                r.max_distortion, r.pairs_checked, r.pairs_skipped
            );
        }
        DiagnoseAction::Kappa(args) => {
            let (ht, raw) = diagnostics::comparison_matrices::<f64>(
                args.dim,
                args.n,
                args.coherence,
                args.seed,
            )?;
            let r = diagnostics::condition_numbers(&ht, &raw)?;
            println!(
                "kappa_ht={} kappa_raw={} ratio={}{}",
                r.kappa_ht,
                r.kappa_raw,
                r.ratio,
                if r.ht_rank_deficient || r.raw_rank_deficient {
                    " (rank-deficient)"
                } else {
                    ""
                }
            );
        }
        DiagnoseAction::Spectrum(args) => {
            let vocab: Vec<String> = (0..args.n).map(|i| format!("v{i}")).collect();
            let table =
                EmbeddingTable64::new(&vocab, args.dim, args.seed).map_err(CliError::from)?;
            let vectors: Vec<LatentVector<f64>> = vocab
                .iter()
                .map(|t| table.get(t).unwrap().clone())
                .collect();
            let r = diagnostics::spectral_gap(&vectors, args.degree)?;
            println!(
                "lambda1={} lambda2={} ramanujan_bound={}",
                r.lambda1, r.lambda2, r.ramanujan_bound
            );
        }
        DiagnoseAction::Coverage(args) => {
            let vocab: Vec<String> = (0..args.count).map(|i| format!("h{i}")).collect();
            let table =
                EmbeddingTable64::new(&vocab, args.dim, args.seed).map_err(CliError::from)?;
            let projections: Vec<LatentVector<f64>> = vocab
                .iter()
                .map(|t| table.get(t).unwrap().clone())
                .collect();
            let r = diagnostics::coverage_estimate(
                &projections,
                args.c,
                args.delta,
                args.theta,
                args.queries,
                args.seed,
            )?;
            println!(
                "required={} satisfied={} empirical_coverage={} (theta={}, queries={})",
                r.required, r.satisfied, r.empirical_coverage, r.theta, r.queries
            );
        }
    }
    Ok(())
}

fn load_prompt_inputs(
    codebook_path: &Path,
    pairs_path: &Path,
) -> Result<(Codebook, Vec<PairRecord>, Vec<PromptPair>), CliError> {
    let cb = Codebook::load(codebook_path)?;
    let records = read_pair_file(pairs_path)?;
    let pairs = records
        .iter()
        .map(|r| {
            let key = cb
                .codeword(r.key_index)
                .ok_or_else(|| {
                    CliError::Validation(format!("key_index {} out of range", r.key_index))
                })?
                .clone();
            let payload = r.payload.clone().ok_or_else(|| {
                CliError::Validation(format!(
                    "pair with key_index {} has no payload text",
                    r.key_index
                ))
            })?;
            Ok(PromptPair { key, payload })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok((cb, records, pairs))
}

fn prompt_build(args: PromptBuildArgs) -> Result<(), CliError> {
    let (cb, _records, pairs) = load_prompt_inputs(&args.codebook, &args.pairs)?;
    let query = cb
        .codeword(args.query_index)
        .ok_or_else(|| {
            CliError::Validation(format!("query_index {} out of range", args.query_index))
        })?
        .clone();
    let profile = match &args.vocab {
        Some(path) => Some(TokenizerProfile::new(Box::new(
            ReferenceTokenizer::from_vocab_file(path)?,
        ))),
        None => None,
    };
    let artifact = compile_kv_prompt(&cb, &pairs, &query, args.mode.into(), profile.as_ref())?;
    if let Some(p) = &profile {
        let violations = verify_tokenization(&artifact, p);
        if !violations.is_empty() {
            eprintln!("warning: {} tokenization violations", violations.len());
        }
    }
    artifact.save(&args.out, args.query_index)?;
    println!(
        "wrote {} and {} (expected answer: {:?})",
        args.out.with_extension("txt").display(),
        args.out.with_extension("json").display(),
        artifact.expected_answer
    );
    Ok(())
}

fn prompt_verify(args: PromptVerifyArgs) -> Result<(), CliError> {
    let (cb, _records, pairs) = load_prompt_inputs(&args.codebook, &args.pairs)?;
    let (saved, sidecar) = PromptArtifact::load(&args.artifact)?;
    let query = cb
        .codeword(sidecar.query_index)
        .ok_or_else(|| {
            CliError::Validation(format!(
                "sidecar query_index {} out of range",
                sidecar.query_index
            ))
        })?
        .clone();
    let profile =
        TokenizerProfile::new(Box::new(ReferenceTokenizer::from_vocab_file(&args.vocab)?));
    // Compilation is deterministic: rebuild and compare bytes, then verify
    // the rebuilt artifact (it carries the hypertoken spans).
    let rebuilt = compile_kv_prompt(&cb, &pairs, &query, sidecar.mode, Some(&profile))?;
    if rebuilt.text != saved.text {
        return Err(CliError::Validation(
            "saved prompt text does not match a deterministic recompilation".into(),
        ));
    }
    let violations = verify_tokenization(&rebuilt, &profile);
    if violations.is_empty() {
        println!("clean: every hypertoken span aligns with token boundaries");
        Ok(())
    } else {
        for v in &violations {
            println!(
                "violation: {:?} at bytes {}..{} ({:?})",
                v.symbol, v.byte_start, v.byte_end, v.kind
            );
        }
        Err(CliError::Validation(format!(
            "{} tokenization violations",
            violations.len()
        )))
    }
}

fn load_prompt_dir(dir: &Path, arm: Arm) -> Result<Vec<LlmPrompt>, CliError> {
    let mut bases: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    bases.sort();
    let mut prompts = Vec::new();
    for txt in bases {
        let base = txt.with_extension("");
        let (artifact, sidecar) = PromptArtifact::load(&base)?;
        prompts.push(LlmPrompt {
            text: artifact.text,
            expected_answer: sidecar.expected_answer,
            mode: sidecar.mode,
            arm,
        });
    }
    if prompts.is_empty() {
        return Err(CliError::Validation(format!(
            "no prompt artifacts (*.txt + *.json) found in {}",
            dir.display()
        )));
    }
    Ok(prompts)
}

fn bench_llm(args: BenchLlmArgs) -> Result<(), CliError> {
    let mut prompts = load_prompt_dir(&args.prompts, Arm::Hypertoken)?;
    if let Some(control) = &args.control_prompts {
        prompts.extend(load_prompt_dir(control, Arm::Baseline)?);
    }
    let config = BenchConfig {
        seed: 0,
        dims: vec![2],
        pair_counts: vec![1],
        sigmas: vec![0.0],
        trials: 1,
        tau: 1.0,
        output_path: args.out.to_string_lossy().into_owned(),
        endpoint: Some(EndpointConfig {
            base_url: args.endpoint_url.clone(),
            model_name: args.model.clone(),
            temperature: args.temperature,
            max_retries: args.max_retries,
            backoff_ms: args.backoff_ms,
            max_tokens: args.max_tokens,
            concurrency: args.concurrency,
        }),
        timestamp: None,
    };
    let endpoint = http::HttpChatEndpoint::new(&args.endpoint_url, args.timeout_secs)
        .map_err(|e| CliError::Endpoint(e.to_string()))?;
    let report = bench::run_llm_bench(&config, &endpoint, &prompts)?;
    let path = bench::emit_report(&report, ReportFormat::Json, &args.out)?;
    let llm = report
        .llm
        .as_ref()
        .expect("llm bench always sets the summary");
    println!("wrote {}", path.display());
    println!(
        "recall: hypertoken {:.4}, control {:.4}, improvement {}",
        llm.recall_hypertoken,
        llm.recall_control,
        llm.improvement_ratio
            .map_or("n/a".to_string(), |r| format!("{r:.2}x"))
    );
    for o in &llm.outcomes {
        if let Some(err) = &o.error {
            println!(
                "  prompt {} failed after {} attempts: {err}",
                o.index, o.attempts
            );
        }
    }
    Ok(())
}

fn report_convert(args: ReportConvertArgs) -> Result<(), CliError> {
    let report = bench::load_report(&args.input)?;
    let format = match args.format {
        ConvertFormatArg::Csv => ReportFormat::Csv,
        ConvertFormatArg::Json => ReportFormat::Json,
    };
    let path = bench::emit_report(&report, format, &args.out)?;
    println!("wrote {}", path.display());
    Ok(())
}
