//! Command-line surface and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sympidx::cijt::{JumpCertificate, SearchOutcome};
use sympidx::generators::PathSpec;
use sympidx::index::index_at_iterate;
use sympidx::linalg::{classify_cnu, symplectic_defect, unit_spectrum, Classification, UnitEigenvalue};
use sympidx::paths::{char_poly_check, characteristic_polynomial, evaluate, iterate};
use sympidx::splitting::{splitting_profile, Route, SplittingProfile};
use sympidx::verify::{verify_beta_minus_suite, verify_ecijt, verify_ir, Provenance, VerificationReport};

use crate::config::{OutputFormat, RunConfig};
use crate::error::CliError;
use crate::input::{load_specs, parse_json, read_source, InputRecord};
use crate::random::{GeneratorOptions, SpecGenerator};
use crate::render;
use crate::trials::{search_collection, JumpTrialParams};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "sympidx", version, about = "Index iteration, splitting numbers and common index jumps of symplectic paths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed of the random generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tuple-search tolerance ε ∈ (0, 1/2).
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub epsilon: f64,
    /// Largest N scanned by the tuple search.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub n_max: u64,
    /// Number of tuples requested.
    #[arg(long, global = true, default_value_t = 3)]
    pub want: usize,
    /// Window δ of the adopted Δ_k definition.
    #[arg(long, global = true, default_value_t = 0.1)]
    pub delta: f64,
    /// Use this M̄ instead of the lcm of the angle denominators.
    #[arg(long, global = true)]
    pub m_bar_override: Option<u64>,
    /// Iterate range: γ¹…γ^m for `index`, the m̄ range for `verify-ecijt`,
    /// the iterate count for `iterate`.
    #[arg(long, global = true, default_value_t = 5)]
    pub m: u64,
    /// Largest ℓ of the recurrence checks.
    #[arg(long, global = true, default_value_t = 5)]
    pub ell0: u64,
    /// Mean-index window η of the recurrence checks.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub eta: f64,
    /// Dimension bound of the normal-form suite.
    #[arg(long, global = true, default_value_t = 12)]
    pub dim_bound: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Table,
    Numeric,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate γ(t) with its spectrum and classification.
    Eval {
        specs: Vec<String>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Index records of γ¹…γ^m.
    Index { specs: Vec<String> },
    /// The iterated spec γ^m.
    Iterate { specs: Vec<String> },
    /// Splitting numbers at every unit eigenvalue of γ(1).
    Split {
        specs: Vec<String>,
        #[arg(long, value_enum, default_value = "table")]
        route: RouteArg,
    },
    /// Scan for common index jump tuples.
    CijtSearch { specs: Vec<String> },
    /// Verify the jump identities at found (or given) tuples.
    VerifyEcijt {
        specs: Vec<String>,
        /// JSON file with a certificate, a list of them, or a search result.
        #[arg(long)]
        certificate: Option<String>,
    },
    /// Verify the index recurrence properties at found (or given) tuples.
    VerifyIr {
        specs: Vec<String>,
        #[arg(long)]
        certificate: Option<String>,
    },
    /// Check β₋ = S⁻(1) and β₊ + β₋ = ν on every normal-form spec.
    VerifyProp1,
    /// Emit seeded random specs or collections.
    GenRandom {
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Emit collections of this many specs instead of single specs.
        #[arg(long)]
        collection: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Index { .. } => "index",
            Command::Iterate { .. } => "iterate",
            Command::Split { .. } => "split",
            Command::CijtSearch { .. } => "cijt-search",
            Command::VerifyEcijt { .. } => "verify-ecijt",
            Command::VerifyIr { .. } => "verify-ir",
            Command::VerifyProp1 => "verify-prop1",
            Command::GenRandom { .. } => "gen-random",
        }
    }
}

impl CommonArgs {
    pub fn to_config(&self) -> RunConfig {
        let mut config = RunConfig { seed: self.seed, format: self.format, output: self.output.clone(), ..RunConfig::default() };
        let s = &mut config.search;
        s.epsilon = self.epsilon;
        s.n_max = self.n_max;
        s.want = self.want;
        s.delta = self.delta;
        s.m_bar_override = self.m_bar_override;
        s.m = self.m;
        s.ell0 = self.ell0;
        s.eta = self.eta;
        s.dim_bound = self.dim_bound;
        config
    }
}

/// Rendered output of a command and its exit code: 0 when everything
/// passed, 1 when some identity check failed, 2 on engine errors.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub exit_code: i32,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a RunConfig,
    config_sha256: String,
    inputs: &'a [InputRecord],
    result: T,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalRow {
    pub k: usize,
    pub t: f64,
    pub matrix: Vec<Vec<f64>>,
    pub symplectic_defect: f64,
    pub characteristic_polynomial: Vec<f64>,
    pub reciprocal_polynomial: bool,
    pub unit_spectrum: Vec<UnitEigenvalue>,
    pub classification: Option<Classification>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexRow {
    pub k: usize,
    pub m: u64,
    pub i: i64,
    pub nu: u32,
    pub mu_minus: i64,
    pub mu_plus: i64,
    pub mean: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitRow {
    pub k: usize,
    pub profile: SplittingProfile,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub m_bar: u64,
    pub m_check: Option<u64>,
    pub means: Vec<f64>,
    pub outcome: SearchOutcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyResult {
    pub passed: bool,
    pub reports: Vec<VerificationReport>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Generated {
    Specs(Vec<PathSpec>),
    Collections(Vec<Vec<PathSpec>>),
}

/// Everything a command can produce.
pub enum Payload {
    Eval(Vec<EvalRow>),
    Index(Vec<IndexRow>),
    Iterate(Vec<PathSpec>),
    Split(Vec<SplitRow>),
    Search(SearchResult),
    Verify(VerifyResult),
    Generated(Generated),
}

fn trial_params(config: &RunConfig) -> JumpTrialParams {
    let s = &config.search;
    JumpTrialParams {
        epsilon: s.epsilon,
        n_max: s.n_max,
        want: s.want,
        delta: s.delta,
        m_bar_override: s.m_bar_override,
        m_range: s.m,
        ell0: s.ell0,
        eta: s.eta,
    }
}

/// Certificates from a file (a certificate, a list, or a search result) or
/// from a fresh scan.
fn certificates(
    specs: &[PathSpec],
    source: &Option<String>,
    config: &RunConfig,
    inputs: &mut Vec<InputRecord>,
) -> Result<Vec<JumpCertificate>, CliError> {
    let Some(arg) = source else {
        let (_, _, _, outcome) = search_collection(specs, &trial_params(config), &config.tolerances)?;
        return Ok(outcome.certificates);
    };
    let (name, text) = read_source(arg)?;
    let value: serde_json::Value = parse_json(&name, &text)?;
    let certs = if value.is_array() {
        parse_json(&name, &text)?
    } else if value.get("certificates").is_some() {
        parse_json::<SearchOutcome>(&name, &text)?.certificates
    } else if let Some(result) = value.get("result").and_then(|r| r.get("outcome")) {
        serde_json::from_value::<SearchOutcome>(result.clone())
            .map_err(|e| CliError::Input { source_name: name.clone(), message: e.to_string() })?
            .certificates
    } else {
        vec![parse_json(&name, &text)?]
    };
    inputs.push(InputRecord { source: name, sha256: crate::input::hash_text(&text) });
    Ok(certs)
}

fn verify_result(mut reports: Vec<VerificationReport>, provenance: &Provenance) -> (Payload, i32) {
    for r in &mut reports {
        r.provenance = Some(provenance.clone());
    }
    let code = if reports.iter().any(|r| r.has_engine_errors()) {
        2
    } else if reports.iter().all(|r| r.passed()) {
        0
    } else {
        1
    };
    (Payload::Verify(VerifyResult { passed: code == 0, reports }), code)
}

/// Execute a command and produce its payload and exit code.
pub fn execute(
    command: &Command,
    config: &RunConfig,
    inputs: &mut Vec<InputRecord>,
) -> Result<(Payload, i32), CliError> {
    config.validate()?;
    let tol = &config.tolerances;
    Ok(match command {
        Command::Eval { specs, t } => {
            let specs = load(specs, inputs)?;
            let mut rows = Vec::new();
            for (k, spec) in specs.iter().enumerate() {
                let m = evaluate(spec, *t, tol)?;
                rows.push(EvalRow {
                    k,
                    t: *t,
                    matrix: m.to_rows(),
                    symplectic_defect: symplectic_defect(m.entries())?,
                    characteristic_polynomial: characteristic_polynomial(m.entries()),
                    reciprocal_polynomial: char_poly_check(spec, *t, tol)?,
                    unit_spectrum: unit_spectrum(&m, tol)?,
                    classification: classify_cnu(&m, tol).ok(),
                });
            }
            (Payload::Eval(rows), 0)
        }
        Command::Index { specs } => {
            let specs = load(specs, inputs)?;
            let mut rows = Vec::new();
            for (k, spec) in specs.iter().enumerate() {
                for m in 1..=config.search.m {
                    let r = index_at_iterate(spec, m, tol)?;
                    rows.push(IndexRow { k, m, i: r.i, nu: r.nu, mu_minus: r.mu_minus, mu_plus: r.mu_plus, mean: r.mean });
                }
            }
            (Payload::Index(rows), 0)
        }
        Command::Iterate { specs } => {
            let specs = load(specs, inputs)?;
            let out = specs.iter().map(|s| iterate(s, config.search.m)).collect::<sympidx::Result<Vec<_>>>()?;
            (Payload::Iterate(out), 0)
        }
        Command::Split { specs, route } => {
            let specs = load(specs, inputs)?;
            let route = match route {
                RouteArg::Table => Route::Table,
                RouteArg::Numeric => Route::Numeric,
            };
            let mut rows = Vec::new();
            for (k, spec) in specs.iter().enumerate() {
                rows.push(SplitRow { k, profile: splitting_profile(spec, route, tol)? });
            }
            (Payload::Split(rows), 0)
        }
        Command::CijtSearch { specs } => {
            let specs = load(specs, inputs)?;
            let (m_bar, m_check, means, outcome) = search_collection(&specs, &trial_params(config), tol)?;
            let means = means.iter().map(|m| m.value).collect();
            (Payload::Search(SearchResult { m_bar, m_check, means, outcome }), 0)
        }
        Command::VerifyEcijt { specs, certificate } => {
            let specs = load(specs, inputs)?;
            let certs = certificates(&specs, certificate, config, inputs)?;
            let mut reports = Vec::new();
            for cert in &certs {
                reports.push(verify_ecijt(&specs, cert, config.search.m, config.search.delta, tol)?);
            }
            verify_result(reports, &provenance(config, inputs))
        }
        Command::VerifyIr { specs, certificate } => {
            let specs = load(specs, inputs)?;
            let certs = certificates(&specs, certificate, config, inputs)?;
            let mut reports = Vec::new();
            for cert in &certs {
                reports.push(verify_ir(&specs, cert, config.search.ell0, config.search.eta, tol)?);
            }
            verify_result(reports, &provenance(config, inputs))
        }
        Command::VerifyProp1 => {
            let report = verify_beta_minus_suite(config.search.dim_bound, tol)?;
            verify_result(vec![report], &provenance(config, inputs))
        }
        Command::GenRandom { count, collection } => {
            let generated = match collection {
                None => {
                    let mut gen = SpecGenerator::new(config.seed, GeneratorOptions::single());
                    Generated::Specs((0..*count).map(|_| gen.spec(true, true)).collect())
                }
                Some(q) => {
                    if *q == 0 {
                        return Err(CliError::Config("--collection must be ≥ 1".into()));
                    }
                    let mut gen = SpecGenerator::new(config.seed, GeneratorOptions::collection());
                    Generated::Collections((0..*count).map(|_| gen.collection(*q, tol)).collect())
                }
            };
            (Payload::Generated(generated), 0)
        }
    })
}

fn load(args: &[String], inputs: &mut Vec<InputRecord>) -> Result<Vec<PathSpec>, CliError> {
    let (specs, records) = load_specs(args)?;
    inputs.extend(records);
    Ok(specs)
}

fn provenance(config: &RunConfig, inputs: &[InputRecord]) -> Provenance {
    Provenance {
        spec_hashes: inputs.iter().map(|i| i.sha256.clone()).collect(),
        seed: Some(config.seed),
        tool_version: TOOL_VERSION.to_string(),
        config_hash: Some(config.hash()),
    }
}

fn envelope_json<T: Serialize>(command: &str, config: &RunConfig, inputs: &[InputRecord], result: T) -> String {
    let env = Envelope {
        tool: "sympidx",
        version: TOOL_VERSION,
        command,
        config,
        config_sha256: config.hash(),
        inputs,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
    s.push('\n');
    s
}

/// Render a payload in the configured format.
pub fn render_payload(
    command: &str,
    payload: &Payload,
    config: &RunConfig,
    inputs: &[InputRecord],
) -> Result<String, CliError> {
    match config.format {
        OutputFormat::Json => Ok(match payload {
            Payload::Eval(r) => envelope_json(command, config, inputs, r),
            Payload::Index(r) => envelope_json(command, config, inputs, r),
            Payload::Iterate(r) => envelope_json(command, config, inputs, r),
            Payload::Split(r) => envelope_json(command, config, inputs, r),
            Payload::Search(r) => envelope_json(command, config, inputs, r),
            Payload::Verify(r) => envelope_json(command, config, inputs, r),
            Payload::Generated(r) => envelope_json(command, config, inputs, r),
        }),
        OutputFormat::Csv => render::csv(payload),
        OutputFormat::Table => Ok(render::table(payload)),
    }
}

/// Parse-free entry point used by `main` and the integration tests.
pub fn run(cli: &Cli, env: impl Fn(&str) -> Option<String>) -> Outcome {
    let mut config = cli.common.to_config();
    let mut inputs = Vec::new();
    let result = config
        .apply_env(env)
        .and_then(|_| execute(&cli.command, &config, &mut inputs))
        .and_then(|(payload, code)| Ok((render_payload(cli.command.name(), &payload, &config, &inputs)?, code)));
    match result {
        Ok((text, exit_code)) => Outcome { text, exit_code },
        Err(e) => Outcome { text: format!("error: {e}\n"), exit_code: 2 },
    }
}

