//! Command line frontend. Loads a quiver file, runs one computation, and
//! prints a JSON envelope on standard output:
//!
//! `{command, input_digest, parameters, result, certificates, bounds}`
//!
//! Output bytes depend only on the input file and the flags. Exit codes:
//! 0 success, 1 validation failure, 2 resource cap exceeded, 3 internal
//! invariant violation (a randomized self-test disagreed with the plain
//! run). `DGQUIVER_RESOURCE_CAP` overrides both the engine component cap
//! and the tensor-power cap; no other environment variable is read.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use dgquiver::{
    cohomology, cy_complete_hereditary, cyclic, dimension_profile, ginzburg3, h0_presentation,
    hochschild, negative_cyclic, parse, partial_resolution, print, qi, relation_completion,
    relative_cyclic, relative_ginzburg3, relative_preprojective2, stalk_check,
    with_inferred_weights, AlgebraElement, AlgebraMorphism, CompletionError, CyclicError,
    DgPresentation, Diagnostic, EngineError, EngineOptions, FieldSpec, FinDimError,
    FiniteDimAlgebra, GradedQuiver, IceQuiverWithPotential, PathWord, Presentation,
    PresentationError, QuiverModel, RewriteError, StalkVerdict, TotalDim, WeightError,
    DEFAULT_TENSOR_CAP,
};

const DEFAULT_COMPONENT_CAP: usize = 100_000;

#[derive(Parser)]
#[command(
    name = "dgquiver",
    version,
    about = "dg quiver completions, cohomology, and cyclic homology"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Input {
    /// quiver file to load
    file: PathBuf,
    /// coefficient field: `q` or `p<prime>`
    #[arg(long, default_value = "q")]
    field: String,
}

#[derive(Args)]
struct BuildArgs {
    /// constructor applied to the loaded model before this computation
    #[arg(long, value_enum)]
    construct: Option<Construct>,
    /// Calabi-Yau dimension, used by `--construct cy-complete` only
    #[arg(long, default_value_t = 2)]
    n: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construct {
    /// degree-3 Calabi-Yau completion of a quiver with potential
    Ginzburg3,
    /// relative variant, keeps the frozen part inert
    RelGinzburg3,
    /// hereditary n-Calabi-Yau completion of a plain quiver
    CyComplete,
    /// derived degree-2 preprojective model over the frozen part
    RelPreproj2,
    /// one-step dg resolution of a quiver with relations
    PartialResolution,
}

impl Construct {
    fn name(self) -> &'static str {
        match self {
            Construct::Ginzburg3 => "ginzburg3",
            Construct::RelGinzburg3 => "rel-ginzburg3",
            Construct::CyComplete => "cy-complete",
            Construct::RelPreproj2 => "rel-preproj2",
            Construct::PartialResolution => "partial-resolution",
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// report whether the differential squares to zero, arrow by arrow
    CheckD2 {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Ginzburg completion of a quiver with potential
    Ginzburg3 {
        #[command(flatten)]
        input: Input,
    },
    /// relative Ginzburg completion of an ice quiver with potential
    RelGinzburg3 {
        #[command(flatten)]
        input: Input,
    },
    /// hereditary n-Calabi-Yau completion of a plain quiver
    CyComplete {
        #[command(flatten)]
        input: Input,
        /// Calabi-Yau dimension (>= 1)
        #[arg(long)]
        n: u32,
    },
    /// derived degree-2 preprojective model over the frozen vertices
    RelPreproj2 {
        #[command(flatten)]
        input: Input,
    },
    /// complete a quiver with relations into a quiver with potential
    RelationComplete {
        #[command(flatten)]
        input: Input,
    },
    /// infer the positive arrow weights that make the differential homogeneous
    Weights {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// weightwise cohomology table of a dg model
    Cohomology {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: BuildArgs,
        /// largest weight column to compute
        #[arg(long)]
        max_weight: u64,
        /// lowest cohomological degree to compute
        #[arg(long, allow_negative_numbers = true)]
        min_degree: i64,
        /// recompute every rank under a seeded basis permutation and fail
        /// loudly on any disagreement
        #[arg(long)]
        seed: Option<u64>,
    },
    /// certify that negative-degree cohomology vanishes inside the window
    Stalk {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: BuildArgs,
        /// largest weight column to check
        #[arg(long, default_value_t = 8)]
        max_weight: u64,
        /// lowest cohomological degree to check
        #[arg(long, default_value_t = -4, allow_negative_numbers = true)]
        min_degree: i64,
        /// recompute every rank under a seeded basis permutation and fail
        /// loudly on any disagreement
        #[arg(long)]
        seed: Option<u64>,
    },
    /// degree-0 cohomology as a quiver with relations
    H0 {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// per-length dimension profile of a quiver with relations
    Dims {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: BuildArgs,
        /// longest word length explored by the rewriting completion
        #[arg(long)]
        max_len: usize,
    },
    /// Hochschild homology dimensions of the path algebra modulo relations
    Hochschild {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: BuildArgs,
        /// highest homological degree to compute
        #[arg(long)]
        max_n: usize,
        /// length bound for the finite-dimension certificate of the algebra
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// cyclic homology dimensions of the path algebra modulo relations
    Cyclic {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: BuildArgs,
        /// highest homological degree to compute
        #[arg(long)]
        max_n: usize,
        /// length bound for the finite-dimension certificate of the algebra
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// negative cyclic homology from the truncated product total complex
    NegativeCyclic {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        build: BuildArgs,
        /// highest homological degree to compute
        #[arg(long)]
        max_n: usize,
        /// number of columns kept in the truncation (>= 2)
        #[arg(long, default_value_t = 2)]
        cols: usize,
        /// length bound for the finite-dimension certificate of the algebra
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// relative Hochschild and cyclic homology of the frozen-subquiver inclusion
    RelCyclic {
        #[command(flatten)]
        input: Input,
        /// highest homological degree to compute
        #[arg(long)]
        max_n: usize,
        /// length bound for the finite-dimension certificates of both algebras
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
}

enum Failure {
    Validation(String),
    Resource(String),
    Internal(String),
}

impl From<Diagnostic> for Failure {
    fn from(d: Diagnostic) -> Self {
        Failure::Validation(d.to_string())
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Resource { .. } => Failure::Resource(e.to_string()),
            EngineError::SelfTest { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<CyclicError> for Failure {
    fn from(e: CyclicError) -> Self {
        match e {
            CyclicError::Resource { .. } => Failure::Resource(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<RewriteError> for Failure {
    fn from(e: RewriteError) -> Self {
        Failure::Resource(e.to_string())
    }
}

impl From<FinDimError> for Failure {
    fn from(e: FinDimError) -> Self {
        match e {
            FinDimError::Rewrite(r) => r.into(),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<CompletionError> for Failure {
    fn from(e: CompletionError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<PresentationError> for Failure {
    fn from(e: PresentationError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<WeightError> for Failure {
    fn from(e: WeightError) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Validation(m) => (1, m),
                Failure::Resource(m) => (2, m),
                Failure::Internal(m) => (3, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn digest_hex(bytes: &[u8]) -> String {
    let mut out = String::from("sha256:");
    for b in Sha256::digest(bytes) {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

fn load(path: &PathBuf) -> Result<(String, QuiverModel), Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    let digest = digest_hex(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::Validation(format!("{} is not UTF-8", path.display())))?;
    let model = parse(&text)?;
    Ok((digest, model))
}

fn parse_field(s: &str) -> Result<FieldSpec, Failure> {
    FieldSpec::from_str(s).map_err(Failure::Validation)
}

fn field_name(f: &FieldSpec) -> String {
    match f {
        FieldSpec::Rationals => "q".to_string(),
        FieldSpec::Prime(p) => format!("p{p}"),
    }
}

/// `DGQUIVER_RESOURCE_CAP`, when set, replaces the default engine component
/// cap and the default tensor-power cap.
fn cap_override() -> Result<Option<usize>, Failure> {
    match std::env::var("DGQUIVER_RESOURCE_CAP") {
        Ok(s) => s.trim().parse::<usize>().map(Some).map_err(|_| {
            Failure::Validation(format!(
                "DGQUIVER_RESOURCE_CAP must be a positive integer, got `{s}`"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Failure::Validation(format!("DGQUIVER_RESOURCE_CAP: {e}"))),
    }
}

fn construct_param(c: Option<Construct>) -> Value {
    match c {
        None => Value::Null,
        Some(c) => json!(c.name()),
    }
}

fn envelope(
    command: &str,
    digest: &str,
    parameters: Value,
    result: Value,
    certificates: Vec<&str>,
    bounds: Value,
) -> Value {
    json!({
        "command": command,
        "input_digest": digest,
        "parameters": parameters,
        "result": result,
        "certificates": certificates,
        "bounds": bounds,
    })
}

/// The dg model the engine commands operate on: the file's own differential
/// section (certified square-zero on the spot) or a constructor applied to
/// the loaded model.
fn build_dg(
    model: &QuiverModel,
    construct: Option<Construct>,
    n: u32,
) -> Result<DgPresentation, Failure> {
    fn need(c: &str, what: &str) -> Failure {
        Failure::Validation(format!("--construct {c} needs {what}"))
    }
    match construct {
        None => match model {
            QuiverModel::Dg(d) => {
                let rep = d.check_d_squared();
                if let Some((ix, residue)) = rep.failures().first() {
                    return Err(Failure::Validation(format!(
                        "d^2 is nonzero: d(d({})) = {}",
                        d.quiver().arrow(*ix).name,
                        residue
                    )));
                }
                Ok(d.clone())
            }
            _ => Err(Failure::Validation(
                "this file has no differential section; pass --construct to build a dg model"
                    .to_string(),
            )),
        },
        Some(Construct::Ginzburg3) => match model {
            QuiverModel::WithPotential(iqp) => Ok(ginzburg3(iqp.quiver(), iqp.potential())?),
            _ => Err(need("ginzburg3", "a potential section")),
        },
        Some(Construct::RelGinzburg3) => match model {
            QuiverModel::WithPotential(iqp) => Ok(relative_ginzburg3(iqp)?),
            _ => Err(need("rel-ginzburg3", "a potential section")),
        },
        Some(Construct::CyComplete) => match model {
            QuiverModel::Quiver(q) => Ok(cy_complete_hereditary(q, n)?),
            _ => Err(need("cy-complete", "a plain quiver")),
        },
        Some(Construct::RelPreproj2) => match model {
            QuiverModel::Quiver(q) => Ok(relative_preprojective2(q)?),
            _ => Err(need("rel-preproj2", "a plain quiver")),
        },
        Some(Construct::PartialResolution) => match model {
            QuiverModel::Presentation(p) => Ok(partial_resolution(p)?),
            _ => Err(need("partial-resolution", "a relations section")),
        },
    }
}

/// The quiver-with-relations the word-level commands operate on. A plain
/// quiver gets its free presentation; a dg model (own or constructed) goes
/// through degree-0 cohomology first.
fn resolve_presentation(
    model: &QuiverModel,
    construct: Option<Construct>,
    n: u32,
) -> Result<Presentation, Failure> {
    if construct.is_some() {
        let dg = build_dg(model, construct, n)?;
        return Ok(h0_presentation(&dg)?);
    }
    match model {
        QuiverModel::Presentation(p) => Ok(p.clone()),
        QuiverModel::Quiver(q) => Ok(Presentation::free(q)?),
        QuiverModel::Dg(_) => {
            let dg = build_dg(model, None, n)?;
            Ok(h0_presentation(&dg)?)
        }
        QuiverModel::WithPotential(_) => Err(Failure::Validation(
            "a potential file needs --construct (for example ginzburg3) before word-level work"
                .to_string(),
        )),
    }
}

fn engine_options(field: FieldSpec, seed: Option<u64>) -> Result<EngineOptions, Failure> {
    Ok(EngineOptions {
        field,
        component_cap: cap_override()?.unwrap_or(DEFAULT_COMPONENT_CAP),
        permute_seed: seed,
    })
}

fn tensor_cap() -> Result<usize, Failure> {
    Ok(cap_override()?.unwrap_or(DEFAULT_TENSOR_CAP))
}

/// Inclusion of the free path algebra of the frozen subquiver into the
/// file's algebra. Without frozen vertices the source is the zero algebra,
/// so the relative groups coincide with the absolute ones.
fn frozen_inclusion(p: &Presentation, max_len: usize) -> Result<AlgebraMorphism, Failure> {
    let q = p.quiver();
    let (a_alg, a_basis, a_sys) = FiniteDimAlgebra::from_presentation_detailed(p, max_len)?;
    if !q.vertices().any(|(_, v)| v.frozen) {
        return Ok(AlgebraMorphism::from_zero(&a_alg));
    }
    let mut b = GradedQuiver::builder();
    for (_, v) in q.vertices() {
        if v.frozen {
            b = b.frozen_vertex(&v.name);
        }
    }
    for (_, a) in q.arrows() {
        if a.frozen {
            let src = q.vertex(a.source).name.clone();
            let tgt = q.vertex(a.target).name.clone();
            b = b.frozen_arrow(&a.name, &src, &tgt, a.degree);
        }
    }
    let sub = b.build().expect("the frozen subquiver is well formed");
    let free = Presentation::free(&sub)?;
    let (b_alg, b_basis, _) = FiniteDimAlgebra::from_presentation_detailed(&free, max_len)?;
    let index: BTreeMap<&PathWord, usize> =
        a_basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut matrix = Vec::with_capacity(b_basis.len());
    for w in &b_basis {
        let ambient = match w {
            PathWord::Vertex(v) => {
                let name = &sub.vertex(*v).name;
                let ix = q
                    .vertex_named(name)
                    .expect("frozen vertices persist in the ambient quiver");
                PathWord::Vertex(ix)
            }
            PathWord::Arrows(seq) => {
                let named: Vec<u32> = seq
                    .iter()
                    .map(|&a| {
                        q.arrow_named(&sub.arrow(a).name)
                            .expect("frozen arrows persist in the ambient quiver")
                    })
                    .collect();
                PathWord::from_arrows(q, named).expect("frozen paths stay composable")
            }
        };
        let elem = a_sys.reduce(&AlgebraElement::monomial(q, ambient, qi(1)));
        let mut col: Vec<(usize, _)> = elem
            .terms()
            .map(|(word, c)| {
                (
                    *index.get(word).expect("reduced words are basis words"),
                    c.clone(),
                )
            })
            .collect();
        col.sort_by_key(|(r, _)| *r);
        matrix.push(col);
    }
    Ok(AlgebraMorphism::new(b_alg, a_alg, matrix)?)
}

fn dims_json(dims: &[usize]) -> Value {
    json!(dims)
}

fn constructed_model(dg: DgPresentation) -> Value {
    json!({ "model": print(&QuiverModel::Dg(dg)) })
}

fn run(cmd: Cmd) -> Result<Value, Failure> {
    match cmd {
        Cmd::CheckD2 { input, build } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let dg = match (&model, build.construct) {
                (QuiverModel::Dg(d), None) => d.clone(),
                _ => build_dg(&model, build.construct, build.n)?,
            };
            let rep = dg.check_d_squared();
            let failures: Vec<Value> = rep
                .failures()
                .iter()
                .map(|(ix, residue)| {
                    json!({
                        "arrow": dg.quiver().arrow(*ix).name,
                        "d_squared": residue.to_string(),
                    })
                })
                .collect();
            let certs = if rep.is_ok() {
                vec!["d_squared_zero"]
            } else {
                vec![]
            };
            Ok(envelope(
                "check-d2",
                &digest,
                json!({
                    "construct": construct_param(build.construct),
                    "field": field_name(&field),
                    "n": build.n,
                }),
                json!({ "ok": rep.is_ok(), "failures": failures }),
                certs,
                json!({}),
            ))
        }
        Cmd::Ginzburg3 { input } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let dg = build_dg(&model, Some(Construct::Ginzburg3), 0)?;
            Ok(envelope(
                "ginzburg3",
                &digest,
                json!({ "field": field_name(&field) }),
                constructed_model(dg),
                vec!["d_squared_zero"],
                json!({}),
            ))
        }
        Cmd::RelGinzburg3 { input } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let dg = build_dg(&model, Some(Construct::RelGinzburg3), 0)?;
            Ok(envelope(
                "rel-ginzburg3",
                &digest,
                json!({ "field": field_name(&field) }),
                constructed_model(dg),
                vec!["d_squared_zero"],
                json!({}),
            ))
        }
        Cmd::CyComplete { input, n } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let dg = build_dg(&model, Some(Construct::CyComplete), n)?;
            Ok(envelope(
                "cy-complete",
                &digest,
                json!({ "field": field_name(&field), "n": n }),
                constructed_model(dg),
                vec!["d_squared_zero"],
                json!({}),
            ))
        }
        Cmd::RelPreproj2 { input } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let dg = build_dg(&model, Some(Construct::RelPreproj2), 0)?;
            Ok(envelope(
                "rel-preproj2",
                &digest,
                json!({ "field": field_name(&field) }),
                constructed_model(dg),
                vec!["d_squared_zero"],
                json!({}),
            ))
        }
        Cmd::RelationComplete { input } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let p = match &model {
                QuiverModel::Presentation(p) => p.clone(),
                _ => {
                    return Err(Failure::Validation(
                        "relation-complete needs a relations section".to_string(),
                    ))
                }
            };
            let (q2, w) = relation_completion(&p)?;
            let iqp = IceQuiverWithPotential::new(&q2, w)
                .expect("relation completion yields a valid quiver with potential");
            Ok(envelope(
                "relation-complete",
                &digest,
                json!({ "field": field_name(&field) }),
                json!({ "model": print(&QuiverModel::WithPotential(iqp)) }),
                vec!["potential_cyclic"],
                json!({}),
            ))
        }
        Cmd::Weights { input, build } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let dg = build_dg(&model, build.construct, build.n)?;
            let weighted = with_inferred_weights(dg)?;
            let w = weighted.weights().expect("inference attaches weights");
            let q = weighted.quiver();
            let rows: Vec<Value> = (0..q.n_arrows())
                .map(|ix| json!([q.arrow(ix as u32).name, w.arrow_weight(ix as u32)]))
                .collect();
            Ok(envelope(
                "weights",
                &digest,
                json!({
                    "construct": construct_param(build.construct),
                    "field": field_name(&field),
                    "n": build.n,
                }),
                json!({ "weights": rows }),
                vec!["d_squared_zero", "weights_admissible"],
                json!({}),
            ))
        }
        Cmd::Cohomology {
            input,
            build,
            max_weight,
            min_degree,
            seed,
        } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let dg = build_dg(&model, build.construct, build.n)?;
            let weighted = with_inferred_weights(dg)?;
            let opts = engine_options(field.clone(), seed)?;
            let table = cohomology(&weighted, max_weight, min_degree, &opts)?;
            let rows: Vec<Value> = table.entries().map(|(w, p, d)| json!([w, p, d])).collect();
            let mut certs = vec!["d_squared_zero", "weights_admissible"];
            if seed.is_some() {
                certs.push("permutation_self_test");
            }
            Ok(envelope(
                "cohomology",
                &digest,
                json!({
                    "construct": construct_param(build.construct),
                    "field": field_name(&field),
                    "max_weight": max_weight,
                    "min_degree": min_degree,
                    "n": build.n,
                    "seed": seed,
                }),
                json!({ "table": rows }),
                certs,
                json!({ "max_weight": max_weight, "min_degree": min_degree }),
            ))
        }
        Cmd::Stalk {
            input,
            build,
            max_weight,
            min_degree,
            seed,
        } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let dg = build_dg(&model, build.construct, build.n)?;
            let weighted = with_inferred_weights(dg)?;
            let opts = engine_options(field.clone(), seed)?;
            let verdict = stalk_check(&weighted, max_weight, min_degree, &opts)?;
            let result = match &verdict {
                StalkVerdict::StalkUpTo { .. } => json!({ "verdict": "stalk" }),
                StalkVerdict::Counterexample {
                    weight,
                    degree,
                    dim,
                } => json!({
                    "verdict": "counterexample",
                    "counterexample": { "weight": weight, "degree": degree, "dim": dim },
                }),
            };
            let mut certs = vec!["d_squared_zero", "weights_admissible"];
            if seed.is_some() {
                certs.push("permutation_self_test");
            }
            Ok(envelope(
                "stalk",
                &digest,
                json!({
                    "construct": construct_param(build.construct),
                    "field": field_name(&field),
                    "max_weight": max_weight,
                    "min_degree": min_degree,
                    "n": build.n,
                    "seed": seed,
                }),
                result,
                certs,
                json!({ "max_weight": max_weight, "min_degree": min_degree }),
            ))
        }
        Cmd::H0 { input, build } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let dg = build_dg(&model, build.construct, build.n)?;
            let h0 = h0_presentation(&dg)?;
            let relations: Vec<String> = h0.relations().iter().map(|r| r.to_string()).collect();
            Ok(envelope(
                "h0",
                &digest,
                json!({
                    "construct": construct_param(build.construct),
                    "field": field_name(&field),
                    "n": build.n,
                }),
                json!({
                    "model": print(&QuiverModel::Presentation(h0)),
                    "relations": relations,
                }),
                vec!["d_squared_zero"],
                json!({}),
            ))
        }
        Cmd::Dims {
            input,
            build,
            max_len,
        } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let p = resolve_presentation(&model, build.construct, build.n)?;
            let profile = dimension_profile(&p, max_len)?;
            let total = match profile.total {
                TotalDim::Finite(v) => json!({ "kind": "finite", "value": v }),
                TotalDim::AtLeast(v) => json!({ "kind": "at_least", "value": v }),
                TotalDim::Unknown => json!({ "kind": "unknown", "value": Value::Null }),
            };
            let certs = if matches!(profile.total, TotalDim::Finite(_)) {
                vec!["total_dimension_certified"]
            } else {
                vec![]
            };
            Ok(envelope(
                "dims",
                &digest,
                json!({
                    "construct": construct_param(build.construct),
                    "field": field_name(&field),
                    "max_len": max_len,
                    "n": build.n,
                }),
                json!({
                    "per_length": profile.per_length,
                    "total": total,
                    "exact": profile.exact,
                    "stable": profile.stable,
                }),
                certs,
                json!({ "max_len": max_len }),
            ))
        }
        Cmd::Hochschild {
            input,
            build,
            max_n,
            max_len,
        } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let p = resolve_presentation(&model, build.construct, build.n)?;
            let a = FiniteDimAlgebra::from_presentation(&p, max_len)?;
            let dims = hochschild(&a, max_n, field.clone(), tensor_cap()?)?;
            Ok(envelope(
                "hochschild",
                &digest,
                json!({
                    "construct": construct_param(build.construct),
                    "field": field_name(&field),
                    "max_len": max_len,
                    "max_n": max_n,
                    "n": build.n,
                }),
                json!({ "algebra_dim": a.dim(), "dims": dims_json(&dims) }),
                vec!["finite_dimension_certified"],
                json!({ "max_len": max_len, "max_n": max_n }),
            ))
        }
        Cmd::Cyclic {
            input,
            build,
            max_n,
            max_len,
        } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let p = resolve_presentation(&model, build.construct, build.n)?;
            let a = FiniteDimAlgebra::from_presentation(&p, max_len)?;
            let dims = cyclic(&a, max_n, field.clone(), tensor_cap()?)?;
            Ok(envelope(
                "cyclic",
                &digest,
                json!({
                    "construct": construct_param(build.construct),
                    "field": field_name(&field),
                    "max_len": max_len,
                    "max_n": max_n,
                    "n": build.n,
                }),
                json!({ "algebra_dim": a.dim(), "dims": dims_json(&dims) }),
                vec!["finite_dimension_certified"],
                json!({ "max_len": max_len, "max_n": max_n }),
            ))
        }
        Cmd::NegativeCyclic {
            input,
            build,
            max_n,
            cols,
            max_len,
        } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let p = resolve_presentation(&model, build.construct, build.n)?;
            let a = FiniteDimAlgebra::from_presentation(&p, max_len)?;
            let rep = negative_cyclic(&a, max_n, cols, field.clone(), tensor_cap()?)?;
            let mut certs = vec!["finite_dimension_certified"];
            if rep.stabilized {
                certs.push("two_point_column_agreement");
            }
            Ok(envelope(
                "negative-cyclic",
                &digest,
                json!({
                    "cols": cols,
                    "construct": construct_param(build.construct),
                    "field": field_name(&field),
                    "max_len": max_len,
                    "max_n": max_n,
                    "n": build.n,
                }),
                json!({
                    "algebra_dim": a.dim(),
                    "dims": dims_json(&rep.dims),
                    "stabilized": rep.stabilized,
                    "columns": rep.col_trunc,
                }),
                certs,
                json!({ "cols": cols, "max_len": max_len, "max_n": max_n }),
            ))
        }
        Cmd::RelCyclic {
            input,
            max_n,
            max_len,
        } => {
            let (digest, model) = load(&input.file)?;
            let field = parse_field(&input.field)?;
            let p = resolve_presentation(&model, None, 0)?;
            let f = frozen_inclusion(&p, max_len)?;
            let rep = relative_cyclic(&f, max_n, field.clone(), tensor_cap()?)?;
            let mut certs = vec!["finite_dimension_certified"];
            if rep.hh_les_consistent && rep.hc_les_consistent {
                certs.push("les_dimensionally_exact");
            }
            Ok(envelope(
                "rel-cyclic",
                &digest,
                json!({
                    "field": field_name(&field),
                    "max_len": max_len,
                    "max_n": max_n,
                    "subalgebra": "frozen",
                }),
                json!({
                    "algebra_dim": f.target().dim(),
                    "subalgebra_dim": f.source().dim(),
                    "hh": dims_json(&rep.hh),
                    "hc": dims_json(&rep.hc),
                    "hh_les_consistent": rep.hh_les_consistent,
                    "hc_les_consistent": rep.hc_les_consistent,
                }),
                certs,
                json!({ "max_len": max_len, "max_n": max_n }),
            ))
        }
    }
}
