use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use chrono::{DateTime, Utc};
use clap::{Args, Parser, Subcommand};

use oracle_forge::artifact::{
    read_json, to_json, write_json, write_text, CorpusArtifact, ExchangesArtifact, PromptEntry, PromptsArtifact,
    UnitExchange, UnitsArtifact, ValidationArtifact, ValidationStatus, SCHEMA_VERSION,
};
use oracle_forge::clock::{Clock, FixedClock, SystemClock};
use oracle_forge::config::{
    AblationSet, ConfigError, FixtureBinding, PipelineConfig, RunnerConfig, ToolchainChoice, DEFAULT_CONFIG_FILE,
};
use oracle_forge::conformance::{ConformanceRun, DEFAULT_TIMEOUT};
use oracle_forge::doc_model::load_class_doc;
use oracle_forge::eval::{
    apply_annotations, compute_compilability, compute_coverage, load_entries, render_report, validate_catalog,
    AnnotationEntry, EvalReport, PropertyCatalogEntry, PropertyKind, ReportFormat,
};
use oracle_forge::gateway::{CassetteStore, HttpTransport, LlmGateway, LlmRequest, Mode, DEFAULT_MODEL, DEFAULT_TEMPERATURE};
use oracle_forge::partition::UnitScope;
use oracle_forge::pipeline::{build_units, extract_corpus, prompt_config, Pipeline};
use oracle_forge::prompt::render_prompt;
use oracle_forge::validate::{apply_outcomes, compile_check, holder_class_name, wrap_for_compile, JavacToolchain};

#[derive(Parser)]
#[command(name = "oracle-forge", version, about = "Generate test oracles from Javadoc API documentation")]
struct Cli {
    /// More log output (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a documentation file into canonical JSON.
    Ingest {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a class document into partition units.
    Partition {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Ablation flags; only noPartition matters here.
        #[arg(long = "ablate", value_delimiter = ',')]
        ablate: Vec<String>,
    },
    /// Render prompts for partition units.
    Prompt {
        /// Units artifact produced by `partition`.
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        units: Option<PathBuf>,
        /// Documentation file to partition on the fly.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Only this unit, e.g. `java.lang.Object.equals(Object)`.
        #[arg(long)]
        unit: Option<String>,
        #[arg(long = "ablate", value_delimiter = ',')]
        ablate: Vec<String>,
        /// Also write the prompts artifact here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Send prompts to the model, or replay them from cassettes.
    Generate {
        #[arg(long)]
        prompts: PathBuf,
        #[arg(long)]
        cassettes: PathBuf,
        #[arg(long, default_value = "replay")]
        mode: Mode,
        #[arg(long, default_value = DEFAULT_MODEL)]
        model: String,
        #[arg(long, default_value_t = DEFAULT_TEMPERATURE)]
        temperature: f64,
        #[command(flatten)]
        clock: ClockArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Pull oracle methods out of model responses.
    Extract {
        #[arg(long)]
        units: PathBuf,
        #[arg(long)]
        exchanges: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compile a corpus with javac and record per-oracle outcomes.
    Validate {
        #[arg(long)]
        corpus: PathBuf,
        /// javac executable; defaults to ORACLE_FORGE_JAVAC, then PATH.
        #[arg(long)]
        toolchain: Option<PathBuf>,
        /// Where to write the holder source.
        #[arg(long)]
        holder: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Store compile statuses back into the corpus file.
        #[arg(long)]
        write_corpus: bool,
    },
    /// Compute compilability, precision and recall tables.
    Eval {
        /// Corpus files or directories.
        #[arg(long, required = true, num_args = 1..)]
        corpus: Vec<PathBuf>,
        /// Catalog files or directories.
        #[arg(long, num_args = 1..)]
        catalog: Vec<PathBuf>,
        /// Annotation files or directories.
        #[arg(long, num_args = 1..)]
        annotations: Vec<PathBuf>,
        #[arg(long, default_value = "table")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Execute an oracle holder against fixture classes through a runner.
    RunConformance {
        #[arg(long)]
        runner: PathBuf,
        #[arg(long)]
        holder: PathBuf,
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TIMEOUT.as_secs())]
        timeout_secs: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every stage over a set of classes.
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct ClockArg {
    /// Fixed timestamp (RFC 3339) used instead of the system clock.
    #[arg(long = "clock")]
    clock: Option<DateTime<Utc>>,
}

impl ClockArg {
    fn clock(&self) -> Arc<dyn Clock> {
        match self.clock {
            Some(t) => Arc::new(FixedClock(t)),
            None => Arc::new(SystemClock),
        }
    }
}

#[derive(Args)]
struct PipelineArgs {
    /// Config file; `oracle-forge.toml` in the working directory is used when present.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, num_args = 1..)]
    docs: Vec<PathBuf>,
    #[arg(long)]
    cassettes: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    corpus_dir: Option<PathBuf>,
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long = "ablate", value_delimiter = ',')]
    ablate: Vec<String>,
    /// javac path, `auto`, or `none`.
    #[arg(long)]
    toolchain: Option<ToolchainChoice>,
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long)]
    annotations: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    runner: Option<PathBuf>,
    /// `fqcn=fixture.json`; repeatable.
    #[arg(long = "fixture")]
    fixtures: Vec<String>,
    #[arg(long)]
    timeout_secs: Option<u64>,
    #[command(flatten)]
    clock: ClockArg,
}

/// Failures that should exit with the usage status.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() || e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_text(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Ingest { input, out } => {
            let doc = load_class_doc(&input)?;
            emit(out.as_deref(), &doc.to_canonical_json())?;
        }
        Command::Partition { input, out, ablate } => {
            let ablations = AblationSet::parse(&ablate).map_err(|e| UsageError(e.to_string()))?;
            let doc = load_class_doc(&input)?;
            let units = build_units(&doc, ablations.no_partition)?;
            emit(out.as_deref(), &to_json(&UnitsArtifact::new(doc.fqcn, units)))?;
        }
        Command::Prompt {
            units,
            input,
            unit,
            ablate,
            out,
        } => {
            let ablations = AblationSet::parse(&ablate).map_err(|e| UsageError(e.to_string()))?;
            let artifact = match (units, input) {
                (Some(path), _) => read_json::<UnitsArtifact>(&path)?,
                (None, Some(path)) => {
                    let doc = load_class_doc(&path)?;
                    let units = build_units(&doc, ablations.no_partition)?;
                    UnitsArtifact::new(doc.fqcn, units)
                }
                (None, None) => return Err(UsageError("give --units or --in".into()).into()),
            };
            let selected: Vec<_> = match &unit {
                Some(id) => {
                    let found: Vec<_> = artifact.units.iter().filter(|u| &u.id() == id || &u.key() == id).collect();
                    if found.is_empty() {
                        let known: Vec<String> = artifact.units.iter().map(|u| u.id()).collect();
                        return Err(UsageError(format!("no unit `{id}`; known units: {}", known.join(", "))).into());
                    }
                    found
                }
                None => artifact.units.iter().collect(),
            };
            let cfg = prompt_config(&artifact.fqcn, &ablations);
            let mut prompts = Vec::new();
            for u in selected {
                prompts.push(PromptEntry {
                    unit_id: u.id(),
                    prompt: render_prompt(u, &cfg)?.rendered_text,
                });
            }
            if let Some(path) = out {
                write_json(
                    &path,
                    &PromptsArtifact {
                        schema_version: SCHEMA_VERSION,
                        fqcn: artifact.fqcn.clone(),
                        ablation: ablations.prompt.iter().copied().collect(),
                        prompts: prompts.clone(),
                    },
                )?;
            }
            if prompts.len() == 1 {
                print!("{}", prompts[0].prompt);
            } else {
                for (i, p) in prompts.iter().enumerate() {
                    if i > 0 {
                        println!();
                    }
                    println!("----- {} -----", p.unit_id);
                    print!("{}", p.prompt);
                }
            }
        }
        Command::Generate {
            prompts,
            cassettes,
            mode,
            model,
            temperature,
            clock,
            out,
        } => {
            let artifact: PromptsArtifact = read_json(&prompts)?;
            let mut gateway = LlmGateway::new(CassetteStore::open(&cassettes)?).with_clock(clock.clock());
            if mode.needs_transport() {
                gateway = gateway.with_transport(Box::new(HttpTransport::from_env()?));
            }
            let mut exchanges = Vec::new();
            for entry in &artifact.prompts {
                let request = LlmRequest {
                    model_id: model.clone(),
                    temperature,
                    prompt: entry.prompt.clone(),
                };
                let exchange = gateway
                    .complete(&request, mode)
                    .with_context(|| format!("generating for {}", entry.unit_id))?;
                exchanges.push(UnitExchange {
                    unit_id: entry.unit_id.clone(),
                    exchange,
                });
            }
            write_json(
                &out,
                &ExchangesArtifact {
                    schema_version: SCHEMA_VERSION,
                    fqcn: artifact.fqcn,
                    exchanges,
                },
            )?;
        }
        Command::Extract { units, exchanges, out } => {
            let units: UnitsArtifact = read_json(&units)?;
            let exchanges: ExchangesArtifact = read_json(&exchanges)?;
            let (records, errors) = extract_corpus(&units.units, &exchanges.exchanges);
            let method_count = match units.units.first().map(|u| u.scope) {
                Some(UnitScope::WholeClass) => units.units[0].methods().count(),
                _ => units.units.len(),
            };
            write_json(&out, &CorpusArtifact::new(units.fqcn, method_count as u64, records))?;
            for e in &errors {
                eprintln!("warning: {e}");
            }
            if !errors.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Validate {
            corpus,
            toolchain,
            holder,
            out,
            write_corpus,
        } => {
            let mut artifact = CorpusArtifact::load(&corpus)?;
            let source = wrap_for_compile(&artifact.records, &artifact.fqcn)?;
            let holder_path =
                holder.unwrap_or_else(|| PathBuf::from(format!("{}.java", holder_class_name(&artifact.fqcn))));
            write_text(&holder_path, &source)?;
            let javac = JavacToolchain::locate(toolchain.as_deref())?;
            let outcomes = compile_check(&source, &javac)?;
            for o in &outcomes {
                eprintln!("{}: {:?} {}", o.oracle_id, o.status, o.error_class);
            }
            let validation = ValidationArtifact {
                schema_version: SCHEMA_VERSION,
                fqcn: artifact.fqcn.clone(),
                status: ValidationStatus::Checked,
                reason: None,
                holder: holder_path,
                outcomes,
            };
            emit(out.as_deref(), &to_json(&validation))?;
            if write_corpus {
                apply_outcomes(&mut artifact.records, &validation.outcomes);
                write_json(&corpus, &artifact)?;
            }
        }
        Command::Eval {
            corpus,
            catalog,
            annotations,
            format,
            out,
        } => {
            let format: ReportFormat = format.parse().map_err(|e: oracle_forge::eval::EvalError| UsageError(e.to_string()))?;
            let report = eval_command(&corpus, &catalog, &annotations)?;
            emit(out.as_deref(), &render_report(&report, format))?;
        }
        Command::RunConformance {
            runner,
            holder,
            fixture,
            timeout_secs,
            out,
        } => {
            let report = ConformanceRun {
                runner: &runner,
                holder: &holder,
                fixture: &fixture,
                timeout: Duration::from_secs(timeout_secs),
            }
            .execute()?;
            for r in &report.results {
                println!("{}", serde_json::to_string(r)?);
            }
            for m in &report.mismatches {
                eprintln!(
                    "mismatch: #{} {} expected {:?}, observed {:?} {}",
                    m.index, m.oracle, m.expected, m.observed, m.message
                );
            }
            if let Some(path) = out {
                write_json(&path, &report)?;
            }
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Pipeline(args) => return pipeline_command(args),
    }
    Ok(ExitCode::SUCCESS)
}

fn json_files(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(input)
                .with_context(|| input.display().to_string())?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|e| e == "json"))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(input.clone());
        }
    }
    Ok(out)
}

fn eval_command(corpus: &[PathBuf], catalog: &[PathBuf], annotations: &[PathBuf]) -> Result<EvalReport> {
    let mut corpora = Vec::new();
    for path in json_files(corpus)? {
        corpora.push(CorpusArtifact::load(&path)?);
    }
    let mut catalogs: BTreeMap<String, Vec<PropertyCatalogEntry>> = BTreeMap::new();
    for path in json_files(catalog)? {
        for entry in load_entries::<PropertyCatalogEntry>(&path)? {
            catalogs.entry(entry.target_class.clone()).or_default().push(entry);
        }
    }
    let mut owner: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, c) in corpora.iter().enumerate() {
        for r in &c.records {
            owner.insert(r.id.as_str(), i);
        }
    }
    let mut judged: Vec<Vec<AnnotationEntry>> = vec![Vec::new(); corpora.len()];
    for path in json_files(annotations)? {
        for entry in load_entries::<AnnotationEntry>(&path)? {
            let i = *owner
                .get(entry.oracle_id.as_str())
                .ok_or_else(|| anyhow!("annotation for `{}` matches no oracle in the given corpora", entry.oracle_id))?;
            judged[i].push(entry);
        }
    }

    let (mut compil, mut asserts, mut excepts) = (Vec::new(), Vec::new(), Vec::new());
    for (c, notes) in corpora.iter_mut().zip(&judged) {
        apply_annotations(&mut c.records, notes);
        compil.push(compute_compilability(&c.fqcn, c.method_count, &c.records, &[], notes)?);
        if let Some(entries) = catalogs.get(&c.fqcn) {
            validate_catalog(entries)?;
            asserts.push(compute_coverage(&c.fqcn, entries, &c.records, notes, PropertyKind::Assertion)?);
            excepts.push(compute_coverage(&c.fqcn, entries, &c.records, notes, PropertyKind::Exception)?);
        } else if !catalog.is_empty() {
            bail!("no catalog entries for {}", c.fqcn);
        }
    }
    Ok(EvalReport::new(compil, asserts, excepts))
}

fn pipeline_command(args: PipelineArgs) -> Result<ExitCode> {
    let config_path = args.config.clone().or_else(|| {
        let default = PathBuf::from(DEFAULT_CONFIG_FILE);
        default.is_file().then_some(default)
    });
    let mut cfg = match &config_path {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if !args.docs.is_empty() {
        cfg.input_docs = args.docs;
    }
    if let Some(p) = args.cassettes {
        cfg.cassette_dir = p;
    }
    if let Some(p) = args.out {
        cfg.output_dir = p;
    }
    if let Some(p) = args.corpus_dir {
        cfg.corpus_dir = Some(p);
    }
    if let Some(m) = args.mode {
        cfg.mode = m;
    }
    if let Some(m) = args.model {
        cfg.model_id = m;
    }
    if let Some(t) = args.temperature {
        cfg.temperature = t;
    }
    if !args.ablate.is_empty() {
        cfg.ablations = AblationSet::parse(&args.ablate)?;
    }
    if let Some(t) = args.toolchain {
        cfg.toolchain = t;
    }
    if let Some(p) = args.catalog {
        cfg.catalog_dir = Some(p);
    }
    if let Some(p) = args.annotations {
        cfg.annotations_dir = Some(p);
    }
    if let Some(j) = args.jobs {
        cfg.jobs = j;
    }
    if let Some(path) = args.runner {
        let runner = cfg.runner.get_or_insert(RunnerConfig {
            path: path.clone(),
            timeout: DEFAULT_TIMEOUT,
            fixtures: Vec::new(),
        });
        runner.path = path;
    }
    if !args.fixtures.is_empty() {
        let runner = cfg
            .runner
            .as_mut()
            .ok_or_else(|| UsageError("--fixture needs a runner (--runner or [runner] in the config)".into()))?;
        runner.fixtures = args
            .fixtures
            .iter()
            .map(|f| {
                let (fqcn, path) = f
                    .split_once('=')
                    .ok_or_else(|| UsageError(format!("--fixture expects fqcn=path, got `{f}`")))?;
                Ok(FixtureBinding {
                    fqcn: fqcn.to_string(),
                    fixture: PathBuf::from(path),
                })
            })
            .collect::<Result<_, UsageError>>()?;
    }
    if let (Some(secs), Some(runner)) = (args.timeout_secs, cfg.runner.as_mut()) {
        runner.timeout = Duration::from_secs(secs);
    }
    cfg.validate()?;

    let summary = Pipeline::new(cfg).with_clock(args.clock.clock()).run()?;
    for class in &summary.classes {
        eprintln!("{}: {} oracles", class.fqcn, class.oracle_count);
    }
    if !summary.report.is_empty() {
        print!("{}", render_report(&summary.report, ReportFormat::Table));
    }
    for e in &summary.errors {
        eprintln!("error: {e}");
    }
    Ok(if summary.succeeded() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
