//! End-to-end orchestration.
//!
//! Classes run in parallel up to the configured job count; inside a class the
//! stages run in order and each writes its artifact before the next starts.
//! A failing class does not stop the others. Layout under the output
//! directory:
//!
//! ```text
//! docs/<fqcn>.json          canonical class document
//! units/<fqcn>.json         partition units
//! prompts/<fqcn>.json       rendered prompts
//! exchanges/<fqcn>.json     model responses
//! corpus/<fqcn>.json        oracle records
//! holders/OracleHolder_*.java
//! validation/<fqcn>.json    compile outcomes
//! conformance/<name>.json   runner results
//! report.json, report.md
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::artifact::{
    class_file, write_json, write_text, CorpusArtifact, ExchangesArtifact, PromptEntry, PromptsArtifact,
    UnitExchange, UnitsArtifact, ValidationArtifact, ValidationStatus, SCHEMA_VERSION,
};
use crate::clock::{Clock, SystemClock};
use crate::config::{AblationSet, PipelineConfig, ToolchainChoice};
use crate::conformance::ConformanceRun;
use crate::doc_model::{load_class_doc, ClassDoc};
use crate::eval::{
    apply_annotations, compute_compilability, compute_coverage, load_entries, render_report, validate_catalog,
    AnnotationEntry, CompilabilityRow, CoverageRow, EvalReport, PropertyCatalogEntry, PropertyKind,
    ReportFormat,
};
use crate::extract::{dedupe_names, extract_oracles, OracleRecord};
use crate::gateway::{CassetteStore, HttpTransport, LlmGateway, LlmRequest, Transport};
use crate::partition::{partition, PartitionUnit};
use crate::prompt::{render_prompt, PromptConfig};
use crate::validate::{
    apply_outcomes, compile_check, holder_class_name, wrap_for_compile, JavacToolchain, Toolchain, ValidateError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Setup,
    Ingest,
    Partition,
    Prompt,
    Generate,
    Extract,
    Validate,
    Eval,
    Run,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Setup => "setup",
            Stage::Ingest => "ingest",
            Stage::Partition => "partition",
            Stage::Prompt => "prompt",
            Stage::Generate => "generate",
            Stage::Extract => "extract",
            Stage::Validate => "validate",
            Stage::Eval => "eval",
            Stage::Run => "run",
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{stage} failed for {subject}: {message}")]
pub struct PipelineError {
    pub stage: Stage,
    /// Class name, input path, or `pipeline` for setup failures.
    pub subject: String,
    pub message: String,
}

impl PipelineError {
    pub fn new(stage: Stage, subject: impl Into<String>, message: impl fmt::Display) -> Self {
        PipelineError {
            stage,
            subject: subject.into(),
            message: message.to_string(),
        }
    }
}

/// Units for one class: one per method, or a single whole-class unit when
/// partitioning is ablated.
pub fn build_units(doc: &ClassDoc, no_partition: bool) -> Result<Vec<PartitionUnit>, crate::doc_model::DocError> {
    if no_partition {
        Ok(PartitionUnit::whole_class(doc).into_iter().collect())
    } else {
        partition(doc)
    }
}

pub fn prompt_config(fqcn: &str, ablations: &AblationSet) -> PromptConfig {
    PromptConfig::new(fqcn).with_ablation(ablations.prompt.iter().copied())
}

/// Extracts every exchange, then dedupes names across the whole class.
/// Units whose responses hold no oracle are reported and skipped.
pub fn extract_corpus(
    units: &[PartitionUnit],
    exchanges: &[UnitExchange],
) -> (Vec<OracleRecord>, Vec<crate::extract::ExtractError>) {
    let by_id: HashMap<String, &PartitionUnit> = units.iter().map(|u| (u.id(), u)).collect();
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for ex in exchanges {
        let Some(unit) = by_id.get(&ex.unit_id) else {
            errors.push(crate::extract::ExtractError::NoOraclesFound {
                unit_id: ex.unit_id.clone(),
            });
            continue;
        };
        match extract_oracles(&ex.exchange, unit) {
            Ok(found) => records.extend(found),
            Err(e) => errors.push(e),
        }
    }
    (dedupe_names(records), errors)
}

/// Documentation inputs in a stable order: files as given, directories
/// expanded to their `.json` and `.java` files sorted by name.
pub fn discover_docs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, PipelineError> {
    let mut out = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(input)
                .map_err(|e| PipelineError::new(Stage::Ingest, input.display().to_string(), e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.is_file() && matches!(p.extension().and_then(|e| e.to_str()), Some("json" | "java"))
                })
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(input.clone());
        }
    }
    Ok(out)
}

/// Everything the report needs from one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSummary {
    pub fqcn: String,
    pub oracle_count: usize,
    pub compilability: Option<CompilabilityRow>,
    pub assertion: Option<CoverageRow>,
    pub exception: Option<CoverageRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineSummary {
    pub classes: Vec<ClassSummary>,
    pub report: EvalReport,
    pub errors: Vec<PipelineError>,
}

impl PipelineSummary {
    pub fn succeeded(&self) -> bool {
        self.errors.is_empty()
    }
}

pub struct Pipeline {
    cfg: PipelineConfig,
    clock: Arc<dyn Clock>,
    transport: Option<Box<dyn Transport>>,
    toolchain: Option<Arc<dyn Toolchain>>,
}

enum ResolvedToolchain {
    Ready(Arc<dyn Toolchain>),
    Skipped(String),
}

impl Pipeline {
    pub fn new(cfg: PipelineConfig) -> Self {
        Pipeline {
            cfg,
            clock: Arc::new(SystemClock),
            transport: None,
            toolchain: None,
        }
    }

    pub fn with_clock(mut self, clock: Arc<dyn Clock>) -> Self {
        self.clock = clock;
        self
    }

    /// Replaces the HTTP client used in live and record modes.
    pub fn with_transport(mut self, transport: Box<dyn Transport>) -> Self {
        self.transport = Some(transport);
        self
    }

    /// Replaces toolchain discovery.
    pub fn with_toolchain(mut self, toolchain: Arc<dyn Toolchain>) -> Self {
        self.toolchain = Some(toolchain);
        self
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    fn dir(&self, stage: &str) -> PathBuf {
        self.cfg.output_dir.join(stage)
    }

    fn gateway(&mut self) -> Result<LlmGateway, PipelineError> {
        let store = CassetteStore::open(&self.cfg.cassette_dir)
            .map_err(|e| PipelineError::new(Stage::Setup, "pipeline", e))?;
        let mut gateway = LlmGateway::new(store).with_clock(self.clock.clone());
        if self.cfg.mode.needs_transport() {
            let transport = match self.transport.take() {
                Some(t) => t,
                None => Box::new(HttpTransport::from_env().map_err(|e| PipelineError::new(Stage::Generate, "pipeline", e))?),
            };
            gateway = gateway.with_transport(transport);
        }
        Ok(gateway)
    }

    fn resolve_toolchain(&self) -> Result<ResolvedToolchain, PipelineError> {
        if let Some(t) = &self.toolchain {
            return Ok(ResolvedToolchain::Ready(t.clone()));
        }
        let found = match &self.cfg.toolchain {
            ToolchainChoice::Disabled => return Ok(ResolvedToolchain::Skipped("validation disabled".into())),
            ToolchainChoice::Path(p) => JavacToolchain::locate(Some(p))
                .map_err(|e| PipelineError::new(Stage::Setup, "pipeline", e))?,
            ToolchainChoice::Auto => match JavacToolchain::locate(None) {
                Ok(t) => t,
                Err(e) => {
                    log::warn!("{e}; oracles stay unchecked");
                    return Ok(ResolvedToolchain::Skipped(e.to_string()));
                }
            },
        };
        Ok(ResolvedToolchain::Ready(Arc::new(found)))
    }

    /// Runs every stage over every input. `Err` means the pipeline could not
    /// start; per-class failures are collected in the summary.
    pub fn run(mut self) -> Result<PipelineSummary, PipelineError> {
        self.cfg
            .validate()
            .map_err(|e| PipelineError::new(Stage::Setup, "pipeline", e))?;
        let docs = discover_docs(&self.cfg.input_docs)?;
        let gateway = self.gateway()?;
        let toolchain = self.resolve_toolchain()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.cfg.jobs)
            .build()
            .map_err(|e| PipelineError::new(Stage::Setup, "pipeline", e))?;

        let ingested: Vec<Result<ClassDoc, PipelineError>> = pool.install(|| {
            docs.par_iter()
                .map(|path| self.ingest(path))
                .collect()
        });
        let mut errors = Vec::new();
        let mut seen: BTreeMap<String, PathBuf> = BTreeMap::new();
        let mut classes = Vec::new();
        for (path, result) in docs.iter().zip(ingested) {
            match result {
                Ok(doc) => {
                    if let Some(first) = seen.insert(doc.fqcn.clone(), path.clone()) {
                        errors.push(PipelineError::new(
                            Stage::Ingest,
                            doc.fqcn.clone(),
                            format!("documented twice ({} and {})", first.display(), path.display()),
                        ));
                    } else {
                        classes.push(doc);
                    }
                }
                Err(e) => errors.push(e),
            }
        }

        let results: Vec<(ClassSummary, Vec<PipelineError>)> = pool.install(|| {
            classes
                .par_iter()
                .map(|doc| self.run_class(doc, &gateway, &toolchain))
                .collect()
        });
        let mut summaries = Vec::new();
        for (summary, errs) in results {
            summaries.push(summary);
            errors.extend(errs);
        }

        let report = EvalReport::new(
            summaries.iter().filter_map(|s| s.compilability.clone()).collect(),
            summaries.iter().filter_map(|s| s.assertion.clone()).collect(),
            summaries.iter().filter_map(|s| s.exception.clone()).collect(),
        );
        let report_errors = [
            ("report.json", ReportFormat::Json),
            ("report.md", ReportFormat::Markdown),
        ]
        .into_iter()
        .filter_map(|(name, format)| {
            write_text(&self.cfg.output_dir.join(name), &render_report(&report, format))
                .err()
                .map(|e| PipelineError::new(Stage::Eval, "pipeline", e))
        });
        errors.extend(report_errors.collect::<Vec<_>>());

        if let Some(runner) = &self.cfg.runner {
            for binding in &runner.fixtures {
                if let Err(e) = self.run_fixture(&binding.fqcn, &binding.fixture, runner) {
                    errors.push(e);
                }
            }
        }
        Ok(PipelineSummary {
            classes: summaries,
            report,
            errors,
        })
    }

    fn ingest(&self, path: &Path) -> Result<ClassDoc, PipelineError> {
        let subject = path.display().to_string();
        let doc = load_class_doc(path).map_err(|e| PipelineError::new(Stage::Ingest, subject.clone(), e))?;
        write_text(&class_file(&self.dir("docs"), &doc.fqcn, "json"), &doc.to_canonical_json())
            .map_err(|e| PipelineError::new(Stage::Ingest, subject, e))?;
        Ok(doc)
    }

    fn run_class(
        &self,
        doc: &ClassDoc,
        gateway: &LlmGateway,
        toolchain: &ResolvedToolchain,
    ) -> (ClassSummary, Vec<PipelineError>) {
        let mut summary = ClassSummary {
            fqcn: doc.fqcn.clone(),
            oracle_count: 0,
            compilability: None,
            assertion: None,
            exception: None,
        };
        let mut errors = Vec::new();
        if let Err(e) = self.class_stages(doc, gateway, toolchain, &mut summary, &mut errors) {
            errors.push(e);
        }
        (summary, errors)
    }

    fn class_stages(
        &self,
        doc: &ClassDoc,
        gateway: &LlmGateway,
        toolchain: &ResolvedToolchain,
        summary: &mut ClassSummary,
        errors: &mut Vec<PipelineError>,
    ) -> Result<(), PipelineError> {
        let fqcn = doc.fqcn.as_str();
        let fail = |stage: Stage| move |e: &dyn fmt::Display| PipelineError::new(stage, fqcn, e);

        let units = build_units(doc, self.cfg.ablations.no_partition).map_err(|e| fail(Stage::Partition)(&e))?;
        write_json(
            &class_file(&self.dir("units"), fqcn, "json"),
            &UnitsArtifact::new(fqcn, units.clone()),
        )
        .map_err(|e| fail(Stage::Partition)(&e))?;

        let prompt_cfg = prompt_config(fqcn, &self.cfg.ablations);
        let prompts = units
            .iter()
            .map(|u| {
                render_prompt(u, &prompt_cfg).map(|doc| PromptEntry {
                    unit_id: u.id(),
                    prompt: doc.rendered_text,
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| fail(Stage::Prompt)(&e))?;
        write_json(
            &class_file(&self.dir("prompts"), fqcn, "json"),
            &PromptsArtifact {
                schema_version: SCHEMA_VERSION,
                fqcn: fqcn.to_string(),
                ablation: self.cfg.ablations.prompt.iter().copied().collect(),
                prompts: prompts.clone(),
            },
        )
        .map_err(|e| fail(Stage::Prompt)(&e))?;

        let mut exchanges = Vec::new();
        for entry in &prompts {
            let request = LlmRequest {
                model_id: self.cfg.model_id.clone(),
                temperature: self.cfg.temperature,
                prompt: entry.prompt.clone(),
            };
            match gateway.complete(&request, self.cfg.mode) {
                Ok(exchange) => exchanges.push(UnitExchange {
                    unit_id: entry.unit_id.clone(),
                    exchange,
                }),
                Err(e) => errors.push(PipelineError::new(Stage::Generate, fqcn, format!("{}: {e}", entry.unit_id))),
            }
        }
        write_json(
            &class_file(&self.dir("exchanges"), fqcn, "json"),
            &ExchangesArtifact {
                schema_version: SCHEMA_VERSION,
                fqcn: fqcn.to_string(),
                exchanges: exchanges.clone(),
            },
        )
        .map_err(|e| fail(Stage::Generate)(&e))?;

        let (mut records, extract_errors) = extract_corpus(&units, &exchanges);
        errors.extend(extract_errors.into_iter().map(|e| PipelineError::new(Stage::Extract, fqcn, e)));
        summary.oracle_count = records.len();
        let corpus_path = class_file(&self.cfg.corpus_dir(), fqcn, "json");
        let method_count = doc.methods.len() as u64;
        let write_corpus = |records: &[OracleRecord]| {
            write_json(&corpus_path, &CorpusArtifact::new(fqcn, method_count, records.to_vec()))
        };
        write_corpus(&records).map_err(|e| fail(Stage::Extract)(&e))?;

        let validation = self.validate_class(fqcn, &records, toolchain)?;
        apply_outcomes(&mut records, &validation.outcomes);
        write_json(&class_file(&self.dir("validation"), fqcn, "json"), &validation)
            .map_err(|e| fail(Stage::Validate)(&e))?;
        write_corpus(&records).map_err(|e| fail(Stage::Validate)(&e))?;

        let annotations = self.eval_class(fqcn, method_count, &records, &validation, summary)?;
        if !annotations.is_empty() {
            apply_annotations(&mut records, &annotations);
            write_corpus(&records).map_err(|e| fail(Stage::Eval)(&e))?;
        }
        Ok(())
    }

    fn validate_class(
        &self,
        fqcn: &str,
        records: &[OracleRecord],
        toolchain: &ResolvedToolchain,
    ) -> Result<ValidationArtifact, PipelineError> {
        let fail = |e: &dyn fmt::Display| PipelineError::new(Stage::Validate, fqcn, e);
        let holder = wrap_for_compile(records, fqcn).map_err(|e| fail(&e))?;
        let holder_path = self.dir("holders").join(format!("{}.java", holder_class_name(fqcn)));
        write_text(&holder_path, &holder).map_err(|e| fail(&e))?;
        let holder_rel = PathBuf::from("holders").join(format!("{}.java", holder_class_name(fqcn)));
        let unchecked = |reason: String| ValidationArtifact {
            schema_version: SCHEMA_VERSION,
            fqcn: fqcn.to_string(),
            status: ValidationStatus::Unchecked,
            reason: Some(reason),
            holder: holder_rel.clone(),
            outcomes: Vec::new(),
        };
        match toolchain {
            ResolvedToolchain::Skipped(reason) => Ok(unchecked(reason.clone())),
            ResolvedToolchain::Ready(tc) => match compile_check(&holder, tc.as_ref()) {
                Ok(outcomes) => Ok(ValidationArtifact {
                    schema_version: SCHEMA_VERSION,
                    fqcn: fqcn.to_string(),
                    status: ValidationStatus::Checked,
                    reason: None,
                    holder: holder_rel.clone(),
                    outcomes,
                }),
                Err(e @ ValidateError::ToolchainUnavailable(_)) => {
                    log::warn!("{fqcn}: {e}; oracles stay unchecked");
                    Ok(unchecked(e.to_string()))
                }
                Err(e) => Err(fail(&e)),
            },
        }
    }

    fn eval_class(
        &self,
        fqcn: &str,
        method_count: u64,
        records: &[OracleRecord],
        validation: &ValidationArtifact,
        summary: &mut ClassSummary,
    ) -> Result<Vec<AnnotationEntry>, PipelineError> {
        let fail = |e: &dyn fmt::Display| PipelineError::new(Stage::Eval, fqcn, e);
        let annotations: Vec<AnnotationEntry> = match &self.cfg.annotations_dir {
            Some(dir) => {
                let path = class_file(dir, fqcn, "json");
                if path.exists() {
                    load_entries(&path).map_err(|e| fail(&e))?
                } else {
                    Vec::new()
                }
            }
            None => Vec::new(),
        };
        summary.compilability = Some(
            compute_compilability(fqcn, method_count, records, &validation.outcomes, &annotations)
                .map_err(|e| fail(&e))?,
        );
        if let Some(dir) = &self.cfg.catalog_dir {
            let catalog: Vec<PropertyCatalogEntry> =
                load_entries(&class_file(dir, fqcn, "json")).map_err(|e| fail(&e))?;
            validate_catalog(&catalog).map_err(|e| fail(&e))?;
            summary.assertion = Some(
                compute_coverage(fqcn, &catalog, records, &annotations, PropertyKind::Assertion)
                    .map_err(|e| fail(&e))?,
            );
            summary.exception = Some(
                compute_coverage(fqcn, &catalog, records, &annotations, PropertyKind::Exception)
                    .map_err(|e| fail(&e))?,
            );
        }
        Ok(annotations)
    }

    fn run_fixture(
        &self,
        fqcn: &str,
        fixture: &Path,
        runner: &crate::config::RunnerConfig,
    ) -> Result<(), PipelineError> {
        let fail = |e: &dyn fmt::Display| PipelineError::new(Stage::Run, fqcn, e);
        let holder = self.dir("holders").join(format!("{}.java", holder_class_name(fqcn)));
        let report = ConformanceRun {
            runner: &runner.path,
            holder: &holder,
            fixture,
            timeout: runner.timeout,
        }
        .execute()
        .map_err(|e| fail(&e))?;
        let name = fixture
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "fixture".into());
        write_json(&self.dir("conformance").join(format!("{name}.json")), &report).map_err(|e| fail(&e))?;
        if !report.passed() {
            return Err(fail(&format!(
                "{} of {} checks differ from the fixture's expectations",
                report.mismatches.len(),
                report.results.len()
            )));
        }
        Ok(())
    }
}

/// Runs the pipeline with the system clock and environment-configured
/// endpoint and toolchain.
pub fn run_pipeline(cfg: PipelineConfig) -> Result<PipelineSummary, PipelineError> {
    Pipeline::new(cfg).run()
}

