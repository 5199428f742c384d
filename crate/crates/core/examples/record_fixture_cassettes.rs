//! Rebuilds `fixtures/cassettes` from the hand-written responses in
//! `fixtures/responses/<fqcn>/<signature>.md`.
//!
//! Each class document is partitioned and prompted with the default
//! configuration; the pipeline then runs in record mode against a transport
//! that answers every prompt with the matching response file.
//!
//!     cargo run -p oracle-forge --example record_fixture_cassettes

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use oracle_forge::clock::FixedClock;
use oracle_forge::config::{AblationSet, PipelineConfig, ToolchainChoice};
use oracle_forge::doc_model::load_class_doc;
use oracle_forge::gateway::{Mode, ScriptedTransport, TransportFailure};
use oracle_forge::pipeline::{build_units, discover_docs, prompt_config, Pipeline};
use oracle_forge::prompt::render_prompt;

fn main() -> anyhow::Result<()> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let docs = discover_docs(&[fixtures.join("docs")])?;

    let mut answers: HashMap<String, String> = HashMap::new();
    for path in &docs {
        let doc = load_class_doc(path).with_context(|| path.display().to_string())?;
        let cfg = prompt_config(&doc.fqcn, &AblationSet::default());
        for unit in build_units(&doc, false)? {
            let file: PathBuf = fixtures
                .join("responses")
                .join(&doc.fqcn)
                .join(format!("{}.md", unit.key()));
            let response = std::fs::read_to_string(&file).with_context(|| file.display().to_string())?;
            let prompt = render_prompt(&unit, &cfg)?.rendered_text;
            answers.insert(prompt, response);
        }
    }

    let scratch = tempfile::tempdir()?;
    let cfg = PipelineConfig {
        input_docs: vec![fixtures.join("docs")],
        cassette_dir: fixtures.join("cassettes"),
        output_dir: scratch.path().to_path_buf(),
        mode: Mode::Record,
        toolchain: ToolchainChoice::Disabled,
        jobs: 1,
        ..PipelineConfig::default()
    };
    let transport = ScriptedTransport(move |req: &oracle_forge::gateway::LlmRequest| {
        answers
            .get(&req.prompt)
            .cloned()
            .ok_or_else(|| TransportFailure::Fatal("no scripted response for prompt".into()))
    });
    let summary = Pipeline::new(cfg)
        .with_clock(Arc::new(FixedClock::epoch()))
        .with_transport(Box::new(transport))
        .run()?;
    for class in &summary.classes {
        println!("{}: {} oracles", class.fqcn, class.oracle_count);
    }
    for err in &summary.errors {
        eprintln!("{err}");
    }
    if !summary.errors.is_empty() {
        bail!("{} errors", summary.errors.len());
    }
    Ok(())
}
