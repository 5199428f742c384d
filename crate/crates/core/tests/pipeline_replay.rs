mod common;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use oracle_forge::artifact::{CorpusArtifact, ValidationArtifact, ValidationStatus};
use oracle_forge::clock::FixedClock;
use oracle_forge::config::{AblationSet, PipelineConfig, ToolchainChoice};
use oracle_forge::extract::{CompileStatus, CorrectnessStatus};
use oracle_forge::gateway::{Mode, ScriptedTransport};
use oracle_forge::pipeline::{Pipeline, Stage};
use oracle_forge::validate::{CompilerRun, StubToolchain};

fn config(out: &Path) -> PipelineConfig {
    let fx = common::fixtures();
    PipelineConfig {
        input_docs: vec![fx.join("docs")],
        cassette_dir: fx.join("cassettes"),
        output_dir: out.to_path_buf(),
        mode: Mode::Replay,
        toolchain: ToolchainChoice::Disabled,
        catalog_dir: Some(fx.join("catalog")),
        annotations_dir: Some(fx.join("annotations")),
        jobs: 4,
        ..PipelineConfig::default()
    }
}

fn tripwire() -> Box<ScriptedTransport<impl Fn(&oracle_forge::gateway::LlmRequest) -> Result<String, oracle_forge::gateway::TransportFailure> + Send + Sync>> {
    Box::new(ScriptedTransport(|_: &oracle_forge::gateway::LlmRequest| -> Result<String, _> {
        panic!("replay must not reach the transport")
    }))
}

fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                files.insert(p.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&p).unwrap());
            }
        }
    }
    files
}

#[test]
fn two_replays_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let summary = Pipeline::new(config(dir.path()))
            .with_clock(Arc::new(FixedClock::epoch()))
            .with_transport(tripwire())
            .run()
            .unwrap();
        assert!(summary.succeeded(), "{:?}", summary.errors);
        assert_eq!(summary.classes.len(), 5);
    }
    let (sa, sb) = (snapshot(a.path()), snapshot(b.path()));
    assert_eq!(sa.keys().collect::<Vec<_>>(), sb.keys().collect::<Vec<_>>());
    for (path, bytes) in &sa {
        assert!(bytes == &sb[path], "{} differs", path.display());
    }
    for must in ["report.json", "report.md", "corpus/java.lang.Object.json", "holders/OracleHolder_java_lang_Object.java"] {
        assert!(sa.contains_key(Path::new(must)), "{must} missing");
    }
}

#[test]
fn replay_reports_fixture_scores() {
    let out = tempfile::tempdir().unwrap();
    let summary = Pipeline::new(config(out.path())).with_transport(tripwire()).run().unwrap();
    let total = &summary.report.compilability_total;
    assert_eq!((total.n_methods, total.n_oracles, total.n_correct), (33, 66, 63));
    assert_eq!(total.n_compilable, 0, "nothing is compiled without a toolchain");

    let corpus = CorpusArtifact::load(&out.path().join("corpus/java.lang.Object.json")).unwrap();
    assert_eq!(corpus.method_count, 11);
    assert_eq!(corpus.records.len(), 25);
    let independency = corpus.records.iter().find(|r| r.name == "checkCloneIndependency").unwrap();
    assert_eq!(independency.correctness_status, CorrectnessStatus::Correct);
    assert_eq!(independency.compile_status, CompileStatus::Unchecked);

    let validation: ValidationArtifact =
        oracle_forge::artifact::read_json(&out.path().join("validation/java.lang.Object.json")).unwrap();
    assert_eq!(validation.status, ValidationStatus::Unchecked);
}

#[test]
fn stub_toolchain_runs_inside_pipeline() {
    let out = tempfile::tempdir().unwrap();
    let tc = StubToolchain::new("javac 17.0.2", |file: &str, src: &str| {
        if src.contains("set.stream().count()") {
            CompilerRun {
                success: false,
                output: common::javac_error(src, file, "set.stream().count()", "incompatible types: possible lossy conversion from long to int", &[]),
            }
        } else {
            CompilerRun { success: true, output: String::new() }
        }
    });
    let summary = Pipeline::new(config(out.path()))
        .with_toolchain(Arc::new(tc))
        .with_transport(tripwire())
        .run()
        .unwrap();
    assert!(summary.succeeded(), "{:?}", summary.errors);
    let set = summary.classes.iter().find(|c| c.fqcn == "java.util.Set").unwrap();
    let row = set.compilability.as_ref().unwrap();
    assert_eq!((row.n_oracles, row.n_compilable), (10, 9));
    assert_eq!(row.pct_compilable.to_string(), "90.0");
    assert_eq!(summary.report.compilability_total.n_compilable, 65);
}

#[test]
fn missing_cassette_is_reported_per_class() {
    let out = tempfile::tempdir().unwrap();
    let mut cfg = config(out.path());
    cfg.ablations = AblationSet::parse(&["noFewShot"]).unwrap();
    cfg.catalog_dir = None;
    cfg.annotations_dir = None;
    let summary = Pipeline::new(cfg).with_transport(tripwire()).run().unwrap();
    assert!(!summary.succeeded());
    assert!(summary.errors.iter().all(|e| e.stage == Stage::Generate), "{:?}", summary.errors);
    assert_eq!(summary.errors.len(), 33, "one miss per unit");
}

#[test]
fn no_partition_builds_one_unit_per_class() {
    let out = tempfile::tempdir().unwrap();
    let mut cfg = config(out.path());
    cfg.input_docs = vec![common::doc_path("java.util.Set")];
    cfg.ablations = AblationSet::parse(&["noPartition"]).unwrap();
    cfg.mode = Mode::Record;
    cfg.cassette_dir = out.path().join("cassettes");
    cfg.catalog_dir = None;
    cfg.annotations_dir = None;
    let transport = ScriptedTransport(|req: &oracle_forge::gateway::LlmRequest| {
        assert!(req.prompt.contains("boolean add(E)") && req.prompt.contains("int size()"));
        Ok(common::response("java.util.Set", "size()"))
    });
    let summary = Pipeline::new(cfg).with_transport(Box::new(transport)).run().unwrap();
    assert!(summary.succeeded(), "{:?}", summary.errors);
    let units: oracle_forge::artifact::UnitsArtifact =
        oracle_forge::artifact::read_json(&out.path().join("units/java.util.Set.json")).unwrap();
    assert_eq!(units.units.len(), 1);
    let corpus = CorpusArtifact::load(&out.path().join("corpus/java.util.Set.json")).unwrap();
    assert!(corpus.records.iter().all(|r| r.id.starts_with("java.util.Set.<class>#")));
}
