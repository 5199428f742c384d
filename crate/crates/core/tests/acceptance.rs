//! One PASS/FAIL line per acceptance criterion. Runs without a compiler,
//! a JVM or network access.

mod common;

use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use oracle_forge::artifact::UnitExchange;
use oracle_forge::clock::FixedClock;
use oracle_forge::config::{PipelineConfig, ToolchainChoice};
use oracle_forge::doc_model::DocError;
use oracle_forge::eval::{CompilabilityRow, CoverageRow};
use oracle_forge::extract::{extract_oracles, OracleKind, OracleRecord};
use oracle_forge::gateway::Mode;
use oracle_forge::partition::partition;
use oracle_forge::pipeline::{extract_corpus, Pipeline};
use oracle_forge::prompt::{render_prompt, Ablation, PromptConfig};
use oracle_forge::validate::{compile_check, wrap_for_compile, CompilerRun, ErrorClass, StubToolchain};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Check {
    ensure(start.elapsed() < limit, || format!("took {:?}, limit {limit:?}", start.elapsed()))
}

fn metric_arithmetic() -> Check {
    let start = Instant::now();
    let c = CompilabilityRow::from_counts("Total", 165, 428, 418, 423);
    let shown = (c.pct_compilable.to_string(), c.pct_correct.to_string());
    ensure(shown == ("97.7".into(), "98.8".into()), || format!("compilability {shown:?}"))?;
    for ((d, g, k), want) in [((390, 352, 338), ("96.0", "90.3")), ((182, 180, 175), ("97.2", "98.9"))] {
        let row = CoverageRow::from_counts("Total", d, g, k);
        let got = (row.precision.to_string(), row.recall.to_string());
        ensure(got == (want.0.into(), want.1.into()), || format!("{d}/{g}/{k} gave {got:?}"))?;
    }
    within(start, Duration::from_secs(1))
}

fn per_row() -> Check {
    for ((d, g, k), want) in [((33, 30, 29), ("96.7", "90.9")), ((62, 62, 61), ("98.4", "100.0"))] {
        let row = CoverageRow::from_counts("row", d, g, k);
        let got = (row.precision.to_string(), row.recall.to_string());
        ensure(got == (want.0.into(), want.1.into()), || format!("{d}/{g}/{k} gave {got:?}"))?;
    }
    Ok(())
}

fn partitioner_equivalence() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut ambiguous = 0;
    for i in 0..250 {
        // every tenth document carries an ambiguous reference
        let inject = i % 10 == 0;
        let doc = common::random_doc(&mut rng, inject);
        common::partition_agrees(&doc)?;
        if inject {
            ambiguous += 1;
            ensure(matches!(partition(&doc), Err(DocError::AmbiguousReference { .. })), || {
                "ambiguous reference accepted".into()
            })?;
        }
    }
    ensure(ambiguous == 25, || format!("{ambiguous} ambiguous documents"))?;
    within(start, Duration::from_secs(5))
}

fn prompt_golden() -> Check {
    let golden = std::fs::read_to_string(common::fixtures().join("golden/object_equals_prompt.txt"))
        .map_err(|e| e.to_string())?;
    let unit = common::unit("java.lang.Object", "equals(Object)");
    let render = |flags: &[Ablation]| {
        render_prompt(&unit, &PromptConfig::new("java.lang.Object").with_ablation(flags.iter().copied()))
            .map(|d| d.rendered_text)
            .map_err(|e| e.to_string())
    };
    ensure(render(&[])? == golden, || "default prompt differs from golden".into())?;
    let cut = |text: &str, tag: &str| {
        let start = text.find(&format!("<{tag}>\n")).unwrap();
        let close = format!("</{tag}>\n\n");
        let end = text.find(&close).unwrap() + close.len();
        format!("{}{}", &text[..start], &text[end..])
    };
    ensure(render(&[Ablation::NoAssistant])? == cut(&golden, "context"), || "noAssistant".into())?;
    ensure(render(&[Ablation::NoFewShot])? == cut(&golden, "examples"), || "noFewShot".into())?;
    let no_cot: String = golden
        .replace("Use the following step-by-step method to generate test oracles. ", "")
        .lines()
        .filter(|l| !l.trim_start().starts_with("Step "))
        .map(|l| format!("{l}\n"))
        .collect();
    ensure(render(&[Ablation::NoChainOfThought])? == no_cot, || "noChainOfThought".into())
}

fn extractor_fixtures() -> Check {
    let cases = [
        ("java.lang.Object", "equals(Object)", "checkReflexive", 1, OracleKind::Assertion),
        ("java.lang.Object", "equals(Object)", "checkSymmetric", 2, OracleKind::Assertion),
        ("java.lang.Object", "hashCode()", "checkEqualsHashCodeConsistency", 2, OracleKind::Assertion),
        ("java.util.List", "isEmpty()", "checkIsEmpty", 1, OracleKind::Assertion),
        ("java.util.List", "remove(Object)", "checkElementRemoval", 2, OracleKind::Assertion),
        ("java.lang.String", "codePointAt(int)", "checkIndexValidation", 2, OracleKind::Exception),
        (
            "java.util.Map",
            "forEach(BiConsumer<? super K, ? super V>)",
            "checkConcurrentModificationException",
            2,
            OracleKind::Exception,
        ),
        ("java.lang.Object", "wait()", "checkIndefiniteWait", 1, OracleKind::Hybrid),
        ("java.lang.Object", "clone()", "checkCloneIndependency", 1, OracleKind::Assertion),
    ];
    for (fqcn, signature, name, arity, kind) in cases {
        let unit = common::unit(fqcn, signature);
        let exchange = common::exchange(&unit, &common::response(fqcn, signature));
        let records = extract_oracles(&exchange, &unit).map_err(|e| e.to_string())?;
        let hits: Vec<&OracleRecord> = records.iter().filter(|r| r.name == name).collect();
        ensure(hits.len() == 1, || format!("{name}: {} records", hits.len()))?;
        let r = hits[0];
        ensure(r.param_decls.len() == arity && r.kind == kind, || {
            format!("{name}: arity {} kind {:?}", r.param_decls.len(), r.kind)
        })?;
    }
    Ok(())
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    for sub in ["corpus", "."] {
        let Ok(entries) = std::fs::read_dir(dir.join(sub)) else { continue };
        for e in entries.flatten() {
            let p = e.path();
            if p.is_file() {
                files.push((format!("{sub}/{}", e.file_name().to_string_lossy()), std::fs::read(&p).unwrap()));
            }
        }
    }
    files.sort();
    files
}

fn determinism() -> Check {
    let fx = common::fixtures();
    let mut snaps = Vec::new();
    for _ in 0..2 {
        let out = tempfile::tempdir().map_err(|e| e.to_string())?;
        let cfg = PipelineConfig {
            input_docs: vec![fx.join("docs")],
            cassette_dir: fx.join("cassettes"),
            output_dir: out.path().to_path_buf(),
            mode: Mode::Replay,
            toolchain: ToolchainChoice::Disabled,
            catalog_dir: Some(fx.join("catalog")),
            annotations_dir: Some(fx.join("annotations")),
            ..PipelineConfig::default()
        };
        let summary = Pipeline::new(cfg)
            .with_clock(Arc::new(FixedClock::epoch()))
            .run()
            .map_err(|e| e.to_string())?;
        ensure(summary.succeeded(), || format!("{:?}", summary.errors))?;
        let snap = snapshot(out.path());
        ensure(snap.iter().any(|(n, _)| n == "./report.json") && snap.len() >= 7, || {
            format!("artifacts missing: {:?}", snap.iter().map(|s| &s.0).collect::<Vec<_>>())
        })?;
        snaps.push(snap);
    }
    ensure(snaps[0] == snaps[1], || "replay runs differ".into())
}

fn class_corpus(fqcn: &str) -> Result<Vec<OracleRecord>, String> {
    let units = partition(&common::load_doc(fqcn)).map_err(|e| e.to_string())?;
    let exchanges: Vec<UnitExchange> = units
        .iter()
        .map(|u| UnitExchange {
            unit_id: u.id(),
            exchange: common::exchange(u, &common::response(fqcn, &u.key())),
        })
        .collect();
    Ok(extract_corpus(&units, &exchanges).0)
}

fn stub_toolchain() -> Check {
    let cases = [
        ("java.util.Set", "checkSizeMatchesStream", "set.stream().count()", "incompatible types: possible lossy conversion from long to int", ErrorClass::TypeError),
        ("java.lang.String", "checkContainsMatchesIndexOf", "actualResult == mainStr.indexOf", "not a statement", ErrorClass::SyntaxError),
    ];
    for (fqcn, oracle, needle, message, want) in cases {
        let records = class_corpus(fqcn)?;
        let holder = wrap_for_compile(&records, fqcn).map_err(|e| e.to_string())?;
        let tc = StubToolchain::new("javac 17", move |file: &str, src: &str| CompilerRun {
            success: false,
            output: common::javac_error(src, file, needle, message, &[]),
        });
        let outcomes = compile_check(&holder, &tc).map_err(|e| e.to_string())?;
        let id = &records.iter().find(|r| r.name == oracle).ok_or("oracle missing")?.id;
        let got = outcomes.iter().find(|o| &o.oracle_id == id).map(|o| o.error_class);
        ensure(got == Some(want), || format!("{oracle}: {got:?}"))?;
    }
    Ok(())
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 7] = [
        ("metric arithmetic on published totals", metric_arithmetic),
        ("per-row precision and recall", per_row),
        ("partitioner equivalence with reference walk", partitioner_equivalence),
        ("prompt golden and single ablations", prompt_golden),
        ("extractor on published oracle snippets", extractor_fixtures),
        ("replay determinism", determinism),
        ("stub-toolchain error classification", stub_toolchain),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match std::panic::catch_unwind(check) {
            Ok(Ok(())) => println!("PASS {name}"),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL {name}: panicked");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
