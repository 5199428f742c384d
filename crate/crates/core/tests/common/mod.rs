#![allow(dead_code)]

use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use oracle_forge::doc_model::{load_class_doc, ClassDoc, MethodDoc, MethodRef, TypeKind};
use oracle_forge::gateway::{LlmExchange, LlmRequest};
use oracle_forge::partition::{partition, PartitionUnit};
use oracle_forge::prompt::{render_prompt, PromptConfig};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn doc_path(fqcn: &str) -> PathBuf {
    let dir = fixtures().join("docs");
    let java = dir.join(format!("{fqcn}.java"));
    if java.exists() {
        java
    } else {
        dir.join(format!("{fqcn}.json"))
    }
}

pub fn load_doc(fqcn: &str) -> ClassDoc {
    load_class_doc(&doc_path(fqcn)).unwrap()
}

pub fn unit(fqcn: &str, signature: &str) -> PartitionUnit {
    partition(&load_doc(fqcn))
        .unwrap()
        .into_iter()
        .find(|u| u.anchor.signature() == signature)
        .unwrap_or_else(|| panic!("no unit {fqcn}.{signature}"))
}

pub fn response(fqcn: &str, signature: &str) -> String {
    let path = fixtures().join("responses").join(fqcn).join(format!("{signature}.md"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// The exchange a gateway would have produced for `unit` answered with `text`.
pub fn exchange(unit: &PartitionUnit, text: &str) -> LlmExchange {
    let prompt = render_prompt(unit, &PromptConfig::new(unit.class_fqcn.clone())).unwrap();
    let request = LlmRequest::new("gpt-4", prompt.rendered_text);
    LlmExchange {
        cassette_key: request.cassette_key(),
        request,
        response_text: text.to_string(),
        recorded_at: DateTime::<Utc>::UNIX_EPOCH,
    }
}

pub const FIXTURE_CLASSES: [&str; 5] = [
    "java.lang.Object",
    "java.lang.String",
    "java.util.List",
    "java.util.Map",
    "java.util.Set",
];

/// One javac error report for the first line of `source` containing
/// `needle`, in the compiler's plain output format.
pub fn javac_error(source: &str, file_name: &str, needle: &str, message: &str, details: &[&str]) -> String {
    let (index, line) = source
        .lines()
        .enumerate()
        .find(|(_, l)| l.contains(needle))
        .unwrap_or_else(|| panic!("`{needle}` not in source"));
    let column = line.find(needle).unwrap();
    let mut out = format!("{file_name}:{}: error: {message}\n{line}\n{}^\n", index + 1, " ".repeat(column));
    for d in details {
        out.push_str("  ");
        out.push_str(d);
        out.push('\n');
    }
    out
}

const NAMES: [&str; 4] = ["alpha", "beta", "gamma", "delta"];
const PARAMS: [&[&str]; 4] = [&[], &["int"], &["String"], &["int", "long"]];

fn method(name: &str, params: &[&str]) -> MethodDoc {
    MethodDoc {
        name: name.to_string(),
        param_types: params.iter().map(|p| p.to_string()).collect(),
        return_type: "boolean".to_string(),
        description_text: format!("Documentation of {name} with {} parameters.", params.len()),
        throws_tags: Vec::new(),
        see_also: Vec::new(),
        deprecated: false,
    }
}

/// A class of up to eight methods with random see-also edges, including
/// references to methods outside the class. When `ambiguous` is set, one
/// method carries a bare-name reference to an overloaded name.
pub fn random_doc<R: Rng>(rng: &mut R, ambiguous: bool) -> ClassDoc {
    let mut pool: Vec<(&str, &[&str])> = NAMES
        .iter()
        .flat_map(|n| PARAMS.iter().map(move |p| (*n, *p)))
        .collect();
    pool.shuffle(rng);
    let count = rng.gen_range(1..=if ambiguous { 7 } else { 8 });
    let mut chosen: Vec<(&str, &[&str])> = pool.into_iter().take(count).collect();
    if ambiguous {
        // force one overloaded name
        let (name, params) = chosen[0];
        let other = PARAMS.iter().find(|p| **p != params).unwrap();
        chosen.retain(|(n, p)| !(*n == name && p == other));
        chosen.insert(rng.gen_range(0..=chosen.len()), (name, *other));
    }
    let mut methods: Vec<MethodDoc> = chosen.iter().map(|(n, p)| method(n, p)).collect();

    let signatures: Vec<(String, Vec<String>)> = methods
        .iter()
        .map(|m| (m.name.clone(), m.param_types.clone()))
        .collect();
    for m in methods.iter_mut() {
        for _ in 0..rng.gen_range(0..=4) {
            let reference = match rng.gen_range(0..10) {
                0 => MethodRef::by_name("outsider"),
                1 => MethodRef::with_params(NAMES[rng.gen_range(0..4)], ["double"]),
                2 => {
                    // bare names only for names that are not overloaded
                    let (name, _) = &signatures[rng.gen_range(0..signatures.len())];
                    if signatures.iter().filter(|(n, _)| n == name).count() == 1 {
                        MethodRef::by_name(name.clone())
                    } else {
                        continue;
                    }
                }
                _ => {
                    let (name, params) = &signatures[rng.gen_range(0..signatures.len())];
                    MethodRef::with_params(name.clone(), params.clone())
                }
            };
            m.see_also.push(reference);
        }
    }
    if ambiguous {
        let name = chosen[0].0;
        let host = rng.gen_range(0..methods.len());
        let at = rng.gen_range(0..=methods[host].see_also.len());
        methods[host].see_also.insert(at, MethodRef::by_name(name));
    }
    ClassDoc {
        fqcn: "p.Random".to_string(),
        kind: TypeKind::Class,
        methods,
        source_path: None,
    }
}

/// What the partitioning pseudocode computes, walked step by step: every
/// method m starts a description; each n in m's see-also list that is a
/// method of the document is appended unless it is m itself or already
/// appended. A bare name naming several overloads cannot be looked up.
pub fn reference_partition(doc: &ClassDoc) -> Result<Vec<(String, Vec<String>, String)>, String> {
    let mut descriptions = Vec::new();
    for m in &doc.methods {
        let mut members: Vec<&MethodDoc> = vec![m];
        for n in &m.see_also {
            let hits: Vec<&MethodDoc> = doc
                .methods
                .iter()
                .filter(|c| {
                    c.name == n.name
                        && match &n.param_types {
                            None => true,
                            Some(ps) => *ps == c.param_types,
                        }
                })
                .collect();
            if hits.len() > 1 {
                return Err(n.name.clone());
            }
            if let Some(hit) = hits.first() {
                if !members.iter().any(|x| x.name == hit.name && x.param_types == hit.param_types) {
                    members.push(hit);
                }
            }
        }
        let sig = |x: &MethodDoc| format!("{}({})", x.name, x.param_types.join(", "));
        let mut text = String::new();
        for (i, x) in members.iter().enumerate() {
            if i > 0 {
                text.push_str("\n\n");
            }
            text.push_str(&format!("{} {}\n{}", x.return_type, sig(x), x.description_text));
        }
        descriptions.push((sig(m), members[1..].iter().map(|x| sig(x)).collect(), text));
    }
    Ok(descriptions)
}

/// Compares the library's partition of `doc` with [`reference_partition`].
pub fn partition_agrees(doc: &ClassDoc) -> Result<(), String> {
    match (partition(doc), reference_partition(doc)) {
        (Ok(units), Ok(expected)) => {
            let got: Vec<(String, Vec<String>, String)> = units
                .iter()
                .map(|u| {
                    (
                        u.anchor.signature(),
                        u.related.iter().map(|r| r.signature()).collect(),
                        u.rendered_description.clone(),
                    )
                })
                .collect();
            if got == expected {
                Ok(())
            } else {
                Err(format!("partition differs for {:?}", doc.methods))
            }
        }
        (Err(oracle_forge::doc_model::DocError::AmbiguousReference { reference, .. }), Err(name))
            if reference == name =>
        {
            Ok(())
        }
        (got, expected) => Err(format!("got {got:?}, reference says {expected:?}")),
    }
}

/// Writes an executable shell script standing in for the conformance runner.
pub fn fake_runner(dir: &Path, body: &str) -> PathBuf {
    use std::os::unix::fs::PermissionsExt;
    let path = dir.join("runner.sh");
    std::fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    path
}
