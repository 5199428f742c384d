mod common;

use oracle_forge::doc_model::DocError;
use oracle_forge::partition::partition;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn agrees_with_reference_on_random_documents() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut ambiguous = 0;
    for _ in 0..400 {
        let inject = rng.gen_bool(0.1);
        ambiguous += usize::from(inject);
        let doc = common::random_doc(&mut rng, inject);
        doc.validate().unwrap();
        common::partition_agrees(&doc).unwrap();
        if inject {
            assert!(matches!(partition(&doc), Err(DocError::AmbiguousReference { .. })));
        }
    }
    assert!(ambiguous >= 20, "only {ambiguous} ambiguous documents");
}

#[test]
fn object_equals_bundles_hash_code() {
    let unit = common::unit("java.lang.Object", "equals(Object)");
    let related: Vec<String> = unit.related.iter().map(|m| m.signature()).collect();
    assert_eq!(related, ["hashCode()"]);
    assert!(unit.rendered_description.starts_with("boolean equals(Object)\n"));
    assert!(unit.rendered_description.contains("\n\nint hashCode()\n"));
}

#[test]
fn one_unit_per_fixture_method() {
    for fqcn in common::FIXTURE_CLASSES {
        let doc = common::load_doc(fqcn);
        let units = partition(&doc).unwrap();
        assert_eq!(units.len(), doc.methods.len(), "{fqcn}");
        for (unit, method) in units.iter().zip(&doc.methods) {
            assert_eq!(&unit.anchor, method);
            assert!(unit.related.iter().all(|r| r != method));
        }
        assert_eq!(partition(&doc).unwrap(), units);
    }
}
