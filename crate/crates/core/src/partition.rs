//! Method-level partitioning of a class document.
//!
//! Every method becomes the anchor of one unit. The unit bundles the anchor
//! with the in-class targets of its own see-also list, in list order. Targets
//! of those targets are not followed, duplicates keep their first position,
//! references outside the class are skipped silently.

use serde::{Deserialize, Serialize};

use crate::doc_model::{ClassDoc, DocError, MethodDoc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "camelCase")]
pub enum UnitScope {
    #[default]
    Method,
    /// Whole-class bundle used when partitioning is ablated.
    WholeClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PartitionUnit {
    pub class_fqcn: String,
    pub anchor: MethodDoc,
    pub related: Vec<MethodDoc>,
    pub rendered_description: String,
    #[serde(default)]
    pub scope: UnitScope,
}

impl PartitionUnit {
    pub fn new(class_fqcn: impl Into<String>, anchor: MethodDoc, related: Vec<MethodDoc>) -> Self {
        let rendered_description = render_description(&anchor, &related);
        PartitionUnit {
            class_fqcn: class_fqcn.into(),
            anchor,
            related,
            rendered_description,
            scope: UnitScope::Method,
        }
    }

    /// One unit covering every method of the class, in declaration order.
    ///
    /// Returns `None` for a class without methods.
    pub fn whole_class(doc: &ClassDoc) -> Option<Self> {
        let (anchor, related) = doc.methods.split_first()?;
        let mut unit = PartitionUnit::new(doc.fqcn.clone(), anchor.clone(), related.to_vec());
        unit.scope = UnitScope::WholeClass;
        Some(unit)
    }

    /// `anchorSignature` for method units, `<class>` for the whole-class bundle.
    pub fn key(&self) -> String {
        match self.scope {
            UnitScope::Method => self.anchor.signature(),
            UnitScope::WholeClass => "<class>".to_string(),
        }
    }

    /// `fqcn.key`, unique within a class's partition.
    pub fn id(&self) -> String {
        format!("{}.{}", self.class_fqcn, self.key())
    }

    pub fn methods(&self) -> impl Iterator<Item = &MethodDoc> {
        std::iter::once(&self.anchor).chain(self.related.iter())
    }

    /// Exception types documented on any method of the unit, unqualified.
    pub fn documented_exceptions(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for method in self.methods() {
            for tag in &method.throws_tags {
                let name = tag.simple_type().to_string();
                if !out.contains(&name) {
                    out.push(name);
                }
            }
        }
        out
    }
}

pub fn partition(doc: &ClassDoc) -> Result<Vec<PartitionUnit>, DocError> {
    doc.methods
        .iter()
        .map(|anchor| {
            let mut related: Vec<MethodDoc> = Vec::new();
            for reference in &anchor.see_also {
                let Some(target) = doc.resolve_see_also(reference)? else {
                    continue;
                };
                if target.signature() == anchor.signature()
                    || related.iter().any(|r| r.signature() == target.signature())
                {
                    continue;
                }
                related.push(target.clone());
            }
            Ok(PartitionUnit::new(doc.fqcn.clone(), anchor.clone(), related))
        })
        .collect()
}

/// Anchor block followed by each related block, separated by one blank line.
pub fn render_description(anchor: &MethodDoc, related: &[MethodDoc]) -> String {
    std::iter::once(anchor)
        .chain(related)
        .map(MethodDoc::documentation_block)
        .collect::<Vec<_>>()
        .join("\n\n")
}
