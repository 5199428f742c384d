//! Prompt rendering.
//!
//! The prompt is three tagged sections: `<context>` frames the model as a
//! testing engineer, `<examples>` holds description/oracle pairs, and
//! `<instruction>` carries the step list and the unit's documentation. The
//! wording lives in `assets/prompt_template.txt`; this module only fills the
//! slots and drops whatever the ablation set switches off.
//!
//! Template syntax is deliberately tiny: `{{slot}}` substitutes a value and
//! `{{#chain_of_thought}}...{{/chain_of_thought}}` marks text removed under
//! [`Ablation::NoChainOfThought`]. A block marker alone on its line takes the
//! line with it.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partition::PartitionUnit;

pub const TEMPLATE_ASSET: &str = include_str!("../assets/prompt_template.txt");
const FEW_SHOT_ASSET: &str = include_str!("../assets/few_shot_bank.json");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PromptError {
    #[error("few-shot bank is empty but few-shot examples are enabled")]
    MissingFewShot,
    #[error("class type name must not be empty")]
    EmptyClassType,
    #[error("invalid prompt template: {0}")]
    Template(String),
    #[error("unknown ablation flag `{0}`")]
    UnknownAblation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Ablation {
    NoAssistant,
    NoFewShot,
    NoChainOfThought,
}

impl Ablation {
    pub const ALL: [Ablation; 3] = [
        Ablation::NoAssistant,
        Ablation::NoFewShot,
        Ablation::NoChainOfThought,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Ablation::NoAssistant => "noAssistant",
            Ablation::NoFewShot => "noFewShot",
            Ablation::NoChainOfThought => "noChainOfThought",
        }
    }
}

impl fmt::Display for Ablation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Ablation {
    type Err = PromptError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "noassistant" | "assistant" => Ok(Ablation::NoAssistant),
            "nofewshot" | "fewshot" => Ok(Ablation::NoFewShot),
            "nochainofthought" | "chainofthought" | "nocot" | "cot" => {
                Ok(Ablation::NoChainOfThought)
            }
            _ => Err(PromptError::UnknownAblation(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FewShotPair {
    pub description: String,
    pub oracle: String,
}

#[derive(Deserialize)]
struct FewShotAsset {
    pairs: Vec<FewShotPair>,
}

pub fn default_few_shot_bank() -> Vec<FewShotPair> {
    static BANK: OnceLock<Vec<FewShotPair>> = OnceLock::new();
    BANK.get_or_init(|| {
        serde_json::from_str::<FewShotAsset>(FEW_SHOT_ASSET)
            .expect("bundled few-shot bank is valid JSON")
            .pairs
    })
    .clone()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptConfig {
    pub class_type_name: String,
    pub ablation: BTreeSet<Ablation>,
    pub few_shot_bank: Vec<FewShotPair>,
}

impl PromptConfig {
    pub fn new(class_type_name: impl Into<String>) -> Self {
        PromptConfig {
            class_type_name: class_type_name.into(),
            ablation: BTreeSet::new(),
            few_shot_bank: default_few_shot_bank(),
        }
    }

    pub fn with_ablation(mut self, flags: impl IntoIterator<Item = Ablation>) -> Self {
        self.ablation.extend(flags);
        self
    }

    pub fn is_ablated(&self, flag: Ablation) -> bool {
        self.ablation.contains(&flag)
    }

    fn validate(&self) -> Result<(), PromptError> {
        if self.class_type_name.trim().is_empty() {
            return Err(PromptError::EmptyClassType);
        }
        if self.few_shot_bank.is_empty() && !self.is_ablated(Ablation::NoFewShot) {
            return Err(PromptError::MissingFewShot);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionTag {
    Context,
    Examples,
    Instruction,
}

impl SectionTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SectionTag::Context => "context",
            SectionTag::Examples => "examples",
            SectionTag::Instruction => "instruction",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptDocument {
    pub sections: Vec<(SectionTag, String)>,
    pub rendered_text: String,
}

impl PromptDocument {
    fn from_sections(sections: Vec<(SectionTag, String)>) -> Self {
        let mut rendered_text = sections
            .iter()
            .map(|(tag, body)| format!("<{0}>\n{body}\n</{0}>", tag.as_str()))
            .collect::<Vec<_>>()
            .join("\n\n");
        rendered_text.push('\n');
        PromptDocument {
            sections,
            rendered_text,
        }
    }

    pub fn section(&self, tag: SectionTag) -> Option<&str> {
        self.sections
            .iter()
            .find(|(t, _)| *t == tag)
            .map(|(_, b)| b.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    ClassType,
    Examples,
    MethodDescription,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Text(String),
    Slot(Slot),
    ChainOfThought(Vec<Node>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    sections: Vec<(SectionTag, Vec<Node>)>,
}

impl PromptTemplate {
    pub fn builtin() -> &'static PromptTemplate {
        static TEMPLATE: OnceLock<PromptTemplate> = OnceLock::new();
        TEMPLATE.get_or_init(|| PromptTemplate::parse(TEMPLATE_ASSET).expect("bundled template parses"))
    }

    pub fn parse(source: &str) -> Result<Self, PromptError> {
        let mut sections = Vec::new();
        let mut rest = source;
        for tag in [SectionTag::Context, SectionTag::Examples, SectionTag::Instruction] {
            let open = format!("<{}>\n", tag.as_str());
            let close = format!("\n</{}>", tag.as_str());
            let Some(start) = rest.find(&open) else {
                return Err(PromptError::Template(format!(
                    "missing `<{}>` section",
                    tag.as_str()
                )));
            };
            let body_start = start + open.len();
            let Some(len) = rest[body_start..].find(&close) else {
                return Err(PromptError::Template(format!(
                    "unterminated `<{}>` section",
                    tag.as_str()
                )));
            };
            let body = &rest[body_start..body_start + len];
            sections.push((tag, parse_nodes(body)?));
            rest = &rest[body_start + len + close.len()..];
        }
        let has_description = sections
            .iter()
            .any(|(tag, nodes)| *tag == SectionTag::Instruction && contains_slot(nodes, Slot::MethodDescription));
        if !has_description {
            return Err(PromptError::Template(
                "instruction section must contain {{method_description}}".into(),
            ));
        }
        Ok(PromptTemplate { sections })
    }

    pub fn render(&self, unit: &PartitionUnit, cfg: &PromptConfig) -> Result<PromptDocument, PromptError> {
        cfg.validate()?;
        let examples = format_examples(&cfg.few_shot_bank);
        let values = SlotValues {
            class_type: &cfg.class_type_name,
            examples: &examples,
            method_description: &unit.rendered_description,
            chain_of_thought: !cfg.is_ablated(Ablation::NoChainOfThought),
        };
        let sections = self
            .sections
            .iter()
            .filter(|(tag, _)| match tag {
                SectionTag::Context => !cfg.is_ablated(Ablation::NoAssistant),
                SectionTag::Examples => !cfg.is_ablated(Ablation::NoFewShot),
                SectionTag::Instruction => true,
            })
            .map(|(tag, nodes)| {
                let mut body = String::new();
                render_nodes(nodes, &values, &mut body);
                (*tag, body)
            })
            .collect();
        Ok(PromptDocument::from_sections(sections))
    }
}

pub fn render_prompt(unit: &PartitionUnit, cfg: &PromptConfig) -> Result<PromptDocument, PromptError> {
    PromptTemplate::builtin().render(unit, cfg)
}

struct SlotValues<'a> {
    class_type: &'a str,
    examples: &'a str,
    method_description: &'a str,
    chain_of_thought: bool,
}

fn render_nodes(nodes: &[Node], values: &SlotValues<'_>, out: &mut String) {
    for node in nodes {
        match node {
            Node::Text(t) => out.push_str(t),
            Node::Slot(Slot::ClassType) => out.push_str(values.class_type),
            Node::Slot(Slot::Examples) => out.push_str(values.examples),
            Node::Slot(Slot::MethodDescription) => out.push_str(values.method_description),
            Node::ChainOfThought(children) => {
                if values.chain_of_thought {
                    render_nodes(children, values, out);
                }
            }
        }
    }
}

fn contains_slot(nodes: &[Node], slot: Slot) -> bool {
    nodes.iter().any(|n| match n {
        Node::Slot(s) => *s == slot,
        Node::ChainOfThought(children) => contains_slot(children, slot),
        Node::Text(_) => false,
    })
}

const COT_OPEN: &str = "{{#chain_of_thought}}";
const COT_CLOSE: &str = "{{/chain_of_thought}}";

fn parse_nodes(body: &str) -> Result<Vec<Node>, PromptError> {
    // Whole-line block markers swallow their newline.
    let mut flattened = String::new();
    for line in body.split_inclusive('\n') {
        let trimmed = line.trim();
        if trimmed == COT_OPEN || trimmed == COT_CLOSE {
            flattened.push_str(trimmed);
        } else {
            flattened.push_str(line);
        }
    }

    let mut stack: Vec<Vec<Node>> = vec![Vec::new()];
    let mut rest = flattened.as_str();
    while let Some(open) = rest.find("{{") {
        if open > 0 {
            stack.last_mut().unwrap().push(Node::Text(rest[..open].to_string()));
        }
        let Some(len) = rest[open..].find("}}") else {
            return Err(PromptError::Template("unterminated `{{`".into()));
        };
        let tag = &rest[open + 2..open + len];
        match tag {
            "class_type" => stack.last_mut().unwrap().push(Node::Slot(Slot::ClassType)),
            "examples" => stack.last_mut().unwrap().push(Node::Slot(Slot::Examples)),
            "method_description" => stack
                .last_mut()
                .unwrap()
                .push(Node::Slot(Slot::MethodDescription)),
            "#chain_of_thought" => stack.push(Vec::new()),
            "/chain_of_thought" => {
                if stack.len() < 2 {
                    return Err(PromptError::Template("unbalanced chain_of_thought block".into()));
                }
                let children = stack.pop().unwrap();
                stack.last_mut().unwrap().push(Node::ChainOfThought(children));
            }
            other => {
                return Err(PromptError::Template(format!("unknown placeholder `{other}`")));
            }
        }
        rest = &rest[open + len + 2..];
    }
    if !rest.is_empty() {
        stack.last_mut().unwrap().push(Node::Text(rest.to_string()));
    }
    if stack.len() != 1 {
        return Err(PromptError::Template("unclosed chain_of_thought block".into()));
    }
    Ok(stack.pop().unwrap())
}

fn indent(text: &str, width: usize) -> String {
    let pad = " ".repeat(width);
    text.lines()
        .map(|l| if l.is_empty() { String::new() } else { format!("{pad}{l}") })
        .collect::<Vec<_>>()
        .join("\n")
}

fn format_examples(bank: &[FewShotPair]) -> String {
    bank.iter()
        .map(|pair| {
            format!(
                "    <description>\n{}\n    </description>\n    <oracle>\n{}\n    </oracle>",
                indent(&pair.description, 8),
                indent(&pair.oracle, 8)
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc_model::MethodDoc;

    fn unit() -> PartitionUnit {
        let anchor = MethodDoc {
            name: "isEmpty".into(),
            param_types: vec![],
            return_type: "boolean".into(),
            description_text: "Returns true if this list contains no elements.".into(),
            throws_tags: vec![],
            see_also: vec![],
            deprecated: false,
        };
        PartitionUnit::new("java.util.List", anchor, vec![])
    }

    #[test]
    fn default_bank_starts_with_reflexive_oracle() {
        let bank = default_few_shot_bank();
        assert!(!bank.is_empty());
        assert!(bank[0].oracle.contains("x.equals(x)"));
        assert!(bank[0].oracle.contains("boolean checkReflexive(Object x)"));
        assert_eq!(bank, default_few_shot_bank());
    }

    #[test]
    fn bank_descriptions_are_plain_prose() {
        for pair in default_few_shot_bank() {
            assert!(!pair.description.trim().is_empty());
            for marker in ["<description>", "</description>", "<oracle>", "<examples>", "{{"] {
                assert!(!pair.description.contains(marker));
                assert!(!pair.oracle.contains(marker));
            }
        }
    }

    #[test]
    fn default_render_has_all_sections() {
        let doc = render_prompt(&unit(), &PromptConfig::new("java.util.List")).unwrap();
        let tags: Vec<SectionTag> = doc.sections.iter().map(|(t, _)| *t).collect();
        assert_eq!(tags, vec![SectionTag::Context, SectionTag::Examples, SectionTag::Instruction]);
        assert!(doc.section(SectionTag::Context).unwrap().contains("description in java.util.List,"));
        assert!(doc.rendered_text.contains("Step 2 - Generate test oracles"));
        assert!(doc.rendered_text.ends_with(
            "you need to deal with:\nboolean isEmpty()\nReturns true if this list contains no elements.\n</instruction>\n"
        ));
    }

    #[test]
    fn all_ablations_leave_task_sentence_and_description() {
        let cfg = PromptConfig::new("java.util.List").with_ablation(Ablation::ALL);
        let doc = render_prompt(&unit(), &cfg).unwrap();
        assert_eq!(doc.sections.len(), 1);
        assert_eq!(
            doc.rendered_text,
            "<instruction>\n    Remember that you need to generate a test oracle that returns a boolean value rather than an entire test case that can be executed. If necessary, you can use the try catch structure in test oracles to catch exception. Test oracles may require some input, you need to determine the input as well, most time the input should be same as class type. No matter in which cases, still return a boolean to indicate whether the feature is satisfied.\n    This is the Java method description you need to deal with:\nboolean isEmpty()\nReturns true if this list contains no elements.\n</instruction>\n"
        );
    }

    #[test]
    fn empty_bank_needs_no_few_shot_flag() {
        let mut cfg = PromptConfig::new("java.util.List");
        cfg.few_shot_bank.clear();
        assert_eq!(render_prompt(&unit(), &cfg), Err(PromptError::MissingFewShot));
        let cfg = cfg.with_ablation([Ablation::NoFewShot]);
        assert!(render_prompt(&unit(), &cfg).is_ok());
    }

    #[test]
    fn empty_class_type_is_rejected() {
        assert_eq!(
            render_prompt(&unit(), &PromptConfig::new(" ")),
            Err(PromptError::EmptyClassType)
        );
    }

    #[test]
    fn ablation_flag_spellings() {
        assert_eq!("noAssistant".parse::<Ablation>().unwrap(), Ablation::NoAssistant);
        assert_eq!("no-few-shot".parse::<Ablation>().unwrap(), Ablation::NoFewShot);
        assert_eq!("no_cot".parse::<Ablation>().unwrap(), Ablation::NoChainOfThought);
        assert!("noPartition".parse::<Ablation>().is_err());
    }

    #[test]
    fn template_errors() {
        assert!(matches!(
            PromptTemplate::parse("<context>\nx\n</context>"),
            Err(PromptError::Template(_))
        ));
        let no_slot = "<context>\na\n</context>\n<examples>\nb\n</examples>\n<instruction>\nc\n</instruction>";
        assert!(matches!(PromptTemplate::parse(no_slot), Err(PromptError::Template(_))));
        let unknown = "<context>\n{{who}}\n</context>\n<examples>\n\n</examples>\n<instruction>\n{{method_description}}\n</instruction>";
        assert!(matches!(PromptTemplate::parse(unknown), Err(PromptError::Template(_))));
    }

    #[test]
    fn description_with_braces_is_not_expanded() {
        let mut u = unit();
        u.rendered_description = "literal {{class_type}} text".into();
        let doc = render_prompt(&u, &PromptConfig::new("java.util.List")).unwrap();
        assert!(doc.rendered_text.contains("literal {{class_type}} text"));
    }
}
