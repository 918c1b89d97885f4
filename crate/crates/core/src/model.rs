//! The Facade-X meta-model.
//!
//! A data source is a tree of *containers*. Each container carries an optional
//! set of type labels and a list of *slots*; a slot is identified by a key that
//! is either a non-empty string or a positive integer, and holds exactly one
//! child container or one literal value. Exactly one container, the root,
//! stands for the whole data source.
//!
//! [`tree_to_graph`] maps such a tree onto RDF:
//!
//! * the root is typed `fx:Root`;
//! * a string key `k` becomes the predicate `<data namespace>k`;
//! * a number key `n` becomes the container membership property `rdf:_n`;
//! * each type label `t` becomes `rdf:type <fx:t>`.

use crate::error::{Error, Result};
use base64::Engine;
use oxrdf::vocab::{rdf, xsd};
use oxrdf::{BlankNode, Graph, Literal, NamedNode, NamedOrBlankNode, Term, Triple};
use std::collections::{HashMap, HashSet};
use std::fmt;

pub const FX_NAMESPACE: &str = "http://sparql.xyz/facade-x/ns/";
pub const FX_ROOT: &str = "http://sparql.xyz/facade-x/ns/Root";
pub const DEFAULT_DATA_NAMESPACE: &str = "http://sparql.xyz/facade-x/data/";
pub const RDF_NAMESPACE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const METADATA_GRAPH: &str = "http://sparql.xyz/facade-x/data/metadata";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FacadeKey {
    String(String),
    Number(u64),
}

impl FacadeKey {
    pub fn string(key: impl Into<String>) -> Self {
        FacadeKey::String(key.into())
    }

    pub fn number(index: u64) -> Self {
        FacadeKey::Number(index)
    }
}

impl From<&str> for FacadeKey {
    fn from(key: &str) -> Self {
        FacadeKey::String(key.to_owned())
    }
}

impl From<String> for FacadeKey {
    fn from(key: String) -> Self {
        FacadeKey::String(key)
    }
}

impl From<u64> for FacadeKey {
    fn from(index: u64) -> Self {
        FacadeKey::Number(index)
    }
}

impl fmt::Display for FacadeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FacadeKey::String(s) => f.write_str(&s.replace('~', "~0").replace('/', "~1")),
            FacadeKey::Number(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Datatype {
    String,
    Integer,
    Decimal,
    Double,
    Boolean,
    Base64Binary,
}

impl Datatype {
    pub fn iri(self) -> NamedNode {
        match self {
            Datatype::String => xsd::STRING.into_owned(),
            Datatype::Integer => xsd::INTEGER.into_owned(),
            Datatype::Decimal => xsd::DECIMAL.into_owned(),
            Datatype::Double => xsd::DOUBLE.into_owned(),
            Datatype::Boolean => xsd::BOOLEAN.into_owned(),
            Datatype::Base64Binary => xsd::BASE_64_BINARY.into_owned(),
        }
    }

    pub fn is_valid_lexical(self, lexical: &str) -> bool {
        match self {
            Datatype::String => true,
            Datatype::Integer => is_integer_lexical(lexical),
            Datatype::Decimal => is_decimal_lexical(lexical),
            Datatype::Double => {
                matches!(lexical, "INF" | "+INF" | "-INF" | "NaN") || is_double_lexical(lexical)
            }
            Datatype::Boolean => matches!(lexical, "true" | "false" | "1" | "0"),
            Datatype::Base64Binary => base64::engine::general_purpose::STANDARD
                .decode(lexical)
                .is_ok(),
        }
    }
}

fn strip_sign(s: &str) -> &str {
    s.strip_prefix(['+', '-']).unwrap_or(s)
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn is_integer_lexical(s: &str) -> bool {
    is_digits(strip_sign(s))
}

fn is_decimal_lexical(s: &str) -> bool {
    let s = strip_sign(s);
    match s.split_once('.') {
        None => is_digits(s),
        Some((int, frac)) => {
            (int.is_empty() || is_digits(int))
                && (frac.is_empty() || is_digits(frac))
                && !(int.is_empty() && frac.is_empty())
        }
    }
}

fn is_double_lexical(s: &str) -> bool {
    match s.split_once(['e', 'E']) {
        None => is_decimal_lexical(s),
        Some((mantissa, exponent)) => is_decimal_lexical(mantissa) && is_integer_lexical(exponent),
    }
}

/// A literal held by a slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FacadeValue {
    lexical: String,
    datatype: Datatype,
}

impl FacadeValue {
    pub fn new(lexical: impl Into<String>, datatype: Datatype) -> Result<Self> {
        let lexical = lexical.into();
        if !datatype.is_valid_lexical(&lexical) {
            return Err(Error::Precondition(format!(
                "{lexical:?} is not a valid {datatype:?} lexical form"
            )));
        }
        Ok(FacadeValue { lexical, datatype })
    }

    /// Builds a value without checking the lexical form. [`validate_tree`]
    /// reports any mismatch.
    pub fn new_unchecked(lexical: impl Into<String>, datatype: Datatype) -> Self {
        FacadeValue {
            lexical: lexical.into(),
            datatype,
        }
    }

    pub fn string(value: impl Into<String>) -> Self {
        Self::new_unchecked(value, Datatype::String)
    }

    pub fn integer(value: i64) -> Self {
        Self::new_unchecked(value.to_string(), Datatype::Integer)
    }

    pub fn double(value: f64) -> Self {
        let lexical = if value.is_nan() {
            "NaN".to_owned()
        } else if value.is_infinite() {
            if value > 0.0 { "INF" } else { "-INF" }.to_owned()
        } else {
            format!("{value:?}")
        };
        Self::new_unchecked(lexical, Datatype::Double)
    }

    pub fn boolean(value: bool) -> Self {
        Self::new_unchecked(value.to_string(), Datatype::Boolean)
    }

    pub fn base64(bytes: &[u8]) -> Self {
        Self::new_unchecked(
            base64::engine::general_purpose::STANDARD.encode(bytes),
            Datatype::Base64Binary,
        )
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Datatype {
        self.datatype
    }

    pub fn to_literal(&self) -> Literal {
        match self.datatype {
            Datatype::String => Literal::new_simple_literal(&self.lexical),
            other => Literal::new_typed_literal(&self.lexical, other.iri()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SlotContent {
    Container(FacadeContainer),
    Value(FacadeValue),
}

impl From<FacadeContainer> for SlotContent {
    fn from(c: FacadeContainer) -> Self {
        SlotContent::Container(c)
    }
}

impl From<FacadeValue> for SlotContent {
    fn from(v: FacadeValue) -> Self {
        SlotContent::Value(v)
    }
}

/// An optionally typed set of keyed slots, in source order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FacadeContainer {
    types: Vec<String>,
    slots: Vec<(FacadeKey, SlotContent)>,
}

impl FacadeContainer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn typed(label: impl Into<String>) -> Self {
        let mut c = Self::new();
        c.add_type(label);
        c
    }

    pub fn add_type(&mut self, label: impl Into<String>) {
        let label = label.into();
        if !self.types.contains(&label) {
            self.types.push(label);
        }
    }

    /// Appends a slot. Duplicate keys are kept and surface as validation
    /// violations.
    pub fn push(&mut self, key: impl Into<FacadeKey>, content: impl Into<SlotContent>) {
        self.slots.push((key.into(), content.into()));
    }

    pub fn with(mut self, key: impl Into<FacadeKey>, content: impl Into<SlotContent>) -> Self {
        self.push(key, content);
        self
    }

    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn slots(&self) -> &[(FacadeKey, SlotContent)] {
        &self.slots
    }

    pub(crate) fn slots_mut(&mut self) -> &mut Vec<(FacadeKey, SlotContent)> {
        &mut self.slots
    }

    pub fn get(&self, key: &FacadeKey) -> Option<&SlotContent> {
        self.slots.iter().find(|(k, _)| k == key).map(|(_, c)| c)
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Number of triples [`tree_to_graph`] emits for this container and its
    /// descendants, excluding the root typing triple.
    pub fn triple_count(&self) -> usize {
        self.types.len()
            + self
                .slots
                .iter()
                .map(|(_, c)| match c {
                    SlotContent::Container(child) => 1 + child.triple_count(),
                    SlotContent::Value(_) => 1,
                })
                .sum::<usize>()
    }
}

/// A data source re-engineered as a Facade-X tree.
#[derive(Debug, Clone, PartialEq)]
pub struct FacadeTree {
    pub root: FacadeContainer,
    pub source_name: Option<String>,
}

impl FacadeTree {
    pub fn new(root: FacadeContainer) -> Self {
        FacadeTree {
            root,
            source_name: None,
        }
    }

    pub fn with_source_name(mut self, name: impl Into<String>) -> Self {
        self.source_name = Some(name.into());
        self
    }

    pub fn triple_count(&self) -> usize {
        1 + self.root.triple_count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// Slots of one container are uniquely identified by their key.
    KeyUniqueness,
    /// Number keys are positive integers.
    NumberKeyPositive,
    /// String keys are non-empty.
    StringKeyNonEmpty,
    /// Type labels are non-empty.
    TypeLabelNonEmpty,
    /// A value's lexical form is valid for its datatype.
    ValueLexicalForm,
}

impl Axiom {
    pub fn id(self) -> &'static str {
        match self {
            Axiom::KeyUniqueness => "key-uniqueness",
            Axiom::NumberKeyPositive => "number-key-positive",
            Axiom::StringKeyNonEmpty => "string-key-non-empty",
            Axiom::TypeLabelNonEmpty => "type-label-non-empty",
            Axiom::ValueLexicalForm => "value-lexical-form",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    /// Slash-separated key path from the root, `/` for the root itself.
    pub path: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "[{}] {}: {}", v.axiom.id(), v.path, v.detail)?;
        }
        Ok(())
    }
}

/// Checks the meta-model axioms that the Rust types do not already enforce.
///
/// Single root, slot exclusivity (container xor value) and single parenthood
/// hold by construction: a tree owns its root, [`SlotContent`] is an enum and
/// children are owned by exactly one slot.
pub fn validate_tree(tree: &FacadeTree) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut stack = vec![(&tree.root, String::new())];
    while let Some((container, path)) = stack.pop() {
        let here = if path.is_empty() { "/" } else { path.as_str() };
        for label in &container.types {
            if label.is_empty() {
                report.violations.push(Violation {
                    axiom: Axiom::TypeLabelNonEmpty,
                    path: here.to_owned(),
                    detail: "empty type label".into(),
                });
            }
        }
        let mut seen = HashSet::with_capacity(container.slots.len());
        for (key, content) in &container.slots {
            let child_path = format!("{path}/{key}");
            match key {
                FacadeKey::Number(0) => report.violations.push(Violation {
                    axiom: Axiom::NumberKeyPositive,
                    path: child_path.clone(),
                    detail: "number key 0".into(),
                }),
                FacadeKey::String(s) if s.is_empty() => report.violations.push(Violation {
                    axiom: Axiom::StringKeyNonEmpty,
                    path: child_path.clone(),
                    detail: "empty string key".into(),
                }),
                _ => {}
            }
            if !seen.insert(key) {
                report.violations.push(Violation {
                    axiom: Axiom::KeyUniqueness,
                    path: child_path.clone(),
                    detail: format!("key {key:?} used by more than one slot"),
                });
            }
            match content {
                SlotContent::Container(child) => stack.push((child, child_path)),
                SlotContent::Value(v) => {
                    if !v.datatype.is_valid_lexical(&v.lexical) {
                        report.violations.push(Violation {
                            axiom: Axiom::ValueLexicalForm,
                            path: child_path,
                            detail: format!("{:?} is not a valid {:?}", v.lexical, v.datatype),
                        });
                    }
                }
            }
        }
    }
    report
}

/// IRI namespaces and root naming used when minting RDF terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MintingConfig {
    data_namespace: String,
    root_iri: Option<NamedNode>,
}

impl Default for MintingConfig {
    fn default() -> Self {
        MintingConfig {
            data_namespace: DEFAULT_DATA_NAMESPACE.to_owned(),
            root_iri: None,
        }
    }
}

impl MintingConfig {
    pub fn new(data_namespace: Option<&str>, root_iri: Option<&str>) -> Result<Self> {
        let mut config = Self::default();
        if let Some(ns) = data_namespace {
            NamedNode::new(ns)
                .map_err(|e| Error::Config(format!("namespace {ns:?} is not an IRI: {e}")))?;
            if !ns.ends_with(['/', '#']) {
                return Err(Error::Config(format!(
                    "namespace {ns:?} must end with '/' or '#'"
                )));
            }
            config.data_namespace = ns.to_owned();
        }
        if let Some(root) = root_iri {
            config.root_iri = Some(
                NamedNode::new(root)
                    .map_err(|e| Error::Config(format!("root {root:?} is not an IRI: {e}")))?,
            );
        }
        Ok(config)
    }

    pub fn data_namespace(&self) -> &str {
        &self.data_namespace
    }

    pub fn ontology_namespace(&self) -> &str {
        FX_NAMESPACE
    }

    pub fn root_iri(&self) -> Option<&NamedNode> {
        self.root_iri.as_ref()
    }
}

/// Percent-encodes every character except letters, digits, `-`, `_` and `.`
/// as its UTF-8 octets.
pub fn encode_local_name(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for c in name.chars() {
        if c.is_alphanumeric() || matches!(c, '-' | '_' | '.') {
            out.push(c);
        } else {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                out.push_str(&format!("%{b:02X}"));
            }
        }
    }
    out
}

pub fn mint_key_property(key: &str, config: &MintingConfig) -> NamedNode {
    NamedNode::new_unchecked(format!(
        "{}{}",
        config.data_namespace,
        encode_local_name(key)
    ))
}

pub fn mint_type(label: &str, config: &MintingConfig) -> NamedNode {
    NamedNode::new_unchecked(format!(
        "{}{}",
        config.ontology_namespace(),
        encode_local_name(label)
    ))
}

pub fn membership_property(index: u64) -> Result<NamedNode> {
    if index < 1 {
        return Err(Error::Precondition(
            "container membership index must be at least 1".into(),
        ));
    }
    Ok(NamedNode::new_unchecked(format!("{RDF_NAMESPACE}_{index}")))
}

/// Feeds every triple of the RDF rendering of `tree` to `sink`, validating
/// the tree first.
pub fn emit_triples(
    tree: &FacadeTree,
    config: &MintingConfig,
    mut sink: impl FnMut(Triple),
) -> Result<()> {
    let report = validate_tree(tree);
    if !report.is_empty() {
        return Err(Error::InvalidTree(report));
    }
    let fx_root = NamedNode::new_unchecked(FX_ROOT);
    let rdf_type = rdf::TYPE.into_owned();
    let mut properties: HashMap<&FacadeKey, NamedNode> = HashMap::new();
    let mut types: HashMap<&str, NamedNode> = HashMap::new();

    let root: NamedOrBlankNode = match &config.root_iri {
        Some(iri) => iri.clone().into(),
        None => BlankNode::default().into(),
    };
    sink(Triple::new(root.clone(), rdf_type.clone(), fx_root));

    let mut stack = vec![(&tree.root, root)];
    while let Some((container, subject)) = stack.pop() {
        for label in &container.types {
            let object = types
                .entry(label.as_str())
                .or_insert_with(|| mint_type(label, config))
                .clone();
            sink(Triple::new(subject.clone(), rdf_type.clone(), object));
        }
        for (key, content) in &container.slots {
            let predicate = properties
                .entry(key)
                .or_insert_with(|| match key {
                    FacadeKey::String(s) => mint_key_property(s, config),
                    FacadeKey::Number(n) => {
                        NamedNode::new_unchecked(format!("{RDF_NAMESPACE}_{n}"))
                    }
                })
                .clone();
            let object: Term = match content {
                SlotContent::Container(child) => {
                    let node = BlankNode::default();
                    stack.push((child, node.clone().into()));
                    node.into()
                }
                SlotContent::Value(v) => v.to_literal().into(),
            };
            sink(Triple::new(subject.clone(), predicate, object));
        }
    }
    Ok(())
}

pub fn tree_to_graph(tree: &FacadeTree, config: &MintingConfig) -> Result<Graph> {
    let mut graph = Graph::new();
    emit_triples(tree, config, |t| {
        graph.insert(&t);
    })?;
    Ok(graph)
}
