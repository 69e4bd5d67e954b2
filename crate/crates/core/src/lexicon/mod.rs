//! The verb lexicon: STRIPS-style rules mapping a syntactic pattern to the
//! literals that hold before and after the event it describes.
//!
//! A [`Lexicon`] is immutable once parsed and can be shared freely between
//! threads; matching and instantiation are pure functions.

mod literal;
mod matching;
mod parse;
mod verbnet;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use literal::{GroundLiteral, Literal, Predicate, Term, DIRECTION_VALUES, PHASE_VALUES};
pub use matching::{instantiate, match_pattern, select_rule, InstantiateError, RuleMatch, SlotUse};
pub use parse::parse_lexicon;
pub use verbnet::{import_verbnet_frame, DroppedAssertion, FrameImport, TimeTag, VerbNetFrameAssertion};

/// How a pattern's prepositional slot selects tuple prepositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PrepSpec {
    Word(String),
    /// Any member of the source class (`PREP-src`).
    Source,
    /// Any member of the destination class (`PREP-dest`).
    Destination,
}

impl fmt::Display for PrepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrepSpec::Word(w) => write!(f, "\"{w}\""),
            PrepSpec::Source => f.write_str("PREP-src"),
            PrepSpec::Destination => f.write_str("PREP-dest"),
        }
    }
}

/// Membership of the two preposition classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrepClasses {
    pub source: Vec<String>,
    pub destination: Vec<String>,
}

impl Default for PrepClasses {
    fn default() -> Self {
        PrepClasses {
            source: ["from", "out of", "off", "out"].map(String::from).to_vec(),
            destination: ["to", "into", "onto", "in"].map(String::from).to_vec(),
        }
    }
}

impl PrepClasses {
    pub fn accepts(&self, spec: &PrepSpec, prep: &str) -> bool {
        match spec {
            PrepSpec::Word(w) => w == prep,
            PrepSpec::Source => self.is_source(prep),
            PrepSpec::Destination => self.is_destination(prep),
        }
    }

    pub fn is_source(&self, prep: &str) -> bool {
        self.source.iter().any(|p| p == prep)
    }

    pub fn is_destination(&self, prep: &str) -> bool {
        self.destination.iter().any(|p| p == prep)
    }
}

/// `(S V O (Prep NP)*)` with role names in the argument slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SyntacticPattern {
    pub subject: String,
    pub verb: String,
    /// `None` is the `-` marker: the rule only matches tuples without an object.
    pub object: Option<String>,
    pub preps: Vec<(PrepSpec, String)>,
}

impl SyntacticPattern {
    /// Role names in slot order.
    pub fn roles(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.subject.as_str())
            .chain(self.object.as_deref())
            .chain(self.preps.iter().map(|(_, r)| r.as_str()))
    }

    pub fn has_role(&self, role: &str) -> bool {
        self.roles().any(|r| r == role)
    }
}

impl fmt::Display for SyntacticPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} \"{}\" {}",
            self.subject,
            self.verb,
            self.object.as_deref().unwrap_or("-")
        )?;
        for (spec, role) in &self.preps {
            write!(f, " ({spec} {role})")?;
        }
        Ok(())
    }
}

/// One lexicon entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VerbRule {
    pub verb: String,
    /// Opaque class id, e.g. a Levin class.
    pub class_id: String,
    /// Opaque sense tag; never interpreted.
    pub sense_id: String,
    pub pattern: SyntacticPattern,
    pub before: Vec<Literal>,
    pub after: Vec<Literal>,
}

impl VerbRule {
    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.before.iter().chain(&self.after)
    }

    /// Roles that fill a value-domain position (e.g. the state in
    /// `phase(Patient, State)`); the bound phrase must then be in the domain.
    pub fn constrained_roles(&self) -> Vec<(&str, &'static [&'static str])> {
        let mut out = Vec::new();
        for lit in self.literals() {
            if let (Some(domain), Some(Term::Role(role))) = (lit.predicate.value_domain(), lit.args.get(1)) {
                out.push((role.as_str(), domain));
            }
        }
        out
    }

    pub fn is_no_change(&self) -> bool {
        self.before.is_empty() && self.after.is_empty()
    }
}

fn write_literals(f: &mut fmt::Formatter<'_>, lits: &[Literal]) -> fmt::Result {
    for (i, lit) in lits.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{lit}")?;
    }
    Ok(())
}

impl fmt::Display for VerbRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verb: {}", self.verb)?;
        if !self.class_id.is_empty() {
            write!(f, " | class: {}", self.class_id)?;
        }
        if !self.sense_id.is_empty() {
            write!(f, " | sense: {}", self.sense_id)?;
        }
        write!(f, " | pattern: {} | before: ", self.pattern)?;
        write_literals(f, &self.before)?;
        f.write_str(" | after: ")?;
        write_literals(f, &self.after)
    }
}

/// Role name to bound noun phrase (surface form).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RoleBinding(pub BTreeMap<String, String>);

impl RoleBinding {
    pub fn get(&self, role: &str) -> Option<&str> {
        self.0.get(role).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for RoleBinding {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        RoleBinding(iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }
}

/// Ordered rule list with a per-verb index. File order is significant: it
/// breaks ties in [`select_rule`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lexicon {
    rules: Vec<VerbRule>,
    index: BTreeMap<String, Vec<usize>>,
    prep_classes: PrepClasses,
}

impl Lexicon {
    pub fn new(rules: Vec<VerbRule>, prep_classes: PrepClasses) -> Self {
        let mut index: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (pos, rule) in rules.iter().enumerate() {
            index.entry(rule.verb.clone()).or_default().push(pos);
        }
        Lexicon {
            rules,
            index,
            prep_classes,
        }
    }

    pub fn rules(&self) -> &[VerbRule] {
        &self.rules
    }

    pub fn prep_classes(&self) -> &PrepClasses {
        &self.prep_classes
    }

    /// Positions of the rules for `verb`, in file order.
    pub fn positions(&self, verb: &str) -> &[usize] {
        self.index.get(verb).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn rules_for<'a>(&'a self, verb: &str) -> impl Iterator<Item = (usize, &'a VerbRule)> + 'a {
        self.positions(verb).iter().map(move |&p| (p, &self.rules[p]))
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// Serializes to the line format accepted by [`parse_lexicon`].
impl fmt::Display for Lexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "prep-src: {}", self.prep_classes.source.join(", "))?;
        writeln!(f, "prep-dest: {}", self.prep_classes.destination.join(", "))?;
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconErrorKind {
    #[error("malformed line: {0}")]
    MalformedLine(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("`{predicate}` takes {expected} argument(s), found {found}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("role `{0}` is not bound by the pattern")]
    UnboundRole(String),
    #[error("`{value}` is not a valid {predicate} value")]
    BadValueDomain { predicate: String, value: String },
}

impl LexiconErrorKind {
    /// Stable diagnostic name.
    pub fn code(&self) -> &'static str {
        match self {
            LexiconErrorKind::MalformedLine(_) => "malformed-line",
            LexiconErrorKind::UnknownPredicate(_) => "unknown-predicate",
            LexiconErrorKind::ArityMismatch { .. } => "arity-mismatch",
            LexiconErrorKind::UnboundRole(_) => "unbound-role",
            LexiconErrorKind::BadValueDomain { .. } => "bad-value-domain",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct LexiconError {
    pub line: usize,
    pub kind: LexiconErrorKind,
}
