//! Annotated paragraph input and the process graph built from it.

mod graph;

use thiserror::Error;

use crate::text::normalize;

pub use graph::{
    build_graph, ArgumentNode, EventEdge, EventNode, EventRelation, ProcessGraph, RoleEdge, RuleSelection, TupleSlot,
    DEFAULT_STOPLIST,
};

/// One clause as an `(S V O PP*)` tuple.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EventTuple {
    /// 1-based position in the paragraph.
    pub index: usize,
    pub subject: Option<String>,
    pub verb: String,
    pub object: Option<String>,
    /// `(preposition, noun phrase)` in source order.
    pub preps: Vec<(String, String)>,
    /// Roles pinned by the annotator, in source order.
    pub role_overrides: Vec<(String, String)>,
}

impl EventTuple {
    pub fn new(index: usize, verb: &str) -> Self {
        EventTuple {
            index,
            verb: normalize(verb),
            ..Default::default()
        }
    }

    pub fn with_subject(mut self, np: &str) -> Self {
        self.subject = Some(np.trim().to_string());
        self
    }

    pub fn with_object(mut self, np: &str) -> Self {
        self.object = Some(np.trim().to_string());
        self
    }

    pub fn with_prep(mut self, prep: &str, np: &str) -> Self {
        self.preps.push((normalize(prep), np.trim().to_string()));
        self
    }

    pub fn with_role(mut self, role: &str, np: &str) -> Self {
        self.role_overrides.push((role.to_string(), np.trim().to_string()));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParagraphErrorKind {
    #[error("malformed line: {0}")]
    MalformedLine(String),
    #[error("event index E{0} appears twice")]
    DuplicateIndex(usize),
    #[error("expected event index E{expected}, found E{found}")]
    NonConsecutiveIndex { expected: usize, found: usize },
}

impl ParagraphErrorKind {
    pub fn code(&self) -> &'static str {
        match self {
            ParagraphErrorKind::MalformedLine(_) => "malformed-line",
            ParagraphErrorKind::DuplicateIndex(_) => "duplicate-index",
            ParagraphErrorKind::NonConsecutiveIndex { .. } => "non-consecutive-index",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParagraphError {
    pub line: usize,
    pub kind: ParagraphErrorKind,
}

/// Parses `E<i> | subj: .. | verb: .. | obj: .. | prep: <word> = <np> | roles: R=np, ..`.
pub fn parse_paragraph_file(source: &str) -> Result<Vec<EventTuple>, ParagraphError> {
    let mut tuples: Vec<EventTuple> = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |kind| ParagraphError { line: idx + 1, kind };
        let tuple = parse_event_line(line).map_err(at)?;
        if tuples.iter().any(|t| t.index == tuple.index) {
            return Err(at(ParagraphErrorKind::DuplicateIndex(tuple.index)));
        }
        let expected = tuples.len() + 1;
        if tuple.index != expected {
            return Err(at(ParagraphErrorKind::NonConsecutiveIndex {
                expected,
                found: tuple.index,
            }));
        }
        tuples.push(tuple);
    }
    Ok(tuples)
}

fn parse_event_line(line: &str) -> Result<EventTuple, ParagraphErrorKind> {
    let malformed = |m: String| ParagraphErrorKind::MalformedLine(m);
    let mut fields = line.split('|').map(str::trim);
    let label = fields.next().unwrap_or_default();
    let index: usize = label
        .strip_prefix('E')
        .and_then(|n| n.parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| malformed(format!("expected event label `E<i>`, found `{label}`")))?;

    let mut tuple = EventTuple {
        index,
        ..Default::default()
    };
    let mut verb_seen = false;
    for field in fields {
        let (key, value) = field
            .split_once(':')
            .ok_or_else(|| malformed(format!("field `{field}` has no `key:`")))?;
        let value = value.trim();
        let nonempty = |v: &str, what: &str| {
            if v.is_empty() {
                Err(malformed(format!("empty `{what}` field")))
            } else {
                Ok(v.to_string())
            }
        };
        match key.trim() {
            "subj" => {
                if tuple.subject.replace(nonempty(value, "subj")?).is_some() {
                    return Err(malformed("duplicate `subj` field".into()));
                }
            }
            "obj" => {
                if tuple.object.replace(nonempty(value, "obj")?).is_some() {
                    return Err(malformed("duplicate `obj` field".into()));
                }
            }
            "verb" => {
                if verb_seen {
                    return Err(malformed("duplicate `verb` field".into()));
                }
                tuple.verb = normalize(&nonempty(value, "verb")?);
                verb_seen = true;
            }
            "prep" => {
                let (prep, np) = value
                    .split_once('=')
                    .ok_or_else(|| malformed(format!("prep `{value}` is not `<word> = <np>`")))?;
                let prep = normalize(prep);
                let np = np.trim();
                if prep.is_empty() || np.is_empty() {
                    return Err(malformed(format!("prep `{value}` is not `<word> = <np>`")));
                }
                tuple.preps.push((prep, np.to_string()));
            }
            "roles" => {
                for (role, np) in parse_roles(value).map_err(malformed)? {
                    tuple.role_overrides.push((role, np));
                }
            }
            other => return Err(malformed(format!("unknown field `{other}`"))),
        }
    }
    if !verb_seen {
        return Err(malformed("missing `verb` field".into()));
    }
    Ok(tuple)
}

/// `Role=np, Role=np`; commas inside a phrase are kept when the following
/// segment has no `=`.
fn parse_roles(value: &str) -> Result<Vec<(String, String)>, String> {
    let mut segments: Vec<String> = Vec::new();
    for part in value.split(',') {
        match segments.last_mut() {
            Some(last) if !part.contains('=') => {
                last.push(',');
                last.push_str(part);
            }
            _ => segments.push(part.to_string()),
        }
    }
    let mut out: Vec<(String, String)> = Vec::new();
    for seg in segments {
        let (role, np) = seg
            .split_once('=')
            .ok_or_else(|| format!("role assignment `{}` has no `=`", seg.trim()))?;
        let (role, np) = (role.trim(), np.trim());
        if role.is_empty() || np.is_empty() {
            return Err(format!("bad role assignment `{}`", seg.trim()));
        }
        if out.iter().any(|(r, _)| r == role) {
            return Err(format!("role `{role}` assigned twice"));
        }
        out.push((role.to_string(), np.to_string()));
    }
    Ok(out)
}
