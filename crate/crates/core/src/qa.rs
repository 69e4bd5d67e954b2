//! Templated questions about change and their answer procedures.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::ingest::ProcessGraph;
use crate::lexicon::PHASE_VALUES;
use crate::simulate::{ChangeDetail, ChangeKind, ChangeRecord};
use crate::text::canonical;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Increased,
    Decreased,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Increased => "increased",
            Direction::Decreased => "decreased",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    From,
    To,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Question {
    /// What is produced / consumed / moved?
    WhatChanged(ChangeKind),
    /// Where is X produced (consumed)?
    WhereChange {
        participant: String,
        produced: bool,
    },
    /// Where is X moved from (to)?
    MoveEndpoint {
        participant: String,
        endpoint: Endpoint,
    },
    TemperatureDirection(Direction),
    SizeDirection(Direction),
    PhaseTransition {
        from: String,
        to: String,
    },
    /// Which steps does step i depend on?
    StepDependencies(usize),
}

/// Every accepted `class:` value.
pub const QUESTION_CLASSES: &[&str] = &[
    "what-produced",
    "what-consumed",
    "what-moved",
    "where-produced",
    "where-consumed",
    "where-moved-from",
    "where-moved-to",
    "temperature-increased",
    "temperature-decreased",
    "size-increased",
    "size-decreased",
    "phase-change",
    "step-dependencies",
];

impl Question {
    pub fn class(&self) -> &'static str {
        match self {
            Question::WhatChanged(ChangeKind::Produced) => "what-produced",
            Question::WhatChanged(ChangeKind::Consumed) => "what-consumed",
            Question::WhatChanged(_) => "what-moved",
            Question::WhereChange { produced: true, .. } => "where-produced",
            Question::WhereChange { produced: false, .. } => "where-consumed",
            Question::MoveEndpoint {
                endpoint: Endpoint::From,
                ..
            } => "where-moved-from",
            Question::MoveEndpoint {
                endpoint: Endpoint::To, ..
            } => "where-moved-to",
            Question::TemperatureDirection(Direction::Increased) => "temperature-increased",
            Question::TemperatureDirection(Direction::Decreased) => "temperature-decreased",
            Question::SizeDirection(Direction::Increased) => "size-increased",
            Question::SizeDirection(Direction::Decreased) => "size-decreased",
            Question::PhaseTransition { .. } => "phase-change",
            Question::StepDependencies(_) => "step-dependencies",
        }
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.class())?;
        match self {
            Question::WhereChange { participant, .. } | Question::MoveEndpoint { participant, .. } => {
                write!(f, "({participant})")
            }
            Question::PhaseTransition { from, to } => write!(f, "({from}, {to})"),
            Question::StepDependencies(step) => write!(f, "({step})"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuestionErrorKind {
    #[error("unknown question class `{0}`")]
    UnknownClass(String),
    #[error("missing `{slot}` slot{}", for_class(.class))]
    MissingSlot { class: String, slot: String },
    #[error("class `{class}` takes no `{slot}` slot")]
    UnexpectedSlot { class: String, slot: String },
    #[error("bad value `{value}` for slot `{slot}`")]
    BadSlot { slot: String, value: String },
    #[error("question id `{0}` appears twice")]
    DuplicateId(String),
    #[error("malformed line: {0}")]
    MalformedLine(String),
}

fn for_class(class: &str) -> String {
    if class.is_empty() {
        String::new()
    } else {
        format!(" for class `{class}`")
    }
}

impl QuestionErrorKind {
    pub fn code(&self) -> &'static str {
        match self {
            QuestionErrorKind::UnknownClass(_) => "unknown-class",
            QuestionErrorKind::MissingSlot { .. } => "missing-slot",
            QuestionErrorKind::UnexpectedSlot { .. } => "unexpected-slot",
            QuestionErrorKind::BadSlot { .. } => "bad-slot",
            QuestionErrorKind::DuplicateId(_) => "duplicate-id",
            QuestionErrorKind::MalformedLine(_) => "malformed-line",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct QuestionError {
    pub line: usize,
    pub kind: QuestionErrorKind,
}

/// A question file line: id, question and optional gold answers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionLine {
    pub id: String,
    pub question: Question,
    /// `None` when the line has no `gold:` field; `Some(vec![])` for an
    /// explicit empty answer.
    pub gold: Option<Vec<String>>,
}

/// Parses the question part of a line, ignoring any `Q<k>` label and
/// `gold:` field.
pub fn parse_question(line: &str) -> Result<Question, QuestionErrorKind> {
    parse_question_line(line).map(|q| q.question)
}

/// Parses `Q<k> | class: .. | X: .. | from: .. | to: .. | step: .. | gold: a; b`.
/// A missing label becomes `Q`.
pub fn parse_question_line(line: &str) -> Result<QuestionLine, QuestionErrorKind> {
    let malformed = |m: String| QuestionErrorKind::MalformedLine(m);
    let mut id = String::from("Q");
    let mut class = None;
    let mut slots: Vec<(&str, &str)> = Vec::new();
    let mut gold = None;
    for (i, field) in line.split('|').map(str::trim).enumerate() {
        let Some((key, value)) = field.split_once(':') else {
            if i == 0 && !field.is_empty() && !field.contains(char::is_whitespace) {
                id = field.to_string();
                continue;
            }
            return Err(malformed(format!("field `{field}` has no `key:`")));
        };
        let (key, value) = (key.trim(), value.trim());
        let seen = |k: &str| slots.iter().any(|(s, _)| *s == k);
        match key {
            "class" if class.is_none() => class = Some(value),
            "gold" if gold.is_none() => {
                gold = Some(
                    value
                        .split(';')
                        .map(str::trim)
                        .filter(|a| !a.is_empty())
                        .map(str::to_string)
                        .collect(),
                )
            }
            "X" | "from" | "to" | "step" if !seen(key) => slots.push((key, value)),
            "class" | "gold" | "X" | "from" | "to" | "step" => {
                return Err(malformed(format!("duplicate `{key}` field")))
            }
            other => return Err(malformed(format!("unknown field `{other}`"))),
        }
    }
    let class = class.ok_or_else(|| QuestionErrorKind::MissingSlot {
        class: String::new(),
        slot: "class".into(),
    })?;
    let question = build(class, &slots)?;
    Ok(QuestionLine { id, question, gold })
}

fn build(class: &str, slots: &[(&str, &str)]) -> Result<Question, QuestionErrorKind> {
    let wanted: &[&str] = match class {
        "where-produced" | "where-consumed" | "where-moved-from" | "where-moved-to" => &["X"],
        "phase-change" => &["from", "to"],
        "step-dependencies" => &["step"],
        c if QUESTION_CLASSES.contains(&c) => &[],
        other => return Err(QuestionErrorKind::UnknownClass(other.to_string())),
    };
    if let Some((slot, _)) = slots.iter().find(|(s, _)| !wanted.contains(s)) {
        return Err(QuestionErrorKind::UnexpectedSlot {
            class: class.into(),
            slot: slot.to_string(),
        });
    }
    let get = |slot: &str| {
        slots
            .iter()
            .find(|(s, _)| *s == slot)
            .map(|(_, v)| *v)
            .filter(|v| !v.is_empty())
            .ok_or_else(|| QuestionErrorKind::MissingSlot {
                class: class.into(),
                slot: slot.into(),
            })
    };
    let phase = |slot: &str| {
        let v = get(slot)?.to_lowercase();
        if PHASE_VALUES.contains(&v.as_str()) {
            Ok(v)
        } else {
            Err(QuestionErrorKind::BadSlot {
                slot: slot.into(),
                value: v,
            })
        }
    };
    Ok(match class {
        "what-produced" => Question::WhatChanged(ChangeKind::Produced),
        "what-consumed" => Question::WhatChanged(ChangeKind::Consumed),
        "what-moved" => Question::WhatChanged(ChangeKind::Moved),
        "where-produced" | "where-consumed" => Question::WhereChange {
            participant: get("X")?.to_string(),
            produced: class == "where-produced",
        },
        "where-moved-from" | "where-moved-to" => Question::MoveEndpoint {
            participant: get("X")?.to_string(),
            endpoint: if class == "where-moved-from" {
                Endpoint::From
            } else {
                Endpoint::To
            },
        },
        "temperature-increased" => Question::TemperatureDirection(Direction::Increased),
        "temperature-decreased" => Question::TemperatureDirection(Direction::Decreased),
        "size-increased" => Question::SizeDirection(Direction::Increased),
        "size-decreased" => Question::SizeDirection(Direction::Decreased),
        "phase-change" => Question::PhaseTransition {
            from: phase("from")?,
            to: phase("to")?,
        },
        _ => {
            let raw = get("step")?;
            let step = raw
                .parse()
                .ok()
                .filter(|&s: &usize| s > 0)
                .ok_or_else(|| QuestionErrorKind::BadSlot {
                    slot: "step".into(),
                    value: raw.into(),
                })?;
            Question::StepDependencies(step)
        }
    })
}

/// Parses a whole question file; `#` comments and blank lines are skipped.
pub fn parse_question_file(source: &str) -> Result<Vec<QuestionLine>, QuestionError> {
    let mut out: Vec<QuestionLine> = Vec::new();
    let mut ids = BTreeSet::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |kind| QuestionError { line: idx + 1, kind };
        let mut q = parse_question_line(line).map_err(at)?;
        if q.id == "Q" {
            q.id = format!("Q{}", out.len() + 1);
        }
        if !ids.insert(q.id.clone()) {
            return Err(at(QuestionErrorKind::DuplicateId(q.id)));
        }
        out.push(q);
    }
    Ok(out)
}

/// Answers in event order, then headword order, without duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnswerSet(pub Vec<String>);

impl AnswerSet {
    /// Membership by headword, so "the leaf" matches "leaf".
    pub fn contains(&self, answer: &str) -> bool {
        let head = canonical(answer);
        self.0.iter().any(|a| canonical(a) == head)
    }

    fn from_events(mut items: Vec<(usize, String)>) -> Self {
        items.sort();
        let mut seen = BTreeSet::new();
        AnswerSet(
            items
                .into_iter()
                .filter(|(_, a)| seen.insert(canonical(a)))
                .map(|(_, a)| a)
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl fmt::Display for AnswerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnswerError {
    #[error("`{0}` is not a participant of this paragraph")]
    UnknownParticipant(String),
    #[error("step {0} is not an event of this paragraph")]
    UnknownStep(usize),
}

impl AnswerError {
    pub fn code(&self) -> &'static str {
        match self {
            AnswerError::UnknownParticipant(_) => "unknown-participant",
            AnswerError::UnknownStep(_) => "unknown-step",
        }
    }
}

pub fn answer(question: &Question, changes: &[ChangeRecord], graph: &ProcessGraph) -> Result<AnswerSet, AnswerError> {
    let participant = |np: &str| {
        let head = canonical(np);
        match graph.argument_id(&head) {
            Some(_) => Ok(head),
            None => Err(AnswerError::UnknownParticipant(np.to_string())),
        }
    };
    let who = |pred: &dyn Fn(&ChangeRecord) -> bool| {
        changes
            .iter()
            .filter(|r| pred(r))
            .map(|r| (r.event, r.participant.clone()))
            .collect::<Vec<_>>()
    };
    let direction = |r: &ChangeRecord, kind: ChangeKind, d: Direction| {
        r.kind == kind && matches!(&r.detail, ChangeDetail::Direction(v) if v == d.name())
    };

    let items = match question {
        Question::WhatChanged(kind) => who(&|r| r.kind == *kind),
        Question::TemperatureDirection(d) => who(&|r| direction(r, ChangeKind::Temperature, *d)),
        Question::SizeDirection(d) => who(&|r| direction(r, ChangeKind::Size, *d)),
        Question::PhaseTransition { from, to } => who(&|r| {
            r.kind == ChangeKind::Phase
                && matches!(&r.detail, ChangeDetail::Phase { from: f, to: t } if f == from && t == to)
        }),
        Question::WhereChange {
            participant: x,
            produced,
        } => {
            let x = participant(x)?;
            let kind = if *produced {
                ChangeKind::Produced
            } else {
                ChangeKind::Consumed
            };
            changes
                .iter()
                .filter(|r| r.kind == kind && r.participant == x)
                .flat_map(|r| match &r.detail {
                    ChangeDetail::Locations(ls) => ls.iter().map(|l| (r.event, l.clone())).collect(),
                    _ => Vec::new(),
                })
                .collect()
        }
        Question::MoveEndpoint {
            participant: x,
            endpoint,
        } => {
            let x = participant(x)?;
            changes
                .iter()
                .filter(|r| r.kind == ChangeKind::Moved && r.participant == x)
                .filter_map(|r| match (&r.detail, endpoint) {
                    (ChangeDetail::Move { from, .. }, Endpoint::From) => Some((r.event, from.clone())),
                    (ChangeDetail::Move { to, .. }, Endpoint::To) => Some((r.event, to.clone())),
                    _ => None,
                })
                .collect()
        }
        Question::StepDependencies(step) => {
            if *step == 0 || *step > graph.len() {
                return Err(AnswerError::UnknownStep(*step));
            }
            graph
                .dependencies(*step)
                .into_iter()
                .filter_map(|e| graph.event(e).map(|ev| (e, ev.label())))
                .collect()
        }
    };
    Ok(AnswerSet::from_events(items))
}
