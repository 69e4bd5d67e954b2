use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::rules::flipped;
use super::state::{MarkKind, StateDatabase};
use crate::lexicon::{GroundLiteral, Predicate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChangeKind {
    Produced,
    Consumed,
    Moved,
    Temperature,
    Size,
    Phase,
}

impl ChangeKind {
    pub fn name(self) -> &'static str {
        match self {
            ChangeKind::Produced => "produced",
            ChangeKind::Consumed => "consumed",
            ChangeKind::Moved => "moved",
            ChangeKind::Temperature => "temperature",
            ChangeKind::Size => "size",
            ChangeKind::Phase => "phase",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChangeDetail {
    /// Where a produced (consumed) participant is just after (before) the event.
    Locations(BTreeSet<String>),
    Move {
        from: String,
        to: String,
    },
    Direction(String),
    Phase {
        from: String,
        to: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ChangeRecord {
    pub event: usize,
    pub participant: String,
    pub kind: ChangeKind,
    pub detail: ChangeDetail,
}

impl fmt::Display for ChangeRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{} {} {}", self.event, self.kind.name(), self.participant)?;
        match &self.detail {
            ChangeDetail::Locations(ls) => {
                let ls: Vec<&str> = ls.iter().map(String::as_str).collect();
                write!(f, " at {{{}}}", ls.join(", "))
            }
            ChangeDetail::Move { from, to } | ChangeDetail::Phase { from, to } => write!(f, " {from} -> {to}"),
            ChangeDetail::Direction(d) => write!(f, " {d}"),
        }
    }
}

/// Per-event change records, ordered by event, participant, kind.
pub fn derive_changes(db: &StateDatabase) -> Vec<ChangeRecord> {
    let mut out = Vec::new();
    for e in 1..=db.n_events() {
        let a = 2 * e as u32;
        let b = a - 1;
        for x in flipped(db, e, MarkKind::Created) {
            let detail = ChangeDetail::Locations(db.locations(&x, a));
            out.push(record(e, x, ChangeKind::Produced, detail));
        }
        for x in flipped(db, e, MarkKind::Destroyed) {
            let detail = ChangeDetail::Locations(db.locations(&x, b));
            out.push(record(e, x, ChangeKind::Consumed, detail));
        }
        let subjects: BTreeSet<&str> = db.at(b).map(|(l, _)| l.subject()).collect();
        for x in subjects {
            for from in db.locations(x, b) {
                for to in db.locations(x, a).into_iter().filter(|to| *to != from) {
                    let detail = ChangeDetail::Move { from: from.clone(), to };
                    out.push(record(e, x.to_string(), ChangeKind::Moved, detail));
                }
            }
            for s1 in values(db, Predicate::Phase, x, b) {
                for s2 in values(db, Predicate::Phase, x, a).into_iter().filter(|s2| *s2 != s1) {
                    let detail = ChangeDetail::Phase {
                        from: s1.clone(),
                        to: s2,
                    };
                    out.push(record(e, x.to_string(), ChangeKind::Phase, detail));
                }
            }
        }
        for (lit, _) in db.at(a) {
            let kind = match lit.predicate {
                Predicate::Temperature => ChangeKind::Temperature,
                Predicate::Size => ChangeKind::Size,
                _ => continue,
            };
            if lit.negated {
                continue;
            }
            let detail = ChangeDetail::Direction(lit.value().unwrap_or_default().to_string());
            out.push(record(e, lit.subject().to_string(), kind, detail));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn record(event: usize, participant: String, kind: ChangeKind, detail: ChangeDetail) -> ChangeRecord {
    ChangeRecord {
        event,
        participant,
        kind,
        detail,
    }
}

fn values(db: &StateDatabase, predicate: Predicate, thing: &str, time: u32) -> BTreeSet<String> {
    db.at(time)
        .filter(|(l, _)| l.is_positive(predicate) && l.subject() == thing)
        .filter_map(|(l, _): (&GroundLiteral, _)| l.value().map(str::to_string))
        .collect()
}
