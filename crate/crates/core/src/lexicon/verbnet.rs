//! Conversion of VerbNet frame-semantics assertions into lexicon rules.
//!
//! Only `exists` and `location` carry over; everything else VerbNet says
//! about a frame is dropped and reported back to the caller.

use super::{Literal, Predicate, SyntacticPattern, Term, VerbRule};

/// Event time argument of a frame assertion, e.g. the `start(E)` in
/// `location(start(E), Theme, Initial_Location)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeTag {
    Start,
    End,
    Result,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbNetFrameAssertion {
    pub predicate: String,
    pub time: TimeTag,
    pub args: Vec<Term>,
    pub negated: bool,
}

impl VerbNetFrameAssertion {
    pub fn new(predicate: &str, time: TimeTag, args: &[&str], negated: bool) -> Self {
        VerbNetFrameAssertion {
            predicate: predicate.to_string(),
            time,
            args: args.iter().map(|a| Term::Role(a.to_string())).collect(),
            negated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DroppedAssertion {
    pub predicate: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameImport {
    pub rule: VerbRule,
    pub dropped: Vec<DroppedAssertion>,
}

pub fn import_verbnet_frame(
    verb: &str,
    class_id: &str,
    pattern: SyntacticPattern,
    assertions: &[VerbNetFrameAssertion],
) -> FrameImport {
    let mut before = Vec::new();
    let mut after = Vec::new();
    let mut dropped = Vec::new();
    let mut drop = |a: &VerbNetFrameAssertion, reason: &str| {
        dropped.push(DroppedAssertion {
            predicate: a.predicate.clone(),
            reason: reason.to_string(),
        })
    };

    for a in assertions {
        let predicate = match a.predicate.as_str() {
            "exists" => Predicate::Exists,
            "location" => Predicate::IsAt,
            _ => {
                drop(a, "predicate has no lexicon counterpart");
                continue;
            }
        };
        if a.args.len() != predicate.arity() {
            drop(a, "argument count does not fit the lexicon predicate");
            continue;
        }
        let unbound = a.args.iter().any(|t| match t {
            Term::Role(r) => !pattern.has_role(r),
            Term::Const(_) => false,
        });
        if unbound {
            drop(a, "argument role is not in the syntactic pattern");
            continue;
        }
        let lit = Literal {
            predicate,
            args: a.args.clone(),
            negated: a.negated,
        };
        match a.time {
            TimeTag::Start => before.push(lit),
            TimeTag::End | TimeTag::Result => after.push(lit),
            TimeTag::None => drop(a, "assertion is not tied to the event's start or end"),
        }
    }

    FrameImport {
        rule: VerbRule {
            verb: verb.to_string(),
            class_id: class_id.to_string(),
            sense_id: String::new(),
            pattern,
            before,
            after,
        },
        dropped,
    }
}
