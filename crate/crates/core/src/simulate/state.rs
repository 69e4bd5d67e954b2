use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::CommonsenseRule;
use crate::lexicon::GroundLiteral;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sweep {
    Forward,
    Backward,
}

impl Sweep {
    pub fn name(self) -> &'static str {
        match self {
            Sweep::Forward => "forward",
            Sweep::Backward => "backward",
        }
    }
}

/// How a fact entered the database.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Direct,
    Commonsense(CommonsenseRule),
    Projected(Sweep),
}

impl Provenance {
    /// One-character tag used by the grid table.
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::Direct => "",
            Provenance::Commonsense(_) => "*",
            Provenance::Projected(_) => "'",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Direct => f.write_str("direct"),
            Provenance::Commonsense(rule) => write!(f, "commonsense({})", rule.name()),
            Provenance::Projected(sweep) => write!(f, "projected({})", sweep.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateFact {
    pub time: u32,
    pub literal: GroundLiteral,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MarkKind {
    Created,
    Destroyed,
}

/// Records that Creation or Destruction fired, whether or not its facts
/// could be added.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChangeMark {
    pub event: usize,
    pub kind: MarkKind,
    pub participant: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Insert {
    Added,
    Present,
    /// A fact at that time conflicts with the candidate.
    Blocked(GroundLiteral),
    OutOfRange,
}

/// True iff the two literals cannot hold at the same time point.
pub fn conflicts(a: &GroundLiteral, b: &GroundLiteral) -> bool {
    if a.predicate != b.predicate {
        return false;
    }
    if a.args == b.args {
        return a.negated != b.negated;
    }
    !a.negated && !b.negated && a.predicate.is_functional() && a.args[0] == b.args[0] && a.args[1] != b.args[1]
}

/// Conflict-free `holds-at` facts keyed by time point.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StateDatabase {
    n_events: usize,
    facts: BTreeMap<u32, BTreeMap<GroundLiteral, Provenance>>,
    marks: BTreeSet<ChangeMark>,
}

impl StateDatabase {
    pub fn new(n_events: usize) -> Self {
        StateDatabase {
            n_events,
            ..Default::default()
        }
    }

    pub fn n_events(&self) -> usize {
        self.n_events
    }

    /// Largest valid time point, `2n`.
    pub fn max_time(&self) -> u32 {
        2 * self.n_events as u32
    }

    pub fn len(&self) -> usize {
        self.facts.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.values().all(BTreeMap::is_empty)
    }

    pub fn holds(&self, literal: &GroundLiteral, time: u32) -> bool {
        self.facts.get(&time).is_some_and(|m| m.contains_key(literal))
    }

    pub fn provenance(&self, literal: &GroundLiteral, time: u32) -> Option<Provenance> {
        self.facts.get(&time).and_then(|m| m.get(literal)).copied()
    }

    /// Facts at one time point, literal-ordered.
    pub fn at(&self, time: u32) -> impl Iterator<Item = (&GroundLiteral, Provenance)> {
        self.facts
            .get(&time)
            .into_iter()
            .flat_map(|m| m.iter().map(|(l, p)| (l, *p)))
    }

    /// All facts, time-major then literal order.
    pub fn iter(&self) -> impl Iterator<Item = StateFact> + '_ {
        self.facts.iter().flat_map(|(&time, m)| {
            m.iter().map(move |(l, &p)| StateFact {
                time,
                literal: l.clone(),
                provenance: p,
            })
        })
    }

    /// The first fact at `time` that conflicts with `literal`.
    pub fn clash(&self, literal: &GroundLiteral, time: u32) -> Option<&GroundLiteral> {
        self.at(time).map(|(l, _)| l).find(|l| conflicts(l, literal))
    }

    pub fn insert(&mut self, literal: GroundLiteral, time: u32, provenance: Provenance) -> Insert {
        if time == 0 || time > self.max_time() {
            return Insert::OutOfRange;
        }
        if self.holds(&literal, time) {
            return Insert::Present;
        }
        if let Some(other) = self.clash(&literal, time) {
            return Insert::Blocked(other.clone());
        }
        self.facts.entry(time).or_default().insert(literal, provenance);
        Insert::Added
    }

    /// Positive `is-at` locations of `thing` at `time`.
    pub fn locations(&self, thing: &str, time: u32) -> BTreeSet<String> {
        self.at(time)
            .filter(|(l, _)| l.is_positive(crate::lexicon::Predicate::IsAt) && l.subject() == thing)
            .filter_map(|(l, _)| l.value().map(str::to_string))
            .collect()
    }

    pub fn marks(&self) -> &BTreeSet<ChangeMark> {
        &self.marks
    }

    pub fn has_mark(&self, kind: MarkKind, participant: &str, event: usize) -> bool {
        self.marks.contains(&ChangeMark {
            event,
            kind,
            participant: participant.to_string(),
        })
    }

    pub(crate) fn add_mark(&mut self, mark: ChangeMark) -> bool {
        self.marks.insert(mark)
    }
}
