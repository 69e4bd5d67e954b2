use std::collections::BTreeSet;

use super::project::{backward_sweep, forward_sweep};
use super::roles::{resolve_roles, EventRoles};
use super::state::{ChangeMark, Insert, MarkKind, Provenance, StateDatabase, StateFact, Sweep};
use super::{CommonsenseRule, TraceEntry};
use crate::ingest::ProcessGraph;
use crate::lexicon::{GroundLiteral, Predicate};

pub(crate) struct Engine<'a> {
    graph: &'a ProcessGraph,
    roles: Vec<EventRoles>,
    disabled: &'a BTreeSet<CommonsenseRule>,
    db: StateDatabase,
    pub trace: Vec<TraceEntry>,
    reported: BTreeSet<(u32, GroundLiteral)>,
}

impl<'a> Engine<'a> {
    pub fn new(graph: &'a ProcessGraph, db: StateDatabase, disabled: &'a BTreeSet<CommonsenseRule>) -> Self {
        let roles = (1..=graph.len()).map(|e| resolve_roles(graph, e)).collect();
        Engine {
            graph,
            roles,
            disabled,
            db,
            trace: Vec::new(),
            reported: BTreeSet::new(),
        }
    }

    pub fn finish(self) -> (StateDatabase, Vec<TraceEntry>) {
        (self.db, self.trace)
    }

    pub fn pass(&mut self, name: &str) {
        self.trace.push(TraceEntry::Pass(name.to_string()));
    }

    fn enabled(&self, rule: CommonsenseRule) -> bool {
        !self.disabled.contains(&rule)
    }

    fn roles(&self, event: usize) -> &EventRoles {
        &self.roles[event - 1]
    }

    fn offer(&mut self, rule: CommonsenseRule, literal: GroundLiteral, time: u32) -> bool {
        let provenance = Provenance::Commonsense(rule);
        match self.db.insert(literal.clone(), time, provenance) {
            Insert::Added => {
                self.trace.push(TraceEntry::Fact(StateFact {
                    time,
                    literal,
                    provenance,
                }));
                true
            }
            Insert::Blocked(by) => {
                if self.reported.insert((time, literal.clone())) {
                    self.trace.push(TraceEntry::Blocked {
                        time,
                        literal,
                        rule,
                        by,
                    });
                }
                false
            }
            Insert::Present | Insert::OutOfRange => false,
        }
    }

    /// Location for every event's patients, then Existence for every
    /// event's agents and patients.
    pub fn location_and_existence(&mut self) -> bool {
        let mut changed = false;
        let n = self.graph.len();
        if self.enabled(CommonsenseRule::Location) {
            for e in 1..=n {
                let (b, a) = times(e);
                let roles = self.roles(e).clone();
                for x in &roles.patients {
                    if let Some(l) = roles.initial_location.as_ref().filter(|l| *l != x) {
                        changed |= self.offer(CommonsenseRule::Location, GroundLiteral::is_at(x, l), b);
                    }
                    if let Some(l) = roles.final_location.as_ref().filter(|l| *l != x) {
                        changed |= self.offer(CommonsenseRule::Location, GroundLiteral::is_at(x, l), a);
                    }
                }
            }
        }
        if self.enabled(CommonsenseRule::Existence) {
            for e in 1..=n {
                let (b, a) = times(e);
                let roles = self.roles(e);
                let who: BTreeSet<String> = roles.agents.union(&roles.patients).cloned().collect();
                for x in who {
                    changed |= self.offer(CommonsenseRule::Existence, GroundLiteral::exists(&x), b);
                    changed |= self.offer(CommonsenseRule::Existence, GroundLiteral::exists(&x), a);
                }
            }
        }
        changed
    }

    /// Creation over all participants, then Destruction.
    pub fn creation_and_destruction(&mut self) -> bool {
        let mut changed = false;
        let incidence: Vec<(String, BTreeSet<usize>)> = (0..self.graph.arguments.len())
            .map(|id| {
                (
                    self.graph.arguments[id].headword.clone(),
                    self.graph.incident_events(id),
                )
            })
            .collect();
        if self.enabled(CommonsenseRule::Creation) {
            for (x, events) in &incidence {
                let Some(&e) = events.first().filter(|_| events.len() == 1) else {
                    continue;
                };
                if !self.roles(e).patients.contains(x) {
                    continue;
                }
                changed |= self.mark(MarkKind::Created, x, e);
                let (b, a) = times(e);
                changed |= self.offer(CommonsenseRule::Creation, GroundLiteral::exists(x).negate(), b);
                changed |= self.offer(CommonsenseRule::Creation, GroundLiteral::exists(x), a);
            }
        }
        if self.enabled(CommonsenseRule::Destruction) {
            for (x, events) in &incidence {
                if events.len() < 2 || !events.iter().any(|&e| self.roles(e).patients.contains(x)) {
                    continue;
                }
                let e = *events.last().expect("at least two events");
                changed |= self.mark(MarkKind::Destroyed, x, e);
                let (b, a) = times(e);
                changed |= self.offer(CommonsenseRule::Destruction, GroundLiteral::exists(x), b);
                changed |= self.offer(CommonsenseRule::Destruction, GroundLiteral::exists(x).negate(), a);
            }
        }
        changed
    }

    fn mark(&mut self, kind: MarkKind, participant: &str, event: usize) -> bool {
        let mark = ChangeMark {
            event,
            kind,
            participant: participant.to_string(),
        };
        if self.db.add_mark(mark.clone()) {
            self.trace.push(TraceEntry::Mark(mark));
            true
        } else {
            false
        }
    }

    /// One forward sweep followed by one backward sweep.
    pub fn project_once(&mut self) -> bool {
        let forward = forward_sweep(&mut self.db);
        let backward = backward_sweep(&mut self.db);
        let changed = !forward.is_empty() || !backward.is_empty();
        for (sweep, added) in [(Sweep::Forward, forward), (Sweep::Backward, backward)] {
            for (time, literal) in added {
                self.trace.push(TraceEntry::Fact(StateFact {
                    time,
                    literal,
                    provenance: Provenance::Projected(sweep),
                }));
            }
        }
        changed
    }

    /// For each event where X is consumed and Y produced: X's location
    /// before the event becomes Y's location after it, and Y's location
    /// after becomes X's location before. Candidates come from a snapshot
    /// taken at the start of the pass.
    pub fn colocation(&mut self) -> bool {
        if !self.enabled(CommonsenseRule::Colocation) {
            return false;
        }
        let snapshot = self.db.clone();
        let mut candidates = Vec::new();
        for e in 1..=self.graph.len() {
            let (b, a) = times(e);
            let consumed = flipped(&snapshot, e, MarkKind::Destroyed);
            let produced = flipped(&snapshot, e, MarkKind::Created);
            for x in &consumed {
                for y in produced.iter().filter(|y| *y != x) {
                    for l in snapshot.locations(x, b).into_iter().filter(|l| l != y) {
                        candidates.push((GroundLiteral::is_at(y, l), a));
                    }
                }
            }
            for y in &produced {
                for x in consumed.iter().filter(|x| *x != y) {
                    for l in snapshot.locations(y, a).into_iter().filter(|l| l != x) {
                        candidates.push((GroundLiteral::is_at(x, l), b));
                    }
                }
            }
        }
        let mut changed = false;
        for (literal, time) in candidates {
            changed |= self.offer(CommonsenseRule::Colocation, literal, time);
        }
        changed
    }
}

fn times(event: usize) -> (u32, u32) {
    let a = 2 * event as u32;
    (a - 1, a)
}

/// Participants whose existence flips across `event` in the given
/// direction, or that carry the matching Creation/Destruction mark.
pub(crate) fn flipped(db: &StateDatabase, event: usize, kind: MarkKind) -> BTreeSet<String> {
    let (b, a) = times(event);
    let (from, to) = match kind {
        MarkKind::Created => (b, a),
        MarkKind::Destroyed => (a, b),
    };
    let mut out: BTreeSet<String> = db
        .at(to)
        .filter(|(l, _)| l.is_positive(Predicate::Exists))
        .filter(|(l, _)| db.holds(&GroundLiteral::exists(l.subject()).negate(), from))
        .map(|(l, _)| l.subject().to_string())
        .collect();
    out.extend(
        db.marks()
            .iter()
            .filter(|m| m.kind == kind && m.event == event)
            .map(|m| m.participant.clone()),
    );
    out
}

/// Dependency, then Default Dependency, as depends-on edges.
pub(crate) fn add_dependencies(
    graph: &mut ProcessGraph,
    disabled: &BTreeSet<CommonsenseRule>,
    trace: &mut Vec<TraceEntry>,
) {
    let n = graph.len();
    let roles: Vec<EventRoles> = (1..=n).map(|e| resolve_roles(graph, e)).collect();
    let label = |graph: &ProcessGraph, e: usize| graph.event(e).map(|ev| ev.label()).unwrap_or_default();
    let mut record = |graph: &mut ProcessGraph, rule, dependent: usize, prerequisite: usize| {
        if graph.add_dependency(dependent, prerequisite) {
            trace.push(TraceEntry::Dependency {
                rule,
                dependent: label(graph, dependent),
                prerequisite: label(graph, prerequisite),
            });
        }
    };

    if !disabled.contains(&CommonsenseRule::Dependency) {
        for id in 0..graph.arguments.len() {
            let x = graph.arguments[id].headword.clone();
            let Some(&first) = graph.incident_events(id).first() else {
                continue;
            };
            let next = (first + 1..=n).find(|&j| roles[j - 1].involves(&x));
            if let Some(j) = next {
                record(graph, CommonsenseRule::Dependency, j, first);
            }
        }
    }
    if !disabled.contains(&CommonsenseRule::DefaultDependency) {
        for i in 2..=n {
            if graph.dependencies(i).is_empty() {
                record(graph, CommonsenseRule::DefaultDependency, i, i - 1);
            }
        }
    }
}
