use std::collections::{BTreeMap, BTreeSet};

use super::EventTuple;
use crate::lexicon::{instantiate, select_rule, GroundLiteral, Lexicon, PrepClasses, RoleBinding, VerbRule};
use crate::text::canonical;

/// Abstract verbs dropped before graph construction.
pub const DEFAULT_STOPLIST: &[&str] = &["be", "is", "are", "have", "seem", "mean", "call"];

/// The lexicon rule chosen for an event, with overrides already applied to
/// its binding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSelection {
    pub position: usize,
    pub rule: VerbRule,
    pub binding: RoleBinding,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventNode {
    /// 1-based position after stoplist filtering.
    pub index: usize,
    /// `E<i>` label from the input file.
    pub source_index: usize,
    pub verb: String,
    pub tuple: EventTuple,
    pub selection: Option<RuleSelection>,
    pub before: Vec<GroundLiteral>,
    pub after: Vec<GroundLiteral>,
}

impl EventNode {
    pub fn before_time(&self) -> u32 {
        2 * self.index as u32 - 1
    }

    pub fn after_time(&self) -> u32 {
        2 * self.index as u32
    }

    /// `E<i>:<verb>`
    pub fn label(&self) -> String {
        format!("E{}:{}", self.index, self.verb)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgumentNode {
    pub headword: String,
    pub surface_forms: BTreeSet<String>,
}

/// Event-argument edge. `role` is a semantic role from the selected rule or
/// an override, or a syntactic label (`subj`, `obj`, `prep:<word>`) for
/// arguments no rule slot claimed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleEdge {
    pub event: usize,
    pub role: String,
    pub argument: usize,
    /// Tuple slot the argument came from; `None` for override-only roles.
    pub slot: Option<TupleSlot>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TupleSlot {
    Subject,
    Object,
    /// Index into `EventTuple::preps`.
    Prep(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventRelation {
    NextEvent,
    DependsOn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventEdge {
    pub from: usize,
    pub relation: EventRelation,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProcessGraph {
    pub events: Vec<EventNode>,
    /// In order of first mention.
    pub arguments: Vec<ArgumentNode>,
    pub role_edges: Vec<RoleEdge>,
    pub event_edges: BTreeSet<EventEdge>,
    pub prep_classes: PrepClasses,
}

impl ProcessGraph {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Event by its 1-based index.
    pub fn event(&self, index: usize) -> Option<&EventNode> {
        index.checked_sub(1).and_then(|i| self.events.get(i))
    }

    pub fn argument_id(&self, headword: &str) -> Option<usize> {
        self.arguments.iter().position(|a| a.headword == headword)
    }

    /// Argument node for a noun phrase, matched by headword.
    pub fn participant(&self, np: &str) -> Option<&ArgumentNode> {
        let head = canonical(np);
        self.arguments.iter().find(|a| a.headword == head)
    }

    pub fn edges_of(&self, event: usize) -> impl Iterator<Item = &RoleEdge> {
        self.role_edges.iter().filter(move |e| e.event == event)
    }

    /// Indices of events with any role edge to the argument.
    pub fn incident_events(&self, argument: usize) -> BTreeSet<usize> {
        self.role_edges
            .iter()
            .filter(|e| e.argument == argument)
            .map(|e| e.event)
            .collect()
    }

    /// Events that `event` depends on, ascending.
    pub fn dependencies(&self, event: usize) -> Vec<usize> {
        self.event_edges
            .iter()
            .filter(|e| e.relation == EventRelation::DependsOn && e.from == event)
            .map(|e| e.to)
            .collect()
    }

    pub fn add_dependency(&mut self, dependent: usize, prerequisite: usize) -> bool {
        self.event_edges.insert(EventEdge {
            from: dependent,
            relation: EventRelation::DependsOn,
            to: prerequisite,
        })
    }

    fn intern(&mut self, np: &str) -> usize {
        let head = canonical(np);
        let id = match self.argument_id(&head) {
            Some(id) => id,
            None => {
                self.arguments.push(ArgumentNode {
                    headword: head,
                    surface_forms: BTreeSet::new(),
                });
                self.arguments.len() - 1
            }
        };
        self.arguments[id].surface_forms.insert(np.trim().to_string());
        id
    }
}

/// Builds the process graph: drops stoplisted verbs, selects one lexicon
/// rule per event, merges arguments by headword and chains events in text
/// order. Dependency edges are left to the simulator.
pub fn build_graph(tuples: &[EventTuple], lexicon: &Lexicon, stoplist: &BTreeSet<String>) -> ProcessGraph {
    let mut graph = ProcessGraph {
        prep_classes: lexicon.prep_classes().clone(),
        ..Default::default()
    };

    for tuple in tuples.iter().filter(|t| !stoplist.contains(&t.verb)) {
        let index = graph.events.len() + 1;
        let mut node = EventNode {
            index,
            source_index: tuple.index,
            verb: tuple.verb.clone(),
            tuple: tuple.clone(),
            selection: None,
            before: Vec::new(),
            after: Vec::new(),
        };

        // (label, phrase) for every tuple slot, in textual order.
        let mut slots: Vec<(String, String)> = Vec::new();
        let mut origin: Vec<Option<TupleSlot>> = Vec::new();
        let mut claimed = Vec::new();
        let mut extra: Vec<(String, String)> = Vec::new();

        if let Some(m) = select_rule(lexicon, tuple) {
            let pattern = &m.rule.pattern;
            let mut binding = m.binding.clone();
            for (role, np) in &tuple.role_overrides {
                if pattern.has_role(role) {
                    binding.0.insert(role.clone(), np.clone());
                } else {
                    extra.push((role.clone(), np.clone()));
                }
            }
            let prep_roles: BTreeMap<usize, &str> = m
                .slots
                .preps
                .iter()
                .enumerate()
                .map(|(slot, &j)| (j, pattern.preps[slot].1.as_str()))
                .collect();
            if let Some(s) = &tuple.subject {
                slots.push(("subj".into(), s.clone()));
                origin.push(Some(TupleSlot::Subject));
                claimed.push(Some(pattern.subject.clone()));
            }
            if let Some(o) = &tuple.object {
                slots.push(("obj".into(), o.clone()));
                origin.push(Some(TupleSlot::Object));
                claimed.push(pattern.object.clone().filter(|_| m.slots.object));
            }
            for (j, (prep, np)) in tuple.preps.iter().enumerate() {
                slots.push((format!("prep:{prep}"), np.clone()));
                origin.push(Some(TupleSlot::Prep(j)));
                claimed.push(prep_roles.get(&j).map(|r| r.to_string()));
            }
            for (slot, role) in slots.iter_mut().zip(&claimed) {
                if let Some(role) = role {
                    *slot = (role.clone(), binding.get(role).unwrap_or(&slot.1).to_string());
                }
            }
            let (before, after) = instantiate(m.rule, &binding).expect("a selected rule binds every role it uses");
            node.before = before;
            node.after = after;
            node.selection = Some(RuleSelection {
                position: m.position,
                rule: m.rule.clone(),
                binding,
            });
        } else {
            if let Some(s) = &tuple.subject {
                slots.push(("subj".into(), s.clone()));
                origin.push(Some(TupleSlot::Subject));
            }
            if let Some(o) = &tuple.object {
                slots.push(("obj".into(), o.clone()));
                origin.push(Some(TupleSlot::Object));
            }
            for (j, (prep, np)) in tuple.preps.iter().enumerate() {
                slots.push((format!("prep:{prep}"), np.clone()));
                origin.push(Some(TupleSlot::Prep(j)));
            }
            claimed = vec![None; slots.len()];
            extra = tuple.role_overrides.clone();
        }

        // An override naming a role outside the pattern relabels the
        // unclaimed slot holding the same participant, if any.
        let mut trailing = Vec::new();
        for (role, np) in extra {
            let head = canonical(&np);
            let target = slots
                .iter()
                .zip(&claimed)
                .position(|((_, phrase), c)| c.is_none() && canonical(phrase) == head);
            match target {
                Some(i) => {
                    slots[i] = (role.clone(), np);
                    claimed[i] = Some(role);
                }
                None => trailing.push((role, np)),
            }
        }
        origin.extend(trailing.iter().map(|_| None));
        slots.extend(trailing);

        for ((role, np), slot) in slots.into_iter().zip(origin) {
            let argument = graph.intern(&np);
            graph.role_edges.push(RoleEdge {
                event: index,
                role,
                argument,
                slot,
            });
        }
        graph.events.push(node);
    }

    for i in 1..graph.events.len() {
        graph.event_edges.insert(EventEdge {
            from: i,
            relation: EventRelation::NextEvent,
            to: i + 1,
        });
    }
    graph
}
