//! Resolution of the abstract roles the commonsense rules talk about
//! (agent, patient, initial and final location) from an event's edges.

use std::collections::BTreeSet;

use crate::ingest::{ProcessGraph, TupleSlot};

const PATIENT_ROLES: &[&str] = &["Patient", "Theme", "Product", "Material"];
const AGENT_ROLES: &[&str] = &["Agent", "Actor", "Cause"];
const INITIAL_ROLES: &[&str] = &["Initial_Location", "Source"];
const FINAL_ROLES: &[&str] = &["Destination", "Final_Location", "Goal"];

/// `Material2` and `Co_Patient` belong to the `Material` and `Patient`
/// families.
pub fn role_family(role: &str) -> &str {
    let role = role.strip_prefix("Co_").unwrap_or(role);
    role.trim_end_matches(|c: char| c.is_ascii_digit())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventRoles {
    pub agents: BTreeSet<String>,
    pub patients: BTreeSet<String>,
    pub initial_location: Option<String>,
    pub final_location: Option<String>,
}

impl EventRoles {
    pub fn involves(&self, participant: &str) -> bool {
        self.agents.contains(participant) || self.patients.contains(participant)
    }
}

pub fn resolve_roles(graph: &ProcessGraph, event: usize) -> EventRoles {
    let head = |argument: usize| graph.arguments[argument].headword.clone();
    let edges: Vec<_> = graph.edges_of(event).collect();
    let in_family = |families: &[&str], role: &str| families.contains(&role_family(role));
    let by_slot = |slot: TupleSlot| edges.iter().find(|e| e.slot == Some(slot)).map(|e| head(e.argument));

    let mut patients: BTreeSet<String> = edges
        .iter()
        .filter(|e| in_family(PATIENT_ROLES, &e.role))
        .map(|e| head(e.argument))
        .collect();
    if patients.is_empty() {
        let fallback = match by_slot(TupleSlot::Object) {
            Some(obj) => Some(obj),
            None => by_slot(TupleSlot::Subject),
        };
        patients.extend(fallback);
    }

    let mut agents: BTreeSet<String> = edges
        .iter()
        .filter(|e| in_family(AGENT_ROLES, &e.role))
        .map(|e| head(e.argument))
        .collect();
    if agents.is_empty() && by_slot(TupleSlot::Object).is_some() {
        if let Some(subj) = by_slot(TupleSlot::Subject) {
            if !patients.contains(&subj) {
                agents.insert(subj);
            }
        }
    }

    let by_role = |families: &[&str]| {
        edges
            .iter()
            .find(|e| families.contains(&e.role.as_str()))
            .map(|e| head(e.argument))
    };
    let by_prep = |accept: &dyn Fn(&str) -> bool| {
        edges
            .iter()
            .find(|e| e.role.strip_prefix("prep:").is_some_and(accept))
            .map(|e| head(e.argument))
    };
    let classes = &graph.prep_classes;
    EventRoles {
        agents,
        patients,
        initial_location: by_role(INITIAL_ROLES).or_else(|| by_prep(&|p| classes.is_source(p))),
        final_location: by_role(FINAL_ROLES).or_else(|| by_prep(&|p| classes.is_destination(p))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{build_graph, EventTuple};
    use crate::lexicon::parse_lexicon;

    fn graph(tuples: Vec<EventTuple>) -> ProcessGraph {
        let lex = parse_lexicon(
            r#"
verb: enter | pattern: Theme "enter" Destination | after: is-at(Theme,Destination)
verb: combine | pattern: Material "combine" - ("with" Material2) ("into" Product) | after: exists(Product)
"#,
        )
        .unwrap();
        build_graph(&tuples, &lex, &Default::default())
    }

    #[test]
    fn families() {
        assert_eq!(role_family("Material2"), "Material");
        assert_eq!(role_family("Co_Patient"), "Patient");
        assert_eq!(role_family("Theme"), "Theme");
    }

    #[test]
    fn rule_roles() {
        let g = graph(vec![EventTuple::new(1, "enter")
            .with_subject("CO2")
            .with_object("the leaf")]);
        let r = resolve_roles(&g, 1);
        assert_eq!(r.patients, BTreeSet::from(["co2".to_string()]));
        assert!(r.agents.is_empty());
        assert_eq!(r.final_location.as_deref(), Some("leaf"));
        assert_eq!(r.initial_location, None);
    }

    #[test]
    fn multiple_materials_are_patients() {
        let g = graph(vec![EventTuple::new(1, "combine")
            .with_subject("light")
            .with_prep("with", "water")
            .with_prep("into", "a mixture")]);
        let r = resolve_roles(&g, 1);
        let want: BTreeSet<String> = ["light", "mixture", "water"].map(String::from).into();
        assert_eq!(r.patients, want);
    }

    #[test]
    fn syntactic_fallbacks() {
        let g = graph(vec![
            EventTuple::new(1, "lay")
                .with_subject("workers")
                .with_object("the foundation"),
            EventTuple::new(2, "melt")
                .with_subject("the aluminum")
                .with_prep("in", "a furnace"),
            EventTuple::new(3, "move")
                .with_subject("ice")
                .with_prep("from", "the pole"),
        ]);
        let lay = resolve_roles(&g, 1);
        assert_eq!(lay.patients, BTreeSet::from(["foundation".to_string()]));
        assert_eq!(lay.agents, BTreeSet::from(["workers".to_string()]));
        let melt = resolve_roles(&g, 2);
        assert_eq!(melt.patients, BTreeSet::from(["aluminum".to_string()]));
        assert!(melt.agents.is_empty());
        assert_eq!(melt.final_location.as_deref(), Some("furnace"));
        assert_eq!(resolve_roles(&g, 3).initial_location.as_deref(), Some("pole"));
    }
}
