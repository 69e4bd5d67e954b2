//! Timed world-state simulation: direct lexicon facts, commonsense rules
//! and frame-axiom projection over a conflict-free state database.

mod changes;
mod grid;
mod project;
mod roles;
mod rules;
mod state;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ingest::ProcessGraph;
use crate::lexicon::GroundLiteral;

pub use changes::{derive_changes, ChangeDetail, ChangeKind, ChangeRecord};
pub use grid::{render_grid, GridRow, ParticipantGrid};
pub use project::project;
pub use roles::{resolve_roles, role_family, EventRoles};
pub use state::{conflicts, ChangeMark, Insert, MarkKind, Provenance, StateDatabase, StateFact, Sweep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CommonsenseRule {
    Location,
    Existence,
    Colocation,
    Creation,
    Destruction,
    Dependency,
    DefaultDependency,
}

impl CommonsenseRule {
    pub const ALL: [CommonsenseRule; 7] = [
        CommonsenseRule::Location,
        CommonsenseRule::Existence,
        CommonsenseRule::Colocation,
        CommonsenseRule::Creation,
        CommonsenseRule::Destruction,
        CommonsenseRule::Dependency,
        CommonsenseRule::DefaultDependency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CommonsenseRule::Location => "location",
            CommonsenseRule::Existence => "existence",
            CommonsenseRule::Colocation => "colocation",
            CommonsenseRule::Creation => "creation",
            CommonsenseRule::Destruction => "destruction",
            CommonsenseRule::Dependency => "dependency",
            CommonsenseRule::DefaultDependency => "default-dependency",
        }
    }
}

impl fmt::Display for CommonsenseRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown commonsense rule `{0}`")]
pub struct UnknownRule(pub String);

impl FromStr for CommonsenseRule {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CommonsenseRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SimulateOptions {
    /// Keep only facts asserted directly by the lexicon.
    pub basic_inference_only: bool,
    pub disabled_rules: BTreeSet<CommonsenseRule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulationError {
    #[error("{event} asserts `{incoming}` at t={time}, which contradicts `{existing}`")]
    DirectConflict {
        event: String,
        time: u32,
        existing: GroundLiteral,
        incoming: GroundLiteral,
    },
}

impl SimulationError {
    pub fn code(&self) -> &'static str {
        "direct-conflict"
    }
}

/// One step of a simulation, in the order it happened.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEntry {
    Pass(String),
    Fact(StateFact),
    Blocked {
        time: u32,
        literal: GroundLiteral,
        rule: CommonsenseRule,
        by: GroundLiteral,
    },
    Mark(ChangeMark),
    Dependency {
        rule: CommonsenseRule,
        dependent: String,
        prerequisite: String,
    },
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEntry::Pass(name) => write!(f, "== {name}"),
            TraceEntry::Fact(fact) => write!(f, "t={} {} [{}]", fact.time, fact.literal, fact.provenance),
            TraceEntry::Blocked {
                time,
                literal,
                rule,
                by,
            } => write!(f, "t={time} {literal} [commonsense({rule})] blocked by {by}"),
            TraceEntry::Mark(mark) => {
                let kind = match mark.kind {
                    MarkKind::Created => "created",
                    MarkKind::Destroyed => "destroyed",
                };
                write!(f, "{kind}({}) at E{}", mark.participant, mark.event)
            }
            TraceEntry::Dependency {
                rule,
                dependent,
                prerequisite,
            } => write!(f, "{dependent} depends-on {prerequisite} [commonsense({rule})]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulation {
    pub db: StateDatabase,
    /// The input graph plus depends-on edges.
    pub graph: ProcessGraph,
    pub changes: Vec<ChangeRecord>,
    pub trace: Vec<TraceEntry>,
}

/// Records every matched event's before literals at `2i-1` and after
/// literals at `2i`.
pub fn assert_direct(graph: &ProcessGraph) -> Result<StateDatabase, SimulationError> {
    let mut trace = Vec::new();
    direct(graph, &mut trace)
}

fn direct(graph: &ProcessGraph, trace: &mut Vec<TraceEntry>) -> Result<StateDatabase, SimulationError> {
    let mut db = StateDatabase::new(graph.len());
    for event in &graph.events {
        let timed = event
            .before
            .iter()
            .map(|l| (event.before_time(), l))
            .chain(event.after.iter().map(|l| (event.after_time(), l)));
        for (time, literal) in timed {
            match db.insert(literal.clone(), time, Provenance::Direct) {
                Insert::Added => trace.push(TraceEntry::Fact(StateFact {
                    time,
                    literal: literal.clone(),
                    provenance: Provenance::Direct,
                })),
                Insert::Present | Insert::OutOfRange => {}
                Insert::Blocked(existing) => {
                    return Err(SimulationError::DirectConflict {
                        event: event.label(),
                        time,
                        existing,
                        incoming: literal.clone(),
                    })
                }
            }
        }
    }
    Ok(db)
}

/// A single round of every commonsense rule over `db`: Location and
/// Existence, Creation and Destruction, one Colocation pass, then the
/// dependency rules. No projection.
pub fn apply_commonsense(db: &StateDatabase, graph: &ProcessGraph) -> (StateDatabase, ProcessGraph) {
    let disabled = BTreeSet::new();
    let mut engine = rules::Engine::new(graph, db.clone(), &disabled);
    engine.location_and_existence();
    engine.creation_and_destruction();
    engine.colocation();
    let mut out = graph.clone();
    let (db, mut trace) = engine.finish();
    rules::add_dependencies(&mut out, &disabled, &mut trace);
    (db, out)
}

/// Runs the full pass order:
///
/// 1. direct assertions
/// 2. Location, Existence
/// 3. Creation, Destruction
/// 4. forward projection sweep
/// 5. backward projection sweep
/// 6. Colocation, then back to 4 until nothing changes
/// 7. Dependency, Default Dependency
pub fn simulate(graph: &ProcessGraph, options: &SimulateOptions) -> Result<Simulation, SimulationError> {
    let mut trace = vec![TraceEntry::Pass("direct".into())];
    let db = direct(graph, &mut trace)?;
    if options.basic_inference_only {
        let changes = derive_changes(&db);
        return Ok(Simulation {
            db,
            graph: graph.clone(),
            changes,
            trace,
        });
    }

    let mut engine = rules::Engine::new(graph, db, &options.disabled_rules);
    engine.trace.append(&mut trace);
    engine.pass("location + existence");
    engine.location_and_existence();
    engine.pass("creation + destruction");
    engine.creation_and_destruction();
    let mut round = 1;
    loop {
        engine.pass(&format!("projection + colocation, round {round}"));
        let projected = engine.project_once();
        let colocated = engine.colocation();
        if !projected && !colocated {
            break;
        }
        round += 1;
    }
    let (db, mut trace) = engine.finish();

    let mut out = graph.clone();
    trace.push(TraceEntry::Pass("dependency + default-dependency".into()));
    rules::add_dependencies(&mut out, &options.disabled_rules, &mut trace);
    let changes = derive_changes(&db);
    Ok(Simulation {
        db,
        graph: out,
        changes,
        trace,
    })
}
