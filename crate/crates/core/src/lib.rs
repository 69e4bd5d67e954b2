//! Process-paragraph comprehension: a STRIPS-style verb lexicon turns
//! annotated clauses into a timed world state, commonsense rules and frame
//! axioms fill the gaps, and templated questions are answered and scored
//! against it.

pub mod cli;
pub mod eval;
pub mod ingest;
pub mod lexicon;
pub mod qa;
pub mod simulate;
pub mod text;

pub use ingest::{build_graph, parse_paragraph_file, EventTuple, ProcessGraph};
pub use lexicon::{parse_lexicon, GroundLiteral, Lexicon, VerbRule};
pub use simulate::{simulate, SimulateOptions, Simulation, StateDatabase};
