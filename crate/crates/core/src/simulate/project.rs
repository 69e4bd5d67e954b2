//! Frame-axiom projection: a fluent holding at `t` also holds at `t+1`
//! (forward) or `t-1` (backward) unless a conflicting fact is already there.

use super::state::{Insert, Provenance, StateDatabase, Sweep};
use crate::lexicon::GroundLiteral;

/// One ascending pass over `1..2n-1`; facts carried to `t+1` keep moving
/// in the same pass. Returns the additions in order.
pub(crate) fn forward_sweep(db: &mut StateDatabase) -> Vec<(u32, GroundLiteral)> {
    let mut added = Vec::new();
    for t in 1..db.max_time() {
        carry(db, t, t + 1, Sweep::Forward, &mut added);
    }
    added
}

/// One descending pass over `2n..2`.
pub(crate) fn backward_sweep(db: &mut StateDatabase) -> Vec<(u32, GroundLiteral)> {
    let mut added = Vec::new();
    for t in (2..=db.max_time()).rev() {
        carry(db, t, t - 1, Sweep::Backward, &mut added);
    }
    added
}

fn carry(db: &mut StateDatabase, from: u32, to: u32, sweep: Sweep, added: &mut Vec<(u32, GroundLiteral)>) {
    let fluents: Vec<GroundLiteral> = db
        .at(from)
        .filter(|(l, _)| l.predicate.is_fluent())
        .map(|(l, _)| l.clone())
        .collect();
    for lit in fluents {
        if db.insert(lit.clone(), to, Provenance::Projected(sweep)) == Insert::Added {
            added.push((to, lit));
        }
    }
}

/// Alternates forward and backward sweeps until neither adds anything.
pub fn project(db: &StateDatabase) -> StateDatabase {
    let mut out = db.clone();
    loop {
        let f = forward_sweep(&mut out);
        let b = backward_sweep(&mut out);
        if f.is_empty() && b.is_empty() {
            return out;
        }
    }
}
