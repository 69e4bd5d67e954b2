use thiserror::Error;

use super::{GroundLiteral, Lexicon, Literal, PrepClasses, RoleBinding, Term, VerbRule};
use crate::ingest::EventTuple;
use crate::text::canonical;

/// Which tuple slots a successful match consumed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SlotUse {
    pub subject: bool,
    pub object: bool,
    /// Indices into `EventTuple::preps`.
    pub preps: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleMatch<'a> {
    /// Position of the rule in the lexicon file.
    pub position: usize,
    pub rule: &'a VerbRule,
    pub binding: RoleBinding,
    pub slots: SlotUse,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("role `{0}` has no binding")]
    IncompleteBinding(String),
}

impl InstantiateError {
    pub fn code(&self) -> &'static str {
        "incomplete-binding"
    }
}

/// Binds the rule's roles from the tuple, or `None` when the tuple's shape
/// does not fit. Tuple prepositions not claimed by a slot are ignored.
pub fn match_pattern(tuple: &EventTuple, rule: &VerbRule, classes: &PrepClasses) -> Option<RoleBinding> {
    match_slots(tuple, rule, classes).map(|(binding, _)| binding)
}

pub(crate) fn match_slots(
    tuple: &EventTuple,
    rule: &VerbRule,
    classes: &PrepClasses,
) -> Option<(RoleBinding, SlotUse)> {
    let pattern = &rule.pattern;
    if tuple.verb != pattern.verb {
        return None;
    }
    let mut binding = RoleBinding::default();
    let mut slots = SlotUse::default();

    binding.0.insert(pattern.subject.clone(), tuple.subject.clone()?);
    slots.subject = true;

    match (&pattern.object, &tuple.object) {
        (Some(role), Some(np)) => {
            binding.0.insert(role.clone(), np.clone());
            slots.object = true;
        }
        (None, None) => {}
        _ => return None,
    }

    let mut used = vec![false; tuple.preps.len()];
    let mut chosen = Vec::with_capacity(pattern.preps.len());
    if !assign_preps(tuple, rule, classes, 0, &mut used, &mut chosen) {
        return None;
    }
    for (slot, &prep_idx) in chosen.iter().enumerate() {
        binding
            .0
            .insert(pattern.preps[slot].1.clone(), tuple.preps[prep_idx].1.clone());
    }
    slots.preps = chosen;

    for (role, domain) in rule.constrained_roles() {
        let value = canonical(binding.get(role)?);
        if !domain.contains(&value.as_str()) {
            return None;
        }
    }
    Some((binding, slots))
}

/// Leftmost-first assignment of tuple preps to slots, with backtracking so a
/// class slot never steals the only prep a later literal slot could take.
fn assign_preps(
    tuple: &EventTuple,
    rule: &VerbRule,
    classes: &PrepClasses,
    slot: usize,
    used: &mut [bool],
    chosen: &mut Vec<usize>,
) -> bool {
    let Some((spec, _)) = rule.pattern.preps.get(slot) else {
        return true;
    };
    for (j, (prep, _)) in tuple.preps.iter().enumerate() {
        if used[j] || !classes.accepts(spec, prep) {
            continue;
        }
        used[j] = true;
        chosen.push(j);
        if assign_preps(tuple, rule, classes, slot + 1, used, chosen) {
            return true;
        }
        chosen.pop();
        used[j] = false;
    }
    false
}

/// Picks the matching rule that binds the most slots; file order breaks ties.
pub fn select_rule<'a>(lexicon: &'a Lexicon, tuple: &EventTuple) -> Option<RuleMatch<'a>> {
    let mut best: Option<RuleMatch<'a>> = None;
    for (position, rule) in lexicon.rules_for(&tuple.verb) {
        let Some((binding, slots)) = match_slots(tuple, rule, lexicon.prep_classes()) else {
            continue;
        };
        if best.as_ref().is_none_or(|b| binding.len() > b.binding.len()) {
            best = Some(RuleMatch {
                position,
                rule,
                binding,
                slots,
            });
        }
    }
    best
}

fn ground(lit: &Literal, binding: &RoleBinding) -> Result<GroundLiteral, InstantiateError> {
    let args = lit
        .args
        .iter()
        .map(|arg| match arg {
            Term::Role(role) => binding
                .get(role)
                .map(canonical)
                .ok_or_else(|| InstantiateError::IncompleteBinding(role.clone())),
            Term::Const(c) => Ok(canonical(c)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroundLiteral::new(lit.predicate, args, lit.negated))
}

/// Grounds a rule's before and after templates under `binding`.
pub fn instantiate(
    rule: &VerbRule,
    binding: &RoleBinding,
) -> Result<(Vec<GroundLiteral>, Vec<GroundLiteral>), InstantiateError> {
    let before = rule
        .before
        .iter()
        .map(|l| ground(l, binding))
        .collect::<Result<_, _>>()?;
    let after = rule
        .after
        .iter()
        .map(|l| ground(l, binding))
        .collect::<Result<_, _>>()?;
    Ok((before, after))
}
