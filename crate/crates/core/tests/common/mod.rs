//! Shared generators, an independent reference simulator, and property
//! checks used by both the property suite and the acceptance run.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use procstate::eval::{score_question, score_run, GoldRecord, Scores};
use procstate::ingest::{build_graph, EventRelation, EventTuple, ProcessGraph, TupleSlot};
use procstate::lexicon::{parse_lexicon, GroundLiteral, Lexicon, Predicate};
use procstate::qa::{answer, AnswerSet, Question};
use procstate::simulate::{
    conflicts, project, render_grid, simulate, ChangeDetail, ChangeKind, MarkKind, Provenance, SimulateOptions,
    StateDatabase, Sweep,
};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data(name)).expect("bundled fixture")
}

pub fn demo_lexicon() -> Lexicon {
    parse_lexicon(&read_data("demo.lex")).expect("demo lexicon parses")
}

pub fn no_stoplist() -> BTreeSet<String> {
    BTreeSet::new()
}

// ---------------------------------------------------------------- generators

pub const SMALL_POOL: [&str; 3] = ["ant", "bee", "cup"];
pub const WIDE_POOL: [&str; 5] = ["ant", "bee", "cup", "dew", "elm"];

#[derive(Debug, Clone, Copy)]
enum Shape {
    Intransitive,
    Transitive,
    ToDestination,
    FromSource,
}

impl Shape {
    fn pattern(self, verb: &str) -> String {
        match self {
            Shape::Intransitive => format!(r#"Patient "{verb}" -"#),
            Shape::Transitive => format!(r#"Agent "{verb}" Patient"#),
            Shape::ToDestination => format!(r#"Theme "{verb}" - (PREP-dest Destination)"#),
            Shape::FromSource => format!(r#"Theme "{verb}" - (PREP-src Initial_Location)"#),
        }
    }

    fn roles(self) -> &'static [&'static str] {
        match self {
            Shape::Intransitive => &["Patient"],
            Shape::Transitive => &["Agent", "Patient"],
            Shape::ToDestination => &["Theme", "Destination"],
            Shape::FromSource => &["Theme", "Initial_Location"],
        }
    }
}

fn shape() -> impl Strategy<Value = Shape> {
    prop_oneof![
        Just(Shape::Intransitive),
        Just(Shape::Transitive),
        Just(Shape::ToDestination),
        Just(Shape::FromSource),
    ]
}

/// A literal template over the shape's roles, as rule text.
fn literal(shape: Shape, pool: &'static [&'static str]) -> impl Strategy<Value = String> {
    let roles = shape.roles();
    (
        0usize..5,
        0usize..roles.len(),
        0usize..3,
        any::<bool>(),
        0usize..pool.len(),
    )
        .prop_map(move |(pred, r, v, neg, c)| {
            let role = roles[r];
            let other = roles.iter().find(|x| **x != role).map(|x| x.to_string());
            let body = match pred {
                0 => format!("exists({role})"),
                1 => format!("is-at({role},{})", other.unwrap_or_else(|| format!("\"{}\"", pool[c]))),
                2 => format!("phase({role},{})", ["solid", "liquid", "gas"][v]),
                3 => format!("temperature({role},{})", ["increased", "decreased"][v % 2]),
                _ => format!("size({role},{})", ["increased", "decreased"][v % 2]),
            };
            if neg {
                format!("not {body}")
            } else {
                body
            }
        })
}

fn rule(verb: &'static str, pool: &'static [&'static str]) -> impl Strategy<Value = String> {
    shape().prop_flat_map(move |s| {
        (
            prop::collection::vec(literal(s, pool), 0..3),
            prop::collection::vec(literal(s, pool), 0..3),
        )
            .prop_map(move |(before, after)| {
                format!(
                    "verb: {verb} | pattern: {} | before: {} | after: {}",
                    s.pattern(verb),
                    before.join(", "),
                    after.join(", ")
                )
            })
    })
}

/// Lexicon source with exactly two rules over verbs `v` and `w`.
pub fn two_rule_lexicon(pool: &'static [&'static str]) -> impl Strategy<Value = String> {
    (rule("v", pool), prop_oneof![rule("v", pool), rule("w", pool)]).prop_map(|(a, b)| format!("{a}\n{b}\n"))
}

fn tuple(pool: &'static [&'static str]) -> impl Strategy<Value = EventTuple> {
    let np = move || (0..pool.len()).prop_map(move |i| pool[i].to_string());
    (
        prop_oneof![Just("v"), Just("w"), Just("z")],
        np(),
        prop::option::of(np()),
        prop::option::of((prop_oneof![Just("to"), Just("from"), Just("with")], np())),
    )
        .prop_map(|(verb, subj, obj, prep)| {
            let mut t = EventTuple::new(0, verb).with_subject(&subj);
            if let Some(o) = obj {
                t = t.with_object(&o);
            }
            if let Some((p, np)) = prep {
                t = t.with_prep(p, &np);
            }
            t
        })
}

#[derive(Debug, Clone)]
pub struct Case {
    pub lexicon: String,
    pub tuples: Vec<EventTuple>,
}

impl Case {
    pub fn graph(&self) -> ProcessGraph {
        let lex = parse_lexicon(&self.lexicon).expect("generated lexicon parses");
        build_graph(&self.tuples, &lex, &no_stoplist())
    }
}

pub fn case(pool: &'static [&'static str], max_events: usize) -> impl Strategy<Value = Case> {
    (
        two_rule_lexicon(pool),
        prop::collection::vec(tuple(pool), 0..=max_events),
    )
        .prop_map(|(lexicon, mut tuples)| {
            for (i, t) in tuples.iter_mut().enumerate() {
                t.index = i + 1;
            }
            Case { lexicon, tuples }
        })
}

/// Oracle-sized cases: up to four events and three participants.
pub fn small_case() -> impl Strategy<Value = Case> {
    case(&SMALL_POOL, 4)
}

pub fn wide_case() -> impl Strategy<Value = Case> {
    case(&WIDE_POOL, 6)
}

fn ground_literal(pool: &'static [&'static str]) -> impl Strategy<Value = GroundLiteral> {
    let p = move || (0..pool.len()).prop_map(move |i| pool[i]);
    (0usize..5, p(), p(), 0usize..3, any::<bool>()).prop_map(|(k, a, b, v, neg)| {
        let l = match k {
            0 => GroundLiteral::exists(a),
            1 => GroundLiteral::is_at(a, b),
            2 => GroundLiteral::phase(a, ["solid", "liquid", "gas"][v]),
            3 => GroundLiteral::temperature(a, ["increased", "decreased"][v % 2]),
            _ => GroundLiteral::size(a, ["increased", "decreased"][v % 2]),
        };
        if neg {
            l.negate()
        } else {
            l
        }
    })
}

/// A database built by inserting random facts; conflicting ones are
/// skipped by the database itself.
pub fn database() -> impl Strategy<Value = StateDatabase> {
    (1usize..=5)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((1..=2 * n as u32, ground_literal(&SMALL_POOL)), 0..14),
            )
        })
        .prop_map(|(n, facts)| {
            let mut db = StateDatabase::new(n);
            for (t, l) in facts {
                db.insert(l, t, Provenance::Direct);
            }
            db
        })
}

pub fn answer_set() -> impl Strategy<Value = Vec<String>> {
    prop::collection::btree_set("[a-e]{1,3}", 1..5).prop_map(|s| s.into_iter().collect())
}

// ---------------------------------------------------------- reference model

/// A deliberately plain re-statement of the simulator: facts in a flat
/// list, conflicts recomputed by scanning, projection by enumerating every
/// literal over the participants and keeping those that are allowed.
pub struct Reference {
    n: usize,
    facts: Vec<(u32, GroundLiteral, String)>,
    pub marks: BTreeSet<(String, String, usize)>,
    pub deps: BTreeSet<(usize, usize)>,
}

fn clash(a: &GroundLiteral, b: &GroundLiteral) -> bool {
    if a.predicate != b.predicate {
        return false;
    }
    let same_args = a.args == b.args;
    if same_args {
        return a.negated != b.negated;
    }
    let functional = matches!(a.predicate, Predicate::IsAt | Predicate::Phase);
    functional && !a.negated && !b.negated && a.args[0] == b.args[0]
}

impl Reference {
    fn has(&self, t: u32, l: &GroundLiteral) -> bool {
        self.facts.iter().any(|(u, m, _)| *u == t && m == l)
    }

    fn blocked(&self, t: u32, l: &GroundLiteral) -> bool {
        self.facts.iter().any(|(u, m, _)| *u == t && clash(m, l))
    }

    fn add(&mut self, t: u32, l: GroundLiteral, prov: &str) -> bool {
        if t < 1 || t as usize > 2 * self.n || self.has(t, &l) || self.blocked(t, &l) {
            return false;
        }
        self.facts.push((t, l, prov.to_string()));
        true
    }

    pub fn facts(&self) -> BTreeSet<(u32, String, String)> {
        self.facts
            .iter()
            .map(|(t, l, p)| (*t, l.to_string(), p.clone()))
            .collect()
    }
}

struct Roles {
    agents: BTreeSet<String>,
    patients: BTreeSet<String>,
    initial: Option<String>,
    fin: Option<String>,
}

fn family(role: &str) -> String {
    let r = role.strip_prefix("Co_").unwrap_or(role);
    r.chars()
        .rev()
        .skip_while(|c| c.is_ascii_digit())
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect()
}

fn roles_of(g: &ProcessGraph, e: usize) -> Roles {
    let edges: Vec<_> = g.role_edges.iter().filter(|x| x.event == e).collect();
    let head = |a: usize| g.arguments[a].headword.clone();
    let fam_in = |role: &str, set: &[&str]| set.contains(&family(role).as_str());
    let slot = |s: TupleSlot| edges.iter().find(|x| x.slot == Some(s)).map(|x| head(x.argument));

    let mut patients: BTreeSet<String> = edges
        .iter()
        .filter(|x| fam_in(&x.role, &["Patient", "Theme", "Product", "Material"]))
        .map(|x| head(x.argument))
        .collect();
    if patients.is_empty() {
        if let Some(o) = slot(TupleSlot::Object) {
            patients.insert(o);
        } else if let Some(s) = slot(TupleSlot::Subject) {
            patients.insert(s);
        }
    }
    let mut agents: BTreeSet<String> = edges
        .iter()
        .filter(|x| fam_in(&x.role, &["Agent", "Actor", "Cause"]))
        .map(|x| head(x.argument))
        .collect();
    if agents.is_empty() && slot(TupleSlot::Object).is_some() {
        if let Some(s) = slot(TupleSlot::Subject).filter(|s| !patients.contains(s)) {
            agents.insert(s);
        }
    }
    let pick = |names: &[&str], prep_ok: &dyn Fn(&str) -> bool| {
        edges
            .iter()
            .find(|x| names.contains(&x.role.as_str()))
            .or_else(|| edges.iter().find(|x| x.role.strip_prefix("prep:").is_some_and(prep_ok)))
            .map(|x| head(x.argument))
    };
    let c = &g.prep_classes;
    Roles {
        agents,
        patients,
        initial: pick(&["Initial_Location", "Source"], &|p| c.is_source(p)),
        fin: pick(&["Destination", "Final_Location", "Goal"], &|p| c.is_destination(p)),
    }
}

/// Every participant name: argument headwords plus constants that only
/// appear inside rule literals.
fn names(g: &ProcessGraph) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = g.arguments.iter().map(|a| a.headword.clone()).collect();
    for ev in &g.events {
        for l in ev.before.iter().chain(&ev.after) {
            out.insert(l.args[0].clone());
            if l.predicate == Predicate::IsAt {
                out.insert(l.args[1].clone());
            }
        }
    }
    out
}

fn universe(g: &ProcessGraph) -> Vec<GroundLiteral> {
    let heads = names(g);
    let mut out = Vec::new();
    for a in &heads {
        out.push(GroundLiteral::exists(a));
        for b in &heads {
            out.push(GroundLiteral::is_at(a, b));
        }
        for s in ["solid", "liquid", "gas"] {
            out.push(GroundLiteral::phase(a, s));
        }
    }
    let negs: Vec<_> = out.iter().cloned().map(GroundLiteral::negate).collect();
    out.extend(negs);
    out
}

/// Runs the reference model. `Err` carries a description of the first
/// contradictory pair of direct facts.
pub fn reference(g: &ProcessGraph, basic: bool) -> Result<Reference, String> {
    let n = g.events.len();
    let mut r = Reference {
        n,
        facts: Vec::new(),
        marks: BTreeSet::new(),
        deps: BTreeSet::new(),
    };
    for (k, ev) in g.events.iter().enumerate() {
        let i = k as u32 + 1;
        for (t, l) in ev
            .before
            .iter()
            .map(|l| (2 * i - 1, l))
            .chain(ev.after.iter().map(|l| (2 * i, l)))
        {
            if r.has(t, l) {
                continue;
            }
            if r.blocked(t, l) {
                return Err(format!("{l} at {t}"));
            }
            r.add(t, l.clone(), "direct");
        }
    }
    if basic {
        return Ok(r);
    }
    let roles: Vec<Roles> = (1..=n).map(|e| roles_of(g, e)).collect();
    let tb = |e: usize| 2 * e as u32 - 1;
    let ta = |e: usize| 2 * e as u32;

    for e in 1..=n {
        let ro = &roles[e - 1];
        for x in &ro.patients {
            if let Some(l) = ro.initial.as_ref().filter(|l| *l != x) {
                r.add(tb(e), GroundLiteral::is_at(x, l), "commonsense(location)");
            }
            if let Some(l) = ro.fin.as_ref().filter(|l| *l != x) {
                r.add(ta(e), GroundLiteral::is_at(x, l), "commonsense(location)");
            }
        }
    }
    for e in 1..=n {
        let ro = &roles[e - 1];
        let all: BTreeSet<&String> = ro.agents.iter().chain(ro.patients.iter()).collect();
        for x in all {
            r.add(tb(e), GroundLiteral::exists(x), "commonsense(existence)");
            r.add(ta(e), GroundLiteral::exists(x), "commonsense(existence)");
        }
    }

    let incident = |a: usize| -> BTreeSet<usize> {
        g.role_edges
            .iter()
            .filter(|x| x.argument == a)
            .map(|x| x.event)
            .collect()
    };
    for (a, arg) in g.arguments.iter().enumerate() {
        let ev = incident(a);
        let x = &arg.headword;
        if ev.len() == 1 {
            let e = *ev.iter().next().unwrap();
            if roles[e - 1].patients.contains(x) {
                r.marks.insert(("created".into(), x.clone(), e));
                r.add(tb(e), GroundLiteral::exists(x).negate(), "commonsense(creation)");
                r.add(ta(e), GroundLiteral::exists(x), "commonsense(creation)");
            }
        }
    }
    for (a, arg) in g.arguments.iter().enumerate() {
        let ev = incident(a);
        let x = &arg.headword;
        if ev.len() >= 2 && ev.iter().any(|e| roles[e - 1].patients.contains(x)) {
            let e = *ev.iter().last().unwrap();
            r.marks.insert(("destroyed".into(), x.clone(), e));
            r.add(tb(e), GroundLiteral::exists(x), "commonsense(destruction)");
            r.add(ta(e), GroundLiteral::exists(x).negate(), "commonsense(destruction)");
        }
    }

    let lits = universe(g);
    let fluent = |l: &GroundLiteral| matches!(l.predicate, Predicate::IsAt | Predicate::Exists | Predicate::Phase);
    loop {
        let mut changed = false;
        let max = 2 * n as u32;
        for t in 1..max {
            let movable: Vec<GroundLiteral> = lits.iter().filter(|l| fluent(l) && r.has(t, l)).cloned().collect();
            for l in movable {
                changed |= r.add(t + 1, l, "projected(forward)");
            }
        }
        for t in (2..=max).rev() {
            let movable: Vec<GroundLiteral> = lits.iter().filter(|l| fluent(l) && r.has(t, l)).cloned().collect();
            for l in movable {
                changed |= r.add(t - 1, l, "projected(backward)");
            }
        }

        let heads = names(g);
        let mut cands = Vec::new();
        for e in 1..=n {
            let gone = |x: &String| {
                (r.has(tb(e), &GroundLiteral::exists(x)) && r.has(ta(e), &GroundLiteral::exists(x).negate()))
                    || r.marks.contains(&("destroyed".to_string(), x.clone(), e))
            };
            let made = |x: &String| {
                (r.has(ta(e), &GroundLiteral::exists(x)) && r.has(tb(e), &GroundLiteral::exists(x).negate()))
                    || r.marks.contains(&("created".to_string(), x.clone(), e))
            };
            let consumed: Vec<&String> = heads.iter().filter(|x| gone(x)).collect();
            let produced: Vec<&String> = heads.iter().filter(|x| made(x)).collect();
            let at = |x: &String, t: u32| -> Vec<String> {
                heads
                    .iter()
                    .filter(|l| r.has(t, &GroundLiteral::is_at(x, *l)))
                    .cloned()
                    .collect()
            };
            for x in &consumed {
                for y in produced.iter().filter(|y| y != &x) {
                    for l in at(x, tb(e)).into_iter().filter(|l| l != *y) {
                        cands.push((ta(e), GroundLiteral::is_at(*y, l)));
                    }
                }
            }
            for y in &produced {
                for x in consumed.iter().filter(|x| x != &y) {
                    for l in at(y, ta(e)).into_iter().filter(|l| l != *x) {
                        cands.push((tb(e), GroundLiteral::is_at(*x, l)));
                    }
                }
            }
        }
        for (t, l) in cands {
            changed |= r.add(t, l, "commonsense(colocation)");
        }
        if !changed {
            break;
        }
    }

    for (a, arg) in g.arguments.iter().enumerate() {
        let Some(&first) = incident(a).iter().next() else {
            continue;
        };
        if let Some(j) = (first + 1..=n).find(|&j| {
            let ro = &roles[j - 1];
            ro.agents.contains(&arg.headword) || ro.patients.contains(&arg.headword)
        }) {
            r.deps.insert((j, first));
        }
    }
    for i in 2..=n {
        if !r.deps.iter().any(|(d, _)| *d == i) {
            r.deps.insert((i, i - 1));
        }
    }
    Ok(r)
}

fn db_facts(db: &StateDatabase) -> BTreeSet<(u32, String, String)> {
    db.iter()
        .map(|f| (f.time, f.literal.to_string(), f.provenance.to_string()))
        .collect()
}

// ------------------------------------------------------------- properties

pub fn check_projection(db: &StateDatabase) -> Result<(), TestCaseError> {
    let p = project(db);
    for f in db.iter() {
        prop_assert_eq!(
            p.provenance(&f.literal, f.time),
            Some(f.provenance),
            "fact lost or relabelled"
        );
    }
    prop_assert_eq!(&project(&p), &p, "projection is not idempotent");
    for t in 1..=p.max_time() {
        let facts: Vec<_> = p.at(t).map(|(l, _)| l.clone()).collect();
        for (i, a) in facts.iter().enumerate() {
            for b in &facts[i + 1..] {
                prop_assert!(!conflicts(a, b), "{a} and {b} both at {t}");
            }
        }
        for (l, prov) in p.at(t) {
            if let Provenance::Projected(_) = prov {
                prop_assert!(l.predicate.is_fluent(), "non-fluent {l} projected");
            }
        }
    }
    Ok(())
}

pub fn check_conflict_free(case: &Case) -> Result<(), TestCaseError> {
    let g = case.graph();
    for basic in [false, true] {
        let opts = SimulateOptions {
            basic_inference_only: basic,
            ..Default::default()
        };
        let Ok(sim) = simulate(&g, &opts) else {
            continue;
        };
        for t in 1..=sim.db.max_time() {
            let facts: Vec<_> = sim.db.at(t).map(|(l, _)| l.clone()).collect();
            for (i, a) in facts.iter().enumerate() {
                for b in &facts[i + 1..] {
                    prop_assert!(!conflicts(a, b), "{a} and {b} both at {t}");
                }
            }
        }
        for f in sim.db.iter() {
            prop_assert!(f.time >= 1 && f.time <= 2 * g.len() as u32);
            if basic {
                prop_assert_eq!(f.provenance, Provenance::Direct);
            }
            if f.provenance == Provenance::Direct {
                let ev = g.event(f.time.div_ceil(2) as usize).unwrap();
                let side = if f.time % 2 == 1 { &ev.before } else { &ev.after };
                prop_assert!(side.contains(&f.literal), "direct {} misplaced", f.literal);
            }
        }
    }
    Ok(())
}

pub fn check_oracle(case: &Case) -> Result<(), TestCaseError> {
    let g = case.graph();
    prop_assert!(g.arguments.len() <= 3);
    for basic in [false, true] {
        let opts = SimulateOptions {
            basic_inference_only: basic,
            ..Default::default()
        };
        let got = simulate(&g, &opts);
        let want = reference(&g, basic);
        match (got, want) {
            (Err(_), Err(_)) => {}
            (Ok(sim), Ok(r)) => {
                prop_assert_eq!(db_facts(&sim.db), r.facts());
                if !basic {
                    let marks: BTreeSet<_> = sim
                        .db
                        .marks()
                        .iter()
                        .map(|m| {
                            let k = if m.kind == MarkKind::Created {
                                "created"
                            } else {
                                "destroyed"
                            };
                            (k.to_string(), m.participant.clone(), m.event)
                        })
                        .collect();
                    prop_assert_eq!(marks, r.marks.clone());
                    let deps: BTreeSet<_> = sim
                        .graph
                        .event_edges
                        .iter()
                        .filter(|e| e.relation == EventRelation::DependsOn)
                        .map(|e| (e.from, e.to))
                        .collect();
                    prop_assert_eq!(deps, r.deps.clone());
                }
            }
            (got, want) => prop_assert!(false, "simulator ok={} but reference ok={}", got.is_ok(), want.is_ok()),
        }
    }
    Ok(())
}

pub fn check_scoring(a: &[String], b: &[String], rotate: usize) -> Result<(), TestCaseError> {
    prop_assert_eq!(score_question(a, a), Scores::PERFECT);
    let disjoint: Vec<String> = b.iter().map(|x| format!("{x}zz")).collect();
    prop_assert_eq!(score_question(a, &disjoint), Scores::ZERO);
    let s = score_question(a, b);
    for v in [s.precision, s.recall, s.f1] {
        prop_assert!((0.0..=1.0).contains(&v));
    }

    let q = Question::WhatChanged(ChangeKind::Produced);
    let rec = |id: usize, gold: &[String], pred: &[String]| {
        (
            GoldRecord {
                id: format!("Q{id}"),
                question: q.clone(),
                gold: gold.to_vec(),
            },
            AnswerSet(pred.to_vec()),
        )
    };
    let records = vec![rec(1, a, a), rec(2, a, b), rec(3, b, a), rec(4, b, &disjoint)];
    let base = score_run(&records);
    let mut permuted = records.clone();
    permuted.reverse();
    permuted.rotate_left(rotate % records.len());
    let f = |r: &procstate::eval::ScoreReport| r.overall.f1.unwrap();
    prop_assert!((f(&base) - f(&score_run(&permuted))).abs() < 1e-12);

    let mean = f(&base);
    let mut extended = records.clone();
    let extra = if (mean - 1.0).abs() < 1e-12 {
        rec(5, a, a)
    } else if mean.abs() < 1e-12 {
        rec(5, a, &disjoint)
    } else {
        return Ok(());
    };
    extended.push(extra);
    prop_assert!((f(&score_run(&extended)) - mean).abs() < 1e-12);
    Ok(())
}

pub fn check_determinism(case: &Case) -> Result<(), TestCaseError> {
    let opts = SimulateOptions::default();
    let a = simulate(&case.graph(), &opts);
    let b = simulate(&case.graph(), &opts);
    prop_assert_eq!(&a, &b);
    if let (Ok(a), Ok(b)) = (a, b) {
        let ga = render_grid(&a.db, &a.graph);
        let gb = render_grid(&b.db, &b.graph);
        prop_assert_eq!(ga.to_records(), gb.to_records());
        prop_assert_eq!(ga.to_table(), gb.to_table());
        let ta: Vec<String> = a.trace.iter().map(|t| t.to_string()).collect();
        let tb: Vec<String> = b.trace.iter().map(|t| t.to_string()).collect();
        prop_assert_eq!(ta, tb);
    }
    Ok(())
}

/// Soundness, completeness and subset properties of the answer procedures.
pub fn check_answers(case: &Case) -> Result<(), TestCaseError> {
    let g = case.graph();
    let Ok(sim) = simulate(&g, &SimulateOptions::default()) else {
        return Ok(());
    };
    for kind in [ChangeKind::Produced, ChangeKind::Consumed, ChangeKind::Moved] {
        let got: BTreeSet<String> = answer(&Question::WhatChanged(kind), &sim.changes, &sim.graph)
            .unwrap()
            .0
            .into_iter()
            .collect();
        let want: BTreeSet<String> = sim
            .changes
            .iter()
            .filter(|r| r.kind == kind)
            .map(|r| r.participant.clone())
            .collect();
        prop_assert_eq!(got, want);
    }
    for arg in &sim.graph.arguments {
        let x = arg.headword.clone();
        let locations: BTreeSet<String> = sim
            .db
            .iter()
            .filter(|f| f.literal.is_positive(Predicate::IsAt) && f.literal.subject() == x)
            .map(|f| f.literal.args[1].clone())
            .collect();
        for produced in [true, false] {
            let q = Question::WhereChange {
                participant: x.clone(),
                produced,
            };
            let ans = answer(&q, &sim.changes, &sim.graph).unwrap();
            for a in ans.iter() {
                prop_assert!(locations.contains(a), "{a} is not a location of {x}");
            }
        }
    }
    let missing = Question::WhereChange {
        participant: "zebra".into(),
        produced: true,
    };
    prop_assert!(answer(&missing, &sim.changes, &sim.graph).is_err());
    for step in 1..=sim.graph.len() {
        let ans = answer(&Question::StepDependencies(step), &sim.changes, &sim.graph).unwrap();
        let want: Vec<String> = sim
            .graph
            .dependencies(step)
            .into_iter()
            .map(|e| sim.graph.event(e).unwrap().label())
            .collect();
        prop_assert_eq!(ans.0, want);
    }
    for r in &sim.changes {
        if let ChangeDetail::Locations(ls) = &r.detail {
            let t = if r.kind == ChangeKind::Produced {
                2 * r.event as u32
            } else {
                2 * r.event as u32 - 1
            };
            prop_assert_eq!(ls, &sim.db.locations(&r.participant, t));
        }
    }
    Ok(())
}

pub fn check_graph(case: &Case) -> Result<(), TestCaseError> {
    let lex = parse_lexicon(&case.lexicon).unwrap();
    let g = build_graph(&case.tuples, &lex, &no_stoplist());
    let chain: Vec<(usize, usize)> = g.event_edges.iter().map(|e| (e.from, e.to)).collect();
    let want: Vec<(usize, usize)> = (1..g.len()).map(|i| (i, i + 1)).collect();
    prop_assert_eq!(chain, want);
    let again = build_graph(&case.tuples, &lex, &no_stoplist());
    prop_assert_eq!(&again.arguments, &g.arguments);
    for ev in &g.events {
        if let Some(sel) = &ev.selection {
            for (role, _) in sel.binding.iter() {
                let n = g.edges_of(ev.index).filter(|e| e.role == role).count();
                prop_assert_eq!(n, 1, "role {} on {}", role, ev.label());
            }
        }
    }
    let stop: BTreeSet<String> = ["v".to_string()].into();
    prop_assert!(build_graph(&case.tuples, &lex, &stop).len() <= g.len());
    prop_assert_eq!(g.len(), case.tuples.len());
    Ok(())
}

pub fn check_lexicon_round_trip(src: &str) -> Result<(), TestCaseError> {
    let lex = parse_lexicon(src).unwrap();
    let again = parse_lexicon(&lex.to_string()).unwrap();
    prop_assert_eq!(lex.rules(), again.rules());
    Ok(())
}

/// Used by spec-level example tests: all facts of a database keyed by time.
pub fn by_time(db: &StateDatabase) -> BTreeMap<u32, Vec<String>> {
    let mut out: BTreeMap<u32, Vec<String>> = BTreeMap::new();
    for f in db.iter() {
        out.entry(f.time).or_default().push(f.literal.to_string());
    }
    out
}

pub fn sweep_name(s: Sweep) -> &'static str {
    s.name()
}
