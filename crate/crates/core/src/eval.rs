//! Headword-matched precision/recall/F1 for answer sets, macroaveraged over
//! a run.

use std::fmt::Write;

use serde::Serialize;

use crate::qa::{AnswerSet, Question};
use crate::text::canonical;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Scores {
    pub const PERFECT: Scores = Scores {
        precision: 1.0,
        recall: 1.0,
        f1: 1.0,
    };
    pub const ZERO: Scores = Scores {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
    };

    pub fn new(precision: f64, recall: f64) -> Self {
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Scores { precision, recall, f1 }
    }
}

/// A predicted answer counts when its headword equals that of a gold answer
/// not yet matched. Two empty sets score 1; exactly one empty set scores 0.
pub fn score_question(predicted: &[String], gold: &[String]) -> Scores {
    match (predicted.is_empty(), gold.is_empty()) {
        (true, true) => return Scores::PERFECT,
        (true, false) | (false, true) => return Scores::ZERO,
        _ => {}
    }
    let mut open: Vec<Option<String>> = gold.iter().map(|g| Some(canonical(g))).collect();
    let mut correct = 0usize;
    for p in predicted {
        let head = canonical(p);
        if let Some(slot) = open.iter_mut().find(|g| g.as_deref() == Some(head.as_str())) {
            *slot = None;
            correct += 1;
        }
    }
    Scores::new(
        correct as f64 / predicted.len() as f64,
        correct as f64 / gold.len() as f64,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldRecord {
    pub id: String,
    pub question: Question,
    pub gold: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionScore {
    pub id: String,
    pub question: String,
    pub predicted: Vec<String>,
    pub gold: Vec<String>,
    #[serde(flatten)]
    pub scores: Scores,
}

/// Macro averages over a subset; `None` when the subset is empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub questions: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

impl Summary {
    fn over<'a>(scores: impl Iterator<Item = &'a Scores>) -> Self {
        let all: Vec<&Scores> = scores.collect();
        let n = all.len();
        let mean = |f: fn(&Scores) -> f64| (n > 0).then(|| all.iter().map(|s| f(s)).sum::<f64>() / n as f64);
        Summary {
            questions: n,
            precision: mean(|s| s.precision),
            recall: mean(|s| s.recall),
            f1: mean(|s| s.f1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    pub per_question: Vec<QuestionScore>,
    pub overall: Summary,
    /// Questions whose gold set has exactly one answer.
    pub single_answer: Summary,
}

pub fn score_run(records: &[(GoldRecord, AnswerSet)]) -> ScoreReport {
    let per_question: Vec<QuestionScore> = records
        .iter()
        .map(|(g, pred)| QuestionScore {
            id: g.id.clone(),
            question: g.question.to_string(),
            predicted: pred.0.clone(),
            gold: g.gold.clone(),
            scores: score_question(&pred.0, &g.gold),
        })
        .collect();
    let overall = Summary::over(per_question.iter().map(|q| &q.scores));
    let single_answer = Summary::over(per_question.iter().filter(|q| q.gold.len() == 1).map(|q| &q.scores));
    ScoreReport {
        per_question,
        overall,
        single_answer,
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"))
}

impl ScoreReport {
    /// Per-question rows followed by the two summary lines.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# id\tquestion\tP\tR\tF1\tpredicted\tgold\n");
        for q in &self.per_question {
            let _ = writeln!(
                out,
                "{}\t{}\t{:.3}\t{:.3}\t{:.3}\t{{{}}}\t{{{}}}",
                q.id,
                q.question,
                q.scores.precision,
                q.scores.recall,
                q.scores.f1,
                q.predicted.join(", "),
                q.gold.join(", ")
            );
        }
        for (name, s) in [("all", &self.overall), ("single-answer", &self.single_answer)] {
            let _ = writeln!(
                out,
                "macro {name}: n={} P={} R={} F1={}",
                s.questions,
                fmt_opt(s.precision),
                fmt_opt(s.recall),
                fmt_opt(s.f1)
            );
        }
        out
    }

    /// Summary record without the per-question rows.
    pub fn summary_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            overall: &'a Summary,
            single_answer: &'a Summary,
        }
        serde_json::to_string_pretty(&Out {
            overall: &self.overall,
            single_answer: &self.single_answer,
        })
        .expect("summary serializes")
    }
}
