//! Command-line wiring: files in, answers / grid / trace / scores out.

use std::collections::BTreeSet;
use std::fmt::Write;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::eval::{score_run, GoldRecord, ScoreReport};
use crate::ingest::{build_graph, parse_paragraph_file, ParagraphError, DEFAULT_STOPLIST};
use crate::lexicon::{parse_lexicon, Lexicon, LexiconError};
use crate::qa::{answer, parse_question_file, AnswerError, AnswerSet, QuestionError, QuestionLine};
use crate::simulate::{render_grid, simulate, CommonsenseRule, SimulateOptions, SimulationError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Mode {
    #[default]
    Answers,
    Grid,
    Trace,
    Score,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum GridFormat {
    #[default]
    Table,
    Records,
}

/// Simulate annotated process paragraphs and answer questions about them.
#[derive(Debug, Clone, Parser)]
#[command(name = "procstate", version)]
pub struct Cli {
    /// Verb lexicon file.
    #[arg(long)]
    pub lexicon: PathBuf,
    /// Paragraph file, or a directory of `*.para` files.
    #[arg(long)]
    pub paragraph: PathBuf,
    /// Question file; with a paragraph directory, a directory of `<stem>.qs` files.
    #[arg(long)]
    pub questions: Option<PathBuf>,
    /// One verb lemma per line; replaces the default stoplist.
    #[arg(long)]
    pub stoplist: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Answers)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = GridFormat::Table)]
    pub grid_format: GridFormat,
    /// Keep only facts that follow directly from the lexicon.
    #[arg(long)]
    pub basic_inference_only: bool,
    /// Turn off one commonsense rule; repeatable.
    #[arg(long = "disable-rule", value_name = "NAME")]
    pub disable_rule: Vec<String>,
    /// Score mode: also write the summary as JSON to this path.
    #[arg(long, value_name = "PATH")]
    pub summary_json: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunConfig {
    pub lexicon: PathBuf,
    pub paragraph: PathBuf,
    pub questions: Option<PathBuf>,
    pub stoplist: Option<PathBuf>,
    pub mode: Mode,
    pub grid_format: GridFormat,
    pub basic_inference_only: bool,
    pub disabled_rules: Vec<String>,
    pub summary_json: Option<PathBuf>,
}

impl From<Cli> for RunConfig {
    fn from(c: Cli) -> Self {
        RunConfig {
            lexicon: c.lexicon,
            paragraph: c.paragraph,
            questions: c.questions,
            stoplist: c.stoplist,
            mode: c.mode,
            grid_format: c.grid_format,
            basic_inference_only: c.basic_inference_only,
            disabled_rules: c.disable_rule,
            summary_json: c.summary_json,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: file not found", .0.display())]
    FileNotFound(PathBuf),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{}: {}", path.display(), error.line, error.kind)]
    Lexicon { path: PathBuf, error: LexiconError },
    #[error("{}:{}: {}", path.display(), error.line, error.kind)]
    Paragraph { path: PathBuf, error: ParagraphError },
    #[error("{}:{}: {}", path.display(), error.line, error.kind)]
    Questions { path: PathBuf, error: QuestionError },
    #[error("{}: {error}", path.display())]
    Simulation { path: PathBuf, error: SimulationError },
    #[error("{}: {id}: {error}", path.display())]
    Answer {
        path: PathBuf,
        id: String,
        error: AnswerError,
    },
    #[error("{}: {id} has no `gold:` field, which score mode needs", path.display())]
    MissingGold { path: PathBuf, id: String },
    #[error("mode `{0}` needs --questions")]
    MissingQuestions(&'static str),
    #[error("unknown rule `{0}` for --disable-rule (expected one of: {rules})", rules = rule_names())]
    UnknownRule(String),
    #[error("{}: no *.para files", .0.display())]
    EmptyDirectory(PathBuf),
}

fn rule_names() -> String {
    CommonsenseRule::ALL.map(|r| r.name()).join(", ")
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::FileNotFound(_) => "file-not-found",
            CliError::Io { .. } => "io-error",
            CliError::Lexicon { error, .. } => error.kind.code(),
            CliError::Paragraph { error, .. } => error.kind.code(),
            CliError::Questions { error, .. } => error.kind.code(),
            CliError::Simulation { error, .. } => error.code(),
            CliError::Answer { error, .. } => error.code(),
            CliError::MissingGold { .. } => "missing-gold",
            CliError::MissingQuestions(_) => "missing-questions",
            CliError::UnknownRule(_) => "unknown-rule",
            CliError::EmptyDirectory(_) => "empty-directory",
        }
    }

    /// 2 usage or file access, 3 input parse, 4 simulation, 5 answering.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::FileNotFound(_)
            | CliError::Io { .. }
            | CliError::MissingQuestions(_)
            | CliError::UnknownRule(_)
            | CliError::EmptyDirectory(_) => 2,
            CliError::Lexicon { .. }
            | CliError::Paragraph { .. }
            | CliError::Questions { .. }
            | CliError::MissingGold { .. } => 3,
            CliError::Simulation { .. } => 4,
            CliError::Answer { .. } => 5,
        }
    }

    /// `error[<code>]: <location>: <message>`
    pub fn diagnostic(&self) -> String {
        format!("error[{}]: {self}", self.code())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| {
        if source.kind() == io::ErrorKind::NotFound {
            CliError::FileNotFound(path.to_path_buf())
        } else {
            CliError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })
}

fn read_stoplist(path: Option<&Path>) -> Result<BTreeSet<String>, CliError> {
    let Some(path) = path else {
        return Ok(DEFAULT_STOPLIST.iter().map(|s| s.to_string()).collect());
    };
    Ok(read(path)?
        .lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

struct Shared {
    lexicon: Lexicon,
    stoplist: BTreeSet<String>,
    options: SimulateOptions,
}

struct Outcome {
    text: String,
    scored: Vec<(GoldRecord, AnswerSet)>,
}

/// Runs one configuration and returns everything meant for standard output.
pub fn run(config: &RunConfig) -> Result<String, CliError> {
    let disabled_rules = config
        .disabled_rules
        .iter()
        .map(|name| {
            name.parse::<CommonsenseRule>()
                .map_err(|_| CliError::UnknownRule(name.clone()))
        })
        .collect::<Result<BTreeSet<_>, _>>()?;
    let needs_questions = match config.mode {
        Mode::Answers => Some("answers"),
        Mode::Score => Some("score"),
        Mode::Grid | Mode::Trace => None,
    };
    if let (Some(mode), None) = (needs_questions, &config.questions) {
        return Err(CliError::MissingQuestions(mode));
    }

    let lexicon = parse_lexicon(&read(&config.lexicon)?).map_err(|error| CliError::Lexicon {
        path: config.lexicon.clone(),
        error,
    })?;
    let shared = Shared {
        lexicon,
        stoplist: read_stoplist(config.stoplist.as_deref())?,
        options: SimulateOptions {
            basic_inference_only: config.basic_inference_only,
            disabled_rules,
        },
    };

    if !config.paragraph.is_dir() {
        let outcome = process(&shared, config, &config.paragraph, config.questions.as_deref())?;
        return finish(config, outcome.text, &[outcome.scored]);
    }

    let mut paragraphs: Vec<PathBuf> = fs::read_dir(&config.paragraph)
        .map_err(|source| CliError::Io {
            path: config.paragraph.clone(),
            source,
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "para"))
        .collect();
    paragraphs.sort();
    if paragraphs.is_empty() {
        return Err(CliError::EmptyDirectory(config.paragraph.clone()));
    }
    let questions_for = |para: &Path| -> Option<PathBuf> {
        let q = config.questions.as_ref()?;
        if q.is_dir() {
            let stem = para.file_stem().unwrap_or_default();
            Some(q.join(stem).with_extension("qs"))
        } else {
            Some(q.clone())
        }
    };
    let outcomes: Vec<(PathBuf, Outcome)> = paragraphs
        .par_iter()
        .map(|p| process(&shared, config, p, questions_for(p).as_deref()).map(|o| (p.clone(), o)))
        .collect::<Result<_, _>>()?;

    let mut text = String::new();
    for (path, outcome) in &outcomes {
        let name = path.file_name().unwrap_or_default().to_string_lossy();
        let _ = writeln!(text, "## {name}");
        text.push_str(&outcome.text);
    }
    let scored: Vec<_> = outcomes.into_iter().map(|(_, o)| o.scored).collect();
    if config.mode == Mode::Score {
        text.push_str("## all\n");
    }
    finish(config, text, &scored)
}

/// Score mode: the per-paragraph reports are already in `text`; a
/// directory run adds the pooled macro lines. Writes the JSON summary.
fn finish(config: &RunConfig, mut text: String, scored: &[Vec<(GoldRecord, AnswerSet)>]) -> Result<String, CliError> {
    if config.mode != Mode::Score {
        return Ok(text);
    }
    let all: Vec<(GoldRecord, AnswerSet)> = scored.iter().flatten().cloned().collect();
    let report: ScoreReport = score_run(&all);
    if scored.len() > 1 || config.paragraph.is_dir() {
        for line in report.to_text().lines().filter(|l| l.starts_with("macro")) {
            text.push_str(line);
            text.push('\n');
        }
    }
    if let Some(path) = &config.summary_json {
        fs::write(path, report.summary_json() + "\n").map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(text)
}

fn process(
    shared: &Shared,
    config: &RunConfig,
    paragraph: &Path,
    questions: Option<&Path>,
) -> Result<Outcome, CliError> {
    let tuples = parse_paragraph_file(&read(paragraph)?).map_err(|error| CliError::Paragraph {
        path: paragraph.to_path_buf(),
        error,
    })?;
    let questions: Option<(PathBuf, Vec<QuestionLine>)> = match questions {
        Some(path) => {
            let qs = parse_question_file(&read(path)?).map_err(|error| CliError::Questions {
                path: path.to_path_buf(),
                error,
            })?;
            Some((path.to_path_buf(), qs))
        }
        None => None,
    };
    if config.mode == Mode::Score {
        if let Some((path, qs)) = &questions {
            if let Some(q) = qs.iter().find(|q| q.gold.is_none()) {
                return Err(CliError::MissingGold {
                    path: path.clone(),
                    id: q.id.clone(),
                });
            }
        }
    }

    let graph = build_graph(&tuples, &shared.lexicon, &shared.stoplist);
    let sim = simulate(&graph, &shared.options).map_err(|error| CliError::Simulation {
        path: paragraph.to_path_buf(),
        error,
    })?;

    let mut text = String::new();
    let mut scored = Vec::new();
    match config.mode {
        Mode::Grid => {
            let grid = render_grid(&sim.db, &sim.graph);
            text = match config.grid_format {
                GridFormat::Table => grid.to_table(),
                GridFormat::Records => grid.to_records(),
            };
        }
        Mode::Trace => {
            for entry in &sim.trace {
                let _ = writeln!(text, "{entry}");
            }
            for record in &sim.changes {
                let _ = writeln!(text, "change {record}");
            }
        }
        Mode::Answers | Mode::Score => {
            let (path, qs) = questions.expect("checked above");
            for q in qs {
                let set = answer(&q.question, &sim.changes, &sim.graph).map_err(|error| CliError::Answer {
                    path: path.clone(),
                    id: q.id.clone(),
                    error,
                })?;
                if config.mode == Mode::Answers {
                    let _ = writeln!(text, "{} {} = {set}", q.id, q.question);
                } else {
                    let gold = GoldRecord {
                        id: q.id,
                        question: q.question,
                        gold: q.gold.unwrap_or_default(),
                    };
                    scored.push((gold, set));
                }
            }
            if config.mode == Mode::Score {
                text = score_run(&scored).to_text();
            }
        }
    }
    Ok(Outcome { text, scored })
}
