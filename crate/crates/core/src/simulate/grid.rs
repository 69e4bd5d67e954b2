use std::collections::BTreeMap;
use std::fmt::Write;

use super::state::{Provenance, StateDatabase};
use crate::ingest::ProcessGraph;
use crate::lexicon::{GroundLiteral, Predicate};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridRow {
    pub time: u32,
    /// One cell per column, literal-ordered.
    pub cells: Vec<Vec<(GroundLiteral, Provenance)>>,
}

/// Time x participant view of a state database.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticipantGrid {
    /// Participant headwords in order of first mention.
    pub columns: Vec<String>,
    /// Event labels, `E<i>:<verb>`, for rows `2i-1` and `2i`.
    pub events: Vec<String>,
    pub rows: Vec<GridRow>,
}

pub fn render_grid(db: &StateDatabase, graph: &ProcessGraph) -> ParticipantGrid {
    let columns: Vec<String> = graph.arguments.iter().map(|a| a.headword.clone()).collect();
    let column_of: BTreeMap<&str, usize> = columns.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let rows = (1..=db.max_time())
        .map(|time| {
            let mut cells = vec![Vec::new(); columns.len()];
            for (lit, prov) in db.at(time) {
                if let Some(&j) = column_of.get(lit.subject()) {
                    cells[j].push((lit.clone(), prov));
                }
            }
            for cell in &mut cells {
                cell.sort_by_cached_key(|(lit, _)| lit.to_string());
            }
            GridRow { time, cells }
        })
        .collect();
    ParticipantGrid {
        events: graph.events.iter().map(|e| e.label()).collect(),
        columns,
        rows,
    }
}

impl ParticipantGrid {
    pub fn non_empty_cells(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| &r.cells)
            .filter(|c| !c.is_empty())
            .count()
    }

    pub fn fact_count(&self) -> usize {
        self.rows.iter().flat_map(|r| &r.cells).map(Vec::len).sum()
    }

    /// Tab-separated `time participant literal provenance`, one fact per line.
    pub fn to_records(&self) -> String {
        let mut out = String::from("# time\tparticipant\tliteral\tprovenance\n");
        for row in &self.rows {
            for (j, cell) in row.cells.iter().enumerate() {
                for (lit, prov) in cell {
                    let _ = writeln!(out, "{}\t{}\t{}\t{}", row.time, self.columns[j], lit, prov);
                }
            }
        }
        out
    }

    /// Aligned text table. Cells use `@loc` for `is-at`, a trailing `*`
    /// for commonsense facts and `'` for projected ones.
    pub fn to_table(&self) -> String {
        let row_label = |time: u32| {
            let event = self.events.get((time as usize - 1) / 2).map_or("", String::as_str);
            let side = if time % 2 == 1 { "before" } else { "after" };
            format!("{time} {side} {event}")
        };
        let mut header = vec!["t".to_string()];
        header.extend(self.columns.iter().cloned());
        let mut table = vec![header];
        for row in &self.rows {
            let mut line = vec![row_label(row.time)];
            for cell in &row.cells {
                let parts: Vec<String> = cell
                    .iter()
                    .map(|(lit, prov)| format!("{}{}", short(lit), prov.tag()))
                    .collect();
                line.push(parts.join(" "));
            }
            table.push(line);
        }
        let widths: Vec<usize> = (0..table[0].len())
            .map(|j| table.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::from("# * commonsense, ' projected\n");
        for line in table {
            let padded: Vec<String> = line.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            out.push_str(padded.join(" | ").trim_end());
            out.push('\n');
        }
        out
    }
}

fn short(lit: &GroundLiteral) -> String {
    let neg = if lit.negated { "~" } else { "" };
    let value = lit.value().unwrap_or_default();
    match lit.predicate {
        Predicate::IsAt => format!("{neg}@{value}"),
        Predicate::Exists => format!("{neg}exists"),
        Predicate::Temperature => format!("{neg}temp:{value}"),
        Predicate::Size => format!("{neg}size:{value}"),
        Predicate::Phase => format!("{neg}{value}"),
    }
}
