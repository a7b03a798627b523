//! Text rendering of stories in the indented tree format.
//!
//! ```text
//! Found story subject: "microservice"
//! 0:apprxnr)  "microservice" is approximately "service" (in the context of software)
//! 1:follows)    "service" depends on "software X" (in the context of software)
//! ```
//!
//! Paths arrive in depth-first order, so each path prints only the steps
//! after the prefix it shares with the previous path.

use std::fmt::Write as _;

use crate::story::{StoryPath, StoryStep};
use crate::types::{AssociationEdge, ContextSet, ROOT_CONCEPT};

/// Mean step relevance at or above which a path counts as relevant in the
/// summary line.
pub const RELEVANT_MEAN: f64 = 50.0;

fn context_clause(ctx: &ContextSet, score: Option<u8>) -> String {
    let phrases = if ctx.is_empty() {
        ROOT_CONCEPT.to_string()
    } else {
        ctx.spoken()
    };
    match score {
        Some(s) => format!("(intended context: {phrases} - {s}"),
        None => format!("(in the context of {phrases})"),
    }
}

fn edge_text(e: &AssociationEdge, score: Option<u8>) -> String {
    format!(
        "\"{}\" {} \"{}\" {}",
        e.from,
        e.spoken_alias(),
        e.to,
        context_clause(&e.context, score)
    )
}

/// One step line: `<depth>:<label>)` then two spaces per level.
pub fn step_line(step: &StoryStep, scored: bool) -> String {
    let indent = " ".repeat(2 * (step.depth + 1));
    format!(
        "{}:{}){}{}",
        step.depth,
        step.edge.stype.label(),
        indent,
        edge_text(&step.edge, scored.then_some(step.relevance))
    )
}

/// One annotation line under a step at `depth`.
pub fn note_line(depth: usize, note: &AssociationEdge) -> String {
    format!("{}and also note {}", " ".repeat(2 * depth + 3), edge_text(note, None))
}

/// Incremental tree renderer. Feed paths in walk order.
#[derive(Debug, Default)]
pub struct TreeRenderer {
    previous: StoryPath,
    scored: bool,
    paths: usize,
    relevant: usize,
}

impl TreeRenderer {
    pub fn new(scored: bool) -> Self {
        TreeRenderer {
            scored,
            ..Default::default()
        }
    }

    /// Lines for `path` not already printed for the previous one.
    pub fn push(&mut self, path: StoryPath) -> String {
        let shared = path.common_prefix(&self.previous);
        let mut out = String::new();
        for step in &path.steps[shared..] {
            out.push_str(&step_line(step, self.scored));
            out.push('\n');
            for note in &step.notes {
                out.push_str(&note_line(step.depth, note));
                out.push('\n');
            }
        }
        self.paths += 1;
        if path.mean_relevance() >= RELEVANT_MEAN {
            self.relevant += 1;
        }
        self.previous = path;
        out
    }

    pub fn paths(&self) -> usize {
        self.paths
    }

    /// Blank line, outcome count and relevance estimate.
    pub fn footer(&self) -> String {
        format!(
            "\nTotal independent outcomes/paths = {}\nEstimated relevance of outcomes {}/{}\n",
            self.paths, self.relevant, self.paths
        )
    }
}

pub fn header(subject: &str, type_filter: Option<u8>) -> String {
    let mut out = format!("Found story subject: \"{subject}\"\n");
    if let Some(t) = type_filter {
        let _ = writeln!(out, "Stories of type {t} only");
    }
    out
}

/// Full report for an already collected set of paths.
pub fn render_report(
    subject: &str,
    type_filter: Option<u8>,
    paths: impl IntoIterator<Item = StoryPath>,
    scored: bool,
) -> String {
    let mut out = header(subject, type_filter);
    let mut tree = TreeRenderer::new(scored);
    for p in paths {
        out.push_str(&tree.push(p));
    }
    out.push_str(&tree.footer());
    out
}
