//! Source adapters that turn external text into knowledge tuples and
//! hub-builder calls, and the step that applies them to a graph.

pub mod dsl;
pub mod ldd;
pub mod tuples;

use crate::compound;
use crate::error::InvalidValue;
use crate::graph::Graph;
use crate::types::KnowledgeTuple;

pub use dsl::{dsl_to_actions, parse_dsl, render_dsl, DslArg, DslStatement, Lowered, StatementKind};
pub use ldd::{parse_ldd, parse_linker_line, LddParse, LinkerLine, DEFAULT_LDD_CONTEXT};
pub use tuples::{dump, parse_tuples, render_tuple};

/// One unit of learning to apply to a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Learn(KnowledgeTuple),
    ContextCluster(String),
    RoleCluster {
        compound: String,
        role: String,
        qualifier: String,
        context: String,
    },
}

/// Applies actions in order with timestamp `now`. Returns the number of
/// tuples learned.
pub fn apply(g: &mut Graph, actions: &[Action], now: i64) -> Result<usize, InvalidValue> {
    let mut tuples = 0;
    for a in actions {
        match a {
            Action::Learn(t) => {
                g.learn(t, now);
                tuples += 1;
            }
            Action::ContextCluster(phrase) => {
                compound::context_cluster(g, phrase, now)?;
            }
            Action::RoleCluster {
                compound: name,
                role,
                qualifier,
                context,
            } => {
                compound::role_cluster(g, name, role, qualifier, context, now)?;
            }
        }
    }
    Ok(tuples)
}
