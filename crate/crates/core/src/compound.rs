//! Hub compounding: context clusters and role clusters.
//!
//! A hub is an ordinary concept whose name stands for a cluster of member
//! concepts. Members point at the hub with a containment (+3) edge; a role
//! cluster additionally binds its compound name to a privileged role
//! concept through the +4 role channel. Hubs may share members freely.

use crate::error::InvalidValue;
use crate::graph::Graph;
use crate::types::{
    AssociationEdge, ConceptToken, ContextSet, SignedAssocType, MEMBER_LINK, QUALIFIER_LINK,
    ROLE_LINK,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HubKind {
    ContextCluster,
    RoleCluster,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hub {
    pub name: ConceptToken,
    pub members: Vec<ConceptToken>,
    pub kind: HubKind,
}

fn link(
    from: &ConceptToken,
    stype: u8,
    pair: (&str, &str),
    to: &ConceptToken,
    context: ContextSet,
) -> AssociationEdge {
    AssociationEdge::new(
        from.clone(),
        SignedAssocType::forward(stype),
        pair.0,
        to.clone(),
        pair.1,
        context,
        false,
    )
    .expect("builtin alias pairs are valid")
}

/// Builds (or reinforces) the hub named by a whole context phrase, with one
/// member per distinct word and a membership link up to the root.
pub fn context_cluster(g: &mut Graph, phrase: &str, now: i64) -> Result<Hub, InvalidValue> {
    // Validates the phrase with the same rules as an edge context.
    ContextSet::single(phrase)?;
    let hub = ConceptToken::new(phrase)?;
    let mut members: Vec<ConceptToken> = Vec::new();
    for word in hub.as_str().split_whitespace() {
        let w = ConceptToken::new(word)?;
        if !members.contains(&w) {
            members.push(w);
        }
    }
    for m in &members {
        g.upsert_edge(&link(m, 3, MEMBER_LINK, &hub, ContextSet::empty()), now);
    }
    g.upsert_edge(
        &link(&hub, 3, MEMBER_LINK, &ConceptToken::root(), ContextSet::empty()),
        now,
    );
    Ok(Hub {
        name: hub,
        members,
        kind: HubKind::ContextCluster,
    })
}

/// Builds a compound concept such as "GP doctor": it has the role of
/// `role` and is an aspect of `qualifier`, both learned under
/// `context_phrase`, whose context cluster is created as well.
///
/// A compound that names itself as role or qualifier gets no edge for that
/// channel.
pub fn role_cluster(
    g: &mut Graph,
    compound: &str,
    role: &str,
    qualifier: &str,
    context_phrase: &str,
    now: i64,
) -> Result<Hub, InvalidValue> {
    let compound = ConceptToken::new(compound)?;
    let role = ConceptToken::new(role)?;
    let qualifier = ConceptToken::new(qualifier)?;
    let context = ContextSet::single(context_phrase)?;

    let mut members = Vec::new();
    if role != compound {
        g.upsert_edge(&link(&compound, 4, ROLE_LINK, &role, context.clone()), now);
        members.push(role);
    }
    if qualifier != compound {
        g.upsert_edge(&link(&compound, 3, QUALIFIER_LINK, &qualifier, context), now);
        if !members.contains(&qualifier) {
            members.push(qualifier);
        }
    }
    g.add_node(compound.clone());
    context_cluster(g, context_phrase, now)?;
    Ok(Hub {
        name: compound,
        members,
        kind: HubKind::RoleCluster,
    })
}

/// Concepts that fill the role `role_hub`, in neighbor order.
pub fn role_siblings(g: &Graph, role_hub: &ConceptToken) -> Vec<ConceptToken> {
    let mut out: Vec<ConceptToken> = Vec::new();
    for e in g.neighbors(role_hub, Some(4)) {
        if e.is_role_filler_edge() && !out.contains(&e.to) {
            out.push(e.to.clone());
        }
    }
    out
}
