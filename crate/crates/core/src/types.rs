//! Domain values: concept tokens, signed association types, context sets,
//! edges and the knowledge tuple, plus the tuple-to-edges expansion.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::InvalidValue;

/// Name of the reserved root concept that every context hub points at.
pub const ROOT_CONCEPT: &str = "all-contexts";

/// Alias pair linking a concept to the context hub it was learned under.
pub const CONTEXT_LINK: (&str, &str) = ("occurs in context", "is a context for");
/// Alias pair for hub membership (context words, hubs under the root).
pub const MEMBER_LINK: (&str, &str) = ("is a member of", "contains");
/// Alias pair for the privileged role channel of a compound concept.
pub const ROLE_LINK: (&str, &str) = ("has the role of", "is a role fulfilled by");
/// Alias pair for the qualifier channel of a compound concept.
pub const QUALIFIER_LINK: (&str, &str) = ("is an aspect of", "generalizes");

/// An invariant lexical name identifying a node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptToken(String);

impl ConceptToken {
    pub fn new(name: impl AsRef<str>) -> Result<Self, InvalidValue> {
        let name = name.as_ref().trim();
        if name.is_empty() {
            return Err(InvalidValue::EmptyConcept);
        }
        if name.contains(['\t', '\n', '\r', '\0']) {
            return Err(InvalidValue::ConceptControlChar(name.to_string()));
        }
        Ok(ConceptToken(name.to_string()))
    }

    pub fn root() -> Self {
        ConceptToken(ROOT_CONCEPT.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0 == ROOT_CONCEPT
    }
}

impl fmt::Display for ConceptToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for ConceptToken {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// One of the four spacetime association types, with a direction.
///
/// Stored as a signed integer in `{-4..-1, 1..4}`: the magnitude is the
/// spacetime type (1 proximity, 2 order, 3 containment, 4 expression) and a
/// negative sign marks the reciprocal direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedAssocType(i8);

impl SignedAssocType {
    pub const ALL: [SignedAssocType; 8] = [
        SignedAssocType(1),
        SignedAssocType(-1),
        SignedAssocType(2),
        SignedAssocType(-2),
        SignedAssocType(3),
        SignedAssocType(-3),
        SignedAssocType(4),
        SignedAssocType(-4),
    ];

    pub fn new(value: i64) -> Result<Self, InvalidValue> {
        match value {
            -4..=-1 | 1..=4 => Ok(SignedAssocType(value as i8)),
            _ => Err(InvalidValue::TypeOutOfRange(value)),
        }
    }

    /// Forward type of the given magnitude; panics outside 1..=4.
    pub fn forward(magnitude: u8) -> Self {
        assert!((1..=4).contains(&magnitude), "magnitude {magnitude}");
        SignedAssocType(magnitude as i8)
    }

    pub fn value(self) -> i8 {
        self.0
    }

    pub fn magnitude(self) -> u8 {
        self.0.unsigned_abs()
    }

    pub fn is_forward(self) -> bool {
        self.0 > 0
    }

    pub fn invert(self) -> Self {
        SignedAssocType(-self.0)
    }

    /// Seven-character margin label used in story output.
    pub fn label(self) -> &'static str {
        match self.0 {
            1 | -1 => "apprxnr",
            2 => "follows",
            -2 => "preceds",
            3 => "cntains",
            -3 => "cntaind",
            4 => "hasprop",
            -4 => "expr-by",
            _ => unreachable!("SignedAssocType invariant"),
        }
    }
}

impl fmt::Display for SignedAssocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn invert(t: SignedAssocType) -> SignedAssocType {
    t.invert()
}

pub fn type_label(t: SignedAssocType) -> &'static str {
    t.label()
}

/// Context phrases an association was learned (or is being queried) under.
///
/// Phrases are kept sorted and de-duplicated. The token set is the lowercased
/// whitespace-split words of all phrases. An empty set means "all contexts".
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ContextSet {
    phrases: Vec<String>,
    tokens: BTreeSet<String>,
}

impl ContextSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new<I, S>(phrases: I) -> Result<Self, InvalidValue>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for p in phrases {
            let p = p.as_ref().trim();
            if p.is_empty() {
                return Err(InvalidValue::EmptyPhrase);
            }
            if p.contains(['|', '\t', '\n', '\r', '\0']) {
                return Err(InvalidValue::PhraseReservedChar(p.to_string()));
            }
            set.insert(p.to_string());
        }
        let phrases: Vec<String> = set.into_iter().collect();
        let tokens = phrases
            .iter()
            .flat_map(|p| p.split_whitespace())
            .map(str::to_lowercase)
            .collect();
        Ok(ContextSet { phrases, tokens })
    }

    pub fn single(phrase: &str) -> Result<Self, InvalidValue> {
        Self::new([phrase])
    }

    pub fn phrases(&self) -> &[String] {
        &self.phrases
    }

    pub fn tokens(&self) -> &BTreeSet<String> {
        &self.tokens
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    /// Phrases joined with single spaces, as printed in stories.
    pub fn spoken(&self) -> String {
        self.phrases.join(" ")
    }
}

impl PartialOrd for ContextSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ContextSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.phrases.cmp(&other.phrases)
    }
}

fn check_alias(text: &str) -> Result<(), InvalidValue> {
    if text.trim().is_empty() {
        return Err(InvalidValue::EmptyAlias);
    }
    if text.contains(['\t', '\n', '\r']) {
        return Err(InvalidValue::AliasControlChar(text.to_string()));
    }
    Ok(())
}

/// A directed, typed association between two concepts.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationEdge {
    pub from: ConceptToken,
    pub to: ConceptToken,
    pub stype: SignedAssocType,
    pub fwd_name: String,
    pub bwd_name: String,
    pub context: ContextSet,
    pub negated: bool,
    pub weight: f64,
    pub last_updated: i64,
}

impl AssociationEdge {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        from: ConceptToken,
        stype: SignedAssocType,
        fwd_name: &str,
        to: ConceptToken,
        bwd_name: &str,
        context: ContextSet,
        negated: bool,
    ) -> Result<Self, InvalidValue> {
        check_alias(fwd_name)?;
        check_alias(bwd_name)?;
        Ok(AssociationEdge {
            from,
            to,
            stype,
            fwd_name: fwd_name.trim().to_string(),
            bwd_name: bwd_name.trim().to_string(),
            context,
            negated,
            weight: 1.0,
            last_updated: 0,
        })
    }

    /// The same association seen from the other end.
    pub fn mirror(&self) -> AssociationEdge {
        AssociationEdge {
            from: self.to.clone(),
            to: self.from.clone(),
            stype: self.stype.invert(),
            fwd_name: self.bwd_name.clone(),
            bwd_name: self.fwd_name.clone(),
            context: self.context.clone(),
            negated: self.negated,
            weight: self.weight,
            last_updated: self.last_updated,
        }
    }

    pub fn key(&self) -> EdgeKey {
        EdgeKey {
            to: self.to.clone(),
            fwd_name: self.fwd_name.clone(),
            bwd_name: self.bwd_name.clone(),
            context: self.context.clone(),
            negated: self.negated,
        }
    }

    fn has_aliases(&self, pair: (&str, &str)) -> bool {
        (self.fwd_name == pair.0 && self.bwd_name == pair.1)
            || (self.fwd_name == pair.1 && self.bwd_name == pair.0)
    }

    /// True for edges of the context channel (concept/context-hub links and
    /// hub membership), which stories do not walk by default.
    pub fn is_context_link(&self) -> bool {
        self.stype.magnitude() == 3
            && (self.has_aliases(CONTEXT_LINK) || self.has_aliases(MEMBER_LINK))
    }

    /// Forward role edge: compound "has the role of" role hub.
    pub fn is_role_edge(&self) -> bool {
        self.stype.value() == 4 && self.fwd_name == ROLE_LINK.0 && self.bwd_name == ROLE_LINK.1
    }

    /// Reverse role edge: role hub "is a role fulfilled by" compound.
    pub fn is_role_filler_edge(&self) -> bool {
        self.stype.value() == -4 && self.fwd_name == ROLE_LINK.1 && self.bwd_name == ROLE_LINK.0
    }

    /// Forward alias as it reads in a story, with negation spelled out.
    pub fn spoken_alias(&self) -> String {
        if !self.negated {
            return self.fwd_name.clone();
        }
        const AUX: [&str; 10] = [
            "is", "are", "was", "has", "have", "does", "do", "can", "may", "will",
        ];
        match self.fwd_name.split_once(' ') {
            Some((head, rest)) if AUX.contains(&head) => format!("{head} NOT {rest}"),
            _ => format!("NOT {}", self.fwd_name),
        }
    }
}

/// Identity of an edge within `from`'s adjacency bucket for one type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    pub to: ConceptToken,
    pub fwd_name: String,
    pub bwd_name: String,
    pub context: ContextSet,
    pub negated: bool,
}

/// The learning unit `(c1, type, fwd, c2, bwd, context)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeTuple {
    pub c1: ConceptToken,
    pub stype: SignedAssocType,
    pub fwd_name: String,
    pub c2: ConceptToken,
    pub bwd_name: String,
    pub context: ContextSet,
    pub negated: bool,
}

impl KnowledgeTuple {
    pub fn new(
        c1: ConceptToken,
        stype: SignedAssocType,
        fwd_name: &str,
        c2: ConceptToken,
        bwd_name: &str,
        context: ContextSet,
    ) -> Result<Self, InvalidValue> {
        if !stype.is_forward() {
            return Err(InvalidValue::InverseTupleType(stype.value()));
        }
        check_alias(fwd_name)?;
        check_alias(bwd_name)?;
        Ok(KnowledgeTuple {
            c1,
            stype,
            fwd_name: fwd_name.trim().to_string(),
            c2,
            bwd_name: bwd_name.trim().to_string(),
            context,
            negated: false,
        })
    }

    pub fn negate(mut self) -> Self {
        self.negated = true;
        self
    }

    /// Expands the tuple into its directed edges.
    ///
    /// The association and its reciprocal come first. Each context phrase
    /// then becomes its own hub `x` with the five links `c1->x`, `c2->x`,
    /// `x->c1`, `x->c2` and `x->root`, so the result has `2 + 5k` edges.
    pub fn expand(&self) -> Vec<AssociationEdge> {
        let main = AssociationEdge {
            from: self.c1.clone(),
            to: self.c2.clone(),
            stype: self.stype,
            fwd_name: self.fwd_name.clone(),
            bwd_name: self.bwd_name.clone(),
            context: self.context.clone(),
            negated: self.negated,
            weight: 1.0,
            last_updated: 0,
        };
        let mut edges = Vec::with_capacity(2 + 5 * self.context.len());
        edges.push(main.mirror());
        edges.insert(0, main);

        let contains = SignedAssocType::forward(3);
        for phrase in self.context.phrases() {
            // Phrases were validated as concept-safe when the set was built.
            let hub = ConceptToken::new(phrase).expect("validated phrase");
            let link = |from: &ConceptToken, to: &ConceptToken, pair: (&str, &str)| {
                AssociationEdge {
                    from: from.clone(),
                    to: to.clone(),
                    stype: contains,
                    fwd_name: pair.0.to_string(),
                    bwd_name: pair.1.to_string(),
                    context: ContextSet::empty(),
                    negated: false,
                    weight: 1.0,
                    last_updated: 0,
                }
            };
            let c1_in = link(&self.c1, &hub, CONTEXT_LINK);
            let c2_in = link(&self.c2, &hub, CONTEXT_LINK);
            let hub_out1 = c1_in.mirror();
            let hub_out2 = c2_in.mirror();
            edges.push(c1_in);
            edges.push(c2_in);
            edges.push(hub_out1);
            edges.push(hub_out2);
            edges.push(link(&hub, &ConceptToken::root(), MEMBER_LINK));
        }
        edges
    }
}

pub fn expand_tuple(t: &KnowledgeTuple) -> Vec<AssociationEdge> {
    t.expand()
}
