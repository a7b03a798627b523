//! In-memory graph index. Mirrors the on-disk layout: per concept, per
//! signed type, the set of outgoing associations.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::types::{AssociationEdge, ConceptToken, EdgeKey, KnowledgeTuple, SignedAssocType};

type Bucket = BTreeMap<EdgeKey, AssociationEdge>;

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    nodes: BTreeMap<ConceptToken, BTreeMap<SignedAssocType, Bucket>>,
}

impl Default for Graph {
    fn default() -> Self {
        Self::new()
    }
}

impl Graph {
    pub fn new() -> Self {
        let mut nodes = BTreeMap::new();
        nodes.insert(ConceptToken::root(), BTreeMap::new());
        Graph { nodes }
    }

    pub fn add_node(&mut self, c: ConceptToken) {
        self.nodes.entry(c).or_default();
    }

    pub fn contains(&self, c: &ConceptToken) -> bool {
        self.nodes.contains_key(c)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &ConceptToken> {
        self.nodes.keys()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of stored directed edges (each mirror half counts once).
    pub fn edge_count(&self) -> usize {
        self.nodes
            .values()
            .flat_map(|types| types.values())
            .map(BTreeMap::len)
            .sum()
    }

    /// All stored edges in storage order: by source, type, then key.
    pub fn edges(&self) -> impl Iterator<Item = &AssociationEdge> {
        self.nodes
            .values()
            .flat_map(|types| types.values())
            .flat_map(|bucket| bucket.values())
    }

    /// Outgoing edges of `c` grouped by type, in storage order.
    pub fn typed_edges(
        &self,
        c: &ConceptToken,
    ) -> impl Iterator<Item = (SignedAssocType, &AssociationEdge)> {
        self.nodes
            .get(c)
            .into_iter()
            .flat_map(|types| types.iter())
            .flat_map(|(t, bucket)| bucket.values().map(move |e| (*t, e)))
    }

    pub fn get(&self, from: &ConceptToken, stype: SignedAssocType, key: &EdgeKey) -> Option<&AssociationEdge> {
        self.nodes.get(from)?.get(&stype)?.get(key)
    }

    /// Stores one directed half exactly as given, creating both endpoints.
    /// Used by the loader; callers are responsible for the mirror half.
    pub fn put_half(&mut self, e: AssociationEdge) {
        self.add_node(e.to.clone());
        self.nodes
            .entry(e.from.clone())
            .or_default()
            .entry(e.stype)
            .or_default()
            .insert(e.key(), e);
    }

    /// Stores an edge and its mirror with the weight and timestamp given.
    pub fn put(&mut self, e: AssociationEdge) {
        let m = e.mirror();
        self.put_half(e);
        self.put_half(m);
    }

    /// Records one observation of `e`: a new association starts at weight 1,
    /// a known one gains 1. Either way its timestamp becomes `now`. The mirror
    /// half is kept identical.
    pub fn upsert_edge(&mut self, e: &AssociationEdge, now: i64) {
        let weight = self
            .get(&e.from, e.stype, &e.key())
            .map_or(1.0, |old| old.weight + 1.0);
        let mut e = e.clone();
        e.weight = weight;
        e.last_updated = now;
        self.put(e);
    }

    /// Learns a tuple: every edge of its expansion is upserted once, with the
    /// mirrors that the expansion lists itself not counted twice.
    pub fn learn(&mut self, t: &KnowledgeTuple, now: i64) {
        let mut seen: HashSet<(ConceptToken, SignedAssocType, EdgeKey)> = HashSet::new();
        for e in t.expand() {
            let m = e.mirror();
            if seen.contains(&(m.from.clone(), m.stype, m.key())) {
                continue;
            }
            seen.insert((e.from.clone(), e.stype, e.key()));
            self.upsert_edge(&e, now);
        }
    }

    /// Outgoing edges of `c`, optionally restricted to one magnitude (both
    /// signs), ordered by weight descending, then target, then alias.
    pub fn neighbors(&self, c: &ConceptToken, magnitude: Option<u8>) -> Vec<&AssociationEdge> {
        let mut out: Vec<&AssociationEdge> = self
            .typed_edges(c)
            .filter(|(t, _)| magnitude.is_none_or(|m| t.magnitude() == m))
            .map(|(_, e)| e)
            .collect();
        out.sort_by(|a, b| neighbor_order(a, b));
        out
    }

    /// Removes every edge that is both weak (`weight < min_weight`) and stale
    /// (older than `max_age` seconds). Nodes left without edges go too, except
    /// the root. Returns the number of directed edges removed.
    pub fn gc(&mut self, min_weight: f64, max_age: i64, now: i64) -> usize {
        let doomed = |e: &AssociationEdge| e.weight < min_weight && now - e.last_updated > max_age;
        let mut victims: Vec<(ConceptToken, SignedAssocType, EdgeKey)> = Vec::new();
        for e in self.edges() {
            if doomed(e) || doomed(&e.mirror()) {
                victims.push((e.from.clone(), e.stype, e.key()));
                let m = e.mirror();
                victims.push((m.from.clone(), m.stype, m.key()));
            }
        }
        let mut removed = 0;
        for (from, t, key) in victims {
            if let Some(bucket) = self.nodes.get_mut(&from).and_then(|ts| ts.get_mut(&t)) {
                if bucket.remove(&key).is_some() {
                    removed += 1;
                }
            }
        }
        for types in self.nodes.values_mut() {
            types.retain(|_, bucket| !bucket.is_empty());
        }
        let linked: BTreeSet<ConceptToken> = self.edges().map(|e| e.to.clone()).collect();
        self.nodes
            .retain(|c, types| c.is_root() || !types.is_empty() || linked.contains(c));
        removed
    }

    /// Every stored edge has its mirror stored with equal weight and time.
    pub fn is_mirror_consistent(&self) -> bool {
        self.edges().all(|e| {
            let m = e.mirror();
            self.get(&m.from, m.stype, &m.key())
                .is_some_and(|s| s.weight == e.weight && s.last_updated == e.last_updated)
        })
    }
}

pub(crate) fn neighbor_order(a: &AssociationEdge, b: &AssociationEdge) -> std::cmp::Ordering {
    b.weight
        .total_cmp(&a.weight)
        .then_with(|| a.to.cmp(&b.to))
        .then_with(|| a.fwd_name.cmp(&b.fwd_name))
        .then_with(|| a.stype.cmp(&b.stype))
        .then_with(|| a.key().cmp(&b.key()))
}

pub fn upsert_edge(g: &mut Graph, e: &AssociationEdge, now: i64) {
    g.upsert_edge(e, now)
}

pub fn neighbors<'g>(g: &'g Graph, c: &ConceptToken, magnitude: Option<u8>) -> Vec<&'g AssociationEdge> {
    g.neighbors(c, magnitude)
}

pub fn gc(g: &mut Graph, min_weight: f64, max_age: i64, now: i64) -> usize {
    g.gc(min_weight, max_age, now)
}
