//! Story generation: depth-first typed traversal from a start concept with
//! context relevance, loop control and side annotations.
//!
//! Three modes share one walker:
//! - brainstorming: every maximal path out of the start concept;
//! - bounded search: every loop-free path from start to an end concept;
//! - inverse brainstorming: the same walk over the mirror graph, i.e.
//!   following associations backwards into the start concept.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::compound;
use crate::error::SearchError;
use crate::graph::{neighbor_order, Graph};
use crate::types::{AssociationEdge, ConceptToken, ContextSet};

/// Lexical overlap of a query context with the context an association was
/// learned under, as a percentage. An empty query admits everything.
pub fn relevance(current: &ContextSet, learned: &ContextSet) -> u8 {
    if current.is_empty() {
        return 100;
    }
    let a = current.tokens();
    let b = learned.tokens();
    let inter = a.intersection(b).count() as u64;
    let union = a.union(b).count() as u64;
    if union == 0 {
        return 100;
    }
    // round half up: floor((200 i + u) / 2u)
    ((200 * inter + union) / (2 * union)) as u8
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoopMode {
    /// A concept may appear once per path.
    #[default]
    PerPath,
    /// A concept may be reached once per search, across all paths.
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub start: String,
    pub end: Option<String>,
    /// Spine type magnitude, 1..=4.
    pub type_filter: Option<u8>,
    pub query_context: ContextSet,
    pub max_depth: usize,
    pub loop_mode: LoopMode,
    /// Minimum relevance (0..=100) for an edge to be followed.
    pub relevance_threshold: u8,
    /// With a type filter, also drop the off-spine ST4 annotations.
    pub strict_types: bool,
    /// Walk context-channel edges (concept/context-hub links) as steps.
    pub include_context_links: bool,
}

impl SearchOptions {
    pub fn new(start: impl Into<String>) -> Self {
        SearchOptions {
            start: start.into(),
            end: None,
            type_filter: None,
            query_context: ContextSet::empty(),
            max_depth: 10,
            loop_mode: LoopMode::PerPath,
            relevance_threshold: 0,
            strict_types: false,
            include_context_links: false,
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.max_depth == 0 {
            return Err(SearchError::ZeroDepth);
        }
        if let Some(m) = self.type_filter {
            if !(1..=4).contains(&m) {
                return Err(SearchError::BadTypeFilter(m));
            }
        }
        if self.relevance_threshold > 100 {
            return Err(SearchError::BadThreshold(self.relevance_threshold));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoryStep {
    pub depth: usize,
    pub edge: Arc<AssociationEdge>,
    pub reached: ConceptToken,
    pub relevance: u8,
    /// Side remarks printed under the step ("and also note ...").
    pub notes: Vec<Arc<AssociationEdge>>,
}

impl StoryStep {
    pub fn new(depth: usize, edge: impl Into<Arc<AssociationEdge>>, relevance: u8) -> Self {
        let edge = edge.into();
        StoryStep {
            depth,
            reached: edge.to.clone(),
            edge,
            relevance,
            notes: Vec::new(),
        }
    }

    fn same_step(&self, other: &StoryStep) -> bool {
        self.depth == other.depth
            && self.edge.from == other.edge.from
            && self.edge.stype == other.edge.stype
            && self.edge.key() == other.edge.key()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StoryPath {
    pub steps: Vec<StoryStep>,
}

impl StoryPath {
    /// Start concept followed by every reached concept. Empty for a
    /// zero-length path.
    pub fn concepts(&self) -> Vec<&ConceptToken> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        if let Some(first) = self.steps.first() {
            out.push(&first.edge.from);
        }
        out.extend(self.steps.iter().map(|s| &s.reached));
        out
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Mean step relevance; 100 for a zero-length path.
    pub fn mean_relevance(&self) -> f64 {
        if self.steps.is_empty() {
            return 100.0;
        }
        self.steps.iter().map(|s| f64::from(s.relevance)).sum::<f64>() / self.steps.len() as f64
    }

    /// Length of the shared leading run of steps with `other`.
    pub fn common_prefix(&self, other: &StoryPath) -> usize {
        self.steps
            .iter()
            .zip(&other.steps)
            .take_while(|(a, b)| a.same_step(b))
            .count()
    }
}

/// Resolves a user-supplied concept name: exact match first, then a
/// unique prefix.
pub fn resolve_concept(g: &Graph, name: &str) -> Result<ConceptToken, SearchError> {
    let name = name.trim();
    if name.is_empty() {
        return Err(SearchError::NoSuchConcept(name.to_string()));
    }
    if let Ok(c) = ConceptToken::new(name) {
        if g.contains(&c) {
            return Ok(c);
        }
    }
    let candidates: Vec<&ConceptToken> = g.nodes().filter(|c| c.as_str().starts_with(name)).collect();
    match candidates.as_slice() {
        [] => Err(SearchError::NoSuchConcept(name.to_string())),
        [one] => Ok((*one).clone()),
        many => Err(SearchError::Ambiguous {
            prefix: name.to_string(),
            candidates: many.iter().map(|c| c.to_string()).collect(),
        }),
    }
}

/// Fills `step.notes` when the step entered a role hub: the hub's other
/// fillers. Any other step is returned unchanged.
pub fn annotate(g: &Graph, step: StoryStep) -> StoryStep {
    let from = step.edge.from.clone();
    annotate_excluding(g, step, &|c| *c == from)
}

fn annotate_excluding(
    g: &Graph,
    mut step: StoryStep,
    excluded: &dyn Fn(&ConceptToken) -> bool,
) -> StoryStep {
    if !step.edge.is_role_edge() {
        return step;
    }
    let hub = &step.reached;
    for sibling in compound::role_siblings(g, hub) {
        if excluded(&sibling) {
            continue;
        }
        if let Some(e) = g
            .neighbors(hub, Some(4))
            .into_iter()
            .find(|e| e.is_role_filler_edge() && e.to == sibling)
        {
            step.notes.push(Arc::new(e.clone()));
        }
    }
    step
}

#[derive(Debug, Clone)]
struct Candidate {
    edge: Arc<AssociationEdge>,
    relevance: u8,
}

#[derive(Debug)]
struct Frame {
    candidates: Arc<[Candidate]>,
    next: usize,
    extended: bool,
}

/// Lazy depth-first story enumeration. Yields one [`StoryPath`] per
/// maximal admissible path (or per path reaching the end concept when one
/// is set), in deterministic order.
pub struct StoryWalker<'g> {
    graph: &'g Graph,
    opts: SearchOptions,
    start: ConceptToken,
    end: Option<ConceptToken>,
    reversed: Option<HashMap<ConceptToken, Vec<AssociationEdge>>>,
    /// Admissible out-edges per (concept, entered over a role edge).
    candidates: HashMap<(ConceptToken, bool), Arc<[Candidate]>>,
    side_notes: HashMap<ConceptToken, Arc<[Arc<AssociationEdge>]>>,
    stack: Vec<Frame>,
    path: Vec<StoryStep>,
    on_path: HashSet<ConceptToken>,
    visited: HashSet<ConceptToken>,
    pop_step: bool,
    pop_frame: bool,
    zero_length: bool,
}

impl<'g> StoryWalker<'g> {
    pub fn new(g: &'g Graph, opts: &SearchOptions, direction: Direction) -> Result<Self, SearchError> {
        opts.validate()?;
        let start = resolve_concept(g, &opts.start)?;
        let end = opts.end.as_deref().map(|e| resolve_concept(g, e)).transpose()?;
        let reversed = (direction == Direction::Inverse).then(|| mirror_index(g));
        let mut w = StoryWalker {
            graph: g,
            opts: opts.clone(),
            start: start.clone(),
            end,
            reversed,
            candidates: HashMap::new(),
            side_notes: HashMap::new(),
            stack: Vec::new(),
            path: Vec::new(),
            on_path: HashSet::new(),
            visited: HashSet::new(),
            pop_step: false,
            pop_frame: false,
            zero_length: false,
        };
        if w.end.as_ref() == Some(&start) {
            w.zero_length = true;
            return Ok(w);
        }
        w.on_path.insert(start.clone());
        w.visited.insert(start.clone());
        let root = w.frame(&start, None);
        w.stack.push(root);
        Ok(w)
    }

    /// The resolved start concept.
    pub fn subject(&self) -> &ConceptToken {
        &self.start
    }

    fn out_edges(&self, c: &ConceptToken) -> Vec<&AssociationEdge> {
        match &self.reversed {
            None => self.graph.neighbors(c, None),
            Some(idx) => idx.get(c).map(|v| v.iter().collect()).unwrap_or_default(),
        }
    }

    fn frame(&mut self, at: &ConceptToken, via: Option<&AssociationEdge>) -> Frame {
        let entered_role_hub = via.is_some_and(|e| e.is_role_edge());
        let key = (at.clone(), entered_role_hub);
        let candidates = match self.candidates.get(&key) {
            Some(c) => Arc::clone(c),
            None => {
                let c = self.admissible(at, entered_role_hub);
                self.candidates.insert(key, Arc::clone(&c));
                c
            }
        };
        Frame {
            candidates,
            next: 0,
            extended: false,
        }
    }

    fn admissible(&self, at: &ConceptToken, entered_role_hub: bool) -> Arc<[Candidate]> {
        self
            .out_edges(at)
            .into_iter()
            .filter(|e| self.opts.include_context_links || !e.is_context_link())
            .filter(|e| !(entered_role_hub && e.is_role_filler_edge()))
            .filter(|e| self.opts.type_filter.is_none_or(|m| e.stype.magnitude() == m))
            .filter_map(|e| {
                let r = relevance(&self.opts.query_context, &e.context);
                (r >= self.opts.relevance_threshold).then(|| Candidate {
                    edge: Arc::new(e.clone()),
                    relevance: r,
                })
            })
            .collect()
    }

    fn blocked(&self, c: &ConceptToken) -> bool {
        match self.opts.loop_mode {
            LoopMode::PerPath => self.on_path.contains(c),
            LoopMode::Global => self.visited.contains(c),
        }
    }

    /// Admissible expression (ST4) edges of `at`, shown as notes when the
    /// spine follows another type.
    fn side_notes(&mut self, at: &ConceptToken) -> Arc<[Arc<AssociationEdge>]> {
        if let Some(n) = self.side_notes.get(at) {
            return Arc::clone(n);
        }
        let notes: Arc<[Arc<AssociationEdge>]> = self
            .out_edges(at)
            .into_iter()
            .filter(|e| {
                e.stype.magnitude() == 4
                    && (self.opts.include_context_links || !e.is_context_link())
                    && relevance(&self.opts.query_context, &e.context) >= self.opts.relevance_threshold
            })
            .map(|e| Arc::new(e.clone()))
            .collect();
        self.side_notes.insert(at.clone(), Arc::clone(&notes));
        notes
    }

    fn make_step(&mut self, cand: Candidate) -> StoryStep {
        let step = StoryStep::new(self.path.len(), Arc::clone(&cand.edge), cand.relevance);
        let on_path = &self.on_path;
        let mut step = annotate_excluding(self.graph, step, &|c| on_path.contains(c));
        let off_spine = self
            .opts
            .type_filter
            .is_some_and(|m| m != 4 && !self.opts.strict_types);
        if off_spine {
            let notes = self.side_notes(&step.reached);
            step.notes.extend(
                notes
                    .iter()
                    .filter(|e| !self.on_path.contains(&e.to))
                    .map(Arc::clone),
            );
        }
        step
    }

    fn snapshot(&self) -> StoryPath {
        StoryPath {
            steps: self.path.clone(),
        }
    }

    fn pop_one_step(&mut self) {
        if let Some(s) = self.path.pop() {
            self.on_path.remove(&s.reached);
        }
    }
}

impl Iterator for StoryWalker<'_> {
    type Item = StoryPath;

    fn next(&mut self) -> Option<StoryPath> {
        if self.zero_length {
            self.zero_length = false;
            return Some(StoryPath::default());
        }
        loop {
            if self.pop_step {
                self.pop_step = false;
                self.pop_one_step();
            }
            if self.pop_frame {
                self.pop_frame = false;
                self.stack.pop();
                self.pop_one_step();
            }
            let frame = self.stack.last_mut()?;
            if frame.next < frame.candidates.len() {
                let cand = frame.candidates[frame.next].clone();
                frame.next += 1;
                let target = cand.edge.to.clone();
                if self.blocked(&target) {
                    continue;
                }
                if let Some(f) = self.stack.last_mut() {
                    f.extended = true;
                }
                let via = Arc::clone(&cand.edge);
                let step = self.make_step(cand);
                self.path.push(step);
                self.on_path.insert(target.clone());
                self.visited.insert(target.clone());

                if self.end.as_ref() == Some(&target) {
                    self.pop_step = true;
                    return Some(self.snapshot());
                }
                if self.path.len() >= self.opts.max_depth {
                    self.pop_step = true;
                    if self.end.is_none() {
                        return Some(self.snapshot());
                    }
                    continue;
                }
                let f = self.frame(&target, Some(&via));
                self.stack.push(f);
            } else {
                let emit = !frame.extended && !self.path.is_empty() && self.end.is_none();
                self.pop_frame = true;
                if emit {
                    return Some(self.snapshot());
                }
            }
        }
    }
}

/// Every edge `y -> x` re-read from `x`'s side, indexed by `x`.
fn mirror_index(g: &Graph) -> HashMap<ConceptToken, Vec<AssociationEdge>> {
    let mut idx: HashMap<ConceptToken, Vec<AssociationEdge>> = HashMap::new();
    for e in g.edges() {
        let m = e.mirror();
        idx.entry(m.from.clone()).or_default().push(m);
    }
    for v in idx.values_mut() {
        v.sort_by(neighbor_order);
    }
    idx
}

/// Open-ended exploration from `opts.start`. If `opts.end` is set this is
/// the same as [`bounded_search`].
pub fn brainstorm(g: &Graph, opts: &SearchOptions) -> Result<Vec<StoryPath>, SearchError> {
    Ok(StoryWalker::new(g, opts, Direction::Forward)?.collect())
}

/// All loop-free paths from `opts.start` to `opts.end` within the depth
/// bound, not only the shortest.
pub fn bounded_search(g: &Graph, opts: &SearchOptions) -> Result<Vec<StoryPath>, SearchError> {
    if opts.end.is_none() {
        return Err(SearchError::MissingEnd);
    }
    brainstorm(g, opts)
}

/// Brainstorming over the mirror graph: the ways one can arrive at
/// `opts.start`.
pub fn inverse_brainstorm(g: &Graph, opts: &SearchOptions) -> Result<Vec<StoryPath>, SearchError> {
    Ok(StoryWalker::new(g, opts, Direction::Inverse)?.collect())
}

pub fn count_outcomes(paths: &[StoryPath]) -> usize {
    paths.len()
}
