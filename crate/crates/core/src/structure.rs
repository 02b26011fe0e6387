//! Finite multi-hypergraphs over a vocabulary, with the structural
//! decompositions the limit theory is built on: excess, saturation,
//! centers, cores and hanging trees.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::vocabulary::{Edge, RelId, VertexId, Vocabulary};

pub const DEFAULT_SATURATION_CAP: usize = 20;
const SUBSET_ENUM_BUDGET: usize = 4_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("hypergraph is not connected")]
    NotConnected,
    #[error("saturation search on {size} vertices exceeds cap {cap}")]
    TooLargeForSaturation { size: usize, cap: usize },
    #[error("vertex {0} cannot reach the center of its component")]
    Unreachable(VertexId),
    #[error("expected a tree (connected, excess -1)")]
    NotATree,
    #[error("structure refers to vocabulary {got}, expected {want}")]
    VocabMismatch { want: String, got: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("type registry not enumerated for k={k}, r={r}")]
    RegistryMissing { k: usize, r: usize },
}

enum VertexIndex {
    /// Vertices are exactly `min..min+len`; index is offset arithmetic.
    Range { min: VertexId },
    Map(HashMap<VertexId, usize>),
}

/// An immutable σ-structure: vertex set plus per-relation sets of canonical
/// edges. Construct through [`HypergraphBuilder`], then freeze.
pub struct Hypergraph {
    vocab: Arc<Vocabulary>,
    vertices: Vec<VertexId>,
    index: VertexIndex,
    edges: Vec<Vec<Edge>>,
    /// Per dense vertex index: incident (relation, edge index) pairs,
    /// each edge listed once even if the vertex repeats in its tuple.
    incidence: Vec<Vec<(RelId, u32)>>,
}

impl Clone for Hypergraph {
    fn clone(&self) -> Self {
        Hypergraph::from_sorted_parts(self.vocab.clone(), self.vertices.clone(), self.edges.clone())
    }
}

impl std::fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Hypergraph(|V|={}, |E|=", self.vertices.len())?;
        let sizes: Vec<usize> = self.edges.iter().map(|e| e.len()).collect();
        write!(f, "{:?})", sizes)
    }
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.vocab.name == other.vocab.name
            && self.vertices == other.vertices
            && self.edges == other.edges
    }
}
impl Eq for Hypergraph {}

pub struct HypergraphBuilder {
    vocab: Arc<Vocabulary>,
    vertices: BTreeSet<VertexId>,
    edges: Vec<BTreeSet<Edge>>,
}

impl HypergraphBuilder {
    pub fn new(vocab: Arc<Vocabulary>) -> Self {
        let relations = vocab.relations.len();
        HypergraphBuilder {
            vocab,
            vertices: BTreeSet::new(),
            edges: vec![BTreeSet::new(); relations],
        }
    }

    pub fn add_vertex(&mut self, v: VertexId) -> &mut Self {
        self.vertices.insert(v);
        self
    }

    pub fn add_vertices(&mut self, vs: impl IntoIterator<Item = VertexId>) -> &mut Self {
        self.vertices.extend(vs);
        self
    }

    /// Canonicalizes and stores an edge; vertices are registered implicitly.
    /// Tuples excluded by anti-reflexivity are an error.
    pub fn add_edge(&mut self, rel: RelId, tuple: &[VertexId]) -> Result<&mut Self, StructureError> {
        let canon = self
            .vocab
            .canonical_edge(rel, tuple)
            .map_err(|e| StructureError::Parse(e.to_string()))?
            .ok_or(StructureError::Parse(format!(
                "tuple {:?} excluded by anti-reflexivity of {}",
                tuple, self.vocab.relations[rel].name
            )))?;
        self.vertices.extend(canon.iter().copied());
        self.edges[rel].insert(canon);
        Ok(self)
    }

    pub fn add_edge_by_name(
        &mut self,
        rel: &str,
        tuple: &[VertexId],
    ) -> Result<&mut Self, StructureError> {
        let id = self
            .vocab
            .relation_by_name(rel)
            .map_err(|e| StructureError::Parse(e.to_string()))?;
        self.add_edge(id, tuple)
    }

    pub fn freeze(self) -> Hypergraph {
        Hypergraph::from_sorted_parts(
            self.vocab,
            self.vertices.into_iter().collect(),
            self.edges
                .into_iter()
                .map(|set| set.into_iter().collect())
                .collect(),
        )
    }
}

impl Hypergraph {
    pub fn empty(vocab: Arc<Vocabulary>) -> Self {
        HypergraphBuilder::new(vocab).freeze()
    }

    /// `vertices` must be sorted and distinct; `edges` per relation must be
    /// sorted, distinct, canonical, and supported on `vertices`.
    pub(crate) fn from_sorted_parts(
        vocab: Arc<Vocabulary>,
        vertices: Vec<VertexId>,
        edges: Vec<Vec<Edge>>,
    ) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        let n = vertices.len();
        let index = if n > 0 && (vertices[n - 1] - vertices[0]) as usize == n - 1 {
            VertexIndex::Range { min: vertices[0] }
        } else {
            VertexIndex::Map(vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect())
        };
        let mut h = Hypergraph {
            vocab,
            vertices,
            index,
            edges,
            incidence: vec![Vec::new(); n],
        };
        for rel in 0..h.edges.len() {
            for (ei, edge) in h.edges[rel].iter().enumerate() {
                let mut last: Option<usize> = None;
                let mut sorted: Vec<usize> = edge
                    .iter()
                    .map(|&v| h.dense(v).expect("edge vertex in vertex set"))
                    .collect();
                sorted.sort_unstable();
                for vi in sorted {
                    if last != Some(vi) {
                        h.incidence[vi].push((rel, ei as u32));
                        last = Some(vi);
                    }
                }
            }
        }
        h
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn relation_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self, rel: RelId) -> &[Edge] {
        &self.edges[rel]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(|e| e.len()).sum()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.dense(v).is_some()
    }

    fn dense(&self, v: VertexId) -> Option<usize> {
        match &self.index {
            VertexIndex::Range { min } => {
                if v >= *min && ((v - min) as usize) < self.vertices.len() {
                    Some((v - min) as usize)
                } else {
                    None
                }
            }
            VertexIndex::Map(map) => map.get(&v).copied(),
        }
    }

    fn dense_or_err(&self, v: VertexId) -> Result<usize, StructureError> {
        self.dense(v).ok_or(StructureError::UnknownVertex(v))
    }

    pub fn incident_edges(&self, v: VertexId) -> impl Iterator<Item = (RelId, &Edge)> + '_ {
        let vi = self.dense(v);
        vi.into_iter().flat_map(move |vi| {
            self.incidence[vi]
                .iter()
                .map(move |&(rel, ei)| (rel, &self.edges[rel][ei as usize]))
        })
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.dense(v).map_or(0, |vi| self.incidence[vi].len())
    }

    /// Membership of the orbit of `tuple` in the stored edge set.
    pub fn has_edge_tuple(&self, rel: RelId, tuple: &[VertexId]) -> bool {
        match self.vocab.canonical_edge(rel, tuple) {
            Ok(Some(canon)) => self.edges[rel].binary_search(&canon).is_ok(),
            _ => false,
        }
    }

    /// ex(G) = sum over R of (ar(R)-1)|E_R(G)| - |V(G)|.
    pub fn excess(&self) -> i64 {
        let weighted: i64 = self
            .edges
            .iter()
            .enumerate()
            .map(|(rel, set)| (self.vocab.relations[rel].arity as i64 - 1) * set.len() as i64)
            .sum();
        weighted - self.vertices.len() as i64
    }

    /// Multi-source BFS over the Gaifman graph; `u32::MAX` marks unreachable.
    fn distance_from(&self, sources: &[usize]) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertices.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(vi) = queue.pop_front() {
            let d = dist[vi];
            for &(rel, ei) in &self.incidence[vi] {
                for &u in self.edges[rel][ei as usize].iter() {
                    let ui = self.dense(u).unwrap();
                    if dist[ui] == u32::MAX {
                        dist[ui] = d + 1;
                        queue.push_back(ui);
                    }
                }
            }
        }
        dist
    }

    /// Minimum number of edges of a connected sub-hypergraph containing both
    /// endpoints; `None` when they lie in different components.
    pub fn distance(&self, u: VertexId, v: VertexId) -> Result<Option<u32>, StructureError> {
        let ui = self.dense_or_err(u)?;
        let vi = self.dense_or_err(v)?;
        let dist = self.distance_from(&[ui]);
        Ok(match dist[vi] {
            u32::MAX => None,
            d => Some(d),
        })
    }

    /// Distance between vertex sets: min over pairs.
    pub fn distance_sets(
        &self,
        xs: &[VertexId],
        ys: &[VertexId],
    ) -> Result<Option<u32>, StructureError> {
        let sources: Vec<usize> = xs
            .iter()
            .map(|&x| self.dense_or_err(x))
            .collect::<Result<_, _>>()?;
        if sources.is_empty() || ys.is_empty() {
            return Ok(None);
        }
        let dist = self.distance_from(&sources);
        let mut best: Option<u32> = None;
        for &y in ys {
            let yi = self.dense_or_err(y)?;
            if dist[yi] != u32::MAX {
                best = Some(best.map_or(dist[yi], |b| b.min(dist[yi])));
            }
        }
        Ok(best)
    }

    /// N(X; r): all vertices within distance r of the set X.
    pub fn neighborhood(&self, xs: &[VertexId], r: usize) -> Result<Vec<VertexId>, StructureError> {
        let sources: Vec<usize> = xs
            .iter()
            .map(|&x| self.dense_or_err(x))
            .collect::<Result<_, _>>()?;
        let dist = self.distance_from(&sources);
        Ok(self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| (dist[i] as usize) <= r)
            .map(|(_, &v)| v)
            .collect())
    }

    /// Induced sub-hypergraph: keeps exactly the edges supported inside `us`.
    pub fn induced(&self, us: &[VertexId]) -> Result<Hypergraph, StructureError> {
        // For small subsets, walk incidence lists instead of the full edge set.
        if us.len() * 8 < self.vertices.len() {
            return self.induced_local(us);
        }
        let mut keep = vec![false; self.vertices.len()];
        let mut verts: Vec<VertexId> = Vec::with_capacity(us.len());
        for &u in us {
            let ui = self.dense_or_err(u)?;
            if !keep[ui] {
                keep[ui] = true;
                verts.push(u);
            }
        }
        verts.sort_unstable();
        let edges = self
            .edges
            .iter()
            .map(|set| {
                set.iter()
                    .filter(|e| e.iter().all(|&v| keep[self.dense(v).unwrap()]))
                    .cloned()
                    .collect()
            })
            .collect();
        Ok(Hypergraph::from_sorted_parts(self.vocab.clone(), verts, edges))
    }

    fn induced_local(&self, us: &[VertexId]) -> Result<Hypergraph, StructureError> {
        let mut verts: Vec<VertexId> = Vec::with_capacity(us.len());
        let mut set: HashSet<VertexId> = HashSet::with_capacity(us.len() * 2);
        for &u in us {
            self.dense_or_err(u)?;
            if set.insert(u) {
                verts.push(u);
            }
        }
        verts.sort_unstable();
        let mut edges: Vec<BTreeSet<Edge>> = vec![BTreeSet::new(); self.edges.len()];
        for &u in &verts {
            for (rel, e) in self.incident_edges(u) {
                if e.iter().all(|v| set.contains(v)) {
                    edges[rel].insert(e.clone());
                }
            }
        }
        Ok(Hypergraph::from_sorted_parts(
            self.vocab.clone(),
            verts,
            edges.into_iter().map(|s| s.into_iter().collect()).collect(),
        ))
    }

    /// Vertices within distance r of `v`, via a bounded BFS that touches
    /// only the ball (no O(n) scratch).
    fn ball_vertices(&self, v: VertexId, r: usize) -> Vec<VertexId> {
        let mut dist: HashMap<VertexId, u32> = HashMap::new();
        dist.insert(v, 0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            if d as usize >= r {
                continue;
            }
            for (rel, ei) in self
                .incidence[self.dense(u).unwrap()]
                .iter()
                .map(|&(rel, ei)| (rel, ei as usize))
            {
                for &w in self.edges[rel][ei].iter() {
                    if !dist.contains_key(&w) {
                        dist.insert(w, d + 1);
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut out: Vec<VertexId> = dist.into_keys().collect();
        out.sort_unstable();
        out
    }

    /// True when the induced ball of radius r around v is a tree; a vertex
    /// can only lie in a saturated sub-hypergraph of diameter <= r if its
    /// ball is not a tree, so this is the cheap pre-filter for the search.
    fn ball_is_tree(&self, v: VertexId, r: usize) -> bool {
        let ball = self.ball_vertices(v, r);
        let set: HashSet<VertexId> = ball.iter().copied().collect();
        let mut edges = 0i64;
        let mut weight = 0i64;
        let mut seen: HashSet<(RelId, u32)> = HashSet::new();
        for &u in &ball {
            for &(rel, ei) in &self.incidence[self.dense(u).unwrap()] {
                if seen.contains(&(rel, ei)) {
                    continue;
                }
                let e = &self.edges[rel][ei as usize];
                if e.iter().all(|w| set.contains(w)) {
                    seen.insert((rel, ei));
                    edges += 1;
                    weight += e.len() as i64 - 1;
                }
            }
        }
        let _ = edges;
        weight - ball.len() as i64 == -1
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let dist = self.distance_from(&[0]);
        dist.iter().all(|&d| d != u32::MAX)
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let labels = self.component_labels();
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut comps = vec![Vec::new(); count];
        for (i, &v) in self.vertices.iter().enumerate() {
            comps[labels[i]].push(v);
        }
        comps
    }

    fn component_labels(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(vi) = queue.pop_front() {
                for &(rel, ei) in &self.incidence[vi] {
                    for &u in self.edges[rel][ei as usize].iter() {
                        let ui = self.dense(u).unwrap();
                        if label[ui] == usize::MAX {
                            label[ui] = next;
                            queue.push_back(ui);
                        }
                    }
                }
            }
            next += 1;
        }
        label
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Tree,
    Unicycle,
    Dense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComponentClass {
    pub kind: ComponentKind,
    pub saturated: bool,
    /// Saturated unicycle.
    pub cycle: bool,
}

/// Bookkeeping for iterated removal of pendant tree appendages.
///
/// An edge is prunable when its tuple has no repeated vertices and exactly
/// arity-1 of its vertices are unmarked with no other incident edge; removing
/// the edge together with those vertices keeps the excess of the component
/// unchanged. The fixpoint restricted to a component of excess >= 0 is its
/// maximal saturated sub-hypergraph extended minimally toward the marks.
struct Pruner<'a> {
    h: &'a Hypergraph,
    alive_vertex: Vec<bool>,
    alive_edge: Vec<Vec<bool>>,
    degree: Vec<u32>,
    marked: Vec<bool>,
}

impl<'a> Pruner<'a> {
    fn new(h: &'a Hypergraph, marks: &[VertexId]) -> Result<Self, StructureError> {
        let n = h.vertices.len();
        let mut marked = vec![false; n];
        for &m in marks {
            marked[h.dense_or_err(m)?] = true;
        }
        let mut degree = vec![0u32; n];
        for inc in h.incidence.iter().enumerate() {
            degree[inc.0] = inc.1.len() as u32;
        }
        Ok(Pruner {
            h,
            alive_vertex: vec![true; n],
            alive_edge: h.edges.iter().map(|set| vec![true; set.len()]).collect(),
            degree,
            marked,
        })
    }

    fn prunable(&self, rel: RelId, ei: usize) -> Option<Vec<usize>> {
        let edge = &self.h.edges[rel][ei];
        let arity = edge.len();
        let mut seen: Vec<usize> = Vec::with_capacity(arity);
        for &v in edge.iter() {
            let vi = self.h.dense(v).unwrap();
            if seen.contains(&vi) {
                return None; // repeated vertex: never a tree appendage
            }
            seen.push(vi);
        }
        let removable: Vec<usize> = seen
            .iter()
            .copied()
            .filter(|&vi| self.degree[vi] == 1 && !self.marked[vi])
            .collect();
        (removable.len() == arity - 1).then_some(removable)
    }

    fn run(&mut self) {
        let mut queue: VecDeque<(RelId, usize)> = VecDeque::new();
        for rel in 0..self.h.edges.len() {
            for ei in 0..self.h.edges[rel].len() {
                queue.push_back((rel, ei));
            }
        }
        while let Some((rel, ei)) = queue.pop_front() {
            if !self.alive_edge[rel][ei] {
                continue;
            }
            let Some(removable) = self.prunable(rel, ei) else {
                continue;
            };
            self.alive_edge[rel][ei] = false;
            let mut touched: Vec<usize> = Vec::new();
            for &v in self.h.edges[rel][ei].iter() {
                let vi = self.h.dense(v).unwrap();
                if !touched.contains(&vi) {
                    touched.push(vi);
                    self.degree[vi] -= 1;
                }
            }
            for vi in removable {
                self.alive_vertex[vi] = false;
            }
            // The attachment vertex may now sit on a new pendant edge.
            for vi in touched {
                if self.alive_vertex[vi] && self.degree[vi] == 1 {
                    if let Some(&(r2, e2)) = self
                        .h
                        .incidence[vi]
                        .iter()
                        .find(|&&(r2, e2)| self.alive_edge[r2][e2 as usize])
                    {
                        queue.push_back((r2, e2 as usize));
                    }
                }
            }
        }
    }

    fn surviving(self) -> (Vec<bool>, Vec<Vec<bool>>) {
        (self.alive_vertex, self.alive_edge)
    }
}

impl Hypergraph {
    fn assemble(&self, keep_vertex: &[bool], keep_edge: &[Vec<bool>]) -> Hypergraph {
        let verts: Vec<VertexId> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| keep_vertex[i])
            .map(|(_, &v)| v)
            .collect();
        let edges: Vec<Vec<Edge>> = self
            .edges
            .iter()
            .enumerate()
            .map(|(rel, set)| {
                set.iter()
                    .enumerate()
                    .filter(|&(ei, _)| keep_edge[rel][ei])
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        Hypergraph::from_sorted_parts(self.vocab.clone(), verts, edges)
    }

    /// Classification of a connected hypergraph. The saturation test is the
    /// pendant-edge criterion, linear in the size of the input; the subset
    /// brute force in [`oracle`] cross-checks it on small instances.
    pub fn classify_component(&self) -> Result<ComponentClass, StructureError> {
        if !self.is_connected() || self.vertices.is_empty() {
            return Err(StructureError::NotConnected);
        }
        let ex = self.excess();
        let kind = match ex {
            e if e < 0 => ComponentKind::Tree,
            0 => ComponentKind::Unicycle,
            _ => ComponentKind::Dense,
        };
        let saturated = ex >= 0 && self.pendant_free();
        Ok(ComponentClass {
            kind,
            saturated,
            cycle: saturated && ex == 0,
        })
    }

    fn pendant_free(&self) -> bool {
        let pruner = Pruner::new(self, &[]).expect("no marks");
        for rel in 0..self.edges.len() {
            for ei in 0..self.edges[rel].len() {
                if pruner.prunable(rel, ei).is_some() {
                    return false;
                }
            }
        }
        true
    }

    /// Center(H, pins): per component, the maximal saturated sub-hypergraph
    /// of equal excess (empty when the excess is negative), extended
    /// minimally to connect the pinned vertices of that component.
    pub fn center(&self, pins: &[VertexId]) -> Result<Hypergraph, StructureError> {
        let mut pruner = Pruner::new(self, pins)?;
        pruner.run();
        let (mut keep_vertex, mut keep_edge) = pruner.surviving();
        // Drop the remains of tree components that hold no pin: their center
        // is empty, but pruning cannot erase a final markless edge.
        let labels = self.component_labels();
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut comp_ex = vec![0i64; count];
        let mut comp_pinned = vec![false; count];
        for (i, &v) in self.vertices.iter().enumerate() {
            comp_ex[labels[i]] -= 1;
            if pins.contains(&v) {
                comp_pinned[labels[i]] = true;
            }
        }
        for (rel, set) in self.edges.iter().enumerate() {
            let w = self.vocab.relations[rel].arity as i64 - 1;
            for e in set {
                comp_ex[labels[self.dense(e[0]).unwrap()]] += w;
            }
        }
        for (i, keep) in keep_vertex.iter_mut().enumerate() {
            if comp_ex[labels[i]] < 0 && !comp_pinned[labels[i]] {
                *keep = false;
            }
        }
        for (rel, flags) in keep_edge.iter_mut().enumerate() {
            for (ei, keep) in flags.iter_mut().enumerate() {
                if *keep {
                    let c = labels[self.dense(self.edges[rel][ei][0]).unwrap()];
                    if comp_ex[c] < 0 && !comp_pinned[c] {
                        *keep = false;
                    }
                }
            }
        }
        Ok(self.assemble(&keep_vertex, &keep_edge))
    }

    /// All vertices lying in some saturated sub-hypergraph of diameter <= d.
    ///
    /// Components of excess 0 prune to their unique cycle. For components of
    /// higher excess the search runs inside radius-d balls of the pruned
    /// part; exhaustive subset enumeration is used only on pieces below
    /// `cap` vertices.
    pub fn saturated_vertices(&self, d: usize, cap: usize) -> Result<Vec<VertexId>, StructureError> {
        let mut pruner = Pruner::new(self, &[])?;
        pruner.run();
        let (alive_vertex, alive_edge) = pruner.surviving();
        let labels = self.component_labels();
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);

        let mut comp_alive: Vec<Vec<VertexId>> = vec![Vec::new(); count];
        for (i, &v) in self.vertices.iter().enumerate() {
            if alive_vertex[i] {
                comp_alive[labels[i]].push(v);
            }
        }
        let mut comp_ex = vec![0i64; count];
        for c in 0..count {
            comp_ex[c] = -(comp_alive[c].len() as i64);
        }
        for (rel, set) in self.edges.iter().enumerate() {
            let w = self.vocab.relations[rel].arity as i64 - 1;
            for (ei, e) in set.iter().enumerate() {
                if alive_edge[rel][ei] {
                    comp_ex[labels[self.dense(e[0]).unwrap()]] += w;
                }
            }
        }

        let mut out: BTreeSet<VertexId> = BTreeSet::new();
        for c in 0..count {
            if comp_alive[c].is_empty() || comp_ex[c] < 0 {
                continue;
            }
            let pruned = self.induced(&comp_alive[c])?;
            debug_assert_eq!(pruned.excess(), comp_ex[c]);
            if comp_ex[c] == 0 {
                if pruned.diameter_at_most(d) {
                    out.extend(pruned.vertices.iter().copied());
                }
            } else if pruned.vertex_count() <= cap {
                collect_saturated_subsets(&pruned, d, cap, &mut out)?;
            } else {
                for &v in pruned.vertices() {
                    if pruned.ball_is_tree(v, d) {
                        continue;
                    }
                    let ball = pruned.induced(&pruned.ball_vertices(v, d))?;
                    let mut inner = Pruner::new(&ball, &[])?;
                    inner.run();
                    let (kv, ke) = inner.surviving();
                    let q = ball.assemble(&kv, &ke);
                    if q.vertex_count() == 0 {
                        continue;
                    }
                    match q.excess() {
                        e if e < 0 => {}
                        0 => {
                            if q.diameter_at_most(d) {
                                out.extend(q.vertices.iter().copied());
                            }
                        }
                        _ => {
                            if q.vertex_count() <= cap {
                                collect_saturated_subsets(&q, d, cap, &mut out)?;
                            } else {
                                return Err(StructureError::TooLargeForSaturation {
                                    size: q.vertex_count(),
                                    cap,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    fn diameter_at_most(&self, d: usize) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        // eccentricity of any vertex bounds the diameter from below, so one
        // BFS rejects long or disconnected structures before the full scan
        let first = self.distance_from(&[0]);
        if first.iter().any(|&x| x == u32::MAX || x as usize > d) {
            return false;
        }
        for i in 1..self.vertices.len() {
            let dist = self.distance_from(&[i]);
            if dist.iter().any(|&x| x == u32::MAX || x as usize > d) {
                return false;
            }
        }
        true
    }

    /// Core(H, pins; r) = induced N(X; r) where X joins the pins with every
    /// vertex of a saturated sub-hypergraph of diameter <= 2r+1.
    pub fn core(&self, pins: &[VertexId], r: usize) -> Result<Hypergraph, StructureError> {
        self.core_with_cap(pins, r, DEFAULT_SATURATION_CAP)
    }

    pub fn core_with_cap(
        &self,
        pins: &[VertexId],
        r: usize,
        cap: usize,
    ) -> Result<Hypergraph, StructureError> {
        let mut x = self.saturated_vertices(2 * r + 1, cap)?;
        for &p in pins {
            self.dense_or_err(p)?;
            x.push(p);
        }
        x.sort_unstable();
        x.dedup();
        if x.is_empty() {
            return Ok(Hypergraph::empty(self.vocab.clone()));
        }
        let region = self.neighborhood(&x, r)?;
        self.induced(&region)
    }

    /// Tr(H, pins; v): the hanging tree at v, i.e. the vertices whose only
    /// path to Center(H, pins) passes through v, rooted at v.
    pub fn hanging_tree(
        &self,
        pins: &[VertexId],
        v: VertexId,
    ) -> Result<RootedTree, StructureError> {
        self.dense_or_err(v)?;
        let center = self.center(pins)?;
        if center.vertices.is_empty() {
            return Err(StructureError::Unreachable(v));
        }
        let sources: Vec<usize> = center
            .vertices
            .iter()
            .map(|&u| self.dense(u).unwrap())
            .collect();
        let dc = self.distance_from(&sources);
        let vi = self.dense(v).unwrap();
        if dc[vi] == u32::MAX {
            return Err(StructureError::Unreachable(v));
        }
        let dv = self.distance_from(&[vi]);
        let members: Vec<VertexId> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| {
                dc[i] != u32::MAX && dv[i] != u32::MAX && dc[i] == dc[vi] + dv[i]
            })
            .map(|(_, &u)| u)
            .collect();
        let tree = self.induced(&members)?;
        RootedTree::new(tree, v)
    }

    /// Bounded form: Tr(Core(H, pins; r), pins; v).
    pub fn hanging_tree_bounded(
        &self,
        pins: &[VertexId],
        v: VertexId,
        r: usize,
    ) -> Result<RootedTree, StructureError> {
        let core = self.core(pins, r)?;
        if !core.contains_vertex(v) {
            return Err(StructureError::Unreachable(v));
        }
        let inner_pins: Vec<VertexId> = pins
            .iter()
            .copied()
            .filter(|&p| core.contains_vertex(p))
            .collect();
        core.hanging_tree(&inner_pins, v)
    }

    /// r-simple: all connected components of Core(H; r) are unicycles.
    pub fn is_r_simple(&self, r: usize, cap: usize) -> Result<bool, StructureError> {
        let core = self.core_with_cap(&[], r, cap)?;
        for comp in core.components() {
            let sub = core.induced(&comp)?;
            if sub.excess() != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// r-sparse: no dense sub-hypergraph of diameter <= r. The search space
    /// is reduced to the pruned cores; dense witnesses survive pruning.
    pub fn is_r_sparse(&self, r: usize, cap: usize) -> Result<bool, StructureError> {
        let mut pruner = Pruner::new(self, &[])?;
        pruner.run();
        let (alive_vertex, _alive_edge) = pruner.surviving();
        let labels = self.component_labels();
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut comp_alive: Vec<Vec<VertexId>> = vec![Vec::new(); count];
        for (i, &v) in self.vertices.iter().enumerate() {
            if alive_vertex[i] {
                comp_alive[labels[i]].push(v);
            }
        }
        for comp in comp_alive.into_iter().filter(|c| !c.is_empty()) {
            let pruned = self.induced(&comp)?;
            if pruned.excess() <= 0 {
                continue;
            }
            if pruned.vertex_count() <= cap {
                if has_dense_subset(&pruned, r)? {
                    return Ok(false);
                }
            } else {
                for &v in pruned.vertices() {
                    if pruned.ball_is_tree(v, r) {
                        continue;
                    }
                    let ball = pruned.induced(&pruned.ball_vertices(v, r))?;
                    let mut inner = Pruner::new(&ball, &[])?;
                    inner.run();
                    let (kv, ke) = inner.surviving();
                    let q = ball.assemble(&kv, &ke);
                    match q.excess() {
                        e if e <= 0 => {}
                        _ if q.vertex_count() <= cap => {
                            if has_dense_subset(&q, r)? {
                                return Ok(false);
                            }
                        }
                        _ => {
                            return Err(StructureError::TooLargeForSaturation {
                                size: q.vertex_count(),
                                cap,
                            })
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Enumerate connected induced subgraphs of a small hypergraph, adding the
/// vertices of every saturated one of diameter <= d to `out`.
fn collect_saturated_subsets(
    h: &Hypergraph,
    d: usize,
    _cap: usize,
    out: &mut BTreeSet<VertexId>,
) -> Result<(), StructureError> {
    let mut budget = SUBSET_ENUM_BUDGET;
    visit_connected_subsets(h, &mut budget, &mut |sub| {
        if sub.excess() >= 0 && sub.pendant_free() && sub.diameter_at_most(d) {
            out.extend(sub.vertices().iter().copied());
        }
    })
}

fn has_dense_subset(h: &Hypergraph, d: usize) -> Result<bool, StructureError> {
    let mut found = false;
    let mut budget = SUBSET_ENUM_BUDGET;
    visit_connected_subsets(h, &mut budget, &mut |sub| {
        if sub.excess() >= 1 && sub.diameter_at_most(d) {
            found = true;
        }
    })?;
    Ok(found)
}

/// Calls `visit` on the induced subgraph of every connected vertex subset.
fn visit_connected_subsets(
    h: &Hypergraph,
    budget: &mut usize,
    visit: &mut dyn FnMut(&Hypergraph),
) -> Result<(), StructureError> {
    let verts = h.vertices().to_vec();
    let n = verts.len();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut ns: Vec<usize> = h
                .incident_edges(verts[i])
                .flat_map(|(_, e)| e.iter().map(|&u| verts.binary_search(&u).unwrap()))
                .filter(|&u| u != i)
                .collect();
            ns.sort_unstable();
            ns.dedup();
            ns
        })
        .collect();
    // Standard rooted enumeration: subsets whose minimum vertex is `start`.
    fn rec(
        h: &Hypergraph,
        verts: &[VertexId],
        neighbors: &[Vec<usize>],
        start: usize,
        current: &mut Vec<usize>,
        frontier: Vec<usize>,
        blocked: &mut Vec<bool>,
        budget: &mut usize,
        visit: &mut dyn FnMut(&Hypergraph),
    ) -> Result<(), StructureError> {
        if *budget == 0 {
            return Err(StructureError::BudgetExceeded(
                "connected subset enumeration".into(),
            ));
        }
        *budget -= 1;
        let members: Vec<VertexId> = current.iter().map(|&i| verts[i]).collect();
        let sub = h.induced(&members).expect("subset vertices exist");
        visit(&sub);
        for (pos, &f) in frontier.iter().enumerate() {
            if blocked[f] {
                continue;
            }
            current.push(f);
            blocked[f] = true;
            let mut next: Vec<usize> = frontier[pos + 1..]
                .iter()
                .copied()
                .filter(|&x| !blocked[x])
                .collect();
            for &nb in &neighbors[f] {
                if nb > start && !blocked[nb] && !current.contains(&nb) && !next.contains(&nb) {
                    next.push(nb);
                }
            }
            rec(h, verts, neighbors, start, current, next, blocked, budget, visit)?;
            current.pop();
        }
        // unblock only the ones blocked at this level
        for &f in &frontier {
            blocked[f] = false;
        }
        Ok(())
    }
    for start in 0..n {
        let mut blocked = vec![false; n];
        for b in blocked.iter_mut().take(start) {
            *b = true;
        }
        let mut current = vec![start];
        blocked[start] = true;
        let frontier: Vec<usize> = neighbors[start]
            .iter()
            .copied()
            .filter(|&x| x > start)
            .collect();
        rec(
            h, &verts, &neighbors, start, &mut current, frontier, &mut blocked, budget, visit,
        )?;
    }
    Ok(())
}

/// A tree (connected, excess -1) with a distinguished root.
#[derive(Clone, Debug, PartialEq)]
pub struct RootedTree {
    pub tree: Hypergraph,
    pub root: VertexId,
}

impl RootedTree {
    pub fn new(tree: Hypergraph, root: VertexId) -> Result<Self, StructureError> {
        if !tree.contains_vertex(root) {
            return Err(StructureError::UnknownVertex(root));
        }
        if !tree.is_connected() || tree.excess() != -1 {
            return Err(StructureError::NotATree);
        }
        Ok(RootedTree { tree, root })
    }

    pub fn single_vertex(vocab: Arc<Vocabulary>, v: VertexId) -> Self {
        let mut b = HypergraphBuilder::new(vocab);
        b.add_vertex(v);
        RootedTree {
            tree: b.freeze(),
            root: v,
        }
    }

    pub fn radius(&self) -> usize {
        let ri = self.tree.dense(self.root).unwrap();
        self.tree
            .distance_from(&[ri])
            .into_iter()
            .max()
            .unwrap_or(0) as usize
    }

    /// Depth of every vertex from the root.
    pub fn depths(&self) -> HashMap<VertexId, u32> {
        let ri = self.tree.dense(self.root).unwrap();
        let dist = self.tree.distance_from(&[ri]);
        self.tree
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, dist[i]))
            .collect()
    }

    /// Initial edges: the edges containing the root.
    pub fn initial_edges(&self) -> Vec<(RelId, Edge)> {
        self.tree
            .incident_edges(self.root)
            .map(|(rel, e)| (rel, e.clone()))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// line-oriented serialization

impl Hypergraph {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("vocab {}\n", self.vocab.name));
        out.push_str("vertices");
        for v in &self.vertices {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
        for (rel, set) in self.edges.iter().enumerate() {
            let name = &self.vocab.relations[rel].name;
            for e in set {
                out.push_str(&format!("edge {name}"));
                for v in e.iter() {
                    out.push_str(&format!(" {v}"));
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str, vocab: Arc<Vocabulary>) -> Result<Hypergraph, StructureError> {
        let mut builder = HypergraphBuilder::new(vocab.clone());
        let mut saw_vocab = false;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("vocab") => {
                    let name = parts
                        .next()
                        .ok_or_else(|| StructureError::Parse(format!("line {}: missing vocab name", lineno + 1)))?;
                    if name != vocab.name {
                        return Err(StructureError::VocabMismatch {
                            want: vocab.name.clone(),
                            got: name.to_string(),
                        });
                    }
                    saw_vocab = true;
                }
                Some("vertices") => {
                    for tok in parts {
                        let v: VertexId = tok.parse().map_err(|_| {
                            StructureError::Parse(format!("line {}: bad vertex {tok}", lineno + 1))
                        })?;
                        builder.add_vertex(v);
                    }
                }
                Some("edge") => {
                    let rel = parts
                        .next()
                        .ok_or_else(|| StructureError::Parse(format!("line {}: missing relation", lineno + 1)))?;
                    let tuple: Vec<VertexId> = parts
                        .map(|tok| {
                            tok.parse().map_err(|_| {
                                StructureError::Parse(format!("line {}: bad vertex {tok}", lineno + 1))
                            })
                        })
                        .collect::<Result<_, _>>()?;
                    builder.add_edge_by_name(rel, &tuple)?;
                }
                Some(other) => {
                    return Err(StructureError::Parse(format!(
                        "line {}: unknown directive {other}",
                        lineno + 1
                    )))
                }
                None => {}
            }
        }
        if !saw_vocab {
            return Err(StructureError::Parse("missing vocab header".into()));
        }
        Ok(builder.freeze())
    }
}

// ---------------------------------------------------------------------------
// exponential reference implementations, kept independent of the production
// pruning path so tests can cross-check it

pub mod oracle {
    use super::*;

    /// Saturation by definition: every non-empty proper sub-hypergraph has
    /// strictly smaller excess. It suffices to check induced subgraphs on
    /// proper vertex subsets (edge-deletions only lower the excess).
    pub fn saturated(h: &Hypergraph) -> bool {
        let ex = h.excess();
        if ex < 0 || !h.is_connected() || h.vertices().is_empty() {
            return false;
        }
        let verts = h.vertices().to_vec();
        let n = verts.len();
        assert!(n <= 22, "oracle is exponential");
        for mask in 1u32..((1 << n) - 1) {
            let subset: Vec<VertexId> = (0..n)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| verts[i])
                .collect();
            let sub = h.induced(&subset).unwrap();
            if sub.excess() >= ex {
                return false;
            }
        }
        true
    }

    /// Minimal connected sub-hypergraph containing `targets`, by brute force
    /// over (vertex subset, edge subset) pairs; `None` if none exists.
    pub fn minimal_connected_containing(
        h: &Hypergraph,
        targets: &[VertexId],
    ) -> Option<Hypergraph> {
        let verts = h.vertices().to_vec();
        let n = verts.len();
        assert!(n <= 12, "oracle is exponential");
        let mut best: Option<Hypergraph> = None;
        let all_edges: Vec<(RelId, Edge)> = (0..h.relation_count())
            .flat_map(|rel| h.edges(rel).iter().map(move |e| (rel, e.clone())))
            .collect();
        let m = all_edges.len();
        assert!(m <= 12, "oracle is exponential");
        for emask in 0u32..(1 << m) {
            let chosen: Vec<&(RelId, Edge)> = (0..m)
                .filter(|&i| emask & (1 << i) != 0)
                .map(|i| &all_edges[i])
                .collect();
            let mut vs: BTreeSet<VertexId> = targets.iter().copied().collect();
            for (_, e) in &chosen {
                vs.extend(e.iter().copied());
            }
            let mut b = HypergraphBuilder::new(h.vocab().clone());
            b.add_vertices(vs.iter().copied());
            for (rel, e) in &chosen {
                b.add_edge(*rel, e).unwrap();
            }
            let cand = b.freeze();
            if !cand.is_connected() || cand.vertices().is_empty() {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => {
                    (cand.edge_count(), cand.vertex_count()) < (b.edge_count(), b.vertex_count())
                }
            };
            if better {
                best = Some(cand);
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocabulary::preset;

    fn graph() -> Arc<Vocabulary> {
        preset("graph").unwrap()
    }

    fn path3() -> Hypergraph {
        let mut b = HypergraphBuilder::new(graph());
        b.add_edge_by_name("E", &[1, 2]).unwrap();
        b.add_edge_by_name("E", &[2, 3]).unwrap();
        b.freeze()
    }

    fn triangle() -> Hypergraph {
        let mut b = HypergraphBuilder::new(graph());
        b.add_edge_by_name("E", &[1, 2]).unwrap();
        b.add_edge_by_name("E", &[2, 3]).unwrap();
        b.add_edge_by_name("E", &[1, 3]).unwrap();
        b.freeze()
    }

    #[test]
    fn excess_examples() {
        let mut b = HypergraphBuilder::new(graph());
        b.add_edge_by_name("E", &[1, 2]).unwrap();
        assert_eq!(b.freeze().excess(), -1);
        assert_eq!(triangle().excess(), 0);
        let v3 = preset("hypergraph3").unwrap();
        let mut b = HypergraphBuilder::new(v3);
        b.add_edge_by_name("E", &[1, 2, 3]).unwrap();
        assert_eq!(b.freeze().excess(), -1);
    }

    #[test]
    fn distance_examples() {
        let h = path3();
        assert_eq!(h.distance(1, 1).unwrap(), Some(0));
        assert_eq!(h.distance(1, 3).unwrap(), Some(2));
        let v3 = preset("hypergraph3").unwrap();
        let mut b = HypergraphBuilder::new(v3);
        b.add_edge_by_name("E", &[1, 2, 3]).unwrap();
        let h = b.freeze();
        assert_eq!(h.distance(1, 3).unwrap(), Some(1));
        assert!(matches!(
            h.distance(1, 99),
            Err(StructureError::UnknownVertex(99))
        ));
    }

    #[test]
    fn classify_examples() {
        let t = triangle();
        let c = t.classify_component().unwrap();
        assert_eq!(c.kind, ComponentKind::Unicycle);
        assert!(c.saturated && c.cycle);

        // triangle with a pendant edge is a unicycle but not saturated
        let mut b = HypergraphBuilder::new(graph());
        b.add_edge_by_name("E", &[1, 2]).unwrap();
        b.add_edge_by_name("E", &[2, 3]).unwrap();
        b.add_edge_by_name("E", &[1, 3]).unwrap();
        b.add_edge_by_name("E", &[3, 4]).unwrap();
        let h = b.freeze();
        let c = h.classify_component().unwrap();
        assert_eq!(c.kind, ComponentKind::Unicycle);
        assert!(!c.saturated && !c.cycle);

        let mut b = HypergraphBuilder::new(graph());
        b.add_vertex(7);
        let c = b.freeze().classify_component().unwrap();
        assert_eq!(c.kind, ComponentKind::Tree);
    }

    #[test]
    fn loop_edge_is_a_cycle() {
        let v = Arc::new(crate::vocabulary::Vocabulary::new(
            "loopy",
            vec![crate::vocabulary::Relation {
                name: "E".into(),
                arity: 2,
                group: crate::vocabulary::SymmetryGroup::trivial(2),
                anti_reflexive: crate::vocabulary::AntiReflexivePairs::none(),
            }],
        ));
        let mut b = HypergraphBuilder::new(v);
        b.add_edge_by_name("E", &[1, 1]).unwrap();
        let h = b.freeze();
        let c = h.classify_component().unwrap();
        assert_eq!(c.kind, ComponentKind::Unicycle);
        assert!(c.cycle);
    }

    #[test]
    fn center_examples() {
        // tree, no pins: empty
        let h = path3();
        assert_eq!(h.center(&[]).unwrap().vertex_count(), 0);
        // tree with pins at both ends: the path between them
        let c = h.center(&[1, 3]).unwrap();
        assert_eq!(c.vertices(), &[1, 2, 3]);
        assert_eq!(c.edge_count(), 2);
        // tree with a single pin: just that vertex
        let c = h.center(&[2]).unwrap();
        assert_eq!(c.vertices(), &[2]);
        assert_eq!(c.edge_count(), 0);
        // unicycle with pendant path: the triangle
        let mut b = HypergraphBuilder::new(graph());
        b.add_edge_by_name("E", &[1, 2]).unwrap();
        b.add_edge_by_name("E", &[2, 3]).unwrap();
        b.add_edge_by_name("E", &[1, 3]).unwrap();
        b.add_edge_by_name("E", &[3, 4]).unwrap();
        b.add_edge_by_name("E", &[4, 5]).unwrap();
        let h = b.freeze();
        let c = h.center(&[]).unwrap();
        assert_eq!(c.vertices(), &[1, 2, 3]);
    }

    #[test]
    fn core_examples() {
        // forest, no pins -> empty
        let h = path3();
        assert_eq!(h.core(&[], 1).unwrap().vertex_count(), 0);
        // triangle plus far-away path: radius-1 fringe of the triangle
        let mut b = HypergraphBuilder::new(graph());
        b.add_edge_by_name("E", &[1, 2]).unwrap();
        b.add_edge_by_name("E", &[2, 3]).unwrap();
        b.add_edge_by_name("E", &[1, 3]).unwrap();
        b.add_edge_by_name("E", &[3, 4]).unwrap();
        b.add_edge_by_name("E", &[4, 5]).unwrap();
        b.add_edge_by_name("E", &[10, 11]).unwrap();
        let h = b.freeze();
        let core = h.core(&[], 1).unwrap();
        assert_eq!(core.vertices(), &[1, 2, 3, 4]);
        // pinned vertex in a pure tree: N(pin; r)
        let core = h.core(&[10], 1).unwrap();
        assert!(core.contains_vertex(10) && core.contains_vertex(11));
    }

    #[test]
    fn hanging_tree_examples() {
        // star rooted at center
        let mut b = HypergraphBuilder::new(graph());
        b.add_edge_by_name("E", &[1, 2]).unwrap();
        b.add_edge_by_name("E", &[1, 3]).unwrap();
        b.add_edge_by_name("E", &[1, 4]).unwrap();
        let h = b.freeze();
        let t = h.hanging_tree_bounded(&[1], 1, 1).unwrap();
        assert_eq!(t.root, 1);
        assert_eq!(t.tree.vertex_count(), 4);

        // isolated vertex
        let mut b = HypergraphBuilder::new(graph());
        b.add_vertex(9);
        let h = b.freeze();
        let t = h.hanging_tree_bounded(&[9], 9, 2).unwrap();
        assert_eq!(t.tree.vertex_count(), 1);

        // triangle with pendant path at 3: Tr at 4 is the path 4-5
        let mut b = HypergraphBuilder::new(graph());
        b.add_edge_by_name("E", &[1, 2]).unwrap();
        b.add_edge_by_name("E", &[2, 3]).unwrap();
        b.add_edge_by_name("E", &[1, 3]).unwrap();
        b.add_edge_by_name("E", &[3, 4]).unwrap();
        b.add_edge_by_name("E", &[4, 5]).unwrap();
        let h = b.freeze();
        let t = h.hanging_tree(&[], 4).unwrap();
        assert_eq!(t.root, 4);
        assert_eq!(t.tree.vertices(), &[4, 5]);

        // unreachable: tree component with empty center
        assert!(matches!(
            path3().hanging_tree(&[], 2),
            Err(StructureError::Unreachable(2))
        ));
    }

    #[test]
    fn simplicity_examples() {
        assert!(path3().is_r_simple(1, 20).unwrap());
        assert!(path3().is_r_sparse(1, 20).unwrap());
        assert!(triangle().is_r_simple(1, 20).unwrap());
        // two triangles sharing a vertex: dense core component
        let mut b = HypergraphBuilder::new(graph());
        for (u, v) in [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (3, 5)] {
            b.add_edge_by_name("E", &[u, v]).unwrap();
        }
        let h = b.freeze();
        assert!(!h.is_r_simple(1, 20).unwrap());
        assert!(!h.is_r_sparse(3, 20).unwrap());
        assert_eq!(h.classify_component().unwrap().kind, ComponentKind::Dense);
        assert!(h.classify_component().unwrap().saturated);
    }

    #[test]
    fn long_cycle_does_not_enter_small_radius_core() {
        let mut b = HypergraphBuilder::new(graph());
        let n = 20;
        for i in 1..=n {
            b.add_edge_by_name("E", &[i, if i == n { 1 } else { i + 1 }])
                .unwrap();
        }
        let h = b.freeze();
        // C20 has diameter 10 > 3, so it is no (k,1)-cycle
        assert_eq!(h.core(&[], 1).unwrap().vertex_count(), 0);
        assert!(h.is_r_simple(1, 20).unwrap());
    }

    #[test]
    fn induced_identity_and_serialization_roundtrip() {
        let h = triangle();
        assert_eq!(h.induced(h.vertices()).unwrap(), h);
        let text = h.to_text();
        let back = Hypergraph::from_text(&text, h.vocab().clone()).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn center_matches_brute_force_on_random_corpus() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let vocab = graph();
        for _ in 0..300 {
            let n = rng.gen_range(2..=7u32);
            let mut b = HypergraphBuilder::new(vocab.clone());
            b.add_vertices(1..=n);
            let mut edge_count = 0;
            for u in 1..=n {
                for v in (u + 1)..=n {
                    if edge_count < 9 && rng.gen_bool(0.4) {
                        b.add_edge_by_name("E", &[u, v]).unwrap();
                        edge_count += 1;
                    }
                }
            }
            let h = b.freeze();
            if !h.is_connected() {
                continue;
            }
            // saturation: pendant criterion vs subset oracle
            let fast = h.classify_component().unwrap().saturated;
            assert_eq!(fast, oracle::saturated(&h), "{}", h.to_text());
            // center with no pins equals pruned max saturated part; check it
            // is saturated and of equal excess when the excess is >= 0
            let c = h.center(&[]).unwrap();
            if h.excess() >= 0 {
                assert_eq!(c.excess(), h.excess());
                assert!(oracle::saturated(&c), "{}", h.to_text());
            } else {
                assert_eq!(c.vertex_count(), 0);
            }
        }
    }

    #[test]
    fn excess_is_additive_over_disjoint_unions() {
        let mut b = HypergraphBuilder::new(graph());
        b.add_edge_by_name("E", &[1, 2]).unwrap();
        b.add_edge_by_name("E", &[10, 11]).unwrap();
        b.add_edge_by_name("E", &[11, 12]).unwrap();
        b.add_edge_by_name("E", &[10, 12]).unwrap();
        let h = b.freeze();
        let comps = h.components();
        let total: i64 = comps
            .iter()
            .map(|c| h.induced(c).unwrap().excess())
            .sum();
        assert_eq!(total, h.excess());
        for c in comps {
            assert!(h.induced(&c).unwrap().excess() >= -1);
        }
    }
}
