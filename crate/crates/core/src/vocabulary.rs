//! Relational vocabularies: relation symbols with symmetry groups and
//! anti-reflexivity constraints, plus the orbit combinatorics of the edge
//! space they induce.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertices are arbitrary integer ids so that induced sub-hypergraphs keep
/// their identity.
pub type VertexId = u32;

/// Index of a relation within its vocabulary.
pub type RelId = usize;

/// Hard cap on relation arity; orbit enumeration is factorial in the arity.
pub const DEFAULT_MAX_ARITY: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VocabError {
    #[error("relation {relation}: permutation set is not a group ({reason})")]
    NonGroup { relation: String, reason: String },
    #[error("relation {relation}: bad anti-reflexivity pair ({i}, {j})")]
    BadPair { relation: String, i: usize, j: usize },
    #[error("relation {relation}: arity mismatch ({detail})")]
    ArityMismatch { relation: String, detail: String },
    #[error("relation {relation}: arity {arity} out of range 2..={max}")]
    ArityOutOfRange {
        relation: String,
        arity: usize,
        max: usize,
    },
    #[error("duplicate relation name {0}")]
    DuplicateName(String),
    #[error("unknown relation {0}")]
    UnknownRelation(String),
    #[error("tuple length {got} does not match arity {want}")]
    LengthMismatch { want: usize, got: usize },
}

/// A permutation of tuple positions `0..arity`, stored as the image list:
/// applying `g` to a tuple `t` yields `t'[i] = t[g[i]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(arity: usize) -> Self {
        Permutation((0..arity).collect())
    }

    pub fn is_valid(&self, arity: usize) -> bool {
        if self.0.len() != arity {
            return false;
        }
        let mut seen = vec![false; arity];
        for &i in &self.0 {
            if i >= arity || seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }

    pub fn apply<T: Copy>(&self, tuple: &[T]) -> Vec<T> {
        self.0.iter().map(|&i| tuple[i]).collect()
    }

    /// `self.then(other)` acts like applying `self` first, then `other`:
    /// `(self.then(other)).apply(t) == other.apply(&self.apply(t))`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }
}

/// A group of position permutations, kept sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryGroup {
    arity: usize,
    elements: Vec<Permutation>,
}

impl SymmetryGroup {
    pub fn trivial(arity: usize) -> Self {
        SymmetryGroup {
            arity,
            elements: vec![Permutation::identity(arity)],
        }
    }

    pub fn symmetric(arity: usize) -> Self {
        let mut gens = Vec::new();
        for i in 0..arity.saturating_sub(1) {
            let mut p: Vec<usize> = (0..arity).collect();
            p.swap(i, i + 1);
            gens.push(Permutation(p));
        }
        Self::from_generators(arity, &gens)
    }

    /// Closure of a generator set under composition.
    pub fn from_generators(arity: usize, generators: &[Permutation]) -> Self {
        let mut set: BTreeSet<Permutation> = BTreeSet::new();
        set.insert(Permutation::identity(arity));
        let mut frontier: Vec<Permutation> = vec![Permutation::identity(arity)];
        while let Some(g) = frontier.pop() {
            for gen in generators {
                let h = g.then(gen);
                if set.insert(h.clone()) {
                    frontier.push(h);
                }
            }
        }
        SymmetryGroup {
            arity,
            elements: set.into_iter().collect(),
        }
    }

    pub fn from_elements(arity: usize, elements: Vec<Permutation>) -> Self {
        let set: BTreeSet<Permutation> = elements.into_iter().collect();
        SymmetryGroup {
            arity,
            elements: set.into_iter().collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// Exhaustive group-axiom check: identity, closure, inverses.
    pub fn check(&self) -> Result<(), String> {
        if self.elements.is_empty() {
            return Err("empty element set".into());
        }
        for p in &self.elements {
            if !p.is_valid(self.arity) {
                return Err(format!("invalid permutation {:?}", p.0));
            }
        }
        let set: HashSet<&Permutation> = self.elements.iter().collect();
        if !set.contains(&Permutation::identity(self.arity)) {
            return Err("identity missing".into());
        }
        for g in &self.elements {
            if !set.contains(&g.inverse()) {
                return Err(format!("inverse of {:?} missing", g.0));
            }
            for h in &self.elements {
                if !set.contains(&g.then(h)) {
                    return Err(format!("composition {:?}*{:?} escapes the set", g.0, h.0));
                }
            }
        }
        Ok(())
    }
}

/// Unordered position pairs {i, j} (0-based, i < j) on which repeated
/// vertices are forbidden.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntiReflexivePairs(pub BTreeSet<(usize, usize)>);

impl AntiReflexivePairs {
    pub fn none() -> Self {
        AntiReflexivePairs(BTreeSet::new())
    }

    pub fn all(arity: usize) -> Self {
        let mut pairs = BTreeSet::new();
        for i in 0..arity {
            for j in (i + 1)..arity {
                pairs.insert((i, j));
            }
        }
        AntiReflexivePairs(pairs)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        AntiReflexivePairs(
            pairs
                .into_iter()
                .map(|(i, j)| if i < j { (i, j) } else { (j, i) })
                .collect(),
        )
    }

    pub fn forbids<T: PartialEq>(&self, tuple: &[T]) -> bool {
        self.0.iter().any(|&(i, j)| tuple[i] == tuple[j])
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
    pub group: SymmetryGroup,
    pub anti_reflexive: AntiReflexivePairs,
}

/// A canonical edge: the lexicographically minimal tuple in its group orbit.
pub type Edge = Box<[VertexId]>;

/// One repetition pattern of an edge orbit class: positions partitioned into
/// blocks of equal vertices, together with the exact orbit count
/// `c * (n)_d` it contributes to `|E_R[n]|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPattern {
    /// Partition of `0..arity` into blocks; blocks sorted by least position.
    pub blocks: Vec<Vec<usize>>,
    /// Number of blocks (distinct vertices in a tuple of this pattern).
    pub distinct: usize,
    /// Distinct orbits realized over a ground set of exactly `distinct`
    /// labels; the rational constant is `orbits_on_ground / distinct!`.
    pub orbits_on_ground: u64,
}

impl OrbitPattern {
    pub fn constant(&self) -> Ratio<u64> {
        Ratio::new(self.orbits_on_ground, factorial(self.distinct as u64))
    }

    /// Exact orbit count over `[n]`: `orbits_on_ground * C(n, distinct)`.
    pub fn count(&self, n: u64) -> u128 {
        self.orbits_on_ground as u128 * binomial(n, self.distinct as u64)
    }
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Vocabulary {
    pub name: String,
    pub relations: Vec<Relation>,
    #[serde(default = "default_max_arity")]
    pub max_arity: usize,
}

fn default_max_arity() -> usize {
    DEFAULT_MAX_ARITY
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl Vocabulary {
    pub fn new(name: impl Into<String>, relations: Vec<Relation>) -> Self {
        Vocabulary {
            name: name.into(),
            relations,
            max_arity: DEFAULT_MAX_ARITY,
        }
    }

    pub fn relation(&self, id: RelId) -> &Relation {
        &self.relations[id]
    }

    pub fn relation_by_name(&self, name: &str) -> Result<RelId, VocabError> {
        self.relations
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| VocabError::UnknownRelation(name.to_string()))
    }

    /// Collects every vocabulary defect rather than stopping at the first.
    pub fn validate(&self) -> Result<(), Vec<VocabError>> {
        let mut errors = Vec::new();
        let mut names = HashSet::new();
        for rel in &self.relations {
            if !names.insert(rel.name.clone()) {
                errors.push(VocabError::DuplicateName(rel.name.clone()));
            }
            if rel.arity < 2 || rel.arity > self.max_arity {
                errors.push(VocabError::ArityOutOfRange {
                    relation: rel.name.clone(),
                    arity: rel.arity,
                    max: self.max_arity,
                });
                continue;
            }
            if rel.group.arity() != rel.arity {
                errors.push(VocabError::ArityMismatch {
                    relation: rel.name.clone(),
                    detail: format!(
                        "group arity {} vs relation arity {}",
                        rel.group.arity(),
                        rel.arity
                    ),
                });
                continue;
            }
            if let Err(reason) = rel.group.check() {
                errors.push(VocabError::NonGroup {
                    relation: rel.name.clone(),
                    reason,
                });
            }
            for &(i, j) in &rel.anti_reflexive.0 {
                if i == j || i >= rel.arity || j >= rel.arity {
                    errors.push(VocabError::BadPair {
                        relation: rel.name.clone(),
                        i,
                        j,
                    });
                }
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    /// Orbit representative of a tuple under the relation's group, or `None`
    /// when the tuple repeats a vertex on an anti-reflexivity pair.
    pub fn canonical_edge(
        &self,
        rel: RelId,
        tuple: &[VertexId],
    ) -> Result<Option<Edge>, VocabError> {
        let relation = &self.relations[rel];
        if tuple.len() != relation.arity {
            return Err(VocabError::LengthMismatch {
                want: relation.arity,
                got: tuple.len(),
            });
        }
        if relation.anti_reflexive.forbids(tuple) {
            return Ok(None);
        }
        let mut best: Option<Vec<VertexId>> = None;
        for g in relation.group.elements() {
            let image = g.apply(tuple);
            match &best {
                Some(b) if *b <= image => {}
                _ => best = Some(image),
            }
        }
        Ok(best.map(Vec::into_boxed_slice))
    }

    /// Membership test: is the orbit of `tuple` a stored edge? Anti-reflexive
    /// repeats are never members.
    pub fn tuple_in_edge_set(
        &self,
        rel: RelId,
        tuple: &[VertexId],
        edges: &HashSet<Edge>,
    ) -> bool {
        match self.canonical_edge(rel, tuple) {
            Ok(Some(e)) => edges.contains(&e),
            _ => false,
        }
    }

    /// Decomposes `E_R[n]` into repetition patterns so that
    /// `|E_R[n]| = sum over patterns of c * (n)_d` holds exactly at every n.
    ///
    /// Patterns are computed by brute force over a ground set of `d` labels
    /// per partition class: the orbit count on the ground set divided by `d!`
    /// gives the rational constant.
    pub fn orbit_patterns(&self, rel: RelId) -> Vec<OrbitPattern> {
        let relation = &self.relations[rel];
        let arity = relation.arity;
        let partitions = set_partitions(arity);
        // Keep one representative per group orbit of partitions.
        let mut by_canon: HashMap<Vec<Vec<usize>>, Vec<Vec<usize>>> = HashMap::new();
        for part in partitions {
            if part
                .iter()
                .any(|block| block_violates(block, &relation.anti_reflexive))
            {
                continue;
            }
            let mut canon = part.clone();
            for g in relation.group.elements() {
                let moved = permute_partition(&part, g);
                if moved < canon {
                    canon = moved;
                }
            }
            by_canon.entry(canon).or_insert(part);
        }

        let mut patterns = Vec::new();
        for (_canon, part) in by_canon {
            let d = part.len();
            // Count distinct canonical tuples over ground set [d] whose
            // repetition pattern falls in this partition's orbit class.
            let mut seen: HashSet<Edge> = HashSet::new();
            let labels: Vec<VertexId> = (0..d as VertexId).collect();
            let mut perm_indices: Vec<usize> = (0..d).collect();
            loop {
                for g in relation.group.elements() {
                    let moved = permute_partition(&part, g);
                    let mut tuple = vec![0 as VertexId; arity];
                    for (bi, block) in moved.iter().enumerate() {
                        for &pos in block {
                            tuple[pos] = labels[perm_indices[bi]];
                        }
                    }
                    if let Ok(Some(e)) = self.canonical_edge(rel, &tuple) {
                        seen.insert(e);
                    }
                }
                if !next_permutation(&mut perm_indices) {
                    break;
                }
            }
            let mut blocks = part;
            for b in &mut blocks {
                b.sort_unstable();
            }
            blocks.sort();
            patterns.push(OrbitPattern {
                blocks,
                distinct: d,
                orbits_on_ground: seen.len() as u64,
            });
        }
        patterns.sort_by(|a, b| b.distinct.cmp(&a.distinct).then(a.blocks.cmp(&b.blocks)));
        patterns
    }

    /// `|E_R[n]|`, exactly.
    pub fn edge_space_size(&self, rel: RelId, n: u64) -> u128 {
        self.orbit_patterns(rel)
            .iter()
            .map(|p| p.count(n))
            .sum()
    }
}

fn block_violates(block: &[usize], pairs: &AntiReflexivePairs) -> bool {
    for (ai, &a) in block.iter().enumerate() {
        for &b in &block[ai + 1..] {
            let key = if a < b { (a, b) } else { (b, a) };
            if pairs.0.contains(&key) {
                return true;
            }
        }
    }
    false
}

/// Image of a partition under a position permutation, normalized.
fn permute_partition(part: &[Vec<usize>], g: &Permutation) -> Vec<Vec<usize>> {
    let inv = g.inverse();
    let mut out: Vec<Vec<usize>> = part
        .iter()
        .map(|block| {
            let mut b: Vec<usize> = block.iter().map(|&p| inv.0[p]).collect();
            b.sort_unstable();
            b
        })
        .collect();
    out.sort();
    out
}

/// All set partitions of `0..n` (blocks sorted, partition sorted).
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = Vec::new();
    fn rec(i: usize, n: usize, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            let mut snapshot = current.clone();
            for b in &mut snapshot {
                b.sort_unstable();
            }
            snapshot.sort();
            out.push(snapshot);
            return;
        }
        for bi in 0..current.len() {
            current[bi].push(i);
            rec(i + 1, n, current, out);
            current[bi].pop();
        }
        current.push(vec![i]);
        rec(i + 1, n, current, out);
        current.pop();
    }
    rec(0, n, &mut current, &mut out);
    out
}

fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Per-relation density parameters for the sparse regime.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityMap(pub HashMap<String, f64>);

impl DensityMap {
    pub fn uniform(vocab: &Vocabulary, beta: f64) -> Self {
        DensityMap(
            vocab
                .relations
                .iter()
                .map(|r| (r.name.clone(), beta))
                .collect(),
        )
    }

    pub fn validate(&self, vocab: &Vocabulary) -> Result<Vec<f64>, VocabError> {
        let mut out = Vec::with_capacity(vocab.relations.len());
        for rel in &vocab.relations {
            let beta = self
                .0
                .get(&rel.name)
                .copied()
                .ok_or_else(|| VocabError::UnknownRelation(rel.name.clone()))?;
            out.push(beta);
        }
        if let Some(name) = self
            .0
            .keys()
            .find(|n| vocab.relations.iter().all(|r| &r.name != *n))
        {
            return Err(VocabError::UnknownRelation(name.clone()));
        }
        out.iter()
            .all(|b| *b >= 0.0 && b.is_finite())
            .then_some(out)
            .ok_or_else(|| VocabError::ArityMismatch {
                relation: "<beta>".into(),
                detail: "densities must be finite and non-negative".into(),
            })
    }
}

/// On-disk vocabulary description (positions are 1-based in the file).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VocabularyFile {
    pub name: String,
    pub relations: Vec<RelationFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationFile {
    pub name: String,
    pub arity: usize,
    #[serde(default)]
    pub generators: Vec<Vec<usize>>,
    #[serde(default)]
    pub antireflexive_pairs: Vec<(usize, usize)>,
}

impl VocabularyFile {
    pub fn into_vocabulary(self) -> Result<Vocabulary, VocabError> {
        let mut relations = Vec::new();
        for rf in self.relations {
            let mut gens = Vec::new();
            for g in &rf.generators {
                let perm: Vec<usize> = g
                    .iter()
                    .map(|&p| p.checked_sub(1).unwrap_or(usize::MAX))
                    .collect();
                let perm = Permutation(perm);
                if !perm.is_valid(rf.arity) {
                    return Err(VocabError::ArityMismatch {
                        relation: rf.name.clone(),
                        detail: format!("generator {:?} is not a permutation of 1..{}", g, rf.arity),
                    });
                }
                gens.push(perm);
            }
            let pairs: Vec<(usize, usize)> = rf
                .antireflexive_pairs
                .iter()
                .map(|&(i, j)| {
                    (
                        i.checked_sub(1).unwrap_or(usize::MAX),
                        j.checked_sub(1).unwrap_or(usize::MAX),
                    )
                })
                .collect();
            relations.push(Relation {
                name: rf.name,
                arity: rf.arity,
                group: SymmetryGroup::from_generators(rf.arity, &gens),
                anti_reflexive: AntiReflexivePairs::from_pairs(pairs),
            });
        }
        let vocab = Vocabulary::new(self.name, relations);
        vocab.validate().map_err(|mut v| v.remove(0))?;
        Ok(vocab)
    }
}

/// Built-in presets: `graph`, `digraph`, `hypergraph<d>`, `cnf<l>`.
pub fn preset(name: &str) -> Option<Arc<Vocabulary>> {
    let vocab = if name == "graph" {
        Vocabulary::new(
            "graph",
            vec![Relation {
                name: "E".into(),
                arity: 2,
                group: SymmetryGroup::symmetric(2),
                anti_reflexive: AntiReflexivePairs::all(2),
            }],
        )
    } else if name == "digraph" {
        Vocabulary::new(
            "digraph",
            vec![Relation {
                name: "E".into(),
                arity: 2,
                group: SymmetryGroup::trivial(2),
                anti_reflexive: AntiReflexivePairs::all(2),
            }],
        )
    } else if let Some(d) = name.strip_prefix("hypergraph") {
        let d: usize = d.parse().ok()?;
        if !(2..=DEFAULT_MAX_ARITY).contains(&d) {
            return None;
        }
        Vocabulary::new(
            name,
            vec![Relation {
                name: "E".into(),
                arity: d,
                group: SymmetryGroup::symmetric(d),
                anti_reflexive: AntiReflexivePairs::all(d),
            }],
        )
    } else if let Some(l) = name.strip_prefix("cnf") {
        let l: usize = l.parse().ok()?;
        if !(2..=DEFAULT_MAX_ARITY).contains(&l) {
            return None;
        }
        cnf_vocabulary(l)
    } else {
        return None;
    };
    debug_assert!(vocab.validate().is_ok());
    Some(Arc::new(vocab))
}

/// The l-CNF encoding vocabulary: relations `R0..Rl` of arity `l`, where
/// `Rj` is invariant under permutations of its first `j` and last `l - j`
/// positions, and all positions must hold distinct variables.
pub fn cnf_vocabulary(l: usize) -> Vocabulary {
    let mut relations = Vec::new();
    for j in 0..=l {
        let mut gens = Vec::new();
        for i in 0..l.saturating_sub(1) {
            // adjacent transpositions within the negated block and within
            // the positive block generate S_j x S_{l-j}
            if i + 1 < j || i >= j {
                let mut p: Vec<usize> = (0..l).collect();
                p.swap(i, i + 1);
                gens.push(Permutation(p));
            }
        }
        relations.push(Relation {
            name: format!("R{j}"),
            arity: l,
            group: SymmetryGroup::from_generators(l, &gens),
            anti_reflexive: AntiReflexivePairs::all(l),
        });
    }
    Vocabulary::new(format!("cnf{l}"), relations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph() -> Arc<Vocabulary> {
        preset("graph").unwrap()
    }

    #[test]
    fn presets_validate() {
        for name in ["graph", "digraph", "hypergraph3", "hypergraph4", "cnf2", "cnf3"] {
            let v = preset(name).unwrap();
            assert!(v.validate().is_ok(), "{name}");
        }
        assert!(preset("nonsense").is_none());
        assert!(preset("hypergraph9").is_none());
    }

    #[test]
    fn missing_identity_is_non_group() {
        let v = Vocabulary::new(
            "bad",
            vec![Relation {
                name: "E".into(),
                arity: 2,
                group: SymmetryGroup {
                    arity: 2,
                    elements: vec![Permutation(vec![1, 0])],
                },
                anti_reflexive: AntiReflexivePairs::none(),
            }],
        );
        let errs = v.validate().unwrap_err();
        assert!(matches!(errs[0], VocabError::NonGroup { .. }));
    }

    #[test]
    fn reflexive_pair_is_rejected() {
        let v = Vocabulary::new(
            "bad",
            vec![Relation {
                name: "E".into(),
                arity: 2,
                group: SymmetryGroup::trivial(2),
                anti_reflexive: AntiReflexivePairs(BTreeSet::from([(0, 0)])),
            }],
        );
        let errs = v.validate().unwrap_err();
        assert!(matches!(errs[0], VocabError::BadPair { .. }));
    }

    #[test]
    fn canonical_edge_examples() {
        let g = graph();
        assert_eq!(
            g.canonical_edge(0, &[5, 3]).unwrap(),
            Some(vec![3, 5].into_boxed_slice())
        );
        assert_eq!(g.canonical_edge(0, &[4, 4]).unwrap(), None);
        let d = preset("digraph").unwrap();
        assert_eq!(
            d.canonical_edge(0, &[5, 3]).unwrap(),
            Some(vec![5, 3].into_boxed_slice())
        );
        assert!(g.canonical_edge(0, &[1, 2, 3]).is_err());
    }

    #[test]
    fn orbit_patterns_graph() {
        let g = graph();
        let pats = g.orbit_patterns(0);
        assert_eq!(pats.len(), 1);
        assert_eq!(pats[0].distinct, 2);
        assert_eq!(pats[0].constant(), Ratio::new(1, 2));
        assert_eq!(g.edge_space_size(0, 10), 45);
    }

    #[test]
    fn orbit_patterns_directed_with_loops() {
        let v = Vocabulary::new(
            "loopy",
            vec![Relation {
                name: "E".into(),
                arity: 2,
                group: SymmetryGroup::trivial(2),
                anti_reflexive: AntiReflexivePairs::none(),
            }],
        );
        let pats = v.orbit_patterns(0);
        assert_eq!(pats.len(), 2);
        let total: u128 = v.edge_space_size(0, 9);
        assert_eq!(total, 81); // n(n-1) + n
    }

    #[test]
    fn orbit_patterns_triple() {
        let v = preset("hypergraph3").unwrap();
        let pats = v.orbit_patterns(0);
        assert_eq!(pats.len(), 1);
        assert_eq!(pats[0].distinct, 3);
        assert_eq!(pats[0].constant(), Ratio::new(1, 6));
        assert_eq!(v.edge_space_size(0, 8), 56); // C(8,3)
    }

    /// The pattern decomposition must match brute-force orbit enumeration.
    #[test]
    fn edge_space_matches_enumeration() {
        for name in ["graph", "digraph", "hypergraph3", "cnf2", "cnf3"] {
            let v = preset(name).unwrap();
            for rel in 0..v.relations.len() {
                let arity = v.relations[rel].arity;
                for n in 1..=8u64 {
                    let mut seen: HashSet<Edge> = HashSet::new();
                    let mut tuple = vec![1 as VertexId; arity];
                    loop {
                        if let Ok(Some(e)) = v.canonical_edge(rel, &tuple) {
                            seen.insert(e);
                        }
                        // odometer over [1..=n]^arity
                        let mut i = 0;
                        loop {
                            if i == arity {
                                break;
                            }
                            if tuple[i] < n as VertexId {
                                tuple[i] += 1;
                                break;
                            }
                            tuple[i] = 1;
                            i += 1;
                        }
                        if i == arity {
                            break;
                        }
                    }
                    assert_eq!(
                        seen.len() as u128,
                        v.edge_space_size(rel, n),
                        "{name} rel {rel} n {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn cnf_group_orders() {
        let v = cnf_vocabulary(3);
        let orders: Vec<usize> = v.relations.iter().map(|r| r.group.order()).collect();
        assert_eq!(orders, vec![6, 2, 2, 6]); // 0!3!, 1!2!, 2!1!, 3!0!
    }

    #[test]
    fn canonical_edge_is_orbit_invariant_and_idempotent() {
        let v = preset("cnf3").unwrap();
        let tuple = [3, 1, 2];
        for rel in 0..v.relations.len() {
            let canon = v.canonical_edge(rel, &tuple).unwrap().unwrap();
            for g in v.relations[rel].group.elements() {
                let moved = g.apply(&tuple);
                assert_eq!(v.canonical_edge(rel, &moved).unwrap().unwrap(), canon);
            }
            assert_eq!(v.canonical_edge(rel, &canon).unwrap().unwrap(), canon);
        }
    }
}
