//! Finite simplicial graphs and the predicates the invariants reduce to.
//!
//! Vertices are indexed by their insertion position and vertex subsets are
//! stored as 64-bit masks, so a graph carries at most [`MAX_VERTICES`]
//! vertices. Every search in this module is exhaustive.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound on the number of vertices of a [`SimplicialGraph`].
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge `{0}`-`{1}`")]
    DuplicateEdge(String, String),
    #[error("loop at vertex `{0}`")]
    Loop(String),
    #[error("empty vertex name")]
    EmptyName,
    #[error("graph has {0} vertices, at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("vertex set refers to index {0}, graph has {1} vertices")]
    IndexOutOfRange(usize, usize),
    #[error("parameter {name}={value} out of range: {reason}")]
    OutOfRange {
        name: &'static str,
        value: usize,
        reason: String,
    },
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

/// A set of vertices of some parent graph, as a bitmask over vertex indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, 1, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        VertexSet(indices.into_iter().fold(0u64, |acc, v| acc | (1u64 << v)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 & (1u64 << v) != 0
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | (1u64 << v))
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in increasing index order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    /// Lexicographic comparison of the sorted index lists.
    pub fn lex_cmp(self, other: Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_indices(iter)
    }
}

/// A finite simplicial graph: no loops, no multiple edges, vertices kept in
/// insertion order.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<VertexSet>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<(String, String)>,
}

impl SimplicialGraph {
    pub fn new<S, E>(vertices: &[S], edges: &[(E, E)]) -> Result<Self, GraphError>
    where
        S: AsRef<str>,
        E: AsRef<str>,
    {
        let mut graph = Self::with_vertices(vertices)?;
        let mut seen = HashSet::new();
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let i = graph.index_of(a)?;
            let j = graph.index_of(b)?;
            if i == j {
                return Err(GraphError::Loop(a.to_string()));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(GraphError::DuplicateEdge(a.to_string(), b.to_string()));
            }
            graph.adjacency[i] = graph.adjacency[i].with(j);
            graph.adjacency[j] = graph.adjacency[j].with(i);
        }
        Ok(graph)
    }

    fn with_vertices<S: AsRef<str>>(vertices: &[S]) -> Result<Self, GraphError> {
        if vertices.len() > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(vertices.len()));
        }
        let mut index = HashMap::new();
        let mut names = Vec::with_capacity(vertices.len());
        for v in vertices {
            let name = v.as_ref();
            if name.is_empty() {
                return Err(GraphError::EmptyName);
            }
            if index.insert(name.to_string(), names.len()).is_some() {
                return Err(GraphError::DuplicateVertex(name.to_string()));
            }
            names.push(name.to_string());
        }
        Ok(SimplicialGraph {
            adjacency: vec![VertexSet::EMPTY; names.len()],
            names,
            index,
        })
    }

    /// Graph on vertices `v1..vn` with edges given by index pairs.
    pub fn numbered(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let named: Vec<(String, String)> = edges
            .iter()
            .map(|&(a, b)| {
                let name = |i: usize| {
                    names
                        .get(i)
                        .cloned()
                        .ok_or(GraphError::IndexOutOfRange(i, n))
                };
                Ok((name(a)?, name(b)?))
            })
            .collect::<Result<_, GraphError>>()?;
        Self::new(&names, &named)
    }

    /// Graph on `v1..vn` whose edge set is read from the bits of `code`,
    /// one bit per pair `(i, j)`, `i < j`, in lexicographic pair order.
    /// Iterating `code` over `0..2^(n(n-1)/2)` lists every labeled graph.
    pub fn from_edge_code(n: usize, code: u64) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if code >> bit & 1 == 1 {
                    edges.push((i, j));
                }
                bit += 1;
            }
        }
        Self::numbered(n, &edges)
    }

    pub fn path<S: AsRef<str>>(names: &[S]) -> Result<Self, GraphError> {
        let edges: Vec<(&str, &str)> = names
            .windows(2)
            .map(|w| (w[0].as_ref(), w[1].as_ref()))
            .collect();
        Self::new(names, &edges)
    }

    pub fn cycle<S: AsRef<str>>(names: &[S]) -> Result<Self, GraphError> {
        let n = names.len();
        if n < 3 {
            return Err(GraphError::OutOfRange {
                name: "cycle length",
                value: n,
                reason: "a cycle needs at least 3 vertices".into(),
            });
        }
        let edges: Vec<(&str, &str)> = (0..n)
            .map(|i| (names[i].as_ref(), names[(i + 1) % n].as_ref()))
            .collect();
        Self::new(names, &edges)
    }

    pub fn complete<S: AsRef<str>>(names: &[S]) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                edges.push((names[i].as_ref(), names[j].as_ref()));
            }
        }
        Self::new(names, &edges)
    }

    pub fn null<S: AsRef<str>>(names: &[S]) -> Result<Self, GraphError> {
        Self::new::<S, &str>(names, &[])
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let raw: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Self::new(&raw.vertices, &raw.edges)
    }

    pub fn to_json(&self) -> String {
        let raw = GraphJson {
            vertices: self.names.clone(),
            edges: self
                .edges()
                .into_iter()
                .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
        };
        serde_json::to_string(&raw).expect("graph serialization cannot fail")
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, GraphError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    /// Resolves vertex names to a [`VertexSet`].
    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet, GraphError> {
        names
            .iter()
            .map(|n| self.index_of(n.as_ref()))
            .collect::<Result<VertexSet, _>>()
    }

    pub fn names_of(&self, s: VertexSet) -> Vec<String> {
        s.iter().map(|v| self.names[v].clone()).collect()
    }

    /// Fails when `s` mentions an index outside this graph.
    pub fn check_set(&self, s: VertexSet) -> Result<(), GraphError> {
        match s.difference(self.all_vertices()).first() {
            Some(v) => Err(GraphError::IndexOutOfRange(v, self.vertex_count())),
            None => Ok(()),
        }
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adjacency[v]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(b)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Edges as index pairs `(i, j)` with `i < j`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.vertex_count() {
            for j in self.adjacency[i].iter().filter(|&j| j > i) {
                out.push((i, j));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// Vertices adjacent to every other vertex.
    pub fn cone_vertices(&self) -> VertexSet {
        let all = self.all_vertices();
        (0..self.vertex_count())
            .filter(|&v| self.adjacency[v] == all.without(v))
            .collect()
    }

    /// The full subgraph spanned by `s`, keeping the parent's vertex order.
    pub fn full_subgraph(&self, s: VertexSet) -> Result<SimplicialGraph, GraphError> {
        self.check_set(s)?;
        let keep: Vec<usize> = s.iter().collect();
        let names: Vec<&str> = keep.iter().map(|&v| self.names[v].as_str()).collect();
        let mut edges = Vec::new();
        for (a, &u) in keep.iter().enumerate() {
            for &v in &keep[a + 1..] {
                if self.adjacent(u, v) {
                    edges.push((self.names[u].as_str(), self.names[v].as_str()));
                }
            }
        }
        SimplicialGraph::new(&names, &edges)
    }

    /// Connectivity of the full subgraph spanned by `s`; the empty set is
    /// not connected.
    pub fn spans_connected(&self, s: VertexSet) -> bool {
        let Some(start) = s.first() else {
            return false;
        };
        let mut seen = VertexSet::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier.iter() {
                next = next.union(self.adjacency[v]);
            }
            frontier = next.intersection(s).difference(seen);
            seen = seen.union(frontier);
        }
        seen == s
    }

    /// Connected components of the full subgraph on `s`, each in index
    /// order, listed by smallest member.
    pub fn components(&self, s: VertexSet) -> Vec<VertexSet> {
        let mut rest = s;
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let mut comp = VertexSet::singleton(start);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.adjacency[v].intersection(rest).difference(comp).iter() {
                    comp = comp.with(w);
                    queue.push_back(w);
                }
            }
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }

    /// True iff the graph has exactly one connected component.
    pub fn is_connected(&self) -> bool {
        self.spans_connected(self.all_vertices())
    }

    /// Every vertex outside `s` has a neighbor in `s`. The empty set
    /// dominates only the empty graph.
    pub fn dominates(&self, s: VertexSet) -> bool {
        let outside = self.all_vertices().difference(s);
        outside
            .iter()
            .all(|v| !self.adjacency[v].is_disjoint(s))
    }

    pub fn is_dominating(&self, s: VertexSet) -> Result<bool, GraphError> {
        self.check_set(s)?;
        if s.is_empty() && self.vertex_count() > 0 {
            return Ok(false);
        }
        Ok(self.dominates(s))
    }

    /// `s` spans a connected full subgraph and dominates the graph.
    pub fn is_connected_dominating(&self, s: VertexSet) -> bool {
        self.spans_connected(s) && self.dominates(s)
    }

    pub fn is_clique(&self, s: VertexSet) -> bool {
        s.iter().all(|v| s.without(v).is_subset(self.adjacency[v]))
    }

    pub fn is_complete(&self) -> bool {
        self.is_clique(self.all_vertices())
    }

    /// All nonempty cliques, grouped by size, lexicographic within a size.
    pub fn enumerate_cliques(&self) -> Vec<VertexSet> {
        let mut out = Vec::new();
        // Extend only by larger indices so each clique is produced once.
        fn extend(g: &SimplicialGraph, current: VertexSet, candidates: VertexSet, out: &mut Vec<VertexSet>) {
            for v in candidates.iter() {
                let next = current.with(v);
                out.push(next);
                let later = VertexSet::from_bits(candidates.bits() & !((2u64 << v) - 1));
                extend(g, next, later.intersection(g.adjacency[v]), out);
            }
        }
        extend(self, VertexSet::EMPTY, self.all_vertices(), &mut out);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.lex_cmp(*b)));
        out
    }

    /// Inclusion-maximal cliques in the same order as [`Self::enumerate_cliques`].
    pub fn maximal_cliques(&self) -> Vec<VertexSet> {
        let cliques = self.enumerate_cliques();
        cliques
            .iter()
            .copied()
            .filter(|&c| {
                let common = c
                    .iter()
                    .fold(self.all_vertices(), |acc, v| acc.intersection(self.adjacency[v]));
                common.is_empty()
            })
            .collect()
    }

    /// Chordality via maximum cardinality search and a perfect elimination
    /// ordering check.
    pub fn is_chordal(&self) -> bool {
        self.perfect_elimination_order().is_some()
    }

    /// A perfect elimination ordering, if the graph is chordal.
    pub fn perfect_elimination_order(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        let mut weight = vec![0usize; n];
        let mut numbered = VertexSet::EMPTY;
        let mut visit = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !numbered.contains(v))
                .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
                .expect("unnumbered vertex remains");
            for w in self.adjacency[v].difference(numbered).iter() {
                weight[w] += 1;
            }
            numbered = numbered.with(v);
            visit.push(v);
        }
        visit.reverse();
        let mut later = self.all_vertices();
        for &v in &visit {
            later = later.without(v);
            if !self.is_clique(self.adjacency[v].intersection(later)) {
                return None;
            }
        }
        Some(visit)
    }

    /// A chordless cycle on at least four vertices, in cyclic order.
    pub fn induced_long_cycle(&self) -> Option<Vec<usize>> {
        for v in 0..self.vertex_count() {
            let nbrs: Vec<usize> = self.adjacency[v].iter().collect();
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if self.adjacent(a, b) {
                        continue;
                    }
                    let blocked = self.adjacency[v].with(v).without(a).without(b);
                    let allowed = self.all_vertices().difference(blocked);
                    if let Some(path) = self.shortest_path_within(a, b, allowed) {
                        let mut cycle = vec![v];
                        cycle.extend(path);
                        return Some(cycle);
                    }
                }
            }
        }
        None
    }

    /// A shortest path from `from` to `to` using only vertices of `allowed`.
    pub fn shortest_path_within(&self, from: usize, to: usize, allowed: VertexSet) -> Option<Vec<usize>> {
        if !allowed.contains(from) || !allowed.contains(to) {
            return None;
        }
        let mut parent = vec![usize::MAX; self.vertex_count()];
        let mut seen = VertexSet::singleton(from);
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for w in self.adjacency[v].intersection(allowed).difference(seen).iter() {
                seen = seen.with(w);
                parent[w] = v;
                queue.push_back(w);
            }
        }
        None
    }

    /// Some `m`-subset whose removal leaves a disconnected full subgraph,
    /// searched in lexicographic order.
    pub fn exists_disconnecting_set(&self, m: usize) -> Result<Option<VertexSet>, GraphError> {
        let n = self.vertex_count();
        if m >= n {
            return Err(GraphError::OutOfRange {
                name: "m",
                value: m,
                reason: format!("must be below the vertex count {n}"),
            });
        }
        let all = self.all_vertices();
        Ok(Combinations::new(n, m)
            .map(VertexSet::from_indices)
            .find(|&s| !self.spans_connected(all.difference(s))))
    }

    /// All inclusion-minimal connected dominating sets, ordered by size and
    /// then lexicographically.
    pub fn minimal_connected_dominating_sets(&self) -> Vec<VertexSet> {
        let n = self.vertex_count();
        let mut found: Vec<VertexSet> = Vec::new();
        for k in 1..=n {
            for combo in Combinations::new(n, k) {
                let s = VertexSet::from_indices(combo);
                if found.iter().any(|f| f.is_subset(s)) {
                    continue;
                }
                if self.is_connected_dominating(s) {
                    found.push(s);
                }
            }
        }
        found
    }

    /// `n` pairwise-disjoint connected dominating sets, if any exist.
    pub fn disjoint_connected_dominating_family(&self, n: usize) -> Option<Vec<VertexSet>> {
        // Shrinking a member to a minimal one preserves disjointness.
        let minimal = self.minimal_connected_dominating_sets();
        fn search(
            pool: &[VertexSet],
            start: usize,
            used: VertexSet,
            need: usize,
            chosen: &mut Vec<VertexSet>,
        ) -> bool {
            if need == 0 {
                return true;
            }
            for i in start..pool.len() {
                if pool[i].is_disjoint(used) {
                    chosen.push(pool[i]);
                    if search(pool, i + 1, used.union(pool[i]), need - 1, chosen) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        let mut chosen = Vec::new();
        search(&minimal, 0, VertexSet::EMPTY, n, &mut chosen).then_some(chosen)
    }
}

impl fmt::Debug for SimplicialGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .into_iter()
            .map(|(a, b)| format!("{}-{}", self.names[a], self.names[b]))
            .collect();
        f.debug_struct("SimplicialGraph")
            .field("vertices", &self.names)
            .field("edges", &edges)
            .finish()
    }
}

/// `k`-subsets of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
