//! The cube complex of a graph group, combinatorially: one torus per clique,
//! so cell counts are clique counts, and every vertex link is the clique
//! complex of the graph with each vertex doubled into a positive and a
//! negative copy.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, SimplicialGraph, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("link vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("simplex contains both signs of vertex {0}")]
    BothSigns(String),
    #[error("simplex joins non-adjacent vertices {0} and {1}")]
    NotAdjacent(String, String),
}

/// Entry `k` is the number of `k`-cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellCounts {
    pub counts: Vec<u64>,
}

pub fn cell_counts(g: &SimplicialGraph) -> CellCounts {
    let mut counts = vec![1u64];
    for c in g.enumerate_cliques() {
        if counts.len() <= c.len() {
            counts.push(0);
        }
        counts[c.len()] += 1;
    }
    CellCounts { counts }
}

pub fn euler_characteristic(g: &SimplicialGraph) -> i64 {
    cell_counts(g)
        .counts
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// Link vertex of `v` with the given sign.
pub fn link_vertex(v: usize, negative: bool) -> usize {
    2 * v + negative as usize
}

/// A simplicial complex on the signed copies `v+`, `v-` of the graph
/// vertices, stored by its facets. Link vertex `2v` is `v+`, `2v + 1` is `v-`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkComplex {
    names: Vec<String>,
    facets: Vec<u128>,
}

fn bits_of(mask: u128) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

impl LinkComplex {
    /// A complex on the signed vertices of `g` with the given facets (each a
    /// bit mask over link vertices). Faces of other facets are dropped.
    pub fn new(g: &SimplicialGraph, facets: Vec<u128>) -> Result<Self, ComplexError> {
        let n = g.vertex_count();
        for &f in &facets {
            let members: Vec<usize> = bits_of(f).collect();
            if let Some(&i) = members.iter().find(|&&i| i >= 2 * n) {
                return Err(ComplexError::VertexOutOfRange(i));
            }
            for (k, &a) in members.iter().enumerate() {
                for &b in &members[k + 1..] {
                    let (v, w) = (a / 2, b / 2);
                    if v == w {
                        return Err(ComplexError::BothSigns(g.name(v).to_string()));
                    }
                    if !g.adjacent(v, w) {
                        return Err(ComplexError::NotAdjacent(g.name(v).to_string(), g.name(w).to_string()));
                    }
                }
            }
        }
        let mut maximal: Vec<u128> = facets
            .iter()
            .copied()
            .filter(|&f| !facets.iter().any(|&h| h != f && h & f == f))
            .collect();
        maximal.sort_by_key(|&f| (f.count_ones(), f.reverse_bits()));
        maximal.dedup();
        Ok(LinkComplex {
            names: g.vertices().to_vec(),
            facets: maximal,
        })
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.names.len()
    }

    pub fn vertex_name(&self, i: usize) -> String {
        format!("{}{}", self.names[i / 2], if i % 2 == 0 { "+" } else { "-" })
    }

    pub fn facets(&self) -> &[u128] {
        &self.facets
    }

    pub fn contains_simplex(&self, s: u128) -> bool {
        s == 0 || self.facets.iter().any(|&f| f & s == s)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.contains_simplex(1u128 << a | 1u128 << b)
    }

    /// Neighbour masks of the 1-skeleton.
    fn skeleton(&self) -> Vec<u128> {
        let mut nbrs = vec![0u128; self.vertex_count()];
        for &f in &self.facets {
            for i in bits_of(f) {
                nbrs[i] |= f & !(1u128 << i);
            }
        }
        nbrs
    }

    /// Number of simplices of each dimension, starting at dimension 0.
    pub fn simplex_counts(&self) -> Vec<u64> {
        let mut faces: HashSet<u128> = HashSet::new();
        for &f in &self.facets {
            let mut sub = f;
            while sub != 0 {
                faces.insert(sub);
                sub = (sub - 1) & f;
            }
        }
        let mut counts = Vec::new();
        for s in faces {
            let d = s.count_ones() as usize - 1;
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        counts
    }

    /// Maximal cliques of the 1-skeleton (Bron–Kerbosch with pivoting).
    fn skeleton_maximal_cliques(&self) -> Vec<u128> {
        fn expand(nbrs: &[u128], r: u128, mut p: u128, mut x: u128, out: &mut Vec<u128>) {
            if p == 0 && x == 0 {
                out.push(r);
                return;
            }
            let pivot = bits_of(p | x).max_by_key(|&u| (p & nbrs[u]).count_ones()).unwrap();
            for v in bits_of(p & !nbrs[pivot]) {
                let bit = 1u128 << v;
                expand(nbrs, r | bit, p & nbrs[v], x & nbrs[v], out);
                p &= !bit;
                x |= bit;
            }
        }
        let nbrs = self.skeleton();
        let all = if self.vertex_count() == 128 {
            u128::MAX
        } else {
            (1u128 << self.vertex_count()) - 1
        };
        let mut out = Vec::new();
        expand(&nbrs, 0, all, 0, &mut out);
        out
    }

    /// Every set of pairwise joined vertices spans a simplex.
    pub fn is_flag(&self) -> bool {
        self.skeleton_maximal_cliques().into_iter().all(|c| self.contains_simplex(c))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.report()).expect("serializable")
    }

    pub fn report(&self) -> LinkReport {
        let mut facets: Vec<Vec<String>> = self
            .facets
            .iter()
            .map(|&f| bits_of(f).map(|i| self.vertex_name(i)).collect())
            .collect();
        facets.sort();
        LinkReport {
            vertices: (0..self.vertex_count()).map(|i| self.vertex_name(i)).collect(),
            facets,
            simplex_counts: self.simplex_counts(),
            flag: self.is_flag(),
        }
    }

    /// Underlying graph vertices of a link simplex.
    pub fn underlying(&self, s: u128) -> VertexSet {
        bits_of(s).map(|i| i / 2).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkReport {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<String>>,
    pub simplex_counts: Vec<u64>,
    pub flag: bool,
}

/// The link of any vertex of the universal cover: one facet per maximal
/// clique and choice of signs.
pub fn vertex_link(g: &SimplicialGraph) -> LinkComplex {
    let mut facets = Vec::new();
    for clique in g.maximal_cliques() {
        let members: Vec<usize> = clique.iter().collect();
        for signs in 0u64..(1u64 << members.len()) {
            let facet = members
                .iter()
                .enumerate()
                .fold(0u128, |acc, (i, &v)| acc | 1u128 << link_vertex(v, signs >> i & 1 == 1));
            facets.push(facet);
        }
    }
    LinkComplex::new(g, facets).expect("clique facets are valid")
}

pub fn is_flag(lc: &LinkComplex) -> bool {
    lc.is_flag()
}

pub fn verify_gromov_hypothesis(g: &SimplicialGraph) -> bool {
    vertex_link(g).is_flag()
}

/// Simplex counts predicted from cliques: `2^(k+1)` signed copies of each
/// `(k+1)`-clique.
pub fn expected_link_counts(g: &SimplicialGraph) -> Vec<u64> {
    cell_counts(g)
        .counts
        .iter()
        .enumerate()
        .skip(1)
        .map(|(size, &c)| c << size)
        .collect()
}
