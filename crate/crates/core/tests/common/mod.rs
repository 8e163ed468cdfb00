//! Reference implementations that share no code with the library beyond
//! the graph and word containers.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use bns_core::{Letter, SimplicialGraph, Word};
use rand::Rng;

pub fn edge_pairs(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Every labeled graph on `n` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = SimplicialGraph> {
    (0..1u64 << edge_pairs(n)).map(move |code| SimplicialGraph::from_edge_code(n, code).unwrap())
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize) -> SimplicialGraph {
    let code = if edge_pairs(n) == 0 {
        0
    } else {
        rng.gen_range(0..1u64 << edge_pairs(n))
    };
    SimplicialGraph::from_edge_code(n, code).unwrap()
}

pub fn random_word<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| Letter::new(rng.gen_range(0..n), rng.gen_bool(0.5)))
        .collect()
}

fn commute(g: &SimplicialGraph, a: Letter, b: Letter) -> bool {
    a.vertex != b.vertex && g.adjacent(a.vertex, b.vertex)
}

/// Trace reduction: each incoming letter cancels the nearest earlier
/// inverse it can commute past. A cancellation can expose an earlier pair,
/// so passes repeat until nothing changes.
pub fn reduce_trace(g: &SimplicialGraph, w: &Word) -> Vec<Letter> {
    let mut current = w.letters().to_vec();
    loop {
        let next = reduce_pass(g, &current);
        if next.len() == current.len() {
            return next;
        }
        current = next;
    }
}

fn reduce_pass(g: &SimplicialGraph, w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for &a in w {
        let mut cancelled = false;
        for i in (0..out.len()).rev() {
            let b = out[i];
            if b == a.inv() {
                out.remove(i);
                cancelled = true;
                break;
            }
            if !commute(g, a, b) {
                break;
            }
        }
        if !cancelled {
            out.push(a);
        }
    }
    out
}

/// Cartier-Foata layering of a reduced trace: a letter sits one level above
/// the highest earlier letter it fails to commute with. Each layer is
/// listed in ascending letter order.
pub fn foata_normal_form(g: &SimplicialGraph, w: &Word) -> Vec<Vec<Letter>> {
    let reduced = reduce_trace(g, w);
    let mut levels: Vec<usize> = Vec::with_capacity(reduced.len());
    for (i, &a) in reduced.iter().enumerate() {
        let level = (0..i)
            .filter(|&j| !commute(g, a, reduced[j]))
            .map(|j| levels[j] + 1)
            .max()
            .unwrap_or(0);
        levels.push(level);
    }
    let depth = levels.iter().max().map_or(0, |m| m + 1);
    let mut layers = vec![Vec::new(); depth];
    for (a, level) in reduced.into_iter().zip(levels) {
        layers[level].push(a);
    }
    for layer in &mut layers {
        layer.sort();
    }
    layers
}

pub fn foata_word(g: &SimplicialGraph, w: &Word) -> Word {
    foata_normal_form(g, w).into_iter().flatten().collect()
}

/// Free reduction, valid when no two generators commute.
pub fn free_reduce(w: &Word) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for &a in w.letters() {
        if out.last() == Some(&a.inv()) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

pub fn exponent_vector(n: usize, w: &Word) -> Vec<i64> {
    let mut v = vec![0; n];
    for l in w.letters() {
        v[l.vertex] += if l.inverse { -1 } else { 1 };
    }
    v
}

/// Connectivity of the subgraph spanned by `members` via adjacency queries.
pub fn spans_connected(g: &SimplicialGraph, members: &[usize]) -> bool {
    let Some(&start) = members.first() else {
        return false;
    };
    let mut seen = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in members {
            if !seen.contains(&w) && g.adjacent(v, w) {
                seen.push(w);
                queue.push_back(w);
            }
        }
    }
    seen.len() == members.len()
}

pub fn dominates(g: &SimplicialGraph, members: &[usize]) -> bool {
    (0..g.vertex_count()).all(|v| members.contains(&v) || members.iter().any(|&m| g.adjacent(v, m)))
}

/// No induced cycle on four or more vertices, checked over all subsets.
pub fn chordal_by_subsets(g: &SimplicialGraph) -> bool {
    let n = g.vertex_count();
    for mask in 0u64..1 << n {
        let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if members.len() < 4 {
            continue;
        }
        let all_degree_two = members
            .iter()
            .all(|&v| members.iter().filter(|&&w| g.adjacent(v, w)).count() == 2);
        if all_degree_two && spans_connected(g, &members) {
            return false;
        }
    }
    true
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

/// Rank as the size of the largest nonvanishing minor.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    for k in (1..=rows.len().min(cols)).rev() {
        for rs in subsets(rows.len(), k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| rows[r][c] as i128).collect()).collect();
                if det(&minor) != 0 {
                    return k;
                }
            }
        }
    }
    0
}

/// Cofactor vector of `n - 1` rows in `n` columns: orthogonal to every row
/// and nonzero exactly when the rows are independent.
pub fn cofactor_normal(rows: &[Vec<i64>]) -> Vec<i128> {
    let n = rows.len() + 1;
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = rows
                .iter()
                .map(|row| (0..n).filter(|&c| c != j).map(|c| row[c] as i128).collect())
                .collect();
            if j % 2 == 0 { det(&minor) } else { -det(&minor) }
        })
        .collect()
}

/// Distinct elements within word length `r`, counted by normalizing every
/// word of length at most `r` with the trace oracle.
pub fn ball_size_by_words(g: &SimplicialGraph, r: usize) -> usize {
    let n = g.vertex_count();
    let mut seen: HashSet<Vec<Vec<Letter>>> = HashSet::new();
    let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
    seen.insert(Vec::new());
    for _ in 0..r {
        let mut next = Vec::new();
        for w in &frontier {
            for code in 0..2 * n {
                let mut longer = w.clone();
                longer.push(Letter::from_code(code));
                next.push(longer);
            }
        }
        for w in &next {
            seen.insert(foata_normal_form(g, &Word(w.clone())));
        }
        frontier = next;
    }
    seen.len()
}
