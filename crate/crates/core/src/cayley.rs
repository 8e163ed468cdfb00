//! Brute-force exploration of the Cayley graph over the standard generators.
//!
//! Elements are identified by their irreducible clique words, so two words
//! name the same vertex exactly when the rewriting system says so. Word
//! length of an element equals the letter count of its normal form.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::characters::Character;
use crate::graph::{SimplicialGraph, VertexSet};
use crate::words::{CliqueWord, Letter, RewritingSystem, Word};

pub const DEFAULT_BUDGET: usize = 200_000;
pub const DEFAULT_PADDING: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyError {
    #[error("element budget of {budget} exceeded after completing radius {radius_reached}")]
    BudgetExceeded { budget: usize, radius_reached: usize },
    #[error("character has {got} values, graph has {expected} vertices")]
    VertexCountMismatch { expected: usize, got: usize },
    #[error("character values too large for exact machine arithmetic")]
    Overflow,
    #[error("radius must be at least 1")]
    ZeroRadius,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("path construction failed: {0}")]
    ConstructionFailed(String),
}

fn all_letters(n: usize) -> impl Iterator<Item = Letter> {
    (0..2 * n).map(Letter::from_code)
}

/// Primitive integer values of a character, exact in `i64`.
fn machine_ray(g: &SimplicialGraph, chi: &Character) -> Result<Vec<i64>, CayleyError> {
    if chi.vertex_count() != g.vertex_count() {
        return Err(CayleyError::VertexCountMismatch {
            expected: g.vertex_count(),
            got: chi.vertex_count(),
        });
    }
    chi.integer_ray_i64().ok_or(CayleyError::Overflow)
}

fn letter_value(ray: &[i64], l: Letter) -> i64 {
    ray[l.vertex] * l.sign()
}

fn word_value(ray: &[i64], letters: impl IntoIterator<Item = Letter>) -> i64 {
    letters.into_iter().map(|l| letter_value(ray, l)).sum()
}

/// The ball of radius `radius` about the identity.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    graph: SimplicialGraph,
    radius: usize,
    elements: Vec<CliqueWord>,
    levels: Vec<usize>,
    index: HashMap<CliqueWord, usize>,
    /// `(letter, target)` for every letter whose product stays in the ball.
    adjacency: Vec<Vec<(Letter, usize)>>,
}

impl CayleyBall {
    pub fn graph(&self) -> &SimplicialGraph {
        &self.graph
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in discovery order; index 0 is the identity.
    pub fn elements(&self) -> &[CliqueWord] {
        &self.elements
    }

    pub fn element_word(&self, i: usize) -> Word {
        self.elements[i].to_word()
    }

    /// Distance from the identity.
    pub fn level(&self, i: usize) -> usize {
        self.levels[i]
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        let rs = RewritingSystem::new(&self.graph);
        self.index.get(&rs.normal_blocks(w)).copied()
    }

    pub fn neighbors(&self, i: usize) -> &[(Letter, usize)] {
        &self.adjacency[i]
    }

    /// Every `(element, letter)` pair whose product lies in the ball.
    pub fn edges(&self) -> impl Iterator<Item = (usize, Letter)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, nbrs)| nbrs.iter().map(move |&(l, _)| (i, l)))
    }

    /// Each undirected edge once, labelled by its positive letter.
    pub fn undirected_edges(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, nbrs)| {
            nbrs.iter()
                .filter(|(l, _)| !l.inverse)
                .map(move |&(l, j)| (i, l, j))
        })
    }
}

pub fn build_ball(g: &SimplicialGraph, radius: usize) -> Result<CayleyBall, CayleyError> {
    build_ball_with_budget(g, radius, DEFAULT_BUDGET)
}

/// Breadth-first enumeration up to `radius`, failing once more than
/// `budget` elements have been found.
pub fn build_ball_with_budget(g: &SimplicialGraph, radius: usize, budget: usize) -> Result<CayleyBall, CayleyError> {
    let rs = RewritingSystem::new(g);
    let n = g.vertex_count();
    let identity = CliqueWord::default();
    let mut elements = vec![identity.clone()];
    let mut levels = vec![0];
    let mut index = HashMap::from([(identity, 0usize)]);
    let mut frontier = 0..1;
    for level in 1..=radius {
        let start = elements.len();
        for i in frontier.clone() {
            for l in all_letters(n) {
                let next = rs.append_letter(elements[i].blocks(), l);
                if !index.contains_key(&next) {
                    if elements.len() >= budget {
                        return Err(CayleyError::BudgetExceeded {
                            budget,
                            radius_reached: level - 1,
                        });
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                    levels.push(level);
                }
            }
        }
        frontier = start..elements.len();
    }
    let mut adjacency = Vec::with_capacity(elements.len());
    for e in &elements {
        let nbrs = all_letters(n)
            .filter_map(|l| {
                let next = rs.append_letter(e.blocks(), l);
                index.get(&next).map(|&j| (l, j))
            })
            .collect();
        adjacency.push(nbrs);
    }
    Ok(CayleyBall {
        graph: g.clone(),
        radius,
        elements,
        levels,
        index,
        adjacency,
    })
}

/// The part of a ball on which a character is nonnegative.
#[derive(Clone, Debug)]
pub struct PositiveSlice<'a> {
    ball: &'a CayleyBall,
    character: Character,
    kept: Vec<bool>,
}

impl<'a> PositiveSlice<'a> {
    pub fn ball(&self) -> &'a CayleyBall {
        self.ball
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    pub fn is_kept(&self, i: usize) -> bool {
        self.kept[i]
    }

    pub fn kept_elements(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.kept.len()).filter(|&i| self.kept[i])
    }

    pub fn kept_count(&self) -> usize {
        self.kept.iter().filter(|&&k| k).count()
    }

    pub fn kept_edges(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        self.ball
            .undirected_edges()
            .filter(|&(i, _, j)| self.kept[i] && self.kept[j])
    }

    /// Component label of every kept element (`None` for dropped ones).
    pub fn components(&self) -> Vec<Option<usize>> {
        let mut label = vec![None; self.kept.len()];
        let mut next = 0;
        for start in self.kept_elements() {
            if label[start].is_some() {
                continue;
            }
            label[start] = Some(next);
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for &(_, j) in self.ball.neighbors(i) {
                    if self.kept[j] && label[j].is_none() {
                        label[j] = Some(next);
                        queue.push_back(j);
                    }
                }
            }
            next += 1;
        }
        label
    }
}

/// Keeps the elements with nonnegative character value.
pub fn positive_slice<'a>(ball: &'a CayleyBall, chi: &Character) -> PositiveSlice<'a> {
    assert_eq!(chi.vertex_count(), ball.graph.vertex_count(), "character over a different graph");
    let kept = match chi.integer_ray_i64() {
        Some(ray) => ball
            .elements
            .iter()
            .map(|e| word_value(&ray, e.blocks().iter().flat_map(|b| b.letters())) >= 0)
            .collect(),
        None => ball
            .elements
            .iter()
            .map(|e| !chi.of_word(&e.to_word()).is_negative())
            .collect(),
    };
    PositiveSlice {
        ball,
        character: chi.clone(),
        kept,
    }
}

/// Deterministic DOT rendering; kept elements are filled gray.
pub fn emit_dot(slice: &PositiveSlice) -> String {
    let ball = slice.ball;
    let g = &ball.graph;
    let mut out = String::from("graph cayley {\n  node [shape=circle, fontsize=10];\n");
    for (i, e) in ball.elements.iter().enumerate() {
        let label = if e.0.is_empty() {
            "1".to_string()
        } else {
            e.to_word().to_text(g)
        };
        let style = if slice.kept[i] {
            ", style=filled, fillcolor=gray70"
        } else {
            ""
        };
        let _ = writeln!(out, "  n{i} [label=\"{label}\"{style}];");
    }
    for (i, l, j) in ball.undirected_edges() {
        let style = if slice.kept[i] && slice.kept[j] {
            "penwidth=2"
        } else {
            "style=dashed"
        };
        let _ = writeln!(out, "  n{i} -- n{j} [label=\"{}\", {style}];", g.name(l.vertex));
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictTag {
    ConsistentConnected,
    WitnessDisconnected,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityVerdict {
    pub tag: VerdictTag,
    /// Two kept elements of the inner ball lying in different components of
    /// the padded slice, as normal-form words.
    pub witness: Option<(Word, Word)>,
    pub radius: usize,
    pub padded_radius: usize,
    pub elements_explored: usize,
    /// What the connected-dominating criterion predicts.
    pub predicted_connected: bool,
}

#[derive(Serialize)]
pub struct VerdictReport {
    pub tag: VerdictTag,
    pub witness: Option<[String; 2]>,
    pub radius: usize,
    pub padded_radius: usize,
    pub elements_explored: usize,
}

impl ConnectivityVerdict {
    pub fn report(&self, g: &SimplicialGraph) -> VerdictReport {
        let text = |w: &Word| if w.is_empty() { "1".to_string() } else { w.to_text(g) };
        VerdictReport {
            tag: self.tag,
            witness: self.witness.as_ref().map(|(a, b)| [text(a), text(b)]),
            radius: self.radius,
            padded_radius: self.padded_radius,
            elements_explored: self.elements_explored,
        }
    }
}

pub fn connectivity_verdict(
    g: &SimplicialGraph,
    chi: &Character,
    radius: usize,
    padding: usize,
) -> Result<ConnectivityVerdict, CayleyError> {
    connectivity_verdict_with_budget(g, chi, radius, padding, DEFAULT_BUDGET)
}

/// Decides, for every kept element of length at most `radius`, whether it
/// is joined to the identity inside the slice of length at most
/// `radius + padding`.
///
/// The padded slice is explored lazily. An element whose normal form can be
/// ordered with nonnegative prefix values (nonnegative letters first inside
/// each block) is joined to the identity along that geodesic, so a search
/// from a target stops on reaching one. A search that exhausts its
/// component has found a separated pair.
pub fn connectivity_verdict_with_budget(
    g: &SimplicialGraph,
    chi: &Character,
    radius: usize,
    padding: usize,
    budget: usize,
) -> Result<ConnectivityVerdict, CayleyError> {
    if radius == 0 {
        return Err(CayleyError::ZeroRadius);
    }
    let ray = machine_ray(g, chi)?;
    let predicted_connected = g.is_connected_dominating(chi.support());
    let padded = radius + padding;
    let rs = RewritingSystem::new(g);
    let n = g.vertex_count();

    let inner = build_ball_with_budget(g, radius, budget)?;
    let mut explored = inner.len();
    let value = |e: &CliqueWord| word_value(&ray, e.blocks().iter().flat_map(|b| b.letters()));
    // With nonnegative letters first, the running value inside a block dips
    // lowest at the block's end.
    let certified = |e: &CliqueWord| {
        let mut h = 0i64;
        e.blocks().iter().all(|b| {
            h += word_value(&ray, b.letters());
            h >= 0
        })
    };

    let mut targets: Vec<usize> = (0..inner.len()).filter(|&i| value(&inner.elements[i]) >= 0).collect();
    targets.sort_by_key(|&i| std::cmp::Reverse(inner.levels[i]));

    let mut joined_to_identity: HashSet<CliqueWord> = HashSet::new();
    let verdict = |tag, witness, explored| ConnectivityVerdict {
        tag,
        witness,
        radius,
        padded_radius: padded,
        elements_explored: explored,
        predicted_connected,
    };

    for t in targets {
        let target = &inner.elements[t];
        if certified(target) || joined_to_identity.contains(target) {
            continue;
        }
        let mut seen: HashMap<CliqueWord, i64> = HashMap::from([(target.clone(), value(target))]);
        let mut queue = VecDeque::from([target.clone()]);
        let mut joined = false;
        while let Some(e) = queue.pop_front() {
            if certified(&e) || joined_to_identity.contains(&e) {
                joined = true;
                break;
            }
            let h = seen[&e];
            for l in all_letters(n) {
                let hv = h + letter_value(&ray, l);
                if hv < 0 {
                    continue;
                }
                let next = rs.append_letter(e.blocks(), l);
                if next.letter_count() > padded || seen.contains_key(&next) {
                    continue;
                }
                explored += 1;
                if explored > budget {
                    return Err(CayleyError::BudgetExceeded {
                        budget,
                        radius_reached: radius,
                    });
                }
                seen.insert(next.clone(), hv);
                queue.push_back(next);
            }
        }
        if !joined {
            let witness = Some((Word::empty(), target.to_word()));
            let tag = if predicted_connected {
                VerdictTag::Inconclusive
            } else {
                VerdictTag::WitnessDisconnected
            };
            return Ok(verdict(tag, witness, explored));
        }
        joined_to_identity.extend(seen.into_keys());
    }
    Ok(verdict(VerdictTag::ConsistentConnected, None, explored))
}

/// A word equal to `target` whose every prefix has nonnegative value.
///
/// Letters are copied while the running value stays nonnegative. When the
/// next run `y1^r` would go negative, it is replaced together with the
/// following run `y2^s` by a detour `x1^n1 y1^r x2^n2 x1^-n1 ... xk^nk
/// x(k-1)^-n(k-1) y2^s` along a path `x1, ..., xk` of living vertices from
/// the closed neighbourhood of `y1` to that of `y2`, with each `xi` taken
/// with its positive sign. The leftover `xk^-nk` is pushed back onto the
/// input. Each detour consumes at least one input letter, and once only
/// the leftover run remains its value is covered by the running total.
pub fn positive_path(g: &SimplicialGraph, chi: &Character, target: &Word) -> Result<Word, CayleyError> {
    let ray = machine_ray(g, chi)?;
    let living = chi.support();
    if !g.is_connected_dominating(living) {
        return Err(CayleyError::Precondition(
            "living subgraph is not connected and dominating".into(),
        ));
    }
    if let Some(l) = target.letters().iter().find(|l| l.vertex >= g.vertex_count()) {
        return Err(CayleyError::Precondition(format!("letter index {} out of range", l.vertex)));
    }
    if word_value(&ray, target.letters().iter().copied()) < 0 {
        return Err(CayleyError::Precondition("character is negative on the target".into()));
    }
    let up = |v: usize| Letter::new(v, ray[v] < 0);

    let mut rest: VecDeque<Letter> = target.letters().iter().copied().collect();
    let mut out: Vec<Letter> = Vec::new();
    let mut h = 0i64;
    while let Some(&a) = rest.front() {
        let step = letter_value(&ray, a);
        if h + step >= 0 {
            out.push(a);
            h += step;
            rest.pop_front();
            continue;
        }
        let r = rest.iter().take_while(|&&l| l == a).count();
        rest.drain(..r);
        let Some(&b) = rest.front() else {
            return Err(CayleyError::ConstructionFailed("negative run at end of word".into()));
        };
        let s = rest.iter().take_while(|&&l| l == b).count();
        rest.drain(..s);
        let y1 = -step * r as i64;
        let y2 = (letter_value(&ray, b) * s as i64).abs();
        let route = living_route(g, living, a.vertex, b.vertex)
            .ok_or_else(|| CayleyError::ConstructionFailed("no living route".into()))?;

        // Minimal exponents: each power covers the previous one, the first
        // covers y1^r and the last also covers y2^s.
        let k = route.len();
        let mut powers = Vec::with_capacity(k);
        let mut need = y1;
        for (i, &x) in route.iter().enumerate() {
            if i + 1 == k {
                need += y2;
            }
            let unit = ray[x].abs();
            let p = (need + unit - 1) / unit;
            powers.push(p as usize);
            need = p as i64 * unit;
        }
        let emit = |out: &mut Vec<Letter>, l: Letter, times: usize| out.extend(std::iter::repeat(l).take(times));
        emit(&mut out, up(route[0]), powers[0]);
        emit(&mut out, a, r);
        for i in 1..k {
            emit(&mut out, up(route[i]), powers[i]);
            emit(&mut out, up(route[i - 1]).inv(), powers[i - 1]);
        }
        emit(&mut out, b, s);
        h = word_value(&ray, out.iter().copied());
        for _ in 0..powers[k - 1] {
            rest.push_front(up(route[k - 1]).inv());
        }
    }
    let path = Word(out);
    let rs = RewritingSystem::new(g);
    if !rs.words_equal(&path, target) {
        return Err(CayleyError::ConstructionFailed("result differs from target".into()));
    }
    if !prefixes_nonnegative(&ray, &path) {
        return Err(CayleyError::ConstructionFailed("a prefix has negative value".into()));
    }
    Ok(path)
}

fn prefixes_nonnegative(ray: &[i64], w: &Word) -> bool {
    let mut h = 0i64;
    w.letters().iter().all(|&l| {
        h += letter_value(ray, l);
        h >= 0
    })
}

/// Every prefix of `w` has nonnegative character value.
pub fn is_positive_path(chi: &Character, w: &Word) -> bool {
    let mut h = num_rational::BigRational::default();
    w.letters().iter().all(|&l| {
        if l.inverse {
            h -= chi.value(l.vertex);
        } else {
            h += chi.value(l.vertex);
        }
        !h.is_negative()
    })
}

fn closed_neighborhood(g: &SimplicialGraph, v: usize) -> VertexSet {
    g.neighbors(v).with(v)
}

/// Shortest path inside `living` from a living vertex commuting with `from`
/// to one commuting with `to`.
fn living_route(g: &SimplicialGraph, living: VertexSet, from: usize, to: usize) -> Option<Vec<usize>> {
    let sources = closed_neighborhood(g, from).intersection(living);
    let goals = closed_neighborhood(g, to).intersection(living);
    let mut parent = vec![usize::MAX; g.vertex_count()];
    let mut queue: VecDeque<usize> = sources.iter().collect();
    for v in sources.iter() {
        parent[v] = v;
    }
    while let Some(v) = queue.pop_front() {
        if goals.contains(v) {
            let mut route = vec![v];
            let mut cur = v;
            while parent[cur] != cur {
                cur = parent[cur];
                route.push(cur);
            }
            route.reverse();
            return Some(route);
        }
        for w in g.neighbors(v).intersection(living).iter() {
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}
