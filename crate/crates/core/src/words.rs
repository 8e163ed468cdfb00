//! Words over the standard generators, clique words, and the left-greedy
//! rewriting system that computes normal forms.
//!
//! A letter is a vertex together with an exponent sign. Letters are totally
//! ordered by vertex index with `x` immediately before `x^-1`; this order is
//! the one used by ζ and by the deterministic rewriting strategy. A clique
//! generator is stored as a bitmask over letter codes (`2 * vertex + inverse`).

use std::fmt;

use thiserror::Error;

use crate::graph::{SimplicialGraph, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed token `{0}`, expected `name` or `name^-1`")]
    BadToken(String),
    #[error("letter {0} occurs with both signs in one clique generator")]
    BothSigns(String),
    #[error("generators {0} and {1} do not commute")]
    NotCommuting(String, String),
    #[error("letter index {0} is outside the alphabet")]
    LetterOutOfRange(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub vertex: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(vertex: usize, inverse: bool) -> Self {
        Letter { vertex, inverse }
    }

    pub fn positive(vertex: usize) -> Self {
        Letter::new(vertex, false)
    }

    pub fn negative(vertex: usize) -> Self {
        Letter::new(vertex, true)
    }

    pub fn inv(self) -> Self {
        Letter::new(self.vertex, !self.inverse)
    }

    /// +1 or -1.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn code(self) -> usize {
        2 * self.vertex + self.inverse as usize
    }

    pub fn from_code(code: usize) -> Self {
        Letter::new(code / 2, code % 2 == 1)
    }

    pub fn to_text(self, g: &SimplicialGraph) -> String {
        if self.inverse {
            format!("{}^-1", g.name(self.vertex))
        } else {
            g.name(self.vertex).to_string()
        }
    }
}

/// A finite sequence of letters; not necessarily reduced.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Parses whitespace-separated tokens `name` or `name^-1`.
    pub fn parse(text: &str, g: &SimplicialGraph) -> Result<Word, WordError> {
        text.split_whitespace()
            .map(|token| {
                let (name, inverse) = match token.split_once('^') {
                    None => (token, false),
                    Some((name, "-1")) => (name, true),
                    Some((name, "1")) => (name, false),
                    Some(_) => return Err(WordError::BadToken(token.to_string())),
                };
                if name.is_empty() {
                    return Err(WordError::BadToken(token.to_string()));
                }
                let vertex = g
                    .index_of(name)
                    .map_err(|_| WordError::UnknownGenerator(name.to_string()))?;
                Ok(Letter::new(vertex, inverse))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn to_text(&self, g: &SimplicialGraph) -> String {
        self.0
            .iter()
            .map(|l| l.to_text(g))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Signed letter count per vertex (the image in the abelianization).
    pub fn exponent_sums(&self, vertex_count: usize) -> Vec<i64> {
        let mut sums = vec![0i64; vertex_count];
        for l in &self.0 {
            sums[l.vertex] += l.sign();
        }
        sums
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

pub fn word_length(w: &Word) -> usize {
    w.len()
}

/// A set of pairwise commuting letters, no vertex with both signs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CliqueGenerator(u128);

const EVEN_BITS: u128 = 0x5555_5555_5555_5555_5555_5555_5555_5555;

impl CliqueGenerator {
    pub const EMPTY: CliqueGenerator = CliqueGenerator(0);

    pub fn singleton(l: Letter) -> Self {
        CliqueGenerator(1u128 << l.code())
    }

    /// Validates the clique conditions against `g`.
    pub fn new(letters: &[Letter], g: &SimplicialGraph) -> Result<Self, WordError> {
        let mut mask = 0u128;
        for l in letters {
            if l.vertex >= g.vertex_count() {
                return Err(WordError::LetterOutOfRange(l.vertex));
            }
            mask |= 1u128 << l.code();
        }
        let cg = CliqueGenerator(mask);
        cg.validate(g)?;
        Ok(cg)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, l: Letter) -> bool {
        self.0 >> l.code() & 1 == 1
    }

    /// Letters in ascending order.
    pub fn letters(self) -> impl Iterator<Item = Letter> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let code = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(Letter::from_code(code))
            }
        })
    }

    pub fn support(self) -> VertexSet {
        self.letters().map(|l| l.vertex).collect()
    }

    /// Same set with every letter inverted.
    fn inverted(self) -> u128 {
        ((self.0 & EVEN_BITS) << 1) | ((self.0 >> 1) & EVEN_BITS)
    }

    pub fn validate(self, g: &SimplicialGraph) -> Result<(), WordError> {
        let letters: Vec<Letter> = self.letters().collect();
        for (i, a) in letters.iter().enumerate() {
            for b in &letters[i + 1..] {
                if a.vertex == b.vertex {
                    return Err(WordError::BothSigns(g.name(a.vertex).to_string()));
                }
                if !g.adjacent(a.vertex, b.vertex) {
                    return Err(WordError::NotCommuting(
                        g.name(a.vertex).to_string(),
                        g.name(b.vertex).to_string(),
                    ));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CliqueGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters()
            .map(|l| format!("{}{}", l.vertex, if l.inverse { "'" } else { "" }))
            .collect();
        write!(f, "[{{{}}}]", parts.join(","))
    }
}

/// ζ: the letters of a clique generator in ascending generator order.
pub fn zeta(cg: CliqueGenerator) -> Word {
    cg.letters().collect()
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct CliqueWord(pub Vec<CliqueGenerator>);

impl CliqueWord {
    pub fn blocks(&self) -> &[CliqueGenerator] {
        &self.0
    }

    /// Number of standard letters.
    pub fn letter_count(&self) -> usize {
        self.0.iter().map(|b| b.len()).sum()
    }

    /// ζ applied blockwise.
    pub fn to_word(&self) -> Word {
        self.0.iter().flat_map(|b| b.letters()).collect()
    }
}

/// One instance of a rewriting rule.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rewrite {
    /// Rule 1: move `letter` from block `at + 1` into block `at`.
    Shift { at: usize, letter: Letter },
    /// Rule 2: cancel `letter` in block `at` against its inverse in block `at + 1`.
    Cancel { at: usize, letter: Letter },
    /// Rule 3: delete the empty block `at`.
    DropEmpty { at: usize },
}

/// One singleton block per letter.
pub fn lift(w: &Word) -> CliqueWord {
    CliqueWord(w.0.iter().map(|&l| CliqueGenerator::singleton(l)).collect())
}

/// The rewriting system of a fixed graph. Cheap to build; reuse it when
/// normalizing many words over the same graph.
#[derive(Clone, Debug)]
pub struct RewritingSystem {
    /// For each letter code, the letters it commutes with (distinct adjacent vertices).
    commutes: Vec<u128>,
}

impl RewritingSystem {
    pub fn new(g: &SimplicialGraph) -> Self {
        let n = g.vertex_count();
        let mut commutes = vec![0u128; 2 * n];
        for v in 0..n {
            let mut mask = 0u128;
            for w in g.neighbors(v).iter() {
                mask |= 0b11u128 << (2 * w);
            }
            commutes[2 * v] = mask;
            commutes[2 * v + 1] = mask;
        }
        RewritingSystem { commutes }
    }

    pub fn letter_count(&self) -> usize {
        self.commutes.len()
    }

    fn cancel_at(&self, u: CliqueGenerator, v: CliqueGenerator) -> Option<Letter> {
        let both = u.0 & v.inverted();
        (both != 0).then(|| Letter::from_code(both.trailing_zeros() as usize))
    }

    fn shift_candidates(&self, u: CliqueGenerator, v: CliqueGenerator) -> impl Iterator<Item = Letter> + '_ {
        v.letters().filter(move |x| u.0 & !self.commutes[x.code()] == 0)
    }

    /// The rule instance the deterministic strategy applies at position `i`,
    /// if any: rule 2, then rule 3, then rule 1 with the least movable letter.
    fn rule_at(&self, blocks: &[CliqueGenerator], i: usize) -> Option<Rewrite> {
        let u = blocks[i];
        let next = blocks.get(i + 1).copied();
        if let Some(v) = next {
            if let Some(letter) = self.cancel_at(u, v) {
                return Some(Rewrite::Cancel { at: i, letter });
            }
        }
        if u.is_empty() {
            return Some(Rewrite::DropEmpty { at: i });
        }
        let v = next?;
        self.shift_candidates(u, v)
            .next()
            .map(|letter| Rewrite::Shift { at: i, letter })
    }

    fn first_rule_from(&self, blocks: &[CliqueGenerator], start: usize) -> Option<Rewrite> {
        (start..blocks.len()).find_map(|i| self.rule_at(blocks, i))
    }

    /// Every applicable rule instance, in position order.
    pub fn applicable_rewrites(&self, cw: &CliqueWord) -> Vec<Rewrite> {
        let blocks = &cw.0;
        let mut out = Vec::new();
        for i in 0..blocks.len() {
            let u = blocks[i];
            if u.is_empty() {
                out.push(Rewrite::DropEmpty { at: i });
            }
            if let Some(&v) = blocks.get(i + 1) {
                let both = u.0 & v.inverted();
                out.extend(
                    CliqueGenerator(both)
                        .letters()
                        .map(|letter| Rewrite::Cancel { at: i, letter }),
                );
                out.extend(
                    self.shift_candidates(u, v)
                        .map(|letter| Rewrite::Shift { at: i, letter }),
                );
            }
        }
        out
    }

    /// Applies a rule instance, which must be one returned by
    /// [`Self::applicable_rewrites`] for `cw`.
    pub fn apply(&self, cw: &mut CliqueWord, rw: Rewrite) {
        apply_to_blocks(&mut cw.0, rw);
    }

    /// One step of the deterministic strategy, or `None` if `cw` is irreducible.
    pub fn rewrite_step(&self, cw: &CliqueWord) -> Option<CliqueWord> {
        let rw = self.first_rule_from(&cw.0, 0)?;
        let mut out = cw.clone();
        self.apply(&mut out, rw);
        Some(out)
    }

    /// Rewrites to the irreducible clique word, returning it with the number
    /// of rule applications.
    ///
    /// Equivalent to iterating [`Self::rewrite_step`]: positions left of the
    /// last rewrite stay irreducible, so scanning resumes one block earlier.
    pub fn reduce(&self, cw: CliqueWord) -> (CliqueWord, usize) {
        self.reduce_from(cw.0, 0)
    }

    fn reduce_from(&self, mut blocks: Vec<CliqueGenerator>, start: usize) -> (CliqueWord, usize) {
        let mut steps = 0;
        let mut pos = start;
        while let Some(rw) = self.first_rule_from(&blocks, pos) {
            let at = match rw {
                Rewrite::Shift { at, .. } | Rewrite::Cancel { at, .. } | Rewrite::DropEmpty { at } => at,
            };
            apply_to_blocks(&mut blocks, rw);
            steps += 1;
            pos = at.saturating_sub(1);
        }
        (CliqueWord(blocks), steps)
    }

    /// Irreducible clique word of `w`.
    pub fn normal_blocks(&self, w: &Word) -> CliqueWord {
        self.reduce(lift(w)).0
    }

    pub fn normal_form(&self, w: &Word) -> Word {
        self.normal_blocks(w).to_word()
    }

    /// Normal form together with the number of rewriting steps taken.
    pub fn normal_form_counted(&self, w: &Word) -> (Word, usize) {
        let (cw, steps) = self.reduce(lift(w));
        (cw.to_word(), steps)
    }

    /// Normal blocks of `g * letter` from the normal blocks of `g`.
    pub fn append_letter(&self, blocks: &[CliqueGenerator], letter: Letter) -> CliqueWord {
        let mut v = Vec::with_capacity(blocks.len() + 1);
        v.extend_from_slice(blocks);
        v.push(CliqueGenerator::singleton(letter));
        let start = blocks.len().saturating_sub(1);
        self.reduce_from(v, start).0
    }

    pub fn words_equal(&self, a: &Word, b: &Word) -> bool {
        self.normal_form(a) == self.normal_form(b)
    }
}

fn apply_to_blocks(blocks: &mut Vec<CliqueGenerator>, rw: Rewrite) {
    match rw {
        Rewrite::Shift { at, letter } => {
            let bit = 1u128 << letter.code();
            debug_assert!(blocks[at + 1].0 & bit != 0);
            blocks[at + 1].0 &= !bit;
            blocks[at].0 |= bit;
        }
        Rewrite::Cancel { at, letter } => {
            blocks[at].0 &= !(1u128 << letter.code());
            blocks[at + 1].0 &= !(1u128 << letter.inv().code());
        }
        Rewrite::DropEmpty { at } => {
            debug_assert!(blocks[at].is_empty());
            blocks.remove(at);
        }
    }
}

pub fn rewrite_step(cw: &CliqueWord, g: &SimplicialGraph) -> Option<CliqueWord> {
    RewritingSystem::new(g).rewrite_step(cw)
}

pub fn normal_form(w: &Word, g: &SimplicialGraph) -> Word {
    RewritingSystem::new(g).normal_form(w)
}

pub fn words_equal(a: &Word, b: &Word, g: &SimplicialGraph) -> bool {
    RewritingSystem::new(g).words_equal(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> SimplicialGraph {
        SimplicialGraph::path(&["x", "y", "z"]).unwrap()
    }

    fn w(text: &str, g: &SimplicialGraph) -> Word {
        Word::parse(text, g).unwrap()
    }

    fn cg(text: &str, g: &SimplicialGraph) -> CliqueGenerator {
        CliqueGenerator::new(&w(text, g).0, g).unwrap()
    }

    #[test]
    fn lift_examples() {
        let g = path3();
        assert_eq!(lift(&w("x y^-1", &g)), CliqueWord(vec![cg("x", &g), cg("y^-1", &g)]));
        assert_eq!(lift(&Word::empty()), CliqueWord::default());
        assert_eq!(lift(&w("z y x", &g)).0.len(), 3);
    }

    #[test]
    fn rewrite_step_examples() {
        let g = path3();
        let rs = RewritingSystem::new(&g);
        let moved = rs.rewrite_step(&lift(&w("x y^-1", &g))).unwrap();
        assert_eq!(moved, CliqueWord(vec![cg("x y^-1", &g), CliqueGenerator::EMPTY]));
        let cancelled = rs.rewrite_step(&lift(&w("x x^-1", &g))).unwrap();
        assert_eq!(cancelled, CliqueWord(vec![CliqueGenerator::EMPTY; 2]));
        let dropped = rs
            .rewrite_step(&CliqueWord(vec![CliqueGenerator::EMPTY, cg("y", &g)]))
            .unwrap();
        assert_eq!(dropped, CliqueWord(vec![cg("y", &g)]));
        assert_eq!(rs.rewrite_step(&lift(&w("z x", &g))), None);
    }

    #[test]
    fn normal_form_examples() {
        let g = path3();
        assert_eq!(normal_form(&w("x x^-1", &g), &g), Word::empty());
        assert_eq!(normal_form(&w("z y", &g), &g), w("y z", &g));
        assert_eq!(normal_form(&w("x y x^-1", &g), &g), w("y", &g));
        assert_eq!(normal_form(&w("z x", &g), &g), w("z x", &g));
    }

    #[test]
    fn zeta_examples() {
        let g = path3();
        assert_eq!(zeta(cg("z y", &g)), w("y z", &g));
        assert_eq!(zeta(cg("x^-1", &g)), w("x^-1", &g));
        let k3 = SimplicialGraph::complete(&["x", "y", "z"]).unwrap();
        assert_eq!(zeta(cg("z x y^-1", &k3)), w("x y^-1 z", &k3));
    }

    #[test]
    fn clique_generator_validation() {
        let g = path3();
        assert!(matches!(
            CliqueGenerator::new(&w("x x^-1", &g).0, &g),
            Err(WordError::BothSigns(_))
        ));
        assert!(matches!(
            CliqueGenerator::new(&w("x z", &g).0, &g),
            Err(WordError::NotCommuting(..))
        ));
    }

    #[test]
    fn equality_examples() {
        let k2 = SimplicialGraph::complete(&["x", "y"]).unwrap();
        assert!(words_equal(&w("x y", &k2), &w("y x", &k2), &k2));
        let f2 = SimplicialGraph::null(&["x", "y"]).unwrap();
        assert!(!words_equal(&w("x y", &f2), &w("y x", &f2), &f2));
        let base = w("y x y^-1", &f2);
        assert!(words_equal(&base, &base.concat(&w("x x^-1", &f2)), &f2));
    }

    #[test]
    fn word_text_format() {
        let g = path3();
        let word = w("x y^-1  z^1", &g);
        assert_eq!(word.to_text(&g), "x y^-1 z");
        assert_eq!(word_length(&word), 3);
        assert_eq!(word_length(&Word::empty()), 0);
        assert!(matches!(Word::parse("x^2", &g), Err(WordError::BadToken(_))));
        assert!(matches!(Word::parse("q", &g), Err(WordError::UnknownGenerator(_))));
    }

    #[test]
    fn append_letter_matches_full_normalization() {
        let g = SimplicialGraph::cycle(&["a", "b", "c", "d"]).unwrap();
        let rs = RewritingSystem::new(&g);
        let base = w("a c^-1 b d a^-1", &g);
        let blocks = rs.normal_blocks(&base);
        for code in 0..8 {
            let l = Letter::from_code(code);
            let mut extended = base.clone();
            extended.0.push(l);
            assert_eq!(rs.append_letter(&blocks.0, l), rs.normal_blocks(&extended));
        }
    }
}
