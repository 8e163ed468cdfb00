//! Characters of a graph group as exact-rational vertex assignments, the
//! open simplices of the character sphere, and integer maps onto `Z^n`.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::graph::{SimplicialGraph, VertexSet};
use crate::words::Word;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("the zero map is not a character")]
    Zero,
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("value for `{vertex}` is not a rational number: {value}")]
    BadValue { vertex: String, value: String },
    #[error("matrix row for `{vertex}` has length {got}, expected {expected}")]
    RowLength { vertex: String, expected: usize, got: usize },
    #[error("matrix has no columns")]
    NoColumns,
    #[error("matrix has only zero rows")]
    ZeroMatrix,
    #[error("phi has length {got}, matrix has {expected} columns")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("phi is the zero vector")]
    ZeroPhi,
    #[error("malformed JSON: {0}")]
    Json(String),
}

fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.contains('/') {
        let r = Rational::from_str(text).ok()?;
        Some(r)
    } else {
        BigInt::from_str(text).ok().map(Rational::from_integer)
    }
}

fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A nonzero assignment of rationals to the vertices of a graph, indexed by
/// vertex position.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Character {
    values: Vec<Rational>,
}

impl Character {
    pub fn new(values: Vec<Rational>) -> Result<Self, CharacterError> {
        if values.iter().all(Zero::is_zero) {
            return Err(CharacterError::Zero);
        }
        Ok(Character { values })
    }

    /// Integer-valued character for a graph with `values.len()` vertices.
    pub fn from_integers(values: &[i64]) -> Result<Self, CharacterError> {
        Self::new(values.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    /// Checks the value count against `g`.
    pub fn for_graph(g: &SimplicialGraph, values: Vec<Rational>) -> Result<Self, CharacterError> {
        if values.len() != g.vertex_count() {
            return Err(CharacterError::Length {
                expected: g.vertex_count(),
                got: values.len(),
            });
        }
        Self::new(values)
    }

    /// Parses `{"x": "1", "y": "-2/3"}`; omitted vertices map to zero.
    /// Integer JSON numbers are accepted as well as strings.
    pub fn from_json(g: &SimplicialGraph, text: &str) -> Result<Self, CharacterError> {
        let raw: serde_json::Map<String, Value> =
            serde_json::from_str(text).map_err(|e| CharacterError::Json(e.to_string()))?;
        let mut values = vec![Rational::zero(); g.vertex_count()];
        for (name, value) in raw {
            let v = g
                .index_of(&name)
                .map_err(|_| CharacterError::UnknownVertex(name.clone()))?;
            let parsed = match &value {
                Value::String(s) => parse_rational(s),
                Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
                _ => None,
            };
            values[v] = parsed.ok_or_else(|| CharacterError::BadValue {
                vertex: name.clone(),
                value: value.to_string(),
            })?;
        }
        Self::new(values)
    }

    pub fn to_json(&self, g: &SimplicialGraph) -> String {
        serde_json::to_string(&self.named(g)).expect("character serialization cannot fail")
    }

    /// Serializable view in graph vertex order.
    pub fn named<'a>(&'a self, g: &'a SimplicialGraph) -> NamedCharacter<'a> {
        NamedCharacter { chi: self, graph: g }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, v: usize) -> &Rational {
        &self.values[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.values.len()
    }

    /// Vertices with nonzero value.
    pub fn support(&self) -> VertexSet {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(v, _)| v)
            .collect()
    }

    /// Absolute value taken vertexwise.
    pub fn canonicalize(&self) -> Character {
        Character {
            values: self.values.iter().map(|x| x.abs()).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> Result<Character, CharacterError> {
        Character::new(self.values.iter().map(|x| x * factor).collect())
    }

    pub fn simplex(&self) -> OpenSimplex {
        let negative = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_negative())
            .map(|(v, _)| v)
            .collect();
        OpenSimplex {
            support: self.support(),
            negative,
        }
    }

    /// The value on a word: the sum of signed letter values.
    pub fn of_word(&self, w: &Word) -> Rational {
        let mut total = Rational::zero();
        for l in w.letters() {
            if l.inverse {
                total -= &self.values[l.vertex];
            } else {
                total += &self.values[l.vertex];
            }
        }
        total
    }

    /// The primitive integer vector on the same ray.
    pub fn integer_ray(&self) -> Vec<BigInt> {
        let lcm = self
            .values
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self
            .values
            .iter()
            .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        ints.into_iter().map(|x| x / &gcd).collect()
    }

    /// [`Self::integer_ray`] as machine integers, if every entry fits.
    pub fn integer_ray_i64(&self) -> Option<Vec<i64>> {
        self.integer_ray().iter().map(ToPrimitive::to_i64).collect()
    }
}

impl Neg for &Character {
    type Output = Character;

    fn neg(self) -> Character {
        Character {
            values: self.values.iter().map(|x| -x).collect(),
        }
    }
}

pub struct NamedCharacter<'a> {
    chi: &'a Character,
    graph: &'a SimplicialGraph,
}

impl Serialize for NamedCharacter<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.chi.values.len()))?;
        for (v, x) in self.chi.values.iter().enumerate() {
            map.serialize_entry(self.graph.name(v), &rational_to_string(x))?;
        }
        map.end()
    }
}

/// Positive ray representative: the first nonzero value has absolute value 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ray(Character);

impl Ray {
    pub fn new(chi: &Character) -> Ray {
        let first = chi
            .values
            .iter()
            .find(|x| !x.is_zero())
            .expect("characters are nonzero")
            .abs();
        Ray(Character {
            values: chi.values.iter().map(|x| x / &first).collect(),
        })
    }

    pub fn representative(&self) -> &Character {
        &self.0
    }
}

/// Full subgraph on the vertices where `chi` is nonzero.
pub fn living_subgraph(g: &SimplicialGraph, chi: &Character) -> SimplicialGraph {
    g.full_subgraph(chi.support())
        .expect("character support lies in the graph")
}

pub fn canonicalize(chi: &Character) -> Character {
    chi.canonicalize()
}

pub fn simplex_of(chi: &Character) -> OpenSimplex {
    chi.simplex()
}

pub fn character_of_word(chi: &Character, w: &Word) -> Rational {
    chi.of_word(w)
}

/// An open simplex of the character sphere: a nonempty support with a sign
/// per support vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpenSimplex {
    support: VertexSet,
    negative: VertexSet,
}

impl OpenSimplex {
    /// `negative` must be a subset of a nonempty `support`.
    pub fn new(support: VertexSet, negative: VertexSet) -> Option<Self> {
        (!support.is_empty() && negative.is_subset(support)).then_some(OpenSimplex { support, negative })
    }

    pub fn support(&self) -> VertexSet {
        self.support
    }

    pub fn negative(&self) -> VertexSet {
        self.negative
    }

    /// `Some(+1)` or `Some(-1)` on the support, `None` elsewhere.
    pub fn sign(&self, v: usize) -> Option<i8> {
        if !self.support.contains(v) {
            None
        } else if self.negative.contains(v) {
            Some(-1)
        } else {
            Some(1)
        }
    }

    pub fn with_signs(&self, negative: VertexSet) -> Option<Self> {
        OpenSimplex::new(self.support, negative)
    }

    /// An integer character in this simplex (values ±1).
    pub fn sample_character(&self, vertex_count: usize) -> Character {
        let values = (0..vertex_count)
            .map(|v| match self.sign(v) {
                Some(s) => Rational::from_integer(BigInt::from(s)),
                None => Rational::zero(),
            })
            .collect();
        Character::new(values).expect("support is nonempty")
    }

    pub fn describe(&self, g: &SimplicialGraph) -> String {
        let parts: Vec<String> = self
            .support
            .iter()
            .map(|v| format!("{}{}", if self.negative.contains(v) { '-' } else { '+' }, g.name(v)))
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for OpenSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OpenSimplex(support={:?}, negative={:?})", self.support, self.negative)
    }
}

/// Submasks of `mask` in increasing numeric order.
pub(crate) fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some(((cur | !mask).wrapping_add(1)) & mask)
        };
        Some(cur)
    })
}

/// Every open simplex: supports by size then lexicographically, sign
/// patterns by the bitmask of negative vertices.
pub fn enumerate_simplices(g: &SimplicialGraph) -> Vec<OpenSimplex> {
    let mut supports: Vec<VertexSet> = submasks(g.all_vertices().bits())
        .skip(1)
        .map(VertexSet::from_bits)
        .collect();
    supports.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.lex_cmp(*b)));
    let mut out = Vec::new();
    for s in supports {
        for neg in submasks(s.bits()) {
            out.push(OpenSimplex {
                support: s,
                negative: VertexSet::from_bits(neg),
            });
        }
    }
    out
}

/// A homomorphism to `Z^n` given by one integer row per vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegerCharacterMatrix {
    rows: Vec<Vec<i64>>,
    columns: usize,
}

/// Result of composing a functional with a matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Composite {
    Character(Character),
    /// The functional annihilates every row.
    Zero,
}

impl IntegerCharacterMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, CharacterError> {
        let columns = rows.first().map(Vec::len).unwrap_or(0);
        if columns == 0 {
            return Err(CharacterError::NoColumns);
        }
        for (v, row) in rows.iter().enumerate() {
            if row.len() != columns {
                return Err(CharacterError::RowLength {
                    vertex: format!("#{v}"),
                    expected: columns,
                    got: row.len(),
                });
            }
        }
        if rows.iter().flatten().all(|&x| x == 0) {
            return Err(CharacterError::ZeroMatrix);
        }
        Ok(IntegerCharacterMatrix { rows, columns })
    }

    /// Parses `{"x": [1,0], "y": [0,1]}`; omitted vertices get zero rows.
    pub fn from_json(g: &SimplicialGraph, text: &str) -> Result<Self, CharacterError> {
        let raw: serde_json::Map<String, Value> =
            serde_json::from_str(text).map_err(|e| CharacterError::Json(e.to_string()))?;
        let mut named: Vec<Option<Vec<i64>>> = vec![None; g.vertex_count()];
        let mut columns = None;
        for (name, value) in raw {
            let v = g
                .index_of(&name)
                .map_err(|_| CharacterError::UnknownVertex(name.clone()))?;
            let row: Vec<i64> = serde_json::from_value(value.clone()).map_err(|_| CharacterError::BadValue {
                vertex: name.clone(),
                value: value.to_string(),
            })?;
            match columns {
                None => columns = Some(row.len()),
                Some(c) if c != row.len() => {
                    return Err(CharacterError::RowLength {
                        vertex: name,
                        expected: c,
                        got: row.len(),
                    })
                }
                _ => {}
            }
            named[v] = Some(row);
        }
        let columns = columns.filter(|&c| c > 0).ok_or(CharacterError::NoColumns)?;
        Self::new(
            named
                .into_iter()
                .map(|r| r.unwrap_or_else(|| vec![0; columns]))
                .collect(),
        )
    }

    pub fn to_json(&self, g: &SimplicialGraph) -> String {
        let mut out = String::from("{");
        for (v, row) in self.rows.iter().enumerate() {
            if v > 0 {
                out.push(',');
            }
            out.push_str(&serde_json::to_string(g.name(v)).expect("string"));
            out.push(':');
            out.push_str(&serde_json::to_string(row).expect("row"));
        }
        out.push('}');
        out
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn row(&self, v: usize) -> &[i64] {
        &self.rows[v]
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn vertex_count(&self) -> usize {
        self.rows.len()
    }

    /// The single-column matrix of an integer-valued assignment.
    pub fn column(values: &[i64]) -> Result<Self, CharacterError> {
        Self::new(values.iter().map(|&x| vec![x]).collect())
    }

    /// Vertex `v` maps to `dot(phi, row(v))`.
    pub fn compose(&self, phi: &[BigInt]) -> Result<Composite, CharacterError> {
        if phi.len() != self.columns {
            return Err(CharacterError::DimensionMismatch {
                expected: self.columns,
                got: phi.len(),
            });
        }
        if phi.iter().all(Zero::is_zero) {
            return Err(CharacterError::ZeroPhi);
        }
        let values: Vec<Rational> = self
            .rows
            .iter()
            .map(|row| {
                let dot: BigInt = row.iter().zip(phi).map(|(&a, b)| BigInt::from(a) * b).sum();
                Rational::from_integer(dot)
            })
            .collect();
        Ok(match Character::new(values) {
            Ok(chi) => Composite::Character(chi),
            Err(_) => Composite::Zero,
        })
    }
}

pub fn compose(phi: &[BigInt], m: &IntegerCharacterMatrix) -> Result<Composite, CharacterError> {
    m.compose(phi)
}
