//! Membership in Σ¹ and the finite-generation criteria built on it.
//!
//! Every predicate here reduces to one question about the graph: is the
//! living subgraph of a character connected and dominating?

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::characters::{enumerate_simplices, Character, CharacterError, Composite, IntegerCharacterMatrix, OpenSimplex};
use crate::graph::{Combinations, GraphError, SimplicialGraph, VertexSet};
use crate::lattice;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SigmaError {
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("character has {got} values, graph has {expected} vertices")]
    VertexCountMismatch { expected: usize, got: usize },
    #[error("matrix has rank {rank}, needs full column rank {columns}")]
    RankDeficient { rank: usize, columns: usize },
    #[error("invalid dominating family: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Family(Vec<FamilyViolation>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyViolation {
    EmptyFamily,
    EmptyMember(usize),
    ForeignVertex(usize),
    Overlap(usize, usize),
    NotConnected(usize),
    NotDominating(usize),
}

impl std::fmt::Display for FamilyViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyViolation::EmptyFamily => write!(f, "family is empty"),
            FamilyViolation::EmptyMember(i) => write!(f, "member {i} is empty"),
            FamilyViolation::ForeignVertex(i) => write!(f, "member {i} has a vertex outside the graph"),
            FamilyViolation::Overlap(i, j) => write!(f, "members {i} and {j} intersect"),
            FamilyViolation::NotConnected(i) => write!(f, "member {i} is not connected"),
            FamilyViolation::NotDominating(i) => write!(f, "member {i} is not dominating"),
        }
    }
}

fn check_character(g: &SimplicialGraph, chi: &Character) -> Result<(), SigmaError> {
    if chi.vertex_count() != g.vertex_count() {
        return Err(SigmaError::VertexCountMismatch {
            expected: g.vertex_count(),
            got: chi.vertex_count(),
        });
    }
    Ok(())
}

fn check_matrix(g: &SimplicialGraph, m: &IntegerCharacterMatrix) -> Result<(), SigmaError> {
    if m.vertex_count() != g.vertex_count() {
        return Err(SigmaError::VertexCountMismatch {
            expected: g.vertex_count(),
            got: m.vertex_count(),
        });
    }
    Ok(())
}

/// Signs are ignored: only the support matters.
pub fn sigma1_contains_simplex(g: &SimplicialGraph, s: &OpenSimplex) -> bool {
    debug_assert!(g.check_set(s.support()).is_ok());
    g.is_connected_dominating(s.support())
}

pub fn sigma1_contains_character(g: &SimplicialGraph, chi: &Character) -> Result<bool, SigmaError> {
    check_character(g, chi)?;
    Ok(sigma1_contains_simplex(g, &chi.simplex()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sigma1Report {
    pub total_simplices: usize,
    pub member_simplices: Vec<OpenSimplex>,
    pub is_empty: bool,
    /// Every top-dimensional simplex is a member.
    pub closure_is_sphere: bool,
}

impl Sigma1Report {
    /// Supports of the non-member simplices, each listed once.
    pub fn excluded_supports(&self, g: &SimplicialGraph) -> Vec<VertexSet> {
        let members: std::collections::HashSet<VertexSet> =
            self.member_simplices.iter().map(|s| s.support()).collect();
        let mut out: Vec<VertexSet> = enumerate_simplices(g)
            .into_iter()
            .map(|s| s.support())
            .filter(|s| !members.contains(s))
            .collect();
        out.dedup();
        out
    }
}

pub fn sigma1_enumerate(g: &SimplicialGraph) -> Sigma1Report {
    let all = enumerate_simplices(g);
    let total_simplices = all.len();
    let full = g.all_vertices();
    let mut closure_is_sphere = true;
    let mut member_simplices = Vec::new();
    for s in all {
        let member = sigma1_contains_simplex(g, &s);
        if s.support() == full && !member {
            closure_is_sphere = false;
        }
        if member {
            member_simplices.push(s);
        }
    }
    Sigma1Report {
        total_simplices,
        is_empty: member_simplices.is_empty(),
        closure_is_sphere: closure_is_sphere && total_simplices > 0,
        member_simplices,
    }
}

/// Every open simplex is a member.
pub fn sigma1_full_sphere(g: &SimplicialGraph) -> bool {
    enumerate_simplices(g)
        .iter()
        .all(|s| sigma1_contains_simplex(g, s))
}

/// Finite generation of the kernel of a rational character: both `chi` and
/// `-chi` lie in Σ¹, which by sign symmetry is one support test.
pub fn kernel_fg_rational(g: &SimplicialGraph, chi: &Character) -> Result<bool, SigmaError> {
    Ok(sigma1_contains_character(g, chi)? && sigma1_contains_character(g, &-chi)?)
}

fn rows_of(m: &IntegerCharacterMatrix, s: VertexSet) -> Vec<Vec<BigInt>> {
    s.iter()
        .map(|v| m.row(v).iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// For every `I ⊂ s` and `j ∈ s \ I`, adding row `j` to rows `I` raises the
/// rank (infinite index).
pub fn chi_linearly_independent(m: &IntegerCharacterMatrix, s: VertexSet) -> bool {
    let members: Vec<usize> = s.iter().collect();
    for mask in 0u64..(1u64 << members.len()) {
        let subset: VertexSet = members
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        let base = lattice::rank(&rows_of(m, subset));
        for &j in members.iter().filter(|&&j| !subset.contains(j)) {
            if lattice::rank(&rows_of(m, subset.with(j))) <= base {
                return false;
            }
        }
    }
    true
}

fn require_full_rank(m: &IntegerCharacterMatrix) -> Result<(), SigmaError> {
    let rank = lattice::rank(&rows_of(m, VertexSet::full(m.vertex_count())));
    if rank != m.columns() {
        return Err(SigmaError::RankDeficient {
            rank,
            columns: m.columns(),
        });
    }
    Ok(())
}

/// The χ-oriented functionals: primitive normals to the spans of
/// `(n-1)`-sets of generators with independent images, both signs, sorted.
pub fn enumerate_chi_oriented(m: &IntegerCharacterMatrix) -> Result<Vec<Vec<BigInt>>, SigmaError> {
    require_full_rank(m)?;
    let n = m.columns();
    let mut normals: Vec<Vec<BigInt>> = Vec::new();
    for combo in Combinations::new(m.vertex_count(), n - 1) {
        let rows = rows_of(m, VertexSet::from_indices(combo));
        if lattice::rank(&rows) != n - 1 {
            continue;
        }
        let phi = lattice::primitive_normal(&rows, n).expect("corank one");
        if !normals.contains(&phi) {
            normals.push(phi);
        }
    }
    normals.sort();
    Ok(normals
        .into_iter()
        .flat_map(|phi| {
            let neg: Vec<BigInt> = phi.iter().map(|x| -x).collect();
            [phi, neg]
        })
        .collect())
}

/// Integers that fit in `i64` are written as JSON numbers, larger ones as strings.
fn serialize_integers<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match i64::try_from(x) {
            Ok(small) => seq.serialize_element(&small)?,
            Err(_) => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrientedVerdict {
    #[serde(serialize_with = "serialize_integers")]
    pub phi: Vec<BigInt>,
    pub living: Vec<String>,
    pub connected: bool,
    pub dominating: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZnKernelReport {
    pub finitely_generated: bool,
    pub oriented: Vec<OrientedVerdict>,
}

pub fn kernel_fg_zn_report(g: &SimplicialGraph, m: &IntegerCharacterMatrix) -> Result<ZnKernelReport, SigmaError> {
    check_matrix(g, m)?;
    let mut oriented = Vec::new();
    for phi in enumerate_chi_oriented(m)? {
        let living = match m.compose(&phi)? {
            Composite::Character(chi) => chi.support(),
            Composite::Zero => VertexSet::EMPTY,
        };
        oriented.push(OrientedVerdict {
            living: g.names_of(living),
            connected: g.spans_connected(living),
            dominating: !living.is_empty() && g.dominates(living),
            phi,
        });
    }
    Ok(ZnKernelReport {
        finitely_generated: oriented.iter().all(|o| o.connected && o.dominating),
        oriented,
    })
}

pub fn kernel_fg_zn(g: &SimplicialGraph, m: &IntegerCharacterMatrix) -> Result<bool, SigmaError> {
    Ok(kernel_fg_zn_report(g, m)?.finitely_generated)
}

/// A set of fewer than `n` vertices whose removal disconnects the graph, if
/// any. Its existence rules out maps onto `Z^n` with finitely generated kernel.
pub fn disconnecting_set_below(g: &SimplicialGraph, n: usize) -> Option<VertexSet> {
    (0..n.min(g.vertex_count())).find_map(|m| g.exists_disconnecting_set(m).ok().flatten())
}

pub fn no_fg_kernel_above(g: &SimplicialGraph, n: usize) -> bool {
    disconnecting_set_below(g, n).is_some()
}

/// The commutator subgroup is finitely generated exactly for complete graphs.
pub fn commutator_fg(g: &SimplicialGraph) -> bool {
    g.is_complete()
}

/// Sends every vertex of member `i` to the unit vector `e_i` and every other
/// vertex to zero.
pub fn map_from_dominating_family(
    g: &SimplicialGraph,
    family: &[VertexSet],
) -> Result<IntegerCharacterMatrix, SigmaError> {
    let mut violations = Vec::new();
    if family.is_empty() {
        violations.push(FamilyViolation::EmptyFamily);
    }
    for (i, &a) in family.iter().enumerate() {
        if g.check_set(a).is_err() {
            violations.push(FamilyViolation::ForeignVertex(i));
            continue;
        }
        if a.is_empty() {
            violations.push(FamilyViolation::EmptyMember(i));
            continue;
        }
        for (j, &b) in family.iter().enumerate().skip(i + 1) {
            if !a.is_disjoint(b) {
                violations.push(FamilyViolation::Overlap(i, j));
            }
        }
        if !g.spans_connected(a) {
            violations.push(FamilyViolation::NotConnected(i));
        }
        if !g.dominates(a) {
            violations.push(FamilyViolation::NotDominating(i));
        }
    }
    if !violations.is_empty() {
        return Err(SigmaError::Family(violations));
    }
    let n = family.len();
    let rows = (0..g.vertex_count())
        .map(|v| {
            let mut row = vec![0i64; n];
            if let Some(i) = family.iter().position(|a| a.contains(v)) {
                row[i] = 1;
            }
            row
        })
        .collect();
    Ok(IntegerCharacterMatrix::new(rows)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StabilityTag {
    /// Σ¹ = Σᵏ for every k: a nonempty cone clique over a disconnected remainder.
    FullStability,
    /// Σ¹ = Σ²: the graph is chordal.
    Sigma2EqualsSigma1,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilityWitness {
    ConeOverDisconnected { cone: VertexSet, components: Vec<VertexSet> },
    PerfectEliminationOrder(Vec<usize>),
    InducedCycle(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityClass {
    pub tag: StabilityTag,
    pub witness: StabilityWitness,
}

impl StabilityClass {
    pub fn describe(&self, g: &SimplicialGraph) -> String {
        let names = |s: VertexSet| g.names_of(s).join(",");
        let list = |vs: &[usize]| vs.iter().map(|&v| g.name(v)).collect::<Vec<_>>().join(",");
        match &self.witness {
            StabilityWitness::ConeOverDisconnected { cone, components } => format!(
                "cone clique {{{}}} over components {}",
                names(*cone),
                components.iter().map(|c| format!("{{{}}}", names(*c))).collect::<Vec<_>>().join(" ")
            ),
            StabilityWitness::PerfectEliminationOrder(order) => {
                format!("chordal, perfect elimination order [{}]", list(order))
            }
            StabilityWitness::InducedCycle(cycle) => format!("induced cycle [{}]", list(cycle)),
        }
    }
}

pub fn stability_class(g: &SimplicialGraph) -> StabilityClass {
    let cone = g.cone_vertices();
    let rest = g.all_vertices().difference(cone);
    if !cone.is_empty() && !rest.is_empty() && !g.spans_connected(rest) {
        return StabilityClass {
            tag: StabilityTag::FullStability,
            witness: StabilityWitness::ConeOverDisconnected {
                cone,
                components: g.components(rest),
            },
        };
    }
    match g.perfect_elimination_order() {
        Some(order) => StabilityClass {
            tag: StabilityTag::Sigma2EqualsSigma1,
            witness: StabilityWitness::PerfectEliminationOrder(order),
        },
        None => StabilityClass {
            tag: StabilityTag::Unknown,
            witness: StabilityWitness::InducedCycle(
                g.induced_long_cycle().expect("non-chordal graphs have an induced long cycle"),
            ),
        },
    }
}

/// Sufficient for `[chi]` to lie in every Σᵏ: the living subgraph is
/// connected and dominating and contains a vertex adjacent to all others.
/// `false` means no conclusion.
pub fn sigma_all_sufficient(g: &SimplicialGraph, chi: &Character) -> Result<bool, SigmaError> {
    check_character(g, chi)?;
    let living = chi.support();
    Ok(g.is_connected_dominating(living) && !g.cone_vertices().is_disjoint(living))
}
