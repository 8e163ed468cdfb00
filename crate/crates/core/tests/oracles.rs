mod common;

use bns_core::cayley::{self, VerdictTag};
use bns_core::characters::{enumerate_simplices, IntegerCharacterMatrix};
use bns_core::lattice;
use bns_core::sigma::{self, StabilityTag};
use bns_core::{Character, RewritingSystem, SimplicialGraph, VertexSet, Word};
use common::*;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn subsets(n: usize) -> impl Iterator<Item = (VertexSet, Vec<usize>)> {
    (0u64..1 << n).map(move |m| {
        let members: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
        (VertexSet::from_bits(m), members)
    })
}

#[test]
fn normal_form_matches_foata_layers() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..3000 {
        let n = rng.gen_range(1..=6);
        let g = random_graph(&mut rng, n);
        let w = random_word(&mut rng, n, 16);
        let rs = RewritingSystem::new(&g);
        let blocks: Vec<Vec<_>> = rs
            .normal_blocks(&w)
            .blocks()
            .iter()
            .map(|b| b.letters().collect())
            .collect();
        assert_eq!(blocks, foata_normal_form(&g, &w), "graph {} word {:?}", g.to_json(), w);
    }
}

#[test]
fn free_and_free_abelian_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 1..=5 {
        let names: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
        let free = SimplicialGraph::null(&names).unwrap();
        let abelian = SimplicialGraph::complete(&names).unwrap();
        let (rf, ra) = (RewritingSystem::new(&free), RewritingSystem::new(&abelian));
        for _ in 0..300 {
            let a = random_word(&mut rng, n, 10);
            let b = random_word(&mut rng, n, 10);
            assert_eq!(rf.normal_form(&a).0, free_reduce(&a));
            assert_eq!(rf.words_equal(&a, &b), free_reduce(&a) == free_reduce(&b));
            assert_eq!(ra.words_equal(&a, &b), exponent_vector(n, &a) == exponent_vector(n, &b));
            let nf = ra.normal_form(&a);
            assert_eq!(nf.len() as i64, exponent_vector(n, &a).iter().map(|x| x.abs()).sum::<i64>());
        }
    }
}

#[test]
fn ball_sizes_match_word_enumeration() {
    let graphs = [
        SimplicialGraph::null(&["x", "y"]).unwrap(),
        SimplicialGraph::complete(&["x", "y"]).unwrap(),
        SimplicialGraph::path(&["x", "y", "z"]).unwrap(),
        SimplicialGraph::null(&["x", "y", "z"]).unwrap(),
        SimplicialGraph::cycle(&["a", "b", "c", "d"]).unwrap(),
    ];
    for g in &graphs {
        for r in 0..=3 {
            assert_eq!(cayley::build_ball(g, r).unwrap().len(), ball_size_by_words(g, r), "{} r={r}", g.to_json());
        }
    }
    // Free group of rank m: 1 + 2m((2m-1)^r - 1)/(2m - 2).
    for m in 2..=3usize {
        let names: Vec<String> = (0..m).map(|i| format!("g{i}")).collect();
        let g = SimplicialGraph::null(&names).unwrap();
        for r in 0..=4u32 {
            let expected = 1 + 2 * m * ((2 * m - 1).pow(r) - 1) / (2 * m - 2);
            assert_eq!(cayley::build_ball(&g, r as usize).unwrap().len(), expected);
        }
    }
    // Z^3: lattice points with l1 norm at most r.
    let z3 = SimplicialGraph::complete(&["a", "b", "c"]).unwrap();
    for r in 0..=5i64 {
        let expected = (-r..=r)
            .flat_map(|a| (-r..=r).flat_map(move |b| (-r..=r).map(move |c| (a, b, c))))
            .filter(|(a, b, c)| a.abs() + b.abs() + c.abs() <= r)
            .count();
        assert_eq!(cayley::build_ball(&z3, r as usize).unwrap().len(), expected);
    }
}

#[test]
fn connected_dominating_matches_oracle() {
    for n in 1..=5 {
        for g in all_graphs(n) {
            for (s, members) in subsets(n) {
                let expected = spans_connected(&g, &members) && dominates(&g, &members);
                assert_eq!(g.is_connected_dominating(s), expected);
            }
        }
    }
}

#[test]
fn chordality_matches_induced_cycle_search() {
    for n in 1..=5 {
        for g in all_graphs(n) {
            assert_eq!(g.is_chordal(), chordal_by_subsets(&g), "{}", g.to_json());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let n = rng.gen_range(6..=8);
        let g = random_graph(&mut rng, n);
        assert_eq!(g.is_chordal(), chordal_by_subsets(&g));
        if let Some(cycle) = g.induced_long_cycle() {
            assert!(cycle.len() >= 4);
            let members: Vec<usize> = cycle.clone();
            assert!(members.iter().all(|&v| members.iter().filter(|&&w| g.adjacent(v, w)).count() == 2));
        }
    }
}

#[test]
fn disconnecting_sets_match_oracle() {
    for n in 2..=5 {
        for g in all_graphs(n) {
            for m in 0..n {
                let expected = subsets(n).any(|(_, removed)| {
                    if removed.len() != m {
                        return false;
                    }
                    let rest: Vec<usize> = (0..n).filter(|v| !removed.contains(v)).collect();
                    !rest.is_empty() && !spans_connected(&g, &rest)
                });
                let found = g.exists_disconnecting_set(m).unwrap();
                assert_eq!(found.is_some(), expected, "{} m={m}", g.to_json());
                if let Some(s) = found {
                    assert_eq!(s.len(), m);
                    assert!(!g.spans_connected(g.all_vertices().difference(s)));
                }
            }
        }
    }
}

#[test]
fn membership_matches_oracle_on_every_simplex() {
    for n in 1..=5 {
        for g in all_graphs(n) {
            for s in enumerate_simplices(&g) {
                let members: Vec<usize> = s.support().iter().collect();
                let expected = spans_connected(&g, &members) && dominates(&g, &members);
                assert_eq!(sigma::sigma1_contains_simplex(&g, &s), expected);
            }
        }
    }
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, span: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-span..=span)).collect())
        .collect()
}

fn big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

#[test]
fn ranks_match_minors() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..2000 {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=4);
        let m = random_matrix(&mut rng, rows, cols, 2);
        assert_eq!(lattice::rank(&big_rows(&m)), rank(&m), "{m:?}");
    }
}

#[test]
fn normals_match_cofactors() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2000 {
        let cols = rng.gen_range(2..=4);
        let m = random_matrix(&mut rng, cols - 1, cols, 3);
        let cof = cofactor_normal(&m);
        match lattice::primitive_normal(&big_rows(&m), cols) {
            None => assert!(cof.iter().all(|&x| x == 0)),
            Some(phi) => {
                let g = cof.iter().fold(0i128, |a, &b| num_integer::gcd(a, b));
                let mut expected: Vec<i128> = cof.iter().map(|x| x / g).collect();
                if expected.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                    expected.iter_mut().for_each(|x| *x = -*x);
                }
                let got: Vec<i128> = phi.iter().map(|x| x.try_into().unwrap()).collect();
                assert_eq!(got, expected, "{m:?}");
            }
        }
    }
}

#[test]
fn oriented_maps_match_cofactor_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    while checked < 300 {
        let vertices = rng.gen_range(2..=5);
        let cols = rng.gen_range(1..=3);
        let m = random_matrix(&mut rng, vertices, cols, 2);
        if rank(&m) != cols {
            let matrix = IntegerCharacterMatrix::new(m.clone());
            if let Ok(matrix) = matrix {
                assert!(sigma::enumerate_chi_oriented(&matrix).is_err());
            }
            continue;
        }
        checked += 1;
        let mut expected: Vec<Vec<i128>> = Vec::new();
        for mask in 0u64..1 << vertices {
            if mask.count_ones() as usize != cols - 1 {
                continue;
            }
            let chosen: Vec<Vec<i64>> = (0..vertices).filter(|&v| mask >> v & 1 == 1).map(|v| m[v].clone()).collect();
            let cof = if cols == 1 { vec![1] } else { cofactor_normal(&chosen) };
            if cof.iter().all(|&x| x == 0) {
                continue;
            }
            let g = cof.iter().fold(0i128, |a, &b| num_integer::gcd(a, b));
            let phi: Vec<i128> = cof.iter().map(|x| x / g).collect();
            let neg: Vec<i128> = phi.iter().map(|x| -x).collect();
            for v in [phi, neg] {
                if !expected.contains(&v) {
                    expected.push(v);
                }
            }
        }
        expected.sort();
        let mut got: Vec<Vec<i128>> = sigma::enumerate_chi_oriented(&IntegerCharacterMatrix::new(m.clone()).unwrap())
            .unwrap()
            .iter()
            .map(|phi| phi.iter().map(|x| x.try_into().unwrap()).collect())
            .collect();
        got.sort();
        assert_eq!(got, expected, "{m:?}");
    }
}

#[test]
fn linear_independence_matches_rank_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let vertices = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=3);
        let m = random_matrix(&mut rng, vertices, cols, 1);
        let Ok(matrix) = IntegerCharacterMatrix::new(m.clone()) else {
            continue;
        };
        for (s, members) in subsets(vertices) {
            let expected = (0u64..1 << members.len()).all(|sub| {
                let inside: Vec<usize> = (0..members.len()).filter(|&i| sub >> i & 1 == 1).map(|i| members[i]).collect();
                let base_rows: Vec<Vec<i64>> = inside.iter().map(|&v| m[v].clone()).collect();
                let base = rank(&base_rows);
                members.iter().filter(|v| !inside.contains(v)).all(|&j| {
                    let mut more = base_rows.clone();
                    more.push(m[j].clone());
                    rank(&more) > base
                })
            });
            assert_eq!(sigma::chi_linearly_independent(&matrix, s), expected, "{m:?} {members:?}");
        }
    }
}

#[test]
fn stability_classes_match_definitions() {
    for n in 1..=5 {
        for g in all_graphs(n) {
            let cone: Vec<usize> = (0..n).filter(|&v| (0..n).all(|w| w == v || g.adjacent(v, w))).collect();
            let rest: Vec<usize> = (0..n).filter(|v| !cone.contains(v)).collect();
            let full = !cone.is_empty() && !rest.is_empty() && !spans_connected(&g, &rest);
            let expected = if full {
                StabilityTag::FullStability
            } else if chordal_by_subsets(&g) {
                StabilityTag::Sigma2EqualsSigma1
            } else {
                StabilityTag::Unknown
            };
            assert_eq!(sigma::stability_class(&g).tag, expected, "{}", g.to_json());
        }
    }
}

/// Recomputes a disconnection witness from a fully built padded ball.
#[test]
fn witnesses_survive_full_ball_check() {
    let cases: [(SimplicialGraph, Vec<i64>, usize); 4] = [
        (SimplicialGraph::null(&["x", "y"]).unwrap(), vec![1, 1], 2),
        (SimplicialGraph::path(&["x", "y", "z"]).unwrap(), vec![1, 0, 1], 2),
        (SimplicialGraph::path(&["x", "y", "z"]).unwrap(), vec![0, 0, -1], 4),
        (SimplicialGraph::null(&["x", "y", "z"]).unwrap(), vec![1, 2, 0], 2),
    ];
    for (g, values, r) in cases {
        let chi = Character::from_integers(&values).unwrap();
        let verdict = cayley::connectivity_verdict(&g, &chi, r, 3).unwrap();
        assert_eq!(verdict.tag, VerdictTag::WitnessDisconnected, "{} {values:?}", g.to_json());
        let (a, b) = verdict.witness.unwrap();
        let ball = cayley::build_ball(&g, r + 3).unwrap();
        let slice = cayley::positive_slice(&ball, &chi);
        let labels = slice.components();
        let (ia, ib) = (ball.index_of(&a).unwrap(), ball.index_of(&b).unwrap());
        assert!(ball.level(ia) <= r && ball.level(ib) <= r);
        assert!(labels[ia].is_some() && labels[ib].is_some());
        assert_ne!(labels[ia], labels[ib], "{} {values:?}", g.to_json());
    }
}

/// The lazy verdict agrees with labelling components of the full padded slice.
#[test]
fn lazy_verdict_matches_full_slice() {
    for n in 1..=3 {
        for g in all_graphs(n) {
            for idx in 1..3usize.pow(n as u32) {
                let values: Vec<i64> = (0..n).map(|i| (idx / 3usize.pow(i as u32) % 3) as i64 - 1).collect();
                let Ok(chi) = Character::from_integers(&values) else { continue };
                let (r, padding) = (2, 2);
                let ball = cayley::build_ball(&g, r + padding).unwrap();
                let slice = cayley::positive_slice(&ball, &chi);
                let labels = slice.components();
                let all_joined = slice
                    .kept_elements()
                    .filter(|&i| ball.level(i) <= r)
                    .all(|i| labels[i] == labels[0]);
                let verdict = cayley::connectivity_verdict(&g, &chi, r, padding).unwrap();
                assert_eq!(verdict.tag == VerdictTag::ConsistentConnected, all_joined, "{} {values:?}", g.to_json());
            }
        }
    }
}

#[test]
fn word_parsing_round_trips() {
    let g = SimplicialGraph::path(&["x", "y", "z"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let w = random_word(&mut rng, 3, 10);
        assert_eq!(Word::parse(&w.to_text(&g), &g).unwrap(), w);
    }
}
