//! Exact integer linear algebra for small matrices: rank and primitive
//! normal vectors of corank-one row sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row echelon form by fraction-free (Bareiss) elimination. Returns the
/// reduced rows and the pivot column of each nonzero row.
fn echelon(rows: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let cols = m.first().map(Vec::len).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    echelon(rows).1.len()
}

pub fn rank_i64(rows: &[&[i64]]) -> usize {
    rank(&to_big(rows))
}

pub fn to_big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Divides by the gcd and makes the first nonzero entry positive.
pub fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    let sign_flip = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    v.into_iter()
        .map(|x| if sign_flip { -(x / &g) } else { x / &g })
        .collect()
}

/// The primitive integer vector spanning the orthogonal complement of the
/// rows, when the rows have rank exactly `columns - 1`. Sign normalized so
/// the first nonzero entry is positive.
pub fn primitive_normal(rows: &[Vec<BigInt>], columns: usize) -> Option<Vec<BigInt>> {
    let (ech, pivots) = echelon(rows);
    if pivots.len() + 1 != columns {
        return None;
    }
    let free = (0..columns).find(|c| !pivots.contains(c)).expect("one free column");
    // Back substitution with the free coordinate set to 1.
    let mut x = vec![BigRational::zero(); columns];
    x[free] = BigRational::one();
    for (row, &pc) in ech.iter().zip(&pivots).rev() {
        let mut acc = BigRational::zero();
        for j in pc + 1..columns {
            acc += BigRational::from_integer(row[j].clone()) * &x[j];
        }
        x[pc] = -acc / BigRational::from_integer(row[pc].clone());
    }
    let lcm = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints = x
        .into_iter()
        .map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    Some(primitive(ints))
}
