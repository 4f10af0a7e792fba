//! Small dense exact linear algebra used by vertex and facet enumeration.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Rational;

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// column of each nonzero row.
pub(crate) fn rref(rows: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for k in 0..rows[i].len() {
                if !rows[r][k].is_zero() {
                    let d = &f * &rows[r][k];
                    rows[i][k] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Unique solution of the square system `m x = rhs`, if `m` is nonsingular.
pub(crate) fn solve_square(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Basis vector of a one-dimensional null space, or `None` when the null space
/// has any other dimension.
pub(crate) fn null_vector(m: &[Vec<Rational>], cols: usize) -> Option<Vec<Rational>> {
    let mut rows = m.to_vec();
    let pivots = rref(&mut rows, cols);
    if pivots.len() + 1 != cols {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = alloc::vec![Rational::zero(); cols];
    v[free] = Rational::one();
    for (row, &p) in rows.iter().zip(&pivots) {
        v[p] = -row[free].clone();
    }
    Some(v)
}

pub(crate) fn rank(m: &[Vec<Rational>], cols: usize) -> usize {
    let mut rows = m.to_vec();
    rref(&mut rows, cols).len()
}

/// Scales a vector to primitive integer coordinates (gcd 1), keeping its sign.
pub(crate) fn primitive(v: &[Rational]) -> Vec<Rational> {
    let lcm = v
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints
        .iter()
        .fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}
