//! Fraction-free elimination over the integers.
//!
//! Every routine works on rows of `BigInt`. Rows are kept primitive (entries
//! divided by their gcd) after each update so coefficient growth stays linear
//! in the number of eliminations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Divides a vector by the gcd of its entries and makes the first nonzero
/// entry positive. The zero vector is returned unchanged.
pub fn make_primitive(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
    }
    if g.is_zero() {
        return;
    }
    let flip = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    if !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    if flip {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
}

fn reduce_row(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Result of eliminating a list of row vectors.
#[derive(Debug, Clone)]
pub struct Elimination {
    pub rank: usize,
    /// Indices (into the input) of a maximal independent subset, in the order
    /// the greedy scan accepted them.
    pub independent: Vec<usize>,
    /// Basis of the left kernel: integer coefficient vectors `c` with
    /// `sum_i c[i] * rows[i] = 0`.
    pub left_kernel: Vec<Vec<BigInt>>,
}

/// Row-reduces `rows` (all of equal width) while tracking the combinations
/// that produce each reduced row.
pub fn eliminate(rows: &[Vec<BigInt>]) -> Elimination {
    let n = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    // augmented rows: [row | e_i]
    let mut aug: Vec<Vec<BigInt>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            debug_assert_eq!(r.len(), width);
            let mut a = Vec::with_capacity(width + n);
            a.extend(r.iter().cloned());
            a.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            a
        })
        .collect();

    // Process rows in input order so the independent set is the greedy one:
    // each incoming row is reduced against the pivots found so far.
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row index in aug, pivot column)
    let mut independent = Vec::new();
    let mut kernel = Vec::new();
    for i in 0..n {
        for &(pr, pc) in &pivots {
            if aug[i][pc].is_zero() {
                continue;
            }
            let (a, b) = (aug[pr][pc].clone(), aug[i][pc].clone());
            let g = a.gcd(&b);
            let (a, b) = (&a / &g, &b / &g);
            // pivots always come from earlier rows
            let (lo, hi) = aug.split_at_mut(i);
            let (pivot_row, row) = (&lo[pr], &mut hi[0]);
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                *x = &a * &*x - &b * y;
            }
            reduce_row(row);
        }
        match (0..width).find(|&c| !aug[i][c].is_zero()) {
            Some(c) => {
                pivots.push((i, c));
                independent.push(i);
            }
            None => {
                let mut coeffs = aug[i][width..].to_vec();
                make_primitive(&mut coeffs);
                kernel.push(coeffs);
            }
        }
    }
    Elimination {
        rank: pivots.len(),
        independent,
        left_kernel: kernel,
    }
}

pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    eliminate(rows).rank
}

/// Basis of `{x : A x = 0}` for the matrix whose rows are `rows`.
pub fn nullspace(rows: &[Vec<BigInt>], width: usize) -> Vec<Vec<BigInt>> {
    let cols: Vec<Vec<BigInt>> = (0..width)
        .map(|c| rows.iter().map(|r| r[c].clone()).collect())
        .collect();
    eliminate(&cols).left_kernel
}

pub fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    // Bareiss; rows are square
    let n = rows.len();
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}
