//! Vectors over Z/pZ and the parameter set of the finite-field construction.

use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A vector of `(Z/pZ)^(k-1)` with entries in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteVec {
    entries: Vec<u64>,
    p: u64,
}

impl FiniteVec {
    pub fn new(entries: Vec<i64>, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let pi = p as i64;
        Ok(FiniteVec {
            entries: entries.into_iter().map(|e| e.rem_euclid(pi) as u64).collect(),
            p,
        })
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn dot(&self, other: &[u64]) -> u64 {
        self.entries.iter().zip(other).map(|(a, b)| a * b % self.p).sum::<u64>() % self.p
    }
}

/// Rank over Z/pZ by Gaussian elimination.
pub fn rank_mod_p(vectors: &[&[u64]], p: u64) -> usize {
    let mut rows: Vec<Vec<u64>> = vectors.iter().map(|v| v.iter().map(|x| x % p).collect()).collect();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][col], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..width {
                    rows[r][c] = (rows[r][c] + p * p - f * rows[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// `k` vectors of `(Z/pZ)^(k-1)` summing to zero, every proper subset
/// linearly independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicParams {
    k: usize,
    p: u64,
    v: Vec<FiniteVec>,
}

impl AlgebraicParams {
    pub fn new(k: usize, p: u64, v: Vec<FiniteVec>) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidParameter(format!("k must be >= 3, got {k}")));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k > 16 {
            return Err(Error::InvalidParameter(format!("k = {k} is too large")));
        }
        if v.len() != k || v.iter().any(|x| x.entries.len() != k - 1 || x.p != p) {
            return Err(Error::InvalidParameter(format!(
                "need {k} vectors of length {} over Z/{p}",
                k - 1
            )));
        }
        let sum_zero = (0..k - 1).all(|i| v.iter().map(|x| x.entries[i]).sum::<u64>() % p == 0);
        if !sum_zero {
            return Err(Error::InvalidParameter("vectors do not sum to zero".into()));
        }
        for mask in 1u32..(1 << k) - 1 {
            let subset: Vec<&[u64]> = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| v[i].entries())
                .collect();
            if rank_mod_p(&subset, p) != subset.len() {
                return Err(Error::InvalidParameter(format!(
                    "proper subset {mask:#b} is linearly dependent"
                )));
            }
        }
        Ok(AlgebraicParams { k, p, v })
    }

    /// Parameters built on [`default_v_vectors`].
    pub fn with_defaults(k: usize, p: u64) -> Result<Self> {
        Self::new(k, p, default_v_vectors(k, p)?)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn v(&self) -> &[FiniteVec] {
        &self.v
    }

    /// Grid side `p^(k-1)`.
    pub fn grid_side(&self) -> Result<u32> {
        u32::try_from(self.p)
            .ok()
            .and_then(|p| p.checked_pow(self.k as u32 - 1))
            .ok_or_else(|| Error::InvalidParameter("grid side overflows u32".into()))
    }
}

/// `e_1, ..., e_(k-1)` followed by `-(e_1 + ... + e_(k-1))`.
pub fn default_v_vectors(k: usize, p: u64) -> Result<Vec<FiniteVec>> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("k must be >= 3, got {k}")));
    }
    let mut out = Vec::with_capacity(k);
    for i in 0..k - 1 {
        let mut e = vec![0i64; k - 1];
        e[i] = 1;
        out.push(FiniteVec::new(e, p)?);
    }
    out.push(FiniteVec::new(vec![-1; k - 1], p)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn default_vectors_examples() {
        let v = default_v_vectors(3, 2).unwrap();
        let e: Vec<&[u64]> = v.iter().map(|x| x.entries()).collect();
        assert_eq!(e, vec![&[1, 0][..], &[0, 1], &[1, 1]]);
        let v = default_v_vectors(3, 5).unwrap();
        assert_eq!(v[2].entries(), &[4, 4]);
        for k in 3..=8 {
            for p in [2, 3, 5, 7] {
                let params = AlgebraicParams::with_defaults(k, p).unwrap();
                for i in 0..k - 1 {
                    let s: u64 = params.v().iter().map(|x| x.entries()[i]).sum();
                    assert_eq!(s % p, 0);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert_eq!(AlgebraicParams::with_defaults(3, 4), Err(Error::NotPrime(4)));
        // e1, e2, e1+e2 over Z/3 do not sum to zero
        let v = vec![
            FiniteVec::new(vec![1, 0], 3).unwrap(),
            FiniteVec::new(vec![0, 1], 3).unwrap(),
            FiniteVec::new(vec![1, 1], 3).unwrap(),
        ];
        assert!(AlgebraicParams::new(3, 3, v).is_err());
        // sums to zero but two vectors are parallel
        let v = vec![
            FiniteVec::new(vec![1, 0], 3).unwrap(),
            FiniteVec::new(vec![1, 0], 3).unwrap(),
            FiniteVec::new(vec![1, 0], 3).unwrap(),
        ];
        assert!(AlgebraicParams::new(3, 3, v).is_err());
    }

    #[test]
    fn rank_over_fp() {
        assert_eq!(rank_mod_p(&[&[1, 1], &[2, 2]], 3), 1);
        assert_eq!(rank_mod_p(&[&[1, 1], &[1, 2]], 3), 2);
        assert_eq!(rank_mod_p(&[&[1, 1], &[1, 1]], 2), 1);
    }
}
