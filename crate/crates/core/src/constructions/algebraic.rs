use crate::error::Result;
use crate::gridmodel::{ColoredGridConfig, GridClass, GridLine};

use super::finite::AlgebraicParams;

/// Base-p digits of `x - 1`, least significant first: the bijection between
/// grid coordinates `1..=p^(k-1)` and `(Z/pZ)^(k-1)`.
pub fn coordinate_vector(x: u32, p: u64, len: usize) -> Vec<u64> {
    let mut v = Vec::with_capacity(len);
    let mut r = u64::from(x - 1);
    for _ in 0..len {
        v.push(r % p);
        r /= p;
    }
    v
}

/// Odometer over all tuples in `[1, n]^len`, last slot fastest.
pub(crate) struct Tuples {
    cur: Vec<u32>,
    n: u32,
    done: bool,
}

impl Tuples {
    pub(crate) fn new(len: usize, n: u32) -> Self {
        Tuples {
            cur: vec![1; len],
            n,
            done: n == 0,
        }
    }
}

impl Iterator for Tuples {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let mut i = self.cur.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] < self.n {
                self.cur[i] += 1;
                break;
            }
            self.cur[i] = 1;
        }
        Some(out)
    }
}

/// Grid lines selected by linear equations over `(Z/pZ)^(k-1)`.
///
/// Class `i < k` (zero-based) holds the lines parallel to axis `i` whose
/// coordinate vectors satisfy
/// `v_(i-1) . (X_0 + ... + X_(i-1)) + v_i . (X_(i+1) + ... + X_k) = 0`
/// (the first sum is empty for `i = 0`); class `k` holds the lines parallel to
/// the last axis with `v_(k-1) . (X_0 + ... + X_(k-1)) = 1`.
pub fn gen_algebraic(params: &AlgebraicParams) -> Result<ColoredGridConfig> {
    let k = params.k();
    let p = params.p();
    let n = params.grid_side()?;
    let v = params.v();
    // dots[j][x - 1] = v_j . X(x)
    let dots: Vec<Vec<u64>> = v
        .iter()
        .map(|vj| (1..=n).map(|x| vj.dot(&coordinate_vector(x, p, k - 1))).collect())
        .collect();

    let mut classes = Vec::with_capacity(k + 1);
    for axis in 0..=k {
        let mut lines = Vec::new();
        for reduced in Tuples::new(k, n) {
            let mut lhs = 0;
            for (slot, &x) in reduced.iter().enumerate() {
                // reduced slot -> full coordinate index
                let coord = if slot < axis { slot } else { slot + 1 };
                let vi = if axis == k {
                    k - 1
                } else if coord < axis {
                    axis - 1
                } else {
                    axis
                };
                lhs += dots[vi][x as usize - 1];
            }
            let rhs = u64::from(axis == k);
            if lhs % p == rhs {
                lines.push(GridLine::from_reduced(axis, &reduced)?);
            }
        }
        classes.push(GridClass { axis, lines });
    }
    ColoredGridConfig::new(k, n, classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_little_endian() {
        assert_eq!(coordinate_vector(1, 2, 2), vec![0, 0]);
        assert_eq!(coordinate_vector(2, 2, 2), vec![1, 0]);
        assert_eq!(coordinate_vector(3, 2, 2), vec![0, 1]);
        assert_eq!(coordinate_vector(9, 3, 2), vec![2, 2]);
    }

    #[test]
    fn tuples_cover_grid() {
        let all: Vec<Vec<u32>> = Tuples::new(2, 3).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], vec![1, 1]);
        assert_eq!(all[1], vec![1, 2]);
        assert_eq!(all[8], vec![3, 3]);
    }

    #[test]
    fn class_sizes_k3_p2() {
        let cfg = gen_algebraic(&AlgebraicParams::with_defaults(3, 2).unwrap()).unwrap();
        assert_eq!(cfg.n(), 4);
        assert_eq!(cfg.class_sizes(), vec![32; 4]);
    }
}
