use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridmodel::{ColoredGridConfig, GridClass, GridLine};
use crate::rng;

const TWO_POW_64: u128 = 1 << 64;

/// Parameters of the random two-stage selection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbParams {
    pub k: usize,
    pub n: u32,
    pub seed: u64,
    /// A line is kept in stage one iff its 64-bit draw is `< threshold`;
    /// the selection probability is exactly `threshold / 2^64`.
    threshold: u128,
}

impl ProbParams {
    /// Uses the default selection probability `min(1, 2 n^(-2/(2k-1)))`,
    /// rounded down to a multiple of `2^-64`.
    pub fn new(k: usize, n: u32, seed: u64) -> Result<Self> {
        check(k, n)?;
        Ok(ProbParams {
            k,
            n,
            seed,
            threshold: default_threshold(k, n),
        })
    }

    /// Uses an explicit selection probability in `(0, 1]`.
    pub fn with_probability(k: usize, n: u32, seed: u64, p_sel: &BigRational) -> Result<Self> {
        check(k, n)?;
        if !p_sel.is_positive() || p_sel > &BigRational::one() {
            return Err(Error::InvalidParameter(format!(
                "selection probability {p_sel} not in (0, 1]"
            )));
        }
        // draw < p * 2^64  <=>  draw < ceil(p * 2^64)
        let scaled = p_sel * BigRational::from_integer(BigInt::from(TWO_POW_64));
        let t = scaled.ceil().to_integer().to_u128().expect("at most 2^64");
        Ok(ProbParams {
            k,
            n,
            seed,
            threshold: t,
        })
    }

    pub fn p_sel(&self) -> BigRational {
        BigRational::new(BigInt::from(self.threshold), BigInt::from(TWO_POW_64))
    }

    pub fn threshold(&self) -> u128 {
        self.threshold
    }
}

fn check(k: usize, n: u32) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("k must be >= 3, got {k}")));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let lines = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if lines > 1 << 28 {
        return Err(Error::InvalidParameter(format!(
            "n^k = {n}^{k} lines per axis is too many"
        )));
    }
    Ok(())
}

/// Largest `t <= 2^64` with `t / 2^64 <= 2 n^(-2/(2k-1))`, i.e.
/// `t^(2k-1) * n^2 <= 2^(65 (2k-1))`.
fn default_threshold(k: usize, n: u32) -> u128 {
    let e = 2 * k as u32 - 1;
    let rhs = BigInt::one() << (65 * e as usize);
    let n2 = BigInt::from(n) * BigInt::from(n);
    let ok = |t: u128| BigInt::from(t).pow(e) * &n2 <= rhs;
    if ok(TWO_POW_64) {
        return TWO_POW_64;
    }
    let (mut lo, mut hi) = (0u128, TWO_POW_64);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Per-class counts of the two stages.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeletionReport {
    pub selected: Vec<usize>,
    pub deleted: Vec<usize>,
    pub kept: Vec<usize>,
    /// Grid points lying on selected lines of all k+1 axes.
    pub full_points: usize,
}

/// Selection bitmaps for the k+1 axes, indexed by the lexicographic rank of a
/// line's reduced coordinates.
#[derive(Clone, Debug)]
pub struct ProbSample {
    pub params: ProbParams,
    pub selected: Vec<Vec<bool>>,
    pub kept: Vec<Vec<bool>>,
    pub report: DeletionReport,
}

struct Indexer {
    n: u64,
    /// strides[axis][coord]; zero at the axis slot
    strides: Vec<Vec<u64>>,
}

impl Indexer {
    fn new(k: usize, n: u32) -> Self {
        let dim = k + 1;
        let n = u64::from(n);
        let strides = (0..dim)
            .map(|axis| {
                (0..dim)
                    .map(|c| {
                        if c == axis {
                            0
                        } else {
                            let after = (c + 1..dim).filter(|&j| j != axis).count() as u32;
                            n.pow(after)
                        }
                    })
                    .collect()
            })
            .collect();
        Indexer { n, strides }
    }

    /// Index of the axis-parallel line through `point`.
    fn line_through(&self, axis: usize, point: &[u32]) -> usize {
        point
            .iter()
            .zip(&self.strides[axis])
            .map(|(&x, &s)| u64::from(x - 1) * s)
            .sum::<u64>() as usize
    }

    fn reduced(&self, index: usize, k: usize) -> Vec<u32> {
        let mut r = vec![0u32; k];
        let mut rem = index as u64;
        for slot in (0..k).rev() {
            r[slot] = (rem % self.n) as u32 + 1;
            rem /= self.n;
        }
        r
    }
}

/// Runs both stages and returns the selection bitmaps.
pub fn sample_probabilistic(params: &ProbParams) -> ProbSample {
    let k = params.k;
    let dim = k + 1;
    let n = params.n;
    let per_axis = (n as usize).pow(k as u32);
    let ix = Indexer::new(k, n);

    let selected: Vec<Vec<bool>> = (0..dim)
        .map(|axis| {
            let mut s = rng::substream(params.seed, axis as u64);
            (0..per_axis)
                .map(|_| u128::from(rng::next_u64(&mut s)) < params.threshold)
                .collect()
        })
        .collect();

    // Points covered by all axes: walk the selected lines of axis 0 and test
    // the other axes point by point.
    let mut delete: Vec<Vec<bool>> = vec![vec![false; per_axis]; dim];
    let mut full_points = 0;
    let mut point = vec![1u32; dim];
    let mut first = vec![0usize; dim];
    for (idx, _) in selected[0].iter().enumerate().filter(|(_, &s)| s) {
        let red = ix.reduced(idx, k);
        point[1..].copy_from_slice(&red);
        // moving along axis 0 shifts every other axis index by its stride
        for (a, f) in first.iter_mut().enumerate() {
            *f = ix.line_through(a, &point);
        }
        for step in 0..n as usize {
            let full = (1..dim).all(|a| selected[a][first[a] + step * ix.strides[a][0] as usize]);
            if full {
                full_points += 1;
                delete[0][idx] = true;
                for (a, del) in delete.iter_mut().enumerate().skip(1) {
                    del[first[a] + step * ix.strides[a][0] as usize] = true;
                }
            }
        }
    }

    let kept: Vec<Vec<bool>> = selected
        .iter()
        .zip(&delete)
        .map(|(s, d)| s.iter().zip(d).map(|(&s, &d)| s && !d).collect())
        .collect();
    let count = |v: &Vec<Vec<bool>>| -> Vec<usize> { v.iter().map(|b| b.iter().filter(|&&x| x).count()).collect() };
    let sel_c = count(&selected);
    let kept_c = count(&kept);
    let report = DeletionReport {
        deleted: sel_c.iter().zip(&kept_c).map(|(s, k)| s - k).collect(),
        selected: sel_c,
        kept: kept_c,
        full_points,
    };
    ProbSample {
        params: params.clone(),
        selected,
        kept,
        report,
    }
}

impl ProbSample {
    fn materialize(&self, bits: &[Vec<bool>]) -> ColoredGridConfig {
        let k = self.params.k;
        let ix = Indexer::new(k, self.params.n);
        let classes = bits
            .iter()
            .enumerate()
            .map(|(axis, b)| GridClass {
                axis,
                lines: b
                    .iter()
                    .enumerate()
                    .filter(|(_, &on)| on)
                    .map(|(i, _)| GridLine::from_reduced(axis, &ix.reduced(i, k)).expect("in range"))
                    .collect(),
            })
            .collect();
        ColoredGridConfig::new(k, self.params.n, classes).expect("distinct in-range lines")
    }

    pub fn before_deletion(&self) -> ColoredGridConfig {
        self.materialize(&self.selected)
    }

    pub fn after_deletion(&self) -> ColoredGridConfig {
        self.materialize(&self.kept)
    }
}

/// Stage one draws every grid line independently; stage two deletes, all at
/// once, every selected line through a point covered by all k+1 axes.
pub fn gen_probabilistic(params: &ProbParams) -> (ColoredGridConfig, ColoredGridConfig, DeletionReport) {
    let s = sample_probabilistic(params);
    (s.before_deletion(), s.after_deletion(), s.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::algebraic::Tuples;
    use num_traits::Zero;

    #[test]
    fn default_threshold_matches_float() {
        for (k, n) in [(3usize, 16u32), (3, 32), (3, 64), (4, 10)] {
            let p = ProbParams::new(k, n, 0).unwrap();
            let f = 2.0 * (n as f64).powf(-2.0 / (2.0 * k as f64 - 1.0));
            let got = p.threshold() as f64 / TWO_POW_64 as f64;
            assert!((got - f.min(1.0)).abs() < 1e-12, "{k} {n}: {got} vs {f}");
        }
        // 2 n^(-2/5) >= 1 for n <= 5
        assert_eq!(ProbParams::new(3, 4, 0).unwrap().threshold(), TWO_POW_64);
    }

    #[test]
    fn indexer_is_lexicographic() {
        let ix = Indexer::new(2, 3);
        let order: Vec<Vec<u32>> = Tuples::new(2, 3).collect();
        for (i, red) in order.iter().enumerate() {
            assert_eq!(&ix.reduced(i, 2), red);
            let line = GridLine::from_reduced(1, red).unwrap();
            assert_eq!(ix.line_through(1, &line.point_at(2)), i);
        }
    }

    #[test]
    fn full_selection_deletes_everything() {
        let p = ProbParams::with_probability(3, 3, 9, &BigRational::one()).unwrap();
        let (before, after, report) = gen_probabilistic(&p);
        assert_eq!(before.class_sizes(), vec![27; 4]);
        assert_eq!(after.total_lines(), 0);
        assert_eq!(report.full_points, 81);
    }

    #[test]
    fn deterministic_given_seed() {
        let p = ProbParams::new(3, 8, 5).unwrap();
        let a = sample_probabilistic(&p);
        let b = sample_probabilistic(&p);
        assert_eq!(a.selected, b.selected);
        assert_eq!(a.report, b.report);
        let q = ProbParams::new(3, 8, 6).unwrap();
        assert_ne!(sample_probabilistic(&q).selected, a.selected);
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(ProbParams::with_probability(3, 4, 0, &BigRational::zero()).is_err());
        let two = BigRational::from_integer(BigInt::from(2));
        assert!(ProbParams::with_probability(3, 4, 0, &two).is_err());
    }
}
