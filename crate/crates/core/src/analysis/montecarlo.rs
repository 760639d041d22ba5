use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{sample_probabilistic, ProbParams};
use crate::error::Result;
use crate::rng::trial_seed;

/// Outcome of one random trial, after deletion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRow {
    pub k: usize,
    pub n: u32,
    pub seed: u64,
    pub trial: usize,
    pub consistent: bool,
    /// Lines lacking some required k-colored incidence.
    pub bad_lines: usize,
    pub sizes: Vec<usize>,
    pub max_colorful: usize,
}

/// Aggregates over the trials of one `(k, n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub k: usize,
    pub n: u32,
    pub trials: usize,
    pub consistent: usize,
    pub consistency_rate: f64,
    /// Lower quartile, median and upper quartile of all class sizes.
    pub size_quartiles: [usize; 3],
    /// Trials whose class sizes all lie in `[N, 3N]` for some N.
    pub window_fraction: f64,
    pub mean_bad_lines: f64,
    pub max_colorful: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub master_seed: u64,
    pub rows: Vec<TrialRow>,
    pub summaries: Vec<MonteCarloSummary>,
}

/// Runs `trials` independent samples of the random construction for each
/// `(k, n)` with the default selection probability. Trial seeds derive from
/// `master_seed`, so the report does not depend on scheduling.
pub fn monte_carlo(grid: &[(usize, u32)], trials: usize, master_seed: u64) -> Result<MonteCarloReport> {
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for &(k, n) in grid {
        ProbParams::new(k, n, 0)?;
        let batch: Vec<TrialRow> = (0..trials)
            .into_par_iter()
            .map(|trial| run_trial(k, n, trial, master_seed))
            .collect::<Result<_>>()?;
        summaries.push(summarize(k, n, &batch));
        rows.extend(batch);
    }
    Ok(MonteCarloReport {
        master_seed,
        rows,
        summaries,
    })
}

fn run_trial(k: usize, n: u32, trial: usize, master: u64) -> Result<TrialRow> {
    let seed = trial_seed(master, k, n, trial);
    let sample = sample_probabilistic(&ProbParams::new(k, n, seed)?);
    let cfg = sample.after_deletion();
    let table = cfg.incidence_table();
    let verdict = table.k_consistency(k)?;
    Ok(TrialRow {
        k,
        n,
        seed,
        trial,
        consistent: verdict.consistent,
        bad_lines: verdict.bad_lines().len(),
        sizes: cfg.class_sizes(),
        max_colorful: table.max_colorful_order().order,
    })
}

/// Lower quartile, median and upper quartile by the nearest-rank rule on the
/// sorted values (`v[ceil(q len) - 1]`).
pub fn quartiles(values: &[usize]) -> [usize; 3] {
    if values.is_empty() {
        return [0; 3];
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let at = |num: usize| v[(num * v.len()).div_ceil(4).max(1) - 1];
    [at(1), at(2), at(3)]
}

fn summarize(k: usize, n: u32, rows: &[TrialRow]) -> MonteCarloSummary {
    let t = rows.len();
    let consistent = rows.iter().filter(|r| r.consistent).count();
    let all_sizes: Vec<usize> = rows.iter().flat_map(|r| r.sizes.iter().copied()).collect();
    let in_window = rows
        .iter()
        .filter(|r| {
            let lo = *r.sizes.iter().min().unwrap_or(&0);
            let hi = *r.sizes.iter().max().unwrap_or(&0);
            lo > 0 && hi <= 3 * lo
        })
        .count();
    let ratio = |x: usize| if t == 0 { 0.0 } else { x as f64 / t as f64 };
    MonteCarloSummary {
        k,
        n,
        trials: t,
        consistent,
        consistency_rate: ratio(consistent),
        size_quartiles: quartiles(&all_sizes),
        window_fraction: ratio(in_window),
        mean_bad_lines: ratio(rows.iter().map(|r| r.bad_lines).sum()),
        max_colorful: rows.iter().map(|r| r.max_colorful).max().unwrap_or(0),
    }
}

impl MonteCarloReport {
    /// One line per trial.
    pub fn to_csv(&self) -> String {
        let width = self.rows.iter().map(|r| r.sizes.len()).max().unwrap_or(0);
        let mut out = String::from("k,n,seed,trial,consistent,bad_lines");
        for i in 1..=width {
            write!(out, ",size_{i}").unwrap();
        }
        out.push_str(",max_colorful\n");
        for r in &self.rows {
            write!(
                out,
                "{},{},{},{},{},{}",
                r.k, r.n, r.seed, r.trial, r.consistent, r.bad_lines
            )
            .unwrap();
            for i in 0..width {
                match r.sizes.get(i) {
                    Some(s) => write!(out, ",{s}").unwrap(),
                    None => out.push(','),
                }
            }
            writeln!(out, ",{}", r.max_colorful).unwrap();
        }
        out
    }

    /// One line per `(k, n)`.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from(
            "k,n,trials,consistent,consistency_rate,size_q1,size_median,size_q3,window_fraction,mean_bad_lines,max_colorful\n",
        );
        for s in &self.summaries {
            writeln!(
                out,
                "{},{},{},{},{:.4},{},{},{},{:.4},{:.4},{}",
                s.k,
                s.n,
                s.trials,
                s.consistent,
                s.consistency_rate,
                s.size_quartiles[0],
                s.size_quartiles[1],
                s.size_quartiles[2],
                s.window_fraction,
                s.mean_bad_lines,
                s.max_colorful
            )
            .unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartile_rule() {
        assert_eq!(quartiles(&[4, 1, 3, 2]), [1, 2, 3]);
        assert_eq!(quartiles(&[5]), [5, 5, 5]);
        assert_eq!(quartiles(&[]), [0, 0, 0]);
    }

    #[test]
    fn small_run_is_reproducible() {
        let a = monte_carlo(&[(3, 6)], 5, 1).unwrap();
        let b = monte_carlo(&[(3, 6)], 5, 1).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.rows.len(), 5);
        assert!(a.rows.iter().all(|r| r.max_colorful <= 3));
        assert!(a
            .to_csv()
            .starts_with("k,n,seed,trial,consistent,bad_lines,size_1,size_2,size_3,size_4,max_colorful\n"));
    }
}
