//! Reports on configurations: incidence structures and their isomorphism
//! type, flatness of incidences, the joint-style lower bound on the number
//! of lines, minimality, Monte Carlo runs of the random construction and
//! intersection graphs of two line families.

mod bipartite;
mod montecarlo;
mod structure;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactgeom::{rank_of_directions, Line, ProjPoint};
use crate::gridmodel::ColoredGridConfig;
use crate::incidence::{LineRef, MinimalityVerdict};
use crate::transforms::ColoredLineConfig;

pub use bipartite::{bipartite_edges, find_k33, BipartiteReport};
pub use montecarlo::{monte_carlo, quartiles, MonteCarloReport, MonteCarloSummary, TrialRow};
pub use structure::{
    determinant_monomials, extract_structure, match_structure, parse_monomial, IncidenceStructure, Incidences,
    Relabeling, Table, TABLE_I, TABLE_II,
};

/// Flatness of one incidence point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessEntry {
    pub point: ProjPoint,
    pub lines: Vec<LineRef>,
    pub colors: usize,
    /// Dimension of the smallest flat containing all lines through the point.
    pub rank: usize,
    pub flat: bool,
}

/// Audits every point where lines of at least `t` colors meet. Such a point
/// is flat when all lines through it span a flat of dimension at most
/// `min(d, t) - 1`.
pub fn flatness_audit(cfg: &ColoredLineConfig, t: usize) -> Result<Vec<FlatnessEntry>> {
    let limit = cfg.d().min(t).saturating_sub(1);
    let mut out = Vec::new();
    for ip in cfg.incidence_points() {
        let colors = ip.colors().len();
        if colors < t {
            continue;
        }
        let lines: Vec<Line> = ip.lines.iter().map(|&r| cfg.line(r).clone()).collect();
        let rank = rank_of_directions(&lines, &ip.point)?;
        out.push(FlatnessEntry {
            point: ip.point,
            lines: ip.lines,
            colors,
            rank,
            flat: rank <= limit,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointBoundReport {
    pub m: usize,
    pub k: usize,
    pub total_lines: usize,
    /// `C(C(m-1, k-1) + k - 1, k) / C(m-1, k-1)`, exact.
    #[serde(with = "crate::exactgeom::rat_string")]
    pub bound: BigRational,
    pub satisfied: bool,
}

/// Evaluates the lower bound on the number of lines of a k-consistent
/// configuration with m colors and no flat k-incidence. Only the arithmetic
/// is done here; the flatness hypothesis is checked by [`flatness_audit`].
pub fn joint_bound(m: usize, k: usize, total_lines: usize) -> JointBoundReport {
    assert!(k >= 1 && m >= k, "need 1 <= k <= m");
    let c = binomial(BigInt::from(m - 1), BigInt::from(k - 1));
    let num = binomial(&c + BigInt::from(k - 1), BigInt::from(k));
    let bound = BigRational::new(num, c);
    let satisfied = BigRational::from_integer(BigInt::from(total_lines)) >= bound;
    JointBoundReport {
        m,
        k,
        total_lines,
        bound,
        satisfied,
    }
}

/// True minimality: the configuration is k-consistent and every single-line
/// removal breaks it.
pub fn minimality_audit(cfg: &ColoredGridConfig, k: usize) -> Result<MinimalityVerdict> {
    cfg.minimality(k)
}
