//! Planar point sets dual to four concurrent-class line configurations with
//! a class of two lines.
//!
//! Color 0 holds the two points at infinity `(0:1:0)` (vertical) and
//! `(1:0:0)` (horizontal). Colors 1, 2, 3 lie on the lines `y = s x` through
//! the origin with slopes `s1, s2, s3`. Starting from `x` on the color-2
//! line, alternating horizontal and vertical moves between the three lines
//!
//! ```text
//! 2 -h-> 3 -v-> 1 -h-> 2 -v-> 3 -h-> 1 -v-> back to 2
//! ```
//!
//! visit six points. Because all three lines pass through the origin the
//! walk returns exactly to its start, so every start gives a closed 6-cycle.
//! Each point is then aligned with the two infinite points and a point of
//! every other finite color, which settles all color triples containing
//! color 0. Triples of colors 1, 2, 3 are not automatic and are reported.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactgeom::{rat, ProjPoint, RatScalar};
use crate::incidence::{mask_of, LineRef};
use crate::transforms::DualPointConfig;

/// The six points of one cycle as `(color, x, y)`, in visiting order.
pub fn cycle_points(slopes: &[RatScalar; 3], x: &RatScalar) -> Vec<(usize, RatScalar, RatScalar)> {
    let [s1, s2, s3] = slopes;
    let a = (2, x.clone(), s2 * x);
    let b = (3, &a.2 / s3, a.2.clone());
    let c = (1, b.1.clone(), s1 * &b.1);
    let d = (2, &c.2 / s2, c.2.clone());
    let e = (3, d.1.clone(), s3 * &d.1);
    let f = (1, &e.2 / s1, e.2.clone());
    vec![a, b, c, d, e, f]
}

/// The x-coordinate reached after the six moves, which equals `x`.
pub fn cycle_return(slopes: &[RatScalar; 3], x: &RatScalar) -> RatScalar {
    let f = &cycle_points(slopes, x)[5];
    f.1.clone()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DualCycleReport {
    pub cycles: usize,
    /// Every walk returned to its start.
    pub closed: bool,
    /// Every point has the required alignments for the color triples that
    /// contain color 0.
    pub triples_with_infinite_ok: bool,
    /// Every finite point lies on a line through points of colors 1, 2, 3.
    pub rainbow_ok: bool,
    pub max_colorful: usize,
    /// All of the above hold and no line carries four colors.
    pub valid: bool,
}

#[derive(Clone, Debug)]
pub struct DualCycles {
    pub config: DualPointConfig,
    pub report: DualCycleReport,
}

pub fn gen_dual_cycles(slopes: &[RatScalar; 3], starts: &[RatScalar]) -> Result<DualCycles> {
    if starts.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least two cycles, got {}; a single cycle always has a four-colored line",
            starts.len()
        )));
    }
    if slopes.iter().any(Zero::is_zero) || slopes[0] == slopes[1] || slopes[1] == slopes[2] || slopes[0] == slopes[2] {
        return Err(Error::InvalidParameter("slopes must be distinct and nonzero".into()));
    }
    if starts.iter().any(Zero::is_zero) {
        return Err(Error::InvalidParameter(
            "a start at the origin collapses its cycle".into(),
        ));
    }
    let mut classes: Vec<Vec<ProjPoint>> = vec![
        vec![ProjPoint::from_ints(&[0, 1, 0])?, ProjPoint::from_ints(&[1, 0, 0])?],
        vec![],
        vec![],
        vec![],
    ];
    let mut closed = true;
    for x in starts {
        let pts = cycle_points(slopes, x);
        closed &= cycle_return(slopes, x) == *x;
        for (color, px, py) in pts {
            classes[color].push(ProjPoint::affine_rat(&[px, py]));
        }
    }
    let config = DualPointConfig::new(classes)
        .map_err(|e| Error::InvalidParameter(format!("starts produce coincident points: {e}")))?;
    let report = check(&config, starts.len(), closed)?;
    Ok(DualCycles { config, report })
}

/// Nonzero rationals `±a/b` with `1 <= a, b <= bound`, in lowest terms,
/// ordered by height and then value.
pub fn small_rationals(bound: i64) -> Vec<RatScalar> {
    let mut out: Vec<RatScalar> = Vec::new();
    for a in 1..=bound {
        for b in 1..=bound {
            if num_integer::gcd(a, b) == 1 {
                out.push(rat(a, b));
                out.push(rat(-a, b));
            }
        }
    }
    out.sort_by(|x, y| {
        let h = |r: &RatScalar| r.numer().magnitude().max(r.denom().magnitude()).clone();
        h(x).cmp(&h(y)).then(x.cmp(y))
    });
    out
}

/// Best-effort search for parameters whose report is valid with `r` cycles.
/// Scaling the axes maps valid parameters to valid parameters, so the first
/// slope and the first start are fixed to 1 and the other slopes and starts
/// range over [`small_rationals`]`(bound)`. Returns the first valid hit in
/// enumeration order and the number of candidates tried.
pub fn search_dual_cycles(r: usize, bound: i64) -> Result<(Option<DualCycles>, usize)> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("need r >= 2, got {r}")));
    }
    let values = small_rationals(bound);
    let one = RatScalar::one();
    let mut tried = 0;
    for s2 in &values {
        for s3 in &values {
            let slopes = [one.clone(), s2.clone(), s3.clone()];
            let mut idx = vec![0usize; r - 1];
            loop {
                let mut starts = vec![one.clone()];
                starts.extend(idx.iter().map(|&i| values[i].clone()));
                tried += 1;
                if let Ok(out) = gen_dual_cycles(&slopes, &starts) {
                    if out.report.valid {
                        return Ok((Some(out), tried));
                    }
                }
                // odometer over the remaining starts
                let mut pos = 0;
                loop {
                    if pos == idx.len() {
                        break;
                    }
                    idx[pos] += 1;
                    if idx[pos] < values.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    break;
                }
            }
        }
    }
    Ok((None, tried))
}

fn check(config: &DualPointConfig, cycles: usize, closed: bool) -> Result<DualCycleReport> {
    let table = config.incidence_table();
    let verdict = table.k_consistency(3)?;
    let rainbow = mask_of([1, 2, 3]);
    let triples_with_infinite_ok = verdict
        .failures
        .iter()
        .all(|f| mask_of(f.colors.iter().copied()) == rainbow);
    let rainbow_ok = (1..4).all(|c| {
        (0..config.classes()[c].len()).all(|i| {
            table
                .has_s_incidence(LineRef::new(c, i), &[1, 2, 3])
                .expect("valid reference")
        })
    });
    let max_colorful = table.max_colorful_order().order;
    Ok(DualCycleReport {
        cycles,
        closed,
        triples_with_infinite_ok,
        rainbow_ok,
        max_colorful,
        valid: closed && verdict.consistent && max_colorful <= 3,
    })
}
