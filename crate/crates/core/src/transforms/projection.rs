use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::incidence::LineRef;
use crate::rng;

use super::ColoredLineConfig;

pub const MAX_PROJECTION_ATTEMPTS: u32 = 16;
const ENTRY_RANGE: u64 = 1000;

/// Result of a certified projection.
#[derive(Clone, Debug)]
pub struct Projection {
    pub config: ColoredLineConfig,
    /// `(d+1) x (D+1)` integer matrix acting on homogeneous coordinates.
    pub matrix: Vec<Vec<BigInt>>,
    /// Zero-based index of the successful draw.
    pub attempt: u32,
    /// Pairs of lines that were disjoint before and cross after; only
    /// possible for `d = 2`.
    pub new_crossings: Vec<(LineRef, LineRef)>,
}

/// Projects to projective d-space with a seeded random integer matrix and
/// certifies the result: every incidence of the source survives with exactly
/// the same lines, no lines collapse or coincide, and no new incidence
/// appears, except, when `d = 2`, crossings of exactly two lines.
pub fn project_generic(cfg: &ColoredLineConfig, d: usize, seed: u64) -> Result<Projection> {
    let big_d = cfg.d();
    if d < 2 || d > big_d {
        return Err(Error::InvalidParameter(format!(
            "target dimension {d} not in [2, {big_d}]"
        )));
    }
    let before: BTreeSet<Vec<LineRef>> = cfg.incidence_points().into_iter().map(|p| p.lines).collect();
    let mut last_reason = String::new();
    for attempt in 0..MAX_PROJECTION_ATTEMPTS {
        let mut s = rng::substream(seed, rng::PROJECTION_STREAM + u64::from(attempt));
        let matrix: Vec<Vec<BigInt>> = (0..=d)
            .map(|_| {
                (0..=big_d)
                    .map(|_| BigInt::from(rng::symmetric(&mut s, ENTRY_RANGE)))
                    .collect()
            })
            .collect();
        let Some(image) = cfg.map(&matrix) else {
            last_reason = "a line collapsed or two lines coincided".into();
            continue;
        };
        match audit(&before, &image, d) {
            Ok(new_crossings) => {
                return Ok(Projection {
                    config: image,
                    matrix,
                    attempt,
                    new_crossings,
                })
            }
            Err(reason) => last_reason = reason,
        }
    }
    Err(Error::RetriesExhausted {
        attempts: MAX_PROJECTION_ATTEMPTS as usize,
        reason: last_reason,
    })
}

fn audit(
    before: &BTreeSet<Vec<LineRef>>,
    image: &ColoredLineConfig,
    d: usize,
) -> std::result::Result<Vec<(LineRef, LineRef)>, String> {
    let after: BTreeMap<Vec<LineRef>, ()> = image.incidence_points().into_iter().map(|p| (p.lines, ())).collect();
    if let Some(lost) = before.iter().find(|s| !after.contains_key(*s)) {
        return Err(format!("incidence {lost:?} changed"));
    }
    let mut new_crossings = Vec::new();
    for lines in after.keys().filter(|s| !before.contains(*s)) {
        if d > 2 || lines.len() > 2 {
            return Err(format!("new incidence {lines:?}"));
        }
        new_crossings.push((lines[0], lines[1]));
    }
    Ok(new_crossings)
}
