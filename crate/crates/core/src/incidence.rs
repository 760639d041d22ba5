//! Color-level incidence bookkeeping shared by every configuration model.
//!
//! An [`IncidenceTable`] records, for each point where at least two lines
//! meet, the set of lines through it. The grid model, the exact projective
//! model and the dual point model all reduce to this table, and the
//! consistency verifiers only ever look at it.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A line addressed by color class and position inside the class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LineRef {
    pub color: usize,
    pub index: usize,
}

impl LineRef {
    pub fn new(color: usize, index: usize) -> Self {
        LineRef { color, index }
    }
}

/// Colors are packed into a `u64`; more than 64 classes is rejected.
pub type ColorMask = u64;

pub const MAX_COLORS: usize = 64;

pub fn mask_of(colors: impl IntoIterator<Item = usize>) -> ColorMask {
    colors.into_iter().fold(0, |m, c| m | (1 << c))
}

pub fn colors_of(mask: ColorMask) -> Vec<usize> {
    (0..MAX_COLORS).filter(|c| mask & (1 << c) != 0).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceTable {
    class_sizes: Vec<usize>,
    /// Lines through each incidence point, sorted, at least two per point.
    points: Vec<Vec<LineRef>>,
    masks: Vec<ColorMask>,
    /// `on_line[color][index]` lists the incidence points on that line.
    on_line: Vec<Vec<Vec<usize>>>,
}

impl IncidenceTable {
    /// Builds the table from per-point line lists. Points carrying fewer than
    /// two lines are dropped.
    pub fn new(class_sizes: Vec<usize>, points: Vec<Vec<LineRef>>) -> Result<Self> {
        if class_sizes.len() > MAX_COLORS {
            return Err(Error::InvalidParameter(format!(
                "at most {MAX_COLORS} colors supported, got {}",
                class_sizes.len()
            )));
        }
        let mut on_line: Vec<Vec<Vec<usize>>> = class_sizes.iter().map(|&n| vec![Vec::new(); n]).collect();
        let mut kept = Vec::with_capacity(points.len());
        let mut masks = Vec::with_capacity(points.len());
        for mut lines in points {
            lines.sort_unstable();
            lines.dedup();
            if lines.len() < 2 {
                continue;
            }
            let idx = kept.len();
            for l in &lines {
                let slot = on_line
                    .get_mut(l.color)
                    .and_then(|c| c.get_mut(l.index))
                    .ok_or_else(|| Error::InvalidParameter(format!("line {l:?} out of range")))?;
                slot.push(idx);
            }
            masks.push(mask_of(lines.iter().map(|l| l.color)));
            kept.push(lines);
        }
        Ok(IncidenceTable {
            class_sizes,
            points: kept,
            masks,
            on_line,
        })
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn num_colors(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn num_lines(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    pub fn points(&self) -> &[Vec<LineRef>] {
        &self.points
    }

    pub fn point_mask(&self, point: usize) -> ColorMask {
        self.masks[point]
    }

    pub fn points_on(&self, line: LineRef) -> &[usize] {
        &self.on_line[line.color][line.index]
    }

    pub fn lines(&self) -> impl Iterator<Item = LineRef> + '_ {
        self.class_sizes
            .iter()
            .enumerate()
            .flat_map(|(c, &n)| (0..n).map(move |i| LineRef::new(c, i)))
    }

    fn check_line(&self, line: LineRef) -> Result<()> {
        if line.color >= self.num_colors() || line.index >= self.class_sizes[line.color] {
            return Err(Error::InvalidParameter(format!("no line {line:?}")));
        }
        Ok(())
    }

    /// Whether some point of `line` lies on lines of every color in `colors`.
    pub fn has_s_incidence(&self, line: LineRef, colors: &[usize]) -> Result<bool> {
        self.check_line(line)?;
        if !colors.contains(&line.color) {
            return Err(Error::ColorNotInSet { color: line.color });
        }
        let want = mask_of(colors.iter().copied());
        if want == 1 << line.color {
            return Ok(true);
        }
        Ok(self.points_on(line).iter().any(|&p| self.masks[p] & want == want))
    }

    /// Checks k-consistency and returns every failing (line, color set) pair.
    pub fn k_consistency(&self, k: usize) -> Result<ConsistencyVerdict> {
        if k < 1 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        let m = self.num_colors();
        if k > m {
            return Err(Error::InvalidParameter(format!("k = {k} exceeds {m} colors")));
        }
        let subsets = k_subsets(m, k);
        let mut failures = Vec::new();
        for line in self.lines() {
            let masks: Vec<ColorMask> = self.points_on(line).iter().map(|&p| self.masks[p]).collect();
            for &s in &subsets {
                if s & (1 << line.color) == 0 || s == 1 << line.color {
                    continue;
                }
                if !masks.iter().any(|&pm| pm & s == s) {
                    failures.push(Failure {
                        line,
                        colors: colors_of(s),
                    });
                }
            }
        }
        Ok(ConsistencyVerdict {
            k,
            consistent: failures.is_empty(),
            failures,
        })
    }

    /// Largest number of distinct colors at a single point, with a witness.
    pub fn max_colorful_order(&self) -> ColorfulOrder {
        let best = self
            .masks
            .iter()
            .enumerate()
            .max_by_key(|&(i, m)| (m.count_ones(), std::cmp::Reverse(i)));
        match best {
            Some((i, m)) => ColorfulOrder {
                order: m.count_ones() as usize,
                witness: Some(i),
            },
            None => ColorfulOrder {
                order: usize::from(self.num_lines() > 0),
                witness: None,
            },
        }
    }

    /// The maximal concurrences carrying at least two colors, as sorted line
    /// sets.
    pub fn multicolor_points(&self) -> BTreeSet<Vec<LineRef>> {
        self.points
            .iter()
            .zip(&self.masks)
            .filter(|(_, m)| m.count_ones() >= 2)
            .map(|(ls, _)| ls.clone())
            .collect()
    }
}

/// All bit masks with exactly `k` of the low `m` bits set, ordered
/// lexicographically by their sorted element lists.
pub fn k_subsets(m: usize, k: usize) -> Vec<ColorMask> {
    let mut out = Vec::new();
    fn rec(start: usize, m: usize, left: usize, acc: ColorMask, out: &mut Vec<ColorMask>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for c in start..m {
            if m - c < left {
                break;
            }
            rec(c + 1, m, left - 1, acc | (1 << c), out);
        }
    }
    rec(0, m, k, 0, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub line: LineRef,
    pub colors: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyVerdict {
    pub k: usize,
    pub consistent: bool,
    pub failures: Vec<Failure>,
}

impl ConsistencyVerdict {
    /// Distinct lines that appear in at least one failure.
    pub fn bad_lines(&self) -> BTreeSet<LineRef> {
        self.failures.iter().map(|f| f.line).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorfulOrder {
    pub order: usize,
    /// Index into [`IncidenceTable::points`].
    pub witness: Option<usize>,
}

/// Minimality check: true iff the table is k-consistent and deleting any
/// single line breaks k-consistency.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityVerdict {
    pub consistent: bool,
    /// Lines whose removal keeps the configuration k-consistent.
    pub redundant: Vec<LineRef>,
}

impl MinimalityVerdict {
    pub fn minimal(&self) -> bool {
        self.consistent && self.redundant.is_empty()
    }
}

impl IncidenceTable {
    /// Only lines sharing a point with the removed line can lose an
    /// incidence, so each removal rechecks just those lines with the masks of
    /// the shared points recomputed.
    pub fn minimality(&self, k: usize) -> Result<MinimalityVerdict> {
        if !self.k_consistency(k)?.consistent {
            return Ok(MinimalityVerdict {
                consistent: false,
                redundant: Vec::new(),
            });
        }
        let subsets = k_subsets(self.num_colors(), k);
        let lines: Vec<LineRef> = self.lines().collect();
        let redundant = lines
            .par_iter()
            .copied()
            .filter(|&line| !self.removal_breaks(line, &subsets))
            .collect();
        Ok(MinimalityVerdict {
            consistent: true,
            redundant,
        })
    }

    fn removal_breaks(&self, removed: LineRef, subsets: &[ColorMask]) -> bool {
        let reduced_mask = |p: usize| -> ColorMask {
            let rest = self.points[p].iter().filter(|&&l| l != removed);
            if rest.clone().count() < 2 {
                0
            } else {
                mask_of(rest.map(|l| l.color))
            }
        };
        let touched: Vec<(usize, ColorMask)> = self.points_on(removed).iter().map(|&p| (p, reduced_mask(p))).collect();
        let affected: BTreeSet<LineRef> = touched
            .iter()
            .flat_map(|&(p, _)| self.points[p].iter().copied())
            .filter(|&l| l != removed)
            .collect();
        affected.into_iter().any(|line| {
            let masks: Vec<ColorMask> = self
                .points_on(line)
                .iter()
                .map(|&p| touched.iter().find(|t| t.0 == p).map_or(self.masks[p], |t| t.1))
                .collect();
            subsets
                .iter()
                .any(|&s| s & (1 << line.color) != 0 && s != 1 << line.color && !masks.iter().any(|&pm| pm & s == s))
        })
    }

    /// Table of the configuration with `line` removed from its class; lines
    /// after it in the same class shift down by one.
    pub fn without_line(&self, line: LineRef) -> IncidenceTable {
        let mut sizes = self.class_sizes.clone();
        sizes[line.color] -= 1;
        let points = self
            .points
            .iter()
            .map(|ls| {
                ls.iter()
                    .filter(|&&l| l != line)
                    .map(|&l| {
                        if l.color == line.color && l.index > line.index {
                            LineRef::new(l.color, l.index - 1)
                        } else {
                            l
                        }
                    })
                    .collect()
            })
            .collect();
        IncidenceTable::new(sizes, points).expect("subset of a valid table")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(c: usize, i: usize) -> LineRef {
        LineRef::new(c, i)
    }

    #[test]
    fn subsets_enumerated() {
        assert_eq!(k_subsets(4, 2).len(), 6);
        assert_eq!(k_subsets(4, 4), vec![0b1111]);
        assert_eq!(k_subsets(3, 0), vec![0]);
    }

    #[test]
    fn single_crossing() {
        let t = IncidenceTable::new(vec![1, 1], vec![vec![l(0, 0), l(1, 0)]]).unwrap();
        assert_eq!(t.max_colorful_order().order, 2);
        assert!(t.k_consistency(2).unwrap().consistent);
        assert!(t.has_s_incidence(l(0, 0), &[0]).unwrap());
        assert!(t.has_s_incidence(l(0, 0), &[0, 1]).unwrap());
        assert_eq!(t.has_s_incidence(l(0, 0), &[1]), Err(Error::ColorNotInSet { color: 0 }));
    }

    #[test]
    fn vacuous_and_errors() {
        let t = IncidenceTable::new(vec![0, 0, 0], vec![]).unwrap();
        assert!(t.k_consistency(2).unwrap().consistent);
        assert_eq!(t.max_colorful_order().order, 0);
        assert!(t.k_consistency(0).is_err());
        assert!(t.k_consistency(4).is_err());
        assert!(t.minimality(2).unwrap().minimal());
    }

    #[test]
    fn redundant_line_detected() {
        // two red lines both crossing the single blue line at distinct points
        let t = IncidenceTable::new(vec![2, 1], vec![vec![l(0, 0), l(1, 0)], vec![l(0, 1), l(1, 0)]]).unwrap();
        let v = t.minimality(2).unwrap();
        assert!(v.consistent);
        assert_eq!(v.redundant, vec![l(0, 0), l(0, 1)]);
        assert!(!v.minimal());
    }

    #[test]
    fn failures_listed() {
        let t = IncidenceTable::new(vec![1, 1, 1], vec![vec![l(0, 0), l(1, 0)]]).unwrap();
        let v = t.k_consistency(2).unwrap();
        assert!(!v.consistent);
        // line a misses c, line b misses c, line c misses both
        assert_eq!(v.failures.len(), 4);
        assert_eq!(v.bad_lines().len(), 3);
    }
}
