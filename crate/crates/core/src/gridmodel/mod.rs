//! Axis-parallel lines through the integer grid `[n]^(k+1)`.
//!
//! A grid line is fixed by its axis and the coordinates of any of its points
//! in the other k slots. Two lines meet iff their axes differ and their base
//! coordinates agree outside the two axis slots, so incidences can be found
//! by bucketing lines on those projections without touching the n^(k+1)
//! grid points.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::exactgeom::{Line, ProjPoint};
use crate::incidence::{ColorfulOrder, ConsistencyVerdict, IncidenceTable, LineRef, MinimalityVerdict};

pub type GridPoint = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridLine {
    /// Zero-based axis index in `0..=k`.
    pub axis: usize,
    /// Coordinates of length k+1; the axis slot is stored as 0.
    pub base: Vec<u32>,
}

impl GridLine {
    pub fn new(axis: usize, mut base: Vec<u32>) -> Result<Self> {
        if axis >= base.len() {
            return Err(Error::InvalidGridLine(format!(
                "axis {axis} out of range for dimension {}",
                base.len()
            )));
        }
        base[axis] = 0;
        Ok(GridLine { axis, base })
    }

    /// Builds a line from the k coordinates outside the axis slot.
    pub fn from_reduced(axis: usize, reduced: &[u32]) -> Result<Self> {
        if axis > reduced.len() {
            return Err(Error::InvalidGridLine(format!("axis {axis} out of range")));
        }
        let mut base = reduced.to_vec();
        base.insert(axis, 0);
        Ok(GridLine { axis, base })
    }

    /// The k coordinates outside the axis slot.
    pub fn reduced(&self) -> Vec<u32> {
        self.base
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.axis)
            .map(|(_, &v)| v)
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn contains(&self, point: &[u32]) -> bool {
        point.len() == self.base.len()
            && self
                .base
                .iter()
                .zip(point)
                .enumerate()
                .all(|(i, (b, p))| i == self.axis || b == p)
    }

    pub fn point_at(&self, t: u32) -> GridPoint {
        let mut p = self.base.clone();
        p[self.axis] = t;
        p
    }

    /// The same line as an exact projective line in R^(k+1): the grid point
    /// with axis coordinate 1 and the axis direction at infinity.
    pub fn to_exact(&self) -> Line {
        let finite: Vec<i64> = self.point_at(1).iter().map(|&v| i64::from(v)).collect();
        let mut dir = vec![0i64; self.dim() + 1];
        dir[self.axis] = 1;
        Line::new(
            ProjPoint::affine(&finite),
            ProjPoint::from_ints(&dir).expect("unit vector"),
        )
        .expect("finite and infinite points differ")
    }

    fn validate(&self, n: u32) -> Result<()> {
        for (i, &v) in self.base.iter().enumerate() {
            if i != self.axis && !(1..=n).contains(&v) {
                return Err(Error::InvalidGridLine(format!(
                    "coordinate {v} in slot {i} outside [1, {n}]"
                )));
            }
        }
        Ok(())
    }
}

/// Intersection point of two grid lines, `None` when they miss each other.
pub fn grid_meet(a: &GridLine, b: &GridLine) -> Result<Option<GridPoint>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    if a == b {
        return Err(Error::IdenticalLines);
    }
    if a.axis == b.axis {
        return Ok(None);
    }
    let agree = (0..a.dim()).all(|i| i == a.axis || i == b.axis || a.base[i] == b.base[i]);
    if !agree {
        return Ok(None);
    }
    let mut p = a.base.clone();
    p[a.axis] = b.base[a.axis];
    Ok(Some(p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridClass {
    pub axis: usize,
    pub lines: Vec<GridLine>,
}

/// Colored axis-parallel lines in `[n]^(k+1)`; class index is the color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGridConfig {
    k: usize,
    n: u32,
    classes: Vec<GridClass>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidencePointRecord {
    pub point: GridPoint,
    pub lines: Vec<LineRef>,
    pub colors: BTreeSet<usize>,
}

impl ColoredGridConfig {
    /// Validates ranges, per-class axes and global distinctness of lines.
    pub fn new(k: usize, n: u32, classes: Vec<GridClass>) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter("grid needs k >= 1".into()));
        }
        if n < 1 {
            return Err(Error::InvalidParameter("grid side n must be >= 1".into()));
        }
        let mut seen = HashSet::new();
        for (c, class) in classes.iter().enumerate() {
            if class.axis > k {
                return Err(Error::InvalidGridLine(format!("class {c} axis {} > k", class.axis)));
            }
            for line in &class.lines {
                if line.dim() != k + 1 {
                    return Err(Error::DimensionMismatch {
                        expected: k + 1,
                        got: line.dim(),
                    });
                }
                if line.axis != class.axis {
                    return Err(Error::InvalidGridLine(format!(
                        "line with axis {} in class {c} of axis {}",
                        line.axis, class.axis
                    )));
                }
                line.validate(n)?;
                if !seen.insert(line) {
                    return Err(Error::DuplicateLine(format!("{line:?}")));
                }
            }
        }
        Ok(ColoredGridConfig { k, n, classes })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn classes(&self) -> &[GridClass] {
        &self.classes
    }

    pub fn num_colors(&self) -> usize {
        self.classes.len()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.lines.len()).collect()
    }

    pub fn total_lines(&self) -> usize {
        self.classes.iter().map(|c| c.lines.len()).sum()
    }

    pub fn line(&self, r: LineRef) -> &GridLine {
        &self.classes[r.color].lines[r.index]
    }

    pub fn line_refs(&self) -> impl Iterator<Item = LineRef> + '_ {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(c, cl)| (0..cl.lines.len()).map(move |i| LineRef::new(c, i)))
    }

    /// Same configuration without one line.
    pub fn without(&self, r: LineRef) -> ColoredGridConfig {
        let mut classes = self.classes.clone();
        classes[r.color].lines.remove(r.index);
        ColoredGridConfig {
            k: self.k,
            n: self.n,
            classes,
        }
    }

    /// Every grid point on two or more lines, sorted by point.
    pub fn all_incidences(&self) -> Vec<IncidencePointRecord> {
        let dim = self.k + 1;
        let mut by_axis: Vec<Vec<(LineRef, &GridLine)>> = vec![Vec::new(); dim];
        for r in self.line_refs() {
            let l = self.line(r);
            by_axis[l.axis].push((r, l));
        }
        let mut points: BTreeMap<GridPoint, BTreeSet<LineRef>> = BTreeMap::new();
        for a in 0..dim {
            for b in a + 1..dim {
                if by_axis[a].is_empty() || by_axis[b].is_empty() {
                    continue;
                }
                let key = |l: &GridLine| -> Vec<u32> {
                    l.base
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != a && i != b)
                        .map(|(_, &v)| v)
                        .collect()
                };
                let mut bucket: HashMap<Vec<u32>, Vec<(LineRef, &GridLine)>> = HashMap::new();
                for &(r, l) in &by_axis[a] {
                    bucket.entry(key(l)).or_default().push((r, l));
                }
                for &(rb, lb) in &by_axis[b] {
                    if let Some(hits) = bucket.get(&key(lb)) {
                        for &(ra, la) in hits {
                            let mut p = la.base.clone();
                            p[a] = lb.base[a];
                            let e = points.entry(p).or_default();
                            e.insert(ra);
                            e.insert(rb);
                        }
                    }
                }
            }
        }
        points
            .into_iter()
            .map(|(point, lines)| {
                let colors = lines.iter().map(|l| l.color).collect();
                IncidencePointRecord {
                    point,
                    lines: lines.into_iter().collect(),
                    colors,
                }
            })
            .collect()
    }

    pub fn incidence_table(&self) -> IncidenceTable {
        let points = self.all_incidences().into_iter().map(|r| r.lines).collect();
        IncidenceTable::new(self.class_sizes(), points).expect("line refs come from the config")
    }

    pub fn has_s_incidence(&self, line: LineRef, colors: &[usize]) -> Result<bool> {
        self.incidence_table().has_s_incidence(line, colors)
    }

    pub fn is_k_consistent(&self, k: usize) -> Result<ConsistencyVerdict> {
        self.incidence_table().k_consistency(k)
    }

    /// Largest number of colors meeting at one point, with the witness record.
    pub fn max_colorful_order(&self) -> (usize, Option<IncidencePointRecord>) {
        let records = self.all_incidences();
        let table = IncidenceTable::new(self.class_sizes(), records.iter().map(|r| r.lines.clone()).collect())
            .expect("line refs come from the config");
        let ColorfulOrder { order, witness } = table.max_colorful_order();
        (order, witness.map(|i| records[i].clone()))
    }

    pub fn minimality(&self, k: usize) -> Result<MinimalityVerdict> {
        self.incidence_table().minimality(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl(axis: usize, base: &[u32]) -> GridLine {
        GridLine::new(axis, base.to_vec()).unwrap()
    }

    #[test]
    fn meet_examples() {
        // axes are zero-based: axis 0 is the first coordinate
        let a = gl(0, &[0, 2, 3, 3, 1]);
        let b = gl(1, &[1, 0, 3, 3, 1]);
        assert_eq!(grid_meet(&a, &b).unwrap(), Some(vec![1, 2, 3, 3, 1]));
        let c = gl(1, &[1, 0, 3, 3, 2]);
        assert_eq!(grid_meet(&a, &c).unwrap(), None);
        let d = gl(2, &[1, 1, 0, 1]);
        let e = gl(2, &[1, 2, 0, 1]);
        assert_eq!(grid_meet(&d, &e).unwrap(), None);
        assert_eq!(grid_meet(&d, &d.clone()), Err(Error::IdenticalLines));
    }

    #[test]
    fn rejects_duplicates_and_ranges() {
        let l = gl(0, &[0, 1, 1]);
        let dup = ColoredGridConfig::new(
            2,
            2,
            vec![
                GridClass {
                    axis: 0,
                    lines: vec![l.clone()],
                },
                GridClass {
                    axis: 0,
                    lines: vec![l],
                },
            ],
        );
        assert!(matches!(dup, Err(Error::DuplicateLine(_))));
        let out = ColoredGridConfig::new(
            2,
            2,
            vec![GridClass {
                axis: 0,
                lines: vec![gl(0, &[0, 3, 1])],
            }],
        );
        assert!(matches!(out, Err(Error::InvalidGridLine(_))));
    }

    #[test]
    fn two_crossing_lines() {
        let cfg = ColoredGridConfig::new(
            2,
            3,
            vec![
                GridClass {
                    axis: 0,
                    lines: vec![gl(0, &[0, 2, 1])],
                },
                GridClass {
                    axis: 1,
                    lines: vec![gl(1, &[3, 0, 1])],
                },
            ],
        )
        .unwrap();
        let inc = cfg.all_incidences();
        assert_eq!(inc.len(), 1);
        assert_eq!(inc[0].point, vec![3, 2, 1]);
        assert_eq!(inc[0].lines.len(), 2);
        assert_eq!(cfg.max_colorful_order().0, 2);
        let empty = ColoredGridConfig::new(2, 3, vec![]).unwrap();
        assert!(empty.all_incidences().is_empty());
    }

    #[test]
    fn reduced_round_trip() {
        let l = GridLine::from_reduced(2, &[4, 5, 6]).unwrap();
        assert_eq!(l.base, vec![4, 5, 0, 6]);
        assert_eq!(l.reduced(), vec![4, 5, 6]);
        assert!(l.contains(&[4, 5, 9, 6]));
        assert!(!l.contains(&[4, 4, 9, 6]));
    }
}
