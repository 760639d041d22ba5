use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactgeom::linalg::{make_primitive, nullspace};
use crate::exactgeom::{cross3, Line, ProjPoint};
use crate::incidence::{ConsistencyVerdict, IncidenceTable, LineRef};

use super::ColoredLineConfig;

/// Colored points of the projective plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPointConfig {
    classes: Vec<Vec<ProjPoint>>,
}

/// A line through at least two points of a [`DualPointConfig`]; `points`
/// addresses points by (color, index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment {
    /// Coefficients `(a, b, c)` of `a x + b y + c w = 0`, primitive.
    pub line: Vec<BigInt>,
    pub points: Vec<LineRef>,
}

impl DualPointConfig {
    pub fn new(classes: Vec<Vec<ProjPoint>>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (c, class) in classes.iter().enumerate() {
            for (i, p) in class.iter().enumerate() {
                if p.dim() != 2 {
                    return Err(Error::DimensionMismatch {
                        expected: 2,
                        got: p.dim(),
                    });
                }
                if !seen.insert(p.clone()) {
                    return Err(Error::InvalidParameter(format!(
                        "point {p} repeated at color {c}, index {i}"
                    )));
                }
            }
        }
        Ok(DualPointConfig { classes })
    }

    pub fn classes(&self) -> &[Vec<ProjPoint>] {
        &self.classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn point(&self, r: LineRef) -> &ProjPoint {
        &self.classes[r.color][r.index]
    }

    fn refs(&self) -> Vec<LineRef> {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(c, cl)| (0..cl.len()).map(move |i| LineRef::new(c, i)))
            .collect()
    }

    /// Every line through two or more points, sorted by line coefficients.
    pub fn alignments(&self) -> Vec<Alignment> {
        let refs = self.refs();
        let mut by_line: BTreeMap<Vec<BigInt>, BTreeSet<LineRef>> = BTreeMap::new();
        for (i, &a) in refs.iter().enumerate() {
            for &b in &refs[i + 1..] {
                let mut l = cross3(self.point(a).coords(), self.point(b).coords());
                make_primitive(&mut l);
                let set = by_line.entry(l).or_default();
                set.insert(a);
                set.insert(b);
            }
        }
        by_line
            .into_iter()
            .map(|(line, pts)| Alignment {
                line,
                points: pts.into_iter().collect(),
            })
            .collect()
    }

    /// Alignments play the role of incidence points: the table is the one of
    /// the dual line configuration.
    pub fn incidence_table(&self) -> IncidenceTable {
        let pts = self.alignments().into_iter().map(|a| a.points).collect();
        IncidenceTable::new(self.class_sizes(), pts).expect("valid point references")
    }

    pub fn is_k_consistent(&self, k: usize) -> Result<ConsistencyVerdict> {
        self.incidence_table().k_consistency(k)
    }

    /// Largest number of colors on one line, with a witness alignment.
    pub fn max_colorful_order(&self) -> (usize, Option<Alignment>) {
        let al = self.alignments();
        let table = IncidenceTable::new(self.class_sizes(), al.iter().map(|a| a.points.clone()).collect())
            .expect("valid point references");
        let o = table.max_colorful_order();
        (o.order, o.witness.map(|w| al[w].clone()))
    }
}

/// Polarity with respect to the conic `x^2 + y^2 + w^2 = 0`: the line
/// `a x + b y + c w = 0` corresponds to the point `(a : b : c)`. Concurrent
/// lines go to collinear points and back.
pub fn dualize(cfg: &ColoredLineConfig) -> Result<DualPointConfig> {
    if cfg.d() != 2 {
        return Err(Error::InvalidParameter(format!(
            "duality needs a planar configuration, got dimension {}; project first",
            cfg.d()
        )));
    }
    let classes = cfg
        .classes()
        .iter()
        .map(|c| {
            c.lines
                .iter()
                .map(|l| ProjPoint::new(cross3(l.p().coords(), l.q().coords())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    DualPointConfig::new(classes)
}

/// Inverse of [`dualize`].
pub fn undualize(dual: &DualPointConfig) -> Result<ColoredLineConfig> {
    let classes = dual
        .classes()
        .iter()
        .map(|c| c.iter().map(polar_line).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    ColoredLineConfig::new(2, classes)
}

fn polar_line(p: &ProjPoint) -> Result<Line> {
    let mut basis = nullspace(&[p.coords().to_vec()], 3).into_iter();
    let (Some(a), Some(b)) = (basis.next(), basis.next()) else {
        return Err(Error::DegenerateLine);
    };
    Line::new(ProjPoint::new(a)?, ProjPoint::new(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_ints(c).unwrap()
    }

    fn line(a: &[i64], b: &[i64]) -> Line {
        Line::new(pt(a), pt(b)).unwrap()
    }

    fn four_colors() -> ColoredLineConfig {
        ColoredLineConfig::new(
            2,
            vec![
                vec![line(&[0, 0, 1], &[1, 0, 1]), line(&[0, 1, 1], &[1, 1, 1])],
                vec![line(&[0, 0, 1], &[0, 1, 1]), line(&[1, 0, 1], &[1, 1, 1])],
                vec![line(&[0, 0, 1], &[1, 1, 1]), line(&[1, 0, 1], &[0, 1, 1])],
                vec![line(&[0, 0, 1], &[2, 1, 1]), line(&[1, 0, 1], &[3, 1, 1])],
            ],
        )
        .unwrap()
    }

    #[test]
    fn polar_of_axis() {
        // x = 0  <->  (1 : 0 : 0)
        let cfg = ColoredLineConfig::new(2, vec![vec![line(&[0, 0, 1], &[0, 1, 1])]]).unwrap();
        assert_eq!(dualize(&cfg).unwrap().classes()[0][0], pt(&[1, 0, 0]));
    }

    #[test]
    fn round_trip_and_tables_agree() {
        let cfg = four_colors();
        let dual = dualize(&cfg).unwrap();
        assert_eq!(dual.incidence_table(), cfg.incidence_table());
        let back = undualize(&dual).unwrap();
        assert_eq!(back.incidence_table(), cfg.incidence_table());
        for (a, b) in back.classes().iter().zip(cfg.classes()) {
            for (x, y) in a.lines.iter().zip(&b.lines) {
                assert!(crate::exactgeom::same_line(x, y).unwrap());
            }
        }
        assert_eq!(dual.max_colorful_order().0, cfg.max_colorful_order().0);
    }

    #[test]
    fn rejects_spatial_config() {
        let cfg = ColoredLineConfig::new(3, vec![vec![line(&[0, 0, 0, 1], &[1, 0, 0, 1])]]).unwrap();
        assert!(dualize(&cfg).is_err());
    }
}
