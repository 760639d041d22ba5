//! Colored line configurations in projective space and the maps between
//! them: the lift that turns parallel grid classes into concurrent ones,
//! generic projection to lower dimension, and planar point-line duality.

mod duality;
mod projection;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactgeom::{meet, span, Line, ProjPoint};
use crate::gridmodel::ColoredGridConfig;
use crate::incidence::{ConsistencyVerdict, IncidenceTable, LineRef, MinimalityVerdict};

pub use duality::{dualize, undualize, Alignment, DualPointConfig};
pub use projection::{project_generic, Projection, MAX_PROJECTION_ATTEMPTS};

/// One color class; `center` is the common point when the class has at least
/// two lines and they are all concurrent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineClass {
    pub lines: Vec<Line>,
    pub center: Option<ProjPoint>,
}

/// A point where at least two lines of a configuration meet, with every line
/// through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidencePoint {
    pub point: ProjPoint,
    pub lines: Vec<LineRef>,
}

impl IncidencePoint {
    pub fn colors(&self) -> BTreeSet<usize> {
        self.lines.iter().map(|l| l.color).collect()
    }
}

/// Colored lines in projective d-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredLineConfig {
    d: usize,
    classes: Vec<LineClass>,
}

impl ColoredLineConfig {
    pub fn new(d: usize, classes: Vec<Vec<Line>>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!(
                "ambient dimension must be >= 2, got {d}"
            )));
        }
        let mut seen = HashSet::new();
        for (c, class) in classes.iter().enumerate() {
            for (i, l) in class.iter().enumerate() {
                if l.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: l.dim(),
                    });
                }
                if !seen.insert(l.canonical_key()) {
                    return Err(Error::DuplicateLine(format!("color {c}, index {i}")));
                }
            }
        }
        let classes = classes
            .into_iter()
            .map(|lines| {
                let center = common_point(&lines)?;
                Ok(LineClass { lines, center })
            })
            .collect::<Result<_>>()?;
        Ok(ColoredLineConfig { d, classes })
    }

    /// The grid lines as exact lines of projective (k+1)-space.
    pub fn from_grid(cfg: &ColoredGridConfig) -> Self {
        let classes = cfg
            .classes()
            .iter()
            .map(|c| c.lines.iter().map(|l| l.to_exact()).collect())
            .collect();
        ColoredLineConfig::new(cfg.k() + 1, classes).expect("grid lines are distinct")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn classes(&self) -> &[LineClass] {
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

    pub fn line(&self, r: LineRef) -> &Line {
        &self.classes[r.color].lines[r.index]
    }

    pub fn line_refs(&self) -> Vec<LineRef> {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(c, cl)| (0..cl.lines.len()).map(move |i| LineRef::new(c, i)))
            .collect()
    }

    /// Applies a linear map to every line; `None` if some line collapses or
    /// two lines coincide.
    pub fn map(&self, matrix: &[Vec<BigInt>]) -> Option<ColoredLineConfig> {
        let d = matrix.len().checked_sub(1)?;
        let classes: Option<Vec<Vec<Line>>> = self
            .classes
            .iter()
            .map(|c| c.lines.iter().map(|l| l.map(matrix)).collect())
            .collect();
        ColoredLineConfig::new(d, classes?).ok()
    }

    /// Every point lying on two or more lines, including points at infinity,
    /// sorted by point.
    pub fn incidence_points(&self) -> Vec<IncidencePoint> {
        let refs = self.line_refs();
        let pairs: Vec<(usize, usize)> = (0..refs.len())
            .flat_map(|i| (i + 1..refs.len()).map(move |j| (i, j)))
            .collect();
        let hits: Vec<(ProjPoint, usize, usize)> = pairs
            .par_iter()
            .filter_map(|&(i, j)| {
                meet(self.line(refs[i]), self.line(refs[j]))
                    .expect("distinct lines of one dimension")
                    .map(|p| (p, i, j))
            })
            .collect();
        let mut by_point: BTreeMap<ProjPoint, BTreeSet<LineRef>> = BTreeMap::new();
        for (p, i, j) in hits {
            let set = by_point.entry(p).or_default();
            set.insert(refs[i]);
            set.insert(refs[j]);
        }
        by_point
            .into_iter()
            .map(|(point, lines)| IncidencePoint {
                point,
                lines: lines.into_iter().collect(),
            })
            .collect()
    }

    pub fn incidence_table(&self) -> IncidenceTable {
        let pts = self.incidence_points().into_iter().map(|p| p.lines).collect();
        IncidenceTable::new(self.class_sizes(), pts).expect("valid line references")
    }

    pub fn is_k_consistent(&self, k: usize) -> Result<ConsistencyVerdict> {
        self.incidence_table().k_consistency(k)
    }

    /// Largest number of colors meeting at one point, with a witness point.
    pub fn max_colorful_order(&self) -> (usize, Option<IncidencePoint>) {
        let pts = self.incidence_points();
        let table = IncidenceTable::new(self.class_sizes(), pts.iter().map(|p| p.lines.clone()).collect())
            .expect("valid line references");
        let o = table.max_colorful_order();
        (o.order, o.witness.map(|w| pts[w].clone()))
    }

    pub fn minimality(&self, k: usize) -> Result<MinimalityVerdict> {
        self.incidence_table().minimality(k)
    }
}

fn common_point(lines: &[Line]) -> Result<Option<ProjPoint>> {
    let [a, b, rest @ ..] = lines else {
        return Ok(None);
    };
    let Some(p) = meet(a, b)? else {
        return Ok(None);
    };
    for l in rest {
        if !l.contains(&p)? {
            return Ok(None);
        }
    }
    Ok(Some(p))
}

/// Sends the hyperplane `x_1 + ... + x_(k+1) = c` to infinity, with `c`
/// larger than any coordinate sum in the grid. The direction of axis `a`
/// becomes the finite point `e_a`, which is the center of class `a`.
pub fn lift_matrix(k: usize, n: u32) -> Vec<Vec<BigInt>> {
    let dim = k + 1;
    let c = BigInt::from(dim as u64 * u64::from(n) + 1);
    let mut m = vec![vec![BigInt::from(0); dim + 1]; dim + 1];
    for (i, row) in m.iter_mut().enumerate().take(dim) {
        row[i] = BigInt::from(1);
    }
    for j in 0..dim {
        m[dim][j] = BigInt::from(1);
    }
    m[dim][dim] = -c;
    m
}

/// Projective image of the grid configuration in which each parallel class
/// becomes concurrent.
pub fn lift_to_concurrent(cfg: &ColoredGridConfig) -> ColoredLineConfig {
    ColoredLineConfig::from_grid(cfg)
        .map(&lift_matrix(cfg.k(), cfg.n()))
        .expect("the lift matrix is invertible")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarityVerdict {
    pub planar: bool,
    /// Projective dimension of the span of all lines.
    pub span_dim: usize,
}

/// Whether all lines lie in a common 2-flat.
pub fn extract_planarity(cfg: &ColoredLineConfig) -> PlanarityVerdict {
    let pts: Vec<ProjPoint> = cfg
        .classes
        .iter()
        .flat_map(|c| c.lines.iter().flat_map(|l| [l.p().clone(), l.q().clone()]))
        .collect();
    let span_dim = if pts.is_empty() {
        0
    } else {
        span(&pts).expect("same dimension").dim()
    };
    PlanarityVerdict {
        planar: span_dim <= 2,
        span_dim,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridmodel::{GridClass, GridLine};

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_ints(c).unwrap()
    }

    fn line(a: &[i64], b: &[i64]) -> Line {
        Line::new(pt(a), pt(b)).unwrap()
    }

    fn small_grid() -> ColoredGridConfig {
        let l = |axis, base: Vec<u32>| GridLine::new(axis, base).unwrap();
        ColoredGridConfig::new(
            2,
            3,
            vec![
                GridClass {
                    axis: 0,
                    lines: vec![l(0, vec![0, 1, 1]), l(0, vec![0, 2, 1])],
                },
                GridClass {
                    axis: 1,
                    lines: vec![l(1, vec![1, 0, 1]), l(1, vec![3, 0, 2])],
                },
                GridClass {
                    axis: 2,
                    lines: vec![l(2, vec![1, 1, 0])],
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_duplicates_and_low_dimension() {
        let a = line(&[0, 0, 1], &[1, 0, 1]);
        let b = line(&[2, 0, 1], &[3, 0, 1]);
        assert!(matches!(
            ColoredLineConfig::new(2, vec![vec![a.clone()], vec![b]]),
            Err(Error::DuplicateLine(_))
        ));
        assert!(ColoredLineConfig::new(1, vec![]).is_err());
    }

    #[test]
    fn crossing_pair() {
        let cfg = ColoredLineConfig::new(
            2,
            vec![vec![line(&[0, 0, 1], &[1, 0, 1])], vec![line(&[0, 0, 1], &[0, 1, 1])]],
        )
        .unwrap();
        let pts = cfg.incidence_points();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].point, pt(&[0, 0, 1]));
        assert_eq!(cfg.max_colorful_order().0, 2);
    }

    #[test]
    fn grid_embedding_keeps_multicolor_points() {
        let g = small_grid();
        let exact = ColoredLineConfig::from_grid(&g);
        let from_grid: BTreeSet<Vec<LineRef>> = g.incidence_table().multicolor_points();
        assert_eq!(exact.incidence_table().multicolor_points(), from_grid);
        // parallel classes meet at infinity
        assert!(exact.incidence_points().iter().any(|p| p.point.is_at_infinity()));
    }

    #[test]
    fn lift_makes_classes_concurrent() {
        let g = small_grid();
        let lifted = lift_to_concurrent(&g);
        for (a, class) in lifted.classes().iter().enumerate() {
            if class.lines.len() >= 2 {
                let mut e = vec![0i64; 4];
                e[a] = 1;
                e[3] = 1;
                assert_eq!(class.center, Some(pt(&e)));
            }
        }
        assert!(lifted.incidence_points().iter().all(|p| !p.point.is_at_infinity()));
        assert_eq!(
            lifted.incidence_table(),
            ColoredLineConfig::from_grid(&g).incidence_table()
        );
    }

    #[test]
    fn planarity() {
        let flat = ColoredLineConfig::new(
            3,
            vec![vec![
                line(&[0, 0, 0, 1], &[1, 0, 0, 1]),
                line(&[0, 1, 0, 1], &[1, 1, 0, 1]),
            ]],
        )
        .unwrap();
        assert!(extract_planarity(&flat).planar);
        let g = ColoredLineConfig::from_grid(&small_grid());
        assert_eq!(
            extract_planarity(&g),
            PlanarityVerdict {
                planar: false,
                span_dim: 3
            }
        );
    }
}
