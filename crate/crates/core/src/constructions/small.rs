//! The two non-planar 3-consistent configurations of four classes of three
//! lines without a 4-colored incidence. Line selection and coloring are found
//! by search against the verifiers, then relabeled so the incidence structure
//! reads exactly as the reference table.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::analysis::{extract_structure, match_structure, Relabeling, Table};
use crate::error::{Error, Result};
use crate::exactgeom::linalg::{nullspace, rank};
use crate::exactgeom::{Line, ProjPoint};
use crate::incidence::{IncidenceTable, LineRef};
use crate::transforms::{extract_planarity, ColoredLineConfig};

/// All ways to split `0..12` into four unordered blocks of three, each block
/// sorted and blocks ordered by their first element.
pub fn partitions_3333() -> Vec<[[usize; 3]; 4]> {
    fn rec(left: &mut Vec<usize>, acc: &mut Vec<[usize; 3]>, out: &mut Vec<[[usize; 3]; 4]>) {
        if left.is_empty() {
            out.push([acc[0], acc[1], acc[2], acc[3]]);
            return;
        }
        let first = left.remove(0);
        for i in 0..left.len() {
            for j in i + 1..left.len() {
                let (a, b) = (left[i], left[j]);
                let mut rest: Vec<usize> = left.iter().copied().filter(|&x| x != a && x != b).collect();
                acc.push([first, a, b]);
                rec(&mut rest, acc, out);
                acc.pop();
            }
        }
        left.insert(0, first);
    }
    let mut out = Vec::new();
    rec(&mut (0..12).collect(), &mut Vec::new(), &mut out);
    out
}

/// Incidence points of an uncolored line list, as sets of line indices.
fn point_sets(lines: &[Line], d: usize) -> Result<Vec<BTreeSet<usize>>> {
    let cfg = ColoredLineConfig::new(d, vec![lines.to_vec()])?;
    Ok(cfg
        .incidence_points()
        .into_iter()
        .map(|p| p.lines.iter().map(|l| l.index).collect())
        .collect())
}

fn colored_table(points: &[BTreeSet<usize>], blocks: &[[usize; 3]; 4]) -> IncidenceTable {
    let mut where_ = [LineRef::new(0, 0); 12];
    for (c, b) in blocks.iter().enumerate() {
        for (i, &l) in b.iter().enumerate() {
            where_[l] = LineRef::new(c, i);
        }
    }
    let pts = points.iter().map(|s| s.iter().map(|&l| where_[l]).collect()).collect();
    IncidenceTable::new(vec![3; 4], pts).expect("twelve lines in four classes")
}

fn relabeled(cfg: &ColoredLineConfig, map: &Relabeling) -> Result<ColoredLineConfig> {
    let mut classes: Vec<Vec<Option<Line>>> = cfg.class_sizes().iter().map(|&s| vec![None; s]).collect();
    for r in cfg.line_refs() {
        let t = map.apply(r);
        classes[t.color][t.index] = Some(cfg.line(r).clone());
    }
    let classes = classes
        .into_iter()
        .map(|c| c.into_iter().map(|l| l.expect("bijection")).collect());
    ColoredLineConfig::new(cfg.d(), classes.collect())
}

/// Tries every coloring of the twelve lines and returns the first (in
/// partition order) that passes `accept`, relabeled onto `target`.
fn color_search(
    lines: &[Line],
    points: &[BTreeSet<usize>],
    target: Table,
    accept: impl Fn(&ColoredLineConfig) -> bool,
) -> Result<Option<ColoredLineConfig>> {
    for blocks in partitions_3333() {
        let table = colored_table(points, &blocks);
        if table.max_colorful_order().order != 3 || !table.k_consistency(3)?.consistent {
            continue;
        }
        let classes = blocks
            .iter()
            .map(|b| b.iter().map(|&l| lines[l].clone()).collect())
            .collect();
        let cfg = ColoredLineConfig::new(3, classes)?;
        if extract_planarity(&cfg).planar || !accept(&cfg) {
            continue;
        }
        if let Some(map) = match_structure(&extract_structure(&cfg), target)? {
            let out = relabeled(&cfg, &map)?;
            debug_assert_eq!(extract_structure(&out), target.structure());
            return Ok(Some(out));
        }
    }
    Ok(None)
}

/// The 16 lines of a cube: 12 edges of `[-1, 1]^3` (each through a vertex and
/// the point at infinity of its direction) followed by the 4 long diagonals.
pub fn cube_lines() -> Vec<Line> {
    let mut lines = Vec::with_capacity(16);
    for axis in 0..3 {
        let mut dir = vec![0i64; 4];
        dir[axis] = 1;
        for s in [-1, 1] {
            for t in [-1, 1] {
                let mut v = vec![-1i64; 3];
                let others: Vec<usize> = (0..3).filter(|&c| c != axis).collect();
                v[others[0]] = s;
                v[others[1]] = t;
                lines.push(Line::new(ProjPoint::affine(&v), ProjPoint::from_ints(&dir).unwrap()).unwrap());
            }
        }
    }
    for v in [[1i64, 1, 1], [1, 1, -1], [1, -1, 1], [-1, 1, 1]] {
        let w: Vec<i64> = v.iter().map(|x| -x).collect();
        lines.push(Line::new(ProjPoint::affine(&v), ProjPoint::affine(&w)).unwrap());
    }
    lines
}

/// Whether the lines indexed by `keep` form a (12_3) configuration: twelve
/// incidence points, three lines through each, three points on each line.
fn is_12_3(points: &[BTreeSet<usize>], keep: &[usize]) -> bool {
    let kept: Vec<usize> = points
        .iter()
        .map(|s| s.iter().filter(|l| keep.contains(l)).count())
        .filter(|&c| c >= 2)
        .collect();
    if kept.len() != 12 || kept.iter().any(|&c| c != 3) {
        return false;
    }
    keep.iter().all(|l| {
        points
            .iter()
            .filter(|s| s.contains(l) && s.iter().filter(|x| keep.contains(x)).count() >= 2)
            .count()
            == 3
    })
}

/// Reye-type configuration: twelve of the sixteen cube lines, colored so the
/// incidence structure is table (I).
pub fn gen_reye() -> Result<ColoredLineConfig> {
    let all = cube_lines();
    let all_points = point_sets(&all, 3)?;
    for removed in crate::incidence::k_subsets(16, 4).into_iter().rev() {
        // removed sets in reverse lexicographic order = kept 12-subsets in
        // lexicographic order
        let keep: Vec<usize> = (0..16).filter(|&i| removed & (1 << i) == 0).collect();
        if !is_12_3(&all_points, &keep) {
            continue;
        }
        let lines: Vec<Line> = keep.iter().map(|&i| all[i].clone()).collect();
        let points = point_sets(&lines, 3)?;
        if let Some(cfg) = color_search(&lines, &points, Table::I, |_| true)? {
            return Ok(cfg);
        }
    }
    Err(Error::SearchFailed(
        "no coloring of a cube (12_3) subconfiguration matches table (I)".into(),
    ))
}

/// Coefficient vectors of six planes: the first five and
/// `{P1, P2, P3, P6}` are in general position, and `P6 = P4 + P5` so that
/// `P4, P5, P6` share a line.
pub fn desargues_planes() -> [[i64; 4]; 6] {
    [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [1, 1, 1, -1],
        [1, 2, 4, -3],
        [2, 3, 5, -4],
    ]
}

fn big(row: &[i64]) -> Vec<BigInt> {
    row.iter().map(|&x| BigInt::from(x)).collect()
}

fn check_planes(planes: &[[i64; 4]; 6]) -> Result<()> {
    let rows: Vec<Vec<BigInt>> = planes.iter().map(|p| big(p)).collect();
    let pick = |ix: &[usize]| -> Vec<Vec<BigInt>> { ix.iter().map(|&i| rows[i].clone()).collect() };
    for mask in crate::incidence::k_subsets(5, 4) {
        let ix: Vec<usize> = (0..5).filter(|i| mask & (1 << i) != 0).collect();
        if rank(&pick(&ix)) != 4 {
            return Err(Error::InvalidParameter(format!(
                "planes {ix:?} not in general position"
            )));
        }
    }
    if rank(&pick(&[0, 1, 2, 5])) != 4 {
        return Err(Error::InvalidParameter(
            "planes 1, 2, 3, 6 not in general position".into(),
        ));
    }
    if rank(&pick(&[3, 4, 5])) != 2 {
        return Err(Error::InvalidParameter("planes 4, 5, 6 do not share a line".into()));
    }
    Ok(())
}

/// Lines lying in exactly two of the six planes.
pub fn desargues_lines() -> Result<Vec<Line>> {
    let planes = desargues_planes();
    check_planes(&planes)?;
    let mut lines = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            let basis = nullspace(&[big(&planes[i]), big(&planes[j])], 4);
            let pts: Vec<ProjPoint> = basis.into_iter().map(ProjPoint::new).collect::<Result<_>>()?;
            let on = |pl: &[i64; 4]| {
                pts.iter()
                    .all(|p| p.coords().iter().zip(pl).map(|(x, &a)| x * a).sum::<BigInt>() == BigInt::from(0))
            };
            let in_planes = planes.iter().filter(|pl| on(pl)).count();
            if in_planes == 2 {
                lines.push(Line::new(pts[0].clone(), pts[1].clone())?);
            }
        }
    }
    Ok(lines)
}

/// Desargues-type configuration colored so that exactly one class is
/// concurrent and the incidence structure is table (II).
pub fn gen_desargues() -> Result<ColoredLineConfig> {
    let lines = desargues_lines()?;
    if lines.len() != 12 {
        return Err(Error::SearchFailed(format!("expected 12 lines, got {}", lines.len())));
    }
    let points = point_sets(&lines, 3)?;
    let one_concurrent = |cfg: &ColoredLineConfig| cfg.classes().iter().filter(|c| c.center.is_some()).count() == 1;
    color_search(&lines, &points, Table::II, one_concurrent)?
        .ok_or_else(|| Error::SearchFailed("no coloring of the plane lines matches table (II)".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_count() {
        let p = partitions_3333();
        assert_eq!(p.len(), 15400);
        assert_eq!(p[0], [[0, 1, 2], [3, 4, 5], [6, 7, 8], [9, 10, 11]]);
    }

    #[test]
    fn cube_has_reye_incidences() {
        let pts = point_sets(&cube_lines(), 3).unwrap();
        // 8 vertices, the center and 3 directions, four lines each
        assert_eq!(pts.len(), 12);
        assert!(pts.iter().all(|s| s.len() == 4));
    }

    #[test]
    fn twelve_plane_lines() {
        assert_eq!(desargues_lines().unwrap().len(), 12);
    }

    #[test]
    fn degenerate_planes_rejected() {
        let mut p = desargues_planes();
        p[4] = [1, 1, 0, 0];
        assert!(check_planes(&p).is_err());
    }
}
