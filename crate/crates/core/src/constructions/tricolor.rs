use crate::error::{Error, Result};
use crate::gridmodel::{ColoredGridConfig, GridClass, GridLine};

/// Closed axis-parallel polygon in R^3 whose edges, colored by direction, are
/// 2-consistent without a 3-colored incidence.
///
/// Step `j` moves the current vertex by `steps[j]` along axis `j mod 3`; edge
/// `j` is the line through vertices `j` and `j + 1` and has color `j mod 3`.
/// Vertices are translated so every coordinate starts at 1, and the result is
/// returned as a grid configuration with `k = 2`.
pub fn gen_tricolor(steps: &[i64]) -> Result<ColoredGridConfig> {
    if steps.is_empty() || !steps.len().is_multiple_of(3) {
        return Err(Error::InvalidParameter(format!("need 3n steps, got {}", steps.len())));
    }
    if steps.contains(&0) {
        return Err(Error::InvalidParameter("step lengths must be nonzero".into()));
    }
    let mut vertices = vec![[0i64; 3]];
    for (j, &s) in steps.iter().enumerate() {
        let mut next = *vertices.last().unwrap();
        next[j % 3] += s;
        vertices.push(next);
    }
    if vertices.last() != vertices.first() {
        return Err(Error::InvalidParameter(format!(
            "polygon does not close: ends at {:?}",
            vertices.last().unwrap()
        )));
    }
    vertices.pop();

    let mut lo = [i64::MAX; 3];
    let mut hi = [i64::MIN; 3];
    for v in &vertices {
        for c in 0..3 {
            lo[c] = lo[c].min(v[c]);
            hi[c] = hi[c].max(v[c]);
        }
    }
    let side = (0..3).map(|c| hi[c] - lo[c] + 1).max().unwrap();
    let side = u32::try_from(side).map_err(|_| Error::InvalidParameter("polygon too large".into()))?;

    let mut classes: Vec<GridClass> = (0..3).map(|axis| GridClass { axis, lines: vec![] }).collect();
    for (j, v) in vertices.iter().enumerate() {
        let axis = j % 3;
        let base: Vec<u32> = (0..3).map(|c| (v[c] - lo[c] + 1) as u32).collect();
        classes[axis].lines.push(GridLine::new(axis, base)?);
    }
    let cfg = ColoredGridConfig::new(2, side, classes)?;

    let verdict = cfg.is_k_consistent(2)?;
    if !verdict.consistent {
        return Err(Error::SearchFailed(format!(
            "polygon edges are not 2-consistent: {} failures",
            verdict.failures.len()
        )));
    }
    let (order, _) = cfg.max_colorful_order();
    if order != 2 {
        return Err(Error::SearchFailed(format!(
            "polygon edges have a {order}-colored incidence"
        )));
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagon() {
        let cfg = gen_tricolor(&[1, 1, 1, -1, -1, -1]).unwrap();
        assert_eq!(cfg.class_sizes(), vec![2, 2, 2]);
        assert_eq!(cfg.n(), 2);
        assert_eq!(cfg.all_incidences().len(), 6);
    }

    #[test]
    fn longer_polygon() {
        let cfg = gen_tricolor(&[2, 1, 3, -1, 2, -1, -1, -3, -2]).unwrap();
        assert_eq!(cfg.class_sizes(), vec![3, 3, 3]);
    }

    #[test]
    fn rejects_open_and_degenerate() {
        assert!(gen_tricolor(&[1, 1, 1, -1, -1, -2]).is_err());
        assert!(gen_tricolor(&[1, 0, 1, -1, 0, -1]).is_err());
        assert!(gen_tricolor(&[1, 1]).is_err());
        // retraces the same edges, so lines coincide
        assert!(gen_tricolor(&[1, 1, 1, -1, -1, -1, 1, 1, 1, -1, -1, -1]).is_err());
    }
}
