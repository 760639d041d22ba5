//! Independent reference computations shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use ilab_core::{ColoredGridConfig, GridLine, LineRef};

/// Visits every point of `[1, n]^dim` and records the lines through it by
/// direct membership lookup, without any bucketing by projections.
pub fn enumerate_grid_points(cfg: &ColoredGridConfig) -> BTreeMap<Vec<u32>, Vec<LineRef>> {
    let dim = cfg.k() + 1;
    let n = cfg.n();
    let lookup: HashMap<(usize, Vec<u32>), LineRef> = cfg
        .line_refs()
        .map(|r| {
            let l: &GridLine = cfg.line(r);
            ((l.axis, l.base.clone()), r)
        })
        .collect();
    let mut out = BTreeMap::new();
    let mut p = vec![1u32; dim];
    loop {
        let mut here = Vec::new();
        for axis in 0..dim {
            let mut base = p.clone();
            base[axis] = 0;
            if let Some(&r) = lookup.get(&(axis, base)) {
                here.push(r);
            }
        }
        if here.len() >= 2 {
            here.sort();
            out.insert(p.clone(), here);
        }
        let mut i = 0;
        while i < dim {
            if p[i] < n {
                p[i] += 1;
                break;
            }
            p[i] = 1;
            i += 1;
        }
        if i == dim {
            return out;
        }
    }
}

pub fn colors(lines: &[LineRef]) -> BTreeSet<usize> {
    lines.iter().map(|l| l.color).collect()
}

pub fn distinct<T: std::hash::Hash + Eq>(v: &[T]) -> bool {
    let mut seen = HashSet::new();
    v.iter().all(|x| seen.insert(x))
}

/// Compares `actual` with the file under `tests/golden/`, or rewrites the
/// file when `ILAB_UPDATE_GOLDEN` is set.
pub fn golden(name: &str, actual: &str) -> bool {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("ILAB_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return true;
    }
    let expected =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("missing golden file {}: {e}", path.display()));
    expected == actual
}
