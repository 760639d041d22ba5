use rayon::prelude::*;

use crate::exactgeom::{meets, Line};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteReport {
    pub edges: usize,
    /// `adjacency[i]` lists the lines of the second family meeting line `i`
    /// of the first, in increasing order.
    pub adjacency: Vec<Vec<usize>>,
    /// Three lines of each family forming a complete bipartite subgraph.
    pub k33: Option<([usize; 3], [usize; 3])>,
}

/// Exact intersection graph between two line families and an exhaustive
/// search for a K_{3,3}. Lines present in both families count as meeting.
pub fn bipartite_edges(a: &[Line], b: &[Line]) -> BipartiteReport {
    let adjacency: Vec<Vec<usize>> = a
        .par_iter()
        .map(|la| {
            b.iter()
                .enumerate()
                .filter(|(_, lb)| meets(la, lb).expect("lines of one dimension"))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let edges = adjacency.iter().map(Vec::len).sum();
    let k33 = find_k33(&adjacency, b.len());
    BipartiteReport { edges, adjacency, k33 }
}

/// First triple of left vertices (in lexicographic order) with three common
/// neighbours, together with the three smallest of them.
pub fn find_k33(adjacency: &[Vec<usize>], right: usize) -> Option<([usize; 3], [usize; 3])> {
    let words = right.div_ceil(64);
    let sets: Vec<Vec<u64>> = adjacency
        .iter()
        .map(|nb| {
            let mut w = vec![0u64; words];
            for &j in nb {
                w[j / 64] |= 1 << (j % 64);
            }
            w
        })
        .collect();
    let n = sets.len();
    for i in 0..n {
        if adjacency[i].len() < 3 {
            continue;
        }
        for j in i + 1..n {
            let ij: Vec<u64> = sets[i].iter().zip(&sets[j]).map(|(x, y)| x & y).collect();
            if ij.iter().map(|w| w.count_ones()).sum::<u32>() < 3 {
                continue;
            }
            for l in j + 1..n {
                let common: Vec<usize> = ij
                    .iter()
                    .zip(&sets[l])
                    .enumerate()
                    .flat_map(|(wi, (x, y))| {
                        let w = x & y;
                        (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| wi * 64 + b)
                    })
                    .take(3)
                    .collect();
                if let [p, q, r] = common[..] {
                    return Some(([i, j, l], [p, q, r]));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_families() {
        let r = bipartite_edges(&[], &[]);
        assert_eq!(r.edges, 0);
        assert!(r.k33.is_none());
    }

    #[test]
    fn k33_found_in_complete_graph() {
        let adj = vec![vec![0, 1, 2], vec![0, 1, 2], vec![1, 2], vec![0, 1, 2]];
        assert_eq!(find_k33(&adj, 3), Some(([0, 1, 3], [0, 1, 2])));
        let adj = vec![vec![0, 1], vec![0, 1, 2], vec![1, 2, 3]];
        assert_eq!(find_k33(&adj, 4), None);
    }
}
