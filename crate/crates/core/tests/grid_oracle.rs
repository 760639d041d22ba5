mod common;

use ilab_core::constructions::{gen_algebraic, gen_tricolor, sample_probabilistic, AlgebraicParams, ProbParams};
use ilab_core::exactgeom::{meet, ProjPoint};
use ilab_core::gridmodel::grid_meet;
use ilab_core::{ColoredGridConfig, GridLine};
use proptest::prelude::*;

/// Two distinct lines of `[1, n]^(k+1)`; the second copies the first base on
/// a random subset of slots so that meeting pairs are common.
fn line_pair(k: usize, n: u32) -> impl Strategy<Value = (GridLine, GridLine)> {
    let dim = k + 1;
    (
        0..dim,
        0..dim,
        prop::collection::vec(1..=n, dim),
        prop::collection::vec(1..=n, dim),
        prop::collection::vec(any::<bool>(), dim),
    )
        .prop_map(move |(ia, ib, a, b, keep)| {
            let b: Vec<u32> = (0..dim).map(|c| if keep[c] { a[c] } else { b[c] }).collect();
            (GridLine::new(ia, a).unwrap(), GridLine::new(ib, b).unwrap())
        })
        .prop_filter("distinct lines", |(a, b)| a != b)
}

fn agree(a: &GridLine, b: &GridLine) -> Result<(), TestCaseError> {
    let combinatorial = grid_meet(a, b).unwrap();
    let exact = meet(&a.to_exact(), &b.to_exact()).unwrap();
    match (&combinatorial, &exact) {
        (None, None) => {}
        (Some(p), Some(q)) => {
            let as_proj = ProjPoint::affine(&p.iter().map(|&x| i64::from(x)).collect::<Vec<_>>());
            prop_assert_eq!(&as_proj, q);
        }
        // parallel grid lines meet at infinity in the projective closure
        (None, Some(q)) => {
            prop_assert_eq!(a.axis, b.axis);
            prop_assert!(q.is_at_infinity());
        }
        (Some(_), None) => prop_assert!(false, "grid meet without exact meet"),
    }
    prop_assert_eq!(combinatorial.is_some(), grid_meet(b, a).unwrap().is_some());
    Ok(())
}

macro_rules! meet_suite {
    ($name:ident, $k:expr, $n:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]
            #[test]
            fn $name((a, b) in line_pair($k, $n)) {
                agree(&a, &b)?;
            }
        }
    };
}

meet_suite!(meets_agree_k2_n3, 2, 3);
meet_suite!(meets_agree_k3_n2, 3, 2);
meet_suite!(meets_agree_k3_n4, 3, 4);
meet_suite!(meets_agree_k4_n3, 4, 3);

fn hashing_matches_enumeration(cfg: &ColoredGridConfig) {
    let brute = common::enumerate_grid_points(cfg);
    let hashed: std::collections::BTreeMap<Vec<u32>, Vec<_>> =
        cfg.all_incidences().into_iter().map(|r| (r.point, r.lines)).collect();
    assert_eq!(brute, hashed);
}

#[test]
fn algebraic_incidences_match_point_enumeration() {
    for (k, p) in [(3, 2), (3, 3), (4, 2)] {
        let cfg = gen_algebraic(&AlgebraicParams::with_defaults(k, p).unwrap()).unwrap();
        let brute = common::enumerate_grid_points(&cfg);
        assert!(brute.values().all(|ls| common::colors(ls).len() <= k));
        hashing_matches_enumeration(&cfg);
    }
}

#[test]
fn random_and_tricolor_incidences_match_point_enumeration() {
    for seed in 0..3 {
        let s = sample_probabilistic(&ProbParams::new(3, 6, seed).unwrap());
        hashing_matches_enumeration(&s.before_deletion());
        hashing_matches_enumeration(&s.after_deletion());
    }
    hashing_matches_enumeration(&gen_tricolor(&[2, 1, 3, -1, 2, -1, -1, -3, -2]).unwrap());
}
