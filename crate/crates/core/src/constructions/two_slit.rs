use std::collections::HashSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactgeom::linalg::{determinant, nullspace};
use crate::exactgeom::{combine, meets, Line, ProjPoint};
use crate::rng;

const COEFF_RANGE: u64 = 1000;

/// Four lines of projective 3-space; family 1 consists of lines meeting both
/// `first` slits, family 2 of lines meeting both `second` slits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slits {
    pub first: [Line; 2],
    pub second: [Line; 2],
}

fn line_through(a: &[i64], b: &[i64]) -> Line {
    Line::new(ProjPoint::affine(a), ProjPoint::affine(b)).expect("distinct points")
}

/// Plücker coordinates `(p01, p02, p03, p12, p13, p23)` of a line.
pub fn plucker(l: &Line) -> [BigInt; 6] {
    let (p, q) = (l.p().coords(), l.q().coords());
    let m = |i: usize, j: usize| &p[i] * &q[j] - &p[j] * &q[i];
    [m(0, 1), m(0, 2), m(0, 3), m(1, 2), m(1, 3), m(2, 3)]
}

/// Whether two lines of 3-space are skew, via the determinant of their four
/// defining points.
pub fn skew(a: &Line, b: &Line) -> bool {
    let rows: Vec<Vec<BigInt>> = [a.p(), a.q(), b.p(), b.q()]
        .iter()
        .map(|x| x.coords().to_vec())
        .collect();
    determinant(&rows) != BigInt::from(0)
}

/// The two rulings of the quadric `x0 x1 = x2 x3` through parameter `(s:t)`.
/// `first_family = true` gives `s x0 = t x2, t x1 = s x3`; otherwise
/// `s x0 = t x3, s x2 = t x1`. Every line of one family meets every line of
/// the other, and lines of one family are pairwise skew.
pub fn quadric_ruling(first_family: bool, s: i64, t: i64) -> Result<Line> {
    if s == 0 && t == 0 {
        return Err(Error::InvalidParameter("ruling parameter (0:0)".into()));
    }
    let rows: Vec<Vec<BigInt>> = if first_family {
        vec![vec![s, 0, -t, 0], vec![0, t, 0, -s]]
    } else {
        vec![vec![s, 0, 0, -t], vec![0, -t, s, 0]]
    }
    .into_iter()
    .map(|r| r.into_iter().map(BigInt::from).collect())
    .collect();
    let basis = nullspace(&rows, 4);
    Line::new(ProjPoint::new(basis[0].clone())?, ProjPoint::new(basis[1].clone())?)
}

/// `count` rulings `(1 : t)`, `t = 1..=count`, of one family of the quadric
/// `x0 x1 = x2 x3`. Rulings of the second family meet both slits of
/// [`Slits::quadric`]'s first pair and vice versa, so appending them to the
/// opposite sampled family plants a complete bipartite subgraph.
pub fn quadric_rulings(first_family: bool, count: usize) -> Vec<Line> {
    (1..=count as i64)
        .map(|t| quadric_ruling(first_family, 1, t).expect("nonzero parameter"))
        .collect()
}

impl Slits {
    /// Four fixed lines with no special position: each pair of slits is
    /// skew and the four lie on no common quadric.
    pub fn generic() -> Self {
        Slits {
            first: [
                line_through(&[0, 0, 0], &[1, 2, 3]),
                line_through(&[1, 0, 0], &[1, 1, 5]),
            ],
            second: [
                line_through(&[0, 1, 0], &[2, 0, 1]),
                line_through(&[0, 0, 2], &[3, -1, 7]),
            ],
        }
    }

    /// Slits on the quadric `x0 x1 = x2 x3`: two rulings of the first family
    /// for family 1 and two of the second for family 2.
    pub fn quadric() -> Self {
        Slits {
            first: [quadric_ruling(true, 1, 0).unwrap(), quadric_ruling(true, 0, 1).unwrap()],
            second: [
                quadric_ruling(false, 1, 0).unwrap(),
                quadric_ruling(false, 0, 1).unwrap(),
            ],
        }
    }

    pub fn pair(&self, which: u8) -> Result<&[Line; 2]> {
        match which {
            1 => Ok(&self.first),
            2 => Ok(&self.second),
            _ => Err(Error::InvalidParameter(format!("family must be 1 or 2, got {which}"))),
        }
    }
}

/// `count` distinct lines meeting both slits of family `which`. Each line
/// joins a random rational point of one slit to one of the other.
pub fn gen_two_slit(which: u8, slits: &Slits, count: usize, seed: u64) -> Result<Vec<Line>> {
    let [a, b] = slits.pair(which)?;
    if a.dim() != 3 || b.dim() != 3 {
        return Err(Error::InvalidParameter("slits must be lines of 3-space".into()));
    }
    if !skew(a, b) {
        return Err(Error::InvalidParameter(format!("slits of family {which} are not skew")));
    }
    let mut s = rng::substream(seed, rng::TWO_SLIT_STREAM + u64::from(which));
    let mut draw_point = |l: &Line| loop {
        let x = BigInt::from(rng::symmetric(&mut s, COEFF_RANGE));
        let y = BigInt::from(rng::symmetric(&mut s, COEFF_RANGE));
        if let Ok(p) = combine(&x, l.p(), &y, l.q()) {
            return p;
        }
    };
    let mut out = Vec::with_capacity(count);
    let mut seen = HashSet::new();
    while out.len() < count {
        let p = draw_point(a);
        let q = draw_point(b);
        let l = Line::new(p, q).expect("skew slits share no point");
        if seen.insert(l.canonical_key()) {
            out.push(l);
        }
    }
    Ok(out)
}

/// The line through `x` meeting both skew lines `a` and `b`: it joins `x` to
/// the point where `b` crosses the plane spanned by `x` and `a`.
pub fn transversal(x: &ProjPoint, a: &Line, b: &Line) -> Result<Line> {
    let rows: Vec<Vec<BigInt>> = [x, a.p(), a.q()].iter().map(|p| p.coords().to_vec()).collect();
    let normal = nullspace(&rows, 4);
    if normal.len() != 1 {
        return Err(Error::InvalidParameter("point lies on the first line".into()));
    }
    let dot = |p: &ProjPoint| -> BigInt { p.coords().iter().zip(&normal[0]).map(|(u, v)| u * v).sum() };
    let (sp, sq) = (dot(b.p()), dot(b.q()));
    if sp == BigInt::from(0) && sq == BigInt::from(0) {
        return Err(Error::InvalidParameter(
            "second line lies in the plane of the first and the point".into(),
        ));
    }
    let y = combine(&sq, b.p(), &-sp, b.q())?;
    Line::new(x.clone(), y).map_err(|_| Error::InvalidParameter("point lies on the second line".into()))
}

/// For each line of `targets`, a line meeting it and both slits of family
/// `which`, through a random point of the target.
pub fn linked_family(which: u8, slits: &Slits, targets: &[Line], seed: u64) -> Result<Vec<Line>> {
    let [a, b] = slits.pair(which)?;
    let mut s = rng::substream(seed, rng::TWO_SLIT_STREAM + 8 + u64::from(which));
    let mut out = Vec::with_capacity(targets.len());
    for t in targets {
        let line = loop {
            let x = BigInt::from(rng::symmetric(&mut s, COEFF_RANGE));
            let y = BigInt::from(rng::symmetric(&mut s, COEFF_RANGE));
            if let Ok(l) = combine(&x, t.p(), &y, t.q()).and_then(|p| transversal(&p, a, b)) {
                break l;
            }
        };
        out.push(line);
    }
    Ok(out)
}

/// Checks that every line meets both slits of its family.
pub fn all_secant(lines: &[Line], slits: &[Line; 2]) -> bool {
    lines.iter().all(|l| slits.iter().all(|s| meets(l, s).unwrap_or(false)))
}
