//! Exact projective linear algebra over the rationals.
//!
//! Points live in projective d-space and are stored as primitive integer
//! vectors of length d+1 with a positive leading nonzero entry, so two
//! points are equal exactly when their coordinate vectors are proportional.
//! Every predicate is decided by exact rank computations.

pub mod linalg;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type RatScalar = BigRational;

pub fn rat(num: i64, den: i64) -> RatScalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> RatScalar {
    BigRational::from_integer(BigInt::from(v))
}

/// Formats a rational as `num/den`, or just `num` for integers.
pub fn format_rat(r: &RatScalar) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `num/den` or `num`. Accepts the unicode minus sign.
pub fn parse_rat(s: &str) -> Result<RatScalar> {
    let cleaned = s.trim().replace('\u{2212}', "-");
    let bad = || Error::Parse(format!("bad rational literal {s:?}"));
    let (n, d) = match cleaned.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (cleaned.as_str(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// A point of projective d-space in canonical homogeneous coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    pub fn new(mut coords: Vec<BigInt>) -> Result<Self> {
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::ZeroPoint);
        }
        linalg::make_primitive(&mut coords);
        Ok(ProjPoint { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Homogeneous point from rational coordinates; denominators are cleared.
    pub fn from_rationals(coords: &[RatScalar]) -> Result<Self> {
        let l = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        Self::new(coords.iter().map(|c| c.numer() * (&l / c.denom())).collect())
    }

    /// The finite point with the given affine coordinates.
    pub fn affine(coords: &[i64]) -> Self {
        let mut v: Vec<BigInt> = coords.iter().map(|&c| BigInt::from(c)).collect();
        v.push(BigInt::one());
        Self::new(v).expect("last coordinate is one")
    }

    pub fn affine_rat(coords: &[RatScalar]) -> Self {
        let mut v = coords.to_vec();
        v.push(RatScalar::one());
        Self::from_rationals(&v).expect("last coordinate is one")
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Ambient dimension d (the vector has d+1 entries).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn is_at_infinity(&self) -> bool {
        self.coords.last().is_some_and(Zero::is_zero)
    }

    pub fn to_affine(&self) -> Option<Vec<RatScalar>> {
        let (w, xs) = self.coords.split_last()?;
        if w.is_zero() {
            return None;
        }
        Some(xs.iter().map(|x| BigRational::new(x.clone(), w.clone())).collect())
    }

    /// Floating-point homogeneous coordinates scaled so the largest entry has
    /// absolute value 1. For drawing only.
    pub fn approx(&self) -> Vec<f64> {
        let max = self.coords.iter().map(|c| c.bits()).max().unwrap_or(0);
        let shift = max.saturating_sub(60);
        let v: Vec<f64> = self
            .coords
            .iter()
            .map(|c| (c >> shift).to_f64().unwrap_or(0.0))
            .collect();
        let m = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        v.iter().map(|x| x / m).collect()
    }

    /// Applies a linear map given by its rows; `None` if the image is zero.
    pub fn map(&self, matrix: &[Vec<BigInt>]) -> Option<ProjPoint> {
        let img: Vec<BigInt> = matrix
            .iter()
            .map(|row| row.iter().zip(&self.coords).map(|(a, b)| a * b).sum())
            .collect();
        ProjPoint::new(img).ok()
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if self.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: self.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn rows_of<'a>(points: impl IntoIterator<Item = &'a ProjPoint>) -> Vec<Vec<BigInt>> {
    points.into_iter().map(|p| p.coords.clone()).collect()
}

/// A projective flat spanned by linearly independent points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjFlat {
    basis: Vec<ProjPoint>,
}

impl ProjFlat {
    pub fn basis(&self) -> &[ProjPoint] {
        &self.basis
    }

    /// Projective dimension: 0 for a point, 1 for a line, ...
    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis[0].dim()
    }

    pub fn contains(&self, p: &ProjPoint) -> Result<bool> {
        incident(p, self)
    }
}

/// Smallest flat containing all `points`.
pub fn span(points: &[ProjPoint]) -> Result<ProjFlat> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    for p in points {
        p.check_dim(first.dim())?;
    }
    let e = linalg::eliminate(&rows_of(points));
    Ok(ProjFlat {
        basis: e.independent.iter().map(|&i| points[i].clone()).collect(),
    })
}

/// Whether `p` lies in the flat `f`.
pub fn incident(p: &ProjPoint, f: &ProjFlat) -> Result<bool> {
    p.check_dim(f.ambient_dim())?;
    let mut rows = rows_of(&f.basis);
    rows.push(p.coords.clone());
    Ok(linalg::rank(&rows) == f.basis.len())
}

/// A projective line given by two distinct points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line {
    p: ProjPoint,
    q: ProjPoint,
}

impl Line {
    pub fn new(p: ProjPoint, q: ProjPoint) -> Result<Self> {
        p.check_dim(q.dim())?;
        if p == q {
            return Err(Error::DegenerateLine);
        }
        Ok(Line { p, q })
    }

    pub fn p(&self) -> &ProjPoint {
        &self.p
    }

    pub fn q(&self) -> &ProjPoint {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn as_flat(&self) -> ProjFlat {
        ProjFlat {
            basis: vec![self.p.clone(), self.q.clone()],
        }
    }

    pub fn contains(&self, x: &ProjPoint) -> Result<bool> {
        x.check_dim(self.dim())?;
        Ok(linalg::rank(&[self.p.coords.clone(), self.q.coords.clone(), x.coords.clone()]) == 2)
    }

    /// A key identifying the line as a set: the reduced echelon basis of its
    /// 2-dimensional coordinate subspace, rows made primitive.
    pub fn canonical_key(&self) -> Vec<Vec<BigInt>> {
        let mut a = self.p.coords.clone();
        let mut b = self.q.coords.clone();
        let ca = a.iter().position(|x| !x.is_zero()).expect("nonzero point");
        let cb0 = b.iter().position(|x| !x.is_zero()).expect("nonzero point");
        if cb0 < ca {
            std::mem::swap(&mut a, &mut b);
        }
        let ca = a.iter().position(|x| !x.is_zero()).unwrap();
        // eliminate column ca from b
        let (s, t) = (a[ca].clone(), b[ca].clone());
        for (y, x) in b.iter_mut().zip(&a) {
            *y = &s * &*y - &t * x;
        }
        let cb = b.iter().position(|x| !x.is_zero()).expect("distinct points");
        // eliminate column cb from a
        let (s, t) = (b[cb].clone(), a[cb].clone());
        for (x, y) in a.iter_mut().zip(&b) {
            *x = &s * &*x - &t * y;
        }
        linalg::make_primitive(&mut a);
        linalg::make_primitive(&mut b);
        vec![a, b]
    }

    /// Image under a linear map; `None` if the line collapses to a point or
    /// meets the kernel.
    pub fn map(&self, matrix: &[Vec<BigInt>]) -> Option<Line> {
        let p = self.p.map(matrix)?;
        let q = self.q.map(matrix)?;
        Line::new(p, q).ok()
    }
}

/// Whether two lines describe the same point set.
pub fn same_line(a: &Line, b: &Line) -> Result<bool> {
    a.p.check_dim(b.dim())?;
    Ok(linalg::rank(&rows_of([&a.p, &a.q, &b.p, &b.q])) == 2)
}

/// The common point of two distinct lines, or `None` when they are skew.
pub fn meet(a: &Line, b: &Line) -> Result<Option<ProjPoint>> {
    a.p.check_dim(b.dim())?;
    let e = linalg::eliminate(&rows_of([&a.p, &a.q, &b.p, &b.q]));
    match e.rank {
        2 => Err(Error::IdenticalLines),
        4 => Ok(None),
        _ => {
            let c = &e.left_kernel[0];
            let coords =
                a.p.coords
                    .iter()
                    .zip(&a.q.coords)
                    .map(|(x, y)| &c[0] * x + &c[1] * y)
                    .collect();
            Ok(Some(ProjPoint::new(coords)?))
        }
    }
}

/// Whether two distinct lines share a point.
pub fn meets(a: &Line, b: &Line) -> Result<bool> {
    a.p.check_dim(b.dim())?;
    Ok(linalg::rank(&rows_of([&a.p, &a.q, &b.p, &b.q])) < 4)
}

/// Dimension of the smallest flat containing all `lines`, each of which must
/// pass through `at`.
pub fn rank_of_directions(lines: &[Line], at: &ProjPoint) -> Result<usize> {
    let mut rows = vec![at.coords.clone()];
    for l in lines {
        if !l.contains(at)? {
            return Err(Error::PointNotOnLine);
        }
        rows.push(l.p.coords.clone());
        rows.push(l.q.coords.clone());
    }
    Ok(linalg::rank(&rows) - 1)
}

/// Cross product of two homogeneous 3-vectors.
pub fn cross3(u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    vec![
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

/// Signed sum, used when mixing points: `a*p + b*q`.
pub fn combine(a: &BigInt, p: &ProjPoint, b: &BigInt, q: &ProjPoint) -> Result<ProjPoint> {
    ProjPoint::new(p.coords.iter().zip(&q.coords).map(|(x, y)| a * x + b * y).collect())
}


/// Serde adapter storing a rational as its `num/den` string.
pub mod rat_string {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::{format_rat, parse_rat, RatScalar};

    pub fn serialize<S: Serializer>(r: &RatScalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RatScalar, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(D::Error::custom)
    }
}
