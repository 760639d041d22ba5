use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridmodel::ColoredGridConfig;
use crate::incidence::{IncidenceTable, LineRef};
use crate::transforms::{ColoredLineConfig, DualPointConfig};

/// The multicolored concurrences of a configuration. Each monomial is the
/// sorted set of lines through one point that carries at least two colors;
/// points where only lines of one color meet (such as the center of a
/// concurrent class) are left out.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IncidenceStructure {
    pub class_sizes: Vec<usize>,
    pub monomials: BTreeSet<Vec<LineRef>>,
}

/// Anything the incidence verifiers can run on.
pub trait Incidences {
    fn table(&self) -> IncidenceTable;
}

impl Incidences for IncidenceTable {
    fn table(&self) -> IncidenceTable {
        self.clone()
    }
}

impl Incidences for ColoredGridConfig {
    fn table(&self) -> IncidenceTable {
        self.incidence_table()
    }
}

impl Incidences for ColoredLineConfig {
    fn table(&self) -> IncidenceTable {
        self.incidence_table()
    }
}

impl Incidences for DualPointConfig {
    fn table(&self) -> IncidenceTable {
        self.incidence_table()
    }
}

pub fn extract_structure<C: Incidences + ?Sized>(cfg: &C) -> IncidenceStructure {
    let t = cfg.table();
    IncidenceStructure {
        class_sizes: t.class_sizes().to_vec(),
        monomials: t.multicolor_points(),
    }
}

const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

fn var_name(l: LineRef) -> String {
    match LETTERS.get(l.color) {
        Some(&c) => format!("{}{}", c as char, l.index + 1),
        None => format!("[{}]{}", l.color + 1, l.index + 1),
    }
}

/// Parses one monomial such as `a1b2c3`.
pub fn parse_monomial(s: &str) -> Result<Vec<LineRef>> {
    let bytes = s.trim().as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let color = LETTERS
            .iter()
            .position(|&c| c == bytes[i])
            .ok_or_else(|| Error::Parse(format!("bad variable in {s:?}")))?;
        let start = i + 1;
        let mut end = start;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        let idx: usize = std::str::from_utf8(&bytes[start..end])
            .ok()
            .and_then(|d| d.parse().ok())
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::Parse(format!("bad index in {s:?}")))?;
        out.push(LineRef::new(color, idx - 1));
        i = end;
    }
    out.sort();
    Ok(out)
}

impl IncidenceStructure {
    /// Structure with the given class sizes from whitespace-separated
    /// monomials.
    pub fn parse(class_sizes: Vec<usize>, text: &str) -> Result<Self> {
        let monomials = text.split_whitespace().map(parse_monomial).collect::<Result<_>>()?;
        Ok(IncidenceStructure { class_sizes, monomials })
    }

    pub fn relabel(&self, map: &Relabeling) -> IncidenceStructure {
        let mut sizes = vec![0; self.class_sizes.len()];
        for (c, &s) in self.class_sizes.iter().enumerate() {
            sizes[map.colors[c]] = s;
        }
        let monomials = self
            .monomials
            .iter()
            .map(|m| {
                let mut v: Vec<LineRef> = m.iter().map(|&l| map.apply(l)).collect();
                v.sort();
                v
            })
            .collect();
        IncidenceStructure {
            class_sizes: sizes,
            monomials,
        }
    }
}

impl fmt::Display for IncidenceStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self
            .monomials
            .iter()
            .map(|m| m.iter().map(|&l| var_name(l)).collect())
            .collect();
        write!(f, "{}", words.join(" "))
    }
}

pub const TABLE_I: &str = "a1b2c3 a1b3d2 a1c2d3 b1c3d2 \
                           a2b3c1 a2b1d3 a2c3d1 b2c1d3 \
                           a3b1c2 a3b2d1 a3c1d2 b3c2d1";

pub const TABLE_II: &str = "a1b2c3 a1b3d2 a1c2d3 b1c1d1 \
                            a2b3c1 a2b1d3 a2c3d1 b2c2d2 \
                            a3b1c2 a3b2d1 a3c1d2 b3c3d3";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Table {
    I,
    II,
}

impl Table {
    pub fn structure(self) -> IncidenceStructure {
        let text = match self {
            Table::I => TABLE_I,
            Table::II => TABLE_II,
        };
        IncidenceStructure::parse(vec![3; 4], text).expect("well-formed table")
    }
}

impl std::str::FromStr for Table {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(Table::I),
            "II" | "2" => Ok(Table::II),
            _ => Err(Error::Parse(format!("unknown table {s:?}, expected I or II"))),
        }
    }
}

/// A color permutation together with a line permutation inside each class.
/// Source line `(c, i)` goes to `(colors[c], lines[c][i])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relabeling {
    pub colors: Vec<usize>,
    pub lines: Vec<Vec<usize>>,
}

impl Relabeling {
    pub fn apply(&self, l: LineRef) -> LineRef {
        LineRef::new(self.colors[l.color], self.lines[l.color][l.index])
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Searches all 4! (3!)^4 relabelings for one mapping `s` onto `target`.
/// The returned map is checked by applying it.
pub fn match_structure(s: &IncidenceStructure, target: Table) -> Result<Option<Relabeling>> {
    let shape_ok = s.class_sizes == [3, 3, 3, 3] && s.monomials.len() == 12 && s.monomials.iter().all(|m| m.len() == 3);
    if !shape_ok {
        return Err(Error::WrongShape(format!(
            "need 4 classes of 3 lines and 12 triple points, got sizes {:?} and {} points",
            s.class_sizes,
            s.monomials.len()
        )));
    }
    let goal = target.structure();
    let p4 = permutations(4);
    let p3 = permutations(3);
    for colors in &p4 {
        for a in &p3 {
            for b in &p3 {
                for c in &p3 {
                    for d in &p3 {
                        let map = Relabeling {
                            colors: colors.clone(),
                            lines: vec![a.clone(), b.clone(), c.clone(), d.clone()],
                        };
                        if s.relabel(&map) == goal {
                            return Ok(Some(map));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// The cubic monomials with positive sign in the expansion of the 4x4
/// determinant whose first three rows are `a_i b_i c_i d_i` and whose last
/// row is all ones.
pub fn determinant_monomials() -> IncidenceStructure {
    let mut monomials = BTreeSet::new();
    for perm in permutations(4) {
        if sign(&perm) > 0 {
            // row i picks column perm[i]; the row of ones contributes 1
            let mut m: Vec<LineRef> = (0..3).map(|row| LineRef::new(perm[row], row)).collect();
            m.sort();
            monomials.insert(m);
        }
    }
    IncidenceStructure {
        class_sizes: vec![3; 4],
        monomials,
    }
}

fn sign(perm: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                s = -s;
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::linalg::determinant;
    use num_bigint::BigInt;
    use num_traits::{One, Zero};

    fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
        if m.len() == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for (j, x) in m[0].iter().enumerate() {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = x * cofactor_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn tables_parse_and_print() {
        let t = Table::I.structure();
        assert_eq!(t.monomials.len(), 12);
        assert!(t.monomials.contains(&parse_monomial("a1b2c3").unwrap()));
        let again = IncidenceStructure::parse(vec![3; 4], &t.to_string()).unwrap();
        assert_eq!(again, t);
        assert!(parse_monomial("a0b1").is_err());
        assert!(parse_monomial("z1!").is_err());
    }

    #[test]
    fn determinant_matches_table_one() {
        let d = determinant_monomials();
        assert_eq!(d.monomials.len(), 12);
        assert_eq!(d, Table::I.structure());
    }

    #[test]
    fn signs_agree_with_numeric_determinant() {
        // substitute distinct primes for the 12 variables; the positive and
        // negative monomial sums must reproduce the determinant
        let primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
        let val = |l: LineRef| BigInt::from(primes[l.index * 4 + l.color]);
        let mut rows: Vec<Vec<BigInt>> = (0..3)
            .map(|i| (0..4).map(|c| val(LineRef::new(c, i))).collect())
            .collect();
        rows.push(vec![BigInt::one(); 4]);
        let eval = |m: &Vec<LineRef>| m.iter().map(|&l| val(l)).product::<BigInt>();
        let pos: BigInt = determinant_monomials().monomials.iter().map(eval).sum();
        let mut all = BigInt::zero();
        for perm in permutations(4) {
            let mut m: Vec<LineRef> = (0..3).map(|r| LineRef::new(perm[r], r)).collect();
            m.sort();
            all += eval(&m);
        }
        let neg = all - &pos;
        assert_eq!(pos - neg, determinant(&rows));
        assert_eq!(determinant(&rows), cofactor_det(&rows));
    }

    #[test]
    fn tables_are_not_isomorphic() {
        assert!(match_structure(&Table::I.structure(), Table::II).unwrap().is_none());
        assert!(match_structure(&Table::II.structure(), Table::I).unwrap().is_none());
    }

    #[test]
    fn finds_scrambled_table() {
        let map = Relabeling {
            colors: vec![2, 0, 3, 1],
            lines: vec![vec![1, 2, 0], vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]],
        };
        let scrambled = Table::II.structure().relabel(&map);
        let found = match_structure(&scrambled, Table::II).unwrap().unwrap();
        assert_eq!(scrambled.relabel(&found), Table::II.structure());
    }

    #[test]
    fn wrong_shape() {
        let s = IncidenceStructure::parse(vec![3, 3, 3], "a1b1 b2c2").unwrap();
        assert!(matches!(match_structure(&s, Table::I), Err(Error::WrongShape(_))));
    }
}
