//! Young diagrams: contents, Frobenius coordinates, dimensions and the
//! graded enumeration of the Young lattice.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factorial, ratio, Rat};

/// A Young diagram, stored as its weakly decreasing list of row lengths.
///
/// Partitions are ordered first by size and then reverse-lexicographically,
/// so `(4) < (3,1) < (2,2) < (2,1,1) < (1,1,1,1) < (5) < ...`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

/// Modified Frobenius coordinates `a_i = λ_i - i + 1/2`, `b_i = λ'_i - i + 1/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusCoords {
    pub a: Vec<Rat>,
    pub b: Vec<Rat>,
    pub depth: usize,
}

impl Partition {
    /// Builds a partition, dropping trailing zeros.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidPartition(parts));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Panicking constructor for literals in tests and examples.
    pub fn from_parts(parts: &[usize]) -> Self {
        Self::new(parts.to_vec()).expect("valid partition literal")
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Row length with 0-based index, zero beyond the last row.
    pub fn row(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Partition {
        let cols = self.row(0);
        let parts = (0..cols).map(|j| self.parts.iter().take_while(|&&p| p > j).count()).collect();
        Partition { parts }
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// Boxes as 1-based `(row, col)` pairs, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| (1..=p).map(move |j| (i + 1, j)))
    }

    /// Content `col - row` of a box of the diagram (1-based coordinates).
    pub fn content(&self, row: usize, col: usize) -> Result<i64> {
        if row == 0 || col == 0 || col > self.row(row - 1) {
            return Err(Error::CellOutside { row, col, diagram: self.clone() });
        }
        Ok(col as i64 - row as i64)
    }

    pub fn contents(&self) -> impl Iterator<Item = i64> + '_ {
        self.cells().map(|(i, j)| j as i64 - i as i64)
    }

    /// Boxes that can be appended, top to bottom.
    pub fn addable_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..=self.len() {
            let cur = self.row(i);
            if i == 0 || self.row(i - 1) > cur {
                out.push((i + 1, cur + 1));
            }
        }
        out
    }

    /// Boxes that can be removed, top to bottom.
    pub fn removable_cells(&self) -> Vec<(usize, usize)> {
        (0..self.len()).filter(|&i| self.row(i) > self.row(i + 1)).map(|i| (i + 1, self.row(i))).collect()
    }

    /// λ + □ for a box in row `row` (1-based); the caller guarantees addability.
    pub fn with_cell(&self, row: usize) -> Partition {
        let mut parts = self.parts.clone();
        if row > parts.len() {
            parts.push(1);
        } else {
            parts[row - 1] += 1;
        }
        Partition { parts }
    }

    /// λ − □ for a removable box in row `row` (1-based).
    pub fn without_cell(&self, row: usize) -> Partition {
        let mut parts = self.parts.clone();
        parts[row - 1] -= 1;
        if parts[row - 1] == 0 {
            parts.pop();
        }
        Partition { parts }
    }

    /// All λ + □, paired with the appended box.
    pub fn up_cells(&self) -> Vec<((usize, usize), Partition)> {
        self.addable_cells().into_iter().map(|c| (c, self.with_cell(c.0))).collect()
    }

    /// All λ − □, paired with the removed box.
    pub fn down_cells(&self) -> Vec<((usize, usize), Partition)> {
        self.removable_cells().into_iter().map(|c| (c, self.without_cell(c.0))).collect()
    }

    pub fn up_set(&self) -> Vec<Partition> {
        self.up_cells().into_iter().map(|(_, p)| p).collect()
    }

    pub fn down_set(&self) -> Vec<Partition> {
        self.down_cells().into_iter().map(|(_, p)| p).collect()
    }

    /// Hook lengths of all boxes.
    pub fn hooks(&self) -> Vec<usize> {
        let t = self.transpose();
        self.cells().map(|(i, j)| self.row(i - 1) - j + t.row(j - 1) - i + 1).collect()
    }

    pub fn frobenius(&self) -> FrobeniusCoords {
        let t = self.transpose();
        let depth = (0..self.len()).take_while(|&i| self.row(i) > i).count();
        let half = |len: usize, i: usize| ratio(2 * len as i64 - 2 * i as i64 - 1, 2);
        FrobeniusCoords {
            a: (0..depth).map(|i| half(self.row(i), i)).collect(),
            b: (0..depth).map(|i| half(t.row(i), i)).collect(),
            depth,
        }
    }

    /// Inverse of [`Partition::frobenius`].
    pub fn from_frobenius(coords: &FrobeniusCoords) -> Result<Partition> {
        let to_len = |x: &Rat, i: usize| -> Result<usize> {
            let twice = x * Rat::from_integer(2.into());
            if !twice.is_integer() || twice.numer().is_even() || !x.is_positive() {
                return Err(Error::Parse(x.to_string()));
            }
            let v = (x + ratio(2 * i as i64 + 1, 2)).to_integer();
            v.to_usize().ok_or_else(|| Error::Parse(x.to_string()))
        };
        let d = coords.depth;
        if coords.a.len() != d || coords.b.len() != d {
            return Err(Error::InvalidQuery("frobenius arrays of unequal length".into()));
        }
        let rows: Vec<usize> = (0..d).map(|i| to_len(&coords.a[i], i)).collect::<Result<_>>()?;
        let cols: Vec<usize> = (0..d).map(|i| to_len(&coords.b[i], i)).collect::<Result<_>>()?;
        // Rows below the diagonal block are read off the column lengths.
        let height = cols.first().copied().unwrap_or(0);
        let mut parts = rows.clone();
        for i in d..height {
            let len = cols.iter().filter(|&&c| c > i).count();
            parts.push(len);
        }
        let p = Partition::new(parts)?;
        if p.frobenius() != *coords {
            return Err(Error::InvalidQuery("inconsistent Frobenius coordinates".into()));
        }
        Ok(p)
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

/// All partitions of `n` in canonical (reverse-lexicographic) order.
pub fn enumerate(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for k in (1..=rem.min(max)).rev() {
            cur.push(k);
            rec(rem - k, k, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out
}

/// All partitions with at most `n` boxes, graded.
pub fn enumerate_up_to(n: usize) -> Vec<Partition> {
    (0..=n).flat_map(enumerate).collect()
}

fn dim_cache() -> &'static RwLock<HashMap<Partition, BigUint>> {
    static CACHE: OnceLock<RwLock<HashMap<Partition, BigUint>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Number of standard Young tableaux, by the hook-length formula.
pub fn dim(lambda: &Partition) -> BigUint {
    if let Some(d) = dim_cache().read().unwrap().get(lambda) {
        return d.clone();
    }
    let hooks: BigUint = lambda.hooks().into_iter().fold(BigUint::one(), |acc, h| acc * h);
    let d = factorial(lambda.size()) / hooks;
    dim_cache().write().unwrap().insert(lambda.clone(), d.clone());
    d
}

/// Number of standard tableaux of skew shape λ/μ, via Aitken's determinant
/// `n! det[1/(λ_i - μ_j - i + j)!]`.
pub fn skew_dim(mu: &Partition, lambda: &Partition) -> BigUint {
    if !lambda.contains(mu) {
        return BigUint::zero();
    }
    if mu == lambda {
        return BigUint::one();
    }
    if mu.is_empty() {
        return dim(lambda);
    }
    let n = lambda.size() - mu.size();
    let k = lambda.len();
    let inv_fact = |x: i64| -> Rat {
        if x < 0 {
            Rat::zero()
        } else {
            Rat::new(BigInt::one(), BigInt::from(factorial(x as usize)))
        }
    };
    let matrix: Vec<Vec<Rat>> = (0..k)
        .map(|i| (0..k).map(|j| inv_fact(lambda.row(i) as i64 - mu.row(j) as i64 - i as i64 + j as i64)).collect())
        .collect();
    let det = determinant(matrix) * Rat::from_integer(BigInt::from(factorial(n)));
    debug_assert!(det.is_integer());
    det.to_integer().to_biguint().expect("skew dimension is a nonnegative integer")
}

/// Exact determinant by fraction-valued Gaussian elimination.
pub(crate) fn determinant(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            let (upper, lower) = m.split_at_mut(r);
            for (x, y) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= &factor * y;
            }
        }
    }
    det
}
