//! Dense matrices over [`CycSum`].

use std::fmt;

use crate::cyclotomic::CycSum;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    level: u32,
    entries: Vec<CycSum>,
}

/// Entrywise equality of values; the levels may differ.
impl PartialEq for CycMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl Eq for CycMatrix {}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

impl CycMatrix {
    pub fn zeros(rows: usize, cols: usize, level: u32) -> Self {
        CycMatrix {
            rows,
            cols,
            level,
            entries: vec![CycSum::zero(level); rows * cols],
        }
    }

    pub fn identity(n: usize, level: u32) -> Self {
        let mut m = Self::zeros(n, n, level);
        for i in 0..n {
            m.set(i, i, CycSum::one(level));
        }
        m
    }

    /// Row-major entries; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<CycSum>>, level: u32) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        let mut m = Self::zeros(r, c, level);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    /// Integer entries.
    pub fn from_ints(rows: &[&[i64]], level: u32) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| CycSum::from_int(level, x)).collect())
                .collect(),
            level,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn get(&self, r: usize, c: usize) -> &CycSum {
        &self.entries[r * self.cols + c]
    }

    /// Stores an entry, lifting the matrix level when the entry needs it.
    pub fn set(&mut self, r: usize, c: usize, x: CycSum) {
        if !self.level.is_multiple_of(x.level()) {
            self.relevel(num_integer::lcm(self.level, x.level()));
        }
        self.entries[r * self.cols + c] = x.embed(self.level);
    }

    fn relevel(&mut self, level: u32) {
        self.entries = self.entries.iter().map(|e| e.embed(level)).collect();
        self.level = level;
    }

    pub fn mul(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let level = num_integer::lcm(self.level, other.level);
        let mut out = CycMatrix::zeros(self.rows, other.cols, level);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = &out.entries[i * other.cols + j] + &(a * b);
                    out.entries[i * other.cols + j] = cur.embed(level);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &CycSum) -> CycMatrix {
        let level = num_integer::lcm(self.level, s.level());
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            level,
            entries: self.entries.iter().map(|e| (e * s).embed(level)).collect(),
        }
    }

    pub fn trace(&self) -> CycSum {
        (0..self.rows.min(self.cols)).fold(CycSum::zero(self.level), |acc, i| &acc + self.get(i, i))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// First entry where two equally sized matrices differ.
    pub fn first_difference(&self, other: &CycMatrix) -> Option<(usize, usize)> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Some((0, 0));
        }
        (0..self.rows * self.cols)
            .find(|&i| self.entries[i] != other.entries[i])
            .map(|i| (i / self.cols, i % self.cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turn_squares_to_minus_one() {
        let j = CycMatrix::from_ints(&[&[0, -1], &[1, 0]], 1).unwrap();
        let minus = CycMatrix::from_ints(&[&[-1, 0], &[0, -1]], 1).unwrap();
        assert_eq!(j.mul(&j).unwrap(), minus);
        assert!(j.trace().is_zero());
    }

    #[test]
    fn levels_lift_on_demand() {
        let mut m = CycMatrix::identity(2, 1);
        m.set(0, 1, CycSum::root(4, 1));
        assert_eq!(m.level(), 4);
        let sq = m.mul(&m).unwrap();
        assert_eq!(sq.get(0, 1), &CycSum::root(4, 1).scale(2.into()));
        assert!(m.mul(&CycMatrix::identity(3, 1)).is_err());
    }
}
