use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::BasisLabel;

/// Equations y·s ≡ 0 (mod 2), one row per measured y.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Gf2System {
    n: usize,
    rows: Vec<BasisLabel>,
}

impl Gf2System {
    pub fn new(n: usize) -> Self {
        Self { n, rows: Vec::new() }
    }

    pub fn from_rows(n: usize, rows: impl IntoIterator<Item = BasisLabel>) -> Result<Self> {
        let mut sys = Self::new(n);
        for row in rows {
            sys.push(row)?;
        }
        Ok(sys)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[BasisLabel] {
        &self.rows
    }

    pub fn push(&mut self, row: BasisLabel) -> Result<()> {
        if row.len() != self.n {
            return Err(Error::BitLength {
                expected: self.n,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Rank of the row space.
    pub fn rank(&self) -> usize {
        reduce(self.n, &self.rows).len()
    }

    /// Every nonzero v with y·v ≡ 0 for all rows, in ascending index order.
    pub fn nullspace(&self) -> Vec<BasisLabel> {
        let n = self.n;
        let pivots = reduce(n, &self.rows);
        // Column c of a label sits at bit n-1-c of its index.
        let col_bit = |c: usize| 1u64 << (n - 1 - c);
        let pivot_cols: Vec<usize> = pivots.iter().map(|(c, _)| *c).collect();
        let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
        let basis: Vec<u64> = free
            .iter()
            .map(|&f| {
                let mut v = col_bit(f);
                for (pc, row) in &pivots {
                    if row & col_bit(f) != 0 {
                        v |= col_bit(*pc);
                    }
                }
                v
            })
            .collect();
        let mut out: Vec<u64> = (1u64..1 << basis.len())
            .map(|mask| {
                basis
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(0, |acc, (_, v)| acc ^ v)
            })
            .collect();
        out.sort_unstable();
        out.into_iter().map(|v| BasisLabel::from_index(v as usize, n)).collect()
    }
}

/// Reduced row echelon form as (pivot column, row bits) pairs.
fn reduce(n: usize, rows: &[BasisLabel]) -> Vec<(usize, u64)> {
    let mut pivots: Vec<(usize, u64)> = Vec::new();
    for row in rows {
        let mut r = row.index() as u64;
        for (c, p) in &pivots {
            if r >> (n - 1 - c) & 1 == 1 {
                r ^= p;
            }
        }
        if r == 0 {
            continue;
        }
        let c = r.leading_zeros() as usize - (64 - n);
        for (pc, p) in pivots.iter_mut() {
            if *p >> (n - 1 - c) & 1 == 1 {
                *p ^= r;
            }
            debug_assert!(*p >> (n - 1 - *pc) & 1 == 1);
        }
        pivots.push((c, r));
    }
    pivots
}

/// Candidate keys consistent with every measured row.
pub fn simons_solver(sys: &Gf2System) -> Vec<BasisLabel> {
    sys.nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(items: &[&str]) -> Vec<BasisLabel> {
        items.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn small_systems() {
        let sys = Gf2System::from_rows(2, labels(&["00", "11"])).unwrap();
        assert_eq!(simons_solver(&sys), labels(&["11"]));
        assert_eq!(simons_solver(&Gf2System::new(2)), labels(&["01", "10", "11"]));
        let full = Gf2System::from_rows(3, labels(&["100", "110", "011"])).unwrap();
        assert_eq!(full.rank(), 3);
        assert!(simons_solver(&full).is_empty());
        assert!(Gf2System::new(3).push("01".parse().unwrap()).is_err());
    }

    #[test]
    fn matches_brute_force() {
        for n in 1..=5usize {
            for seed in 0..40u64 {
                let mut x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
                let count = (seed % 6) as usize;
                let rows: Vec<BasisLabel> = (0..count)
                    .map(|_| {
                        x ^= x << 13;
                        x ^= x >> 7;
                        x ^= x << 17;
                        BasisLabel::from_index((x % (1 << n)) as usize, n)
                    })
                    .collect();
                let sys = Gf2System::from_rows(n, rows.clone()).unwrap();
                let expected: Vec<BasisLabel> = (1..1 << n)
                    .map(|v| BasisLabel::from_index(v, n))
                    .filter(|v| rows.iter().all(|y| !y.dot(v).unwrap()))
                    .collect();
                assert_eq!(sys.nullspace(), expected, "n={n} rows={rows:?}");
            }
        }
    }
}
