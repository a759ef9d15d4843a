//! Exact linear algebra: an incremental row echelon over `Q` and
//! fraction-free rank over `Z`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rows in echelon form, each normalized to a leading `1`.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vec<Q>)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|(p, _)| *p)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Q]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }

    /// Reduces `v` against the stored rows in place.
    pub fn reduce(&self, v: &mut [Q]) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row).skip(*p) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
    }

    /// Adds `v` to the span; returns the reduced vector when it was new.
    pub fn insert(&mut self, mut v: Vec<Q>) -> Option<Vec<Q>> {
        self.reduce(&mut v);
        let p = v.iter().position(|x| !x.is_zero())?;
        let inv = v[p].recip();
        for x in v.iter_mut().skip(p) {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rows.push((p, v.clone()));
        Some(v)
    }
}

/// Positions `i` such that column `order[i]` is a pivot when the rows are
/// reduced scanning columns in the given order. The rank of any prefix
/// `order[..k]` is the number of positions below `k`.
pub fn rank_profile(rows: &[Vec<Q>], order: &[usize]) -> Vec<usize> {
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| order.iter().map(|&c| r[c].clone()).collect())
        .collect();
    let mut profile = Vec::new();
    let mut top = 0;
    for col in 0..order.len() {
        if top == m.len() {
            break;
        }
        let Some(piv) = (top..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(top, piv);
        let inv = m[top][col].recip();
        let pivot_row: Vec<Q> = m[top].iter().map(|x| x * &inv).collect();
        for row in m.iter_mut().skip(top + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        m[top] = pivot_row;
        profile.push(col);
        top += 1;
    }
    profile
}

pub fn rank_q(rows: &[Vec<Q>]) -> usize {
    let mut e = Echelon::new();
    rows.iter()
        .filter(|r| e.insert((*r).clone()).is_some())
        .count()
}

/// Rank over `Q` of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let p = m[rank][col].clone();
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            let f = row[col].clone();
            for j in col..cols {
                row[j] = (&p * &row[j] - &f * &pivot_row[j]) / &prev;
            }
        }
        prev = p;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn echelon_and_profile() {
        let rows = vec![qs(&[0, 1, 1]), qs(&[0, 2, 2]), qs(&[1, 0, 1])];
        assert_eq!(rank_q(&rows), 2);
        assert_eq!(rank_profile(&rows, &[0, 1, 2]), vec![0, 1]);
        assert_eq!(rank_profile(&rows, &[2, 1, 0]), vec![0, 1]);
        let mut e = Echelon::new();
        assert!(e.insert(qs(&[0, 1, 1])).is_some());
        assert!(e.insert(qs(&[0, 3, 3])).is_none());
    }

    #[test]
    fn bareiss_matches_rational_rank() {
        let m = [vec![2, 4, 1], vec![1, 2, 0], vec![3, 6, 1], vec![0, 0, 5]];
        let big: Vec<Vec<BigInt>> = m
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let rat: Vec<Vec<Q>> = m.iter().map(|r| qs(r)).collect();
        assert_eq!(bareiss_rank(big), 2);
        assert_eq!(rank_q(&rat), 2);
    }
}
