//! Points of `Z^s` with the componentwise partial order.

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

/// Largest branch count handled by the box scans.
pub const MAX_BRANCHES: usize = 4;

/// A branch-wise valuation vector `(v_1, ..., v_s)`.
///
/// `Ord` is the lexicographic order, used only for storage and tie breaking.
/// The mathematical order is the componentwise one exposed by [`leq`](Self::leq)
/// and [`less`](Self::less).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValueVector(Vec<i64>);

impl ValueVector {
    pub fn new(coords: Vec<i64>) -> Self {
        assert!(
            !coords.is_empty(),
            "a value vector needs at least one branch"
        );
        ValueVector(coords)
    }

    pub fn zero(branches: usize) -> Self {
        Self::new(vec![0; branches])
    }

    pub fn splat(branches: usize, value: i64) -> Self {
        Self::new(vec![value; branches])
    }

    /// The canonical basis vector `e_i`.
    pub fn unit(branches: usize, i: usize) -> Self {
        let mut v = vec![0; branches];
        v[i] = 1;
        Self::new(v)
    }

    pub fn scalar(value: i64) -> Self {
        Self::new(vec![value])
    }

    pub fn branches(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    /// `|a| = a_1 + ... + a_s`.
    pub fn norm(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Componentwise `a <= b`.
    pub fn leq(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Strict partial order: `a <= b` and `a != b`.
    pub fn less(&self, other: &Self) -> bool {
        self.leq(other) && self != other
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.zip_with(other, i64::min)
    }

    pub fn join(&self, other: &Self) -> Self {
        self.zip_with(other, i64::max)
    }

    pub fn scale(&self, k: i64) -> Self {
        ValueVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn with(&self, i: usize, value: i64) -> Self {
        let mut v = self.clone();
        v.0[i] = value;
        v
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        debug_assert_eq!(self.branches(), other.branches());
        ValueVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }
}

impl Add for &ValueVector {
    type Output = ValueVector;
    fn add(self, rhs: &ValueVector) -> ValueVector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ValueVector {
    type Output = ValueVector;
    fn sub(self, rhs: &ValueVector) -> ValueVector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Add for ValueVector {
    type Output = ValueVector;
    fn add(self, rhs: ValueVector) -> ValueVector {
        &self + &rhs
    }
}

impl Sub for ValueVector {
    type Output = ValueVector;
    fn sub(self, rhs: ValueVector) -> ValueVector {
        &self - &rhs
    }
}

impl fmt::Debug for ValueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ValueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl From<i64> for ValueVector {
    fn from(a: i64) -> Self {
        ValueVector::scalar(a)
    }
}

impl From<Vec<i64>> for ValueVector {
    fn from(v: Vec<i64>) -> Self {
        ValueVector::new(v)
    }
}

impl<const N: usize> From<[i64; N]> for ValueVector {
    fn from(v: [i64; N]) -> Self {
        ValueVector::new(v.to_vec())
    }
}

/// Every vector `a` with `lo <= a <= hi`, in lexicographic order.
pub fn box_points(lo: &ValueVector, hi: &ValueVector) -> BoxIter {
    BoxIter::new(lo.clone(), hi.clone())
}

pub struct BoxIter {
    lo: ValueVector,
    hi: ValueVector,
    next: Option<ValueVector>,
}

impl BoxIter {
    fn new(lo: ValueVector, hi: ValueVector) -> Self {
        let next = if lo.leq(&hi) { Some(lo.clone()) } else { None };
        BoxIter { lo, hi, next }
    }
}

impl Iterator for BoxIter {
    type Item = ValueVector;

    fn next(&mut self) -> Option<ValueVector> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.branches();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ.0[i] < self.hi.0[i] {
                succ.0[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ.0[i] = self.lo.0[i];
        }
        Some(current)
    }
}

/// Elements of `set` that have no strictly smaller element in `set`.
pub fn minimal_elements(set: &[ValueVector]) -> Vec<ValueVector> {
    set.iter()
        .filter(|a| !set.iter().any(|b| b.less(a)))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_componentwise() {
        let a = ValueVector::from([1, 2]);
        let b = ValueVector::from([2, 1]);
        assert!(!a.leq(&b) && !b.leq(&a));
        assert_eq!(a.meet(&b), ValueVector::from([1, 1]));
        assert!(ValueVector::from([1, 1]).less(&a));
        assert!(!a.less(&a));
        assert_eq!(a.norm(), 3);
    }

    #[test]
    fn box_iteration_covers_the_box() {
        let pts: Vec<_> = box_points(&[0, 1].into(), &[1, 2].into()).collect();
        assert_eq!(
            pts,
            vec![
                ValueVector::from([0, 1]),
                [0, 2].into(),
                [1, 1].into(),
                [1, 2].into()
            ]
        );
        assert_eq!(box_points(&[2].into(), &[1].into()).count(), 0);
    }

    #[test]
    fn minimal_elements_of_antichain() {
        let set = vec![ValueVector::from([1, 3]), [2, 2].into(), [2, 3].into()];
        assert_eq!(minimal_elements(&set).len(), 2);
    }
}
