//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's semigroup machinery.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// A numerical semigroup as a membership table up to a bound past its
/// conductor.
#[derive(Clone, Debug)]
pub struct Num {
    pub member: Vec<bool>,
    pub conductor: i64,
}

impl Num {
    pub fn from_generators(gens: &[u64]) -> Num {
        let bound = 4
            * gens.iter().max().copied().unwrap_or(1) as usize
            * gens.iter().min().copied().unwrap_or(1) as usize
            + 8;
        let mut member = vec![false; bound];
        member[0] = true;
        for n in 1..bound {
            member[n] = gens
                .iter()
                .any(|&g| g as usize <= n && member[n - g as usize]);
        }
        Num::from_table(member)
    }

    pub fn from_gaps(gaps: &[i64]) -> Num {
        let bound = gaps.iter().max().copied().unwrap_or(0) as usize * 4 + 8;
        let member = (0..bound).map(|n| !gaps.contains(&(n as i64))).collect();
        Num::from_table(member)
    }

    fn from_table(member: Vec<bool>) -> Num {
        let conductor = (0..member.len())
            .rev()
            .find(|&n| !member[n])
            .map_or(0, |f| f + 1) as i64;
        assert!(
            (conductor as usize) * 2 + 4 < member.len(),
            "table too short"
        );
        Num { member, conductor }
    }

    pub fn contains(&self, a: i64) -> bool {
        a >= 0 && (a >= self.conductor || self.member[a as usize])
    }

    pub fn gaps(&self) -> Vec<i64> {
        (0..self.conductor).filter(|&a| !self.contains(a)).collect()
    }

    pub fn genus(&self) -> i64 {
        self.gaps().len() as i64
    }

    pub fn gamma(&self) -> i64 {
        self.conductor - 1
    }

    pub fn symmetric(&self) -> bool {
        self.genus() * 2 == self.conductor
    }

    /// `K = {a : γ - a ∉ S}`.
    pub fn k_contains(&self, a: i64) -> bool {
        !self.contains(self.gamma() - a)
    }

    /// `K ∩ [0, γ)`, the exponents of the canonical sections.
    pub fn k_interior(&self) -> Vec<i64> {
        (0..self.gamma()).filter(|&a| self.k_contains(a)).collect()
    }

    /// `⋃_n nK`, computed up to `limit`.
    pub fn blowup(&self, limit: i64) -> BTreeSet<i64> {
        let k: Vec<i64> = (0..=limit).filter(|&a| self.k_contains(a)).collect();
        let mut acc: BTreeSet<i64> = k.iter().copied().collect();
        loop {
            let next: BTreeSet<i64> = acc
                .iter()
                .flat_map(|a| k.iter().map(move |b| a + b))
                .filter(|&x| x <= limit)
                .chain(acc.iter().copied())
                .collect();
            if next == acc {
                return acc;
            }
            acc = next;
        }
    }

    /// `dim` of the cokernel of `Sym² H⁰(W) -> H⁰(W²)` on the monomial model:
    /// `W` is generated by `t^a`, `a ∈ K°`, so its pole at infinity is
    /// `m = max K°` and `H⁰(W²)` is spanned by `t^a`, `a ∈ (K + K) ∩ [0, 2m]`.
    pub fn level_two_cokernel(&self) -> i64 {
        let kint = self.k_interior();
        let m = *kint.last().unwrap();
        let k: Vec<i64> = (0..=2 * m).filter(|&a| self.k_contains(a)).collect();
        let h0: BTreeSet<i64> = k
            .iter()
            .flat_map(|a| k.iter().map(move |b| a + b))
            .filter(|&x| x <= 2 * m)
            .collect();
        let image: BTreeSet<i64> = kint
            .iter()
            .flat_map(|a| kint.iter().map(move |b| a + b))
            .collect();
        (h0.len() - image.len()) as i64
    }

    pub fn small_elements(&self) -> Vec<i64> {
        (0..=self.conductor).filter(|&a| self.contains(a)).collect()
    }
}

/// All gap sets of numerical semigroups of genus at most `g`, by brute force
/// over subsets of `[1, 2g]`.
pub fn all_gap_sets(g: usize) -> Vec<Vec<i64>> {
    let top = 2 * g.max(1);
    let mut out = Vec::new();
    for mask in 0u32..(1 << top) {
        if mask.count_ones() as usize > g {
            continue;
        }
        let gaps: Vec<i64> = (1..=top as i64)
            .filter(|i| mask >> (i - 1) & 1 == 1)
            .collect();
        let inside = |a: i64| !gaps.contains(&a);
        let closed = (1..=top as i64).filter(|&a| inside(a)).all(|a| {
            (1..=top as i64)
                .filter(|&b| inside(b))
                .all(|b| a + b > top as i64 || inside(a + b))
        });
        if closed {
            out.push(gaps);
        }
    }
    out
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of distinct `r`-fold sums of `basis`.
pub fn sumset_size(basis: &[i64], r: usize) -> usize {
    let mut sums: BTreeSet<i64> = BTreeSet::from([0]);
    for _ in 0..r {
        sums = sums
            .iter()
            .flat_map(|a| basis.iter().map(move |b| a + b))
            .collect();
    }
    sums.len()
}

/// Degree-`r` forms vanishing on the monomial embedding by `basis`.
pub fn ideal_dimension(basis: &[i64], r: usize) -> i64 {
    binomial(r as i64 + basis.len() as i64 - 1, r as i64) - sumset_size(basis, r) as i64
}

/// A two-branch value set as an explicit membership predicate: the listed
/// small elements, plus everything above the conductor, plus the points
/// forced by the conductor on each branch.
#[derive(Clone, Debug)]
pub struct Two {
    pub small: BTreeSet<(i64, i64)>,
    pub conductor: (i64, i64),
}

impl Two {
    pub fn contains(&self, a: (i64, i64)) -> bool {
        let c = self.conductor;
        let clamp = (a.0.min(c.0), a.1.min(c.1));
        if a.0 < 0 || a.1 < 0 {
            return false;
        }
        self.small.contains(&clamp) || (a.0 >= c.0 && a.1 >= c.1)
    }

    /// `Δ(b) = {c ∈ S : c_i = b_i, c_j > b_j}` for some `i`, within a box.
    fn delta_nonempty(&self, b: (i64, i64), bound: i64) -> bool {
        (b.1 + 1..=bound).any(|y| self.contains((b.0, y)))
            || (b.0 + 1..=bound).any(|x| self.contains((x, b.1)))
    }

    /// `K = {a : Δ(γ - a) = ∅}` restricted to `[0, bound]²`.
    pub fn k_contains(&self, a: (i64, i64), bound: i64) -> bool {
        let g = (self.conductor.0 - 1, self.conductor.1 - 1);
        !self.delta_nonempty((g.0 - a.0, g.1 - a.1), bound)
    }
}
