use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// Exponent vector of the formal normal variables `z_1..z_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// `|alpha| = sum of exponents`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.len() != other.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// `alpha! = prod alpha_i!`.
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::from(1);
        for &a in &self.0 {
            for k in 2..=a {
                acc *= k;
            }
        }
        acc
    }

    /// All multi-indices of length `n` with order at most `r`, graded by
    /// order and lexicographic inside each order.
    pub fn all_up_to(n: usize, r: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for k in 0..=r {
            out.extend(Self::all_of_order(n, k));
        }
        out
    }

    pub fn all_of_order(n: usize, k: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(k);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in (0..=k).rev() {
                prefix.push(a);
                rec(n, k - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if k == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(n, k, &mut Vec::with_capacity(n), &mut out);
        out
    }

    /// Every decomposition `self = j + k` into non-negative parts.
    pub fn splittings(&self) -> Vec<(MultiIndex, MultiIndex)> {
        let mut out = vec![(Vec::new(), Vec::new())];
        for &a in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
            for (j, k) in &out {
                for x in 0..=a {
                    let mut j2: Vec<u32> = j.clone();
                    let mut k2: Vec<u32> = k.clone();
                    j2.push(x);
                    k2.push(a - x);
                    next.push((j2, k2));
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|(j, k)| (MultiIndex(j), MultiIndex(k)))
            .collect()
    }
}

/// Number of monomials of order at most `r` in `n` variables: C(n + r, n).
pub fn formal_dim(n: usize, r: u32) -> usize {
    let mut acc: u128 = 1;
    for i in 1..=n as u128 {
        acc = acc * (r as u128 + i) / i;
    }
    acc as usize
}
