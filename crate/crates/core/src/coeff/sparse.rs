use std::collections::BTreeMap;

use super::Scalar;

/// Sparse linear combination of monomial keys with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for SparsePoly<K> {
    fn default() -> Self {
        SparsePoly {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> SparsePoly<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn monomial(key: K, c: Scalar) -> Self {
        let mut p = Self::new();
        p.add_term(key, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (K, Scalar)>>(terms: I) -> Self {
        let mut p = Self::new();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &K) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, key: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::new();
        }
        SparsePoly {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect(),
        }
    }

    /// Product with a key combiner; `None` from the combiner drops the term.
    pub fn mul_with<F>(&self, other: &Self, combine: F) -> Self
    where
        F: Fn(&K, &K) -> Option<K>,
    {
        let mut out = Self::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if let Some(k) = combine(ka, kb) {
                    out.add_term(k, ca * cb);
                }
            }
        }
        out
    }

    /// Applies a term-wise linear map `key -> Option<(new_key, factor)>`.
    pub fn map_terms<K2: Ord + Clone, F>(&self, f: F) -> SparsePoly<K2>
    where
        F: Fn(&K, &Scalar) -> Option<(K2, Scalar)>,
    {
        let mut out = SparsePoly::new();
        for (k, c) in &self.terms {
            if let Some((k2, c2)) = f(k, c) {
                out.add_term(k2, c2);
            }
        }
        out
    }

    pub fn retain<F: FnMut(&K) -> bool>(&mut self, mut keep: F) {
        self.terms.retain(|k, _| keep(k));
    }
}
