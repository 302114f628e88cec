//! Fixed-width bitset over root indices.

use std::fmt;

/// Upper bound on the number of roots a [`RootSet`] can index.
pub const MAX_ROOTS: usize = 256;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSet([u64; 4]);

impl RootSet {
    pub const fn empty() -> Self {
        RootSet([0; 4])
    }

    pub fn full(n: usize) -> Self {
        (0..n).collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let had = self.contains(i);
        self.0[i / 64] |= 1 << (i % 64);
        !had
    }

    pub fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn union(&self, other: &Self) -> Self {
        RootSet(std::array::from_fn(|k| self.0[k] | other.0[k]))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        RootSet(std::array::from_fn(|k| self.0[k] & other.0[k]))
    }

    pub fn difference(&self, other: &Self) -> Self {
        RootSet(std::array::from_fn(|k| self.0[k] & !other.0[k]))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..4).flat_map(move |k| {
            let mut w = self.0[k];
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }
}

impl FromIterator<usize> for RootSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = RootSet::empty();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
