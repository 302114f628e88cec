//! Standard parabolic subalgebras, resonant codimension and parabolicity
//! tests for saturated subalgebras.
//!
//! Subalgebras are modeled by their root sets; the Cartan part is always
//! present. The bracket of two root spaces is taken to be nonzero exactly
//! when the sum of the roots is a root, which is exact for split forms.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Sign;
use crate::roots::{CartanElement, Functional, RootSystem, RootSystemType};
use crate::rootset::RootSet;
use crate::weyl;

/// Largest rank handled by exhaustive base enumeration.
pub const EXHAUSTIVE_MAX_RANK: usize = 3;

/// Root-set model of a subalgebra containing the Cartan part, saturated by
/// coarse classes and closed under root addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SaturatedSubalgebra {
    roots: RootSet,
}

impl SaturatedSubalgebra {
    /// Checks saturation and closure.
    pub fn new(rs: &RootSystem, roots: RootSet) -> Result<Self> {
        if !rs.is_saturated(&roots) {
            return Err(Error::Precondition(
                "root set is not a union of coarse classes".into(),
            ));
        }
        if !rs.is_closed(&roots) {
            return Err(Error::NotClosed);
        }
        Ok(SaturatedSubalgebra { roots })
    }

    pub fn from_classes(rs: &RootSystem, classes: &[usize]) -> Result<Self> {
        Self::new(rs, rs.set_from_classes(classes))
    }

    /// Subalgebra generated by the given roots.
    pub fn generated_by(rs: &RootSystem, roots: &RootSet) -> Self {
        SaturatedSubalgebra {
            roots: rs.closure(roots),
        }
    }

    pub fn full(rs: &RootSystem) -> Self {
        SaturatedSubalgebra {
            roots: rs.all_roots(),
        }
    }

    pub fn roots(&self) -> &RootSet {
        &self.roots
    }

    pub fn classes(&self, rs: &RootSystem) -> Vec<usize> {
        rs.classes_in(&self.roots)
    }

    pub fn is_full(&self, rs: &RootSystem) -> bool {
        self.roots == rs.all_roots()
    }
}

/// `q_{levi}`: the Cartan part, all positive root spaces and the negative
/// root spaces spanned by the simple roots listed in `levi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParabolicSubalgebra {
    /// Zero-based indices of the simple roots whose negatives are kept.
    pub levi: Vec<usize>,
    roots: RootSet,
}

impl ParabolicSubalgebra {
    pub fn roots(&self) -> &RootSet {
        &self.roots
    }

    pub fn as_saturated(&self) -> SaturatedSubalgebra {
        SaturatedSubalgebra { roots: self.roots }
    }
}

pub fn standard_parabolic(rs: &RootSystem, levi: &[usize]) -> Result<ParabolicSubalgebra> {
    if let Some(&bad) = levi.iter().find(|&&j| j >= rs.rank()) {
        return Err(Error::Precondition(format!(
            "simple root index {} out of range for {}",
            bad + 1,
            rs.ty()
        )));
    }
    let mut levi = levi.to_vec();
    levi.sort_unstable();
    levi.dedup();
    let roots = (0..rs.num_roots())
        .filter(|&i| rs.is_positive(i) || rs.in_simple_span(i, &levi))
        .collect();
    Ok(ParabolicSubalgebra { levi, roots })
}

/// `q_{Pi \ {a_{j+1}}}` for zero-based `j`.
pub fn maximal_parabolic(rs: &RootSystem, j: usize) -> ParabolicSubalgebra {
    let levi: Vec<usize> = (0..rs.rank()).filter(|&k| k != j).collect();
    standard_parabolic(rs, &levi).expect("indices in range")
}

/// Number of coarse classes not contained in the root set.
pub fn resonant_codimension(rs: &RootSystem, roots: &RootSet) -> usize {
    rs.classes().len() - rs.classes_in(roots).len()
}

/// Resonant codimension of every maximal parabolic, as `(j, codim)` with
/// 1-based `j`.
pub fn maximal_parabolic_table(rs: &RootSystem) -> Vec<(usize, usize)> {
    (0..rs.rank())
        .map(|j| (j + 1, resonant_codimension(rs, maximal_parabolic(rs, j).roots())))
        .collect()
}

/// Minimal resonant codimension `r(g)` over the maximal parabolics.
pub fn minimal_resonant_codimension(rs: &RootSystem) -> usize {
    maximal_parabolic_table(rs)
        .into_iter()
        .map(|(_, c)| c)
        .min()
        .expect("rank >= 1")
}

/// Whether `set` equals `w(q_{levi})` for some Weyl element (given as root
/// permutations) and subset `levi` of the simple roots.
pub fn matches_some_parabolic(rs: &RootSystem, set: &RootSet, group: &[Vec<usize>]) -> bool {
    let positive = rs.positive_roots();
    group.iter().any(|perm| {
        // pull the set back by w: pulled = w^{-1}(set)
        let pulled: RootSet = (0..rs.num_roots()).filter(|&i| set.contains(perm[i])).collect();
        if !positive.is_subset(&pulled) {
            return false;
        }
        let levi: Vec<usize> = (0..rs.rank())
            .filter(|&j| pulled.contains(rs.negation(rs.simple(j))))
            .collect();
        standard_parabolic(rs, &levi).is_ok_and(|q| *q.roots() == pulled)
    })
}

/// Exhaustive test over all bases (Weyl images of the standard one).
pub fn is_parabolic_for_some_base(rs: &RootSystem, h: &SaturatedSubalgebra) -> Result<bool> {
    if rs.rank() > EXHAUSTIVE_MAX_RANK {
        return Err(Error::Capability(format!(
            "exhaustive base enumeration is limited to rank <= {EXHAUSTIVE_MAX_RANK}; \
             use contains_positive_system for {}",
            rs.ty()
        )));
    }
    let group = weyl::enumerate_group(rs)?;
    Ok(matches_some_parabolic(rs, h.roots(), &group))
}

/// Half-space test: returns `s` with `b(s) < 0` for every root `b` outside
/// `h`, which exists exactly when `h` contains a positive system. A closed
/// subset containing a positive system is parabolic.
pub fn contains_positive_system(rs: &RootSystem, h: &SaturatedSubalgebra) -> Option<CartanElement> {
    let outside = rs.all_roots().difference(h.roots());
    let constraints: Vec<(Functional, Sign)> = outside
        .iter()
        .map(|i| (Functional::from(rs.root(i)), Sign::Negative))
        .collect();
    rs.feasible_cartan(&constraints)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop25Report {
    pub ty: RootSystemType,
    pub classes: usize,
    pub minimal_codimension: usize,
    pub subsets_examined: u64,
    pub closed: u64,
    pub within_bound: u64,
    pub confirmed: u64,
    pub counterexamples: Vec<RootSet>,
}

impl Prop25Report {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.confirmed == self.within_bound
    }
}

/// Enumerates every union of coarse classes closed under root addition and
/// checks that those with resonant codimension at most `r(g)` are parabolic
/// for some base.
///
/// The subset space is split across worker threads; counts and the sorted
/// list of counterexamples do not depend on the split.
pub fn verify_prop25(rs: &RootSystem) -> Result<Prop25Report> {
    if rs.rank() > EXHAUSTIVE_MAX_RANK {
        return Err(Error::Capability(format!(
            "exhaustive verification is limited to rank <= {EXHAUSTIVE_MAX_RANK}"
        )));
    }
    let group = weyl::enumerate_group(rs)?;
    let r = minimal_resonant_codimension(rs);
    let n_classes = rs.classes().len();
    let class_sets: Vec<RootSet> = (0..n_classes).map(|c| rs.class_roots(c)).collect();
    let total: u64 = 1 << n_classes;

    #[derive(Default)]
    struct Tally {
        closed: u64,
        within: u64,
        confirmed: u64,
        bad: Vec<RootSet>,
    }

    let tally = (0..total)
        .into_par_iter()
        .fold(Tally::default, |mut t, mask| {
            let set = (0..n_classes)
                .filter(|c| mask >> c & 1 == 1)
                .fold(RootSet::empty(), |acc, c| acc.union(&class_sets[c]));
            if !rs.is_closed(&set) {
                return t;
            }
            t.closed += 1;
            if n_classes - mask.count_ones() as usize > r {
                return t;
            }
            t.within += 1;
            if matches_some_parabolic(rs, &set, &group) {
                t.confirmed += 1;
            } else {
                t.bad.push(set);
            }
            t
        })
        .reduce(Tally::default, |mut a, b| {
            a.closed += b.closed;
            a.within += b.within;
            a.confirmed += b.confirmed;
            a.bad.extend(b.bad);
            a
        });
    let mut counterexamples = tally.bad;
    counterexamples.sort();
    Ok(Prop25Report {
        ty: rs.ty(),
        classes: n_classes,
        minimal_codimension: r,
        subsets_examined: total,
        closed: tally.closed,
        within_bound: tally.within,
        confirmed: tally.confirmed,
        counterexamples,
    })
}
