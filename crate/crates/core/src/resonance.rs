//! Resonance of roots with fiberwise exponents and the resulting invariance
//! verdict.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Sign;
use crate::parabolic::{self, SaturatedSubalgebra};
use crate::rational::{self, Vector};
use crate::roots::{CartanElement, Functional, RootSystem};
use crate::rootset::RootSet;

/// Hypothetical fiberwise exponents on a manifold of dimension `dim_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSet {
    exponents: Vec<Functional>,
    dim_m: usize,
    volume_preserving: bool,
}

impl ExponentSet {
    pub fn new(exponents: Vec<Functional>, dim_m: usize, volume_preserving: bool) -> Result<Self> {
        if dim_m == 0 {
            return Err(Error::Precondition("dim M must be positive".into()));
        }
        if exponents.len() > dim_m {
            return Err(Error::Precondition(format!(
                "{} exponents exceed dim M = {dim_m}",
                exponents.len()
            )));
        }
        Ok(ExponentSet {
            exponents,
            dim_m,
            volume_preserving,
        })
    }

    pub fn exponents(&self) -> &[Functional] {
        &self.exponents
    }

    pub fn dim_m(&self) -> usize {
        self.dim_m
    }

    pub fn volume_preserving(&self) -> bool {
        self.volume_preserving
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    FullyInvariant,
    VolumeContradiction,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeReport {
    /// Indices of resonant coarse classes, ascending.
    pub resonant_classes: Vec<usize>,
    pub nonresonant_subalgebra: SaturatedSubalgebra,
    pub verdict: Verdict,
    /// Present exactly for [`Verdict::VolumeContradiction`]: every exponent
    /// is negative on it.
    pub witness: Option<CartanElement>,
}

fn restricted(rs: &RootSystem, f: &Functional) -> Vector {
    rs.pi_coords(&f.coords)
}

fn coeff_vector(rs: &RootSystem, i: usize) -> Vector {
    rs.coefficients(i).iter().map(|&c| rational::q(c)).collect()
}

/// Coarse classes containing a positive multiple of some exponent.
pub fn resonant_roots(rs: &RootSystem, exps: &ExponentSet) -> Vec<usize> {
    let restricted: Vec<Vector> = exps.exponents.iter().map(|f| restricted(rs, f)).collect();
    let resonant = |i: usize| {
        let c = coeff_vector(rs, i);
        restricted.iter().any(|f| rational::positively_proportional(&c, f))
    };
    (0..rs.classes().len())
        .filter(|&k| {
            let members = &rs.classes()[k].members;
            let hit = resonant(members[0]);
            debug_assert!(members.iter().all(|&m| resonant(m) == hit));
            hit
        })
        .collect()
}

/// Subalgebra generated by the non-resonant coarse classes.
pub fn nonresonant_subalgebra(rs: &RootSystem, exps: &ExponentSet) -> SaturatedSubalgebra {
    let resonant = resonant_roots(rs, exps);
    let keep: Vec<usize> = (0..rs.classes().len())
        .filter(|c| !resonant.contains(c))
        .collect();
    SaturatedSubalgebra::generated_by(rs, &rs.set_from_classes(&keep))
}

fn is_parabolic(rs: &RootSystem, h: &SaturatedSubalgebra) -> Result<bool> {
    if rs.rank() <= parabolic::EXHAUSTIVE_MAX_RANK {
        parabolic::is_parabolic_for_some_base(rs, h)
    } else {
        Ok(parabolic::contains_positive_system(rs, h).is_some())
    }
}

/// Classifies the invariance outcome.
///
/// Requires `dim_m <= r(g)`. A proper non-resonant subalgebra under
/// `dim_m < r(g)`, or one failing the parabolicity or witness checks, is
/// reported as a falsification error.
pub fn classify_outcome(rs: &RootSystem, exps: &ExponentSet) -> Result<OutcomeReport> {
    let r = parabolic::minimal_resonant_codimension(rs);
    if exps.dim_m > r {
        return Err(Error::Hypothesis(format!(
            "dim M = {} > r(g) = {r} for {}",
            exps.dim_m,
            rs.ty()
        )));
    }
    let resonant_classes = resonant_roots(rs, exps);
    let h = nonresonant_subalgebra(rs, exps);
    let report = |verdict, witness| OutcomeReport {
        resonant_classes: resonant_classes.clone(),
        nonresonant_subalgebra: h,
        verdict,
        witness,
    };
    if h.is_full(rs) {
        return Ok(report(Verdict::FullyInvariant, None));
    }
    if exps.dim_m == r && !exps.volume_preserving {
        return Ok(report(Verdict::Inconclusive, None));
    }
    if exps.dim_m < r {
        return Err(Error::Falsification(format!(
            "dim M = {} < r(g) = {r} yet the non-resonant subalgebra has codimension {}",
            exps.dim_m,
            parabolic::resonant_codimension(rs, h.roots())
        )));
    }
    if !is_parabolic(rs, &h)? {
        return Err(Error::Falsification(format!(
            "non-resonant subalgebra {:?} is not parabolic",
            h.roots()
        )));
    }
    let excluded: RootSet = rs.all_roots().difference(h.roots());
    let constraints: Vec<(Functional, Sign)> = excluded
        .iter()
        .map(|i| (Functional::from(rs.root(i)), Sign::Negative))
        .collect();
    let witness = rs.feasible_cartan(&constraints).ok_or_else(|| {
        Error::Falsification("no Cartan element is negative on every excluded class".into())
    })?;
    let excluded_coeffs: Vec<Vector> = excluded.iter().map(|i| coeff_vector(rs, i)).collect();
    for f in &exps.exponents {
        let fr = restricted(rs, f);
        if !excluded_coeffs
            .iter()
            .any(|c| rational::positively_proportional(c, &fr))
        {
            return Err(Error::Falsification(format!(
                "exponent {} is not resonant with an excluded class",
                rational::fmt_vec(&f.coords, ",")
            )));
        }
        debug_assert!(f.eval(&witness) < num::zero());
    }
    Ok(report(Verdict::VolumeContradiction, Some(witness)))
}
