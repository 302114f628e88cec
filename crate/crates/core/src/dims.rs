//! Critical dimensions of semisimple groups given by the restricted root
//! systems of their simple factors.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::parabolic;
use crate::roots::{root_system, Family, RootSystemType, MAX_CLASSICAL_RANK};

/// A semisimple group as a list of simple factors; `true` marks a compact
/// factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub factors: Vec<(RootSystemType, bool)>,
}

impl GroupSpec {
    pub fn new(factors: Vec<(RootSystemType, bool)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Precondition("a group needs at least one factor".into()));
        }
        Ok(GroupSpec { factors })
    }

    pub fn noncompact(&self) -> impl Iterator<Item = RootSystemType> + '_ {
        self.factors.iter().filter(|(_, c)| !c).map(|(t, _)| *t)
    }
}

/// Grammar: comma-separated `<family><rank>[*]`, e.g. `A3,A1*`.
impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .split(',')
            .map(|part| {
                let part = part.trim();
                let (body, compact) = match part.strip_suffix('*') {
                    Some(b) => (b, true),
                    None => (part, false),
                };
                Ok((body.parse::<RootSystemType>()?, compact))
            })
            .collect::<Result<Vec<_>>>()?;
        GroupSpec::new(factors)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(t, c)| format!("{t}{}", if *c { "*" } else { "" }))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Minimal resonant codimension over the non-compact factors.
pub fn r_of(spec: &GroupSpec) -> Result<usize> {
    spec.noncompact()
        .map(|t| Ok(parabolic::minimal_resonant_codimension(&crate::build_root_system(t)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .ok_or_else(|| Error::Undefined("r(G) needs a non-compact factor".into()))
}

/// Minimal codimension of a maximal parabolic of the split group of type
/// `ty`, counted in roots.
pub fn v_of_split(ty: RootSystemType) -> Result<usize> {
    if !ty.family().is_reduced() {
        return Err(Error::Undefined(format!("{ty} is not the root system of a split group")));
    }
    let rs = crate::build_root_system(ty)?;
    Ok((0..rs.rank())
        .map(|j| rs.num_roots() - parabolic::maximal_parabolic(&rs, j).roots().len())
        .min()
        .expect("rank >= 1"))
}

/// Complex dimension of the simple Lie algebra with reduced root system
/// `ty`.
pub fn complex_dimension(ty: RootSystemType) -> Result<usize> {
    if !ty.family().is_reduced() {
        return Err(Error::Undefined(format!("{ty} has no complex simple algebra of that type")));
    }
    Ok(ty.expected_root_count() + ty.rank())
}

/// Least `k` with `k(k+1)/2 >= d_tilde`.
pub fn d_prime_of(d_tilde: usize) -> Result<usize> {
    if d_tilde == 0 {
        return Err(Error::Precondition("d~ must be at least 1".into()));
    }
    Ok((1..).find(|k| k * (k + 1) / 2 >= d_tilde).expect("unbounded range"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Computed,
    Table,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Computed => "computed",
            Source::Table => "table",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Sourced {
    pub value: usize,
    pub source: Source,
}

fn computed(value: usize) -> Sourced {
    Sourced {
        value,
        source: Source::Computed,
    }
}

fn table(value: usize) -> Sourced {
    Sourced {
        value,
        source: Source::Table,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub group: String,
    pub r: Sourced,
    pub v: Option<Sourced>,
    pub n: Option<Sourced>,
    pub d: Option<Sourced>,
    pub d_prime: Option<Sourced>,
}

/// Report computed from the factor list alone: `r`, and when every factor
/// is split also `v` and `d'`.
pub fn report_for(spec: &GroupSpec) -> Result<DimensionReport> {
    let r = r_of(spec)?;
    let all_reduced = spec.factors.iter().all(|(t, _)| t.family().is_reduced());
    let v = if all_reduced {
        Some(computed(
            spec.noncompact().map(v_of_split).collect::<Result<Vec<_>>>()?.into_iter().min().expect("non-compact factor"),
        ))
    } else {
        None
    };
    let d_prime = if all_reduced {
        let d_tilde = spec
            .factors
            .iter()
            .map(|(t, _)| complex_dimension(*t))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .expect("at least one factor");
        Some(computed(d_prime_of(d_tilde)?))
    } else {
        None
    };
    Ok(DimensionReport {
        group: spec.to_string(),
        r: computed(r),
        v,
        n: None,
        d: None,
        d_prime,
    })
}

/// Group families with tabulated critical dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedFamily {
    /// `SL(n, R)`
    Sl,
    /// `Sp(2n, R)`
    Sp,
    /// `SO(n, n)`
    SoSplitEven,
    /// `SO(n, n+1)`
    SoSplitOdd,
}

impl NamedFamily {
    pub const ALL: [NamedFamily; 4] = [
        NamedFamily::Sl,
        NamedFamily::Sp,
        NamedFamily::SoSplitEven,
        NamedFamily::SoSplitOdd,
    ];

    pub fn name(self, n: usize) -> String {
        match self {
            NamedFamily::Sl => format!("SL({n},R)"),
            NamedFamily::Sp => format!("Sp({},R)", 2 * n),
            NamedFamily::SoSplitEven => format!("SO({n},{n})"),
            NamedFamily::SoSplitOdd => format!("SO({n},{})", n + 1),
        }
    }

    /// Parameter range covered by the table, limited by the supported rank.
    pub fn range(self) -> std::ops::RangeInclusive<usize> {
        match self {
            NamedFamily::Sl => 3..=MAX_CLASSICAL_RANK + 1,
            NamedFamily::Sp => 2..=MAX_CLASSICAL_RANK,
            NamedFamily::SoSplitEven => 4..=MAX_CLASSICAL_RANK,
            NamedFamily::SoSplitOdd => 3..=MAX_CLASSICAL_RANK,
        }
    }

    pub fn root_system_type(self, n: usize) -> Result<RootSystemType> {
        match self {
            NamedFamily::Sl => RootSystemType::new(Family::A, n - 1),
            NamedFamily::Sp => RootSystemType::new(Family::C, n),
            NamedFamily::SoSplitEven => RootSystemType::new(Family::D, n),
            NamedFamily::SoSplitOdd => RootSystemType::new(Family::B, n),
        }
    }
}

impl FromStr for NamedFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sl" => Ok(NamedFamily::Sl),
            "sp" => Ok(NamedFamily::Sp),
            "so-even" | "so(n,n)" => Ok(NamedFamily::SoSplitEven),
            "so-odd" | "so(n,n+1)" => Ok(NamedFamily::SoSplitOdd),
            _ => Err(Error::Parse(format!("unknown group family {s:?}"))),
        }
    }
}

/// Tabulated values `(n(G), d(G), d'(G), v(G), r(G))`.
fn table_row(family: NamedFamily, n: usize) -> (usize, Option<usize>, Option<usize>, usize, usize) {
    match family {
        NamedFamily::Sl => (n, None, None, n - 1, n - 1),
        NamedFamily::Sp => (2 * n, None, None, 2 * n - 1, 2 * n - 1),
        NamedFamily::SoSplitEven => (2 * n, Some(2 * n - 1), Some(2 * n - 1), 2 * n - 2, 2 * n - 2),
        NamedFamily::SoSplitOdd => (2 * n + 1, Some(2 * n), Some(2 * n), 2 * n - 1, 2 * n - 1),
    }
}

/// Table-driven report. `r` and `v` are recomputed and must agree with the
/// table; `d'` is computed when the table has no entry.
pub fn known_dims(family: NamedFamily, n: usize) -> Result<DimensionReport> {
    if !family.range().contains(&n) {
        return Err(Error::OutOfTable(format!(
            "{} is outside the tabulated range {:?}",
            family.name(n),
            family.range()
        )));
    }
    let ty = family.root_system_type(n)?;
    let (n_g, d, d_prime, v, r) = table_row(family, n);
    let spec = GroupSpec::new(vec![(ty, false)])?;
    let r_computed = r_of(&spec)?;
    if r_computed != r {
        return Err(Error::Falsification(format!(
            "{}: tabulated r = {r}, computed {r_computed}",
            family.name(n)
        )));
    }
    let v_computed = v_of_split(ty)?;
    if v_computed != v {
        return Err(Error::Falsification(format!(
            "{}: tabulated v = {v}, computed {v_computed}",
            family.name(n)
        )));
    }
    let d_prime_computed = d_prime_of(complex_dimension(ty)?)?;
    if d_prime.is_some_and(|t| t != d_prime_computed) {
        return Err(Error::Falsification(format!(
            "{}: tabulated d' = {}, computed {d_prime_computed}",
            family.name(n),
            d_prime.unwrap_or_default()
        )));
    }
    Ok(DimensionReport {
        group: family.name(n),
        r: computed(r_computed),
        v: Some(table(v)),
        n: Some(table(n_g)),
        d: d.map(table),
        d_prime: Some(d_prime.map_or_else(|| computed(d_prime_computed), table)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Clause {
    /// `dim M < r(G)`
    StrictlyBelow,
    /// `dim M = r(G)` with an invariant volume
    EqualWithVolume,
}

impl Clause {
    pub fn number(self) -> u8 {
        match self {
            Clause::StrictlyBelow => 1,
            Clause::EqualWithVolume => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisVerdict {
    pub r: usize,
    pub dim_m: usize,
    pub volume_preserving: bool,
    /// `None` when neither clause holds or a rank-1 factor is present.
    pub clause: Option<Clause>,
    pub rank_one_factors: Vec<String>,
}

/// Which clause of the finiteness theorem's dimension hypothesis holds.
pub fn theorem_hypothesis(spec: &GroupSpec, dim_m: usize, volume_preserving: bool) -> Result<HypothesisVerdict> {
    let r = r_of(spec)?;
    let rank_one_factors: Vec<String> = spec
        .noncompact()
        .filter(|t| t.rank() < 2)
        .map(|t| t.to_string())
        .collect();
    let clause = if !rank_one_factors.is_empty() {
        None
    } else if dim_m < r {
        Some(Clause::StrictlyBelow)
    } else if dim_m == r && volume_preserving {
        Some(Clause::EqualWithVolume)
    } else {
        None
    };
    Ok(HypothesisVerdict {
        r,
        dim_m,
        volume_preserving,
        clause,
        rank_one_factors,
    })
}

/// Whether `r <= v` for the split type, computed.
pub fn r_at_most_v(ty: RootSystemType) -> Result<bool> {
    let rs = root_system(ty.family(), ty.rank())?;
    Ok(parabolic::minimal_resonant_codimension(&rs) <= v_of_split(ty)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn parse_spec_strings() {
        let g = spec("A3,A1*");
        assert_eq!(g.factors.len(), 2);
        assert!(g.factors[1].1);
        assert_eq!(g.to_string(), "A3,A1*");
        assert!("".parse::<GroupSpec>().is_err());
        assert!("D3".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn r_of_products() {
        assert_eq!(r_of(&spec("A3")).unwrap(), 3);
        assert_eq!(r_of(&spec("A3,A1")).unwrap(), 1);
        assert_eq!(r_of(&spec("A3,A5*")).unwrap(), 3);
        assert!(matches!(r_of(&spec("A3*")), Err(Error::Undefined(_))));
    }

    #[test]
    fn d_prime_values() {
        assert_eq!(d_prime_of(1).unwrap(), 1);
        assert_eq!(d_prime_of(2).unwrap(), 2);
        for k in 1..200 {
            assert_eq!(d_prime_of(k * (k + 1) / 2).unwrap(), k);
            assert_eq!(d_prime_of(k * (k + 1) / 2 + 1).unwrap(), k + 1);
        }
    }

    #[test]
    fn split_v_values() {
        for n in 2..=8 {
            let a = RootSystemType::new(Family::A, n - 1).unwrap();
            assert_eq!(v_of_split(a).unwrap(), n - 1);
            let c = RootSystemType::new(Family::C, n).unwrap();
            assert_eq!(v_of_split(c).unwrap(), 2 * n - 1);
        }
        assert!(v_of_split(RootSystemType::new(Family::BC, 2).unwrap()).is_err());
    }

    #[test]
    fn hypothesis_clauses() {
        let a2 = spec("A2");
        assert_eq!(theorem_hypothesis(&a2, 1, false).unwrap().clause, Some(Clause::StrictlyBelow));
        assert_eq!(theorem_hypothesis(&a2, 2, true).unwrap().clause, Some(Clause::EqualWithVolume));
        assert_eq!(theorem_hypothesis(&a2, 2, false).unwrap().clause, None);
        let mixed = theorem_hypothesis(&spec("A3,A1"), 0, false).unwrap();
        assert_eq!(mixed.clause, None);
        assert_eq!(mixed.rank_one_factors, vec!["A1".to_string()]);
    }

    #[test]
    fn out_of_table() {
        assert!(matches!(known_dims(NamedFamily::SoSplitEven, 3), Err(Error::OutOfTable(_))));
        assert!(matches!(known_dims(NamedFamily::Sl, 2), Err(Error::OutOfTable(_))));
    }
}
