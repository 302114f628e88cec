//! Irreducible (restricted) root systems in their standard ambient
//! realizations.
//!
//! Roots are stored once, in a fixed order: the positive roots sorted by
//! height (and, within a height, by descending simple-root coefficients),
//! followed by the negative roots in the same order. For a root with index
//! `i < N` its negative has index `i + N`, where `N` is the number of
//! positive roots.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Sign};
use crate::rational::{self, q, ratio, Vector, Q};
use crate::rootset::{RootSet, MAX_ROOTS};

/// Largest rank accepted for the classical families.
pub const MAX_CLASSICAL_RANK: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    BC,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::BC,
        Family::E6,
        Family::E7,
        Family::E8,
        Family::F4,
        Family::G2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::BC => "BC",
            Family::E6 => "E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
            Family::F4 => "F4",
            Family::G2 => "G2",
        }
    }

    pub fn fixed_rank(self) -> Option<usize> {
        match self {
            Family::E6 => Some(6),
            Family::E7 => Some(7),
            Family::E8 => Some(8),
            Family::F4 => Some(4),
            Family::G2 => Some(2),
            _ => None,
        }
    }

    pub fn min_rank(self) -> usize {
        match self {
            Family::A | Family::BC => 1,
            Family::B | Family::C => 2,
            Family::D => 4,
            f => f.fixed_rank().unwrap(),
        }
    }

    pub fn is_reduced(self) -> bool {
        self != Family::BC
    }

    /// Families whose averaging step uses the second highest root.
    pub fn uses_second_highest(self) -> bool {
        matches!(
            self,
            Family::C | Family::BC | Family::E8 | Family::F4 | Family::G2
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == up)
            .ok_or_else(|| Error::Parse(format!("unknown root system family {s:?}")))
    }
}

/// Family together with a validated rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootSystemType {
    family: Family,
    rank: usize,
}

impl RootSystemType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let expected = match family.fixed_rank() {
            Some(r) if r == rank => None,
            Some(r) => Some(format!("rank {r}")),
            None if rank < family.min_rank() || rank > MAX_CLASSICAL_RANK => Some(format!(
                "{} <= rank <= {MAX_CLASSICAL_RANK}",
                family.min_rank()
            )),
            None => None,
        };
        match expected {
            Some(expected) => Err(Error::InvalidRank {
                family: family.to_string(),
                rank,
                expected,
            }),
            None => Ok(RootSystemType { family, rank }),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Every irreducible type with rank in `min_rank..=max_rank`.
    pub fn all_up_to(min_rank: usize, max_rank: usize) -> Vec<RootSystemType> {
        let mut out = Vec::new();
        for family in Family::ALL {
            for rank in min_rank..=max_rank {
                if let Ok(t) = RootSystemType::new(family, rank) {
                    out.push(t);
                }
            }
        }
        out
    }

    /// `|roots|` by the classical formulas.
    pub fn expected_root_count(&self) -> usize {
        let l = self.rank;
        match self.family {
            Family::A => l * (l + 1),
            Family::B | Family::C => 2 * l * l,
            Family::D => 2 * l * (l - 1),
            Family::BC => 2 * l * l + 2 * l,
            Family::E6 => 72,
            Family::E7 => 126,
            Family::E8 => 240,
            Family::F4 => 48,
            Family::G2 => 12,
        }
    }

    pub fn weyl_order(&self) -> u64 {
        let l = self.rank as u64;
        let fact = |n: u64| (1..=n).product::<u64>();
        match self.family {
            Family::A => fact(l + 1),
            Family::B | Family::C | Family::BC => (1 << l) * fact(l),
            Family::D => (1 << (l - 1)) * fact(l),
            Family::E6 => 51_840,
            Family::E7 => 2_903_040,
            Family::E8 => 696_729_600,
            Family::F4 => 1_152,
            Family::G2 => 12,
        }
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family.fixed_rank() {
            Some(_) => write!(f, "{}", self.family),
            None => write!(f, "{}{}", self.family, self.rank),
        }
    }
}

impl FromStr for RootSystemType {
    type Err = Error;

    /// Accepts `A3`, `BC2`, `E8`, `G2`, ...
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let up = s.to_ascii_uppercase();
        for fam in [Family::E6, Family::E7, Family::E8, Family::F4, Family::G2] {
            if up == fam.as_str() {
                return RootSystemType::new(fam, fam.fixed_rank().unwrap());
            }
        }
        let split = up
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| Error::Parse(format!("missing rank in {s:?}")))?;
        let family: Family = up[..split].parse()?;
        let rank: usize = up[split..]
            .parse()
            .map_err(|_| Error::Parse(format!("bad rank in {s:?}")))?;
        RootSystemType::new(family, rank)
    }
}

/// A root as an exact vector in the ambient space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    pub coords: Vector,
}

/// Exact linear functional on the Cartan subspace, written in ambient
/// coordinates and evaluated by the standard dot product. Components
/// orthogonal to the span of the roots do not affect evaluation on Cartan
/// elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Functional {
    #[serde(with = "rational::serde_q")]
    pub coords: Vector,
}

/// Exact element of the Cartan subspace (the span of the roots).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanElement {
    #[serde(with = "rational::serde_q")]
    pub coords: Vector,
}

impl Functional {
    pub fn new(coords: Vector) -> Self {
        Functional { coords }
    }

    pub fn eval(&self, s: &CartanElement) -> Q {
        rational::dot(&self.coords, &s.coords)
    }

    pub fn scaled(&self, c: &Q) -> Self {
        Functional::new(rational::scale(c, &self.coords))
    }
}

impl From<&Root> for Functional {
    fn from(r: &Root) -> Self {
        Functional::new(r.coords.clone())
    }
}

impl CartanElement {
    pub fn new(coords: Vector) -> Self {
        CartanElement { coords }
    }
}

/// Coarse class: roots equal up to positive scaling.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoarseRoot {
    /// Root indices, ascending; one or two entries.
    pub members: Vec<usize>,
}

impl CoarseRoot {
    pub fn representative(&self) -> usize {
        self.members[0]
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    ty: RootSystemType,
    dim: usize,
    roots: Vec<Root>,
    coeffs: Vec<Vec<i64>>,
    heights: Vec<i64>,
    n_pos: usize,
    simple: Vec<usize>,
    bourbaki: Vec<usize>,
    lookup: HashMap<Vec<i64>, usize>,
    sums: Vec<Option<u16>>,
    class_of: Vec<usize>,
    classes: Vec<CoarseRoot>,
    gram: Vec<Vector>,
    gram_inv: Vec<Vector>,
    coweights: Vec<Vector>,
}

/// Ambient dimension, roots and Bourbaki-ordered simple roots.
fn realization(ty: RootSystemType) -> (usize, Vec<Vector>, Vec<Vector>) {
    let l = ty.rank();
    let e = |n: usize, i: usize| rational::unit(n, i);
    let pm_pairs = |n: usize, m: usize| {
        let mut out = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let mut v = rational::zeros(n);
                    v[i] = q(a);
                    v[j] = q(b);
                    out.push(v);
                }
            }
        }
        out
    };
    let singles = |n: usize, c: i64| -> Vec<Vector> {
        (0..n)
            .flat_map(|i| [rational::scale(&q(c), &e(n, i)), rational::scale(&q(-c), &e(n, i))])
            .collect()
    };
    let chain = |n: usize, k: usize| -> Vec<Vector> {
        (0..k).map(|i| rational::sub(&e(n, i), &e(n, i + 1))).collect()
    };
    match ty.family() {
        Family::A => {
            let n = l + 1;
            let mut roots = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        roots.push(rational::sub(&e(n, i), &e(n, j)));
                    }
                }
            }
            (n, roots, chain(n, l))
        }
        Family::B | Family::C | Family::BC => {
            let mut roots = pm_pairs(l, l);
            let mut simple = chain(l, l - 1);
            match ty.family() {
                Family::B => {
                    roots.extend(singles(l, 1));
                    simple.push(e(l, l - 1));
                }
                Family::C => {
                    roots.extend(singles(l, 2));
                    simple.push(rational::scale(&q(2), &e(l, l - 1)));
                }
                _ => {
                    roots.extend(singles(l, 1));
                    roots.extend(singles(l, 2));
                    simple.push(e(l, l - 1));
                }
            }
            (l, roots, simple)
        }
        Family::D => {
            let mut simple = chain(l, l - 1);
            simple.push(rational::add(&e(l, l - 2), &e(l, l - 1)));
            (l, pm_pairs(l, l), simple)
        }
        Family::G2 => {
            let mut roots = Vec::new();
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        roots.push(rational::sub(&e(3, i), &e(3, j)));
                    }
                }
                let mut long = rational::from_ints(&[-1, -1, -1]);
                long[i] = q(2);
                roots.push(rational::scale(&q(-1), &long));
                roots.push(long);
            }
            let simple = vec![rational::from_ints(&[1, -1, 0]), rational::from_ints(&[-2, 1, 1])];
            (3, roots, simple)
        }
        Family::F4 => {
            let mut roots = pm_pairs(4, 4);
            roots.extend(singles(4, 1));
            for mask in 0..16u32 {
                roots.push(
                    (0..4)
                        .map(|i| if mask >> i & 1 == 1 { ratio(-1, 2) } else { ratio(1, 2) })
                        .collect(),
                );
            }
            let h = ratio(1, 2);
            let simple = vec![
                rational::from_ints(&[0, 1, -1, 0]),
                rational::from_ints(&[0, 0, 1, -1]),
                rational::from_ints(&[0, 0, 0, 1]),
                vec![h.clone(), -h.clone(), -h.clone(), -h],
            ];
            (4, roots, simple)
        }
        Family::E6 | Family::E7 | Family::E8 => {
            let mut roots = pm_pairs(8, 8);
            for mask in 0..256u32 {
                if mask.count_ones() % 2 == 0 {
                    roots.push(
                        (0..8)
                            .map(|i| if mask >> i & 1 == 1 { ratio(-1, 2) } else { ratio(1, 2) })
                            .collect(),
                    );
                }
            }
            let h = ratio(1, 2);
            let mut simple = vec![
                (0..8)
                    .map(|i| if i == 0 || i == 7 { h.clone() } else { -h.clone() })
                    .collect::<Vector>(),
                rational::add(&e(8, 0), &e(8, 1)),
            ];
            for i in 0..6 {
                simple.push(rational::sub(&e(8, i + 1), &e(8, i)));
            }
            let e78 = rational::add(&e(8, 6), &e(8, 7));
            let e68 = rational::add(&e(8, 5), &e(8, 7));
            let keep = |v: &Vector| match ty.family() {
                Family::E8 => true,
                Family::E7 => rational::dot(v, &e78).is_zero(),
                _ => rational::dot(v, &e78).is_zero() && rational::dot(v, &e68).is_zero(),
            };
            roots.retain(keep);
            simple.truncate(l);
            (8, roots, simple)
        }
    }
}

/// Orientation properties for a candidate first node `k` (Bourbaki index):
/// `target + a_j` is never a root for `j != k`, and a chain of roots leads
/// from `a_k` to `target` by adding the other simple roots.
fn orientation_ok(
    coeffs: &[Vec<i64>],
    lookup: &HashMap<Vec<i64>, usize>,
    k: usize,
    target: usize,
) -> bool {
    let l = coeffs[0].len();
    let commutes = (0..l).filter(|&j| j != k).all(|j| {
        let mut c = coeffs[target].clone();
        c[j] += 1;
        !lookup.contains_key(&c)
    });
    commutes && string_search(coeffs, lookup, k, target).is_some()
}

/// Breadth-first search from the simple root `k` to `target`, adding simple
/// roots other than `k`.
pub(crate) fn string_search(
    coeffs: &[Vec<i64>],
    lookup: &HashMap<Vec<i64>, usize>,
    k: usize,
    target: usize,
) -> Option<Vec<usize>> {
    let l = coeffs[0].len();
    let mut start = vec![0; l];
    start[k] = 1;
    let start = *lookup.get(&start)?;
    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut queue = std::collections::VecDeque::from([start]);
    prev.insert(start, start);
    while let Some(cur) = queue.pop_front() {
        if cur == target {
            let mut path = vec![cur];
            let mut at = cur;
            while at != start {
                at = prev[&at];
                path.push(at);
            }
            path.reverse();
            return Some(path);
        }
        for j in (0..l).filter(|&j| j != k) {
            let mut c = coeffs[cur].clone();
            c[j] += 1;
            if let Some(&next) = lookup.get(&c) {
                if let std::collections::hash_map::Entry::Vacant(v) = prev.entry(next) {
                    v.insert(cur);
                    queue.push_back(next);
                }
            }
        }
    }
    None
}

fn coefficients_in(basis_gram_inv: &[Vector], basis: &[Vector], v: &[Q]) -> Vector {
    let b: Vector = basis.iter().map(|a| rational::dot(v, a)).collect();
    linalg::mat_vec(basis_gram_inv, &b)
}

fn gram_of(basis: &[Vector]) -> Vec<Vector> {
    basis
        .iter()
        .map(|a| basis.iter().map(|b| rational::dot(a, b)).collect())
        .collect()
}

fn highest_of(heights: &[i64]) -> (usize, i64) {
    let (i, h) = heights
        .iter()
        .enumerate()
        .max_by_key(|(_, h)| **h)
        .expect("non-empty root system");
    (i, *h)
}

/// Builds the root system of the given type in its standard realization.
///
/// The simple roots are the Bourbaki ones, reordered so that the first is the
/// node from which the orientation properties hold (see
/// [`RootSystem::bourbaki_label`]).
///
/// Results are memoized per type for the life of the process.
pub fn build_root_system(ty: RootSystemType) -> Result<RootSystem> {
    static CACHE: OnceLock<Mutex<HashMap<RootSystemType, RootSystem>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rs) = cache.lock().expect("cache lock").get(&ty) {
        return Ok(rs.clone());
    }
    let rs = construct(ty)?;
    cache.lock().expect("cache lock").insert(ty, rs.clone());
    Ok(rs)
}

fn construct(ty: RootSystemType) -> Result<RootSystem> {
    let (dim, ambient, bourbaki_simple) = realization(ty);
    let l = ty.rank();
    if ambient.len() > MAX_ROOTS {
        return Err(Error::Capability(format!(
            "{ty} has {} roots, more than the supported {MAX_ROOTS}",
            ambient.len()
        )));
    }
    let gram = gram_of(&bourbaki_simple);
    let gram_inv = linalg::inverse(&gram).expect("simple roots are linearly independent");

    let mut bcoeffs: Vec<Vec<i64>> = Vec::with_capacity(ambient.len());
    for v in &ambient {
        let c = coefficients_in(&gram_inv, &bourbaki_simple, v);
        let ints: Vec<i64> = c
            .iter()
            .map(|x| {
                assert!(x.is_integer(), "non-integral simple-root coefficient in {ty}");
                x.to_integer().to_i64().unwrap()
            })
            .collect();
        let nonneg = ints.iter().all(|&x| x >= 0);
        let nonpos = ints.iter().all(|&x| x <= 0);
        assert!(nonneg || nonpos, "root of mixed sign in {ty}");
        bcoeffs.push(ints);
    }
    let blookup: HashMap<Vec<i64>, usize> =
        bcoeffs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let bheights: Vec<i64> = bcoeffs.iter().map(|c| c.iter().sum()).collect();

    let (top, top_h) = highest_of(&bheights);
    let target = if ty.family().uses_second_highest() {
        let next: Vec<usize> = (0..ambient.len()).filter(|&i| bheights[i] == top_h - 1).collect();
        if next.len() != 1 {
            return Err(Error::AmbiguousSecondHighest {
                height: top_h - 1,
                count: next.len(),
            });
        }
        next[0]
    } else {
        top
    };
    let first = if l == 1 {
        0
    } else {
        (0..l)
            .find(|&k| orientation_ok(&bcoeffs, &blookup, k, target))
            .ok_or_else(|| Error::Orientation(format!("no simple root of {ty} satisfies the orientation properties")))?
    };
    // oriented index -> Bourbaki index
    let order: Vec<usize> = if first == 0 {
        (0..l).collect()
    } else if first == l - 1 {
        (0..l).rev().collect()
    } else {
        std::iter::once(first).chain((0..l).filter(|&j| j != first)).collect()
    };

    let mut entries: Vec<(Vec<i64>, Vector)> = bcoeffs
        .iter()
        .zip(ambient)
        .map(|(c, v)| (order.iter().map(|&b| c[b]).collect(), v))
        .collect();
    let sort_key = |c: &Vec<i64>| (c.iter().sum::<i64>(), std::cmp::Reverse(c.clone()));
    let mut pos: Vec<(Vec<i64>, Vector)> = entries
        .drain(..)
        .filter(|(c, _)| c.iter().sum::<i64>() > 0)
        .collect();
    pos.sort_by_key(|(c, _)| sort_key(c));
    let n_pos = pos.len();
    let neg: Vec<(Vec<i64>, Vector)> = pos
        .iter()
        .map(|(c, v)| (c.iter().map(|x| -x).collect(), rational::scale(&q(-1), v)))
        .collect();
    let all: Vec<(Vec<i64>, Vector)> = pos.into_iter().chain(neg).collect();

    let coeffs: Vec<Vec<i64>> = all.iter().map(|(c, _)| c.clone()).collect();
    let roots: Vec<Root> = all.into_iter().map(|(_, v)| Root { coords: v }).collect();
    let heights: Vec<i64> = coeffs.iter().map(|c| c.iter().sum()).collect();
    let lookup: HashMap<Vec<i64>, usize> =
        coeffs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let simple: Vec<usize> = (0..l)
        .map(|j| lookup[&rational_unit_i64(l, j)])
        .collect();

    let n = roots.len();
    let mut sums = vec![None; n * n];
    for i in 0..n {
        for j in 0..n {
            let c: Vec<i64> = coeffs[i].iter().zip(&coeffs[j]).map(|(a, b)| a + b).collect();
            sums[i * n + j] = lookup.get(&c).map(|&k| k as u16);
        }
    }

    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let doubled: Vec<i64> = coeffs[i].iter().map(|x| 2 * x).collect();
        let mut members = vec![i];
        if let Some(&d) = lookup.get(&doubled) {
            members.push(d);
        }
        members.sort_unstable();
        for &m in &members {
            class_of[m] = classes.len();
        }
        classes.push(CoarseRoot { members });
    }

    let simple_vecs: Vec<Vector> = simple.iter().map(|&i| roots[i].coords.clone()).collect();
    let gram = gram_of(&simple_vecs);
    let gram_inv = linalg::inverse(&gram).expect("simple roots are linearly independent");
    let coweights: Vec<Vector> = (0..l)
        .map(|i| {
            (0..l).fold(rational::zeros(dim), |acc, k| {
                rational::axpy(&acc, &gram_inv[i][k], &simple_vecs[k])
            })
        })
        .collect();

    Ok(RootSystem {
        ty,
        dim,
        roots,
        coeffs,
        heights,
        n_pos,
        simple,
        bourbaki: order.iter().map(|b| b + 1).collect(),
        lookup,
        sums,
        class_of,
        classes,
        gram,
        gram_inv,
        coweights,
    })
}

fn rational_unit_i64(l: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; l];
    v[j] = 1;
    v
}

impl RootSystem {
    pub fn ty(&self) -> RootSystemType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.n_pos
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    /// Coefficients of root `i` over the (oriented) simple roots.
    pub fn coefficients(&self, i: usize) -> &[i64] {
        &self.coeffs[i]
    }

    pub fn height(&self, i: usize) -> i64 {
        self.heights[i]
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.n_pos
    }

    pub fn negation(&self, i: usize) -> usize {
        if i < self.n_pos {
            i + self.n_pos
        } else {
            i - self.n_pos
        }
    }

    /// Root indices of the simple roots `a_1, ..., a_l`.
    pub fn simple_roots(&self) -> &[usize] {
        &self.simple
    }

    /// Root index of the simple root `a_{j+1}` (zero-based `j`).
    pub fn simple(&self, j: usize) -> usize {
        self.simple[j]
    }

    /// Bourbaki label (1-based) of the oriented simple root `j` (zero-based).
    pub fn bourbaki_label(&self, j: usize) -> usize {
        self.bourbaki[j]
    }

    pub fn index_of_coefficients(&self, c: &[i64]) -> Option<usize> {
        self.lookup.get(c).copied()
    }

    /// Index of the root with the given ambient coordinates, if any.
    pub fn find(&self, coords: &[Q]) -> Option<usize> {
        if coords.len() != self.dim {
            return None;
        }
        let c = self.pi_coords(coords);
        if !c.iter().all(|x| x.is_integer()) {
            return None;
        }
        let ints: Vec<i64> = c.iter().map(|x| x.to_integer().to_i64().unwrap()).collect();
        let i = self.index_of_coefficients(&ints)?;
        (self.roots[i].coords == coords).then_some(i)
    }

    /// Index of `root_i + root_j` when that sum is a root.
    pub fn sum(&self, i: usize, j: usize) -> Option<usize> {
        self.sums[i * self.roots.len() + j].map(usize::from)
    }

    pub fn inner(&self, a: &[Q], b: &[Q]) -> Q {
        rational::dot(a, b)
    }

    /// `2(b, a)/(a, a)`.
    pub fn pairing(&self, b: usize, a: usize) -> Q {
        let ra = &self.roots[a].coords;
        q(2) * rational::dot(&self.roots[b].coords, ra) / rational::dot(ra, ra)
    }

    /// Gram matrix of the oriented simple roots.
    pub fn gram(&self) -> &[Vector] {
        &self.gram
    }

    /// Cartan matrix `a_ij = 2(a_i, a_j)/(a_j, a_j)`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let l = self.rank();
        (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| {
                        let v = q(2) * &self.gram[i][j] / &self.gram[j][j];
                        v.to_integer().to_i64().unwrap()
                    })
                    .collect()
            })
            .collect()
    }

    /// Dynkin diagram edges `(i, j, bond)` with zero-based `i < j`.
    pub fn dynkin_edges(&self) -> Vec<(usize, usize, i64)> {
        let a = self.cartan_matrix();
        let l = self.rank();
        (0..l)
            .flat_map(|i| (i + 1..l).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .map(|(i, j)| (i, j, a[i][j] * a[j][i]))
            .collect()
    }

    /// Fundamental coweights: the Cartan elements dual to the simple roots.
    pub fn coweights(&self) -> &[Vector] {
        &self.coweights
    }

    /// Coefficients over the simple roots of the projection of `v` onto the
    /// span of the roots. For a functional these are its values on the
    /// fundamental coweights.
    pub fn pi_coords(&self, v: &[Q]) -> Vector {
        let simple: Vec<Vector> = self.simple.iter().map(|&i| self.roots[i].coords.clone()).collect();
        coefficients_in(&self.gram_inv, &simple, v)
    }

    /// Whether `f` vanishes identically on the Cartan subspace.
    pub fn is_zero_functional(&self, f: &Functional) -> bool {
        rational::is_zero(&self.pi_coords(&f.coords))
    }

    pub fn check_dim(&self, v: &[Q]) -> Result<()> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            })
        }
    }

    /// Cartan element `sum_i y_i w_i` over the fundamental coweights.
    pub fn cartan_from_coweight_coords(&self, y: &[Q]) -> CartanElement {
        let s = y
            .iter()
            .zip(&self.coweights)
            .fold(rational::zeros(self.dim), |acc, (yi, w)| rational::axpy(&acc, yi, w));
        CartanElement::new(s)
    }

    /// Decides existence of a Cartan element with the demanded signs,
    /// returning the primitive integer witness on the ray found.
    pub fn feasible_cartan(&self, constraints: &[(Functional, Sign)]) -> Option<CartanElement> {
        let rows: Vec<(Vector, Sign)> = constraints
            .iter()
            .map(|(f, s)| (self.pi_coords(&f.coords), *s))
            .collect();
        let y = linalg::strict_feasibility(self.rank(), &rows)?;
        let s = self.cartan_from_coweight_coords(&y);
        Some(CartanElement::new(rational::primitive_integer(&s.coords)))
    }

    pub fn classes(&self) -> &[CoarseRoot] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn class_roots(&self, c: usize) -> RootSet {
        self.classes[c].members.iter().copied().collect()
    }

    pub fn all_roots(&self) -> RootSet {
        RootSet::full(self.roots.len())
    }

    pub fn positive_roots(&self) -> RootSet {
        RootSet::full(self.n_pos)
    }

    pub fn negative_roots(&self) -> RootSet {
        self.all_roots().difference(&self.positive_roots())
    }

    /// Adds every root coarsely equivalent to a member.
    pub fn saturate(&self, set: &RootSet) -> RootSet {
        set.iter()
            .flat_map(|i| self.classes[self.class_of[i]].members.iter().copied())
            .collect()
    }

    pub fn is_saturated(&self, set: &RootSet) -> bool {
        self.saturate(set) == *set
    }

    /// Classes all of whose members lie in `set`.
    pub fn classes_in(&self, set: &RootSet) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&c| self.classes[c].members.iter().all(|&m| set.contains(m)))
            .collect()
    }

    /// Smallest saturated superset of `set` closed under root addition.
    pub fn closure(&self, set: &RootSet) -> RootSet {
        let mut cur = self.saturate(set);
        loop {
            let mut next = cur;
            for i in cur.iter() {
                for j in cur.iter() {
                    if let Some(k) = self.sum(i, j) {
                        next.insert(k);
                    }
                }
            }
            let next = self.saturate(&next);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    pub fn is_closed(&self, set: &RootSet) -> bool {
        set.iter().all(|i| {
            set.iter()
                .all(|j| self.sum(i, j).is_none_or(|k| set.contains(k)))
        })
    }

    pub fn set_from_classes(&self, classes: &[usize]) -> RootSet {
        classes
            .iter()
            .flat_map(|&c| self.classes[c].members.iter().copied())
            .collect()
    }

    /// Whether root `i` lies in the span of the given simple roots
    /// (zero-based indices).
    pub fn in_simple_span(&self, i: usize, simple: &[usize]) -> bool {
        self.coeffs[i]
            .iter()
            .enumerate()
            .all(|(j, &c)| c == 0 || simple.contains(&j))
    }

    /// The unique root dominating every other root coefficientwise.
    pub fn highest_root(&self) -> usize {
        let (top, _) = highest_of(&self.heights);
        assert!(
            (0..self.roots.len()).all(|i| self.coeffs[top]
                .iter()
                .zip(&self.coeffs[i])
                .all(|(a, b)| a >= b)),
            "highest root of {} does not dominate",
            self.ty
        );
        top
    }

    /// The unique root of height one less than the highest root.
    pub fn second_highest_root(&self) -> Result<usize> {
        let h = self.heights[self.highest_root()] - 1;
        let at: Vec<usize> = (0..self.roots.len()).filter(|&i| self.heights[i] == h).collect();
        match at.as_slice() {
            [one] if h > 0 => Ok(*one),
            _ => Err(Error::AmbiguousSecondHighest {
                height: h,
                count: at.len(),
            }),
        }
    }

    /// Chain `a_1 = b_0, ..., b_p = to` with consecutive differences among
    /// `a_2, ..., a_l`, found by breadth-first search.
    pub fn root_string_from_first(&self, to: usize) -> Option<Vec<usize>> {
        string_search(&self.coeffs, &self.lookup, 0, to)
    }

    /// Formats root `i` by its simple-root coefficients, e.g. `1,0,2`.
    pub fn fmt_coeffs(&self, i: usize) -> String {
        self.coeffs[i]
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Value of a functional on the first fundamental coweight; nonzero
    /// exactly when the functional is outside the span of `a_2, ..., a_l`.
    pub fn first_coweight_pairing(&self, f: &Functional) -> Q {
        rational::dot(&f.coords, &self.coweights[0])
    }
}

/// Convenience: builds the system from a family and rank.
pub fn root_system(family: Family, rank: usize) -> Result<RootSystem> {
    build_root_system(RootSystemType::new(family, rank)?)
}
