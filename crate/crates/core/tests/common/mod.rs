#![allow(dead_code)]

use std::collections::HashSet;

use num::{BigRational, Zero};
use rescodim::{root_system, Family, RootSystem, RootSystemType, Vector, Q};

pub fn q(n: i64) -> Q {
    BigRational::from_integer(n.into())
}

pub fn qv(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| q(x)).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Q::zero(), |s, t| s + t)
}

/// Every type in scope with classical ranks `lo..=hi` plus the exceptional
/// types.
pub fn types(lo: usize, hi: usize) -> Vec<RootSystemType> {
    RootSystemType::all_up_to(lo, hi)
}

pub fn sys(f: Family, l: usize) -> RootSystem {
    root_system(f, l).unwrap()
}

/// Reflection of `v` in the hyperplane orthogonal to `a`.
pub fn reflect(a: &[Q], v: &[Q]) -> Vector {
    let c = q(2) * dot(v, a) / dot(a, a);
    v.iter().zip(a).map(|(x, y)| x - &c * y).collect()
}

/// Closure of the simple roots under all simple reflections.
pub fn reflection_closure(simple: &[Vector]) -> HashSet<Vector> {
    let mut seen: HashSet<Vector> = simple.iter().cloned().collect();
    let mut frontier: Vec<Vector> = simple.to_vec();
    while let Some(v) = frontier.pop() {
        for a in simple {
            let w = reflect(a, &v);
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    seen
}

pub fn classical_count(ty: RootSystemType) -> usize {
    let l = ty.rank();
    match ty.family() {
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

/// Closed forms for `r(g)` per simple type.
pub fn closed_form_r(ty: RootSystemType) -> usize {
    let n = ty.rank();
    match ty.family() {
        Family::A => n,
        Family::B | Family::C | Family::BC => 2 * n - 1,
        Family::D => 2 * n - 2,
        Family::E6 => 16,
        Family::E7 => 27,
        Family::E8 => 57,
        Family::F4 => 15,
        Family::G2 => 5,
    }
}
