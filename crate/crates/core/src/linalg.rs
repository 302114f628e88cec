//! Exact rational linear algebra: Gaussian elimination, span membership and
//! strict feasibility of homogeneous sign systems by Fourier–Motzkin
//! elimination.

use num::{One, Signed, Zero};

use crate::rational::{self, Vector, Q};

/// Reduced row echelon form in place. Returns the pivot columns.
pub fn row_reduce(rows: &mut [Vector]) -> Vec<usize> {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        rows[r] = rational::scale(&inv, &rows[r]);
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let c = -rows[i][col].clone();
                rows[i] = rational::axpy(&rows[i], &c, &rows[r]);
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(vectors: &[Vector]) -> usize {
    let mut rows = vectors.to_vec();
    row_reduce(&mut rows).len()
}

/// Whether `f` lies in the rational span of `vectors`.
pub fn span_contains(vectors: &[Vector], f: &[Q]) -> bool {
    if rational::is_zero(f) {
        return true;
    }
    let mut with = vectors.to_vec();
    with.push(f.to_vec());
    rank(vectors) == rank(&with)
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &[Vector]) -> Option<Vec<Vector>> {
    let n = m.len();
    let mut aug: Vec<Vector> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(rational::unit(n, i));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of `{x : row . x = 0 for every row}`.
pub fn null_space(rows: &[Vector], dim: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = rational::unit(dim, f);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn mat_vec(m: &[Vector], v: &[Q]) -> Vector {
    m.iter().map(|row| rational::dot(row, v)).collect()
}

/// Sign demanded of a linear form at the sought point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn holds(self, value: &Q) -> bool {
        match self {
            Sign::Negative => value.is_negative(),
            Sign::Zero => value.is_zero(),
            Sign::Positive => value.is_positive(),
        }
    }
}

/// One strict inequality `coeffs . t > 0` together with the set of original
/// constraints it was combined from.
#[derive(Clone, Debug)]
struct Row {
    coeffs: Vector,
    history: Vec<u64>,
}

impl Row {
    fn history_len(&self) -> u32 {
        self.history.iter().map(|w| w.count_ones()).sum()
    }
}

fn merge_history(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

/// Scales so the first nonzero coefficient has absolute value one.
fn normalize(v: &mut Vector) {
    if let Some(p) = v.iter().find(|x| !x.is_zero()).cloned() {
        let s = p.abs().recip();
        for x in v.iter_mut() {
            *x = &*x * &s;
        }
    }
}

/// Decides whether some `s` in `Q^dim` satisfies `sign(f_i . s)` for all
/// constraints, returning a witness when one exists.
///
/// Equalities are eliminated first by restricting to their joint kernel; the
/// remaining strict homogeneous system is handled by Fourier–Motzkin
/// elimination with Chernikov's redundancy rule. The returned witness is the
/// primitive integer vector on the ray found by back-substitution and has
/// been checked against every constraint.
pub fn strict_feasibility(dim: usize, constraints: &[(Vector, Sign)]) -> Option<Vector> {
    strict_feasibility_with(dim, constraints, true)
}

pub(crate) fn strict_feasibility_with(
    dim: usize,
    constraints: &[(Vector, Sign)],
    prune: bool,
) -> Option<Vector> {
    let equalities: Vec<Vector> = constraints
        .iter()
        .filter(|(_, s)| *s == Sign::Zero)
        .map(|(f, _)| f.clone())
        .collect();
    let kernel = null_space(&equalities, dim);
    let k = kernel.len();

    // Rewrite each strict constraint as g . t > 0 with s = sum t_i kernel_i.
    let words = constraints.len().div_ceil(64).max(1);
    let mut rows = Vec::new();
    for (idx, (f, sign)) in constraints.iter().enumerate() {
        let flip = match sign {
            Sign::Zero => continue,
            Sign::Positive => Q::one(),
            Sign::Negative => -Q::one(),
        };
        let mut coeffs: Vector = kernel.iter().map(|b| &flip * rational::dot(f, b)).collect();
        normalize(&mut coeffs);
        let mut history = vec![0u64; words];
        history[idx / 64] |= 1 << (idx % 64);
        rows.push(Row { coeffs, history });
    }

    let t = fourier_motzkin(k, rows, prune)?;
    let mut s = rational::zeros(dim);
    for (ti, b) in t.iter().zip(&kernel) {
        s = rational::axpy(&s, ti, b);
    }
    let s = rational::primitive_integer(&s);
    let ok = constraints
        .iter()
        .all(|(f, sign)| sign.holds(&rational::dot(f, &s)));
    if ok {
        Some(s)
    } else if prune {
        strict_feasibility_with(dim, constraints, false)
    } else {
        unreachable!("Fourier–Motzkin back-substitution produced an invalid witness")
    }
}

/// Strict homogeneous system `row . t > 0` over `Q^k`.
fn fourier_motzkin(k: usize, rows: Vec<Row>, prune: bool) -> Option<Vector> {
    let mut stages: Vec<Vec<Row>> = Vec::with_capacity(k + 1);
    let mut current = dedup(rows);
    for var in 0..k {
        if current.iter().any(|r| rational::is_zero(&r.coeffs)) {
            return None;
        }
        stages.push(current.clone());
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in current {
            match r.coeffs[var].signum() {
                s if s.is_positive() => pos.push(r),
                s if s.is_negative() => neg.push(r),
                _ => rest.push(r),
            }
        }
        let limit = var as u32 + 2;
        for p in &pos {
            for n in &neg {
                let history = merge_history(&p.history, &n.history);
                let row_count: u32 = history.iter().map(|w| w.count_ones()).sum();
                if prune && row_count > limit {
                    continue;
                }
                // p_var > 0 > n_var: cancel the variable with positive weights.
                let wp = -n.coeffs[var].clone();
                let wn = p.coeffs[var].clone();
                let mut coeffs: Vector = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(a, b)| &wp * a + &wn * b)
                    .collect();
                coeffs[var] = Q::zero();
                normalize(&mut coeffs);
                rest.push(Row { coeffs, history });
            }
        }
        current = dedup(rest);
    }
    if current.iter().any(|r| rational::is_zero(&r.coeffs)) {
        return None;
    }

    // Back-substitution, last eliminated variable first.
    let mut t = rational::zeros(k);
    for var in (0..k).rev() {
        let mut lower: Option<Q> = None;
        let mut upper: Option<Q> = None;
        for r in &stages[var] {
            let a = &r.coeffs[var];
            if a.is_zero() {
                continue;
            }
            let rest: Q = (var + 1..k).fold(Q::zero(), |acc, j| acc + &r.coeffs[j] * &t[j]);
            let bound = -rest / a;
            if a.is_positive() {
                lower = Some(lower.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                upper = Some(upper.map_or(bound.clone(), |u| u.min(bound)));
            }
        }
        t[var] = pick_between(lower.as_ref(), upper.as_ref());
    }
    Some(t)
}

/// A point of the open interval `(lower, upper)`, preferring zero, then the
/// integer nearest the finite end, then the midpoint.
fn pick_between(lower: Option<&Q>, upper: Option<&Q>) -> Q {
    let zero = Q::zero();
    let inside = |x: &Q| lower.is_none_or(|l| x > l) && upper.is_none_or(|u| x < u);
    if inside(&zero) {
        return zero;
    }
    match (lower, upper) {
        (Some(l), None) => l.floor() + Q::one(),
        (None, Some(u)) => u.ceil() - Q::one(),
        (Some(l), Some(u)) => {
            let cand = l.floor() + Q::one();
            if &cand < u {
                cand
            } else {
                (l + u) / rational::q(2)
            }
        }
        (None, None) => zero,
    }
}

/// Drops repeated rows, keeping the one with the smaller history.
fn dedup(rows: Vec<Row>) -> Vec<Row> {
    let mut out: Vec<Row> = Vec::with_capacity(rows.len());
    for r in rows {
        match out.iter_mut().find(|o| o.coeffs == r.coeffs) {
            Some(o) if r.history_len() < o.history_len() => *o = r,
            Some(_) => {}
            None => out.push(r),
        }
    }
    out
}
