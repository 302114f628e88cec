//! The averaging run for SL(n, R) against the explicit block-matrix
//! subgroups of SL(n).

mod common;

use std::collections::HashSet;

use common::*;
use rescodim::averaging::run_averaging;
use rescodim::{Family, Functional, RootSet, RootSystem, Vector};

fn e_diff(n: usize, i: usize, j: usize) -> Vector {
    let mut v = qv(&vec![0; n]);
    v[i] = q(1);
    v[j] = q(-1);
    v
}

fn coords(rs: &RootSystem, set: &RootSet) -> HashSet<Vector> {
    set.iter().map(|i| rs.root(i).coords.clone()).collect()
}

/// Root vectors `e_i - e_j` of matrix entries `(i, j)` satisfying `keep`,
/// zero-based.
fn entries(n: usize, keep: impl Fn(usize, usize) -> bool) -> HashSet<Vector> {
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && keep(i, j))
        .map(|(i, j)| e_diff(n, i, j))
        .collect()
}

fn lambda(n: usize, xs: &[(usize, i64)]) -> Functional {
    let mut v = vec![0; n];
    for &(i, x) in xs {
        v[i] = x;
    }
    Functional::new(qv(&v))
}

#[test]
fn u_is_the_lower_right_block_unipotent() {
    for n in 3..=5 {
        let rs = sys(Family::A, n - 1);
        let t = run_averaging(&rs, &lambda(n, &[(0, 1)])).unwrap();
        assert!(t.base_change.is_identity());
        let u = entries(n, |i, j| i >= 1 && i < j);
        assert_eq!(coords(&rs, &t.steps[0].subgroup), u, "n={n}");
        // after A-averaging and negation: the lower-right SL(n-1) block
        let g_prime = entries(n, |i, j| i >= 1 && j >= 1);
        assert_eq!(coords(&rs, &t.steps[2].state.roots), g_prime, "n={n}");
    }
}

#[test]
fn s1_is_on_the_expected_log_line() {
    for n in 3..=5 {
        let rs = sys(Family::A, n - 1);
        let t = run_averaging(&rs, &lambda(n, &[(0, 1)])).unwrap();
        // log diag(6^{-(n-1)}, 6, ..., 6) = log 6 * (-(n-1), 1, ..., 1)
        let mut line = vec![1i64; n];
        line[0] = -(n as i64 - 1);
        let s1 = &t.steps[0].witness.coords;
        let c = &s1[1] / q(line[1]);
        assert_eq!(*s1, qv(&line).iter().map(|x| x * &c).collect::<Vector>(), "n={n}");
        assert!(dot(&t.moved_lambda().coords, s1) > q(0));
    }
}

#[test]
fn u_prime_follows_the_proportionality_split() {
    for n in 3..=5 {
        let rs = sys(Family::A, n - 1);
        let alpha1 = HashSet::from([e_diff(n, 0, 1)]);
        let delta = HashSet::from([e_diff(n, 0, n - 1)]);

        // proportional to a_1: U' = g^delta
        let t = run_averaging(&rs, &lambda(n, &[(0, 2), (1, -2)])).unwrap();
        assert_eq!(coords(&rs, &t.steps[4].subgroup), delta, "n={n}");

        // proportional to delta: U' = g^{a_1}
        let t = run_averaging(&rs, &lambda(n, &[(0, 1), (n - 1, -1)])).unwrap();
        assert_eq!(coords(&rs, &t.steps[4].subgroup), alpha1, "n={n}");
        // the subgroup H of G' commuting with U' = g^{a_1}
        let h = entries(n, |i, j| i >= 2 && j >= 1);
        assert_eq!(coords(&rs, &t.steps[3].state.roots), h, "n={n}");
        let s2 = &t.steps[4].witness;
        assert_eq!(Functional::new(e_diff(n, 0, 1)).eval(s2), q(0));

        // neither: the tie-break takes delta
        let t = run_averaging(&rs, &lambda(n, &[(0, 1)])).unwrap();
        assert_eq!(coords(&rs, &t.steps[4].subgroup), delta, "n={n}");
        assert!(t.reaches_all_roots(&rs));
    }
}
