//! Library results against independently computed references.

mod common;

use std::collections::HashSet;

use common::*;
use num::{Signed, Zero};
use proptest::prelude::*;
use rescodim::averaging::choose_base;
use rescodim::linalg::{span_contains, strict_feasibility};
use rescodim::parabolic::{maximal_parabolic_table, minimal_resonant_codimension};
use rescodim::weyl::weyl_orbit_search;
use rescodim::{Family, Functional, RootSystem, Sign, Vector};

fn root_coords(rs: &RootSystem) -> HashSet<Vector> {
    rs.roots().iter().map(|r| r.coords.clone()).collect()
}

fn simple_coords(rs: &RootSystem) -> Vec<Vector> {
    (0..rs.rank()).map(|j| rs.root(rs.simple(j)).coords.clone()).collect()
}

#[test]
fn roots_are_the_reflection_closure_of_the_base() {
    for ty in types(1, 8) {
        let rs = rescodim::build_root_system(ty).unwrap();
        let oracle = if ty.family() == Family::BC {
            // the doubles of the short roots are added by hand: they are not
            // reflection images of a base.
            let mut s = reflection_closure(&simple_coords(&rs));
            let doubles: Vec<Vector> = s
                .iter()
                .filter(|v| dot(v, v) == q(1))
                .map(|v| v.iter().map(|x| x * q(2)).collect())
                .collect();
            s.extend(doubles);
            s
        } else {
            reflection_closure(&simple_coords(&rs))
        };
        assert_eq!(root_coords(&rs), oracle, "{ty}");
        assert_eq!(rs.num_roots(), classical_count(ty), "{ty}");
    }
}

#[test]
fn small_system_examples() {
    assert_eq!(sys(Family::A, 2).num_roots(), 6);
    assert_eq!(sys(Family::G2, 2).num_roots(), 12);
    let bc = sys(Family::BC, 2);
    let expected: HashSet<Vector> = [
        [1, 0], [-1, 0], [0, 1], [0, -1],
        [2, 0], [-2, 0], [0, 2], [0, -2],
        [1, 1], [1, -1], [-1, 1], [-1, -1],
    ]
    .iter()
    .map(|c| qv(c))
    .collect();
    assert_eq!(root_coords(&bc), expected);
}

#[test]
fn coarse_classes_are_positive_proportionality_classes() {
    for ty in types(1, 8) {
        let rs = rescodim::build_root_system(ty).unwrap();
        let n = rs.num_roots();
        for i in 0..n {
            for j in 0..n {
                let a = &rs.root(i).coords;
                let b = &rs.root(j).coords;
                // b = c a with c > 0 iff (a,b)^2 = (a,a)(b,b) and (a,b) > 0
                let ab = dot(a, b);
                let prop = ab.is_positive() && &ab * &ab == dot(a, a) * dot(b, b);
                assert_eq!(rs.class_of(i) == rs.class_of(j), prop, "{ty} {i} {j}");
            }
        }
        let merged = rs.classes().iter().filter(|c| c.members.len() == 2).count();
        if ty.family() == Family::BC {
            assert_eq!(merged, 2 * ty.rank());
        } else {
            assert_eq!(merged, 0);
        }
    }
    assert_eq!(sys(Family::BC, 2).classes().len(), 8);
    assert_eq!(sys(Family::A, 2).classes().len(), 6);
    assert_eq!(sys(Family::B, 3).classes().len(), 18);
}

#[test]
fn cartan_integers() {
    for ty in types(2, 8) {
        let rs = rescodim::build_root_system(ty).unwrap();
        for a in 0..rs.num_roots() {
            for b in 0..rs.num_roots() {
                assert!(rs.pairing(b, a).is_integer(), "{ty}");
            }
        }
    }
}

#[test]
fn highest_root_dominates_and_has_expected_first_coefficient() {
    for ty in types(1, 8) {
        let rs = rescodim::build_root_system(ty).unwrap();
        let roots = root_coords(&rs);
        let d = rs.highest_root();
        for j in 0..rs.rank() {
            let up: Vector = rs
                .root(d)
                .coords
                .iter()
                .zip(&rs.root(rs.simple(j)).coords)
                .map(|(x, y)| x + y)
                .collect();
            assert!(!roots.contains(&up), "{ty}: delta + a_{} is a root", j + 1);
        }
        let expected = match ty.family() {
            Family::A | Family::B | Family::D | Family::E6 | Family::E7 => 1,
            _ => 2,
        };
        assert_eq!(rs.coefficients(d)[0], expected, "{ty}");
    }
    let a3 = sys(Family::A, 3);
    assert_eq!(a3.coefficients(a3.highest_root()), &[1, 1, 1]);
    let c3 = sys(Family::C, 3);
    assert_eq!(c3.coefficients(c3.highest_root()), &[2, 2, 1]);
    assert_eq!(c3.coefficients(c3.second_highest_root().unwrap()), &[1, 2, 1]);
    let g2 = sys(Family::G2, 2);
    assert_eq!(g2.coefficients(g2.highest_root())[0], 2);
}

#[test]
fn second_highest_root_is_ambiguous_only_in_type_a() {
    for ty in types(2, 8) {
        let rs = rescodim::build_root_system(ty).unwrap();
        let h = rs.height(rs.highest_root()) - 1;
        let count = (0..rs.num_roots()).filter(|&i| rs.height(i) == h).count();
        assert_eq!(rs.second_highest_root().is_ok(), count == 1, "{ty}");
        assert_eq!(count == 1, ty.family() != Family::A, "{ty}");
    }
}

#[test]
fn minimal_resonant_codimension_matches_the_closed_forms() {
    for ty in types(1, 8) {
        if ty.rank() == 1 && ty.family() != Family::A {
            continue;
        }
        let rs = rescodim::build_root_system(ty).unwrap();
        assert_eq!(minimal_resonant_codimension(&rs), closed_form_r(ty), "{ty}");
    }
}

#[test]
fn maximal_parabolic_table_by_direct_count() {
    // Codimension of q_{Pi \ a_j}: negative classes with nonzero a_j
    // coefficient.
    for ty in types(1, 8) {
        let rs = rescodim::build_root_system(ty).unwrap();
        let table = maximal_parabolic_table(&rs);
        for (j, codim) in table {
            let count = rs
                .classes()
                .iter()
                .filter(|c| {
                    let r = c.representative();
                    !rs.is_positive(r) && rs.coefficients(r)[j - 1] != 0
                })
                .count();
            assert_eq!(codim, count, "{ty} j={j}");
        }
    }
    for n in 1..=8 {
        let rs = sys(Family::A, n);
        let expected: Vec<(usize, usize)> = (1..=n).map(|j| (j, j * (n + 1 - j))).collect();
        assert_eq!(maximal_parabolic_table(&rs), expected);
    }
    assert_eq!(maximal_parabolic_table(&sys(Family::A, 4)), vec![(1, 4), (2, 6), (3, 6), (4, 4)]);
    let g2 = maximal_parabolic_table(&sys(Family::G2, 2));
    assert_eq!(g2.iter().map(|p| p.1).min(), Some(5));
    let c2 = maximal_parabolic_table(&sys(Family::C, 2));
    assert_eq!(c2.iter().map(|p| p.1).min(), Some(3));
}

#[test]
fn a2_orbit_enumeration() {
    // The Weyl group of A2 permutes the three coordinates.
    let rs = sys(Family::A, 2);
    let a2 = Functional::from(rs.root(rs.simple(1)));
    let perms = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let orbit: HashSet<Vector> = perms
        .iter()
        .map(|p| p.iter().map(|&i| a2.coords[i].clone()).collect())
        .collect();
    assert_eq!(orbit.len(), 6);
    let good: Vec<&Vector> = orbit
        .iter()
        .filter(|v| !rs.first_coweight_pairing(&Functional::new((*v).clone())).is_zero())
        .collect();
    assert!(rs.first_coweight_pairing(&a2).is_zero());
    let w = choose_base(&rs, &a2).unwrap();
    assert_eq!(w.word.len(), 1);
    assert!(good.contains(&&w.apply(&a2).coords));
}

#[test]
fn first_coweight_is_its_own_base() {
    for ty in types(2, 8) {
        let rs = rescodim::build_root_system(ty).unwrap();
        let f = Functional::new(rs.coweights()[0].clone());
        let w = weyl_orbit_search(&rs, &f, |g| !rs.first_coweight_pairing(g).is_zero()).unwrap();
        assert!(w.is_identity(), "{ty}");
    }
}

#[test]
fn simple_roots_are_independent() {
    for ty in types(2, 8) {
        let rs = rescodim::build_root_system(ty).unwrap();
        let rest: Vec<Vector> = simple_coords(&rs)[1..].to_vec();
        assert!(!span_contains(&rest, &simple_coords(&rs)[0]), "{ty}");
    }
}

#[test]
fn all_positive_roots_negative_somewhere() {
    for ty in types(1, 8) {
        let rs = rescodim::build_root_system(ty).unwrap();
        let constraints: Vec<(Functional, Sign)> = rs
            .positive_roots()
            .iter()
            .map(|i| (Functional::from(rs.root(i)), Sign::Negative))
            .collect();
        let s = rs.feasible_cartan(&constraints).expect("feasible");
        for (f, sign) in &constraints {
            assert!(sign.holds(&f.eval(&s)), "{ty}");
        }
    }
}

/// Grid search for a point satisfying homogeneous sign constraints.
fn grid_feasible(dim: usize, rows: &[(Vector, Sign)], radius: i64) -> bool {
    let side = (2 * radius + 1) as usize;
    (0..side.pow(dim as u32)).any(|mut code| {
        let x: Vector = (0..dim)
            .map(|_| {
                let c = (code % side) as i64 - radius;
                code /= side;
                q(c)
            })
            .collect();
        rows.iter().all(|(f, s)| s.holds(&dot(f, &x)))
    })
}

fn sign_strategy() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Negative), Just(Sign::Zero), Just(Sign::Positive)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn feasibility_agrees_with_grid_search(
        dim in 1usize..=3,
        raw in prop::collection::vec((prop::collection::vec(-3i64..=3, 3), sign_strategy()), 1..6),
    ) {
        let rows: Vec<(Vector, Sign)> = raw.iter().map(|(c, s)| (qv(&c[..dim]), *s)).collect();
        let result = strict_feasibility(dim, &rows);
        if let Some(x) = &result {
            for (f, s) in &rows {
                prop_assert!(s.holds(&dot(f, x)));
            }
        }
        // An integer witness within the grid proves feasibility.
        if grid_feasible(dim, &rows, 6) {
            prop_assert!(result.is_some());
        }
    }
}
