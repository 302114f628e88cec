//! Weyl group actions: simple reflections, words, orbit search and (for
//! small rank) full enumeration as permutations of the roots.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, q, Vector, Q};
use crate::roots::{Functional, RootSystem};
use crate::rootset::RootSet;

/// Reflection of an ambient vector in the hyperplane orthogonal to `alpha`.
pub fn reflect(alpha: &[Q], v: &[Q]) -> Vector {
    let c = q(2) * rational::dot(v, alpha) / rational::dot(alpha, alpha);
    rational::axpy(v, &-c, alpha)
}

/// Applies the simple reflection `s_{j+1}` (zero-based `j`) to `f`.
pub fn simple_reflection(rs: &RootSystem, j: usize, f: &Functional) -> Functional {
    Functional::new(reflect(&rs.root(rs.simple(j)).coords, &f.coords))
}

/// Element of the Weyl group as a word in simple reflections.
///
/// The word `[j_1, ..., j_k]` acts as `s_{j_k} o ... o s_{j_1}`: the first
/// letter is applied first. `matrix` is the corresponding ambient matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylElement {
    pub word: Vec<usize>,
    #[serde(skip)]
    pub matrix: Vec<Vector>,
}

impl WeylElement {
    pub fn identity(rs: &RootSystem) -> Self {
        Self::from_word(rs, Vec::new())
    }

    pub fn from_word(rs: &RootSystem, word: Vec<usize>) -> Self {
        let n = rs.ambient_dim();
        // Column c of the matrix is the image of e_c.
        let cols: Vec<Vector> = (0..n)
            .map(|c| {
                word.iter().fold(rational::unit(n, c), |v, &j| {
                    reflect(&rs.root(rs.simple(j)).coords, &v)
                })
            })
            .collect();
        let matrix = (0..n)
            .map(|r| (0..n).map(|c| cols[c][r].clone()).collect())
            .collect();
        WeylElement { word, matrix }
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn apply_vec(&self, v: &[Q]) -> Vector {
        crate::linalg::mat_vec(&self.matrix, v)
    }

    pub fn apply(&self, f: &Functional) -> Functional {
        Functional::new(self.apply_vec(&f.coords))
    }

    pub fn inverse(&self, rs: &RootSystem) -> Self {
        Self::from_word(rs, self.word.iter().rev().copied().collect())
    }

    /// Whether the matrix permutes the root set.
    pub fn permutes_roots(&self, rs: &RootSystem) -> bool {
        rs.roots()
            .iter()
            .all(|r| rs.find(&self.apply_vec(&r.coords)).is_some())
    }
}

/// Breadth-first search over the orbit of `f` under simple reflections for
/// the first image satisfying `predicate`. Words are explored in order of
/// length, letters in ascending order; the search visits at most the order
/// of the Weyl group.
pub fn weyl_orbit_search(
    rs: &RootSystem,
    f: &Functional,
    predicate: impl Fn(&Functional) -> bool,
) -> Result<WeylElement> {
    let cap = rs.ty().weyl_order();
    let mut seen: HashSet<Vector> = HashSet::new();
    let mut queue: VecDeque<(Functional, Vec<usize>)> = VecDeque::new();
    seen.insert(f.coords.clone());
    queue.push_back((f.clone(), Vec::new()));
    let mut visited = 0u64;
    while let Some((g, word)) = queue.pop_front() {
        visited += 1;
        if predicate(&g) {
            return Ok(WeylElement::from_word(rs, word));
        }
        if visited >= cap {
            break;
        }
        for j in 0..rs.rank() {
            let h = simple_reflection(rs, j, &g);
            if seen.insert(h.coords.clone()) {
                let mut w = word.clone();
                w.push(j);
                queue.push_back((h, w));
            }
        }
    }
    Err(Error::SearchExhausted { visited })
}

/// Permutation of root indices induced by the simple reflection `s_{j+1}`.
pub fn simple_reflection_permutation(rs: &RootSystem, j: usize) -> Vec<usize> {
    let a = rs.cartan_matrix();
    (0..rs.num_roots())
        .map(|i| {
            let c = rs.coefficients(i);
            let pairing: i64 = (0..rs.rank()).map(|k| c[k] * a[k][j]).sum();
            let mut img = c.to_vec();
            img[j] -= pairing;
            rs.index_of_coefficients(&img)
                .expect("simple reflections permute the roots")
        })
        .collect()
}

pub fn permute(perm: &[usize], set: &RootSet) -> RootSet {
    set.iter().map(|i| perm[i]).collect()
}

/// Largest rank for which the whole group is enumerated.
pub const MAX_ENUMERATION_RANK: usize = 4;

/// All Weyl group elements as permutations of the root indices.
pub fn enumerate_group(rs: &RootSystem) -> Result<Vec<Vec<usize>>> {
    if rs.rank() > MAX_ENUMERATION_RANK {
        return Err(Error::Capability(format!(
            "full Weyl group enumeration is limited to rank <= {MAX_ENUMERATION_RANK}, {} has rank {}",
            rs.ty(),
            rs.rank()
        )));
    }
    let gens: Vec<Vec<usize>> = (0..rs.rank())
        .map(|j| simple_reflection_permutation(rs, j))
        .collect();
    let id: Vec<usize> = (0..rs.num_roots()).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let next: Vec<usize> = p.iter().map(|&i| g[i]).collect();
            if seen.insert(next.clone()) {
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_ints;
    use num::Zero;
    use crate::roots::{root_system, Family};

    #[test]
    fn group_orders_small_rank() {
        for (f, l) in [
            (Family::A, 2),
            (Family::A, 3),
            (Family::B, 3),
            (Family::C, 2),
            (Family::BC, 2),
            (Family::G2, 2),
            (Family::D, 4),
            (Family::F4, 4),
        ] {
            let rs = root_system(f, l).unwrap();
            let g = enumerate_group(&rs).unwrap();
            assert_eq!(g.len() as u64, rs.ty().weyl_order(), "{}", rs.ty());
        }
        let e6 = root_system(Family::E6, 6).unwrap();
        assert!(matches!(enumerate_group(&e6), Err(Error::Capability(_))));
    }

    #[test]
    fn words_and_inverse() {
        let rs = root_system(Family::B, 3).unwrap();
        let w = WeylElement::from_word(&rs, vec![0, 2, 1, 2]);
        assert!(w.permutes_roots(&rs));
        let f = Functional::new(from_ints(&[3, -1, 2]));
        let back = w.inverse(&rs).apply(&w.apply(&f));
        assert_eq!(back, f);
        let step = [0, 2, 1, 2]
            .iter()
            .fold(f.clone(), |g, &j| simple_reflection(&rs, j, &g));
        assert_eq!(w.apply(&f), step);
    }

    #[test]
    fn orbit_search_identity_when_already_satisfied() {
        let rs = root_system(Family::A, 3).unwrap();
        let f = Functional::new(rs.coweights()[0].clone());
        let w = weyl_orbit_search(&rs, &f, |g| !rs.first_coweight_pairing(g).is_zero()).unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn orbit_search_exhausts() {
        let rs = root_system(Family::A, 2).unwrap();
        let f = Functional::new(from_ints(&[1, 0, -1]));
        let err = weyl_orbit_search(&rs, &f, |_| false).unwrap_err();
        assert!(matches!(err, Error::SearchExhausted { visited: 6 }));
    }
}
