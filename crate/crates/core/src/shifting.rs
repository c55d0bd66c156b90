//! Exterior algebraic shifting over a large prime field.
//!
//! Vertices are first relabelled `1..=n` in increasing id order. For a
//! random `n × n` matrix `A` the s-subsets `S ⊆ [n]` are scanned in
//! lexicographic order and `S` is kept when the row of `s × s` minors
//! `det A[S, F]`, `F` ranging over the s-faces, is independent of the rows
//! kept before it. The kept sets are the s-faces of `S(Δ)`. A draw is only
//! trusted when several independent matrices agree and the result is a
//! shifted complex with the right f-vector.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{is_downward_closed, Face, SimplicialComplex, Vertex};
use crate::linalg::{determinant, EchelonBasis, FieldPrime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    #[error("degenerate-matrix: {0}")]
    DegenerateMatrix(String),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("not-shifted: the complex is not shifted")]
    NotShifted,
}

/// `β^k[r]`: facets of the shifted complex of size `k + 1` with `init = r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IteratedBettiEntry {
    pub k: usize,
    pub r: usize,
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IteratedBetti {
    pub entries: Vec<IteratedBettiEntry>,
}

impl IteratedBetti {
    pub fn get(&self, k: usize, r: usize) -> usize {
        self.entries
            .iter()
            .find(|e| e.k == k && e.r == r)
            .map_or(0, |e| e.value)
    }

    /// Table of a shifted complex, `0 ≤ r ≤ k + 1`, `0 ≤ k ≤ dim`.
    pub fn of_shifted(s: &SimplicialComplex) -> Self {
        let facets = s.facets();
        let mut entries = Vec::new();
        for k in 0..(s.dimension() + 1).max(0) as usize {
            for r in 0..=k + 1 {
                let value = facets
                    .iter()
                    .filter(|f| f.len() == k + 1 && init_count(f) == r)
                    .count();
                entries.push(IteratedBettiEntry { k, r, value });
            }
        }
        IteratedBetti { entries }
    }
}

#[derive(Debug, Clone)]
pub struct ShiftReport {
    /// `S(Δ)` on the vertices `1..=n`.
    pub shifted: SimplicialComplex,
    /// `vertex_map[i]` is the original vertex relabelled to `i + 1`.
    pub vertex_map: Vec<Vertex>,
    pub prime: FieldPrime,
    pub seed: u64,
    pub trials: usize,
    pub iterated_betti: IteratedBetti,
}

/// Shifts `c` with `trials` independent matrices drawn from `seed`; all
/// trials must produce the same complex.
pub fn exterior_shift(
    c: &SimplicialComplex,
    prime: FieldPrime,
    seed: u64,
    trials: usize,
) -> Result<ShiftReport, ShiftError> {
    if trials == 0 {
        return Err(ShiftError::NoTrials);
    }
    let vertex_map = c.vertices();
    let pos: BTreeMap<Vertex, Vertex> = vertex_map
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as Vertex + 1))
        .collect();
    let relabelled = c.relabel(|v| pos[&v]);

    let mut result: Option<SimplicialComplex> = None;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let s = shift_once(&relabelled, prime, &mut rng)?;
        match &result {
            None => result = Some(s),
            Some(prev) if *prev == s => {}
            Some(_) => {
                return Err(ShiftError::DegenerateMatrix(format!(
                    "trial {t} disagrees with trial 0"
                )))
            }
        }
    }
    let shifted = result.expect("at least one trial");
    let iterated_betti = IteratedBetti::of_shifted(&shifted);
    Ok(ShiftReport {
        shifted,
        vertex_map,
        prime,
        seed,
        trials,
        iterated_betti,
    })
}

fn shift_once(
    c: &SimplicialComplex,
    prime: FieldPrime,
    rng: &mut ChaCha8Rng,
) -> Result<SimplicialComplex, ShiftError> {
    if c.is_void() {
        return Ok(SimplicialComplex::void());
    }
    let n = c.vertices().len();
    let a: Vec<Vec<u32>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(0..prime.get())).collect())
        .collect();

    let mut faces: BTreeSet<Face> = BTreeSet::from([Face::empty()]);
    let max_size = (c.dimension() + 1) as usize;
    for s in 1..=max_size {
        let cols = c.faces_of_size(s);
        let mut basis = EchelonBasis::new(prime);
        for rows in (1..=n as Vertex).combinations(s) {
            if basis.rank() == cols.len() {
                break;
            }
            let minors = cols
                .iter()
                .map(|f| {
                    let sub = rows
                        .iter()
                        .map(|&i| {
                            f.vertices()
                                .iter()
                                .map(|&j| a[i as usize - 1][j as usize - 1])
                                .collect()
                        })
                        .collect();
                    determinant(sub, prime)
                })
                .collect();
            if basis.insert(minors) {
                faces.insert(Face::new(rows));
            }
        }
        if basis.rank() != cols.len() {
            return Err(ShiftError::DegenerateMatrix(format!(
                "compound matrix in size {s} has rank {} < {}",
                basis.rank(),
                cols.len()
            )));
        }
    }
    if !is_downward_closed(&faces) {
        return Err(ShiftError::DegenerateMatrix(
            "selected sets are not closed under subsets".into(),
        ));
    }
    let shifted = SimplicialComplex::from_closed_faces(faces);
    if !is_shifted(&shifted) {
        return Err(ShiftError::DegenerateMatrix("result is not shifted".into()));
    }
    debug_assert_eq!(shifted.f_polynomial(), c.f_polynomial());
    Ok(shifted)
}

/// Whether replacing any vertex of a face by a smaller vertex not in it
/// gives a face. Vertices range over `1..=max` (and `0` if it occurs).
pub fn is_shifted(c: &SimplicialComplex) -> bool {
    let Some(&first) = c.vertices().first() else {
        return true;
    };
    let lo = first.min(1);
    c.faces().iter().all(|f| {
        f.vertices().iter().all(|&v| {
            (lo..v)
                .filter(|u| !f.contains(*u))
                .all(|u| c.contains(&f.without(v).with(u)))
        })
    })
}

/// `max { i ≥ 0 : {1, …, i} ⊆ T }`.
pub fn init_count(t: &Face) -> usize {
    (1..).take_while(|&i| t.contains(i as Vertex)).count()
}

/// Largest `k` with `c = ⟨1…k⟩ ⋆ c'`, for a shifted complex: the least
/// `init` over the facets.
pub fn cone_apex_depth(c: &SimplicialComplex) -> Result<usize, ShiftError> {
    if !is_shifted(c) {
        return Err(ShiftError::NotShifted);
    }
    Ok(c.facets().iter().map(init_count).min().unwrap_or(0))
}

/// `β^k[r]` of `c` via its exterior shift.
pub fn iterated_betti(
    c: &SimplicialComplex,
    prime: FieldPrime,
    seed: u64,
) -> Result<IteratedBetti, ShiftError> {
    Ok(exterior_shift(c, prime, seed, 2)?.iterated_betti)
}

/// Reduced Betti numbers read off a shifted complex: `β̃_i` counts the
/// facets of size `i + 1` avoiding vertex 1. Index 0 is `β̃_{-1}`.
pub fn betti_from_shifted(s: &SimplicialComplex) -> Vec<usize> {
    if s.is_void() {
        return Vec::new();
    }
    let d = s.dimension();
    let facets = s.facets();
    (-1..=d)
        .map(|i| {
            facets
                .iter()
                .filter(|f| f.len() as isize == i + 1 && !f.contains(1))
                .count()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::betti_numbers;

    const P: FieldPrime = FieldPrime::MERSENNE31;

    fn f(s: &str) -> Face {
        Face::new(s.chars().map(|c| c.to_digit(10).unwrap()))
    }

    fn cx(facets: &[&str]) -> SimplicialComplex {
        SimplicialComplex::from_facets(facets.iter().map(|s| f(s)))
    }

    #[test]
    fn shiftedness() {
        assert!(is_shifted(&cx(&["12", "13"])));
        assert!(!is_shifted(&cx(&["23"])));
        assert!(!is_shifted(&cx(&["12", "3"]).relabel(|v| v + 1)));
        assert!(is_shifted(&cx(&["12", "13", "23"])));
        assert!(!is_shifted(&cx(&["12", "34"])));
    }

    #[test]
    fn init_values() {
        assert_eq!(init_count(&f("124")), 2);
        assert_eq!(init_count(&f("23")), 0);
        assert_eq!(init_count(&f("123")), 3);
        assert_eq!(init_count(&Face::empty()), 0);
    }

    #[test]
    fn shifted_input_is_fixed() {
        let c = cx(&["12", "13"]);
        assert_eq!(exterior_shift(&c, P, 0, 2).unwrap().shifted, c);
    }

    #[test]
    fn triangle_boundary() {
        let c = cx(&["12", "13", "23"]);
        let r = exterior_shift(&c, P, 7, 2).unwrap();
        assert_eq!(r.shifted, c);
        assert_eq!(r.iterated_betti.get(1, 0), 1);
        assert_eq!(cone_apex_depth(&r.shifted), Ok(0));
        assert_eq!(betti_from_shifted(&r.shifted), vec![0, 0, 1]);
    }

    #[test]
    fn simplex() {
        let c = SimplicialComplex::simplex([4, 7, 9]);
        let r = exterior_shift(&c, P, 0, 2).unwrap();
        assert_eq!(r.shifted, SimplicialComplex::simplex([1, 2, 3]));
        assert_eq!(r.vertex_map, vec![4, 7, 9]);
        assert_eq!(cone_apex_depth(&r.shifted), Ok(3));
        assert_eq!(r.iterated_betti.get(2, 3), 1);
        let total: usize = r.iterated_betti.entries.iter().map(|e| e.value).sum();
        assert_eq!(total, 1);
    }

    #[test]
    fn sigma_preserves_f_and_betti() {
        let c = cx(&["1234", "1235", "2345", "2456", "3456"]);
        let r = exterior_shift(&c, P, 3, 2).unwrap();
        assert_eq!(r.shifted.f_polynomial(), c.f_polynomial());
        assert!(is_shifted(&r.shifted));
        assert_eq!(
            betti_from_shifted(&r.shifted),
            betti_numbers(&c, FieldPrime::P32003).values()
        );
        assert!(cone_apex_depth(&r.shifted).unwrap() >= 2);
    }

    #[test]
    fn cone_depth_requires_shifted() {
        assert_eq!(cone_apex_depth(&cx(&["23"])), Err(ShiftError::NotShifted));
    }
}
