use std::cell::Cell;
use std::time::Instant;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use super::exact::{BudgetExceeded, Closure, Problem, Search};
use super::separator::{separator_last, separator_regions};
use super::weights::find_weighting;
use super::{
    BooleanInterval, Decomposition, DecompositionCertificate, Infeasible, SolverConfig, Target,
};
use crate::complex::{Face, SimplicialComplex};
use crate::homology::is_acyclic;
use crate::linalg::FieldPrime;

/// Every rank-`k` boolean interval whose `2^k` faces all lie in the target,
/// sorted by `(min, max)`.
pub fn enumerate_intervals(target: &Target, k: usize) -> Vec<BooleanInterval> {
    let mut out = Vec::new();
    for sigma in target.faces() {
        let up: Vec<u32> = target
            .faces()
            .iter()
            .filter(|f| f.len() == sigma.len() + 1 && sigma.is_subset(f))
            .map(|f| f.difference(sigma).vertices()[0])
            .collect();
        for extra in up.iter().copied().combinations(k) {
            let extra = Face::new(extra);
            if extra.subsets().all(|s| target.contains(&s.union(sigma))) {
                out.push(BooleanInterval::new(sigma.clone(), sigma.union(&extra)));
            }
        }
    }
    out.sort();
    out
}

pub(crate) fn interval_problem(
    target: &Target,
    intervals: &[BooleanInterval],
    k: usize,
) -> Problem {
    let blocks = intervals
        .iter()
        .map(|iv| {
            let mut items: Vec<usize> = iv
                .faces()
                .map(|f| target.index_of(&f).expect("interval inside target"))
                .collect();
            items.sort_unstable();
            items
        })
        .collect();
    let mins = intervals
        .iter()
        .map(|iv| target.index_of(&iv.min).unwrap())
        .collect();
    let grade = target.faces().iter().map(Face::len).collect();
    let mut p = Problem::new(target.len(), blocks, mins, grade, k);
    p.region = separator_regions(target).map(separator_last);
    p
}

/// First cover found by the search, optionally splitting the root choice
/// across threads. Branch results are combined in branch order, so the
/// answer matches the sequential one whenever neither runs out of budget.
pub(crate) fn run_first(
    p: &Problem,
    active: &[bool],
    closure: Option<&Closure>,
    config: &SolverConfig,
    nodes: &Cell<u64>,
) -> Result<Option<Vec<usize>>, BudgetExceeded> {
    if !config.parallel {
        return Search::new(p, active, closure, nodes, config.node_budget).first_solution();
    }
    let root = Search::new(p, active, closure, nodes, config.node_budget);
    let Some((_, branches)) = root.root_branches() else {
        return Ok(Some(Vec::new()));
    };
    let results: Vec<(Result<Option<Vec<usize>>, BudgetExceeded>, u64)> = branches
        .par_iter()
        .map(|&b| {
            let local = Cell::new(0);
            let mut s = Search::new(p, active, closure, &local, config.node_budget);
            let r = s.select(b).and_then(|_| s.first_solution()).map(|sol| {
                sol.map(|mut v| {
                    v.push(b);
                    v
                })
            });
            (r, local.get())
        })
        .collect();
    let mut outcome = Ok(None);
    for (r, n) in results {
        nodes.set(nodes.get() + n);
        if matches!(outcome, Ok(None)) {
            match r {
                Ok(None) => {}
                other => outcome = other,
            }
        }
    }
    outcome
}

/// Decides whether `target` is a disjoint union of rank-`k` boolean
/// intervals, optionally with the minima closed downward within the target.
///
/// A face weighting ruling out all covers is looked for first (see
/// [`FaceWeighting`](super::FaceWeighting)). The minima-constrained search is only run once the unconstrained one has
/// found a cover; if that cover already has closed minima it is returned.
pub fn find_interval_decomposition(
    target: &Target,
    k: usize,
    require_subcomplex_minima: bool,
    config: &SolverConfig,
) -> Decomposition {
    let start = Instant::now();
    let part_size = 1usize << k;
    if !target.len().is_multiple_of(part_size) {
        return Decomposition::Infeasible(Infeasible::Count {
            faces: target.len(),
            part_size,
        });
    }
    let intervals = enumerate_intervals(target, k);
    let problem = interval_problem(target, &intervals, k);
    if let Some(w) = find_weighting(target, &problem.blocks) {
        return Decomposition::Infeasible(Infeasible::Exhausted {
            nodes: 0,
            weighting: Some(w),
        });
    }
    let active = vec![true; target.len()];
    let nodes = Cell::new(0);

    let finish = |sol: Result<Option<Vec<usize>>, BudgetExceeded>, nodes: u64| match sol {
        Err(BudgetExceeded) => Decomposition::Unknown { nodes },
        Ok(None) => Decomposition::Infeasible(Infeasible::Exhausted {
            nodes,
            weighting: None,
        }),
        Ok(Some(blocks)) => {
            let parts = blocks.iter().map(|&b| intervals[b].clone()).collect();
            let elapsed = config.timing.then(|| start.elapsed().as_millis() as u64);
            Decomposition::Found(DecompositionCertificate::from_intervals(
                target,
                k,
                parts,
                nodes,
                config.seed,
                elapsed,
            ))
        }
    };

    let free = run_first(&problem, &active, None, config, &nodes);
    if !require_subcomplex_minima {
        return finish(free, nodes.get());
    }
    match free {
        Ok(Some(blocks)) => {
            let minima: Vec<Face> = blocks.iter().map(|&b| intervals[b].min.clone()).collect();
            if target.is_closed_within(&minima) {
                return finish(Ok(Some(blocks)), nodes.get());
            }
        }
        other => return finish(other, nodes.get()),
    }
    let (below, above) = target.closure_tables();
    let closure = Closure { below, above };
    let constrained = run_first(&problem, &active, Some(&closure), config, &nodes);
    finish(constrained, nodes.get())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("not-acyclic: the complex has non-vanishing reduced homology over GF(2), GF(3) and GF(32003)")]
    NotAcyclic,
    #[error("search budget exhausted after {nodes} nodes")]
    Unknown { nodes: u64 },
    #[error(
        "no rank-1 decomposition with subcomplex minima exists although the complex is acyclic"
    )]
    Contradiction,
}

/// Rank-1 decomposition of an acyclic complex whose minima form a
/// subcomplex.
pub fn rank1_acyclic_matching(
    c: &SimplicialComplex,
    config: &SolverConfig,
) -> Result<DecompositionCertificate, MatchingError> {
    let fields = [
        FieldPrime::TWO,
        FieldPrime::new(3).unwrap(),
        FieldPrime::P32003,
    ];
    if !fields.iter().any(|&p| is_acyclic(c, p)) {
        return Err(MatchingError::NotAcyclic);
    }
    match find_interval_decomposition(&Target::from_complex(c), 1, true, config) {
        Decomposition::Found(cert) => Ok(cert),
        Decomposition::Unknown { nodes } => Err(MatchingError::Unknown { nodes }),
        Decomposition::Infeasible(_) => Err(MatchingError::Contradiction),
    }
}

#[cfg(test)]
mod tests {
    use super::super::verify_certificate;
    use super::*;
    use crate::complex::SimplicialComplex;

    fn f(s: &str) -> Face {
        Face::new(s.chars().map(|c| c.to_digit(10).unwrap()))
    }

    fn cx(facets: &[&str]) -> SimplicialComplex {
        SimplicialComplex::from_facets(facets.iter().map(|s| f(s)))
    }

    fn iv(a: &str, b: &str) -> BooleanInterval {
        BooleanInterval::new(f(a), f(b))
    }

    fn psi() -> Target {
        let sigma = cx(&["1234", "1235", "2345", "2456", "3456"]);
        let upsilon = cx(&["125", "124", "246", "346"]);
        Target::from_relative(&sigma.relative(&upsilon).unwrap())
    }

    #[test]
    fn enumeration_small_cases() {
        let square = Target::from_complex(&cx(&["12"]));
        assert_eq!(enumerate_intervals(&square, 2), vec![iv("", "12")]);
        let two_points = Target::from_complex(&cx(&["1", "2"]));
        assert_eq!(
            enumerate_intervals(&two_points, 1),
            vec![iv("", "1"), iv("", "2")]
        );
        assert_eq!(enumerate_intervals(&two_points, 0).len(), 3);
    }

    #[test]
    fn psi_contains_the_cube_over_13() {
        assert!(enumerate_intervals(&psi(), 2).contains(&iv("13", "1234")));
    }

    #[test]
    fn psi_is_not_rank_two_decomposable() {
        let d = find_interval_decomposition(&psi(), 2, false, &SolverConfig::default());
        assert!(
            matches!(d, Decomposition::Infeasible(Infeasible::Exhausted { .. })),
            "{d:?}"
        );
    }

    #[test]
    fn count_gate() {
        let t = Target::from_complex(&cx(&["12", "13", "23"]));
        let d = find_interval_decomposition(&t, 1, false, &SolverConfig::default());
        assert!(matches!(
            d,
            Decomposition::Infeasible(Infeasible::Count {
                faces: 7,
                part_size: 2
            })
        ));
    }

    #[test]
    fn two_triangles_with_closed_minima() {
        let c = cx(&["123", "234"]);
        let t = Target::from_complex(&c);
        let cert = find_interval_decomposition(&t, 2, true, &SolverConfig::default())
            .into_certificate()
            .unwrap();
        assert!(verify_certificate(&cert, &t));
        assert!(cert.minima_form_subcomplex);
        assert_eq!(cert.parts.len(), 3);
    }

    #[test]
    fn edge_matching() {
        let cert = rank1_acyclic_matching(&cx(&["12"]), &SolverConfig::default()).unwrap();
        let t = Target::from_complex(&cx(&["12"]));
        assert!(verify_certificate(&cert, &t));
        assert!(cert.minima_form_subcomplex);
        assert_eq!(cert.minima.len(), 2);
        assert!(cert.minima.contains(&Face::empty()));
    }

    #[test]
    fn circle_is_rejected() {
        assert_eq!(
            rank1_acyclic_matching(&cx(&["12", "13", "23"]), &SolverConfig::default()),
            Err(MatchingError::NotAcyclic)
        );
    }

    #[test]
    fn parallel_matches_sequential() {
        let c = cx(&["1234", "1235", "2345", "2456", "3456"]);
        let t = Target::from_complex(&c);
        for k in 1..=2 {
            for minima in [false, true] {
                let seq = find_interval_decomposition(&t, k, minima, &SolverConfig::default());
                let par = find_interval_decomposition(
                    &t,
                    k,
                    minima,
                    &SolverConfig {
                        parallel: true,
                        ..Default::default()
                    },
                );
                assert_eq!(seq.is_found(), par.is_found());
                assert_eq!(
                    seq.certificate().map(|c| &c.parts),
                    par.certificate().map(|c| &c.parts)
                );
            }
        }
    }
}
