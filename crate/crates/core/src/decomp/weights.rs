//! Face weightings that rule out interval decompositions.
//!
//! If integer weights on the target faces give every candidate interval a
//! total weight `≤ 0` while the whole target weighs `> 0`, no disjoint
//! union of candidate intervals can be the target. Such a weighting is a
//! dual solution of the fractional covering problem; it is found with a
//! floating-point LP, rounded, and then checked in exact arithmetic, so a
//! weighting is only ever reported after it has been verified.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

use super::{enumerate_intervals, Target};
use crate::complex::Face;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedFace {
    pub face: Face,
    pub weight: i64,
}

/// Weights of the target faces (faces not listed weigh 0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceWeighting {
    pub weights: Vec<WeightedFace>,
}

impl FaceWeighting {
    pub fn total(&self) -> i64 {
        self.weights.iter().map(|w| w.weight).sum()
    }

    /// Checks from scratch that the weighting rules out every rank-`k`
    /// interval decomposition of `target`.
    pub fn rules_out(&self, target: &Target, k: usize) -> bool {
        let mut w = vec![0i64; target.len()];
        for wf in &self.weights {
            match target.index_of(&wf.face) {
                Some(i) => w[i] += wf.weight,
                None => return false,
            }
        }
        let blocks: Vec<Vec<usize>> = enumerate_intervals(target, k)
            .iter()
            .map(|iv| iv.faces().map(|f| target.index_of(&f).unwrap()).collect())
            .collect();
        admissible(&w, &blocks)
    }
}

fn admissible(w: &[i64], blocks: &[Vec<usize>]) -> bool {
    w.iter().sum::<i64>() > 0
        && blocks
            .iter()
            .all(|b| b.iter().map(|&i| w[i]).sum::<i64>() <= 0)
}

/// Largest denominator tried when rounding the LP solution.
const MAX_SCALE: i64 = 64;

/// Maximises the total weight subject to every block weighing at most 0
/// and weights in `[-n, 1]`, then looks for an exact integer weighting
/// among small multiples of the optimum.
pub(crate) fn find_weighting(target: &Target, blocks: &[Vec<usize>]) -> Option<FaceWeighting> {
    let n = target.len();
    if n == 0 {
        return None;
    }
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = (0..n)
        .map(|_| lp.add_var(1.0, (-(n as f64), 1.0)))
        .collect();
    for b in blocks {
        lp.add_constraint(b.iter().map(|&i| (vars[i], 1.0)), ComparisonOp::Le, 0.0);
    }
    let solution = lp.solve().ok()?;
    if solution.objective() < 1e-6 {
        return None;
    }
    let y: Vec<f64> = vars.iter().map(|&v| *solution.var_value(v)).collect();
    (1..=MAX_SCALE).find_map(|d| {
        let w: Vec<i64> = y.iter().map(|v| (v * d as f64).round() as i64).collect();
        admissible(&w, blocks).then(|| FaceWeighting {
            weights: target
                .faces()
                .iter()
                .zip(&w)
                .filter(|(_, &x)| x != 0)
                .map(|(f, &weight)| WeightedFace {
                    face: f.clone(),
                    weight,
                })
                .collect(),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;

    #[test]
    fn edge_plus_point_at_rank_one() {
        // five faces: odd, so the weighting below must exist
        let c = SimplicialComplex::from_facets([Face::new([1, 2]), Face::new([3])]);
        let t = Target::from_complex(&c);
        let blocks: Vec<Vec<usize>> = vec![];
        assert!(find_weighting(&t, &blocks).is_some());
        let w = FaceWeighting {
            weights: vec![
                WeightedFace {
                    face: Face::new([1]),
                    weight: 1,
                },
                WeightedFace {
                    face: Face::new([2]),
                    weight: 1,
                },
                WeightedFace {
                    face: Face::new([1, 2]),
                    weight: -1,
                },
                WeightedFace {
                    face: Face::empty(),
                    weight: -1,
                },
                WeightedFace {
                    face: Face::new([3]),
                    weight: 1,
                },
            ],
        };
        assert_eq!(w.total(), 1);
        assert!(w.rules_out(&t, 1));
    }

    #[test]
    fn feasible_target_has_no_weighting() {
        let c = SimplicialComplex::from_facets([Face::new([1, 2])]);
        let t = Target::from_complex(&c);
        let blocks = enumerate_intervals(&t, 1)
            .iter()
            .map(|iv| iv.faces().map(|f| t.index_of(&f).unwrap()).collect())
            .collect::<Vec<_>>();
        assert_eq!(find_weighting(&t, &blocks), None);
    }
}
