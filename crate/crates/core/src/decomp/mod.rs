//! Rank-k boolean interval and boolean tree decompositions of face posets.
//!
//! A decomposition partitions a [`Target`] face set into parts that are all
//! isomorphic to the boolean lattice `2^[k]` (intervals) or are rank-k
//! boolean trees. Every search in this module is complete: an
//! [`Decomposition::Infeasible`] answer means no decomposition exists, while
//! running out of node budget is reported separately as
//! [`Decomposition::Unknown`].

mod certificate;
mod exact;
mod interval;
mod separator;
mod tree;
mod weights;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::complex::{Face, RelativeComplex, SimplicialComplex};

pub use certificate::{
    check_certificate, verify_certificate, CertificateError, DecompositionCertificate, Part,
    PartKind, ShellingStep, SolverStats,
};
pub use interval::{
    enumerate_intervals, find_interval_decomposition, rank1_acyclic_matching, MatchingError,
};
pub use tree::{find_tree_decomposition, BooleanTree};
pub use weights::{FaceWeighting, WeightedFace};

/// A rank-k boolean interval `[min, max]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BooleanInterval {
    pub min: Face,
    pub max: Face,
}

impl BooleanInterval {
    /// Panics unless `min ⊆ max`.
    pub fn new(min: Face, max: Face) -> Self {
        assert!(min.is_subset(&max), "{min} is not a subset of {max}");
        BooleanInterval { min, max }
    }

    pub fn rank(&self) -> usize {
        self.max.len() - self.min.len()
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.min.is_subset(face) && face.is_subset(&self.max)
    }

    /// All `2^rank` faces of the interval.
    pub fn faces(&self) -> impl Iterator<Item = Face> + '_ {
        let free = self.max.difference(&self.min);
        let subsets: Vec<Face> = free.subsets().collect();
        subsets.into_iter().map(move |s| s.union(&self.min))
    }
}

impl fmt::Debug for BooleanInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.min, self.max)
    }
}

/// The face set being decomposed, in lexicographic order.
///
/// For a relative complex `(Δ, Γ)` the faces are `Δ ∖ Γ`. "Minima form a
/// subcomplex" is always read relative to the target: every face of the
/// target lying below a minimum must itself be a minimum. For an absolute
/// complex this is exactly downward closure.
#[derive(Clone)]
pub struct Target {
    faces: Vec<Face>,
    index: HashMap<Face, usize>,
    source: Option<String>,
}

impl Target {
    pub fn from_faces<I: IntoIterator<Item = Face>>(faces: I) -> Self {
        let mut faces: Vec<Face> = faces.into_iter().collect();
        faces.sort();
        faces.dedup();
        let index = faces
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect();
        Target {
            faces,
            index,
            source: None,
        }
    }

    pub fn from_complex(c: &SimplicialComplex) -> Self {
        Self::from_faces(c.faces().iter().cloned())
    }

    pub fn from_relative(r: &RelativeComplex) -> Self {
        Self::from_faces(r.faces())
    }

    /// Records where the target came from (a path or `builtin:NAME`), so that
    /// certificates can be re-verified without extra arguments.
    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = Some(source.into());
        self
    }

    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn index_of(&self, f: &Face) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn contains(&self, f: &Face) -> bool {
        self.index.contains_key(f)
    }

    /// SHA-256 of the canonical face listing.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for f in &self.faces {
            let s: Vec<String> = f.vertices().iter().map(|v| v.to_string()).collect();
            h.update(s.join(",").as_bytes());
            h.update(b";");
        }
        hex::encode(h.finalize())
    }

    /// Whether every target face below a member of `minima` is in `minima`.
    pub fn is_closed_within(&self, minima: &[Face]) -> bool {
        let set: std::collections::HashSet<&Face> = minima.iter().collect();
        // all subsets, not just codimension one: relative targets have gaps
        minima
            .iter()
            .all(|m| m.subsets().all(|s| !self.contains(&s) || set.contains(&s)))
    }

    /// For each face, the indices of the target faces strictly below and
    /// strictly above it.
    pub(crate) fn closure_tables(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let mut below = vec![Vec::new(); self.len()];
        let mut above = vec![Vec::new(); self.len()];
        for (i, f) in self.faces.iter().enumerate() {
            for s in f.subsets() {
                if s.len() == f.len() {
                    continue;
                }
                if let Some(j) = self.index_of(&s) {
                    below[i].push(j);
                    above[j].push(i);
                }
            }
        }
        for v in below.iter_mut().chain(above.iter_mut()) {
            v.sort_unstable();
        }
        (below, above)
    }
}

impl fmt::Debug for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Target({} faces", self.faces.len())?;
        if let Some(s) = &self.source {
            write!(f, ", {s}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub node_budget: u64,
    /// Recorded in certificates; the search itself is deterministic.
    pub seed: u64,
    /// Explore the branches of the root choice on the rayon pool.
    pub parallel: bool,
    /// Fill `wallclock_ms` in certificates (off keeps reports byte-stable).
    pub timing: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            node_budget: 1_000_000_000,
            seed: 0,
            parallel: false,
            timing: false,
        }
    }
}

/// Why no decomposition exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "lowercase")]
pub enum Infeasible {
    /// `2^k` does not divide the number of faces.
    Count { faces: usize, part_size: usize },
    /// The complete search finished without a solution. When a face
    /// weighting is attached it alone rules out every decomposition and the
    /// search was not needed.
    Exhausted {
        nodes: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weighting: Option<FaceWeighting>,
    },
}

#[derive(Debug, Clone)]
pub enum Decomposition {
    Found(DecompositionCertificate),
    Infeasible(Infeasible),
    /// The node budget ran out first; says nothing about existence.
    Unknown {
        nodes: u64,
    },
}

impl Decomposition {
    pub fn certificate(&self) -> Option<&DecompositionCertificate> {
        match self {
            Decomposition::Found(c) => Some(c),
            _ => None,
        }
    }

    pub fn into_certificate(self) -> Option<DecompositionCertificate> {
        match self {
            Decomposition::Found(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Decomposition::Found(_))
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, Decomposition::Infeasible(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Decomposition::Unknown { .. })
    }

    pub fn nodes(&self) -> u64 {
        match self {
            Decomposition::Found(c) => c.solver.nodes,
            Decomposition::Infeasible(Infeasible::Exhausted { nodes, .. }) => *nodes,
            Decomposition::Infeasible(Infeasible::Count { .. }) => 0,
            Decomposition::Unknown { nodes } => *nodes,
        }
    }
}
