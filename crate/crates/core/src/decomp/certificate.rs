//! Decomposition certificates and their independent verification.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::tree::BooleanTree;
use super::{BooleanInterval, Target};
use crate::complex::{Face, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartKind {
    Interval,
    Tree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Part {
    Interval(BooleanInterval),
    Tree(BooleanTree),
}

impl Part {
    pub fn minimum(&self) -> &Face {
        match self {
            Part::Interval(i) => &i.min,
            Part::Tree(t) => t.root(),
        }
    }

    pub fn faces(&self) -> Vec<Face> {
        match self {
            Part::Interval(i) => i.faces().collect(),
            Part::Tree(t) => t.faces(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub nodes: u64,
    pub seed: u64,
    pub wallclock_ms: Option<u64>,
}

/// One facet of a stacked shelling with the vertex it introduces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellingStep {
    pub facet: Face,
    pub new_vertex: Option<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCertificate {
    pub kind: PartKind,
    pub rank: usize,
    pub target_hash: String,
    /// Where the target came from, e.g. `builtin:Omega3`.
    #[serde(default)]
    pub source: Option<String>,
    pub parts: Vec<Part>,
    pub minima: Vec<Face>,
    pub minima_form_subcomplex: bool,
    pub solver: SolverStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shelling: Option<Vec<ShellingStep>>,
}

impl DecompositionCertificate {
    pub(crate) fn build(
        target: &Target,
        kind: PartKind,
        rank: usize,
        mut parts: Vec<Part>,
        stats: SolverStats,
    ) -> Self {
        parts.sort_by(|a, b| {
            a.minimum()
                .cmp(b.minimum())
                .then_with(|| a.faces().iter().max().cmp(&b.faces().iter().max()))
        });
        let mut minima: Vec<Face> = parts.iter().map(|p| p.minimum().clone()).collect();
        minima.sort();
        let closed = target.is_closed_within(&minima);
        DecompositionCertificate {
            kind,
            rank,
            target_hash: target.hash(),
            source: target.source().map(str::to_owned),
            parts,
            minima,
            minima_form_subcomplex: closed,
            solver: stats,
            shelling: None,
        }
    }

    pub(crate) fn from_intervals(
        target: &Target,
        rank: usize,
        intervals: Vec<BooleanInterval>,
        nodes: u64,
        seed: u64,
        wallclock_ms: Option<u64>,
    ) -> Self {
        Self::build(
            target,
            PartKind::Interval,
            rank,
            intervals.into_iter().map(Part::Interval).collect(),
            SolverStats {
                nodes,
                seed,
                wallclock_ms,
            },
        )
    }

    pub fn intervals(&self) -> Vec<&BooleanInterval> {
        self.parts
            .iter()
            .filter_map(|p| match p {
                Part::Interval(i) => Some(i),
                Part::Tree(_) => None,
            })
            .collect()
    }

    pub fn trees(&self) -> Vec<&BooleanTree> {
        self.parts
            .iter()
            .filter_map(|p| match p {
                Part::Tree(t) => Some(t),
                Part::Interval(_) => None,
            })
            .collect()
    }

    /// The same decomposition with every interval rewritten as a tree.
    pub fn as_trees(&self) -> DecompositionCertificate {
        let mut c = self.clone();
        c.kind = PartKind::Tree;
        c.parts = self
            .parts
            .iter()
            .map(|p| match p {
                Part::Interval(i) => Part::Tree(BooleanTree::from_interval(i)),
                Part::Tree(t) => Part::Tree(t.clone()),
            })
            .collect();
        c
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("target hash mismatch: certificate {certificate}, target {target}")]
    HashMismatch { certificate: String, target: String },
    #[error("part {index} has the wrong kind")]
    WrongKind { index: usize },
    #[error("part {index} is not a valid rank-{rank} part")]
    InvalidPart { index: usize, rank: usize },
    #[error("part {index} contains {face}, which is not in the target")]
    OutsideTarget { index: usize, face: Face },
    #[error("face {0} is covered twice")]
    Overlap(Face),
    #[error("face {0} is not covered")]
    Uncovered(Face),
    #[error("listed minima differ from the minima of the parts")]
    MinimaMismatch,
    #[error("minima claimed to form a subcomplex but {0} lies below a minimum without being one")]
    MinimaNotClosed(Face),
    #[error("shelling annotation is not a stacked shelling of the target")]
    BadShelling,
}

/// Checks a certificate against the target from scratch.
pub fn check_certificate(
    cert: &DecompositionCertificate,
    target: &Target,
) -> Result<(), CertificateError> {
    let hash = target.hash();
    if cert.target_hash != hash {
        return Err(CertificateError::HashMismatch {
            certificate: cert.target_hash.clone(),
            target: hash,
        });
    }
    let mut seen: HashSet<Face> = HashSet::new();
    for (index, part) in cert.parts.iter().enumerate() {
        let valid = match (cert.kind, part) {
            (PartKind::Interval, Part::Interval(i)) => {
                i.min.is_subset(&i.max) && i.rank() == cert.rank
            }
            (PartKind::Tree, Part::Tree(t)) => t.is_valid_shape() && t.rank() == cert.rank,
            _ => return Err(CertificateError::WrongKind { index }),
        };
        if !valid {
            return Err(CertificateError::InvalidPart {
                index,
                rank: cert.rank,
            });
        }
        for face in part.faces() {
            if !target.contains(&face) {
                return Err(CertificateError::OutsideTarget { index, face });
            }
            if !seen.insert(face.clone()) {
                return Err(CertificateError::Overlap(face));
            }
        }
    }
    if let Some(missing) = target.faces().iter().find(|f| !seen.contains(*f)) {
        return Err(CertificateError::Uncovered(missing.clone()));
    }
    let mut minima: Vec<Face> = cert.parts.iter().map(|p| p.minimum().clone()).collect();
    minima.sort();
    let mut listed = cert.minima.clone();
    listed.sort();
    if minima != listed {
        return Err(CertificateError::MinimaMismatch);
    }
    if cert.minima_form_subcomplex {
        let set: HashSet<&Face> = minima.iter().collect();
        for m in &minima {
            if let Some(bad) = m.subsets().find(|s| target.contains(s) && !set.contains(s)) {
                return Err(CertificateError::MinimaNotClosed(bad));
            }
        }
    }
    if let Some(steps) = &cert.shelling {
        let facets: Vec<Face> = steps.iter().map(|s| s.facet.clone()).collect();
        let complex = crate::complex::SimplicialComplex::from_facets(facets.clone());
        let same = Target::from_complex(&complex).hash() == hash;
        let shelling = crate::stacked::StackedShelling::from_order(facets);
        let annotated = shelling.as_ref().is_some_and(|s| {
            s.new_vertices()
                .iter()
                .zip(steps)
                .all(|(v, st)| *v == st.new_vertex)
        });
        if !same || !annotated {
            return Err(CertificateError::BadShelling);
        }
    }
    Ok(())
}

pub fn verify_certificate(cert: &DecompositionCertificate, target: &Target) -> bool {
    check_certificate(cert, target).is_ok()
}
