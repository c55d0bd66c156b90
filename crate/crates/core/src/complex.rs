//! Faces, simplicial complexes and relative complexes.
//!
//! A [`Face`] is a strictly increasing list of vertex ids. A
//! [`SimplicialComplex`] stores every face explicitly (not only its facets),
//! which keeps the poset operations used by the decomposition engines simple.
//! Display labels live in a side table so that faces compare as plain
//! integer sequences.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpoly::FPolynomial;

pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("not-a-face: {0} is not a face of the complex")]
    NotAFace(Face),
    #[error("not-a-subcomplex: {0} is a face of the subcomplex but not of the complex")]
    NotSubcomplex(Face),
}

/// A finite set of vertices, kept sorted.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(Vec<Vertex>);

impl Face {
    pub fn empty() -> Self {
        Face(Vec::new())
    }

    /// Builds a face from any list of vertices; duplicates collapse.
    pub fn new<I: IntoIterator<Item = Vertex>>(vertices: I) -> Self {
        let mut v: Vec<Vertex> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Face(v)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    /// Number of vertices, `|σ|`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|σ| - 1`; the empty face has dimension -1.
    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &Face) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for v in &self.0 {
            for w in it.by_ref() {
                if w == v {
                    continue 'outer;
                }
                if w > v {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_disjoint(&self, other: &Face) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &Face) -> Face {
        Face::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn difference(&self, other: &Face) -> Face {
        Face(
            self.0
                .iter()
                .copied()
                .filter(|v| !other.contains(*v))
                .collect(),
        )
    }

    pub fn with(&self, v: Vertex) -> Face {
        match self.0.binary_search(&v) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut w = self.0.clone();
                w.insert(pos, v);
                Face(w)
            }
        }
    }

    pub fn without(&self, v: Vertex) -> Face {
        Face(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    /// All `2^|σ|` subsets, in no particular order.
    pub fn subsets(&self) -> impl Iterator<Item = Face> + '_ {
        let n = self.0.len();
        assert!(n < 64, "face too large to enumerate subsets");
        (0u64..(1u64 << n)).map(move |mask| {
            Face(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
    }

    /// Faces obtained by deleting exactly one vertex.
    pub fn boundary_faces(&self) -> impl Iterator<Item = Face> + '_ {
        (0..self.0.len()).map(move |i| {
            let mut w = self.0.clone();
            w.remove(i);
            Face(w)
        })
    }

    /// Renders the face with the given label table, e.g. `ABI` or `{1,2,3}`.
    pub fn display_with<'a>(&'a self, labels: &'a BTreeMap<Vertex, String>) -> FaceDisplay<'a> {
        FaceDisplay { face: self, labels }
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl<const N: usize> From<[Vertex; N]> for Face {
    fn from(v: [Vertex; N]) -> Self {
        Face::new(v)
    }
}

impl From<&[Vertex]> for Face {
    fn from(v: &[Vertex]) -> Self {
        Face::new(v.iter().copied())
    }
}

impl FromIterator<Vertex> for Face {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        Face::new(iter)
    }
}

pub struct FaceDisplay<'a> {
    face: &'a Face,
    labels: &'a BTreeMap<Vertex, String>,
}

impl fmt::Display for FaceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.face.is_empty() {
            return write!(f, "∅");
        }
        let labels: Vec<String> = self
            .face
            .vertices()
            .iter()
            .map(|v| self.labels.get(v).cloned().unwrap_or_else(|| v.to_string()))
            .collect();
        if labels.iter().all(|l| l.chars().count() == 1) {
            write!(f, "{}", labels.concat())
        } else {
            write!(f, "{}", labels.join(" "))
        }
    }
}

/// A downward-closed family of faces.
///
/// The void complex has no faces at all and is distinct from `{∅}`.
/// Equality compares faces only; labels are display metadata.
#[derive(Clone, Default)]
pub struct SimplicialComplex {
    faces: BTreeSet<Face>,
    labels: BTreeMap<Vertex, String>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.faces == other.faces
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facets: Vec<String> = self
            .facets()
            .iter()
            .map(|s| s.display_with(&self.labels).to_string())
            .collect();
        write!(f, "⟨{}⟩", facets.join(", "))
    }
}

impl SimplicialComplex {
    /// The complex with no faces.
    pub fn void() -> Self {
        Self::default()
    }

    /// Downward closure of the given faces. An empty list yields the void
    /// complex; `[∅]` yields `{∅}`.
    pub fn from_facets<I, F>(facets: I) -> Self
    where
        I: IntoIterator<Item = F>,
        F: Into<Face>,
    {
        let mut faces = BTreeSet::new();
        for facet in facets {
            let facet: Face = facet.into();
            if faces.contains(&facet) {
                continue;
            }
            for s in facet.subsets() {
                faces.insert(s);
            }
        }
        SimplicialComplex {
            faces,
            labels: BTreeMap::new(),
        }
    }

    /// Wraps a face set that the caller knows to be downward closed.
    pub(crate) fn from_closed_faces(faces: BTreeSet<Face>) -> Self {
        debug_assert!(is_downward_closed(&faces));
        SimplicialComplex {
            faces,
            labels: BTreeMap::new(),
        }
    }

    /// The full simplex on the given vertices.
    pub fn simplex<I: IntoIterator<Item = Vertex>>(vertices: I) -> Self {
        Self::from_facets([Face::new(vertices)])
    }

    pub fn with_labels(mut self, labels: BTreeMap<Vertex, String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn labels(&self) -> &BTreeMap<Vertex, String> {
        &self.labels
    }

    pub fn label(&self, v: Vertex) -> String {
        self.labels
            .get(&v)
            .cloned()
            .unwrap_or_else(|| v.to_string())
    }

    pub fn faces(&self) -> &BTreeSet<Face> {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.faces.contains(face)
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.faces
            .iter()
            .filter(|f| f.len() == 1)
            .map(|f| f.vertices()[0])
            .collect()
    }

    /// Maximal faces, in lexicographic order.
    pub fn facets(&self) -> Vec<Face> {
        let verts = self.vertices();
        self.faces
            .iter()
            .filter(|f| {
                !verts
                    .iter()
                    .any(|&v| !f.contains(v) && self.faces.contains(&f.with(v)))
            })
            .cloned()
            .collect()
    }

    /// `max |σ| - 1`; both `{∅}` and the void complex report -1.
    pub fn dimension(&self) -> isize {
        self.faces.iter().map(|f| f.dim()).max().unwrap_or(-1)
    }

    pub fn is_pure(&self) -> bool {
        let facets = self.facets();
        facets.windows(2).all(|w| w[0].len() == w[1].len())
    }

    /// Faces with exactly `size` vertices, lexicographically ordered.
    pub fn faces_of_size(&self, size: usize) -> Vec<Face> {
        self.faces
            .iter()
            .filter(|f| f.len() == size)
            .cloned()
            .collect()
    }

    pub fn f_polynomial(&self) -> FPolynomial {
        FPolynomial::from_faces(self.faces.iter())
    }

    pub fn link(&self, sigma: &Face) -> Result<SimplicialComplex, ComplexError> {
        if !self.contains(sigma) {
            return Err(ComplexError::NotAFace(sigma.clone()));
        }
        let faces = self
            .faces
            .iter()
            .filter(|tau| tau.is_disjoint(sigma) && self.faces.contains(&tau.union(sigma)))
            .cloned()
            .collect();
        Ok(SimplicialComplex {
            faces,
            labels: self.labels.clone(),
        })
    }

    pub fn induced_subcomplex(&self, w: &BTreeSet<Vertex>) -> SimplicialComplex {
        let faces = self
            .faces
            .iter()
            .filter(|f| f.vertices().iter().all(|v| w.contains(v)))
            .cloned()
            .collect();
        SimplicialComplex {
            faces,
            labels: self.labels.clone(),
        }
    }

    pub fn is_subcomplex(&self, sub: &SimplicialComplex) -> bool {
        sub.faces.is_subset(&self.faces)
    }

    /// `sub` is a subcomplex equal to the induced subcomplex on its own vertices.
    pub fn is_induced_subcomplex(&self, sub: &SimplicialComplex) -> bool {
        if !self.is_subcomplex(sub) {
            return false;
        }
        let w: BTreeSet<Vertex> = sub.vertices().into_iter().collect();
        self.faces
            .iter()
            .filter(|f| f.vertices().iter().all(|v| w.contains(v)))
            .all(|f| sub.faces.contains(f))
    }

    pub fn relative(&self, sub: &SimplicialComplex) -> Result<RelativeComplex, ComplexError> {
        RelativeComplex::new(self.clone(), sub.clone())
    }

    /// Join with a complex on disjoint vertices. Overlapping vertices of
    /// `other` are moved to fresh ids; the map old → new is returned.
    pub fn join(&self, other: &SimplicialComplex) -> Join {
        let mine: BTreeSet<Vertex> = self.vertices().into_iter().collect();
        let theirs = other.vertices();
        let mut next = mine.iter().chain(theirs.iter()).max().map_or(0, |m| m + 1);
        let mut relabeling = BTreeMap::new();
        if theirs.iter().any(|v| mine.contains(v)) {
            for &v in &theirs {
                relabeling.insert(v, next);
                next += 1;
            }
        }
        let map = |v: Vertex| *relabeling.get(&v).unwrap_or(&v);
        let mut faces = BTreeSet::new();
        for a in &self.faces {
            for b in &other.faces {
                faces.insert(a.union(&Face::new(b.vertices().iter().map(|&v| map(v)))));
            }
        }
        let mut labels = self.labels.clone();
        for (v, l) in &other.labels {
            labels.insert(map(*v), l.clone());
        }
        Join {
            complex: SimplicialComplex { faces, labels },
            relabeling,
        }
    }

    /// Join with a simplex on `k` fresh vertices (a `k`-fold cone).
    pub fn cone(&self, k: usize) -> SimplicialComplex {
        let start = self.vertices().last().map_or(0, |m| m + 1);
        let apex = SimplicialComplex::simplex(start..start + k as Vertex);
        self.join(&apex).complex
    }

    /// Applies a vertex map, which must be injective on the vertex set.
    pub fn relabel<F: Fn(Vertex) -> Vertex>(&self, map: F) -> SimplicialComplex {
        let faces = self
            .faces
            .iter()
            .map(|f| Face::new(f.vertices().iter().map(|&v| map(v))))
            .collect();
        let labels = self
            .labels
            .iter()
            .map(|(v, l)| (map(*v), l.clone()))
            .collect();
        SimplicialComplex { faces, labels }
    }
}

#[derive(Debug, Clone)]
pub struct Join {
    pub complex: SimplicialComplex,
    /// Vertices of the second factor that were renamed, old → new.
    pub relabeling: BTreeMap<Vertex, Vertex>,
}

pub(crate) fn is_downward_closed(faces: &BTreeSet<Face>) -> bool {
    faces
        .iter()
        .all(|f| f.boundary_faces().all(|g| faces.contains(&g)))
}

/// The faces of `total` that are not faces of `sub`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeComplex {
    total: SimplicialComplex,
    sub: SimplicialComplex,
}

impl RelativeComplex {
    pub fn new(total: SimplicialComplex, sub: SimplicialComplex) -> Result<Self, ComplexError> {
        if let Some(f) = sub.faces.iter().find(|f| !total.faces.contains(*f)) {
            return Err(ComplexError::NotSubcomplex(f.clone()));
        }
        Ok(RelativeComplex { total, sub })
    }

    pub fn total(&self) -> &SimplicialComplex {
        &self.total
    }

    pub fn sub(&self) -> &SimplicialComplex {
        &self.sub
    }

    /// Exposed faces in lexicographic order.
    pub fn faces(&self) -> Vec<Face> {
        self.total
            .faces
            .iter()
            .filter(|f| !self.sub.faces.contains(*f))
            .cloned()
            .collect()
    }

    pub fn len(&self) -> usize {
        self.total.len() - self.sub.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn f_polynomial(&self) -> FPolynomial {
        FPolynomial::from_faces(self.faces().iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn f(s: &str) -> Face {
        Face::new(s.chars().map(|c| c.to_digit(10).unwrap()))
    }

    fn cx(facets: &[&str]) -> SimplicialComplex {
        SimplicialComplex::from_facets(facets.iter().map(|s| f(s)))
    }

    fn sigma() -> SimplicialComplex {
        cx(&["1234", "1235", "2345", "2456", "3456"])
    }

    #[test]
    fn closure_of_triangle() {
        let c = cx(&["123"]);
        assert_eq!(c.len(), 8);
        assert_eq!(c.facets(), vec![f("123")]);
    }

    #[test]
    fn non_maximal_inputs_are_absorbed() {
        let c = cx(&["12", "1"]);
        assert_eq!(c.facets(), vec![f("12")]);
    }

    #[test]
    fn sigma_f_vector_by_enumeration() {
        // Independent count: every subset of every facet, deduplicated by bitmask.
        let facets = ["1234", "1235", "2345", "2456", "3456"];
        let mut masks = HashSet::new();
        for s in facets {
            let m: u32 = s.chars().map(|c| 1 << c.to_digit(10).unwrap()).sum();
            let mut sub = m;
            loop {
                masks.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & m;
            }
        }
        let mut counts = [0i64; 5];
        for m in masks {
            counts[m.count_ones() as usize] += 1;
        }
        assert_eq!(counts, [1, 6, 14, 14, 5]);
        assert_eq!(sigma().f_polynomial().coeffs(), &counts);
        // reduced Euler characteristic
        assert_eq!(-1 + 6 - 14 + 14 - 5, 0);
    }

    #[test]
    fn void_and_empty_face_complexes_differ() {
        let void = SimplicialComplex::from_facets(Vec::<Face>::new());
        assert!(void.is_void());
        let point = SimplicialComplex::from_facets([Face::empty()]);
        assert_eq!(point.len(), 1);
        assert_ne!(void, point);
    }

    #[test]
    fn links() {
        let s = sigma();
        assert_eq!(s.link(&f("5")).unwrap(), cx(&["123", "234", "246", "346"]));
        assert_eq!(s.link(&Face::empty()).unwrap(), s);
        assert_eq!(cx(&["123"]).link(&f("12")).unwrap(), cx(&["3"]));
        assert_eq!(s.link(&f("16")), Err(ComplexError::NotAFace(f("16"))));
    }

    #[test]
    fn joins_and_cones() {
        let j = cx(&["1"]).join(&cx(&["2"]));
        assert_eq!(j.complex, cx(&["12"]));
        assert_eq!(j.complex.len(), 4);
        assert!(j.relabeling.is_empty());

        let tri = cx(&["12", "13", "23"]);
        let c = tri.cone(1);
        assert_eq!(c.len(), 14);
        assert_eq!(c, cx(&["124", "134", "234"]));

        let overlap = cx(&["12"]).join(&cx(&["2"]));
        assert_eq!(overlap.relabeling.get(&2), Some(&3));
        assert_eq!(overlap.complex, cx(&["123"]));
    }

    #[test]
    fn induced_and_relative() {
        let s = sigma();
        let w: BTreeSet<Vertex> = [1, 2, 3, 4].into();
        assert_eq!(s.induced_subcomplex(&w), cx(&["1234"]));
        assert_eq!(s.induced_subcomplex(&BTreeSet::new()), cx(&[""]));

        let upsilon = cx(&["125", "124", "246", "346"]);
        assert!(s.is_subcomplex(&upsilon));
        assert!(!s.is_induced_subcomplex(&upsilon));
        let psi = s.relative(&upsilon).unwrap();
        assert_eq!(psi.len(), 20);
        assert_eq!(psi.f_polynomial().coeffs(), &[0, 0, 5, 10, 5]);

        assert!(s.relative(&s).unwrap().is_empty());
        assert!(upsilon.relative(&s).is_err());
    }

    #[test]
    fn purity_and_dimension() {
        assert!(sigma().is_pure());
        assert_eq!(sigma().dimension(), 3);
        assert!(!cx(&["12", "3"]).is_pure());
    }

    #[test]
    fn subset_helpers() {
        assert!(f("13").is_subset(&f("123")));
        assert!(!f("14").is_subset(&f("123")));
        assert!(Face::empty().is_subset(&f("1")));
        assert!(f("12").is_disjoint(&f("34")));
        assert_eq!(f("123").difference(&f("2")), f("13"));
        assert_eq!(f("13").with(2), f("123"));
    }
}
