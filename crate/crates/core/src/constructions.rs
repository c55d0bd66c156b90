//! Named complexes, the gluing construction `Ω_N`, barycentric subdivision
//! and random generators.
//!
//! The labelled complexes `Γ` and `Δ` use the vertex ids `A = 0, …, L = 11`.
//! `Σ`, `Υ` use the ids `1..=6`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex::{Face, RelativeComplex, SimplicialComplex, Vertex};

const GAMMA_FACETS: [&str; 9] = [
    "ABCE", "BCEF", "BCDF", "ABCG", "BCGH", "BCDH", "ABEG", "BEFG", "BFHG",
];

/// The facets of `Δ` outside `Γ`, one row per glued copy of `Σ`.
const DELTA_EXTRA_FACETS: [[&str; 5]; 6] = [
    ["ABCJ", "ABIJ", "BCIJ", "BCDI", "CDIJ"],
    ["ABEK", "ABIK", "BEIK", "BEFI", "EFIK"],
    ["ABGL", "ABIL", "BGIL", "BGHI", "GHIL"],
    ["CDFK", "CDJK", "CFJK", "CEFJ", "EFJK"],
    ["CDHL", "CDJL", "CHJL", "CGHJ", "GHJL"],
    ["EFGL", "EFKL", "FGKL", "FGHK", "GHKL"],
];

/// The triangles added to the edges `AB, CD, EF, GH`.
const EAR_TRIANGLES: [&str; 4] = ["ABI", "CDJ", "EFK", "GHL"];

fn digits(s: &str) -> Face {
    Face::new(s.chars().map(|c| c.to_digit(10).expect("digit")))
}

fn letters(s: &str) -> Face {
    Face::new(s.chars().map(|c| c as Vertex - 'A' as Vertex))
}

fn letter_labels(n: u32) -> BTreeMap<Vertex, String> {
    (0..n)
        .map(|v| (v, char::from_u32('A' as u32 + v).unwrap().to_string()))
        .collect()
}

pub fn sigma() -> SimplicialComplex {
    SimplicialComplex::from_facets(["1234", "1235", "2345", "2456", "3456"].map(digits))
}

pub fn upsilon() -> SimplicialComplex {
    SimplicialComplex::from_facets(["125", "124", "246", "346"].map(digits))
}

/// `(Σ, Υ)`: twenty faces that admit no rank-2 interval decomposition.
pub fn psi() -> RelativeComplex {
    sigma().relative(&upsilon()).expect("Υ ⊆ Σ")
}

pub fn gamma_paper() -> SimplicialComplex {
    SimplicialComplex::from_facets(GAMMA_FACETS.map(letters)).with_labels(letter_labels(8))
}

pub fn delta_paper() -> SimplicialComplex {
    let facets = GAMMA_FACETS
        .iter()
        .chain(DELTA_EXTRA_FACETS.iter().flatten())
        .map(|s| letters(s));
    SimplicialComplex::from_facets(facets).with_labels(letter_labels(12))
}

pub fn phi_paper() -> RelativeComplex {
    delta_paper().relative(&gamma_paper()).expect("Γ ⊆ Δ")
}

/// `N` copies of `Δ` glued along `Γ`.
pub fn omega(n: usize) -> SimplicialComplex {
    glue_copies(&delta_paper(), &gamma_paper(), n).expect("Γ is induced in Δ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlueError {
    #[error(
        "not-induced: the subcomplex is not induced, gluing would not give a simplicial complex"
    )]
    NotInduced,
    #[error("at least one copy is required")]
    NoCopies,
}

/// Glues `n` copies of `delta` along the common subcomplex `gamma`.
///
/// The vertices of `gamma` are shared. The first copy keeps the ids of
/// `delta`; each later copy moves the remaining vertices to fresh ids above
/// the current maximum. Vertices outside `gamma` are labelled `X#c` for copy
/// `c`, where `X` is their label in `delta`.
pub fn glue_copies(
    delta: &SimplicialComplex,
    gamma: &SimplicialComplex,
    n: usize,
) -> Result<SimplicialComplex, GlueError> {
    if n == 0 {
        return Err(GlueError::NoCopies);
    }
    if !delta.is_induced_subcomplex(gamma) {
        return Err(GlueError::NotInduced);
    }
    let shared: BTreeSet<Vertex> = gamma.vertices().into_iter().collect();
    let own: Vec<Vertex> = delta
        .vertices()
        .into_iter()
        .filter(|v| !shared.contains(v))
        .collect();
    let top = delta.vertices().last().map_or(0, |&m| m + 1);

    let mut facets = Vec::new();
    let mut labels = BTreeMap::new();
    for &v in &shared {
        labels.insert(v, delta.label(v));
    }
    for copy in 0..n {
        let map: BTreeMap<Vertex, Vertex> = own
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let id = if copy == 0 {
                    v
                } else {
                    top + ((copy - 1) * own.len() + i) as Vertex
                };
                (v, id)
            })
            .collect();
        for (&v, &id) in &map {
            labels.insert(id, format!("{}#{}", delta.label(v), copy + 1));
        }
        for f in delta.facets() {
            facets.push(Face::new(
                f.vertices().iter().map(|v| *map.get(v).unwrap_or(v)),
            ));
        }
    }
    Ok(SimplicialComplex::from_facets(facets).with_labels(labels))
}

/// The named complexes accepted as `builtin:NAME`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaperComplex {
    Sigma,
    Upsilon,
    Psi,
    GammaPaper,
    DeltaPaper,
    PhiPaper,
    Omega(usize),
}

#[derive(Debug, Clone)]
pub enum Builtin {
    Complex(SimplicialComplex),
    Relative(RelativeComplex),
}

impl PaperComplex {
    pub fn build(self) -> Builtin {
        match self {
            PaperComplex::Sigma => Builtin::Complex(sigma()),
            PaperComplex::Upsilon => Builtin::Complex(upsilon()),
            PaperComplex::Psi => Builtin::Relative(psi()),
            PaperComplex::GammaPaper => Builtin::Complex(gamma_paper()),
            PaperComplex::DeltaPaper => Builtin::Complex(delta_paper()),
            PaperComplex::PhiPaper => Builtin::Relative(phi_paper()),
            PaperComplex::Omega(n) => Builtin::Complex(omega(n)),
        }
    }
}

impl fmt::Display for PaperComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PaperComplex::Sigma => write!(f, "Sigma"),
            PaperComplex::Upsilon => write!(f, "Upsilon"),
            PaperComplex::Psi => write!(f, "Psi"),
            PaperComplex::GammaPaper => write!(f, "GammaPaper"),
            PaperComplex::DeltaPaper => write!(f, "DeltaPaper"),
            PaperComplex::PhiPaper => write!(f, "PhiPaper"),
            PaperComplex::Omega(n) => write!(f, "Omega{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown builtin complex `{0}` (expected Sigma, Upsilon, Psi, GammaPaper, DeltaPaper, PhiPaper or OmegaN)")]
pub struct UnknownBuiltin(pub String);

impl FromStr for PaperComplex {
    type Err = UnknownBuiltin;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let id = match s {
            "Sigma" => PaperComplex::Sigma,
            "Upsilon" => PaperComplex::Upsilon,
            "Psi" => PaperComplex::Psi,
            "GammaPaper" => PaperComplex::GammaPaper,
            "DeltaPaper" => PaperComplex::DeltaPaper,
            "PhiPaper" => PaperComplex::PhiPaper,
            _ => match s.strip_prefix("Omega").map(str::parse::<usize>) {
                Some(Ok(n)) if n >= 1 => PaperComplex::Omega(n),
                _ => return Err(UnknownBuiltin(s.to_string())),
            },
        };
        Ok(id)
    }
}

/// How `Δ ∖ Γ` splits up: one copy of `Ψ` per glued copy of `Σ`, plus the
/// faces through the four new vertices that lie in no copy.
#[derive(Debug, Clone)]
pub struct PhiAnatomy {
    /// Per glued copy of `Σ`: the faces of that copy not in its copy of `Υ`.
    pub psi_copies: Vec<Vec<Face>>,
    /// The copies of `Υ` each copy of `Σ` was glued along.
    pub upsilon_copies: Vec<SimplicialComplex>,
    /// Faces of `Δ ∖ Γ` in no copy of `Ψ`.
    pub remaining: Vec<Face>,
}

/// Recomputes the decomposition of `Δ ∖ Γ` from the facet lists.
pub fn phi_anatomy() -> PhiAnatomy {
    let gamma = gamma_paper();
    let ears = SimplicialComplex::from_facets(EAR_TRIANGLES.map(letters));
    let mut psi_copies = Vec::new();
    let mut upsilon_copies = Vec::new();
    for row in DELTA_EXTRA_FACETS {
        let copy = SimplicialComplex::from_facets(row.map(letters));
        let glued: Vec<Face> = copy
            .faces()
            .iter()
            .filter(|f| gamma.contains(f) || ears.contains(f))
            .cloned()
            .collect();
        let ups = SimplicialComplex::from_facets(maximal(&glued));
        psi_copies.push(
            copy.faces()
                .iter()
                .filter(|f| !ups.contains(f))
                .cloned()
                .collect(),
        );
        upsilon_copies.push(ups);
    }
    let covered: BTreeSet<&Face> = psi_copies.iter().flatten().collect();
    let remaining = phi_paper()
        .faces()
        .into_iter()
        .filter(|f| !covered.contains(f))
        .collect();
    PhiAnatomy {
        psi_copies,
        upsilon_copies,
        remaining,
    }
}

fn maximal(faces: &[Face]) -> Vec<Face> {
    faces
        .iter()
        .filter(|f| !faces.iter().any(|g| g.len() > f.len() && f.is_subset(g)))
        .cloned()
        .collect()
}

/// A vertex bijection carrying the face set `a` onto `b`, if one exists.
/// Exhaustive with pruning; meant for small face sets.
pub fn face_set_isomorphism(a: &[Face], b: &[Face]) -> Option<BTreeMap<Vertex, Vertex>> {
    if a.len() != b.len() {
        return None;
    }
    let va: Vec<Vertex> = a
        .iter()
        .flat_map(|f| f.vertices().to_vec())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let vb: Vec<Vertex> = b
        .iter()
        .flat_map(|f| f.vertices().to_vec())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if va.len() != vb.len() {
        return None;
    }
    let profile = |faces: &[Face], v: Vertex| {
        let mut p: Vec<usize> = faces
            .iter()
            .filter(|f| f.contains(v))
            .map(Face::len)
            .collect();
        p.sort_unstable();
        p
    };
    let target: BTreeSet<&Face> = b.iter().collect();
    let mut map = BTreeMap::new();
    let mut used = BTreeSet::new();

    fn go(
        i: usize,
        va: &[Vertex],
        vb: &[Vertex],
        a: &[Face],
        target: &BTreeSet<&Face>,
        ok: &dyn Fn(Vertex, Vertex) -> bool,
        map: &mut BTreeMap<Vertex, Vertex>,
        used: &mut BTreeSet<Vertex>,
    ) -> bool {
        if i == va.len() {
            return a
                .iter()
                .all(|f| target.contains(&Face::new(f.vertices().iter().map(|v| map[v]))));
        }
        for &w in vb {
            if used.contains(&w) || !ok(va[i], w) {
                continue;
            }
            map.insert(va[i], w);
            used.insert(w);
            // faces whose vertices are all mapped must land in b
            let consistent = a.iter().all(|f| {
                !f.vertices().iter().all(|v| map.contains_key(v))
                    || target.contains(&Face::new(f.vertices().iter().map(|v| map[v])))
            });
            if consistent && go(i + 1, va, vb, a, target, ok, map, used) {
                return true;
            }
            map.remove(&va[i]);
            used.remove(&w);
        }
        false
    }

    let ok = |x: Vertex, y: Vertex| profile(a, x) == profile(b, y);
    go(0, &va, &vb, a, &target, &ok, &mut map, &mut used).then_some(map)
}

/// Vertices are the non-empty faces of `c` (ids in face order, labelled by
/// the face); faces are the chains.
pub fn barycentric_subdivision(c: &SimplicialComplex) -> SimplicialComplex {
    let nonempty: Vec<&Face> = c.faces().iter().filter(|f| !f.is_empty()).collect();
    let id: BTreeMap<&Face, Vertex> = nonempty
        .iter()
        .enumerate()
        .map(|(i, f)| (*f, i as Vertex))
        .collect();
    let mut chains = Vec::new();
    for facet in c.facets() {
        if facet.is_empty() {
            continue;
        }
        // every maximal chain below a facet removes one vertex at a time
        let mut stack = vec![(facet.clone(), vec![id[&facet]])];
        while let Some((top, chain)) = stack.pop() {
            if top.len() == 1 {
                chains.push(Face::new(chain));
                continue;
            }
            for v in top.vertices() {
                let smaller = top.without(*v);
                let mut next = chain.clone();
                next.push(id[&smaller]);
                stack.push((smaller, next));
            }
        }
    }
    if chains.is_empty() {
        return if c.is_void() {
            SimplicialComplex::void()
        } else {
            SimplicialComplex::from_facets([Face::empty()])
        };
    }
    let labels = nonempty
        .iter()
        .map(|f| (id[f], f.display_with(c.labels()).to_string()))
        .collect();
    SimplicialComplex::from_facets(chains).with_labels(labels)
}

/// A stacked d-complex with `j` facets: start from a d-simplex on
/// `0..=d` and repeatedly glue a facet along a uniformly chosen ridge,
/// using the next unused vertex id.
pub fn random_stacked(d: usize, j: usize, seed: u64) -> SimplicialComplex {
    assert!(j >= 1, "at least one facet");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = Face::new(0..=d as Vertex);
    let mut ridges: Vec<Face> = first.boundary_faces().collect();
    let mut facets = vec![first];
    for next in (d as Vertex + 1)..(d + j) as Vertex {
        let ridge = ridges.choose(&mut rng).expect("d ≥ 1 gives ridges").clone();
        let facet = ridge.with(next);
        for r in facet.boundary_faces() {
            if r != ridge {
                ridges.push(r);
            }
        }
        facets.push(facet);
    }
    SimplicialComplex::from_facets(facets)
}

/// The cone over `base` with the apex placed at a random position in the
/// vertex order; vertices are renumbered `0..=n`.
pub fn random_cone(base: &SimplicialComplex, seed: u64) -> SimplicialComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let verts = base.vertices();
    let apex = rng.gen_range(0..=verts.len()) as Vertex;
    let pos: BTreeMap<Vertex, Vertex> = verts
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let i = i as Vertex;
            (v, if i < apex { i } else { i + 1 })
        })
        .collect();
    let moved = SimplicialComplex::from_facets(
        base.facets()
            .into_iter()
            .map(|f| Face::new(f.vertices().iter().map(|v| pos[v]))),
    );
    let facets: Vec<Face> = if moved.is_void() {
        vec![Face::from([apex])]
    } else {
        moved.facets().into_iter().map(|f| f.with(apex)).collect()
    };
    SimplicialComplex::from_facets(facets)
}

/// `facets` random faces on the vertices `0..n`, each of size
/// `1..=max_size`.
pub fn random_complex(n: u32, facets: usize, max_size: usize, seed: u64) -> SimplicialComplex {
    assert!(n >= 1 && max_size >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<Vertex> = (0..n).collect();
    let list: Vec<Face> = (0..facets)
        .map(|_| {
            let size = rng.gen_range(1..=max_size.min(n as usize));
            Face::new(all.choose_multiple(&mut rng, size).copied())
        })
        .collect();
    SimplicialComplex::from_facets(list)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpoly::FPolynomial;

    fn fv(c: &SimplicialComplex) -> Vec<i64> {
        c.f_polynomial().coeffs().to_vec()
    }

    #[test]
    fn named_f_vectors() {
        assert_eq!(fv(&sigma()), vec![1, 6, 14, 14, 5]);
        assert_eq!(fv(&gamma_paper()), vec![1, 8, 22, 24, 9]);
        assert_eq!(fv(&delta_paper()), vec![1, 12, 60, 88, 39]);
        assert_eq!(psi().len(), 20);
        assert_eq!(phi_paper().len(), 136);
    }

    #[test]
    fn omega_three() {
        let o = omega(3);
        assert_eq!(fv(&o), vec![1, 20, 136, 216, 99]);
        assert_eq!(o.len(), 472);
        assert_eq!(o.vertices().len(), 20);
        assert_eq!(o.label(12), "I#2");
        assert_eq!(o.label(0), "A");
    }

    #[test]
    fn glue_identity() {
        let (d, g) = (delta_paper(), gamma_paper());
        for n in [1, 2, 4] {
            let want = d
                .f_polynomial()
                .scale(n as i64)
                .sub(&g.f_polynomial().scale(n as i64 - 1));
            assert_eq!(glue_copies(&d, &g, n).unwrap().f_polynomial(), want);
        }
        assert_eq!(glue_copies(&d, &g, 1).unwrap(), d);
    }

    #[test]
    fn glue_requires_induced() {
        assert_eq!(
            glue_copies(&sigma(), &upsilon(), 2),
            Err(GlueError::NotInduced)
        );
        assert_eq!(
            glue_copies(&delta_paper(), &gamma_paper(), 0),
            Err(GlueError::NoCopies)
        );
    }

    #[test]
    fn builtin_names() {
        for name in [
            "Sigma",
            "Upsilon",
            "Psi",
            "GammaPaper",
            "DeltaPaper",
            "PhiPaper",
            "Omega3",
        ] {
            let id: PaperComplex = name.parse().unwrap();
            assert_eq!(id.to_string(), name);
        }
        assert!("Omega0".parse::<PaperComplex>().is_err());
        assert!("Lambda".parse::<PaperComplex>().is_err());
    }

    #[test]
    fn subdivision() {
        let sd = barycentric_subdivision(&SimplicialComplex::simplex([0, 1, 2]));
        assert_eq!(fv(&sd), vec![1, 7, 12, 6]);
        let point = SimplicialComplex::simplex([5]);
        assert_eq!(fv(&barycentric_subdivision(&point)), vec![1, 1]);
    }

    #[test]
    fn stacked_generator() {
        for seed in 0..5 {
            let c = random_stacked(3, 6, seed);
            let want = FPolynomial::one_plus_t_pow(3).mul(&FPolynomial::new(vec![1, 6]));
            assert_eq!(c.f_polynomial(), want);
        }
    }

    #[test]
    fn cones() {
        let circle = SimplicialComplex::from_facets([[0, 1], [1, 2], [0, 2]]);
        for seed in 0..5 {
            let c = random_cone(&circle, seed);
            assert_eq!(c.len(), 14);
            assert_eq!(c.vertices(), vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn isomorphism_search() {
        let a = [Face::from([1, 2]), Face::from([2, 3])];
        let b = [Face::from([7, 9]), Face::from([5, 7])];
        let m = face_set_isomorphism(&a, &b).unwrap();
        assert_eq!(m[&2], 7);
        let c = [Face::from([1, 2]), Face::from([3, 4])];
        assert!(face_set_isomorphism(&a, &c).is_none());
    }
}
