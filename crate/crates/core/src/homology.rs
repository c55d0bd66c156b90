//! Reduced simplicial homology over a prime field.
//!
//! The chain complex is augmented: the empty face is the unique
//! (-1)-dimensional face, so a non-void complex has `rank ∂_0 = 1`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Face, SimplicialComplex};
use crate::linalg::{FieldPrime, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("boundary index {index} outside [-1, {dim}]")]
    IndexOutOfRange { index: isize, dim: isize },
}

/// `∂_i` with rows indexed by the (i-1)-faces and columns by the i-faces.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    pub row_faces: Vec<Face>,
    pub col_faces: Vec<Face>,
    pub matrix: Matrix,
}

pub fn boundary_matrix(
    c: &SimplicialComplex,
    i: isize,
    field: FieldPrime,
) -> Result<BoundaryMatrix, HomologyError> {
    let dim = c.dimension();
    if i < -1 || i > dim {
        return Err(HomologyError::IndexOutOfRange { index: i, dim });
    }
    let col_faces = c.faces_of_size((i + 1) as usize);
    let row_faces = if i == -1 {
        Vec::new()
    } else {
        c.faces_of_size(i as usize)
    };
    let mut matrix = Matrix::zeros(row_faces.len(), col_faces.len());
    for (j, sigma) in col_faces.iter().enumerate() {
        for (pos, tau) in sigma.boundary_faces().enumerate() {
            let r = row_faces
                .binary_search(&tau)
                .expect("complex is downward closed");
            let entry = if pos % 2 == 0 { 1 } else { field.neg(1) };
            matrix.set(r, j, entry);
        }
    }
    Ok(BoundaryMatrix {
        row_faces,
        col_faces,
        matrix,
    })
}

/// Reduced Betti numbers `β̃_{-1}, β̃_0, …, β̃_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiVector {
    values: Vec<usize>,
}

impl BettiVector {
    /// `β̃_i`, zero outside the stored range.
    pub fn get(&self, i: isize) -> usize {
        if i < -1 {
            return 0;
        }
        self.values.get((i + 1) as usize).copied().unwrap_or(0)
    }

    /// Entries starting at index -1.
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&b| b == 0)
    }

    /// `Σ (-1)^i β̃_i`.
    pub fn euler_characteristic(&self) -> i64 {
        self.values
            .iter()
            .enumerate()
            .map(|(idx, &b)| if idx % 2 == 1 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

/// Reduced Betti numbers; the void complex has none (all zero).
pub fn betti_numbers(c: &SimplicialComplex, field: FieldPrime) -> BettiVector {
    if c.is_void() {
        return BettiVector { values: Vec::new() };
    }
    let dim = c.dimension();
    // ranks[i+1] = rank ∂_i for i in -1..=dim, plus rank ∂_{dim+1} = 0
    let mut ranks = vec![0usize; (dim + 3) as usize];
    for i in 0..=dim {
        let b = boundary_matrix(c, i, field).expect("index in range");
        ranks[(i + 1) as usize] = b.matrix.rank(field);
    }
    let values = (-1..=dim)
        .map(|i| {
            let f = c.faces_of_size((i + 1) as usize).len();
            f - ranks[(i + 1) as usize] - ranks[(i + 2) as usize]
        })
        .collect();
    BettiVector { values }
}

pub fn is_acyclic(c: &SimplicialComplex, field: FieldPrime) -> bool {
    let acyclic = betti_numbers(c, field).is_zero();
    if acyclic {
        debug_assert_eq!(reduced_euler_characteristic(c), 0);
    }
    acyclic
}

/// `-f_{-1} + f_0 - f_1 + …`.
pub fn reduced_euler_characteristic(c: &SimplicialComplex) -> i64 {
    c.f_polynomial()
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &f)| if i % 2 == 1 { f } else { -f })
        .sum()
}

/// Result of a k-fold acyclicity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KFoldReport {
    pub k: usize,
    pub holds: bool,
    /// A smallest face (lexicographically first among those) whose link is
    /// not acyclic.
    pub witness: Option<Face>,
}

/// Checks that `link σ` is acyclic for every face with `|σ| < k`.
pub fn is_k_fold_acyclic(c: &SimplicialComplex, k: usize, field: FieldPrime) -> KFoldReport {
    for size in 0..k {
        for sigma in c.faces_of_size(size) {
            let link = c.link(&sigma).expect("sigma is a face");
            if !is_acyclic(&link, field) {
                return KFoldReport {
                    k,
                    holds: false,
                    witness: Some(sigma),
                };
            }
        }
    }
    KFoldReport {
        k,
        holds: true,
        witness: None,
    }
}

/// Largest `k` for which `c` is k-fold acyclic (0 when `c` is not acyclic).
pub fn acyclicity_depth(c: &SimplicialComplex, field: FieldPrime) -> usize {
    let max = (c.dimension() + 2).max(0) as usize;
    (1..=max)
        .take_while(|&k| is_k_fold_acyclic(c, k, field).holds)
        .last()
        .unwrap_or(0)
}
