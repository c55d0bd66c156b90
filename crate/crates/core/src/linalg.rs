//! Dense linear algebra over a prime field.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0} is not prime")]
pub struct NotPrime(pub u32);

/// Prime modulus `p`; arithmetic is exact mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FieldPrime(u32);

impl FieldPrime {
    pub const TWO: FieldPrime = FieldPrime(2);
    pub const P32003: FieldPrime = FieldPrime(32003);
    /// `2^31 - 1`.
    pub const MERSENNE31: FieldPrime = FieldPrime(2_147_483_647);

    pub fn new(p: u32) -> Result<Self, NotPrime> {
        if is_prime(p) {
            Ok(FieldPrime(p))
        } else {
            Err(NotPrime(p))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1u32 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.0));
        self.pow(a, self.0 as u64 - 2)
    }

    /// Representative of a signed integer.
    pub fn from_i64(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }
}

impl TryFrom<u32> for FieldPrime {
    type Error = NotPrime;
    fn try_from(p: u32) -> Result<Self, NotPrime> {
        FieldPrime::new(p)
    }
}

impl From<FieldPrime> for u32 {
    fn from(p: FieldPrime) -> u32 {
        p.0
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Row-major dense matrix with entries reduced mod the field prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix, field: FieldPrime) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = field.add(out.get(i, j), field.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn rank(&self, field: FieldPrime) -> usize {
        if field.get() == 2 {
            rank_gf2(self)
        } else {
            rank_mod_p(self.clone(), field)
        }
    }
}

fn rank_mod_p(mut m: Matrix, field: FieldPrime) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| m.get(r, c) != 0) else {
            continue;
        };
        if pivot != rank {
            for j in 0..cols {
                m.data.swap(pivot * cols + j, rank * cols + j);
            }
        }
        let inv = field.inv(m.get(rank, c));
        for r in rank + 1..rows {
            let x = m.get(r, c);
            if x == 0 {
                continue;
            }
            let factor = field.mul(x, inv);
            for j in c..cols {
                let v = field.sub(m.get(r, j), field.mul(factor, m.get(rank, j)));
                m.set(r, j, v);
            }
        }
        rank += 1;
    }
    rank
}

fn rank_gf2(m: &Matrix) -> usize {
    let words = m.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..m.rows)
        .map(|r| {
            let mut bits = vec![0u64; words];
            for (c, &x) in m.row(r).iter().enumerate() {
                if x & 1 == 1 {
                    bits[c / 64] |= 1 << (c % 64);
                }
            }
            bits
        })
        .collect();
    let mut rank = 0;
    for c in 0..m.cols {
        let (w, b) = (c / 64, 1u64 << (c % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
            continue;
        };
        rows.swap(pivot, rank);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            if row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(prow.iter()).skip(w) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Determinant of a small square matrix given as rows.
pub fn determinant(mut a: Vec<Vec<u32>>, field: FieldPrime) -> u32 {
    let n = a.len();
    let mut det = 1u32;
    for c in 0..n {
        let Some(pivot) = (c..n).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if pivot != c {
            a.swap(pivot, c);
            det = field.neg(det);
        }
        det = field.mul(det, a[c][c]);
        let inv = field.inv(a[c][c]);
        for r in c + 1..n {
            let x = a[r][c];
            if x == 0 {
                continue;
            }
            let factor = field.mul(x, inv);
            for j in c..n {
                a[r][j] = field.sub(a[r][j], field.mul(factor, a[c][j]));
            }
        }
    }
    det
}

/// Incrementally built row-echelon basis, used to test whether a new
/// vector lies in the span of the vectors accepted so far.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    field: FieldPrime,
    /// (pivot column, normalised row with 1 at the pivot)
    rows: Vec<(usize, Vec<u32>)>,
}

impl EchelonBasis {
    pub fn new(field: FieldPrime) -> Self {
        EchelonBasis {
            field,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; if something survives it is added and
    /// `true` is returned.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        let f = self.field;
        for (pc, row) in &self.rows {
            let x = v[*pc];
            if x != 0 {
                for (a, &b) in v.iter_mut().zip(row.iter()) {
                    if b != 0 {
                        *a = f.sub(*a, f.mul(x, b));
                    }
                }
            }
        }
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[pc]);
        for a in v.iter_mut() {
            *a = f.mul(*a, inv);
        }
        self.rows.push((pc, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(FieldPrime::new(2).is_ok());
        assert!(FieldPrime::new(32003).is_ok());
        assert!(FieldPrime::new(2_147_483_647).is_ok());
        assert_eq!(FieldPrime::new(32001), Err(NotPrime(32001)));
        assert!(FieldPrime::new(1).is_err());
    }

    #[test]
    fn inverse() {
        let f = FieldPrime::P32003;
        for a in [1, 2, 17, 32002] {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn ranks_agree_between_gf2_and_generic_path() {
        // [[1,1,0],[0,1,1],[1,0,1]] has rank 2 over GF(2), 3 over GF(3)
        let m = Matrix {
            rows: 3,
            cols: 3,
            data: vec![1, 1, 0, 0, 1, 1, 1, 0, 1],
        };
        assert_eq!(m.rank(FieldPrime::TWO), 2);
        assert_eq!(m.rank(FieldPrime::new(3).unwrap()), 3);
        assert_eq!(rank_mod_p(m.clone(), FieldPrime::TWO), 2);
    }

    #[test]
    fn determinant_small() {
        let f = FieldPrime::P32003;
        assert_eq!(determinant(vec![vec![2, 1], vec![1, 3]], f), 5);
        assert_eq!(determinant(vec![vec![0, 1], vec![1, 0]], f), f.neg(1));
        assert_eq!(determinant(vec![vec![1, 2], vec![2, 4]], f), 0);
    }

    #[test]
    fn echelon_detects_dependence() {
        let mut b = EchelonBasis::new(FieldPrime::P32003);
        assert!(b.insert(vec![1, 2, 3]));
        assert!(b.insert(vec![0, 1, 1]));
        assert!(!b.insert(vec![2, 5, 7]));
        assert!(b.insert(vec![0, 0, 1]));
        assert_eq!(b.rank(), 3);
    }
}
