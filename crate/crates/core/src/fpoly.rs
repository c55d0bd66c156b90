//! f-polynomials `f(Δ,t) = Σ_{σ∈Δ} t^{|σ|}` and division by powers of `1+t`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::Face;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not-divisible: f(t) is not divisible by (1+t)^{power}, remainder {remainder:?}")]
pub struct NotDivisible {
    pub power: usize,
    /// Remainder of the long division, degree below `power`.
    pub remainder: Vec<i64>,
}

/// Coefficient `i` counts the faces with `i` vertices.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FPolynomial {
    coeffs: Vec<i64>,
}

impl FPolynomial {
    pub fn new(coeffs: Vec<i64>) -> Self {
        let mut p = FPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_faces<'a, I: IntoIterator<Item = &'a Face>>(faces: I) -> Self {
        let mut coeffs = Vec::new();
        for f in faces {
            if coeffs.len() <= f.len() {
                coeffs.resize(f.len() + 1, 0);
            }
            coeffs[f.len()] += 1;
        }
        FPolynomial::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value at `t = 1`, the total number of faces.
    pub fn eval_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    /// `(1+t)^k`.
    pub fn one_plus_t_pow(k: usize) -> Self {
        let mut c = vec![1i64];
        for _ in 0..k {
            let mut next = vec![0i64; c.len() + 1];
            for (i, &x) in c.iter().enumerate() {
                next[i] += x;
                next[i + 1] += x;
            }
            c = next;
        }
        FPolynomial::new(c)
    }

    pub fn mul(&self, other: &FPolynomial) -> FPolynomial {
        if self.is_zero() || other.is_zero() {
            return FPolynomial::default();
        }
        let mut c = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        FPolynomial::new(c)
    }

    pub fn add(&self, other: &FPolynomial) -> FPolynomial {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &FPolynomial) -> FPolynomial {
        self.combine(other, -1)
    }

    pub fn scale(&self, s: i64) -> FPolynomial {
        FPolynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    fn combine(&self, other: &FPolynomial, sign: i64) -> FPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        FPolynomial::new(
            (0..n)
                .map(|i| self.coeff(i) + sign * other.coeff(i))
                .collect(),
        )
    }

    /// Long division by `(1+t)^k`, returning quotient and remainder.
    fn div_rem(&self, k: usize) -> (FPolynomial, Vec<i64>) {
        let divisor = FPolynomial::one_plus_t_pow(k);
        let mut rem = self.coeffs.clone();
        if rem.len() <= k {
            rem.resize(k, 0);
            return (FPolynomial::default(), rem);
        }
        let qlen = rem.len() - k;
        let mut q = vec![0i64; qlen];
        // divisor is monic in t^k
        for i in (0..qlen).rev() {
            let lead = rem[i + k];
            q[i] = lead;
            if lead != 0 {
                for (j, &d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= lead * d;
                }
            }
        }
        rem.truncate(k);
        (FPolynomial::new(q), rem)
    }

    pub fn divides_power(&self, k: usize) -> bool {
        self.div_rem(k).1.iter().all(|&r| r == 0)
    }

    /// `g` with `g · (1+t)^k = f`.
    pub fn quotient(&self, k: usize) -> Result<FPolynomial, NotDivisible> {
        let (q, remainder) = self.div_rem(k);
        if remainder.iter().any(|&r| r != 0) {
            return Err(NotDivisible {
                power: k,
                remainder,
            });
        }
        Ok(q)
    }

    /// Largest `k` with `(1+t)^k | f`; `None` for the zero polynomial.
    pub fn max_power(&self) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut k = 0;
        while self.divides_power(k + 1) {
            k += 1;
        }
        Some(k)
    }
}

impl fmt::Debug for FPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl fmt::Display for FPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "{}", if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 if a == 1 => write!(f, "t")?,
                1 => write!(f, "{a}t")?,
                _ if a == 1 => write!(f, "t^{i}")?,
                _ => write!(f, "{a}t^{i}")?,
            }
        }
        Ok(())
    }
}
