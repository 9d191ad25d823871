//! Dense square matrices over big rationals.
//!
//! Everything here is exact. The only place a float appears is
//! [`log_abs`], which turns a rational magnitude into a natural logarithm
//! for reporting.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not nilpotent")]
    NotNilpotent,
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Natural log of `|x|` for a nonzero rational, robust to magnitudes far
/// outside the `f64` range.
pub fn log_abs(x: &BigRational) -> f64 {
    debug_assert!(!x.is_zero());
    log_bigint(x.numer()) - log_bigint(x.denom())
}

/// Natural log of `|n|` for a nonzero integer.
pub fn log_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn zeros(n: usize) -> Self {
        ExactMatrix {
            n,
            entries: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    /// Builds a matrix from rows. Panics if the rows are not square.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            entries.extend(row);
        }
        ExactMatrix { n, entries }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect())
    }

    pub fn diagonal(diag: &[BigRational]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// `E_ij`, zero-based.
    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m[(i, j)] = BigRational::one();
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<BigRational>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        (0..self.n).all(|i| self[(i, i)].is_one() && (0..i).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        (0..self.n).all(|i| self[(i, i)].is_one() && (i + 1..self.n).all(|j| self[(i, j)].is_zero()))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        ExactMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        ExactMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        ExactMatrix {
            n: self.n,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    /// Commutator `[self, other] = self*other - other*self`.
    pub fn bracket(&self, other: &Self) -> Self {
        (self * other).sub(&(other * self))
    }

    pub fn determinant(&self) -> BigRational {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return BigRational::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let f = &a[r * n + col] / &p;
                for j in col..n {
                    let v = &f * &a[col * n + j];
                    a[r * n + j] -= v;
                }
            }
        }
        det
    }

    /// Exact inverse. Unitriangular inputs take a division-free path.
    pub fn inverse(&self) -> Result<Self, MatrixError> {
        if self.is_upper_unitriangular() {
            return Ok(self.unitriangular_inverse());
        }
        if self.is_lower_unitriangular() {
            return Ok(self.transpose().unitriangular_inverse().transpose());
        }
        self.gauss_jordan_inverse()
    }

    fn unitriangular_inverse(&self) -> Self {
        // Solve X * self = I row by row from the bottom.
        let n = self.n;
        let mut inv = Self::identity(n);
        for j in (0..n).rev() {
            for i in (0..j).rev() {
                // inv[i][j] = -sum_{k=i+1..=j} self[i][k] * inv[k][j]
                let mut acc = BigRational::zero();
                for k in i + 1..=j {
                    let a = &self[(i, k)];
                    if a.is_zero() || inv[(k, j)].is_zero() {
                        continue;
                    }
                    acc += a * &inv[(k, j)];
                }
                inv[(i, j)] = -acc;
            }
        }
        inv
    }

    fn gauss_jordan_inverse(&self) -> Result<Self, MatrixError> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or(MatrixError::Singular)?;
            if pivot != col {
                for j in 0..n {
                    a.entries.swap(pivot * n + j, col * n + j);
                    inv.entries.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[(col, col)].clone();
            if !p.is_one() {
                let p_inv = p.recip();
                for j in 0..n {
                    if !a[(col, j)].is_zero() {
                        a[(col, j)] *= &p_inv;
                    }
                    if !inv[(col, j)].is_zero() {
                        inv[(col, j)] *= &p_inv;
                    }
                }
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    if !a[(col, j)].is_zero() {
                        let v = &f * &a[(col, j)];
                        a[(r, j)] -= v;
                    }
                    if !inv[(col, j)].is_zero() {
                        let v = &f * &inv[(col, j)];
                        inv[(r, j)] -= v;
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Largest absolute value among the entries.
    pub fn max_abs(&self) -> BigRational {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// `exp(X)` for nilpotent `X`; the series terminates after `n` terms.
    pub fn exp_nilpotent(&self) -> Result<Self, MatrixError> {
        let n = self.n;
        let mut out = Self::identity(n);
        let mut term = Self::identity(n);
        for k in 1..=n {
            term = (&term * self).scale(&ratio(1, k as i64));
            if term.entries.iter().all(Zero::is_zero) {
                return Ok(out);
            }
            out = out.add(&term);
        }
        // term is X^n / n!; a nilpotent n x n matrix has X^n = 0.
        Err(MatrixError::NotNilpotent)
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.entries[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.entries[i * self.n + j]
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_mul(rhs).expect("matrix sizes must agree")
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .entries
            .chunks(self.n)
            .map(|r| r.iter().map(|e| e.to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

/// Rank over the rationals of a sparse integer matrix given as rows of
/// `(column, value)` pairs. Rows are reduced one at a time against the
/// pivots found so far, so fill-in stays local for boundary matrices.
pub fn sparse_rank(rows: &[Vec<(usize, i64)>]) -> usize {
    let mut pivots: HashMap<usize, Vec<(usize, BigRational)>> = HashMap::new();
    for row in rows {
        let mut cur: Vec<(usize, BigRational)> =
            row.iter().filter(|(_, v)| *v != 0).map(|&(c, v)| (c, rat(v))).collect();
        cur.sort_by_key(|e| e.0);
        while let Some((lead, coef)) = cur.first().cloned() {
            match pivots.get(&lead) {
                Some(p) => cur = axpy(&cur, &coef, p),
                None => {
                    let inv = coef.recip();
                    let normalized = cur.into_iter().map(|(c, v)| (c, v * &inv)).collect();
                    pivots.insert(lead, normalized);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// `x - a * y` for sorted sparse vectors.
fn axpy(x: &[(usize, BigRational)], a: &BigRational, y: &[(usize, BigRational)]) -> Vec<(usize, BigRational)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(a * &y[j].1)));
            j += 1;
        } else {
            let v = &x[i].1 - a * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Sign of a rational as -1, 0 or 1.
pub fn signum(x: &BigRational) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
