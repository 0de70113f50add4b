//! Exact integer vectors and unimodular matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::GuardedReal;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// An `n×n` integer matrix with determinant `±1`, i.e. an element of `GL_n(ℤ)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    n: usize,
    // row-major
    entries: Vec<BigInt>,
}

impl fmt::Debug for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl UnimodularMatrix {
    /// Checks squareness and `det = ±1`.
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::MalformedMatrix);
        }
        let det = determinant(&rows);
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular {
                determinant: det.to_string(),
            });
        }
        Ok(UnimodularMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&e| BigInt::from(e)).collect())
                .collect(),
        )
    }

    /// Internal constructor for products of unimodular matrices.
    pub(crate) fn from_parts_unchecked(n: usize, entries: Vec<BigInt>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        UnimodularMatrix { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        UnimodularMatrix { n, entries }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.n + c]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.n..(r + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> IntVector {
        IntVector((0..self.n).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.to_rows())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> BigInt {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or_default()
    }

    pub fn mul(&self, other: &UnimodularMatrix) -> Result<UnimodularMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(UnimodularMatrix { n, entries })
    }

    /// Exact inverse by Gauss–Jordan elimination over ℚ; the result is
    /// integral because the determinant is a unit.
    pub fn inverse(&self) -> UnimodularMatrix {
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = self
            .rows()
            .map(|r| r.iter().map(|e| BigRational::from_integer(e.clone())).collect())
            .collect();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .expect("unimodular matrices are invertible");
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] = &a[col][j] / &p;
                inv[col][j] = &inv[col][j] / &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
        let entries = inv
            .into_iter()
            .flatten()
            .map(|q| {
                debug_assert!(q.is_integer());
                q.to_integer()
            })
            .collect();
        UnimodularMatrix { n, entries }
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, k: i64) -> UnimodularMatrix {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity(self.n);
        while e > 0 {
            if e.is_odd() {
                acc = acc.mul(&base).expect("same dimension");
            }
            base = base.mul(&base).expect("same dimension");
            e >>= 1;
        }
        acc
    }

    pub fn mul_vector(&self, v: &IntVector) -> Result<IntVector> {
        self.check_len(v.len())?;
        Ok(IntVector(
            self.rows()
                .map(|r| r.iter().zip(v.entries()).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    pub fn mul_rational_vector(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        self.check_len(v.len())?;
        Ok(self
            .rows()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| b * a)
                    .fold(BigRational::zero(), |acc, x| acc + x)
            })
            .collect())
    }

    pub fn mul_interval_vector(&self, v: &[GuardedReal]) -> Result<Vec<GuardedReal>> {
        self.check_len(v.len())?;
        Ok(self
            .rows()
            .map(|r| {
                let mut acc = GuardedReal::exact(BigRational::zero())
                    .with_precision(v.iter().map(|g| g.precision()).max().unwrap_or(64));
                for (a, b) in r.iter().zip(v) {
                    if !a.is_zero() {
                        acc = &acc + &b.mul_rational(&BigRational::from_integer(a.clone()));
                    }
                }
                acc
            })
            .collect())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: len,
            });
        }
        Ok(())
    }
}

/// Exact product `a · b`; the determinant of the result is `det(a)·det(b)`.
pub fn mat_mul(a: &UnimodularMatrix, b: &UnimodularMatrix) -> Result<UnimodularMatrix> {
    a.mul(b)
}

pub fn mat_inverse(a: &UnimodularMatrix) -> UnimodularMatrix {
    a.inverse()
}
