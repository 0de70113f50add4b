//! Jacobi–Perron expansion of real vectors.
//!
//! A vector `θ = (θ_1, …, θ_{n−1})` stands for the projective point
//! `(1, θ_1, …, θ_{n−1})`. One step extracts the digit block `b = ⌊θ⌋` and
//! moves to `θ'` with
//!
//! ```text
//! θ'_{n−1} = 1 / (θ_1 − b_1),    θ'_{i−1} = (θ_i − b_i) / (θ_1 − b_1)   (i = 2..n−1)
//! ```
//!
//! so that `(1, θ) ∝ B(b) · (1, θ')`, where `B(b)` is the digit matrix with
//! first row `(0, …, 0, 1)`, a shifted identity below it, and last column
//! `(1, b_1, …, b_{n−1})ᵀ`. Convergents are read from the last column of
//! `B(b⁽¹⁾)⋯B(b⁽ᵏ⁾)`.

mod expand;
mod periodic;
mod reconstruct;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{GuardedReal, UnimodularMatrix};

pub use expand::{jp_expand, jp_expand_sources, jp_step, ExpandConfig, Step};
pub use periodic::{
    detect_periodicity, fixed_direction_check, fixed_direction_check_with, projective_image_check,
    DEFAULT_CERTIFY_WIDTH_EXP10,
};
pub use reconstruct::{reconstruct_theta, reconstruct_with_history, Reconstruction};

/// One digit vector `b⁽ᵏ⁾ = (b_1, …, b_{n−1})` of an expansion in dimension `n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DigitBlock(Vec<BigInt>);

impl fmt::Debug for DigitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

impl DigitBlock {
    pub fn new(digits: Vec<BigInt>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::input("a digit block needs at least one entry"));
        }
        Ok(DigitBlock(digits))
    }

    pub fn from_i64(digits: &[i64]) -> Self {
        assert!(!digits.is_empty(), "empty digit block");
        DigitBlock(digits.iter().map(|&d| BigInt::from(d)).collect())
    }

    /// Ambient dimension `n` (one more than the number of digits).
    pub fn dimension(&self) -> usize {
        self.0.len() + 1
    }

    pub fn digits(&self) -> &[BigInt] {
        &self.0
    }

    /// Only the first block of an expansion of a vector with negative
    /// entries can contain negative digits.
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|d| !d.is_negative())
    }
}

/// A finite run of digit blocks, possibly ended by a rational degeneracy.
///
/// When `terminated` is set, the last block was extracted from a vector whose
/// first component was an integer; `remainder` then holds the fractional parts
/// `θ − b` of that final vector when they are not all zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSequence {
    dimension: usize,
    blocks: Vec<DigitBlock>,
    terminated: bool,
    remainder: Option<Vec<BigRational>>,
}

impl DigitSequence {
    pub fn new(dimension: usize, blocks: Vec<DigitBlock>, terminated: bool) -> Result<Self> {
        Self::with_remainder(dimension, blocks, terminated, None)
    }

    pub fn with_remainder(
        dimension: usize,
        blocks: Vec<DigitBlock>,
        terminated: bool,
        remainder: Option<Vec<BigRational>>,
    ) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::input("dimension must be at least 2"));
        }
        if let Some(b) = blocks.iter().find(|b| b.dimension() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: b.dimension(),
            });
        }
        if terminated && blocks.is_empty() {
            return Err(Error::input("a terminated sequence needs a final block"));
        }
        let remainder = match remainder {
            Some(_) if !terminated => {
                return Err(Error::input("remainder given for a non-terminated sequence"))
            }
            Some(r) if r.len() != dimension - 1 => {
                return Err(Error::DimensionMismatch {
                    expected: dimension - 1,
                    found: r.len(),
                })
            }
            Some(r) if r.iter().all(Zero::is_zero) => None,
            other => other,
        };
        if let Some(r) = &remainder {
            if !r[0].is_zero() || r.iter().any(|x| x.is_negative() || *x >= BigRational::one()) {
                return Err(Error::input(
                    "remainder must be fractional parts with a zero first entry",
                ));
            }
        }
        Ok(DigitSequence {
            dimension,
            blocks,
            terminated,
            remainder,
        })
    }

    /// Convenience constructor for tests and fixtures.
    pub fn from_i64(dimension: usize, blocks: &[&[i64]], terminated: bool) -> Result<Self> {
        Self::new(
            dimension,
            blocks.iter().map(|b| DigitBlock::from_i64(b)).collect(),
            terminated,
        )
    }

    /// `count` copies of `block`, not terminated.
    pub fn repeated(block: &[i64], count: usize) -> Self {
        let b = DigitBlock::from_i64(block);
        DigitSequence {
            dimension: b.dimension(),
            blocks: vec![b; count],
            terminated: false,
            remainder: None,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn blocks(&self) -> &[DigitBlock] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    pub fn remainder(&self) -> Option<&[BigRational]> {
        self.remainder.as_deref()
    }

    /// Blocks `start..`, never terminated unless `self` is.
    pub fn suffix(&self, start: usize) -> DigitSequence {
        let start = start.min(self.blocks.len());
        DigitSequence {
            dimension: self.dimension,
            blocks: self.blocks[start..].to_vec(),
            terminated: self.terminated && start < self.blocks.len(),
            remainder: if start < self.blocks.len() {
                self.remainder.clone()
            } else {
                None
            },
        }
    }

    /// First `len` blocks, not terminated (the prefix of an infinite expansion).
    pub fn prefix(&self, len: usize) -> DigitSequence {
        let len = len.min(self.blocks.len());
        if len == self.blocks.len() {
            return self.clone();
        }
        DigitSequence {
            dimension: self.dimension,
            blocks: self.blocks[..len].to_vec(),
            terminated: false,
            remainder: None,
        }
    }

    /// `head` followed by `self`.
    pub fn prepend(&self, head: &[DigitBlock]) -> Result<DigitSequence> {
        let mut blocks = head.to_vec();
        blocks.extend(self.blocks.iter().cloned());
        Self::with_remainder(self.dimension, blocks, self.terminated, self.remainder.clone())
    }
}

/// A point of the projective chart `(1, θ_1, …, θ_{n−1})`, exact or enclosed.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaVector {
    Exact(Vec<BigRational>),
    Guarded(Vec<GuardedReal>),
}

impl ThetaVector {
    pub fn exact_from_i64(pairs: &[(i64, i64)]) -> Self {
        ThetaVector::Exact(
            pairs
                .iter()
                .map(|&(p, q)| BigRational::new(p.into(), q.into()))
                .collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.len() + 1
    }

    pub fn len(&self) -> usize {
        match self {
            ThetaVector::Exact(v) => v.len(),
            ThetaVector::Guarded(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ThetaVector::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&[BigRational]> {
        match self {
            ThetaVector::Exact(v) => Some(v),
            ThetaVector::Guarded(_) => None,
        }
    }

    /// Interval view; exact components become point intervals.
    pub fn to_guarded(&self) -> Vec<GuardedReal> {
        match self {
            ThetaVector::Exact(v) => v.iter().cloned().map(GuardedReal::exact).collect(),
            ThetaVector::Guarded(v) => v.clone(),
        }
    }

    /// Largest component width (zero for exact vectors).
    pub fn max_width(&self) -> BigRational {
        match self {
            ThetaVector::Exact(_) => BigRational::zero(),
            ThetaVector::Guarded(v) => v.iter().map(|g| g.width()).max().unwrap_or_default(),
        }
    }

    pub fn contains(&self, point: &[BigRational]) -> bool {
        point.len() == self.len()
            && self
                .to_guarded()
                .iter()
                .zip(point)
                .all(|(g, x)| g.contains(x))
    }
}

/// The digit matrix `B(b)`.
pub fn digit_matrix(block: &DigitBlock) -> UnimodularMatrix {
    let n = block.dimension();
    let mut entries = vec![BigInt::zero(); n * n];
    entries[n - 1] = BigInt::one();
    for (i, b) in block.digits().iter().enumerate() {
        let row = i + 1;
        entries[row * n + i] = BigInt::one();
        entries[row * n + n - 1] = b.clone();
    }
    // det = (−1)^{n−1}
    UnimodularMatrix::from_parts_unchecked(n, entries)
}

/// `B(b)⁻¹`: row `n−1` is `e_0`, row `i−1` is `e_i − b_i·e_0`.
pub fn digit_matrix_inverse(block: &DigitBlock) -> UnimodularMatrix {
    let n = block.dimension();
    let mut entries = vec![BigInt::zero(); n * n];
    for (i, b) in block.digits().iter().enumerate() {
        let row = i;
        entries[row * n + i + 1] = BigInt::one();
        entries[row * n] = -b;
    }
    entries[(n - 1) * n] = BigInt::one();
    UnimodularMatrix::from_parts_unchecked(n, entries)
}

/// Product of the digit matrices of blocks `range`.
pub(crate) fn block_product(blocks: &[DigitBlock], n: usize) -> UnimodularMatrix {
    blocks.iter().fold(UnimodularMatrix::identity(n), |acc, b| {
        acc.mul(&digit_matrix(b)).expect("blocks share the dimension")
    })
}

/// `B(b⁽¹⁾)⋯B(b⁽ᵏ⁾)`; `k = 0` gives the identity.
pub fn convergent_matrix(digits: &DigitSequence, k: usize) -> Result<UnimodularMatrix> {
    if k > digits.len() {
        return Err(Error::OutOfRange {
            index: k,
            available: digits.len(),
        });
    }
    Ok(block_product(&digits.blocks()[..k], digits.dimension()))
}

/// The rational vector `(A_1/A_0, …, A_{n−1}/A_0)` where `A` is the last
/// column of the `k`-th convergent matrix.
pub fn convergents(digits: &DigitSequence, k: usize) -> Result<Vec<BigRational>> {
    if k == 0 {
        return Err(Error::OutOfRange {
            index: 0,
            available: digits.len(),
        });
    }
    let p = convergent_matrix(digits, k)?;
    let col = p.column(p.dimension() - 1);
    let a0 = &col.entries()[0];
    if a0.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(col.entries()[1..]
        .iter()
        .map(|a| BigRational::new(a.clone(), a0.clone()))
        .collect())
}

/// `(v_1/v_0, …)` of an exact vector, if `v_0 ≠ 0`.
pub(crate) fn projectivize(v: &[BigRational]) -> Option<Vec<BigRational>> {
    if v[0].is_zero() {
        return None;
    }
    Some(v[1..].iter().map(|x| x / &v[0]).collect())
}

pub(crate) fn with_leading_one(theta: &[BigRational]) -> Vec<BigRational> {
    std::iter::once(BigRational::one())
        .chain(theta.iter().cloned())
        .collect()
}
