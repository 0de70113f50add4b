use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{
    block_product, digit_matrix, jp_expand, projectivize, DigitSequence, ThetaVector,
};
use crate::error::{Error, Result};
use crate::numerics::{GuardedReal, UnimodularMatrix, DEFAULT_PRECISION};

/// Result of [`reconstruct_with_history`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub theta: ThetaVector,
    /// Largest component width after each block (`None` while unbounded).
    /// Empty for terminated sequences, whose value is exact.
    pub widths: Vec<Option<BigRational>>,
}

/// Enclosure of `(1, θ)` given the convergent matrix `p`: when the tail
/// vector lies in the closed positive orthant, `(1, θ)` is a nonnegative
/// combination of the columns of `p`, so each `θ_i` lies between the column
/// ratios `p[i][j] / p[0][j]`.
fn column_hull(p: &UnimodularMatrix) -> Option<Vec<GuardedReal>> {
    let n = p.dimension();
    if (0..n).any(|j| !p.get(0, j).is_positive()) {
        return None;
    }
    let mut out = Vec::with_capacity(n - 1);
    for i in 1..n {
        let ratios: Vec<BigRational> = (0..n)
            .map(|j| BigRational::new(p.get(i, j).clone(), p.get(0, j).clone()))
            .collect();
        let lo = ratios.iter().min().unwrap().clone();
        let hi = ratios.iter().max().unwrap().clone();
        out.push(GuardedReal::new(lo, hi, DEFAULT_PRECISION).expect("ordered"));
    }
    Some(out)
}

fn exact_value(digits: &DigitSequence) -> Vec<BigRational> {
    let n = digits.dimension();
    let k = digits.len();
    let head = block_product(&digits.blocks()[..k - 1], n);
    let last = &digits.blocks()[k - 1];
    let mut tail: Vec<BigRational> = vec![BigRational::from_integer(BigInt::from(1))];
    for (i, b) in last.digits().iter().enumerate() {
        let r = digits
            .remainder()
            .map(|r| r[i].clone())
            .unwrap_or_else(BigRational::zero);
        tail.push(BigRational::from_integer(b.clone()) + r);
    }
    let v = head.mul_rational_vector(&tail).expect("dimension");
    projectivize(&v).expect("leading coordinate of a terminated expansion is positive")
}

/// Recovers `θ` from its digits.
///
/// Terminated sequences give the exact rational vector. Otherwise the
/// enclosure is the intersection of the column hulls of every convergent
/// matrix; it fails with `NotConverging` if its width exceeds `tolerance`,
/// and with `Inadmissible` when re-expanding the enclosure certifies a digit
/// that differs from the input, which means no real vector has these digits.
pub fn reconstruct_theta(digits: &DigitSequence, tolerance: &BigRational) -> Result<ThetaVector> {
    reconstruct_with_history(digits, tolerance).map(|r| r.theta)
}

pub fn reconstruct_with_history(
    digits: &DigitSequence,
    tolerance: &BigRational,
) -> Result<Reconstruction> {
    if digits.is_empty() {
        return Err(Error::NotConverging { best_width: None });
    }
    if digits.is_terminated() {
        return Ok(Reconstruction {
            theta: ThetaVector::Exact(exact_value(digits)),
            widths: Vec::new(),
        });
    }
    if let Some(k) = digits.blocks().iter().skip(1).position(|b| !b.is_nonnegative()) {
        return Err(Error::Inadmissible { block: k + 1 });
    }

    let n = digits.dimension();
    let mut p = UnimodularMatrix::identity(n);
    let mut best: Option<Vec<GuardedReal>> = None;
    let mut widths = Vec::with_capacity(digits.len());
    for (k, block) in digits.blocks().iter().enumerate() {
        p = p.mul(&digit_matrix(block))?;
        if let Some(hull) = column_hull(&p) {
            best = Some(match best {
                None => hull,
                Some(prev) => prev
                    .iter()
                    .zip(&hull)
                    .map(|(a, b)| a.intersect(b))
                    .collect::<Option<Vec<_>>>()
                    .ok_or(Error::Inadmissible { block: k })?,
            });
        }
        widths.push(
            best.as_ref()
                .map(|b| b.iter().map(|g| g.width()).max().unwrap()),
        );
    }
    let best = best.ok_or(Error::NotConverging { best_width: None })?;
    let width = best.iter().map(|g| g.width()).max().unwrap();
    if &width > tolerance {
        return Err(Error::NotConverging {
            best_width: Some(width),
        });
    }
    let theta = ThetaVector::Guarded(best);
    let check = match jp_expand(&theta, digits.len()) {
        Ok(s) => s,
        Err(Error::PrecisionExhausted { partial, .. }) => match partial {
            Some(p) => *p,
            None => DigitSequence::new(n, Vec::new(), false)?,
        },
        Err(e) => return Err(e),
    };
    if let Some(k) = check
        .blocks()
        .iter()
        .zip(digits.blocks())
        .position(|(a, b)| a != b)
    {
        return Err(Error::Inadmissible { block: k });
    }
    if check.is_terminated() {
        return Err(Error::Inadmissible { block: check.len() - 1 });
    }
    Ok(Reconstruction { theta, widths })
}
