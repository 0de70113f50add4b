use num_rational::BigRational;
use super::{projectivize, with_leading_one, DigitSequence, ThetaVector};
use crate::error::{Error, Result};
use crate::numerics::rational::pow10;
use crate::numerics::{GuardedReal, UnimodularMatrix};

/// Guarded proportionality is accepted once every compared interval is
/// narrower than `10^-30`.
pub const DEFAULT_CERTIFY_WIDTH_EXP10: i64 = -30;

/// Least `(preperiod, period)` such that `blocks[p + j] == blocks[p + q + j]`
/// over the whole available window, with `p <= max_preperiod` and
/// `1 <= q <= max_period`. Candidates are ordered by `p`, then `q`.
///
/// This only certifies periodicity of the finite window at hand. Terminated
/// (rational) expansions are never periodic.
pub fn detect_periodicity(
    digits: &DigitSequence,
    max_preperiod: usize,
    max_period: usize,
) -> Result<Option<(usize, usize)>> {
    let needed = max_preperiod + 2 * max_period;
    if digits.len() < needed || max_period == 0 {
        return Err(Error::InsufficientDigits {
            needed: needed.max(2),
            available: digits.len(),
        });
    }
    if digits.is_terminated() {
        return Ok(None);
    }
    let b = digits.blocks();
    for p in 0..=max_preperiod {
        for q in 1..=max_period {
            if (p..b.len() - q).all(|i| b[i] == b[i + q]) {
                return Ok(Some((p, q)));
            }
        }
    }
    Ok(None)
}

/// Whether `a · (1, θ)ᵀ` is proportional to `(1, θ)ᵀ`.
///
/// Exact vectors are decided exactly. Guarded vectors return `false` when the
/// intervals certify non-proportionality, `true` when they are consistent with
/// proportionality and all narrower than `10^-30`, and `Undecidable` otherwise.
pub fn fixed_direction_check(a: &UnimodularMatrix, theta: &ThetaVector) -> Result<bool> {
    fixed_direction_check_with(a, theta, &pow10(DEFAULT_CERTIFY_WIDTH_EXP10))
}

pub fn fixed_direction_check_with(
    a: &UnimodularMatrix,
    theta: &ThetaVector,
    certify_width: &BigRational,
) -> Result<bool> {
    projective_image_check(a, theta, theta, certify_width)
}

/// Whether `a · (1, from)ᵀ ∝ (1, to)ᵀ`, with the same three-way semantics as
/// [`fixed_direction_check`].
pub fn projective_image_check(
    a: &UnimodularMatrix,
    from: &ThetaVector,
    to: &ThetaVector,
    certify_width: &BigRational,
) -> Result<bool> {
    let n = a.dimension();
    for d in [from.dimension(), to.dimension()] {
        if d != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: d,
            });
        }
    }
    if let (Some(f), Some(t)) = (from.as_exact(), to.as_exact()) {
        let image = a.mul_rational_vector(&with_leading_one(f))?;
        return Ok(projectivize(&image).as_deref() == Some(t));
    }

    let mut point = vec![GuardedReal::exact(BigRational::from_integer(1.into()))];
    point.extend(from.to_guarded());
    let bits = point.iter().map(|g| g.precision()).max().unwrap_or(256);
    let point: Vec<GuardedReal> = point.into_iter().map(|g| g.with_precision(bits)).collect();
    let image = a.mul_interval_vector(&point)?;
    if image[0].contains_zero() {
        if image[0].is_point() {
            // a·v has zero leading coordinate, v does not
            return Ok(false);
        }
        return Err(Error::Undecidable);
    }
    let scale = image[0].recip()?;
    let target = to.to_guarded();
    let mut narrow = true;
    for (x, t) in image[1..].iter().zip(&target) {
        let ratio = x * &scale;
        if !ratio.overlaps(t) {
            return Ok(false);
        }
        if ratio.width() > *certify_width || t.width() > *certify_width {
            narrow = false;
        }
    }
    if narrow {
        Ok(true)
    } else {
        Err(Error::Undecidable)
    }
}
