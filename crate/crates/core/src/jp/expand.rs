use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{digit_matrix_inverse, DigitBlock, DigitSequence, ThetaVector};
use crate::error::{Error, Result};
use crate::numerics::{
    GuardedReal, RealSource, UnimodularMatrix, DEFAULT_MAX_PRECISION, DEFAULT_PRECISION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpandConfig {
    /// Initial working precision in bits.
    pub precision: u32,
    /// Refinement doubles the precision up to this cap.
    pub max_precision: u32,
}

impl Default for ExpandConfig {
    fn default() -> Self {
        ExpandConfig {
            precision: DEFAULT_PRECISION,
            max_precision: DEFAULT_MAX_PRECISION,
        }
    }
}

impl ExpandConfig {
    pub fn fixed(bits: u32) -> Self {
        ExpandConfig {
            precision: bits,
            max_precision: bits,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    /// Digit block and the next vector.
    Next { block: DigitBlock, theta: ThetaVector },
    /// `θ_1` was an integer: the expansion ends with `block`. `remainder`
    /// holds `θ − block` (first entry zero).
    Terminated {
        block: DigitBlock,
        remainder: Vec<BigRational>,
    },
}

fn exact_step(theta: &[BigRational]) -> Step {
    let floors: Vec<BigInt> = theta.iter().map(|t| t.floor().to_integer()).collect();
    let fracs: Vec<BigRational> = theta
        .iter()
        .zip(&floors)
        .map(|(t, b)| t - BigRational::from_integer(b.clone()))
        .collect();
    let block = DigitBlock(floors);
    if fracs[0].is_zero() {
        return Step::Terminated {
            block,
            remainder: fracs,
        };
    }
    let n1 = theta.len();
    let mut next = Vec::with_capacity(n1);
    for f in &fracs[1..] {
        next.push(f / &fracs[0]);
    }
    next.push(fracs[0].recip());
    debug_assert_eq!(next.len(), n1);
    Step::Next {
        block,
        theta: ThetaVector::Exact(next),
    }
}

fn exhausted(certified: usize, partial: Option<DigitSequence>) -> Error {
    Error::PrecisionExhausted {
        certified,
        partial: partial.map(Box::new),
    }
}

fn guarded_step(theta: &[GuardedReal]) -> Result<Step> {
    let (b1, frac_zero) = theta[0]
        .floor_with_fraction()
        .ok_or_else(|| exhausted(0, None))?;
    let mut floors = vec![b1];
    for t in &theta[1..] {
        floors.push(t.floor().ok_or_else(|| exhausted(0, None))?);
    }
    let fracs: Vec<GuardedReal> = theta
        .iter()
        .zip(&floors)
        .map(|(t, b)| t.add_rational(&-BigRational::from_integer(b.clone())))
        .collect();
    let block = DigitBlock(floors);
    if frac_zero {
        if fracs.iter().any(|f| !f.is_point()) {
            return Err(Error::input(
                "expansion degenerates with a non-exact remainder",
            ));
        }
        return Ok(Step::Terminated {
            block,
            remainder: fracs.iter().map(|f| f.lower().clone()).collect(),
        });
    }
    let inv = fracs[0].recip()?;
    let mut next: Vec<GuardedReal> = fracs[1..].iter().map(|f| f * &inv).collect();
    next.push(inv);
    Ok(Step::Next {
        block,
        theta: ThetaVector::Guarded(next),
    })
}

/// One Jacobi–Perron step. Exact vectors never fail; guarded vectors fail
/// with `PrecisionExhausted` when a floor is not certified.
pub fn jp_step(theta: &ThetaVector) -> Result<Step> {
    if theta.is_empty() {
        return Err(Error::input("theta needs at least one component (n >= 2)"));
    }
    match theta {
        ThetaVector::Exact(v) => Ok(exact_step(v)),
        ThetaVector::Guarded(v) => guarded_step(v),
    }
}

/// Expands `theta` to at most `depth` blocks.
///
/// Exact vectors always terminate or reach `depth`. Guarded vectors are not
/// refined: on the first uncertified floor the error carries the digits
/// certified so far.
pub fn jp_expand(theta: &ThetaVector, depth: usize) -> Result<DigitSequence> {
    if depth == 0 {
        return Err(Error::input("depth must be at least 1"));
    }
    match theta {
        ThetaVector::Exact(v) => {
            if v.is_empty() {
                return Err(Error::input("theta needs at least one component (n >= 2)"));
            }
            let n = v.len() + 1;
            let mut blocks = Vec::new();
            let mut current = v.clone();
            while blocks.len() < depth {
                match exact_step(&current) {
                    Step::Next { block, theta } => {
                        blocks.push(block);
                        current = match theta {
                            ThetaVector::Exact(t) => t,
                            ThetaVector::Guarded(_) => unreachable!(),
                        };
                    }
                    Step::Terminated { block, remainder } => {
                        blocks.push(block);
                        return DigitSequence::with_remainder(n, blocks, true, Some(remainder));
                    }
                }
            }
            DigitSequence::new(n, blocks, false)
        }
        ThetaVector::Guarded(v) => {
            let sources: Vec<RealSource> = v.iter().cloned().map(RealSource::Interval).collect();
            let bits = v.iter().map(|g| g.precision()).max().unwrap_or(DEFAULT_PRECISION);
            jp_expand_sources(&sources, depth, ExpandConfig::fixed(bits))
        }
    }
}

/// Working state of a refining expansion: the digits so far and the inverse
/// of their convergent matrix, which maps `(1, θ)` to a multiple of the
/// current tail vector.
struct Expansion<'a> {
    sources: &'a [RealSource],
    inverse: UnimodularMatrix,
    blocks: Vec<DigitBlock>,
    /// `(1, θ)` enclosed at the given precision.
    point: Option<(u32, Vec<GuardedReal>)>,
    /// The same enclosure scaled by `2^bits` and rounded outward to integers.
    scaled: Option<(u32, Vec<BigInt>, Vec<BigInt>)>,
}

fn scaled_floor(x: &BigRational, bits: u32) -> BigInt {
    (x.numer() << bits as usize).div_floor(x.denom())
}

fn scaled_ceil(x: &BigRational, bits: u32) -> BigInt {
    -((-x.numer() << bits as usize).div_floor(x.denom()))
}

impl Expansion<'_> {
    /// Enclosure of the current tail vector at `bits`, or `None` when the
    /// leading coordinate cannot be separated from zero.
    fn tail(&mut self, bits: u32) -> Option<Vec<GuardedReal>> {
        if self.point.as_ref().is_none_or(|(b, _)| *b != bits) {
            let mut point = vec![GuardedReal::exact(BigRational::one()).with_precision(bits)];
            point.extend(self.sources.iter().map(|s| s.enclose(bits).with_precision(bits)));
            self.point = Some((bits, point));
        }
        let point = &self.point.as_ref().expect("just set").1;
        let v = self.inverse.mul_interval_vector(point).ok()?;
        if v[0].contains_zero() && !v[0].is_point() {
            return None;
        }
        let scale = v[0].recip().ok()?;
        Some(v[1..].iter().map(|x| x * &scale).collect())
    }

    /// Integer-only attempt at the next block. Returns `None` when a floor is
    /// not certified or the fraction of `θ_1` may vanish; the caller then
    /// falls back to `tail` and `guarded_step`.
    fn fast_block(&mut self, bits: u32) -> Option<DigitBlock> {
        if self.scaled.as_ref().is_none_or(|(b, _, _)| *b != bits) {
            let one = BigInt::one() << bits as usize;
            let (mut lo, mut hi) = (vec![one.clone()], vec![one]);
            for s in self.sources {
                let g = s.enclose(bits);
                lo.push(scaled_floor(g.lower(), bits));
                hi.push(scaled_ceil(g.upper(), bits));
            }
            self.scaled = Some((bits, lo, hi));
        }
        let (_, lo, hi) = self.scaled.as_ref().expect("just set");
        let mut vlo = Vec::with_capacity(lo.len());
        let mut vhi = Vec::with_capacity(lo.len());
        for row in self.inverse.rows() {
            let (mut a, mut b) = (BigInt::zero(), BigInt::zero());
            for ((m, l), h) in row.iter().zip(lo).zip(hi) {
                if m.is_negative() {
                    a += m * h;
                    b += m * l;
                } else if !m.is_zero() {
                    a += m * l;
                    b += m * h;
                }
            }
            vlo.push(a);
            vhi.push(b);
        }
        if vhi[0].is_negative() {
            for (a, b) in vlo.iter_mut().zip(vhi.iter_mut()) {
                std::mem::swap(a, b);
                *a = -&*a;
                *b = -&*b;
            }
        }
        if !vlo[0].is_positive() {
            return None;
        }
        let (d_lo, d_hi) = (&vlo[0], &vhi[0]);
        let mut floors = Vec::with_capacity(vlo.len() - 1);
        for (i, (a, b)) in vlo.iter().zip(&vhi).enumerate().skip(1) {
            let (fa, ra) = a.div_mod_floor(if a.is_negative() { d_lo } else { d_hi });
            let fb = b.div_floor(if b.is_negative() { d_hi } else { d_lo });
            if fa != fb || (i == 1 && ra.is_zero()) {
                return None;
            }
            floors.push(fa);
        }
        Some(DigitBlock(floors))
    }

    fn sequence(&self, terminated: bool, remainder: Option<Vec<BigRational>>) -> Result<DigitSequence> {
        DigitSequence::with_remainder(
            self.sources.len() + 1,
            self.blocks.clone(),
            terminated,
            remainder,
        )
    }
}

/// Expands the vector whose components are given by `sources`, refining the
/// working precision (doubling from `config.precision` up to
/// `config.max_precision`) whenever a digit cannot be certified.
pub fn jp_expand_sources(
    sources: &[RealSource],
    depth: usize,
    config: ExpandConfig,
) -> Result<DigitSequence> {
    if sources.is_empty() {
        return Err(Error::input("theta needs at least one component (n >= 2)"));
    }
    if depth == 0 {
        return Err(Error::input("depth must be at least 1"));
    }
    if let Some(exact) = sources
        .iter()
        .map(|s| s.exact_value().cloned())
        .collect::<Option<Vec<_>>>()
    {
        return jp_expand(&ThetaVector::Exact(exact), depth);
    }
    let refinable = sources.iter().any(RealSource::refinable);
    // fixed intervals are carried at a precision that represents them exactly
    let mut bits = config.precision.max(64);
    for s in sources {
        if let RealSource::Interval(g) = s {
            let need = [g.lower(), g.upper()]
                .iter()
                .map(|x| (x.numer().bits() + x.denom().bits()) as u32)
                .max()
                .unwrap_or(0);
            bits = bits.max(need + 64);
        }
    }
    let max_bits = config.max_precision.max(bits);
    let n = sources.len() + 1;
    let mut state = Expansion {
        sources,
        inverse: UnimodularMatrix::identity(n),
        blocks: Vec::new(),
        point: None,
        scaled: None,
    };

    while state.blocks.len() < depth {
        let step = loop {
            if let Some(block) = state.fast_block(bits) {
                break Step::Next {
                    block,
                    theta: ThetaVector::Guarded(Vec::new()),
                };
            }
            let attempt = state.tail(bits).map(|t| guarded_step(&t));
            match attempt {
                Some(Ok(step)) => break step,
                Some(Err(e @ Error::Input(_))) => return Err(e),
                _ => {}
            }
            if !refinable || bits.saturating_mul(2) > max_bits {
                let certified = state.blocks.len();
                let partial = if certified > 0 {
                    Some(state.sequence(false, None)?)
                } else {
                    None
                };
                return Err(exhausted(certified, partial));
            }
            bits *= 2;
        };
        match step {
            Step::Next { block, .. } => {
                state.inverse = digit_matrix_inverse(&block).mul(&state.inverse)?;
                state.blocks.push(block);
            }
            Step::Terminated { block, remainder } => {
                state.blocks.push(block);
                return state.sequence(true, Some(remainder));
            }
        }
    }
    state.sequence(false, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jp::{digit_matrix, projectivize, with_leading_one};
    use crate::numerics::rational::{int, pow2, ratio};

    fn tribonacci_sources() -> Vec<RealSource> {
        // θ_1 = t² − t is the root of s³ − 2s² + 2s − 2 in [1.5, 1.6]
        // θ_2 = t is the root of t³ − t² − t − 1 in [1.8, 1.9]
        vec![
            RealSource::poly_root(&[-2, 2, -2, 1], ratio(3, 2), ratio(8, 5)).unwrap(),
            RealSource::poly_root(&[-1, -1, -1, 1], ratio(9, 5), ratio(19, 10)).unwrap(),
        ]
    }

    #[test]
    fn half_steps_like_classical_cf() {
        let s = jp_step(&ThetaVector::exact_from_i64(&[(1, 2)])).unwrap();
        let Step::Next { block, theta } = s else { panic!() };
        assert_eq!(block, DigitBlock::from_i64(&[0]));
        assert_eq!(theta, ThetaVector::Exact(vec![int(2)]));
        let s = jp_step(&theta).unwrap();
        assert_eq!(
            s,
            Step::Terminated {
                block: DigitBlock::from_i64(&[2]),
                remainder: vec![int(0)]
            }
        );
    }

    #[test]
    fn integer_vector_terminates() {
        let s = jp_step(&ThetaVector::exact_from_i64(&[(5, 1), (7, 1)])).unwrap();
        assert!(matches!(s, Step::Terminated { block, .. } if block == DigitBlock::from_i64(&[5, 7])));
    }

    #[test]
    fn tribonacci_is_a_fixed_point() {
        let theta = ThetaVector::Guarded(tribonacci_sources().iter().map(|s| s.enclose(256)).collect());
        let Step::Next { block, theta: next } = jp_step(&theta).unwrap() else { panic!() };
        assert_eq!(block, DigitBlock::from_i64(&[1, 1]));
        let (a, b) = (theta.to_guarded(), next.to_guarded());
        for (x, y) in a.iter().zip(&b) {
            assert!(x.overlaps(y));
            assert!(y.width() < pow2(-200));
        }
    }

    #[test]
    fn step_matrix_duality_exact() {
        let theta = vec![ratio(17, 5), ratio(3, 7), ratio(-22, 9)];
        let Step::Next { block, theta: next } = exact_step(&theta) else { panic!() };
        let next = next.as_exact().unwrap().to_vec();
        let img = digit_matrix(&block).mul_rational_vector(&with_leading_one(&next)).unwrap();
        assert_eq!(projectivize(&img).unwrap(), theta);
    }

    #[test]
    fn expand_examples() {
        let half = jp_expand(&ThetaVector::exact_from_i64(&[(1, 2)]), 10).unwrap();
        assert_eq!(half, DigitSequence::from_i64(2, &[&[0], &[2]], true).unwrap());

        let golden = [RealSource::quadratic(-1, 1, 5, 2).unwrap()];
        let g = jp_expand_sources(&golden, 10, ExpandConfig::default()).unwrap();
        let mut expected: Vec<&[i64]> = vec![&[0]];
        expected.extend(std::iter::repeat_n(&[1][..], 9));
        assert_eq!(g, DigitSequence::from_i64(2, &expected, false).unwrap());

        let t = jp_expand_sources(&tribonacci_sources(), 10, ExpandConfig::default()).unwrap();
        assert_eq!(t, DigitSequence::repeated(&[1, 1], 10));
    }

    #[test]
    fn deep_expansion_refines_precision() {
        // 400 tribonacci blocks need more than the default 256 bits
        let t = jp_expand_sources(&tribonacci_sources(), 400, ExpandConfig::default()).unwrap();
        assert_eq!(t, DigitSequence::repeated(&[1, 1], 400));
        let capped = jp_expand_sources(&tribonacci_sources(), 400, ExpandConfig::fixed(256));
        match capped {
            Err(Error::PrecisionExhausted { certified, partial }) => {
                assert!(certified > 50 && certified < 400);
                assert_eq!(partial.unwrap().len(), certified);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn narrow_intervals_follow_exact_expansion() {
        let centers = vec![ratio(123457, 99991), ratio(-40001, 7919), ratio(1_000_003, 104729)];
        let exact = jp_expand(&ThetaVector::Exact(centers.clone()), 12).unwrap();
        let sources: Vec<RealSource> = centers
            .iter()
            .map(|c| RealSource::Interval(GuardedReal::around(c, &pow2(-400), 512)))
            .collect();
        let g = jp_expand_sources(&sources, exact.len(), ExpandConfig::fixed(512)).unwrap();
        assert_eq!(g.blocks(), exact.blocks());
    }

    #[test]
    fn fixed_interval_straddling_integer() {
        let g = GuardedReal::new(ratio(19999, 10000), ratio(20001, 10000), 64).unwrap();
        let r = jp_expand(&ThetaVector::Guarded(vec![g]), 5);
        assert!(matches!(r, Err(Error::PrecisionExhausted { certified: 0, .. })));
    }

    #[test]
    fn negative_components_use_floor() {
        let s = jp_expand(&ThetaVector::exact_from_i64(&[(-7, 3), (1, 5)]), 20).unwrap();
        assert_eq!(s.blocks()[0], DigitBlock::from_i64(&[-3, 0]));
        assert!(s.blocks()[1..].iter().all(DigitBlock::is_nonnegative));
    }

    #[test]
    fn remainder_is_kept_on_partial_degeneracy() {
        let s = jp_expand(&ThetaVector::exact_from_i64(&[(1, 1), (1, 2)]), 5).unwrap();
        assert!(s.is_terminated());
        assert_eq!(s.remainder().unwrap(), &[int(0), ratio(1, 2)]);
    }

    #[test]
    fn zero_depth_rejected() {
        assert!(jp_expand(&ThetaVector::exact_from_i64(&[(1, 2)]), 0).is_err());
    }
}
