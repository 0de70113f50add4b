//! Guarded reals: closed rational intervals with outward dyadic rounding.
//!
//! Every operation returns an interval that contains the exact result for
//! every choice of operands inside the input intervals. Endpoints are rounded
//! outward to roughly `precision` significant bits so that long computation
//! chains do not accumulate huge denominators.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
#[cfg(test)]
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{self, pow2, round_down, round_up};
use crate::error::{Error, Result};

/// Starting working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;
/// Refinement stops doubling once this many bits would be exceeded.
pub const DEFAULT_MAX_PRECISION: u32 = 16384;

#[derive(Clone, PartialEq, Eq)]
pub struct GuardedReal {
    lower: BigRational,
    upper: BigRational,
    precision: u32,
}

impl fmt::Debug for GuardedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "GuardedReal({})", rational::format(&self.lower))
        } else {
            write!(
                f,
                "GuardedReal([{}, {}] @{}b)",
                rational::format(&self.lower),
                rational::format(&self.upper),
                self.precision
            )
        }
    }
}

impl GuardedReal {
    pub fn new(lower: BigRational, upper: BigRational, precision: u32) -> Result<Self> {
        if lower > upper {
            return Err(Error::input(format!(
                "interval lower bound {} exceeds upper bound {}",
                rational::format(&lower),
                rational::format(&upper)
            )));
        }
        Ok(GuardedReal {
            lower,
            upper,
            precision: precision.max(2),
        })
    }

    pub fn exact(value: BigRational) -> Self {
        GuardedReal {
            lower: value.clone(),
            upper: value,
            precision: DEFAULT_PRECISION,
        }
    }

    /// Interval of half-width `radius` around `center`.
    pub fn around(center: &BigRational, radius: &BigRational, precision: u32) -> Self {
        let r = radius.abs();
        GuardedReal {
            lower: center - &r,
            upper: center + &r,
            precision,
        }
    }

    pub fn lower(&self) -> &BigRational {
        &self.lower
    }

    pub fn upper(&self) -> &BigRational {
        &self.upper
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(mut self, precision: u32) -> Self {
        self.precision = precision.max(2);
        self
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lower + &self.upper) / rational::int(2)
    }

    pub fn is_point(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRational::zero())
    }

    pub fn overlaps(&self, other: &GuardedReal) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }

    /// Floor of every point in the interval, if they all agree.
    pub fn floor(&self) -> Option<BigInt> {
        let lo = self.lower.floor().to_integer();
        let hi = self.upper.floor().to_integer();
        (lo == hi).then_some(lo)
    }

    /// Like [`floor`](Self::floor) but additionally certifies that the
    /// fractional part is nonzero, or that it is exactly zero for a point
    /// interval. Returns `(floor, fraction_is_zero)`.
    pub fn floor_with_fraction(&self) -> Option<(BigInt, bool)> {
        let f = self.floor()?;
        let fl = BigRational::from_integer(f.clone());
        if self.is_point() {
            return Some((f, self.lower == fl));
        }
        (self.lower > fl).then_some((f, false))
    }

    fn rounded(lower: BigRational, upper: BigRational, precision: u32) -> Self {
        GuardedReal {
            lower: round_down(&lower, precision),
            upper: round_up(&upper, precision),
            precision,
        }
    }

    pub fn add_rational(&self, x: &BigRational) -> Self {
        Self::rounded(&self.lower + x, &self.upper + x, self.precision)
    }

    pub fn mul_rational(&self, x: &BigRational) -> Self {
        let (a, b) = (&self.lower * x, &self.upper * x);
        if x.is_negative() {
            Self::rounded(b, a, self.precision)
        } else {
            Self::rounded(a, b, self.precision)
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::rounded(
            self.upper.recip(),
            self.lower.recip(),
            self.precision,
        ))
    }

    pub fn div(&self, other: &GuardedReal) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    /// Intersection of two enclosures of the same value.
    pub fn intersect(&self, other: &GuardedReal) -> Option<Self> {
        let lo = (&self.lower).max(&other.lower).clone();
        let hi = (&self.upper).min(&other.upper).clone();
        (lo <= hi).then(|| GuardedReal {
            lower: lo,
            upper: hi,
            precision: self.precision.max(other.precision),
        })
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &GuardedReal) -> Self {
        GuardedReal {
            lower: (&self.lower).min(&other.lower).clone(),
            upper: (&self.upper).max(&other.upper).clone(),
            precision: self.precision.max(other.precision),
        }
    }
}

impl Add for &GuardedReal {
    type Output = GuardedReal;
    fn add(self, rhs: &GuardedReal) -> GuardedReal {
        GuardedReal::rounded(
            &self.lower + &rhs.lower,
            &self.upper + &rhs.upper,
            self.precision.max(rhs.precision),
        )
    }
}

impl Sub for &GuardedReal {
    type Output = GuardedReal;
    fn sub(self, rhs: &GuardedReal) -> GuardedReal {
        GuardedReal::rounded(
            &self.lower - &rhs.upper,
            &self.upper - &rhs.lower,
            self.precision.max(rhs.precision),
        )
    }
}

impl Mul for &GuardedReal {
    type Output = GuardedReal;
    fn mul(self, rhs: &GuardedReal) -> GuardedReal {
        let products = [
            &self.lower * &rhs.lower,
            &self.lower * &rhs.upper,
            &self.upper * &rhs.lower,
            &self.upper * &rhs.upper,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        GuardedReal::rounded(lo, hi, self.precision.max(rhs.precision))
    }
}

impl Neg for &GuardedReal {
    type Output = GuardedReal;
    fn neg(self) -> GuardedReal {
        GuardedReal {
            lower: -&self.upper,
            upper: -&self.lower,
            precision: self.precision,
        }
    }
}

/// Certified floor of `x`, refining on demand.
///
/// `refine` is called with a doubled precision whenever the current enclosure
/// straddles an integer; it returns a tighter enclosure of the same value, or
/// `None` if no refinement is possible. Fails with `PrecisionExhausted` once
/// `max_precision` would be exceeded or refinement is unavailable.
pub fn guarded_floor<F>(x: &GuardedReal, mut refine: F, max_precision: u32) -> Result<BigInt>
where
    F: FnMut(u32) -> Option<GuardedReal>,
{
    let mut current = x.clone();
    loop {
        if let Some(f) = current.floor() {
            return Ok(f);
        }
        let next = current.precision().saturating_mul(2);
        if next > max_precision {
            break;
        }
        match refine(next) {
            Some(r) => current = r.with_precision(next),
            None => break,
        }
    }
    Err(Error::PrecisionExhausted {
        certified: 0,
        partial: None,
    })
}

/// A real number that can be enclosed to any requested precision.
#[derive(Debug, Clone, PartialEq)]
pub enum RealSource {
    /// An exact rational.
    Rational(BigRational),
    /// A fixed enclosure that cannot be refined (e.g. a decimal string).
    Interval(GuardedReal),
    /// `(a + b·√d) / c` with `d > 0`, `c ≠ 0`.
    Quadratic {
        a: BigInt,
        b: BigInt,
        d: BigInt,
        c: BigInt,
    },
    /// The unique root of the integer polynomial `coeffs` (constant term
    /// first) inside `[lower, upper]`, where the polynomial changes sign.
    PolyRoot {
        coeffs: Vec<BigInt>,
        lower: BigRational,
        upper: BigRational,
    },
}

impl RealSource {
    pub fn quadratic(a: i64, b: i64, d: i64, c: i64) -> Result<Self> {
        if d < 0 || c == 0 {
            return Err(Error::input("quadratic source needs d >= 0 and c != 0"));
        }
        Ok(RealSource::Quadratic {
            a: a.into(),
            b: b.into(),
            d: d.into(),
            c: c.into(),
        })
    }

    pub fn poly_root(coeffs: &[i64], lower: BigRational, upper: BigRational) -> Result<Self> {
        let coeffs: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::poly_root_big(coeffs, lower, upper)
    }

    pub fn poly_root_big(
        coeffs: Vec<BigInt>,
        lower: BigRational,
        upper: BigRational,
    ) -> Result<Self> {
        if lower > upper {
            return Err(Error::input("root bracket is reversed"));
        }
        let (fl, fu) = (eval_poly(&coeffs, &lower), eval_poly(&coeffs, &upper));
        if fl.is_positive() == fu.is_positive() && !fl.is_zero() && !fu.is_zero() {
            return Err(Error::input("polynomial does not change sign on the bracket"));
        }
        Ok(RealSource::PolyRoot {
            coeffs,
            lower,
            upper,
        })
    }

    /// Whether asking for more bits can produce a narrower enclosure.
    pub fn refinable(&self) -> bool {
        !matches!(self, RealSource::Interval(_))
    }

    pub fn exact_value(&self) -> Option<&BigRational> {
        match self {
            RealSource::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// An enclosure of width at most about `2^-bits` (relative for large
    /// values), except for fixed intervals which are returned as is.
    pub fn enclose(&self, bits: u32) -> GuardedReal {
        match self {
            RealSource::Rational(r) => GuardedReal::exact(r.clone()).with_precision(bits),
            RealSource::Interval(g) => g.clone().with_precision(bits.max(g.precision())),
            RealSource::Quadratic { a, b, d, c } => {
                let k = bits as u64 + b.bits() + c.bits() + 8;
                let scaled = d << (2 * k);
                let s = scaled.sqrt();
                let exact = &s * &s == scaled;
                let lo = BigRational::new(s.clone(), BigInt::one() << k);
                let root = if exact {
                    GuardedReal::exact(lo)
                } else {
                    let hi = BigRational::new(s + 1, BigInt::one() << k);
                    GuardedReal::new(lo, hi, bits).expect("ordered")
                };
                let root = root.with_precision(bits + 16);
                let cr = BigRational::from_integer(c.clone());
                root.mul_rational(&BigRational::from_integer(b.clone()))
                    .add_rational(&BigRational::from_integer(a.clone()))
                    .mul_rational(&cr.recip())
                    .with_precision(bits)
            }
            RealSource::PolyRoot {
                coeffs,
                lower,
                upper,
            } => {
                let (mut lo, mut hi) = (lower.clone(), upper.clone());
                let f_lo = eval_poly(coeffs, &lo);
                if f_lo.is_zero() {
                    return GuardedReal::exact(lo).with_precision(bits);
                }
                if eval_poly(coeffs, &hi).is_zero() {
                    return GuardedReal::exact(hi).with_precision(bits);
                }
                let lo_positive = f_lo.is_positive();
                let target = pow2(-(bits as i64 + 2));
                let two = rational::int(2);
                while &hi - &lo > target {
                    let mid = (&lo + &hi) / &two;
                    let fm = eval_poly(coeffs, &mid);
                    if fm.is_zero() {
                        return GuardedReal::exact(mid).with_precision(bits);
                    }
                    if fm.is_positive() == lo_positive {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                GuardedReal::new(lo, hi, bits).expect("ordered")
            }
        }
    }
}

fn eval_poly(coeffs: &[BigInt], x: &BigRational) -> BigRational {
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
}

/// Integer floor of `(a + b√d)/c`, exact.
#[cfg(test)]
fn quadratic_floor(a: &BigInt, b: &BigInt, d: &BigInt, c: &BigInt) -> BigInt {
    // floor(b√d) first, then the division
    let bd = b * b * d;
    let r = bd.sqrt();
    let sb = if b.is_negative() {
        if &r * &r == bd {
            -r
        } else {
            -r - 1
        }
    } else {
        r
    };
    // a + floor(b√d) <= a + b√d < a + floor(b√d) + 1, so the floor of the
    // quotient is determined unless c < 0; handle via the symmetric form.
    let num = a + sb;
    if c.is_positive() {
        num.div_floor(c)
    } else {
        // x / c with c < 0: floor((a + b√d)/c) = floor((-a - b√d)/(-c))
        quadratic_floor(&-a, &-b, d, &-c)
    }
}
