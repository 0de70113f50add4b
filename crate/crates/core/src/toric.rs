//! Toric AF-algebras as infinite digit sequences, and their stable
//! isomorphism classes via tail equivalence.

use num_rational::BigRational;
use num_traits::Zero;

use crate::bratteli::BratteliDiagram;
use crate::error::{Error, Result};
use crate::jp::{convergent_matrix, DigitSequence, ThetaVector};
use crate::numerics::UnimodularMatrix;
use crate::repr::genus_dimension;

/// Default number of leading blocks searched for a tail alignment.
pub const DEFAULT_HORIZON: usize = 64;

/// What an algebra was expanded from, as given by the user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Theta(Vec<String>),
    Lambda(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToricAFAlgebra {
    digits: DigitSequence,
    genus: Option<u32>,
    provenance: Option<Provenance>,
}

impl ToricAFAlgebra {
    pub fn new(digits: DigitSequence) -> Result<Self> {
        if digits.is_terminated() {
            return Err(Error::TerminatedSequence);
        }
        Ok(ToricAFAlgebra {
            digits,
            genus: None,
            provenance: None,
        })
    }

    /// Tags the algebra with a genus, checking `n = 6g − 6` (or `n = 2` for `g = 1`).
    pub fn with_genus(mut self, genus: i64) -> Result<Self> {
        let n = genus_dimension(genus)?;
        if n != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.dimension(),
            });
        }
        self.genus = Some(genus as u32);
        Ok(self)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn digits(&self) -> &DigitSequence {
        &self.digits
    }

    pub fn dimension(&self) -> usize {
        self.digits.dimension()
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn genus(&self) -> Option<u32> {
        self.genus
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn diagram(&self) -> Result<BratteliDiagram> {
        BratteliDiagram::from_digits(&self.digits)
    }
}

/// Offsets after which a family of digit sequences agree.
#[derive(Debug, Clone, PartialEq)]
pub struct TailWitness {
    /// One offset per algebra, in input order.
    pub offsets: Vec<usize>,
    /// The shared suffix, taken from the algebra with the most blocks left.
    pub tail: DigitSequence,
    /// Number of blocks on which every pair was compared.
    pub window: usize,
}

/// `(λ_2/λ_1, …, λ_n/λ_1)`.
pub fn theta_from_lambda(lambda: &[BigRational]) -> Result<ThetaVector> {
    if lambda.len() < 2 {
        return Err(Error::input("lambda needs at least two entries"));
    }
    if lambda[0].is_zero() {
        return Err(Error::ZeroLeadingEntry);
    }
    Ok(ThetaVector::Exact(
        lambda[1..].iter().map(|x| x / &lambda[0]).collect(),
    ))
}

fn agree(a: &DigitSequence, p: usize, b: &DigitSequence, q: usize, window: usize) -> bool {
    a.blocks()[p..p + window] == b.blocks()[q..q + window]
}

/// Shortest window accepted as evidence: everything past the horizon.
fn min_window(lens: impl Iterator<Item = usize>, horizon: usize) -> usize {
    lens.min().unwrap_or(0).saturating_sub(horizon).max(1)
}

fn check_family(algebras: &[&ToricAFAlgebra], horizon: usize) -> Result<()> {
    let n = algebras[0].dimension();
    for a in algebras {
        if a.dimension() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.dimension(),
            });
        }
        if a.len() < horizon.max(1) {
            return Err(Error::InsufficientDigits {
                needed: horizon.max(1),
                available: a.len(),
            });
        }
    }
    Ok(())
}

/// Lexicographically least offsets `(p, q)`, both at most `horizon`, after
/// which `a` and `b` agree on their whole overlap.
///
/// The overlap must cover at least the blocks beyond the horizon, so give
/// each sequence about twice `horizon` blocks for a meaningful answer.
/// `None` only means no alignment was found within the horizon.
pub fn stably_isomorphic(
    a: &ToricAFAlgebra,
    b: &ToricAFAlgebra,
    horizon: usize,
) -> Result<Option<TailWitness>> {
    check_family(&[a, b], horizon)?;
    let (la, lb) = (a.len(), b.len());
    let w_min = min_window([la, lb].into_iter(), horizon);
    for p in 0..=horizon.min(la) {
        for q in 0..=horizon.min(lb) {
            let w = (la - p).min(lb - q);
            if w >= w_min && agree(&a.digits, p, &b.digits, q, w) {
                let tail = if la - p >= lb - q {
                    a.digits.suffix(p)
                } else {
                    b.digits.suffix(q)
                };
                return Ok(Some(TailWitness {
                    offsets: vec![p, q],
                    tail,
                    window: w,
                }));
            }
        }
    }
    Ok(None)
}

/// Componentwise-least offsets at which all algebras share one suffix.
pub fn maximal_common_tail(algebras: &[ToricAFAlgebra], horizon: usize) -> Result<TailWitness> {
    let first = algebras
        .first()
        .ok_or_else(|| Error::input("at least one algebra is required"))?;
    let refs: Vec<&ToricAFAlgebra> = algebras.iter().collect();
    check_family(&refs, horizon)?;

    // shift of each algebra relative to the first
    let mut shifts = vec![0i64];
    for (i, alg) in algebras.iter().enumerate().skip(1) {
        let w = stably_isomorphic(first, alg, horizon)?.ok_or(Error::NotTailEquivalent {
            first: 0,
            second: i,
        })?;
        shifts.push(w.offsets[1] as i64 - w.offsets[0] as i64);
    }

    let lens: Vec<usize> = algebras.iter().map(ToricAFAlgebra::len).collect();
    let w_min = min_window(lens.iter().copied(), horizon);
    'base: for o0 in 0..=horizon as i64 {
        let mut offsets = Vec::with_capacity(algebras.len());
        for (s, len) in shifts.iter().zip(&lens) {
            let o = o0 + s;
            if o < 0 || o > horizon as i64 || o as usize > *len {
                continue 'base;
            }
            offsets.push(o as usize);
        }
        let mut window = usize::MAX;
        for i in 0..algebras.len() {
            for j in i + 1..algebras.len() {
                let w = (lens[i] - offsets[i]).min(lens[j] - offsets[j]);
                if w < w_min
                    || !agree(&algebras[i].digits, offsets[i], &algebras[j].digits, offsets[j], w)
                {
                    continue 'base;
                }
                window = window.min(w);
            }
        }
        let source = (0..algebras.len())
            .max_by_key(|&i| (lens[i] - offsets[i], std::cmp::Reverse(i)))
            .expect("non-empty");
        if window == usize::MAX {
            window = lens[0] - offsets[0];
        }
        return Ok(TailWitness {
            tail: algebras[source].digits.suffix(offsets[source]),
            offsets,
            window,
        });
    }
    Err(Error::NotTailEquivalent {
        first: 0,
        second: algebras.len() - 1,
    })
}

/// Product of the digit matrices of the first `offset` blocks.
pub fn head_matrix(algebra: &ToricAFAlgebra, offset: usize) -> Result<UnimodularMatrix> {
    convergent_matrix(&algebra.digits, offset)
}
