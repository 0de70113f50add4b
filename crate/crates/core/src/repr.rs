//! Integer matrix representations of finitely presented groups acting on a
//! toric AF-algebra by stable isomorphisms.
//!
//! Words are sequences of signed 1-based generator indices: `3` is `γ_3` and
//! `-3` its inverse.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::jp::{fixed_direction_check, ThetaVector};
use crate::numerics::UnimodularMatrix;
use crate::toric::{head_matrix, maximal_common_tail, TailWitness, ToricAFAlgebra};

pub type Word = Vec<i64>;

/// `2` for genus 1, `6g − 6` otherwise.
pub fn genus_dimension(genus: i64) -> Result<usize> {
    match genus {
        g if g < 1 => Err(Error::InvalidGenus(g)),
        1 => Ok(2),
        g => Ok(6 * g as usize - 6),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::input("a presentation needs at least one generator"));
        }
        for r in &relators {
            if r.is_empty() {
                return Err(Error::InvalidWord("empty relator".into()));
            }
            check_word(r, generators.len())?;
        }
        Ok(Presentation {
            generators,
            relators,
        })
    }

    /// Generators named `g1 … gm` and no relators.
    pub fn free(m: usize) -> Self {
        Presentation {
            generators: (1..=m).map(|i| format!("g{i}")).collect(),
            relators: Vec::new(),
        }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

fn check_word(word: &[i64], rank: usize) -> Result<()> {
    match word.iter().find(|&&x| x == 0 || x.unsigned_abs() as usize > rank) {
        Some(x) => Err(Error::InvalidWord(format!(
            "generator index {x} outside ±1..={rank}"
        ))),
        None => Ok(()),
    }
}

/// The base algebra and its image under each generator.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitData {
    pub base: ToricAFAlgebra,
    pub images: Vec<ToricAFAlgebra>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    presentation: Presentation,
    dimension: usize,
    matrices: Vec<UnimodularMatrix>,
    inverses: Vec<UnimodularMatrix>,
    witness: Option<TailWitness>,
    genus: Option<u32>,
}

impl Representation {
    /// A representation given directly by its generator matrices.
    pub fn from_matrices(presentation: Presentation, matrices: Vec<UnimodularMatrix>) -> Result<Self> {
        if matrices.len() != presentation.rank() {
            return Err(Error::input(format!(
                "{} generator(s) but {} matrices",
                presentation.rank(),
                matrices.len()
            )));
        }
        let dimension = matrices[0].dimension();
        if let Some(m) = matrices.iter().find(|m| m.dimension() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: m.dimension(),
            });
        }
        let inverses = matrices.iter().map(UnimodularMatrix::inverse).collect();
        Ok(Representation {
            presentation,
            dimension,
            matrices,
            inverses,
            witness: None,
            genus: None,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn matrices(&self) -> &[UnimodularMatrix] {
        &self.matrices
    }

    /// The common-tail witness the matrices were read from, if any.
    pub fn witness(&self) -> Option<&TailWitness> {
        self.witness.as_ref()
    }

    pub fn genus(&self) -> Option<u32> {
        self.genus
    }
}

/// Reads `A_i` off the heads of the generator images before their maximal
/// common tail.
pub fn build_representation(
    presentation: Presentation,
    orbit: &OrbitData,
    horizon: usize,
) -> Result<Representation> {
    if orbit.images.len() != presentation.rank() {
        return Err(Error::input(format!(
            "{} generator(s) but {} image algebra(s)",
            presentation.rank(),
            orbit.images.len()
        )));
    }
    // index 0 is the base, generator images follow
    let mut family = vec![orbit.base.clone()];
    family.extend(orbit.images.iter().cloned());
    maximal_common_tail(&family, horizon)?;

    let witness = maximal_common_tail(&orbit.images, horizon)?;
    let matrices = orbit
        .images
        .iter()
        .zip(&witness.offsets)
        .map(|(alg, &o)| head_matrix(alg, o))
        .collect::<Result<Vec<_>>>()?;
    let mut rep = Representation::from_matrices(presentation, matrices)?;
    rep.witness = Some(witness);
    rep.genus = orbit.base.genus();
    Ok(rep)
}

/// Ordered product of generator matrices (and inverses) along `word`.
pub fn evaluate_word(rep: &Representation, word: &[i64]) -> Result<UnimodularMatrix> {
    check_word(word, rep.presentation.rank())?;
    let mut acc = UnimodularMatrix::identity(rep.dimension);
    for &x in word {
        let i = x.unsigned_abs() as usize - 1;
        let m = if x > 0 { &rep.matrices[i] } else { &rep.inverses[i] };
        acc = acc.mul(m)?;
    }
    Ok(acc)
}

/// Cancels adjacent `x, -x` pairs until none remain.
pub fn free_reduce(word: &[i64]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &x in word {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// A uniformly random word of length `0..=max_len`.
pub fn random_word<R: Rng>(rng: &mut R, rank: usize, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|_| {
            let g = rng.random_range(1..=rank as i64);
            if rng.random_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelatorResult {
    pub relator: Word,
    pub pass: bool,
    /// The relator's image when it is not the identity.
    pub residual: Option<UnimodularMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomomorphismSample {
    pub u: Word,
    pub v: Word,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaithfulnessProbe {
    pub word: Word,
    pub reduced: Word,
    pub identity: bool,
    /// Whether the image fixes the direction of `(1, θ_max)`.
    pub fixes_direction: bool,
    /// A non-trivial reduced word maps to the identity.
    pub faithfulness_violation: bool,
    /// A non-identity image fixes the direction of `(1, θ_max)`.
    pub aperiodicity_violation: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub seed: Option<u64>,
    pub relators: Vec<RelatorResult>,
    pub homomorphism: Vec<HomomorphismSample>,
    pub faithfulness: Vec<FaithfulnessProbe>,
}

impl VerificationReport {
    /// No relator failure, homomorphism failure, or flagged probe.
    pub fn passed(&self) -> bool {
        self.relators.iter().all(|r| r.pass)
            && self.homomorphism.iter().all(|h| h.pass)
            && self
                .faithfulness
                .iter()
                .all(|f| !f.faithfulness_violation && !f.aperiodicity_violation)
    }

    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.seed = self.seed.or(other.seed);
        self.relators.extend(other.relators);
        self.homomorphism.extend(other.homomorphism);
        self.faithfulness.extend(other.faithfulness);
        self
    }
}

/// Checks every relator maps to the identity.
pub fn verify_relators(rep: &Representation) -> Result<VerificationReport> {
    let relators = rep
        .presentation
        .relators
        .iter()
        .map(|r| {
            let m = evaluate_word(rep, r)?;
            let pass = m.is_identity();
            Ok(RelatorResult {
                relator: r.clone(),
                pass,
                residual: (!pass).then_some(m),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport {
        relators,
        ..Default::default()
    })
}

/// Checks `ρ(uv) = ρ(u)ρ(v)` on `count` seeded random pairs of words.
pub fn homomorphism_samples(
    rep: &Representation,
    count: usize,
    max_len: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = rep.presentation.rank();
    let mut homomorphism = Vec::with_capacity(count);
    for _ in 0..count {
        let u = random_word(&mut rng, rank, max_len);
        let v = random_word(&mut rng, rank, max_len);
        let uv: Word = u.iter().chain(&v).copied().collect();
        let pass = evaluate_word(rep, &uv)? == evaluate_word(rep, &u)?.mul(&evaluate_word(rep, &v)?)?;
        homomorphism.push(HomomorphismSample { u, v, pass });
    }
    Ok(VerificationReport {
        seed: Some(seed),
        homomorphism,
        ..Default::default()
    })
}

/// Looks for words whose image is the identity or fixes `(1, θ_max)`.
pub fn faithfulness_probe(
    rep: &Representation,
    theta_max: &ThetaVector,
    words: &[Word],
) -> Result<VerificationReport> {
    let mut faithfulness = Vec::with_capacity(words.len());
    for w in words {
        let reduced = free_reduce(w);
        let m = evaluate_word(rep, &reduced)?;
        let identity = m.is_identity();
        let fixes_direction = identity || fixed_direction_check(&m, theta_max)?;
        let trivial = reduced.is_empty();
        faithfulness.push(FaithfulnessProbe {
            word: w.clone(),
            identity,
            fixes_direction,
            faithfulness_violation: identity && !trivial,
            aperiodicity_violation: !identity && fixes_direction,
            reduced,
        });
    }
    Ok(VerificationReport {
        faithfulness,
        ..Default::default()
    })
}
