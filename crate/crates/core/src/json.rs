//! Versioned JSON documents read and written by the command-line tool.
//!
//! Integers are JSON numbers when they fit in an `i64` and decimal strings
//! otherwise; rationals are `"p/q"` strings. Every document carries
//! `"schema": "jp-toric/1"`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::bratteli::IncidenceWindow;
use crate::error::{Error, Result};
use crate::jp::{DigitBlock, DigitSequence, ThetaVector};
use crate::numerics::rational::{format, parse_literal, parse_rational};
use crate::numerics::{GuardedReal, RealSource, UnimodularMatrix};
use crate::repr::{
    FaithfulnessProbe, HomomorphismSample, Presentation, RelatorResult, VerificationReport, Word,
};
use crate::toric::{Provenance, ToricAFAlgebra};

pub const SCHEMA: &str = "jp-toric/1";

/// The `"schema"` field. Missing on input means the current version.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Schema;

impl Serialize for Schema {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(SCHEMA)
    }
}

impl<'de> Deserialize<'de> for Schema {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == SCHEMA {
            Ok(Schema)
        } else {
            Err(de::Error::custom(format!(
                "unsupported schema {s:?}, expected {SCHEMA:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct IntVisitor;

impl Visitor<'_> for IntVisitor {
    type Value = JsonInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonInt, E> {
        v.trim()
            .parse()
            .map(JsonInt)
            .map_err(|_| E::custom(format!("not an integer: {v:?}")))
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(IntVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonRational(pub BigRational);

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(&self.0))
    }
}

struct RationalVisitor;

impl Visitor<'_> for RationalVisitor {
    type Value = JsonRational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a rational string \"p/q\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonRational, E> {
        Ok(JsonRational(BigRational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonRational, E> {
        Ok(JsonRational(BigRational::from_integer(v.into())))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonRational, E> {
        parse_rational(v)
            .map(JsonRational)
            .map_err(|e| E::custom(e.to_string()))
    }
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(RationalVisitor)
    }
}

pub type MatrixDoc = Vec<Vec<JsonInt>>;

pub fn matrix_doc(m: &UnimodularMatrix) -> MatrixDoc {
    m.rows()
        .map(|r| r.iter().cloned().map(JsonInt).collect())
        .collect()
}

pub fn matrix_from_doc(doc: &MatrixDoc) -> Result<UnimodularMatrix> {
    UnimodularMatrix::new(
        doc.iter()
            .map(|r| r.iter().map(|x| x.0.clone()).collect())
            .collect(),
    )
}

fn blocks_doc(blocks: &[DigitBlock]) -> Vec<Vec<JsonInt>> {
    blocks
        .iter()
        .map(|b| b.digits().iter().cloned().map(JsonInt).collect())
        .collect()
}

fn blocks_from_doc(doc: &[Vec<JsonInt>]) -> Result<Vec<DigitBlock>> {
    doc.iter()
        .map(|b| DigitBlock::new(b.iter().map(|x| x.0.clone()).collect()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceDoc {
    pub kind: String,
    pub values: Vec<String>,
}

impl From<&Provenance> for ProvenanceDoc {
    fn from(p: &Provenance) -> Self {
        let (kind, values) = match p {
            Provenance::Theta(v) => ("theta", v),
            Provenance::Lambda(v) => ("lambda", v),
        };
        ProvenanceDoc {
            kind: kind.into(),
            values: values.clone(),
        }
    }
}

impl TryFrom<&ProvenanceDoc> for Provenance {
    type Error = Error;

    fn try_from(d: &ProvenanceDoc) -> Result<Self> {
        match d.kind.as_str() {
            "theta" => Ok(Provenance::Theta(d.values.clone())),
            "lambda" => Ok(Provenance::Lambda(d.values.clone())),
            k => Err(Error::input(format!("unknown provenance kind {k:?}"))),
        }
    }
}

/// A digit sequence, or a toric AF-algebra when non-terminated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitsDoc {
    #[serde(default)]
    pub schema: Schema,
    pub dimension: usize,
    pub blocks: Vec<Vec<JsonInt>>,
    #[serde(default)]
    pub terminated: bool,
    #[serde(default)]
    pub certified_digits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remainder: Option<Vec<JsonRational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceDoc>,
}

impl DigitsDoc {
    pub fn from_sequence(s: &DigitSequence) -> Self {
        DigitsDoc {
            schema: Schema,
            dimension: s.dimension(),
            blocks: blocks_doc(s.blocks()),
            terminated: s.is_terminated(),
            certified_digits: Some(s.len()),
            remainder: s
                .remainder()
                .map(|r| r.iter().cloned().map(JsonRational).collect()),
            genus: None,
            provenance: None,
        }
    }

    pub fn from_algebra(a: &ToricAFAlgebra) -> Self {
        DigitsDoc {
            genus: a.genus(),
            provenance: a.provenance().map(ProvenanceDoc::from),
            ..Self::from_sequence(a.digits())
        }
    }

    pub fn to_sequence(&self) -> Result<DigitSequence> {
        let blocks = blocks_from_doc(&self.blocks)?;
        if let Some(b) = blocks.iter().find(|b| b.dimension() != self.dimension) {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: b.dimension(),
            });
        }
        DigitSequence::with_remainder(
            self.dimension,
            blocks,
            self.terminated,
            self.remainder
                .as_ref()
                .map(|r| r.iter().map(|x| x.0.clone()).collect()),
        )
    }

    pub fn to_algebra(&self) -> Result<ToricAFAlgebra> {
        let mut a = ToricAFAlgebra::new(self.to_sequence()?)?;
        if let Some(g) = self.genus {
            a = a.with_genus(g as i64)?;
        }
        if let Some(p) = &self.provenance {
            a = a.with_provenance(p.try_into()?);
        }
        Ok(a)
    }
}

/// One component of an input vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueDoc {
    Int(i64),
    /// `"p/q"`, an integer, or a decimal (an interval of width `10^-digits`
    /// unless the input is marked exact).
    Text(String),
    /// The root of `Σ poly[i]·x^i` in `[lower, upper]`.
    Root {
        poly: Vec<JsonInt>,
        lower: JsonRational,
        upper: JsonRational,
    },
    /// `(a + b·√d) / c`.
    Quadratic { quadratic: [i64; 4] },
}

impl ValueDoc {
    fn describe(&self) -> String {
        match self {
            ValueDoc::Int(v) => v.to_string(),
            ValueDoc::Text(t) => t.clone(),
            ValueDoc::Root { poly, lower, upper } => format!(
                "root of [{}] in [{}, {}]",
                poly.iter().map(|c| c.0.to_string()).collect::<Vec<_>>().join(", "),
                format(&lower.0),
                format(&upper.0)
            ),
            ValueDoc::Quadratic { quadratic: [a, b, d, c] } => format!("({a} + {b}*sqrt({d}))/{c}"),
        }
    }

    pub fn to_source(&self, exact: bool) -> Result<RealSource> {
        match self {
            ValueDoc::Int(v) => Ok(RealSource::Rational(BigRational::from_integer((*v).into()))),
            ValueDoc::Text(t) => {
                let lit = parse_literal(t)?;
                match lit.decimals {
                    Some(k) if !exact => Ok(RealSource::Interval(decimal_interval(&lit.value, k))),
                    _ => Ok(RealSource::Rational(lit.value)),
                }
            }
            ValueDoc::Root { poly, lower, upper } => RealSource::poly_root_big(
                poly.iter().map(|c| c.0.clone()).collect(),
                lower.0.clone(),
                upper.0.clone(),
            ),
            ValueDoc::Quadratic { quadratic: [a, b, d, c] } => RealSource::quadratic(*a, *b, *d, *c),
        }
    }
}

/// The closed interval `value ± 10^-k / 2`, i.e. everything that rounds to
/// the given digits.
fn decimal_interval(value: &BigRational, k: i64) -> GuardedReal {
    let half_ulp = crate::numerics::rational::pow10(-k) / BigInt::from(2);
    let bits = (value.numer().bits() + value.denom().bits()) as u32 + 64;
    GuardedReal::around(value, &half_ulp, bits.max(crate::numerics::DEFAULT_PRECISION))
}

/// Input of `expand`: a θ or λ vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorInput {
    #[serde(default)]
    pub schema: Schema,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    /// `"theta"` (default) or `"lambda"`; selects how `values` is read.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<ValueDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<ValueDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<ValueDoc>>,
    /// Read decimals as exact rationals instead of intervals.
    #[serde(default)]
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<i64>,
}

/// A vector input resolved into θ sources.
#[derive(Debug, Clone)]
pub struct ResolvedVector {
    pub sources: Vec<RealSource>,
    pub provenance: Provenance,
    pub genus: Option<i64>,
}

impl VectorInput {
    pub fn resolve(&self) -> Result<ResolvedVector> {
        let (lambda_mode, values) = match (self.mode.as_deref(), &self.theta, &self.lambda, &self.values) {
            (None | Some("theta"), Some(t), None, None) => (false, t),
            (None | Some("lambda"), None, Some(l), None) => (true, l),
            (None | Some("theta"), None, None, Some(v)) => (false, v),
            (Some("lambda"), None, None, Some(v)) => (true, v),
            (Some(m), ..) if m != "theta" && m != "lambda" => {
                return Err(Error::input(format!("unknown mode {m:?}")))
            }
            _ => {
                return Err(Error::input(
                    "give exactly one of \"theta\", \"lambda\" or \"values\" consistent with \"mode\"",
                ))
            }
        };
        let described: Vec<String> = values.iter().map(ValueDoc::describe).collect();
        let sources = values
            .iter()
            .map(|v| v.to_source(self.exact))
            .collect::<Result<Vec<_>>>()?;
        let (sources, provenance) = if lambda_mode {
            (lambda_to_theta(&sources)?, Provenance::Lambda(described))
        } else {
            (sources, Provenance::Theta(described))
        };
        let n = sources.len() + 1;
        if sources.is_empty() {
            return Err(Error::input("theta needs at least one component (n >= 2)"));
        }
        if let Some(d) = self.dimension {
            if d != n {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: n,
                });
            }
        }
        if let Some(g) = self.genus {
            let want = crate::repr::genus_dimension(g)?;
            if want != n {
                return Err(Error::DimensionMismatch {
                    expected: want,
                    found: n,
                });
            }
        }
        Ok(ResolvedVector {
            sources,
            provenance,
            genus: self.genus,
        })
    }
}

fn lambda_to_theta(lambda: &[RealSource]) -> Result<Vec<RealSource>> {
    if lambda.len() < 2 {
        return Err(Error::input("lambda needs at least two entries"));
    }
    if let Some(exact) = lambda
        .iter()
        .map(|s| s.exact_value().cloned())
        .collect::<Option<Vec<_>>>()
    {
        return match crate::toric::theta_from_lambda(&exact)? {
            ThetaVector::Exact(t) => Ok(t.into_iter().map(RealSource::Rational).collect()),
            ThetaVector::Guarded(_) => unreachable!("exact input"),
        };
    }
    if lambda.iter().any(|s| !matches!(s, RealSource::Rational(_) | RealSource::Interval(_))) {
        return Err(Error::input(
            "lambda entries must be rationals or decimals; give algebraic values as theta",
        ));
    }
    let bits = crate::numerics::DEFAULT_PRECISION;
    let lead = lambda[0].enclose(bits);
    if lead.contains_zero() {
        return Err(Error::ZeroLeadingEntry);
    }
    lambda[1..]
        .iter()
        .map(|s| Ok(RealSource::Interval(s.enclose(bits).div(&lead)?)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalDoc {
    pub lower: JsonRational,
    pub upper: JsonRational,
}

pub fn theta_components(theta: &ThetaVector) -> Vec<IntervalDoc> {
    theta
        .to_guarded()
        .iter()
        .map(|g| IntervalDoc {
            lower: JsonRational(g.lower().clone()),
            upper: JsonRational(g.upper().clone()),
        })
        .collect()
}

pub fn theta_from_components(c: &[IntervalDoc], exact: bool) -> Result<ThetaVector> {
    if exact {
        if c.iter().any(|i| i.lower != i.upper) {
            return Err(Error::input("exact theta with non-degenerate interval"));
        }
        return Ok(ThetaVector::Exact(c.iter().map(|i| i.lower.0.clone()).collect()));
    }
    Ok(ThetaVector::Guarded(
        c.iter()
            .map(|i| {
                GuardedReal::new(
                    i.lower.0.clone(),
                    i.upper.0.clone(),
                    crate::numerics::DEFAULT_PRECISION,
                )
            })
            .collect::<Result<Vec<_>>>()?,
    ))
}

/// Output of `reconstruct`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaDoc {
    #[serde(default)]
    pub schema: Schema,
    pub dimension: usize,
    pub exact: bool,
    pub blocks_used: usize,
    pub max_width: JsonRational,
    pub theta: Vec<IntervalDoc>,
}

impl ThetaDoc {
    pub fn new(theta: &ThetaVector, blocks_used: usize) -> Self {
        ThetaDoc {
            schema: Schema,
            dimension: theta.dimension(),
            exact: theta.is_exact(),
            blocks_used,
            max_width: JsonRational(theta.max_width()),
            theta: theta_components(theta),
        }
    }

    pub fn to_theta(&self) -> Result<ThetaVector> {
        theta_from_components(&self.theta, self.exact)
    }
}

/// Output of `periodic`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicDoc {
    #[serde(default)]
    pub schema: Schema,
    pub blocks: usize,
    pub max_preperiod: usize,
    pub max_period: usize,
    pub periodic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preperiod: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    /// Product of the digit matrices over one period.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period_matrix: Option<MatrixDoc>,
}

/// Input of `stable-iso`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebrasInput {
    #[serde(default)]
    pub schema: Schema,
    pub algebras: Vec<AlgebraRef>,
}

/// Output of `stable-iso`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableIsoDoc {
    #[serde(default)]
    pub schema: Schema,
    pub horizon: usize,
    pub stably_isomorphic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offsets: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<Vec<Vec<JsonInt>>>,
    /// Pair of input indices with no common tail.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_equivalent: Option<[usize; 2]>,
}

/// An algebra given inline or as a path to a digits document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Path(String),
    Inline(DigitsDoc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<Word>,
}

impl From<&Presentation> for PresentationDoc {
    fn from(p: &Presentation) -> Self {
        PresentationDoc {
            generators: p.generators().to_vec(),
            relators: p.relators().to_vec(),
        }
    }
}

impl TryFrom<&PresentationDoc> for Presentation {
    type Error = Error;

    fn try_from(d: &PresentationDoc) -> Result<Self> {
        Presentation::new(d.generators.clone(), d.relators.clone())
    }
}

/// Input of `repr`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReprInput {
    #[serde(default)]
    pub schema: Schema,
    pub presentation: PresentationDoc,
    pub base: AlgebraRef,
    pub images: Vec<AlgebraRef>,
    /// Extra words to probe for faithfulness, besides the random ones.
    #[serde(default)]
    pub probe_words: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatorDoc {
    pub relator: Word,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub relators: Vec<RelatorDoc>,
    pub homomorphism: Vec<HomomorphismDoc>,
    pub faithfulness: Vec<ProbeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomomorphismDoc {
    pub u: Word,
    pub v: Word,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeDoc {
    pub word: Word,
    pub reduced: Word,
    pub identity: bool,
    pub fixes_direction: bool,
    pub faithfulness_violation: bool,
    pub aperiodicity_violation: bool,
}

impl From<&VerificationReport> for ReportDoc {
    fn from(r: &VerificationReport) -> Self {
        ReportDoc {
            passed: r.passed(),
            seed: r.seed,
            relators: r
                .relators
                .iter()
                .map(|x| RelatorDoc {
                    relator: x.relator.clone(),
                    pass: x.pass,
                    residual: x.residual.as_ref().map(matrix_doc),
                })
                .collect(),
            homomorphism: r
                .homomorphism
                .iter()
                .map(|h| HomomorphismDoc {
                    u: h.u.clone(),
                    v: h.v.clone(),
                    pass: h.pass,
                })
                .collect(),
            faithfulness: r
                .faithfulness
                .iter()
                .map(|f| ProbeDoc {
                    word: f.word.clone(),
                    reduced: f.reduced.clone(),
                    identity: f.identity,
                    fixes_direction: f.fixes_direction,
                    faithfulness_violation: f.faithfulness_violation,
                    aperiodicity_violation: f.aperiodicity_violation,
                })
                .collect(),
        }
    }
}

impl TryFrom<&ReportDoc> for VerificationReport {
    type Error = Error;

    fn try_from(d: &ReportDoc) -> Result<Self> {
        Ok(VerificationReport {
            seed: d.seed,
            relators: d
                .relators
                .iter()
                .map(|x| {
                    Ok(RelatorResult {
                        relator: x.relator.clone(),
                        pass: x.pass,
                        residual: x.residual.as_ref().map(matrix_from_doc).transpose()?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
            homomorphism: d
                .homomorphism
                .iter()
                .map(|h| HomomorphismSample {
                    u: h.u.clone(),
                    v: h.v.clone(),
                    pass: h.pass,
                })
                .collect(),
            faithfulness: d
                .faithfulness
                .iter()
                .map(|f| FaithfulnessProbe {
                    word: f.word.clone(),
                    reduced: f.reduced.clone(),
                    identity: f.identity,
                    fixes_direction: f.fixes_direction,
                    faithfulness_violation: f.faithfulness_violation,
                    aperiodicity_violation: f.aperiodicity_violation,
                })
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailDoc {
    pub length: usize,
    pub window: usize,
    pub blocks: Vec<Vec<JsonInt>>,
}

/// Output of `repr`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReprDoc {
    #[serde(default)]
    pub schema: Schema,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
    pub presentation: PresentationDoc,
    pub matrices: Vec<MatrixDoc>,
    pub offsets: Vec<usize>,
    pub tail: TailDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_max: Option<Vec<IntervalDoc>>,
    /// Why faithfulness probes were skipped, if they were.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_note: Option<String>,
    pub report: ReportDoc,
}

/// JSON form of an [`IncidenceWindow`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowDoc {
    #[serde(default)]
    pub schema: Schema,
    pub start: usize,
    pub matrices: Vec<MatrixDoc>,
}

impl From<&IncidenceWindow> for WindowDoc {
    fn from(w: &IncidenceWindow) -> Self {
        WindowDoc {
            schema: Schema,
            start: w.start,
            matrices: w.matrices.iter().map(matrix_doc).collect(),
        }
    }
}

impl TryFrom<&WindowDoc> for IncidenceWindow {
    type Error = Error;

    fn try_from(d: &WindowDoc) -> Result<Self> {
        if d.matrices.is_empty() {
            return Err(Error::InsufficientLevels);
        }
        Ok(IncidenceWindow {
            start: d.start,
            matrices: d.matrices.iter().map(matrix_from_doc).collect::<Result<_>>()?,
        })
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}
