//! Bratteli diagrams of toric AF-algebras.
//!
//! Level `k` (1-based) has `n` vertices. The root sends one edge to every
//! level-1 vertex. Between level `k` and level `k + 1` the incidence matrix is
//! `M_k = B(b⁽ᵏ⁾)`: entry `(r, s)` counts the edges from vertex `r` at level
//! `k` to vertex `s` at level `k + 1`, i.e. the number of copies of the
//! level-`(k+1)` summand `s` that contain the level-`k` summand `r`.
//!
//! Levels are materialized lazily and memoized write-once, so a diagram can
//! be shared between threads and queried at arbitrary depth when it is
//! backed by an eventually periodic pattern.

use std::fmt::Write as _;
use std::sync::OnceLock;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::jp::{detect_periodicity, digit_matrix, DigitBlock, DigitSequence};
use crate::numerics::UnimodularMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
enum LevelSource {
    Finite(Vec<DigitBlock>),
    /// `head` once, then `cycle` forever.
    Periodic {
        head: Vec<DigitBlock>,
        cycle: Vec<DigitBlock>,
    },
}

#[derive(Debug)]
pub struct BratteliDiagram {
    dimension: usize,
    source: LevelSource,
    memo: Vec<OnceLock<UnimodularMatrix>>,
}

impl Clone for BratteliDiagram {
    fn clone(&self) -> Self {
        BratteliDiagram::with_source(self.dimension, self.source.clone())
    }
}

impl PartialEq for BratteliDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension && self.source == other.source
    }
}

/// A finite run of consecutive incidence matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceWindow {
    /// Level of the first matrix's source vertices (1-based).
    pub start: usize,
    pub matrices: Vec<UnimodularMatrix>,
}

impl BratteliDiagram {
    fn with_source(dimension: usize, source: LevelSource) -> Self {
        let slots = match &source {
            LevelSource::Finite(b) => b.len(),
            LevelSource::Periodic { head, cycle } => head.len() + cycle.len(),
        };
        BratteliDiagram {
            dimension,
            source,
            memo: (0..slots).map(|_| OnceLock::new()).collect(),
        }
    }

    /// The diagram of a (non-terminated) digit sequence.
    pub fn from_digits(digits: &DigitSequence) -> Result<Self> {
        if digits.is_terminated() {
            return Err(Error::TerminatedSequence);
        }
        if digits.is_empty() {
            return Err(Error::InsufficientDigits {
                needed: 1,
                available: 0,
            });
        }
        Ok(Self::with_source(
            digits.dimension(),
            LevelSource::Finite(digits.blocks().to_vec()),
        ))
    }

    /// The infinite diagram of `head` followed by `cycle` repeated forever.
    pub fn eventually_periodic(head: Vec<DigitBlock>, cycle: Vec<DigitBlock>) -> Result<Self> {
        let dimension = cycle
            .first()
            .ok_or_else(|| Error::input("cycle must be non-empty"))?
            .dimension();
        if let Some(b) = head.iter().chain(&cycle).find(|b| b.dimension() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: b.dimension(),
            });
        }
        Ok(Self::with_source(dimension, LevelSource::Periodic { head, cycle }))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of incidence matrices, `None` for infinite diagrams.
    pub fn available_levels(&self) -> Option<usize> {
        match &self.source {
            LevelSource::Finite(b) => Some(b.len()),
            LevelSource::Periodic { .. } => None,
        }
    }

    /// Multiplicities of the edges from the root to level 1.
    pub fn root_edges(&self) -> Vec<u64> {
        vec![1; self.dimension]
    }

    fn slot(&self, level: usize) -> Result<(usize, &DigitBlock)> {
        let index = level - 1;
        match &self.source {
            LevelSource::Finite(b) => b.get(index).map(|blk| (index, blk)).ok_or(Error::OutOfRange {
                index: level,
                available: b.len(),
            }),
            LevelSource::Periodic { head, cycle } => {
                if index < head.len() {
                    Ok((index, &head[index]))
                } else {
                    let j = (index - head.len()) % cycle.len();
                    Ok((head.len() + j, &cycle[j]))
                }
            }
        }
    }

    /// Incidence matrix between level `level` and `level + 1` (`level >= 1`).
    pub fn incidence(&self, level: usize) -> Result<&UnimodularMatrix> {
        if level == 0 {
            return Err(Error::InsufficientLevels);
        }
        let (slot, block) = self.slot(level)?;
        Ok(self.memo[slot].get_or_init(|| digit_matrix(block)))
    }

    pub fn window(&self, start: usize, count: usize) -> Result<IncidenceWindow> {
        if count == 0 {
            return Err(Error::InsufficientLevels);
        }
        let matrices = (start..start + count)
            .map(|k| self.incidence(k).cloned())
            .collect::<Result<Vec<_>>>()?;
        Ok(IncidenceWindow { start, matrices })
    }

    /// First level whose incidence matrix differs from `other`'s, looking at
    /// most `limit` levels deep.
    pub fn first_difference(&self, other: &BratteliDiagram, limit: usize) -> Option<usize> {
        (1..=limit).find(|&k| match (self.incidence(k), other.incidence(k)) {
            (Ok(a), Ok(b)) => a != b,
            (Err(_), Err(_)) => false,
            _ => true,
        })
    }
}

/// Whether the digit sequence is eventually periodic within a window of
/// `window` blocks: some preperiod up to `len − 2·window` and period up to
/// `window` repeat over all available blocks.
pub fn is_stationary(digits: &DigitSequence, window: usize) -> Result<bool> {
    if window == 0 || digits.len() < 2 * window {
        return Err(Error::InsufficientDigits {
            needed: 2 * window.max(1),
            available: digits.len(),
        });
    }
    let max_preperiod = digits.len() - 2 * window;
    Ok(detect_periodicity(digits, max_preperiod, window)?.is_some())
}

/// Graphviz rendering of the first `levels` vertex levels.
///
/// Vertices are named `v{level}_{index}` (level 1-based, index 0-based);
/// edges with multiplicity one carry no label.
pub fn to_dot(diagram: &BratteliDiagram, levels: usize) -> Result<String> {
    if levels == 0 {
        return Err(Error::InsufficientLevels);
    }
    if let Some(avail) = diagram.available_levels() {
        if levels > avail + 1 {
            return Err(Error::OutOfRange {
                index: levels,
                available: avail + 1,
            });
        }
    }
    let n = diagram.dimension();
    let mut out = String::new();
    out.push_str("digraph bratteli {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle, label=\"\", width=0.15];\n");
    out.push_str("  root [shape=point, width=0.08];\n");
    for level in 1..=levels {
        let names: Vec<String> = (0..n).map(|i| format!("v{level}_{i}")).collect();
        writeln!(out, "  {{ rank=same; {}; }}", names.join("; ")).unwrap();
    }
    for (i, m) in diagram.root_edges().iter().enumerate() {
        edge(&mut out, "root".into(), format!("v1_{i}"), *m);
    }
    for level in 1..levels {
        let m = diagram.incidence(level)?;
        for r in 0..n {
            for s in 0..n {
                let mult = m.get(r, s);
                if mult.is_zero() {
                    continue;
                }
                let mult: u64 = mult.try_into().map_err(|_| {
                    Error::input("negative or oversized multiplicity in incidence matrix")
                })?;
                edge(
                    &mut out,
                    format!("v{level}_{r}"),
                    format!("v{}_{s}", level + 1),
                    mult,
                );
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

fn edge(out: &mut String, from: String, to: String, mult: u64) {
    if mult == 1 {
        writeln!(out, "  {from} -> {to};").unwrap();
    } else {
        writeln!(out, "  {from} -> {to} [label=\"{mult}\"];").unwrap();
    }
}
