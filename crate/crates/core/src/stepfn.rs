//! Simple functions on `[0,1)` or `[0,∞)` and their decreasing rearrangements.
//!
//! A [`StepFunction`] is a finite list of constant pieces. Gaps between pieces
//! are zero. The last piece of a function on `[0,∞)` may have infinite length.
//! All pointwise operations refine onto the common breakpoint partition, so
//! integrals over step data reduce to finite sums and no sampling is involved.

use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::orlicz::OrliczFunction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("piece {index}: {reason}")]
    InvalidPiece { index: usize, reason: &'static str },
    #[error("pieces {index} and {next} overlap or are out of order")]
    Overlap { index: usize, next: usize },
    #[error("piece {index} extends past the domain end {domain_len}")]
    OutsideDomain { index: usize, domain_len: f64 },
    #[error("operands live on different domains")]
    DomainMismatch,
    #[error("infinite modular: φ overflowed on piece {index}")]
    InfiniteModular { index: usize },
    #[error("support has infinite measure")]
    InfiniteSupport,
}

/// The interval `[0,γ)`. The finite case is normalized to `γ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    Unit,
    HalfLine,
}

impl Domain {
    pub fn len(self) -> f64 {
        match self {
            Domain::Unit => 1.0,
            Domain::HalfLine => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Domain::HalfLine)
    }
}

/// Constant value on `[start, start + len)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub start: f64,
    pub len: f64,
    pub value: f64,
}

impl Piece {
    pub fn new(start: f64, len: f64, value: f64) -> Self {
        Self { start, len, value }
    }

    pub fn end(&self) -> f64 {
        self.start + self.len
    }
}

/// A simple function in canonical form: pieces sorted, disjoint, non-zero,
/// and adjacent pieces with equal values merged.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    domain: Domain,
    pieces: Vec<Piece>,
}

/// Binary operation for [`StepFunction::combine`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Combine {
    Add,
    Sub,
    /// `a·x + b·y`.
    Linear(f64, f64),
}

impl StepFunction {
    pub fn new(domain: Domain, pieces: Vec<Piece>) -> Result<Self, StepError> {
        let gamma = domain.len();
        for (index, p) in pieces.iter().enumerate() {
            if !(p.start >= 0.0 && p.start.is_finite()) {
                return Err(StepError::InvalidPiece {
                    index,
                    reason: "start must be finite and non-negative",
                });
            }
            if !(p.len > 0.0) {
                return Err(StepError::InvalidPiece {
                    index,
                    reason: "length must be positive",
                });
            }
            if p.value.is_nan() {
                return Err(StepError::InvalidPiece {
                    index,
                    reason: "value is NaN",
                });
            }
            if p.len.is_infinite() && index + 1 != pieces.len() {
                return Err(StepError::InvalidPiece {
                    index,
                    reason: "only the last piece may have infinite length",
                });
            }
            if p.end() > gamma {
                return Err(StepError::OutsideDomain {
                    index,
                    domain_len: gamma,
                });
            }
        }
        for (index, w) in pieces.windows(2).enumerate() {
            if w[0].end() > w[1].start {
                return Err(StepError::Overlap {
                    index,
                    next: index + 1,
                });
            }
        }
        Ok(Self::canonical(domain, pieces))
    }

    pub fn zero(domain: Domain) -> Self {
        Self {
            domain,
            pieces: Vec::new(),
        }
    }

    /// `c·χ_[start, start+len)`.
    pub fn indicator(domain: Domain, start: f64, len: f64, c: f64) -> Result<Self, StepError> {
        Self::new(domain, alloc::vec![Piece::new(start, len, c)])
    }

    fn canonical(domain: Domain, pieces: Vec<Piece>) -> Self {
        let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces.into_iter().filter(|p| p.value != 0.0) {
            match out.last_mut() {
                Some(last) if last.value == p.value && last.end() == p.start => {
                    last.len += p.len;
                }
                _ => out.push(p),
            }
        }
        Self {
            domain,
            pieces: out,
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// `μ{x ≠ 0}`.
    pub fn support_measure(&self) -> f64 {
        self.pieces.iter().map(|p| p.len).sum()
    }

    pub fn sup_abs(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.value.abs())
            .fold(0.0, f64::max)
    }

    /// Value at `t`, zero in gaps.
    pub fn value_at(&self, t: f64) -> f64 {
        let i = self.pieces.partition_point(|p| p.start <= t);
        if i == 0 {
            return 0.0;
        }
        let p = &self.pieces[i - 1];
        if t < p.end() {
            p.value
        } else {
            0.0
        }
    }

    /// `d_x(θ) = μ{|x| > θ}`; may be `+∞`.
    pub fn distribution(&self, theta: f64) -> f64 {
        self.pieces
            .iter()
            .filter(|p| p.value.abs() > theta)
            .map(|p| p.len)
            .sum()
    }

    /// Decreasing rearrangement `x*`.
    pub fn rearrange(&self) -> Rearrangement {
        Rearrangement::from_values(self.pieces.iter().map(|p| (p.value.abs(), p.len)))
    }

    pub fn map_values<F: FnMut(f64) -> f64>(&self, mut f: F) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece::new(p.start, p.len, f(p.value)))
            .collect();
        Self::canonical(self.domain, pieces)
    }

    /// `c·x`.
    pub fn scale(&self, c: f64) -> Self {
        self.map_values(|v| c * v)
    }

    /// `|x|`.
    pub fn abs(&self) -> Self {
        self.map_values(f64::abs)
    }

    /// Pointwise `op(x, y)` on the common refinement of both partitions.
    pub fn combine(&self, other: &StepFunction, op: Combine) -> Result<Self, StepError> {
        if self.domain != other.domain {
            return Err(StepError::DomainMismatch);
        }
        let (a, b) = match op {
            Combine::Add => (1.0, 1.0),
            Combine::Sub => (1.0, -1.0),
            Combine::Linear(a, b) => (a, b),
        };
        let mut cuts: Vec<f64> = self
            .pieces
            .iter()
            .chain(other.pieces.iter())
            .flat_map(|p| [p.start, p.end()])
            .collect();
        cuts.sort_by(|l, r| l.partial_cmp(r).unwrap_or(Ordering::Equal));
        cuts.dedup();
        let pieces = cuts
            .windows(2)
            .map(|w| {
                let v = a * self.value_at(w[0]) + b * other.value_at(w[0]);
                Piece::new(w[0], w[1] - w[0], v)
            })
            .collect();
        Ok(Self::canonical(self.domain, pieces))
    }

    pub fn add(&self, other: &StepFunction) -> Result<Self, StepError> {
        self.combine(other, Combine::Add)
    }

    pub fn sub(&self, other: &StepFunction) -> Result<Self, StepError> {
        self.combine(other, Combine::Sub)
    }

    /// `(x + y)/2` and `(x − y)/2`.
    pub fn midpoints(&self, other: &StepFunction) -> Result<(Self, Self), StepError> {
        Ok((
            self.combine(other, Combine::Linear(0.5, 0.5))?,
            self.combine(other, Combine::Linear(0.5, -0.5))?,
        ))
    }

    /// `φ∘x`. Overflow of φ is reported instead of producing infinite pieces.
    pub fn compose_phi(&self, phi: &OrliczFunction) -> Result<Self, StepError> {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (index, p) in self.pieces.iter().enumerate() {
            let v = phi.eval(p.value);
            if !v.is_finite() {
                return Err(StepError::InfiniteModular { index });
            }
            pieces.push(Piece::new(p.start, p.len, v));
        }
        Ok(Self::canonical(self.domain, pieces))
    }

    /// Lays the pieces out in decreasing order of `|x|` on `[0, μ(supp x))` and
    /// returns that layout together with the map σ taking it back onto the
    /// support, so that `|x|∘σ = x*`. Ties keep their original order.
    pub fn align(&self) -> Result<(StepFunction, MeasurePreservingMap), StepError> {
        if self.support_measure().is_infinite() {
            return Err(StepError::InfiniteSupport);
        }
        let mut order: Vec<&Piece> = self.pieces.iter().collect();
        order.sort_by(|l, r| {
            r.value
                .abs()
                .partial_cmp(&l.value.abs())
                .unwrap_or(Ordering::Equal)
        });
        let mut at = 0.0;
        let mut segments = Vec::with_capacity(order.len());
        let mut layout = Vec::with_capacity(order.len());
        for p in order {
            segments.push(MapSegment {
                from: at,
                len: p.len,
                to: p.start,
            });
            layout.push(Piece::new(at, p.len, p.value.abs()));
            at += p.len;
        }
        Ok((
            Self::canonical(self.domain, layout),
            MeasurePreservingMap { segments },
        ))
    }
}

/// One translation `[from, from+len) → [to, to+len)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapSegment {
    pub from: f64,
    pub len: f64,
    pub to: f64,
}

/// Piecewise-translation map σ from `[0, m)` onto the support of a function.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurePreservingMap {
    segments: Vec<MapSegment>,
}

impl MeasurePreservingMap {
    pub fn segments(&self) -> &[MapSegment] {
        &self.segments
    }

    pub fn is_identity(&self) -> bool {
        self.segments.iter().all(|s| s.from == s.to)
    }

    /// σ(t) for `t` in `[0, m)`.
    pub fn forward(&self, t: f64) -> Option<f64> {
        self.segments
            .iter()
            .find(|s| t >= s.from && t < s.from + s.len)
            .map(|s| s.to + (t - s.from))
    }

    /// σ⁻¹(s) for `s` in the support.
    pub fn inverse(&self, s: f64) -> Option<f64> {
        self.segments
            .iter()
            .find(|seg| s >= seg.to && s < seg.to + seg.len)
            .map(|seg| seg.from + (s - seg.to))
    }
}

/// One level of a rearrangement: `x*` equals `value` on a set of `measure`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub value: f64,
    pub measure: f64,
}

/// Decreasing rearrangement of a simple function as strictly decreasing
/// positive levels laid out from `t = 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Rearrangement {
    levels: Vec<Level>,
}

impl Rearrangement {
    /// Builds `x*` from `(|value|, measure)` pairs in any order. A positive
    /// level of infinite measure hides every smaller level.
    pub fn from_values<I: IntoIterator<Item = (f64, f64)>>(items: I) -> Self {
        let mut raw: Vec<(f64, f64)> = items
            .into_iter()
            .filter(|&(v, m)| v > 0.0 && m > 0.0)
            .collect();
        raw.sort_by(|l, r| r.0.partial_cmp(&l.0).unwrap_or(Ordering::Equal));
        let mut levels: Vec<Level> = Vec::new();
        for (value, measure) in raw {
            match levels.last_mut() {
                Some(last) if last.measure.is_infinite() => break,
                Some(last) if last.value == value => last.measure += measure,
                _ => levels.push(Level { value, measure }),
            }
        }
        Self { levels }
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn total_measure(&self) -> f64 {
        self.levels.iter().map(|l| l.measure).sum()
    }

    /// `d(θ)` recovered from the levels.
    pub fn distribution(&self, theta: f64) -> f64 {
        self.levels
            .iter()
            .filter(|l| l.value > theta)
            .map(|l| l.measure)
            .sum()
    }

    /// `x*(t)`, right-continuous.
    pub fn value_at(&self, t: f64) -> f64 {
        let mut end = 0.0;
        for l in &self.levels {
            end += l.measure;
            if t < end {
                return l.value;
            }
        }
        0.0
    }

    /// `(a, b, value)` intervals of `x*`.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.levels.iter().scan(0.0, |at, l| {
            let a = *at;
            *at += l.measure;
            Some((a, *at, l.value))
        })
    }

    /// `x*` as a step function starting at 0.
    pub fn to_step_function(&self, domain: Domain) -> StepFunction {
        let pieces = self
            .intervals()
            .map(|(a, b, v)| Piece::new(a, (b - a).min(domain.len() - a), v))
            .collect();
        StepFunction::canonical(domain, pieces)
    }
}
