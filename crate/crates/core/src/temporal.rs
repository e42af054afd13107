//! Interval and temporal-element algebra.
//!
//! Time is discrete: an [`Instant`] is an integer timepoint at the database's
//! single granularity (years by default). Intervals are closed on both ends.
//! A [`TemporalElement`] is a finite union of intervals kept in normal form:
//! sorted, pairwise disjoint and non-adjacent, with at most one interval
//! ending at [`IntervalEnd::Now`], which is always the last one.
//!
//! `Now` is stored symbolically. Operations that need a concrete instant for
//! it (`contains_instant`, `intersects`) take a `now` argument; the purely
//! set-theoretic ones (`subset_of`, `intersect`, `union`) treat `Now` as a
//! point greater than every fixed instant.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// An integer timepoint.
pub type Instant = i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemporalError {
    #[error("malformed interval: start {start} is after end {end}")]
    MalformedInterval { start: Instant, end: IntervalEnd },
    #[error("invalid interval text at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("interval ending at Now must be the last one")]
    NowNotLast,
}

/// End point of an interval; `Now` sorts after every fixed instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntervalEnd {
    At(Instant),
    Now,
}

impl IntervalEnd {
    pub fn resolve(self, now: Instant) -> Instant {
        match self {
            IntervalEnd::At(t) => t,
            IntervalEnd::Now => now,
        }
    }

    pub fn fixed(self) -> Option<Instant> {
        match self {
            IntervalEnd::At(t) => Some(t),
            IntervalEnd::Now => None,
        }
    }

    /// The first end point strictly after this one when used as a start.
    fn successor(self) -> IntervalEnd {
        match self {
            IntervalEnd::At(t) => IntervalEnd::At(t.saturating_add(1)),
            IntervalEnd::Now => IntervalEnd::Now,
        }
    }
}

impl fmt::Display for IntervalEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalEnd::At(t) => write!(f, "{t}"),
            IntervalEnd::Now => f.write_str("Now"),
        }
    }
}

/// Closed interval `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    start: Instant,
    end: IntervalEnd,
}

impl Interval {
    pub fn new(start: Instant, end: IntervalEnd) -> Result<Self, TemporalError> {
        if IntervalEnd::At(start) > end {
            return Err(TemporalError::MalformedInterval { start, end });
        }
        Ok(Interval { start, end })
    }

    pub fn closed(start: Instant, end: Instant) -> Result<Self, TemporalError> {
        Interval::new(start, IntervalEnd::At(end))
    }

    pub fn until_now(start: Instant) -> Self {
        Interval {
            start,
            end: IntervalEnd::Now,
        }
    }

    pub fn point(t: Instant) -> Self {
        Interval {
            start: t,
            end: IntervalEnd::At(t),
        }
    }

    pub fn start(&self) -> Instant {
        self.start
    }

    pub fn end(&self) -> IntervalEnd {
        self.end
    }

    pub fn contains(&self, t: Instant, now: Instant) -> bool {
        self.start <= t && t <= self.end.resolve(now)
    }

    /// True if both intervals share at least one instant once `Now` is resolved.
    pub fn overlaps(&self, other: &Interval, now: Instant) -> bool {
        let lo = self.start.max(other.start);
        let hi = self.end.resolve(now).min(other.end.resolve(now));
        lo <= hi
    }

    /// Symbolic intersection.
    fn intersect(&self, other: &Interval) -> Option<Interval> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (IntervalEnd::At(start) <= end).then_some(Interval { start, end })
    }

    fn parse_at(s: &str, base: usize) -> Result<Self, TemporalError> {
        let err = |offset: usize, message: &str| TemporalError::Syntax {
            offset: base + offset,
            message: message.to_string(),
        };
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| err(0, "expected `[start-end]`"))?;
        // The separator is the first '-' that is not a leading sign.
        let sep = inner
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '-')
            .map(|(i, _)| i)
            .ok_or_else(|| err(1, "expected `-` between start and end"))?;
        let (lhs, rhs) = (inner[..sep].trim(), inner[sep + 1..].trim());
        let start: Instant = lhs
            .parse()
            .map_err(|_| err(1, &format!("invalid start instant `{lhs}`")))?;
        let end = if rhs.eq_ignore_ascii_case("now") {
            IntervalEnd::Now
        } else {
            IntervalEnd::At(
                rhs.parse()
                    .map_err(|_| err(sep + 2, &format!("invalid end instant `{rhs}`")))?,
            )
        };
        Interval::new(start, end)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}-{}]", self.start, self.end)
    }
}

impl FromStr for Interval {
    type Err = TemporalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Interval::parse_at(s.trim(), 0)
    }
}

/// A normalized finite union of closed intervals.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TemporalElement {
    intervals: Vec<Interval>,
}

impl TemporalElement {
    pub fn empty() -> Self {
        TemporalElement::default()
    }

    pub fn single(iv: Interval) -> Self {
        TemporalElement {
            intervals: vec![iv],
        }
    }

    /// Builds the minimal sorted disjoint cover of `raw`, merging overlapping
    /// and adjacent intervals.
    pub fn normalize<I: IntoIterator<Item = Interval>>(raw: I) -> Self {
        let mut raw: Vec<Interval> = raw.into_iter().collect();
        raw.sort_by(|a, b| a.start.cmp(&b.start).then(a.end.cmp(&b.end)));
        let mut out: Vec<Interval> = Vec::with_capacity(raw.len());
        for iv in raw {
            match out.last_mut() {
                Some(last) if IntervalEnd::At(iv.start) <= last.end.successor() => {
                    last.end = last.end.max(iv.end);
                }
                _ => out.push(iv),
            }
        }
        TemporalElement { intervals: out }
    }

    /// Constructs from `(start, end)` pairs, rejecting any with start > end.
    pub fn from_bounds<I>(raw: I) -> Result<Self, TemporalError>
    where
        I: IntoIterator<Item = (Instant, IntervalEnd)>,
    {
        let ivs = raw
            .into_iter()
            .map(|(s, e)| Interval::new(s, e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TemporalElement::normalize(ivs))
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn ends_at_now(&self) -> bool {
        self.intervals
            .last()
            .is_some_and(|iv| iv.end == IntervalEnd::Now)
    }

    pub fn contains_instant(&self, t: Instant, now: Instant) -> bool {
        self.intervals.iter().any(|iv| iv.contains(t, now))
    }

    pub fn intersects(&self, iv: &Interval, now: Instant) -> bool {
        self.intervals.iter().any(|own| own.overlaps(iv, now))
    }

    /// Symbolic containment; `[x, Now] ⊆ [y, Now]` iff `y <= x`.
    pub fn subset_of(&self, other: &TemporalElement) -> bool {
        // `other` is normalized, so each interval of `self` must fit inside a
        // single interval of `other`.
        self.intervals.iter().all(|a| {
            other
                .intervals
                .iter()
                .any(|b| b.start <= a.start && a.end <= b.end)
        })
    }

    pub fn intersect(&self, other: &TemporalElement) -> TemporalElement {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a, b) = (&self.intervals[i], &other.intervals[j]);
            if let Some(iv) = a.intersect(b) {
                out.push(iv);
            }
            match a.end.cmp(&b.end) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        TemporalElement::normalize(out)
    }

    pub fn union(&self, other: &TemporalElement) -> TemporalElement {
        TemporalElement::normalize(self.intervals.iter().chain(&other.intervals).copied())
    }

    pub fn is_disjoint(&self, other: &TemporalElement) -> bool {
        self.intersect(other).is_empty()
    }

    /// Smallest and largest fixed instants mentioned; `Now` ends are skipped.
    pub fn fixed_bounds(&self) -> Option<(Instant, Instant)> {
        let first = self.intervals.first()?;
        let mut hi = first.start;
        for iv in &self.intervals {
            hi = hi.max(iv.start);
            if let IntervalEnd::At(e) = iv.end {
                hi = hi.max(e);
            }
        }
        Some((first.start, hi))
    }
}

impl fmt::Display for TemporalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{iv}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for TemporalElement {
    type Err = TemporalError;

    /// Parses `[[1986-1989],[1995-Now]]`. A single bare interval is also
    /// accepted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let lead = s.len() - s.trim_start().len();
        let after = trimmed.strip_prefix('[').map(str::trim_start);
        if !after.is_some_and(|a| a.starts_with('[') || a == "]") {
            return Ok(TemporalElement::single(Interval::parse_at(trimmed, lead)?));
        }
        let inner = &trimmed[1..trimmed.len().saturating_sub(1)];
        if !trimmed.ends_with(']') {
            return Err(TemporalError::Syntax {
                offset: lead + trimmed.len(),
                message: "expected closing `]`".into(),
            });
        }
        let mut ivs = Vec::new();
        let mut rest = inner;
        let mut offset = lead + 1;
        loop {
            let skipped = rest.len() - rest.trim_start().len();
            rest = rest.trim_start();
            offset += skipped;
            if rest.is_empty() {
                break;
            }
            let close = rest.find(']').ok_or_else(|| TemporalError::Syntax {
                offset,
                message: "unterminated interval".into(),
            })?;
            ivs.push(Interval::parse_at(&rest[..=close], offset)?);
            rest = &rest[close + 1..];
            offset += close + 1;
            let skipped = rest.len() - rest.trim_start().len();
            rest = rest.trim_start();
            offset += skipped;
            if let Some(r) = rest.strip_prefix(',') {
                rest = r;
                offset += 1;
            } else if !rest.is_empty() {
                return Err(TemporalError::Syntax {
                    offset,
                    message: "expected `,` between intervals".into(),
                });
            }
        }
        Ok(TemporalElement::normalize(ivs))
    }
}
