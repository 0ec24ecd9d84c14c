//! Preference fragments, propositions and their compilation into
//! piecewise-linear satisfaction functions.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("label {0} has distinct sides and needs an expectation point")]
    MissingExpectation(ClassLabel),
    #[error("expectation point {v_beta} lies outside the bounds [{lo}, {hi}]")]
    ExpectationOutOfBounds { v_beta: f64, lo: f64, hi: f64 },
    #[error("invalid bounds [{lo}, {hi}]: need finite lo < hi")]
    InvalidBounds { lo: f64, hi: f64 },
    #[error("parts disagree on the metric direction")]
    InconsistentDirections,
    #[error("expected one or two parts, got {0}")]
    PartCount(usize),
    #[error("invalid fragment: {0}")]
    InvalidFragment(&'static str),
    #[error("segments do not tile the metric range")]
    NonTiling,
    #[error("unknown label code `{0}`")]
    UnknownCode(String),
}

/// The preference expressed over one interval of a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FragmentKind {
    /// A greater value is preferred.
    Greater,
    /// A smaller value is preferred.
    Smaller,
    /// All values are equally preferred.
    Equal,
}

impl FragmentKind {
    pub const ALL: [FragmentKind; 3] = [FragmentKind::Greater, FragmentKind::Smaller, FragmentKind::Equal];

    pub fn code(self) -> char {
        match self {
            FragmentKind::Greater => 'G',
            FragmentKind::Smaller => 'S',
            FragmentKind::Equal => 'E',
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code {
            "G" => Some(FragmentKind::Greater),
            "S" => Some(FragmentKind::Smaller),
            "E" => Some(FragmentKind::Equal),
            _ => None,
        }
    }

    pub fn is_distinguishable(self) -> bool {
        self != FragmentKind::Equal
    }

    /// Swaps `Greater` and `Smaller`; `Equal` is a fixed point.
    pub fn reversed(self) -> Self {
        match self {
            FragmentKind::Greater => FragmentKind::Smaller,
            FragmentKind::Smaller => FragmentKind::Greater,
            FragmentKind::Equal => FragmentKind::Equal,
        }
    }
}

impl fmt::Display for FragmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Classification target: the fragment kinds left and right of the
/// expectation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassLabel {
    pub left: FragmentKind,
    pub right: FragmentKind,
}

impl ClassLabel {
    pub const fn new(left: FragmentKind, right: FragmentKind) -> Self {
        ClassLabel { left, right }
    }

    /// All nine labels in a fixed order.
    pub fn all() -> [ClassLabel; 9] {
        let mut out = [ClassLabel::new(FragmentKind::Equal, FragmentKind::Equal); 9];
        let mut i = 0;
        for left in FragmentKind::ALL {
            for right in FragmentKind::ALL {
                out[i] = ClassLabel::new(left, right);
                i += 1;
            }
        }
        out
    }

    pub fn is_symmetric(self) -> bool {
        self.left == self.right
    }

    pub fn reversed(self) -> Self {
        ClassLabel::new(self.left.reversed(), self.right.reversed())
    }

    pub fn kinds(self) -> [FragmentKind; 2] {
        [self.left, self.right]
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.left, self.right)
    }
}

/// Parses `"E,S"`, `"<E,S>"` or `"ES"`.
impl FromStr for ClassLabel {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('<').trim_end_matches('>');
        let mut codes = inner.split(',').map(str::trim).filter(|c| !c.is_empty());
        let (l, r) = match (codes.next(), codes.next(), codes.next()) {
            (Some(l), Some(r), None) => (l, r),
            (Some(both), None, None) if both.len() == 2 && both.is_ascii() => (&both[..1], &both[1..]),
            _ => return Err(ModelError::UnknownCode(String::from(s))),
        };
        match (FragmentKind::from_code(l), FragmentKind::from_code(r)) {
            (Some(left), Some(right)) => Ok(ClassLabel::new(left, right)),
            _ => Err(ModelError::UnknownCode(String::from(s))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum MetricDirection {
    #[cfg_attr(feature = "serde", serde(rename = "min"))]
    Minimize,
    #[cfg_attr(feature = "serde", serde(rename = "max"))]
    Maximize,
}

impl MetricDirection {
    pub fn code(self) -> &'static str {
        match self {
            MetricDirection::Minimize => "min",
            MetricDirection::Maximize => "max",
        }
    }
}

impl fmt::Display for MetricDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for MetricDirection {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "min" => Ok(MetricDirection::Minimize),
            "max" => Ok(MetricDirection::Maximize),
            other => Err(ModelError::UnknownCode(String::from(other))),
        }
    }
}

/// A quantified fragment over `[v_lo, v_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fragment {
    pub kind: FragmentKind,
    pub v_lo: f64,
    pub v_hi: f64,
    pub s_lo: f64,
    pub s_hi: f64,
}

impl Fragment {
    pub fn new(kind: FragmentKind, v_lo: f64, v_hi: f64, s_lo: f64, s_hi: f64) -> Result<Self, ModelError> {
        let frag = Fragment { kind, v_lo, v_hi, s_lo, s_hi };
        frag.validate()?;
        Ok(frag)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.v_lo.partial_cmp(&self.v_hi).is_none_or(|o| o.is_gt()) {
            return Err(ModelError::InvalidFragment("v_lo must not exceed v_hi"));
        }
        if !(0.0..=1.0).contains(&self.s_lo) || !(0.0..=1.0).contains(&self.s_hi) {
            return Err(ModelError::InvalidFragment("scores must lie in [0, 1]"));
        }
        match self.kind {
            FragmentKind::Equal if self.s_lo != self.s_hi => {
                Err(ModelError::InvalidFragment("an equal fragment has a single score"))
            }
            FragmentKind::Greater if self.s_lo > self.s_hi => {
                Err(ModelError::InvalidFragment("a greater fragment cannot decrease"))
            }
            FragmentKind::Smaller if self.s_lo < self.s_hi => {
                Err(ModelError::InvalidFragment("a smaller fragment cannot increase"))
            }
            _ => Ok(()),
        }
    }

    pub fn width(&self) -> f64 {
        self.v_hi - self.v_lo
    }

    fn same_interval(&self, other: &Fragment) -> bool {
        self.v_lo == other.v_lo && self.v_hi == other.v_hi
    }

    fn same_quantification(&self, other: &Fragment) -> bool {
        self.kind == other.kind && self.s_lo == other.s_lo && self.s_hi == other.s_hi
    }
}

/// Score of the first fragment of a proposition.
fn initial_score(kind: FragmentKind, direction: MetricDirection) -> f64 {
    match (kind, direction) {
        (FragmentKind::Equal, MetricDirection::Minimize) => 1.0,
        (FragmentKind::Equal, MetricDirection::Maximize) => 0.0,
        (FragmentKind::Greater, _) => 0.0,
        (FragmentKind::Smaller, _) => 1.0,
    }
}

fn equal_run(kinds: &[FragmentKind], from: usize) -> usize {
    kinds[from..].iter().take_while(|k| **k == FragmentKind::Equal).count()
}

/// Endpoint scores `(s_lo, s_hi)` for each fragment of a proposition.
///
/// The kinds are partitioned into series. A run of two or more `Equal`
/// fragments alternates `s_i = 1 - s_{i-1}`. Every other stretch is a
/// monotonic series whose distinguishable fragments share one kind with single
/// `Equal` fragments interleaved; with `d` distinguishable fragments the knot
/// scores step by `1/d` from 1 down to 0 (`Smaller`) or from 0 up to 1
/// (`Greater`). `Equal` fragments inside a series hold the current score.
///
/// Returns an empty vector for empty input.
pub fn set_scores(kinds: &[FragmentKind], direction: MetricDirection) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(kinds.len());
    let Some(first) = kinds.first() else {
        return out;
    };
    let mut cur = initial_score(*first, direction);
    let mut i = 0;
    while i < kinds.len() {
        if kinds[i] == FragmentKind::Equal {
            let run = equal_run(kinds, i);
            if run >= 2 {
                for k in 0..run {
                    if k > 0 {
                        cur = 1.0 - cur;
                    }
                    out.push((cur, cur));
                }
                i += run;
            } else {
                out.push((cur, cur));
                i += 1;
            }
            continue;
        }

        let trend = kinds[i];
        let mut end = i;
        while end < kinds.len() {
            let bridged = kinds[end] == FragmentKind::Equal
                && equal_run(kinds, end) == 1
                && kinds.get(end + 1) == Some(&trend);
            if kinds[end] == trend || bridged {
                end += 1;
            } else {
                break;
            }
        }
        let d = kinds[i..end].iter().filter(|k| **k == trend).count() as f64;
        let (begin, sign) = if trend == FragmentKind::Smaller { (1.0, -1.0) } else { (0.0, 1.0) };
        let mut step = 0.0;
        for kind in &kinds[i..end] {
            if *kind == trend {
                let lo = begin + sign * step / d;
                let hi = begin + sign * (step + 1.0) / d;
                out.push((clamp01(lo), clamp01(hi)));
                step += 1.0;
                cur = clamp01(hi);
            } else {
                out.push((cur, cur));
            }
        }
        i = end;
    }
    out
}

fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Splits two fragments claiming the same interval with different kinds or
/// scores at the interval midpoint. Anything else is returned unchanged.
pub fn resolve_intervals(a: Fragment, b: Fragment) -> (Fragment, Fragment) {
    if a.same_interval(&b) && !a.same_quantification(&b) && a.v_lo < a.v_hi {
        let mid = (a.v_lo + a.v_hi) / 2.0;
        (Fragment { v_hi: mid, ..a }, Fragment { v_lo: mid, ..b })
    } else {
        (a, b)
    }
}

/// An ordered conjunction of fragments.
#[derive(Debug, Clone, PartialEq)]
pub struct Proposition {
    fragments: Vec<Fragment>,
}

impl Proposition {
    /// Sorts by `v_lo`, keeping the input order among equal starts.
    pub fn new(mut fragments: Vec<Fragment>) -> Result<Self, ModelError> {
        for frag in &fragments {
            frag.validate()?;
        }
        fragments.sort_by(|a, b| a.v_lo.total_cmp(&b.v_lo));
        Ok(Proposition { fragments })
    }

    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    /// Applies [`resolve_intervals`] to every adjacent pair, left to right.
    pub fn resolve(mut self) -> Self {
        for i in 1..self.fragments.len() {
            let (a, b) = resolve_intervals(self.fragments[i - 1], self.fragments[i]);
            self.fragments[i - 1] = a;
            self.fragments[i] = b;
        }
        self
    }

    /// Drops zero-width and duplicated fragments and checks that the rest
    /// tile the range.
    pub fn compile(&self, direction: MetricDirection) -> Result<SatisfactionFunction, ModelError> {
        let mut segments: Vec<Segment> = Vec::with_capacity(self.fragments.len());
        let mut last: Option<&Fragment> = None;
        for frag in &self.fragments {
            if frag.width() <= 0.0 {
                continue;
            }
            if let Some(prev) = last {
                if prev.same_interval(frag) && prev.same_quantification(frag) {
                    continue;
                }
            }
            last = Some(frag);
            segments.push(Segment { v_lo: frag.v_lo, v_hi: frag.v_hi, s_lo: frag.s_lo, s_hi: frag.s_hi });
        }
        if segments.is_empty() {
            // Degenerate range: keep the first fragment's score as a point.
            let frag = self.fragments.first().ok_or(ModelError::NonTiling)?;
            segments.push(Segment { v_lo: frag.v_lo, v_hi: frag.v_hi, s_lo: frag.s_lo, s_hi: frag.s_hi });
        }
        SatisfactionFunction::new(direction, segments)
    }
}

/// One affine piece of a satisfaction function.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Segment {
    pub v_lo: f64,
    pub v_hi: f64,
    pub s_lo: f64,
    pub s_hi: f64,
}

impl Segment {
    fn at(&self, v: f64) -> f64 {
        let width = self.v_hi - self.v_lo;
        if width <= 0.0 {
            return self.s_lo;
        }
        let t = (v - self.v_lo) / width;
        clamp01(self.s_lo + (self.s_hi - self.s_lo) * t)
    }
}

/// Piecewise-linear `g(v)` over a finite metric range.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawFunction"))]
pub struct SatisfactionFunction {
    direction: MetricDirection,
    segments: Vec<Segment>,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawFunction {
    direction: MetricDirection,
    segments: Vec<Segment>,
}

#[cfg(feature = "serde")]
impl TryFrom<RawFunction> for SatisfactionFunction {
    type Error = ModelError;

    fn try_from(raw: RawFunction) -> Result<Self, Self::Error> {
        SatisfactionFunction::new(raw.direction, raw.segments)
    }
}

impl SatisfactionFunction {
    pub fn new(direction: MetricDirection, segments: Vec<Segment>) -> Result<Self, ModelError> {
        let first = segments.first().ok_or(ModelError::NonTiling)?;
        if !first.v_lo.is_finite() {
            return Err(ModelError::NonTiling);
        }
        for (i, seg) in segments.iter().enumerate() {
            if seg.v_lo.partial_cmp(&seg.v_hi).is_none_or(|o| o.is_gt()) || !seg.v_hi.is_finite() {
                return Err(ModelError::NonTiling);
            }
            if !(0.0..=1.0).contains(&seg.s_lo) || !(0.0..=1.0).contains(&seg.s_hi) {
                return Err(ModelError::InvalidFragment("scores must lie in [0, 1]"));
            }
            if i > 0 && segments[i - 1].v_hi != seg.v_lo {
                return Err(ModelError::NonTiling);
            }
        }
        Ok(SatisfactionFunction { direction, segments })
    }

    pub fn direction(&self) -> MetricDirection {
        self.direction
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn bounds(&self) -> (f64, f64) {
        let lo = self.segments[0].v_lo;
        let hi = self.segments[self.segments.len() - 1].v_hi;
        (lo, hi)
    }

    /// `g(v)`. Values outside the range clamp to the nearest bound; at a knot
    /// shared by two segments the right-hand segment is used. NaN evaluates
    /// at the lower bound.
    pub fn evaluate(&self, v: f64) -> f64 {
        let (lo, hi) = self.bounds();
        let v = if v.is_nan() { lo } else { v.clamp(lo, hi) };
        let last = self.segments.len() - 1;
        // Right-hand segment wins: find the last segment starting at or before v.
        let idx = self.segments.partition_point(|s| s.v_lo <= v).saturating_sub(1);
        let seg = &self.segments[idx];
        if idx == last && v >= seg.v_hi {
            return seg.s_hi;
        }
        seg.at(v)
    }

    /// `count + 1` evenly spaced `(v, g(v))` pairs from the lower to the upper
    /// bound.
    pub fn sample(&self, count: usize) -> Vec<(f64, f64)> {
        let (lo, hi) = self.bounds();
        if count == 0 {
            return Vec::new();
        }
        (0..=count)
            .map(|i| {
                let v = if i == count { hi } else { lo + (hi - lo) * i as f64 / count as f64 };
                (v, self.evaluate(v))
            })
            .collect()
    }
}

fn check_bounds(bounds: (f64, f64)) -> Result<(), ModelError> {
    let (lo, hi) = bounds;
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(ModelError::InvalidBounds { lo, hi })
    }
}

fn check_expectation(v_beta: f64, bounds: (f64, f64)) -> Result<(), ModelError> {
    let (lo, hi) = bounds;
    if v_beta.is_finite() && lo <= v_beta && v_beta <= hi {
        Ok(())
    } else {
        Err(ModelError::ExpectationOutOfBounds { v_beta, lo, hi })
    }
}

/// Bounds used when the caller gives none: `[0, 2 * max(v_beta)]`, or `[0, 1]`
/// when there is no positive expectation point.
pub fn default_bounds(v_betas: &[f64]) -> (f64, f64) {
    let max = v_betas.iter().copied().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    if max > 0.0 {
        (0.0, 2.0 * max)
    } else {
        (0.0, 1.0)
    }
}

/// Fragments for a single label before compilation.
pub fn single_proposition(
    label: ClassLabel,
    v_beta: Option<f64>,
    bounds: (f64, f64),
    direction: MetricDirection,
) -> Result<Proposition, ModelError> {
    check_bounds(bounds)?;
    let (lo, hi) = bounds;
    match v_beta {
        None if label.is_symmetric() => {
            let (s_lo, s_hi) = set_scores(&[label.left], direction)[0];
            Proposition::new(alloc::vec![Fragment::new(label.left, lo, hi, s_lo, s_hi)?])
        }
        None => Err(ModelError::MissingExpectation(label)),
        Some(v) => {
            check_expectation(v, bounds)?;
            let scores = set_scores(&label.kinds(), direction);
            Proposition::new(alloc::vec![
                Fragment::new(label.left, lo, v, scores[0].0, scores[0].1)?,
                Fragment::new(label.right, v, hi, scores[1].0, scores[1].1)?,
            ])
        }
    }
}

/// Compiles one classified requirement into `g(v)`.
pub fn compile_single(
    label: ClassLabel,
    v_beta: Option<f64>,
    bounds: (f64, f64),
    direction: MetricDirection,
) -> Result<SatisfactionFunction, ModelError> {
    single_proposition(label, v_beta, bounds, direction)?.compile(direction)
}

/// One split part of a requirement going into [`combine`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinePart {
    pub label: ClassLabel,
    pub v_beta: f64,
    /// Direction implied by this part alone, if known.
    pub direction: Option<MetricDirection>,
}

impl CombinePart {
    pub fn new(label: ClassLabel, v_beta: f64) -> Self {
        CombinePart { label, v_beta, direction: None }
    }

    pub fn with_direction(mut self, direction: MetricDirection) -> Self {
        self.direction = Some(direction);
        self
    }
}

/// Joint proposition for one or two parts, after score setting and interval
/// conflict resolution.
pub fn combined_proposition(
    parts: &[CombinePart],
    bounds: (f64, f64),
    direction: MetricDirection,
) -> Result<Proposition, ModelError> {
    if parts.is_empty() || parts.len() > 2 {
        return Err(ModelError::PartCount(parts.len()));
    }
    check_bounds(bounds)?;
    for part in parts {
        if part.direction.is_some_and(|d| d != direction) {
            return Err(ModelError::InconsistentDirections);
        }
        check_expectation(part.v_beta, bounds)?;
    }
    let mut sorted: Vec<CombinePart> = parts.to_vec();
    sorted.sort_by(|a, b| a.v_beta.total_cmp(&b.v_beta));
    if sorted.len() == 1 {
        return single_proposition(sorted[0].label, Some(sorted[0].v_beta), bounds, direction);
    }

    let (lo, hi) = bounds;
    let (first, second) = (sorted[0], sorted[1]);
    let kinds = [first.label.left, first.label.right, second.label.left, second.label.right];
    let intervals = [(lo, first.v_beta), (first.v_beta, second.v_beta), (first.v_beta, second.v_beta), (second.v_beta, hi)];
    let scores = set_scores(&kinds, direction);
    let mut fragments = Vec::with_capacity(4);
    for ((kind, (v_lo, v_hi)), (s_lo, s_hi)) in kinds.iter().zip(intervals).zip(scores) {
        fragments.push(Fragment::new(*kind, v_lo, v_hi, s_lo, s_hi)?);
    }
    Ok(Proposition::new(fragments)?.resolve())
}

/// Compiles split parts of one requirement into a joint `g(v)`.
pub fn combine(
    parts: &[CombinePart],
    bounds: (f64, f64),
    direction: MetricDirection,
) -> Result<SatisfactionFunction, ModelError> {
    combined_proposition(parts, bounds, direction)?.compile(direction)
}
