//! Exact piecewise-linear functions on `t >= 0` with bounded support.
//!
//! A function is stored as its list of corners `(x, y)` in strictly
//! increasing `x`. Between corners it is linear; beyond the last corner it is
//! zero, and so it is before the first corner. Jumps can therefore only happen
//! at the two ends of the support (this is how truncations are represented).
//!
//! The canonical form has no three consecutive collinear corners and no
//! redundant zero corners at either end, so two canonical functions are equal
//! exactly when their corner lists are.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, scaled_numerator, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Corner {
    #[serde(with = "crate::rational::serde_str")]
    pub x: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub y: Rational,
}

impl Corner {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PiecewiseLinear {
    corners: Vec<Corner>,
}

impl PiecewiseLinear {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Canonicalizes a raw corner list: sorts by `x`, drops exact duplicates,
    /// merges collinear runs and trims zero corners at both ends.
    pub fn from_corners(raw: impl IntoIterator<Item = Corner>) -> Result<Self> {
        let raw: Vec<Corner> = raw.into_iter().collect();
        if let Some(c) = raw.iter().find(|c| c.x.is_negative() || c.y.is_negative()) {
            return Err(Error::NegativeCorner {
                x: c.x.clone(),
                y: c.y.clone(),
            });
        }
        canonicalize(raw)
    }

    /// Builds from a list already known to be canonical.
    pub(crate) fn from_canonical(corners: Vec<Corner>) -> Self {
        debug_assert!(
            corners.windows(2).all(|w| w[0].x < w[1].x),
            "corner abscissae must strictly increase"
        );
        Self { corners }
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    pub fn is_zero(&self) -> bool {
        self.corners.is_empty()
    }

    /// Start of the support (first corner), if any.
    pub fn support_start(&self) -> Option<&Rational> {
        self.corners.first().map(|c| &c.x)
    }

    /// End of the support (last corner), if any.
    pub fn support_end(&self) -> Option<&Rational> {
        self.corners.last().map(|c| &c.x)
    }

    pub fn evaluate(&self, t: &Rational) -> Rational {
        let (first, last) = match (self.corners.first(), self.corners.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Rational::zero(),
        };
        if t < &first.x || t > &last.x {
            return Rational::zero();
        }
        let idx = self.corners.partition_point(|c| &c.x <= t);
        let left = &self.corners[idx - 1];
        if &left.x == t {
            return left.y.clone();
        }
        let right = &self.corners[idx];
        &left.y + (&right.y - &left.y) * (t - &left.x) / (&right.x - &left.x)
    }

    /// Pointwise sum. Both operands are assumed continuous wherever their
    /// supports overlap.
    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
            .expect("sum of canonical functions is consistent")
    }

    /// Pointwise difference; the result may be negative.
    pub(crate) fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
            .expect("difference of canonical functions is consistent")
    }

    fn combine(&self, other: &Self, op: impl Fn(Rational, Rational) -> Rational) -> Result<Self> {
        let mut xs: Vec<&Rational> = self
            .corners
            .iter()
            .chain(&other.corners)
            .map(|c| &c.x)
            .collect();
        xs.sort();
        xs.dedup();
        let corners = xs
            .into_iter()
            .map(|x| Corner::new(x.clone(), op(self.evaluate(x), other.evaluate(x))))
            .collect();
        canonicalize(corners)
    }

    /// `g(t) = f(center - t)`. The support of `f` must lie in `[0, center]`.
    pub fn reflect_about(&self, center: &Rational) -> Result<Self> {
        if let Some(end) = self.support_end() {
            if end > center {
                return Err(Error::SupportExceedsReflection {
                    center: center.clone(),
                });
            }
        }
        let corners = self
            .corners
            .iter()
            .rev()
            .map(|c| Corner::new(center - &c.x, c.y.clone()))
            .collect();
        Ok(Self::from_canonical(corners))
    }

    /// `g(t) = f(t - shift)` for `t >= shift`, zero before.
    pub fn shift_right(&self, shift: &Rational) -> Result<Self> {
        if shift.is_negative() {
            return Err(Error::NegativeShift(shift.clone()));
        }
        let corners = self
            .corners
            .iter()
            .map(|c| Corner::new(&c.x + shift, c.y.clone()))
            .collect();
        Ok(Self::from_canonical(corners))
    }

    /// Rescales the argument: `g(t) = f(t / factor)`.
    pub fn scale_x(&self, factor: &Rational) -> Self {
        assert!(factor.is_positive(), "scale factor must be positive");
        let corners = self
            .corners
            .iter()
            .map(|c| Corner::new(&c.x * factor, c.y.clone()))
            .collect();
        Self::from_canonical(corners)
    }

    /// Same function on `[0, c]`, zero for `t > c`.
    pub fn truncate_above(&self, c: &Rational) -> Self {
        match (self.support_start(), self.support_end()) {
            (Some(start), Some(end)) if c < end => {
                if c < start {
                    return Self::zero();
                }
                let mut corners: Vec<Corner> =
                    self.corners.iter().filter(|k| &k.x < c).cloned().collect();
                corners.push(Corner::new(c.clone(), self.evaluate(c)));
                canonicalize(corners).expect("truncation is consistent")
            }
            _ => self.clone(),
        }
    }

    /// Same function on `[c, ∞)`, zero for `t < c`.
    pub fn truncate_below(&self, c: &Rational) -> Self {
        match (self.support_start(), self.support_end()) {
            (Some(start), Some(end)) if c > start => {
                if c > end {
                    return Self::zero();
                }
                let mut corners = vec![Corner::new(c.clone(), self.evaluate(c))];
                corners.extend(self.corners.iter().filter(|k| &k.x > c).cloned());
                canonicalize(corners).expect("truncation is consistent")
            }
            _ => self.clone(),
        }
    }

    /// Exact area under the graph.
    pub fn integral(&self) -> Rational {
        let two = Rational::from_integer(BigInt::from(2));
        self.corners
            .windows(2)
            .map(|w| (&w[1].x - &w[0].x) * (&w[0].y + &w[1].y))
            .sum::<Rational>()
            / two
    }

    /// Slope of the first linear piece.
    pub fn initial_slope(&self) -> Option<Rational> {
        Some(slope(self.corners.first()?, self.corners.get(1)?))
    }

    /// Slopes of consecutive pieces, one per adjacent corner pair.
    pub fn slopes(&self) -> Vec<Rational> {
        self.corners.windows(2).map(|w| slope(&w[0], &w[1])).collect()
    }

    /// True iff no corner has a negative value (and hence the function is
    /// non-negative everywhere).
    pub fn is_non_negative(&self) -> bool {
        self.corners.iter().all(|c| !c.y.is_negative())
    }

    /// Largest value attained.
    pub fn max_value(&self) -> Rational {
        self.corners
            .iter()
            .map(|c| &c.y)
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

fn slope(a: &Corner, b: &Corner) -> Rational {
    (&b.y - &a.y) / (&b.x - &a.x)
}

fn collinear(a: &Corner, b: &Corner, c: &Corner) -> bool {
    (&b.y - &a.y) * (&c.x - &b.x) == (&c.y - &b.y) * (&b.x - &a.x)
}

fn canonicalize(mut raw: Vec<Corner>) -> Result<PiecewiseLinear> {
    raw.sort_by(|a, b| a.x.cmp(&b.x));
    let mut corners: Vec<Corner> = Vec::with_capacity(raw.len());
    for corner in raw {
        if let Some(last) = corners.last() {
            if last.x == corner.x {
                if last.y != corner.y {
                    return Err(Error::InconsistentCorner {
                        x: corner.x,
                        first: last.y.clone(),
                        second: corner.y,
                    });
                }
                continue;
            }
        }
        while corners.len() >= 2
            && collinear(&corners[corners.len() - 2], &corners[corners.len() - 1], &corner)
        {
            corners.pop();
        }
        corners.push(corner);
    }
    let lead = corners
        .windows(2)
        .take_while(|w| w[0].y.is_zero() && w[1].y.is_zero())
        .count();
    corners.drain(..lead);
    while corners.len() >= 2
        && corners[corners.len() - 1].y.is_zero()
        && corners[corners.len() - 2].y.is_zero()
    {
        corners.pop();
    }
    if corners.len() == 1 && corners[0].y.is_zero() {
        corners.clear();
    }
    Ok(PiecewiseLinear { corners })
}

/// Parameters `(d_left, s, d_right)` of one trapezoid summand of a density
/// function. The outer entries are interchangeable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrapezoidTriple {
    #[serde(with = "crate::rational::serde_str")]
    pub d_left: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub s: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub d_right: Rational,
}

impl TrapezoidTriple {
    pub fn new(d_left: Rational, s: Rational, d_right: Rational) -> Result<Self> {
        if !d_left.is_positive() || !d_right.is_positive() || s.is_negative() {
            return Err(Error::InvalidTriple { d_left, s, d_right });
        }
        Ok(Self { d_left, s, d_right })
    }

    /// The triple with the smaller outer entry first.
    pub fn normalized(&self) -> Self {
        if self.d_left <= self.d_right {
            self.clone()
        } else {
            Self {
                d_left: self.d_right.clone(),
                s: self.s.clone(),
                d_right: self.d_left.clone(),
            }
        }
    }

    pub fn min_outer(&self) -> &Rational {
        std::cmp::min(&self.d_left, &self.d_right)
    }

    pub fn max_outer(&self) -> &Rational {
        std::cmp::max(&self.d_left, &self.d_right)
    }

    /// Area `d_left · d_right / 2` under the trapezoid.
    pub fn area(&self) -> Rational {
        &self.d_left * &self.d_right / Rational::from_integer(BigInt::from(2))
    }

    /// The trapezoid with corners `(s/2, 0)`, `((min+s)/2, min)`,
    /// `((max+s)/2, min)`, `((d_left+s+d_right)/2, 0)`; a triangle when the
    /// outer entries agree.
    pub fn trapezoid(&self) -> PiecewiseLinear {
        let half = |v: Rational| v / Rational::from_integer(BigInt::from(2));
        let (lo, hi) = (self.min_outer(), self.max_outer());
        let corners = vec![
            Corner::new(half(self.s.clone()), Rational::zero()),
            Corner::new(half(lo + &self.s), lo.clone()),
            Corner::new(half(hi + &self.s), lo.clone()),
            Corner::new(
                half(&self.d_left + &self.s + &self.d_right),
                Rational::zero(),
            ),
        ];
        canonicalize(corners).expect("trapezoid corners are consistent")
    }
}

impl PartialOrd for TrapezoidTriple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by `s`, then by the outer pair.
impl Ord for TrapezoidTriple {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.s, &self.d_left, &self.d_right).cmp(&(&other.s, &other.d_left, &other.d_right))
    }
}

/// Sum of the trapezoids of `triples`, computed in one sweep over their
/// gradient changes.
///
/// All entries are brought to a common denominator `L`; in the coordinates
/// `X = 2Lt`, `Y = Lψ` every trapezoid has slopes `+1, 0, -1` and integer
/// corners, so the sweep is pure integer arithmetic. Machine integers are used
/// when the coordinates provably fit, big integers otherwise.
pub fn sum_trapezoids(triples: &[TrapezoidTriple]) -> PiecewiseLinear {
    if triples.is_empty() {
        return PiecewiseLinear::zero();
    }
    let den = common_denominator(
        triples
            .iter()
            .flat_map(|t| [&t.d_left, &t.s, &t.d_right]),
    );
    let scaled: Vec<[BigInt; 3]> = triples
        .iter()
        .map(|t| {
            [
                scaled_numerator(&t.d_left, &den),
                scaled_numerator(&t.s, &den),
                scaled_numerator(&t.d_right, &den),
            ]
        })
        .collect();
    sum_scaled_trapezoids(&den, &scaled)
}

/// [`sum_trapezoids`] for triples already written as numerators over the
/// common denominator `den`.
pub(crate) fn sum_scaled_trapezoids(den: &BigInt, scaled: &[[BigInt; 3]]) -> PiecewiseLinear {
    let Some(reach) = scaled.iter().map(|[a, s, b]| a + s + b).max() else {
        return PiecewiseLinear::zero();
    };
    let limit = BigInt::from(SMALL_LIMIT);
    if reach * BigInt::from(scaled.len() + 1) < limit && *den < limit {
        let small: Vec<[i64; 3]> = scaled
            .iter()
            .map(|v| v.clone().map(|x| x.to_i64().expect("bounded")))
            .collect();
        return sum_small_trapezoids(den.to_i64().expect("bounded"), &small);
    }
    let x_den = den * BigInt::from(2);
    let corners = sweep_scaled(scaled)
        .into_iter()
        .map(|(x, y)| {
            Corner::new(
                Rational::new(x, x_den.clone()),
                Rational::new(y, den.clone()),
            )
        })
        .collect();
    PiecewiseLinear::from_canonical(corners)
}

/// Coordinates below this bound cannot overflow `i64` during a sweep.
pub(crate) const SMALL_LIMIT: i64 = 1 << 60;

/// Machine-integer sweep. The caller guarantees `den < SMALL_LIMIT` and
/// `max(a + s + b) * (len + 1) < SMALL_LIMIT`.
pub(crate) fn sum_small_trapezoids(den: i64, scaled: &[[i64; 3]]) -> PiecewiseLinear {
    let reduced = |n: i64, d: i64| {
        let g = n.gcd(&d);
        Rational::new_raw(BigInt::from(n / g), BigInt::from(d / g))
    };
    let corners = sweep_scaled(scaled)
        .into_iter()
        .map(|(x, y)| Corner::new(reduced(x, 2 * den), reduced(y, den)))
        .collect();
    PiecewiseLinear::from_canonical(corners)
}

fn sweep_scaled<T>(triples: &[[T; 3]]) -> Vec<(T, T)>
where
    T: Integer + Signed + Clone + FromPrimitive,
{
    let mut events: Vec<(T, i64)> = Vec::with_capacity(4 * triples.len());
    for [a, s, b] in triples {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        events.push((s.clone(), 1));
        events.push((s.clone() + lo.clone(), -1));
        events.push((s.clone() + hi.clone(), -1));
        events.push((s.clone() + a.clone() + b.clone(), 1));
    }
    events.sort_by(|p, q| p.0.cmp(&q.0));

    let mut corners = Vec::new();
    let mut slope: i64 = 0;
    let mut y = T::zero();
    let mut prev_x: Option<T> = None;
    let mut idx = 0;
    while idx < events.len() {
        let x = events[idx].0.clone();
        let mut delta = 0;
        while idx < events.len() && events[idx].0 == x {
            delta += events[idx].1;
            idx += 1;
        }
        if let Some(px) = &prev_x {
            y = y + T::from_i64(slope).expect("small slope") * (x.clone() - px.clone());
        }
        if delta != 0 {
            corners.push((x.clone(), y.clone()));
        }
        slope += delta;
        prev_x = Some(x);
    }
    debug_assert!(slope == 0 && y.is_zero());
    corners
}
