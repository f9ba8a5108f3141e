//! Periodic sequences `{p_1, ..., p_m} + period·ℤ` and their gap vectors.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, rem_euclid, Rational};

/// A periodic point set on the real line, stored as a period and a sorted
/// motif of points in `[0, period)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicSequence {
    period: Rational,
    motif: Vec<Rational>,
}

/// Cyclic list of distances between successive motif points.
///
/// Entry `i` is `p_{i+1} - p_i`, the last one wrapping through the period.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GapVector(Vec<Rational>);

impl PeriodicSequence {
    /// Builds a sequence from arbitrary representatives: points are reduced
    /// modulo `period` and sorted. Two inputs that land on the same residue are
    /// rejected, since a motif never lists a point twice.
    pub fn new(period: Rational, points: impl IntoIterator<Item = Rational>) -> Result<Self> {
        if !period.is_positive() {
            return Err(Error::NonPositivePeriod(period));
        }
        let mut reduced: Vec<(Rational, Rational)> = points
            .into_iter()
            .map(|p| (rem_euclid(&p, &period), p))
            .collect();
        if reduced.is_empty() {
            return Err(Error::EmptyMotif);
        }
        reduced.sort();
        for pair in reduced.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicatePoint {
                    first: pair[0].1.clone(),
                    second: pair[1].1.clone(),
                });
            }
        }
        let motif = reduced.into_iter().map(|(r, _)| r).collect();
        Ok(Self { period, motif })
    }

    /// Convenience constructor for integer periods and coordinates.
    pub fn from_integers(period: i64, points: &[i64]) -> Result<Self> {
        Self::new(int(period), points.iter().map(|&p| int(p)))
    }

    /// The sequence with first point at 0 whose gaps are `gaps` in order.
    pub fn from_gaps(gaps: &[Rational]) -> Result<Self> {
        if gaps.is_empty() {
            return Err(Error::EmptyMotif);
        }
        if let Some(bad) = gaps.iter().find(|g| !g.is_positive()) {
            return Err(Error::NonPositivePeriod(bad.clone()));
        }
        let mut points = Vec::with_capacity(gaps.len());
        let mut cursor = Rational::zero();
        for g in gaps {
            points.push(cursor.clone());
            cursor += g;
        }
        Ok(Self {
            period: cursor,
            motif: points,
        })
    }

    pub fn period(&self) -> &Rational {
        &self.period
    }

    pub fn motif(&self) -> &[Rational] {
        &self.motif
    }

    /// Number of motif points `m`.
    pub fn len(&self) -> usize {
        self.motif.len()
    }

    pub fn is_empty(&self) -> bool {
        self.motif.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.period.is_one()
    }

    /// Rescales the real line so that the period becomes 1.
    pub fn scale_to_unit(&self) -> Self {
        if self.is_unit() {
            return self.clone();
        }
        Self {
            motif: self.motif.iter().map(|p| p / &self.period).collect(),
            period: Rational::one(),
        }
    }

    pub fn gaps(&self) -> GapVector {
        let m = self.motif.len();
        let gaps = (0..m)
            .map(|i| {
                if i + 1 < m {
                    &self.motif[i + 1] - &self.motif[i]
                } else {
                    &self.motif[0] + &self.period - &self.motif[i]
                }
            })
            .collect();
        GapVector(gaps)
    }

    /// Re-expresses the same point set over its smallest period.
    pub fn primitive_reduce(&self) -> Self {
        let gaps = self.gaps();
        let q = gaps.rotation_period();
        if q == self.len() {
            return self.clone();
        }
        let period: Rational = gaps.0[..q].iter().sum();
        let motif: Vec<Rational> = self.motif[..q]
            .iter()
            .map(|p| rem_euclid(p, &period))
            .collect();
        // The first q points are a full residue system for the new period.
        Self::new(period, motif).expect("sub-motif of a valid sequence is valid")
    }

    /// True iff all gaps are pairwise distinct.
    pub fn is_generic(&self) -> bool {
        self.gaps().is_generic()
    }

    /// Lexicographically least gap vector over all rotations of the gaps and
    /// of the reversed gaps. Equal for two sequences iff they differ by a
    /// translation or reflection (with the periods already matched).
    pub fn canonical_isometry_form(&self) -> GapVector {
        self.gaps().canonical()
    }

    /// Translates every point by `shift`.
    pub fn translate(&self, shift: &Rational) -> Self {
        Self::new(self.period.clone(), self.motif.iter().map(|p| p + shift))
            .expect("translation preserves validity")
    }

    /// Mirror image `p ↦ -p`.
    pub fn reflect(&self) -> Self {
        Self::new(self.period.clone(), self.motif.iter().map(|p| -p))
            .expect("reflection preserves validity")
    }

    /// Points of the sequence inside `[0, period·copies)`, listed over the
    /// longer period. Used to check that reductions preserve the point set.
    pub fn unfold(&self, copies: usize) -> Self {
        let points = (0..copies).flat_map(|c| {
            let offset = &self.period * int(c as i64);
            self.motif.iter().map(move |p| p + &offset)
        });
        Self::new(&self.period * int(copies as i64), points)
            .expect("unfolding preserves validity")
    }
}

impl GapVector {
    pub fn new(gaps: Vec<Rational>) -> Self {
        Self(gaps)
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    /// Gap at a cyclic index.
    pub fn cyclic(&self, index: isize) -> &Rational {
        let m = self.0.len() as isize;
        &self.0[index.rem_euclid(m) as usize]
    }

    /// Gaps in increasing order, `d_[1] <= ... <= d_[m]`.
    pub fn sorted(&self) -> Vec<Rational> {
        let mut sorted = self.0.clone();
        sorted.sort();
        sorted
    }

    pub fn is_generic(&self) -> bool {
        let distinct: BTreeSet<&Rational> = self.0.iter().collect();
        distinct.len() == self.0.len()
    }

    /// Smallest `q` dividing `m` such that rotating by `q` fixes the vector.
    pub fn rotation_period(&self) -> usize {
        let m = self.0.len();
        (1..=m)
            .filter(|q| m % q == 0)
            .find(|&q| (0..m).all(|i| self.0[i] == self.0[(i + q) % m]))
            .unwrap_or(m)
    }

    pub fn canonical(&self) -> GapVector {
        let forward = least_rotation(&self.0);
        let mut reversed = self.0.clone();
        reversed.reverse();
        let backward = least_rotation(&reversed);
        GapVector(forward.min(backward))
    }
}

/// Lexicographically least cyclic rotation (two-pointer minimum expression).
pub fn least_rotation<T: Ord + Clone>(items: &[T]) -> Vec<T> {
    let n = items.len();
    if n == 0 {
        return Vec::new();
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        match items[(i + k) % n].cmp(&items[(j + k) % n]) {
            Ordering::Equal => k += 1,
            Ordering::Greater => {
                i += k + 1;
                if i == j {
                    i += 1;
                }
                k = 0;
            }
            Ordering::Less => {
                j += k + 1;
                if i == j {
                    j += 1;
                }
                k = 0;
            }
        }
    }
    let start = i.min(j);
    items[start..].iter().chain(&items[..start]).cloned().collect()
}
