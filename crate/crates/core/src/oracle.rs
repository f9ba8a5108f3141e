//! Direct coverage computation, independent of the corner formulas.
//!
//! At radius `t` every point `p` of the unit-period sequence contributes the
//! closed interval `[p - t, p + t]` and all its integer translates. The
//! profile records, for each multiplicity `k`, the length of `[0, 1)` covered
//! by exactly `k` of those intervals.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::density::psi_k;
use crate::error::{Error, Result};
use crate::pwl::PiecewiseLinear;
use crate::rational::{int, Rational};
use crate::sequence::PeriodicSequence;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageProfile {
    pub radius: Rational,
    /// Multiplicity to covered length. Only positive lengths are stored.
    pub measures: BTreeMap<usize, Rational>,
}

impl CoverageProfile {
    pub fn measure(&self, k: usize) -> Rational {
        self.measures.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.measures.values().sum()
    }

    /// `Σ k·measure(k)`, the total interval length per unit cell.
    pub fn mass(&self) -> Rational {
        self.measures
            .iter()
            .map(|(k, v)| int(*k as i64) * v)
            .sum()
    }
}

/// Coverage multiplicities on one period at radius `t` (in units of the period).
pub fn coverage_profile(seq: &PeriodicSequence, t: &Rational) -> Result<CoverageProfile> {
    if t.is_negative() {
        return Err(Error::NegativeRadius(t.clone()));
    }
    let unit = seq.scale_to_unit();
    let zero = Rational::zero();
    let one = int(1);

    // +1 at a left end, -1 at a right end, clipped to [0, 1].
    let mut events: Vec<(Rational, i64)> = Vec::new();
    for p in unit.motif() {
        let lowest = (-t - p).floor().to_integer().to_i64().expect("radius fits in i64");
        let highest = (&one + t - p).ceil().to_integer().to_i64().expect("radius fits in i64");
        for n in lowest..=highest {
            let centre = p + int(n);
            let lo = (&centre - t).max(zero.clone());
            let hi = (&centre + t).min(one.clone());
            if lo < hi {
                events.push((lo, 1));
                events.push((hi, -1));
            }
        }
    }
    events.sort();

    let mut measures = BTreeMap::new();
    let mut depth: i64 = 0;
    let mut cursor = zero;
    for (x, delta) in events {
        if x > cursor {
            *measures.entry(depth as usize).or_insert_with(Rational::zero) += &x - &cursor;
            cursor = x;
        }
        depth += delta;
    }
    if cursor < one {
        *measures.entry(depth as usize).or_insert_with(Rational::zero) += &one - &cursor;
    }
    Ok(CoverageProfile {
        radius: t.clone(),
        measures,
    })
}

/// Fraction of the period covered by exactly `k` intervals of radius `t`.
pub fn psi_oracle(seq: &PeriodicSequence, k: usize, t: &Rational) -> Result<Rational> {
    Ok(coverage_profile(seq, t)?.measure(k))
}

/// Corner abscissae of `ψ_k` plus the midpoints between consecutive corners.
pub fn critical_radii(seq: &PeriodicSequence, k: usize) -> Vec<Rational> {
    radii_of(&psi_k(&seq.scale_to_unit(), k))
}

fn radii_of(f: &PiecewiseLinear) -> Vec<Rational> {
    let xs: Vec<Rational> = f.corners().iter().map(|c| c.x.clone()).collect();
    let mut out = xs.clone();
    out.extend(xs.windows(2).map(|w| (&w[0] + &w[1]) / int(2)));
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub k: usize,
    pub t: Rational,
    pub expected: Rational,
    pub actual: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleCheck {
    /// Number of `(k, t)` evaluations compared.
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `functions[k]` with the oracle at the corners and midpoints of
/// every function, plus `extra_radii`. Radii are in units of the period.
pub fn check_against_oracle(
    seq: &PeriodicSequence,
    functions: &[PiecewiseLinear],
    extra_radii: &[Rational],
) -> OracleCheck {
    let mut radii: Vec<Rational> = functions.iter().flat_map(radii_of).collect();
    radii.extend(extra_radii.iter().filter(|t| !t.is_negative()).cloned());
    radii.sort();
    radii.dedup();

    let mut report = OracleCheck::default();
    for t in radii {
        let profile = coverage_profile(seq, &t).expect("radius is non-negative");
        for (k, f) in functions.iter().enumerate() {
            let expected = profile.measure(k);
            let actual = f.evaluate(&t);
            report.checked += 1;
            if expected != actual {
                report.mismatches.push(Mismatch {
                    k,
                    t: t.clone(),
                    expected,
                    actual,
                });
            }
        }
    }
    report
}
