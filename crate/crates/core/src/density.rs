//! Density functions `ψ_k` from their closed-form corner descriptions.
//!
//! Everything here works on the unit-period rescaling of the input sequence.
//! With gaps `d_1, ..., d_m` (indices mod `m`):
//!
//! - `ψ_0` decreases from `(0, 1)` through the corners
//!   `(d_[i]/2, 1 - Σ_{j<i} d_[j] - (m-i+1)·d_[i])` of the sorted gaps.
//! - for `1 <= k <= m`, `ψ_k` is the sum of the `m` trapezoids of the triples
//!   `(d_{i-1}, d_i + ... + d_{i+k-2}, d_{i+k-1})`.
//! - `ψ_{k+m}(t + 1/2) = ψ_k(t)` and `ψ_{m-k}(1/2 - t) = ψ_k(t)` on `[0, 1/2]`,
//!   so `ψ_0, ..., ψ_{⌊m/2⌋}` determine the whole family.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::pwl::{
    sum_small_trapezoids, sum_trapezoids, Corner, PiecewiseLinear, TrapezoidTriple, SMALL_LIMIT,
};
use crate::rational::{common_denominator, int, rat, scaled_numerator, Rational};
use crate::sequence::PeriodicSequence;

fn half() -> Rational {
    rat(1, 2)
}

/// `ψ_0`: the uncovered fraction of the cell.
pub fn psi0(seq: &PeriodicSequence) -> PiecewiseLinear {
    let sorted = seq.scale_to_unit().gaps().sorted();
    let m = sorted.len();
    let mut corners = Vec::with_capacity(m + 1);
    corners.push(Corner::new(Rational::zero(), Rational::one()));
    let mut covered = Rational::zero();
    for (i, d) in sorted.iter().enumerate() {
        let still_growing = int((m - i) as i64);
        let y = Rational::one() - &covered - still_growing * d;
        corners.push(Corner::new(d * half(), y));
        covered += d;
    }
    PiecewiseLinear::from_corners(corners).expect("ψ_0 corners are non-negative and consistent")
}

/// The `m` triples whose trapezoids sum to `ψ_k`, one per motif point.
///
/// Entry `i` (0-based point index) is `(d_{i-1}, d_i + ... + d_{i+k-2}, d_{i+k-1})`.
pub fn trapezoid_triples(seq: &PeriodicSequence, k: usize) -> Result<Vec<TrapezoidTriple>> {
    let gaps = seq.scale_to_unit().gaps().into_vec();
    let m = gaps.len();
    if k < 1 || k > m {
        return Err(Error::KOutOfRange { k, m });
    }
    let mut prefix = Vec::with_capacity(2 * m + 1);
    prefix.push(Rational::zero());
    for j in 0..2 * m {
        let next = &prefix[j] + &gaps[j % m];
        prefix.push(next);
    }
    let triples = (0..m)
        .map(|i| {
            let left = gaps[(i + m - 1) % m].clone();
            let s = &prefix[i + k - 1] - &prefix[i];
            let right = gaps[(i + k - 1) % m].clone();
            TrapezoidTriple::new(left, s, right).expect("gaps are positive")
        })
        .collect();
    Ok(triples)
}

/// Unit-period gaps as numerators over their common denominator, when
/// every trapezoid sweep over them fits in machine integers.
struct SmallGaps {
    den: i64,
    gaps: Vec<i64>,
    /// Prefix sums over two laps of the cell.
    prefix: Vec<i64>,
}

impl SmallGaps {
    fn new(unit: &PeriodicSequence) -> Option<Self> {
        let gaps = unit.gaps().into_vec();
        let m = gaps.len();
        let den = common_denominator(&gaps);
        // Reach of a triple is at most two periods, i.e. 2·den.
        if den.clone() * BigInt::from(2 * (m + 1)) >= BigInt::from(SMALL_LIMIT) {
            return None;
        }
        let gaps: Vec<i64> = gaps
            .iter()
            .map(|g| scaled_numerator(g, &den).to_i64().expect("bounded"))
            .collect();
        let mut prefix = Vec::with_capacity(2 * m + 1);
        prefix.push(0);
        for j in 0..2 * m {
            prefix.push(prefix[j] + gaps[j % m]);
        }
        Some(Self {
            den: den.to_i64().expect("bounded"),
            gaps,
            prefix,
        })
    }

    fn psi(&self, k: usize) -> PiecewiseLinear {
        let m = self.gaps.len();
        let triples: Vec<[i64; 3]> = (0..m)
            .map(|i| {
                [
                    self.gaps[(i + m - 1) % m],
                    self.prefix[i + k - 1] - self.prefix[i],
                    self.gaps[(i + k - 1) % m],
                ]
            })
            .collect();
        sum_small_trapezoids(self.den, &triples)
    }

    /// `ψ_k` for each `k` in `ks`, split across threads for large motifs.
    fn psi_range(&self, ks: std::ops::RangeInclusive<usize>) -> Vec<PiecewiseLinear> {
        let ks: Vec<usize> = ks.collect();
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
        if threads < 2 || ks.len() * self.gaps.len() < 4096 {
            return ks.iter().map(|&k| self.psi(k)).collect();
        }
        let chunk = ks.len().div_ceil(threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = ks
                .chunks(chunk)
                .map(|part| scope.spawn(move || part.iter().map(|&k| self.psi(k)).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    }
}

/// `ψ_k` for any `k >= 0`. Indices beyond `m` are served by periodicity.
pub fn psi_k(seq: &PeriodicSequence, k: usize) -> PiecewiseLinear {
    let m = seq.len();
    if k == 0 {
        return psi0(seq);
    }
    if k <= m {
        if let Some(small) = SmallGaps::new(&seq.scale_to_unit()) {
            return small.psi(k);
        }
        let triples = trapezoid_triples(seq, k).expect("k is in range");
        return sum_trapezoids(&triples);
    }
    let base = (k - 1) % m + 1;
    let periods = (k - base) / m;
    psi_k(seq, base)
        .shift_right(&(int(periods as i64) * half()))
        .expect("shift is positive")
}

/// Closed-form area under `ψ_k`: `Σ d_i² / 4` for `k = 0`, otherwise
/// `Σ d_{i-1}·d_{i+k-1} / 2`.
pub fn rho_closed_form(seq: &PeriodicSequence, k: usize) -> Rational {
    let gaps = seq.scale_to_unit().gaps().into_vec();
    let m = gaps.len();
    if k == 0 {
        return gaps.iter().map(|d| d * d).sum::<Rational>() / int(4);
    }
    (0..m)
        .map(|i| &gaps[(i + m - 1) % m] * &gaps[(i + k - 1) % m])
        .sum::<Rational>()
        / int(2)
}

/// For each `k = 0..=⌊m/2⌋`, whether `ψ_{m-k}(1/2 - t) = ψ_k(t)` holds
/// exactly on `[0, 1/2]`.
pub fn symmetry_report(seq: &PeriodicSequence) -> Vec<(usize, bool)> {
    let unit = seq.scale_to_unit();
    let m = unit.len();
    (0..=m / 2)
        .map(|k| {
            let mirrored = psi_k(&unit, m - k)
                .truncate_above(&half())
                .reflect_about(&half())
                .expect("truncated to [0, 1/2]");
            (k, mirrored == psi_k(&unit, k))
        })
        .collect()
}

/// `ψ_k` bundled with its area and generating triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub k: usize,
    pub psi: PiecewiseLinear,
    pub rho: Rational,
    pub triples: Vec<TrapezoidTriple>,
}

pub fn density_report(seq: &PeriodicSequence, k: usize) -> DensityReport {
    let psi = psi_k(seq, k);
    let triples = if (1..=seq.len()).contains(&k) {
        trapezoid_triples(seq, k).expect("k is in range")
    } else {
        Vec::new()
    };
    DensityReport {
        k,
        rho: psi.integral(),
        psi,
        triples,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FingerprintOptions {
    /// Fold the motif onto its smallest period first.
    pub primitive_reduce: bool,
    /// Express radii in units of the period (period 1). When off, corners
    /// are in the sequence's own length units.
    pub rescale: bool,
}

impl Default for FingerprintOptions {
    fn default() -> Self {
        Self {
            primitive_reduce: true,
            rescale: true,
        }
    }
}

/// `ψ_0, ..., ψ_{⌊m/2⌋}` of a sequence, which determine every `ψ_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    motif_size: usize,
    period: Rational,
    functions: Vec<PiecewiseLinear>,
}

impl Fingerprint {
    pub fn motif_size(&self) -> usize {
        self.motif_size
    }

    /// Cell length in the coordinates the corners are expressed in.
    pub fn period(&self) -> &Rational {
        &self.period
    }

    pub fn functions(&self) -> &[PiecewiseLinear] {
        &self.functions
    }

    /// `ψ_k` for any `k`, unfolded from the stored half through the symmetry
    /// and periodicity identities.
    pub fn psi(&self, k: usize) -> PiecewiseLinear {
        let m = self.motif_size;
        let half = &self.period / int(2);
        if k < self.functions.len() {
            return self.functions[k].clone();
        }
        if k < m {
            return self.functions[m - k]
                .reflect_about(&half)
                .expect("support of ψ_{m-k} ends by half a period");
        }
        if k == m {
            // Left half mirrors ψ_0, right half repeats it.
            let psi0 = &self.functions[0];
            let left = psi0.reflect_about(&half).expect("ψ_0 ends by half a period");
            let right = psi0.shift_right(&half).expect("positive shift");
            return PiecewiseLinear::from_corners(
                left.corners().iter().chain(right.corners()).cloned(),
            )
            .expect("halves agree at the midpoint");
        }
        let base = (k - 1) % m + 1;
        let periods = (k - base) / m;
        self.psi(base)
            .shift_right(&(int(periods as i64) * half))
            .expect("positive shift")
    }
}

pub fn fingerprint(seq: &PeriodicSequence) -> Fingerprint {
    fingerprint_with(seq, FingerprintOptions::default())
}

pub fn fingerprint_with(seq: &PeriodicSequence, options: FingerprintOptions) -> Fingerprint {
    let cell = if options.primitive_reduce {
        seq.primitive_reduce()
    } else {
        seq.clone()
    };
    let unit = cell.scale_to_unit();
    let m = unit.len();
    let mut functions: Vec<PiecewiseLinear> = match SmallGaps::new(&unit) {
        Some(small) => std::iter::once(psi0(&unit))
            .chain(small.psi_range(1..=m / 2))
            .collect(),
        None => (0..=m / 2).map(|k| psi_k(&unit, k)).collect(),
    };
    let period = if options.rescale {
        Rational::one()
    } else {
        functions = functions.iter().map(|f| f.scale_x(cell.period())).collect();
        cell.period().clone()
    };
    Fingerprint {
        motif_size: m,
        period,
        functions,
    }
}

/// Where two fingerprints first disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FingerprintDiff {
    MotifSize { left: usize, right: usize },
    Period { left: Rational, right: Rational },
    Function {
        k: usize,
        corner: usize,
        left: Option<Corner>,
        right: Option<Corner>,
    },
}

impl std::fmt::Display for FingerprintDiff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |c: &Option<Corner>| match c {
            Some(c) => format!("({}, {})", c.x, c.y),
            None => "none".to_string(),
        };
        match self {
            Self::MotifSize { left, right } => write!(f, "motif sizes differ: {left} vs {right}"),
            Self::Period { left, right } => write!(f, "periods differ: {left} vs {right}"),
            Self::Function {
                k,
                corner,
                left,
                right,
            } => write!(
                f,
                "psi_{k} differs at corner {corner}: {} vs {}",
                show(left),
                show(right)
            ),
        }
    }
}

/// First difference between two fingerprints, or `None` if they are equal.
pub fn compare_fingerprints(a: &Fingerprint, b: &Fingerprint) -> Option<FingerprintDiff> {
    if a.motif_size != b.motif_size {
        return Some(FingerprintDiff::MotifSize {
            left: a.motif_size,
            right: b.motif_size,
        });
    }
    if a.period != b.period {
        return Some(FingerprintDiff::Period {
            left: a.period.clone(),
            right: b.period.clone(),
        });
    }
    for (k, (f, g)) in a.functions.iter().zip(&b.functions).enumerate() {
        if f == g {
            continue;
        }
        let (fc, gc) = (f.corners(), g.corners());
        let corner = (0..fc.len().max(gc.len()))
            .find(|&i| fc.get(i) != gc.get(i))
            .expect("unequal corner lists differ somewhere");
        return Some(FingerprintDiff::Function {
            k,
            corner,
            left: fc.get(corner).cloned(),
            right: gc.get(corner).cloned(),
        });
    }
    None
}

/// Whether the full (infinite) fingerprints agree, after folding both
/// sequences onto their primitive cells at unit period.
pub fn fingerprints_equal(s: &PeriodicSequence, q: &PeriodicSequence) -> bool {
    let (s, q) = (s.primitive_reduce(), q.primitive_reduce());
    if s.len() != q.len() {
        return false;
    }
    compare_fingerprints(&fingerprint(&s), &fingerprint(&q)).is_none()
}
