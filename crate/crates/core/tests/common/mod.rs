#![allow(dead_code)]

use pdens::rational::{int, rat};
use pdens::{PeriodicSequence, Rational};
use proptest::prelude::*;

/// Unit-period sequences with `1..=max_m` points on the grid `1/q`, `q <= 60`.
pub fn unit_sequence(max_m: usize) -> impl Strategy<Value = PeriodicSequence> {
    (1..=max_m)
        .prop_flat_map(|m| ((m as i64).max(2)..=60).prop_map(move |q| (m, q)))
        .prop_flat_map(|(m, q)| {
            proptest::sample::subsequence((0..q).collect::<Vec<_>>(), m)
                .prop_map(move |nums| {
                    PeriodicSequence::new(int(1), nums.into_iter().map(|n| rat(n, q))).unwrap()
                })
        })
}

/// Sequences whose gaps are distinct integers up to 60, in random cyclic order.
pub fn generic_sequence(max_m: usize) -> impl Strategy<Value = PeriodicSequence> {
    (1..=max_m)
        .prop_flat_map(|m| proptest::sample::subsequence((1..=60i64).collect::<Vec<_>>(), m))
        .prop_flat_map(|gaps| Just(gaps).prop_shuffle())
        .prop_map(|gaps| {
            let gaps: Vec<Rational> = gaps.into_iter().map(int).collect();
            PeriodicSequence::from_gaps(&gaps).unwrap().scale_to_unit()
        })
}

/// Rational in `[0, hi]` with denominator at most 120.
pub fn radius(hi: i64) -> impl Strategy<Value = Rational> {
    (1..=120i64).prop_flat_map(move |q| (0..=hi * q).prop_map(move |n| rat(n, q)))
}

/// Generic sequences whose gaps are distinct powers of two, so all pairwise
/// gap sums differ as well.
pub fn sidon_sequence(max_m: usize) -> impl Strategy<Value = PeriodicSequence> {
    (1..=max_m)
        .prop_flat_map(|m| proptest::sample::subsequence((0..14u32).collect::<Vec<_>>(), m))
        .prop_flat_map(|exps| Just(exps).prop_shuffle())
        .prop_map(|exps| {
            let gaps: Vec<Rational> = exps.into_iter().map(|e| int(1 << e)).collect();
            PeriodicSequence::from_gaps(&gaps).unwrap().scale_to_unit()
        })
}
