//! Recovering a generic sequence from `ψ_1`.
//!
//! Written with ramps `r(t) = max(t, 0)`, the first density is
//!
//! ```text
//! ψ_1(t) = 2m·r(t) - 4·Σ_j r(t - d_j/2) + 2·Σ_i r(t - (d_{i-1} + d_i)/2)
//! ```
//!
//! so the slope change at `x > 0` is `2P - 4G`, where `G` counts gaps equal
//! to `2x` and `P` counts cyclically adjacent gap pairs summing to `2x`. For
//! distinct gaps `G <= 1`. The search walks positions in increasing order,
//! decides at each one whether a new gap starts there and which known gaps
//! become neighbours, and accepts the first candidate whose own `ψ_1` matches
//! the input exactly.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::density::psi_k;
use crate::error::{Error, Result};
use crate::pwl::{PiecewiseLinear, TrapezoidTriple};
use crate::rational::{int, Rational};
use crate::sequence::PeriodicSequence;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructionResult {
    /// Unit period, first point at 0.
    pub sequence: PeriodicSequence,
    /// Adjacent gap pairs `(d_left, d_right)` in the order they were found.
    pub peeled_triples: Vec<(Rational, Rational)>,
}

/// Rebuilds a generic `m`-point sequence (up to isometry) from its `ψ_1`.
pub fn reconstruct_from_psi1(f: &PiecewiseLinear, m: usize) -> Result<ReconstructionResult> {
    if m == 0 {
        return Err(Error::EmptyMotif);
    }
    let atoms = atoms(f, m)?;
    if let Some((x, w)) = atoms.iter().find(|(_, w)| **w < -4) {
        return Err(Error::NotGeneric(format!(
            "slope drops by {} at t = {x}, so gaps repeat",
            -w
        )));
    }

    let (gaps, pairs) = if m == 1 {
        (vec![Rational::one()], vec![(Rational::one(), Rational::one())])
    } else if m == 2 {
        let gaps: Vec<Rational> = atoms
            .iter()
            .filter(|(_, w)| **w == -4)
            .map(|(x, _)| x * int(2))
            .filter(|d| *d < Rational::one())
            .collect();
        if gaps.len() != 2 {
            return Err(Error::InconsistentFunction(
                "expected two distinct gaps".into(),
            ));
        }
        let pair = (gaps[0].clone(), gaps[1].clone());
        (gaps, vec![pair.clone(), pair])
    } else {
        let mut search = Search {
            m,
            atoms: &atoms,
            target: f,
        };
        let found = search
            .run(State::default(), &Rational::zero())
            .ok_or_else(|| {
                Error::InconsistentFunction(format!(
                    "no generic {m}-point sequence has this first density"
                ))
            })?;
        let pairs = found
            .edges
            .iter()
            .map(|&(a, b)| (found.gaps[a].clone(), found.gaps[b].clone()))
            .collect();
        (cycle_order(&found.gaps, &found.edges), pairs)
    };

    let sequence = PeriodicSequence::from_gaps(&gaps)?;
    if psi_k(&sequence, 1) != *f {
        return Err(Error::InconsistentFunction(
            "round trip does not reproduce the input".into(),
        ));
    }
    Ok(ReconstructionResult {
        sequence,
        peeled_triples: pairs,
    })
}

/// Subtracts the trapezoids of `pairs` from `f` one at a time, checking that
/// every residual stays non-negative with initial slope `2(m - j)` after `j`
/// removals and that nothing is left at the end. Returns the residuals.
pub fn peel(f: &PiecewiseLinear, pairs: &[(Rational, Rational)]) -> Result<Vec<PiecewiseLinear>> {
    let m = pairs.len();
    let mut residual = f.clone();
    let mut out = Vec::with_capacity(m);
    for (j, (a, b)) in pairs.iter().enumerate() {
        let triple = TrapezoidTriple::new(a.clone(), Rational::zero(), b.clone())?;
        residual = residual.sub(&triple.trapezoid());
        let remaining = m - j - 1;
        if !residual.is_non_negative() {
            return Err(Error::InconsistentFunction(format!(
                "residual goes negative after {} peels",
                j + 1
            )));
        }
        let slope = residual.initial_slope().unwrap_or_else(Rational::zero);
        if remaining > 0 && slope != int(2 * remaining as i64) {
            return Err(Error::InconsistentFunction(format!(
                "initial slope {slope} after {} peels, expected {}",
                j + 1,
                2 * remaining
            )));
        }
        out.push(residual.clone());
    }
    if !residual.is_zero() {
        return Err(Error::InconsistentFunction(
            "residual is not zero after all peels".into(),
        ));
    }
    Ok(out)
}

/// Whether `ψ_1` of a generic sequence gives back the same isometry class.
pub fn verify_completeness(seq: &PeriodicSequence) -> Result<bool> {
    if !seq.is_generic() {
        return Err(Error::NotGeneric("gaps repeat".into()));
    }
    let unit = seq.scale_to_unit();
    let result = reconstruct_from_psi1(&psi_k(&unit, 1), unit.len())?;
    Ok(result.sequence.canonical_isometry_form() == unit.canonical_isometry_form())
}

/// Slope changes of `f` keyed by position, after checking the shape of a
/// first density of an `m`-point sequence.
fn atoms(f: &PiecewiseLinear, m: usize) -> Result<BTreeMap<Rational, i64>> {
    let corners = f.corners();
    let bad = |why: &str| Err(Error::InconsistentFunction(why.to_string()));
    let (Some(first), Some(last)) = (corners.first(), corners.last()) else {
        return bad("the function is identically zero");
    };
    if !first.x.is_zero() || !first.y.is_zero() {
        return bad("the function must start at (0, 0)");
    }
    if !last.y.is_zero() {
        return bad("the function must end at zero");
    }
    let slopes = f.slopes();
    if slopes[0] != int(2 * m as i64) {
        return bad(&format!(
            "initial slope {} does not match 2m = {}",
            slopes[0],
            2 * m
        ));
    }
    let mut out = BTreeMap::new();
    for (i, c) in corners.iter().enumerate().skip(1) {
        let after = slopes.get(i).cloned().unwrap_or_else(Rational::zero);
        let change = after - &slopes[i - 1];
        if !change.is_integer() || change.to_integer().is_odd() {
            return bad(&format!("slope change {change} at t = {} is not an even integer", c.x));
        }
        let w = change.to_integer().to_i64().expect("small slope change");
        out.insert(c.x.clone(), w);
    }
    Ok(out)
}

#[derive(Clone, Default)]
struct State {
    gaps: Vec<Rational>,
    gap_sum: Rational,
    edges: Vec<(usize, usize)>,
    degree: Vec<u8>,
    parent: Vec<usize>,
}

impl State {
    fn root(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    fn push_gap(&mut self, d: Rational) {
        self.gap_sum += &d;
        self.gaps.push(d);
        self.degree.push(0);
        self.parent.push(self.parent.len());
    }

    fn try_edge(&mut self, a: usize, b: usize, m: usize) -> bool {
        if self.degree[a] >= 2 || self.degree[b] >= 2 {
            return false;
        }
        let (ra, rb) = (self.root(a), self.root(b));
        if ra == rb {
            // Only the last edge may close the cycle.
            if self.gaps.len() != m || self.edges.len() != m - 1 {
                return false;
            }
        } else {
            self.parent[ra] = rb;
        }
        self.degree[a] += 1;
        self.degree[b] += 1;
        self.edges.push((a, b));
        true
    }
}

struct Search<'a> {
    m: usize,
    atoms: &'a BTreeMap<Rational, i64>,
    target: &'a PiecewiseLinear,
}

impl Search<'_> {
    fn run(&mut self, state: State, after: &Rational) -> Option<State> {
        let Some(x) = self.next_position(&state, after) else {
            return self.accept(state);
        };
        let w = self.atoms.get(&x).copied().unwrap_or(0);
        let two_x = &x * int(2);
        let candidates: Vec<(usize, usize)> = (0..state.gaps.len())
            .flat_map(|a| (a + 1..state.gaps.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| &state.gaps[a] + &state.gaps[b] == two_x)
            .collect();

        for new_gap in [false, true] {
            let mut base = state.clone();
            if new_gap {
                if base.gaps.len() >= self.m || &base.gap_sum + &two_x > Rational::one() {
                    continue;
                }
                base.push_gap(two_x.clone());
            }
            let doubled = w + if new_gap { 4 } else { 0 };
            if doubled < 0 || doubled % 2 != 0 {
                continue;
            }
            let p = (doubled / 2) as usize;
            if p > candidates.len() {
                continue;
            }
            for chosen in combinations(candidates.len(), p) {
                let mut next = base.clone();
                if chosen
                    .iter()
                    .all(|&c| next.try_edge(candidates[c].0, candidates[c].1, self.m))
                {
                    if let Some(found) = self.run(next, &x) {
                        return Some(found);
                    }
                }
            }
        }
        None
    }

    fn next_position(&self, state: &State, after: &Rational) -> Option<Rational> {
        use std::ops::Bound::{Excluded, Unbounded};
        let corner = self.atoms.range((Excluded(after), Unbounded)).next().map(|(x, _)| x.clone());
        let gaps = &state.gaps;
        let pair = (0..gaps.len())
            .flat_map(|a| (a + 1..gaps.len()).map(move |b| (&gaps[a] + &gaps[b]) / int(2)))
            .filter(|x| x > after)
            .min();
        match (corner, pair) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    fn accept(&self, state: State) -> Option<State> {
        if state.gaps.len() != self.m || state.edges.len() != self.m || !state.gap_sum.is_one() {
            return None;
        }
        let order = cycle_order(&state.gaps, &state.edges);
        let seq = PeriodicSequence::from_gaps(&order).ok()?;
        (psi_k(&seq, 1) == *self.target).then_some(state)
    }
}

/// Walks the cycle from the smallest gap towards its smaller neighbour.
fn cycle_order(gaps: &[Rational], edges: &[(usize, usize)]) -> Vec<Rational> {
    let m = gaps.len();
    let mut adjacent = vec![Vec::with_capacity(2); m];
    for &(a, b) in edges {
        adjacent[a].push(b);
        adjacent[b].push(a);
    }
    let start = (0..m).min_by(|&a, &b| gaps[a].cmp(&gaps[b])).expect("non-empty");
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = *adjacent[start]
        .iter()
        .min_by(|&&a, &&b| gaps[a].cmp(&gaps[b]))
        .expect("cycle vertex has neighbours");
    while cur != start {
        order.push(cur);
        let next = if adjacent[cur][0] == prev { adjacent[cur][1] } else { adjacent[cur][0] };
        prev = cur;
        cur = next;
    }
    order.into_iter().map(|i| gaps[i].clone()).collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pwl::Corner;
    use crate::rational::rat;

    fn reconstruct(seq: &PeriodicSequence) -> Result<ReconstructionResult> {
        reconstruct_from_psi1(&psi_k(seq, 1), seq.len())
    }

    #[test]
    fn four_distinct_gaps() {
        let s = PeriodicSequence::new(int(1), [int(0), rat(1, 10), rat(3, 10), rat(6, 10)]).unwrap();
        let r = reconstruct(&s).unwrap();
        assert_eq!(r.sequence.canonical_isometry_form(), s.canonical_isometry_form());
        assert_eq!(r.peeled_triples.len(), 4);
        assert_eq!(r.sequence.motif()[0], int(0));
    }

    #[test]
    fn single_point() {
        let s = PeriodicSequence::from_integers(1, &[0]).unwrap();
        let r = reconstruct(&s).unwrap();
        assert_eq!(r.sequence, s);
        assert!(verify_completeness(&s).unwrap());
    }

    #[test]
    fn two_points() {
        let s = PeriodicSequence::new(int(1), [int(0), rat(2, 7)]).unwrap();
        let r = reconstruct(&s).unwrap();
        assert_eq!(r.sequence.canonical_isometry_form(), s.canonical_isometry_form());
    }

    #[test]
    fn three_point_fixture() {
        let s = PeriodicSequence::new(int(1), [int(0), rat(1, 3), rat(1, 2)]).unwrap();
        assert!(verify_completeness(&s).unwrap());
    }

    #[test]
    fn repeated_gaps_are_refused() {
        let s15 = PeriodicSequence::from_integers(15, &[0, 1, 3, 4, 5, 7, 9, 10, 12]).unwrap();
        let unit = s15.scale_to_unit();
        assert!(matches!(reconstruct(&unit), Err(Error::NotGeneric(_))));
        assert!(matches!(verify_completeness(&s15), Err(Error::NotGeneric(_))));
    }

    #[test]
    fn wrong_motif_size_is_inconsistent() {
        let s = PeriodicSequence::new(int(1), [int(0), rat(1, 10), rat(3, 10), rat(6, 10)]).unwrap();
        let f = psi_k(&s, 1);
        assert!(matches!(
            reconstruct_from_psi1(&f, 5),
            Err(Error::InconsistentFunction(_))
        ));
    }

    #[test]
    fn invalid_shape_is_inconsistent() {
        let f = PiecewiseLinear::from_corners([
            Corner::new(int(0), int(0)),
            Corner::new(rat(1, 4), rat(3, 2)),
            Corner::new(rat(3, 4), int(0)),
        ])
        .unwrap();
        assert!(matches!(
            reconstruct_from_psi1(&f, 3),
            Err(Error::InconsistentFunction(_))
        ));
        assert!(matches!(
            reconstruct_from_psi1(&PiecewiseLinear::zero(), 3),
            Err(Error::InconsistentFunction(_))
        ));
    }

    #[test]
    fn peeling_leaves_valid_residuals() {
        let s = PeriodicSequence::new(int(1), [int(0), rat(1, 10), rat(3, 10), rat(6, 10)]).unwrap();
        let f = psi_k(&s, 1);
        let r = reconstruct_from_psi1(&f, 4).unwrap();
        let residuals = peel(&f, &r.peeled_triples).unwrap();
        assert_eq!(residuals.len(), 4);
        assert!(residuals.last().unwrap().is_zero());
        let wrong = vec![(rat(1, 10), rat(2, 5)); 4];
        assert!(peel(&f, &wrong).is_err());
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
