//! Euclidean solvers. A set `S` of agents is jointly approvable iff some
//! direction `x` has `<v, x> > 0` for every `v` in `S`; scaling `x` down far
//! enough then gives a proposal they all approve.

use num_traits::{Signed, Zero};

use super::lp::{solve_lp_feasible_strict, LinearSystem};
use super::{Method, SolverConfig, SolverReport};
use crate::error::{Error, Result};
use crate::rational::{scale_to_u128, Rational};
use crate::space::{dot, position_groups, DeliberationSpace, Point, PositionGroup, SpaceKind};

fn require_euclidean(space: &DeliberationSpace, method: &'static str) -> Result<()> {
    if space.kind() != SpaceKind::Euclidean {
        return Err(Error::UnsupportedMethod {
            method,
            kind: space.kind().name(),
        });
    }
    Ok(())
}

fn coords(g: &PositionGroup) -> &[Rational] {
    g.position.as_coords().expect("euclidean")
}

/// Direction `x` with `<v, x> > 0` for `strict` and `<v, x> <= 0` for `weak`.
pub fn strict_direction(
    dim: usize,
    strict: &[&[Rational]],
    weak: &[&[Rational]],
) -> Result<Option<Vec<Rational>>> {
    solve_lp_feasible_strict(&LinearSystem::homogeneous(dim, strict, weak)?)
}

/// Turns a direction with `<v, x> > 0` for all `v` in `supporters` into a
/// proposal `p = eps x` they all approve, with `eps = min <v, x> / ||x||^2`.
pub fn proposal_along(x: &[Rational], supporters: &[&[Rational]]) -> Point {
    let norm2 = dot(x, x);
    let min = supporters
        .iter()
        .map(|v| dot(v, x))
        .min()
        .expect("nonempty supporters");
    debug_assert!(min.is_positive() && norm2.is_positive());
    let eps = min / norm2;
    Point::Euclidean(x.iter().map(|c| c * &eps).collect())
}

/// A proposal approved by every agent, if one exists.
pub fn solve_euc_perfect(space: &DeliberationSpace) -> Result<Option<Point>> {
    require_euclidean(space, "perfect-lp")?;
    let groups = position_groups(space);
    let normals: Vec<&[Rational]> = groups.iter().map(coords).collect();
    Ok(strict_direction(space.dim(), &normals, &[])?.map(|x| proposal_along(&x, &normals)))
}

/// Popular proposal by testing subsets of distinct positions in order of
/// decreasing weight (ties by ascending mask); the first feasible subset is
/// optimal. Supersets of a known-infeasible subset are skipped.
pub fn solve_euc_subsets(space: &DeliberationSpace, config: &SolverConfig) -> Result<SolverReport> {
    require_euclidean(space, "subset-lp")?;
    let groups = position_groups(space);
    let g = groups.len();
    if g > config.subset_max_positions.min(40) {
        return Err(Error::GuardExceeded {
            what: "distinct positions for the subset LP",
            limit: config.subset_max_positions.min(40),
            actual: g,
        });
    }
    let weights = scale_to_u128(&groups.iter().map(|gr| gr.weight.clone()).collect::<Vec<_>>())
        .ok_or(Error::WeightOverflow)?;
    let mut masks: Vec<(u128, u64)> = (1u64..1 << g)
        .map(|mask| {
            let w = (0..g)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| weights[i])
                .sum();
            (w, mask)
        })
        .collect();
    masks.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut infeasible: Vec<u64> = Vec::new();
    let mut work = 0;
    for (_, mask) in masks {
        if infeasible.iter().any(|&bad| bad & mask == bad) {
            continue;
        }
        let normals: Vec<&[Rational]> = (0..g)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| coords(&groups[i]))
            .collect();
        work += 1;
        match strict_direction(space.dim(), &normals, &[])? {
            Some(x) => {
                let p = proposal_along(&x, &normals);
                return SolverReport::new(space, p, Method::EucSubsetLp, work);
            }
            None => infeasible.push(mask),
        }
    }
    Err(Error::Precondition("no subset is approvable".into()))
}

struct Pattern {
    plus: Vec<usize>,
    weak: Vec<usize>,
    witness: Vec<Rational>,
    weight: Rational,
}

/// Popular proposal by enumerating the achievable sign patterns
/// `(<v_1, x> > 0 | <= 0, ...)` of the central arrangement one position at a
/// time. Each pattern keeps a witness direction, so only the sign the witness
/// does not already realize needs an LP.
pub fn solve_euc_cells(space: &DeliberationSpace) -> Result<SolverReport> {
    require_euclidean(space, "cells")?;
    let groups = position_groups(space);
    let dim = space.dim();
    let mut patterns = vec![Pattern {
        plus: Vec::new(),
        weak: Vec::new(),
        witness: vec![Rational::zero(); dim],
        weight: Rational::zero(),
    }];
    let mut work = 0;
    for (i, group) in groups.iter().enumerate() {
        let v = coords(group);
        let mut next = Vec::with_capacity(patterns.len() * 2);
        for pat in patterns {
            let witness_plus = dot(v, &pat.witness).is_positive();
            let mut plus = pat.plus.clone();
            plus.push(i);
            let mut weak = pat.weak.clone();
            weak.push(i);
            let strict_rows = |idx: &[usize]| -> Vec<&[Rational]> {
                idx.iter().map(|&j| coords(&groups[j])).collect()
            };
            // The other sign needs its own witness.
            let other = if witness_plus {
                strict_direction(dim, &strict_rows(&pat.plus), &strict_rows(&weak))?
            } else {
                strict_direction(dim, &strict_rows(&plus), &strict_rows(&pat.weak))?
            };
            work += 1;
            let plus_weight = &pat.weight + &group.weight;
            let (plus_witness, weak_witness) = if witness_plus {
                (Some(pat.witness), other)
            } else {
                (other, Some(pat.witness))
            };
            if let Some(w) = plus_witness {
                next.push(Pattern {
                    plus,
                    weak: pat.weak.clone(),
                    witness: w,
                    weight: plus_weight,
                });
            }
            if let Some(w) = weak_witness {
                next.push(Pattern {
                    plus: pat.plus,
                    weak,
                    witness: w,
                    weight: pat.weight,
                });
            }
        }
        patterns = next;
    }
    let mut best: Option<&Pattern> = None;
    for p in &patterns {
        if best.is_none_or(|b| p.weight > b.weight) {
            best = Some(p);
        }
    }
    let best = best.filter(|b| !b.plus.is_empty()).ok_or_else(|| {
        Error::Precondition("no sign pattern has a positive side".into())
    })?;
    let normals: Vec<&[Rational]> = best.plus.iter().map(|&j| coords(&groups[j])).collect();
    let p = proposal_along(&best.witness, &normals);
    SolverReport::new(space, p, Method::EucCells, work)
}
