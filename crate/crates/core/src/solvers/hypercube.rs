//! Hypercube solvers: brute force over all `2^d` proposals, and an ILP over
//! dimension types that decides whether an exact support set is realizable.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{Method, SolverConfig, SolverReport};
use crate::error::{Error, Result};
use crate::rational::scale_to_u128;
use crate::space::{position_groups, BitPoint, DeliberationSpace, Point, SpaceKind};

const CHUNK: u64 = 1 << 16;

fn require_hypercube(space: &DeliberationSpace, method: &'static str) -> Result<()> {
    if space.kind() != SpaceKind::Hypercube {
        return Err(Error::UnsupportedMethod {
            method,
            kind: space.kind().name(),
        });
    }
    Ok(())
}

/// Maps a counter to the proposal whose coordinate `i` is bit `d - 1 - i`, so
/// ascending counters enumerate proposals in lexicographic order.
fn counter_to_point(d: usize, counter: u64) -> BitPoint {
    BitPoint::from_indices(d, (0..d).filter(|&i| counter >> (d - 1 - i) & 1 == 1))
}

fn reversed_word(p: &BitPoint) -> u64 {
    let d = p.len();
    p.ones().fold(0u64, |acc, i| acc | 1 << (d - 1 - i))
}

/// Exact popular proposal by enumeration; ties go to the lexicographically
/// smallest proposal.
pub fn solve_hyp_bruteforce(space: &DeliberationSpace, config: &SolverConfig) -> Result<SolverReport> {
    require_hypercube(space, "brute")?;
    let d = space.dim();
    let limit = config.brute_max_d.min(63);
    if d > limit {
        return Err(Error::GuardExceeded {
            what: "hypercube dimension for brute force",
            limit,
            actual: d,
        });
    }
    let groups = position_groups(space);
    let weights: Vec<u128> =
        scale_to_u128(&groups.iter().map(|g| g.weight.clone()).collect::<Vec<_>>())
            .ok_or(Error::WeightOverflow)?;
    let agents: Vec<(u64, u128)> = groups
        .iter()
        .zip(&weights)
        .map(|(g, &w)| (reversed_word(g.position.as_bits().expect("hypercube")), w))
        .collect();

    let total = 1u64 << d;
    let chunks = total.div_ceil(CHUNK);
    let (_, best) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = (c * CHUNK).max(1);
            let hi = ((c + 1) * CHUNK).min(total);
            let mut best = (0u128, u64::MAX);
            for x in lo..hi {
                let size = x.count_ones();
                let s: u128 = agents
                    .iter()
                    .filter(|(v, _)| size < 2 * (v & x).count_ones())
                    .map(|(_, w)| *w)
                    .sum();
                if s > best.0 || best.1 == u64::MAX {
                    best = (s, x);
                }
            }
            best
        })
        .reduce(
            || (0u128, u64::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let proposal = Point::Hypercube(counter_to_point(d, best));
    SolverReport::new(space, proposal, Method::HypBrute, total - 1)
}

/// One dimension type: the dimensions whose column across all agents equals
/// `signature`, and how many of them the proposal sets to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionType {
    pub signature: Vec<bool>,
    pub count: usize,
    pub chosen: usize,
    pub dimensions: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpSolution {
    pub types: Vec<DimensionType>,
    /// Sets the first `chosen` dimensions of each type.
    pub proposal: Point,
    pub nodes: u64,
}

struct Ilp {
    counts: Vec<i64>,
    /// `coef[r][t]`, rows `0..n` for agents and row `n` for `sum x >= 1`.
    coef: Vec<Vec<i64>>,
    upper: Vec<bool>,
    rhs: Vec<i64>,
    suffix_min: Vec<Vec<i64>>,
    suffix_max: Vec<Vec<i64>>,
    nodes: u64,
    budget: u64,
}

impl Ilp {
    fn prunes(&self, t: usize, partial: &[i64]) -> bool {
        (0..self.rhs.len()).any(|r| {
            if self.upper[r] {
                partial[r] + self.suffix_min[r][t] > self.rhs[r]
            } else {
                partial[r] + self.suffix_max[r][t] < self.rhs[r]
            }
        })
    }

    fn dfs(&mut self, t: usize, x: &mut Vec<i64>, partial: &mut Vec<i64>) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::GuardExceeded {
                what: "ILP search nodes",
                limit: self.budget as usize,
                actual: self.nodes as usize,
            });
        }
        if self.prunes(t, partial) {
            return Ok(false);
        }
        if t == self.counts.len() {
            return Ok(true);
        }
        for v in 0..=self.counts[t] {
            for r in 0..self.rhs.len() {
                partial[r] += self.coef[r][t] * v;
            }
            x.push(v);
            if self.dfs(t + 1, x, partial)? {
                for r in 0..self.rhs.len() {
                    partial[r] -= self.coef[r][t] * v;
                }
                return Ok(true);
            }
            x.pop();
            for r in 0..self.rhs.len() {
                partial[r] -= self.coef[r][t] * v;
            }
        }
        Ok(false)
    }
}

/// Decides whether some non-status-quo proposal is approved by exactly the
/// agents in `target`, by depth-first search over dimension-type counts.
///
/// Agent `i` approves `X` iff `sum_{b_i=0} x_b - sum_{b_i=1} x_b <= -1`.
/// A final row `sum x_b >= 1` excludes the status quo.
pub fn solve_hyp_type_ilp(
    space: &DeliberationSpace,
    target: &[usize],
    config: &SolverConfig,
) -> Result<Option<IlpSolution>> {
    require_hypercube(space, "ilp")?;
    let n = space.n();
    let limit = config.ilp_max_n.min(64);
    if n > limit {
        return Err(Error::GuardExceeded {
            what: "agents for the type ILP",
            limit,
            actual: n,
        });
    }
    let mut in_target = vec![false; n];
    for &i in target {
        if i >= n {
            return Err(Error::Precondition(format!("agent index {i} out of range")));
        }
        in_target[i] = true;
    }
    let d = space.dim();
    let bits: Vec<&BitPoint> = space
        .agents()
        .iter()
        .map(|a| a.position.as_bits().expect("hypercube"))
        .collect();
    let mut by_sig: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for j in 0..d {
        let sig = (0..n).fold(0u64, |acc, i| acc | (bits[i].get(j) as u64) << i);
        by_sig.entry(sig).or_default().push(j);
    }
    let mut types: Vec<(u64, Vec<usize>)> = by_sig.into_iter().collect();
    types.sort_by_key(|(_, dims)| dims[0]);

    let tcount = types.len();
    let rows = n + 1;
    let mut coef = vec![vec![0i64; tcount]; rows];
    for (t, (sig, _)) in types.iter().enumerate() {
        for (i, row) in coef.iter_mut().enumerate().take(n) {
            row[t] = if sig >> i & 1 == 1 { -1 } else { 1 };
        }
        coef[n][t] = 1;
    }
    let upper: Vec<bool> = (0..rows).map(|r| r < n && in_target[r]).collect();
    let rhs: Vec<i64> = (0..rows)
        .map(|r| if r == n { 1 } else if in_target[r] { -1 } else { 0 })
        .collect();
    let counts: Vec<i64> = types.iter().map(|(_, dims)| dims.len() as i64).collect();
    let mut suffix_min = vec![vec![0i64; tcount + 1]; rows];
    let mut suffix_max = vec![vec![0i64; tcount + 1]; rows];
    for r in 0..rows {
        for t in (0..tcount).rev() {
            let hi = coef[r][t] * counts[t];
            suffix_min[r][t] = suffix_min[r][t + 1] + hi.min(0);
            suffix_max[r][t] = suffix_max[r][t + 1] + hi.max(0);
        }
    }
    let mut ilp = Ilp {
        counts,
        coef,
        upper,
        rhs,
        suffix_min,
        suffix_max,
        nodes: 0,
        budget: config.ilp_node_budget,
    };
    let mut x = Vec::with_capacity(tcount);
    let mut partial = vec![0i64; rows];
    if !ilp.dfs(0, &mut x, &mut partial)? {
        return Ok(None);
    }
    let mut proposal = BitPoint::zeros(d);
    let types: Vec<DimensionType> = types
        .into_iter()
        .zip(&x)
        .map(|((sig, dims), &chosen)| {
            for &j in dims.iter().take(chosen as usize) {
                proposal.set(j, true);
            }
            DimensionType {
                signature: (0..n).map(|i| sig >> i & 1 == 1).collect(),
                count: dims.len(),
                chosen: chosen as usize,
                dimensions: dims,
            }
        })
        .collect();
    Ok(Some(IlpSolution {
        types,
        proposal: Point::Hypercube(proposal),
        nodes: ilp.nodes,
    }))
}

/// Popular proposal by searching support sets of distinct positions in order
/// of decreasing weight; the first realizable one is optimal.
pub fn solve_hyp_popular_via_ilp(
    space: &DeliberationSpace,
    config: &SolverConfig,
) -> Result<SolverReport> {
    require_hypercube(space, "ilp")?;
    if space.n() > config.ilp_max_n {
        return Err(Error::GuardExceeded {
            what: "agents for the type ILP",
            limit: config.ilp_max_n,
            actual: space.n(),
        });
    }
    let groups = position_groups(space);
    let g = groups.len();
    let mut masks: Vec<(crate::Rational, u64)> = (1u64..1 << g)
        .map(|mask| {
            let w = (0..g)
                .filter(|&i| mask >> i & 1 == 1)
                .fold(crate::Rational::default(), |acc, i| acc + &groups[i].weight);
            (w, mask)
        })
        .collect();
    masks.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut work = 0;
    for (_, mask) in masks {
        let mut target: Vec<usize> = (0..g)
            .filter(|&i| mask >> i & 1 == 1)
            .flat_map(|i| groups[i].members.iter().copied())
            .collect();
        target.sort_unstable();
        work += 1;
        if let Some(sol) = solve_hyp_type_ilp(space, &target, config)? {
            return SolverReport::new(space, sol.proposal, Method::HypTypeIlp, work);
        }
    }
    Err(Error::Precondition("no support set is realizable".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn hyp(points: &[&[u8]]) -> DeliberationSpace {
        DeliberationSpace::unit(
            SpaceKind::Hypercube,
            points[0].len(),
            points.iter().map(|p| Point::hypercube_from_bits(p)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn two_agent_slow_family_scores_one() {
        let space = hyp(&[&[0, 0, 0, 1], &[0, 0, 1, 0]]);
        let cfg = SolverConfig::default();
        let brute = solve_hyp_bruteforce(&space, &cfg).unwrap();
        assert_eq!(brute.best_score, int(1));
        assert_eq!(brute.work_counter, 15);
        // Lexicographically smallest maximizer.
        assert_eq!(brute.best_proposal, Point::hypercube_from_bits(&[0, 0, 0, 1]));
        assert_eq!(solve_hyp_popular_via_ilp(&space, &cfg).unwrap().best_score, int(1));
        let sol = solve_hyp_type_ilp(&space, &[0], &cfg).unwrap().unwrap();
        assert_eq!(space.approvers(&sol.proposal).unwrap(), vec![0]);
    }

    #[test]
    fn single_agent() {
        let space = hyp(&[&[1, 1, 0]]);
        let r = solve_hyp_bruteforce(&space, &SolverConfig::default()).unwrap();
        assert_eq!(r.best_score, int(1));
        assert_eq!(r.supporters, vec![0]);
    }

    #[test]
    fn colocated_agents_cannot_be_separated() {
        let space = hyp(&[&[1, 0, 1], &[1, 0, 1]]);
        assert_eq!(solve_hyp_type_ilp(&space, &[0], &SolverConfig::default()).unwrap(), None);
    }

    #[test]
    fn empty_target_matches_exact_support_scan() {
        let cfg = SolverConfig::default();
        // Everyone at the all-ones corner of the 2-cube: (1,0) and (0,1) are approved.
        let everyone = hyp(&[&[1, 1], &[1, 1]]);
        assert_eq!(solve_hyp_type_ilp(&everyone, &[], &cfg).unwrap(), None);
        // A lone agent at (1,0,0) does not approve (0,1,1).
        let lone = hyp(&[&[1, 0, 0]]);
        let sol = solve_hyp_type_ilp(&lone, &[], &cfg).unwrap().unwrap();
        assert!(!sol.proposal.is_origin());
        assert!(lone.approvers(&sol.proposal).unwrap().is_empty());
    }

    #[test]
    fn types_partition_dimensions() {
        let space = hyp(&[&[1, 1, 0, 0, 1], &[0, 1, 0, 1, 1]]);
        let sol = solve_hyp_type_ilp(&space, &[0, 1], &SolverConfig::default())
            .unwrap()
            .unwrap();
        let total: usize = sol.types.iter().map(|t| t.count).sum();
        assert_eq!(total, 5);
        assert!(sol.types.iter().all(|t| t.chosen <= t.count));
    }

    #[test]
    fn guards_fail_cleanly() {
        let cfg = SolverConfig {
            brute_max_d: 4,
            ilp_max_n: 1,
            ..SolverConfig::default()
        };
        let space = hyp(&[&[1, 0, 0, 0, 1], &[0, 1, 0, 0, 0]]);
        assert!(matches!(
            solve_hyp_bruteforce(&space, &cfg),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(matches!(
            solve_hyp_popular_via_ilp(&space, &cfg),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn counter_order_is_lexicographic() {
        let a = counter_to_point(4, 0b0011);
        let b = counter_to_point(4, 0b0100);
        assert!(a < b);
        assert_eq!(reversed_word(&a), 0b0011);
    }
}
