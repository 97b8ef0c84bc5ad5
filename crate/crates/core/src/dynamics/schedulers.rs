//! Schedulers choose the next transition of a run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::search::{best_for_participants, enumerate_k_compromises, find_k_compromise};
use super::{CoalitionStructure, SearchBudget, SearchOutcome, Transition};
use crate::error::{Error, Result};
use crate::solvers::solve_euc_perfect;
use crate::space::{DeliberationSpace, Point, SpaceKind};

pub trait Scheduler {
    fn name(&self) -> &'static str;

    /// The next transition, or `None` when the scheduler has no move.
    fn next(
        &mut self,
        space: &DeliberationSpace,
        structure: &CoalitionStructure,
        k: usize,
    ) -> Result<Option<Transition>>;
}

/// A closed-form map from agent sets to a proposal approved by exactly that
/// set, when one is known.
pub trait SupportOracle: Sync {
    /// `members` is ascending.
    fn support(&self, members: &[usize]) -> Option<Point>;
}

/// Always takes the first transition in search order.
#[derive(Clone, Debug, Default)]
pub struct FirstFoundScheduler {
    pub budget: SearchBudget,
}

impl Scheduler for FirstFoundScheduler {
    fn name(&self) -> &'static str {
        "first"
    }

    fn next(
        &mut self,
        space: &DeliberationSpace,
        structure: &CoalitionStructure,
        k: usize,
    ) -> Result<Option<Transition>> {
        match find_k_compromise(space, structure, k, &self.budget)? {
            SearchOutcome::Found(t) => Ok(Some(t)),
            _ => Ok(None),
        }
    }
}

/// Uniform choice among the per-participant-set candidates, seeded.
#[derive(Clone, Debug)]
pub struct RandomScheduler {
    rng: ChaCha8Rng,
    pub budget: SearchBudget,
}

impl RandomScheduler {
    pub fn new(seed: u64) -> Self {
        RandomScheduler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            budget: SearchBudget::default(),
        }
    }
}

impl Scheduler for RandomScheduler {
    fn name(&self) -> &'static str {
        "random"
    }

    fn next(
        &mut self,
        space: &DeliberationSpace,
        structure: &CoalitionStructure,
        k: usize,
    ) -> Result<Option<Transition>> {
        let (mut candidates, _) = enumerate_k_compromises(space, structure, k, &self.budget)?;
        if candidates.is_empty() {
            return Ok(None);
        }
        let pick = self.rng.gen_range(0..candidates.len());
        Ok(Some(candidates.swap_remove(pick)))
    }
}

/// The slow schedule: merge the lowest-indexed pair of equal-sized
/// coalitions as `(a)+(a) -> (a+1) + floor((a-1)/2) + ceil((a-1)/2)`, and
/// otherwise combine the two smallest coalitions `(a)+(b) -> (b+1) + ...`,
/// leaving `floor((a-1)/2)` behind in the smaller one and `ceil((a-1)/2)` in
/// the larger. Members leave from the highest agent index down. Proposals come
/// from the support oracle.
pub struct AdversarialScheduler<'a> {
    oracle: &'a dyn SupportOracle,
    pub budget: SearchBudget,
}

impl<'a> AdversarialScheduler<'a> {
    pub fn new(oracle: &'a dyn SupportOracle) -> Self {
        AdversarialScheduler {
            oracle,
            budget: SearchBudget::default(),
        }
    }

    /// `(first, second, kept_by_first, kept_by_second)` for the next move.
    fn plan(structure: &CoalitionStructure) -> Option<(usize, usize, usize, usize)> {
        let sizes: Vec<usize> = structure.coalitions().iter().map(|c| c.members.len()).collect();
        if sizes.len() < 2 {
            return None;
        }
        let max = *sizes.iter().max().expect("nonempty");
        let mut count = vec![0usize; max + 1];
        for &s in &sizes {
            count[s] += 1;
        }
        if let Some(i) = (0..sizes.len()).find(|&i| count[sizes[i]] >= 2) {
            let j = (i + 1..sizes.len())
                .find(|&j| sizes[j] == sizes[i])
                .expect("a partner exists");
            let a = sizes[i];
            return Some((i, j, (a - 1) / 2, a / 2));
        }
        let mut order: Vec<usize> = (0..sizes.len()).collect();
        order.sort_by_key(|&i| (sizes[i], i));
        let (s, t) = (order[0], order[1]);
        let a = sizes[s];
        Some((s, t, (a - 1) / 2, a / 2))
    }
}

impl Scheduler for AdversarialScheduler<'_> {
    fn name(&self) -> &'static str {
        "adversarial"
    }

    fn next(
        &mut self,
        space: &DeliberationSpace,
        structure: &CoalitionStructure,
        _k: usize,
    ) -> Result<Option<Transition>> {
        let Some((first, second, keep_first, keep_second)) = Self::plan(structure) else {
            return Ok(None);
        };
        let cs = structure.coalitions();
        let split = |idx: usize, keep: usize| -> (Vec<usize>, Vec<usize>) {
            let m = &cs[idx].members;
            let cut = m.len() - keep;
            (m[..cut].to_vec(), m[cut..].to_vec())
        };
        let (join_a, stay_a) = split(first, keep_first);
        let (join_b, stay_b) = split(second, keep_second);
        let mut members: Vec<usize> = join_a.into_iter().chain(join_b).collect();
        members.sort_unstable();
        let mut participants = vec![(first, stay_a), (second, stay_b)];
        participants.sort_by_key(|(i, _)| *i);
        match self.oracle.support(&members) {
            Some(proposal) => Ok(Some(Transition {
                participants: participants.iter().map(|(i, _)| *i).collect(),
                new_proposal: proposal,
                new_coalition: members,
                leftovers: participants
                    .into_iter()
                    .filter(|(_, stay)| !stay.is_empty())
                    .collect(),
            })),
            None => {
                let pair = [first.min(second), first.max(second)];
                best_for_participants(space, structure, &pair, &self.budget)
            }
        }
    }
}

/// Merge if two coalitions share an approvable proposal; else let an agent
/// join a heaviest coalition; else, with exactly two coalitions, take their
/// best 2-compromise. Euclidean spaces only.
#[derive(Clone, Debug, Default)]
pub struct GreedyFastScheduler {
    pub budget: SearchBudget,
}

impl GreedyFastScheduler {
    fn perfect_for(space: &DeliberationSpace, agents: &[usize]) -> Result<Option<Point>> {
        solve_euc_perfect(&space.restrict(agents)?)
    }
}

impl Scheduler for GreedyFastScheduler {
    fn name(&self) -> &'static str {
        "greedy-fast"
    }

    fn next(
        &mut self,
        space: &DeliberationSpace,
        structure: &CoalitionStructure,
        _k: usize,
    ) -> Result<Option<Transition>> {
        if space.kind() != SpaceKind::Euclidean {
            return Err(Error::IncompatibleScheduler {
                scheduler: "greedy-fast",
                kind: space.kind().name(),
            });
        }
        let cs = structure.coalitions();
        let c = cs.len();
        for i in 0..c {
            for j in i + 1..c {
                let pool: Vec<usize> = cs[i].members.iter().chain(&cs[j].members).copied().collect();
                if let Some(p) = Self::perfect_for(space, &pool)? {
                    return Ok(Some(Transition::derive(space, structure, vec![i, j], p)?));
                }
            }
        }
        let weights: Vec<_> = (0..c).map(|i| structure.weight(space, i)).collect();
        if let Some(max) = (0..c).max_by(|&a, &b| weights[a].cmp(&weights[b]).then(b.cmp(&a))) {
            for (d, coalition) in cs.iter().enumerate() {
                if d == max {
                    continue;
                }
                for &agent in &coalition.members {
                    let mut pool = cs[max].members.clone();
                    pool.push(agent);
                    if let Some(p) = Self::perfect_for(space, &pool)? {
                        return Ok(Some(Transition::derive(space, structure, vec![max, d], p)?));
                    }
                }
            }
        }
        if c == 2 {
            return best_for_participants(space, structure, &[0, 1], &self.budget);
        }
        Ok(None)
    }
}
