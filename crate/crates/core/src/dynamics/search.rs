//! Exhaustive k-compromise search.
//!
//! For each set of 2..=k participating coalitions (by size, then
//! lexicographically), the heaviest proposal among the union's agents is the
//! only candidate that matters: if it does not beat the heaviest participant,
//! nothing does.

use super::{union_members, CoalitionStructure, Transition};
use crate::error::{Error, Result};
use crate::grid::canonical_support_targets;
use crate::rational::Rational;
use crate::solvers::{solve_popular, MethodChoice, SolverConfig};
use crate::space::{DeliberationSpace, Point, SpaceKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest number of participant sets examined.
    pub max_subsets: usize,
    pub solver: SolverConfig,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_subsets: 1_000_000,
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Transition),
    /// No k-compromise exists.
    Terminal,
    /// A guard stopped the search before it could decide.
    Unknown(String),
}

enum Candidate {
    Valid(Transition),
    None,
    Unknown(String),
}

fn is_guard(e: &Error) -> bool {
    matches!(e, Error::GuardExceeded { .. } | Error::WeightOverflow)
}

/// Heaviest proposal for the agents in `pool`, ties to the smallest proposal
/// on the grid.
fn heaviest_proposal(
    space: &DeliberationSpace,
    structure: &CoalitionStructure,
    participants: &[usize],
    pool: &[usize],
    solver: &SolverConfig,
) -> Result<Option<Point>> {
    match space.kind() {
        SpaceKind::Grid(variant) => {
            let mut candidates = canonical_support_targets(variant);
            candidates.extend(
                participants
                    .iter()
                    .map(|&p| structure.coalitions()[p].proposal.clone()),
            );
            candidates.sort();
            candidates.dedup();
            let mut best: Option<(Rational, Point)> = None;
            for p in candidates {
                let w = space.weight_of(&space.approvers_among(&p, pool)?);
                if best.as_ref().is_none_or(|(bw, _)| w > *bw) {
                    best = Some((w, p));
                }
            }
            Ok(best.map(|(_, p)| p))
        }
        _ => {
            let sub = space.restrict(pool)?;
            Ok(Some(solve_popular(&sub, MethodChoice::Auto, solver)?.best_proposal))
        }
    }
}

/// The heaviest transition for one participant set, if it is valid and every
/// participant contributes to it.
fn candidate(
    space: &DeliberationSpace,
    structure: &CoalitionStructure,
    participants: &[usize],
    budget: &SearchBudget,
) -> Result<Candidate> {
    let pool = union_members(structure, participants);
    let proposal = match heaviest_proposal(space, structure, participants, &pool, &budget.solver) {
        Ok(Some(p)) => p,
        Ok(None) => return Ok(Candidate::None),
        Err(e) if is_guard(&e) => return Ok(Candidate::Unknown(e.to_string())),
        Err(e) => return Err(e),
    };
    let t = Transition::derive(space, structure, participants.to_vec(), proposal)?;
    let contributes = participants.iter().all(|p| {
        structure.coalitions()[*p]
            .members
            .iter()
            .any(|m| t.new_coalition.binary_search(m).is_ok())
    });
    if !contributes {
        return Ok(Candidate::None);
    }
    let new_weight = space.weight_of(&t.new_coalition);
    let heaviest = participants
        .iter()
        .map(|&p| structure.weight(space, p))
        .max()
        .expect("at least two participants");
    if new_weight > heaviest {
        Ok(Candidate::Valid(t))
    } else {
        Ok(Candidate::None)
    }
}

/// Participant sets of sizes `2..=k` in size-then-lexicographic order.
pub(crate) fn participant_sets(count: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (2..=k.min(count)).flat_map(move |size| Combinations::new(count, size))
}

struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: if k <= n { Some((0..k).collect()) } else { None },
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// The first k-compromise in search order, or a verdict that none exists.
pub fn find_k_compromise(
    space: &DeliberationSpace,
    structure: &CoalitionStructure,
    k: usize,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    let mut unknown: Option<String> = None;
    for (examined, set) in participant_sets(structure.len(), k).enumerate() {
        if examined >= budget.max_subsets {
            return Ok(SearchOutcome::Unknown(format!(
                "participant-set budget of {} exhausted",
                budget.max_subsets
            )));
        }
        match candidate(space, structure, &set, budget)? {
            Candidate::Valid(t) => return Ok(SearchOutcome::Found(t)),
            Candidate::None => {}
            Candidate::Unknown(reason) => {
                unknown.get_or_insert(reason);
            }
        }
    }
    Ok(match unknown {
        Some(reason) => SearchOutcome::Unknown(reason),
        None => SearchOutcome::Terminal,
    })
}

/// All candidate transitions, one per participant set; `complete` is false
/// when a guard or the budget cut the enumeration short.
pub fn enumerate_k_compromises(
    space: &DeliberationSpace,
    structure: &CoalitionStructure,
    k: usize,
    budget: &SearchBudget,
) -> Result<(Vec<Transition>, bool)> {
    let mut found = Vec::new();
    let mut complete = true;
    for (examined, set) in participant_sets(structure.len(), k).enumerate() {
        if examined >= budget.max_subsets {
            complete = false;
            break;
        }
        match candidate(space, structure, &set, budget)? {
            Candidate::Valid(t) => found.push(t),
            Candidate::None => {}
            Candidate::Unknown(_) => complete = false,
        }
    }
    Ok((found, complete))
}

/// Best transition for one fixed participant set, if valid.
pub(crate) fn best_for_participants(
    space: &DeliberationSpace,
    structure: &CoalitionStructure,
    participants: &[usize],
    budget: &SearchBudget,
) -> Result<Option<Transition>> {
    match candidate(space, structure, participants, budget)? {
        Candidate::Valid(t) => Ok(Some(t)),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{validate_transition, DeliberativeCoalition};
    use crate::space::GridVariant;

    fn grid(points: &[(i64, i64)]) -> DeliberationSpace {
        DeliberationSpace::unit(
            SpaceKind::Grid(GridVariant::Full),
            2,
            points.iter().map(|&(x, y)| Point::Grid(x, y)).collect(),
        )
        .unwrap()
    }

    fn coalition(members: &[usize], at: (i64, i64)) -> DeliberativeCoalition {
        DeliberativeCoalition::new(members.to_vec(), Point::Grid(at.0, at.1))
    }

    #[test]
    fn combinations_in_order() {
        let sets: Vec<Vec<usize>> = participant_sets(4, 3).collect();
        assert_eq!(sets.len(), 6 + 4);
        assert_eq!(sets[0], vec![0, 1]);
        assert_eq!(sets[5], vec![2, 3]);
        assert_eq!(sets[6], vec![0, 1, 2]);
        assert_eq!(participant_sets(1, 3).count(), 0);
    }

    #[test]
    fn five_player_compromise() {
        let space = grid(&[(0, 1), (0, 1), (1, 1), (1, 1), (1, 0)]);
        let s = CoalitionStructure::new(
            &space,
            vec![coalition(&[0, 1], (0, 1)), coalition(&[2, 3, 4], (1, 0))],
        )
        .unwrap();
        match find_k_compromise(&space, &s, 2, &SearchBudget::default()).unwrap() {
            SearchOutcome::Found(t) => {
                assert_eq!(t.new_proposal, Point::Grid(0, 1));
                assert_eq!(t.new_coalition, vec![0, 1, 2, 3]);
                assert_eq!(validate_transition(&space, &s, &t, 2), Ok(()));
            }
            other => panic!("expected a transition, got {other:?}"),
        }
    }

    #[test]
    fn nine_player_needs_three() {
        let space = grid(&[
            (0, 1),
            (-1, 0),
            (-1, 0),
            (-1, 1),
            (-1, 1),
            (1, 1),
            (1, 1),
            (1, 0),
            (1, 0),
        ]);
        let s = CoalitionStructure::new(
            &space,
            vec![
                coalition(&[1, 2, 3, 4], (-1, 0)),
                coalition(&[5, 6, 7, 8], (1, 0)),
                coalition(&[0], (0, 1)),
            ],
        )
        .unwrap();
        let budget = SearchBudget::default();
        assert_eq!(find_k_compromise(&space, &s, 2, &budget).unwrap(), SearchOutcome::Terminal);
        match find_k_compromise(&space, &s, 3, &budget).unwrap() {
            SearchOutcome::Found(t) => {
                assert_eq!(t.new_proposal, Point::Grid(0, 1));
                assert_eq!(t.new_coalition.len(), 5);
            }
            other => panic!("expected a transition, got {other:?}"),
        }
    }

    #[test]
    fn successful_structure_is_terminal() {
        let space = grid(&[(0, 1), (1, 1), (2, 5)]);
        let s = CoalitionStructure::new(&space, vec![coalition(&[0, 1, 2], (0, 1))]).unwrap();
        for k in 2..5 {
            assert_eq!(find_k_compromise(&space, &s, k, &SearchBudget::default()).unwrap(), SearchOutcome::Terminal);
        }
    }

    #[test]
    fn guard_yields_unknown() {
        let bits = |b: &[u8]| Point::hypercube_from_bits(b);
        let space = DeliberationSpace::unit(
            SpaceKind::Hypercube,
            3,
            vec![bits(&[1, 0, 0]), bits(&[0, 1, 0])],
        )
        .unwrap();
        let s = CoalitionStructure::singletons(&space);
        let budget = SearchBudget {
            max_subsets: 10,
            solver: SolverConfig {
                brute_max_d: 2,
                ilp_max_n: 0,
                ..SolverConfig::default()
            },
        };
        assert!(matches!(
            find_k_compromise(&space, &s, 2, &budget).unwrap(),
            SearchOutcome::Unknown(_)
        ));
    }
}
