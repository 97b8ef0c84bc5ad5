//! Coalition structures, k-compromise transitions, the potential function,
//! search, schedulers, and run traces.

pub mod run;
pub mod schedulers;
pub mod search;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::space::{DeliberationSpace, Point};

pub use run::{
    run_deliberation, run_deliberation_with, step_bound, Record, Relabel, RunOptions, Termination,
    Trace, TraceStep, CSV_HEADER,
};
pub use schedulers::{
    AdversarialScheduler, FirstFoundScheduler, GreedyFastScheduler, RandomScheduler, Scheduler,
    SupportOracle,
};
pub use search::{enumerate_k_compromises, find_k_compromise, SearchBudget, SearchOutcome};

/// A set of agents together with a proposal all of them approve.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeliberativeCoalition {
    /// Agent indices, ascending.
    pub members: Vec<usize>,
    pub proposal: Point,
}

impl DeliberativeCoalition {
    pub fn new(mut members: Vec<usize>, proposal: Point) -> Self {
        members.sort_unstable();
        DeliberativeCoalition { members, proposal }
    }
}

/// A partition of the agents into deliberative coalitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoalitionStructure {
    coalitions: Vec<DeliberativeCoalition>,
}

impl CoalitionStructure {
    /// Validates the partition and every coalition's approval.
    pub fn new(space: &DeliberationSpace, coalitions: Vec<DeliberativeCoalition>) -> Result<Self> {
        let mut seen = vec![false; space.n()];
        for (ci, c) in coalitions.iter().enumerate() {
            if c.members.is_empty() {
                return Err(Error::InvalidStructure(format!("coalition {ci} is empty")));
            }
            space
                .check_proposal(&c.proposal)
                .map_err(|e| Error::InvalidStructure(format!("coalition {ci}: {e}")))?;
            let approving = space.approvers_among(&c.proposal, &c.members)?;
            if approving.len() != c.members.len() {
                return Err(Error::InvalidStructure(format!(
                    "coalition {ci} has a member who does not approve its proposal"
                )));
            }
            for &m in &c.members {
                if m >= space.n() {
                    return Err(Error::InvalidStructure(format!("agent {m} out of range")));
                }
                if seen[m] {
                    return Err(Error::InvalidStructure(format!("agent {m} appears twice")));
                }
                seen[m] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidStructure(format!("agent {missing} is in no coalition")));
        }
        Ok(CoalitionStructure { coalitions })
    }

    /// Every agent alone at its own position.
    pub fn singletons(space: &DeliberationSpace) -> Self {
        CoalitionStructure {
            coalitions: space
                .agents()
                .iter()
                .enumerate()
                .map(|(i, a)| DeliberativeCoalition::new(vec![i], a.position.clone()))
                .collect(),
        }
    }

    pub fn coalitions(&self) -> &[DeliberativeCoalition] {
        &self.coalitions
    }

    pub fn len(&self) -> usize {
        self.coalitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coalitions.is_empty()
    }

    pub fn weight(&self, space: &DeliberationSpace, index: usize) -> Rational {
        space.weight_of(&self.coalitions[index].members)
    }

    /// Replaces a coalition's proposal without changing membership. Used for
    /// relabeling steps that are not transitions.
    pub(crate) fn set_proposal(&mut self, index: usize, proposal: Point) {
        self.coalitions[index].proposal = proposal;
    }

    /// Applies a structurally checked transition in place: non-participants
    /// keep their order, then the new coalition, then leftovers in
    /// participant order.
    pub(crate) fn apply_in_place(&mut self, t: &Transition) {
        let mut is_participant = vec![false; self.coalitions.len()];
        for &p in &t.participants {
            is_participant[p] = true;
        }
        let mut old = std::mem::take(&mut self.coalitions);
        let mut leftovers = Vec::with_capacity(t.leftovers.len());
        for (idx, members) in &t.leftovers {
            let proposal = std::mem::replace(&mut old[*idx].proposal, Point::Grid(0, 0));
            leftovers.push(DeliberativeCoalition {
                members: members.clone(),
                proposal,
            });
        }
        self.coalitions = old
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !is_participant[*i])
            .map(|(_, c)| c)
            .collect();
        self.coalitions.push(DeliberativeCoalition {
            members: t.new_coalition.clone(),
            proposal: t.new_proposal.clone(),
        });
        self.coalitions.extend(leftovers);
    }
}

/// One k-compromise: the participants dissolve, the agents among them who
/// approve `new_proposal` form `new_coalition`, and the rest stay behind.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    /// Coalition indices, ascending.
    pub participants: Vec<usize>,
    pub new_proposal: Point,
    /// Agent indices, ascending.
    pub new_coalition: Vec<usize>,
    /// Nonempty remainders `C_j \ C`, in participant order.
    pub leftovers: Vec<(usize, Vec<usize>)>,
}

impl Transition {
    /// Builds the transition in which `participants` move to `proposal`,
    /// deriving the new coalition and leftovers from approval.
    pub fn derive(
        space: &DeliberationSpace,
        structure: &CoalitionStructure,
        mut participants: Vec<usize>,
        proposal: Point,
    ) -> Result<Transition> {
        participants.sort_unstable();
        let mut new_coalition = Vec::new();
        let mut leftovers = Vec::new();
        space.check_proposal(&proposal)?;
        let prepared = crate::space::PreparedProposal::new(&proposal);
        for &p in &participants {
            let c = structure.coalitions.get(p).ok_or_else(|| {
                Error::InvalidTransition(format!("coalition {p} does not exist"))
            })?;
            let (yes, no): (Vec<usize>, Vec<usize>) = c
                .members
                .iter()
                .partition(|&&i| space.agent_approves(i, &prepared));
            new_coalition.extend(yes);
            if !no.is_empty() {
                leftovers.push((p, no));
            }
        }
        new_coalition.sort_unstable();
        Ok(Transition {
            participants,
            new_proposal: proposal,
            new_coalition,
            leftovers,
        })
    }

    pub fn ell(&self) -> usize {
        self.participants.len()
    }
}

/// The first clause of the k-compromise definition a transition breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ParticipantCount { ell: usize, k: usize },
    BadParticipant(String),
    Proposal(String),
    NotAllApprovers,
    NotStrictlyLarger { participant: usize },
    Leftovers,
}

impl Violation {
    /// Short clause name for reports.
    pub fn clause(&self) -> &'static str {
        match self {
            Violation::ParticipantCount { .. } => "participant-count",
            Violation::BadParticipant(_) => "participants",
            Violation::Proposal(_) => "proposal",
            Violation::NotAllApprovers => "all-approvers",
            Violation::NotStrictlyLarger { .. } => "strictness",
            Violation::Leftovers => "leftovers",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ParticipantCount { ell, k } => {
                write!(f, "{ell} participants, need between 2 and {k}")
            }
            Violation::BadParticipant(s) => write!(f, "bad participant list: {s}"),
            Violation::Proposal(s) => write!(f, "bad proposal: {s}"),
            Violation::NotAllApprovers => {
                write!(f, "new coalition is not exactly the approving participants")
            }
            Violation::NotStrictlyLarger { participant } => write!(
                f,
                "new coalition is not strictly heavier than participant {participant}"
            ),
            Violation::Leftovers => write!(f, "leftovers do not match the dissenters"),
        }
    }
}

/// Checks every clause of the k-compromise definition exactly.
pub fn validate_transition(
    space: &DeliberationSpace,
    structure: &CoalitionStructure,
    t: &Transition,
    k: usize,
) -> std::result::Result<(), Violation> {
    let ell = t.participants.len();
    if ell < 2 || ell > k {
        return Err(Violation::ParticipantCount { ell, k });
    }
    for w in t.participants.windows(2) {
        if w[0] >= w[1] {
            return Err(Violation::BadParticipant("not strictly ascending".into()));
        }
    }
    if let Some(&p) = t.participants.iter().find(|&&p| p >= structure.len()) {
        return Err(Violation::BadParticipant(format!("coalition {p} does not exist")));
    }
    if let Err(e) = space.check_proposal(&t.new_proposal) {
        return Err(Violation::Proposal(e.to_string()));
    }
    let expected = Transition::derive(space, structure, t.participants.clone(), t.new_proposal.clone())
        .map_err(|e| Violation::Proposal(e.to_string()))?;
    if expected.new_coalition != t.new_coalition {
        return Err(Violation::NotAllApprovers);
    }
    let new_weight = space.weight_of(&t.new_coalition);
    for &p in &t.participants {
        if new_weight <= structure.weight(space, p) {
            return Err(Violation::NotStrictlyLarger { participant: p });
        }
    }
    if expected.leftovers != t.leftovers {
        return Err(Violation::Leftovers);
    }
    Ok(())
}

/// Validates, then returns the structure after the transition.
pub fn apply_transition(
    space: &DeliberationSpace,
    structure: &CoalitionStructure,
    t: &Transition,
    k: usize,
) -> Result<CoalitionStructure> {
    validate_transition(space, structure, t, k)
        .map_err(|v| Error::InvalidTransition(v.to_string()))?;
    let mut next = structure.clone();
    next.apply_in_place(t);
    Ok(next)
}

/// Integer sizes of each agent when every weight is an integer.
pub(crate) fn integer_weights(space: &DeliberationSpace) -> Option<Vec<u64>> {
    space
        .agents()
        .iter()
        .map(|a| {
            if rational::is_integer(&a.weight) {
                a.weight.numer().to_u64()
            } else {
                None
            }
        })
        .collect()
}

pub(crate) fn coalition_term(size: u64) -> BigInt {
    (BigInt::one() << size as usize) - BigInt::one()
}

/// `phi = sum over coalitions of (2^|C| - 1)`, with `|C|` the total integer
/// weight. Ranges from `n` (all singletons) to `2^n - 1` (grand coalition).
pub fn potential(space: &DeliberationSpace, structure: &CoalitionStructure) -> Result<BigInt> {
    let w = integer_weights(space).ok_or(Error::NonIntegerWeights)?;
    Ok(structure
        .coalitions
        .iter()
        .map(|c| coalition_term(c.members.iter().map(|&i| w[i]).sum()))
        .fold(BigInt::zero(), |acc, t| acc + t))
}

/// True iff some coalition sits at a proposal of score `popular_score` and
/// contains every agent approving it.
pub fn is_successful(
    space: &DeliberationSpace,
    structure: &CoalitionStructure,
    popular_score: &Rational,
) -> Result<bool> {
    for c in &structure.coalitions {
        let approvers = space.approvers(&c.proposal)?;
        if space.weight_of(&approvers) == *popular_score && approvers == c.members {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Agents of the union of the given coalitions, ascending.
pub(crate) fn union_members(structure: &CoalitionStructure, participants: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> = participants
        .iter()
        .flat_map(|&p| structure.coalitions[p].members.iter().copied())
        .collect();
    set.into_iter().collect()
}
