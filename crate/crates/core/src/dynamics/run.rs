//! Running a deliberation and recording its trace.

use std::io::{self, Write};

use num_bigint::BigInt;
use num_traits::{One, Pow};

use super::schedulers::Scheduler;
use super::search::{find_k_compromise, SearchBudget, SearchOutcome};
use super::{coalition_term, integer_weights, validate_transition, CoalitionStructure, Transition};
use crate::error::{Error, Result};
use crate::space::{DeliberationSpace, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Record {
    /// Sizes, potentials, and the full transition of every step.
    Full,
    /// Sizes and potentials only.
    Compact,
    /// Only the step count.
    CountOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub record: Record,
    /// Budget for the final terminality check.
    pub budget: SearchBudget,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            record: Record::Compact,
            budget: SearchBudget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub ell: usize,
    /// Member counts of the participants, in participant order.
    pub participant_sizes: Vec<usize>,
    pub new_size: usize,
    /// Absent when weights are not integers.
    pub phi_before: Option<BigInt>,
    pub phi_after: Option<BigInt>,
    pub transition: Option<Transition>,
}

/// A proposal swap that keeps membership and is not a transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabel {
    /// Number of transitions applied before the swap.
    pub before_step: u64,
    pub members: Vec<usize>,
    pub from: Point,
    pub to: Point,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Terminal,
    NotTerminal,
    Unknown,
}

impl Termination {
    pub fn name(&self) -> &'static str {
        match self {
            Termination::Terminal => "terminal",
            Termination::NotTerminal => "not-terminal",
            Termination::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub k: usize,
    pub scheduler: String,
    pub steps: Vec<TraceStep>,
    pub step_count: u64,
    pub relabels: Vec<Relabel>,
    pub initial_potential: Option<BigInt>,
    pub final_structure: CoalitionStructure,
    pub termination: Termination,
}

pub const CSV_HEADER: &str = "step,ell,participant_sizes,new_size,phi_before,phi_after";

impl TraceStep {
    pub fn csv_row(&self, index: u64) -> String {
        let sizes: Vec<String> = self.participant_sizes.iter().map(|s| s.to_string()).collect();
        let phi = |p: &Option<BigInt>| p.as_ref().map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{}",
            index,
            self.ell,
            sizes.join(";"),
            self.new_size,
            phi(&self.phi_before),
            phi(&self.phi_after)
        )
    }
}

impl Trace {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(w, "{}", s.csv_row(i as u64 + 1))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = Vec::new();
        self.write_csv(&mut out).expect("writing to memory");
        String::from_utf8(out).expect("ascii")
    }
}

/// Largest number of steps any run may take: `2^n` for `k = 2` (and `k^n`
/// in general), with `n` the total integer weight when weights are integers
/// and the agent count otherwise.
pub fn step_bound(space: &DeliberationSpace, k: usize) -> BigInt {
    let n: u64 = match integer_weights(space) {
        Some(w) => w.iter().sum(),
        None => space.n() as u64,
    };
    BigInt::from(k.max(2)).pow(n as u32)
}

/// Runs `scheduler` from `initial` until it has no move, validating every
/// transition. For `k = 2` with integer weights each step must raise the
/// potential by at least one.
pub fn run_deliberation(
    space: &DeliberationSpace,
    initial: &CoalitionStructure,
    scheduler: &mut dyn Scheduler,
    k: usize,
    options: &RunOptions,
) -> Result<Trace> {
    run_deliberation_with(space, initial, scheduler, k, options, &mut |_, _| Ok(()))
}

/// As [`run_deliberation`], calling `observe(index, step)` after each step.
pub fn run_deliberation_with(
    space: &DeliberationSpace,
    initial: &CoalitionStructure,
    scheduler: &mut dyn Scheduler,
    k: usize,
    options: &RunOptions,
    observe: &mut dyn FnMut(u64, &TraceStep) -> Result<()>,
) -> Result<Trace> {
    let weights = integer_weights(space);
    let size_of = |members: &[usize]| -> u64 {
        weights
            .as_ref()
            .map(|w| members.iter().map(|&i| w[i]).sum())
            .unwrap_or(0)
    };
    let mut structure = initial.clone();
    let mut phi: Option<BigInt> = weights.as_ref().map(|_| {
        structure
            .coalitions()
            .iter()
            .map(|c| coalition_term(size_of(&c.members)))
            .sum()
    });
    let initial_potential = phi.clone();
    let bound = step_bound(space, k);
    let mut steps = Vec::new();
    let mut count: u64 = 0;

    while let Some(t) = scheduler.next(space, &structure, k)? {
        validate_transition(space, &structure, &t, k)
            .map_err(|v| Error::InvalidTransition(format!("{} ({})", v, v.clause())))?;
        count += 1;
        if BigInt::from(count) > bound {
            return Err(Error::StepBoundExceeded(bound.to_string()));
        }
        let cs = structure.coalitions();
        let phi_after = phi.as_ref().map(|before| {
            let mut after = before.clone() + coalition_term(size_of(&t.new_coalition));
            for &p in &t.participants {
                after -= coalition_term(size_of(&cs[p].members));
            }
            for (_, rest) in &t.leftovers {
                after += coalition_term(size_of(rest));
            }
            after
        });
        if k == 2 {
            if let (Some(b), Some(a)) = (&phi, &phi_after) {
                if *a < b + BigInt::one() {
                    return Err(Error::PotentialNotIncreasing {
                        before: b.to_string(),
                        after: a.to_string(),
                    });
                }
            }
        }
        let step = TraceStep {
            ell: t.ell(),
            participant_sizes: t.participants.iter().map(|&p| cs[p].members.len()).collect(),
            new_size: t.new_coalition.len(),
            phi_before: phi.clone(),
            phi_after: phi_after.clone(),
            transition: None,
        };
        structure.apply_in_place(&t);
        phi = phi_after;
        observe(count, &step)?;
        match options.record {
            Record::Full => steps.push(TraceStep {
                transition: Some(t),
                ..step
            }),
            Record::Compact => steps.push(step),
            Record::CountOnly => {}
        }
    }

    let termination = match find_k_compromise(space, &structure, k, &options.budget)? {
        SearchOutcome::Terminal => Termination::Terminal,
        SearchOutcome::Found(_) => Termination::NotTerminal,
        SearchOutcome::Unknown(_) => Termination::Unknown,
    };
    Ok(Trace {
        k,
        scheduler: scheduler.name().to_string(),
        steps,
        step_count: count,
        relabels: Vec::new(),
        initial_potential,
        final_structure: structure,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{DeliberativeCoalition, FirstFoundScheduler, RandomScheduler};
    use crate::space::{GridVariant, SpaceKind};

    fn five_player() -> (DeliberationSpace, CoalitionStructure) {
        let pts = [(0, 1), (0, 1), (1, 1), (1, 1), (1, 0)];
        let space = DeliberationSpace::unit(
            SpaceKind::Grid(GridVariant::Full),
            2,
            pts.iter().map(|&(x, y)| Point::Grid(x, y)).collect(),
        )
        .unwrap();
        let s = CoalitionStructure::new(
            &space,
            vec![
                DeliberativeCoalition::new(vec![0, 1], Point::Grid(0, 1)),
                DeliberativeCoalition::new(vec![2, 3, 4], Point::Grid(1, 0)),
            ],
        )
        .unwrap();
        (space, s)
    }

    #[test]
    fn grand_coalition_start_is_empty_trace() {
        let (space, _) = five_player();
        let grand = CoalitionStructure::new(
            &space,
            vec![DeliberativeCoalition::new((0..5).collect(), Point::Grid(1, 1))],
        );
        assert!(grand.is_err());
        let s = CoalitionStructure::new(
            &space,
            vec![
                DeliberativeCoalition::new(vec![0, 1, 2, 3], Point::Grid(0, 1)),
                DeliberativeCoalition::new(vec![4], Point::Grid(1, 0)),
            ],
        )
        .unwrap();
        let trace = run_deliberation(&space, &s, &mut FirstFoundScheduler::default(), 2, &RunOptions::default())
            .unwrap();
        assert_eq!(trace.step_count, 0);
        assert_eq!(trace.termination, Termination::Terminal);
    }

    #[test]
    fn csv_schema() {
        let (space, s) = five_player();
        let trace = run_deliberation(&space, &s, &mut FirstFoundScheduler::default(), 2, &RunOptions::default())
            .unwrap();
        assert_eq!(trace.step_count, 1);
        let csv = trace.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        // phi: 3 + 7 = 10 -> 15 + 1 = 16
        assert_eq!(lines[1], "1,2,2;3,4,10,16");
    }

    #[test]
    fn seeded_runs_repeat() {
        let (space, _) = five_player();
        let s = CoalitionStructure::singletons(&space);
        let run = |seed| {
            run_deliberation(&space, &s, &mut RandomScheduler::new(seed), 2, &RunOptions::default())
                .unwrap()
                .to_csv()
        };
        assert_eq!(run(3), run(3));
    }

    #[test]
    fn bound_is_two_to_the_n() {
        let (space, _) = five_player();
        assert_eq!(step_bound(&space, 2), BigInt::from(32));
        assert_eq!(step_bound(&space, 3), BigInt::from(243));
    }
}
