//! Deliberation on the integer grid with `l1` distance.
//!
//! Any coalition supporting `(x, y)` outside the 3x3 core also supports the
//! point one step closer to the origin, and no agent approves two distinct
//! diagonal neighbours of the origin. Together these collapse every
//! supportable proposal onto the unit proposals, which is what the solver
//! and the constructive convergence procedure below rely on.

use crate::dynamics::{
    apply_transition, find_k_compromise, is_successful, potential, CoalitionStructure, Relabel,
    SearchBudget, SearchOutcome, Termination, Trace, TraceStep, Transition,
};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::solvers::{Method, SolverReport};
use crate::space::{DeliberationSpace, Point, SpaceKind};

pub use crate::space::GridVariant;

/// `(x - sign x, y - sign y)`; needs `|x| > 1` or `|y| > 1`.
pub fn pull_toward_origin(p: (i64, i64)) -> Result<(i64, i64)> {
    let (x, y) = p;
    if x.abs() <= 1 && y.abs() <= 1 {
        return Err(Error::Precondition(format!(
            "({x},{y}) already lies in the core around the origin"
        )));
    }
    Ok((x - x.signum(), y - y.signum()))
}

/// Unit proposals every supportable proposal collapses onto, in
/// lexicographic order.
pub fn canonical_support_targets(variant: GridVariant) -> Vec<Point> {
    match variant {
        GridVariant::NonNegative => vec![Point::Grid(0, 1), Point::Grid(1, 0)],
        GridVariant::Full => vec![
            Point::Grid(-1, 0),
            Point::Grid(0, -1),
            Point::Grid(0, 1),
            Point::Grid(1, 0),
        ],
    }
}

fn variant_of(space: &DeliberationSpace, method: &'static str) -> Result<GridVariant> {
    match space.kind() {
        SpaceKind::Grid(v) => Ok(v),
        other => Err(Error::UnsupportedMethod {
            method,
            kind: other.name(),
        }),
    }
}

/// Popular proposal among the canonical targets; ties to the smallest.
pub fn solve_grid_four(space: &DeliberationSpace) -> Result<SolverReport> {
    let variant = variant_of(space, "grid")?;
    let targets = canonical_support_targets(variant);
    let work = targets.len() as u64;
    let mut best: Option<(Rational, Point)> = None;
    for p in targets {
        let s = crate::space::score(space, &p)?;
        if best.as_ref().is_none_or(|(b, _)| s > *b) {
            best = Some((s, p));
        }
    }
    let (_, p) = best.expect("at least two targets");
    SolverReport::new(space, p, Method::GridFour, work)
}

/// Brute-force popular score over every proposal within one step of the
/// agents' bounding window.
pub fn grid_window_popular(space: &DeliberationSpace) -> Result<(Rational, Point)> {
    let variant = variant_of(space, "grid-window")?;
    let r = space
        .agents()
        .iter()
        .map(|a| match a.position {
            Point::Grid(x, y) => x.abs().max(y.abs()),
            _ => 0,
        })
        .max()
        .unwrap_or(0)
        + 1;
    let lo = match variant {
        GridVariant::NonNegative => 0,
        GridVariant::Full => -r,
    };
    let mut best: Option<(Rational, Point)> = None;
    for x in lo..=r {
        for y in lo..=r {
            if x == 0 && y == 0 {
                continue;
            }
            let p = Point::Grid(x, y);
            let s = crate::space::score(space, &p)?;
            if best.as_ref().is_none_or(|(b, _)| s > *b) {
                best = Some((s, p));
            }
        }
    }
    Ok(best.expect("window has proposals"))
}

/// Drives `initial` to a successful structure: relabel each coalition to a
/// unit target all members approve, merge coalitions sharing a target, then
/// one final compromise at a popular target. Uses 2-compromises on the
/// quadrant and up to 3-compromises on the full lattice. Relabels are
/// recorded separately and are not transitions.
pub fn grid_converge(space: &DeliberationSpace, initial: &CoalitionStructure) -> Result<Trace> {
    let variant = variant_of(space, "grid-converge")?;
    let k = match variant {
        GridVariant::NonNegative => 2,
        GridVariant::Full => 3,
    };
    let targets = canonical_support_targets(variant);
    let popular = solve_grid_four(space)?.best_score;
    let mut structure = initial.clone();
    let mut relabels = Vec::new();
    let mut steps = Vec::new();
    let initial_potential = potential(space, &structure).ok();

    for i in 0..structure.len() {
        let c = &structure.coalitions()[i];
        if targets.contains(&c.proposal) {
            continue;
        }
        let to = targets
            .iter()
            .find(|t| {
                space
                    .approvers_among(t, &c.members)
                    .map(|a| a.len() == c.members.len())
                    .unwrap_or(false)
            })
            .cloned()
            .ok_or_else(|| Error::Precondition("coalition supports no unit target".into()))?;
        relabels.push(Relabel {
            before_step: 0,
            members: c.members.clone(),
            from: c.proposal.clone(),
            to: to.clone(),
        });
        structure.set_proposal(i, to);
    }

    let limit = initial.len() + 1;
    while !is_successful(space, &structure, &popular)? {
        if steps.len() > limit {
            return Err(Error::Precondition("grid convergence did not settle".into()));
        }
        let cs = structure.coalitions();
        let mut merge = None;
        'outer: for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                if cs[i].proposal == cs[j].proposal {
                    merge = Some((vec![i, j], cs[i].proposal.clone()));
                    break 'outer;
                }
            }
        }
        let (participants, proposal) = match merge {
            Some(m) => m,
            None => {
                let mut target = None;
                for t in &targets {
                    if crate::space::score(space, t)? == popular {
                        target = Some(t.clone());
                        break;
                    }
                }
                let target = target.expect("a unit target is popular");
                let approvers = space.approvers(&target)?;
                let participants: Vec<usize> = (0..cs.len())
                    .filter(|&i| cs[i].members.iter().any(|m| approvers.binary_search(m).is_ok()))
                    .collect();
                (participants, target)
            }
        };
        let t = Transition::derive(space, &structure, participants, proposal)?;
        let phi_before = potential(space, &structure).ok();
        let sizes = t
            .participants
            .iter()
            .map(|&p| structure.coalitions()[p].members.len())
            .collect();
        let next = apply_transition(space, &structure, &t, k)?;
        let phi_after = potential(space, &next).ok();
        steps.push(TraceStep {
            ell: t.ell(),
            participant_sizes: sizes,
            new_size: t.new_coalition.len(),
            phi_before,
            phi_after,
            transition: Some(t),
        });
        structure = next;
    }

    let termination = match find_k_compromise(space, &structure, k, &SearchBudget::default())? {
        SearchOutcome::Terminal => Termination::Terminal,
        SearchOutcome::Found(_) => Termination::NotTerminal,
        SearchOutcome::Unknown(_) => Termination::Unknown,
    };
    Ok(Trace {
        k,
        scheduler: "grid-converge".into(),
        step_count: steps.len() as u64,
        steps,
        relabels,
        initial_potential,
        final_structure: structure,
        termination,
    })
}
