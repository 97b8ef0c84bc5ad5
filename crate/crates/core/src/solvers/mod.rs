//! Popular-proposal and perfect-score solvers.
//!
//! Every method is exact and acts as an independent oracle for the others.

pub mod euclidean;
pub mod hypercube;
pub mod lp;

use std::fmt;

use crate::error::{Error, Result};
use crate::grid;
use crate::rational::Rational;
use crate::space::{DeliberationSpace, Point, SpaceKind};

pub use euclidean::{solve_euc_cells, solve_euc_perfect, solve_euc_subsets};
pub use hypercube::{
    solve_hyp_bruteforce, solve_hyp_popular_via_ilp, solve_hyp_type_ilp, DimensionType,
    IlpSolution,
};
pub use lp::{solve_lp_feasible_strict, LinearSystem, Relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    HypBrute,
    HypTypeIlp,
    EucPerfectLp,
    EucSubsetLp,
    EucCells,
    GridFour,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::HypBrute => "brute",
            Method::HypTypeIlp => "ilp",
            Method::EucPerfectLp => "perfect-lp",
            Method::EucSubsetLp => "subset-lp",
            Method::EucCells => "cells",
            Method::GridFour => "grid",
        }
    }

    pub fn from_name(name: &str) -> Option<Method> {
        [
            Method::HypBrute,
            Method::HypTypeIlp,
            Method::EucPerfectLp,
            Method::EucSubsetLp,
            Method::EucCells,
            Method::GridFour,
        ]
        .into_iter()
        .find(|m| m.name() == name)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Size limits past which a solver refuses to run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Largest hypercube dimension for brute force.
    pub brute_max_d: usize,
    /// Largest agent count for the type ILP.
    pub ilp_max_n: usize,
    /// Search-node budget for a single type ILP.
    pub ilp_node_budget: u64,
    /// Largest number of distinct positions for the subset LP.
    pub subset_max_positions: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            brute_max_d: 26,
            ilp_max_n: 10,
            ilp_node_budget: 20_000_000,
            subset_max_positions: 22,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverReport {
    pub best_proposal: Point,
    pub best_score: Rational,
    pub supporters: Vec<usize>,
    pub method: Method,
    /// Candidates, ILPs, or LPs examined.
    pub work_counter: u64,
}

impl SolverReport {
    pub(crate) fn new(
        space: &DeliberationSpace,
        proposal: Point,
        method: Method,
        work_counter: u64,
    ) -> Result<Self> {
        let supporters = space.approvers(&proposal)?;
        let best_score = space.weight_of(&supporters);
        Ok(SolverReport {
            best_proposal: proposal,
            best_score,
            supporters,
            method,
            work_counter,
        })
    }
}

/// Method selection; `Auto` picks by space kind and size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodChoice {
    Auto,
    Fixed(Method),
}

/// Method `Auto` resolves to for `space`.
pub fn auto_method(space: &DeliberationSpace) -> Method {
    match space.kind() {
        SpaceKind::Hypercube if space.dim() <= 20 => Method::HypBrute,
        SpaceKind::Hypercube => Method::HypTypeIlp,
        SpaceKind::Euclidean if space.dim() <= 3 => Method::EucCells,
        SpaceKind::Euclidean => Method::EucSubsetLp,
        SpaceKind::Grid(_) => Method::GridFour,
    }
}

/// Computes a popular proposal with the chosen method.
pub fn solve_popular(
    space: &DeliberationSpace,
    choice: MethodChoice,
    config: &SolverConfig,
) -> Result<SolverReport> {
    let method = match choice {
        MethodChoice::Auto => auto_method(space),
        MethodChoice::Fixed(m) => m,
    };
    let unsupported = || Error::UnsupportedMethod {
        method: method.name(),
        kind: space.kind().name(),
    };
    match (method, space.kind()) {
        (Method::HypBrute, SpaceKind::Hypercube) => solve_hyp_bruteforce(space, config),
        (Method::HypTypeIlp, SpaceKind::Hypercube) => solve_hyp_popular_via_ilp(space, config),
        (Method::EucSubsetLp, SpaceKind::Euclidean) => solve_euc_subsets(space, config),
        (Method::EucCells, SpaceKind::Euclidean) => solve_euc_cells(space),
        (Method::GridFour, SpaceKind::Grid(_)) => grid::solve_grid_four(space),
        _ => Err(unsupported()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::space::{Agent, GridVariant};

    #[test]
    fn grid_five_player_example() {
        let pts = [(0, 1), (0, 1), (1, 1), (1, 1), (1, 0)];
        let space = DeliberationSpace::unit(
            SpaceKind::Grid(GridVariant::Full),
            2,
            pts.iter().map(|&(x, y)| Point::Grid(x, y)).collect(),
        )
        .unwrap();
        let r = solve_popular(&space, MethodChoice::Auto, &SolverConfig::default()).unwrap();
        assert_eq!(r.best_score, int(4));
        assert_eq!(r.best_proposal, Point::Grid(0, 1));
        assert_eq!(r.method, Method::GridFour);
    }

    #[test]
    fn euclidean_single_agent_scores_its_weight() {
        let space = DeliberationSpace::new(
            SpaceKind::Euclidean,
            2,
            vec![Agent::new(Point::euclidean_from_ints(&[2, -1]), int(5))],
        )
        .unwrap();
        let r = solve_popular(&space, MethodChoice::Auto, &SolverConfig::default()).unwrap();
        assert_eq!(r.best_score, int(5));
    }

    #[test]
    fn method_kind_mismatch_is_an_error() {
        let space =
            DeliberationSpace::unit(SpaceKind::Euclidean, 1, vec![Point::euclidean_from_ints(&[1])])
                .unwrap();
        assert!(matches!(
            solve_popular(&space, MethodChoice::Fixed(Method::HypBrute), &SolverConfig::default()),
            Err(Error::UnsupportedMethod { .. })
        ));
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::HypBrute, Method::EucCells, Method::GridFour] {
            assert_eq!(Method::from_name(m.name()), Some(m));
        }
    }
}
