//! Deliberative coalition formation in metric spaces.
//!
//! Agents live in a hypercube, in Euclidean space, or on the integer grid and
//! approve proposals strictly closer to them than the status quo at the
//! origin. The crate computes popular proposals exactly, simulates
//! k-compromise dynamics, and builds the hard instance families and
//! reductions used to exercise both.

pub mod dynamics;
pub mod error;
pub mod generators;
pub mod grid;
pub mod rational;
pub mod solvers;
pub mod space;

pub use error::{Error, Result};
pub use rational::Rational;
pub use space::{
    approves, distance, distinct_positions, position_groups, score, Agent, BitPoint,
    DeliberationSpace, GridVariant, Point, PositionGroup, SpaceKind,
};
