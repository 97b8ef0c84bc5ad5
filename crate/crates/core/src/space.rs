//! Points, agents, deliberation spaces, and the approval predicate.
//!
//! Three kinds of space are supported: the `d`-hypercube with Hamming
//! distance, `d`-dimensional Euclidean space with exact rational coordinates,
//! and the integer grid with `l1` distance. The status quo is always the
//! origin. An agent approves a proposal when the proposal is strictly closer
//! to it than the origin; every comparison is exact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A packed vertex of the hypercube. Coordinate `i` lives in bit `i % 64`
/// of word `i / 64`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitPoint {
    len: usize,
    words: Vec<u64>,
}

impl BitPoint {
    pub fn zeros(len: usize) -> Self {
        BitPoint {
            len,
            words: vec![0; len.div_ceil(64).max(1)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut p = BitPoint::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            p.set(i, b);
        }
        p
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut p = BitPoint::zeros(len);
        for i in ones {
            p.set(i, true);
        }
        p
    }

    /// Builds a point of length `len <= 64` whose coordinate `i` is bit `i` of
    /// `value`.
    pub fn from_word(len: usize, value: u64) -> Self {
        assert!(len <= 64, "from_word needs len <= 64");
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        BitPoint {
            len,
            words: vec![value & mask],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let (w, b) = (i / 64, i % 64);
        if value {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn intersection_count(&self, other: &BitPoint) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    pub fn hamming(&self, other: &BitPoint) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

impl Ord for BitPoint {
    /// Lexicographic on the coordinate vector `(x_0, x_1, ...)`.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let first = diff.trailing_zeros();
                return if a >> first & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Which part of the integer grid proposals and agents may occupy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GridVariant {
    /// The quadrant `Z_{>=0}^2`.
    NonNegative,
    /// The whole lattice `Z^2`.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Hypercube,
    Euclidean,
    Grid(GridVariant),
}

impl SpaceKind {
    pub fn name(&self) -> &'static str {
        match self {
            SpaceKind::Hypercube => "hypercube",
            SpaceKind::Euclidean => "euclidean",
            SpaceKind::Grid(GridVariant::Full) => "grid",
            SpaceKind::Grid(GridVariant::NonNegative) => "grid_nonneg",
        }
    }

    pub fn from_name(name: &str) -> Option<SpaceKind> {
        match name {
            "hypercube" => Some(SpaceKind::Hypercube),
            "euclidean" => Some(SpaceKind::Euclidean),
            "grid" => Some(SpaceKind::Grid(GridVariant::Full)),
            "grid_nonneg" => Some(SpaceKind::Grid(GridVariant::NonNegative)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Hypercube(BitPoint),
    Euclidean(Vec<Rational>),
    Grid(i64, i64),
}

impl Point {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Point::Hypercube(_) => "hypercube",
            Point::Euclidean(_) => "euclidean",
            Point::Grid(..) => "grid",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Point::Hypercube(b) => b.len(),
            Point::Euclidean(v) => v.len(),
            Point::Grid(..) => 2,
        }
    }

    pub fn is_origin(&self) -> bool {
        match self {
            Point::Hypercube(b) => b.is_zero(),
            Point::Euclidean(v) => v.iter().all(Zero::is_zero),
            Point::Grid(x, y) => *x == 0 && *y == 0,
        }
    }

    pub fn origin_like(&self) -> Point {
        match self {
            Point::Hypercube(b) => Point::Hypercube(BitPoint::zeros(b.len())),
            Point::Euclidean(v) => Point::Euclidean(vec![Rational::zero(); v.len()]),
            Point::Grid(..) => Point::Grid(0, 0),
        }
    }

    pub fn euclidean_from_ints(coords: &[i64]) -> Point {
        Point::Euclidean(coords.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn hypercube_from_bits(bits: &[u8]) -> Point {
        Point::Hypercube(BitPoint::from_bits(
            &bits.iter().map(|&b| b != 0).collect::<Vec<_>>(),
        ))
    }

    pub fn as_bits(&self) -> Option<&BitPoint> {
        match self {
            Point::Hypercube(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_coords(&self) -> Option<&[Rational]> {
        match self {
            Point::Euclidean(v) => Some(v),
            _ => None,
        }
    }

    fn same_shape(&self, other: &Point) -> Result<()> {
        if std::mem::discriminant(self) != std::mem::discriminant(other) {
            return Err(Error::KindMismatch {
                expected: self.kind_name(),
                found: other.kind_name(),
            });
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl Ord for Point {
    /// Lexicographic on coordinates; points of different kinds order by kind.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Point::Hypercube(a), Point::Hypercube(b)) => a.cmp(b),
            (Point::Euclidean(a), Point::Euclidean(b)) => a.cmp(b),
            (Point::Grid(a, b), Point::Grid(c, d)) => (a, b).cmp(&(c, d)),
            _ => self.kind_name().cmp(other.kind_name()),
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self {
            Point::Hypercube(b) => (0..b.len())
                .map(|i| if b.get(i) { "1" } else { "0" }.to_string())
                .collect(),
            Point::Euclidean(v) => v.iter().map(rational::format).collect(),
            Point::Grid(x, y) => vec![x.to_string(), y.to_string()],
        };
        write!(f, "({})", parts.join(","))
    }
}

/// Squared Euclidean norm.
fn norm2(v: &[Rational]) -> Rational {
    v.iter()
        .filter(|c| !c.is_zero())
        .fold(Rational::zero(), |acc, c| acc + c * c)
}

/// Inner product skipping zero coordinates on either side.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Distance used for approval decisions: Hamming on the hypercube, SQUARED
/// Euclidean distance in `R^d`, and `l1` on the grid. Squaring preserves every
/// comparison between Euclidean distances.
pub fn distance(a: &Point, b: &Point) -> Result<Rational> {
    a.same_shape(b)?;
    Ok(match (a, b) {
        (Point::Hypercube(x), Point::Hypercube(y)) => rational::int(x.hamming(y) as i64),
        (Point::Euclidean(x), Point::Euclidean(y)) => x
            .iter()
            .zip(y)
            .map(|(p, q)| {
                let t = p - q;
                &t * &t
            })
            .fold(Rational::zero(), |acc, t| acc + t),
        (Point::Grid(x1, y1), Point::Grid(x2, y2)) => {
            rational::int((x1 - x2).abs() + (y1 - y2).abs())
        }
        _ => unreachable!("same_shape checked the kinds"),
    })
}

/// A proposal with its per-proposal quantities computed once, for checking
/// many agents against it.
#[derive(Clone, Debug)]
pub struct PreparedProposal<'a> {
    point: &'a Point,
    norm2: Rational,
    ones: u32,
}

impl<'a> PreparedProposal<'a> {
    pub fn new(point: &'a Point) -> Self {
        let (norm2, ones) = match point {
            Point::Euclidean(v) => (norm2(v), 0),
            Point::Hypercube(b) => (Rational::zero(), b.count_ones()),
            Point::Grid(..) => (Rational::zero(), 0),
        };
        PreparedProposal { point, norm2, ones }
    }

    pub fn point(&self) -> &Point {
        self.point
    }

    /// Approval test for an agent at `position`; the caller guarantees shapes
    /// agree and the proposal is not the status quo.
    ///
    /// Hypercube: `|X| < 2 |V ∩ X|`. Euclidean: `||p||^2 < 2 <v, p>`.
    /// Grid: `|u - x| + |v - y| < |u| + |v|`.
    pub fn approved_by(&self, position: &Point) -> bool {
        match (self.point, position) {
            (Point::Hypercube(x), Point::Hypercube(v)) => self.ones < 2 * x.intersection_count(v),
            (Point::Euclidean(p), Point::Euclidean(v)) => {
                let ip = dot(v, p);
                self.norm2 < ip.clone() + ip
            }
            (Point::Grid(x, y), Point::Grid(u, v)) => {
                (u - x).abs() + (v - y).abs() < u.abs() + v.abs()
            }
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agent {
    pub position: Point,
    pub weight: Rational,
}

impl Agent {
    pub fn new(position: Point, weight: Rational) -> Self {
        Agent { position, weight }
    }

    pub fn unit(position: Point) -> Self {
        Agent {
            position,
            weight: Rational::one(),
        }
    }
}

/// Agents sharing one exact position, with their summed weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionGroup {
    pub position: Point,
    pub weight: Rational,
    pub members: Vec<usize>,
}

/// A deliberation space: kind, dimension, and agents. The status quo is the
/// origin and is never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeliberationSpace {
    kind: SpaceKind,
    dim: usize,
    agents: Vec<Agent>,
    /// Nonzero coordinate indices of each Euclidean agent.
    sparse: Vec<Vec<usize>>,
}

impl DeliberationSpace {
    pub fn new(kind: SpaceKind, dim: usize, agents: Vec<Agent>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if matches!(kind, SpaceKind::Grid(_)) && dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: dim,
            });
        }
        if agents.is_empty() {
            return Err(Error::EmptyAgentSet);
        }
        let sparse = agents
            .iter()
            .map(|a| match &a.position {
                Point::Euclidean(v) => (0..v.len()).filter(|&j| !v[j].is_zero()).collect(),
                _ => Vec::new(),
            })
            .collect();
        let space = DeliberationSpace {
            kind,
            dim,
            agents,
            sparse,
        };
        for (index, agent) in space.agents.iter().enumerate() {
            space.check_point(&agent.position)?;
            if agent.position.is_origin() {
                return Err(Error::AgentAtOrigin { index });
            }
            if !agent.weight.is_positive() {
                return Err(Error::NonPositiveWeight { index });
            }
        }
        Ok(space)
    }

    pub fn unit(kind: SpaceKind, dim: usize, positions: Vec<Point>) -> Result<Self> {
        Self::new(kind, dim, positions.into_iter().map(Agent::unit).collect())
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn origin(&self) -> Point {
        match self.kind {
            SpaceKind::Hypercube => Point::Hypercube(BitPoint::zeros(self.dim)),
            SpaceKind::Euclidean => Point::Euclidean(vec![Rational::zero(); self.dim]),
            SpaceKind::Grid(_) => Point::Grid(0, 0),
        }
    }

    pub fn total_weight(&self) -> Rational {
        self.agents
            .iter()
            .fold(Rational::zero(), |acc, a| acc + &a.weight)
    }

    pub fn weight_of(&self, members: &[usize]) -> Rational {
        members
            .iter()
            .fold(Rational::zero(), |acc, &i| acc + &self.agents[i].weight)
    }

    pub fn has_unit_weights(&self) -> bool {
        self.agents.iter().all(|a| a.weight.is_one())
    }

    /// Checks kind, dimension, and (for the non-negative grid) the quadrant.
    pub fn check_point(&self, p: &Point) -> Result<()> {
        let kind_ok = matches!(
            (self.kind, p),
            (SpaceKind::Hypercube, Point::Hypercube(_))
                | (SpaceKind::Euclidean, Point::Euclidean(_))
                | (SpaceKind::Grid(_), Point::Grid(..))
        );
        if !kind_ok {
            return Err(Error::KindMismatch {
                expected: self.kind.name(),
                found: p.kind_name(),
            });
        }
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.dim(),
            });
        }
        if let (SpaceKind::Grid(GridVariant::NonNegative), Point::Grid(x, y)) = (self.kind, p) {
            if *x < 0 || *y < 0 {
                return Err(Error::OutOfDomain(p.to_string()));
            }
        }
        Ok(())
    }

    /// Validates a proposal: right shape, inside the domain, not the status quo.
    pub fn check_proposal(&self, p: &Point) -> Result<()> {
        self.check_point(p)?;
        if p.is_origin() {
            return Err(Error::StatusQuoProposal);
        }
        Ok(())
    }

    /// Whether agent `i` approves an already validated proposal.
    pub fn agent_approves(&self, i: usize, prepared: &PreparedProposal<'_>) -> bool {
        match (prepared.point, &self.agents[i].position) {
            (Point::Euclidean(p), Point::Euclidean(v)) => {
                let ip = self.sparse[i]
                    .iter()
                    .filter(|&&j| !p[j].is_zero())
                    .fold(Rational::zero(), |acc, &j| acc + &v[j] * &p[j]);
                prepared.norm2 < ip.clone() + ip
            }
            (_, position) => prepared.approved_by(position),
        }
    }

    /// Indices of agents approving `proposal`, ascending.
    pub fn approvers(&self, proposal: &Point) -> Result<Vec<usize>> {
        self.check_proposal(proposal)?;
        let prepared = PreparedProposal::new(proposal);
        Ok((0..self.agents.len())
            .filter(|&i| self.agent_approves(i, &prepared))
            .collect())
    }

    /// The members of `pool` approving `proposal`, in pool order.
    pub fn approvers_among(&self, proposal: &Point, pool: &[usize]) -> Result<Vec<usize>> {
        self.check_proposal(proposal)?;
        let prepared = PreparedProposal::new(proposal);
        Ok(pool
            .iter()
            .copied()
            .filter(|&i| self.agent_approves(i, &prepared))
            .collect())
    }

    /// Sub-space holding the given agents, in the given order.
    pub fn restrict(&self, members: &[usize]) -> Result<DeliberationSpace> {
        DeliberationSpace::new(
            self.kind,
            self.dim,
            members.iter().map(|&i| self.agents[i].clone()).collect(),
        )
    }
}

/// `true` iff the agent is strictly closer to `proposal` than to the origin.
pub fn approves(agent: &Agent, proposal: &Point, space: &DeliberationSpace) -> Result<bool> {
    space.check_point(&agent.position)?;
    space.check_proposal(proposal)?;
    Ok(PreparedProposal::new(proposal).approved_by(&agent.position))
}

/// Total weight of the agents approving `proposal`.
pub fn score(space: &DeliberationSpace, proposal: &Point) -> Result<Rational> {
    Ok(space.weight_of(&space.approvers(proposal)?))
}

/// Agents grouped by exact position, lexicographically ordered by position.
pub fn position_groups(space: &DeliberationSpace) -> Vec<PositionGroup> {
    let mut map: BTreeMap<&Point, (Rational, Vec<usize>)> = BTreeMap::new();
    for (i, a) in space.agents.iter().enumerate() {
        let entry = map
            .entry(&a.position)
            .or_insert_with(|| (Rational::zero(), Vec::new()));
        entry.0 += &a.weight;
        entry.1.push(i);
    }
    map.into_iter()
        .map(|(p, (weight, members))| PositionGroup {
            position: p.clone(),
            weight,
            members,
        })
        .collect()
}

/// Distinct positions with their total weight, lexicographically ordered.
pub fn distinct_positions(space: &DeliberationSpace) -> Vec<(Point, Rational)> {
    position_groups(space)
        .into_iter()
        .map(|g| (g.position, g.weight))
        .collect()
}
