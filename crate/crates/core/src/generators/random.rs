//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::space::{BitPoint, DeliberationSpace, GridVariant, Point, SpaceKind};

/// `n` unit-weight agents drawn uniformly, never at the origin. Euclidean
/// coordinates are `p/q` with `|p| <= range` and `1 <= q <= range`; grid
/// coordinates lie in `[-range, range]` (or `[0, range]` on the quadrant).
pub fn gen_random(
    kind: SpaceKind,
    n: usize,
    d: usize,
    seed: u64,
    range: i64,
) -> Result<DeliberationSpace> {
    if n == 0 {
        return Err(Error::EmptyAgentSet);
    }
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if range < 1 {
        return Err(Error::OutOfDomain(format!("coordinate range must be positive, got {range}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions = Vec::with_capacity(n);
    while positions.len() < n {
        let p = match kind {
            SpaceKind::Hypercube => {
                let bits: Vec<bool> = (0..d).map(|_| rng.gen_bool(0.5)).collect();
                Point::Hypercube(BitPoint::from_bits(&bits))
            }
            SpaceKind::Euclidean => Point::Euclidean(
                (0..d)
                    .map(|_| {
                        let p = rng.gen_range(-range..=range);
                        let q = rng.gen_range(1..=range);
                        Rational::new(p.into(), q.into())
                    })
                    .collect(),
            ),
            SpaceKind::Grid(variant) => {
                if d != 2 {
                    return Err(Error::DimensionMismatch { expected: 2, found: d });
                }
                let lo = match variant {
                    GridVariant::NonNegative => 0,
                    GridVariant::Full => -range,
                };
                Point::Grid(rng.gen_range(lo..=range), rng.gen_range(lo..=range))
            }
        };
        if !p.is_origin() {
            positions.push(p);
        }
    }
    DeliberationSpace::unit(kind, d, positions)
}
