//! Families on which the adversarial schedule needs many 2-compromises.
//! Every agent subset `S` is realizable: some proposal is approved by exactly
//! the agents in `S`.

use num_traits::Zero;

use crate::dynamics::SupportOracle;
use crate::error::{Error, Result};
use crate::rational::{ratio, Rational};
use crate::space::{BitPoint, DeliberationSpace, Point, SpaceKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlowOracle {
    Hypercube { n: usize },
    Euclidean { n: usize },
}

impl SlowOracle {
    pub fn family(&self) -> &'static str {
        match self {
            SlowOracle::Hypercube { .. } => "hyp-slow",
            SlowOracle::Euclidean { .. } => "euc-slow",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            SlowOracle::Hypercube { n } | SlowOracle::Euclidean { n } => n,
        }
    }
}

impl SupportOracle for SlowOracle {
    /// `None` for the empty set, and on the hypercube also for all agents.
    fn support(&self, members: &[usize]) -> Option<Point> {
        if members.is_empty() {
            return None;
        }
        match *self {
            SlowOracle::Euclidean { n } => {
                let share = ratio(1, members.len() as i64);
                let mut coords = vec![Rational::zero(); n];
                for &i in members {
                    coords[i] = share.clone();
                }
                Some(Point::Euclidean(coords))
            }
            SlowOracle::Hypercube { n } => {
                let m = members.len();
                if m >= n {
                    return None;
                }
                let mut p = BitPoint::zeros(2 * n);
                for i in 0..n - m - 1 {
                    p.set(i, true);
                }
                let mut inside = members.iter().peekable();
                for j in 0..n {
                    if inside.peek() == Some(&&j) {
                        inside.next();
                    } else {
                        p.set(n + j, true);
                    }
                }
                Some(Point::Hypercube(p))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SlowFamilyInstance {
    pub space: DeliberationSpace,
    pub oracle: SlowOracle,
}

/// `n` agents in `d = 2n` dimensions: zeros in the first half, ones in the
/// second half except at dimension `n + i` for agent `i`.
pub fn gen_hyp_slow(n: usize) -> Result<SlowFamilyInstance> {
    if n < 2 {
        return Err(Error::OutOfDomain(format!("hyp-slow needs n >= 2, got {n}")));
    }
    let positions = (0..n)
        .map(|i| Point::Hypercube(BitPoint::from_indices(2 * n, (n..2 * n).filter(|&j| j != n + i))))
        .collect();
    Ok(SlowFamilyInstance {
        space: DeliberationSpace::unit(SpaceKind::Hypercube, 2 * n, positions)?,
        oracle: SlowOracle::Hypercube { n },
    })
}

/// `n` agents on the unit vectors of `R^n`.
pub fn gen_euc_slow(n: usize) -> Result<SlowFamilyInstance> {
    if n < 1 {
        return Err(Error::OutOfDomain("euc-slow needs n >= 1".into()));
    }
    let positions = (0..n)
        .map(|i| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::from_integer(1.into());
            Point::Euclidean(v)
        })
        .collect();
    Ok(SlowFamilyInstance {
        space: DeliberationSpace::unit(SpaceKind::Euclidean, n, positions)?,
        oracle: SlowOracle::Euclidean { n },
    })
}

/// `(2/3)(2^{sqrt(n)/2} - 2n 2^{-sqrt(n)/2})`, the adversarial step count the
/// slow families are guaranteed to exceed.
pub fn slow_lower_bound(n: usize) -> f64 {
    let h = (n as f64).sqrt() / 2.0;
    (2.0 / 3.0) * (h.exp2() - 2.0 * n as f64 * (-h).exp2())
}
