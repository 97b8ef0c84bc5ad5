//! Hypercube instances on which only a large compromise reaches the popular
//! proposal.
//!
//! Dimensions `0..d-1` are split into triplets grouped into nonuplets; the
//! last dimension is special. Each current proposal (CP) is a union of
//! nonuplets, and its coalition holds every agent type built around it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::dynamics::{CoalitionStructure, DeliberativeCoalition};
use crate::error::{Error, Result};
use crate::rational::{int, pow, Rational};
use crate::space::{Agent, BitPoint, DeliberationSpace, Point, PreparedProposal, SpaceKind};

/// Largest number of agent types the generator will build.
pub const MAX_TYPES: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpParams {
    pub d: usize,
    pub d_prime: usize,
    pub d_hat: usize,
    pub k: usize,
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
}

/// Which CP an agent type was built around, and whether it holds the
/// special dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypeMeta {
    pub cp: usize,
    pub special: bool,
}

#[derive(Clone, Debug)]
pub struct ExpCompromiseInstance {
    pub space: DeliberationSpace,
    pub initial: CoalitionStructure,
    pub params: ExpParams,
    /// CPs in coalition order; consecutive ones are disjoint.
    pub cp_sequence: Vec<Point>,
    pub x_star: Point,
    /// One entry per agent.
    pub types: Vec<TypeMeta>,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Checks `d` and returns `(d', d_hat, k)`.
pub fn exp_compromise_shape(d: usize) -> Result<(usize, usize, usize)> {
    if d < 28 || !(d - 1).is_multiple_of(27) {
        return Err(Error::Inadmissible(format!(
            "d = {d}: need d >= 28 and (d - 1) divisible by 27"
        )));
    }
    if ((d - 1) / 27).is_multiple_of(2) {
        return Err(Error::Inadmissible(format!(
            "d = {d}: (d - 1)/27 must be odd so that the triplet count per CP is odd"
        )));
    }
    let d_prime = (d - 1) / 3;
    let q = d_prime / 3;
    let d_hat = (q - 1) / 2;
    let k = binomial(q, q / 3) - 1;
    Ok((d_prime, d_hat, k))
}

/// Number of agent types built around one CP.
pub fn types_per_cp(d_hat: usize) -> usize {
    binomial(2 * d_hat + 1, d_hat + 1) * 3usize.pow(2 * d_hat as u32 + 1) * 2
}

/// A Hamiltonian path in the disjointness graph of `sets`, by backtracking.
fn disjoint_sequence(sets: &[Vec<usize>], budget: usize) -> Option<Vec<usize>> {
    fn disjoint(a: &[usize], b: &[usize]) -> bool {
        a.iter().all(|x| !b.contains(x))
    }
    fn extend(
        sets: &[Vec<usize>],
        path: &mut Vec<usize>,
        used: &mut [bool],
        nodes: &mut usize,
        budget: usize,
    ) -> bool {
        if path.len() == sets.len() {
            return true;
        }
        *nodes += 1;
        if *nodes > budget {
            return false;
        }
        let last = *path.last().expect("path starts non-empty");
        for next in 0..sets.len() {
            if !used[next] && disjoint(&sets[last], &sets[next]) {
                used[next] = true;
                path.push(next);
                if extend(sets, path, used, nodes, budget) {
                    return true;
                }
                path.pop();
                used[next] = false;
            }
        }
        false
    }
    let mut nodes = 0;
    for start in 0..sets.len() {
        let mut used = vec![false; sets.len()];
        used[start] = true;
        let mut path = vec![start];
        if extend(sets, &mut path, &mut used, &mut nodes, budget) {
            return Some(path);
        }
    }
    None
}

/// `alpha * sum_{i < terms} beta^i`.
fn geometric(alpha: &Rational, beta: &Rational, terms: usize) -> Rational {
    let mut sum = Rational::zero();
    let mut p = Rational::one();
    for _ in 0..terms {
        sum += &p;
        p *= beta;
    }
    alpha * sum
}

/// Largest `beta` found from below with `alpha (1 + ... + beta^{k-1}) <= 1`
/// and `alpha (1 + ... + beta^k) > 1`; exact when `k = 2`.
pub fn calibrate_beta(alpha: &Rational, k: usize) -> Rational {
    if k == 2 {
        return (Rational::one() - alpha) / alpha;
    }
    let one = Rational::one();
    let mut lo = Rational::zero();
    let mut hi = one.clone();
    loop {
        if geometric(alpha, &lo, k + 1) > one {
            return lo;
        }
        let mid = (&lo + &hi) / int(2);
        let f = geometric(alpha, &mid, k);
        if f == one {
            return mid;
        }
        if f < one {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn type_weights(params: &ExpParams, per_cp: usize) -> (Vec<Rational>, Vec<Rational>) {
    let half = int(per_cp as i64 / 2);
    let one = Rational::one();
    let mut special = Vec::new();
    let mut plain = Vec::new();
    for i in 0..=params.k {
        let b = pow(&params.beta, i);
        special.push(&params.alpha * &b / &half);
        plain.push((&one - &params.alpha) * &b / &half);
    }
    (special, plain)
}

fn build(
    params: ExpParams,
    cp_sequence: Vec<Point>,
    positions: Vec<Point>,
    types: Vec<TypeMeta>,
) -> Result<ExpCompromiseInstance> {
    let d = params.d;
    let per_cp = types.iter().filter(|t| t.cp == 0).count();
    let (special, plain) = type_weights(&params, per_cp);
    let agents = positions
        .into_iter()
        .zip(&types)
        .map(|(p, t)| {
            let w = if t.special { &special[t.cp] } else { &plain[t.cp] };
            Agent::new(p, w.clone())
        })
        .collect();
    let space = DeliberationSpace::new(SpaceKind::Hypercube, d, agents)?;
    let mut members = vec![Vec::new(); cp_sequence.len()];
    for (i, t) in types.iter().enumerate() {
        members[t.cp].push(i);
    }
    let coalitions = members
        .into_iter()
        .zip(&cp_sequence)
        .map(|(m, p)| DeliberativeCoalition::new(m, p.clone()))
        .collect();
    let initial = CoalitionStructure::new(&space, coalitions)?;
    Ok(ExpCompromiseInstance {
        space,
        initial,
        params,
        cp_sequence,
        x_star: Point::Hypercube(BitPoint::from_indices(d, [d - 1])),
        types,
    })
}

/// Builds the instance for an admissible `d`.
pub fn gen_exp_compromise(d: usize) -> Result<ExpCompromiseInstance> {
    let (d_prime, d_hat, k) = exp_compromise_shape(d)?;
    let per_cp = types_per_cp(d_hat);
    if per_cp.saturating_mul(k + 1) > MAX_TYPES {
        return Err(Error::GuardExceeded {
            what: "exp-compromise agent types",
            limit: MAX_TYPES,
            actual: per_cp.saturating_mul(k + 1),
        });
    }
    let q = d_prime / 3;
    let cps = combinations(q, q / 3);
    let order = disjoint_sequence(&cps, 10_000_000)
        .ok_or_else(|| Error::Precondition("no disjoint CP sequence within budget".into()))?;

    let gamma = Rational::one() - Rational::new(BigInt::one(), BigInt::from(per_cp));
    let alpha = (Rational::one() + &gamma) / int(2);
    let beta = calibrate_beta(&alpha, k);
    let params = ExpParams {
        d,
        d_prime,
        d_hat,
        k,
        alpha,
        beta,
        gamma,
    };

    let mut cp_sequence = Vec::new();
    let mut positions = Vec::new();
    let mut types = Vec::new();
    for (cp, &idx) in order.iter().enumerate() {
        let triplets: Vec<[usize; 3]> = cps[idx]
            .iter()
            .flat_map(|&nonuplet| (0..3).map(move |j| {
                let base = 9 * nonuplet + 3 * j;
                [base, base + 1, base + 2]
            }))
            .collect();
        cp_sequence.push(Point::Hypercube(BitPoint::from_indices(
            d,
            triplets.iter().flatten().copied(),
        )));
        let t = triplets.len();
        for twos in combinations(t, d_hat + 1) {
            for choice in 0..3usize.pow(t as u32) {
                let mut dims = Vec::new();
                let mut c = choice;
                for (ti, tri) in triplets.iter().enumerate() {
                    let pick = c % 3;
                    c /= 3;
                    if twos.contains(&ti) {
                        dims.extend(tri.iter().enumerate().filter(|&(e, _)| e != pick).map(|(_, &x)| x));
                    } else {
                        dims.push(tri[pick]);
                    }
                }
                for special in [false, true] {
                    let mut p = BitPoint::from_indices(d, dims.iter().copied());
                    if special {
                        p.set(d - 1, true);
                    }
                    positions.push(Point::Hypercube(p));
                    types.push(TypeMeta { cp, special });
                }
            }
        }
    }
    build(params, cp_sequence, positions, types)
}

impl ExpCompromiseInstance {
    /// Same types and coalitions, weights recomputed from `alpha` and `beta`.
    pub fn with_params(&self, alpha: Rational, beta: Rational) -> Result<ExpCompromiseInstance> {
        let params = ExpParams {
            alpha,
            beta,
            ..self.params.clone()
        };
        let positions = self.space.agents().iter().map(|a| a.position.clone()).collect();
        build(params, self.cp_sequence.clone(), positions, self.types.clone())
    }

    /// The space with every weight multiplied by the LCM of the denominators,
    /// and that multiplier.
    pub fn integerized(&self) -> Result<(DeliberationSpace, BigInt)> {
        let lcm = self
            .space
            .agents()
            .iter()
            .fold(BigInt::one(), |acc, a| acc.lcm(a.weight.denom()));
        let scale = Rational::from_integer(lcm.clone());
        let agents = self
            .space
            .agents()
            .iter()
            .map(|a| Agent::new(a.position.clone(), &a.weight * &scale))
            .collect();
        Ok((DeliberationSpace::new(SpaceKind::Hypercube, self.params.d, agents)?, lcm))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpViolation {
    /// A type does not approve its own CP, or approves another one.
    TypeSupport { agent: usize, cp: usize },
    /// A type's approval of X* disagrees with its special flag.
    SpecialSupport { agent: usize },
    /// X* is not strictly heavier than some coalition.
    NotHeavier { coalition: usize },
    /// Some small compromise at X* would be valid.
    Capturable { largest: usize, participants: usize },
    Bounds(&'static str),
    Balance(&'static str),
    GammaFloor,
}

impl ExpViolation {
    pub fn name(&self) -> &'static str {
        match self {
            ExpViolation::TypeSupport { .. } => "type-support",
            ExpViolation::SpecialSupport { .. } => "x-star-support",
            ExpViolation::NotHeavier { .. } => "a2",
            ExpViolation::Capturable { .. } => "a3",
            ExpViolation::Bounds(_) => "a1",
            ExpViolation::Balance(name) => name,
            ExpViolation::GammaFloor => "a5",
        }
    }
}

impl fmt::Display for ExpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpViolation::TypeSupport { agent, cp } => {
                write!(f, "agent {agent} has the wrong support among CPs (own CP {cp})")
            }
            ExpViolation::SpecialSupport { agent } => {
                write!(f, "agent {agent}: approval of X* disagrees with its type")
            }
            ExpViolation::NotHeavier { coalition } => {
                write!(f, "X* supporters are not heavier than coalition {coalition}")
            }
            ExpViolation::Capturable { largest, participants } => write!(
                f,
                "a {participants}-compromise at X* led by coalition {largest} is valid"
            ),
            ExpViolation::Bounds(what) => write!(f, "{what} is not strictly between 0 and 1"),
            ExpViolation::Balance(name) => write!(f, "calibration inequality {name} fails"),
            ExpViolation::GammaFloor => write!(f, "alpha is below gamma"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub check: usize,
    pub violation: Option<ExpViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpReport {
    pub checks: Vec<CheckOutcome>,
}

impl ExpReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.violation.is_none())
    }

    pub fn first_violation(&self) -> Option<&ExpViolation> {
        self.checks.iter().find_map(|c| c.violation.as_ref())
    }
}

fn check_type_support(inst: &ExpCompromiseInstance) -> Option<ExpViolation> {
    let prepared: Vec<PreparedProposal<'_>> =
        inst.cp_sequence.iter().map(PreparedProposal::new).collect();
    (0..inst.space.n()).find_map(|i| {
        let cp = inst.types[i].cp;
        let ok = prepared
            .iter()
            .enumerate()
            .all(|(j, p)| inst.space.agent_approves(i, p) == (j == cp));
        (!ok).then_some(ExpViolation::TypeSupport { agent: i, cp })
    })
}

fn check_special_support(inst: &ExpCompromiseInstance) -> Option<ExpViolation> {
    let p = PreparedProposal::new(&inst.x_star);
    (0..inst.space.n())
        .find(|&i| inst.space.agent_approves(i, &p) != inst.types[i].special)
        .map(|agent| ExpViolation::SpecialSupport { agent })
}

/// `(coalition weight, weight approving X*)` per coalition.
fn captures(inst: &ExpCompromiseInstance) -> Vec<(Rational, Rational)> {
    let p = PreparedProposal::new(&inst.x_star);
    inst.initial
        .coalitions()
        .iter()
        .map(|c| {
            let mut total = Rational::zero();
            let mut captured = Rational::zero();
            for &m in &c.members {
                let w = &inst.space.agents()[m].weight;
                total += w;
                if inst.space.agent_approves(m, &p) {
                    captured += w;
                }
            }
            (total, captured)
        })
        .collect()
}

fn check_heavier(inst: &ExpCompromiseInstance) -> Option<ExpViolation> {
    let supporters = inst.space.weight_of(&inst.space.approvers(&inst.x_star).ok()?);
    captures(inst)
        .iter()
        .position(|(w, _)| supporters <= *w)
        .map(|coalition| ExpViolation::NotHeavier { coalition })
}

/// For each coalition `j` as the heaviest participant, the best companions
/// are the up to `k - 1` largest captures among coalitions no heavier.
fn check_capturable(inst: &ExpCompromiseInstance) -> Option<ExpViolation> {
    let caps = captures(inst);
    let k = inst.params.k;
    for (j, (wj, cj)) in caps.iter().enumerate() {
        let mut others: Vec<&Rational> = caps
            .iter()
            .enumerate()
            .filter(|&(l, (wl, _))| l != j && wl <= wj)
            .map(|(_, (_, cl))| cl)
            .collect();
        others.sort_by(|a, b| b.cmp(a));
        let mut total = cj.clone();
        for (extra, c) in others.iter().take(k.saturating_sub(1)).enumerate() {
            total += *c;
            if total > *wj {
                return Some(ExpViolation::Capturable {
                    largest: j,
                    participants: extra + 2,
                });
            }
        }
    }
    None
}

fn check_params(inst: &ExpCompromiseInstance) -> Option<ExpViolation> {
    let p = &inst.params;
    let zero = Rational::zero();
    let one = Rational::one();
    if !(p.alpha > zero && p.alpha < one) {
        return Some(ExpViolation::Bounds("alpha"));
    }
    if !(p.beta > zero && p.beta < one) {
        return Some(ExpViolation::Bounds("beta"));
    }
    if geometric(&p.alpha, &p.beta, p.k + 1) <= one {
        return Some(ExpViolation::Balance("a2"));
    }
    if geometric(&p.alpha, &p.beta, p.k) > one {
        return Some(ExpViolation::Balance("a3"));
    }
    if p.alpha < p.gamma {
        return Some(ExpViolation::GammaFloor);
    }
    None
}

/// Runs the five structural checks: type support, X* support, X* weight,
/// small compromises at X*, and the calibration constants.
pub fn verify_exp_compromise(inst: &ExpCompromiseInstance) -> ExpReport {
    let results = [
        check_type_support(inst),
        check_special_support(inst),
        check_heavier(inst),
        check_capturable(inst),
        check_params(inst),
    ];
    ExpReport {
        checks: results
            .into_iter()
            .enumerate()
            .map(|(i, violation)| CheckOutcome {
                check: i + 1,
                violation,
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    /// Proposals examined (every proposal some type could approve).
    pub examined: u64,
    /// Proposals other than X* admitting a valid compromise.
    pub offending: u64,
    /// Up to 16 offending proposals, smallest first within each size.
    pub samples: Vec<Point>,
}

/// Checks every proposal for a valid compromise of at most
/// `max_participants` coalitions. Expensive: at `d = 28` this visits about
/// 4.5e7 proposals.
pub fn sweep_exp_compromise(
    inst: &ExpCompromiseInstance,
    max_participants: usize,
) -> Result<SweepReport> {
    let d = inst.params.d;
    if d > 63 {
        return Err(Error::GuardExceeded {
            what: "sweep dimension",
            limit: 63,
            actual: d,
        });
    }
    let (space, _) = inst.integerized()?;
    let weights = crate::rational::scale_to_u128(
        &space.agents().iter().map(|a| a.weight.clone()).collect::<Vec<_>>(),
    )
    .ok_or(Error::WeightOverflow)?;
    let masks: Vec<u64> = space
        .agents()
        .iter()
        .map(|a| a.position.as_bits().expect("hypercube").words()[0])
        .collect();
    let coalition_of: Vec<usize> = inst.types.iter().map(|t| t.cp).collect();
    let c = inst.cp_sequence.len();
    let mut totals = vec![0u128; c];
    for (i, w) in weights.iter().enumerate() {
        totals[coalition_of[i]] += w;
    }
    let largest = masks.iter().map(|m| m.count_ones()).max().unwrap_or(0) as usize;
    let max_size = (2 * largest).saturating_sub(1).min(d);
    let x_star = 1u64 << (d - 1);

    let per_size: Vec<(u64, u64, Vec<u64>)> = (1..=max_size)
        .into_par_iter()
        .map(|size| {
            let mut examined = 0u64;
            let mut offending = 0u64;
            let mut samples = Vec::new();
            let mut y: u64 = (1u64 << size) - 1;
            let limit = 1u64 << d;
            let mut caps = vec![0u128; c];
            while y < limit {
                examined += 1;
                if y != x_star {
                    caps.iter_mut().for_each(|v| *v = 0);
                    for (i, m) in masks.iter().enumerate() {
                        if size < 2 * (m & y).count_ones() as usize {
                            caps[coalition_of[i]] += weights[i];
                        }
                    }
                    if admits_compromise(&caps, &totals, max_participants) {
                        offending += 1;
                        if samples.len() < 16 {
                            samples.push(y);
                        }
                    }
                }
                let lowest = y & y.wrapping_neg();
                let ripple = y + lowest;
                y = (((ripple ^ y) >> 2) / lowest) | ripple;
            }
            (examined, offending, samples)
        })
        .collect();

    let mut report = SweepReport {
        examined: 0,
        offending: 0,
        samples: Vec::new(),
    };
    for (e, o, s) in per_size {
        report.examined += e;
        report.offending += o;
        for m in s {
            if report.samples.len() < 16 {
                report.samples.push(Point::Hypercube(BitPoint::from_word(d, m)));
            }
        }
    }
    Ok(report)
}

fn admits_compromise(caps: &[u128], totals: &[u128], max_participants: usize) -> bool {
    for j in 0..caps.len() {
        if caps[j] == 0 {
            continue;
        }
        let mut others: Vec<u128> = (0..caps.len())
            .filter(|&l| l != j && totals[l] <= totals[j] && caps[l] > 0)
            .map(|l| caps[l])
            .collect();
        others.sort_unstable_by(|a, b| b.cmp(a));
        let mut total = caps[j];
        for c in others.iter().take(max_participants.saturating_sub(1)) {
            total += c;
            if total > totals[j] {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{validate_transition, Transition, Violation};
    use crate::rational::ratio;
    use std::sync::OnceLock;

    fn d28() -> &'static ExpCompromiseInstance {
        static INST: OnceLock<ExpCompromiseInstance> = OnceLock::new();
        INST.get_or_init(|| gen_exp_compromise(28).unwrap())
    }

    #[test]
    fn shape_of_d28() {
        let inst = d28();
        assert_eq!(exp_compromise_shape(28).unwrap(), (9, 1, 2));
        assert_eq!(types_per_cp(1), 162);
        assert_eq!(inst.space.n(), 486);
        assert_eq!(inst.initial.len(), 3);
        assert_eq!(inst.params.alpha, ratio(323, 324));
        assert_eq!(inst.params.beta, ratio(1, 323));
        assert_eq!(inst.params.gamma, ratio(161, 162));
        assert_eq!(inst.x_star, Point::Hypercube(BitPoint::from_indices(28, [27])));
    }

    #[test]
    fn inadmissible_dimensions() {
        for d in [27, 29, 55, 0, 1] {
            assert!(matches!(exp_compromise_shape(d), Err(Error::Inadmissible(_))), "d={d}");
        }
        assert!(matches!(gen_exp_compromise(82), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn consecutive_cps_are_disjoint() {
        let cps = &d28().cp_sequence;
        for w in cps.windows(2) {
            let (a, b) = (w[0].as_bits().unwrap(), w[1].as_bits().unwrap());
            assert_eq!(a.intersection_count(b), 0);
        }
    }

    #[test]
    fn coalition_weights_are_geometric() {
        let inst = d28();
        let beta = &inst.params.beta;
        for (i, (w, c)) in captures(inst).into_iter().enumerate() {
            assert_eq!(w, pow(beta, i));
            assert_eq!(c, &inst.params.alpha * pow(beta, i));
        }
    }

    #[test]
    fn d28_passes_all_checks() {
        let report = verify_exp_compromise(d28());
        assert_eq!(report.checks.len(), 5);
        assert!(report.passed(), "{:?}", report.first_violation());
    }

    #[test]
    fn full_compromise_is_valid_and_pairs_are_not() {
        let inst = d28();
        let t = Transition::derive(&inst.space, &inst.initial, vec![0, 1, 2], inst.x_star.clone())
            .unwrap();
        assert_eq!(validate_transition(&inst.space, &inst.initial, &t, 3), Ok(()));
        for pair in [[0, 1], [0, 2], [1, 2]] {
            let t = Transition::derive(&inst.space, &inst.initial, pair.to_vec(), inst.x_star.clone())
                .unwrap();
            assert!(matches!(
                validate_transition(&inst.space, &inst.initial, &t, 2),
                Err(Violation::NotStrictlyLarger { .. })
            ));
        }
    }

    #[test]
    fn larger_beta_breaks_a3() {
        let inst = d28();
        let beta = &inst.params.beta * ratio(11, 10);
        let bad = inst.with_params(inst.params.alpha.clone(), beta).unwrap();
        let report = verify_exp_compromise(&bad);
        assert_eq!(report.first_violation().unwrap().name(), "a3");
        assert_eq!(report.checks[4].violation.as_ref().unwrap().name(), "a3");
    }

    #[test]
    fn dropping_the_special_dimension_breaks_check_two() {
        let inst = d28();
        let victim = inst.types.iter().position(|t| t.special).unwrap();
        let mut agents = inst.space.agents().to_vec();
        if let Point::Hypercube(bits) = &mut agents[victim].position {
            bits.set(27, false);
        }
        let space = DeliberationSpace::new(SpaceKind::Hypercube, 28, agents).unwrap();
        let broken = ExpCompromiseInstance {
            space,
            ..inst.clone()
        };
        let report = verify_exp_compromise(&broken);
        assert!(report.checks[0].violation.is_none());
        assert_eq!(
            report.checks[1].violation,
            Some(ExpViolation::SpecialSupport { agent: victim })
        );
    }

    #[test]
    fn integer_weights_scale_exactly() {
        let inst = d28();
        let (space, lcm) = inst.integerized().unwrap();
        assert!(space.agents().iter().all(|a| a.weight.is_integer()));
        assert_eq!(space.total_weight(), inst.space.total_weight() * Rational::from_integer(lcm));
    }

    #[test]
    fn bisection_meets_both_inequalities() {
        let alpha = ratio(9, 10);
        for k in 3..6 {
            let beta = calibrate_beta(&alpha, k);
            assert!(geometric(&alpha, &beta, k) <= Rational::one());
            assert!(geometric(&alpha, &beta, k + 1) > Rational::one());
        }
    }

    #[test]
    #[ignore = "visits about 4.5e7 proposals"]
    fn sweep_d28() {
        let report = sweep_exp_compromise(d28(), d28().params.k - 1).unwrap();
        assert!(report.examined > 0);
        assert_eq!(report.offending, 0);
    }
}
