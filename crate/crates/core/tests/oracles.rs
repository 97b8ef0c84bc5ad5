use deliberation::generators::gen_random;
use deliberation::rational::{int, ratio};
use deliberation::solvers::{
    solve_euc_cells, solve_euc_perfect, solve_euc_subsets, solve_hyp_bruteforce,
    solve_hyp_popular_via_ilp, SolverConfig,
};
use deliberation::{approves, distance, score, Agent, DeliberationSpace, Point, Rational, SpaceKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scaled(space: &DeliberationSpace, c: &Rational) -> DeliberationSpace {
    let agents = space
        .agents()
        .iter()
        .map(|a| {
            let coords = a.position.as_coords().unwrap().iter().map(|x| x * c).collect();
            Agent::new(Point::Euclidean(coords), a.weight.clone())
        })
        .collect();
    DeliberationSpace::new(SpaceKind::Euclidean, space.dim(), agents).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hypercube_oracles_agree(n in 1usize..=5, d in 1usize..=10, seed in any::<u64>()) {
        let space = gen_random(SpaceKind::Hypercube, n, d, seed, 1).unwrap();
        let cfg = SolverConfig::default();
        let brute = solve_hyp_bruteforce(&space, &cfg).unwrap();
        let ilp = solve_hyp_popular_via_ilp(&space, &cfg).unwrap();
        prop_assert_eq!(&brute.best_score, &ilp.best_score);
        prop_assert_eq!(score(&space, &ilp.best_proposal).unwrap(), ilp.best_score);
    }

    #[test]
    fn euclidean_oracles_agree(n in 1usize..=8, d in 1usize..=3, seed in any::<u64>()) {
        let space = gen_random(SpaceKind::Euclidean, n, d, seed, 3).unwrap();
        let cfg = SolverConfig::default();
        let subsets = solve_euc_subsets(&space, &cfg).unwrap();
        let cells = solve_euc_cells(&space).unwrap();
        prop_assert_eq!(&subsets.best_score, &cells.best_score);
        let perfect = solve_euc_perfect(&space).unwrap();
        prop_assert_eq!(perfect.is_some(), subsets.best_score == space.total_weight());
        if let Some(p) = perfect {
            prop_assert_eq!(score(&space, &p).unwrap(), space.total_weight());
        }
    }

    #[test]
    fn euclidean_scale_invariance(n in 1usize..=6, d in 1usize..=3, seed in any::<u64>(), p in 1i64..9, q in 1i64..9) {
        let space = gen_random(SpaceKind::Euclidean, n, d, seed, 3).unwrap();
        let big = scaled(&space, &ratio(p, q));
        let cfg = SolverConfig::default();
        prop_assert_eq!(
            solve_euc_subsets(&space, &cfg).unwrap().best_score,
            solve_euc_subsets(&big, &cfg).unwrap().best_score
        );
        prop_assert_eq!(solve_euc_cells(&space).unwrap().best_score, solve_euc_cells(&big).unwrap().best_score);
    }

    #[test]
    fn adding_an_agent_is_monotone(n in 1usize..=6, d in 1usize..=3, seed in any::<u64>(), w in 1i64..4) {
        let space = gen_random(SpaceKind::Euclidean, n + 1, d, seed, 3).unwrap();
        let mut agents = space.agents().to_vec();
        let mut extra = agents.pop().unwrap();
        extra.weight = int(w);
        let before = DeliberationSpace::new(SpaceKind::Euclidean, d, agents.clone()).unwrap();
        agents.push(extra);
        let after = DeliberationSpace::new(SpaceKind::Euclidean, d, agents).unwrap();
        let cfg = SolverConfig::default();
        let b = solve_euc_subsets(&before, &cfg).unwrap().best_score;
        let a = solve_euc_subsets(&after, &cfg).unwrap().best_score;
        prop_assert!(a >= b);
        prop_assert!(a <= b + int(w));
    }

    #[test]
    fn hypercube_monotone(n in 1usize..=5, d in 1usize..=8, seed in any::<u64>()) {
        let space = gen_random(SpaceKind::Hypercube, n + 1, d, seed, 1).unwrap();
        let mut agents = space.agents().to_vec();
        agents.pop();
        let before = DeliberationSpace::new(SpaceKind::Hypercube, d, agents).unwrap();
        let cfg = SolverConfig::default();
        let b = solve_hyp_bruteforce(&before, &cfg).unwrap().best_score;
        let a = solve_hyp_bruteforce(&space, &cfg).unwrap().best_score;
        prop_assert!(a >= b && a <= b + int(1));
    }

    #[test]
    fn co_located_agents_agree(seed in any::<u64>(), d in 1usize..=4) {
        let base = gen_random(SpaceKind::Euclidean, 3, d, seed, 4).unwrap();
        let mut agents = base.agents().to_vec();
        agents.push(agents[0].clone());
        let space = DeliberationSpace::new(SpaceKind::Euclidean, d, agents).unwrap();
        let proposals = gen_random(SpaceKind::Euclidean, 20, d, seed ^ 1, 4).unwrap();
        for p in proposals.agents() {
            let a = approves(&space.agents()[0], &p.position, &space).unwrap();
            let b = approves(&space.agents()[3], &p.position, &space).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn agents_approve_their_own_position(seed in any::<u64>(), kind in 0usize..3) {
        let (kind, d) = match kind {
            0 => (SpaceKind::Hypercube, 6),
            1 => (SpaceKind::Euclidean, 3),
            _ => (SpaceKind::Grid(deliberation::GridVariant::Full), 2),
        };
        let space = gen_random(kind, 6, d, seed, 4).unwrap();
        for a in space.agents() {
            prop_assert!(approves(a, &a.position, &space).unwrap());
        }
    }
}

#[test]
fn squared_distance_orders_like_the_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let point = |rng: &mut ChaCha8Rng| {
        Point::Euclidean((0..3).map(|_| int(rng.gen_range(-20..=20))).collect())
    };
    for _ in 0..1000 {
        let (a, b, c) = (point(&mut rng), point(&mut rng), point(&mut rng));
        let exact = distance(&a, &b).unwrap().cmp(&distance(&a, &c).unwrap());
        let norm = |x: &Point, y: &Point| -> f64 {
            let (x, y) = (x.as_coords().unwrap(), y.as_coords().unwrap());
            x.iter()
                .zip(y)
                .map(|(u, v)| {
                    let t = deliberation::rational::to_f64(&(u - v));
                    t * t
                })
                .sum::<f64>()
                .sqrt()
        };
        let approx = norm(&a, &b).partial_cmp(&norm(&a, &c)).unwrap();
        assert_eq!(exact, approx);
    }
}
