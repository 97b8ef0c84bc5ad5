use deliberation::dynamics::{
    apply_transition, enumerate_k_compromises, is_successful, potential, run_deliberation,
    step_bound, AdversarialScheduler, CoalitionStructure, GreedyFastScheduler, RandomScheduler,
    Record, RunOptions, SearchBudget, Termination,
};
use deliberation::generators::{gen_euc_slow, gen_hyp_slow, gen_random, slow_lower_bound};
use deliberation::solvers::{solve_euc_subsets, solve_popular, MethodChoice, SolverConfig};
use deliberation::{DeliberationSpace, SpaceKind};
use num_bigint::BigInt;
use proptest::prelude::*;

fn check_run(space: &DeliberationSpace, k: usize, seed: u64) {
    let start = CoalitionStructure::singletons(space);
    let trace = run_deliberation(space, &start, &mut RandomScheduler::new(seed), k, &RunOptions::default()).unwrap();
    assert!(BigInt::from(trace.step_count) <= step_bound(space, k));
    let mut previous = trace.initial_potential.clone().unwrap();
    for step in &trace.steps {
        assert_eq!(step.phi_before.as_ref(), Some(&previous));
        let after = step.phi_after.clone().unwrap();
        if k == 2 {
            assert!(after > previous);
        }
        previous = after;
    }
    assert_eq!(potential(space, &trace.final_structure).unwrap(), previous);
    assert_eq!(trace.termination, Termination::Terminal);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn partition_is_preserved(n in 2usize..=6, seed in any::<u64>(), k in 2usize..=3) {
        let space = gen_random(SpaceKind::Euclidean, n, 2, seed, 3).unwrap();
        let mut s = CoalitionStructure::singletons(&space);
        let mut pick = seed;
        loop {
            let (found, _) = enumerate_k_compromises(&space, &s, k, &SearchBudget::default()).unwrap();
            if found.is_empty() {
                break;
            }
            pick = pick.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let t = &found[(pick >> 33) as usize % found.len()];
            s = apply_transition(&space, &s, t, k).unwrap();
            let rebuilt = CoalitionStructure::new(&space, s.coalitions().to_vec());
            prop_assert!(rebuilt.is_ok());
            let mut all: Vec<usize> = s.coalitions().iter().flat_map(|c| c.members.clone()).collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn hypercube_runs_obey_the_potential(n in 2usize..=6, d in 2usize..=6, seed in any::<u64>()) {
        let space = gen_random(SpaceKind::Hypercube, n, d, seed, 1).unwrap();
        check_run(&space, 2, seed);
    }

    #[test]
    fn euclidean_runs_end_successful(n in 2usize..=6, d in 1usize..=3, seed in any::<u64>()) {
        let space = gen_random(SpaceKind::Euclidean, n, d, seed, 3).unwrap();
        check_run(&space, 2, seed);
        let start = CoalitionStructure::singletons(&space);
        let trace = run_deliberation(&space, &start, &mut RandomScheduler::new(seed), 2, &RunOptions::default()).unwrap();
        let popular = solve_euc_subsets(&space, &SolverConfig::default()).unwrap().best_score;
        prop_assert!(is_successful(&space, &trace.final_structure, &popular).unwrap());
    }

    #[test]
    fn three_compromise_runs_stay_within_k_to_the_n(n in 2usize..=5, seed in any::<u64>()) {
        let space = gen_random(SpaceKind::Euclidean, n, 2, seed, 3).unwrap();
        check_run(&space, 3, seed);
    }

    #[test]
    fn greedy_fast_is_quick_and_successful(n in 2usize..=6, seed in any::<u64>()) {
        let space = gen_random(SpaceKind::Euclidean, n, 2, seed, 4).unwrap();
        let start = CoalitionStructure::singletons(&space);
        let trace = run_deliberation(&space, &start, &mut GreedyFastScheduler::default(), 2, &RunOptions::default()).unwrap();
        prop_assert!(trace.step_count <= (n * n + 1) as u64);
        let popular = solve_popular(&space, MethodChoice::Auto, &SolverConfig::default()).unwrap().best_score;
        prop_assert!(is_successful(&space, &trace.final_structure, &popular).unwrap());
    }
}

#[test]
fn seeded_runs_are_identical() {
    let space = gen_random(SpaceKind::Hypercube, 6, 5, 11, 1).unwrap();
    let start = CoalitionStructure::singletons(&space);
    let opts = RunOptions { record: Record::Full, ..RunOptions::default() };
    let a = run_deliberation(&space, &start, &mut RandomScheduler::new(5), 2, &opts).unwrap();
    let b = run_deliberation(&space, &start, &mut RandomScheduler::new(5), 2, &opts).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_csv(), b.to_csv());
}

#[test]
fn euclidean_slow_family_is_slow() {
    for n in [4, 9, 16, 25] {
        let inst = gen_euc_slow(n).unwrap();
        let start = CoalitionStructure::singletons(&inst.space);
        let mut sched = AdversarialScheduler::new(&inst.oracle);
        let trace = run_deliberation(&inst.space, &start, &mut sched, 2, &RunOptions::default()).unwrap();
        assert!(trace.step_count as f64 > slow_lower_bound(n), "n={n}");
        assert!(trace.steps.iter().all(|s| s.ell == 2));
        assert_eq!(trace.final_structure.len(), 1);
        assert_eq!(trace.termination, Termination::Terminal);
    }
}

#[test]
fn hypercube_slow_family_runs_to_the_end() {
    for n in [3, 4, 6] {
        let inst = gen_hyp_slow(n).unwrap();
        let start = CoalitionStructure::singletons(&inst.space);
        let mut sched = AdversarialScheduler::new(&inst.oracle);
        let trace = run_deliberation(&inst.space, &start, &mut sched, 2, &RunOptions::default()).unwrap();
        assert!(trace.step_count >= 1);
        assert!(trace.steps.iter().all(|s| s.phi_after > s.phi_before));
        let popular = solve_popular(&inst.space, MethodChoice::Auto, &SolverConfig::default()).unwrap().best_score;
        assert!(is_successful(&inst.space, &trace.final_structure, &popular).unwrap());
    }
}
