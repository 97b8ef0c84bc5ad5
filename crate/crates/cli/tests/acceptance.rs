//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use deliberation::dynamics::{
    find_k_compromise, is_successful, run_deliberation, run_deliberation_with,
    validate_transition, AdversarialScheduler, CoalitionStructure, DeliberativeCoalition,
    FirstFoundScheduler, RandomScheduler, Record, RunOptions, SearchBudget, SearchOutcome,
    Termination, Transition,
};
use deliberation::generators::{
    check_reduction, gen_euc_slow, gen_exp_compromise, gen_random, reduce_3sat_to_euc,
    reduce_is_to_hyp, slow_lower_bound, types_per_cp, verify_exp_compromise, Cnf, Graph,
};
use deliberation::grid::{grid_converge, grid_window_popular};
use deliberation::solvers::{
    solve_euc_cells, solve_euc_perfect, solve_euc_subsets, solve_hyp_bruteforce,
    solve_hyp_popular_via_ilp, solve_popular, MethodChoice, SolverConfig,
};
use deliberation::{rational, DeliberationSpace, GridVariant, Point, SpaceKind};
use num_bigint::BigInt;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let config = SolverConfig::default();
    for seed in 0..200u64 {
        let n = 1 + (seed % 5) as usize;
        let d = 1 + (seed / 5 % 10) as usize;
        let space = gen_random(SpaceKind::Hypercube, n, d, seed, 1).map_err(e)?;
        let brute = solve_hyp_bruteforce(&space, &config).map_err(e)?;
        let ilp = solve_hyp_popular_via_ilp(&space, &config).map_err(e)?;
        ensure(brute.best_score == ilp.best_score, || {
            format!("seed {seed}: brute {} vs ilp {}", brute.best_score, ilp.best_score)
        })?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!("200 instances agree in {:.2}s", took.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let config = SolverConfig::default();
    let mut perfect = 0;
    for seed in 0..200u64 {
        let n = 1 + (seed % 8) as usize;
        let d = 1 + (seed / 8 % 3) as usize;
        let space = gen_random(SpaceKind::Euclidean, n, d, 1000 + seed, 4).map_err(e)?;
        let subsets = solve_euc_subsets(&space, &config).map_err(e)?;
        let cells = solve_euc_cells(&space).map_err(e)?;
        ensure(subsets.best_score == cells.best_score, || {
            format!("seed {seed}: subsets {} vs cells {}", subsets.best_score, cells.best_score)
        })?;
        let lp = solve_euc_perfect(&space).map_err(e)?;
        let full = subsets.best_score == space.total_weight();
        ensure(lp.is_some() == full, || format!("seed {seed}: perfect LP says {}", lp.is_some()))?;
        perfect += usize::from(full);
    }
    Ok(format!("200 instances agree, {perfect} with a perfect proposal"))
}

fn criterion_3() -> Outcome {
    let config = SolverConfig::default();
    let mut steps_total = 0u64;
    for seed in 0..100u64 {
        let n = 2 + (seed % 7) as usize;
        let euclidean = seed % 2 == 1;
        let space = if euclidean {
            gen_random(SpaceKind::Euclidean, n, 1 + (seed / 2 % 3) as usize, seed, 3)
        } else {
            gen_random(SpaceKind::Hypercube, n, 2 + (seed / 2 % 5) as usize, seed, 1)
        }
        .map_err(e)?;
        let start = CoalitionStructure::singletons(&space);
        let trace = run_deliberation(&space, &start, &mut RandomScheduler::new(seed), 2, &RunOptions::default())
            .map_err(|err| format!("seed {seed}: {err}"))?;
        for s in &trace.steps {
            let (b, a) = (s.phi_before.clone().unwrap(), s.phi_after.clone().unwrap());
            ensure(a > b, || format!("seed {seed}: phi {b} -> {a}"))?;
        }
        ensure(BigInt::from(trace.step_count) <= BigInt::from(1u64 << n), || {
            format!("seed {seed}: {} steps exceed 2^{n}", trace.step_count)
        })?;
        ensure(trace.termination == Termination::Terminal, || format!("seed {seed}: run not maximal"))?;
        if euclidean {
            let popular = solve_euc_subsets(&space, &config).map_err(e)?.best_score;
            ensure(is_successful(&space, &trace.final_structure, &popular).map_err(e)?, || {
                format!("seed {seed}: maximal Euclidean run not successful")
            })?;
        }
        steps_total += trace.step_count;
    }
    Ok(format!("100 runs, {steps_total} transitions, all within bounds"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for n in [64usize, 100] {
        let inst = gen_euc_slow(n).map_err(e)?;
        let options = RunOptions {
            record: Record::CountOnly,
            ..RunOptions::default()
        };
        let trace = run_deliberation_with(
            &inst.space,
            &CoalitionStructure::singletons(&inst.space),
            &mut AdversarialScheduler::new(&inst.oracle),
            2,
            &options,
            &mut |_, _| Ok(()),
        )
        .map_err(|err| format!("n={n}: {err}"))?;
        let lower = slow_lower_bound(n);
        ensure(trace.step_count as f64 > lower, || {
            format!("n={n}: {} steps, lower bound {lower:.4}", trace.step_count)
        })?;
        parts.push(format!("n={n}: {} steps > {lower:.4}", trace.step_count));
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(300), || format!("took {took:?}"))?;
    Ok(format!("{} ({:.1}s)", parts.join(", "), took.as_secs_f64()))
}

fn criterion_5() -> Outcome {
    let config = SolverConfig::default();
    let mut cases = 0;
    for v in 1..=4usize {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            let graph = Graph::new(v, edges).map_err(e)?;
            for kappa in (1..=3).filter(|&k| k <= v) {
                let cert = reduce_is_to_hyp(&graph, kappa).map_err(e)?;
                ensure(cert.space.dim() <= 13, || format!("d = {}", cert.space.dim()))?;
                let check = check_reduction(&cert, &config).map_err(e)?;
                ensure(check.agrees(), || format!("graph {v} mask {mask} kappa {kappa}: mismatch"))?;
                cases += 1;
            }
        }
    }
    let clause = |signs: u8| -> Vec<i64> {
        (1..=3).map(|x| if signs >> (x - 1) & 1 == 1 { -x } else { x }).collect()
    };
    let mut formulas: Vec<Vec<Vec<i64>>> = (0..8).map(|a| vec![clause(a)]).collect();
    for a in 0..8 {
        for b in 0..8 {
            formulas.push(vec![clause(a), clause(b)]);
        }
    }
    for clauses in formulas {
        let cnf = Cnf { vars: 3, clauses };
        let cert = reduce_3sat_to_euc(&cnf).map_err(e)?;
        let check = check_reduction(&cert, &config).map_err(e)?;
        ensure(check.agrees(), || format!("{:?}: mismatch", cnf.clauses))?;
        cases += 1;
    }
    Ok(format!("{cases} reductions, zero mismatches"))
}

fn grid_space(variant: GridVariant, pts: &[(i64, i64)]) -> Result<DeliberationSpace, String> {
    DeliberationSpace::unit(SpaceKind::Grid(variant), 2, pts.iter().map(|&(x, y)| Point::Grid(x, y)).collect())
        .map_err(e)
}

fn coalition(members: &[usize], p: (i64, i64)) -> DeliberativeCoalition {
    DeliberativeCoalition::new(members.to_vec(), Point::Grid(p.0, p.1))
}

fn criterion_6() -> Outcome {
    let inst = gen_exp_compromise(28).map_err(e)?;
    let p = &inst.params;
    ensure(p.k == 2 && inst.initial.len() == 3, || format!("k = {}, {} CPs", p.k, inst.initial.len()))?;
    ensure(types_per_cp(p.d_hat) == 162, || "types per CP".into())?;
    for c in inst.initial.coalitions() {
        ensure(c.members.len() == 162, || format!("CP with {} types", c.members.len()))?;
    }
    let report = verify_exp_compromise(&inst);
    ensure(report.checks.len() == 5 && report.passed(), || {
        format!("structural check failed: {:?}", report.first_violation())
    })?;
    let t = Transition::derive(&inst.space, &inst.initial, vec![0, 1, 2], inst.x_star.clone()).map_err(e)?;
    validate_transition(&inst.space, &inst.initial, &t, 3).map_err(|v| format!("X* compromise: {v}"))?;
    let new_weight = inst.space.weight_of(&t.new_coalition);
    for i in 0..inst.initial.len() {
        ensure(new_weight > inst.initial.weight(&inst.space, i), || format!("not heavier than CP {i}"))?;
    }

    let five = grid_space(GridVariant::Full, &[(0, 1), (0, 1), (1, 1), (1, 1), (1, 0)])?;
    let r = solve_popular(&five, MethodChoice::Auto, &SolverConfig::default()).map_err(e)?;
    ensure(r.best_score == rational::int(4) && r.best_proposal == Point::Grid(0, 1), || {
        format!("five players: {} @ {}", r.best_score, r.best_proposal)
    })?;
    let s = CoalitionStructure::new(&five, vec![coalition(&[0, 1], (0, 1)), coalition(&[2, 3, 4], (1, 0))]).map_err(e)?;
    let trace = run_deliberation(&five, &s, &mut FirstFoundScheduler::default(), 2, &RunOptions::default()).map_err(e)?;
    let won = trace
        .final_structure
        .coalitions()
        .iter()
        .any(|c| c.members.len() == 4 && c.proposal == Point::Grid(0, 1));
    ensure(won, || "five players: no coalition of 4 at (0,1)".into())?;

    let nine = grid_space(
        GridVariant::Full,
        &[(0, 1), (-1, 0), (-1, 0), (-1, 1), (-1, 1), (1, 1), (1, 1), (1, 0), (1, 0)],
    )?;
    let s = CoalitionStructure::new(
        &nine,
        vec![coalition(&[1, 2, 3, 4], (-1, 0)), coalition(&[5, 6, 7, 8], (1, 0)), coalition(&[0], (0, 1))],
    )
    .map_err(e)?;
    let budget = SearchBudget::default();
    ensure(find_k_compromise(&nine, &s, 2, &budget).map_err(e)? == SearchOutcome::Terminal, || {
        "nine players: not 2-terminal".into()
    })?;
    let t = Transition::derive(&nine, &s, vec![0, 1, 2], Point::Grid(0, 1)).map_err(e)?;
    validate_transition(&nine, &s, &t, 3).map_err(|v| format!("nine players: {v}"))?;
    ensure(t.new_coalition.len() == 5, || format!("nine players: coalition of {}", t.new_coalition.len()))?;
    Ok("d=28 passes 5 checks with a valid 3-compromise at X*; grid examples exact".into())
}

fn criterion_7() -> Outcome {
    for seed in 0..100u64 {
        let n = 1 + (seed % 20) as usize;
        let variant = if seed % 2 == 0 { GridVariant::NonNegative } else { GridVariant::Full };
        let space = gen_random(SpaceKind::Grid(variant), n, 2, seed, 5).map_err(e)?;
        let trace = grid_converge(&space, &CoalitionStructure::singletons(&space)).map_err(e)?;
        ensure(trace.step_count <= n as u64, || format!("seed {seed}: {} transitions", trace.step_count))?;
        let (best, _) = grid_window_popular(&space).map_err(e)?;
        let largest = (0..trace.final_structure.len())
            .map(|i| trace.final_structure.weight(&space, i))
            .max()
            .unwrap();
        ensure(largest == best, || format!("seed {seed}: final {largest}, popular {best}"))?;
        if variant == GridVariant::NonNegative {
            ensure(trace.steps.iter().all(|s| s.ell == 2), || format!("seed {seed}: used a 3-compromise"))?;
        }
    }
    Ok("100 instances converge optimally within n transitions".into())
}

fn deliberate(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_deliberate"))
        .args(args)
        .output()
        .map_err(e)?;
    ensure(out.status.success(), || {
        format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr).trim())
    })
}

fn run_pipeline(dir: &Path) -> Result<Vec<Vec<u8>>, String> {
    let p = |name: &str| dir.join(name).to_str().unwrap().to_string();
    std::fs::write(p("f.cnf"), "p cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n").map_err(e)?;
    deliberate(&["generate", "--family", "random", "--kind", "euclidean", "--n", "7", "--d", "2", "--seed", "11", "--out", &p("r.json")])?;
    deliberate(&["simulate", "--space", &p("r.json"), "--scheduler", "random", "--seed", "5", "--trace", &p("r.csv")])?;
    deliberate(&["solve", "--space", &p("r.json"), "--json", &p("solve.json")])?;
    deliberate(&["generate", "--family", "euc-slow", "--n", "9", "--out", &p("s.json")])?;
    deliberate(&["simulate", "--space", &p("s.json"), "--scheduler", "adversarial", "--seed", "1", "--trace", &p("s.csv")])?;
    deliberate(&["generate", "--family", "random", "--kind", "grid", "--n", "12", "--seed", "3", "--out", &p("g.json")])?;
    deliberate(&["simulate", "--space", &p("g.json"), "--scheduler", "grid-converge", "--trace", &p("g.csv")])?;
    deliberate(&["generate", "--family", "exp-compromise", "--d", "28", "--out", &p("x.json")])?;
    deliberate(&["reduce", "--from", "3sat", "--in", &p("f.cnf"), "--out", &p("red.json"), "--cert", &p("cert.json")])?;
    ["r.json", "r.csv", "solve.json", "s.json", "s.csv", "g.json", "g.csv", "x.json", "red.json", "cert.json"]
        .iter()
        .map(|f| std::fs::read(dir.join(f)).map_err(e))
        .collect()
}

fn criterion_8() -> Outcome {
    let a = tempfile::tempdir().map_err(e)?;
    let b = tempfile::tempdir().map_err(e)?;
    let first = run_pipeline(a.path())?;
    let second = run_pipeline(b.path())?;
    ensure(first == second, || "outputs differ between identical runs".into())?;
    let bytes: usize = first.iter().map(Vec::len).sum();
    Ok(format!("{} output files, {bytes} bytes, byte-identical", first.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence (hypercube)", criterion_1),
        ("oracle equivalence (euclidean)", criterion_2),
        ("potential law", criterion_3),
        ("slow convergence", criterion_4),
        ("reductions", criterion_5),
        ("exp-compromise and grid examples", criterion_6),
        ("grid convergence", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(msg) => println!("criterion {}: PASS {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
