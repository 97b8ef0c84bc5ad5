//! Subcommand implementations. Each writes `key=value` lines to `out` and
//! returns the exit code.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use deliberation::dynamics::{
    is_successful, run_deliberation_with, step_bound, AdversarialScheduler, CoalitionStructure,
    FirstFoundScheduler, GreedyFastScheduler, RandomScheduler, Record, RunOptions, Scheduler, Trace,
    CSV_HEADER,
};
use deliberation::generators::{
    check_reduction, gen_euc_slow, gen_exp_compromise, gen_hyp_slow, gen_random, parse_dimacs,
    parse_edge_list, reduce_3sat_to_euc, reduce_is_to_hyp, slow_lower_bound, sweep_exp_compromise,
    verify_exp_compromise, Cnf, ExpCompromiseInstance, ExpParams, Graph, ReductionCertificate,
    ReductionSource, ReductionTarget, SlowOracle, TypeMeta,
};
use deliberation::grid::grid_converge;
use deliberation::solvers::{solve_euc_perfect, solve_popular, Method, MethodChoice, SolverConfig};
use deliberation::{rational, BitPoint, DeliberationSpace, Error, Point, Rational, SpaceKind};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::error::{exit, CliError};
use crate::instance::{point_to_value, InstanceFile};
use crate::{
    FamilyArg, GenerateArgs, KindArg, MethodArg, ReduceArgs, SchedulerArg, SimulateArgs, SolveArgs,
    SourceArg, VerifyArgs, WhatArg,
};

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn write_json(path: &Path, v: &Value) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    std::fs::write(path, s).map_err(|e| CliError::io(path, e))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

// ---------------------------------------------------------------- solve

pub fn solve(a: &SolveArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let file = InstanceFile::load(&a.space)?;
    let space = &file.space;
    let mut config = SolverConfig::default();
    if let Some(v) = a.brute_max_d {
        config.brute_max_d = v;
    }
    if let Some(v) = a.ilp_max_n {
        config.ilp_max_n = v;
    }
    if let Some(v) = a.subset_max_positions {
        config.subset_max_positions = v;
    }
    let eta = a.eta.as_deref().map(rational::parse).transpose()?;

    if a.method == MethodArg::PerfectLp {
        if eta.is_some() {
            return Err(CliError::Usage("--eta does not apply to --method perfect-lp".into()));
        }
        let found = solve_euc_perfect(space)?;
        writeln!(out, "method=perfect-lp").ok();
        writeln!(out, "perfect={}", yes_no(found.is_some())).ok();
        let mut report = json!({"method": "perfect-lp", "perfect": found.is_some()});
        if let Some(p) = &found {
            let total = rational::format(&space.total_weight());
            writeln!(out, "score {total} @ {p}").ok();
            writeln!(out, "proposal={p}").ok();
            report["proposal"] = point_to_value(p);
            report["score"] = json!(total);
        }
        if let Some(path) = &a.json {
            write_json(path, &report)?;
        }
        return Ok(exit::OK);
    }

    let choice = match a.method {
        MethodArg::Auto => MethodChoice::Auto,
        MethodArg::Brute => MethodChoice::Fixed(Method::HypBrute),
        MethodArg::Ilp => MethodChoice::Fixed(Method::HypTypeIlp),
        MethodArg::SubsetLp => MethodChoice::Fixed(Method::EucSubsetLp),
        MethodArg::Cells => MethodChoice::Fixed(Method::EucCells),
        MethodArg::Grid => MethodChoice::Fixed(Method::GridFour),
        MethodArg::PerfectLp => unreachable!(),
    };
    let r = solve_popular(space, choice, &config)?;
    let score = rational::format(&r.best_score);
    writeln!(out, "score {score} @ {}", r.best_proposal).ok();
    writeln!(out, "method={}", r.method).ok();
    writeln!(out, "score={score}").ok();
    writeln!(out, "proposal={}", r.best_proposal).ok();
    writeln!(out, "supporters={}", r.supporters.len()).ok();
    writeln!(out, "work={}", r.work_counter).ok();
    let mut report = json!({
        "method": r.method.name(),
        "proposal": point_to_value(&r.best_proposal),
        "score": score,
        "supporters": r.supporters,
        "work": r.work_counter,
    });
    let mut code = exit::OK;
    if let Some(eta) = &eta {
        let met = r.best_score >= *eta;
        writeln!(out, "eta={}", rational::format(eta)).ok();
        writeln!(out, "eta_met={}", yes_no(met)).ok();
        report["eta"] = json!(rational::format(eta));
        report["eta_met"] = json!(met);
        if !met {
            code = exit::ETA_UNMET;
        }
    }
    if let Some(path) = &a.json {
        write_json(path, &report)?;
    }
    Ok(code)
}

// ---------------------------------------------------------------- simulate

fn slow_oracle(file: &InstanceFile) -> Result<SlowOracle, CliError> {
    let missing = || Error::OracleMissing;
    let n = file.metadata.get("n").and_then(Value::as_u64).ok_or_else(missing)? as usize;
    let inst = match file.family() {
        Some("euc-slow") => gen_euc_slow(n)?,
        Some("hyp-slow") => gen_hyp_slow(n)?,
        _ => return Err(missing().into()),
    };
    if inst.space != file.space {
        return Err(CliError::Core(Error::IncompatibleScheduler {
            scheduler: "adversarial",
            kind: file.space.kind().name(),
        }));
    }
    Ok(inst.oracle)
}

/// `Some(true)` when a coalition holds every approver of a popular proposal;
/// `None` when the popular score is out of reach of the solvers.
fn successful(space: &DeliberationSpace, s: &CoalitionStructure) -> Result<Option<bool>, CliError> {
    for c in s.coalitions() {
        if c.members.len() == space.n() && space.approvers(&c.proposal)?.len() == space.n() {
            return Ok(Some(true));
        }
    }
    match solve_popular(space, MethodChoice::Auto, &SolverConfig::default()) {
        Ok(r) => Ok(Some(is_successful(space, s, &r.best_score)?)),
        Err(Error::GuardExceeded { .. }) | Err(Error::WeightOverflow) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    if a.k < 2 {
        return Err(CliError::Usage("--k must be at least 2".into()));
    }
    let file = InstanceFile::load(&a.space)?;
    let space = &file.space;
    let initial = file.initial_structure();

    let trace: Trace = if a.scheduler == SchedulerArg::GridConverge {
        if !matches!(space.kind(), SpaceKind::Grid(_)) {
            return Err(Error::IncompatibleScheduler {
                scheduler: "grid-converge",
                kind: space.kind().name(),
            }
            .into());
        }
        let trace = grid_converge(space, &initial)?;
        if let Some(path) = &a.trace {
            let f = File::create(path).map_err(|e| CliError::io(path, e))?;
            trace.write_csv(BufWriter::new(f)).map_err(|e| CliError::io(path, e))?;
        }
        trace
    } else {
        let oracle;
        let mut scheduler: Box<dyn Scheduler + '_> = match a.scheduler {
            SchedulerArg::First => Box::new(FirstFoundScheduler::default()),
            SchedulerArg::Random => Box::new(RandomScheduler::new(a.seed)),
            SchedulerArg::GreedyFast => {
                if space.kind() != SpaceKind::Euclidean {
                    return Err(Error::IncompatibleScheduler {
                        scheduler: "greedy-fast",
                        kind: space.kind().name(),
                    }
                    .into());
                }
                Box::new(GreedyFastScheduler::default())
            }
            SchedulerArg::Adversarial => {
                oracle = slow_oracle(&file)?;
                Box::new(AdversarialScheduler::new(&oracle))
            }
            SchedulerArg::GridConverge => unreachable!(),
        };
        let mut sink = match &a.trace {
            Some(path) => {
                let f = File::create(path).map_err(|e| CliError::io(path, e))?;
                let mut w = BufWriter::new(f);
                writeln!(w, "{CSV_HEADER}").map_err(|e| CliError::io(path, e))?;
                Some((path.as_path(), w))
            }
            None => None,
        };
        let mut io_error = None;
        let options = RunOptions {
            record: Record::CountOnly,
            ..RunOptions::default()
        };
        let result = run_deliberation_with(space, &initial, scheduler.as_mut(), a.k, &options, &mut |i, step| {
            if let Some((_, w)) = sink.as_mut() {
                if let Err(e) = writeln!(w, "{}", step.csv_row(i)) {
                    io_error = Some(e);
                    return Err(Error::Precondition("trace output failed".into()));
                }
            }
            Ok(())
        });
        if let Some(e) = io_error {
            let path = sink.as_ref().map(|(p, _)| *p).unwrap_or(Path::new("trace"));
            return Err(CliError::io(path, e));
        }
        let trace = result?;
        if let Some((path, mut w)) = sink {
            w.flush().map_err(|e| CliError::io(path, e))?;
        }
        trace
    };

    let success = match successful(space, &trace.final_structure)? {
        Some(b) => yes_no(b),
        None => "unknown",
    };
    writeln!(
        out,
        "steps={} bound2n={} lower={:.4} successful={}",
        trace.step_count,
        step_bound(space, 2),
        slow_lower_bound(space.n()),
        success
    )
    .ok();
    writeln!(out, "scheduler={}", trace.scheduler).ok();
    writeln!(out, "k={}", trace.k).ok();
    if trace.k > 2 {
        writeln!(out, "boundkn={}", step_bound(space, trace.k)).ok();
    }
    writeln!(out, "relabels={}", trace.relabels.len()).ok();
    writeln!(out, "termination={}", trace.termination.name()).ok();
    writeln!(out, "coalitions={}", trace.final_structure.len()).ok();
    Ok(exit::OK)
}

// ---------------------------------------------------------------- generate

fn ones(p: &Point) -> Vec<usize> {
    p.as_bits().map(|b| b.ones().collect()).unwrap_or_default()
}

fn inadmissible(e: Error) -> CliError {
    match e {
        Error::OutOfDomain(_) | Error::EmptyAgentSet | Error::ZeroDimension | Error::DimensionMismatch { .. } => {
            CliError::Core(Error::Inadmissible(e.to_string()))
        }
        e => CliError::Core(e),
    }
}

fn need(v: Option<usize>, flag: &str, family: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for {family}")))
}

pub fn generate(a: &GenerateArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let mut meta = Map::new();
    let file = match a.family {
        FamilyArg::HypSlow | FamilyArg::EucSlow => {
            let name = if a.family == FamilyArg::HypSlow { "hyp-slow" } else { "euc-slow" };
            let n = need(a.n, "n", name)?;
            let inst = if a.family == FamilyArg::HypSlow {
                gen_hyp_slow(n)
            } else {
                gen_euc_slow(n)
            }
            .map_err(inadmissible)?;
            meta.insert("family".into(), json!(name));
            meta.insert("n".into(), json!(n));
            InstanceFile::new(inst.space)
        }
        FamilyArg::ExpCompromise => {
            let d = need(a.d, "d", "exp-compromise")?;
            let inst = gen_exp_compromise(d).map_err(inadmissible)?;
            let p = &inst.params;
            meta.insert("family".into(), json!("exp-compromise"));
            meta.insert("d".into(), json!(p.d));
            meta.insert("d_prime".into(), json!(p.d_prime));
            meta.insert("d_hat".into(), json!(p.d_hat));
            meta.insert("k".into(), json!(p.k));
            meta.insert("alpha".into(), json!(rational::format(&p.alpha)));
            meta.insert("beta".into(), json!(rational::format(&p.beta)));
            meta.insert("gamma".into(), json!(rational::format(&p.gamma)));
            meta.insert(
                "cp_sequence".into(),
                json!(inst.cp_sequence.iter().map(ones).collect::<Vec<_>>()),
            );
            meta.insert("x_star".into(), json!(ones(&inst.x_star)));
            let mut f = InstanceFile::new(inst.space);
            f.structure = Some(inst.initial);
            f
        }
        FamilyArg::Random => {
            let n = need(a.n, "n", "random")?;
            let kind = match a.kind {
                KindArg::Hypercube => SpaceKind::from_name("hypercube"),
                KindArg::Euclidean => SpaceKind::from_name("euclidean"),
                KindArg::Grid => SpaceKind::from_name("grid"),
                KindArg::GridNonneg => SpaceKind::from_name("grid_nonneg"),
            }
            .expect("known kind");
            let d = match (kind, a.d) {
                (SpaceKind::Grid(_), None) => 2,
                (_, d) => need(d, "d", "random")?,
            };
            let space = gen_random(kind, n, d, a.seed, a.range).map_err(inadmissible)?;
            meta.insert("family".into(), json!("random"));
            meta.insert("seed".into(), json!(a.seed));
            meta.insert("range".into(), json!(a.range));
            InstanceFile::new(space)
        }
    };
    let file = InstanceFile { metadata: meta, ..file };
    file.save(&a.out)?;
    writeln!(out, "family={}", file.family().unwrap_or("")).ok();
    writeln!(out, "kind={}", file.space.kind().name()).ok();
    writeln!(out, "agents={}", file.space.n()).ok();
    writeln!(out, "d={}", file.space.dim()).ok();
    if let Some(s) = &file.structure {
        writeln!(out, "coalitions={}", s.len()).ok();
    }
    if let Some(k) = file.metadata.get("k") {
        writeln!(out, "k={k}").ok();
    }
    writeln!(out, "out={}", a.out.display()).ok();
    Ok(exit::OK)
}

// ---------------------------------------------------------------- reduce

fn certificate_value(cert: &ReductionCertificate) -> Value {
    let source = match &cert.source {
        ReductionSource::IndependentSet { graph, kappa } => json!({
            "type": "indep-set",
            "vertices": graph.vertices,
            "edges": graph.edges.iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>(),
            "kappa": kappa,
        }),
        ReductionSource::Sat(cnf) => json!({
            "type": "3sat",
            "vars": cnf.vars,
            "clauses": cnf.clauses,
        }),
    };
    let target = match &cert.target {
        ReductionTarget::Unanimous => json!({"type": "unanimous"}),
        ReductionTarget::ScoreAtLeast(eta) => json!({"type": "score-at-least", "eta": rational::format(eta)}),
    };
    let constants: Map<String, Value> = cert.constants.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    json!({
        "source": source,
        "target": target,
        "dimensions": cert.dimensions,
        "constants": constants,
    })
}

fn source_from_value(v: &Value) -> Result<ReductionSource, CliError> {
    let bad = |m: &str| CliError::Format(format!("certificate: {m}"));
    let get_usize = |k: &str| v.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| bad(k));
    match v.get("type").and_then(Value::as_str) {
        Some("indep-set") => {
            let edges = v
                .get("edges")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("edges"))?
                .iter()
                .map(|e| {
                    let pair: Vec<usize> = serde_json::from_value(e.clone())?;
                    match pair[..] {
                        [u, w] => Ok((u, w)),
                        _ => Err(bad("edge must be a pair")),
                    }
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(ReductionSource::IndependentSet {
                graph: Graph::new(get_usize("vertices")?, edges)?,
                kappa: get_usize("kappa")?,
            })
        }
        Some("3sat") => Ok(ReductionSource::Sat(Cnf {
            vars: get_usize("vars")?,
            clauses: serde_json::from_value(v.get("clauses").cloned().ok_or_else(|| bad("clauses"))?)?,
        })),
        _ => Err(bad("unknown source type")),
    }
}

fn rebuild(source: &ReductionSource) -> Result<ReductionCertificate, CliError> {
    Ok(match source {
        ReductionSource::IndependentSet { graph, kappa } => reduce_is_to_hyp(graph, *kappa)?,
        ReductionSource::Sat(cnf) => reduce_3sat_to_euc(cnf)?,
    })
}

pub fn reduce(a: &ReduceArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let text = read_text(&a.input)?;
    let cert = match a.from {
        SourceArg::Sat => reduce_3sat_to_euc(&parse_dimacs(&text)?)?,
        SourceArg::IndepSet => {
            let kappa = a
                .kappa
                .ok_or_else(|| CliError::Usage("--kappa is required for indep-set".into()))?;
            reduce_is_to_hyp(&parse_edge_list(&text)?, kappa).map_err(inadmissible)?
        }
    };
    let cert_json = certificate_value(&cert);
    let mut file = InstanceFile::new(cert.space.clone());
    file.metadata.insert("family".into(), json!("reduction"));
    file.metadata.insert("certificate".into(), cert_json.clone());
    file.save(&a.out)?;
    if let Some(path) = &a.cert {
        write_json(path, &cert_json)?;
    }
    let from = match a.from {
        SourceArg::Sat => "3sat",
        SourceArg::IndepSet => "indep-set",
    };
    writeln!(out, "from={from}").ok();
    writeln!(out, "kind={}", cert.space.kind().name()).ok();
    writeln!(out, "d={}", cert.space.dim()).ok();
    writeln!(out, "agents={}", cert.space.n()).ok();
    match &cert.target {
        ReductionTarget::Unanimous => writeln!(out, "target=unanimous").ok(),
        ReductionTarget::ScoreAtLeast(eta) => writeln!(out, "eta={}", rational::format(eta)).ok(),
    };
    writeln!(out, "out={}", a.out.display()).ok();
    Ok(exit::OK)
}

// ---------------------------------------------------------------- verify

pub fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    match a.what {
        WhatArg::ExpCompromise => verify_exp(a, out),
        WhatArg::Trace => verify_trace(a, out),
        WhatArg::Reduction => verify_reduction(a, out),
    }
}

fn fail(out: &mut dyn Write, clause: &str, detail: &str) -> u8 {
    writeln!(out, "result=fail clause={clause}").ok();
    writeln!(out, "detail={detail}").ok();
    exit::FAILURE
}

fn meta_usize(meta: &Map<String, Value>, key: &str) -> Result<usize, CliError> {
    meta.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| CliError::Format(format!("metadata.{key} missing")))
}

fn meta_rational(meta: &Map<String, Value>, key: &str) -> Result<Rational, CliError> {
    let s = meta
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Format(format!("metadata.{key} missing")))?;
    Ok(rational::parse(s)?)
}

fn index_point(d: usize, v: &Value) -> Result<Point, CliError> {
    let idx: Vec<usize> = serde_json::from_value(v.clone())?;
    if idx.iter().any(|&i| i >= d) {
        return Err(CliError::Format("dimension index out of range".into()));
    }
    Ok(Point::Hypercube(BitPoint::from_indices(d, idx)))
}

/// Rebuilds the generator's view of an exp-compromise instance file.
pub fn exp_instance(file: &InstanceFile) -> Result<ExpCompromiseInstance, CliError> {
    let meta = &file.metadata;
    if file.family() != Some("exp-compromise") {
        return Err(CliError::Format("not an exp-compromise instance".into()));
    }
    let params = ExpParams {
        d: meta_usize(meta, "d")?,
        d_prime: meta_usize(meta, "d_prime")?,
        d_hat: meta_usize(meta, "d_hat")?,
        k: meta_usize(meta, "k")?,
        alpha: meta_rational(meta, "alpha")?,
        beta: meta_rational(meta, "beta")?,
        gamma: meta_rational(meta, "gamma")?,
    };
    let d = params.d;
    if file.space.kind() != SpaceKind::Hypercube || file.space.dim() != d {
        return Err(CliError::Format("exp-compromise needs a hypercube of dimension d".into()));
    }
    let cp_sequence = meta
        .get("cp_sequence")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Format("metadata.cp_sequence missing".into()))?
        .iter()
        .map(|v| index_point(d, v))
        .collect::<Result<Vec<_>, _>>()?;
    let x_star = index_point(d, meta.get("x_star").unwrap_or(&Value::Null))?;
    let initial = file
        .structure
        .clone()
        .ok_or_else(|| CliError::Format("exp-compromise needs a structure".into()))?;
    let mut cp_of = vec![0; file.space.n()];
    for (ci, c) in initial.coalitions().iter().enumerate() {
        for &m in &c.members {
            cp_of[m] = ci;
        }
    }
    let types = file
        .space
        .agents()
        .iter()
        .enumerate()
        .map(|(i, a)| TypeMeta {
            cp: cp_of[i],
            special: a.position.as_bits().is_some_and(|b| b.get(d - 1)),
        })
        .collect();
    Ok(ExpCompromiseInstance {
        space: file.space.clone(),
        initial,
        params,
        cp_sequence,
        x_star,
        types,
    })
}

fn verify_exp(a: &VerifyArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let inst = exp_instance(&InstanceFile::load(&a.input)?)?;
    let report = verify_exp_compromise(&inst);
    for c in &report.checks {
        match &c.violation {
            None => writeln!(out, "check{}=pass", c.check).ok(),
            Some(v) => writeln!(out, "check{}=fail:{}", c.check, v.name()).ok(),
        };
    }
    if let Some(v) = report.first_violation() {
        return Ok(fail(out, v.name(), &v.to_string()));
    }
    if a.sweep {
        let s = sweep_exp_compromise(&inst, inst.params.k)?;
        writeln!(out, "sweep_examined={}", s.examined).ok();
        writeln!(out, "sweep_offending={}", s.offending).ok();
        if s.offending > 0 {
            return Ok(fail(out, "sweep", &format!("first offender {}", s.samples[0])));
        }
    }
    writeln!(out, "result=pass").ok();
    Ok(exit::OK)
}

struct Row {
    step: u64,
    ell: usize,
    sizes: Vec<usize>,
    new_size: usize,
    phi_before: Option<BigInt>,
    phi_after: Option<BigInt>,
}

fn parse_row(line: &str) -> Option<Row> {
    let f: Vec<&str> = line.split(',').collect();
    if f.len() != 6 {
        return None;
    }
    let phi = |s: &str| -> Option<Option<BigInt>> {
        if s.is_empty() {
            Some(None)
        } else {
            s.parse().ok().map(Some)
        }
    };
    Some(Row {
        step: f[0].parse().ok()?,
        ell: f[1].parse().ok()?,
        sizes: f[2].split(';').map(|s| s.parse().ok()).collect::<Option<Vec<_>>>()?,
        new_size: f[3].parse().ok()?,
        phi_before: phi(f[4])?,
        phi_after: phi(f[5])?,
    })
}

fn verify_trace(a: &VerifyArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let text = read_text(&a.input)?;
    let space = a.space.as_deref().map(InstanceFile::load).transpose()?.map(|f| f.space);
    let unit = space.as_ref().is_none_or(|s| s.has_unit_weights());
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Ok(fail(out, "header", "first line is not the trace header"));
    }
    let mut prev: Option<Row> = None;
    let mut count = 0u64;
    for (i, line) in lines.enumerate() {
        let at = i as u64 + 1;
        let Some(row) = parse_row(line) else {
            return Ok(fail(out, "format", &format!("row {at}: malformed")));
        };
        let expected_step = prev.as_ref().map_or(1, |p| p.step + 1);
        if row.step != expected_step {
            return Ok(fail(out, "continuity", &format!("row {at}: step {} after {}", row.step, expected_step - 1)));
        }
        if let Some(p) = &prev {
            if p.phi_after != row.phi_before {
                return Ok(fail(out, "continuity", &format!("row {at}: phi_before differs from previous phi_after")));
            }
        }
        if row.ell != row.sizes.len() || row.ell < 2 || row.ell > a.k {
            return Ok(fail(out, "ell", &format!("row {at}: ell {} with k = {}", row.ell, a.k)));
        }
        if row.new_size > row.sizes.iter().sum::<usize>() {
            return Ok(fail(out, "members", &format!("row {at}: new coalition larger than its participants")));
        }
        if unit && row.sizes.iter().any(|&s| s >= row.new_size) {
            return Ok(fail(out, "strictness", &format!("row {at}: new coalition not strictly larger")));
        }
        if a.k == 2 {
            if let (Some(b), Some(af)) = (&row.phi_before, &row.phi_after) {
                if *af < b + 1 {
                    return Ok(fail(out, "potential", &format!("row {at}: phi {b} -> {af}")));
                }
            }
        }
        count += 1;
        prev = Some(row);
    }
    if let Some(s) = &space {
        let bound = step_bound(s, a.k);
        if BigInt::from(count) > bound {
            return Ok(fail(out, "bound", &format!("{count} steps exceed {bound}")));
        }
    }
    writeln!(out, "rows={count}").ok();
    writeln!(out, "result=pass").ok();
    Ok(exit::OK)
}

fn verify_reduction(a: &VerifyArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let file = InstanceFile::load(&a.input)?;
    let cert_v = file
        .metadata
        .get("certificate")
        .ok_or_else(|| CliError::Format("metadata.certificate missing".into()))?;
    let source = source_from_value(cert_v.get("source").unwrap_or(&Value::Null))?;
    let cert = rebuild(&source)?;
    if cert.space != file.space || certificate_value(&cert) != *cert_v {
        return Ok(fail(out, "certificate", "instance does not match the embedded certificate"));
    }
    let check = check_reduction(&cert, &SolverConfig::default())?;
    writeln!(out, "source={}", yes_no(check.source_yes)).ok();
    writeln!(out, "target={}", yes_no(check.target_yes)).ok();
    writeln!(out, "best_score={}", rational::format(&check.best_score)).ok();
    match &cert.target {
        ReductionTarget::Unanimous => writeln!(out, "unanimous: {}", yes_no(check.target_yes)).ok(),
        ReductionTarget::ScoreAtLeast(_) => writeln!(out, "score ≥ η: {}", yes_no(check.target_yes)).ok(),
    };
    if !check.agrees() {
        return Ok(fail(out, "biconditional", "source and target answers differ"));
    }
    writeln!(out, "result=pass").ok();
    Ok(exit::OK)
}
