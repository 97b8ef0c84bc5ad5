//! Independent Set to hypercube unanimity, and 3-SAT to Euclidean score.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, ratio, Rational};
use crate::solvers::{solve_euc_subsets, solve_hyp_bruteforce, SolverConfig};
use crate::space::{Agent, BitPoint, DeliberationSpace, Point, SpaceKind};

/// Simple undirected graph on vertices `0..vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Graph> {
        let mut seen = std::collections::BTreeSet::new();
        for &(u, v) in &edges {
            if u >= vertices || v >= vertices {
                return Err(Error::Parse(format!("edge ({u},{v}) leaves the vertex range")));
            }
            if u == v {
                return Err(Error::Parse(format!("self-loop at vertex {}", u + 1)));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Parse(format!("repeated edge ({},{})", u + 1, v + 1)));
            }
        }
        Ok(Graph { vertices, edges })
    }

    /// An independent set of size `size`, smallest in colex order.
    pub fn independent_set(&self, size: usize) -> Option<Vec<usize>> {
        let n = self.vertices;
        (0u64..1 << n)
            .filter(|m| m.count_ones() as usize == size)
            .find(|&m| self.edges.iter().all(|&(u, v)| m >> u & 1 == 0 || m >> v & 1 == 0))
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
    }
}

/// Reads `p <vertices> <edges>` then one `u v` pair per line, 1-indexed.
/// Lines starting with `c` or `#` are comments.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::Parse(format!("line {}: bad number {s:?}", no + 1)))
        };
        if fields[0] == "p" {
            let nums: Vec<&str> = fields[1..].iter().copied().filter(|f| *f != "edge").collect();
            if header.is_some() || nums.len() != 2 {
                return Err(Error::Parse(format!("line {}: bad header", no + 1)));
            }
            header = Some((num(nums[0])?, num(nums[1])?));
            continue;
        }
        let (n, _) = header.ok_or_else(|| Error::Parse("edge before header".into()))?;
        if fields.len() != 2 {
            return Err(Error::Parse(format!("line {}: expected two vertices", no + 1)));
        }
        let (u, v) = (num(fields[0])?, num(fields[1])?);
        if u == 0 || v == 0 || u > n || v > n {
            return Err(Error::Parse(format!("line {}: vertex out of range", no + 1)));
        }
        edges.push((u - 1, v - 1));
    }
    let (n, m) = header.ok_or_else(|| Error::Parse("missing header".into()))?;
    if edges.len() != m {
        return Err(Error::Parse(format!("header promises {m} edges, found {}", edges.len())));
    }
    Graph::new(n, edges)
}

/// CNF over variables `1..=vars`; literals are signed variable numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl Cnf {
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    /// A satisfying assignment, by enumeration.
    pub fn solve(&self) -> Option<Vec<bool>> {
        (0u64..1 << self.vars)
            .map(|m| (0..self.vars).map(|i| m >> i & 1 == 1).collect::<Vec<_>>())
            .find(|a| self.satisfied_by(a))
    }
}

/// Reads DIMACS CNF.
pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let f: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || f.len() != 4 || f[1] != "cnf" {
                return Err(Error::Parse(format!("line {}: bad header", no + 1)));
            }
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {}: bad number {s:?}", no + 1)))
            };
            header = Some((parse(f[2])?, parse(f[3])?));
            continue;
        }
        let (vars, _) = header.ok_or_else(|| Error::Parse("clause before header".into()))?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad literal {tok:?}", no + 1)))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(Error::Parse(format!("line {}: empty clause", no + 1)));
                }
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > vars {
                return Err(Error::Parse(format!("line {}: variable {lit} out of range", no + 1)));
            } else {
                current.push(lit);
            }
        }
    }
    let (vars, count) = header.ok_or_else(|| Error::Parse("missing header".into()))?;
    if !current.is_empty() {
        return Err(Error::Parse("last clause is not terminated by 0".into()));
    }
    if clauses.len() != count {
        return Err(Error::Parse(format!(
            "header promises {count} clauses, found {}",
            clauses.len()
        )));
    }
    Ok(Cnf { vars, clauses })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionSource {
    IndependentSet { graph: Graph, kappa: usize },
    Sat(Cnf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionTarget {
    /// Some proposal is approved by every agent.
    Unanimous,
    /// Some proposal has at least this score.
    ScoreAtLeast(Rational),
}

#[derive(Clone, Debug)]
pub struct ReductionCertificate {
    pub source: ReductionSource,
    pub space: DeliberationSpace,
    pub target: ReductionTarget,
    /// Name of each dimension.
    pub dimensions: Vec<String>,
    /// Named integer constants of the construction.
    pub constants: Vec<(&'static str, i64)>,
}

/// Builds the hypercube instance whose unanimous proposals encode
/// independent sets of size `kappa`. The auxiliary block has
/// `2 max(kappa, 2) - 1` always-one dimensions, so `d = 2m + 2kappa - 1`
/// for `kappa >= 2` and `2m + 3` for `kappa = 1`.
pub fn reduce_is_to_hyp(graph: &Graph, kappa: usize) -> Result<ReductionCertificate> {
    let m = graph.vertices;
    if kappa < 1 || kappa > m {
        return Err(Error::OutOfDomain(format!("kappa = {kappa} outside 1..={m}")));
    }
    let kp = kappa.max(2);
    let a_len = 2 * kp - 1;
    let d = 2 * m + a_len;
    let x = |i: usize| i;
    let xp = |i: usize| m + i;
    let a: Vec<usize> = (0..a_len).map(|t| 2 * m + t).collect();

    let mut dimensions: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    dimensions.extend((1..=m).map(|i| format!("x{i}'")));
    dimensions.push("a0".into());
    for j in 1..kp {
        dimensions.push(format!("a{j}"));
        dimensions.push(format!("a{j}'"));
    }

    let mut rights: Vec<Vec<usize>> = Vec::new();
    for t in 0..a_len {
        let others: Vec<usize> = a.iter().copied().filter(|&v| v != a[t]).collect();
        let (b, c) = others.split_at(kp - 1);
        let mut r1: Vec<usize> = (0..m).map(xp).collect();
        r1.push(a[t]);
        r1.extend_from_slice(c);
        rights.push(r1);
        let mut r2: Vec<usize> = (0..m).map(x).collect();
        r2.push(a[t]);
        r2.extend_from_slice(b);
        rights.push(r2);
    }
    let rest_right: Vec<usize> = (1..kp).map(|j| a[2 * j]).collect();
    for i in 0..m {
        for (same_left, other_left) in [(true, true), (true, false), (false, true), (false, false)] {
            let mut r = vec![a[0]];
            r.extend_from_slice(&rest_right);
            r.push(if same_left { xp(i) } else { x(i) });
            for j in (0..m).filter(|&j| j != i) {
                r.push(if other_left { xp(j) } else { x(j) });
            }
            rights.push(r);
        }
    }
    for &(u, v) in &graph.edges {
        let mut r: Vec<usize> = a[kp - 2..].to_vec();
        r.extend((0..m).filter(|&l| l != u && l != v).map(xp));
        rights.push(r);
    }
    let mut card: Vec<usize> = a[kp + kappa - 1..].to_vec();
    card.extend((0..m).map(x));
    card.extend((0..m).map(xp));
    rights.push(card);

    let positions = rights
        .into_iter()
        .map(|r| Point::Hypercube(BitPoint::from_indices(d, r)))
        .collect();
    let space = DeliberationSpace::unit(SpaceKind::Hypercube, d, positions)?;
    Ok(ReductionCertificate {
        source: ReductionSource::IndependentSet {
            graph: graph.clone(),
            kappa,
        },
        space,
        target: ReductionTarget::Unanimous,
        dimensions,
        constants: vec![
            ("m", m as i64),
            ("kappa", kappa as i64),
            ("aux", a_len as i64),
            ("d", d as i64),
        ],
    })
}

/// The proposal encoding a vertex set: its `x` and `x'` bits plus every
/// auxiliary bit.
pub fn independent_set_proposal(cert: &ReductionCertificate, set: &[usize]) -> Result<Point> {
    let ReductionSource::IndependentSet { graph, .. } = &cert.source else {
        return Err(Error::KindMismatch {
            expected: "independent-set certificate",
            found: "3-SAT certificate",
        });
    };
    let m = graph.vertices;
    let d = cert.space.dim();
    let ones = set
        .iter()
        .flat_map(|&i| [i, m + i])
        .chain(2 * m..d);
    Ok(Point::Hypercube(BitPoint::from_indices(d, ones)))
}

/// Builds the Euclidean instance in `R^{2m}` (dimension `2i` for `x_i`,
/// `2i + 1` for its negation) whose score reaches `eta` exactly when `cnf`
/// is satisfiable. `l` is the number of clauses.
pub fn reduce_3sat_to_euc(cnf: &Cnf) -> Result<ReductionCertificate> {
    let m = cnf.vars;
    if m == 0 {
        return Err(Error::Parse("formula has no variables".into()));
    }
    for (ci, clause) in cnf.clauses.iter().enumerate() {
        let mut vars: Vec<u64> = clause.iter().map(|l| l.unsigned_abs()).collect();
        vars.sort_unstable();
        vars.dedup();
        if clause.len() != 3 || vars.len() != 3 {
            return Err(Error::Parse(format!(
                "clause {} must have exactly three distinct variables",
                ci + 1
            )));
        }
    }
    let l = cnf.clauses.len() as i64;
    let l_prime = l + 1;
    let l_big = 2 * m as i64 * l_prime + 1;
    let eta = m as i64 * l_big + m as i64 * l_prime + l;
    let d = 2 * m;
    let unit = |entries: &[(usize, i64)]| {
        let mut v = vec![Rational::zero(); d];
        for &(i, c) in entries {
            v[i] = int(c);
        }
        Point::Euclidean(v)
    };

    let mut agents = Vec::new();
    for i in 0..m {
        agents.push(Agent::new(unit(&[(2 * i, -1), (2 * i + 1, -1)]), int(l_big)));
    }
    for i in 0..m {
        agents.push(Agent::new(unit(&[(2 * i, 1)]), int(l_prime)));
        agents.push(Agent::new(unit(&[(2 * i + 1, 1)]), int(l_prime)));
    }
    for clause in &cnf.clauses {
        let entries: Vec<(usize, i64)> = clause
            .iter()
            .map(|&lit| {
                let i = lit.unsigned_abs() as usize - 1;
                (if lit > 0 { 2 * i + 1 } else { 2 * i }, -1)
            })
            .collect();
        agents.push(Agent::new(unit(&entries), Rational::one()));
    }
    let space = DeliberationSpace::new(SpaceKind::Euclidean, d, agents)?;
    let mut dimensions = Vec::new();
    for i in 1..=m {
        dimensions.push(format!("x{i}"));
        dimensions.push(format!("~x{i}"));
    }
    Ok(ReductionCertificate {
        source: ReductionSource::Sat(cnf.clone()),
        space,
        target: ReductionTarget::ScoreAtLeast(int(eta)),
        dimensions,
        constants: vec![
            ("m", m as i64),
            ("l", l),
            ("L'", l_prime),
            ("L", l_big),
            ("eta", eta),
        ],
    })
}

/// The proposal encoding an assignment: `1/(7m)` on true literals and
/// `-3/(7m)` on false ones.
pub fn sat_witness_proposal(cert: &ReductionCertificate, assignment: &[bool]) -> Result<Point> {
    let ReductionSource::Sat(cnf) = &cert.source else {
        return Err(Error::KindMismatch {
            expected: "3-SAT certificate",
            found: "independent-set certificate",
        });
    };
    let m = cnf.vars as i64;
    let (t, f) = (ratio(1, 7 * m), ratio(-3, 7 * m));
    let coords = assignment
        .iter()
        .flat_map(|&v| if v { [t.clone(), f.clone()] } else { [f.clone(), t.clone()] })
        .collect();
    Ok(Point::Euclidean(coords))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionCheck {
    /// The source instance is a yes-instance.
    pub source_yes: bool,
    /// The produced space meets its target.
    pub target_yes: bool,
    pub best_score: Rational,
    pub best_proposal: Point,
}

impl ReductionCheck {
    pub fn agrees(&self) -> bool {
        self.source_yes == self.target_yes
    }
}

/// Decides both sides by exhaustive search.
pub fn check_reduction(cert: &ReductionCertificate, config: &SolverConfig) -> Result<ReductionCheck> {
    let source_yes = match &cert.source {
        ReductionSource::IndependentSet { graph, kappa } => graph.independent_set(*kappa).is_some(),
        ReductionSource::Sat(cnf) => cnf.solve().is_some(),
    };
    let report = match cert.target {
        ReductionTarget::Unanimous => solve_hyp_bruteforce(&cert.space, config)?,
        ReductionTarget::ScoreAtLeast(_) => solve_euc_subsets(&cert.space, config)?,
    };
    let target_yes = match &cert.target {
        ReductionTarget::Unanimous => report.best_score == cert.space.total_weight(),
        ReductionTarget::ScoreAtLeast(eta) => report.best_score >= *eta,
    };
    Ok(ReductionCheck {
        source_yes,
        target_yes,
        best_score: report.best_score,
        best_proposal: report.best_proposal,
    })
}
