use std::cmp::Ordering;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use jwphase::decompose::{
    appendix_b_check, vertex_magic_report, decompose_nonnegative, operator_columns, phase_space_columns, robustness,
    stabilizer_columns, Feasibility, RobustnessReport,
};
use jwphase::graphs::{line_graph_root, line_graph_root_up_to_twins, Graph, LineGraphRoot};
use jwphase::oracle::{dense_input, exact_distribution};
use jwphase::pauli::{PauliPoint, PauliVector};
use jwphase::phasespace::{
    build_phase_space, find_vertex_signs, lambda_membership, make_theorem2_operator, scan_vertex_signs, table_row,
    vertex_check, Origin, PhasePointOperator, PhaseSpaceConfig, SignStrategy, Theorem2Label, VertexReport,
};
use jwphase::scalar::{rat_int, Rational, Scalar};
use jwphase::simulate::{estimate_distribution, quasi_estimate, Circuit, Preparation};

use crate::output::Table;
use crate::{Cli, Command};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Verdict {
    Pass = 0,
    Negative = 2,
}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    let negative = e.chain().any(|c| {
        matches!(
            c.downcast_ref::<jwphase::Error>(),
            Some(jwphase::Error::Infeasible | jwphase::Error::NotInLambda(_) | jwphase::Error::BudgetExhausted(_))
        )
    });
    if negative {
        2
    } else {
        1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum SetSelector {
    Stabilizer,
    Cnc,
    LineGraph,
    File(PathBuf),
}

impl SetSelector {
    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "stabilizer" => SetSelector::Stabilizer,
            "cnc" => SetSelector::Cnc,
            "linegraph" => SetSelector::LineGraph,
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => SetSelector::File(p.into()),
                _ => bail!("unknown set {s:?}; expected stabilizer, cnc, linegraph or file:<path>"),
            },
        })
    }

    fn name(&self) -> String {
        match self {
            SetSelector::Stabilizer => "stabilizer".into(),
            SetSelector::Cnc => "cnc".into(),
            SetSelector::LineGraph => "linegraph".into(),
            SetSelector::File(p) => format!("file:{}", p.display()),
        }
    }

    /// Position in the containment chain `linegraph ⊇ cnc ⊇ stabilizer`.
    fn rank(&self) -> Option<u8> {
        match self {
            SetSelector::LineGraph => Some(0),
            SetSelector::Cnc => Some(1),
            SetSelector::Stabilizer => Some(2),
            SetSelector::File(_) => None,
        }
    }

    fn config(&self, cap: usize) -> Result<PhaseSpaceConfig> {
        let base = match self {
            SetSelector::Stabilizer => PhaseSpaceConfig::stabilizer_only(),
            SetSelector::Cnc => PhaseSpaceConfig::cnc(),
            SetSelector::LineGraph => PhaseSpaceConfig::line_graph(),
            SetSelector::File(_) => bail!("operator files cannot seed a sampler; use stabilizer, cnc or linegraph"),
        };
        Ok(PhaseSpaceConfig {
            stabilizer_cap: cap,
            ..base
        })
    }

    fn columns<S: Scalar>(&self, n: usize, cap: usize) -> Result<Vec<PauliVector<S>>> {
        Ok(match self {
            SetSelector::Stabilizer => stabilizer_columns(n, cap)?,
            SetSelector::File(p) => operator_columns(&read_operators(p)?)?,
            _ => phase_space_columns(&build_phase_space(n, &self.config(cap)?)?)?,
        })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    Circuit::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

/// Operators in exchange text, each starting at its own `n=` header.
fn read_operators(path: &Path) -> Result<Vec<PhasePointOperator>> {
    let text = read(path)?;
    let mut chunks: Vec<String> = Vec::new();
    for line in text.lines() {
        if line.trim_start().starts_with("n=") || chunks.is_empty() {
            chunks.push(String::new());
        }
        let chunk = chunks.last_mut().expect("pushed above");
        chunk.push_str(line);
        chunk.push('\n');
    }
    let ops = chunks
        .iter()
        .filter(|c| c.lines().any(|l| !l.split('#').next().unwrap_or("").trim().is_empty()))
        .map(|c| PhasePointOperator::parse(c))
        .collect::<jwphase::Result<Vec<_>>>()
        .with_context(|| format!("in {}", path.display()))?;
    if ops.is_empty() {
        bail!("{} holds no operators", path.display());
    }
    Ok(ops)
}

/// Exact values as `p/q`; floats at fixed precision.
fn num<S: Scalar>(x: &S) -> String {
    if S::is_exact() {
        x.to_string()
    } else {
        let v = x.to_f64();
        format!("{:.9}", if v.abs() < 5e-10 { 0.0 } else { v })
    }
}

fn bits(outcome: &[bool]) -> String {
    outcome.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

fn parse_eta(s: &str, n: usize) -> Result<Vec<bool>> {
    let len = Theorem2Label::support_size(n);
    let eta = s
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => bail!("eta must be a string of 0/1, got {c:?}"),
        })
        .collect::<Result<Vec<_>>>()?;
    if eta.len() != len {
        bail!("eta needs {len} bits for n={n}, got {}", eta.len());
    }
    Ok(eta)
}

fn double_factorial_odd(n: usize) -> u64 {
    (1..=2 * n as u64 + 1).step_by(2).product()
}

pub fn run(cli: &Cli) -> Result<(String, Verdict)> {
    let cap = cli.cap_stabilizers;
    if cap == 0 || cli.budget == 0 {
        bail!("caps and budgets must be positive");
    }
    let (table, verdict) = match &cli.command {
        Command::TableFnm { n_max } => table_fnm(*n_max)?,
        Command::VerifyVertices { eta } => verify_vertices(cli, eta.as_deref())?,
        Command::Simulate {
            circuit,
            oracle,
            compare,
            quasi,
            set,
        } => simulate(cli, circuit, *oracle, *compare, *quasi, set)?,
        Command::Robustness { state, set, exact } => {
            if *exact {
                robustness_cmd::<Rational>(cli, state, set)?
            } else {
                robustness_cmd::<f64>(cli, state, set)?
            }
        }
        Command::Decompose { state, set, exact } => {
            if *exact {
                decompose_cmd::<Rational>(cli, state, set)?
            } else {
                decompose_cmd::<f64>(cli, state, set)?
            }
        }
        Command::LineGraph { graph, twins } => line_graph_cmd(graph, *twins)?,
        Command::StirlingBound { n_min, n_max } => stirling_bound(*n_min, *n_max)?,
        Command::VertexMagic { eta } => vertex_magic(cli, eta.as_deref())?,
        Command::BuildPhaseSpace { set, out } => build_cmd(cli, set, out.as_deref())?,
    };
    Ok((table.render(cli.format), verdict))
}

fn table_fnm(n_max: usize) -> Result<(Table, Verdict)> {
    if n_max == 0 || n_max > 12 {
        bail!("n_max must lie in 1..=12, got {n_max}");
    }
    let mut columns = vec!["n".to_string()];
    columns.extend((1..=n_max).map(|m| format!("m={m}")));
    columns.push("2^n-1".into());
    let mut t = Table::new(columns);
    let mut bounded = true;
    for n in 1..=n_max {
        let (row, floor) = table_row(n)?;
        bounded &= row.iter().all(|v| *v >= floor);
        let mut cells = vec![n.to_string()];
        cells.extend(row.iter().map(|v| v.to_string()));
        cells.extend(std::iter::repeat_n(String::new(), n_max - n));
        cells.push(floor.to_string());
        t.row(cells);
    }
    t.note("all_entries_at_least_2^n-1", bounded);
    Ok((t, if bounded { Verdict::Pass } else { Verdict::Negative }))
}

fn vertex_row(t: &mut Table, eta: &[bool], min: &Rational, report: Option<&VertexReport>) {
    t.row(vec![
        bits(eta),
        (*min >= rat_int(0)).to_string(),
        min.to_string(),
        report.map_or("-".into(), |r| r.orthogonal.len().to_string()),
        report.map_or("-".into(), |r| r.rank.to_string()),
        report.is_some_and(|r| r.is_vertex).to_string(),
    ]);
}

fn verify_vertices(cli: &Cli, eta: Option<&str>) -> Result<(Table, Verdict)> {
    let n = cli.n.unwrap_or(1);
    let cap = cli.cap_stabilizers;
    let mut t = Table::new(["eta", "in_lambda", "min_overlap", "orthogonal", "rank", "vertex"]);
    t.note("n", n);
    t.note("full_rank", (1u64 << (2 * n)) - 1);
    t.note("expected_orthogonal", double_factorial_odd(n));
    let vertices = if let Some(eta) = eta {
        let eta = parse_eta(eta, n)?;
        let op = make_theorem2_operator(&Theorem2Label::jordan_wigner(n, eta.clone()))?;
        let verdict = lambda_membership(&op, cap)?;
        let report = if verdict.member { Some(vertex_check(&op, cap)?) } else { None };
        vertex_row(&mut t, &eta, &verdict.min, report.as_ref());
        t.note("strategy", "single");
        usize::from(report.is_some_and(|r| r.is_vertex))
    } else if n <= 2 {
        let scan = scan_vertex_signs(n, cap)?;
        let mut vertices = 0;
        let mut members = 0;
        for (eta, report) in &scan {
            if let Some(r) = report {
                members += 1;
                vertices += usize::from(r.is_vertex);
                vertex_row(&mut t, eta, &r.min, Some(r));
            }
        }
        t.note("strategy", "exhaustive");
        t.note("tested", scan.len());
        t.note("in_lambda", members);
        vertices
    } else {
        let trial = find_vertex_signs(
            n,
            SignStrategy::Random {
                budget: cli.budget,
                seed: cli.seed,
            },
            cap,
        )?;
        t.note("strategy", format!("random budget={} seed={}", cli.budget, cli.seed));
        vertex_row(&mut t, &trial.eta, &trial.report.min, Some(&trial.report));
        1
    };
    t.note("vertices", vertices);
    Ok((t, if vertices > 0 { Verdict::Pass } else { Verdict::Negative }))
}

fn simulate(cli: &Cli, path: &Path, oracle: bool, compare: bool, quasi: bool, set: &str) -> Result<(Table, Verdict)> {
    let circuit = load_circuit(path)?;
    let labels: Vec<&str> = circuit.labels();
    let exact_f64 = || exact_distribution(&dense_input::<f64>(&circuit)?, &circuit);
    if oracle {
        let mut t = Table::new([labels.join(","), "probability".into()]);
        t.note("mode", "oracle");
        match dense_input::<Rational>(&circuit) {
            Ok(rho) => {
                t.note("arithmetic", "exact");
                for (k, p) in exact_distribution(&rho, &circuit)? {
                    t.row(vec![bits(&k), p.to_string()]);
                }
            }
            Err(_) => {
                t.note("arithmetic", "float");
                for (k, p) in exact_f64()? {
                    t.row(vec![bits(&k), format!("{p:.12}")]);
                }
            }
        }
        return Ok((t, Verdict::Pass));
    }
    let selector = SetSelector::parse(set)?;
    let config = selector.config(cli.cap_stabilizers)?;
    if quasi {
        if labels.len() > 12 {
            bail!("quasi mode enumerates outcomes; {} labels exceed 12", labels.len());
        }
        let prep = Preparation::<f64>::quasi(&circuit, &config)?;
        let mut t = Table::new([labels.join(","), "estimate".into(), "stderr".into()]);
        t.note("mode", "quasi");
        t.note("set", selector.name());
        t.note("seed", cli.seed);
        t.note("shots", cli.shots);
        t.note("one_norm", format!("{:.9}", prep.one_norm()));
        let mut estimates = Vec::new();
        for k in 0..1usize << labels.len() {
            let outcome: Vec<bool> = (0..labels.len()).map(|i| k >> (labels.len() - 1 - i) & 1 == 1).collect();
            let target: Vec<Option<bool>> = outcome.iter().map(|b| Some(*b)).collect();
            let q = quasi_estimate(&prep, &circuit, &target, cli.shots, cli.seed)?;
            t.row(vec![bits(&outcome), format!("{:.6}", q.estimate), format!("{:.6}", q.std_error)]);
            estimates.push((outcome, q.estimate));
        }
        if compare {
            let exact = exact_f64()?;
            let tv: f64 = estimates
                .iter()
                .map(|(k, e)| (e - exact.get(k).copied().unwrap_or(0.0)).abs())
                .sum::<f64>()
                / 2.0;
            t.note("total_variation", format!("{tv:.6}"));
        }
        return Ok((t, Verdict::Pass));
    }
    let prep = Preparation::<f64>::nonnegative(&circuit, &config).map_err(|e| match e {
        jwphase::Error::Infeasible => anyhow::Error::new(e).context(format!(
            "no nonnegative decomposition of the input over the {} set; rerun with --quasi",
            selector.name()
        )),
        e => e.into(),
    })?;
    let est = estimate_distribution(&prep, &circuit, cli.shots, cli.seed)?;
    let mut t = Table::new([labels.join(","), "count".into(), "frequency".into(), "stderr".into()]);
    t.note("mode", "sample");
    t.note("set", selector.name());
    t.note("seed", est.seed);
    t.note("shots", est.shots);
    for (k, c) in &est.counts {
        t.row(vec![
            bits(k),
            c.to_string(),
            format!("{:.6}", est.frequency(k)),
            format!("{:.6}", est.standard_error(k)),
        ]);
    }
    if compare {
        t.note("total_variation", format!("{:.6}", est.total_variation(&exact_f64()?)));
    }
    Ok((t, Verdict::Pass))
}

fn state_vector<S: Scalar>(path: &Path) -> Result<PauliVector<S>> {
    let circuit = load_circuit(path)?;
    circuit
        .input_vector::<S>()
        .with_context(|| format!("input state of {}", path.display()))
}

fn parse_sets(list: &str) -> Result<Vec<SetSelector>> {
    list.split(',').map(|s| SetSelector::parse(s.trim())).collect()
}

fn robustness_cmd<S: Scalar>(cli: &Cli, path: &Path, sets: &str) -> Result<(Table, Verdict)> {
    let rho = state_vector::<S>(path)?;
    let sets = parse_sets(sets)?;
    let mut t = Table::new(["set", "size", "robustness", "negativity", "certificate_residual"]);
    t.note("n", rho.n());
    t.note("arithmetic", if S::is_exact() { "exact" } else { "float" });
    let mut reports: Vec<(SetSelector, RobustnessReport<S>)> = Vec::new();
    for sel in sets {
        let cols = sel.columns::<S>(rho.n(), cli.cap_stabilizers)?;
        let r = robustness(&rho, &cols).with_context(|| format!("set {}", sel.name()))?;
        t.row(vec![
            sel.name(),
            cols.len().to_string(),
            num(&r.value),
            num(&r.decomposition.negativity()),
            format!("{:e}", r.certificate.worst()),
        ]);
        reports.push((sel, r));
    }
    let mut ordered = true;
    for (a, ra) in &reports {
        for (b, rb) in &reports {
            if let (Some(x), Some(y)) = (a.rank(), b.rank()) {
                if x < y && ra.value.to_f64() > rb.value.to_f64() + 1e-6 {
                    ordered = false;
                }
            }
        }
    }
    if reports.iter().filter(|(s, _)| s.rank().is_some()).count() > 1 {
        t.note("ordering_linegraph_le_cnc_le_stabilizer", ordered);
    }
    for (sel, r) in &reports {
        let name = sel.name();
        let weights: Vec<String> = r.decomposition.weights.iter().map(|(id, w)| format!("{id}:{}", num(w))).collect();
        t.note(&format!("{name}.weights"), weights.join(","));
        let dual: Vec<String> = r
            .dual
            .iter()
            .enumerate()
            .filter(|(_, y)| !y.is_negligible())
            .map(|(i, y)| format!("{}:{}", PauliPoint::from_index(i, rho.n()).to_letters(rho.n()), num(y)))
            .collect();
        t.note(&format!("{name}.dual"), dual.join(","));
    }
    Ok((t, if ordered { Verdict::Pass } else { Verdict::Negative }))
}

fn decompose_cmd<S: Scalar>(cli: &Cli, path: &Path, set: &str) -> Result<(Table, Verdict)> {
    let rho = state_vector::<S>(path)?;
    let n = rho.n();
    let sel = SetSelector::parse(set)?;
    let cols = sel.columns::<S>(n, cli.cap_stabilizers)?;
    match decompose_nonnegative(&rho, &cols)? {
        Feasibility::Feasible(d) => {
            let mut t = Table::new(["operator", "weight"]);
            t.note("set", sel.name());
            t.note("feasible", true);
            t.note("weight_sum", num(&d.weight_sum()));
            for (id, w) in &d.weights {
                t.row(vec![id.to_string(), num(w)]);
            }
            Ok((t, Verdict::Pass))
        }
        Feasibility::Infeasible { separating } => {
            let mut t = Table::new(["pauli", "separating"]);
            t.note("set", sel.name());
            t.note("feasible", false);
            for (i, y) in separating.iter().enumerate() {
                if !y.is_negligible() {
                    t.row(vec![PauliPoint::from_index(i, n).to_letters(n), num(y)]);
                }
            }
            Ok((t, Verdict::Negative))
        }
    }
}

fn root_rows(t: &mut Table, g: &Graph, classes: &[Vec<usize>], root: &LineGraphRoot) {
    for (class, (a, b)) in classes.iter().zip(&root.edge_of) {
        let members: Vec<&str> = class.iter().map(|v| g.label(*v)).collect();
        t.row(vec![members.join(","), format!("{a}-{b}")]);
    }
}

fn line_graph_cmd(path: &Path, twins: bool) -> Result<(Table, Verdict)> {
    let g = Graph::parse_edge_list(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    let mut t = Table::new(["vertices", "root_edge"]);
    t.note("vertices", g.vertex_count());
    t.note("edges", g.edge_count());
    let found = if twins {
        line_graph_root_up_to_twins(&g)
    } else {
        line_graph_root(&g).map(|r| ((0..g.vertex_count()).map(|v| vec![v]).collect(), r))
    };
    t.note("up_to_twins", twins);
    t.note("is_line_graph", found.is_some());
    match found {
        Some((classes, root)) => {
            t.note("root_vertices", root.root.vertex_count());
            t.note("classes", classes.len());
            root_rows(&mut t, &g, &classes, &root);
            Ok((t, Verdict::Pass))
        }
        None => Ok((t, Verdict::Negative)),
    }
}

fn stirling_bound(n_min: usize, n_max: usize) -> Result<(Table, Verdict)> {
    if n_min == 0 || n_min > n_max || n_max > 512 {
        bail!("need 1 <= n_min <= n_max <= 512");
    }
    let mut t = Table::new(["n", "m", "lhs", "rhs", "margin", "holds", "exceeds_2n"]);
    let mut ok = true;
    for n in n_min..=n_max {
        for m in 1..=n {
            let v = appendix_b_check(n, m)?;
            ok &= v.holds && (n < 6 || v.exceeds_2n);
            t.row(vec![
                n.to_string(),
                m.to_string(),
                format!("{:.9}", v.lhs),
                format!("{:.9}", v.rhs),
                format!("{:.9}", v.margin),
                v.holds.to_string(),
                v.exceeds_2n.to_string(),
            ]);
        }
    }
    t.note("all_hold", ok);
    Ok((t, if ok { Verdict::Pass } else { Verdict::Negative }))
}

fn vertex_magic(cli: &Cli, eta: Option<&str>) -> Result<(Table, Verdict)> {
    let n = cli.n.unwrap_or(1);
    let eta = match eta {
        Some(s) => parse_eta(s, n)?,
        None if n == 1 => vec![false; 3],
        None => {
            let strategy = if n == 2 {
                SignStrategy::Exhaustive
            } else {
                SignStrategy::Random {
                    budget: cli.budget,
                    seed: cli.seed,
                }
            };
            find_vertex_signs(n, strategy, cli.cap_stabilizers)?.eta
        }
    };
    let r = vertex_magic_report(&Theorem2Label::jordan_wigner(n, eta), cli.cap_stabilizers)?;
    let mut t = Table::new(["quantity", "value"]);
    let comparison = match r.comparison {
        Ordering::Less => "below",
        Ordering::Equal => "equal",
        Ordering::Greater => "above",
    };
    for (k, v) in [
        ("n", r.n.to_string()),
        ("eta", bits(&r.eta)),
        ("is_vertex", r.is_vertex.to_string()),
        ("robustness_of_magic", r.robustness_of_magic.value.to_string()),
        ("bound", r.bound.to_string()),
        ("comparison", comparison.into()),
        ("certificate_residual", format!("{:e}", r.robustness_of_magic.certificate.worst())),
        ("half_norm_sq", format!("{:.9}", r.half_coefficients.norm_sq)),
        ("half_two_point_negativity", format!("{:.9}", r.half_coefficients.negativity)),
        ("norm_sq", format!("{:.9}", r.coefficients.norm_sq)),
        ("two_point_negativity", format!("{:.9}", r.coefficients.negativity)),
    ] {
        t.row(vec![k.into(), v]);
    }
    Ok((t, Verdict::Pass))
}

fn build_cmd(cli: &Cli, set: &str, out: Option<&Path>) -> Result<(Table, Verdict)> {
    let n = cli.n.unwrap_or(1);
    let sel = SetSelector::parse(set)?;
    let space = build_phase_space(n, &sel.config(cli.cap_stabilizers)?)?;
    let mut t = Table::new(["origin", "count"]);
    t.note("n", n);
    t.note("set", sel.name());
    t.note("size", space.len());
    for origin in [Origin::Stabilizer, Origin::Cnc, Origin::Majorana, Origin::Projected] {
        t.row(vec![format!("{origin:?}").to_lowercase(), space.count(origin).to_string()]);
    }
    if let Some(path) = out {
        let text: Vec<String> = space.operators.iter().map(PhasePointOperator::to_text).collect();
        std::fs::write(path, text.join("\n")).with_context(|| format!("writing {}", path.display()))?;
        t.note("written", path.display());
    }
    Ok((t, Verdict::Pass))
}
