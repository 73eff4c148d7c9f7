use std::process::ExitCode;
use std::time::{Duration, Instant};

use jwphase::decompose::{
    appendix_b_check, vertex_magic_report, phase_space_columns, robustness, robustness_of_magic, stabilizer_columns,
};
use jwphase::graphs::{independence_number, signed_rank_search, Graph, SignSearch, SignedBipartiteGraph};
use jwphase::oracle::{
    apply_measurement, dense_input, exact_distribution, from_pauli_vector, pauli_coefficients, random_density,
    CliffordUnitary,
};
use jwphase::pauli::{Gate, IsotropicSubspace, PauliPoint, PhasedPauli, DEFAULT_STABILIZER_CAP};
use jwphase::phasespace::{
    build_phase_space, count_isotropics_containing, f_counting, find_vertex_signs, inclusion_graph,
    jordan_wigner_majoranas, make_theorem2_operator, scan_vertex_signs, stabilizers, table_row, PhasePointOperator,
    PhaseSpaceConfig, SignStrategy, Theorem2Label,
};
use jwphase::scalar::{rat_int, Rational};
use jwphase::simulate::{estimate_distribution, injection_circuit, CanonicalState, Circuit, NamedState, Preparation};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TV_TOL: f64 = 0.02;
const SHOTS: u64 = 100_000;
const FLOAT_STEP_TOL: f64 = 1e-9;
const LP_TOL: f64 = 1e-6;
const CERT_TOL: f64 = 1e-8;
const MIN_STEPS: usize = 1000;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn counting_table() -> Check {
    let start = Instant::now();
    let expected: [&[u64]; 5] = [&[1], &[3, 3], &[15, 9, 15], &[105, 45, 45, 105], &[945, 315, 225, 315, 945]];
    for (i, want) in expected.iter().enumerate() {
        let n = i + 1;
        let (row, floor) = table_row(n).map_err(|e| e.to_string())?;
        let got: Vec<u64> = row.iter().map(|v| v.to_u64().unwrap()).collect();
        ensure(got == *want, || format!("n={n}: {got:?}"))?;
        ensure(floor.to_u64() == Some((1 << n) - 1), || format!("n={n}: floor {floor}"))?;
        ensure(got.iter().all(|v| *v >= (1 << n) - 1), || format!("n={n}: entry below 2^n-1"))?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok("15 entries and the 2^n-1 column match".into())
}

fn one_qubit_vertices() -> Check {
    let start = Instant::now();
    let scan = scan_vertex_signs(1, DEFAULT_STABILIZER_CAP).map_err(|e| e.to_string())?;
    ensure(scan.len() == 8, || format!("{} sign choices", scan.len()))?;
    for (eta, r) in &scan {
        let r = r.as_ref().ok_or_else(|| format!("{eta:?} outside Lambda"))?;
        ensure(r.min == rat_int(0) && r.rank == 3 && r.is_vertex, || format!("{eta:?}: {r:?}"))?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok("8/8 in Lambda with min overlap 0 and rank 3".into())
}

/// Matchings of `k` edges in `K_m`, by brute force over edge subsets.
fn complete_graph_matchings(m: usize, k: usize) -> usize {
    let edges: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    (0u32..1 << edges.len())
        .filter(|s| s.count_ones() as usize == k)
        .filter(|s| {
            let mut used = 0u32;
            edges.iter().enumerate().filter(|(i, _)| s >> i & 1 == 1).all(|(_, &(a, b))| {
                let free = used & (1 << a | 1 << b) == 0;
                used |= 1 << a | 1 << b;
                free
            })
        })
        .count()
}

fn two_qubit_vertices() -> Check {
    let start = Instant::now();
    let stabs = stabilizers(2, DEFAULT_STABILIZER_CAP).map_err(|e| e.to_string())?;
    ensure(stabs.len() == 60, || format!("{} stabilizer states", stabs.len()))?;
    let scan = scan_vertex_signs(2, DEFAULT_STABILIZER_CAP).map_err(|e| e.to_string())?;
    let vertices: Vec<_> = scan
        .iter()
        .filter_map(|(eta, r)| r.as_ref().filter(|r| r.is_vertex).map(|r| (eta, r)))
        .collect();
    let (eta, r) = vertices.first().ok_or("no vertex among 1024 sign choices")?;
    let matchings = complete_graph_matchings(5, 2);
    ensure(r.rank == 15, || format!("rank {}", r.rank))?;
    ensure(r.min >= rat_int(0), || format!("min {}", r.min))?;
    ensure(r.orthogonal.len() == matchings && matchings == 15, || {
        format!("{} orthogonal vs {matchings} matchings", r.orthogonal.len())
    })?;
    within(start.elapsed(), Duration::from_secs(60))?;
    let eta: String = eta.iter().map(|b| if *b { '1' } else { '0' }).collect();
    Ok(format!(
        "{} of 1024 sign choices are vertices; eta={eta}: rank 15, 15 orthogonal = near-perfect matchings of K_5",
        vertices.len()
    ))
}

fn counting() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    for n in 1..=3 {
        let maj = jordan_wigner_majoranas(2 * n + 1);
        for idx in 1..1usize << (2 * n) {
            let a = PauliPoint::from_index(idx, n);
            let (m, count) = count_isotropics_containing(a, &maj, DEFAULT_STABILIZER_CAP).map_err(|e| e.to_string())?;
            let f = f_counting(n, m).map_err(|e| e.to_string())?;
            ensure(f == count.into(), || format!("n={n} {}: {count} vs f={f}", a.to_letters(n)))?;
            checked += 1;
        }
        let eta = vec![false; Theorem2Label::support_size(n)];
        let (g, rights) = inclusion_graph(&maj, &eta, DEFAULT_STABILIZER_CAP).map_err(|e| e.to_string())?;
        for j in 0..rights.len() {
            let d = g.edges.iter().filter(|(_, r, _)| *r == j).count();
            ensure(d == (1 << n) - 1, || format!("n={n}: right vertex {j} has degree {d}"))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{checked} points agree with f(n,m); right degrees 2^n-1"))
}

fn independence() -> Check {
    let start = Instant::now();
    for n in 1..=4 {
        let (l, _) = Graph::complete(2 * n + 1).line_graph();
        let a = independence_number(&l, 64).map_err(|e| e.to_string())?;
        ensure(a == n, || format!("alpha(L(K_{})) = {a}", 2 * n + 1))?;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok("alpha(L(K_{2n+1})) = n for n = 1..4".into())
}

fn random_circuit(seed: u64, n: usize, magic: &[usize]) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = format!("qubits {n}\n");
    for q in 0..n {
        let state = if magic.contains(&q) {
            "H"
        } else {
            ["0", "1", "+", "-", "+i", "-i"][rng.random_range(0..6)]
        };
        text.push_str(&format!("state {state} {q}\n"));
    }
    let mut labels = 0;
    for _ in 0..10 {
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n)) % n;
        match rng.random_range(0..4) {
            0 => {
                let g = ["H", "S", "SX", "Sdg"][rng.random_range(0..4)];
                text.push_str(&format!("gate {g} {a}"));
                if labels > 0 && rng.random_bool(0.3) {
                    text.push_str(&format!(" if m{}", rng.random_range(0..labels)));
                }
                text.push('\n');
            }
            1 => text.push_str(&format!("gate {} {a} {b}\n", ["CX", "CZ"][rng.random_range(0..2)])),
            _ if labels < 4 => {
                let p: String = (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)]).collect();
                let p = if p.chars().all(|c| c == 'I') { "Z".repeat(n) } else { p };
                text.push_str(&format!("measure {p} -> m{labels}\n"));
                labels += 1;
            }
            _ => text.push_str(&format!("gate H {a}\n")),
        }
    }
    if labels == 0 {
        text.push_str(&format!("measure {} -> m0\n", "X".repeat(n)));
    }
    Circuit::parse(&text).expect("generated circuit parses")
}

fn simulation() -> Check {
    let start = Instant::now();
    let circuits = [
        ("injection", injection_circuit(NamedState::H)),
        ("random-2q", random_circuit(11, 2, &[0])),
        ("random-3q", random_circuit(12, 3, &[0, 2])),
    ];
    let mut report = Vec::new();
    for (name, c) in &circuits {
        let prep = Preparation::<f64>::nonnegative(c, &PhaseSpaceConfig::line_graph())
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(prep.is_nonnegative(), || format!("{name}: negative weights"))?;
        let exact = exact_distribution(&dense_input::<f64>(c).map_err(|e| e.to_string())?, c)
            .map_err(|e| e.to_string())?;
        let est = estimate_distribution(&prep, c, SHOTS, 2026).map_err(|e| e.to_string())?;
        let tv = est.total_variation(&exact);
        ensure(tv <= TV_TOL, || format!("{name}: TV {tv:.4}"))?;
        report.push(format!("{name} TV={tv:.4}"));
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(report.join(", "))
}

fn random_gate<R: Rng>(n: usize, rng: &mut R) -> Gate {
    let q = rng.random_range(0..n);
    let r = (q + rng.random_range(1..n.max(2))) % n;
    match rng.random_range(0..if n > 1 { 9 } else { 6 }) {
        0 => Gate::H(q),
        1 => Gate::S(q),
        2 => Gate::Sdg(q),
        3 => Gate::SX(q),
        4 => Gate::X(q),
        5 => Gate::Z(q),
        6 => Gate::CX(q, r),
        7 => Gate::CZ(q, r),
        _ => Gate::Swap(q, r),
    }
}

fn random_pauli<R: Rng>(n: usize, rng: &mut R) -> PhasedPauli {
    let p = PhasedPauli::from_point(n, PauliPoint::from_index(rng.random_range(1..1usize << (2 * n)), n));
    if rng.random_bool(0.5) {
        p.neg()
    } else {
        p
    }
}

fn initial_states() -> Result<Vec<PhasePointOperator>, String> {
    let e = |e: jwphase::Error| e.to_string();
    let one = build_phase_space(1, &PhaseSpaceConfig::line_graph()).map_err(e)?.operators;
    let two = build_phase_space(2, &PhaseSpaceConfig::line_graph()).map_err(e)?.operators;
    let zero = PhasePointOperator::from_projector(&IsotropicSubspace::computational(1, &[false]));
    let mut pool = one;
    pool.extend(two.iter().step_by(97).cloned());
    for b in two.iter().skip(13).step_by(331) {
        pool.push(b.tensor(&zero).map_err(e)?);
    }
    let vertex = find_vertex_signs(3, SignStrategy::Random { budget: 256, seed: 3 }, DEFAULT_STABILIZER_CAP)
        .map_err(e)?;
    pool.push(make_theorem2_operator(&Theorem2Label::jordan_wigner(3, vertex.eta)).map_err(e)?);
    Ok(pool)
}

/// Criteria 7 and 8 share one randomized walk.
fn step_walk() -> Result<(usize, usize, Vec<String>), String> {
    let pool = initial_states()?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut steps = 0;
    let mut failures = Vec::new();
    let mut closure_failures = Vec::new();
    for (k, op) in pool.iter().enumerate() {
        let mut exact = CanonicalState::<Rational>::from_operator(op).map_err(|e| e.to_string())?;
        let mut float = CanonicalState::<f64>::from_operator(op).map_err(|e| e.to_string())?;
        let n = exact.n();
        let mut rho = from_pauli_vector(&exact.reconstruct().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let mut rho_f = rho.to_f64();
        for _ in 0..10 {
            if rng.random_bool(0.5) {
                let g = random_gate(n, &mut rng);
                let u = CliffordUnitary::of_gate(&g, n).map_err(|e| e.to_string())?;
                exact = exact.apply_gate(&g).map_err(|e| e.to_string())?;
                float = float.apply_gate(&g).map_err(|e| e.to_string())?;
                rho = u.conjugate(&rho);
                rho_f = u.conjugate(&rho_f);
            } else {
                let a = random_pauli(n, &mut rng);
                let (s, post) = exact.measure_update(&a, &mut rng).map_err(|e| e.to_string())?;
                exact = post;
                rho = apply_measurement(&rho, &a, s)
                    .map_err(|e| e.to_string())?
                    .1
                    .ok_or("sampled a zero-probability outcome")?;
                match float.measure_forced(&a, s) {
                    Ok((_, post)) => {
                        float = post;
                        rho_f = apply_measurement(&rho_f, &a, s).map_err(|e| e.to_string())?.1.ok_or("float zero")?;
                    }
                    Err(e) => failures.push(format!("state {k}: float path {e}")),
                }
            }
            steps += 1;
            if pauli_coefficients(&rho).map_err(|e| e.to_string())? != exact.reconstruct().map_err(|e| e.to_string())? {
                failures.push(format!("state {k} step {steps}: exact mismatch"));
            }
            let diff = pauli_coefficients(&rho_f)
                .map_err(|e| e.to_string())?
                .max_abs_diff(&float.reconstruct().map_err(|e| e.to_string())?);
            if diff > FLOAT_STEP_TOL {
                failures.push(format!("state {k} step {steps}: float diff {diff:e}"));
            }
            if !exact.core_is_line_graph() {
                closure_failures.push(format!("state {k} step {steps}"));
            }
        }
    }
    failures.extend(closure_failures.iter().map(|s| format!("closure: {s}")));
    Ok((steps, closure_failures.len(), failures))
}

fn step_equivalence(walk: &Result<(usize, usize, Vec<String>), String>) -> Check {
    let (steps, _, failures) = walk.as_ref().map_err(Clone::clone)?;
    let oracle: Vec<_> = failures.iter().filter(|f| !f.starts_with("closure")).collect();
    ensure(*steps >= MIN_STEPS, || format!("only {steps} steps"))?;
    ensure(oracle.is_empty(), || format!("{} failures, first: {}", oracle.len(), oracle[0]))?;
    Ok(format!("{steps} steps, exact and float paths agree with the dense oracle"))
}

fn closure(walk: &Result<(usize, usize, Vec<String>), String>) -> Check {
    let (steps, closure_failures, failures) = walk.as_ref().map_err(Clone::clone)?;
    ensure(*closure_failures == 0, || {
        format!(
            "{closure_failures} failures, first: {}",
            failures.iter().find(|f| f.starts_with("closure")).unwrap()
        )
    })?;
    Ok(format!("core frustration graph is a line graph up to twins after all {steps} steps"))
}

/// Maximum matching by brute force over injective maps from the left side.
fn brute_force_matching(left: usize, right: usize, adj: &[u32]) -> usize {
    fn go(row: usize, left: usize, right: usize, adj: &[u32], used: u32) -> usize {
        if row == left {
            return 0;
        }
        let mut best = go(row + 1, left, right, adj, used);
        for c in 0..right {
            if adj[row] >> c & 1 == 1 && used >> c & 1 == 0 {
                best = best.max(1 + go(row + 1, left, right, adj, used | 1 << c));
            }
        }
        best
    }
    go(0, left, right, adj, 0)
}

/// Row multisets: every bipartite graph up to permutation of the left side.
fn sorted_rows(left: usize, right: usize, out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>) {
    if cur.len() == left {
        out.push(cur.clone());
        return;
    }
    let start = cur.last().copied().unwrap_or(0);
    for row in start..1u32 << right {
        cur.push(row);
        sorted_rows(left, right, out, cur);
        cur.pop();
    }
}

fn signed_rank_vs_matching() -> Check {
    let start = Instant::now();
    let mut graphs = 0usize;
    for right in 1..=5 {
        for left in 1..=right {
            let mut family = Vec::new();
            sorted_rows(left, right, &mut family, &mut Vec::new());
            for adj in family {
                let mut edges = Vec::new();
                for (l, row) in adj.iter().enumerate() {
                    edges.extend((0..right).filter(|r| row >> r & 1 == 1).map(|r| (l, r, false)));
                }
                let g = SignedBipartiteGraph::new(left, right, edges).map_err(|e| e.to_string())?;
                let nu = brute_force_matching(left, right, &adj);
                for target in [nu, nu + 1] {
                    if target > left {
                        continue;
                    }
                    let found = match signed_rank_search(&g, target, 1, 0).map_err(|e| e.to_string())? {
                        SignSearch::Found(s) => {
                            ensure(g.with_signs(&s).rank() >= target, || format!("{adj:?}: rank below {target}"))?;
                            true
                        }
                        SignSearch::Fail => false,
                    };
                    ensure(found == (target <= nu), || format!("{adj:?} target {target}: found={found}, nu={nu}"))?;
                }
                graphs += 1;
            }
        }
    }
    Ok(format!("{graphs} bipartite graphs up to 5+5 vertices, no counterexample ({:.1?})", start.elapsed()))
}

fn stirling_bound() -> Check {
    let start = Instant::now();
    let mut worst = f64::INFINITY;
    for n in 6..=60 {
        for m in 1..=n {
            let v = appendix_b_check(n, m).map_err(|e| e.to_string())?;
            ensure(v.holds && v.exceeds_2n, || format!("{v:?}"))?;
            worst = worst.min(v.margin);
        }
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("bound holds for 6 <= n <= 60, all m; smallest margin {worst:.4} bits"))
}

fn robustness_ordering() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let sets: Vec<[Vec<jwphase::pauli::PauliVector<f64>>; 3]> = [1usize, 2]
        .iter()
        .map(|&n| -> Result<_, jwphase::Error> {
            Ok([
                phase_space_columns(&build_phase_space(n, &PhaseSpaceConfig::line_graph())?)?,
                phase_space_columns(&build_phase_space(n, &PhaseSpaceConfig::cnc())?)?,
                stabilizer_columns(n, DEFAULT_STABILIZER_CAP)?,
            ])
        })
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut strict = 0;
    for i in 0..100 {
        let n = 1 + i % 2;
        let rank = rng.random_range(1..=1usize << n);
        let rho = pauli_coefficients(&random_density(n, rank, &mut rng).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let mut values = Vec::new();
        for set in &sets[n - 1] {
            let r = robustness(&rho, set).map_err(|e| e.to_string())?;
            ensure(r.certificate.is_valid(CERT_TOL) && r.dual_gap(&rho, set) <= CERT_TOL, || {
                format!("state {i}: uncertified {:?}", r.certificate)
            })?;
            values.push(r.value);
        }
        ensure(values[0] <= values[1] + LP_TOL && values[1] <= values[2] + LP_TOL, || {
            format!("state {i}: {values:?}")
        })?;
        if values[0] < values[2] - LP_TOL {
            strict += 1;
        }
    }
    Ok(format!("linegraph <= cnc <= stabilizer on 100 states, all duals certified; {strict} strict"))
}

fn vertex_magic() -> Check {
    let mut lines = Vec::new();
    for n in [1usize, 2] {
        let eta = if n == 1 {
            vec![false; 3]
        } else {
            find_vertex_signs(2, SignStrategy::Exhaustive, DEFAULT_STABILIZER_CAP)
                .map_err(|e| e.to_string())?
                .eta
        };
        let r = vertex_magic_report(&Theorem2Label::jordan_wigner(n, eta), DEFAULT_STABILIZER_CAP)
            .map_err(|e| e.to_string())?;
        ensure(r.is_vertex, || format!("n={n}: not a vertex"))?;
        ensure(r.robustness_of_magic.certificate.is_valid(0.0), || format!("n={n}: uncertified"))?;
        let rom = robustness_of_magic(
            &make_theorem2_operator(&Theorem2Label::jordan_wigner(n, r.eta.clone()))
                .and_then(|op| op.to_vector())
                .map_err(|e| e.to_string())?,
            DEFAULT_STABILIZER_CAP,
        )
        .map_err(|e| e.to_string())?;
        ensure(rom.value == r.robustness_of_magic.value, || format!("n={n}: recomputation differs"))?;
        lines.push(format!(
            "n={n}: RoM={} vs n(2n+1)/2+1={} ({:?})",
            r.robustness_of_magic.value, r.bound, r.comparison
        ));
    }
    Ok(format!("report only; {}", lines.join("; ")))
}

fn main() -> ExitCode {
    let walk_start = Instant::now();
    let walk = step_walk();
    let walk_secs = walk_start.elapsed().as_secs_f64();
    let checks: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("table of f(n,m), n <= 5", Box::new(counting_table)),
        ("one-qubit sign choices are Lambda vertices", Box::new(one_qubit_vertices)),
        ("two-qubit sign search finds a vertex", Box::new(two_qubit_vertices)),
        ("isotropic counting consistency, n <= 3", Box::new(counting)),
        ("independence numbers of L(K_{2n+1})", Box::new(independence)),
        ("sampled distributions match the oracle", Box::new(simulation)),
        (
            "step-level oracle equivalence",
            Box::new(|| step_equivalence(&walk).map(|d| format!("{d}; shared walk {walk_secs:.2}s"))),
        ),
        ("line-graph closure of updates", Box::new(|| closure(&walk))),
        ("signed rank search vs matchings", Box::new(signed_rank_vs_matching)),
        ("lower bound on log2(2^n f(n,m))", Box::new(stirling_bound)),
        ("robustness ordering with certificates", Box::new(robustness_ordering)),
        ("robustness of magic of vertices", Box::new(vertex_magic)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
