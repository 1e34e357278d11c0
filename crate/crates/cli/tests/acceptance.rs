//! End-to-end acceptance matrix. Runs without the libtest harness so every
//! criterion prints exactly one PASS or FAIL line; exits nonzero on failure.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use powergraph::centralized::g2mvc_53;
use powergraph::exact::{exact_mds, exact_mds_square, exact_mvc, exact_mvc_square, ExactConfig};
use powergraph::generators::{connected_gnp, random_weights, rng_from_seed};
use powergraph::lowerbound::{
    dangling_transform, gen_mds_base, gen_mds_square_approx_unweighted, gen_mvc_base, gen_mvc_square,
    gen_mwds_square_approx, merged_dangling_transform, verify_family, LowerBoundInstance,
};
use powergraph::mds::{g2mds_logd, g2mds_logd_traced, within_bracket, MdsConfig};
use powergraph::mvc::{effective_epsilon, g2mvc_cc_voting_traced, g2mvc_eps_traced, g2mwvc_eps_traced, RunConfig};
use powergraph::rational::{to_f64, Rational};
use powergraph::sim::Model;
use powergraph::{is_feasible, Graph, ProblemKind};

/// Round budget constants: CONGEST rounds ≤ C1·n/ε′ for the ε-algorithm,
/// clique rounds ≤ C2·(log₂n + 1/ε′) for the voting algorithm.
const C1: f64 = 3.0;
const C2: f64 = 4.0;

type Outcome = Result<String, String>;

fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The ε-algorithm matrix: seed, graph.
fn eps_graphs() -> Vec<(u64, Graph)> {
    (0..50u64)
        .map(|s| {
            let n = 8 + (s % 9) as usize;
            let p = if s % 2 == 0 { 0.2 } else { 0.4 };
            (s, connected_gnp(n, p, 1000 + s))
        })
        .collect()
}

fn epsilons() -> [Rational; 3] {
    [int(1), Rational::new(1, 2), Rational::new(1, 3)]
}

/// Each vertex keeps at most ⌈1/ε⌉ residual neighbors.
fn unweighted_structure(g: &Graph, residual: &[usize], eps: &Rational) -> Result<(), String> {
    let bound = eps.recip().ceil().to_integer() as usize;
    let mut in_u = vec![false; g.n()];
    residual.iter().for_each(|&v| in_u[v] = true);
    for v in 0..g.n() {
        let d = g.neighbors(v).iter().filter(|&&u| in_u[u]).count();
        ensure(d <= bound, || format!("vertex {v} keeps {d} > {bound} residual neighbors"))?;
    }
    Ok(())
}

/// Per weight class of every center, at most ⌈2(1+ε)/ε⌉ residual survivors.
fn weighted_structure(g: &Graph, residual: &[usize], eps: &Rational) -> Result<(), String> {
    let bound = (int(2) * (int(1) + eps) / eps).ceil().to_integer();
    let mut in_u = vec![false; g.n()];
    residual.iter().for_each(|&v| in_u[v] = true);
    for c in 0..g.n() {
        let Some(base) = g.neighbors(c).iter().map(|&u| g.weight(u)).filter(|w| *w > int(0)).min() else {
            continue;
        };
        let mut per_class = std::collections::BTreeMap::<i64, i64>::new();
        for &u in g.neighbors(c).iter().filter(|&&u| in_u[u]) {
            let mut i = 0;
            while base * int(1 << (i + 1)) <= g.weight(u) {
                i += 1;
            }
            *per_class.entry(i).or_default() += 1;
        }
        if let Some((i, s)) = per_class.into_iter().find(|&(_, s)| s > bound) {
            return Err(format!("center {c} class {i} keeps {s} > {bound} survivors"));
        }
    }
    Ok(())
}

fn criterion_1_and_3_unweighted() -> Result<(String, usize), String> {
    let mut runs = 0;
    for (s, g) in eps_graphs() {
        let opt = exact_mvc_square(&g, &ExactConfig::default()).map_err(|e| e.to_string())?.value;
        for eps in epsilons() {
            let cfg = RunConfig { seed: s, ..RunConfig::default() };
            let run = g2mvc_eps_traced(&g, &eps, &cfg).map_err(|e| e.to_string())?;
            ensure(is_feasible(&g, ProblemKind::Vc2, &run.solution.members).unwrap(), || format!("seed {s}: infeasible"))?;
            ensure(run.solution.value <= (int(1) + eps) * opt, || {
                format!("seed {s} ε={eps}: {} > (1+ε)·{opt}", run.solution.value)
            })?;
            ensure(run.stats.violations == 0, || format!("seed {s}: bandwidth violations"))?;
            unweighted_structure(&g, &run.trace.residual, &eps).map_err(|e| format!("seed {s} ε={eps}: {e}"))?;
            runs += 1;
        }
    }
    Ok((format!("{runs} runs within (1+ε)·OPT"), runs))
}

fn criterion_2_and_3_weighted() -> Result<(String, usize), String> {
    let mut runs = 0;
    for (s, g) in eps_graphs() {
        let weights = random_weights(g.n(), 16, &mut rng_from_seed(s));
        let g = g.with_weights(weights).unwrap();
        let opt = exact_mvc_square(&g, &ExactConfig::default()).map_err(|e| e.to_string())?.value;
        for eps in epsilons() {
            let cfg = RunConfig { seed: s, ..RunConfig::default() };
            let run = g2mwvc_eps_traced(&g, &eps, &cfg).map_err(|e| e.to_string())?;
            ensure(is_feasible(&g, ProblemKind::Vc2, &run.solution.members).unwrap(), || format!("seed {s}: infeasible"))?;
            ensure(run.solution.value <= (int(1) + eps) * opt, || {
                format!("seed {s} ε={eps}: {} > (1+ε)·{opt}", run.solution.value)
            })?;
            ensure(run.stats.violations == 0, || format!("seed {s}: bandwidth violations"))?;
            weighted_structure(&g, &run.trace.residual, &eps).map_err(|e| format!("seed {s} ε={eps}: {e}"))?;
            runs += 1;
        }
    }
    Ok((format!("{runs} weighted runs within (1+ε)·OPT"), runs))
}

fn criterion_4() -> Outcome {
    let (mut ok1, mut ok2, mut total) = (0, 0, 0);
    let mut worst = (0.0f64, 0.0f64);
    for s in 0..100u64 {
        let n = 8 + (s % 33) as usize;
        let p = if s % 2 == 0 { 0.15 } else { 0.3 };
        let g = connected_gnp(n, p, 5000 + s);
        let eps = if s % 2 == 0 { Rational::new(1, 2) } else { Rational::new(1, 3) };
        let (l, _) = effective_epsilon(&eps).unwrap();
        let run = g2mvc_eps_traced(&g, &eps, &RunConfig { seed: s, ..RunConfig::with_model(Model::congest()) })
            .map_err(|e| e.to_string())?;
        let r1 = run.stats.rounds as f64 / (n * l) as f64;
        let (vote, _) = g2mvc_cc_voting_traced(&g, &eps, &RunConfig { seed: s, ..RunConfig::with_model(Model::clique()) })
            .map_err(|e| e.to_string())?;
        let r2 = vote.stats.rounds as f64 / ((n as f64).log2() + l as f64);
        ensure(run.stats.violations == 0 && vote.stats.violations == 0, || format!("seed {s}: bandwidth violations"))?;
        ensure(is_feasible(&g, ProblemKind::Vc2, &vote.solution.members).unwrap(), || format!("seed {s}: infeasible"))?;
        ok1 += (r1 <= C1) as usize;
        ok2 += (r2 <= C2) as usize;
        worst = (worst.0.max(r1), worst.1.max(r2));
        total += 1;
    }
    ensure(ok1 * 100 >= 95 * total, || format!("CONGEST budget met on {ok1}/{total}"))?;
    ensure(ok2 * 100 >= 95 * total, || format!("clique budget met on {ok2}/{total}"))?;
    Ok(format!(
        "c1={C1}: {ok1}/{total} (max {:.2}), c2={C2}: {ok2}/{total} (max {:.2}), 0 violations",
        worst.0, worst.1
    ))
}

fn criterion_5(seen: &mut Vec<Graph>) -> Outcome {
    for s in 0..200u64 {
        let n = 2 + (s % 13) as usize;
        let p = [0.25, 0.4, 0.6][(s % 3) as usize];
        let g = connected_gnp(n, p, 9000 + s);
        let (sol, trace) = g2mvc_53(&g);
        let opt = exact_mvc_square(&g, &ExactConfig::default()).map_err(|e| e.to_string())?.value;
        ensure(is_feasible(&g, ProblemKind::Vc2, &sol.members).unwrap(), || format!("seed {s}: infeasible"))?;
        ensure(int(3) * sol.value <= int(5) * opt, || format!("seed {s}: {} > 5/3·{opt}", sol.value))?;
        trace.check_invariants(&g).map_err(|e| format!("seed {s}: {e}"))?;
        seen.push(g);
    }
    Ok("200 graphs within 5/3·OPT, phase invariants hold".into())
}

fn criterion_6(graphs: &[Graph]) -> Outcome {
    let mut checked = 0;
    for g in graphs.iter().filter(|g| g.n() >= 2 && g.is_connected()) {
        let opt = exact_mvc_square(&g.clone().without_weights(), &ExactConfig::default()).map_err(|e| e.to_string())?.value;
        ensure(int(2) * opt >= int(g.n() as i64), || format!("n={} OPT={opt} below n/2", g.n()))?;
        checked += 1;
    }
    Ok(format!("{checked} connected graphs have OPT(G²) ≥ n/2"))
}

fn criterion_7() -> Outcome {
    let eps = Rational::new(1, 4);
    let (mut inside, mut total, mut sampled_in, mut sampled_total, mut phases) = (0, 0, 0, 0, 0);
    for s in 0..20u64 {
        let g = connected_gnp(200, 0.1, 7000 + s);
        let sq = g.square();
        let run = g2mds_logd_traced(&g, &MdsConfig { seed: s, ..MdsConfig::default() }).map_err(|e| e.to_string())?;
        ensure(run.stats.violations == 0, || format!("seed {s}: bandwidth violations"))?;
        ensure(is_feasible(&g, ProblemKind::Ds2, &run.solution.members).unwrap(), || format!("seed {s}: infeasible"))?;
        for phase in &run.phases {
            let mut uncovered = vec![false; g.n()];
            phase.uncovered.iter().for_each(|&v| uncovered[v] = true);
            for v in 0..g.n() {
                let truth = uncovered[v] as usize + sq.neighbors(v).iter().filter(|&&u| uncovered[u]).count();
                let est = &phase.estimates[v];
                inside += within_bracket(est.value(), truth, &eps) as usize;
                total += 1;
                if let Some(x) = est.sampled {
                    sampled_in += within_bracket(x, truth, &eps) as usize;
                    sampled_total += 1;
                }
            }
            phases += 1;
        }
    }
    let frac = inside as f64 / total as f64;
    let sampled = sampled_in as f64 / sampled_total.max(1) as f64;
    ensure(frac >= 0.95, || format!("{inside}/{total} = {frac:.4} estimates in bracket"))?;
    Ok(format!(
        "{inside}/{total} = {frac:.4} of estimates over {phases} phases in (1±1/4)·d; raw sampled {sampled_in}/{sampled_total} = {sampled:.4}"
    ))
}

fn harmonic(k: usize) -> f64 {
    (1..=k).map(|i| 1.0 / i as f64).sum()
}

fn criterion_8(seen: &mut Vec<Graph>) -> Outcome {
    for s in 0..50u64 {
        let n = 2 + (s % 13) as usize;
        let p = [0.2, 0.35, 0.5][(s % 3) as usize];
        let g = connected_gnp(n, p, 3000 + s);
        let (sol, stats) = g2mds_logd(&g, s).map_err(|e| e.to_string())?;
        ensure(is_feasible(&g, ProblemKind::Ds2, &sol.members).unwrap(), || format!("seed {s}: infeasible"))?;
        ensure(stats.violations == 0, || format!("seed {s}: bandwidth violations"))?;
        let opt = to_f64(&exact_mds_square(&g, &ExactConfig::default()).map_err(|e| e.to_string())?.value);
        let delta = g.max_degree();
        let bound = 8.0 * harmonic((delta * delta).max(1)) * opt;
        ensure(sol.len() as f64 <= bound, || format!("seed {s}: {} > {bound:.2}", sol.len()))?;
        seen.push(g);
    }
    Ok("50 runs feasible and within 8·H(Δ²)·OPT".into())
}

fn bits(v: u32, len: usize) -> Vec<bool> {
    (0..len).map(|i| (v >> i) & 1 == 1).collect()
}

fn sweep(name: &str, generate: impl Fn(&[bool], &[bool]) -> powergraph::Result<LowerBoundInstance>) -> Result<String, String> {
    let cfg = ExactConfig::with_cap(400);
    let mut agree = 0;
    for xv in 0..16 {
        for yv in 0..16 {
            let inst = generate(&bits(xv, 4), &bits(yv, 4)).map_err(|e| e.to_string())?;
            let report = verify_family(&inst, &cfg).map_err(|e| e.to_string())?;
            ensure(report.agreement && report.partition_sane && report.cut_within_cap, || {
                format!("{name} x={xv:x} y={yv:x}: {report:?}")
            })?;
            agree += 1;
        }
    }
    Ok(format!("{name} {agree}/256"))
}

fn criterion_9() -> Outcome {
    let parts = [
        sweep("MVC-BASE", |x, y| gen_mvc_base(2, x, y))?,
        sweep("MVC-SQ", |x, y| gen_mvc_square(2, x, y))?,
        sweep("MDS-BASE", |x, y| gen_mds_base(2, x, y))?,
        sweep("MWDS-SQ-APPROX", |x, y| gen_mwds_square_approx(2, 8, 2, x, y, 1))?,
        sweep("MDS-SQ-APPROX", |x, y| gen_mds_square_approx_unweighted(2, 8, 2, x, y, 1))?,
    ];
    Ok(parts.join(", "))
}

/// Connected graphs on `n` vertices, one per isomorphism class.
fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut perms = vec![Vec::<usize>::new()];
    for k in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p| {
                (0..=p.len()).map(move |i| {
                    let mut q = p.clone();
                    q.insert(i, k);
                    q
                })
            })
            .collect();
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &e)| e).collect();
        let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
        if !g.is_connected() {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut e: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v]))).collect();
                e.sort_unstable();
                e
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(g);
        }
    }
    out
}

fn criterion_10(seen: &mut Vec<Graph>) -> Outcome {
    let cfg = ExactConfig::with_cap(200);
    let mut graphs: Vec<Graph> = (1..=6).flat_map(connected_graphs_up_to_iso).collect();
    let enumerated = graphs.len();
    graphs.extend((0..50u64).map(|s| connected_gnp(2 + (s % 7) as usize, 0.4, 4000 + s)));
    for (i, g) in graphs.iter().enumerate() {
        let h = dangling_transform(g, 3, true);
        let lhs = exact_mvc_square(&h, &cfg).map_err(|e| e.to_string())?.value;
        let rhs = exact_mvc(g).map_err(|e| e.to_string())?.value + int(2 * g.m() as i64);
        ensure(lhs == rhs, || format!("graph {i}: MVC(H²) = {lhs}, MVC(G) + 2|E| = {rhs}"))?;
        if g.m() > 0 {
            let h = merged_dangling_transform(g).map_err(|e| e.to_string())?;
            let lhs = exact_mds_square(&h, &cfg).map_err(|e| e.to_string())?.value;
            let rhs = exact_mds(g).map_err(|e| e.to_string())?.value + int(1);
            ensure(lhs == rhs, || format!("graph {i}: MDS(H²) = {lhs}, MDS(G) + 1 = {rhs}"))?;
        }
    }
    seen.extend(graphs.iter().cloned());
    Ok(format!("{enumerated} enumerated + 50 random graphs satisfy both identities"))
}

fn cli(args: &[&str], dir: &Path) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_powergraph"))
        .args(args)
        .current_dir(dir)
        .env_remove("POWERGRAPH_ROUND_CAP")
        .output()
        .map_err(|e| e.to_string())?;
    let mut bytes = out.stdout;
    bytes.extend(out.stderr);
    bytes.extend(out.status.code().unwrap_or(-1).to_string().bytes());
    Ok(bytes)
}

fn criterion_11() -> Outcome {
    let dir = std::env::temp_dir().join(format!("powergraph-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    std::fs::write(dir.join("c5.txt"), "p 5 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 0 4\n").unwrap();
    std::fs::write(dir.join("sol.txt"), "0 1 2\n").unwrap();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["gen", "random", "--n", "12", "--p", "0.3", "--seed", "5", "--weights", "9"],
        vec!["gen", "random", "--model", "tree", "--n", "20", "--seed", "2"],
        vec!["gen", "lb", "--family", "mvc-sq", "--k", "2", "--x", "3", "--y", "5", "--out", "lb.txt"],
        vec!["gen", "lb", "--family", "mwds-sq-approx", "-T", "2", "--x", "1", "--y", "1", "--seed", "4"],
        vec!["run", "--algo", "g2mvc-eps", "--input", "c5.txt", "--eps", "1/2", "--with-opt"],
        vec!["run", "--algo", "g2mvc-cc", "--input", "c5.txt", "--seed", "3"],
        vec!["run", "--algo", "g2mds-logd", "--input", "c5.txt", "--seed", "7", "--with-opt"],
        vec!["run", "--algo", "g2mvc-hybrid", "--input", "c5.txt", "--model", "clique"],
        vec!["run", "--algo", "g2mvc-53", "--input", "c5.txt", "--with-opt"],
        vec!["verify", "--input", "c5.txt", "--solution", "sol.txt", "--kind", "vc2"],
        vec!["run", "--algo", "exact-mvc2", "--input", "missing.txt"],
        vec!["sweep", "--suite", "smoke", "--seeds", "2"],
    ];
    for args in &invocations {
        let first = cli(args, &dir)?;
        let side = std::fs::read(dir.join("lb.txt.json")).unwrap_or_default();
        let second = cli(args, &dir)?;
        let side_again = std::fs::read(dir.join("lb.txt.json")).unwrap_or_default();
        ensure(first == second && side == side_again, || format!("`{}` differs between runs", args.join(" ")))?;
    }
    std::fs::remove_dir_all(&dir).ok();
    Ok(format!("{} invocations byte-identical across two runs", invocations.len()))
}

fn main() {
    let started = Instant::now();
    let mut results: Vec<(u32, Outcome)> = Vec::new();
    let mut connected: Vec<Graph> = eps_graphs().into_iter().map(|(_, g)| g).collect();

    let c1 = criterion_1_and_3_unweighted();
    let c2 = criterion_2_and_3_weighted();
    let c3: Outcome = match (&c1, &c2) {
        (Ok((_, a)), Ok((_, b))) => Ok(format!("Phase I bounds hold on all {} runs", a + b)),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    results.push((1, c1.map(|x| x.0)));
    results.push((2, c2.map(|x| x.0)));
    results.push((3, c3));
    results.push((4, criterion_4()));
    results.push((5, criterion_5(&mut connected)));
    let c7 = criterion_7();
    let c8 = criterion_8(&mut connected);
    let c9 = criterion_9();
    let c10 = criterion_10(&mut connected);
    results.push((6, criterion_6(&connected)));
    results.push((7, c7));
    results.push((8, c8));
    results.push((9, c9));
    results.push((10, c10));
    results.push((11, criterion_11()));
    results.sort_by_key(|r| r.0);

    let mut failed = 0;
    for (id, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {id}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.1}s", results.len() - failed, started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
