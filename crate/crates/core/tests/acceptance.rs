//! Acceptance checks: one PASS/FAIL line per criterion.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use matchroute::cliquecontract::route_via_clique_contraction;
use matchroute::generate;
use matchroute::hconn::{build_port_array, route_hconnected, ConnectedPartition, PortLists};
use matchroute::maxroute::{max_routability, route_within, Mode};
use matchroute::oracle::{enumerate_routings, explore, max_agreements_exact, routing_number_exact, routing_time_exact, MatchingSet, SearchBudget};
use matchroute::reductions::sat::{chain_probe, hexagon_probe, hexagon_side, variable_probe};
use matchroute::reductions::{
    assignment_to_schedule, build_ccpp_instance, build_sat_instance, ccpp_optimum, ccpp_solve_exact, extract_assignment, verify_ccpp_partition,
    CnfFormula,
};
use matchroute::treeroute::{pipeline_fill, route_subset_tree, route_tree, FillEvent, RootedTree, SubsetTask};
use matchroute::twostep::route_in_two;
use matchroute::{apply_matching, verify_schedule, Graph, PebbleConfig, Permutation, Schedule};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn budget() -> SearchBudget {
    SearchBudget::default()
}

fn full_table(g: &Graph) -> matchroute::oracle::RoutingTable {
    explore(g, budget().with_depth(usize::MAX), MatchingSet::All).expect("small graph explores")
}

fn oracle_exactness() -> Check {
    let start = Instant::now();
    let rt = routing_number_exact(&generate::hypercube(3), budget()).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure!(rt == 4, "rt(Q3) = {rt}, expected 4");
    ensure!(took < Duration::from_secs(300), "took {took:?}");
    Ok(format!("rt(Q3) = 4 in {:.1}s", took.as_secs_f64()))
}

fn clique_routing() -> Check {
    for n in 3..=5 {
        let rt = routing_number_exact(&generate::complete(n), budget()).map_err(|e| e.to_string())?;
        ensure!(rt == 2, "rt(K{n}) = {rt}");
    }
    let mut checked = 0;
    for n in 2..=6 {
        for g in generate::connected_graphs(n, true) {
            if g.is_complete() {
                continue;
            }
            let depth = full_table(&g).depth();
            ensure!(depth >= 3, "non-complete graph {:?} has routing number {depth}", g.edges());
            checked += 1;
        }
    }
    Ok(format!("rt(K3..K5) = 2; {checked} non-complete classes (n <= 6) all have some pi with rt >= 3"))
}

fn star_bound() -> Check {
    let mut got = Vec::new();
    for n in 4..=5 {
        let rt = routing_number_exact(&generate::star(n), budget()).map_err(|e| e.to_string())?;
        let want = 3 * (n - 1) / 2;
        ensure!(rt == want, "rt(K_1,{}) = {rt}, expected {want}", n - 1);
        got.push(rt);
    }
    Ok(format!("rt(K_1,3) = {}, rt(K_1,4) = {}", got[0], got[1]))
}

fn atomic_gadgets() -> Check {
    let hex = hexagon_probe();
    let cases = [
        ("P3 pair", generate::path(3), Permutation::transposition(3, 0, 2)),
        ("P4 ends", generate::path(4), Permutation::transposition(4, 0, 3)),
        ("hexagon antipodes", generate::cycle(6), Permutation::transposition(6, 0, 3)),
        ("generated hexagon", hex.graph, hex.perm),
    ];
    for (name, g, pi) in cases {
        let rt = routing_time_exact(&g, &pi, budget()).map_err(|e| e.to_string())?.value;
        ensure!(rt == 3, "{name}: rt = {rt}");
    }
    Ok("P3, P4, C6 and the generated hexagon all have rt = 3".into())
}

fn two_step_decider() -> Check {
    let mut worst = Duration::ZERO;
    let mut count = 0;
    let mut decide = |g: &Graph, pi: &Permutation, rt: usize| -> std::result::Result<(), String> {
        let t = Instant::now();
        let out = route_in_two(g, pi);
        worst = worst.max(t.elapsed());
        count += 1;
        match out {
            Some(s) => {
                ensure!(rt <= 2, "decider routed {:?} on {:?}, rt = {rt}", pi.image(), g.edges());
                ensure!(verify_schedule(g, pi, &s).valid, "invalid schedule for {:?}", pi.image());
            }
            None => ensure!(rt > 2, "decider refused {:?} on {:?}, rt = {rt}", pi.image(), g.edges()),
        }
        Ok(())
    };
    for n in 1..=5 {
        let perms = generate::all_permutations(n);
        for g in generate::connected_graphs(n, false) {
            let table = full_table(&g);
            for pi in &perms {
                decide(&g, pi, table.routing_time(pi).expect("complete table"))?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..240 {
        let n = 6 + i % 2;
        let g = generate::random_connected(n, rng.gen_range(0.2..0.8), &mut rng);
        let pi = generate::random_permutation(n, &mut rng);
        let rt = routing_time_exact(&g, &pi, budget()).map_err(|e| e.to_string())?.value;
        decide(&g, &pi, rt)?;
    }
    ensure!(worst < Duration::from_millis(10), "slowest decision took {worst:?}");
    Ok(format!("{count} instances, 0 disagreements, slowest {:.2} ms", worst.as_secs_f64() * 1e3))
}

fn agreements_of(g: &Graph, pi: &Permutation, s: &Schedule) -> std::result::Result<usize, String> {
    let mut c = PebbleConfig::identity(g.n());
    for (i, m) in s.steps().iter().enumerate() {
        ensure!(!m.is_empty(), "empty step {i}");
        c = apply_matching(g, &c, m).map_err(|e| e.to_string())?;
    }
    Ok(c.agreements(pi))
}

fn maxroute_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut runs = 0;
    for n in 1..=5 {
        let all = generate::all_permutations(n);
        for g in generate::connected_graphs(n, true) {
            let table = full_table(&g);
            for k in 1..=3 {
                let perms: Vec<Permutation> =
                    if all.len() <= 100 { all.clone() } else { (0..100).map(|_| generate::random_permutation(n, &mut rng)).collect() };
                for pi in &perms {
                    let r = max_routability(&g, pi, k, Mode::Exact, budget()).map_err(|e| e.to_string())?;
                    let ma = max_agreements_exact(&g, pi, k, budget()).map_err(|e| e.to_string())?;
                    ensure!(r.m == ma, "mr = {} but oracle says {ma} for {:?} on {:?}, k = {k}", r.m, pi.image(), g.edges());
                    let rt = table.routing_time(pi).expect("complete table");
                    ensure!((r.m == n) == (rt <= k), "mr = {} with rt = {rt}, k = {k}", r.m);
                    ensure!(r.schedule.len() <= k, "schedule longer than k");
                    let placed = agreements_of(&g, pi, &r.schedule)?;
                    ensure!(placed == r.m, "schedule places {placed}, claimed {}", r.m);
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{runs} (graph, k, pi) runs agree with the oracle"))
}

fn port_arrays() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let a = rng.gen_range(1..=8);
        let b = rng.gen_range(1..=8);
        let mut pool: Vec<usize> = (0..a).flat_map(|x| std::iter::repeat_n(x, b)).collect();
        pool.shuffle(&mut rng);
        let lists: Vec<Vec<usize>> = pool.chunks(b).map(<[usize]>::to_vec).collect();
        let arr = build_port_array(&PortLists::new(lists.clone()).map_err(|e| e.to_string())?);
        for (row, list) in arr.rows().iter().zip(&lists) {
            let (mut x, mut y) = (row.clone(), list.clone());
            x.sort_unstable();
            y.sort_unstable();
            ensure!(x == y, "row {row:?} is not a rearrangement of {list:?}");
        }
        for t in 0..b {
            let mut col: Vec<usize> = arr.rows().iter().map(|r| r[t]).collect();
            col.sort_unstable();
            ensure!(col == (0..a).collect::<Vec<_>>(), "column {t} is {col:?}");
        }
    }
    Ok("500 random lists, 0 failures".into())
}

/// Replays a fill trace and checks that every incoming pebble is at its
/// destination or on an even level before each replacement.
fn check_fill(t: &RootedTree) -> std::result::Result<usize, String> {
    let n = t.n();
    let trace = pipeline_fill(t, &(0..n).collect::<Vec<_>>());
    ensure!(trace.replace_count() == n, "{} replacements for {n} vertices", trace.replace_count());
    ensure!(trace.events.len() <= 3 * n + 3, "{} events for k = {n}", trace.events.len());
    let mut at: Vec<Option<usize>> = vec![None; n];
    let mut placed = 0;
    for e in &trace.events {
        match e {
            FillEvent::Replace { vertex, pebble } => {
                ensure!(*vertex == t.root(), "replacement away from the root");
                for v in 0..n {
                    if let Some(j) = at[v] {
                        ensure!(v == trace.destinations[j] || t.level(v) % 2 == 0, "pebble {j} stuck on odd level at {v}");
                    }
                }
                ensure!(at[t.root()].is_none(), "root still holds an incoming pebble");
                ensure!(*pebble == placed, "incoming order");
                at[t.root()] = Some(placed);
                placed += 1;
            }
            FillEvent::Match(m) => {
                m.validate(t.graph())?;
                for &(u, v) in m.pairs() {
                    at.swap(u, v);
                }
            }
        }
    }
    for (j, &d) in trace.destinations.iter().enumerate() {
        ensure!(at[d] == Some(j), "pebble {j} not delivered to {d}");
    }
    Ok(trace.events.len())
}

fn tree_bounds() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_ratio: f64 = 0.0;
    let mut subset_slack = i64::MAX;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=100);
        let g = generate::random_tree(n, &mut rng);
        let t = RootedTree::new(&g, 0).map_err(|e| e.to_string())?;
        let pi = generate::random_permutation(n, &mut rng);
        let s = route_tree(&t, &pi);
        ensure!(verify_schedule(&g, &pi, &s).valid, "invalid tree schedule");
        ensure!(s.len() <= 3 * n, "tree schedule of {} steps for n = {n}", s.len());
        worst_ratio = worst_ratio.max(s.len() as f64 / n as f64);

        let p = rng.gen_range(1..=n);
        let mut src: Vec<usize> = (0..n).collect();
        src.shuffle(&mut rng);
        let mut dst: Vec<usize> = (0..n).collect();
        dst.shuffle(&mut rng);
        let task = SubsetTask::new(src[..p].iter().copied().zip(dst[..p].iter().copied()).collect()).map_err(|e| e.to_string())?;
        let s = route_subset_tree(&t, &task).map_err(|e| e.to_string())?;
        for m in s.steps() {
            m.validate(&g)?;
        }
        ensure!(task.satisfied_by(&s, n), "subset task not completed");
        let bound = task.p() + 2 * task.l(&t);
        ensure!(s.len() <= bound, "subset schedule {} > p + 2l = {bound}", s.len());
        subset_slack = subset_slack.min(bound as i64 - s.len() as i64);

        check_fill(&t)?;
    }
    Ok(format!("1000 trees: worst {worst_ratio:.2}n; subset min slack {subset_slack}; fills within 3k + 3 with the even-level invariant"))
}

fn hconn_fit() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut points: Vec<(usize, f64, f64)> = Vec::new();
    let mut count = 0;
    for family in 0..2 {
        for h in 2..=4 {
            for n in [12, 24, 36, 48, 60] {
                for _ in 0..5 {
                    let (g, blocks) =
                        if family == 0 { generate::clique_with_trees(h, n, &mut rng) } else { generate::partitioned_h_connected(h, n, &mut rng) };
                    let part = ConnectedPartition::from_lines(&g, blocks).map_err(|e| e.to_string())?;
                    let pi = generate::random_permutation(n, &mut rng);
                    let r = route_hconnected(&g, &pi, &part, false).map_err(|e| e.to_string())?;
                    ensure!(verify_schedule(&g, &pi, &r.schedule).valid, "invalid schedule, family {family}, h = {h}, n = {n}");
                    let piped = route_hconnected(&g, &pi, &part, true).map_err(|e| e.to_string())?;
                    ensure!(verify_schedule(&g, &pi, &piped.schedule).valid, "invalid pipelined schedule");
                    let b = (n / h) as f64;
                    points.push((n, (r.port_routing_used() + 2) as f64, r.schedule.len() as f64 / b));
                    count += 1;
                }
            }
        }
    }
    let fit: Vec<&(usize, f64, f64)> = points.iter().filter(|p| p.0 != 12).collect();
    let m = fit.len() as f64;
    let (mx, my) = (fit.iter().map(|p| p.1).sum::<f64>() / m, fit.iter().map(|p| p.2).sum::<f64>() / m);
    let sxy: f64 = fit.iter().map(|p| (p.1 - mx) * (p.2 - my)).sum();
    let sxx: f64 = fit.iter().map(|p| (p.1 - mx).powi(2)).sum();
    let alpha = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let beta_at = |n: usize| points.iter().filter(|p| p.0 == n).map(|p| p.2 - alpha * p.1).fold(f64::MIN, f64::max);
    let betas: Vec<(usize, f64)> = [24, 36, 48, 60].iter().map(|&n| (n, beta_at(n))).collect();
    let mean = betas.iter().map(|b| b.1).sum::<f64>() / betas.len() as f64;
    let shown: Vec<String> = betas.iter().map(|(n, b)| format!("{n}:{b:.2}")).collect();
    let info = format!("alpha = {alpha:.3}, beta_n = [{}], mean {mean:.2} (n = 12: {:.2}, not fitted)", shown.join(" "), beta_at(12));
    ensure!(alpha <= 2.0, "alpha = {alpha:.3} > 2; {info}");
    for (n, b) in &betas {
        ensure!((b - mean).abs() <= 0.2 * mean.abs(), "beta_{n} = {b:.3} is more than 20% from {mean:.3}; {info}");
    }
    Ok(format!("{count} instances valid; {info}"))
}

fn path_perms(kappa: usize, q: usize) -> [Permutation; 2] {
    let n = kappa + q;
    let swap = Permutation::transposition(n, kappa, n - 1);
    let mut rev: Vec<usize> = (0..n).collect();
    rev[kappa - 1..].reverse();
    [swap, Permutation::new(rev).expect("reversal")]
}

fn clique_router_shape() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let route = |kappa: usize, q: usize, pi: &Permutation| -> std::result::Result<usize, String> {
        let g = generate::clique_with_path(kappa, q);
        let r = route_via_clique_contraction(&g, pi, None).map_err(|e| e.to_string())?;
        ensure!(verify_schedule(&g, pi, &r.schedule).valid, "invalid schedule, kappa = {kappa}, q = {q}");
        Ok(r.schedule.len())
    };
    let mut by_kappa = [Vec::new(), Vec::new()];
    for kappa in 4..=8 {
        for (i, pi) in path_perms(kappa, 5).iter().enumerate() {
            by_kappa[i].push(route(kappa, 5, pi)?);
        }
        for _ in 0..20 {
            let pi = generate::random_permutation(kappa + 5, &mut rng);
            route(kappa, 5, &pi)?;
        }
    }
    for lens in &by_kappa {
        let spread = lens.iter().max().unwrap() - lens.iter().min().unwrap();
        ensure!(spread <= 2, "lengths over kappa = 4..8 vary by {spread}: {lens:?}");
    }
    let mut by_q = [Vec::new(), Vec::new()];
    for q in 3..=10 {
        for (i, pi) in path_perms(4, q).iter().enumerate() {
            let len = route(4, q, pi)?;
            ensure!(len <= 3 * q, "length {len} > 3q at q = {q}");
            by_q[i].push(len);
        }
    }
    for lens in &by_q {
        for w in lens.windows(2) {
            ensure!(w[1] <= w[0] + 4, "length jumps from {} to {} when q grows by one: {lens:?}", w[0], w[1]);
        }
    }
    Ok(format!("q = 5, kappa = 4..8: swap {:?}, reversal {:?}; kappa = 4, q = 3..10: swap {:?}, reversal {:?}", by_kappa[0], by_kappa[1], by_q[0], by_q[1]))
}

fn sat_reduction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut formulas = 0;
    while formulas < 20 {
        let f = CnfFormula::random(rng.gen_range(1..=3), rng.gen_range(1..=3), &mut rng);
        if f.brute_force().is_none() {
            continue;
        }
        for chain_len in 1..=2 {
            let inst = build_sat_instance(&f, chain_len).map_err(|e| e.to_string())?;
            for bits in 0u32..1 << f.num_vars() {
                let assign: Vec<bool> = (0..f.num_vars()).map(|i| bits >> i & 1 == 1).collect();
                let s = assignment_to_schedule(&inst, &assign);
                ensure!(s.is_some() == f.satisfied_by(&assign), "schedule existence differs from satisfaction");
                let Some(s) = s else { continue };
                ensure!(s.len() == 3 && verify_schedule(&inst.graph, &inst.perm, &s).valid, "invalid 3-step schedule");
                let back = extract_assignment(&inst, &s).map_err(|e| e.to_string())?;
                ensure!(f.satisfied_by(&back), "extracted assignment does not satisfy");
                let used: Vec<bool> = f.occurrences().iter().map(|o| !o.is_empty()).collect();
                ensure!((0..f.num_vars()).all(|x| !used[x] || back[x] == assign[x]), "round trip changed a used variable");
            }
        }
        formulas += 1;
    }
    let mut forcing = 0;
    for len in 1..=2 {
        for busy in [[true, false], [false, true]] {
            let p = chain_probe(len, busy);
            let far = p.chains[0].corners[if busy[0] { len } else { 0 }];
            let all = enumerate_routings(&p.graph, &p.perm, 3, budget()).map_err(|e| e.to_string())?;
            ensure!(!all.is_empty(), "chain of {len} with one busy end cannot be routed");
            for r in &all {
                ensure!(r.iter().all(|m| m.touches(far)), "a routing of chain {len} leaves the far corner idle");
            }
            forcing += all.len();
        }
        let p = chain_probe(len, [true, true]);
        ensure!(enumerate_routings(&p.graph, &p.perm, 3, budget()).map_err(|e| e.to_string())?.is_empty(), "chain {len} with both ends busy routes");
        let v = variable_probe(2, len);
        let gadget = v.variable.as_ref().expect("variable probe");
        let all = enumerate_routings(&v.graph, &v.perm, 3, budget()).map_err(|e| e.to_string())?;
        let mut sides = HashMap::new();
        for r in &all {
            let c = apply_matching(&v.graph, &PebbleConfig::identity(v.graph.n()), &r[0]).map_err(|e| e.to_string())?;
            let s: Vec<Option<bool>> = gadget.hexagons.iter().map(|h| hexagon_side(h, &c)).collect();
            ensure!(s[0].is_some() && s[0] == s[1], "variable gadget routed mixed: {s:?}");
            *sides.entry(s[0]).or_insert(0) += 1;
        }
        ensure!(sides.len() == 2, "variable gadget does not admit both sides: {sides:?}");
    }
    let unsat = CnfFormula::new(1, vec![[1, 1, 1], [-1, -1, -1]]).expect("formula");
    let inst = build_sat_instance(&unsat, 1).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let found = route_within(&inst.graph, &inst.perm, 3, budget().with_time(Duration::from_secs(600))).map_err(|e| e.to_string())?;
    ensure!(found.is_none(), "unsatisfiable instance routed in 3 steps");
    Ok(format!(
        "20 satisfiable formulas round-trip; {forcing} forced chain routings, 0 counterexamples; unsat instance ({} vertices) certified in {:.1} ms",
        inst.graph.n(),
        start.elapsed().as_secs_f64() * 1e3
    ))
}

/// Smallest largest block over all valid partitions, by enumerating every
/// set partition.
fn naive_ccpp(g: &Graph, colors: &[usize]) -> Option<usize> {
    let n = g.n();
    let mut best = None;
    let mut label = vec![0usize; n];
    fn connected(g: &Graph, vs: &[usize]) -> bool {
        let mut seen = vec![vs[0]];
        let mut i = 0;
        while i < seen.len() {
            for &w in g.neighbors(seen[i]) {
                if vs.contains(&w) && !seen.contains(&w) {
                    seen.push(w);
                }
            }
            i += 1;
        }
        seen.len() == vs.len()
    }
    fn rec(g: &Graph, colors: &[usize], label: &mut Vec<usize>, i: usize, used: usize, best: &mut Option<usize>) {
        let n = g.n();
        if i == n {
            let blocks: Vec<Vec<usize>> = (0..used).map(|b| (0..n).filter(|&v| label[v] == b).collect()).collect();
            let colors_ok = (0..n).all(|u| (0..n).all(|v| colors[u] != colors[v] || label[u] == label[v]));
            if colors_ok && blocks.iter().all(|b| connected(g, b)) {
                let big = blocks.iter().map(Vec::len).max().unwrap_or(0);
                *best = Some(best.map_or(big, |x: usize| x.min(big)));
            }
            return;
        }
        for b in 0..=used {
            label[i] = b;
            rec(g, colors, label, i + 1, used.max(b + 1), best);
        }
    }
    if n == 0 {
        return Some(0);
    }
    rec(g, colors, &mut label, 0, 0, &mut best);
    best
}

fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cur: &mut Vec<usize>, used: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=used {
            cur.push(b);
            rec(n, cur, used.max(b + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), 0, &mut out);
    out
}

fn compare_ccpp(g: &Graph, colors: &[usize]) -> std::result::Result<(), String> {
    let want = naive_ccpp(g, colors);
    let got = ccpp_optimum(g, colors, budget()).map_err(|e| e.to_string())?;
    ensure!(got.as_ref().map(|x| x.0) == want, "solver {:?} vs oracle {want:?} on {:?} colors {colors:?}", got.map(|x| x.0), g.edges());
    if let Some((t, part)) = got {
        ensure!(verify_ccpp_partition(g, colors, &part, t), "solver partition fails verification");
    }
    for t in 1..=g.n() {
        let feasible = ccpp_solve_exact(g, colors, t, budget()).map_err(|e| e.to_string())?.is_some();
        ensure!(feasible == want.is_some_and(|w| t >= w), "feasibility at t = {t} disagrees");
    }
    Ok(())
}

fn ccpp() -> Check {
    let f = CnfFormula::new(3, vec![[1, 2, -3]]).expect("formula");
    let inst = build_ccpp_instance(&f);
    let part = ccpp_solve_exact(&inst.graph, &inst.colors, 4, budget()).map_err(|e| e.to_string())?.ok_or("no partition with blocks of 4")?;
    let largest = part.iter().map(Vec::len).max().unwrap_or(0);
    ensure!(largest == 4, "largest block {largest}");
    ensure!(ccpp_solve_exact(&inst.graph, &inst.colors, 3, budget()).map_err(|e| e.to_string())?.is_none(), "blocks of 3 suffice");
    ensure!(verify_ccpp_partition(&inst.graph, &inst.colors, &part, 4), "solver output rejected");

    let mut rejected = 0;
    for (i, b) in part.iter().enumerate() {
        for &v in b.iter().skip(1) {
            let mut split = part.clone();
            split[i].retain(|&x| x != v);
            split.push(vec![v]);
            let breaks_color = b.iter().any(|&u| u != v && inst.colors[u] == inst.colors[v]);
            if breaks_color {
                ensure!(!verify_ccpp_partition(&inst.graph, &inst.colors, &split, 4), "split color class accepted");
                rejected += 1;
            }
        }
    }
    let singles: Vec<usize> = (0..part.len()).filter(|&i| part[i].len() == 1).collect();
    for (x, &i) in singles.iter().enumerate() {
        for &j in &singles[x + 1..] {
            let (u, v) = (part[i][0], part[j][0]);
            if inst.graph.has_edge(u, v) {
                continue;
            }
            let mut merged: Vec<Vec<usize>> = part.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, b)| b.clone()).collect();
            merged.push(vec![u, v]);
            ensure!(!verify_ccpp_partition(&inst.graph, &inst.colors, &merged, 4), "disconnected block accepted");
            rejected += 1;
        }
    }

    let mut compared = 0;
    for n in 1..=4 {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let colorings = set_partitions(n);
        for mask in 0u32..1 << pairs.len() {
            let g = Graph::new(n, pairs.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)).expect("simple");
            for colors in &colorings {
                compare_ccpp(&g, colors)?;
                compared += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..400 {
        let n = rng.gen_range(5..=8);
        let p = rng.gen_range(0.15..0.7);
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
        let g = Graph::new(n, edges).expect("simple");
        let palette = rng.gen_range(1..=n);
        let colors: Vec<usize> = (0..n).map(|_| rng.gen_range(0..palette)).collect();
        compare_ccpp(&g, &colors)?;
        compared += 1;
    }
    Ok(format!("1-clause instance optimum 4; {rejected} broken partitions rejected; {compared} colored graphs agree with set-partition enumeration"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("oracle exactness on Q3", oracle_exactness),
        ("clique routing", clique_routing),
        ("star bound", star_bound),
        ("atomic gadget values", atomic_gadgets),
        ("two-step decider vs oracle", two_step_decider),
        ("maxroute vs oracle", maxroute_equivalence),
        ("port array properties", port_arrays),
        ("tree routing bounds", tree_bounds),
        ("h-connected router fit", hconn_fit),
        ("clique router shape", clique_router_shape),
        ("SAT reduction", sat_reduction),
        ("CCPP", ccpp),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
