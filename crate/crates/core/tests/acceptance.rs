//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its headline numbers. Run with
//! `cargo test -p edgepart --test acceptance -- --nocapture`.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use edgepart::instances::{
    gen_bipartite_worstcase, gen_block_move_example, gen_clique_worstcase, gen_random_powerlaw,
    initial_hash, initial_random, WorstCaseInstance,
};
use edgepart::lsg::{AssertLevel, CapacityRule, LsgConfig};
use edgepart::lsf::{self, LsfConfig};
use edgepart::maxflow::{max_flow, FlowNetwork};
use edgepart::{lsg, Alpha, Block, Graph, Partition};

fn alpha(s: &str) -> Alpha {
    s.parse().unwrap()
}

fn build(inst: &WorstCaseInstance, assign: &[usize], a: &str) -> Partition {
    Partition::new(Arc::new(inst.graph.clone()), inst.k, alpha(a), assign.to_vec()).unwrap()
}

/// Exact rational RF equality: copies / n == num / den.
fn assert_rf_exact(p: &Partition, num: u64, den: u64) {
    assert_eq!(
        p.copies() as u64 * den,
        num * p.graph().vertex_count() as u64,
        "RF is not exactly {num}/{den}"
    );
}

fn adjustable_count(p: &Partition) -> usize {
    (0..p.graph().edge_count()).filter(|&e| p.is_adjustable(e)).count()
}

/// copies <= min(k * n, 2m), checked in integers.
fn assert_rf_bound(p: &Partition) {
    let n = p.graph().vertex_count();
    let m = p.graph().edge_count();
    assert!(
        p.copies() <= (p.k() * n).min(2 * m),
        "RF exceeds the min(k, average degree) bound"
    );
}

#[test]
fn clique_worstcase_family() {
    let started = Instant::now();
    for p_param in [3usize, 4, 5] {
        let inst = gen_clique_worstcase(p_param).unwrap();
        let optimal = build(&inst, &inst.optimal, "1");
        assert!(optimal.is_balanced());
        assert_rf_exact(&optimal, 1, 1);
        assert_rf_bound(&optimal);

        let adversarial = build(&inst, &inst.adversarial, "1");
        assert!(adversarial.is_balanced());
        assert_rf_exact(&adversarial, (p_param - 1) as u64, 1);
        assert_eq!(adjustable_count(&adversarial), 0);
        assert_rf_bound(&adversarial);

        // Both refiners leave the adversarial partition untouched.
        let mut p = adversarial.clone();
        let report = lsg::refine(&mut p, &LsgConfig { seed: 7, ..Default::default() });
        assert_eq!(report.adjust_success, 0);
        assert_eq!(p.assignment(), &inst.adversarial[..]);
        assert_rf_bound(&p);

        let mut p = adversarial.clone();
        let report = lsf::refine(
            &mut p,
            &LsfConfig { seed: 7, stagnation_rounds: 10, ..Default::default() },
        );
        assert_eq!(report.blocks_applied, 0);
        assert_eq!(p.assignment(), &inst.adversarial[..]);
        assert_rf_bound(&p);
    }
    println!(
        "acceptance clique worst-case family (p=3,4,5; RF=p-1, fixed points): PASS in {:?}",
        started.elapsed()
    );
}

#[test]
fn bipartite_worstcase_family() {
    let started = Instant::now();
    for k in [2usize, 3, 4] {
        let inst = gen_bipartite_worstcase(k).unwrap();
        let optimal = build(&inst, &inst.optimal, "1");
        assert_rf_exact(&optimal, 1, 1);

        let adversarial = build(&inst, &inst.adversarial, "1");
        assert!(adversarial.is_balanced());
        assert_rf_exact(&adversarial, (k * k + 1) as u64, (k + 1) as u64);
        assert_eq!(adjustable_count(&adversarial), 0);
        assert_rf_bound(&adversarial);

        let mut p = adversarial.clone();
        lsg::refine(&mut p, &LsgConfig { seed: 7, ..Default::default() });
        assert_eq!(p.assignment(), &inst.adversarial[..]);

        let mut p = adversarial.clone();
        lsf::refine(&mut p, &LsfConfig { seed: 7, stagnation_rounds: 10, ..Default::default() });
        assert_eq!(p.assignment(), &inst.adversarial[..]);
        assert_rf_bound(&p);
    }
    println!(
        "acceptance bipartite worst-case family (k=2,3,4; RF=(k^2+1)/(k+1), fixed points): PASS in {:?}",
        started.elapsed()
    );
}

#[test]
fn block_move_mechanics() {
    let started = Instant::now();
    let ex = gen_block_move_example();

    // Greedy adjustment: the block and its three adjustable edges all
    // relocate, reducing the copy count by exactly two.
    let mut p = Partition::new(
        Arc::new(ex.graph.clone()),
        ex.k,
        alpha(ex.alpha_str),
        ex.assign.clone(),
    )
    .unwrap();
    let copies_before = p.copies();
    let block = p.blocks(0)[0].clone();
    assert_eq!(block.vertices, ex.block_vertices);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let outcome = lsg::try_adjust_block(&mut p, &block, &mut rng, CapacityRule::EdgeCount).unwrap();
    assert!(outcome.moved);
    assert_eq!(outcome.copies_delta, -2);
    assert_eq!(p.copies(), copies_before - 2);
    for &(e, target) in &ex.expected_routes {
        assert_eq!(p.part_of(e), target);
    }
    assert_eq!(p.part_of(block.edges[0]), ex.expected_dest);
    assert_rf_bound(&p);

    // Flow plan on the same instance: all three source arcs saturate, the
    // block commits, and each edge lands on its forced target.
    let mut p = Partition::new(
        Arc::new(ex.graph.clone()),
        ex.k,
        alpha(ex.alpha_str),
        ex.assign.clone(),
    )
    .unwrap();
    let block = p.blocks(0)[0].clone();
    let set = lsf::choose_destinations(&p, vec![block.clone()]);
    assert_eq!(set[0].dest, Some(ex.expected_dest));
    let plan = lsf::build_flow_network(&mut p, set);
    let outcome = lsf::apply_flow_plan(&mut p, plan);
    assert_eq!(outcome.flow_value, 3);
    assert_eq!(outcome.applied, vec![0], "the block's indicator must be 1");
    assert_eq!(outcome.copies_delta, -2);
    for &(e, target) in &ex.expected_routes {
        assert_eq!(p.part_of(e), target);
    }
    assert_eq!(p.part_of(block.edges[0]), ex.expected_dest);
    assert_eq!(p.part_of(block.edges[1]), ex.expected_dest);
    assert_rf_bound(&p);
    println!(
        "acceptance block-move mechanics (copies -2, flow 3, forced routes): PASS in {:?}",
        started.elapsed()
    );
}

#[test]
fn monotonicity_and_balance_suite() {
    let started = Instant::now();
    const SIZES: [usize; 13] =
        [100, 140, 200, 300, 450, 650, 950, 1400, 2000, 3000, 4500, 6800, 10000];
    const KS: [usize; 4] = [4, 8, 16, 64];
    const ALPHAS: [&str; 2] = ["1.0", "1.1"];

    let mut runs = 0usize;
    let mut combos_seen = BTreeSet::new();
    for i in 0..200usize {
        // The strides keep every axis independent: (algo, alpha, method, k)
        // cycle with period 64, sizes with the coprime period 13, so all
        // 64 configuration combinations appear, each at several sizes.
        let m = SIZES[i % SIZES.len()];
        let n = (m / 3).max(10);
        let use_greedy = i % 2 == 0;
        let a = ALPHAS[(i / 2) % 2];
        let use_random_initial = (i / 4) % 2 == 0;
        let k = KS[(i / 8) % KS.len()];
        let seed = i as u64;
        combos_seen.insert((use_greedy, a, use_random_initial, k));

        let g = Arc::new(gen_random_powerlaw(n, m, 2.3, seed).unwrap());
        let assign = if use_random_initial {
            initial_random(&g, k, seed)
        } else {
            initial_hash(&g, k)
        };
        let mut p = Partition::new(Arc::clone(&g), k, alpha(a), assign).unwrap();
        assert!(p.is_balanced(), "initial assignment must be balanced");
        let rf_before = p.replication_factor();

        // AssertLevel::Full re-verifies balance, monotone copy counts, and
        // scratch-vs-incremental bookkeeping after every committed
        // adjustment (greedy) or committed round (flow).
        let report = if use_greedy {
            lsg::refine(
                &mut p,
                &LsgConfig { seed, assert_level: AssertLevel::Full, ..Default::default() },
            )
        } else {
            lsf::refine(
                &mut p,
                &LsfConfig {
                    seed,
                    stagnation_rounds: 10,
                    assert_level: AssertLevel::Full,
                    ..Default::default()
                },
            )
        };
        assert!(report.rf_after <= rf_before + 1e-12);
        assert!(report.balanced_after);
        assert_rf_bound(&p);
        runs += 1;
    }
    assert!(runs >= 200);
    assert_eq!(combos_seen.len(), 2 * 2 * 2 * KS.len(), "configuration grid not covered");
    println!(
        "acceptance monotonicity & balance ({runs} seeded runs, zero violations): PASS in {:?}",
        started.elapsed()
    );
}

/// Independent oracle: augmenting paths found by DFS over an
/// adjacency-matrix residual graph. Deliberately shares nothing with the
/// solver under test.
fn oracle_max_flow(n: usize, arcs: &[(usize, usize, u64)], s: usize, t: usize) -> u64 {
    fn dfs(u: usize, t: usize, cap: &[Vec<u64>], seen: &mut [bool], path: &mut Vec<usize>) -> bool {
        seen[u] = true;
        path.push(u);
        if u == t {
            return true;
        }
        for v in 0..cap.len() {
            if !seen[v] && cap[u][v] > 0 && dfs(v, t, cap, seen, path) {
                return true;
            }
        }
        path.pop();
        false
    }
    let mut cap = vec![vec![0u64; n]; n];
    for &(u, v, c) in arcs {
        cap[u][v] += c;
    }
    let mut total = 0;
    loop {
        let mut seen = vec![false; n];
        let mut path = Vec::new();
        if !dfs(s, t, &cap, &mut seen, &mut path) {
            return total;
        }
        let bottleneck = path.windows(2).map(|w| cap[w[0]][w[1]]).min().unwrap();
        for w in path.windows(2) {
            cap[w[0]][w[1]] -= bottleneck;
            cap[w[1]][w[0]] += bottleneck;
        }
        total += bottleneck;
    }
}

#[test]
fn maxflow_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let n = rng.random_range(2..=12usize);
        let arc_count = rng.random_range(1..=3 * n);
        let mut arcs = Vec::new();
        for _ in 0..arc_count {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v {
                arcs.push((u, v, rng.random_range(0..=4u64)));
            }
        }
        let (s, t) = (0, n - 1);
        let mut net = FlowNetwork::new(n, s, t);
        for &(u, v, c) in &arcs {
            net.add_arc(u, v, c);
        }
        let value = max_flow(&net).value;
        assert_eq!(value, oracle_max_flow(n, &arcs, s, t), "oracle mismatch");

        // Max flow equals the minimum over all enumerated s-t cuts.
        let mut best_cut = u64::MAX;
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 || mask & (1 << t) != 0 {
                continue;
            }
            let cut = arcs
                .iter()
                .filter(|&&(u, v, _)| mask & (1 << u) != 0 && mask & (1 << v) == 0)
                .map(|&(_, _, c)| c)
                .sum();
            best_cut = best_cut.min(cut);
        }
        assert_eq!(value, best_cut, "min cut mismatch");
    }
    println!(
        "acceptance max-flow oracle (100 networks, brute force + min cut): PASS in {:?}",
        started.elapsed()
    );
}

#[test]
fn blocks_persist_after_adjustable_move() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut trials = 0;
    let mut attempts = 0;
    while trials < 50 {
        attempts += 1;
        assert!(attempts < 5000, "could not build enough instances with adjustable edges");
        let n = rng.random_range(8..28usize);
        let max_m = n * (n - 1) / 2;
        let m = rng.random_range(n..=(3 * n).min(max_m));
        let mut edges = BTreeSet::new();
        while edges.len() < m {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v {
                edges.insert((u.min(v), u.max(v)));
            }
        }
        let g =
            Arc::new(Graph::from_edges(n, &edges.into_iter().collect::<Vec<_>>()).unwrap());
        let k = rng.random_range(2..=4usize);
        let assign: Vec<usize> = (0..m).map(|_| rng.random_range(0..k)).collect();
        let mut p = Partition::new(Arc::clone(&g), k, alpha("10"), assign).unwrap();

        // The refiners only ever relocate an adjustable edge into one of
        // its reachable parts, so that is the move whose block stability
        // the decompositions rely on.
        let adjustable: Vec<usize> =
            (0..m).filter(|&e| p.is_adjustable(e)).collect();
        if adjustable.is_empty() {
            continue;
        }
        let e = adjustable[rng.random_range(0..adjustable.len())];
        let donor = p.part_of(e);
        let targets: Vec<usize> =
            p.reachable_parts(e).into_iter().filter(|&j| j != donor).collect();
        let target = targets[rng.random_range(0..targets.len())];

        let before: Vec<Block> = p.blocks(donor);
        p.move_edge(e, target);
        let after: Vec<Block> = p.blocks(donor);

        for old in &before {
            let persisted = after.contains(old);
            if old.is_vertex_block() {
                // A vertex block survives exactly as long as its vertex
                // keeps an edge in the part.
                let still_there = p.vertex_in_part(old.min_vertex(), donor);
                assert_eq!(persisted, still_there, "vertex block fate mismatch");
            } else {
                assert!(persisted, "non-vertex block failed to persist");
            }
        }
        // And nothing new appears: the fresh decomposition is the old one
        // minus vanished vertex blocks.
        for fresh in &after {
            assert!(before.contains(fresh), "unexpected new block after the move");
        }
        trials += 1;
    }
    println!(
        "acceptance block persistence under adjustable-edge moves (50 instances): PASS in {:?}",
        started.elapsed()
    );
}

#[test]
fn rf_bound_on_families_and_refinements() {
    let started = Instant::now();
    let mut observed = 0usize;
    for p_param in [3usize, 4, 5] {
        let inst = gen_clique_worstcase(p_param).unwrap();
        for assign in [&inst.optimal, &inst.adversarial] {
            assert_rf_bound(&build(&inst, assign, "1"));
            observed += 1;
        }
    }
    for k in [2usize, 3, 4] {
        let inst = gen_bipartite_worstcase(k).unwrap();
        for assign in [&inst.optimal, &inst.adversarial] {
            assert_rf_bound(&build(&inst, assign, "1"));
            observed += 1;
        }
    }
    for seed in 0..12u64 {
        let g = Arc::new(gen_random_powerlaw(200, 600, 2.3, seed).unwrap());
        for k in [4usize, 16, 64] {
            let assign = initial_random(&g, k, seed);
            let mut p = Partition::new(Arc::clone(&g), k, alpha("1.1"), assign).unwrap();
            assert_rf_bound(&p);
            observed += 1;
            lsg::refine(&mut p, &LsgConfig { seed, ..Default::default() });
            assert_rf_bound(&p);
            observed += 1;
            lsf::refine(
                &mut p,
                &LsfConfig { seed, stagnation_rounds: 10, ..Default::default() },
            );
            assert_rf_bound(&p);
            observed += 1;
        }
    }
    println!(
        "acceptance RF bound min(k, avg degree) ({observed} partitions observed): PASS in {:?}",
        started.elapsed()
    );
}

/// Identical CLI invocations must yield byte-identical partition files,
/// and byte-identical reports once the only volatile field (wall time)
/// is normalized away.
#[test]
fn identical_invocations_are_deterministic() {
    use std::path::PathBuf;
    use std::process::Command;

    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_edgepart"))
            .args(args)
            .current_dir(d)
            .output()
            .expect("spawn edgepart");
        assert!(
            out.status.success(),
            "command {:?} failed: {}",
            args,
            String::from_utf8_lossy(&out.stderr)
        );
    };

    let run_pipeline = |tag: &str| -> (PathBuf, PathBuf) {
        run(&[
            "gen", "powerlaw", "--n", "300", "--m", "900", "--exponent", "2.3", "--seed", "3",
            "--out", &format!("{tag}.el"),
        ]);
        run(&[
            "partition",
            &format!("{tag}.el"),
            "--k",
            "16",
            "--method",
            "random",
            "--seed",
            "3",
            "--out",
            &format!("{tag}.part"),
        ]);
        run(&[
            "refine",
            &format!("{tag}.el"),
            &format!("{tag}.part"),
            "--algo",
            "lsg+lsf",
            "--seed",
            "3",
            "--stagnation-rounds",
            "15",
            "--out",
            &format!("{tag}.refined.part"),
            "--report-out",
            &format!("{tag}.report.json"),
        ]);
        (d.join(format!("{tag}.refined.part")), d.join(format!("{tag}.report.json")))
    };

    let (part_a, report_a) = run_pipeline("a");
    let (part_b, report_b) = run_pipeline("b");

    let read = |name: &str| std::fs::read(d.join(name)).unwrap();
    assert_eq!(read("a.el"), read("b.el"), "generated graphs differ");
    assert_eq!(read("a.part"), read("b.part"), "initial partitions differ");
    assert_eq!(
        std::fs::read(&part_a).unwrap(),
        std::fs::read(&part_b).unwrap(),
        "refined partitions differ"
    );

    let normalize = |path: &PathBuf| -> String {
        let mut v: serde_json::Value =
            serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
        v["wall_time_ms"] = serde_json::Value::from(0);
        serde_json::to_string_pretty(&v).unwrap()
    };
    assert_eq!(normalize(&report_a), normalize(&report_b), "reports differ beyond wall time");
    println!(
        "acceptance determinism (two identical pipelines, byte-identical artifacts): PASS in {:?}",
        started.elapsed()
    );
}

#[test]
fn improvement_on_random_instances() {
    let started = Instant::now();
    let instances = 20usize;
    let mut lsg_improvements: Vec<f64> = Vec::new();
    let mut lsf_improvements: Vec<f64> = Vec::new();
    let mut lsg_positive = 0usize;
    let mut lsf_never_worse = 0usize;

    for seed in 0..instances as u64 {
        let g = Arc::new(gen_random_powerlaw(1000, 3000, 2.3, seed).unwrap());
        let assign = initial_random(&g, 64, seed);
        let mut p = Partition::new(Arc::clone(&g), 64, alpha("1.1"), assign).unwrap();
        let rf_initial = p.replication_factor();

        lsg::refine(&mut p, &LsgConfig { seed, ..Default::default() });
        let rf_greedy = p.replication_factor();
        if rf_greedy < rf_initial {
            lsg_positive += 1;
        }
        lsg_improvements.push(100.0 * (rf_initial - rf_greedy) / rf_initial);

        lsf::refine(
            &mut p,
            &LsfConfig { seed, stagnation_rounds: 25, ..Default::default() },
        );
        let rf_flow = p.replication_factor();
        if rf_flow <= rf_greedy {
            lsf_never_worse += 1;
        }
        lsf_improvements.push(100.0 * (rf_greedy - rf_flow) / rf_greedy);
        assert_rf_bound(&p);
    }

    let median = |v: &mut Vec<f64>| -> f64 {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v[v.len() / 2]
    };
    let lsg_median = median(&mut lsg_improvements);
    let lsf_median = median(&mut lsf_improvements);

    assert!(
        lsg_positive * 10 >= instances * 9,
        "greedy improved only {lsg_positive}/{instances} instances"
    );
    assert_eq!(lsf_never_worse, instances, "flow refinement regressed a greedy result");
    println!(
        "acceptance improvement suite ({instances} instances, k=64: greedy positive on {lsg_positive}, \
         median {lsg_median:.2}%; flow never worse, further median {lsf_median:.2}%): PASS in {:?}",
        started.elapsed()
    );
}
