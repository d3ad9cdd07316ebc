//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured quantities. Run with `--nocapture` to see the lines.

use std::collections::HashSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use graph_comparison::classify::{
    classify_connected, five_array_from_sequence, graph_from_five_array, Classification,
    FiveArray,
};
use graph_comparison::feasibility::{
    check_comparison, negative_type_check, verify_model, FeasibilityOutcome, SolverConfig,
};
use graph_comparison::fusion::{
    fuse, fusion_reachable, lift_labeling, FusionCertificate, FusionStep, MixedChoice,
    SearchOutcome, DEFAULT_STATE_BUDGET,
};
use graph_comparison::graph::{canonical_form, enumerate_connected_graphs, isomorphic, Graph};
use graph_comparison::metric::{
    cycle_metric, random_instances, star_metric, ComparisonInstance, InstanceMode,
};
use graph_comparison::model_line::line_model;
use graph_comparison::witness::{canonical_violation, violating_instance};
use graph_comparison::ReductionTarget;

fn reaches(g: &Graph, target: &Graph) -> bool {
    g.vertex_count() >= target.vertex_count()
        && matches!(
            fusion_reachable(g, target, DEFAULT_STATE_BUDGET).unwrap(),
            SearchOutcome::Found(_)
        )
}

/// Criterion 1: the classifier's verdict matches the fusion-search oracle on
/// every connected graph with at most six vertices, within the time budget.
#[test]
fn criterion_1_theorem_dichotomy_exhaustive() {
    let started = Instant::now();
    let mut checked = 0usize;
    let mut six_classes = 0usize;
    for n in 1..=6 {
        for g in enumerate_connected_graphs(n).unwrap() {
            let trivial = classify_connected(&g).unwrap().is_trivial();
            let oracle_trivial =
                !reaches(&g, &Graph::cycle(4)) && !reaches(&g, &Graph::tripod());
            assert_eq!(trivial, oracle_trivial, "disagreement on {g:?}");
            checked += 1;
            if n == 6 {
                six_classes += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    assert_eq!(six_classes, 112);
    assert!(
        elapsed.as_secs() < 600,
        "dichotomy sweep took {elapsed:?}, over the ten-minute budget"
    );
    println!(
        "criterion 1: PASS - {checked} connected graphs (112 classes at n=6), \
         zero disagreements, {elapsed:?}"
    );
}

fn valid_five_arrays(max_vertices: usize) -> Vec<FiveArray> {
    let mut out = Vec::new();
    for m1 in 0..max_vertices {
        let k1s: Vec<usize> = if m1 == 0 { vec![0] } else { (1..=m1).collect() };
        for &k1 in &k1s {
            for m2 in 0..max_vertices {
                let k2s: Vec<usize> = if m2 == 0 { vec![0] } else { (1..=m2).collect() };
                for &k2 in &k2s {
                    for path_len in 0..max_vertices {
                        let f = match FiveArray::new(m1, k1, path_len, k2, m2) {
                            Ok(f) => f,
                            Err(_) => continue,
                        };
                        if f.total_vertices() <= max_vertices {
                            out.push(f);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Criterion 2: every valid five-array on at most nine vertices classifies
/// trivially, rebuilds an isomorphic graph from its canonical array, and the
/// canonical array is a fixed point.
#[test]
fn criterion_2_corollary_round_trip() {
    let arrays = valid_five_arrays(9);
    for f in &arrays {
        let g = graph_from_five_array(f).unwrap();
        let Classification::Trivial { five, seq, .. } = classify_connected(&g).unwrap() else {
            panic!("five-array graph {f:?} classified nontrivial");
        };
        assert_eq!(five_array_from_sequence(&seq).unwrap(), five);
        let rebuilt = graph_from_five_array(&five).unwrap();
        assert!(
            isomorphic(&g, &rebuilt).unwrap(),
            "canonical array {five:?} loses the graph of {f:?}"
        );
        // Idempotence: the canonical array is its own canonical form.
        let Classification::Trivial { five: again, .. } = classify_connected(&rebuilt).unwrap()
        else {
            panic!("canonical graph of {f:?} classified nontrivial");
        };
        assert_eq!(again, five, "canonicalization is not idempotent on {f:?}");
    }
    println!(
        "criterion 2: PASS - {} five-arrays on <= 9 vertices round-trip, all trivial",
        arrays.len()
    );
}

fn trivial_graphs_up_to(max_vertices: usize) -> Vec<Graph> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for f in valid_five_arrays(max_vertices) {
        let g = graph_from_five_array(&f).unwrap();
        if seen.insert(canonical_form(&g).unwrap()) {
            out.push(g);
        }
    }
    out
}

/// Criterion 3: line models verify to within 1e-12 on a thousand seeded
/// random instances of every trivial graph on at most nine vertices.
#[test]
fn criterion_3_trivial_model_correctness() {
    let graphs = trivial_graphs_up_to(9);
    let mut instances = 0usize;
    let mut worst = f64::NEG_INFINITY;
    for (gi, g) in graphs.iter().enumerate() {
        let seed = 1000 + gi as u64;
        let euclidean = random_instances(g, InstanceMode::Euclidean { dim: 3 }, seed).take(500);
        let repaired = random_instances(g, InstanceMode::RepairedRandom, seed ^ 0xffff).take(500);
        for inst in euclidean.chain(repaired) {
            let coords = line_model(&inst).unwrap();
            let rows: Vec<Vec<f64>> = coords.iter().map(|&x| vec![x]).collect();
            let violation = verify_model(&inst, &rows).unwrap();
            assert!(
                violation <= 1e-12,
                "line model violated by {violation} on {g:?}"
            );
            worst = worst.max(violation);
            instances += 1;
        }
    }
    println!(
        "criterion 3: PASS - {} trivial graphs x 1000 instances = {instances} models, \
         worst violation {worst:.3e} <= 1e-12",
        graphs.len()
    );
}

/// Criterion 4: the canonical four-cycle and tripod instances come back
/// infeasible with gaps of at least 1e-3 under the default configuration.
#[test]
fn criterion_4_canonical_infeasibility() {
    let cfg = SolverConfig::default();
    let mut gaps = Vec::new();
    let c4 = ComparisonInstance::new(Graph::cycle(4), cycle_metric(4).unwrap(), vec![0, 1, 2, 3])
        .unwrap();
    let t3 =
        ComparisonInstance::new(Graph::tripod(), star_metric(3, 1.0).unwrap(), vec![0, 1, 2, 3])
            .unwrap();
    for (name, inst) in [("C4/cycle", c4), ("T3/star", t3)] {
        let verdict = check_comparison(&inst, &cfg).unwrap();
        let FeasibilityOutcome::Infeasible { gap } = verdict.outcome else {
            panic!("{name} should be infeasible, got {:?}", verdict.outcome);
        };
        assert!(gap >= 1e-3, "{name} gap {gap} below margin");
        gaps.push((name, gap));
    }
    println!(
        "criterion 4: PASS - {} gap {:.4}, {} gap {:.4}, both >= 1e-3 on all restarts",
        gaps[0].0, gaps[0].1, gaps[1].0, gaps[1].1
    );
}

/// Criterion 5: every nontrivial connected graph on at most six vertices
/// yields a violating instance the solver rejects, with no indeterminate
/// verdicts.
#[test]
fn criterion_5_end_to_end_witnesses() {
    let cfg = SolverConfig::default();
    let mut nontrivial = 0usize;
    let mut min_gap = f64::INFINITY;
    for n in 1..=6 {
        for g in enumerate_connected_graphs(n).unwrap() {
            let cls = classify_connected(&g).unwrap();
            if cls.is_trivial() {
                continue;
            }
            let inst = violating_instance(&g, &cls).unwrap();
            let verdict = check_comparison(&inst, &cfg).unwrap();
            let FeasibilityOutcome::Infeasible { gap } = verdict.outcome else {
                panic!("witness for {g:?} came back {:?}", verdict.outcome);
            };
            assert!(gap >= 1e-3, "witness gap {gap} below margin on {g:?}");
            min_gap = min_gap.min(gap);
            nontrivial += 1;
        }
    }
    println!(
        "criterion 5: PASS - {nontrivial} nontrivial graphs, all witnesses infeasible \
         (min gap {min_gap:.4}), zero indeterminate"
    );
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.5) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Criterion 6: a thousand seeded euclidean instances over random graphs all
/// come back feasible within tolerance, and every witness re-verifies.
#[test]
fn criterion_6_solver_soundness_on_euclidean_instances() {
    let cfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(600);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..1000u64 {
        let n = rng.gen_range(2..=8);
        let dim = rng.gen_range(1..=4);
        let g = random_graph(&mut rng, n);
        let inst = random_instances(&g, InstanceMode::Euclidean { dim }, 6000 + i)
            .next()
            .unwrap();
        let verdict = check_comparison(&inst, &cfg).unwrap();
        let FeasibilityOutcome::Feasible {
            coords,
            max_violation,
        } = &verdict.outcome
        else {
            panic!("euclidean instance {i} came back {:?}", verdict.outcome);
        };
        assert!(*max_violation <= 1e-7);
        let reverified = verify_model(&inst, coords).unwrap();
        assert!(reverified <= 1e-7, "witness failed re-verification: {reverified}");
        worst = worst.max(reverified);
    }
    println!(
        "criterion 6: PASS - 1000 euclidean instances feasible, \
         worst re-verified violation {worst:.3e} <= 1e-7"
    );
}

/// Criterion 7: across seeded samples of a graph, one adjacent fusion, and a
/// random instance of the fused graph, the lifted instance is never feasible
/// while the fused instance is infeasible.
#[test]
fn criterion_7_claim_monotonicity() {
    let cfg = SolverConfig::default();
    let mut pool = Vec::new();
    for n in 2..=5 {
        pool.extend(enumerate_connected_graphs(n).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(700);
    let mut contradictions = 0usize;
    let mut lifted_feasible = 0usize;
    for i in 0..500u64 {
        let g = pool[rng.gen_range(0..pool.len())].clone();
        let edges = g.edges();
        let (v1, v2) = edges[rng.gen_range(0..edges.len())];
        let mixed: Vec<usize> = (0..g.vertex_count())
            .filter(|&u| u != v1 && u != v2 && g.adjacent(u, v1) != g.adjacent(u, v2))
            .collect();
        let choices = mixed
            .iter()
            .map(|&u| {
                let rel = if rng.gen_bool(0.5) {
                    MixedChoice::Adjacent
                } else {
                    MixedChoice::Nonadjacent
                };
                (u, rel)
            })
            .collect();
        let step = FusionStep { v1, v2, choices };
        let fused = fuse(&g, &step).unwrap();
        let cert = FusionCertificate {
            source: g.clone(),
            steps: vec![step],
            target: fused.graph.clone(),
        };
        let fused_inst = random_instances(&fused.graph, InstanceMode::RepairedRandom, 7000 + i)
            .next()
            .unwrap();
        let lifted_labels = lift_labeling(&cert, &fused_inst.labeling).unwrap();
        let lifted_inst =
            ComparisonInstance::new(g.clone(), fused_inst.space.clone(), lifted_labels).unwrap();

        let lifted_verdict = check_comparison(&lifted_inst, &cfg).unwrap();
        let fused_verdict = check_comparison(&fused_inst, &cfg).unwrap();
        if lifted_verdict.is_feasible() {
            lifted_feasible += 1;
            if fused_verdict.is_infeasible() {
                contradictions += 1;
            }
        }
    }
    assert_eq!(contradictions, 0);
    println!(
        "criterion 7: PASS - 500 fusion samples, {lifted_feasible} lifted instances feasible, \
         zero feasible-lifted/infeasible-fused contradictions"
    );
}

/// Criterion 8: the negative-type test rejects the squared four-cycle metric
/// and accepts squared euclidean distance matrices.
#[test]
fn criterion_8_schoenberg_negative_type() {
    let m = cycle_metric(4).unwrap();
    let squared: Vec<f64> = m.distances().iter().map(|d| d * d).collect();
    assert!(!negative_type_check(4, &squared, 1e-9).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(800);
    for _ in 0..200 {
        let n: usize = rng.gen_range(2..=8);
        let dim = rng.gen_range(1..=4);
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect())
            .collect();
        let mut s = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let sq: f64 = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                s[i * n + j] = sq;
            }
        }
        // Symmetrize exactly; floating sums can differ across the diagonal.
        for i in 0..n {
            for j in (i + 1)..n {
                s[j * n + i] = s[i * n + j];
            }
        }
        assert!(
            negative_type_check(n, &s, 1e-9).unwrap(),
            "euclidean squared distances rejected"
        );
    }
    println!(
        "criterion 8: PASS - squared four-cycle metric rejected, \
         200 euclidean squared-distance matrices accepted"
    );
}

/// The canonical four-cycle witness is also certified by the lifted
/// classification path used in the sweep command.
#[test]
fn canonical_violations_match_reduction_targets() {
    for target in [ReductionTarget::C4, ReductionTarget::T3] {
        let inst = canonical_violation(target);
        assert!(isomorphic(&inst.graph, &target.graph()).unwrap());
    }
}
