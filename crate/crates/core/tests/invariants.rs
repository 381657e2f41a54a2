use matchroute::cliquecontract::route_via_clique_contraction;
use matchroute::generate;
use matchroute::hconn::{route_hconnected, ConnectedPartition};
use matchroute::io::{format_graph, format_permutation, format_schedule, parse_graph, parse_permutation, parse_schedule};
use matchroute::maxroute::{max_routability, Mode};
use matchroute::oracle::SearchBudget;
use matchroute::reductions::{ccpp_optimum, verify_ccpp_partition, CnfFormula};
use matchroute::treeroute::{route_tree, RootedTree};
use matchroute::twostep::route_in_two;
use matchroute::{verify_schedule, Graph, Permutation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(n: usize, p: f64, seed: u64) -> (Graph, Permutation) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = generate::random_connected(n, p, &mut rng);
    let pi = generate::random_permutation(n, &mut rng);
    (g, pi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tree_routes_are_valid_from_any_root(n in 1usize..60, root in 0usize..60, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = generate::random_tree(n, &mut rng);
        let pi = generate::random_permutation(n, &mut rng);
        let t = RootedTree::new(&g, root % n).unwrap();
        let s = route_tree(&t, &pi);
        prop_assert!(verify_schedule(&g, &pi, &s).valid);
        prop_assert!(s.len() <= 3 * n);
    }

    #[test]
    fn compaction_keeps_the_permutation(n in 2usize..30, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = generate::random_tree(n, &mut rng);
        let pi = generate::random_permutation(n, &mut rng);
        let s = route_tree(&RootedTree::new(&g, 0).unwrap(), &pi);
        let c = s.compact();
        prop_assert!(c.len() <= s.len());
        prop_assert!(verify_schedule(&g, &pi, &c).valid);
    }

    #[test]
    fn reversed_schedule_routes_the_inverse(n in 2usize..30, seed: u64) {
        let (g, pi) = instance(n, 0.3, seed);
        let s = route_tree(&RootedTree::spanning(&g, 0).unwrap(), &pi);
        prop_assert!(verify_schedule(&g, &pi.inverse(), &s.reversed()).valid);
    }

    #[test]
    fn text_formats_round_trip(n in 1usize..25, seed: u64) {
        let (g, pi) = instance(n, 0.4, seed);
        let s = route_tree(&RootedTree::spanning(&g, 0).unwrap(), &pi);
        prop_assert_eq!(parse_graph(&format_graph(&g)).unwrap(), g);
        prop_assert_eq!(parse_permutation(&format_permutation(&pi)).unwrap(), pi);
        prop_assert_eq!(parse_schedule(&format_schedule(&s)).unwrap(), s);
    }

    #[test]
    fn dimacs_round_trip(vars in 1usize..8, clauses in 1usize..12, seed: u64) {
        let f = CnfFormula::random(vars, clauses, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(CnfFormula::parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn two_step_schedules_are_short_and_valid(n in 1usize..9, p in 0.2f64..1.0, seed: u64) {
        let (g, pi) = instance(n, p, seed);
        if let Some(s) = route_in_two(&g, &pi) {
            prop_assert!(s.len() <= 2);
            prop_assert!(verify_schedule(&g, &pi, &s).valid);
        }
    }

    #[test]
    fn clique_contraction_routes_connected_graphs(n in 1usize..30, p in 0.1f64..0.8, seed: u64) {
        let (g, pi) = instance(n, p, seed);
        let r = route_via_clique_contraction(&g, &pi, None).unwrap();
        prop_assert!(verify_schedule(&g, &pi, &r.schedule).valid);
    }

    #[test]
    fn hconn_routes_generated_families(h in 2usize..5, blocks in 2usize..8, family: bool, pipelined: bool, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = h * blocks;
        let (g, lines) = if family { generate::clique_with_trees(h, n, &mut rng) } else { generate::partitioned_h_connected(h, n, &mut rng) };
        let part = ConnectedPartition::from_lines(&g, lines).unwrap();
        let pi = generate::random_permutation(n, &mut rng);
        let r = route_hconnected(&g, &pi, &part, pipelined).unwrap();
        prop_assert!(verify_schedule(&g, &pi, &r.schedule).valid);
    }

    #[test]
    fn greedy_never_beats_exact(n in 1usize..8, k in 1usize..4, seed: u64) {
        let (g, pi) = instance(n, 0.4, seed);
        let exact = max_routability(&g, &pi, k, Mode::Exact, SearchBudget::default()).unwrap();
        let greedy = max_routability(&g, &pi, k, Mode::Greedy { seed }, SearchBudget::default()).unwrap();
        prop_assert!(greedy.m <= exact.m);
        let placed = greedy.schedule.final_config(n).agreements(&pi);
        prop_assert!(placed >= greedy.m);
    }

    #[test]
    fn ccpp_solutions_verify(n in 1usize..9, p in 0.2f64..0.9, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = generate::random_connected(n, p, &mut rng);
        let colors: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let (t, blocks) = ccpp_optimum(&g, &colors, SearchBudget::default()).unwrap().expect("connected graphs always admit one block");
        prop_assert!(verify_ccpp_partition(&g, &colors, &blocks, t));
        prop_assert_eq!(blocks.iter().map(Vec::len).max(), Some(t));
    }
}
