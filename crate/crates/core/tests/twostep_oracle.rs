use matchroute::generate;
use matchroute::oracle::{explore, MatchingSet, SearchBudget};
use matchroute::twostep::route_in_two;
use matchroute::{verify_schedule, Permutation};
use rand::SeedableRng;

fn check(g: &matchroute::Graph, pi: &Permutation, rt: usize) {
    match route_in_two(g, pi) {
        Some(s) => {
            assert!(rt <= 2, "decider routed {:?} on {:?} but rt = {rt}", pi.image(), g.edges());
            assert!(verify_schedule(g, pi, &s).valid);
            assert_eq!(s.len(), rt);
        }
        None => assert!(rt > 2, "decider refused {:?} on {:?} but rt = {rt}", pi.image(), g.edges()),
    }
}

#[test]
fn agrees_with_oracle_on_all_small_graphs() {
    for n in 1..=5 {
        let perms = generate::all_permutations(n);
        for g in generate::connected_graphs(n, false) {
            let table = explore(&g, SearchBudget::default().with_depth(usize::MAX), MatchingSet::All).unwrap();
            for pi in &perms {
                check(&g, pi, table.routing_time(pi).unwrap());
            }
        }
    }
}

#[test]
fn agrees_with_oracle_on_random_instances() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for i in 0..240 {
        let n = 6 + i % 2;
        let g = generate::random_connected(n, 0.5, &mut rng);
        let pi = generate::random_permutation(n, &mut rng);
        let rt = matchroute::oracle::routing_time_exact(&g, &pi, SearchBudget::default()).unwrap().value;
        check(&g, &pi, rt);
    }
}

#[test]
fn only_cliques_route_everything_in_two() {
    for n in 2..=6 {
        let perms = generate::all_permutations(n);
        for g in generate::connected_graphs(n, true) {
            let all = perms.iter().all(|pi| route_in_two(&g, pi).is_some());
            assert_eq!(all, g.is_complete(), "n = {n}, edges {:?}", g.edges());
        }
    }
}
