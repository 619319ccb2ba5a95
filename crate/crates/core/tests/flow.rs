mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use temporal_cluster::flow::{decompose_paths, min_feasible_flow};

#[test]
fn minimum_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut feasible = 0;
    for _ in 0..300 {
        let net = common::random_network(&mut rng);
        let got = min_feasible_flow(&net);
        assert_eq!(got.as_ref().map(|f| f.value), common::brute_min_flow(&net));
        if let Some(f) = got {
            feasible += 1;
            f.check(&net).unwrap();
            let paths = decompose_paths(&net, &f).unwrap();
            assert_eq!(paths.len() as u64, f.value);
            let mut used = vec![0u64; net.edges().len()];
            for path in &paths {
                assert_eq!(net.edges()[path[0]].from, net.source());
                assert_eq!(net.edges()[*path.last().unwrap()].to, net.sink());
                for w in path.windows(2) {
                    assert_eq!(net.edges()[w[0]].to, net.edges()[w[1]].from);
                }
                for &e in path {
                    used[e] += 1;
                }
            }
            assert_eq!(used, f.flow);
            for (e, edge) in net.edges().iter().enumerate() {
                if edge.lower > 0 {
                    assert!(used[e] > 0);
                }
            }
        }
    }
    assert!(feasible > 50, "only {feasible} feasible networks");
}
