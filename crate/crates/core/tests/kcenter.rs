mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use temporal_cluster::generators::{gen_setcover_metric, SetCoverInstance};
use temporal_cluster::kcenter::{
    best_new_tube, level_nets, rds_greedy_run, solve_bicriteria, solve_exact_k, solve_rds_greedy,
    CoverageState,
};
use temporal_cluster::oracle::{enumerate_trajectories, oracle_feasible, oracle_opt_k, OracleBudget};
use temporal_cluster::{check_solution, Objective, PointId, SolveOutcome, Trajectory};

fn ln_bound(n: usize) -> usize {
    ((n as f64).ln().ceil() as usize).max(1)
}

#[test]
fn solvers_agree_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut feasible = 0;
    for _ in 0..400 {
        let p = common::random_instance(&mut rng, 4, 3, 6);
        let k = rng.gen_range(1..=3);
        let r = common::random_radius(&mut rng, &p);
        let delta = common::random_radius(&mut rng, &p);
        let witness = oracle_feasible(&p, k, r, delta, Objective::Center, OracleBudget::default())
            .unwrap();

        let exact = solve_exact_k(&p, k, r, delta).unwrap();
        let bicriteria = solve_bicriteria(&p, k, r, delta).unwrap();
        if let Some(c) = exact.clustering() {
            assert!(check_solution(&p, c, k, 2.0 * r, 2.0 * r + delta, Objective::Center)
                .unwrap()
                .passed());
        }
        if let Some(c) = bicriteria.clustering() {
            assert!(check_solution(&p, c, 2 * k, 2.0 * r, r + delta, Objective::Center)
                .unwrap()
                .passed());
        }
        if witness.is_some() {
            feasible += 1;
            assert!(exact.is_feasible(), "exact-k false infeasible: {exact:?}");
            assert!(bicriteria.is_feasible(), "bicriteria false infeasible");
            for net in level_nets(&p, 2.0 * r) {
                assert!(net.len() <= k);
            }
        }

        let greedy = solve_rds_greedy(&p, r, delta).unwrap();
        let opt = oracle_opt_k(&p, r, delta, Objective::Center, OracleBudget::default()).unwrap();
        match (&greedy, opt) {
            (SolveOutcome::Clustering(c), Some((opt_k, _))) => {
                let report = check_solution(&p, c, usize::MAX, r, delta, Objective::Center).unwrap();
                assert!(report.passed());
                assert!(c.len() <= ln_bound(p.size()) * opt_k);
            }
            (SolveOutcome::Infeasible(_), None) => {}
            other => panic!("greedy and oracle disagree: {other:?}"),
        }
    }
    assert!(feasible > 100, "only {feasible} feasible draws");
}

#[test]
fn tube_dp_is_optimal_every_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 150 {
        let p = common::random_instance(&mut rng, 4, 3, 6);
        let r = common::random_radius(&mut rng, &p);
        let delta = common::random_radius(&mut rng, &p);
        let Ok(all) = enumerate_trajectories(
            &p,
            delta,
            OracleBudget {
                max_trajectories: 200,
                ..OracleBudget::default()
            },
        ) else {
            continue;
        };
        checked += 1;
        let mut state = CoverageState::new(&p);
        loop {
            let best = best_new_tube(&p, r, delta, &state);
            let exhaustive = all
                .iter()
                .map(|tau| state.clone().cover_tube(&p, tau, r))
                .max();
            assert_eq!(best.as_ref().map(|b| b.1), exhaustive);
            match best {
                Some((tau, gain)) if gain > 0 => {
                    assert!(tau.displacement(p.metric()) <= delta);
                    state.cover_tube(&p, &tau, r);
                }
                _ => break,
            }
        }
    }
}

#[test]
fn greedy_gains_never_increase() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..300 {
        let p = common::random_instance(&mut rng, 5, 4, 8);
        let r = common::random_radius(&mut rng, &p);
        let delta = common::random_radius(&mut rng, &p);
        let run = rds_greedy_run(&p, r, delta).unwrap();
        assert!(run.gains.windows(2).all(|w| w[0] >= w[1]), "{:?}", run.gains);
    }
}

#[test]
fn example_dominating_set() {
    let sc = SetCoverInstance::example();
    let p = gen_setcover_metric(&sc).unwrap();
    let state = CoverageState::new(&p);
    let (tau, count) = best_new_tube(&p, 1.0, 0.0, &state).unwrap();
    assert_eq!(tau, Trajectory::new(vec![sc.set_point(1)]));
    assert_eq!(count, 9);

    let out = solve_rds_greedy(&p, 1.0, 0.0).unwrap();
    let centers: Vec<PointId> = out
        .clustering()
        .unwrap()
        .trajectories()
        .iter()
        .map(|t| t.at(0))
        .collect();
    assert_eq!(centers, [sc.set_point(1), sc.set_point(0), sc.set_point(2)]);

    let budget = OracleBudget::default();
    let (opt, _) = oracle_opt_k(&p, 1.0, 0.0, Objective::Center, budget).unwrap().unwrap();
    assert_eq!(opt, 3);
    assert!(oracle_feasible(&p, 3, 1.0, 0.0, Objective::Center, budget).unwrap().is_some());
    assert!(oracle_feasible(&p, 2, 1.0, 0.0, Objective::Center, budget).unwrap().is_none());
}

#[test]
fn random_set_cover_greedy_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let universe = rng.gen_range(1..=7);
        let sets: Vec<Vec<usize>> = (0..rng.gen_range(1..=5))
            .map(|_| (0..universe).filter(|_| rng.gen_bool(0.4)).collect())
            .collect();
        let sc = SetCoverInstance::new(universe, sets).unwrap();
        let p = gen_setcover_metric(&sc).unwrap();
        let greedy = solve_rds_greedy(&p, 1.0, 0.0).unwrap();
        let (opt, _) = oracle_opt_k(&p, 1.0, 0.0, Objective::Center, OracleBudget::default())
            .unwrap()
            .unwrap();
        assert!(greedy.clustering().unwrap().len() <= ln_bound(p.size()) * opt);
    }
}
