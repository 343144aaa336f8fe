//! Acceptance criteria. Each test writes one `ACCEPTANCE <n> ... PASS|FAIL`
//! line to stderr (bypassing the test harness capture) and then asserts.

mod common;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use posted_price::experiment::{
    check_model, demo_lower_bound, fit_power_law, output, rows_from_outcomes, run_sweep, trial_seed,
    Algorithm, Experiment, ExperimentConfig, ModelConfig, TrialOptions,
};
use posted_price::models::{random_regular, two_type_example};
use posted_price::pricing::{oracle_optimal_price, SearchState, ORACLE_TOLERANCE};
use posted_price::{
    check_regularity, inverse_marginal, marginal_utility, sample_type, tv_distance, ConsumerType,
    TypeCounts, UtilityFamily, UtilitySpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("ACCEPTANCE {id} {name}: {verdict} ({detail})\n");
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn config(name: &str) -> ExperimentConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    ExperimentConfig::load(&path).unwrap()
}

#[test]
fn criterion_1_worked_example() {
    let start = Instant::now();
    let oracle = oracle_optimal_price(&two_type_example(), ORACLE_TOLERANCE).unwrap();
    let demo = demo_lower_bound().unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    let n = 1_000_000;
    let (grid_p, grid_r) = (0..=n)
        .map(|k| {
            let p = 0.1 + k as f64 / n as f64;
            (p, common::two_type_revenue([0.1, 0.9], p))
        })
        .fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });

    let checks = [
        ("p*", (oracle.price[0] - 0.438).abs() <= 0.005),
        ("revenue", (oracle.revenue - 0.2945).abs() <= 1e-4),
        ("grid price", (oracle.price[0] - grid_p).abs() <= 2e-6),
        ("grid revenue", (oracle.revenue - grid_r).abs() <= 1e-6),
        ("misestimated price", (demo.misestimated_price - 0.324).abs() <= 0.005),
        ("revenue at misestimated < 0.274", demo.revenue_at_misestimated < 0.274),
        ("runtime", elapsed < 1.0),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let detail = format!(
        "p*={:.6} R*={:.6} grid=({grid_p:.6},{grid_r:.6}) p_mis={:.6} R(p_mis)={:.7} at 0.324: {:.7} {elapsed:.3}s failed={failed:?}",
        oracle.price[0],
        oracle.revenue,
        demo.misestimated_price,
        demo.revenue_at_misestimated,
        common::two_type_revenue([0.1, 0.9], 0.324),
    );
    report(1, "worked example", failed.is_empty(), &detail);
    assert!(failed.is_empty(), "{detail}");
}

#[test]
fn criterion_2_regret_exponents() {
    let one_time = run_sweep(&config("two_type_one_time.json"), None).unwrap();
    let geometric = run_sweep(&config("two_type_geometric.json"), None).unwrap();
    let s1 = one_time.exponent.unwrap().slope;
    let s2 = geometric.exponent.unwrap().slope;
    let last1 = one_time.aggregates.last().unwrap();
    let last2 = geometric.aggregates.last().unwrap();
    assert_eq!(last1.horizon, 1_000_000);
    assert_eq!(last2.horizon, 1_000_000);

    let checks = [
        ("one-time slope in [0.55,0.80]", (0.55..=0.80).contains(&s1)),
        ("geometric slope in [0.40,0.65]", (0.40..=0.65).contains(&s2)),
        ("geometric below one-time at 1e6", last2.mean_regret < last1.mean_regret),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let means = |r: &posted_price::experiment::SweepResult| {
        r.aggregates.iter().map(|a| format!("{:.1}", a.mean_regret)).collect::<Vec<_>>().join("/")
    };
    let detail = format!(
        "one-time slope {s1:.4} [{}], geometric slope {s2:.4} [{}], failed={failed:?}",
        means(&one_time),
        means(&geometric)
    );
    report(2, "regret exponents", failed.is_empty(), &detail);
    assert!(failed.is_empty(), "{detail}");
}

fn random_spec(rng: &mut ChaCha8Rng) -> UtilitySpec {
    let family = if rng.gen_bool(0.5) {
        UtilityFamily::LogLike
    } else {
        UtilityFamily::ExpLike
    };
    UtilitySpec::new(family, rng.gen_range(0.05..5.0), rng.gen_range(0.05..5.0)).unwrap()
}

/// Largest second difference of `r` on `points` evenly spaced prices.
fn max_second_difference(r: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> f64 {
    let step = (hi - lo) / (points - 1) as f64;
    (1..points - 1)
        .map(|i| {
            let p = lo + i as f64 * step;
            r(p - step) - 2.0 * r(p) + r(p + step)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn criterion_3_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failed: Vec<String> = Vec::new();

    // (a) round trips and finite differences
    let h = 1e-5;
    let mut worst_round_trip: f64 = 0.0;
    for _ in 0..2000 {
        let spec = random_spec(&mut rng);
        let p = rng.gen_range(0.001..0.999) * spec.choke_price();
        let k = inverse_marginal(&spec, p).unwrap();
        if k > 0.0 {
            worst_round_trip = worst_round_trip.max((marginal_utility(&spec, k).unwrap() - p).abs());
        }
        let k = rng.gen_range(0.01..5.0);
        let scale = spec.alpha() * spec.beta().powi(4).max(1.0);
        let v1 = |x: f64| marginal_utility(&spec, x).unwrap();
        let d1 = (spec.value(k + h) - spec.value(k - h)) / (2.0 * h);
        let d2 = (v1(k + h) - v1(k - h)) / (2.0 * h);
        let d3 = (spec.second_derivative(k + h) - spec.second_derivative(k - h)) / (2.0 * h);
        let b = spec.beta();
        if (d1 - v1(k)).abs() > 10.0 * scale * h * h + 1e-9 * scale
            || (d2 - spec.second_derivative(k)).abs() > 10.0 * scale * b * h * h + 1e-9 * scale
            || (d3 - spec.third_derivative(k)).abs() > 10.0 * scale * b * b * h * h + 1e-9 * scale
        {
            failed.push(format!("finite differences {spec:?} at {k}"));
        }
    }
    if worst_round_trip > 1e-12 {
        failed.push(format!("round trip {worst_round_trip:e}"));
    }

    // (b) concavity where regular, enforcement where not
    let mut concave_models = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=3);
        let market = random_regular(&mut rng, n, m);
        assert!(market.is_regular());
        for j in 0..m {
            let c = market.config.costs()[j];
            let worst = max_second_difference(|p| market.product_revenue(j, p), c, c + 1.0, 1000);
            if worst > 1e-8 {
                failed.push(format!("second difference {worst:e} on a regular model"));
            }
        }
        concave_models += 1;
    }
    // Worked example: concave up to the first no-purchase threshold at p = 1.
    let example = two_type_example();
    let worst = max_second_difference(|p| example.product_revenue(0, p), 0.1, 1.0, 1000);
    if worst > 1e-8 {
        failed.push(format!("worked example second difference {worst:e}"));
    }
    let steep = UtilitySpec::log_like(4.0, 1.0).unwrap();
    let steep_report = check_regularity(&steep, 0.1).unwrap();
    let steep_model = ModelConfig {
        weights: vec![1.0],
        costs: vec![0.1],
        types: vec![ConsumerType::new(vec![steep])],
    };
    let rows = check_model(&steep_model).unwrap();
    let steep_worst = max_second_difference(|p| common::quantity(&steep, p) * (p - 0.1), 0.1, 1.1, 1000);
    let enforced = (!steep_report.third_order_ok && rows[0].failed_conditions().contains(&"third-order"))
        || steep_worst > 1e-8;
    if !enforced {
        failed.push("irregular model accepted".into());
    }
    let steep_market = steep_model.build().unwrap();
    if oracle_optimal_price(&steep_market, ORACLE_TOLERANCE).is_ok() {
        failed.push("oracle solved an irregular model".into());
    }

    // (c) TV metric axioms
    let simplex = |rng: &mut ChaCha8Rng, n: usize| {
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let s: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / s).collect::<Vec<f64>>()
    };
    for _ in 0..2000 {
        let n = rng.gen_range(1..=6);
        let (p, q, r) = (simplex(&mut rng, n), simplex(&mut rng, n), simplex(&mut rng, n));
        let pq = tv_distance(&p, &q).unwrap();
        let ok = (pq - tv_distance(&q, &p).unwrap()).abs() <= 1e-15
            && tv_distance(&p, &p).unwrap() <= 1e-12
            && (0.0..=1.0).contains(&pq)
            && pq <= tv_distance(&p, &r).unwrap() + tv_distance(&r, &q).unwrap() + 1e-12;
        if !ok {
            failed.push(format!("tv axioms on {p:?} {q:?} {r:?}"));
        }
    }

    // (d) regret nonnegative and curve non-decreasing on 100 seeds
    let model = ModelConfig::from_market(&example);
    let options = TrialOptions {
        keep_trajectory: true,
        decomposition: false,
    };
    for algorithm in [Algorithm::OneTime, Algorithm::Geometric] {
        let exp = Experiment::new(ExperimentConfig::new(model.clone(), algorithm)).unwrap();
        for seed in 0..100 {
            let o = exp.run_trial(10_000, trial_seed(99, seed), options).unwrap();
            let curve = o.ledger.regret_curve();
            let monotone = curve.windows(2).all(|w| w[1].1 >= w[0].1);
            let consistent = (curve.last().unwrap().1 - o.ledger.cumulative_regret()).abs() < 1e-9;
            if o.ledger.min_gap() < -1e-12 || !monotone || !consistent {
                failed.push(format!("regret curve seed {seed}"));
            }
        }
    }

    let detail = format!(
        "round trip {worst_round_trip:.1e}, {concave_models} regular models concave, LogLike(4,1) sup v'''={} -> {:?}, failures={}",
        steep_report.third_derivative_sup,
        rows[0].failed_conditions(),
        failed.len()
    );
    report(3, "invariants", failed.is_empty(), &detail);
    assert!(failed.is_empty(), "{detail}: {failed:?}");
}

#[test]
fn criterion_4_search_matches_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut models = Vec::new();
    for _ in 0..5 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=3);
        let market = random_regular(&mut rng, n, m);
        models.push(format!("{n}x{m}"));
        let weights = market.population.weights();
        for j in 0..m {
            let types = market.population.types();
            let mut search = SearchState::new(market.config.costs()[j], n);
            while search.steps() < 20 {
                let p = search.emit();
                let i = rng.gen_range(0..n);
                search.observe(i, common::quantity(&types[i].utilities[j], p), weights);
            }
            let (grid_p, _) = common::market_grid_argmax(&market, j, 1_000_001);
            worst = worst.max((search.candidate() - grid_p).abs());
        }
    }
    let pass = worst <= 1e-3;
    let detail = format!("models (types x products) {models:?}, worst |candidate - grid| = {worst:.2e} after 20 steps");
    report(4, "search vs grid oracle", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_5_empirical_tv_rate() {
    let population = two_type_example().population;
    let sizes = [100u64, 1_000, 10_000, 100_000];
    let trials = 200;
    let mut points = Vec::new();
    for &t in &sizes {
        let mut total = 0.0;
        for k in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(5, k));
            let mut counts = TypeCounts::new(2);
            for _ in 0..t {
                counts.record(sample_type(&population, &mut rng)).unwrap();
            }
            total += tv_distance(population.weights(), &counts.empirical_weights().unwrap()).unwrap();
        }
        points.push((t as f64, total / trials as f64));
    }
    let fit = fit_power_law(&points).unwrap();
    let pass = (fit.slope + 0.5).abs() <= 0.1;
    let detail = format!(
        "slope {:.4} +/- {:.4}, mean TV {:?}",
        fit.slope,
        fit.slope_stderr,
        points.iter().map(|p| format!("{:.2e}", p.1)).collect::<Vec<_>>()
    );
    report(5, "empirical TV rate", pass, &detail);
    assert!(pass, "{detail}");
}

fn read_dir_bytes(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .filter(|e| e.file_type().unwrap().is_file())
        .map(|e| (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap()))
        .collect();
    files.sort();
    files
}

/// Every CSV the command line tool writes, produced through the library.
fn write_all_outputs(dir: &std::path::Path, workers: usize) {
    let mut cfg = config("two_type_geometric.json");
    cfg.horizons = vec![2_000, 5_000, 10_000];
    cfg.trials = 8;
    let sweep = run_sweep(&cfg, Some(workers)).unwrap();
    output::write_sweep(&dir.join("sweep"), &sweep).unwrap();

    let exp = Experiment::new(cfg.clone()).unwrap();
    let o = exp
        .run_trial(
            20_000,
            trial_seed(cfg.seed, 0),
            TrialOptions {
                keep_trajectory: true,
                decomposition: false,
            },
        )
        .unwrap();
    output::write_trials(&dir.join("simulate_trials.csv"), "geometric", 1, &rows_from_outcomes(std::slice::from_ref(&o))).unwrap();
    output::write_curve(&dir.join(output::CURVE_FILE), &o.ledger).unwrap();
    output::write_regularity(&dir.join(output::REGULARITY_FILE), &check_model(&cfg.model).unwrap()).unwrap();
    output::write_solution(&dir.join(output::SOLUTION_FILE), &exp.oracle).unwrap();
    output::write_demo(&dir.join(output::DEMO_FILE), &demo_lower_bound().unwrap()).unwrap();
}

#[test]
fn criterion_6_deterministic_csv() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    write_all_outputs(a.path(), 1);
    write_all_outputs(b.path(), 3);
    let (fa, fb) = (read_dir_bytes(a.path()), read_dir_bytes(b.path()));
    let (sa, sb) = (read_dir_bytes(&a.path().join("sweep")), read_dir_bytes(&b.path().join("sweep")));
    let pass = fa == fb && sa == sb && !sa.is_empty();
    let detail = format!("{} files compared across 1 and 3 workers", fa.len() + sa.len());
    report(6, "deterministic CSV", pass, &detail);
    assert!(pass, "{detail}");
}
