//! Cross-module checks: the Monte Carlo oracle against the transform and
//! inversion pipelines on randomized models.

use duo_standby_core::rng::SplitMix64;
use duo_standby_core::simulator::{lst_from, run_replications, survival_from, Execution};
use duo_standby_core::{inversion, transform, DistributionSpec, ServerId, SystemModel};

fn random_exp_models(count: usize, seed: u64) -> Vec<SystemModel> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let mut d = || DistributionSpec::exponential(0.3 + 2.5 * rng.next_f64()).unwrap();
            SystemModel::new(d(), d(), d(), d(), ServerId::One).unwrap()
        })
        .collect()
}

#[test]
fn simulator_matches_transform_on_random_exponential_models() {
    for (idx, m) in random_exp_models(5, 991).iter().enumerate() {
        let outcomes = run_replications(m, 100_000, 1000 + idx as u64, 1_000_000, Execution::Parallel);
        for s in [0.5, 1.0, 2.0] {
            let analytic = transform::system_lst_closed(m, s).unwrap().value;
            let (mc, se) = lst_from(&outcomes, s);
            assert!(
                (mc - analytic).abs() <= 4.0 * se,
                "model {idx} s={s}: |{mc} - {analytic}| > 4 * {se}"
            );
        }
    }
}

#[test]
fn simulator_matches_inversion_on_random_exponential_models() {
    for (idx, m) in random_exp_models(3, 555).iter().enumerate() {
        let mttf = transform::moment(m, 1).unwrap();
        let outcomes = run_replications(m, 100_000, 7_000 + idx as u64, 1_000_000, Execution::Parallel);
        let ts: Vec<f64> = (1..=8).map(|i| mttf * i as f64 / 4.0).collect();
        for est in survival_from(&outcomes, &ts) {
            let analytic = inversion::survival(m, est.t).unwrap().survival;
            let tol = (4.0 * est.std_error).max(2e-3);
            assert!(
                (est.fraction - analytic).abs() <= tol,
                "model {idx} t={}: |{} - {analytic}| > {tol}",
                est.t,
                est.fraction
            );
        }
    }
}

#[test]
fn censored_replications_bound_the_transform_estimate_from_above() {
    // repair always strictly faster than work: every history is censored at
    // the cap with lifetime exactly cap * work, so the estimator returns
    // e^{-s * lifetime_so_far} exactly and counts every replication.
    let m = SystemModel::symmetric("det(1)".parse().unwrap(), "det(0.5)".parse().unwrap()).unwrap();
    let outcomes = run_replications(&m, 100, 3, 10, Execution::Serial);
    assert!(outcomes.iter().all(|o| o.censored && o.lifetime == 10.0));
    let (est, se) = lst_from(&outcomes, 0.5);
    assert_eq!(est, (-5.0f64).exp());
    assert_eq!(se, 0.0);
    // the true transform of the never-failing system is 0: the censored
    // contribution is an upper bound
    let truth = transform::system_lst_closed(&m, 0.5).unwrap().value;
    assert!(est >= truth);
}

#[test]
fn simulator_honors_relabeling() {
    let m = SystemModel::new(
        "exp(1)".parse().unwrap(),
        "uniform(0,2)".parse().unwrap(),
        "det(0.4)".parse().unwrap(),
        "exp(3)".parse().unwrap(),
        ServerId::Two,
    )
    .unwrap();
    let swapped = SystemModel::new(
        "uniform(0,2)".parse().unwrap(),
        "exp(1)".parse().unwrap(),
        "exp(3)".parse().unwrap(),
        "det(0.4)".parse().unwrap(),
        ServerId::One,
    )
    .unwrap();
    let a = run_replications(&m, 1000, 17, 1_000_000, Execution::Serial);
    let b = run_replications(&swapped, 1000, 17, 1_000_000, Execution::Serial);
    assert_eq!(a, b);
}
