//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Run with `cargo test -p duo-standby --test acceptance -- --nocapture`.

use std::io::Write;
use std::process::{Command, Output};

use duo_standby_core::rng::SplitMix64;
use duo_standby_core::simulator::{
    self, lst_from, run_replications, summarize, survival_from, Execution,
};
use duo_standby_core::{inversion, transform, DistributionSpec, ServerId, SystemModel};

fn all_exp_unit() -> SystemModel {
    let e: DistributionSpec = "exp(1)".parse().unwrap();
    SystemModel::symmetric(e, e).unwrap()
}

/// Analytic survival of the all-exp(1) model: two-exponential formula from
/// the partial fractions of `1/(s^2 + 3 s + 1)` (roots `(-3 +/- sqrt 5)/2`).
fn analytic_survival(t: f64) -> f64 {
    let s5 = 5f64.sqrt();
    let r1 = (-3.0 + s5) / 2.0;
    let r2 = (-3.0 - s5) / 2.0;
    ((r2 * t).exp() / r2 - (r1 * t).exp() / r1) / s5
}

/// 200 seeded models over the exponential/uniform/deterministic families.
fn randomized_models() -> Vec<SystemModel> {
    let mut rng = SplitMix64::new(0xACCE97);
    let dist = |rng: &mut SplitMix64| -> DistributionSpec {
        let a = 0.2 + 2.8 * rng.next_f64();
        let b = 0.2 + 2.8 * rng.next_f64();
        match (rng.next_u64() % 3) as u8 {
            0 => DistributionSpec::exponential(a).unwrap(),
            1 => DistributionSpec::uniform(0.1 * a, 0.1 * a + b).unwrap(),
            _ => DistributionSpec::deterministic(a).unwrap(),
        }
    };
    (0..200)
        .map(|_| {
            SystemModel::new(
                dist(&mut rng),
                dist(&mut rng),
                dist(&mut rng),
                dist(&mut rng),
                ServerId::One,
            )
            .unwrap()
        })
        .collect()
}

#[test]
fn criterion_1_golden_closed_form() {
    let m = all_exp_unit();
    for i in 0..50 {
        let s = 10.0 * i as f64 / 49.0;
        let got = transform::system_lst_closed(&m, s).unwrap().value;
        let want = 1.0 / (1.0 + 3.0 * s + s * s);
        assert!(
            (got - want).abs() <= 1e-10,
            "s={s}: |{got} - {want}| > 1e-10"
        );
    }
    println!("acceptance criterion 1 (golden closed form): PASS");
}

#[test]
fn criterion_2_three_method_agreement() {
    for (idx, m) in randomized_models().iter().enumerate() {
        for s in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let closed = transform::system_lst_closed(m, s).unwrap();
            let fixed = transform::system_lst_fixed_point(m, s).unwrap();
            assert!(
                (closed.value - fixed.system_lst).abs() <= 1e-10,
                "model {idx} s={s}: closed {} vs fixed {}",
                closed.value,
                fixed.system_lst
            );
            let mut prev = 0.0;
            for k in [1u32, 2, 5, 10] {
                let sc = transform::system_lst_scenario_sum(m, s, k).unwrap();
                assert!(
                    sc.value + 1e-15 >= prev,
                    "model {idx} s={s}: partial sums not monotone at K={k}"
                );
                assert!(
                    (sc.value - closed.value).abs() <= sc.abs_error_estimate,
                    "model {idx} s={s} K={k}: dev {} > bound {}",
                    (sc.value - closed.value).abs(),
                    sc.abs_error_estimate
                );
                prev = sc.value;
            }
        }
    }
    println!("acceptance criterion 2 (three-method agreement, 200 random models): PASS");
}

#[test]
fn criterion_3_normalization_and_monotonicity() {
    let mut tested = 0;
    for (idx, m) in randomized_models().iter().enumerate() {
        let product = transform::phi(m, ServerId::One, 0.0).unwrap().value
            * transform::phi(m, ServerId::Two, 0.0).unwrap().value;
        if product < 1.0 - 1e-6 {
            let at0 = transform::system_lst_closed(m, 0.0).unwrap().value;
            assert!((at0 - 1.0).abs() <= 1e-9, "model {idx}: L(0) = {at0}");
            tested += 1;
        }
        let mut last = f64::INFINITY;
        for s in [0.0f64, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            if s == 0.0 && product >= 1.0 - 1e-6 {
                continue;
            }
            let v = transform::system_lst_closed(m, s).unwrap().value;
            assert!((0.0..=1.0).contains(&v), "model {idx}: L({s}) = {v}");
            assert!(
                v <= last + 1e-10,
                "model {idx}: L not nonincreasing at s={s}"
            );
            last = v;
        }
    }
    assert!(tested > 100, "properness filter left too few models: {tested}");
    println!("acceptance criterion 3 (normalization and monotonicity): PASS");
}

#[test]
fn criterion_4_mttf_golden_case() {
    let m = all_exp_unit();
    let m1 = transform::moment(&m, 1).unwrap();
    assert!((m1 - 3.0).abs() <= 1e-6, "MTTF {m1}");
    let m2 = transform::moment(&m, 2).unwrap();
    assert!((m2 - 16.0).abs() <= 1e-4, "second moment {m2}");
    println!("acceptance criterion 4 (MTTF golden case): PASS");
}

#[test]
fn criterion_5_inversion_accuracy() {
    let m = all_exp_unit();
    for i in 1..=20 {
        let t = 0.25 * i as f64;
        let got = inversion::survival(&m, t).unwrap().survival;
        let want = analytic_survival(t);
        assert!(
            (got - want).abs() <= 1e-3,
            "t={t}: |{got} - {want}| > 1e-3"
        );
    }
    println!("acceptance criterion 5 (inversion vs analytic survival): PASS");
}

#[test]
fn criterion_6_simulator_cross_validation() {
    let m = all_exp_unit();
    let n = 100_000;
    let outcomes = run_replications(&m, n, 20240, 1_000_000, Execution::Parallel);

    let summary = summarize(&outcomes, 20240);
    assert!(
        (summary.mean - 3.0).abs() <= 4.0 * summary.std_error,
        "mean {} se {}",
        summary.mean,
        summary.std_error
    );

    let (lst, lst_se) = lst_from(&outcomes, 1.0);
    assert!(
        (lst - 0.2).abs() <= 4.0 * lst_se,
        "lst estimate {lst} se {lst_se}"
    );

    let ts: Vec<f64> = (1..=10).map(|i| 0.5 * i as f64).collect();
    for est in survival_from(&outcomes, &ts) {
        let analytic = inversion::survival(&m, est.t).unwrap().survival;
        let tol = (4.0 * est.std_error).max(2e-3);
        assert!(
            (est.fraction - analytic).abs() <= tol,
            "t={}: |{} - {analytic}| > {tol}",
            est.t,
            est.fraction
        );
    }
    println!("acceptance criterion 6 (simulator cross-validation at n=1e5): PASS");
}

fn duo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_duo-standby"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(body.as_bytes()).unwrap();
    path.to_str().unwrap().to_string()
}

const GOLDEN_CONFIG: &str = r#"
[model]
work1 = "exp(1.0)"
work2 = "exp(1.0)"
repair1 = "exp(1.0)"
repair2 = "exp(1.0)"
"#;

#[test]
fn criterion_7_determinism() {
    // library level: serial vs parallel replications are bit-identical
    let m = all_exp_unit();
    let serial = run_replications(&m, 50_000, 7, 1_000_000, Execution::Serial);
    let parallel = run_replications(&m, 50_000, 7, 1_000_000, Execution::Parallel);
    assert_eq!(serial, parallel);

    // CLI level: byte-identical output across runs and execution modes
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "golden.toml", GOLDEN_CONFIG);
    for command in ["simulate", "compare"] {
        let a = duo(&[command, "--config", &cfg, "--seed", "20240"]);
        let b = duo(&[command, "--config", &cfg, "--seed", "20240"]);
        let c = duo(&[command, "--config", &cfg, "--seed", "20240", "--serial"]);
        assert!(a.status.success(), "{command} failed");
        assert_eq!(a.stdout, b.stdout, "{command}: repeat run differs");
        assert_eq!(a.stdout, c.stdout, "{command}: serial differs from parallel");
    }
    println!("acceptance criterion 7 (byte-identical determinism): PASS");
}

#[test]
fn criterion_8_error_paths() {
    // det(0) repairs: non-terminating system, exit code 3
    let dir = tempfile::tempdir().unwrap();
    let nonterm = write_config(
        &dir,
        "nonterm.toml",
        r#"
[model]
work1 = "exp(1.0)"
work2 = "exp(1.0)"
repair1 = "det(0)"
repair2 = "det(0)"
"#,
    );
    let out = duo(&["moments", "--config", &nonterm]);
    assert_eq!(out.status.code(), Some(3));
    let record: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stderr).unwrap().trim()).unwrap();
    assert_eq!(record["error"], "non-terminating system");

    // det-tie model: repair finishing exactly at the failure is a failure,
    // so the lifetime is exactly two work periods
    let tie = SystemModel::symmetric("det(1)".parse().unwrap(), "det(1)".parse().unwrap()).unwrap();
    let mut rng = SplitMix64::new(1);
    let o = simulator::simulate_lifetime(&tie, &mut rng, 1000);
    assert_eq!(o.lifetime, 2.0);
    assert_eq!(o.cycles, 2);
    assert!(!o.censored);

    let tie_cfg = write_config(
        &dir,
        "tie.toml",
        r#"
[model]
work1 = "det(1)"
work2 = "det(1)"
repair1 = "det(1)"
repair2 = "det(1)"
"#,
    );
    let out = duo(&["simulate", "--config", &tie_cfg, "--n", "100", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["mean"].as_f64().unwrap(), 2.0);
    println!("acceptance criterion 8 (error paths and tie convention): PASS");
}
