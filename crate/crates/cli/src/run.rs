//! Command dispatch: turns a validated [`RunConfig`] into a rendered report.

use duo_standby_core::simulator::{
    lst_from, run_replications, summarize, survival_from, Execution, ReplicationOutcome,
};
use duo_standby_core::{inversion, transform, Error as CoreError, SystemModel};

use crate::config::{CommandKind, Params, RunConfig};
use crate::report::{
    CompareReport, CompareRow, LstReport, LstRow, MomentRow, MomentsReport, QuantileReport,
    Report, SimulateReport, SurvivalReport, SurvivalRow,
};

/// Default transform grid for the `lst` command.
const LST_S_GRID: [f64; 6] = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0];
/// Default transform grid for `compare` (the estimator needs s > 0).
const COMPARE_S_GRID: [f64; 3] = [0.5, 1.0, 2.0];
/// Default grid sizes: survival curves and comparison grids.
const SURVIVAL_POINTS: u32 = 64;
const COMPARE_POINTS: u32 = 10;
/// Default time horizon as a multiple of the mean time to failure.
const T_MAX_MTTF_MULTIPLE: f64 = 5.0;

/// Rendered command output plus the compare verdict (drives exit code 1).
#[derive(Debug)]
pub struct RunOutput {
    pub body: String,
    pub compare_failed: bool,
}

pub fn execute(config: &RunConfig) -> Result<RunOutput, CoreError> {
    let report = match config.command {
        CommandKind::Lst => run_lst(&config.model, &config.params)?,
        CommandKind::Moments => run_moments(&config.model, &config.params)?,
        CommandKind::Survival => run_survival(&config.model, &config.params)?,
        CommandKind::Quantile => run_quantile(&config.model, &config.params)?,
        CommandKind::Simulate => run_simulate(&config.model, &config.params)?,
        CommandKind::Compare => run_compare(&config.model, &config.params)?,
    };
    let compare_failed = matches!(&report, Report::Compare(r) if !r.passed());
    Ok(RunOutput {
        body: report.render(config.format),
        compare_failed,
    })
}

fn execution(params: &Params) -> Execution {
    if params.serial {
        Execution::Serial
    } else {
        Execution::Parallel
    }
}

fn default_t_grid(model: &SystemModel, params: &Params, points: u32) -> Result<Vec<f64>, CoreError> {
    let t_max = match params.t_max {
        Some(t) => t,
        None => T_MAX_MTTF_MULTIPLE * transform::moment(model, 1)?,
    };
    Ok((1..=points)
        .map(|i| t_max * i as f64 / points as f64)
        .collect())
}

fn run_lst(model: &SystemModel, params: &Params) -> Result<Report, CoreError> {
    let grid = params
        .s_grid
        .clone()
        .unwrap_or_else(|| LST_S_GRID.to_vec());
    let k = params.scenario_k;
    let mut rows = Vec::with_capacity(grid.len());
    for s in grid {
        let closed = transform::system_lst_closed(model, s)?;
        let fixed = transform::system_lst_fixed_point(model, s)?;
        let scenario = transform::system_lst_scenario_sum(model, s, k)?;
        let max_abs_dev = (closed.value - fixed.system_lst)
            .abs()
            .max((closed.value - scenario.value).abs());
        rows.push(LstRow {
            s,
            lst_closed: closed.value,
            lst_fixed_point: fixed.system_lst,
            lst_scenario_sum: scenario.value,
            scenario_k: k,
            max_abs_dev,
        });
    }
    Ok(Report::Lst(LstReport { rows }))
}

fn run_moments(model: &SystemModel, params: &Params) -> Result<Report, CoreError> {
    let rows = params
        .orders
        .iter()
        .map(|&n| {
            transform::moment(model, n).map(|moment| MomentRow { n, moment })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Report::Moments(MomentsReport { rows }))
}

fn run_survival(model: &SystemModel, params: &Params) -> Result<Report, CoreError> {
    let points = params.points.unwrap_or(SURVIVAL_POINTS);
    let t_max = match params.t_max {
        Some(t) => t,
        None => T_MAX_MTTF_MULTIPLE * transform::moment(model, 1)?,
    };
    let curve = inversion::survival_curve(model, t_max, points)?;
    Ok(Report::Survival(SurvivalReport {
        method: "gaver_stehfest".into(),
        rows: curve
            .points
            .iter()
            .map(|p| SurvivalRow {
                t: p.t,
                survival: p.survival,
                abs_error_estimate: p.abs_error_estimate,
            })
            .collect(),
    }))
}

fn run_quantile(model: &SystemModel, params: &Params) -> Result<Report, CoreError> {
    let t = inversion::quantile(model, params.p)?;
    Ok(Report::Quantile(QuantileReport { p: params.p, t }))
}

fn run_simulate(model: &SystemModel, params: &Params) -> Result<Report, CoreError> {
    let outcomes = run_replications(
        model,
        params.n,
        params.seed,
        params.max_cycles,
        execution(params),
    );
    let s = summarize(&outcomes, params.seed);
    Ok(Report::Simulate(SimulateReport {
        n: s.n,
        seed: s.seed,
        mean: s.mean,
        variance: s.variance,
        std_error: s.std_error,
        ci_lo: s.ci95.0,
        ci_hi: s.ci95.1,
        censored_count: s.censored_count,
        label: s.label().into(),
    }))
}

fn z_score(analytic: f64, estimate: f64, stderr: f64) -> f64 {
    let diff = estimate - analytic;
    if stderr == 0.0 {
        if diff.abs() <= 1e-12 {
            0.0
        } else {
            f64::MAX
        }
    } else {
        diff / stderr
    }
}

fn run_compare(model: &SystemModel, params: &Params) -> Result<Report, CoreError> {
    let sigma = params.sigma;
    let s_grid = params
        .s_grid
        .clone()
        .unwrap_or_else(|| COMPARE_S_GRID.to_vec());
    let t_grid = default_t_grid(model, params, params.points.unwrap_or(COMPARE_POINTS))?;

    let outcomes: Vec<ReplicationOutcome> = run_replications(
        model,
        params.n,
        params.seed,
        params.max_cycles,
        execution(params),
    );

    let mut rows = Vec::new();
    let mut push = |quantity: &str, point: Option<f64>, analytic: f64, mc: f64, se: f64| {
        let z = z_score(analytic, mc, se);
        rows.push(CompareRow {
            quantity: quantity.into(),
            point,
            analytic,
            mc_estimate: mc,
            mc_stderr: se,
            z,
            verdict: if z.abs() <= sigma { "PASS" } else { "FAIL" }.into(),
        });
    };

    let mttf = transform::moment(model, 1)?;
    let summary = summarize(&outcomes, params.seed);
    push("mean", None, mttf, summary.mean, summary.std_error);

    for &s in &s_grid {
        let analytic = transform::system_lst_closed(model, s)?.value;
        let (mc, se) = lst_from(&outcomes, s);
        push("lst", Some(s), analytic, mc, se);
    }

    let survival_estimates = survival_from(&outcomes, &t_grid);
    for est in survival_estimates {
        let analytic = inversion::survival(model, est.t)?.survival;
        push(
            "survival",
            Some(est.t),
            analytic,
            est.fraction,
            est.std_error,
        );
    }

    let all_pass = rows.iter().all(|r| r.verdict == "PASS");
    Ok(Report::Compare(CompareReport {
        sigma,
        verdict: if all_pass { "PASS" } else { "FAIL" }.into(),
        rows,
    }))
}
