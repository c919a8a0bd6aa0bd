//! Typed reports and their CSV/JSON encodings.
//!
//! CSV is stable: fixed column order, headers always emitted, floats printed
//! with 17 significant digits, final row newline-terminated. JSON round-trips
//! through serde exactly.

use serde::{Deserialize, Serialize};

use crate::config::OutputFormat;

/// 17-significant-digit float text for CSV cells.
pub fn fmt_f64(x: f64) -> String {
    debug_assert!(x.is_finite(), "reports must not contain non-finite values");
    format!("{x:.16e}")
}

fn csv_table(header: &str, rows: impl Iterator<Item = String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstRow {
    pub s: f64,
    pub lst_closed: f64,
    pub lst_fixed_point: f64,
    pub lst_scenario_sum: f64,
    pub scenario_k: u32,
    pub max_abs_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstReport {
    pub rows: Vec<LstRow>,
}

impl LstReport {
    pub fn to_csv(&self) -> String {
        csv_table(
            "s,lst_closed,lst_fixed_point,lst_scenario_sum,scenario_K,max_abs_dev",
            self.rows.iter().map(|r| {
                format!(
                    "{},{},{},{},{},{}",
                    fmt_f64(r.s),
                    fmt_f64(r.lst_closed),
                    fmt_f64(r.lst_fixed_point),
                    fmt_f64(r.lst_scenario_sum),
                    r.scenario_k,
                    fmt_f64(r.max_abs_dev),
                )
            }),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub n: u32,
    pub moment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentsReport {
    pub rows: Vec<MomentRow>,
}

impl MomentsReport {
    pub fn to_csv(&self) -> String {
        csv_table(
            "n,moment",
            self.rows
                .iter()
                .map(|r| format!("{},{}", r.n, fmt_f64(r.moment))),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalRow {
    pub t: f64,
    pub survival: f64,
    pub abs_error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalReport {
    pub method: String,
    pub rows: Vec<SurvivalRow>,
}

impl SurvivalReport {
    pub fn to_csv(&self) -> String {
        csv_table(
            "t,survival,abs_error_estimate",
            self.rows.iter().map(|r| {
                format!(
                    "{},{},{}",
                    fmt_f64(r.t),
                    fmt_f64(r.survival),
                    fmt_f64(r.abs_error_estimate),
                )
            }),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileReport {
    pub p: f64,
    pub t: f64,
}

impl QuantileReport {
    pub fn to_csv(&self) -> String {
        csv_table(
            "p,t",
            std::iter::once(format!("{},{}", fmt_f64(self.p), fmt_f64(self.t))),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub n: u64,
    pub seed: u64,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub censored_count: u64,
    pub label: String,
}

impl SimulateReport {
    pub fn to_csv(&self) -> String {
        csv_table(
            "n,seed,mean,variance,std_error,ci_lo,ci_hi,censored_count,label",
            std::iter::once(format!(
                "{},{},{},{},{},{},{},{},{}",
                self.n,
                self.seed,
                fmt_f64(self.mean),
                fmt_f64(self.variance),
                fmt_f64(self.std_error),
                fmt_f64(self.ci_lo),
                fmt_f64(self.ci_hi),
                self.censored_count,
                self.label,
            )),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub quantity: String,
    /// Grid coordinate; absent for scalar quantities like the mean.
    pub point: Option<f64>,
    pub analytic: f64,
    pub mc_estimate: f64,
    pub mc_stderr: f64,
    pub z: f64,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub sigma: f64,
    pub verdict: String,
    pub rows: Vec<CompareRow>,
}

impl CompareReport {
    pub fn passed(&self) -> bool {
        self.verdict == "PASS"
    }

    pub fn to_csv(&self) -> String {
        csv_table(
            "quantity,point,analytic,mc_estimate,mc_stderr,z,verdict",
            self.rows.iter().map(|r| {
                format!(
                    "{},{},{},{},{},{},{}",
                    r.quantity,
                    r.point.map(fmt_f64).unwrap_or_default(),
                    fmt_f64(r.analytic),
                    fmt_f64(r.mc_estimate),
                    fmt_f64(r.mc_stderr),
                    fmt_f64(r.z),
                    r.verdict,
                )
            }),
        )
    }
}

/// Any report, ready to render in either output format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "report", rename_all = "snake_case")]
pub enum Report {
    Lst(LstReport),
    Moments(MomentsReport),
    Survival(SurvivalReport),
    Quantile(QuantileReport),
    Simulate(SimulateReport),
    Compare(CompareReport),
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => match self {
                Report::Lst(r) => r.to_csv(),
                Report::Moments(r) => r.to_csv(),
                Report::Survival(r) => r.to_csv(),
                Report::Quantile(r) => r.to_csv(),
                Report::Simulate(r) => r.to_csv(),
                Report::Compare(r) => r.to_csv(),
            },
            OutputFormat::Json => {
                let mut body = serde_json::to_string_pretty(self).expect("reports serialize");
                body.push('\n');
                body
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_print_with_17_significant_digits() {
        assert_eq!(fmt_f64(0.2), "2.0000000000000001e-1");
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        // the text round-trips to the same bits
        for x in [0.2, 3.0, 1.0 / 3.0, 2.2249191627287, 1e-12] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_has_headers_and_final_newline() {
        let report = LstReport {
            rows: vec![LstRow {
                s: 1.0,
                lst_closed: 0.2,
                lst_fixed_point: 0.2,
                lst_scenario_sum: 0.2,
                scenario_k: 10,
                max_abs_dev: 0.0,
            }],
        };
        let csv = report.to_csv();
        assert!(csv.starts_with("s,lst_closed,lst_fixed_point,lst_scenario_sum,scenario_K,max_abs_dev\n"));
        assert!(csv.ends_with('\n'));
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn json_round_trips_every_report_type() {
        let reports = vec![
            Report::Lst(LstReport {
                rows: vec![LstRow {
                    s: 0.5,
                    lst_closed: 1.0 / 3.0,
                    lst_fixed_point: 1.0 / 3.0,
                    lst_scenario_sum: 0.333,
                    scenario_k: 5,
                    max_abs_dev: 3.3e-4,
                }],
            }),
            Report::Moments(MomentsReport {
                rows: vec![MomentRow { n: 1, moment: 3.0 }],
            }),
            Report::Survival(SurvivalReport {
                method: "gaver_stehfest".into(),
                rows: vec![SurvivalRow {
                    t: 0.0,
                    survival: 1.0,
                    abs_error_estimate: 0.0,
                }],
            }),
            Report::Quantile(QuantileReport { p: 0.5, t: 2.2249 }),
            Report::Simulate(SimulateReport {
                n: 10,
                seed: 1,
                mean: 3.0,
                variance: 7.0,
                std_error: 0.83,
                ci_lo: 1.3,
                ci_hi: 4.6,
                censored_count: 0,
                label: "exact".into(),
            }),
            Report::Compare(CompareReport {
                sigma: 4.0,
                verdict: "PASS".into(),
                rows: vec![CompareRow {
                    quantity: "mean".into(),
                    point: None,
                    analytic: 3.0,
                    mc_estimate: 3.001,
                    mc_stderr: 0.008,
                    z: 0.125,
                    verdict: "PASS".into(),
                }],
            }),
        ];
        for report in reports {
            let text = report.render(OutputFormat::Json);
            let back: Report = serde_json::from_str(&text).unwrap();
            assert_eq!(back, report);
        }
    }
}
