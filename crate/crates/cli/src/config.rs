//! Run configuration: a small TOML-compatible `key = value` format with two
//! flat sections, `[model]` and `[command]`, plus CLI overrides.
//!
//! Unknown sections and keys are errors, not warnings, and every numeric
//! parameter is validated before any computation starts.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use duo_standby_core::{DistributionSpec, ServerId, SystemModel};
use toml::{Table, Value};

/// Which analysis a run performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Lst,
    Moments,
    Survival,
    Quantile,
    Simulate,
    Compare,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Lst => "lst",
            Self::Moments => "moments",
            Self::Survival => "survival",
            Self::Quantile => "quantile",
            Self::Simulate => "simulate",
            Self::Compare => "compare",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "lst" => Some(Self::Lst),
            "moments" => Some(Self::Moments),
            "survival" => Some(Self::Survival),
            "quantile" => Some(Self::Quantile),
            "simulate" => Some(Self::Simulate),
            "compare" => Some(Self::Compare),
            _ => None,
        }
    }
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Output encoding for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "csv" => Some(Self::Csv),
            "json" => Some(Self::Json),
            _ => None,
        }
    }
}

/// Command parameters after validation. Grid-like fields stay `None` when
/// unset so commands can apply their own defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub s_grid: Option<Vec<f64>>,
    pub scenario_k: u32,
    pub orders: Vec<u32>,
    pub t_max: Option<f64>,
    pub points: Option<u32>,
    pub p: f64,
    pub n: u64,
    pub seed: u64,
    pub max_cycles: u64,
    pub sigma: f64,
    pub serial: bool,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            s_grid: None,
            scenario_k: 10,
            orders: vec![1, 2],
            t_max: None,
            points: None,
            p: 0.5,
            n: 100_000,
            seed: 12345,
            max_cycles: 1_000_000,
            sigma: 4.0,
            serial: false,
        }
    }
}

/// One fully validated run: model, command, parameters, output format.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: SystemModel,
    pub command: CommandKind,
    pub format: OutputFormat,
    pub params: Params,
}

/// Configuration failures; all map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("unknown config section [{0}]")]
    UnknownSection(String),
    #[error("unknown config key \"{key}\" in [{section}]")]
    UnknownKey { section: String, key: String },
    #[error("missing required config key \"{key}\" in [{section}]")]
    MissingKey { section: String, key: String },
    #[error("invalid value for \"{key}\": {reason}")]
    InvalidValue { key: String, reason: String },
    #[error("config selects command \"{config}\" but the CLI subcommand is \"{cli}\"")]
    CommandConflict { config: String, cli: String },
    #[error("no command: pass a CLI subcommand or set command in [command]")]
    NoCommand,
}

/// CLI flag overrides applied on top of the config file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub s: Option<String>,
    pub t_max: Option<f64>,
    pub points: Option<u32>,
    pub n: Option<u64>,
    pub seed: Option<u64>,
    pub max_cycles: Option<u64>,
    pub sigma: Option<f64>,
    pub format: Option<OutputFormat>,
    pub serial: bool,
}

fn invalid(key: &str, reason: impl fmt::Display) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_string(),
        reason: reason.to_string(),
    }
}

fn as_string(key: &str, v: &Value) -> Result<String, ConfigError> {
    v.as_str()
        .map(str::to_string)
        .ok_or_else(|| invalid(key, format!("expected a string, got {}", v.type_str())))
}

fn as_f64(key: &str, v: &Value) -> Result<f64, ConfigError> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        other => Err(invalid(
            key,
            format!("expected a number, got {}", other.type_str()),
        )),
    }
}

fn as_u64(key: &str, v: &Value) -> Result<u64, ConfigError> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        Value::Integer(i) => Err(invalid(key, format!("must be nonnegative, got {i}"))),
        other => Err(invalid(
            key,
            format!("expected an integer, got {}", other.type_str()),
        )),
    }
}

fn as_bool(key: &str, v: &Value) -> Result<bool, ConfigError> {
    v.as_bool()
        .ok_or_else(|| invalid(key, format!("expected a boolean, got {}", v.type_str())))
}

/// Comma-separated numbers, or a single bare number.
fn parse_number_list(key: &str, v: &Value) -> Result<Vec<f64>, ConfigError> {
    let items: Vec<f64> = match v {
        Value::String(text) => text
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<f64>()
                    .map_err(|_| invalid(key, format!("bad number {:?}", part.trim())))
            })
            .collect::<Result<_, _>>()?,
        _ => vec![as_f64(key, v)?],
    };
    if items.is_empty() {
        return Err(invalid(key, "empty list"));
    }
    for x in &items {
        if !x.is_finite() {
            return Err(invalid(key, format!("non-finite entry {x}")));
        }
    }
    Ok(items)
}

fn parse_dist(key: &str, v: &Value) -> Result<DistributionSpec, ConfigError> {
    let text = as_string(key, v)?;
    DistributionSpec::from_str(&text).map_err(|e| invalid(key, e))
}

/// Parses and validates config text. `cli_command` is the subcommand given
/// on the command line; when the file also names a command the two must
/// agree.
pub fn parse_config(text: &str, cli_command: Option<CommandKind>) -> Result<RunConfig, ConfigError> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;

    let mut model_section: Option<&Table> = None;
    let mut command_section: Option<&Table> = None;
    for (section, value) in &table {
        let sub = value.as_table().ok_or_else(|| {
            ConfigError::Parse(format!("top-level key {section:?} is not a section"))
        })?;
        match section.as_str() {
            "model" => model_section = Some(sub),
            "command" => command_section = Some(sub),
            other => return Err(ConfigError::UnknownSection(other.to_string())),
        }
    }

    let model_section = model_section.ok_or(ConfigError::MissingKey {
        section: "model".into(),
        key: "work1".into(),
    })?;

    let mut work1 = None;
    let mut work2 = None;
    let mut repair1 = None;
    let mut repair2 = None;
    let mut first_server = ServerId::One;
    for (key, value) in model_section {
        match key.as_str() {
            "work1" => work1 = Some(parse_dist("work1", value)?),
            "work2" => work2 = Some(parse_dist("work2", value)?),
            "repair1" => repair1 = Some(parse_dist("repair1", value)?),
            "repair2" => repair2 = Some(parse_dist("repair2", value)?),
            "first_server" => {
                let raw = match value {
                    Value::Integer(i) => *i,
                    other => {
                        return Err(invalid(
                            "first_server",
                            format!("expected 1 or 2, got {}", other.type_str()),
                        ))
                    }
                };
                first_server =
                    ServerId::from_number(raw).map_err(|e| invalid("first_server", e))?;
            }
            other => {
                return Err(ConfigError::UnknownKey {
                    section: "model".into(),
                    key: other.to_string(),
                })
            }
        }
    }
    let require = |field: Option<DistributionSpec>, key: &str| {
        field.ok_or_else(|| ConfigError::MissingKey {
            section: "model".into(),
            key: key.to_string(),
        })
    };
    let model = SystemModel::new(
        require(work1, "work1")?,
        require(work2, "work2")?,
        require(repair1, "repair1")?,
        require(repair2, "repair2")?,
        first_server,
    )
    .map_err(|e| invalid("model", e))?;

    let mut params = Params::default();
    let mut config_command: Option<CommandKind> = None;
    let mut format = OutputFormat::Csv;
    if let Some(section) = command_section {
        for (key, value) in section {
            match key.as_str() {
                "command" => {
                    let name = as_string("command", value)?;
                    config_command = Some(CommandKind::parse(&name).ok_or_else(|| {
                        invalid("command", format!("unknown command {name:?}"))
                    })?);
                }
                "s" => params.s_grid = Some(parse_number_list("s", value)?),
                "scenario_k" => {
                    let k = as_u64("scenario_k", value)?;
                    if k == 0 || k > u32::MAX as u64 {
                        return Err(invalid("scenario_k", "must be in 1..=4294967295"));
                    }
                    params.scenario_k = k as u32;
                }
                "orders" => {
                    let raw = parse_number_list("orders", value)?;
                    let mut orders = Vec::new();
                    for x in raw {
                        if x.fract() != 0.0 || !(1.0..=4.0).contains(&x) {
                            return Err(invalid("orders", format!("order {x} not in 1..=4")));
                        }
                        orders.push(x as u32);
                    }
                    params.orders = orders;
                }
                "t_max" => params.t_max = Some(as_f64("t_max", value)?),
                "points" => {
                    let p = as_u64("points", value)?;
                    if !(2..=1_000_000).contains(&p) {
                        return Err(invalid("points", "must be in 2..=1000000"));
                    }
                    params.points = Some(p as u32);
                }
                "p" => params.p = as_f64("p", value)?,
                "n" => params.n = as_u64("n", value)?,
                "seed" => params.seed = as_u64("seed", value)?,
                "max_cycles" => params.max_cycles = as_u64("max_cycles", value)?,
                "sigma" => params.sigma = as_f64("sigma", value)?,
                "serial" => params.serial = as_bool("serial", value)?,
                "format" => {
                    let name = as_string("format", value)?;
                    format = OutputFormat::parse(&name)
                        .ok_or_else(|| invalid("format", format!("unknown format {name:?}")))?;
                }
                other => {
                    return Err(ConfigError::UnknownKey {
                        section: "command".into(),
                        key: other.to_string(),
                    })
                }
            }
        }
    }

    let command = match (config_command, cli_command) {
        (Some(a), Some(b)) if a != b => {
            return Err(ConfigError::CommandConflict {
                config: a.name().into(),
                cli: b.name().into(),
            })
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(ConfigError::NoCommand),
    };

    validate_params(command, &params)?;
    Ok(RunConfig {
        model,
        command,
        format,
        params,
    })
}

fn validate_params(command: CommandKind, params: &Params) -> Result<(), ConfigError> {
    if let Some(grid) = &params.s_grid {
        for &s in grid {
            if s < 0.0 {
                return Err(invalid("s", format!("transform argument {s} < 0")));
            }
            if command == CommandKind::Compare && s == 0.0 {
                return Err(invalid("s", "compare needs s > 0"));
            }
        }
    }
    if let Some(t) = params.t_max {
        if !(t.is_finite() && t > 0.0) {
            return Err(invalid("t_max", format!("must be > 0, got {t}")));
        }
    }
    if !(params.p > 0.0 && params.p < 1.0) {
        return Err(invalid("p", format!("must be in (0,1), got {}", params.p)));
    }
    if params.n < 2 {
        return Err(invalid("n", format!("need at least 2, got {}", params.n)));
    }
    if params.max_cycles < 1 {
        return Err(invalid("max_cycles", "must be at least 1"));
    }
    if !(params.sigma.is_finite() && params.sigma > 0.0) {
        return Err(invalid(
            "sigma",
            format!("must be > 0, got {}", params.sigma),
        ));
    }
    if params.orders.is_empty() {
        return Err(invalid("orders", "empty list"));
    }
    Ok(())
}

/// Reads a config file and applies CLI overrides.
pub fn load(
    path: &Path,
    cli_command: Option<CommandKind>,
    ov: &Overrides,
) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    let mut config = parse_config(&text, cli_command)?;

    if let Some(raw) = &ov.s {
        let list = parse_number_list("--s", &Value::String(raw.clone()))?;
        config.params.s_grid = Some(list);
    }
    if let Some(t) = ov.t_max {
        config.params.t_max = Some(t);
    }
    if let Some(p) = ov.points {
        if p < 2 {
            return Err(invalid("--points", "must be at least 2"));
        }
        config.params.points = Some(p);
    }
    if let Some(n) = ov.n {
        config.params.n = n;
    }
    if let Some(seed) = ov.seed {
        config.params.seed = seed;
    }
    if let Some(mc) = ov.max_cycles {
        config.params.max_cycles = mc;
    }
    if let Some(sigma) = ov.sigma {
        config.params.sigma = sigma;
    }
    if let Some(format) = ov.format {
        config.format = format;
    }
    if ov.serial {
        config.params.serial = true;
    }
    validate_params(config.command, &config.params)?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: &str = r#"
[model]
work1 = "exp(1.0)"
work2 = "exp(1.0)"
repair1 = "exp(1.0)"
repair2 = "exp(1.0)"

[command]
command = "lst"
"#;

    #[test]
    fn happy_path_parses() {
        let cfg = parse_config(GOLDEN, None).unwrap();
        assert_eq!(cfg.command, CommandKind::Lst);
        assert_eq!(cfg.format, OutputFormat::Csv);
        assert_eq!(cfg.params.seed, 12345);
        assert_eq!(cfg.model.work1, "exp(1)".parse().unwrap());
    }

    #[test]
    fn first_server_selects_the_starting_server() {
        let cfg = parse_config(
            &GOLDEN.replace("[command]", "first_server = 2\n[command]"),
            None,
        )
        .unwrap();
        assert_eq!(cfg.model.first_server, ServerId::Two);
        let bad = GOLDEN.replace("[command]", "first_server = 3\n[command]");
        assert!(matches!(
            parse_config(&bad, None),
            Err(ConfigError::InvalidValue { .. })
        ));
    }

    #[test]
    fn cli_subcommand_fills_or_conflicts() {
        let no_command = GOLDEN.replace("command = \"lst\"", "seed = 7");
        let cfg = parse_config(&no_command, Some(CommandKind::Moments)).unwrap();
        assert_eq!(cfg.command, CommandKind::Moments);
        assert_eq!(cfg.params.seed, 7);

        assert!(matches!(
            parse_config(GOLDEN, Some(CommandKind::Moments)),
            Err(ConfigError::CommandConflict { .. })
        ));
        assert!(matches!(
            parse_config(&no_command, None),
            Err(ConfigError::NoCommand)
        ));
    }

    #[test]
    fn invalid_distribution_names_the_key() {
        let bad = GOLDEN.replace("work1 = \"exp(1.0)\"", "work1 = \"exp(-1)\"");
        match parse_config(&bad, None) {
            Err(ConfigError::InvalidValue { key, .. }) => assert_eq!(key, "work1"),
            other => panic!("expected InvalidValue, got {other:?}"),
        }
    }

    #[test]
    fn missing_required_field_is_an_error() {
        let missing = GOLDEN.replace("repair2 = \"exp(1.0)\"\n", "");
        match parse_config(&missing, None) {
            Err(ConfigError::MissingKey { key, .. }) => assert_eq!(key, "repair2"),
            other => panic!("expected MissingKey, got {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_and_sections_are_errors() {
        let extra = GOLDEN.replace("[command]", "typo = 1\n[command]");
        assert!(matches!(
            parse_config(&extra, None),
            Err(ConfigError::UnknownKey { .. })
        ));
        let section = format!("{GOLDEN}\n[extra]\nx = 1\n");
        assert!(matches!(
            parse_config(&section, None),
            Err(ConfigError::UnknownSection(_))
        ));
    }

    #[test]
    fn grids_parse_from_strings_and_numbers() {
        let with_grid = GOLDEN.replace(
            "command = \"lst\"",
            "command = \"lst\"\ns = \"0.1, 0.5, 1\"\norders = \"1,2,3\"",
        );
        let cfg = parse_config(&with_grid, None).unwrap();
        assert_eq!(cfg.params.s_grid, Some(vec![0.1, 0.5, 1.0]));
        assert_eq!(cfg.params.orders, vec![1, 2, 3]);

        let single = GOLDEN.replace("command = \"lst\"", "command = \"lst\"\ns = 2.5");
        let cfg = parse_config(&single, None).unwrap();
        assert_eq!(cfg.params.s_grid, Some(vec![2.5]));
    }

    #[test]
    fn numeric_validation_happens_at_parse_time() {
        for (patch, key) in [
            ("p = 1.5", "p"),
            ("n = 1", "n"),
            ("sigma = 0", "sigma"),
            ("s = \"-1\"", "s"),
            ("points = 1", "points"),
            ("orders = \"5\"", "orders"),
            ("max_cycles = 0", "max_cycles"),
        ] {
            let text = GOLDEN.replace("command = \"lst\"", &format!("command = \"lst\"\n{patch}"));
            match parse_config(&text, None) {
                Err(ConfigError::InvalidValue { key: k, .. }) => assert_eq!(k, key),
                other => panic!("{patch}: expected InvalidValue, got {other:?}"),
            }
        }
    }

    #[test]
    fn parse_errors_carry_diagnostics() {
        let err = parse_config("[model\nwork1 = 1", None).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("parse error"), "{msg}");
    }
}
