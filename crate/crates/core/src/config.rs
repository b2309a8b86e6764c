//! Run configuration assembled from defaults, the environment, a key=value
//! file and command-line flags, in increasing order of precedence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::baselines::default_max_features;
use crate::dataset::DEFAULT_FRACTIONS;
use crate::error::{Error, Result};
use crate::executor::{available_workers, ExecutionMode, ExecutorConfig};
use crate::ga::GaConfig;
use crate::metrics::Metric;
use crate::models::{ModelKind, ModelSpec};

pub const WORKERS_ENV: &str = "EVOSELECT_WORKERS";

/// Keys accepted in config files and recorded in run snapshots. Each one is
/// also a long flag of `run` and `benchmark`.
pub const KEYS: [&str; 20] = [
    "dataset",
    "label-column",
    "model",
    "algorithm",
    "mode",
    "workers",
    "population-size",
    "mutation-rate",
    "elitism",
    "generations",
    "metric",
    "threshold",
    "seed",
    "learning-rate",
    "epochs",
    "l2",
    "hidden-units",
    "batch-size",
    "max-features",
    "out-dir",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Ga,
    Random,
    Rfs,
    Baseline,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Ga => "ga",
            Algorithm::Random => "random",
            Algorithm::Rfs => "rfs",
            Algorithm::Baseline => "baseline",
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ga" => Ok(Algorithm::Ga),
            "random" => Ok(Algorithm::Random),
            "rfs" => Ok(Algorithm::Rfs),
            "baseline" => Ok(Algorithm::Baseline),
            other => Err(Error::config(format!(
                "unknown algorithm `{other}` (expected ga, random, rfs or baseline)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub dataset: Option<PathBuf>,
    pub label_column: String,
    pub model: ModelSpec,
    pub algorithm: Algorithm,
    /// Also carries the base seed.
    pub ga: GaConfig,
    pub executor: ExecutorConfig,
    pub fractions: [f64; 3],
    /// Forward-selection step cap; `None` means the default for the data.
    pub max_features: Option<usize>,
    pub out_dir: PathBuf,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self {
            dataset: None,
            label_column: "label".into(),
            model: ModelSpec::logistic(),
            algorithm: Algorithm::Ga,
            ga: GaConfig::default(),
            executor: ExecutorConfig::sequential(),
            fractions: DEFAULT_FRACTIONS,
            max_features: None,
            out_dir: PathBuf::from("runs"),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(format!("invalid value `{value}` for `{key}`")))
}

/// Parse flat `key = value` text. Blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::config(format!("config line {}: expected key = value", n + 1)))?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(Error::config(format!(
                "config line {}: unknown key `{k}`",
                n + 1
            )));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// Render a settings map as config-file text.
pub fn config_text(map: &BTreeMap<String, String>) -> String {
    map.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

/// Merge the layers, later ones winning: `EVOSELECT_WORKERS`, config file,
/// flags.
pub fn layered(
    env_workers: Option<&str>,
    file: &BTreeMap<String, String>,
    flags: &BTreeMap<String, String>,
) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    if let Some(w) = env_workers.filter(|w| !w.trim().is_empty()) {
        map.insert("workers".to_string(), w.trim().to_string());
    }
    map.extend(file.iter().map(|(k, v)| (k.clone(), v.clone())));
    map.extend(flags.iter().map(|(k, v)| (k.clone(), v.clone())));
    map
}

impl CliConfig {
    /// Build from a settings map over the defaults.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(k) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::config(format!("unknown setting `{k}`")));
        }
        let get = |k: &str| map.get(k).map(String::as_str);
        let mut cfg = CliConfig {
            dataset: get("dataset").map(PathBuf::from),
            ..CliConfig::default()
        };
        if let Some(v) = get("label-column") {
            cfg.label_column = v.to_string();
        }
        if let Some(v) = get("algorithm") {
            cfg.algorithm = v.parse()?;
        }

        let kind: ModelKind = get("model").map_or(Ok(ModelKind::Logistic), str::parse)?;
        let mut model = ModelSpec::default_for(kind);
        if let Some(v) = get("learning-rate") {
            model.learning_rate = parse("learning-rate", v)?;
        }
        if let Some(v) = get("epochs") {
            model.epochs = parse("epochs", v)?;
        }
        if let Some(v) = get("l2") {
            model.l2 = parse("l2", v)?;
        }
        if let Some(v) = get("hidden-units") {
            model.hidden_units = parse("hidden-units", v)?;
        }
        if let Some(v) = get("batch-size") {
            model.batch_size = parse("batch-size", v)?;
        }
        model.validate()?;
        cfg.model = model;

        let ga = &mut cfg.ga;
        if let Some(v) = get("population-size") {
            ga.population_size = parse("population-size", v)?;
        }
        if let Some(v) = get("mutation-rate") {
            ga.mutation_rate = parse("mutation-rate", v)?;
        }
        if let Some(v) = get("elitism") {
            ga.elitism = parse("elitism", v)?;
        }
        if let Some(v) = get("generations") {
            ga.max_generations = parse("generations", v)?;
        }
        if let Some(v) = get("metric") {
            ga.fitness_metric = v.parse::<Metric>()?;
        }
        match get("threshold") {
            None | Some("none") => ga.score_threshold = None,
            Some(v) => ga.score_threshold = Some(parse("threshold", v)?),
        }
        if let Some(v) = get("seed") {
            ga.base_seed = parse("seed", v)?;
        }
        ga.validate()?;

        let mode = get("mode").unwrap_or("seq");
        let workers: Option<usize> = get("workers").map(|v| parse("workers", v)).transpose()?;
        cfg.executor = match mode {
            // A worker count (from the environment, say) is moot here.
            "seq" => ExecutorConfig::sequential(),
            "par" => ExecutorConfig::parallel(workers.unwrap_or_else(available_workers)),
            other => {
                return Err(Error::config(format!(
                    "unknown mode `{other}` (expected seq or par)"
                )))
            }
        };
        cfg.executor.validate()?;

        cfg.max_features = get("max-features")
            .map(|v| parse("max-features", v))
            .transpose()?;
        if cfg.max_features == Some(0) {
            return Err(Error::config("max-features must be >= 1"));
        }
        if let Some(v) = get("out-dir") {
            cfg.out_dir = PathBuf::from(v);
        }
        Ok(cfg)
    }

    /// The complete settings map; feeding it back through [`from_map`]
    /// reproduces this configuration.
    ///
    /// [`from_map`]: CliConfig::from_map
    pub fn to_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        if let Some(d) = &self.dataset {
            put("dataset", d.display().to_string());
        }
        put("label-column", self.label_column.clone());
        put("model", self.model.kind.as_str().into());
        put("algorithm", self.algorithm.as_str().into());
        put(
            "mode",
            match self.executor.mode {
                ExecutionMode::Sequential => "seq",
                ExecutionMode::Parallel => "par",
            }
            .into(),
        );
        put("workers", self.executor.workers.to_string());
        put("population-size", self.ga.population_size.to_string());
        put("mutation-rate", self.ga.mutation_rate.to_string());
        put("elitism", self.ga.elitism.to_string());
        put("generations", self.ga.max_generations.to_string());
        put("metric", self.ga.fitness_metric.as_str().into());
        put(
            "threshold",
            self.ga
                .score_threshold
                .map_or_else(|| "none".to_string(), |t| t.to_string()),
        );
        put("seed", self.ga.base_seed.to_string());
        put("learning-rate", self.model.learning_rate.to_string());
        put("epochs", self.model.epochs.to_string());
        put("l2", self.model.l2.to_string());
        put("hidden-units", self.model.hidden_units.to_string());
        put("batch-size", self.model.batch_size.to_string());
        if let Some(k) = self.max_features {
            put("max-features", k.to_string());
        }
        put("out-dir", self.out_dir.display().to_string());
        m
    }

    pub fn max_features_for(&self, d: usize) -> usize {
        self.max_features.unwrap_or_else(|| default_max_features(d))
    }

    /// Label stored in run files: GA runs record their executor mode.
    pub fn algorithm_label(&self) -> String {
        match (self.algorithm, self.executor.mode) {
            (Algorithm::Ga, ExecutionMode::Sequential) => "ga-seq".into(),
            (Algorithm::Ga, ExecutionMode::Parallel) => "ga-par".into(),
            (other, _) => other.as_str().into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn defaults() {
        let cfg = CliConfig::from_map(&BTreeMap::new()).unwrap();
        assert_eq!(cfg, CliConfig::default());
        assert_eq!(cfg.ga.population_size, 150);
        assert_eq!(cfg.ga.mutation_rate, 0.2);
        assert_eq!(cfg.ga.elitism, 2);
        assert_eq!(cfg.ga.max_generations, 150);
        assert_eq!(cfg.fractions, [0.7, 0.2, 0.1]);
        assert_eq!(cfg.algorithm_label(), "ga-seq");
    }

    #[test]
    fn model_defaults_follow_kind() {
        let cfg = CliConfig::from_map(&map(&[("model", "mlp")])).unwrap();
        assert_eq!(cfg.model, ModelSpec::mlp());
        let cfg = CliConfig::from_map(&map(&[("model", "mlp"), ("epochs", "7")])).unwrap();
        assert_eq!(cfg.model.epochs, 7);
        assert_eq!(cfg.model.hidden_units, ModelSpec::mlp().hidden_units);
    }

    #[test]
    fn precedence() {
        let file = map(&[("workers", "3"), ("seed", "5"), ("mode", "par")]);
        let flags = map(&[("seed", "9")]);
        let m = layered(Some("6"), &file, &flags);
        let cfg = CliConfig::from_map(&m).unwrap();
        assert_eq!(cfg.executor, ExecutorConfig::parallel(3));
        assert_eq!(cfg.ga.base_seed, 9);

        let m = layered(Some("6"), &map(&[("mode", "par")]), &BTreeMap::new());
        assert_eq!(CliConfig::from_map(&m).unwrap().executor.workers, 6);

        let m = layered(Some("6"), &BTreeMap::new(), &BTreeMap::new());
        assert_eq!(
            CliConfig::from_map(&m).unwrap().executor,
            ExecutorConfig::sequential()
        );
    }

    #[test]
    fn round_trip() {
        let cfg = CliConfig::from_map(&map(&[
            ("dataset", "x.csv"),
            ("model", "mlp"),
            ("algorithm", "rfs"),
            ("mode", "par"),
            ("workers", "4"),
            ("threshold", "0.9"),
            ("mutation-rate", "0.15"),
            ("max-features", "5"),
        ]))
        .unwrap();
        assert_eq!(CliConfig::from_map(&cfg.to_map()).unwrap(), cfg);
        let text = config_text(&cfg.to_map());
        assert_eq!(
            CliConfig::from_map(&parse_config_text(&text).unwrap()).unwrap(),
            cfg
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_config_text("bogus = 1").is_err());
        assert!(parse_config_text("no equals sign").is_err());
        assert!(CliConfig::from_map(&map(&[("bogus", "1")])).is_err());
        assert!(CliConfig::from_map(&map(&[("seed", "-1")])).is_err());
        assert!(CliConfig::from_map(&map(&[("algorithm", "sa")])).is_err());
        assert!(CliConfig::from_map(&map(&[("mode", "par"), ("workers", "0")])).is_err());
        assert!(CliConfig::from_map(&map(&[("elitism", "150")])).is_err());
        assert!(CliConfig::from_map(&map(&[("mutation-rate", "1.5")])).is_err());
        for e in [
            CliConfig::from_map(&map(&[("epochs", "x")])).unwrap_err(),
            parse_config_text("zz = 1").unwrap_err(),
        ] {
            assert!(matches!(e, Error::Config(_)));
        }
    }

    #[test]
    fn comments_and_blanks() {
        let m = parse_config_text("# header\n\n seed = 4 \npopulation-size=10\n").unwrap();
        assert_eq!(m, map(&[("seed", "4"), ("population-size", "10")]));
    }
}
