//! Resolved run configuration. Values start from documented defaults, a
//! config file of `key = value` lines overrides them, `SENSEFORGE_WORKERS`
//! overrides the worker count, and command-line `--set` pairs override
//! everything. The fully resolved map is logged before a run starts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use senseforge_core::classifier::TrainConfig;
use senseforge_core::evaluation::NonWfsDenominator;
use senseforge_core::pipeline::{
    AugmentationOptions, BaseSystem, DisambiguationMode, LayerConfig, SemanticFlag, TrainOptions,
};
use senseforge_core::{Error, Result};

/// Sentinel for "no value" in optional keys, mirroring the archive manifest.
pub const NONE: &str = "-";

const DEFAULTS: &[(&str, &str)] = &[
    ("lexicon", NONE),
    ("domains", NONE),
    ("train.corpus", NONE),
    ("train.keys", NONE),
    ("train.max_layers", "4"),
    ("train.predict_seen_single_sense", "false"),
    ("eval.corpus", NONE),
    ("eval.keys", NONE),
    ("answers", NONE),
    ("model", NONE),
    ("output", NONE),
    ("output.corpus", NONE),
    ("output.keys", NONE),
    ("report", NONE),
    ("benchmarks", NONE),
    ("layers", "1"),
    ("iterate", "0"),
    ("workers", "0"),
    ("svm.c", "1.0"),
    ("svm.tolerance", "0.1"),
    ("svm.max_epochs", "1000"),
    ("svm.seed", "0"),
    ("augment.sli", "false"),
    ("augment.examples", "false"),
    ("augment.gloss_corpora", NONE),
    ("augment.restrict_to_inventory", "true"),
    ("score.denominator", "correct"),
    ("ablate.bases", "IMS"),
];

const LAYER_FIELDS: &[(&str, &str)] = &[
    ("base", "IMS"),
    ("semantic", NONE),
    ("window", "5"),
    ("drop_surrounding_words", "false"),
    ("vectors", NONE),
    ("context_vectors", NONE),
    ("mixture_gamma", NONE),
    ("mixture_normalize", "true"),
    ("mixture_include_target", "false"),
];

/// Splits a `layerN.field` key into its layer number and field name.
fn split_layer_key(key: &str) -> Option<(u32, &str)> {
    let rest = key.strip_prefix("layer")?;
    let (number, field) = rest.split_once('.')?;
    let n: u32 = number.parse().ok()?;
    if n == 0 || !LAYER_FIELDS.iter().any(|(name, _)| *name == field) {
        return None;
    }
    Some((n, field))
}

fn is_known_key(key: &str) -> bool {
    DEFAULTS.iter().any(|(name, _)| *name == key) || split_layer_key(key).is_some()
}

#[derive(Debug, Clone)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Resolves the configuration for one run. `overrides` are `key=value`
    /// pairs from the command line, applied last.
    pub fn resolve(config_file: Option<&Path>, overrides: &[String]) -> Result<Settings> {
        let mut values: BTreeMap<String, String> = DEFAULTS
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();

        if let Some(path) = config_file {
            let text = std::fs::read_to_string(path).map_err(|e| {
                if e.kind() == std::io::ErrorKind::NotFound {
                    Error::usage(format!("missing config file {}", path.display()))
                } else {
                    Error::io(path, e)
                }
            })?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    Error::usage(format!(
                        "{}:{}: expected `key = value`, got `{}`",
                        path.display(),
                        lineno + 1,
                        line
                    ))
                })?;
                let key = key.trim();
                if !is_known_key(key) {
                    return Err(Error::usage(format!(
                        "{}:{}: unknown configuration key `{}`",
                        path.display(),
                        lineno + 1,
                        key
                    )));
                }
                values.insert(key.to_string(), value.trim().to_string());
            }
        }

        if let Ok(workers) = std::env::var("SENSEFORGE_WORKERS") {
            values.insert("workers".to_string(), workers);
        }

        for pair in overrides {
            let (key, value) = pair.split_once('=').ok_or_else(|| {
                Error::usage(format!("--set takes `key=value`, got `{}`", pair))
            })?;
            let key = key.trim();
            if !is_known_key(key) {
                return Err(Error::usage(format!("unknown configuration key `{}`", key)));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }

        let settings = Settings { values };
        settings.materialize_layers()
    }

    /// Fills in defaults for every configured layer and rejects keys that
    /// address layers beyond the configured count.
    fn materialize_layers(mut self) -> Result<Settings> {
        let layers = self.unsigned("layers")?;
        if layers == 0 {
            return Err(Error::usage("layers must be at least 1"));
        }
        for n in 1..=layers {
            for (field, default) in LAYER_FIELDS {
                self.values
                    .entry(format!("layer{}.{}", n, field))
                    .or_insert_with(|| default.to_string());
            }
        }
        for key in self.values.keys() {
            if let Some((n, _)) = split_layer_key(key) {
                if u64::from(n) > layers {
                    return Err(Error::usage(format!(
                        "{} is set but layers = {}",
                        key, layers
                    )));
                }
            }
        }
        Ok(self)
    }

    fn get(&self, key: &str) -> &str {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("unregistered settings key {key}"))
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        let value = self.get(key);
        if value == NONE || value.is_empty() {
            None
        } else {
            Some(PathBuf::from(value))
        }
    }

    pub fn require_path(&self, key: &str) -> Result<PathBuf> {
        self.path(key).ok_or_else(|| {
            Error::usage(format!(
                "{key} is required; set it in the config file or with --set {key}=PATH"
            ))
        })
    }

    pub fn boolean(&self, key: &str) -> Result<bool> {
        match self.get(key) {
            "true" => Ok(true),
            "false" => Ok(false),
            other => Err(Error::usage(format!(
                "{key} must be true or false, got `{other}`"
            ))),
        }
    }

    pub fn unsigned(&self, key: &str) -> Result<u64> {
        self.get(key).parse().map_err(|_| {
            Error::usage(format!(
                "{key} must be an unsigned integer, got `{}`",
                self.get(key)
            ))
        })
    }

    pub fn float(&self, key: &str) -> Result<f64> {
        self.get(key).parse().map_err(|_| {
            Error::usage(format!("{key} must be a number, got `{}`", self.get(key)))
        })
    }

    fn optional_float(&self, key: &str) -> Result<Option<f64>> {
        if self.get(key) == NONE {
            Ok(None)
        } else {
            self.float(key).map(Some)
        }
    }

    /// Parses a `+sSyn+PR+Dom` style variant label; `-` means none.
    fn semantic_flags(&self, key: &str) -> Result<std::collections::BTreeSet<SemanticFlag>> {
        let value = self.get(key);
        let mut flags = std::collections::BTreeSet::new();
        if value == NONE || value.is_empty() {
            return Ok(flags);
        }
        let body = value.strip_prefix('+').ok_or_else(|| {
            Error::usage(format!(
                "{key} must list flags like +sSyn+PR+Dom, got `{value}`"
            ))
        })?;
        for part in body.split('+') {
            let flag: SemanticFlag = part.parse().map_err(|_| {
                Error::usage(format!("{key}: `{part}` is not one of sSyn, PR, Dom"))
            })?;
            flags.insert(flag);
        }
        Ok(flags)
    }

    pub fn layer_configs(&self) -> Result<Vec<LayerConfig>> {
        let layers = self.unsigned("layers")?;
        let mut configs = Vec::with_capacity(layers as usize);
        for n in 1..=layers {
            let key = |field: &str| format!("layer{}.{}", n, field);
            let base: BaseSystem = self.get(&key("base")).parse().map_err(|_| {
                Error::usage(format!(
                    "{} must be IMS, IMSWE, or IMSC2V, got `{}`",
                    key("base"),
                    self.get(&key("base"))
                ))
            })?;
            configs.push(LayerConfig {
                base,
                semantic: self.semantic_flags(&key("semantic"))?,
                drop_surrounding_words: self.boolean(&key("drop_surrounding_words"))?,
                window_radius: self.unsigned(&key("window"))? as usize,
                vectors_path: self.path(&key("vectors")),
                context_vectors_path: self.path(&key("context_vectors")),
                mixture_gamma: self.optional_float(&key("mixture_gamma"))?,
                mixture_normalize: self.boolean(&key("mixture_normalize"))?,
                mixture_include_target: self.boolean(&key("mixture_include_target"))?,
            });
        }
        Ok(configs)
    }

    /// Parses `corpus,keys[;corpus,keys...]` lists of annotated corpora.
    pub fn corpus_key_pairs(&self, key: &str) -> Result<Vec<(PathBuf, PathBuf)>> {
        let value = self.get(key);
        if value == NONE || value.is_empty() {
            return Ok(Vec::new());
        }
        value
            .split(';')
            .map(|pair| {
                let (corpus, keys) = pair.split_once(',').ok_or_else(|| {
                    Error::usage(format!(
                        "{key}: expected `corpus,keys` pairs separated by `;`, got `{pair}`"
                    ))
                })?;
                Ok((PathBuf::from(corpus.trim()), PathBuf::from(keys.trim())))
            })
            .collect()
    }

    pub fn augmentation(&self) -> Result<AugmentationOptions> {
        Ok(AugmentationOptions {
            use_sli: self.boolean("augment.sli")?,
            use_examples: self.boolean("augment.examples")?,
            gloss_corpora: self.corpus_key_pairs("augment.gloss_corpora")?,
            restrict_to_inventory: self.boolean("augment.restrict_to_inventory")?,
        })
    }

    pub fn train_options(&self, corpus_digests: BTreeMap<String, String>) -> Result<TrainOptions> {
        Ok(TrainOptions {
            train: TrainConfig {
                c: self.float("svm.c")?,
                tolerance: self.float("svm.tolerance")?,
                max_epochs: self.unsigned("svm.max_epochs")? as u32,
                seed: self.unsigned("svm.seed")?,
                record_objectives: false,
            },
            augmentation: self.augmentation()?,
            max_layers: self.unsigned("train.max_layers")? as u32,
            predict_seen_single_sense: self.boolean("train.predict_seen_single_sense")?,
            corpus_digests,
        })
    }

    pub fn disambiguation_mode(&self) -> Result<DisambiguationMode> {
        match self.unsigned("iterate")? {
            0 => Ok(DisambiguationMode::SinglePass),
            passes => Ok(DisambiguationMode::Iterate(passes as u32)),
        }
    }

    /// Parses the `benchmarks` list of `name=corpus,keys` entries.
    pub fn benchmarks(&self) -> Result<Vec<(String, PathBuf, PathBuf)>> {
        let value = self.get("benchmarks");
        if value == NONE || value.is_empty() {
            return Ok(Vec::new());
        }
        value
            .split(';')
            .map(|entry| {
                let malformed = || {
                    Error::usage(format!(
                        "benchmarks: expected `name=corpus,keys` entries separated by `;`, \
                         got `{entry}`"
                    ))
                };
                let (name, paths) = entry.split_once('=').ok_or_else(malformed)?;
                let (corpus, keys) = paths.split_once(',').ok_or_else(malformed)?;
                Ok((
                    name.trim().to_string(),
                    PathBuf::from(corpus.trim()),
                    PathBuf::from(keys.trim()),
                ))
            })
            .collect()
    }

    pub fn denominator(&self) -> Result<NonWfsDenominator> {
        match self.get("score.denominator") {
            "correct" => Ok(NonWfsDenominator::CorrectAnswers),
            "all" => Ok(NonWfsDenominator::AllInstances),
            other => Err(Error::usage(format!(
                "score.denominator must be correct or all, got `{other}`"
            ))),
        }
    }

    pub fn base_systems(&self, key: &str) -> Result<Vec<BaseSystem>> {
        self.get(key)
            .split(',')
            .map(|name| {
                name.trim().parse().map_err(|_| {
                    Error::usage(format!(
                        "{key}: `{}` is not one of IMS, IMSWE, IMSC2V",
                        name.trim()
                    ))
                })
            })
            .collect()
    }

    /// Logs every resolved key to the diagnostic stream.
    pub fn log_resolved(&self) {
        for (key, value) in &self.values {
            eprintln!("config: {} = {}", key, value);
        }
    }
}
