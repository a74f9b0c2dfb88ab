use std::path::PathBuf;

use capdiv_core::evaluation::EvaluationConfig;
use capdiv_core::text::MAX_ORDER;
use serde::Serialize;

use crate::error::{CliError, Result};

pub const THREADS_ENV: &str = "CAPDIV_THREADS";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "path", rename_all = "kebab-case")]
pub enum IdfSource {
    /// Document frequencies over the dataset's own reference sets.
    References,
    ExternalFile(PathBuf),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Exports {
    pub mds: bool,
    pub radar: bool,
    pub vocab: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub evaluation: EvaluationConfig,
    pub idf: IdfSource,
    pub exports: Exports,
    /// Strip stop words before the bag-of-words radar projection.
    pub radar_stop_words: bool,
    pub vocab_top_k: usize,
    #[serde(skip)]
    pub out_dir: PathBuf,
    #[serde(skip)]
    pub judgments: Option<PathBuf>,
    pub method_id: String,
}

impl RunConfig {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            evaluation: EvaluationConfig::default(),
            idf: IdfSource::References,
            exports: Exports::default(),
            radar_stop_words: false,
            vocab_top_k: capdiv_core::analysis::DEFAULT_TOP_WORDS,
            out_dir: out_dir.into(),
            judgments: None,
            method_id: "run".into(),
        }
    }

    pub fn ngram_max(&self) -> usize {
        MAX_ORDER
    }

    pub fn validate(&self) -> Result<()> {
        self.evaluation
            .validate()
            .map_err(|e| CliError::invalid(e.to_string()))?;
        if self.method_id.is_empty() {
            return Err(CliError::invalid("method id must not be empty"));
        }
        Ok(())
    }
}

/// Worker count from `CAPDIV_THREADS`, if set.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::invalid(format!("{THREADS_ENV}: {e}"))),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::invalid(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}
