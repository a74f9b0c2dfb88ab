use std::collections::HashSet;
use std::fs;
use std::path::Path;

use capdiv_core::evaluation::{ImageEntry, MetricSet};
use capdiv_core::text::tokenize;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Top-level dataset file: `{"images": [{"id", "candidates", "references"}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dataset {
    pub images: Vec<ImageEntry>,
}

pub fn read_utf8(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    if bytes.starts_with(&[0xEF, 0xBB, 0xBF]) {
        return Err(CliError::invalid(format!(
            "{}: UTF-8 byte order mark is not allowed",
            path.display()
        )));
    }
    String::from_utf8(bytes)
        .map_err(|e| CliError::invalid(format!("{}: not valid UTF-8: {e}", path.display())))
}

pub fn parse_dataset(text: &str) -> Result<Dataset> {
    serde_json::from_str(text).map_err(|e| CliError::invalid(format!("malformed dataset: {e}")))
}

/// Check every entry and report all problems at once.
pub fn validate(dataset: &Dataset, metrics: MetricSet) -> Result<()> {
    let mut issues = Vec::new();
    let mut seen = HashSet::new();
    for (pos, image) in dataset.images.iter().enumerate() {
        let id = &image.image_id;
        if id.is_empty() {
            issues.push(format!("images[{pos}]: empty id"));
        } else if !seen.insert(id.as_str()) {
            issues.push(format!("image {id}: duplicate id"));
        }
        if image.candidates.len() < 2 {
            issues.push(format!(
                "image {id}: {} candidate caption(s), diversity needs at least 2",
                image.candidates.len()
            ));
        }
        if image.references.is_empty() {
            issues.push(format!("image {id}: no reference captions"));
        }
        if metrics.lsa {
            for (i, c) in image.candidates.iter().enumerate() {
                if tokenize(c).is_empty() {
                    issues.push(format!(
                        "image {id}: candidate {i} is empty after tokenization"
                    ));
                }
            }
        }
    }
    if dataset.images.is_empty() {
        issues.push("dataset contains no images".into());
    }
    if issues.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(issues))
    }
}

/// Read, parse and validate a dataset file.
pub fn ingest(path: &Path, metrics: MetricSet) -> Result<Vec<ImageEntry>> {
    let dataset = parse_dataset(&read_utf8(path)?)?;
    validate(&dataset, metrics)?;
    Ok(dataset.images)
}
