use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use capdiv_core::analysis::{
    classical_mds, semantic_projection, vocab_report, MdsEmbedding, RADAR_COMPONENTS,
};
use capdiv_core::diversity::{cider_kernel, KernelKind};
use capdiv_core::evaluation::{evaluate_corpus, CorpusSummary, EvaluationRecord, ImageEntry};
use capdiv_core::similarity::{build_idf, IdfFile, IdfTable};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{IdfSource, RunConfig};
use crate::correlate::{correlate_tables, load_judgments, score_tables, CorrelationSummary};
use crate::dataset::{read_utf8, validate, Dataset};
use crate::error::{CliError, Result};

pub const REPORT_FILE: &str = "report.jsonl";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CSV_FILE: &str = "report.csv";
pub const MDS_FILE: &str = "mds.jsonl";
pub const RADAR_FILE: &str = "radar.jsonl";
pub const VOCAB_FILE: &str = "vocab.csv";
pub const CORRELATION_FILE: &str = "correlation.json";

#[derive(Debug, Serialize)]
struct RunSummary<'a> {
    config: &'a RunConfig,
    ngram_max: usize,
    idf_documents: usize,
    summary: &'a CorpusSummary,
}

#[derive(Debug, Serialize)]
struct MdsRow<'a> {
    image_id: &'a str,
    kernel: KernelKind,
    #[serde(flatten)]
    embedding: MdsEmbedding,
}

#[derive(Debug, Serialize)]
struct RadarRow<'a> {
    image_id: &'a str,
    kernel: KernelKind,
    stop_words_removed: bool,
    singular_values: [f64; RADAR_COMPONENTS],
    /// One row of component loadings per caption.
    loadings: Vec<[f64; RADAR_COMPONENTS]>,
}

/// Files written by a successful run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutputs {
    pub files: Vec<PathBuf>,
}

pub fn load_idf(source: &IdfSource, dataset: &Dataset) -> Result<IdfTable> {
    match source {
        IdfSource::References => {
            let docs: Vec<_> = dataset
                .images
                .iter()
                .map(|e| e.reference_tokens())
                .collect();
            Ok(build_idf(&docs)?)
        }
        IdfSource::ExternalFile(path) => {
            let file: IdfFile = serde_json::from_str(&read_utf8(path)?).map_err(|e| {
                CliError::invalid(format!("{}: malformed idf file: {e}", path.display()))
            })?;
            IdfTable::from_file(file)
                .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
        }
    }
}

/// Evaluate a validated dataset and write every report into `config.out_dir`.
/// Per-image work runs on the current rayon pool; writing is sequential in
/// image id order.
pub fn run(config: &RunConfig, dataset: &Dataset) -> Result<RunOutputs> {
    config.validate()?;
    validate(dataset, config.evaluation.metrics)?;
    let judgments = config
        .judgments
        .as_deref()
        .map(load_judgments)
        .transpose()?;
    let idf = load_idf(&config.idf, dataset)?;

    let report = evaluate_corpus(&dataset.images, &idf, &config.evaluation)?;

    let out = &config.out_dir;
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let mut files = Vec::new();

    let path = out.join(REPORT_FILE);
    write_with(&path, |w| {
        for record in &report.records {
            serde_json::to_writer(&mut *w, record)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    })?;
    files.push(path);

    let path = out.join(SUMMARY_FILE);
    let summary = RunSummary {
        config,
        ngram_max: config.ngram_max(),
        idf_documents: idf.n_docs(),
        summary: &report.summary,
    };
    write_json(&path, &summary)?;
    files.push(path);

    let path = out.join(CSV_FILE);
    write_csv(&path, &report.records)?;
    files.push(path);

    let mut entries: Vec<&ImageEntry> = dataset.images.iter().collect();
    entries.sort_by(|a, b| a.image_id.cmp(&b.image_id));

    if config.exports.mds {
        let rows = entries
            .par_iter()
            .map(|e| {
                let kernel = cider_kernel(&e.candidate_tokens(), &idf)
                    .and_then(|k| classical_mds(&k))
                    .map_err(|err| err.for_image_id(&e.image_id))?;
                Ok(MdsRow {
                    image_id: &e.image_id,
                    kernel: KernelKind::SelfCider,
                    embedding: kernel,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let path = out.join(MDS_FILE);
        write_json_lines(&path, &rows)?;
        files.push(path);
    }

    if config.exports.radar {
        let rows = entries
            .par_iter()
            .map(|e| {
                let captions = e.candidate_tokens();
                [KernelKind::Bow, KernelKind::SelfCider]
                    .into_iter()
                    .map(|kind| {
                        let stop = kind == KernelKind::Bow && config.radar_stop_words;
                        let p = semantic_projection(&captions, kind, &idf, stop)
                            .map_err(|err| err.for_image_id(&e.image_id))?;
                        Ok(RadarRow {
                            image_id: &e.image_id,
                            kernel: kind,
                            stop_words_removed: stop,
                            singular_values: p.leading_singular_values(),
                            loadings: (0..p.len()).map(|j| p.loadings(j)).collect(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<RadarRow> = rows.into_iter().flatten().collect();
        let path = out.join(RADAR_FILE);
        write_json_lines(&path, &rows)?;
        files.push(path);
    }

    if config.exports.vocab {
        let all = |f: fn(&ImageEntry) -> Vec<_>| entries.iter().flat_map(|e| f(e)).collect();
        let sources = [
            ("candidates", all(ImageEntry::candidate_tokens)),
            ("references", all(ImageEntry::reference_tokens)),
        ];
        let rows = vocab_report(&sources, config.vocab_top_k);
        let path = out.join(VOCAB_FILE);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        let mut w = csv::Writer::from_writer(BufWriter::new(file));
        for row in &rows {
            w.serialize(row).map_err(|e| csv_error(&path, e))?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
        files.push(path);
    }

    if let Some(judgments) = judgments {
        let tables = score_tables([(config.method_id.as_str(), report.records.as_slice())]);
        let summary: CorrelationSummary = correlate_tables(&judgments, &tables);
        let path = out.join(CORRELATION_FILE);
        write_json(&path, &summary)?;
        files.push(path);
    }

    Ok(RunOutputs { files })
}

trait ForImage {
    fn for_image_id(self, id: &str) -> CliError;
}

impl ForImage for capdiv_core::Error {
    fn for_image_id(self, id: &str) -> CliError {
        CliError::Validation(vec![format!("image {id}: {self}")])
    }
}

fn write_with<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_with(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        w.write_all(b"\n")
    })
}

fn write_json_lines<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    write_with(path, |w| {
        for row in rows {
            serde_json::to_writer(&mut *w, row)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    })
}

fn csv_error(path: &Path, err: csv::Error) -> CliError {
    match err.into_kind() {
        csv::ErrorKind::Io(e) => CliError::io(path, e),
        other => CliError::invalid(format!("{}: {other:?}", path.display())),
    }
}

fn write_csv(path: &Path, records: &[EvaluationRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let header = [
        "image_id",
        "acc",
        "div_lsa",
        "div_self_cider",
        "div_mbleu_mix",
        "f_score",
    ];
    w.write_record(header).map_err(|e| csv_error(path, e))?;
    for r in records {
        w.write_record([
            r.image_id.clone(),
            r.acc.to_string(),
            cell(r.div_lsa),
            cell(r.div_self_cider),
            cell(r.div_mbleu_mix),
            cell(r.f_score),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
