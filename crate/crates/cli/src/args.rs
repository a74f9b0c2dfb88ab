use std::path::PathBuf;

use capdiv_core::evaluation::{AccuracyScale, MetricSet};
use capdiv_core::similarity::{build_idf, BleuSmoothing};
use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{threads_from_env, Exports, IdfSource, RunConfig};
use crate::correlate::{correlate, parse_report_arg};
use crate::dataset::{parse_dataset, read_utf8, Dataset};
use crate::error::{CliError, Result};
use crate::run::{run, write_json};

#[derive(Debug, Parser)]
#[command(
    name = "capdiv",
    version,
    about = "Accuracy and diversity metrics for image caption sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a caption dataset and write reports.
    Run(RunArgs),
    /// Correlate diversity reports of several methods with human judgments.
    Correlate(CorrelateArgs),
    /// Write the IDF table built from a dataset's reference captions.
    BuildIdf(BuildIdfArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Lsa,
    SelfCider,
    Mbleu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Export {
    Mds,
    Radar,
    Vocab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Unit,
    X10,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Smoothing {
    None,
    Epsilon,
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// Dataset JSON: {"images": [{"id", "candidates", "references"}]}.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "lsa,self-cider,mbleu"
    )]
    pub metrics: Vec<Metric>,
    #[arg(long, default_value_t = 5.0)]
    pub beta2: f64,
    #[arg(long, value_enum, default_value = "unit")]
    pub acc_scale: Scale,
    /// IDF table file; by default IDF comes from the dataset's references.
    #[arg(long)]
    pub idf: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "2,5,8,10")]
    pub top_k: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub export: Vec<Export>,
    #[arg(long, value_enum, default_value = "none")]
    pub bleu_smoothing: Smoothing,
    /// Human judgments JSON: {"image_id": {"method_id": score}}.
    #[arg(long)]
    pub judgments: Option<PathBuf>,
    /// Method id of this run when matching judgments; defaults to the input file stem.
    #[arg(long)]
    pub method_id: Option<String>,
    /// Remove stop words before the bag-of-words radar projection.
    #[arg(long)]
    pub radar_stop_words: bool,
    #[arg(long, default_value_t = capdiv_core::analysis::DEFAULT_TOP_WORDS)]
    pub vocab_top_k: usize,
}

#[derive(Debug, clap::Args)]
pub struct CorrelateArgs {
    #[arg(long)]
    pub judgments: PathBuf,
    /// METHOD=PATH of a report.jsonl; repeat once per method.
    #[arg(long = "report", required = true, value_parser = parse_report_arg)]
    pub reports: Vec<(String, PathBuf)>,
    /// Write the summary here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct BuildIdfArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

impl RunArgs {
    pub fn to_config(&self) -> RunConfig {
        let mut config = RunConfig::new(&self.out_dir);
        let has = |m| self.metrics.contains(&m);
        config.evaluation.metrics = MetricSet {
            lsa: has(Metric::Lsa),
            self_cider: has(Metric::SelfCider),
            mbleu: has(Metric::Mbleu),
        };
        config.evaluation.beta2 = self.beta2;
        config.evaluation.acc_scale = match self.acc_scale {
            Scale::Unit => AccuracyScale::Unit,
            Scale::X10 => AccuracyScale::X10,
        };
        config.evaluation.top_k = self.top_k.clone();
        config.evaluation.bleu_smoothing = match self.bleu_smoothing {
            Smoothing::None => BleuSmoothing::None,
            Smoothing::Epsilon => BleuSmoothing::Epsilon,
        };
        config.idf = match &self.idf {
            Some(p) => IdfSource::ExternalFile(p.clone()),
            None => IdfSource::References,
        };
        config.exports = Exports {
            mds: self.export.contains(&Export::Mds),
            radar: self.export.contains(&Export::Radar),
            vocab: self.export.contains(&Export::Vocab),
        };
        config.radar_stop_words = self.radar_stop_words;
        config.vocab_top_k = self.vocab_top_k;
        config.judgments = self.judgments.clone();
        config.method_id = self.method_id.clone().unwrap_or_else(|| {
            self.input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "run".into())
        });
        config
    }
}

fn load_dataset(path: &std::path::Path) -> Result<Dataset> {
    parse_dataset(&read_utf8(path)?)
}

/// Run a parsed command line inside a worker pool bounded by `CAPDIV_THREADS`.
pub fn execute(cli: Cli) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads_from_env()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::invalid(format!("worker pool: {e}")))?;
    pool.install(|| dispatch(cli.command))
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run(args) => {
            let config = args.to_config();
            config.validate()?;
            let dataset = load_dataset(&args.input)?;
            run(&config, &dataset)?;
            Ok(())
        }
        Command::Correlate(args) => {
            let summary = correlate(&args.judgments, &args.reports)?;
            match args.output {
                Some(path) => write_json(&path, &summary),
                None => {
                    let text = serde_json::to_string_pretty(&summary)
                        .map_err(|e| CliError::invalid(e.to_string()))?;
                    println!("{text}");
                    Ok(())
                }
            }
        }
        Command::BuildIdf(args) => {
            let dataset = load_dataset(&args.input)?;
            let docs: Vec<_> = dataset
                .images
                .iter()
                .map(|e| e.reference_tokens())
                .collect();
            let idf = build_idf(&docs)?;
            write_json(&args.output, &idf.to_file())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_defaults_follow_the_standard_protocol() {
        let cli =
            Cli::try_parse_from(["capdiv", "run", "--input", "data/x.json", "--out-dir", "o"])
                .unwrap();
        let Command::Run(args) = cli.command else {
            panic!()
        };
        let c = args.to_config();
        assert_eq!(c.evaluation.metrics, MetricSet::ALL);
        assert_eq!(c.evaluation.beta2, 5.0);
        assert_eq!(c.evaluation.top_k, vec![2, 5, 8, 10]);
        assert_eq!(c.evaluation.acc_scale, AccuracyScale::Unit);
        assert_eq!(c.idf, IdfSource::References);
        assert_eq!(c.exports, Exports::default());
        assert_eq!(c.method_id, "x");
    }

    #[test]
    fn run_flags_parse() {
        let cli = Cli::try_parse_from([
            "capdiv",
            "run",
            "--input",
            "d.json",
            "--out-dir",
            "o",
            "--metrics",
            "lsa,mbleu",
            "--beta2",
            "1",
            "--acc-scale",
            "x10",
            "--idf",
            "idf.json",
            "--top-k",
            "2,3",
            "--export",
            "mds,vocab",
            "--bleu-smoothing",
            "epsilon",
            "--method-id",
            "m",
        ])
        .unwrap();
        let Command::Run(args) = cli.command else {
            panic!()
        };
        let c = args.to_config();
        assert!(c.evaluation.metrics.lsa && !c.evaluation.metrics.self_cider);
        assert_eq!(c.evaluation.acc_scale, AccuracyScale::X10);
        assert_eq!(c.evaluation.top_k, vec![2, 3]);
        assert_eq!(c.evaluation.bleu_smoothing, BleuSmoothing::Epsilon);
        assert_eq!(c.idf, IdfSource::ExternalFile("idf.json".into()));
        assert!(c.exports.mds && c.exports.vocab && !c.exports.radar);
        assert_eq!(c.method_id, "m");
    }

    #[test]
    fn rejects_unknown_values() {
        for argv in [
            vec![
                "capdiv",
                "run",
                "--input",
                "d",
                "--out-dir",
                "o",
                "--metrics",
                "rouge",
            ],
            vec![
                "capdiv",
                "run",
                "--input",
                "d",
                "--out-dir",
                "o",
                "--export",
                "png",
            ],
            vec![
                "capdiv",
                "correlate",
                "--judgments",
                "j",
                "--report",
                "nomethod",
            ],
        ] {
            assert!(Cli::try_parse_from(argv).is_err());
        }
    }
}
