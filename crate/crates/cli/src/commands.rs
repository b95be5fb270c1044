use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use polyrep_core::eval::{
    component_points, evaluate, parse_qrels, parse_run, spearman, write_metric_tsv, Component, Metric,
    MetricReport,
};
use polyrep_core::polyrep::{parse_topics, run_matrix, table_rows, write_table_tsv};
use polyrep_core::{tokenize, CombinationResult, MatrixConfig, Representation, Topic};
use serde::Serialize;

use crate::config::{Config, Format, RunBinding};

/// Where reports go: a file in the output directory, or stdout.
struct Sink<'a> {
    dir: Option<&'a Path>,
}

impl<'a> Sink<'a> {
    fn new(config: &'a Config) -> Result<Self> {
        if let Some(dir) = &config.out {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        Ok(Self {
            dir: config.out.as_deref(),
        })
    }

    fn emit(&self, name: &str, bytes: &[u8]) -> Result<()> {
        match self.dir {
            Some(dir) => {
                let path = dir.join(name);
                fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))
            }
            None => {
                let mut out = io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
                Ok(())
            }
        }
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn load_topics(config: &Config) -> Result<Vec<Topic>> {
    let path = config.topics_path()?;
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_topics(BufReader::new(file)).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Serialize)]
struct PrepEntry<'a> {
    topic: &'a str,
    representation: Representation,
    level: String,
    terms: Vec<&'a str>,
}

pub fn prep(config: &Config) -> Result<()> {
    let topics = load_topics(config)?;
    let sets: Vec<_> = topics
        .iter()
        .flat_map(|t| {
            Representation::ALL.into_iter().flat_map(move |rep| {
                config
                    .levels
                    .iter()
                    .map(move |&level| (t, rep, level, tokenize(t.text(rep), level)))
            })
        })
        .collect();

    let bytes = match config.format {
        Format::Tsv => {
            let mut s = String::from("topic\trepresentation\tlevel\tterms\n");
            for (t, rep, level, terms) in &sets {
                writeln!(s, "{}\t{rep}\t{level}\t{}", t.id, terms.join())?;
            }
            s.into_bytes()
        }
        Format::Obj => {
            let entries: Vec<PrepEntry> = sets
                .iter()
                .map(|(t, rep, level, terms)| PrepEntry {
                    topic: &t.id,
                    representation: *rep,
                    level: level.to_string(),
                    terms: terms.iter().collect(),
                })
                .collect();
            to_json(&entries)?
        }
    };
    Sink::new(config)?.emit(&format!("prep.{}", config.format.extension()), &bytes)
}

fn matrix(config: &Config, topics: &[Topic]) -> Result<Vec<CombinationResult>> {
    let matrix_config = MatrixConfig {
        levels: config.levels.clone(),
        alpha: config.alpha,
        positive_rule: config.positive_rule,
        aggregation: config.aggregation,
    };
    let results = run_matrix(topics, &matrix_config)?;
    Ok(results
        .into_iter()
        .filter(|r| config.operator.includes(r.spec.operator))
        .collect())
}

pub fn polyrep(config: &Config) -> Result<()> {
    let topics = load_topics(config)?;
    let results = matrix(config, &topics)?;
    let rows = table_rows(&results);
    let bytes = match config.format {
        Format::Tsv => {
            let mut out = Vec::new();
            write_table_tsv(&rows, &mut out)?;
            out
        }
        Format::Obj => {
            #[derive(Serialize)]
            struct Report<'a> {
                rows: &'a [polyrep_core::polyrep::TableRow],
                combinations: &'a [CombinationResult],
            }
            to_json(&Report {
                rows: &rows,
                combinations: &results,
            })?
        }
    };
    Sink::new(config)?.emit(&format!("polyrep.{}", config.format.extension()), &bytes)
}

fn metric_report(run: &Path, qrels: &Path) -> Result<MetricReport> {
    let run = parse_run(run).context("reading run")?;
    let qrels = parse_qrels(qrels).context("reading qrels")?;
    Ok(evaluate(&run, &qrels)?)
}

pub fn evaluate_cmd(config: &Config) -> Result<()> {
    let run = match config.runs.as_slice() {
        [RunBinding::All(path)] => path,
        [] => bail!("--run is required"),
        _ => bail!("evaluate takes exactly one plain --run PATH"),
    };
    let report = metric_report(run, config.qrels_path()?)?;
    let bytes = match config.format {
        Format::Tsv => {
            let mut out = Vec::new();
            write_metric_tsv(&report, &mut out)?;
            out
        }
        Format::Obj => to_json(&report)?,
    };
    Sink::new(config)?.emit(&format!("metrics.{}", config.format.extension()), &bytes)
}

/// The run bound to a representation pair: a pair binding (either order)
/// wins over a plain one.
fn run_for(runs: &[RunBinding], a: Representation, b: Representation) -> Option<&Path> {
    runs.iter()
        .find(|r| matches!(r, RunBinding::Pair(x, y, _) if (*x, *y) == (a, b) || (*x, *y) == (b, a)))
        .or_else(|| runs.iter().find(|r| matches!(r, RunBinding::All(_))))
        .map(RunBinding::path)
}

#[derive(Serialize)]
struct Correlation {
    combination: String,
    component: Component,
    metric: Metric,
    rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

pub fn correlate(config: &Config) -> Result<()> {
    if config.runs.is_empty() {
        bail!("--run is required");
    }
    let topics = load_topics(config)?;
    let qrels = config.qrels_path()?;
    let results = matrix(config, &topics)?;

    let mut reports: BTreeMap<PathBuf, MetricReport> = BTreeMap::new();
    let mut rows = Vec::new();
    let mut plots = Vec::new();
    for result in &results {
        let Some(run) = run_for(&config.runs, result.spec.rep_a, result.spec.rep_b) else {
            continue;
        };
        if !reports.contains_key(run) {
            let report =
                metric_report(run, qrels).with_context(|| format!("evaluating {}", run.display()))?;
            reports.insert(run.to_path_buf(), report);
        }
        let report = &reports[run];
        let slug = result.spec.slug();
        for component in Component::ALL {
            for metric in Metric::ALL {
                let points = component_points(result, report, metric, component)
                    .with_context(|| format!("{slug} against {}", run.display()))?;
                let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
                let (rho, error) = match spearman(&ys, &xs) {
                    Ok(rho) => (Some(rho), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                plots.push((format!("plot_{slug}_{component}_{metric}.tsv"), points));
                rows.push(Correlation {
                    combination: slug.clone(),
                    component,
                    metric,
                    rho,
                    error,
                });
            }
        }
    }
    if rows.is_empty() {
        bail!("no combination has a run bound to its representation pair");
    }

    let bytes = match config.format {
        Format::Tsv => {
            let mut s = String::from("combination\tcomponent\tmetric\trho\n");
            for r in &rows {
                let rho = r.rho.map_or_else(|| "NA".to_string(), |v| format!("{v:.4}"));
                writeln!(s, "{}\t{}\t{}\t{rho}", r.combination, r.component, r.metric)?;
            }
            s.into_bytes()
        }
        Format::Obj => to_json(&rows)?,
    };
    let sink = Sink::new(config)?;
    sink.emit(&format!("correlation.{}", config.format.extension()), &bytes)?;
    if sink.dir.is_some() {
        for (name, points) in &plots {
            let mut s = String::from("x\ty\n");
            for (x, y) in points {
                writeln!(s, "{x:.6}\t{y:.6}")?;
            }
            sink.emit(name, s.as_bytes())?;
        }
    }

    let undefined: Vec<String> = rows
        .iter()
        .filter_map(|r| {
            let e = r.error.as_ref()?;
            Some(format!("{} {} {}: {e}", r.combination, r.component, r.metric))
        })
        .collect();
    if !undefined.is_empty() {
        for line in &undefined {
            eprintln!("undefined correlation: {line}");
        }
        return Err(anyhow!("{} correlation(s) undefined", undefined.len()));
    }
    Ok(())
}
