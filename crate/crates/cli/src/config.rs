use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use polyrep_core::polyrep::DEFAULT_ALPHA;
use polyrep_core::{AggregationMode, Operator, PositiveRule, PrepLevel, Representation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorChoice {
    Consensus,
    Recommendation,
    Both,
}

impl OperatorChoice {
    pub fn includes(self, op: Operator) -> bool {
        match self {
            OperatorChoice::Both => true,
            OperatorChoice::Consensus => op == Operator::Consensus,
            OperatorChoice::Recommendation => op == Operator::Recommendation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    /// Structured object (JSON).
    Obj,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Tsv => "tsv",
            Format::Obj => "json",
        }
    }
}

/// Flags shared by every command. Anything left unset falls back to the
/// `--config` file, then to the defaults.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Flat key=value file supplying any of the options below.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Topics file, one JSON object per line.
    #[arg(long, global = true, value_name = "FILE")]
    pub topics: Option<PathBuf>,
    /// Preprocessing levels, comma separated.
    #[arg(long, global = true, value_name = "LEVELS")]
    pub prep: Option<String>,
    /// Base rate of every evidence opinion.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Positive evidence rule for consensus: union or intersection.
    #[arg(long, global = true, value_name = "RULE")]
    pub positive_rule: Option<String>,
    /// Aggregation over topics: macro or pooled.
    #[arg(long, global = true, value_name = "MODE")]
    pub agg: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub operator: Option<OperatorChoice>,
    /// TREC run file. Repeatable; `rep_a,rep_b=PATH` binds a run to one pair.
    #[arg(long, global = true, value_name = "[PAIR=]PATH")]
    pub run: Vec<String>,
    /// TREC qrels file.
    #[arg(long, global = true, value_name = "FILE")]
    pub qrels: Option<PathBuf>,
    /// Output directory; reports go to stdout when omitted.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunBinding {
    All(PathBuf),
    Pair(Representation, Representation, PathBuf),
}

impl RunBinding {
    pub fn path(&self) -> &Path {
        match self {
            RunBinding::All(p) | RunBinding::Pair(_, _, p) => p,
        }
    }
}

impl FromStr for RunBinding {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some((pair, path)) = s.split_once('=') {
            if let Some((a, b)) = pair.split_once(',') {
                if let (Ok(a), Ok(b)) = (a.parse(), b.parse()) {
                    return Ok(RunBinding::Pair(a, b, PathBuf::from(path)));
                }
            }
        }
        if s.is_empty() {
            bail!("empty run path");
        }
        Ok(RunBinding::All(PathBuf::from(s)))
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub topics: Option<PathBuf>,
    pub levels: Vec<PrepLevel>,
    pub alpha: f64,
    pub positive_rule: PositiveRule,
    pub aggregation: AggregationMode,
    pub operator: OperatorChoice,
    pub runs: Vec<RunBinding>,
    pub qrels: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn parse_levels(s: &str) -> Result<Vec<PrepLevel>> {
    let mut levels = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let level: PrepLevel = part.parse()?;
        if !levels.contains(&level) {
            levels.push(level);
        }
    }
    if levels.is_empty() {
        bail!("at least one preprocessing level is required");
    }
    levels.sort();
    Ok(levels)
}

fn parse_alpha(s: &str) -> Result<f64> {
    let alpha: f64 = s.trim().parse().with_context(|| format!("invalid alpha `{s}`"))?;
    check_alpha(alpha)
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        bail!("alpha must lie in [0, 1], got {alpha}");
    }
    Ok(alpha)
}

fn value_enum<T: ValueEnum>(s: &str) -> Result<T> {
    T::from_str(s.trim(), true).map_err(|e| anyhow!(e))
}

impl Config {
    /// Defaults, overridden by the config file (if any), overridden by flags.
    pub fn resolve(flags: &Flags) -> Result<Self> {
        let mut config = Config {
            topics: None,
            levels: PrepLevel::ALL.to_vec(),
            alpha: DEFAULT_ALPHA,
            positive_rule: PositiveRule::default(),
            aggregation: AggregationMode::default(),
            operator: OperatorChoice::Both,
            runs: Vec::new(),
            qrels: None,
            out: None,
            format: Format::Tsv,
        };
        if let Some(path) = &flags.config {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            config
                .apply_file(&text)
                .with_context(|| format!("in config file {}", path.display()))?;
        }

        if let Some(p) = &flags.topics {
            config.topics = Some(p.clone());
        }
        if let Some(s) = &flags.prep {
            config.levels = parse_levels(s)?;
        }
        if let Some(a) = flags.alpha {
            config.alpha = check_alpha(a)?;
        }
        if let Some(s) = &flags.positive_rule {
            config.positive_rule = s.parse()?;
        }
        if let Some(s) = &flags.agg {
            config.aggregation = s.parse()?;
        }
        if let Some(op) = flags.operator {
            config.operator = op;
        }
        if !flags.run.is_empty() {
            config.runs = flags.run.iter().map(|r| r.parse()).collect::<Result<_>>()?;
        }
        if let Some(p) = &flags.qrels {
            config.qrels = Some(p.clone());
        }
        if let Some(p) = &flags.out {
            config.out = Some(p.clone());
        }
        if let Some(f) = flags.format {
            config.format = f;
        }
        Ok(config)
    }

    fn apply_file(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key=value", i + 1))?;
            let value = value.trim();
            self.apply_key(key.trim(), value)
                .with_context(|| format!("line {}", i + 1))?;
        }
        Ok(())
    }

    fn apply_key(&mut self, key: &str, value: &str) -> Result<()> {
        match key.replace('_', "-").as_str() {
            "topics" => self.topics = Some(value.into()),
            "prep" => self.levels = parse_levels(value)?,
            "alpha" => self.alpha = parse_alpha(value)?,
            "positive-rule" => self.positive_rule = value.parse()?,
            "agg" => self.aggregation = value.parse()?,
            "operator" => self.operator = value_enum(value)?,
            "run" => self.runs.push(value.parse()?),
            "qrels" => self.qrels = Some(value.into()),
            "out" => self.out = Some(value.into()),
            "format" => self.format = value_enum(value)?,
            other => bail!("unknown key `{other}`"),
        }
        Ok(())
    }

    pub fn topics_path(&self) -> Result<&Path> {
        self.topics
            .as_deref()
            .ok_or_else(|| anyhow!("--topics is required"))
    }

    pub fn qrels_path(&self) -> Result<&Path> {
        self.qrels
            .as_deref()
            .ok_or_else(|| anyhow!("--qrels is required"))
    }
}
