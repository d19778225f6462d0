use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use syncur::config::{load_inputs, read_records_jsonl, records_to_jsonl, AssignmentLine, InputSpec, RunConfig};
use syncur::curriculum::{build, emit_corpus, CurriculumPlan, Strategy};
use syncur::io::{lines_to_bytes, write_atomic};
use syncur::prep::{clean_document, coverage, parse_age_table, CorpusKind, LabeledRecord, RawDocument};
use syncur::ptb::parse_ptb;
use syncur::sampler::{sample_group, write_sample, GeneralizationGroup, SampleRequest};
use syncur::stats::{distribution, export_csv, render_stacked_chart, GroupBy};
use syncur::tregex::{compile_pattern, match_nodes, parse_pattern_file, Pattern};

#[derive(Parser)]
#[command(name = "syncur", version, about = "Syntactic categorization and curriculum construction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Strip speaker labels, clean, segment and filter a raw corpus file
    Clean(CleanArgs),
    /// Align sentences with trees and assign syntactic categories
    Classify(ClassifyArgs),
    /// Category distributions per corpus or age group
    Stats(StatsArgs),
    /// Order a corpus under one training strategy
    Curriculum(CurriculumArgs),
    /// Draw category-restricted train/validation subsets
    Sample(SampleArgs),
    /// Print tree lines matching a pattern
    Match(MatchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CorpusType {
    Childes,
    BncSpoken,
    OpenSubtitles,
    Switchboard,
    SimpleWiki,
    Gutenberg,
    Other,
}

impl CorpusType {
    fn kind(self) -> CorpusKind {
        match self {
            CorpusType::Childes => CorpusKind::Childes,
            CorpusType::BncSpoken => CorpusKind::BncSpoken,
            CorpusType::OpenSubtitles => CorpusKind::OpenSubtitles,
            CorpusType::Switchboard => CorpusKind::Switchboard,
            CorpusType::SimpleWiki => CorpusKind::SimpleWiki,
            CorpusType::Gutenberg => CorpusKind::Gutenberg,
            CorpusType::Other => CorpusKind::Other("other".into()),
        }
    }
}

#[derive(Args)]
struct CleanArgs {
    #[arg(long, value_enum)]
    corpus_type: CorpusType,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Ages per input line; cleaned ages go to `<out>.ages.tsv`
    #[arg(long)]
    ages: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct InputArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, requires = "trees")]
    sentences: Option<PathBuf>,
    #[arg(long, requires = "sentences")]
    trees: Option<PathBuf>,
    #[arg(long, requires = "sentences")]
    ages: Option<PathBuf>,
    /// Corpus id for --sentences/--trees
    #[arg(long, default_value = "corpus")]
    corpus: String,
    /// Previously classified records (records.jsonl) instead of sentences and trees
    #[arg(long, conflicts_with_all = ["sentences", "trees"])]
    records: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

impl InputArgs {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(c) = &self.catalog {
            cfg.catalog_dir = Some(c.clone());
        }
        if let (Some(s), Some(t)) = (&self.sentences, &self.trees) {
            cfg.inputs = vec![InputSpec {
                corpus: self.corpus.clone(),
                sentences: s.clone(),
                trees: t.clone(),
                ages: self.ages.clone(),
            }];
        }
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        Ok(cfg)
    }

    fn records(&self, cfg: &RunConfig) -> Result<Vec<LabeledRecord>> {
        if let Some(p) = &self.records {
            return read_records_jsonl(p);
        }
        let loaded = load_inputs(&cfg.inputs, &cfg.catalog()?)?;
        Ok(loaded.into_iter().flat_map(|l| l.records).collect())
    }
}

fn out_dir(flag: &Option<PathBuf>, cfg: &RunConfig) -> PathBuf {
    flag.clone().or_else(|| cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("."))
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output directory for assignments.jsonl and records.jsonl
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "corpus")]
    group_by: GroupByArg,
    /// CSV report path
    #[arg(long)]
    out: PathBuf,
    /// SVG chart path
    #[arg(long)]
    chart: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupByArg {
    Corpus,
    Age,
}

#[derive(Args)]
struct CurriculumArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_strategy, required_unless_present = "plan")]
    strategy: Option<Strategy>,
    /// TOML plan file; --strategy and --seed override its values
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Ordered sentence file; the manifest is written next to it
    #[arg(long)]
    out: PathBuf,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

fn parse_group(s: &str) -> Result<GeneralizationGroup, String> {
    s.parse()
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_group)]
    group: GeneralizationGroup,
    #[arg(long, default_value_t = 2_000_000)]
    train_tokens: usize,
    #[arg(long, default_value_t = 200_000)]
    val_tokens: usize,
    #[arg(long)]
    include_fragments: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long, required_unless_present = "pattern_file", conflicts_with = "pattern_file")]
    pattern: Option<String>,
    #[arg(long)]
    pattern_file: Option<PathBuf>,
    /// One PTB tree per line
    #[arg(long)]
    trees: PathBuf,
}

enum Failure {
    Usage(anyhow::Error),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(&cli.command);
    let result = match cli.command {
        Command::Clean(a) => clean(a),
        Command::Classify(a) => classify(a),
        Command::Stats(a) => stats(a),
        Command::Curriculum(a) => curriculum(a),
        Command::Sample(a) => sample(a),
        Command::Match(a) => run_match(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// SYNCUR_LOG wins over the config file's `log_level`.
fn init_logging(command: &Command) {
    let input = match command {
        Command::Classify(a) => Some(&a.input),
        Command::Stats(a) => Some(&a.input),
        Command::Curriculum(a) => Some(&a.input),
        Command::Sample(a) => Some(&a.input),
        Command::Clean(_) | Command::Match(_) => None,
    };
    let configured = input
        .and_then(|i| i.config.as_deref())
        .and_then(|p| RunConfig::load(p).ok())
        .and_then(|c| c.log_level)
        .unwrap_or_else(|| "warn".to_string());
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SYNCUR_LOG", configured)).init();
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    write_atomic(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn clean(a: CleanArgs) -> Result<(), Failure> {
    let mut doc = RawDocument::from_text(a.corpus_type.kind(), &read(&a.input)?);
    if let Some(ages) = &a.ages {
        doc = doc.with_ages(&parse_age_table(&read(ages)?).context("age table")?);
    }
    let out = clean_document(&doc);
    write(&a.out, &lines_to_bytes(out.sentences.iter().map(|s| s.text.as_str())))?;
    if doc.ages.is_some() {
        let rows =
            out.sentences.iter().enumerate().filter_map(|(i, s)| s.age_months.map(|m| format!("{}\t{m}", i + 1)));
        let path = a.out.with_extension("ages.tsv");
        write(&path, &lines_to_bytes(std::iter::once("record_id\tmonths".to_string()).chain(rows)))?;
    }
    println!("{}", out.summary);
    Ok(())
}

fn classify(a: ClassifyArgs) -> Result<(), Failure> {
    let cfg = a.input.config()?;
    let dir = out_dir(&a.out, &cfg);
    fs::create_dir_all(&dir).with_context(|| dir.display().to_string())?;
    let loaded = load_inputs(&cfg.inputs, &cfg.catalog()?)?;
    let mut lines = Vec::new();
    let mut all = Vec::new();
    for input in &loaded {
        for r in &input.records {
            lines.push(serde_json::to_string(&AssignmentLine::new(input, r)).context("serializing")?);
        }
        all.extend(input.records.iter().cloned());
    }
    write(&dir.join("assignments.jsonl"), &lines_to_bytes(lines))?;
    write(&dir.join("records.jsonl"), &records_to_jsonl(&all)?)?;
    let (categorized, total) = coverage(&all);
    let pct = if total == 0 { 0.0 } else { 100.0 * categorized as f64 / total as f64 };
    println!("coverage: {categorized}/{total} ({pct:.2}%)");
    Ok(())
}

fn stats(a: StatsArgs) -> Result<(), Failure> {
    let cfg = a.input.config()?;
    let records = a.input.records(&cfg)?;
    let by = match a.group_by {
        GroupByArg::Corpus => GroupBy::Corpus,
        GroupByArg::Age => GroupBy::Age,
    };
    let reports = distribution(&records, by).map_err(anyhow::Error::from)?;
    export_csv(&reports, &a.out).with_context(|| a.out.display().to_string())?;
    if let Some(chart) = &a.chart {
        render_stacked_chart(&reports, chart).with_context(|| chart.display().to_string())?;
    }
    for r in &reports {
        println!("{}\t{} sentences\t{:.2}% uncategorized", r.group, r.total, r.uncategorized_percentage);
    }
    Ok(())
}

fn curriculum(a: CurriculumArgs) -> Result<(), Failure> {
    let cfg = a.input.config()?;
    let mut plan = match &a.plan {
        Some(p) => CurriculumPlan::from_toml(&read(p)?).map_err(|e| Failure::Usage(e.into()))?,
        None => CurriculumPlan::new(a.strategy.expect("required by clap"), cfg.seed()),
    };
    if let Some(s) = a.strategy.filter(|&s| s != plan.strategy) {
        plan = CurriculumPlan::new(s, plan.seed);
    }
    if let Some(seed) = a.input.seed {
        plan.seed = seed;
    }
    let records = a.input.records(&cfg)?;
    let ordered = build(&plan, &records).map_err(anyhow::Error::from)?;
    let manifest = emit_corpus(&ordered, &records, &a.out).map_err(anyhow::Error::from)?;
    println!(
        "{}: {} records, {} tokens, {} excluded; manifest {}",
        plan.strategy,
        ordered.manifest.records,
        ordered.manifest.tokens,
        ordered.manifest.excluded_uncategorized,
        manifest.display()
    );
    Ok(())
}

fn sample(a: SampleArgs) -> Result<(), Failure> {
    let cfg = a.input.config()?;
    let records = a.input.records(&cfg)?;
    let req = SampleRequest {
        group: a.group,
        train_tokens: a.train_tokens,
        val_tokens: a.val_tokens,
        seed: cfg.seed(),
        include_fragments: a.include_fragments,
    };
    let sample = sample_group(&req, &records).map_err(anyhow::Error::from)?;
    let dir = out_dir(&a.out, &cfg);
    fs::create_dir_all(&dir).with_context(|| dir.display().to_string())?;
    let files = write_sample(&sample, &records, &dir).map_err(anyhow::Error::from)?;
    let m = &sample.manifest;
    println!(
        "{}: train {} tokens ({} sentences), val {} tokens ({} sentences) -> {}",
        m.group,
        m.train.actual_tokens,
        m.train.records,
        m.val.actual_tokens,
        m.val.records,
        files.manifest.display()
    );
    Ok(())
}

fn run_match(a: MatchArgs) -> Result<(), Failure> {
    let patterns: Vec<(String, Pattern)> = match (&a.pattern, &a.pattern_file) {
        (Some(src), _) => {
            let p = compile_pattern(src).map_err(|e| Failure::Usage(anyhow::anyhow!("pattern {src:?}: {e}")))?;
            vec![(src.clone(), p)]
        }
        (None, Some(path)) => parse_pattern_file(&read(path)?)
            .map_err(|e| Failure::Usage(anyhow::anyhow!("{}: {e}", path.display())))?
            .into_iter()
            .map(|pl| (pl.source, pl.pattern))
            .collect(),
        (None, None) => unreachable!("clap requires one of them"),
    };
    let trees = read(&a.trees)?;
    let parsed: Vec<_> = trees
        .lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let line = line.trim();
            if line.is_empty() || line == syncur::prep::PARSE_PLACEHOLDER {
                return None;
            }
            match parse_ptb(line) {
                Ok(t) => Some((i + 1, t)),
                Err(e) => {
                    log::warn!("{} line {}: {e}", a.trees.display(), i + 1);
                    None
                }
            }
        })
        .collect();
    let multi = patterns.len() > 1;
    for (src, pattern) in &patterns {
        if multi {
            println!("# {src}");
        }
        for (line_no, tree) in &parsed {
            let hits = match_nodes(pattern, tree);
            if !hits.is_empty() {
                let labels: Vec<&str> = hits.iter().map(|&n| tree.label(n)).collect();
                println!("{line_no}\t{}", labels.join(" "));
            }
        }
    }
    Ok(())
}
