mod tsv;

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hierbrack::conllu::{read_conllu, write_conllu, Sentence, Token};
use hierbrack::encoder::{encode_with, EncodeOptions};
use hierbrack::metrics::{
    empirical_coverage, encoding_stats, score, theoretical_coverage, Score, Setup,
};
use hierbrack::pseudoproj::{deprojectivize, projectivize};
use hierbrack::testkit::{add_random_deprels, random_tree_with, rng};
use hierbrack::{decode_robust, DepGraph, Scheme};
use rand::Rng;
use rayon::prelude::*;

use tsv::LabeledSentence;

/// Dependency trees to bracket labels and back.
#[derive(Parser)]
#[command(name = "hierbrack", version)]
struct Cli {
    /// Worker threads; defaults to one per core. Output order never depends
    /// on it.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// CoNLL-U to label rows.
    Encode(EncodeArgs),
    /// Label rows to CoNLL-U.
    Decode(DecodeArgs),
    /// Label inventory and index statistics of a treebank.
    Stats(StatsArgs),
    /// Attachment scores of predicted trees.
    Eval(EvalArgs),
    /// Share of a treebank recovered after encoding and decoding, in percent.
    Coverage(CoverageArgs),
    /// Random trees as CoNLL-U.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct SchemeArgs {
    #[arg(long, default_value = "optimal-np", value_parser = parse_scheme)]
    scheme: Scheme,
    /// Lift non-projective arcs before encoding (and restore them after
    /// decoding where that applies).
    #[arg(long)]
    pseudoproj: bool,
}

impl SchemeArgs {
    fn setup(&self) -> Setup {
        Setup {
            scheme: self.scheme,
            pseudoproj: self.pseudoproj,
        }
    }
}

fn parse_scheme(text: &str) -> std::result::Result<Scheme, String> {
    text.parse()
}

#[derive(Args)]
struct EncodeArgs {
    /// CoNLL-U input; `-` reads stdin.
    #[arg(default_value = "-")]
    input: PathBuf,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Reject sentences needing a larger bracket index.
    #[arg(long, value_name = "K")]
    max_index: Option<u32>,
    /// Write the root's label as a row with ID 0.
    #[arg(long)]
    emit_root_label: bool,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(default_value = "-")]
    input: PathBuf,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
    /// Undo lift annotations after decoding.
    #[arg(long)]
    deproj: bool,
    /// Write repair notes here, one per line.
    #[arg(long, value_name = "FILE")]
    diagnostics: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(default_value = "-")]
    input: PathBuf,
    #[command(flatten)]
    scheme: SchemeArgs,
}

#[derive(Args)]
struct EvalArgs {
    gold: PathBuf,
    pred: PathBuf,
}

#[derive(Args)]
struct CoverageArgs {
    eval: PathBuf,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Only labels and relations seen in this treebank are available.
    #[arg(long, value_name = "FILE")]
    train: Option<PathBuf>,
    /// Shorthand for `--train` set to the evaluated file.
    #[arg(long, conflicts_with = "train")]
    empirical: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    min_len: usize,
    #[arg(long, default_value_t = 12)]
    max_len: usize,
    #[arg(long)]
    projective: bool,
    #[arg(long, env = "HIERBRACK_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(short, long, default_value = "-")]
    output: PathBuf,
}

fn open_input(path: &Path) -> Result<Box<dyn BufRead>> {
    if path == Path::new("-") {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(Box::new(BufReader::new(file)))
}

fn open_output(path: &Path) -> Result<Box<dyn Write>> {
    if path == Path::new("-") {
        return Ok(Box::new(BufWriter::new(io::stdout())));
    }
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(Box::new(BufWriter::new(file)))
}

fn read_treebank(path: &Path) -> Result<Vec<Sentence>> {
    read_conllu(open_input(path)?).with_context(|| format!("reading {}", path.display()))
}

fn graphs(sentences: Vec<Sentence>) -> Vec<DepGraph> {
    sentences.into_iter().map(Sentence::into_graph).collect()
}

/// Returns whether every sentence was encoded.
fn encode_cmd(args: &EncodeArgs) -> Result<bool> {
    let sentences = read_treebank(&args.input)?;
    let options = EncodeOptions {
        max_index: args.max_index,
    };
    let results: Vec<_> = sentences
        .par_iter()
        .map(|sentence| {
            let graph = if args.scheme.pseudoproj {
                projectivize(sentence.graph())
            } else {
                sentence.graph().clone()
            };
            let mut labels = encode_with(&graph, args.scheme.scheme, &options)?;
            if !args.emit_root_label {
                labels.root = None;
            }
            let forms = sentence.forms().map(str::to_owned).collect();
            Ok(tsv::render(&LabeledSentence { forms, labels }))
        })
        .collect::<Vec<hierbrack::Result<String>>>();
    let mut out = open_output(&args.output)?;
    let mut ok = true;
    for (k, (result, sentence)) in results.into_iter().zip(&sentences).enumerate() {
        match result {
            Ok(rows) => out.write_all(rows.as_bytes())?,
            Err(e) => {
                ok = false;
                let id = sentence
                    .sent_id()
                    .map(|id| format!(" ({id})"))
                    .unwrap_or_default();
                eprintln!("sentence {}{id}: {e}", k + 1);
            }
        }
    }
    out.flush()?;
    Ok(ok)
}

fn decode_cmd(args: &DecodeArgs) -> Result<()> {
    let sentences = tsv::read(open_input(&args.input)?)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let decoded: Vec<(Sentence, Vec<String>)> = sentences
        .par_iter()
        .map(|s| {
            let result = decode_robust(&s.labels, true);
            let mut notes: Vec<String> =
                result.diagnostics.iter().map(ToString::to_string).collect();
            let graph = if args.deproj {
                let restored = deprojectivize(&result.graph);
                notes.extend(
                    restored
                        .diagnostics
                        .into_iter()
                        .map(|d| format!("-\t-\t{d}")),
                );
                restored.graph
            } else {
                result.graph
            };
            let tokens = s.forms.iter().map(Token::with_form).collect();
            (Sentence::new(tokens, graph), notes)
        })
        .collect();
    let mut out = open_output(&args.output)?;
    write_conllu(&mut out, decoded.iter().map(|(s, _)| s))?;
    out.flush()?;
    if let Some(path) = &args.diagnostics {
        let mut side = open_output(path)?;
        for (k, (_, notes)) in decoded.iter().enumerate() {
            for note in notes {
                writeln!(side, "{}\t{note}", k + 1)?;
            }
        }
        side.flush()?;
    }
    Ok(())
}

fn stats_cmd(args: &StatsArgs) -> Result<()> {
    let trees = graphs(read_treebank(&args.input)?);
    let stats = encoding_stats(&trees, args.scheme.setup());
    let [i0, i1, i2, i3] = stats.index_histogram();
    println!("trees={}", stats.trees);
    println!("failures={}", stats.failures);
    println!("labels={}", stats.distinct_labels);
    println!("index0={i0:.2}\tindex1={i1:.2}\tindex2={i2:.2}\tindex3+={i3:.2}");
    println!("rope_thickness_max={}", stats.rope_thickness_max);
    Ok(())
}

fn eval_cmd(args: &EvalArgs) -> Result<()> {
    let gold = graphs(read_treebank(&args.gold)?);
    let pred = graphs(read_treebank(&args.pred)?);
    println!("{}", score(&gold, &pred)?);
    Ok(())
}

fn percent(score: Score) -> String {
    format!(
        "uas={:.2}\tlas={:.2}\tum={:.2}\tlm={:.2}",
        100.0 * score.uas,
        100.0 * score.las,
        100.0 * score.um,
        100.0 * score.lm
    )
}

fn coverage_cmd(args: &CoverageArgs) -> Result<()> {
    let eval = graphs(read_treebank(&args.eval)?);
    let setup = args.scheme.setup();
    let result = match (&args.train, args.empirical) {
        (Some(train), _) => empirical_coverage(&graphs(read_treebank(train)?), &eval, setup),
        (None, true) => empirical_coverage(&eval, &eval, setup),
        (None, false) => theoretical_coverage(&eval, setup),
    };
    println!("{}", percent(result));
    Ok(())
}

fn generate_cmd(args: &GenerateArgs) -> Result<()> {
    anyhow::ensure!(
        1 <= args.min_len && args.min_len <= args.max_len,
        "need 1 <= --min-len <= --max-len"
    );
    let sentences: Vec<Sentence> = (0..args.count)
        .into_par_iter()
        .map(|k| {
            let mut r = rng(args.seed.wrapping_add(k as u64));
            let n = r.gen_range(args.min_len..=args.max_len);
            let mut tree = random_tree_with(&mut r, n, !args.projective);
            add_random_deprels(&mut r, &mut tree);
            let tokens = (1..=n).map(|i| Token::with_form(format!("w{i}"))).collect();
            Sentence::new(tokens, tree)
        })
        .collect();
    let mut out = open_output(&args.output)?;
    write_conllu(&mut out, &sentences)?;
    out.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Encode(args) => encode_cmd(args),
        Command::Decode(args) => decode_cmd(args).map(|()| true),
        Command::Stats(args) => stats_cmd(args).map(|()| true),
        Command::Eval(args) => eval_cmd(args).map(|()| true),
        Command::Coverage(args) => coverage_cmd(args).map(|()| true),
        Command::Generate(args) => generate_cmd(args).map(|()| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build();
    let outcome = match pool {
        Ok(pool) => pool.install(|| run(&cli)),
        Err(e) => Err(e.into()),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
