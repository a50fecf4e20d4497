use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use peakcheck_core::axis_check::Notion;
use peakcheck_core::dispatch::{cross_validate, dispatch_with, Algorithm, Limits, Outcome};
use peakcheck_core::gadgets::{random_profile, random_sp_profile, GeneratorConfig, RNG_ALGORITHM};
use peakcheck_core::oracle::{majority_relation, weak_condorcet_winners, DEFAULT_BOUND};
use peakcheck_core::preflib::{parse_axis, parse_preflib, write_preflib, Election};
use peakcheck_core::report::{certificate_text, verdict_json};
use peakcheck_core::{OrderClass, Verdict};
use rayon::prelude::*;
use serde_json::{json, Value};

/// Single-peaked consistency for incomplete preference profiles.
#[derive(Parser)]
#[command(name = "peakcheck", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether each profile is single-peaked on some axis.
    ///
    /// Exit status: 0 when every profile is consistent, 1 when some
    /// profile is not, 2 on any error.
    Recognize(RecognizeArgs),
    /// Write a random profile in PrefLib format.
    Generate(GenerateArgs),
    /// Print the pairwise majority relation and the weak Condorcet winners.
    Majority {
        file: PathBuf,
    },
}

#[derive(clap::Args)]
struct RecognizeArgs {
    /// PrefLib files (soc, soi, toc, toi, or pairs).
    files: Vec<PathBuf>,
    /// psp, plateaued, black, or necessary.
    #[arg(long, default_value = "psp")]
    notion: Notion,
    /// auto, c1p, guided, unguided, twosat, or oracle.
    #[arg(long, default_value = "auto")]
    algorithm: Algorithm,
    /// Only check this axis: candidate names or numbers in order.
    #[arg(long)]
    axis: Option<PathBuf>,
    /// One JSON object per file instead of text.
    #[arg(long)]
    json: bool,
    /// Run every applicable engine and fail when they disagree.
    #[arg(long)]
    cross_validate: bool,
    /// Also process every PrefLib file below this directory.
    #[arg(long, value_name = "DIR")]
    seed_corpus: Option<PathBuf>,
    /// Leave wall-clock times out of the output.
    #[arg(long)]
    no_timing: bool,
    /// Largest candidate count sent to the brute-force oracle.
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    oracle_bound: usize,
}

#[derive(clap::Args)]
struct GenerateArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Notion the profile is consistent for. Without it the profile is
    /// unconstrained.
    #[arg(long)]
    notion: Option<Notion>,
    /// total, top, weak, local_weak, or partial.
    #[arg(long, default_value = "weak", value_parser = parse_class)]
    class: OrderClass,
    /// Probability of each information-deleting step.
    #[arg(long, default_value_t = 0.3)]
    incompleteness: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_class(s: &str) -> Result<OrderClass, String> {
    OrderClass::ALL
        .into_iter()
        .find(|c| c.to_string().replace(' ', "_") == s.replace(' ', "_"))
        .ok_or_else(|| format!("unknown order class `{s}`"))
}

const EXTENSIONS: [&str; 5] = ["soc", "soi", "toc", "toi", "pairs"];

fn corpus_files(dir: &Path, out: &mut Vec<PathBuf>) -> anyhow::Result<()> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    entries.sort();
    for path in entries {
        if path.is_dir() {
            corpus_files(&path, out)?;
        } else if path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| EXTENSIONS.contains(&e))
        {
            out.push(path);
        }
    }
    Ok(())
}

enum FileResult {
    Decided { consistent: bool, line: String },
    Failed(String),
}

fn recognize_one(path: &Path, args: &RecognizeArgs, axis_text: Option<&str>) -> anyhow::Result<(bool, String)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let election = parse_preflib(&text)?;
    let axis = axis_text.map(|t| parse_axis(t, &election)).transpose()?;
    let limits = Limits {
        oracle_bound: args.oracle_bound,
    };
    let start = Instant::now();
    let (primary, others) = if args.cross_validate && axis.is_none() {
        let outs = cross_validate(&election.profile, args.notion, limits)?;
        let primary = dispatch_with(&election.profile, args.notion, args.algorithm, None, limits)?;
        (primary, outs)
    } else {
        (dispatch_with(&election.profile, args.notion, args.algorithm, axis.as_ref(), limits)?, Vec::new())
    };
    if let Some(o) = others.iter().find(|o| o.verdict.is_consistent() != primary.verdict.is_consistent()) {
        bail!("{} and {} disagree", primary.engine, o.engine);
    }
    let elapsed = (!args.no_timing).then(|| start.elapsed());
    let consistent = primary.verdict.is_consistent();
    let line = if args.json {
        let mut v = verdict_json(&election, args.notion, primary.engine, &primary.verdict, elapsed);
        v["file"] = json!(path.display().to_string());
        if args.cross_validate {
            v["engines"] = others
                .iter()
                .map(|o| json!({ "engine": o.engine.name(), "consistent": o.verdict.is_consistent() }))
                .collect::<Value>();
        }
        v.to_string()
    } else {
        text_line(path, &election, &primary, &others, elapsed)
    };
    Ok((consistent, line))
}

fn text_line(
    path: &Path,
    election: &Election,
    primary: &Outcome,
    others: &[Outcome],
    elapsed: Option<std::time::Duration>,
) -> String {
    let mut s = format!("{}: ", path.display());
    match &primary.verdict {
        Verdict::Consistent(axis) => {
            let names: Vec<&str> = axis.order().iter().map(|&c| election.name(c)).collect();
            s += &format!("consistent ({}) axis {}", primary.engine, names.join(" "));
        }
        Verdict::NotConsistent(cert) => {
            s += &format!("not consistent ({}) {}", primary.engine, certificate_text(election, cert));
        }
    }
    if !others.is_empty() {
        let names: Vec<&str> = others.iter().map(|o| o.engine.name()).collect();
        s += &format!(" [agreed: {}]", names.join(", "));
    }
    if let Some(t) = elapsed {
        s += &format!(" in {:.3} ms", t.as_secs_f64() * 1e3);
    }
    s
}

fn recognize(mut args: RecognizeArgs) -> anyhow::Result<ExitCode> {
    if let Some(dir) = args.seed_corpus.take() {
        corpus_files(&dir, &mut args.files)?;
    }
    if args.files.is_empty() {
        bail!("no input files");
    }
    let axis_text = args
        .axis
        .as_ref()
        .map(|p| fs::read_to_string(p).with_context(|| format!("reading {}", p.display())))
        .transpose()?;
    let results: Vec<FileResult> = args
        .files
        .par_iter()
        .map(|path| match recognize_one(path, &args, axis_text.as_deref()) {
            Ok((consistent, line)) => FileResult::Decided { consistent, line },
            Err(e) => FileResult::Failed(format!("{}: error: {e:#}", path.display())),
        })
        .collect();
    let mut code = 0u8;
    for (path, r) in args.files.iter().zip(results) {
        match r {
            FileResult::Decided { consistent, line } => {
                println!("{line}");
                if !consistent {
                    code = code.max(1);
                }
            }
            FileResult::Failed(msg) => {
                if args.json {
                    println!("{}", json!({ "file": path.display().to_string(), "error": msg }));
                }
                eprintln!("{msg}");
                code = 2;
            }
        }
    }
    Ok(ExitCode::from(code))
}

fn generate(args: GenerateArgs) -> anyhow::Result<()> {
    let mut metadata = vec![
        ("GENERATOR".to_string(), format!("peakcheck {}", env!("CARGO_PKG_VERSION"))),
        ("RNG".to_string(), RNG_ALGORITHM.to_string()),
        ("SEED".to_string(), args.seed.to_string()),
    ];
    let profile = match args.notion {
        Some(notion) => {
            let cfg = GeneratorConfig {
                m: args.m,
                n: args.n,
                notion,
                class: args.class,
                incompleteness: args.incompleteness,
                seed: args.seed,
            };
            let (axis, profile) = random_sp_profile(&cfg)?;
            metadata.push(("CONSISTENT FOR".to_string(), notion.name().to_string()));
            metadata.push(("HIDDEN AXIS".to_string(), axis.order().iter().map(|c| (c.index() + 1).to_string()).collect::<Vec<_>>().join(",")));
            profile
        }
        None => random_profile(args.m, args.n, args.class, args.seed)?,
    };
    let mut election = Election::new(profile);
    election.metadata = metadata;
    let text = write_preflib(&election);
    match args.out {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn majority(file: &Path) -> anyhow::Result<()> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let election = parse_preflib(&text)?;
    let relation = majority_relation(&election.profile)?;
    for (a, b) in relation.pairs() {
        println!("{} > {}", election.name(a), election.name(b));
    }
    let winners: Vec<&str> = weak_condorcet_winners(&election.profile)?
        .into_iter()
        .map(|c| election.name(c))
        .collect();
    println!("weak Condorcet winners: {{{}}}", winners.join(", "));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Recognize(args) => recognize(args),
        Command::Generate(args) => generate(args).map(|()| ExitCode::SUCCESS),
        Command::Majority { file } => majority(&file).map(|()| ExitCode::SUCCESS),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
