use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use noether_forge::literal::Document;
use noether_forge::report::{self, Input, Status};
use noether_forge::{Error, Result};

#[derive(Parser)]
#[command(
    name = "noether-forge",
    version,
    about = "Value semigroups, canonical ideals and linear series on singular rational curves"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Noether,
    Lemma,
    Quadrics,
    GonalityBounds,
    Equivalences,
}

#[derive(Subcommand)]
enum Command {
    /// Print the invariants of a curve or semigroup document.
    Analyze { file: PathBuf },
    /// Run one of the verification drivers on a document or the corpus.
    #[command(group(ArgGroup::new("source").required(true).args(["file", "corpus"])))]
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Level for the Max Noether check.
        #[arg(long, default_value_t = 2)]
        level: usize,
        /// Degree for the quadrics check.
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Run on a corpus, as `genus<=N`.
        #[arg(long)]
        corpus: Option<String>,
        file: Option<PathBuf>,
    },
    /// Search for pencils, Clifford index witnesses or Koszul dimensions.
    #[command(group(ArgGroup::new("what").required(true).args(["gonality", "clifford", "koszul"])))]
    Search {
        #[arg(long)]
        gonality: bool,
        #[arg(long)]
        clifford: bool,
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        koszul: Option<Vec<usize>>,
        #[arg(long, default_value_t = 4096)]
        budget: usize,
        /// JSON list of sheaf generators, or a list of such lists.
        #[arg(long)]
        candidate_sheaf: Option<PathBuf>,
        file: PathBuf,
    },
    /// Emit every numerical semigroup up to a genus, one document per line.
    Corpus {
        #[arg(long)]
        genus_max: u64,
        #[arg(long, default_value_t = 1)]
        branches: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Document> {
    Document::parse(&read(path)?)
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum Candidates {
    One(Vec<String>),
    Many(Vec<Vec<String>>),
}

fn add_candidates(doc: &mut Document, path: &Path) -> Result<()> {
    let text = read(path)?;
    let c: Candidates = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let Document::Curve(curve) = doc else {
        return Err(Error::InvalidInput(
            "candidate sheaves need a curve document".into(),
        ));
    };
    match c {
        Candidates::One(g) => curve.sheaves.push(g),
        Candidates::Many(gs) => curve.sheaves.extend(gs),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Status> {
    let report = match cli.command {
        Command::Analyze { file } => {
            let a = report::analyze(&load(&file)?)?;
            match cli.format {
                Format::Json => println!("{}", a.to_json()),
                Format::Text => print!("{}", a.to_text()),
            }
            return Ok(Status::Pass);
        }
        Command::Corpus {
            genus_max,
            branches,
        } => {
            if branches != 1 {
                return Err(Error::UnsupportedBranchCount(branches));
            }
            for line in report::corpus_documents(genus_max)? {
                println!("{line}");
            }
            return Ok(Status::Pass);
        }
        Command::Verify {
            theorem,
            level,
            r,
            corpus,
            file,
        } => {
            let input = match (corpus, file) {
                (Some(c), _) => Input::corpus_spec(&c)?,
                (None, Some(f)) => Input::Document(load(&f)?),
                (None, None) => unreachable!("clap requires a source"),
            };
            match theorem {
                Theorem::Noether => report::verify_noether(&input, level)?,
                Theorem::Lemma => report::verify_lemma(&input)?,
                Theorem::Quadrics => report::verify_quadrics(&input, r)?,
                Theorem::GonalityBounds => report::verify_gonality_bounds(&input)?,
                Theorem::Equivalences => report::verify_equivalences(&input)?,
            }
        }
        Command::Search {
            gonality,
            clifford,
            koszul,
            budget,
            candidate_sheaf,
            file,
        } => {
            let mut doc = load(&file)?;
            if let Some(path) = candidate_sheaf {
                add_candidates(&mut doc, &path)?;
            }
            if gonality {
                report::search_gonality(&doc, budget)?
            } else if clifford {
                report::search_clifford(&doc, budget)?
            } else {
                let pq = koszul.expect("clap requires one search");
                report::search_koszul(&doc, pq[0], pq[1])?
            }
        }
    };
    match cli.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    Ok(report.status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("NOETHER_FORGE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match run(cli) {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
