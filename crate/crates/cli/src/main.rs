//! `wh`: minimization, orbit equivalence, translators, distance and peak
//! reduction from the command line.
//!
//! Exit status: 0 on success (including a negative equivalence answer),
//! 1 on an internal failure, 2 on malformed input, 3 when a search limit is
//! hit and 4 when a precondition does not hold.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use whitehead::io::{
    AutomorphismDoc, CertificateDoc, ReductionDoc, TransformDoc, VertexSetDoc, WordSetDoc,
};
use whitehead::{
    build_gersten_graph, descend, distance, is_translator, krstic_translator, measure, orbit_equivalent,
    peak_reduce, Automorphism, DistanceLimits, Error, ReductionResult, SearchLimits, VertexSet, WordSet,
};

#[derive(Parser, Debug)]
#[command(name = "wh", version, about = "Whitehead's algorithms for free groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Rank of the free group.
    #[arg(short = 'r', long = "rank", value_parser = clap::value_parser!(u32).range(1..))]
    rank: u32,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Accepted for reproducible invocations; every command is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// State budget for searches.
    #[arg(long = "max-states", value_parser = clap::value_parser!(u64).range(1..))]
    max_states: Option<u64>,
    /// Largest translator size examined by the distance search.
    #[arg(long = "max-size", value_parser = clap::value_parser!(u64).range(1..))]
    max_size: Option<u64>,
}

#[derive(Args, Debug, Clone)]
struct Pair {
    /// Basis file for X.
    #[arg(short = 'x')]
    x: PathBuf,
    /// Basis file for Y.
    #[arg(short = 'y')]
    y: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Descend to a local minimum of total length.
    Minimize {
        #[command(flatten)]
        common: Common,
        words: PathBuf,
    },
    /// Decide whether two word lists lie in one automorphism orbit.
    Equiv {
        #[command(flatten)]
        common: Common,
        first: PathBuf,
        second: PathBuf,
    },
    /// Krstić's translator for a pair of bases.
    Translator {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
    },
    /// Distance between two bases with a witnessing translator.
    Distance {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
    },
    /// One peak-reduction step between two local minima.
    PeakReduce {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
        words: PathBuf,
    },
    /// DOT rendering of the Gersten graph on a vertex set.
    GerstenDot {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
        /// Vertex set file; defaults to Krstić's translator.
        #[arg(long)]
        vertices: Option<PathBuf>,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidLetter { .. }
            | Error::MalformedWord(_)
            | Error::RankMismatch { .. }
            | Error::UnsupportedRank(_)
            | Error::NotABasis(_) => 2,
            Error::LimitExceeded(_) => 3,
            Error::KindMismatch(_)
            | Error::NotATranslator
            | Error::EdgeAbsent
            | Error::NotLocalMinimum
            | Error::PreconditionViolated(_) => 4,
            Error::TheoremViolation(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn malformed(path: &Path, detail: impl std::fmt::Display) -> Failure {
    Failure { code: 2, message: format!("{}: {detail}", path.display()) }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| malformed(path, e))?;
    serde_json::from_str(&text).map_err(|e| malformed(path, format!("line {} column {}: {e}", e.line(), e.column())))
}

fn check_rank(path: &Path, found: usize, rank: usize) -> Result<(), Failure> {
    if found != rank {
        return Err(malformed(path, format!("rank {found} does not match --rank {rank}")));
    }
    Ok(())
}

fn load_words(path: &Path, rank: usize) -> Result<WordSet, Failure> {
    let doc: WordSetDoc = read_json(path)?;
    check_rank(path, doc.rank, rank)?;
    doc.to_word_set().map_err(|e| malformed(path, e))
}

fn load_basis(path: &Path, rank: usize) -> Result<Automorphism, Failure> {
    let doc: AutomorphismDoc = read_json(path)?;
    check_rank(path, doc.rank, rank)?;
    doc.to_automorphism().map_err(|e| malformed(path, e))
}

fn load_vertices(path: &Path, rank: usize) -> Result<VertexSet, Failure> {
    let doc: VertexSetDoc = read_json(path)?;
    doc.to_vertex_set(rank).map_err(|e| malformed(path, e))
}

fn search_limits(c: &Common) -> SearchLimits {
    let mut lim = SearchLimits::default();
    if let Some(m) = c.max_states {
        lim.max_states = m as usize;
    }
    lim
}

fn distance_limits(c: &Common) -> DistanceLimits {
    let mut lim = DistanceLimits::default();
    if let Some(m) = c.max_states {
        lim.max_states = m as usize;
    }
    lim.cap = c.max_size.map(|s| s as usize);
    lim
}

#[derive(Serialize)]
struct MinimizeReport {
    h_initial: usize,
    h_min: usize,
    per_letter: Vec<usize>,
    basis: AutomorphismDoc,
    steps: Vec<TransformDoc>,
    minimized: WordSetDoc,
}

#[derive(Serialize)]
struct EquivReport {
    equivalent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertificateDoc>,
}

#[derive(Serialize)]
struct TranslatorReport {
    vertices: Vec<String>,
    is_translator: bool,
}

#[derive(Serialize)]
struct DistanceReportDoc {
    d: usize,
    kappa: usize,
    witness: Vec<String>,
    exact: bool,
}

enum Output {
    Json(serde_json::Value),
    Text(String),
}

fn json<T: Serialize>(value: &T) -> Output {
    Output::Json(serde_json::to_value(value).expect("reports serialize"))
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Minimize { common, words } => {
            let rank = common.rank as usize;
            let s = load_words(&words, rank)?;
            let id = Automorphism::identity(rank);
            let (basis, steps) = descend(&s, &id)?;
            let rep = measure(&s, &basis)?;
            let report = MinimizeReport {
                h_initial: s.total_length(),
                h_min: rep.total,
                per_letter: rep.per_letter,
                basis: AutomorphismDoc::from_automorphism(&basis),
                steps: steps.iter().map(TransformDoc::from_transform).collect(),
                minimized: WordSetDoc::from_word_set(&s.coordinates(&basis)),
            };
            Ok(if common.json {
                json(&report)
            } else {
                Output::Text(format!(
                    "h: {} -> {}\nbasis: {:?}\nminimized: {:?}",
                    report.h_initial,
                    report.h_min,
                    basis,
                    s.coordinates(&basis)
                ))
            })
        }
        Command::Equiv { common, first, second } => {
            let rank = common.rank as usize;
            let s1 = load_words(&first, rank)?;
            let s2 = load_words(&second, rank)?;
            let cert = orbit_equivalent(&s1, &s2, &search_limits(&common))?;
            let report = EquivReport {
                equivalent: cert.is_some(),
                certificate: cert.as_ref().map(CertificateDoc::from_certificate),
            };
            Ok(if common.json {
                json(&report)
            } else {
                Output::Text(match &cert {
                    Some(c) => format!("equivalent: true\nautomorphism: {:?}", c.composed),
                    None => "equivalent: false".to_string(),
                })
            })
        }
        Command::Translator { common, pair } => {
            let rank = common.rank as usize;
            let (x, y) = (load_basis(&pair.x, rank)?, load_basis(&pair.y, rank)?);
            let v = krstic_translator(&x, &y);
            let report = TranslatorReport {
                vertices: VertexSetDoc::from_vertex_set(&v).vertices,
                is_translator: is_translator(&x, &y, &v),
            };
            Ok(if common.json {
                json(&report)
            } else {
                Output::Text(format!("vertices: {v:?}\nis_translator: {}", report.is_translator))
            })
        }
        Command::Distance { common, pair } => {
            let rank = common.rank as usize;
            let (x, y) = (load_basis(&pair.x, rank)?, load_basis(&pair.y, rank)?);
            let r = distance(&x, &y, &distance_limits(&common))?;
            let report = DistanceReportDoc {
                d: r.d,
                kappa: r.kappa,
                witness: VertexSetDoc::from_vertex_set(&r.witness).vertices,
                exact: r.exact,
            };
            Ok(if common.json {
                json(&report)
            } else {
                Output::Text(format!("d: {}\nkappa: {}\nwitness: {:?}\nexact: {}", r.d, r.kappa, r.witness, r.exact))
            })
        }
        Command::PeakReduce { common, pair, words } => {
            let rank = common.rank as usize;
            let (x, y) = (load_basis(&pair.x, rank)?, load_basis(&pair.y, rank)?);
            let s = load_words(&words, rank)?;
            let result = peak_reduce(&x, &y, &s, &distance_limits(&common))?;
            Ok(if common.json {
                json(&ReductionDoc::from_result(&result))
            } else {
                Output::Text(match &result {
                    ReductionResult::Equal(pi) => format!("equal up to {pi:?}"),
                    ReductionResult::Step(st) => format!(
                        "case {} step with multiplier {}\nY': {:?}\nV': {:?}",
                        st.case, st.y_dag, st.y_prime, st.v_prime
                    ),
                })
            })
        }
        Command::GerstenDot { common, pair, vertices } => {
            let rank = common.rank as usize;
            let (x, y) = (load_basis(&pair.x, rank)?, load_basis(&pair.y, rank)?);
            let v = match vertices {
                Some(p) => load_vertices(&p, rank)?,
                None => krstic_translator(&x, &y),
            };
            Ok(Output::Text(build_gersten_graph(&x, &y, &v).to_dot().trim_end().to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Output::Json(v)) => {
            println!("{}", serde_json::to_string(&v).expect("values serialize"));
            ExitCode::SUCCESS
        }
        Ok(Output::Text(t)) => {
            println!("{t}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
