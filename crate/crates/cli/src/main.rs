//! `wordlogic`: parse, evaluate, compile, decide and explore languages built
//! from existential sentences with uniform numerical predicates.
//!
//! Exit codes: 0 for pass/true, 1 for fail/false, 2 for usage or file errors.

mod session;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use session::Session;
use wordlogic::colouring::Colouring;
use wordlogic::equations::{check_all, search_colouring};
use wordlogic::formula::parse_sentence;
use wordlogic::recogniser::{compile, MembershipOracle};
use wordlogic::rewrite::{verify_chain, witness_chain};

#[derive(Parser)]
#[command(name = "wordlogic", version, about, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a sentence and echo its canonical form.
    Parse {
        #[arg(long)]
        sentence: String,
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Evaluate a sentence on a word (exit 0 = true, 1 = false).
    Eval {
        #[arg(long)]
        sentence: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Compile a sentence to a recogniser file (stdout or --out).
    Compile {
        #[arg(long)]
        sentence: String,
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide membership of a word in a recogniser's language.
    Member {
        #[arg(long)]
        rec: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Decide language equivalence of two recognisers.
    Equiv {
        #[arg(long)]
        rec1: PathBuf,
        #[arg(long)]
        rec2: PathBuf,
    },
    /// Check the three equation families for an oracle and a colouring.
    CheckEq {
        /// Recogniser file or builtin: all | empty | factor:<word> | parity:<letter>.
        #[arg(long)]
        oracle: String,
        #[arg(long)]
        col: String,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Search threshold/residue colourings for one passing all families.
    SearchCol {
        #[arg(long)]
        oracle: String,
        #[arg(long, default_value_t = 3)]
        max_threshold: usize,
        #[arg(long, default_value_t = 3)]
        max_modulus: usize,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Produce a rewrite chain between two profile-equivalent words.
    Witness {
        #[arg(long)]
        col: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Defaults to the letters occurring in the two words.
        #[arg(long)]
        alphabet: Option<String>,
        /// Write a full chain file instead of printing the steps.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay and verify a chain file.
    Verify {
        #[arg(long)]
        chain: PathBuf,
        /// Optional oracle whose membership must be constant along the chain.
        #[arg(long)]
        oracle: Option<String>,
    },
    /// Run the content criterion and the bounded pseudofiniteness check.
    PfCheck {
        #[arg(long)]
        gw: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_modulus: usize,
        #[arg(long, default_value_t = 4)]
        max_threshold: usize,
    },
    /// Decide whether a finite word can match a generalized word on a colouring.
    PfWitness {
        #[arg(long)]
        gw: PathBuf,
        #[arg(long)]
        col: String,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn prepared_session(registry: Option<&PathBuf>, alphabet: Option<&String>) -> Result<Session> {
    let mut session = Session::new();
    if let Some(path) = registry {
        session.load_registry(path)?;
    }
    if let Some(text) = alphabet {
        session.declare_alphabet_str(text)?;
    }
    Ok(session)
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Parse { sentence, registry, alphabet } => {
            let session = prepared_session(registry.as_ref(), alphabet.as_ref())?;
            let phi = parse_sentence(&sentence, session.alphabet()?, &session.registry)
                .with_context(|| format!("sentence `{sentence}`"))?;
            println!("{phi}");
            Ok(Outcome::Pass)
        }
        Command::Eval { sentence, word, registry, alphabet } => {
            let session = prepared_session(registry.as_ref(), alphabet.as_ref())?;
            let phi = parse_sentence(&sentence, session.alphabet()?, &session.registry)
                .with_context(|| format!("sentence `{sentence}`"))?;
            let w = session.parse_word(&word)?;
            let value = wordlogic::formula::eval_sentence(&phi, &w, &session.registry)?;
            println!("{value}");
            Ok(if value { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Compile { sentence, registry, alphabet, out } => {
            let session = prepared_session(registry.as_ref(), alphabet.as_ref())?;
            let phi = parse_sentence(&sentence, session.alphabet()?, &session.registry)
                .with_context(|| format!("sentence `{sentence}`"))?;
            let r = compile(&phi, session.alphabet()?, &session.registry)?;
            let text = r.to_file_string();
            match out {
                Some(path) => fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(Outcome::Pass)
        }
        Command::Member { rec, word } => {
            let mut session = Session::new();
            let r = session.load_recogniser(&rec)?.clone();
            let w = session.parse_word(&word)?;
            let value = r.accepts(&w);
            println!("{value}");
            Ok(if value { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Equiv { rec1, rec2 } => {
            let mut session = Session::new();
            let r1 = session.load_recogniser(&rec1)?.clone();
            let r2 = session.load_recogniser(&rec2)?.clone();
            match r1.separating_word(&r2) {
                None => {
                    println!("true");
                    Ok(Outcome::Pass)
                }
                Some(w) => {
                    println!("false");
                    println!("separating word: {w}");
                    Ok(Outcome::Fail)
                }
            }
        }
        Command::CheckEq { oracle, col, max_len, alphabet } => {
            let mut session = prepared_session(None, alphabet.as_ref())?;
            let oracle = session.resolve_oracle(&oracle)?;
            let q = session.parse_colouring(&col)?;
            let report = check_all(oracle.as_ref(), session.alphabet()?, &q, max_len);
            println!("{report}");
            Ok(if report.passed() { Outcome::Pass } else { Outcome::Fail })
        }
        Command::SearchCol { oracle, max_threshold, max_modulus, max_len, alphabet } => {
            let mut session = prepared_session(None, alphabet.as_ref())?;
            let oracle = session.resolve_oracle(&oracle)?;
            let candidates = Colouring::candidates(max_threshold, max_modulus);
            match search_colouring(oracle.as_ref(), session.alphabet()?, &candidates, max_len) {
                Some((q, _)) => {
                    println!("{q}");
                    Ok(Outcome::Pass)
                }
                None => {
                    println!("NONE");
                    Ok(Outcome::Fail)
                }
            }
        }
        Command::Witness { col, from, to, alphabet, out } => {
            let mut session = Session::new();
            match alphabet {
                Some(text) => session.declare_alphabet_str(&text)?,
                None => {
                    let mut letters: Vec<char> = from.chars().chain(to.chars()).collect();
                    letters.sort_unstable();
                    letters.dedup();
                    if letters.is_empty() {
                        letters.push('a');
                    }
                    session.declare_alphabet(
                        wordlogic::words::Alphabet::new(letters)
                            .expect("deduplicated letters form an alphabet"),
                    )?;
                }
            }
            let q = session.parse_colouring(&col)?;
            let w1 = session.parse_word(&from)?;
            let w2 = session.parse_word(&to)?;
            match witness_chain(&q, &w1, &w2) {
                Err(mismatch) => {
                    println!("{mismatch}");
                    Ok(Outcome::Fail)
                }
                Ok(chain) => {
                    match out {
                        Some(path) => {
                            let text = session.chain_to_string(&chain)?;
                            fs::write(&path, text)
                                .with_context(|| format!("writing {}", path.display()))?;
                        }
                        None => {
                            for step in &chain.steps {
                                println!("{step}");
                            }
                        }
                    }
                    Ok(Outcome::Pass)
                }
            }
        }
        Command::Verify { chain, oracle } => {
            let mut session = Session::new();
            let text = fs::read_to_string(&chain)
                .with_context(|| format!("reading chain file {}", chain.display()))?;
            let chain = session.parse_chain(&text)?;
            let oracle: Option<Box<dyn MembershipOracle>> = match oracle {
                Some(spec) => Some(session.resolve_oracle(&spec)?),
                None => None,
            };
            match verify_chain(&chain, oracle.as_deref()) {
                Ok(()) => {
                    println!("ok");
                    Ok(Outcome::Pass)
                }
                Err(violation) => {
                    println!("{violation}");
                    Ok(Outcome::Fail)
                }
            }
        }
        Command::PfCheck { gw, max_modulus, max_threshold } => {
            let mut session = Session::new();
            let g = session.load_generalized(&gw)?.clone();
            let content_ok = g.content_criterion();
            println!("content-criterion {}", if content_ok { "PASS" } else { "FAIL" });
            let bounded = g.bounded_pseudofinite_check(max_modulus, max_threshold);
            match &bounded {
                Ok(()) => println!("bounded-check PASS"),
                Err(cx) => println!("bounded-check FAIL col={} cell={}", cx.colouring, cx.cell),
            }
            Ok(if content_ok && bounded.is_ok() { Outcome::Pass } else { Outcome::Fail })
        }
        Command::PfWitness { gw, col } => {
            let mut session = Session::new();
            let g = session.load_generalized(&gw)?.clone();
            let q = session.parse_colouring(&col)?;
            match g.word_witness(&q) {
                Ok(w) => {
                    println!("{w}");
                    Ok(Outcome::Pass)
                }
                Err(infeasible) => {
                    println!("INFEASIBLE cell={}", infeasible.cell);
                    Ok(Outcome::Fail)
                }
            }
        }
    }
}
