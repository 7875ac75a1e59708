//! Command-line front end: build machines from word lists, inspect them,
//! and run checks, corrections, analyses, and benchmarks.
//!
//! Exit codes: 0 success (and every query resolved), 1 a query found no
//! candidate or a word was rejected, 2 load or other operational failure.

use std::io::{BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use etrec::bench::{
    perturb, render_mixed_text, render_mixed_tsv, render_report_text, render_report_tsv,
    run_benchmark, run_mixed_benchmark, synthesize_mixed_queries,
};
use etrec::{check, check_fst, parse_word_list, Candidate, CorrectionResult, Fsa, Fst};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "etrec",
    version,
    about = "Error-tolerant recognition over finite-state machines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Build a letter-tree recognizer from a word list and write it out.
    Build {
        /// UTF-8 word list, one word per line.
        wordlist: PathBuf,
        /// Destination for the machine in text format.
        out: PathBuf,
    },
    /// Print size statistics for a machine file.
    Stats {
        machine: PathBuf,
        /// Treat the machine as a transducer.
        #[arg(long)]
        fst: bool,
    },
    /// Test whether each word is in the machine's language.
    Check {
        machine: PathBuf,
        /// Words to test; read from standard input when absent.
        words: Vec<String>,
        /// Treat the machine as a transducer and test its surface language.
        #[arg(long)]
        fst: bool,
    },
    /// Find near matches for queries, raising the threshold from zero.
    Correct {
        machine: PathBuf,
        /// Queries; read from standard input when absent.
        queries: Vec<String>,
        /// Highest threshold to try.
        #[arg(long, default_value_t = 2)]
        max_threshold: usize,
    },
    /// Find near matches over a transducer, with lexical glosses.
    Analyze {
        machine: PathBuf,
        /// Queries; read from standard input when absent.
        queries: Vec<String>,
        /// Highest threshold to try.
        #[arg(long, default_value_t = 2)]
        max_threshold: usize,
    },
    /// Measure correction time and searched fraction over damaged samples.
    Bench {
        machine: PathBuf,
        /// Word list the samples are drawn from.
        wordlist: PathBuf,
        /// Damage distance, and the search threshold.
        #[arg(short, long, default_value_t = 1)]
        threshold: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check every candidate set against a linear scan of the list.
        #[arg(long)]
        audit: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Damage samples to mixed distances and escalate per query.
        #[arg(long)]
        mixed: bool,
        /// Highest threshold the mixed run may escalate to.
        #[arg(long, default_value_t = 3)]
        max_threshold: usize,
    },
    /// Emit damaged copies of sampled words as source, query, distance.
    Perturb {
        wordlist: PathBuf,
        /// Damage distance.
        #[arg(short, long, default_value_t = 1)]
        threshold: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Build { wordlist, out } => cmd_build(&wordlist, &out),
        Command::Stats { machine, fst } => cmd_stats(&machine, fst),
        Command::Check {
            machine,
            words,
            fst,
        } => cmd_check(&machine, words, fst),
        Command::Correct {
            machine,
            queries,
            max_threshold,
        } => {
            let fsa = load_fsa(&machine)?;
            resolve_queries(queries, |query| etrec::correct(&fsa, query, max_threshold))
        }
        Command::Analyze {
            machine,
            queries,
            max_threshold,
        } => {
            let fst = load_fst(&machine)?;
            resolve_queries(queries, |query| etrec::analyze(&fst, query, max_threshold))
        }
        Command::Bench {
            machine,
            wordlist,
            threshold,
            samples,
            seed,
            audit,
            format,
            mixed,
            max_threshold,
        } => {
            let fsa = load_fsa(&machine)?;
            let words = load_words(&wordlist)?;
            let list_id = wordlist
                .file_stem()
                .map_or_else(|| "wordlist".into(), |s| s.to_string_lossy().into_owned());
            if mixed {
                let queries = synthesize_mixed_queries(&words, samples, seed)?;
                let report =
                    run_mixed_benchmark(&fsa, &queries, max_threshold, audit.then_some(&words))?;
                print!(
                    "{}",
                    match format {
                        Format::Text => render_mixed_text(&report),
                        Format::Tsv => render_mixed_tsv(&report),
                    }
                );
            } else {
                let report =
                    run_benchmark(&fsa, &words, &list_id, threshold, samples, seed, audit)?;
                print!(
                    "{}",
                    match format {
                        Format::Text => render_report_text(&report),
                        Format::Tsv => render_report_tsv(&report),
                    }
                );
            }
            Ok(0)
        }
        Command::Perturb {
            wordlist,
            threshold,
            samples,
            seed,
        } => cmd_perturb(&wordlist, threshold, samples, seed),
    }
}

fn load_words(path: &Path) -> anyhow::Result<Vec<String>> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse_word_list(&bytes).with_context(|| path.display().to_string())
}

fn load_fsa(path: &Path) -> anyhow::Result<Fsa> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Fsa::parse(&text).with_context(|| path.display().to_string())
}

fn load_fst(path: &Path) -> anyhow::Result<Fst> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Fst::parse(&text).with_context(|| path.display().to_string())
}

fn print_pairs(pairs: &[(&str, String)]) {
    for (key, value) in pairs {
        println!("{key}\t{value}");
    }
}

fn cmd_build(wordlist: &Path, out: &Path) -> anyhow::Result<u8> {
    let words = load_words(wordlist)?;
    let fsa = Fsa::from_words(&words);
    std::fs::write(out, fsa.to_text()).with_context(|| format!("writing {}", out.display()))?;
    let stats = fsa.stats(Some(&words));
    let mut pairs = vec![
        ("words", stats.word_count.unwrap_or(0).to_string()),
        ("states", stats.state_count.to_string()),
        ("arcs", stats.arc_count.to_string()),
        ("fan-out", format!("{:.3}", stats.fan_out)),
    ];
    if let Some(len) = stats.avg_word_len {
        pairs.push(("avg-word-len", format!("{len:.2}")));
    }
    if let Some(len) = stats.max_word_len {
        pairs.push(("max-word-len", len.to_string()));
    }
    print_pairs(&pairs);
    Ok(0)
}

fn cmd_stats(machine: &Path, fst: bool) -> anyhow::Result<u8> {
    let (states, arcs) = if fst {
        let fst = load_fst(machine)?;
        (fst.state_count(), fst.arc_count())
    } else {
        let fsa = load_fsa(machine)?;
        (fsa.state_count(), fsa.arc_count())
    };
    let fan_out = if states == 0 {
        0.0
    } else {
        arcs as f64 / states as f64
    };
    print_pairs(&[
        ("states", states.to_string()),
        ("arcs", arcs.to_string()),
        ("fan-out", format!("{fan_out:.3}")),
    ]);
    Ok(0)
}

fn cmd_check(machine: &Path, words: Vec<String>, fst: bool) -> anyhow::Result<u8> {
    enum Machine {
        Fsa(Fsa),
        Fst(Fst),
    }
    let machine = if fst {
        Machine::Fst(load_fst(machine)?)
    } else {
        Machine::Fsa(load_fsa(machine)?)
    };
    let mut all_accepted = true;
    for_each_input(words, |word| {
        let accepted = match &machine {
            Machine::Fsa(m) => check(m, word),
            Machine::Fst(m) => check_fst(m, word),
        };
        all_accepted &= accepted;
        println!("{word}\t{}", if accepted { "accept" } else { "reject" });
        Ok(())
    })?;
    Ok(u8::from(!all_accepted))
}

fn cmd_perturb(wordlist: &Path, threshold: usize, samples: usize, seed: u64) -> anyhow::Result<u8> {
    let words = load_words(wordlist)?;
    if samples > words.len() {
        return Err(etrec::Error::NotEnoughWords {
            requested: samples,
            available: words.len(),
        }
        .into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = etrec::bench::alphabet_of(&words);
    for idx in rand::seq::index::sample(&mut rng, words.len(), samples) {
        let word = &words[idx];
        let query = perturb(word, threshold, &alphabet, &mut rng)?;
        println!("{word}\t{query}\t{threshold}");
    }
    Ok(0)
}

/// Run the escalating resolver over every query and print one block per
/// query: the query itself, the thresholds tried, then one candidate per
/// line. Exit 1 when any query comes up empty.
fn resolve_queries(
    queries: Vec<String>,
    mut resolve: impl FnMut(&str) -> CorrectionResult,
) -> anyhow::Result<u8> {
    let mut all_resolved = true;
    for_each_input(queries, |query| {
        let outcome = resolve(query);
        println!("query\t{query}");
        let tried: Vec<String> = outcome
            .attempts
            .iter()
            .map(|a| a.threshold.to_string())
            .collect();
        println!("thresholds\t{}", tried.join(" "));
        for candidate in &outcome.candidates {
            print_candidate(candidate);
        }
        all_resolved &= !outcome.candidates.is_empty();
        Ok(())
    })?;
    Ok(u8::from(!all_resolved))
}

fn print_candidate(candidate: &Candidate) {
    match candidate.gloss_string() {
        Some(gloss) => println!("{}\t{}\t{}", candidate.text, candidate.distance, gloss),
        None => println!("{}\t{}", candidate.text, candidate.distance),
    }
}

/// Feed `inputs` to `act`, or standard input lines when `inputs` is empty.
/// A terminal gets a prompt; piped input does not.
fn for_each_input(
    inputs: Vec<String>,
    mut act: impl FnMut(&str) -> anyhow::Result<()>,
) -> anyhow::Result<()> {
    if !inputs.is_empty() {
        for input in &inputs {
            act(input)?;
        }
        return Ok(());
    }
    let stdin = std::io::stdin();
    let interactive = stdin.is_terminal();
    let mut lines = stdin.lock().lines();
    loop {
        if interactive {
            print!("> ");
            std::io::stdout().flush()?;
        }
        let Some(line) = lines.next() else {
            if interactive {
                println!();
            }
            return Ok(());
        };
        let line = line?;
        let input = line.trim();
        if !input.is_empty() {
            act(input)?;
        }
    }
}
