//! `freeknot`: invariants, moves and cobordism movies of free knots.
//!
//! Exit status: 0 on success, 1 when a bounded search gives up or a movie
//! fails verification, 2 on malformed input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use freeknot::catalog::{catalog, lookup};
use freeknot::cobordism::{main_theorem_check, CobordismError, TheoremCheck};
use freeknot::group::{conj_class_l, format_word};
use freeknot::invariant::f_star_trace;
use freeknot::moves::simplify_with_trace;
use freeknot::{
    are_equivalent_bounded, eval_word, f_map, f_project_movie, invariant_l, orbit, parse_word, random_valid_movie,
    search_slice_movie, verify, Equivalence, FreeLink, Movie, RandomBounds, SearchOutcome,
};

#[derive(Parser)]
#[command(name = "freeknot", version, about = "Parity invariants and cobordism movies of free knots")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a Gauss code and print its canonical form.
    Parse { code: String },
    /// Parity table, word and the invariant L of a knot.
    Invariant { code: String },
    /// Delete all odd chords once, or until none remain.
    Fmap {
        code: String,
        #[arg(long)]
        iterate: bool,
    },
    /// Greedily remove first- and second-move sites.
    Simplify { code: String },
    /// Breadth-first move orbit within chord and node bounds.
    Orbit {
        code: String,
        #[arg(long, default_value_t = 6)]
        max_chords: usize,
        #[arg(long, default_value_t = 10_000)]
        max_nodes: usize,
    },
    /// Bounded move-equivalence of two links.
    Equiv {
        left: String,
        right: String,
        #[arg(long, default_value_t = 6)]
        max_chords: usize,
        #[arg(long, default_value_t = 10_000)]
        max_nodes: usize,
    },
    /// Evaluate a word in a, b, b' on the Cayley strip.
    Word { word: String },
    /// Cobordism movies.
    #[command(subcommand)]
    Movie(MovieCommand),
    /// List the named example knots.
    Catalog,
}

#[derive(Subcommand)]
enum MovieCommand {
    /// Check a movie file against the parity axioms and the surface bookkeeping.
    Verify {
        file: PathBuf,
        #[arg(long)]
        strict: bool,
    },
    /// Look for a genus-0 movie from a knot to the empty link.
    Search {
        code: String,
        #[arg(long, default_value_t = 6)]
        max_events: usize,
        #[arg(long, default_value_t = 6)]
        max_chords: usize,
    },
    /// Delete the odd double lines of a verified movie.
    Fproject { file: PathBuf },
    /// Generate a valid movie from --seed.
    Random {
        #[arg(long, default_value_t = 12)]
        max_events: usize,
        #[arg(long, default_value_t = 6)]
        max_chords: usize,
        #[arg(long, default_value_t = 3)]
        max_components: usize,
        /// Allow handles; the default is a disc.
        #[arg(long)]
        any_genus: bool,
    },
}

/// A Gauss code, or the name of a catalog entry.
fn link(code: &str) -> Result<FreeLink> {
    if let Some(e) = lookup(code) {
        return Ok(e.link());
    }
    code.parse().with_context(|| format!("invalid Gauss code {code:?}"))
}

fn knot(code: &str) -> Result<FreeLink> {
    let l = link(code)?;
    if !l.is_knot() {
        bail!("expected a knot, got {} components", l.num_components());
    }
    Ok(l)
}

fn read_movie(file: &PathBuf) -> Result<Movie> {
    let text = fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    Movie::from_json(&text).with_context(|| format!("invalid movie in {}", file.display()))
}

struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, value: &impl Serialize, text: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
        } else {
            print!("{}", text());
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let out = Out { json: cli.json };
    match cli.command {
        Command::Parse { code } => {
            let l = link(&code)?;
            let value = json!({
                "code": l.to_string(),
                "canonical": l.canonical_form(),
                "components": l.num_components(),
                "chords": l.num_chords(),
            });
            out.emit(&value, || {
                format!(
                    "code: {l}\ncanonical: {}\ncomponents: {}\nchords: {}\n",
                    l.canonical_form(),
                    l.num_components(),
                    l.num_chords()
                )
            });
        }
        Command::Invariant { code } => {
            let r = invariant_l(&knot(&code)?)?;
            out.emit(&r, || {
                let mut s = format!("word: {}\npoint: ({}, {})\nL: {}\nparity:\n", format_word(&r.word), r.x, r.y, r.l);
                for (c, l) in r.parity.iter() {
                    s += &format!("  {c} {l}\n");
                }
                s
            });
        }
        Command::Fmap { code, iterate } => {
            let l = knot(&code)?;
            let trace: Vec<String> = if iterate {
                f_star_trace(&l)?.iter().map(ToString::to_string).collect()
            } else {
                vec![l.to_string(), f_map(&l)?.to_string()]
            };
            let result = trace.last().expect("nonempty").clone();
            out.emit(&json!({ "result": result, "trace": trace }), || format!("{}\n", trace.join("\n")));
        }
        Command::Simplify { code } => {
            let (result, moves) = simplify_with_trace(&link(&code)?);
            let value = json!({ "result": result.canonical_form(), "moves": moves });
            out.emit(&value, || format!("{}\n", result.canonical_form()));
        }
        Command::Orbit { code, max_chords, max_nodes } => {
            let o = orbit(&link(&code)?, max_chords, max_nodes);
            let codes = o.codes();
            out.emit(&json!({ "size": codes.len(), "truncated": o.truncated, "members": codes }), || {
                format!("size: {}\ntruncated: {}\n{}\n", codes.len(), o.truncated, codes.join("\n"))
            });
        }
        Command::Equiv { left, right, max_chords, max_nodes } => {
            let r = are_equivalent_bounded(&link(&left)?, &link(&right)?, max_chords, max_nodes);
            out.emit(&r, || match &r {
                Equivalence::Equivalent => "Equivalent\n".into(),
                Equivalence::Distinct { invariant, left, right } => {
                    format!("Distinct ({invariant}: {left} vs {right})\n")
                }
                Equivalence::Unknown => "Unknown\n".into(),
            });
            return Ok(u8::from(r == Equivalence::Unknown));
        }
        Command::Word { word } => {
            let letters = parse_word(&word)?;
            let p = eval_word(&letters);
            let l = conj_class_l(p).ok();
            let value = json!({ "word": letters, "x": p.x, "y": p.y, "L": l });
            out.emit(&value, || match l {
                Some(l) => format!("point: ({}, {})\nL: {l}\n", p.x, p.y),
                None => format!("point: ({}, {})\nL: undefined (first coordinate is not 0)\n", p.x, p.y),
            });
        }
        Command::Movie(m) => return run_movie(m, cli.seed, &out),
        Command::Catalog => {
            let entries = catalog();
            for e in &entries {
                e.validate().map_err(anyhow::Error::msg)?;
            }
            out.emit(&entries, || {
                entries
                    .iter()
                    .map(|e| {
                        let l = e.expected_l.map_or("-".to_string(), |l| l.to_string());
                        format!("{}\tL={l}\t{}\t{}\n", e.name, e.code, e.note)
                    })
                    .collect()
            });
        }
    }
    Ok(0)
}

fn run_movie(cmd: MovieCommand, seed: u64, out: &Out) -> Result<u8> {
    match cmd {
        MovieCommand::Verify { file, strict } => {
            let movie = read_movie(&file)?;
            let report = verify(&movie, strict);
            let theorem = if report.ok { main_theorem_check(&movie).ok() } else { None };
            let mut value = serde_json::to_value(&report)?;
            value["theorem"] = serde_json::to_value(&theorem)?;
            out.emit(&value, || {
                let mut s = format!("ok: {}\n", report.ok);
                match report.genus {
                    Some(g) => s += &format!("genus: {g}\n"),
                    None => s += "genus: undefined\n",
                }
                s += &format!(
                    "euler characteristic: {}\nreeb graph is a tree: {}\n",
                    report.euler_characteristic, report.reeb_is_tree
                );
                for (i, level) in report.levels.iter().enumerate() {
                    let code = if level.code.is_empty() { "(empty)" } else { &level.code };
                    s += &format!("level {i}: {code}\n");
                }
                for v in &report.violations {
                    s += &format!("violation: {}\n", serde_json::to_string(v).expect("serializable"));
                }
                match theorem {
                    Some(TheoremCheck::Consistent { l }) => s += &format!("theorem: consistent (L = {l})\n"),
                    Some(TheoremCheck::CounterexampleFlag { l }) => {
                        s += &format!("theorem: COUNTEREXAMPLE (L = {l})\n")
                    }
                    None if report.ok => s += "theorem: not applicable (genus is not 0)\n",
                    None => {}
                }
                s
            });
            Ok(u8::from(!report.ok))
        }
        MovieCommand::Search { code, max_events, max_chords } => {
            let k = knot(&code)?;
            let outcome = search_slice_movie(&k, max_events, max_chords);
            out.emit(&outcome, || match &outcome {
                SearchOutcome::Found { movie } => format!("found {} events\n{}\n", movie.events.len(), movie.to_json()),
                SearchOutcome::NotFoundWithinBounds => {
                    let l = invariant_l(&k).map(|r| r.l).unwrap_or(0);
                    if l == 0 {
                        "not found within bounds\n".into()
                    } else {
                        format!("not found within bounds; L = {l} obstructs sliceness\n")
                    }
                }
            });
            Ok(u8::from(outcome == SearchOutcome::NotFoundWithinBounds))
        }
        MovieCommand::Fproject { file } => {
            let movie = read_movie(&file)?;
            match f_project_movie(&movie) {
                Ok(p) => {
                    println!("{}", p.to_json());
                    Ok(0)
                }
                Err(e @ CobordismError::PreconditionNotMet(_)) => {
                    eprintln!("freeknot: {e}");
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        MovieCommand::Random { max_events, max_chords, max_components, any_genus } => {
            let bounds = RandomBounds { max_events, max_chords, max_components, genus_zero: !any_genus };
            println!("{}", random_valid_movie(seed, &bounds).to_json());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("freeknot: {e:#}");
            ExitCode::from(2)
        }
    }
}
