use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use costfn::computation::{construct, semantic_value, INFINITE_THRESHOLD};
use costfn::costmso::{compile, decide_formula, evaluate, parse_formula, CostFormula, Task, Valuation};
use costfn::format::{parse_monoid, parse_recogniser, write_recogniser};
use costfn::green::analyze_j;
use costfn::projection::{inf_project, parse_letter_map, sup_project};
use costfn::recogniser::{decide_boundedness, decide_divergence, decide_domination, split_word};
use costfn::{validate_axioms, Decision, Error, Recogniser, StabilisationMonoid, Variant};

#[derive(Parser)]
#[command(name = "costfn", version, about = "Decide questions about regular cost functions")]
struct Cli {
    /// Output style: human-readable, or key=value lines.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Check the stabilisation monoid axioms.
    Validate { monoid: PathBuf },
    /// List the J-classes with regularity and stability.
    Jclasses { monoid: PathBuf },
    /// Build an n-computation of small height for a word of elements.
    Construct {
        monoid: PathBuf,
        #[arg(long)]
        word: String,
        /// Threshold, or `inf` for a Ramsey factorisation.
        #[arg(long)]
        n: String,
    },
    /// Evaluate one of the four semantics of a recogniser on a word.
    Compute {
        recogniser: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "p")]
        variant: String,
        /// Height bound; defaults to 3 times the monoid size.
        #[arg(long)]
        p: Option<usize>,
    },
    /// Is f ≼ g?
    Dominates { f: PathBuf, g: PathBuf },
    /// Is f bounded?
    Bounded { f: PathBuf },
    /// Does f tend to infinity with the word length?
    Diverges { f: PathBuf },
    /// Inf- or sup-projection along a letter-to-letter map.
    Project {
        recogniser: PathBuf,
        #[arg(long, conflicts_with = "sup", required_unless_present = "sup")]
        inf: bool,
        #[arg(long)]
        sup: bool,
        /// Letter map such as `a:c,b:c`.
        #[arg(long)]
        map: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile a formula to a recogniser.
    Compile {
        formula: String,
        #[arg(long)]
        alphabet: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a formula by brute force.
    Eval {
        formula: String,
        #[arg(long)]
        word: String,
        /// `X=1,3`: positions of a free variable, counted from 1.
        #[arg(long)]
        assign: Vec<String>,
    },
    /// Decide a question about formulas read from files.
    Decide {
        #[arg(long)]
        task: String,
        files: Vec<PathBuf>,
        #[arg(long)]
        alphabet: String,
    },
}

enum Outcome {
    Done,
    Yes,
    No,
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_monoid(path: &Path) -> Result<StabilisationMonoid, String> {
    parse_monoid(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_recogniser(path: &Path) -> Result<Recogniser, String> {
    let r = parse_recogniser(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    r.monoid
        .ensure_valid()
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(r)
}

fn load_formula(path: &Path) -> Result<CostFormula, String> {
    parse_formula(read(path)?.trim()).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_out(text: &str, output: Option<&Path>) -> Result<(), String> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(d: &Decision, format: Format) -> Outcome {
    let witness = d.witness.as_ref().map(|w| format!(" witness={w}")).unwrap_or_default();
    match (format, d.holds) {
        (Format::Plain, true) => println!("yes"),
        (Format::Plain, false) => println!("no{witness}"),
        (Format::Machine, h) => println!("result={}{witness}", if h { "yes" } else { "no" }),
    }
    if d.holds {
        Outcome::Yes
    } else {
        Outcome::No
    }
}

fn parse_assign(src: &str) -> Result<(String, BTreeSet<usize>), String> {
    let (x, ps) = src
        .split_once('=')
        .ok_or_else(|| format!("expected X=1,3, got `{src}`"))?;
    let mut set = BTreeSet::new();
    for p in ps.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let k: usize = p.parse().map_err(|_| format!("bad position `{p}` for {x}"))?;
        if k == 0 {
            return Err(format!("positions of {x} start at 1"));
        }
        set.insert(k - 1);
    }
    Ok((x.trim().to_string(), set))
}

fn run(cli: Cli) -> Result<Outcome, String> {
    let fmt = cli.format;
    let e = |e: Error| e.to_string();
    match cli.command {
        Command::Validate { monoid } => {
            let m = load_monoid(&monoid)?;
            let report = validate_axioms(&m);
            if report.is_empty() {
                println!("{}", if fmt == Format::Plain { "ok" } else { "valid=yes" });
                return Ok(Outcome::Yes);
            }
            if fmt == Format::Machine {
                println!("valid=no");
            }
            for v in &report {
                let names: Vec<&str> = v.witness.iter().map(|&x| m.name(x)).collect();
                match fmt {
                    Format::Plain => println!("violated: {} at {}", v.axiom, names.join(" ")),
                    Format::Machine => println!("violation={:?} witness={}", v.axiom, names.join(",")),
                }
            }
            Ok(Outcome::No)
        }
        Command::Jclasses { monoid } => {
            let m = load_monoid(&monoid)?;
            m.ensure_valid().map_err(e)?;
            let j = analyze_j(&m);
            for (c, set) in j.classes.iter().enumerate() {
                let stability = match j.class_stable[c] {
                    Some(true) => "stable",
                    Some(false) => "unstable",
                    None => "-",
                };
                let regular = if j.class_regular[c] { "regular" } else { "irregular" };
                match fmt {
                    Format::Plain => println!("{c}: {} {regular} {stability}", set.display(&m)),
                    Format::Machine => {
                        let names: Vec<&str> = set.iter().map(|x| m.name(x)).collect();
                        println!("class={c} elements={} {regular} {stability}", names.join(","))
                    }
                }
            }
            Ok(Outcome::Done)
        }
        Command::Construct { monoid, word, n } => {
            let m = load_monoid(&monoid)?;
            m.ensure_valid().map_err(e)?;
            let n = if n == "inf" {
                INFINITE_THRESHOLD
            } else {
                n.parse().map_err(|_| format!("bad threshold `{n}`"))?
            };
            let w = split_word(&word)
                .iter()
                .map(|s| m.elem(s).ok_or_else(|| format!("unknown element `{s}`")))
                .collect::<Result<Vec<_>, _>>()?;
            let t = construct(&m, &w, n).map_err(e)?;
            match fmt {
                Format::Plain => println!("{}", t.render(&m)),
                Format::Machine => println!("value={} height={} tree={}", m.name(t.value), t.height(), t.render(&m)),
            }
            Ok(Outcome::Done)
        }
        Command::Compute {
            recogniser,
            word,
            variant,
            p,
        } => {
            let r = load_recogniser(&recogniser)?;
            let variant: Variant = variant.parse().map_err(e)?;
            let u = r.parse_word(&word).map_err(e)?;
            let v = semantic_value(&r, &u, variant, p.unwrap_or(3 * r.monoid.size())).map_err(e)?;
            match fmt {
                Format::Plain => println!("{v}"),
                Format::Machine => println!("value={v}"),
            }
            Ok(Outcome::Done)
        }
        Command::Dominates { f, g } => {
            let d = decide_domination(&load_recogniser(&f)?, &load_recogniser(&g)?).map_err(e)?;
            Ok(report(&d, fmt))
        }
        Command::Bounded { f } => Ok(report(&decide_boundedness(&load_recogniser(&f)?), fmt)),
        Command::Diverges { f } => Ok(report(&decide_divergence(&load_recogniser(&f)?).map_err(e)?, fmt)),
        Command::Project {
            recogniser,
            inf,
            sup: _,
            map,
            output,
        } => {
            let r = load_recogniser(&recogniser)?;
            let z = parse_letter_map(&map).map_err(e)?;
            let p = if inf { inf_project(&r, &z) } else { sup_project(&r, &z) }.map_err(e)?;
            write_out(&write_recogniser(&p), output.as_deref())?;
            Ok(Outcome::Done)
        }
        Command::Compile {
            formula,
            alphabet,
            output,
        } => {
            let phi = parse_formula(&formula).map_err(e)?;
            let r = compile(&phi, &split_word(&alphabet)).map_err(e)?;
            write_out(&write_recogniser(&r), output.as_deref())?;
            Ok(Outcome::Done)
        }
        Command::Eval { formula, word, assign } => {
            let phi = parse_formula(&formula).map_err(e)?;
            let valuation: Valuation = assign.iter().map(|a| parse_assign(a)).collect::<Result<_, _>>()?;
            let v = evaluate(&phi, &split_word(&word), &valuation).map_err(e)?;
            match fmt {
                Format::Plain => println!("{v}"),
                Format::Machine => println!("value={v}"),
            }
            Ok(Outcome::Done)
        }
        Command::Decide { task, files, alphabet } => {
            let task: Task = task.parse().map_err(e)?;
            let expected = if task == Task::Dominates { 2 } else { 1 };
            if files.len() != expected {
                return Err(format!("task needs {expected} formula file(s), got {}", files.len()));
            }
            let phi = load_formula(&files[0])?;
            let psi = files.get(1).map(|p| load_formula(p)).transpose()?;
            let d = decide_formula(task, &phi, psi.as_ref(), &split_word(&alphabet)).map_err(e)?;
            Ok(report(&d, fmt))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done | Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
