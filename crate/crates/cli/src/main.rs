use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lubkit::algebraic::algebraicity_report;
use lubkit::axioms::{check_axiom, AxiomId};
use lubkit::category::{general_exp, pointwise_exp, product};
use lubkit::closure::{cl, lub_completion, in_embed};
use lubkit::format::{parse_file, parse_set_in, serialize, serialize_rpo, Parsed};
use lubkit::gallery::{run_gallery, GalleryId};
use lubkit::harness::{run_harness, HarnessKind, HarnessParams};
use lubkit::realize::{canonical_realization, realizes};
use lubkit::rules::{
    class_completion, derive_in_class, flatten_certificate, is_valid_rule, show_natural, validity_oracle, LubRule,
    RuleClassId,
};
use lubkit::{ElemSet, Lubpo};

/// Like `println!`/`print!`, but a closed stdout (a pipe into `head`) is not an error.
macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

/// Exit code when the checked property fails.
const FAILS: u8 = 1;
/// Exit code for bad usage or input.
const BAD_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "lubkit", version, about = "Partial orders with designated natural lubs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one axiom, or every axiom of the file's mode.
    Check {
        file: PathBuf,
        /// Axiom id (S2 … S10) or `all`.
        #[arg(long, default_value = "all")]
        axiom: String,
        /// Index-poset bound for S4_2 and S10.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Closure of a set.
    Cl {
        file: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Completion under a rule class, printed in file form.
    Complete {
        file: PathBuf,
        #[arg(long, value_parser = parse_class)]
        class: RuleClassId,
    },
    /// Validity of a lub-rule over the file's order.
    Valid {
        file: PathBuf,
        /// Pattern sets separated by `;`.
        #[arg(long, default_value = "")]
        pattern: String,
        #[arg(long)]
        result: String,
        /// Also search posets up to this size for a counterexample map.
        #[arg(long, default_value_t = 0)]
        search: usize,
    },
    /// Certificate that a set is natural in a class completion.
    Derive {
        file: PathBuf,
        #[arg(long, value_parser = parse_class)]
        class: RuleClassId,
        /// `{x,y,…}->z`
        #[arg(long)]
        target: String,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        emit_proof: Option<PathBuf>,
    },
    /// Closed sets of the lub-completion and the principal-ideal embedding.
    Lattice { file: PathBuf },
    /// Product or function space of two files.
    Construct {
        #[arg(long, value_enum)]
        op: Op,
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Finite elements, algebraicity and finite determination of a directed-mode file.
    Algebraic { file: PathBuf },
    /// Canonical realization of a directed-mode file, printed as an rpo file.
    Realize { file: PathBuf },
    /// Run one of the worked examples.
    Gallery {
        #[arg(value_parser = |s: &str| s.parse::<GalleryId>())]
        id: GalleryId,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Cross-check sweeps over enumerated and random instances.
    Harness {
        #[arg(long, value_parser = |s: &str| s.parse::<HarnessKind>())]
        kind: HarnessKind,
        #[arg(long)]
        max_size: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Product,
    Pexp,
    Gexp,
}

fn parse_class(s: &str) -> Result<RuleClassId, String> {
    s.parse()
}

/// A failure that maps to an exit code, with the message to print.
struct Exit(u8, String);

impl From<lubkit::Error> for Exit {
    fn from(e: lubkit::Error) -> Self {
        Exit(BAD_INPUT, e.to_string())
    }
}

type Outcome = Result<u8, Exit>;

/// Reads a lubpo from a path, or a shipped fixture written `@name`.
fn load(path: &Path) -> Result<Lubpo, Exit> {
    let s = path.to_string_lossy();
    if let Some(name) = s.strip_prefix('@') {
        return lubkit::fixtures::by_name(name).ok_or_else(|| Exit(BAD_INPUT, format!("no fixture named `{name}`")));
    }
    let text = fs::read_to_string(path).map_err(|e| Exit(BAD_INPUT, format!("{}: {e}", path.display())))?;
    match parse_file(&text).map_err(|e| Exit(BAD_INPUT, format!("{}: {e}", path.display())))? {
        Parsed::Lubpo(d) => Ok(d),
        Parsed::Rpo(_) => Err(Exit(BAD_INPUT, format!("{}: expected a lubpo, found an rpo", path.display()))),
    }
}

fn set_arg(d: &Lubpo, text: &str) -> Result<ElemSet, Exit> {
    Ok(parse_set_in(1, text, d.labels())?)
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Exit> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Exit(BAD_INPUT, format!("{}: {e}", p.display()))),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Check { file, axiom, bound } => {
            let d = load(&file)?;
            let ids: Vec<AxiomId> = if axiom.eq_ignore_ascii_case("all") {
                AxiomId::ALL.into_iter().filter(|a| a.accepts(d.mode())).collect()
            } else {
                vec![axiom.parse().map_err(|e| Exit(BAD_INPUT, e))?]
            };
            let mut code = 0;
            for a in ids {
                let rep = check_axiom(&d, a, bound)?;
                let scope = if rep.exact { "" } else { " (bounded)" };
                match &rep.witness {
                    None => outln!("{a}: holds{scope}"),
                    Some(w) => {
                        code = FAILS;
                        outln!("{a}: fails{scope}: {}", w.describe(&d));
                    }
                }
            }
            Ok(code)
        }
        Command::Cl { file, set } => {
            let d = load(&file)?;
            let a = set_arg(&d, &set)?;
            outln!("{}", d.show(cl(&d, a)));
            Ok(0)
        }
        Command::Complete { file, class } => {
            let d = load(&file)?;
            out!("{}", serialize(&class_completion(&d, class)?));
            Ok(0)
        }
        Command::Valid {
            file,
            pattern,
            result,
            search,
        } => {
            let d = load(&file)?;
            let pattern = pattern
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| set_arg(&d, s))
                .collect::<Result<Vec<_>, _>>()?;
            let result = set_arg(&d, &result)?;
            let rule = LubRule::new(d.poset().clone(), pattern, result)?;
            let verdict = validity_oracle(&rule, search)?;
            if verdict.valid != is_valid_rule(&rule) {
                return Err(Exit(FAILS, "closure and lattice paths disagree".into()));
            }
            if verdict.valid {
                outln!("valid");
                return Ok(0);
            }
            outln!("invalid");
            if let Some((lat, f)) = &verdict.lattice_witness {
                let images: Vec<String> = (0..d.size())
                    .map(|x| format!("{} -> {}", d.poset().label(x), lat.label(f.apply(x))))
                    .collect();
                outln!("closed-set embedding: {}", images.join(", "));
            }
            if let Some((e, f)) = &verdict.small_witness {
                outln!("small counterexample into {} elements, order {:?}, map {:?}", e.size(), e.strict_pairs(), f.table);
            }
            Ok(FAILS)
        }
        Command::Derive {
            file,
            class,
            target,
            emit_proof,
        } => {
            let d = load(&file)?;
            let (set_text, top_text) = target
                .rsplit_once("->")
                .ok_or_else(|| Exit(BAD_INPUT, "target must look like {x,y}->z".into()))?;
            let set = set_arg(&d, set_text)?;
            let top = d
                .poset()
                .index_of(top_text.trim())
                .ok_or_else(|| Exit(BAD_INPUT, format!("unknown element `{}`", top_text.trim())))?;
            if d.lub(set) != Some(top) {
                return Err(Exit(BAD_INPUT, format!("{} is not the lub of {}", top_text.trim(), d.show(set))));
            }
            let Some(proof) = derive_in_class(&d, class, (set, top))? else {
                outln!("{} is not derivable in the {class} class", show_natural(d.poset(), set));
                return Ok(FAILS);
            };
            let text = proof.to_json(|s| show_natural(d.poset(), *s)) + "\n";
            write_or_print(emit_proof.as_deref(), &text)?;
            let flat = flatten_certificate(&d, &proof)?;
            eprintln!(
                "derived {} in {} steps; flattened rule valid: {}",
                show_natural(d.poset(), set),
                proof.steps().len(),
                is_valid_rule(&flat)
            );
            Ok(0)
        }
        Command::Lattice { file } => {
            let d = load(&file)?;
            let lat = lub_completion(&d)?;
            outln!("{} closed sets", lat.len());
            for s in lat.family() {
                outln!("  {}", d.show(*s));
            }
            for x in 0..d.size() {
                outln!("in({}) = {}", d.poset().label(x), d.show(in_embed(&d, x)));
            }
            Ok(0)
        }
        Command::Construct { op, a, b, output } => {
            let (d, e) = (load(&a)?, load(&b)?);
            let built = match op {
                Op::Product => product(&d, &e)?.lubpo,
                Op::Pexp => pointwise_exp(&d, &e)?.to_lubpo().clone(),
                Op::Gexp => general_exp(&d, &e)?.to_lubpo().clone(),
            };
            write_or_print(output.as_deref(), &serialize(&built))?;
            Ok(0)
        }
        Command::Algebraic { file } => {
            let d = load(&file)?;
            let rep = algebraicity_report(&d)?;
            out!("{}", json(&rep));
            Ok(if rep.cdlubpo_implied && !rep.cdlubpo { FAILS } else { 0 })
        }
        Command::Realize { file } => {
            let d = load(&file)?;
            let (r, phi) = canonical_realization(&d)?;
            out!("{}", serialize_rpo(r.rpo()));
            if realizes(r.rpo(), &d, &phi) {
                Ok(0)
            } else {
                eprintln!("not realized: the file is not a cdlubpo");
                Ok(FAILS)
            }
        }
        Command::Gallery { id, bound } => {
            let rep = run_gallery(id, bound)?;
            out!("{}", json(&rep));
            Ok(if rep.passed() { 0 } else { FAILS })
        }
        Command::Harness {
            kind,
            max_size,
            samples,
            seed,
        } => {
            let rep = run_harness(
                kind,
                HarnessParams {
                    max_size,
                    samples,
                    seed,
                },
            )?;
            out!("{}", json(&rep));
            Ok(if rep.clean() { 0 } else { FAILS })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
