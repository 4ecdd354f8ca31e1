//! Command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::characterize::{
    characterize_uniform_with, characterize_with, fits, tower_table, Characterization, Limits, MAX_TOWER_N,
};
use crate::error::{Error, Result};
use crate::formula::{parse_formula, Formula, Grammar, PropSignature, UniformSignature};
use crate::kripke::{modelcheck, read_model, write_model, ModelJson, PointedModel};
use crate::normalform::{to_normal_form_with, DEFAULT_MAX_DISJUNCTS};
use crate::oracle::{
    coproduct_fixtures, fixture_checks, spoiler_full_language, verify_duality, verify_preservation, verify_unique,
    DualityBounds, PreservationBounds, SpoilerCase, UniqueBounds, VerificationReport,
};
use crate::simulation::{bisimulation, n_bisimilar, weak_simulation};

// Writes into the output buffer; formatting into a `String` cannot fail.
macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {{
        let _ = writeln!($out, $($arg)*);
    }};
}

macro_rules! outp {
    ($out:expr, $($arg:tt)*) => {{
        let _ = write!($out, $($arg)*);
    }};
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_GUARD: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_SOFTWARE: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(name = "modchar", version, about = "Characterise positive modal formulas by finite sets of examples")]
pub struct Cli {
    /// Worker threads for the verifiers (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PropsArg {
    /// Comma-separated proposition letters, e.g. `p,q`.
    #[arg(long, value_name = "LIST")]
    pub props: String,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Abort once a normal form would exceed this many disjuncts.
    #[arg(long, default_value_t = DEFAULT_MAX_DISJUNCTS)]
    pub max_disjuncts: usize,
    /// Abort once any subformula would need more examples than this.
    #[arg(long, default_value_t = Limits::default().max_examples)]
    pub max_examples: usize,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits { max_disjuncts: self.max_disjuncts, max_examples: self.max_examples }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a formula, print it in negation normal form with its modal depth, size and fragment.
    Parse {
        formula: String,
        #[command(flatten)]
        props: PropsArg,
    },
    /// Print the normal form of a formula over box, diamond, and, or: one disjunct per line.
    Nf {
        formula: String,
        #[command(flatten)]
        props: PropsArg,
        #[arg(long, default_value_t = DEFAULT_MAX_DISJUNCTS)]
        max_disjuncts: usize,
    },
    /// Evaluate a formula at the point of a model given as JSON.
    Modelcheck { formula: String, model: PathBuf },
    /// Height of a pointed model: longest path from the point, or `inf` on a reachable cycle.
    Height { model: PathBuf },
    /// Depth-n tree unravelling of a pointed model, written as JSON.
    Unravel {
        model: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Decide bisimilarity (or n-bisimilarity with --depth) of two pointed models.
    Bisim {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Decide whether the left model is weakly simulated into the right one; prints the largest witness relation.
    Wsim { left: PathBuf, right: PathBuf },
    /// Build positive and negative examples uniquely characterising a formula over box, diamond, and, or.
    Characterize {
        formula: String,
        #[command(flatten)]
        props: PropsArg,
        /// Output directory for formula.txt, summary.txt, pos/ and neg/.
        #[arg(long)]
        out: PathBuf,
        /// Also write a Graphviz file next to every example.
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Examples for a uniform formula: letters in --props occur positively, letters in --negative only negated.
    CharacterizeUniform {
        formula: String,
        #[command(flatten)]
        props: PropsArg,
        #[arg(long, value_name = "LIST")]
        negative: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Check that a formula holds on every model in DIR/pos and fails on every model in DIR/neg.
    Fits {
        formula: String,
        #[arg(long)]
        dir: PathBuf,
        /// Signature to parse against; defaults to the examples' own.
        #[arg(long, value_name = "LIST")]
        props: Option<String>,
    },
    /// Bounded verifiers for the example construction.
    #[command(subcommand)]
    Verify(Verify),
    /// Given examples a full-language formula fits, build a different formula that fits them too.
    Spoiler {
        formula: String,
        #[command(flatten)]
        props: PropsArg,
        /// Directory with pos/ and neg/ model files.
        #[arg(long)]
        dir: PathBuf,
        /// Write the separating model here.
        #[arg(long)]
        witness_out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Count the positive examples of nested boxes over p against the tower function tower(n, 2).
    Tower {
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        /// Permit n = 4, which builds 65536 examples.
        #[arg(long)]
        allow_large: bool,
    },
    /// Concrete models showing that weak simulation has no coproducts.
    #[command(subcommand)]
    Fixtures(Fixtures),
}

#[derive(Debug, Args)]
pub struct CharacterizeTarget {
    formula: String,
    #[command(flatten)]
    props: PropsArg,
    /// Treat the formula as uniform, with these letters occurring only negated.
    #[arg(long, value_name = "LIST")]
    negative: Option<String>,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Every enumerated candidate fitting the examples is equivalent to the formula.
    Unique {
        #[command(flatten)]
        target: CharacterizeTarget,
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
        #[arg(long, default_value_t = 7)]
        max_size: usize,
        #[arg(long)]
        json: bool,
    },
    /// Every model lies above a positive example or below a negative one, exclusively.
    Duality {
        #[command(flatten)]
        target: CharacterizeTarget,
        #[arg(long, default_value_t = 3)]
        exhaustive_states: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Truth of box/diamond/and/or formulas survives weak simulation, on random triples.
    Preservation {
        #[command(flatten)]
        props: PropsArg,
        #[arg(long, default_value_t = 1000)]
        triples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum Fixtures {
    /// Check the model-checking and weak-simulation facts on the four fixture models.
    Coproduct {
        /// Write A.json, B.json, C.json and C_prime.json here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(jobs) = cli.jobs {
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    let mut out = String::new();
    let result = execute(cli.command, &mut out);
    // A closed pipe downstream is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::GuardExceeded(_) => EXIT_GUARD,
        Error::Io(_) => EXIT_IO,
        Error::Internal(_) => EXIT_SOFTWARE,
        _ => EXIT_DATA,
    }
}

fn signature(props: &PropsArg) -> Result<PropSignature> {
    PropSignature::parse_list(&props.props)
}

fn load(path: &Path) -> Result<PointedModel> {
    read_model(&fs::read_to_string(path)?)
}

/// Models in `dir`, by file name, skipping anything that is not `.json`.
fn load_dir(dir: &Path) -> Result<Vec<PointedModel>> {
    if !dir.exists() {
        return Ok(Vec::new());
    }
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?.map(|e| e.map(|e| e.path())).collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|x| x == "json"));
    paths.sort();
    paths.iter().map(|p| load(p)).collect()
}

fn load_examples(dir: &Path) -> Result<(Vec<PointedModel>, Vec<PointedModel>)> {
    Ok((load_dir(&dir.join("pos"))?, load_dir(&dir.join("neg"))?))
}

/// The signature shared by all `models`, or `None` if there are none.
fn common_signature(models: &[PointedModel]) -> Result<Option<PropSignature>> {
    let Some(first) = models.first() else { return Ok(None) };
    if let Some(other) = models.iter().find(|m| m.signature() != first.signature()) {
        return Err(Error::SignatureMismatch(format!("{} and {}", first.signature(), other.signature())));
    }
    Ok(Some(first.signature().clone()))
}

fn write_examples(c: &Characterization, out: &Path, dot: bool) -> Result<()> {
    for (name, models) in [("pos", &c.positives), ("neg", &c.negatives)] {
        let dir = out.join(name);
        fs::create_dir_all(&dir)?;
        for (i, m) in models.iter().enumerate() {
            fs::write(dir.join(format!("{i:03}.json")), write_model(m) + "\n")?;
            if dot {
                fs::write(dir.join(format!("{i:03}.dot")), m.to_dot())?;
            }
        }
    }
    fs::write(out.join("formula.txt"), format!("{}\n", c.formula))?;
    fs::write(out.join("summary.txt"), summary(c))?;
    Ok(())
}

fn summary(c: &Characterization) -> String {
    format!(
        "formula: {}\nsignature: {}\npositives: {}\nnegatives: {}\n",
        c.formula,
        c.signature,
        c.positives.len(),
        c.negatives.len()
    )
}

fn characterize_target(t: &CharacterizeTarget) -> Result<(Formula, Characterization)> {
    match &t.negative {
        None => {
            let sig = signature(&t.props)?;
            let phi = parse_formula(&t.formula, &sig)?;
            let c = characterize_with(&phi, &sig, t.limits.limits())?;
            Ok((phi, c))
        }
        Some(neg) => {
            let usig = uniform_signature(&t.props.props, neg)?;
            let phi = parse_formula(&t.formula, &usig.signature())?;
            let c = characterize_uniform_with(&phi, &usig, t.limits.limits())?;
            Ok((phi, c))
        }
    }
}

fn uniform_signature(pos: &str, neg: &str) -> Result<UniformSignature> {
    let split = |s: &str| -> Vec<String> {
        s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(str::to_string).collect()
    };
    UniformSignature::new(split(pos), split(neg))
}

fn print_report(buf: &mut String, report: &VerificationReport, json: bool) -> i32 {
    if json {
        outln!(buf, "{}", report.to_json());
    } else {
        outp!(buf, "{report}");
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

#[derive(Serialize)]
struct SpoilerJson {
    formula: String,
    case: SpoilerCase,
    n: usize,
    witness: ModelJson,
}

fn execute(command: Command, buf: &mut String) -> Result<i32> {
    match command {
        Command::Parse { formula, props } => {
            let phi = parse_formula(&formula, &signature(&props)?)?;
            outln!(buf, "{phi}");
            outln!(buf, "depth: {}", phi.modal_depth());
            outln!(buf, "size: {}", phi.size());
            outln!(buf, "fragment: {}", phi.fragment());
        }
        Command::Nf { formula, props, max_disjuncts } => {
            let phi = parse_formula(&formula, &signature(&props)?)?;
            outln!(buf, "{}", to_normal_form_with(&phi, max_disjuncts)?);
        }
        Command::Modelcheck { formula, model } => {
            let m = load(&model)?;
            let phi = parse_formula(&formula, m.signature())?;
            outln!(buf, "{}", modelcheck(&phi, &m)?);
        }
        Command::Height { model } => outln!(buf, "{}", load(&model)?.height()),
        Command::Unravel { model, depth } => outln!(buf, "{}", write_model(&load(&model)?.tree_unravel(depth))),
        Command::Bisim { left, right, depth } => {
            let (m, n) = (load(&left)?, load(&right)?);
            match depth {
                Some(d) => outln!(buf, "{}", n_bisimilar(&m, &n, d)?),
                None => match bisimulation(&m, &n)? {
                    Some(z) => outln!(buf, "true\n{}", serde_json::to_string_pretty(&z.to_json())?),
                    None => outln!(buf, "false"),
                },
            }
        }
        Command::Wsim { left, right } => {
            let (m, n) = (load(&left)?, load(&right)?);
            match weak_simulation(&m, &n)? {
                Some(z) => outln!(buf, "true\n{}", serde_json::to_string_pretty(&z.to_json())?),
                None => outln!(buf, "false"),
            }
        }
        Command::Characterize { formula, props, out, dot, limits } => {
            let sig = signature(&props)?;
            let phi = parse_formula(&formula, &sig)?;
            let c = characterize_with(&phi, &sig, limits.limits())?;
            write_examples(&c, &out, dot)?;
            outp!(buf, "{}", summary(&c));
        }
        Command::CharacterizeUniform { formula, props, negative, out, dot, limits } => {
            let usig = uniform_signature(&props.props, &negative)?;
            let phi = parse_formula(&formula, &usig.signature())?;
            let c = characterize_uniform_with(&phi, &usig, limits.limits())?;
            write_examples(&c, &out, dot)?;
            outp!(buf, "{}", summary(&c));
        }
        Command::Fits { formula, dir, props } => {
            let (pos, neg) = load_examples(&dir)?;
            let all: Vec<PointedModel> = pos.iter().chain(&neg).cloned().collect();
            let sig = match (props, common_signature(&all)?) {
                (Some(list), _) => PropSignature::parse_list(&list)?,
                (None, Some(sig)) => sig,
                (None, None) => PropSignature::empty(),
            };
            let phi = parse_formula(&formula, &sig)?;
            return Ok(match fits(&phi, &pos, &neg)? {
                None => {
                    outln!(buf, "fits: {} positive, {} negative", pos.len(), neg.len());
                    EXIT_OK
                }
                Some(m) => {
                    outln!(buf, "misfit: {:?} example {}", m.polarity, m.index);
                    EXIT_FAIL
                }
            });
        }
        Command::Verify(v) => return verify(v, buf),
        Command::Spoiler { formula, props, dir, witness_out, json } => {
            let sig = signature(&props)?;
            let phi = parse_formula(&formula, &sig)?;
            let (pos, neg) = load_examples(&dir)?;
            let s = spoiler_full_language(&pos, &neg, &phi, &sig)?;
            if let Some(path) = witness_out {
                fs::write(path, write_model(&s.witness) + "\n")?;
            }
            if json {
                let j =
                    SpoilerJson { formula: s.formula.to_string(), case: s.case, n: s.n, witness: (&s.witness).into() };
                outln!(buf, "{}", serde_json::to_string_pretty(&j)?);
            } else {
                outln!(buf, "{}", s.formula);
                outln!(buf, "case: {:?}, n = {}", s.case, s.n);
            }
        }
        Command::Tower { max_n, allow_large } => {
            if max_n > 3 && !allow_large {
                return Err(Error::GuardExceeded(format!("n = {max_n} needs --allow-large")));
            }
            if max_n > MAX_TOWER_N {
                return Err(Error::GuardExceeded(format!("n is limited to {MAX_TOWER_N}")));
            }
            outln!(buf, "n examples tower");
            let mut code = EXIT_OK;
            for row in tower_table(max_n)? {
                outln!(buf, "{} {} {}", row.n, row.examples, row.tower);
                if row.examples as u64 != row.tower {
                    code = EXIT_FAIL;
                }
            }
            return Ok(code);
        }
        Command::Fixtures(Fixtures::Coproduct { out, json }) => {
            let sig = PropSignature::new(["p", "q", "r"])?;
            let fx = coproduct_fixtures(&sig)?;
            if let Some(dir) = out {
                fs::create_dir_all(&dir)?;
                for (name, m) in [("A", &fx.a), ("B", &fx.b), ("C", &fx.c), ("C_prime", &fx.c_prime)] {
                    fs::write(dir.join(format!("{name}.json")), write_model(m) + "\n")?;
                }
            }
            let checks = fixture_checks(&fx)?;
            if json {
                outln!(buf, "{}", serde_json::to_string_pretty(&checks)?);
            } else {
                for c in &checks {
                    outln!(buf, "[{}] {}", if c.holds { "ok" } else { "FAILED" }, c.description);
                }
            }
            return Ok(if checks.iter().all(|c| c.holds) { EXIT_OK } else { EXIT_FAIL });
        }
    }
    Ok(EXIT_OK)
}

fn verify(v: Verify, buf: &mut String) -> Result<i32> {
    match v {
        Verify::Unique { target, max_depth, max_size, json } => {
            let (phi, c) = characterize_target(&target)?;
            let grammar = match &target.negative {
                None => Grammar::positive(&c.signature),
                Some(neg) => Grammar::uniform(&uniform_signature(&target.props.props, neg)?),
            };
            let report = verify_unique(&phi, &c, &UniqueBounds::new(grammar, max_depth, max_size))?;
            Ok(print_report(buf, &report, json))
        }
        Verify::Duality { target, exhaustive_states, samples, seed, json } => {
            let (_, c) = characterize_target(&target)?;
            let bounds = DualityBounds { exhaustive_states, samples, seed, ..DualityBounds::default() };
            Ok(print_report(buf, &verify_duality(&c, &bounds)?, json))
        }
        Verify::Preservation { props, triples, seed, json } => {
            let bounds = PreservationBounds { triples, seed, ..PreservationBounds::default() };
            Ok(print_report(buf, &verify_preservation(&signature(&props)?, &bounds)?, json))
        }
    }
}
