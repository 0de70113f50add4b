//! The `jp-toric` command-line tool.
//!
//! Exit codes: 0 success, 1 input error, 2 precision exhausted, 3 the orbit
//! data violates the stable-isomorphism hypothesis.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::bratteli::{to_dot, BratteliDiagram};
use crate::error::{Error, Result};
use crate::json::{
    from_json, matrix_doc, to_json, AlgebraRef, AlgebrasInput, DigitsDoc, PeriodicDoc, ReportDoc,
    ReprDoc, ReprInput, StableIsoDoc, TailDoc, ThetaDoc, VectorInput, WindowDoc, SCHEMA,
};
use crate::jp::{
    convergent_matrix, detect_periodicity, jp_expand_sources, reconstruct_theta,
    reconstruct_with_history, DigitSequence, ExpandConfig,
};
use crate::numerics::rational::{log2_approx, parse_rational};
use crate::numerics::{DEFAULT_MAX_PRECISION, DEFAULT_PRECISION};
use crate::repr::{
    build_representation, faithfulness_probe, free_reduce, homomorphism_samples, random_word,
    verify_relators, OrbitData, Presentation, VerificationReport, Word,
};
use crate::toric::{maximal_common_tail, stably_isomorphic, ToricAFAlgebra, DEFAULT_HORIZON};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PRECISION: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionExhausted { .. } => EXIT_PRECISION,
        Error::NotTailEquivalent { .. } => EXIT_HYPOTHESIS,
        _ => EXIT_INPUT,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "jp-toric",
    version,
    about = "Jacobi-Perron expansions, toric AF-algebras and their matrix representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Initial working precision in bits (at least 64).
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here (atomically) instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Input JSON file (`-` for stdin).
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Inline input JSON.
    #[arg(long, conflicts_with = "input")]
    json: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expand a θ or λ vector into digit blocks.
    Expand {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 32)]
        depth: usize,
        /// Largest precision tried when refining algebraic inputs.
        #[arg(long, default_value_t = DEFAULT_MAX_PRECISION)]
        max_precision: u32,
    },
    /// Recover θ from digit blocks.
    Reconstruct {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "1e-12")]
        tolerance: String,
        /// Also write the per-block enclosure widths as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Look for an eventually periodic digit pattern.
    Periodic {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        max_preperiod: Option<usize>,
        #[arg(long)]
        max_period: Option<usize>,
    },
    /// Decide tail equivalence of two or more algebras.
    StableIso {
        /// Digit documents, one per algebra.
        files: Vec<PathBuf>,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Build and verify a representation from orbit data.
    Repr {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
        /// Number of sampled word pairs for the homomorphism check.
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Number of random words probed for faithfulness.
        #[arg(long, default_value_t = 20)]
        probes: usize,
        #[arg(long, default_value_t = 6)]
        max_word: usize,
        /// Required width of the reconstructed common tail.
        #[arg(long, default_value = "1e-6")]
        tolerance: String,
    },
    /// Render the Bratteli diagram as Graphviz DOT.
    Dot {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Emit the incidence matrices as JSON instead.
        #[arg(long)]
        window_json: bool,
    },
}

/// Settings shared by every command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobConfig {
    pub command: String,
    pub input: Option<PathBuf>,
    pub precision: u32,
    pub depth: usize,
    pub horizon: usize,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl JobConfig {
    pub fn validate(&self) -> Result<()> {
        if self.precision < 64 {
            return Err(Error::input("--precision must be at least 64"));
        }
        if self.depth == 0 {
            return Err(Error::input("--depth must be at least 1"));
        }
        Ok(())
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn config(cli: &Cli, name: &str, input: Option<&InputArgs>, depth: usize, horizon: usize) -> JobConfig {
    JobConfig {
        command: name.into(),
        input: input.and_then(|i| i.input.clone()),
        precision: cli.precision,
        depth,
        horizon,
        output: cli.output.clone(),
        seed: cli.seed,
    }
}

fn execute(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::Expand {
            input,
            depth,
            max_precision,
        } => {
            let cfg = config(&cli, "expand", Some(input), *depth, 0);
            cfg.validate()?;
            let max = (*max_precision).max(cfg.precision);
            batch(&cfg, read_input(input)?, |v| cmd_expand(v, &cfg, max))
        }
        Command::Reconstruct {
            input,
            tolerance,
            csv,
        } => {
            let cfg = config(&cli, "reconstruct", Some(input), 1, 0);
            cfg.validate()?;
            let tol = parse_rational(tolerance)?;
            let doc: DigitsDoc = from_json(&read_input(input)?)?;
            let digits = doc.to_sequence()?;
            let r = reconstruct_with_history(&digits, &tol);
            if let Some(path) = csv {
                let widths = match &r {
                    Ok(r) => r.widths.clone(),
                    Err(_) => reconstruct_with_history(&digits, &rational_max())
                        .map(|r| r.widths)
                        .unwrap_or_default(),
                };
                write_atomic(path, &widths_csv(&widths))?;
            }
            let r = r?;
            emit(&cfg, &to_json(&ThetaDoc::new(&r.theta, digits.len()))?)?;
            Ok(EXIT_OK)
        }
        Command::Periodic {
            input,
            max_preperiod,
            max_period,
        } => {
            let cfg = config(&cli, "periodic", Some(input), 1, 0);
            cfg.validate()?;
            batch(&cfg, read_input(input)?, |v| cmd_periodic(v, *max_preperiod, *max_period))
        }
        Command::StableIso {
            files,
            input,
            horizon,
        } => {
            let cfg = config(&cli, "stable-iso", Some(input), 1, *horizon);
            cfg.validate()?;
            let algebras = if files.is_empty() {
                let doc: AlgebrasInput = from_json(&read_input(input)?)?;
                let base = input.input.as_deref().and_then(Path::parent);
                doc.algebras
                    .iter()
                    .map(|a| load_algebra(a, base))
                    .collect::<Result<Vec<_>>>()?
            } else {
                files
                    .iter()
                    .map(|f| from_json::<DigitsDoc>(&read_file(f)?)?.to_algebra())
                    .collect::<Result<Vec<_>>>()?
            };
            emit(&cfg, &to_json(&cmd_stable_iso(&algebras, *horizon)?)?)?;
            Ok(EXIT_OK)
        }
        Command::Repr {
            input,
            horizon,
            samples,
            probes,
            max_word,
            tolerance,
        } => {
            let cfg = config(&cli, "repr", Some(input), 1, *horizon);
            cfg.validate()?;
            let doc: ReprInput = from_json(&read_input(input)?)?;
            let base = input.input.as_deref().and_then(Path::parent);
            let tol = parse_rational(tolerance)?;
            let out = cmd_repr(&doc, base, &cfg, *samples, *probes, *max_word, &tol)?;
            emit(&cfg, &to_json(&out)?)?;
            Ok(EXIT_OK)
        }
        Command::Dot {
            input,
            levels,
            window_json,
        } => {
            let cfg = config(&cli, "dot", Some(input), 1, 0);
            cfg.validate()?;
            let doc: DigitsDoc = from_json(&read_input(input)?)?;
            let diagram = BratteliDiagram::from_digits(&doc.to_sequence()?)?;
            let text = if *window_json {
                let count = levels.saturating_sub(1);
                to_json(&WindowDoc::from(&diagram.window(1, count)?))?
            } else {
                to_dot(&diagram, *levels)?
            };
            emit(&cfg, &text)?;
            Ok(EXIT_OK)
        }
    }
}

fn rational_max() -> num_rational::BigRational {
    num_rational::BigRational::from_integer(num_bigint::BigInt::from(1u8) << 4096)
}

/// Runs `job` on one document, or on each element of a top-level array
/// concurrently. Failed array elements become error records.
fn batch<F>(cfg: &JobConfig, text: String, job: F) -> Result<i32>
where
    F: Fn(&Value) -> Result<(Value, i32)> + Sync,
{
    let value: Value = serde_json::from_str(&text)?;
    match value {
        Value::Array(items) => {
            let results: Vec<(Value, i32)> = std::thread::scope(|s| {
                let handles: Vec<_> = items
                    .iter()
                    .map(|item| s.spawn(|| job(item).unwrap_or_else(|e| (error_record(&e), exit_code(&e)))))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("batch worker panicked"))
                    .collect()
            });
            let code = results.iter().map(|r| r.1).max().unwrap_or(EXIT_OK);
            let docs: Vec<Value> = results.into_iter().map(|r| r.0).collect();
            emit(cfg, &to_json(&docs)?)?;
            Ok(code)
        }
        single => {
            let (doc, code) = job(&single)?;
            emit(cfg, &to_json(&doc)?)?;
            Ok(code)
        }
    }
}

fn error_record(e: &Error) -> Value {
    serde_json::json!({
        "schema": SCHEMA,
        "error": e.to_string(),
        "exit_code": exit_code(e),
    })
}

fn to_value<T: Serialize>(doc: &T) -> Result<Value> {
    Ok(serde_json::to_value(doc)?)
}

fn cmd_expand(v: &Value, cfg: &JobConfig, max_precision: u32) -> Result<(Value, i32)> {
    let input: VectorInput = serde_json::from_value(v.clone())?;
    let resolved = input.resolve()?;
    let config = ExpandConfig {
        precision: cfg.precision,
        max_precision,
    };
    let annotate = |seq: &DigitSequence| DigitsDoc {
        provenance: Some((&resolved.provenance).into()),
        genus: resolved.genus.map(|g| g as u32),
        ..DigitsDoc::from_sequence(seq)
    };
    match jp_expand_sources(&resolved.sources, cfg.depth, config) {
        Ok(seq) => Ok((to_value(&annotate(&seq))?, EXIT_OK)),
        Err(e @ Error::PrecisionExhausted { .. }) => {
            eprintln!("error: {e}");
            let Error::PrecisionExhausted { partial, .. } = e else {
                unreachable!()
            };
            let seq = partial
                .map(|p| *p)
                .unwrap_or_else(|| DigitSequence::new(resolved.sources.len() + 1, vec![], false).expect("empty"));
            Ok((to_value(&annotate(&seq))?, EXIT_PRECISION))
        }
        Err(e) => Err(e),
    }
}

fn cmd_periodic(
    v: &Value,
    max_preperiod: Option<usize>,
    max_period: Option<usize>,
) -> Result<(Value, i32)> {
    let doc: DigitsDoc = serde_json::from_value(v.clone())?;
    let digits = doc.to_sequence()?;
    let max_period = max_period.unwrap_or((digits.len() / 4).max(1));
    let max_preperiod =
        max_preperiod.unwrap_or_else(|| digits.len().saturating_sub(2 * max_period));
    let found = detect_periodicity(&digits, max_preperiod, max_period)?;
    let period_matrix = match found {
        Some((p, q)) => Some(matrix_doc(&convergent_matrix(&digits.suffix(p), q)?)),
        None => None,
    };
    let out = PeriodicDoc {
        schema: Default::default(),
        blocks: digits.len(),
        max_preperiod,
        max_period,
        periodic: found.is_some(),
        preperiod: found.map(|f| f.0),
        period: found.map(|f| f.1),
        period_matrix,
    };
    Ok((to_value(&out)?, EXIT_OK))
}

pub fn cmd_stable_iso(algebras: &[ToricAFAlgebra], horizon: usize) -> Result<StableIsoDoc> {
    if algebras.len() < 2 {
        return Err(Error::input("stable-iso needs at least two algebras"));
    }
    let witness = if algebras.len() == 2 {
        stably_isomorphic(&algebras[0], &algebras[1], horizon)?.ok_or(Error::NotTailEquivalent {
            first: 0,
            second: 1,
        })
    } else {
        maximal_common_tail(algebras, horizon)
    };
    let mut doc = StableIsoDoc {
        schema: Default::default(),
        horizon,
        stably_isomorphic: false,
        offsets: None,
        window: None,
        tail: None,
        not_equivalent: None,
    };
    match witness {
        Ok(w) => {
            doc.stably_isomorphic = true;
            doc.window = Some(w.window);
            doc.tail = Some(DigitsDoc::from_sequence(&w.tail).blocks);
            doc.offsets = Some(w.offsets);
        }
        Err(Error::NotTailEquivalent { first, second }) => doc.not_equivalent = Some([first, second]),
        Err(e) => return Err(e),
    }
    Ok(doc)
}

fn load_algebra(r: &AlgebraRef, base: Option<&Path>) -> Result<ToricAFAlgebra> {
    match r {
        AlgebraRef::Inline(doc) => doc.to_algebra(),
        AlgebraRef::Path(p) => {
            let path = match base {
                Some(b) => b.join(p),
                None => PathBuf::from(p),
            };
            from_json::<DigitsDoc>(&read_file(&path)?)?.to_algebra()
        }
    }
}

/// Builds the representation, checks relators and sampled homomorphism
/// pairs, and probes random words against the reconstructed common tail.
pub fn cmd_repr(
    doc: &ReprInput,
    base_dir: Option<&Path>,
    cfg: &JobConfig,
    samples: usize,
    probes: usize,
    max_word: usize,
    tolerance: &num_rational::BigRational,
) -> Result<ReprDoc> {
    let presentation = Presentation::try_from(&doc.presentation)?;
    let orbit = OrbitData {
        base: load_algebra(&doc.base, base_dir)?,
        images: doc
            .images
            .iter()
            .map(|a| load_algebra(a, base_dir))
            .collect::<Result<Vec<_>>>()?,
    };
    let rep = build_representation(presentation, &orbit, cfg.horizon)?;
    let witness = rep.witness().expect("built from orbit data").clone();

    let mut report = verify_relators(&rep)?.merge(homomorphism_samples(&rep, samples, max_word, cfg.seed)?);

    let mut words: Vec<Word> = doc.probe_words.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
    let rank = rep.presentation().rank();
    while words.len() < doc.probe_words.len() + probes {
        let w = random_word(&mut rng, rank, max_word.max(1));
        if !free_reduce(&w).is_empty() {
            words.push(w);
        }
    }
    let mut notes = Vec::new();
    let theta_max = match reconstruct_theta(&witness.tail, tolerance) {
        Ok(t) => Some(t),
        Err(e) => {
            notes.push(format!("common tail not reconstructed: {e}"));
            None
        }
    };
    if let Some(theta) = &theta_max {
        let mut probed = VerificationReport::default();
        for w in &words {
            match faithfulness_probe(&rep, theta, std::slice::from_ref(w)) {
                Ok(r) => probed = probed.merge(r),
                Err(Error::Undecidable) => notes.push(format!("word {w:?}: undecidable at this precision")),
                Err(e) => return Err(e),
            }
        }
        report = report.merge(probed);
    }

    Ok(ReprDoc {
        schema: Default::default(),
        dimension: rep.dimension(),
        genus: rep.genus(),
        presentation: rep.presentation().into(),
        matrices: rep.matrices().iter().map(matrix_doc).collect(),
        offsets: witness.offsets.clone(),
        tail: TailDoc {
            length: witness.tail.len(),
            window: witness.window,
            blocks: DigitsDoc::from_sequence(&witness.tail).blocks,
        },
        theta_max: theta_max.as_ref().map(crate::json::theta_components),
        probe_note: (!notes.is_empty()).then(|| notes.join("; ")),
        report: ReportDoc::from(&report),
    })
}

fn widths_csv(widths: &[Option<num_rational::BigRational>]) -> String {
    let mut out = String::from("block,log10_width\n");
    for (k, w) in widths.iter().enumerate() {
        match w {
            Some(w) if num_traits::Zero::is_zero(w) => out.push_str(&format!("{},-inf\n", k + 1)),
            Some(w) => out.push_str(&format!(
                "{},{:.6}\n",
                k + 1,
                log2_approx(w) * std::f64::consts::LOG10_2
            )),
            None => out.push_str(&format!("{},inf\n", k + 1)),
        }
    }
    out
}

fn read_file(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn read_input(args: &InputArgs) -> Result<String> {
    match (&args.input, &args.json) {
        (_, Some(inline)) => Ok(inline.clone()),
        (Some(path), None) => read_file(path),
        (None, None) => Err(Error::input("give --input <file> or --json <text>")),
    }
}

fn emit(cfg: &JobConfig, text: &str) -> Result<()> {
    match &cfg.output {
        Some(path) => write_atomic(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
