use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use braceforge::aut;
use braceforge::brace::{brace_from_regular, lambda_table, verify_brace, verify_lambda_cocycle};
use braceforge::classify::{ClassRecord, Classifier};
use braceforge::layered::LayerOptions;
use braceforge::pipeline::{self, compare_with_oracle, read_class_list, report, run_pipeline, write_class_list};
use braceforge::subgroup::{conjugate_subgroup, is_regular};
use braceforge::{Error, GroupSpec, HolElement, Holomorph};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXIT_MISMATCH: u8 = 2;
const EXIT_INTEGRITY: u8 = 3;
const EXIT_CAPACITY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "braceforge",
    version,
    about = "Enumerate and classify braces with a given finite abelian additive group"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate regular subgroups of a Sylow subgroup of Hol(G) and classify them.
    Enumerate(EnumerateArgs),
    /// Classify one class list again, or merge two.
    Classify(ClassifyArgs),
    /// Check regularity, brace axioms and conjugation invariance of a class list.
    Verify(VerifyArgs),
    /// Compare the layered pipeline against the brute-force oracle.
    Oracle(OracleArgs),
    /// Count classes by multiplicative group.
    Report(ReportArgs),
    /// Write one lambda-table file per class.
    Braces(BracesArgs),
}

#[derive(Args)]
struct GroupArgs {
    /// Cyclic factor orders, e.g. 4,4,4.
    #[arg(long, value_parser = parse_spec)]
    group: GroupSpec,
    /// The prime dividing |G|; derived from the group when omitted.
    #[arg(long)]
    prime: Option<u64>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long)]
    checkpoint_dir: Option<PathBuf>,
    /// Continue from the checkpoints in --checkpoint-dir.
    #[arg(long, requires = "checkpoint_dir")]
    resume: bool,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Class-list file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stop after this many enumeration steps, leaving checkpoints behind.
    #[arg(long, hide = true)]
    stop_after: Option<usize>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// One class list, or two to merge.
    #[arg(long = "in", required = true, num_args = 1)]
    inputs: Vec<PathBuf>,
    #[arg(long, value_parser = parse_spec)]
    group: Option<GroupSpec>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = parse_spec)]
    group: Option<GroupSpec>,
    /// Random conjugators tried per class.
    #[arg(long, default_value_t = 100)]
    conjugators: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = parse_spec)]
    group: Option<GroupSpec>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Tab-separated `fingerprint-hash name` lines used to label rows.
    #[arg(long)]
    id_map: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BracesArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = parse_spec)]
    group: Option<GroupSpec>,
    /// Directory receiving `brace-<k>.txt` files.
    #[arg(long)]
    out: PathBuf,
}

fn parse_spec(s: &str) -> Result<GroupSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Lib(Error),
    Mismatch(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Enumerate(a) => enumerate(a),
        Command::Classify(a) => classify(a),
        Command::Verify(a) => verify(a),
        Command::Oracle(a) => oracle(a),
        Command::Report(a) => report_cmd(a),
        Command::Braces(a) => braces(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_MISMATCH)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Integrity { .. } => ExitCode::from(EXIT_INTEGRITY),
                Error::Capacity(_) => ExitCode::from(EXIT_CAPACITY),
                Error::Interrupted { .. } => {
                    eprintln!("rerun with --resume to continue");
                    ExitCode::from(1)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}

fn holomorph(args: &GroupArgs) -> Result<Holomorph, Failure> {
    let p = args
        .group
        .prime()
        .ok_or_else(|| Failure::Usage(format!("group {} does not have prime-power order", args.group)))?;
    if let Some(q) = args.prime {
        if q != p {
            return Err(Failure::Usage(format!(
                "group {} is a {p}-group, not a {q}-group",
                args.group
            )));
        }
    }
    Ok(Holomorph::new(args.group.clone()))
}

fn write_output(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| {
            Failure::Lib(Error::Io {
                path: path.to_path_buf(),
                source: e,
            })
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Group from `--group`, or from the second line of the class list.
fn group_of(path: &Path, given: Option<&GroupSpec>) -> Result<GroupSpec, Failure> {
    if let Some(g) = given {
        return Ok(g.clone());
    }
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let line = text.lines().nth(1).unwrap_or_default();
    line.parse().map_err(|e: Error| {
        Failure::Lib(Error::Integrity {
            path: path.to_path_buf(),
            reason: format!("bad group line: {e}"),
        })
    })
}

fn load(path: &Path, group: Option<&GroupSpec>, jobs: usize) -> Result<(Classifier, Vec<ClassRecord>), Failure> {
    let spec = group_of(path, group)?;
    let classifier = Classifier::new(&Holomorph::new(spec), jobs)?;
    let records = read_class_list(path, &classifier)?;
    Ok((classifier, records))
}

fn bucket_count(records: &[ClassRecord]) -> usize {
    let mut keys: Vec<_> = records
        .iter()
        .map(|r| {
            (
                &r.invariants.mult_fp,
                &r.invariants.kernel_fp,
                &r.invariants.quotient_fp,
            )
        })
        .collect();
    keys.dedup();
    keys.len()
}

fn enumerate(a: EnumerateArgs) -> CmdResult {
    let hol = holomorph(&a.group)?;
    let opts = LayerOptions {
        checkpoint_dir: a.checkpoint_dir.clone(),
        resume: a.resume,
        step_budget: a.stop_after,
        ..LayerOptions::default()
    };
    let records = run_pipeline(&hol, &opts, a.jobs as usize)?;
    write_output(a.out.as_deref(), &write_class_list(&hol, &records))?;
    eprintln!("classes\t{}", records.len());
    eprintln!("buckets\t{}", bucket_count(&records));
    Ok(())
}

fn classify(a: ClassifyArgs) -> CmdResult {
    let (classifier, records) = match a.inputs.as_slice() {
        [one] => {
            let (c, records) = load(one, a.group.as_ref(), a.jobs as usize)?;
            let reps: Vec<_> = records.into_iter().map(|r| r.representative).collect();
            let records = c.classify(&reps)?;
            (c, records)
        }
        [first, second] => {
            let (c, left) = load(first, a.group.as_ref(), a.jobs as usize)?;
            let right = read_class_list(second, &c)?;
            let merged = c.merge(&left, &right)?;
            (c, merged)
        }
        _ => return Err(Failure::Usage("classify takes one or two --in files".into())),
    };
    write_output(a.out.as_deref(), &write_class_list(classifier.holomorph(), &records))?;
    eprintln!("classes\t{}", records.len());
    Ok(())
}

fn verify(a: VerifyArgs) -> CmdResult {
    let (classifier, records) = load(&a.input, a.group.as_ref(), 1)?;
    let hol = classifier.holomorph().clone();
    let spec = hol.spec().clone();
    let auts = aut::generate(&spec, &aut::aut_generators(&spec)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut failures = Vec::new();
    for (k, r) in records.iter().enumerate() {
        let h = &r.representative;
        if !is_regular(&hol, h) {
            failures.push(format!("class {k}: not regular"));
            continue;
        }
        let lambda = lambda_table(&hol, h)?;
        if !verify_lambda_cocycle(&lambda) {
            failures.push(format!("class {k}: lambda cocycle law fails"));
        }
        if !verify_brace(&brace_from_regular(&lambda)?) {
            failures.push(format!("class {k}: brace law fails"));
        }
        for _ in 0..a.conjugators {
            let g = spec.element_at(rng.gen_range(0..spec.order()));
            let alpha = auts[rng.gen_range(0..auts.len())].clone();
            let c = conjugate_subgroup(&hol, &HolElement::new(g, alpha), h)?;
            if !is_regular(&hol, &c) || classifier.canonical(&c)? != *h {
                failures.push(format!("class {k}: conjugate leaves the class"));
                break;
            }
        }
    }
    if failures.is_empty() {
        println!("OK\t{} classes", records.len());
        Ok(())
    } else {
        Err(Failure::Mismatch(failures.join("\n")))
    }
}

fn oracle(a: OracleArgs) -> CmdResult {
    let hol = holomorph(&a.group)?;
    let cmp = compare_with_oracle(&hol, a.jobs as usize)?;
    if cmp.is_equal() {
        println!("PASS\t{}\t{} classes", hol.spec(), cmp.pipeline.len());
        return Ok(());
    }
    let mut msg = format!(
        "FAIL\t{}\tpipeline {} classes, oracle {} classes",
        hol.spec(),
        cmp.pipeline.len(),
        cmp.oracle.len()
    );
    for r in &cmp.missing {
        msg.push_str(&format!("\nmissing\t{}", r.representative));
    }
    for r in &cmp.extra {
        msg.push_str(&format!("\nextra\t{}", r.representative));
    }
    Err(Failure::Mismatch(msg))
}

fn report_cmd(a: ReportArgs) -> CmdResult {
    let Format::Tsv = a.format;
    let (_, records) = load(&a.input, a.group.as_ref(), 1)?;
    let id_map = match &a.id_map {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            pipeline::parse_id_map(&text)?
        }
        None => HashMap::new(),
    };
    write_output(a.out.as_deref(), &report(&records, &id_map))
}

fn braces(a: BracesArgs) -> CmdResult {
    let (classifier, records) = load(&a.input, a.group.as_ref(), 1)?;
    let hol = classifier.holomorph();
    fs::create_dir_all(&a.out).map_err(|e| Error::Io {
        path: a.out.clone(),
        source: e,
    })?;
    for (k, r) in records.iter().enumerate() {
        let path = a.out.join(format!("brace-{k}.txt"));
        let text = lambda_table(hol, &r.representative)?.to_text();
        fs::write(&path, text).map_err(|e| Error::Io { path, source: e })?;
    }
    eprintln!("braces\t{}", records.len());
    Ok(())
}
