mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use pdens::density::{compare_fingerprints, fingerprint_with, psi_k};
use pdens::io::{parse_sequence, write_sequence, FingerprintDocument};
use pdens::oracle::check_against_oracle;
use pdens::rational::{format_rational, rat};
use pdens::reconstruct::reconstruct_from_psi1;
use pdens::{FingerprintOptions, PeriodicSequence, PiecewiseLinear, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Density functions and their areas.
    Compute,
    /// Exit 0 if two sequences have equal fingerprints, 1 otherwise.
    Compare,
    /// Areas under the density functions.
    Rho,
    /// Rebuild a generic sequence from the k = 1 entry of a fingerprint file.
    Reconstruct,
    /// Compare the corner formulas with a direct coverage computation.
    OracleCheck,
    /// SVG plot of the density functions.
    Plot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

/// Exact density fingerprints of periodic point sequences on the line.
#[derive(Debug, Parser)]
#[command(name = "pdens", version)]
struct Cli {
    command: Command,
    /// Input files: sequence JSON, or fingerprint JSON for `reconstruct`.
    files: Vec<PathBuf>,
    /// Highest k to emit (default: half the motif size).
    #[arg(long)]
    k_max: Option<usize>,
    /// Keep the motif as given instead of folding it onto its smallest period.
    #[arg(long)]
    no_primitive_reduce: bool,
    /// Keep radii in the sequence's own units instead of fractions of the period.
    #[arg(long)]
    no_rescale: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also check the oracle at 64 radii drawn from this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Distort ψ_K before an oracle check (negative control).
    #[arg(long, hide = true)]
    corrupt_k: Option<usize>,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn refused(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

impl Cli {
    fn options(&self) -> FingerprintOptions {
        FingerprintOptions {
            primitive_reduce: !self.no_primitive_reduce,
            rescale: !self.no_rescale,
        }
    }

    fn single_input(&self) -> Result<&Path, Failure> {
        match self.files.as_slice() {
            [one] => Ok(one),
            _ => Err(usage(format!(
                "{:?} takes exactly one input file, got {}",
                self.command,
                self.files.len()
            ))),
        }
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(path) => fs::write(path, text)
                .map_err(|e| usage(format!("{}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| usage(format!("stdout: {e}")))
            }
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_sequence(path: &Path) -> Result<PeriodicSequence, Failure> {
    parse_sequence(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// `(k, ψ_k)` for `k = 0..=k_max` plus the fingerprint's motif size and period.
fn functions(
    cli: &Cli,
    seq: &PeriodicSequence,
) -> (usize, Rational, Vec<(usize, PiecewiseLinear)>) {
    let fp = fingerprint_with(seq, cli.options());
    let k_max = cli.k_max.unwrap_or(fp.motif_size() / 2);
    let functions = (0..=k_max).map(|k| (k, fp.psi(k))).collect();
    (fp.motif_size(), fp.period().clone(), functions)
}

fn compute(cli: &Cli) -> Result<u8, Failure> {
    let seq = load_sequence(cli.single_input()?)?;
    let (m, period, functions) = functions(cli, &seq);
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => FingerprintDocument::new(m, &period, &functions).to_json(),
        Format::Csv => FingerprintDocument::new(m, &period, &functions)
            .to_csv()
            .map_err(|e| usage(e.to_string()))?,
        Format::Svg => svg::render(&functions, "density functions"),
    };
    cli.emit(&text)?;
    Ok(0)
}

fn compare(cli: &Cli) -> Result<u8, Failure> {
    let [a, b] = cli.files.as_slice() else {
        return Err(usage(format!(
            "compare takes exactly two input files, got {}",
            cli.files.len()
        )));
    };
    let (s, q) = (load_sequence(a)?, load_sequence(b)?);
    let (fs, fq) = (
        fingerprint_with(&s, cli.options()),
        fingerprint_with(&q, cli.options()),
    );
    match compare_fingerprints(&fs, &fq) {
        None => {
            cli.emit(&format!(
                "equal: psi_0..psi_{} agree, hence all psi_k\n",
                fs.functions().len() - 1
            ))?;
            Ok(0)
        }
        Some(diff) => {
            cli.emit(&format!("different: {diff}\n"))?;
            Ok(1)
        }
    }
}

fn rho(cli: &Cli) -> Result<u8, Failure> {
    let seq = load_sequence(cli.single_input()?)?;
    let (_, _, functions) = functions(cli, &seq);
    let rows: Vec<(usize, Rational)> = functions.iter().map(|(k, f)| (*k, f.integral())).collect();
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            let entries: Vec<serde_json::Value> = rows
                .iter()
                .map(|(k, r)| serde_json::json!({ "k": k, "rho": format_rational(r) }))
                .collect();
            let mut s = serde_json::to_string_pretty(&entries).expect("plain data");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("k,rho_num,rho_den\n");
            for (k, r) in &rows {
                s.push_str(&format!("{k},{},{}\n", r.numer(), r.denom()));
            }
            s
        }
        Format::Svg => return Err(usage("rho has no svg output")),
    };
    cli.emit(&text)?;
    Ok(0)
}

fn reconstruct(cli: &Cli) -> Result<u8, Failure> {
    let path = cli.single_input()?;
    let bad = |e: pdens::Error| usage(format!("{}: {e}", path.display()));
    let doc = FingerprintDocument::from_json(&read(path)?).map_err(bad)?;
    let period = doc.period().map_err(bad)?;
    let f = doc.function(1).map_err(bad)?;
    let f = f.scale_x(&(Rational::from_integer(1.into()) / period));
    let result = reconstruct_from_psi1(&f, doc.motif_size).map_err(|e| refused(e.to_string()))?;
    cli.emit(&write_sequence(&result.sequence))?;
    Ok(0)
}

fn oracle_check(cli: &Cli) -> Result<u8, Failure> {
    let seq = load_sequence(cli.single_input()?)?;
    let seq = if cli.no_primitive_reduce {
        seq
    } else {
        seq.primitive_reduce()
    };
    let unit = seq.scale_to_unit();
    let m = unit.len();
    let k_max = cli.k_max.unwrap_or(m);
    let mut functions: Vec<PiecewiseLinear> = (0..=k_max).map(|k| psi_k(&unit, k)).collect();
    if let Some(k) = cli.corrupt_k {
        if let Some(f) = functions.get_mut(k) {
            *f = f.scale_x(&rat(3, 2));
        }
    }
    let extra: Vec<Rational> = match cli.seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let reach = (k_max as i64 + 1) * 500;
            (0..64)
                .map(|_| rat(rng.gen_range(0..=reach), 1000))
                .collect()
        }
        None => Vec::new(),
    };
    let report = check_against_oracle(&unit, &functions, &extra);
    let mut text = String::new();
    for mm in &report.mismatches {
        text.push_str(&format!(
            "mismatch k={} t={} oracle={} density={}\n",
            mm.k, mm.t, mm.expected, mm.actual
        ));
    }
    text.push_str(&format!(
        "checked {} values of psi_0..psi_{k_max}: {}\n",
        report.checked,
        if report.passed() {
            "all match".to_string()
        } else {
            format!("{} mismatches", report.mismatches.len())
        }
    ));
    cli.emit(&text)?;
    Ok(if report.passed() { 0 } else { 1 })
}

fn plot(cli: &Cli) -> Result<u8, Failure> {
    let path = cli.single_input()?;
    let seq = load_sequence(path)?;
    let (_, _, functions) = functions(cli, &seq);
    let title = format!("density functions of {}", path.display());
    cli.emit(&svg::render(&functions, &title))?;
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Compute => compute(cli),
        Command::Compare => compare(cli),
        Command::Rho => rho(cli),
        Command::Reconstruct => reconstruct(cli),
        Command::OracleCheck => oracle_check(cli),
        Command::Plot => plot(cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, message }) => {
            eprintln!("pdens: {message}");
            ExitCode::from(code)
        }
    }
}
