use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use qfw_core::decomp::WorkRng;
use qfw_core::fixtures::{battery, corpus};
use qfw_core::pipeline::{self, ExtensionOptions, Operand};
use qfw_core::report::{Check, Verdict};
use qfw_core::schema::{coring_document, parse_input, Input};
use qfw_core::verify::verify_certificate;
use qfw_core::Error;

/// Stdout writes that tolerate a closed pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

fn out_raw(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().write_all(text.as_bytes());
}

const TOOL_VERSION: &str = concat!("qfw ", env!("CARGO_PKG_VERSION"));

#[derive(Parser, Debug)]
#[command(name = "qfw", version, about = "Quasi-Frobenius workbench over prime fields")]
struct Cli {
    /// Seed for the randomized decomposition steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Run the bundled fixture corpus.
    #[arg(long)]
    battery: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quasi-Frobenius (or Frobenius) test for a bimodule.
    CheckBimodule {
        input: PathBuf,
        #[arg(long)]
        frobenius: bool,
    },
    /// Quasi-Frobenius (or Frobenius) test for a ring extension.
    CheckExtension {
        input: PathBuf,
        #[arg(long)]
        frobenius: bool,
        /// Second extension β: checks the composition equivalence instead.
        #[arg(long, value_name = "FILE", conflicts_with = "frobenius")]
        then: Option<PathBuf>,
        /// Add quasi-Frobenius pair witnesses on S and its summands.
        #[arg(long)]
        witness: bool,
    },
    /// Quasi-Frobenius test for a coring, all equivalent conditions.
    CheckCoring { input: PathBuf },
    /// Quasi-Frobenius test for the restriction functor of a graded ring.
    CheckGraded { input: PathBuf },
    /// Krull–Schmidt decomposition of a module or bimodule.
    Decompose { input: PathBuf },
    /// Similarity of two modules or bimodules.
    Similar { first: PathBuf, second: PathBuf },
    /// Whether the first operand divides a power of the second.
    Divides { first: PathBuf, second: PathBuf },
    /// Iterated left and right duals of a bimodule.
    DualSequence {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Sweedler coring of an extension, written as a coring document.
    Sweedler {
        input: PathBuf,
        /// Output file; stdout when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Re-checks every certificate in an emitted report.
    Verify { report_file: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckBimodule { .. } => "check-bimodule",
            Command::CheckExtension { .. } => "check-extension",
            Command::CheckCoring { .. } => "check-coring",
            Command::CheckGraded { .. } => "check-graded",
            Command::Decompose { .. } => "decompose",
            Command::Similar { .. } => "similar",
            Command::Divides { .. } => "divides",
            Command::DualSequence { .. } => "dual-sequence",
            Command::Sweedler { .. } => "sweedler",
            Command::Verify { .. } => "verify",
        }
    }
}

#[derive(Serialize, Deserialize, Debug)]
struct EmittedReport {
    tool_version: String,
    seed: u64,
    command: String,
    verdict: Verdict,
    checks: Vec<Check>,
}

#[derive(Serialize, Debug)]
struct BatteryLine {
    name: String,
    expected: Verdict,
    verdict: Option<Verdict>,
    certificates_ok: bool,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize, Debug)]
struct BatteryReport {
    tool_version: String,
    seed: u64,
    passed: usize,
    total: usize,
    fixtures: Vec<BatteryLine>,
}

enum Failure {
    Input(String),
    Inconsistent(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Inconsistent(_) => Failure::Inconsistent(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn exit_for(v: Verdict) -> ExitCode {
    match v {
        Verdict::Yes => ExitCode::SUCCESS,
        Verdict::No | Verdict::Vacuous => ExitCode::from(1),
        Verdict::Inconsistent => ExitCode::from(3),
    }
}

fn load(path: &Path) -> Outcome<Input> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_input(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn operand(path: &Path) -> Outcome<Operand> {
    match load(path)? {
        Input::Module(m) => Ok(Operand::Module(m)),
        Input::Bimodule(b) => Ok(Operand::Bimodule(b)),
        other => Err(wrong_kind(path, "a module or bimodule", &other)),
    }
}

fn wrong_kind(path: &Path, want: &str, got: &Input) -> Failure {
    Failure::Input(format!("{}: expected {want} document, found {}", path.display(), got.kind()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Outcome<()> {
    let v = serde_json::to_value(value).map_err(|e| Failure::Input(e.to_string()))?;
    let mut text = String::new();
    qfw_core::schema::write_compact_rows(&v, 0, &mut text);
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        match &c.reason {
            Some(r) => out!("  {:<28} {:<12} {r}", c.name, c.verdict.as_str()),
            None => out!("  {:<28} {}", c.name, c.verdict.as_str()),
        }
    }
}

fn run_command(cli: &Cli, cmd: &Command) -> Outcome<ExitCode> {
    let mut rng = WorkRng::seed_from_u64(cli.seed);
    let report = match cmd {
        Command::CheckBimodule { input, frobenius } => match load(input)? {
            Input::Bimodule(m) => pipeline::check_bimodule(&m, *frobenius, &mut rng)?,
            other => return Err(wrong_kind(input, "a bimodule", &other)),
        },
        Command::CheckExtension {
            input,
            frobenius,
            then,
            witness,
        } => {
            let h = match load(input)? {
                Input::Hom(h) => h,
                other => return Err(wrong_kind(input, "a hom", &other)),
            };
            let then = match then {
                Some(p) => match load(p)? {
                    Input::Hom(b) => Some(b),
                    other => return Err(wrong_kind(p, "a hom", &other)),
                },
                None => None,
            };
            let opts = ExtensionOptions {
                frobenius: *frobenius,
                then,
                witness: *witness,
            };
            pipeline::check_extension(&h, &opts, &mut rng)?
        }
        Command::CheckCoring { input } => match load(input)? {
            Input::Coring(c) => pipeline::check_coring(&c, &mut rng)?,
            other => return Err(wrong_kind(input, "a coring", &other)),
        },
        Command::CheckGraded { input } => match load(input)? {
            Input::Graded(g) => pipeline::check_graded(&g, &mut rng)?,
            other => return Err(wrong_kind(input, "a graded", &other)),
        },
        Command::Decompose { input } => {
            let m = operand(input)?;
            pipeline::decompose_report(m.carrier(), &mut rng)?
        }
        Command::Similar { first, second } => pipeline::similar_report(&operand(first)?, &operand(second)?, &mut rng)?,
        Command::Divides { first, second } => pipeline::divides_report(&operand(first)?, &operand(second)?, &mut rng)?,
        Command::DualSequence { input, depth } => match load(input)? {
            Input::Bimodule(m) => pipeline::dual_sequence_report(&m, *depth)?,
            other => return Err(wrong_kind(input, "a bimodule", &other)),
        },
        Command::Sweedler { input, output } => return sweedler(input, output.as_deref()),
        Command::Verify { report_file } => return verify(report_file),
    };
    let emitted = EmittedReport {
        tool_version: TOOL_VERSION.into(),
        seed: cli.seed,
        command: cmd.name().into(),
        verdict: report.verdict,
        checks: report.checks,
    };
    out!("{}: {}", emitted.command, emitted.verdict.as_str());
    print_checks(&emitted.checks);
    if let Some(path) = &cli.report {
        write_json(path, &emitted)?;
    }
    Ok(exit_for(emitted.verdict))
}

fn sweedler(input: &Path, output: Option<&Path>) -> Outcome<ExitCode> {
    let h = match load(input)? {
        Input::Hom(h) => h,
        other => return Err(wrong_kind(input, "a hom", &other)),
    };
    let e = qfw_core::ringext::make_extension(&h)?;
    let doc = coring_document(&qfw_core::coring::sweedler(&e)?);
    let text = doc.to_json() + "\n";
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        None => out_raw(&text),
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(path: &Path) -> Outcome<ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let report: EmittedReport =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let mut bad = 0;
    let mut count = 0;
    for c in &report.checks {
        if let Some(cert) = &c.certificate {
            count += 1;
            let res = verify_certificate(cert);
            if res.ok {
                out!("  {:<28} ok", c.name);
            } else {
                bad += 1;
                out!("  {:<28} FAILED {}", c.name, res.reasons.join("; "));
            }
        }
    }
    out!("verify: {}/{} certificates valid", count - bad, count);
    Ok(if bad == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_battery(cli: &Cli) -> Outcome<ExitCode> {
    let fixtures = corpus();
    let items = battery(&fixtures, cli.seed);
    let mut lines = Vec::with_capacity(items.len());
    for it in items {
        let (verdict, error) = match &it.report {
            Ok(r) => (Some(r.verdict), None),
            Err(e) => (None, Some(e.clone())),
        };
        let shown = verdict.map(Verdict::as_str).unwrap_or("error");
        let mark = if it.pass { "pass" } else { "FAIL" };
        out!("{mark} {:<32} expected {:<8} got {shown}", it.name, it.expected.as_str());
        lines.push(BatteryLine {
            name: it.name,
            expected: it.expected,
            verdict,
            certificates_ok: it.certificates_ok,
            pass: it.pass,
            error,
        });
    }
    let passed = lines.iter().filter(|l| l.pass).count();
    out!("battery: {passed}/{} passed", lines.len());
    let inconsistent = lines.iter().any(|l| l.verdict == Some(Verdict::Inconsistent));
    let out = BatteryReport {
        tool_version: TOOL_VERSION.into(),
        seed: cli.seed,
        passed,
        total: lines.len(),
        fixtures: lines,
    };
    if let Some(path) = &cli.report {
        write_json(path, &out)?;
    }
    Ok(if inconsistent {
        ExitCode::from(3)
    } else if passed == out.total {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match (&cli.command, cli.battery) {
        (_, true) => run_battery(&cli),
        (Some(cmd), false) => run_command(&cli, cmd),
        (None, false) => Err(Failure::Input("a subcommand or --battery is required".into())),
    };
    match res {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Inconsistent(msg)) => {
            eprintln!("inconsistent: {msg}");
            ExitCode::from(3)
        }
    }
}
