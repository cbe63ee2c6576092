use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qlesson::composite::{qft, qft_dagger};
use qlesson::simulator::{render_wavefunction, run, write_histogram, DEFAULT_SEED};
use qlesson::{parse, BasisLabel, DisplayOptions, Program};
use serde_json::json;

mod lessons;

#[derive(Parser)]
#[command(
    name = "qlesson",
    version,
    about = "Run quantum lessons and Quil programs on a statevector simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a program for a number of shots and print register rows.
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        shots: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Register slots to report, e.g. `0,2,1`.
        #[arg(long, value_delimiter = ',')]
        cregs: Option<Vec<usize>>,
        #[arg(long)]
        json: bool,
    },
    /// Execute a program once and print its final wavefunction.
    Wavefunction {
        file: PathBuf,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        display: DisplayArgs,
        #[arg(long)]
        json: bool,
    },
    /// Run one of the algorithm lessons.
    Lesson(LessonArgs),
    /// Flip a qubit coin.
    Coinflip {
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 1)]
        flips: usize,
        #[arg(long)]
        json: bool,
    },
    /// Append a QFT (or its inverse) to a program and print the wavefunction.
    Qft {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        qubits: Vec<usize>,
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        display: DisplayArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct SeedArg {
    /// Integer seed, or `random` to draw one from the OS.
    #[arg(long = "seed", default_value_t = Seed::Fixed(DEFAULT_SEED))]
    seed: Seed,
}

#[derive(Clone, Copy, Debug)]
enum Seed {
    Fixed(u64),
    Random,
}

impl std::fmt::Display for Seed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Seed::Fixed(s) => write!(f, "{s}"),
            Seed::Random => f.write_str("random"),
        }
    }
}

impl FromStr for Seed {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "random" {
            return Ok(Seed::Random);
        }
        let parsed = match s.strip_prefix("0x") {
            Some(hex) => u64::from_str_radix(hex, 16),
            None => s.parse(),
        };
        parsed
            .map(Seed::Fixed)
            .map_err(|_| format!("expected an integer or `random`, got `{s}`"))
    }
}

impl SeedArg {
    fn resolve(&self) -> u64 {
        match self.seed {
            Seed::Fixed(s) => s,
            Seed::Random => rand::random(),
        }
    }
}

#[derive(Args)]
struct DisplayArgs {
    /// Decimal places per amplitude component.
    #[arg(long, default_value_t = 5)]
    precision: usize,
    /// One term per line.
    #[arg(long)]
    column: bool,
    /// Split the kets into systems of these sizes, e.g. `2,1`.
    #[arg(long, value_delimiter = ',')]
    systems: Option<Vec<usize>>,
    /// Which systems to print, e.g. `t,f`.
    #[arg(long, value_delimiter = ',', value_parser = parse_flag)]
    show: Option<Vec<bool>>,
}

fn parse_flag(s: &str) -> Result<bool, String> {
    match s {
        "t" | "true" | "1" => Ok(true),
        "f" | "false" | "0" => Ok(false),
        _ => Err(format!("expected t or f, got `{s}`")),
    }
}

impl DisplayArgs {
    fn options(&self) -> DisplayOptions {
        DisplayOptions {
            precision: self.precision,
            column: self.column,
            systems: self.systems.clone(),
            show_systems: self.show.clone(),
        }
    }
}

#[derive(Args)]
pub struct LessonArgs {
    #[arg(value_enum)]
    pub lesson: LessonName,
    #[arg(long)]
    pub qubits: Option<usize>,
    /// Marked state for the Grover lessons, e.g. `101`.
    #[arg(long)]
    pub marked: Option<BasisLabel>,
    /// Grover iterations; defaults to the optimal count.
    #[arg(long)]
    pub iterations: Option<usize>,
    #[command(flatten)]
    seed: SeedArg,
    /// Independent repetitions, each with its own derived seed.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LessonName {
    Deutsch,
    Dj,
    Bv,
    Simon,
    Grover,
    QftGrover,
}

pub enum Failure {
    /// Exit 1: the program text did not parse.
    Source(String),
    /// Exit 2: flags were well-formed but inconsistent.
    Usage(String),
    /// Exit 1: anything else that went wrong while running.
    Runtime(String),
}

impl From<qlesson::Error> for Failure {
    fn from(e: qlesson::Error) -> Self {
        match e {
            qlesson::Error::DisplayOptions(m) => Failure::Usage(m),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<Program, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| Failure::Source(format!("{}: {}", path.display(), e.render(&text))))
}

fn to_json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn bits_text(row: &[u8]) -> String {
    row.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_run(file: &Path, shots: usize, seed: u64, cregs: Option<&[usize]>, json_out: bool) -> Result<String, Failure> {
    if shots == 0 {
        return Err(Failure::Usage("--shots must be at least 1".into()));
    }
    let program = load(file)?;
    if cregs.is_none() && program.max_creg().is_none() {
        return Err(Failure::Runtime(
            "the program stores no measurements; add MEASURE q [c] or pass --cregs".into(),
        ));
    }
    let results = run(&program, cregs, shots, seed)?;
    if json_out {
        return Ok(to_json(&json!({
            "schema": 1,
            "command": "run",
            "seed": seed,
            "shots": shots,
            "rows": results.rows,
            "histogram": results.histogram,
        })));
    }
    let mut out = Vec::new();
    for row in &results.rows {
        writeln!(out, "{}", bits_text(row)).unwrap();
    }
    write_histogram(&results.histogram, results.trials, &mut out).unwrap();
    Ok(String::from_utf8(out).expect("utf-8 output"))
}

fn wavefunction_output(
    program: &Program,
    seed: u64,
    opts: &DisplayOptions,
    json_out: bool,
    extra: serde_json::Value,
) -> Result<String, Failure> {
    if program.n_qubits() == 0 {
        return Err(Failure::Runtime("the program acts on no qubits".into()));
    }
    let (state, creg) = qlesson::simulator::simulate(program, seed)?;
    let text = render_wavefunction(&state, opts)?;
    if json_out {
        let mut value = json!({
            "schema": 1,
            "seed": seed,
            "n_qubits": state.n_qubits(),
            "amplitudes": state.amplitudes().iter().map(|a| [a.re, a.im]).collect::<Vec<_>>(),
            "text": text,
            "classical": creg.bits().iter().map(|&b| u8::from(b)).collect::<Vec<_>>(),
        });
        if let (Some(obj), serde_json::Value::Object(more)) = (value.as_object_mut(), extra) {
            obj.extend(more);
        }
        return Ok(to_json(&value));
    }
    Ok(format!("{text}\n"))
}

fn cmd_coinflip(seed: u64, flips: usize, json_out: bool) -> Result<String, Failure> {
    if flips == 0 {
        return Err(Failure::Usage("--flips must be at least 1".into()));
    }
    let coin = parse("H 0\nMEASURE 0 [0]\n").expect("fixed program");
    let results = run(&coin, Some(&[0]), flips, seed)?;
    let faces: Vec<&str> = results
        .rows
        .iter()
        .map(|r| if r[0] == 0 { "Heads" } else { "Tails" })
        .collect();
    if json_out {
        return Ok(to_json(
            &json!({ "schema": 1, "command": "coinflip", "seed": seed, "flips": faces }),
        ));
    }
    Ok(faces.iter().map(|f| format!("{f}\n")).collect())
}

fn execute(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Run {
            file,
            shots,
            seed,
            cregs,
            json,
        } => cmd_run(&file, shots, seed.resolve(), cregs.as_deref(), json),
        Command::Wavefunction {
            file,
            seed,
            display,
            json,
        } => {
            let program = load(&file)?;
            wavefunction_output(
                &program,
                seed.resolve(),
                &display.options(),
                json,
                json!({ "command": "wavefunction" }),
            )
        }
        Command::Lesson(args) => {
            let seed = args.seed.resolve();
            lessons::run_lesson(&args, seed)
        }
        Command::Coinflip { seed, flips, json } => cmd_coinflip(seed.resolve(), flips, json),
        Command::Qft {
            file,
            qubits,
            inverse,
            seed,
            display,
            json,
        } => {
            let mut program = load(&file)?;
            if inverse {
                qft_dagger(&mut program, &qubits)?;
            } else {
                qft(&mut program, &qubits)?;
            }
            wavefunction_output(
                &program,
                seed.resolve(),
                &display.options(),
                json,
                json!({ "command": "qft", "qubits": qubits, "inverse": inverse }),
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Source(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
