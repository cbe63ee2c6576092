use std::fmt::Write;

use qlesson::algorithms::{
    bernstein_vazirani, default_max_runs, deutsch, deutsch_jozsa, grover, grover_via_qft, simons, Classification,
    SimonOutcome,
};
use qlesson::blackbox::{bv_blackbox, dj_blackbox, random_deutsch, simon_blackbox, DjChoice, DjFunction, HiddenSpec};
use qlesson::simulator::seeded_rng;
use qlesson::BasisLabel;
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::{to_json, Failure, LessonArgs, LessonName};

const DEFAULT_QUBITS: [(LessonName, usize); 5] = [
    (LessonName::Dj, 3),
    (LessonName::Bv, 4),
    (LessonName::Simon, 3),
    (LessonName::Grover, 3),
    (LessonName::QftGrover, 3),
];

impl LessonName {
    fn label(self) -> &'static str {
        match self {
            LessonName::Deutsch => "deutsch",
            LessonName::Dj => "dj",
            LessonName::Bv => "bv",
            LessonName::Simon => "simon",
            LessonName::Grover => "grover",
            LessonName::QftGrover => "qft-grover",
        }
    }

    fn is_grover(self) -> bool {
        matches!(self, LessonName::Grover | LessonName::QftGrover)
    }
}

/// One trial: its JSON record, its text block and whether it was correct.
struct Trial {
    record: serde_json::Value,
    text: String,
    correct: bool,
}

fn record<T: Serialize>(seed: u64, result: &T) -> serde_json::Value {
    let mut value = serde_json::to_value(result).expect("results serialize");
    value["seed"] = json!(seed);
    value
}

fn random_label<R: Rng + ?Sized>(rng: &mut R, n: usize) -> BasisLabel {
    BasisLabel::from_index(rng.random_range(0..1usize << n), n)
}

fn describe(hidden: &HiddenSpec) -> String {
    match hidden {
        HiddenSpec::Deutsch { kind } => serde_json::to_value(kind)
            .unwrap()
            .as_str()
            .unwrap_or_default()
            .to_string(),
        HiddenSpec::DeutschJozsa {
            f: DjFunction::Constant(v),
            ..
        } => format!("constant {}", u8::from(*v)),
        HiddenSpec::DeutschJozsa {
            f: DjFunction::Balanced(ones),
            ..
        } => {
            let list: Vec<String> = ones.iter().map(ToString::to_string).collect();
            format!("balanced, f = 1 on {}", list.join(" "))
        }
        HiddenSpec::BernsteinVazirani { a, b } => format!("a = {a}, b = {}", u8::from(*b)),
        HiddenSpec::Simon { s, table } => {
            let pairs: Vec<String> = table.iter().map(|(x, y)| format!("{x}->{y}")).collect();
            format!("s = {s}, f: {}", pairs.join(" "))
        }
    }
}

fn decision(c: Classification) -> &'static str {
    match c {
        Classification::Constant => "constant",
        Classification::Balanced => "balanced",
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn join_labels(labels: &[BasisLabel]) -> String {
    labels.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn run_trial(args: &LessonArgs, n: usize, seed: u64) -> Result<Trial, Failure> {
    let mut rng = seeded_rng(seed);
    let mut text = String::new();
    let (record, correct) = match args.lesson {
        LessonName::Deutsch => {
            let inst = random_deutsch(&mut rng);
            let r = deutsch(&inst, seed)?;
            writeln!(text, "  hidden: {}", describe(&r.hidden)).unwrap();
            writeln!(text, "  measured: {}", u8::from(r.measured)).unwrap();
            writeln!(text, "  decision: {}", decision(r.decision)).unwrap();
            (record(seed, &r), r.correct)
        }
        LessonName::Dj => {
            let choice = if rng.random() {
                DjChoice::ConstantRandom
            } else {
                DjChoice::BalancedRandom
            };
            let inst = dj_blackbox(n, choice, &mut rng)?;
            let r = deutsch_jozsa(&inst, seed)?;
            writeln!(text, "  hidden: {}", describe(&r.hidden)).unwrap();
            writeln!(text, "  |amp(0...0)|: {:.6}", r.zero_amplitude).unwrap();
            writeln!(text, "  measured: {}", r.measured).unwrap();
            writeln!(text, "  decision: {}", decision(r.decision)).unwrap();
            (record(seed, &r), r.correct)
        }
        LessonName::Bv => {
            let a = random_label(&mut rng, n);
            let b = rng.random();
            let inst = bv_blackbox(n, &a, b)?;
            let r = bernstein_vazirani(&inst, seed)?;
            writeln!(text, "  hidden: {}", describe(&r.hidden)).unwrap();
            writeln!(text, "  kickback sign: {:+}", r.kickback_sign).unwrap();
            writeln!(text, "  recovered: {}", r.recovered).unwrap();
            (record(seed, &r), r.correct)
        }
        LessonName::Simon => {
            let s = random_label(&mut rng, n);
            let inst = simon_blackbox(n, &s, &mut rng)?;
            let r = simons(&inst, default_max_runs(n), seed)?;
            writeln!(text, "  hidden: {}", describe(&r.hidden)).unwrap();
            writeln!(text, "  runs: {}", r.runs).unwrap();
            writeln!(text, "  measured: {}", join_labels(&r.measurements)).unwrap();
            writeln!(text, "  equations: {}", join_labels(&r.equations)).unwrap();
            writeln!(text, "  all y.s = 0: {}", yes_no(r.all_orthogonal)).unwrap();
            match &r.outcome {
                SimonOutcome::Determined { s } => writeln!(text, "  decision: s = {s}").unwrap(),
                SimonOutcome::Undetermined { candidates } => {
                    writeln!(text, "  decision: undetermined, candidates {}", join_labels(candidates)).unwrap()
                }
            }
            (record(seed, &r), r.correct == Some(true))
        }
        LessonName::Grover | LessonName::QftGrover => {
            let marked = match &args.marked {
                Some(m) => m.clone(),
                None => random_label(&mut rng, n),
            };
            let r = if args.lesson == LessonName::Grover {
                grover(&marked, args.iterations, seed)?
            } else {
                grover_via_qft(&marked, args.iterations, seed)?
            };
            writeln!(text, "  marked: {}", r.plan.marked).unwrap();
            writeln!(text, "  iterations: {}", r.plan.iterations).unwrap();
            for (k, p) in r.trace.iter().enumerate() {
                writeln!(text, "  P(marked) after {}: {p:.6}", k + 1).unwrap();
            }
            writeln!(text, "  measured: {}", r.measured).unwrap();
            (record(seed, &r), r.correct)
        }
    };
    writeln!(text, "  correct: {}", yes_no(correct)).unwrap();
    Ok(Trial { record, text, correct })
}

fn qubit_count(args: &LessonArgs) -> Result<usize, Failure> {
    let default = DEFAULT_QUBITS.iter().find(|(l, _)| *l == args.lesson).map(|&(_, n)| n);
    match (args.lesson, args.qubits, &args.marked) {
        (LessonName::Deutsch, Some(1) | None, _) => Ok(1),
        (LessonName::Deutsch, Some(_), _) => Err(Failure::Usage("the Deutsch lesson always uses 1 input qubit".into())),
        (_, Some(0), _) => Err(Failure::Usage("--qubits must be at least 1".into())),
        (_, Some(q), Some(m)) if q != m.len() => Err(Failure::Usage(format!(
            "--qubits {q} does not match the {}-bit marked state {m}",
            m.len()
        ))),
        (_, Some(q), _) => Ok(q),
        (_, None, Some(m)) => Ok(m.len()),
        (_, None, None) => Ok(default.expect("every multi-qubit lesson has a default")),
    }
}

pub fn run_lesson(args: &LessonArgs, seed: u64) -> Result<String, Failure> {
    let name = args.lesson.label();
    if !args.lesson.is_grover() && (args.marked.is_some() || args.iterations.is_some()) {
        return Err(Failure::Usage(format!(
            "--marked and --iterations only apply to the Grover lessons, not {name}"
        )));
    }
    if args.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let n = qubit_count(args)?;
    let trials = (0..args.trials)
        .map(|t| run_trial(args, n, seed.wrapping_add(t as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    let correct = trials.iter().filter(|t| t.correct).count();

    if args.json {
        return Ok(to_json(&json!({
            "schema": 1,
            "command": "lesson",
            "lesson": name,
            "qubits": n,
            "seed": seed,
            "results": trials.iter().map(|t| &t.record).collect::<Vec<_>>(),
            "summary": { "correct": correct, "total": trials.len() },
        })));
    }
    let mut out = format!(
        "lesson {name}, {n} qubit{}, seed {seed}\n",
        if n == 1 { "" } else { "s" }
    );
    for (t, trial) in trials.iter().enumerate() {
        writeln!(out, "trial {t} (seed {})", seed.wrapping_add(t as u64)).unwrap();
        out.push_str(&trial.text);
    }
    writeln!(out, "correct: {correct}/{}", trials.len()).unwrap();
    Ok(out)
}
