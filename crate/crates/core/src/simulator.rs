//! Program execution: wavefunction inspection, measurement collapse and
//! multi-trial runs.
//!
//! Randomness comes from [`SimRng`] (SplitMix64, 64 bits of state). Trial `t`
//! of a run seeded with `s` draws from its own stream seeded with
//! `s ^ splitmix(t)`, so adding trials never perturbs earlier ones and trials
//! can execute in any order.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::program::{ClassicalRegister, Instruction, Program};
use crate::state::StateVector;

/// Deterministic generator used everywhere randomness is needed.
pub type SimRng = SplitMix64;

pub const DEFAULT_SEED: u64 = 0x5E_ED0F_C01A;

pub fn seeded_rng(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Independent stream for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> SimRng {
    let mix = SimRng::seed_from_u64(trial).next_u64();
    SimRng::seed_from_u64(seed ^ mix)
}

enum Op {
    Unitary { matrix: Vec<Complex64>, qubits: Vec<usize> },
    Measure { qubit: usize, creg: Option<usize> },
}

/// A program with every gate resolved to its matrix.
pub struct Compiled {
    n_qubits: usize,
    ops: Vec<Op>,
}

impl Compiled {
    pub fn new(program: &Program) -> Result<Self> {
        let mut ops = Vec::with_capacity(program.len());
        for item in program.instructions() {
            match item {
                Instruction::Gate { name, param, qubits } => {
                    let def = program.resolve(name, *param)?;
                    ops.push(Op::Unitary {
                        matrix: def.matrix().to_vec(),
                        qubits: qubits.clone(),
                    });
                }
                Instruction::Measure { qubit, creg } => ops.push(Op::Measure {
                    qubit: *qubit,
                    creg: *creg,
                }),
                Instruction::DefGate(_) => {}
            }
        }
        Ok(Self {
            n_qubits: program.n_qubits(),
            ops,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Runs every instruction on `state` in order.
    pub fn execute<R: Rng + ?Sized>(
        &self,
        state: &mut StateVector,
        rng: &mut R,
        creg: &mut ClassicalRegister,
    ) -> Result<()> {
        for op in &self.ops {
            match op {
                Op::Unitary { matrix, qubits } => state.apply_matrix(matrix, qubits)?,
                Op::Measure { qubit, creg: slot } => {
                    let bit = measure_collapse(state, *qubit, rng)?;
                    if let Some(slot) = slot {
                        creg.set(*slot, bit);
                    }
                }
            }
        }
        state.check_norm()
    }

    fn fresh_state(&self) -> Result<StateVector> {
        if self.n_qubits == 0 {
            return Err(Error::EmptyProgram);
        }
        StateVector::new_zero_state(self.n_qubits)
    }
}

/// Applies `program` to an existing state (which may be larger than the
/// program needs).
pub fn run_on<R: Rng + ?Sized>(
    state: &mut StateVector,
    program: &Program,
    rng: &mut R,
    creg: &mut ClassicalRegister,
) -> Result<()> {
    Compiled::new(program)?.execute(state, rng, creg)
}

/// Measures `qubit`, collapsing `state`. Consumes exactly one draw.
pub fn measure_collapse<R: Rng + ?Sized>(state: &mut StateVector, qubit: usize, rng: &mut R) -> Result<bool> {
    let p1 = state.probability_of_one(qubit)?;
    let p0 = state.norm_sqr() - p1;
    if p0 < 1e-12 && p1 < 1e-12 {
        return Err(Error::Internal(format!("qubit {qubit} has no measurable weight")));
    }
    let draw: f64 = rng.random();
    let bit = draw < p1 / (p0 + p1);
    state.collapse(qubit, bit)?;
    state.check_norm()?;
    Ok(bit)
}

/// Final state of one seeded execution (measurements included).
pub fn simulate(program: &Program, seed: u64) -> Result<(StateVector, ClassicalRegister)> {
    let compiled = Compiled::new(program)?;
    let mut state = compiled.fresh_state()?;
    let mut creg = ClassicalRegister::new();
    compiled.execute(&mut state, &mut seeded_rng(seed), &mut creg)?;
    Ok((state, creg))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplayOptions {
    pub precision: usize,
    pub column: bool,
    pub systems: Option<Vec<usize>>,
    pub show_systems: Option<Vec<bool>>,
}

impl Default for DisplayOptions {
    fn default() -> Self {
        Self {
            precision: 5,
            column: false,
            systems: None,
            show_systems: None,
        }
    }
}

impl DisplayOptions {
    fn groups(&self, n_qubits: usize) -> Result<Vec<(usize, bool)>> {
        if self.precision > 15 {
            return Err(Error::DisplayOptions("precision must be at most 15".into()));
        }
        let Some(systems) = &self.systems else {
            if self.show_systems.is_some() {
                return Err(Error::DisplayOptions("show_systems requires systems".into()));
            }
            return Ok(vec![(n_qubits, true)]);
        };
        if systems.contains(&0) {
            return Err(Error::DisplayOptions("system sizes must be positive".into()));
        }
        let total: usize = systems.iter().sum();
        if total != n_qubits {
            return Err(Error::DisplayOptions(format!(
                "systems sum to {total} but the state has {n_qubits} qubits"
            )));
        }
        let show = match &self.show_systems {
            Some(show) if show.len() != systems.len() => {
                return Err(Error::DisplayOptions(
                    "show_systems must have one entry per system".into(),
                ))
            }
            Some(show) => show.clone(),
            None => vec![true; systems.len()],
        };
        Ok(systems.iter().copied().zip(show).collect())
    }
}

fn format_component(x: f64, precision: usize) -> String {
    let s = format!("{x:.precision$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn format_amplitude(a: Complex64, precision: usize) -> String {
    let re = format_component(a.re, precision);
    let im = format_component(a.im, precision);
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ if im.starts_with('-') => format!("({re}{im}i)"),
        _ => format!("({re}+{im}i)"),
    }
}

/// Text form: `amp|bits⟩` terms, qubit 0 leftmost, joined by ` + ` (or one
/// per line with `column`). Amplitudes under `10^-precision` are omitted.
/// Hidden systems are dropped from the kets without merging duplicates.
pub fn render_wavefunction(state: &StateVector, opts: &DisplayOptions) -> Result<String> {
    let groups = opts.groups(state.n_qubits())?;
    let threshold = 10f64.powi(-(opts.precision as i32));
    let n = state.n_qubits();
    let mut terms = Vec::new();
    for (index, amp) in state.amplitudes().iter().enumerate() {
        if amp.norm() < threshold {
            continue;
        }
        let mut ket = String::new();
        let mut q = 0;
        for &(size, shown) in &groups {
            if shown {
                ket.push('|');
                for j in q..q + size {
                    ket.push(if (index >> (n - 1 - j)) & 1 == 1 { '1' } else { '0' });
                }
                ket.push('⟩');
            }
            q += size;
        }
        terms.push(format!("{}{ket}", format_amplitude(*amp, opts.precision)));
    }
    Ok(terms.join(if opts.column { "\n" } else { " + " }))
}

/// Seeded execution of `program` plus its rendering.
pub fn wavefunction(program: &Program, seed: u64, opts: &DisplayOptions) -> Result<(StateVector, String)> {
    let (state, _) = simulate(program, seed)?;
    let text = render_wavefunction(&state, opts)?;
    Ok((state, text))
}

/// Per-trial register rows and their aggregate counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResults {
    pub trials: usize,
    pub rows: Vec<Vec<u8>>,
    pub histogram: BTreeMap<String, usize>,
}

impl TrialResults {
    fn from_rows(rows: Vec<Vec<u8>>) -> Self {
        let mut histogram = BTreeMap::new();
        for row in &rows {
            let key: String = row.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect();
            *histogram.entry(key).or_insert(0) += 1;
        }
        Self {
            trials: rows.len(),
            rows,
            histogram,
        }
    }
}

/// Runs `trials` independent shots. Each row lists the requested register
/// slots in the requested order; with `cregs = None` it lists every slot up to
/// the largest one the program writes. Slots never written read as 0.
pub fn run(program: &Program, cregs: Option<&[usize]>, trials: usize, seed: u64) -> Result<TrialResults> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let compiled = Compiled::new(program)?;
    compiled.fresh_state()?;
    let slots: Vec<usize> = match cregs {
        Some(c) => c.to_vec(),
        None => (0..program.max_creg().map_or(0, |m| m + 1)).collect(),
    };
    let one_trial = |t: usize| -> Result<Vec<u8>> {
        let mut state = compiled.fresh_state()?;
        let mut creg = ClassicalRegister::new();
        compiled.execute(&mut state, &mut trial_rng(seed, t as u64), &mut creg)?;
        Ok(slots.iter().map(|&s| creg.get(s) as u8).collect())
    };
    #[cfg(feature = "parallel")]
    let rows: Result<Vec<_>> = {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(one_trial).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Result<Vec<_>> = (0..trials).map(one_trial).collect();
    Ok(TrialResults::from_rows(rows?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementOptions {
    /// Register slots to report, in order. Defaults to every written slot.
    pub creg_order: Option<Vec<usize>>,
    pub runs: usize,
    pub print_m: bool,
    pub return_m: bool,
}

impl Default for MeasurementOptions {
    fn default() -> Self {
        Self {
            creg_order: None,
            runs: 1,
            print_m: true,
            return_m: false,
        }
    }
}

/// Histogram of repeated runs. Prints a sorted table to `out` when
/// `print_m` is set and returns the counts when `return_m` is set.
pub fn measurement_histogram(
    program: &Program,
    opts: &MeasurementOptions,
    seed: u64,
    out: &mut dyn Write,
) -> Result<Option<BTreeMap<String, usize>>> {
    if program.max_creg().is_none() {
        return Err(Error::NoMeasurements);
    }
    let results = run(program, opts.creg_order.as_deref(), opts.runs, seed)?;
    if opts.print_m {
        write_histogram(&results.histogram, results.trials, out)
            .map_err(|e| Error::Internal(format!("write failed: {e}")))?;
    }
    Ok(opts.return_m.then_some(results.histogram))
}

pub fn write_histogram(histogram: &BTreeMap<String, usize>, runs: usize, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "Measurement results ({runs} runs):")?;
    for (bits, count) in histogram {
        writeln!(out, "|{bits}⟩ : {count}")?;
    }
    Ok(())
}
