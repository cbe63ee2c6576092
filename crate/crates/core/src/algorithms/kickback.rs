//! Single-query algorithms: Deutsch, Deutsch-Jozsa and Bernstein-Vazirani.
//! All three put the output qubit in |−⟩ so the oracle writes f(x) into a
//! sign, then read the main register after a second Hadamard layer.

use rand::Rng;
use serde::Serialize;

use crate::blackbox::{BlackboxInstance, DjFunction, HiddenSpec};
use crate::composite::hadamard_layer;
use crate::error::{Error, Result};
use crate::program::{Instruction, Program};
use crate::simulator::{measure_collapse, run_on, seeded_rng};
use crate::state::{BasisLabel, StateVector};
use crate::ClassicalRegister;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Constant,
    Balanced,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeutschResult {
    pub hidden: HiddenSpec,
    pub measured: bool,
    pub decision: Classification,
    pub correct: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeutschJozsaResult {
    pub n: usize,
    pub hidden: HiddenSpec,
    /// |⟨0…0|ψ⟩| on the main register just before measurement.
    pub zero_amplitude: f64,
    pub measured: BasisLabel,
    pub decision: Classification,
    pub correct: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BernsteinVaziraniResult {
    pub n: usize,
    pub hidden: HiddenSpec,
    /// Sign of the pre-measurement state relative to |a⟩|1⟩, i.e. (−1)^b.
    pub kickback_sign: i8,
    pub recovered: BasisLabel,
    pub correct: bool,
}

/// |1⟩ on the output qubits, H on everything, the oracle, H on everything.
/// The outputs sit in |−⟩ while the oracle runs and end back in |1⟩.
pub fn kickback_program(instance: &BlackboxInstance) -> Result<Program> {
    let mut p = Program::new();
    for &q in &instance.ancilla_out {
        p.inst([Instruction::gate("X", &[q]), Instruction::gate("H", &[q])])?;
    }
    hadamard_layer(&mut p, &instance.main_qubits)?;
    let mut p = p.concat(&instance.fragment)?;
    hadamard_layer(&mut p, &instance.main_qubits)?;
    hadamard_layer(&mut p, &instance.ancilla_out)?;
    Ok(p)
}

/// Pre-measurement state of the single-query circuit.
pub fn kickback_state(instance: &BlackboxInstance) -> Result<StateVector> {
    let program = kickback_program(instance)?;
    let mut state = StateVector::new_zero_state(instance.n_qubits())?;
    run_on(&mut state, &program, &mut seeded_rng(0), &mut ClassicalRegister::new())?;
    Ok(state)
}

/// Measures `qubits` in order, collapsing `state`.
pub fn measure_register<R: Rng + ?Sized>(state: &mut StateVector, qubits: &[usize], rng: &mut R) -> Result<BasisLabel> {
    let bits = qubits
        .iter()
        .map(|&q| measure_collapse(state, q, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(BasisLabel::new(bits))
}

fn expect_single_input(instance: &BlackboxInstance) -> Result<()> {
    match instance.hidden {
        HiddenSpec::Deutsch { .. } => Ok(()),
        _ => Err(Error::InvalidArgument("expected a Deutsch oracle".into())),
    }
}

pub fn deutsch(instance: &BlackboxInstance, seed: u64) -> Result<DeutschResult> {
    expect_single_input(instance)?;
    let mut state = kickback_state(instance)?;
    let measured = measure_collapse(&mut state, instance.main_qubits[0], &mut seeded_rng(seed))?;
    let decision = if measured {
        Classification::Balanced
    } else {
        Classification::Constant
    };
    let HiddenSpec::Deutsch { kind } = instance.hidden else {
        unreachable!()
    };
    Ok(DeutschResult {
        hidden: instance.hidden.clone(),
        measured,
        decision,
        correct: kind.is_constant() == (decision == Classification::Constant),
    })
}

pub fn deutsch_jozsa(instance: &BlackboxInstance, seed: u64) -> Result<DeutschJozsaResult> {
    let HiddenSpec::DeutschJozsa { n, f } = &instance.hidden else {
        return Err(Error::InvalidArgument("expected a Deutsch-Jozsa oracle".into()));
    };
    let mut state = kickback_state(instance)?;
    let zeros = BasisLabel::zeros(*n);
    let zero_amplitude = state.marginal_probability(&instance.main_qubits, &zeros)?.sqrt();
    let measured = measure_register(&mut state, &instance.main_qubits, &mut seeded_rng(seed))?;
    let decision = if measured.is_zero() {
        Classification::Constant
    } else {
        Classification::Balanced
    };
    let truth = match f {
        DjFunction::Constant(_) => Classification::Constant,
        DjFunction::Balanced(_) => Classification::Balanced,
    };
    Ok(DeutschJozsaResult {
        n: *n,
        hidden: instance.hidden.clone(),
        zero_amplitude,
        measured,
        decision,
        correct: decision == truth,
    })
}

pub fn bernstein_vazirani(instance: &BlackboxInstance, seed: u64) -> Result<BernsteinVaziraniResult> {
    let HiddenSpec::BernsteinVazirani { a, .. } = &instance.hidden else {
        return Err(Error::InvalidArgument("expected a Bernstein-Vazirani oracle".into()));
    };
    let mut state = kickback_state(instance)?;
    let kickback_sign = kickback_sign(&state, instance, a);
    let recovered = measure_register(&mut state, &instance.main_qubits, &mut seeded_rng(seed))?;
    Ok(BernsteinVaziraniResult {
        n: a.len(),
        hidden: instance.hidden.clone(),
        kickback_sign,
        correct: recovered == *a,
        recovered,
    })
}

/// ⟨a|⟨1|ψ⟩ as a sign; 0 if the state is elsewhere.
fn kickback_sign(state: &StateVector, instance: &BlackboxInstance, a: &BasisLabel) -> i8 {
    let n = state.n_qubits();
    let out = instance.ancilla_out[0];
    let mut base = 0usize;
    for (&q, &b) in instance.main_qubits.iter().zip(a.bits()) {
        if b {
            base |= 1 << (n - 1 - q);
        }
    }
    let overlap = state.amplitudes()[base | 1 << (n - 1 - out)];
    if (overlap.re - 1.0).abs() < 1e-9 {
        1
    } else if (overlap.re + 1.0).abs() < 1e-9 {
        -1
    } else {
        0
    }
}
