//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string. The `*_json` functions hold the
//! logic and are plain Rust so they can be tested natively.

use qlesson::algorithms::{grover_closed_form, run_plan, Diffusion, GroverPlan};
use qlesson::composite::{qft, qft_dagger};
use qlesson::simulator::{render_wavefunction, simulate};
use qlesson::{parse, BasisLabel, DisplayOptions, Instruction, Program};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn display(precision: usize) -> DisplayOptions {
    DisplayOptions {
        precision,
        ..DisplayOptions::default()
    }
}

fn state_json(program: &Program, seed: u64, precision: usize) -> Result<serde_json::Value, String> {
    let (state, _) = simulate(program, seed).map_err(|e| e.to_string())?;
    let text = render_wavefunction(&state, &display(precision)).map_err(|e| e.to_string())?;
    let probabilities: Vec<f64> = state.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    Ok(json!({ "n_qubits": state.n_qubits(), "text": text, "probabilities": probabilities }))
}

/// Simulates Quil source once and renders the final state.
pub fn wavefunction_json(source: &str, seed: u64, precision: usize) -> Result<String, String> {
    let program = parse(source).map_err(|e| e.render(source))?;
    state_json(&program, seed, precision).map(|v| v.to_string())
}

/// P(marked) after each iteration, next to the closed form.
pub fn grover_curve_json(marked: &str, iterations: usize, use_qft: bool, seed: u64) -> Result<String, String> {
    let marked: BasisLabel = marked.trim().parse().map_err(|e: qlesson::Error| e.to_string())?;
    if marked.len() > 8 {
        return Err("the demo is limited to 8 search qubits".into());
    }
    if iterations > 64 {
        return Err("the demo is limited to 64 iterations".into());
    }
    let diffusion = if use_qft { Diffusion::Qft } else { Diffusion::Hadamard };
    let plan = GroverPlan::new(marked, Some(iterations), diffusion).map_err(|e| e.to_string())?;
    let n = plan.n_qubits;
    let result = run_plan(&plan, seed).map_err(|e| e.to_string())?;
    let closed: Vec<f64> = (1..=iterations).map(|k| grover_closed_form(n, k)).collect();
    Ok(json!({
        "marked": result.plan.marked,
        "trace": result.trace,
        "closed_form": closed,
        "measured": result.measured,
        "correct": result.correct,
    })
    .to_string())
}

/// QFT (or its inverse) of a computational basis state such as `"011"`.
pub fn qft_basis_json(bits: &str, inverse: bool, precision: usize) -> Result<String, String> {
    let label: BasisLabel = bits.trim().parse().map_err(|e: qlesson::Error| e.to_string())?;
    let n = label.len();
    if !(1..=10).contains(&n) {
        return Err("enter between 1 and 10 bits".into());
    }
    let qubits: Vec<usize> = (0..n).collect();
    let mut program = Program::new();
    // I on every qubit fixes the register width even for |0…0⟩.
    for q in 0..n {
        let gate = if label.bits()[q] { "X" } else { "I" };
        program.push(Instruction::gate(gate, &[q])).map_err(|e| e.to_string())?;
    }
    if inverse {
        qft_dagger(&mut program, &qubits)
    } else {
        qft(&mut program, &qubits)
    }
    .map_err(|e| e.to_string())?;
    state_json(&program, 0, precision).map(|v| v.to_string())
}

#[wasm_bindgen]
pub fn wavefunction(source: &str, seed: u32, precision: usize) -> Result<String, JsValue> {
    wavefunction_json(source, u64::from(seed), precision).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn grover_curve(marked: &str, iterations: usize, use_qft: bool, seed: u32) -> Result<String, JsValue> {
    grover_curve_json(marked, iterations, use_qft, u64::from(seed)).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn qft_basis(bits: &str, inverse: bool, precision: usize) -> Result<String, JsValue> {
    qft_basis_json(bits, inverse, precision).map_err(|e| JsValue::from_str(&e))
}
