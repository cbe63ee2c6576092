use std::f64::consts::PI;

use serde::Serialize;

use super::kickback::measure_register;
use crate::composite::{hadamard_layer, n_not, qft, qft_dagger, x_transformation};
use crate::error::{Error, Result};
use crate::program::{Instruction, Program};
use crate::simulator::{run_on, seeded_rng};
use crate::state::{BasisLabel, StateVector};
use crate::ClassicalRegister;

/// Iteration count that brings P(marked) closest to 1: the k nearest to
/// π/(4θ) − ½ with sin θ = 1/√N, which is ≈ π/4·√N for large N. Never
/// less than 1.
pub fn optimal_grover_iterations(num_states: usize) -> usize {
    let theta = (1.0 / (num_states.max(1) as f64).sqrt()).asin();
    ((PI / (4.0 * theta) - 0.5).round().max(1.0)) as usize
}

/// P(marked) after `k` iterations from the closed form sin²((2k+1)θ).
pub fn grover_closed_form(n: usize, k: usize) -> f64 {
    let theta = (1.0 / (2f64.powi(n as i32)).sqrt()).asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Diffusion {
    Hadamard,
    Qft,
}

/// Qubit layout and schedule for one search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroverPlan {
    pub n_qubits: usize,
    pub marked: BasisLabel,
    pub iterations: usize,
    pub diffusion: Diffusion,
}

impl GroverPlan {
    pub fn new(marked: BasisLabel, iterations: Option<usize>, diffusion: Diffusion) -> Result<Self> {
        let n = marked.len();
        if n < 2 {
            return Err(Error::InvalidArgument("Grover search needs at least 2 qubits".into()));
        }
        if 2 * n - 1 > crate::state::MAX_QUBITS {
            return Err(Error::TooLarge(2 * n - 1));
        }
        Ok(Self {
            n_qubits: n,
            marked,
            iterations: iterations.unwrap_or_else(|| optimal_grover_iterations(1 << n)),
            diffusion,
        })
    }

    pub fn main_qubits(&self) -> Vec<usize> {
        (0..self.n_qubits).collect()
    }

    /// The |−⟩ qubit shared by the oracle and the diffusion flip.
    pub fn phase_ancilla(&self) -> usize {
        self.n_qubits
    }

    pub fn work_ancillas(&self) -> Vec<usize> {
        (self.n_qubits + 1..2 * self.n_qubits - 1).collect()
    }

    pub fn total_qubits(&self) -> usize {
        2 * self.n_qubits - 1
    }

    fn flip(&self, p: &mut Program, pattern: &BasisLabel) -> Result<()> {
        let main = self.main_qubits();
        x_transformation(p, &main, pattern)?;
        n_not(p, &main, self.phase_ancilla(), &self.work_ancillas())?;
        x_transformation(p, &main, pattern)
    }

    /// Uniform superposition on the main register, |−⟩ on the ancilla.
    pub fn preparation(&self) -> Result<Program> {
        let mut p = Program::new();
        let a = self.phase_ancilla();
        p.inst([Instruction::gate("X", &[a]), Instruction::gate("H", &[a])])?;
        hadamard_layer(&mut p, &self.main_qubits())?;
        Ok(p)
    }

    /// Sign flip on the marked state.
    pub fn oracle(&self) -> Result<Program> {
        let mut p = Program::new();
        self.flip(&mut p, &self.marked)?;
        Ok(p)
    }

    /// Reflection about the uniform state, up to a global −1.
    pub fn diffusion(&self) -> Result<Program> {
        let main = self.main_qubits();
        let mut p = Program::new();
        match self.diffusion {
            Diffusion::Hadamard => hadamard_layer(&mut p, &main)?,
            Diffusion::Qft => qft_dagger(&mut p, &main)?,
        }
        self.flip(&mut p, &BasisLabel::zeros(self.n_qubits))?;
        match self.diffusion {
            Diffusion::Hadamard => hadamard_layer(&mut p, &main)?,
            Diffusion::Qft => qft(&mut p, &main)?,
        }
        Ok(p)
    }

    pub fn iteration(&self) -> Result<Program> {
        self.oracle()?.concat(&self.diffusion()?)
    }

    /// Preparation followed by every iteration, without measurement.
    pub fn program(&self) -> Result<Program> {
        let step = self.iteration()?;
        let mut p = self.preparation()?;
        for _ in 0..self.iterations {
            p = p.concat(&step)?;
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroverResult {
    pub plan: GroverPlan,
    /// P(marked) on the main register after each iteration.
    pub trace: Vec<f64>,
    pub final_probability: f64,
    pub measured: BasisLabel,
    pub correct: bool,
}

/// Runs the plan, recording P(marked) after every iteration, then samples
/// the main register once.
pub fn run_plan(plan: &GroverPlan, seed: u64) -> Result<GroverResult> {
    let (state, trace) = evolve(plan)?;
    let main = plan.main_qubits();
    let final_probability = state.marginal_probability(&main, &plan.marked)?;
    let mut state = state;
    let measured = measure_register(&mut state, &main, &mut seeded_rng(seed))?;
    Ok(GroverResult {
        plan: plan.clone(),
        correct: measured == plan.marked,
        trace,
        final_probability,
        measured,
    })
}

/// Final state and per-iteration trace.
pub fn evolve(plan: &GroverPlan) -> Result<(StateVector, Vec<f64>)> {
    let mut state = StateVector::new_zero_state(plan.total_qubits())?;
    let mut rng = seeded_rng(0);
    let mut creg = ClassicalRegister::new();
    run_on(&mut state, &plan.preparation()?, &mut rng, &mut creg)?;
    let step = plan.iteration()?;
    let main = plan.main_qubits();
    let mut trace = Vec::with_capacity(plan.iterations);
    for _ in 0..plan.iterations {
        run_on(&mut state, &step, &mut rng, &mut creg)?;
        trace.push(state.marginal_probability(&main, &plan.marked)?);
    }
    Ok((state, trace))
}

pub fn grover(marked: &BasisLabel, iterations: Option<usize>, seed: u64) -> Result<GroverResult> {
    run_plan(&GroverPlan::new(marked.clone(), iterations, Diffusion::Hadamard)?, seed)
}

pub fn grover_via_qft(marked: &BasisLabel, iterations: Option<usize>, seed: u64) -> Result<GroverResult> {
    run_plan(&GroverPlan::new(marked.clone(), iterations, Diffusion::Qft)?, seed)
}
