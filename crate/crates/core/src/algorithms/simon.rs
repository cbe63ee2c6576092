use serde::Serialize;

use super::gf2::{simons_solver, Gf2System};
use super::kickback::measure_register;
use crate::blackbox::{BlackboxInstance, HiddenSpec};
use crate::composite::hadamard_layer;
use crate::error::{Error, Result};
use crate::program::Program;
use crate::simulator::{run_on, seeded_rng, trial_rng};
use crate::state::{BasisLabel, StateVector};
use crate::ClassicalRegister;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SimonOutcome {
    Determined {
        s: BasisLabel,
    },
    /// Run budget exhausted with more than one candidate left.
    Undetermined {
        candidates: Vec<BasisLabel>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimonResult {
    pub n: usize,
    pub hidden: HiddenSpec,
    pub runs: usize,
    /// Every measured main-register value, in run order.
    pub measurements: Vec<BasisLabel>,
    /// The unique nonzero values fed to the solver.
    pub equations: Vec<BasisLabel>,
    /// Whether each measurement satisfied y·s ≡ 0 against the hidden key.
    pub all_orthogonal: bool,
    pub outcome: SimonOutcome,
    /// `None` when undetermined.
    pub correct: Option<bool>,
}

pub fn default_max_runs(n: usize) -> usize {
    20 * n
}

/// Repeats H, oracle, H, measure until the solver leaves one candidate s′,
/// then confirms it classically: f(0) = f(s′) keeps s′, otherwise s = 0.
pub fn simons(instance: &BlackboxInstance, max_runs: usize, seed: u64) -> Result<SimonResult> {
    let HiddenSpec::Simon { s, .. } = &instance.hidden else {
        return Err(Error::InvalidArgument("expected a Simon oracle".into()));
    };
    if max_runs == 0 {
        return Err(Error::InvalidArgument("max_runs must be at least 1".into()));
    }
    let n = s.len();
    let prepared = prepared_state(instance)?;
    let mut sys = Gf2System::new(n);
    let mut measurements = Vec::new();
    let mut candidates = simons_solver(&sys);
    let mut outcome = None;

    for run in 0..max_runs {
        let mut state = prepared.clone();
        let y = measure_register(&mut state, &instance.main_qubits, &mut trial_rng(seed, run as u64))?;
        measurements.push(y.clone());
        if y.is_zero() || sys.rows().contains(&y) {
            continue;
        }
        sys.push(y)?;
        candidates = simons_solver(&sys);
        match candidates.as_slice() {
            [] => {
                outcome = Some(BasisLabel::zeros(n));
                break;
            }
            [only] => {
                let f0 = instance.hidden.eval_f(&BasisLabel::zeros(n))?;
                let fs = instance.hidden.eval_f(only)?;
                outcome = Some(if f0 == fs { only.clone() } else { BasisLabel::zeros(n) });
                break;
            }
            _ => {}
        }
    }

    let all_orthogonal = measurements.iter().all(|y| !y.dot(s).unwrap_or(true));
    let (outcome, correct) = match outcome {
        Some(found) => {
            let ok = found == *s;
            (SimonOutcome::Determined { s: found }, Some(ok))
        }
        None => (SimonOutcome::Undetermined { candidates }, None),
    };
    Ok(SimonResult {
        n,
        hidden: instance.hidden.clone(),
        runs: measurements.len(),
        equations: sys.rows().to_vec(),
        measurements,
        all_orthogonal,
        outcome,
        correct,
    })
}

/// H, oracle, H with the output register left in |0…0⟩.
fn prepared_state(instance: &BlackboxInstance) -> Result<StateVector> {
    let mut p = Program::new();
    hadamard_layer(&mut p, &instance.main_qubits)?;
    let mut p = p.concat(&instance.fragment)?;
    hadamard_layer(&mut p, &instance.main_qubits)?;
    let mut state = StateVector::new_zero_state(instance.n_qubits())?;
    run_on(&mut state, &p, &mut seeded_rng(0), &mut ClassicalRegister::new())?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackbox::simon_blackbox;

    #[test]
    fn recovers_nonzero_and_zero_keys() {
        let mut rng = seeded_rng(11);
        for (n, key) in [(3, "110"), (2, "00"), (3, "000"), (2, "10")] {
            let s: BasisLabel = key.parse().unwrap();
            let inst = simon_blackbox(n, &s, &mut rng).unwrap();
            let r = simons(&inst, default_max_runs(n), 4).unwrap();
            assert!(r.all_orthogonal);
            assert_eq!(r.outcome, SimonOutcome::Determined { s }, "{r:?}");
            assert_eq!(r.correct, Some(true));
        }
    }

    #[test]
    fn one_run_budget_can_stay_undetermined() {
        let mut rng = seeded_rng(2);
        let inst = simon_blackbox(4, &"1010".parse().unwrap(), &mut rng).unwrap();
        let r = simons(&inst, 1, 0).unwrap();
        assert!(matches!(r.outcome, SimonOutcome::Undetermined { .. }));
        assert_eq!(r.correct, None);
        assert!(simons(&inst, 0, 0).is_err());
    }
}
