//! Multi-gate building blocks appended to a [`Program`].
//!
//! N-controlled operations use a CCNOT ladder: the first two controls are
//! folded into ancilla 0, each further control is folded with the previous
//! ancilla, until one control and one ancilla remain. The action is applied
//! doubly controlled on that final pair and the ladder is then undone, which
//! returns every ancilla to |0⟩. This needs `max(N − 2, 0)` ancillas.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::program::{Instruction, Program};
use crate::state::BasisLabel;

/// Operation applied when every control reads 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ControlAction {
    X(usize),
    Z(usize),
    Phase(usize, f64),
    Swap(usize, usize),
}

impl ControlAction {
    /// Builds an action from its textual kind (`X`, `Z`, `PHASE`, `SWAP`).
    pub fn from_parts(kind: &str, targets: &[usize], angle: Option<f64>) -> Result<Self> {
        match (kind, targets, angle) {
            ("X", &[t], None) => Ok(Self::X(t)),
            ("Z", &[t], None) => Ok(Self::Z(t)),
            ("PHASE", &[t], Some(a)) => Ok(Self::Phase(t, a)),
            ("SWAP", &[a, b], None) => Ok(Self::Swap(a, b)),
            _ => Err(Error::InvalidArgument(format!(
                "unsupported controlled action {kind} on {targets:?}"
            ))),
        }
    }

    fn targets(&self) -> Vec<usize> {
        match *self {
            Self::X(t) | Self::Z(t) | Self::Phase(t, _) => vec![t],
            Self::Swap(a, b) => vec![a, b],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ControlSpec {
    pub controls: Vec<usize>,
    pub ancillas: Vec<usize>,
    pub actions: Vec<ControlAction>,
}

fn gate(name: &str, qubits: &[usize]) -> Instruction {
    Instruction::gate(name, qubits)
}

fn cphase(angle: f64, control: usize, target: usize) -> Instruction {
    Instruction::gate_with("CPHASE", angle, &[control, target])
}

/// X on every qubit whose pattern bit is 0, so `pattern` maps to |1…1⟩.
pub fn x_transformation(p: &mut Program, qubits: &[usize], pattern: &BasisLabel) -> Result<()> {
    if qubits.len() != pattern.len() {
        return Err(Error::BitLength {
            expected: qubits.len(),
            found: pattern.len(),
        });
    }
    let flips: Vec<Instruction> = qubits
        .iter()
        .zip(pattern.bits())
        .filter(|(_, &b)| !b)
        .map(|(&q, _)| gate("X", &[q]))
        .collect();
    p.inst(flips)?;
    Ok(())
}

pub fn hadamard_layer(p: &mut Program, qubits: &[usize]) -> Result<()> {
    p.inst(qubits.iter().map(|&q| gate("H", &[q])))?;
    Ok(())
}

fn check_disjoint(groups: &[(&'static str, &[usize])]) -> Result<()> {
    for (i, (name, qs)) in groups.iter().enumerate() {
        for (j, q) in qs.iter().enumerate() {
            if qs[..j].contains(q) {
                return Err(Error::DuplicateQubit(*q));
            }
            for (other, os) in &groups[i + 1..] {
                if os.contains(q) {
                    return Err(Error::QubitOverlap {
                        qubit: *q,
                        first: name,
                        second: other,
                    });
                }
            }
        }
    }
    Ok(())
}

fn required_ancillas(controls: usize) -> usize {
    controls.saturating_sub(2)
}

fn check_ancilla_count(controls: &[usize], ancillas: &[usize]) -> Result<()> {
    if controls.is_empty() {
        return Err(Error::InvalidArgument("at least one control is required".into()));
    }
    let needed = required_ancillas(controls.len());
    if ancillas.len() < needed {
        return Err(Error::InsufficientAncillas {
            controls: controls.len(),
            needed,
            found: ancillas.len(),
        });
    }
    Ok(())
}

/// Compute half of the ladder and the final control pair.
fn ladder(controls: &[usize], ancillas: &[usize]) -> (Vec<Instruction>, (usize, usize)) {
    let n = controls.len();
    debug_assert!(n >= 2);
    if n == 2 {
        return (Vec::new(), (controls[0], controls[1]));
    }
    let mut steps = vec![gate("CCNOT", &[controls[0], controls[1], ancillas[0]])];
    for i in 2..n - 1 {
        steps.push(gate("CCNOT", &[controls[i], ancillas[i - 2], ancillas[i - 1]]));
    }
    (steps, (controls[n - 1], ancillas[n - 3]))
}

/// X on `target` exactly when every control is 1; ancillas must start in |0⟩
/// and are returned there.
pub fn n_not(p: &mut Program, controls: &[usize], target: usize, ancillas: &[usize]) -> Result<()> {
    n_control_u(
        p,
        &ControlSpec {
            controls: controls.to_vec(),
            ancillas: ancillas.to_vec(),
            actions: vec![ControlAction::X(target)],
        },
    )
}

/// Applies each action in order, controlled on all of `spec.controls`.
pub fn n_control_u(p: &mut Program, spec: &ControlSpec) -> Result<()> {
    check_ancilla_count(&spec.controls, &spec.ancillas)?;
    let used = &spec.ancillas[..required_ancillas(spec.controls.len())];
    let mut targets: Vec<usize> = spec.actions.iter().flat_map(ControlAction::targets).collect();
    targets.sort_unstable();
    targets.dedup();
    check_disjoint(&[("controls", &spec.controls), ("ancillas", used), ("targets", &targets)])?;
    for action in &spec.actions {
        if let ControlAction::Swap(a, b) = action {
            if a == b {
                return Err(Error::DuplicateQubit(*a));
            }
        }
    }

    let mut body = Vec::new();
    if let [c] = spec.controls[..] {
        for action in &spec.actions {
            body.push(match *action {
                ControlAction::X(t) => gate("CNOT", &[c, t]),
                ControlAction::Z(t) => gate("CZ", &[c, t]),
                ControlAction::Phase(t, a) => cphase(a, c, t),
                ControlAction::Swap(a, b) => gate("CSWAP", &[c, a, b]),
            });
        }
        p.inst(body)?;
        return Ok(());
    }

    let (compute, (a, b)) = ladder(&spec.controls, used);
    body.extend(compute.iter().cloned());
    for action in &spec.actions {
        doubly_controlled(&mut body, a, b, *action);
    }
    body.extend(compute.into_iter().rev());
    p.inst(body)?;
    Ok(())
}

fn doubly_controlled(out: &mut Vec<Instruction>, a: usize, b: usize, action: ControlAction) {
    match action {
        ControlAction::X(t) => out.push(gate("CCNOT", &[a, b, t])),
        ControlAction::Z(t) => {
            out.push(gate("H", &[t]));
            out.push(gate("CCNOT", &[a, b, t]));
            out.push(gate("H", &[t]));
        }
        ControlAction::Phase(t, angle) => cc_phase(out, a, b, t, angle),
        ControlAction::Swap(s, t) => {
            // SWAP = CNOT(t→s) · CNOT(s→t) · CNOT(t→s); only the middle one
            // needs the extra controls.
            out.push(gate("CNOT", &[t, s]));
            ccc_x(out, a, b, s, t);
            out.push(gate("CNOT", &[t, s]));
        }
    }
}

/// Phase `angle` on |1⟩ of `t` when `a` and `b` are both 1, using
/// square-root phases: φ/2·(a + b − a⊕b) = φ·ab.
fn cc_phase(out: &mut Vec<Instruction>, a: usize, b: usize, t: usize, angle: f64) {
    let half = angle / 2.0;
    out.push(cphase(half, b, t));
    out.push(gate("CNOT", &[a, b]));
    out.push(cphase(-half, b, t));
    out.push(gate("CNOT", &[a, b]));
    out.push(cphase(half, a, t));
}

/// Three-control phase: φ/2·(c + ab − c⊕ab) = φ·abc.
fn ccc_phase(out: &mut Vec<Instruction>, a: usize, b: usize, c: usize, t: usize, angle: f64) {
    let half = angle / 2.0;
    out.push(cphase(half, c, t));
    out.push(gate("CCNOT", &[a, b, c]));
    out.push(cphase(-half, c, t));
    out.push(gate("CCNOT", &[a, b, c]));
    cc_phase(out, a, b, t, half);
}

fn ccc_x(out: &mut Vec<Instruction>, a: usize, b: usize, c: usize, t: usize) {
    out.push(gate("H", &[t]));
    ccc_phase(out, a, b, c, t, PI);
    out.push(gate("H", &[t]));
}

fn qft_instructions(qubits: &[usize]) -> Result<Vec<Instruction>> {
    if qubits.is_empty() {
        return Err(Error::InvalidArgument("QFT needs at least one qubit".into()));
    }
    let m = qubits.len();
    let mut out = Vec::with_capacity(m * (m + 1) / 2);
    for j in 0..m {
        out.push(gate("H", &[qubits[j]]));
        for k in j + 1..m {
            let angle = PI / (1u64 << (k - j)) as f64;
            out.push(cphase(angle, qubits[k], qubits[j]));
        }
    }
    Ok(out)
}

/// Swap-free QFT: per qubit in listed order, H then CPHASE(π/2^(k−j)) from
/// each later qubit. Realizes the DFT followed by a bit reversal of the
/// output index.
pub fn qft(p: &mut Program, qubits: &[usize]) -> Result<()> {
    p.inst(qft_instructions(qubits)?)?;
    Ok(())
}

/// Mirror image of [`qft`] with negated phases.
pub fn qft_dagger(p: &mut Program, qubits: &[usize]) -> Result<()> {
    let mut items = qft_instructions(qubits)?;
    items.reverse();
    for item in &mut items {
        if let Instruction::Gate { param: Some(angle), .. } = item {
            *angle = -*angle;
        }
    }
    p.inst(items)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{run_on, seeded_rng};
    use crate::state::StateVector;
    use crate::ClassicalRegister;

    fn apply(p: &Program, state: &StateVector) -> StateVector {
        let mut s = state.clone();
        run_on(&mut s, p, &mut seeded_rng(0), &mut ClassicalRegister::new()).unwrap();
        s
    }

    fn basis(n: usize, bits: &str) -> StateVector {
        StateVector::basis_state(n, bits.parse::<BasisLabel>().unwrap().index()).unwrap()
    }

    fn is_basis(s: &StateVector, bits: &str) -> bool {
        s.approx_eq_up_to_global_phase(&basis(s.n_qubits(), bits), 1e-10)
            .unwrap()
    }

    #[test]
    fn x_transformation_targets_zero_bits() {
        let mut p = Program::new();
        x_transformation(&mut p, &[0, 1, 2], &"001".parse().unwrap()).unwrap();
        assert_eq!(p.instructions(), &[gate("X", &[0]), gate("X", &[1])]);
        assert!(is_basis(&apply(&p, &basis(3, "000")), "110"));
        assert!(is_basis(&apply(&p, &basis(3, "001")), "111"));

        let mut q = Program::new();
        x_transformation(&mut q, &[0, 1], &"11".parse().unwrap()).unwrap();
        assert!(q.is_empty());
        assert!(x_transformation(&mut q, &[0, 1], &"1".parse().unwrap()).is_err());
    }

    #[test]
    fn n_not_on_three_controls() {
        let mut p = Program::new();
        n_not(&mut p, &[0, 1, 2], 3, &[4]).unwrap();
        assert!(is_basis(&apply(&p, &basis(5, "11100")), "11110"));
        assert!(is_basis(&apply(&p, &basis(5, "01100")), "01100"));
        assert!(is_basis(&apply(&p, &basis(5, "11110")), "11100"));
    }

    #[test]
    fn small_control_counts_use_direct_gates() {
        let mut p = Program::new();
        n_not(&mut p, &[0], 1, &[]).unwrap();
        assert_eq!(p.instructions(), &[gate("CNOT", &[0, 1])]);
        let mut p = Program::new();
        n_not(&mut p, &[0, 1], 2, &[]).unwrap();
        assert_eq!(p.instructions(), &[gate("CCNOT", &[0, 1, 2])]);
    }

    #[test]
    fn n_not_argument_errors() {
        let mut p = Program::new();
        assert!(matches!(
            n_not(&mut p, &[0, 1, 2, 3], 4, &[5]),
            Err(Error::InsufficientAncillas {
                needed: 2,
                found: 1,
                ..
            })
        ));
        assert!(matches!(
            n_not(&mut p, &[0, 1, 2], 2, &[4]),
            Err(Error::QubitOverlap { .. })
        ));
        assert!(matches!(
            n_not(&mut p, &[0, 1, 2], 3, &[1]),
            Err(Error::QubitOverlap { .. })
        ));
        assert!(n_not(&mut p, &[], 3, &[]).is_err());
        assert!(p.is_empty());
    }

    #[test]
    fn z_then_x_on_all_ones() {
        let spec = ControlSpec {
            controls: vec![0, 1, 2],
            ancillas: vec![4],
            actions: vec![ControlAction::Z(3), ControlAction::X(3)],
        };
        let mut p = Program::new();
        n_control_u(&mut p, &spec).unwrap();
        let out = apply(&p, &basis(5, "11110"));
        let expected = basis(5, "11100");
        let overlap = expected.inner(&out).unwrap();
        assert!((overlap.re + 1.0).abs() < 1e-12 && overlap.im.abs() < 1e-12);
    }

    #[test]
    fn empty_action_list_is_identity() {
        let spec = ControlSpec {
            controls: vec![0, 1, 2, 3],
            ancillas: vec![4, 5],
            actions: vec![],
        };
        let mut p = Program::new();
        n_control_u(&mut p, &spec).unwrap();
        for i in 0..64 {
            let s = StateVector::basis_state(6, i).unwrap();
            assert!(apply(&p, &s).approx_eq_up_to_global_phase(&s, 1e-12).unwrap());
        }
    }

    #[test]
    fn action_parsing() {
        assert_eq!(
            ControlAction::from_parts("PHASE", &[2], Some(0.5)).unwrap(),
            ControlAction::Phase(2, 0.5)
        );
        assert!(ControlAction::from_parts("Y", &[2], None).is_err());
        assert!(ControlAction::from_parts("SWAP", &[2], None).is_err());
    }

    #[test]
    fn hadamard_layer_signs() {
        let mut p = Program::new();
        hadamard_layer(&mut p, &[0, 1]).unwrap();
        let out = apply(&p, &basis(2, "01"));
        let want = [0.5, -0.5, 0.5, -0.5];
        for (a, w) in out.amplitudes().iter().zip(want) {
            assert!((a.re - w).abs() < 1e-12 && a.im.abs() < 1e-12);
        }
        let twice = apply(&p, &out);
        assert!(is_basis(&twice, "01"));
    }

    #[test]
    fn qft_gate_counts_and_two_qubit_example() {
        for m in 1..=6 {
            let mut p = Program::new();
            qft(&mut p, &(0..m).collect::<Vec<_>>()).unwrap();
            let hs = p
                .instructions()
                .iter()
                .filter(|i| matches!(i, Instruction::Gate { name, .. } if name == "H"))
                .count();
            let cps = p
                .instructions()
                .iter()
                .filter(|i| matches!(i, Instruction::Gate { name, .. } if name == "CPHASE"))
                .count();
            assert_eq!((hs, cps), (m, m * (m - 1) / 2));
        }
        // ½(|00⟩ − |01⟩ − |10⟩ + |11⟩) → ½((1−i)|10⟩ + (1+i)|11⟩)
        let psi = StateVector::from_amplitudes(
            [0.5, -0.5, -0.5, 0.5]
                .iter()
                .map(|&x| crate::Amplitude::new(x, 0.0))
                .collect(),
        )
        .unwrap();
        let mut p = Program::new();
        qft(&mut p, &[0, 1]).unwrap();
        let out = apply(&p, &psi);
        let want = [(0.0, 0.0), (0.0, 0.0), (0.5, -0.5), (0.5, 0.5)];
        for (a, (re, im)) in out.amplitudes().iter().zip(want) {
            assert!((a.re - re).abs() < 1e-12 && (a.im - im).abs() < 1e-12, "{a}");
        }
        assert!(qft(&mut p, &[]).is_err());
    }

    #[test]
    fn qft_dagger_mirrors_qft() {
        let mut fwd = Program::new();
        qft(&mut fwd, &[0, 1, 2]).unwrap();
        let mut inv = Program::new();
        qft_dagger(&mut inv, &[0, 1, 2]).unwrap();
        let n = fwd.len();
        for (i, item) in inv.instructions().iter().enumerate() {
            match (item, &fwd.instructions()[n - 1 - i]) {
                (
                    Instruction::Gate {
                        param: Some(a),
                        qubits: qa,
                        ..
                    },
                    Instruction::Gate {
                        param: Some(b),
                        qubits: qb,
                        ..
                    },
                ) => {
                    assert_eq!(*a, -*b);
                    assert_eq!(qa, qb);
                }
                (x, y) => assert_eq!(x, y),
            }
        }
        for i in 0..8 {
            let s = StateVector::basis_state(3, i).unwrap();
            let round = apply(&inv, &apply(&fwd, &s));
            assert!(round.approx_eq_up_to_global_phase(&s, 1e-10).unwrap());
            assert!((round.inner(&s).unwrap().re - 1.0).abs() < 1e-10);
        }
    }
}
