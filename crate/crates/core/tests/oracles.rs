mod common;

use std::f64::consts::PI;

use common::*;
use qlesson::blackbox::{bv_blackbox, deutsch_g, dj_blackbox, simon_blackbox, DeutschKind, DjChoice, HiddenSpec};
use qlesson::composite::{n_control_u, qft, qft_dagger, ControlAction, ControlSpec};
use qlesson::simulator::seeded_rng;
use qlesson::{BasisLabel, Program};
use rand::Rng;

#[test]
fn qft_is_dft_then_bit_reversal() {
    for m in 1..=5 {
        let qubits: Vec<usize> = (0..m).collect();
        let mut p = Program::new();
        qft(&mut p, &qubits).unwrap();
        let d = 1 << m;
        let want = matmul(&bit_reversal_matrix(m), &dft_matrix(m), d);
        assert!(max_diff(&circuit_matrix(&p, m), &want) < 1e-10, "m={m}");
    }
}

#[test]
fn qft_on_a_subregister() {
    // The transform acts only on the listed qubits, in the listed order.
    let mut p = Program::new();
    qft(&mut p, &[3, 1]).unwrap();
    let want = embed(&matmul(&bit_reversal_matrix(2), &dft_matrix(2), 4), &[3, 1], 4);
    assert!(max_diff(&circuit_matrix(&p, 4), &want) < 1e-10);
}

#[test]
fn qft_dagger_inverts() {
    for m in 1..=5 {
        let qubits: Vec<usize> = (0..m).collect();
        let mut p = Program::new();
        qft(&mut p, &qubits).unwrap();
        qft_dagger(&mut p, &qubits).unwrap();
        assert!(max_diff(&circuit_matrix(&p, m), &identity(1 << m)) < 1e-10);
    }
}

#[test]
fn classical_dft_worked_example() {
    let x = [c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)];
    let want = [c(0.0, 0.0), c(2.0, -2.0), c(0.0, 0.0), c(2.0, 2.0)];
    assert!(max_diff(&classical_dft(&x), &want) < 1e-12);
}

fn action_oracle(action: ControlAction) -> (Vec<num_complex::Complex64>, Vec<usize>) {
    match action {
        ControlAction::X(t) => (literal::x(), vec![t]),
        ControlAction::Z(t) => (literal::z(), vec![t]),
        ControlAction::Phase(t, a) => (literal::phase(a), vec![t]),
        ControlAction::Swap(a, b) => (literal::swap(), vec![a, b]),
    }
}

/// Compares the synthesized circuit with the dense controlled operator on
/// every input whose ancillas start at 0.
fn check_controlled(spec: &ControlSpec, n: usize) {
    let mut p = Program::new();
    n_control_u(&mut p, spec).unwrap();
    let d = 1 << n;
    let mut want = identity(d);
    for &action in &spec.actions {
        let (u, targets) = action_oracle(action);
        want = matmul(&controlled_embed(&u, &targets, &spec.controls, n), &want, d);
    }
    let amask: usize = spec.ancillas.iter().map(|&q| 1 << (n - 1 - q)).sum();
    for col in (0..d).filter(|col| col & amask == 0) {
        let got = dense_run(&p, &basis(n, col), n);
        let expected: Vec<_> = (0..d).map(|r| want[r * d + col]).collect();
        assert!(max_diff(&got, &expected) < 1e-10, "{spec:?} col={col}");
    }
}

#[test]
fn controlled_actions_match_dense_operators() {
    let actions = |ts: &[usize]| {
        vec![
            vec![ControlAction::X(ts[0])],
            vec![ControlAction::Z(ts[0])],
            vec![ControlAction::Phase(ts[0], 0.7)],
            vec![ControlAction::Phase(ts[0], -PI / 3.0)],
            vec![ControlAction::Swap(ts[0], ts[1])],
            vec![
                ControlAction::Z(ts[0]),
                ControlAction::X(ts[0]),
                ControlAction::X(ts[1]),
            ],
        ]
    };
    for k in 1..=4usize {
        let controls: Vec<usize> = (0..k).collect();
        let ancillas: Vec<usize> = (k..k + k.saturating_sub(2)).collect();
        let t0 = k + ancillas.len();
        let n = t0 + 2;
        for acts in actions(&[t0, t0 + 1]) {
            let spec = ControlSpec {
                controls: controls.clone(),
                ancillas: ancillas.clone(),
                actions: acts,
            };
            check_controlled(&spec, n);
        }
    }
}

#[test]
fn n_not_with_scattered_qubits() {
    // Controls, ancillas and target interleaved across a 6-qubit register.
    let spec = ControlSpec {
        controls: vec![5, 1, 3, 0],
        ancillas: vec![4, 2],
        actions: vec![],
    };
    let n = 7;
    for (action, extra) in [(ControlAction::X(6), 7), (ControlAction::Phase(6, 1.1), 7)] {
        let mut s = spec.clone();
        s.actions = vec![action];
        check_controlled(&s, extra.min(n));
    }
}

#[test]
fn deutsch_matrices_are_exact() {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let perm = |p: [usize; 4]| {
        let mut m = vec![zero; 16];
        for (col, &r) in p.iter().enumerate() {
            m[r * 4 + col] = one;
        }
        m
    };
    for (kind, want) in [
        (DeutschKind::Const0, perm([0, 1, 2, 3])),
        (DeutschKind::Const1, perm([1, 0, 3, 2])),
        (DeutschKind::BalancedId, perm([0, 1, 3, 2])),
        (DeutschKind::BalancedFlip, perm([1, 0, 2, 3])),
    ] {
        let got = circuit_matrix(&deutsch_g(kind).fragment, 2);
        assert_eq!(got, want, "{kind:?}");
    }
}

#[test]
fn generated_oracles_are_sound_exhaustively() {
    let mut rng = seeded_rng(21);
    for n in 2..=4usize {
        for _ in 0..3 {
            for choice in [DjChoice::ConstantRandom, DjChoice::BalancedRandom] {
                let inst = dj_blackbox(n, choice, &mut rng).unwrap();
                assert!((0..1 << n).all(|x| fragment_is_sound(&inst, x)));
            }
            let a = BasisLabel::from_index(rng.random_range(0..1 << n), n);
            let inst = bv_blackbox(n, &a, rng.random()).unwrap();
            assert!((0..1 << n).all(|x| fragment_is_sound(&inst, x)));
        }
        for s in 0..1 << n {
            let inst = simon_blackbox(n, &BasisLabel::from_index(s, n), &mut rng).unwrap();
            assert!((0..1 << n).all(|x| fragment_is_sound(&inst, x)));
        }
    }
}

#[test]
fn larger_oracles_are_sound_on_samples() {
    let mut rng = seeded_rng(5);
    for n in 5..=6usize {
        let dj = dj_blackbox(n, DjChoice::BalancedRandom, &mut rng).unwrap();
        let s = BasisLabel::from_index(rng.random_range(1..1 << n), n);
        let simon = simon_blackbox(n, &s, &mut rng).unwrap();
        for _ in 0..12 {
            let x = rng.random_range(0..1 << n);
            assert!(fragment_is_sound(&dj, x));
            assert!(fragment_is_sound(&simon, x));
        }
    }
}

#[test]
fn single_bit_oracles_are_involutions() {
    let mut rng = seeded_rng(8);
    let mut fragments = vec![];
    for kind in DeutschKind::ALL {
        fragments.push(deutsch_g(kind));
    }
    fragments.push(dj_blackbox(3, DjChoice::BalancedRandom, &mut rng).unwrap());
    fragments.push(bv_blackbox(3, &"011".parse().unwrap(), true).unwrap());
    for inst in fragments {
        let n = inst.n_qubits();
        let twice = inst.fragment.concat(&inst.fragment).unwrap();
        let m = circuit_matrix(&twice, n);
        let amask: usize = inst.work_ancillas.iter().map(|&q| 1 << (n - 1 - q)).sum();
        let d = 1 << n;
        for col in (0..d).filter(|col| col & amask == 0) {
            assert!((m[col * d + col] - c(1.0, 0.0)).norm() < 1e-10);
        }
    }
}

#[test]
fn balanced_sets_hold_half() {
    let mut rng = seeded_rng(13);
    for n in 2..=6 {
        let inst = dj_blackbox(n, DjChoice::BalancedRandom, &mut rng).unwrap();
        let ones = (0..1 << n)
            .filter(|&x| inst.hidden.eval_f(&BasisLabel::from_index(x, n)).unwrap().get(0))
            .count();
        assert_eq!(ones, 1 << (n - 1));
    }
}

#[test]
fn simon_tables_collide_only_on_key_pairs() {
    let mut rng = seeded_rng(17);
    for n in 1..=5usize {
        for s in 0..1 << n {
            let key = BasisLabel::from_index(s, n);
            let inst = simon_blackbox(n, &key, &mut rng).unwrap();
            let HiddenSpec::Simon { table, .. } = &inst.hidden else {
                unreachable!()
            };
            for (x1, y1) in table {
                for (x2, y2) in table {
                    let same = y1 == y2;
                    let paired = x1 == x2 || x1.xor(x2).unwrap() == key;
                    assert_eq!(same, paired, "n={n} s={key}");
                }
            }
        }
    }
}
