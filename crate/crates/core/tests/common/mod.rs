//! Dense linear-algebra reference implementations used as test oracles.
//! Nothing here goes through the simulator's gather/scatter kernels.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use qlesson::{Instruction, Program, StateVector};

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn identity(d: usize) -> Vec<C> {
    let mut m = vec![c(0.0, 0.0); d * d];
    for i in 0..d {
        m[i * d + i] = c(1.0, 0.0);
    }
    m
}

pub fn kron(a: &[C], da: usize, b: &[C], db: usize) -> Vec<C> {
    let d = da * db;
    let mut out = vec![c(0.0, 0.0); d * d];
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k) * d + j * db + l] = a[i * da + j] * b[k * db + l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &[C], b: &[C], d: usize) -> Vec<C> {
    let mut out = vec![c(0.0, 0.0); d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik == c(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                out[i * d + j] += aik * b[k * d + j];
            }
        }
    }
    out
}

pub fn matvec(m: &[C], v: &[C]) -> Vec<C> {
    let d = v.len();
    (0..d).map(|i| (0..d).map(|j| m[i * d + j] * v[j]).sum()).collect()
}

/// Full 2^n matrix of a k-qubit gate acting on `qubits`, qubit 0 = MSB.
pub fn embed(gate: &[C], qubits: &[usize], n: usize) -> Vec<C> {
    let k = qubits.len();
    let gd = 1 << k;
    let d = 1 << n;
    let sub = |idx: usize| -> usize { qubits.iter().fold(0, |acc, &q| (acc << 1) | (idx >> (n - 1 - q) & 1)) };
    let mask: usize = qubits.iter().map(|&q| 1 << (n - 1 - q)).sum();
    let mut out = vec![c(0.0, 0.0); d * d];
    for r in 0..d {
        for col in 0..d {
            if r & !mask == col & !mask {
                out[r * d + col] = gate[sub(r) * gd + sub(col)];
            }
        }
    }
    out
}

/// Applies a gate by summing over the embedded row, without building the matrix.
pub fn dense_apply(v: &[C], gate: &[C], qubits: &[usize], n: usize) -> Vec<C> {
    let gd = 1 << qubits.len();
    let bits: Vec<usize> = qubits.iter().map(|&q| 1 << (n - 1 - q)).collect();
    let mask: usize = bits.iter().sum();
    let sub = |idx: usize| bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(idx & b != 0));
    let compose = |base: usize, s: usize| {
        bits.iter().enumerate().fold(base, |acc, (i, &b)| {
            if s >> (qubits.len() - 1 - i) & 1 == 1 {
                acc | b
            } else {
                acc
            }
        })
    };
    (0..v.len())
        .map(|r| {
            let base = r & !mask;
            let rs = sub(r);
            (0..gd).map(|cs| gate[rs * gd + cs] * v[compose(base, cs)]).sum()
        })
        .collect()
}

/// Runs the gate part of a program through [`dense_apply`].
pub fn dense_run(program: &Program, input: &[C], n: usize) -> Vec<C> {
    let mut v = input.to_vec();
    for item in program.instructions() {
        if let Instruction::Gate { name, param, qubits } = item {
            let g = program.resolve(name, *param).expect("known gate");
            v = dense_apply(&v, g.matrix(), qubits, n);
        }
    }
    v
}

pub fn basis(n: usize, index: usize) -> Vec<C> {
    let mut v = vec![c(0.0, 0.0); 1 << n];
    v[index] = c(1.0, 0.0);
    v
}

/// Column-by-column unitary of a gate-only program.
pub fn circuit_matrix(program: &Program, n: usize) -> Vec<C> {
    let d = 1 << n;
    let mut m = vec![c(0.0, 0.0); d * d];
    for col in 0..d {
        let out = dense_run(program, &basis(n, col), n);
        for (row, a) in out.into_iter().enumerate() {
            m[row * d + col] = a;
        }
    }
    m
}

/// Unitary DFT matrix: F[y][x] = ω^{xy}/√N, ω = e^{2πi/N}.
pub fn dft_matrix(m: usize) -> Vec<C> {
    let d = 1usize << m;
    let norm = 1.0 / (d as f64).sqrt();
    let mut out = vec![c(0.0, 0.0); d * d];
    for y in 0..d {
        for x in 0..d {
            let angle = 2.0 * PI * ((x * y) % d) as f64 / d as f64;
            out[y * d + x] = C::from_polar(norm, angle);
        }
    }
    out
}

pub fn bit_reverse(i: usize, m: usize) -> usize {
    (0..m).fold(0, |acc, b| (acc << 1) | (i >> b & 1))
}

/// Permutation matrix sending |x⟩ to |rev(x)⟩.
pub fn bit_reversal_matrix(m: usize) -> Vec<C> {
    let d = 1 << m;
    let mut out = vec![c(0.0, 0.0); d * d];
    for x in 0..d {
        out[bit_reverse(x, m) * d + x] = c(1.0, 0.0);
    }
    out
}

/// Classical DFT with the same sign convention as the unitary one,
/// X_k = Σ_n x_n e^{2πikn/N}.
pub fn classical_dft(x: &[C]) -> Vec<C> {
    let n = x.len();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|j| x[j] * C::from_polar(1.0, 2.0 * PI * (k * j % n) as f64 / n as f64))
                .sum()
        })
        .collect()
}

pub fn max_diff(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn state(v: Vec<C>) -> StateVector {
    StateVector::from_amplitudes(v).expect("normalized")
}

pub mod literal {
    //! Gate matrices written out by hand.
    use super::{c, C};
    use std::f64::consts::FRAC_1_SQRT_2;

    pub fn x() -> Vec<C> {
        vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]
    }

    pub fn z() -> Vec<C> {
        vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]
    }

    pub fn h() -> Vec<C> {
        let s = FRAC_1_SQRT_2;
        vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]
    }

    pub fn phase(theta: f64) -> Vec<C> {
        vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), C::from_polar(1.0, theta)]
    }

    pub fn swap() -> Vec<C> {
        let mut m = vec![c(0.0, 0.0); 16];
        for (r, col) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            m[r * 4 + col] = c(1.0, 0.0);
        }
        m
    }
}

/// Dense matrix of `u` on `targets`, applied only when every control is 1.
pub fn controlled_embed(u: &[C], targets: &[usize], controls: &[usize], n: usize) -> Vec<C> {
    let d = 1 << n;
    let full = embed(u, targets, n);
    let cmask: usize = controls.iter().map(|&q| 1 << (n - 1 - q)).sum();
    let mut out = identity(d);
    for col in (0..d).filter(|col| col & cmask == cmask) {
        for r in 0..d {
            out[r * d + col] = full[r * d + col];
        }
    }
    out
}

/// Index of the basis state with `bits` placed on `qubits`, everything else 0.
pub fn place(bits: usize, width: usize, qubits: &[usize], n: usize) -> usize {
    qubits
        .iter()
        .enumerate()
        .filter(|(i, _)| bits >> (width - 1 - i) & 1 == 1)
        .map(|(_, &q)| 1 << (n - 1 - q))
        .sum()
}

/// Simulates an oracle fragment on |x⟩|0…0⟩ and checks it lands on
/// |x⟩|f(x)⟩ with every work ancilla back at 0.
pub fn fragment_is_sound(inst: &qlesson::blackbox::BlackboxInstance, x: usize) -> bool {
    use qlesson::simulator::{run_on, seeded_rng};
    let n = inst.n_qubits();
    let width = inst.main_qubits.len();
    let input = place(x, width, &inst.main_qubits, n);
    let mut sv = StateVector::basis_state(n, input).unwrap();
    run_on(
        &mut sv,
        &inst.fragment,
        &mut seeded_rng(0),
        &mut qlesson::ClassicalRegister::new(),
    )
    .unwrap();
    let label = qlesson::BasisLabel::from_index(x, width);
    let fx = inst.hidden.eval_f(&label).unwrap();
    let expected = input + place(fx.index(), fx.len(), &inst.ancilla_out, n);
    (sv.amplitudes()[expected].norm_sqr() - 1.0).abs() < 1e-10
}

/// Random program over `n_qubits` touching every gate kind, with mixed
/// angle styles and occasional DEFGATE declarations.
pub fn random_program<R: rand::Rng + ?Sized>(rng: &mut R, max_len: usize, n_qubits: usize) -> Program {
    use qlesson::gates::{def_gate, from_standard};
    use qlesson::StandardGate;
    use rand::seq::SliceRandom;

    let len = rng.random_range(1..=max_len);
    let mut p = Program::new();
    let mut defined = 0usize;
    let qubits: Vec<usize> = (0..n_qubits).collect();
    while p.len() < len {
        let roll = rng.random_range(0..20);
        if roll == 0 {
            let q = rng.random_range(0..n_qubits);
            let creg = rng.random_bool(0.7).then(|| rng.random_range(0..8));
            p.measure(q, creg).unwrap();
            continue;
        }
        if roll == 1 {
            let base = StandardGate::ALL[rng.random_range(0..StandardGate::ALL.len())];
            let angle = base.is_parametric().then(|| random_angle(rng));
            let g = from_standard(base, angle).unwrap();
            let rows: Vec<Vec<C>> = g.rows().map(|r| r.to_vec()).collect();
            let name = format!("U{defined}_{}", base.name());
            defined += 1;
            let def = def_gate(&name, &rows).unwrap();
            let mut picked = qubits.clone();
            picked.shuffle(rng);
            p.inst([
                Instruction::DefGate(def),
                Instruction::gate(&name, &picked[..g.arity()]),
            ])
            .unwrap();
            continue;
        }
        let gate = StandardGate::ALL[rng.random_range(0..StandardGate::ALL.len())];
        let mut picked = qubits.clone();
        picked.shuffle(rng);
        let angle = gate.is_parametric().then(|| random_angle(rng));
        p.push(Instruction::standard(gate, angle, &picked[..gate.arity()]))
            .unwrap();
    }
    p
}

pub fn random_angle<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    match rng.random_range(0..6) {
        0 => rng.random_range(-10.0..10.0),
        1 => {
            let num = rng.random_range(-7i32..=7) as f64;
            let den = [1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 16.0, 1024.0][rng.random_range(0..8)];
            num * PI / den
        }
        2 => PI / [2.0, 4.0, 8.0, 64.0][rng.random_range(0..4)],
        3 => rng.random_range(-1e-8..1e-8),
        4 => [0.0, -0.0, 1e300, -2.5e-310, 0.1, 1.0 / 3.0][rng.random_range(0..6)],
        _ => f64::from_bits(rng.random::<u64>() >> 2 | 0x3F00_0000_0000_0000) * if rng.random() { 1.0 } else { -1.0 },
    }
}
