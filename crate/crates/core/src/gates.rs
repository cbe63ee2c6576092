//! Standard gate catalog and user-defined gates.
//!
//! Matrices are dense and row-major. For multi-qubit gates the first listed
//! qubit is the most significant bit of the matrix index, which makes the
//! first qubit(s) the controls and the last the target.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const UNITARY_TOLERANCE: f64 = 1e-9;

/// Largest matrix side produced by [`tensor`].
pub const MAX_DENSE_DIM: usize = 1 << 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StandardGate {
    I,
    X,
    Y,
    Z,
    H,
    S,
    T,
    Phase,
    Rx,
    Ry,
    Rz,
    Cnot,
    Cz,
    Cphase,
    Cphase00,
    Cphase01,
    Cphase10,
    Swap,
    Cswap,
    Ccnot,
}

impl StandardGate {
    pub const ALL: [StandardGate; 20] = [
        Self::I,
        Self::X,
        Self::Y,
        Self::Z,
        Self::H,
        Self::S,
        Self::T,
        Self::Phase,
        Self::Rx,
        Self::Ry,
        Self::Rz,
        Self::Cnot,
        Self::Cz,
        Self::Cphase,
        Self::Cphase00,
        Self::Cphase01,
        Self::Cphase10,
        Self::Swap,
        Self::Cswap,
        Self::Ccnot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::I => "I",
            Self::X => "X",
            Self::Y => "Y",
            Self::Z => "Z",
            Self::H => "H",
            Self::S => "S",
            Self::T => "T",
            Self::Phase => "PHASE",
            Self::Rx => "RX",
            Self::Ry => "RY",
            Self::Rz => "RZ",
            Self::Cnot => "CNOT",
            Self::Cz => "CZ",
            Self::Cphase => "CPHASE",
            Self::Cphase00 => "CPHASE00",
            Self::Cphase01 => "CPHASE01",
            Self::Cphase10 => "CPHASE10",
            Self::Swap => "SWAP",
            Self::Cswap => "CSWAP",
            Self::Ccnot => "CCNOT",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            Self::I
            | Self::X
            | Self::Y
            | Self::Z
            | Self::H
            | Self::S
            | Self::T
            | Self::Phase
            | Self::Rx
            | Self::Ry
            | Self::Rz => 1,
            Self::Cnot | Self::Cz | Self::Cphase | Self::Cphase00 | Self::Cphase01 | Self::Cphase10 | Self::Swap => 2,
            Self::Cswap | Self::Ccnot => 3,
        }
    }

    pub fn is_parametric(self) -> bool {
        matches!(
            self,
            Self::Phase
                | Self::Rx
                | Self::Ry
                | Self::Rz
                | Self::Cphase
                | Self::Cphase00
                | Self::Cphase01
                | Self::Cphase10
        )
    }

    /// Row-major matrix. `theta` is ignored for fixed gates.
    fn matrix(self, theta: f64) -> Vec<Complex64> {
        let z = c(0.0, 0.0);
        let o = c(1.0, 0.0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        match self {
            Self::I => vec![o, z, z, o],
            Self::X => vec![z, o, o, z],
            Self::Y => vec![z, c(0.0, -1.0), c(0.0, 1.0), z],
            Self::Z => vec![o, z, z, c(-1.0, 0.0)],
            Self::H => vec![c(r, 0.0), c(r, 0.0), c(r, 0.0), c(-r, 0.0)],
            Self::S => vec![o, z, z, c(0.0, 1.0)],
            Self::T => vec![o, z, z, Complex64::from_polar(1.0, PI / 4.0)],
            Self::Phase => vec![o, z, z, Complex64::from_polar(1.0, theta)],
            Self::Rx => vec![c(ch, 0.0), c(0.0, -sh), c(0.0, -sh), c(ch, 0.0)],
            Self::Ry => vec![c(ch, 0.0), c(-sh, 0.0), c(sh, 0.0), c(ch, 0.0)],
            Self::Rz => vec![
                Complex64::from_polar(1.0, -theta / 2.0),
                z,
                z,
                Complex64::from_polar(1.0, theta / 2.0),
            ],
            Self::Cnot => permutation(&[0, 1, 3, 2]),
            Self::Cz => diagonal(&[o, o, o, c(-1.0, 0.0)]),
            Self::Cphase => phase_on(3, theta),
            Self::Cphase00 => phase_on(0, theta),
            Self::Cphase01 => phase_on(1, theta),
            Self::Cphase10 => phase_on(2, theta),
            Self::Swap => permutation(&[0, 2, 1, 3]),
            // |1 a b⟩ → |1 b a⟩
            Self::Cswap => permutation(&[0, 1, 2, 3, 4, 6, 5, 7]),
            Self::Ccnot => permutation(&[0, 1, 2, 3, 4, 5, 7, 6]),
        }
    }
}

impl fmt::Display for StandardGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Matrix sending basis column `j` to row `perm[j]`.
fn permutation(perm: &[usize]) -> Vec<Complex64> {
    let d = perm.len();
    let mut m = vec![c(0.0, 0.0); d * d];
    for (col, &row) in perm.iter().enumerate() {
        m[row * d + col] = c(1.0, 0.0);
    }
    m
}

fn diagonal(diag: &[Complex64]) -> Vec<Complex64> {
    let d = diag.len();
    let mut m = vec![c(0.0, 0.0); d * d];
    for (i, &v) in diag.iter().enumerate() {
        m[i * d + i] = v;
    }
    m
}

fn phase_on(index: usize, theta: f64) -> Vec<Complex64> {
    let mut diag = [c(1.0, 0.0); 4];
    diag[index] = Complex64::from_polar(1.0, theta);
    diagonal(&diag)
}

/// A named unitary on `arity` qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateDef {
    name: String,
    arity: usize,
    matrix: Vec<Complex64>,
    param: Option<f64>,
}

impl GateDef {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn param(&self) -> Option<f64> {
        self.param
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.dim() + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.matrix.chunks(self.dim())
    }

    /// Largest entrywise deviation of `U·U†` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.matrix, self.dim())
    }
}

pub(crate) fn unitarity_deviation(m: &[Complex64], d: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let dot: Complex64 = (0..d).map(|k| m[i * d + k] * m[j * d + k].conj()).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).norm());
        }
    }
    worst
}

/// Looks up a catalog gate. Parametric gates require `param`; fixed ones
/// reject it.
pub fn standard_gate(name: &str, param: Option<f64>) -> Result<GateDef> {
    let gate = StandardGate::from_name(name).ok_or_else(|| Error::UnknownGate(name.into()))?;
    from_standard(gate, param)
}

pub fn from_standard(gate: StandardGate, param: Option<f64>) -> Result<GateDef> {
    match (gate.is_parametric(), param) {
        (true, None) => Err(Error::BadParameter {
            name: gate.name().into(),
            problem: "requires an angle",
        }),
        (false, Some(_)) => Err(Error::BadParameter {
            name: gate.name().into(),
            problem: "takes no angle",
        }),
        (_, Some(theta)) if !theta.is_finite() => Err(Error::BadParameter {
            name: gate.name().into(),
            problem: "angle must be finite",
        }),
        _ => Ok(GateDef {
            name: gate.name().into(),
            arity: gate.arity(),
            matrix: gate.matrix(param.unwrap_or(0.0)),
            param,
        }),
    }
}

const RESERVED: [&str; 2] = ["MEASURE", "DEFGATE"];

pub fn is_valid_gate_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(ch) if ch.is_ascii_alphabetic())
        && chars.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

/// Validates and names a user matrix given as rows.
pub fn def_gate(name: &str, rows: &[Vec<Complex64>]) -> Result<GateDef> {
    if !is_valid_gate_name(name) {
        return Err(Error::InvalidName(name.into()));
    }
    if StandardGate::from_name(name).is_some() || RESERVED.contains(&name) {
        return Err(Error::ReservedName(name.into()));
    }
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::NotSquare);
    }
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(d));
    }
    if rows.iter().flatten().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::NotUnitary {
            name: name.into(),
            deviation: f64::INFINITY,
        });
    }
    let matrix: Vec<Complex64> = rows.iter().flatten().copied().collect();
    let deviation = unitarity_deviation(&matrix, d);
    if deviation > UNITARY_TOLERANCE {
        return Err(Error::NotUnitary {
            name: name.into(),
            deviation,
        });
    }
    Ok(GateDef {
        name: name.into(),
        arity: d.trailing_zeros() as usize,
        matrix,
        param: None,
    })
}

/// Kronecker product `a ⊗ b`; `a` acts on the leading qubits.
pub fn tensor(a: &GateDef, b: &GateDef) -> Result<GateDef> {
    let (da, db) = (a.dim(), b.dim());
    let d = da * db;
    if d > MAX_DENSE_DIM {
        return Err(Error::TooLarge(d));
    }
    let mut m = vec![c(0.0, 0.0); d * d];
    for (ar, ac) in (0..da).flat_map(|r| (0..da).map(move |c| (r, c))) {
        let x = a.entry(ar, ac);
        for (br, bc) in (0..db).flat_map(|r| (0..db).map(move |c| (r, c))) {
            m[(ar * db + br) * d + ac * db + bc] = x * b.entry(br, bc);
        }
    }
    Ok(GateDef {
        name: format!("{}_{}", a.name, b.name),
        arity: a.arity + b.arity,
        matrix: m,
        param: None,
    })
}
