//! Oracle generators: each fragment realizes |x⟩|α⟩ → |x⟩|α ⊕ f(x)⟩ and
//! carries the classical `f` it encodes so results can be checked.
//!
//! Layouts: main register at qubits `0..n`, output register right after it,
//! then the ladder scratch qubits.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::composite::{n_control_u, x_transformation, ControlAction, ControlSpec};
use crate::error::{Error, Result};
use crate::program::{Instruction, Program};
use crate::state::BasisLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeutschKind {
    Const0,
    Const1,
    BalancedId,
    BalancedFlip,
}

impl DeutschKind {
    pub const ALL: [DeutschKind; 4] = [Self::Const0, Self::Const1, Self::BalancedId, Self::BalancedFlip];

    pub fn is_constant(self) -> bool {
        matches!(self, Self::Const0 | Self::Const1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DjFunction {
    Constant(bool),
    /// Inputs that map to 1; exactly half of all inputs.
    Balanced(BTreeSet<BasisLabel>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DjChoice {
    ConstantRandom,
    BalancedRandom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum HiddenSpec {
    Deutsch {
        kind: DeutschKind,
    },
    DeutschJozsa {
        n: usize,
        f: DjFunction,
    },
    BernsteinVazirani {
        a: BasisLabel,
        b: bool,
    },
    Simon {
        s: BasisLabel,
        table: BTreeMap<BasisLabel, BasisLabel>,
    },
}

impl HiddenSpec {
    pub fn input_len(&self) -> usize {
        match self {
            Self::Deutsch { .. } => 1,
            Self::DeutschJozsa { n, .. } => *n,
            Self::BernsteinVazirani { a, .. } => a.len(),
            Self::Simon { s, .. } => s.len(),
        }
    }

    /// Classical evaluation of the hidden function.
    pub fn eval_f(&self, x: &BasisLabel) -> Result<BasisLabel> {
        if x.len() != self.input_len() {
            return Err(Error::BitLength {
                expected: self.input_len(),
                found: x.len(),
            });
        }
        let bit = |b: bool| BasisLabel::new(vec![b]);
        Ok(match self {
            Self::Deutsch { kind } => bit(match kind {
                DeutschKind::Const0 => false,
                DeutschKind::Const1 => true,
                DeutschKind::BalancedId => x.get(0),
                DeutschKind::BalancedFlip => !x.get(0),
            }),
            Self::DeutschJozsa { f, .. } => bit(match f {
                DjFunction::Constant(c) => *c,
                DjFunction::Balanced(ones) => ones.contains(x),
            }),
            Self::BernsteinVazirani { a, b } => bit(a.dot(x)? ^ b),
            Self::Simon { table, .. } => table
                .get(x)
                .cloned()
                .ok_or_else(|| Error::Internal(format!("Simon table has no entry for {x}")))?,
        })
    }
}

/// Free-function form of [`HiddenSpec::eval_f`].
pub fn eval_f(hidden: &HiddenSpec, x: &BasisLabel) -> Result<BasisLabel> {
    hidden.eval_f(x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlackboxInstance {
    pub fragment: Program,
    pub main_qubits: Vec<usize>,
    pub ancilla_out: Vec<usize>,
    pub work_ancillas: Vec<usize>,
    pub hidden: HiddenSpec,
}

impl BlackboxInstance {
    /// Total qubit count of the layout, whether or not the fragment touches all of it.
    pub fn n_qubits(&self) -> usize {
        self.main_qubits
            .iter()
            .chain(&self.ancilla_out)
            .chain(&self.work_ancillas)
            .map(|q| q + 1)
            .max()
            .unwrap_or(0)
    }
}

fn range(from: usize, len: usize) -> Vec<usize> {
    (from..from + len).collect()
}

/// Two-qubit Deutsch oracle: input on qubit 0, output on qubit 1.
pub fn deutsch_g(kind: DeutschKind) -> BlackboxInstance {
    let items = match kind {
        DeutschKind::Const0 => vec![],
        DeutschKind::Const1 => vec![Instruction::gate("X", &[1])],
        DeutschKind::BalancedId => vec![Instruction::gate("CNOT", &[0, 1])],
        DeutschKind::BalancedFlip => vec![
            Instruction::gate("X", &[0]),
            Instruction::gate("CNOT", &[0, 1]),
            Instruction::gate("X", &[0]),
        ],
    };
    BlackboxInstance {
        fragment: Program::from_instructions(items).expect("fixed Deutsch circuits are valid"),
        main_qubits: vec![0],
        ancilla_out: vec![1],
        work_ancillas: vec![],
        hidden: HiddenSpec::Deutsch { kind },
    }
}

pub fn random_deutsch<R: Rng + ?Sized>(rng: &mut R) -> BlackboxInstance {
    deutsch_g(DeutschKind::ALL[rng.random_range(0..4)])
}

fn check_n(n: usize, min: usize, total: usize) -> Result<()> {
    if n < min || total > crate::state::MAX_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "register size {n} is outside the supported range"
        )));
    }
    Ok(())
}

/// Deutsch-Jozsa oracle on `n` inputs, drawn with `rng`.
pub fn dj_blackbox<R: Rng + ?Sized>(n: usize, choice: DjChoice, rng: &mut R) -> Result<BlackboxInstance> {
    check_n(n, 2, (2 * n).saturating_sub(1))?;
    let f = match choice {
        DjChoice::ConstantRandom => DjFunction::Constant(rng.random()),
        DjChoice::BalancedRandom => {
            let mut inputs: Vec<usize> = (0..1usize << n).collect();
            inputs.shuffle(rng);
            DjFunction::Balanced(
                inputs[..1 << (n - 1)]
                    .iter()
                    .map(|&i| BasisLabel::from_index(i, n))
                    .collect(),
            )
        }
    };
    dj_from_function(n, f)
}

/// Deutsch-Jozsa oracle for an explicit function.
pub fn dj_from_function(n: usize, f: DjFunction) -> Result<BlackboxInstance> {
    check_n(n, 2, (2 * n).saturating_sub(1))?;
    let main = range(0, n);
    let out = n;
    let work = range(n + 1, n - 2);
    let mut fragment = Program::new();
    match &f {
        DjFunction::Constant(false) => {}
        DjFunction::Constant(true) => {
            fragment.push(Instruction::gate("X", &[out]))?;
        }
        DjFunction::Balanced(ones) => {
            if ones.len() != 1 << (n - 1) || ones.iter().any(|x| x.len() != n) {
                return Err(Error::InvalidArgument(
                    "balanced set must hold half of all inputs".into(),
                ));
            }
            let spec = ControlSpec {
                controls: main.clone(),
                ancillas: work.clone(),
                actions: vec![ControlAction::X(out)],
            };
            for x in ones {
                x_transformation(&mut fragment, &main, x)?;
                n_control_u(&mut fragment, &spec)?;
                x_transformation(&mut fragment, &main, x)?;
            }
        }
    }
    Ok(BlackboxInstance {
        fragment,
        main_qubits: main,
        ancilla_out: vec![out],
        work_ancillas: work,
        hidden: HiddenSpec::DeutschJozsa { n, f },
    })
}

/// Bernstein-Vazirani oracle for f(x) = a·x ⊕ b.
pub fn bv_blackbox(n: usize, a: &BasisLabel, b: bool) -> Result<BlackboxInstance> {
    check_n(n, 1, n + 1)?;
    if a.len() != n {
        return Err(Error::BitLength {
            expected: n,
            found: a.len(),
        });
    }
    let mut fragment = Program::new();
    for (i, &bit) in a.bits().iter().enumerate() {
        if bit {
            fragment.push(Instruction::gate("CNOT", &[i, n]))?;
        }
    }
    if b {
        fragment.push(Instruction::gate("X", &[n]))?;
    }
    Ok(BlackboxInstance {
        fragment,
        main_qubits: range(0, n),
        ancilla_out: vec![n],
        work_ancillas: vec![],
        hidden: HiddenSpec::BernsteinVazirani { a: a.clone(), b },
    })
}

/// Simon oracle keyed by `s`, with outputs drawn by `rng`: each pair
/// {x, x ⊕ s} gets its own distinct output, and s = 0 gives a permutation.
pub fn simon_blackbox<R: Rng + ?Sized>(n: usize, s: &BasisLabel, rng: &mut R) -> Result<BlackboxInstance> {
    check_n(n, 1, 2 * n + n.saturating_sub(2))?;
    if s.len() != n {
        return Err(Error::BitLength {
            expected: n,
            found: s.len(),
        });
    }
    let mut outputs: Vec<usize> = (0..1usize << n).collect();
    outputs.shuffle(rng);
    let mut outputs = outputs.into_iter();
    let mut table = BTreeMap::new();
    for x in 0..1usize << n {
        let x = BasisLabel::from_index(x, n);
        if table.contains_key(&x) {
            continue;
        }
        let y = BasisLabel::from_index(outputs.next().expect("enough outputs"), n);
        let partner = x.xor(s)?;
        table.insert(partner, y.clone());
        table.insert(x, y);
    }
    simon_from_table(s, table)
}

/// Simon oracle for an explicit table; the table must match `s`.
pub fn simon_from_table(s: &BasisLabel, table: BTreeMap<BasisLabel, BasisLabel>) -> Result<BlackboxInstance> {
    let n = s.len();
    check_n(n, 1, 2 * n + n.saturating_sub(2))?;
    if table.len() != 1 << n || table.iter().any(|(x, y)| x.len() != n || y.len() != n) {
        return Err(Error::InvalidArgument(
            "Simon table must cover every n-bit input".into(),
        ));
    }
    let mut preimages: BTreeMap<&BasisLabel, Vec<&BasisLabel>> = BTreeMap::new();
    for (x, y) in &table {
        preimages.entry(y).or_default().push(x);
    }
    let consistent = preimages.values().all(|xs| match xs[..] {
        [_] => s.is_zero(),
        [a, b] => !s.is_zero() && a.xor(b).map(|d| d == *s).unwrap_or(false),
        _ => false,
    });
    if !consistent {
        return Err(Error::InvalidArgument(format!("table is not keyed by s = {s}")));
    }

    let main = range(0, n);
    let out = range(n, n);
    let work = range(2 * n, n.saturating_sub(2));
    let mut fragment = Program::new();
    for (x, y) in &table {
        let actions: Vec<ControlAction> = y
            .bits()
            .iter()
            .zip(&out)
            .filter(|(&b, _)| b)
            .map(|(_, &q)| ControlAction::X(q))
            .collect();
        if actions.is_empty() {
            continue;
        }
        let spec = ControlSpec {
            controls: main.clone(),
            ancillas: work.clone(),
            actions,
        };
        x_transformation(&mut fragment, &main, x)?;
        n_control_u(&mut fragment, &spec)?;
        x_transformation(&mut fragment, &main, x)?;
    }
    Ok(BlackboxInstance {
        fragment,
        main_qubits: main,
        ancilla_out: out,
        work_ancillas: work,
        hidden: HiddenSpec::Simon { s: s.clone(), table },
    })
}
