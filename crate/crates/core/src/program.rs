//! Ordered instruction lists and their editing operations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{from_standard, GateDef, StandardGate};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Instruction {
    Gate {
        name: String,
        param: Option<f64>,
        qubits: Vec<usize>,
    },
    /// Measurement of `qubit`; the outcome is stored only when `creg` is set.
    Measure {
        qubit: usize,
        creg: Option<usize>,
    },
    DefGate(GateDef),
}

impl Instruction {
    pub fn gate(name: &str, qubits: &[usize]) -> Self {
        Self::Gate {
            name: name.into(),
            param: None,
            qubits: qubits.to_vec(),
        }
    }

    pub fn gate_with(name: &str, angle: f64, qubits: &[usize]) -> Self {
        Self::Gate {
            name: name.into(),
            param: Some(angle),
            qubits: qubits.to_vec(),
        }
    }

    pub fn standard(gate: StandardGate, param: Option<f64>, qubits: &[usize]) -> Self {
        Self::Gate {
            name: gate.name().into(),
            param,
            qubits: qubits.to_vec(),
        }
    }

    pub fn measure(qubit: usize, creg: usize) -> Self {
        Self::Measure {
            qubit,
            creg: Some(creg),
        }
    }

    pub fn measure_discard(qubit: usize) -> Self {
        Self::Measure { qubit, creg: None }
    }

    fn max_qubit(&self) -> Option<usize> {
        match self {
            Self::Gate { qubits, .. } => qubits.iter().copied().max(),
            Self::Measure { qubit, .. } => Some(*qubit),
            Self::DefGate(_) => None,
        }
    }
}

/// Growable classical bit array; unwritten slots read as 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassicalRegister {
    bits: Vec<bool>,
}

impl ClassicalRegister {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, index: usize) -> bool {
        self.bits.get(index).copied().unwrap_or(false)
    }

    pub fn set(&mut self, index: usize, bit: bool) {
        if index >= self.bits.len() {
            self.bits.resize(index + 1, false);
        }
        self.bits[index] = bit;
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Program {
    instructions: Vec<Instruction>,
    /// Declared gates; the standard catalog is always implicitly present.
    defined: BTreeMap<String, GateDef>,
}

impl Program {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a program from a batch, failing on the first invalid item.
    pub fn from_instructions(items: impl IntoIterator<Item = Instruction>) -> Result<Self> {
        let mut p = Self::new();
        p.inst(items)?;
        Ok(p)
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn defined_gates(&self) -> impl Iterator<Item = &GateDef> {
        self.defined.values()
    }

    /// One more than the largest referenced qubit, or 0.
    pub fn n_qubits(&self) -> usize {
        self.instructions
            .iter()
            .filter_map(Instruction::max_qubit)
            .max()
            .map_or(0, |q| q + 1)
    }

    /// Largest classical register index any measurement writes.
    pub fn max_creg(&self) -> Option<usize> {
        self.instructions
            .iter()
            .filter_map(|i| match i {
                Instruction::Measure { creg, .. } => *creg,
                _ => None,
            })
            .max()
    }

    /// Matrix for a gate name under this program's table.
    pub fn resolve(&self, name: &str, param: Option<f64>) -> Result<GateDef> {
        resolve_in(&self.defined, name, param)
    }

    /// Appends instructions in order. The batch is all-or-nothing.
    pub fn inst(&mut self, items: impl IntoIterator<Item = Instruction>) -> Result<&mut Self> {
        let mut table = self.defined.clone();
        let mut staged = Vec::new();
        for item in items {
            validate(&mut table, &item)?;
            staged.push(item);
        }
        self.defined = table;
        self.instructions.extend(staged);
        Ok(self)
    }

    /// Appends a single instruction.
    pub fn push(&mut self, item: Instruction) -> Result<&mut Self> {
        self.inst([item])
    }

    /// Removes and returns the last instruction.
    pub fn pop(&mut self) -> Result<Instruction> {
        let last = self.instructions.pop().ok_or(Error::EmptyProgram)?;
        if let Instruction::DefGate(def) = &last {
            let still_declared = self
                .instructions
                .iter()
                .any(|i| matches!(i, Instruction::DefGate(d) if d.name() == def.name()));
            if !still_declared {
                self.defined.remove(def.name());
            }
        }
        Ok(last)
    }

    /// Standalone copy of the half-open range `from..to`. The gate table is
    /// carried over whole so every gate in the slice still resolves.
    pub fn slice(&self, from: usize, to: usize) -> Result<Program> {
        if from > to || to > self.len() {
            return Err(Error::RangeOutOfBounds {
                from,
                to,
                len: self.len(),
            });
        }
        Ok(Program {
            instructions: self.instructions[from..to].to_vec(),
            defined: self.defined.clone(),
        })
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Program) -> Result<Program> {
        let mut defined = self.defined.clone();
        for (name, def) in &other.defined {
            match defined.get(name) {
                Some(existing) if existing != def => return Err(Error::GateCollision(name.clone())),
                Some(_) => {}
                None => {
                    defined.insert(name.clone(), def.clone());
                }
            }
        }
        let mut instructions = self.instructions.clone();
        instructions.extend(other.instructions.iter().cloned());
        Ok(Program { instructions, defined })
    }

    /// Drops instruction `index`.
    pub fn remove_at(&self, index: usize) -> Result<Program> {
        if index >= self.len() {
            return Err(Error::RangeOutOfBounds {
                from: index,
                to: index + 1,
                len: self.len(),
            });
        }
        self.slice(0, index)?.concat(&self.slice(index + 1, self.len())?)
    }

    pub fn measure(&mut self, qubit: usize, creg: Option<usize>) -> Result<&mut Self> {
        self.push(Instruction::Measure { qubit, creg })
    }

    /// Measures every qubit `q` into slot `q`, or follows `pairs` of
    /// `(qubit, creg)` when given.
    pub fn measure_all(&mut self, pairs: Option<&[(usize, usize)]>) -> Result<&mut Self> {
        let items: Vec<Instruction> = match pairs {
            Some(pairs) => pairs.iter().map(|&(q, c)| Instruction::measure(q, c)).collect(),
            None => (0..self.n_qubits()).map(|q| Instruction::measure(q, q)).collect(),
        };
        self.inst(items)
    }
}

fn resolve_in(table: &BTreeMap<String, GateDef>, name: &str, param: Option<f64>) -> Result<GateDef> {
    if let Some(gate) = StandardGate::from_name(name) {
        return from_standard(gate, param);
    }
    let def = table.get(name).ok_or_else(|| Error::UnknownGate(name.into()))?;
    if param.is_some() {
        return Err(Error::BadParameter {
            name: name.into(),
            problem: "takes no angle",
        });
    }
    Ok(def.clone())
}

fn validate(table: &mut BTreeMap<String, GateDef>, item: &Instruction) -> Result<()> {
    match item {
        Instruction::Gate { name, param, qubits } => {
            let def = resolve_in(table, name, *param)?;
            if def.arity() != qubits.len() {
                return Err(Error::ArityMismatch {
                    name: name.clone(),
                    expected: def.arity(),
                    found: qubits.len(),
                });
            }
            for (i, q) in qubits.iter().enumerate() {
                if qubits[..i].contains(q) {
                    return Err(Error::DuplicateQubit(*q));
                }
            }
            Ok(())
        }
        Instruction::Measure { .. } => Ok(()),
        Instruction::DefGate(def) => {
            if StandardGate::from_name(def.name()).is_some() {
                return Err(Error::ReservedName(def.name().into()));
            }
            match table.get(def.name()) {
                Some(existing) if existing != def => Err(Error::GateCollision(def.name().into())),
                Some(_) => Ok(()),
                None => {
                    table.insert(def.name().into(), def.clone());
                    Ok(())
                }
            }
        }
    }
}
