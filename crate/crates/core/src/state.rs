//! Dense statevector storage and gate application.
//!
//! Amplitudes are stored in index order with qubit 0 as the most significant
//! bit, so index `0b10` of a two-qubit state is the ket `|10⟩` (qubit 0 = 1,
//! qubit 1 = 0). Every printed ket in this crate reads the same way.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gates::GateDef;

/// Largest register the dense simulator will allocate.
pub const MAX_QUBITS: usize = 24;

/// Tolerance used when validating that a state is normalized.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Norm drift beyond this after a unitary step means something is broken.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

pub type Amplitude = Complex64;

/// Computational basis label, one bit per qubit, qubit 0 first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel(Vec<bool>);

impl BasisLabel {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![true; n])
    }

    /// Label of `index` in an `n`-qubit register (MSB = qubit 0).
    pub fn from_index(index: usize, n: usize) -> Self {
        Self((0..n).map(|q| (index >> (n - 1 - q)) & 1 == 1).collect())
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| !b)
    }

    /// Inner product modulo 2.
    pub fn dot(&self, other: &Self) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).fold(false, |acc, (&a, &b)| acc ^ (a & b)))
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(&a, &b)| a ^ b).collect()))
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::BitLength {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BasisLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidArgument(format!("`{s}` is not a bitstring"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl From<Vec<bool>> for BasisLabel {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}

impl Serialize for BasisLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BasisLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Dense `2^n` amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Amplitude>,
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidSize(n));
    }
    Ok(())
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn new_zero_state(n: usize) -> Result<Self> {
        Self::basis_state(n, 0)
    }

    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        check_size(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        let mut amps = vec![Amplitude::new(0.0, 0.0); dim];
        amps[index] = Amplitude::new(1.0, 0.0);
        Ok(Self { n_qubits: n, amps })
    }

    /// Equal superposition of every basis state.
    pub fn uniform(n: usize) -> Result<Self> {
        check_size(n)?;
        let dim = 1usize << n;
        let a = 1.0 / (dim as f64).sqrt();
        Ok(Self {
            n_qubits: n,
            amps: vec![Amplitude::new(a, 0.0); dim],
        })
    }

    /// Wraps an amplitude vector; length must be a power of two and the
    /// vector must be finite and normalized.
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidAmplitudes(format!(
                "length {dim} is not a power of two >= 2"
            )));
        }
        let n = dim.trailing_zeros() as usize;
        check_size(n)?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidAmplitudes("non-finite amplitude".into()));
        }
        let state = Self { n_qubits: n, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidAmplitudes(format!("norm² is {norm}")));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Amplitude> {
        self.amps
    }

    pub fn amplitude(&self, label: &BasisLabel) -> Result<Amplitude> {
        if label.len() != self.n_qubits {
            return Err(Error::LabelLength {
                expected: self.n_qubits,
                found: label.len(),
            });
        }
        Ok(self.amps[label.index()])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<Amplitude> {
        self.check_same_size(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub(crate) fn bit_mask(&self, qubit: usize) -> usize {
        1usize << (self.n_qubits - 1 - qubit)
    }

    fn check_qubits(&self, qubits: &[usize]) -> Result<()> {
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(())
    }

    fn check_same_size(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch(self.n_qubits, other.n_qubits));
        }
        Ok(())
    }

    /// Applies `gate` with its first matrix qubit on `qubits[0]`, and so on.
    pub fn apply_unitary(&mut self, gate: &GateDef, qubits: &[usize]) -> Result<()> {
        self.apply_matrix(gate.matrix(), qubits)
    }

    /// Like [`apply_unitary`](Self::apply_unitary) but takes a row-major
    /// matrix of dimension `2^qubits.len()`. Unitarity is the caller's
    /// responsibility.
    pub fn apply_matrix(&mut self, matrix: &[Amplitude], qubits: &[usize]) -> Result<()> {
        let k = qubits.len();
        let dim = 1usize << k;
        if k == 0 || matrix.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                dim: (matrix.len() as f64).sqrt() as usize,
                qubits: k,
            });
        }
        self.check_qubits(qubits)?;
        let masks: Vec<usize> = qubits.iter().map(|&q| self.bit_mask(q)).collect();
        if let Some(moves) = monomial_moves(matrix, dim) {
            apply_monomial(&mut self.amps, &moves, &masks);
            return Ok(());
        }
        match k {
            1 => apply_fixed::<2>(&mut self.amps, matrix, &masks),
            2 => apply_fixed::<4>(&mut self.amps, matrix, &masks),
            3 => apply_fixed::<8>(&mut self.amps, matrix, &masks),
            _ => apply_dense(&mut self.amps, matrix, &masks),
        }
        Ok(())
    }

    /// Builder-style variant of [`apply_unitary`](Self::apply_unitary).
    pub fn with_unitary(mut self, gate: &GateDef, qubits: &[usize]) -> Result<Self> {
        self.apply_unitary(gate, qubits)?;
        Ok(self)
    }

    /// Probability that `qubit` reads 1.
    pub fn probability_of_one(&self, qubit: usize) -> Result<f64> {
        self.check_qubits(&[qubit])?;
        let mask = self.bit_mask(qubit);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Projects `qubit` onto `bit` and renormalizes. Fails if that branch has
    /// (numerically) zero weight.
    pub fn collapse(&mut self, qubit: usize, bit: bool) -> Result<()> {
        self.check_qubits(&[qubit])?;
        let mask = self.bit_mask(qubit);
        let keep = |i: usize| (i & mask != 0) == bit;
        let weight: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if weight < 1e-12 {
            return Err(Error::Internal(format!(
                "collapse of qubit {qubit} onto a zero-probability branch"
            )));
        }
        let scale = 1.0 / weight.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if keep(i) {
                *a *= scale;
            } else {
                *a = Amplitude::new(0.0, 0.0);
            }
        }
        Ok(())
    }

    /// Probability that the listed qubits read `label` (in listed order).
    pub fn marginal_probability(&self, qubits: &[usize], label: &BasisLabel) -> Result<f64> {
        if qubits.len() != label.len() {
            return Err(Error::LabelLength {
                expected: qubits.len(),
                found: label.len(),
            });
        }
        self.check_qubits(qubits)?;
        let (mask, want) = self.pattern(qubits, label);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Full marginal distribution over the listed qubits, indexed by the
    /// label they form in listed order.
    pub fn marginal_distribution(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        self.check_qubits(qubits)?;
        let masks: Vec<usize> = qubits.iter().map(|&q| self.bit_mask(q)).collect();
        let mut out = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let local = masks.iter().fold(0, |acc, &m| (acc << 1) | (i & m != 0) as usize);
            out[local] += a.norm_sqr();
        }
        Ok(out)
    }

    fn pattern(&self, qubits: &[usize], label: &BasisLabel) -> (usize, usize) {
        qubits.iter().zip(label.bits()).fold((0, 0), |(mask, want), (&q, &b)| {
            let m = self.bit_mask(q);
            (mask | m, if b { want | m } else { want })
        })
    }

    /// If the state factors as (state of `keep`) ⊗ (state of the rest), returns
    /// the `keep` factor with qubits in listed order. The factor is only defined
    /// up to global phase.
    pub fn subsystem_state(&self, keep: &[usize], tol: f64) -> Result<Option<StateVector>> {
        check_size(keep.len())?;
        self.check_qubits(keep)?;
        let rest: Vec<usize> = (0..self.n_qubits).filter(|q| !keep.contains(q)).collect();
        if rest.is_empty() {
            let mut full = StateVector::new_zero_state(self.n_qubits)?;
            for (local, amp) in full.amps.iter_mut().enumerate() {
                *amp = self.amps[self.compose(keep, local, &[], 0)];
            }
            return Ok(Some(full));
        }
        // Pick the configuration of the other qubits carrying the most weight.
        let rest_dist = self.marginal_distribution(&rest)?;
        let (best_rest, _) = rest_dist
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, &p)| if p > acc.1 { (i, p) } else { acc });
        let mut sub: Vec<Amplitude> = (0..1usize << keep.len())
            .map(|local| self.amps[self.compose(keep, local, &rest, best_rest)])
            .collect();
        let norm = sub.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        sub.iter_mut().for_each(|a| *a /= norm);
        let candidate = StateVector {
            n_qubits: keep.len(),
            amps: sub,
        };
        // Reduced state must be pure: check Σ_r |⟨candidate|ψ_r⟩|² = 1.
        let mut captured = 0.0;
        for r in 0..1usize << rest.len() {
            let overlap: Amplitude = (0..1usize << keep.len())
                .map(|local| candidate.amps[local].conj() * self.amps[self.compose(keep, local, &rest, r)])
                .sum();
            captured += overlap.norm_sqr();
        }
        if (1.0 - captured).abs() > tol {
            return Ok(None);
        }
        Ok(Some(candidate))
    }

    fn compose(&self, keep: &[usize], local: usize, rest: &[usize], rest_local: usize) -> usize {
        let mut index = 0;
        for (j, &q) in keep.iter().enumerate() {
            if (local >> (keep.len() - 1 - j)) & 1 == 1 {
                index |= self.bit_mask(q);
            }
        }
        for (j, &q) in rest.iter().enumerate() {
            if (rest_local >> (rest.len() - 1 - j)) & 1 == 1 {
                index |= self.bit_mask(q);
            }
        }
        index
    }

    /// True iff some unit `c` gives `‖self − c·other‖ ≤ tol`. The phase is
    /// taken from ⟨other|self⟩, which is the minimizing choice.
    pub fn approx_eq_up_to_global_phase(&self, other: &Self, tol: f64) -> Result<bool> {
        self.check_same_size(other)?;
        let overlap = other.inner(self)?;
        let c = if overlap.norm() > 1e-300 {
            overlap / overlap.norm()
        } else {
            Amplitude::new(1.0, 0.0)
        };
        let dist_sqr: f64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - c * b).norm_sqr())
            .sum();
        Ok(dist_sqr.sqrt() <= tol)
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(mut self, theta: f64) -> Self {
        let c = Amplitude::from_polar(1.0, theta);
        self.amps.iter_mut().for_each(|a| *a *= c);
        self
    }

    pub(crate) fn check_norm(&self) -> Result<()> {
        let norm = self.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_DRIFT_LIMIT {
            return Err(Error::Internal(format!("state norm drifted to {norm}")));
        }
        Ok(())
    }
}

/// Local offsets of every matrix index: bit j of the local index (MSB
/// first) selects `masks[j]`.
fn local_offsets(masks: &[usize]) -> Vec<usize> {
    let k = masks.len();
    (0..1usize << k)
        .map(|local| {
            masks
                .iter()
                .enumerate()
                .filter(|(j, _)| (local >> (k - 1 - j)) & 1 == 1)
                .fold(0, |acc, (_, m)| acc | m)
        })
        .collect()
}

/// Calls `f` on every index whose target bits are all zero.
fn for_each_base(len: usize, masks: &[usize], mut f: impl FnMut(usize)) {
    let mut sorted = masks.to_vec();
    sorted.sort_unstable();
    for i in 0..len >> masks.len() {
        let mut base = i;
        for &m in &sorted {
            let low = base & (m - 1);
            base = low | ((base ^ low) << 1);
        }
        f(base);
    }
}

/// For a matrix with one nonzero per row and column, the non-identity
/// entries as (row, col, value). `None` for anything denser.
fn monomial_moves(matrix: &[Amplitude], dim: usize) -> Option<Vec<(usize, usize, Amplitude)>> {
    let zero = Amplitude::new(0.0, 0.0);
    let one = Amplitude::new(1.0, 0.0);
    let mut row_used = vec![false; dim];
    let mut moves = Vec::new();
    for col in 0..dim {
        let mut hit = None;
        for row in 0..dim {
            let v = matrix[row * dim + col];
            if v != zero {
                if hit.is_some() {
                    return None;
                }
                hit = Some((row, v));
            }
        }
        let (row, v) = hit?;
        if std::mem::replace(&mut row_used[row], true) {
            return None;
        }
        if row != col || v != one {
            moves.push((row, col, v));
        }
    }
    Some(moves)
}

fn apply_monomial(amps: &mut [Amplitude], moves: &[(usize, usize, Amplitude)], masks: &[usize]) {
    if moves.is_empty() {
        return;
    }
    let offsets = local_offsets(masks);
    let mut gathered = vec![Amplitude::new(0.0, 0.0); moves.len()];
    for_each_base(amps.len(), masks, |base| {
        for (g, &(_, col, _)) in gathered.iter_mut().zip(moves) {
            *g = amps[base | offsets[col]];
        }
        for (&g, &(row, _, v)) in gathered.iter().zip(moves) {
            amps[base | offsets[row]] = v * g;
        }
    });
}

fn apply_fixed<const D: usize>(amps: &mut [Amplitude], matrix: &[Amplitude], masks: &[usize]) {
    let mut offsets = [0usize; D];
    offsets.copy_from_slice(&local_offsets(masks));
    let mut gathered = [Amplitude::new(0.0, 0.0); D];
    for_each_base(amps.len(), masks, |base| {
        for (g, &off) in gathered.iter_mut().zip(&offsets) {
            *g = amps[base | off];
        }
        for (row, &off) in offsets.iter().enumerate() {
            let r = &matrix[row * D..(row + 1) * D];
            amps[base | off] = r.iter().zip(&gathered).map(|(m, g)| m * g).sum();
        }
    });
}

fn apply_dense(amps: &mut [Amplitude], matrix: &[Amplitude], masks: &[usize]) {
    let dim = 1usize << masks.len();
    let offsets = local_offsets(masks);
    let mut gathered = vec![Amplitude::new(0.0, 0.0); dim];
    for_each_base(amps.len(), masks, |base| {
        for (g, &off) in gathered.iter_mut().zip(&offsets) {
            *g = amps[base | off];
        }
        for (row, &off) in offsets.iter().enumerate() {
            let r = &matrix[row * dim..(row + 1) * dim];
            amps[base | off] = r.iter().zip(&gathered).map(|(m, g)| m * g).sum();
        }
    });
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    n: usize,
    amps: Vec<[f64; 2]>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr {
            n: self.n_qubits,
            amps: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(deserializer)?;
        let amps = repr.amps.iter().map(|&[re, im]| Amplitude::new(re, im)).collect();
        let state = StateVector::from_amplitudes(amps).map_err(serde::de::Error::custom)?;
        if state.n_qubits != repr.n {
            return Err(serde::de::Error::custom(format!(
                "`n` is {} but amps describe {} qubits",
                repr.n, state.n_qubits
            )));
        }
        Ok(state)
    }
}
