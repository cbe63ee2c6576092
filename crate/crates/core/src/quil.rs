//! Line-oriented text format for programs.
//!
//! ```text
//! # comment
//! H 0
//! CPHASE(pi/2) 1 0
//! MEASURE 0 [0]
//! DEFGATE XZ:
//!     0, 0, 1, 0
//!     0, 0, 0, -1
//!     1, 0, 0, 0
//!     0, -1, 0, 0
//!
//! ```
//!
//! [`print`] emits a canonical form that [`parse`] reads back to the same
//! instruction list.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::error::Error;
use crate::gates::{def_gate, GateDef};
use crate::program::{Instruction, Program};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceErrorKind {
    UnknownGate,
    ArityMismatch,
    BadNumber,
    MalformedMeasure,
    BadDefgate,
    NonunitaryDefgate,
}

impl fmt::Display for SourceErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::UnknownGate => "unknown-gate",
            Self::ArityMismatch => "arity-mismatch",
            Self::BadNumber => "bad-number",
            Self::MalformedMeasure => "malformed-measure",
            Self::BadDefgate => "bad-defgate",
            Self::NonunitaryDefgate => "nonunitary-defgate",
        })
    }
}

/// Parse failure with a 1-based position in the input.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}: {message}")]
pub struct SourceError {
    pub line: usize,
    pub column: usize,
    pub kind: SourceErrorKind,
    pub message: String,
}

impl SourceError {
    /// Multi-line rendering with the offending source line and a caret.
    pub fn render(&self, source: &str) -> String {
        let text = source.lines().nth(self.line - 1).unwrap_or("");
        let text = text.trim_end_matches('\r');
        format!(
            "error[{}] at line {}, column {}: {}\n  | {}\n  | {}^",
            self.kind,
            self.line,
            self.column,
            self.message,
            text,
            " ".repeat(self.column.saturating_sub(1))
        )
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn column_of(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: column_of(line, s),
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: column_of(line, s),
        });
    }
    out
}

fn strip_comment(line: &str) -> &str {
    let line = line.strip_suffix('\r').unwrap_or(line);
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

struct Parser<'a> {
    lines: Vec<&'a str>,
    pos: usize,
    program: Program,
}

impl<'a> Parser<'a> {
    fn err(&self, line: usize, column: usize, kind: SourceErrorKind, message: impl Into<String>) -> SourceError {
        SourceError {
            line,
            column,
            kind,
            message: message.into(),
        }
    }

    fn run(mut self) -> Result<Program, SourceError> {
        while self.pos < self.lines.len() {
            let line_no = self.pos + 1;
            let line = strip_comment(self.lines[self.pos]);
            self.pos += 1;
            let toks = tokens(line);
            let Some(first) = toks.first() else { continue };
            if first.text == "DEFGATE" {
                self.defgate(line_no, &toks)?;
            } else if first.text == "MEASURE" {
                self.measure(line_no, line, &toks)?;
            } else {
                self.gate(line_no, line, first.column)?;
            }
        }
        Ok(self.program)
    }

    fn push(&mut self, line: usize, column: usize, item: Instruction) -> Result<(), SourceError> {
        self.program.push(item).map(|_| ()).map_err(|e| {
            let kind = match &e {
                Error::UnknownGate(_) => SourceErrorKind::UnknownGate,
                Error::ArityMismatch { .. } | Error::DuplicateQubit(_) => SourceErrorKind::ArityMismatch,
                Error::BadParameter { .. } => SourceErrorKind::BadNumber,
                _ => SourceErrorKind::BadDefgate,
            };
            self.err(line, column, kind, e.to_string())
        })
    }

    fn qubit(&self, line: usize, tok: &Token<'_>) -> Result<usize, SourceError> {
        tok.text.parse().map_err(|_| {
            self.err(
                line,
                tok.column,
                SourceErrorKind::BadNumber,
                format!("`{}` is not a qubit index", tok.text),
            )
        })
    }

    fn gate(&mut self, line_no: usize, line: &str, name_col: usize) -> Result<(), SourceError> {
        let body_start = line.len() - line.trim_start().len();
        let body = &line[body_start..];
        let name_end = body.find(|c: char| c == '(' || c.is_whitespace()).unwrap_or(body.len());
        let name = &body[..name_end];
        if name.is_empty() {
            return Err(self.err(line_no, name_col, SourceErrorKind::UnknownGate, "expected a gate name"));
        }
        let mut rest_start = body_start + name_end;
        let mut param = None;
        if body[name_end..].starts_with('(') {
            let open = body_start + name_end;
            let close = line[open..].find(')').map(|i| open + i).ok_or_else(|| {
                self.err(
                    line_no,
                    column_of(line, open),
                    SourceErrorKind::BadNumber,
                    "unclosed `(`",
                )
            })?;
            let expr = &line[open + 1..close];
            param = Some(parse_angle(expr).ok_or_else(|| {
                self.err(
                    line_no,
                    column_of(line, open + 1),
                    SourceErrorKind::BadNumber,
                    format!("`{expr}` is not an angle"),
                )
            })?);
            rest_start = close + 1;
        }
        let rest = &line[rest_start..];
        if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
            return Err(self.err(
                line_no,
                column_of(line, rest_start),
                SourceErrorKind::BadNumber,
                "expected whitespace before qubit list",
            ));
        }
        let mut qubits = Vec::new();
        for tok in tokens(rest) {
            let tok = Token {
                text: tok.text,
                column: tok.column + column_of(line, rest_start) - 1,
            };
            qubits.push(self.qubit(line_no, &tok)?);
        }
        self.push(
            line_no,
            name_col,
            Instruction::Gate {
                name: name.into(),
                param,
                qubits,
            },
        )
    }

    fn measure(&mut self, line_no: usize, line: &str, toks: &[Token<'_>]) -> Result<(), SourceError> {
        let malformed = |col: usize, msg: &str| self.err(line_no, col, SourceErrorKind::MalformedMeasure, msg);
        let Some(q) = toks.get(1) else {
            return Err(malformed(toks[0].column, "MEASURE needs a qubit"));
        };
        let qubit = q
            .text
            .parse()
            .map_err(|_| malformed(q.column, "MEASURE needs a qubit index"))?;
        let creg = match toks.get(2) {
            None => None,
            Some(t) => {
                // Everything after the qubit must be a single `[INT]`.
                let start = line.char_indices().nth(t.column - 1).map(|(b, _)| b).unwrap_or(0);
                let tail: String = line[start..].chars().filter(|c| !c.is_whitespace()).collect();
                let inner = tail
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| malformed(t.column, "expected `[creg]`"))?;
                Some(
                    inner
                        .parse()
                        .map_err(|_| malformed(t.column, "classical register index must be an integer"))?,
                )
            }
        };
        self.push(line_no, toks[0].column, Instruction::Measure { qubit, creg })
    }

    fn defgate(&mut self, line_no: usize, toks: &[Token<'_>]) -> Result<(), SourceError> {
        let bad = |col: usize, msg: String| self.err(line_no, col, SourceErrorKind::BadDefgate, msg);
        let header = match toks {
            [_, name] => name,
            [kw] => return Err(bad(kw.column, "DEFGATE needs a name".into())),
            [_, _, extra, ..] => return Err(bad(extra.column, "unexpected text after DEFGATE name".into())),
            [] => unreachable!(),
        };
        let name = header
            .text
            .strip_suffix(':')
            .ok_or_else(|| bad(header.column, "DEFGATE name must end with `:`".into()))?;
        let mut rows = Vec::new();
        while self.pos < self.lines.len() {
            let raw = self.lines[self.pos];
            let row_text = strip_comment(raw);
            if row_text.trim().is_empty() || !row_text.starts_with(char::is_whitespace) {
                break;
            }
            let row_no = self.pos + 1;
            self.pos += 1;
            let mut row = Vec::new();
            let mut offset = 0;
            for field in row_text.split(',') {
                let col = column_of(row_text, offset + (field.len() - field.trim_start().len()));
                offset += field.len() + 1;
                let value = parse_complex(field).ok_or_else(|| {
                    self.err(
                        row_no,
                        col,
                        SourceErrorKind::BadNumber,
                        format!("`{}` is not a complex number", field.trim()),
                    )
                })?;
                row.push(value);
            }
            rows.push(row);
        }
        let def = def_gate(name, &rows).map_err(|e| {
            let kind = match e {
                Error::NotUnitary { .. } => SourceErrorKind::NonunitaryDefgate,
                _ => SourceErrorKind::BadDefgate,
            };
            self.err(line_no, header.column, kind, e.to_string())
        })?;
        self.push(line_no, header.column, Instruction::DefGate(def))
    }
}

/// Parses program text. LF and CRLF line endings are both accepted.
pub fn parse(text: &str) -> Result<Program, SourceError> {
    Parser {
        lines: text.split('\n').collect(),
        pos: 0,
        program: Program::new(),
    }
    .run()
}

/// Angle expression: real literal, `pi`, `pi/INT`, `INT*pi`, `INT*pi/INT`,
/// each with an optional leading `-`.
pub fn parse_angle(expr: &str) -> Option<f64> {
    let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let (negative, body) = match compact.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, compact.as_str()),
    };
    let value = if body.contains("pi") {
        let (numer, denom) = match body.split_once('/') {
            Some((n, d)) => (n, Some(d.parse::<u64>().ok().filter(|&d| d > 0)?)),
            None => (body, None),
        };
        let k = match numer {
            "pi" => None,
            other => Some(other.strip_suffix("*pi")?.parse::<u64>().ok()?),
        };
        pi_fraction(k, denom)
    } else {
        if body.starts_with(['+', '-']) || body.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E') {
            return None;
        }
        body.parse::<f64>().ok().filter(|v| v.is_finite())?
    };
    Some(if negative { -value } else { value })
}

fn pi_fraction(k: Option<u64>, denom: Option<u64>) -> f64 {
    let numer = match k {
        Some(k) => k as f64 * PI,
        None => PI,
    };
    match denom {
        Some(d) => numer / d as f64,
        None => numer,
    }
}

const MAX_PI_DENOMINATOR: u64 = 4096;

/// Canonical angle text: the shorter of a `pi` fraction that reproduces the
/// value bit-for-bit, or the shortest round-tripping decimal.
pub fn format_angle(angle: f64) -> String {
    let decimal = format_real(angle);
    let magnitude = angle.abs();
    if magnitude == 0.0 {
        return decimal;
    }
    let sign = if angle < 0.0 { "-" } else { "" };
    let mut best: Option<String> = None;
    for d in 1..=MAX_PI_DENOMINATOR {
        let k = (magnitude * d as f64 / PI).round();
        if !(1.0..=1e9).contains(&k) {
            continue;
        }
        let k = k as u64;
        let k_opt = (k != 1).then_some(k);
        let d_opt = (d != 1).then_some(d);
        if pi_fraction(k_opt, d_opt).to_bits() != magnitude.to_bits() {
            continue;
        }
        let text = match (k_opt, d_opt) {
            (None, None) => "pi".to_string(),
            (None, Some(d)) => format!("pi/{d}"),
            (Some(k), None) => format!("{k}*pi"),
            (Some(k), Some(d)) => format!("{k}*pi/{d}"),
        };
        if best.as_ref().is_none_or(|b| text.len() < b.len()) {
            best = Some(text);
        }
    }
    match best {
        Some(text) if sign.len() + text.len() <= decimal.len() => format!("{sign}{text}"),
        _ => decimal,
    }
}

fn format_real(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:?}")
}

/// `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`; whitespace-tolerant.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let real = |t: &str| -> Option<f64> {
        if t.starts_with(['+', '-']) && t[1..].starts_with(['+', '-']) {
            return None;
        }
        if t.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E') {
            return None;
        }
        t.parse::<f64>().ok().filter(|v| v.is_finite())
    };
    let imag = |t: &str| -> Option<f64> {
        match t {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => real(t),
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return real(&s).map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => Some(Complex64::new(real(&body[..i])?, imag(&body[i..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        return format_real(z.re);
    }
    let im = if z.im == 1.0 {
        String::new()
    } else if z.im == -1.0 {
        "-".into()
    } else {
        format_real(z.im)
    };
    if z.re == 0.0 {
        return format!("{im}i");
    }
    if z.im < 0.0 {
        format!("{}{im}i", format_real(z.re))
    } else {
        format!("{}+{im}i", format_real(z.re))
    }
}

fn write_defgate(out: &mut String, def: &GateDef) {
    out.push_str("DEFGATE ");
    out.push_str(def.name());
    out.push_str(":\n");
    for row in def.rows() {
        out.push_str("    ");
        let cells: Vec<String> = row.iter().map(|&z| format_complex(z)).collect();
        out.push_str(&cells.join(", "));
        out.push('\n');
    }
    out.push('\n');
}

pub fn format_instruction(item: &Instruction) -> String {
    match item {
        Instruction::Gate { name, param, qubits } => {
            let mut s = name.clone();
            if let Some(angle) = param {
                s.push('(');
                s.push_str(&format_angle(*angle));
                s.push(')');
            }
            for q in qubits {
                s.push(' ');
                s.push_str(&q.to_string());
            }
            s
        }
        Instruction::Measure { qubit, creg: Some(c) } => format!("MEASURE {qubit} [{c}]"),
        Instruction::Measure { qubit, creg: None } => format!("MEASURE {qubit}"),
        Instruction::DefGate(def) => {
            let mut s = String::new();
            write_defgate(&mut s, def);
            s.trim_end().to_string()
        }
    }
}

/// Canonical text. Gates present in the table without a matching
/// declaration instruction (e.g. after slicing) are declared up front.
pub fn print(program: &Program) -> String {
    let mut out = String::new();
    let declared: Vec<&str> = program
        .instructions()
        .iter()
        .filter_map(|i| match i {
            Instruction::DefGate(d) => Some(d.name()),
            _ => None,
        })
        .collect();
    for def in program.defined_gates() {
        if !declared.contains(&def.name()) {
            write_defgate(&mut out, def);
        }
    }
    for item in program.instructions() {
        match item {
            Instruction::DefGate(def) => write_defgate(&mut out, def),
            other => {
                out.push_str(&format_instruction(other));
                out.push('\n');
            }
        }
    }
    out
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_instruction(self))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_basic_forms() {
        let p = parse("H 0\nCNOT 0 1\nMEASURE 0 [0]").unwrap();
        assert_eq!(
            p.instructions(),
            &[
                Instruction::gate("H", &[0]),
                Instruction::gate("CNOT", &[0, 1]),
                Instruction::measure(0, 0)
            ]
        );
        let p = parse("CPHASE(pi/2) 1 0").unwrap();
        assert_eq!(p.instructions(), &[Instruction::gate_with("CPHASE", PI / 2.0, &[1, 0])]);
        let p = parse("  # nothing\r\n\r\nRX(-0.5) 2 # trailing\r\nMEASURE 1\n").unwrap();
        assert_eq!(
            p.instructions(),
            &[
                Instruction::gate_with("RX", -0.5, &[2]),
                Instruction::measure_discard(1)
            ]
        );
    }

    #[test]
    fn unknown_gate_is_positioned() {
        let e = parse("FOO 0").unwrap_err();
        assert_eq!((e.line, e.column, e.kind), (1, 1, SourceErrorKind::UnknownGate));
        let e = parse("H 0\n  h 1").unwrap_err();
        assert_eq!((e.line, e.column, e.kind), (2, 3, SourceErrorKind::UnknownGate));
    }

    #[test]
    fn malformed_inputs() {
        let cases = [
            ("CNOT 0", SourceErrorKind::ArityMismatch, 1, 1),
            ("CNOT 1 1", SourceErrorKind::ArityMismatch, 1, 1),
            ("H x", SourceErrorKind::BadNumber, 1, 3),
            ("RX(abc) 0", SourceErrorKind::BadNumber, 1, 4),
            ("RX(0.5 0", SourceErrorKind::BadNumber, 1, 3),
            ("RX 0", SourceErrorKind::BadNumber, 1, 1),
            ("H(1) 0", SourceErrorKind::BadNumber, 1, 1),
            ("RX(inf) 0", SourceErrorKind::BadNumber, 1, 4),
            ("MEASURE", SourceErrorKind::MalformedMeasure, 1, 1),
            ("MEASURE a", SourceErrorKind::MalformedMeasure, 1, 9),
            ("MEASURE 0 1", SourceErrorKind::MalformedMeasure, 1, 11),
            ("MEASURE 0 [x]", SourceErrorKind::MalformedMeasure, 1, 11),
            ("DEFGATE", SourceErrorKind::BadDefgate, 1, 1),
            ("DEFGATE U", SourceErrorKind::BadDefgate, 1, 9),
            ("DEFGATE U:\n    1, 0, 0\n", SourceErrorKind::BadDefgate, 1, 9),
            ("DEFGATE H:\n    1, 0\n    0, 1\n", SourceErrorKind::BadDefgate, 1, 9),
            (
                "DEFGATE U:\n    1, 1\n    0, 1\n",
                SourceErrorKind::NonunitaryDefgate,
                1,
                9,
            ),
            ("DEFGATE U:\n    1, zz\n    0, 1\n", SourceErrorKind::BadNumber, 2, 8),
        ];
        for (text, kind, line, column) in cases {
            let e = parse(text).unwrap_err();
            assert_eq!((e.kind, e.line, e.column), (kind, line, column), "{text:?}: {e}");
        }
    }

    #[test]
    fn defgate_block() {
        let text = "DEFGATE XZ:\n    0, 0, 1, 0\n    0, 0, 0, -1\n    1, 0, 0, 0\n    0, -1, 0, 0\n\nXZ 0 1\n";
        let p = parse(text).unwrap();
        assert_eq!(p.len(), 2);
        let printed = print(&p);
        assert_eq!(
            printed,
            "DEFGATE XZ:\n    0.0, 0.0, 1.0, 0.0\n    0.0, 0.0, 0.0, -1.0\n    1.0, 0.0, 0.0, 0.0\n    0.0, -1.0, 0.0, 0.0\n\nXZ 0 1\n"
        );
        assert_eq!(parse(&printed).unwrap(), p);
    }

    #[test]
    fn printer_canonical_forms() {
        let p = Program::from_instructions([Instruction::gate("H", &[0])]).unwrap();
        assert_eq!(print(&p), "H 0\n");
        let angles = [
            (PI, "pi"),
            (-PI / 2.0, "-pi/2"),
            (3.0 * PI / 4.0, "3*pi/4"),
            (PI / 1024.0, "pi/1024"),
            (0.5, "0.5"),
            (0.0, "0.0"),
            (2.0 * PI, "2*pi"),
        ];
        for (angle, text) in angles {
            assert_eq!(format_angle(angle), text);
            assert_eq!(parse_angle(text).unwrap().to_bits(), angle.to_bits(), "{text}");
        }
    }

    #[test]
    fn complex_literals() {
        let cases = [
            ("1", Complex64::new(1.0, 0.0)),
            ("2i", Complex64::new(0.0, 2.0)),
            ("-i", Complex64::new(0.0, -1.0)),
            ("0.5+0.5i", Complex64::new(0.5, 0.5)),
            (" 0.5 - 0.25i ", Complex64::new(0.5, -0.25)),
            ("1e-3-2e-3i", Complex64::new(1e-3, -2e-3)),
            ("-1.5e+2+i", Complex64::new(-150.0, 1.0)),
        ];
        for (text, z) in cases {
            assert_eq!(parse_complex(text), Some(z), "{text}");
            assert_eq!(parse_complex(&format_complex(z)), Some(z));
        }
        for bad in ["", "abc", "1+", "1++2i", "nan", "inf"] {
            assert_eq!(parse_complex(bad), None, "{bad}");
        }
    }

    #[test]
    fn render_marks_the_column() {
        let src = "H 0\nRX(q) 1";
        let e = parse(src).unwrap_err();
        let r = e.render(src);
        assert!(r.contains("line 2, column 4"));
        assert!(r.ends_with("  |    ^"));
    }
}
