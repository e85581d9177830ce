//! Line-oriented circuit description language.
//!
//! One statement per line, `#` starts a comment, qubit indices are 1-based in
//! source text (and converted to 0-based internally):
//!
//! ```text
//! qubits 3
//! init 000
//! h 1
//! cx 1 2
//! u 3 0.707107 0.0 0.707107 0.0 0.0
//! measure 3 h 0
//! pair 1 2
//! ```

use num_complex::Complex64;
use thiserror::Error;

use crate::qie::{Basis, Gate};
use crate::reasoner::MeasurementSpec;

/// Analysis request attached to a circuit, executed after the gate list.
#[derive(Clone, Debug, PartialEq)]
pub enum Directive {
    Measure(MeasurementSpec),
    Pair(usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitDocument {
    pub n: usize,
    pub init: Vec<bool>,
    pub gates: Vec<Gate>,
    pub directives: Vec<Directive>,
}

#[derive(Clone, Debug, Error, PartialEq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// A word plus the 1-based column where it starts.
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let body = match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut chars = body.char_indices().peekable();
    while let Some(&(start, ch)) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
            continue;
        }
        let mut end = start;
        while let Some(&(pos, c)) = chars.peek() {
            if c.is_whitespace() {
                break;
            }
            end = pos + c.len_utf8();
            chars.next();
        }
        tokens.push(Token {
            text: &body[start..end],
            column: start + 1,
        });
    }
    tokens
}

struct LineParser<'a> {
    tokens: Vec<Token<'a>>,
    line: usize,
    next: usize,
}

impl<'a> LineParser<'a> {
    fn take(&mut self, what: &str) -> Result<&Token<'a>, ParseError> {
        if self.next < self.tokens.len() {
            let tok = &self.tokens[self.next];
            self.next += 1;
            Ok(tok)
        } else {
            let column = self
                .tokens
                .last()
                .map(|t| t.column + t.text.len())
                .unwrap_or(1);
            Err(ParseError::new(
                self.line,
                column,
                format!("expected {what}"),
            ))
        }
    }

    fn take_usize(&mut self, what: &str) -> Result<(usize, usize), ParseError> {
        let line = self.line;
        let tok = self.take(what)?;
        let column = tok.column;
        let value = tok.text.parse::<usize>().map_err(|_| {
            ParseError::new(line, column, format!("malformed {what}: '{}'", tok.text))
        })?;
        Ok((value, column))
    }

    fn take_f64(&mut self, what: &str) -> Result<f64, ParseError> {
        let line = self.line;
        let tok = self.take(what)?;
        let column = tok.column;
        let text = tok.text;
        text.parse::<f64>()
            .map_err(|_| ParseError::new(line, column, format!("malformed {what}: '{text}'")))
    }

    /// A 1-based qubit index converted to 0-based and range-checked.
    fn take_qubit(&mut self, n: usize, what: &str) -> Result<(usize, usize), ParseError> {
        let (value, column) = self.take_usize(what)?;
        if value == 0 || value > n {
            return Err(ParseError::new(
                self.line,
                column,
                format!("qubit index {value} out of range 1..={n}"),
            ));
        }
        Ok((value - 1, column))
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.next < self.tokens.len() {
            let tok = &self.tokens[self.next];
            return Err(ParseError::new(
                self.line,
                tok.column,
                format!("unexpected trailing token '{}'", tok.text),
            ));
        }
        Ok(())
    }
}

pub fn parse_circuit(text: &str) -> Result<CircuitDocument, ParseError> {
    let mut doc: Option<CircuitDocument> = None;
    let mut init_seen = false;
    for (line_idx, raw) in text.lines().enumerate() {
        let line = line_idx + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let keyword_column = tokens[0].column;
        let keyword = tokens[0].text;
        let mut p = LineParser {
            tokens,
            line,
            next: 1,
        };
        if keyword == "qubits" {
            if doc.is_some() {
                return Err(ParseError::new(
                    line,
                    keyword_column,
                    "duplicate qubits declaration",
                ));
            }
            let (n, column) = p.take_usize("qubit count")?;
            if n == 0 || n > 64 {
                return Err(ParseError::new(
                    line,
                    column,
                    "qubit count must be in 1..=64",
                ));
            }
            p.finish()?;
            doc = Some(CircuitDocument {
                n,
                init: vec![false; n],
                gates: Vec::new(),
                directives: Vec::new(),
            });
            continue;
        }
        let doc = doc.as_mut().ok_or_else(|| {
            ParseError::new(line, keyword_column, "qubits declaration must come first")
        })?;
        let n = doc.n;
        match keyword {
            "init" => {
                let tok = p.take("bitstring")?;
                let (column, text) = (tok.column, tok.text);
                if init_seen {
                    return Err(ParseError::new(line, keyword_column, "duplicate init"));
                }
                if text.len() != n || !text.bytes().all(|b| b == b'0' || b == b'1') {
                    return Err(ParseError::new(
                        line,
                        column,
                        format!("init needs exactly {n} characters of 0/1"),
                    ));
                }
                doc.init = text.bytes().map(|b| b == b'1').collect();
                init_seen = true;
            }
            "h" => {
                let mut set = vec![p.take_qubit(n, "qubit index")?.0];
                while p.next < p.tokens.len() {
                    set.push(p.take_qubit(n, "qubit index")?.0);
                }
                doc.gates.push(Gate::H(set));
            }
            "x" => {
                let (q, _) = p.take_qubit(n, "qubit index")?;
                doc.gates.push(Gate::X(q));
            }
            "z" => {
                let (q, _) = p.take_qubit(n, "qubit index")?;
                doc.gates.push(Gate::Z(q));
            }
            "cx" => {
                let (control, _) = p.take_qubit(n, "control index")?;
                let (target, column) = p.take_qubit(n, "target index")?;
                if control == target {
                    return Err(ParseError::new(line, column, "control equals target"));
                }
                doc.gates.push(Gate::Cnot { control, target });
            }
            "u" => {
                let (qubit, _) = p.take_qubit(n, "qubit index")?;
                let a1 = Complex64::new(p.take_f64("a1 real part")?, p.take_f64("a1 imag part")?);
                let a2 = Complex64::new(p.take_f64("a2 real part")?, p.take_f64("a2 imag part")?);
                let alpha = p.take_f64("alpha")?;
                doc.gates.push(Gate::U1Q {
                    qubit,
                    a1,
                    a2,
                    alpha,
                });
            }
            "measure" => {
                let (qubit, _) = p.take_qubit(n, "qubit index")?;
                let tok = p.take("basis c|h")?;
                let (column, text) = (tok.column, tok.text);
                let basis = match text {
                    "c" => Basis::C,
                    "h" => Basis::H,
                    other => {
                        return Err(ParseError::new(
                            line,
                            column,
                            format!("expected basis c or h, got '{other}'"),
                        ))
                    }
                };
                let outcome = if p.next < p.tokens.len() {
                    let tok = p.take("outcome 0|1")?;
                    let (column, text) = (tok.column, tok.text);
                    match text {
                        "0" => Some(false),
                        "1" => Some(true),
                        other => {
                            return Err(ParseError::new(
                                line,
                                column,
                                format!("expected outcome 0 or 1, got '{other}'"),
                            ))
                        }
                    }
                } else {
                    None
                };
                doc.directives.push(Directive::Measure(MeasurementSpec {
                    qubit,
                    basis,
                    outcome,
                }));
            }
            "pair" => {
                let (i, _) = p.take_qubit(n, "qubit index")?;
                let (j, column) = p.take_qubit(n, "qubit index")?;
                if i == j {
                    return Err(ParseError::new(
                        line,
                        column,
                        "pair needs two distinct qubits",
                    ));
                }
                doc.directives.push(Directive::Pair(i, j));
            }
            other => {
                return Err(ParseError::new(
                    line,
                    keyword_column,
                    format!("unknown keyword '{other}'"),
                ));
            }
        }
        p.finish()?;
    }
    doc.ok_or_else(|| ParseError::new(1, 1, "missing qubits declaration"))
}

/// Regenerate source text; the output reparses to an identical document.
pub fn pretty_print(doc: &CircuitDocument) -> String {
    let mut out = format!("qubits {}\n", doc.n);
    if doc.init.iter().any(|&b| b) {
        out.push_str("init ");
        for &b in &doc.init {
            out.push(if b { '1' } else { '0' });
        }
        out.push('\n');
    }
    for gate in &doc.gates {
        match gate {
            Gate::H(qs) => {
                out.push('h');
                for q in qs {
                    out.push_str(&format!(" {}", q + 1));
                }
                out.push('\n');
            }
            Gate::X(q) => out.push_str(&format!("x {}\n", q + 1)),
            Gate::Z(q) => out.push_str(&format!("z {}\n", q + 1)),
            Gate::Cnot { control, target } => {
                out.push_str(&format!("cx {} {}\n", control + 1, target + 1))
            }
            Gate::U1Q {
                qubit,
                a1,
                a2,
                alpha,
            } => out.push_str(&format!(
                "u {} {} {} {} {} {}\n",
                qubit + 1,
                a1.re,
                a1.im,
                a2.re,
                a2.im,
                alpha
            )),
        }
    }
    for directive in &doc.directives {
        match directive {
            Directive::Measure(spec) => {
                out.push_str(&format!(
                    "measure {} {}",
                    spec.qubit + 1,
                    spec.basis.label()
                ));
                if let Some(outcome) = spec.outcome {
                    out.push_str(if outcome { " 1" } else { " 0" });
                }
                out.push('\n');
            }
            Directive::Pair(i, j) => out.push_str(&format!("pair {} {}\n", i + 1, j + 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_document() {
        let doc = parse_circuit("qubits 2\nh 1\ncx 1 2").unwrap();
        assert_eq!(doc.n, 2);
        assert_eq!(doc.init, vec![false, false]);
        assert_eq!(
            doc.gates,
            vec![
                Gate::H(vec![0]),
                Gate::Cnot {
                    control: 0,
                    target: 1
                }
            ]
        );
        assert!(doc.directives.is_empty());
    }

    #[test]
    fn ghz_with_pair_query() {
        let doc = parse_circuit("qubits 3\nh 1\ncx 1 2\ncx 2 3\npair 1 2").unwrap();
        assert_eq!(doc.gates.len(), 3);
        assert_eq!(doc.directives, vec![Directive::Pair(0, 1)]);
    }

    #[test]
    fn control_equals_target_is_positioned() {
        let err = parse_circuit("qubits 2\ncx 1 1").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.column, 6);
        assert!(err.message.contains("control equals target"));
    }

    #[test]
    fn comments_blank_lines_and_init() {
        let doc = parse_circuit("# bell from |10>\nqubits 2\n\ninit 10  # flipped\nh 1\n").unwrap();
        assert_eq!(doc.init, vec![true, false]);
        assert_eq!(doc.gates, vec![Gate::H(vec![0])]);
    }

    #[test]
    fn measure_and_u_statements() {
        let doc =
            parse_circuit("qubits 3\nmeasure 3 h 0\nmeasure 1 c\nu 2 0.6 0.0 0.8 0.0 1.5").unwrap();
        assert_eq!(doc.directives.len(), 2);
        match &doc.directives[0] {
            Directive::Measure(spec) => {
                assert_eq!(spec.qubit, 2);
                assert_eq!(spec.basis, Basis::H);
                assert_eq!(spec.outcome, Some(false));
            }
            other => panic!("unexpected directive {other:?}"),
        }
        match &doc.gates[0] {
            Gate::U1Q {
                qubit,
                a1,
                a2,
                alpha,
            } => {
                assert_eq!(*qubit, 1);
                assert_eq!(a1.re, 0.6);
                assert_eq!(a2.re, 0.8);
                assert_eq!(*alpha, 1.5);
            }
            other => panic!("unexpected gate {other:?}"),
        }
    }

    #[test]
    fn errors_are_positioned() {
        let err = parse_circuit("qubits 2\nfoo 1").unwrap_err();
        assert_eq!((err.line, err.column), (2, 1));
        assert!(err.message.contains("unknown keyword"));

        let err = parse_circuit("qubits 2\nh 3").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        assert!(err.message.contains("out of range"));

        let err = parse_circuit("qubits 2\nqubits 3").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("duplicate qubits"));

        let err = parse_circuit("qubits 2\nu 1 nope 0 0 0 0").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
        assert!(err.message.contains("malformed"));

        let err = parse_circuit("h 1\nqubits 2").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
    }

    #[test]
    fn round_trip() {
        let text = "qubits 4\ninit 0010\nh 1 3\ncx 1 2\nz 4\nmeasure 4 h\npair 1 2\n";
        let doc = parse_circuit(text).unwrap();
        let printed = pretty_print(&doc);
        assert_eq!(parse_circuit(&printed).unwrap(), doc);
    }
}
