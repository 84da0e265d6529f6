//! Parser for the `.naq` circuit format.
//!
//! ```text
//! file := { line }
//! line := [ stmt ] [ '#' comment ] NL
//! stmt := 'qubits' INT
//!       | NAME [ '(' FLOAT { ',' FLOAT } ')' ] INT { INT }
//!       | 'measure' 'all'
//! ```
//!
//! Names are case-insensitive, qubit indices are 0-based and the `qubits`
//! header must precede every gate. Both LF and CRLF line endings are
//! accepted.

use thiserror::Error;

use super::gate::{Circuit, CircuitError, Gate, GateKind};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Word(&'a str),
    Number(&'a str),
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone)]
struct Token<'a> {
    tok: Tok<'a>,
    column: usize,
}

fn tokenize(line_no: usize, text: &str) -> Result<Vec<Token<'_>>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        let column = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, column });
            i += 1;
            continue;
        }
        let is_word = c.is_ascii_alphabetic() || c == '_';
        let is_number = c.is_ascii_digit() || matches!(c, '-' | '+' | '.');
        if !is_word && !is_number {
            return Err(ParseError {
                line: line_no,
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
        let mut j = i + 1;
        while j < chars.len() {
            let d = chars[j].1;
            let more = if is_word {
                d.is_ascii_alphanumeric() || d == '_'
            } else {
                d.is_ascii_alphanumeric() || matches!(d, '.' | '-' | '+')
            };
            if !more {
                break;
            }
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |&(k, _)| k);
        let lexeme = &text[start..end];
        out.push(Token {
            tok: if is_word {
                Tok::Word(lexeme)
            } else {
                Tok::Number(lexeme)
            },
            column,
        });
        i = j;
    }
    Ok(out)
}

fn gate_kind(name: &str, params: &[f64]) -> Option<(GateKind, usize)> {
    let angle = params.first().copied().unwrap_or(0.0);
    let (kind, n_params) = match name {
        "rx" => (GateKind::Rx(angle), 1),
        "ry" => (GateKind::Ry(angle), 1),
        "rz" => (GateKind::Rz(angle), 1),
        "cphase" => (GateKind::Cphase(angle), 1),
        "h" => (GateKind::H, 0),
        "x" => (GateKind::X, 0),
        "y" => (GateKind::Y, 0),
        "z" => (GateKind::Z, 0),
        "cz" => (GateKind::Cz, 0),
        "cnot" => (GateKind::Cnot, 0),
        "swap" => (GateKind::Swap, 0),
        "ccz" => (GateKind::Ccz, 0),
        "ckz" => (GateKind::Ckz, 0),
        _ => return None,
    };
    Some((kind, n_params))
}

struct LineParser<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    pos: usize,
    eol_column: usize,
}

impl<'a> LineParser<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token<'a>> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn column(&self) -> usize {
        self.peek().map_or(self.eol_column, |t| t.column)
    }

    fn expect(&mut self, want: Tok<'static>, what: &str) -> Result<(), ParseError> {
        let column = self.column();
        match self.next() {
            Some(t) if t.tok == want => Ok(()),
            _ => Err(self.err(column, format!("expected {what}"))),
        }
    }

    fn int(&mut self) -> Result<(usize, usize), ParseError> {
        let column = self.column();
        match self.next() {
            Some(Token {
                tok: Tok::Number(s),
                ..
            }) => s
                .parse::<usize>()
                .map(|v| (v, column))
                .map_err(|_| self.err(column, format!("`{s}` is not a non-negative integer"))),
            _ => Err(self.err(column, "expected an integer")),
        }
    }

    fn float(&mut self) -> Result<f64, ParseError> {
        let column = self.column();
        match self.next() {
            Some(Token {
                tok: Tok::Number(s),
                ..
            }) => match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(_) => Err(self.err(column, "angle must be finite")),
                Err(_) => Err(self.err(column, format!("`{s}` is not a number"))),
            },
            _ => Err(self.err(column, "expected a number")),
        }
    }
}

/// Parses a circuit file.
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut circuit: Option<Circuit> = None;
    let mut last_line = 0;

    for (k, raw) in text.split('\n').enumerate() {
        let line_no = k + 1;
        last_line = line_no;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let tokens = tokenize(line_no, raw)?;
        if tokens.is_empty() {
            continue;
        }
        let mut p = LineParser {
            line: line_no,
            tokens,
            pos: 0,
            eol_column: raw.chars().count() + 1,
        };
        let head = p.next().expect("non-empty");
        let name = match head.tok {
            Tok::Word(w) => w.to_ascii_lowercase(),
            _ => return Err(p.err(head.column, "expected an instruction name")),
        };

        if name == "qubits" {
            if circuit.is_some() {
                return Err(p.err(head.column, "duplicate `qubits` header"));
            }
            let (n, _) = p.int()?;
            circuit = Some(Circuit::new(n));
        } else {
            let Some(c) = circuit.as_mut() else {
                return Err(p.err(head.column, "missing `qubits` header"));
            };
            if name == "measure" {
                let column = p.column();
                match p.next() {
                    Some(Token {
                        tok: Tok::Word(w), ..
                    }) if w.eq_ignore_ascii_case("all") => {}
                    _ => return Err(p.err(column, "expected `all` after `measure`")),
                }
                c.push(Gate::measure_all())
                    .expect("measure has no operands");
            } else {
                let mut params = Vec::new();
                if matches!(
                    p.peek(),
                    Some(Token {
                        tok: Tok::LParen,
                        ..
                    })
                ) {
                    p.next();
                    params.push(p.float()?);
                    while matches!(
                        p.peek(),
                        Some(Token {
                            tok: Tok::Comma,
                            ..
                        })
                    ) {
                        p.next();
                        params.push(p.float()?);
                    }
                    p.expect(Tok::RParen, "`)`")?;
                }
                let (kind, n_params) = gate_kind(&name, &params)
                    .ok_or_else(|| p.err(head.column, format!("unknown gate `{name}`")))?;
                if params.len() != n_params {
                    return Err(p.err(
                        head.column,
                        format!(
                            "`{name}` takes {n_params} parameter(s), got {}",
                            params.len()
                        ),
                    ));
                }
                let mut operands = Vec::new();
                while p.peek().is_some() {
                    let (q, column) = p.int()?;
                    if q >= c.n_qubits() {
                        return Err(p.err(
                            column,
                            format!("qubit {q} out of range for {} qubits", c.n_qubits()),
                        ));
                    }
                    if operands.contains(&q) {
                        return Err(p.err(column, format!("duplicate operand {q}")));
                    }
                    operands.push(q);
                }
                let gate = Gate::new(kind, operands);
                match gate.check() {
                    Ok(()) => {}
                    Err(e @ CircuitError::Arity { .. }) => {
                        return Err(p.err(head.column, e.to_string()))
                    }
                    Err(e) => return Err(p.err(head.column, e.to_string())),
                }
                c.push(gate).expect("checked above");
            }
        }
        if let Some(t) = p.peek() {
            return Err(p.err(t.column, "unexpected trailing token"));
        }
    }

    circuit.ok_or(ParseError {
        line: last_line.max(1),
        column: 1,
        message: "missing `qubits` header".to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_circuit() {
        let c = parse_circuit("qubits 2\nh 0\ncnot 0 1\nmeasure all").unwrap();
        assert_eq!(c.n_qubits(), 2);
        assert_eq!(
            c.gates(),
            &[Gate::h(0), Gate::cnot(0, 1), Gate::measure_all()]
        );
        assert!(c.measured());
    }

    #[test]
    fn rotation_angle() {
        let c = parse_circuit("qubits 1\nrx(1.2345) 0").unwrap();
        assert_eq!(c.gates(), &[Gate::rx(0, 1.2345)]);
    }

    #[test]
    fn duplicate_operand_position() {
        let e = parse_circuit("qubits 2\ncz 0 0").unwrap_err();
        assert_eq!((e.line, e.column), (2, 6));
        assert!(e.message.contains("duplicate operand"));
    }

    #[test]
    fn comments_case_and_crlf() {
        let text =
            "# bell\r\nQUBITS 2 # header\r\n\r\nH 0\r\nCNot 0 1 # entangle\r\nMeasure ALL\r\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn error_cases() {
        let cases = [
            ("h 0", 1, 1, "missing `qubits` header"),
            ("", 1, 1, "missing `qubits` header"),
            ("qubits 2\nfoo 0", 2, 1, "unknown gate `foo`"),
            ("qubits 2\ncz 0", 2, 1, "expects 2 operand"),
            ("qubits 2\nh 0 1", 2, 1, "expects 1 operand"),
            ("qubits 2\nh 2", 2, 3, "out of range"),
            ("qubits 2\nqubits 3", 2, 1, "duplicate `qubits`"),
            ("qubits 1\nrx 0", 2, 1, "takes 1 parameter"),
            ("qubits 1\nh(0.5) 0", 2, 1, "takes 0 parameter"),
            ("qubits 1\nrx(abc) 0", 2, 4, "expected a number"),
            ("qubits 1\nrx(1.0 0", 2, 8, "expected `)`"),
            ("qubits 1\nrx(1e999) 0", 2, 4, "finite"),
            ("qubits 1\nh -1", 2, 3, "not a non-negative integer"),
            ("qubits 1\nmeasure 0", 2, 9, "expected `all`"),
            ("qubits 1\nh 0 $", 2, 5, "unexpected character"),
            ("qubits x", 1, 8, "expected an integer"),
        ];
        for (text, line, column, msg) in cases {
            let e = parse_circuit(text).unwrap_err();
            assert_eq!((e.line, e.column), (line, column), "{text:?}: {e}");
            assert!(e.message.contains(msg), "{text:?}: {e}");
        }
    }

    #[test]
    fn ckz_any_arity() {
        let c = parse_circuit("qubits 4\nckz 0 1 2 3\nccz 0 1 2\ncphase(0.5) 2 3").unwrap();
        assert_eq!(c.gates()[0].qubits, vec![0, 1, 2, 3]);
        assert_eq!(c.gates()[2].kind, GateKind::Cphase(0.5));
    }
}
