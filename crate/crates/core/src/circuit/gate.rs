use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    Rx(f64),
    Ry(f64),
    Rz(f64),
    H,
    X,
    Y,
    Z,
    Cz,
    Cnot,
    Swap,
    Ccz,
    /// Multi-controlled Z on `k + 1 ≥ 2` qubits.
    Ckz,
    /// `diag(1, 1, 1, e^{iθ})`.
    Cphase(f64),
    MeasureAll,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::Rx(_) => "rx",
            GateKind::Ry(_) => "ry",
            GateKind::Rz(_) => "rz",
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::Cz => "cz",
            GateKind::Cnot => "cnot",
            GateKind::Swap => "swap",
            GateKind::Ccz => "ccz",
            GateKind::Ckz => "ckz",
            GateKind::Cphase(_) => "cphase",
            GateKind::MeasureAll => "measure",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Rx(a) | GateKind::Ry(a) | GateKind::Rz(a) | GateKind::Cphase(a) => Some(a),
            _ => None,
        }
    }

    /// Fixed operand count, or `None` for `ckz` (any count ≥ 2).
    pub fn arity(&self) -> Option<usize> {
        match self {
            GateKind::Rx(_)
            | GateKind::Ry(_)
            | GateKind::Rz(_)
            | GateKind::H
            | GateKind::X
            | GateKind::Y
            | GateKind::Z => Some(1),
            GateKind::Cz | GateKind::Cnot | GateKind::Swap | GateKind::Cphase(_) => Some(2),
            GateKind::Ccz => Some(3),
            GateKind::Ckz => None,
            GateKind::MeasureAll => Some(0),
        }
    }

    /// Directly executable on the hardware.
    pub fn is_native(&self) -> bool {
        matches!(
            self,
            GateKind::Rx(_)
                | GateKind::Ry(_)
                | GateKind::Rz(_)
                | GateKind::Cz
                | GateKind::Ccz
                | GateKind::Ckz
                | GateKind::Swap
                | GateKind::MeasureAll
        )
    }

    pub fn is_single_qubit(&self) -> bool {
        self.arity() == Some(1)
    }

    /// Symmetric phase gates act on their operands through the blockade and
    /// therefore need every operand pair within one blockade radius.
    pub fn is_entangling(&self) -> bool {
        matches!(
            self,
            GateKind::Cz
                | GateKind::Cnot
                | GateKind::Swap
                | GateKind::Ccz
                | GateKind::Ckz
                | GateKind::Cphase(_)
        )
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("`{gate}` expects {expected} operand(s), got {got}")]
    Arity {
        gate: &'static str,
        expected: String,
        got: usize,
    },
    #[error("duplicate operand {0}")]
    DuplicateOperand(usize),
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    OutOfRange { index: usize, n_qubits: usize },
    #[error("angle must be finite")]
    NonFiniteAngle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: impl Into<Vec<usize>>) -> Self {
        Self {
            kind,
            qubits: qubits.into(),
        }
    }

    pub fn rx(q: usize, angle: f64) -> Self {
        Self::new(GateKind::Rx(angle), [q])
    }

    pub fn ry(q: usize, angle: f64) -> Self {
        Self::new(GateKind::Ry(angle), [q])
    }

    pub fn rz(q: usize, angle: f64) -> Self {
        Self::new(GateKind::Rz(angle), [q])
    }

    pub fn h(q: usize) -> Self {
        Self::new(GateKind::H, [q])
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Self::new(GateKind::Cz, [a, b])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::new(GateKind::Cnot, [control, target])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::new(GateKind::Swap, [a, b])
    }

    pub fn measure_all() -> Self {
        Self::new(GateKind::MeasureAll, [])
    }

    /// Checks arity, operand distinctness and angle finiteness.
    pub fn check(&self) -> Result<(), CircuitError> {
        let got = self.qubits.len();
        match self.kind.arity() {
            Some(n) if n != got => {
                return Err(CircuitError::Arity {
                    gate: self.kind.name(),
                    expected: n.to_string(),
                    got,
                })
            }
            None if got < 2 => {
                return Err(CircuitError::Arity {
                    gate: self.kind.name(),
                    expected: "at least 2".to_string(),
                    got,
                })
            }
            _ => {}
        }
        for (i, q) in self.qubits.iter().enumerate() {
            if self.qubits[..i].contains(q) {
                return Err(CircuitError::DuplicateOperand(*q));
            }
        }
        if self.kind.angle().is_some_and(|a| !a.is_finite()) {
            return Err(CircuitError::NonFiniteAngle);
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == GateKind::MeasureAll {
            return f.write_str("measure all");
        }
        f.write_str(self.kind.name())?;
        if let Some(a) = self.kind.angle() {
            write!(f, "({a})")?;
        }
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

/// Ordered gate list over `n_qubits` logical qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(
        n_qubits: usize,
        gates: impl IntoIterator<Item = Gate>,
    ) -> Result<Self, CircuitError> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.check()?;
        if let Some(&index) = gate.qubits.iter().find(|&&q| q >= self.n_qubits) {
            return Err(CircuitError::OutOfRange {
                index,
                n_qubits: self.n_qubits,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Ends with a global measurement.
    pub fn measured(&self) -> bool {
        self.gates
            .last()
            .is_some_and(|g| g.kind == GateKind::MeasureAll)
    }

    pub fn is_native(&self) -> bool {
        self.gates.iter().all(|g| g.kind.is_native())
    }

    /// Canonical text form, accepted by [`super::parse_circuit`].
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.n_qubits);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
