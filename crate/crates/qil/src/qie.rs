//! Parity-equation systems over qubit values and their gate transformations.
//!
//! A system holds two sets of basis-pure XOR constraints, one over
//! computational-basis values and one over Hadamard-basis values, each kept in
//! reduced row-echelon form. Gates in the Bell class (H, X, Z, CNOT) act as
//! invertible rewrites on the constraint sets; a Hadamard on a strict qubit
//! subset can push the state outside the representable class, which is a hard
//! error rather than a guess.

use num_complex::Complex64;
use thiserror::Error;

use crate::gf2::{bits, Gf2Span, Mask, Row};

/// Measurement basis tag: computational (`C`) or Hadamard-rotated (`H`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    C,
    H,
}

impl Basis {
    pub fn conjugate(self) -> Basis {
        match self {
            Basis::C => Basis::H,
            Basis::H => Basis::C,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Basis::C => "c",
            Basis::H => "h",
        }
    }

    fn index(self) -> usize {
        match self {
            Basis::C => 0,
            Basis::H => 1,
        }
    }
}

/// One qubit's value variable in a fixed basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QubitVar {
    pub qubit: usize,
    pub basis: Basis,
}

/// A basis-pure parity constraint over qubit variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParityEquation {
    pub basis: Basis,
    pub members: Mask,
    pub rhs: bool,
}

impl ParityEquation {
    pub fn new(basis: Basis, members: Mask, rhs: bool) -> Self {
        ParityEquation {
            basis,
            members,
            rhs,
        }
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        bits(self.members)
    }
}

/// Per-qubit, per-basis information marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfoStatus {
    Undetermined,
    Determined(bool),
    Lost,
}

/// Circuit gate. `U1Q` is an arbitrary single-qubit rotation supported only
/// by the numerical backend; the symbolic layer rejects it.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// Hadamard on a set of qubits, applied simultaneously. Grouping matters
    /// symbolically: H on all qubits of an entangled block is representable
    /// where one-at-a-time application is not.
    H(Vec<usize>),
    X(usize),
    Z(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    U1Q {
        qubit: usize,
        a1: Complex64,
        a2: Complex64,
        alpha: f64,
    },
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum QieError {
    #[error("system must have at least one qubit")]
    InvalidSize,
    #[error("qubit index {qubit} out of range for {n}-qubit system")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("control and target of a CNOT must differ")]
    ControlEqualsTarget,
    #[error("Hadamard on {qubits:?} leaves the parity-representable class")]
    NotRepresentable { qubits: Vec<usize> },
    #[error("gate not supported by the symbolic layer")]
    UnsupportedGate,
    #[error("internal inconsistency: contradictory equation 0 = 1")]
    InternalInconsistency,
}

/// The complete constraint system of a state: one span per basis plus
/// per-basis masks of variables whose values have been irreversibly lost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QieSystem {
    n: usize,
    spans: [Gf2Span; 2],
    lost: [Mask; 2],
}

impl QieSystem {
    /// Encode the product state with the given computational-basis bits as
    /// one singleton equation per qubit.
    pub fn new_system(n: usize, init_bits: &[bool]) -> Result<Self, QieError> {
        if n == 0 || n > Mask::BITS as usize {
            return Err(QieError::InvalidSize);
        }
        if init_bits.len() != n {
            return Err(QieError::InvalidSize);
        }
        let rows = init_bits
            .iter()
            .enumerate()
            .map(|(i, &b)| Row::new(1 << i, b));
        let span = Gf2Span::from_rows(rows).expect("singletons are independent");
        Ok(QieSystem {
            n,
            spans: [span, Gf2Span::new()],
            lost: [0, 0],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn span(&self, basis: Basis) -> &Gf2Span {
        &self.spans[basis.index()]
    }

    pub fn lost_mask(&self, basis: Basis) -> Mask {
        self.lost[basis.index()]
    }

    pub fn equations(&self, basis: Basis) -> impl Iterator<Item = ParityEquation> + '_ {
        self.span(basis)
            .rows()
            .iter()
            .map(move |r| ParityEquation::new(basis, r.members, r.rhs))
    }

    pub fn status(&self, qubit: usize, basis: Basis) -> InfoStatus {
        if self.lost[basis.index()] & (1 << qubit) != 0 {
            InfoStatus::Lost
        } else if let Some(v) = self.span(basis).forced_rhs(1 << qubit) {
            InfoStatus::Determined(v)
        } else {
            InfoStatus::Undetermined
        }
    }

    fn check_index(&self, qubit: usize) -> Result<(), QieError> {
        if qubit < self.n {
            Ok(())
        } else {
            Err(QieError::QubitOutOfRange { qubit, n: self.n })
        }
    }

    /// Lost flags never cover variables that participate in a constraint: a
    /// gate that rewrites a measured-away variable back into the span has
    /// re-entangled it, so the value is constrained again.
    fn sync_lost(&mut self) {
        self.lost[0] &= !self.spans[0].support();
        self.lost[1] &= !self.spans[1].support();
    }

    /// X on qubit `i`: flip the rhs of every computational equation that
    /// contains the qubit.
    pub fn apply_x(&self, i: usize) -> Result<QieSystem, QieError> {
        self.check_index(i)?;
        Ok(self.negate(Basis::C, i))
    }

    /// Z on qubit `i`: the Hadamard mirror of X.
    pub fn apply_z(&self, i: usize) -> Result<QieSystem, QieError> {
        self.check_index(i)?;
        Ok(self.negate(Basis::H, i))
    }

    fn negate(&self, basis: Basis, i: usize) -> QieSystem {
        let bit = 1 << i;
        let mut out = self.clone();
        let rows = out.spans[basis.index()]
            .rows()
            .iter()
            .map(|r| Row::new(r.members, r.rhs ^ (r.members & bit != 0)));
        out.spans[basis.index()] =
            Gf2Span::from_rows(rows.collect::<Vec<_>>()).expect("rhs flips keep independence");
        out
    }

    /// Hadamard on a qubit set: relabel the set's variables between the two
    /// bases simultaneously.
    ///
    /// Each span must decompose into a part supported inside the set and a
    /// part supported outside it; the inside part switches basis. When a
    /// constraint straddles the boundary the state has no basis-pure
    /// description and the call fails.
    pub fn apply_h(&self, qubits: &[usize]) -> Result<QieSystem, QieError> {
        if qubits.is_empty() {
            return Err(QieError::InvalidSize);
        }
        let mut mask: Mask = 0;
        for &q in qubits {
            self.check_index(q)?;
            mask |= 1 << q;
        }
        let mut moved = [Gf2Span::new(), Gf2Span::new()];
        let mut kept = [Gf2Span::new(), Gf2Span::new()];
        for b in 0..2 {
            let span = &self.spans[b];
            let inside = span.restrict_within(mask);
            let outside = span.eliminate(mask);
            if inside.rank() + outside.rank() != span.rank() {
                return Err(QieError::NotRepresentable {
                    qubits: qubits.to_vec(),
                });
            }
            moved[b] = inside;
            kept[b] = outside;
        }
        let merge = |a: &Gf2Span, b: &Gf2Span| {
            Gf2Span::from_rows(a.rows().iter().chain(b.rows()).copied())
                .expect("disjoint supports cannot contradict")
        };
        let mut out = QieSystem {
            n: self.n,
            spans: [merge(&kept[0], &moved[1]), merge(&kept[1], &moved[0])],
            lost: self.lost,
        };
        // Statuses of relabeled qubits swap their basis entries.
        let swapped_c = (self.lost[0] & !mask) | (self.lost[1] & mask);
        let swapped_h = (self.lost[1] & !mask) | (self.lost[0] & mask);
        out.lost = [swapped_c, swapped_h];
        out.sync_lost();
        Ok(out)
    }

    /// CNOT rewrite in the new variables: computational equations containing
    /// the target gain the control; Hadamard equations containing the control
    /// gain the target.
    pub fn apply_cnot(&self, control: usize, target: usize) -> Result<QieSystem, QieError> {
        self.check_index(control)?;
        self.check_index(target)?;
        if control == target {
            return Err(QieError::ControlEqualsTarget);
        }
        let cbit = 1 << control;
        let tbit = 1 << target;
        let rewrite = |span: &Gf2Span, hit: Mask, add: Mask| {
            let rows = span.rows().iter().map(|r| {
                let members = if r.members & hit != 0 {
                    r.members ^ add
                } else {
                    r.members
                };
                Row::new(members, r.rhs)
            });
            Gf2Span::from_rows(rows.collect::<Vec<_>>())
                .expect("invertible variable rewrite keeps independence")
        };
        let mut out = QieSystem {
            n: self.n,
            spans: [
                rewrite(&self.spans[0], tbit, cbit),
                rewrite(&self.spans[1], cbit, tbit),
            ],
            lost: self.lost,
        };
        out.sync_lost();
        Ok(out)
    }

    pub fn apply_gate(&self, gate: &Gate) -> Result<QieSystem, QieError> {
        match gate {
            Gate::H(qs) => self.apply_h(qs),
            Gate::X(i) => self.apply_x(*i),
            Gate::Z(i) => self.apply_z(*i),
            Gate::Cnot { control, target } => self.apply_cnot(*control, *target),
            Gate::U1Q { .. } => Err(QieError::UnsupportedGate),
        }
    }

    /// Span membership for a probe member set; the probe's own rhs plays no
    /// part. Returns the forced parity value when the member set lies in the
    /// span of the probe's basis.
    pub fn span_contains(&self, probe: &ParityEquation) -> Option<bool> {
        self.forced_rhs(probe.basis, probe.members)
    }

    pub fn forced_rhs(&self, basis: Basis, members: Mask) -> Option<bool> {
        self.span(basis).forced_rhs(members)
    }

    /// Drop a variable from its basis's span, keeping only the constraint
    /// combinations that avoid it. The variable is marked lost, and so is any
    /// other variable whose every constraint depended on it: with its last
    /// equation gone such a value is fundamentally random too.
    pub fn eliminate_variable(&self, var: QubitVar) -> QieSystem {
        let b = var.basis.index();
        let bit = 1 << var.qubit;
        let mut out = self.clone();
        let before = out.spans[b].support();
        out.spans[b] = out.spans[b].eliminate(bit);
        let dropped = before & !out.spans[b].support();
        out.lost[b] |= dropped | bit;
        out
    }

    /// Adjoin a measured singleton `q(basis) = value`, clearing any stale
    /// lost flag on the re-determined variable.
    pub(crate) fn adjoin_outcome(
        &mut self,
        basis: Basis,
        qubit: usize,
        value: bool,
    ) -> Result<(), QieError> {
        let b = basis.index();
        self.lost[b] &= !(1 << qubit);
        self.spans[b]
            .adjoin(Row::new(1 << qubit, value))
            .map_err(|_| QieError::InternalInconsistency)
    }

    /// Swap the two bases wholesale: the dual system.
    pub fn dual(&self) -> QieSystem {
        QieSystem {
            n: self.n,
            spans: [self.spans[1].clone(), self.spans[0].clone()],
            lost: [self.lost[1], self.lost[0]],
        }
    }

    /// The system with qubit indices `a` and `b` transposed everywhere.
    pub fn swap_qubits(&self, a: usize, b: usize) -> QieSystem {
        let swap_mask = |m: Mask| {
            let ba = (m >> a) & 1;
            let bb = (m >> b) & 1;
            if ba != bb {
                m ^ ((1 << a) | (1 << b))
            } else {
                m
            }
        };
        QieSystem {
            n: self.n,
            spans: [self.spans[0].swap_vars(a, b), self.spans[1].swap_vars(a, b)],
            lost: [swap_mask(self.lost[0]), swap_mask(self.lost[1])],
        }
    }

    /// Canonical text form, 1-based indices: `c: 1+3=0; 2+3=0 | h: 1+2+3=0`.
    pub fn canonical_text(&self) -> String {
        let render = |basis: Basis| {
            let span = self.span(basis);
            if span.is_empty() {
                return "-".to_string();
            }
            span.rows()
                .iter()
                .map(|r| {
                    let vars = bits(r.members)
                        .map(|q| (q + 1).to_string())
                        .collect::<Vec<_>>()
                        .join("+");
                    format!("{}={}", vars, u8::from(r.rhs))
                })
                .collect::<Vec<_>>()
                .join("; ")
        };
        format!("c: {} | h: {}", render(Basis::C), render(Basis::H))
    }

    pub fn total_rank(&self) -> usize {
        self.spans[0].rank() + self.spans[1].rank()
    }

    /// Structural invariants, for tests: lost variables absent from spans and
    /// never simultaneously determined in both bases.
    pub fn check_invariants(&self) -> Result<(), String> {
        for b in [Basis::C, Basis::H] {
            if self.lost_mask(b) & self.span(b).support() != 0 {
                return Err(format!("lost variable stored in {} equations", b.label()));
            }
        }
        for q in 0..self.n {
            let det_c = matches!(self.status(q, Basis::C), InfoStatus::Determined(_));
            let det_h = matches!(self.status(q, Basis::H), InfoStatus::Determined(_));
            if det_c && det_h {
                return Err(format!("qubit {} determined in both bases", q + 1));
            }
        }
        Ok(())
    }
}

/// Left-fold of the per-gate rewrites over a circuit.
pub fn derive_from_circuit(
    gates: &[Gate],
    n: usize,
    init_bits: &[bool],
) -> Result<QieSystem, QieError> {
    let mut sys = QieSystem::new_system(n, init_bits)?;
    for gate in gates {
        sys = sys.apply_gate(gate)?;
    }
    Ok(sys)
}
