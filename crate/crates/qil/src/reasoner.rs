//! Measurement, information-loss propagation, and correlation verdicts on
//! parity-equation systems.
//!
//! Measuring a qubit either reads off a value forced by the span or adjoins a
//! fresh singleton constraint and irreversibly loses the complementary-basis
//! variable. Correlation queries are span-membership questions; the verdict
//! for a pair distinguishes perfect correlation, joint conditional
//! correlation through two or more outside qubits, and no correlation.

use thiserror::Error;

use crate::gf2::{bits, Mask, Row};
use crate::qie::{Basis, InfoStatus, QieSystem, QubitVar};

/// A requested measurement. `outcome` supplies the branch when the engine
/// reports the outcome as free; the engine itself never samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasurementSpec {
    pub qubit: usize,
    pub basis: Basis,
    pub outcome: Option<bool>,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum MeasureError {
    #[error("qubit index {qubit} out of range")]
    QubitOutOfRange { qubit: usize },
    #[error("outcome {provided} contradicts the forced value {forced}")]
    Contradiction { provided: bool, forced: bool },
    #[error("outcome is free; an explicit outcome must be supplied")]
    MissingOutcome,
    #[error("internal inconsistency while adjoining outcome")]
    Internal,
}

/// Symbolic answer for a qubit pair measured in one basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    /// `q_i(b) XOR q_j(b)` is forced to the carried value.
    PerfectlyCorrelated(bool),
    Uncorrelated,
    /// The pair becomes perfectly correlated once every listed outside qubit
    /// is measured in the same basis; the set is minimal and joint (two or
    /// more qubits — a lone third qubit closing the parity is a three-way
    /// constraint and the pair itself reports as uncorrelated).
    ConditionallyCorrelated(Vec<QubitVar>),
    /// A pair variable is already determined or lost in this basis.
    NotApplicable(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationVerdict {
    pub pair: (usize, usize),
    pub basis: Basis,
    pub kind: VerdictKind,
}

/// Same-basis verdicts plus the pairwise entanglement-logic flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub pair: (usize, usize),
    pub verdict_c: CorrelationVerdict,
    pub verdict_h: CorrelationVerdict,
    pub all_basis_uncorrelated: bool,
    pub qil_entangled: bool,
}

/// Measure one qubit. Returns the new system, the outcome bit, and whether
/// the outcome was forced by the existing constraints.
pub fn measure(
    sys: &QieSystem,
    spec: &MeasurementSpec,
) -> Result<(QieSystem, bool, bool), MeasureError> {
    if spec.qubit >= sys.n() {
        return Err(MeasureError::QubitOutOfRange { qubit: spec.qubit });
    }
    let bit = 1u64 << spec.qubit;
    if let Some(forced) = sys.forced_rhs(spec.basis, bit) {
        if let Some(provided) = spec.outcome {
            if provided != forced {
                return Err(MeasureError::Contradiction { provided, forced });
            }
        }
        return Ok((sys.clone(), forced, true));
    }
    let outcome = spec.outcome.ok_or(MeasureError::MissingOutcome)?;
    let mut out = sys.clone();
    out.adjoin_outcome(spec.basis, spec.qubit, outcome)
        .map_err(|_| MeasureError::Internal)?;
    let out = out.eliminate_variable(QubitVar {
        qubit: spec.qubit,
        basis: spec.basis.conjugate(),
    });
    Ok((out, outcome, false))
}

/// Run a whole measurement script in order.
pub fn measure_script(
    sys: &QieSystem,
    specs: &[MeasurementSpec],
) -> Result<(QieSystem, Vec<(bool, bool)>), MeasureError> {
    let mut cur = sys.clone();
    let mut results = Vec::with_capacity(specs.len());
    for spec in specs {
        let (next, outcome, forced) = measure(&cur, spec)?;
        cur = next;
        results.push((outcome, forced));
    }
    Ok((cur, results))
}

/// Correlation verdict for a pair in one basis.
pub fn pair_correlation(sys: &QieSystem, i: usize, j: usize, basis: Basis) -> CorrelationVerdict {
    assert_ne!(i, j, "pair qubits must differ");
    let make = |kind| CorrelationVerdict {
        pair: (i, j),
        basis,
        kind,
    };
    for q in [i, j] {
        match sys.status(q, basis) {
            InfoStatus::Determined(_) => {
                return make(VerdictKind::NotApplicable(format!(
                    "qubit {} already determined in {}",
                    q + 1,
                    basis.label()
                )));
            }
            InfoStatus::Lost => {
                return make(VerdictKind::NotApplicable(format!(
                    "qubit {} lost in {}",
                    q + 1,
                    basis.label()
                )));
            }
            InfoStatus::Undetermined => {}
        }
    }
    let pair_mask: Mask = (1 << i) | (1 << j);
    if let Some(v) = sys.forced_rhs(basis, pair_mask) {
        return make(VerdictKind::PerfectlyCorrelated(v));
    }
    match minimal_conditioning_set(sys, i, j, basis) {
        Some(set) if set.count_ones() >= 2 => make(VerdictKind::ConditionallyCorrelated(
            bits(set).map(|q| QubitVar { qubit: q, basis }).collect(),
        )),
        _ => make(VerdictKind::Uncorrelated),
    }
}

/// Smallest set of other, non-lost, same-basis variables whose known values
/// would force the pair parity; ties broken by lexicographically smallest
/// sorted index list. `None` when no such set exists.
fn minimal_conditioning_set(sys: &QieSystem, i: usize, j: usize, basis: Basis) -> Option<Mask> {
    let pair_mask: Mask = (1 << i) | (1 << j);
    let excluded = pair_mask | sys.lost_mask(basis);
    let residual = sys.span(basis).reduce(Row::new(pair_mask, false));
    debug_assert_ne!(residual.members, 0);
    let mut best: Option<Mask> = None;
    for element in sys.span(basis).elements() {
        let candidate = residual.members ^ element.members;
        if candidate == 0 || candidate & excluded != 0 {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => match candidate.count_ones().cmp(&b.count_ones()) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => lex_smaller(candidate, b),
            },
        };
        if better {
            best = Some(candidate);
        }
    }
    best
}

/// Compare index sets as ascending sorted sequences.
fn lex_smaller(a: Mask, b: Mask) -> bool {
    let mut ia = bits(a);
    let mut ib = bits(b);
    loop {
        match (ia.next(), ib.next()) {
            (Some(x), Some(y)) if x == y => continue,
            (Some(x), Some(y)) => return x < y,
            (None, Some(_)) => return true,
            (_, None) => return false,
        }
    }
}

/// Entanglement criterion: both qubits undetermined in both bases and linked
/// through the hypergraph whose edges are the stored equations of either
/// basis.
pub fn qil_entangled(sys: &QieSystem, i: usize, j: usize) -> bool {
    assert_ne!(i, j);
    for q in [i, j] {
        for b in [Basis::C, Basis::H] {
            if sys.status(q, b) != InfoStatus::Undetermined {
                return false;
            }
        }
    }
    // Union-find over qubits; each equation merges its members. Singleton
    // equations belong to determined qubits and merge nothing.
    let mut parent: Vec<usize> = (0..sys.n()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            parent[r] = parent[parent[r]];
            r = parent[r];
        }
        r
    }
    for b in [Basis::C, Basis::H] {
        for row in sys.span(b).rows() {
            let mut members = bits(row.members);
            if let Some(first) = members.next() {
                let root = find(&mut parent, first);
                for q in members {
                    let r = find(&mut parent, q);
                    parent[r] = root;
                }
            }
        }
    }
    find(&mut parent, i) == find(&mut parent, j)
}

/// True when some span element of `basis` carries qubit `j` while avoiding
/// qubit `i`: a duplicate of `j`'s information survives the loss of `i`.
pub fn preserved_against(sys: &QieSystem, j: usize, i: usize, basis: Basis) -> bool {
    assert_ne!(i, j);
    let shielded = sys.span(basis).eliminate(1 << i);
    shielded.support() & (1 << j) != 0
}

/// The pair is uncorrelated in every choice of local measurement bases.
///
/// Sufficient reading of the shielding argument: neither basis forces the
/// pair parity, both same-basis verdicts are plain uncorrelated, and in each
/// basis where a pair qubit participates at all, its information survives the
/// loss of the other qubit. A `true` here is cross-checked numerically in
/// verify mode before it is trusted.
pub fn all_basis_uncorrelated(sys: &QieSystem, i: usize, j: usize) -> bool {
    assert_ne!(i, j);
    for b in [Basis::C, Basis::H] {
        let verdict = pair_correlation(sys, i, j, b);
        if verdict.kind != VerdictKind::Uncorrelated {
            return false;
        }
        for (a, other) in [(i, j), (j, i)] {
            if sys.span(b).support() & (1 << a) != 0 && !preserved_against(sys, a, other, b) {
                return false;
            }
        }
    }
    true
}

/// The system with the two bases exchanged.
pub fn dual_system(sys: &QieSystem) -> QieSystem {
    sys.dual()
}

/// Partition of qubit indices under span-preserving transpositions.
pub fn equivalence_classes(sys: &QieSystem) -> Vec<Vec<usize>> {
    let n = sys.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            parent[r] = parent[parent[r]];
            r = parent[r];
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if sys.swap_qubits(i, j) == *sys {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[rj] = ri;
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for q in 0..n {
        let r = find(&mut parent, q);
        match roots.iter().position(|&x| x == r) {
            Some(idx) => classes[idx].push(q),
            None => {
                roots.push(r);
                classes.push(vec![q]);
            }
        }
    }
    classes
}

/// One report per unordered pair, ascending.
pub fn correlation_table(sys: &QieSystem) -> Vec<PairReport> {
    let n = sys.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(PairReport {
                pair: (i, j),
                verdict_c: pair_correlation(sys, i, j, Basis::C),
                verdict_h: pair_correlation(sys, i, j, Basis::H),
                all_basis_uncorrelated: all_basis_uncorrelated(sys, i, j),
                qil_entangled: qil_entangled(sys, i, j),
            });
        }
    }
    out
}
