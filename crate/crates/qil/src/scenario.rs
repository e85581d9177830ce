//! The five built-in reference states with their expected symbolic verdicts.
//!
//! Each fixture carries a short note saying what physical behavior it pins
//! down. The corpus doubles as the regression gate: `run_corpus` replays
//! every fixture symbolically and then runs the full numeric verify pass on
//! each circuit.

use crate::dsl::parse_circuit;
use crate::qie::{derive_from_circuit, Basis, QieSystem, QubitVar};
use crate::reasoner::{
    all_basis_uncorrelated, equivalence_classes, pair_correlation, qil_entangled, VerdictKind,
};
use crate::report::{CorpusReport, ScenarioResult, SCHEMA_VERSION};
use crate::verify::{verify_document, VerifyOptions};

/// One expected symbolic fact about a scenario's derived system.
#[derive(Clone, Debug)]
pub enum Fixture {
    /// Exact canonical equation text.
    Equations(&'static str),
    /// Verdict for a 0-based pair in one basis.
    Verdict {
        i: usize,
        j: usize,
        basis: Basis,
        kind: VerdictKind,
    },
    AllBasisUncorrelated {
        i: usize,
        j: usize,
        expected: bool,
    },
    Entangled {
        i: usize,
        j: usize,
        expected: bool,
    },
    /// Interchangeable-qubit partition, 0-based, classes and members sorted.
    Classes(Vec<Vec<usize>>),
}

pub struct Scenario {
    pub name: &'static str,
    /// What the state demonstrates.
    pub note: &'static str,
    pub source: &'static str,
    pub fixtures: Vec<(&'static str, Fixture)>,
}

fn cond(vars: &[(usize, Basis)]) -> VerdictKind {
    VerdictKind::ConditionallyCorrelated(
        vars.iter()
            .map(|&(qubit, basis)| QubitVar { qubit, basis })
            .collect(),
    )
}

pub fn corpus() -> Vec<Scenario> {
    vec![
        Scenario {
            name: "bell",
            note: "maximally entangled pair, perfectly correlated in both bases",
            source: "qubits 2\nh 1\ncx 1 2\npair 1 2\n",
            fixtures: vec![
                (
                    "pair equations in both bases",
                    Fixture::Equations("c: 1+2=0 | h: 1+2=0"),
                ),
                (
                    "perfect correlation in c",
                    Fixture::Verdict {
                        i: 0,
                        j: 1,
                        basis: Basis::C,
                        kind: VerdictKind::PerfectlyCorrelated(false),
                    },
                ),
                (
                    "perfect correlation in h",
                    Fixture::Verdict {
                        i: 0,
                        j: 1,
                        basis: Basis::H,
                        kind: VerdictKind::PerfectlyCorrelated(false),
                    },
                ),
                (
                    "pair is entangled",
                    Fixture::Entangled {
                        i: 0,
                        j: 1,
                        expected: true,
                    },
                ),
                (
                    "correlated pairs are never all-basis uncorrelated",
                    Fixture::AllBasisUncorrelated {
                        i: 0,
                        j: 1,
                        expected: false,
                    },
                ),
                (
                    "the two qubits are interchangeable",
                    Fixture::Classes(vec![vec![0, 1]]),
                ),
            ],
        },
        Scenario {
            name: "ghz",
            note: "three-way chain correlated in c, one global parity in h",
            source: "qubits 3\nh 1\ncx 1 2\ncx 2 3\npair 1 2\n",
            fixtures: vec![
                (
                    "chain equations in c, global parity in h",
                    Fixture::Equations("c: 1+3=0; 2+3=0 | h: 1+2+3=0"),
                ),
                (
                    "any pair reads equal in c",
                    Fixture::Verdict {
                        i: 0,
                        j: 1,
                        basis: Basis::C,
                        kind: VerdictKind::PerfectlyCorrelated(false),
                    },
                ),
                (
                    "h values of a pair float until the third qubit is read",
                    Fixture::Verdict {
                        i: 0,
                        j: 1,
                        basis: Basis::H,
                        kind: VerdictKind::Uncorrelated,
                    },
                ),
                (
                    "pair 1-2 is entangled",
                    Fixture::Entangled {
                        i: 0,
                        j: 1,
                        expected: true,
                    },
                ),
                (
                    "all three qubits are interchangeable",
                    Fixture::Classes(vec![vec![0, 1, 2]]),
                ),
            ],
        },
        Scenario {
            name: "psi3",
            note: "mirror image of ghz: uncorrelated in c, perfectly correlated in h",
            source: "qubits 3\nh 1\ncx 1 2\nh 3\ncx 3 2\npair 1 2\n",
            fixtures: vec![
                (
                    "global parity in c, chain in h",
                    Fixture::Equations("c: 1+2+3=0 | h: 1+3=0; 2+3=0"),
                ),
                (
                    "c readouts of the pair are independent",
                    Fixture::Verdict {
                        i: 0,
                        j: 1,
                        basis: Basis::C,
                        kind: VerdictKind::Uncorrelated,
                    },
                ),
                (
                    "h readouts of the pair always match",
                    Fixture::Verdict {
                        i: 0,
                        j: 1,
                        basis: Basis::H,
                        kind: VerdictKind::PerfectlyCorrelated(false),
                    },
                ),
                (
                    "pair 1-2 is entangled",
                    Fixture::Entangled {
                        i: 0,
                        j: 1,
                        expected: true,
                    },
                ),
                (
                    "all three qubits are interchangeable",
                    Fixture::Classes(vec![vec![0, 1, 2]]),
                ),
            ],
        },
        Scenario {
            name: "psi4",
            note: "every pair matches in h yet needs the other two qubits in c",
            source: "qubits 4\nh 1\ncx 1 2\nh 3\ncx 3 2\nh 4\ncx 4 3\npair 1 2\n",
            fixtures: vec![
                (
                    "single global parity in c, chain in h",
                    Fixture::Equations("c: 1+2+3+4=0 | h: 1+4=0; 2+4=0; 3+4=0"),
                ),
                (
                    "pair 1-2 matches in h",
                    Fixture::Verdict {
                        i: 0,
                        j: 1,
                        basis: Basis::H,
                        kind: VerdictKind::PerfectlyCorrelated(false),
                    },
                ),
                (
                    "pair 1-2 correlates in c only through qubits 3 and 4",
                    Fixture::Verdict {
                        i: 0,
                        j: 1,
                        basis: Basis::C,
                        kind: cond(&[(2, Basis::C), (3, Basis::C)]),
                    },
                ),
                (
                    "pair 1-3 correlates in c only through qubits 2 and 4",
                    Fixture::Verdict {
                        i: 0,
                        j: 2,
                        basis: Basis::C,
                        kind: cond(&[(1, Basis::C), (3, Basis::C)]),
                    },
                ),
                (
                    "pair 1-2 is entangled",
                    Fixture::Entangled {
                        i: 0,
                        j: 1,
                        expected: true,
                    },
                ),
                (
                    "all four qubits are interchangeable",
                    Fixture::Classes(vec![vec![0, 1, 2, 3]]),
                ),
            ],
        },
        Scenario {
            name: "psi3l",
            note: "entangled pair that stays uncorrelated in every measurement basis",
            source: "qubits 4\nh 1\ncx 1 2\nh 3\ncx 3 2\ncx 2 4\npair 1 2\n",
            fixtures: vec![
                (
                    "the fourth qubit shields qubit 2 in both bases",
                    Fixture::Equations("c: 1+3+4=0; 2+4=0 | h: 1+3=0; 2+3+4=0"),
                ),
                (
                    "pair 1-2 uncorrelated in c",
                    Fixture::Verdict {
                        i: 0,
                        j: 1,
                        basis: Basis::C,
                        kind: VerdictKind::Uncorrelated,
                    },
                ),
                (
                    "pair 1-2 uncorrelated in h",
                    Fixture::Verdict {
                        i: 0,
                        j: 1,
                        basis: Basis::H,
                        kind: VerdictKind::Uncorrelated,
                    },
                ),
                (
                    "pair 1-2 uncorrelated in every basis",
                    Fixture::AllBasisUncorrelated {
                        i: 0,
                        j: 1,
                        expected: true,
                    },
                ),
                (
                    "outside measurements can still activate pair 1-2",
                    Fixture::Entangled {
                        i: 0,
                        j: 1,
                        expected: true,
                    },
                ),
                (
                    "pair 2-4 duplicates values in c",
                    Fixture::Verdict {
                        i: 1,
                        j: 3,
                        basis: Basis::C,
                        kind: VerdictKind::PerfectlyCorrelated(false),
                    },
                ),
                (
                    "pair 2-4 uncorrelated in h",
                    Fixture::Verdict {
                        i: 1,
                        j: 3,
                        basis: Basis::H,
                        kind: VerdictKind::Uncorrelated,
                    },
                ),
                (
                    "pair 1-3 uncorrelated in c",
                    Fixture::Verdict {
                        i: 0,
                        j: 2,
                        basis: Basis::C,
                        kind: VerdictKind::Uncorrelated,
                    },
                ),
                (
                    "pair 1-3 duplicates values in h",
                    Fixture::Verdict {
                        i: 0,
                        j: 2,
                        basis: Basis::H,
                        kind: VerdictKind::PerfectlyCorrelated(false),
                    },
                ),
                (
                    "interchangeable classes 1,3 and 2,4",
                    Fixture::Classes(vec![vec![0, 2], vec![1, 3]]),
                ),
            ],
        },
    ]
}

fn check_fixture(sys: &QieSystem, fixture: &Fixture) -> Result<(), String> {
    match fixture {
        Fixture::Equations(expected) => {
            let got = sys.canonical_text();
            if got == *expected {
                Ok(())
            } else {
                Err(format!("equations '{got}', expected '{expected}'"))
            }
        }
        Fixture::Verdict { i, j, basis, kind } => {
            let got = pair_correlation(sys, *i, *j, *basis);
            if got.kind == *kind {
                Ok(())
            } else {
                Err(format!(
                    "pair ({},{}) in {}: got {:?}, expected {:?}",
                    i + 1,
                    j + 1,
                    basis.label(),
                    got.kind,
                    kind
                ))
            }
        }
        Fixture::AllBasisUncorrelated { i, j, expected } => {
            let got = all_basis_uncorrelated(sys, *i, *j);
            if got == *expected {
                Ok(())
            } else {
                Err(format!(
                    "all_basis_uncorrelated({},{}) = {got}",
                    i + 1,
                    j + 1
                ))
            }
        }
        Fixture::Entangled { i, j, expected } => {
            let got = qil_entangled(sys, *i, *j);
            if got == *expected {
                Ok(())
            } else {
                Err(format!("qil_entangled({},{}) = {got}", i + 1, j + 1))
            }
        }
        Fixture::Classes(expected) => {
            let got = equivalence_classes(sys);
            if got == *expected {
                Ok(())
            } else {
                Err(format!("classes {got:?}, expected {expected:?}"))
            }
        }
    }
}

pub fn run_scenario(scenario: &Scenario, opts: &VerifyOptions) -> ScenarioResult {
    let mut failures = Vec::new();
    let doc = match parse_circuit(scenario.source) {
        Ok(doc) => doc,
        Err(e) => {
            return ScenarioResult {
                name: scenario.name.into(),
                passed: false,
                failures: vec![format!("parse: {e}")],
            }
        }
    };
    match derive_from_circuit(&doc.gates, doc.n, &doc.init) {
        Ok(sys) => {
            for (note, fixture) in &scenario.fixtures {
                if let Err(detail) = check_fixture(&sys, fixture) {
                    failures.push(format!("{note}: {detail}"));
                }
            }
        }
        Err(e) => failures.push(format!("derivation: {e}")),
    }
    match verify_document(&doc, opts) {
        Ok(report) => {
            for check in report.checks.iter().filter(|c| !c.passed) {
                failures.push(format!(
                    "numeric {}: {}",
                    check.name,
                    check.detail.as_deref().unwrap_or("failed")
                ));
            }
        }
        Err(e) => failures.push(format!("oracle: {e}")),
    }
    ScenarioResult {
        name: scenario.name.into(),
        passed: failures.is_empty(),
        failures,
    }
}

pub fn run_corpus(opts: &VerifyOptions) -> CorpusReport {
    let mut scenarios: Vec<ScenarioResult> =
        corpus().iter().map(|s| run_scenario(s, opts)).collect();
    scenarios.sort_by(|a, b| a.name.cmp(&b.name));
    let passed = scenarios.iter().all(|s| s.passed);
    CorpusReport {
        schema: SCHEMA_VERSION,
        scenarios,
        passed,
    }
}
