//! Serializable report shapes shared by the CLI subcommands, plus the plain
//! text rendering. The JSON layout is versioned through the top-level
//! `schema` field; bump it on any breaking change.

use serde::Serialize;

use crate::gf2::bits;
use crate::qie::{Basis, InfoStatus, ParityEquation, QieSystem, QubitVar};
use crate::reasoner::{CorrelationVerdict, PairReport, VerdictKind};

pub const SCHEMA_VERSION: u32 = 1;

/// One parity equation with 1-based qubit indices.
#[derive(Clone, Debug, Serialize)]
pub struct EquationJson {
    pub basis: &'static str,
    pub qubits: Vec<usize>,
    pub rhs: u8,
}

impl EquationJson {
    pub fn from_equation(eq: &ParityEquation) -> Self {
        EquationJson {
            basis: eq.basis.label(),
            qubits: eq.qubits().map(|q| q + 1).collect(),
            rhs: u8::from(eq.rhs),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QubitStatusJson {
    pub qubit: usize,
    pub c: String,
    pub h: String,
}

fn status_text(status: InfoStatus) -> String {
    match status {
        InfoStatus::Undetermined => "undetermined".into(),
        InfoStatus::Determined(v) => format!("determined:{}", u8::from(v)),
        InfoStatus::Lost => "lost".into(),
    }
}

fn var_json(var: &QubitVar) -> String {
    format!("{}{}", var.qubit + 1, var.basis.label())
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictJson {
    pub pair: [usize; 2],
    pub basis: &'static str,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<u8>,
    /// Conditioning variables as "3c" style tokens, present for the
    /// conditional kind only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditioning: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerdictJson {
    pub fn from_verdict(v: &CorrelationVerdict) -> Self {
        let (kind, rhs, conditioning, note) = match &v.kind {
            VerdictKind::PerfectlyCorrelated(rhs) => {
                ("perfectly_correlated", Some(u8::from(*rhs)), None, None)
            }
            VerdictKind::Uncorrelated => ("uncorrelated", None, None, None),
            VerdictKind::ConditionallyCorrelated(vars) => (
                "conditionally_correlated",
                None,
                Some(vars.iter().map(var_json).collect()),
                None,
            ),
            VerdictKind::NotApplicable(reason) => {
                ("not_applicable", None, None, Some(reason.clone()))
            }
        };
        VerdictJson {
            pair: [v.pair.0 + 1, v.pair.1 + 1],
            basis: v.basis.label(),
            kind,
            rhs,
            conditioning,
            note,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReportJson {
    pub pair: [usize; 2],
    pub verdict_c: VerdictJson,
    pub verdict_h: VerdictJson,
    pub all_basis_uncorrelated: bool,
    pub qil_entangled: bool,
}

impl PairReportJson {
    pub fn from_report(r: &PairReport) -> Self {
        PairReportJson {
            pair: [r.pair.0 + 1, r.pair.1 + 1],
            verdict_c: VerdictJson::from_verdict(&r.verdict_c),
            verdict_h: VerdictJson::from_verdict(&r.verdict_h),
            all_basis_uncorrelated: r.all_basis_uncorrelated,
            qil_entangled: r.qil_entangled,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasurementJson {
    pub qubit: usize,
    pub basis: &'static str,
    pub outcome: u8,
    pub forced: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub schema: u32,
    pub n: usize,
    pub representable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equations_text: Option<String>,
    pub equations: Vec<EquationJson>,
    pub statuses: Vec<QubitStatusJson>,
    pub measurements: Vec<MeasurementJson>,
    pub pairs: Vec<PairReportJson>,
    /// Interchangeable-qubit classes, 1-based.
    pub classes: Vec<Vec<usize>>,
}

impl AnalyzeReport {
    pub fn not_representable(n: usize, error: String) -> Self {
        AnalyzeReport {
            schema: SCHEMA_VERSION,
            n,
            representable: false,
            error: Some(error),
            equations_text: None,
            equations: Vec::new(),
            statuses: Vec::new(),
            measurements: Vec::new(),
            pairs: Vec::new(),
            classes: Vec::new(),
        }
    }

    pub fn system_summary(sys: &QieSystem) -> (String, Vec<EquationJson>, Vec<QubitStatusJson>) {
        let text = sys.canonical_text();
        let equations = [Basis::C, Basis::H]
            .iter()
            .flat_map(|&b| {
                sys.equations(b)
                    .map(|eq| EquationJson::from_equation(&eq))
                    .collect::<Vec<_>>()
            })
            .collect();
        let statuses = (0..sys.n())
            .map(|q| QubitStatusJson {
                qubit: q + 1,
                c: status_text(sys.status(q, Basis::C)),
                h: status_text(sys.status(q, Basis::H)),
            })
            .collect();
        (text, equations, statuses)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: true,
            detail: None,
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: false,
            detail: Some(detail.into()),
        }
    }

    pub fn note(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: true,
            detail: Some(detail.into()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub representable: bool,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub schema: u32,
    pub dual: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioResult {
    pub name: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub schema: u32,
    pub scenarios: Vec<ScenarioResult>,
    pub passed: bool,
}

pub fn render_verdict(v: &CorrelationVerdict) -> String {
    match &v.kind {
        VerdictKind::PerfectlyCorrelated(rhs) => {
            format!("perfectly correlated (xor = {})", u8::from(*rhs))
        }
        VerdictKind::Uncorrelated => "uncorrelated".into(),
        VerdictKind::ConditionallyCorrelated(vars) => {
            let names: Vec<String> = vars.iter().map(var_json).collect();
            format!("conditionally correlated via {{{}}}", names.join(", "))
        }
        VerdictKind::NotApplicable(reason) => format!("not applicable ({reason})"),
    }
}

pub fn render_analyze(report: &AnalyzeReport) -> String {
    let mut out = String::new();
    if !report.representable {
        out.push_str("symbolic derivation: not representable\n");
        if let Some(err) = &report.error {
            out.push_str(&format!("  {err}\n"));
        }
        return out;
    }
    if let Some(text) = &report.equations_text {
        out.push_str(&format!("equations  {text}\n"));
    }
    out.push_str("statuses   ");
    let cells: Vec<String> = report
        .statuses
        .iter()
        .map(|s| format!("q{}[c:{} h:{}]", s.qubit, s.c, s.h))
        .collect();
    out.push_str(&cells.join(" "));
    out.push('\n');
    for m in &report.measurements {
        out.push_str(&format!(
            "measure    q{} in {}: outcome {} ({})\n",
            m.qubit,
            m.basis,
            m.outcome,
            if m.forced { "forced" } else { "free" }
        ));
    }
    for p in &report.pairs {
        out.push_str(&format!(
            "pair {}-{}  c: {}  |  h: {}  |  all-basis-uncorrelated: {}  entangled: {}\n",
            p.pair[0],
            p.pair[1],
            render_verdict_json(&p.verdict_c),
            render_verdict_json(&p.verdict_h),
            p.all_basis_uncorrelated,
            p.qil_entangled,
        ));
    }
    if !report.classes.is_empty() {
        let classes: Vec<String> = report
            .classes
            .iter()
            .map(|c| {
                let names: Vec<String> = c.iter().map(|q| q.to_string()).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        out.push_str(&format!("classes    {}\n", classes.join(" ")));
    }
    out
}

fn render_verdict_json(v: &VerdictJson) -> String {
    match v.kind {
        "perfectly_correlated" => format!("perfect (xor = {})", v.rhs.unwrap_or(0)),
        "uncorrelated" => "uncorrelated".into(),
        "conditionally_correlated" => format!(
            "conditional via {{{}}}",
            v.conditioning.as_deref().unwrap_or(&[]).join(", ")
        ),
        _ => format!("n/a ({})", v.note.as_deref().unwrap_or("")),
    }
}

pub fn render_verify(report: &VerifyReport) -> String {
    let mut out = String::new();
    for check in &report.checks {
        let mark = if check.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{mark}  {}", check.name));
        if let Some(detail) = &check.detail {
            out.push_str(&format!("  ({detail})"));
        }
        out.push('\n');
    }
    out.push_str(if report.passed {
        "verify: PASS\n"
    } else {
        "verify: FAIL\n"
    });
    out
}

pub fn render_corpus(report: &CorpusReport) -> String {
    let mut out = String::new();
    for s in &report.scenarios {
        let mark = if s.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{mark}  {}\n", s.name));
        for f in &s.failures {
            out.push_str(&format!("      {f}\n"));
        }
    }
    out.push_str(if report.passed {
        "corpus: PASS\n"
    } else {
        "corpus: FAIL\n"
    });
    out
}

/// Mask rendered as 1-based qubit list, for check details.
pub fn mask_qubits(mask: u64) -> Vec<usize> {
    bits(mask).map(|q| q + 1).collect()
}
