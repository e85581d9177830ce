use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qil::dsl::{parse_circuit, CircuitDocument, Directive};
use qil::qie::derive_from_circuit;
use qil::reasoner::{equivalence_classes, measure, MeasurementSpec};
use qil::report::{
    render_analyze, render_corpus, render_verify, AnalyzeReport, MeasurementJson, PairReportJson,
    SCHEMA_VERSION,
};
use qil::scenario::run_corpus;
use qil::verify::{run_duality, verify_document, VerifyOptions};

#[derive(Parser)]
#[command(name = "qil", about = "Parity-equation reasoning about qubit circuits")]
struct Cli {
    /// Emit machine-readable JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the equation system and answer the document's queries.
    Analyze { file: String },
    /// Cross-check every symbolic claim against the statevector simulation.
    Verify {
        file: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 20250823)]
        seed: u64,
    },
    /// Test whether two circuits produce basis-swapped equation systems.
    Duality { file_a: String, file_b: String },
    /// Run the built-in scenario corpus as a regression gate.
    Corpus {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 20250823)]
        seed: u64,
    },
}

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn load(path: &str) -> Result<CircuitDocument, u8> {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("{path}: {e}");
            return Err(EXIT_INPUT);
        }
    };
    parse_circuit(&text).map_err(|e| {
        eprintln!("{path}: {e}");
        EXIT_INPUT
    })
}

fn analyze_document(doc: &CircuitDocument) -> AnalyzeReport {
    let sys = match derive_from_circuit(&doc.gates, doc.n, &doc.init) {
        Ok(sys) => sys,
        Err(e) => return AnalyzeReport::not_representable(doc.n, e.to_string()),
    };
    let mut cur = sys;
    let mut measurements = Vec::new();
    let mut pairs = Vec::new();
    for directive in &doc.directives {
        match directive {
            Directive::Measure(spec) => {
                // A free measurement without a scripted outcome takes the 0
                // branch so analysis stays deterministic; forced outcomes
                // keep their forced value.
                let result = measure(&cur, spec).or_else(|e| {
                    if e == qil::reasoner::MeasureError::MissingOutcome {
                        measure(
                            &cur,
                            &MeasurementSpec {
                                outcome: Some(false),
                                ..*spec
                            },
                        )
                    } else {
                        Err(e)
                    }
                });
                match result {
                    Ok((next, outcome, forced)) => {
                        cur = next;
                        measurements.push(MeasurementJson {
                            qubit: spec.qubit + 1,
                            basis: spec.basis.label(),
                            outcome: u8::from(outcome),
                            forced,
                        });
                    }
                    Err(e) => {
                        return AnalyzeReport::not_representable(
                            doc.n,
                            format!("measurement failed: {e}"),
                        )
                    }
                }
            }
            Directive::Pair(i, j) => {
                let table = qil::reasoner::correlation_table(&cur);
                if let Some(report) = table.iter().find(|r| r.pair == (*i.min(j), *i.max(j))) {
                    pairs.push(PairReportJson::from_report(report));
                }
            }
        }
    }
    if !doc
        .directives
        .iter()
        .any(|d| matches!(d, Directive::Pair(..)))
    {
        for report in qil::reasoner::correlation_table(&cur) {
            pairs.push(PairReportJson::from_report(&report));
        }
    }
    let (text, equations, statuses) = AnalyzeReport::system_summary(&cur);
    let classes = equivalence_classes(&cur)
        .into_iter()
        .map(|class| class.into_iter().map(|q| q + 1).collect())
        .collect();
    AnalyzeReport {
        schema: SCHEMA_VERSION,
        n: doc.n,
        representable: true,
        error: None,
        equations_text: Some(text),
        equations,
        statuses,
        measurements,
        pairs,
        classes,
    }
}

fn emit<T: serde::Serialize>(json: bool, value: &T, text: String) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("report serializes")
        );
    } else {
        print!("{text}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze { file } => match load(&file) {
            Ok(doc) => {
                let report = analyze_document(&doc);
                emit(cli.json, &report, render_analyze(&report));
                if report.representable {
                    0
                } else {
                    EXIT_INPUT
                }
            }
            Err(code) => code,
        },
        Command::Verify { file, trials, seed } => match load(&file) {
            Ok(doc) => match verify_document(&doc, &VerifyOptions { trials, seed }) {
                Ok(report) => {
                    emit(cli.json, &report, render_verify(&report));
                    if report.passed {
                        0
                    } else {
                        EXIT_MISMATCH
                    }
                }
                Err(e) => {
                    eprintln!("{file}: {e}");
                    EXIT_INPUT
                }
            },
            Err(code) => code,
        },
        Command::Duality { file_a, file_b } => match (load(&file_a), load(&file_b)) {
            (Ok(a), Ok(b)) => match run_duality(&a, &b) {
                Ok(report) => {
                    emit(
                        cli.json,
                        &report,
                        format!("dual: {}\n{}\n", report.dual, report.detail),
                    );
                    0
                }
                Err(e) => {
                    eprintln!("{e}");
                    EXIT_INPUT
                }
            },
            (Err(code), _) | (_, Err(code)) => code,
        },
        Command::Corpus { trials, seed } => {
            let report = run_corpus(&VerifyOptions { trials, seed });
            emit(cli.json, &report, render_corpus(&report));
            if report.passed {
                0
            } else {
                EXIT_MISMATCH
            }
        }
    };
    ExitCode::from(code)
}
