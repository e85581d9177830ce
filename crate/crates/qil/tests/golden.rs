//! Golden amplitude files for the five built-in states. Regenerate with
//! `UPDATE_GOLDEN=1 cargo test -p qil --test golden`.

use std::fs;
use std::path::PathBuf;

use qil::dsl::parse_circuit;
use qil::oracle::simulate;
use qil::scenario::corpus;

#[test]
fn corpus_states_match_golden_amplitudes() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for scenario in corpus() {
        let doc = parse_circuit(scenario.source).unwrap();
        let state = simulate(&doc.gates, doc.n, &doc.init).unwrap();
        let text = state.to_sparse_text() + "\n";
        let path: PathBuf = [
            env!("CARGO_MANIFEST_DIR"),
            "tests",
            "golden",
            &format!("{}.amps", scenario.name),
        ]
        .iter()
        .collect();
        if update {
            fs::write(&path, &text).unwrap();
            continue;
        }
        let golden =
            fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(text, golden, "{} amplitudes drifted", scenario.name);
    }
}
