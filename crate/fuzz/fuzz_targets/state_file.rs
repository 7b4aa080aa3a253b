//! Fuzzes the matrix-file JSON decoders: arbitrary bytes must either parse
//! into a fully validated object or return a structured error — never panic,
//! and never yield an operator that violates its own invariants.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qgeo::fileio::{parse_hamiltonian_json, parse_state_json, state_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };

    if let Ok(state) = parse_state_json(text) {
        // A successful parse must survive the serialize -> parse round trip
        // bit-for-bit: the writer prints full-precision floats and the
        // reader re-runs the full validation stack.
        let encoded = state_to_json(&state);
        let again = parse_state_json(&encoded).expect("round trip must reparse");
        assert_eq!(
            state.matrix(),
            again.matrix(),
            "state round trip changed the matrix"
        );
    }

    // The Hamiltonian decoder shares the file schema but swaps the
    // density-operator validation for a Hermiticity check; run it on the
    // same input to cover both validation paths per execution.
    if let Ok(h) = parse_hamiltonian_json(text) {
        assert_eq!(h.nrows(), h.ncols());
    }
});
