//! Fuzzes the flat key=value settings parser used by the command line's
//! `--config` flag: arbitrary text must parse or fail cleanly, and anything
//! that parses must survive a write-out/reparse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qgeo_cli::config::parse_config;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };

    let Ok(map) = parse_config(text) else {
        return;
    };

    for (key, value) in &map {
        assert!(!key.is_empty(), "parser accepted an empty key");
        assert!(
            key.chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.')),
            "parser accepted key {key:?} outside its charset"
        );
        assert_eq!(value.trim(), value, "parser kept padding on {key:?}");
        assert!(
            !value.contains('\n') && !value.contains('\r'),
            "parser let a line break into a value"
        );
    }

    // Canonical re-serialization: one `key = value` line per entry must
    // reparse to the identical map (keys cannot collide, values keep their
    // exact bytes).
    let canonical: String = map
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect();
    let again = parse_config(&canonical).expect("canonical form must reparse");
    assert_eq!(map, again, "round trip changed the settings map");
});
