//! Byte-level regression of every preset against `tests/golden`.
//! Set `RLCOURSE_BLESS=1` to rewrite the golden files.

use std::path::PathBuf;

use rlcourse_experiments::{aggregate, preset, run_experiment, to_csv, PRESET_NAMES};

fn preset_csv(name: &str) -> String {
    let cfg = preset(name).unwrap();
    to_csv(&aggregate(&run_experiment(&cfg).unwrap(), cfg.smoothing_window))
}

#[test]
fn presets_match_golden_csvs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bless = std::env::var_os("RLCOURSE_BLESS").is_some();
    for name in PRESET_NAMES {
        let csv = preset_csv(name);
        let path = dir.join(format!("{name}.csv"));
        if bless {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &csv).unwrap();
            continue;
        }
        let golden = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert!(golden == csv, "{name} no longer matches {}", path.display());
    }
}

#[test]
fn rerun_is_byte_identical() {
    assert_eq!(preset_csv("fig3-supermarket"), preset_csv("fig3-supermarket"));
}
