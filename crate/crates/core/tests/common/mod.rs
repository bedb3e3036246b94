#![allow(dead_code)]

pub mod oracles;

use std::fs;
use std::path::{Path, PathBuf};

use snark_designs::formats::parse_design;
use snark_designs::DesignRecord;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Every shipped `.design` file, sorted by path.
pub fn design_paths() -> Vec<PathBuf> {
    let mut out = Vec::new();
    for host in fs::read_dir(data_dir().join("designs")).unwrap() {
        for entry in fs::read_dir(host.unwrap().path()).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_some_and(|e| e == "design") {
                out.push(path);
            }
        }
    }
    out.sort();
    out
}

pub fn load(path: &Path) -> DesignRecord {
    parse_design(&fs::read_to_string(path).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn shipped_records() -> Vec<DesignRecord> {
    design_paths().iter().map(|p| load(p)).collect()
}

pub fn shipped(host_id: &str, snark: usize) -> DesignRecord {
    load(&data_dir().join(format!("designs/{host_id}/g{snark:02}.design")))
}
