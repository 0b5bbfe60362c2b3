#![allow(dead_code)]

use std::path::PathBuf;

use heffter::{parse_grid, Grid};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture(name: &str) -> Grid {
    parse_grid(&fixture_text(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Rows of a partial-sum table: line index followed by its sums.
pub fn table(name: &str) -> Vec<(usize, Vec<i64>)> {
    fixture_text(name)
        .lines()
        .map(|line| {
            let mut fields = line.split(',').map(|f| f.trim().parse::<i64>().unwrap());
            let index = fields.next().unwrap() as usize;
            (index, fields.collect())
        })
        .collect()
}
