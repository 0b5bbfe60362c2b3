//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero only when a criterion fails that is not listed in
//! `KNOWN_FAILURES`, or when a listed one unexpectedly passes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use heffter::{
    alpha_range, build_h3_base, build_h4p, build_h4p3, build_shifted, heffter_modulus,
    partial_sums, relocate_h3, search_h3_base, verify_ladder, verify_simple_under, verify_square,
    verify_support_shifted, Grid, Line, LineOrdering, MergeOptions, OrderRule,
    DEFAULT_SEARCH_BUDGET,
};
use num_integer::Integer;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

/// The printed grids for these two examples contain cells that break the
/// defining properties, so an exact reproduction is impossible.
const KNOWN_FAILURES: &[&str] = &["1b", "1d"];

struct Verdict {
    id: &'static str,
    passed: bool,
    detail: String,
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixtures().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn fixture(name: &str) -> Grid {
    heffter::parse_grid(&fixture_text(name)).unwrap()
}

fn heffter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heffter"))
        .args(args)
        .output()
        .expect("failed to launch the heffter binary")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn listed(failures: &[String]) -> String {
    if failures.is_empty() {
        "0 failures".to_string()
    } else {
        format!("{} failures: {}", failures.len(), failures.join(" "))
    }
}

fn golden(id: &'static str, label: &str, args: &[&str], printed: &str) -> Verdict {
    let start = Instant::now();
    let out = heffter(args);
    let elapsed = start.elapsed();
    let built = heffter::parse_grid(&stdout(&out));
    let printed_grid = fixture(printed);
    let (passed, detail) = match built {
        Ok(grid) => {
            let diff = grid.differences(&printed_grid);
            let mut detail = format!(
                "{label}: exit {:?}, {} cells differ from the print",
                out.status.code(),
                diff.len()
            );
            if let Some((cell, ours, theirs)) = diff.first() {
                write!(
                    detail,
                    " (first at {cell:?}: built {ours:?}, printed {theirs:?})"
                )
                .unwrap();
            }
            if !diff.is_empty() {
                let k = printed_grid.fills_per_row().unwrap_or(0);
                let n = printed_grid.rows();
                let ok = verify_square(&printed_grid, n, k, false)
                    .map(|r| r.passed())
                    .unwrap_or(false);
                write!(
                    detail,
                    "; printed grid {} verification",
                    if ok { "passes" } else { "fails" }
                )
                .unwrap();
            }
            write!(detail, ", {}", secs(elapsed)).unwrap();
            (
                diff.is_empty() && out.status.success() && elapsed < Duration::from_secs(1),
                detail,
            )
        }
        Err(e) => (false, format!("{label}: could not parse output: {e}")),
    };
    Verdict { id, passed, detail }
}

fn criterion_1() -> Vec<Verdict> {
    vec![
        golden(
            "1a",
            "H(17;12)",
            &["construct", "h4p", "--n", "17", "--p", "3"],
            "h17_k12.heffter",
        ),
        golden(
            "1b",
            "H(17;16)",
            &["construct", "h4p", "--n", "17", "--p", "4"],
            "h17_k16_printed.heffter",
        ),
        golden(
            "1c",
            "H(17;12,3) alpha=6",
            &[
                "construct",
                "shifted",
                "--n",
                "17",
                "--p",
                "3",
                "--gamma",
                "3",
                "--alpha",
                "6",
            ],
            "shifted17_k12_gamma3_alpha6.heffter",
        ),
        golden(
            "1d",
            "H(17;15) alpha=8",
            &["construct", "h4p3", "--n", "17", "--p", "3", "--alpha", "8"],
            "h17_k15_alpha8_printed.heffter",
        ),
    ]
}

fn parse_table(text: &str) -> Vec<Vec<i64>> {
    text.lines()
        .map(|l| {
            l.split(',')
                .skip(1)
                .map(|f| f.trim().parse().unwrap())
                .collect()
        })
        .collect()
}

fn criterion_2() -> Verdict {
    let path = fixtures().join("shifted17_k12_gamma3_alpha6.heffter");
    let path = path.to_str().unwrap();
    let mut mismatches = Vec::new();
    let mut col11_min = 0;
    for (lines, table) in [
        ("rows", "shifted17_row_partial_sums.csv"),
        ("columns", "shifted17_column_partial_sums.csv"),
    ] {
        let out = heffter(&[
            "partial-sums",
            path,
            "--order",
            "diagonal",
            "--lines",
            lines,
        ]);
        let ours = parse_table(&stdout(&out));
        let printed = parse_table(&fixture_text(table));
        if ours.len() != printed.len() {
            mismatches.push(format!(
                "{lines}: {} lines vs {}",
                ours.len(),
                printed.len()
            ));
        }
        for (i, (a, b)) in ours.iter().zip(&printed).enumerate() {
            if a != b {
                mismatches.push(format!("{lines} {i}"));
            }
        }
        if lines == "columns" {
            col11_min = ours
                .get(11)
                .and_then(|r| r.iter().min().copied())
                .unwrap_or(0);
        }
    }
    Verdict {
        id: "2",
        passed: mismatches.is_empty() && col11_min == -256,
        detail: format!(
            "34 lines compared, mismatches: {}; column 11 reaches {col11_min}",
            if mismatches.is_empty() {
                "none".to_string()
            } else {
                mismatches.join(" ")
            }
        ),
    }
}

/// Arrays whose natural partial sums are also checked modulo 2nk+2.
type Built = Vec<(String, Grid, usize)>;

fn criterion_3(built: &mut Built) -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut count = 0;
    for p in 3..=6 {
        for n in 4 * p..=40 {
            count += 1;
            let ok = build_h4p::<i64>(n, p).and_then(|g| {
                let r = verify_square(&g, n, 4 * p, false)?;
                built.push((format!("H({n};{})", 4 * p), g, 4 * p));
                Ok(r.passed())
            });
            if !matches!(ok, Ok(true)) {
                failures.push(format!("(p={p},n={n})"));
            }
        }
    }
    let elapsed = start.elapsed();
    Verdict {
        id: "3",
        passed: failures.is_empty() && elapsed < Duration::from_secs(30),
        detail: format!("{count} arrays, {}, {}", listed(&failures), secs(elapsed)),
    }
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut count = 0;
    for p in 1..=3 {
        for gamma in [1, 3, 5] {
            for n in 4 * p..=30 {
                let (lo, hi) = alpha_range(n, p);
                for alpha in (lo..=hi).filter(|a| a.gcd(&n) == 1) {
                    count += 1;
                    let ok = build_shifted::<i64>(n, p, gamma, alpha)
                        .and_then(|g| verify_support_shifted(&g, n, p, gamma))
                        .map(|r| r.passed());
                    if !matches!(ok, Ok(true)) {
                        failures.push(format!("(p={p},gamma={gamma},n={n},alpha={alpha})"));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    Verdict {
        id: "4",
        passed: failures.is_empty() && count > 0 && elapsed < Duration::from_secs(60),
        detail: format!("{count} arrays, {}, {}", listed(&failures), secs(elapsed)),
    }
}

fn criterion_5(built: &mut Built) -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut count = 0;
    for n in [13, 17, 21, 25, 29] {
        for p in (1..).take_while(|p| 4 * p + 3 <= n) {
            count += 1;
            let k = 4 * p + 3;
            let ok = build_h4p3::<i64>(n, p, &MergeOptions::default()).and_then(|out| {
                let r = verify_square(&out.grid, n, k, false)?;
                let m = heffter_modulus(n, k)?;
                built.push((format!("H({n};{k})"), out.grid, k));
                Ok(r.passed() && out.params.modulus == m)
            });
            if !matches!(ok, Ok(true)) {
                failures.push(format!("(n={n},p={p})"));
            }
        }
    }
    let elapsed = start.elapsed();
    Verdict {
        id: "5",
        passed: failures.is_empty() && elapsed < Duration::from_secs(60),
        detail: format!("{count} arrays, {}, {}", listed(&failures), secs(elapsed)),
    }
}

fn criterion_6() -> Verdict {
    let mut passed = true;
    let mut parts = Vec::new();
    for (n, p) in [(20, 2), (24, 3), (28, 4)] {
        match build_h4p3::<i64>(n, p, &MergeOptions::default()) {
            Ok(out) => {
                let k = 4 * p + 3;
                let ok = verify_square(&out.grid, n, k, false)
                    .map(|r| r.passed())
                    .unwrap_or(false);
                passed &= ok;
                let mp = out.params;
                parts.push(format!(
                    "(n={n},p={p}) epsilon={} alpha={} t={} {}",
                    mp.epsilon,
                    mp.alpha,
                    mp.shift,
                    if ok {
                        "verified"
                    } else {
                        "FAILED verification"
                    }
                ));
            }
            Err(e) => {
                passed = false;
                parts.push(format!("(n={n},p={p}) no parameters: {e}"));
            }
        }
    }
    Verdict {
        id: "6",
        passed,
        detail: parts.join("; "),
    }
}

fn summary_field<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.split_whitespace().find_map(|w| w.strip_prefix(key))
}

fn criterion_7() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut passed = true;
    let mut parts = Vec::new();
    for (n, p) in [(12usize, 3usize), (17, 3)] {
        let start = Instant::now();
        let grid = dir.path().join(format!("h{n}.heffter"));
        let rows = dir.path().join(format!("h{n}.rows"));
        let cols = dir.path().join(format!("h{n}.cols"));
        let (g, r, c) = (
            grid.to_str().unwrap(),
            rows.to_str().unwrap(),
            cols.to_str().unwrap(),
        );
        let (n_s, p_s) = (n.to_string(), p.to_string());
        let built = heffter(&["construct", "h4p", "--n", &n_s, "--p", &p_s, "--out", g]);
        let dec = heffter(&["decompose", g, "--rows-out", r, "--cols-out", c]);
        let orth = heffter(&["orthogonality", r, c]);
        let elapsed = start.elapsed();

        let modulus = 2 * n * 4 * p + 1;
        let edges = modulus * (modulus - 1) / 2;
        let summary = stdout(&dec);
        let systems_ok = summary.lines().count() == 2
            && summary.lines().all(|l| {
                summary_field(l, "complete=") == Some("yes")
                    && summary_field(l, "cycles=") == Some(&(n * modulus).to_string())
                    && summary_field(l, "edges=") == Some(&format!("{edges}/{edges}"))
            });
        let orth_line = stdout(&orth);
        let orth_ok = orth.status.success() && orth_line.contains("ORTHOGONAL yes max_shared=1");
        let ok = built.status.success()
            && dec.status.success()
            && systems_ok
            && orth_ok
            && elapsed < Duration::from_secs(60);
        passed &= ok;
        parts.push(format!(
            "H({n};{}) M={modulus}: {} cycles per system, {edges} edges each once: {}, {}, {}",
            4 * p,
            n * modulus,
            if systems_ok { "yes" } else { "no" },
            orth_line.trim(),
            secs(elapsed)
        ));
    }
    Verdict {
        id: "7",
        passed,
        detail: parts.join("; "),
    }
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut count = 0;
    for n in (8..=29).filter(|n| n % 4 <= 1) {
        count += 1;
        let closed = build_h3_base::<i64>(n)
            .and_then(|g| verify_ladder(&g, n - 1, 1))
            .map(|r| r.passed());
        let searched = search_h3_base::<i64>(n, DEFAULT_SEARCH_BUDGET)
            .and_then(|g| verify_ladder(&g, n - 1, 1))
            .map(|r| r.passed());
        if !matches!(closed, Ok(true)) {
            failures.push(format!("closed-form n={n}"));
        }
        if !matches!(searched, Ok(true)) {
            failures.push(format!("search n={n}"));
        }
    }
    let left = fixture("ladder9_base.heffter");
    let right = fixture("ladder9_beta1_step2.heffter");
    let left_ok = verify_ladder(&left, 8, 1)
        .map(|r| r.passed())
        .unwrap_or(false);
    let moved = relocate_h3(&left, 1, 2)
        .map(|g| g == right)
        .unwrap_or(false);
    let elapsed = start.elapsed();
    Verdict {
        id: "8",
        passed: failures.is_empty() && left_ok && moved,
        detail: format!(
            "{count} orders, closed form and search, {}; reference ladder passes: {left_ok}; relocation reproduces reference: {moved}, {}",
            listed(&failures),
            secs(elapsed)
        ),
    }
}

fn zero_sum_sequence() -> impl Strategy<Value = (Vec<i64>, u64)> {
    (
        prop::collection::vec(prop_oneof![-60i64..=-1, 1i64..=60], 2..12),
        61u64..400,
    )
        .prop_map(|(mut v, m)| {
            let total: i64 = v.iter().sum();
            if total != 0 {
                v.push(-total);
            }
            (v, m)
        })
}

fn criterion_9(built: &Built) -> Verdict {
    let mut runner = TestRunner::new(Config {
        cases: 200,
        failure_persistence: None,
        ..Config::default()
    });
    let rotation = runner.run(&zero_sum_sequence(), |(values, modulus)| {
        let grid = Grid::from_rows(vec![values.iter().map(|&v| Some(v)).collect()]).unwrap();
        let natural = LineOrdering::natural(&grid, Line::Row(0)).unwrap();
        let simple = partial_sums(&grid, Line::Row(0), &natural, modulus)
            .unwrap()
            .is_distinct();
        for k in 0..values.len() {
            for ordering in [natural.rotated(k), natural.rotated(k).reversed()] {
                let other = partial_sums(&grid, Line::Row(0), &ordering, modulus)
                    .unwrap()
                    .is_distinct();
                prop_assert_eq!(simple, other);
            }
        }
        Ok(())
    });

    let base = fixture("h17_k12.heffter");
    let cells: Vec<_> = base.entries().map(|(c, _)| c).collect();
    let mut runner = TestRunner::new(Config {
        cases: 100,
        failure_persistence: None,
        ..Config::default()
    });
    let mutation = (0..cells.len(), prop_oneof![-408i64..=-1, 1i64..=408]);
    let perturbation = runner.run(&mutation, |(i, value)| {
        let cell = cells[i];
        prop_assume!(base.get(cell) != Some(value));
        let mutated = base.with_cell(cell, Some(value)).unwrap();
        prop_assert!(!verify_square(&mutated, 17, 12, false).unwrap().passed());
        Ok(())
    });

    let mut plus_one_failures = Vec::new();
    for (name, grid, k) in built {
        let m = heffter_modulus(grid.rows(), *k).unwrap();
        let ok = verify_simple_under(grid, m + 1, OrderRule::Natural)
            .map(|r| r.passed())
            .unwrap_or(false);
        if !ok {
            plus_one_failures.push(name.clone());
        }
    }
    Verdict {
        id: "9",
        passed: rotation.is_ok() && perturbation.is_ok() && plus_one_failures.is_empty() && !built.is_empty(),
        detail: format!(
            "rotation/reversal on 200 sequences: {}; 100 mutations detected: {}; mod 2nk+2 on {} arrays: {}",
            if rotation.is_ok() { "ok" } else { "FAILED" },
            match &perturbation {
                Ok(()) => "ok".to_string(),
                Err(e) => e.to_string(),
            },
            built.len(),
            listed(&plus_one_failures)
        ),
    }
}

fn criterion_10() -> Verdict {
    let path = fixtures().join("h6x12_s8_t4.heffter");
    let out = heffter(&["verify", path.to_str().unwrap(), "--level", "heffter"]);
    let text = stdout(&out);
    let passed = out.status.success()
        && text.contains("CHECK sums-mod-97 PASS")
        && text.contains("OVERALL PASS");
    Verdict {
        id: "10",
        passed,
        detail: format!(
            "H(6,12;8,4): {}",
            text.lines().map(str::trim).collect::<Vec<_>>().join(" | ")
        ),
    }
}

fn main() {
    let mut built = Built::new();
    let mut verdicts = criterion_1();
    verdicts.push(criterion_2());
    verdicts.push(criterion_3(&mut built));
    verdicts.push(criterion_4());
    verdicts.push(criterion_5(&mut built));
    verdicts.push(criterion_6());
    verdicts.push(criterion_7());
    verdicts.push(criterion_8());
    verdicts.push(criterion_9(&built));
    verdicts.push(criterion_10());

    let mut unexpected = 0;
    for v in &verdicts {
        let known = KNOWN_FAILURES.contains(&v.id);
        let tag = match (v.passed, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (expected to fail)",
        };
        if v.passed == known {
            unexpected += 1;
        }
        println!("criterion {:<3} {tag:<13} {}", v.id, v.detail);
    }
    let failed = verdicts.iter().filter(|v| !v.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed, {unexpected} unexpected",
        verdicts.len() - failed
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
