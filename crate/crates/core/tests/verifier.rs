mod common;

use common::fixture;
use heffter::{
    compatibility_check, natural_orderings, partial_sums, residue, verify_globally_simple,
    verify_heffter, verify_integer, verify_support_shifted, Certificate, Grid, Line, LineOrdering,
};

#[test]
fn order_17_k12_passes_everything() {
    let g = fixture("h17_k12.heffter");
    let report = verify_heffter(&g, 17, 17, 12, 12).unwrap();
    assert!(report.passed(), "{report}");
    assert!(verify_integer(&g).unwrap().passed());
    assert!(verify_globally_simple(&g, 409, true).unwrap().passed());
    let support = g.support();
    assert!(support.is_exact_range(1, 204) && support.is_exclusive());
}

#[test]
fn changed_entry_breaks_support_and_sum() {
    let g = fixture("h17_k12.heffter")
        .with_cell((0, 0), Some(2))
        .unwrap();
    let report = verify_heffter(&g, 17, 17, 12, 12).unwrap();
    let support = report.check("support").unwrap();
    assert!(support
        .failures
        .contains(&Certificate::Missing { value: 1 }));
    assert!(support
        .failures
        .contains(&Certificate::Repeated { value: 2 }));
    let sums = report.check("sums-mod-409").unwrap();
    assert!(sums.failures.iter().any(|c| matches!(
        c,
        Certificate::LineSum {
            line: Line::Row(0),
            sum: 1,
            ..
        }
    )));
}

#[test]
fn swapping_row_entries_gives_a_checkable_collision() {
    let g = fixture("h17_k12.heffter");
    let row: Vec<_> = g.line_entries(Line::Row(0)).unwrap();
    let mut found = None;
    'outer: for i in 0..row.len() {
        for j in i + 1..row.len() {
            let swapped = g
                .with_cell(row[i].0, Some(row[j].1))
                .unwrap()
                .with_cell(row[j].0, Some(row[i].1))
                .unwrap();
            let report = verify_globally_simple(&swapped, 409, false).unwrap();
            if !report.passed() {
                found = Some((swapped, report));
                break 'outer;
            }
        }
    }
    let (swapped, report) = found.expect("some swap in row 0 breaks simplicity");
    assert_eq!(swapped.line_sum(Line::Row(0)).unwrap(), 0);
    for (_, cert) in report.failures() {
        let Certificate::Collision {
            line,
            first,
            second,
            residue: r,
            modulus,
            ..
        } = *cert
        else {
            panic!("unexpected certificate {cert:?}");
        };
        let ord = LineOrdering::natural(&swapped, line).unwrap();
        let trace = partial_sums(&swapped, line, &ord, modulus).unwrap();
        assert_eq!(residue(trace.sums[first] as i128, modulus), r);
        assert_eq!(residue(trace.sums[second] as i128, modulus), r);
    }
}

#[test]
fn deleting_an_entry_of_the_shifted_array() {
    let g = fixture("shifted17_k12_gamma3_alpha6.heffter");
    assert_eq!(g.get((0, 0)), Some(85));
    let g = g.with_cell((0, 0), None).unwrap();
    let report = verify_support_shifted(&g, 17, 3, 3).unwrap();
    let fills = &report.check("fills").unwrap().failures;
    assert!(fills.contains(&Certificate::FillCount {
        line: Line::Row(0),
        expected: 12,
        found: 11
    }));
    assert!(fills.contains(&Certificate::FillCount {
        line: Line::Col(0),
        expected: 12,
        found: 11
    }));
    let sums = &report.check("integer-sums").unwrap().failures;
    assert_eq!(sums.len(), 2);
}

#[test]
fn gamma_zero_reading() {
    // A shifted array with no shift is an ordinary integer Heffter array.
    let g = fixture("h17_k12.heffter");
    let as_shifted = verify_support_shifted(&g, 17, 3, 0).unwrap();
    let plain = verify_heffter(&g, 17, 17, 12, 12)
        .unwrap()
        .merge(verify_integer(&g).unwrap());
    assert_eq!(as_shifted.passed(), plain.passed());
}

#[test]
fn compatibility_of_natural_orderings_is_reported() {
    let g: Grid = fixture("h17_k12.heffter");
    let (rows, cols) = natural_orderings(&g).unwrap();
    let result = compatibility_check(&g, &rows, &cols).unwrap();
    assert_eq!(result.cycle_type.iter().sum::<usize>(), 204);
    assert_eq!(result.compatible, result.cycle_type == vec![204]);
}

#[test]
fn report_text_layout() {
    let g = fixture("h6x12_s8_t4.heffter");
    let text = verify_heffter(&g, 6, 12, 8, 4).unwrap().to_string();
    assert_eq!(
        text,
        "CHECK fills PASS\nCHECK support PASS\nCHECK sums-mod-97 PASS\nOVERALL PASS\n"
    );
}
