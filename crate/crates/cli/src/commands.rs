use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use heffter::{
    base_cycles, build_h3_base, build_h4p, build_h4p3, build_shifted, choose_alpha,
    compatibility_check, cyclic_shift, develop, heffter_modulus, natural_orderings, orthogonality,
    parse_grid, partial_sums, relocate_h3, search_h3_base, symmetric_residue, verify_heffter,
    verify_integer, verify_ladder, verify_simple_under, verify_square, verify_support_shifted,
    write_grid, CycleSystem, Error, Grid, Line, LineOrdering, MergeOptions, OrderRule,
    VerificationReport,
};
use serde_json::{json, Value};

use crate::args::{
    CompatibilityArgs, ConstructArgs, DecomposeArgs, Family, Level, Lines, Method,
    OrthogonalityArgs, PartialSumsArgs, VerifyArgs,
};

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_bool(passed: bool) -> Self {
        if passed {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

fn load_grid(path: &Path) -> Result<Grid> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_grid(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_cycles(path: &Path) -> Result<CycleSystem> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    CycleSystem::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

type Params = Vec<(&'static str, Value)>;

fn params_text(params: &Params) -> String {
    params
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("PARAM {k}={s}\n"),
            other => format!("PARAM {k}={other}\n"),
        })
        .collect()
}

fn params_json(params: &Params) -> Value {
    Value::Object(
        params
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect(),
    )
}

fn require(value: Option<usize>, flag: &str, family: &str) -> Result<usize> {
    value.with_context(|| format!("--{flag} is required for {family}"))
}

pub fn construct(args: &ConstructArgs) -> Result<Outcome> {
    let n = args.n;
    let mut params: Params = vec![("n", json!(n))];
    let check = !args.unchecked;
    let (grid, report): (Grid, Option<VerificationReport>) = match args.family {
        Family::H4p => {
            let p = require(args.p, "p", "h4p")?;
            let k = 4 * p;
            let grid = build_h4p(n, p)?;
            params.extend([("family", json!("h4p")), ("p", json!(p)), ("k", json!(k))]);
            params.push(("modulus", json!(heffter_modulus(n, k)?)));
            let report = check
                .then(|| verify_square(&grid, n, k, args.plus_one))
                .transpose()?;
            (grid, report)
        }
        Family::Shifted => {
            let p = require(args.p, "p", "shifted")?;
            let gamma = require(args.gamma, "gamma", "shifted")?;
            let alpha = match args.alpha {
                Some(a) => a,
                None => choose_alpha(n, p, None)?,
            };
            let grid = build_shifted(n, p, gamma, alpha)?;
            let modulus = heffter_modulus(n, 4 * p + gamma)?;
            params.extend([
                ("family", json!("shifted")),
                ("p", json!(p)),
                ("gamma", json!(gamma)),
                ("alpha", json!(alpha)),
                ("k", json!(4 * p)),
                ("modulus", json!(modulus)),
            ]);
            let report = if check {
                let mut report = verify_support_shifted(&grid, n, p, gamma)?;
                if args.plus_one {
                    report =
                        report.merge(verify_simple_under(&grid, modulus + 1, OrderRule::Natural)?);
                }
                Some(report)
            } else {
                None
            };
            (grid, report)
        }
        Family::H3 => {
            let base: Grid = match args.h3_method {
                Method::ClosedForm => build_h3_base(n)?,
                Method::Search => search_h3_base(n, args.search_budget)?,
            };
            let placed = args.beta.is_some() || args.epsilon.is_some();
            let (beta, epsilon) = if placed {
                (args.beta.unwrap_or(0), args.epsilon.unwrap_or(2))
            } else {
                (n - 1, 1)
            };
            let moved = if placed {
                relocate_h3(&base, beta, epsilon)?
            } else {
                base
            };
            let shift = args.shift.unwrap_or(0) % n;
            let grid = cyclic_shift(&moved, shift)?;
            params.extend([
                ("family", json!("h3")),
                (
                    "method",
                    json!(format!("{:?}", args.h3_method).to_lowercase()),
                ),
                ("beta", json!(beta)),
                ("epsilon", json!(epsilon)),
                ("shift", json!(shift)),
                ("modulus", json!(heffter_modulus(n, 3)?)),
            ]);
            let report = check
                .then(|| verify_ladder(&grid, beta, epsilon))
                .transpose()?;
            (grid, report)
        }
        Family::H4p3 => {
            let p = require(args.p, "p", "h4p3")?;
            let options = MergeOptions {
                alpha: args.alpha,
                epsilon: args.epsilon,
                shift: args.shift,
                h3_method: args.h3_method.into(),
                search_budget: args.search_budget,
            };
            let out = build_h4p3(n, p, &options)?;
            let mp = out.params;
            params.extend([
                ("family", json!("h4p3")),
                ("p", json!(p)),
                ("k", json!(mp.k)),
                ("alpha", json!(mp.alpha)),
                ("epsilon", json!(mp.epsilon)),
                ("beta", json!(mp.beta)),
                ("shift", json!(mp.shift)),
                ("modulus", json!(mp.modulus)),
            ]);
            let report = check
                .then(|| verify_square(&out.grid, n, mp.k, args.plus_one))
                .transpose()?;
            (out.grid, report)
        }
    };
    // Keep "family" first in the report.
    params.sort_by_key(|(k, _)| *k != "family");

    let passed = report.as_ref().is_none_or(VerificationReport::passed);
    let summary = if args.json {
        let mut v = json!({ "params": params_json(&params), "passed": passed });
        if let Some(r) = &report {
            v["report"] = serde_json::to_value(r)?;
        }
        format!("{v}\n")
    } else {
        let mut text = params_text(&params);
        match &report {
            Some(r) => text.push_str(&r.to_string()),
            None => text.push_str("OVERALL UNCHECKED\n"),
        }
        text
    };

    let emit = passed || args.unchecked;
    match &args.out {
        Some(path) => {
            if emit {
                fs::write(path, write_grid(&grid))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            print!("{summary}");
        }
        None => {
            eprint!("{summary}");
            if emit {
                print!("{}", write_grid(&grid));
            }
        }
    }
    Ok(Outcome::from_bool(passed))
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let grid = load_grid(&args.path)?;
    let (m, n) = (grid.rows(), grid.cols());
    let s = args
        .s
        .or(grid.fills_per_row())
        .unwrap_or(grid.filled_count() / m);
    let t = args
        .t
        .or(grid.fills_per_col())
        .unwrap_or(grid.filled_count() / n);
    let modulus = heffter_modulus(m, s)?;
    let rule: OrderRule = args.order.into();
    let simple = |modulus: u64| -> Result<VerificationReport> {
        let mut r = verify_simple_under(&grid, modulus, rule)?;
        if args.plus_one {
            r = r.merge(verify_simple_under(&grid, modulus + 1, rule)?);
        }
        Ok(r)
    };
    let report = match args.level {
        Level::Heffter => verify_heffter(&grid, m, n, s, t)?,
        Level::Integer => verify_heffter(&grid, m, n, s, t)?.merge(verify_integer(&grid)?),
        Level::GloballySimple => verify_heffter(&grid, m, n, s, t)?.merge(simple(modulus)?),
        Level::Full => verify_heffter(&grid, m, n, s, t)?
            .merge(verify_integer(&grid)?)
            .merge(simple(modulus)?),
        Level::Shifted => {
            let gamma = args
                .gamma
                .context("--gamma is required for the shifted level")?;
            let p = args.p.unwrap_or(s / 4);
            let mut r = verify_support_shifted(&grid, n, p, gamma)?;
            if args.plus_one || rule == OrderRule::Diagonal {
                r = r.merge(simple(heffter_modulus(n, 4 * p + gamma)?)?);
            }
            r
        }
        Level::Ladder => {
            verify_ladder(&grid, args.beta.unwrap_or(n - 1), args.epsilon.unwrap_or(1))?
        }
    };
    if args.json {
        println!("{}", json!({ "passed": report.passed(), "report": report }));
    } else {
        print!("{report}");
    }
    Ok(Outcome::from_bool(report.passed()))
}

pub fn partial_sums_table(args: &PartialSumsArgs) -> Result<Outcome> {
    let grid = load_grid(&args.path)?;
    let rule: OrderRule = args.order.into();
    let modulus = args.modulus.unwrap_or(2 * grid.filled_count() as u64 + 1);
    if modulus == 0 {
        bail!("--modulus must be positive");
    }
    let lines: Vec<Line> = match args.lines {
        Lines::Rows => (0..grid.rows()).map(Line::Row).collect(),
        Lines::Columns => (0..grid.cols()).map(Line::Col).collect(),
    };
    let mut ok = true;
    let mut rows_json = Vec::new();
    let mut out = BufWriter::new(std::io::stdout().lock());
    for line in lines {
        let trace = LineOrdering::by_rule(&grid, line, rule)
            .and_then(|o| partial_sums(&grid, line, &o, modulus));
        let values: Vec<String> = match trace {
            Ok(trace) if args.modulus.is_some() => trace
                .residues()
                .into_iter()
                .map(|r| symmetric_residue(r, modulus).to_string())
                .collect(),
            Ok(trace) => trace.sums.iter().map(i64::to_string).collect(),
            Err(e @ Error::InvalidArgument(_)) if !grid.is_square() => return Err(e.into()),
            Err(e) => {
                ok = false;
                if !args.json {
                    writeln!(out, "{},ERROR {e}", line.index())?;
                }
                rows_json.push(json!({ "index": line.index(), "error": e.to_string() }));
                continue;
            }
        };
        if args.json {
            rows_json.push(json!({ "index": line.index(), "sums": values }));
        } else {
            writeln!(out, "{},{}", line.index(), values.join(","))?;
        }
    }
    if args.json {
        writeln!(out, "{}", Value::Array(rows_json))?;
    }
    out.flush()?;
    Ok(Outcome::from_bool(ok))
}

fn write_system(system: &CycleSystem, path: &Path) -> Result<()> {
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    system.write_to(&mut w)?;
    w.flush()?;
    Ok(())
}

pub fn decompose(args: &DecomposeArgs) -> Result<Outcome> {
    let grid = load_grid(&args.path)?;
    let modulus = 2 * grid.filled_count() as u64 + 1;
    let rule: OrderRule = args.order.into();
    let report = verify_simple_under(&grid, modulus, rule)?;
    if !report.passed() {
        eprintln!("refusing to decompose an array that is not simple modulo {modulus}");
        eprint!("{report}");
        return Ok(Outcome::Fail);
    }
    let (rows, cols) = match base_cycles(&grid, modulus, rule) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("refusing to decompose: {e}");
            return Ok(Outcome::Fail);
        }
    };
    let mut summaries = Vec::new();
    let mut all_complete = true;
    for (name, base, path) in [
        ("rows", rows, &args.rows_out),
        ("columns", cols, &args.cols_out),
    ] {
        let system = match develop(&base, modulus) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("{name}: {e}");
                return Ok(Outcome::Fail);
            }
        };
        write_system(&system, path)?;
        all_complete &= system.is_complete();
        summaries.push((
            name,
            system.cycle_len(),
            system.len(),
            system.covered_edges(),
            system.total_edges(),
            system.is_complete(),
        ));
    }
    if args.json {
        let v: Vec<Value> = summaries
            .iter()
            .map(|(name, k, c, e, total, complete)| {
                json!({ "system": name, "modulus": modulus, "k": k, "cycles": c, "edges": e, "total_edges": total, "complete": complete })
            })
            .collect();
        println!("{}", Value::Array(v));
    } else {
        for (name, k, c, e, total, complete) in summaries {
            println!(
                "SYSTEM {name} M={modulus} k={k} cycles={c} edges={e}/{total} complete={}",
                if complete { "yes" } else { "no" }
            );
        }
    }
    Ok(Outcome::from_bool(all_complete))
}

pub fn orthogonality_cmd(args: &OrthogonalityArgs) -> Result<Outcome> {
    let a = load_cycles(&args.first)?;
    let b = load_cycles(&args.second)?;
    let o = orthogonality(&a, &b)?;
    if args.json {
        println!("{}", serde_json::to_string(&o)?);
    } else {
        let witness = o
            .witness
            .map_or_else(|| "none".to_string(), |(x, y)| format!("{x},{y}"));
        println!(
            "ORTHOGONAL {} max_shared={} witness={witness}",
            if o.orthogonal { "yes" } else { "no" },
            o.max_shared
        );
    }
    Ok(Outcome::from_bool(o.orthogonal))
}

pub fn compatibility(args: &CompatibilityArgs) -> Result<Outcome> {
    let grid = load_grid(&args.path)?;
    let (rows, cols) = match OrderRule::from(args.order) {
        OrderRule::Natural => natural_orderings(&grid)?,
        OrderRule::Diagonal => (
            (0..grid.rows())
                .map(|r| LineOrdering::diagonal(&grid, Line::Row(r)))
                .collect::<heffter::Result<_>>()?,
            (0..grid.cols())
                .map(|c| LineOrdering::diagonal(&grid, Line::Col(c)))
                .collect::<heffter::Result<_>>()?,
        ),
    };
    let result = compatibility_check(&grid, &rows, &cols)?;
    if args.json {
        println!("{}", serde_json::to_string(&result)?);
    } else {
        let lengths: Vec<String> = result.cycle_type.iter().map(usize::to_string).collect();
        println!(
            "COMPATIBLE {}",
            if result.compatible { "yes" } else { "no" }
        );
        println!("CYCLE-TYPE {}", lengths.join(" "));
    }
    Ok(Outcome::from_bool(result.compatible))
}
