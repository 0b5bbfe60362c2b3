//! Cyclic cycle systems developed from simple lines of an array.
//!
//! A line whose partial sums are distinct modulo `M` and whose total is 0
//! modulo `M` gives a base cycle on `Z_M`: its partial sums in order. The
//! translates of the base cycles of all rows (or all columns) form a cycle
//! system; for a Heffter array it covers every edge of `K_M` exactly once.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::io;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::grid::{HeffterGrid, Line};
use crate::ordering::{partial_sums, LineOrdering, OrderRule};
use crate::scalar::{residue, Entry};

/// Partial sums of `line` modulo `modulus`, as a cycle on `Z_M`.
pub fn base_cycle<T: Entry>(
    grid: &HeffterGrid<T>,
    line: Line,
    ordering: &LineOrdering,
    modulus: u64,
) -> Result<Vec<u64>> {
    let trace = partial_sums(grid, line, ordering, modulus)?;
    if let Some((first, second)) = trace.first_collision() {
        return Err(Error::NotSimple {
            line,
            first,
            second,
            modulus,
        });
    }
    if residue(trace.total().to_wide(), modulus) != 0 {
        return Err(invalid(format!("{line} does not sum to 0 mod {modulus}")));
    }
    Ok(trace.residues())
}

/// One base cycle per line, each a list of residues.
pub type BaseCycles = Vec<Vec<u64>>;

/// Base cycles of every row and every column under `rule`.
pub fn base_cycles<T: Entry>(
    grid: &HeffterGrid<T>,
    modulus: u64,
    rule: OrderRule,
) -> Result<(BaseCycles, BaseCycles)> {
    let cycles = |lines: Vec<Line>| -> Result<BaseCycles> {
        lines
            .into_iter()
            .map(|line| {
                base_cycle(
                    grid,
                    line,
                    &LineOrdering::by_rule(grid, line, rule)?,
                    modulus,
                )
            })
            .collect()
    };
    Ok((
        cycles((0..grid.rows()).map(Line::Row).collect())?,
        cycles((0..grid.cols()).map(Line::Col).collect())?,
    ))
}

/// Lexicographically least rotation of the lexicographically lesser direction.
pub fn canonical_cycle(cycle: &[u64]) -> Vec<u64> {
    let least_rotation = |seq: &[u64]| -> Vec<u64> {
        (0..seq.len())
            .map(|s| {
                seq[s..]
                    .iter()
                    .chain(&seq[..s])
                    .copied()
                    .collect::<Vec<_>>()
            })
            .min()
            .unwrap_or_default()
    };
    let forward = least_rotation(cycle);
    let mut reversed = cycle.to_vec();
    reversed.reverse();
    forward.min(least_rotation(&reversed))
}

/// A set of cycles on `Z_M` in which no edge is used twice.
#[derive(Clone, Debug)]
pub struct CycleSystem {
    modulus: u64,
    cycle_len: usize,
    cycles: Vec<Vec<u64>>,
    /// Owner of each edge, indexed by [`edge_id`]; `u32::MAX` when uncovered.
    owner: Vec<u32>,
    covered: usize,
}

const UNCOVERED: u32 = u32::MAX;

/// Dense index of the edge `{a, b}`, `a != b`, among the `M(M-1)/2` edges of `K_M`.
fn edge_id(modulus: u64, a: u64, b: u64) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    let (m, a, b) = (modulus as usize, a as usize, b as usize);
    a * (2 * m - a - 1) / 2 + (b - a - 1)
}

impl CycleSystem {
    /// Collects cycles, rejecting a cycle with a repeated vertex or fewer
    /// than 3 vertices and any edge covered twice.
    pub fn from_cycles(modulus: u64, cycles: Vec<Vec<u64>>) -> Result<Self> {
        if modulus < 3 {
            return Err(invalid("modulus must be at least 3"));
        }
        let edges = (modulus as usize)
            .checked_mul(modulus as usize - 1)
            .map(|e| e / 2)
            .ok_or(Error::Overflow)?;
        if cycles.len() >= UNCOVERED as usize {
            return Err(invalid("too many cycles"));
        }
        let cycle_len = cycles.first().map_or(0, Vec::len);
        let mut owner = vec![UNCOVERED; edges];
        let mut covered = 0;
        for (id, cycle) in cycles.iter().enumerate() {
            if cycle.len() != cycle_len {
                return Err(invalid(format!(
                    "cycle {id} has length {}, expected {cycle_len}",
                    cycle.len()
                )));
            }
            if cycle.len() < 3 {
                return Err(invalid(format!("cycle {id} has fewer than 3 vertices")));
            }
            if let Some(&v) = cycle.iter().find(|&&v| v >= modulus) {
                return Err(invalid(format!(
                    "vertex {v} of cycle {id} is not below {modulus}"
                )));
            }
            let distinct: BTreeSet<u64> = cycle.iter().copied().collect();
            if distinct.len() != cycle.len() {
                return Err(invalid(format!("cycle {id} repeats a vertex")));
            }
            for i in 0..cycle.len() {
                let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                let slot = &mut owner[edge_id(modulus, a, b)];
                if *slot != UNCOVERED {
                    return Err(Error::NotADecomposition {
                        edge: (a.min(b), a.max(b)),
                        first: *slot as usize,
                        second: id,
                    });
                }
                *slot = id as u32;
                covered += 1;
            }
        }
        Ok(CycleSystem {
            modulus,
            cycle_len,
            cycles,
            owner,
            covered,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle_len
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn cycles(&self) -> &[Vec<u64>] {
        &self.cycles
    }

    pub fn covered_edges(&self) -> usize {
        self.covered
    }

    pub fn total_edges(&self) -> usize {
        self.owner.len()
    }

    /// Every edge of `K_M` lies in exactly one cycle.
    pub fn is_complete(&self) -> bool {
        self.covered == self.owner.len()
    }

    /// The cycle containing edge `{a, b}`.
    pub fn edge_owner(&self, a: u64, b: u64) -> Option<usize> {
        if a == b || a >= self.modulus || b >= self.modulus {
            return None;
        }
        let o = self.owner[edge_id(self.modulus, a, b)];
        (o != UNCOVERED).then_some(o as usize)
    }

    /// Canonical forms of all cycles, sorted.
    pub fn canonical_cycles(&self) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = self.cycles.iter().map(|c| canonical_cycle(c)).collect();
        out.sort_unstable();
        out
    }

    /// Whether `x -> x + 1` maps the set of cycles onto itself.
    pub fn is_cyclically_invariant(&self) -> bool {
        let m = self.modulus;
        let mut moved: Vec<Vec<u64>> = self
            .cycles
            .iter()
            .map(|c| canonical_cycle(&c.iter().map(|&v| (v + 1) % m).collect::<Vec<_>>()))
            .collect();
        moved.sort_unstable();
        moved == self.canonical_cycles()
    }

    /// Writes the system as text, cycles in sorted canonical form.
    pub fn write_to<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "#cycles M={} k={} count={}",
            self.modulus,
            self.cycle_len,
            self.cycles.len()
        )?;
        let mut line = String::new();
        for cycle in self.canonical_cycles() {
            line.clear();
            for (i, v) in cycle.iter().enumerate() {
                if i > 0 {
                    line.push(' ');
                }
                let _ = write!(line, "{v}");
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("output is ASCII")
    }

    /// Parses the format of [`CycleSystem::write_to`].
    pub fn parse(text: &str) -> Result<Self> {
        let parse_error = |line: usize, column: usize, message: String| Error::Parse {
            line,
            column,
            message,
        };
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| parse_error(1, 1, "empty input".into()))?;
        let rest = header
            .strip_prefix("#cycles")
            .ok_or_else(|| parse_error(1, 1, "expected `#cycles` header".into()))?;
        let mut fields: HashMap<&str, usize> = HashMap::new();
        for token in rest.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| parse_error(1, 1, format!("expected key=value, found `{token}`")))?;
            let value = value
                .parse()
                .map_err(|_| parse_error(1, 1, format!("bad value for `{key}`")))?;
            fields.insert(key, value);
        }
        let get = |key: &str| {
            fields
                .get(key)
                .copied()
                .ok_or_else(|| parse_error(1, 1, format!("header lacks `{key}`")))
        };
        let (modulus, k, count) = (get("M")? as u64, get("k")?, get("count")?);
        let mut cycles = Vec::with_capacity(count);
        for (idx, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cycle = line
                .split_whitespace()
                .map(|v| v.parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| parse_error(idx + 2, 1, e.to_string()))?;
            if cycle.len() != k {
                return Err(parse_error(
                    idx + 2,
                    1,
                    format!("expected {k} vertices, found {}", cycle.len()),
                ));
            }
            cycles.push(cycle);
        }
        if cycles.len() != count {
            return Err(parse_error(
                1,
                1,
                format!("header says {count} cycles, found {}", cycles.len()),
            ));
        }
        CycleSystem::from_cycles(modulus, cycles)
    }
}

/// All translates `C + t`, `t` in `Z_M`, of the base cycles. Cycle
/// `b * M + t` is base cycle `b` shifted by `t`.
pub fn develop(base: &[Vec<u64>], modulus: u64) -> Result<CycleSystem> {
    let mut cycles = Vec::with_capacity(base.len() * modulus as usize);
    for cycle in base {
        for t in 0..modulus {
            cycles.push(cycle.iter().map(|&v| (v + t) % modulus).collect());
        }
    }
    CycleSystem::from_cycles(modulus, cycles)
}

/// Row and column systems of a globally simple array under `rule`, with
/// `M = 2 * (filled cells) + 1`.
pub fn develop_grid<T: Entry>(
    grid: &HeffterGrid<T>,
    rule: OrderRule,
) -> Result<(CycleSystem, CycleSystem)> {
    let modulus = (2 * grid.filled_count() + 1) as u64;
    let (rows, cols) = base_cycles(grid, modulus, rule)?;
    Ok((develop(&rows, modulus)?, develop(&cols, modulus)?))
}

/// Outcome of comparing two cycle systems.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orthogonality {
    pub orthogonal: bool,
    /// Largest number of edges any pair of cycles shares.
    pub max_shared: usize,
    /// A pair `(cycle in first, cycle in second)` attaining `max_shared`,
    /// the first such pair met when scanning edges in index order.
    pub witness: Option<(usize, usize)>,
}

/// Whether every cycle of `a` shares at most one edge with every cycle of `b`.
pub fn orthogonality(a: &CycleSystem, b: &CycleSystem) -> Result<Orthogonality> {
    if a.modulus != b.modulus {
        return Err(invalid(format!(
            "moduli differ: {} and {}",
            a.modulus, b.modulus
        )));
    }
    let mut shared: HashMap<(u32, u32), usize> = HashMap::with_capacity(a.covered.min(b.covered));
    let mut best = (0usize, None);
    for (&x, &y) in a.owner.iter().zip(&b.owner) {
        if x == UNCOVERED || y == UNCOVERED {
            continue;
        }
        let count = shared.entry((x, y)).or_insert(0);
        *count += 1;
        if *count > best.0 {
            best = (*count, Some((x as usize, y as usize)));
        }
    }
    Ok(Orthogonality {
        orthogonal: best.0 <= 1,
        max_shared: best.0,
        witness: best.1,
    })
}
