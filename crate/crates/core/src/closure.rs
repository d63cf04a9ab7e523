//! Column removal `I(D, T)`, decision relabeling `J(ν, T)` and enumeration
//! of closures `[T] = {J(ν, I(D, T))}` over finite generator sets.

use crate::error::{Error, Result};
use crate::table::{Attribute, CanonicalKey, DecisionTable, Row};
use std::collections::{HashMap, HashSet};

/// `I(D, T)`: drops the columns in `D`; rows that become equal are merged,
/// keeping the smallest decision. Removing every column yields Λ.
pub fn remove_columns(removed: &[Attribute], table: &DecisionTable) -> Result<DecisionTable> {
    let mut drop = vec![false; table.columns().len()];
    for &a in removed {
        let pos = table.column_index(a).ok_or(Error::UnknownAttribute(a))?;
        drop[pos] = true;
    }
    let keep: Vec<usize> = (0..drop.len()).filter(|&i| !drop[i]).collect();
    Ok(project(table, &keep))
}

/// Keeps the columns at `keep` (positions, in the given order).
pub(crate) fn project(table: &DecisionTable, keep: &[usize]) -> DecisionTable {
    let columns: Vec<Attribute> = keep.iter().map(|&i| table.columns()[i]).collect();
    if columns.is_empty() {
        return DecisionTable::from_parts(table.k(), vec![], vec![]);
    }
    let mut rows: Vec<Row> = Vec::new();
    let mut slot: HashMap<Vec<u32>, usize> = HashMap::new();
    for r in table.rows() {
        let values: Vec<u32> = keep.iter().map(|&i| r.values[i]).collect();
        match slot.get(&values) {
            Some(&s) => rows[s].decision = rows[s].decision.min(r.decision),
            None => {
                slot.insert(values.clone(), rows.len());
                rows.push(Row::new(values, r.decision));
            }
        }
    }
    DecisionTable::from_parts(table.k(), columns, rows)
}

/// A decision assignment `ν` given on row value tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Relabeling {
    map: HashMap<Vec<u32>, u8>,
}

impl Relabeling {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, values: Vec<u32>, decision: u8) {
        assert!(decision <= 1, "decisions are 0 or 1");
        self.map.insert(values, decision);
    }

    pub fn get(&self, values: &[u32]) -> Option<u8> {
        self.map.get(values).copied()
    }

    /// Evaluates `f` on every row of `table`.
    pub fn from_fn(table: &DecisionTable, f: impl Fn(&[u32]) -> u8) -> Self {
        let mut nu = Relabeling::new();
        for r in table.rows() {
            nu.set(r.values.clone(), f(&r.values));
        }
        nu
    }

    /// The current decisions of `table`.
    pub fn of_table(table: &DecisionTable) -> Self {
        let mut nu = Relabeling::new();
        for r in table.rows() {
            nu.set(r.values.clone(), r.decision);
        }
        nu
    }
}

/// `J(ν, T)`: same rows and columns with decisions taken from `ν`.
pub fn relabel(nu: &Relabeling, table: &DecisionTable) -> Result<DecisionTable> {
    let decisions = table
        .rows()
        .iter()
        .map(|r| nu.get(&r.values).ok_or_else(|| Error::PartialRelabeling(r.values.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(table.with_decisions(&decisions))
}

/// Enumeration bounds. Members beyond `max_columns` or `max_rows` are
/// skipped; reaching `max_tables` stops the enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_tables: usize,
    pub max_columns: usize,
    pub max_rows: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_tables: 1_000_000,
            max_columns: 20,
            max_rows: 20,
        }
    }
}

/// Closure of a finite generator set, enumerated up to canonical equality.
#[derive(Clone, Debug)]
pub struct ClassEnumeration {
    pub generators: Vec<DecisionTable>,
    pub limits: Limits,
}

/// One member of a closure and how it was obtained.
#[derive(Clone, Debug)]
pub struct ClosureMember {
    /// Rows are in canonical (sorted) order.
    pub table: DecisionTable,
    pub key: CanonicalKey,
    pub generator: usize,
    pub removed: Vec<Attribute>,
    /// `ν` on the member's rows, in the same order.
    pub labels: Vec<u8>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClosureSummary {
    pub emitted: usize,
    pub truncated: bool,
    pub skipped_columns: bool,
    pub skipped_rows: bool,
}

impl ClosureSummary {
    /// Every member of the closure was emitted.
    pub fn exhausted(&self) -> bool {
        !self.truncated && !self.skipped_columns && !self.skipped_rows
    }
}

impl ClassEnumeration {
    pub fn new(generators: Vec<DecisionTable>, limits: Limits) -> Self {
        ClassEnumeration { generators, limits }
    }

    /// Emits every member once, in nondecreasing (columns, rows) order.
    /// Within a layer, generators come in input order, kept column sets in
    /// lexicographic order of positions, and relabelings in binary counter
    /// order over the canonically sorted rows (first row = lowest bit).
    pub fn run(&self, mut visit: impl FnMut(&ClosureMember)) -> ClosureSummary {
        let mut summary = ClosureSummary::default();
        let mut seen: HashSet<CanonicalKey> = HashSet::new();
        let max_width = self
            .generators
            .iter()
            .map(|g| g.num_columns())
            .max()
            .unwrap_or(0);
        for width in 0..=max_width {
            if width > self.limits.max_columns {
                summary.skipped_columns = true;
                break;
            }
            let mut layer: Vec<(usize, Vec<Attribute>, DecisionTable)> = Vec::new();
            for (g, gen) in self.generators.iter().enumerate() {
                let w = gen.num_columns();
                if width > w {
                    continue;
                }
                for keep in combinations(w, width) {
                    let removed: Vec<Attribute> = (0..w)
                        .filter(|i| !keep.contains(i))
                        .map(|i| gen.columns()[i])
                        .collect();
                    let proj = project(gen, &keep).canonicalized();
                    layer.push((g, removed, proj));
                }
            }
            layer.sort_by_key(|(_, _, t)| t.num_rows());
            for (g, removed, proj) in layer {
                let n = proj.num_rows();
                if n > self.limits.max_rows || n >= 64 {
                    summary.skipped_rows = true;
                    continue;
                }
                for code in 0u64..(1u64 << n) {
                    let labels: Vec<u8> = (0..n).map(|i| ((code >> i) & 1) as u8).collect();
                    let table = proj.with_decisions(&labels);
                    let key = table.canonical_key();
                    if !seen.insert(key.clone()) {
                        continue;
                    }
                    if summary.emitted == self.limits.max_tables {
                        summary.truncated = true;
                        return summary;
                    }
                    summary.emitted += 1;
                    visit(&ClosureMember {
                        table,
                        key,
                        generator: g,
                        removed: removed.clone(),
                        labels,
                    });
                }
            }
        }
        summary
    }

    pub fn collect(&self) -> (Vec<ClosureMember>, ClosureSummary) {
        let mut out = Vec::new();
        let summary = self.run(|m| out.push(m.clone()));
        (out, summary)
    }
}

/// Convenience wrapper around [`ClassEnumeration::collect`].
pub fn enumerate_closure(
    generators: &[DecisionTable],
    limits: Limits,
) -> (Vec<ClosureMember>, ClosureSummary) {
    ClassEnumeration::new(generators.to_vec(), limits).collect()
}

/// All `r`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= n {
        go(0, n, r, &mut Vec::new(), &mut out);
    }
    out
}

/// Result of the critical-table check: per column, the first pair of rows
/// (by row index) that differ only in that column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalCheck {
    pub critical: bool,
    pub witnesses: Vec<(Attribute, Option<(usize, usize)>)>,
}

/// A table is critical when it is nonempty and every column has two rows
/// differing in that column only.
pub fn is_critical(table: &DecisionTable) -> CriticalCheck {
    let n = table.num_rows();
    let mut witnesses: Vec<(Attribute, Option<(usize, usize)>)> =
        table.attributes().iter().map(|&a| (a, None)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = table.diff_mask(i, j);
            if d.count_ones() == 1 {
                let col = d.trailing_zeros() as usize;
                if witnesses[col].1.is_none() {
                    witnesses[col].1 = Some((i, j));
                }
            }
        }
    }
    let critical = !table.is_empty() && witnesses.iter().all(|(_, w)| w.is_some());
    CriticalCheck {
        critical,
        witnesses,
    }
}
