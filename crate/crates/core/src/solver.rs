//! Exact table parameters with witnesses.

use crate::closure::project;
use crate::error::{Error, Result};
use crate::measure::{ComplexityMeasure, CostState, SuffixCombine};
use crate::table::{Attribute, DecisionTable, RowIndex};
use crate::tree::{DecisionTree, TreeNode};
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;

/// Largest `k^n` accepted by [`m_table`].
pub const MAX_TUPLES: u64 = 1 << 24;

/// Columns at which subset searches are still exhaustive in the worst case.
pub const MAX_SEARCH_COLUMNS: usize = 64;

/// Finds the cheapest column set satisfying a monotone predicate.
///
/// Candidates are compared by cost, then cardinality, then by the sorted list
/// of attribute indices. `pred` sees a bitmask over column positions.
pub(crate) fn min_subset(
    psi: &ComplexityMeasure,
    table: &DecisionTable,
    pred: impl Fn(u64) -> bool,
) -> Option<(u64, Vec<Attribute>)> {
    let cols = table.columns();
    assert!(cols.len() <= MAX_SEARCH_COLUMNS);
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by_key(|&p| cols[p]);
    // suffix[i] = mask of order[i..]
    let mut suffix = vec![0u64; order.len() + 1];
    for i in (0..order.len()).rev() {
        suffix[i] = suffix[i + 1] | (1 << order[i]);
    }

    struct Search<'a, P> {
        psi: &'a ComplexityMeasure,
        cols: &'a [Attribute],
        order: Vec<usize>,
        suffix: Vec<u64>,
        pred: P,
        best: Option<(u64, u32, u64)>,
        chosen: Vec<Attribute>,
    }

    impl<P: Fn(u64) -> bool> Search<'_, P> {
        fn dominated(&self, cost: u64, size: u32) -> bool {
            matches!(self.best, Some((c, s, _)) if (cost, size) >= (c, s))
        }

        fn go(&mut self, i: usize, mask: u64, cost: u64) {
            let size = mask.count_ones();
            if self.dominated(cost, size) {
                return;
            }
            if (self.pred)(mask) {
                self.best = Some((cost, size, mask));
                return;
            }
            if i == self.order.len() || !(self.pred)(mask | self.suffix[i]) {
                return;
            }
            let p = self.order[i];
            self.chosen.push(self.cols[p]);
            let with = self.psi.set_cost(&self.chosen);
            self.go(i + 1, mask | (1 << p), with);
            self.chosen.pop();
            self.go(i + 1, mask, cost);
        }
    }

    let mut s = Search {
        psi,
        cols,
        order,
        suffix,
        pred,
        best: None,
        chosen: Vec::new(),
    };
    s.go(0, 0, 0);
    s.best.map(|(cost, _, mask)| (cost, attrs_of(cols, mask)))
}

fn attrs_of(cols: &[Attribute], mask: u64) -> Vec<Attribute> {
    let mut out: Vec<Attribute> = (0..cols.len())
        .filter(|&p| mask >> p & 1 == 1)
        .map(|p| cols[p])
        .collect();
    out.sort();
    out
}

fn check_width(table: &DecisionTable) -> Result<()> {
    if table.num_columns() > MAX_SEARCH_COLUMNS {
        return Err(Error::TooLarge(format!(
            "{} columns (limit {MAX_SEARCH_COLUMNS})",
            table.num_columns()
        )));
    }
    Ok(())
}

/// Column masks on which some 0-row and some 1-row differ.
fn conflict_masks(table: &DecisionTable) -> Vec<u64> {
    let rows = table.rows();
    let mut out = Vec::new();
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            if rows[a].decision != rows[b].decision {
                out.push(table.diff_mask(a, b));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Whether `attrs` is a test: rows with different decisions differ on it.
pub fn is_test(table: &DecisionTable, attrs: &[Attribute]) -> bool {
    let mask = attrs
        .iter()
        .filter_map(|&a| table.column_index(a))
        .fold(0u64, |m, p| m | 1 << p);
    attrs.iter().all(|&a| table.column_index(a).is_some())
        && conflict_masks(table).iter().all(|&d| d & mask != 0)
}

/// `Θ_ψ(T)` with a cheapest test.
pub fn theta(psi: &ComplexityMeasure, table: &DecisionTable) -> Result<(u64, Vec<Attribute>)> {
    if table.is_constant() {
        return Ok((0, Vec::new()));
    }
    check_width(table)?;
    let conflicts = conflict_masks(table);
    Ok(min_subset(psi, table, |m| conflicts.iter().all(|&d| d & m != 0))
        .expect("all columns form a test"))
}

/// `S_ψ(T, δ̄)` for the row at position `row`.
pub(crate) fn s_row_at(
    psi: &ComplexityMeasure,
    table: &DecisionTable,
    row: usize,
) -> Result<(u64, Vec<Attribute>)> {
    check_width(table)?;
    let diffs: Vec<u64> = (0..table.num_rows())
        .filter(|&r| r != row)
        .map(|r| table.diff_mask(row, r))
        .collect();
    Ok(min_subset(psi, table, |m| diffs.iter().all(|&d| d & m != 0))
        .expect("all columns separate distinct rows"))
}

/// `S_ψ(T, δ̄)` with a cheapest separating set.
pub fn s_row(
    psi: &ComplexityMeasure,
    table: &DecisionTable,
    row: &[u32],
) -> Result<(u64, Vec<Attribute>)> {
    let r = table
        .row_index(row)
        .ok_or_else(|| Error::RowNotInTable(row.to_vec()))?;
    s_row_at(psi, table, r)
}

/// Per-row cheapest separators, in row order.
pub fn separators(
    psi: &ComplexityMeasure,
    table: &DecisionTable,
) -> Result<Vec<(u64, Vec<Attribute>)>> {
    (0..table.num_rows())
        .map(|r| s_row_at(psi, table, r))
        .collect()
}

/// `S_ψ(T)`.
pub fn s_table(psi: &ComplexityMeasure, table: &DecisionTable) -> Result<u64> {
    Ok(separators(psi, table)?
        .into_iter()
        .map(|(v, _)| v)
        .max()
        .unwrap_or(0))
}

/// `Ŝ_ψ(T)`. Separation ignores decisions, so only column removals matter.
pub fn s_hat(psi: &ComplexityMeasure, table: &DecisionTable) -> Result<u64> {
    if table.is_empty() {
        return Ok(0);
    }
    let w = table.num_columns();
    if w > 24 {
        return Err(Error::TooLarge(format!("{w} columns for the closure maximum")));
    }
    (0u64..1 << w)
        .into_par_iter()
        .map(|keep| {
            let pos: Vec<usize> = (0..w).filter(|&p| keep >> p & 1 == 1).collect();
            s_table(psi, &project(table, &pos))
        })
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))
}

/// `M_ψ(T, δ̄)` with a cheapest list of fixings. `tuple` follows the column
/// order of `table`.
pub fn m_tuple(
    psi: &ComplexityMeasure,
    table: &DecisionTable,
    tuple: &[u32],
) -> Result<(u64, Vec<(Attribute, u32)>)> {
    if tuple.len() != table.num_columns() {
        return Err(Error::BadTupleLength {
            expected: table.num_columns(),
            found: tuple.len(),
        });
    }
    if let Some(&value) = tuple.iter().find(|&&v| v >= table.k()) {
        return Err(Error::ValueOutOfRange { value, k: table.k() });
    }
    if table.is_constant() {
        return Ok((0, Vec::new()));
    }
    check_width(table)?;
    let (zeros, ones) = tuple_diffs(table, tuple);
    let (cost, attrs) = min_subset(psi, table, |m| {
        zeros.iter().all(|&d| d & m != 0) || ones.iter().all(|&d| d & m != 0)
    })
    .expect("fixing every column leaves at most one row");
    let fixings = attrs
        .into_iter()
        .map(|a| (a, tuple[table.column_index(a).expect("own column")]))
        .collect();
    Ok((cost, fixings))
}

/// Difference masks between `tuple` and the 0-rows and 1-rows of `table`.
fn tuple_diffs(table: &DecisionTable, tuple: &[u32]) -> (Vec<u64>, Vec<u64>) {
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    for row in table.rows() {
        let d = row
            .values
            .iter()
            .zip(tuple)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .fold(0u64, |m, (i, _)| m | 1 << i);
        if row.decision == 0 {
            zeros.push(d);
        } else {
            ones.push(d);
        }
    }
    (zeros, ones)
}

/// `M_ψ(T)` with the first tuple (in lexicographic order) attaining it.
pub fn m_table(psi: &ComplexityMeasure, table: &DecisionTable) -> Result<(u64, Vec<u32>)> {
    let n = table.num_columns();
    if table.is_constant() {
        return Ok((0, vec![0; n]));
    }
    let k = table.k() as u64;
    let count = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(k).filter(|&c| c <= MAX_TUPLES));
    let count = count.ok_or_else(|| {
        Error::TooLarge(format!("{k}^{n} tuples (limit {MAX_TUPLES})"))
    })?;
    let decode = |mut code: u64| {
        let mut t = vec![0u32; n];
        for slot in t.iter_mut().rev() {
            *slot = (code % k) as u32;
            code /= k;
        }
        t
    };
    let (value, code) = (0..count)
        .into_par_iter()
        .map(|code| m_tuple(psi, table, &decode(code)).map(|(v, _)| (v, code)))
        .try_reduce(
            || (0, u64::MAX),
            |a, b| Ok(if (b.0, std::cmp::Reverse(b.1)) > (a.0, std::cmp::Reverse(a.1)) { b } else { a }),
        )?;
    Ok((value, decode(code)))
}

/// `ψ^d(T)` with an optimal deterministic tree; `None` only for Λ.
pub fn psi_d(
    psi: &ComplexityMeasure,
    table: &DecisionTable,
) -> Result<(u64, Option<DecisionTree>)> {
    if !psi.is_decomposable() {
        return Err(Error::NotDecomposable);
    }
    if table.is_empty() {
        return Ok((0, None));
    }
    let index = RowIndex::new(table)?;
    let mut cols: Vec<usize> = (0..table.columns().len()).collect();
    cols.sort_by_key(|&p| table.columns()[p]);
    let root = match psi.suffix_combine() {
        Some(combine) => {
            let mut dp = SuffixDp {
                psi,
                table,
                index: &index,
                cols: &cols,
                combine,
                memo: HashMap::new(),
            };
            let v = dp.solve(index.all);
            (v, dp.build(index.all))
        }
        None => {
            let mut dp = StateDp {
                psi,
                table,
                index: &index,
                cols: &cols,
                memo: HashMap::new(),
            };
            let s0 = psi.initial_state()?;
            let v = dp.solve(index.all, &s0)?;
            (v, dp.build(index.all, &s0)?)
        }
    };
    let tree = DecisionTree::new(table.k(), vec![root.1]).expect("solver builds valid trees");
    Ok((root.0, Some(tree)))
}

/// Subtable DP for measures where a suffix's best cost does not depend on
/// the prefix: `g(S) = min_f combine(ψ(f), max_child g(child))`.
struct SuffixDp<'a> {
    psi: &'a ComplexityMeasure,
    table: &'a DecisionTable,
    index: &'a RowIndex,
    cols: &'a [usize],
    combine: SuffixCombine,
    memo: HashMap<u128, (u64, usize)>,
}

impl SuffixDp<'_> {
    fn solve(&mut self, mask: u128) -> u64 {
        if self.index.is_constant(mask) {
            return 0;
        }
        if let Some(&(v, _)) = self.memo.get(&mask) {
            return v;
        }
        let mut best: Option<(u64, usize)> = None;
        for &c in self.cols {
            if !self.index.splits(mask, c) {
                continue;
            }
            let w = self.psi.single(self.table.columns()[c]);
            if let (Some((b, _)), SuffixCombine::Add) = (best, self.combine) {
                if w >= b {
                    continue;
                }
            }
            let children: Vec<u128> = self.index.split(mask, c).map(|(_, m)| m).collect();
            let mut worst = 0;
            for m in children {
                worst = worst.max(self.solve(m));
            }
            let v = match self.combine {
                SuffixCombine::Add => w + worst,
                SuffixCombine::Max => w.max(worst),
            };
            if best.is_none_or(|(b, _)| v < b) {
                best = Some((v, c));
            }
        }
        let best = best.expect("distinct rows split on some column");
        self.memo.insert(mask, best);
        best.0
    }

    fn build(&self, mask: u128) -> TreeNode {
        if self.index.is_constant(mask) {
            return TreeNode::Leaf(self.index.decision(mask));
        }
        let c = self.memo[&mask].1;
        let edges = self
            .index
            .split(mask, c)
            .map(|(v, m)| (v, self.build(m)))
            .collect();
        TreeNode::query(self.table.columns()[c], edges)
    }
}

/// Subtable DP keyed by the cost state of the path prefix, exact for any
/// decomposable measure.
struct StateDp<'a> {
    psi: &'a ComplexityMeasure,
    table: &'a DecisionTable,
    index: &'a RowIndex,
    cols: &'a [usize],
    memo: HashMap<(u128, CostState), (u64, usize)>,
}

impl StateDp<'_> {
    fn solve(&mut self, mask: u128, state: &CostState) -> Result<u64> {
        if self.index.is_constant(mask) {
            return Ok(self.psi.value(state));
        }
        if let Some(&(v, _)) = self.memo.get(&(mask, state.clone())) {
            return Ok(v);
        }
        let mut best: Option<(u64, usize)> = None;
        for &c in self.cols {
            if !self.index.splits(mask, c) {
                continue;
            }
            let next = self.psi.extend(state, self.table.columns()[c])?;
            if let Some((b, _)) = best {
                // extensions never lower the cost
                if self.psi.value(&next) >= b {
                    continue;
                }
            }
            let children: Vec<u128> = self.index.split(mask, c).map(|(_, m)| m).collect();
            let mut worst = 0;
            for m in children {
                worst = worst.max(self.solve(m, &next)?);
            }
            if best.is_none_or(|(b, _)| worst < b) {
                best = Some((worst, c));
            }
        }
        let best = best.expect("distinct rows split on some column");
        self.memo.insert((mask, state.clone()), best);
        Ok(best.0)
    }

    fn build(&self, mask: u128, state: &CostState) -> Result<TreeNode> {
        if self.index.is_constant(mask) {
            return Ok(TreeNode::Leaf(self.index.decision(mask)));
        }
        let c = self.memo[&(mask, state.clone())].1;
        let attr = self.table.columns()[c];
        let next = self.psi.extend(state, attr)?;
        let edges = self
            .index
            .split(mask, c)
            .map(|(v, m)| Ok((v, self.build(m, &next)?)))
            .collect::<Result<_>>()?;
        Ok(TreeNode::query(attr, edges))
    }
}

/// Exhaustive `ψ^d(T)` over trees with distinct attributes on every path.
/// Works for any measure, including custom ones. Limited to 4 columns and
/// `k ≤ 3`.
pub fn psi_d_bruteforce(psi: &ComplexityMeasure, table: &DecisionTable) -> Result<u64> {
    if table.num_columns() > 4 || table.k() > 3 {
        return Err(Error::TooLarge(format!(
            "brute force accepts at most 4 columns and k <= 3, got {} columns and k = {}",
            table.num_columns(),
            table.k()
        )));
    }
    if table.is_empty() {
        return Ok(0);
    }
    let index = RowIndex::new(table)?;
    fn go(
        psi: &ComplexityMeasure,
        table: &DecisionTable,
        index: &RowIndex,
        mask: u128,
        word: &mut Vec<Attribute>,
    ) -> u64 {
        if index.is_constant(mask) {
            return psi.cost(word);
        }
        let mut best = u64::MAX;
        for (c, &attr) in table.columns().iter().enumerate() {
            if word.contains(&attr) {
                continue;
            }
            word.push(attr);
            let worst = index
                .split(mask, c)
                .map(|(_, m)| go(psi, table, index, m, word))
                .max()
                .unwrap_or(0);
            word.pop();
            best = best.min(worst);
        }
        best
    }
    Ok(go(psi, table, &index, index.all, &mut Vec::new()))
}

/// Cheapest decision rule for the 1-row at position `row`.
fn rule_at(psi: &ComplexityMeasure, table: &DecisionTable, row: usize) -> (u64, Vec<Attribute>) {
    let diffs: Vec<u64> = (0..table.num_rows())
        .filter(|&r| table.rows()[r].decision == 0)
        .map(|r| table.diff_mask(row, r))
        .collect();
    min_subset(psi, table, |m| diffs.iter().all(|&d| d & m != 0))
        .expect("all columns separate distinct rows")
}

/// `ψ^s(T)` with an optimal strongly nondeterministic tree; `None` for
/// constant tables.
pub fn psi_s(
    psi: &ComplexityMeasure,
    table: &DecisionTable,
) -> Result<(u64, Option<DecisionTree>)> {
    if table.is_constant() {
        return Ok((0, None));
    }
    check_width(table)?;
    let rules: Vec<(u64, Vec<(Attribute, u32)>)> = (0..table.num_rows())
        .into_par_iter()
        .filter(|&r| table.rows()[r].decision == 1)
        .map(|r| {
            let (cost, attrs) = rule_at(psi, table, r);
            let row = &table.rows()[r];
            let fixings = attrs
                .into_iter()
                .map(|a| (a, row.values[table.column_index(a).expect("own column")]))
                .collect();
            (cost, fixings)
        })
        .collect();
    let value = rules.iter().map(|(c, _)| *c).max().unwrap_or(0);
    let mut distinct: Vec<&Vec<(Attribute, u32)>> = Vec::new();
    for (_, r) in &rules {
        if !distinct.contains(&r) {
            distinct.push(r);
        }
    }
    let chains = distinct
        .into_iter()
        .map(|rule| {
            rule.iter()
                .rev()
                .fold(TreeNode::Leaf(1), |child, &(a, v)| {
                    TreeNode::query(a, vec![(v, child)])
                })
        })
        .collect();
    let tree = DecisionTree::new(table.k(), chains).expect("solver builds valid trees");
    Ok((value, Some(tree)))
}

/// All parameters of a table together with their witnesses.
#[derive(Clone, Debug)]
pub struct ParameterReport {
    pub k: u32,
    pub measure: String,
    pub n: u64,
    pub w: u64,
    pub w_psi: u64,
    pub v_psi: u64,
    pub theta: u64,
    pub s: u64,
    pub s_hat: u64,
    pub m: u64,
    pub psi_d: u64,
    pub psi_s: u64,
    pub min_test: Vec<Attribute>,
    pub separators: Vec<(u64, Vec<Attribute>)>,
    pub worst_tuple: Vec<u32>,
    pub det_tree: Option<DecisionTree>,
    pub snd_tree: Option<DecisionTree>,
    /// Failed witness validations or lemma checks. Always empty unless
    /// something is wrong in this library.
    pub inconsistencies: Vec<String>,
}

impl ParameterReport {
    pub fn is_consistent(&self) -> bool {
        self.inconsistencies.is_empty()
    }

    /// `(key, value)` pairs in display order.
    pub fn values(&self) -> [(&'static str, u64); 10] {
        [
            ("N", self.n),
            ("W", self.w),
            ("W_psi", self.w_psi),
            ("V_psi", self.v_psi),
            ("Theta", self.theta),
            ("S", self.s),
            ("S_hat", self.s_hat),
            ("M", self.m),
            ("psi_d", self.psi_d),
            ("psi_s", self.psi_s),
        ]
    }

    /// One `key=value` line per parameter.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.values() {
            out.push_str(&format!("{k}={v}\n"));
        }
        out.push_str(&format!("consistent={}\n", self.is_consistent()));
        out
    }
}

fn join_attrs(attrs: &[Attribute]) -> String {
    if attrs.is_empty() {
        return "{}".to_string();
    }
    let names: Vec<String> = attrs.iter().map(|a| a.to_string()).collect();
    format!("{{{}}}", names.join(","))
}

impl fmt::Display for ParameterReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "measure  {}", self.measure)?;
        for (k, v) in self.values() {
            writeln!(f, "{k:<8} {v}")?;
        }
        writeln!(f, "test     {}", join_attrs(&self.min_test))?;
        let tuple: Vec<String> = self.worst_tuple.iter().map(|v| v.to_string()).collect();
        writeln!(f, "worst    ({})", tuple.join(","))?;
        match &self.det_tree {
            Some(t) => writeln!(f, "det      {t}")?,
            None => writeln!(f, "det      none")?,
        }
        match &self.snd_tree {
            Some(t) => writeln!(f, "snd      {t}")?,
            None => writeln!(f, "snd      none")?,
        }
        for (i, (v, d)) in self.separators.iter().enumerate() {
            writeln!(f, "row {i:<4} S={v} {}", join_attrs(d))?;
        }
        if self.inconsistencies.is_empty() {
            writeln!(f, "consistent")
        } else {
            for line in &self.inconsistencies {
                writeln!(f, "INCONSISTENT {line}")?;
            }
            Ok(())
        }
    }
}

/// Computes every parameter and checks the witnesses and the inequalities
/// that relate them.
pub fn full_report(psi: &ComplexityMeasure, table: &DecisionTable) -> Result<ParameterReport> {
    let (w_psi, v_psi) = psi.table_weights(table);
    let (theta_v, min_test) = theta(psi, table)?;
    let seps = separators(psi, table)?;
    let s = seps.iter().map(|(v, _)| *v).max().unwrap_or(0);
    let (m, worst_tuple) = m_table(psi, table)?;
    let (d, det_tree) = psi_d(psi, table)?;
    let (sv, snd_tree) = psi_s(psi, table)?;
    let mut report = ParameterReport {
        k: table.k(),
        measure: psi.to_string(),
        n: table.num_rows() as u64,
        w: table.num_columns() as u64,
        w_psi,
        v_psi,
        theta: theta_v,
        s,
        s_hat: s_hat(psi, table)?,
        m,
        psi_d: d,
        psi_s: sv,
        min_test,
        separators: seps,
        worst_tuple,
        det_tree,
        snd_tree,
        inconsistencies: Vec::new(),
    };
    report.inconsistencies = crate::bounds::witness_problems(psi, table, &report);
    report.inconsistencies.extend(
        crate::bounds::check_report(&report, psi.is_depth())
            .into_iter()
            .filter(|c| !c.holds)
            .map(|c| c.to_string()),
    );
    Ok(report)
}
