//! Decision tables with 0-1 decisions over the alphabet `E_k = {0, …, k-1}`.
//!
//! A table is an ordered list of distinct columns (attributes `f_i`) and an
//! ordered list of pairwise distinct rows, each carrying a decision 0 or 1.
//! Row order is kept for display only; equality of tables is equality up to
//! a permutation of rows and is decided by [`CanonicalKey`].

use crate::error::{Error, Result};
use std::collections::HashSet;
use std::fmt;

/// An attribute `f_i`, identified by its index alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Attribute(pub u32);

impl Attribute {
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

/// A row of a table: a value tuple plus its decision.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Row {
    pub values: Vec<u32>,
    pub decision: u8,
}

impl Row {
    pub fn new(values: Vec<u32>, decision: u8) -> Self {
        Row { values, decision }
    }
}

/// A validated decision table. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionTable {
    k: u32,
    columns: Vec<Attribute>,
    rows: Vec<Row>,
}

/// Row-permutation-invariant identity of a table.
///
/// All tables without rows share one key, whatever their columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl DecisionTable {
    /// Validates raw table data. Decisions are taken as `u32` so that values
    /// outside `{0, 1}` can be reported instead of truncated.
    pub fn new(k: u32, columns: Vec<Attribute>, rows: Vec<(Vec<u32>, u32)>) -> Result<Self> {
        if k < 2 {
            return Err(Error::BadAlphabet(k));
        }
        let mut seen_cols = HashSet::new();
        for &c in &columns {
            if !seen_cols.insert(c) {
                return Err(Error::DuplicateColumn(c));
            }
        }
        if columns.is_empty() && !rows.is_empty() {
            return Err(Error::RowsWithoutColumns);
        }
        let mut seen_rows = HashSet::new();
        let mut out = Vec::with_capacity(rows.len());
        for (values, decision) in rows {
            if values.len() != columns.len() {
                return Err(Error::RowLength {
                    expected: columns.len(),
                    found: values.len(),
                });
            }
            if let Some(&value) = values.iter().find(|&&v| v >= k) {
                return Err(Error::ValueOutOfRange { value, k });
            }
            if decision > 1 {
                return Err(Error::BadDecision(decision));
            }
            if !seen_rows.insert(values.clone()) {
                return Err(Error::DuplicateRow(values));
            }
            out.push(Row::new(values, decision as u8));
        }
        Ok(DecisionTable {
            k,
            columns,
            rows: out,
        })
    }

    /// The empty table Λ over the given columns.
    pub fn empty(k: u32, columns: Vec<Attribute>) -> Result<Self> {
        Self::new(k, columns, Vec::new())
    }

    /// Builds a table from rows that are already known to be valid.
    pub(crate) fn from_parts(k: u32, columns: Vec<Attribute>, rows: Vec<Row>) -> Self {
        debug_assert!(Self::new(
            k,
            columns.clone(),
            rows.iter()
                .map(|r| (r.values.clone(), r.decision as u32))
                .collect()
        )
        .is_ok());
        DecisionTable { k, columns, rows }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn columns(&self) -> &[Attribute] {
        &self.columns
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// `N(T)`.
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// `W(T)`, the number of columns; 0 for Λ.
    pub fn num_columns(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.columns.len()
        }
    }

    /// True for Λ.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `P(T)`; empty for Λ.
    pub fn attributes(&self) -> &[Attribute] {
        if self.is_empty() {
            &[]
        } else {
            &self.columns
        }
    }

    pub fn column_index(&self, attr: Attribute) -> Option<usize> {
        self.columns.iter().position(|&c| c == attr)
    }

    pub fn row_index(&self, values: &[u32]) -> Option<usize> {
        self.rows.iter().position(|r| r.values == values)
    }

    /// Membership in the constant class; Λ counts as constant.
    pub fn is_constant(&self) -> bool {
        match self.rows.first() {
            None => true,
            Some(first) => self.rows.iter().all(|r| r.decision == first.decision),
        }
    }

    /// `T(f_{i1},δ1)…(f_{im},δm)`: keeps the rows matching every fixing.
    pub fn restrict(&self, fixings: &[(Attribute, u32)]) -> Result<DecisionTable> {
        let mut positions = Vec::with_capacity(fixings.len());
        for &(attr, value) in fixings {
            let pos = self
                .column_index(attr)
                .ok_or(Error::UnknownAttribute(attr))?;
            positions.push((pos, value));
        }
        let rows = self
            .rows
            .iter()
            .filter(|r| positions.iter().all(|&(p, v)| r.values[p] == v))
            .cloned()
            .collect();
        Ok(DecisionTable {
            k: self.k,
            columns: self.columns.clone(),
            rows,
        })
    }

    /// Same rows and columns, decisions replaced.
    pub fn with_decisions(&self, decisions: &[u8]) -> DecisionTable {
        assert_eq!(decisions.len(), self.rows.len());
        let rows = self
            .rows
            .iter()
            .zip(decisions)
            .map(|(r, &d)| Row::new(r.values.clone(), d))
            .collect();
        DecisionTable {
            k: self.k,
            columns: self.columns.clone(),
            rows,
        }
    }

    /// Rows sorted by values (then decision).
    pub fn sorted_rows(&self) -> Vec<Row> {
        let mut rows = self.rows.clone();
        rows.sort();
        rows
    }

    /// Same table with rows in canonical order.
    pub fn canonicalized(&self) -> DecisionTable {
        DecisionTable {
            k: self.k,
            columns: self.columns.clone(),
            rows: self.sorted_rows(),
        }
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        if self.is_empty() {
            return CanonicalKey("lambda".to_string());
        }
        let cols: Vec<String> = self.columns.iter().map(|c| c.to_string()).collect();
        let rows: Vec<String> = self
            .sorted_rows()
            .iter()
            .map(|r| {
                let vals: Vec<String> = r.values.iter().map(|v| v.to_string()).collect();
                format!("{}:{}", vals.join(","), r.decision)
            })
            .collect();
        CanonicalKey(format!("k{}|{}|{}", self.k, cols.join(","), rows.join(";")))
    }

    /// Bitmask of the columns (by position) where two rows differ.
    pub(crate) fn diff_mask(&self, a: usize, b: usize) -> u64 {
        let (ra, rb) = (&self.rows[a].values, &self.rows[b].values);
        ra.iter()
            .zip(rb)
            .enumerate()
            .filter(|(_, (x, y))| x != y)
            .fold(0u64, |m, (i, _)| m | (1 << i))
    }
}

/// Per-column value masks over row indices; the working representation of
/// subtables for the solvers. Limited to 128 rows and 64 columns.
#[derive(Clone, Debug)]
pub(crate) struct RowIndex {
    /// `masks[col][value]` = rows having `value` in column `col`.
    pub masks: Vec<Vec<u128>>,
    pub ones: u128,
    pub all: u128,
}

pub(crate) const MAX_MASK_ROWS: usize = 128;
pub(crate) const MAX_MASK_COLUMNS: usize = 64;

impl RowIndex {
    pub fn new(table: &DecisionTable) -> Result<Self> {
        if table.num_rows() > MAX_MASK_ROWS {
            return Err(Error::TooLarge(format!(
                "{} rows (limit {MAX_MASK_ROWS})",
                table.num_rows()
            )));
        }
        if table.columns().len() > MAX_MASK_COLUMNS {
            return Err(Error::TooLarge(format!(
                "{} columns (limit {MAX_MASK_COLUMNS})",
                table.columns().len()
            )));
        }
        let k = table.k() as usize;
        let mut masks = vec![vec![0u128; k]; table.columns().len()];
        let mut ones = 0u128;
        for (i, row) in table.rows().iter().enumerate() {
            for (c, &v) in row.values.iter().enumerate() {
                masks[c][v as usize] |= 1 << i;
            }
            if row.decision == 1 {
                ones |= 1 << i;
            }
        }
        let all = if table.num_rows() == 128 {
            u128::MAX
        } else {
            (1u128 << table.num_rows()) - 1
        };
        Ok(RowIndex { masks, ones, all })
    }

    pub fn is_constant(&self, mask: u128) -> bool {
        mask & self.ones == 0 || mask & !self.ones == 0
    }

    /// Decision shared by all rows of a nonempty constant mask.
    pub fn decision(&self, mask: u128) -> u8 {
        u8::from(mask & self.ones != 0)
    }

    /// Nonempty children of `mask` when querying column `col`.
    pub fn split(&self, mask: u128, col: usize) -> impl Iterator<Item = (u32, u128)> + '_ {
        self.masks[col]
            .iter()
            .enumerate()
            .map(move |(v, &m)| (v as u32, m & mask))
            .filter(|&(_, m)| m != 0)
    }

    /// Whether column `col` takes at least two values on `mask`.
    pub fn splits(&self, mask: u128, col: usize) -> bool {
        self.masks[col]
            .iter()
            .filter(|&&m| m & mask != 0)
            .nth(1)
            .is_some()
    }
}
