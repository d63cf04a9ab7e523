//! Constructive procedures: max-cut two-coloring, adversarial relabeling of
//! critical tables, extremal closure members, the `T_n` family with its
//! measure, threshold tables and single-column generators.

use crate::closure::{is_critical, relabel, remove_columns, Relabeling};
use crate::error::{Error, Result};
use crate::measure::{ComplexityMeasure, Weights};
use crate::solver::{min_subset, psi_d, psi_s, s_hat, s_row_at, s_table, theta};
use crate::table::{Attribute, DecisionTable};
use num_bigint::BigUint;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Blue,
    Green,
}

/// Simple undirected graph whose nodes are row tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictGraph {
    nodes: Vec<Vec<u32>>,
    edges: Vec<(usize, usize)>,
}

impl ConflictGraph {
    pub fn new(nodes: Vec<Vec<u32>>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(a, b) in &edges {
            if a >= nodes.len() || b >= nodes.len() {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at node {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!("repeated edge ({a}, {b})")));
            }
        }
        Ok(ConflictGraph { nodes, edges })
    }

    pub fn nodes(&self) -> &[Vec<u32>] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges whose ends get different colors.
    pub fn multicolored(&self, coloring: &[Color]) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| coloring[a] != coloring[b])
            .count()
    }
}

/// Greedy coloring: nodes in order, each taking the color that cuts more
/// edges to already colored neighbors (blue on ties). At least half of the
/// edges end up multicolored.
pub fn two_color(graph: &ConflictGraph) -> Vec<Color> {
    let n = graph.nodes.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &graph.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut colors: Vec<Option<Color>> = vec![None; n];
    for v in 0..n {
        let (mut blue, mut green) = (0, 0);
        for &u in &adj[v] {
            match colors[u] {
                Some(Color::Blue) => green += 1,
                Some(Color::Green) => blue += 1,
                None => {}
            }
        }
        colors[v] = Some(if blue >= green { Color::Blue } else { Color::Green });
    }
    colors.into_iter().map(|c| c.expect("colored")).collect()
}

/// Result of relabeling a critical table against shallow trees.
#[derive(Clone, Debug)]
pub struct Adversarial {
    pub graph: ConflictGraph,
    pub coloring: Vec<Color>,
    pub relabeling: Relabeling,
    pub table: DecisionTable,
}

/// For a critical table: join the witness pair of every column by an edge,
/// two-color the graph, and label blue rows 0 and all other rows 1.
pub fn adversarial_relabel(table: &DecisionTable) -> Result<Adversarial> {
    let check = is_critical(table);
    if !check.critical {
        return Err(Error::NotCritical);
    }
    let mut node_rows: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut pairs = Vec::new();
    for (_, w) in &check.witnesses {
        let (a, b) = w.expect("critical tables have all witnesses");
        let (ra, rb) = (&table.rows()[a].values, &table.rows()[b].values);
        node_rows.insert(ra.clone());
        node_rows.insert(rb.clone());
        pairs.push((ra.clone(), rb.clone()));
    }
    let nodes: Vec<Vec<u32>> = node_rows.into_iter().collect();
    let pos = |r: &Vec<u32>| nodes.binary_search(r).expect("node present");
    let edges = pairs.iter().map(|(a, b)| (pos(a), pos(b))).collect();
    let graph = ConflictGraph::new(nodes.clone(), edges)?;
    let coloring = two_color(&graph);
    let relabeling = Relabeling::from_fn(table, |row| {
        match nodes.binary_search(&row.to_vec()) {
            Ok(i) if coloring[i] == Color::Blue => 0,
            _ => 1,
        }
    });
    let relabeled = relabel(&relabeling, table)?;
    Ok(Adversarial {
        graph,
        coloring,
        relabeling,
        table: relabeled,
    })
}

/// A named postcondition of a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.holds { "ok" } else { "FAILED" };
        write!(f, "{} {verdict}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, holds: bool, detail: String) -> Check {
    Check {
        name,
        holds,
        detail,
    }
}

/// `Θ(T*) ≥ ⌈W/2⌉`, `2 k^{h^d(T*)} > W` and the half-cut guarantee.
pub fn verify_adversarial(original: &DecisionTable, adv: &Adversarial) -> Result<Vec<Check>> {
    let h = ComplexityMeasure::Depth;
    let w = original.num_columns() as u64;
    let e = adv.graph.edges().len();
    let cut = adv.graph.multicolored(&adv.coloring);
    let (t, _) = theta(&h, &adv.table)?;
    let (d, _) = psi_d(&h, &adv.table)?;
    let k = BigUint::from(original.k());
    Ok(vec![
        check("half-cut", 2 * cut >= e, format!("{cut} of {e} edges")),
        check("theta>=W/2", 2 * t >= w, format!("Theta={t} W={w}")),
        check(
            "2k^h_det>W",
            BigUint::from(2u32) * k.pow(d as u32) > BigUint::from(w),
            format!("h_det={d} W={w}"),
        ),
    ])
}

/// A closure member with `ψ^d = W_ψ = S_ψ` equal to `S_ψ` of the source.
#[derive(Clone, Debug)]
pub struct Extremal {
    pub row: Vec<u32>,
    pub separator: Vec<Attribute>,
    pub table: DecisionTable,
}

fn keep_only(table: &DecisionTable, keep: &[Attribute]) -> Result<DecisionTable> {
    let removed: Vec<Attribute> = table
        .attributes()
        .iter()
        .copied()
        .filter(|a| !keep.contains(a))
        .collect();
    remove_columns(&removed, table)
}

/// Values of `row` on the (sorted) attributes of `reduced`.
fn project_row(table: &DecisionTable, reduced: &DecisionTable, row: &[u32]) -> Vec<u32> {
    reduced
        .columns()
        .iter()
        .map(|&a| row[table.column_index(a).expect("subset of columns")])
        .collect()
}

fn indicator(
    table: &DecisionTable,
    target: &[u32],
    on_target: u8,
) -> Result<DecisionTable> {
    let nu = Relabeling::from_fn(table, |r| if r == target { on_target } else { 1 - on_target });
    relabel(&nu, table)
}

/// Picks the first row with the largest separator cost, keeps only its
/// cheapest (then smallest) separator, and labels its projection 0 and every
/// other row 1.
pub fn lemma12_construct(psi: &ComplexityMeasure, table: &DecisionTable) -> Result<Extremal> {
    if table.num_rows() < 2 {
        return Err(Error::TooFewRows);
    }
    let mut best: Option<(u64, usize, Vec<Attribute>)> = None;
    for r in 0..table.num_rows() {
        let (v, d) = s_row_at(psi, table, r)?;
        if best.as_ref().is_none_or(|(b, _, _)| v > *b) {
            best = Some((v, r, d));
        }
    }
    let (_, r, separator) = best.expect("nonempty");
    let row = table.rows()[r].values.clone();
    let reduced = keep_only(table, &separator)?;
    let sigma = project_row(table, &reduced, &row);
    let t = indicator(&reduced, &sigma, 0)?;
    Ok(Extremal {
        row,
        separator,
        table: t,
    })
}

pub fn verify_lemma12(
    psi: &ComplexityMeasure,
    source: &DecisionTable,
    ext: &Extremal,
) -> Result<Vec<Check>> {
    let s_src = s_table(psi, source)?;
    let (w, _) = psi.table_weights(&ext.table);
    let (_, v_src) = psi.table_weights(source);
    let s_star = s_table(psi, &ext.table)?;
    let (d, _) = psi_d(psi, &ext.table)?;
    let (sn, _) = psi_s(psi, &ext.table)?;
    let detail = format!("psi_d={d} W_psi={w} S*={s_star} S={s_src}");
    Ok(vec![
        check("psi_d=W_psi", d == w, detail.clone()),
        check("W_psi=S*", w == s_star, detail.clone()),
        check("S*=S", s_star == s_src, detail),
        check("psi_s<=V_psi", sn <= v_src, format!("psi_s={sn} V_psi={v_src}")),
    ])
}

#[derive(Clone, Debug)]
pub struct DepthWitness {
    /// Smallest column set on which all rows differ.
    pub separating: Vec<Attribute>,
    /// The source restricted to `separating`; critical.
    pub critical: DecisionTable,
    pub table: DecisionTable,
}

/// Restricts to a smallest all-rows separating set and relabels the
/// resulting critical table adversarially. A single-row table is returned
/// as is.
pub fn lemma14_construct(table: &DecisionTable) -> Result<DepthWitness> {
    if table.is_empty() {
        return Err(Error::NotApplicable("the table has no rows".into()));
    }
    if table.num_rows() == 1 {
        return Ok(DepthWitness {
            separating: Vec::new(),
            critical: table.clone(),
            table: table.clone(),
        });
    }
    let n = table.num_rows();
    let diffs: Vec<u64> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .map(|(a, b)| table.diff_mask(a, b))
        .collect();
    let (_, separating) = min_subset(&ComplexityMeasure::Depth, table, |m| {
        diffs.iter().all(|&d| d & m != 0)
    })
    .expect("all columns separate distinct rows");
    let critical = keep_only(table, &separating)?;
    let adv = adversarial_relabel(&critical)?;
    Ok(DepthWitness {
        separating,
        critical,
        table: adv.table,
    })
}

/// `k^{(h^d(T*) + 2) Ŝ(T)} ≥ N(T)`.
pub fn verify_lemma14(source: &DecisionTable, wit: &DepthWitness) -> Result<Vec<Check>> {
    let h = ComplexityMeasure::Depth;
    let (d, _) = psi_d(&h, &wit.table)?;
    let sh = s_hat(&h, source)?;
    let lhs = BigUint::from(source.k()).pow(((d + 2) * sh) as u32);
    let n = source.num_rows() as u64;
    let mut out = vec![check(
        "k^((h_det+2)S_hat)>=N",
        lhs >= BigUint::from(n),
        format!("h_det={d} S_hat={sh} N={n}"),
    )];
    if n >= 2 {
        out.push(check(
            "critical",
            is_critical(&wit.critical).critical,
            wit.critical.canonical_key().to_string(),
        ));
    }
    Ok(out)
}

/// Keeps a cheapest separator of `row` and labels only its projection 1.
pub fn isolate_row(
    psi: &ComplexityMeasure,
    table: &DecisionTable,
    row: &[u32],
) -> Result<Extremal> {
    let r = table
        .row_index(row)
        .ok_or_else(|| Error::RowNotInTable(row.to_vec()))?;
    if table.num_rows() < 2 {
        return Err(Error::TooFewRows);
    }
    let (_, separator) = s_row_at(psi, table, r)?;
    let reduced = keep_only(table, &separator)?;
    let sigma = project_row(table, &reduced, row);
    let t = indicator(&reduced, &sigma, 1)?;
    Ok(Extremal {
        row: row.to_vec(),
        separator,
        table: t,
    })
}

/// `ψ^s(T*) = W_ψ(T*) = S_ψ(T, δ̄)` and a single 1-row.
pub fn verify_isolate(
    psi: &ComplexityMeasure,
    source: &DecisionTable,
    ext: &Extremal,
) -> Result<Vec<Check>> {
    let r = source
        .row_index(&ext.row)
        .ok_or_else(|| Error::RowNotInTable(ext.row.clone()))?;
    let (s, _) = s_row_at(psi, source, r)?;
    let (w, _) = psi.table_weights(&ext.table);
    let (sn, _) = psi_s(psi, &ext.table)?;
    let ones = ext.table.rows().iter().filter(|r| r.decision == 1).count();
    Ok(vec![
        check("one 1-row", ones == 1, format!("{ones} rows labeled 1")),
        check("psi_s=W_psi", sn == w, format!("psi_s={sn} W_psi={w}")),
        check("W_psi=S(row)", w == s, format!("W_psi={w} S(row)={s}")),
    ])
}

/// A nondecreasing function with `φ(0) = 0` and `φ(n) ≥ n`, given by its
/// values at `0..=max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phi {
    values: Vec<u64>,
}

impl Phi {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.first() != Some(&0) {
            return Err(Error::BadPhi("phi(0) must be 0".into()));
        }
        for n in 1..values.len() {
            if values[n] < values[n - 1] {
                return Err(Error::BadPhi(format!("phi decreases at {n}")));
            }
            if values[n] < n as u64 {
                return Err(Error::BadPhi(format!("phi({n}) = {} < {n}", values[n])));
            }
        }
        Ok(Phi { values })
    }

    /// Tabulates `f` on `0..=max`.
    pub fn from_fn(max: u64, f: impl Fn(u64) -> u64) -> Result<Self> {
        Self::new((0..=max).map(f).collect())
    }

    pub fn max_n(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn get(&self, n: u64) -> Option<u64> {
        self.values.get(n as usize).copied()
    }

    fn width(&self, n: u64) -> u64 {
        self.values[n as usize].div_ceil(n)
    }

    /// Number of attributes used by `T_1, …, T_{n-1}`.
    pub fn offset(&self, n: u64) -> u64 {
        (1..n).map(|i| self.width(i)).sum()
    }

    fn check_n(&self, n: u64) -> Result<()> {
        if n == 0 || n > self.max_n() {
            return Err(Error::BadPhi(format!(
                "n = {n} outside 1..={}",
                self.max_n()
            )));
        }
        Ok(())
    }
}

/// `T_n` of the family with its column weights.
#[derive(Clone, Debug)]
pub struct Fig5 {
    pub n: u64,
    pub table: DecisionTable,
    /// `φ(n) = l n + j` with `0 ≤ j < n`.
    pub l: u64,
    pub j: u64,
    pub weights: Vec<(Attribute, u64)>,
}

/// `T_n`: columns `f_{t(n)+1} … f_{t(n)+⌈φ(n)/n⌉}`, a zero row labeled 0 and
/// unit rows labeled 1. All columns weigh `n` except the last, which weighs
/// `j` when `j > 0`.
pub fn fig5_table(phi: &Phi, n: u64) -> Result<Fig5> {
    phi.check_n(n)?;
    let p = phi.get(n).expect("checked");
    let (l, j) = (p / n, p % n);
    let t = phi.offset(n);
    let width = phi.width(n);
    let columns: Vec<Attribute> = (t + 1..=t + width).map(|i| Attribute(i as u32)).collect();
    let weights = columns
        .iter()
        .enumerate()
        .map(|(pos, &a)| {
            let last = pos as u64 + 1 == width;
            (a, if last && j > 0 { j } else { n })
        })
        .collect();
    let table = unit_table(columns);
    Ok(Fig5 {
        n,
        table,
        l,
        j,
        weights,
    })
}

/// Zero row labeled 0 and one unit row per column labeled 1.
fn unit_table(columns: Vec<Attribute>) -> DecisionTable {
    let m = columns.len();
    let mut rows = vec![(vec![0; m], 0)];
    for i in 0..m {
        let mut v = vec![0; m];
        v[i] = 1;
        rows.push((v, 1));
    }
    DecisionTable::new(2, columns, rows).expect("valid unit table")
}

/// `T_1, …, T_max` of `phi` and the additive measure covering all of them
/// (with weight 1 for `f0` and unused attributes).
pub fn fig5_family(phi: &Phi) -> Result<(Vec<Fig5>, ComplexityMeasure)> {
    let members: Vec<Fig5> = (1..=phi.max_n())
        .map(|n| fig5_table(phi, n))
        .collect::<Result<_>>()?;
    let mut w = Weights::uniform(1);
    for m in &members {
        for &(a, x) in &m.weights {
            w = w.with(a, x);
        }
    }
    Ok((members, ComplexityMeasure::additive(w)))
}

/// Attributes `f_i` that evaluate a real `a` to 1 iff `a ≥ i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdSystem {
    thresholds: Vec<u32>,
}

impl ThresholdSystem {
    pub fn new(thresholds: Vec<u32>) -> Result<Self> {
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotApplicable(
                "thresholds must be strictly increasing".into(),
            ));
        }
        Ok(ThresholdSystem { thresholds })
    }

    pub fn thresholds(&self) -> &[u32] {
        &self.thresholds
    }

    /// Value patterns realizable on the reals: `1^j 0^(n-j)` for `j = 0..=n`.
    pub fn patterns(&self) -> Vec<Vec<u32>> {
        let n = self.thresholds.len();
        (0..=n)
            .map(|j| (0..n).map(|i| u32::from(i < j)).collect())
            .collect()
    }
}

/// Named decision functions for threshold tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolFn {
    Zero,
    One,
    /// The first coordinate.
    First,
    And,
    Or,
    Xor,
}

impl BoolFn {
    pub fn eval(self, v: &[u32]) -> u8 {
        match self {
            BoolFn::Zero => 0,
            BoolFn::One => 1,
            BoolFn::First => v.first().map_or(0, |&x| x as u8),
            BoolFn::And => u8::from(v.iter().all(|&x| x == 1)),
            BoolFn::Or => u8::from(v.contains(&1)),
            BoolFn::Xor => (v.iter().sum::<u32>() % 2) as u8,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "zero" | "0" => BoolFn::Zero,
            "one" | "1" => BoolFn::One,
            "first" | "identity" => BoolFn::First,
            "and" => BoolFn::And,
            "or" => BoolFn::Or,
            "xor" => BoolFn::Xor,
            _ => return None,
        })
    }
}

pub fn threshold_table(sys: &ThresholdSystem, nu: impl Fn(&[u32]) -> u8) -> DecisionTable {
    let columns = sys.thresholds.iter().map(|&i| Attribute(i)).collect();
    let rows = sys
        .patterns()
        .into_iter()
        .map(|p| {
            let d = nu(&p) as u32;
            (p, d)
        })
        .collect();
    DecisionTable::new(2, columns, rows).expect("step patterns are distinct")
}

/// `T_i` with rows `(0):0, (1):1` on column `f_i` for each `i ∈ D`, and the
/// additive measure with `ψ(f_i) = i` and `ψ(f_0) = 1`.
pub fn single_column_generators(d: &[u32]) -> Result<(Vec<DecisionTable>, ComplexityMeasure)> {
    if d.contains(&0) {
        return Err(Error::ContainsZero);
    }
    let mut set: Vec<u32> = d.to_vec();
    set.sort_unstable();
    set.dedup();
    let top = set.last().copied().unwrap_or(0);
    let mut w = Weights::uniform(1);
    for i in 1..=top {
        w = w.with(Attribute(i), i as u64);
    }
    let tables = set
        .iter()
        .map(|&i| {
            DecisionTable::new(2, vec![Attribute(i)], vec![(vec![0], 0), (vec![1], 1)])
                .expect("valid generator")
        })
        .collect();
    Ok((tables, ComplexityMeasure::additive(w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1, full_cube};

    fn graph(n: usize, edges: &[(usize, usize)]) -> ConflictGraph {
        ConflictGraph::new((0..n as u32).map(|i| vec![i]).collect(), edges.to_vec()).unwrap()
    }

    #[test]
    fn two_color_examples() {
        let path = graph(3, &[(0, 1), (1, 2)]);
        let c = two_color(&path);
        assert_eq!(c, vec![Color::Blue, Color::Green, Color::Blue]);
        assert_eq!(path.multicolored(&c), 2);
        let tri = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(tri.multicolored(&two_color(&tri)) >= 2);
        let none = graph(4, &[]);
        assert_eq!(none.multicolored(&two_color(&none)), 0);
    }

    #[test]
    fn two_color_half_cut_on_all_small_graphs() {
        for n in 0..=5usize {
            let all: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .collect();
            for bits in 0u32..1 << all.len() {
                let edges: Vec<_> = (0..all.len())
                    .filter(|i| bits >> i & 1 == 1)
                    .map(|i| all[i])
                    .collect();
                let g = graph(n, &edges);
                let cut = g.multicolored(&two_color(&g));
                assert!(2 * cut >= edges.len());
            }
        }
    }

    #[test]
    fn graph_validation() {
        assert!(ConflictGraph::new(vec![vec![0]], vec![(0, 0)]).is_err());
        assert!(ConflictGraph::new(vec![vec![0], vec![1]], vec![(0, 1), (1, 0)]).is_err());
        assert!(ConflictGraph::new(vec![vec![0]], vec![(0, 3)]).is_err());
    }

    #[test]
    fn adversarial_examples() {
        for cols in [2, 3] {
            let cube = full_cube(2, cols, |_| 0);
            let adv = adversarial_relabel(&cube).unwrap();
            let checks = verify_adversarial(&cube, &adv).unwrap();
            assert!(checks.iter().all(|c| c.holds), "{checks:?}");
        }
        let one = full_cube(2, 1, |_| 0);
        let adv = adversarial_relabel(&one).unwrap();
        assert!(!adv.table.is_constant());
        assert_eq!(psi_d(&ComplexityMeasure::Depth, &adv.table).unwrap().0, 1);
        let single = DecisionTable::new(2, vec![Attribute(0)], vec![(vec![0], 0)]).unwrap();
        assert_eq!(adversarial_relabel(&single).unwrap_err(), Error::NotCritical);
    }

    #[test]
    fn lemma12_examples() {
        let h = ComplexityMeasure::Depth;
        let ext = lemma12_construct(&h, &fig1()).unwrap();
        assert!(verify_lemma12(&h, &fig1(), &ext).unwrap().iter().all(|c| c.holds));
        assert_eq!(psi_d(&h, &ext.table).unwrap().0, 2);
        let two = full_cube(2, 1, |_| 1);
        let ext = lemma12_construct(&h, &two).unwrap();
        assert_eq!(ext.table.num_columns(), 1);
        assert!(verify_lemma12(&h, &two, &ext).unwrap().iter().all(|c| c.holds));
        let add = ComplexityMeasure::additive(Weights::from_pairs(&[(2, 1), (4, 3), (3, 2)]));
        let ext = lemma12_construct(&add, &fig1()).unwrap();
        assert!(verify_lemma12(&add, &fig1(), &ext).unwrap().iter().all(|c| c.holds));
        let one = DecisionTable::new(2, vec![Attribute(0)], vec![(vec![0], 0)]).unwrap();
        assert_eq!(lemma12_construct(&h, &one).unwrap_err(), Error::TooFewRows);
    }

    #[test]
    fn lemma14_examples() {
        let w = lemma14_construct(&fig1()).unwrap();
        assert!(verify_lemma14(&fig1(), &w).unwrap().iter().all(|c| c.holds));
        let single = DecisionTable::new(2, vec![Attribute(0)], vec![(vec![0], 1)]).unwrap();
        let w = lemma14_construct(&single).unwrap();
        assert_eq!(w.table, single);
        assert!(verify_lemma14(&single, &w).unwrap().iter().all(|c| c.holds));
        let cube = full_cube(2, 3, |v| (v[0] ^ v[2]) as u8);
        let w = lemma14_construct(&cube).unwrap();
        assert!(verify_lemma14(&cube, &w).unwrap().iter().all(|c| c.holds));
    }

    #[test]
    fn isolate_examples() {
        let h = ComplexityMeasure::Depth;
        let ext = isolate_row(&h, &fig1(), &[1, 1, 1]).unwrap();
        assert_eq!(ext.separator, vec![Attribute(2), Attribute(3)]);
        assert_eq!(psi_s(&h, &ext.table).unwrap().0, 2);
        assert!(verify_isolate(&h, &fig1(), &ext).unwrap().iter().all(|c| c.holds));
        let two = full_cube(2, 1, |_| 0);
        let ext = isolate_row(&h, &two, &[0]).unwrap();
        assert_eq!(psi_s(&h, &ext.table).unwrap().0, 1);
        let cube = full_cube(2, 3, |_| 0);
        let ext = isolate_row(&h, &cube, &[1, 0, 1]).unwrap();
        assert_eq!(psi_s(&h, &ext.table).unwrap().0, 3);
        assert_eq!(ext.table.num_columns(), 3);
        assert!(matches!(
            isolate_row(&h, &fig1(), &[1, 0, 1]),
            Err(Error::RowNotInTable(_))
        ));
    }

    #[test]
    fn fig5_examples() {
        let sq = Phi::from_fn(3, |n| n * n).unwrap();
        let t2 = fig5_table(&sq, 2).unwrap();
        assert_eq!(t2.table.columns(), &[Attribute(2), Attribute(3)]);
        assert_eq!(
            t2.table.canonical_key().to_string(),
            "k2|f2,f3|0,0:0;0,1:1;1,0:1"
        );
        assert_eq!(t2.weights, vec![(Attribute(2), 2), (Attribute(3), 2)]);
        assert_eq!((t2.l, t2.j), (2, 0));
        let (family, psi) = fig5_family(&sq).unwrap();
        for f in &family {
            let n = f.n;
            assert_eq!(psi.table_weights(&f.table).0, n * n);
            assert_eq!(psi_s(&psi, &f.table).unwrap().0, n);
            assert_eq!(psi_d(&psi, &f.table).unwrap().0, n * n);
        }
        assert_eq!(psi.single(Attribute(0)), 1);
        assert_eq!(psi.single(Attribute(1)), 1);
        assert_eq!(psi.single(Attribute(6)), 3);
        let id = Phi::from_fn(5, |n| n).unwrap();
        for n in 1..=5 {
            let f = fig5_table(&id, n).unwrap();
            assert_eq!(f.table.num_columns(), 1);
            assert_eq!(f.weights[0].1, n);
        }
    }

    #[test]
    fn fig5_remainder_weight() {
        // phi(2) = 5 = 2*2 + 1: three columns weighing 2, 2, 1
        let phi = Phi::new(vec![0, 1, 5]).unwrap();
        let f = fig5_table(&phi, 2).unwrap();
        assert_eq!((f.l, f.j), (2, 1));
        let w: Vec<u64> = f.weights.iter().map(|x| x.1).collect();
        assert_eq!(w, vec![2, 2, 1]);
    }

    #[test]
    fn bad_phi() {
        assert!(matches!(Phi::new(vec![0, 2, 1]), Err(Error::BadPhi(_))));
        assert!(matches!(Phi::new(vec![0, 1, 1]), Err(Error::BadPhi(_))));
        assert!(matches!(Phi::new(vec![1]), Err(Error::BadPhi(_))));
        let phi = Phi::new(vec![0, 1]).unwrap();
        assert!(fig5_table(&phi, 2).is_err());
    }

    #[test]
    fn threshold_examples() {
        let xor = threshold_table(&ThresholdSystem::new(vec![1, 2]).unwrap(), |v| {
            BoolFn::Xor.eval(v)
        });
        assert_eq!(xor.canonical_key().to_string(), "k2|f1,f2|0,0:0;1,0:1;1,1:0");
        let id = threshold_table(&ThresholdSystem::new(vec![1]).unwrap(), |v| {
            BoolFn::First.eval(v)
        });
        assert_eq!(id.canonical_key().to_string(), "k2|f1|0:0;1:1");
        let ones = threshold_table(&ThresholdSystem::new(vec![1, 2, 3]).unwrap(), |v| {
            BoolFn::One.eval(v)
        });
        assert_eq!(ones.num_rows(), 4);
        assert!(ones.is_constant());
        assert!(ThresholdSystem::new(vec![2, 2]).is_err());
    }

    #[test]
    fn generator_examples() {
        let (ts, psi) = single_column_generators(&[2, 5]).unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(ts[1].columns(), &[Attribute(5)]);
        assert_eq!(psi.single(Attribute(2)), 2);
        assert_eq!(psi.single(Attribute(5)), 5);
        assert_eq!(psi.single(Attribute(0)), 1);
        let (ts, psi) = single_column_generators(&[1]).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(psi.single(Attribute(1)), 1);
        assert_eq!(single_column_generators(&[0, 3]).unwrap_err(), Error::ContainsZero);
    }
}
