//! Seeded table generation, exhaustive small-table enumeration and the
//! verification suites.

use crate::bounds::check_table;
use crate::closure::{combinations, is_critical, Limits};
use crate::construct::{
    adversarial_relabel, isolate_row, lemma12_construct, lemma14_construct, two_color,
    verify_adversarial, verify_isolate, verify_lemma12, verify_lemma14, ConflictGraph,
};
use crate::error::{Error, Result};
use crate::explore::{builtin, growth, GrowthFn, GrowthReport};
use crate::fixtures::all_tuples;
use crate::format::render_table;
use crate::measure::{ComplexityMeasure, Weights};
use crate::solver::{psi_d, psi_d_bruteforce};
use crate::table::{Attribute, DecisionTable};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

/// The documented random stream (see GENERATOR.md).
pub struct TableRng(ChaCha8Rng);

impl TableRng {
    pub fn new(seed: u64) -> Self {
        TableRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n` by rejection of the incomplete top zone.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    /// True with probability `num / den`.
    pub fn bernoulli(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

fn space(k: u32, cols: usize) -> u128 {
    (0..cols).fold(1u128, |acc, _| acc.saturating_mul(k as u128))
}

/// Draws `rows` distinct tuples over `f0..f(cols-1)` and Bernoulli
/// decisions from `rng`.
pub fn random_table_from(
    rng: &mut TableRng,
    k: u32,
    cols: usize,
    rows: usize,
    p1: (u64, u64),
) -> Result<DecisionTable> {
    if k < 2 {
        return Err(Error::BadAlphabet(k));
    }
    if rows as u128 > space(k, cols) || (cols == 0 && rows > 0) {
        return Err(Error::TooManyRows { k, cols, rows });
    }
    assert!(p1.1 > 0 && p1.0 <= p1.1, "p1 must be a fraction in [0, 1]");
    let mut seen = std::collections::HashSet::new();
    let mut tuples = Vec::with_capacity(rows);
    while tuples.len() < rows {
        let t: Vec<u32> = (0..cols).map(|_| rng.below(k as u64) as u32).collect();
        if seen.insert(t.clone()) {
            tuples.push(t);
        }
    }
    let data = tuples
        .into_iter()
        .map(|t| {
            let d = u32::from(rng.bernoulli(p1.0, p1.1));
            (t, d)
        })
        .collect();
    DecisionTable::new(k, (0..cols as u32).map(Attribute).collect(), data)
}

/// `random_table_from` on a fresh stream seeded with `seed`.
pub fn random_table(
    k: u32,
    cols: usize,
    rows: usize,
    p1: (u64, u64),
    seed: u64,
) -> Result<DecisionTable> {
    random_table_from(&mut TableRng::new(seed), k, cols, rows, p1)
}

/// `count` tables with `1..=max_cols` columns and `1..=min(max_rows, k^cols)`
/// rows, shapes uniform, decisions fair coins, all from one stream.
pub fn random_tables(
    k: u32,
    max_cols: usize,
    max_rows: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<DecisionTable>> {
    if max_cols == 0 || max_rows == 0 {
        return Err(Error::NotApplicable(
            "random tables need at least one column and one row".into(),
        ));
    }
    let mut rng = TableRng::new(seed);
    (0..count)
        .map(|_| {
            let cols = rng.below(max_cols as u64) as usize + 1;
            let cap = space(k, cols).min(max_rows as u128) as u64;
            let rows = rng.below(cap) as usize + 1;
            random_table_from(&mut rng, k, cols, rows, (1, 2))
        })
        .collect()
}

/// Largest number of tables [`enumerate_small_tables`] agrees to build.
pub const MAX_SMALL_TABLES: u128 = 5_000_000;

fn binomial(n: u128, r: u128) -> u128 {
    (0..r).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Every table over `f0..f(c-1)`, `1 ≤ c ≤ max_cols`, with `1..=max_rows`
/// rows, once each; Λ first when `include_lambda`. Rows are in
/// lexicographic order.
pub fn enumerate_small_tables(
    k: u32,
    max_cols: usize,
    max_rows: usize,
    include_lambda: bool,
) -> Result<Vec<DecisionTable>> {
    let mut total = 0u128;
    for c in 1..=max_cols {
        let s = space(k, c);
        for r in 1..=(max_rows as u128).min(s) {
            total = total.saturating_add(binomial(s, r).saturating_mul(1u128 << r.min(100)));
        }
    }
    if total > MAX_SMALL_TABLES {
        return Err(Error::TooLarge(format!(
            "{total} tables (limit {MAX_SMALL_TABLES})"
        )));
    }
    let mut out = Vec::with_capacity(total as usize + 1);
    if include_lambda {
        out.push(DecisionTable::empty(k, Vec::new())?);
    }
    for c in 1..=max_cols {
        let tuples = all_tuples(k, c);
        let columns: Vec<Attribute> = (0..c as u32).map(Attribute).collect();
        for r in 1..=max_rows.min(tuples.len()) {
            for pick in combinations(tuples.len(), r) {
                for code in 0u32..1 << r {
                    let rows = pick
                        .iter()
                        .enumerate()
                        .map(|(i, &t)| (tuples[t].clone(), code >> i & 1))
                        .collect();
                    out.push(DecisionTable::new(k, columns.clone(), rows)?);
                }
            }
        }
    }
    Ok(out)
}

/// The measures the suites use by default. Weights go by attribute index,
/// which for generated tables is the column position.
pub fn suite_measures() -> Vec<(String, ComplexityMeasure)> {
    let mut add = Weights::uniform(1);
    let mut maxw = Weights::uniform(1);
    for i in 0..16u32 {
        add = add.with(Attribute(i), i as u64 + 1);
        maxw = maxw.with(Attribute(i), [2, 1, 3][i as usize % 3]);
    }
    vec![
        ("h".to_string(), ComplexityMeasure::Depth),
        ("additive".to_string(), ComplexityMeasure::additive(add)),
        ("maxw".to_string(), ComplexityMeasure::max_weight(maxw)),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lemmas,
    DpOracle,
    Constructions,
    Growth,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemmas" => Ok(Suite::Lemmas),
            "dp-oracle" => Ok(Suite::DpOracle),
            "constructions" => Ok(Suite::Constructions),
            "growth" => Ok(Suite::Growth),
            _ => Err(Error::NotApplicable(format!("unknown suite {s}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Lemmas => "lemmas",
            Suite::DpOracle => "dp-oracle",
            Suite::Constructions => "constructions",
            Suite::Growth => "growth",
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifySuiteConfig {
    pub suite: Suite,
    pub k: u32,
    pub max_cols: usize,
    pub max_rows: usize,
    /// 0 means every table within the bounds.
    pub samples: usize,
    pub seed: u64,
    pub measures: Vec<(String, ComplexityMeasure)>,
}

impl VerifySuiteConfig {
    pub fn new(suite: Suite) -> Self {
        VerifySuiteConfig {
            suite,
            k: 2,
            max_cols: 3,
            max_rows: 4,
            samples: 0,
            seed: 0,
            measures: suite_measures(),
        }
    }

    fn tables(&self) -> Result<Vec<DecisionTable>> {
        if self.samples == 0 {
            enumerate_small_tables(self.k, self.max_cols, self.max_rows, true)
        } else {
            random_tables(self.k, self.max_cols, self.max_rows, self.samples, self.seed)
        }
    }
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub measure: String,
    pub message: String,
    /// Locally minimal under row removal.
    pub table: DecisionTable,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suite: Suite,
    /// Individual checks performed.
    pub checks: usize,
    pub tables: usize,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Failing tables in `.dt` form, one string per failure.
    pub fn counterexamples(&self) -> Vec<String> {
        self.failures
            .iter()
            .map(|f| format!("# {} {}\n{}", f.measure, f.message, render_table(&f.table)))
            .collect()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite    {}", self.suite)?;
        writeln!(f, "tables   {}", self.tables)?;
        writeln!(f, "checks   {}", self.checks)?;
        for n in &self.notes {
            writeln!(f, "note     {n}")?;
        }
        for x in &self.failures {
            writeln!(f, "FAIL     [{}] {} {}", x.measure, x.message, x.table.canonical_key())?;
        }
        writeln!(
            f,
            "verdict  {}",
            if self.passed() { "pass" } else { "FAIL" }
        )
    }
}

/// Removes rows one at a time while `fails` keeps holding.
pub fn shrink(table: &DecisionTable, fails: impl Fn(&DecisionTable) -> bool) -> DecisionTable {
    let mut cur = table.clone();
    'outer: loop {
        for i in 0..cur.num_rows() {
            let rows = cur
                .rows()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, r)| (r.values.clone(), r.decision as u32))
                .collect();
            let cols = if cur.num_rows() == 1 {
                Vec::new()
            } else {
                cur.columns().to_vec()
            };
            let Ok(smaller) = DecisionTable::new(cur.k(), cols, rows) else {
                continue;
            };
            if fails(&smaller) {
                cur = smaller;
                continue 'outer;
            }
        }
        return cur;
    }
}

/// Outcome of checking one table: number of checks and failure messages.
type TableCheck = (usize, Vec<(String, String)>);

fn table_failures(
    suite: Suite,
    measures: &[(String, ComplexityMeasure)],
    t: &DecisionTable,
) -> TableCheck {
    let mut count = 0;
    let mut out = Vec::new();
    for (name, psi) in measures {
        let (c, msgs) = check_one(suite, psi, t);
        count += c;
        out.extend(msgs.into_iter().map(|m| (name.clone(), m)));
    }
    (count, out)
}

fn failed_checks<T: fmt::Display>(items: impl IntoIterator<Item = (bool, T)>) -> (usize, Vec<String>) {
    let mut n = 0;
    let mut bad = Vec::new();
    for (ok, item) in items {
        n += 1;
        if !ok {
            bad.push(item.to_string());
        }
    }
    (n, bad)
}

fn check_one(suite: Suite, psi: &ComplexityMeasure, t: &DecisionTable) -> (usize, Vec<String>) {
    let run = || -> Result<(usize, Vec<String>)> {
        match suite {
            Suite::Lemmas => {
                let checks = check_table(psi, t)?;
                Ok(failed_checks(checks.into_iter().map(|c| (c.holds, c))))
            }
            Suite::DpOracle => {
                let (d, _) = psi_d(psi, t)?;
                let b = psi_d_bruteforce(psi, t)?;
                Ok(failed_checks([(d == b, format!("psi_d={d} brute force={b}"))]))
            }
            Suite::Constructions => {
                let mut all = Vec::new();
                if t.num_rows() >= 2 {
                    let ext = lemma12_construct(psi, t)?;
                    all.extend(verify_lemma12(psi, t, &ext)?);
                    let ext = isolate_row(psi, t, &t.rows()[0].values)?;
                    all.extend(verify_isolate(psi, t, &ext)?);
                }
                if psi.is_depth() && !t.is_empty() {
                    let wit = lemma14_construct(t)?;
                    all.extend(verify_lemma14(t, &wit)?);
                    let critical = if is_critical(t).critical {
                        t.clone()
                    } else {
                        wit.critical.clone()
                    };
                    if is_critical(&critical).critical {
                        let adv = adversarial_relabel(&critical)?;
                        all.extend(verify_adversarial(&critical, &adv)?);
                    }
                }
                Ok(failed_checks(all.into_iter().map(|c| (c.holds, c))))
            }
            Suite::Growth => unreachable!("growth has no per-table checks"),
        }
    };
    match run() {
        Ok(r) => r,
        Err(e) => (1, vec![format!("error: {e}")]),
    }
}

/// Random simple graphs for the coloring bound: up to 8 nodes.
fn random_graphs(seed: u64, count: usize) -> Vec<ConflictGraph> {
    let mut rng = TableRng::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..count)
        .map(|_| {
            let n = rng.below(8) as usize + 1;
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.bernoulli(1, 2) {
                        edges.push((a, b));
                    }
                }
            }
            let nodes = (0..n as u32).map(|i| vec![i]).collect();
            ConflictGraph::new(nodes, edges).expect("simple graph")
        })
        .collect()
}

/// Runs the acceptance growth scenarios and the sandwich properties.
pub fn growth_suite() -> Result<(Vec<GrowthReport>, Vec<(bool, String)>)> {
    let limits = Limits::default();
    let h = ComplexityMeasure::Depth;
    let mut reports = Vec::new();
    let mut checks = Vec::new();
    let id = builtin("id5")?;
    let mut id_reports = Vec::new();
    for f in [GrowthFn::FW, GrowthFn::FTheta, GrowthFn::G] {
        let r = growth(f, &id.generators, &id.name, &h, 5, limits)?;
        checks.push((
            r.values() == vec![0, 1, 2, 3, 4, 5] && r.all_exhausted(),
            format!("{} {f} = n on 0..5: {:?}", id.name, r.values()),
        ));
        id_reports.push(r);
    }
    let thm3 = builtin("thm3:2,5,9")?;
    let psi = thm3.measure.clone().expect("builtin measure");
    let steps = thm3.steps.clone().expect("builtin steps");
    let want: Vec<u64> = (0..=10).map(|n| steps.eval(n)).collect();
    let mut thm3_reports = Vec::new();
    for f in [GrowthFn::FW, GrowthFn::FTheta] {
        let r = growth(f, &thm3.generators, &thm3.name, &psi, 10, limits)?;
        checks.push((
            r.values() == want && r.all_exhausted(),
            format!("{} {f} = H_D on 0..10: {:?}", thm3.name, r.values()),
        ));
        thm3_reports.push(r);
    }
    let fig5 = builtin("fig5:1,4,9")?;
    let psi5 = fig5.measure.clone().expect("builtin measure");
    let r = growth(GrowthFn::F, &fig5.generators, &fig5.name, &psi5, 3, limits)?;
    checks.push((
        r.values() == vec![0, 1, 4, 9] && r.all_exhausted(),
        format!("{} F = phi on 0..3: {:?}", fig5.name, r.values()),
    ));
    reports.extend(id_reports.iter().cloned());
    reports.extend(thm3_reports.iter().cloned());
    reports.push(r);
    for r in &reports {
        let v = r.values();
        checks.push((
            v.windows(2).all(|w| w[0] <= w[1]),
            format!("{} {} nondecreasing", r.generator, r.function),
        ));
    }
    for group in [&id_reports[..2], &thm3_reports[..]] {
        let (fw, ft) = (&group[0], &group[1]);
        for (a, b) in fw.points.iter().zip(&ft.points) {
            if a.exhausted && b.exhausted {
                checks.push((
                    a.value <= b.value && b.value <= a.n,
                    format!("{} FW <= FTheta <= n at {}", fw.generator, a.n),
                ));
            }
        }
    }
    for (a, b) in thm3_reports[0].points.iter().zip(&thm3_reports[1].points) {
        checks.push((
            steps.eval(a.n) <= a.value && steps.eval(b.n) <= b.value,
            format!("H_D <= FW, FTheta at {}", a.n),
        ));
    }
    for p in &id_reports[2].points {
        if p.exhausted {
            checks.push((p.value <= p.n, format!("G <= n at {}", p.n)));
        }
    }
    Ok((reports, checks))
}

/// Runs one suite. Identical configs give identical reports.
pub fn verify(config: &VerifySuiteConfig) -> Result<VerifyReport> {
    if config.suite == Suite::Growth {
        let (_, checks) = growth_suite()?;
        let failures = checks
            .iter()
            .filter(|(ok, _)| !ok)
            .map(|(_, m)| Failure {
                measure: "builtin".into(),
                message: m.clone(),
                table: DecisionTable::empty(2, Vec::new()).expect("empty table"),
            })
            .collect();
        return Ok(VerifyReport {
            suite: config.suite,
            checks: checks.len(),
            tables: 0,
            failures,
            notes: checks.iter().map(|(_, m)| m.clone()).collect(),
        });
    }
    let tables = config.tables()?;
    let results: Vec<TableCheck> = tables
        .par_iter()
        .map(|t| table_failures(config.suite, &config.measures, t))
        .collect();
    let mut checks: usize = results.iter().map(|r| r.0).sum();
    let mut failures: Vec<Failure> = tables
        .par_iter()
        .zip(results)
        .flat_map_iter(|(t, (_, fails))| {
            fails.into_iter().map(move |(name, message)| {
                let psi = &config
                    .measures
                    .iter()
                    .find(|m| m.0 == name)
                    .expect("known measure")
                    .1;
                let small = shrink(t, |s| !check_one(config.suite, psi, s).1.is_empty());
                Failure {
                    measure: name,
                    message,
                    table: small,
                }
            })
        })
        .collect();
    let mut notes = Vec::new();
    if config.suite == Suite::Constructions {
        let count = config.samples.max(100);
        let graphs = random_graphs(config.seed, count);
        for g in &graphs {
            checks += 1;
            let cut = g.multicolored(&two_color(g));
            if 2 * cut < g.edges().len() {
                failures.push(Failure {
                    measure: "graph".into(),
                    message: format!("cut {cut} of {} edges", g.edges().len()),
                    table: DecisionTable::empty(2, Vec::new()).expect("empty table"),
                });
            }
        }
        notes.push(format!("{count} random graphs colored"));
    }
    failures.sort_by(|a, b| {
        (a.table.canonical_key(), &a.measure, &a.message)
            .cmp(&(b.table.canonical_key(), &b.measure, &b.message))
    });
    Ok(VerifyReport {
        suite: config.suite,
        checks,
        tables: tables.len(),
        failures,
        notes,
    })
}
