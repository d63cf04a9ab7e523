//! Empirical growth functions over finitely generated closed classes.

use crate::closure::{ClassEnumeration, ClosureMember, ClosureSummary, Limits};
use crate::construct::{fig5_family, single_column_generators, Phi};
use crate::error::{Error, Result};
use crate::fixtures::identity_table;
use crate::measure::{Axiom, ComplexityMeasure};
use crate::solver::{psi_d, psi_s, s_table, theta};
use crate::table::{Attribute, DecisionTable};
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// `H_D(n)`: the largest element of `D` not exceeding `n`, or 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFunction {
    d: Vec<u64>,
}

impl StepFunction {
    pub fn new(d: Vec<u64>) -> Result<Self> {
        if d.is_empty() || d.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotApplicable(
                "step points must be nonempty and strictly increasing".into(),
            ));
        }
        Ok(StepFunction { d })
    }

    pub fn eval(&self, n: u64) -> u64 {
        self.d.iter().rev().find(|&&x| x <= n).copied().unwrap_or(0)
    }
}

pub fn h_step(d: &StepFunction, n: u64) -> u64 {
    d.eval(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GrowthFn {
    /// max `ψ^d` subject to `W_ψ ≤ n`
    FW,
    /// max `ψ^d` subject to `Θ_ψ ≤ n`
    FTheta,
    /// max `ψ^d` subject to `ψ^s ≤ n`
    F,
    /// max `ψ^s` subject to `W_ψ ≤ n`
    G,
}

impl fmt::Display for GrowthFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthFn::FW => "FW",
            GrowthFn::FTheta => "FTheta",
            GrowthFn::F => "F",
            GrowthFn::G => "G",
        })
    }
}

impl FromStr for GrowthFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "FW" => Ok(GrowthFn::FW),
            "FTheta" => Ok(GrowthFn::FTheta),
            "F" => Ok(GrowthFn::F),
            "G" => Ok(GrowthFn::G),
            _ => Err(Error::NotApplicable(format!("unknown growth function {s}"))),
        }
    }
}

impl GrowthFn {
    /// The filter bounds the number of columns when the measure is bounded.
    fn bounds_width(self) -> bool {
        matches!(self, GrowthFn::FW | GrowthFn::G)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthPoint {
    pub n: u64,
    pub value: u64,
    /// Every class member passing the filter was enumerated, so `value` is
    /// exact; otherwise it is a lower bound.
    pub exhausted: bool,
    /// Not exhausted, and the maximum came from the widest layer reached.
    pub possibly_undefined: bool,
}

#[derive(Clone, Debug)]
pub struct GrowthReport {
    pub function: GrowthFn,
    pub generator: String,
    pub measure: String,
    pub limits: Limits,
    pub summary: ClosureSummary,
    pub points: Vec<GrowthPoint>,
}

impl GrowthReport {
    pub fn values(&self) -> Vec<u64> {
        self.points.iter().map(|p| p.value).collect()
    }

    pub fn all_exhausted(&self) -> bool {
        self.points.iter().all(|p| p.exhausted)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value,exhausted\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{}\n", p.n, p.value, p.exhausted));
        }
        out
    }
}

impl fmt::Display for GrowthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "function  {}", self.function)?;
        writeln!(f, "generator {}", self.generator)?;
        writeln!(f, "measure   {}", self.measure)?;
        writeln!(
            f,
            "members   {} (truncated={} skipped_rows={})",
            self.summary.emitted, self.summary.truncated, self.summary.skipped_rows
        )?;
        writeln!(f, "{:>4} {:>8}  exhausted", "n", "value")?;
        for p in &self.points {
            let mark = if p.possibly_undefined {
                "  possibly-undefined"
            } else {
                ""
            };
            writeln!(f, "{:>4} {:>8}  {}{mark}", p.n, p.value, p.exhausted)?;
        }
        Ok(())
    }
}

fn pool(generators: &[DecisionTable]) -> Vec<Attribute> {
    let set: BTreeSet<Attribute> = generators
        .iter()
        .flat_map(|g| g.attributes().iter().copied())
        .collect();
    set.into_iter().collect()
}

/// Refuses measures that are not bounded (`ψ(α) ≥ |α|`). Custom measures
/// are checked on words over the generators' attributes.
pub fn require_bounded(psi: &ComplexityMeasure, generators: &[DecisionTable]) -> Result<()> {
    let bounded = match psi.is_bounded() {
        Some(b) => b,
        None => {
            let pool = pool(generators);
            let len = pool.len().clamp(1, 4);
            psi.check_axioms(&pool, len).holds(Axiom::Bounded)
        }
    };
    if bounded {
        Ok(())
    } else {
        Err(Error::UnboundedMeasure(psi.to_string()))
    }
}

/// Parameters of one member needed by the growth functions.
#[derive(Clone, Copy, Debug)]
struct MemberValues {
    width: usize,
    w_psi: u64,
    theta: u64,
    psi_s: u64,
    psi_d: u64,
}

fn member_values(psi: &ComplexityMeasure, t: &DecisionTable, f: GrowthFn) -> Result<MemberValues> {
    let (w_psi, _) = psi.table_weights(t);
    let theta = match f {
        GrowthFn::FTheta => theta(psi, t)?.0,
        _ => 0,
    };
    let psi_s = match f {
        GrowthFn::F | GrowthFn::G => psi_s(psi, t)?.0,
        _ => 0,
    };
    let psi_d = match f {
        GrowthFn::G => 0,
        _ => psi_d(psi, t)?.0,
    };
    Ok(MemberValues {
        width: t.num_columns(),
        w_psi,
        theta,
        psi_s,
        psi_d,
    })
}

fn enumerate(generators: &[DecisionTable], limits: Limits) -> (Vec<ClosureMember>, ClosureSummary) {
    ClassEnumeration::new(generators.to_vec(), limits).collect()
}

/// Computes `fn(0..=max_n)` over the closure of `generators`.
pub fn growth(
    function: GrowthFn,
    generators: &[DecisionTable],
    generator_name: &str,
    psi: &ComplexityMeasure,
    max_n: u64,
    limits: Limits,
) -> Result<GrowthReport> {
    require_bounded(psi, generators)?;
    let mut limits_used = limits;
    if function.bounds_width() {
        // W_ψ ≤ n forces at most n columns for a bounded measure
        limits_used.max_columns = limits.max_columns.min(max_n as usize);
    }
    let (members, summary) = enumerate(generators, limits_used);
    let values: Vec<MemberValues> = members
        .par_iter()
        .map(|m| member_values(psi, &m.table, function))
        .collect::<Result<_>>()?;
    let widest = values.iter().map(|v| v.width).max().unwrap_or(0);
    let complete = !summary.truncated
        && !summary.skipped_rows
        && (function.bounds_width() || !summary.skipped_columns);
    let points = (0..=max_n)
        .map(|n| {
            let (filter, objective): (fn(&MemberValues) -> u64, fn(&MemberValues) -> u64) =
                match function {
                    GrowthFn::FW => (|v| v.w_psi, |v| v.psi_d),
                    GrowthFn::FTheta => (|v| v.theta, |v| v.psi_d),
                    GrowthFn::F => (|v| v.psi_s, |v| v.psi_d),
                    GrowthFn::G => (|v| v.w_psi, |v| v.psi_s),
                };
            let best = values
                .iter()
                .filter(|v| filter(v) <= n)
                .max_by_key(|v| (objective(v), v.width));
            let value = best.map_or(0, objective);
            let growing = best.is_some_and(|v| v.width == widest && value > 0);
            GrowthPoint {
                n,
                value,
                exhausted: complete,
                possibly_undefined: function == GrowthFn::F && !complete && growing,
            }
        })
        .collect();
    Ok(GrowthReport {
        function,
        generator: generator_name.to_string(),
        measure: psi.to_string(),
        limits: limits_used,
        summary,
        points,
    })
}

/// Members of `A_ψ(n)` (all columns weigh at most `n`) and the largest `S`
/// (for `h`) and `N` among them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassStats {
    pub members: usize,
    pub s: u64,
    pub n: u64,
    pub exhausted: bool,
}

pub fn class_stats(
    generators: &[DecisionTable],
    psi: &ComplexityMeasure,
    n: u64,
    limits: Limits,
) -> Result<ClassStats> {
    require_bounded(psi, generators)?;
    let (members, summary) = enumerate(generators, limits);
    let h = ComplexityMeasure::Depth;
    let passing: Vec<&DecisionTable> = members
        .iter()
        .map(|m| &m.table)
        .filter(|t| psi.table_weights(t).1 <= n)
        .collect();
    let s = passing
        .par_iter()
        .map(|t| s_table(&h, t))
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))?;
    Ok(ClassStats {
        members: passing.len(),
        s,
        n: passing.iter().map(|t| t.num_rows() as u64).max().unwrap_or(0),
        exhausted: summary.exhausted(),
    })
}

/// A generator family with the measure it comes with, if any.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub generators: Vec<DecisionTable>,
    pub measure: Option<ComplexityMeasure>,
    /// Step points when the family realizes `H_D`.
    pub steps: Option<StepFunction>,
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::NotApplicable(format!("bad number `{x}` in `{s}`")))
        })
        .collect()
}

/// Built-in families:
/// * `idN`: identity tables with 1..=N columns,
/// * `thm3:a,b,…`: single-column generators with their measure,
/// * `fig5:p1,p2,…`: `T_1, …` for `φ(1)=p1, φ(2)=p2, …` with its measure.
pub fn builtin(spec: &str) -> Result<Scenario> {
    let bad = || Error::NotApplicable(format!("unknown builtin `{spec}`"));
    if let Some(m) = spec.strip_prefix("id") {
        let m: usize = m.parse().map_err(|_| bad())?;
        return Ok(Scenario {
            name: format!("builtin:{spec}"),
            generators: (1..=m).map(identity_table).collect(),
            measure: None,
            steps: None,
        });
    }
    if let Some(list) = spec.strip_prefix("thm3:") {
        let d = parse_list(list)?;
        let d32: Vec<u32> = d
            .iter()
            .map(|&x| u32::try_from(x).map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let (generators, psi) = single_column_generators(&d32)?;
        let mut sorted = d;
        sorted.sort_unstable();
        sorted.dedup();
        return Ok(Scenario {
            name: format!("builtin:{spec}"),
            generators,
            measure: Some(psi),
            steps: Some(StepFunction::new(sorted)?),
        });
    }
    if let Some(list) = spec.strip_prefix("fig5:") {
        let mut values = vec![0];
        values.extend(parse_list(list)?);
        let phi = Phi::new(values)?;
        let (family, psi) = fig5_family(&phi)?;
        return Ok(Scenario {
            name: format!("builtin:{spec}"),
            generators: family.into_iter().map(|f| f.table).collect(),
            measure: Some(psi),
            steps: None,
        });
    }
    Err(bad())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Weights;

    #[test]
    fn step_examples() {
        let d = StepFunction::new(vec![2, 5, 9]).unwrap();
        assert_eq!(h_step(&d, 0), 0);
        assert_eq!(h_step(&d, 3), 2);
        assert_eq!(h_step(&d, 5), 5);
        assert_eq!(h_step(&d, 100), 9);
        assert!(StepFunction::new(vec![]).is_err());
        assert!(StepFunction::new(vec![3, 3]).is_err());
    }

    #[test]
    fn thm3_prefix() {
        let sc = builtin("thm3:2,5").unwrap();
        let psi = sc.measure.unwrap();
        let r = growth(GrowthFn::FW, &sc.generators, &sc.name, &psi, 6, Limits::default()).unwrap();
        assert_eq!(r.values(), vec![0, 0, 2, 2, 2, 5, 5]);
        assert!(r.all_exhausted());
    }

    #[test]
    fn identity_prefix() {
        let sc = builtin("id4").unwrap();
        let h = ComplexityMeasure::Depth;
        for f in [GrowthFn::FW, GrowthFn::G] {
            let r = growth(f, &sc.generators, &sc.name, &h, 4, Limits::default()).unwrap();
            assert_eq!(r.values(), vec![0, 1, 2, 3, 4], "{f}");
            assert!(r.all_exhausted());
        }
    }

    #[test]
    fn unbounded_measure_refused() {
        let sc = builtin("id2").unwrap();
        let maxw = ComplexityMeasure::max_weight(Weights::uniform(1));
        assert!(matches!(
            growth(GrowthFn::FW, &sc.generators, "", &maxw, 2, Limits::default()),
            Err(Error::UnboundedMeasure(_))
        ));
        let short = ComplexityMeasure::custom("half", |w| w.len().div_ceil(2) as u64);
        assert!(matches!(
            growth(GrowthFn::G, &sc.generators, "", &short, 2, Limits::default()),
            Err(Error::UnboundedMeasure(_))
        ));
    }

    #[test]
    fn truncation_is_reported() {
        let sc = builtin("id3").unwrap();
        let limits = Limits {
            max_tables: 5,
            ..Limits::default()
        };
        let r = growth(
            GrowthFn::F,
            &sc.generators,
            &sc.name,
            &ComplexityMeasure::Depth,
            2,
            limits,
        )
        .unwrap();
        assert!(!r.all_exhausted());
        assert!(r.summary.truncated);
    }

    #[test]
    fn class_stats_examples() {
        let sc = builtin("thm3:2,5").unwrap();
        let psi = sc.measure.unwrap();
        let one = class_stats(&sc.generators, &psi, 1, Limits::default()).unwrap();
        assert_eq!((one.members, one.s, one.n), (1, 0, 0));
        let two = class_stats(&sc.generators, &psi, 2, Limits::default()).unwrap();
        assert_eq!((two.s, two.n), (1, 2));
        let id = builtin("id3").unwrap();
        let st = class_stats(&id.generators, &ComplexityMeasure::Depth, 1, Limits::default())
            .unwrap();
        assert_eq!((st.n, st.s), (4, 3));
        assert!(st.exhausted);
    }

    #[test]
    fn csv_format() {
        let sc = builtin("thm3:2").unwrap();
        let psi = sc.measure.unwrap();
        let r = growth(GrowthFn::FTheta, &sc.generators, &sc.name, &psi, 2, Limits::default())
            .unwrap();
        assert_eq!(r.to_csv(), "n,value,exhausted\n0,0,true\n1,0,true\n2,2,true\n");
    }
}
