//! Complexity measures on attribute words.
//!
//! A measure maps finite words over the attributes to nonnegative integers
//! and must be positive, commutative, nondecreasing under extension and
//! subadditive under concatenation. It is *bounded* when it never goes
//! below the word length. The built-in families are depth (word length),
//! additive weights, maximum weight, and sums/maxima of other measures.
//! User code can plug in an arbitrary cost function through
//! [`ComplexityMeasure::custom`]; such measures only get brute-force
//! solvers.

use crate::error::{Error, Result};
use crate::table::{Attribute, DecisionTable};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Positive integer weights per attribute with a positive default.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    default: u64,
    overrides: BTreeMap<Attribute, u64>,
}

impl Weights {
    pub fn new(default: u64) -> Result<Self> {
        if default == 0 {
            return Err(Error::NonPositiveWeight);
        }
        Ok(Weights {
            default,
            overrides: BTreeMap::new(),
        })
    }

    pub fn uniform(default: u64) -> Self {
        Self::new(default).expect("weight must be positive")
    }

    pub fn with(mut self, attr: Attribute, weight: u64) -> Self {
        assert!(weight > 0, "weights must be positive");
        self.overrides.insert(attr, weight);
        self
    }

    /// Builds weights from `(index, weight)` pairs with default 1.
    pub fn from_pairs(pairs: &[(u32, u64)]) -> Self {
        pairs
            .iter()
            .fold(Weights::uniform(1), |w, &(i, x)| w.with(Attribute(i), x))
    }

    pub fn get(&self, attr: Attribute) -> u64 {
        self.overrides.get(&attr).copied().unwrap_or(self.default)
    }

    pub fn default_weight(&self) -> u64 {
        self.default
    }

    pub fn overrides(&self) -> impl Iterator<Item = (Attribute, u64)> + '_ {
        self.overrides.iter().map(|(&a, &w)| (a, w))
    }
}

/// A user supplied cost function on words.
#[derive(Clone)]
pub struct CustomMeasure {
    name: String,
    cost: Arc<dyn Fn(&[Attribute]) -> u64 + Send + Sync>,
}

impl fmt::Debug for CustomMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomMeasure({})", self.name)
    }
}

#[derive(Clone, Debug)]
pub enum ComplexityMeasure {
    /// `h`: the length of the word.
    Depth,
    /// Sum of attribute weights.
    Additive(Weights),
    /// Maximum attribute weight.
    MaxWeight(Weights),
    SumOf(Vec<ComplexityMeasure>),
    MaxOf(Vec<ComplexityMeasure>),
    Custom(CustomMeasure),
}

/// How the cost of a path splits between a prefix and a suffix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SuffixCombine {
    Add,
    Max,
}

/// Accumulated cost information for a path prefix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CostState {
    Count(u64),
    Sum(u64),
    Max(u64),
    SumOf(Vec<CostState>),
    MaxOf(Vec<CostState>),
}

impl ComplexityMeasure {
    pub fn depth() -> Self {
        ComplexityMeasure::Depth
    }

    pub fn additive(weights: Weights) -> Self {
        ComplexityMeasure::Additive(weights)
    }

    pub fn max_weight(weights: Weights) -> Self {
        ComplexityMeasure::MaxWeight(weights)
    }

    pub fn custom<F>(name: impl Into<String>, cost: F) -> Self
    where
        F: Fn(&[Attribute]) -> u64 + Send + Sync + 'static,
    {
        ComplexityMeasure::Custom(CustomMeasure {
            name: name.into(),
            cost: Arc::new(cost),
        })
    }

    pub fn is_depth(&self) -> bool {
        matches!(self, ComplexityMeasure::Depth)
    }

    /// Cost of a word; letters may repeat.
    pub fn cost(&self, word: &[Attribute]) -> u64 {
        match self {
            ComplexityMeasure::Depth => word.len() as u64,
            ComplexityMeasure::Additive(w) => word.iter().map(|&a| w.get(a)).sum(),
            ComplexityMeasure::MaxWeight(w) => word.iter().map(|&a| w.get(a)).max().unwrap_or(0),
            ComplexityMeasure::SumOf(children) => children.iter().map(|c| c.cost(word)).sum(),
            ComplexityMeasure::MaxOf(children) => {
                children.iter().map(|c| c.cost(word)).max().unwrap_or(0)
            }
            ComplexityMeasure::Custom(c) => (c.cost)(word),
        }
    }

    /// Cost of an attribute set, each element counted once; 0 for the empty set.
    pub fn set_cost(&self, attrs: &[Attribute]) -> u64 {
        let mut word = attrs.to_vec();
        word.sort_unstable();
        word.dedup();
        self.cost(&word)
    }

    /// Cost of a single attribute.
    pub fn single(&self, attr: Attribute) -> u64 {
        self.cost(&[attr])
    }

    /// `(W_ψ(T), V_ψ(T))`: the cost of all columns and the largest single
    /// column cost. Both are 0 for Λ.
    pub fn table_weights(&self, table: &DecisionTable) -> (u64, u64) {
        let attrs = table.attributes();
        let v = attrs.iter().map(|&a| self.single(a)).max().unwrap_or(0);
        (self.set_cost(attrs), v)
    }

    /// Whether `ψ(α) ≥ |α|` for every word, decided from the structure of
    /// built-in measures. `None` for custom measures.
    pub fn is_bounded(&self) -> Option<bool> {
        match self {
            ComplexityMeasure::Depth | ComplexityMeasure::Additive(_) => Some(true),
            // words can be arbitrarily long while the maximum stays fixed
            ComplexityMeasure::MaxWeight(_) => Some(false),
            ComplexityMeasure::SumOf(children) | ComplexityMeasure::MaxOf(children) => {
                let mut unknown = false;
                for c in children {
                    match c.is_bounded() {
                        Some(true) => return Some(true),
                        Some(false) => {}
                        None => unknown = true,
                    }
                }
                if unknown {
                    None
                } else {
                    Some(false)
                }
            }
            ComplexityMeasure::Custom(_) => None,
        }
    }

    /// Whether path costs can be computed incrementally via [`extend`](Self::extend).
    pub fn is_decomposable(&self) -> bool {
        match self {
            ComplexityMeasure::Custom(_) => false,
            ComplexityMeasure::SumOf(c) | ComplexityMeasure::MaxOf(c) => {
                c.iter().all(|m| m.is_decomposable())
            }
            _ => true,
        }
    }

    /// Whether the best suffix below a node can be chosen without knowing
    /// the prefix above it.
    pub fn is_prefix_suffix_decomposable(&self) -> bool {
        self.suffix_combine().is_some()
    }

    pub(crate) fn suffix_combine(&self) -> Option<SuffixCombine> {
        fn all_sum(m: &ComplexityMeasure) -> bool {
            match m {
                ComplexityMeasure::Depth | ComplexityMeasure::Additive(_) => true,
                ComplexityMeasure::SumOf(c) => c.iter().all(all_sum),
                _ => false,
            }
        }
        fn all_max(m: &ComplexityMeasure) -> bool {
            match m {
                ComplexityMeasure::MaxWeight(_) => true,
                ComplexityMeasure::MaxOf(c) => c.iter().all(all_max),
                _ => false,
            }
        }
        if all_sum(self) {
            Some(SuffixCombine::Add)
        } else if all_max(self) {
            Some(SuffixCombine::Max)
        } else {
            None
        }
    }

    /// State of the empty word.
    pub fn initial_state(&self) -> Result<CostState> {
        Ok(match self {
            ComplexityMeasure::Depth => CostState::Count(0),
            ComplexityMeasure::Additive(_) => CostState::Sum(0),
            ComplexityMeasure::MaxWeight(_) => CostState::Max(0),
            ComplexityMeasure::SumOf(c) => CostState::SumOf(
                c.iter()
                    .map(|m| m.initial_state())
                    .collect::<Result<_>>()?,
            ),
            ComplexityMeasure::MaxOf(c) => CostState::MaxOf(
                c.iter()
                    .map(|m| m.initial_state())
                    .collect::<Result<_>>()?,
            ),
            ComplexityMeasure::Custom(_) => return Err(Error::NotDecomposable),
        })
    }

    /// Appends one letter to the word summarized by `state`.
    pub fn extend(&self, state: &CostState, attr: Attribute) -> Result<CostState> {
        Ok(match (self, state) {
            (ComplexityMeasure::Depth, CostState::Count(n)) => CostState::Count(n + 1),
            (ComplexityMeasure::Additive(w), CostState::Sum(s)) => CostState::Sum(s + w.get(attr)),
            (ComplexityMeasure::MaxWeight(w), CostState::Max(m)) => {
                CostState::Max((*m).max(w.get(attr)))
            }
            (ComplexityMeasure::SumOf(c), CostState::SumOf(s)) => CostState::SumOf(
                c.iter()
                    .zip(s)
                    .map(|(m, s)| m.extend(s, attr))
                    .collect::<Result<_>>()?,
            ),
            (ComplexityMeasure::MaxOf(c), CostState::MaxOf(s)) => CostState::MaxOf(
                c.iter()
                    .zip(s)
                    .map(|(m, s)| m.extend(s, attr))
                    .collect::<Result<_>>()?,
            ),
            _ => return Err(Error::NotDecomposable),
        })
    }

    /// Cost of the word summarized by `state`.
    pub fn value(&self, state: &CostState) -> u64 {
        match state {
            CostState::Count(n) | CostState::Sum(n) | CostState::Max(n) => *n,
            CostState::SumOf(s) => match self {
                ComplexityMeasure::SumOf(c) => c.iter().zip(s).map(|(m, s)| m.value(s)).sum(),
                _ => unreachable!("state does not belong to this measure"),
            },
            CostState::MaxOf(s) => match self {
                ComplexityMeasure::MaxOf(c) => c
                    .iter()
                    .zip(s)
                    .map(|(m, s)| m.value(s))
                    .max()
                    .unwrap_or(0),
                _ => unreachable!("state does not belong to this measure"),
            },
        }
    }

    /// Exhaustively checks the measure axioms and boundedness on all
    /// multisets of at most `max_len` letters drawn from `pool`.
    pub fn check_axioms(&self, pool: &[Attribute], max_len: usize) -> AxiomReport {
        check_axioms(self, pool, max_len)
    }
}

impl fmt::Display for ComplexityMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn weights(f: &mut fmt::Formatter<'_>, w: &Weights) -> fmt::Result {
            write!(f, "default={}", w.default)?;
            for (a, x) in w.overrides() {
                write!(f, ",{a}={x}")?;
            }
            Ok(())
        }
        match self {
            ComplexityMeasure::Depth => f.write_str("depth"),
            ComplexityMeasure::Additive(w) => {
                f.write_str("additive(")?;
                weights(f, w)?;
                f.write_str(")")
            }
            ComplexityMeasure::MaxWeight(w) => {
                f.write_str("maxw(")?;
                weights(f, w)?;
                f.write_str(")")
            }
            ComplexityMeasure::SumOf(c) | ComplexityMeasure::MaxOf(c) => {
                let name = if matches!(self, ComplexityMeasure::SumOf(_)) {
                    "sum"
                } else {
                    "max"
                };
                write!(f, "{name}(")?;
                for (i, m) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{m}")?;
                }
                f.write_str(")")
            }
            ComplexityMeasure::Custom(c) => write!(f, "custom({})", c.name),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Positivity,
    Commutativity,
    Nondecreasing,
    Subadditivity,
    Bounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub word: Vec<Attribute>,
    pub other: Vec<Attribute>,
    pub detail: String,
}

/// Outcome of [`ComplexityMeasure::check_axioms`]: the first violation of
/// each axiom, if any.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn holds(&self, axiom: Axiom) -> bool {
        self.violations.iter().all(|v| v.axiom != axiom)
    }

    /// All four measure axioms hold (boundedness aside).
    pub fn is_measure(&self) -> bool {
        [
            Axiom::Positivity,
            Axiom::Commutativity,
            Axiom::Nondecreasing,
            Axiom::Subadditivity,
        ]
        .iter()
        .all(|&a| self.holds(a))
    }

    pub fn violation(&self, axiom: Axiom) -> Option<&AxiomViolation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

/// All nondecreasing index sequences (multisets) of length `0..=max_len`.
fn multisets(pool_len: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for m in &frontier {
            let start = m.last().copied().unwrap_or(0);
            for i in start..pool_len {
                let mut w: Vec<usize> = m.clone();
                w.push(i);
                next.push(w);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn check_axioms(psi: &ComplexityMeasure, pool: &[Attribute], max_len: usize) -> AxiomReport {
    let mut report = AxiomReport::default();
    let mut record = |axiom: Axiom, word: Vec<Attribute>, other: Vec<Attribute>, detail: String| {
        if report.holds(axiom) {
            report.violations.push(AxiomViolation {
                axiom,
                word,
                other,
                detail,
            });
        }
    };
    let word_of = |idx: &[usize]| -> Vec<Attribute> { idx.iter().map(|&i| pool[i]).collect() };
    let all = multisets(pool.len(), max_len);

    for m in &all {
        let w = word_of(m);
        let c = psi.cost(&w);
        if (c == 0) != w.is_empty() {
            record(Axiom::Positivity, w.clone(), vec![], format!("cost {c}"));
        }
        if c < w.len() as u64 {
            record(
                Axiom::Bounded,
                w.clone(),
                vec![],
                format!("cost {c} < length {}", w.len()),
            );
        }
    }

    // every arrangement of every multiset must cost the same
    let mut seqs = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &seqs {
            if s.len() < max_len {
                for i in 0..pool.len() {
                    let mut t: Vec<usize> = s.clone();
                    t.push(i);
                    next.push(t);
                }
            }
        }
        for s in &next {
            let w = word_of(s);
            let mut sorted = s.clone();
            sorted.sort_unstable();
            let ws = word_of(&sorted);
            let (a, b) = (psi.cost(&w), psi.cost(&ws));
            if a != b {
                record(Axiom::Commutativity, w, ws, format!("{a} != {b}"));
            }
        }
        seqs = next;
    }

    for m in &all {
        for m2 in &all {
            if m.len() + m2.len() > max_len {
                continue;
            }
            let (w1, w2) = (word_of(m), word_of(m2));
            let mut joined = w1.clone();
            joined.extend_from_slice(&w2);
            let (c1, c2, c) = (psi.cost(&w1), psi.cost(&w2), psi.cost(&joined));
            if c < c1 {
                record(
                    Axiom::Nondecreasing,
                    w1.clone(),
                    w2.clone(),
                    format!("cost {c} of extension < {c1}"),
                );
            }
            if c > c1 + c2 {
                record(
                    Axiom::Subadditivity,
                    w1,
                    w2,
                    format!("cost {c} > {c1} + {c2}"),
                );
            }
        }
    }
    report
}
