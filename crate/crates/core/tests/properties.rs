//! Structural invariants over random small tables, with naive subset oracles
//! for the search-based parameters.

use closed_tables::construct::{
    fig5_table, threshold_table, two_color, BoolFn, ConflictGraph, Phi, ThresholdSystem,
};
use closed_tables::format::{parse_table, render_table};
use closed_tables::harness::suite_measures;
use closed_tables::solver::is_test;
use closed_tables::{
    check_table, enumerate_closure, m_tuple, psi_d, psi_d_bruteforce, psi_s, relabel,
    remove_columns, s_table, theta, Attribute, ComplexityMeasure, DecisionTable, Limits,
    Relabeling, Weights,
};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn row_set(t: &DecisionTable) -> BTreeSet<Vec<u32>> {
    t.rows().iter().map(|r| r.values.clone()).collect()
}

/// Tables over `k ∈ {2,3}` with up to `max_cols` distinct attributes from
/// `f0..f5` and up to `max_rows` distinct rows.
fn table(max_cols: usize, max_rows: usize) -> impl Strategy<Value = DecisionTable> {
    (2u32..=3, 0..=max_cols)
        .prop_flat_map(move |(k, cols)| {
            let space = (k as usize).pow(cols as u32);
            (
                Just(k),
                proptest::sample::subsequence((0u32..6).collect::<Vec<_>>(), cols),
                proptest::collection::btree_set(0..space, 0..=if cols == 0 { 0 } else { max_rows.min(space) }),
                proptest::collection::vec(0u32..=1, max_rows),
            )
        })
        .prop_map(|(k, attrs, cells, decisions)| {
            let cols = attrs.len();
            let rows = cells
                .iter()
                .zip(decisions)
                .map(|(&c, d)| {
                    let mut v = vec![0; cols];
                    let mut c = c as u32;
                    for x in v.iter_mut().rev() {
                        *x = c % k;
                        c /= k;
                    }
                    (v, d)
                })
                .collect();
            DecisionTable::new(k, attrs.into_iter().map(Attribute).collect(), rows).unwrap()
        })
}

fn measures() -> Vec<ComplexityMeasure> {
    suite_measures().into_iter().map(|(_, m)| m).collect()
}

fn subsets(t: &DecisionTable) -> Vec<Vec<Attribute>> {
    let cols = t.columns();
    (0u32..1 << cols.len())
        .map(|m| {
            (0..cols.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| cols[i])
                .collect()
        })
        .collect()
}

fn agree(t: &DecisionTable, a: &[u32], b: &[u32], attrs: &[Attribute]) -> bool {
    attrs.iter().all(|&x| {
        let p = t.column_index(x).unwrap();
        a[p] == b[p]
    })
}

fn oracle_theta(psi: &ComplexityMeasure, t: &DecisionTable) -> u64 {
    subsets(t)
        .iter()
        .filter(|s| {
            t.rows().iter().all(|r| {
                t.rows()
                    .iter()
                    .all(|q| r.decision == q.decision || !agree(t, &r.values, &q.values, s))
            })
        })
        .map(|s| psi.set_cost(s))
        .min()
        .unwrap_or(0)
}

fn oracle_s(psi: &ComplexityMeasure, t: &DecisionTable) -> u64 {
    t.rows()
        .iter()
        .map(|r| {
            subsets(t)
                .iter()
                .filter(|s| {
                    t.rows()
                        .iter()
                        .all(|q| q.values == r.values || !agree(t, &r.values, &q.values, s))
                })
                .map(|s| psi.set_cost(s))
                .min()
                .unwrap()
        })
        .max()
        .unwrap_or(0)
}

fn oracle_psi_s(psi: &ComplexityMeasure, t: &DecisionTable) -> u64 {
    t.rows()
        .iter()
        .filter(|r| r.decision == 1)
        .map(|r| {
            subsets(t)
                .iter()
                .filter(|s| {
                    t.rows()
                        .iter()
                        .all(|q| q.decision == 1 || !agree(t, &r.values, &q.values, s))
                })
                .map(|s| psi.set_cost(s))
                .min()
                .unwrap()
        })
        .max()
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_format_round_trips(t in table(4, 8)) {
        prop_assert_eq!(parse_table(&render_table(&t)).unwrap(), t);
    }

    #[test]
    fn key_ignores_row_order(t in table(4, 8), rot in 0usize..8) {
        let mut rows: Vec<(Vec<u32>, u32)> = t
            .rows()
            .iter()
            .rev()
            .map(|r| (r.values.clone(), u32::from(r.decision)))
            .collect();
        let n = rows.len();
        rows.rotate_left(rot % n.max(1));
        let moved = DecisionTable::new(t.k(), t.columns().to_vec(), rows).unwrap();
        prop_assert_eq!(moved.canonical_key(), t.canonical_key());
    }

    #[test]
    fn key_separates_decisions(t in table(4, 8), at in 0usize..8) {
        prop_assume!(!t.is_empty());
        let mut d: Vec<u8> = t.rows().iter().map(|r| r.decision).collect();
        let i = at % d.len();
        d[i] = 1 - d[i];
        prop_assert_ne!(t.with_decisions(&d).canonical_key(), t.canonical_key());
    }

    #[test]
    fn removal_composes(t in table(4, 8), a in 0u32..6, b in 0u32..6) {
        let (da, db) = (vec![Attribute(a)], vec![Attribute(b)]);
        let both = remove_columns(&[Attribute(a), Attribute(b)], &t);
        let step = remove_columns(&da, &t).and_then(|x| remove_columns(&db, &x));
        match (both, step) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x.canonical_key(), y.canonical_key()),
            (x, y) => prop_assert!(x.is_err() && y.is_err() || a == b),
        }
    }

    #[test]
    fn removal_shrinks(t in table(4, 8), pick in 0u32..16) {
        let removed: Vec<Attribute> = t
            .columns()
            .iter()
            .enumerate()
            .filter(|(i, _)| pick >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        let r = remove_columns(&removed, &t).unwrap();
        prop_assert!(r.num_rows() <= t.num_rows());
        if !r.is_empty() {
            prop_assert_eq!(r.num_columns(), t.num_columns() - removed.len());
        }
    }

    #[test]
    fn closure_ignores_generator_decisions(t in table(3, 4)) {
        let flipped = t.with_decisions(&t.rows().iter().map(|r| 1 - r.decision).collect::<Vec<_>>());
        let keys = |g: DecisionTable| -> BTreeSet<String> {
            enumerate_closure(&[g], Limits::default())
                .0
                .iter()
                .map(|m| m.key.to_string())
                .collect()
        };
        prop_assert_eq!(keys(t), keys(flipped));
    }

    #[test]
    fn search_parameters_match_oracles(t in table(4, 8)) {
        for psi in measures() {
            let (v, attrs) = theta(&psi, &t).unwrap();
            prop_assert_eq!(v, oracle_theta(&psi, &t));
            prop_assert!(is_test(&t, &attrs));
            prop_assert_eq!(psi.set_cost(&attrs), v);
            prop_assert_eq!(s_table(&psi, &t).unwrap(), oracle_s(&psi, &t));
            prop_assert_eq!(psi_s(&psi, &t).unwrap().0, oracle_psi_s(&psi, &t));
        }
    }

    #[test]
    fn dynamic_program_matches_brute_force(t in table(3, 8)) {
        for psi in measures() {
            prop_assert_eq!(psi_d(&psi, &t).unwrap().0, psi_d_bruteforce(&psi, &t).unwrap());
        }
        let mixed = ComplexityMeasure::SumOf(measures());
        prop_assert_eq!(psi_d(&mixed, &t).unwrap().0, psi_d_bruteforce(&mixed, &t).unwrap());
    }

    #[test]
    fn witness_trees_are_valid(t in table(4, 8)) {
        for psi in measures() {
            let (d, det) = psi_d(&psi, &t).unwrap();
            if let Some(tree) = det {
                prop_assert!(tree.validate_deterministic(&t).unwrap().is_valid());
                prop_assert_eq!(tree.cost(&psi), d);
            }
            let (s, snd) = psi_s(&psi, &t).unwrap();
            if let Some(tree) = snd {
                prop_assert!(tree.validate_strongly_nondeterministic(&t).unwrap().is_valid());
                prop_assert_eq!(tree.cost(&psi), s);
            }
        }
    }

    #[test]
    fn bounds_hold(t in table(3, 6)) {
        for psi in measures() {
            for c in check_table(&psi, &t).unwrap() {
                prop_assert!(c.holds, "{}", c);
            }
        }
    }

    #[test]
    fn weighted_measures_satisfy_axioms(ws in proptest::collection::vec(1u64..6, 4)) {
        let pool: Vec<Attribute> = (0..4).map(Attribute).collect();
        let pairs: Vec<(u32, u64)> = ws.iter().enumerate().map(|(i, &x)| (i as u32, x)).collect();
        let w = Weights::from_pairs(&pairs);
        for psi in [
            ComplexityMeasure::additive(w.clone()),
            ComplexityMeasure::max_weight(w.clone()),
            ComplexityMeasure::SumOf(vec![ComplexityMeasure::Depth, ComplexityMeasure::max_weight(w)]),
        ] {
            prop_assert!(psi.check_axioms(&pool, 3).is_measure());
        }
    }

    #[test]
    fn two_coloring_cuts_half(n in 1usize..9, bits in proptest::collection::vec(any::<bool>(), 28)) {
        let mut edges = Vec::new();
        let mut it = bits.into_iter();
        for a in 0..n {
            for b in a + 1..n {
                if it.next().unwrap_or(false) {
                    edges.push((a, b));
                }
            }
        }
        let g = ConflictGraph::new((0..n as u32).map(|i| vec![i]).collect(), edges).unwrap();
        let c = two_color(&g);
        prop_assert!(2 * g.multicolored(&c) >= g.edges().len());
    }

    #[test]
    fn threshold_tables_have_one_row_per_cut(start in 1u32..5, gaps in proptest::collection::vec(1u32..4, 0..6)) {
        let mut at = vec![start];
        for g in gaps {
            at.push(at.last().unwrap() + g);
        }
        let n = at.len();
        let t = threshold_table(&ThresholdSystem::new(at).unwrap(), |v| BoolFn::Or.eval(v));
        prop_assert_eq!(t.num_rows(), n + 1);
        prop_assert_eq!(t.num_columns(), n);
    }

    #[test]
    fn restrictions_compose(t in table(4, 8), fa in proptest::collection::vec((0usize..4, 0u32..3), 0..3), fb in proptest::collection::vec((0usize..4, 0u32..3), 0..3)) {
        prop_assume!(t.num_columns() > 0);
        let fix = |f: &[(usize, u32)]| -> Vec<(Attribute, u32)> {
            f.iter().map(|&(p, v)| (t.columns()[p % t.num_columns()], v % t.k())).collect()
        };
        let (a, b) = (fix(&fa), fix(&fb));
        let step = t.restrict(&a).unwrap().restrict(&b).unwrap();
        let both = t.restrict(&[a.clone(), b].concat()).unwrap();
        prop_assert_eq!(row_set(&step), row_set(&both));
        let once = t.restrict(&a).unwrap();
        prop_assert!(once.num_rows() <= t.num_rows());
        let order: Vec<usize> = once.rows().iter().map(|r| t.row_index(&r.values).unwrap()).collect();
        prop_assert!(order.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn relabel_keeps_shape_and_removal_ignores_labels(t in table(4, 8), bits in any::<u8>(), pick in 0u32..16) {
        let nu = Relabeling::from_fn(&t, |r| (r.iter().sum::<u32>() + u32::from(bits)) as u8 & 1);
        let j = relabel(&nu, &t).unwrap();
        prop_assert_eq!((j.num_rows(), j.num_columns()), (t.num_rows(), t.num_columns()));
        let removed: Vec<Attribute> = t
            .columns()
            .iter()
            .enumerate()
            .filter(|(i, _)| pick >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        prop_assert_eq!(
            row_set(&remove_columns(&removed, &j).unwrap()),
            row_set(&remove_columns(&removed, &t).unwrap())
        );
        prop_assert!(remove_columns(t.columns(), &t).unwrap().is_empty());
    }

    #[test]
    fn closure_is_idempotent(t in table(2, 4)) {
        let (members, summary) = enumerate_closure(&[t], Limits::default());
        prop_assert!(summary.exhausted());
        let keys: BTreeSet<String> = members.iter().map(|m| m.key.to_string()).collect();
        let tables: Vec<DecisionTable> = members.into_iter().map(|m| m.table).collect();
        let again: BTreeSet<String> = enumerate_closure(&tables, Limits::default())
            .0
            .iter()
            .map(|m| m.key.to_string())
            .collect();
        prop_assert_eq!(again, keys);
    }

    #[test]
    fn combined_measures_satisfy_axioms(ws in proptest::collection::vec(1u64..6, 4), vs in proptest::collection::vec(1u64..6, 4)) {
        let pool: Vec<Attribute> = (0..4).map(Attribute).collect();
        let pairs = |x: &[u64]| -> Vec<(u32, u64)> { x.iter().enumerate().map(|(i, &w)| (i as u32, w)).collect() };
        let a = ComplexityMeasure::additive(Weights::from_pairs(&pairs(&ws)));
        let b = ComplexityMeasure::max_weight(Weights::from_pairs(&pairs(&vs)));
        for psi in [
            ComplexityMeasure::SumOf(vec![a.clone(), b.clone()]),
            ComplexityMeasure::MaxOf(vec![a, b]),
        ] {
            prop_assert!(psi.check_axioms(&pool, 4).is_measure());
        }
    }

    #[test]
    fn fig5_zero_tuple_needs_phi(steps in proptest::collection::vec(1u64..4, 1..5)) {
        let mut values = vec![0u64];
        for (i, s) in steps.iter().enumerate() {
            let n = i as u64 + 1;
            let prev = *values.last().unwrap();
            values.push((prev + s).max(n));
        }
        let phi = Phi::new(values.clone()).unwrap();
        for n in 1..=phi.max_n() {
            let f = fig5_table(&phi, n).unwrap();
            let psi = ComplexityMeasure::additive(Weights::from_pairs(
                &f.weights.iter().map(|&(a, w)| (a.0, w)).collect::<Vec<_>>(),
            ));
            let zero = vec![0; f.table.num_columns()];
            prop_assert_eq!(m_tuple(&psi, &f.table, &zero).unwrap().0, values[n as usize]);
            prop_assert_eq!(psi_s(&psi, &f.table).unwrap().0, n);
            prop_assert_eq!(psi_d(&psi, &f.table).unwrap().0, values[n as usize]);
        }
    }
}

#[test]
fn folding_extend_matches_cost() {
    let pool: Vec<Attribute> = (0..4).map(Attribute).collect();
    let mut all = measures();
    all.push(ComplexityMeasure::SumOf(measures()));
    all.push(ComplexityMeasure::MaxOf(measures()));
    let mut words: Vec<Vec<Attribute>> = vec![Vec::new()];
    let mut frontier = words.clone();
    for _ in 0..5 {
        frontier = frontier
            .iter()
            .flat_map(|w| pool.iter().map(move |&a| [w.clone(), vec![a]].concat()))
            .collect();
        words.extend(frontier.iter().cloned());
    }
    for psi in &all {
        for w in &words {
            let mut st = psi.initial_state().unwrap();
            for &a in w {
                st = psi.extend(&st, a).unwrap();
            }
            assert_eq!(psi.value(&st), psi.cost(w), "{psi} on {w:?}");
        }
        if psi.is_depth() {
            assert!(words.iter().all(|w| psi.cost(w) == w.len() as u64));
        }
    }
}

#[test]
fn builtin_measures_satisfy_axioms_exhaustively() {
    let pool: Vec<Attribute> = (0..4).map(Attribute).collect();
    for psi in measures() {
        assert!(psi.check_axioms(&pool, 4).is_measure(), "{psi}");
    }
}
