//! Named tables and trees that recur across tests, examples and the CLI.

use crate::table::{Attribute, DecisionTable};
use crate::tree::{DecisionTree, TreeNode};

/// The six-row table over `f2 f4 f3` used as the running example.
pub fn fig1() -> DecisionTable {
    DecisionTable::new(
        2,
        vec![Attribute(2), Attribute(4), Attribute(3)],
        vec![
            (vec![1, 1, 1], 0),
            (vec![0, 1, 1], 0),
            (vec![1, 1, 0], 1),
            (vec![0, 0, 1], 1),
            (vec![1, 0, 0], 1),
            (vec![0, 0, 0], 1),
        ],
    )
    .expect("valid table")
}

/// `J(OR, I({f4}, fig1))`.
pub fn fig2() -> DecisionTable {
    DecisionTable::new(
        2,
        vec![Attribute(2), Attribute(3)],
        vec![
            (vec![1, 1], 1),
            (vec![0, 1], 1),
            (vec![1, 0], 1),
            (vec![0, 0], 0),
        ],
    )
    .expect("valid table")
}

/// Deterministic tree for [`fig1`]: query `f4`, and on 1 query `f3`.
pub fn fig3_tree() -> DecisionTree {
    DecisionTree::new(
        2,
        vec![TreeNode::query(
            Attribute(4),
            vec![
                (0, TreeNode::Leaf(1)),
                (
                    1,
                    TreeNode::query(
                        Attribute(3),
                        vec![(0, TreeNode::Leaf(1)), (1, TreeNode::Leaf(0))],
                    ),
                ),
            ],
        )],
    )
    .expect("valid tree")
}

/// Strongly nondeterministic tree for [`fig1`]: rules `f4=0` and `f3=0`.
pub fn fig4_tree() -> DecisionTree {
    DecisionTree::new(
        2,
        vec![
            TreeNode::query(Attribute(4), vec![(0, TreeNode::Leaf(1))]),
            TreeNode::query(Attribute(3), vec![(0, TreeNode::Leaf(1))]),
        ],
    )
    .expect("valid tree")
}

/// Table with columns `f0..f(m-1)`: the zero row with decision 0 and the
/// `m` unit rows with decision 1.
pub fn identity_table(m: usize) -> DecisionTable {
    let columns = (0..m as u32).map(Attribute).collect();
    let mut rows = vec![(vec![0; m], 0)];
    for i in 0..m {
        let mut v = vec![0; m];
        v[i] = 1;
        rows.push((v, 1));
    }
    DecisionTable::new(2, columns, rows).expect("valid table")
}

/// All of `E_k^cols` as rows over `f0..f(cols-1)`, decisions from `decide`.
pub fn full_cube(k: u32, cols: usize, decide: impl Fn(&[u32]) -> u8) -> DecisionTable {
    let columns = (0..cols as u32).map(Attribute).collect();
    let rows = all_tuples(k, cols)
        .into_iter()
        .map(|v| {
            let d = decide(&v) as u32;
            (v, d)
        })
        .collect();
    DecisionTable::new(k, columns, rows).expect("valid table")
}

/// `E_k^n` in lexicographic order.
pub fn all_tuples(k: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..k).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}
