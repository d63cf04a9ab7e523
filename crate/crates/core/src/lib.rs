//! Exact computation for decision tables with 0-1 decisions from closed
//! classes: closure operations, complexity measures, decision trees, table
//! parameters with witnesses, constructive procedures and growth exploration.

pub mod bounds;
pub mod closure;
pub mod construct;
pub mod error;
pub mod explore;
pub mod fixtures;
pub mod format;
pub mod harness;
pub mod measure;
pub mod solver;
pub mod table;
pub mod tree;

pub use closure::{
    enumerate_closure, is_critical, relabel, remove_columns, ClassEnumeration, ClosureMember,
    ClosureSummary, CriticalCheck, Limits, Relabeling,
};
pub use error::{Error, Result};
pub use measure::{Axiom, AxiomReport, ComplexityMeasure, CostState, Weights};
pub use table::{Attribute, CanonicalKey, DecisionTable, Row};
pub use tree::{CompletePath, DecisionTree, TreeNode, Validation, Violation};
pub use bounds::{check_table, Bound, BoundCheck};
pub use solver::{
    full_report, m_table, m_tuple, psi_d, psi_d_bruteforce, psi_s, s_hat, s_row, s_table, theta,
    ParameterReport,
};
