//! k-decision trees, their complete paths and validation against a table.
//!
//! Text format (one tree per file, whitespace insensitive):
//!
//! ```text
//! (root (f4 (0 (leaf 1)) (1 (f3 (0 (leaf 1)) (1 (leaf 0))))))
//! ```

use crate::error::{Error, Result};
use crate::measure::ComplexityMeasure;
use crate::table::{Attribute, DecisionTable};
use std::collections::BTreeSet;
use std::fmt;

/// A non-root node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeNode {
    Leaf(u8),
    Query {
        attribute: Attribute,
        edges: Vec<(u32, TreeNode)>,
    },
}

impl TreeNode {
    pub fn query(attribute: Attribute, edges: Vec<(u32, TreeNode)>) -> Self {
        TreeNode::Query { attribute, edges }
    }
}

/// A k-decision tree: an unlabeled root whose unlabeled edges lead to
/// terminal (decision) or attribute-labeled nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionTree {
    k: u32,
    root: Vec<TreeNode>,
}

/// Root-to-terminal path. `steps` lists the attribute nodes passed and the
/// value on the edge leaving each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletePath {
    pub steps: Vec<(Attribute, u32)>,
    pub terminal: u8,
}

impl CompletePath {
    /// `F(τ)`.
    pub fn word(&self) -> Vec<Attribute> {
        self.steps.iter().map(|&(a, _)| a).collect()
    }
}

/// A violated clause of the tree definitions, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    RootEdges(usize),
    DuplicateEdgeLabel { attribute: Attribute, value: u32 },
    UnknownAttribute(Attribute),
    UncoveredRow(usize),
    InconsistentPath { path: usize, row: usize },
    TerminalNotOne { path: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RootEdges(n) => write!(f, "{n} edges leave the root, expected 1"),
            Violation::DuplicateEdgeLabel { attribute, value } => {
                write!(f, "node {attribute} has two edges labeled {value}")
            }
            Violation::UnknownAttribute(a) => write!(f, "attribute {a} is not a column"),
            Violation::UncoveredRow(r) => write!(f, "row {r} reaches no complete path"),
            Violation::InconsistentPath { path, row } => {
                write!(f, "path {path} admits row {row} with the wrong decision")
            }
            Violation::TerminalNotOne { path } => write!(f, "path {path} ends in decision 0"),
        }
    }
}

/// Outcome of validating a tree against a table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Validation {
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl DecisionTree {
    pub fn new(k: u32, root: Vec<TreeNode>) -> Result<Self> {
        if k < 2 {
            return Err(Error::BadAlphabet(k));
        }
        if root.is_empty() {
            return Err(Error::InvalidTree("a tree has at least two nodes".into()));
        }
        fn check(node: &TreeNode, k: u32) -> Result<()> {
            match node {
                TreeNode::Leaf(d) if *d > 1 => {
                    Err(Error::InvalidTree(format!("terminal decision {d}")))
                }
                TreeNode::Leaf(_) => Ok(()),
                TreeNode::Query { attribute, edges } => {
                    if edges.is_empty() {
                        return Err(Error::InvalidTree(format!(
                            "node {attribute} has no outgoing edges"
                        )));
                    }
                    for (v, child) in edges {
                        if *v >= k {
                            return Err(Error::InvalidTree(format!(
                                "edge value {v} outside E_{k}"
                            )));
                        }
                        check(child, k)?;
                    }
                    Ok(())
                }
            }
        }
        for n in &root {
            check(n, k)?;
        }
        Ok(DecisionTree { k, root })
    }

    /// Root with a single terminal.
    pub fn terminal(k: u32, decision: u8) -> Self {
        Self::new(k, vec![TreeNode::Leaf(decision)]).expect("valid terminal tree")
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn root_edges(&self) -> &[TreeNode] {
        &self.root
    }

    pub fn complete_paths(&self) -> Vec<CompletePath> {
        fn walk(node: &TreeNode, prefix: &mut Vec<(Attribute, u32)>, out: &mut Vec<CompletePath>) {
            match node {
                TreeNode::Leaf(d) => out.push(CompletePath {
                    steps: prefix.clone(),
                    terminal: *d,
                }),
                TreeNode::Query { attribute, edges } => {
                    for (v, child) in edges {
                        prefix.push((*attribute, *v));
                        walk(child, prefix, out);
                        prefix.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        for n in &self.root {
            walk(n, &mut Vec::new(), &mut out);
        }
        out
    }

    /// `P(Γ)`.
    pub fn attributes(&self) -> BTreeSet<Attribute> {
        self.complete_paths()
            .iter()
            .flat_map(|p| p.word())
            .collect()
    }

    /// `ψ(Γ)`: the largest path cost.
    pub fn cost(&self, psi: &ComplexityMeasure) -> u64 {
        self.complete_paths()
            .iter()
            .map(|p| psi.cost(&p.word()))
            .max()
            .unwrap_or(0)
    }

    fn unknown_attributes(&self, table: &DecisionTable) -> Vec<Violation> {
        self.attributes()
            .into_iter()
            .filter(|&a| table.column_index(a).is_none())
            .map(Violation::UnknownAttribute)
            .collect()
    }

    /// Rows of `T(τ)` for every complete path, as row indices.
    fn path_rows(&self, table: &DecisionTable) -> Vec<(CompletePath, Vec<usize>)> {
        self.complete_paths()
            .into_iter()
            .map(|p| {
                let pos: Vec<(usize, u32)> = p
                    .steps
                    .iter()
                    .map(|&(a, v)| (table.column_index(a).expect("checked"), v))
                    .collect();
                let rows = table
                    .rows()
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| pos.iter().all(|&(c, v)| r.values[c] == v))
                    .map(|(i, _)| i)
                    .collect();
                (p, rows)
            })
            .collect()
    }

    /// Checks the five conditions for a deterministic tree for `table`.
    pub fn validate_deterministic(&self, table: &DecisionTable) -> Result<Validation> {
        if table.is_empty() {
            return Err(Error::NotApplicable(
                "deterministic trees are defined for nonempty tables".into(),
            ));
        }
        let mut violations = Vec::new();
        if self.root.len() != 1 {
            violations.push(Violation::RootEdges(self.root.len()));
        }
        fn sibling_labels(node: &TreeNode, out: &mut Vec<Violation>) {
            if let TreeNode::Query { attribute, edges } = node {
                let mut seen = BTreeSet::new();
                for (v, child) in edges {
                    if !seen.insert(*v) {
                        out.push(Violation::DuplicateEdgeLabel {
                            attribute: *attribute,
                            value: *v,
                        });
                    }
                    sibling_labels(child, out);
                }
            }
        }
        for n in &self.root {
            sibling_labels(n, &mut violations);
        }
        let unknown = self.unknown_attributes(table);
        if !unknown.is_empty() {
            violations.extend(unknown);
            return Ok(Validation { violations });
        }
        let paths = self.path_rows(table);
        let mut covered = vec![false; table.num_rows()];
        for (i, (p, rows)) in paths.iter().enumerate() {
            for &r in rows {
                covered[r] = true;
                if table.rows()[r].decision != p.terminal {
                    violations.push(Violation::InconsistentPath { path: i, row: r });
                    break;
                }
            }
        }
        violations.extend(
            covered
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(r, _)| Violation::UncoveredRow(r)),
        );
        Ok(Validation { violations })
    }

    /// Checks the four conditions for a strongly nondeterministic tree.
    /// Not applicable to constant tables.
    pub fn validate_strongly_nondeterministic(&self, table: &DecisionTable) -> Result<Validation> {
        if table.is_constant() {
            return Err(Error::NotApplicable(
                "strongly nondeterministic trees are defined for nonconstant tables".into(),
            ));
        }
        let mut violations = Vec::new();
        let all_paths = self.complete_paths();
        for (i, p) in all_paths.iter().enumerate() {
            if p.terminal != 1 {
                violations.push(Violation::TerminalNotOne { path: i });
            }
        }
        let unknown = self.unknown_attributes(table);
        if !unknown.is_empty() {
            violations.extend(unknown);
            return Ok(Validation { violations });
        }
        let mut covered = vec![false; table.num_rows()];
        for (i, (_, rows)) in self.path_rows(table).iter().enumerate() {
            if let Some(&bad) = rows.iter().find(|&&r| table.rows()[r].decision != 1) {
                violations.push(Violation::InconsistentPath { path: i, row: bad });
                continue;
            }
            for &r in rows {
                covered[r] = true;
            }
        }
        violations.extend(
            table
                .rows()
                .iter()
                .enumerate()
                .filter(|(r, row)| row.decision == 1 && !covered[*r])
                .map(|(r, _)| Violation::UncoveredRow(r)),
        );
        Ok(Validation { violations })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let tree = p.root()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("trailing input after tree"));
        }
        Ok(tree)
    }
}

impl fmt::Display for DecisionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn node(n: &TreeNode, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match n {
                TreeNode::Leaf(d) => write!(f, "(leaf {d})"),
                TreeNode::Query { attribute, edges } => {
                    write!(f, "({attribute}")?;
                    for (v, child) in edges {
                        write!(f, " ({v} ")?;
                        node(child, f)?;
                        f.write_str(")")?;
                    }
                    f.write_str(")")
                }
            }
        }
        f.write_str("(root")?;
        for n in &self.root {
            f.write_str(" ")?;
            node(n, f)?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = line.split('#').next().unwrap_or("");
        let mut atom = String::new();
        for ch in line.chars() {
            match ch {
                '(' | ')' => {
                    if !atom.is_empty() {
                        out.push((Token::Atom(std::mem::take(&mut atom)), line_no));
                    }
                    out.push((
                        if ch == '(' { Token::Open } else { Token::Close },
                        line_no,
                    ));
                }
                c if c.is_whitespace() => {
                    if !atom.is_empty() {
                        out.push((Token::Atom(std::mem::take(&mut atom)), line_no));
                    }
                }
                c => atom.push(c),
            }
        }
        if !atom.is_empty() {
            out.push((Token::Atom(atom), line_no));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> Error {
        let line = self
            .tokens
            .get(self.pos)
            .or(self.tokens.last())
            .map(|t| t.1)
            .unwrap_or(1);
        Error::Parse {
            line,
            message: message.to_string(),
        }
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.0)
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => {
                self.pos -= 1;
                Err(self.error(&format!("expected {want:?}")))
            }
        }
    }

    fn atom(&mut self) -> Result<String> {
        match self.next() {
            Some(Token::Atom(a)) => Ok(a),
            _ => {
                self.pos -= 1;
                Err(self.error("expected a word"))
            }
        }
    }

    fn root(&mut self) -> Result<DecisionTree> {
        self.expect(Token::Open)?;
        if self.atom()? != "root" {
            self.pos -= 1;
            return Err(self.error("expected `root`"));
        }
        let mut children = Vec::new();
        while self.peek() == Some(&Token::Open) {
            children.push(self.node()?);
        }
        self.expect(Token::Close)?;
        // k is not part of the format; the largest edge value bounds it
        fn max_value(n: &TreeNode) -> u32 {
            match n {
                TreeNode::Leaf(_) => 0,
                TreeNode::Query { edges, .. } => edges
                    .iter()
                    .map(|(v, c)| (*v).max(max_value(c)))
                    .max()
                    .unwrap_or(0),
            }
        }
        let k = children.iter().map(max_value).max().unwrap_or(0).max(1) + 1;
        DecisionTree::new(k, children).map_err(|e| self.error(&e.to_string()))
    }

    fn node(&mut self) -> Result<TreeNode> {
        self.expect(Token::Open)?;
        let head = self.atom()?;
        if head == "leaf" {
            let d = self.atom()?;
            let d = match d.as_str() {
                "0" => 0,
                "1" => 1,
                _ => return Err(self.error("terminal decision must be 0 or 1")),
            };
            self.expect(Token::Close)?;
            return Ok(TreeNode::Leaf(d));
        }
        let attribute = parse_attribute(&head).ok_or_else(|| {
            self.pos -= 1;
            self.error(&format!("expected `leaf` or f<i>, found `{head}`"))
        })?;
        let mut edges = Vec::new();
        while self.peek() == Some(&Token::Open) {
            self.expect(Token::Open)?;
            let v = self.atom()?;
            let v: u32 = v.parse().map_err(|_| self.error("edge value must be an integer"))?;
            let child = self.node()?;
            self.expect(Token::Close)?;
            edges.push((v, child));
        }
        self.expect(Token::Close)?;
        Ok(TreeNode::Query { attribute, edges })
    }
}

/// Parses `f<i>`.
pub fn parse_attribute(s: &str) -> Option<Attribute> {
    let digits = s.strip_prefix('f')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().map(Attribute)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1, fig3_tree, fig4_tree};

    fn words(t: &DecisionTree) -> Vec<String> {
        t.complete_paths()
            .iter()
            .map(|p| {
                p.word()
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect()
    }

    #[test]
    fn complete_paths_examples() {
        assert_eq!(words(&fig4_tree()), vec!["f4", "f3"]);
        assert_eq!(words(&fig3_tree()), vec!["f4", "f4 f3", "f4 f3"]);
        let t = DecisionTree::terminal(2, 0);
        let p = t.complete_paths();
        assert_eq!(p.len(), 1);
        assert!(p[0].word().is_empty());
    }

    #[test]
    fn tree_cost_examples() {
        let h = ComplexityMeasure::Depth;
        assert_eq!(fig3_tree().cost(&h), 2);
        assert_eq!(fig4_tree().cost(&h), 1);
        assert_eq!(DecisionTree::terminal(2, 1).cost(&h), 0);
    }

    #[test]
    fn deterministic_validation() {
        let t0 = fig1();
        assert!(fig3_tree().validate_deterministic(&t0).unwrap().is_valid());
        let v = fig4_tree().validate_deterministic(&t0).unwrap();
        assert!(v.violations.contains(&Violation::RootEdges(2)));
        let zeros = crate::fixtures::full_cube(2, 2, |_| 0);
        assert!(DecisionTree::terminal(2, 0)
            .validate_deterministic(&zeros)
            .unwrap()
            .is_valid());
        assert!(!DecisionTree::terminal(2, 1)
            .validate_deterministic(&zeros)
            .unwrap()
            .is_valid());
    }

    #[test]
    fn deterministic_validation_catches_each_clause() {
        let t0 = fig1();
        // f4 = 1 branch missing: rows 0, 1, 2 uncovered
        let partial = DecisionTree::new(
            2,
            vec![TreeNode::query(Attribute(4), vec![(0, TreeNode::Leaf(1))])],
        )
        .unwrap();
        let v = partial.validate_deterministic(&t0).unwrap();
        assert!(v.violations.contains(&Violation::UncoveredRow(0)));
        let dup = DecisionTree::new(
            2,
            vec![TreeNode::query(
                Attribute(4),
                vec![(0, TreeNode::Leaf(1)), (0, TreeNode::Leaf(1))],
            )],
        )
        .unwrap();
        assert!(dup
            .validate_deterministic(&t0)
            .unwrap()
            .violations
            .contains(&Violation::DuplicateEdgeLabel {
                attribute: Attribute(4),
                value: 0
            }));
        let alien = DecisionTree::new(
            2,
            vec![TreeNode::query(Attribute(9), vec![(0, TreeNode::Leaf(1))])],
        )
        .unwrap();
        assert!(alien
            .validate_deterministic(&t0)
            .unwrap()
            .violations
            .contains(&Violation::UnknownAttribute(Attribute(9))));
        assert!(matches!(
            fig3_tree().validate_deterministic(&DecisionTable::empty(2, vec![]).unwrap()),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn strongly_nondeterministic_validation() {
        let t0 = fig1();
        assert!(fig4_tree()
            .validate_strongly_nondeterministic(&t0)
            .unwrap()
            .is_valid());
        let v = fig3_tree().validate_strongly_nondeterministic(&t0).unwrap();
        assert!(v
            .violations
            .iter()
            .any(|x| matches!(x, Violation::TerminalNotOne { .. })));
        let f3 = DecisionTree::new(
            2,
            vec![TreeNode::query(Attribute(3), vec![(1, TreeNode::Leaf(1))])],
        )
        .unwrap();
        let v = f3.validate_strongly_nondeterministic(&t0).unwrap();
        assert!(v
            .violations
            .contains(&Violation::InconsistentPath { path: 0, row: 0 }));
        let ones = crate::fixtures::full_cube(2, 1, |_| 1);
        assert!(matches!(
            fig4_tree().validate_strongly_nondeterministic(&ones),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn text_format_golden() {
        let text = fig3_tree().to_string();
        assert_eq!(
            text,
            "(root (f4 (0 (leaf 1)) (1 (f3 (0 (leaf 1)) (1 (leaf 0))))))"
        );
        assert_eq!(DecisionTree::parse(&text).unwrap(), fig3_tree());
        assert_eq!(
            fig4_tree().to_string(),
            "(root (f4 (0 (leaf 1))) (f3 (0 (leaf 1))))"
        );
        assert_eq!(DecisionTree::terminal(2, 0).to_string(), "(root (leaf 0))");
    }

    #[test]
    fn text_format_errors() {
        assert!(DecisionTree::parse("(root)").is_err());
        assert!(DecisionTree::parse("(root (leaf 2))").is_err());
        assert!(DecisionTree::parse("(root (g4 (0 (leaf 1))))").is_err());
        assert!(DecisionTree::parse("(root (f4 (0 (leaf 1)))").is_err());
        assert!(DecisionTree::parse("(root (f4))").is_err());
        let multi = "# comment\n(root\n  (f1 (0 (leaf 0))\n      (2 (leaf 1))))\n";
        let t = DecisionTree::parse(multi).unwrap();
        assert_eq!(t.k(), 3);
    }
}
