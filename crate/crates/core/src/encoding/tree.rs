//! Expression trees over Boolean operators, stored in prefix order.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::boolfn::{check_dimension, TruthTable};
use crate::error::{Error, Result};

/// A tree node. Variables are numbered from 1, `x1` being the most
/// significant bit of the input index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Var(u8),
    Not,
    And,
    Or,
    Xor,
    Xnor,
    /// `a AND NOT b`
    And2,
    /// `if a then b else c`
    If,
}

pub const FUNCTIONS: [Node; 7] = [
    Node::Or,
    Node::Xor,
    Node::And,
    Node::And2,
    Node::Xnor,
    Node::If,
    Node::Not,
];

impl Node {
    pub fn arity(self) -> usize {
        match self {
            Node::Var(_) => 0,
            Node::Not => 1,
            Node::And | Node::Or | Node::Xor | Node::Xnor | Node::And2 => 2,
            Node::If => 3,
        }
    }

    pub fn is_leaf(self) -> bool {
        matches!(self, Node::Var(_))
    }

    fn name(self) -> &'static str {
        match self {
            Node::Var(_) => "x",
            Node::Not => "NOT",
            Node::And => "AND",
            Node::Or => "OR",
            Node::Xor => "XOR",
            Node::Xnor => "XNOR",
            Node::And2 => "AND2",
            Node::If => "IF",
        }
    }

    fn from_name(s: &str) -> Option<Node> {
        Some(match s {
            "NOT" => Node::Not,
            "AND" => Node::And,
            "OR" => Node::Or,
            "XOR" => Node::Xor,
            "XNOR" => Node::Xnor,
            "AND2" => Node::And2,
            "IF" => Node::If,
            _ => return None,
        })
    }
}

/// Size limits for tree generation and variation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub max_nodes: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: 7,
            max_nodes: 500,
        }
    }
}

/// A GP individual. The single-node tree has depth 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GpTree {
    nodes: Vec<Node>,
}

impl GpTree {
    /// Wraps a prefix sequence after checking that arities close exactly.
    pub fn from_prefix(nodes: Vec<Node>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Parse("empty tree".into()));
        }
        let mut need = 1usize;
        for (i, node) in nodes.iter().enumerate() {
            if need == 0 {
                return Err(Error::Parse(format!("trailing nodes from position {i}")));
            }
            need = need - 1 + node.arity();
        }
        if need != 0 {
            return Err(Error::Parse(format!("{need} missing operands")));
        }
        Ok(Self { nodes })
    }

    pub(crate) fn from_prefix_unchecked(nodes: Vec<Node>) -> Self {
        debug_assert!(Self::from_prefix(nodes.clone()).is_ok());
        Self { nodes }
    }

    pub fn leaf(var: u8) -> Self {
        Self {
            nodes: vec![Node::Var(var)],
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// One past the last node of the subtree rooted at `i`.
    pub fn subtree_end(&self, i: usize) -> usize {
        subtree_end(&self.nodes, i)
    }

    pub fn subtree(&self, i: usize) -> &[Node] {
        &self.nodes[i..self.subtree_end(i)]
    }

    pub fn depth(&self) -> usize {
        depth_of(&self.nodes)
    }

    /// Level of every node, the root being level 1.
    pub fn levels(&self) -> Vec<usize> {
        let mut levels = Vec::with_capacity(self.nodes.len());
        // (level, children still expected) of open ancestors
        let mut open: Vec<(usize, usize)> = Vec::new();
        for node in &self.nodes {
            let level = open.last().map_or(1, |&(l, _)| l + 1);
            levels.push(level);
            if let Some(top) = open.last_mut() {
                top.1 -= 1;
            }
            while matches!(open.last(), Some(&(_, 0))) {
                open.pop();
            }
            if node.arity() > 0 {
                open.push((level, node.arity()));
            }
        }
        levels
    }

    /// Height of the subtree rooted at each node.
    pub fn heights(&self) -> Vec<usize> {
        let mut heights = vec![0; self.nodes.len()];
        let mut stack: Vec<usize> = Vec::new();
        for (i, node) in self.nodes.iter().enumerate().rev() {
            let mut h = 0;
            for _ in 0..node.arity() {
                h = h.max(stack.pop().expect("well-formed prefix"));
            }
            heights[i] = h + 1;
            stack.push(h + 1);
        }
        heights
    }

    /// Child start indices of the node at `i`.
    pub fn children(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes[i].arity());
        let mut j = i + 1;
        for _ in 0..self.nodes[i].arity() {
            out.push(j);
            j = self.subtree_end(j);
        }
        out
    }

    /// Copy of `self` with the subtree at `at` replaced by `replacement`.
    pub fn replace_subtree(&self, at: usize, replacement: &[Node]) -> GpTree {
        let end = self.subtree_end(at);
        let mut nodes = Vec::with_capacity(self.nodes.len() - (end - at) + replacement.len());
        nodes.extend_from_slice(&self.nodes[..at]);
        nodes.extend_from_slice(replacement);
        nodes.extend_from_slice(&self.nodes[end..]);
        GpTree::from_prefix_unchecked(nodes)
    }

    pub fn max_var(&self) -> u8 {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Var(v) => Some(*v),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn check_vars(&self, n: u32) -> Result<()> {
        for node in &self.nodes {
            if let Node::Var(v) = *node {
                if v == 0 || v as u32 > n {
                    return Err(Error::UnboundVariable { var: v, n });
                }
            }
        }
        Ok(())
    }

    pub fn fits(&self, params: &TreeParams) -> bool {
        self.len() <= params.max_nodes && self.depth() <= params.max_depth
    }
}

pub(crate) fn subtree_end(nodes: &[Node], i: usize) -> usize {
    let mut need = 1usize;
    let mut j = i;
    while need > 0 {
        need = need - 1 + nodes[j].arity();
        j += 1;
    }
    j
}

pub(crate) fn depth_of(nodes: &[Node]) -> usize {
    let mut stack: Vec<usize> = Vec::with_capacity(16);
    for node in nodes.iter().rev() {
        let mut h = 0;
        for _ in 0..node.arity() {
            h = h.max(stack.pop().unwrap_or(0));
        }
        stack.push(h + 1);
    }
    stack.pop().unwrap_or(0)
}

impl fmt::Display for GpTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_at(nodes: &[Node], i: usize, f: &mut fmt::Formatter<'_>) -> std::result::Result<usize, fmt::Error> {
            match nodes[i] {
                Node::Var(v) => {
                    write!(f, "x{v}")?;
                    Ok(i + 1)
                }
                op => {
                    write!(f, "{}(", op.name())?;
                    let mut j = i + 1;
                    for k in 0..op.arity() {
                        if k > 0 {
                            f.write_str(", ")?;
                        }
                        j = write_at(nodes, j, f)?;
                    }
                    f.write_str(")")?;
                    Ok(j)
                }
            }
        }
        write_at(&self.nodes, 0, f).map(|_| ())
    }
}

impl FromStr for GpTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let mut nodes = Vec::new();
        parser.expr(&mut nodes)?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(Error::Parse(format!("unexpected input at byte {}", parser.pos)));
        }
        GpTree::from_prefix(nodes)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{}' at byte {}", c as char, self.pos)))
        }
    }

    fn expr(&mut self, out: &mut Vec<Node>) -> Result<()> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if word.is_empty() {
            return Err(Error::Parse(format!("expected a node at byte {start}")));
        }
        if let Some(rest) = word.strip_prefix('x') {
            let v: u8 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable {word:?}")))?;
            if v == 0 {
                return Err(Error::Parse("variables are numbered from x1".into()));
            }
            out.push(Node::Var(v));
            return Ok(());
        }
        let op = Node::from_name(word).ok_or_else(|| Error::Parse(format!("unknown operator {word:?}")))?;
        out.push(op);
        self.expect(b'(')?;
        for k in 0..op.arity() {
            if k > 0 {
                self.expect(b',')?;
            }
            self.expr(out)?;
        }
        self.expect(b')')
    }
}

/// Evaluates trees on all `2^n` inputs at once, 64 inputs per word.
#[derive(Clone, Debug)]
pub struct TreeEvaluator {
    n: u32,
    words: usize,
    vars: Vec<u64>,
    stack: Vec<u64>,
}

const LOW_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl TreeEvaluator {
    pub fn new(n: u32) -> Result<Self> {
        check_dimension(n)?;
        let len = 1usize << n;
        let words = len.div_ceil(64);
        let mask = if n < 6 { (1u64 << len) - 1 } else { u64::MAX };
        let mut vars = Vec::with_capacity(n as usize * words);
        for k in 1..=n {
            // x_k is index bit n - k
            let bit = n - k;
            for w in 0..words {
                let word = if bit < 6 {
                    LOW_PATTERNS[bit as usize] & mask
                } else if (w >> (bit - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                };
                vars.push(word);
            }
        }
        Ok(Self {
            n,
            words,
            vars,
            stack: Vec::new(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn evaluate(&mut self, tree: &GpTree) -> Result<TruthTable> {
        tree.check_vars(self.n)?;
        let w = self.words;
        let mask = if self.n < 6 {
            (1u64 << (1u32 << self.n)) - 1
        } else {
            u64::MAX
        };
        self.stack.clear();
        for node in tree.nodes.iter().rev() {
            let top = self.stack.len();
            match *node {
                Node::Var(v) => {
                    let start = (v as usize - 1) * w;
                    self.stack.extend_from_slice(&self.vars[start..start + w]);
                }
                Node::Not => {
                    for x in &mut self.stack[top - w..top] {
                        *x = !*x & mask;
                    }
                }
                op @ (Node::And | Node::Or | Node::Xor | Node::Xnor | Node::And2) => {
                    // first operand is on top, second just below it
                    let (rest, a) = self.stack.split_at_mut(top - w);
                    let b = &mut rest[top - 2 * w..];
                    for (dst, &x) in b.iter_mut().zip(a.iter()) {
                        let y = *dst;
                        *dst = match op {
                            Node::And => x & y,
                            Node::Or => x | y,
                            Node::Xor => x ^ y,
                            Node::Xnor => !(x ^ y) & mask,
                            _ => x & !y,
                        };
                    }
                    self.stack.truncate(top - w);
                }
                Node::If => {
                    let (rest, cond) = self.stack.split_at_mut(top - w);
                    let (else_branch, then_branch) = rest.split_at_mut(top - 2 * w);
                    let else_branch = &mut else_branch[top - 3 * w..];
                    for ((dst, &t), &c) in else_branch.iter_mut().zip(then_branch.iter()).zip(cond.iter()) {
                        *dst = (c & t) | (!c & *dst);
                    }
                    self.stack.truncate(top - 2 * w);
                }
            }
        }
        debug_assert_eq!(self.stack.len(), w);
        TruthTable::from_words(self.n, self.stack.clone())
    }
}

pub fn evaluate_tree(tree: &GpTree, n: u32) -> Result<TruthTable> {
    TreeEvaluator::new(n)?.evaluate(tree)
}

fn random_terminal<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Node {
    Node::Var(rng.random_range(1..=n) as u8)
}

fn random_function<R: Rng + ?Sized>(rng: &mut R) -> Node {
    FUNCTIONS[rng.random_range(0..FUNCTIONS.len())]
}

/// Appends a random subtree of height at most `depth` (full or grow method).
pub fn generate_into<R: Rng + ?Sized>(out: &mut Vec<Node>, n: u32, depth: usize, full: bool, rng: &mut R) {
    if depth <= 1 {
        out.push(random_terminal(n, rng));
        return;
    }
    let node = if full {
        random_function(rng)
    } else {
        // grow picks uniformly from the whole primitive set
        let k = rng.random_range(0..FUNCTIONS.len() + n as usize);
        if k < FUNCTIONS.len() {
            FUNCTIONS[k]
        } else {
            Node::Var((k - FUNCTIONS.len() + 1) as u8)
        }
    };
    out.push(node);
    for _ in 0..node.arity() {
        generate_into(out, n, depth - 1, full, rng);
    }
}

/// A tree generated by the grow method, height at most `depth`, no larger than `max_nodes`.
pub fn grow<R: Rng + ?Sized>(n: u32, depth: usize, max_nodes: usize, rng: &mut R) -> GpTree {
    let mut nodes = Vec::new();
    for _ in 0..16 {
        nodes.clear();
        generate_into(&mut nodes, n, depth, false, rng);
        if nodes.len() <= max_nodes {
            return GpTree::from_prefix_unchecked(nodes);
        }
    }
    GpTree {
        nodes: vec![random_terminal(n, rng)],
    }
}

/// Ramped half-and-half initialisation with heights drawn from `2..=max_depth`.
pub fn ramped_half_and_half<R: Rng + ?Sized>(n: u32, params: &TreeParams, rng: &mut R) -> GpTree {
    let max_depth = params.max_depth.max(2);
    let mut depth = rng.random_range(2..=max_depth);
    let full = rng.random_bool(0.5);
    let mut nodes = Vec::new();
    loop {
        for _ in 0..8 {
            nodes.clear();
            generate_into(&mut nodes, n, depth, full, rng);
            if nodes.len() <= params.max_nodes {
                return GpTree::from_prefix_unchecked(nodes);
            }
        }
        // full trees of ternary nodes outgrow the node cap quickly
        if depth <= 2 {
            return grow(n, 2, params.max_nodes, rng);
        }
        depth -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn parse(s: &str) -> GpTree {
        s.parse().unwrap()
    }

    #[test]
    fn operator_examples() {
        assert_eq!(
            evaluate_tree(&parse("NOT(x1)"), 1).unwrap(),
            TruthTable::from_bit_str(1, "10").unwrap()
        );
        assert_eq!(
            evaluate_tree(&parse("AND2(x1, x2)"), 2).unwrap(),
            TruthTable::from_bit_str(2, "0010").unwrap()
        );
        assert_eq!(
            evaluate_tree(&parse("IF(x1, x2, x3)"), 3).unwrap(),
            TruthTable::from_bit_str(3, "01010011").unwrap()
        );
        assert_eq!(
            evaluate_tree(&parse("XNOR(x1, x2)"), 2).unwrap(),
            TruthTable::from_bit_str(2, "1001").unwrap()
        );
    }

    #[test]
    fn unbound_variable_is_rejected() {
        assert_eq!(
            evaluate_tree(&parse("AND(x1, x4)"), 3),
            Err(Error::UnboundVariable { var: 4, n: 3 })
        );
    }

    #[test]
    fn high_variables_use_word_patterns() {
        // n = 8: x1 is index bit 7, constant across each 64-input word pair
        let t = evaluate_tree(&parse("x1"), 8).unwrap();
        assert_eq!(t.words(), &[0, 0, u64::MAX, u64::MAX]);
        let t = evaluate_tree(&parse("x8"), 8).unwrap();
        assert!(t.words().iter().all(|&w| w == LOW_PATTERNS[0]));
    }

    #[test]
    fn display_parse_round_trip() {
        let s = "IF(x1, AND2(x2, x3), NOT(x4))";
        assert_eq!(parse(s).to_string(), s);
        assert!("IF(x1, x2)".parse::<GpTree>().is_err());
        assert!("FOO(x1)".parse::<GpTree>().is_err());
        assert!("x0".parse::<GpTree>().is_err());
        assert!("x1 x2".parse::<GpTree>().is_err());
    }

    #[test]
    fn structure_helpers() {
        let t = parse("IF(x1, AND2(x2, x3), NOT(x4))");
        assert_eq!(t.len(), 7);
        assert_eq!(t.depth(), 3);
        assert_eq!(t.subtree_end(2), 5);
        assert_eq!(t.children(0), vec![1, 2, 5]);
        assert_eq!(t.levels(), vec![1, 2, 2, 3, 3, 2, 3]);
        assert_eq!(t.heights(), vec![3, 1, 2, 1, 1, 2, 1]);
        let r = t.replace_subtree(2, &[Node::Var(5)]);
        assert_eq!(r.to_string(), "IF(x1, x5, NOT(x4))");
        assert!(GpTree::from_prefix(vec![Node::And, Node::Var(1)]).is_err());
        assert!(GpTree::from_prefix(vec![Node::Var(1), Node::Var(1)]).is_err());
    }

    #[test]
    fn ramped_trees_respect_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let params = TreeParams {
            max_depth: 5,
            max_nodes: 500,
        };
        for _ in 0..200 {
            let t = ramped_half_and_half(6, &params, &mut rng);
            assert!(t.depth() <= 5 && t.depth() >= 1);
            assert!(t.len() <= 500);
            t.check_vars(6).unwrap();
        }
        let big = TreeParams {
            max_depth: 9,
            max_nodes: 500,
        };
        for _ in 0..50 {
            assert!(ramped_half_and_half(7, &big, &mut rng).len() <= 500);
        }
    }
}
