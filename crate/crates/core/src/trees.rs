//! k-ary trees, their breadth-first w-labelings, and the bijection between
//! threshold sequences and ordered tuples of trees.
//!
//! A w-labeling assigns `w, w-1, ..., w-nk` to the nodes in breadth-first
//! order. A sequence is split at its cut index; the top segment is read as the
//! internal-node set of a w-tree rooted at the last value, and the remaining
//! prefix is handled recursively. Each tree is placed in the tuple according
//! to how far its prefix overshoots `k * len`.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::Value;

use crate::error::TreeError;
use crate::threshold::{cut_index_of, validate, ThresholdParams, ThresholdSequence};

/// Node of an unlabeled ordered tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Leaf,
    Internal(Vec<Node>),
}

impl Node {
    fn internal_count(&self) -> usize {
        match self {
            Node::Leaf => 0,
            Node::Internal(children) => 1 + children.iter().map(Node::internal_count).sum::<usize>(),
        }
    }

    fn check_arity(&self, k: u32) -> Result<(), TreeError> {
        match self {
            Node::Leaf => Ok(()),
            Node::Internal(children) if children.len() == k as usize => {
                children.iter().try_for_each(|c| c.check_arity(k))
            }
            Node::Internal(children) => Err(TreeError::Malformed(format!(
                "internal node has {} children, expected {k}",
                children.len()
            ))),
        }
    }

    fn from_json(value: &Value, k: u32) -> Result<Node, TreeError> {
        match value {
            Value::Null => Ok(Node::Leaf),
            Value::Array(items) if items.len() == k as usize => {
                Ok(Node::Internal(items.iter().map(|v| Node::from_json(v, k)).collect::<Result<_, _>>()?))
            }
            Value::Array(items) => Err(TreeError::Malformed(format!(
                "internal node has {} children, expected {k}",
                items.len()
            ))),
            other => Err(TreeError::Malformed(format!("unexpected JSON value {other}"))),
        }
    }
}

impl Serialize for Node {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Node::Leaf => serializer.serialize_none(),
            Node::Internal(children) => {
                let mut seq = serializer.serialize_seq(Some(children.len()))?;
                for child in children {
                    seq.serialize_element(child)?;
                }
                seq.end()
            }
        }
    }
}

/// An ordered k-ary tree: every internal node has exactly `k` children.
///
/// JSON form: a leaf is `null`, an internal node is an array of its `k`
/// children.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct KaryTree {
    #[serde(skip)]
    arity: u32,
    root: Node,
}

/// One node of a [`WTreeLabeling`], in breadth-first order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LabeledNode {
    pub label: i64,
    pub parent: Option<usize>,
    pub internal: bool,
}

/// Breadth-first labeling `w, w-1, ..., w-nk` of a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WTreeLabeling {
    pub root_label: i64,
    pub nodes: Vec<LabeledNode>,
}

impl WTreeLabeling {
    /// Internal-node labels, largest first.
    pub fn internal_labels(&self) -> Vec<i64> {
        self.nodes.iter().filter(|n| n.internal).map(|n| n.label).collect()
    }

    pub fn smallest_label(&self) -> i64 {
        self.nodes.last().map_or(self.root_label, |n| n.label)
    }
}

impl KaryTree {
    /// The trivial single-leaf tree.
    pub fn leaf(arity: u32) -> Result<Self, TreeError> {
        if arity < 2 {
            return Err(TreeError::InvalidArity(arity));
        }
        Ok(Self { arity, root: Node::Leaf })
    }

    pub fn from_node(arity: u32, root: Node) -> Result<Self, TreeError> {
        if arity < 2 {
            return Err(TreeError::InvalidArity(arity));
        }
        root.check_arity(arity)?;
        Ok(Self { arity, root })
    }

    pub fn from_json(value: &Value, arity: u32) -> Result<Self, TreeError> {
        if arity < 2 {
            return Err(TreeError::InvalidArity(arity));
        }
        Ok(Self { arity, root: Node::from_json(value, arity)? })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn is_trivial(&self) -> bool {
        self.root == Node::Leaf
    }

    pub fn internal_count(&self) -> usize {
        self.root.internal_count()
    }

    pub fn node_count(&self) -> usize {
        self.internal_count() * self.arity as usize + 1
    }

    /// Labels the tree breadth-first starting from `w` at the root.
    pub fn labeling(&self, w: i64) -> WTreeLabeling {
        let mut nodes = Vec::with_capacity(self.node_count());
        let mut queue = VecDeque::from([(&self.root, None)]);
        let mut label = w;
        while let Some((node, parent)) = queue.pop_front() {
            let idx = nodes.len();
            nodes.push(LabeledNode { label, parent, internal: matches!(node, Node::Internal(_)) });
            label -= 1;
            if let Node::Internal(children) = node {
                queue.extend(children.iter().map(|c| (c, Some(idx))));
            }
        }
        WTreeLabeling { root_label: w, nodes }
    }

    /// Internal labels of the w-labeling, in increasing order.
    pub fn internal_labels_ascending(&self, w: i64) -> Vec<i64> {
        let mut labels = self.labeling(w).internal_labels();
        labels.reverse();
        labels
    }

    /// Graphviz rendering. With `root_label`, nodes carry their w-labeling.
    pub fn to_dot(&self, name: &str, root_label: Option<i64>) -> String {
        let mut out = format!("digraph {name} {{\n");
        write_dot_body(&mut out, self, "n", root_label);
        out.push_str("}\n");
        out
    }
}

fn write_dot_body(out: &mut String, tree: &KaryTree, prefix: &str, root_label: Option<i64>) {
    let labeling = tree.labeling(root_label.unwrap_or(0));
    for (idx, node) in labeling.nodes.iter().enumerate() {
        let shape = if node.internal { "circle" } else { "box" };
        let text = root_label.map(|_| node.label.to_string()).unwrap_or_default();
        let _ = writeln!(out, "  {prefix}{idx} [shape={shape}, label=\"{text}\"];");
    }
    for (idx, node) in labeling.nodes.iter().enumerate() {
        if let Some(parent) = node.parent {
            let _ = writeln!(out, "  {prefix}{parent} -> {prefix}{idx};");
        }
    }
}

/// Builds the w-tree whose internal nodes carry exactly `labels`.
///
/// `labels` must be strictly decreasing, start at `w`, and satisfy
/// `labels[j] >= w - j*k` (0-based `j`); otherwise some label would fall
/// below every node the breadth-first construction creates.
pub fn build_from_internal_labels(k: u32, w: i64, labels: &[i64]) -> Result<KaryTree, TreeError> {
    if k < 2 {
        return Err(TreeError::InvalidArity(k));
    }
    let (&first, _) = labels.split_first().ok_or(TreeError::EmptyLabels)?;
    if first != w {
        return Err(TreeError::RootMismatch { expected: w, got: first });
    }
    let step = i64::from(k);
    for (j, pair) in labels.windows(2).enumerate() {
        if pair[1] >= pair[0] {
            return Err(TreeError::NotDecreasing { index: j + 1 });
        }
    }
    for (j, &label) in labels.iter().enumerate() {
        let min = w - j as i64 * step;
        if label < min {
            return Err(TreeError::UnreachableLabel { index: j, label, min });
        }
    }

    let internal: HashSet<i64> = labels.iter().copied().collect();
    // Arena of (label, children); slot 0 is the root.
    let mut arena: Vec<Vec<usize>> = vec![Vec::new()];
    let mut arena_labels = vec![w];
    let mut queue = VecDeque::from([0usize]);
    let mut next_label = w - 1;
    while let Some(idx) = queue.pop_front() {
        if !internal.contains(&arena_labels[idx]) {
            continue;
        }
        for _ in 0..k {
            let child = arena.len();
            arena.push(Vec::new());
            arena_labels.push(next_label);
            next_label -= 1;
            arena[idx].push(child);
            queue.push_back(child);
        }
    }
    debug_assert_eq!(arena.len(), labels.len() * k as usize + 1);

    fn assemble(arena: &[Vec<usize>], idx: usize) -> Node {
        if arena[idx].is_empty() {
            Node::Leaf
        } else {
            Node::Internal(arena[idx].iter().map(|&c| assemble(arena, c)).collect())
        }
    }
    Ok(KaryTree { arity: k, root: assemble(&arena, 0) })
}

/// One tree of the forest, with the prefix that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestPart {
    pub tree: KaryTree,
    /// Length of the prefix `Q_p` whose last value is the root label.
    pub prefix_len: usize,
    pub root_label: i64,
    /// The `l_p` for which `Q_p` is a proper `(k, l_p)`-sequence.
    pub level: i64,
}

/// Splits an offset-0 sequence into its trees, in order of computation.
pub fn forest_parts(seq: &ThresholdSequence) -> Result<Vec<ForestPart>, TreeError> {
    let params = seq.params();
    if params.d != 0 {
        return Err(crate::error::SequenceError::NonZeroOffset(params.d).into());
    }
    let k = params.k;
    let mut parts = Vec::new();
    let mut prefix = seq.values();
    while !prefix.is_empty() {
        let cut = cut_index_of(prefix, k);
        let root_label = *prefix.last().expect("non-empty");
        let top: Vec<i64> = prefix[cut..].iter().rev().copied().collect();
        let tree = build_from_internal_labels(k, root_label, &top)
            .expect("segments above the cut index are always reachable");
        parts.push(ForestPart {
            tree,
            prefix_len: prefix.len(),
            root_label,
            level: root_label - i64::from(k) * prefix.len() as i64,
        });
        prefix = &prefix[..cut];
    }
    Ok(parts)
}

/// The trees `A^1, ..., A^t` of a sequence, in order of computation.
pub fn forest_of(seq: &ThresholdSequence) -> Result<Vec<KaryTree>, TreeError> {
    Ok(forest_parts(seq)?.into_iter().map(|p| p.tree).collect())
}

/// An ordered tuple of k-ary trees. JSON form: an array of tree encodings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct TreeTuple {
    #[serde(skip)]
    arity: u32,
    trees: Vec<KaryTree>,
}

impl TreeTuple {
    pub fn new(arity: u32, trees: Vec<KaryTree>) -> Result<Self, TreeError> {
        if arity < 2 {
            return Err(TreeError::InvalidArity(arity));
        }
        if trees.is_empty() {
            return Err(TreeError::Malformed("a tuple holds at least one tree".into()));
        }
        if let Some(bad) = trees.iter().find(|t| t.arity != arity) {
            return Err(TreeError::Malformed(format!("tree of arity {} in a {arity}-ary tuple", bad.arity)));
        }
        Ok(Self { arity, trees })
    }

    pub fn from_json(value: &Value, arity: u32) -> Result<Self, TreeError> {
        let Value::Array(items) = value else {
            return Err(TreeError::Malformed("a tuple is a JSON array of trees".into()));
        };
        let trees = items.iter().map(|v| KaryTree::from_json(v, arity)).collect::<Result<_, _>>()?;
        Self::new(arity, trees)
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn trees(&self) -> &[KaryTree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// The `l` of the matching threshold sequences: tuple length minus one.
    pub fn l(&self) -> u32 {
        (self.trees.len() - 1) as u32
    }

    pub fn internal_count(&self) -> usize {
        self.trees.iter().map(KaryTree::internal_count).sum()
    }

    /// Root label `w_p` each non-trivial entry receives when mapped back to a sequence.
    pub fn root_labels(&self) -> Vec<Option<i64>> {
        let n = self.internal_count() as i64;
        let k = i64::from(self.arity);
        let mut labels = vec![None; self.trees.len()];
        let mut used = 0i64;
        for (pos, tree) in self.trees.iter().enumerate().rev() {
            if tree.is_trivial() {
                continue;
            }
            labels[pos] = Some(k * (n - used) + pos as i64);
            used += tree.internal_count() as i64;
        }
        labels
    }

    pub fn to_dot(&self, name: &str, labeled: bool) -> String {
        let roots = self.root_labels();
        let mut out = format!("digraph {name} {{\n");
        for (pos, tree) in self.trees.iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_{pos} {{\n  label=\"{}\";", pos + 1);
            let root = if labeled { roots[pos] } else { None };
            write_dot_body(&mut out, tree, &format!("t{pos}_"), root);
            out.push_str("  }\n");
        }
        out.push_str("}\n");
        out
    }
}

/// Maps an offset-0 (k,l)-sequence to its `(l+1)`-tuple of trees.
pub fn tuple_of(seq: &ThresholdSequence) -> Result<TreeTuple, TreeError> {
    let params = seq.params();
    let parts = forest_parts(seq)?;
    let mut trees = vec![KaryTree::leaf(params.k)?; params.l as usize + 1];
    let mut previous: Option<i64> = None;
    for part in parts {
        assert!(
            previous.is_none_or(|p| part.level < p),
            "levels must strictly decrease along the forest"
        );
        assert!(
            (0..=i64::from(params.l)).contains(&part.level),
            "level {} outside [0, {}]",
            part.level,
            params.l
        );
        previous = Some(part.level);
        trees[part.level as usize] = part.tree;
    }
    TreeTuple::new(params.k, trees)
}

/// Inverse of [`tuple_of`]: labels each non-trivial entry at position `y`
/// (1-based, scanned right to left) as a w-tree with `w = k(n - r) + y - 1`,
/// where `r` counts internal nodes already placed, then concatenates the
/// ascending internal labels from the leftmost tree to the rightmost.
pub fn sequence_of_tuple(tuple: &TreeTuple) -> Result<ThresholdSequence, TreeError> {
    let n = tuple.internal_count();
    if n == 0 {
        return Err(TreeError::EmptyTuple);
    }
    let roots = tuple.root_labels();
    let mut values = Vec::with_capacity(n);
    for (tree, root) in tuple.trees.iter().zip(&roots) {
        if let Some(w) = root {
            values.extend(tree.internal_labels_ascending(*w));
        }
    }
    let params = ThresholdParams::new(tuple.arity, tuple.l(), n)?;
    Ok(validate(values, params)?)
}

/// Streams the `parts`-fold products of pooled trees over all compositions of
/// `total`, compositions in lexicographic order, then pool indices in
/// lexicographic order within each composition.
#[derive(Clone, Debug)]
struct CompositionProduct {
    pools: Arc<Vec<Vec<Node>>>,
    composition: Vec<usize>,
    indices: Vec<usize>,
    started: bool,
    done: bool,
}

impl CompositionProduct {
    fn new(pools: Arc<Vec<Vec<Node>>>, parts: usize, total: usize) -> Self {
        let mut composition = vec![0; parts];
        if let Some(last) = composition.last_mut() {
            *last = total;
        }
        let done = parts == 0 && total > 0;
        Self { pools, indices: vec![0; parts], composition, started: false, done }
    }

    fn advance_composition(&mut self) -> bool {
        let parts = self.composition.len();
        let mut suffix = self.composition.last().copied().unwrap_or(0);
        for i in (0..parts.saturating_sub(1)).rev() {
            if suffix > 0 {
                self.composition[i] += 1;
                for c in &mut self.composition[i + 1..] {
                    *c = 0;
                }
                self.composition[parts - 1] = suffix - 1;
                return true;
            }
            suffix += self.composition[i];
        }
        false
    }

    fn advance_indices(&mut self) -> bool {
        for i in (0..self.indices.len()).rev() {
            if self.indices[i] + 1 < self.pools[self.composition[i]].len() {
                self.indices[i] += 1;
                for idx in &mut self.indices[i + 1..] {
                    *idx = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for CompositionProduct {
    type Item = Vec<Node>;

    fn next(&mut self) -> Option<Vec<Node>> {
        if self.done {
            return None;
        }
        if self.started && !self.advance_indices() {
            if !self.advance_composition() {
                self.done = true;
                return None;
            }
            self.indices.iter_mut().for_each(|i| *i = 0);
        }
        self.started = true;
        Some(
            self.composition
                .iter()
                .zip(&self.indices)
                .map(|(&size, &idx)| self.pools[size][idx].clone())
                .collect(),
        )
    }
}

/// All trees with `0..=max` internal nodes, indexed by size.
fn tree_pools(k: u32, max: usize) -> Vec<Vec<Node>> {
    let mut pools: Vec<Vec<Node>> = vec![vec![Node::Leaf]];
    for m in 1..=max {
        let shared = Arc::new(std::mem::take(&mut pools));
        let level: Vec<Node> = CompositionProduct::new(shared.clone(), k as usize, m - 1)
            .map(Node::Internal)
            .collect();
        pools = Arc::try_unwrap(shared).expect("iterator dropped");
        pools.push(level);
    }
    pools
}

/// Stream of every k-ary tree with `n` internal nodes.
#[derive(Clone, Debug)]
pub struct Trees {
    arity: u32,
    inner: TreesInner,
}

#[derive(Clone, Debug)]
enum TreesInner {
    Trivial(bool),
    Product(CompositionProduct),
}

impl Iterator for Trees {
    type Item = KaryTree;

    fn next(&mut self) -> Option<KaryTree> {
        let root = match &mut self.inner {
            TreesInner::Trivial(emitted) => {
                if std::mem::replace(emitted, true) {
                    return None;
                }
                Node::Leaf
            }
            TreesInner::Product(product) => Node::Internal(product.next()?),
        };
        Some(KaryTree { arity: self.arity, root })
    }
}

/// Every k-ary tree with `n` internal nodes, each exactly once.
///
/// Children's internal counts run over compositions of `n - 1` in
/// lexicographic order.
pub fn enumerate_trees(k: u32, n: usize) -> Result<Trees, TreeError> {
    if k < 2 {
        return Err(TreeError::InvalidArity(k));
    }
    let inner = if n == 0 {
        TreesInner::Trivial(false)
    } else {
        let pools = Arc::new(tree_pools(k, n - 1));
        TreesInner::Product(CompositionProduct::new(pools, k as usize, n - 1))
    };
    Ok(Trees { arity: k, inner })
}

/// Stream of ordered tuples of k-ary trees.
#[derive(Clone, Debug)]
pub struct Tuples {
    arity: u32,
    product: CompositionProduct,
}

impl Iterator for Tuples {
    type Item = TreeTuple;

    fn next(&mut self) -> Option<TreeTuple> {
        let nodes = self.product.next()?;
        let trees = nodes.into_iter().map(|root| KaryTree { arity: self.arity, root }).collect();
        Some(TreeTuple { arity: self.arity, trees })
    }
}

/// Every ordered `r`-tuple of k-ary trees with `n` internal nodes in total.
pub fn enumerate_tuples(k: u32, r: usize, n: usize) -> Result<Tuples, TreeError> {
    if k < 2 {
        return Err(TreeError::InvalidArity(k));
    }
    if r == 0 {
        return Err(TreeError::Malformed("tuple size r must be >= 1".into()));
    }
    let pools = Arc::new(tree_pools(k, n));
    Ok(Tuples { arity: k, product: CompositionProduct::new(pools, r, n) })
}
