//! Tree dictionaries built on the `join` primitive.
//!
//! All tree backends share one immutable node representation ([`Tree`]):
//! structurally persistent binary trees whose subtrees are reference-counted
//! and freely shared between versions. What differs is the entry payload and
//! the `join` implementation:
//!
//! * [`UnbalancedDict`] — entries are bare key/value pairs and `join` creates
//!   a single root node. Degenerate inputs degrade to linear depth; this
//!   backend documents the cost of skipping rebalancing.
//! * [`BalancedDict`] — entries carry an extra bookkeeping integer and `join`
//!   restores balance by descending the heavy spine and rotating
//!   ([`join_right`](BalancedDict::join_right) and its mirror). The policy
//!   deciding when something is heavy is pluggable: [`AvlPolicy`] stores
//!   heights, [`WbbPolicy`] stores weights (`size + 1`) and compares them by
//!   exact integer ratio arithmetic.

use std::fmt::Debug;
use std::sync::Arc;

use crate::algebra::{KeyOrder, Monoid};
use crate::dict::{debug_check_boundary, debug_check_hint, join_based, FocusHint, HintOf, HintedDict};
use crate::instrument;

/// Persistent binary tree; `None` is the empty tree.
#[derive(Clone, Debug)]
pub struct Tree<E>(Option<Arc<TreeNode<E>>>);

#[derive(Debug)]
pub struct TreeNode<E> {
    pub left: Tree<E>,
    pub entry: E,
    pub right: Tree<E>,
}

impl<E> Tree<E> {
    pub fn leaf() -> Self {
        Tree(None)
    }

    pub fn is_leaf(&self) -> bool {
        self.0.is_none()
    }

    pub fn node(&self) -> Option<&TreeNode<E>> {
        self.0.as_deref()
    }

    /// Pointer identity of the root node, for sharing checks.
    pub fn root_ptr(&self) -> Option<*const ()> {
        self.0.as_ref().map(|n| Arc::as_ptr(n) as *const ())
    }

    fn bin(left: Tree<E>, entry: E, right: Tree<E>) -> Self {
        instrument::record_alloc(1);
        Tree(Some(Arc::new(TreeNode { left, entry, right })))
    }

    /// Longest root-to-leaf path, counted in nodes.
    pub fn height(&self) -> usize {
        match self.node() {
            None => 0,
            Some(n) => 1 + n.left.height().max(n.right.height()),
        }
    }
}

/// Payload stored in tree nodes.
pub trait TreeEntry: Clone {
    type Key: Clone;
    type Value: Clone;
    fn key(&self) -> &Self::Key;
    fn value(&self) -> &Self::Value;
}

impl<K: Clone, V: Clone> TreeEntry for (K, V) {
    type Key = K;
    type Value = V;

    fn key(&self) -> &K {
        &self.0
    }

    fn value(&self) -> &V {
        &self.1
    }
}

/// Entry carrying balance bookkeeping (height for AVL, weight for WBB).
#[derive(Clone, Debug)]
pub struct InfoEntry<K, V> {
    pub key: K,
    pub value: V,
    pub info: i64,
}

impl<K: Clone, V: Clone> TreeEntry for InfoEntry<K, V> {
    type Key = K;
    type Value = V;

    fn key(&self) -> &K {
        &self.key
    }

    fn value(&self) -> &V {
        &self.value
    }
}

/// In-order fold with an explicit heap stack; the call stack stays flat even
/// on spine-shaped trees.
pub(crate) fn fold_left_inorder<E: TreeEntry, R, F>(dict: &Tree<E>, z: R, mut op: F) -> R
where
    F: FnMut(R, &E::Key, &E::Value) -> R,
{
    let mut res = z;
    let mut stack: Vec<&TreeNode<E>> = Vec::new();
    let mut cursor = dict;
    loop {
        while let Some(node) = cursor.node() {
            stack.push(node);
            cursor = &node.left;
        }
        match stack.pop() {
            None => return res,
            Some(node) => {
                res = op(res, node.entry.key(), node.entry.value());
                cursor = &node.right;
            }
        }
    }
}

fn spine_min<E: TreeEntry>(dict: &Tree<E>) -> Option<&E> {
    let mut cursor = dict.node()?;
    while let Some(next) = cursor.left.node() {
        cursor = next;
    }
    Some(&cursor.entry)
}

fn spine_max<E: TreeEntry>(dict: &Tree<E>) -> Option<&E> {
    let mut cursor = dict.node()?;
    while let Some(next) = cursor.right.node() {
        cursor = next;
    }
    Some(&cursor.entry)
}

fn root_focus<B, E>(backend: &B, dict: &Tree<E>) -> HintOf<B>
where
    E: TreeEntry,
    B: HintedDict<Key = E::Key, Value = E::Value, Dict = Tree<E>> + ?Sized,
{
    match dict.node() {
        None => backend.end(dict),
        Some(node) => FocusHint {
            left: node.left.clone(),
            key: node.entry.key().clone(),
            value: node.entry.value().clone(),
            right: node.right.clone(),
        },
    }
}

/// GraphViz rendering of a tree, for eyeballing shapes while debugging tests.
pub fn tree_to_dot<E: TreeEntry>(tree: &Tree<E>) -> String
where
    E::Key: Debug,
    E::Value: Debug,
{
    let mut out = String::from("digraph tree {\n  node [shape=box];\n");
    let mut stack: Vec<(usize, &Tree<E>)> = vec![(0, tree)];
    let mut next_id = 1usize;
    while let Some((id, t)) = stack.pop() {
        if let Some(node) = t.node() {
            out.push_str(&format!(
                "  n{} [label=\"{:?}:{:?}\"];\n",
                id,
                node.entry.key(),
                node.entry.value()
            ));
            for child in [&node.left, &node.right] {
                if child.node().is_some() {
                    let cid = next_id;
                    next_id += 1;
                    out.push_str(&format!("  n{} -> n{};\n", id, cid));
                    stack.push((cid, child));
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

// ----------------------------------------------------------------------
// Unbalanced trees
// ----------------------------------------------------------------------

/// Join-based dictionary over raw binary trees; no rebalancing at all.
#[derive(Clone, Debug)]
pub struct UnbalancedDict<K, V> {
    order: KeyOrder<K>,
    monoid: Monoid<V>,
}

impl<K: Clone, V: Clone + PartialEq> UnbalancedDict<K, V> {
    pub fn new(order: KeyOrder<K>, monoid: Monoid<V>) -> Self {
        UnbalancedDict { order, monoid }
    }
}

impl<K: Clone, V: Clone + PartialEq> HintedDict for UnbalancedDict<K, V> {
    type Key = K;
    type Value = V;
    type Dict = Tree<(K, V)>;

    fn order(&self) -> &KeyOrder<K> {
        &self.order
    }

    fn monoid(&self) -> &Monoid<V> {
        &self.monoid
    }

    fn empty(&self) -> Self::Dict {
        Tree::leaf()
    }

    fn is_empty(&self, dict: &Self::Dict) -> bool {
        dict.is_leaf()
    }

    fn middle(&self, dict: &Self::Dict) -> HintOf<Self> {
        root_focus(self, dict)
    }

    fn insert_hint(
        &self,
        dict: Self::Dict,
        hint: HintOf<Self>,
        key: &K,
        value: &V,
    ) -> Self::Dict {
        debug_check_hint(self, &dict, &hint, key);
        join_based::insert_hint(self, hint, key, value)
    }

    fn append(&self, left: Self::Dict, right: Self::Dict) -> Self::Dict {
        join_based::append(self, left, right)
    }

    fn join(&self, left: Self::Dict, key: &K, value: &V, right: Self::Dict) -> Self::Dict {
        debug_check_boundary(self, &left, Some(key), &right);
        Tree::bin(left, (key.clone(), value.clone()), right)
    }

    fn fold_left<R, F>(&self, dict: &Self::Dict, z: R, op: F) -> R
    where
        F: FnMut(R, &K, &V) -> R,
    {
        fold_left_inorder(dict, z, op)
    }

    fn min_key(&self, dict: &Self::Dict) -> Option<K> {
        spine_min(dict).map(|e| e.0.clone())
    }

    fn max_key(&self, dict: &Self::Dict) -> Option<K> {
        spine_max(dict).map(|e| e.0.clone())
    }
}

// ----------------------------------------------------------------------
// Balanced trees
// ----------------------------------------------------------------------

/// Decides when a subtree counts as heavy, from the bookkeeping integers.
pub trait BalancePolicy: Clone {
    /// Bookkeeping value of the empty tree.
    fn leaf_info(&self) -> i64;
    /// Bookkeeping value of a node from its children's values.
    fn combined_info(&self, left: i64, right: i64) -> i64;
    /// Left outweighs right enough that a join must descend and rebalance.
    fn is_heavier(&self, left: i64, right: i64) -> bool;
    /// Left outweighs right enough that a single rotation cannot fix it.
    fn is_much_heavier(&self, left: i64, right: i64) -> bool;
    /// Entry count, when the bookkeeping value determines it.
    fn size_from_info(&self, info: i64) -> Option<usize>;
}

/// Height-balanced policy: info is the height, leaves are 0, and a node may
/// not be more than one level taller than its sibling.
#[derive(Clone, Copy, Debug, Default)]
pub struct AvlPolicy;

impl BalancePolicy for AvlPolicy {
    fn leaf_info(&self) -> i64 {
        0
    }

    fn combined_info(&self, left: i64, right: i64) -> i64 {
        left.max(right) + 1
    }

    fn is_heavier(&self, left: i64, right: i64) -> bool {
        left > right + 1
    }

    fn is_much_heavier(&self, left: i64, right: i64) -> bool {
        left > right
    }

    fn size_from_info(&self, _info: i64) -> Option<usize> {
        None
    }
}

/// Weight-balanced policy with `alpha = 29/100`.
///
/// Info is the weight `size + 1`: leaves weigh 1 and weights add. The
/// rebalance thresholds derive from alpha: `ratio = alpha / (1 - alpha) =
/// 29/71 ~ 0.40845` and `beta = (1 - 2 alpha) / (1 - alpha) = 42/71 ~
/// 0.59155`. Both predicates compare by integer cross-multiplication so
/// balance decisions never depend on floating-point rounding.
#[derive(Clone, Copy, Debug, Default)]
pub struct WbbPolicy;

impl WbbPolicy {
    pub const ALPHA_NUM: i64 = 29;
    pub const ALPHA_DEN: i64 = 100;
}

impl BalancePolicy for WbbPolicy {
    fn leaf_info(&self) -> i64 {
        1
    }

    fn combined_info(&self, left: i64, right: i64) -> i64 {
        left + right
    }

    /// `ratio * left > right`, i.e. `29 * left > 71 * right`.
    fn is_heavier(&self, left: i64, right: i64) -> bool {
        29 * left > 71 * right
    }

    /// `left > beta * (left + right)`, i.e. `71 * left > 42 * (left + right)`.
    fn is_much_heavier(&self, left: i64, right: i64) -> bool {
        71 * left > 42 * (left + right)
    }

    fn size_from_info(&self, info: i64) -> Option<usize> {
        Some((info - 1) as usize)
    }
}

/// Balanced join-based dictionary, generic over the balance policy.
#[derive(Clone, Debug)]
pub struct BalancedDict<K, V, P> {
    order: KeyOrder<K>,
    monoid: Monoid<V>,
    policy: P,
}

pub type AvlDict<K, V> = BalancedDict<K, V, AvlPolicy>;
pub type WbbDict<K, V> = BalancedDict<K, V, WbbPolicy>;

impl<K: Clone, V: Clone + PartialEq> AvlDict<K, V> {
    pub fn new(order: KeyOrder<K>, monoid: Monoid<V>) -> Self {
        BalancedDict { order, monoid, policy: AvlPolicy }
    }
}

impl<K: Clone, V: Clone + PartialEq> WbbDict<K, V> {
    pub fn new(order: KeyOrder<K>, monoid: Monoid<V>) -> Self {
        BalancedDict { order, monoid, policy: WbbPolicy }
    }
}

impl<K, V, P> BalancedDict<K, V, P>
where
    K: Clone,
    V: Clone + PartialEq,
    P: BalancePolicy,
{
    pub fn policy(&self) -> &P {
        &self.policy
    }

    /// Bookkeeping value of a (possibly empty) tree.
    pub fn info(&self, tree: &Tree<InfoEntry<K, V>>) -> i64 {
        match tree.node() {
            None => self.policy.leaf_info(),
            Some(node) => node.entry.info,
        }
    }

    /// Smart constructor: recomputes the bookkeeping value.
    fn bin(
        &self,
        left: Tree<InfoEntry<K, V>>,
        key: &K,
        value: &V,
        right: Tree<InfoEntry<K, V>>,
    ) -> Tree<InfoEntry<K, V>> {
        let info = self.policy.combined_info(self.info(&left), self.info(&right));
        Tree::bin(left, InfoEntry { key: key.clone(), value: value.clone(), info }, right)
    }

    fn heavier(&self, a: &Tree<InfoEntry<K, V>>, b: &Tree<InfoEntry<K, V>>) -> bool {
        self.policy.is_heavier(self.info(a), self.info(b))
    }

    fn much_heavier(&self, a: &Tree<InfoEntry<K, V>>, b: &Tree<InfoEntry<K, V>>) -> bool {
        self.policy.is_much_heavier(self.info(a), self.info(b))
    }

    /// Rotate the root leftwards; the right child becomes the new root.
    /// In-order sequence is preserved and bookkeeping recomputed.
    pub fn rotate_left(&self, tree: Tree<InfoEntry<K, V>>) -> Tree<InfoEntry<K, V>> {
        instrument::record_left_rotation();
        let node = tree.node().expect("contract violation: not left rotatable");
        let pivot = node.right.node().expect("contract violation: not left rotatable");
        let lowered = self.bin(node.left.clone(), &node.entry.key, &node.entry.value, pivot.left.clone());
        self.bin(lowered, &pivot.entry.key, &pivot.entry.value, pivot.right.clone())
    }

    /// Mirror of [`rotate_left`](Self::rotate_left).
    pub fn rotate_right(&self, tree: Tree<InfoEntry<K, V>>) -> Tree<InfoEntry<K, V>> {
        instrument::record_right_rotation();
        let node = tree.node().expect("contract violation: not right rotatable");
        let pivot = node.left.node().expect("contract violation: not right rotatable");
        let lowered = self.bin(pivot.right.clone(), &node.entry.key, &node.entry.value, node.right.clone());
        self.bin(pivot.left.clone(), &pivot.entry.key, &pivot.entry.value, lowered)
    }

    /// Splice when the left operand is the heavy side: descend its right
    /// spine to the point where the pieces are comparable, rebuild upwards,
    /// rotating (singly or doubly) wherever the rebuilt child got too heavy.
    fn join_right(
        &self,
        left: Tree<InfoEntry<K, V>>,
        key: &K,
        value: &V,
        right: Tree<InfoEntry<K, V>>,
    ) -> Tree<InfoEntry<K, V>> {
        if !self.heavier(&left, &right) {
            return self.bin(left, key, value, right);
        }
        let node = left.node().expect("a heavier tree cannot be empty");
        let (spine_left, pivot_key, pivot_value) =
            (node.left.clone(), node.entry.key.clone(), node.entry.value.clone());
        let rebuilt = self.join_right(node.right.clone(), key, value, right);
        if self.heavier(&rebuilt, &spine_left) {
            let needs_double = {
                let r = rebuilt.node().expect("a heavier tree cannot be empty");
                self.much_heavier(&r.left, &r.right)
            };
            if needs_double {
                let fixed = self.rotate_right(rebuilt);
                self.rotate_left(self.bin(spine_left, &pivot_key, &pivot_value, fixed))
            } else {
                self.rotate_left(self.bin(spine_left, &pivot_key, &pivot_value, rebuilt))
            }
        } else {
            self.bin(spine_left, &pivot_key, &pivot_value, rebuilt)
        }
    }

    /// Exact left-right mirror of [`join_right`](Self::join_right).
    fn join_left(
        &self,
        left: Tree<InfoEntry<K, V>>,
        key: &K,
        value: &V,
        right: Tree<InfoEntry<K, V>>,
    ) -> Tree<InfoEntry<K, V>> {
        if !self.heavier(&right, &left) {
            return self.bin(left, key, value, right);
        }
        let node = right.node().expect("a heavier tree cannot be empty");
        let (spine_right, pivot_key, pivot_value) =
            (node.right.clone(), node.entry.key.clone(), node.entry.value.clone());
        let rebuilt = self.join_left(left, key, value, node.left.clone());
        if self.heavier(&rebuilt, &spine_right) {
            let needs_double = {
                let r = rebuilt.node().expect("a heavier tree cannot be empty");
                self.much_heavier(&r.right, &r.left)
            };
            if needs_double {
                let fixed = self.rotate_left(rebuilt);
                self.rotate_right(self.bin(fixed, &pivot_key, &pivot_value, spine_right))
            } else {
                self.rotate_right(self.bin(rebuilt, &pivot_key, &pivot_value, spine_right))
            }
        } else {
            self.bin(rebuilt, &pivot_key, &pivot_value, spine_right)
        }
    }

    /// Walk the whole tree checking sortedness, stored bookkeeping and the
    /// balance predicate at every node.
    pub fn validate(&self, dict: &Tree<InfoEntry<K, V>>) -> Result<(), String> {
        self.validate_node(dict, None, None)?;
        Ok(())
    }

    fn validate_node(
        &self,
        tree: &Tree<InfoEntry<K, V>>,
        low: Option<&K>,
        high: Option<&K>,
    ) -> Result<i64, String> {
        let node = match tree.node() {
            None => return Ok(self.policy.leaf_info()),
            Some(n) => n,
        };
        let key = &node.entry.key;
        if let Some(lo) = low {
            if self.order.cmp_unrecorded(lo, key) >= 0 {
                return Err("in-order key sequence not strictly increasing".into());
            }
        }
        if let Some(hi) = high {
            if self.order.cmp_unrecorded(key, hi) >= 0 {
                return Err("in-order key sequence not strictly increasing".into());
            }
        }
        let left_info = self.validate_node(&node.left, low, Some(key))?;
        let right_info = self.validate_node(&node.right, Some(key), high)?;
        let expect = self.policy.combined_info(left_info, right_info);
        if node.entry.info != expect {
            return Err(format!(
                "stored balance info {} does not match recomputed {}",
                node.entry.info, expect
            ));
        }
        if self.policy.is_heavier(left_info, right_info)
            || self.policy.is_heavier(right_info, left_info)
        {
            return Err(format!(
                "balance predicate violated at a node: left info {left_info}, right info {right_info}"
            ));
        }
        Ok(node.entry.info)
    }
}

impl<K, V, P> HintedDict for BalancedDict<K, V, P>
where
    K: Clone,
    V: Clone + PartialEq,
    P: BalancePolicy,
{
    type Key = K;
    type Value = V;
    type Dict = Tree<InfoEntry<K, V>>;

    fn order(&self) -> &KeyOrder<K> {
        &self.order
    }

    fn monoid(&self) -> &Monoid<V> {
        &self.monoid
    }

    fn empty(&self) -> Self::Dict {
        Tree::leaf()
    }

    fn is_empty(&self, dict: &Self::Dict) -> bool {
        dict.is_leaf()
    }

    fn middle(&self, dict: &Self::Dict) -> HintOf<Self> {
        root_focus(self, dict)
    }

    fn insert_hint(
        &self,
        dict: Self::Dict,
        hint: HintOf<Self>,
        key: &K,
        value: &V,
    ) -> Self::Dict {
        debug_check_hint(self, &dict, &hint, key);
        join_based::insert_hint(self, hint, key, value)
    }

    fn append(&self, left: Self::Dict, right: Self::Dict) -> Self::Dict {
        join_based::append(self, left, right)
    }

    fn join(&self, left: Self::Dict, key: &K, value: &V, right: Self::Dict) -> Self::Dict {
        debug_check_boundary(self, &left, Some(key), &right);
        if self.heavier(&left, &right) {
            self.join_right(left, key, value, right)
        } else if self.heavier(&right, &left) {
            self.join_left(left, key, value, right)
        } else {
            self.bin(left, key, value, right)
        }
    }

    fn fold_left<R, F>(&self, dict: &Self::Dict, z: R, op: F) -> R
    where
        F: FnMut(R, &K, &V) -> R,
    {
        fold_left_inorder(dict, z, op)
    }

    fn size(&self, dict: &Self::Dict) -> usize {
        match self.policy.size_from_info(self.info(dict)) {
            Some(n) => n,
            None => self.fold_left(dict, 0usize, |n, _, _| n + 1),
        }
    }

    fn min_key(&self, dict: &Self::Dict) -> Option<K> {
        spine_min(dict).map(|e| e.key.clone())
    }

    fn max_key(&self, dict: &Self::Dict) -> Option<K> {
        spine_max(dict).map(|e| e.key.clone())
    }
}
