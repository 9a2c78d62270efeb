//! The backend-independent dictionary contract.
//!
//! [`HintedDict`] describes an ordered dictionary whose values form a monoid
//! and whose operations can be steered by hints: cursor-like objects that
//! point into the dictionary and make lookup, insertion and deletion at or
//! near that position cheap.
//!
//! A backend supplies a handful of structural primitives (`empty`,
//! `is_empty`, `middle`, `insert_hint`, `append`, `join`); everything else —
//! seeking, iteration, the plain `find`/`insert`/`delete` surface, size and
//! count — has a default implementation expressed purely against those
//! primitives. Backends override defaults only when their representation
//! offers a cheaper route (for example, constant-time `size` on array views).
//!
//! Dictionary values behave persistently: operations take their input by
//! value and return a new dictionary, and any clone kept by the caller is
//! never observably modified. Hints are snapshot-scoped — a hint is valid
//! only for the exact dictionary value it was derived from.

use std::fmt::Debug;

use crate::algebra::{KeyOrder, Monoid};

/// A dictionary split around one focused position: everything strictly below
/// the focused key on the left, everything strictly above it on the right.
///
/// A focused value equal to the monoid zero encodes "no entry at this key".
#[derive(Clone, Debug)]
pub struct FocusHint<K, V, D> {
    pub left: D,
    pub key: K,
    pub value: V,
    pub right: D,
}

/// The focus hint type of a backend.
pub type HintOf<B> =
    FocusHint<<B as HintedDict>::Key, <B as HintedDict>::Value, <B as HintedDict>::Dict>;

/// An ordered, monoid-valued, hint-driven dictionary backend.
///
/// The backend value itself is a lightweight description (key order, value
/// monoid, balancing policy); dictionary contents live in the associated
/// `Dict` values that the methods consume and produce.
pub trait HintedDict {
    type Key: Clone;
    type Value: Clone + PartialEq;
    type Dict: Clone;

    fn order(&self) -> &KeyOrder<Self::Key>;
    fn monoid(&self) -> &Monoid<Self::Value>;

    // ------------------------------------------------------------------
    // Structural primitives every backend must provide.
    // ------------------------------------------------------------------

    fn empty(&self) -> Self::Dict;

    fn is_empty(&self, dict: &Self::Dict) -> bool;

    /// Focus a backend-chosen pivot entry; `left`/`right` partition the rest.
    /// Empty dictionaries focus the end hint.
    fn middle(&self, dict: &Self::Dict) -> HintOf<Self>;

    /// Install `key` at the focused position: combine with the stored value
    /// when the entry exists, splice a new entry otherwise.
    ///
    /// Precondition: `hint` partitions `dict` around `key` (the [`seek`]
    /// postcondition, or an end hint when `key` exceeds every stored key).
    /// Violations are undefined at the contract level; debug builds assert.
    ///
    /// [`seek`]: Self::seek
    fn insert_hint(
        &self,
        dict: Self::Dict,
        hint: HintOf<Self>,
        key: &Self::Key,
        value: &Self::Value,
    ) -> Self::Dict;

    /// Concatenate two dictionaries; every key of `left` must be strictly
    /// less than every key of `right`.
    fn append(&self, left: Self::Dict, right: Self::Dict) -> Self::Dict;

    /// Splice `left ++ [(key, value)] ++ right`; requires
    /// `keys(left) < key < keys(right)`.
    fn join(
        &self,
        left: Self::Dict,
        key: &Self::Key,
        value: &Self::Value,
        right: Self::Dict,
    ) -> Self::Dict;

    // ------------------------------------------------------------------
    // Hint accessors.
    // ------------------------------------------------------------------

    /// The sub-dictionary of entries strictly before the focused position.
    fn before(&self, hint: &HintOf<Self>) -> Self::Dict {
        hint.left.clone()
    }

    /// The sub-dictionary of entries strictly after the focused position.
    fn after(&self, hint: &HintOf<Self>) -> Self::Dict {
        hint.right.clone()
    }

    /// The focused key/value pair; the value is the monoid zero when the
    /// dictionary holds no entry at the focused key.
    fn current(&self, hint: &HintOf<Self>) -> (Self::Key, Self::Value) {
        (hint.key.clone(), hint.value.clone())
    }

    // ------------------------------------------------------------------
    // Hint construction.
    // ------------------------------------------------------------------

    /// The hint one past the last entry: focuses the `max` sentinel with the
    /// zero value, the whole dictionary on its left and nothing on its right.
    fn end(&self, dict: &Self::Dict) -> HintOf<Self> {
        FocusHint {
            left: dict.clone(),
            key: self.order().max().clone(),
            value: self.monoid().zero(),
            right: self.empty(),
        }
    }

    /// Whether `hint` is the end hint.
    ///
    /// End hints are the only hints focusing the `max` sentinel (user keys
    /// may never equal it), so a single key comparison suffices.
    fn is_end(&self, _dict: &Self::Dict, hint: &HintOf<Self>) -> bool {
        self.order().equiv(&hint.key, self.order().max())
    }

    /// Focus the smallest entry, or the end hint when empty.
    fn begin(&self, dict: &Self::Dict) -> HintOf<Self> {
        match seek_first(self, dict) {
            None => self.end(dict),
            Some((rest, key, value)) => FocusHint { left: self.empty(), key, value, right: rest },
        }
    }

    /// The hint focusing the successor entry, or `end(dict)` when the focused
    /// position has no successor. Advancing an end hint yields `end(dict)`
    /// again.
    fn next(&self, dict: &Self::Dict, hint: &HintOf<Self>) -> HintOf<Self> {
        let right = self.after(hint);
        let next_hint = self.begin(&right);
        if self.is_end(&right, &next_hint) {
            self.end(dict)
        } else {
            FocusHint {
                left: self.before(hint),
                key: next_hint.key,
                value: next_hint.value,
                right: next_hint.right,
            }
        }
    }

    /// Partition the dictionary around `key`.
    ///
    /// Postcondition: the result focuses `key` itself (with the stored value,
    /// or zero when absent), all keys of its left part are strictly below
    /// `key` and all keys of its right part strictly above.
    fn seek(&self, dict: &Self::Dict, key: &Self::Key) -> HintOf<Self> {
        self.order().assert_user_key(key);
        seek_by_bisection(self, dict, key)
    }

    // ------------------------------------------------------------------
    // Hinted operations.
    // ------------------------------------------------------------------

    /// The value at the focused position (zero when no entry exists).
    fn find_hint(&self, dict: &Self::Dict, hint: &HintOf<Self>, key: &Self::Key) -> Self::Value {
        debug_check_hint(self, dict, hint, key);
        hint.value.clone()
    }

    /// Remove the entry at `key` if present; reassembles the two parts.
    fn delete_hint(
        &self,
        dict: Self::Dict,
        hint: HintOf<Self>,
        key: &Self::Key,
    ) -> Self::Dict {
        debug_check_hint(self, &dict, &hint, key);
        self.append(hint.left, hint.right)
    }

    // ------------------------------------------------------------------
    // Plain dictionary surface (seek + hinted op).
    // ------------------------------------------------------------------

    /// The value stored at `key`, or the monoid zero when absent.
    fn find(&self, dict: &Self::Dict, key: &Self::Key) -> Self::Value {
        let hint = self.seek(dict, key);
        self.find_hint(dict, &hint, key)
    }

    /// Insert `(key, value)`; an existing entry is combined with the monoid
    /// operation (`op(old, new)`). Zero-valued entries are stored like any
    /// other; [`count`](Self::count) is the observable that skips them.
    fn insert(&self, dict: Self::Dict, key: &Self::Key, value: &Self::Value) -> Self::Dict {
        let hint = self.seek(&dict, key);
        self.insert_hint(dict, hint, key, value)
    }

    /// Remove `key`; deleting an absent key yields an equal dictionary.
    fn delete(&self, dict: Self::Dict, key: &Self::Key) -> Self::Dict {
        let hint = self.seek(&dict, key);
        self.delete_hint(dict, hint, key)
    }

    /// The one-entry dictionary `{key: value}`.
    fn single(&self, key: &Self::Key, value: &Self::Value) -> Self::Dict {
        self.insert(self.empty(), key, value)
    }

    /// Number of stored entries, including zero-valued ones.
    fn size(&self, dict: &Self::Dict) -> usize {
        self.fold_left(dict, 0usize, |n, _, _| n + 1)
    }

    /// Number of entries holding a non-zero value.
    fn count(&self, dict: &Self::Dict) -> usize {
        let monoid = self.monoid();
        self.fold_left(dict, 0usize, |n, _, v| if monoid.is_zero(v) { n } else { n + 1 })
    }

    // ------------------------------------------------------------------
    // Iteration.
    // ------------------------------------------------------------------

    /// Left-to-right accumulation in strictly increasing key order.
    ///
    /// The default walks the begin/next hint chain with a plain loop, so the
    /// call stack stays flat no matter how large the dictionary is.
    fn fold_left<R, F>(&self, dict: &Self::Dict, z: R, mut op: F) -> R
    where
        F: FnMut(R, &Self::Key, &Self::Value) -> R,
    {
        let mut res = z;
        let mut hint = self.begin(dict);
        while !self.is_end(dict, &hint) {
            res = op(res, &hint.key, &hint.value);
            hint = self.next(dict, &hint);
        }
        res
    }

    /// Divide-and-conquer accumulation over the dictionary viewed as a tree.
    ///
    /// At each focused entry, `op` maps the incoming state to the states for
    /// the two parts plus a hidden value `M`; `comb` merges the two partial
    /// results with the entry and the hidden value. The two recursive
    /// evaluations share no mutable state, so a scheduler may legally run
    /// them concurrently (`op` and `comb` are `Fn`, not `FnMut`).
    fn fold_tree<R, M, FOp, FComb>(&self, dict: &Self::Dict, z: R, op: &FOp, comb: &FComb) -> R
    where
        FOp: Fn(&Self::Key, &Self::Value, R) -> (R, R, M),
        FComb: Fn(&Self::Key, &Self::Value, M, R, R) -> R,
    {
        if self.is_empty(dict) {
            return z;
        }
        let hint = self.middle(dict);
        let (z_left, z_right, hidden) = op(&hint.key, &hint.value, z);
        let res_left = self.fold_tree(&hint.left, z_left, op, comb);
        let res_right = self.fold_tree(&hint.right, z_right, op, comb);
        comb(&hint.key, &hint.value, hidden, res_left, res_right)
    }

    /// Map every entry and reduce in key order, seeded with `z`.
    ///
    /// `red` must be associative; ordered iteration makes commutativity
    /// unnecessary.
    fn map_reduce<R, FMap, FRed>(&self, dict: &Self::Dict, z: R, map: FMap, red: FRed) -> R
    where
        FMap: Fn(&Self::Key, &Self::Value) -> R,
        FRed: Fn(R, R) -> R,
    {
        self.fold_left(dict, z, |s, k, v| red(s, map(k, v)))
    }

    /// [`map_reduce`](Self::map_reduce) seeded and reduced by a monoid.
    fn aggregate<R, FMap>(&self, dict: &Self::Dict, result: &Monoid<R>, map: FMap) -> R
    where
        R: Clone + PartialEq,
        FMap: Fn(&Self::Key, &Self::Value) -> R,
    {
        self.map_reduce(dict, result.zero(), map, |a, b| result.combine(&a, &b))
    }

    /// All entries in strictly increasing key order.
    fn to_list(&self, dict: &Self::Dict) -> Vec<(Self::Key, Self::Value)> {
        self.fold_left(dict, Vec::new(), |mut acc, k, v| {
            acc.push((k.clone(), v.clone()));
            acc
        })
    }

    // ------------------------------------------------------------------
    // Boundary keys (used by debug contract checks; backends override with
    // cheaper walks).
    // ------------------------------------------------------------------

    fn min_key(&self, dict: &Self::Dict) -> Option<Self::Key> {
        self.fold_left(dict, None, |acc, k, _| acc.or_else(|| Some(k.clone())))
    }

    fn max_key(&self, dict: &Self::Dict) -> Option<Self::Key> {
        self.fold_left(dict, None, |_, k, _| Some(k.clone()))
    }

    /// Stable debug rendering: `{k1:v1, k2:v2}` in key order.
    fn dump(&self, dict: &Self::Dict) -> String
    where
        Self::Key: Debug,
        Self::Value: Debug,
    {
        let mut out = String::from("{");
        let mut first = true;
        self.fold_left(dict, (), |(), k, v| {
            if !first {
                out.push_str(", ");
            }
            first = false;
            out.push_str(&format!("{:?}:{:?}", k, v));
        });
        out.push('}');
        out
    }
}

/// Detach the smallest entry: returns `(rest, key, value)` where `rest` is
/// the dictionary without that entry, rebuilt through `join`. `None` when
/// empty.
pub fn seek_first<B: HintedDict + ?Sized>(
    backend: &B,
    dict: &B::Dict,
) -> Option<(B::Dict, B::Key, B::Value)> {
    if backend.is_empty(dict) {
        return None;
    }
    let hint = backend.middle(dict);
    if backend.is_empty(&hint.left) {
        Some((hint.right, hint.key, hint.value))
    } else {
        let (rest, key, value) = seek_first(backend, &hint.left)?;
        Some((backend.join(rest, &hint.key, &hint.value, hint.right), key, value))
    }
}

/// The generic seek: bisect through `middle`, rebuilding the untouched side
/// with `join` on the way back up.
fn seek_by_bisection<B: HintedDict + ?Sized>(
    backend: &B,
    dict: &B::Dict,
    key: &B::Key,
) -> HintOf<B> {
    if backend.is_empty(dict) {
        return FocusHint {
            left: backend.empty(),
            key: key.clone(),
            value: backend.monoid().zero(),
            right: backend.empty(),
        };
    }
    let hint = backend.middle(dict);
    let side = backend.order().cmp(key, &hint.key);
    if side == 0 {
        hint
    } else if side < 0 {
        let inner = seek_by_bisection(backend, &hint.left, key);
        FocusHint {
            left: inner.left,
            key: inner.key,
            value: inner.value,
            right: backend.join(inner.right, &hint.key, &hint.value, hint.right),
        }
    } else {
        let inner = seek_by_bisection(backend, &hint.right, key);
        FocusHint {
            left: backend.join(hint.left, &hint.key, &hint.value, inner.left),
            key: inner.key,
            value: inner.value,
            right: inner.right,
        }
    }
}

/// Debug-build validation of the hinted-operation precondition: the hint must
/// partition the dictionary around `key`, and a non-zero focused value must
/// sit at `key` itself.
pub fn debug_check_hint<B: HintedDict + ?Sized>(
    backend: &B,
    _dict: &B::Dict,
    hint: &HintOf<B>,
    key: &B::Key,
) {
    if cfg!(debug_assertions) {
        let ord = backend.order();
        if !backend.monoid().is_zero(&hint.value) {
            assert!(
                ord.cmp_unrecorded(&hint.key, key) == 0,
                "hint precondition violated: focused entry does not match the key"
            );
        }
        if let Some(m) = backend.max_key(&hint.left) {
            assert!(
                ord.cmp_unrecorded(&m, key) < 0,
                "hint precondition violated: left part reaches the key"
            );
        }
        if let Some(m) = backend.min_key(&hint.right) {
            assert!(
                ord.cmp_unrecorded(&m, key) > 0,
                "hint precondition violated: right part reaches the key"
            );
        }
    }
}

/// Debug-build validation of the `append`/`join` boundary precondition.
pub fn debug_check_boundary<B: HintedDict + ?Sized>(
    backend: &B,
    left: &B::Dict,
    middle_key: Option<&B::Key>,
    right: &B::Dict,
) {
    if cfg!(debug_assertions) {
        let ord = backend.order();
        let left_max = backend.max_key(left);
        let right_min = backend.min_key(right);
        if let Some(k) = middle_key {
            if let Some(ref m) = left_max {
                assert!(
                    ord.cmp_unrecorded(m, k) < 0,
                    "bulk-op precondition violated: keys(left) must lie below the pivot"
                );
            }
            if let Some(ref m) = right_min {
                assert!(
                    ord.cmp_unrecorded(m, k) > 0,
                    "bulk-op precondition violated: keys(right) must lie above the pivot"
                );
            }
        } else if let (Some(ref a), Some(ref b)) = (left_max, right_min) {
            assert!(
                ord.cmp_unrecorded(a, b) < 0,
                "bulk-op precondition violated: keys(left) must lie below keys(right)"
            );
        }
    }
}

/// Bulk operations derived from hinted insertion at the end position.
///
/// Suits backends whose `insert_hint` at the end runs in amortized constant
/// time (sorted arrays): `append` costs amortized `O(|right|)` element work.
pub mod insert_based {
    use super::*;

    pub fn append<B: HintedDict + ?Sized>(
        backend: &B,
        left: B::Dict,
        right: &B::Dict,
    ) -> B::Dict {
        debug_check_boundary(backend, &left, None, right);
        backend.fold_left(right, left, |acc, k, v| {
            let end = backend.end(&acc);
            backend.insert_hint(acc, end, k, v)
        })
    }

    pub fn join<B: HintedDict + ?Sized>(
        backend: &B,
        left: B::Dict,
        key: &B::Key,
        value: &B::Value,
        right: &B::Dict,
    ) -> B::Dict {
        debug_check_boundary(backend, &left, Some(key), right);
        let end = backend.end(&left);
        let left = backend.insert_hint(left, end, key, value);
        append(backend, left, right)
    }
}

/// Bulk operations derived from the `join` primitive.
///
/// Suits tree backends, where `join` is the single operation out of which
/// everything else is built.
pub mod join_based {
    use super::*;

    pub fn append<B: HintedDict + ?Sized>(backend: &B, left: B::Dict, right: B::Dict) -> B::Dict {
        debug_check_boundary(backend, &left, None, &right);
        if backend.is_empty(&right) {
            return left;
        }
        let hint = backend.begin(&right);
        backend.join(left, &hint.key, &hint.value, hint.right)
    }

    /// `join(before, key, op(current, value), after)`.
    ///
    /// Note the monoid identity makes the absent case come out right:
    /// `op(zero, value) == value`.
    pub fn insert_hint<B: HintedDict + ?Sized>(
        backend: &B,
        hint: HintOf<B>,
        key: &B::Key,
        value: &B::Value,
    ) -> B::Dict {
        let combined = backend.monoid().combine(&hint.value, value);
        backend.join(hint.left, key, &combined, hint.right)
    }
}

/// Map-reduce routed through `fold_tree` instead of `fold_left`: the state is
/// replicated to both parts and the reducer is applied around the focused
/// entry. Requires an associative `red`; with a commutative-and-associative
/// `red` it agrees with the `fold_left` route.
pub fn map_reduce_tree<B, R, FMap, FRed>(
    backend: &B,
    dict: &B::Dict,
    z: R,
    map: FMap,
    red: FRed,
) -> R
where
    B: HintedDict + ?Sized,
    R: Clone,
    FMap: Fn(&B::Key, &B::Value) -> R,
    FRed: Fn(R, R) -> R,
{
    backend.fold_tree(
        dict,
        z,
        &|_, _, s: R| (s.clone(), s, ()),
        &|k, v, (), s1, s2| red(red(s1, map(k, v)), s2),
    )
}
