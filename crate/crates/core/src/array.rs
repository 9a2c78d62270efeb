//! Sorted-array dictionaries.
//!
//! Two operating modes share the flat sorted representation:
//!
//! * [`ArrayDict`] — a persistent backend implementing the full
//!   [`HintedDict`] contract over [`ArrayView`] values: bounded windows onto
//!   a shared growable buffer. `middle`/`before`/`after` are pure window
//!   arithmetic and never copy; insertion copies the window only when the
//!   buffer is still reachable from somewhere else.
//! * [`TunedArrayDict`] — a mutating, single-owner container mirroring a
//!   low-level pointer-hint design: hints are plain `(index, found)` pairs,
//!   `after` advances the lower bound in place, the seek strategy is a
//!   runtime knob ([`SeekMethod`]), and folds run over the raw slice.

use std::fmt::Debug;
use std::sync::Arc;

use crate::algebra::{KeyOrder, Monoid};
use crate::dict::{debug_check_hint, insert_based, FocusHint, HintOf, HintedDict};
use crate::instrument;

/// A half-open window `[lower, upper)` onto a shared sorted buffer of
/// key/value pairs.
#[derive(Clone, Debug)]
pub struct ArrayView<K, V> {
    buffer: Arc<Vec<(K, V)>>,
    lower: usize,
    upper: usize,
}

impl<K: Clone, V: Clone> ArrayView<K, V> {
    pub fn empty() -> Self {
        ArrayView { buffer: Arc::new(Vec::new()), lower: 0, upper: 0 }
    }

    /// Wrap an already strictly sorted entry list.
    pub fn from_sorted(entries: Vec<(K, V)>) -> Self {
        let upper = entries.len();
        instrument::record_alloc(upper as u64);
        ArrayView { buffer: Arc::new(entries), lower: 0, upper }
    }

    pub fn len(&self) -> usize {
        self.upper - self.lower
    }

    pub fn is_empty(&self) -> bool {
        self.upper == self.lower
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    /// The entries visible through this view.
    pub fn slice(&self) -> &[(K, V)] {
        &self.buffer[self.lower..self.upper]
    }

    /// Identity of the backing buffer; equal pointers mean shared storage.
    pub fn buffer_ptr(&self) -> *const () {
        Arc::as_ptr(&self.buffer) as *const ()
    }

    /// Walk the view checking the structural invariants: bounds within the
    /// buffer and strictly increasing keys.
    pub fn validate(&self, order: &KeyOrder<K>) -> Result<(), String> {
        if self.lower > self.upper || self.upper > self.buffer.len() {
            return Err(format!(
                "view bounds [{}, {}) escape the buffer of length {}",
                self.lower,
                self.upper,
                self.buffer.len()
            ));
        }
        for pair in self.slice().windows(2) {
            if order.cmp_unrecorded(&pair[0].0, &pair[1].0) >= 0 {
                return Err("view keys not strictly increasing".into());
            }
        }
        Ok(())
    }

    fn entry(&self, index: usize) -> &(K, V) {
        &self.buffer[index]
    }

    fn window(&self, lower: usize, upper: usize) -> Self {
        ArrayView { buffer: Arc::clone(&self.buffer), lower, upper }
    }

    /// Replace the entry `offset` slots into the view. Mutates in place when
    /// this view holds the only reference to the buffer, otherwise copies the
    /// window rebased to the origin.
    fn with_entry_set(mut self, offset: usize, entry: (K, V)) -> Self {
        let index = self.lower + offset;
        if let Some(buf) = Arc::get_mut(&mut self.buffer) {
            buf[index] = entry;
            return self;
        }
        let len = self.len();
        let mut fresh: Vec<(K, V)> = Vec::with_capacity(len);
        fresh.extend_from_slice(self.slice());
        fresh[offset] = entry;
        instrument::record_alloc(len as u64);
        ArrayView { buffer: Arc::new(fresh), lower: 0, upper: len }
    }

    /// Splice a new entry `offset` slots into the view, with the same
    /// ownership rule as [`with_entry_set`](Self::with_entry_set).
    fn with_spliced(mut self, offset: usize, entry: (K, V)) -> Self {
        let index = self.lower + offset;
        if let Some(buf) = Arc::get_mut(&mut self.buffer) {
            instrument::record_moves((buf.len() - index + 1) as u64);
            buf.insert(index, entry);
            return ArrayView { buffer: self.buffer, lower: self.lower, upper: self.upper + 1 };
        }
        let len = self.len();
        let mut fresh: Vec<(K, V)> = Vec::with_capacity(len + 1);
        fresh.extend_from_slice(&self.slice()[..offset]);
        fresh.push(entry);
        fresh.extend_from_slice(&self.slice()[offset..]);
        instrument::record_alloc((len + 1) as u64);
        ArrayView { buffer: Arc::new(fresh), lower: 0, upper: len + 1 }
    }
}

/// Persistent sorted-array backend; bulk operations follow the insert-based
/// derivation, so `append` is amortized linear in the right operand.
#[derive(Clone, Debug)]
pub struct ArrayDict<K, V> {
    order: KeyOrder<K>,
    monoid: Monoid<V>,
}

impl<K: Clone, V: Clone + PartialEq> ArrayDict<K, V> {
    pub fn new(order: KeyOrder<K>, monoid: Monoid<V>) -> Self {
        ArrayDict { order, monoid }
    }

    /// Build a dictionary from strictly sorted entries without per-entry
    /// seeks.
    pub fn from_sorted(&self, entries: Vec<(K, V)>) -> ArrayView<K, V> {
        debug_assert!(
            entries.windows(2).all(|w| self.order.cmp_unrecorded(&w[0].0, &w[1].0) < 0),
            "from_sorted requires strictly increasing keys"
        );
        ArrayView::from_sorted(entries)
    }
}

impl<K: Clone, V: Clone + PartialEq> HintedDict for ArrayDict<K, V> {
    type Key = K;
    type Value = V;
    type Dict = ArrayView<K, V>;

    fn order(&self) -> &KeyOrder<K> {
        &self.order
    }

    fn monoid(&self) -> &Monoid<V> {
        &self.monoid
    }

    fn empty(&self) -> ArrayView<K, V> {
        ArrayView::empty()
    }

    fn is_empty(&self, dict: &ArrayView<K, V>) -> bool {
        dict.is_empty()
    }

    fn begin(&self, dict: &ArrayView<K, V>) -> HintOf<Self> {
        if dict.is_empty() {
            return self.end(dict);
        }
        let (key, value) = dict.entry(dict.lower).clone();
        FocusHint { left: self.empty(), key, value, right: dict.window(dict.lower + 1, dict.upper) }
    }

    fn middle(&self, dict: &ArrayView<K, V>) -> HintOf<Self> {
        if dict.is_empty() {
            return self.end(dict);
        }
        let mid = (dict.lower + dict.upper) / 2;
        let (key, value) = dict.entry(mid).clone();
        FocusHint {
            left: dict.window(dict.lower, mid),
            key,
            value,
            right: dict.window(mid + 1, dict.upper),
        }
    }

    /// Splice or combine at the focused position.
    ///
    /// The slot is located by the size of the hint's left part rather than
    /// its raw bounds: seeks that descended rightwards return a rebuilt left
    /// part whose window no longer indexes this buffer. Whether the key is
    /// present follows from the part sizes, so entries that happen to store
    /// the zero value still get combined rather than duplicated.
    fn insert_hint(
        &self,
        dict: ArrayView<K, V>,
        hint: HintOf<Self>,
        key: &K,
        value: &V,
    ) -> ArrayView<K, V> {
        debug_check_hint(self, &dict, &hint, key);
        let parts = hint.left.len() + hint.right.len();
        let len = dict.len();
        debug_assert!(
            parts == len || parts + 1 == len,
            "hint precondition violated: parts do not cover the dictionary"
        );
        let offset = hint.left.len();
        if parts + 1 == len {
            let combined = self.monoid.combine(&hint.value, value);
            drop(hint);
            dict.with_entry_set(offset, (key.clone(), combined))
        } else {
            drop(hint);
            dict.with_spliced(offset, (key.clone(), value.clone()))
        }
    }

    fn append(&self, left: ArrayView<K, V>, right: ArrayView<K, V>) -> ArrayView<K, V> {
        insert_based::append(self, left, &right)
    }

    fn join(
        &self,
        left: ArrayView<K, V>,
        key: &K,
        value: &V,
        right: ArrayView<K, V>,
    ) -> ArrayView<K, V> {
        insert_based::join(self, left, key, value, &right)
    }

    fn size(&self, dict: &ArrayView<K, V>) -> usize {
        dict.len()
    }

    fn min_key(&self, dict: &ArrayView<K, V>) -> Option<K> {
        if dict.is_empty() {
            None
        } else {
            Some(dict.entry(dict.lower).0.clone())
        }
    }

    fn max_key(&self, dict: &ArrayView<K, V>) -> Option<K> {
        if dict.is_empty() {
            None
        } else {
            Some(dict.entry(dict.upper - 1).0.clone())
        }
    }
}

/// Seek strategy of the tuned array dictionary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeekMethod {
    /// Scan forward from the lower bound; pays off when probe keys arrive in
    /// ascending order and land close together.
    Linear,
    /// Bisect the window; pays off when probes jump far ahead.
    Binary,
}

/// Position hint of the tuned mode: `found` tells whether `index` holds the
/// sought key; otherwise `index` is the least upper bound — the slot where
/// the key would be inserted (possibly one past the end).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PositionHint {
    pub index: usize,
    pub found: bool,
}

/// Mutating sorted-array dictionary with positional hints.
///
/// A value is single-writer: no aliasing views exist, so every operation may
/// update the buffer in place. `lower` advances past consumed entries
/// ([`after_inplace`](Self::after_inplace)); indices in hints are absolute
/// buffer positions.
#[derive(Clone, Debug)]
pub struct TunedArrayDict<K, V> {
    order: KeyOrder<K>,
    monoid: Monoid<V>,
    buffer: Vec<(K, V)>,
    lower: usize,
}

impl<K: Clone, V: Clone + PartialEq> TunedArrayDict<K, V> {
    pub fn new(order: KeyOrder<K>, monoid: Monoid<V>) -> Self {
        TunedArrayDict { order, monoid, buffer: Vec::new(), lower: 0 }
    }

    /// Adopt an already strictly sorted entry list.
    pub fn from_sorted(order: KeyOrder<K>, monoid: Monoid<V>, entries: Vec<(K, V)>) -> Self {
        debug_assert!(
            entries.windows(2).all(|w| order.cmp_unrecorded(&w[0].0, &w[1].0) < 0),
            "from_sorted requires strictly increasing keys"
        );
        instrument::record_alloc(entries.len() as u64);
        TunedArrayDict { order, monoid, buffer: entries, lower: 0 }
    }

    pub fn order(&self) -> &KeyOrder<K> {
        &self.order
    }

    pub fn monoid(&self) -> &Monoid<V> {
        &self.monoid
    }

    pub fn size(&self) -> usize {
        self.buffer.len() - self.lower
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.buffer.len()
    }

    /// Entries currently in view, in key order.
    pub fn slice(&self) -> &[(K, V)] {
        &self.buffer[self.lower..]
    }

    /// Entries between the lower bound and an absolute index.
    pub fn slice_to(&self, index: usize) -> &[(K, V)] {
        &self.buffer[self.lower..index]
    }

    pub fn entry_at(&self, index: usize) -> &(K, V) {
        &self.buffer[index]
    }

    /// The insertion position for keys greater than everything stored.
    pub fn end_hint(&self) -> PositionHint {
        PositionHint { index: self.buffer.len(), found: false }
    }

    pub fn is_end(&self, hint: &PositionHint) -> bool {
        !hint.found && hint.index == self.buffer.len()
    }

    /// Locate `key` in the current view with the chosen strategy.
    pub fn seek(&self, key: &K, method: SeekMethod) -> PositionHint {
        self.order.assert_user_key(key);
        match method {
            SeekMethod::Linear => {
                let mut i = self.lower;
                loop {
                    if i >= self.buffer.len() {
                        return PositionHint { index: i, found: false };
                    }
                    let side = self.order.cmp(&self.buffer[i].0, key);
                    if side < 0 {
                        i += 1;
                    } else {
                        return PositionHint { index: i, found: side == 0 };
                    }
                }
            }
            SeekMethod::Binary => {
                let mut lo = self.lower;
                let mut hi = self.buffer.len();
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    let side = self.order.cmp(&self.buffer[mid].0, key);
                    if side < 0 {
                        lo = mid + 1;
                    } else if side > 0 {
                        hi = mid;
                    } else {
                        return PositionHint { index: mid, found: true };
                    }
                }
                PositionHint { index: lo, found: false }
            }
        }
    }

    /// Drop everything at or before the hinted position from the view.
    pub fn after_inplace(&mut self, hint: PositionHint) {
        self.lower = hint.index + usize::from(hint.found);
        debug_assert!(self.lower <= self.buffer.len());
    }

    /// Combine or splice at the hinted position; returns the position one
    /// past the affected entry, which is the valid insertion hint for the
    /// next strictly greater key (append-style loops stay amortized O(1)).
    pub fn insert_hint_inplace(&mut self, hint: PositionHint, key: &K, value: &V) -> PositionHint {
        self.debug_check_position(&hint, key);
        if hint.found {
            let old = &self.buffer[hint.index].1;
            let combined = self.monoid.combine(old, value);
            self.buffer[hint.index] = (key.clone(), combined);
        } else {
            instrument::record_moves((self.buffer.len() - hint.index + 1) as u64);
            self.buffer.insert(hint.index, (key.clone(), value.clone()));
        }
        PositionHint { index: hint.index + 1, found: false }
    }

    /// Seek-then-insert convenience.
    pub fn insert(&mut self, key: &K, value: &V, method: SeekMethod) {
        let hint = self.seek(key, method);
        self.insert_hint_inplace(hint, key, value);
    }

    /// The stored value, or the monoid zero when absent.
    pub fn find(&self, key: &K, method: SeekMethod) -> V {
        let hint = self.seek(key, method);
        if hint.found {
            self.buffer[hint.index].1.clone()
        } else {
            self.monoid.zero()
        }
    }

    /// Remove `key` if present; absent keys are a no-op.
    pub fn delete(&mut self, key: &K, method: SeekMethod) {
        let hint = self.seek(key, method);
        self.delete_hint_inplace(hint);
    }

    /// Remove the entry at a found position; not-found hints are a no-op.
    pub fn delete_hint_inplace(&mut self, hint: PositionHint) {
        if hint.found {
            instrument::record_moves((self.buffer.len() - hint.index - 1) as u64);
            self.buffer.remove(hint.index);
        }
    }

    /// Fold over the view, mutating the accumulator in place.
    pub fn inplace_fold_left<R, F: FnMut(&mut R, &K, &V)>(&self, acc: &mut R, mut op: F) {
        for (k, v) in self.slice() {
            op(acc, k, v);
        }
    }

    pub fn to_list(&self) -> Vec<(K, V)> {
        self.slice().to_vec()
    }

    /// Entries with a non-zero value.
    pub fn count(&self) -> usize {
        self.slice().iter().filter(|(_, v)| !self.monoid.is_zero(v)).count()
    }

    pub fn max_key(&self) -> Option<&K> {
        self.buffer.last().map(|(k, _)| k)
    }

    /// Stable debug rendering, same shape as the persistent backends.
    pub fn dump(&self) -> String
    where
        K: Debug,
        V: Debug,
    {
        let mut out = String::from("{");
        for (i, (k, v)) in self.slice().iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&format!("{:?}:{:?}", k, v));
        }
        out.push('}');
        out
    }

    fn debug_check_position(&self, hint: &PositionHint, key: &K) {
        if cfg!(debug_assertions) {
            assert!(hint.index >= self.lower && hint.index <= self.buffer.len());
            if hint.found {
                assert!(
                    self.order.cmp_unrecorded(&self.buffer[hint.index].0, key) == 0,
                    "position hint precondition violated: found flag points elsewhere"
                );
            } else {
                if hint.index > self.lower {
                    assert!(
                        self.order.cmp_unrecorded(&self.buffer[hint.index - 1].0, key) < 0,
                        "position hint precondition violated: predecessor not below key"
                    );
                }
                if hint.index < self.buffer.len() {
                    assert!(
                        self.order.cmp_unrecorded(&self.buffer[hint.index].0, key) > 0,
                        "position hint precondition violated: successor not above key"
                    );
                }
            }
        }
    }
}
