//! Two-collection workloads built on hinted seeks.
//!
//! All kernels share one pattern: iterate the first operand while a hint
//! chain narrows the second, so that every element of either input is
//! touched a bounded number of times. The combining rules are parameterized,
//! which collapses the classic workloads into three kernels:
//!
//! * key-union combining matched values with the dictionary's own monoid —
//!   set union (boolean-or dictionaries) and sparse-vector addition
//!   (float-add dictionaries);
//! * key-intersection combining matched values with a separate product
//!   monoid — set intersection (boolean-and) and element-wise vector
//!   multiplication (float-mul);
//! * key-difference keeping the first operand's unmatched entries;
//! * the inner product, a fused intersection that reduces straight to a
//!   scalar.
//!
//! Matching is observational: a key counts as present in the second operand
//! when seeking it returns a non-zero value. Entries that store the monoid
//! zero are therefore invisible to intersection and difference, and results
//! may legitimately contain zero-valued entries (for example an and-combined
//! `false`); cardinality is always reported through `count`, which skips
//! them.
//!
//! Every kernel exists in two generic forms — a sequential fold (`_fold_left`)
//! and a divide-and-conquer fold (`_fold_tree`) — plus a `_hinted` form for
//! the mutating tuned arrays, which is the per-element loop with positional
//! hints. All forms agree on every backend for the same inputs.

use crate::algebra::Monoid;
use crate::array::{PositionHint, SeekMethod, TunedArrayDict};
use crate::dict::HintedDict;

/// Result-or-input marker threaded through the tree folds: leaves of the
/// recursion receive untouched parts of the second operand and must be
/// distinguishable from already-merged results.
enum Part<D> {
    Input(D),
    Merged(D),
}

fn settle<B: HintedDict>(backend: &B, part: Part<B::Dict>, keep_unmatched: bool) -> B::Dict {
    match part {
        Part::Merged(d) => d,
        Part::Input(d) => {
            if keep_unmatched {
                d
            } else {
                backend.empty()
            }
        }
    }
}

/// Divide-and-conquer merge over the first operand; the second operand flows
/// down the recursion as seek-partitioned state and resurfaces in the
/// leaves.
///
/// `node_value(key, v1, v2_or_zero)` decides what lands in the result for a
/// key of the first operand: `Some(value)` joins it in, `None` drops it.
/// `keep_unmatched` decides the fate of second-operand keys never seeked.
pub fn merge_fold_tree<B, F>(
    backend: &B,
    first: &B::Dict,
    second: B::Dict,
    keep_unmatched: bool,
    node_value: F,
) -> B::Dict
where
    B: HintedDict,
    F: Fn(&B::Key, &B::Value, &B::Value) -> Option<B::Value>,
{
    let merged = backend.fold_tree(
        first,
        Part::Input(second),
        &|key, _v, part| {
            let state = match part {
                Part::Input(d) => d,
                Part::Merged(_) => unreachable!("merge states flow down as inputs"),
            };
            let hint = backend.seek(&state, key);
            (Part::Input(backend.before(&hint)), Part::Input(backend.after(&hint)), hint)
        },
        &|key, v, hint, left, right| {
            let left = settle(backend, left, keep_unmatched);
            let right = settle(backend, right, keep_unmatched);
            match node_value(key, v, &hint.value) {
                Some(value) => Part::Merged(backend.join(left, key, &value, right)),
                None => Part::Merged(backend.append(left, right)),
            }
        },
    );
    settle(backend, merged, keep_unmatched)
}

/// Sequential merge: fold over the first operand carrying the still-unseen
/// suffix of the second, appending at the end of the result as keys arrive
/// in order.
pub fn merge_fold_left<B, F>(
    backend: &B,
    first: &B::Dict,
    second: B::Dict,
    keep_unmatched: bool,
    node_value: F,
) -> B::Dict
where
    B: HintedDict,
    F: Fn(&B::Key, &B::Value, &B::Value) -> Option<B::Value>,
{
    let (result, rest) = backend.fold_left(
        first,
        (backend.empty(), second),
        |(mut result, rest), key, v| {
            let hint = backend.seek(&rest, key);
            if keep_unmatched {
                let skipped = backend.before(&hint);
                result = backend.append(result, skipped);
            }
            if let Some(value) = node_value(key, v, &hint.value) {
                let end = backend.end(&result);
                result = backend.insert_hint(result, end, key, &value);
            }
            let rest = backend.after(&hint);
            (result, rest)
        },
    );
    if keep_unmatched {
        backend.append(result, rest)
    } else {
        result
    }
}

/// Key-union; matched values combine through the dictionary monoid, one-sided
/// keys keep their value (combining with zero).
pub fn union_fold_tree<B: HintedDict>(backend: &B, first: &B::Dict, second: B::Dict) -> B::Dict {
    merge_fold_tree(backend, first, second, true, |_, v, w| {
        Some(backend.monoid().combine(v, w))
    })
}

/// Sequential form of [`union_fold_tree`].
pub fn union_fold_left<B: HintedDict>(backend: &B, first: &B::Dict, second: B::Dict) -> B::Dict {
    merge_fold_left(backend, first, second, true, |_, v, w| {
        Some(backend.monoid().combine(v, w))
    })
}

/// Key-intersection; kept keys combine through `product`.
pub fn intersect_fold_tree<B: HintedDict>(
    backend: &B,
    product: &Monoid<B::Value>,
    first: &B::Dict,
    second: B::Dict,
) -> B::Dict {
    merge_fold_tree(backend, first, second, false, |_, v, w| {
        if backend.monoid().is_zero(w) {
            None
        } else {
            Some(product.combine(v, w))
        }
    })
}

/// Sequential form of [`intersect_fold_tree`].
pub fn intersect_fold_left<B: HintedDict>(
    backend: &B,
    product: &Monoid<B::Value>,
    first: &B::Dict,
    second: B::Dict,
) -> B::Dict {
    merge_fold_left(backend, first, second, false, |_, v, w| {
        if backend.monoid().is_zero(w) {
            None
        } else {
            Some(product.combine(v, w))
        }
    })
}

/// Keys of the first operand whose seek into the second finds zero.
pub fn difference_fold_tree<B: HintedDict>(
    backend: &B,
    first: &B::Dict,
    second: B::Dict,
) -> B::Dict {
    merge_fold_tree(backend, first, second, false, |_, v, w| {
        if backend.monoid().is_zero(w) {
            Some(v.clone())
        } else {
            None
        }
    })
}

/// Sequential form of [`difference_fold_tree`].
pub fn difference_fold_left<B: HintedDict>(
    backend: &B,
    first: &B::Dict,
    second: B::Dict,
) -> B::Dict {
    merge_fold_left(backend, first, second, false, |_, v, w| {
        if backend.monoid().is_zero(w) {
            Some(v.clone())
        } else {
            None
        }
    })
}

/// Sum over shared keys of `product`-combined values; the fold carries the
/// accumulator together with the shrinking suffix of the second operand.
pub fn inner_product_fold_left<B: HintedDict>(
    backend: &B,
    product: &Monoid<B::Value>,
    first: &B::Dict,
    second: B::Dict,
) -> B::Value {
    let (acc, _rest) = backend.fold_left(
        first,
        (backend.monoid().zero(), second),
        |(acc, rest), key, v| {
            let hint = backend.seek(&rest, key);
            let term = product.combine(v, &hint.value);
            let acc = backend.monoid().combine(&acc, &term);
            (acc, backend.after(&hint))
        },
    );
    acc
}

enum InnerPart<D, V> {
    Input(D),
    Sum(V),
}

/// Divide-and-conquer form of [`inner_product_fold_left`]; partial sums
/// combine around each focused entry, untouched second-operand parts
/// contribute nothing.
pub fn inner_product_fold_tree<B: HintedDict>(
    backend: &B,
    product: &Monoid<B::Value>,
    first: &B::Dict,
    second: B::Dict,
) -> B::Value {
    let zero = backend.monoid().zero();
    let folded = backend.fold_tree(
        first,
        InnerPart::Input(second),
        &|key, _v, part| {
            let state = match part {
                InnerPart::Input(d) => d,
                InnerPart::Sum(_) => unreachable!("inner-product states flow down as inputs"),
            };
            let hint = backend.seek(&state, key);
            (
                InnerPart::Input(backend.before(&hint)),
                InnerPart::Input(backend.after(&hint)),
                hint,
            )
        },
        &|_key, v, hint, left, right| {
            let left = match left {
                InnerPart::Sum(s) => s,
                InnerPart::Input(_) => zero.clone(),
            };
            let right = match right {
                InnerPart::Sum(s) => s,
                InnerPart::Input(_) => zero.clone(),
            };
            let term = product.combine(v, &hint.value);
            let partial = backend.monoid().combine(&left, &term);
            InnerPart::Sum(backend.monoid().combine(&partial, &right))
        },
    );
    match folded {
        InnerPart::Sum(s) => s,
        InnerPart::Input(_) => zero,
    }
}

// ----------------------------------------------------------------------
// Tuned-array forms: the per-element loop with positional hints. The second
// operand is consumed — its lower bound advances past handled entries.
// ----------------------------------------------------------------------

/// Per-element merge over tuned arrays; the result is built by appending
/// through returned insertion hints, so each output entry costs amortized
/// constant work on top of the seeks.
pub fn merge_hinted<K, V, F>(
    first: &TunedArrayDict<K, V>,
    mut second: TunedArrayDict<K, V>,
    keep_unmatched: bool,
    method: SeekMethod,
    node_value: F,
) -> TunedArrayDict<K, V>
where
    K: Clone,
    V: Clone + PartialEq,
    F: Fn(&K, &V, &V) -> Option<V>,
{
    let zero = first.monoid().zero();
    let mut result = TunedArrayDict::new(first.order().clone(), first.monoid().clone());
    let mut out: PositionHint = result.end_hint();
    for (key, v) in first.slice() {
        let hint = second.seek(key, method);
        if keep_unmatched {
            for i in second.lower()..hint.index {
                let (k, w) = second.entry_at(i).clone();
                out = result.insert_hint_inplace(out, &k, &w);
            }
        }
        let matched = if hint.found { second.entry_at(hint.index).1.clone() } else { zero.clone() };
        if let Some(value) = node_value(key, v, &matched) {
            out = result.insert_hint_inplace(out, key, &value);
        }
        second.after_inplace(hint);
    }
    if keep_unmatched {
        for i in second.lower()..second.upper() {
            let (k, w) = second.entry_at(i).clone();
            out = result.insert_hint_inplace(out, &k, &w);
        }
    }
    result
}

/// Tuned form of [`union_fold_left`].
pub fn union_hinted<K, V>(
    first: &TunedArrayDict<K, V>,
    second: TunedArrayDict<K, V>,
    method: SeekMethod,
) -> TunedArrayDict<K, V>
where
    K: Clone,
    V: Clone + PartialEq,
{
    let monoid = first.monoid().clone();
    merge_hinted(first, second, true, method, |_, v, w| Some(monoid.combine(v, w)))
}

/// Tuned form of [`intersect_fold_left`].
pub fn intersect_hinted<K, V>(
    product: &Monoid<V>,
    first: &TunedArrayDict<K, V>,
    second: TunedArrayDict<K, V>,
    method: SeekMethod,
) -> TunedArrayDict<K, V>
where
    K: Clone,
    V: Clone + PartialEq,
{
    let monoid = first.monoid().clone();
    merge_hinted(first, second, false, method, |_, v, w| {
        if monoid.is_zero(w) {
            None
        } else {
            Some(product.combine(v, w))
        }
    })
}

/// Tuned form of [`difference_fold_left`].
pub fn difference_hinted<K, V>(
    first: &TunedArrayDict<K, V>,
    second: TunedArrayDict<K, V>,
    method: SeekMethod,
) -> TunedArrayDict<K, V>
where
    K: Clone,
    V: Clone + PartialEq,
{
    let monoid = first.monoid().clone();
    merge_hinted(first, second, false, method, |_, v, w| {
        if monoid.is_zero(w) {
            Some(v.clone())
        } else {
            None
        }
    })
}

/// Tuned form of [`inner_product_fold_left`].
pub fn inner_product_hinted<K, V>(
    product: &Monoid<V>,
    first: &TunedArrayDict<K, V>,
    mut second: TunedArrayDict<K, V>,
    method: SeekMethod,
) -> V
where
    K: Clone,
    V: Clone + PartialEq,
{
    let monoid = first.monoid().clone();
    let mut acc = monoid.zero();
    for (key, v) in first.slice() {
        let hint = second.seek(key, method);
        if hint.found {
            let term = product.combine(v, &second.entry_at(hint.index).1);
            acc = monoid.combine(&acc, &term);
        }
        second.after_inplace(hint);
    }
    acc
}
