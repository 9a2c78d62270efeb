//! Thread-local operation counters used by the benchmark harness and by the
//! asymptotic property tests.
//!
//! Three counters are tracked per thread:
//!
//! * comparator calls — every key comparison issued through [`KeyOrder::cmp`]
//!   (`crate::algebra::KeyOrder::cmp`) or through a [`CountingKey`] wrapped in
//!   a standard ordered container,
//! * element moves — entries shifted or appended inside array buffers
//!   (reallocation copies performed by the allocator are not counted),
//! * allocation events — elements or tree nodes freshly allocated.
//!
//! Benchmarks reset the counters right before the measured section and read
//! them right after; all library code merely increments.

use std::cell::Cell;
use std::cmp::Ordering;

thread_local! {
    static CMP_CALLS: Cell<u64> = const { Cell::new(0) };
    static ELEMENT_MOVES: Cell<u64> = const { Cell::new(0) };
    static ALLOC_EVENTS: Cell<u64> = const { Cell::new(0) };
    static LEFT_ROTATIONS: Cell<u64> = const { Cell::new(0) };
    static RIGHT_ROTATIONS: Cell<u64> = const { Cell::new(0) };
}

/// Reset all counters of the current thread to zero.
pub fn reset() {
    CMP_CALLS.with(|c| c.set(0));
    ELEMENT_MOVES.with(|c| c.set(0));
    ALLOC_EVENTS.with(|c| c.set(0));
    LEFT_ROTATIONS.with(|c| c.set(0));
    RIGHT_ROTATIONS.with(|c| c.set(0));
}

/// Comparator calls since the last [`reset`] on this thread.
pub fn comparator_calls() -> u64 {
    CMP_CALLS.with(|c| c.get())
}

/// Array element moves since the last [`reset`] on this thread.
pub fn element_moves() -> u64 {
    ELEMENT_MOVES.with(|c| c.get())
}

/// Allocated elements/nodes since the last [`reset`] on this thread.
pub fn alloc_events() -> u64 {
    ALLOC_EVENTS.with(|c| c.get())
}

/// Left/right tree rotations since the last [`reset`] on this thread.
pub fn rotations() -> (u64, u64) {
    (LEFT_ROTATIONS.with(|c| c.get()), RIGHT_ROTATIONS.with(|c| c.get()))
}

#[inline]
pub fn record_compare() {
    CMP_CALLS.with(|c| c.set(c.get() + 1));
}

#[inline]
pub fn record_left_rotation() {
    LEFT_ROTATIONS.with(|c| c.set(c.get() + 1));
}

#[inline]
pub fn record_right_rotation() {
    RIGHT_ROTATIONS.with(|c| c.set(c.get() + 1));
}

#[inline]
pub fn record_moves(n: u64) {
    ELEMENT_MOVES.with(|c| c.set(c.get() + n));
}

#[inline]
pub fn record_alloc(n: u64) {
    ALLOC_EVENTS.with(|c| c.set(c.get() + n));
}

/// Compare two values through `Ord` while bumping the comparator counter.
///
/// Used by the merge baseline, which walks plain sorted slices.
#[inline]
pub fn counted_cmp<T: Ord>(a: &T, b: &T) -> Ordering {
    record_compare();
    a.cmp(b)
}

/// Key wrapper whose `Ord` implementation bumps the comparator counter.
///
/// Wrapping the key type of a `BTreeMap`/`BTreeSet` makes the standard
/// ordered containers report their comparison work through the same counter
/// as the hinted backends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountingKey<T>(pub T);

impl<T: Ord> Ord for CountingKey<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        record_compare();
        self.0.cmp(&other.0)
    }
}

impl<T: Ord> PartialOrd for CountingKey<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn counters_accumulate_and_reset() {
        reset();
        record_compare();
        record_compare();
        record_moves(5);
        record_alloc(3);
        assert_eq!(comparator_calls(), 2);
        assert_eq!(element_moves(), 5);
        assert_eq!(alloc_events(), 3);
        reset();
        assert_eq!(comparator_calls(), 0);
        assert_eq!(element_moves(), 0);
        assert_eq!(alloc_events(), 0);
    }

    #[test]
    fn counting_key_reports_btree_work() {
        reset();
        let mut set = BTreeSet::new();
        for k in 0..64i64 {
            set.insert(CountingKey(k));
        }
        let inserts = comparator_calls();
        assert!(inserts > 0);
        set.contains(&CountingKey(13));
        assert!(comparator_calls() > inserts);
    }
}
