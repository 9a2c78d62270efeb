//! Value monoids and key orders.
//!
//! Every dictionary in this crate is parameterized by two small algebra
//! values: a [`Monoid`] describing how values combine when a key is inserted
//! twice, and a [`KeyOrder`] giving a strict total order over keys together
//! with two sentinel keys bounding every admissible user key.
//!
//! Both are plain immutable values built from function pointers, so they can
//! be copied freely and shared across threads.

use crate::instrument;

/// A binary operation with an identity element over values of type `V`.
///
/// Laws expected from `op` (checked probabilistically in tests for every
/// instance shipped by [`monoids`]):
///
/// * associativity: `op(op(a, b), c) == op(a, op(b, c))`
/// * identity: `op(a, zero) == op(zero, a) == a`
///
/// An instance may additionally be flagged commutative, which promises
/// `op(a, b) == op(b, a)`. Order-agnostic reductions require the flag;
/// order-respecting folds over ordered dictionaries only need associativity.
#[derive(Clone, Debug)]
pub struct Monoid<V> {
    op: fn(&V, &V) -> V,
    zero: V,
    commutative: bool,
}

impl<V: Clone + PartialEq> Monoid<V> {
    /// A monoid whose operation is not promised to commute.
    pub fn new(op: fn(&V, &V) -> V, zero: V) -> Self {
        Monoid { op, zero, commutative: false }
    }

    /// A monoid flagged commutative.
    pub fn commutative(op: fn(&V, &V) -> V, zero: V) -> Self {
        Monoid { op, zero, commutative: true }
    }

    #[inline]
    pub fn combine(&self, a: &V, b: &V) -> V {
        (self.op)(a, b)
    }

    /// A fresh copy of the identity element.
    #[inline]
    pub fn zero(&self) -> V {
        self.zero.clone()
    }

    #[inline]
    pub fn is_zero(&self, v: &V) -> bool {
        *v == self.zero
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }
}

/// A strict total order over keys of type `K` plus global sentinel keys.
///
/// `compare` returns a signed integer; only its sign is meaningful. The
/// derived predicates [`lt`](Self::lt), [`gt`](Self::gt), [`lteq`](Self::lteq),
/// [`gteq`](Self::gteq) and [`equiv`](Self::equiv) follow the sign exactly.
///
/// `min` and `max` are sentinels: every key admitted to a dictionary must be
/// strictly greater than `min` and strictly less than `max`. The `max`
/// sentinel doubles as the focused key of end hints, which is why it has to
/// be a real key value.
#[derive(Clone, Debug)]
pub struct KeyOrder<K> {
    compare: fn(&K, &K) -> i32,
    min: K,
    max: K,
}

impl<K: Clone> KeyOrder<K> {
    pub fn new(compare: fn(&K, &K) -> i32, min: K, max: K) -> Self {
        KeyOrder { compare, min, max }
    }

    /// Compare two keys, bumping the thread-local comparator counter.
    #[inline]
    pub fn cmp(&self, a: &K, b: &K) -> i32 {
        instrument::record_compare();
        (self.compare)(a, b)
    }

    /// Compare without touching the comparator counter.
    ///
    /// Used for contract checks (sentinel rejection, debug hint validation)
    /// so that instrumented comparison counts reflect search work only.
    #[inline]
    pub fn cmp_unrecorded(&self, a: &K, b: &K) -> i32 {
        (self.compare)(a, b)
    }

    #[inline]
    pub fn lt(&self, a: &K, b: &K) -> bool {
        self.cmp(a, b) < 0
    }

    #[inline]
    pub fn gt(&self, a: &K, b: &K) -> bool {
        self.cmp(a, b) > 0
    }

    #[inline]
    pub fn lteq(&self, a: &K, b: &K) -> bool {
        self.cmp(a, b) <= 0
    }

    #[inline]
    pub fn gteq(&self, a: &K, b: &K) -> bool {
        self.cmp(a, b) >= 0
    }

    #[inline]
    pub fn equiv(&self, a: &K, b: &K) -> bool {
        self.cmp(a, b) == 0
    }

    pub fn min(&self) -> &K {
        &self.min
    }

    pub fn max(&self) -> &K {
        &self.max
    }

    /// True when the key collides with either sentinel.
    pub fn is_sentinel(&self, key: &K) -> bool {
        self.cmp_unrecorded(key, &self.min) == 0 || self.cmp_unrecorded(key, &self.max) == 0
    }

    /// Reject sentinel keys. Dictionaries call this on every externally
    /// supplied key; a violation is a contract error and panics.
    #[track_caller]
    pub fn assert_user_key(&self, key: &K) {
        assert!(
            !self.is_sentinel(key),
            "contract violation: key collides with an order sentinel"
        );
    }
}

/// Stock monoid instances.
///
/// Overflow policy of the integer instances follows the host build
/// configuration: debug builds panic on overflow, release builds wrap.
pub mod monoids {
    use super::Monoid;

    /// Boolean disjunction; zero is `false`. Set-union semantics.
    pub fn bool_or() -> Monoid<bool> {
        Monoid::commutative(|a, b| *a || *b, false)
    }

    /// Boolean conjunction; zero is `true`. Set-intersection semantics.
    pub fn bool_and() -> Monoid<bool> {
        Monoid::commutative(|a, b| *a && *b, true)
    }

    /// 64-bit integer addition; zero is `0`.
    pub fn i64_add() -> Monoid<i64> {
        Monoid::commutative(|a, b| a + b, 0)
    }

    /// 64-bit integer multiplication; zero is `1`.
    pub fn i64_mul() -> Monoid<i64> {
        Monoid::commutative(|a, b| a * b, 1)
    }

    /// 64-bit float addition; zero is `0.0`.
    pub fn f64_add() -> Monoid<f64> {
        Monoid::commutative(|a, b| a + b, 0.0)
    }

    /// 64-bit float multiplication; zero is `1.0`.
    pub fn f64_mul() -> Monoid<f64> {
        Monoid::commutative(|a, b| a * b, 1.0)
    }

    /// List concatenation; zero is the empty list. Not commutative.
    pub fn list_append<T: Clone + PartialEq>() -> Monoid<Vec<T>> {
        Monoid::new(
            |a, b| a.iter().chain(b.iter()).cloned().collect(),
            Vec::new(),
        )
    }
}

/// Stock key orders.
pub mod orders {
    use super::KeyOrder;

    fn cmp_i64(a: &i64, b: &i64) -> i32 {
        match a.cmp(b) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        }
    }

    /// Total order on `i64` with the machine extremes as sentinels.
    ///
    /// Admissible keys are `i64::MIN + 1 ..= i64::MAX - 1`.
    pub fn int64() -> KeyOrder<i64> {
        KeyOrder::new(cmp_i64, i64::MIN, i64::MAX)
    }

    fn cmp_string(a: &String, b: &String) -> i32 {
        match a.cmp(b) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        }
    }

    /// Lexicographic order on strings up to `width` characters.
    ///
    /// Sentinels are the empty string (lower) and `width` repetitions of
    /// `char::MAX` (upper); admissible keys are non-empty strings of at most
    /// `width` characters that are not all `char::MAX`.
    pub fn fixed_width_strings(width: usize) -> KeyOrder<String> {
        KeyOrder::new(
            cmp_string,
            String::new(),
            std::iter::repeat_n(char::MAX, width).collect(),
        )
    }

    /// Order on strings with caller-supplied sentinels.
    ///
    /// `min` must compare strictly below and `max` strictly above every key
    /// the dictionary will ever see.
    pub fn bounded_strings(min: String, max: String) -> KeyOrder<String> {
        KeyOrder::new(cmp_string, min, max)
    }
}
