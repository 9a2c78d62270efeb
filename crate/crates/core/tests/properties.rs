//! Contract laws checked uniformly across every persistent backend.

use hinted_dict::algebra::{monoids, orders, Monoid};
use hinted_dict::array::ArrayDict;
use hinted_dict::dict::{map_reduce_tree, HintedDict};
use hinted_dict::oracle::ModelDict;
use hinted_dict::tree::{AvlDict, UnbalancedDict, WbbDict};
use proptest::prelude::*;

type Entry = (i64, i64);

fn array_backend() -> ArrayDict<i64, i64> {
    ArrayDict::new(orders::int64(), monoids::i64_add())
}

fn unbalanced_backend() -> UnbalancedDict<i64, i64> {
    UnbalancedDict::new(orders::int64(), monoids::i64_add())
}

fn avl_backend() -> AvlDict<i64, i64> {
    AvlDict::new(orders::int64(), monoids::i64_add())
}

fn wbb_backend() -> WbbDict<i64, i64> {
    WbbDict::new(orders::int64(), monoids::i64_add())
}

/// Run one generic check against all four persistent backends.
fn on_all_backends(check: impl Fn(&dyn Check)) {
    check(&array_backend());
    check(&unbalanced_backend());
    check(&avl_backend());
    check(&wbb_backend());
}

/// Object-safe adapter so a single closure can visit differently typed
/// backends.
trait Check {
    fn build(&self, entries: &[Entry]) -> Box<dyn BuiltOps + '_>;
}

trait BuiltOps {
    fn insert(&mut self, key: i64, value: i64);
    fn delete(&mut self, key: i64);
    fn find(&self, key: i64) -> i64;
    fn to_list(&self) -> Vec<Entry>;
    fn size(&self) -> usize;
    fn count(&self) -> usize;
    fn fold_left_keys(&self) -> Vec<i64>;
    fn fold_left_seeded(&self, z: i64) -> i64;
    fn map_reduce_left_sum(&self) -> i64;
    fn map_reduce_tree_sum(&self) -> i64;
    fn to_list_via_aggregate(&self) -> Vec<Entry>;
    fn to_list_via_fold_tree(&self) -> Vec<Entry>;
    fn aggregate_size(&self) -> i64;
    fn seek_parts(&self, key: i64) -> (Vec<Entry>, (i64, i64), Vec<Entry>);
    fn seek_then_insert(&mut self, key: i64, value: i64);
    fn seek_then_delete(&mut self, key: i64);
    fn seek_then_find(&self, key: i64) -> i64;
    fn next_chain(&self) -> Vec<Entry>;
    fn end_is_absorbing(&self) -> bool;
    fn end_parts(&self) -> (Vec<Entry>, Vec<Entry>);
    fn current_of_end(&self) -> (i64, i64);
    fn current_of_begin(&self) -> Option<(i64, i64)>;
    fn successor_after_seek(&self, key: i64) -> Option<i64>;
    fn append_disjoint(&mut self, entries: &[Entry]);
    fn join_with(&mut self, key: i64, value: i64, entries: &[Entry]);
    fn dump(&self) -> String;
}

struct TypedOps<'a, B: HintedDict<Key = i64, Value = i64>> {
    backend: &'a B,
    dict: B::Dict,
}

impl<B: HintedDict<Key = i64, Value = i64>> TypedOps<'_, B> {
    fn take(&mut self) -> B::Dict {
        std::mem::replace(&mut self.dict, self.backend.empty())
    }

    fn build(&self, entries: &[Entry]) -> B::Dict {
        let mut d = self.backend.empty();
        for (k, v) in entries {
            d = self.backend.insert(d, k, v);
        }
        d
    }
}

impl<B: HintedDict<Key = i64, Value = i64>> BuiltOps for TypedOps<'_, B> {
    fn insert(&mut self, key: i64, value: i64) {
        let d = self.take();
        self.dict = self.backend.insert(d, &key, &value);
    }

    fn delete(&mut self, key: i64) {
        let d = self.take();
        self.dict = self.backend.delete(d, &key);
    }

    fn find(&self, key: i64) -> i64 {
        self.backend.find(&self.dict, &key)
    }

    fn to_list(&self) -> Vec<Entry> {
        self.backend.to_list(&self.dict)
    }

    fn size(&self) -> usize {
        self.backend.size(&self.dict)
    }

    fn count(&self) -> usize {
        self.backend.count(&self.dict)
    }

    fn fold_left_keys(&self) -> Vec<i64> {
        self.backend.fold_left(&self.dict, Vec::new(), |mut acc, k, _| {
            acc.push(*k);
            acc
        })
    }

    fn fold_left_seeded(&self, z: i64) -> i64 {
        self.backend.fold_left(&self.dict, z, |acc, _, _| acc)
    }

    fn map_reduce_left_sum(&self) -> i64 {
        self.backend.map_reduce(&self.dict, 0i64, |_, v| *v, |a, b| a + b)
    }

    fn map_reduce_tree_sum(&self) -> i64 {
        map_reduce_tree(self.backend, &self.dict, 0i64, |_, v| *v, |a, b| a + b)
    }

    fn to_list_via_aggregate(&self) -> Vec<Entry> {
        let list: Monoid<Vec<Entry>> = monoids::list_append();
        self.backend.aggregate(&self.dict, &list, |k, v| vec![(*k, *v)])
    }

    fn to_list_via_fold_tree(&self) -> Vec<Entry> {
        map_reduce_tree(
            self.backend,
            &self.dict,
            Vec::new(),
            |k, v| vec![(*k, *v)],
            |mut a, b| {
                a.extend(b);
                a
            },
        )
    }

    fn aggregate_size(&self) -> i64 {
        self.backend.aggregate(&self.dict, &monoids::i64_add(), |_, _| 1)
    }

    fn seek_parts(&self, key: i64) -> (Vec<Entry>, (i64, i64), Vec<Entry>) {
        let hint = self.backend.seek(&self.dict, &key);
        (
            self.backend.to_list(&self.backend.before(&hint)),
            self.backend.current(&hint),
            self.backend.to_list(&self.backend.after(&hint)),
        )
    }

    fn seek_then_insert(&mut self, key: i64, value: i64) {
        let hint = self.backend.seek(&self.dict, &key);
        let d = self.take();
        self.dict = self.backend.insert_hint(d, hint, &key, &value);
    }

    fn seek_then_delete(&mut self, key: i64) {
        let hint = self.backend.seek(&self.dict, &key);
        let d = self.take();
        self.dict = self.backend.delete_hint(d, hint, &key);
    }

    fn seek_then_find(&self, key: i64) -> i64 {
        let hint = self.backend.seek(&self.dict, &key);
        self.backend.find_hint(&self.dict, &hint, &key)
    }

    fn next_chain(&self) -> Vec<Entry> {
        let mut out = Vec::new();
        let mut hint = self.backend.begin(&self.dict);
        while !self.backend.is_end(&self.dict, &hint) {
            out.push(self.backend.current(&hint));
            hint = self.backend.next(&self.dict, &hint);
        }
        out
    }

    fn end_is_absorbing(&self) -> bool {
        let end = self.backend.end(&self.dict);
        let advanced = self.backend.next(&self.dict, &end);
        self.backend.is_end(&self.dict, &end) && self.backend.is_end(&self.dict, &advanced)
    }

    fn end_parts(&self) -> (Vec<Entry>, Vec<Entry>) {
        let end = self.backend.end(&self.dict);
        (
            self.backend.to_list(&self.backend.before(&end)),
            self.backend.to_list(&self.backend.after(&end)),
        )
    }

    fn current_of_end(&self) -> (i64, i64) {
        let end = self.backend.end(&self.dict);
        self.backend.current(&end)
    }

    fn current_of_begin(&self) -> Option<(i64, i64)> {
        let begin = self.backend.begin(&self.dict);
        if self.backend.is_end(&self.dict, &begin) {
            None
        } else {
            Some(self.backend.current(&begin))
        }
    }

    fn successor_after_seek(&self, key: i64) -> Option<i64> {
        let hint = self.backend.seek(&self.dict, &key);
        let next = self.backend.next(&self.dict, &hint);
        if self.backend.is_end(&self.dict, &next) {
            None
        } else {
            Some(self.backend.current(&next).0)
        }
    }

    fn append_disjoint(&mut self, entries: &[Entry]) {
        let right = self.build(entries);
        let left = self.take();
        self.dict = self.backend.append(left, right);
    }

    fn join_with(&mut self, key: i64, value: i64, entries: &[Entry]) {
        let right = self.build(entries);
        let left = self.take();
        self.dict = self.backend.join(left, &key, &value, right);
    }

    fn dump(&self) -> String {
        self.backend.dump(&self.dict)
    }
}

macro_rules! impl_check {
    ($ty:ty) => {
        impl Check for $ty {
            fn build(&self, entries: &[Entry]) -> Box<dyn BuiltOps + '_> {
                let mut ops = TypedOps { backend: self, dict: self.empty() };
                for (k, v) in entries {
                    ops.insert(*k, *v);
                }
                Box::new(ops)
            }
        }
    };
}

impl_check!(ArrayDict<i64, i64>);
impl_check!(UnbalancedDict<i64, i64>);
impl_check!(AvlDict<i64, i64>);
impl_check!(WbbDict<i64, i64>);

fn model_of(entries: &[Entry]) -> ModelDict<i64, i64> {
    let order = orders::int64();
    let monoid = monoids::i64_add();
    let mut m = ModelDict::new();
    for (k, v) in entries {
        m.insert(&order, &monoid, k, v);
    }
    m
}

// ----------------------------------------------------------------------
// Pinned examples
// ----------------------------------------------------------------------

#[test]
fn find_returns_zero_or_combined_values() {
    on_all_backends(|b| {
        let empty = b.build(&[]);
        assert_eq!(empty.find(5), 0);

        let single = b.build(&[(5, 3)]);
        assert_eq!(single.find(5), 3);

        let combined = b.build(&[(5, 3), (5, 4)]);
        assert_eq!(combined.find(5), 7);
    });
}

#[test]
fn insert_stores_zero_valued_entries() {
    on_all_backends(|b| {
        let d = b.build(&[(9, 0)]);
        assert_eq!(d.to_list(), vec![(9, 0)]);
        assert_eq!(d.size(), 1);
        assert_eq!(d.count(), 0);
    });
}

#[test]
fn delete_examples() {
    on_all_backends(|b| {
        let mut d = b.build(&[(1, 10)]);
        d.delete(1);
        assert_eq!(d.to_list(), vec![]);

        let mut e = b.build(&[]);
        e.delete(9);
        assert_eq!(e.to_list(), vec![]);

        let mut three = b.build(&[(1, 1), (2, 2), (3, 3)]);
        three.delete(2);
        assert_eq!(three.to_list(), vec![(1, 1), (3, 3)]);
    });
}

#[test]
fn single_and_size_count_examples() {
    on_all_backends(|b| {
        let single = b.build(&[(4, 7)]);
        assert_eq!(single.to_list(), vec![(4, 7)]);
        assert_eq!(single.find(4), 7);
        assert_eq!(single.size(), 1);

        assert_eq!(b.build(&[]).size(), 0);

        let mixed = b.build(&[(1, 0), (2, 5)]);
        assert_eq!(mixed.size(), 2);
        assert_eq!(mixed.count(), 1);

        // size of a disjoint append is the sum of the sizes
        let mut left = b.build(&[(1, 1), (2, 1), (3, 1)]);
        left.append_disjoint(&[(10, 1), (11, 1), (12, 1), (13, 1)]);
        assert_eq!(left.size(), 7);
    });
}

#[test]
fn iteration_examples() {
    on_all_backends(|b| {
        let empty = b.build(&[]);
        assert_eq!(empty.fold_left_seeded(7), 7);
        assert_eq!(empty.map_reduce_left_sum(), 0);

        let d = b.build(&[(1, 2), (3, 4)]);
        assert_eq!(d.map_reduce_left_sum(), 6);

        let ordered = b.build(&[(2, 20), (1, 10), (3, 30)]);
        assert_eq!(ordered.fold_left_keys(), vec![1, 2, 3]);
        assert_eq!(ordered.to_list_via_aggregate(), vec![(1, 10), (2, 20), (3, 30)]);
        assert_eq!(ordered.to_list_via_fold_tree(), ordered.to_list());
        assert_eq!(ordered.aggregate_size(), 3);
    });
}

#[test]
fn fold_tree_closed_form_sums() {
    on_all_backends(|b| {
        for n in [0i64, 1, 5, 64] {
            let entries: Vec<Entry> = (1..=n).map(|k| (k, 1)).collect();
            let d = b.build(&entries);
            assert_eq!(d.map_reduce_tree_sum(), n);
        }
    });
}

#[test]
fn hint_examples() {
    on_all_backends(|b| {
        // begin(empty) = end(empty)
        let empty = b.build(&[]);
        assert!(empty.current_of_begin().is_none());
        assert!(empty.end_is_absorbing());

        let d = b.build(&[(1, 10), (2, 20)]);
        assert_eq!(d.current_of_begin(), Some((1, 10)));
        assert_eq!(d.current_of_end(), (i64::MAX, 0));
        // the end hint keeps the whole dictionary on its left, nothing on its right
        let (before_end, after_end) = d.end_parts();
        assert_eq!(before_end, d.to_list());
        assert_eq!(after_end, vec![]);
        assert!(d.end_is_absorbing());

        // next chain visits entries in increasing key order
        let three = b.build(&[(2, 2), (1, 1), (3, 3)]);
        assert_eq!(three.next_chain(), vec![(1, 1), (2, 2), (3, 3)]);
        // next after seek focuses the least key greater than the probe
        assert_eq!(three.successor_after_seek(1), Some(2));
        assert_eq!(three.successor_after_seek(2), Some(3));
        assert_eq!(three.successor_after_seek(3), None);
    });
}

#[test]
fn seek_examples() {
    on_all_backends(|b| {
        let empty = b.build(&[]);
        let (below, at, above) = empty.seek_parts(7);
        assert_eq!((below, at, above), (vec![], (7, 0), vec![]));

        let d = b.build(&[(1, 10), (3, 30)]);
        let (below, at, above) = d.seek_parts(2);
        assert_eq!(below, vec![(1, 10)]);
        assert_eq!(at, (2, 0));
        assert_eq!(above, vec![(3, 30)]);

        let (_, at, _) = d.seek_parts(3);
        assert_eq!(at, (3, 30));
    });
}

#[test]
fn hinted_op_examples() {
    on_all_backends(|b| {
        let mut empty = b.build(&[]);
        empty.seek_then_insert(4, 9);
        assert_eq!(empty.to_list(), vec![(4, 9)]);

        let mut d = b.build(&[(1, 1), (5, 5)]);
        d.seek_then_delete(3);
        assert_eq!(d.to_list(), vec![(1, 1), (5, 5)]);

        let present = b.build(&[(5, 50)]);
        assert_eq!(present.seek_then_find(5), 50);
        assert_eq!(present.seek_then_find(4), 0);
    });
}

#[test]
fn join_examples() {
    on_all_backends(|b| {
        let mut empty = b.build(&[]);
        empty.join_with(4, 44, &[]);
        assert_eq!(empty.to_list(), vec![(4, 44)]);

        let mut one = b.build(&[(1, 10)]);
        one.join_with(2, 20, &[(3, 30)]);
        assert_eq!(one.to_list(), vec![(1, 10), (2, 20), (3, 30)]);
    });
}

#[test]
fn dump_is_braced_key_order() {
    on_all_backends(|b| {
        assert_eq!(b.build(&[]).dump(), "{}");
        assert_eq!(b.build(&[(2, 5), (1, 0)]).dump(), "{1:0, 2:5}");
    });
}

#[test]
fn string_keys_work_end_to_end() {
    let b = AvlDict::new(orders::fixed_width_strings(8), monoids::i64_add());
    let mut d = b.empty();
    for (k, v) in [("kiwi", 1), ("apple", 2), ("pear", 3), ("apple", 4)] {
        d = b.insert(d, &k.to_string(), &v);
    }
    assert_eq!(b.find(&d, &"apple".to_string()), 6);
    assert_eq!(b.find(&d, &"plum".to_string()), 0);
    let keys: Vec<String> = b.to_list(&d).into_iter().map(|(k, _)| k).collect();
    assert_eq!(keys, vec!["apple", "kiwi", "pear"]);

    let bounded = AvlDict::new(
        orders::bounded_strings("a".into(), "zzz".into()),
        monoids::i64_add(),
    );
    let d = bounded.single(&"melon".to_string(), &1);
    assert_eq!(bounded.size(&d), 1);
}

#[test]
#[should_panic(expected = "sentinel")]
fn seek_rejects_sentinels() {
    let b = avl_backend();
    let d = b.empty();
    let _ = b.seek(&d, &i64::MAX);
}

#[test]
#[should_panic(expected = "sentinel")]
fn insert_rejects_sentinels() {
    let b = array_backend();
    let _ = b.insert(b.empty(), &i64::MIN, &1);
}

// ----------------------------------------------------------------------
// Quantified laws
// ----------------------------------------------------------------------

fn entries_strategy() -> impl Strategy<Value = Vec<Entry>> {
    proptest::collection::vec((0i64..64, -3i64..=3), 0..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn seek_postcondition_holds(entries in entries_strategy(), key in 0i64..64) {
        on_all_backends(|b| {
            let built = b.build(&entries);
            let full = built.to_list();
            let (below, at, above) = built.seek_parts(key);
            assert_eq!(at.0, key);
            if let Some(last) = below.last() {
                assert!(last.0 < key);
            }
            if let Some(first) = above.first() {
                assert!(first.0 > key);
            }
            let mut reassembled = below.clone();
            let stored = full.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
            assert_eq!(at.1, stored.unwrap_or(0));
            if let Some(v) = stored {
                reassembled.push((key, v));
            }
            reassembled.extend(above.iter().cloned());
            assert_eq!(reassembled, full);
        });
    }

    #[test]
    fn insert_combine_law(entries in entries_strategy(), key in 0i64..64, value in -3i64..=3) {
        on_all_backends(|b| {
            let mut built = b.build(&entries);
            let before = built.find(key);
            built.insert(key, value);
            assert_eq!(built.find(key), before + value);
        });
    }

    #[test]
    fn insert_delete_roundtrip_on_absent_key(entries in entries_strategy(), key in 0i64..64, value in -3i64..=3) {
        on_all_backends(|b| {
            let mut built = b.build(&entries);
            let original = built.to_list();
            if original.iter().any(|(k, _)| *k == key) {
                return;
            }
            built.insert(key, value);
            built.delete(key);
            assert_eq!(built.to_list(), original);
        });
    }

    #[test]
    fn iteration_orders_agree(entries in entries_strategy()) {
        on_all_backends(|b| {
            let built = b.build(&entries);
            let list = built.to_list();
            let keys: Vec<i64> = list.iter().map(|(k, _)| *k).collect();
            assert_eq!(built.fold_left_keys(), keys);
            assert_eq!(built.next_chain(), list.clone());
            assert_eq!(built.to_list_via_fold_tree(), list.clone());
            assert_eq!(built.to_list_via_aggregate(), list);
        });
    }

    #[test]
    fn fold_routes_agree_for_commutative_reducers(entries in entries_strategy()) {
        on_all_backends(|b| {
            let built = b.build(&entries);
            assert_eq!(built.map_reduce_left_sum(), built.map_reduce_tree_sum());
        });
    }

    #[test]
    fn backend_matches_model_on_mixed_ops(entries in entries_strategy(), extra in entries_strategy()) {
        let order = orders::int64();
        let monoid = monoids::i64_add();
        on_all_backends(|b| {
            let mut built = b.build(&entries);
            let mut model = model_of(&entries);
            for (k, v) in &extra {
                if v % 2 == 0 {
                    built.insert(*k, *v);
                    model.insert(&order, &monoid, k, v);
                } else {
                    built.delete(*k);
                    model.delete(&order, k);
                }
                assert_eq!(built.to_list(), model.to_list());
                assert_eq!(built.size(), model.size());
                assert_eq!(built.count(), model.count(&monoid));
            }
        });
    }

    #[test]
    fn append_and_join_follow_the_splice_law(left in entries_strategy(), right in entries_strategy(), pivot in 100i64..128) {
        on_all_backends(|b| {
            // shift right-operand keys above the pivot
            let right: Vec<Entry> = right.iter().map(|(k, v)| (k + pivot + 1, *v)).collect();
            let mut built = b.build(&left);
            let mut expect = built.to_list();
            built.join_with(pivot, 7, &right);
            let right_model = model_of(&right).to_list();
            expect.push((pivot, 7));
            expect.extend(right_model);
            assert_eq!(built.to_list(), expect);
        });
    }
}
