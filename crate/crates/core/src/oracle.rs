//! Brute-force reference model and differential-testing harness.
//!
//! [`ModelDict`] is a sorted association list doing everything by full scans
//! and splices — deliberately free of search tricks so its behaviour is easy
//! to trust. [`run_differential`] replays a generated [`OpScript`] against a
//! real backend and the model in lockstep, comparing every observation, the
//! entry list, `size` and `count` after each step; on a mismatch it shrinks
//! the script to the shortest failing prefix.
//!
//! Scripts are fully determined by their seed: the generator simulates the
//! model while drawing operations so that preconditions (append/join key
//! disjointness and ordering) hold by construction. A failing run is
//! therefore pinned by the line `seed=<u64> ops=<count>`, the replay file
//! format.

use std::fmt::Write as _;
use std::mem;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{monoids, orders, KeyOrder, Monoid};
use crate::array::{SeekMethod, TunedArrayDict};
use crate::dict::HintedDict;

/// Sorted association list with naive linear-scan operations.
#[derive(Clone, Debug, Default)]
pub struct ModelDict<K, V> {
    entries: Vec<(K, V)>,
}

impl<K: Clone, V: Clone + PartialEq> ModelDict<K, V> {
    pub fn new() -> Self {
        ModelDict { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[(K, V)] {
        &self.entries
    }

    pub fn to_list(&self) -> Vec<(K, V)> {
        self.entries.clone()
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn count(&self, monoid: &Monoid<V>) -> usize {
        self.entries.iter().filter(|(_, v)| !monoid.is_zero(v)).count()
    }

    pub fn find(&self, order: &KeyOrder<K>, monoid: &Monoid<V>, key: &K) -> V {
        for (k, v) in &self.entries {
            if order.cmp_unrecorded(k, key) == 0 {
                return v.clone();
            }
        }
        monoid.zero()
    }

    /// Insert with monoid combine on collision; scans for the slot.
    pub fn insert(&mut self, order: &KeyOrder<K>, monoid: &Monoid<V>, key: &K, value: &V) {
        let mut i = 0;
        while i < self.entries.len() && order.cmp_unrecorded(&self.entries[i].0, key) < 0 {
            i += 1;
        }
        if i < self.entries.len() && order.cmp_unrecorded(&self.entries[i].0, key) == 0 {
            let combined = monoid.combine(&self.entries[i].1, value);
            self.entries[i].1 = combined;
        } else {
            self.entries.insert(i, (key.clone(), value.clone()));
        }
    }

    /// Remove `key` if present; absent keys are a no-op.
    pub fn delete(&mut self, order: &KeyOrder<K>, key: &K) {
        if let Some(i) =
            self.entries.iter().position(|(k, _)| order.cmp_unrecorded(k, key) == 0)
        {
            self.entries.remove(i);
        }
    }

    /// Split into entries below the key, the entry at it, entries above it.
    #[allow(clippy::type_complexity)]
    pub fn partition(&self, order: &KeyOrder<K>, key: &K) -> (Vec<(K, V)>, Option<V>, Vec<(K, V)>) {
        let mut below = Vec::new();
        let mut at = None;
        let mut above = Vec::new();
        for (k, v) in &self.entries {
            match order.cmp_unrecorded(k, key) {
                c if c < 0 => below.push((k.clone(), v.clone())),
                0 => at = Some(v.clone()),
                _ => above.push((k.clone(), v.clone())),
            }
        }
        (below, at, above)
    }

    /// Concatenate; the caller guarantees every key of `self` lies below
    /// every key of `other`.
    pub fn append(&mut self, order: &KeyOrder<K>, other: &[(K, V)]) {
        if let (Some((last, _)), Some((first, _))) = (self.entries.last(), other.first()) {
            assert!(
                order.cmp_unrecorded(last, first) < 0,
                "model append precondition violated"
            );
        }
        self.entries.extend(other.iter().cloned());
    }

    /// Splice `self ++ [(key, value)] ++ other`.
    pub fn join(&mut self, order: &KeyOrder<K>, key: &K, value: &V, other: &[(K, V)]) {
        if let Some((last, _)) = self.entries.last() {
            assert!(order.cmp_unrecorded(last, key) < 0, "model join precondition violated");
        }
        if let Some((first, _)) = other.first() {
            assert!(order.cmp_unrecorded(key, first) < 0, "model join precondition violated");
        }
        self.entries.push((key.clone(), value.clone()));
        self.entries.extend(other.iter().cloned());
    }
}

/// One step of a differential script. Keys live in a small domain so that
/// collisions, combines and deletions of present keys happen often; values
/// include the monoid zero.
#[derive(Clone, Debug, PartialEq)]
pub enum ScriptOp {
    Insert { key: i64, value: i64 },
    Delete { key: i64 },
    Find { key: i64 },
    SeekFind { key: i64 },
    SeekInsert { key: i64, value: i64 },
    SeekDelete { key: i64 },
    AppendWith { entries: Vec<(i64, i64)> },
    JoinWith { key: i64, value: i64, entries: Vec<(i64, i64)> },
    Fold,
}

/// A reproducible operation sequence; `ops` is fully determined by `seed`.
#[derive(Clone, Debug)]
pub struct OpScript {
    pub seed: u64,
    pub ops: Vec<ScriptOp>,
}

const KEY_DOMAIN: i64 = 256;

fn distinct_ascending(rng: &mut ChaCha8Rng, low: i64, count: usize) -> Vec<(i64, i64)> {
    let mut keys = std::collections::BTreeSet::new();
    let mut attempts = 0;
    while keys.len() < count && attempts < 64 {
        keys.insert(rng.gen_range(low..KEY_DOMAIN));
        attempts += 1;
    }
    keys.into_iter().map(|k| (k, rng.gen_range(-3..=3))).collect()
}

/// Generate a script of `len` operations; preconditions of the bulk
/// operations are enforced against a simulated model before emission.
pub fn generate_script(seed: u64, len: usize) -> OpScript {
    let order = orders::int64();
    let monoid = monoids::i64_add();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model: ModelDict<i64, i64> = ModelDict::new();
    let mut ops = Vec::with_capacity(len);
    while ops.len() < len {
        let roll = rng.gen_range(0..100);
        let key = rng.gen_range(0..KEY_DOMAIN);
        let value = rng.gen_range(-3..=3);
        let op = match roll {
            0..=34 => ScriptOp::Insert { key, value },
            35..=49 => ScriptOp::Delete { key },
            50..=59 => ScriptOp::Find { key },
            60..=66 => ScriptOp::SeekFind { key },
            67..=75 => ScriptOp::SeekInsert { key, value },
            76..=82 => ScriptOp::SeekDelete { key },
            83..=88 => {
                let floor = model.entries.last().map(|(k, _)| *k).unwrap_or(-1);
                if floor + 1 >= KEY_DOMAIN {
                    ScriptOp::Insert { key, value }
                } else {
                    let n = rng.gen_range(1..=6usize);
                    ScriptOp::AppendWith { entries: distinct_ascending(&mut rng, floor + 1, n) }
                }
            }
            89..=93 => {
                let floor = model.entries.last().map(|(k, _)| *k).unwrap_or(-1);
                if floor + 1 >= KEY_DOMAIN {
                    ScriptOp::Insert { key, value }
                } else {
                    let pivot = rng.gen_range(floor + 1..KEY_DOMAIN);
                    let n = rng.gen_range(0..=5usize);
                    let entries = if pivot + 1 < KEY_DOMAIN {
                        distinct_ascending(&mut rng, pivot + 1, n)
                    } else {
                        Vec::new()
                    };
                    ScriptOp::JoinWith { key: pivot, value, entries }
                }
            }
            _ => ScriptOp::Fold,
        };
        apply_to_model(&mut model, &order, &monoid, &op);
        ops.push(op);
    }
    OpScript { seed, ops }
}

/// What a step returns, compared verbatim between model and backend.
#[derive(Clone, Debug, PartialEq)]
pub enum Observation {
    None,
    Value(i64),
    Partition { below: Vec<(i64, i64)>, at: (i64, i64), above: Vec<(i64, i64)> },
    Folds { sequential: i64, tree: i64 },
}

fn fold_term(key: &i64, value: &i64) -> i64 {
    key * 31 + value
}

fn apply_to_model(
    model: &mut ModelDict<i64, i64>,
    order: &KeyOrder<i64>,
    monoid: &Monoid<i64>,
    op: &ScriptOp,
) -> Observation {
    match op {
        ScriptOp::Insert { key, value } => {
            model.insert(order, monoid, key, value);
            Observation::None
        }
        ScriptOp::Delete { key } => {
            model.delete(order, key);
            Observation::None
        }
        ScriptOp::Find { key } => Observation::Value(model.find(order, monoid, key)),
        ScriptOp::SeekFind { key } => {
            let (below, at, above) = model.partition(order, key);
            Observation::Partition { below, at: (*key, at.unwrap_or(0)), above }
        }
        ScriptOp::SeekInsert { key, value } => {
            let (below, at, above) = model.partition(order, key);
            model.insert(order, monoid, key, value);
            Observation::Partition { below, at: (*key, at.unwrap_or(0)), above }
        }
        ScriptOp::SeekDelete { key } => {
            let (below, at, above) = model.partition(order, key);
            model.delete(order, key);
            Observation::Partition { below, at: (*key, at.unwrap_or(0)), above }
        }
        ScriptOp::AppendWith { entries } => {
            model.append(order, entries);
            Observation::None
        }
        ScriptOp::JoinWith { key, value, entries } => {
            model.join(order, key, value, entries);
            Observation::None
        }
        ScriptOp::Fold => {
            let sum = model.entries.iter().map(|(k, v)| fold_term(k, v)).sum::<i64>();
            Observation::Folds { sequential: sum, tree: sum }
        }
    }
}

/// Something a script can run against.
pub trait DiffTarget {
    fn apply(&mut self, op: &ScriptOp) -> Observation;
    fn entries(&self) -> Vec<(i64, i64)>;
    fn size(&self) -> usize;
    fn count(&self) -> usize;
    /// Re-check retained dictionary versions (persistence tripwire).
    fn check_versions(&self) -> Result<(), String>;
}

/// Runs scripts against any persistent backend; the operands of every bulk
/// operation are retained together with their expected contents and
/// re-validated at the end of the run.
pub struct HintedTarget<B: HintedDict<Key = i64, Value = i64>> {
    backend: B,
    dict: B::Dict,
    #[allow(clippy::type_complexity)]
    versions: Vec<(B::Dict, Vec<(i64, i64)>)>,
}

impl<B: HintedDict<Key = i64, Value = i64>> HintedTarget<B> {
    pub fn new(backend: B) -> Self {
        let dict = backend.empty();
        HintedTarget { backend, dict, versions: Vec::new() }
    }

    fn take(&mut self) -> B::Dict {
        mem::replace(&mut self.dict, self.backend.empty())
    }

    fn build(&self, entries: &[(i64, i64)]) -> B::Dict {
        let mut d = self.backend.empty();
        for (k, v) in entries {
            d = self.backend.insert(d, k, v);
        }
        d
    }

    fn retain(&mut self, dict: &B::Dict) {
        self.versions.push((dict.clone(), self.backend.to_list(dict)));
    }
}

impl<B: HintedDict<Key = i64, Value = i64>> DiffTarget for HintedTarget<B> {
    fn apply(&mut self, op: &ScriptOp) -> Observation {
        let backend = &self.backend;
        match op {
            ScriptOp::Insert { key, value } => {
                let d = mem::replace(&mut self.dict, backend.empty());
                self.dict = backend.insert(d, key, value);
                Observation::None
            }
            ScriptOp::Delete { key } => {
                let d = mem::replace(&mut self.dict, backend.empty());
                self.dict = backend.delete(d, key);
                Observation::None
            }
            ScriptOp::Find { key } => Observation::Value(backend.find(&self.dict, key)),
            ScriptOp::SeekFind { key } => {
                let hint = backend.seek(&self.dict, key);
                let value = backend.find_hint(&self.dict, &hint, key);
                Observation::Partition {
                    below: backend.to_list(&backend.before(&hint)),
                    at: (backend.current(&hint).0, value),
                    above: backend.to_list(&backend.after(&hint)),
                }
            }
            ScriptOp::SeekInsert { key, value } => {
                let hint = backend.seek(&self.dict, key);
                let obs = Observation::Partition {
                    below: backend.to_list(&hint.left),
                    at: (hint.key, hint.value),
                    above: backend.to_list(&hint.right),
                };
                let d = mem::replace(&mut self.dict, backend.empty());
                self.dict = backend.insert_hint(d, hint, key, value);
                obs
            }
            ScriptOp::SeekDelete { key } => {
                let hint = backend.seek(&self.dict, key);
                let obs = Observation::Partition {
                    below: backend.to_list(&hint.left),
                    at: (hint.key, hint.value),
                    above: backend.to_list(&hint.right),
                };
                let d = mem::replace(&mut self.dict, backend.empty());
                self.dict = backend.delete_hint(d, hint, key);
                obs
            }
            ScriptOp::AppendWith { entries } => {
                let right = self.build(entries);
                let left = self.take();
                self.retain(&left);
                self.retain(&right);
                self.dict = self.backend.append(left, right);
                Observation::None
            }
            ScriptOp::JoinWith { key, value, entries } => {
                let right = self.build(entries);
                let left = self.take();
                self.retain(&left);
                self.retain(&right);
                self.dict = self.backend.join(left, key, value, right);
                Observation::None
            }
            ScriptOp::Fold => {
                let sequential =
                    backend.fold_left(&self.dict, 0i64, |acc, k, v| acc + fold_term(k, v));
                let tree = crate::dict::map_reduce_tree(
                    backend,
                    &self.dict,
                    0i64,
                    fold_term,
                    |a, b| a + b,
                );
                Observation::Folds { sequential, tree }
            }
        }
    }

    fn entries(&self) -> Vec<(i64, i64)> {
        self.backend.to_list(&self.dict)
    }

    fn size(&self) -> usize {
        self.backend.size(&self.dict)
    }

    fn count(&self) -> usize {
        self.backend.count(&self.dict)
    }

    fn check_versions(&self) -> Result<(), String> {
        for (i, (dict, expected)) in self.versions.iter().enumerate() {
            let now = self.backend.to_list(dict);
            if now != *expected {
                return Err(format!(
                    "retained version {i} changed: expected {expected:?}, found {now:?}"
                ));
            }
        }
        Ok(())
    }
}

/// Runs scripts against the mutating tuned array; single-owner semantics, so
/// there are no retained versions to re-validate.
pub struct TunedTarget {
    dict: TunedArrayDict<i64, i64>,
    method: SeekMethod,
}

impl TunedTarget {
    pub fn new(method: SeekMethod) -> Self {
        TunedTarget {
            dict: TunedArrayDict::new(orders::int64(), monoids::i64_add()),
            method,
        }
    }

    fn partition_at(&self, key: i64) -> Observation {
        let hint = self.dict.seek(&key, self.method);
        let below = self.dict.slice_to(hint.index).to_vec();
        let at_value =
            if hint.found { self.dict.entry_at(hint.index).1 } else { 0 };
        let above_from = hint.index + usize::from(hint.found);
        let above = self.dict.slice()[above_from - self.dict.lower()..].to_vec();
        Observation::Partition { below, at: (key, at_value), above }
    }
}

impl DiffTarget for TunedTarget {
    fn apply(&mut self, op: &ScriptOp) -> Observation {
        match op {
            ScriptOp::Insert { key, value } => {
                self.dict.insert(key, value, self.method);
                Observation::None
            }
            ScriptOp::Delete { key } => {
                self.dict.delete(key, self.method);
                Observation::None
            }
            ScriptOp::Find { key } => Observation::Value(self.dict.find(key, self.method)),
            ScriptOp::SeekFind { key } => self.partition_at(*key),
            ScriptOp::SeekInsert { key, value } => {
                let obs = self.partition_at(*key);
                let hint = self.dict.seek(key, self.method);
                self.dict.insert_hint_inplace(hint, key, value);
                obs
            }
            ScriptOp::SeekDelete { key } => {
                let obs = self.partition_at(*key);
                let hint = self.dict.seek(key, self.method);
                self.dict.delete_hint_inplace(hint);
                obs
            }
            ScriptOp::AppendWith { entries } => {
                let mut hint = self.dict.end_hint();
                for (k, v) in entries {
                    hint = self.dict.insert_hint_inplace(hint, k, v);
                }
                Observation::None
            }
            ScriptOp::JoinWith { key, value, entries } => {
                let mut hint = self.dict.end_hint();
                hint = self.dict.insert_hint_inplace(hint, key, value);
                for (k, v) in entries {
                    hint = self.dict.insert_hint_inplace(hint, k, v);
                }
                Observation::None
            }
            ScriptOp::Fold => {
                let mut sum = 0i64;
                self.dict.inplace_fold_left(&mut sum, |acc, k, v| *acc += fold_term(k, v));
                Observation::Folds { sequential: sum, tree: sum }
            }
        }
    }

    fn entries(&self) -> Vec<(i64, i64)> {
        self.dict.to_list()
    }

    fn size(&self) -> usize {
        self.dict.size()
    }

    fn count(&self) -> usize {
        self.dict.count()
    }

    fn check_versions(&self) -> Result<(), String> {
        Ok(())
    }
}

/// A differential failure, shrunk to the shortest failing prefix.
#[derive(Clone, Debug)]
pub struct DiffFailure {
    pub seed: u64,
    pub op_index: usize,
    pub minimal_prefix: usize,
    pub message: String,
}

impl std::fmt::Display for DiffFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "script seed={} failed at op {} (minimal prefix {}): {}",
            self.seed, self.op_index, self.minimal_prefix, self.message
        )
    }
}

/// Entry list in the library's debug-dump shape, `{k1:v1, k2:v2}`.
fn dump_entries(entries: &[(i64, i64)]) -> String {
    let mut out = String::from("{");
    for (i, (k, v)) in entries.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{k:?}:{v:?}");
    }
    out.push('}');
    out
}

fn run_prefix<T: DiffTarget>(
    script: &OpScript,
    make: &impl Fn() -> T,
    limit: usize,
) -> Result<(), (usize, String)> {
    let order = orders::int64();
    let monoid = monoids::i64_add();
    let mut model = ModelDict::new();
    let mut target = make();
    for (i, op) in script.ops[..limit].iter().enumerate() {
        let expected = apply_to_model(&mut model, &order, &monoid, op);
        let got = target.apply(op);
        if expected != got {
            return Err((i, format!("observation mismatch on {op:?}: model {expected:?}, backend {got:?}")));
        }
        let entries = target.entries();
        if entries != model.entries() {
            return Err((
                i,
                format!(
                    "contents mismatch after {op:?}: model {}, backend {}",
                    dump_entries(model.entries()),
                    dump_entries(&entries)
                ),
            ));
        }
        let (s, c) = (target.size(), target.count());
        if s != model.size() || c != model.count(&monoid) {
            return Err((
                i,
                format!(
                    "size/count mismatch after {op:?}: model ({}, {}), backend ({s}, {c})",
                    model.size(),
                    model.count(&monoid)
                ),
            ));
        }
    }
    target.check_versions().map_err(|m| (limit.saturating_sub(1), m))
}

/// Execute the script against a fresh target from `make`, comparing against
/// the model after every operation. On failure, re-runs prefixes to find the
/// shortest one that still fails.
pub fn run_differential<T: DiffTarget>(
    script: &OpScript,
    make: impl Fn() -> T,
) -> Result<(), DiffFailure> {
    match run_prefix(script, &make, script.ops.len()) {
        Ok(()) => Ok(()),
        Err((op_index, _)) => {
            let mut lo = 1usize;
            let mut hi = (op_index + 1).min(script.ops.len());
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if run_prefix(script, &make, mid).is_err() {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            let message = match run_prefix(script, &make, hi) {
                Err((_, m)) => m,
                Ok(()) => "shrunk prefix unexpectedly passed on re-run".into(),
            };
            Err(DiffFailure { seed: script.seed, op_index, minimal_prefix: hi, message })
        }
    }
}

/// One replay line: `seed=<u64> ops=<count>`.
pub fn replay_line(seed: u64, ops: usize) -> String {
    let mut line = String::new();
    let _ = write!(line, "seed={seed} ops={ops}");
    line
}

/// Parse a replay line produced by [`replay_line`].
pub fn parse_replay_line(line: &str) -> Option<(u64, usize)> {
    let mut parts = line.split_whitespace();
    let seed = parts.next()?.strip_prefix("seed=")?.parse().ok()?;
    let ops = parts.next()?.strip_prefix("ops=")?.parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((seed, ops))
}

/// Write failing scripts (seed and length per line) for regression pinning.
pub fn write_replay_file(path: &std::path::Path, lines: &[(u64, usize)]) -> std::io::Result<()> {
    let mut out = String::new();
    for (seed, ops) in lines {
        out.push_str(&replay_line(*seed, *ops));
        out.push('\n');
    }
    std::fs::write(path, out)
}

/// Read a replay file back into (seed, ops) pairs.
pub fn read_replay_file(path: &std::path::Path) -> std::io::Result<Vec<(u64, usize)>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_replay_line(line) {
            Some(pair) => lines.push(pair),
            None => {
                return Err(std::io::Error::new(
                    std::io::ErrorKind::InvalidData,
                    format!("bad replay line {}: {line:?}", i + 1),
                ))
            }
        }
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::ArrayDict;
    use crate::dict::{FocusHint, HintOf};
    use crate::tree::AvlDict;

    #[test]
    fn model_insert_combines() {
        let order = orders::int64();
        let monoid = monoids::i64_add();
        let mut m = ModelDict::new();
        m.insert(&order, &monoid, &5, &3);
        m.insert(&order, &monoid, &5, &4);
        assert_eq!(m.to_list(), vec![(5, 7)]);
    }

    #[test]
    fn model_append_concatenates() {
        let order = orders::int64();
        let monoid = monoids::i64_add();
        let mut m = ModelDict::new();
        m.insert(&order, &monoid, &1, &1);
        m.append(&order, &[(4, 4), (9, 9)]);
        assert_eq!(m.to_list(), vec![(1, 1), (4, 4), (9, 9)]);
    }

    #[test]
    fn model_partition_splits_around_key() {
        let order = orders::int64();
        let monoid = monoids::i64_add();
        let mut m = ModelDict::new();
        for k in [1, 3, 5] {
            m.insert(&order, &monoid, &k, &(k * 10));
        }
        let (below, at, above) = m.partition(&order, &3);
        assert_eq!(below, vec![(1, 10)]);
        assert_eq!(at, Some(30));
        assert_eq!(above, vec![(5, 50)]);
        let (below, at, above) = m.partition(&order, &2);
        assert_eq!(below, vec![(1, 10)]);
        assert_eq!(at, None);
        assert_eq!(above, vec![(3, 30), (5, 50)]);
    }

    #[test]
    fn scripts_are_reproducible_from_their_seed() {
        let a = generate_script(99, 200);
        let b = generate_script(99, 200);
        assert_eq!(a.ops, b.ops);
        let c = generate_script(100, 200);
        assert_ne!(a.ops, c.ops);
    }

    #[test]
    fn ascending_insert_script_passes_everywhere() {
        let ops: Vec<ScriptOp> =
            (0..100).map(|k| ScriptOp::Insert { key: k, value: 1 }).collect();
        let script = OpScript { seed: 0, ops };
        run_differential(&script, || {
            HintedTarget::new(AvlDict::new(orders::int64(), monoids::i64_add()))
        })
        .unwrap();
        run_differential(&script, || {
            HintedTarget::new(ArrayDict::new(orders::int64(), monoids::i64_add()))
        })
        .unwrap();
        run_differential(&script, || TunedTarget::new(SeekMethod::Linear)).unwrap();
    }

    #[test]
    fn interleaved_delete_script_passes() {
        let script = generate_script(7, 300);
        run_differential(&script, || {
            HintedTarget::new(AvlDict::new(orders::int64(), monoids::i64_add()))
        })
        .unwrap();
    }

    /// Backend sabotaged on purpose: insertions into dictionaries holding at
    /// least four entries drop the combine and overwrite the stored value.
    #[derive(Clone)]
    struct SaboteurDict {
        inner: AvlDict<i64, i64>,
    }

    impl HintedDict for SaboteurDict {
        type Key = i64;
        type Value = i64;
        type Dict = <AvlDict<i64, i64> as HintedDict>::Dict;

        fn order(&self) -> &KeyOrder<i64> {
            self.inner.order()
        }

        fn monoid(&self) -> &Monoid<i64> {
            self.inner.monoid()
        }

        fn empty(&self) -> Self::Dict {
            self.inner.empty()
        }

        fn is_empty(&self, dict: &Self::Dict) -> bool {
            self.inner.is_empty(dict)
        }

        fn middle(&self, dict: &Self::Dict) -> HintOf<Self> {
            let h = self.inner.middle(dict);
            FocusHint { left: h.left, key: h.key, value: h.value, right: h.right }
        }

        fn insert_hint(
            &self,
            dict: Self::Dict,
            hint: HintOf<Self>,
            key: &i64,
            value: &i64,
        ) -> Self::Dict {
            let hint = FocusHint {
                left: hint.left,
                key: hint.key,
                value: if self.inner.size(&dict) >= 4 { 0 } else { hint.value },
                right: hint.right,
            };
            self.inner.insert_hint(dict, hint, key, value)
        }

        fn append(&self, left: Self::Dict, right: Self::Dict) -> Self::Dict {
            self.inner.append(left, right)
        }

        fn join(&self, left: Self::Dict, key: &i64, value: &i64, right: Self::Dict) -> Self::Dict {
            self.inner.join(left, key, value, right)
        }
    }

    #[test]
    fn corrupted_backend_fails_with_minimal_prefix() {
        let ops: Vec<ScriptOp> = (0..20)
            .map(|i| ScriptOp::Insert { key: i % 6, value: 1 })
            .collect();
        let script = OpScript { seed: 1234, ops };
        let failure = run_differential(&script, || {
            HintedTarget::new(SaboteurDict {
                inner: AvlDict::new(orders::int64(), monoids::i64_add()),
            })
        })
        .expect_err("sabotaged backend must diverge");
        assert!(failure.minimal_prefix <= failure.op_index + 1);
        // Shrinking soundness: the reported prefix still fails on re-run.
        let prefix = OpScript {
            seed: script.seed,
            ops: script.ops[..failure.minimal_prefix].to_vec(),
        };
        run_differential(&prefix, || {
            HintedTarget::new(SaboteurDict {
                inner: AvlDict::new(orders::int64(), monoids::i64_add()),
            })
        })
        .expect_err("minimal prefix must still fail");
    }

    #[test]
    fn replay_lines_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("failures.txt");
        let lines = vec![(42u64, 200usize), (7, 13)];
        write_replay_file(&path, &lines).unwrap();
        assert_eq!(read_replay_file(&path).unwrap(), lines);
        assert_eq!(parse_replay_line("seed=42 ops=200"), Some((42, 200)));
        assert_eq!(parse_replay_line("seed=x ops=1"), None);
    }
}
