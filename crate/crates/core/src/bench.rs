//! Benchmark harness backing the `bench` binary.
//!
//! Reproduces the asymptotic story at desk scale: the five two-collection
//! workloads run across the hinted backends and two standard-library
//! baselines, instrumented with the thread-local comparator counter. Wall
//! time is reported but never asserted — comparator calls are the
//! deterministic, machine-independent metric.
//!
//! Inputs are synthesized deterministically from the config seed: sets draw
//! `size` distinct 64-bit keys from a domain of twice the combined size (so
//! overlaps actually happen), vectors draw `size` distinct indices from a
//! range of `round(size / density)` with uniform values in `[-1, 1)`. Each
//! config performs one untimed warm-up run followed by `repetitions` timed
//! runs; kernels iterate over the smaller operand.
//!
//! Backends:
//!
//! * `array-linear` / `array-binary` — tuned sorted arrays, per-element
//!   hinted loops with the respective seek strategy;
//! * `avl` / `wbb` / `unbalanced` — persistent trees, divide-and-conquer
//!   (`fold_tree`) kernel forms;
//! * `array-persistent` — persistent sorted-array views, `fold_tree` forms
//!   (not part of the default sweep grid: its copying bulk splices make the
//!   largest grid points quadratic);
//! * `baseline-stdmap` — per-element loops over `std::collections::BTreeMap`
//!   with counting keys;
//! * `baseline-merge` — a two-iterator linear merge over sorted slices, the
//!   standard-library `set_union`/`set_intersection` analog.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{monoids, orders, Monoid};
use crate::algorithms;
use crate::array::{ArrayDict, ArrayView, SeekMethod, TunedArrayDict};
use crate::dict::HintedDict;
use crate::instrument::{self, counted_cmp, CountingKey};
use crate::tree::{AvlDict, InfoEntry, Tree, UnbalancedDict, WbbDict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Workload {
    SetUnion,
    SetIntersect,
    VecAdd,
    VecMul,
    VecInner,
}

impl Workload {
    pub const ALL: [Workload; 5] = [
        Workload::SetUnion,
        Workload::SetIntersect,
        Workload::VecAdd,
        Workload::VecMul,
        Workload::VecInner,
    ];

    pub fn is_vector(self) -> bool {
        matches!(self, Workload::VecAdd | Workload::VecMul | Workload::VecInner)
    }
}

impl fmt::Display for Workload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Workload::SetUnion => "set-union",
            Workload::SetIntersect => "set-intersect",
            Workload::VecAdd => "vec-add",
            Workload::VecMul => "vec-mul",
            Workload::VecInner => "vec-inner",
        };
        f.write_str(name)
    }
}

impl FromStr for Workload {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "set-union" => Ok(Workload::SetUnion),
            "set-intersect" => Ok(Workload::SetIntersect),
            "vec-add" => Ok(Workload::VecAdd),
            "vec-mul" => Ok(Workload::VecMul),
            "vec-inner" => Ok(Workload::VecInner),
            other => Err(format!(
                "unknown workload {other:?} (expected set-union, set-intersect, vec-add, vec-mul or vec-inner)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BackendChoice {
    ArrayLinear,
    ArrayBinary,
    Wbb,
    Avl,
    Unbalanced,
    BaselineStdmap,
    /// Linear two-iterator merge over sorted slices.
    BaselineMerge,
    /// Persistent array views; quadratic on the largest grid points, so it
    /// is offered for explicit runs rather than the default sweep.
    ArrayPersistent,
}

impl BackendChoice {
    /// Backends covered by the default sweep grid.
    pub const SWEEP: [BackendChoice; 6] = [
        BackendChoice::ArrayLinear,
        BackendChoice::ArrayBinary,
        BackendChoice::Wbb,
        BackendChoice::Avl,
        BackendChoice::Unbalanced,
        BackendChoice::BaselineStdmap,
    ];

    pub const ALL: [BackendChoice; 8] = [
        BackendChoice::ArrayLinear,
        BackendChoice::ArrayBinary,
        BackendChoice::Wbb,
        BackendChoice::Avl,
        BackendChoice::Unbalanced,
        BackendChoice::BaselineStdmap,
        BackendChoice::BaselineMerge,
        BackendChoice::ArrayPersistent,
    ];
}

impl fmt::Display for BackendChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BackendChoice::ArrayLinear => "array-linear",
            BackendChoice::ArrayBinary => "array-binary",
            BackendChoice::Wbb => "wbb",
            BackendChoice::Avl => "avl",
            BackendChoice::Unbalanced => "unbalanced",
            BackendChoice::BaselineStdmap => "baseline-stdmap",
            BackendChoice::BaselineMerge => "baseline-merge",
            BackendChoice::ArrayPersistent => "array-persistent",
        };
        f.write_str(name)
    }
}

impl FromStr for BackendChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "array-linear" => Ok(BackendChoice::ArrayLinear),
            "array-binary" => Ok(BackendChoice::ArrayBinary),
            "wbb" => Ok(BackendChoice::Wbb),
            "avl" => Ok(BackendChoice::Avl),
            "unbalanced" => Ok(BackendChoice::Unbalanced),
            "baseline-stdmap" => Ok(BackendChoice::BaselineStdmap),
            "baseline-merge" => Ok(BackendChoice::BaselineMerge),
            "array-persistent" => Ok(BackendChoice::ArrayPersistent),
            other => Err(format!(
                "unknown backend {other:?} (expected array-linear, array-binary, wbb, avl, \
                 unbalanced, baseline-stdmap, baseline-merge or array-persistent)"
            )),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub workload: Workload,
    pub backend: BackendChoice,
    pub size1: usize,
    pub size2: usize,
    pub density: f64,
    pub repetitions: u32,
    pub seed: u64,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(format!("density must be in (0, 1], got {}", self.density));
        }
        if self.repetitions < 1 {
            return Err("repetitions must be at least 1".into());
        }
        Ok(())
    }
}

/// One measured configuration. `element_moves` and `alloc_events` are
/// reported in the human-readable output only; the CSV columns are fixed.
#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub workload: Workload,
    pub backend: BackendChoice,
    pub size1: usize,
    pub size2: usize,
    pub density: f64,
    pub seed: u64,
    pub reps: u32,
    pub mean_ns: u64,
    pub min_ns: u64,
    pub max_ns: u64,
    pub cmp_calls: u64,
    pub result_count: u64,
    pub element_moves: u64,
    pub alloc_events: u64,
}

impl fmt::Display for BenchRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} n1={} n2={} density={} mean={}ns cmp={} count={} moves={} allocs={}",
            self.workload,
            self.backend,
            self.size1,
            self.size2,
            self.density,
            self.mean_ns,
            self.cmp_calls,
            self.result_count,
            self.element_moves,
            self.alloc_events
        )
    }
}

// ----------------------------------------------------------------------
// Input synthesis
// ----------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum WorkloadInputs {
    Sets { first: Vec<i64>, second: Vec<i64> },
    Vectors { first: Vec<(i64, f64)>, second: Vec<(i64, f64)> },
}

fn distinct_keys(rng: &mut ChaCha8Rng, n: usize, domain: i64) -> Vec<i64> {
    assert!(domain >= n as i64, "key domain too small for requested set size");
    let mut keys = BTreeSet::new();
    while keys.len() < n {
        keys.insert(rng.gen_range(0..domain));
    }
    let mut out: Vec<i64> = keys.into_iter().collect();
    out.shuffle(rng);
    out
}

fn vector_entries(rng: &mut ChaCha8Rng, nnz: usize, density: f64) -> Vec<(i64, f64)> {
    let range = ((nnz as f64 / density).round() as i64).max(nnz as i64).max(1);
    let mut indices = BTreeSet::new();
    while indices.len() < nnz {
        indices.insert(rng.gen_range(0..range));
    }
    let mut out: Vec<(i64, f64)> =
        indices.into_iter().map(|i| (i, rng.gen_range(-1.0..1.0))).collect();
    out.shuffle(rng);
    out
}

/// Deterministic inputs for a config: same seed, sizes and density always
/// produce identical data.
pub fn generate_inputs(config: &BenchConfig) -> WorkloadInputs {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    if config.workload.is_vector() {
        WorkloadInputs::Vectors {
            first: vector_entries(&mut rng, config.size1, config.density),
            second: vector_entries(&mut rng, config.size2, config.density),
        }
    } else {
        let domain = (2 * (config.size1 + config.size2)).max(4) as i64;
        WorkloadInputs::Sets {
            first: distinct_keys(&mut rng, config.size1, domain),
            second: distinct_keys(&mut rng, config.size2, domain),
        }
    }
}

// ----------------------------------------------------------------------
// Per-backend execution
// ----------------------------------------------------------------------

fn sorted_set_entries(keys: &[i64]) -> Vec<(i64, bool)> {
    let mut keys = keys.to_vec();
    keys.sort_unstable();
    keys.into_iter().map(|k| (k, true)).collect()
}

fn sorted_vec_entries(entries: &[(i64, f64)]) -> Vec<(i64, f64)> {
    let mut entries = entries.to_vec();
    entries.sort_unstable_by_key(|(k, _)| *k);
    entries
}

fn count_nonzero<V: Clone + PartialEq>(monoid: &Monoid<V>, entries: &[(i64, V)]) -> u64 {
    entries.iter().filter(|(_, v)| !monoid.is_zero(v)).count() as u64
}

fn scalar_count(value: f64) -> u64 {
    u64::from(value != 0.0)
}

fn run_hinted<B>(backend: &B, workload: Workload, first: &B::Dict, second: &B::Dict) -> u64
where
    B: HintedDict<Key = i64>,
    BoolOrF64<B::Value>: WorkloadValues<B>,
{
    BoolOrF64::run(backend, workload, first, second)
}

/// Dispatch glue: set workloads run over boolean dictionaries, vector
/// workloads over float ones. Implemented for the two value types rather
/// than once, because the product monoids differ.
struct BoolOrF64<V>(std::marker::PhantomData<V>);

trait WorkloadValues<B: HintedDict<Key = i64>> {
    fn run(backend: &B, workload: Workload, first: &B::Dict, second: &B::Dict) -> u64;
}

impl<B: HintedDict<Key = i64, Value = bool>> WorkloadValues<B> for BoolOrF64<bool> {
    fn run(backend: &B, workload: Workload, first: &B::Dict, second: &B::Dict) -> u64 {
        let result = match workload {
            Workload::SetUnion => algorithms::union_fold_tree(backend, first, second.clone()),
            Workload::SetIntersect => {
                let and = monoids::bool_and();
                algorithms::intersect_fold_tree(backend, &and, first, second.clone())
            }
            _ => unreachable!("set backends only run set workloads"),
        };
        backend.count(&result) as u64
    }
}

impl<B: HintedDict<Key = i64, Value = f64>> WorkloadValues<B> for BoolOrF64<f64> {
    fn run(backend: &B, workload: Workload, first: &B::Dict, second: &B::Dict) -> u64 {
        match workload {
            Workload::VecAdd => {
                let result = algorithms::union_fold_tree(backend, first, second.clone());
                backend.count(&result) as u64
            }
            Workload::VecMul => {
                let mul = monoids::f64_mul();
                let result = algorithms::intersect_fold_tree(backend, &mul, first, second.clone());
                backend.count(&result) as u64
            }
            Workload::VecInner => {
                let mul = monoids::f64_mul();
                scalar_count(algorithms::inner_product_fold_tree(
                    backend,
                    &mul,
                    first,
                    second.clone(),
                ))
            }
            _ => unreachable!("vector backends only run vector workloads"),
        }
    }
}

fn run_tuned_set(
    method: SeekMethod,
    workload: Workload,
    first: &TunedArrayDict<i64, bool>,
    second: &TunedArrayDict<i64, bool>,
) -> u64 {
    match workload {
        Workload::SetUnion => algorithms::union_hinted(first, second.clone(), method).count() as u64,
        Workload::SetIntersect => {
            let and = monoids::bool_and();
            algorithms::intersect_hinted(&and, first, second.clone(), method).count() as u64
        }
        _ => unreachable!(),
    }
}

fn run_tuned_vec(
    method: SeekMethod,
    workload: Workload,
    first: &TunedArrayDict<i64, f64>,
    second: &TunedArrayDict<i64, f64>,
) -> u64 {
    let mul = monoids::f64_mul();
    match workload {
        Workload::VecAdd => algorithms::union_hinted(first, second.clone(), method).count() as u64,
        Workload::VecMul => {
            algorithms::intersect_hinted(&mul, first, second.clone(), method).count() as u64
        }
        Workload::VecInner => {
            scalar_count(algorithms::inner_product_hinted(&mul, first, second.clone(), method))
        }
        _ => unreachable!(),
    }
}

type CountingSetMap = BTreeMap<CountingKey<i64>, bool>;
type CountingVecMap = BTreeMap<CountingKey<i64>, f64>;

fn run_stdmap_set(workload: Workload, first: &CountingSetMap, second: &CountingSetMap) -> u64 {
    match workload {
        Workload::SetUnion => {
            let mut result: CountingSetMap = BTreeMap::new();
            for (k, v) in first.iter().chain(second.iter()) {
                result.entry(*k).and_modify(|w| *w = *w || *v).or_insert(*v);
            }
            result.values().filter(|v| **v).count() as u64
        }
        Workload::SetIntersect => {
            let mut result: CountingSetMap = BTreeMap::new();
            for (k, v) in first {
                if let Some(w) = second.get(k) {
                    result.insert(*k, *v && *w);
                }
            }
            result.values().filter(|v| **v).count() as u64
        }
        _ => unreachable!(),
    }
}

fn run_stdmap_vec(workload: Workload, first: &CountingVecMap, second: &CountingVecMap) -> u64 {
    match workload {
        Workload::VecAdd => {
            let mut result: CountingVecMap = BTreeMap::new();
            for (k, v) in first.iter().chain(second.iter()) {
                result.entry(*k).and_modify(|w| *w += *v).or_insert(*v);
            }
            result.values().filter(|v| **v != 0.0).count() as u64
        }
        Workload::VecMul => {
            let mut result: CountingVecMap = BTreeMap::new();
            for (k, v) in first {
                if let Some(w) = second.get(k) {
                    result.insert(*k, *v * *w);
                }
            }
            result.values().filter(|v| **v != 0.0).count() as u64
        }
        Workload::VecInner => {
            let mut acc = 0.0f64;
            for (k, v) in first {
                if let Some(w) = second.get(k) {
                    acc += *v * *w;
                }
            }
            scalar_count(acc)
        }
        _ => unreachable!(),
    }
}

/// Two-iterator merge producing the union, with per-key combination.
fn merge_union<V: Copy>(
    first: &[(i64, V)],
    second: &[(i64, V)],
    combine: impl Fn(V, V) -> V,
) -> Vec<(i64, V)> {
    let mut out = Vec::with_capacity(first.len() + second.len());
    let (mut i, mut j) = (0, 0);
    while i < first.len() && j < second.len() {
        match counted_cmp(&first[i].0, &second[j].0) {
            std::cmp::Ordering::Less => {
                out.push(first[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(second[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((first[i].0, combine(first[i].1, second[j].1)));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&first[i..]);
    out.extend_from_slice(&second[j..]);
    out
}

/// Two-iterator merge producing the intersection.
fn merge_intersection<V: Copy>(
    first: &[(i64, V)],
    second: &[(i64, V)],
    combine: impl Fn(V, V) -> V,
) -> Vec<(i64, V)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < first.len() && j < second.len() {
        match counted_cmp(&first[i].0, &second[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push((first[i].0, combine(first[i].1, second[j].1)));
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn run_merge_set(workload: Workload, first: &[(i64, bool)], second: &[(i64, bool)]) -> u64 {
    match workload {
        Workload::SetUnion => {
            count_nonzero(&monoids::bool_or(), &merge_union(first, second, |a, b| a || b))
        }
        Workload::SetIntersect => {
            count_nonzero(&monoids::bool_or(), &merge_intersection(first, second, |a, b| a && b))
        }
        _ => unreachable!(),
    }
}

fn run_merge_vec(workload: Workload, first: &[(i64, f64)], second: &[(i64, f64)]) -> u64 {
    match workload {
        Workload::VecAdd => {
            count_nonzero(&monoids::f64_add(), &merge_union(first, second, |a, b| a + b))
        }
        Workload::VecMul => {
            count_nonzero(&monoids::f64_add(), &merge_intersection(first, second, |a, b| a * b))
        }
        Workload::VecInner => {
            let mut acc = 0.0;
            for (_, p) in merge_intersection(first, second, |a, b| a * b) {
                acc += p;
            }
            scalar_count(acc)
        }
        _ => unreachable!(),
    }
}

enum Prepared {
    TunedSet(SeekMethod, TunedArrayDict<i64, bool>, TunedArrayDict<i64, bool>),
    TunedVec(SeekMethod, TunedArrayDict<i64, f64>, TunedArrayDict<i64, f64>),
    PersistentSet(ArrayDict<i64, bool>, ArrayView<i64, bool>, ArrayView<i64, bool>),
    PersistentVec(ArrayDict<i64, f64>, ArrayView<i64, f64>, ArrayView<i64, f64>),
    AvlSet(AvlDict<i64, bool>, Tree<InfoEntry<i64, bool>>, Tree<InfoEntry<i64, bool>>),
    AvlVec(AvlDict<i64, f64>, Tree<InfoEntry<i64, f64>>, Tree<InfoEntry<i64, f64>>),
    WbbSet(WbbDict<i64, bool>, Tree<InfoEntry<i64, bool>>, Tree<InfoEntry<i64, bool>>),
    WbbVec(WbbDict<i64, f64>, Tree<InfoEntry<i64, f64>>, Tree<InfoEntry<i64, f64>>),
    UnbalancedSet(UnbalancedDict<i64, bool>, Tree<(i64, bool)>, Tree<(i64, bool)>),
    UnbalancedVec(UnbalancedDict<i64, f64>, Tree<(i64, f64)>, Tree<(i64, f64)>),
    StdSet(CountingSetMap, CountingSetMap),
    StdVec(CountingVecMap, CountingVecMap),
    MergeSet(Vec<(i64, bool)>, Vec<(i64, bool)>),
    MergeVec(Vec<(i64, f64)>, Vec<(i64, f64)>),
}

fn build_tree_dict<B: HintedDict<Key = i64>>(backend: &B, entries: &[(i64, B::Value)]) -> B::Dict {
    let mut d = backend.empty();
    for (k, v) in entries {
        d = backend.insert(d, k, v);
    }
    d
}

type SetEntries = Vec<(i64, bool)>;
type VecEntries = Vec<(i64, f64)>;

fn prepare(config: &BenchConfig, inputs: &WorkloadInputs) -> Prepared {
    // Kernels iterate the first operand; hand them the smaller one.
    let (set1, set2, vec1, vec2): (SetEntries, SetEntries, VecEntries, VecEntries) =
        match inputs {
            WorkloadInputs::Sets { first, second } => {
                let (a, b) =
                    if first.len() <= second.len() { (first, second) } else { (second, first) };
                (a.iter().map(|&k| (k, true)).collect(), b.iter().map(|&k| (k, true)).collect(), Vec::new(), Vec::new())
            }
            WorkloadInputs::Vectors { first, second } => {
                let (a, b) =
                    if first.len() <= second.len() { (first, second) } else { (second, first) };
                (Vec::new(), Vec::new(), a.clone(), b.clone())
            }
        };
    let is_vector = config.workload.is_vector();
    let ord = orders::int64();
    match config.backend {
        BackendChoice::ArrayLinear | BackendChoice::ArrayBinary => {
            let method = if config.backend == BackendChoice::ArrayLinear {
                SeekMethod::Linear
            } else {
                SeekMethod::Binary
            };
            if is_vector {
                Prepared::TunedVec(
                    method,
                    TunedArrayDict::from_sorted(ord.clone(), monoids::f64_add(), sorted_vec_entries(&vec1)),
                    TunedArrayDict::from_sorted(ord, monoids::f64_add(), sorted_vec_entries(&vec2)),
                )
            } else {
                let s1: Vec<i64> = set1.iter().map(|(k, _)| *k).collect();
                let s2: Vec<i64> = set2.iter().map(|(k, _)| *k).collect();
                Prepared::TunedSet(
                    method,
                    TunedArrayDict::from_sorted(ord.clone(), monoids::bool_or(), sorted_set_entries(&s1)),
                    TunedArrayDict::from_sorted(ord, monoids::bool_or(), sorted_set_entries(&s2)),
                )
            }
        }
        BackendChoice::ArrayPersistent => {
            if is_vector {
                let backend = ArrayDict::new(ord, monoids::f64_add());
                let a = backend.from_sorted(sorted_vec_entries(&vec1));
                let b = backend.from_sorted(sorted_vec_entries(&vec2));
                Prepared::PersistentVec(backend, a, b)
            } else {
                let backend = ArrayDict::new(ord, monoids::bool_or());
                let s1: Vec<i64> = set1.iter().map(|(k, _)| *k).collect();
                let s2: Vec<i64> = set2.iter().map(|(k, _)| *k).collect();
                let a = backend.from_sorted(sorted_set_entries(&s1));
                let b = backend.from_sorted(sorted_set_entries(&s2));
                Prepared::PersistentSet(backend, a, b)
            }
        }
        BackendChoice::Avl => {
            if is_vector {
                let backend = AvlDict::new(ord, monoids::f64_add());
                let a = build_tree_dict(&backend, &vec1);
                let b = build_tree_dict(&backend, &vec2);
                Prepared::AvlVec(backend, a, b)
            } else {
                let backend = AvlDict::new(ord, monoids::bool_or());
                let a = build_tree_dict(&backend, &set1);
                let b = build_tree_dict(&backend, &set2);
                Prepared::AvlSet(backend, a, b)
            }
        }
        BackendChoice::Wbb => {
            if is_vector {
                let backend = WbbDict::new(ord, monoids::f64_add());
                let a = build_tree_dict(&backend, &vec1);
                let b = build_tree_dict(&backend, &vec2);
                Prepared::WbbVec(backend, a, b)
            } else {
                let backend = WbbDict::new(ord, monoids::bool_or());
                let a = build_tree_dict(&backend, &set1);
                let b = build_tree_dict(&backend, &set2);
                Prepared::WbbSet(backend, a, b)
            }
        }
        BackendChoice::Unbalanced => {
            if is_vector {
                let backend = UnbalancedDict::new(ord, monoids::f64_add());
                let a = build_tree_dict(&backend, &vec1);
                let b = build_tree_dict(&backend, &vec2);
                Prepared::UnbalancedVec(backend, a, b)
            } else {
                let backend = UnbalancedDict::new(ord, monoids::bool_or());
                let a = build_tree_dict(&backend, &set1);
                let b = build_tree_dict(&backend, &set2);
                Prepared::UnbalancedSet(backend, a, b)
            }
        }
        BackendChoice::BaselineStdmap => {
            if is_vector {
                let a: CountingVecMap = vec1.iter().map(|&(k, v)| (CountingKey(k), v)).collect();
                let b: CountingVecMap = vec2.iter().map(|&(k, v)| (CountingKey(k), v)).collect();
                Prepared::StdVec(a, b)
            } else {
                let a: CountingSetMap = set1.iter().map(|&(k, v)| (CountingKey(k), v)).collect();
                let b: CountingSetMap = set2.iter().map(|&(k, v)| (CountingKey(k), v)).collect();
                Prepared::StdSet(a, b)
            }
        }
        BackendChoice::BaselineMerge => {
            if is_vector {
                Prepared::MergeVec(sorted_vec_entries(&vec1), sorted_vec_entries(&vec2))
            } else {
                let s1: Vec<i64> = set1.iter().map(|(k, _)| *k).collect();
                let s2: Vec<i64> = set2.iter().map(|(k, _)| *k).collect();
                Prepared::MergeSet(sorted_set_entries(&s1), sorted_set_entries(&s2))
            }
        }
    }
}

fn run_once(workload: Workload, prepared: &Prepared) -> u64 {
    match prepared {
        Prepared::TunedSet(method, a, b) => run_tuned_set(*method, workload, a, b),
        Prepared::TunedVec(method, a, b) => run_tuned_vec(*method, workload, a, b),
        Prepared::PersistentSet(backend, a, b) => run_hinted(backend, workload, a, b),
        Prepared::PersistentVec(backend, a, b) => run_hinted(backend, workload, a, b),
        Prepared::AvlSet(backend, a, b) => run_hinted(backend, workload, a, b),
        Prepared::AvlVec(backend, a, b) => run_hinted(backend, workload, a, b),
        Prepared::WbbSet(backend, a, b) => run_hinted(backend, workload, a, b),
        Prepared::WbbVec(backend, a, b) => run_hinted(backend, workload, a, b),
        Prepared::UnbalancedSet(backend, a, b) => run_hinted(backend, workload, a, b),
        Prepared::UnbalancedVec(backend, a, b) => run_hinted(backend, workload, a, b),
        Prepared::StdSet(a, b) => run_stdmap_set(workload, a, b),
        Prepared::StdVec(a, b) => run_stdmap_vec(workload, a, b),
        Prepared::MergeSet(a, b) => run_merge_set(workload, a, b),
        Prepared::MergeVec(a, b) => run_merge_vec(workload, a, b),
    }
}

/// Run one configuration: one warm-up, then `repetitions` timed runs.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchRecord, String> {
    config.validate()?;
    let inputs = generate_inputs(config);
    let prepared = prepare(config, &inputs);
    let mut times: Vec<u64> = Vec::with_capacity(config.repetitions as usize);
    let mut cmp_calls = 0;
    let mut result_count = 0;
    let mut element_moves = 0;
    let mut alloc_events = 0;
    for rep in 0..=config.repetitions {
        instrument::reset();
        let started = Instant::now();
        let count = run_once(config.workload, &prepared);
        let elapsed = started.elapsed().as_nanos() as u64;
        if rep > 0 {
            times.push(elapsed);
        }
        cmp_calls = instrument::comparator_calls();
        element_moves = instrument::element_moves();
        alloc_events = instrument::alloc_events();
        result_count = count;
    }
    let min_ns = times.iter().copied().min().unwrap_or(0);
    let max_ns = times.iter().copied().max().unwrap_or(0);
    let mean_ns = times.iter().copied().sum::<u64>() / times.len().max(1) as u64;
    Ok(BenchRecord {
        workload: config.workload,
        backend: config.backend,
        size1: config.size1,
        size2: config.size2,
        density: config.density,
        seed: config.seed,
        reps: config.repetitions,
        mean_ns,
        min_ns,
        max_ns,
        cmp_calls,
        result_count,
        element_moves,
        alloc_events,
    })
}

// ----------------------------------------------------------------------
// CSV output
// ----------------------------------------------------------------------

pub const CSV_HEADER: &str =
    "workload,backend,size1,size2,density,seed,reps,mean_ns,min_ns,max_ns,cmp_calls,result_count";

pub fn csv_row(record: &BenchRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        record.workload,
        record.backend,
        record.size1,
        record.size2,
        record.density,
        record.seed,
        record.reps,
        record.mean_ns,
        record.min_ns,
        record.max_ns,
        record.cmp_calls,
        record.result_count
    )
}

/// Write records as CSV with the fixed header.
pub fn emit_csv(records: &[BenchRecord], path: &Path) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "{CSV_HEADER}")?;
    for record in records {
        writeln!(file, "{}", csv_row(record))?;
    }
    Ok(())
}

// ----------------------------------------------------------------------
// Sweep grid and tripwire
// ----------------------------------------------------------------------

pub const GRID_SIZES: [usize; 4] = [1_000, 10_000, 100_000, 1_000_000];
pub const GRID_RATIOS: [usize; 3] = [1, 10, 100];
pub const GRID_DENSITIES: [f64; 4] = [1e-4, 1e-3, 1e-2, 1e-1];

/// The default sweep: every workload x size x ratio (x density for vector
/// workloads) x sweep backend, sizes capped at `max_size`.
pub fn default_grid(seed: u64, repetitions: u32, max_size: usize) -> Vec<BenchConfig> {
    let mut configs = Vec::new();
    for workload in Workload::ALL {
        for &size1 in GRID_SIZES.iter().filter(|&&s| s <= max_size) {
            for &ratio in &GRID_RATIOS {
                let size2 = (size1 / ratio).max(1);
                let densities: &[f64] =
                    if workload.is_vector() { &GRID_DENSITIES } else { &[1.0] };
                for &density in densities {
                    for backend in BackendChoice::SWEEP {
                        configs.push(BenchConfig {
                            workload,
                            backend,
                            size1,
                            size2,
                            density,
                            repetitions,
                            seed,
                        });
                    }
                }
            }
        }
    }
    configs
}

/// Cross-backend agreement check: every backend must produce the same result
/// (entry lists for merges, scalar within 1e-12 relative for the inner
/// product, cardinality always) for the same inputs.
pub fn verify_tripwire(seed: u64) -> Result<String, String> {
    let mut summary = String::new();
    for workload in Workload::ALL {
        let config = BenchConfig {
            workload,
            backend: BackendChoice::ArrayBinary,
            size1: 3_000,
            size2: 700,
            density: 0.01,
            repetitions: 1,
            seed,
        };
        let inputs = generate_inputs(&config);
        let mut reference: Option<(BackendChoice, MergedResult)> = None;
        for backend in BackendChoice::ALL {
            let prepared = prepare(&BenchConfig { backend, ..config.clone() }, &inputs);
            let result = merged_result(workload, &prepared);
            match &reference {
                None => reference = Some((backend, result)),
                Some((ref_backend, expected)) => {
                    compare_results(workload, *ref_backend, expected, backend, &result)?
                }
            }
        }
        let (_, reference) = reference.expect("at least one backend ran");
        summary.push_str(&format!(
            "{workload}: {} backends agree (cardinality {})\n",
            BackendChoice::ALL.len(),
            reference.cardinality()
        ));
    }
    Ok(summary)
}

enum MergedResult {
    Set(Vec<(i64, bool)>),
    Vec(Vec<(i64, f64)>),
    Scalar(f64),
}

impl MergedResult {
    fn cardinality(&self) -> u64 {
        match self {
            MergedResult::Set(entries) => count_nonzero(&monoids::bool_or(), entries),
            MergedResult::Vec(entries) => count_nonzero(&monoids::f64_add(), entries),
            MergedResult::Scalar(value) => scalar_count(*value),
        }
    }
}

fn nonzero_set(entries: Vec<(i64, bool)>) -> Vec<(i64, bool)> {
    entries.into_iter().filter(|(_, v)| *v).collect()
}

fn nonzero_vec(entries: Vec<(i64, f64)>) -> Vec<(i64, f64)> {
    entries.into_iter().filter(|(_, v)| *v != 0.0).collect()
}

fn merged_result(workload: Workload, prepared: &Prepared) -> MergedResult {
    let and = monoids::bool_and();
    let mul = monoids::f64_mul();
    match (prepared, workload) {
        (Prepared::TunedSet(m, a, b), Workload::SetUnion) => {
            MergedResult::Set(nonzero_set(algorithms::union_hinted(a, b.clone(), *m).to_list()))
        }
        (Prepared::TunedSet(m, a, b), Workload::SetIntersect) => MergedResult::Set(nonzero_set(
            algorithms::intersect_hinted(&and, a, b.clone(), *m).to_list(),
        )),
        (Prepared::TunedVec(m, a, b), Workload::VecAdd) => {
            MergedResult::Vec(nonzero_vec(algorithms::union_hinted(a, b.clone(), *m).to_list()))
        }
        (Prepared::TunedVec(m, a, b), Workload::VecMul) => MergedResult::Vec(nonzero_vec(
            algorithms::intersect_hinted(&mul, a, b.clone(), *m).to_list(),
        )),
        (Prepared::TunedVec(m, a, b), Workload::VecInner) => {
            MergedResult::Scalar(algorithms::inner_product_hinted(&mul, a, b.clone(), *m))
        }
        (Prepared::PersistentSet(backend, a, b), w) => hinted_set_result(backend, w, a, b),
        (Prepared::AvlSet(backend, a, b), w) => hinted_set_result(backend, w, a, b),
        (Prepared::WbbSet(backend, a, b), w) => hinted_set_result(backend, w, a, b),
        (Prepared::UnbalancedSet(backend, a, b), w) => hinted_set_result(backend, w, a, b),
        (Prepared::PersistentVec(backend, a, b), w) => hinted_vec_result(backend, w, a, b),
        (Prepared::AvlVec(backend, a, b), w) => hinted_vec_result(backend, w, a, b),
        (Prepared::WbbVec(backend, a, b), w) => hinted_vec_result(backend, w, a, b),
        (Prepared::UnbalancedVec(backend, a, b), w) => hinted_vec_result(backend, w, a, b),
        (Prepared::StdSet(a, b), w) => stdmap_set_result(w, a, b),
        (Prepared::StdVec(a, b), w) => stdmap_vec_result(w, a, b),
        (Prepared::MergeSet(a, b), Workload::SetUnion) => {
            MergedResult::Set(nonzero_set(merge_union(a, b, |x, y| x || y)))
        }
        (Prepared::MergeSet(a, b), Workload::SetIntersect) => {
            MergedResult::Set(nonzero_set(merge_intersection(a, b, |x, y| x && y)))
        }
        (Prepared::MergeVec(a, b), Workload::VecAdd) => {
            MergedResult::Vec(nonzero_vec(merge_union(a, b, |x, y| x + y)))
        }
        (Prepared::MergeVec(a, b), Workload::VecMul) => {
            MergedResult::Vec(nonzero_vec(merge_intersection(a, b, |x, y| x * y)))
        }
        (Prepared::MergeVec(a, b), Workload::VecInner) => MergedResult::Scalar(
            merge_intersection(a, b, |x, y| x * y).into_iter().map(|(_, p)| p).sum(),
        ),
        _ => unreachable!("workload/backend family mismatch"),
    }
}

fn hinted_set_result<B: HintedDict<Key = i64, Value = bool>>(
    backend: &B,
    workload: Workload,
    a: &B::Dict,
    b: &B::Dict,
) -> MergedResult {
    let and = monoids::bool_and();
    let list = match workload {
        Workload::SetUnion => backend.to_list(&algorithms::union_fold_tree(backend, a, b.clone())),
        Workload::SetIntersect => {
            backend.to_list(&algorithms::intersect_fold_tree(backend, &and, a, b.clone()))
        }
        _ => unreachable!(),
    };
    MergedResult::Set(nonzero_set(list))
}

fn hinted_vec_result<B: HintedDict<Key = i64, Value = f64>>(
    backend: &B,
    workload: Workload,
    a: &B::Dict,
    b: &B::Dict,
) -> MergedResult {
    let mul = monoids::f64_mul();
    match workload {
        Workload::VecAdd => MergedResult::Vec(nonzero_vec(
            backend.to_list(&algorithms::union_fold_tree(backend, a, b.clone())),
        )),
        Workload::VecMul => MergedResult::Vec(nonzero_vec(
            backend.to_list(&algorithms::intersect_fold_tree(backend, &mul, a, b.clone())),
        )),
        Workload::VecInner => {
            MergedResult::Scalar(algorithms::inner_product_fold_tree(backend, &mul, a, b.clone()))
        }
        _ => unreachable!(),
    }
}

fn stdmap_set_result(workload: Workload, a: &CountingSetMap, b: &CountingSetMap) -> MergedResult {
    let mut result: CountingSetMap = BTreeMap::new();
    match workload {
        Workload::SetUnion => {
            for (k, v) in a.iter().chain(b.iter()) {
                result.entry(*k).and_modify(|w| *w = *w || *v).or_insert(*v);
            }
        }
        Workload::SetIntersect => {
            for (k, v) in a {
                if let Some(w) = b.get(k) {
                    result.insert(*k, *v && *w);
                }
            }
        }
        _ => unreachable!(),
    }
    MergedResult::Set(nonzero_set(result.into_iter().map(|(k, v)| (k.0, v)).collect()))
}

fn stdmap_vec_result(workload: Workload, a: &CountingVecMap, b: &CountingVecMap) -> MergedResult {
    match workload {
        Workload::VecAdd | Workload::VecMul => {
            let mut result: CountingVecMap = BTreeMap::new();
            match workload {
                Workload::VecAdd => {
                    for (k, v) in a.iter().chain(b.iter()) {
                        result.entry(*k).and_modify(|w| *w += *v).or_insert(*v);
                    }
                }
                _ => {
                    for (k, v) in a {
                        if let Some(w) = b.get(k) {
                            result.insert(*k, *v * *w);
                        }
                    }
                }
            }
            MergedResult::Vec(nonzero_vec(result.into_iter().map(|(k, v)| (k.0, v)).collect()))
        }
        Workload::VecInner => {
            let mut acc = 0.0;
            for (k, v) in a {
                if let Some(w) = b.get(k) {
                    acc += *v * *w;
                }
            }
            MergedResult::Scalar(acc)
        }
        _ => unreachable!(),
    }
}

fn compare_results(
    workload: Workload,
    ref_backend: BackendChoice,
    expected: &MergedResult,
    backend: BackendChoice,
    got: &MergedResult,
) -> Result<(), String> {
    let ok = match (expected, got) {
        (MergedResult::Set(a), MergedResult::Set(b)) => a == b,
        (MergedResult::Vec(a), MergedResult::Vec(b)) => a == b,
        (MergedResult::Scalar(a), MergedResult::Scalar(b)) => {
            let scale = a.abs().max(b.abs()).max(1.0);
            (a - b).abs() / scale < 1e-12
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(format!(
            "tripwire: {workload} disagrees between {ref_backend} and {backend}"
        ))
    }
}
