//! Ordered sets and maps driven by cursor-like hints.
//!
//! A hinted dictionary is an ordered, monoid-valued dictionary whose lookup,
//! insertion and deletion can be steered by *hints* — cheap cursors pointing
//! into the structure. Seeking a key yields a hint that partitions the
//! dictionary around it; feeding that hint back into the hinted operations
//! skips the search entirely, which turns per-element loops over two sorted
//! collections (set union, sparse-vector kernels) from `O(n log n)` into
//! amortized linear work.
//!
//! Three interchangeable representations implement the same contract:
//!
//! * [`array::ArrayDict`] — persistent sorted-array views (insert-based bulk
//!   operations), plus the mutating [`array::TunedArrayDict`] with positional
//!   hints and a linear/binary seek knob;
//! * [`tree::UnbalancedDict`] — plain persistent binary trees;
//! * [`tree::AvlDict`] / [`tree::WbbDict`] — join-based balanced trees
//!   (height- and weight-balanced).
//!
//! [`algorithms`] builds the driving workloads (set algebra, sparse-vector
//! addition/multiplication/inner product) generically on top; [`oracle`]
//! contains a brute-force model and a differential-testing harness; [`bench`]
//! backs the `bench` command-line harness that measures comparator counts and
//! wall time against standard-library baselines.

pub mod algebra;
pub mod algorithms;
pub mod array;
pub mod bench;
pub mod dict;
pub mod instrument;
pub mod oracle;
pub mod tree;

pub use algebra::{KeyOrder, Monoid};
pub use dict::{FocusHint, HintedDict};
