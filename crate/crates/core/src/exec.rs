//! Execution strategy for the data-parallel loops.
//!
//! `Parallel` uses rayon when the `parallel` feature is compiled in and
//! silently degrades to the sequential path otherwise, so callers never
//! need their own `cfg` gates.

use std::ops::RangeInclusive;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// True when this strategy actually runs on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Maps every index in `range` and folds the results with `reduce`.
    ///
    /// `reduce` must be associative and `identity` its neutral element;
    /// the parallel path combines partial results in an unspecified tree.
    pub fn map_reduce<R, M, I, F>(
        self,
        range: RangeInclusive<u64>,
        map: M,
        identity: I,
        reduce: F,
    ) -> R
    where
        R: Send,
        M: Fn(u64) -> R + Sync + Send,
        I: Fn() -> R + Sync + Send,
        F: Fn(R, R) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            return range.into_par_iter().map(map).reduce(identity, reduce);
        }
        range.map(map).fold(identity(), reduce)
    }

    /// Order-preserving map over a slice.
    pub fn map_collect<T, R, M>(self, items: &[T], map: M) -> Vec<R>
    where
        T: Sync,
        R: Send,
        M: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            return items.par_iter().map(map).collect();
        }
        items.iter().map(map).collect()
    }
}
