//! Execution strategy for the data-parallel scans.
//!
//! Every exhaustive scan in the crate (nerve enumeration, coboundaries, cocycle
//! and associativity checks) goes through [`Strategy`]. With the `parallel`
//! feature disabled both variants run sequentially, so results never depend on
//! the feature set: parallel maps preserve order and searches report the
//! lowest failing index.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

// Below this many items the rayon split overhead dominates.
#[cfg(feature = "parallel")]
const MIN_PARALLEL_LEN: usize = 2048;

impl Strategy {
    #[cfg(feature = "parallel")]
    fn go_parallel(self, n: usize) -> bool {
        self == Strategy::Parallel && n >= MIN_PARALLEL_LEN
    }

    /// `(0..n).map(f).collect()`, in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.go_parallel(n) {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Concatenation of `f(0), f(1), ..., f(n-1)`, in index order.
    pub fn flat_map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> Vec<T> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Strategy::Parallel && n > 1 {
            let chunks: Vec<Vec<T>> = (0..n).into_par_iter().map(f).collect();
            return chunks.into_iter().flatten().collect();
        }
        (0..n).flat_map(f).collect()
    }

    /// Lowest index in `0..n` satisfying `pred`.
    pub fn position<F>(self, n: usize, pred: F) -> Option<usize>
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.go_parallel(n) {
            return (0..n).into_par_iter().position_first(pred);
        }
        (0..n).position(pred)
    }

    /// All indices in `0..n` satisfying `pred`, ascending.
    pub fn filter<F>(self, n: usize, pred: F) -> Vec<usize>
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.go_parallel(n) {
            return (0..n).into_par_iter().filter(|&i| pred(i)).collect();
        }
        (0..n).filter(|&i| pred(i)).collect()
    }
}
