//! Order-preserving fan-out over independent work items.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] uses
//! rayon; without it every mode runs on the calling thread. Results always
//! come back in input order, so reports do not depend on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Parallel,
    Sequential,
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
    /// Whether work will actually be spread across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Like [`map`](Self::map), stopping at an error. Which error is
    /// returned when several items fail is the first in input order.
    pub fn try_map<T, R, F>(self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }
}
