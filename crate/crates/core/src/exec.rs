//! Index-parallel map. With the `parallel` feature the work runs on a
//! dedicated rayon pool of the requested size; without it, or with one
//! worker, it is a plain loop. Output order is always index order.

use std::ops::Range;

pub struct Executor {
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
    workers: usize,
}

impl Executor {
    /// `workers == 0` is treated as one.
    pub fn new(workers: usize) -> Self {
        let workers = workers.max(1);
        #[cfg(feature = "parallel")]
        {
            let pool = (workers > 1).then(|| {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .expect("thread pool construction")
            });
            Self { pool, workers }
        }
        #[cfg(not(feature = "parallel"))]
        Self { workers }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn map<T, F>(&self, range: Range<usize>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| range.into_par_iter().map(&f).collect());
        }
        range.map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_index_order() {
        for workers in [0, 1, 3] {
            let out = Executor::new(workers).map(5..50, |i| i * i);
            assert_eq!(out, (5..50).map(|i| i * i).collect::<Vec<_>>());
        }
    }

    #[test]
    fn empty_range() {
        assert!(Executor::new(4).map(3..3, |i| i).is_empty());
    }
}
