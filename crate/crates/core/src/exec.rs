//! Execution policy for the data-parallel loops (trials, guesses, oracle
//! sweeps). Without the `parallel` feature every policy runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this policy actually fans out in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Short-circuiting `any` over `0..n`. The sequential path stops at the
    /// first hit; the parallel path stops soon after some worker hits.
    pub fn any_range<F>(self, n: usize, f: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().any(f);
        }
        (0..n).any(f)
    }

    /// Fallible variant of [`Exec::any_range`]; the first error wins.
    pub fn try_any_range<E, F>(self, n: usize, f: F) -> Result<bool, E>
    where
        E: Send,
        F: Fn(usize) -> Result<bool, E> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n)
                .into_par_iter()
                .map(&f)
                .find_any(|r| !matches!(r, Ok(false)))
                .unwrap_or(Ok(false));
        }
        for i in 0..n {
            if f(i)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
