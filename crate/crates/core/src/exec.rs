//! Execution options shared by the algorithms.
//!
//! With the `parallel` feature (default) independent jobs — elimination row
//! updates, pairwise existence checks, per-class telescoping — run on the rayon
//! pool. Without it, or with [`Parallelism::Sequential`], everything runs on the
//! calling thread. Results are identical either way.

/// How independent jobs are executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    Parallel,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }
}

/// Options for the telescoping algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    /// Largest telescoper order tried before giving up.
    pub max_order: usize,
    pub parallelism: Parallelism,
}

impl Default for Config {
    fn default() -> Self {
        Config { max_order: 12, parallelism: Parallelism::default() }
    }
}

impl Config {
    pub fn sequential() -> Self {
        Config { parallelism: Parallelism::Sequential, ..Config::default() }
    }
}

#[cfg(feature = "parallel")]
pub(crate) fn map<T, U, F>(p: Parallelism, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    match p {
        Parallelism::Parallel if items.len() > 1 => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, U, F>(_p: Parallelism, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn for_each_mut<T, F>(p: Parallelism, items: &mut [T], f: F)
where
    T: Send,
    F: Fn(&mut T) + Sync + Send,
{
    use rayon::prelude::*;
    match p {
        Parallelism::Parallel if items.len() > 1 => items.par_iter_mut().for_each(f),
        _ => items.iter_mut().for_each(f),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn for_each_mut<T, F>(_p: Parallelism, items: &mut [T], f: F)
where
    T: Send,
    F: Fn(&mut T) + Sync + Send,
{
    items.iter_mut().for_each(f)
}
