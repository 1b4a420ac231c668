//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] runs on
//! the rayon thread pool. Without it every call runs sequentially. Results
//! are returned in input order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Maps `f` over `items` and folds the results with an associative,
/// commutative `combine`.
pub fn map_reduce<T, R, F, C>(exec: Execution, items: &[T], identity: R, f: F, combine: C) -> R
where
    T: Sync,
    R: Send + Clone + Sync,
    F: Fn(&T) -> R + Sync + Send,
    C: Fn(R, R) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items
            .par_iter()
            .map(&f)
            .reduce(|| identity.clone(), &combine),
        _ => items.iter().map(f).fold(identity, combine),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(
                map(exec, &xs, |x| x * 2),
                xs.iter().map(|x| x * 2).collect::<Vec<_>>()
            );
            assert_eq!(map_reduce(exec, &xs, 0, |&x| x, |a, b| a + b), 499_500);
            assert_eq!(map_reduce(exec, &xs, 0, |&x| x, u64::max), 999);
        }
    }
}
