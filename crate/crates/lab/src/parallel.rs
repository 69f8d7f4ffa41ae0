use rayon::prelude::*;

use crate::error::{LabError, LabResult};

/// `f(0), …, f(n−1)` on `jobs` threads (0: pool default, 1: caller thread),
/// returned in index order so downstream reductions do not depend on scheduling.
pub fn ordered_map<T, F>(jobs: usize, n: usize, f: F) -> LabResult<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> LabResult<T> + Sync + Send,
{
    if jobs == 1 {
        return (0..n).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| LabError::Pool(e.to_string()))?;
    pool.install(|| (0..n).into_par_iter().map(&f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let a = ordered_map(1, 100, |i| Ok(i * i)).unwrap();
        let b = ordered_map(4, 100, |i| Ok(i * i)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn first_error_wins() {
        let r: LabResult<Vec<usize>> = ordered_map(3, 10, |i| {
            if i == 4 {
                Err(LabError::Config("boom".into()))
            } else {
                Ok(i)
            }
        });
        assert!(r.is_err());
    }
}
