//! Data-parallel helpers. With the `parallel` feature the loops run on rayon's pool;
//! without it, or in `ExecMode::Sequential`, they run in order on the calling thread.
//! Results never depend on the mode.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExecMode {
    #[default]
    Parallel,
    Sequential,
}

impl ExecMode {
    /// Whether parallel execution is compiled in.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// First item (in slice order) for which `f` returns `Some`.
pub fn find_first<T, R, F>(items: &[T], mode: ExecMode, f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        use rayon::prelude::*;
        return items
            .par_iter()
            .map(&f)
            .find_first(Option::is_some)
            .flatten();
    }
    let _ = mode;
    items.iter().find_map(f)
}

/// `items.map(f)` preserving order.
pub fn map<T, R, F>(items: &[T], mode: ExecMode, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let v: Vec<u32> = (0..1000).collect();
        let pick = |x: &u32| (x % 97 == 96).then_some(*x);
        assert_eq!(find_first(&v, ExecMode::Parallel, pick), Some(96));
        assert_eq!(find_first(&v, ExecMode::Sequential, pick), Some(96));
        assert_eq!(
            map(&v, ExecMode::Parallel, |x| x * 2),
            map(&v, ExecMode::Sequential, |x| x * 2)
        );
    }
}
