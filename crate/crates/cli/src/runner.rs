use ctpower_core::{Result, SampleRunner};
use rayon::prelude::*;

/// Fans samples out over the rayon pool. Collection is index-ordered, and
/// every sample owns its RNG stream, so results match [`Sequential`] bit for
/// bit.
///
/// [`Sequential`]: ctpower_core::Sequential
#[derive(Debug, Clone, Copy, Default)]
pub struct Parallel;

impl SampleRunner for Parallel {
    fn run(&self, count: usize, sample: &(dyn Fn(u64) -> Result<f64> + Sync)) -> Result<Vec<f64>> {
        (0..count as u64).into_par_iter().map(sample).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ctpower_core::analysis::average_ncf_mc_with;
    use ctpower_core::{InputMode, McConfig, Scheme, Sequential};

    #[test]
    fn matches_sequential() {
        let s = Scheme::nghz(2, 1).unwrap();
        let cfg = McConfig::new(500, 42, InputMode::Arbitrary);
        let a = average_ncf_mc_with(&Parallel, &s.spec, 0, &cfg).unwrap();
        let b = average_ncf_mc_with(&Sequential, &s.spec, 0, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pool_size_does_not_matter() {
        let s = Scheme::two_ghz().unwrap();
        let cfg = McConfig::new(300, 7, InputMode::Product);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| average_ncf_mc_with(&Parallel, &s.spec, 0, &cfg).unwrap())
        };
        assert_eq!(run(1), run(3));
    }
}
