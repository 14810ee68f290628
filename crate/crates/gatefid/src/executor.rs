use gatefid_core::estimators::PlanExecutor;
use gatefid_core::Result;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Executes plan work items on a dedicated rayon pool. Results are
/// collected in index order, so output does not depend on the thread count.
pub struct RayonExecutor {
    pool: ThreadPool,
}

impl RayonExecutor {
    /// `threads = 0` lets rayon pick the number of threads.
    pub fn new(threads: usize) -> std::result::Result<Self, rayon::ThreadPoolBuildError> {
        Ok(RayonExecutor {
            pool: ThreadPoolBuilder::new().num_threads(threads).build()?,
        })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl PlanExecutor for RayonExecutor {
    fn map<T, F>(&self, len: usize, f: F) -> Vec<Result<T>>
    where
        T: Send,
        F: Fn(usize) -> Result<T> + Sync + Send,
    {
        self.pool
            .install(|| (0..len).into_par_iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gatefid_core::estimators::{Estimator, Protocol, SequentialExecutor};
    use gatefid_core::{gates, QuantumChannel};

    #[test]
    fn matches_sequential_execution() {
        let u = gates::t_gate();
        let ch = QuantumChannel::compose(
            &QuantumChannel::unitary_channel(&u),
            &QuantumChannel::amplitude_damping(1, 0.2).unwrap(),
        )
        .unwrap();
        for p in Protocol::ALL {
            let est = Estimator::new(p, &u, &ch).epsilon(0.2).delta(0.2).seed(4);
            let a = est.run_with(&SequentialExecutor).unwrap();
            let b = est.run_with(&RayonExecutor::new(4).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }
}
