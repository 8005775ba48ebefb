//! Threaded front end for the particle walker.

use molink_core::channel::ChannelParams;
use molink_core::particle::{simulate_partition, ArrivalRecord, SimConfig};
use rayon::prelude::*;

use crate::RunError;

/// Runs `partitions` independent RNG substreams across the thread pool and
/// merges them in index order. The result is a pure function of the inputs,
/// whatever the worker count.
pub fn simulate_parallel(
    params: &ChannelParams,
    cfg: &SimConfig,
    partitions: u64,
) -> Result<ArrivalRecord, RunError> {
    if partitions == 0 {
        return Err(RunError::Config("mc partitions must be >= 1".into()));
    }
    let parts: Vec<ArrivalRecord> = (0..partitions)
        .into_par_iter()
        .map(|i| simulate_partition(params, cfg, i, partitions))
        .collect::<Result<_, _>>()?;
    Ok(ArrivalRecord::merge(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use molink_core::particle::simulate;

    #[test]
    fn parallel_merge_is_deterministic_and_complete() {
        let p = ChannelParams::one_dim(1.0, 1.0).unwrap();
        let cfg = SimConfig::new(1e-2, 0.3, 40_000, 5);
        let a = simulate_parallel(&p, &cfg, 8).unwrap();
        let b = simulate_parallel(&p, &cfg, 8).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.emitted_count, 40_000);
    }

    #[test]
    fn single_partition_equals_sequential_run() {
        let p = ChannelParams::one_dim(1.0, 1.0).unwrap();
        let cfg = SimConfig::new(1e-2, 0.3, 5_000, 9);
        assert_eq!(simulate_parallel(&p, &cfg, 1).unwrap(), simulate(&p, &cfg).unwrap());
    }
}
