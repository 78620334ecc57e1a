use std::ops::Range;

use kaudit_core::audit::{fuzz_campaign, run_shard, CampaignReport, CheckKind, CheckSummary, FuzzConfig};
use kaudit_core::Result;

/// Runs a campaign on `threads` workers. Each check's index range is cut into
/// contiguous chunks and the partial summaries are merged in index order, so
/// the report does not depend on the thread count.
pub fn run_campaign(cfg: &FuzzConfig, threads: usize) -> Result<CampaignReport> {
    if threads <= 1 || cfg.instances < 2 {
        return fuzz_campaign(cfg);
    }
    cfg.validate()?;
    let chunks = chunk_ranges(cfg.instances, threads);
    let jobs: Vec<(usize, CheckKind, Range<u64>)> = cfg
        .checks
        .iter()
        .enumerate()
        .flat_map(|(slot, &check)| chunks.iter().map(move |r| (slot, check, r.clone())))
        .collect();
    let mut parts: Vec<Option<CheckSummary>> = vec![None; jobs.len()];
    std::thread::scope(|scope| {
        let workers: Vec<_> = (0..threads)
            .map(|w| {
                let jobs = &jobs;
                scope.spawn(move || {
                    (w..jobs.len())
                        .step_by(threads)
                        .map(|j| {
                            let (_, check, ref range) = jobs[j];
                            (j, run_shard(cfg, check, range.clone()))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in workers {
            for (j, summary) in handle.join().expect("campaign worker panicked") {
                parts[j] = Some(summary);
            }
        }
    });
    let mut checks: Vec<CheckSummary> = cfg.checks.iter().map(|&c| CheckSummary::new(c)).collect();
    for ((slot, _, _), part) in jobs.iter().zip(parts) {
        checks[*slot].merge(part.expect("every job ran"), cfg.failure_cap);
    }
    Ok(CampaignReport { seed: cfg.seed, instances: cfg.instances, checks })
}

fn chunk_ranges(total: u64, parts: usize) -> Vec<Range<u64>> {
    let parts = (parts as u64).min(total).max(1);
    let base = total / parts;
    let extra = total % parts;
    let mut start = 0;
    (0..parts)
        .map(|i| {
            let len = base + u64::from(i < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_range() {
        let r = chunk_ranges(10, 3);
        assert_eq!(r, vec![0..4, 4..7, 7..10]);
        assert_eq!(chunk_ranges(2, 8), vec![0..1, 1..2]);
    }

    #[test]
    fn sharded_equals_sequential() {
        let cfg = FuzzConfig { seed: 3, instances: 12, max_dim: 5, ..FuzzConfig::default() };
        let seq = fuzz_campaign(&cfg).unwrap();
        assert_eq!(run_campaign(&cfg, 4).unwrap(), seq);
        assert_eq!(run_campaign(&cfg, 5).unwrap(), seq);
    }
}
