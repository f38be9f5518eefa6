use indexmap::IndexMap;

use super::runner::BenchRecord;
use crate::error::{Error, Result};

/// Aggregate of the timed (non-warm-up) trials of one group.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub experiment: String,
    pub implementation: String,
    pub size: String,
    pub n: usize,
    pub mean_s: f64,
    /// Sample standard deviation (`n - 1` denominator). `0.0` when `n == 1`.
    pub sd_s: f64,
    /// False when `n == 1` and `sd_s` carries no information.
    pub sd_defined: bool,
}

/// Mean and sample standard deviation per (experiment, implementation, size)
/// group, in order of first appearance. Warm-up records are excluded.
///
/// Values are sorted before summation so the result does not depend on the
/// order of trials.
pub fn summarize(records: &[BenchRecord]) -> Result<Vec<Summary>> {
    let mut groups: IndexMap<(&str, &str, &str), Vec<f64>> = IndexMap::new();
    for r in records {
        let times = groups
            .entry((&r.experiment, &r.implementation, &r.size))
            .or_default();
        if !r.is_warmup {
            times.push(r.elapsed_s);
        }
    }

    groups
        .into_iter()
        .map(|((experiment, implementation, size), mut times)| {
            if times.is_empty() {
                return Err(Error::Aggregation(format!(
                    "{experiment}/{implementation}/{size}"
                )));
            }
            times.sort_by(f64::total_cmp);
            let n = times.len();
            let mean = times.iter().sum::<f64>() / n as f64;
            let sd = if n > 1 {
                let mut dev: Vec<f64> = times.iter().map(|t| (t - mean).powi(2)).collect();
                dev.sort_by(f64::total_cmp);
                (dev.iter().sum::<f64>() / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            Ok(Summary {
                experiment: experiment.to_string(),
                implementation: implementation.to_string(),
                size: size.to_string(),
                n,
                mean_s: mean,
                sd_s: sd,
                sd_defined: n > 1,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(trial: usize, elapsed_s: f64) -> BenchRecord {
        BenchRecord {
            experiment: "dot".into(),
            implementation: "native-loop".into(),
            size: "1000".into(),
            trial,
            is_warmup: trial == 0,
            elapsed_s,
            seed: 1,
        }
    }

    #[test]
    fn three_trials() {
        let s = summarize(&[rec(1, 1.0), rec(2, 2.0), rec(3, 3.0)]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].n, s[0].mean_s, s[0].sd_s), (3, 2.0, 1.0));
        assert!(s[0].sd_defined);
    }

    #[test]
    fn single_trial_flags_sd() {
        let s = summarize(&[rec(1, 4.5)]).unwrap();
        assert_eq!((s[0].mean_s, s[0].sd_s, s[0].sd_defined), (4.5, 0.0, false));
    }

    #[test]
    fn warmup_is_excluded() {
        let s = summarize(&[rec(0, 9.0), rec(1, 1.0), rec(2, 1.0)]).unwrap();
        assert_eq!((s[0].n, s[0].mean_s), (2, 1.0));
    }

    #[test]
    fn warmup_only_group_fails() {
        assert!(matches!(summarize(&[rec(0, 1.0)]), Err(Error::Aggregation(_))));
    }

    #[test]
    fn groups_keep_first_appearance_order() {
        let mut b = rec(1, 2.0);
        b.size = "10".into();
        let s = summarize(&[b.clone(), rec(1, 1.0), b]).unwrap();
        assert_eq!(s[0].size, "10");
        assert_eq!(s[0].n, 2);
        assert_eq!(s[1].size, "1000");
    }

    proptest! {
        #[test]
        fn permutation_invariant(
            times in prop::collection::vec(1e-6f64..10.0, 1..40),
            seed in any::<u64>(),
        ) {
            let records: Vec<_> = times.iter().enumerate().map(|(i, &t)| rec(i + 1, t)).collect();
            let mut shuffled = records.clone();
            // deterministic Fisher-Yates driven by the proptest seed
            let mut s = seed;
            for i in (1..shuffled.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
            let a = summarize(&records).unwrap();
            let b = summarize(&shuffled).unwrap();
            prop_assert_eq!(a[0].mean_s.to_bits(), b[0].mean_s.to_bits());
            prop_assert_eq!(a[0].sd_s.to_bits(), b[0].sd_s.to_bits());
        }
    }
}
