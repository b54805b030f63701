use crate::error::{Error, Result};

/// Upper bound on the mean number of reads needed to see `threshold`
/// distinct molecules of the true codeword:
/// `sum_{k=0}^{threshold-1} 1 / ((1-p)(1-k/M))`.
pub fn expected_reads_upper_bound(m: usize, p: f64, threshold: usize) -> Result<f64> {
    if threshold > m {
        return Err(Error::Domain(format!("threshold {threshold} exceeds M={m}")));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::Domain(format!("p={p} must be in [0,1)")));
    }
    let mf = m as f64;
    Ok((0..threshold)
        .map(|k| 1.0 / ((1.0 - p) * (1.0 - k as f64 / mf)))
        .sum())
}

/// Union bound on the chance that `d_m` errors arrive before
/// `ones_threshold` fresh error-free molecules:
/// `2^{dM+T} (p / ((1-p)(1-T/M)))^{dM}`. Values above one are returned
/// unchanged.
pub fn error_prob_upper_bound(m: usize, p: f64, d_m: usize, ones_threshold: usize) -> Result<f64> {
    if ones_threshold > m {
        return Err(Error::Domain(format!("threshold {ones_threshold} exceeds M={m}")));
    }
    let denom = (1.0 - p) * (1.0 - ones_threshold as f64 / m as f64);
    if denom <= 0.0 {
        return Err(Error::Domain("division by zero in error bound".into()));
    }
    Ok(((d_m + ones_threshold) as f64).exp2() * (p / denom).powf(d_m as f64))
}

/// Exact probability that the error/fresh-molecule string collects `d_m`
/// zeros before `ones_threshold` ones.
///
/// With `k = zeros + ones` (every error is assumed to have produced a new
/// distinct molecule), the next string symbol is a zero with probability
/// `p / (p + (1-p)(1 - k/M))`. Once `k = M` no fresh error-free molecule
/// exists, so only zeros can follow.
pub fn race_dp(m: usize, p: f64, d_m: usize, ones_threshold: usize) -> f64 {
    if d_m == 0 {
        return 1.0;
    }
    if ones_threshold == 0 || p == 0.0 {
        return 0.0;
    }
    let mf = m as f64;
    // win[z1] holds P(zeros win | z0 + 1 zeros, z1 ones) while sweeping z0 down
    let mut next = vec![1.0f64; ones_threshold + 1];
    for z0 in (0..d_m).rev() {
        let mut cur = vec![0.0f64; ones_threshold + 1];
        for z1 in (0..ones_threshold).rev() {
            let k = z0 + z1;
            cur[z1] = if k >= m {
                1.0
            } else {
                let fresh = (1.0 - p) * (1.0 - k as f64 / mf);
                let q0 = p / (p + fresh);
                q0 * next[z1] + (1.0 - q0) * cur[z1 + 1]
            };
        }
        next = cur;
    }
    next[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{ToPrimitive, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn exact_harmonic(m: i64, threshold: i64) -> BigRational {
        let mut acc = BigRational::zero();
        for k in 0..threshold {
            acc += BigRational::new(m.into(), (m - k).into());
        }
        acc
    }

    #[test]
    fn reads_bound_examples() {
        let exact = exact_harmonic(10, 5);
        // 1 + 10/9 + 10/8 + 10/7 + 10/6
        assert_eq!(exact, BigRational::new(1627.into(), 252.into()));
        let got = expected_reads_upper_bound(10, 0.0, 5).unwrap();
        assert!((got - exact.to_f64().unwrap()).abs() < 1e-12);
        assert!((got - 6.456349).abs() < 1e-6);
        assert_eq!(expected_reads_upper_bound(10, 0.3, 0).unwrap(), 0.0);
        let noisy = expected_reads_upper_bound(10, 0.1, 5).unwrap();
        assert!((noisy - 7.173721).abs() < 1e-6);
        assert!(expected_reads_upper_bound(10, 0.0, 10).unwrap().is_finite());
        assert!(expected_reads_upper_bound(10, 0.0, 11).is_err());
        assert!(expected_reads_upper_bound(10, 1.0, 3).is_err());
    }

    #[test]
    fn error_bound_examples() {
        assert_eq!(error_prob_upper_bound(40, 0.0, 3, 20).unwrap(), 0.0);
        let b = error_prob_upper_bound(40, 0.001, 4, 20).unwrap();
        let oracle = 2f64.powi(24) * (0.001f64 / 0.4995).powi(4);
        assert!((b - oracle).abs() < 1e-15);
        assert!((b - 2.695e-4).abs() < 5e-7);
        assert_eq!(error_prob_upper_bound(40, 0.2, 0, 7).unwrap(), 128.0);
        assert!(error_prob_upper_bound(10, 0.1, 2, 10).is_err());
    }

    #[test]
    fn race_trivial_cases() {
        assert_eq!(race_dp(10, 0.0, 3, 4), 0.0);
        assert_eq!(race_dp(10, 0.3, 0, 4), 1.0);
        assert!((race_dp(2, 0.1, 1, 1) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn race_two_step_enumeration() {
        // dM = 1, T = 2: zero first, or one then zero
        let (m, p) = (4usize, 0.3f64);
        let q = |k: usize| p / (p + (1.0 - p) * (1.0 - k as f64 / m as f64));
        let expected = q(0) + (1.0 - q(0)) * q(1);
        assert!((race_dp(m, p, 1, 2) - expected).abs() < 1e-15);
    }

    fn race_mc(m: usize, p: f64, d_m: usize, t: usize, trials: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut wins = 0usize;
        for _ in 0..trials {
            let (mut z0, mut z1) = (0usize, 0usize);
            while z0 < d_m && z1 < t {
                if rng.gen_bool(p) {
                    z0 += 1;
                } else if rng.gen_range(0..m) >= z0 + z1 {
                    z1 += 1;
                }
            }
            wins += usize::from(z0 >= d_m);
        }
        wins as f64 / trials as f64
    }

    #[test]
    fn race_matches_simulation() {
        for &p in &[0.05, 0.2] {
            for &(m, d, t) in &[(10usize, 2usize, 5usize), (20, 3, 10)] {
                let exact = race_dp(m, p, d, t);
                let trials = 200_000;
                let est = race_mc(m, p, d, t, trials, 11);
                let sd = (exact * (1.0 - exact) / trials as f64).sqrt();
                assert!((est - exact).abs() <= 3.0 * sd + 1e-9, "m={m} p={p}: {est} vs {exact}");
            }
        }
    }

    #[test]
    fn race_below_union_bound() {
        // with at most two zeros the pessimistic k never passes T
        for m in [10usize, 20, 40] {
            for &p in &[0.001, 0.01, 0.05, 0.2] {
                for d in 0..=2 {
                    for t in (0..m).filter(|t| d + t <= m + 1) {
                        let bound = error_prob_upper_bound(m, p, d, t).unwrap();
                        if bound <= 1.0 {
                            assert!(race_dp(m, p, d, t) <= bound * (1.0 + 1e-12));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn union_bound_undercuts_race_with_many_zeros() {
        // k reaches d + T - 2 > T, past what the per-step factor covers
        let bound = error_prob_upper_bound(20, 0.01, 11, 10).unwrap();
        assert!(bound <= 1.0);
        assert!(race_dp(20, 0.01, 11, 10) > bound);
    }
}
