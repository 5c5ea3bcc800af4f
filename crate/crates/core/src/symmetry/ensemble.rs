//! Bernoulli lattice gas and Monte-Carlo estimates of the periodic fraction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Occupation pattern on `{0..box}^d`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeGas {
    pub dim: u8,
    pub extent: usize,
    pub occupied: Vec<bool>,
}

impl LatticeGas {
    pub fn full(dim: u8, extent: usize) -> Self {
        LatticeGas { dim, extent, occupied: vec![true; sites(dim, extent)] }
    }

    pub fn occupation(&self) -> f64 {
        self.occupied.iter().filter(|x| **x).count() as f64 / self.occupied.len() as f64
    }

    fn at(&self, x: usize, y: usize) -> bool {
        self.occupied[y * self.extent + x]
    }

    /// Exact agreement of the pattern with its shift by `t` on the overlap.
    pub fn matches_shift(&self, t: (i64, i64)) -> bool {
        let n = self.extent as i64;
        let rows = if self.dim == 1 { 1 } else { n };
        for y in 0..rows {
            let y2 = y + t.1;
            if !(0..rows).contains(&y2) {
                continue;
            }
            for x in 0..n {
                let x2 = x + t.0;
                if (0..n).contains(&x2) && self.at(x as usize, y as usize) != self.at(x2 as usize, y2 as usize) {
                    return false;
                }
            }
        }
        true
    }

    /// Some shift `t ≠ 0` with `|t_i| ≤ extent/2` matches exactly.
    pub fn has_period(&self) -> bool {
        let h = (self.extent / 2) as i64;
        if self.dim == 1 {
            return (1..=h).any(|t| self.matches_shift((t, 0)));
        }
        // shifts up to sign
        (0..=h).any(|b| (-h..=h).any(|a| (b > 0 || a > 0) && self.matches_shift((a, b))))
    }
}

fn sites(dim: u8, extent: usize) -> usize {
    if dim == 1 {
        extent
    } else {
        extent * extent
    }
}

/// I.i.d. occupation with probability `p`, reproducible from `seed`.
pub fn bernoulli_sample(dim: u8, p: f64, extent: usize, seed: u64) -> Result<LatticeGas> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("p = {p} outside (0, 1)")));
    }
    if dim != 1 && dim != 2 {
        return Err(Error::InvalidArgument(format!("dimension {dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let occupied = (0..sites(dim, extent)).map(|_| rng.gen_bool(p)).collect();
    Ok(LatticeGas { dim, extent, occupied })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricEstimate {
    pub trials: usize,
    pub periodic: usize,
    pub fraction: f64,
    /// Wilson score interval at 95 %.
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize, z: f64) -> (f64, f64) {
    let n_f = n as f64;
    let p = k as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let centre = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Fraction of sampled configurations with a nontrivial period; trial `i`
/// uses seed `seed + i`.
pub fn metric_aperiodicity_estimate<F>(sampler: F, trials: usize, seed: u64) -> Result<MetricEstimate>
where
    F: Fn(u64) -> LatticeGas + Sync,
{
    if trials < 100 {
        return Err(Error::InvalidArgument(format!("{trials} trials (need at least 100)")));
    }
    let periodic = (0..trials as u64).into_par_iter().filter(|i| sampler(seed.wrapping_add(*i)).has_period()).count();
    let (ci_low, ci_high) = wilson_interval(periodic, trials, 1.96);
    Ok(MetricEstimate { trials, periodic, fraction: periodic as f64 / trials as f64, ci_low, ci_high })
}

/// Exact probability that a fair-coin word of length `n` has a period
/// `t ≤ n/2`.
///
/// Two periods `p, q ≤ n/2` satisfy `p + q ≤ n`, so by the Fine–Wilf
/// theorem `gcd(p, q)` is a period too and every such word has a unique
/// minimal period `t`, with a primitive prefix of length `t`. The count is
/// therefore `Σ_{t ≤ n/2} prim(t)`, `prim(t) = Σ_{d | t} μ(t/d) 2^d`.
pub fn fair_coin_period_probability(n: u32) -> f64 {
    assert!(n <= 120, "word length too large for exact counting");
    let mobius = |mut k: u32| -> i128 {
        let mut r = 1i128;
        let mut p = 2;
        while p * p <= k {
            if k % p == 0 {
                k /= p;
                if k % p == 0 {
                    return 0;
                }
                r = -r;
            }
            p += 1;
        }
        if k > 1 {
            r = -r;
        }
        r
    };
    let prim = |t: u32| -> i128 { (1..=t).filter(|d| t % d == 0).map(|d| mobius(t / d) * (1i128 << d)).sum() };
    let count: i128 = (1..=n / 2).map(prim).sum();
    count as f64 / 2f64.powi(n as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn occupation_is_near_p() {
        let g = bernoulli_sample(2, 0.3, 100, 7).unwrap();
        let sigma = (0.3f64 * 0.7 / 1e4).sqrt();
        assert!((g.occupation() - 0.3).abs() < 3.0 * sigma);
        assert_eq!(g, bernoulli_sample(2, 0.3, 100, 7).unwrap());
        assert!(bernoulli_sample(1, 1.0, 10, 0).is_err());
    }

    #[test]
    fn exact_period_probability_matches_enumeration() {
        for n in [8u32, 12, 15] {
            let words = 1u32 << n;
            let hits = (0..words)
                .filter(|w| {
                    let g = LatticeGas { dim: 1, extent: n as usize, occupied: (0..n).map(|i| w >> i & 1 == 1).collect() };
                    g.has_period()
                })
                .count();
            assert!((fair_coin_period_probability(n) - hits as f64 / words as f64).abs() < 1e-15, "n = {n}");
        }
    }

    #[test]
    fn degenerate_samplers_are_periodic() {
        let e = metric_aperiodicity_estimate(|_| LatticeGas::full(1, 64), 200, 0).unwrap();
        assert_eq!(e.fraction, 1.0);
        let stripes = |s: u64| LatticeGas { dim: 2, extent: 16, occupied: (0..256).map(|i| (i % 16 + s as usize) % 3 == 0).collect() };
        assert_eq!(metric_aperiodicity_estimate(stripes, 100, 5).unwrap().fraction, 1.0);
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(0, 2000, 1.96);
        assert_eq!(lo, 0.0);
        assert!((hi - 3.8416 / 2003.8416).abs() < 1e-9);
    }
}
