//! Monte-Carlo estimates for random query trees.
//!
//! A query tree grows from a root of rank 1 (the worst case): every node
//! draws `d` children with i.i.d. uniform ranks and keeps those ranked below
//! itself. The tree size bounds the work of one local query, and its tail is
//! expected to decay exponentially.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Size of one simulated tree. `truncated` means growth was cut at the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeSample {
    pub size: usize,
    pub truncated: bool,
}

/// Grows one query tree. Ranks are uniform `u64`s with the root at
/// `u64::MAX`; a child whose rank ties its parent's is pruned.
pub fn simulate_query_tree<R: RngCore + ?Sized>(d: usize, cap: usize, rng: &mut R) -> TreeSample {
    assert!(d >= 1 && cap >= 1, "d and cap must be positive");
    let mut size = 1;
    let mut stack = vec![u64::MAX];
    while let Some(parent) = stack.pop() {
        for _ in 0..d {
            let r: u64 = rng.gen();
            if r < parent {
                if size == cap {
                    return TreeSample {
                        size,
                        truncated: true,
                    };
                }
                size += 1;
                stack.push(r);
            }
        }
    }
    TreeSample {
        size,
        truncated: false,
    }
}

/// Sample `i` uses ChaCha stream `i` under `seed`, so the sequence is
/// reproducible regardless of how samples are scheduled.
pub fn sample_trees(d: usize, samples: usize, cap: usize, seed: u64) -> Vec<TreeSample> {
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            simulate_query_tree(d, cap, &mut rng)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    pub d: usize,
    pub samples: usize,
    pub cap: usize,
    /// `(N, Pr[|T| ≥ N])` for `N = 1..=cap`.
    pub ccdf: Vec<(usize, f64)>,
    /// Least-squares slope of `ln ccdf` against `N` over `ccdf ≥ 10/samples`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Points used by the fit.
    pub fit_points: usize,
    pub mean_size: f64,
    pub truncated_fraction: f64,
}

/// Above this truncation fraction the fit says little about the tail.
pub const MAX_TRUNCATED_FRACTION: f64 = 0.01;

impl TailReport {
    pub fn is_conclusive(&self) -> bool {
        self.truncated_fraction < MAX_TRUNCATED_FRACTION && self.fit_points >= 2
    }

    /// `N,ccdf` rows followed by a `#` summary line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,ccdf\n");
        for (n, p) in &self.ccdf {
            out.push_str(&format!("{n},{p}\n"));
        }
        out.push_str(&format!(
            "# d={} samples={} cap={} slope={:.6} intercept={:.6} r2={:.6} fit_points={} mean={:.4} truncated_fraction={:.6} conclusive={}\n",
            self.d,
            self.samples,
            self.cap,
            self.slope,
            self.intercept,
            self.r_squared,
            self.fit_points,
            self.mean_size,
            self.truncated_fraction,
            self.is_conclusive()
        ));
        out
    }
}

/// Empirical CCDF of tree sizes plus a log-linear fit of its tail.
pub fn tail_ccdf(d: usize, samples: usize, cap: usize, seed: u64) -> TailReport {
    let trees = sample_trees(d, samples, cap, seed);
    tail_from_samples(d, cap, &trees)
}

pub fn tail_from_samples(d: usize, cap: usize, trees: &[TreeSample]) -> TailReport {
    let samples = trees.len();
    let mut counts = vec![0usize; cap + 2];
    for t in trees {
        counts[t.size.min(cap)] += 1;
    }
    // at_least[N] = #{size ≥ N}
    let mut at_least = vec![0usize; cap + 2];
    for n in (1..=cap).rev() {
        at_least[n] = at_least[n + 1] + counts[n];
    }
    let ccdf: Vec<(usize, f64)> = (1..=cap)
        .map(|n| (n, at_least[n] as f64 / samples.max(1) as f64))
        .collect();

    let floor = 10.0 / samples.max(1) as f64;
    let points: Vec<(f64, f64)> = ccdf
        .iter()
        .filter(|&&(_, p)| p >= floor && p > 0.0)
        .map(|&(n, p)| (n as f64, p.ln()))
        .collect();
    let (slope, intercept, r_squared) = linear_fit(&points);

    let truncated = trees.iter().filter(|t| t.truncated).count();
    TailReport {
        d,
        samples,
        cap,
        ccdf,
        slope,
        intercept,
        r_squared,
        fit_points: points.len(),
        mean_size: trees.iter().map(|t| t.size as f64).sum::<f64>() / samples.max(1) as f64,
        truncated_fraction: truncated as f64 / samples.max(1) as f64,
    }
}

/// Ordinary least squares `y = slope·x + intercept`; returns `(slope, intercept, R²)`.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    if points.len() < 2 {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).min(1.0)
    };
    (slope, intercept, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every draw is the maximal rank, so no child ever beats its parent.
    struct HighRanks;

    impl RngCore for HighRanks {
        fn next_u32(&mut self) -> u32 {
            u32::MAX
        }
        fn next_u64(&mut self) -> u64 {
            u64::MAX
        }
        fn fill_bytes(&mut self, dest: &mut [u8]) {
            dest.fill(0xff);
        }
        fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
            dest.fill(0xff);
            Ok(())
        }
    }

    #[test]
    fn high_ranks_prune_immediately() {
        let t = simulate_query_tree(1, 100, &mut HighRanks);
        assert_eq!(
            t,
            TreeSample {
                size: 1,
                truncated: false
            }
        );
        let t = simulate_query_tree(5, 100, &mut HighRanks);
        assert_eq!(t.size, 1);
    }

    #[test]
    fn cap_one_truncates_when_a_child_survives() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let t = simulate_query_tree(2, 1, &mut rng);
            assert_eq!(t.size, 1);
            assert!(t.truncated);
        }
        assert!(!simulate_query_tree(2, 1, &mut HighRanks).truncated);
    }

    #[test]
    fn truncation_implies_cap() {
        for t in sample_trees(4, 2000, 20, 3) {
            assert!(t.size >= 1 && t.size <= 20);
            if t.truncated {
                assert_eq!(t.size, 20);
            }
        }
    }

    #[test]
    fn reproducible() {
        assert_eq!(sample_trees(3, 500, 100, 9), sample_trees(3, 500, 100, 9));
        assert_ne!(sample_trees(3, 500, 100, 9), sample_trees(3, 500, 100, 10));
    }

    #[test]
    fn ccdf_shape() {
        let r = tail_ccdf(3, 5000, 200, 2);
        assert_eq!(r.ccdf[0], (1, 1.0));
        assert!(r.ccdf.windows(2).all(|w| w[1].1 <= w[0].1));
        assert_eq!(r.ccdf.len(), 200);
        let csv = r.to_csv();
        assert!(csv.starts_with("N,ccdf\n1,1\n"));
        assert!(csv.lines().last().unwrap().starts_with("# d=3"));
    }

    #[test]
    fn fit_recovers_line() {
        let pts: Vec<(f64, f64)> = (0..10).map(|x| (x as f64, 2.0 - 0.5 * x as f64)).collect();
        let (m, b, r2) = linear_fit(&pts);
        assert!((m + 0.5).abs() < 1e-12);
        assert!((b - 2.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }
}
