//! Timing harness for the fast torque map.
//!
//! The fast path costs a fixed number of table lookups per output pixel, so
//! its per-pixel time should not depend on the patch side. The naive
//! summation is timed on a sample of pixels as a contrast.

use std::time::{Duration, Instant};

use imgtorque::edgemap::{Bin, OrientedEdgeMap};
use imgtorque::torque::{patch_torque_naive, torque_map_fast, Patch, TorquePrecompute};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{CliError, CliResult};

pub const DEFAULT_MAX_RATIO: f64 = 1.3;

/// Shortest median run that counts as a meaningful measurement.
pub const MIN_MEASURABLE: Duration = Duration::from_micros(500);

#[derive(Debug, Clone, Serialize)]
pub struct BenchConfig {
    pub width: usize,
    pub height: usize,
    pub sizes: Vec<usize>,
    pub repeats: usize,
    pub density: f64,
    pub seed: u64,
    pub alpha: f64,
    /// Pixels timed with the naive summation per size; 0 disables it.
    pub naive_samples: usize,
    pub max_ratio: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            width: 512,
            height: 512,
            sizes: vec![5, 81],
            repeats: 9,
            density: 0.1,
            seed: 42,
            alpha: 2.0,
            naive_samples: 2000,
            max_ratio: DEFAULT_MAX_RATIO,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.sizes.len() < 2 {
            return Err(CliError::Usage("at least two patch sides are required".into()));
        }
        if self.repeats < 3 {
            return Err(CliError::Usage(format!(
                "repeats must be at least 3, got {}",
                self.repeats
            )));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(CliError::Invalid(format!("density {} must lie in [0, 1]", self.density)));
        }
        if !(self.max_ratio >= 1.0) {
            return Err(CliError::Invalid(format!("max ratio {} must be at least 1", self.max_ratio)));
        }
        let limit = self.width.min(self.height);
        if let Some(&s) = self.sizes.iter().find(|&&s| s < 3 || s % 2 == 0 || s > limit) {
            return Err(CliError::Invalid(format!(
                "patch side {s} must be odd with 3 <= side <= {limit}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SizeTiming {
    pub side: usize,
    /// Median over repeats.
    pub ns_per_pixel: f64,
    pub min_ns_per_pixel: f64,
    pub max_ns_per_pixel: f64,
    /// Mean over the sampled pixels, when the naive contrast ran.
    pub naive_ns_per_pixel: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub width: usize,
    pub height: usize,
    pub repeats: usize,
    pub seed: u64,
    pub density: f64,
    pub edge_pixels: usize,
    /// Median time to build the 16 summed area tables.
    pub sat_build_ms: f64,
    pub timings: Vec<SizeTiming>,
    /// Largest over smallest median per-pixel time.
    pub ratio: f64,
    pub max_ratio: f64,
    pub passed: bool,
}

/// Seeded edge map with independent per-pixel presence and uniform bins.
pub fn random_edge_map(width: usize, height: usize, density: f64, seed: u64) -> OrientedEdgeMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = OrientedEdgeMap::empty(width, height);
    for y in 0..height {
        for x in 0..width {
            if rng.gen_bool(density) {
                edges.set(x, y, Bin::new(rng.gen_range(0..8)));
            }
        }
    }
    edges
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn time<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

pub fn run_bench(cfg: &BenchConfig) -> CliResult<BenchReport> {
    cfg.validate()?;
    let edges = random_edge_map(cfg.width, cfg.height, cfg.density, cfg.seed);
    let pixels = (cfg.width * cfg.height) as f64;

    let mut build_ms = Vec::with_capacity(cfg.repeats);
    let mut pre = None;
    for _ in 0..cfg.repeats {
        let (p, t) = time(|| TorquePrecompute::build(&edges));
        build_ms.push(t.as_secs_f64() * 1e3);
        pre = Some(p);
    }
    let pre = pre.expect("repeats >= 3");

    for &side in &cfg.sizes {
        // warm-up
        std::hint::black_box(torque_map_fast(&pre, side, cfg.alpha)?);
    }
    // Sizes are interleaved within each repeat so that slow drift in the
    // machine state affects all of them alike.
    let mut runs = vec![Vec::with_capacity(cfg.repeats); cfg.sizes.len()];
    for _ in 0..cfg.repeats {
        for (k, &side) in cfg.sizes.iter().enumerate() {
            let (map, t) = time(|| torque_map_fast(&pre, side, cfg.alpha));
            std::hint::black_box(map?);
            runs[k].push(t.as_secs_f64());
        }
    }
    let mut timings = Vec::with_capacity(cfg.sizes.len());
    for (&side, secs) in cfg.sizes.iter().zip(&mut runs) {
        let med = median(secs);
        if med < MIN_MEASURABLE.as_secs_f64() {
            return Err(CliError::Invalid(format!(
                "median run of {:.1} us for side {side} is below the {} us timer floor; use a larger image",
                med * 1e6,
                MIN_MEASURABLE.as_micros()
            )));
        }
        let ns = |s: f64| s * 1e9 / pixels;
        timings.push(SizeTiming {
            side,
            ns_per_pixel: ns(med),
            min_ns_per_pixel: ns(secs[0]),
            max_ns_per_pixel: ns(secs[secs.len() - 1]),
            naive_ns_per_pixel: naive_timing(&edges, side, cfg)?,
        });
    }

    let fastest = timings.iter().map(|t| t.ns_per_pixel).fold(f64::INFINITY, f64::min);
    let slowest = timings.iter().map(|t| t.ns_per_pixel).fold(0.0, f64::max);
    let ratio = slowest / fastest;
    Ok(BenchReport {
        width: cfg.width,
        height: cfg.height,
        repeats: cfg.repeats,
        seed: cfg.seed,
        density: cfg.density,
        edge_pixels: edges.count(),
        sat_build_ms: median(&mut build_ms),
        timings,
        ratio,
        max_ratio: cfg.max_ratio,
        passed: ratio <= cfg.max_ratio,
    })
}

fn naive_timing(edges: &OrientedEdgeMap, side: usize, cfg: &BenchConfig) -> CliResult<Option<f64>> {
    if cfg.naive_samples == 0 {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ side as u64);
    let centers: Vec<Patch> = (0..cfg.naive_samples)
        .map(|_| {
            let x = rng.gen_range(0..cfg.width) as i64;
            let y = rng.gen_range(0..cfg.height) as i64;
            Patch::new(x, y, side)
        })
        .collect::<imgtorque::Result<_>>()?;
    let (sum, t) = time(|| {
        centers
            .iter()
            .map(|&p| patch_torque_naive(edges, p, cfg.alpha))
            .sum::<imgtorque::Result<f64>>()
    });
    std::hint::black_box(sum?);
    Ok(Some(t.as_secs_f64() * 1e9 / cfg.naive_samples as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_map_is_reproducible() {
        let a = random_edge_map(40, 30, 0.2, 9);
        assert_eq!(a, random_edge_map(40, 30, 0.2, 9));
        assert_ne!(a, random_edge_map(40, 30, 0.2, 10));
        let frac = a.count() as f64 / 1200.0;
        assert!((frac - 0.2).abs() < 0.05);
    }

    #[test]
    fn config_checks() {
        let ok = BenchConfig::default();
        assert!(ok.validate().is_ok());
        let one_size = BenchConfig { sizes: vec![5], ..ok.clone() };
        assert!(matches!(one_size.validate(), Err(CliError::Usage(_))));
        let few = BenchConfig { repeats: 1, ..ok.clone() };
        assert!(matches!(few.validate(), Err(CliError::Usage(_))));
        let even = BenchConfig { sizes: vec![4, 9], ..ok.clone() };
        assert!(matches!(even.validate(), Err(CliError::Invalid(_))));
        let big = BenchConfig { sizes: vec![5, 513], ..ok };
        assert!(matches!(big.validate(), Err(CliError::Invalid(_))));
    }

    #[test]
    fn tiny_image_hits_timer_floor() {
        let cfg = BenchConfig {
            width: 8,
            height: 8,
            sizes: vec![3, 5],
            repeats: 3,
            naive_samples: 0,
            ..BenchConfig::default()
        };
        assert!(matches!(run_bench(&cfg), Err(CliError::Invalid(_))));
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
