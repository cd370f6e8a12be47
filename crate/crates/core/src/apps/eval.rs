use std::fmt::Write;

use serde::Serialize;

use crate::raster::FloatMap;
use crate::{Error, Result};

/// Threshold used to binarize ground-truth saliency maps.
pub const GROUND_TRUTH_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::invalid("mask size does not match dimensions"));
        }
        Ok(BinaryMask {
            width,
            height,
            bits,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        BinaryMask {
            width,
            height,
            bits,
        }
    }

    /// Pixels with `value >= threshold`.
    pub fn from_threshold(map: &FloatMap, threshold: f64) -> Self {
        BinaryMask {
            width: map.width(),
            height: map.height(),
            bits: map.data().iter().map(|&v| v as f64 >= threshold).collect(),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EvalCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl EvalCounts {
    /// `TP / (TP + FP)`, defined as 1 when nothing is predicted.
    pub fn precision(&self) -> f64 {
        let denom = self.tp + self.fp;
        if denom == 0 {
            1.0
        } else {
            self.tp as f64 / denom as f64
        }
    }

    /// `TP / (TP + FN)`, defined as 1 when the ground truth is empty.
    pub fn recall(&self) -> f64 {
        let denom = self.tp + self.fn_;
        if denom == 0 {
            1.0
        } else {
            self.tp as f64 / denom as f64
        }
    }

    /// Harmonic mean of precision and recall, 0 when both vanish.
    pub fn f_measure(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

pub fn pr_counts(pred: &BinaryMask, truth: &BinaryMask) -> Result<EvalCounts> {
    if pred.dims() != truth.dims() {
        return Err(Error::DimensionMismatch {
            expected: truth.dims(),
            found: pred.dims(),
        });
    }
    let mut c = EvalCounts::default();
    for (&p, &t) in pred.bits.iter().zip(&truth.bits) {
        match (p, t) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => {}
        }
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrPoint {
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    #[serde(flatten)]
    pub counts: EvalCounts,
}

/// `n >= 2` thresholds equally spaced over `[0, 1]`, endpoints included.
pub fn equally_spaced_thresholds(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::invalid("at least two thresholds are required"));
    }
    Ok((0..n).map(|i| i as f64 / (n - 1) as f64).collect())
}

/// Precision/recall of `pred >= t` for each threshold.
pub fn pr_curve(pred: &FloatMap, truth: &BinaryMask, thresholds: &[f64]) -> Result<Vec<PrPoint>> {
    if pred.dims() != truth.dims() {
        return Err(Error::DimensionMismatch {
            expected: truth.dims(),
            found: pred.dims(),
        });
    }
    if thresholds.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::invalid("thresholds must lie in [0, 1]"));
    }
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("thresholds must be strictly increasing"));
    }
    thresholds
        .iter()
        .map(|&t| {
            let counts = pr_counts(&BinaryMask::from_threshold(pred, t), truth)?;
            Ok(PrPoint {
                threshold: t,
                precision: counts.precision(),
                recall: counts.recall(),
                f_measure: counts.f_measure(),
                counts,
            })
        })
        .collect()
}

pub fn max_f(curve: &[PrPoint]) -> f64 {
    curve.iter().fold(0.0, |m, p| m.max(p.f_measure))
}

/// CSV with header `threshold,precision,recall,f`.
pub fn curve_to_csv(curve: &[PrPoint]) -> String {
    let mut out = String::from("threshold,precision,recall,f\n");
    for p in curve {
        let _ = writeln!(out, "{},{},{},{}", p.threshold, p.precision, p.recall, p.f_measure);
    }
    out
}
