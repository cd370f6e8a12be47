//! Multiscale torque (MST) descriptor over MTP patches.
//!
//! For every scale factor `f`, torque is sampled with a square window of
//! side `round_to_odd(f * side)` at the patch center and at `n_steps` points
//! along each of the eight canonical directions, spaced
//! `side / (2 n_steps)` apart. The eight direction blocks are then
//! circularly shifted so that block 0 points toward the centroid of the
//! edges inside the patch.

use serde::{Deserialize, Serialize};

use crate::edgemap::{Bin, OrientedEdgeMap, DIRECTIONS};
use crate::torque::{check_alpha, Patch, TorquePrecompute, DEFAULT_ALPHA};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MstConfig {
    pub n_steps: usize,
    pub scale_factors: Vec<f64>,
    pub alpha: f64,
    /// Store `|tau|` instead of signed torque.
    pub magnitude: bool,
}

impl Default for MstConfig {
    fn default() -> Self {
        MstConfig {
            n_steps: 3,
            scale_factors: vec![0.5, 1.0, 2.0],
            alpha: DEFAULT_ALPHA,
            magnitude: false,
        }
    }
}

impl MstConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_steps == 0 {
            return Err(Error::invalid("n_steps must be at least 1"));
        }
        if self.scale_factors.is_empty() {
            return Err(Error::invalid("at least one scale factor is required"));
        }
        if self.scale_factors.iter().any(|&f| !(f > 0.0 && f.is_finite())) {
            return Err(Error::invalid("scale factors must be positive"));
        }
        check_alpha(self.alpha)
    }

    /// `(8 n_steps + 1) * |scale_factors|`.
    pub fn descriptor_len(&self) -> usize {
        self.block_len() * self.scale_factors.len()
    }

    fn block_len(&self) -> usize {
        8 * self.n_steps + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MstDescriptor {
    pub patch: Patch,
    pub rotation_index: usize,
    pub values: Vec<f64>,
}

/// Closest odd integer, at least 3.
pub fn round_to_odd(v: f64) -> usize {
    let k = 2.0 * ((v - 1.0) / 2.0).round() + 1.0;
    if k < 3.0 {
        3
    } else {
        k as usize
    }
}

/// Index of the canonical direction nearest to the vector from the patch
/// center to the centroid of its edges; 0 when there are none.
pub fn align_orientation(patch: Patch, edges: &OrientedEdgeMap) -> usize {
    let (w, h) = edges.dims();
    let Some(rect) = patch.clip(w, h) else { return 0 };
    let (mut sx, mut sy, mut n) = (0.0f64, 0.0f64, 0usize);
    for y in rect.y0..=rect.y1 {
        for x in rect.x0..=rect.x1 {
            if edges.get(x, y).is_some() {
                sx += x as f64;
                sy += y as f64;
                n += 1;
            }
        }
    }
    if n == 0 {
        return 0;
    }
    let dx = sx / n as f64 - patch.x as f64;
    let dy = sy / n as f64 - patch.y as f64;
    if dx == 0.0 && dy == 0.0 {
        return 0;
    }
    Bin::nearest(dx, dy).index()
}

/// Descriptor values before orientation alignment, ordered
/// `(scale, direction, step)` with the center sample first per scale.
pub fn raw_descriptor(pre: &TorquePrecompute, patch: Patch, cfg: &MstConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let step = patch.side as f64 / (2.0 * cfg.n_steps as f64);
    let mut values = Vec::with_capacity(cfg.descriptor_len());
    for &f in &cfg.scale_factors {
        let side = round_to_odd(f * patch.side as f64);
        let mut sample = |x: i64, y: i64| {
            let t = pre.window_torque(x, y, side, cfg.alpha);
            values.push(if cfg.magnitude { t.abs() } else { t });
        };
        sample(patch.x, patch.y);
        for &(c, s) in &DIRECTIONS {
            for k in 1..=cfg.n_steps {
                let d = k as f64 * step;
                sample(
                    patch.x + (d * c).round() as i64,
                    patch.y + (d * s).round() as i64,
                );
            }
        }
    }
    Ok(values)
}

/// Circularly shifts the direction blocks so that aligned block `j` holds
/// raw direction `(j + rotation) mod 8`.
pub fn align_blocks(raw: &[f64], cfg: &MstConfig, rotation: usize) -> Vec<f64> {
    let block = cfg.block_len();
    let n = cfg.n_steps;
    let mut out = Vec::with_capacity(raw.len());
    for chunk in raw.chunks_exact(block) {
        out.push(chunk[0]);
        for j in 0..8 {
            let src = (j + rotation) % 8;
            out.extend_from_slice(&chunk[1 + src * n..1 + (src + 1) * n]);
        }
    }
    out
}

/// The orientation-aligned MST descriptor of one patch.
pub fn mst_descriptor(
    pre: &TorquePrecompute,
    edges: &OrientedEdgeMap,
    patch: Patch,
    cfg: &MstConfig,
) -> Result<MstDescriptor> {
    if pre.dims() != edges.dims() {
        return Err(Error::DimensionMismatch {
            expected: pre.dims(),
            found: edges.dims(),
        });
    }
    let raw = raw_descriptor(pre, patch, cfg)?;
    let rotation_index = align_orientation(patch, edges);
    Ok(MstDescriptor {
        patch,
        rotation_index,
        values: align_blocks(&raw, cfg, rotation_index),
    })
}
