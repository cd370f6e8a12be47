use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_alpha, torque_map_fast, TorquePrecompute};
use crate::edgemap::OrientedEdgeMap;
use crate::raster::{load_float_map, save_float_map, FloatMap};
use crate::{Error, Result};

pub const DEFAULT_SCALES_MIN: usize = 3;
pub const DEFAULT_SCALES_MAX: usize = 91;
pub const DEFAULT_SCALES_STEP: usize = 4;

/// Odd sides 3, 7, ..., 91.
pub fn default_scales() -> Vec<usize> {
    (DEFAULT_SCALES_MIN..=DEFAULT_SCALES_MAX)
        .step_by(DEFAULT_SCALES_STEP)
        .collect()
}

/// The default scale grid truncated to sides that fit a `width x height` image.
pub fn default_scales_for(width: usize, height: usize) -> Vec<usize> {
    let limit = width.min(height);
    default_scales().into_iter().filter(|&s| s <= limit).collect()
}

fn validate_scales(scales: &[usize], width: usize, height: usize) -> Result<()> {
    if scales.is_empty() {
        return Err(Error::invalid("scale list is empty"));
    }
    let limit = width.min(height);
    for &s in scales {
        if s < 3 || s % 2 == 0 || s > limit {
            return Err(Error::invalid(format!(
                "scale {s} must be odd with 3 <= scale <= {limit}"
            )));
        }
    }
    if scales.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("scales must be strictly increasing"));
    }
    Ok(())
}

/// Torque maps `tau(x, y, s)` for an increasing list of patch sides.
#[derive(Debug, Clone, PartialEq)]
pub struct TorqueVolume {
    width: usize,
    height: usize,
    scales: Vec<usize>,
    slices: Vec<FloatMap>,
    alpha: f64,
}

impl TorqueVolume {
    /// Assembles a volume from precomputed slices.
    pub fn from_slices(scales: Vec<usize>, slices: Vec<FloatMap>, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let first = slices
            .first()
            .ok_or_else(|| Error::invalid("volume needs at least one slice"))?;
        let (w, h) = first.dims();
        if scales.len() != slices.len() {
            return Err(Error::invalid("one slice per scale required"));
        }
        if scales.is_empty() || scales.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::invalid("scales must be strictly increasing"));
        }
        for s in &slices {
            s.ensure_dims((w, h))?;
            s.check_finite()?;
        }
        Ok(TorqueVolume {
            width: w,
            height: h,
            scales,
            slices,
            alpha,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn scales(&self) -> &[usize] {
        &self.scales
    }

    pub fn slices(&self) -> &[FloatMap] {
        &self.slices
    }

    pub fn slice(&self, index: usize) -> &FloatMap {
        &self.slices[index]
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty()
    }

    #[inline]
    pub fn value(&self, scale_index: usize, x: usize, y: usize) -> f32 {
        self.slices[scale_index].get(x, y)
    }

    /// Every value negated.
    pub fn negated(&self) -> Self {
        TorqueVolume {
            slices: self.slices.iter().map(|s| s.map(|v| -v)).collect(),
            ..self.clone()
        }
    }

    /// Multiplies every value by `factor`.
    pub fn scaled(&self, factor: f32) -> Self {
        TorqueVolume {
            slices: self.slices.iter().map(|s| s.map(|v| v * factor)).collect(),
            ..self.clone()
        }
    }

    pub fn manifest(&self) -> VolumeManifest {
        VolumeManifest {
            scales: self.scales.clone(),
            alpha: self.alpha,
            width: self.width,
            height: self.height,
        }
    }

    /// Writes `manifest.json` plus one PFM per scale into `dir`.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        for (&s, slice) in self.scales.iter().zip(&self.slices) {
            save_float_map(slice, dir.join(VolumeManifest::slice_file(s)))?;
        }
        let json = serde_json::to_string_pretty(&self.manifest())
            .map_err(|e| Error::malformed("volume manifest", e.to_string()))?;
        fs::write(dir.join(VolumeManifest::FILE), json)?;
        Ok(())
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let text = fs::read_to_string(dir.join(VolumeManifest::FILE))?;
        let manifest: VolumeManifest = serde_json::from_str(&text)
            .map_err(|e| Error::malformed("volume manifest", e.to_string()))?;
        let mut slices = Vec::with_capacity(manifest.scales.len());
        for &s in &manifest.scales {
            let slice = load_float_map(dir.join(VolumeManifest::slice_file(s)))?;
            if slice.dims() != (manifest.width, manifest.height) {
                return Err(Error::malformed(
                    "volume",
                    format!("slice for scale {s} has dims {:?}", slice.dims()),
                ));
            }
            slices.push(slice);
        }
        TorqueVolume::from_slices(manifest.scales, slices, manifest.alpha)
    }
}

/// Sidecar describing a serialized [`TorqueVolume`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeManifest {
    pub scales: Vec<usize>,
    pub alpha: f64,
    pub width: usize,
    pub height: usize,
}

impl VolumeManifest {
    pub const FILE: &'static str = "manifest.json";

    pub fn slice_file(scale: usize) -> String {
        format!("scale_{scale:03}.pfm")
    }
}

/// One fast-path slice per scale from a shared precompute. Slices are
/// computed in parallel; the result does not depend on the thread count.
pub fn torque_volume(edges: &OrientedEdgeMap, scales: &[usize], alpha: f64) -> Result<TorqueVolume> {
    let pre = TorquePrecompute::build(edges);
    torque_volume_from(&pre, scales, alpha)
}

pub fn torque_volume_from(
    pre: &TorquePrecompute,
    scales: &[usize],
    alpha: f64,
) -> Result<TorqueVolume> {
    check_alpha(alpha)?;
    let (w, h) = pre.dims();
    validate_scales(scales, w, h)?;
    let slices = scales
        .par_iter()
        .map(|&s| torque_map_fast(pre, s, alpha))
        .collect::<Result<Vec<_>>>()?;
    Ok(TorqueVolume {
        width: w,
        height: h,
        scales: scales.to_vec(),
        slices,
        alpha,
    })
}

/// Value map `V` (signed extremal torque over scales) and scale map `S`
/// (selected side signed by `V`).
#[derive(Debug, Clone, PartialEq)]
pub struct ValueScaleMaps {
    pub value: FloatMap,
    pub scale: FloatMap,
}

/// Picks per pixel the scale of largest `|tau|`, the smallest one on ties.
/// Pixels where every scale is zero get `V = 0` and `S = 0`.
pub fn reduce_volume(vol: &TorqueVolume) -> ValueScaleMaps {
    let (w, h) = vol.dims();
    let mut value = FloatMap::zeros(w, h);
    let mut scale = FloatMap::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            let mut best = 0.0f32;
            let mut best_scale = 0usize;
            for (si, &s) in vol.scales.iter().enumerate() {
                let v = vol.value(si, x, y);
                if v.abs() > best.abs() {
                    best = v;
                    best_scale = s;
                }
            }
            if best != 0.0 {
                value.set(x, y, best);
                scale.set(x, y, best.signum() * best_scale as f32);
            }
        }
    }
    ValueScaleMaps { value, scale }
}
