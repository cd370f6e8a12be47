//! The torque operator.
//!
//! For a center `p` and an oriented edge point `q` with unit direction `F`,
//! the point torque is `(q - p) x F`. The torque of a patch is the sum of
//! point torques over its edge points divided by `2 Z`, where
//! `Z = |P|^(alpha / 2)`; `alpha = 2` gives plain area normalization.
//!
//! [`torque_map_fast`] evaluates every square patch of one size in O(1) per
//! pixel from sixteen summed area tables, [`patch_torque_naive`] is the
//! direct summation it must agree with.

mod precompute;
mod sat;
mod volume;

pub use precompute::{torque_map_fast, TorquePrecompute};
pub use sat::SummedAreaTable;
pub use volume::{torque_volume_from, 
    default_scales, default_scales_for, reduce_volume, torque_volume, TorqueVolume,
    ValueScaleMaps, VolumeManifest, DEFAULT_SCALES_MAX, DEFAULT_SCALES_MIN, DEFAULT_SCALES_STEP,
};

use crate::edgemap::{edge_direction, GradientField, OrientedEdgeMap};
use crate::raster::FloatMap;
use crate::{Error, Result};

/// Default normalization exponent (area normalization).
pub const DEFAULT_ALPHA: f64 = 2.0;

/// Cross product `(q - p) x dir`.
#[inline]
pub fn point_torque(p: (f64, f64), q: (f64, f64), dir: (f64, f64)) -> f64 {
    let rx = q.0 - p.0;
    let ry = q.1 - p.1;
    rx * dir.1 - ry * dir.0
}

/// Normalization factor `Z = area^(alpha / 2)`.
#[inline]
pub fn normalization(area: f64, alpha: f64) -> f64 {
    if alpha == 2.0 {
        area
    } else {
        area.powf(alpha / 2.0)
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!("alpha {alpha} must be positive")));
    }
    Ok(())
}

/// Inclusive pixel rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl Rect {
    pub fn area(&self) -> usize {
        (self.x1 - self.x0 + 1) * (self.y1 - self.y0 + 1)
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        (self.x0..=self.x1).contains(&x) && (self.y0..=self.y1).contains(&y)
    }

    /// Clips the square of half-width `half` around `(cx, cy)` to a
    /// `width x height` image.
    pub fn around(cx: i64, cy: i64, half: i64, width: usize, height: usize) -> Option<Rect> {
        let x0 = (cx - half).max(0);
        let y0 = (cy - half).max(0);
        let x1 = (cx + half).min(width as i64 - 1);
        let y1 = (cy + half).min(height as i64 - 1);
        (x0 <= x1 && y0 <= y1).then_some(Rect {
            x0: x0 as usize,
            y0: y0 as usize,
            x1: x1 as usize,
            y1: y1 as usize,
        })
    }
}

/// A square patch with odd side centered on a pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Patch {
    pub x: i64,
    pub y: i64,
    pub side: usize,
}

impl Patch {
    pub fn new(x: i64, y: i64, side: usize) -> Result<Self> {
        if side < 3 || side % 2 == 0 {
            return Err(Error::invalid(format!(
                "patch side {side} must be odd and at least 3"
            )));
        }
        Ok(Patch { x, y, side })
    }

    pub fn half(&self) -> i64 {
        (self.side / 2) as i64
    }

    /// The part of the patch inside a `width x height` image.
    pub fn clip(&self, width: usize, height: usize) -> Option<Rect> {
        Rect::around(self.x, self.y, self.half(), width, height)
    }
}

/// Which edge directions the naive summation uses.
#[derive(Debug, Clone, Copy)]
pub enum Directions<'a> {
    /// Quantized bin directions, the same ones the fast path uses.
    Quantized,
    /// Exact directions from the image gradient at each edge pixel.
    Exact(&'a GradientField),
}

/// Direct summation of the torque of one patch, clipped at the borders.
pub fn patch_torque_naive(edges: &OrientedEdgeMap, patch: Patch, alpha: f64) -> Result<f64> {
    patch_torque_with(edges, patch, alpha, Directions::Quantized)
}

/// [`patch_torque_naive`] with a choice of direction source.
pub fn patch_torque_with(
    edges: &OrientedEdgeMap,
    patch: Patch,
    alpha: f64,
    directions: Directions<'_>,
) -> Result<f64> {
    check_alpha(alpha)?;
    let (w, h) = edges.dims();
    let rect = patch.clip(w, h).ok_or(Error::EmptyPatch)?;
    if let Directions::Exact(grad) = directions {
        if grad.dims() != edges.dims() {
            return Err(Error::DimensionMismatch {
                expected: edges.dims(),
                found: grad.dims(),
            });
        }
    }
    let p = (patch.x as f64, patch.y as f64);
    let mut sum = 0.0;
    for y in rect.y0..=rect.y1 {
        for x in rect.x0..=rect.x1 {
            let Some(bin) = edges.get(x, y) else { continue };
            let dir = match directions {
                Directions::Quantized => bin.unit(),
                Directions::Exact(grad) => {
                    let (gx, gy) = grad.at(x, y);
                    edge_direction(gx, gy).unwrap_or(bin.unit())
                }
            };
            sum += point_torque(p, (x as f64, y as f64), dir);
        }
    }
    Ok(sum / (2.0 * normalization(rect.area() as f64, alpha)))
}

/// Naive torque at every pixel for one patch side. O(n^2) per pixel.
pub fn torque_map_naive(edges: &OrientedEdgeMap, side: usize, alpha: f64) -> Result<FloatMap> {
    let (w, h) = edges.dims();
    Patch::new(0, 0, side)?;
    let mut out = FloatMap::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            let v = patch_torque_naive(edges, Patch::new(x as i64, y as i64, side)?, alpha)?;
            out.set(x, y, v as f32);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edgemap::Bin;

    #[test]
    fn point_torque_cases() {
        assert_eq!(point_torque((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)), 1.0);
        assert_eq!(point_torque((0.0, 0.0), (2.0, 0.0), (1.0, 0.0)), 0.0);
        assert_eq!(point_torque((1.0, 1.0), (3.0, 1.0), (0.0, 1.0)), 2.0);
        assert_eq!(point_torque((4.0, 4.0), (4.0, 4.0), (0.0, 1.0)), 0.0);
        // |r| sin(theta)
        let t = point_torque((0.0, 0.0), (3.0, 4.0), (1.0, 0.0));
        assert!((t - 5.0 * (-(4.0f64 / 5.0))).abs() < 1e-12);
    }

    #[test]
    fn patch_validation() {
        assert!(Patch::new(0, 0, 4).is_err());
        assert!(Patch::new(0, 0, 1).is_err());
        let p = Patch::new(0, 0, 5).unwrap();
        assert_eq!(p.clip(10, 10).unwrap().area(), 9);
        assert!(Patch::new(-5, -5, 5).unwrap().clip(10, 10).is_none());
    }

    #[test]
    fn empty_patch_and_empty_edges() {
        let edges = OrientedEdgeMap::empty(10, 10);
        let p = Patch::new(5, 5, 5).unwrap();
        assert_eq!(patch_torque_naive(&edges, p, 2.0).unwrap(), 0.0);
        let outside = Patch::new(40, 40, 5).unwrap();
        assert!(matches!(
            patch_torque_naive(&edges, outside, 2.0),
            Err(Error::EmptyPatch)
        ));
    }

    #[test]
    fn single_edge_hand_value() {
        // edge at (7, 5) pointing +y, center (5, 5), side 5 -> r = (2, 0), r x F = 2
        let mut edges = OrientedEdgeMap::empty(11, 11);
        edges.set(7, 5, Bin::new(2));
        let p = Patch::new(5, 5, 5).unwrap();
        let v = patch_torque_naive(&edges, p, 2.0).unwrap();
        assert!((v - 2.0 / 50.0).abs() < 1e-15);
        // alpha = 1 normalizes by sqrt(area)
        let v1 = patch_torque_naive(&edges, p, 1.0).unwrap();
        assert!((v1 - 2.0 / 10.0).abs() < 1e-15);
    }
}
