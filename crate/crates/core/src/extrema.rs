//! Space-scale extrema of a torque volume and the MTP patches they define.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::torque::{Patch, TorqueVolume};
use crate::{Error, Result};

/// Default number of extrema kept per polarity.
pub const DEFAULT_EXTREMA_PER_POLARITY: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Maximum,
    Minimum,
}

/// A strict local extremum of the torque volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorqueExtremum {
    pub x: usize,
    pub y: usize,
    pub scale: usize,
    pub value: f32,
    pub polarity: Polarity,
}

impl TorqueExtremum {
    /// The square MTP patch centered on the extremum.
    pub fn patch(&self) -> Patch {
        Patch {
            x: self.x as i64,
            y: self.y as i64,
            side: self.scale,
        }
    }
}

/// Descending `|value|`, then `(scale, y, x)` ascending.
pub fn extremum_order(a: &TorqueExtremum, b: &TorqueExtremum) -> Ordering {
    b.value
        .abs()
        .total_cmp(&a.value.abs())
        .then(a.scale.cmp(&b.scale))
        .then(a.y.cmp(&b.y))
        .then(a.x.cmp(&b.x))
}

/// True when `(si, x, y)` is strictly above (`sign = 1`) or below
/// (`sign = -1`) every in-bounds voxel of its 3x3x3 neighborhood.
pub fn is_strict_extremum(vol: &TorqueVolume, si: usize, x: usize, y: usize, sign: f32) -> bool {
    let (w, h) = vol.dims();
    let v = vol.value(si, x, y) * sign;
    let s_lo = si.saturating_sub(1);
    let s_hi = (si + 1).min(vol.len() - 1);
    let x_lo = x.saturating_sub(1);
    let x_hi = (x + 1).min(w - 1);
    let y_lo = y.saturating_sub(1);
    let y_hi = (y + 1).min(h - 1);
    for s in s_lo..=s_hi {
        let slice = vol.slice(s);
        for ny in y_lo..=y_hi {
            for nx in x_lo..=x_hi {
                if (s, nx, ny) == (si, x, y) {
                    continue;
                }
                if slice.get(nx, ny) * sign >= v {
                    return false;
                }
            }
        }
    }
    true
}

/// Strict 26-neighborhood extrema. Maxima are positive, minima negative;
/// each list is sorted by [`extremum_order`] and truncated to `k`.
pub fn find_extrema(
    vol: &TorqueVolume,
    k: usize,
) -> Result<(Vec<TorqueExtremum>, Vec<TorqueExtremum>)> {
    if k == 0 {
        return Err(Error::invalid("extrema count k must be at least 1"));
    }
    if vol.is_empty() {
        return Err(Error::invalid("volume has no scales"));
    }
    let (w, h) = vol.dims();
    let found: Vec<TorqueExtremum> = (0..vol.len())
        .into_par_iter()
        .flat_map_iter(|si| {
            let scale = vol.scales()[si];
            let mut local = Vec::new();
            for y in 0..h {
                for x in 0..w {
                    let v = vol.value(si, x, y);
                    let polarity = if v > 0.0 {
                        Polarity::Maximum
                    } else if v < 0.0 {
                        Polarity::Minimum
                    } else {
                        continue;
                    };
                    let sign = if v > 0.0 { 1.0 } else { -1.0 };
                    if is_strict_extremum(vol, si, x, y, sign) {
                        local.push(TorqueExtremum {
                            x,
                            y,
                            scale,
                            value: v,
                            polarity,
                        });
                    }
                }
            }
            local
        })
        .collect();
    let (mut maxima, mut minima): (Vec<_>, Vec<_>) = found
        .into_iter()
        .partition(|e| e.polarity == Polarity::Maximum);
    maxima.sort_by(extremum_order);
    minima.sort_by(extremum_order);
    maxima.truncate(k);
    minima.truncate(k);
    Ok((maxima, minima))
}

/// Both lists merged by [`extremum_order`] and truncated to `n`.
pub fn strongest_extrema(vol: &TorqueVolume, n: usize) -> Result<Vec<TorqueExtremum>> {
    let (maxima, minima) = find_extrema(vol, n)?;
    let mut all: Vec<_> = maxima.into_iter().chain(minima).collect();
    all.sort_by(extremum_order);
    all.truncate(n);
    Ok(all)
}

/// MTP patches for the extrema passing the polarity filter, in input order.
pub fn mtp_patches(extrema: &[TorqueExtremum], polarity: Option<Polarity>) -> Vec<Patch> {
    extrema
        .iter()
        .filter(|e| polarity.is_none_or(|p| e.polarity == p))
        .map(TorqueExtremum::patch)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::FloatMap;

    fn volume(w: usize, h: usize, scales: &[usize], f: impl Fn(usize, usize, usize) -> f32) -> TorqueVolume {
        let slices = (0..scales.len())
            .map(|s| FloatMap::from_fn(w, h, |x, y| f(s, x, y)))
            .collect();
        TorqueVolume::from_slices(scales.to_vec(), slices, 2.0).unwrap()
    }

    #[test]
    fn single_bump_is_sole_maximum() {
        let vol = volume(9, 9, &[3, 5, 7], |s, x, y| {
            if (s, x, y) == (1, 4, 6) {
                0.7
            } else {
                0.0
            }
        });
        let (maxima, minima) = find_extrema(&vol, 25).unwrap();
        assert_eq!(maxima.len(), 1);
        assert!(minima.is_empty());
        let m = maxima[0];
        assert_eq!((m.x, m.y, m.scale, m.value), (4, 6, 5, 0.7));
        assert_eq!(m.polarity, Polarity::Maximum);
    }

    #[test]
    fn plateau_yields_nothing() {
        let vol = volume(6, 6, &[3, 5], |_, _, _| 0.3);
        let (maxima, minima) = find_extrema(&vol, 5).unwrap();
        assert!(maxima.is_empty() && minima.is_empty());
    }

    #[test]
    fn k_zero_rejected() {
        let vol = volume(3, 3, &[3], |_, _, _| 0.0);
        assert!(find_extrema(&vol, 0).is_err());
    }

    #[test]
    fn ordering_and_truncation() {
        // isolated bumps of equal magnitude are ordered by (scale, y, x)
        let vol = volume(12, 12, &[3], |_, x, y| match (x, y) {
            (2, 2) | (8, 2) | (2, 8) => -0.5,
            (8, 8) => -0.9,
            _ => 0.0,
        });
        let (_, minima) = find_extrema(&vol, 3).unwrap();
        let pos: Vec<_> = minima.iter().map(|e| (e.x, e.y)).collect();
        assert_eq!(pos, vec![(8, 8), (2, 2), (8, 2)]);
    }

    #[test]
    fn patches_from_extrema() {
        assert!(mtp_patches(&[], None).is_empty());
        let e = TorqueExtremum {
            x: 50,
            y: 40,
            scale: 21,
            value: -0.3,
            polarity: Polarity::Minimum,
        };
        let p = mtp_patches(&[e], None);
        assert_eq!(p, vec![Patch { x: 50, y: 40, side: 21 }]);
        assert!(mtp_patches(&[e], Some(Polarity::Maximum)).is_empty());
    }

    #[test]
    fn json_shape() {
        let e = TorqueExtremum {
            x: 1,
            y: 2,
            scale: 3,
            value: 0.5,
            polarity: Polarity::Maximum,
        };
        let j = serde_json::to_value(e).unwrap();
        assert_eq!(
            j,
            serde_json::json!({"x": 1, "y": 2, "scale": 3, "value": 0.5, "polarity": "maximum"})
        );
    }
}
