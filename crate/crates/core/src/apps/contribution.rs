use crate::edgemap::OrientedEdgeMap;
use crate::extrema::{strongest_extrema, TorqueExtremum};
use crate::raster::FloatMap;
use crate::torque::{point_torque, SummedAreaTable, TorqueVolume};
use crate::{Error, Result};

/// Number of extremal patches used for the contribution map.
pub const DEFAULT_CONTRIBUTION_EXTREMA: usize = 5000;

/// Which patches an edge point's contribution is summed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContributionMode {
    /// The strongest extremal patches, each signed by its polarity.
    #[default]
    Extrema,
    /// Every patch of every scale in the volume, each signed by its own torque.
    AllPatches,
}

/// Contribution of every edge point to the `top_n` strongest extremal
/// patches, clamped at zero and normalized to `[0, 1]`.
pub fn edge_contribution(
    edges: &OrientedEdgeMap,
    vol: &TorqueVolume,
    top_n: usize,
) -> Result<FloatMap> {
    if top_n == 0 {
        return Err(Error::invalid("top_n must be at least 1"));
    }
    if edges.dims() != vol.dims() {
        return Err(Error::DimensionMismatch {
            expected: vol.dims(),
            found: edges.dims(),
        });
    }
    let selected = strongest_extrema(vol, top_n)?;
    Ok(edge_contribution_from_extrema(edges, &selected))
}

/// `upsilon_q = sum over patches P containing q of sign(tau_P) (q - p) x F_q`,
/// for the given extremal patches.
pub fn edge_contribution_from_extrema(
    edges: &OrientedEdgeMap,
    extrema: &[TorqueExtremum],
) -> FloatMap {
    let (w, h) = edges.dims();
    let mut acc = vec![0.0f64; w * h];
    for e in extrema {
        let sign = signum0(e.value);
        if sign == 0.0 {
            continue;
        }
        let Some(rect) = e.patch().clip(w, h) else { continue };
        let p = (e.x as f64, e.y as f64);
        for y in rect.y0..=rect.y1 {
            for x in rect.x0..=rect.x1 {
                if let Some(bin) = edges.get(x, y) {
                    acc[y * w + x] += sign * point_torque(p, (x as f64, y as f64), bin.unit());
                }
            }
        }
    }
    finish(acc, w, h)
}

/// Contribution summed over every square patch of every scale that contains
/// the edge point, each patch signed by its own torque. Uses three SATs per
/// scale, so the cost is O(N) per scale.
pub fn edge_contribution_all_patches(edges: &OrientedEdgeMap, vol: &TorqueVolume) -> Result<FloatMap> {
    if edges.dims() != vol.dims() {
        return Err(Error::DimensionMismatch {
            expected: vol.dims(),
            found: edges.dims(),
        });
    }
    let (w, h) = edges.dims();
    let mut acc = vec![0.0f64; w * h];
    for (si, &side) in vol.scales().iter().enumerate() {
        let slice = vol.slice(si);
        let sign = |x: usize, y: usize| signum0(slice.get(x, y));
        let s0 = SummedAreaTable::from_fn(w, h, sign);
        let sx = SummedAreaTable::from_fn(w, h, |x, y| sign(x, y) * x as f64);
        let sy = SummedAreaTable::from_fn(w, h, |x, y| sign(x, y) * y as f64);
        let half = (side / 2) as i64;
        for (x, y, bin) in edges.iter() {
            let (fx, fy) = bin.unit();
            let (u, v) = (x as i64, y as i64);
            let (x0, y0, x1, y1) = (u - half, v - half, u + half, v + half);
            let n = s0.clamped_sum(x0, y0, x1, y1);
            let mx = sx.clamped_sum(x0, y0, x1, y1);
            let my = sy.clamped_sum(x0, y0, x1, y1);
            // sum_p sign_p ((q - p) x F)
            acc[y * w + x] += n * (u as f64 * fy - v as f64 * fx) - (mx * fy - my * fx);
        }
    }
    Ok(finish(acc, w, h))
}

// signum with sign(0) = 0
fn signum0(v: f32) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn finish(acc: Vec<f64>, w: usize, h: usize) -> FloatMap {
    let max = acc.iter().fold(0.0f64, |m, &v| m.max(v));
    let data = if max > 0.0 {
        acc.iter().map(|&v| (v.max(0.0) / max) as f32).collect()
    } else {
        vec![0.0; w * h]
    };
    FloatMap::from_vec(w, h, data).expect("dimensions match")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edgemap::Bin;
    use crate::extrema::Polarity;

    fn minimum(x: usize, y: usize, scale: usize) -> TorqueExtremum {
        TorqueExtremum {
            x,
            y,
            scale,
            value: -0.5,
            polarity: Polarity::Minimum,
        }
    }

    #[test]
    fn edge_outside_selected_patches_is_zero() {
        let mut edges = OrientedEdgeMap::empty(30, 30);
        edges.set(25, 25, Bin::new(6));
        edges.set(7, 5, Bin::new(6));
        let map = edge_contribution_from_extrema(&edges, &[minimum(5, 5, 7)]);
        assert_eq!(map.get(25, 25), 0.0);
        // (7,5) relative to (5,5): r = (2, 0), F = (0, -1): r x F = -2, times -1
        assert_eq!(map.get(7, 5), 1.0);
        assert_eq!(map.data().iter().filter(|&&v| v != 0.0).count(), 1);
    }

    #[test]
    fn opposing_contribution_is_clamped() {
        let mut edges = OrientedEdgeMap::empty(20, 20);
        edges.set(7, 5, Bin::new(6));
        edges.set(3, 5, Bin::new(6)); // r x F = +2, times -1 = -2
        let map = edge_contribution_from_extrema(&edges, &[minimum(5, 5, 7)]);
        assert_eq!(map.get(3, 5), 0.0);
        assert_eq!(map.get(7, 5), 1.0);
    }

    #[test]
    fn empty_edges_give_zero_map() {
        let edges = OrientedEdgeMap::empty(10, 10);
        let map = edge_contribution_from_extrema(&edges, &[minimum(5, 5, 7)]);
        assert!(map.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn all_patch_mode_matches_brute_force() {
        let mut edges = OrientedEdgeMap::empty(16, 14);
        for (i, (x, y)) in [(3, 4), (8, 8), (12, 2), (15, 13)].into_iter().enumerate() {
            edges.set(x, y, Bin::new(i as u8 * 3 % 8));
        }
        let slices = vec![
            FloatMap::from_fn(16, 14, |x, y| ((x * 7 + y * 3) % 5) as f32 - 2.0),
            FloatMap::from_fn(16, 14, |x, y| ((x + y * 5) % 3) as f32 - 1.0),
        ];
        let vol = TorqueVolume::from_slices(vec![3, 7], slices, 2.0).unwrap();
        let fast = edge_contribution_all_patches(&edges, &vol).unwrap();

        let mut brute = vec![0.0f64; 16 * 14];
        for (si, &side) in vol.scales().iter().enumerate() {
            let half = (side / 2) as i64;
            for (qx, qy, bin) in edges.iter() {
                for py in 0..14i64 {
                    for px in 0..16i64 {
                        if (px - qx as i64).abs() <= half && (py - qy as i64).abs() <= half {
                            let t = vol.value(si, px as usize, py as usize) as f64;
                            if t != 0.0 {
                                brute[qy * 16 + qx] += t.signum()
                                    * point_torque(
                                        (px as f64, py as f64),
                                        (qx as f64, qy as f64),
                                        bin.unit(),
                                    );
                            }
                        }
                    }
                }
            }
        }
        let expected = finish(brute, 16, 14);
        for (a, b) in fast.data().iter().zip(expected.data()) {
            assert!((a - b).abs() < 1e-6);
        }
    }
}
