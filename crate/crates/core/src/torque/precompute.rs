use super::{check_alpha, normalization, Rect};
use crate::edgemap::{Bin, OrientedEdgeMap, DIRECTIONS};
use crate::raster::FloatMap;
use crate::{Error, Result};

const CHANNELS: usize = 16;

/// Per-bin summed area tables of the edge indicator `delta_i` and of the
/// origin-referenced torque `tau_o = (x sin theta_i - y cos theta_i) delta_i`.
///
/// The torque of any axis-aligned window about any center `(x, y)` is
/// `sum_i (-x sin theta_i + y cos theta_i) count_i + sum_i tau_o_i`, which
/// needs two rectangle queries per bin. The 16 tables are stored
/// interleaved, so one cell holds every channel at that corner.
#[derive(Debug, Clone)]
pub struct TorquePrecompute {
    width: usize,
    height: usize,
    // (width + 1) x (height + 1) with a zero first row and column;
    // channels 0..8 are counts, 8..16 origin torque
    cells: Vec<[f64; CHANNELS]>,
}

impl TorquePrecompute {
    pub fn build(edges: &OrientedEdgeMap) -> Self {
        let (w, h) = edges.dims();
        let stride = w + 1;
        let mut cells = vec![[0.0; CHANNELS]; stride * (h + 1)];
        for y in 0..h {
            let mut row = [0.0; CHANNELS];
            for x in 0..w {
                if let Some(bin) = edges.get(x, y) {
                    let i = bin.index();
                    let (c, s) = bin.unit();
                    row[i] += 1.0;
                    row[8 + i] += x as f64 * s - y as f64 * c;
                }
                let above = cells[y * stride + x + 1];
                let cell = &mut cells[(y + 1) * stride + x + 1];
                for k in 0..CHANNELS {
                    cell[k] = above[k] + row[k];
                }
            }
        }
        TorquePrecompute {
            width: w,
            height: h,
            cells,
        }
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

    /// Number of tables held (two per bin).
    pub fn table_count(&self) -> usize {
        CHANNELS
    }

    #[inline]
    fn sum(&self, channel: usize, rect: Rect) -> f64 {
        let Rect { x0, y0, x1, y1 } = rect;
        let stride = self.width + 1;
        let at = |x: usize, y: usize| self.cells[y * stride + x][channel];
        at(x1 + 1, y1 + 1) - at(x0, y1 + 1) - at(x1 + 1, y0) + at(x0, y0)
    }

    /// Number of bin `i` edge pixels in `rect`.
    pub fn count_sum(&self, bin: Bin, rect: Rect) -> f64 {
        self.sum(bin.index(), rect)
    }

    /// Origin-referenced torque of bin `i` edge pixels in `rect`.
    pub fn origin_sum(&self, bin: Bin, rect: Rect) -> f64 {
        self.sum(8 + bin.index(), rect)
    }

    /// Unnormalized torque sum `2 Z tau` of a rectangle about `(cx, cy)`.
    #[inline]
    pub fn raw_torque(&self, cx: f64, cy: f64, rect: Rect) -> f64 {
        let Rect { x0, y0, x1, y1 } = rect;
        let stride = self.width + 1;
        corner_torque(
            cx,
            cy,
            &self.cells[y0 * stride + x0],
            &self.cells[y0 * stride + x1 + 1],
            &self.cells[(y1 + 1) * stride + x0],
            &self.cells[(y1 + 1) * stride + x1 + 1],
        )
    }

    /// Normalized torque of the square window of odd `side` centered at
    /// `(cx, cy)`, clipped to the image. The center may lie outside the
    /// image; a window that misses the image entirely yields 0.
    pub fn window_torque(&self, cx: i64, cy: i64, side: usize, alpha: f64) -> f64 {
        let half = (side / 2) as i64;
        match Rect::around(cx, cy, half, self.width, self.height) {
            Some(rect) => {
                self.raw_torque(cx as f64, cy as f64, rect)
                    / (2.0 * normalization(rect.area() as f64, alpha))
            }
            None => 0.0,
        }
    }
}

#[inline(always)]
fn corner_torque(
    cx: f64,
    cy: f64,
    tl: &[f64; CHANNELS],
    tr: &[f64; CHANNELS],
    bl: &[f64; CHANNELS],
    br: &[f64; CHANNELS],
) -> f64 {
    let q = |k: usize| br[k] - tr[k] - bl[k] + tl[k];
    let mut total = 0.0;
    // Opposite bins are paired so that reversing every orientation
    // negates the result exactly.
    for i in 0..4 {
        let (c, s) = DIRECTIONS[i];
        let k = -cx * s + cy * c;
        let dc = q(i) - q(i + 4);
        let to = q(8 + i) + q(12 + i);
        total += k * dc + to;
    }
    total
}

/// Torque map for square patches of odd `side`, O(1) per pixel.
pub fn torque_map_fast(pre: &TorquePrecompute, side: usize, alpha: f64) -> Result<FloatMap> {
    check_alpha(alpha)?;
    let (w, h) = pre.dims();
    if side < 3 || side % 2 == 0 || side > w.min(h) {
        return Err(Error::invalid(format!(
            "patch side {side} must be odd with 3 <= side <= {}",
            w.min(h)
        )));
    }
    let half = side / 2;
    let stride = w + 1;
    let cells = &pre.cells;
    let mut out = vec![0.0f32; w * h];
    let mut last_area = 0usize;
    let mut last_scale = 0.0f64;
    for y in 0..h {
        let y0 = y.saturating_sub(half);
        let y1 = (y + half).min(h - 1);
        let top = &cells[y0 * stride..(y0 + 1) * stride];
        let bottom = &cells[(y1 + 1) * stride..(y1 + 2) * stride];
        let rows = y1 - y0 + 1;
        let cy = y as f64;
        for x in 0..w {
            let x0 = x.saturating_sub(half);
            let x1 = (x + half).min(w - 1);
            let total = corner_torque(
                x as f64,
                cy,
                &top[x0],
                &top[x1 + 1],
                &bottom[x0],
                &bottom[x1 + 1],
            );
            let area = (x1 - x0 + 1) * rows;
            if area != last_area {
                last_area = area;
                last_scale = 1.0 / (2.0 * normalization(area as f64, alpha));
            }
            out[y * w + x] = (total * last_scale) as f32;
        }
    }
    FloatMap::from_vec(w, h, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full(pre: &TorquePrecompute) -> Rect {
        let (w, h) = pre.dims();
        Rect { x0: 0, y0: 0, x1: w - 1, y1: h - 1 }
    }

    #[test]
    fn empty_edges_give_zero_tables_and_map() {
        let edges = OrientedEdgeMap::empty(12, 9);
        let pre = TorquePrecompute::build(&edges);
        assert_eq!(pre.table_count(), 16);
        let all = full(&pre);
        for bin in Bin::ALL {
            assert_eq!(pre.count_sum(bin, all), 0.0);
            assert_eq!(pre.origin_sum(bin, all), 0.0);
        }
        let map = torque_map_fast(&pre, 5, 2.0).unwrap();
        assert!(map.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_edge_origin_torque() {
        // q = (3, 2), theta = 0: x sin 0 - y cos 0 = -2
        let mut edges = OrientedEdgeMap::empty(8, 6);
        edges.set(3, 2, Bin::new(0));
        let pre = TorquePrecompute::build(&edges);
        let all = full(&pre);
        assert_eq!(pre.origin_sum(Bin::ALL[0], all), -2.0);
        assert_eq!(pre.count_sum(Bin::ALL[0], all), 1.0);
        let other: f64 = Bin::ALL[1..].iter().map(|&b| pre.origin_sum(b, all)).sum();
        assert_eq!(other, 0.0);
    }

    #[test]
    fn side_validation() {
        let pre = TorquePrecompute::build(&OrientedEdgeMap::empty(10, 8));
        assert!(torque_map_fast(&pre, 4, 2.0).is_err());
        assert!(torque_map_fast(&pre, 1, 2.0).is_err());
        assert!(torque_map_fast(&pre, 9, 2.0).is_err());
        assert!(torque_map_fast(&pre, 7, 0.0).is_err());
        assert!(torque_map_fast(&pre, 7, 2.0).is_ok());
    }

    #[test]
    fn window_outside_image_is_zero() {
        let mut edges = OrientedEdgeMap::empty(8, 8);
        edges.set(1, 1, Bin::new(2));
        let pre = TorquePrecompute::build(&edges);
        assert_eq!(pre.window_torque(-20, -20, 5, 2.0), 0.0);
        assert!(pre.window_torque(-1, 1, 5, 2.0) != 0.0);
    }
}
