//! Synthetic test images and exact 90 degree rotations.

use crate::edgemap::OrientedEdgeMap;
use crate::raster::GrayImage;

/// Axis-aligned square of `side` pixels whose pixel range starts at
/// `cx - side / 2` (integer division), drawn with `fg` on `bg`.
pub fn filled_square(
    width: usize,
    height: usize,
    cx: i64,
    cy: i64,
    side: usize,
    fg: f32,
    bg: f32,
) -> GrayImage {
    let x0 = cx - (side / 2) as i64;
    let y0 = cy - (side / 2) as i64;
    let x1 = x0 + side as i64 - 1;
    let y1 = y0 + side as i64 - 1;
    GrayImage::from_fn(width, height, |x, y| {
        let (x, y) = (x as i64, y as i64);
        if (x0..=x1).contains(&x) && (y0..=y1).contains(&y) {
            fg
        } else {
            bg
        }
    })
}

/// Pixels whose centers lie within `radius` of `(cx, cy)` get `fg`.
pub fn filled_disk(
    width: usize,
    height: usize,
    cx: f64,
    cy: f64,
    radius: f64,
    fg: f32,
    bg: f32,
) -> GrayImage {
    GrayImage::from_fn(width, height, |x, y| {
        if (x as f64 - cx).hypot(y as f64 - cy) <= radius {
            fg
        } else {
            bg
        }
    })
}

/// Pixels whose centers lie inside the triangle get `fg`.
pub fn filled_triangle(
    width: usize,
    height: usize,
    vertices: [(f64, f64); 3],
    fg: f32,
    bg: f32,
) -> GrayImage {
    let [a, b, c] = vertices;
    let edge = |p: (f64, f64), q: (f64, f64), r: (f64, f64)| {
        (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)
    };
    GrayImage::from_fn(width, height, |x, y| {
        let p = (x as f64, y as f64);
        let d1 = edge(a, b, p);
        let d2 = edge(b, c, p);
        let d3 = edge(c, a, p);
        let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
        let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
        if neg && pos {
            bg
        } else {
            fg
        }
    })
}

/// Centroid of the triangle vertices.
pub fn triangle_centroid(vertices: [(f64, f64); 3]) -> (f64, f64) {
    let sx: f64 = vertices.iter().map(|v| v.0).sum();
    let sy: f64 = vertices.iter().map(|v| v.1).sum();
    (sx / 3.0, sy / 3.0)
}

/// Vertices of an equilateral triangle centered at `(cx, cy)`. With
/// `rotation_deg = 0` the first vertex points straight up (toward smaller y);
/// positive rotations turn clockwise on screen.
pub fn equilateral_triangle(cx: f64, cy: f64, side: f64, rotation_deg: f64) -> [(f64, f64); 3] {
    let r = side / 3f64.sqrt();
    let a0 = rotation_deg.to_radians();
    let vertex = |k: f64| {
        let t = a0 + k * std::f64::consts::TAU / 3.0;
        (cx + r * t.sin(), cy - r * t.cos())
    };
    [vertex(0.0), vertex(1.0), vertex(2.0)]
}

/// Concentric squares centered at `(cx, cy)`; `levels[k]` is `(side, value)`
/// drawn from the largest side to the smallest over background `bg`.
pub fn nested_squares(
    width: usize,
    height: usize,
    cx: i64,
    cy: i64,
    levels: &[(usize, f32)],
    bg: f32,
) -> GrayImage {
    let mut sorted = levels.to_vec();
    sorted.sort_by_key(|&(side, _)| std::cmp::Reverse(side));
    GrayImage::from_fn(width, height, |x, y| {
        let (x, y) = (x as i64, y as i64);
        let mut v = bg;
        for &(side, value) in &sorted {
            let x0 = cx - (side / 2) as i64;
            let y0 = cy - (side / 2) as i64;
            if (x0..x0 + side as i64).contains(&x) && (y0..y0 + side as i64).contains(&y) {
                v = value;
            }
        }
        v
    })
}

/// Gaussian bump for [`smooth_image`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub cx: f64,
    pub cy: f64,
    pub sigma: f64,
    pub amplitude: f64,
}

/// `base` plus a sum of Gaussian bumps, clamped to `[0, 1]`.
pub fn smooth_image(width: usize, height: usize, base: f64, bumps: &[Bump]) -> GrayImage {
    GrayImage::from_fn(width, height, |x, y| {
        let v: f64 = bumps
            .iter()
            .map(|b| {
                let d2 = (x as f64 - b.cx).powi(2) + (y as f64 - b.cy).powi(2);
                b.amplitude * (-d2 / (2.0 * b.sigma * b.sigma)).exp()
            })
            .sum();
        (base + v) as f32
    })
}

/// Rotates a square image by +90 degrees (the direction `(1, 0)` maps to
/// `(0, 1)`) about its center pixel. Exact pixel remap.
pub fn rotate90_image(img: &GrayImage) -> GrayImage {
    let n = img.width();
    assert_eq!(n, img.height(), "rotation needs a square image");
    GrayImage::from_fn(n, n, |x, y| img.get(y, n - 1 - x))
}

/// [`rotate90_image`] for edge maps; every bin advances by two.
pub fn rotate90_edges(edges: &OrientedEdgeMap) -> OrientedEdgeMap {
    let n = edges.width();
    assert_eq!(n, edges.height(), "rotation needs a square edge map");
    let mut out = OrientedEdgeMap::empty(n, n);
    for (x, y, bin) in edges.iter() {
        out.set(n - 1 - y, x, Some(bin.rotated(2)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edgemap::Bin;

    #[test]
    fn square_extent() {
        let img = filled_square(10, 10, 5, 5, 3, 0.0, 1.0);
        let dark: Vec<_> = (0..100).filter(|i| img.samples()[*i] == 0.0).collect();
        assert_eq!(dark.len(), 9);
        assert_eq!(img.get(4, 4), 0.0);
        assert_eq!(img.get(6, 6), 0.0);
        assert_eq!(img.get(7, 6), 1.0);
    }

    #[test]
    fn rotation_maps_directions() {
        let mut edges = OrientedEdgeMap::empty(5, 5);
        // one pixel east of center pointing east
        edges.set(3, 2, Bin::new(0));
        let r = rotate90_edges(&edges);
        assert_eq!(r.get(2, 3), Bin::new(2));
        let img = GrayImage::from_fn(5, 5, |x, y| if (x, y) == (3, 2) { 1.0 } else { 0.0 });
        assert_eq!(rotate90_image(&img).get(2, 3), 1.0);
    }

    #[test]
    fn four_rotations_are_identity() {
        let img = filled_triangle(21, 21, [(3.0, 2.0), (18.0, 7.0), (6.0, 17.0)], 0.0, 1.0);
        let mut r = img.clone();
        for _ in 0..4 {
            r = rotate90_image(&r);
        }
        assert_eq!(r, img);
    }

    #[test]
    fn equilateral_geometry() {
        let v = equilateral_triangle(10.0, 20.0, 6.0, 0.0);
        let (gx, gy) = triangle_centroid(v);
        assert!((gx - 10.0).abs() < 1e-12 && (gy - 20.0).abs() < 1e-12);
        assert!(v[0].1 < 20.0 && (v[0].0 - 10.0).abs() < 1e-12);
        for k in 0..3 {
            let (a, b) = (v[k], v[(k + 1) % 3]);
            assert!(((a.0 - b.0).hypot(a.1 - b.1) - 6.0).abs() < 1e-12);
        }
    }
}
