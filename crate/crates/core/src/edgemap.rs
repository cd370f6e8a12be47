//! Gradients, thinned edges and the 8-direction orientation quantization.
//!
//! An edge pixel is oriented perpendicular clockwise to the gradient,
//! `(gy, -gx)`, so the brighter side lies to the walker's right under the
//! y-down convention. Orientations are quantized to `theta_i = i * pi / 4`,
//! `i = 0..8` (stored on disk as labels `1..=8`).

use std::fs;
use std::path::Path;

use crate::raster::pnm;
use crate::raster::{FloatMap, GrayImage};
use crate::{Error, Result};

/// Default edge threshold, relative to the per-image maximum gradient magnitude.
pub const DEFAULT_EDGE_THRESHOLD: f64 = 0.10;

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Unit vectors `(cos theta_i, sin theta_i)`. Opposite bins are exact
/// negations and `i + 2` is the exact 90 degree rotation of `i`.
pub const DIRECTIONS: [(f64, f64); 8] = [
    (1.0, 0.0),
    (H, H),
    (0.0, 1.0),
    (-H, H),
    (-1.0, 0.0),
    (-H, -H),
    (0.0, -1.0),
    (H, -H),
];

// tan(pi / 8)
const TAN_22_5: f64 = 0.414_213_562_373_095_03;

/// One of the eight quantized edge orientations, `theta = index * 45 deg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bin(u8);

impl Bin {
    pub const ALL: [Bin; 8] = [Bin(0), Bin(1), Bin(2), Bin(3), Bin(4), Bin(5), Bin(6), Bin(7)];

    pub fn new(index: u8) -> Option<Bin> {
        (index < 8).then_some(Bin(index))
    }

    /// Zero-based index `0..8`.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// One-based label `1..=8` used in files.
    pub fn label(self) -> u8 {
        self.0 + 1
    }

    pub fn angle(self) -> f64 {
        self.0 as f64 * std::f64::consts::FRAC_PI_4
    }

    pub fn unit(self) -> (f64, f64) {
        DIRECTIONS[self.index()]
    }

    /// The opposite orientation (`i + 4`).
    pub fn flipped(self) -> Bin {
        Bin((self.0 + 4) % 8)
    }

    /// Rotation by `steps * 45` degrees.
    pub fn rotated(self, steps: i32) -> Bin {
        Bin((self.0 as i32 + steps).rem_euclid(8) as u8)
    }

    /// Nearest bin to a nonzero direction; ties go to the lower index.
    pub fn nearest(dx: f64, dy: f64) -> Bin {
        let mut best = 0usize;
        let mut best_dot = f64::NEG_INFINITY;
        for (i, &(c, s)) in DIRECTIONS.iter().enumerate() {
            let dot = dx * c + dy * s;
            if dot > best_dot {
                best_dot = dot;
                best = i;
            }
        }
        Bin(best as u8)
    }
}

/// Per-pixel image derivatives.
#[derive(Debug, Clone)]
pub struct GradientField {
    width: usize,
    height: usize,
    gx: Vec<f64>,
    gy: Vec<f64>,
    magnitude: Vec<f64>,
}

impl GradientField {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> (f64, f64) {
        let i = y * self.width + x;
        (self.gx[i], self.gy[i])
    }

    #[inline]
    pub fn magnitude(&self, x: usize, y: usize) -> f64 {
        self.magnitude[y * self.width + x]
    }

    pub fn max_magnitude(&self) -> f64 {
        self.magnitude.iter().fold(0.0, |m, &v| m.max(v))
    }

    pub fn magnitude_map(&self) -> FloatMap {
        FloatMap::from_fn(self.width, self.height, |x, y| self.magnitude(x, y) as f32)
    }
}

/// Sobel derivatives (scaled to luminance per pixel) with edge replication.
pub fn gradient(img: &GrayImage) -> Result<GradientField> {
    let (w, h) = img.dims();
    if w < 3 || h < 3 {
        return Err(Error::invalid(format!(
            "image {w}x{h} is smaller than the 3x3 gradient kernel"
        )));
    }
    let n = w * h;
    let mut gx = vec![0.0; n];
    let mut gy = vec![0.0; n];
    let mut magnitude = vec![0.0; n];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let p = |dx: isize, dy: isize| img.get_clamped(x + dx, y + dy) as f64;
            let dx = (p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1));
            let dy = (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1));
            let i = y as usize * w + x as usize;
            gx[i] = dx / 8.0;
            gy[i] = dy / 8.0;
            magnitude[i] = gx[i].hypot(gy[i]);
        }
    }
    Ok(GradientField {
        width: w,
        height: h,
        gx,
        gy,
        magnitude,
    })
}

/// Unit edge direction `(gy, -gx) / |g|` for a gradient vector.
pub fn edge_direction(gx: f64, gy: f64) -> Result<(f64, f64)> {
    let norm = gx.hypot(gy);
    if norm == 0.0 {
        return Err(Error::invalid("edge direction of a zero gradient"));
    }
    Ok((gy / norm, -gx / norm))
}

/// Bin nearest to the edge direction of a nonzero gradient.
#[inline]
pub fn gradient_bin(gx: f64, gy: f64) -> Bin {
    Bin::nearest(gy, -gx)
}

/// Binary edges with one quantized orientation per edge pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedEdgeMap {
    width: usize,
    height: usize,
    // 0 = no edge, 1..=8 = bin label
    labels: Vec<u8>,
}

impl OrientedEdgeMap {
    pub fn empty(width: usize, height: usize) -> Self {
        OrientedEdgeMap {
            width,
            height,
            labels: vec![0; width * height],
        }
    }

    /// Builds a map from per-pixel labels (0 = none, 1..=8 = bin).
    pub fn from_labels(width: usize, height: usize, labels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || labels.len() != width * height {
            return Err(Error::invalid("label count does not match edge map dimensions"));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l > 8) {
            return Err(Error::invalid(format!("edge label {bad} out of range 0..=8")));
        }
        Ok(OrientedEdgeMap {
            width,
            height,
            labels,
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

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<Bin> {
        match self.labels[y * self.width + x] {
            0 => None,
            l => Some(Bin(l - 1)),
        }
    }

    pub fn set(&mut self, x: usize, y: usize, bin: Option<Bin>) {
        self.labels[y * self.width + x] = bin.map_or(0, Bin::label);
    }

    /// The indicator `delta(x, y, i)`.
    #[inline]
    pub fn delta(&self, x: usize, y: usize, bin: Bin) -> bool {
        self.labels[y * self.width + x] == bin.label()
    }

    /// Iterates edge pixels as `(x, y, bin)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Bin)> + '_ {
        let w = self.width;
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l != 0)
            .map(move |(i, &l)| (i % w, i / w, Bin(l - 1)))
    }

    pub fn count(&self) -> usize {
        self.labels.iter().filter(|&&l| l != 0).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// Every orientation reversed, as produced by contrast inversion.
    pub fn flipped(&self) -> Self {
        OrientedEdgeMap {
            width: self.width,
            height: self.height,
            labels: self
                .labels
                .iter()
                .map(|&l| if l == 0 { 0 } else { Bin(l - 1).flipped().label() })
                .collect(),
        }
    }

    /// 8-bit encoding: pixel value = bin label, 0 for no edge.
    pub fn to_pgm_bytes(&self) -> Vec<u8> {
        pnm::encode_pgm(self.width, self.height, &self.labels)
    }

    pub fn from_pgm_bytes(bytes: &[u8]) -> Result<Self> {
        let pgm = pnm::decode_pgm(bytes)?;
        if pgm.maxval != 255 {
            return Err(Error::malformed("edge map PGM", "maxval must be 255"));
        }
        OrientedEdgeMap::from_labels(pgm.width, pgm.height, pgm.samples)
            .map_err(|e| Error::malformed("edge map PGM", e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_pgm_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_pgm_bytes(&fs::read(path)?)
    }
}

// Axis along which non-maximum suppression compares neighbors. The offset is
// canonical (dy > 0, or dy == 0 and dx > 0) so the kept pixel on an exact
// tie depends only on the line, not on the gradient sign.
fn nms_axis(gx: f64, gy: f64) -> (isize, isize) {
    let (ax, ay) = (gx.abs(), gy.abs());
    if ay <= TAN_22_5 * ax {
        (1, 0)
    } else if ax <= TAN_22_5 * ay {
        (0, 1)
    } else if (gx > 0.0) == (gy > 0.0) {
        (1, 1)
    } else {
        (-1, 1)
    }
}

fn is_ridge(grad: &GradientField, x: usize, y: usize) -> bool {
    let m = grad.magnitude(x, y);
    if m <= 0.0 {
        return false;
    }
    let (gx, gy) = grad.at(x, y);
    let (ox, oy) = nms_axis(gx, gy);
    let neighbor = |sx: isize, sy: isize| {
        let nx = x as isize + sx;
        let ny = y as isize + sy;
        if nx < 0 || ny < 0 || nx >= grad.width as isize || ny >= grad.height as isize {
            0.0
        } else {
            grad.magnitude(nx as usize, ny as usize)
        }
    };
    m > neighbor(ox, oy) && m >= neighbor(-ox, -oy)
}

fn check_threshold(threshold: f64) -> Result<()> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::invalid(format!(
            "edge threshold {threshold} must lie in (0, 1)"
        )));
    }
    Ok(())
}

/// Thresholded, non-maximum-suppressed edges with quantized orientations.
///
/// A pixel survives when its magnitude is at least `threshold` times the
/// image maximum and it is a ridge along its gradient axis.
pub fn detect_edges(grad: &GradientField, threshold: f64) -> Result<OrientedEdgeMap> {
    check_threshold(threshold)?;
    let (w, h) = grad.dims();
    let mut edges = OrientedEdgeMap::empty(w, h);
    let cutoff = threshold * grad.max_magnitude();
    for y in 0..h {
        for x in 0..w {
            if grad.magnitude(x, y) >= cutoff && is_ridge(grad, x, y) {
                let (gx, gy) = grad.at(x, y);
                edges.set(x, y, Some(gradient_bin(gx, gy)));
            }
        }
    }
    Ok(edges)
}

/// Thinned edge strength: ridge magnitudes divided by the image maximum,
/// zero elsewhere. Suitable as `d_o` and as input to [`import_edges`].
pub fn edge_strength(grad: &GradientField) -> FloatMap {
    let max = grad.max_magnitude();
    let (w, h) = grad.dims();
    FloatMap::from_fn(w, h, |x, y| {
        if max > 0.0 && is_ridge(grad, x, y) {
            (grad.magnitude(x, y) / max) as f32
        } else {
            0.0
        }
    })
}

/// Edges from an external strength map (Canny, pb, ...), oriented by the
/// image gradient. Pixels with strength at least `threshold` survive unless
/// their gradient is zero.
pub fn import_edges(
    strength: &FloatMap,
    grad: &GradientField,
    threshold: f64,
) -> Result<OrientedEdgeMap> {
    strength.ensure_dims(grad.dims())?;
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::invalid(format!("import threshold {threshold} must be positive")));
    }
    let (w, h) = grad.dims();
    let mut edges = OrientedEdgeMap::empty(w, h);
    for y in 0..h {
        for x in 0..w {
            let s = strength.get(x, y) as f64;
            let (gx, gy) = grad.at(x, y);
            if s >= threshold && (gx != 0.0 || gy != 0.0) {
                edges.set(x, y, Some(gradient_bin(gx, gy)));
            }
        }
    }
    Ok(edges)
}

/// Convenience: gradient plus [`detect_edges`].
pub fn edges_from_image(img: &GrayImage, threshold: f64) -> Result<OrientedEdgeMap> {
    detect_edges(&gradient(img)?, threshold)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step_image() -> GrayImage {
        GrayImage::from_fn(16, 12, |x, _| if x < 8 { 0.0 } else { 1.0 })
    }

    #[test]
    fn direction_table_matches_angles() {
        for bin in Bin::ALL {
            let (c, s) = bin.unit();
            assert!((c - bin.angle().cos()).abs() < 1e-15);
            assert!((s - bin.angle().sin()).abs() < 1e-15);
            assert_eq!(bin.flipped().unit(), (-c, -s));
            assert_eq!(bin.rotated(2).unit().0, -s);
        }
    }

    #[test]
    fn constant_image_has_zero_gradient() {
        let g = gradient(&GrayImage::from_fn(8, 8, |_, _| 0.3)).unwrap();
        assert!(g.magnitude.iter().all(|&m| m == 0.0));
        assert!(detect_edges(&g, 0.1).unwrap().is_empty());
    }

    #[test]
    fn ramp_gradient_sign() {
        let w = 20;
        let g = gradient(&GrayImage::from_fn(w, 10, |x, _| x as f32 / w as f32)).unwrap();
        for y in 1..9 {
            for x in 1..w - 1 {
                let (gx, gy) = g.at(x, y);
                assert!(gx > 0.0);
                assert_eq!(gy, 0.0);
                assert!((gx - 1.0 / w as f64).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn step_gradient_and_edge_column() {
        let g = gradient(&step_image()).unwrap();
        assert!(g.at(8, 5).0 > 0.0);
        let edges = detect_edges(&g, 0.1).unwrap();
        let cols: Vec<usize> = edges.iter().map(|(x, _, _)| x).collect();
        assert_eq!(cols.len(), 12);
        assert!(cols.iter().all(|&x| x == 8));
        // nearest bin to (0, -1) is theta = 270 deg
        assert!(edges.iter().all(|(_, _, b)| b.index() == 6));
    }

    #[test]
    fn edge_direction_cases() {
        assert_eq!(edge_direction(1.0, 0.0).unwrap(), (0.0, -1.0));
        assert_eq!(edge_direction(0.0, 1.0).unwrap(), (1.0, 0.0));
        assert!(edge_direction(0.0, 0.0).is_err());
        let (dx, dy) = edge_direction(3.0, 4.0).unwrap();
        assert!((dx.hypot(dy) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nearest_bin_tie_goes_low() {
        // exactly between theta_0 and theta_1
        let a = std::f64::consts::PI / 8.0;
        assert_eq!(Bin::nearest(a.cos(), a.sin()).index(), 0);
        assert_eq!(Bin::nearest(0.0, -1.0).index(), 6);
    }

    #[test]
    fn threshold_validation() {
        let g = gradient(&step_image()).unwrap();
        assert!(detect_edges(&g, 0.0).is_err());
        assert!(detect_edges(&g, 1.0).is_err());
        assert!(gradient(&GrayImage::from_fn(2, 5, |_, _| 0.0)).is_err());
    }

    #[test]
    fn import_rules() {
        let g = gradient(&step_image()).unwrap();
        let zeros = FloatMap::zeros(16, 12);
        assert!(import_edges(&zeros, &g, 0.5).unwrap().is_empty());

        // strong response where the gradient vanishes is dropped
        let mut lone = FloatMap::zeros(16, 12);
        lone.set(2, 2, 1.0);
        lone.set(8, 3, 1.0);
        let e = import_edges(&lone, &g, 0.5).unwrap();
        assert_eq!(e.count(), 1);
        assert!(e.get(8, 3).is_some());

        assert!(matches!(
            import_edges(&FloatMap::zeros(3, 3), &g, 0.5),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pgm_encoding_round_trips() {
        let edges = edges_from_image(&step_image(), 0.1).unwrap();
        let back = OrientedEdgeMap::from_pgm_bytes(&edges.to_pgm_bytes()).unwrap();
        assert_eq!(back, edges);
        let bad = pnm::encode_pgm(1, 1, &[9]);
        assert!(OrientedEdgeMap::from_pgm_bytes(&bad).is_err());
    }
}
