//! Gradient torque on disk patches.
//!
//! With the rotated gradient `(dI/dy, -dI/dx)` as the force, the torque of
//! a disk of radius `R` is `-(1 / 2 pi R^2) * integral of r . grad I`, which
//! by the divergence theorem equals the mean intensity inside the disk minus
//! the mean intensity on its boundary circle. Both routes are computed here
//! independently.

use std::f64::consts::PI;

use crate::raster::GrayImage;
use crate::{Error, Result};

/// Smallest admissible disk radius.
pub const MIN_RADIUS: f64 = 4.0;

// subsamples per axis when estimating partial pixel coverage
const COVERAGE_SUBSAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPatch {
    pub cx: f64,
    pub cy: f64,
    pub radius: f64,
}

impl DiskPatch {
    pub fn new(cx: f64, cy: f64, radius: f64) -> Self {
        DiskPatch { cx, cy, radius }
    }

    /// Checks that the closed disk lies inside the image domain.
    pub fn validate(&self, img: &GrayImage) -> Result<()> {
        if !(self.radius >= MIN_RADIUS && self.radius.is_finite()) {
            return Err(Error::invalid(format!(
                "disk radius {} must be at least {MIN_RADIUS}",
                self.radius
            )));
        }
        let max_x = (img.width() - 1) as f64;
        let max_y = (img.height() - 1) as f64;
        if self.cx - self.radius < 0.0
            || self.cy - self.radius < 0.0
            || self.cx + self.radius > max_x
            || self.cy + self.radius > max_y
        {
            return Err(Error::invalid(format!(
                "disk at ({}, {}) with radius {} exceeds the {}x{} image",
                self.cx,
                self.cy,
                self.radius,
                img.width(),
                img.height()
            )));
        }
        Ok(())
    }
}

fn central_difference(img: &GrayImage, x: usize, y: usize) -> (f64, f64) {
    let (w, h) = img.dims();
    let d = |lo: usize, hi: usize, a: f32, b: f32| (b as f64 - a as f64) / (hi - lo) as f64;
    let (xl, xr) = (x.saturating_sub(1), (x + 1).min(w - 1));
    let (yu, yd) = (y.saturating_sub(1), (y + 1).min(h - 1));
    let ix = d(xl, xr, img.get(xl, y), img.get(xr, y));
    let iy = d(yu, yd, img.get(x, yu), img.get(x, yd));
    (ix, iy)
}

// Fraction of the unit pixel square centered at (px, py) inside the disk.
fn coverage(disk: &DiskPatch, px: f64, py: f64) -> f64 {
    let r2 = disk.radius * disk.radius;
    let dist = (px - disk.cx).hypot(py - disk.cy);
    if dist + std::f64::consts::SQRT_2 / 2.0 <= disk.radius {
        return 1.0;
    }
    if dist - std::f64::consts::SQRT_2 / 2.0 >= disk.radius {
        return 0.0;
    }
    let n = COVERAGE_SUBSAMPLES;
    let mut inside = 0usize;
    for j in 0..n {
        let sy = py - 0.5 + (j as f64 + 0.5) / n as f64;
        for i in 0..n {
            let sx = px - 0.5 + (i as f64 + 0.5) / n as f64;
            if (sx - disk.cx).powi(2) + (sy - disk.cy).powi(2) <= r2 {
                inside += 1;
            }
        }
    }
    inside as f64 / (n * n) as f64
}

/// Grid summation of `r x (dI/dy, -dI/dx)` over the disk, with central
/// differences and area-weighted boundary pixels, divided by `2 pi R^2`.
pub fn gradient_torque_direct(img: &GrayImage, disk: DiskPatch) -> Result<f64> {
    disk.validate(img)?;
    let (w, h) = img.dims();
    let x_lo = (disk.cx - disk.radius - 1.0).floor().max(0.0) as usize;
    let x_hi = ((disk.cx + disk.radius + 1.0).ceil() as usize).min(w - 1);
    let y_lo = (disk.cy - disk.radius - 1.0).floor().max(0.0) as usize;
    let y_hi = ((disk.cy + disk.radius + 1.0).ceil() as usize).min(h - 1);
    let mut sum = 0.0;
    for y in y_lo..=y_hi {
        for x in x_lo..=x_hi {
            let weight = coverage(&disk, x as f64, y as f64);
            if weight == 0.0 {
                continue;
            }
            let (ix, iy) = central_difference(img, x, y);
            let rx = x as f64 - disk.cx;
            let ry = y as f64 - disk.cy;
            // r x (iy, -ix)
            sum += weight * (rx * -ix - ry * iy);
        }
    }
    Ok(sum / (2.0 * PI * disk.radius * disk.radius))
}

/// Interior mean minus boundary mean of the bilinearly sampled image, by
/// midpoint polar quadrature with `max(32, 4R)` radial and `max(64, 8R)`
/// angular nodes.
pub fn gradient_torque_intensity(img: &GrayImage, disk: DiskPatch) -> Result<f64> {
    disk.validate(img)?;
    let (interior, boundary) = disk_means(img, disk);
    Ok(interior - boundary)
}

/// Area-weighted interior mean and boundary-circle mean.
pub fn disk_means(img: &GrayImage, disk: DiskPatch) -> (f64, f64) {
    let r = disk.radius;
    let n_r = (4.0 * r).ceil().max(32.0) as usize;
    let n_theta = (8.0 * r).ceil().max(64.0) as usize;
    let dr = r / n_r as f64;
    let dtheta = 2.0 * PI / n_theta as f64;
    let angles: Vec<(f64, f64)> = (0..n_theta)
        .map(|k| {
            let t = -PI + (k as f64 + 0.5) * dtheta;
            (t.cos(), t.sin())
        })
        .collect();
    let mut interior = 0.0;
    for i in 0..n_r {
        let rho = (i as f64 + 0.5) * dr;
        let ring: f64 = angles
            .iter()
            .map(|&(c, s)| img.sample_bilinear(disk.cx + rho * c, disk.cy + rho * s))
            .sum();
        interior += ring * rho * dr * dtheta;
    }
    let boundary: f64 = angles
        .iter()
        .map(|&(c, s)| img.sample_bilinear(disk.cx + r * c, disk.cy + r * s))
        .sum::<f64>()
        / n_theta as f64;
    (interior / (PI * r * r), boundary)
}
