//! Red/blue rendering of signed maps.

use std::path::Path;

use imgtorque::raster::FloatMap;

use crate::{CliError, CliResult};

/// Positive values in red and negative values in blue, both scaled by the
/// largest magnitude. An all-zero map renders black.
pub fn render_signed(map: &FloatMap) -> CliResult<image::RgbImage> {
    map.check_finite()?;
    let scale = map.max_abs();
    let (w, h) = map.dims();
    let level = |v: f32| {
        if scale > 0.0 {
            (255.0 * v / scale).round().clamp(0.0, 255.0) as u8
        } else {
            0
        }
    };
    let mut out = image::RgbImage::new(w as u32, h as u32);
    for (x, y, px) in out.enumerate_pixels_mut() {
        let v = map.get(x as usize, y as usize);
        *px = image::Rgb([level(v.max(0.0)), 0, level((-v).max(0.0))]);
    }
    Ok(out)
}

pub fn save_rendering(img: &image::RgbImage, path: &Path) -> CliResult<()> {
    img.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
