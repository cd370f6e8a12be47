use crate::extrema::TorqueExtremum;
use crate::raster::FloatMap;
use crate::{Error, Result};

/// Gaussian standard deviation in pixels.
pub const DEFAULT_SIGMA: f64 = 25.0;
/// Weight of the torque map when blending with an external saliency map.
pub const DEFAULT_TORQUE_WEIGHT: f64 = 0.3;

/// How each extremum's Gaussian is weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GaussianWeighting {
    /// Peak proportional to `|value| / max |value|`.
    #[default]
    ByValue,
    Uniform,
}

/// A saliency map normalized to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    pub map: FloatMap,
    pub sigma: f64,
}

/// Mixture of isotropic Gaussians centered at the extrema, min-max
/// normalized. No extrema gives a zero map.
pub fn saliency_from_extrema(
    extrema: &[TorqueExtremum],
    sigma: f64,
    dims: (usize, usize),
    weighting: GaussianWeighting,
) -> Result<SaliencyMap> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::invalid(format!("sigma {sigma} must be positive")));
    }
    let (w, h) = dims;
    if w == 0 || h == 0 {
        return Err(Error::invalid("saliency map must be at least 1x1"));
    }
    let max_abs = extrema.iter().fold(0.0f64, |m, e| m.max(e.value.abs() as f64));
    let mut acc = vec![0.0f64; w * h];
    let inv = 1.0 / (2.0 * sigma * sigma);
    for e in extrema {
        let weight = match weighting {
            GaussianWeighting::ByValue if max_abs > 0.0 => e.value.abs() as f64 / max_abs,
            _ => 1.0,
        };
        let (ex, ey) = (e.x as f64, e.y as f64);
        for y in 0..h {
            let dy = y as f64 - ey;
            for x in 0..w {
                let dx = x as f64 - ex;
                acc[y * w + x] += weight * (-(dx * dx + dy * dy) * inv).exp();
            }
        }
    }
    Ok(SaliencyMap {
        map: normalize64(&acc, w, h)?,
        sigma,
    })
}

// min-max normalization in f64; a constant input maps to zero
fn normalize64(values: &[f64], w: usize, h: usize) -> Result<FloatMap> {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if hi > lo {
        let data = values.iter().map(|&v| ((v - lo) / (hi - lo)) as f32).collect();
        FloatMap::from_vec(w, h, data)
    } else {
        Ok(FloatMap::zeros(w, h))
    }
}

/// `weight * torque + (1 - weight) * external`, renormalized to `[0, 1]`.
pub fn blend_saliency(torque: &SaliencyMap, external: &FloatMap, weight: f64) -> Result<SaliencyMap> {
    external.ensure_dims(torque.map.dims())?;
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::invalid(format!("blend weight {weight} must lie in [0, 1]")));
    }
    if let Some(i) = external.data().iter().position(|v| !(0.0..=1.0).contains(v)) {
        let w = external.width();
        return Err(Error::invalid(format!(
            "external saliency at ({}, {}) is outside [0, 1]",
            i % w,
            i / w
        )));
    }
    let (w, h) = external.dims();
    let mixed: Vec<f64> = torque
        .map
        .data()
        .iter()
        .zip(external.data())
        .map(|(&t, &e)| weight * t as f64 + (1.0 - weight) * e as f64)
        .collect();
    Ok(SaliencyMap {
        map: normalize64(&mixed, w, h)?,
        sigma: torque.sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extrema::Polarity;

    fn ext(x: usize, y: usize, value: f32) -> TorqueExtremum {
        TorqueExtremum {
            x,
            y,
            scale: 21,
            value,
            polarity: if value > 0.0 { Polarity::Maximum } else { Polarity::Minimum },
        }
    }

    #[test]
    fn single_gaussian_profile() {
        let s = saliency_from_extrema(&[ext(100, 100, -0.4)], 25.0, (201, 201), Default::default())
            .unwrap();
        assert_eq!(s.map.get(100, 100), 1.0);
        let at_sigma = s.map.get(125, 100) as f64;
        assert!((at_sigma - (-0.5f64).exp()).abs() < 1e-5, "{at_sigma}");
    }

    #[test]
    fn two_far_peaks() {
        let s = saliency_from_extrema(
            &[ext(20, 50, 0.3), ext(380, 50, 0.3)],
            10.0,
            (400, 100),
            GaussianWeighting::ByValue,
        )
        .unwrap();
        assert!((s.map.get(20, 50) - 1.0).abs() < 1e-6);
        assert!((s.map.get(380, 50) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn weighting_modes() {
        let e = [ext(10, 10, 0.8), ext(90, 10, -0.2)];
        let by_value = saliency_from_extrema(&e, 5.0, (100, 20), GaussianWeighting::ByValue).unwrap();
        let uniform = saliency_from_extrema(&e, 5.0, (100, 20), GaussianWeighting::Uniform).unwrap();
        assert!(by_value.map.get(90, 10) < 0.3);
        assert!((uniform.map.get(90, 10) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn empty_and_invalid() {
        let s = saliency_from_extrema(&[], 25.0, (5, 5), Default::default()).unwrap();
        assert!(s.map.data().iter().all(|&v| v == 0.0));
        assert!(saliency_from_extrema(&[], 0.0, (5, 5), Default::default()).is_err());
    }

    #[test]
    fn blend_endpoints() {
        let torque = saliency_from_extrema(&[ext(3, 3, 0.5)], 2.0, (12, 8), Default::default()).unwrap();
        let external = FloatMap::from_fn(12, 8, |x, _| x as f32 / 11.0);
        let only_torque = blend_saliency(&torque, &external, 1.0).unwrap();
        assert_eq!(only_torque.map, torque.map);
        let only_external = blend_saliency(&torque, &external, 0.0).unwrap();
        for (a, b) in only_external.map.data().iter().zip(external.data()) {
            assert!((a - b).abs() < 1e-6);
        }
        assert!(blend_saliency(&torque, &external, 1.5).is_err());
        assert!(blend_saliency(&torque, &FloatMap::zeros(3, 3), 0.3).is_err());
        assert!(blend_saliency(&torque, &external.map(|v| v * 2.0), 0.3).is_err());
    }
}
