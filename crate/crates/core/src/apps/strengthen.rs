use super::contribution::{edge_contribution, edge_contribution_all_patches, ContributionMode};
use super::DEFAULT_CONTRIBUTION_EXTREMA;
use crate::edgemap::OrientedEdgeMap;
use crate::raster::FloatMap;
use crate::torque::TorqueVolume;
use crate::{Error, Result};

pub const DEFAULT_C0: f64 = -2.54;
pub const DEFAULT_C1: f64 = 1.86;
pub const DEFAULT_C2: f64 = 2.69;
pub const DEFAULT_BLEND: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StrengthenMode {
    #[default]
    Logistic,
    Linear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrengthenConfig {
    pub mode: StrengthenMode,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub blend: f64,
    pub num_extrema: usize,
    pub contribution: ContributionMode,
}

impl Default for StrengthenConfig {
    fn default() -> Self {
        StrengthenConfig {
            mode: StrengthenMode::Logistic,
            c0: DEFAULT_C0,
            c1: DEFAULT_C1,
            c2: DEFAULT_C2,
            blend: DEFAULT_BLEND,
            num_extrema: DEFAULT_CONTRIBUTION_EXTREMA,
            contribution: ContributionMode::Extrema,
        }
    }
}

impl StrengthenConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.blend) {
            return Err(Error::invalid(format!("blend {} must lie in [0, 1]", self.blend)));
        }
        if self.num_extrema == 0 {
            return Err(Error::invalid("num_extrema must be at least 1"));
        }
        if ![self.c0, self.c1, self.c2].iter().all(|c| c.is_finite()) {
            return Err(Error::invalid("logistic coefficients must be finite"));
        }
        Ok(())
    }

    /// Combines one original edge value with its normalized contribution.
    pub fn combine(&self, d_o: f64, d_tau: f64) -> f64 {
        match self.mode {
            StrengthenMode::Logistic => strengthen_logistic(d_o, d_tau, self.c0, self.c1, self.c2),
            StrengthenMode::Linear => strengthen_linear(d_o, d_tau, self.blend),
        }
    }
}

/// `1 / (1 + exp(-(c0 + c1 d_o + c2 d_tau)))`.
pub fn strengthen_logistic(d_o: f64, d_tau: f64, c0: f64, c1: f64, c2: f64) -> f64 {
    1.0 / (1.0 + (-(c0 + c1 * d_o + c2 * d_tau)).exp())
}

/// `(1 - blend) d_o + blend d_tau`.
pub fn strengthen_linear(d_o: f64, d_tau: f64, blend: f64) -> f64 {
    (1.0 - blend) * d_o + blend * d_tau
}

/// Reweights edge pixels by the configured combination; non-edge pixels are 0.
pub fn strengthen_edges(
    edges: &OrientedEdgeMap,
    d_o: &FloatMap,
    d_tau: &FloatMap,
    cfg: &StrengthenConfig,
) -> Result<FloatMap> {
    cfg.validate()?;
    d_o.ensure_dims(edges.dims())?;
    d_tau.ensure_dims(edges.dims())?;
    let (w, h) = edges.dims();
    let mut out = FloatMap::zeros(w, h);
    for (x, y, _) in edges.iter() {
        let v = cfg.combine(d_o.get(x, y) as f64, d_tau.get(x, y) as f64);
        out.set(x, y, v as f32);
    }
    Ok(out)
}

/// Contribution map plus [`strengthen_edges`] in one step.
pub fn strengthened_edges(
    edges: &OrientedEdgeMap,
    d_o: &FloatMap,
    vol: &TorqueVolume,
    cfg: &StrengthenConfig,
) -> Result<FloatMap> {
    cfg.validate()?;
    let d_tau = match cfg.contribution {
        ContributionMode::Extrema => edge_contribution(edges, vol, cfg.num_extrema)?,
        ContributionMode::AllPatches => edge_contribution_all_patches(edges, vol)?,
    };
    strengthen_edges(edges, d_o, &d_tau, cfg)
}
