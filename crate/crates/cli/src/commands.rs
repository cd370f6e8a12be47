use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use imgtorque::apps::{
    blend_saliency, curve_to_csv, equally_spaced_thresholds, max_f, pr_curve,
    saliency_from_extrema, strengthened_edges, BinaryMask, ContributionMode, GaussianWeighting,
    StrengthenConfig, StrengthenMode, DEFAULT_BLEND, DEFAULT_C0, DEFAULT_C1, DEFAULT_C2,
    DEFAULT_CONTRIBUTION_EXTREMA, DEFAULT_SIGMA, DEFAULT_TORQUE_WEIGHT, GROUND_TRUTH_THRESHOLD,
};
use imgtorque::edgemap::{
    detect_edges, edge_strength, gradient, import_edges, OrientedEdgeMap, DEFAULT_EDGE_THRESHOLD,
};
use imgtorque::extrema::{find_extrema, mtp_patches, Polarity, TorqueExtremum, DEFAULT_EXTREMA_PER_POLARITY};
use imgtorque::gradtorque::{disk_means, gradient_torque_direct, gradient_torque_intensity, DiskPatch};
use imgtorque::mst::{mst_descriptor, MstConfig};
use imgtorque::raster::pnm::save_pgm;
use imgtorque::raster::{decode_image, decode_pfm, downsample, save_float_map, FloatMap, GrayImage};
use imgtorque::torque::{
    default_scales_for, reduce_volume, torque_map_fast, torque_map_naive, torque_volume,
    TorquePrecompute, TorqueVolume, DEFAULT_ALPHA,
};
use serde::Serialize;

use crate::bench::{run_bench, BenchConfig, DEFAULT_MAX_RATIO};
use crate::render::{render_signed, save_rendering};
use crate::{write_sidecar, CliError, CliResult};

/// Where the oriented edges come from.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SourceArgs {
    /// Input image, PNG or binary PGM
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    /// Oriented edge map written by `edges`, used instead of --input
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Edge threshold as a fraction of the largest gradient magnitude
    #[arg(long, default_value_t = DEFAULT_EDGE_THRESHOLD)]
    pub threshold: f64,
    /// Block-mean downsampling factor applied to the input image
    #[arg(long, default_value_t = 1)]
    pub downsample: usize,
}

impl SourceArgs {
    fn validate(&self) -> CliResult<()> {
        match (&self.input, &self.edges) {
            (None, None) => return Err(CliError::Usage("one of --input or --edges is required".into())),
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("--input and --edges are mutually exclusive".into()))
            }
            _ => {}
        }
        check_threshold(self.threshold)?;
        if self.downsample == 0 {
            return Err(CliError::Invalid("--downsample must be at least 1".into()));
        }
        Ok(())
    }

    fn load_edges(&self) -> CliResult<OrientedEdgeMap> {
        self.validate()?;
        if let Some(path) = &self.edges {
            return Ok(OrientedEdgeMap::load(path)?);
        }
        let img = load_gray(self.input.as_deref().expect("validated"), self.downsample)?;
        Ok(detect_edges(&gradient(&img)?, self.threshold)?)
    }
}

/// Patch sides and normalization exponent of a volume.
#[derive(Debug, Clone, Args, Serialize)]
pub struct ScaleArgs {
    /// Odd patch sides, comma separated [default: 3,7,...,91 up to the image size]
    #[arg(long, value_delimiter = ',')]
    pub scales: Vec<usize>,
    /// Normalization exponent; 2 divides by the patch area
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
}

impl ScaleArgs {
    fn resolve(&self, dims: (usize, usize)) -> CliResult<Vec<usize>> {
        check_alpha(self.alpha)?;
        let scales = if self.scales.is_empty() {
            default_scales_for(dims.0, dims.1)
        } else {
            self.scales.clone()
        };
        if scales.is_empty() {
            return Err(CliError::Invalid(format!(
                "a {}x{} image admits no default patch side",
                dims.0, dims.1
            )));
        }
        Ok(scales)
    }
}

/// A stored volume, or edges from which to compute one.
#[derive(Debug, Clone, Args, Serialize)]
pub struct VolumeSourceArgs {
    /// Torque volume directory written by `volume`
    #[arg(long)]
    pub volume: Option<PathBuf>,
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub scales: ScaleArgs,
}

impl VolumeSourceArgs {
    fn load(&self) -> CliResult<(TorqueVolume, Option<OrientedEdgeMap>)> {
        if let Some(dir) = &self.volume {
            if self.source.input.is_some() || self.source.edges.is_some() {
                return Err(CliError::Usage("--volume excludes --input and --edges".into()));
            }
            return Ok((TorqueVolume::load(dir)?, None));
        }
        let edges = self.source.load_edges()?;
        let scales = self.scales.resolve(edges.dims())?;
        let vol = torque_volume(&edges, &scales, self.scales.alpha)?;
        Ok((vol, Some(edges)))
    }
}

fn check_threshold(t: f64) -> CliResult<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("threshold {t} must lie in (0, 1)")))
    }
}

fn check_alpha(alpha: f64) -> CliResult<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("alpha {alpha} must be positive")))
    }
}

fn check_unit(name: &str, v: f64) -> CliResult<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("{name} {v} must lie in [0, 1]")))
    }
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_gray(path: &Path, factor: usize) -> CliResult<GrayImage> {
    let img = decode_image(&read(path)?)?;
    Ok(if factor > 1 { downsample(&img, factor)? } else { img })
}

/// A PFM float map, or an image read as a map of its samples.
fn load_map(path: &Path) -> CliResult<FloatMap> {
    let bytes = read(path)?;
    if bytes.starts_with(b"Pf") || bytes.starts_with(b"PF") {
        Ok(decode_pfm(&bytes)?)
    } else {
        Ok(FloatMap::from(&decode_image(&bytes)?))
    }
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn save_map(map: &FloatMap, path: &Path) -> CliResult<()> {
    Ok(save_float_map(map, path)?)
}

fn save_preview(map: &FloatMap, path: Option<&Path>) -> CliResult<()> {
    if let Some(path) = path {
        save_pgm(map.width(), map.height(), &map.to_u8(), path)?;
    }
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub struct EdgesArgs {
    /// Input image, PNG or binary PGM
    #[arg(short, long)]
    pub input: PathBuf,
    /// Output edge map, PGM with labels 0 (none) and 1-8 (bins)
    #[arg(short, long)]
    pub output: PathBuf,
    /// Edge threshold; relative to the largest gradient magnitude unless
    /// --strength is given, in which case it applies to the strength map
    #[arg(long, default_value_t = DEFAULT_EDGE_THRESHOLD)]
    pub threshold: f64,
    /// Block-mean downsampling factor applied to the input image
    #[arg(long, default_value_t = 1)]
    pub downsample: usize,
    /// External edge strength map (PFM or image) to threshold instead of
    /// running the built-in detector; orientations come from the image
    #[arg(long)]
    pub strength: Option<PathBuf>,
    /// Also write the thinned, normalized gradient magnitude as PFM
    #[arg(long)]
    pub magnitude: Option<PathBuf>,
}

pub fn cmd_edges(a: &EdgesArgs) -> CliResult<()> {
    check_threshold(a.threshold)?;
    if a.downsample == 0 {
        return Err(CliError::Invalid("--downsample must be at least 1".into()));
    }
    let img = load_gray(&a.input, a.downsample)?;
    let grad = gradient(&img)?;
    let edges = match &a.strength {
        Some(path) => import_edges(&load_map(path)?, &grad, a.threshold)?,
        None => detect_edges(&grad, a.threshold)?,
    };
    edges.save(&a.output)?;
    if let Some(path) = &a.magnitude {
        save_map(&edge_strength(&grad), path)?;
    }
    write_sidecar(&a.output, "edges", a, serde_json::json!({ "edge_pixels": edges.count() }))
}

#[derive(Debug, Args, Serialize)]
pub struct MapArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Odd patch side
    #[arg(long)]
    pub scale: usize,
    /// Normalization exponent; 2 divides by the patch area
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Use direct per-patch summation instead of summed area tables
    #[arg(long)]
    pub oracle: bool,
    /// Output PFM
    #[arg(short, long)]
    pub output: PathBuf,
}

pub fn cmd_map(a: &MapArgs) -> CliResult<()> {
    check_alpha(a.alpha)?;
    let edges = a.source.load_edges()?;
    let map = if a.oracle {
        let (w, h) = edges.dims();
        if a.scale > w.min(h) {
            return Err(CliError::Invalid(format!(
                "patch side {} exceeds the smaller image side {}",
                a.scale,
                w.min(h)
            )));
        }
        torque_map_naive(&edges, a.scale, a.alpha)?
    } else {
        torque_map_fast(&TorquePrecompute::build(&edges), a.scale, a.alpha)?
    };
    save_map(&map, &a.output)?;
    write_sidecar(&a.output, "map", a, ())
}

#[derive(Debug, Args, Serialize)]
pub struct VolumeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub scales: ScaleArgs,
    /// Output directory (manifest.json plus one PFM per scale)
    #[arg(short, long)]
    pub output: PathBuf,
}

pub fn cmd_volume(a: &VolumeArgs) -> CliResult<()> {
    check_alpha(a.scales.alpha)?;
    let edges = a.source.load_edges()?;
    let scales = a.scales.resolve(edges.dims())?;
    let vol = torque_volume(&edges, &scales, a.scales.alpha)?;
    vol.save(&a.output)?;
    write_sidecar(&a.output, "volume", a, serde_json::json!({ "scales": scales }))
}

#[derive(Debug, Args, Serialize)]
pub struct ReduceArgs {
    /// Torque volume directory
    #[arg(long)]
    pub volume: PathBuf,
    /// Output value map V (PFM)
    #[arg(long)]
    pub value: PathBuf,
    /// Output signed scale map S (PFM)
    #[arg(long)]
    pub scale_map: PathBuf,
}

pub fn cmd_reduce(a: &ReduceArgs) -> CliResult<()> {
    let maps = reduce_volume(&TorqueVolume::load(&a.volume)?);
    save_map(&maps.value, &a.value)?;
    save_map(&maps.scale, &a.scale_map)?;
    write_sidecar(&a.value, "reduce", a, ())
}

#[derive(Debug, Serialize)]
struct ExtremaFile<'a> {
    maxima: &'a [TorqueExtremum],
    minima: &'a [TorqueExtremum],
}

#[derive(Debug, Args, Serialize)]
pub struct ExtremaArgs {
    #[command(flatten)]
    pub volume: VolumeSourceArgs,
    /// Extrema kept per polarity
    #[arg(long, default_value_t = DEFAULT_EXTREMA_PER_POLARITY)]
    pub k: usize,
    /// Output JSON with `maxima` and `minima` lists
    #[arg(short, long)]
    pub output: PathBuf,
}

pub fn cmd_extrema(a: &ExtremaArgs) -> CliResult<()> {
    if a.k == 0 {
        return Err(CliError::Invalid("--k must be at least 1".into()));
    }
    let (vol, _) = a.volume.load()?;
    let (maxima, minima) = find_extrema(&vol, a.k)?;
    write_json(&ExtremaFile { maxima: &maxima, minima: &minima }, &a.output)?;
    write_sidecar(&a.output, "extrema", a, serde_json::json!({ "scales": vol.scales() }))
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightingArg {
    /// Peaks proportional to |value| / max |value|
    Value,
    /// Unit peaks
    Uniform,
}

#[derive(Debug, Args, Serialize)]
pub struct SaliencyArgs {
    #[command(flatten)]
    pub volume: VolumeSourceArgs,
    /// Extrema kept per polarity
    #[arg(long, default_value_t = DEFAULT_EXTREMA_PER_POLARITY)]
    pub k: usize,
    /// Gaussian standard deviation in pixels
    #[arg(long, default_value_t = DEFAULT_SIGMA)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value_t = WeightingArg::Value)]
    pub weighting: WeightingArg,
    /// External saliency map in [0, 1] (PFM or image) to blend with
    #[arg(long)]
    pub external: Option<PathBuf>,
    /// Weight of the torque map in the blend
    #[arg(long, default_value_t = DEFAULT_TORQUE_WEIGHT)]
    pub weight: f64,
    /// Output PFM
    #[arg(short, long)]
    pub output: PathBuf,
    /// Also write an 8-bit PGM rendering
    #[arg(long)]
    pub preview: Option<PathBuf>,
}

pub fn cmd_saliency(a: &SaliencyArgs) -> CliResult<()> {
    if a.k == 0 {
        return Err(CliError::Invalid("--k must be at least 1".into()));
    }
    if !(a.sigma > 0.0 && a.sigma.is_finite()) {
        return Err(CliError::Invalid(format!("sigma {} must be positive", a.sigma)));
    }
    check_unit("weight", a.weight)?;
    let (vol, _) = a.volume.load()?;
    let (maxima, minima) = find_extrema(&vol, a.k)?;
    let extrema: Vec<TorqueExtremum> = maxima.into_iter().chain(minima).collect();
    let weighting = match a.weighting {
        WeightingArg::Value => GaussianWeighting::ByValue,
        WeightingArg::Uniform => GaussianWeighting::Uniform,
    };
    let mut sal = saliency_from_extrema(&extrema, a.sigma, vol.dims(), weighting)?;
    if let Some(path) = &a.external {
        sal = blend_saliency(&sal, &load_map(path)?, a.weight)?;
    }
    save_map(&sal.map, &a.output)?;
    save_preview(&sal.map, a.preview.as_deref())?;
    write_sidecar(&a.output, "saliency", a, serde_json::json!({ "extrema": extrema.len() }))
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Logistic,
    Linear,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContributionArg {
    /// Strongest extremal patches, signed by polarity
    Extrema,
    /// Every patch of every scale, signed by its own torque
    All,
}

#[derive(Debug, Args, Serialize)]
pub struct StrengthenArgs {
    /// Input image, PNG or binary PGM
    #[arg(short, long)]
    pub input: PathBuf,
    /// External boundary strength map d_o in [0, 1] (PFM or image); edges
    /// are then imported from it with --threshold
    #[arg(long)]
    pub boundary: Option<PathBuf>,
    /// Edge threshold
    #[arg(long, default_value_t = DEFAULT_EDGE_THRESHOLD)]
    pub threshold: f64,
    /// Block-mean downsampling factor applied to the input image
    #[arg(long, default_value_t = 1)]
    pub downsample: usize,
    #[command(flatten)]
    pub scales: ScaleArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Logistic)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_C0, allow_negative_numbers = true)]
    pub c0: f64,
    #[arg(long, default_value_t = DEFAULT_C1, allow_negative_numbers = true)]
    pub c1: f64,
    #[arg(long, default_value_t = DEFAULT_C2, allow_negative_numbers = true)]
    pub c2: f64,
    /// Weight of the contribution term in linear mode
    #[arg(long, default_value_t = DEFAULT_BLEND)]
    pub blend: f64,
    /// Extremal patches used for the contribution map
    #[arg(long, default_value_t = DEFAULT_CONTRIBUTION_EXTREMA)]
    pub num_extrema: usize,
    #[arg(long, value_enum, default_value_t = ContributionArg::Extrema)]
    pub contribution: ContributionArg,
    /// Output PFM
    #[arg(short, long)]
    pub output: PathBuf,
    /// Also write an 8-bit PGM rendering
    #[arg(long)]
    pub preview: Option<PathBuf>,
}

pub fn cmd_strengthen(a: &StrengthenArgs) -> CliResult<()> {
    check_threshold(a.threshold)?;
    check_alpha(a.scales.alpha)?;
    let cfg = StrengthenConfig {
        mode: match a.mode {
            ModeArg::Logistic => StrengthenMode::Logistic,
            ModeArg::Linear => StrengthenMode::Linear,
        },
        c0: a.c0,
        c1: a.c1,
        c2: a.c2,
        blend: a.blend,
        num_extrema: a.num_extrema,
        contribution: match a.contribution {
            ContributionArg::Extrema => ContributionMode::Extrema,
            ContributionArg::All => ContributionMode::AllPatches,
        },
    };
    cfg.validate()?;
    if a.downsample == 0 {
        return Err(CliError::Invalid("--downsample must be at least 1".into()));
    }
    let img = load_gray(&a.input, a.downsample)?;
    let grad = gradient(&img)?;
    let (edges, d_o) = match &a.boundary {
        Some(path) => {
            let d_o = load_map(path)?;
            let (lo, hi) = d_o.min_max();
            if lo < 0.0 || hi > 1.0 {
                return Err(CliError::Invalid(format!("boundary map spans [{lo}, {hi}], not [0, 1]")));
            }
            (import_edges(&d_o, &grad, a.threshold)?, d_o)
        }
        None => (detect_edges(&grad, a.threshold)?, edge_strength(&grad)),
    };
    let scales = a.scales.resolve(edges.dims())?;
    let vol = torque_volume(&edges, &scales, a.scales.alpha)?;
    let out = strengthened_edges(&edges, &d_o, &vol, &cfg)?;
    save_map(&out, &a.output)?;
    save_preview(&out, a.preview.as_deref())?;
    write_sidecar(&a.output, "strengthen", a, serde_json::json!({ "scales": scales }))
}

#[derive(Debug, Args, Serialize)]
pub struct GradTorqueArgs {
    /// Input image, PNG or binary PGM
    #[arg(short, long)]
    pub input: PathBuf,
    /// Disk center x
    #[arg(long)]
    pub cx: f64,
    /// Disk center y
    #[arg(long)]
    pub cy: f64,
    /// Disk radius in pixels
    #[arg(long)]
    pub radius: f64,
    /// Also write the JSON result to this file
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct GradTorqueReport {
    pub direct: f64,
    pub intensity: f64,
    pub interior_mean: f64,
    pub boundary_mean: f64,
}

pub fn cmd_gradtorque(a: &GradTorqueArgs) -> CliResult<()> {
    let img = load_gray(&a.input, 1)?;
    let disk = DiskPatch::new(a.cx, a.cy, a.radius);
    disk.validate(&img)?;
    let (interior_mean, boundary_mean) = disk_means(&img, disk);
    let report = GradTorqueReport {
        direct: gradient_torque_direct(&img, disk)?,
        intensity: gradient_torque_intensity(&img, disk)?,
        interior_mean,
        boundary_mean,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(path) = &a.output {
        write_json(&report, path)?;
        write_sidecar(path, "gradtorque", a, ())?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolarityArg {
    Both,
    Max,
    Min,
}

#[derive(Debug, Args, Serialize)]
pub struct DescribeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub scales: ScaleArgs,
    /// Extrema kept per polarity when detecting patches
    #[arg(long, default_value_t = DEFAULT_EXTREMA_PER_POLARITY)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = PolarityArg::Both)]
    pub polarity: PolarityArg,
    /// Explicit patch `x,y,side` instead of detected extrema; repeatable
    #[arg(long = "patch", value_name = "X,Y,SIDE")]
    pub patches: Vec<String>,
    /// Samples per direction
    #[arg(long, default_value_t = 3)]
    pub n_steps: usize,
    /// Window side multipliers, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    pub scale_factors: Vec<f64>,
    /// Store |torque| instead of signed torque
    #[arg(long)]
    pub magnitude: bool,
    /// Output JSON lines, one descriptor per line
    #[arg(short, long)]
    pub output: PathBuf,
}

fn parse_patch(text: &str) -> CliResult<imgtorque::torque::Patch> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || CliError::Usage(format!("patch `{text}` is not of the form x,y,side"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let x = parts[0].parse().map_err(|_| bad())?;
    let y = parts[1].parse().map_err(|_| bad())?;
    let side = parts[2].parse().map_err(|_| bad())?;
    Ok(imgtorque::torque::Patch::new(x, y, side)?)
}

pub fn cmd_describe(a: &DescribeArgs) -> CliResult<()> {
    let cfg = MstConfig {
        n_steps: a.n_steps,
        scale_factors: a.scale_factors.clone(),
        alpha: a.scales.alpha,
        magnitude: a.magnitude,
    };
    cfg.validate()?;
    if a.k == 0 {
        return Err(CliError::Invalid("--k must be at least 1".into()));
    }
    let explicit = a.patches.iter().map(|p| parse_patch(p)).collect::<CliResult<Vec<_>>>()?;
    let edges = a.source.load_edges()?;
    let patches = if explicit.is_empty() {
        let scales = a.scales.resolve(edges.dims())?;
        let vol = torque_volume(&edges, &scales, a.scales.alpha)?;
        let (maxima, minima) = find_extrema(&vol, a.k)?;
        let all: Vec<TorqueExtremum> = maxima.into_iter().chain(minima).collect();
        let filter = match a.polarity {
            PolarityArg::Both => None,
            PolarityArg::Max => Some(Polarity::Maximum),
            PolarityArg::Min => Some(Polarity::Minimum),
        };
        mtp_patches(&all, filter)
    } else {
        explicit
    };
    let pre = TorquePrecompute::build(&edges);
    let mut out = Vec::new();
    for patch in &patches {
        let d = mst_descriptor(&pre, &edges, *patch, &cfg)?;
        serde_json::to_writer(&mut out, &d)?;
        out.push(b'\n');
    }
    fs::File::create(&a.output)
        .and_then(|mut f| f.write_all(&out))
        .map_err(|e| CliError::Io(format!("{}: {e}", a.output.display())))?;
    write_sidecar(&a.output, "describe", a, serde_json::json!({ "descriptors": patches.len() }))
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    /// Predicted map in [0, 1] (PFM or image)
    #[arg(long)]
    pub pred: PathBuf,
    /// Ground truth (PFM or image), binarized at 0.5
    #[arg(long)]
    pub truth: PathBuf,
    /// Number of equally spaced thresholds in [0, 1]
    #[arg(long, default_value_t = 101)]
    pub thresholds: usize,
    /// Output CSV with columns threshold,precision,recall,f
    #[arg(short, long)]
    pub output: PathBuf,
}

pub fn cmd_eval(a: &EvalArgs) -> CliResult<()> {
    let thresholds = equally_spaced_thresholds(a.thresholds)?;
    let pred = load_map(&a.pred)?;
    pred.check_finite()?;
    let truth = BinaryMask::from_threshold(&load_map(&a.truth)?, GROUND_TRUTH_THRESHOLD);
    let curve = pr_curve(&pred, &truth, &thresholds)?;
    fs::write(&a.output, curve_to_csv(&curve))
        .map_err(|e| CliError::Io(format!("{}: {e}", a.output.display())))?;
    let best = max_f(&curve);
    println!("{}", serde_json::json!({ "max_f": best }));
    write_sidecar(&a.output, "eval", a, serde_json::json!({ "max_f": best }))
}

#[derive(Debug, Args, Serialize)]
pub struct RenderArgs {
    /// Signed map (PFM)
    #[arg(long)]
    pub map: PathBuf,
    /// Output PNG
    #[arg(short, long)]
    pub output: PathBuf,
}

pub fn cmd_render(a: &RenderArgs) -> CliResult<()> {
    let map = load_map(&a.map)?;
    save_rendering(&render_signed(&map)?, &a.output)?;
    write_sidecar(&a.output, "render", a, ())
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 512)]
    pub width: usize,
    #[arg(long, default_value_t = 512)]
    pub height: usize,
    /// Patch sides to time, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [5, 81])]
    pub sizes: Vec<usize>,
    /// Runs per side; the median is reported
    #[arg(long, default_value_t = 9)]
    pub repeats: usize,
    /// Fraction of pixels carrying an edge
    #[arg(long, default_value_t = 0.1)]
    pub density: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Pixels timed with direct summation per side; 0 skips the contrast
    #[arg(long, default_value_t = 2000)]
    pub naive_samples: usize,
    /// Largest allowed ratio between per-pixel times across sides
    #[arg(long, default_value_t = DEFAULT_MAX_RATIO)]
    pub max_ratio: f64,
    /// Also write the JSON report to this file
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn cmd_bench(a: &BenchArgs) -> CliResult<()> {
    check_alpha(a.alpha)?;
    let cfg = BenchConfig {
        width: a.width,
        height: a.height,
        sizes: a.sizes.clone(),
        repeats: a.repeats,
        density: a.density,
        seed: a.seed,
        alpha: a.alpha,
        naive_samples: a.naive_samples,
        max_ratio: a.max_ratio,
    };
    let report = run_bench(&cfg)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(path) = &a.output {
        write_json(&report, path)?;
        write_sidecar(path, "bench", a, ())?;
    }
    if !report.passed {
        return Err(CliError::Invalid(format!(
            "per-pixel time ratio {:.3} exceeds {}",
            report.ratio, report.max_ratio
        )));
    }
    Ok(())
}
