//! The image torque operator.
//!
//! Torque measures how strongly the oriented edges inside a patch wind around
//! the patch center. Closed contours around the center produce large
//! magnitudes, random texture edges cancel out. This crate provides:
//!
//! - [`raster`]: grayscale images, float maps and their file formats (PNG, PGM, PFM).
//! - [`edgemap`]: Sobel gradients, thinned edges and 8-bin orientation quantization.
//! - [`torque`]: per-point and per-patch torque, the summed-area-table fast path,
//!   multi-scale torque volumes and their value/scale map reduction.
//! - [`extrema`]: space-scale extrema of the torque volume (MTP patches).
//! - [`apps`]: saliency maps, edge contribution and strengthening, precision/recall.
//! - [`gradtorque`]: gradient torque on disk patches in two equivalent forms.
//! - [`mst`]: the multiscale torque patch descriptor.
//! - [`synth`]: synthetic test images (shapes, textures, rotations).

pub mod apps;
pub mod edgemap;
mod error;
pub mod extrema;
pub mod gradtorque;
pub mod mst;
pub mod raster;
pub mod synth;
pub mod torque;

pub use error::{Error, Result};
