//! Grayscale PFM ("Pf"): little-endian when the scale line is negative,
//! scanlines stored bottom-to-top.

use std::fs;
use std::path::Path;

use super::FloatMap;
use crate::{Error, Result};

pub fn encode_pfm(map: &FloatMap) -> Result<Vec<u8>> {
    map.check_finite()?;
    let (w, h) = map.dims();
    let mut out = format!("Pf\n{w} {h}\n-1.0\n").into_bytes();
    out.reserve(w * h * 4);
    for y in (0..h).rev() {
        for &v in &map.data()[y * w..(y + 1) * w] {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    Ok(out)
}

pub fn decode_pfm(bytes: &[u8]) -> Result<FloatMap> {
    let mut lines = Vec::with_capacity(3);
    let mut pos = 0;
    while lines.len() < 3 {
        let end = bytes[pos..]
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::malformed("PFM", "truncated header"))?;
        let line = std::str::from_utf8(&bytes[pos..pos + end])
            .map_err(|_| Error::malformed("PFM", "non-ASCII header"))?;
        pos += end + 1;
        let line = line.trim();
        if !line.is_empty() {
            lines.push(line.to_string());
        }
    }
    match lines[0].as_str() {
        "Pf" => {}
        "PF" => return Err(Error::UnsupportedFormat("color PFM".into())),
        other => return Err(Error::malformed("PFM", format!("bad magic {other:?}"))),
    }
    let dims: Vec<usize> = lines[1]
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::malformed("PFM", "bad dimension line"))?;
    let &[w, h] = dims.as_slice() else {
        return Err(Error::malformed("PFM", "bad dimension line"));
    };
    let scale: f32 = lines[2]
        .parse()
        .map_err(|_| Error::malformed("PFM", "bad scale line"))?;
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::malformed("PFM", "scale must be nonzero"));
    }
    let little = scale < 0.0;
    let n = w
        .checked_mul(h)
        .ok_or_else(|| Error::malformed("PFM", "dimensions overflow"))?;
    let raster = &bytes[pos..];
    if raster.len() < n * 4 {
        return Err(Error::malformed(
            "PFM",
            format!("expected {} raster bytes, found {}", n * 4, raster.len()),
        ));
    }
    let mut data = vec![0.0f32; n];
    for (i, chunk) in raster[..n * 4].chunks_exact(4).enumerate() {
        let b = [chunk[0], chunk[1], chunk[2], chunk[3]];
        let v = if little {
            f32::from_le_bytes(b)
        } else {
            f32::from_be_bytes(b)
        };
        let (row, col) = (i / w, i % w);
        data[(h - 1 - row) * w + col] = v;
    }
    let map = FloatMap::from_vec(w, h, data)?;
    map.check_finite()?;
    Ok(map)
}

/// Writes a map as PFM. Non-finite samples are rejected.
pub fn save_float_map(map: &FloatMap, path: impl AsRef<Path>) -> Result<()> {
    let bytes = encode_pfm(map)?;
    fs::write(path, bytes)?;
    Ok(())
}

pub fn load_float_map(path: impl AsRef<Path>) -> Result<FloatMap> {
    decode_pfm(&fs::read(path)?)
}
