//! Binary PGM (P5, 8-bit).

use std::fs;
use std::path::Path;

use crate::{Error, Result};

/// Raw 8-bit PGM contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub samples: Vec<u8>,
}

pub fn encode_pgm(width: usize, height: usize, samples: &[u8]) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(samples);
    out
}

pub fn save_pgm(width: usize, height: usize, samples: &[u8], path: impl AsRef<Path>) -> Result<()> {
    if samples.len() != width * height {
        return Err(Error::invalid("sample count does not match PGM dimensions"));
    }
    fs::write(path, encode_pgm(width, height, samples))?;
    Ok(())
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<Pgm> {
    decode_pgm(&fs::read(path)?)
}

pub fn decode_pgm(bytes: &[u8]) -> Result<Pgm> {
    if !bytes.starts_with(b"P5") {
        return Err(Error::UnsupportedFormat("not a binary PGM (P5)".into()));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        *field = next_header_int(bytes, &mut pos)?;
    }
    let [width, height, maxval] = fields;
    // exactly one whitespace byte separates the header from the raster
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::malformed("PGM", "missing raster separator"));
    }
    pos += 1;
    if width == 0 || height == 0 {
        return Err(Error::invalid("zero-sized image"));
    }
    if maxval == 0 || maxval > 255 {
        return Err(Error::UnsupportedFormat(format!(
            "PGM maxval {maxval} (only 8-bit PGM is supported)"
        )));
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| Error::malformed("PGM", "dimensions overflow"))?;
    let raster = &bytes[pos..];
    if raster.len() < n {
        return Err(Error::malformed(
            "PGM",
            format!("expected {n} raster bytes, found {}", raster.len()),
        ));
    }
    let samples = if maxval == 255 {
        raster[..n].to_vec()
    } else {
        raster[..n]
            .iter()
            .map(|&v| ((v.min(maxval as u8) as u32 * 255 + maxval as u32 / 2) / maxval as u32) as u8)
            .collect()
    };
    Ok(Pgm {
        width,
        height,
        maxval: maxval as u16,
        samples,
    })
}

fn next_header_int(bytes: &[u8], pos: &mut usize) -> Result<usize> {
    loop {
        match bytes.get(*pos) {
            Some(b'#') => {
                while let Some(&b) = bytes.get(*pos) {
                    *pos += 1;
                    if b == b'\n' {
                        break;
                    }
                }
            }
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            Some(_) => break,
            None => return Err(Error::malformed("PGM", "truncated header")),
        }
    }
    let start = *pos;
    while bytes.get(*pos).is_some_and(|b| b.is_ascii_digit()) {
        *pos += 1;
    }
    std::str::from_utf8(&bytes[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::malformed("PGM", "expected an integer header field"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_with_comments() {
        let mut bytes = b"P5\n# made by hand\n3 # width\n1\n255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3]);
        let pgm = decode_pgm(&bytes).unwrap();
        assert_eq!((pgm.width, pgm.height), (3, 1));
        assert_eq!(pgm.samples, vec![1, 2, 3]);
    }

    #[test]
    fn truncated_raster_is_rejected() {
        let mut bytes = encode_pgm(4, 4, &[0; 16]);
        bytes.truncate(bytes.len() - 1);
        assert!(matches!(decode_pgm(&bytes), Err(Error::Malformed { .. })));
    }

    #[test]
    fn sixteen_bit_is_unsupported() {
        let bytes = b"P5 1 1 65535\n\0\0";
        assert!(matches!(decode_pgm(bytes), Err(Error::UnsupportedFormat(_))));
    }

    #[test]
    fn rescales_small_maxval() {
        let bytes = b"P5 2 1 8\n\x00\x08";
        assert_eq!(decode_pgm(bytes).unwrap().samples, vec![0, 255]);
    }
}
