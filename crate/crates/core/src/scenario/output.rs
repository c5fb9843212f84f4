//! Image and table writers.
//!
//! Images are 8-bit grayscale, row 0 at `+y` and column 0 at `−x`, i.e. the
//! transverse plane as a camera facing the source records it.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{invalid_parameter, Error, Result};

/// `round(255 · P / P_max)` per pixel; all zeros when `P_max = 0`.
pub fn quantize(values: &[f64], p_max: f64) -> Vec<u8> {
    if p_max <= 0.0 {
        return vec![0; values.len()];
    }
    values
        .iter()
        .map(|&p| (255.0 * p / p_max).round().clamp(0.0, 255.0) as u8)
        .collect()
}

/// Reorders a grid stored bottom row first (`values[iy * n + ix]`, `y`
/// ascending) into image order, top row first.
pub fn grid_to_image<T: Copy>(values: &[T], n: usize) -> Vec<T> {
    values.chunks(n).rev().flatten().copied().collect()
}

/// Grayscale image in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(invalid_parameter(format!(
                "{} pixels do not fill a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn from_pgm(bytes: &[u8]) -> Result<Self> {
        let bad = || Error::InvalidState("malformed PGM data".into());
        let mut fields = Vec::new();
        let mut pos = 0;
        while fields.len() < 4 {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(bad());
            }
            fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad())?);
        }
        if fields[0] != "P5" || fields[3] != "255" {
            return Err(bad());
        }
        let width: usize = fields[1].parse().map_err(|_| bad())?;
        let height: usize = fields[2].parse().map_err(|_| bad())?;
        let data = bytes.get(pos + 1..).ok_or_else(bad)?;
        if data.len() != width * height {
            return Err(bad());
        }
        Self::new(width, height, data.to_vec())
    }

    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_pgm())?;
        Ok(())
    }

    pub fn write_png(&self, path: &Path) -> Result<()> {
        let file = BufWriter::new(File::create(path)?);
        let mut encoder = png::Encoder::new(file, self.width as u32, self.height as u32);
        encoder.set_color(png::ColorType::Grayscale);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder
            .write_header()
            .map_err(|e| Error::InvalidState(format!("PNG encoding failed: {e}")))?;
        writer
            .write_image_data(&self.pixels)
            .map_err(|e| Error::InvalidState(format!("PNG encoding failed: {e}")))?;
        writer
            .finish()
            .map_err(|e| Error::InvalidState(format!("PNG encoding failed: {e}")))?;
        Ok(())
    }
}

/// Writes a header row and comma-separated rows, floats in shortest
/// round-trip form.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidState("empty CSV file".into()))?
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .map(|line| {
            line.split(',')
                .map(|c| c.parse::<f64>().map_err(|_| Error::InvalidState(format!("bad CSV cell {c:?}"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantization() {
        assert_eq!(quantize(&[0.0, 0.5, 1.0, 0.001], 1.0), vec![0, 128, 255, 0]);
        assert_eq!(quantize(&[0.0, 0.0], 0.0), vec![0, 0]);
    }

    #[test]
    fn image_orientation() {
        // bottom row (y < 0) first in the grid, last in the image
        assert_eq!(grid_to_image(&[1, 2, 3, 4], 2), vec![3, 4, 1, 2]);
    }

    #[test]
    fn pgm_roundtrip() {
        let img = GrayImage::new(3, 2, vec![0, 1, 2, 3, 4, 255]).unwrap();
        let bytes = img.to_pgm();
        assert!(bytes.starts_with(b"P5\n3 2\n255\n"));
        assert_eq!(GrayImage::from_pgm(&bytes).unwrap(), img);
        assert!(GrayImage::new(2, 2, vec![0; 3]).is_err());
        assert!(GrayImage::from_pgm(b"P2\n1 1\n255\n0").is_err());
    }

    #[test]
    fn png_and_csv_files() {
        let dir = tempfile::tempdir().unwrap();
        let img = GrayImage::new(2, 2, vec![0, 64, 128, 255]).unwrap();
        img.write_png(&dir.path().join("a.png")).unwrap();
        let bytes = std::fs::read(dir.path().join("a.png")).unwrap();
        assert_eq!(&bytes[1..4], b"PNG");

        let path = dir.path().join("t.csv");
        write_csv(&path, &["a", "b"], &[vec![0.1, 1e-300], vec![-2.5, 3.0]]).unwrap();
        let (header, rows) = read_csv(&path).unwrap();
        assert_eq!(header, vec!["a", "b"]);
        assert_eq!(rows, vec![vec![0.1, 1e-300], vec![-2.5, 3.0]]);
    }
}
