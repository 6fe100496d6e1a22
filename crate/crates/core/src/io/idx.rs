use std::path::Path;

use super::{read_file, unit_scale, write_file};
use crate::error::{Error, Result};
use crate::transform::ImageGrid;

/// Magic number of an unsigned-byte, three-dimensional IDX file.
pub const IDX_IMAGE_MAGIC: u32 = 0x0000_0803;

/// An IDX image stack, as stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxDataset {
    pub magic: u32,
    pub count: usize,
    pub rows: usize,
    pub cols: usize,
    pub pixels: Vec<u8>,
}

impl IdxDataset {
    pub fn parse(name: &str, bytes: &[u8]) -> Result<Self> {
        let word = |i: usize| -> Result<u32> {
            bytes
                .get(4 * i..4 * i + 4)
                .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
                .ok_or_else(|| Error::parse(name, bytes.len() as u64, "truncated IDX header"))
        };
        let magic = word(0)?;
        if magic != IDX_IMAGE_MAGIC {
            return Err(Error::parse(
                name,
                0,
                format!("magic {magic:#010x}, expected {IDX_IMAGE_MAGIC:#010x} (ubyte images)"),
            ));
        }
        let (count, rows, cols) = (word(1)? as usize, word(2)? as usize, word(3)? as usize);
        let need = count
            .checked_mul(rows)
            .and_then(|v| v.checked_mul(cols))
            .ok_or_else(|| Error::parse(name, 4, "dimensions overflow"))?;
        let have = bytes.len() - 16;
        if have != need {
            return Err(Error::parse(
                name,
                bytes.len() as u64,
                format!("payload is {have} bytes, expected {need}"),
            ));
        }
        Ok(Self {
            magic,
            count,
            rows,
            cols,
            pixels: bytes[16..].to_vec(),
        })
    }

    /// Image `index` scaled to `[0, 1]`, centred in an even square if needed.
    pub fn image(&self, index: usize) -> Result<ImageGrid> {
        if index >= self.count {
            return Err(Error::Range {
                index,
                count: self.count,
            });
        }
        let per = self.rows * self.cols;
        let data = &self.pixels[index * per..(index + 1) * per];
        let mut side = self.rows.max(self.cols);
        side += side % 2;
        let (r0, c0) = ((side - self.rows) / 2, (side - self.cols) / 2);
        let mut img = ImageGrid::zeros(side);
        for r in 0..self.rows {
            for c in 0..self.cols {
                img.set(
                    r + r0,
                    c + c0,
                    unit_scale(u32::from(data[r * self.cols + c]), 255),
                );
            }
        }
        Ok(img)
    }
}

pub fn read_idx_dataset(path: &Path) -> Result<IdxDataset> {
    let bytes = read_file(path)?;
    IdxDataset::parse(&path.display().to_string(), &bytes)
}

pub fn read_idx(path: &Path, index: usize) -> Result<ImageGrid> {
    read_idx_dataset(path)?.image(index)
}

/// Write same-sized images as an IDX stack, quantised to bytes.
pub fn write_idx(path: &Path, images: &[ImageGrid]) -> Result<()> {
    let l = images.first().map(ImageGrid::size).unwrap_or(0);
    if images.iter().any(|i| i.size() != l) {
        return Err(Error::invalid("images differ in size"));
    }
    let mut out = Vec::with_capacity(16 + images.len() * l * l);
    for w in [IDX_IMAGE_MAGIC, images.len() as u32, l as u32, l as u32] {
        out.extend_from_slice(&w.to_be_bytes());
    }
    for img in images {
        out.extend(
            img.pixels()
                .iter()
                .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8),
        );
    }
    write_file(path, &out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stack(magic: u32, count: u32, side: u32) -> Vec<u8> {
        let mut b = Vec::new();
        for w in [magic, count, side, side] {
            b.extend_from_slice(&w.to_be_bytes());
        }
        b.extend((0..count * side * side).map(|i| (i % 256) as u8));
        b
    }

    #[test]
    fn reads_images() {
        let ds = IdxDataset::parse("t", &stack(2051, 2, 4)).unwrap();
        assert_eq!((ds.count, ds.rows, ds.cols), (2, 4, 4));
        let img = ds.image(1).unwrap();
        assert_eq!(img.get(0, 0), f64::from(16f32 / 255f32));
    }

    #[test]
    fn bad_magic_and_range() {
        assert!(matches!(
            IdxDataset::parse("t", &stack(2049, 1, 4)),
            Err(Error::Parse { .. })
        ));
        let ds = IdxDataset::parse("t", &stack(2051, 3, 4)).unwrap();
        assert!(matches!(
            ds.image(3),
            Err(Error::Range { index: 3, count: 3 })
        ));
    }

    #[test]
    fn short_payload_and_header() {
        let mut b = stack(2051, 2, 4);
        b.pop();
        assert!(IdxDataset::parse("t", &b).is_err());
        assert!(IdxDataset::parse("t", &b[..7]).is_err());
    }
}
