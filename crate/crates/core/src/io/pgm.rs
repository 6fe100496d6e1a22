use std::path::Path;

use super::{read_file, unit_scale, write_file};
use crate::error::{Error, Result};
use crate::transform::ImageGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmEncoding {
    /// `P2`, decimal text.
    Ascii,
    /// `P5`, raw bytes.
    Binary,
}

/// A decoded PGM with the padding that was applied to it.
#[derive(Debug, Clone, PartialEq)]
pub struct PgmImage {
    pub image: ImageGrid,
    pub width: usize,
    pub height: usize,
    pub maxval: u32,
    /// Offset `(row, col)` of the original inside the padded square.
    pub offset: (usize, usize),
}

impl PgmImage {
    pub fn padded(&self) -> bool {
        self.width != self.image.size() || self.height != self.image.size()
    }
}

struct Cursor<'a> {
    name: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space(&mut self) {
        loop {
            match self.bytes.get(self.pos) {
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(b'#') => {
                    while let Some(&b) = self.bytes.get(self.pos) {
                        self.pos += 1;
                        if b == b'\n' || b == b'\r' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_space();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(
                self.name,
                start as u64,
                format!("expected {what}"),
            ));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(self.name, start as u64, format!("{what} out of range")))
    }
}

/// Decode a `P2` or `P5` greymap. Pixels are scaled to `[0, 1]`; a
/// non-square or odd-sized image is centred in the next even square.
pub fn read_pgm_bytes(name: &str, bytes: &[u8]) -> Result<PgmImage> {
    if bytes.len() < 2 || bytes[0] != b'P' || !matches!(bytes[1], b'2' | b'5') {
        return Err(Error::parse(name, 0, "not a P2 or P5 PGM"));
    }
    let binary = bytes[1] == b'5';
    let mut cur = Cursor {
        name,
        bytes,
        pos: 2,
    };
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval_at = cur.pos as u64;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::parse(name, maxval_at, "zero image dimension"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::parse(
            name,
            maxval_at,
            format!("maxval {maxval} not in 1..=65535"),
        ));
    }
    let count = width
        .checked_mul(height)
        .filter(|&c| c <= 1 << 28)
        .ok_or_else(|| Error::parse(name, 2, "image dimensions too large"))?;

    let mut raw = Vec::with_capacity(count);
    if binary {
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => {
                return Err(Error::parse(
                    name,
                    cur.pos as u64,
                    "expected whitespace after maxval",
                ))
            }
        }
        let wide = maxval > 255;
        let need = count * if wide { 2 } else { 1 };
        let have = bytes.len() - cur.pos;
        if have < need {
            return Err(Error::parse(
                name,
                bytes.len() as u64,
                format!("truncated pixel data: expected {need} bytes, found {have}"),
            ));
        }
        let data = &bytes[cur.pos..cur.pos + need];
        if wide {
            raw.extend(
                data.chunks_exact(2)
                    .map(|c| u32::from(u16::from_be_bytes([c[0], c[1]]))),
            );
        } else {
            raw.extend(data.iter().map(|&b| u32::from(b)));
        }
    } else {
        for i in 0..count {
            let at = cur.pos;
            let v = cur.number("pixel value").map_err(|_| {
                Error::parse(
                    name,
                    at as u64,
                    format!("truncated pixel data: expected {count} values, found {i}"),
                )
            })?;
            raw.push(v);
        }
    }
    if let Some(i) = raw.iter().position(|&v| v > maxval) {
        return Err(Error::parse(
            name,
            cur.pos as u64,
            format!("pixel {i} exceeds maxval"),
        ));
    }

    let mut side = width.max(height);
    side += side % 2;
    let offset = ((side - height) / 2, (side - width) / 2);
    let mut image = ImageGrid::zeros(side);
    for r in 0..height {
        for c in 0..width {
            image.set(
                r + offset.0,
                c + offset.1,
                unit_scale(raw[r * width + c], maxval),
            );
        }
    }
    Ok(PgmImage {
        image,
        width,
        height,
        maxval,
        offset,
    })
}

pub fn read_pgm(path: &Path) -> Result<PgmImage> {
    let bytes = read_file(path)?;
    read_pgm_bytes(&path.display().to_string(), &bytes)
}

/// Write with `maxval = 255`, clamping to `[0, 1]` and rounding.
pub fn write_pgm(path: &Path, image: &ImageGrid, encoding: PgmEncoding) -> Result<()> {
    let l = image.size();
    let q: Vec<u8> = image
        .pixels()
        .iter()
        .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect();
    let mut out = Vec::new();
    match encoding {
        PgmEncoding::Binary => {
            out.extend_from_slice(format!("P5\n{l} {l}\n255\n").as_bytes());
            out.extend_from_slice(&q);
        }
        PgmEncoding::Ascii => {
            out.extend_from_slice(format!("P2\n{l} {l}\n255\n").as_bytes());
            for row in q.chunks(l) {
                let line: Vec<String> = row.iter().map(u8::to_string).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
    }
    write_file(path, &out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_white_binary() {
        let mut bytes = b"P5\n8 8\n255\n".to_vec();
        bytes.extend(std::iter::repeat_n(255u8, 64));
        let img = read_pgm_bytes("t", &bytes).unwrap();
        assert!(img.image.pixels().iter().all(|&v| v == 1.0));
        assert!(!img.padded());
    }

    #[test]
    fn ascii_and_binary_agree() {
        let vals: Vec<u8> = (0..16).map(|i| (i * 17) as u8).collect();
        let mut p5 = b"P5 4 4 255\n".to_vec();
        p5.extend_from_slice(&vals);
        let text: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
        let p2 = format!("P2\n# comment\n4 4\n255\n{}\n", text.join(" "));
        let a = read_pgm_bytes("a", &p5).unwrap();
        let b = read_pgm_bytes("b", p2.as_bytes()).unwrap();
        assert_eq!(a.image, b.image);
    }

    #[test]
    fn truncated_payload_names_lengths() {
        let mut bytes = b"P5\n4 4\n255\n".to_vec();
        bytes.extend_from_slice(&[0u8; 10]);
        let err = read_pgm_bytes("t", &bytes).unwrap_err().to_string();
        assert!(
            err.contains("expected 16 bytes") && err.contains("found 10"),
            "{err}"
        );
    }

    #[test]
    fn odd_rectangle_is_padded_to_even_square() {
        let bytes = b"P2 3 2 10 1 2 3 4 5 6".to_vec();
        let img = read_pgm_bytes("t", &bytes).unwrap();
        assert_eq!(img.image.size(), 4);
        assert!(img.padded());
        assert_eq!(img.offset, (1, 0));
        assert_eq!(img.image.get(1, 0), f64::from(1f32 / 10f32));
        assert_eq!(img.image.get(0, 0), 0.0);
    }

    #[test]
    fn sixteen_bit_samples() {
        let mut bytes = b"P5 2 2 65535\n".to_vec();
        for v in [0u16, 65535, 32768, 1] {
            bytes.extend_from_slice(&v.to_be_bytes());
        }
        let img = read_pgm_bytes("t", &bytes).unwrap();
        assert_eq!(img.image.get(0, 1), 1.0);
    }

    #[test]
    fn garbage_is_a_parse_error() {
        for bad in [
            &b""[..],
            b"P6 1 1 255 x",
            b"P5 a",
            b"P5 2 2 0\n1234",
            b"P2 2 2 9 1 2 3 99",
        ] {
            assert!(matches!(read_pgm_bytes("t", bad), Err(Error::Parse { .. })));
        }
    }
}
