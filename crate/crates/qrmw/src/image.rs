//! Classical image storage and file I/O.
//!
//! Values are kept in a dense array in channel-major order: all rows of
//! channel 0, then channel 1, and so on, each row listing its columns left
//! to right. The same order defines the planar text format.

use crate::error::{Error, Result};
use crate::geometry::{ImageGeometry, PixelAddress};

/// Magic token opening the planar text format.
pub const TEXT_MAGIC: &str = "QRMWv1";

/// A dense map `(lambda, y, x) -> color code` with `lambda < cn`.
///
/// Images are immutable values; [`ClassicalImage::set`] returns a new image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalImage {
    geometry: ImageGeometry,
    values: Vec<u64>,
}

impl ClassicalImage {
    /// All-zero image of the given geometry.
    pub fn new(geometry: ImageGeometry) -> Result<Self> {
        if geometry.address_bits() > 32 {
            return Err(Error::InvalidParameter(
                "image exceeds the 2^32-value storage limit".into(),
            ));
        }
        Ok(ClassicalImage {
            geometry,
            values: vec![0; geometry.value_count()],
        })
    }

    /// Builds an image from values listed in channel-major order.
    pub fn from_values(geometry: ImageGeometry, values: Vec<u64>) -> Result<Self> {
        if geometry.address_bits() > 32 {
            return Err(Error::InvalidParameter(
                "image exceeds the 2^32-value storage limit".into(),
            ));
        }
        if values.len() != geometry.value_count() {
            return Err(Error::CountMismatch {
                expected: geometry.value_count(),
                found: values.len(),
            });
        }
        for &v in &values {
            geometry.check_color(v)?;
        }
        Ok(ClassicalImage { geometry, values })
    }

    pub fn geometry(&self) -> &ImageGeometry {
        &self.geometry
    }

    /// Stored values in channel-major order.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Color code at `addr`; `addr.lambda` must name a real channel.
    pub fn get(&self, addr: PixelAddress) -> Result<u64> {
        Ok(self.values[self.geometry.value_index(addr)?])
    }

    /// Returns a copy of the image differing only at `addr`.
    pub fn set(&self, addr: PixelAddress, value: u64) -> Result<Self> {
        let idx = self.geometry.value_index(addr)?;
        self.geometry.check_color(value)?;
        let mut out = self.clone();
        out.values[idx] = value;
        Ok(out)
    }

    /// Iterates `(address, value)` over all real-channel cells.
    pub fn cells(&self) -> impl Iterator<Item = (PixelAddress, u64)> + '_ {
        let g = self.geometry;
        self.values.iter().enumerate().map(move |(i, &v)| {
            let i = i as u64;
            let addr = PixelAddress {
                lambda: i >> (g.row_bits() + g.col_bits()),
                y: (i >> g.col_bits()) & (g.rows() - 1),
                x: i & (g.cols() - 1),
            };
            (addr, v)
        })
    }

    /// Serializes to the planar text format.
    ///
    /// Line 1 is `QRMWv1 <q> <cn> <n> <m>`; each following line holds one
    /// row of one channel as decimal values. Output is byte-deterministic.
    pub fn to_text(&self) -> Vec<u8> {
        let g = &self.geometry;
        let mut out = format!(
            "{TEXT_MAGIC} {} {} {} {}\n",
            g.color_bits(),
            g.channel_count(),
            g.row_bits(),
            g.col_bits()
        );
        let cols = g.cols() as usize;
        for row in self.values.chunks(cols) {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(' ');
                }
                out.push_str(&v.to_string());
                first = false;
            }
            out.push('\n');
        }
        out.into_bytes()
    }

    /// Parses the planar text format; inverse of [`ClassicalImage::to_text`].
    pub fn from_text(bytes: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(bytes).map_err(|_| Error::Parse {
            line: 1,
            message: "input is not valid UTF-8".into(),
        })?;
        let mut lines = text.lines();
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header line".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 || fields[0] != TEXT_MAGIC {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected `{TEXT_MAGIC} <q> <cn> <n> <m>`"),
            });
        }
        let parse_field = |s: &str, name: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Parse {
                line: 1,
                message: format!("invalid {name}: `{s}`"),
            })
        };
        let q = parse_field(fields[1], "q")? as u32;
        let cn = parse_field(fields[2], "cn")?;
        let n = parse_field(fields[3], "n")? as u32;
        let m = parse_field(fields[4], "m")? as u32;
        let geometry = ImageGeometry::new(q, cn, n, m)?;

        let mut values = Vec::with_capacity(geometry.value_count());
        for (lineno, line) in lines.enumerate() {
            for tok in line.split_whitespace() {
                let v: u64 = tok.parse().map_err(|_| Error::Parse {
                    line: lineno + 2,
                    message: format!("invalid value: `{tok}`"),
                })?;
                values.push(v);
            }
        }
        Self::from_values(geometry, values)
    }

    /// Imports a P3/P6 PPM as a three-channel image (R, G, B map to
    /// channels 0, 1, 2). Dimensions must be powers of two and the maxval
    /// must be `2^q - 1` for some `q`.
    pub fn from_ppm(bytes: &[u8]) -> Result<Self> {
        ppm::import(bytes)
    }
}

mod ppm {
    use super::*;

    struct Header {
        binary: bool,
        width: u64,
        height: u64,
        maxval: u64,
        body_start: usize,
    }

    /// Reads the four header tokens, skipping `#` comments.
    fn parse_header(bytes: &[u8]) -> Result<Header> {
        let mut pos = 0;
        let mut tokens: Vec<String> = Vec::new();
        while tokens.len() < 4 && pos < bytes.len() {
            match bytes[pos] {
                b'#' => {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => pos += 1,
                _ => {
                    let start = pos;
                    while pos < bytes.len()
                        && !bytes[pos].is_ascii_whitespace()
                        && bytes[pos] != b'#'
                    {
                        pos += 1;
                    }
                    tokens.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
                }
            }
        }
        if tokens.len() < 4 {
            return Err(Error::Ppm("truncated header".into()));
        }
        let binary = match tokens[0].as_str() {
            "P3" => false,
            "P6" => true,
            other => return Err(Error::Ppm(format!("unsupported magic `{other}`"))),
        };
        let num = |s: &String, name: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| Error::Ppm(format!("invalid {name}: `{s}`")))
        };
        let width = num(&tokens[1], "width")?;
        let height = num(&tokens[2], "height")?;
        let maxval = num(&tokens[3], "maxval")?;
        // exactly one whitespace byte separates the maxval from binary data
        if binary {
            if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
                return Err(Error::Ppm("missing separator after maxval".into()));
            }
            pos += 1;
        }
        Ok(Header {
            binary,
            width,
            height,
            maxval,
            body_start: pos,
        })
    }

    pub fn import(bytes: &[u8]) -> Result<ClassicalImage> {
        let h = parse_header(bytes)?;
        if h.width == 0
            || !h.width.is_power_of_two()
            || h.height == 0
            || !h.height.is_power_of_two()
        {
            return Err(Error::Ppm(format!(
                "dimensions {}x{} are not powers of two",
                h.width, h.height
            )));
        }
        if h.maxval == 0 || !(h.maxval + 1).is_power_of_two() || h.maxval >= 1 << 16 {
            return Err(Error::Ppm(format!(
                "maxval {} is not 2^q - 1 for a supported q",
                h.maxval
            )));
        }
        let q = (h.maxval + 1).trailing_zeros();
        let n = h.height.trailing_zeros();
        let m = h.width.trailing_zeros();
        let geometry = ImageGeometry::new(q, 3, n, m)?;

        let sample_count = (3 * h.width * h.height) as usize;
        let mut samples = Vec::with_capacity(sample_count);
        if h.binary {
            let body = &bytes[h.body_start..];
            let bytes_per = if h.maxval > 255 { 2 } else { 1 };
            if body.len() < sample_count * bytes_per {
                return Err(Error::Ppm("truncated pixel data".into()));
            }
            for i in 0..sample_count {
                let v = if bytes_per == 2 {
                    // two-byte samples are big-endian
                    (body[2 * i] as u64) << 8 | body[2 * i + 1] as u64
                } else {
                    body[i] as u64
                };
                samples.push(v);
            }
        } else {
            let text = std::str::from_utf8(&bytes[h.body_start..])
                .map_err(|_| Error::Ppm("non-ASCII pixel data".into()))?;
            for tok in text.split_whitespace() {
                let tok = tok.split('#').next().unwrap_or("");
                if tok.is_empty() {
                    continue;
                }
                let v: u64 = tok
                    .parse()
                    .map_err(|_| Error::Ppm(format!("invalid sample `{tok}`")))?;
                samples.push(v);
                if samples.len() == sample_count {
                    break;
                }
            }
            if samples.len() < sample_count {
                return Err(Error::Ppm("truncated pixel data".into()));
            }
        }
        for &s in &samples {
            if s > h.maxval {
                return Err(Error::Ppm(format!(
                    "sample {s} exceeds maxval {}",
                    h.maxval
                )));
            }
        }

        // interleaved RGB rows -> channel-major planes
        let mut image = ClassicalImage::new(geometry)?;
        for y in 0..h.height {
            for x in 0..h.width {
                for lambda in 0..3 {
                    let sample = samples[(3 * (y * h.width + x) + lambda) as usize];
                    let idx = geometry
                        .value_index(PixelAddress::new(lambda, y, x))
                        .expect("in-range by construction");
                    image.values[idx] = sample;
                }
            }
        }
        Ok(image)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use proptest::prelude::*;

    #[test]
    fn get_reads_the_demo_groups() {
        let img = samples::column_stripes();
        assert_eq!(img.get(PixelAddress::new(0, 3, 0)).unwrap(), 255);
        assert_eq!(img.get(PixelAddress::new(2, 5, 2)).unwrap(), 255);
        // complement of the group listing
        assert_eq!(img.get(PixelAddress::new(0, 0, 1)).unwrap(), 0);
    }

    #[test]
    fn set_changes_exactly_one_cell() {
        let img = samples::column_stripes();
        let addr = PixelAddress::new(1, 6, 0);
        let out = img.set(addr, 17).unwrap();
        assert_eq!(out.get(addr).unwrap(), 17);
        let changed = img
            .values()
            .iter()
            .zip(out.values())
            .filter(|(a, b)| a != b)
            .count();
        assert_eq!(changed, 1);
    }

    #[test]
    fn set_rejects_out_of_range() {
        let img = samples::column_stripes();
        assert!(img.set(PixelAddress::new(4, 0, 0), 1).is_err());
        assert!(img.set(PixelAddress::new(0, 8, 0), 1).is_err());
        assert_eq!(
            img.set(PixelAddress::new(0, 0, 0), 256),
            Err(Error::ColorOutOfRange {
                value: 256,
                max: 255
            })
        );
    }

    #[test]
    fn text_round_trip_on_demo_image() {
        let img = samples::column_stripes();
        let text = img.to_text();
        assert!(text.starts_with(b"QRMWv1 8 4 3 2\n"));
        assert_eq!(ClassicalImage::from_text(&text).unwrap(), img);
    }

    #[test]
    fn text_parses_demo_geometry_token_count() {
        // 4 channels * 8 rows * 4 cols = 128 values
        let mut text = String::from("QRMWv1 8 4 3 2\n");
        for i in 0..128 {
            text.push_str(&format!("{} ", i % 256));
        }
        let img = ClassicalImage::from_text(text.as_bytes()).unwrap();
        assert_eq!(img.values().len(), 128);
    }

    #[test]
    fn text_count_mismatch() {
        let mut text = String::from("QRMWv1 8 3 2 2\n");
        for _ in 0..100 {
            text.push_str("0 ");
        }
        assert_eq!(
            ClassicalImage::from_text(text.as_bytes()),
            Err(Error::CountMismatch {
                expected: 48,
                found: 100
            })
        );
    }

    #[test]
    fn text_malformed_header() {
        assert!(ClassicalImage::from_text(b"QRMWv2 8 4 3 2\n0").is_err());
        assert!(ClassicalImage::from_text(b"QRMWv1 8 4 3\n0").is_err());
        assert!(ClassicalImage::from_text(b"").is_err());
    }

    #[test]
    fn text_rejects_oversized_value() {
        let text = "QRMWv1 1 1 0 0\n2\n";
        assert_eq!(
            ClassicalImage::from_text(text.as_bytes()),
            Err(Error::ColorOutOfRange { value: 2, max: 1 })
        );
    }

    #[test]
    fn ppm_p3_import() {
        let ppm = b"P3\n# demo\n4 4\n255\n".to_vec();
        let mut body = String::new();
        for i in 0..48 {
            body.push_str(&format!("{} ", (i * 5) % 256));
        }
        let mut bytes = ppm;
        bytes.extend_from_slice(body.as_bytes());
        let img = ClassicalImage::from_ppm(&bytes).unwrap();
        let g = img.geometry();
        assert_eq!(
            (
                g.color_bits(),
                g.channel_count(),
                g.channel_bits(),
                g.row_bits(),
                g.col_bits()
            ),
            (8, 3, 2, 2, 2)
        );
        // R channel of pixel (0, 1) is sample index 3*1 = 3
        assert_eq!(img.get(PixelAddress::new(0, 0, 1)).unwrap(), 15);
    }

    #[test]
    fn ppm_rejects_non_power_of_two() {
        let bytes = b"P3\n5 4\n255\n0";
        assert!(matches!(
            ClassicalImage::from_ppm(bytes),
            Err(Error::Ppm(_))
        ));
    }

    #[test]
    fn ppm_rejects_bad_maxval() {
        let bytes = b"P3\n4 4\n200\n0";
        assert!(matches!(
            ClassicalImage::from_ppm(bytes),
            Err(Error::Ppm(_))
        ));
    }

    #[test]
    fn ppm_all_black() {
        let mut bytes = b"P6\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[0u8; 12]);
        let img = ClassicalImage::from_ppm(&bytes).unwrap();
        assert!(img.values().iter().all(|&v| v == 0));
    }

    #[test]
    fn ppm_truncated_payload() {
        let mut bytes = b"P6\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[0u8; 11]);
        assert!(matches!(
            ClassicalImage::from_ppm(&bytes),
            Err(Error::Ppm(_))
        ));
    }

    #[test]
    fn ppm_two_byte_samples() {
        let mut bytes = b"P6\n1 1\n65535\n".to_vec();
        bytes.extend_from_slice(&[0x01, 0x02, 0x00, 0x00, 0xff, 0xff]);
        let img = ClassicalImage::from_ppm(&bytes).unwrap();
        assert_eq!(img.geometry().color_bits(), 16);
        assert_eq!(img.get(PixelAddress::new(0, 0, 0)).unwrap(), 0x0102);
        assert_eq!(img.get(PixelAddress::new(2, 0, 0)).unwrap(), 65535);
    }

    prop_compose! {
        fn arb_image()(q in 1u32..=8, cn in 1u64..=4, n in 0u32..=2, m in 0u32..=2)
                     (values in prop::collection::vec(0u64..256, {
                          let g = ImageGeometry::new(q, cn, n, m).unwrap();
                          g.value_count()..=g.value_count()
                      }),
                      q in Just(q), cn in Just(cn), n in Just(n), m in Just(m))
                     -> ClassicalImage {
            let g = ImageGeometry::new(q, cn, n, m).unwrap();
            let max = g.max_color();
            let values = values.into_iter().map(|v| v & max).collect();
            ClassicalImage::from_values(g, values).unwrap()
        }
    }

    proptest! {
        #[test]
        fn parse_emit_identity(img in arb_image()) {
            let round = ClassicalImage::from_text(&img.to_text()).unwrap();
            prop_assert_eq!(round, img);
        }

        #[test]
        fn set_then_get(img in arb_image(), sel in 0usize..64, value in 0u64..256) {
            let g = *img.geometry();
            let idx = sel % g.value_count();
            let addr = PixelAddress {
                lambda: (idx as u64) >> (g.row_bits() + g.col_bits()),
                y: ((idx as u64) >> g.col_bits()) & (g.rows() - 1),
                x: (idx as u64) & (g.cols() - 1),
            };
            let value = value & g.max_color();
            let out = img.set(addr, value).unwrap();
            prop_assert_eq!(out.get(addr).unwrap(), value);
            for (i, (a, b)) in img.values().iter().zip(out.values()).enumerate() {
                if i != idx {
                    prop_assert_eq!(a, b);
                }
            }
        }
    }
}
