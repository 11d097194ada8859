//! Reader and writer for the NPY binary array format (versions 1.0, 2.0 and 3.0).
//!
//! Only what activation dumps need is supported: 2-D, C-order, little-endian
//! 4- or 8-byte IEEE floats. Everything is widened to `f64` on read; the writer
//! always emits version 1.0 `<f8`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const MAGIC: &[u8] = b"\x93NUMPY";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dtype {
    F4,
    F8,
}

impl Dtype {
    fn width(self) -> usize {
        match self {
            Dtype::F4 => 4,
            Dtype::F8 => 8,
        }
    }
}

#[derive(Debug)]
struct Header {
    dtype: Dtype,
    fortran_order: bool,
    shape: Vec<usize>,
}

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}

/// Parses an in-memory NPY file into a matrix (rows × columns).
pub fn parse(bytes: &[u8]) -> Result<DMatrix<f64>> {
    if !bytes.starts_with(MAGIC) || bytes.len() < 10 {
        return Err(fmt_err("not an NPY file"));
    }
    let major = bytes[6];
    let (header_len, start) = match major {
        1 => (u16::from_le_bytes([bytes[8], bytes[9]]) as usize, 10),
        2 | 3 => {
            if bytes.len() < 12 {
                return Err(fmt_err("truncated NPY preamble"));
            }
            (
                u32::from_le_bytes([bytes[8], bytes[9], bytes[10], bytes[11]]) as usize,
                12,
            )
        }
        v => return Err(fmt_err(format!("unsupported NPY version {v}"))),
    };
    let end = start + header_len;
    if bytes.len() < end {
        return Err(fmt_err("truncated NPY header"));
    }
    let text = std::str::from_utf8(&bytes[start..end])
        .map_err(|_| fmt_err("NPY header is not valid text"))?;
    let header = parse_header(text)?;
    if header.fortran_order {
        return Err(fmt_err("fortran_order arrays are not supported"));
    }
    if header.shape.len() != 2 {
        return Err(Error::NotTwoDimensional {
            ndim: header.shape.len(),
        });
    }
    let (rows, cols) = (header.shape[0], header.shape[1]);
    let width = header.dtype.width();
    let payload = &bytes[end..];
    let expected = rows * cols * width;
    if payload.len() < expected {
        return Err(fmt_err(format!(
            "NPY payload has {} bytes, expected {expected}",
            payload.len()
        )));
    }
    let values: Vec<f64> = match header.dtype {
        Dtype::F8 => payload[..expected]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect(),
        Dtype::F4 => payload[..expected]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
            .collect(),
    };
    Ok(DMatrix::from_row_slice(rows, cols, &values))
}

fn parse_header(text: &str) -> Result<Header> {
    let body = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.trim_end().strip_suffix('}'))
        .ok_or_else(|| fmt_err("NPY header is not a dict literal"))?;

    let mut descr = None;
    let mut fortran = None;
    let mut shape = None;
    for item in split_top_level(body) {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (key, value) = item
            .split_once(':')
            .ok_or_else(|| fmt_err(format!("malformed header entry `{item}`")))?;
        let key = unquote(key.trim()).ok_or_else(|| fmt_err("header key is not a string"))?;
        let value = value.trim();
        match key {
            "descr" => {
                descr = Some(unquote(value).ok_or_else(|| fmt_err("descr is not a string"))?)
            }
            "fortran_order" => {
                fortran = Some(match value {
                    "True" => true,
                    "False" => false,
                    _ => return Err(fmt_err(format!("bad fortran_order `{value}`"))),
                })
            }
            "shape" => shape = Some(parse_shape(value)?),
            _ => {}
        }
    }
    let descr = descr.ok_or_else(|| fmt_err("header missing descr"))?;
    let dtype = match descr {
        "<f8" => Dtype::F8,
        "<f4" => Dtype::F4,
        other => return Err(Error::UnsupportedDtype(other.to_string())),
    };
    Ok(Header {
        dtype,
        fortran_order: fortran.ok_or_else(|| fmt_err("header missing fortran_order"))?,
        shape: shape.ok_or_else(|| fmt_err("header missing shape"))?,
    })
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut quote: Option<char> = None;
    let mut last = 0;
    for (i, c) in s.char_indices() {
        match (quote, c) {
            (Some(q), c) if c == q => quote = None,
            (Some(_), _) => {}
            (None, '\'' | '"') => quote = Some(c),
            (None, '(' | '[') => depth += 1,
            (None, ')' | ']') => depth -= 1,
            (None, ',') if depth == 0 => {
                parts.push(&s[last..i]);
                last = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[last..]);
    parts
}

fn unquote(s: &str) -> Option<&str> {
    let s = s.trim();
    for q in ['\'', '"'] {
        if let Some(inner) = s.strip_prefix(q).and_then(|t| t.strip_suffix(q)) {
            return Some(inner);
        }
    }
    None
}

fn parse_shape(s: &str) -> Result<Vec<usize>> {
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| fmt_err(format!("bad shape `{s}`")))?;
    inner
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.trim_end_matches('L')
                .parse::<usize>()
                .map_err(|_| fmt_err(format!("bad shape entry `{t}`")))
        })
        .collect()
}

/// Serializes `x` as an NPY v1.0 file of little-endian `f64`, C order.
pub fn write(x: &DMatrix<f64>) -> Vec<u8> {
    let dict = format!(
        "{{'descr': '<f8', 'fortran_order': False, 'shape': ({}, {}), }}",
        x.nrows(),
        x.ncols()
    );
    // magic + version + u16 length + dict + padding + '\n' must be a multiple of 64.
    let unpadded = MAGIC.len() + 2 + 2 + dict.len() + 1;
    let pad = (64 - unpadded % 64) % 64;
    let header_len = dict.len() + pad + 1;

    let mut out = Vec::with_capacity(unpadded + pad + x.len() * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&[1, 0]);
    out.extend_from_slice(&(header_len as u16).to_le_bytes());
    out.extend_from_slice(dict.as_bytes());
    out.extend(std::iter::repeat_n(b' ', pad));
    out.push(b'\n');
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            out.extend_from_slice(&x[(i, j)].to_le_bytes());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    // Byte layout assembled by hand, independent of `write`.
    fn handmade(version: u8, descr: &str, shape: &str, fortran: &str, payload: &[u8]) -> Vec<u8> {
        let dict = format!("{{'descr': '{descr}', 'fortran_order': {fortran}, 'shape': {shape}, }}\n");
        let mut out = b"\x93NUMPY".to_vec();
        out.push(version);
        out.push(0);
        if version == 1 {
            out.extend_from_slice(&(dict.len() as u16).to_le_bytes());
        } else {
            out.extend_from_slice(&(dict.len() as u32).to_le_bytes());
        }
        out.extend_from_slice(dict.as_bytes());
        out.extend_from_slice(payload);
        out
    }

    #[test]
    fn float32_widened() {
        let vals = [1.5f32, -2.25, 3.1, 0.0, 1e-3, 7.0];
        let payload: Vec<u8> = vals.iter().flat_map(|v| v.to_le_bytes()).collect();
        let bytes = handmade(1, "<f4", "(3, 2)", "False", &payload);
        let m = parse(&bytes).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (3, 2));
        for (k, v) in vals.iter().enumerate() {
            assert!((m[(k / 2, k % 2)] - *v as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn version_two_header() {
        let payload: Vec<u8> = [1.0f64, 2.0].iter().flat_map(|v| v.to_le_bytes()).collect();
        let bytes = handmade(2, "<f8", "(2, 1)", "False", &payload);
        assert_eq!(parse(&bytes).unwrap(), dmatrix![1.0; 2.0]);
    }

    #[test]
    fn one_dimensional_rejected() {
        let payload: Vec<u8> = [1.0f64, 2.0].iter().flat_map(|v| v.to_le_bytes()).collect();
        let bytes = handmade(1, "<f8", "(2,)", "False", &payload);
        assert!(matches!(parse(&bytes), Err(Error::NotTwoDimensional { ndim: 1 })));
    }

    #[test]
    fn unsupported_dtypes_rejected() {
        for d in [">f8", "<i4", "<f2", "|b1"] {
            let bytes = handmade(1, d, "(1, 1)", "False", &[0; 8]);
            assert!(matches!(parse(&bytes), Err(Error::UnsupportedDtype(_))), "{d}");
        }
    }

    #[test]
    fn fortran_order_rejected() {
        let bytes = handmade(1, "<f8", "(1, 1)", "True", &[0; 8]);
        assert!(parse(&bytes).is_err());
    }

    #[test]
    fn truncated_payload_rejected() {
        let bytes = handmade(1, "<f8", "(2, 2)", "False", &[0; 16]);
        assert!(parse(&bytes).is_err());
    }

    #[test]
    fn writer_aligns_header() {
        let bytes = write(&dmatrix![1.0, 2.0; 3.0, 4.0]);
        let header_len = u16::from_le_bytes([bytes[8], bytes[9]]) as usize;
        assert_eq!((10 + header_len) % 64, 0);
        assert_eq!(bytes[10 + header_len - 1], b'\n');
    }
}
