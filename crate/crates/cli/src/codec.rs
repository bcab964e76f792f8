//! File formats: raw little-endian arrays, CSV, PGM, PFM and JSON manifests.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gaborlet::{Complex64, Matrix};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

/// On-disk encoding selected with `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Raw,
    Pgm,
    Pfm,
}

impl Format {
    /// Guess from a file extension; unknown extensions are raw.
    pub fn from_path(path: &Path) -> Self {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("csv") | Some("txt") => Format::Csv,
            Some("pgm") => Format::Pgm,
            Some("pfm") => Format::Pfm,
            _ => Format::Raw,
        }
    }

    /// Encoding used for array bundles: CSV or raw.
    pub fn array_encoding(self) -> Self {
        if self == Format::Csv {
            Format::Csv
        } else {
            Format::Raw
        }
    }
}

pub(crate) fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

pub(crate) fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub(crate) fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

pub fn encode_f64(values: &[f64]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

pub fn decode_f64(bytes: &[u8]) -> CliResult<Vec<f64>> {
    if !bytes.len().is_multiple_of(8) {
        return Err(CliError::Format(format!(
            "{} bytes is not a whole number of f64 values",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect())
}

/// Interleaved `re, im` pairs of little-endian f64.
pub fn encode_c64(values: &[Complex64]) -> Vec<u8> {
    values
        .iter()
        .flat_map(|z| [z.re, z.im])
        .flat_map(f64::to_le_bytes)
        .collect()
}

pub fn decode_c64(bytes: &[u8]) -> CliResult<Vec<Complex64>> {
    let flat = decode_f64(bytes)?;
    if flat.len() % 2 != 0 {
        return Err(CliError::Format("odd number of values in a complex array".into()));
    }
    Ok(flat.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

fn parse_f64(tok: &str, line: usize) -> CliResult<f64> {
    f64::from_str(tok.trim()).map_err(|_| CliError::Format(format!("line {line}: cannot parse {tok:?} as a number")))
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// One value per line. `{}` formatting of f64 is shortest round-trip, so
/// write-then-read is bit-identical.
pub fn encode_csv(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v}\n")).collect()
}

pub fn decode_csv(text: &str) -> CliResult<Vec<f64>> {
    data_lines(text).map(|(i, l)| parse_f64(l, i)).collect()
}

/// One `re,im` pair per line.
pub fn encode_csv_complex(values: &[Complex64]) -> String {
    values.iter().map(|z| format!("{},{}\n", z.re, z.im)).collect()
}

pub fn decode_csv_complex(text: &str) -> CliResult<Vec<Complex64>> {
    data_lines(text)
        .map(|(i, l)| {
            let (a, b) = l
                .split_once(',')
                .ok_or_else(|| CliError::Format(format!("line {i}: expected re,im")))?;
            Ok(Complex64::new(parse_f64(a, i)?, parse_f64(b, i)?))
        })
        .collect()
}

/// Read a 1D signal stored as raw f64 or CSV.
pub fn read_signal(path: &Path, format: Option<Format>) -> CliResult<Vec<f64>> {
    match format.unwrap_or_else(|| Format::from_path(path)) {
        Format::Csv => decode_csv(&read_text(path)?),
        Format::Raw => decode_f64(&read_bytes(path)?),
        f => Err(CliError::Usage(format!("{f:?} cannot hold a 1D signal"))),
    }
}

pub fn write_signal(path: &Path, values: &[f64], format: Option<Format>) -> CliResult<()> {
    match format.unwrap_or_else(|| Format::from_path(path)) {
        Format::Csv => write_bytes(path, encode_csv(values).as_bytes()),
        Format::Raw => write_bytes(path, &encode_f64(values)),
        f => Err(CliError::Usage(format!("{f:?} cannot hold a 1D signal"))),
    }
}

// ---------------------------------------------------------------- images

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn token(&mut self) -> CliResult<&'a str> {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(CliError::Format("truncated image header".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).map_err(|_| CliError::Format("non-ASCII image header".into()))
    }

    fn number<T: FromStr>(&mut self) -> CliResult<T> {
        let t = self.token()?;
        t.parse()
            .map_err(|_| CliError::Format(format!("bad header field {t:?}")))
    }

    /// Skip the single whitespace byte that ends the header.
    fn body(self) -> &'a [u8] {
        &self.bytes[(self.pos + 1).min(self.bytes.len())..]
    }
}

/// Binary PGM (P5), 8 or 16 bits, mapped to `[0, 1]`.
pub fn decode_pgm(bytes: &[u8]) -> CliResult<Matrix> {
    let mut h = Header { bytes, pos: 0 };
    if h.token()? != "P5" {
        return Err(CliError::Format("only binary PGM (P5) is supported".into()));
    }
    let cols: usize = h.number()?;
    let rows: usize = h.number()?;
    let maxval: u32 = h.number()?;
    if maxval == 0 || maxval > 65535 {
        return Err(CliError::Format(format!("PGM maxval {maxval} out of range")));
    }
    let body = h.body();
    let width = if maxval > 255 { 2 } else { 1 };
    if body.len() < rows * cols * width {
        return Err(CliError::Format("PGM pixel data is truncated".into()));
    }
    let scale = 1.0 / f64::from(maxval);
    let data = (0..rows * cols)
        .map(|i| {
            let v = if width == 2 {
                u16::from_be_bytes([body[2 * i], body[2 * i + 1]]) as f64
            } else {
                body[i] as f64
            };
            v * scale
        })
        .collect();
    Ok(Matrix::from_vec(rows, cols, data)?)
}

/// 8-bit preview: the value range is stretched to `0..=255`.
pub fn encode_pgm(img: &Matrix) -> Vec<u8> {
    let (lo, hi) = img
        .data()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut out = format!("P5\n{} {}\n255\n", img.cols(), img.rows()).into_bytes();
    out.extend(
        img.data()
            .iter()
            .map(|&v| (255.0 * (v - lo) / span).round().clamp(0.0, 255.0) as u8),
    );
    out
}

/// Grayscale PFM (`Pf`). Rows are stored bottom-up; a negative scale marks
/// little-endian data.
pub fn decode_pfm(bytes: &[u8]) -> CliResult<Matrix> {
    let mut h = Header { bytes, pos: 0 };
    match h.token()? {
        "Pf" => {}
        "PF" => return Err(CliError::Format("colour PFM is not supported".into())),
        t => return Err(CliError::Format(format!("not a PFM file (magic {t:?})"))),
    }
    let cols: usize = h.number()?;
    let rows: usize = h.number()?;
    let scale: f64 = h.number()?;
    let body = h.body();
    if body.len() < rows * cols * 4 {
        return Err(CliError::Format("PFM pixel data is truncated".into()));
    }
    let little = scale < 0.0;
    let mut img = Matrix::zeros(rows, cols);
    for r in 0..rows {
        let src = rows - 1 - r;
        for c in 0..cols {
            let i = 4 * (src * cols + c);
            let b = [body[i], body[i + 1], body[i + 2], body[i + 3]];
            let v = if little {
                f32::from_le_bytes(b)
            } else {
                f32::from_be_bytes(b)
            };
            img.set(r, c, f64::from(v));
        }
    }
    Ok(img)
}

pub fn encode_pfm(img: &Matrix) -> Vec<u8> {
    let mut out = format!("Pf\n{} {}\n-1.0\n", img.cols(), img.rows()).into_bytes();
    for r in (0..img.rows()).rev() {
        for &v in img.row(r) {
            out.extend((v as f32).to_le_bytes());
        }
    }
    out
}

/// Sidecar describing a raw image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawImageInfo {
    pub rows: usize,
    pub cols: usize,
    pub dtype: String,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn encode_csv_matrix(img: &Matrix) -> String {
    let mut s = String::new();
    for r in 0..img.rows() {
        let row: Vec<String> = img.row(r).iter().map(f64::to_string).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn decode_csv_matrix(text: &str) -> CliResult<Matrix> {
    let rows: Vec<Vec<f64>> = data_lines(text)
        .map(|(i, l)| l.split(',').map(|t| parse_f64(t, i)).collect())
        .collect::<CliResult<_>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::Format("CSV rows have different lengths".into()));
    }
    Ok(Matrix::from_vec(
        rows.len(),
        cols,
        rows.into_iter().flatten().collect(),
    )?)
}

pub fn read_image(path: &Path, format: Option<Format>) -> CliResult<Matrix> {
    match format.unwrap_or_else(|| Format::from_path(path)) {
        Format::Pgm => decode_pgm(&read_bytes(path)?),
        Format::Pfm => decode_pfm(&read_bytes(path)?),
        Format::Csv => decode_csv_matrix(&read_text(path)?),
        Format::Raw => {
            let side = sidecar_path(path);
            let info: RawImageInfo = serde_json::from_str(&read_text(&side)?).map_err(|e| CliError::json(&side, e))?;
            if info.dtype != "f64le" {
                return Err(CliError::Format(format!("unsupported raw dtype {:?}", info.dtype)));
            }
            Ok(Matrix::from_vec(info.rows, info.cols, decode_f64(&read_bytes(path)?)?)?)
        }
    }
}

pub fn write_image(path: &Path, img: &Matrix, format: Option<Format>) -> CliResult<()> {
    match format.unwrap_or_else(|| Format::from_path(path)) {
        Format::Pgm => write_bytes(path, &encode_pgm(img)),
        Format::Pfm => write_bytes(path, &encode_pfm(img)),
        Format::Csv => write_bytes(path, encode_csv_matrix(img).as_bytes()),
        Format::Raw => {
            let info = RawImageInfo {
                rows: img.rows(),
                cols: img.cols(),
                dtype: "f64le".into(),
            };
            write_bytes(&sidecar_path(path), to_json(&info)?.as_bytes())?;
            write_bytes(path, &encode_f64(img.data()))
        }
    }
}

// ------------------------------------------------------- array bundles

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DType {
    F64,
    C128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayEntry {
    pub name: String,
    pub file: String,
    pub dtype: DType,
    pub shape: Vec<usize>,
}

/// JSON manifest of a directory of arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub kind: String,
    pub alpha: f64,
    pub tau: f64,
    pub dims: Vec<usize>,
    pub levels: usize,
    pub encoding: Format,
    pub arrays: Vec<ArrayEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pr_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ArrayData {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

pub const MANIFEST: &str = "manifest.json";

pub(crate) fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes arrays into `dir` and returns their manifest entries.
pub struct BundleWriter<'a> {
    dir: &'a Path,
    encoding: Format,
    entries: Vec<ArrayEntry>,
}

impl<'a> BundleWriter<'a> {
    pub fn new(dir: &'a Path, encoding: Format) -> CliResult<Self> {
        create_dir(dir)?;
        Ok(Self {
            dir,
            encoding: encoding.array_encoding(),
            entries: Vec::new(),
        })
    }

    pub fn encoding(&self) -> Format {
        self.encoding
    }

    pub fn add(&mut self, name: &str, shape: Vec<usize>, data: &ArrayData) -> CliResult<()> {
        let csv = self.encoding == Format::Csv;
        let (dtype, ext, bytes) = match data {
            ArrayData::Real(v) if csv => (DType::F64, "csv", encode_csv(v).into_bytes()),
            ArrayData::Real(v) => (DType::F64, "f64", encode_f64(v)),
            ArrayData::Complex(v) if csv => (DType::C128, "csv", encode_csv_complex(v).into_bytes()),
            ArrayData::Complex(v) => (DType::C128, "c128", encode_c64(v)),
        };
        let file = format!("{name}.{ext}");
        write_bytes(&self.dir.join(&file), &bytes)?;
        self.entries.push(ArrayEntry {
            name: name.into(),
            file,
            dtype,
            shape,
        });
        Ok(())
    }

    pub fn finish(self) -> Vec<ArrayEntry> {
        self.entries
    }
}

pub fn write_manifest(dir: &Path, m: &Manifest) -> CliResult<()> {
    write_bytes(&dir.join(MANIFEST), to_json(m)?.as_bytes())
}

pub fn read_manifest(dir: &Path) -> CliResult<Manifest> {
    let path = dir.join(MANIFEST);
    let m: Manifest = serde_json::from_str(&read_text(&path)?).map_err(|e| CliError::json(&path, e))?;
    if m.format_version != FORMAT_VERSION {
        return Err(CliError::Format(format!(
            "unsupported format version {}",
            m.format_version
        )));
    }
    Ok(m)
}

/// Load one array listed in a manifest, checking its size against the shape.
pub fn read_array(dir: &Path, m: &Manifest, name: &str) -> CliResult<ArrayData> {
    let e = m
        .arrays
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CliError::Format(format!("manifest lists no array {name:?}")))?;
    let path = dir.join(&e.file);
    let data = match (e.dtype, m.encoding) {
        (DType::F64, Format::Csv) => ArrayData::Real(decode_csv(&read_text(&path)?)?),
        (DType::F64, _) => ArrayData::Real(decode_f64(&read_bytes(&path)?)?),
        (DType::C128, Format::Csv) => ArrayData::Complex(decode_csv_complex(&read_text(&path)?)?),
        (DType::C128, _) => ArrayData::Complex(decode_c64(&read_bytes(&path)?)?),
    };
    let len = match &data {
        ArrayData::Real(v) => v.len(),
        ArrayData::Complex(v) => v.len(),
    };
    let expect: usize = e.shape.iter().product();
    if len != expect {
        return Err(CliError::Format(format!(
            "{}: {len} values, shape {:?}",
            e.file, e.shape
        )));
    }
    Ok(data)
}

pub fn read_real(dir: &Path, m: &Manifest, name: &str) -> CliResult<Vec<f64>> {
    match read_array(dir, m, name)? {
        ArrayData::Real(v) => Ok(v),
        ArrayData::Complex(_) => Err(CliError::Format(format!("{name} is complex, expected real"))),
    }
}

pub fn read_complex(dir: &Path, m: &Manifest, name: &str) -> CliResult<Vec<Complex64>> {
    match read_array(dir, m, name)? {
        ArrayData::Complex(v) => Ok(v),
        ArrayData::Real(_) => Err(CliError::Format(format!("{name} is real, expected complex"))),
    }
}
