//! TOK1 token-matrix files.
//!
//! Little-endian throughout:
//!
//! | bytes  | content                         |
//! |--------|---------------------------------|
//! | 0..4   | ASCII magic `TOK1`              |
//! | 4..8   | `u32` version, always 1         |
//! | 8..12  | `u32` row count `M`             |
//! | 12..16 | `u32` column count `N`          |
//! | 16..   | `M * N` IEEE-754 `f32`, row-major |
//!
//! Nothing may follow the payload. Files ending in `.csv` are read as one
//! token per line, `N` comma-separated numbers, no header.

use std::fs;
use std::io::Write;
use std::path::Path;

use tokfuse_core::{ImportanceScores, TokenSequence};

use crate::error::{FormatError, Result};

pub const MAGIC: [u8; 4] = *b"TOK1";
pub const VERSION: u32 = 1;
const HEADER_LEN: u64 = 16;

/// An unvalidated row-major `f32` matrix as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub data: Vec<f32>,
    pub rows: usize,
    pub dims: usize,
}

impl Matrix {
    pub fn into_tokens(self) -> Result<TokenSequence> {
        Ok(TokenSequence::new(self.data, self.rows, self.dims)?)
    }
}

pub fn encode_tok1(data: &[f32], rows: usize, dims: usize) -> Result<Vec<u8>> {
    let too_large = || FormatError::TooLarge { rows, dims };
    let rows32 = u32::try_from(rows).map_err(|_| too_large())?;
    let dims32 = u32::try_from(dims).map_err(|_| too_large())?;
    if data.len() != rows * dims {
        return Err(tokfuse_core::Error::Shape {
            expected: rows * dims,
            actual: data.len(),
        }
        .into());
    }
    let mut out = Vec::with_capacity(HEADER_LEN as usize + data.len() * 4);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&rows32.to_le_bytes());
    out.extend_from_slice(&dims32.to_le_bytes());
    for v in data {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_tok1(bytes: &[u8]) -> Result<Matrix> {
    let actual = bytes.len() as u64;
    if actual < 4 {
        return Err(FormatError::Truncated {
            expected: HEADER_LEN,
            actual,
        });
    }
    if bytes[..4] != MAGIC {
        return Err(FormatError::BadMagic(
            String::from_utf8_lossy(&bytes[..4]).into_owned(),
        ));
    }
    if actual < HEADER_LEN {
        return Err(FormatError::Truncated {
            expected: HEADER_LEN,
            actual,
        });
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
    let version = word(4);
    if version != VERSION {
        return Err(FormatError::Version(version));
    }
    let (rows, dims) = (u64::from(word(8)), u64::from(word(12)));
    let overflow = || FormatError::SizeOverflow { rows, dims };
    let expected = rows
        .checked_mul(dims)
        .and_then(|n| n.checked_mul(4))
        .and_then(|n| n.checked_add(HEADER_LEN))
        .ok_or_else(overflow)?;
    usize::try_from(expected).map_err(|_| overflow())?;
    if actual < expected {
        return Err(FormatError::Truncated { expected, actual });
    }
    if actual > expected {
        return Err(FormatError::TrailingData { expected, actual });
    }
    let data = bytes[HEADER_LEN as usize..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Matrix {
        data,
        rows: rows as usize,
        dims: dims as usize,
    })
}

fn parse_csv(text: &str) -> Result<Matrix> {
    let mut data = Vec::new();
    let mut rows = 0;
    let mut dims = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let before = data.len();
        for field in line.split(',') {
            let value: f32 = field.trim().parse().map_err(|_| FormatError::Csv {
                line: i + 1,
                message: format!("cannot parse {:?} as a number", field.trim()),
            })?;
            data.push(value);
        }
        let width = data.len() - before;
        match dims {
            None => dims = Some(width),
            Some(d) if d != width => {
                return Err(FormatError::Csv {
                    line: i + 1,
                    message: format!("expected {d} columns, found {width}"),
                })
            }
            Some(_) => {}
        }
        rows += 1;
    }
    let dims = dims.ok_or(FormatError::Csv {
        line: 0,
        message: "no rows".into(),
    })?;
    Ok(Matrix { data, rows, dims })
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Reads a TOK1 file, or a CSV file when the extension is `.csv`.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| FormatError::io(path, e))?;
    if is_csv(path) {
        let text = String::from_utf8(bytes).map_err(|_| FormatError::Csv {
            line: 0,
            message: "not valid UTF-8".into(),
        })?;
        parse_csv(&text)
    } else {
        decode_tok1(&bytes)
    }
}

/// Reads and validates a token sequence.
pub fn read_tokens(path: impl AsRef<Path>) -> Result<TokenSequence> {
    read_matrix(path)?.into_tokens()
}

/// Reads importance scores stored as a single row or a single column.
pub fn read_scores(path: impl AsRef<Path>) -> Result<ImportanceScores> {
    let m = read_matrix(path)?;
    if m.rows != 1 && m.dims != 1 {
        return Err(FormatError::ScoreShape {
            rows: m.rows,
            dims: m.dims,
        });
    }
    Ok(ImportanceScores::new(m.data)?)
}

/// Writes `bytes` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| FormatError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| FormatError::io(path, e))?;
    tmp.persist(path)
        .map_err(|e| FormatError::io(path, e.error))?;
    Ok(())
}

pub fn write_matrix(path: impl AsRef<Path>, data: &[f32], rows: usize, dims: usize) -> Result<()> {
    write_atomic(path, &encode_tok1(data, rows, dims)?)
}

pub fn write_tokens(path: impl AsRef<Path>, seq: &TokenSequence) -> Result<()> {
    write_matrix(path, seq.as_slice(), seq.rows(), seq.dims())
}

/// One label per line, no header.
pub fn write_labels(path: impl AsRef<Path>, labels: &[usize]) -> Result<()> {
    let mut text = String::with_capacity(labels.len() * 3);
    for l in labels {
        text.push_str(&l.to_string());
        text.push('\n');
    }
    write_atomic(path, text.as_bytes())
}
