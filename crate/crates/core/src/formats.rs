//! On-disk artifacts: little-endian f32 matrix files for features and
//! posteriorgrams, and the per-phoneme durations TSV.

use ndarray::Array2;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FormatError {
    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: String, found: String },
    #[error("truncated file: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("{0} trailing bytes after matrix payload")]
    TrailingBytes(usize),
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("matrix dimension {0} does not fit in a u32 header")]
    TooLarge(usize),
    #[error("durations line {line}: {msg}")]
    DurationLine { line: usize, msg: String },
    #[error("{symbols} symbols but {durations} durations")]
    CountMismatch { symbols: usize, durations: usize },
}

/// Which of the two matrix files a header announces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// `MF01`: frames x mel bins.
    Features,
    /// `MP01`: frames x classes, log-probabilities.
    Posteriors,
}

impl MatrixKind {
    pub fn magic(self) -> &'static [u8; 4] {
        match self {
            MatrixKind::Features => b"MF01",
            MatrixKind::Posteriors => b"MP01",
        }
    }
}

const HEADER: usize = 12;

/// Encodes `m` as magic, `u32` rows, `u32` columns and row-major `f32`.
pub fn write_matrix(kind: MatrixKind, m: &Array2<f64>) -> Result<Vec<u8>, FormatError> {
    let (rows, cols) = m.dim();
    let rows32 = u32::try_from(rows).map_err(|_| FormatError::TooLarge(rows))?;
    let cols32 = u32::try_from(cols).map_err(|_| FormatError::TooLarge(cols))?;
    let mut out = Vec::with_capacity(HEADER + 4 * m.len());
    out.extend_from_slice(kind.magic());
    out.extend_from_slice(&rows32.to_le_bytes());
    out.extend_from_slice(&cols32.to_le_bytes());
    for ((row, col), &v) in m.indexed_iter() {
        let v = v as f32;
        if !v.is_finite() {
            return Err(FormatError::NonFinite { row, col });
        }
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn read_matrix(kind: MatrixKind, bytes: &[u8]) -> Result<Array2<f64>, FormatError> {
    if bytes.len() < HEADER {
        return Err(FormatError::Truncated {
            expected: HEADER,
            found: bytes.len(),
        });
    }
    if &bytes[..4] != kind.magic() {
        return Err(FormatError::BadMagic {
            expected: String::from_utf8_lossy(kind.magic()).into_owned(),
            found: String::from_utf8_lossy(&bytes[..4]).into_owned(),
        });
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
    let (rows, cols) = (word(4), word(8));
    let expected = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(4))
        .and_then(|n| n.checked_add(HEADER))
        .ok_or(FormatError::TooLarge(rows))?;
    if bytes.len() < expected {
        return Err(FormatError::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(FormatError::TrailingBytes(bytes.len() - expected));
    }
    let mut values = Vec::with_capacity(rows * cols);
    for (k, chunk) in bytes[HEADER..].chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(FormatError::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        values.push(v as f64);
    }
    Ok(Array2::from_shape_vec((rows, cols), values).expect("length checked above"))
}

/// `symbol<TAB>frames` per line.
pub fn write_durations(symbols: &[String], durations: &[usize]) -> Result<String, FormatError> {
    if symbols.len() != durations.len() {
        return Err(FormatError::CountMismatch {
            symbols: symbols.len(),
            durations: durations.len(),
        });
    }
    Ok(symbols
        .iter()
        .zip(durations)
        .map(|(s, d)| format!("{s}\t{d}\n"))
        .collect())
}

pub fn read_durations(text: &str) -> Result<Vec<(String, usize)>, FormatError> {
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            let bad = |msg: &str| FormatError::DurationLine {
                line: i + 1,
                msg: msg.to_string(),
            };
            let (sym, frames) = line.split_once('\t').ok_or_else(|| bad("missing tab"))?;
            if sym.is_empty() {
                return Err(bad("empty symbol"));
            }
            let frames = frames.parse().map_err(|_| bad("frame count is not an integer"))?;
            Ok((sym.to_string(), frames))
        })
        .collect()
}
