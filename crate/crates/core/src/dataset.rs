//! Similarity-matrix ingestion and discretization.
//!
//! Input is plain CSV: a header row whose first cell is arbitrary and whose
//! remaining cells are gene ids, then one row per probe pattern starting with
//! its id. Values must be unit-interval reals with a dot decimal separator.
//! Quoting is not supported; a field containing `"` is rejected.

use std::collections::HashSet;
use std::io::Read;

use thiserror::Error;

use crate::bitmatrix::BitMatrix;
use crate::Float;

#[derive(Debug, Error, PartialEq)]
pub enum DatasetError {
    #[error("row {row}: expected {expected} values, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column {col}: value {value} outside [0, 1]")]
    ValueOutOfRange { row: usize, col: usize, value: f64 },
    #[error("duplicate identifier {0:?}")]
    DuplicateId(String),
    #[error("matrix has no rows or no columns")]
    EmptyMatrix,
    #[error("row {row}, column {col}: cannot parse {text:?} as a number")]
    NonNumericCell {
        row: usize,
        col: usize,
        text: String,
    },
    #[error("line {line}: quoted fields are not supported")]
    QuotedField { line: usize },
    #[error("percentage {0} outside [0, 100]")]
    InvalidPercentage(f64),
    #[error("threshold {0} outside [0, 1]")]
    InvalidThreshold(f64),
}

/// Dense matrix of unit-interval similarities. Rows are probe patterns
/// (transactions), columns are genes (items). Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix<T> {
    row_ids: Vec<String>,
    col_ids: Vec<String>,
    values: Vec<T>, // row-major
}

impl<T: Float> SimilarityMatrix<T> {
    pub fn new(
        row_ids: Vec<String>,
        col_ids: Vec<String>,
        rows: Vec<Vec<T>>,
    ) -> Result<Self, DatasetError> {
        if row_ids.is_empty() || col_ids.is_empty() {
            return Err(DatasetError::EmptyMatrix);
        }
        check_unique(&row_ids)?;
        check_unique(&col_ids)?;
        if rows.len() != row_ids.len() {
            return Err(DatasetError::RaggedRow {
                row: rows.len().min(row_ids.len()),
                expected: row_ids.len(),
                found: rows.len(),
            });
        }
        let n_cols = col_ids.len();
        let mut values = Vec::with_capacity(row_ids.len() * n_cols);
        for (j, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(DatasetError::RaggedRow {
                    row: j,
                    expected: n_cols,
                    found: row.len(),
                });
            }
            for (i, v) in row.into_iter().enumerate() {
                if !v.is_finite() || v < T::zero() || v > T::one() {
                    return Err(DatasetError::ValueOutOfRange {
                        row: j,
                        col: i,
                        value: v.to_f64().unwrap_or(f64::NAN),
                    });
                }
                values.push(v);
            }
        }
        Ok(SimilarityMatrix {
            row_ids,
            col_ids,
            values,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_ids.len()
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn col_ids(&self) -> &[String] {
        &self.col_ids
    }

    pub fn value(&self, row: usize, col: usize) -> T {
        self.values[row * self.n_cols() + col]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Global maximum over the whole matrix (the HV of max-minus-x%).
    pub fn max_value(&self) -> T {
        self.values
            .iter()
            .copied()
            .fold(T::zero(), |acc, v| if v > acc { v } else { acc })
    }

    /// Serialize back to the CSV form accepted by [`parse_similarity_matrix`].
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id");
        for id in &self.col_ids {
            out.push(',');
            out.push_str(id);
        }
        out.push('\n');
        for (j, id) in self.row_ids.iter().enumerate() {
            out.push_str(id);
            for i in 0..self.n_cols() {
                out.push(',');
                out.push_str(&format!("{}", self.value(j, i)));
            }
            out.push('\n');
        }
        out
    }
}

fn check_unique(ids: &[String]) -> Result<(), DatasetError> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(DatasetError::DuplicateId(id.clone()));
        }
    }
    Ok(())
}

fn split_line(line: &str, line_no: usize) -> Result<Vec<&str>, DatasetError> {
    if line.contains('"') {
        return Err(DatasetError::QuotedField { line: line_no });
    }
    Ok(line.split(',').collect())
}

/// Parse a similarity-matrix CSV. Values are parsed at 64-bit precision and
/// then converted to the requested scalar. Fully empty lines are skipped.
pub fn parse_similarity_matrix<T: Float>(text: &str) -> Result<SimilarityMatrix<T>, DatasetError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(no, l)| (no + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.is_empty());

    let (header_no, header) = lines.next().ok_or(DatasetError::EmptyMatrix)?;
    let header_fields = split_line(header, header_no)?;
    if header_fields.len() < 2 {
        return Err(DatasetError::EmptyMatrix);
    }
    let col_ids: Vec<String> = header_fields[1..].iter().map(|s| s.to_string()).collect();
    check_unique(&col_ids)?;
    let n_cols = col_ids.len();

    let mut row_ids: Vec<String> = Vec::new();
    let mut seen_rows: HashSet<String> = HashSet::new();
    let mut values: Vec<T> = Vec::new();
    for (row_index, (line_no, line)) in lines.enumerate() {
        let fields = split_line(line, line_no)?;
        if fields.len() != n_cols + 1 {
            return Err(DatasetError::RaggedRow {
                row: row_index,
                expected: n_cols,
                found: fields.len().saturating_sub(1),
            });
        }
        let id = fields[0].to_string();
        if !seen_rows.insert(id.clone()) {
            return Err(DatasetError::DuplicateId(id));
        }
        row_ids.push(id);
        for (i, cell) in fields[1..].iter().enumerate() {
            let v: f64 = cell
                .parse()
                .map_err(|_| DatasetError::NonNumericCell {
                    row: row_index,
                    col: i,
                    text: cell.to_string(),
                })?;
            if !(0.0..=1.0).contains(&v) {
                return Err(DatasetError::ValueOutOfRange {
                    row: row_index,
                    col: i,
                    value: v,
                });
            }
            values.push(T::cast(v));
        }
    }
    if row_ids.is_empty() {
        return Err(DatasetError::EmptyMatrix);
    }
    Ok(SimilarityMatrix {
        row_ids,
        col_ids,
        values,
    })
}

/// Discretization method. Exactly one is active; both compare strictly, so a
/// value equal to the threshold maps to 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscretizeConfig<T> {
    /// 1 iff value > (1 - x/100) * HV, where HV is the global matrix maximum.
    MaxMinusX { x: T },
    /// 1 iff value > beta.
    Beta { beta: T },
}

impl<T: Float> DiscretizeConfig<T> {
    pub fn max_minus_x(x: T) -> Result<Self, DatasetError> {
        if !x.is_finite() || x < T::zero() || x > T::cast(100) {
            return Err(DatasetError::InvalidPercentage(
                x.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(DiscretizeConfig::MaxMinusX { x })
    }

    pub fn beta(beta: T) -> Result<Self, DatasetError> {
        if !beta.is_finite() || beta < T::zero() || beta > T::one() {
            return Err(DatasetError::InvalidThreshold(
                beta.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(DiscretizeConfig::Beta { beta })
    }

    pub fn apply(&self, m: &SimilarityMatrix<T>) -> BitMatrix {
        let threshold = match *self {
            DiscretizeConfig::MaxMinusX { x } => {
                (T::one() - x / T::cast(100)) * m.max_value()
            }
            DiscretizeConfig::Beta { beta } => beta,
        };
        binarize(m, threshold)
    }
}

fn binarize<T: Float>(m: &SimilarityMatrix<T>, threshold: T) -> BitMatrix {
    let mut b = BitMatrix::new(m.row_ids().to_vec(), m.col_ids().to_vec());
    for j in 0..m.n_rows() {
        for i in 0..m.n_cols() {
            if m.value(j, i) > threshold {
                b.set_bit(j, i);
            }
        }
    }
    b
}

/// Binarize against the global maximum: 1 iff value > (1 - x/100) * HV.
pub fn discretize_max_minus_x<T: Float>(
    m: &SimilarityMatrix<T>,
    x: T,
) -> Result<BitMatrix, DatasetError> {
    Ok(DiscretizeConfig::max_minus_x(x)?.apply(m))
}

/// Binarize against a fixed minimum similarity: 1 iff value > beta. Each row
/// of the result is the transaction for that probe pattern.
pub fn discretize_beta<T: Float>(
    m: &SimilarityMatrix<T>,
    beta: T,
) -> Result<BitMatrix, DatasetError> {
    Ok(DiscretizeConfig::beta(beta)?.apply(m))
}

/// `Read` adaptor that counts full passes over the underlying source.
///
/// The wrapper has no `Seek` impl, so a consumer holding only the adaptor
/// cannot rewind; `full_passes` reports 1 once EOF has been reached.
pub struct ScanCountingReader<R> {
    inner: R,
    bytes_read: u64,
    eof_seen: bool,
}

impl<R: Read> ScanCountingReader<R> {
    pub fn new(inner: R) -> Self {
        ScanCountingReader {
            inner,
            bytes_read: 0,
            eof_seen: false,
        }
    }

    pub fn bytes_read(&self) -> u64 {
        self.bytes_read
    }

    pub fn full_passes(&self) -> usize {
        usize::from(self.eof_seen)
    }
}

impl<R: Read> Read for ScanCountingReader<R> {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        let n = self.inner.read(buf)?;
        if n == 0 && !buf.is_empty() {
            self.eof_seen = true;
        }
        self.bytes_read += n as u64;
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Input column of the published max-minus-25% worked example.
    pub(crate) const WORKED_EXAMPLE_COLUMN: [f64; 8] = [
        0.096595, 0.123447, 0.291310, 0.126024, 0.155819, 0.288394, 0.000000, 0.215049,
    ];

    fn column_matrix(values: &[f64]) -> SimilarityMatrix<f64> {
        let row_ids = (0..values.len()).map(|j| format!("r{j}")).collect();
        SimilarityMatrix::new(
            row_ids,
            vec!["g".to_string()],
            values.iter().map(|&v| vec![v]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn parse_small_matrix() {
        let m: SimilarityMatrix<f64> =
            parse_similarity_matrix("probe,g1,g2\np1,0.5,0.25\n").unwrap();
        assert_eq!(m.n_rows(), 1);
        assert_eq!(m.n_cols(), 2);
        assert_eq!(m.row_ids(), ["p1".to_string()]);
        assert_eq!(m.col_ids(), ["g1".to_string(), "g2".to_string()]);
        assert_eq!(m.value(0, 0), 0.5);
        assert_eq!(m.value(0, 1), 0.25);
    }

    #[test]
    fn parse_rejects_ragged_row() {
        let err = parse_similarity_matrix::<f64>("probe,g1,g2\np1,0.5\n").unwrap_err();
        assert!(matches!(err, DatasetError::RaggedRow { found: 1, expected: 2, .. }));
    }

    #[test]
    fn parse_rejects_out_of_range() {
        let err = parse_similarity_matrix::<f64>("probe,g1\np1,1.2\n").unwrap_err();
        assert!(matches!(err, DatasetError::ValueOutOfRange { .. }));
        let err = parse_similarity_matrix::<f64>("probe,g1\np1,-0.1\n").unwrap_err();
        assert!(matches!(err, DatasetError::ValueOutOfRange { .. }));
        // NaN and inf parse as numbers but are outside the Jaccard range
        let err = parse_similarity_matrix::<f64>("probe,g1\np1,NaN\n").unwrap_err();
        assert!(matches!(err, DatasetError::ValueOutOfRange { .. }));
        let err = parse_similarity_matrix::<f64>("probe,g1\np1,inf\n").unwrap_err();
        assert!(matches!(err, DatasetError::ValueOutOfRange { .. }));
    }

    #[test]
    fn parse_rejects_non_numeric_and_quotes() {
        let err = parse_similarity_matrix::<f64>("probe,g1\np1,abc\n").unwrap_err();
        assert!(matches!(err, DatasetError::NonNumericCell { .. }));
        let err = parse_similarity_matrix::<f64>("probe,\"g,1\"\np1,0.5\n").unwrap_err();
        assert!(matches!(err, DatasetError::QuotedField { line: 1 }));
    }

    #[test]
    fn parse_rejects_duplicates_and_empty() {
        let err = parse_similarity_matrix::<f64>("probe,g1,g1\np1,0.5,0.5\n").unwrap_err();
        assert_eq!(err, DatasetError::DuplicateId("g1".to_string()));
        let err =
            parse_similarity_matrix::<f64>("probe,g1\np1,0.5\np1,0.6\n").unwrap_err();
        assert_eq!(err, DatasetError::DuplicateId("p1".to_string()));
        assert_eq!(
            parse_similarity_matrix::<f64>("probe,g1\n").unwrap_err(),
            DatasetError::EmptyMatrix
        );
        assert_eq!(
            parse_similarity_matrix::<f64>("").unwrap_err(),
            DatasetError::EmptyMatrix
        );
    }

    #[test]
    fn parse_handles_crlf_and_trailing_newline() {
        let m: SimilarityMatrix<f64> =
            parse_similarity_matrix("probe,g1\r\np1,0.5\r\n\n").unwrap();
        assert_eq!(m.n_rows(), 1);
        assert_eq!(m.value(0, 0), 0.5);
    }

    #[test]
    fn csv_round_trip_is_stable() {
        let text = "probe,g1,g2\np1,0.5,0.25\np2,0.125,1\n";
        let m: SimilarityMatrix<f64> = parse_similarity_matrix(text).unwrap();
        let again: SimilarityMatrix<f64> = parse_similarity_matrix(&m.to_csv()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn max_minus_25_reproduces_worked_column_a_through_g() {
        let m = column_matrix(&WORKED_EXAMPLE_COLUMN[..7]);
        let b = discretize_max_minus_x(&m, 25.0).unwrap();
        let expected = [false, false, true, false, false, true, false];
        for (j, &e) in expected.iter().enumerate() {
            assert_eq!(b.bit(j, 0), e, "row {j}");
        }
    }

    #[test]
    fn max_minus_x_all_cells_at_maximum() {
        let m = column_matrix(&[0.4, 0.4, 0.4]);
        let b = discretize_max_minus_x(&m, 25.0).unwrap();
        assert!((0..3).all(|j| b.bit(j, 0)));
    }

    #[test]
    fn max_minus_zero_percent_is_all_zero() {
        // strict comparison: nothing exceeds HV itself
        let m = column_matrix(&[0.4, 0.9, 0.2]);
        let b = discretize_max_minus_x(&m, 0.0).unwrap();
        assert!((0..3).all(|j| !b.bit(j, 0)));
    }

    #[test]
    fn max_minus_x_validates_percentage() {
        let m = column_matrix(&[0.4]);
        assert!(matches!(
            discretize_max_minus_x(&m, -1.0),
            Err(DatasetError::InvalidPercentage(_))
        ));
        assert!(matches!(
            discretize_max_minus_x(&m, 100.5),
            Err(DatasetError::InvalidPercentage(_))
        ));
    }

    #[test]
    fn beta_comparison_is_strict() {
        let m = column_matrix(&[0.3, 0.31]);
        let b = discretize_beta(&m, 0.3).unwrap();
        assert!(!b.bit(0, 0));
        assert!(b.bit(1, 0));
    }

    #[test]
    fn beta_zero_keeps_everything_positive() {
        let m = column_matrix(&WORKED_EXAMPLE_COLUMN);
        let b = discretize_beta(&m, 0.0).unwrap();
        for (j, &v) in WORKED_EXAMPLE_COLUMN.iter().enumerate() {
            assert_eq!(b.bit(j, 0), v > 0.0, "row {j}");
        }
    }

    #[test]
    fn beta_validates_threshold() {
        let m = column_matrix(&[0.4]);
        assert!(matches!(
            discretize_beta(&m, 1.5),
            Err(DatasetError::InvalidThreshold(_))
        ));
    }

    #[test]
    fn discretization_preserves_dimensions_and_ids() {
        let m: SimilarityMatrix<f64> =
            parse_similarity_matrix("probe,g1,g2\np1,0.5,0.25\np2,0.75,0.9\n").unwrap();
        let b = discretize_beta(&m, 0.5).unwrap();
        assert_eq!(b.n_rows(), m.n_rows());
        assert_eq!(b.n_cols(), m.n_cols());
        assert_eq!(b.row_ids(), m.row_ids());
        assert_eq!(b.col_ids(), m.col_ids());
    }

    #[test]
    fn f32_matrices_parse_and_discretize() {
        let m: SimilarityMatrix<f32> =
            parse_similarity_matrix("probe,g1\np1,0.5\np2,0.9\n").unwrap();
        let b = discretize_beta(&m, 0.6f32).unwrap();
        assert!(!b.bit(0, 0));
        assert!(b.bit(1, 0));
    }

    #[test]
    fn scan_counting_reader_reports_one_pass() {
        let mut r = ScanCountingReader::new(std::io::Cursor::new(b"abc".to_vec()));
        assert_eq!(r.full_passes(), 0);
        let mut s = String::new();
        r.read_to_string(&mut s).unwrap();
        assert_eq!(s, "abc");
        assert_eq!(r.full_passes(), 1);
        assert_eq!(r.bytes_read(), 3);
    }
}
