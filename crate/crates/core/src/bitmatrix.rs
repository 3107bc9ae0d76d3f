//! Bit-packed Boolean matrix with masked row/column pruning.
//!
//! Storage is column-major: one bit vector per item, one bit per transaction.
//! The miner prunes rows and columns between levels; pruned rows are masked
//! out of every count (not merely flagged), pruned columns are rejected by
//! the counting operations. Pruning is irreversible within a mining run.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitMatrixError {
    #[error("{axis} index {index} out of range (matrix has {limit})")]
    IndexOutOfRange {
        axis: &'static str,
        index: usize,
        limit: usize,
    },
    #[error("column {0} has been pruned")]
    DeadColumn(usize),
    #[error("row {0} has been pruned")]
    DeadRow(usize),
    #[error("duplicate column index {0}")]
    DuplicateIndex(usize),
    #[error("need at least two distinct column indices")]
    TooFewIndices,
    #[error("{axis} {index} is already dead")]
    AlreadyDead { axis: &'static str, index: usize },
}

const WORD_BITS: usize = 64;

/// Fixed-length bit vector backed by `u64` words.
///
/// Trailing padding bits in the last word are kept zero, so popcounts are
/// exact without masking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector {
            len,
            words: vec![!0u64; len.div_ceil(WORD_BITS)],
        };
        v.clear_padding();
        v
    }

    fn clear_padding(&mut self) {
        let tail = self.len % WORD_BITS;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range ({})", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range ({})", self.len);
        self.words[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
    }

    pub fn clear(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range ({})", self.len);
        self.words[i / WORD_BITS] &= !(1u64 << (i % WORD_BITS));
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "length mismatch in bitwise AND");
        BitVector {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn and_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in bitwise AND");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// popcount(self AND other) without allocating the intersection.
    pub fn and_count(&self, other: &BitVector) -> usize {
        assert_eq!(self.len, other.len, "length mismatch in bitwise AND");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
}

/// Boolean transaction matrix: rows are transactions (probe patterns),
/// columns are items (genes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n_rows: usize,
    n_cols: usize,
    columns: Vec<BitVector>,
    live_rows: BitVector,
    live_cols: Vec<bool>,
    row_ids: Vec<String>,
    col_ids: Vec<String>,
}

impl BitMatrix {
    /// All-zero matrix with every row and column live.
    pub fn new(row_ids: Vec<String>, col_ids: Vec<String>) -> Self {
        let n_rows = row_ids.len();
        let n_cols = col_ids.len();
        BitMatrix {
            n_rows,
            n_cols,
            columns: vec![BitVector::zeros(n_rows); n_cols],
            live_rows: BitVector::ones(n_rows),
            live_cols: vec![true; n_cols],
            row_ids,
            col_ids,
        }
    }

    pub fn set_bit(&mut self, row: usize, col: usize) {
        assert!(row < self.n_rows && col < self.n_cols);
        self.columns[col].set(row);
    }

    pub fn bit(&self, row: usize, col: usize) -> bool {
        assert!(row < self.n_rows && col < self.n_cols);
        self.columns[col].get(row)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn col_ids(&self) -> &[String] {
        &self.col_ids
    }

    pub fn is_live_row(&self, j: usize) -> bool {
        assert!(j < self.n_rows);
        self.live_rows.get(j)
    }

    pub fn is_live_col(&self, i: usize) -> bool {
        assert!(i < self.n_cols);
        self.live_cols[i]
    }

    pub fn live_columns(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_cols).filter(|&i| self.live_cols[i])
    }

    pub fn live_row_count(&self) -> usize {
        self.live_rows.count_ones()
    }

    fn check_col(&self, i: usize) -> Result<(), BitMatrixError> {
        if i >= self.n_cols {
            return Err(BitMatrixError::IndexOutOfRange {
                axis: "column",
                index: i,
                limit: self.n_cols,
            });
        }
        if !self.live_cols[i] {
            return Err(BitMatrixError::DeadColumn(i));
        }
        Ok(())
    }

    /// Number of live rows with a 1 in column `i`.
    pub fn column_sum(&self, i: usize) -> Result<usize, BitMatrixError> {
        self.check_col(i)?;
        Ok(self.columns[i].and_count(&self.live_rows))
    }

    /// Number of live columns with a 1 in row `j`.
    pub fn row_sum(&self, j: usize) -> Result<usize, BitMatrixError> {
        if j >= self.n_rows {
            return Err(BitMatrixError::IndexOutOfRange {
                axis: "row",
                index: j,
                limit: self.n_rows,
            });
        }
        if !self.live_rows.get(j) {
            return Err(BitMatrixError::DeadRow(j));
        }
        Ok(self
            .live_columns()
            .filter(|&i| self.columns[i].get(j))
            .count())
    }

    fn validate_indices(&self, idxs: &[usize]) -> Result<(), BitMatrixError> {
        let mut seen = vec![false; self.n_cols];
        for &i in idxs {
            self.check_col(i)?;
            if seen[i] {
                return Err(BitMatrixError::DuplicateIndex(i));
            }
            seen[i] = true;
        }
        Ok(())
    }

    /// Bitwise AND of two or more columns, restricted to live rows. The
    /// popcount of the result is the absolute support of the itemset.
    pub fn and_columns(&self, idxs: &[usize]) -> Result<BitVector, BitMatrixError> {
        if idxs.len() < 2 {
            return Err(BitMatrixError::TooFewIndices);
        }
        self.validate_indices(idxs)?;
        let mut acc = self.columns[idxs[0]].and(&self.live_rows);
        for &i in &idxs[1..] {
            acc.and_assign(&self.columns[i]);
        }
        Ok(acc)
    }

    /// Absolute support (live-row count) of an itemset of one or more items.
    pub fn support_count(&self, idxs: &[usize]) -> Result<usize, BitMatrixError> {
        match idxs.len() {
            0 => Err(BitMatrixError::TooFewIndices),
            1 => self.column_sum(idxs[0]),
            _ => Ok(self.and_columns(idxs)?.count_ones()),
        }
    }

    pub fn prune_column(&mut self, i: usize) -> Result<(), BitMatrixError> {
        if i >= self.n_cols {
            return Err(BitMatrixError::IndexOutOfRange {
                axis: "column",
                index: i,
                limit: self.n_cols,
            });
        }
        if !self.live_cols[i] {
            return Err(BitMatrixError::AlreadyDead {
                axis: "column",
                index: i,
            });
        }
        self.live_cols[i] = false;
        Ok(())
    }

    pub fn prune_row(&mut self, j: usize) -> Result<(), BitMatrixError> {
        if j >= self.n_rows {
            return Err(BitMatrixError::IndexOutOfRange {
                axis: "row",
                index: j,
                limit: self.n_rows,
            });
        }
        if !self.live_rows.get(j) {
            return Err(BitMatrixError::AlreadyDead {
                axis: "row",
                index: j,
            });
        }
        self.live_rows.clear(j);
        Ok(())
    }
}
