use std::fmt;

const WORD: usize = 64;

/// Dense 0/1 matrix over Z2 with bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(WORD);
        Self { rows, cols, stride, words: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        self.words[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.words[i * self.stride + j / WORD];
        let bit = 1u64 << (j % WORD);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    /// Number of ones in column `j`.
    pub fn col_weight(&self, j: usize) -> usize {
        (0..self.rows).filter(|&i| self.get(i, j)).count()
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `row[dst] ^= row[src]`, one word at a time.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let (s, d) = (src * self.stride, dst * self.stride);
        for k in 0..self.stride {
            let v = self.words[s + k];
            self.words[d + k] ^= v;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.words.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let (x, y) = (self.get(i, a), self.get(i, b));
            if x != y {
                self.set(i, a, y);
                self.set(i, b, x);
            }
        }
    }

    /// First column `>= from` holding a one in row `i`.
    fn first_one_in_row(&self, i: usize, from: usize) -> Option<usize> {
        if from >= self.cols {
            return None;
        }
        let row = self.row(i);
        let mut k = from / WORD;
        let mut w = row[k] & (!0u64 << (from % WORD));
        loop {
            if w != 0 {
                let j = k * WORD + w.trailing_zeros() as usize;
                return (j < self.cols).then_some(j);
            }
            k += 1;
            if k == self.stride {
                return None;
            }
            w = row[k];
        }
    }

    /// Matrix product over Z2.
    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let (o, r) = (i * out.stride, k * rhs.stride);
                    for w in 0..rhs.stride {
                        out.words[o + w] ^= rhs.words[r + w];
                    }
                }
            }
        }
        out
    }

    /// Reduces the matrix in place to the diagonal normal form and returns
    /// the number of ones on the diagonal.
    ///
    /// At step `x` the first one (row-major) of the trailing submatrix is
    /// moved to position `(x, x)` by a row and a column swap; row additions
    /// clear column `x` below the pivot and column additions clear row `x`
    /// to its right. The process repeats on the submatrix past `x`.
    pub fn reduce_to_normal_form(&mut self) -> usize {
        let mut x = 0;
        while x < self.rows.min(self.cols) {
            let Some((pr, pc)) =
                (x..self.rows).find_map(|i| self.first_one_in_row(i, x).map(|j| (i, j)))
            else {
                break;
            };
            self.swap_rows(x, pr);
            self.swap_cols(x, pc);
            for i in x + 1..self.rows {
                if self.get(i, x) {
                    self.add_row(x, i);
                }
            }
            // Column `x` now holds a single one at row `x`, so adding it to
            // another column only clears that column's entry in row `x`.
            for j in x + 1..self.cols {
                if self.get(x, j) {
                    self.set(x, j, false);
                }
            }
            x += 1;
        }
        x
    }

    /// Rank over Z2, computed on a private copy.
    pub fn rank(&self) -> usize {
        self.clone().reduce_to_normal_form()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String =
                (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}
