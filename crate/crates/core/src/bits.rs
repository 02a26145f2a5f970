//! Packed bit vectors and GF(2) linear algebra.
//!
//! Everything in the Pauli layer reduces to word-parallel XOR/AND plus
//! popcounts, so the representation is a plain `Vec<u64>`. The elimination
//! routines use a fixed pivot order (lowest column first) so that every
//! solve is reproducible across runs and thread counts.

use std::fmt;

const WORD_BITS: usize = 64;

/// Fixed-length bit vector packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
        }
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let w = &mut self.words[i / WORD_BITS];
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    /// Parity of the AND of two vectors; the workhorse of the symplectic form.
    pub fn and_parity(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Concatenate two bit vectors (used to build symplectic rows).
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        let mut out = BitVec::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[")?;
        let ones: Vec<usize> = self.iter_ones().collect();
        for (k, i) in ones.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]/{}", self.len)
    }
}

/// Dense GF(2) matrix with rows stored as [`BitVec`].
#[derive(Clone, Debug)]
pub struct F2Matrix {
    pub rows: Vec<BitVec>,
    pub cols: usize,
}

impl F2Matrix {
    pub fn new(cols: usize) -> Self {
        F2Matrix { rows: Vec::new(), cols }
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        F2Matrix { rows, cols }
    }

    pub fn push_row(&mut self, row: BitVec) {
        debug_assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelonize().len()
    }

    /// In-place row echelon form with lowest-column-first pivots.
    /// Returns the pivot columns in order.
    pub fn echelonize(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows.len() {
                break;
            }
            let Some(pivot_row) = (row..self.rows.len()).find(|&r| self.rows[r].get(col)) else {
                continue;
            };
            self.rows.swap(row, pivot_row);
            let pivot = self.rows[row].clone();
            for (r, other) in self.rows.iter_mut().enumerate() {
                if r != row && other.get(col) {
                    other.xor_assign(&pivot);
                }
            }
            pivots.push(col);
            row += 1;
        }
        self.rows.truncate(row);
        pivots
    }
}

/// Solves `A x = b` over GF(2) where `A` is given by columns.
///
/// Column order is the tie-breaking rule: the returned solution is the
/// unique one whose support is lexicographically smallest in pivot order
/// with all free variables set to zero.
pub struct ColumnSolver {
    /// Echelonized augmented rows: each row is (coefficients over columns, rhs bit area).
    rows: Vec<BitVec>,
    ncols: usize,
    pivots: Vec<(usize, usize)>, // (row index, pivot column)
}

impl ColumnSolver {
    /// Build from column vectors, each of length `dim`.
    pub fn new(columns: &[BitVec], dim: usize) -> Self {
        // Row i of the system corresponds to coordinate i of the target space.
        let ncols = columns.len();
        let mut rows: Vec<BitVec> = (0..dim)
            .map(|i| {
                let mut r = BitVec::zeros(ncols);
                for (c, col) in columns.iter().enumerate() {
                    if col.get(i) {
                        r.set(c, true);
                    }
                }
                r
            })
            .collect();
        // Echelonize while tracking row operations on an identity-tagged rhs:
        // we store the transform implicitly by echelonizing [A | I] rows.
        let mut tagged: Vec<BitVec> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.concat(&BitVec::from_indices(dim, &[i])))
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..ncols {
            let Some(p) = (row..tagged.len()).find(|&r| tagged[r].get(col)) else {
                continue;
            };
            tagged.swap(row, p);
            let pivot = tagged[row].clone();
            for (r, other) in tagged.iter_mut().enumerate() {
                if r != row && other.get(col) {
                    other.xor_assign(&pivot);
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        rows = tagged;
        ColumnSolver { rows, ncols, pivots }
    }

    /// Solve for coefficients with A x = target. Returns None if inconsistent.
    pub fn solve(&self, target: &BitVec) -> Option<BitVec> {
        let dim = target.len();
        let mut x = BitVec::zeros(self.ncols);
        // rhs of each echelonized row = parity of tag & target
        for (ri, row) in self.rows.iter().enumerate() {
            let tag = row.slice(self.ncols, dim);
            let rhs = tag.and_parity(target);
            let is_pivot_row = self.pivots.iter().any(|&(r, _)| r == ri);
            if !is_pivot_row {
                // zero coefficient row: must have zero rhs
                if rhs {
                    return None;
                }
            } else if rhs {
                let (_, col) = self.pivots.iter().find(|&&(r, _)| r == ri).unwrap();
                x.set(*col, true);
            }
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_flip() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert!(v.get(0) && v.get(64) && v.get(129));
        assert_eq!(v.count_ones(), 3);
        v.flip(64);
        assert!(!v.get(64));
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 129]);
    }

    #[test]
    fn and_parity_matches_naive() {
        let a = BitVec::from_indices(70, &[0, 3, 65, 69]);
        let b = BitVec::from_indices(70, &[3, 65, 68]);
        // overlap {3, 65} -> even
        assert!(!a.and_parity(&b));
        let c = BitVec::from_indices(70, &[3, 68]);
        assert!(a.and_parity(&c));
    }

    #[test]
    fn echelon_rank() {
        let rows = vec![
            BitVec::from_indices(4, &[0, 1]),
            BitVec::from_indices(4, &[1, 2]),
            BitVec::from_indices(4, &[0, 2]),
            BitVec::from_indices(4, &[3]),
        ];
        let m = F2Matrix::from_rows(rows, 4);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn column_solver_solves_and_rejects() {
        // columns: c0 = (1,1,0), c1 = (0,1,1), c2 = (1,0,1)
        let cols = vec![
            BitVec::from_indices(3, &[0, 1]),
            BitVec::from_indices(3, &[1, 2]),
            BitVec::from_indices(3, &[0, 2]),
        ];
        let solver = ColumnSolver::new(&cols, 3);
        let t = BitVec::from_indices(3, &[0, 2]); // == c2, also c0+c1
        let x = solver.solve(&t).unwrap();
        // verify A x = t
        let mut acc = BitVec::zeros(3);
        for c in x.iter_ones() {
            acc.xor_assign(&cols[c]);
        }
        assert_eq!(acc, t);
        // (1,0,0) is outside the span (all columns have even weight)
        let bad = BitVec::from_indices(3, &[0]);
        assert!(solver.solve(&bad).is_none());
    }
}
