//! Dense row-major matrices over GF(2^q) and the linear algebra the codecs
//! build on: products, rank, and full Gauss-Jordan inversion.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::field::{Field, FieldElem, FieldSpec};
use crate::rng::{uniform_symbol, Rng};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    spec: FieldSpec,
    data: Vec<FieldElem>,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize, spec: FieldSpec) -> Self {
        FieldMatrix { rows, cols, spec, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, spec: FieldSpec) -> Self {
        let mut m = Self::zeros(n, n, spec);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Row-major construction; panics if data length or symbol range is off.
    pub fn from_vec(rows: usize, cols: usize, spec: FieldSpec, data: Vec<FieldElem>) -> Self {
        assert_eq!(data.len(), rows * cols);
        let g = spec.size();
        assert!(data.iter().all(|&v| (v as u32) < g), "symbol out of field range");
        FieldMatrix { rows, cols, spec, data }
    }

    /// i.i.d. uniform symbols over all 2^q values, deterministic under seed.
    pub fn random(rows: usize, cols: usize, spec: FieldSpec, rng: &mut Rng) -> Self {
        let data = (0..rows * cols).map(|_| uniform_symbol(rng, spec.q)).collect();
        FieldMatrix { rows, cols, spec, data }
    }

    /// n x n diagonal matrix with ones exactly where `mask` is true.
    pub fn diag_from_mask(mask: &[bool], spec: FieldSpec) -> Self {
        let mut m = Self::zeros(mask.len(), mask.len(), spec);
        for (i, &kept) in mask.iter().enumerate() {
            if kept {
                m.set(i, i, 1);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = FieldMatrix::zeros(self.cols, self.rows, self.spec);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Standard matrix product over the field.
    pub fn mat_mul(&self, other: &FieldMatrix, field: &Field) -> Result<FieldMatrix, Error> {
        debug_assert_eq!(self.spec, field.spec());
        if self.cols != other.rows || self.spec != other.spec {
            return Err(Error::ShapeError {
                expected: (self.cols, other.cols),
                got: (other.rows, other.cols),
            });
        }
        let mut out = FieldMatrix::zeros(self.rows, other.cols, self.spec);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = field.mul(a, other.get(k, c));
                    out.set(r, c, out.get(r, c) ^ prod);
                }
            }
        }
        Ok(out)
    }

    /// Rank over GF(2^q) by row reduction on a scratch copy.
    pub fn rank(&self, field: &Field) -> usize {
        let mut work = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            // find a pivot at or below `rank`
            let Some(p) = (rank..rows).find(|&r| work[r * cols + col] != 0) else {
                continue;
            };
            work.swap_chunks(p, rank, cols);
            let inv = field.inv(work[rank * cols + col]).expect("pivot nonzero");
            for c in col..cols {
                work[rank * cols + c] = field.mul(work[rank * cols + c], inv);
            }
            for r in 0..rows {
                if r == rank {
                    continue;
                }
                let f = work[r * cols + col];
                if f == 0 {
                    continue;
                }
                for c in col..cols {
                    let prod = field.mul(f, work[rank * cols + c]);
                    work[r * cols + c] ^= prod;
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Full Gauss-Jordan inverse of a square matrix; `None` if singular.
    pub fn inverse(&self, field: &Field) -> Option<FieldMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = FieldMatrix::identity(n, self.spec);
        for col in 0..n {
            let p = (col..n).find(|&r| a.get(r, col) != 0)?;
            for c in 0..n {
                let (x, y) = (a.get(p, c), a.get(col, c));
                a.set(p, c, y);
                a.set(col, c, x);
                let (x, y) = (inv.get(p, c), inv.get(col, c));
                inv.set(p, c, y);
                inv.set(col, c, x);
            }
            let f = field.inv(a.get(col, col)).expect("pivot nonzero");
            for c in 0..n {
                a.set(col, c, field.mul(a.get(col, c), f));
                inv.set(col, c, field.mul(inv.get(col, c), f));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col);
                if f == 0 {
                    continue;
                }
                for c in 0..n {
                    let pa = field.mul(f, a.get(col, c));
                    a.set(r, c, a.get(r, c) ^ pa);
                    let pi = field.mul(f, inv.get(col, c));
                    inv.set(r, c, inv.get(r, c) ^ pi);
                }
            }
        }
        Some(inv)
    }
}

trait SwapChunks {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize);
}

impl SwapChunks for Vec<FieldElem> {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize) {
        if a == b {
            return;
        }
        for c in 0..width {
            self.swap(a * width + c, b * width + c);
        }
    }
}
