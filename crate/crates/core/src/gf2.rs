//! Dense bit-packed linear algebra over GF(2).
//!
//! Matrices pack 64 columns per word. Elimination is word-parallel; at the
//! scales this crate produces (up to ~2*10^4 columns, ~10^4 rows) a full
//! reduced echelon form fits comfortably in memory and runs in seconds.

use crate::{Error, Result};
use std::io::{BufRead, Write};

pub fn words_for(cols: usize) -> usize {
    cols.div_ceil(64)
}

pub fn bit_get(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

pub fn bit_set(v: &mut [u64], i: usize) {
    v[i / 64] |= 1 << (i % 64);
}

pub fn bit_flip(v: &mut [u64], i: usize) {
    v[i / 64] ^= 1 << (i % 64);
}

pub fn bit_weight(v: &[u64]) -> usize {
    v.iter().map(|w| w.count_ones() as usize).sum()
}

pub fn bit_xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

pub fn bit_is_zero(v: &[u64]) -> bool {
    v.iter().all(|&w| w == 0)
}

/// Indices of set bits, ascending.
pub fn bit_support(v: &[u64], cols: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for (wi, &w) in v.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let b = w.trailing_zeros() as usize;
            let idx = wi * 64 + b;
            if idx < cols {
                out.push(idx as u32);
            }
            w &= w - 1;
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    pub rows: usize,
    pub cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitMatrix({}x{}, weight {})", self.rows, self.cols, bit_weight(&self.data))
    }
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> BitMatrix {
        let words = words_for(cols);
        BitMatrix { rows, cols, words, data: vec![0; rows * words] }
    }

    /// Build from per-row column-index lists.
    pub fn from_rows(cols: usize, rows: &[Vec<u32>]) -> BitMatrix {
        let mut m = BitMatrix::zero(rows.len(), cols);
        for (r, list) in rows.iter().enumerate() {
            for &c in list {
                m.set(r, c as usize);
            }
        }
        m
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.words..(r + 1) * self.words]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        bit_get(self.row(r), c)
    }

    pub fn set(&mut self, r: usize, c: usize) {
        let w = self.words;
        bit_set(&mut self.data[r * w..(r + 1) * w], c);
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        let w = self.words;
        bit_flip(&mut self.data[r * w..(r + 1) * w], c);
    }

    pub fn row_support(&self, r: usize) -> Vec<u32> {
        bit_support(self.row(r), self.cols)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_support(r) {
                t.set(c as usize, r);
            }
        }
        t
    }

    /// y = M x for a packed vector x of length `cols`; output length `rows`.
    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.words);
        let mut y = vec![0u64; words_for(self.rows)];
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.row(r).iter().zip(x) {
                acc ^= a & b;
            }
            if acc.count_ones() & 1 == 1 {
                bit_set(&mut y, r);
            }
        }
        y
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Reduced row echelon form with pivot bookkeeping.
    pub fn echelon(&self) -> Echelon {
        let words = self.words;
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut pivots: Vec<u32> = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(src) = (r..rows.len()).find(|&i| bit_get(&rows[i], c)) else {
                continue;
            };
            rows.swap(r, src);
            let (head, tail) = rows.split_at_mut(r + 1);
            let prow = &head[r];
            for other in tail.iter_mut() {
                if bit_get(other, c) {
                    bit_xor_into(other, prow);
                }
            }
            pivots.push(c as u32);
            r += 1;
        }
        rows.truncate(r);
        // Back-substitution: clear pivot columns above each pivot row.
        for i in (0..r).rev() {
            let c = pivots[i] as usize;
            let (upper, lower) = rows.split_at_mut(i);
            let prow = &lower[0];
            for other in upper.iter_mut() {
                if bit_get(other, c) {
                    bit_xor_into(other, prow);
                }
            }
        }
        Echelon { cols: self.cols, words, rows, pivots }
    }

    /// Basis of the right kernel {x : Mx = 0}, one packed vector per free
    /// column of the reduced echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let ech = self.echelon();
        let words = self.words;
        let mut is_pivot = vec![false; self.cols];
        for &c in &ech.pivots {
            is_pivot[c as usize] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - ech.rank());
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = vec![0u64; words];
            bit_set(&mut v, f);
            for (i, &c) in ech.pivots.iter().enumerate() {
                if bit_get(&ech.rows[i], f) {
                    bit_set(&mut v, c as usize);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Parity-check text export: header "n m" (columns, rows), then one line
    /// per row with the sorted column indices of its nonzero entries.
    pub fn write_pchk(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "{} {}", self.cols, self.rows)?;
        for r in 0..self.rows {
            let support = self.row_support(r);
            let parts: Vec<String> = support.iter().map(|c| c.to_string()).collect();
            writeln!(w, "{}", parts.join(" "))?;
        }
        Ok(())
    }

    pub fn read_pchk(r: &mut impl BufRead) -> Result<BitMatrix> {
        let mut header = String::new();
        r.read_line(&mut header)?;
        let mut it = header.split_whitespace();
        let bad = || Error::Parse("bad parity-check header".into());
        let cols: usize = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let rows: usize = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let mut m = BitMatrix::zero(rows, cols);
        for ri in 0..rows {
            let mut line = String::new();
            if r.read_line(&mut line)? == 0 {
                return Err(Error::Parse(format!("parity-check row {ri} missing")));
            }
            for tok in line.split_whitespace() {
                let c: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad index {tok:?} in row {ri}")))?;
                if c >= cols {
                    return Err(Error::Parse(format!("index {c} out of range in row {ri}")));
                }
                m.set(ri, c);
            }
        }
        Ok(m)
    }

    /// MacKay alist export (1-based indices, zero-padded to the maxima).
    pub fn write_alist(&self, w: &mut impl Write) -> Result<()> {
        let t = self.transpose();
        let col_w: Vec<usize> = (0..self.cols).map(|c| bit_weight(t.row(c))).collect();
        let row_w: Vec<usize> = (0..self.rows).map(|r| bit_weight(self.row(r))).collect();
        let max_c = col_w.iter().copied().max().unwrap_or(0);
        let max_r = row_w.iter().copied().max().unwrap_or(0);
        writeln!(w, "{} {}", self.cols, self.rows)?;
        writeln!(w, "{max_c} {max_r}")?;
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(w, "{}", join(&col_w))?;
        writeln!(w, "{}", join(&row_w))?;
        for c in 0..self.cols {
            let mut e: Vec<usize> = t.row_support(c).iter().map(|&r| r as usize + 1).collect();
            e.resize(max_c, 0);
            writeln!(w, "{}", join(&e))?;
        }
        for r in 0..self.rows {
            let mut e: Vec<usize> = self.row_support(r).iter().map(|&c| c as usize + 1).collect();
            e.resize(max_r, 0);
            writeln!(w, "{}", join(&e))?;
        }
        Ok(())
    }
}

/// Reduced echelon form of a matrix; answers row-space membership queries in
/// O(rank * words) without repeating the elimination.
#[derive(Clone)]
pub struct Echelon {
    pub cols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<u32>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce v in place by the echelon rows; result is the canonical coset
    /// representative (zero iff v lies in the row space).
    pub fn reduce_in_place(&self, v: &mut [u64]) {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if bit_get(v, c as usize) {
                bit_xor_into(v, row);
            }
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut tmp = v.to_vec();
        self.reduce_in_place(&mut tmp);
        bit_is_zero(&tmp)
    }

    /// Insert a vector if independent of the current rows, keeping the
    /// reduced form. Returns false when v already lies in the span.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut v = v.to_vec();
        self.reduce_in_place(&mut v);
        let Some(lead) = bit_support(&v, self.cols).first().copied() else {
            return false;
        };
        for row in self.rows.iter_mut() {
            if bit_get(row, lead as usize) {
                bit_xor_into(row, &v);
            }
        }
        // Keep rows ordered by pivot column.
        let pos = self.pivots.partition_point(|&c| c < lead);
        self.rows.insert(pos, v);
        self.pivots.insert(pos, lead);
        true
    }

    pub fn empty(cols: usize) -> Echelon {
        Echelon { cols, words: words_for(cols), rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn words(&self) -> usize {
        self.words
    }
}
