//! CSS quantum codes from the middle dimension of an even-dimensional
//! tessellation: qubits on middle cells, X checks from the boundary map one
//! dimension down, Z checks from the coboundary map one dimension up.

use crate::complex::Complex;
use crate::gf2::{bit_is_zero, bit_set, bit_support, bit_weight, bit_xor_into, BitMatrix, Echelon};
use crate::{Error, Result};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

pub struct CssCode {
    pub n: usize,
    pub k: usize,
    /// X-stabilizer checks (rows) on qubits (columns).
    pub hx: BitMatrix,
    /// Z-stabilizer checks (rows) on qubits (columns).
    pub hz: BitMatrix,
    pub rank_hx: usize,
    pub rank_hz: usize,
    ech_x: Echelon,
    ech_z: Echelon,
}

impl CssCode {
    /// Requires every X row to overlap every Z row evenly (the stabilizers
    /// commute); verified sparsely before any elimination.
    pub fn new(hx: BitMatrix, hz: BitMatrix) -> Result<CssCode> {
        if hx.cols != hz.cols {
            return Err(Error::Invalid(format!(
                "check matrices disagree on qubit count: {} vs {}",
                hx.cols, hz.cols
            )));
        }
        let n = hx.cols;
        // Sparse commutation check: per X row, count shared qubits with each
        // touched Z row; every count must be even.
        let z_cols = hz.transpose();
        for r in 0..hx.rows {
            let mut touched: Vec<u32> = Vec::new();
            for q in hx.row_support(r) {
                touched.extend(z_cols.row_support(q as usize));
            }
            touched.sort_unstable();
            let mut i = 0;
            while i < touched.len() {
                let run = touched[i..].iter().take_while(|&&x| x == touched[i]).count();
                if run % 2 == 1 {
                    return Err(Error::Verification(format!(
                        "X check {r} and Z check {} share an odd number of qubits",
                        touched[i]
                    )));
                }
                i += run;
            }
        }
        let ech_x = hx.echelon();
        let ech_z = hz.echelon();
        let (rank_hx, rank_hz) = (ech_x.rank(), ech_z.rank());
        if rank_hx + rank_hz > n {
            return Err(Error::Verification(format!(
                "check ranks {rank_hx}+{rank_hz} exceed qubit count {n}"
            )));
        }
        let k = n - rank_hx - rank_hz;
        Ok(CssCode { n, k, hx, hz, rank_hx, rank_hz, ech_x, ech_z })
    }

    /// Qubits on middle-dimension cells. X checks are the cells one
    /// dimension down (incidence = boundary), Z checks one dimension up.
    pub fn from_complex(c: &Complex) -> Result<CssCode> {
        if c.dim % 2 != 0 || c.dim < 2 {
            return Err(Error::Invalid(format!(
                "need an even manifold dimension >= 2 to place qubits on \
                 middle cells, got dimension {}",
                c.dim
            )));
        }
        let q = c.dim / 2;
        let hx = c.boundary_matrix(q);
        let hz = c.boundary_matrix(q + 1).transpose();
        CssCode::new(hx, hz)
    }

    /// Lower bound on the rate from check counts alone: every check can cut
    /// at most one logical dimension, so k >= n - (X rows) - (Z rows).
    pub fn rate_lower_bound(&self) -> f64 {
        1.0 - (self.hx.rows + self.hz.rows) as f64 / self.n as f64
    }

    pub fn x_stabilizer_space(&self) -> &Echelon {
        &self.ech_x
    }

    pub fn z_stabilizer_space(&self) -> &Echelon {
        &self.ech_z
    }

    /// Syndrome of an X-type (bit-flip) error pattern: one bit per Z check.
    pub fn syndrome_of_x_error(&self, e: &[u64]) -> Vec<u64> {
        self.hz.mul_vec(e)
    }

    /// True when an X-error pattern is a product of X stabilizers: zero
    /// syndrome and inside the row space of hx. The two conditions are
    /// checked independently.
    pub fn x_error_is_stabilizer(&self, e: &[u64]) -> bool {
        bit_is_zero(&self.syndrome_of_x_error(e)) && self.ech_x.contains(e)
    }

    /// Representatives of a basis of the X logical group: kernel vectors of
    /// hz that are independent modulo the row space of hx. Exactly k of them.
    pub fn logical_x_basis(&self) -> Vec<Vec<u64>> {
        let mut space = self.ech_x.clone();
        let mut out = Vec::with_capacity(self.k);
        for v in self.hz.kernel_basis() {
            if space.insert(&v) {
                out.push(v);
            }
        }
        assert_eq!(out.len(), self.k, "logical count disagrees with rank computation");
        out
    }

    /// Randomized search for a low-weight X logical (information-set style).
    /// Each restart draws a random qubit ordering, reduces a basis of
    /// ker(hz) to echelon form in that order, and inspects the basis rows:
    /// a codeword of weight w surfaces as a row whenever all but one of its
    /// qubits land outside the information set. Candidate rows that are not
    /// X stabilizers are polished by greedy descent over stabilizer rows
    /// (which cannot change the logical class) and the lightest survivor is
    /// kept. Deterministic for a fixed seed. Returns None for k = 0.
    pub fn min_logical_weight_search(
        &self,
        restarts: usize,
        seed: u64,
    ) -> Option<LogicalSearch> {
        if self.k == 0 {
            return None;
        }
        let generators = self.hz.kernel_basis();
        let dim = generators.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best: Option<LogicalSearch> = None;
        let mut perm: Vec<usize> = (0..self.n).collect();
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(dim);
        for restart in 0..restarts {
            perm.shuffle(&mut rng);
            rows.clear();
            rows.extend(generators.iter().cloned());
            let mut r = 0usize;
            for &c in &perm {
                let Some(src) = (r..dim).find(|&i| crate::gf2::bit_get(&rows[i], c)) else {
                    continue;
                };
                rows.swap(r, src);
                let (head, rest) = rows.split_at_mut(r);
                let (prow, tail) = rest.split_first_mut().expect("pivot row exists");
                for other in head.iter_mut().chain(tail.iter_mut()) {
                    if crate::gf2::bit_get(other, c) {
                        bit_xor_into(other, prow);
                    }
                }
                r += 1;
                if r == dim {
                    break;
                }
            }
            let mut order: Vec<usize> = (0..dim).collect();
            order.sort_unstable_by_key(|&i| bit_weight(&rows[i]));
            for &i in &order {
                let w = bit_weight(&rows[i]);
                if best.as_ref().is_some_and(|b| w >= b.weight) {
                    break;
                }
                if self.ech_x.contains(&rows[i]) {
                    continue;
                }
                let mut v = rows[i].clone();
                // Greedy polish: XOR in stabilizer rows while that helps.
                loop {
                    let mut improved = false;
                    for s in 0..self.hx.rows {
                        let cur = bit_weight(&v);
                        bit_xor_into(&mut v, self.hx.row(s));
                        if bit_weight(&v) < cur {
                            improved = true;
                        } else {
                            bit_xor_into(&mut v, self.hx.row(s));
                        }
                    }
                    if !improved {
                        break;
                    }
                }
                let w = bit_weight(&v);
                if best.as_ref().is_none_or(|b| w < b.weight) {
                    debug_assert!(bit_is_zero(&self.syndrome_of_x_error(&v)));
                    debug_assert!(!self.ech_x.contains(&v));
                    best = Some(LogicalSearch { weight: w, vector: v, found_at_restart: restart });
                }
            }
        }
        best
    }
}

#[derive(Clone)]
pub struct LogicalSearch {
    pub weight: usize,
    pub vector: Vec<u64>,
    pub found_at_restart: usize,
}

/// Self-describing on-disk form of a built code: construction descriptor,
/// complex summary, and both check matrices as sparse row lists.
#[derive(Serialize, Deserialize, Clone)]
pub struct CodeBundle {
    pub format_version: u32,
    pub descriptor: String,
    pub group_order: u64,
    pub covering_subgroup_order: u64,
    pub cell_counts: Vec<u64>,
    pub incidence_multiplicities: Vec<u64>,
    pub parabolic_image_orders: Vec<u64>,
    pub euler_characteristic: i64,
    pub n: u64,
    pub k: u64,
    pub rate_lower_bound: f64,
    pub hx: Vec<Vec<u32>>,
    pub hz: Vec<Vec<u32>>,
}

pub const BUNDLE_FORMAT_VERSION: u32 = 1;

impl CodeBundle {
    pub fn assemble(descriptor: &str, complex: &Complex, code: &CssCode) -> CodeBundle {
        CodeBundle {
            format_version: BUNDLE_FORMAT_VERSION,
            descriptor: descriptor.to_string(),
            group_order: complex.group_order as u64,
            covering_subgroup_order: complex.subgroup_order as u64,
            cell_counts: complex.counts.iter().map(|&c| c as u64).collect(),
            incidence_multiplicities: complex.mu[1..].to_vec(),
            parabolic_image_orders: complex.stab_orders.iter().map(|&c| c as u64).collect(),
            euler_characteristic: complex.chi(),
            n: code.n as u64,
            k: code.k as u64,
            rate_lower_bound: code.rate_lower_bound(),
            hx: (0..code.hx.rows).map(|r| code.hx.row_support(r)).collect(),
            hz: (0..code.hz.rows).map(|r| code.hz.row_support(r)).collect(),
        }
    }

    pub fn to_writer(&self, w: &mut impl Write) -> Result<()> {
        serde_json::to_writer(&mut *w, self)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        writeln!(w)?;
        Ok(())
    }

    pub fn from_reader(r: &mut impl Read) -> Result<CodeBundle> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad code bundle: {e}")))
    }

    /// Rebuild the code from the stored matrices and confirm every stored
    /// claim that can be recomputed: commutation, ranks, k, cell-count
    /// consistency. Returns the verified code.
    pub fn verify(&self) -> Result<CssCode> {
        if self.format_version != BUNDLE_FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported bundle format version {}",
                self.format_version
            )));
        }
        let n = self.n as usize;
        for (name, rows) in [("hx", &self.hx), ("hz", &self.hz)] {
            for (r, list) in rows.iter().enumerate() {
                if list.iter().any(|&c| c as usize >= n) {
                    return Err(Error::Verification(format!(
                        "{name} row {r} indexes a qubit outside 0..{n}"
                    )));
                }
            }
        }
        let hx = BitMatrix::from_rows(n, &self.hx);
        let hz = BitMatrix::from_rows(n, &self.hz);
        let code = CssCode::new(hx, hz)?;
        if code.k as u64 != self.k {
            return Err(Error::Verification(format!(
                "bundle claims k = {}, matrices give k = {}",
                self.k, code.k
            )));
        }
        let chi: i64 = self
            .cell_counts
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum();
        if chi != self.euler_characteristic {
            return Err(Error::Verification(format!(
                "bundle euler characteristic {} disagrees with cell counts (sum {chi})",
                self.euler_characteristic
            )));
        }
        let mid = (self.cell_counts.len() - 1) / 2;
        if self.cell_counts.get(mid) != Some(&self.n) {
            return Err(Error::Verification(format!(
                "qubit count {} is not the middle cell count",
                self.n
            )));
        }
        if self.cell_counts[mid - 1] != code.hx.rows as u64
            || self.cell_counts[mid + 1] != code.hz.rows as u64
        {
            return Err(Error::Verification(
                "check counts disagree with the neighboring cell counts".into(),
            ));
        }
        Ok(code)
    }
}

/// Pack a sparse list of qubit indices into a bit vector of length n.
pub fn pack_support(n: usize, support: &[u32]) -> Vec<u64> {
    let mut v = vec![0u64; crate::gf2::words_for(n)];
    for &i in support {
        assert!((i as usize) < n);
        bit_set(&mut v, i as usize);
    }
    v
}

pub fn unpack_support(n: usize, v: &[u64]) -> Vec<u32> {
    bit_support(v, n)
}
