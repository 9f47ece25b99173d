//! Syndrome decoders on sparse check matrices.
//!
//! * [`ca_decode`] — synchronous cellular-automaton flip decoder: every
//!   qubit whose incident checks are violated by strict majority flips, all
//!   at once, while the syndrome weight strictly decreases.
//! * [`bp_decode`] / [`bp_posteriors`] — log-domain flooding belief
//!   propagation with the numerically exact two-term box-plus rule; on
//!   cycle-free graphs the posteriors reproduce exact marginals to floating
//!   point accuracy.
//! * [`brute_force_marginals`] — exact posterior marginals by Gray-code
//!   enumeration, the oracle the belief propagation is measured against.

use crate::gf2::{bit_flip, bit_get, bit_set, bit_weight, words_for, BitMatrix};
use crate::{Error, Result};
use rand::Rng;

/// Bipartite adjacency of a check matrix with flat edge indexing:
/// check-major edge arrays for message passing, a qubit-major view for
/// gathering, and check ids per qubit for syndrome updates.
pub struct TannerGraph {
    pub n: usize,
    pub m: usize,
    check_start: Vec<usize>,
    edge_qubit: Vec<u32>,
    qubit_start: Vec<usize>,
    qubit_check: Vec<u32>,
    qubit_edge: Vec<u32>,
}

impl TannerGraph {
    pub fn from_matrix(h: &BitMatrix) -> TannerGraph {
        let (m, n) = (h.rows, h.cols);
        let mut check_start = Vec::with_capacity(m + 1);
        let mut edge_qubit: Vec<u32> = Vec::new();
        check_start.push(0);
        for r in 0..m {
            edge_qubit.extend(h.row_support(r));
            check_start.push(edge_qubit.len());
        }
        let mut deg = vec![0usize; n];
        for &q in &edge_qubit {
            deg[q as usize] += 1;
        }
        let mut qubit_start = Vec::with_capacity(n + 1);
        qubit_start.push(0usize);
        for q in 0..n {
            qubit_start.push(qubit_start[q] + deg[q]);
        }
        let mut fill = qubit_start.clone();
        let mut qubit_check = vec![0u32; edge_qubit.len()];
        let mut qubit_edge = vec![0u32; edge_qubit.len()];
        for c in 0..m {
            for e in check_start[c]..check_start[c + 1] {
                let q = edge_qubit[e] as usize;
                qubit_check[fill[q]] = c as u32;
                qubit_edge[fill[q]] = e as u32;
                fill[q] += 1;
            }
        }
        TannerGraph { n, m, check_start, edge_qubit, qubit_start, qubit_check, qubit_edge }
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.check_start[c + 1] - self.check_start[c]
    }

    pub fn qubit_degree(&self, q: usize) -> usize {
        self.qubit_start[q + 1] - self.qubit_start[q]
    }

    pub fn checks_of(&self, q: usize) -> &[u32] {
        &self.qubit_check[self.qubit_start[q]..self.qubit_start[q + 1]]
    }

    pub fn qubits_of(&self, c: usize) -> &[u32] {
        &self.edge_qubit[self.check_start[c]..self.check_start[c + 1]]
    }

    /// Packed syndrome (m bits) of a packed error pattern (n bits).
    pub fn syndrome(&self, e: &[u64]) -> Vec<u64> {
        let mut s = vec![0u64; words_for(self.m)];
        for c in 0..self.m {
            let parity = self
                .qubits_of(c)
                .iter()
                .filter(|&&q| bit_get(e, q as usize))
                .count();
            if parity % 2 == 1 {
                bit_set(&mut s, c);
            }
        }
        s
    }
}

pub struct DecodeOutcome {
    /// Packed correction pattern, n bits.
    pub correction: Vec<u64>,
    /// True when the correction reproduces the given syndrome exactly.
    pub converged: bool,
    pub iterations: usize,
}

/// Cellular-automaton flip decoder. Each sweep evaluates the strict-majority
/// rule for all qubits against the current residual syndrome and applies all
/// flips synchronously; a sweep that fails to strictly lower the syndrome
/// weight is undone and decoding stops.
pub fn ca_decode(g: &TannerGraph, syndrome: &[u64], max_sweeps: usize) -> DecodeOutcome {
    let mut correction = vec![0u64; words_for(g.n)];
    let mut resid = syndrome.to_vec();
    let mut w = bit_weight(&resid);
    let mut sweeps = 0usize;
    let mut flips: Vec<u32> = Vec::new();
    while w > 0 && sweeps < max_sweeps {
        flips.clear();
        for q in 0..g.n {
            let viol = g.checks_of(q).iter().filter(|&&c| bit_get(&resid, c as usize)).count();
            if 2 * viol > g.qubit_degree(q) {
                flips.push(q as u32);
            }
        }
        if flips.is_empty() {
            break;
        }
        for &q in &flips {
            bit_flip(&mut correction, q as usize);
            for &c in g.checks_of(q as usize) {
                bit_flip(&mut resid, c as usize);
            }
        }
        sweeps += 1;
        let nw = bit_weight(&resid);
        if nw >= w {
            // Undo the non-improving sweep.
            for &q in &flips {
                bit_flip(&mut correction, q as usize);
                for &c in g.checks_of(q as usize) {
                    bit_flip(&mut resid, c as usize);
                }
            }
            break;
        }
        w = nw;
    }
    DecodeOutcome { correction, converged: w == 0, iterations: sweeps }
}

/// Exact box-plus: 2 artanh(tanh(a/2) tanh(b/2)), evaluated in the stable
/// min-sum-with-corrections form (the corrections take the *signed* sum and
/// difference). The identity element is +infinity; an infinite argument
/// passes the other through up to sign.
fn boxplus(a: f64, b: f64) -> f64 {
    if a.is_infinite() {
        return if a > 0.0 { b } else { -b };
    }
    if b.is_infinite() {
        return if b > 0.0 { a } else { -a };
    }
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p()
        - (-(a - b).abs()).exp().ln_1p()
}

const LLR_CLAMP: f64 = 30.0;
/// Finite stand-in for a fully pinned check message (degree-1 checks), large
/// enough to force the posterior to exactly 0 or 1 in double precision.
const CHECK_MSG_CAP: f64 = 1e6;

struct BpState<'g> {
    g: &'g TannerGraph,
    prior: f64,
    c2q: Vec<f64>,
    q2c: Vec<f64>,
    scratch: Vec<f64>,
    totals: Vec<f64>,
}

impl<'g> BpState<'g> {
    fn new(g: &'g TannerGraph, p: f64) -> BpState<'g> {
        assert!(p > 0.0 && p < 0.5, "prior flip probability must lie in (0, 0.5)");
        let prior = ((1.0 - p) / p).ln();
        let e = g.edge_qubit.len();
        let max_deg = (0..g.m).map(|c| g.check_degree(c)).max().unwrap_or(0);
        BpState {
            g,
            prior,
            c2q: vec![0.0; e],
            q2c: vec![prior; e],
            scratch: vec![0.0; 2 * (max_deg + 1)],
            totals: vec![0.0; g.n],
        }
    }

    /// One flooding round; leaves posterior totals (prior + all check
    /// messages) in `totals`.
    fn round(&mut self, syndrome: &[u64]) {
        let g = self.g;
        for c in 0..g.m {
            let lo = g.check_start[c];
            let hi = g.check_start[c + 1];
            let d = hi - lo;
            let (pre, suf) = self.scratch.split_at_mut(d + 1);
            pre[0] = f64::INFINITY;
            suf[d] = f64::INFINITY;
            for i in 0..d {
                pre[i + 1] = boxplus(pre[i], self.q2c[lo + i]);
                suf[d - 1 - i] = boxplus(suf[d - i], self.q2c[hi - 1 - i]);
            }
            let sign = if bit_get(syndrome, c) { -1.0 } else { 1.0 };
            for i in 0..d {
                self.c2q[lo + i] =
                    (sign * boxplus(pre[i], suf[i + 1])).clamp(-CHECK_MSG_CAP, CHECK_MSG_CAP);
            }
        }
        for q in 0..g.n {
            let lo = g.qubit_start[q];
            let hi = g.qubit_start[q + 1];
            let mut total = self.prior;
            for i in lo..hi {
                total += self.c2q[self.g.qubit_edge[i] as usize];
            }
            self.totals[q] = total;
            for i in lo..hi {
                let e = self.g.qubit_edge[i] as usize;
                self.q2c[e] = (total - self.c2q[e]).clamp(-LLR_CLAMP, LLR_CLAMP);
            }
        }
    }

    fn hard_decision(&self, out: &mut [u64]) {
        out.iter_mut().for_each(|w| *w = 0);
        for (q, &t) in self.totals.iter().enumerate() {
            if t < 0.0 {
                bit_set(out, q);
            }
        }
    }
}

/// Belief-propagation decoder for a syndrome under an iid flip prior p.
/// Runs flooding rounds until the hard-decision residual syndrome reaches
/// zero or stops strictly improving; returns the best round's decision.
pub fn bp_decode(g: &TannerGraph, syndrome: &[u64], p: f64, max_rounds: usize) -> DecodeOutcome {
    let nwords = words_for(g.n);
    if bit_weight(syndrome) == 0 {
        return DecodeOutcome { correction: vec![0; nwords], converged: true, iterations: 0 };
    }
    let mut st = BpState::new(g, p);
    let mut hard = vec![0u64; nwords];
    let mut best = vec![0u64; nwords];
    let mut best_w = bit_weight(syndrome);
    let mut prev_w = usize::MAX;
    let mut rounds = 0usize;
    for round in 1..=max_rounds {
        rounds = round;
        st.round(syndrome);
        st.hard_decision(&mut hard);
        let resid = g.syndrome(&hard);
        let w = resid
            .iter()
            .zip(syndrome)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum::<usize>();
        if w < best_w {
            best_w = w;
            best.copy_from_slice(&hard);
        }
        if w == 0 || w >= prev_w {
            break;
        }
        prev_w = w;
    }
    DecodeOutcome { correction: best, converged: best_w == 0, iterations: rounds }
}

/// Posterior flip probabilities P(e_q = 1 | syndrome) after a fixed number
/// of flooding rounds. Exact on cycle-free graphs once the round count
/// covers the graph diameter.
pub fn bp_posteriors(g: &TannerGraph, syndrome: &[u64], p: f64, rounds: usize) -> Vec<f64> {
    let mut st = BpState::new(g, p);
    for _ in 0..rounds {
        st.round(syndrome);
    }
    st.totals.iter().map(|&t| 1.0 / (1.0 + t.exp())).collect()
}

struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn new() -> Kahan {
        Kahan { sum: 0.0, comp: 0.0 }
    }

    fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Exact posterior marginals P(e_q = 1 | H e = syndrome) under an iid flip
/// prior, by full enumeration in Gray-code order. Limited to n <= 22 and
/// m <= 64; errors if the syndrome is not attainable.
pub fn brute_force_marginals(g: &TannerGraph, syndrome: &[u64], p: f64) -> Result<Vec<f64>> {
    if g.n > 22 {
        return Err(Error::Resource(format!(
            "exact marginal enumeration supports at most 22 qubits, got {}",
            g.n
        )));
    }
    if g.m > 64 {
        return Err(Error::Resource(format!(
            "exact marginal enumeration supports at most 64 checks, got {}",
            g.m
        )));
    }
    let mut cols = vec![0u64; g.n];
    for c in 0..g.m {
        for &q in g.qubits_of(c) {
            cols[q as usize] ^= 1 << c;
        }
    }
    let mut target = 0u64;
    for c in 0..g.m {
        if bit_get(syndrome, c) {
            target |= 1 << c;
        }
    }
    // Weight lookup by error cardinality keeps the per-state work constant.
    let w_by_count: Vec<f64> =
        (0..=g.n).map(|k| p.powi(k as i32) * (1.0 - p).powi((g.n - k) as i32)).collect();

    let mut total = Kahan::new();
    let mut marg: Vec<Kahan> = (0..g.n).map(|_| Kahan::new()).collect();
    let mut e = 0u64;
    let mut syn = 0u64;
    let mut count = 0usize;
    let steps = 1u64 << g.n;
    for s in 0..steps {
        if s > 0 {
            let j = s.trailing_zeros() as usize;
            e ^= 1 << j;
            syn ^= cols[j];
            count = if e >> j & 1 == 1 { count + 1 } else { count - 1 };
        }
        if syn == target {
            let w = w_by_count[count];
            total.add(w);
            let mut bits = e;
            while bits != 0 {
                let q = bits.trailing_zeros() as usize;
                marg[q].add(w);
                bits &= bits - 1;
            }
        }
    }
    if total.sum == 0.0 {
        return Err(Error::Invalid("syndrome is not attainable by any error".into()));
    }
    Ok(marg.iter().map(|m| m.sum / total.sum).collect())
}

/// Random cycle-free Tanner graph with every check of degree >= 2: grows by
/// either hanging a new degree-2 check (one existing qubit, one new qubit)
/// or widening an existing check with a new leaf qubit. Test scaffolding for
/// decoder/oracle comparisons.
pub fn random_tree_matrix(rng: &mut impl Rng, n_qubits: usize) -> BitMatrix {
    assert!(n_qubits >= 2);
    let mut rows: Vec<Vec<u32>> = vec![vec![0, 1]];
    let mut nq = 2u32;
    while (nq as usize) < n_qubits {
        if rng.random_bool(0.6) {
            let attach = rng.random_range(0..nq);
            rows.push(vec![attach, nq]);
        } else {
            let c = rng.random_range(0..rows.len());
            rows[c].push(nq);
        }
        nq += 1;
    }
    for r in rows.iter_mut() {
        r.sort_unstable();
    }
    BitMatrix::from_rows(n_qubits, &rows)
}
