//! Finite group enumeration.
//!
//! Two engines produce the same artifact, a [`GroupAction`]: the regular
//! action of a finite group on itself, with one permutation per generator.
//!
//! * [`matrix_group_closure`] — breadth-first closure of matrix generators
//!   over a small finite field, optionally graded by word-length parity.
//! * [`todd_coxeter`] — coset enumeration of a finitely presented group
//!   (HLT strategy with coincidence handling and lookahead), for quotients
//!   given by relator words rather than matrices.
//!
//! Both outputs are standardized by a breadth-first renumbering from the
//! identity with generators in index order, so two enumerations of the same
//! marked group yield byte-identical tables.

use crate::algebra::FqTables;
use crate::coxeter::FMat;
use crate::{Error, Result};
use std::collections::HashMap;

pub const NO_GEN: u8 = u8::MAX;

/// Regular action of a finite group: `act[g][x]` is the product x * a_g.
/// Point 0 is the identity. `parent` records the breadth-first tree used to
/// reconstruct a canonical word for every element.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub ngens: usize,
    pub size: usize,
    act: Vec<Vec<u32>>,
    parent: Vec<(u32, u8)>,
}

impl GroupAction {
    /// Build from raw permutation tables by renumbering points in
    /// breadth-first order from `start`; requires a transitive action.
    pub fn standardize(ngens: usize, raw: &[Vec<u32>], start: u32) -> GroupAction {
        let size = raw[0].len();
        let mut index = vec![u32::MAX; size];
        let mut order: Vec<u32> = Vec::with_capacity(size);
        let mut parent = vec![(0u32, NO_GEN); size];
        index[start as usize] = 0;
        order.push(start);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            for g in 0..ngens {
                let y = raw[g][x as usize];
                if index[y as usize] == u32::MAX {
                    index[y as usize] = order.len() as u32;
                    parent[order.len()] = (index[x as usize], g as u8);
                    order.push(y);
                }
            }
            head += 1;
        }
        assert_eq!(order.len(), size, "action is not transitive");
        let mut act = vec![vec![0u32; size]; ngens];
        for g in 0..ngens {
            for (new_x, &old_x) in order.iter().enumerate() {
                act[g][new_x] = index[raw[g][old_x as usize] as usize];
            }
        }
        GroupAction { ngens, size, act, parent }
    }

    pub fn apply(&self, g: u8, x: u32) -> u32 {
        self.act[g as usize][x as usize]
    }

    pub fn table(&self, g: u8) -> &[u32] {
        &self.act[g as usize]
    }

    /// x * (a_{w0} a_{w1} ...).
    pub fn apply_word(&self, x: u32, w: &[u8]) -> u32 {
        w.iter().fold(x, |y, &g| self.apply(g, y))
    }

    pub fn element_of_word(&self, w: &[u8]) -> u32 {
        self.apply_word(0, w)
    }

    /// Canonical (breadth-first shortest) word for element x.
    pub fn word_of(&self, x: u32) -> Vec<u8> {
        let mut w = Vec::new();
        let mut cur = x;
        while cur != 0 {
            let (p, g) = self.parent[cur as usize];
            w.push(g);
            cur = p;
        }
        w.reverse();
        w
    }

    /// Left-multiplication tables: `left[g][x] = a_g * x`, derived from the
    /// breadth-first tree (if x = p * a_j then a_g x = (a_g p) * a_j).
    pub fn left_tables(&self) -> Vec<Vec<u32>> {
        let mut left = vec![vec![0u32; self.size]; self.ngens];
        for g in 0..self.ngens {
            left[g][0] = self.apply(g as u8, 0);
            for x in 1..self.size {
                let (p, j) = self.parent[x];
                left[g][x] = self.apply(j, left[g][p as usize]);
            }
        }
        left
    }

    /// a_{w0} a_{w1} ... * x via left tables.
    pub fn left_apply_word(left: &[Vec<u32>], w: &[u8], x: u32) -> u32 {
        w.iter().rev().fold(x, |y, &g| left[g as usize][y as usize])
    }

    /// Elements of the subgroup generated by the given words, ascending.
    pub fn subgroup_closure(&self, gens: &[Vec<u8>]) -> Vec<u32> {
        let mut seen = vec![false; self.size];
        seen[0] = true;
        let mut members = vec![0u32];
        let mut head = 0;
        while head < members.len() {
            let x = members[head];
            for w in gens {
                let y = self.apply_word(x, w);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    members.push(y);
                }
            }
            head += 1;
        }
        members.sort_unstable();
        members
    }

    /// Check that every relator acts trivially on every point.
    pub fn satisfies_relators(&self, relators: &[Vec<u8>]) -> bool {
        relators
            .iter()
            .all(|r| (0..self.size as u32).all(|x| self.apply_word(x, r) == x))
    }
}

fn mat_key(m: &FMat, parity: Option<u8>) -> [u8; 32] {
    let mut key = [0u8; 32];
    key[..m.e.len()].copy_from_slice(&m.e);
    if let Some(p) = parity {
        key[m.e.len()] = p;
    }
    key
}

/// Breadth-first closure of matrix generators under right multiplication.
///
/// With `graded` set, points are (matrix, word-length parity) pairs: the
/// closure then realizes the quotient of the abstract group by the
/// even-length part of the reduction kernel, which doubles the plain order
/// exactly when the kernel contains odd-length elements.
pub fn matrix_group_closure(
    gens: &[FMat],
    tables: &FqTables,
    graded: bool,
    cap: usize,
) -> Result<GroupAction> {
    let n = gens[0].n;
    assert!(n * n < 32, "matrix too large for closure key");
    let ngens = gens.len();
    let mut index: HashMap<[u8; 32], u32> = HashMap::new();
    let mut mats: Vec<FMat> = Vec::new();
    let mut parities: Vec<u8> = Vec::new();
    let mut act: Vec<Vec<u32>> = vec![Vec::new(); ngens];

    let id = FMat::identity(n, tables);
    index.insert(mat_key(&id, graded.then_some(0)), 0);
    mats.push(id);
    parities.push(0);

    let mut head = 0usize;
    while head < mats.len() {
        for g in 0..ngens {
            let m = mats[head].mul(&gens[g], tables);
            let parity = parities[head] ^ 1;
            let key = mat_key(&m, graded.then_some(parity));
            let next_id = mats.len() as u32;
            let id = *index.entry(key).or_insert_with(|| {
                mats.push(m);
                parities.push(parity);
                next_id
            });
            act[g].push(id);
        }
        head += 1;
        if mats.len() > cap {
            return Err(Error::Resource(format!(
                "matrix group closure exceeded the cap of {cap} elements"
            )));
        }
    }
    Ok(GroupAction::standardize(ngens, &act, 0))
}

/// All pairwise products a_i a_j (i != j) of the generators: the standard
/// generating set of the orientation-preserving (rotation) subgroup image.
pub fn rotation_generators(gens: &[FMat], tables: &FqTables) -> Vec<FMat> {
    let mut out = Vec::new();
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            if i != j {
                out.push(gens[i].mul(&gens[j], tables));
            }
        }
    }
    out
}

const UNDEF: u32 = u32::MAX;

/// Coset enumeration for a presentation on involutive generators, trivial
/// subgroup (regular representation). HLT strategy: every coset is scanned
/// against every relator, defining new cosets to complete each scan;
/// coincidences are merged through a union-find with a processing queue.
/// Returns a resource error if the live coset count exceeds `cap`.
pub fn todd_coxeter(ngens: usize, relators: &[Vec<u8>], cap: usize) -> Result<GroupAction> {
    let mut t = CosetTable::new(ngens);
    let mut next = 0usize;
    while next < t.nrows() {
        if !t.alive(next as u32) {
            next += 1;
            continue;
        }
        for r in relators {
            t.scan_and_fill(next as u32, r);
            if !t.alive(next as u32) {
                break;
            }
        }
        next += 1;
        if t.live > cap {
            // Last-resort lookahead: force pending coincidences without new
            // definitions, then compact; fail only if still over the cap.
            t.lookahead(relators);
            next = t.compact(next);
            if t.live > cap {
                return Err(Error::Resource(format!(
                    "coset enumeration exceeded the cap of {cap} live cosets \
                     (is this quotient finite?)"
                )));
            }
        } else if t.nrows() - t.live > t.live.max(1_000_000) {
            next = t.compact(next);
        }
    }

    // The table is complete; run a full verification scan before trusting it.
    for c in 0..t.nrows() as u32 {
        if !t.alive(c) {
            continue;
        }
        for g in 0..ngens {
            assert_ne!(t.get(c, g as u8), UNDEF, "incomplete coset table");
        }
        for r in relators {
            let end = r.iter().fold(c, |x, &g| t.resolve(t.get(x, g)));
            assert_eq!(end, c, "coset table violates a relator");
        }
    }
    t.compact(0);
    let raw: Vec<Vec<u32>> = (0..ngens)
        .map(|g| (0..t.nrows() as u32).map(|c| t.get(c, g as u8)).collect())
        .collect();
    Ok(GroupAction::standardize(ngens, &raw, 0))
}

struct CosetTable {
    ngens: usize,
    table: Vec<u32>,
    rep: Vec<u32>,
    live: usize,
}

impl CosetTable {
    fn new(ngens: usize) -> CosetTable {
        CosetTable { ngens, table: vec![UNDEF; ngens], rep: vec![0], live: 1 }
    }

    fn nrows(&self) -> usize {
        self.rep.len()
    }

    fn alive(&self, c: u32) -> bool {
        self.rep[c as usize] == c
    }

    fn resolve(&self, mut c: u32) -> u32 {
        while self.rep[c as usize] != c {
            c = self.rep[c as usize];
        }
        c
    }

    fn get(&self, c: u32, g: u8) -> u32 {
        self.table[c as usize * self.ngens + g as usize]
    }

    fn set(&mut self, c: u32, g: u8, d: u32) {
        self.table[c as usize * self.ngens + g as usize] = d;
    }

    fn define(&mut self, c: u32, g: u8) -> u32 {
        let n = self.nrows() as u32;
        self.table.extend(std::iter::repeat_n(UNDEF, self.ngens));
        self.rep.push(n);
        self.live += 1;
        self.set(c, g, n);
        self.set(n, g, c); // generators are involutions
        n
    }

    /// Trace relator `w` from coset `c`, defining cosets as needed so the
    /// scan completes, and recording any coincidence it exposes.
    fn scan_and_fill(&mut self, c: u32, w: &[u8]) {
        let mut f = c;
        let mut i = 0usize;
        let mut b = c;
        let mut j = w.len();
        loop {
            while i < j && self.get(f, w[i]) != UNDEF {
                f = self.get(f, w[i]);
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincide(f, b);
                }
                return;
            }
            while j > i && self.get(b, w[j - 1]) != UNDEF {
                b = self.get(b, w[j - 1]);
                j -= 1;
            }
            if j == i {
                self.coincide(f, b);
                return;
            }
            if j == i + 1 {
                // Deduction: f * w[i] = b.
                self.set(f, w[i], b);
                self.set(b, w[i], f);
                return;
            }
            self.define(f, w[i]);
        }
    }

    /// Scan without filling: apply deductions and coincidences only.
    fn lookahead(&mut self, relators: &[Vec<u8>]) {
        for c in 0..self.nrows() as u32 {
            if !self.alive(c) {
                continue;
            }
            for w in relators {
                self.scan_no_fill(c, w);
                if !self.alive(c) {
                    break;
                }
            }
        }
    }

    fn scan_no_fill(&mut self, c: u32, w: &[u8]) {
        let mut f = c;
        let mut i = 0usize;
        let mut b = c;
        let mut j = w.len();
        while i < j && self.get(f, w[i]) != UNDEF {
            f = self.get(f, w[i]);
            i += 1;
        }
        if i == j {
            if f != b {
                self.coincide(f, b);
            }
            return;
        }
        while j > i && self.get(b, w[j - 1]) != UNDEF {
            b = self.get(b, w[j - 1]);
            j -= 1;
        }
        if j == i {
            self.coincide(f, b);
        } else if j == i + 1 {
            self.set(f, w[i], b);
            self.set(b, w[i], f);
        }
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let a = self.resolve(a);
        let b = self.resolve(b);
        if a == b {
            return;
        }
        let (surv, dead) = if a < b { (a, b) } else { (b, a) };
        self.rep[dead as usize] = surv;
        self.live -= 1;
        queue.push(dead);
    }

    /// Merge cosets a and b and propagate all knock-on identifications,
    /// transferring table entries from dead cosets to their survivors.
    fn coincide(&mut self, a: u32, b: u32) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        while let Some(e) = queue.pop() {
            for g in 0..self.ngens as u8 {
                let d = self.get(e, g);
                if d == UNDEF {
                    continue;
                }
                if self.get(d, g) == e {
                    self.set(d, g, UNDEF);
                }
                let mu = self.resolve(e);
                let nu = self.resolve(d);
                let mu_g = self.get(mu, g);
                if mu_g != UNDEF {
                    self.merge(nu, mu_g, &mut queue);
                } else {
                    let nu_g = self.get(nu, g);
                    if nu_g != UNDEF {
                        self.merge(mu, nu_g, &mut queue);
                    } else {
                        self.set(mu, g, nu);
                        self.set(nu, g, mu);
                    }
                }
            }
        }
    }

    /// Renumber live cosets consecutively, rewriting every entry through the
    /// union-find. Returns the new value of the scan cursor `next`.
    fn compact(&mut self, next: usize) -> usize {
        let nrows = self.nrows();
        let mut map = vec![UNDEF; nrows];
        let mut new_next = 0usize;
        let mut count = 0u32;
        for c in 0..nrows {
            if self.alive(c as u32) {
                map[c] = count;
                count += 1;
                if c < next {
                    new_next += 1;
                }
            }
        }
        let mut table = vec![UNDEF; count as usize * self.ngens];
        for c in 0..nrows {
            if !self.alive(c as u32) {
                continue;
            }
            for g in 0..self.ngens {
                let d = self.table[c * self.ngens + g];
                if d != UNDEF {
                    table[map[c] as usize * self.ngens + g] =
                        map[self.resolve(d) as usize];
                }
            }
        }
        self.table = table;
        self.rep = (0..count).collect();
        self.live = count as usize;
        new_next
    }
}
