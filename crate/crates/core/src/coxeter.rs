//! Coxeter presentations, Gram matrices over Z[phi], and the reflection
//! representation together with its reductions to residue fields.

use crate::algebra::{self, FqTables, GoldenInt, Ideal};
use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt;

/// A Schlafli symbol {r1, r2, ...}; rank = entries + 1 generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Schlafli(pub Vec<u32>);

impl Schlafli {
    pub fn parse(s: &str) -> Result<Schlafli> {
        let entries: std::result::Result<Vec<u32>, _> =
            s.split(',').map(|t| t.trim().parse::<u32>()).collect();
        let entries = entries.map_err(|_| Error::Parse(format!("bad symbol {s:?}")))?;
        if entries.is_empty() || entries.iter().any(|&r| r < 2) {
            return Err(Error::Parse(format!("bad symbol {s:?}: entries must be >= 2")));
        }
        Ok(Schlafli(entries))
    }

    pub fn rank(&self) -> usize {
        self.0.len() + 1
    }

    /// Dimension of the tessellation the symbol describes.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn reversed(&self) -> Schlafli {
        let mut v = self.0.clone();
        v.reverse();
        Schlafli(v)
    }
}

impl fmt::Display for Schlafli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Coxeter presentation: generators a_0..a_{rank-1}, exponent matrix m with
/// m[i][i] = 1, m[i][i+1] = symbol entry, m[i][j] = 2 otherwise.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub rank: usize,
    pub m: Vec<Vec<u32>>,
}

impl Presentation {
    pub fn from_symbol(symbol: &Schlafli) -> Presentation {
        let rank = symbol.rank();
        let mut m = vec![vec![2u32; rank]; rank];
        for i in 0..rank {
            m[i][i] = 1;
        }
        for (i, &r) in symbol.0.iter().enumerate() {
            m[i][i + 1] = r;
            m[i + 1][i] = r;
        }
        Presentation { rank, m }
    }

    /// Defining relators as generator-index words: a_i^2 and (a_i a_j)^m_ij.
    pub fn relators(&self) -> Vec<Vec<u8>> {
        let mut rels = Vec::new();
        for i in 0..self.rank {
            rels.push(vec![i as u8, i as u8]);
        }
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                let mut w = Vec::with_capacity(2 * self.m[i][j] as usize);
                for _ in 0..self.m[i][j] {
                    w.push(i as u8);
                    w.push(j as u8);
                }
                rels.push(w);
            }
        }
        rels
    }

    /// Standard parabolic sub-presentation on the kept generators, reindexed.
    pub fn sub_presentation(&self, keep: &[usize]) -> Presentation {
        let rank = keep.len();
        let mut m = vec![vec![2u32; rank]; rank];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m[a][b] = self.m[i][j];
            }
        }
        Presentation { rank, m }
    }
}

/// Parse a word over the generators written with letters 'a', 'b', ... .
pub fn parse_word(s: &str, rank: usize) -> Result<Vec<u8>> {
    let mut w = Vec::with_capacity(s.len());
    for ch in s.chars() {
        let idx = (ch as i32) - ('a' as i32);
        if idx < 0 || idx as usize >= rank {
            return Err(Error::Parse(format!("letter {ch:?} out of range for rank {rank}")));
        }
        w.push(idx as u8);
    }
    if w.is_empty() {
        return Err(Error::Parse("empty word".into()));
    }
    Ok(w)
}

pub fn word_to_string(w: &[u8]) -> String {
    w.iter().map(|&g| (b'a' + g) as char).collect()
}

/// Dense square matrix over Z[phi].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GMat {
    pub n: usize,
    pub e: Vec<GoldenInt>,
}

impl GMat {
    pub fn identity(n: usize) -> GMat {
        let mut e = vec![algebra::ZERO; n * n];
        for i in 0..n {
            e[i * n + i] = algebra::ONE;
        }
        GMat { n, e }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> GoldenInt {
        self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GoldenInt) {
        self.e[i * self.n + j] = v;
    }

    pub fn mul(&self, o: &GMat) -> GMat {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut e = vec![algebra::ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    e[i * n + j] = e[i * n + j] + a * o.get(k, j);
                }
            }
        }
        GMat { n, e }
    }

    pub fn transpose(&self) -> GMat {
        let n = self.n;
        let mut e = vec![algebra::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                e[j * n + i] = self.get(i, j);
            }
        }
        GMat { n, e }
    }

    pub fn pow(&self, k: u32) -> GMat {
        let mut acc = GMat::identity(self.n);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == GMat::identity(self.n)
    }

    /// Exact determinant by permutation expansion; n is at most 5 here.
    pub fn det(&self) -> GoldenInt {
        let n = self.n;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = algebra::ZERO;
        permute(&mut perm, 0, &mut |p, sign| {
            let mut term = algebra::ONE;
            for (i, &j) in p.iter().enumerate() {
                term = term * self.get(i, j);
            }
            total = total + if sign { term } else { -term };
        });
        total
    }
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize], bool)) {
    let n = p.len();
    if k == n {
        // Parity by counting inversions; fine for n <= 5.
        let mut inv = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        f(p, inv % 2 == 0);
        return;
    }
    for i in k..n {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

impl fmt::Debug for GMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            for j in 0..self.n {
                write!(f, "{}\t", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Dense square matrix over a residue field, entries byte-coded per FqTables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FMat {
    pub n: usize,
    pub e: Vec<u8>,
}

impl FMat {
    pub fn identity(n: usize, t: &FqTables) -> FMat {
        let one = t.code(t.field.one());
        let mut e = vec![0u8; n * n];
        for i in 0..n {
            e[i * n + i] = one;
        }
        FMat { n, e }
    }

    pub fn mul(&self, o: &FMat, t: &FqTables) -> FMat {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut e = vec![0u8; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.e[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    e[i * n + j] = t.add(e[i * n + j], t.mul(a, o.e[k * n + j]));
                }
            }
        }
        FMat { n, e }
    }

    pub fn transpose(&self) -> FMat {
        let n = self.n;
        let mut e = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                e[j * n + i] = self.e[i * n + j];
            }
        }
        FMat { n, e }
    }

    pub fn is_identity(&self, t: &FqTables) -> bool {
        *self == FMat::identity(self.n, t)
    }
}

/// Exact Gram matrix 2*cos terms: diagonal 2, adjacent entries -2cos(pi/r).
/// Only r in {2, 3, 5} have exact images in Z[phi]: 0, -1 and -phi.
pub fn gram_matrix(symbol: &Schlafli) -> Result<GMat> {
    let rank = symbol.rank();
    let mut g = GMat { n: rank, e: vec![algebra::ZERO; rank * rank] };
    for i in 0..rank {
        g.set(i, i, GoldenInt::new(2, 0));
    }
    for (i, &r) in symbol.0.iter().enumerate() {
        let v = match r {
            2 => algebra::ZERO,
            3 => GoldenInt::new(-1, 0),
            5 => GoldenInt::new(0, -1),
            other => {
                return Err(Error::Invalid(format!(
                    "no exact golden-ring cosine for symbol entry {other}; exact constructions support entries 2, 3, 5"
                )))
            }
        };
        g.set(i, i + 1, v);
        g.set(i + 1, i, v);
    }
    Ok(g)
}

/// Signature (negative, zero, positive) of the Gram form evaluated
/// numerically, by LDL pivots of the tridiagonal matrix.
pub fn signature(symbol: &Schlafli) -> (usize, usize, usize) {
    let rank = symbol.rank();
    let diag = vec![2.0f64; rank];
    let off: Vec<f64> = symbol.0.iter().map(|&r| -2.0 * (std::f64::consts::PI / r as f64).cos()).collect();
    let (mut neg, mut zero, mut pos) = (0, 0, 0);
    let mut d_prev = 0.0f64;
    for i in 0..rank {
        let mut d = diag[i];
        if i > 0 {
            // A zero pivot means a degenerate direction; the remaining block
            // decouples, so treat the pivot chain as restarting.
            if d_prev.abs() < 1e-9 {
                d_prev = 1e-30;
            }
            d -= off[i - 1] * off[i - 1] / d_prev;
        }
        if d.abs() < 1e-9 {
            zero += 1;
        } else if d < 0.0 {
            neg += 1;
        } else {
            pos += 1;
        }
        d_prev = d;
    }
    (neg, zero, pos)
}

/// The exact reflection representation: generator a_i acts by
/// e_j -> e_j - g[i][j] e_i.
pub struct ReflectionRep {
    pub symbol: Schlafli,
    pub pres: Presentation,
    pub gram: GMat,
    pub gens: Vec<GMat>,
}

impl ReflectionRep {
    pub fn new(symbol: &Schlafli) -> Result<ReflectionRep> {
        let gram = gram_matrix(symbol)?;
        let pres = Presentation::from_symbol(symbol);
        let rank = symbol.rank();
        let mut gens = Vec::with_capacity(rank);
        for i in 0..rank {
            let mut mat = GMat::identity(rank);
            for j in 0..rank {
                let cur = mat.get(i, j);
                mat.set(i, j, cur - gram.get(i, j));
            }
            gens.push(mat);
        }
        Ok(ReflectionRep { symbol: symbol.clone(), pres, gram, gens })
    }

    /// Check every defining relator ((a_i a_j)^m_ij = 1) in exact arithmetic.
    pub fn verify_relations(&self) -> Vec<RelationCheck> {
        let mut out = Vec::new();
        for i in 0..self.pres.rank {
            for j in i..self.pres.rank {
                let m = self.pres.m[i][j];
                let prod = self.gens[i].mul(&self.gens[j]);
                out.push(RelationCheck { i, j, m, ok: prod.pow(m).is_identity() });
            }
        }
        out
    }

    /// Each generator preserves the Gram form: R^T G R = G.
    pub fn preserves_gram(&self) -> bool {
        self.gens.iter().all(|r| r.transpose().mul(&self.gram).mul(r) == self.gram)
    }

    pub fn reduce(&self, ideal: Ideal) -> Result<ReducedRep> {
        let tables = FqTables::new(ideal.field())?;
        let red = |m: &GMat| FMat {
            n: m.n,
            e: m.e.iter().map(|&x| tables.code(ideal.reduce(x))).collect(),
        };
        let gens = self.gens.iter().map(&red).collect();
        let gram = red(&self.gram);
        Ok(ReducedRep { ideal, tables, gens, gram })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RelationCheck {
    pub i: usize,
    pub j: usize,
    pub m: u32,
    pub ok: bool,
}

/// The reflection representation with entries reduced mod a prime ideal.
pub struct ReducedRep {
    pub ideal: Ideal,
    pub tables: FqTables,
    pub gens: Vec<FMat>,
    pub gram: FMat,
}

impl ReducedRep {
    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn verify_relations(&self, pres: &Presentation) -> Vec<RelationCheck> {
        let mut out = Vec::new();
        for i in 0..pres.rank {
            for j in i..pres.rank {
                let m = pres.m[i][j];
                let prod = self.gens[i].mul(&self.gens[j], &self.tables);
                let mut acc = FMat::identity(prod.n, &self.tables);
                for _ in 0..m {
                    acc = acc.mul(&prod, &self.tables);
                }
                out.push(RelationCheck { i, j, m, ok: acc.is_identity(&self.tables) });
            }
        }
        out
    }

    /// Generators preserve the reduced Gram form.
    pub fn preserves_gram(&self) -> bool {
        self.gens
            .iter()
            .all(|r| r.transpose().mul(&self.gram, &self.tables).mul(r, &self.tables) == self.gram)
    }
}

/// True when no nonempty product of at most `l` generators that is non-trivial
/// in exact arithmetic reduces to the identity. Explores the exact ball of
/// radius `l`; exceeding `node_cap` distinct exact elements is a resource
/// error, reported distinctly from a faithfulness failure.
pub fn local_faithfulness(
    rep: &ReflectionRep,
    red: &ReducedRep,
    l: u32,
    node_cap: usize,
) -> Result<bool> {
    let idm = GMat::identity(rep.gens[0].n);
    let mut seen: HashMap<Vec<GoldenInt>, ()> = HashMap::new();
    seen.insert(idm.e.clone(), ());
    let mut frontier: Vec<(GMat, FMat)> = vec![(idm, FMat::identity(red.gens[0].n, &red.tables))];
    for _ in 0..l {
        let mut next = Vec::new();
        for (gm, fm) in &frontier {
            for (gg, fg) in rep.gens.iter().zip(&red.gens) {
                let ngm = gm.mul(gg);
                if seen.contains_key(&ngm.e) {
                    continue;
                }
                if seen.len() >= node_cap {
                    return Err(Error::Resource(format!(
                        "faithfulness ball exceeded {node_cap} exact elements"
                    )));
                }
                let nfm = fm.mul(fg, &red.tables);
                if nfm.is_identity(&red.tables) && !ngm.is_identity() {
                    return Ok(false);
                }
                seen.insert(ngm.e.clone(), ());
                next.push((ngm, nfm));
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Ideal, PHI};

    fn sym(s: &str) -> Schlafli {
        Schlafli::parse(s).unwrap()
    }

    #[test]
    fn symbol_parsing() {
        assert_eq!(sym("5,3,3,5").rank(), 5);
        assert_eq!(sym("4,4").rank(), 3);
        assert_eq!(sym("5,3,3,5").reversed(), sym("5,3,3,5"));
        assert_eq!(sym("3,3,5").reversed(), sym("5,3,3"));
        assert!(Schlafli::parse("5,x").is_err());
        assert!(Schlafli::parse("1,3").is_err());
        assert!(Schlafli::parse("").is_err());
    }

    #[test]
    fn presentation_exponents() {
        let p = Presentation::from_symbol(&sym("5,3,3,5"));
        assert_eq!(p.rank, 5);
        assert_eq!(p.m[0][1], 5);
        assert_eq!(p.m[1][2], 3);
        assert_eq!(p.m[2][3], 3);
        assert_eq!(p.m[3][4], 5);
        assert_eq!(p.m[0][2], 2);
        assert_eq!(p.m[0][4], 2);
        assert_eq!(p.m[1][3], 2);
        // 5 involutions + 10 pair relators.
        assert_eq!(p.relators().len(), 15);

        let q = Presentation::from_symbol(&sym("4,3,4"));
        assert_eq!(q.rank, 4);
        assert_eq!(q.m[0][1], 4);
        assert_eq!(q.m[1][2], 3);
        assert_eq!(q.m[2][3], 4);
        assert_eq!(q.m[0][3], 2);
    }

    #[test]
    fn sub_presentation_reindexes() {
        let p = Presentation::from_symbol(&sym("5,3,3,5"));
        let s = p.sub_presentation(&[1, 2, 3]);
        assert_eq!(s.rank, 3);
        assert_eq!(s.m[0][1], 3);
        assert_eq!(s.m[1][2], 3);
        assert_eq!(s.m[0][2], 2);
    }

    #[test]
    fn word_parsing() {
        assert_eq!(parse_word("abc", 5).unwrap(), vec![0, 1, 2]);
        assert!(parse_word("af", 5).is_err());
        assert!(parse_word("", 5).is_err());
        assert_eq!(word_to_string(&[0, 1, 4]), "abe");
    }

    #[test]
    fn gram_entries_for_5335() {
        let g = gram_matrix(&sym("5,3,3,5")).unwrap();
        let mphi = GoldenInt::new(0, -1);
        let mone = GoldenInt::new(-1, 0);
        for i in 0..5 {
            assert_eq!(g.get(i, i), GoldenInt::new(2, 0));
        }
        assert_eq!(g.get(0, 1), mphi);
        assert_eq!(g.get(1, 2), mone);
        assert_eq!(g.get(2, 3), mone);
        assert_eq!(g.get(3, 4), mphi);
        assert_eq!(g.get(0, 2), algebra::ZERO);
        assert_eq!(g.get(0, 4), algebra::ZERO);
        // Entry 4 has cosine sqrt(2)/2: no exact image.
        assert!(gram_matrix(&sym("4,4")).is_err());
        assert!(gram_matrix(&sym("4,3,3,5")).is_err());
    }

    #[test]
    fn signatures() {
        // Compact hyperbolic: Lorentzian (-,+,+,+,+).
        assert_eq!(signature(&sym("5,3,3,5")), (1, 0, 4));
        // Euclidean plane tiling: degenerate.
        assert_eq!(signature(&sym("4,4")), (0, 1, 2));
        // Spherical: positive definite.
        assert_eq!(signature(&sym("5,3")), (0, 0, 3));
        assert_eq!(signature(&sym("3,3,5")), (0, 0, 4));
        assert_eq!(signature(&sym("5,5")), (1, 0, 2));
    }

    #[test]
    fn generators_are_involutive_reflections() {
        let rep = ReflectionRep::new(&sym("5,3,3,5")).unwrap();
        for g in &rep.gens {
            assert!(g.mul(g).is_identity());
            assert_eq!(g.det(), GoldenInt::new(-1, 0));
        }
        assert!(rep.preserves_gram());
    }

    #[test]
    fn braid_relations_hold_exactly() {
        let rep = ReflectionRep::new(&sym("5,3,3,5")).unwrap();
        let prod = rep.gens[0].mul(&rep.gens[1]);
        assert!(prod.pow(5).is_identity());
        assert!(!prod.pow(1).is_identity());
        assert!(!prod.pow(4).is_identity());
        let comm = rep.gens[0].mul(&rep.gens[2]);
        assert!(comm.pow(2).is_identity());
        assert!(rep.verify_relations().iter().all(|c| c.ok));
    }

    #[test]
    fn broken_gram_fails_relations() {
        let mut rep = ReflectionRep::new(&sym("5,3,3,5")).unwrap();
        // Replace the order-5 coupling -phi by -1 (an order-3 coupling);
        // the (0,1) braid relation (rho0 rho1)^5 = 1 must then fail. Note a
        // subtlety: the Galois conjugate 1-phi would NOT break the relation,
        // since it yields the conjugate pentagonal rotation of the same order.
        let mut g = rep.gram.clone();
        g.set(0, 1, GoldenInt::new(-1, 0));
        g.set(1, 0, GoldenInt::new(-1, 0));
        let mut gens = Vec::new();
        for i in 0..5 {
            let mut mat = GMat::identity(5);
            for j in 0..5 {
                let cur = mat.get(i, j);
                mat.set(i, j, cur - g.get(i, j));
            }
            gens.push(mat);
        }
        rep.gens = gens;
        rep.gram = g;
        let checks = rep.verify_relations();
        assert!(checks.iter().any(|c| !c.ok));
        let bad = checks.iter().find(|c| c.i == 0 && c.j == 1).unwrap();
        assert!(!bad.ok);
    }

    #[test]
    fn reduced_rep_keeps_relations_and_gram() {
        let rep = ReflectionRep::new(&sym("5,3,3,5")).unwrap();
        for ideal in [Ideal::classify(2).unwrap(), Ideal::classify(3).unwrap(), Ideal::sqrt5(), Ideal::classify(11).unwrap()] {
            let red = rep.reduce(ideal).unwrap();
            assert!(red.verify_relations(&rep.pres).iter().all(|c| c.ok), "{ideal:?}");
            assert!(red.preserves_gram(), "{ideal:?}");
        }
    }

    #[test]
    fn mod2_diagonal_degenerates() {
        // The Gram diagonal 2 vanishes mod <2>: reduced generators are no
        // longer diag(-1)-like reflections but still satisfy the relations.
        let rep = ReflectionRep::new(&sym("5,3,3,5")).unwrap();
        let red = rep.reduce(Ideal::classify(2).unwrap()).unwrap();
        let t = &red.tables;
        for g in &red.gens {
            for i in 0..g.n {
                assert_eq!(t.decode(g.e[i * g.n + i]).c0 % 2, 1);
            }
        }
    }

    #[test]
    fn local_faithfulness_on_hyperbolic_symbol() {
        let rep = ReflectionRep::new(&sym("5,3,3,5")).unwrap();
        let red = rep.reduce(Ideal::sqrt5()).unwrap();
        assert!(local_faithfulness(&rep, &red, 0, 10).unwrap());
        assert!(local_faithfulness(&rep, &red, 4, 100_000).unwrap());
        // Cap exhaustion is an error, not a false verdict.
        assert!(matches!(
            local_faithfulness(&rep, &red, 12, 50),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn local_faithfulness_negative_control() {
        // {5,3} is the icosahedral group of order 120; its central -1 reduces
        // to the identity mod <2>, so the reduction cannot be locally faithful
        // past the word length of the first kernel element. Enumerate the
        // group exactly (independently from local_faithfulness) to find it.
        let rep = ReflectionRep::new(&sym("5,3")).unwrap();
        let red = rep.reduce(Ideal::classify(2).unwrap()).unwrap();
        let mut depth_of: HashMap<Vec<GoldenInt>, u32> = HashMap::new();
        let idm = GMat::identity(3);
        depth_of.insert(idm.e.clone(), 0);
        let mut frontier = vec![idm];
        let mut shortest_kernel = None;
        let mut depth = 0u32;
        while !frontier.is_empty() {
            depth += 1;
            let mut next = Vec::new();
            for gm in &frontier {
                for (gg, fg) in rep.gens.iter().zip(&red.gens) {
                    let ngm = gm.mul(gg);
                    if depth_of.contains_key(&ngm.e) {
                        continue;
                    }
                    depth_of.insert(ngm.e.clone(), depth);
                    // Reduce the exact product entrywise: independent of the
                    // homomorphic message passing inside local_faithfulness.
                    let ideal = Ideal::classify(2).unwrap();
                    let reduced = FMat {
                        n: 3,
                        e: ngm.e.iter().map(|&x| red.tables.code(ideal.reduce(x))).collect(),
                    };
                    let _ = fg;
                    if reduced.is_identity(&red.tables) && shortest_kernel.is_none() {
                        shortest_kernel = Some(depth);
                    }
                    next.push(ngm);
                }
            }
            frontier = next;
        }
        assert_eq!(depth_of.len(), 120, "exact {{5,3}} group order");
        let lk = shortest_kernel.expect("-1 must reduce to identity mod 2");
        // The central element is the longest element, length 15.
        assert_eq!(lk, 15);
        assert!(local_faithfulness(&rep, &red, lk - 1, 1_000_000).unwrap());
        assert!(!local_faithfulness(&rep, &red, lk, 1_000_000).unwrap());
    }

    #[test]
    fn golden_ball_matches_phi_identity() {
        // Sanity anchor for exact arithmetic inside matrix products:
        // (rho_0 rho_1) has order 5, so its 5 distinct powers live in the ball.
        let rep = ReflectionRep::new(&sym("5,3,3,5")).unwrap();
        let rot = rep.gens[0].mul(&rep.gens[1]);
        let mut acc = GMat::identity(5);
        let mut distinct = std::collections::HashSet::new();
        for _ in 0..5 {
            acc = acc.mul(&rot);
            distinct.insert(acc.e.clone());
        }
        assert_eq!(distinct.len(), 5);
        assert!(acc.is_identity());
        let _ = PHI;
    }
}
