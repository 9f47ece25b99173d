//! Exact arithmetic in the golden ring Z[phi] and its residue fields.
//!
//! Z[phi] is the ring of integers of Q(sqrt 5); elements are written
//! `a + b*phi` with `phi^2 = phi + 1`. A rational prime p either stays inert
//! (residue field F_{p^2}), splits into two conjugate ideals <p, phi - r>
//! (residue field F_p), or ramifies at p = 5 as <2 phi - 1> = <sqrt 5>.

use crate::{Error, Result};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Element `a + b*phi` of Z[phi]. All arithmetic is checked; overflow of the
/// i64 coefficients panics rather than wrapping.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GoldenInt {
    pub a: i64,
    pub b: i64,
}

pub const ZERO: GoldenInt = GoldenInt { a: 0, b: 0 };
pub const ONE: GoldenInt = GoldenInt { a: 1, b: 0 };
pub const PHI: GoldenInt = GoldenInt { a: 0, b: 1 };

impl GoldenInt {
    pub const fn new(a: i64, b: i64) -> Self {
        GoldenInt { a, b }
    }

    pub fn from_int(a: i64) -> Self {
        GoldenInt { a, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Numeric value with phi = (1 + sqrt 5) / 2, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        self.a as f64 + self.b as f64 * (1.0 + 5.0f64.sqrt()) / 2.0
    }
}

fn chk(v: Option<i64>) -> i64 {
    v.expect("overflow in Z[phi] arithmetic")
}

impl Add for GoldenInt {
    type Output = GoldenInt;
    fn add(self, o: GoldenInt) -> GoldenInt {
        GoldenInt::new(chk(self.a.checked_add(o.a)), chk(self.b.checked_add(o.b)))
    }
}

impl Sub for GoldenInt {
    type Output = GoldenInt;
    fn sub(self, o: GoldenInt) -> GoldenInt {
        GoldenInt::new(chk(self.a.checked_sub(o.a)), chk(self.b.checked_sub(o.b)))
    }
}

impl Neg for GoldenInt {
    type Output = GoldenInt;
    fn neg(self) -> GoldenInt {
        GoldenInt::new(chk(self.a.checked_neg()), chk(self.b.checked_neg()))
    }
}

impl Mul for GoldenInt {
    type Output = GoldenInt;
    // (a1 + b1 phi)(a2 + b2 phi) = a1 a2 + b1 b2 + (a1 b2 + a2 b1 + b1 b2) phi
    fn mul(self, o: GoldenInt) -> GoldenInt {
        let aa = chk(self.a.checked_mul(o.a));
        let bb = chk(self.b.checked_mul(o.b));
        let ab = chk(self.a.checked_mul(o.b));
        let ba = chk(self.b.checked_mul(o.a));
        GoldenInt::new(chk(aa.checked_add(bb)), chk(chk(ab.checked_add(ba)).checked_add(bb)))
    }
}

impl fmt::Debug for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}phi"),
            (a, b) if b < 0 => write!(f, "{a}{b}phi"),
            (a, b) => write!(f, "{a}+{b}phi"),
        }
    }
}

/// How a rational prime behaves in Z[phi].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IdealKind {
    /// x^2 - x - 1 irreducible mod p; residue field F_{p^2}.
    Inert,
    /// x^2 - x - 1 has roots mod p; <p, phi - root> with the smaller root.
    Split { root: u64 },
    /// p = 5: <2 phi - 1>^2 = <5>; residue field F_5 with phi -> 3.
    Ramified,
}

/// A prime ideal of Z[phi] lying over the rational prime `p`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Ideal {
    pub p: u64,
    pub kind: IdealKind,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Ideal {
    /// Classify the rational prime p. The canonical split ideal uses the
    /// smaller of the two roots of x^2 - x - 1 mod p.
    pub fn classify(p: u64) -> Result<Ideal> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if p == 5 {
            return Ok(Ideal { p, kind: IdealKind::Ramified });
        }
        let mut root = None;
        for r in 0..p {
            // r^2 - r - 1 == 0 (mod p)
            if (r * r + p * p) % p == (r + 1) % p {
                root = Some(r);
                break;
            }
        }
        Ok(match root {
            Some(r) => Ideal { p, kind: IdealKind::Split { root: r } },
            None => Ideal { p, kind: IdealKind::Inert },
        })
    }

    /// The ramified ideal <2 phi - 1> = <sqrt 5>.
    pub fn sqrt5() -> Ideal {
        Ideal { p: 5, kind: IdealKind::Ramified }
    }

    /// Residue field of Z[phi] / I.
    pub fn field(&self) -> Fq {
        match self.kind {
            IdealKind::Inert => Fq { p: self.p, deg: 2 },
            IdealKind::Split { .. } | IdealKind::Ramified => Fq { p: self.p, deg: 1 },
        }
    }

    /// Reduce an exact element to the residue field.
    pub fn reduce(&self, x: GoldenInt) -> FqElem {
        let p = self.p as i64;
        let m = |v: i64| v.rem_euclid(p) as u64;
        match self.kind {
            IdealKind::Inert => FqElem { field: self.field(), c0: m(x.a), c1: m(x.b) },
            IdealKind::Split { root } => {
                let r = root as i64 % p;
                FqElem {
                    field: self.field(),
                    c0: m(chk(x.a.checked_add(chk(x.b.checked_mul(r))))),
                    c1: 0,
                }
            }
            // 2 phi = 1 mod <sqrt 5>, so phi -> 3 in F_5.
            IdealKind::Ramified => {
                FqElem { field: self.field(), c0: m(chk(x.a.checked_add(chk(x.b.checked_mul(3))))), c1: 0 }
            }
        }
    }
}

/// Descriptor of a residue field F_{p^deg} with deg in {1, 2}. For deg = 2 the
/// basis is {1, phibar} where phibar^2 = phibar + 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fq {
    pub p: u64,
    pub deg: u8,
}

impl Fq {
    pub fn order(&self) -> u64 {
        if self.deg == 2 {
            self.p * self.p
        } else {
            self.p
        }
    }

    pub fn zero(&self) -> FqElem {
        FqElem { field: *self, c0: 0, c1: 0 }
    }

    pub fn one(&self) -> FqElem {
        FqElem { field: *self, c0: 1, c1: 0 }
    }

    pub fn elem(&self, c0: u64, c1: u64) -> FqElem {
        assert!(self.deg == 2 || c1 == 0, "linear residue field has no phibar component");
        FqElem { field: *self, c0: c0 % self.p, c1: c1 % self.p }
    }
}

/// Element of a residue field, `c0 + c1*phibar`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FqElem {
    pub field: Fq,
    pub c0: u64,
    pub c1: u64,
}

impl FqElem {
    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    pub fn inv(&self) -> Result<FqElem> {
        if self.is_zero() {
            return Err(Error::Invalid("inverse of zero in residue field".into()));
        }
        let p = self.field.p;
        if self.field.deg == 1 {
            return Ok(FqElem { field: self.field, c0: mod_inv(self.c0, p), c1: 0 });
        }
        // Conjugate of c0 + c1 phibar is (c0 + c1) - c1 phibar; the norm
        // c0^2 + c0 c1 - c1^2 lands in F_p.
        let norm = (self.c0 * self.c0 % p + self.c0 * self.c1 % p + p - self.c1 * self.c1 % p) % p;
        let ninv = mod_inv(norm, p);
        Ok(FqElem {
            field: self.field,
            c0: (self.c0 + self.c1) % p * ninv % p,
            c1: (p - self.c1 % p) % p * ninv % p,
        })
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

impl Add for FqElem {
    type Output = FqElem;
    fn add(self, o: FqElem) -> FqElem {
        assert_eq!(self.field, o.field, "mixed residue fields");
        let p = self.field.p;
        FqElem { field: self.field, c0: (self.c0 + o.c0) % p, c1: (self.c1 + o.c1) % p }
    }
}

impl Sub for FqElem {
    type Output = FqElem;
    fn sub(self, o: FqElem) -> FqElem {
        assert_eq!(self.field, o.field, "mixed residue fields");
        let p = self.field.p;
        FqElem { field: self.field, c0: (self.c0 + p - o.c0) % p, c1: (self.c1 + p - o.c1) % p }
    }
}

impl Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        let p = self.field.p;
        FqElem { field: self.field, c0: (p - self.c0 % p) % p, c1: (p - self.c1 % p) % p }
    }
}

impl Mul for FqElem {
    type Output = FqElem;
    // Same product rule as GoldenInt, with phibar^2 = phibar + 1.
    fn mul(self, o: FqElem) -> FqElem {
        assert_eq!(self.field, o.field, "mixed residue fields");
        let p = self.field.p;
        let aa = self.c0 * o.c0 % p;
        let bb = self.c1 * o.c1 % p;
        let cross = (self.c0 * o.c1 % p + self.c1 * o.c0 % p) % p;
        FqElem { field: self.field, c0: (aa + bb) % p, c1: (cross + bb) % p }
    }
}

/// Dense operation tables for a residue field with at most 256 elements.
/// Elements are coded as `c0 + p*c1`, one byte each; the matrix layer works
/// entirely on these codes.
pub struct FqTables {
    pub field: Fq,
    pub q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
}

impl FqTables {
    pub fn new(field: Fq) -> Result<FqTables> {
        let q = field.order();
        if q > 256 {
            return Err(Error::Resource(format!(
                "residue field of order {q} exceeds the dense table limit of 256"
            )));
        }
        let q = q as usize;
        let decode = |i: usize| {
            let p = field.p;
            FqElem { field, c0: i as u64 % p, c1: i as u64 / p }
        };
        let code = |e: FqElem| (e.c0 + field.p * e.c1) as u8;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let mut neg = vec![0u8; q];
        for i in 0..q {
            neg[i] = code(-decode(i));
            for j in 0..q {
                add[i * q + j] = code(decode(i) + decode(j));
                mul[i * q + j] = code(decode(i) * decode(j));
            }
        }
        Ok(FqTables { field, q, add, mul, neg })
    }

    #[inline(always)]
    pub fn add(&self, x: u8, y: u8) -> u8 {
        self.add[x as usize * self.q + y as usize]
    }

    #[inline(always)]
    pub fn mul(&self, x: u8, y: u8) -> u8 {
        self.mul[x as usize * self.q + y as usize]
    }

    #[inline(always)]
    pub fn neg(&self, x: u8) -> u8 {
        self.neg[x as usize]
    }

    pub fn code(&self, e: FqElem) -> u8 {
        assert_eq!(e.field, self.field);
        (e.c0 + self.field.p * e.c1) as u8
    }

    pub fn decode(&self, c: u8) -> FqElem {
        FqElem { field: self.field, c0: c as u64 % self.field.p, c1: c as u64 / self.field.p }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ring_basics() {
        let phi = PHI;
        assert_eq!(phi * phi, GoldenInt::new(1, 1)); // phi^2 = 1 + phi
        // (2 phi - 1)^2 = 5: the ramified generator squares to the prime.
        let t = GoldenInt::new(-1, 2);
        assert_eq!(t * t, GoldenInt::new(5, 0));
        let x = GoldenInt::new(3, -2);
        assert_eq!(x + ZERO, x);
        assert_eq!(x * ONE, x);
        assert_eq!(x - x, ZERO);
        assert_eq!((x * phi) * phi, x * (phi * phi));
    }

    #[test]
    #[should_panic(expected = "overflow in Z[phi]")]
    fn golden_ring_overflow_is_loud() {
        let big = GoldenInt::new(i64::MAX / 2, i64::MAX / 2);
        let _ = big * big;
    }

    #[test]
    fn classify_small_primes() {
        assert_eq!(Ideal::classify(2).unwrap().kind, IdealKind::Inert);
        assert_eq!(Ideal::classify(3).unwrap().kind, IdealKind::Inert);
        assert_eq!(Ideal::classify(5).unwrap().kind, IdealKind::Ramified);
        // 11 = 4^2 - 4 - 1: the polynomial has roots {4, 8} mod 11 and the
        // canonical ideal picks the smaller one.
        assert_eq!(Ideal::classify(11).unwrap().kind, IdealKind::Split { root: 4 });
        let r8 = (8u64 * 8 + 11 * 11) % 11;
        assert_eq!(r8, (8 + 1) % 11);
        assert_eq!(Ideal::classify(19).unwrap().kind, IdealKind::Split { root: 5 });
        assert!(Ideal::classify(6).is_err());
        assert!(Ideal::classify(1).is_err());
    }

    #[test]
    fn splitting_matches_quadratic_residue_rule() {
        // p splits iff 5 is a square mod p (p != 2, 5).
        for p in [3u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 101, 109] {
            let is_qr = (1..p).any(|x| x * x % p == 5 % p);
            let kind = Ideal::classify(p).unwrap().kind;
            match kind {
                IdealKind::Split { root } => {
                    assert!(is_qr, "p={p}");
                    assert_eq!((root * root + p + p - root - 1) % p, 0);
                }
                IdealKind::Inert => assert!(!is_qr, "p={p}"),
                IdealKind::Ramified => unreachable!(),
            }
        }
    }

    #[test]
    fn reduction_is_a_ring_homomorphism() {
        let ideals = [
            Ideal::classify(2).unwrap(),
            Ideal::classify(3).unwrap(),
            Ideal::classify(11).unwrap(),
            Ideal::sqrt5(),
        ];
        let samples = [
            GoldenInt::new(0, 0),
            GoldenInt::new(1, 0),
            GoldenInt::new(0, 1),
            GoldenInt::new(-3, 7),
            GoldenInt::new(12, -5),
            GoldenInt::new(-1, 2),
        ];
        for ideal in ideals {
            for &x in &samples {
                for &y in &samples {
                    assert_eq!(ideal.reduce(x + y), ideal.reduce(x) + ideal.reduce(y));
                    assert_eq!(ideal.reduce(x * y), ideal.reduce(x) * ideal.reduce(y));
                }
            }
        }
    }

    #[test]
    fn sqrt5_sends_phi_to_three() {
        let i = Ideal::sqrt5();
        let r = i.reduce(PHI);
        assert_eq!((r.c0, r.c1), (3, 0));
        // The generator 2 phi - 1 itself reduces to zero.
        assert!(i.reduce(GoldenInt::new(-1, 2)).is_zero());
        assert_eq!(i.field().order(), 5);
    }

    #[test]
    fn field_orders() {
        assert_eq!(Ideal::classify(2).unwrap().field().order(), 4);
        assert_eq!(Ideal::classify(3).unwrap().field().order(), 9);
        assert_eq!(Ideal::classify(11).unwrap().field().order(), 11);
    }

    #[test]
    fn f4_inverse_of_phibar() {
        // In F_4, phibar * (phibar + 1) = phibar^2 + phibar = 2 phibar + 1 = 1.
        let f = Ideal::classify(2).unwrap().field();
        let phibar = f.elem(0, 1);
        assert_eq!(phibar.inv().unwrap(), f.elem(1, 1));
        assert_eq!(phibar * f.elem(1, 1), f.one());
    }

    #[test]
    fn field_inverses_and_errors() {
        for ideal in [Ideal::classify(2).unwrap(), Ideal::classify(3).unwrap(), Ideal::classify(11).unwrap(), Ideal::sqrt5()] {
            let f = ideal.field();
            assert!(f.zero().inv().is_err());
            for c in 1..f.order() {
                let e = f.elem(c % f.p, c / f.p);
                if e.is_zero() {
                    continue;
                }
                assert_eq!(e * e.inv().unwrap(), f.one(), "field {f:?} elem {e:?}");
            }
        }
        // 3 * 2 = 6 = 1 mod 5.
        let f5 = Ideal::sqrt5().field();
        assert_eq!(f5.elem(3, 0).inv().unwrap(), f5.elem(2, 0));
        let x = f5.elem(4, 0);
        assert_eq!(x + f5.zero(), x);
    }

    #[test]
    fn tables_agree_with_element_arithmetic() {
        for ideal in [Ideal::classify(2).unwrap(), Ideal::classify(3).unwrap(), Ideal::sqrt5(), Ideal::classify(11).unwrap()] {
            let f = ideal.field();
            let t = FqTables::new(f).unwrap();
            for i in 0..t.q as u8 {
                for j in 0..t.q as u8 {
                    let (x, y) = (t.decode(i), t.decode(j));
                    assert_eq!(t.decode(t.add(i, j)), x + y);
                    assert_eq!(t.decode(t.mul(i, j)), x * y);
                }
                assert_eq!(t.decode(t.neg(i)), -t.decode(i));
            }
        }
        assert!(FqTables::new(Fq { p: 17, deg: 2 }).is_err());
    }
}
