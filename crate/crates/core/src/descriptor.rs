//! Code descriptors: compact strings naming a tessellation quotient.
//!
//! Grammar (whitespace-free):
//!
//! ```text
//! descriptor := SYMBOL '|' method
//! SYMBOL     := m1 ',' m2 ',' ...            Schlafli symbol entries
//! method     := 'ideal:' P                   reduce reflections mod the prime P
//!             | 'ideal-sqrt5'                reduce mod the ramified ideal over 5
//!             | 'rotation-ideal:' P          like ideal:P, graded by word parity
//!             | 'word:' W ('.' W)*           impose extra relators, Todd-Coxeter
//!             | 'covering[' method ';H=' W (',' W)* ']'
//!                                            quotient the base by the subgroup
//!                                            generated by translation words
//! W          := [a-z]+ ('*' N)?              generator letters, optional power
//! ```
//!
//! Parsing and formatting round-trip exactly, so a descriptor doubles as a
//! cache key and as the `code` column in result files.

use crate::coxeter::{parse_word, word_to_string, Schlafli};
use crate::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// A word with an optional repetition count, kept unexpanded so the printed
/// form matches what was parsed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordPower {
    pub word: Vec<u8>,
    pub power: u32,
}

impl WordPower {
    pub fn expanded(&self) -> Vec<u8> {
        self.word.repeat(self.power as usize)
    }

    fn parse(s: &str, rank: usize) -> Result<WordPower> {
        let (letters, power) = match s.split_once('*') {
            Some((w, n)) => {
                let power: u32 = n
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad power {n:?} in word {s:?}")))?;
                if power == 0 {
                    return Err(Error::Parse(format!("zero power in word {s:?}")));
                }
                (w, power)
            }
            None => (s, 1),
        };
        Ok(WordPower { word: parse_word(letters, rank)?, power })
    }
}

impl fmt::Display for WordPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", word_to_string(&self.word))?;
        if self.power != 1 {
            write!(f, "*{}", self.power)?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Method {
    /// Reduce the reflection representation modulo a rational prime.
    Ideal { p: u32 },
    /// Reduce modulo the ramified prime ideal dividing 5.
    IdealSqrt5,
    /// Same reduction, but track word-length parity so the quotient retains
    /// the orientation double cover of the matrix image.
    RotationIdeal { p: u32 },
    /// Impose the listed words as extra relators and enumerate cosets.
    Word { words: Vec<WordPower> },
    /// Build the base quotient, then factor out the subgroup its listed
    /// elements generate (checked for freeness/locality downstream).
    Covering { base: Box<Method>, subgroup: Vec<WordPower> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Descriptor {
    pub symbol: Schlafli,
    pub method: Method,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn parse_prime(s: &str, ctx: &str) -> Result<u32> {
    let p: u32 = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad prime {s:?} after {ctx}")))?;
    if !is_prime(p) {
        return Err(Error::Parse(format!("{p} is not prime (after {ctx})")));
    }
    Ok(p)
}

fn parse_word_list(s: &str, sep: char, rank: usize) -> Result<Vec<WordPower>> {
    s.split(sep).map(|w| WordPower::parse(w, rank)).collect()
}

/// Split `covering[...]` innards at the top-level `;H=` marker, tolerating
/// nested covering methods in the base position.
fn split_covering(inner: &str) -> Result<(&str, &str)> {
    let bytes = inner.as_bytes();
    let mut depth = 0usize;
    for i in 0..bytes.len() {
        match bytes[i] {
            b'[' => depth += 1,
            b']' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse(format!("unbalanced ']' in {inner:?}")))?
            }
            b';' if depth == 0 => {
                let rest = &inner[i + 1..];
                let h = rest
                    .strip_prefix("H=")
                    .ok_or_else(|| Error::Parse(format!("expected ';H=' in {inner:?}")))?;
                return Ok((&inner[..i], h));
            }
            _ => {}
        }
    }
    Err(Error::Parse(format!("covering method {inner:?} is missing ';H=...'")))
}

impl Method {
    fn parse(s: &str, rank: usize) -> Result<Method> {
        if let Some(p) = s.strip_prefix("ideal:") {
            return Ok(Method::Ideal { p: parse_prime(p, "ideal:")? });
        }
        if s == "ideal-sqrt5" {
            return Ok(Method::IdealSqrt5);
        }
        if let Some(p) = s.strip_prefix("rotation-ideal:") {
            return Ok(Method::RotationIdeal { p: parse_prime(p, "rotation-ideal:")? });
        }
        if let Some(w) = s.strip_prefix("word:") {
            return Ok(Method::Word { words: parse_word_list(w, '.', rank)? });
        }
        if let Some(rest) = s.strip_prefix("covering[") {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("covering method {s:?} missing ']'")))?;
            let (base, h) = split_covering(inner)?;
            return Ok(Method::Covering {
                base: Box::new(Method::parse(base, rank)?),
                subgroup: parse_word_list(h, ',', rank)?,
            });
        }
        Err(Error::Parse(format!("unknown construction method {s:?}")))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Ideal { p } => write!(f, "ideal:{p}"),
            Method::IdealSqrt5 => write!(f, "ideal-sqrt5"),
            Method::RotationIdeal { p } => write!(f, "rotation-ideal:{p}"),
            Method::Word { words } => {
                write!(f, "word:")?;
                for (i, w) in words.iter().enumerate() {
                    if i > 0 {
                        write!(f, ".")?;
                    }
                    write!(f, "{w}")?;
                }
                Ok(())
            }
            Method::Covering { base, subgroup } => {
                write!(f, "covering[{base};H=")?;
                for (i, w) in subgroup.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{w}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl Descriptor {
    pub fn rank(&self) -> usize {
        self.symbol.rank()
    }
}

impl FromStr for Descriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Descriptor> {
        let (sym, method) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("descriptor {s:?} is missing '|'")))?;
        let symbol = Schlafli::parse(sym)?;
        let method = Method::parse(method, symbol.rank())?;
        Ok(Descriptor { symbol, method })
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.symbol, self.method)
    }
}
