//! End-to-end construction: descriptor string -> finite symmetry group ->
//! quotient cell complex -> CSS code, with integrity checks at each joint.

use crate::algebra::{Ideal, IdealKind};
use crate::complex::{properness, quotient_preserves_locality, Complex, Properness};
use crate::coxeter::{Presentation, ReflectionRep};
use crate::css::{CodeBundle, CssCode};
use crate::descriptor::{Descriptor, Method};
use crate::group::{matrix_group_closure, todd_coxeter, GroupAction};
use crate::{Error, Result};
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

/// Enumeration budget (live cosets / distinct matrices) available without
/// opting in to large runs. Covers every catalogued quotient up to the
/// 1,958,400-element orientation double cover, with headroom for the
/// transient coset overshoot of the enumerator.
pub const DEFAULT_ENUMERATION_CAP: usize = 2_200_000;

/// Budget unlocked by the `--large` flag; admits the ~9.4M-element
/// reduction modulo the ramified ideal over 5 and its ~18.7M double cover.
pub const LARGE_ENUMERATION_CAP: usize = 40_000_000;

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub cap: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for BuildOptions {
    fn default() -> BuildOptions {
        BuildOptions { cap: DEFAULT_ENUMERATION_CAP, cache_dir: None }
    }
}

impl BuildOptions {
    pub fn large() -> BuildOptions {
        BuildOptions { cap: LARGE_ENUMERATION_CAP, cache_dir: None }
    }
}

/// A finite quotient group realized as its regular action, plus the covering
/// data and construction notes accumulated while building it.
pub struct BuiltGroup {
    pub pres: Presentation,
    pub action: GroupAction,
    /// Generators (as words) of the subgroup to factor out; empty when the
    /// descriptor names the group itself.
    pub h_words: Vec<Vec<u8>>,
    pub notes: Vec<String>,
}

/// Peel nested covering wrappers: the group to enumerate is the innermost
/// method's, and iterated quotients compose into the subgroup generated by
/// all listed translation words.
fn flatten_coverings(method: &Method) -> (&Method, Vec<Vec<u8>>) {
    let mut words = Vec::new();
    let mut cur = method;
    while let Method::Covering { base, subgroup } = cur {
        words.extend(subgroup.iter().map(|w| w.expanded()));
        cur = base;
    }
    (cur, words)
}

/// Group order of the reduced reflection representation of the rank-5
/// hyperbolic tessellation over the residue field of size q, as a
/// polynomial in q.
pub fn rank5_image_order(q: u64) -> u64 {
    q.pow(10) - q.pow(8) - q.pow(6) + q.pow(4)
}

fn ideal_note(ideal: &Ideal) -> String {
    let q = ideal.field().order();
    match ideal.kind {
        IdealKind::Inert => format!("prime {} is inert: residue field F_{q}", ideal.p),
        IdealKind::Split { root } => {
            format!("prime {} splits (phi -> {root}): residue field F_{q}", ideal.p)
        }
        IdealKind::Ramified => format!("prime 5 ramifies: residue field F_{q}"),
    }
}

fn build_leaf(symbol_pres: &Presentation, descriptor: &Descriptor, leaf: &Method, cap: usize)
    -> Result<(GroupAction, Vec<String>)>
{
    let mut notes = Vec::new();
    match leaf {
        Method::Ideal { .. } | Method::IdealSqrt5 | Method::RotationIdeal { .. } => {
            let (ideal, graded) = match leaf {
                Method::Ideal { p } => (Ideal::classify(*p as u64)?, false),
                Method::IdealSqrt5 => (Ideal::sqrt5(), false),
                Method::RotationIdeal { p } => (Ideal::classify(*p as u64)?, true),
                _ => unreachable!(),
            };
            notes.push(ideal_note(&ideal));
            let rep = ReflectionRep::new(&descriptor.symbol)?;
            if !rep.preserves_gram() || rep.verify_relations().iter().any(|c| !c.ok) {
                return Err(Error::Verification(
                    "exact reflection representation failed its defining relations".into(),
                ));
            }
            let red = rep.reduce(ideal)?;
            if !red.preserves_gram() || red.verify_relations(symbol_pres).iter().any(|c| !c.ok) {
                return Err(Error::Verification(format!(
                    "reduction mod {} breaks a defining relation", ideal.p
                )));
            }
            let action = matrix_group_closure(&red.gens, &red.tables, graded, cap)?;
            if graded {
                notes.push(format!(
                    "parity-graded closure: order {} (orientation double cover of the matrix image)",
                    action.size
                ));
            } else {
                notes.push(format!("matrix image closed at order {}", action.size));
            }
            if descriptor.symbol.rank() == 5 {
                let q = ideal.field().order();
                let expected = rank5_image_order(q);
                let ratio = action.size as u64 / expected;
                if ratio * expected == action.size as u64 && (1..=2).contains(&ratio) {
                    notes.push(format!(
                        "order = {ratio} * (q^10 - q^8 - q^6 + q^4) at q = {q}"
                    ));
                } else {
                    notes.push(format!(
                        "order does not match the q^10 - q^8 - q^6 + q^4 family at q = {q}"
                    ));
                }
            }
            Ok((action, notes))
        }
        Method::Word { words } => {
            let mut rels = symbol_pres.relators();
            rels.extend(words.iter().map(|w| w.expanded()));
            let action = todd_coxeter(symbol_pres.rank, &rels, cap)?;
            notes.push(format!(
                "coset enumeration with {} extra relator(s) closed at order {}",
                words.len(),
                action.size
            ));
            Ok((action, notes))
        }
        Method::Covering { .. } => unreachable!("coverings are flattened before leaf dispatch"),
    }
}

pub fn build_group(descriptor: &Descriptor, opts: &BuildOptions) -> Result<BuiltGroup> {
    let pres = Presentation::from_symbol(&descriptor.symbol);
    let (leaf, h_words) = flatten_coverings(&descriptor.method);
    let leaf_key = format!("{}|{}", descriptor.symbol, leaf);

    let mut notes = Vec::new();
    let cached = opts
        .cache_dir
        .as_deref()
        .and_then(|dir| cache_load(dir, &leaf_key, &pres));
    let action = match cached {
        Some(action) => {
            notes.push(format!("loaded group of order {} from cache", action.size));
            action
        }
        None => {
            let (action, leaf_notes) = build_leaf(&pres, descriptor, leaf, opts.cap)?;
            notes.extend(leaf_notes);
            if let Some(dir) = opts.cache_dir.as_deref() {
                if let Err(e) = cache_store(dir, &leaf_key, &action) {
                    notes.push(format!("group cache write failed: {e}"));
                }
            }
            action
        }
    };
    if !h_words.is_empty() {
        notes.push(format!(
            "covering quotient by the subgroup generated by {} word(s)",
            h_words.len()
        ));
    }
    Ok(BuiltGroup { pres, action, h_words, notes })
}

/// Everything the workbench knows about one constructed code.
pub struct CodeBuild {
    pub descriptor: Descriptor,
    pub pres: Presentation,
    pub complex: Complex,
    pub code: CssCode,
    pub properness: Properness,
    /// For covering quotients: whether no nontrivial subgroup element is
    /// conjugate into a product of two parabolic images, so the quotient
    /// inherits the cover's local cell structure.
    pub locality_preserved: Option<bool>,
    pub notes: Vec<String>,
}

impl CodeBuild {
    pub fn bundle(&self) -> CodeBundle {
        CodeBundle::assemble(&self.descriptor.to_string(), &self.complex, &self.code)
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("descriptor: {}\n", self.descriptor));
        s.push_str(&self.complex.report());
        s.push_str(&format!(
            "[[n, k]] = [[{}, {}]], rate >= {:.6}\n",
            self.code.n,
            self.code.k,
            self.code.rate_lower_bound()
        ));
        s.push_str(&format!(
            "counts proper: {}; incidence proper: {}; chi = {}",
            self.properness.counts_proper, self.properness.incidence_proper,
            self.properness.chi_counts
        ));
        match self.properness.chi_if_proper {
            Some(chi) => s.push_str(&format!(" (chi if proper: {chi})\n")),
            None => s.push('\n'),
        }
        if let Some(ok) = self.locality_preserved {
            s.push_str(&format!("covering quotient preserves locality: {ok}\n"));
        }
        for note in &self.notes {
            s.push_str(&format!("note: {note}\n"));
        }
        s
    }
}

pub fn build_code(descriptor: &Descriptor, opts: &BuildOptions) -> Result<CodeBuild> {
    let built = build_group(descriptor, opts)?;
    let notes = built.notes;

    let (complex, locality_preserved) = if built.h_words.is_empty() {
        (Complex::build(&built.action)?, None)
    } else {
        let cover = Complex::build(&built.action)?;
        if !quotient_preserves_locality(&built.action, &cover, &built.h_words) {
            return Err(Error::Verification(
                "covering quotient violates locality: a nontrivial subgroup element \
                 is conjugate into a product of two parabolic images, so quotient \
                 checks are not local images of cover checks"
                    .into(),
            ));
        }
        (Complex::build_quotient(&built.action, &built.h_words)?, Some(true))
    };

    if !complex.boundaries_square_to_zero() {
        return Err(Error::Verification(
            "boundary maps do not square to zero mod 2".into(),
        ));
    }
    let code = CssCode::from_complex(&complex)?;
    let properness = properness(&complex, &built.pres)?;
    Ok(CodeBuild {
        descriptor: descriptor.clone(),
        pres: built.pres,
        complex,
        code,
        properness,
        locality_preserved,
        notes,
    })
}

// --- Group cache ---------------------------------------------------------
//
// Binary layout: magic "HCG1", key length + key string (the symbol plus the
// leaf method), ngens, size, then the right-action tables generator by
// generator, all integers little-endian u32. Any mismatch or short read
// invalidates the entry and the group is rebuilt.

const CACHE_MAGIC: &[u8; 4] = b"HCG1";

fn cache_path(dir: &Path, key: &str) -> PathBuf {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in key.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    dir.join(format!("{h:016x}.group"))
}

fn write_u32(w: &mut impl Write, v: u32) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn read_u32(r: &mut impl Read) -> std::io::Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn cache_store(dir: &Path, key: &str, action: &GroupAction) -> Result<()> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, key);
    let tmp = path.with_extension("partial");
    {
        let mut w = std::io::BufWriter::new(fs::File::create(&tmp)?);
        w.write_all(CACHE_MAGIC)?;
        write_u32(&mut w, key.len() as u32)?;
        w.write_all(key.as_bytes())?;
        write_u32(&mut w, action.ngens as u32)?;
        write_u32(&mut w, action.size as u32)?;
        for g in 0..action.ngens {
            for &x in action.table(g as u8) {
                write_u32(&mut w, x)?;
            }
        }
        w.flush()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(())
}

/// Load a cached group, or None if absent/corrupt/stale. The loaded action
/// must still satisfy the defining relators; this guards against collisions
/// and file damage at the cost of one pass over the tables.
fn cache_load(dir: &Path, key: &str, pres: &Presentation) -> Option<GroupAction> {
    let mut r = std::io::BufReader::new(fs::File::open(cache_path(dir, key)).ok()?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).ok()?;
    if &magic != CACHE_MAGIC {
        return None;
    }
    let key_len = read_u32(&mut r).ok()? as usize;
    let mut key_buf = vec![0u8; key_len];
    r.read_exact(&mut key_buf).ok()?;
    if key_buf != key.as_bytes() {
        return None;
    }
    let ngens = read_u32(&mut r).ok()? as usize;
    let size = read_u32(&mut r).ok()? as usize;
    if ngens != pres.rank || size == 0 {
        return None;
    }
    let mut act = vec![vec![0u32; size]; ngens];
    for table in act.iter_mut() {
        for slot in table.iter_mut() {
            let v = read_u32(&mut r).ok()?;
            if v as usize >= size {
                return None;
            }
            *slot = v;
        }
    }
    let mut trailer = [0u8; 1];
    if r.read(&mut trailer).ok()? != 0 {
        return None;
    }
    let action = GroupAction::standardize(ngens, &act, 0);
    if action.size != size || !action.satisfies_relators(&pres.relators()) {
        return None;
    }
    Some(action)
}
