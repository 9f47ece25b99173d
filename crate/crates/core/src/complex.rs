//! Cell complexes of tessellated manifolds from regular group actions.
//!
//! Given the regular action of a finite quotient G of a rank-r Coxeter group,
//! the i-dimensional cells of the tessellation are the orbits of the right
//! action of the parabolic subgroup generated by all reflections except the
//! i-th (equivalently, its right cosets). Incidence between an (i-1)-cell
//! and an i-cell is coset intersection; the *multiplicity* of an incidence is
//! the number of distinct pair-parabolic cosets inside that intersection,
//! which is the same for every incident pair. Boundary maps over GF(2) keep
//! an incidence exactly when the multiplicity is odd.
//!
//! A quotient by a left-acting subgroup H (a covering quotient) uses double
//! cosets H g S instead; [`quotient_preserves_locality`] decides whether the
//! quotient keeps the local structure of the cover intact.

use crate::coxeter::Presentation;
use crate::gf2::BitMatrix;
use crate::group::{todd_coxeter, GroupAction};
use crate::{Error, Result};

/// Cell data per dimension, plus exact incidence bookkeeping. Vectors
/// indexed by dimension; pair quantities (`mu`, `pair_image_orders`,
/// `intersection_orders`, `faces`) are indexed by the upper dimension v of
/// the pair (v-1, v), with slot 0 unused.
pub struct Complex {
    pub dim: usize,
    pub group_order: usize,
    pub subgroup_order: usize,
    pub counts: Vec<usize>,
    /// Orders of the parabolic images \bar S_i inside the finite group.
    pub stab_orders: Vec<usize>,
    /// Incidence multiplicity for each dimension pair (v-1, v).
    pub mu: Vec<u64>,
    /// Orders of the images of the pair parabolics (omit both v-1 and v).
    pub pair_image_orders: Vec<usize>,
    /// |\bar S_{v-1} ∩ \bar S_v|, measured from element pair counts.
    pub intersection_orders: Vec<usize>,
    /// faces[v][b] = sorted (v-1)-cell ids incident to v-cell b.
    pub faces: Vec<Vec<Vec<u32>>>,
    /// cell_of[i][x] = id of the i-cell containing group element x.
    pub cell_of: Vec<Vec<u32>>,
    /// reps[i][c] = least group element lying in i-cell c.
    pub reps: Vec<Vec<u32>>,
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            self.parent[x as usize] = self.parent[self.parent[x as usize] as usize];
            x = self.parent[x as usize];
        }
        x
    }

    /// Union keeping the smaller index as root, so every component's root is
    /// its least element — a canonical cell label.
    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
    }
}

impl Complex {
    pub fn build(action: &GroupAction) -> Result<Complex> {
        Complex::build_inner(action, &[])
    }

    /// Quotient by the left action of the subgroup generated by `h_words`.
    pub fn build_quotient(action: &GroupAction, h_words: &[Vec<u8>]) -> Result<Complex> {
        Complex::build_inner(action, h_words)
    }

    fn build_inner(action: &GroupAction, h_words: &[Vec<u8>]) -> Result<Complex> {
        let rank = action.ngens;
        let dim = rank - 1;
        let n = action.size;

        let subgroup_order = if h_words.is_empty() {
            1
        } else {
            action.subgroup_closure(h_words).len()
        };
        let h_left_tables: Vec<Vec<u32>> = if h_words.is_empty() {
            Vec::new()
        } else {
            let left = action.left_tables();
            h_words
                .iter()
                .map(|w| {
                    (0..n as u32)
                        .map(|x| GroupAction::left_apply_word(&left, w, x))
                        .collect()
                })
                .collect()
        };

        // Parabolic image orders: closure of all generators but one.
        let stab_orders: Vec<usize> = (0..rank)
            .map(|i| {
                let gens: Vec<Vec<u8>> =
                    (0..rank as u8).filter(|&g| g as usize != i).map(|g| vec![g]).collect();
                action.subgroup_closure(&gens).len()
            })
            .collect();

        // Cells per dimension: orbits of the parabolic right action, plus the
        // left H action for quotients.
        let mut cell_of: Vec<Vec<u32>> = Vec::with_capacity(rank);
        let mut reps: Vec<Vec<u32>> = Vec::with_capacity(rank);
        let mut counts: Vec<usize> = Vec::with_capacity(rank);
        for i in 0..rank {
            let mut uf = UnionFind::new(n);
            for g in 0..rank as u8 {
                if g as usize == i {
                    continue;
                }
                let tab = action.table(g);
                for x in 0..n as u32 {
                    uf.union(x, tab[x as usize]);
                }
            }
            for t in &h_left_tables {
                for x in 0..n as u32 {
                    uf.union(x, t[x as usize]);
                }
            }
            let mut ids = vec![u32::MAX; n];
            let mut rs: Vec<u32> = Vec::new();
            for x in 0..n as u32 {
                if uf.find(x) == x {
                    ids[x as usize] = rs.len() as u32;
                    rs.push(x);
                }
            }
            let col: Vec<u32> = (0..n as u32).map(|x| ids[uf.find(x) as usize]).collect();
            counts.push(rs.len());
            cell_of.push(col);
            reps.push(rs);

            // Every cell must be a (double) coset of the same size.
            let expect = subgroup_order
                .checked_mul(stab_orders[i])
                .filter(|&s| s * counts[i] == n)
                .ok_or_else(|| {
                    Error::Verification(format!(
                        "dimension-{i} cells do not partition the group into \
                         uniform double cosets; the covering subgroup acts badly"
                    ))
                })?;
            let mut sizes = vec![0usize; counts[i]];
            for x in 0..n {
                sizes[cell_of[i][x] as usize] += 1;
            }
            if sizes.iter().any(|&s| s != expect) {
                return Err(Error::Verification(format!(
                    "dimension-{i} cells have non-uniform sizes; \
                     the covering subgroup does not act freely on cells"
                )));
            }
        }

        // Incidence via element pair counts. For each pair of consecutive
        // dimensions, every element x contributes the flag
        // (cell_{v-1}(x), cell_v(x)); the count of each distinct flag pair
        // must be uniform: |H| * |\bar S_{v-1} ∩ \bar S_v|.
        let mut mu = vec![0u64; rank];
        let mut pair_image_orders = vec![0usize; rank];
        let mut intersection_orders = vec![0usize; rank];
        let mut faces: Vec<Vec<Vec<u32>>> = vec![Vec::new(); rank];
        for v in 1..rank {
            let u = v - 1;
            let mut pairs: Vec<(u32, u32)> = (0..n)
                .map(|x| (cell_of[v][x], cell_of[u][x]))
                .collect();
            pairs.sort_unstable();
            let mut lists: Vec<Vec<u32>> = vec![Vec::new(); counts[v]];
            let mut run_len = 0usize;
            let mut uniform: Option<usize> = None;
            let mut prev: Option<(u32, u32)> = None;
            for &p in pairs.iter() {
                if prev == Some(p) {
                    run_len += 1;
                    continue;
                }
                if let Some(q) = prev {
                    match uniform {
                        None => uniform = Some(run_len),
                        Some(r) if r != run_len => {
                            return Err(Error::Verification(format!(
                                "incidence between dimensions {u} and {v} is not \
                                 uniform ({r} vs {run_len} shared elements)"
                            )));
                        }
                        _ => {}
                    }
                    lists[q.0 as usize].push(q.1);
                }
                prev = Some(p);
                run_len = 1;
            }
            if let Some(q) = prev {
                if let Some(r) = uniform {
                    if r != run_len {
                        return Err(Error::Verification(format!(
                            "incidence between dimensions {u} and {v} is not \
                             uniform ({r} vs {run_len} shared elements)"
                        )));
                    }
                }
                lists[q.0 as usize].push(q.1);
            }
            let run = uniform.unwrap_or(run_len);
            if run % subgroup_order != 0 {
                return Err(Error::Verification(format!(
                    "incidence count between dimensions {u} and {v} is not a \
                     multiple of the covering subgroup order"
                )));
            }
            let inter = run / subgroup_order;

            let pair_gens: Vec<Vec<u8>> = (0..rank as u8)
                .filter(|&g| g as usize != u && g as usize != v)
                .map(|g| vec![g])
                .collect();
            let pair_order = action.subgroup_closure(&pair_gens).len();
            // The pair parabolic image sits inside the intersection, so its
            // order divides the measured intersection order (Lagrange).
            assert_eq!(
                inter % pair_order,
                0,
                "pair parabolic order must divide the intersection order"
            );
            mu[v] = (inter / pair_order) as u64;
            pair_image_orders[v] = pair_order;
            intersection_orders[v] = inter;
            faces[v] = lists;
        }

        Ok(Complex {
            dim,
            group_order: n,
            subgroup_order,
            counts,
            stab_orders,
            mu,
            pair_image_orders,
            intersection_orders,
            faces,
            cell_of,
            reps,
        })
    }

    pub fn chi(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// GF(2) boundary map C_v -> C_{v-1}: rows are (v-1)-cells, columns are
    /// v-cells; the zero matrix when the incidence multiplicity is even.
    pub fn boundary_matrix(&self, v: usize) -> BitMatrix {
        assert!((1..=self.dim).contains(&v));
        let mut m = BitMatrix::zero(self.counts[v - 1], self.counts[v]);
        if self.mu[v] % 2 == 1 {
            for (b, list) in self.faces[v].iter().enumerate() {
                for &a in list {
                    m.set(a as usize, b);
                }
            }
        }
        m
    }

    /// cofaces[a] = sorted v-cell ids having the (v-1)-cell a as a face.
    pub fn coface_lists(&self, v: usize) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = vec![Vec::new(); self.counts[v - 1]];
        for (b, list) in self.faces[v].iter().enumerate() {
            for &a in list {
                out[a as usize].push(b as u32);
            }
        }
        out
    }

    /// ∂_{v-1} ∘ ∂_v = 0 over GF(2) for all v, via sparse accumulation.
    pub fn boundaries_square_to_zero(&self) -> bool {
        for v in 2..=self.dim {
            if self.mu[v] % 2 == 0 || self.mu[v - 1] % 2 == 0 {
                continue;
            }
            let mut acc: Vec<u32> = Vec::new();
            for b in 0..self.counts[v] {
                acc.clear();
                for &a in &self.faces[v][b] {
                    acc.extend(&self.faces[v - 1][a as usize]);
                }
                acc.sort_unstable();
                let mut i = 0;
                while i < acc.len() {
                    let j = acc[i..].iter().take_while(|&&x| x == acc[i]).count();
                    if j % 2 == 1 {
                        return false;
                    }
                    i += j;
                }
            }
        }
        true
    }

    /// Left multiplication by a fixed group element permutes cells (a cell
    /// automorphism of the complex). Returns None if the given left table is
    /// not cell-wise well defined (only possible for quotient complexes).
    pub fn cell_action_from_left(&self, dimension: usize, left_table: &[u32]) -> Option<Vec<u32>> {
        let col = &self.cell_of[dimension];
        let mut perm = vec![u32::MAX; self.counts[dimension]];
        for x in 0..left_table.len() {
            let src = col[x] as usize;
            let dst = col[left_table[x] as usize];
            if perm[src] == u32::MAX {
                perm[src] = dst;
            } else if perm[src] != dst {
                return None;
            }
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p == u32::MAX || seen[p as usize] {
                return None;
            }
            seen[p as usize] = true;
        }
        Some(perm)
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "group order {} / covering subgroup order {}\n",
            self.group_order, self.subgroup_order
        ));
        s.push_str(&format!("cell counts: {:?}\n", self.counts));
        s.push_str(&format!("parabolic image orders: {:?}\n", self.stab_orders));
        s.push_str(&format!("incidence multiplicities (v-1,v): {:?}\n", &self.mu[1..]));
        s.push_str(&format!("euler characteristic: {}\n", self.chi()));
        s
    }
}

/// Orders of the parabolic subgroups in the *universal* Coxeter group
/// (before taking any finite quotient), by coset enumeration on the
/// sub-presentations. `omit` lists the generators left out.
pub fn universal_parabolic_order(pres: &Presentation, omit: &[usize]) -> Result<usize> {
    let keep: Vec<usize> = (0..pres.rank).filter(|i| !omit.contains(i)).collect();
    let sub = pres.sub_presentation(&keep);
    if keep.is_empty() {
        return Ok(1);
    }
    let g = todd_coxeter(keep.len(), &sub.relators(), 1_000_000)?;
    Ok(g.size)
}

/// How faithfully the finite quotient reproduces the universal tessellation:
/// parabolic images vs universal parabolic orders (counts level) and
/// incidence multiplicities (incidence level).
pub struct Properness {
    pub universal_orders: Vec<usize>,
    pub image_orders: Vec<usize>,
    pub universal_pair_orders: Vec<usize>,
    pub image_pair_orders: Vec<usize>,
    pub counts_proper: bool,
    pub incidence_proper: bool,
    pub chi_counts: i64,
    /// |G/H| * sum_i (-1)^i / |S_i universal|, when every term is integral:
    /// the Euler characteristic the counts would give if all parabolics
    /// embedded properly.
    pub chi_if_proper: Option<i64>,
}

pub fn properness(complex: &Complex, pres: &Presentation) -> Result<Properness> {
    let rank = pres.rank;
    let mut universal_orders = Vec::with_capacity(rank);
    for i in 0..rank {
        universal_orders.push(universal_parabolic_order(pres, &[i])?);
    }
    let mut universal_pair_orders = vec![0usize; rank];
    for v in 1..rank {
        universal_pair_orders[v] = universal_parabolic_order(pres, &[v - 1, v])?;
    }
    let counts_proper = universal_orders == complex.stab_orders;
    let incidence_proper = complex.mu[1..].iter().all(|&m| m == 1)
        && complex.pair_image_orders[1..] == universal_pair_orders[1..];
    let sheets = complex.group_order / complex.subgroup_order;
    let mut chi_if_proper = Some(0i64);
    for (i, &u) in universal_orders.iter().enumerate() {
        if sheets % u != 0 {
            chi_if_proper = None;
            break;
        }
        let term = (sheets / u) as i64;
        chi_if_proper = chi_if_proper.map(|c| if i % 2 == 0 { c + term } else { c - term });
    }
    Ok(Properness {
        universal_orders,
        image_orders: complex.stab_orders.clone(),
        universal_pair_orders,
        image_pair_orders: complex.pair_image_orders.clone(),
        counts_proper,
        incidence_proper,
        chi_counts: complex.chi(),
        chi_if_proper,
    })
}

/// Covering-quotient locality check: the quotient by the left action of
/// H = <h_words> preserves the local cell structure of the cover iff no
/// nontrivial element of H is conjugate into any product of two parabolic
/// image subgroups. Sweeps the full conjugacy class of every nontrivial
/// element of H against the marked product sets.
pub fn quotient_preserves_locality(
    action: &GroupAction,
    cover: &Complex,
    h_words: &[Vec<u8>],
) -> bool {
    let n = action.size;
    let rank = action.ngens;

    // Mark every element of every product set \bar S_i \bar S_j. An element
    // x lies in s \bar S_j iff it shares a j-cell with s.
    let mut marked = vec![false; n];
    for i in 0..rank {
        let id_cell = cover.cell_of[i][0];
        let stab: Vec<u32> = (0..n as u32)
            .filter(|&x| cover.cell_of[i][x as usize] == id_cell)
            .collect();
        for j in 0..rank {
            let mut touched = vec![false; cover.counts[j]];
            for &s in &stab {
                touched[cover.cell_of[j][s as usize] as usize] = true;
            }
            for x in 0..n {
                if touched[cover.cell_of[j][x] as usize] {
                    marked[x] = true;
                }
            }
        }
    }

    let left = action.left_tables();
    let members = action.subgroup_closure(h_words);
    for &h in &members {
        if h == 0 {
            continue;
        }
        // Conjugacy class orbit of h under x -> a x a (generators are
        // involutions), breadth-first.
        let mut seen = std::collections::HashSet::new();
        let mut queue = vec![h];
        seen.insert(h);
        while let Some(x) = queue.pop() {
            if marked[x as usize] {
                return false;
            }
            for g in 0..rank as u8 {
                let y = action.apply(g, left[g as usize][x as usize]);
                if seen.insert(y) {
                    queue.push(y);
                }
            }
        }
    }
    true
}
