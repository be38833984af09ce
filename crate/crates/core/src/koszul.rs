//! Direct computation of `(Tor_p)_{p+q}` from the Koszul-type complex
//!
//! ```text
//! ∧^{p+1} V ⊗ H⁰(L^{q-1}) → ∧^p V ⊗ H⁰(L^q) → ∧^{p-1} V ⊗ H⁰(L^{q+1})
//! ```
//!
//! with `V = V_1 ⊗ .. ⊗ V_d` and `H⁰(L^q) = Sym^q V_1 ⊗ .. ⊗ Sym^q V_d`.
//! Nothing here goes through simplicial complexes, so it serves as an
//! independent check of the homological route.
//!
//! Wedge basis elements are strictly increasing tuples of tensor indices;
//! `d(v_{s_0} ∧ .. ∧ v_{s_{p-1}} ⊗ m) = Σ_i (-1)^i (.. v̂_{s_i} ..) ⊗ m·v_{s_i}`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::SegreParams;
use crate::error::{Error, Result};
use crate::homology::{RankEngine, SparseMatrix};

/// Largest term dimension the builder accepts by default.
pub const DEFAULT_TERM_LIMIT: u128 = 2_000_000;

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim H⁰(L^q) = Π C(n_i + q, n_i)`.
pub fn h0_dim(dims: &SegreParams, q: usize) -> u128 {
    dims.dims().iter().map(|&n| binomial((n + q) as u128, n as u128)).product()
}

fn tensor_dim(dims: &SegreParams) -> usize {
    dims.dims().iter().map(|n| n + 1).product()
}

fn term_dim(dims: &SegreParams, wedge: isize, q: isize) -> u128 {
    if wedge < 0 || q < 0 {
        return 0;
    }
    binomial(tensor_dim(dims) as u128, wedge as u128) * h0_dim(dims, q as usize)
}

/// Basis element of `∧^w V ⊗ H⁰(L^q)`: a wedge of tensor indices and the
/// concatenated exponent vectors of the symmetric factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Element {
    wedge: Vec<u16>,
    exps: Vec<u8>,
}

struct Layout {
    /// tensor index -> coordinate per factor, flattened over all blocks
    coords: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

impl Layout {
    fn new(dims: &SegreParams) -> Self {
        let dims = dims.dims().to_vec();
        let mut offsets = Vec::new();
        let mut w = 0;
        for n in &dims {
            offsets.push(w);
            w += n + 1;
        }
        // odometer over (i_1, .., i_d), last factor fastest
        let mut coords = Vec::new();
        let mut idx = vec![0usize; dims.len()];
        loop {
            coords.push(idx.iter().zip(&offsets).map(|(i, o)| i + o).collect());
            let mut k = dims.len();
            loop {
                if k == 0 {
                    return Layout { coords, dims };
                }
                k -= 1;
                if idx[k] < dims[k] {
                    idx[k] += 1;
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    fn multidegree(&self, e: &Element) -> Vec<i64> {
        let mut m: Vec<i64> = e.exps.iter().map(|&x| i64::from(x)).collect();
        for &s in &e.wedge {
            for &c in &self.coords[s as usize] {
                m[c] += 1;
            }
        }
        m
    }

    /// All exponent vectors of `Sym^q V_1 ⊗ .. ⊗ Sym^q V_d`.
    fn monomials(&self, q: usize) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        for &n in &self.dims {
            let mut next = Vec::new();
            let parts = sym_exponents(q, n + 1);
            for prefix in &out {
                for part in &parts {
                    let mut v = prefix.clone();
                    v.extend_from_slice(part);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    fn basis(&self, wedge: usize, q: usize) -> Vec<Element> {
        let n = self.coords.len();
        let monos = self.monomials(q);
        let mut out = Vec::new();
        for subset in subsets(n, wedge) {
            for m in &monos {
                out.push(Element {
                    wedge: subset.clone(),
                    exps: m.clone(),
                });
            }
        }
        out
    }

    fn differential(&self, e: &Element) -> Vec<(Element, i64)> {
        (0..e.wedge.len())
            .map(|i| {
                let mut wedge = e.wedge.clone();
                let s = wedge.remove(i);
                let mut exps = e.exps.clone();
                for &c in &self.coords[s as usize] {
                    exps[c] += 1;
                }
                (Element { wedge, exps }, if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }
}

fn sym_exponents(q: usize, parts: usize) -> Vec<Vec<u8>> {
    if parts == 1 {
        return vec![vec![q as u8]];
    }
    let mut out = Vec::new();
    for first in (0..=q).rev() {
        for mut rest in sym_exponents(q - first, parts - 1) {
            rest.insert(0, first as u8);
            out.push(rest);
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i as u16);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Homology of the Koszul complex at `∧^p V ⊗ H⁰(L^q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulSlice {
    pub dims: Vec<usize>,
    pub p: usize,
    pub q: usize,
    pub in_dim: usize,
    pub mid_dim: usize,
    pub out_dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub tor_dim: usize,
    /// Number of multidegree blocks of the middle term.
    pub blocks: usize,
    /// Nonzero per-multidegree homology, sorted by multidegree.
    pub block_tor: Vec<(Vec<i64>, usize)>,
    /// `d ∘ d = 0` was checked on every basis element.
    pub composite_zero: bool,
}

/// `dim (Tor_p)_{p+q}` from explicit matrices, assembled per multidegree.
pub fn koszul_tor_dim(dims: &SegreParams, p: usize, q: usize, engine: &RankEngine) -> Result<KoszulSlice> {
    koszul_tor_dim_limited(dims, p, q, engine, DEFAULT_TERM_LIMIT)
}

pub fn koszul_tor_dim_limited(dims: &SegreParams, p: usize, q: usize, engine: &RankEngine, limit: u128) -> Result<KoszulSlice> {
    if p < 1 {
        return Err(Error::InvalidParams("Koszul slices need p >= 1".into()));
    }
    let (p_i, q_i) = (p as isize, q as isize);
    for (w, s) in [(p_i + 1, q_i - 1), (p_i, q_i), (p_i - 1, q_i + 1)] {
        let size = term_dim(dims, w, s);
        if size > limit {
            return Err(Error::Resource(format!(
                "Koszul term of wedge degree {w} and symmetric degree {s} has dimension {size} > {limit}"
            )));
        }
    }
    let layout = Layout::new(dims);
    let ins = if q == 0 { Vec::new() } else { layout.basis(p + 1, q - 1) };
    let mids = layout.basis(p, q);
    let outs = layout.basis(p - 1, q + 1);

    let group = |basis: &[Element]| {
        let mut blocks: BTreeMap<Vec<i64>, Vec<Element>> = BTreeMap::new();
        for e in basis {
            blocks.entry(layout.multidegree(e)).or_default().push(e.clone());
        }
        blocks
    };
    let in_blocks = group(&ins);
    let mid_blocks = group(&mids);
    let out_blocks = group(&outs);

    let composite_zero = ins.par_iter().all(|e| {
        let mut acc: HashMap<Element, i64> = HashMap::new();
        for (f, s) in layout.differential(e) {
            for (g, t) in layout.differential(&f) {
                *acc.entry(g).or_default() += s * t;
            }
        }
        acc.values().all(|&v| v == 0)
    });
    if !composite_zero {
        return Err(Error::Construction("Koszul differentials do not compose to zero".into()));
    }

    let empty = Vec::new();
    let per_block: Vec<(Vec<i64>, usize, usize, usize)> = mid_blocks
        .par_iter()
        .map(|(deg, mid)| {
            let src = in_blocks.get(deg).unwrap_or(&empty);
            let dst = out_blocks.get(deg).unwrap_or(&empty);
            let rank_in = engine.rank(&block_matrix(&layout, src, mid)).rank;
            let rank_out = engine.rank(&block_matrix(&layout, mid, dst)).rank;
            (deg.clone(), mid.len(), rank_in, rank_out)
        })
        .collect();

    let mut rank_in = 0;
    let mut rank_out = 0;
    let mut block_tor = Vec::new();
    for (deg, size, ri, ro) in &per_block {
        rank_in += ri;
        rank_out += ro;
        let tor = size - ri - ro;
        if tor > 0 {
            block_tor.push((deg.clone(), tor));
        }
    }
    Ok(KoszulSlice {
        dims: dims.dims().to_vec(),
        p,
        q,
        in_dim: ins.len(),
        mid_dim: mids.len(),
        out_dim: outs.len(),
        rank_in,
        rank_out,
        tor_dim: mids.len() - rank_in - rank_out,
        blocks: mid_blocks.len(),
        block_tor,
        composite_zero,
    })
}

fn block_matrix(layout: &Layout, src: &[Element], dst: &[Element]) -> SparseMatrix<i64> {
    let index: HashMap<&Element, usize> = dst.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut m = SparseMatrix::zeros(dst.len(), src.len());
    for (c, e) in src.iter().enumerate() {
        for (f, s) in layout.differential(e) {
            let r = *index.get(&f).expect("the differential preserves multidegree");
            m.add_entry(r, c, s);
        }
    }
    m
}

/// Both routes to `dim (Tor_p)_{p+q}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub p: usize,
    pub q: usize,
    pub koszul: usize,
    pub cps: usize,
    /// Totals agree.
    pub matches: bool,
    /// Every multidegree block agrees too.
    pub blocks_match: bool,
}

/// Compares the Koszul computation with `Σ_{deg b = p+q} rank H̃_{p-1}(Δ_b)`.
pub fn cross_check(dims: &SegreParams, p: usize, q: usize, engine: &RankEngine) -> Result<CrossCheck> {
    cross_check_limited(dims, p, q, engine, DEFAULT_TERM_LIMIT)
}

/// [`cross_check`] with an explicit bound on the Koszul term dimensions.
pub fn cross_check_limited(dims: &SegreParams, p: usize, q: usize, engine: &RankEngine, limit: u128) -> Result<CrossCheck> {
    let slice = koszul_tor_dim_limited(dims, p, q, engine, limit)?;
    let cfg = crate::config::PointConfiguration::segre(dims);
    let table = crate::syzygy::graded_betti(&cfg, p as isize - 1, p + q, engine)?;
    let cps_blocks: Vec<(Vec<i64>, usize)> = table.entries.iter().map(|e| (e.b.coords().to_vec(), e.rank)).collect();
    Ok(CrossCheck {
        p,
        q,
        koszul: slice.tor_dim,
        cps: table.total,
        matches: slice.tor_dim == table.total,
        blocks_match: cps_blocks == slice.block_tor,
    })
}
