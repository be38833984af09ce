//! Boundary matrices, reduced Betti numbers and boundary filling.

mod matrix;
mod rank;
mod reduce;

use crate::chains::Chain;
use crate::complex::{ComplexKind, ComplexSpec, SlicedComplex};
use crate::error::{Error, Result};
use crate::scalar::{Exact, Field, FieldOps};

pub use matrix::SparseMatrix;
pub use rank::{rank_exact, rank_mod_p, RankEngine, RankOutcome, DEFAULT_SEED};
use reduce::{reduce, solve, Reduction, SparseVec};

/// Matrix of `∂_j` from the `j`-faces to the `(j-1)`-faces of `cx`, in
/// enumeration order. For `j = 0` this is the augmentation row.
pub fn boundary_matrix(cx: &SlicedComplex, j: isize) -> Result<SparseMatrix<i64>> {
    if j < 0 {
        // ∂_{-1} maps into the zero group
        return Ok(SparseMatrix::zeros(0, cx.count(j)?));
    }
    let cols = cx.faces(j)?;
    let rows = cx.count(j - 1)?;
    let mut m = SparseMatrix::zeros(rows, cols.len());
    for (c, face) in cols.iter().enumerate() {
        for i in 0..face.len() {
            let facet = face.facet(i);
            let r = cx.index_of(&facet).expect("complexes are closed under taking faces");
            m.add_entry(r, c, if i % 2 == 0 { 1 } else { -1 });
        }
    }
    Ok(m)
}

/// Reduced homology of one complex in one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub config: String,
    pub kind: ComplexKind,
    pub j: isize,
    pub f_prev: usize,
    pub f_j: usize,
    pub f_next: usize,
    pub rank_j: usize,
    pub rank_next: usize,
    pub betti: usize,
    /// Some rank needed the exact rational fallback.
    pub exact_fallback: bool,
}

/// Rank of `H̃_j` of the complex over the rationals.
pub fn betti_reduced(spec: &ComplexSpec<'_>, j: isize, engine: &RankEngine) -> Result<HomologyReport> {
    if j < 0 {
        return Err(Error::InvalidParams(format!("homology index {j} < 0")));
    }
    let cx = spec.enumerate(j + 1)?;
    betti_of(&cx, spec.cfg().label(), j, engine)
}

/// Like [`betti_reduced`] on an already enumerated complex. Needs faces up
/// to `j + 1` unless the enumeration is complete. `j = -1` is allowed.
pub fn betti_of(cx: &SlicedComplex, config: &str, j: isize, engine: &RankEngine) -> Result<HomologyReport> {
    let f_prev = cx.count(j - 1)?;
    let f_j = cx.count(j)?;
    let (f_next, next) = if j + 1 > cx.cap() && cx.is_complete() {
        (0, RankOutcome { rank: 0, exact_fallback: false })
    } else {
        let m = boundary_matrix(cx, j + 1)?;
        (m.cols(), engine.rank(&m))
    };
    let this = engine.rank(&boundary_matrix(cx, j)?);
    let betti = f_j
        .checked_sub(this.rank + next.rank)
        .expect("ranks of consecutive boundary maps cannot exceed the face count");
    Ok(HomologyReport {
        config: config.to_string(),
        kind: cx.kind().clone(),
        j,
        f_prev,
        f_j,
        f_next,
        rank_j: this.rank,
        rank_next: next.rank,
        betti,
        exact_fallback: this.exact_fallback || next.exact_fallback,
    })
}

/// All reduced Betti numbers `H̃_{-1}, .., H̃_dim` of a fully enumerated
/// complex.
pub fn all_bettis(cx: &SlicedComplex, engine: &RankEngine) -> Result<Vec<usize>> {
    if !cx.is_complete() {
        return Err(Error::InvalidParams("complex was not fully enumerated".into()));
    }
    let top = (-1..=cx.cap()).rev().find(|&d| cx.count(d).unwrap_or(0) > 0).unwrap_or(-1);
    let mut ranks = Vec::new();
    for j in -1..=top {
        ranks.push(engine.rank(&boundary_matrix(cx, j)?).rank);
    }
    ranks.push(0);
    (-1..=top)
        .map(|j| {
            let i = (j + 1) as usize;
            Ok(cx.count(j)? - ranks[i] - ranks[i + 1])
        })
        .collect()
}

/// Euler identity `Σ (-1)^j f_j = Σ (-1)^j betti_j` over `j >= -1`.
pub fn euler_consistent(cx: &SlicedComplex, engine: &RankEngine) -> Result<bool> {
    let bettis = all_bettis(cx, engine)?;
    let sign = |j: usize| if j % 2 == 0 { -1i64 } else { 1 }; // index 0 is j = -1
    let lhs: i64 = cx.f_vector().iter().enumerate().map(|(i, &f)| sign(i) * f as i64).sum();
    let rhs: i64 = bettis.iter().enumerate().map(|(i, &b)| sign(i) * b as i64).sum();
    Ok(lhs == rhs)
}

fn to_sparse<F: Field>(cx: &SlicedComplex, chain: &Chain<F>) -> Result<SparseVec<F>> {
    let mut v: SparseVec<F> = chain
        .terms()
        .map(|(s, c)| {
            cx.index_of(s)
                .map(|i| (i, c.clone()))
                .ok_or_else(|| Error::NotSupported(format!("{s:?} is not a face of {}", cx.kind())))
        })
        .collect::<Result<_>>()?;
    v.sort_by_key(|(i, _)| *i);
    Ok(v)
}

fn from_sparse<F: Field>(cx: &SlicedComplex, dim: isize, v: SparseVec<F>) -> Chain<F> {
    let faces = cx.faces(dim).expect("dimension checked by caller");
    let mut out = Chain::zero(dim);
    for (i, c) in v {
        out.add_term(faces[i].clone(), c);
    }
    out
}

fn exact_columns<F: Field>(m: &SparseMatrix<i64>) -> Vec<SparseVec<F>> {
    m.columns()
        .iter()
        .map(|c| c.iter().map(|&(r, x)| (r, F::from_int(x))).collect())
        .collect()
}

/// Solves `∂x = γ` for `(dim)`-cycles in one complex, reusing a single
/// elimination of `∂_{dim+1}` across many right-hand sides.
pub struct Filler<F: Field> {
    cx: SlicedComplex,
    dim: isize,
    reduction: Reduction<F>,
}

impl<F: Field> Filler<F> {
    /// Prepares to fill cycles of dimension `dim >= -1`.
    pub fn new(spec: &ComplexSpec<'_>, dim: isize) -> Result<Self> {
        if dim < -1 {
            return Err(Error::InvalidParams(format!("cannot fill chains of dimension {dim}")));
        }
        let cx = spec.enumerate(dim + 1)?;
        let m = boundary_matrix(&cx, dim + 1)?;
        let reduction = reduce(&Exact::<F>::new(), exact_columns(&m), true);
        Ok(Filler { cx, dim, reduction })
    }

    pub fn complex(&self) -> &SlicedComplex {
        &self.cx
    }

    /// `Some(η)` with `∂η = γ` supported on the complex, or `None` when `γ`
    /// is not a boundary there.
    pub fn fill(&self, gamma: &Chain<F>) -> Result<Option<Chain<F>>> {
        if gamma.dim() != self.dim {
            return Err(Error::InvalidParams(format!(
                "filler prepared for dimension {}, got a {}-chain",
                self.dim,
                gamma.dim()
            )));
        }
        if !gamma.is_cycle() {
            return Err(Error::NotACycle(gamma.dim()));
        }
        let target = to_sparse(&self.cx, gamma)?;
        let Some(x) = solve(&Exact::<F>::new(), &self.reduction, target) else {
            return Ok(None);
        };
        let eta = from_sparse(&self.cx, self.dim + 1, x);
        assert!(eta.boundary() == *gamma, "linear solve produced a wrong filling");
        Ok(Some(eta))
    }
}

/// One-shot [`Filler::fill`].
pub fn fill<F: Field>(gamma: &Chain<F>, spec: &ComplexSpec<'_>) -> Result<Option<Chain<F>>> {
    if let Some(s) = gamma.first_unsupported(spec) {
        return Err(Error::NotSupported(format!("{s:?} is not a face of {}", spec.kind())));
    }
    if !gamma.is_cycle() {
        return Err(Error::NotACycle(gamma.dim()));
    }
    if gamma.is_zero() {
        return Ok(Some(Chain::zero(gamma.dim() + 1)));
    }
    Filler::new(spec, gamma.dim())?.fill(gamma)
}

/// A basis of the `j`-cycles of the complex (kernel of `∂_j`), `j >= -1`.
pub fn cycle_basis<F: Field>(cx: &SlicedComplex, j: isize) -> Result<Vec<Chain<F>>> {
    let m = boundary_matrix(cx, j)?;
    let red = reduce(&Exact::<F>::new(), exact_columns(&m), true);
    Ok(red.kernel().into_iter().map(|v| from_sparse(cx, j, v)).collect())
}

/// Generic elimination entry point for callers outside this module that
/// assemble their own matrices.
pub fn rank_in<F: FieldOps>(field: &F, columns: Vec<Vec<(usize, F::Elem)>>) -> usize {
    reduce(field, columns, false).rank()
}
