//! Sparse simplicial chains with exact coefficients.
//!
//! Simplexes are stored sorted. Orientation follows the sorted order, and an
//! ordered vertex tuple is converted by the sign of its sorting permutation.
//! The reduced convention is global: the boundary of a vertex is the empty
//! (augmentation) simplex.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::complex::{ComplexSpec, Simplex};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Scalar};

/// A finite linear combination of simplexes of one dimension. No zero
/// coefficient is ever stored.
#[derive(Clone, PartialEq)]
pub struct Chain<S> {
    dim: isize,
    terms: BTreeMap<Simplex, S>,
}

impl<S: Scalar> Chain<S> {
    pub fn zero(dim: isize) -> Self {
        Chain {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// `coeff * [empty]`, the general (-1)-chain.
    pub fn augmentation(coeff: S) -> Self {
        let mut c = Self::zero(-1);
        c.add_term(Simplex::empty(), coeff);
        c
    }

    pub fn from_simplex(s: Simplex) -> Self {
        let mut c = Self::zero(s.dim());
        c.add_term(s, S::one());
        c
    }

    pub fn vertex(v: usize) -> Self {
        Self::from_simplex(Simplex::vertex(v))
    }

    /// The oriented simplex `<v_0, .., v_n>` in the given vertex order.
    pub fn ordered(vertices: &[usize]) -> Result<Self> {
        let s = Simplex::new(vertices.iter().copied())?;
        let mut c = Self::zero(s.dim());
        let sign = permutation_sign(vertices);
        c.add_term(s, signed(S::one(), sign));
        Ok(c)
    }

    pub fn from_terms(dim: isize, terms: impl IntoIterator<Item = (Simplex, S)>) -> Result<Self> {
        let mut c = Self::zero(dim);
        for (s, x) in terms {
            if s.dim() != dim {
                return Err(Error::InvalidParams(format!("simplex {s:?} in a chain of dimension {dim}")));
            }
            c.add_term(s, x);
        }
        Ok(c)
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Simplex, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, s: &Simplex) -> Option<&S> {
        self.terms.get(s)
    }

    /// Adds `coeff * s`; panics if `s` has the wrong dimension.
    pub fn add_term(&mut self, s: Simplex, coeff: S) {
        assert_eq!(s.dim(), self.dim, "simplex {s:?} added to a {}-chain", self.dim);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(s) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + coeff;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.dim);
        for (s, x) in &self.terms {
            out.add_term(s.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Chain<T> {
        let mut out = Chain::zero(self.dim);
        for (s, x) in &self.terms {
            out.add_term(s.clone(), f(x));
        }
        out
    }

    /// Simplicial boundary with alternating signs in sorted vertex order.
    pub fn boundary(&self) -> Self {
        let mut out = Self::zero(self.dim - 1);
        if self.dim < 0 {
            return out;
        }
        for (s, x) in &self.terms {
            for i in 0..s.len() {
                out.add_term(s.facet(i), signed(x.clone(), i % 2 == 1));
            }
        }
        out
    }

    pub fn is_cycle(&self) -> bool {
        self.boundary().is_zero()
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|s| s.vertices()).collect()
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|s| s.contains(v))
    }

    /// The terms whose simplex satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Simplex) -> bool) -> Self {
        Chain {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| keep(s))
                .map(|(s, x)| (s.clone(), x.clone()))
                .collect(),
        }
    }

    /// Bilinear simplicial join `front * back`, concatenating vertex orders.
    /// Fails if any pair of joined simplexes shares a vertex.
    pub fn join(front: &Self, back: &Self) -> Result<Self> {
        let mut out = Self::zero(front.dim + back.dim + 1);
        for (s, x) in &front.terms {
            for (t, y) in &back.terms {
                let (joined, negative) = join_simplexes(s, t)?;
                out.add_term(joined, signed(x.clone() * y.clone(), negative));
            }
        }
        Ok(out)
    }

    /// `<v> * self`.
    pub fn join_vertex(&self, v: usize) -> Result<Self> {
        Self::join(&Self::vertex(v), self)
    }

    /// `apex * (terms of self not containing apex)`. For a cycle `c` of any
    /// dimension the boundary of the cone is `c` itself.
    pub fn cone(&self, apex: usize) -> Self {
        self.filter(|s| !s.contains(apex))
            .join_vertex(apex)
            .expect("terms containing the apex were removed")
    }

    /// The chain `mu` with `a * mu` equal to the part of `self` through `a`.
    pub fn link(&self, a: usize) -> Self {
        let mut out = Self::zero(self.dim - 1);
        for (s, x) in &self.terms {
            if let Ok(pos) = s.raw().binary_search(&(a as u32)) {
                out.add_term(s.facet(pos), signed(x.clone(), pos % 2 == 1));
            }
        }
        out
    }

    /// [`Chain::link`] restricted to cycles; the result is again a cycle.
    pub fn link_cycle(&self, a: usize) -> Result<Self> {
        if !self.is_cycle() {
            return Err(Error::NotACycle(self.dim));
        }
        Ok(self.link(a))
    }

    /// `alpha_{a, a~, gamma} = (<a> - <a~>) * mu_{a, gamma}`.
    ///
    /// `gamma - alpha` is the cycle obtained from `gamma` by replacing the
    /// vertex `a` with `a~`.
    pub fn alpha(a: usize, a_tilde: usize, gamma: &Self) -> Result<Self> {
        if a == a_tilde {
            return Err(Error::InvalidParams("alpha needs two distinct vertices".into()));
        }
        let mu = gamma.link_cycle(a)?;
        let diff = Self::vertex(a) - Self::vertex(a_tilde);
        Self::join(&diff, &mu)
    }

    /// Every simplex is a face of `spec`.
    pub fn is_supported_on(&self, spec: &ComplexSpec<'_>) -> bool {
        self.terms.keys().all(|s| spec.is_face(s))
    }

    /// The first simplex that is not a face of `spec`.
    pub fn first_unsupported(&self, spec: &ComplexSpec<'_>) -> Option<&Simplex> {
        self.terms.keys().find(|s| !spec.is_face(s))
    }
}

fn signed<S: Scalar>(x: S, negative: bool) -> S {
    if negative {
        -x
    } else {
        x
    }
}

/// Sign of the permutation sorting `v`; `true` means odd.
fn permutation_sign(v: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                odd = !odd;
            }
        }
    }
    odd
}

/// Sorted union of two disjoint simplexes and the parity of the shuffle.
fn join_simplexes(s: &Simplex, t: &Simplex) -> Result<(Simplex, bool)> {
    let (a, b) = (s.raw(), t.raw());
    let mut out: SmallVec<[u32; 6]> = SmallVec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut odd = false;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            // b[j] jumps over the remaining a.len() - i vertices of s
            if (a.len() - i) % 2 == 1 {
                odd = !odd;
            }
            out.push(b[j]);
            j += 1;
        } else {
            return Err(Error::SharedVertex(a[i] as usize));
        }
    }
    Ok((Simplex::from_sorted_unchecked(out), odd))
}

impl<S: Scalar> AddAssign<&Chain<S>> for Chain<S> {
    fn add_assign(&mut self, rhs: &Chain<S>) {
        assert_eq!(self.dim, rhs.dim, "adding chains of different dimensions");
        for (s, x) in &rhs.terms {
            self.add_term(s.clone(), x.clone());
        }
    }
}

impl<S: Scalar> SubAssign<&Chain<S>> for Chain<S> {
    fn sub_assign(&mut self, rhs: &Chain<S>) {
        assert_eq!(self.dim, rhs.dim, "subtracting chains of different dimensions");
        for (s, x) in &rhs.terms {
            self.add_term(s.clone(), -x.clone());
        }
    }
}

impl<S: Scalar> Add for Chain<S> {
    type Output = Chain<S>;
    fn add(mut self, rhs: Chain<S>) -> Chain<S> {
        self += &rhs;
        self
    }
}

impl<S: Scalar> Sub for Chain<S> {
    type Output = Chain<S>;
    fn sub(mut self, rhs: Chain<S>) -> Chain<S> {
        self -= &rhs;
        self
    }
}

impl<S: Scalar> Add<&Chain<S>> for &Chain<S> {
    type Output = Chain<S>;
    fn add(self, rhs: &Chain<S>) -> Chain<S> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<S: Scalar> Sub<&Chain<S>> for &Chain<S> {
    type Output = Chain<S>;
    fn sub(self, rhs: &Chain<S>) -> Chain<S> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<S: Scalar> Neg for Chain<S> {
    type Output = Chain<S>;
    fn neg(self) -> Chain<S> {
        Chain {
            dim: self.dim,
            terms: self.terms.into_iter().map(|(s, x)| (s, -x)).collect(),
        }
    }
}

impl<S: Scalar + fmt::Display> fmt::Debug for Chain<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0[{}]", self.dim);
        }
        for (i, (s, x)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({x}){s:?}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    simplex: Simplex,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct ChainRepr {
    dim: isize,
    terms: Vec<TermRepr>,
}

impl<S: Scalar + fmt::Display> Serialize for Chain<S> {
    fn serialize<Ser: Serializer>(&self, ser: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        ChainRepr {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(s, x)| TermRepr {
                    simplex: s.clone(),
                    coeff: x.to_string(),
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Chain<BigRational> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ChainRepr::deserialize(de)?;
        let mut c = Chain::zero(repr.dim);
        for t in repr.terms {
            if t.simplex.dim() != repr.dim {
                return Err(D::Error::custom(format!(
                    "simplex {:?} in a chain of dimension {}",
                    t.simplex, repr.dim
                )));
            }
            let x = parse_rational(&t.coeff).ok_or_else(|| D::Error::custom(format!("bad coefficient {:?}", t.coeff)))?;
            c.add_term(t.simplex, x);
        }
        Ok(c)
    }
}
