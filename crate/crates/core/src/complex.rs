//! The simplicial complexes `Delta_b` (monoid form), `Delta_v` (box form)
//! and the union complex `X_b`, all on the vertex set of a configuration.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::config::{MultiDegree, PointConfiguration};
use crate::error::{Error, Result};

/// A simplex as a strictly increasing tuple of point indices. The empty
/// tuple is the augmentation simplex of dimension -1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Simplex(SmallVec<[u32; 6]>);

impl Simplex {
    pub fn empty() -> Self {
        Simplex(SmallVec::new())
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(SmallVec::from_slice(&[v as u32]))
    }

    /// Builds a simplex from vertices in any order; fails on repeats.
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: SmallVec<[u32; 6]> = vertices.into_iter().map(|x| x as u32).collect();
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::SharedVertex(w[0] as usize));
        }
        Ok(Simplex(v))
    }

    pub(crate) fn from_sorted_unchecked(v: SmallVec<[u32; 6]>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Simplex(v)
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.0.iter().map(|&v| v as usize)
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.0
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&(v as u32)).is_ok()
    }

    /// The face obtained by deleting the vertex in position `i`.
    pub fn facet(&self, i: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(i);
        Simplex(v)
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ">")
    }
}

impl TryFrom<Vec<usize>> for Simplex {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        let s = Simplex::new(v.iter().copied())?;
        if s.vertices().ne(v.iter().copied()) {
            return Err(Error::InvalidParams(format!("simplex {v:?} is not strictly increasing")));
        }
        Ok(s)
    }
}

impl From<Simplex> for Vec<usize> {
    fn from(s: Simplex) -> Self {
        s.vertices().collect()
    }
}

/// Which complex on the configuration's vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComplexKind {
    /// `Delta_b`: faces `F` with `b - sum F` in `N A`.
    MonoidDelta(MultiDegree),
    /// `Delta_v`: faces `F` with `sum F <= v` coordinatewise.
    BoxDelta(MultiDegree),
    /// `X_b`: the union of `Delta_{b - k e_0 + k e_1}` for `k = 0..=b_0`.
    UnionX(MultiDegree),
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexKind::MonoidDelta(b) => write!(f, "Delta_b{b}"),
            ComplexKind::BoxDelta(v) => write!(f, "Delta_v{v}"),
            ComplexKind::UnionX(b) => write!(f, "X_b{b}"),
        }
    }
}

/// A complex kind bound to its configuration.
#[derive(Clone, Debug)]
pub struct ComplexSpec<'a> {
    cfg: &'a PointConfiguration,
    kind: ComplexKind,
}

impl<'a> ComplexSpec<'a> {
    pub fn new(cfg: &'a PointConfiguration, kind: ComplexKind) -> Result<Self> {
        match &kind {
            ComplexKind::MonoidDelta(b) | ComplexKind::UnionX(b) => {
                if !cfg.is_in_monoid(b.coords()) {
                    return Err(Error::NotInMonoid {
                        coords: b.coords().to_vec(),
                        config: cfg.label().to_string(),
                    });
                }
                if matches!(kind, ComplexKind::UnionX(_)) && !cfg.is_segre() {
                    return Err(Error::InvalidParams("X_b is only defined for Segre configurations".into()));
                }
            }
            ComplexKind::BoxDelta(v) => {
                if v.len() != cfg.ambient_dim() || v.coords().iter().any(|&x| x < 0) {
                    return Err(Error::InvalidMultiDegree {
                        coords: v.coords().to_vec(),
                        reason: "a box bound must lie in N^k".into(),
                    });
                }
            }
        }
        Ok(ComplexSpec { cfg, kind })
    }

    pub fn monoid(cfg: &'a PointConfiguration, b: impl Into<MultiDegree>) -> Result<Self> {
        Self::new(cfg, ComplexKind::MonoidDelta(b.into()))
    }

    pub fn boxed(cfg: &'a PointConfiguration, v: impl Into<MultiDegree>) -> Result<Self> {
        Self::new(cfg, ComplexKind::BoxDelta(v.into()))
    }

    pub fn union_x(cfg: &'a PointConfiguration, b: impl Into<MultiDegree>) -> Result<Self> {
        Self::new(cfg, ComplexKind::UnionX(b.into()))
    }

    pub fn cfg(&self) -> &'a PointConfiguration {
        self.cfg
    }

    pub fn kind(&self) -> &ComplexKind {
        &self.kind
    }

    /// Face test on the coordinatewise vertex sum `s` of a candidate face.
    pub fn admits_sum(&self, s: &[i64]) -> bool {
        match &self.kind {
            ComplexKind::BoxDelta(v) => leq(s, v.coords()),
            ComplexKind::MonoidDelta(b) => {
                let b = b.coords();
                if !leq(s, b) {
                    return false;
                }
                let rest: Vec<i64> = b.iter().zip(s).map(|(x, y)| x - y).collect();
                self.cfg.is_in_monoid(&rest)
            }
            // closed form of: exists k in 0..=b_0 with s <= b - k e_0 + k e_1
            ComplexKind::UnionX(b) => {
                let b = b.coords();
                s[0] <= b[0] && s[0] + s[1] <= b[0] + b[1] && leq(&s[2..], &b[2..])
            }
        }
    }

    pub fn is_face(&self, f: &Simplex) -> bool {
        if f.vertices().any(|v| v >= self.cfg.num_points()) {
            return false;
        }
        self.admits_sum(&self.cfg.sum_of(f.vertices()))
    }

    /// All faces of dimension at most `cap`, in lexicographic order.
    pub fn enumerate(&self, cap: isize) -> Result<SlicedComplex> {
        enumerate_faces(self, cap)
    }
}

fn leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Faces of a complex per dimension `-1..=cap`, each list sorted, with
/// index maps for matrix assembly.
#[derive(Clone, Debug)]
pub struct SlicedComplex {
    kind: ComplexKind,
    cap: isize,
    faces: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    complete: bool,
}

impl SlicedComplex {
    pub fn kind(&self) -> &ComplexKind {
        &self.kind
    }

    pub fn cap(&self) -> isize {
        self.cap
    }

    /// True when no face of dimension `cap + 1` exists, i.e. the whole
    /// complex was enumerated.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn faces(&self, dim: isize) -> Result<&[Simplex]> {
        if dim < -1 {
            return Ok(&[]);
        }
        if dim > self.cap {
            return Err(Error::DimensionCap {
                requested: dim,
                cap: self.cap,
            });
        }
        Ok(&self.faces[(dim + 1) as usize])
    }

    /// Number of faces of dimension `dim` (zero below -1).
    pub fn count(&self, dim: isize) -> Result<usize> {
        self.faces(dim).map(|f| f.len())
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        let d = s.dim();
        if d > self.cap {
            return None;
        }
        self.index[(d + 1) as usize].get(s).copied()
    }

    pub fn total_faces(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    /// `f_{-1}, f_0, .., f_cap`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }
}

/// Depth-first enumeration with monotone pruning: a vertex set failing the
/// face test is never extended.
pub fn enumerate_faces(spec: &ComplexSpec<'_>, cap: isize) -> Result<SlicedComplex> {
    if cap < -1 {
        return Err(Error::InvalidParams(format!("dimension cap {cap} < -1")));
    }
    let cfg = spec.cfg();
    let k = cfg.ambient_dim();
    let mut faces: Vec<Vec<Simplex>> = vec![Vec::new(); (cap + 2) as usize];
    let mut complete = true;
    if spec.admits_sum(&vec![0; k]) {
        faces[0].push(Simplex::empty());
        let vertices: Vec<usize> = (0..cfg.num_points())
            .filter(|&v| spec.admits_sum(cfg.point(v)))
            .collect();
        let mut stack: SmallVec<[u32; 6]> = SmallVec::new();
        let mut sum = vec![0i64; k];
        extend(spec, &vertices, 0, &mut stack, &mut sum, cap, &mut faces, &mut complete);
    }
    let index = faces
        .iter()
        .map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    Ok(SlicedComplex {
        kind: spec.kind().clone(),
        cap,
        faces,
        index,
        complete,
    })
}

#[allow(clippy::too_many_arguments)]
fn extend(
    spec: &ComplexSpec<'_>,
    vertices: &[usize],
    from: usize,
    stack: &mut SmallVec<[u32; 6]>,
    sum: &mut [i64],
    cap: isize,
    faces: &mut [Vec<Simplex>],
    complete: &mut bool,
) {
    let cfg = spec.cfg();
    for (pos, &v) in vertices.iter().enumerate().skip(from) {
        let p = cfg.point(v);
        for (s, x) in sum.iter_mut().zip(p) {
            *s += x;
        }
        if spec.admits_sum(sum) {
            let dim = stack.len() as isize;
            if dim > cap {
                *complete = false;
            } else {
                stack.push(v as u32);
                faces[(dim + 1) as usize].push(Simplex::from_sorted_unchecked(stack.clone()));
                extend(spec, vertices, pos + 1, stack, sum, cap, faces, complete);
                stack.pop();
            }
        }
        for (s, x) in sum.iter_mut().zip(p) {
            *s -= x;
        }
        if !*complete && stack.len() as isize > cap {
            return;
        }
    }
}
