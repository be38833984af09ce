//! Point configurations, gradings and multidegrees.
//!
//! Segre points are ordered lexicographically by their per-factor index tuple
//! `(j_1, .., j_d)`; every point index used elsewhere in the crate refers to
//! this order. Coordinates are 0-based, so the first two coordinates of the
//! first block are `0` and `1`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensions `(n_1, .., n_d)` of a product of projective spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SegreParams {
    dims: Vec<usize>,
}

impl SegreParams {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidParams("a Segre product needs at least one factor".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidParams(format!("factor dimensions must be positive: {dims:?}")));
        }
        Ok(SegreParams { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of factors.
    pub fn d(&self) -> usize {
        self.dims.len()
    }

    pub fn descriptor(&self) -> String {
        format!("segre:{}", join_usize(&self.dims))
    }
}

impl fmt::Display for SegreParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "segre[{}]", join_usize(&self.dims))
    }
}

fn join_usize(v: &[usize]) -> String {
    v.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
}

/// Replaces every factor dimension `n_i` by `min(n_i, p)`.
///
/// Property N_p of `O(1,..,1)` is unchanged by this reduction, so N_p checks
/// may run on the smaller product.
pub fn cap_dimensions(dims: &SegreParams, p: usize) -> SegreParams {
    assert!(p >= 1, "cap_dimensions needs p >= 1");
    SegreParams {
        dims: dims.dims.iter().map(|&n| n.min(p)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigKind {
    Segre(SegreParams),
    Veronese { n: usize, a: usize },
    General,
}

/// A vector `b` in `N^k`, graded by `deg b = b . omega`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree(Vec<i64>);

impl MultiDegree {
    pub fn new(coords: Vec<i64>) -> Self {
        MultiDegree(coords)
    }

    pub fn zero(k: usize) -> Self {
        MultiDegree(vec![0; k])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self + e_to - e_from`.
    pub fn shifted(&self, from: usize, to: usize, amount: i64) -> MultiDegree {
        let mut c = self.0.clone();
        c[from] -= amount;
        c[to] += amount;
        MultiDegree(c)
    }
}

impl From<Vec<i64>> for MultiDegree {
    fn from(v: Vec<i64>) -> Self {
        MultiDegree(v)
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A finite set of lattice points `A` in `N^k` with a grading functional
/// `omega` satisfying `omega . a = 1` for every point.
#[derive(Clone, Debug)]
pub struct PointConfiguration {
    points: Vec<Vec<i64>>,
    omega: Vec<Ratio<i64>>,
    label: String,
    kind: ConfigKind,
    blocks: Vec<Range<usize>>,
    index: HashMap<Vec<i64>, usize>,
}

impl PartialEq for PointConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.omega == other.omega
    }
}

impl PointConfiguration {
    /// The configuration `A_{n_1,..,n_d}` with `omega = (1/d)(1,..,1)`.
    pub fn segre(dims: &SegreParams) -> Self {
        let d = dims.d();
        let mut blocks = Vec::with_capacity(d);
        let mut start = 0;
        for &n in dims.dims() {
            blocks.push(start..start + n + 1);
            start += n + 1;
        }
        let k = start;

        let mut points = Vec::new();
        let mut tuple = vec![0usize; d];
        loop {
            let mut p = vec![0i64; k];
            for (block, &j) in blocks.iter().zip(&tuple) {
                p[block.start + j] = 1;
            }
            points.push(p);
            // odometer, last factor fastest
            let mut f = d;
            loop {
                if f == 0 {
                    let omega = vec![Ratio::new(1, d as i64); k];
                    return Self::assemble(points, omega, dims.to_string(), ConfigKind::Segre(dims.clone()), blocks);
                }
                f -= 1;
                tuple[f] += 1;
                if tuple[f] <= dims.dims()[f] {
                    break;
                }
                tuple[f] = 0;
            }
        }
    }

    /// Exponent vectors of the degree-`a` monomials in `n + 1` variables,
    /// in lexicographically decreasing order (`x_0^a` first).
    pub fn veronese(n: usize, a: usize) -> Result<Self> {
        if n == 0 || a == 0 {
            return Err(Error::InvalidParams(format!("veronese needs n, a >= 1 (got {n}, {a})")));
        }
        let mut points: Vec<Vec<i64>> = compositions(a as i64, n + 1);
        points.reverse();
        let omega = vec![Ratio::new(1, a as i64); n + 1];
        Ok(Self::assemble(
            points,
            omega,
            format!("veronese[{n},{a}]"),
            ConfigKind::Veronese { n, a },
            Vec::new(),
        ))
    }

    /// An arbitrary homogeneous configuration.
    pub fn general(points: Vec<Vec<i64>>, omega: Vec<Ratio<i64>>, label: impl Into<String>) -> Result<Self> {
        let k = omega.len();
        let mut seen = HashSet::new();
        for p in &points {
            if p.len() != k {
                return Err(Error::InvalidParams(format!("point {p:?} does not live in N^{k}")));
            }
            if p.iter().any(|&x| x < 0) {
                return Err(Error::InvalidParams(format!("point {p:?} has a negative coordinate")));
            }
            if !seen.insert(p.clone()) {
                return Err(Error::InvalidParams(format!("point {p:?} is repeated")));
            }
            if dot(&omega, p) != Ratio::one() {
                return Err(Error::InvalidParams(format!("omega . {p:?} != 1")));
            }
        }
        Ok(Self::assemble(points, omega, label.into(), ConfigKind::General, Vec::new()))
    }

    fn assemble(
        points: Vec<Vec<i64>>,
        omega: Vec<Ratio<i64>>,
        label: String,
        kind: ConfigKind,
        blocks: Vec<Range<usize>>,
    ) -> Self {
        let index = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        PointConfiguration {
            points,
            omega,
            label,
            kind,
            blocks,
            index,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The descriptor string this configuration parses from.
    pub fn descriptor(&self) -> String {
        match &self.kind {
            ConfigKind::Segre(s) => s.descriptor(),
            ConfigKind::Veronese { n, a } => format!("veronese:{n},{a}"),
            ConfigKind::General => self.label.clone(),
        }
    }

    pub fn kind(&self) -> &ConfigKind {
        &self.kind
    }

    pub fn segre_params(&self) -> Option<&SegreParams> {
        match &self.kind {
            ConfigKind::Segre(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_segre(&self) -> bool {
        matches!(self.kind, ConfigKind::Segre(_))
    }

    /// Coordinate ranges of the Segre factors; empty for other kinds.
    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, coord: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&coord))
    }

    /// Number of points `m`.
    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Ambient dimension `k`.
    pub fn ambient_dim(&self) -> usize {
        self.omega.len()
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn omega(&self) -> &[Ratio<i64>] {
        &self.omega
    }

    pub fn point_index(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// The index of `point(i) - e_from + e_to`, if that is again a point.
    pub fn shift_point(&self, i: usize, from: usize, to: usize) -> Option<usize> {
        let mut v = self.points[i].clone();
        v[from] -= 1;
        v[to] += 1;
        self.point_index(&v)
    }

    /// Coordinatewise sum of the given points.
    pub fn sum_of(&self, vertices: impl IntoIterator<Item = usize>) -> Vec<i64> {
        let mut s = vec![0i64; self.ambient_dim()];
        for v in vertices {
            for (acc, x) in s.iter_mut().zip(&self.points[v]) {
                *acc += x;
            }
        }
        s
    }

    /// `deg b = b . omega`; fails unless this is a nonnegative integer.
    pub fn degree(&self, b: &[i64]) -> Result<i64> {
        if b.len() != self.ambient_dim() {
            return Err(Error::InvalidMultiDegree {
                coords: b.to_vec(),
                reason: format!("expected {} coordinates", self.ambient_dim()),
            });
        }
        let r = dot(&self.omega, b);
        if !r.is_integer() || r < Ratio::zero() {
            return Err(Error::InvalidMultiDegree {
                coords: b.to_vec(),
                reason: format!("b . omega = {r} is not a nonnegative integer"),
            });
        }
        Ok(r.to_integer())
    }

    /// The elements of `N A` of degree `t` in increasing lexicographic order.
    pub fn enumerate_multidegrees(&self, t: usize) -> Vec<MultiDegree> {
        if self.is_segre() {
            let per_block: Vec<Vec<Vec<i64>>> = self
                .blocks
                .iter()
                .map(|b| compositions(t as i64, b.len()))
                .collect();
            let mut out = Vec::new();
            let mut current = Vec::with_capacity(self.ambient_dim());
            product_into(&per_block, 0, &mut current, &mut out);
            out.into_iter().map(MultiDegree).collect()
        } else {
            let mut acc = BTreeSet::new();
            let mut cur = vec![0i64; self.ambient_dim()];
            self.sums_of_points(t, 0, &mut cur, &mut acc);
            acc.into_iter().map(MultiDegree).collect()
        }
    }

    fn sums_of_points(&self, left: usize, start: usize, cur: &mut Vec<i64>, acc: &mut BTreeSet<Vec<i64>>) {
        if left == 0 {
            acc.insert(cur.clone());
            return;
        }
        for i in start..self.points.len() {
            add_into(cur, &self.points[i], 1);
            self.sums_of_points(left - 1, i, cur, acc);
            add_into(cur, &self.points[i], -1);
        }
    }

    /// Whether `v` is a nonnegative integer combination of the points.
    ///
    /// Segre configurations use the closed form (nonnegative, equal block
    /// sums); other configurations run a memoised search bounded by the
    /// degree `v . omega`.
    pub fn is_in_monoid(&self, v: &[i64]) -> bool {
        if v.len() != self.ambient_dim() || v.iter().any(|&x| x < 0) {
            return false;
        }
        if self.is_segre() {
            let mut sums = self.blocks.iter().map(|b| v[b.clone()].iter().sum::<i64>());
            let first = sums.next().unwrap_or(0);
            return sums.all(|s| s == first);
        }
        let Ok(t) = self.degree(v) else {
            return false;
        };
        let mut failed = HashSet::new();
        self.decomposes(&mut v.to_vec(), t, 0, &mut failed)
    }

    fn decomposes(&self, v: &mut Vec<i64>, left: i64, start: usize, failed: &mut HashSet<(Vec<i64>, usize)>) -> bool {
        if left == 0 {
            return v.iter().all(|&x| x == 0);
        }
        if failed.contains(&(v.clone(), start)) {
            return false;
        }
        for i in start..self.points.len() {
            if self.points[i].iter().zip(v.iter()).all(|(p, x)| p <= x) {
                add_into(v, &self.points[i], -1);
                let ok = self.decomposes(v, left - 1, i, failed);
                add_into(v, &self.points[i], 1);
                if ok {
                    return true;
                }
            }
        }
        failed.insert((v.clone(), start));
        false
    }
}

impl FromStr for PointConfiguration {
    type Err = Error;

    /// Parses `segre:n1,..,nd` or `veronese:n,a`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Descriptor(s.to_string());
        let (kind, args) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums = args
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        match kind.trim() {
            "segre" => Ok(PointConfiguration::segre(&SegreParams::new(nums)?)),
            "veronese" => match nums[..] {
                [n, a] => PointConfiguration::veronese(n, a),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

impl FromStr for SegreParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<PointConfiguration>()?.kind {
            ConfigKind::Segre(p) => Ok(p),
            _ => Err(Error::InvalidParams(format!("{s} is not a Segre descriptor"))),
        }
    }
}

fn dot(omega: &[Ratio<i64>], v: &[i64]) -> Ratio<i64> {
    omega
        .iter()
        .zip(v)
        .fold(Ratio::zero(), |acc, (w, &x)| acc + w * Ratio::from_integer(x))
}

fn add_into(acc: &mut [i64], v: &[i64], sign: i64) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += sign * x;
    }
}

/// Weak compositions of `t` into `parts` parts, increasing lexicographically.
pub(crate) fn compositions(t: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 1 {
        return vec![vec![t]];
    }
    let mut out = Vec::new();
    for first in 0..=t {
        for mut rest in compositions(t - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn product_into(per_block: &[Vec<Vec<i64>>], i: usize, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if i == per_block.len() {
        out.push(current.clone());
        return;
    }
    for comp in &per_block[i] {
        let len = current.len();
        current.extend_from_slice(comp);
        product_into(per_block, i + 1, current, out);
        current.truncate(len);
    }
}
