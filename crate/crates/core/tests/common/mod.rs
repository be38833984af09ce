//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's homology, complex or chain algebra.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use segre_core::QChain;

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    BigRational::from_integer(v.into())
}

/// The points of `P^{n1} x .. x P^{nd}` as 0/1 vectors, any order.
pub fn segre_points(dims: &[usize]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &n in dims {
        let mut next = Vec::new();
        for prefix in &out {
            for i in 0..=n {
                let mut v = prefix.clone();
                v.extend((0..=n).map(|k| i64::from(k == i)));
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Membership in `N A` by exhaustive subtraction of points.
pub struct Monoid {
    points: Vec<Vec<i64>>,
    memo: HashMap<Vec<i64>, bool>,
}

impl Monoid {
    pub fn new(points: Vec<Vec<i64>>) -> Self {
        Monoid {
            points,
            memo: HashMap::new(),
        }
    }

    pub fn contains(&mut self, v: &[i64]) -> bool {
        if v.iter().any(|&x| x < 0) {
            return false;
        }
        if v.iter().all(|&x| x == 0) {
            return true;
        }
        if let Some(&r) = self.memo.get(v) {
            return r;
        }
        let mut found = false;
        for i in 0..self.points.len() {
            let rest: Vec<i64> = v.iter().zip(&self.points[i]).map(|(a, b)| a - b).collect();
            if rest.iter().all(|&x| x >= 0) && self.contains(&rest) {
                found = true;
                break;
            }
        }
        self.memo.insert(v.to_vec(), found);
        found
    }
}

pub fn sum_of(points: &[Vec<i64>], face: &[usize]) -> Vec<i64> {
    let mut s = vec![0; points[0].len()];
    for &v in face {
        for (a, x) in s.iter_mut().zip(&points[v]) {
            *a += x;
        }
    }
    s
}

/// All faces (sorted vertex lists) accepted by `admit`, grouped by size:
/// `out[k]` holds the faces with `k` vertices, `out[0]` the empty face.
pub fn brute_faces(n_points: usize, max_size: usize, mut admit: impl FnMut(&[usize]) -> bool) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new(); max_size + 1];
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(f) = stack.pop() {
        if !admit(&f) {
            continue;
        }
        let start = f.last().map_or(0, |&x| x + 1);
        if f.len() < max_size {
            for v in start..n_points {
                let mut g = f.clone();
                g.push(v);
                stack.push(g);
            }
        }
        out[f.len()].push(f);
    }
    for level in &mut out {
        level.sort();
    }
    out
}

/// Faces of `Δ_b`.
pub fn delta_faces(points: &[Vec<i64>], b: &[i64], max_size: usize) -> Vec<Vec<Vec<usize>>> {
    let mut m = Monoid::new(points.to_vec());
    brute_faces(points.len(), max_size, |f| {
        let rest: Vec<i64> = b.iter().zip(sum_of(points, f)).map(|(x, y)| x - y).collect();
        m.contains(&rest)
    })
}

pub fn dense_rank(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = Q::one() / m[rank][c].clone();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone() * inv.clone();
                for k in c..cols {
                    let d = m[rank][k].clone() * f.clone();
                    m[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Matrix of the reduced boundary from faces with `k` vertices to faces
/// with `k - 1` vertices (rows).
pub fn boundary_dense(faces: &[Vec<Vec<usize>>], k: usize) -> Vec<Vec<Q>> {
    let lower = &faces[k - 1];
    let index: HashMap<&Vec<usize>, usize> = lower.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut m = vec![vec![Q::zero(); faces[k].len()]; lower.len()];
    for (c, f) in faces[k].iter().enumerate() {
        for i in 0..f.len() {
            let mut g = f.clone();
            g.remove(i);
            let sign = if i % 2 == 0 { q(1) } else { q(-1) };
            m[index[&g]][c] = sign;
        }
    }
    m
}

/// `rank H̃_j` of a complex given by all its faces up to `j + 2` vertices.
pub fn reduced_betti(faces: &[Vec<Vec<usize>>], j: usize) -> usize {
    let k = j + 1;
    let f = faces[k].len();
    let r_in = if f == 0 { 0 } else { dense_rank(boundary_dense(faces, k)) };
    let r_out = if k + 1 < faces.len() && !faces[k + 1].is_empty() {
        dense_rank(boundary_dense(faces, k + 1))
    } else {
        0
    };
    f - r_in - r_out
}

pub fn as_map(c: &QChain) -> BTreeMap<Vec<usize>, Q> {
    c.terms().map(|(s, x)| (s.vertices().collect(), x.clone())).collect()
}

pub fn map_boundary(c: &BTreeMap<Vec<usize>, Q>) -> BTreeMap<Vec<usize>, Q> {
    let mut out: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
    for (f, x) in c {
        if f.is_empty() {
            continue;
        }
        for i in 0..f.len() {
            let mut g = f.clone();
            g.remove(i);
            let term = if i % 2 == 0 { x.clone() } else { -x.clone() };
            *out.entry(g).or_insert_with(Q::zero) += term;
        }
    }
    out.retain(|_, x| !x.is_zero());
    out
}

pub fn map_sub(a: &BTreeMap<Vec<usize>, Q>, b: &BTreeMap<Vec<usize>, Q>) -> BTreeMap<Vec<usize>, Q> {
    let mut out = a.clone();
    for (f, x) in b {
        *out.entry(f.clone()).or_insert_with(Q::zero) -= x.clone();
    }
    out.retain(|_, x| !x.is_zero());
    out
}

pub fn chain_boundary(c: &QChain) -> BTreeMap<Vec<usize>, Q> {
    map_boundary(&as_map(c))
}

pub fn below(s: &[i64], bound: &[i64]) -> bool {
    s.iter().zip(bound).all(|(a, b)| a <= b)
}

/// Every simplex of `c` has vertex sum at most `bound`.
pub fn in_box(points: &[Vec<i64>], c: &QChain, bound: &[i64]) -> bool {
    c.terms().all(|(s, _)| below(&sum_of(points, &s.vertices().collect::<Vec<_>>()), bound))
}

/// Every simplex lies in some `Box(b - k e_0 + k e_1)`, `0 <= k <= b_0`.
pub fn in_union(points: &[Vec<i64>], c: &QChain, b: &[i64]) -> bool {
    c.terms().all(|(s, _)| {
        let sum = sum_of(points, &s.vertices().collect::<Vec<_>>());
        (0..=b[0]).any(|k| {
            let mut bk = b.to_vec();
            bk[0] -= k;
            bk[1] += k;
            below(&sum, &bk)
        })
    })
}

/// Whether the cycle `z` (given on faces with `k` vertices) is a
/// boundary in the complex `faces`.
pub fn bounds(faces: &[Vec<Vec<usize>>], z: &BTreeMap<Vec<usize>, Q>, k: usize) -> bool {
    if k + 1 >= faces.len() || faces[k + 1].is_empty() {
        return z.is_empty();
    }
    let m = boundary_dense(faces, k + 1);
    let r = dense_rank(m.clone());
    let mut aug = m;
    for (row, f) in aug.iter_mut().zip(&faces[k]) {
        row.push(z.get(f).cloned().unwrap_or_else(Q::zero));
    }
    dense_rank(aug) == r
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}
