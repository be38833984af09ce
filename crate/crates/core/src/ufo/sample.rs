//! Seeded random inputs for the constructions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{make_ufo, rational, UfoChain};
use crate::chains::Chain;
use crate::complex::{ComplexSpec, Simplex};
use crate::config::{MultiDegree, PointConfiguration};
use crate::error::{Error, Result};
use crate::homology::cycle_basis;
use crate::{QChain, Rational};

const TRIES: usize = 64;

pub struct Sampler<'a> {
    cfg: &'a PointConfiguration,
    rng: ChaCha8Rng,
}

impl<'a> Sampler<'a> {
    pub fn new(cfg: &'a PointConfiguration, seed: u64) -> Self {
        Sampler {
            cfg,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn cfg(&self) -> &'a PointConfiguration {
        self.cfg
    }

    fn coeff(&mut self) -> Rational {
        let v = self.rng.gen_range(1..=3i64);
        rational(if self.rng.gen_bool(0.5) { v } else { -v })
    }

    fn points_where(&self, pred: impl Fn(&[i64]) -> bool) -> Vec<usize> {
        (0..self.cfg.num_points()).filter(|&i| pred(self.cfg.point(i))).collect()
    }

    /// Sum of `n` random points with coordinate `coord` equal to 0.
    fn residual(&mut self, n: usize, coord: usize) -> Vec<i64> {
        let pool = self.points_where(|x| x[coord] == 0);
        let mut c = vec![0; self.cfg.ambient_dim()];
        for _ in 0..n {
            let v = *pool.choose(&mut self.rng).expect("some point avoids the coordinate");
            for (a, x) in c.iter_mut().zip(self.cfg.point(v)) {
                *a += x;
            }
        }
        c
    }

    /// `t` distinct points with coordinate `coord` equal to 1 whose sum
    /// stays below `bound` (when given).
    fn axis(&mut self, t: usize, coord: usize, bound: Option<&[i64]>) -> Option<Vec<usize>> {
        let mut pool = self.points_where(|x| x[coord] == 1);
        if pool.len() < t {
            return None;
        }
        for _ in 0..TRIES {
            pool.shuffle(&mut self.rng);
            let mut axis: Vec<usize> = pool[..t].to_vec();
            let fits = bound.map_or(true, |b| self.cfg.sum_of(axis.iter().copied()).iter().zip(b).all(|(x, y)| x <= y));
            if fits {
                axis.sort_unstable();
                return Some(axis);
            }
        }
        None
    }

    /// A random nonzero `dim`-cycle of `Box(v)`, as a combination of a
    /// cycle basis.
    pub fn cycle_in_box(&mut self, v: &[i64], dim: isize) -> Result<Option<QChain>> {
        if dim < -1 {
            return Err(Error::InvalidParams(format!("no cycles of dimension {dim}")));
        }
        if dim == -1 {
            let c = self.coeff();
            return Ok(Some(Chain::augmentation(c)));
        }
        let spec = ComplexSpec::boxed(self.cfg, v.to_vec())?;
        let cx = spec.enumerate(dim)?;
        let basis: Vec<QChain> = cycle_basis(&cx, dim)?;
        if basis.is_empty() {
            return Ok(None);
        }
        let mut out = Chain::zero(dim);
        for _ in 0..TRIES {
            let n = self.rng.gen_range(1..=basis.len().min(3));
            for z in basis.choose_multiple(&mut self.rng, n) {
                let c = self.coeff();
                out += &z.scale(&c);
            }
            if !out.is_zero() {
                return Ok(Some(out));
            }
        }
        Ok(None)
    }

    /// A random combination of at most `n` faces of dimension `dim`.
    pub fn chain_in(&mut self, spec: &ComplexSpec<'_>, dim: isize, n: usize) -> Result<QChain> {
        let cx = spec.enumerate(dim)?;
        let faces = cx.faces(dim)?;
        let mut out = Chain::zero(dim);
        for s in faces.choose_multiple(&mut self.rng, n.min(faces.len())) {
            let c = self.coeff();
            out.add_term(s.clone(), c);
        }
        Ok(out)
    }

    /// A UFO for coordinate 1 with `t` axis vertices, `k = p + 1` and
    /// `deg β = p + 2` (`tight`) or `p + 3`.
    pub fn simple(&mut self, p: usize, t: usize, tight: bool) -> Result<Option<UfoChain<'a>>> {
        if t == 0 || t > p + 1 {
            return Err(Error::InvalidParams(format!("axis size {t} out of range for p = {p}")));
        }
        let deg = if tight { p + 2 } else { p + 3 };
        for _ in 0..TRIES {
            let Some(axis) = self.axis(t, 1, None) else {
                return Ok(None);
            };
            let c = self.residual(deg - t, 1);
            let Some(base) = self.cycle_in_box(&c, p as isize - t as isize)? else {
                continue;
            };
            let beta = add(&self.cfg.sum_of(axis.iter().copied()), &c);
            if let Ok(u) = make_ufo(axis, base, 1, MultiDegree::new(beta), self.cfg) {
                return Ok(Some(u));
            }
        }
        Ok(None)
    }

    /// A UFO whose base is a multiple of `∂σ` for a simplex `σ` below the
    /// axis.
    pub fn subc(&mut self, p: usize, t: usize) -> Result<Option<(UfoChain<'a>, Simplex)>> {
        if t == 0 || t > p {
            return Err(Error::InvalidParams(format!("axis size {t} out of range for p = {p}")));
        }
        for _ in 0..TRIES {
            let Some(axis) = self.axis(t, 1, None) else {
                return Ok(None);
            };
            let c = self.residual(p + 2 - t, 1);
            let spec = ComplexSpec::boxed(self.cfg, c.clone())?;
            let dim = (p - t) as isize;
            let cx = spec.enumerate(dim)?;
            let Some(sigma) = cx.faces(dim)?.choose(&mut self.rng).cloned() else {
                continue;
            };
            let w = self.coeff();
            let base = Chain::from_simplex(sigma.clone()).boundary().scale(&w);
            let beta = add(&self.cfg.sum_of(axis.iter().copied()), &c);
            if let Ok(u) = make_ufo(axis, base, 1, MultiDegree::new(beta), self.cfg) {
                return Ok(Some((u, sigma)));
            }
        }
        Ok(None)
    }

    /// A two-vertex UFO for coordinate 1 with a 1-cycle base. `case2`
    /// asks for no other coordinate of the first block at 2 or more,
    /// which forces a first factor of dimension exactly 3.
    pub fn ufo24(&mut self, case2: bool) -> Result<Option<UfoChain<'a>>> {
        let block = self.cfg.blocks()[0].clone();
        for _ in 0..TRIES {
            let Some(axis) = self.axis(2, 1, None) else {
                return Ok(None);
            };
            let c = if case2 {
                let others: Vec<usize> = block.clone().filter(|&i| i != 1).collect();
                if others.len() != 3 {
                    return Ok(None);
                }
                let mut c = vec![0; self.cfg.ambient_dim()];
                for i in others {
                    let pool = self.points_where(|x| x[i] == 1);
                    let v = *pool.choose(&mut self.rng).expect("every coordinate is used");
                    c = add(&c, self.cfg.point(v));
                }
                c
            } else {
                let n = self.rng.gen_range(3..=4);
                let c = self.residual(n, 1);
                if !block.clone().any(|i| i != 1 && c[i] >= 2) {
                    continue;
                }
                c
            };
            let Some(base) = self.cycle_in_box(&c, 1)? else {
                continue;
            };
            let beta = add(&self.cfg.sum_of(axis.iter().copied()), &c);
            if let Ok(u) = make_ufo(axis, base, 1, MultiDegree::new(beta), self.cfg) {
                return Ok(Some(u));
            }
        }
        Ok(None)
    }

    /// A `p`-chain of `Δ_β` made of up to `pieces` UFOs with `t` axis
    /// vertices for coordinate 1, plus a random part below the bound.
    pub fn push_input(&mut self, p: usize, t: usize, pieces: usize, tight: bool) -> Result<Option<(QChain, MultiDegree)>> {
        let Some(first) = self.simple(p, t, tight)? else {
            return Ok(None);
        };
        let beta = first.beta().clone();
        let mut eta = first.eta();
        for _ in 1..pieces {
            let Some(axis) = self.axis(t, 1, Some(beta.coords())) else {
                break;
            };
            let c = sub(beta.coords(), &self.cfg.sum_of(axis.iter().copied()));
            let Some(base) = self.cycle_in_box(&c, p as isize - t as isize)? else {
                continue;
            };
            if let Ok(u) = make_ufo(axis, base, 1, beta.clone(), self.cfg) {
                eta += &u.eta();
            }
        }
        let mut low = beta.coords().to_vec();
        low[1] -= 1;
        let spec = ComplexSpec::boxed(self.cfg, low)?;
        eta += &self.chain_in(&spec, p as isize, 2)?;
        Ok(Some((eta, beta)))
    }

    /// A `p`-chain of `X_b` whose boundary lies in `Box(b)`: a chain of
    /// `Box(b)` plus boundaries of `(p+1)`-faces of `X_b`.
    pub fn union_chain(&mut self, b: &MultiDegree, p: usize, faces: usize) -> Result<QChain> {
        let bx = ComplexSpec::boxed(self.cfg, b.clone())?;
        let mut eta = self.chain_in(&bx, p as isize, 2)?;
        let union = ComplexSpec::union_x(self.cfg, b.clone())?;
        eta += &self.chain_in(&union, p as isize + 1, faces)?.boundary();
        Ok(eta)
    }
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
