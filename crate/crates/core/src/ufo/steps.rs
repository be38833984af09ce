//! Retraction of a filling in `X_b` back into `Box(b)`, and the vertex
//! substitution that clears coordinate 0.

use serde::Serialize;

use super::{decompose_ufos, fill_simple, fill_ufo24, moved, FillCertificate, FillMethod};
use crate::chains::Chain;
use crate::complex::ComplexSpec;
use crate::config::{MultiDegree, PointConfiguration};
use crate::error::{Error, Result};
use crate::homology::fill;
use crate::QChain;

/// Moves a `p`-chain of `Δ_β` whose boundary avoids coordinate 1 at its
/// bound into `Δ_{β + e_0 - e_1}`, piece by piece.
pub fn push_boundary(eta: &QChain, beta: &MultiDegree, p: usize, cfg: &PointConfiguration) -> Result<FillCertificate> {
    let (r, l) = (1, 0);
    if cfg.ambient_dim() < 2 {
        return Err(Error::InvalidParams("needs at least two coordinates".into()));
    }
    let target = moved(beta, r, l, 1)?;
    let parts = decompose_ufos(eta, beta, r, p, cfg)?;
    let mut out = parts.remainder.clone();
    let mut methods = Vec::with_capacity(parts.pieces.len());
    for u in &parts.pieces {
        let t = u.t();
        let cert = if t == 1 || t == p || t == p + 1 {
            fill_simple(u, r, l, p)?
        } else if p == 3 && t == 2 {
            fill_ufo24(u)?
        } else {
            return Err(Error::Unsupported(format!("axis size {t} with p = {p}")));
        };
        out += cert.output();
        methods.push(cert.method().clone());
    }
    FillCertificate::verify(cfg, eta.clone(), out, target, FillMethod::Pieces { pieces: methods })
}

/// Fills the `(p-1)`-cycle `γ ⊂ Box(b)` inside `X_b`, then retracts the
/// filling into `Box(b)`.
pub fn step2_retract(gamma: &QChain, b: &MultiDegree, p: usize, cfg: &PointConfiguration) -> Result<FillCertificate> {
    check_gamma(gamma, b, p, cfg)?;
    let union = ComplexSpec::union_x(cfg, b.clone())?;
    let eta = fill(gamma, &union)?
        .ok_or_else(|| Error::Hypothesis(format!("H̃_{}(X_{b}) does not vanish: the cycle does not bound", p - 1)))?;
    step2_retract_from(&eta, b, p, cfg)
}

/// [`step2_retract`] from a given filling `η ⊂ X_b` of a cycle in `Box(b)`.
pub fn step2_retract_from(eta: &QChain, b: &MultiDegree, p: usize, cfg: &PointConfiguration) -> Result<FillCertificate> {
    let union = ComplexSpec::union_x(cfg, b.clone())?;
    if let Some(s) = eta.first_unsupported(&union) {
        return Err(Error::NotSupported(format!("{s:?} is not in X_{b}")));
    }
    if eta.dim() != p as isize && !eta.is_zero() {
        return Err(Error::InvalidParams(format!("expected a {p}-chain, got dimension {}", eta.dim())));
    }
    check_gamma(&eta.boundary(), b, p, cfg)?;
    let b0 = b.coords()[0];
    let slice = |k: i64| moved(b, 0, 1, k);
    let mut cur = eta.clone();
    let mut methods = Vec::new();
    for k in (1..=b0).rev() {
        let beta = slice(k)?;
        let lower: Vec<ComplexSpec<'_>> = (0..k).map(|j| ComplexSpec::boxed(cfg, slice(j)?)).collect::<Result<_>>()?;
        let nu = cur.filter(|s| !lower.iter().any(|spec| spec.is_face(s)));
        if nu.is_zero() {
            continue;
        }
        let cert = push_boundary(&nu, &beta, p, cfg)?;
        cur -= &nu;
        cur += cert.output();
        methods.push(cert.method().clone());
    }
    FillCertificate::verify(cfg, eta.clone(), cur, b.clone(), FillMethod::Pieces { pieces: methods })
}

fn check_gamma(gamma: &QChain, b: &MultiDegree, p: usize, cfg: &PointConfiguration) -> Result<()> {
    if p < 1 {
        return Err(Error::InvalidParams("p must be at least 1".into()));
    }
    if cfg.ambient_dim() < 2 {
        return Err(Error::InvalidParams("needs at least two coordinates".into()));
    }
    if !gamma.is_zero() && gamma.dim() != p as isize - 1 {
        return Err(Error::InvalidParams(format!("expected a {}-cycle, got dimension {}", p - 1, gamma.dim())));
    }
    if !gamma.is_cycle() {
        return Err(Error::NotACycle(gamma.dim()));
    }
    let bx = ComplexSpec::boxed(cfg, b.clone())?;
    if let Some(s) = gamma.first_unsupported(&bx) {
        return Err(Error::NotSupported(format!("{s:?} is not in Box({b})")));
    }
    Ok(())
}

/// `γ - γ' = ∂W` with `W ⊂ X_b` and `γ'` free of coordinate 0.
#[derive(Clone, Debug, Serialize)]
pub struct StepOne {
    pub gamma_prime: QChain,
    pub witness: QChain,
    /// `(0, b_0 + b_1, b_2, ..)`, the box containing `γ'`.
    pub target: MultiDegree,
    /// Pieces of `W` that needed the solver because a cone point was in
    /// the way.
    pub solver_pieces: usize,
}

/// Replaces, one by one, every vertex `a` of `γ` with `a_0 > 0` by
/// `a - e_0 + e_1`, recording a chain `W` in `X_b` that bounds the change.
pub fn step1_push(gamma: &QChain, b: &MultiDegree, p: usize, cfg: &PointConfiguration) -> Result<StepOne> {
    if p < 2 {
        return Err(Error::InvalidParams("the vertex substitution needs p >= 2".into()));
    }
    if !cfg.is_segre() {
        return Err(Error::Unsupported("the vertex substitution needs a Segre configuration".into()));
    }
    check_gamma(gamma, b, p, cfg)?;
    let union = ComplexSpec::union_x(cfg, b.clone())?;
    let mut cur = gamma.clone();
    let mut witness = Chain::zero(p as isize);
    let mut solver_pieces = 0;
    let moving: Vec<usize> = gamma.vertices().into_iter().filter(|&v| cfg.point(v)[0] > 0).collect();
    for a in moving {
        let a_tilde = cfg
            .shift_point(a, 0, 1)
            .ok_or_else(|| Error::Unsupported(format!("point {a} moved from 0 to 1 is not a point")))?;
        let mu = cur.link(a);
        if mu.is_zero() {
            continue;
        }
        let c: Vec<i64> = b.coords().iter().zip(cfg.point(a)).map(|(x, y)| x - y).collect();
        for (eps, theta) in split_link(&mu, &c, p, cfg)? {
            let s_eps = MultiDegree::new(c.clone()).shifted(0, 1, eps);
            let theta_fill = fill(&theta, &ComplexSpec::boxed(cfg, s_eps.clone())?)?.ok_or_else(|| {
                Error::Hypothesis(format!(
                    "H̃_{}(Box({s_eps})) does not vanish (needs N_{} for the smaller box)",
                    p as isize - 2,
                    p - 1
                ))
            })?;
            let piece = if !theta_fill.involves(a) && !theta_fill.involves(a_tilde) {
                Chain::join(&Chain::vertex(a_tilde), &theta_fill)? - Chain::join(&Chain::vertex(a), &theta_fill)?
            } else {
                solver_pieces += 1;
                let z = theta.cone(a) - theta.cone(a_tilde);
                fill(&z, &union)?.ok_or_else(|| {
                    Error::Hypothesis(format!("H̃_{}(X_{b}) does not vanish: a substitution cycle does not bound", p - 1))
                })?
            };
            witness += &piece;
        }
        cur = cur - Chain::join(&Chain::vertex(a), &mu)? + mu.cone(a_tilde);
    }
    let mut t = b.coords().to_vec();
    t[1] += t[0];
    t[0] = 0;
    let target = MultiDegree::new(t);
    if witness.boundary() != gamma - &cur {
        return Err(Error::Construction("∂W differs from γ - γ'".into()));
    }
    if let Some(s) = witness.first_unsupported(&union) {
        return Err(Error::Construction(format!("{s:?} of W leaves X_{b}")));
    }
    if let Some(s) = cur.first_unsupported(&ComplexSpec::boxed(cfg, target.clone())?) {
        return Err(Error::Construction(format!("{s:?} of γ' leaves Box({target})")));
    }
    Ok(StepOne {
        gamma_prime: cur,
        witness,
        target,
        solver_pieces,
    })
}

/// Splits the link `μ ⊂ X_c` into cycles `θ_ε ⊂ Box(c - ε e_0 + ε e_1)`.
fn split_link(mu: &QChain, c: &[i64], p: usize, cfg: &PointConfiguration) -> Result<Vec<(i64, QChain)>> {
    let c0 = c[0];
    let base = MultiDegree::new(c.to_vec());
    let mut rem = mu.clone();
    let mut out = Vec::new();
    for eps in 0..=c0 {
        if rem.is_zero() {
            break;
        }
        if eps == c0 {
            out.push((eps, rem));
            break;
        }
        let s_eps = base.shifted(0, 1, eps);
        let bx = ComplexSpec::boxed(cfg, s_eps)?;
        let sigma = rem.filter(|s| cfg.sum_of(s.vertices())[0] == c0 - eps && bx.is_face(s));
        let mut below = base.shifted(0, 1, eps).into_coords();
        below[0] -= 1;
        let below = MultiDegree::new(below);
        let sigma_fill = fill(&sigma.boundary(), &ComplexSpec::boxed(cfg, below.clone())?)?.ok_or_else(|| {
            Error::Hypothesis(format!("H̃_{}(Box({below})) does not vanish", p as isize - 3))
        })?;
        let theta = sigma - sigma_fill;
        rem -= &theta;
        if !theta.is_zero() {
            out.push((eps, theta));
        }
    }
    Ok(out)
}
