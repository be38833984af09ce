//! Single-UFO fillings.

use num_traits::{One, Zero};

use super::{
    decompose_ufos, first_point_below, lower, make_ufo, moved, solver_fill, FillCertificate, FillMethod, UfoChain,
};
use crate::chains::Chain;
use crate::complex::{ComplexSpec, Simplex};
use crate::config::{MultiDegree, PointConfiguration};
use crate::error::{Error, Result};
use crate::{QChain, Rational};

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

fn degree(cfg: &PointConfiguration, v: &MultiDegree) -> Result<i64> {
    cfg.degree(v.coords())
}

/// `β - a^1 - .. - a^t`.
fn residual(u: &UfoChain<'_>) -> Vec<i64> {
    sub(u.beta().coords(), &u.cfg().sum_of(u.axis().iter().copied()))
}

/// Moves a UFO with axis size `t ∈ {p+1, p, 1}` from `Δ_β` to
/// `Δ_{β + e_l - e_r}` keeping its boundary.
pub fn fill_simple(u: &UfoChain<'_>, r: usize, l: usize, p: usize) -> Result<FillCertificate> {
    let cfg = u.cfg();
    if r != u.coord() {
        return Err(Error::InvalidParams(format!("UFO is saturated at {}, not at {r}", u.coord())));
    }
    if r == l || l >= cfg.ambient_dim() {
        return Err(Error::InvalidParams(format!("bad target coordinate {l}")));
    }
    if p < 1 || u.k() != p + 1 {
        return Err(Error::InvalidParams(format!("expected a {p}-chain, the UFO has k = {}", u.k())));
    }
    let deg = degree(cfg, u.beta())?;
    if deg < p as i64 + 2 {
        return Err(Error::InvalidParams(format!("deg β = {deg} < p + 2")));
    }
    let target = moved(u.beta(), r, l, 1)?;
    let t = u.t();
    if t == p + 1 {
        axis_cone(u, target)
    } else if t == 1 {
        axis_shift(u, r, l, target)
    } else if t == p {
        if deg >= p as i64 + 3 {
            base_filling(u, p, target)
        } else {
            telescope(u, l, target)
        }
    } else {
        Err(Error::Unsupported(format!("axis size {t} with p = {p}")))
    }
}

fn axis_cone(u: &UfoChain<'_>, target: MultiDegree) -> Result<FillCertificate> {
    let cfg = u.cfg();
    let eta = u.eta();
    let apex = first_point_below(cfg, &residual(u), u.axis())
        .ok_or_else(|| Error::Construction("no free point extends the axis simplex".into()))?;
    let out = eta.boundary().cone(apex);
    FillCertificate::verify(cfg, eta, out, target, FillMethod::AxisCone { apex })
}

fn axis_shift(u: &UfoChain<'_>, r: usize, l: usize, target: MultiDegree) -> Result<FillCertificate> {
    let cfg = u.cfg();
    let a = u.axis()[0];
    let shifted = cfg
        .shift_point(a, r, l)
        .ok_or_else(|| Error::Unsupported(format!("point {a} moved from {r} to {l} is not a point")))?;
    // ∂(a * C) = C, and a cone of C from any point has the same boundary
    let out = u.base().cone(shifted);
    FillCertificate::verify(cfg, u.eta(), out, target, FillMethod::AxisShift { shifted })
}

fn base_filling(u: &UfoChain<'_>, p: usize, target: MultiDegree) -> Result<FillCertificate> {
    let cfg = u.cfg();
    let spec = ComplexSpec::boxed(cfg, residual(u))?;
    let Some(gamma0) = crate::homology::fill(u.base(), &spec)? else {
        return solver_fill(cfg, &u.eta(), &target, "base does not bound below the axis");
    };
    let d_chi = u.chi().boundary();
    let out = Chain::join(&d_chi, &gamma0)?.scale(&sign(p % 2 == 0));
    FillCertificate::verify(cfg, u.eta(), out, target, FillMethod::BaseFilling)
}

/// `t = p`, `deg β = p + 2`: the base is a 0-cycle on points below a
/// degree-2 residual `c`.
fn telescope(u: &UfoChain<'_>, l: usize, target: MultiDegree) -> Result<FillCertificate> {
    let cfg = u.cfg();
    let eta = u.eta();
    if !cfg.is_segre() {
        return solver_fill(cfg, &eta, &target, "telescoping needs a Segre configuration");
    }
    let c = residual(u);
    let d_chi = u.chi().boundary();
    let target_spec = ComplexSpec::boxed(cfg, target.clone())?;
    let terms: Vec<(usize, Rational)> = u
        .base()
        .terms()
        .map(|(s, x)| (s.vertices().next().expect("0-chains have vertices"), x.clone()))
        .collect();
    let v0 = terms[0].0;
    let mut out = Chain::zero(eta.dim());
    let (mut steps, mut solver_steps) = (0, 0);
    for (v, coef) in &terms[1..] {
        let mut q = cfg.point(v0).to_vec();
        let goal = cfg.point(*v).to_vec();
        for block in cfg.blocks() {
            let j = block.clone().find(|&k| q[k] == 1).expect("Segre points have one 1 per block");
            let i = block.clone().find(|&k| goal[k] == 1).expect("Segre points have one 1 per block");
            if i == j {
                continue;
            }
            let mut pt = q.clone();
            pt[i] += 1;
            pt[j] -= 1;
            let (qi, pi) = (
                cfg.point_index(&q).expect("path stays on points"),
                cfg.point_index(&pt).expect("path stays on points"),
            );
            let step_cycle = Chain::join(&d_chi, &(Chain::vertex(pi) - Chain::vertex(qi)))?;
            steps += 1;
            let apex = step_apex(cfg, &c, &q, &pt, i, j, l);
            let piece = match apex {
                Some(z) if !step_cycle.involves(z) => {
                    let cone = step_cycle.cone(z);
                    cone.is_supported_on(&target_spec).then_some(cone)
                }
                _ => None,
            };
            let piece = match piece {
                Some(pc) => pc,
                None => {
                    solver_steps += 1;
                    crate::homology::fill(&step_cycle, &target_spec)?.ok_or_else(|| {
                        Error::Construction(format!("telescope step {qi} -> {pi} does not bound in {target}"))
                    })?
                }
            };
            out += &piece.scale(coef);
            q = pt;
        }
    }
    FillCertificate::verify(cfg, eta, out, target, FillMethod::Telescope { steps, solver_steps })
}

/// Cone point for the step `Q -> P = Q + e_i - e_j`, when the step lies in
/// the block of `l`.
fn step_apex(cfg: &PointConfiguration, c: &[i64], q: &[i64], pt: &[i64], i: usize, j: usize, l: usize) -> Option<usize> {
    if cfg.block_of(i) != cfg.block_of(l) {
        return None;
    }
    let x = sub(c, pt);
    let y = sub(c, q);
    let z = if i == l {
        y
    } else if j == l {
        x
    } else {
        let mut z = x;
        z[l] += 1;
        z[j] -= 1;
        z
    };
    cfg.point_index(&z)
}

/// For a base `C = c ∂σ` with `σ` below the axis, `∂χ * σ` fills inside
/// `Δ_{β - e_r}`.
pub fn fill_subc(u: &UfoChain<'_>, sigma: &Simplex) -> Result<FillCertificate> {
    let cfg = u.cfg();
    let d_sigma: QChain = Chain::from_simplex(sigma.clone()).boundary();
    let (probe, unit) = d_sigma
        .terms()
        .next()
        .ok_or_else(|| Error::InvalidParams("σ must have at least one vertex".into()))?;
    let c = u.base().coeff(probe).cloned().unwrap_or_else(Rational::zero) / unit.clone();
    if c.is_zero() || d_sigma.scale(&c) != *u.base() {
        return Err(Error::InvalidParams("the base is not a multiple of ∂σ".into()));
    }
    let below = ComplexSpec::boxed(cfg, residual(u))?;
    if !below.is_face(sigma) {
        return Err(Error::InvalidParams(format!("{sigma:?} is not below the axis")));
    }
    let target = lower(u.beta(), u.coord(), 1)?;
    let t = u.t();
    let out = Chain::join(&u.chi().boundary(), &Chain::from_simplex(sigma.clone()))?.scale(&(c * sign(t % 2 == 0)));
    FillCertificate::verify(cfg, u.eta(), out, target, FillMethod::SimplexBase)
}

/// A UFO with a two-vertex axis saturating coordinate 1, moved to
/// `Δ_{β + e_0 - e_1}`, for a first factor of dimension at most 3.
pub fn fill_ufo24(u: &UfoChain<'_>) -> Result<FillCertificate> {
    let cfg = u.cfg();
    let (r, l) = (1, 0);
    let Some(params) = cfg.segre_params() else {
        return Err(Error::Unsupported("needs a Segre configuration".into()));
    };
    if params.dims()[0] > 3 {
        return Err(Error::Unsupported(format!("first factor dimension {} > 3", params.dims()[0])));
    }
    if u.coord() != r || u.t() != 2 || u.k() != 4 {
        return Err(Error::InvalidParams(format!(
            "expected a 3-chain with a two-vertex axis at coordinate 1, got t = {}, k = {}, coordinate {}",
            u.t(),
            u.k(),
            u.coord()
        )));
    }
    let deg = degree(cfg, u.beta())?;
    if deg < 5 {
        return Err(Error::InvalidParams(format!("deg β = {deg} < 5")));
    }
    let target = moved(u.beta(), r, l, 1)?;
    let eta = u.eta();
    let beta = u.beta().coords();
    let saturated: Vec<usize> = cfg.blocks()[0].clone().filter(|&i| i != r && beta[i] >= 2).collect();
    // η = <a¹, a²> * C = <a², a¹> * (-C), so both orders are tried
    let (x, y) = (u.axis()[0], u.axis()[1]);
    let orders = [(x, y, u.base().clone()), (y, x, -u.base().clone())];
    let mut last = None;
    for (a1, a2, base) in &orders {
        let attempt = if saturated.is_empty() {
            ufo24_second_case(u, *a1, *a2, base, &target)
        } else {
            let mut found = Ok(None);
            for &i in &saturated {
                found = ufo24_first_case(u, *a1, *a2, base, i, &target);
                if matches!(found, Ok(Some(_))) {
                    break;
                }
            }
            found
        };
        match attempt {
            Ok(Some(cert)) => return Ok(cert),
            Ok(None) => {}
            Err(e) => last = Some(e),
        }
    }
    let reason = match last {
        Some(e) => format!("two-vertex construction failed: {e}"),
        None => "no substitution point below the base".into(),
    };
    solver_fill(cfg, &eta, &target, reason)
}

/// `<x, y> * (terms of C avoiding x and y)`, whose boundary is
/// `cone(y, C) - cone(x, C)` for a cycle `C`.
fn prism(x: usize, y: usize, base: &QChain) -> Result<QChain> {
    let rest = base.filter(|s| !s.contains(x) && !s.contains(y));
    Chain::join(&Chain::ordered(&[x, y])?, &rest)
}

/// `λ = <a², ã¹> * C` and `ξ = (<a¹, ã²> + <ã², ã¹>) * C`, with
/// [`prism`] standing in for each join.
fn shifted_pair(a1: usize, a2: usize, t1: usize, t2: usize, base: &QChain) -> Result<(QChain, QChain)> {
    let lambda = prism(a2, t1, base)?;
    let xi = prism(a1, t2, base)? + prism(t2, t1, base)?;
    Ok((lambda, xi))
}

fn ufo24_first_case(
    u: &UfoChain<'_>,
    a1: usize,
    a2: usize,
    base: &QChain,
    i: usize,
    target: &MultiDegree,
) -> Result<Option<FillCertificate>> {
    let cfg = u.cfg();
    let c = residual(u);
    let eta = u.eta();
    let (Some(t1), Some(t2)) = (cfg.shift_point(a1, 1, 0), cfg.shift_point(a2, 1, i)) else {
        return Ok(None);
    };
    // make the base avoid saturating coordinate i
    let mut fixed = base.clone();
    let mut extra = Chain::zero(eta.dim());
    let mut inner = Vec::new();
    let saturating: Vec<(Simplex, Rational)> = base
        .terms()
        .filter(|(s, _)| cfg.sum_of(s.vertices())[i] == c[i])
        .map(|(s, x)| (s.clone(), x.clone()))
        .collect();
    for (edge, w) in &saturating {
        let ends: Vec<usize> = edge.vertices().collect();
        let room = sub(&c, &cfg.sum_of(ends.iter().copied()));
        let Some(pt) = first_point_below(cfg, &room, &[ends[0], ends[1], a1, a2, t1, t2]) else {
            return Ok(None);
        };
        let tri: QChain = Chain::ordered(&[ends[0], pt, ends[1]])?;
        let removed = tri.boundary().scale(&-w.clone());
        fixed += &tri.boundary().scale(w);
        let piece = make_ufo(vec![a1, a2], removed, u.coord(), u.beta().clone(), cfg)?;
        let sigma = Simplex::new([ends[0], pt, ends[1]])?;
        let cert = fill_subc(&piece, &sigma)?;
        inner.push(cert.method().clone());
        extra += cert.output();
    }
    let (lambda, xi) = shifted_pair(a1, a2, t1, t2, &fixed)?;
    let out = xi - lambda + extra;
    let method = FillMethod::ShiftTwo {
        case: 1,
        substitutions: saturating.len(),
        inner,
    };
    FillCertificate::verify(cfg, eta, out, target.clone(), method).map(Some)
}

fn ufo24_second_case(
    u: &UfoChain<'_>,
    a1: usize,
    a2: usize,
    base: &QChain,
    target: &MultiDegree,
) -> Result<Option<FillCertificate>> {
    let cfg = u.cfg();
    let (Some(t1), Some(t2)) = (cfg.shift_point(a1, 1, 0), cfg.shift_point(a2, 1, 0)) else {
        return Ok(None);
    };
    let (lambda, xi) = shifted_pair(a1, a2, t1, t2, base)?;
    // the part of ξ above the target is a union of UFOs for coordinate 0
    let beta2 = moved(u.beta(), 1, 0, 2)?;
    let parts = decompose_ufos(&xi, &beta2, 0, 3, cfg)?;
    let mut fixed = parts.remainder.clone();
    let mut inner = Vec::new();
    for piece in &parts.pieces {
        let cert = fill_simple(piece, 0, 1, 3)?;
        inner.push(cert.method().clone());
        fixed += cert.output();
    }
    let out = fixed - lambda;
    let method = FillMethod::ShiftTwo {
        case: 2,
        substitutions: 0,
        inner,
    };
    FillCertificate::verify(cfg, u.eta(), out, target.clone(), method).map(Some)
}
