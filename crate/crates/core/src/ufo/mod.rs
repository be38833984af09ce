//! Chain-level filling constructions for Segre complexes.
//!
//! Every construction returns a [`FillCertificate`], which can only be built
//! after exact checks of the boundary identity and of support in the target
//! box complex. Where a step of the hand construction does not apply to an
//! instance, the affected piece is filled by the exact solver instead and the
//! certificate records it in its [`FillMethod`].

mod lemmas;
pub mod sample;
mod steps;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::chains::Chain;
use crate::complex::{ComplexSpec, Simplex};
use crate::config::{MultiDegree, PointConfiguration};
use crate::error::{Error, Result};
use crate::{QChain, Rational};

pub use lemmas::{fill_simple, fill_subc, fill_ufo24};
pub use steps::{push_boundary, step1_push, step2_retract, step2_retract_from, StepOne};

/// `η = <a^1, .., a^t> * C_η` where the axis saturates coordinate `coord`
/// of `β` and `C_η` is a cycle.
#[derive(Clone, Debug)]
pub struct UfoChain<'a> {
    cfg: &'a PointConfiguration,
    axis: Vec<usize>,
    base: QChain,
    coord: usize,
    beta: MultiDegree,
}

impl<'a> UfoChain<'a> {
    pub fn cfg(&self) -> &'a PointConfiguration {
        self.cfg
    }

    pub fn axis(&self) -> &[usize] {
        &self.axis
    }

    pub fn base(&self) -> &QChain {
        &self.base
    }

    pub fn coord(&self) -> usize {
        self.coord
    }

    pub fn beta(&self) -> &MultiDegree {
        &self.beta
    }

    /// `t`, the number of axis vertices.
    pub fn t(&self) -> usize {
        self.axis.len()
    }

    /// `k`: `η` is a `(k-1)`-chain.
    pub fn k(&self) -> usize {
        (self.base.dim() + 1) as usize + self.axis.len()
    }

    /// The oriented axis `χ_η = <a^1, .., a^t>`.
    pub fn chi(&self) -> QChain {
        Chain::ordered(&self.axis).expect("axis vertices are distinct")
    }

    pub fn eta(&self) -> QChain {
        Chain::join(&self.chi(), &self.base).expect("axis and base are disjoint")
    }
}

/// Validates the UFO conditions and builds the chain.
pub fn make_ufo<'a>(
    axis: Vec<usize>,
    base: QChain,
    coord: usize,
    beta: MultiDegree,
    cfg: &'a PointConfiguration,
) -> Result<UfoChain<'a>> {
    let bad = |m: String| Err(Error::InvalidUfo(m));
    if axis.is_empty() {
        return bad("empty axis".into());
    }
    if coord >= cfg.ambient_dim() || beta.len() != cfg.ambient_dim() {
        return bad(format!("coordinate {coord} or bound {beta} does not fit {}", cfg.label()));
    }
    if !cfg.is_in_monoid(beta.coords()) {
        return bad(format!("bound {beta} is not in the monoid"));
    }
    if let Some(&v) = axis.iter().find(|&&v| v >= cfg.num_points()) {
        return bad(format!("axis vertex {v} out of range"));
    }
    if Simplex::new(axis.iter().copied()).is_err() {
        return bad(format!("axis {axis:?} repeats a vertex"));
    }
    if let Some(&v) = axis.iter().find(|&&v| cfg.point(v)[coord] <= 0) {
        return bad(format!("axis vertex {v} has coordinate {coord} equal to 0"));
    }
    let total: i64 = axis.iter().map(|&v| cfg.point(v)[coord]).sum();
    if total != beta.coords()[coord] {
        return bad(format!(
            "axis coordinate {coord} sums to {total}, bound has {}",
            beta.coords()[coord]
        ));
    }
    if base.is_zero() {
        return bad("zero base".into());
    }
    if !base.is_cycle() {
        return bad("base is not a cycle".into());
    }
    if axis.iter().any(|&v| base.involves(v)) {
        return bad("base shares a vertex with the axis".into());
    }
    let u = UfoChain {
        cfg,
        axis,
        base,
        coord,
        beta,
    };
    let eta = u.eta();
    let spec = ComplexSpec::boxed(cfg, u.beta.clone())?;
    if let Some(s) = eta.first_unsupported(&spec) {
        return bad(format!("{s:?} is not in the box {}", u.beta));
    }
    let lowered = lower(&u.beta, coord, 1)?;
    if !eta.boundary().is_supported_on(&ComplexSpec::boxed(cfg, lowered)?) {
        return bad("boundary leaves the lowered box".into());
    }
    Ok(u)
}

/// `v - amount * e_i`, failing on a negative coordinate.
pub(crate) fn lower(v: &MultiDegree, i: usize, amount: i64) -> Result<MultiDegree> {
    let mut c = v.coords().to_vec();
    c[i] -= amount;
    if c[i] < 0 {
        return Err(Error::InvalidMultiDegree {
            coords: c,
            reason: "negative coordinate".into(),
        });
    }
    Ok(MultiDegree::new(c))
}

/// `v + amount * (e_l - e_r)`.
pub(crate) fn moved(v: &MultiDegree, r: usize, l: usize, amount: i64) -> Result<MultiDegree> {
    let mut c = v.coords().to_vec();
    c[r] -= amount;
    c[l] += amount;
    if c[r] < 0 {
        return Err(Error::InvalidMultiDegree {
            coords: c,
            reason: "negative coordinate".into(),
        });
    }
    Ok(MultiDegree::new(c))
}

/// How a certified filling was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FillMethod {
    /// Input already lies in the target.
    Identity,
    /// `t = p + 1`: cone over the boundary from a free point.
    AxisCone { apex: usize },
    /// `t = p`, large degree: `∂χ` joined with a filling of the base.
    BaseFilling,
    /// `t = p`, degree `p + 2`: the base telescoped into unit steps, each
    /// closed by a cone; `solver_steps` steps needed the exact solver.
    Telescope { steps: usize, solver_steps: usize },
    /// `t = 1`: the axis vertex moved from `r` to `l`.
    AxisShift { shifted: usize },
    /// Base is the boundary of a simplex: `∂χ * σ`.
    SimplexBase,
    /// Two-vertex axis with a saturated first-block coordinate.
    ShiftTwo { case: u8, substitutions: usize, inner: Vec<FillMethod> },
    /// Sum of per-piece certificates after splitting into UFOs.
    Pieces { pieces: Vec<FillMethod> },
    /// The exact linear solver, with the reason the construction did not
    /// apply.
    Solver { reason: String },
}

impl fmt::Display for FillMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FillMethod::Identity => write!(f, "identity"),
            FillMethod::AxisCone { apex } => write!(f, "axis-cone(apex {apex})"),
            FillMethod::BaseFilling => write!(f, "base-filling"),
            FillMethod::Telescope { steps, solver_steps } => {
                write!(f, "telescope({steps} steps, {solver_steps} solved)")
            }
            FillMethod::AxisShift { shifted } => write!(f, "axis-shift(to {shifted})"),
            FillMethod::SimplexBase => write!(f, "simplex-base"),
            FillMethod::ShiftTwo { case, .. } => write!(f, "shift-two(case {case})"),
            FillMethod::Pieces { pieces } => write!(f, "pieces({})", pieces.len()),
            FillMethod::Solver { reason } => write!(f, "solver({reason})"),
        }
    }
}

impl FillMethod {
    /// Whether the exact solver was used anywhere inside.
    pub fn used_solver(&self) -> bool {
        match self {
            FillMethod::Solver { .. } => true,
            FillMethod::Telescope { solver_steps, .. } => *solver_steps > 0,
            FillMethod::ShiftTwo { inner, .. } => inner.iter().any(FillMethod::used_solver),
            FillMethod::Pieces { pieces } => pieces.iter().any(FillMethod::used_solver),
            _ => false,
        }
    }
}

/// A chain `output` with `∂ output = ∂ input`, supported on the box complex
/// `Δ_target`. Only obtainable through exact verification.
#[derive(Clone, Debug, Serialize)]
pub struct FillCertificate {
    config: String,
    input: QChain,
    output: QChain,
    target: MultiDegree,
    method: FillMethod,
}

impl FillCertificate {
    /// Checks both conditions exactly; fails with a construction error
    /// otherwise.
    pub fn verify(
        cfg: &PointConfiguration,
        input: QChain,
        output: QChain,
        target: MultiDegree,
        method: FillMethod,
    ) -> Result<Self> {
        if input.dim() != output.dim() {
            return Err(Error::Construction(format!(
                "output dimension {} differs from input dimension {}",
                output.dim(),
                input.dim()
            )));
        }
        if output.boundary() != input.boundary() {
            return Err(Error::Construction(format!("{method}: boundary mismatch")));
        }
        let spec = ComplexSpec::boxed(cfg, target.clone())?;
        if let Some(s) = output.first_unsupported(&spec) {
            return Err(Error::Construction(format!("{method}: {s:?} leaves the box {target}")));
        }
        Ok(FillCertificate {
            config: cfg.label().to_string(),
            input,
            output,
            target,
            method,
        })
    }

    pub fn config(&self) -> &str {
        &self.config
    }

    pub fn input(&self) -> &QChain {
        &self.input
    }

    pub fn output(&self) -> &QChain {
        &self.output
    }

    pub fn into_output(self) -> QChain {
        self.output
    }

    pub fn target(&self) -> &MultiDegree {
        &self.target
    }

    pub fn method(&self) -> &FillMethod {
        &self.method
    }
}

/// Exact filling of `∂ input` inside `Box(target)`.
pub(crate) fn solver_fill(
    cfg: &PointConfiguration,
    input: &QChain,
    target: &MultiDegree,
    reason: impl Into<String>,
) -> Result<FillCertificate> {
    let reason = reason.into();
    let spec = ComplexSpec::boxed(cfg, target.clone())?;
    let boundary = input.boundary();
    let out = if boundary.is_zero() {
        Chain::zero(input.dim())
    } else {
        crate::homology::fill(&boundary, &spec)?
            .ok_or_else(|| Error::Construction(format!("no filling in the box {target} ({reason})")))?
    };
    FillCertificate::verify(cfg, input.clone(), out, target.clone(), FillMethod::Solver { reason })
}

/// Result of [`decompose_ufos`].
#[derive(Clone, Debug)]
pub struct Decomposition<'a> {
    pub pieces: Vec<UfoChain<'a>>,
    pub remainder: QChain,
}

impl Decomposition<'_> {
    /// `Σ pieces + remainder`.
    pub fn recombine(&self) -> QChain {
        let mut out = self.remainder.clone();
        for u in &self.pieces {
            out += &u.eta();
        }
        out
    }
}

/// Splits `η` (a `p`-chain in `Δ_β`) into UFOs for coordinate `coord` plus a
/// remainder supported on `Δ_{β - e_coord}`, by grouping the saturating
/// simplexes by their axis.
pub fn decompose_ufos<'a>(
    eta: &QChain,
    beta: &MultiDegree,
    coord: usize,
    p: usize,
    cfg: &'a PointConfiguration,
) -> Result<Decomposition<'a>> {
    if eta.dim() != p as isize && !eta.is_zero() {
        return Err(Error::Decomposition(format!("expected a {p}-chain, got dimension {}", eta.dim())));
    }
    if coord >= cfg.ambient_dim() || beta.len() != cfg.ambient_dim() {
        return Err(Error::Decomposition(format!("coordinate {coord} or bound {beta} does not fit")));
    }
    let beta_c = beta.coords()[coord];
    let mut groups: BTreeMap<Vec<usize>, QChain> = BTreeMap::new();
    let mut remainder = Chain::zero(eta.dim());
    for (s, x) in eta.terms() {
        let sum = cfg.sum_of(s.vertices());
        if sum[coord] < beta_c {
            remainder.add_term(s.clone(), x.clone());
            continue;
        }
        if sum.iter().zip(beta.coords()).any(|(a, b)| a > b) {
            return Err(Error::Decomposition(format!("{s:?} is not in the box {beta}")));
        }
        let axis: Vec<usize> = s.vertices().filter(|&v| cfg.point(v)[coord] > 0).collect();
        let rest = Simplex::new(s.vertices().filter(|v| !axis.contains(v)))?;
        let chi: QChain = Chain::ordered(&axis)?;
        // sign of the shuffle that puts the axis first
        let probe = Chain::join(&chi, &Chain::from_simplex(rest.clone()))?;
        let sign = probe.coeff(s).cloned().expect("the join reproduces the simplex");
        groups
            .entry(axis)
            .or_insert_with(|| Chain::zero(rest.dim()))
            .add_term(rest, x.clone() * sign);
    }
    let mut pieces = Vec::with_capacity(groups.len());
    for (axis, base) in groups {
        if base.is_zero() {
            continue;
        }
        if !base.is_cycle() {
            return Err(Error::Decomposition(format!("the base under axis {axis:?} is not a cycle")));
        }
        let u = make_ufo(axis, base, coord, beta.clone(), cfg).map_err(|e| Error::Decomposition(e.to_string()))?;
        pieces.push(u);
    }
    Ok(Decomposition { pieces, remainder })
}

/// First point `x` (in configuration order) with `x <= bound` that avoids
/// `forbidden`.
pub(crate) fn first_point_below(cfg: &PointConfiguration, bound: &[i64], forbidden: &[usize]) -> Option<usize> {
    (0..cfg.num_points()).find(|&i| !forbidden.contains(&i) && cfg.point(i).iter().zip(bound).all(|(a, b)| a <= b))
}

pub(crate) fn rational(v: i64) -> Rational {
    if v == 1 {
        Rational::one()
    } else if v == 0 {
        Rational::zero()
    } else {
        Rational::from_integer(v.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SegreParams;

    fn cube() -> PointConfiguration {
        PointConfiguration::segre(&SegreParams::new(vec![1, 1, 1]).unwrap())
    }

    #[test]
    fn full_axis_ufo_is_one_simplex() {
        let cfg = cube();
        // points 4..8 have coordinate 1 equal to 1
        let beta = MultiDegree::new(vec![1, 3, 2, 2, 2, 2]);
        let base = Chain::augmentation(rational(1));
        let u = make_ufo(vec![4, 5, 6], base, 1, beta, &cfg).unwrap();
        assert_eq!(u.eta().len(), 1);
        assert_eq!(u.k(), 3);
    }

    #[test]
    fn axis_sum_is_enforced() {
        let cfg = cube();
        let beta = MultiDegree::new(vec![1, 3, 2, 2, 2, 2]);
        let base = Chain::augmentation(rational(1));
        assert!(matches!(make_ufo(vec![4, 5], base, 1, beta, &cfg), Err(Error::InvalidUfo(_))));
    }

    #[test]
    fn decomposition_round_trip() {
        let cfg = cube();
        let beta = MultiDegree::new(vec![1, 3, 2, 2, 2, 2]);
        let u = make_ufo(vec![4, 5, 6], Chain::augmentation(rational(2)), 1, beta.clone(), &cfg).unwrap();
        let d = decompose_ufos(&u.eta(), &beta, 1, 2, &cfg).unwrap();
        assert_eq!(d.pieces.len(), 1);
        assert!(d.remainder.is_zero());
        assert_eq!(d.recombine(), u.eta());
        // everything below the saturation stays in the remainder
        let low: QChain = Chain::from_simplex(Simplex::new([0, 1, 4]).unwrap());
        let d = decompose_ufos(&low, &beta, 1, 2, &cfg).unwrap();
        assert!(d.pieces.is_empty());
        assert_eq!(d.remainder, low);
    }
}
