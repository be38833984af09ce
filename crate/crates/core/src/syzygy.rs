//! Graded Betti numbers, bounded Property N_p checks and witness search.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::ComplexSpec;
use crate::config::{cap_dimensions, MultiDegree, PointConfiguration, SegreParams};
use crate::error::{Error, Result};
use crate::homology::{betti_of, cycle_basis, Filler, HomologyReport, RankEngine};
use crate::QChain;

/// Default degree bound for N_p checks.
pub fn default_degree_bound(p: usize) -> usize {
    p + 3
}

/// Number of minimal generators of `E_{j+1}` in multidegree `b`, i.e. the
/// rank of `H̃_j(Δ_b)`.
pub fn cps_rank(cfg: &PointConfiguration, b: &MultiDegree, j: isize, engine: &RankEngine) -> Result<usize> {
    Ok(cps_report(cfg, b, j, engine)?.betti)
}

/// [`cps_rank`] with face counts and engine metadata.
pub fn cps_report(cfg: &PointConfiguration, b: &MultiDegree, j: isize, engine: &RankEngine) -> Result<HomologyReport> {
    let spec = ComplexSpec::monoid(cfg, b.clone())?;
    crate::homology::betti_reduced(&spec, j, engine)
}

/// One nonzero graded Betti number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiEntry {
    pub j: isize,
    pub b: MultiDegree,
    pub t: usize,
    pub rank: usize,
    #[serde(skip)]
    pub exact_fallback: bool,
}

/// Nonzero `rank H̃_j(Δ_b)` over all `b` of one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub config: String,
    pub entries: Vec<BettiEntry>,
    pub total: usize,
}

impl BettiTable {
    pub fn from_entries(config: String, entries: Vec<BettiEntry>) -> Self {
        let total = entries.iter().map(|e| e.rank).sum();
        BettiTable { config, entries, total }
    }
}

/// The slice of the Betti table at homological index `j + 1` and degree `t`.
pub fn graded_betti(cfg: &PointConfiguration, j: isize, t: usize, engine: &RankEngine) -> Result<BettiTable> {
    let bs = cfg.enumerate_multidegrees(t);
    let reports: Vec<Option<BettiEntry>> = bs
        .into_par_iter()
        .map(|b| {
            let r = cps_report(cfg, &b, j, engine)?;
            Ok((r.betti > 0).then(|| BettiEntry {
                j,
                b,
                t,
                rank: r.betti,
                exact_fallback: r.exact_fallback,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(BettiTable::from_entries(cfg.label().to_string(), reports.into_iter().flatten().collect()))
}

/// Outcome of one `(p', t)` check: does `H̃_{p'-1}(Δ_b)` vanish for every
/// `b` of degree `t`?
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCheck {
    pub p: usize,
    pub q: usize,
    pub t: usize,
    pub multidegrees: usize,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub b: MultiDegree,
    pub j: isize,
    pub rank: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NpStatus {
    VerifiedThrough(usize),
    Failed,
}

impl std::fmt::Display for NpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NpStatus::VerifiedThrough(d) => write!(f, "verified-through-{d}"),
            NpStatus::Failed => write!(f, "failed"),
        }
    }
}

impl Serialize for NpStatus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NpReport {
    pub config: String,
    /// The configuration actually checked (differs when capped).
    pub checked_config: String,
    pub p: usize,
    pub degree_bound: usize,
    pub status: NpStatus,
    pub checks: Vec<DegreeCheck>,
    pub witnesses: Vec<Witness>,
}

impl NpReport {
    /// The per-degree vanishing pattern, for comparing runs.
    pub fn pattern(&self) -> Vec<(usize, usize, bool)> {
        self.checks.iter().map(|c| (c.p, c.t, c.vanishes)).collect()
    }
}

/// Checks `H̃_{p'-1}(Δ_b) = 0` for all `p' <= p` and all `b` of degree
/// `t` with `p' + 2 <= t <= D`. A pass means "verified through degree D",
/// not N_p itself.
pub fn check_np(dims: &SegreParams, p: usize, max_degree: usize, use_cap: bool, engine: &RankEngine) -> Result<NpReport> {
    if p < 1 {
        return Err(Error::InvalidParams("N_p checks need p >= 1".into()));
    }
    if max_degree < p + 2 {
        return Err(Error::InvalidParams(format!("degree bound {max_degree} < p + 2 = {}", p + 2)));
    }
    let checked = if use_cap { cap_dimensions(dims, p) } else { dims.clone() };
    let cfg = PointConfiguration::segre(&checked);
    let mut checks = Vec::new();
    let mut witnesses = Vec::new();
    for t in 3..=max_degree {
        let top = p.min(t - 2);
        let bs = cfg.enumerate_multidegrees(t);
        // one enumeration per b serves every p' at this degree
        let ranks: Vec<Vec<usize>> = bs
            .par_iter()
            .map(|b| {
                let cx = ComplexSpec::monoid(&cfg, b.clone())?.enumerate(top as isize)?;
                (1..=top)
                    .map(|pp| Ok(betti_of(&cx, cfg.label(), pp as isize - 1, engine)?.betti))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for pp in 1..=top {
            let mut vanishes = true;
            for (b, r) in bs.iter().zip(&ranks) {
                if r[pp - 1] > 0 {
                    vanishes = false;
                    witnesses.push(Witness {
                        b: b.clone(),
                        j: pp as isize - 1,
                        rank: r[pp - 1],
                    });
                }
            }
            checks.push(DegreeCheck {
                p: pp,
                q: t - pp,
                t,
                multidegrees: bs.len(),
                vanishes,
            });
        }
    }
    checks.sort_by_key(|c| (c.p, c.t));
    // stable: degree order is kept within each j
    witnesses.sort_by_key(|w| w.j);
    let status = if witnesses.is_empty() {
        NpStatus::VerifiedThrough(max_degree)
    } else {
        NpStatus::Failed
    };
    Ok(NpReport {
        config: dims.to_string(),
        checked_config: checked.to_string(),
        p,
        degree_bound: max_degree,
        status,
        checks,
        witnesses,
    })
}

/// A multidegree where N_p fails, with an explicit `(p-1)`-cycle of `Δ_b`
/// that bounds nowhere in `Δ_b`.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessCertificate {
    pub b: MultiDegree,
    pub t: usize,
    pub rank: usize,
    pub cycle: QChain,
}

impl WitnessCertificate {
    /// Re-checks from scratch: the cycle lives on `Δ_b`, is a cycle, and
    /// is not a boundary there.
    pub fn verify(&self, cfg: &PointConfiguration) -> Result<bool> {
        let spec = ComplexSpec::monoid(cfg, self.b.clone())?;
        if !self.cycle.is_cycle() || !self.cycle.is_supported_on(&spec) || self.cycle.is_zero() {
            return Ok(false);
        }
        Ok(crate::homology::fill(&self.cycle, &spec)?.is_none())
    }
}

/// All `b` of the given degrees with `rank H̃_{p-1}(Δ_b) > 0`, each with a
/// certified non-bounding cycle.
pub fn find_witness(dims: &SegreParams, p: usize, degrees: &[usize], engine: &RankEngine) -> Result<Vec<WitnessCertificate>> {
    if degrees.is_empty() {
        return Err(Error::InvalidParams("no degrees to search".into()));
    }
    if p < 1 {
        return Err(Error::InvalidParams("witness search needs p >= 1".into()));
    }
    let cfg = PointConfiguration::segre(dims);
    let j = p as isize - 1;
    let mut out = Vec::new();
    for &t in degrees {
        let found: Vec<Option<WitnessCertificate>> = cfg
            .enumerate_multidegrees(t)
            .into_par_iter()
            .map(|b| {
                let spec = ComplexSpec::monoid(&cfg, b.clone())?;
                let cx = spec.enumerate(j + 1)?;
                let rank = betti_of(&cx, cfg.label(), j, engine)?.betti;
                if rank == 0 {
                    return Ok(None);
                }
                let filler = Filler::new(&spec, j)?;
                for z in cycle_basis(&cx, j)? {
                    if filler.fill(&z)?.is_none() {
                        return Ok(Some(WitnessCertificate { b, t, rank, cycle: z }));
                    }
                }
                Err(Error::Construction(format!(
                    "rank {rank} at {b} but every basis cycle bounds"
                )))
            })
            .collect::<Result<_>>()?;
        out.extend(found.into_iter().flatten());
    }
    Ok(out)
}
