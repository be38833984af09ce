//! Serialized instances for `ufo-demo`.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use segre_core::ufo::{self, sample::Sampler};
use segre_core::{MultiDegree, PointConfiguration, QChain, Simplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Lemma {
    Simple,
    Subc,
    Ufo24,
    Push,
    Step2,
    Step1,
}

/// One replayable input. `config` is a descriptor such as `segre:1,1,1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "lemma", rename_all = "kebab-case")]
pub enum Instance {
    Simple {
        config: String,
        axis: Vec<usize>,
        base: QChain,
        coord: usize,
        beta: Vec<i64>,
        l: usize,
        p: usize,
    },
    Subc {
        config: String,
        axis: Vec<usize>,
        base: QChain,
        coord: usize,
        beta: Vec<i64>,
        sigma: Vec<usize>,
    },
    Ufo24 {
        config: String,
        axis: Vec<usize>,
        base: QChain,
        beta: Vec<i64>,
    },
    Push {
        config: String,
        eta: QChain,
        beta: Vec<i64>,
        p: usize,
    },
    /// A filling of a cycle of `Box(b)` inside `X_b`.
    Step2 {
        config: String,
        eta: QChain,
        b: Vec<i64>,
        p: usize,
    },
    Step1 {
        config: String,
        gamma: QChain,
        b: Vec<i64>,
        p: usize,
    },
}

impl Instance {
    pub fn config(&self) -> &str {
        match self {
            Instance::Simple { config, .. }
            | Instance::Subc { config, .. }
            | Instance::Ufo24 { config, .. }
            | Instance::Push { config, .. }
            | Instance::Step2 { config, .. }
            | Instance::Step1 { config, .. } => config,
        }
    }

    /// Runs the construction; the JSON value is the certificate (or the
    /// step-one result).
    pub fn replay(&self) -> Result<serde_json::Value> {
        let cfg: PointConfiguration = self.config().parse()?;
        let value = match self {
            Instance::Simple {
                axis,
                base,
                coord,
                beta,
                l,
                p,
                ..
            } => {
                let u = ufo::make_ufo(axis.clone(), base.clone(), *coord, MultiDegree::new(beta.clone()), &cfg)?;
                serde_json::to_value(ufo::fill_simple(&u, *coord, *l, *p)?)?
            }
            Instance::Subc {
                axis,
                base,
                coord,
                beta,
                sigma,
                ..
            } => {
                let u = ufo::make_ufo(axis.clone(), base.clone(), *coord, MultiDegree::new(beta.clone()), &cfg)?;
                let sigma = Simplex::new(sigma.iter().copied())?;
                serde_json::to_value(ufo::fill_subc(&u, &sigma)?)?
            }
            Instance::Ufo24 { axis, base, beta, .. } => {
                let u = ufo::make_ufo(axis.clone(), base.clone(), 1, MultiDegree::new(beta.clone()), &cfg)?;
                serde_json::to_value(ufo::fill_ufo24(&u)?)?
            }
            Instance::Push { eta, beta, p, .. } => {
                serde_json::to_value(ufo::push_boundary(eta, &MultiDegree::new(beta.clone()), *p, &cfg)?)?
            }
            Instance::Step2 { eta, b, p, .. } => {
                serde_json::to_value(ufo::step2_retract_from(eta, &MultiDegree::new(b.clone()), *p, &cfg)?)?
            }
            Instance::Step1 { gamma, b, p, .. } => {
                serde_json::to_value(ufo::step1_push(gamma, &MultiDegree::new(b.clone()), *p, &cfg)?)?
            }
        };
        Ok(value)
    }

    /// A random instance of the given lemma.
    pub fn sample(lemma: Lemma, config: &str, seed: u64, p: usize, t: Option<usize>) -> Result<Self> {
        let cfg: PointConfiguration = config.parse()?;
        let config = cfg.descriptor();
        let mut s = Sampler::new(&cfg, seed);
        let none = || anyhow!("no {lemma:?} instance found in {config} with p = {p} (seed {seed})");
        let inst = match lemma {
            Lemma::Simple => {
                let u = s.simple(p, t.unwrap_or(p), seed % 2 == 0)?.ok_or_else(none)?;
                Instance::Simple {
                    config,
                    axis: u.axis().to_vec(),
                    base: u.base().clone(),
                    coord: u.coord(),
                    beta: u.beta().coords().to_vec(),
                    l: 0,
                    p,
                }
            }
            Lemma::Subc => {
                let (u, sigma) = s.subc(p, t.unwrap_or(1))?.ok_or_else(none)?;
                Instance::Subc {
                    config,
                    axis: u.axis().to_vec(),
                    base: u.base().clone(),
                    coord: u.coord(),
                    beta: u.beta().coords().to_vec(),
                    sigma: sigma.vertices().collect(),
                }
            }
            Lemma::Ufo24 => {
                let case2 = t == Some(2);
                let u = s.ufo24(case2)?.ok_or_else(none)?;
                Instance::Ufo24 {
                    config,
                    axis: u.axis().to_vec(),
                    base: u.base().clone(),
                    beta: u.beta().coords().to_vec(),
                }
            }
            Lemma::Push => {
                let (eta, beta) = s.push_input(p, t.unwrap_or(p), 2, seed % 2 == 0)?.ok_or_else(none)?;
                Instance::Push {
                    config,
                    eta,
                    beta: beta.into_coords(),
                    p,
                }
            }
            Lemma::Step2 => {
                let b = pick_degree(&cfg, p, seed)?;
                let eta = s.union_chain(&b, p, 3)?;
                Instance::Step2 {
                    config,
                    eta,
                    b: b.into_coords(),
                    p,
                }
            }
            Lemma::Step1 => {
                // not every box carries a cycle of the right dimension
                let mut found = None;
                for k in 0..16 {
                    let b = pick_degree(&cfg, p, seed + k)?;
                    if let Some(g) = s.cycle_in_box(b.coords(), p as isize - 1)? {
                        found = Some((b, g));
                        break;
                    }
                }
                let (b, gamma) = found.ok_or_else(none)?;
                Instance::Step1 {
                    config,
                    gamma,
                    b: b.into_coords(),
                    p,
                }
            }
        };
        Ok(inst)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing instance {}", path.display()))
    }
}

/// A multidegree of degree `p + 2` with positive first coordinate.
fn pick_degree(cfg: &PointConfiguration, p: usize, seed: u64) -> Result<MultiDegree> {
    let all: Vec<MultiDegree> = cfg
        .enumerate_multidegrees(p + 2)
        .into_iter()
        .filter(|b| b.coords()[0] > 0)
        .collect();
    if all.is_empty() {
        bail!("no multidegree of degree {} with positive first coordinate", p + 2);
    }
    Ok(all[(seed % all.len() as u64) as usize].clone())
}
