//! Chain models and the kernels built from them.
//!
//! A [`ChainModel`] carries finite spaces `X_0, .., X_D` and step kernels
//! `κ_n : X^{≤n} ⤳ X_{n+1}`. Everything infinite is truncated at `D`: the
//! trajectory law from a depth-`a` prefix is represented by its marginals
//! on `X^{≤b}` for `b ≤ D`, which are the partial-trajectory kernels
//! `η_{a,b}` of [`ChainModel::partial_traj`].
//!
//! Points of `X^{≤b}` are addressed either by [`Prefix`] values or by their
//! index in the lexicographic enumeration of the prefix space.

mod condexp;
mod cylinder;
mod partial;
mod suite;

use std::fmt;
use std::sync::OnceLock;

use crate::error::{domain, Error, Result};
use crate::kernel::Kernel;
use crate::measure::Dist;
use crate::space::{check_same, Space, SpaceRef};

pub use cylinder::Cylinder;
pub use suite::verify_chain;

/// A point of `X^{≤b}`: state indices for coordinates `0..=b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prefix(Vec<usize>);

impl Prefix {
    pub fn new(coords: Vec<usize>) -> Result<Prefix> {
        if coords.is_empty() {
            return Err(domain("a prefix has at least one coordinate"));
        }
        Ok(Prefix(coords))
    }

    pub fn depth(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }
}

/// How a step kernel is given before expansion to a full prefix table.
#[derive(Debug, Clone)]
pub enum StepSpec {
    /// One row per prefix of depth `n`.
    Table(Kernel),
    /// A kernel `X_n ⤳ X_{n+1}` reading only the last coordinate.
    LastState(Kernel),
    /// The same distribution on `X_{n+1}` for every prefix.
    Const(Dist),
}

/// The kernel `κ_n : X^{≤n} ⤳ X_{n+1}`, always stored as a full table.
#[derive(Debug, Clone)]
pub struct StepKernel {
    n: usize,
    kernel: Kernel,
}

impl StepKernel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }
}

#[derive(Debug, Clone)]
pub struct ChainModel {
    spaces: Vec<SpaceRef>,
    prefixes: Vec<SpaceRef>,
    steps: Vec<StepKernel>,
    // η_{a,b} at a * (D + 1) + b
    traj: Vec<OnceLock<Kernel>>,
    // δ × φ_*κ_k : X^{≤k} ⤳ X^{≤k} × X_{(k,k+1]}
    extend: Vec<OnceLock<Kernel>>,
}

impl ChainModel {
    /// Builds a model from `D + 1` finite spaces and `D` step kernels.
    pub fn new(spaces: Vec<SpaceRef>, steps: Vec<StepSpec>) -> Result<ChainModel> {
        if spaces.len() < 2 {
            return Err(domain("a chain model needs maxDepth ≥ 1"));
        }
        if let Some(s) = spaces.iter().find(|s| s.as_finite().is_none()) {
            return Err(domain(format!("{s} is not a finite state space")));
        }
        let depth = spaces.len() - 1;
        if steps.len() != depth {
            return Err(domain(format!(
                "maxDepth {depth} needs {depth} step kernels, got {}",
                steps.len()
            )));
        }
        let prefixes: Vec<SpaceRef> = (0..=depth)
            .map(|b| Space::tuple(spaces[..=b].to_vec()))
            .collect();
        let steps = steps
            .into_iter()
            .enumerate()
            .map(|(n, spec)| expand_step(n, &spaces, &prefixes[n], spec))
            .collect::<Result<Vec<_>>>()?;
        let cells = (depth + 1) * (depth + 1);
        Ok(ChainModel {
            spaces,
            prefixes,
            steps,
            traj: (0..cells).map(|_| OnceLock::new()).collect(),
            extend: (0..depth).map(|_| OnceLock::new()).collect(),
        })
    }

    /// `D`, the truncation depth.
    pub fn max_depth(&self) -> usize {
        self.spaces.len() - 1
    }

    pub fn space(&self, n: usize) -> &SpaceRef {
        &self.spaces[n]
    }

    pub fn spaces(&self) -> &[SpaceRef] {
        &self.spaces
    }

    pub fn step(&self, n: usize) -> &StepKernel {
        &self.steps[n]
    }

    /// The space `X^{≤b}`.
    pub fn prefix_space(&self, b: usize) -> Result<&SpaceRef> {
        self.check_depth(b)?;
        Ok(&self.prefixes[b])
    }

    /// The space `X_{(m,n]} = X_{m+1} × .. × X_n`; the one-point space when
    /// `m ≥ n`.
    pub fn segment_space(&self, m: usize, n: usize) -> Result<SpaceRef> {
        self.check_depth(n)?;
        let lo = (m + 1).min(n + 1);
        Ok(Space::tuple(self.spaces[lo..=n].to_vec()))
    }

    pub(crate) fn check_depth(&self, b: usize) -> Result<()> {
        if b > self.max_depth() {
            Err(domain(format!(
                "depth {b} exceeds maxDepth {}",
                self.max_depth()
            )))
        } else {
            Ok(())
        }
    }

    fn segment_card(&self, m: usize, n: usize) -> usize {
        if m >= n {
            1
        } else {
            self.spaces[m + 1..=n].iter().map(|s| s.card()).product()
        }
    }

    pub fn prefix_from_labels(&self, labels: &str) -> Result<Prefix> {
        let parts: Vec<&str> = labels.split('|').collect();
        if parts.len() > self.spaces.len() {
            return Err(domain(format!("{labels:?} is deeper than maxDepth")));
        }
        let coords = parts
            .iter()
            .zip(&self.spaces)
            .map(|(l, s)| s.index_of(l.trim()))
            .collect::<Result<Vec<_>>>()?;
        Prefix::new(coords)
    }

    pub fn prefix_label(&self, p: &Prefix) -> String {
        p.0.iter()
            .zip(&self.spaces)
            .map(|(&i, s)| s.label(i))
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Position of `p` in the enumeration of `X^{≤depth(p)}`.
    pub fn prefix_index(&self, p: &Prefix) -> Result<usize> {
        self.check_depth(p.depth())?;
        self.prefixes[p.depth()].encode(&p.0)
    }

    pub fn prefix_at(&self, depth: usize, index: usize) -> Prefix {
        Prefix(self.prefixes[depth].decode(index))
    }

    /// `π_{c→b} : X^{≤c} → X^{≤b}` on indices, for `b ≤ c`.
    pub fn restrict_prefix(&self, b: usize, c: usize) -> impl Fn(usize) -> usize {
        debug_assert!(b <= c);
        let width = self.segment_card(b, c);
        move |i| i / width
    }

    /// `ψ_{m,n} : X^{≤m} × X_{(m,n]} → X^{≤n}` on indices of the pair space.
    pub fn iic_prod_ioc(&self, m: usize, n: usize) -> impl Fn(usize) -> usize {
        let width = self.segment_card(m, n);
        move |pair| {
            let (p, s) = (pair / width, pair % width);
            p * width + s
        }
    }

    /// `φ_k : X_{k+1} → X_{(k,k+1]}` on indices.
    pub fn pi_singleton(&self, _k: usize) -> impl Fn(usize) -> usize {
        |s| s
    }

    /// `y ↪_b x`: the point of `X^{≤D}` equal to `x` with its first `b + 1`
    /// coordinates replaced by those of `y ∈ X^{≤b}`.
    pub(crate) fn splice(&self, b: usize, y: usize, x: usize) -> usize {
        let width = self.segment_card(b, self.max_depth());
        y * width + x % width
    }

    /// `δ × φ_*κ_k`, the kernel appending one coordinate to a depth-`k`
    /// prefix while keeping the prefix itself.
    fn extension(&self, k: usize) -> Result<&Kernel> {
        if let Some(kernel) = self.extend[k].get() {
            return Ok(kernel);
        }
        let step = self.steps[k].kernel.map(self.segment_space(k, k + 1)?, self.pi_singleton(k))?;
        let kernel = Kernel::prod(&Kernel::identity(self.prefixes[k].clone()), &step)?;
        Ok(self.extend[k].get_or_init(|| kernel))
    }
}

fn expand_step(n: usize, spaces: &[SpaceRef], prefix: &SpaceRef, spec: StepSpec) -> Result<StepKernel> {
    let target = &spaces[n + 1];
    let kernel = match spec {
        StepSpec::Table(k) => {
            check_same(&format!("step {n} source"), prefix, k.source())?;
            check_same(&format!("step {n} target"), target, k.target())?;
            k
        }
        StepSpec::LastState(k) => {
            check_same(&format!("step {n} source"), &spaces[n], k.source())?;
            check_same(&format!("step {n} target"), target, k.target())?;
            let last = spaces[n].card();
            Kernel::from_fn(prefix.clone(), target.clone(), |p| Ok(k.row(p % last).clone()))?
        }
        StepSpec::Const(d) => {
            check_same(&format!("step {n} target"), target, d.space())?;
            Kernel::constant(prefix.clone(), d)
        }
    };
    Ok(StepKernel { n, kernel })
}

impl fmt::Display for ChainModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chain model, maxDepth {}, spaces", self.max_depth())?;
        for s in &self.spaces {
            write!(f, " {s}[{}]", s.card())?;
        }
        Ok(())
    }
}

pub(crate) fn invariant(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::rational::ratio;

    pub fn weather_space(n: usize) -> SpaceRef {
        Space::finite(format!("X{n}"), ["S", "R"]).unwrap()
    }

    /// S → (S:3/4, R:1/4), R → (S:1/2, R:1/2) at every step, maxDepth 3.
    pub fn weather() -> ChainModel {
        let spaces: Vec<_> = (0..=3).map(weather_space).collect();
        let steps = (0..3)
            .map(|n| {
                let (src, dst) = (spaces[n].clone(), spaces[n + 1].clone());
                StepSpec::LastState(
                    Kernel::new(
                        src,
                        dst.clone(),
                        vec![
                            Dist::new(dst.clone(), vec![ratio(3, 4), ratio(1, 4)]).unwrap(),
                            Dist::new(dst, vec![ratio(1, 2), ratio(1, 2)]).unwrap(),
                        ],
                    )
                    .unwrap(),
                )
            })
            .collect();
        ChainModel::new(spaces, steps).unwrap()
    }

    pub fn coin(depth: usize) -> ChainModel {
        let spaces: Vec<_> = (0..=depth)
            .map(|n| Space::finite(format!("C{n}"), ["H", "T"]).unwrap())
            .collect();
        let steps = (0..depth)
            .map(|n| StepSpec::Const(Dist::uniform(spaces[n + 1].clone())))
            .collect();
        ChainModel::new(spaces, steps).unwrap()
    }
}
