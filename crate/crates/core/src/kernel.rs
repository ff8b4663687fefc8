//! Markov kernels between enumerated spaces.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{domain, Result};
use crate::measure::{Dist, SubsetOf};
use crate::rational::{self, Prob};
use crate::space::{check_same, Space, SpaceRef};

/// A row-stochastic table: one distribution on `target` per point of
/// `source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    source: SpaceRef,
    target: SpaceRef,
    rows: Vec<Dist>,
}

impl Kernel {
    pub fn new(source: SpaceRef, target: SpaceRef, rows: Vec<Dist>) -> Result<Kernel> {
        if rows.len() != source.card() {
            return Err(domain(format!(
                "{} rows for a source of {} points",
                rows.len(),
                source.card()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            check_same(&format!("row {}", source.label(i)), &target, row.space())?;
        }
        Ok(Kernel {
            source,
            target,
            rows,
        })
    }

    pub fn from_fn(
        source: SpaceRef,
        target: SpaceRef,
        row: impl Fn(usize) -> Result<Dist>,
    ) -> Result<Kernel> {
        let rows = (0..source.card()).map(row).collect::<Result<Vec<_>>>()?;
        Kernel::new(source, target, rows)
    }

    /// The kernel `x ↦ δ_{f(x)}`.
    pub fn deterministic(
        source: SpaceRef,
        target: SpaceRef,
        f: impl Fn(usize) -> usize,
    ) -> Result<Kernel> {
        let rows = (0..source.card())
            .map(|x| Dist::dirac(target.clone(), f(x)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Kernel {
            source,
            target,
            rows,
        })
    }

    pub fn identity(space: SpaceRef) -> Kernel {
        Kernel::deterministic(space.clone(), space, |x| x).expect("identity is total")
    }

    /// The kernel that ignores its input and always returns `dist`.
    pub fn constant(source: SpaceRef, dist: Dist) -> Kernel {
        Kernel {
            target: dist.space().clone(),
            rows: vec![dist; source.card()],
            source,
        }
    }

    pub fn source(&self) -> &SpaceRef {
        &self.source
    }

    pub fn target(&self) -> &SpaceRef {
        &self.target
    }

    pub fn row(&self, x: usize) -> &Dist {
        &self.rows[x]
    }

    pub fn rows(&self) -> &[Dist] {
        &self.rows
    }

    /// Push-forward `f_*κ`: every row is pushed along `f`.
    pub fn map(&self, target: SpaceRef, f: impl Fn(usize) -> usize) -> Result<Kernel> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.pushforward(target.clone(), &f))
            .collect::<Result<Vec<_>>>()?;
        Ok(Kernel {
            source: self.source.clone(),
            target,
            rows,
        })
    }

    /// Composition `η ∘ κ`: `(η ∘ κ)(x, z) = Σ_y η(y, z)·κ(x, y)`.
    pub fn comp(eta: &Kernel, kappa: &Kernel) -> Result<Kernel> {
        check_same("composition", &eta.source, &kappa.target)?;
        let rows = kappa.rows.iter().map(|r| mix(eta, r)).collect();
        Ok(Kernel {
            source: kappa.source.clone(),
            target: eta.target.clone(),
            rows,
        })
    }

    /// `κ ∘ μ`, the law of the output when the input is drawn from `μ`.
    pub fn comp_measure(kappa: &Kernel, mu: &Dist) -> Result<Dist> {
        check_same("composition with a measure", &kappa.source, mu.space())?;
        Ok(mix(kappa, mu))
    }

    /// Independent product `κ₁ × κ₂ : X ⤳ Y × Z`.
    pub fn prod(k1: &Kernel, k2: &Kernel) -> Result<Kernel> {
        check_same("product", &k1.source, &k2.source)?;
        let target = Space::pair(k1.target.clone(), k2.target.clone());
        let width = k2.target.card();
        let rows = k1
            .rows
            .iter()
            .zip(&k2.rows)
            .map(|(r1, r2)| {
                let mut map = BTreeMap::new();
                for (y, p) in r1.support() {
                    for (z, q) in r2.support() {
                        map.insert(y * width + z, p * q);
                    }
                }
                Dist::from_map(target.clone(), map)
            })
            .collect();
        Ok(Kernel {
            source: k1.source.clone(),
            target,
            rows,
        })
    }

    /// Composition-product `κ ⊗ₖ η : X ⤳ Y × Z` for `κ : X ⤳ Y` and
    /// `η : X × Y ⤳ Z`.
    pub fn comp_prod(kappa: &Kernel, eta: &Kernel) -> Result<Kernel> {
        let expected = Space::pair(kappa.source.clone(), kappa.target.clone());
        check_same("composition-product", &expected, &eta.source)?;
        let target = Space::pair(kappa.target.clone(), eta.target.clone());
        let width = eta.target.card();
        let rows = kappa
            .rows
            .iter()
            .enumerate()
            .map(|(x, r)| {
                let mut map = BTreeMap::new();
                for (y, p) in r.support() {
                    for (z, q) in eta.rows[expected.pair_index(x, *y)].support() {
                        map.insert(y * width + z, p * q);
                    }
                }
                Dist::from_map(target.clone(), map)
            })
            .collect();
        Ok(Kernel {
            source: kappa.source.clone(),
            target,
            rows,
        })
    }
}

/// Composition-product of a measure and a kernel, `μ ⊗ₘ κ` on `X × Y`.
pub fn comp_prod_measure(mu: &Dist, kappa: &Kernel) -> Result<Dist> {
    check_same("composition-product", mu.space(), &kappa.source)?;
    let target = Space::pair(kappa.source.clone(), kappa.target.clone());
    let width = kappa.target.card();
    let mut map = BTreeMap::new();
    for (x, p) in mu.support() {
        for (y, q) in kappa.rows[*x].support() {
            map.insert(x * width + y, p * q);
        }
    }
    Ok(Dist::from_map(target, map))
}

/// The section `{y | (x, y) ∈ set}` of a subset of a pair space.
pub fn section(set: &SubsetOf, x: usize) -> Result<SubsetOf> {
    let space = set.space();
    let (left, right) = space
        .pair_components()
        .ok_or_else(|| domain(format!("section of a subset of {space}, not a pair space")))?;
    if x >= left.card() {
        return Err(domain(format!("index {x} outside {left}")));
    }
    let lo = space.pair_index(x, 0);
    let hi = lo + right.card();
    SubsetOf::new(right.clone(), set.members().range(lo..hi).map(|i| i - lo))
}

fn mix(kernel: &Kernel, mu: &Dist) -> Dist {
    let mut map: BTreeMap<usize, Prob> = BTreeMap::new();
    for (y, p) in mu.support() {
        for (z, q) in kernel.rows[*y].support() {
            *map.entry(*z).or_insert_with(rational::zero) += p * q;
        }
    }
    Dist::from_map(kernel.target.clone(), map)
}

impl fmt::Display for Kernel {
    /// One line per source point, in enumeration order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}
