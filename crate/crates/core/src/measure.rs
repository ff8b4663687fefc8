//! Exact probability distributions on enumerated spaces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};
use crate::rational::{self, Prob};
use crate::space::{check_same, Space, SpaceRef};

/// A probability distribution on an enumerated space.
///
/// Only points of positive weight are stored, sorted by index. Two
/// distributions are equal exactly when their spaces and all weights are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dist {
    space: SpaceRef,
    support: Vec<(usize, Prob)>,
}

impl Dist {
    /// Builds a distribution from a dense weight vector aligned with the
    /// enumeration of `space`.
    pub fn new(space: SpaceRef, weights: Vec<Prob>) -> Result<Dist> {
        if weights.len() != space.card() {
            return Err(domain(format!(
                "{} weights for a space of {} points",
                weights.len(),
                space.card()
            )));
        }
        Dist::from_entries(space, weights.into_iter().enumerate())
    }

    /// Builds a distribution from `(index, weight)` pairs. Indices must be
    /// distinct; omitted points have weight zero.
    pub fn from_entries(
        space: SpaceRef,
        entries: impl IntoIterator<Item = (usize, Prob)>,
    ) -> Result<Dist> {
        let mut map = BTreeMap::new();
        for (i, w) in entries {
            if i >= space.card() {
                return Err(domain(format!("index {i} outside {space}")));
            }
            if w.is_negative() {
                return Err(domain(format!(
                    "negative weight {} at {}",
                    rational::format(&w),
                    space.label(i)
                )));
            }
            if map.insert(i, w).is_some() {
                return Err(domain(format!("weight for {} given twice", space.label(i))));
            }
        }
        let total: Prob = map.values().sum();
        if !total.is_one() {
            return Err(domain(format!(
                "weights sum to {}, not 1",
                rational::format(&total)
            )));
        }
        Ok(Dist::from_map(space, map))
    }

    /// Assembles a distribution from accumulated weights whose total is
    /// known to be one.
    pub(crate) fn from_map(space: SpaceRef, map: BTreeMap<usize, Prob>) -> Dist {
        let support: Vec<_> = map.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        let d = Dist { space, support };
        debug_assert!(d.is_normalized(), "unnormalized distribution on {}", d.space);
        d
    }

    pub fn dirac(space: SpaceRef, point: usize) -> Result<Dist> {
        if point >= space.card() {
            return Err(domain(format!("index {point} outside {space}")));
        }
        Ok(Dist {
            space,
            support: vec![(point, rational::one())],
        })
    }

    /// Dirac mass at the point with the given label.
    pub fn dirac_at(space: SpaceRef, label: &str) -> Result<Dist> {
        let i = space.index_of(label)?;
        Dist::dirac(space, i)
    }

    pub fn uniform(space: SpaceRef) -> Dist {
        let w = rational::ratio(1, space.card() as i64);
        let support = (0..space.card()).map(|i| (i, w.clone())).collect();
        Dist { space, support }
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    /// Points of positive weight in enumeration order.
    pub fn support(&self) -> &[(usize, Prob)] {
        &self.support
    }

    pub fn weight(&self, point: usize) -> Prob {
        self.support
            .binary_search_by_key(&point, |(i, _)| *i)
            .map(|k| self.support[k].1.clone())
            .unwrap_or_else(|_| rational::zero())
    }

    /// Dense weight vector aligned with the space enumeration.
    pub fn weights(&self) -> Vec<Prob> {
        let mut out = vec![rational::zero(); self.space.card()];
        for (i, w) in &self.support {
            out[*i] = w.clone();
        }
        out
    }

    pub fn is_normalized(&self) -> bool {
        self.support.iter().all(|(_, w)| !w.is_negative())
            && self.support.iter().map(|(_, w)| w).sum::<Prob>().is_one()
    }

    pub fn mass(&self, set: &SubsetOf) -> Result<Prob> {
        check_same("mass", &self.space, &set.space)?;
        Ok(self.mass_where(|i| set.contains(i)))
    }

    pub(crate) fn mass_where(&self, pred: impl Fn(usize) -> bool) -> Prob {
        self.support
            .iter()
            .filter(|(i, _)| pred(*i))
            .map(|(_, w)| w)
            .sum()
    }

    /// `Σ_s f(s)·weight(s)`.
    pub fn integrate(&self, f: impl Fn(usize) -> Prob) -> Prob {
        self.support.iter().map(|(i, w)| f(*i) * w).sum()
    }

    /// Image of the distribution under `f`.
    pub fn pushforward(&self, target: SpaceRef, f: impl Fn(usize) -> usize) -> Result<Dist> {
        let mut map: BTreeMap<usize, Prob> = BTreeMap::new();
        for (i, w) in &self.support {
            let j = f(*i);
            if j >= target.card() {
                return Err(domain(format!(
                    "{} is mapped to index {j} outside {target}",
                    self.space.label(*i)
                )));
            }
            *map.entry(j).or_insert_with(rational::zero) += w;
        }
        Ok(Dist::from_map(target, map))
    }

    /// Product distribution on the tuple space of the factors' spaces.
    pub fn product(factors: &[Dist]) -> Result<Dist> {
        if factors.is_empty() {
            return Err(domain("product of an empty list of distributions"));
        }
        Ok(Dist::product_or_unit(factors))
    }

    /// Like [`Dist::product`], but the empty product is the unit mass on the
    /// one-point space.
    pub fn product_or_unit(factors: &[Dist]) -> Dist {
        let space = Space::tuple(factors.iter().map(|d| d.space.clone()).collect());
        let mut support = vec![(0usize, rational::one())];
        for d in factors {
            let card = d.space.card();
            let mut next = Vec::with_capacity(support.len() * d.support.len());
            for (i, w) in &support {
                for (j, v) in &d.support {
                    next.push((i * card + j, w * v));
                }
            }
            support = next;
        }
        let d = Dist { space, support };
        debug_assert!(d.is_normalized());
        d
    }
}

impl fmt::Display for Dist {
    /// `label:p/q` for every point, in enumeration order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut next = self.support.iter().peekable();
        for i in 0..self.space.card() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let w = match next.peek() {
                Some((j, w)) if *j == i => {
                    next.next();
                    w.clone()
                }
                _ => Prob::zero(),
            };
            write!(f, "{}:{}", self.space.label(i), rational::format(&w))?;
        }
        Ok(())
    }
}

/// A subset of an enumerated space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetOf {
    space: SpaceRef,
    members: BTreeSet<usize>,
}

impl SubsetOf {
    pub fn new(space: SpaceRef, members: impl IntoIterator<Item = usize>) -> Result<SubsetOf> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&m) = members.iter().next_back() {
            if m >= space.card() {
                return Err(domain(format!("index {m} outside {space}")));
            }
        }
        Ok(SubsetOf { space, members })
    }

    pub fn from_labels<'a>(
        space: SpaceRef,
        labels: impl IntoIterator<Item = &'a str>,
    ) -> Result<SubsetOf> {
        let members = labels
            .into_iter()
            .map(|l| space.index_of(l))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(SubsetOf { space, members })
    }

    pub fn empty(space: SpaceRef) -> SubsetOf {
        SubsetOf {
            space,
            members: BTreeSet::new(),
        }
    }

    pub fn full(space: SpaceRef) -> SubsetOf {
        let members = (0..space.card()).collect();
        SubsetOf { space, members }
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn union(&self, other: &SubsetOf) -> Result<SubsetOf> {
        check_same("union", &self.space, &other.space)?;
        Ok(SubsetOf {
            space: self.space.clone(),
            members: &self.members | &other.members,
        })
    }

    pub fn is_disjoint(&self, other: &SubsetOf) -> bool {
        self.members.is_disjoint(&other.members)
    }
}
