//! Measurable cylinders `π_n^{-1}(B)` and the content `P_a`.

use std::collections::BTreeSet;

use super::{invariant, ChainModel, Prefix};
use crate::error::{domain, precondition, Result};
use crate::rational::{self, Prob};
use crate::report::Check;

/// The set of trajectories whose depth-`n` prefix lies in `base`.
///
/// Cylinders keep their declared depth; comparisons lift to a common one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    depth: usize,
    base: BTreeSet<usize>,
}

impl Cylinder {
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Indices into `X^{≤depth}`.
    pub fn base(&self) -> &BTreeSet<usize> {
        &self.base
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }
}

impl ChainModel {
    pub fn cylinder(&self, depth: usize, base: impl IntoIterator<Item = usize>) -> Result<Cylinder> {
        let card = self.prefix_space(depth)?.card();
        let base: BTreeSet<usize> = base.into_iter().collect();
        if let Some(&i) = base.iter().next_back() {
            if i >= card {
                return Err(domain(format!("index {i} outside X^≤{depth}")));
            }
        }
        Ok(Cylinder { depth, base })
    }

    pub fn cylinder_of(&self, depth: usize, base: &[Prefix]) -> Result<Cylinder> {
        let idx = base
            .iter()
            .map(|p| {
                if p.depth() != depth {
                    Err(domain(format!("{} is not a depth-{depth} prefix", self.prefix_label(p))))
                } else {
                    self.prefix_index(p)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        self.cylinder(depth, idx)
    }

    /// Parses patterns such as `"S|*|R"`: each of the comma-separated
    /// patterns adds the prefixes it matches, `*` matching any state. All
    /// patterns must have the same length.
    pub fn cylinder_from_patterns(&self, spec: &str) -> Result<Cylinder> {
        let patterns: Vec<Vec<&str>> = spec
            .split(',')
            .map(|p| p.split('|').map(str::trim).collect())
            .collect();
        let len = patterns[0].len();
        if patterns.iter().any(|p| p.len() != len) {
            return Err(domain(format!("patterns in {spec:?} have different lengths")));
        }
        let depth = len - 1;
        let space = self.prefix_space(depth)?;
        let mut base = BTreeSet::new();
        for pattern in &patterns {
            let allowed = pattern
                .iter()
                .zip(&self.spaces)
                .map(|(label, s)| {
                    if *label == "*" {
                        Ok(None)
                    } else {
                        s.index_of(label).map(Some)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            for i in 0..space.card() {
                let coords = space.decode(i);
                if coords.iter().zip(&allowed).all(|(c, a)| a.is_none_or(|a| a == *c)) {
                    base.insert(i);
                }
            }
        }
        Ok(Cylinder { depth, base })
    }

    /// The full space as a depth-0 cylinder.
    pub fn full_cylinder(&self) -> Cylinder {
        Cylinder {
            depth: 0,
            base: (0..self.spaces[0].card()).collect(),
        }
    }

    /// The same set of trajectories described at depth `m`.
    pub fn lift_cylinder(&self, cyl: &Cylinder, m: usize) -> Result<Cylinder> {
        self.check_depth(m)?;
        if m < cyl.depth {
            return Err(domain(format!(
                "cannot lift a depth-{} cylinder to depth {m}",
                cyl.depth
            )));
        }
        let width = self.segment_card(cyl.depth, m);
        let base = cyl
            .base
            .iter()
            .flat_map(|b| b * width..(b + 1) * width)
            .collect();
        Ok(Cylinder { depth: m, base })
    }

    fn lift_pair(&self, c1: &Cylinder, c2: &Cylinder) -> Result<(Cylinder, Cylinder)> {
        let m = c1.depth.max(c2.depth);
        Ok((self.lift_cylinder(c1, m)?, self.lift_cylinder(c2, m)?))
    }

    pub fn cylinder_intersect(&self, c1: &Cylinder, c2: &Cylinder) -> Result<Cylinder> {
        let (l, r) = self.lift_pair(c1, c2)?;
        Ok(Cylinder {
            depth: l.depth,
            base: &l.base & &r.base,
        })
    }

    pub fn cylinder_union(&self, c1: &Cylinder, c2: &Cylinder) -> Result<Cylinder> {
        let (l, r) = self.lift_pair(c1, c2)?;
        Ok(Cylinder {
            depth: l.depth,
            base: &l.base | &r.base,
        })
    }

    pub fn cylinder_diff(&self, c1: &Cylinder, c2: &Cylinder) -> Result<Cylinder> {
        let (l, r) = self.lift_pair(c1, c2)?;
        Ok(Cylinder {
            depth: l.depth,
            base: &l.base - &r.base,
        })
    }

    /// Set equality of the described trajectory sets.
    pub fn cylinder_eq(&self, c1: &Cylinder, c2: &Cylinder) -> Result<bool> {
        let (l, r) = self.lift_pair(c1, c2)?;
        Ok(l.base == r.base)
    }

    pub fn cylinder_subset(&self, inner: &Cylinder, outer: &Cylinder) -> Result<bool> {
        let (l, r) = self.lift_pair(inner, outer)?;
        Ok(l.base.is_subset(&r.base))
    }

    /// `P_a(x, π_n^{-1}(B)) = η_{a,n}(x, B)`.
    pub fn cylinder_content(&self, a: usize, x: &Prefix, cyl: &Cylinder) -> Result<Prob> {
        let i = self.prefix_at_depth(a, x)?;
        self.content_at(a, i, cyl)
    }

    pub(crate) fn content_at(&self, a: usize, x: usize, cyl: &Cylinder) -> Result<Prob> {
        let row = self.partial_traj(a, cyl.depth)?.row(x);
        Ok(row.mass_where(|i| cyl.base.contains(&i)))
    }

    /// Checks `P_a(x, ⋃ C_i) = Σ P_a(x, C_i)` for pairwise disjoint
    /// cylinders.
    pub fn check_content_additivity(
        &self,
        a: usize,
        x: &Prefix,
        cylinders: &[Cylinder],
    ) -> Result<Check> {
        let depth = cylinders.iter().map(|c| c.depth).max().unwrap_or(0);
        let lifted = cylinders
            .iter()
            .map(|c| self.lift_cylinder(c, depth))
            .collect::<Result<Vec<_>>>()?;
        let mut union = BTreeSet::new();
        for (k, c) in lifted.iter().enumerate() {
            if !union.is_disjoint(&c.base) {
                return Err(precondition(format!("cylinder {k} overlaps an earlier one")));
            }
            union.extend(c.base.iter().copied());
        }
        let lhs = self.cylinder_content(a, x, &Cylinder { depth, base: union })?;
        let rhs = cylinders
            .iter()
            .map(|c| self.cylinder_content(a, x, c))
            .sum::<Result<Prob>>()?;
        Ok(Check::values(
            format!("content-additivity[a={a},x={},n={}]", self.prefix_label(x), cylinders.len()),
            &lhs,
            &rhs,
        ))
    }

    /// Finds a prefix extending `x` that lies in every cylinder of a
    /// non-increasing family whose contents from `x` are all at least `eps`.
    ///
    /// Coordinates are chosen one at a time. At each step the next state
    /// maximizes the conditional content of the smallest cylinder given the
    /// extended prefix, ties going to the earliest state; since the content
    /// is the average of the conditional contents, the maximum stays
    /// `≥ eps`. The returned prefix has depth `max(a, deepest cylinder)`.
    pub fn extract_witness(
        &self,
        a: usize,
        x: &Prefix,
        cylinders: &[Cylinder],
        eps: &Prob,
    ) -> Result<Prefix> {
        let start = self.prefix_at_depth(a, x)?;
        if *eps <= rational::zero() {
            return Err(precondition("eps must be positive"));
        }
        let Some(last) = cylinders.last() else {
            return Err(precondition("no cylinders given"));
        };
        for (k, pair) in cylinders.windows(2).enumerate() {
            if !self.cylinder_subset(&pair[1], &pair[0])? {
                return Err(precondition(format!(
                    "cylinder {} is not contained in cylinder {k}",
                    k + 1
                )));
            }
        }
        for (k, c) in cylinders.iter().enumerate() {
            let content = self.content_at(a, start, c)?;
            if content < *eps {
                return Err(precondition(format!(
                    "cylinder {k} has content {} < eps = {}",
                    rational::format(&content),
                    rational::format(eps)
                )));
            }
        }

        let depth = cylinders.iter().map(|c| c.depth).max().unwrap_or(0).max(a);
        let target = self.lift_cylinder(last, depth)?;
        let mut point = start;
        for k in a..depth {
            let width = self.spaces[k + 1].card();
            let mut best: Option<(usize, Prob)> = None;
            for s in 0..width {
                let c = self.content_at(k + 1, point * width + s, &target)?;
                if best.as_ref().is_none_or(|(_, b)| c > *b) {
                    best = Some((s, c));
                }
            }
            let (s, c) = best.expect("spaces are nonempty");
            if c < *eps {
                return Err(invariant(format!(
                    "no extension at depth {} keeps content ≥ eps",
                    k + 1
                )));
            }
            point = point * width + s;
        }
        let witness = self.prefix_at(depth, point);
        for (k, c) in cylinders.iter().enumerate() {
            let restricted = self.restrict_prefix(c.depth, depth)(point);
            if !c.base.contains(&restricted) {
                return Err(invariant(format!(
                    "witness {} is outside cylinder {k}",
                    self.prefix_label(&witness)
                )));
            }
        }
        Ok(witness)
    }
}
