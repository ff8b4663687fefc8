//! Conditional expectations along the filtration and the
//! composition-product identity behind them.

use std::collections::BTreeMap;

use super::{ChainModel, Prefix};
use crate::error::{domain, Result};
use crate::kernel::comp_prod_measure;
use crate::rational::{self, Prob};
use crate::report::Check;
use crate::space::Space;

impl ChainModel {
    fn check_filtration_args(&self, a: usize, u: &Prefix, b: usize) -> Result<usize> {
        let i = self.prefix_at_depth(a, u)?;
        self.check_depth(b)?;
        if b < a {
            return Err(domain(format!("conditioning depth {b} is below the start depth {a}")));
        }
        Ok(i)
    }

    fn check_table(&self, f: &[Prob]) -> Result<()> {
        let card = self.prefixes[self.max_depth()].card();
        if f.len() != card {
            return Err(domain(format!(
                "function table has {} entries, X^≤D has {card} points",
                f.len()
            )));
        }
        Ok(())
    }

    /// `E[f | F_b]` under the trajectory law from `u`, as a table over
    /// `X^{≤b}`: `p ↦ Σ_y f(y)·η_{b,D}(p, y)`.
    ///
    /// The formula is evaluated at every prefix, including prefixes the
    /// law from `u` never reaches.
    pub fn cond_exp(&self, a: usize, u: &Prefix, b: usize, f: &[Prob]) -> Result<Vec<Prob>> {
        self.check_filtration_args(a, u, b)?;
        self.check_table(f)?;
        let tail = self.partial_traj(b, self.max_depth())?;
        Ok(tail
            .rows()
            .iter()
            .map(|row| row.integrate(|y| f[y].clone()))
            .collect())
    }

    /// Checks `∫_{π_b^{-1}(A)} E[f | F_b] dξ_a(u) = ∫_{π_b^{-1}(A)} f dξ_a(u)`
    /// for every singleton `A ⊆ X^{≤b}` and for `A = X^{≤b}`.
    pub fn check_cond_exp(&self, a: usize, u: &Prefix, b: usize, f: &[Prob]) -> Result<Check> {
        let start = self.check_filtration_args(a, u, b)?;
        let g = self.cond_exp(a, u, b, f)?;
        let top = self.max_depth();
        let law = self.partial_traj(a, top)?.row(start);
        let restrict = self.restrict_prefix(b, top);

        let mut lhs: BTreeMap<usize, Prob> = BTreeMap::new();
        let mut rhs: BTreeMap<usize, Prob> = BTreeMap::new();
        for (x, w) in law.support() {
            let p = restrict(*x);
            *lhs.entry(p).or_insert_with(rational::zero) += &g[p] * w;
            *rhs.entry(p).or_insert_with(rational::zero) += &f[*x] * w;
        }
        let total_lhs: Prob = lhs.values().sum();
        let total_rhs: Prob = rhs.values().sum();

        let mut check = Check::values(
            format!("condexp[a={a},u={},b={b}]", self.prefix_label(u)),
            &total_lhs,
            &total_rhs,
        );
        for (p, l) in &lhs {
            let r = &rhs[p];
            if l != r {
                check.pass = false;
                check.detail.push(format!(
                    "A = {{{}}}: {} vs {}",
                    self.prefix_label(&self.prefix_at(b, *p)),
                    rational::format(l),
                    rational::format(r)
                ));
            }
        }
        Ok(check)
    }

    /// Checks `η_{a,b}(u) ⊗ₘ ξ_b = (y ↦ (π_b(y), y))_* ξ_a(u)` at depth `D`.
    pub fn check_comp_prod_traj(&self, a: usize, b: usize, u: &Prefix) -> Result<Check> {
        self.check_filtration_args(a, u, b)?;
        let top = self.max_depth();
        let lhs = comp_prod_measure(&self.traj_marginal(a, u, b)?, self.partial_traj(b, top)?)?;
        let pair = Space::pair(self.prefixes[b].clone(), self.prefixes[top].clone());
        let restrict = self.restrict_prefix(b, top);
        let rhs = self
            .traj_marginal(a, u, top)?
            .pushforward(pair.clone(), |y| pair.pair_index(restrict(y), y))?;
        Ok(Check::dists(
            format!("compprod-traj[a={a},b={b},u={}]", self.prefix_label(u)),
            &lhs,
            &rhs,
        ))
    }
}
