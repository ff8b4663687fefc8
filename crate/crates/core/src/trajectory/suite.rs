//! The identity checks behind `verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ChainModel, Cylinder, Prefix};
use crate::error::{domain, Result};
use crate::kernel::Kernel;
use crate::random;
use crate::rational::Prob;
use crate::report::{Check, Report};

impl ChainModel {
    /// `η_{b,c} ∘ η_{a,b} = η_{a,c}` for `a ≤ b ≤ c`.
    pub fn check_eta_comp(&self, a: usize, b: usize, c: usize) -> Result<Check> {
        ordered(&[a, b, c])?;
        let lhs = Kernel::comp(self.partial_traj(b, c)?, self.partial_traj(a, b)?)?;
        Ok(Check::kernels(
            format!("eta-comp[a={a},b={b},c={c}]"),
            &lhs,
            self.partial_traj(a, c)?,
        ))
    }

    /// `π_{c→b*} η_{a,c} = η_{a,b}` for `b ≤ c`.
    pub fn check_eta_proj(&self, a: usize, b: usize, c: usize) -> Result<Check> {
        ordered(&[b, c])?;
        let lhs = self
            .partial_traj(a, c)?
            .map(self.prefix_space(b)?.clone(), self.restrict_prefix(b, c))?;
        Ok(Check::kernels(
            format!("eta-proj[a={a},b={b},c={c}]"),
            &lhs,
            self.partial_traj(a, b)?,
        ))
    }

    /// Integrating from `a` to `b` after integrating from `b` to `c` is the
    /// same as integrating from `a` to `c`, pointwise on `X^{≤D}`.
    pub fn check_lmarginal_semigroup(
        &self,
        a: usize,
        b: usize,
        c: usize,
        f: &[Prob],
        tag: &str,
    ) -> Result<Check> {
        ordered(&[a, b, c])?;
        let inner = self.lmarginal_table(b, c, f)?;
        let lhs = self.lmarginal_table(a, b, &inner)?;
        let rhs = self.lmarginal_table(a, c, f)?;
        Ok(Check::tables(
            format!("lmarginal-semigroup[a={a},b={b},c={c},f={tag}]"),
            &lhs,
            &rhs,
        ))
    }

    /// The content of a cylinder does not depend on the depth it is
    /// described at.
    pub fn check_content_lift(&self, a: usize, x: &Prefix, cyl: &Cylinder, m: usize) -> Result<Check> {
        let lifted = self.lift_cylinder(cyl, m)?;
        Ok(Check::values(
            format!(
                "content-lift[a={a},x={},n={},m={m}]",
                self.prefix_label(x),
                cyl.depth()
            ),
            &self.cylinder_content(a, x, cyl)?,
            &self.cylinder_content(a, x, &lifted)?,
        ))
    }

    /// `η_{b,D} ∘ η_{a,b} = η_{a,D}`: the trajectory kernel from `b` after
    /// the partial trajectory from `a` is the trajectory kernel from `a`.
    pub fn check_xi_comp(&self, a: usize, b: usize) -> Result<Check> {
        ordered(&[a, b])?;
        let top = self.max_depth();
        let lhs = Kernel::comp(self.partial_traj(b, top)?, self.partial_traj(a, b)?)?;
        Ok(Check::kernels(
            format!("xi-comp[a={a},b={b}]"),
            &lhs,
            self.partial_traj(a, top)?,
        ))
    }
}

fn ordered(depths: &[usize]) -> Result<()> {
    if depths.windows(2).all(|w| w[0] <= w[1]) {
        Ok(())
    } else {
        Err(domain(format!("depths {depths:?} are not non-decreasing")))
    }
}

/// Runs every identity check on `model`. Random functions, start points
/// and cylinders are drawn from a generator seeded with `seed`, so the
/// report is a pure function of the model and the seed.
pub fn verify_chain(model: &ChainModel, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = model.max_depth();
    let mut report = Report::new("chain");
    let start = |rng: &mut ChaCha8Rng, a: usize| -> Result<Prefix> {
        let card = model.prefix_space(a)?.card();
        Ok(model.prefix_at(a, rng.gen_range(0..card)))
    };

    for a in 0..=top {
        for b in a..=top {
            for c in b..=top {
                report.push(model.check_eta_comp(a, b, c)?);
            }
        }
    }
    for a in 0..=top {
        for c in 0..=top {
            for b in 0..=c {
                report.push(model.check_eta_proj(a, b, c)?);
            }
        }
    }
    let functions: Vec<Vec<Prob>> = (0..2).map(|_| random::random_function(&mut rng, model)).collect();
    for a in 0..=top {
        for b in a..=top {
            for c in b..=top {
                for (k, f) in functions.iter().enumerate() {
                    report.push(model.check_lmarginal_semigroup(a, b, c, f, &format!("f{k}"))?);
                }
            }
        }
    }
    for a in 0..=top {
        let x = start(&mut rng, a)?;
        for n in 0..=top {
            let cyl = random::random_cylinder(&mut rng, model, n);
            for m in n..=top {
                report.push(model.check_content_lift(a, &x, &cyl, m)?);
            }
        }
        for groups in [2, 3] {
            let family = random::random_disjoint_family(&mut rng, model, groups);
            report.push(model.check_content_additivity(a, &x, &family)?);
        }
    }
    for a in 0..=top {
        for b in a..=top {
            report.push(model.check_xi_comp(a, b)?);
        }
    }
    for a in 0..=top {
        let u = start(&mut rng, a)?;
        for b in a..=top {
            report.push(model.check_comp_prod_traj(a, b, &u)?);
        }
    }
    for a in 0..=top {
        let u = start(&mut rng, a)?;
        let f = random::random_function(&mut rng, model);
        for b in a..=top {
            report.push(model.check_cond_exp(a, &u, b, &f)?);
        }
    }
    Ok(report)
}
