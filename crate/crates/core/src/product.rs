//! Product measures as chains with constant step kernels.

use crate::error::{domain, Result};
use crate::kernel::Kernel;
use crate::measure::Dist;
use crate::rational::Prob;
use crate::report::{Check, Report};
use crate::trajectory::{verify_chain, ChainModel, StepSpec};

/// A chain model whose step `n` always draws from `μ_{n+1}`, together with
/// the initial factor `μ_0`.
#[derive(Debug, Clone)]
pub struct ProductModel {
    chain: ChainModel,
    factors: Vec<Dist>,
}

impl ProductModel {
    /// Builds the constant-kernel chain of `factors = [μ_0, .., μ_D]`.
    pub fn new(factors: Vec<Dist>) -> Result<ProductModel> {
        if factors.len() < 2 {
            return Err(domain("a product model needs at least two factors"));
        }
        let spaces = factors.iter().map(|d| d.space().clone()).collect();
        let steps = factors[1..].iter().cloned().map(StepSpec::Const).collect();
        let chain = ChainModel::new(spaces, steps)?;
        Ok(ProductModel { chain, factors })
    }

    pub fn chain(&self) -> &ChainModel {
        &self.chain
    }

    pub fn factors(&self) -> &[Dist] {
        &self.factors
    }

    pub fn max_depth(&self) -> usize {
        self.chain.max_depth()
    }

    /// `μ_0 ⊗ .. ⊗ μ_b` on `X^{≤b}`.
    pub fn product_prefix_dist(&self, b: usize) -> Result<Dist> {
        self.chain.check_depth(b)?;
        Dist::product(&self.factors[..=b])
    }

    /// `μ_{m+1} ⊗ .. ⊗ μ_n`, the unit mass when `m = n`.
    fn segment_product(&self, m: usize, n: usize) -> Dist {
        Dist::product_or_unit(&self.factors[m + 1..=n])
    }

    /// The product prefix law equals `η_{0,b} ∘ μ_0`.
    pub fn check_prefix_law(&self, b: usize) -> Result<Check> {
        let mu0 = self.factors[0].pushforward(self.chain.prefix_space(0)?.clone(), |i| i)?;
        let rhs = Kernel::comp_measure(self.chain.partial_traj(0, b)?, &mu0)?;
        Ok(Check::dists(
            format!("product-prefix[b={b}]"),
            &self.product_prefix_dist(b)?,
            &rhs,
        ))
    }

    /// `η_{a,b} = ψ_{a,b*}(δ × const(μ_{a+1} ⊗ .. ⊗ μ_b))`.
    pub fn check_partial_traj_const(&self, a: usize, b: usize) -> Result<Check> {
        if a > b {
            return Err(domain(format!("depths {a} > {b}")));
        }
        let prefix = self.chain.prefix_space(a)?.clone();
        let rhs = Kernel::prod(
            &Kernel::identity(prefix.clone()),
            &Kernel::constant(prefix, self.segment_product(a, b)),
        )?
        .map(self.chain.prefix_space(b)?.clone(), self.chain.iic_prod_ioc(a, b))?;
        Ok(Check::kernels(
            format!("partial-traj-const[a={a},b={b}]"),
            self.chain.partial_traj(a, b)?,
            &rhs,
        ))
    }

    /// `⊗_{a<i≤c} μ_i` against the concatenation image of
    /// `(⊗_{a<i≤b} μ_i) ⊗ (⊗_{b<i≤c} μ_i)`.
    pub fn check_product_assoc(&self, a: usize, b: usize, c: usize) -> Result<Check> {
        if !(a <= b && b <= c) {
            return Err(domain(format!("depths {a}, {b}, {c} are not ordered")));
        }
        self.chain.check_depth(c)?;
        let lhs = self.segment_product(a, c);
        let left = self.segment_product(a, b);
        let right = self.segment_product(b, c);
        let width = right.space().card();
        let rhs = Dist::product(&[left, right])?
            .pushforward(lhs.space().clone(), |i| (i / width) * width + i % width)?;
        Ok(Check::dists(format!("product-assoc[a={a},b={b},c={c}]"), &lhs, &rhs))
    }

    /// Restricting the depth-`b` product law to depth `b' ≤ b` gives the
    /// depth-`b'` product law.
    pub fn check_projection(&self, shallow: usize, b: usize) -> Result<Check> {
        if shallow > b {
            return Err(domain(format!("depths {shallow} > {b}")));
        }
        let lhs = self.product_prefix_dist(b)?.pushforward(
            self.chain.prefix_space(shallow)?.clone(),
            self.chain.restrict_prefix(shallow, b),
        )?;
        Ok(Check::dists(
            format!("product-projection[b'={shallow},b={b}]"),
            &lhs,
            &self.product_prefix_dist(shallow)?,
        ))
    }

    /// Probability under the depth-`b` product law that `x_i ∈ first` and
    /// `x_j ∈ second`, next to the product of the two factor masses.
    pub fn coordinate_pair_masses(
        &self,
        b: usize,
        (i, first): (usize, &[usize]),
        (j, second): (usize, &[usize]),
    ) -> Result<(Prob, Prob)> {
        let law = self.product_prefix_dist(b)?;
        let space = law.space().clone();
        if i > b || j > b {
            return Err(domain("coordinate beyond the prefix depth"));
        }
        let joint = law.mass_where(|p| {
            let c = space.decode(p);
            first.contains(&c[i]) && second.contains(&c[j])
        });
        let marginal = |k: usize, set: &[usize]| {
            self.factors[k].mass_where(|s| set.contains(&s))
        };
        Ok((joint, marginal(i, first) * marginal(j, second)))
    }
}

/// [`verify_chain`] plus the product-specific identities.
pub fn verify_product(model: &ProductModel, seed: u64) -> Result<Report> {
    let mut report = verify_chain(model.chain(), seed)?;
    report.suite = "product".to_string();
    let top = model.max_depth();
    for b in 0..=top {
        report.push(model.check_prefix_law(b)?);
        for shallow in 0..=b {
            report.push(model.check_projection(shallow, b)?);
        }
    }
    for a in 0..=top {
        for b in a..=top {
            report.push(model.check_partial_traj_const(a, b)?);
            for c in b..=top {
                report.push(model.check_product_assoc(a, b, c)?);
            }
        }
    }
    Ok(report)
}
