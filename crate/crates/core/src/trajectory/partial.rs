use num_traits::ToPrimitive;
use rand::Rng;

use super::{ChainModel, Prefix};
use crate::error::{domain, Result};
use crate::kernel::Kernel;
use crate::measure::Dist;
use crate::rational::Prob;

impl ChainModel {
    /// The partial-trajectory kernel `η_{a,b} : X^{≤a} ⤳ X^{≤b}`.
    ///
    /// For `b ≤ a` it deterministically restricts the prefix. Otherwise it
    /// is built one coordinate at a time:
    /// `η_{a,k+1} = ψ_{k,k+1*}((δ × φ_{k*}κ_k) ∘ η_{a,k})`.
    /// Results are memoized per `(a, b)`.
    pub fn partial_traj(&self, a: usize, b: usize) -> Result<&Kernel> {
        self.check_depth(a)?;
        self.check_depth(b)?;
        let cell = &self.traj[a * (self.max_depth() + 1) + b];
        if let Some(k) = cell.get() {
            return Ok(k);
        }
        let kernel = if b <= a {
            Kernel::deterministic(
                self.prefixes[a].clone(),
                self.prefixes[b].clone(),
                self.restrict_prefix(b, a),
            )?
        } else {
            let k = b - 1;
            let prev = self.partial_traj(a, k)?;
            let next = Kernel::comp(self.extension(k)?, prev)?;
            next.map(self.prefixes[b].clone(), self.iic_prod_ioc(k, b))?
        };
        Ok(cell.get_or_init(|| kernel))
    }

    /// `∫ f(y ↪_b x) η_{a,b}(x_0..x_a, dy)` for `f` given as a table over
    /// `X^{≤D}` and `x` an index into that table.
    pub fn lmarginal_partial_traj(&self, a: usize, b: usize, f: &[Prob], x: usize) -> Result<Prob> {
        self.check_marginal_args(a, b, f)?;
        let top = self.max_depth();
        if x >= self.prefixes[top].card() {
            return Err(domain(format!("index {x} outside {}", self.prefixes[top])));
        }
        let row = self.partial_traj(a, b)?.row(self.restrict_prefix(a, top)(x));
        Ok(row.integrate(|y| f[self.splice(b, y, x)].clone()))
    }

    /// [`ChainModel::lmarginal_partial_traj`] at every point of `X^{≤D}`.
    pub fn lmarginal_table(&self, a: usize, b: usize, f: &[Prob]) -> Result<Vec<Prob>> {
        self.check_marginal_args(a, b, f)?;
        // The value at x depends only on x's first a + 1 coordinates and on
        // its coordinates after b, so each (prefix, tail) pair is integrated
        // once.
        let top = self.max_depth();
        let tails = self.segment_card(b, top);
        let block = self.segment_card(a, top);
        let kernel = self.partial_traj(a, b)?;
        let mut out = Vec::with_capacity(f.len());
        for row in kernel.rows() {
            let by_tail: Vec<Prob> = (0..tails)
                .map(|t| row.integrate(|y| f[y * tails + t].clone()))
                .collect();
            out.extend((0..block).map(|r| by_tail[r % tails].clone()));
        }
        Ok(out)
    }

    fn check_marginal_args(&self, a: usize, b: usize, f: &[Prob]) -> Result<()> {
        self.check_depth(b)?;
        if a > b {
            return Err(domain(format!("marginal from depth {a} to earlier depth {b}")));
        }
        let card = self.prefixes[self.max_depth()].card();
        if f.len() != card {
            return Err(domain(format!(
                "function table has {} entries, X^≤D has {card} points",
                f.len()
            )));
        }
        Ok(())
    }

    /// The law of the trajectory up to depth `b` started from `x`, i.e. the
    /// depth-`b` marginal of the trajectory kernel at `x`.
    pub fn traj_marginal(&self, a: usize, x: &Prefix, b: usize) -> Result<Dist> {
        let i = self.prefix_at_depth(a, x)?;
        Ok(self.partial_traj(a, b)?.row(i).clone())
    }

    pub(crate) fn prefix_at_depth(&self, a: usize, x: &Prefix) -> Result<usize> {
        if x.depth() != a {
            return Err(domain(format!(
                "prefix {} has depth {}, expected {a}",
                self.prefix_label(x),
                x.depth()
            )));
        }
        self.prefix_index(x)
    }

    /// Draws the coordinates `a+1..=depth` one at a time from the step
    /// kernels. Deterministic given the state of `rng`.
    pub fn sample_trajectory<R: Rng + ?Sized>(
        &self,
        a: usize,
        x: &Prefix,
        depth: usize,
        rng: &mut R,
    ) -> Result<Prefix> {
        self.prefix_at_depth(a, x)?;
        self.check_depth(depth)?;
        if depth < a {
            return Err(domain(format!("sampling depth {depth} is below the start depth {a}")));
        }
        let mut coords = x.coords().to_vec();
        let mut index = self.prefix_index(x)?;
        for k in a..depth {
            let next = sample(self.steps[k].kernel.row(index), rng);
            coords.push(next);
            index = index * self.spaces[k + 1].card() + next;
        }
        Prefix::new(coords)
    }
}

/// Inverse-CDF draw from a distribution. Zero-weight points are never
/// returned.
fn sample<R: Rng + ?Sized>(d: &Dist, rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, w) in d.support() {
        acc += w.to_f64().unwrap_or(0.0);
        if u < acc {
            return *i;
        }
    }
    d.support().last().expect("distribution has support").0
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::super::fixtures::{coin, weather};
    use super::*;
    use crate::rational::{ratio, zero};

    #[test]
    fn restriction_branch() {
        let w = weather();
        let k = w.partial_traj(3, 1).unwrap();
        for i in 0..16 {
            let x = w.prefix_at(3, i);
            let y = w.prefix_at(1, k.row(i).support()[0].0);
            assert_eq!(k.row(i).support().len(), 1);
            assert_eq!(y.coords(), &x.coords()[..2]);
        }
        for a in 0..=3 {
            assert_eq!(
                *w.partial_traj(a, a).unwrap(),
                Kernel::identity(w.prefix_space(a).unwrap().clone())
            );
        }
    }

    #[test]
    fn two_steps_of_weather() {
        let w = weather();
        let k = w.partial_traj(0, 2).unwrap();
        let sss = w.prefix_index(&w.prefix_from_labels("S|S|S").unwrap()).unwrap();
        // 3/4 · 3/4
        assert_eq!(k.row(0).weight(sss), ratio(9, 16));
        let srs = w.prefix_index(&w.prefix_from_labels("S|R|S").unwrap()).unwrap();
        // 1/4 · 1/2
        assert_eq!(k.row(0).weight(srs), ratio(1, 8));
        // rows never leave the starting state
        assert!(k.row(0).support().iter().all(|(i, _)| *i < 4));
        assert!(w.partial_traj(0, 4).is_err());
    }

    #[test]
    fn lmarginal_examples() {
        let w = weather();
        let n = w.prefix_space(3).unwrap().card();
        let f: Vec<Prob> = (0..n).map(|i| ratio(i as i64, 7)).collect();
        for x in 0..n {
            assert_eq!(w.lmarginal_partial_traj(2, 2, &f, x).unwrap(), f[x]);
        }
        let c = vec![ratio(5, 3); n];
        for (a, b) in [(0, 0), (0, 3), (1, 2), (2, 3)] {
            assert_eq!(w.lmarginal_partial_traj(a, b, &c, 5).unwrap(), ratio(5, 3));
        }
        // indicator of x_1 = S from any x with x_0 = S
        let ind: Vec<Prob> = (0..n)
            .map(|i| if w.prefix_at(3, i).coords()[1] == 0 { ratio(1, 1) } else { zero() })
            .collect();
        let x = w.prefix_index(&w.prefix_from_labels("S|R|R|S").unwrap()).unwrap();
        assert_eq!(w.lmarginal_partial_traj(0, 1, &ind, x).unwrap(), ratio(3, 4));
        assert!(w.lmarginal_partial_traj(2, 1, &ind, x).is_err());
        assert!(w.lmarginal_partial_traj(0, 1, &ind[1..], x).is_err());
    }

    #[test]
    fn table_matches_pointwise() {
        let w = weather();
        let n = w.prefix_space(3).unwrap().card();
        let f: Vec<Prob> = (0..n).map(|i| ratio((i * i % 11) as i64, 3)).collect();
        for a in 0..=3 {
            for b in a..=3 {
                let table = w.lmarginal_table(a, b, &f).unwrap();
                for x in 0..n {
                    assert_eq!(table[x], w.lmarginal_partial_traj(a, b, &f, x).unwrap());
                }
            }
        }
    }

    #[test]
    fn traj_marginal_examples() {
        let w = weather();
        let s = w.prefix_from_labels("S").unwrap();
        assert_eq!(
            w.traj_marginal(0, &s, 0).unwrap(),
            Dist::dirac(w.prefix_space(0).unwrap().clone(), 0).unwrap()
        );
        let d = w.traj_marginal(0, &s, 2).unwrap();
        assert_eq!(d.weight(0), ratio(9, 16));

        let c = coin(4);
        let x = c.prefix_from_labels("T|H").unwrap();
        let d = c.traj_marginal(1, &x, 4).unwrap();
        assert_eq!(d.support().len(), 8);
        for (i, p) in d.support() {
            assert_eq!(*p, ratio(1, 8));
            assert_eq!(&c.prefix_at(4, *i).coords()[..2], x.coords());
        }
        assert!(w.traj_marginal(1, &s, 2).is_err());
    }

    #[test]
    fn sampling_is_reproducible() {
        let c = coin(3);
        let x = c.prefix_from_labels("H").unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            assert_eq!(
                c.sample_trajectory(0, &x, 3, &mut r1).unwrap(),
                c.sample_trajectory(0, &x, 3, &mut r2).unwrap()
            );
        }
        assert_eq!(c.sample_trajectory(0, &x, 0, &mut r1).unwrap(), x);
        assert!(c.sample_trajectory(0, &x, 4, &mut r1).is_err());
    }

    #[test]
    fn dirac_steps_give_one_trajectory() {
        use crate::space::Space;
        use crate::trajectory::StepSpec;
        let spaces: Vec<_> = (0..4)
            .map(|n| Space::finite(format!("X{n}"), ["a", "b", "c"]).unwrap())
            .collect();
        let steps = (0..3)
            .map(|n| StepSpec::Const(Dist::dirac(spaces[n + 1].clone(), (n + 1) % 3).unwrap()))
            .collect();
        let m = ChainModel::new(spaces, steps).unwrap();
        let x = m.prefix_from_labels("c").unwrap();
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let y = m.sample_trajectory(0, &x, 3, &mut rng).unwrap();
            assert_eq!(m.prefix_label(&y), "c|b|c|a");
        }
    }
}
