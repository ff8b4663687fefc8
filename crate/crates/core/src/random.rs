//! Seeded generators for random models, functions and cylinder families.
//!
//! Used by the verification suite and by the property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::measure::Dist;
use crate::product::ProductModel;
use crate::rational::{ratio, Prob};
use crate::space::{Space, SpaceRef};
use crate::trajectory::{ChainModel, Cylinder, StepSpec};

/// Shape of generated chain models.
#[derive(Debug, Clone, Copy)]
pub struct ModelShape {
    pub min_states: usize,
    pub max_states: usize,
    pub min_depth: usize,
    pub max_depth: usize,
    /// Weights are drawn as integers in `0..=weight_range` before
    /// normalization.
    pub weight_range: u32,
}

impl Default for ModelShape {
    fn default() -> Self {
        ModelShape {
            min_states: 2,
            max_states: 3,
            min_depth: 1,
            max_depth: 5,
            weight_range: 6,
        }
    }
}

/// A distribution with small random integer weights, normalized. Some
/// points may get weight zero.
pub fn random_dist<R: Rng + ?Sized>(rng: &mut R, space: &SpaceRef, weight_range: u32) -> Dist {
    loop {
        let raw: Vec<u32> = (0..space.card())
            .map(|_| rng.gen_range(0..=weight_range))
            .collect();
        let total: u32 = raw.iter().sum();
        if total == 0 {
            continue;
        }
        let weights = raw.iter().map(|&w| ratio(w as i64, total as i64)).collect();
        return Dist::new(space.clone(), weights).expect("normalized by construction");
    }
}

pub fn random_spaces<R: Rng + ?Sized>(rng: &mut R, shape: &ModelShape) -> Vec<SpaceRef> {
    const LABELS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
    let depth = rng.gen_range(shape.min_depth..=shape.max_depth);
    (0..=depth)
        .map(|n| {
            let k = rng.gen_range(shape.min_states..=shape.max_states);
            Space::finite(format!("X{n}"), LABELS[..k].iter().copied()).expect("distinct labels")
        })
        .collect()
}

/// A chain model whose step kernels are full random prefix tables.
pub fn random_chain_model<R: Rng + ?Sized>(rng: &mut R, shape: &ModelShape) -> ChainModel {
    let spaces = random_spaces(rng, shape);
    let steps = (0..spaces.len() - 1)
        .map(|n| {
            let prefix = Space::tuple(spaces[..=n].to_vec());
            let rows = (0..prefix.card())
                .map(|_| random_dist(rng, &spaces[n + 1], shape.weight_range))
                .collect();
            let kernel = crate::kernel::Kernel::new(prefix, spaces[n + 1].clone(), rows)
                .expect("rows match the target");
            StepSpec::Table(kernel)
        })
        .collect();
    ChainModel::new(spaces, steps).expect("well-formed by construction")
}

pub fn random_product_model<R: Rng + ?Sized>(rng: &mut R, shape: &ModelShape) -> ProductModel {
    let spaces = random_spaces(rng, shape);
    let factors = spaces
        .iter()
        .map(|s| random_dist(rng, s, shape.weight_range))
        .collect();
    ProductModel::new(factors).expect("at least two factors")
}

/// A nonnegative rational function table over `X^{≤D}`.
pub fn random_function<R: Rng + ?Sized>(rng: &mut R, model: &ChainModel) -> Vec<Prob> {
    let n = model
        .prefix_space(model.max_depth())
        .expect("top depth")
        .card();
    (0..n)
        .map(|_| {
            let q = rng.gen_range(1..=6);
            ratio(rng.gen_range(0..=2 * q), q)
        })
        .collect()
}

/// A cylinder of the given depth whose base contains each prefix with
/// probability 1/2.
pub fn random_cylinder<R: Rng + ?Sized>(rng: &mut R, model: &ChainModel, depth: usize) -> Cylinder {
    let card = model.prefix_space(depth).expect("depth in range").card();
    let base: Vec<usize> = (0..card).filter(|_| rng.gen_bool(0.5)).collect();
    model.cylinder(depth, base).expect("indices in range")
}

/// Pairwise disjoint cylinders of random depths: prefixes of the deepest
/// level are dealt into groups (some discarded), and each group is then
/// described at the shallowest depth where it is still exact.
pub fn random_disjoint_family<R: Rng + ?Sized>(
    rng: &mut R,
    model: &ChainModel,
    groups: usize,
) -> Vec<Cylinder> {
    let depth = rng.gen_range(0..=model.max_depth());
    let card = model.prefix_space(depth).expect("depth in range").card();
    let mut buckets = vec![Vec::new(); groups + 1];
    for i in 0..card {
        buckets[rng.gen_range(0..=groups)].push(i);
    }
    buckets.pop();
    buckets
        .into_iter()
        .map(|b| {
            let c = model.cylinder(depth, b).expect("indices in range");
            shallowest(model, &c)
        })
        .collect()
}

/// The same cylinder at the smallest depth that describes it exactly.
pub fn shallowest(model: &ChainModel, cyl: &Cylinder) -> Cylinder {
    for n in 0..cyl.depth() {
        let restrict = model.restrict_prefix(n, cyl.depth());
        let candidate = model
            .cylinder(n, cyl.base().iter().map(|&i| restrict(i)))
            .expect("indices in range");
        if model.cylinder_eq(&candidate, cyl).expect("depths in range") {
            return candidate;
        }
    }
    cyl.clone()
}

/// A non-increasing family obtained by repeatedly deepening and shrinking a
/// starting cylinder. Shrinking removes some base points but always keeps
/// at least one.
pub fn random_nested_family<R: Rng + ?Sized>(
    rng: &mut R,
    model: &ChainModel,
    len: usize,
) -> Vec<Cylinder> {
    let mut depth = rng.gen_range(0..=model.max_depth());
    let mut current = random_cylinder(rng, model, depth);
    if current.is_empty() {
        current = model.cylinder(depth, [0]).expect("index 0 exists");
    }
    let mut family = vec![current.clone()];
    for _ in 1..len {
        if depth < model.max_depth() && rng.gen_bool(0.5) {
            depth = rng.gen_range(depth..=model.max_depth());
            current = model.lift_cylinder(&current, depth).expect("deeper");
        }
        let mut base: Vec<usize> = current.base().iter().copied().collect();
        base.shuffle(rng);
        let keep = rng.gen_range(1..=base.len());
        base.truncate(keep);
        current = model.cylinder(depth, base).expect("indices in range");
        family.push(current.clone());
    }
    family
}
