//! Brute-force oracles. They enumerate trajectories coordinate by
//! coordinate and multiply step weights, without going through the
//! partial-trajectory recursion or the kernel algebra.

#![allow(dead_code)]

use markov_traj::rational::{one, zero};
use markov_traj::{ChainModel, Cylinder, Prefix, Prob};

/// All coordinate tuples of `X_0 × .. × X_b`, in lexicographic order.
pub fn tuples(model: &ChainModel, b: usize) -> Vec<Vec<usize>> {
    let sizes: Vec<usize> = (0..=b).map(|k| model.space(k).card()).collect();
    let mut out = Vec::new();
    let mut cur = vec![0; b + 1];
    loop {
        out.push(cur.clone());
        let mut k = b as isize;
        while k >= 0 {
            let i = k as usize;
            cur[i] += 1;
            if cur[i] < sizes[i] {
                break;
            }
            cur[i] = 0;
            k -= 1;
        }
        if k < 0 {
            return out;
        }
    }
}

/// `κ_k(y_0..y_k)({y_{k+1}})` read straight from the step table.
pub fn step_weight(model: &ChainModel, y: &[usize], k: usize) -> Prob {
    let p = Prefix::new(y[..=k].to_vec()).unwrap();
    let row = model.prefix_index(&p).unwrap();
    model.step(k).kernel().row(row).weight(y[k + 1])
}

/// Probability of reaching `y ∈ X^{≤b}` from `x ∈ X^{≤a}`.
pub fn path_weight(model: &ChainModel, x: &[usize], y: &[usize]) -> Prob {
    let a = x.len() - 1;
    let b = y.len() - 1;
    if b <= a {
        return if x[..=b] == *y { one() } else { zero() };
    }
    if y[..=a] != *x {
        return zero();
    }
    (a..b).map(|k| step_weight(model, y, k)).product()
}

/// Dense table of `η_{a,b}`, rows and columns in enumeration order.
pub fn partial_traj(model: &ChainModel, a: usize, b: usize) -> Vec<Vec<Prob>> {
    let ys = tuples(model, b);
    tuples(model, a)
        .iter()
        .map(|x| ys.iter().map(|y| path_weight(model, x, y)).collect())
        .collect()
}

/// Content of a cylinder by summing path weights over its base.
pub fn content(model: &ChainModel, x: &[usize], cyl: &Cylinder) -> Prob {
    let ys = tuples(model, cyl.depth());
    cyl.base().iter().map(|&i| path_weight(model, x, &ys[i])).sum()
}

/// `E[f | F_b](p)` as a direct sum over full trajectories extending `p`.
pub fn cond_exp(model: &ChainModel, b: usize, f: &[Prob]) -> Vec<Prob> {
    let top = model.max_depth();
    let ys = tuples(model, top);
    tuples(model, b)
        .iter()
        .map(|p| {
            ys.iter()
                .enumerate()
                .map(|(i, y)| &f[i] * path_weight(model, p, y))
                .sum()
        })
        .collect()
}

/// Whether some depth-`N` prefix extending `x` lies in every cylinder.
pub fn intersection_meets(model: &ChainModel, x: &[usize], family: &[Cylinder]) -> bool {
    let depth = family
        .iter()
        .map(|c| c.depth())
        .max()
        .unwrap_or(0)
        .max(x.len() - 1);
    tuples(model, depth).iter().any(|z| {
        z[..x.len()] == *x
            && family.iter().all(|c| {
                let head = Prefix::new(z[..=c.depth()].to_vec()).unwrap();
                c.base().contains(&model.prefix_index(&head).unwrap())
            })
    })
}
