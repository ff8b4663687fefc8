//! Acceptance suite. Runs as a plain binary (`harness = false`) and prints
//! one `CRITERION` line per criterion; exits nonzero if any fails.

mod common;

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use markov_traj::model_file;
use markov_traj::random::{
    random_chain_model, random_cylinder, random_disjoint_family, random_function,
    random_nested_family, random_product_model, ModelShape,
};
use markov_traj::rational::{ratio, zero};
use markov_traj::report::Check;
use markov_traj::{ChainModel, Dist, Prefix, ProductModel, Space};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Name, runner and time budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn shape() -> ModelShape {
    ModelShape { min_states: 2, max_states: 3, min_depth: 1, max_depth: 5, weight_range: 6 }
}

fn models(seed: u64, count: usize) -> Vec<ChainModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_chain_model(&mut rng, &shape())).collect()
}

fn random_start(rng: &mut ChaCha8Rng, model: &ChainModel, a: usize) -> Prefix {
    let card = model.prefix_space(a).unwrap().card();
    model.prefix_at(a, rng.gen_range(0..card))
}

/// Tallies checks and keeps the first failure for the report line.
#[derive(Default)]
struct Tally {
    run: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn push(&mut self, check: markov_traj::Result<Check>) {
        self.run += 1;
        match check {
            Ok(c) if c.pass => {}
            Ok(c) => self.fail(format!("{} {} != {}", c.id, c.lhs, c.rhs)),
            Err(e) => self.fail(e.to_string()),
        }
    }

    fn assert(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.run += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.first_failure.get_or_insert(msg);
    }

    fn finish(self, what: &str) -> Outcome {
        match self.first_failure {
            None => Ok(format!("{} {what}", self.run)),
            Some(f) => Err(f),
        }
    }
}

fn chapman_kolmogorov() -> Outcome {
    let mut t = Tally::default();
    for model in models(1, 100) {
        let top = model.max_depth();
        for a in 0..=top {
            for b in a..=top {
                for c in b..=top {
                    t.push(model.check_eta_comp(a, b, c));
                }
            }
        }
        let oracle = common::partial_traj(&model, 0, top);
        let kernel = model.partial_traj(0, top).unwrap();
        t.assert(
            oracle.iter().enumerate().all(|(x, row)| kernel.row(x).weights() == *row),
            || "partial_traj(0, D) differs from path enumeration".into(),
        );
    }
    t.finish("exact checks on 100 models")
}

fn projectivity() -> Outcome {
    let mut t = Tally::default();
    for model in models(1, 100) {
        let top = model.max_depth();
        for a in 0..=top {
            for c in 0..=top {
                for b in 0..=c {
                    t.push(model.check_eta_proj(a, b, c));
                }
            }
        }
    }
    t.finish("exact checks on 100 models")
}

fn lmarginal_semigroup() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut t = Tally::default();
    for model in models(3, 50) {
        let top = model.max_depth();
        for k in 0..20 {
            let f = random_function(&mut rng, &model);
            for a in 0..=top {
                for b in a..=top {
                    for c in b..=top {
                        t.push(model.check_lmarginal_semigroup(a, b, c, &f, &format!("f{k}")));
                    }
                }
            }
        }
    }
    t.finish("pointwise checks, 50 models x 20 functions")
}

fn content_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pool = models(4, 50);
    let mut t = Tally::default();
    for i in 0..500 {
        let model = &pool[i % pool.len()];
        let top = model.max_depth();
        let a = rng.gen_range(0..=top);
        let x = random_start(&mut rng, model, a);
        let groups = rng.gen_range(2..=4);
        let family = random_disjoint_family(&mut rng, model, groups);
        t.push(model.check_content_additivity(a, &x, &family));
        for c in &family {
            for m in c.depth()..=top {
                t.push(model.check_content_lift(a, &x, c, m));
            }
        }
        let n = rng.gen_range(0..=top);
        let cyl = random_cylinder(&mut rng, model, n);
        t.assert(
            model.cylinder_content(a, &x, &cyl).unwrap() == common::content(model, x.coords(), &cyl),
            || format!("content of family {i} differs from path enumeration"),
        );
    }
    t.finish("checks on 500 disjoint families")
}

fn witness_extraction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pool = models(5, 40);
    let mut t = Tally::default();
    let mut families = 0;
    while families < 200 {
        let model = &pool[families % pool.len()];
        let a = rng.gen_range(0..=model.max_depth());
        let x = random_start(&mut rng, model, a);
        let len = rng.gen_range(1..=6);
        let family = random_nested_family(&mut rng, model, len);
        let min = family
            .iter()
            .map(|c| model.cylinder_content(a, &x, c).unwrap())
            .min()
            .unwrap();
        if min == zero() {
            continue;
        }
        families += 1;
        let eps = min / ratio(2, 1);
        match model.extract_witness(a, &x, &family, &eps) {
            Ok(w) => {
                let inside = w.coords()[..=a] == *x.coords()
                    && family.iter().all(|c| {
                        let head = Prefix::new(w.coords()[..=c.depth()].to_vec()).unwrap();
                        c.base().contains(&model.prefix_index(&head).unwrap())
                    });
                t.assert(inside, || format!("witness of family {families} misses a cylinder"));
            }
            Err(e) => t.fail(format!("family {families}: {e}")),
        }
        t.assert(common::intersection_meets(model, x.coords(), &family), || {
            format!("family {families}: brute-force intersection is empty")
        });
    }
    t.finish("checks on 200 nested families")
}

fn conditional_expectation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut t = Tally::default();
    for model in models(6, 50) {
        let top = model.max_depth();
        for a in 0..=top {
            let u = random_start(&mut rng, &model, a);
            let f = random_function(&mut rng, &model);
            for b in a..=top {
                t.push(model.check_cond_exp(a, &u, b, &f));
                t.push(model.check_comp_prod_traj(a, b, &u));
            }
        }
        let f = random_function(&mut rng, &model);
        let u = model.prefix_at(0, 0);
        for b in 0..=top {
            t.assert(model.cond_exp(0, &u, b, &f).unwrap() == common::cond_exp(&model, b, &f), || {
                format!("cond_exp at b={b} differs from direct sums")
            });
        }
    }
    t.finish("exact checks on 50 models")
}

fn product_specialization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut t = Tally::default();
    for _ in 0..50 {
        let pm = random_product_model(&mut rng, &shape());
        let top = pm.max_depth();
        for b in 0..=top {
            t.push(pm.check_prefix_law(b));
            for shallow in 0..=b {
                t.push(pm.check_projection(shallow, b));
            }
        }
        for a in 0..=top {
            for b in a..=top {
                t.push(pm.check_partial_traj_const(a, b));
                for c in b..=top {
                    t.push(pm.check_product_assoc(a, b, c));
                }
            }
        }
    }
    t.finish("exact checks on 50 factor lists")
}

fn manifest(rel: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), rel].iter().collect();
    p.to_string_lossy().into_owned()
}

fn sampler() -> Outcome {
    const SAMPLES: usize = 100_000;
    let tol = 0.01;
    let mut rng = ChaCha8Rng::seed_from_u64(0);

    let coin = ProductModel::new(
        (0..=10)
            .map(|n| Dist::uniform(Space::finite(format!("C{n}"), ["H", "T"]).unwrap()))
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    let chain = coin.chain();
    let start = chain.prefix_from_labels("H").unwrap();
    let mut heads = [0usize; 11];
    for _ in 0..SAMPLES {
        let y = chain.sample_trajectory(0, &start, 10, &mut rng).unwrap();
        for (i, &s) in y.coords().iter().enumerate() {
            heads[i] += (s == 0) as usize;
        }
    }
    let worst = (1..=10)
        .map(|i| (heads[i] as f64 / SAMPLES as f64 - 0.5).abs())
        .fold(0.0, f64::max);
    if worst > tol {
        return Err(format!("coin: max |freq(x_i=H) - 1/2| = {worst:.4}"));
    }

    let weather = model_file::load(manifest("models/weather.json")).map_err(|e| e.to_string())?;
    let weather = weather.chain();
    let cyl = weather.cylinder_from_patterns("*|S|S").unwrap();
    let exact = weather
        .cylinder_content(0, &weather.prefix_from_labels("S").unwrap(), &cyl)
        .unwrap();
    if exact != ratio(9, 16) {
        return Err(format!("weather: exact content {exact} != 9/16"));
    }
    let start = weather.prefix_from_labels("S").unwrap();
    let mut hits = 0usize;
    for _ in 0..SAMPLES {
        let y = weather.sample_trajectory(0, &start, 2, &mut rng).unwrap();
        hits += (y.coords()[1] == 0 && y.coords()[2] == 0) as usize;
    }
    let freq = hits as f64 / SAMPLES as f64;
    if (freq - 9.0 / 16.0).abs() > tol {
        return Err(format!("weather: freq {freq:.4} vs 9/16"));
    }
    Ok(format!("coin max dev {worst:.4}, weather freq {freq:.4} vs 0.5625"))
}

fn cli_golden() -> Outcome {
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_markov-traj"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())
    };
    for m in ["weather.json", "coin.json", "urn.json", "mixed-product.json"] {
        let o = run(&["verify", "--model", &manifest(&format!("models/{m}"))])?;
        if o.status.code() != Some(0) {
            return Err(format!("verify {m} exited {:?}", o.status.code()));
        }
    }
    let o = run(&["validate", "--model", &manifest("tests/data/bad-row.json")])?;
    if o.status.code() != Some(2) {
        return Err(format!("corrupted model exited {:?}", o.status.code()));
    }
    let o = run(&[
        "witness", "--model", &manifest("models/weather.json"), "--point", "S", "--cyl", "S|S|S",
        "--eps", "3/4",
    ])?;
    if o.status.code() != Some(3) {
        return Err(format!("witness above content exited {:?}", o.status.code()));
    }
    Ok("verify 0 on 4 models, corrupted 2, witness 3".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Chapman-Kolmogorov", chapman_kolmogorov, 30),
        ("projectivity", projectivity, 30),
        ("lmarginal semigroup", lmarginal_semigroup, 30),
        ("content laws", content_laws, 10),
        ("witness extraction", witness_extraction, 30),
        ("conditional expectation", conditional_expectation, 60),
        ("product specialization", product_specialization, 30),
        ("sampler", sampler, 60),
        ("CLI golden runs", cli_golden, 60),
    ];
    let mut failed = 0;
    for (n, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        let (pass, msg) = match outcome {
            Ok(m) if !over => (true, m),
            Ok(m) => (false, format!("{m}; over the {budget}s budget")),
            Err(e) => (false, e),
        };
        failed += !pass as usize;
        println!(
            "CRITERION {} {} {name} ({:.2}s): {msg}",
            n + 1,
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    println!("ACCEPTANCE {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

