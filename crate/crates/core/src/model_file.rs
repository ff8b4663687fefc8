//! The JSON model file.
//!
//! ```json
//! {"maxDepth": 2,
//!  "spaces": [{"id": "X0", "states": ["S", "R"]}, ...],
//!  "steps": [{"n": 0, "kind": "last-state",
//!             "rows": {"S": {"S": "3/4", "R": "1/4"}, "R": {"S": "1/2", "R": "1/2"}}}, ...]}
//! ```
//!
//! Row keys are prefixes (`"S|R"`) for `table` steps, states of `X_n` for
//! `last-state` steps and the single key `"*"` for `const` steps. States
//! missing from a row have weight zero. A product model is written
//! `{"kind": "product", "factors": [{"H": "1/2", "T": "1/2"}, ...]}`, with
//! an optional `"spaces"` list; without it the states of each space are the
//! keys of its factor in order.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::measure::Dist;
use crate::product::ProductModel;
use crate::rational::{self, Prob};
use crate::space::{Space, SpaceRef};
use crate::trajectory::{ChainModel, StepSpec};

#[derive(Debug, Clone)]
pub enum Model {
    Chain(ChainModel),
    Product(ProductModel),
}

impl Model {
    pub fn chain(&self) -> &ChainModel {
        match self {
            Model::Chain(c) => c,
            Model::Product(p) => p.chain(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    id: String,
    states: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct ChainFile {
    max_depth: usize,
    spaces: Vec<SpaceFile>,
    steps: Vec<StepFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StepFile {
    n: usize,
    kind: String,
    rows: BTreeMap<String, Map<String, Value>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct ProductFile {
    #[allow(dead_code)]
    kind: String,
    #[serde(default)]
    max_depth: Option<usize>,
    #[serde(default)]
    spaces: Option<Vec<SpaceFile>>,
    factors: Vec<Map<String, Value>>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Model(msg.into())
}

pub fn load(path: impl AsRef<Path>) -> Result<Model> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| malformed(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Model> {
    let value: Value = serde_json::from_str(text).map_err(|e| malformed(format!("invalid JSON: {e}")))?;
    if value.get("kind").and_then(Value::as_str) == Some("product") {
        let file: ProductFile = serde_json::from_value(value).map_err(|e| malformed(e.to_string()))?;
        build_product(file).map(Model::Product)
    } else {
        let file: ChainFile = serde_json::from_value(value).map_err(|e| malformed(e.to_string()))?;
        build_chain(file).map(Model::Chain)
    }
}

fn build_spaces(files: Vec<SpaceFile>) -> Result<Vec<SpaceRef>> {
    files
        .into_iter()
        .map(|s| Space::finite(s.id, s.states).map_err(|e| malformed(e.to_string())))
        .collect()
}

fn weight(value: &Value, at: &str) -> Result<Prob> {
    let text = match value {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        other => return Err(malformed(format!("{at}: weight {other} is not \"p/q\""))),
    };
    rational::parse_prob(&text).map_err(|e| malformed(format!("{at}: {e}")))
}

fn build_row(space: &SpaceRef, row: &Map<String, Value>, at: &str) -> Result<Dist> {
    let mut entries = Vec::with_capacity(row.len());
    for (label, value) in row {
        let i = space
            .index_of(label)
            .map_err(|_| malformed(format!("{at}: {label:?} is not a state of {space}")))?;
        entries.push((i, weight(value, &format!("{at}, state {label:?}"))?));
    }
    Dist::from_entries(space.clone(), entries).map_err(|e| match e {
        Error::Domain(msg) => malformed(format!("{at}: {msg}")),
        other => other,
    })
}

fn build_chain(file: ChainFile) -> Result<ChainModel> {
    let spaces = build_spaces(file.spaces)?;
    if spaces.len() != file.max_depth + 1 {
        return Err(malformed(format!(
            "maxDepth {} needs {} spaces, got {}",
            file.max_depth,
            file.max_depth + 1,
            spaces.len()
        )));
    }
    let mut by_n: BTreeMap<usize, StepFile> = BTreeMap::new();
    for step in file.steps {
        if step.n >= file.max_depth {
            return Err(malformed(format!(
                "step {} is beyond maxDepth {}",
                step.n, file.max_depth
            )));
        }
        if by_n.contains_key(&step.n) {
            return Err(malformed(format!("step {} is given twice", step.n)));
        }
        by_n.insert(step.n, step);
    }
    let mut steps = Vec::with_capacity(file.max_depth);
    for n in 0..file.max_depth {
        let step = by_n
            .remove(&n)
            .ok_or_else(|| malformed(format!("step {n} is missing")))?;
        steps.push(build_step(&spaces, step)?);
    }
    ChainModel::new(spaces, steps).map_err(|e| malformed(e.to_string()))
}

fn build_step(spaces: &[SpaceRef], step: StepFile) -> Result<StepSpec> {
    let n = step.n;
    let target = &spaces[n + 1];
    let keyed_by = |source: SpaceRef| -> Result<Kernel> {
        let mut rows: Vec<Option<Dist>> = vec![None; source.card()];
        for (key, row) in &step.rows {
            let at = format!("step {n} row {key:?}");
            let i = source
                .index_of(key)
                .map_err(|_| malformed(format!("{at}: not a point of {source}")))?;
            rows[i] = Some(build_row(target, row, &at)?);
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| malformed(format!("step {n}: no row for {:?}", source.label(i))))
            })
            .collect::<Result<Vec<_>>>()?;
        Kernel::new(source, target.clone(), rows)
    };
    match step.kind.as_str() {
        "table" => Ok(StepSpec::Table(keyed_by(Space::tuple(spaces[..=n].to_vec()))?)),
        "last-state" => Ok(StepSpec::LastState(keyed_by(spaces[n].clone())?)),
        "const" => {
            let row = match (step.rows.len(), step.rows.get("*")) {
                (1, Some(row)) => row,
                _ => return Err(malformed(format!("step {n}: a const step has the single row \"*\""))),
            };
            Ok(StepSpec::Const(build_row(target, row, &format!("step {n} row \"*\""))?))
        }
        other => Err(malformed(format!(
            "step {n}: unknown kind {other:?} (expected table, last-state or const)"
        ))),
    }
}

fn build_product(file: ProductFile) -> Result<ProductModel> {
    if file.factors.len() < 2 {
        return Err(malformed("a product model needs at least two factors"));
    }
    if let Some(d) = file.max_depth {
        if d + 1 != file.factors.len() {
            return Err(malformed(format!(
                "maxDepth {d} does not match {} factors",
                file.factors.len()
            )));
        }
    }
    let spaces = match file.spaces {
        Some(s) => build_spaces(s)?,
        None => file
            .factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                Space::finite(format!("X{i}"), f.keys().cloned()).map_err(|e| malformed(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    if spaces.len() != file.factors.len() {
        return Err(malformed(format!(
            "{} spaces for {} factors",
            spaces.len(),
            file.factors.len()
        )));
    }
    let factors = file
        .factors
        .iter()
        .zip(&spaces)
        .enumerate()
        .map(|(i, (f, s))| build_row(s, f, &format!("factor {i}")))
        .collect::<Result<Vec<_>>>()?;
    ProductModel::new(factors).map_err(|e| malformed(e.to_string()))
}

fn row_json(d: &Dist) -> Value {
    let space = d.space();
    let mut row = Map::new();
    for (i, w) in d.support() {
        row.insert(space.label(*i), Value::String(rational::format(w)));
    }
    Value::Object(row)
}

/// Writes a chain model with every step as a full `table`.
pub fn to_json(model: &ChainModel) -> String {
    let spaces: Vec<Value> = model
        .spaces()
        .iter()
        .map(|s| {
            let f = s.as_finite().expect("chain spaces are finite");
            json!({"id": f.id(), "states": f.states()})
        })
        .collect();
    let steps: Vec<Value> = (0..model.max_depth())
        .map(|n| {
            let kernel = model.step(n).kernel();
            let mut rows = Map::new();
            for (i, row) in kernel.rows().iter().enumerate() {
                rows.insert(kernel.source().label(i), row_json(row));
            }
            json!({"n": n, "kind": "table", "rows": rows})
        })
        .collect();
    let doc = json!({"maxDepth": model.max_depth(), "spaces": spaces, "steps": steps});
    serde_json::to_string_pretty(&doc).expect("serializable")
}
