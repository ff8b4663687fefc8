//! Enumerated finite spaces.
//!
//! Every space has a fixed enumeration `0..card`. Tuple spaces enumerate
//! lexicographically with the leftmost coordinate most significant, so the
//! index of `(i_0, .., i_k)` is the mixed-radix number with digits `i_j`.
//! Pair spaces are a separate kind: `X × Y` and the two-component tuple
//! `(X, Y)` share a layout but are different spaces, and re-associating
//! products is always an explicit reindexing.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Result};

pub type SpaceRef = Arc<Space>;

/// A named finite space with distinct state labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    id: String,
    states: Vec<String>,
}

impl FiniteSpace {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s == label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Finite(FiniteSpace),
    /// Ordered product; the empty tuple is the one-point space.
    Tuple(Vec<SpaceRef>),
    Pair(SpaceRef, SpaceRef),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Space {
    card: usize,
    kind: SpaceKind,
}

impl Space {
    pub fn finite<S: Into<String>>(
        id: impl Into<String>,
        states: impl IntoIterator<Item = S>,
    ) -> Result<SpaceRef> {
        let id = id.into();
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if states.is_empty() {
            return Err(domain(format!("space {id:?} has no states")));
        }
        let mut seen = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if let Some(j) = seen.insert(s.as_str(), i) {
                return Err(domain(format!(
                    "space {id:?} repeats state {s:?} at positions {j} and {i}"
                )));
            }
        }
        Ok(Arc::new(Space {
            card: states.len(),
            kind: SpaceKind::Finite(FiniteSpace { id, states }),
        }))
    }

    pub fn tuple(components: Vec<SpaceRef>) -> SpaceRef {
        let card = components.iter().map(|c| c.card).product();
        Arc::new(Space {
            card,
            kind: SpaceKind::Tuple(components),
        })
    }

    /// The one-point space, i.e. the empty product.
    pub fn unit() -> SpaceRef {
        Space::tuple(Vec::new())
    }

    pub fn pair(left: SpaceRef, right: SpaceRef) -> SpaceRef {
        Arc::new(Space {
            card: left.card * right.card,
            kind: SpaceKind::Pair(left, right),
        })
    }

    pub fn card(&self) -> usize {
        self.card
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn as_finite(&self) -> Option<&FiniteSpace> {
        match &self.kind {
            SpaceKind::Finite(f) => Some(f),
            _ => None,
        }
    }

    pub fn pair_components(&self) -> Option<(&SpaceRef, &SpaceRef)> {
        match &self.kind {
            SpaceKind::Pair(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn tuple_components(&self) -> Option<&[SpaceRef]> {
        match &self.kind {
            SpaceKind::Tuple(c) => Some(c),
            _ => None,
        }
    }

    /// Index of the pair `(left, right)` in a pair space.
    pub fn pair_index(&self, left: usize, right: usize) -> usize {
        let (_, r) = self.pair_components().expect("not a pair space");
        left * r.card + right
    }

    pub fn pair_split(&self, idx: usize) -> (usize, usize) {
        let (_, r) = self.pair_components().expect("not a pair space");
        (idx / r.card, idx % r.card)
    }

    /// Coordinates of a tuple point.
    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        let comps = self.tuple_components().expect("not a tuple space");
        let mut coords = vec![0; comps.len()];
        for (slot, c) in coords.iter_mut().zip(comps).rev() {
            *slot = idx % c.card;
            idx /= c.card;
        }
        coords
    }

    pub fn encode(&self, coords: &[usize]) -> Result<usize> {
        let comps = self.tuple_components().expect("not a tuple space");
        if coords.len() != comps.len() {
            return Err(domain(format!(
                "expected {} coordinates, got {}",
                comps.len(),
                coords.len()
            )));
        }
        coords.iter().zip(comps).try_fold(0, |acc, (&i, c)| {
            if i >= c.card {
                Err(domain(format!("coordinate {i} out of range 0..{}", c.card)))
            } else {
                Ok(acc * c.card + i)
            }
        })
    }

    pub fn label(&self, idx: usize) -> String {
        match &self.kind {
            SpaceKind::Finite(f) => f.states[idx].clone(),
            SpaceKind::Tuple(comps) if comps.is_empty() => "()".to_string(),
            SpaceKind::Tuple(comps) => self
                .decode(idx)
                .iter()
                .zip(comps)
                .map(|(&i, c)| c.label(i))
                .collect::<Vec<_>>()
                .join("|"),
            SpaceKind::Pair(l, r) => {
                let (i, j) = self.pair_split(idx);
                format!("({}, {})", l.label(i), r.label(j))
            }
        }
    }

    /// Inverse of [`Space::label`] for finite spaces and tuples of finite
    /// spaces.
    pub fn index_of(&self, label: &str) -> Result<usize> {
        match &self.kind {
            SpaceKind::Finite(f) => f
                .index_of(label)
                .ok_or_else(|| domain(format!("{label:?} is not a state of {:?}", f.id))),
            SpaceKind::Tuple(comps) if comps.is_empty() => match label {
                "()" | "" => Ok(0),
                _ => Err(domain(format!("{label:?} is not the unit point"))),
            },
            SpaceKind::Tuple(comps) => {
                let parts: Vec<&str> = label.split('|').collect();
                if parts.len() != comps.len() {
                    return Err(domain(format!(
                        "{label:?} does not have {} coordinates",
                        comps.len()
                    )));
                }
                let coords = parts
                    .iter()
                    .zip(comps)
                    .map(|(p, c)| c.index_of(p))
                    .collect::<Result<Vec<_>>>()?;
                self.encode(&coords)
            }
            SpaceKind::Pair(..) => Err(domain("pair points are addressed by index")),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SpaceKind::Finite(s) => write!(f, "{}", s.id),
            SpaceKind::Tuple(comps) if comps.is_empty() => write!(f, "()"),
            SpaceKind::Tuple(comps) => {
                let parts: Vec<String> = comps.iter().map(|c| c.to_string()).collect();
                write!(f, "({})", parts.join(" × "))
            }
            SpaceKind::Pair(l, r) => write!(f, "[{l}] ⨯ [{r}]"),
        }
    }
}

pub(crate) fn check_same(what: &str, expected: &SpaceRef, got: &SpaceRef) -> Result<()> {
    if Arc::ptr_eq(expected, got) || expected == got {
        Ok(())
    } else {
        Err(domain(format!("{what}: expected space {expected}, got {got}")))
    }
}
