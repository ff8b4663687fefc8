//! Verification results.

use std::fmt;

use sha2::{Digest, Sha256};

use crate::kernel::Kernel;
use crate::measure::Dist;
use crate::rational::{self, Prob};

/// One verified identity: `CHECK <id> PASS|FAIL <lhs> <rhs>`.
///
/// Scalar identities carry the two rationals; table identities carry a
/// short digest of each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
    /// Extra lines printed under a failing check.
    pub detail: Vec<String>,
}

impl Check {
    pub fn values(id: impl Into<String>, lhs: &Prob, rhs: &Prob) -> Check {
        Check {
            id: id.into(),
            pass: lhs == rhs,
            lhs: rational::format(lhs),
            rhs: rational::format(rhs),
            detail: Vec::new(),
        }
    }

    pub fn kernels(id: impl Into<String>, lhs: &Kernel, rhs: &Kernel) -> Check {
        Check {
            id: id.into(),
            pass: lhs == rhs,
            lhs: kernel_digest(lhs),
            rhs: kernel_digest(rhs),
            detail: Vec::new(),
        }
    }

    pub fn dists(id: impl Into<String>, lhs: &Dist, rhs: &Dist) -> Check {
        Check {
            id: id.into(),
            pass: lhs == rhs,
            lhs: dist_digest(lhs),
            rhs: dist_digest(rhs),
            detail: Vec::new(),
        }
    }
}

impl Check {
    /// Pointwise equality of two function tables.
    pub fn tables(id: impl Into<String>, lhs: &[Prob], rhs: &[Prob]) -> Check {
        Check {
            id: id.into(),
            pass: lhs == rhs,
            lhs: table_digest(lhs),
            rhs: table_digest(rhs),
            detail: Vec::new(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "CHECK {} {status} {} {}", self.id, self.lhs, self.rhs)?;
        if !self.pass {
            for line in &self.detail {
                write!(f, "\n# {line}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Report {
        Report {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        writeln!(
            f,
            "SUITE {} {} {}/{} passed",
            self.suite,
            if failed == 0 { "PASS" } else { "FAIL" },
            self.checks.len() - failed,
            self.checks.len()
        )
    }
}

fn hash_support(hasher: &mut Sha256, d: &Dist) {
    for (i, w) in d.support() {
        hasher.update(format!("{i}:{w};").as_bytes());
    }
    hasher.update(b"\n");
}

fn finish(hasher: Sha256) -> String {
    hex::encode(&hasher.finalize()[..8])
}

/// Digest of the support and weights of a distribution.
pub fn dist_digest(d: &Dist) -> String {
    let mut h = Sha256::new();
    h.update(d.space().to_string().as_bytes());
    hash_support(&mut h, d);
    finish(h)
}

pub fn table_digest(values: &[Prob]) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(format!("{v};").as_bytes());
    }
    finish(h)
}

pub fn kernel_digest(k: &Kernel) -> String {
    let mut h = Sha256::new();
    h.update(format!("{} -> {}\n", k.source(), k.target()).as_bytes());
    for row in k.rows() {
        hash_support(&mut h, row);
    }
    finish(h)
}
