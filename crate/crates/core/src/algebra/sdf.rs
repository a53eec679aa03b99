//! Counting of symmetry degrees of freedom along catalogued algebra chains.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AlgebraKind, AlgebraRep, Factor};
use crate::error::{Error, Result};

/// A catalogued subalgebra chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chain {
    /// h4 ⊃ u(1) ⊕ u(1)
    H4,
    /// su(2) ⊃ u(1)
    Su2,
    /// su(3) ⊃ su(2) ⊕ u(1) ⊃ u(1)
    Su3,
    Sum(Vec<Chain>),
}

impl Chain {
    /// The natural chain of a representation.
    pub fn for_rep(rep: &AlgebraRep) -> Chain {
        let parts: Vec<Chain> = rep
            .factors
            .iter()
            .map(|f| match f {
                Factor::H4 { .. } => Chain::H4,
                Factor::Su2 { .. } => Chain::Su2,
                Factor::Su3 { .. } => Chain::Su3,
            })
            .collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            Chain::Sum(parts)
        }
    }

    fn leaves(&self) -> Vec<&Chain> {
        match self {
            Chain::Sum(parts) => parts.iter().flat_map(|p| p.leaves()).collect(),
            other => vec![other],
        }
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chain::H4 => write!(f, "h4>u1+u1"),
            Chain::Su2 => write!(f, "su2>u1"),
            Chain::Su3 => write!(f, "su3>su2+u1>u1"),
            Chain::Sum(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", s.join("; "))
            }
        }
    }
}

impl FromStr for Chain {
    type Err = Error;

    /// Accepts `h4>u1+u1`, `su2>u1`, `su3>su2+u1>u1` and `;`-separated sums.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(';').map(str::trim).collect();
        if parts.len() > 1 {
            return parts.iter().map(|p| p.parse()).collect::<Result<Vec<_>>>().map(Chain::Sum);
        }
        let compact: String = s.chars().filter(|c| !c.is_whitespace() && *c != '(' && *c != ')').collect();
        match compact.as_str() {
            "h4>u1+u1" => Ok(Chain::H4),
            "su2>u1" => Ok(Chain::Su2),
            "su3>su2+u1>u1" => Ok(Chain::Su3),
            _ => Err(Error::UnknownChain(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Su3Irrep {
    /// (λ, 0): the irreps realized on three bosonic modes
    Symmetric,
    /// (λ, μ) with λ, μ > 0
    Generic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdfReport {
    pub chain: String,
    /// dimension of the algebra
    pub n: usize,
    /// rank
    pub l: usize,
    /// classical degrees of freedom, l + (n - l)/2
    pub d: usize,
    /// symmetry degrees of freedom carried by the chain
    pub m: usize,
    pub casimirs: Vec<String>,
    pub valid: bool,
}

fn leaf_report(chain: &Chain, su3: Su3Irrep) -> SdfReport {
    let (n, l, m, casimirs): (usize, usize, usize, &[&str]) = match chain {
        Chain::H4 => (4, 2, 1, &["n", "I"]),
        Chain::Su2 => (3, 1, 1, &["J2", "Jz"]),
        Chain::Su3 => match su3 {
            Su3Irrep::Symmetric => (8, 2, 2, &["C2", "C3", "T2", "Tz"]),
            Su3Irrep::Generic => (8, 2, 3, &["C2", "C3", "Y", "T2", "Tz"]),
        },
        Chain::Sum(_) => unreachable!("leaves only"),
    };
    let d = l + (n - l) / 2;
    SdfReport {
        chain: chain.to_string(),
        n,
        l,
        d,
        m,
        casimirs: casimirs.iter().map(|s| s.to_string()).collect(),
        valid: (n - l) % 2 == 0 && m <= (n - l) / 2,
    }
}

/// Pure catalogue lookup; sums add up componentwise.
pub fn sdf_catalogue(chain: &Chain, su3: Su3Irrep) -> SdfReport {
    let leaves = chain.leaves();
    if leaves.len() == 1 {
        return leaf_report(leaves[0], su3);
    }
    let parts: Vec<SdfReport> = leaves.iter().map(|c| leaf_report(c, su3)).collect();
    SdfReport {
        chain: chain.to_string(),
        n: parts.iter().map(|p| p.n).sum(),
        l: parts.iter().map(|p| p.l).sum(),
        d: parts.iter().map(|p| p.d).sum(),
        m: parts.iter().map(|p| p.m).sum(),
        casimirs: parts
            .iter()
            .enumerate()
            .flat_map(|(k, p)| p.casimirs.iter().map(move |c| format!("{c}_{}", k + 1)))
            .collect(),
        valid: parts.iter().all(|p| p.valid),
    }
}

/// SDF bookkeeping for `rep` along `chain`, which must match the rep's
/// factor structure. The su(3) reps built here are symmetric irreps.
pub fn sdf_count(rep: &AlgebraRep, chain: &Chain) -> Result<SdfReport> {
    let leaves = chain.leaves();
    let ok = leaves.len() == rep.factors.len()
        && leaves.iter().zip(&rep.factors).all(|(c, f)| {
            matches!(
                (c, f),
                (Chain::H4, Factor::H4 { .. }) | (Chain::Su2, Factor::Su2 { .. }) | (Chain::Su3, Factor::Su3 { .. })
            )
        });
    if !ok {
        return Err(Error::UnknownChain(format!("{chain} is not a chain of {}", rep.kind)));
    }
    let report = sdf_catalogue(chain, Su3Irrep::Symmetric);
    debug_assert_eq!(report.n, rep.dim_algebra);
    debug_assert_eq!(report.l, rep.rank);
    Ok(report)
}

impl AlgebraKind {
    /// Catalogued chain for a simple kind.
    pub fn chain(&self) -> Option<Chain> {
        match self {
            AlgebraKind::H4 => Some(Chain::H4),
            AlgebraKind::Su2 => Some(Chain::Su2),
            AlgebraKind::Su3 => Some(Chain::Su3),
            AlgebraKind::DirectSum(parts) => parts.iter().map(|p| p.chain()).collect::<Option<Vec<_>>>().map(Chain::Sum),
        }
    }
}
