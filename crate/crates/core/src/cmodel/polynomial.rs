//! Sparse multivariate polynomials over phase-space variables.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Σ c_α x^α over `nvars` variables; exponent vectors index the variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "PolynomialRepr", try_from = "PolynomialRepr")]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

/// Serialized form: a list of (exponents, coefficient) terms.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialRepr {
    nvars: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl From<Polynomial> for PolynomialRepr {
    fn from(p: Polynomial) -> Self {
        PolynomialRepr { nvars: p.nvars, terms: p.terms.into_iter().collect() }
    }
}

impl TryFrom<PolynomialRepr> for Polynomial {
    type Error = String;

    fn try_from(r: PolynomialRepr) -> std::result::Result<Self, String> {
        let mut p = Polynomial::zero(r.nvars);
        for (e, c) in r.terms {
            if e.len() != r.nvars {
                return Err(format!("exponent vector of length {} in a {}-variable polynomial", e.len(), r.nvars));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The monomial c·x_var^power.
    pub fn monomial(nvars: usize, c: f64, powers: &[(usize, u32)]) -> Self {
        let mut e = vec![0; nvars];
        for &(v, k) in powers {
            e[v] += k;
        }
        let mut p = Self::zero(nvars);
        p.add_term(e, c);
        p
    }

    /// The same polynomial viewed in `nvars ≥ self.nvars()` variables, the
    /// extra ones appended.
    pub fn extend_vars(&self, nvars: usize) -> Result<Polynomial> {
        if nvars < self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: nvars });
        }
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e.resize(nvars, 0);
            out.add_term(e, *c);
        }
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.iter().zip(eb).map(|(a, b)| a + b).collect(), ca * cb);
            }
        }
        Ok(out)
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    /// ∂/∂x_var
    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut d = e.clone();
                d[var] -= 1;
                out.add_term(d, c * e[var] as f64);
            }
        }
        out
    }

    /// Σ_{v ∈ vars} ∂²/∂x_v²
    pub fn laplacian(&self, vars: &[usize]) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        for &v in vars {
            let d2 = self.derivative(v).derivative(v);
            for (e, c) in d2.terms {
                out.add_term(e, c);
            }
        }
        out
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(k, xi)| xi.powi(*k as i32)).product::<f64>())
            .sum()
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..self.nvars).map(|v| self.derivative(v).evaluate(x)).collect()
    }

    /// Largest |coefficient difference| against `other`.
    pub fn max_coeff_diff(&self, other: &Polynomial) -> f64 {
        let keys: std::collections::BTreeSet<&Vec<u32>> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .map(|e| (self.terms.get(e).copied().unwrap_or(0.0) - other.terms.get(e).copied().unwrap_or(0.0)).abs())
            .fold(0.0, f64::max)
    }

    /// Parses sums of monomials in `q1..qn` (and `p1..pn` when `with_momenta`),
    /// e.g. `0.5*q1^2 + 2*q1^2*q2 - 0.25*q2^3`. Variable order is q1..qn, p1..pn.
    pub fn parse(text: &str, dof: usize, with_momenta: bool) -> Result<Polynomial> {
        let nvars = if with_momenta { 2 * dof } else { dof };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::InvalidArgument("empty polynomial".into()));
        }
        let mut out = Self::zero(nvars);
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            let prev = bytes[i - 1];
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(prev, b'e' | b'E' | b'^' | b'*' | b'+' | b'-') {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        for term in terms {
            let body = term.trim_start_matches(['+', '-']);
            let minus = term[..term.len() - body.len()].matches('-').count();
            let mut coeff = if minus % 2 == 0 { 1.0 } else { -1.0 };
            let mut e = vec![0u32; nvars];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(Error::InvalidArgument(format!("malformed term `{term}`")));
                }
                let (base, power) = match factor.split_once('^') {
                    Some((b, p)) => {
                        let p: u32 = p
                            .parse()
                            .map_err(|_| Error::InvalidArgument(format!("non-polynomial power in `{factor}`")))?;
                        (b, p)
                    }
                    None => (factor, 1),
                };
                let var = |prefix: char, offset: usize| -> Option<usize> {
                    let idx: usize = base.strip_prefix(prefix)?.parse().ok()?;
                    (1..=dof).contains(&idx).then_some(offset + idx - 1)
                };
                if let Some(v) = var('q', 0) {
                    e[v] += power;
                } else if let Some(v) = with_momenta.then(|| var('p', dof)).flatten() {
                    e[v] += power;
                } else if let Ok(c) = base.parse::<f64>() {
                    coeff *= c.powi(power as i32);
                } else {
                    return Err(Error::InvalidArgument(format!("non-polynomial factor `{factor}`")));
                }
            }
            out.add_term(e, coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mut factors = vec![format!("{}", c.abs())];
            for (v, k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("x{}", v + 1)),
                    _ => factors.push(format!("x{}^{k}", v + 1)),
                }
            }
            let sign = if *c < 0.0 { "-" } else if first { "" } else { "+" };
            if first {
                write!(f, "{sign}{}", factors.join("*"))?;
            } else {
                write!(f, " {sign} {}", factors.join("*"))?;
            }
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    /// Infers the number of position variables from the largest `qk` index.
    fn from_str(s: &str) -> Result<Self> {
        let dof = s
            .split(|c: char| !c.is_ascii_alphanumeric())
            .filter_map(|tok| tok.strip_prefix('q').and_then(|n| n.parse::<usize>().ok()))
            .max()
            .unwrap_or(1);
        Polynomial::parse(s, dof, false)
    }
}
