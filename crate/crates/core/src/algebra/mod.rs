//! Finite matrix representations of the dynamical algebras h4, su(2) and
//! su(3), their tensor-product composites, and the structure checks that go
//! with them.

mod manifest;
mod sdf;

pub use manifest::{read_rep, write_rep, RepManifest, REP_SCHEMA};
pub use sdf::{sdf_catalogue, sdf_count, Chain, Su3Irrep, SdfReport};

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Operator;

/// Hard cap on the carrier-space dimension of any representation.
pub const DEFAULT_DIM_CAP: usize = 20_000;

/// su(3) irreps above this dimension are built but logged.
pub const SU3_WARN_DIM: usize = 2_000;

const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlgebraKind {
    H4,
    Su2,
    Su3,
    DirectSum(Vec<AlgebraKind>),
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::H4 => write!(f, "h4"),
            AlgebraKind::Su2 => write!(f, "su(2)"),
            AlgebraKind::Su3 => write!(f, "su(3)"),
            AlgebraKind::DirectSum(parts) => {
                let names: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", names.join("+"))
            }
        }
    }
}

/// Spin quantum number stored as `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Spin(u32);

impl Spin {
    pub fn from_twice(two_j: u32) -> Self {
        Spin(two_j)
    }

    pub fn new(j: f64) -> Result<Self> {
        let two_j = 2.0 * j;
        if !(two_j >= 0.0) || (two_j - two_j.round()).abs() > 1e-12 || two_j > u32::MAX as f64 {
            return Err(Error::InvalidArgument(format!(
                "spin must be a non-negative half-integer, got {j}"
            )));
        }
        Ok(Spin(two_j.round() as u32))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn multiplicity(self) -> usize {
        self.0 as usize + 1
    }
}

/// One simple factor of a (possibly composite) representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Factor {
    H4 { n_max: usize },
    Su2 { spin: Spin },
    Su3 { particles: usize },
}

impl Factor {
    pub fn dim(&self) -> usize {
        match *self {
            Factor::H4 { n_max } => n_max + 1,
            Factor::Su2 { spin } => spin.multiplicity(),
            Factor::Su3 { particles } => (particles + 1) * (particles + 2) / 2,
        }
    }

    pub fn kind(&self) -> AlgebraKind {
        match self {
            Factor::H4 { .. } => AlgebraKind::H4,
            Factor::Su2 { .. } => AlgebraKind::Su2,
            Factor::Su3 { .. } => AlgebraKind::Su3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub label: String,
    pub op: Operator,
    pub hermitian: bool,
    /// Member of the observable list that enters the quantumness sum.
    pub quantumness: bool,
}

impl Generator {
    fn new(label: impl Into<String>, op: Operator, hermitian: bool, quantumness: bool) -> Self {
        Generator { label: label.into(), op, hermitian, quantumness }
    }
}

/// An immutable finite-dimensional representation.
#[derive(Clone, Debug)]
pub struct AlgebraRep {
    pub kind: AlgebraKind,
    pub dim_hilbert: usize,
    pub generators: Vec<Generator>,
    pub rank: usize,
    pub dim_algebra: usize,
    pub chain_casimirs: Vec<Generator>,
    pub truncated: bool,
    pub factors: Vec<Factor>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl AlgebraRep {
    pub fn generator(&self, label: &str) -> Option<&Operator> {
        self.generators
            .iter()
            .chain(&self.chain_casimirs)
            .find(|g| g.label == label)
            .map(|g| &g.op)
    }

    /// Like [`generator`](Self::generator) but with a descriptive error.
    pub fn require(&self, label: &str) -> Result<&Operator> {
        self.generator(label)
            .ok_or_else(|| Error::InvalidArgument(format!("{} has no generator `{label}`", self.kind)))
    }

    pub fn quantumness_generators(&self) -> impl Iterator<Item = &Generator> {
        self.generators.iter().filter(|g| g.quantumness)
    }

    /// Dimensions of the tensor factors, most significant first.
    pub fn factor_dims(&self) -> Vec<usize> {
        self.factors.iter().map(Factor::dim).collect()
    }

    /// Decomposes a basis index into per-factor local indices.
    pub fn local_indices(&self, mut index: usize) -> Vec<usize> {
        let dims = self.factor_dims();
        let mut out = vec![0; dims.len()];
        for (k, d) in dims.iter().enumerate().rev() {
            out[k] = index % d;
            index /= d;
        }
        out
    }

    /// Basis states whose Fock occupation, in every truncated oscillator
    /// factor, stays at least `margin` levels below the cutoff. All-true for
    /// untruncated representations.
    pub fn interior_mask(&self, margin: usize) -> Vec<bool> {
        (0..self.dim_hilbert)
            .map(|i| {
                self.local_indices(i).iter().zip(&self.factors).all(|(&k, f)| match f {
                    Factor::H4 { n_max } => k + margin <= *n_max,
                    _ => true,
                })
            })
            .collect()
    }

    /// Basis states in the top two Fock levels of some oscillator factor.
    pub fn leakage_mask(&self) -> Vec<bool> {
        self.interior_mask(2).into_iter().map(|b| !b).collect()
    }

    /// Label suffix of factor `k` (`"_1"`, `"_2"`, ... for composites, empty otherwise).
    pub fn factor_suffix(&self, k: usize) -> String {
        if self.factors.len() > 1 {
            format!("_{}", k + 1)
        } else {
            String::new()
        }
    }

    pub fn has_oscillators(&self) -> bool {
        self.factors.iter().any(|f| matches!(f, Factor::H4 { .. }))
    }
}

/// Spin-j matrices Jx, Jy, Jz in the |j,m⟩ basis ordered m = j, j-1, ..., -j.
pub fn build_su2_rep(j: f64) -> Result<AlgebraRep> {
    Ok(su2_from_spin(Spin::new(j)?))
}

pub fn su2_from_spin(spin: Spin) -> AlgebraRep {
    let dim = spin.multiplicity();
    let j = spin.value();
    let m_of = |k: usize| j - k as f64;
    let jz = Operator::diagonal(&(0..dim).map(m_of).collect::<Vec<_>>());
    // J+ |m⟩ = sqrt(j(j+1) - m(m+1)) |m+1⟩; |m+1⟩ sits one row above |m⟩.
    let jp = Operator::from_triplets(
        dim,
        dim,
        (1..dim).map(|k| {
            let m = m_of(k);
            (k - 1, k, c((j * (j + 1.0) - m * (m + 1.0)).sqrt()))
        }),
    );
    let jm = jp.adjoint();
    let jx = jp.add(&jm).expect("same shape").scale_real(0.5);
    let jy = jp
        .sub(&jm)
        .expect("same shape")
        .scale(Complex64::new(0.0, -0.5));
    AlgebraRep {
        kind: AlgebraKind::Su2,
        dim_hilbert: dim,
        generators: vec![
            Generator::new("Jx", jx, true, true),
            Generator::new("Jy", jy, true, true),
            Generator::new("Jz", jz.clone(), true, true),
        ],
        rank: 1,
        dim_algebra: 3,
        chain_casimirs: vec![Generator::new("Jz", jz, true, false)],
        truncated: false,
        factors: vec![Factor::Su2 { spin }],
    }
}

/// Raising and lowering operators `(J+, J-)` of an su(2) factor rep.
pub fn su2_ladders(rep: &AlgebraRep, suffix: &str) -> Result<(Operator, Operator)> {
    let jx = rep.require(&format!("Jx{suffix}"))?;
    let jy = rep.require(&format!("Jy{suffix}"))?;
    let i = Complex64::new(0.0, 1.0);
    Ok((jx.add_scaled(jy, i)?, jx.add_scaled(jy, -i)?))
}

/// Truncated Fock-space matrices a, a†, n, I on levels 0..=n_max.
pub fn build_h4_rep(n_max: usize) -> Result<AlgebraRep> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("Fock truncation n_max must be >= 2, got {n_max}")));
    }
    let dim = n_max + 1;
    let a = Operator::from_triplets(dim, dim, (1..dim).map(|k| (k - 1, k, c((k as f64).sqrt()))));
    let adag = a.adjoint();
    let n = Operator::diagonal(&(0..dim).map(|k| k as f64).collect::<Vec<_>>());
    Ok(AlgebraRep {
        kind: AlgebraKind::H4,
        dim_hilbert: dim,
        generators: vec![
            Generator::new("a", a, false, false),
            Generator::new("adag", adag, false, false),
            Generator::new("n", n.clone(), true, false),
            Generator::new("I", Operator::identity(dim), true, false),
        ],
        rank: 2,
        dim_algebra: 4,
        chain_casimirs: vec![Generator::new("n", n, true, false)],
        truncated: true,
        factors: vec![Factor::H4 { n_max }],
    })
}

/// Occupation triples (n1, n2, n3) with n1+n2+n3 = N in lexicographic order.
pub fn su3_basis(particles: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity((particles + 1) * (particles + 2) / 2);
    for n1 in 0..=particles {
        for n2 in 0..=(particles - n1) {
            out.push([n1, n2, particles - n1 - n2]);
        }
    }
    out
}

/// Fully symmetric su(3) irrep realized on three bosonic modes holding
/// `particles` quanta, with E_ij = a_i† a_j.
pub fn build_su3_symmetric_rep(particles: usize) -> Result<AlgebraRep> {
    build_su3_symmetric_rep_capped(particles, DEFAULT_DIM_CAP)
}

pub fn build_su3_symmetric_rep_capped(particles: usize, cap: usize) -> Result<AlgebraRep> {
    if particles < 1 {
        return Err(Error::InvalidArgument("su(3) particle number must be >= 1".into()));
    }
    let basis = su3_basis(particles);
    let dim = basis.len();
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    if dim > SU3_WARN_DIM {
        log::warn!("su(3) irrep with N = {particles} has dimension {dim}");
    }
    let index_of = |occ: [usize; 3]| basis.binary_search(&occ).expect("occupation in basis");
    let e = |i: usize, j: usize| -> Operator {
        Operator::from_triplets(
            dim,
            dim,
            basis.iter().enumerate().filter_map(|(col, occ)| {
                if i == j {
                    return Some((col, col, c(occ[i] as f64)));
                }
                if occ[j] == 0 {
                    return None;
                }
                let mut to = *occ;
                to[j] -= 1;
                to[i] += 1;
                let amp = ((occ[j] * (occ[i] + 1)) as f64).sqrt();
                Some((index_of(to), col, c(amp)))
            }),
        )
    };
    let mut generators = Vec::new();
    let mut ops = vec![vec![Operator::zeros(dim, dim); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            ops[i][j] = e(i, j);
            generators.push(Generator::new(format!("E{}{}", i + 1, j + 1), ops[i][j].clone(), i == j, false));
        }
    }
    let lin = |terms: &[(f64, &Operator)]| -> Operator {
        terms.iter().fold(Operator::zeros(dim, dim), |acc, (s, op)| {
            acc.add_scaled(op, c(*s)).expect("same shape")
        })
    };
    let x1 = lin(&[(1.0, &ops[0][0]), (-1.0, &ops[1][1])]);
    let x2 = lin(&[(1.0, &ops[0][0]), (-1.0, &ops[1][1]), (-2.0, &ops[2][2])]);
    generators.push(Generator::new("X1", x1, true, true));
    generators.push(Generator::new("X2", x2, true, true));
    let i_unit = Complex64::new(0.0, 1.0);
    for k in 0..3 {
        let j = (k + 1) % 3;
        let y = ops[k][j].sub(&ops[j][k]).expect("same shape").scale(i_unit);
        generators.push(Generator::new(format!("Y{}", k + 1), y, true, true));
    }
    for k in 0..3 {
        let j = (k + 1) % 3;
        let z = ops[k][j].add(&ops[j][k]).expect("same shape");
        generators.push(Generator::new(format!("Z{}", k + 1), z, true, true));
    }
    // su(2) ⊕ u(1) acting on modes 1, 2
    let tz = lin(&[(0.5, &ops[0][0]), (-0.5, &ops[1][1])]);
    let tpm = ops[0][1].matmul(&ops[1][0]).expect("square");
    let tmp = ops[1][0].matmul(&ops[0][1]).expect("square");
    let t2 = tz
        .matmul(&tz)
        .expect("square")
        .add(&lin(&[(0.5, &tpm), (0.5, &tmp)]))
        .expect("same shape");
    Ok(AlgebraRep {
        kind: AlgebraKind::Su3,
        dim_hilbert: dim,
        generators,
        rank: 2,
        dim_algebra: 8,
        chain_casimirs: vec![
            Generator::new("T2", t2, true, false),
            Generator::new("Tz", tz, true, false),
        ],
        truncated: false,
        factors: vec![Factor::Su3 { particles }],
    })
}

/// Hypercharge Y = (n1 + n2 - 2 n3)/3 of an su(3) symmetric rep. In the
/// symmetric irreps it is a function of T², so it is not a chain Casimir.
pub fn su3_hypercharge(rep: &AlgebraRep) -> Result<Operator> {
    let e11 = rep.require("E11")?;
    let e22 = rep.require("E22")?;
    let e33 = rep.require("E33")?;
    e11.add(e22)?.add_scaled(e33, c(-2.0)).map(|y| y.scale_real(1.0 / 3.0))
}

fn suffixed(g: &Generator, k: usize, op: Operator) -> Generator {
    Generator { label: format!("{}_{}", g.label, k + 1), op, hermitian: g.hermitian, quantumness: g.quantumness }
}

/// Composite system: carrier space is the tensor product; generators of
/// factor k are embedded as I⊗…⊗L⊗…⊗I and relabeled `L_k` (1-based).
pub fn direct_sum_rep(reps: &[AlgebraRep]) -> Result<AlgebraRep> {
    direct_sum_rep_capped(reps, DEFAULT_DIM_CAP)
}

pub fn direct_sum_rep_capped(reps: &[AlgebraRep], cap: usize) -> Result<AlgebraRep> {
    if reps.len() < 2 {
        return Err(Error::InvalidArgument("a direct sum needs at least two factors".into()));
    }
    let dim = reps
        .iter()
        .try_fold(1usize, |acc, r| acc.checked_mul(r.dim_hilbert))
        .unwrap_or(usize::MAX);
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let mut generators = Vec::new();
    let mut casimirs = Vec::new();
    let mut factors = Vec::new();
    let mut kinds = Vec::new();
    for (k, rep) in reps.iter().enumerate() {
        let left: usize = reps[..k].iter().map(|r| r.dim_hilbert).product();
        let right: usize = reps[k + 1..].iter().map(|r| r.dim_hilbert).product();
        let embed = |op: &Operator| Operator::identity(left).kron(op).kron(&Operator::identity(right));
        generators.extend(rep.generators.iter().map(|g| suffixed(g, k, embed(&g.op))));
        casimirs.extend(rep.chain_casimirs.iter().map(|g| suffixed(g, k, embed(&g.op))));
        factors.extend(rep.factors.iter().cloned());
        match &rep.kind {
            AlgebraKind::DirectSum(parts) => kinds.extend(parts.iter().cloned()),
            other => kinds.push(other.clone()),
        }
    }
    Ok(AlgebraRep {
        kind: AlgebraKind::DirectSum(kinds),
        dim_hilbert: dim,
        generators,
        rank: reps.iter().map(|r| r.rank).sum(),
        dim_algebra: reps.iter().map(|r| r.dim_algebra).sum(),
        chain_casimirs: casimirs,
        truncated: reps.iter().any(|r| r.truncated),
        factors,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorResidual {
    /// max-norm of [A,B] - expected over the full carrier space
    pub full: f64,
    /// same, restricted to the interior subspace of a truncated rep
    pub interior: Option<f64>,
}

impl CommutatorResidual {
    /// The residual that is meaningful for the rep: interior if truncated.
    pub fn effective(&self) -> f64 {
        self.interior.unwrap_or(self.full)
    }
}

pub fn commutator_residual(
    a: &Operator,
    b: &Operator,
    expected: &Operator,
    interior: Option<&[bool]>,
) -> Result<CommutatorResidual> {
    let diff = a.commutator(b)?.sub(expected)?;
    let interior = match interior {
        Some(mask) => {
            if mask.len() != diff.nrows() {
                return Err(Error::DimensionMismatch { expected: diff.nrows(), found: mask.len() });
            }
            Some(diff.max_abs_where(mask))
        }
        None => None,
    };
    Ok(CommutatorResidual { full: diff.max_abs(), interior })
}

#[derive(Clone, Debug)]
pub struct ClosureCheck {
    pub relation: String,
    pub residual: CommutatorResidual,
}

/// Evaluates every catalogued commutation relation of `rep`, including the
/// vanishing cross-factor commutators of composites.
pub fn closure_checks(rep: &AlgebraRep) -> Result<Vec<ClosureCheck>> {
    let mut out = Vec::new();
    let interior = rep.truncated.then(|| rep.interior_mask(1));
    let mut push = |relation: String, a: &Operator, b: &Operator, expected: &Operator| -> Result<()> {
        let residual = commutator_residual(a, b, expected, interior.as_deref())?;
        out.push(ClosureCheck { relation, residual });
        Ok(())
    };
    let n = rep.dim_hilbert;
    let zero = Operator::zeros(n, n);
    let i_unit = Complex64::new(0.0, 1.0);
    let multi = rep.factors.len() > 1;
    for (k, factor) in rep.factors.iter().enumerate() {
        let sfx = if multi { format!("_{}", k + 1) } else { String::new() };
        let g = |l: &str| rep.require(&format!("{l}{sfx}"));
        match factor {
            Factor::Su2 { .. } => {
                let (jx, jy, jz) = (g("Jx")?, g("Jy")?, g("Jz")?);
                push(format!("[Jx,Jy]=iJz{sfx}"), jx, jy, &jz.scale(i_unit))?;
                push(format!("[Jy,Jz]=iJx{sfx}"), jy, jz, &jx.scale(i_unit))?;
                push(format!("[Jz,Jx]=iJy{sfx}"), jz, jx, &jy.scale(i_unit))?;
            }
            Factor::H4 { .. } => {
                let (a, ad, num, id) = (g("a")?, g("adag")?, g("n")?, g("I")?);
                push(format!("[a,adag]=I{sfx}"), a, ad, id)?;
                push(format!("[n,adag]=adag{sfx}"), num, ad, ad)?;
                push(format!("[n,a]=-a{sfx}"), num, a, &a.scale_real(-1.0))?;
                push(format!("[adag,I]=0{sfx}"), ad, id, &zero)?;
                push(format!("[a,I]=0{sfx}"), a, id, &zero)?;
                push(format!("[n,I]=0{sfx}"), num, id, &zero)?;
            }
            Factor::Su3 { .. } => {
                for i in 1..=3 {
                    for j in 1..=3 {
                        for kk in 1..=3 {
                            for l in 1..=3 {
                                let mut expected = zero.clone();
                                if j == kk {
                                    expected = expected.add(g(&format!("E{i}{l}"))?)?;
                                }
                                if i == l {
                                    expected = expected.sub(g(&format!("E{kk}{j}"))?)?;
                                }
                                push(
                                    format!("[E{i}{j},E{kk}{l}]{sfx}"),
                                    g(&format!("E{i}{j}"))?,
                                    g(&format!("E{kk}{l}"))?,
                                    &expected,
                                )?;
                            }
                        }
                    }
                }
            }
        }
    }
    if multi {
        let owner = |label: &str| label.rsplit('_').next().map(str::to_owned);
        for (x, gx) in rep.generators.iter().enumerate() {
            for gy in rep.generators.iter().skip(x + 1) {
                if owner(&gx.label) != owner(&gy.label) {
                    push(format!("[{},{}]=0", gx.label, gy.label), &gx.op, &gy.op, &zero)?;
                }
            }
        }
    }
    Ok(out)
}

/// max over generators flagged Hermitian of ‖G - G†‖_max.
pub fn hermiticity_defect(rep: &AlgebraRep) -> f64 {
    rep.generators
        .iter()
        .chain(&rep.chain_casimirs)
        .filter(|g| g.hermitian)
        .map(|g| g.op.hermiticity_defect())
        .fold(0.0, f64::max)
}

pub fn check_hermitian(rep: &AlgebraRep) -> Result<()> {
    let d = hermiticity_defect(rep);
    if d > HERMITIAN_TOL {
        return Err(Error::NotHermitian(d));
    }
    Ok(())
}
