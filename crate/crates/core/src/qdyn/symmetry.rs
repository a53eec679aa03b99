use crate::error::{Error, Result};
use crate::linalg::Operator;

/// Residual below which a commutator counts as vanishing.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// ‖[H, C]‖_max for each Casimir, restricted to basis states selected by
/// `interior` when given.
pub fn symmetry_residual(h: &Operator, casimirs: &[&Operator], interior: Option<&[bool]>) -> Result<Vec<f64>> {
    casimirs
        .iter()
        .map(|c| {
            if c.nrows() != h.nrows() || c.ncols() != h.ncols() {
                return Err(Error::DimensionMismatch { expected: h.nrows(), found: c.nrows() });
            }
            let comm = h.commutator(c)?;
            Ok(match interior {
                Some(mask) => {
                    if mask.len() != h.nrows() {
                        return Err(Error::DimensionMismatch { expected: h.nrows(), found: mask.len() });
                    }
                    comm.max_abs_where(mask)
                }
                None => comm.max_abs(),
            })
        })
        .collect()
}

pub fn has_dynamical_symmetry(residuals: &[f64]) -> bool {
    residuals.iter().all(|r| *r < SYMMETRY_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdyn::{build_hamiltonian, HamiltonianSpec};

    fn spin_residuals(mu_x: f64) -> Vec<f64> {
        let spec = HamiltonianSpec::SpinPair { omega: 1.0, mu_x, mu_z: 1.0, j: 0.5 };
        let rep = spec.build_rep().unwrap().unwrap();
        let h = build_hamiltonian(&spec, &rep).unwrap();
        let cas: Vec<&Operator> = spec.sdf_casimirs().iter().map(|l| rep.require(l).unwrap()).collect();
        symmetry_residual(&h, &cas, None).unwrap()
    }

    #[test]
    fn ising_coupling_keeps_symmetry() {
        let r = spin_residuals(0.0);
        assert_eq!(r, vec![0.0, 0.0]);
        assert!(has_dynamical_symmetry(&r));
    }

    #[test]
    fn transverse_coupling_breaks_it() {
        assert!(spin_residuals(1.0).iter().all(|r| *r > 0.1));
    }

    #[test]
    fn mask_length_checked() {
        let h = Operator::identity(3);
        assert!(symmetry_residual(&h, &[&h], Some(&[true])).is_err());
    }
}
