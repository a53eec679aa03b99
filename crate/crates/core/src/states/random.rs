use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::QuantumState;
use crate::algebra::AlgebraRep;
use crate::error::{Error, Result};

/// Haar-random pure state over the whole carrier space.
pub fn haar_state<R: Rng + ?Sized>(rep: &AlgebraRep, rng: &mut R) -> Result<QuantumState> {
    haar_state_on(rep, &vec![true; rep.dim_hilbert], rng)
}

/// Haar-random pure state supported on the basis states selected by `support`.
///
/// For truncated oscillators pass `rep.interior_mask(2)`: near the cutoff the
/// truncated quadratures no longer obey the uncertainty bound.
pub fn haar_state_on<R: Rng + ?Sized>(rep: &AlgebraRep, support: &[bool], rng: &mut R) -> Result<QuantumState> {
    if support.len() != rep.dim_hilbert {
        return Err(Error::DimensionMismatch { expected: rep.dim_hilbert, found: support.len() });
    }
    if !support.iter().any(|&b| b) {
        return Err(Error::InvalidArgument("empty support".into()));
    }
    let v = DVector::from_iterator(
        rep.dim_hilbert,
        support.iter().map(|&keep| {
            if keep {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
    );
    QuantumState::normalized(v, rep)
}
