// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random states for property checks.
//!
//! Pure states are normalized complex Gaussian vectors supported on Fock
//! levels `0..N-1` of every mode (the top level stays empty). Mixed states are
//! Dirichlet-weighted combinations of three such projectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Dirichlet, Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fock::ModeSpec;
use crate::linalg::{Complex64, ZERO};
use crate::states::{mix, DensityMatrix, PureState};

/// Deterministic generator of random states.
pub struct StateSampler {
    rng: ChaCha8Rng,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn pure(&mut self, spec: ModeSpec) -> Result<PureState> {
        let mut amps = vec![ZERO; spec.dim()];
        for (idx, amp) in amps.iter_mut().enumerate() {
            if spec.decompose(idx).iter().all(|&n| n + 1 < spec.truncation) {
                let re: f64 = self.rng.sample(StandardNormal);
                let im: f64 = self.rng.sample(StandardNormal);
                *amp = Complex64::new(re, im);
            }
        }
        PureState::from_unnormalized(spec, amps)
    }

    pub fn mixed(&mut self, spec: ModeSpec) -> Result<DensityMatrix> {
        let weights: [f64; 3] = Dirichlet::new([1.0; 3])
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .sample(&mut self.rng);
        // renormalize so the weights sum to one at rounding level
        let total: f64 = weights.iter().sum();
        let parts = weights
            .iter()
            .map(|w| Ok((w / total, self.pure(spec)?.projector())))
            .collect::<Result<Vec<_>>>()?;
        mix(&parts)
    }

    pub fn complex_in_disk(&mut self, radius: f64) -> Complex64 {
        let r = radius * self.rng.random::<f64>().sqrt();
        let theta = std::f64::consts::TAU * self.rng.random::<f64>();
        Complex64::from_polar(r, theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let spec = ModeSpec::new(2, 4).unwrap();
        let a = StateSampler::new(7).pure(spec).unwrap();
        let b = StateSampler::new(7).pure(spec).unwrap();
        assert_eq!(a, b);
        assert!(a.tail_masses().iter().all(|&t| t == 0.0));
        let rho = StateSampler::new(3).mixed(ModeSpec::single(6).unwrap()).unwrap();
        assert!(rho.purity().unwrap() < 1.0);
    }
}
