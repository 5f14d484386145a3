//! On-shell four-momenta.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Matrix4;
use crate::clifford::gamma;
use crate::error::{Error, Result};
use crate::tolerance::TAU_SHELL;

/// Contravariant four-momentum `p^μ = (E, px, py, pz)` of a particle of mass `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Momentum {
    pub energy: f64,
    pub p: [f64; 3],
    pub mass: f64,
}

impl Momentum {
    /// Builds the on-shell momentum with positive energy for spatial part `p`.
    pub fn on_shell(mass: f64, p: [f64; 3]) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidArgument(format!("mass must be positive, got {mass}")));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("momentum components must be finite".into()));
        }
        let energy = (mass * mass + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        Ok(Momentum { energy, p, mass })
    }

    /// Validates a full four-vector against the mass shell.
    pub fn from_four(mass: f64, four: [f64; 4]) -> Result<Self> {
        let m = Self::on_shell(mass, [four[1], four[2], four[3]])?;
        if !(four[0] > 0.0) {
            return Err(Error::OffShell(format!("energy must be positive, got {}", four[0])));
        }
        if (four[0] - m.energy).abs() > TAU_SHELL * m.energy {
            return Err(Error::OffShell(format!(
                "p0 = {} but sqrt(p^2 + m^2) = {}",
                four[0], m.energy
            )));
        }
        Ok(m)
    }

    pub fn rest(mass: f64) -> Result<Self> {
        Self::on_shell(mass, [0.0; 3])
    }

    /// Same mass with the spatial momentum reversed.
    pub fn reflected(&self) -> Self {
        Momentum { energy: self.energy, p: [-self.p[0], -self.p[1], -self.p[2]], mass: self.mass }
    }

    pub fn four(&self) -> [f64; 4] {
        [self.energy, self.p[0], self.p[1], self.p[2]]
    }

    pub fn spatial_norm(&self) -> f64 {
        (self.p[0] * self.p[0] + self.p[1] * self.p[1] + self.p[2] * self.p[2]).sqrt()
    }

    /// `γ_μ p^μ`.
    pub fn slash(&self) -> Matrix4 {
        let f = self.four();
        (0..4).fold(Matrix4::zero(), |acc, mu| acc + gamma(mu).unwrap() * f[mu])
    }

    /// Draws an on-shell momentum with isotropic direction and
    /// `|p| ∈ [lo·m, hi·m]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, mass: f64, lo: f64, hi: f64) -> Result<Self> {
        let dir = loop {
            let v: [f64; 3] = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if n > 1e-3 && n <= 1.0 {
                break [v[0] / n, v[1] / n, v[2] / n];
            }
        };
        let mag = rng.random_range(lo..=hi) * mass;
        Self::on_shell(mass, [dir[0] * mag, dir[1] * mag, dir[2] * mag])
    }
}

/// Probe momenta used by covariance fits: `count` draws with `|p| ∈ [0.1m, 3m]`.
pub fn probe_momenta(seed: u64, count: usize, mass: f64) -> Result<Vec<Momentum>> {
    let mut rng = crate::rng::stream(crate::rng::derive(seed, "probe-momenta"), 0);
    (0..count).map(|_| Momentum::random(&mut rng, mass, 0.1, 3.0)).collect()
}
