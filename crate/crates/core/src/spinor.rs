//! Concrete spinors: Dirac `u`/`v`, self and anti-self charge-conjugate
//! (Elko-type) spinors, the degenerate octet and seeded random spinors.
//!
//! All constructions use the spin basis along `z`, `ξ₊ = (1,0)`, `ξ₋ = (0,1)`,
//! with normalisation `ūu = 2m`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::{vec_norm, vec_scale, Vec4, C64, I, ONE, ZERO};
use crate::clifford::boost;
use crate::error::{Error, Result};
use crate::momentum::Momentum;

/// Spin projection along `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    fn xi(&self) -> [C64; 2] {
        match self {
            Spin::Up => [ONE, ZERO],
            Spin::Down => [ZERO, ONE],
        }
    }
}

/// Self (`ρ = +i`) or anti-self (`ρ = -i`) charge-conjugate type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ElkoType {
    SelfConjugate,
    AntiSelfConjugate,
}

impl ElkoType {
    fn rho(&self) -> C64 {
        match self {
            ElkoType::SelfConjugate => I,
            ElkoType::AntiSelfConjugate => -I,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpinorKind {
    RegularParticle(Spin),
    RegularAntiparticle(Spin),
    SingularSelf(Spin),
    SingularAnti(Spin),
    Octet { particle: bool, slot: u8 },
    Random,
    Given,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spinor {
    #[serde(with = "crate::algebra::complex_pairs")]
    pub components: Vec4,
    pub kind: SpinorKind,
}

impl Spinor {
    pub fn new(components: Vec4, kind: SpinorKind) -> Self {
        Spinor { components, kind }
    }

    /// Spinor from eight reals `re0, im0, …, re3, im3`.
    pub fn from_reals(v: &[f64]) -> Result<Self> {
        if v.len() != 8 {
            return Err(Error::Parse(format!("spinor needs 8 reals (re,im interleaved), got {}", v.len())));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parse("spinor components must be finite".into()));
        }
        let c = [C64::new(v[0], v[1]), C64::new(v[2], v[3]), C64::new(v[4], v[5]), C64::new(v[6], v[7])];
        Ok(Spinor::new(c, SpinorKind::Given))
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.components)
    }

    pub fn scaled(&self, c: C64) -> Self {
        Spinor::new(vec_scale(&self.components, c), self.kind)
    }
}

/// `u(p) = √m κ(p) (ξ, ξ)`.
pub fn dirac_u(p: &Momentum, h: Spin) -> Spinor {
    let x = h.xi();
    let rest = [x[0], x[1], x[0], x[1]];
    Spinor::new(vec_scale(&boost(p).mul_vec(&rest), C64::new(p.mass.sqrt(), 0.0)), SpinorKind::RegularParticle(h))
}

/// `v(p) = √m κ(p) (ξ, -ξ)`.
pub fn dirac_v(p: &Momentum, h: Spin) -> Spinor {
    let x = h.xi();
    let rest = [x[0], x[1], -x[0], -x[1]];
    Spinor::new(vec_scale(&boost(p).mul_vec(&rest), C64::new(p.mass.sqrt(), 0.0)), SpinorKind::RegularAntiparticle(h))
}

/// `λ(p) = √m κ(p) (ρ Θ φ*, φ)` with `Θ = [[0,-1],[1,0]]` and `φ = ξ_h`.
pub fn elko(p: &Momentum, ty: ElkoType, h: Spin) -> Spinor {
    let phi = h.xi();
    let rho = ty.rho();
    let upper = [-rho * phi[1].conj(), rho * phi[0].conj()];
    let rest = [upper[0], upper[1], phi[0], phi[1]];
    let kind = match ty {
        ElkoType::SelfConjugate => SpinorKind::SingularSelf(h),
        ElkoType::AntiSelfConjugate => SpinorKind::SingularAnti(h),
    };
    Spinor::new(vec_scale(&boost(p).mul_vec(&rest), C64::new(p.mass.sqrt(), 0.0)), kind)
}

/// Which set of spinors a family holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    Regular,
    Singular,
    SingularDegenerate,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 3] = [FamilyKind::Regular, FamilyKind::Singular, FamilyKind::SingularDegenerate];

    pub fn parse(s: &str) -> Option<FamilyKind> {
        match s.trim().to_ascii_lowercase().as_str() {
            "regular" | "reg" => Some(FamilyKind::Regular),
            "singular" | "sing" => Some(FamilyKind::Singular),
            "degenerate" | "singular-degenerate" | "octet" | "deg" => Some(FamilyKind::SingularDegenerate),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Regular => "regular",
            FamilyKind::Singular => "singular",
            FamilyKind::SingularDegenerate => "singular-degenerate",
        }
    }
}

/// Particle and antiparticle spinors at one momentum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinorFamily {
    pub kind: FamilyKind,
    pub momentum: Momentum,
    pub particles: Vec<Spinor>,
    pub antiparticles: Vec<Spinor>,
}

impl SpinorFamily {
    pub fn members(&self) -> impl Iterator<Item = &Spinor> {
        self.particles.iter().chain(self.antiparticles.iter())
    }
}

/// Phases `(a, b, c, d)` multiplying the octet's four particle-type members.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OctetPhases(#[serde(with = "crate::algebra::complex_pairs")] pub [C64; 4]);

#[derive(Debug, Deserialize)]
struct OctetFixture {
    version: u32,
    phases: Vec<[f64; 2]>,
}

const OCTET_FIXTURE: &str = include_str!("../fixtures/octet_phases.json");

impl OctetPhases {
    /// The pinned outcome of the phase search, read from the fixture file.
    pub fn pinned() -> OctetPhases {
        let f: OctetFixture = serde_json::from_str(OCTET_FIXTURE).expect("octet fixture parses");
        assert_eq!(f.version, 1, "unsupported octet fixture version");
        let mut ph = [ZERO; 4];
        for (o, p) in ph.iter_mut().zip(f.phases.iter()) {
            *o = C64::new(p[0], p[1]);
        }
        OctetPhases(ph)
    }

    /// All 256 assignments from `{1, i, -1, -i}⁴` in lexicographic order.
    pub fn candidates() -> Vec<OctetPhases> {
        let units = [ONE, I, -ONE, -I];
        let mut out = Vec::with_capacity(256);
        for a in units {
            for b in units {
                for c in units {
                    for d in units {
                        out.push(OctetPhases([a, b, c, d]));
                    }
                }
            }
        }
        out
    }
}

/// Octet with explicit phases. Particle-type members are
/// `(a λ^S₊, b λ^S₋, c λ^A₊, d λ^A₋)`; antiparticle-type members swap the
/// self and anti-self roles under the same phases.
pub fn octet_with_phases(p: &Momentum, ph: OctetPhases) -> SpinorFamily {
    let s = [elko(p, ElkoType::SelfConjugate, Spin::Up), elko(p, ElkoType::SelfConjugate, Spin::Down)];
    let a = [elko(p, ElkoType::AntiSelfConjugate, Spin::Up), elko(p, ElkoType::AntiSelfConjugate, Spin::Down)];
    let pick = |first: &[Spinor; 2], second: &[Spinor; 2], particle: bool| -> Vec<Spinor> {
        [first[0], first[1], second[0], second[1]]
            .iter()
            .enumerate()
            .map(|(k, sp)| Spinor::new(vec_scale(&sp.components, ph.0[k]), SpinorKind::Octet { particle, slot: k as u8 }))
            .collect()
    };
    SpinorFamily {
        kind: FamilyKind::SingularDegenerate,
        momentum: *p,
        particles: pick(&s, &a, true),
        antiparticles: pick(&a, &s, false),
    }
}

/// The eight-member singular family with the pinned phases.
pub fn elko_degenerate_octet(p: &Momentum) -> SpinorFamily {
    octet_with_phases(p, OctetPhases::pinned())
}

/// Builds the family of `kind` at `p`.
pub fn family(kind: FamilyKind, p: &Momentum) -> SpinorFamily {
    match kind {
        FamilyKind::Regular => SpinorFamily {
            kind,
            momentum: *p,
            particles: Spin::BOTH.iter().map(|h| dirac_u(p, *h)).collect(),
            antiparticles: Spin::BOTH.iter().map(|h| dirac_v(p, *h)).collect(),
        },
        FamilyKind::Singular => SpinorFamily {
            kind,
            momentum: *p,
            particles: Spin::BOTH.iter().map(|h| elko(p, ElkoType::SelfConjugate, *h)).collect(),
            antiparticles: Spin::BOTH.iter().map(|h| elko(p, ElkoType::AntiSelfConjugate, *h)).collect(),
        },
        FamilyKind::SingularDegenerate => elko_degenerate_octet(p),
    }
}

/// i.i.d. complex Gaussian components, redrawn while `‖ψ‖ < 1e-6`.
pub fn random_spinor_with<R: Rng + ?Sized>(rng: &mut R) -> Spinor {
    loop {
        let mut c = [ZERO; 4];
        for z in c.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *z = C64::new(re, im);
        }
        if vec_norm(&c) >= 1e-6 {
            return Spinor::new(c, SpinorKind::Random);
        }
    }
}

pub fn random_spinor(seed: u64) -> Spinor {
    random_spinor_with(&mut crate::rng::stream(seed, 0))
}
