//! Bilinear covariants with a general dual, the FPK identities and the
//! Fierz aggregate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{dot, outer, vec_max_abs, Covec4, Matrix4, C64, I, ZERO};
use crate::clifford::{basis_element, epsilon, gamma, gamma0123, sigma_mn, CliffordIndex, ETA};
use crate::dual::{dual, DualOperator};
use crate::spinor::{random_spinor_with, Spinor};

/// Ordered pairs `μ < ν` used to store antisymmetric tensors.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// `{σ, ω, J_μ, K_μ, S_μν}` with lower indices; `s` holds `S_μν` for `μ < ν`
/// in [`PAIRS`] order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilinearSet {
    #[serde(with = "crate::algebra::complex_pair")]
    pub sigma: C64,
    #[serde(with = "crate::algebra::complex_pair")]
    pub omega: C64,
    #[serde(with = "crate::algebra::complex_pairs")]
    pub j: [C64; 4],
    #[serde(with = "crate::algebra::complex_pairs")]
    pub k: [C64; 4],
    #[serde(with = "crate::algebra::complex_pairs")]
    pub s: [C64; 6],
}

impl BilinearSet {
    pub fn zero() -> Self {
        BilinearSet { sigma: ZERO, omega: ZERO, j: [ZERO; 4], k: [ZERO; 4], s: [ZERO; 6] }
    }

    /// `S_μν` for any index pair.
    pub fn s_at(&self, mu: usize, nu: usize) -> C64 {
        if mu == nu {
            return ZERO;
        }
        let (a, b, sign) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
        let k = PAIRS.iter().position(|&x| x == (a, b)).unwrap();
        self.s[k] * sign
    }

    /// `S^μν`.
    pub fn s_upper(&self, mu: usize, nu: usize) -> C64 {
        self.s_at(mu, nu) * (ETA[mu] * ETA[nu])
    }

    /// `ε_μναβ S^αβ`.
    pub fn s_dual(&self, mu: usize, nu: usize) -> C64 {
        let mut acc = ZERO;
        for a in 0..4 {
            for b in 0..4 {
                let e = epsilon(mu, nu, a, b);
                if e != 0 {
                    acc += self.s_upper(a, b) * e as f64;
                }
            }
        }
        acc
    }

    pub fn is_finite(&self) -> bool {
        std::iter::once(self.sigma)
            .chain(std::iter::once(self.omega))
            .chain(self.j)
            .chain(self.k)
            .chain(self.s)
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest imaginary part across all components.
    pub fn max_imag(&self) -> f64 {
        std::iter::once(self.sigma)
            .chain(std::iter::once(self.omega))
            .chain(self.j)
            .chain(self.k)
            .chain(self.s)
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: C64) -> Self {
        BilinearSet {
            sigma: self.sigma * c,
            omega: self.omega * c,
            j: self.j.map(|z| z * c),
            k: self.k.map(|z| z * c),
            s: self.s.map(|z| z * c),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.sigma
            .norm()
            .max(self.omega.norm())
            .max(vec_max_abs(&self.j))
            .max(vec_max_abs(&self.k))
            .max(vec_max_abs(&self.s))
    }
}

/// Minkowski product `a_μ b^μ`, no conjugation.
pub fn minkowski(a: &[C64; 4], b: &[C64; 4]) -> C64 {
    (0..4).map(|mu| a[mu] * b[mu] * ETA[mu]).sum()
}

/// Bilinears `¬ψ Γ ψ` from an explicit covector `χ`:
/// `σ = χψ`, `ω = -χ γ0123 ψ`, `J_μ = χ γ_μ ψ`, `K_μ = χ iγ0123 γ_μ ψ`,
/// `S_μν = χ i½[γ_μ,γ_ν] ψ`.
pub fn bilinears_from(chi: &Covec4, psi: &[C64; 4]) -> BilinearSet {
    let form = |m: &Matrix4| dot(chi, &m.mul_vec(psi));
    let g5 = gamma0123();
    let mut j = [ZERO; 4];
    let mut k = [ZERO; 4];
    for mu in 0..4 {
        let g = gamma(mu).unwrap();
        j[mu] = form(&g);
        k[mu] = form(&((g5 * g) * I));
    }
    let mut s = [ZERO; 6];
    for (n, (mu, nu)) in PAIRS.iter().enumerate() {
        s[n] = form(&(sigma_mn(*mu, *nu) * I));
    }
    BilinearSet { sigma: dot(chi, psi), omega: -form(&g5), j, k, s }
}

/// The five bilinear covariants of `ψ` under dual `Δ`.
pub fn bilinears(psi: &Spinor, delta: &DualOperator) -> BilinearSet {
    bilinears_from(&dual(psi, delta), &psi.components)
}

/// Residuals of the four identities `J² = σ² + ω²`, `K² = -J²`, `J·K = 0`
/// and `J_μK_ν - K_μJ_ν = -ωS_μν - (σ/2)ε_μναβ S^αβ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FpkReport {
    pub residuals: [f64; 4],
    pub scale: f64,
    pub pass: [bool; 4],
}

impl FpkReport {
    pub const NAMES: [&'static str; 4] = ["J^2 = s^2 + w^2", "K^2 = -J^2", "J.K = 0", "J^K = -(w + s g0123) S"];

    pub fn all_pass(&self) -> bool {
        self.pass.iter().all(|p| *p)
    }

    pub fn worst_relative(&self) -> f64 {
        self.residuals.iter().fold(0.0f64, |a, r| a.max(*r)) / self.scale
    }
}

/// Evaluates the FPK identities. Residuals are divided by
/// `max(|σ|², |ω|², ‖J‖², ‖K‖², ‖S‖², 1e-300)` before comparison with `tol`.
pub fn fpk_check(b: &BilinearSet, tol: f64) -> FpkReport {
    let jj = minkowski(&b.j, &b.j);
    let kk = minkowski(&b.k, &b.k);
    let jk = minkowski(&b.j, &b.k);
    let r1 = (jj - b.sigma * b.sigma - b.omega * b.omega).norm();
    let r2 = (kk + jj).norm();
    let r3 = jk.norm();
    let mut r4: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let lhs = b.j[mu] * b.k[nu] - b.k[mu] * b.j[nu];
            let rhs = -b.omega * b.s_at(mu, nu) - b.sigma * 0.5 * b.s_dual(mu, nu);
            r4 = r4.max((lhs - rhs).norm());
        }
    }
    let sq = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let scale = b
        .sigma
        .norm_sqr()
        .max(b.omega.norm_sqr())
        .max(sq(&b.j))
        .max(sq(&b.k))
        .max(sq(&b.s))
        .max(1e-300);
    let residuals = [r1, r2, r3, r4];
    let pass = residuals.map(|r| r / scale <= tol);
    FpkReport { residuals, scale, pass }
}

/// Probe `X_I` whose trace against `Z` yields `4 × bilinear`, and that
/// bilinear read from `b`.
fn trace_probe(idx: CliffordIndex, b: &BilinearSet) -> (Matrix4, C64) {
    match idx {
        CliffordIndex::Scalar => (Matrix4::identity(), b.sigma),
        CliffordIndex::Vector(m) => (gamma(m as usize).unwrap(), b.j[m as usize]),
        CliffordIndex::Bivector(m, n) => (sigma_mn(m as usize, n as usize) * I, b.s_at(m as usize, n as usize)),
        CliffordIndex::AxialVector(m) => ((gamma0123() * gamma(m as usize).unwrap()) * I, b.k[m as usize]),
        CliffordIndex::Pseudoscalar => (gamma0123(), -b.omega),
    }
}

/// `Z = σ + J + iS + iKγ0123 + ωγ0123`, normalised so that
/// `tr(Z) = 4σ`, `tr(Zγ_μ) = 4J_μ`, `tr(Z iγ_μν) = 4S_μν`,
/// `tr(Z iγ0123γ_μ) = 4K_μ`, `tr(Zγ0123) = -4ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FierzAggregate {
    pub z: Matrix4,
    pub source: BilinearSet,
}

pub fn fierz_aggregate(b: &BilinearSet) -> FierzAggregate {
    let mut z = Matrix4::zero();
    for idx in CliffordIndex::all() {
        let g = basis_element(idx).unwrap();
        let (probe, value) = trace_probe(idx, b);
        let norm = (g * probe).trace();
        z += g * (value * 4.0 / norm);
    }
    FierzAggregate { z, source: *b }
}

/// `4 ψ ¬ψ`, the aggregate built directly from the spinor.
pub fn aggregate_from_spinor(psi: &Spinor, delta: &DualOperator) -> Matrix4 {
    outer(&psi.components, &dual(psi, delta)) * 4.0
}

/// Worst relative residual of the trace identities.
pub fn trace_identities_residual(agg: &FierzAggregate) -> f64 {
    let scale = agg.source.max_abs().max(1e-300);
    CliffordIndex::all()
        .iter()
        .map(|idx| {
            let (probe, value) = trace_probe(*idx, &agg.source);
            ((agg.z * probe).trace() - value * 4.0).norm() / scale
        })
        .fold(0.0, f64::max)
}

/// `‖Z² - 4σZ‖ ≤ tol · ‖Z‖²`.
pub fn boomerang_check(agg: &FierzAggregate, tol: f64) -> bool {
    boomerang_residual(agg) <= tol
}

pub fn boomerang_residual(agg: &FierzAggregate) -> f64 {
    let z = agg.z;
    let scale = (z.max_abs() * z.max_abs()).max(1e-300);
    (z * z - z * (agg.source.sigma * 4.0)).max_abs() / scale
}

/// Residuals of `Z X Z = 4 b_X Z` for the five families of Eqs. `Z² = 4σZ`,
/// `Zγ_μZ = 4J_μZ`, `Z iγ_μν Z = 4S_μν Z`, `Z iγ0123γ_μ Z = 4K_μZ`,
/// `Zγ0123Z = -4ωZ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub residuals: [f64; 5],
    pub pass: [bool; 5],
}

impl AggregateReport {
    pub const NAMES: [&'static str; 5] = ["Z^2 = 4sZ", "Z g_m Z = 4J_m Z", "Z i g_mn Z = 4S_mn Z", "Z i g0123 g_m Z = 4K_m Z", "Z g0123 Z = -4wZ"];

    pub fn all_pass(&self) -> bool {
        self.pass.iter().all(|p| *p)
    }
}

pub fn aggregate_identities_check(agg: &FierzAggregate, tol: f64) -> AggregateReport {
    let z = agg.z;
    let scale = (z.max_abs() * z.max_abs()).max(1e-300);
    let mut residuals = [0.0f64; 5];
    for idx in CliffordIndex::all() {
        let family = match idx {
            CliffordIndex::Scalar => 0,
            CliffordIndex::Vector(_) => 1,
            CliffordIndex::Bivector(..) => 2,
            CliffordIndex::AxialVector(_) => 3,
            CliffordIndex::Pseudoscalar => 4,
        };
        let (probe, value) = trace_probe(idx, &agg.source);
        let r = (z * probe * z - z * (value * 4.0)).max_abs() / scale;
        residuals[family] = residuals[family].max(r);
    }
    AggregateReport { residuals, pass: residuals.map(|r| r <= tol) }
}

/// Worst residuals of the FPK, trace, boomerang and aggregate identities over
/// a corpus of Gaussian spinors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertySuite {
    pub dual: String,
    pub trials: usize,
    pub fpk_worst: f64,
    pub trace_worst: f64,
    pub boomerang_worst: f64,
    pub aggregate_worst: f64,
    /// `max |Z - 4ψ¬ψ| / max|Z|`.
    pub spinor_aggregate_worst: f64,
    pub passed: bool,
}

pub fn property_suite(delta: &DualOperator, trials: usize, seed: u64, tol: f64) -> PropertySuite {
    let rows: Vec<[f64; 5]> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let psi = random_spinor_with(&mut crate::rng::stream(seed, t as u64));
            let b = bilinears(&psi, delta);
            let agg = fierz_aggregate(&b);
            let direct = aggregate_from_spinor(&psi, delta);
            [
                fpk_check(&b, tol).worst_relative(),
                trace_identities_residual(&agg),
                boomerang_residual(&agg),
                aggregate_identities_check(&agg, tol).residuals.iter().cloned().fold(0.0, f64::max),
                (agg.z - direct).max_abs() / direct.max_abs().max(1e-300),
            ]
        })
        .collect();
    let w = rows.iter().fold([0.0f64; 5], |mut acc, r| {
        for (a, x) in acc.iter_mut().zip(r) {
            *a = a.max(*x);
        }
        acc
    });
    PropertySuite {
        dual: delta.label.clone(),
        trials,
        fpk_worst: w[0],
        trace_worst: w[1],
        boomerang_worst: w[2],
        aggregate_worst: w[3],
        spinor_aggregate_worst: w[4],
        passed: w.iter().all(|x| *x <= tol),
    }
}
