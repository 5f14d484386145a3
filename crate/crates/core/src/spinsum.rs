//! Spin sums, the propagator core and covariance fits.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{outer, Matrix4, C64};
use crate::clifford::gamma5;
use crate::dual::{dual, DualOperator};
use crate::error::{Error, Result};
use crate::momentum::Momentum;
use crate::spinor::{family, octet_with_phases, FamilyKind, OctetPhases, Spinor};
use crate::symmetry::Discrete;

/// `Σ ψ ¬ψ` over `members`.
pub fn spin_sum<'a>(members: impl IntoIterator<Item = &'a Spinor>, delta: &DualOperator) -> Result<Matrix4> {
    let mut n = 0;
    let mut acc = Matrix4::zero();
    for psi in members {
        acc = acc + outer(&psi.components, &dual(psi, delta));
        n += 1;
    }
    if n == 0 {
        return Err(Error::InvalidArgument("spin sum over an empty family".into()));
    }
    Ok(acc)
}

/// Particle-type spin sum of `kind` at `p` with `Δ = d` evaluated at `p`.
pub fn family_spin_sum(kind: FamilyKind, d: Discrete, p: &Momentum) -> Result<Matrix4> {
    spin_sum(&family(kind, p).particles, &DualOperator::from_discrete(d, p))
}

/// How particle and antiparticle sums are weighted in `𝒮(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EnergyWeighting {
    /// `½[Σ_S(p) + Σ_A(-p)]`.
    Symmetric,
    /// `(1/2E)[(p0 + E) Σ_S(p) + (p0 - E) Σ_A(-p)]` at the given `p0`.
    OffShell(f64),
}

impl EnergyWeighting {
    fn weights(&self, energy: f64) -> (f64, f64) {
        match self {
            EnergyWeighting::Symmetric => (0.5, 0.5),
            EnergyWeighting::OffShell(p0) => ((p0 + energy) / (2.0 * energy), (p0 - energy) / (2.0 * energy)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagatorCore {
    pub s_of_p: Matrix4,
    pub momentum: Momentum,
    pub weighting: EnergyWeighting,
}

/// `𝒮(p)` from explicit sums: particles and `Δ` at `p`, antiparticles and
/// `Δ` at `-p`.
pub fn propagator_core_from(
    particles: &[Spinor],
    antiparticles_reflected: &[Spinor],
    delta_p: &DualOperator,
    delta_reflected: &DualOperator,
    p: &Momentum,
    weighting: EnergyWeighting,
) -> Result<PropagatorCore> {
    let (ws, wa) = weighting.weights(p.energy);
    let s = spin_sum(particles, delta_p)? * ws + spin_sum(antiparticles_reflected, delta_reflected)? * wa;
    Ok(PropagatorCore { s_of_p: s, momentum: *p, weighting })
}

pub fn propagator_core(kind: FamilyKind, d: Discrete, p: &Momentum, weighting: EnergyWeighting) -> Result<PropagatorCore> {
    let q = p.reflected();
    propagator_core_from(
        &family(kind, p).particles,
        &family(kind, &q).antiparticles,
        &DualOperator::from_discrete(d, p),
        &DualOperator::from_discrete(d, &q),
        p,
        weighting,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CovarianceVerdict {
    Covariant,
    CovariantStar,
    NonCovariant,
}

impl CovarianceVerdict {
    pub fn mark(&self) -> &'static str {
        match self {
            CovarianceVerdict::Covariant => "✓",
            CovarianceVerdict::CovariantStar => "✓*",
            CovarianceVerdict::NonCovariant => "✗",
        }
    }

    pub fn ascii(&self) -> &'static str {
        match self {
            CovarianceVerdict::Covariant => "ok",
            CovarianceVerdict::CovariantStar => "ok*",
            CovarianceVerdict::NonCovariant => "x",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "✓" | "ok" => Some(CovarianceVerdict::Covariant),
            "✓*" | "ok*" => Some(CovarianceVerdict::CovariantStar),
            "✗" | "x" | "X" => Some(CovarianceVerdict::NonCovariant),
            _ => None,
        }
    }
}

impl fmt::Display for CovarianceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mark())
    }
}

/// Coefficients of `a𝟙 + bγ5 + cγ·p + dγ5γ·p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitCoefficients {
    #[serde(with = "crate::algebra::complex_pair")]
    pub a: C64,
    #[serde(with = "crate::algebra::complex_pair")]
    pub b: C64,
    #[serde(with = "crate::algebra::complex_pair")]
    pub c: C64,
    #[serde(with = "crate::algebra::complex_pair")]
    pub d: C64,
}

impl FitCoefficients {
    /// Magnitudes with `a`, `b` divided by the mass so all four are
    /// dimensionless.
    fn normalized(&self, mass: f64) -> [f64; 4] {
        [self.a.norm() / mass, self.b.norm() / mass, self.c.norm(), self.d.norm()]
    }

    pub fn evaluate(&self, p: &Momentum) -> Matrix4 {
        let sl = p.slash();
        let g5 = gamma5();
        Matrix4::identity() * self.a + g5 * self.b + sl * self.c + (g5 * sl) * self.d
    }

    pub fn render(&self) -> String {
        let f = |z: C64| format!("({:+.6}{:+.6}i)", z.re, z.im);
        format!("{}·1 + {}·g5 + {}·pslash + {}·g5 pslash", f(self.a), f(self.b), f(self.c), f(self.d))
    }
}

/// Which footnote shape a starred fit takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StarForm {
    /// `k(γ·p ± mγ5)`.
    SlashPmMassGamma5 { sign: i8 },
    /// `k(γ5γ·p ± mγ5)`.
    Gamma5SlashPmMassGamma5 { sign: i8 },
    /// `±k·mγ5` alone.
    MassGamma5,
    /// `k·γ5γ·p` alone.
    Gamma5Slash,
    Other,
}

impl StarForm {
    pub fn describe(&self) -> String {
        match self {
            StarForm::SlashPmMassGamma5 { sign } => format!("k(pslash {} m g5)", if *sign > 0 { "+" } else { "-" }),
            StarForm::Gamma5SlashPmMassGamma5 { sign } => format!("k(g5 pslash {} m g5)", if *sign > 0 { "+" } else { "-" }),
            StarForm::MassGamma5 => "k m g5".into(),
            StarForm::Gamma5Slash => "k g5 pslash".into(),
            StarForm::Other => "other".into(),
        }
    }
}

/// Shape of a fit, with coefficients below `tol` (relative to the largest)
/// treated as zero.
pub fn star_form(c: &FitCoefficients, mass: f64, tol: f64) -> StarForm {
    let n = c.normalized(mass);
    let top = n.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return StarForm::Other;
    }
    let nz = n.map(|x| x > tol * top);
    let ratio_sign = |num: C64, den: C64| -> Option<i8> {
        let r = num / (den * mass);
        if (r - C64::new(1.0, 0.0)).norm() <= tol.sqrt() {
            Some(1)
        } else if (r + C64::new(1.0, 0.0)).norm() <= tol.sqrt() {
            Some(-1)
        } else {
            None
        }
    };
    match nz {
        [false, true, true, false] => ratio_sign(c.b, c.c).map(|sign| StarForm::SlashPmMassGamma5 { sign }).unwrap_or(StarForm::Other),
        [false, true, false, true] => ratio_sign(c.b, c.d).map(|sign| StarForm::Gamma5SlashPmMassGamma5 { sign }).unwrap_or(StarForm::Other),
        [false, true, false, false] => StarForm::MassGamma5,
        [false, false, false, true] => StarForm::Gamma5Slash,
        _ => StarForm::Other,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinSumReport {
    pub label: String,
    pub probes: Vec<Momentum>,
    pub sums: Vec<Matrix4>,
    pub coefficients: FitCoefficients,
    /// `‖A x - b‖ / ‖b‖` over all probes.
    pub residual: f64,
    pub verdict: CovarianceVerdict,
    pub star_form: Option<StarForm>,
}

/// Joint least-squares fit of the sums to `a𝟙 + bγ5 + cγ·p + dγ5γ·p`.
pub fn fit_covariant(probes: &[Momentum], sums: &[Matrix4]) -> Result<(FitCoefficients, f64)> {
    if probes.len() < 2 || probes.len() != sums.len() {
        return Err(Error::InvalidArgument("need at least two probes with one sum each".into()));
    }
    let rows = 16 * probes.len();
    let g5 = gamma5();
    let mut a = DMatrix::<C64>::zeros(rows, 4);
    let mut b = DVector::<C64>::zeros(rows);
    for (k, (p, s)) in probes.iter().zip(sums).enumerate() {
        let sl = p.slash();
        let basis = [Matrix4::identity(), g5, sl, g5 * sl];
        for e in 0..16 {
            let (r, c) = (e / 4, e % 4);
            for (j, m) in basis.iter().enumerate() {
                a[(16 * k + e, j)] = m[(r, c)];
            }
            b[16 * k + e] = s[(r, c)];
        }
    }
    let bn = b.norm();
    if bn == 0.0 {
        let z = C64::new(0.0, 0.0);
        return Ok((FitCoefficients { a: z, b: z, c: z, d: z }, 0.0));
    }
    let x = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))?;
    let residual = (&a * &x - &b).norm() / bn;
    Ok((FitCoefficients { a: x[0], b: x[1], c: x[2], d: x[3] }, residual))
}

/// Fits the spin sums produced by `sum_at` at every probe and assigns a
/// verdict. A residual above `tol` is non-covariant; otherwise nonzero `b`
/// or `d` gives a star.
pub fn covariance_analysis_with(label: impl Into<String>, probes: &[Momentum], tol: f64, sum_at: impl Fn(&Momentum) -> Result<Matrix4>) -> Result<SpinSumReport> {
    let sums = probes.iter().map(&sum_at).collect::<Result<Vec<_>>>()?;
    let (coefficients, residual) = fit_covariant(probes, &sums)?;
    let mass = probes[0].mass;
    let verdict = if residual > tol {
        CovarianceVerdict::NonCovariant
    } else {
        let n = coefficients.normalized(mass);
        let top = n.iter().cloned().fold(0.0, f64::max);
        if n[1] > tol * top || n[3] > tol * top {
            CovarianceVerdict::CovariantStar
        } else {
            CovarianceVerdict::Covariant
        }
    };
    let star = (verdict == CovarianceVerdict::CovariantStar).then(|| star_form(&coefficients, mass, tol));
    Ok(SpinSumReport { label: label.into(), probes: probes.to_vec(), sums, coefficients, residual, verdict, star_form: star })
}

pub fn covariance_analysis(kind: FamilyKind, d: Discrete, probes: &[Momentum], tol: f64) -> Result<SpinSumReport> {
    covariance_analysis_with(format!("{}/{}", kind.name(), d.ascii()), probes, tol, |p| family_spin_sum(kind, d, p))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TableVCell {
    Verdict { verdict: CovarianceVerdict, residual: f64, star_form: Option<StarForm>, fit: String },
    Error(String),
}

impl TableVCell {
    pub fn verdict(&self) -> Option<CovarianceVerdict> {
        match self {
            TableVCell::Verdict { verdict, .. } => Some(*verdict),
            TableVCell::Error(_) => None,
        }
    }

    pub fn mark(&self) -> String {
        self.verdict().map(|v| v.mark().to_string()).unwrap_or_else(|| "error".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableV {
    pub probes: Vec<Momentum>,
    /// Indexed `[dual][family]` in `Discrete::ALL` and `FamilyKind::ALL` order.
    pub cells: Vec<Vec<TableVCell>>,
}

impl TableV {
    pub fn cell(&self, d: Discrete, kind: FamilyKind) -> &TableVCell {
        let k = FamilyKind::ALL.iter().position(|x| *x == kind).unwrap();
        &self.cells[d as usize][k]
    }
}

pub fn table_v(probes: &[Momentum], tol: f64) -> TableV {
    let cells = Discrete::ALL
        .par_iter()
        .map(|d| {
            FamilyKind::ALL
                .iter()
                .map(|k| match covariance_analysis(*k, *d, probes, tol) {
                    Ok(r) => TableVCell::Verdict { verdict: r.verdict, residual: r.residual, star_form: r.star_form, fit: r.coefficients.render() },
                    Err(e) => TableVCell::Error(e.to_string()),
                })
                .collect()
        })
        .collect();
    TableV { probes: probes.to_vec(), cells }
}

/// Acceptance rule for the octet phase search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseCriterion {
    /// Octet spin sums covariant (starred or not) for all eight duals.
    AllDualsCovariant,
    /// Octet spin sum for `Δ = 𝒞𝒯` equals `-iγ·p`.
    MatchesCtSum,
}

fn phases_pass(ph: OctetPhases, criterion: PhaseCriterion, probes: &[Momentum], tol: f64) -> bool {
    match criterion {
        PhaseCriterion::AllDualsCovariant => Discrete::ALL.iter().all(|d| {
            covariance_analysis_with("octet", probes, tol, |p| spin_sum(&octet_with_phases(p, ph).particles, &DualOperator::from_discrete(*d, p)))
                .map(|r| r.verdict != CovarianceVerdict::NonCovariant)
                .unwrap_or(false)
        }),
        PhaseCriterion::MatchesCtSum => probes.iter().all(|p| {
            let s = spin_sum(&octet_with_phases(p, ph).particles, &DualOperator::from_discrete(Discrete::CT, p)).unwrap();
            let target = p.slash() * C64::new(0.0, -1.0);
            (s - target).max_abs() <= tol * target.max_abs()
        }),
    }
}

/// Every assignment from `{1, i, -1, -i}⁴`, in lexicographic order, that
/// meets `criterion`.
pub fn octet_phase_candidates(criterion: PhaseCriterion, probes: &[Momentum], tol: f64) -> Vec<OctetPhases> {
    OctetPhases::candidates().into_par_iter().filter(|ph| phases_pass(*ph, criterion, probes, tol)).collect()
}

/// First assignment meeting `criterion`.
pub fn octet_phase_search(criterion: PhaseCriterion, probes: &[Momentum], tol: f64) -> Result<OctetPhases> {
    OctetPhases::candidates()
        .into_par_iter()
        .find_first(|ph| phases_pass(*ph, criterion, probes, tol))
        .ok_or_else(|| Error::NotFound(format!("no octet phase assignment satisfies {criterion:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::momentum::probe_momenta;
    use crate::tolerance::TAU_FIT;

    fn probes() -> Vec<Momentum> {
        probe_momenta(7, 5, 1.0).unwrap()
    }

    #[test]
    fn dirac_completeness() {
        for p in probes() {
            let s = family_spin_sum(FamilyKind::Regular, Discrete::One, &p).unwrap();
            let want = p.slash() + Matrix4::identity() * p.mass;
            assert!(s.approx_eq(&want, 1e-9), "{s:?}");
        }
    }

    #[test]
    fn empty_family_is_an_error() {
        assert!(spin_sum(&[], &DualOperator::dirac()).is_err());
    }

    #[test]
    fn regular_identity_is_covariant() {
        let r = covariance_analysis(FamilyKind::Regular, Discrete::One, &probes(), TAU_FIT).unwrap();
        assert_eq!(r.verdict, CovarianceVerdict::Covariant);
        assert!((r.coefficients.a - C64::new(1.0, 0.0)).norm() < 1e-9);
        assert!((r.coefficients.c - C64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn singular_ct_is_not_covariant() {
        let r = covariance_analysis(FamilyKind::Singular, Discrete::CT, &probes(), TAU_FIT).unwrap();
        assert_eq!(r.verdict, CovarianceVerdict::NonCovariant);
    }

    #[test]
    fn off_shell_weighting_at_energy_keeps_particles_only() {
        let p = probes()[0];
        let s = propagator_core(FamilyKind::Regular, Discrete::One, &p, EnergyWeighting::OffShell(p.energy)).unwrap();
        let want = family_spin_sum(FamilyKind::Regular, Discrete::One, &p).unwrap();
        assert!(s.s_of_p.approx_eq(&want, 1e-12));
    }

    #[test]
    fn star_form_shapes() {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let f = FitCoefficients { a: z, b: one * 2.0, c: one, d: z };
        assert_eq!(star_form(&f, 2.0, TAU_FIT), StarForm::SlashPmMassGamma5 { sign: 1 });
        let f = FitCoefficients { a: z, b: -one, c: z, d: one };
        assert_eq!(star_form(&f, 1.0, TAU_FIT), StarForm::Gamma5SlashPmMassGamma5 { sign: -1 });
        let f = FitCoefficients { a: z, b: one, c: z, d: z };
        assert_eq!(star_form(&f, 1.0, TAU_FIT), StarForm::MassGamma5);
    }
}
