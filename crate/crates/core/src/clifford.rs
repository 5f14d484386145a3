//! Gamma matrices of Cl(1,3) in the Weyl representation, the 16-element
//! Clifford basis, the Levi-Civita symbol and spinor boosts.
//!
//! The block matrices
//!
//! ```text
//! γ0 = [[0, 1], [1, 0]]      γi = [[0, σi], [-σi, 0]]
//! ```
//!
//! are the lower-index `γ_μ`; upper indices follow from `η = diag(+,-,-,-)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix4, C64, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::momentum::Momentum;

/// Minkowski metric diagonal `η_μμ`.
pub const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

fn pauli(i: usize) -> [[C64; 2]; 2] {
    match i {
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => [[ONE, ZERO], [ZERO, ONE]],
    }
}

fn neg2(a: [[C64; 2]; 2]) -> [[C64; 2]; 2] {
    [[-a[0][0], -a[0][1]], [-a[1][0], -a[1][1]]]
}

const Z2: [[C64; 2]; 2] = [[ZERO, ZERO], [ZERO, ZERO]];

/// Lower-index `γ_μ`.
pub fn gamma(mu: usize) -> Result<Matrix4> {
    match mu {
        0 => Ok(Matrix4::from_blocks(Z2, pauli(0), pauli(0), Z2)),
        1..=3 => Ok(Matrix4::from_blocks(Z2, pauli(mu), neg2(pauli(mu)), Z2)),
        _ => Err(Error::InvalidArgument(format!("spacetime index {mu} outside 0..=3"))),
    }
}

/// Upper-index `γ^μ = η^{μμ} γ_μ`.
pub fn gamma_upper(mu: usize) -> Result<Matrix4> {
    Ok(gamma(mu)? * ETA.get(mu).copied().unwrap_or(1.0))
}

fn g(mu: usize) -> Matrix4 {
    gamma(mu).expect("index in range")
}

/// `γ_{0123} = γ0 γ1 γ2 γ3`.
pub fn gamma0123() -> Matrix4 {
    g(0) * g(1) * g(2) * g(3)
}

/// `γ5 = -i γ_{0123}`, equal to `diag(1, 1, -1, -1)` here.
pub fn gamma5() -> Matrix4 {
    gamma0123() * (-I)
}

/// `½[γ_μ, γ_ν]`.
pub fn sigma_mn(mu: usize, nu: usize) -> Matrix4 {
    g(mu).commutator(&g(nu)) * 0.5
}

/// Labels of the 16 basis elements `{1, γ_μ, γ_μγ_ν (μ<ν), γ_μγ_{0123}, γ_{0123}}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CliffordIndex {
    Scalar,
    Vector(u8),
    Bivector(u8, u8),
    AxialVector(u8),
    Pseudoscalar,
}

impl CliffordIndex {
    pub fn all() -> [CliffordIndex; 16] {
        use CliffordIndex::*;
        [
            Scalar,
            Vector(0),
            Vector(1),
            Vector(2),
            Vector(3),
            Bivector(0, 1),
            Bivector(0, 2),
            Bivector(0, 3),
            Bivector(1, 2),
            Bivector(1, 3),
            Bivector(2, 3),
            AxialVector(0),
            AxialVector(1),
            AxialVector(2),
            AxialVector(3),
            Pseudoscalar,
        ]
    }

    pub fn position(&self) -> usize {
        Self::all().iter().position(|x| x == self).expect("valid index")
    }

    pub fn name(&self) -> String {
        match self {
            CliffordIndex::Scalar => "1".into(),
            CliffordIndex::Vector(m) => format!("g{m}"),
            CliffordIndex::Bivector(m, n) => format!("g{m}{n}"),
            CliffordIndex::AxialVector(m) => format!("g{m}g0123"),
            CliffordIndex::Pseudoscalar => "g0123".into(),
        }
    }
}

/// `Γ_I`. Bivector indices must satisfy `μ < ν ≤ 3`.
pub fn basis_element(idx: CliffordIndex) -> Result<Matrix4> {
    let check = |m: u8| if m < 4 { Ok(m as usize) } else { Err(Error::InvalidArgument(format!("index {m} outside 0..=3"))) };
    Ok(match idx {
        CliffordIndex::Scalar => Matrix4::identity(),
        CliffordIndex::Vector(m) => g(check(m)?),
        CliffordIndex::Bivector(m, n) => {
            if m >= n {
                return Err(Error::InvalidArgument(format!("bivector indices must be ordered, got ({m},{n})")));
            }
            g(check(m)?) * g(check(n)?)
        }
        CliffordIndex::AxialVector(m) => g(check(m)?) * gamma0123(),
        CliffordIndex::Pseudoscalar => gamma0123(),
    })
}

/// `Γ_I⁻¹`; every basis element squares to `±1`.
pub fn basis_inverse(idx: CliffordIndex) -> Result<Matrix4> {
    let b = basis_element(idx)?;
    let sq = (b * b)[(0, 0)];
    Ok(b * (ONE / sq))
}

/// Expansion coefficients over the 16-element basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CliffordCoefficients {
    #[serde(with = "crate::algebra::complex_pairs")]
    pub coeffs: [C64; 16],
}

impl CliffordCoefficients {
    pub fn get(&self, idx: CliffordIndex) -> C64 {
        self.coeffs[idx.position()]
    }

    pub fn reconstruct(&self) -> Matrix4 {
        CliffordIndex::all()
            .iter()
            .zip(self.coeffs.iter())
            .fold(Matrix4::zero(), |acc, (i, c)| acc + basis_element(*i).unwrap() * *c)
    }
}

/// `c_I = tr(Γ_I⁻¹ M) / 4`.
pub fn decompose(m: &Matrix4) -> CliffordCoefficients {
    let mut coeffs = [ZERO; 16];
    for (k, idx) in CliffordIndex::all().iter().enumerate() {
        coeffs[k] = (basis_inverse(*idx).unwrap() * *m).trace() / 4.0;
    }
    CliffordCoefficients { coeffs }
}

/// Lower-index Levi-Civita symbol with `ε_{0123} = +1`.
pub fn epsilon(a: usize, b: usize, c: usize, d: usize) -> i32 {
    let idx = [a, b, c, d];
    if idx.iter().any(|&x| x > 3) {
        return 0;
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if idx[i] == idx[j] {
                return 0;
            }
        }
    }
    let mut sign = 1;
    for i in 0..4 {
        for j in i + 1..4 {
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Upper-index `ε^{abcd}`; raising all four indices flips the sign.
pub fn epsilon_upper(a: usize, b: usize, c: usize, d: usize) -> i32 {
    -epsilon(a, b, c, d)
}

/// Boost generator `K_i = ½ diag(σ_i, -σ_i)` in the spinor representation.
pub fn boost_generator(i: usize) -> Result<Matrix4> {
    if !(1..=3).contains(&i) {
        return Err(Error::InvalidArgument(format!("spatial index {i} outside 1..=3")));
    }
    let s = pauli(i);
    Ok(Matrix4::from_blocks(s, Z2, Z2, neg2(s)) * 0.5)
}

/// Boost `κ(p) = exp(φ p̂·K)` taking rest-frame spinors to momentum `p`:
/// `diag(E+m+σ·p, E+m-σ·p) / √(2m(E+m))`.
pub fn boost(p: &Momentum) -> Matrix4 {
    let (e, m) = (p.energy, p.mass);
    let norm = 1.0 / (2.0 * m * (e + m)).sqrt();
    let sp = (1..=3).fold([[ZERO; 2]; 2], |acc, i| {
        let s = pauli(i);
        let mut out = acc;
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] += s[r][c] * p.p[i - 1];
            }
        }
        out
    });
    let em = C64::new(e + m, 0.0);
    let plus = [[em + sp[0][0], sp[0][1]], [sp[1][0], em + sp[1][1]]];
    let minus = [[em - sp[0][0], -sp[0][1]], [-sp[1][0], em - sp[1][1]]];
    Matrix4::from_blocks(plus, Z2, Z2, minus) * norm
}

/// Boost along unit direction `n` with rapidity `phi`, via the closed form
/// `cosh(φ/2) + 2 sinh(φ/2) n·K`.
pub fn boost_rapidity(n: [f64; 3], phi: f64) -> Matrix4 {
    let nk = (1..=3).fold(Matrix4::zero(), |acc, i| acc + boost_generator(i).unwrap() * n[i - 1]);
    Matrix4::identity() * (phi / 2.0).cosh() + nk * (2.0 * (phi / 2.0).sinh())
}

/// Extra condition imposed on `η` besides `{K_i, η} = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EtaReality {
    /// All entries real.
    RealEntries,
    /// `η = η†`.
    Hermitian,
}

/// Real basis of the solution space of the metric conditions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EtaSolution {
    pub reality: EtaReality,
    pub parity: bool,
    pub basis: Vec<Matrix4>,
}

impl EtaSolution {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Whether `m` lies in the real span of the basis, to `tol`.
    pub fn contains(&self, m: &Matrix4, tol: f64) -> bool {
        let cols: Vec<Vec<f64>> = self.basis.iter().map(realify).collect();
        let target = realify(m);
        let a = DMatrix::from_fn(32, cols.len().max(1), |r, c| cols.get(c).map_or(0.0, |v| v[r]));
        let b = nalgebra::DVector::from_vec(target.clone());
        let svd = a.clone().svd(true, true);
        let x = match svd.solve(&b, 1e-12) {
            Ok(x) => x,
            Err(_) => return false,
        };
        ((a * x) - b).amax() <= tol * target.iter().fold(1.0f64, |acc, v| acc.max(v.abs()))
    }
}

fn realify(m: &Matrix4) -> Vec<f64> {
    m.flat().iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Solves `{K_i, η} = 0` for `i = 1, 2, 3` over the 16-dimensional matrix
/// space, together with the chosen reality condition and, optionally, the
/// parity condition `γ0 η γ0 = η`. Returns a real basis in reduced
/// row-echelon form.
pub fn derive_eta(reality: EtaReality, parity: bool) -> EtaSolution {
    // Real parameterisation of the admissible matrices.
    let generators: Vec<Matrix4> = match reality {
        EtaReality::RealEntries => (0..16)
            .map(|k| Matrix4::from_fn(|i, j| if 4 * i + j == k { ONE } else { ZERO }))
            .collect(),
        EtaReality::Hermitian => {
            let mut v = Vec::new();
            for i in 0..4 {
                for j in i..4 {
                    v.push(Matrix4::from_fn(|r, c| if (r, c) == (i, j) || (r, c) == (j, i) { ONE } else { ZERO }));
                    if i != j {
                        v.push(Matrix4::from_fn(|r, c| {
                            if (r, c) == (i, j) {
                                I
                            } else if (r, c) == (j, i) {
                                -I
                            } else {
                                ZERO
                            }
                        }));
                    }
                }
            }
            v
        }
    };
    let mut maps: Vec<Box<dyn Fn(&Matrix4) -> Matrix4>> = (1..=3)
        .map(|i| {
            let k = boost_generator(i).unwrap();
            Box::new(move |x: &Matrix4| k.anticommutator(x)) as Box<dyn Fn(&Matrix4) -> Matrix4>
        })
        .collect();
    if parity {
        let g0 = g(0);
        maps.push(Box::new(move |x: &Matrix4| g0 * *x * g0 - *x));
    }
    let n = generators.len();
    let rows = 32 * maps.len();
    let mut a = DMatrix::<f64>::zeros(rows, n);
    for (c, gen) in generators.iter().enumerate() {
        for (k, f) in maps.iter().enumerate() {
            let v = realify(&f(gen));
            for (r, x) in v.iter().enumerate() {
                a[(32 * k + r, c)] = *x;
            }
        }
    }
    let null = null_space(&a, 1e-10);
    let basis = rref_rows(null)
        .into_iter()
        .map(|coef| generators.iter().zip(coef.iter()).fold(Matrix4::zero(), |acc, (g, c)| acc + *g * *c))
        .collect();
    EtaSolution { reality, parity, basis }
}

fn null_space(a: &DMatrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    let n = a.ncols();
    // AᵀA keeps the SVD square so the full right singular basis is available.
    let ata = a.transpose() * a;
    let svd = ata.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(1.0);
    (0..n)
        .filter(|&k| svd.singular_values[k] <= tol * smax)
        .map(|k| (0..n).map(|c| vt[(k, c)]).collect())
        .collect()
}

fn rref_rows(mut rows: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows[0].len();
    let mut lead = 0;
    for r in 0..rows.len() {
        let mut pivot = None;
        while lead < ncols {
            let best = (r..rows.len()).max_by(|&x, &y| rows[x][lead].abs().total_cmp(&rows[y][lead].abs())).unwrap();
            if rows[best][lead].abs() > 1e-9 {
                pivot = Some(best);
                break;
            }
            lead += 1;
        }
        let Some(p) = pivot else { break };
        rows.swap(r, p);
        let lv = rows[r][lead];
        for x in rows[r].iter_mut() {
            *x /= lv;
        }
        for k in 0..rows.len() {
            if k != r {
                let f = rows[k][lead];
                if f != 0.0 {
                    for c in 0..ncols {
                        rows[k][c] -= f * rows[r][c];
                    }
                }
            }
        }
        lead += 1;
    }
    for row in rows.iter_mut() {
        for x in row.iter_mut() {
            if x.abs() < 1e-12 {
                *x = 0.0;
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerance::TAU_ZERO;

    #[test]
    fn gamma0_matches_weyl_block() {
        let expected = Matrix4::from_real([
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ]);
        assert_eq!(gamma(0).unwrap(), expected);
        assert!(gamma(4).is_err());
    }

    #[test]
    fn clifford_relation() {
        for mu in 0..4 {
            for nu in 0..4 {
                let ac = g(mu).anticommutator(&g(nu));
                let expect = if mu == nu { Matrix4::identity() * (2.0 * ETA[mu]) } else { Matrix4::zero() };
                assert!(ac.approx_eq(&expect, TAU_ZERO), "mu={mu} nu={nu}");
            }
        }
        assert!((g(1) * g(1)).approx_eq(&-Matrix4::identity(), TAU_ZERO));
        assert!((g(0) * g(0)).approx_eq(&Matrix4::identity(), TAU_ZERO));
    }

    #[test]
    fn gamma5_explicit() {
        let g5 = gamma5();
        assert!((g5 * g5).approx_eq(&Matrix4::identity(), TAU_ZERO));
        assert!((gamma0123() * gamma0123()).approx_eq(&-Matrix4::identity(), TAU_ZERO));
        let d = Matrix4::diag([ONE, ONE, -ONE, -ONE]);
        assert!(g5.approx_eq(&d, TAU_ZERO));
        for mu in 0..4 {
            assert!(g5.anticommutator(&g(mu)).approx_eq(&Matrix4::zero(), TAU_ZERO));
        }
    }

    #[test]
    fn basis_trace_orthogonality() {
        for a in CliffordIndex::all() {
            for b in CliffordIndex::all() {
                let t = (basis_inverse(a).unwrap() * basis_element(b).unwrap()).trace();
                let expect = if a == b { 4.0 } else { 0.0 };
                assert!((t - C64::new(expect, 0.0)).norm() < TAU_ZERO, "{a:?} {b:?}");
            }
        }
        assert!(basis_element(CliffordIndex::Bivector(2, 1)).is_err());
        assert_eq!(basis_element(CliffordIndex::Bivector(0, 1)).unwrap(), g(0) * g(1));
    }

    #[test]
    fn decompose_simple() {
        let c = decompose(&Matrix4::identity());
        assert!((c.get(CliffordIndex::Scalar) - ONE).norm() < TAU_ZERO);
        let c = decompose(&g(2));
        for idx in CliffordIndex::all() {
            let expect = if idx == CliffordIndex::Vector(2) { ONE } else { ZERO };
            assert!((c.get(idx) - expect).norm() < TAU_ZERO);
        }
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon(0, 1, 2, 3), 1);
        assert_eq!(epsilon(0, 1, 2, 2), 0);
        assert_eq!(epsilon(1, 0, 2, 3), -1);
        assert_eq!(epsilon(3, 2, 1, 0), 1);
        assert_eq!(epsilon_upper(0, 1, 2, 3), -1);
    }

    #[test]
    fn boost_generators_anticommute_with_gamma0() {
        for i in 1..=3 {
            let k = boost_generator(i).unwrap();
            assert!(k.anticommutator(&g(0)).approx_eq(&Matrix4::zero(), TAU_ZERO));
        }
        assert!(boost_generator(0).is_err());
    }

    #[test]
    fn rest_boost_is_identity() {
        let p = Momentum::rest(1.7).unwrap();
        assert!(boost(&p).approx_eq(&Matrix4::identity(), TAU_ZERO));
    }

    #[test]
    fn boost_matches_rapidity_form() {
        let p = Momentum::on_shell(1.0, [0.3, -0.4, 1.2]).unwrap();
        let n = p.spatial_norm();
        let phi = (n / p.mass).asinh();
        let dir = [p.p[0] / n, p.p[1] / n, p.p[2] / n];
        assert!(boost(&p).approx_eq(&boost_rapidity(dir, phi), 1e-12));
    }

    #[test]
    fn eta_without_parity_is_block_antidiagonal() {
        let sol = derive_eta(EtaReality::RealEntries, false);
        assert_eq!(sol.dimension(), 2);
        let one2 = [[ONE, ZERO], [ZERO, ONE]];
        let upper = Matrix4::from_blocks(Z2, one2, Z2, Z2);
        let lower = Matrix4::from_blocks(Z2, Z2, one2, Z2);
        assert!(sol.contains(&upper, 1e-9));
        assert!(sol.contains(&lower, 1e-9));
        assert!(sol.contains(&g(0), 1e-9));
        assert!(!sol.contains(&Matrix4::identity(), 1e-9));
    }

    #[test]
    fn eta_with_parity_is_gamma0() {
        for reality in [EtaReality::RealEntries, EtaReality::Hermitian] {
            let sol = derive_eta(reality, true);
            assert_eq!(sol.dimension(), 1);
            assert!(sol.basis[0].approx_eq(&g(0), 1e-9));
        }
    }

    #[test]
    fn eta_hermitian_family() {
        let sol = derive_eta(EtaReality::Hermitian, false);
        assert_eq!(sol.dimension(), 2);
        assert!(sol.contains(&g(0), 1e-9));
        let twisted = Matrix4::from_blocks(Z2, [[I, ZERO], [ZERO, I]], [[-I, ZERO], [ZERO, -I]], Z2);
        assert!(sol.contains(&twisted, 1e-9));
    }
}
