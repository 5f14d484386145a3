//! Charge conjugation, parity and time reversal as possibly antilinear
//! operators on four-component spinors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{vec_conj, Matrix4, Vec4, C64};
use crate::clifford::{epsilon, gamma, gamma_upper};
use crate::momentum::Momentum;

/// An operator `ψ ↦ M ψ` or, when antilinear, `ψ ↦ M ψ*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymOperator {
    pub matrix: Matrix4,
    pub antilinear: bool,
    pub label: String,
}

impl SymOperator {
    pub fn new(matrix: Matrix4, antilinear: bool, label: impl Into<String>) -> Self {
        SymOperator { matrix, antilinear, label: label.into() }
    }

    pub fn linear(matrix: Matrix4, label: impl Into<String>) -> Self {
        Self::new(matrix, false, label)
    }

    pub fn identity() -> Self {
        Self::linear(Matrix4::identity(), "1")
    }

    pub fn apply(&self, psi: &Vec4) -> Vec4 {
        if self.antilinear {
            self.matrix.mul_vec(&vec_conj(psi))
        } else {
            self.matrix.mul_vec(psi)
        }
    }

    pub fn scaled(&self, s: C64, label: impl Into<String>) -> Self {
        Self::new(self.matrix * s, self.antilinear, label)
    }

    pub fn negated(&self) -> Self {
        Self::new(-self.matrix, self.antilinear, format!("-{}", self.label))
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same action up to `tol`, antilinearity included.
    pub fn approx_eq(&self, other: &SymOperator, tol: f64) -> bool {
        self.antilinear == other.antilinear && self.matrix.approx_eq(&other.matrix, tol)
    }
}

/// `a ∘ b`: matrix `A B` when `a` is linear, `A B*` when antilinear.
pub fn compose(a: &SymOperator, b: &SymOperator) -> SymOperator {
    let rhs = if a.antilinear { b.matrix.conj() } else { b.matrix };
    SymOperator::new(a.matrix * rhs, a.antilinear ^ b.antilinear, format!("{}{}", a.label, b.label))
}

/// `𝒞 = γ2 K`.
pub fn charge_conjugation() -> SymOperator {
    SymOperator::new(gamma(2).unwrap(), true, "C")
}

/// `𝒫 = γ_μ p^μ / m`; `γ0` at rest.
pub fn parity(p: &Momentum) -> SymOperator {
    SymOperator::linear(p.slash() * (1.0 / p.mass), "P")
}

/// `𝒯 = -(1/4!) ε_{αβρσ} γ^α γ^β γ^ρ γ^σ 𝒞`, summed over all permutations.
pub fn time_reversal() -> SymOperator {
    let mut s = Matrix4::zero();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let e = epsilon(a, b, c, d);
                    if e != 0 {
                        let prod = gamma_upper(a).unwrap() * gamma_upper(b).unwrap() * gamma_upper(c).unwrap() * gamma_upper(d).unwrap();
                        s += prod * e as f64;
                    }
                }
            }
        }
    }
    let prefactor = SymOperator::linear(s * (-1.0 / 24.0), "");
    compose(&prefactor, &charge_conjugation()).relabel("T")
}

/// The eight discrete operators heading Tables III to V.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Discrete {
    One,
    P,
    C,
    T,
    CP,
    CT,
    PT,
    CPT,
}

impl Discrete {
    pub const ALL: [Discrete; 8] =
        [Discrete::One, Discrete::P, Discrete::C, Discrete::T, Discrete::CP, Discrete::CT, Discrete::PT, Discrete::CPT];

    /// ASCII label, also accepted by [`Discrete::parse`].
    pub fn ascii(&self) -> &'static str {
        match self {
            Discrete::One => "1",
            Discrete::P => "P",
            Discrete::C => "C",
            Discrete::T => "T",
            Discrete::CP => "CP",
            Discrete::CT => "CT",
            Discrete::PT => "PT",
            Discrete::CPT => "CPT",
        }
    }

    /// Typeset label as printed in the tables.
    pub fn symbol(&self) -> &'static str {
        match self {
            Discrete::One => "𝟙",
            Discrete::P => "𝒫",
            Discrete::C => "𝒞",
            Discrete::T => "𝒯",
            Discrete::CP => "𝒞𝒫",
            Discrete::CT => "𝒞𝒯",
            Discrete::PT => "𝒫𝒯",
            Discrete::CPT => "𝒞𝒫𝒯",
        }
    }

    pub fn parse(s: &str) -> Option<Discrete> {
        let t = s.trim();
        Discrete::ALL
            .into_iter()
            .find(|d| d.ascii().eq_ignore_ascii_case(t) || d.symbol() == t || (t == "I" && *d == Discrete::One))
    }

    /// Concrete operator at momentum `p` (only `𝒫` depends on it).
    pub fn operator(&self, p: &Momentum) -> SymOperator {
        let c = charge_conjugation();
        let pp = parity(p);
        let t = time_reversal();
        let op = match self {
            Discrete::One => SymOperator::identity(),
            Discrete::P => pp,
            Discrete::C => c,
            Discrete::T => t,
            Discrete::CP => compose(&c, &pp),
            Discrete::CT => compose(&c, &t),
            Discrete::PT => compose(&pp, &t),
            Discrete::CPT => compose(&compose(&c, &pp), &t),
        };
        op.relabel(self.ascii())
    }
}

impl fmt::Display for Discrete {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `±` one of the eight basic operators, or an unidentified product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RelationEntry {
    Signed { sign: i8, op: Discrete },
    Raw(SymOperator),
}

impl RelationEntry {
    pub fn signed(sign: i8, op: Discrete) -> Self {
        RelationEntry::Signed { sign, op }
    }

    pub fn render(&self) -> String {
        match self {
            RelationEntry::Signed { sign, op } => {
                if *sign < 0 {
                    format!("-{}", op.symbol())
                } else {
                    op.symbol().to_string()
                }
            }
            RelationEntry::Raw(op) => format!("raw({})", op.label),
        }
    }
}

/// Products `row · col` of the eight basic operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationTable {
    pub momentum: Momentum,
    pub entries: Vec<Vec<RelationEntry>>,
}

impl RelationTable {
    pub fn get(&self, row: Discrete, col: Discrete) -> &RelationEntry {
        &self.entries[row as usize][col as usize]
    }
}

/// Identifies `op` as `±` a basic operator at momentum `p`. Signs are
/// significant; no phase other than `±1` is absorbed.
pub fn identify(op: &SymOperator, p: &Momentum, tol: f64) -> RelationEntry {
    for d in Discrete::ALL {
        let basic = d.operator(p);
        if basic.antilinear != op.antilinear {
            continue;
        }
        if op.matrix.approx_eq(&basic.matrix, tol) {
            return RelationEntry::signed(1, d);
        }
        if op.matrix.approx_eq(&-basic.matrix, tol) {
            return RelationEntry::signed(-1, d);
        }
    }
    RelationEntry::Raw(op.clone())
}

/// The 8×8 composition table at momentum `p`.
pub fn relation_table(p: &Momentum) -> RelationTable {
    let ops: Vec<SymOperator> = Discrete::ALL.iter().map(|d| d.operator(p)).collect();
    let scale = ops.iter().map(|o| o.matrix.max_abs()).fold(1.0, f64::max);
    let tol = crate::tolerance::TAU_ZERO * scale * scale;
    let entries = ops
        .iter()
        .map(|a| ops.iter().map(|b| identify(&compose(a, b), p, tol)).collect())
        .collect();
    RelationTable { momentum: *p, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{vec_scale, I, ONE};
    use crate::tolerance::TAU_ZERO;

    fn rest() -> Momentum {
        Momentum::rest(1.0).unwrap()
    }

    fn close(a: &Vec4, b: &Vec4) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    #[test]
    fn c_on_real_spinor_is_gamma2() {
        let e1: Vec4 = [ONE, C64::default(), C64::default(), C64::default()];
        let c = charge_conjugation();
        assert!(close(&c.apply(&e1), &gamma(2).unwrap().mul_vec(&e1)));
        let psi: Vec4 = [C64::new(0.3, 1.0), C64::new(-2.0, 0.5), C64::new(0.0, -1.0), C64::new(1.5, 0.25)];
        assert!(close(&c.apply(&vec_scale(&psi, I)), &vec_scale(&c.apply(&psi), -I)));
        assert!(close(&c.apply(&c.apply(&psi)), &psi));
    }

    #[test]
    fn parity_at_rest_is_gamma0() {
        assert!(parity(&rest()).matrix.approx_eq(&gamma(0).unwrap(), TAU_ZERO));
        let p = Momentum::on_shell(1.0, [0.4, 0.1, -0.3]).unwrap();
        let pp = parity(&p);
        assert!(compose(&pp, &pp).matrix.approx_eq(&Matrix4::identity(), 1e-12));
        let p2 = Momentum::on_shell(2.0, p.p).unwrap();
        assert!(parity(&p2).matrix.approx_eq(&(p2.slash() * 0.5), 1e-12));
    }

    #[test]
    fn time_reversal_explicit_matrix() {
        let t = time_reversal();
        assert!(t.antilinear);
        let expected = Matrix4::from_real([
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
        ]);
        assert!(t.matrix.approx_eq(&expected, TAU_ZERO), "{:?}", t.matrix);
        assert!(compose(&t, &t).matrix.approx_eq(&-Matrix4::identity(), TAU_ZERO));
    }

    #[test]
    fn commutation_relations() {
        for p in [rest(), Momentum::on_shell(1.0, [0.7, -1.1, 0.2]).unwrap()] {
            let (c, pp, t) = (charge_conjugation(), parity(&p), time_reversal());
            assert!((compose(&c, &pp).matrix + compose(&pp, &c).matrix).max_abs() < 1e-12);
            assert!((compose(&c, &t).matrix - compose(&t, &c).matrix).max_abs() < 1e-12);
            assert!((compose(&pp, &t).matrix - compose(&t, &pp).matrix).max_abs() < 1e-12);
        }
    }

    #[test]
    fn antilinearity_flags() {
        let p = rest();
        let anti: Vec<Discrete> = Discrete::ALL.into_iter().filter(|d| d.operator(&p).antilinear).collect();
        assert_eq!(anti, vec![Discrete::C, Discrete::T, Discrete::CP, Discrete::PT]);
    }

    #[test]
    fn compose_with_identity() {
        let t = time_reversal();
        assert!(compose(&t, &SymOperator::identity()).approx_eq(&t, 0.0));
        assert!(compose(&SymOperator::identity(), &t).approx_eq(&t, 0.0));
    }

    #[test]
    fn selected_relations() {
        let tab = relation_table(&rest());
        assert_eq!(tab.get(Discrete::P, Discrete::C), &RelationEntry::signed(-1, Discrete::CP));
        assert_eq!(tab.get(Discrete::T, Discrete::P), &RelationEntry::signed(1, Discrete::PT));
        assert_eq!(tab.get(Discrete::CPT, Discrete::CPT), &RelationEntry::signed(1, Discrete::One));
        assert_eq!(tab.get(Discrete::T, Discrete::T), &RelationEntry::signed(-1, Discrete::One));
    }

    #[test]
    fn parse_labels() {
        assert_eq!(Discrete::parse("cpt"), Some(Discrete::CPT));
        assert_eq!(Discrete::parse("I"), Some(Discrete::One));
        assert_eq!(Discrete::parse("𝒞𝒯"), Some(Discrete::CT));
        assert_eq!(Discrete::parse("X"), None);
    }
}
