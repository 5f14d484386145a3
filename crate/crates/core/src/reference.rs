//! Reference tables and explicit matrices used as comparison targets.

use std::collections::BTreeSet;

use crate::algebra::{Matrix4, C64};
use crate::clifford::gamma5;
use crate::dual::Column;
use crate::momentum::Momentum;
use crate::spinor::FamilyKind;
use crate::spinsum::CovarianceVerdict;
use crate::symmetry::{Discrete, RelationEntry};

use Discrete::*;

/// Operator product table: entry `(row, col)` is `row · col`.
pub fn table_iii(row: Discrete, col: Discrete) -> RelationEntry {
    const TABLE: [[(i8, Discrete); 8]; 8] = [
        [(1, One), (1, P), (1, C), (1, T), (1, CP), (1, CT), (1, PT), (1, CPT)],
        [(1, P), (1, One), (-1, CP), (1, PT), (-1, C), (-1, CPT), (1, T), (-1, CT)],
        [(1, C), (1, CP), (1, One), (1, CT), (1, P), (1, T), (1, CPT), (1, PT)],
        [(1, T), (1, PT), (1, CT), (-1, One), (1, CPT), (-1, C), (-1, P), (-1, CP)],
        [(1, CP), (1, C), (-1, P), (1, CPT), (-1, One), (-1, PT), (1, CT), (-1, T)],
        [(1, CT), (1, CPT), (1, T), (-1, C), (1, PT), (-1, One), (-1, CP), (-1, P)],
        [(1, PT), (1, T), (-1, CPT), (-1, P), (-1, CT), (1, CP), (-1, One), (1, C)],
        [(1, CPT), (1, CT), (-1, PT), (-1, CP), (-1, T), (1, P), (-1, C), (1, One)],
    ];
    let (s, d) = TABLE[row as usize][col as usize];
    RelationEntry::signed(s, d)
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Admitted index set per cell of the dual table. Discrete columns use the
/// empty index; an empty set is a `-` cell.
pub fn table_iv(row: Discrete, col: Column) -> BTreeSet<String> {
    let here = set(&[""]);
    let none = BTreeSet::new();
    match (row, col) {
        (One, Column::Discrete(One | P | C)) => here,
        (One, Column::G0) => here,
        (One, Column::Gi) => set(&["1", "2"]),
        (P, Column::Discrete(One | P)) => here,
        (P, Column::G0) => here,
        (P, Column::G0i) => set(&["1", "2"]),
        (C, Column::Discrete(One | C)) => here,
        (C, Column::Gi) => set(&["2"]),
        (C, Column::Gij) => set(&["12"]),
        (T, Column::Discrete(T)) => here,
        (T, Column::G5) => here,
        (T, Column::G0i) => set(&["3"]),
        (T, Column::G5i) => set(&["2"]),
        (CP, Column::Discrete(CP)) => here,
        (CP, Column::G0) => here,
        (CP, Column::G0i) => set(&["2"]),
        (CP, Column::Gij) => set(&["13"]),
        (CT, Column::Discrete(CT)) => here,
        (CT, Column::G5) => here,
        (CT, Column::G0i) => set(&["5"]),
        (CT, Column::G5i) => set(&["1", "2"]),
        (PT, Column::Discrete(PT)) => here,
        (PT, Column::Gi) => set(&["3"]),
        (PT, Column::G0i) => set(&["2"]),
        (PT, Column::Gij) => set(&["13"]),
        (PT, Column::G5i) => set(&["0"]),
        (CPT, Column::Discrete(CPT)) => here,
        (CPT, Column::G5) => here,
        (CPT, Column::Gij) => set(&["13", "23"]),
        _ => none,
    }
}

/// Spin-sum verdicts by dual and family.
pub fn table_v(row: Discrete, kind: FamilyKind) -> CovarianceVerdict {
    use CovarianceVerdict::{Covariant as Y, CovariantStar as S, NonCovariant as N};
    let r = match row {
        One => [Y, N, Y],
        P => [Y, Y, Y],
        C => [N, N, Y],
        T => [N, N, Y],
        CP => [N, N, Y],
        CT => [S, N, Y],
        PT => [N, N, S],
        CPT => [S, N, S],
    };
    r[FamilyKind::ALL.iter().position(|k| *k == kind).unwrap()]
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `i(mγ5 - γ·p)`, the printed regular spin sum for `Δ = 𝒞𝒯`.
pub fn ct_regular_spin_sum(p: &Momentum) -> Matrix4 {
    (gamma5() * p.mass - p.slash()) * c(0.0, 1.0)
}

/// Printed `𝒮(p)` for regular spinors and `Δ = 𝒞𝒯`.
pub fn ct_core_regular(p: &Momentum) -> Matrix4 {
    let e = p.energy;
    let z = c(0.0, 0.0);
    Matrix4([
        [z, z, c(0.0, -e), z],
        [z, z, z, c(0.0, -e)],
        [c(0.0, e), z, z, z],
        [z, c(0.0, e), z, z],
    ])
}

/// Printed `𝒮(p)` for singular spinors and `Δ = 𝒞𝒯`.
pub fn ct_core_singular(p: &Momentum) -> Matrix4 {
    let e = p.energy;
    let [px, _, pz] = p.p;
    let z = c(0.0, 0.0);
    let r = |x: f64| c(x, 0.0);
    Matrix4([
        [r(-px), r(pz), c(0.0, -e), z],
        [r(pz), r(px), z, c(0.0, -e)],
        [c(0.0, e), z, r(-px), r(pz)],
        [z, c(0.0, e), r(pz), r(px)],
    ])
}

/// Printed singular spin sum for `Δ = 𝒞𝒯`.
pub fn ct_spin_sum_singular(p: &Momentum) -> Matrix4 {
    let (m, e) = (p.mass, p.energy);
    let [px, py, pz] = p.p;
    let d = m + e;
    let i = c(0.0, 1.0);
    let r = |x: f64| c(x, 0.0);
    let p2 = px * px + py * py + pz * pz;
    let big = r(m * m + m * (pz + e) + px * px + py * py + pz * (pz + e));
    Matrix4([
        [
            r(-px / 2.0) - i * (py * pz / (2.0 * d)),
            (r(m + pz + e) - i * px - py) * (r(m + py + pz + e) + i * px) / (4.0 * d),
            -i * big / (2.0 * d),
            -0.5 * i * (r(px) - i * py),
        ],
        [
            -((r(m - py - pz + e) + i * px) * (r(m + py - pz + e) - i * px)) / (4.0 * d),
            0.5 * (r(px) + i * (py * pz / d)),
            0.5 * (r(py) - i * px),
            -0.5 * i * r(p2 / d + m - pz),
        ],
        [
            0.5 * i * r(p2 / d + m - pz),
            -0.5 * i * (r(px) - i * py),
            r(-px / 2.0) + i * (py * pz / (2.0 * d)),
            -((r(m - py - pz + e) - i * px) * (r(m + py - pz + e) + i * px)) / (4.0 * d),
        ],
        [
            0.5 * (r(py) - i * px),
            i * big / (2.0 * d),
            0.5 * ((r(px * px + pz * pz) + i * (px * py)) / d + m + pz),
            0.5 * (r(px) - i * (py * pz / d)),
        ],
    ])
}

/// Printed singular spin sum for `Δ = 𝒯`, with `ε` read as `E`.
pub fn t_spin_sum_singular(p: &Momentum) -> Matrix4 {
    let (m, e) = (p.mass, p.energy);
    let [px, py, pz] = p.p;
    let d = m + e;
    let i = c(0.0, 1.0);
    let r = |x: f64| c(x, 0.0);
    Matrix4([
        [
            r(px) + i * (py * pz / d),
            (r(-m * m - m * pz - m * e - px * px - pz * pz - pz * e) + i * (px * py)) / d,
            -i * (py * (m + pz + e) / d),
            r(-m) - (r(py) + i * px) * (py / d),
        ],
        [
            (r(px * px + pz * pz) + i * (px * py)) / d + m - pz,
            r(-px) - i * (py * pz / d),
            r(m) + (r(py) - i * px) * (py / d),
            -i * (py * (m - pz + e) / d),
        ],
        [
            i * (py * (m - pz + e) / d),
            r(-m) - (r(py) + i * px) * (py / d),
            r(-px) + i * (py * pz / d),
            (r(-px * px - pz * pz) + i * (px * py)) / d - m + pz,
        ],
        [
            r(m) + (r(py) - i * px) * (py / d),
            i * (py * (m + pz + e) / d),
            (r(px * px + pz * pz) + i * (px * py)) / d + m + pz,
            r(px) - i * (py * pz / d),
        ],
    ])
}

/// `-iγ·p`, printed as both the octet spin sum and its `𝒮(p)` for `Δ = 𝒞𝒯`.
pub fn ct_octet(p: &Momentum) -> Matrix4 {
    p.slash() * c(0.0, -1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::relation_table;

    #[test]
    fn table_iii_matches_computed_products() {
        let p = Momentum::rest(1.0).unwrap();
        let tab = relation_table(&p);
        for r in Discrete::ALL {
            for c in Discrete::ALL {
                assert_eq!(tab.get(r, c), &table_iii(r, c), "{r} {c}");
            }
        }
    }

    #[test]
    fn table_iv_entry_count() {
        let n: usize = Discrete::ALL.iter().flat_map(|r| Column::all().into_iter().map(move |c| table_iv(*r, c).len())).sum();
        assert_eq!(n, 37);
    }

    #[test]
    fn singular_ct_sum_matches_explicit_numbers_at_rest() {
        let p = Momentum::rest(1.0).unwrap();
        let s = ct_spin_sum_singular(&p);
        // at rest d = 2m: entry (0,1) = (2)(2)/8, entry (0,2) = -i(1+1)/4
        assert!((s[(0, 1)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((s[(0, 2)] - c(0.0, -0.5)).norm() < 1e-15);
    }
}
