//! Dual operators `Δ` defining `¬ψ = [Δψ]† γ0`, the admissibility
//! constraint `γ0 Δ† γ0 = Δ`, and the candidate grid built from discrete
//! operators and Clifford elements.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{vec_conj, Covec4, Matrix4, C64};
use crate::bilinear::{bilinears, fpk_check};
use crate::clifford::{gamma, gamma5};
use crate::error::{Error, Result};
use crate::momentum::Momentum;
use crate::rng;
use crate::spinor::{random_spinor_with, Spinor};
use crate::symmetry::{compose, identify, Discrete, RelationEntry, SymOperator};
use crate::tolerance::{TAU_FPK, TAU_ZERO};

/// How `γ0 Δ† γ0 = Δ` is read when `Δ = M K` is antilinear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum AntilinearConvention {
    /// `γ0 M† γ0 = M`.
    #[default]
    Dagger,
    /// `γ0 Mᵀ γ0 = M`.
    Transpose,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualOperator {
    pub op: SymOperator,
    pub label: String,
    /// Verdict of [`constraint_check`] under the default convention.
    pub admissible: bool,
}

impl DualOperator {
    pub fn new(op: SymOperator) -> Self {
        let label = op.label.clone();
        let admissible = constraint_check(&op, AntilinearConvention::default(), TAU_ZERO).passed;
        DualOperator { op, label, admissible }
    }

    pub fn dirac() -> Self {
        Self::new(SymOperator::identity())
    }

    pub fn from_discrete(d: Discrete, p: &Momentum) -> Self {
        Self::new(d.operator(p))
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self.op.label = self.label.clone();
        self
    }
}

/// `¬ψ = [Δψ]† γ0`.
pub fn dual(psi: &Spinor, delta: &DualOperator) -> Covec4 {
    let d = delta.op.apply(&psi.components);
    gamma(0).unwrap().left_mul_covec(&vec_conj(&d))
}

/// `Δ = [[A, B], [C, A†]]` with `B`, `C` hermitian for admissible linear `Δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockForm {
    pub a: Matrix4,
    pub b_hermitian: bool,
    pub c_hermitian: bool,
    pub d_is_a_dagger: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub passed: bool,
    pub residual: f64,
    pub blocks: Option<BlockForm>,
}

fn block_form(m: &Matrix4, tol: f64) -> BlockForm {
    let herm = |b: [[C64; 2]; 2]| {
        (0..2).all(|i| (0..2).all(|j| (b[i][j] - b[j][i].conj()).norm() <= tol))
    };
    let a = m.block(0, 0);
    let d = m.block(1, 1);
    let d_is_a_dagger = (0..2).all(|i| (0..2).all(|j| (d[i][j] - a[j][i].conj()).norm() <= tol));
    let z = [[C64::default(); 2]; 2];
    BlockForm {
        a: Matrix4::from_blocks(a, z, z, z),
        b_hermitian: herm(m.block(0, 1)),
        c_hermitian: herm(m.block(1, 0)),
        d_is_a_dagger,
    }
}

/// Checks `γ0 Δ† γ0 = Δ` entrywise. Linear operators use `M†`; antilinear
/// ones use the selected convention on the matrix part.
pub fn constraint_check(op: &SymOperator, conv: AntilinearConvention, tol: f64) -> ConstraintReport {
    let g0 = gamma(0).unwrap();
    let m = op.matrix;
    let adj = if op.antilinear && conv == AntilinearConvention::Transpose { m.transpose() } else { m.dagger() };
    let residual = (g0 * adj * g0 - m).max_abs();
    let passed = residual <= tol * m.max_abs().max(1.0);
    let blocks = if passed { Some(block_form(&m, tol * m.max_abs().max(1.0))) } else { None };
    ConstraintReport { passed, residual, blocks }
}

/// Outcome of the randomised FPK test for one dual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FpkViability {
    pub passed: bool,
    pub trials: usize,
    pub worst_relative_residual: f64,
}

/// Runs the four FPK identities on `trials` seeded Gaussian spinors.
pub fn fpk_viability(delta: &DualOperator, trials: usize, seed: u64, tol: f64) -> FpkViability {
    let trials = trials.max(1);
    let mut r = rng::stream(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let psi = random_spinor_with(&mut r);
        let rep = fpk_check(&bilinears(&psi, delta), tol);
        worst = worst.max(rep.worst_relative());
    }
    FpkViability { passed: worst <= tol, trials, worst_relative_residual: worst }
}

/// Column headers of the candidate grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Column {
    Discrete(Discrete),
    G0,
    Gi,
    G5,
    G0i,
    Gij,
    G5i,
}

impl Column {
    pub fn all() -> Vec<Column> {
        let mut v: Vec<Column> = Discrete::ALL.iter().map(|d| Column::Discrete(*d)).collect();
        v.extend([Column::G0, Column::Gi, Column::G5, Column::G0i, Column::Gij, Column::G5i]);
        v
    }

    /// Index choices the column expands to. `γ0i` and `γ5i` also carry the
    /// `5` and `0` choices that appear among the printed survivors.
    pub fn indices(&self) -> Vec<&'static str> {
        match self {
            Column::Discrete(_) | Column::G0 | Column::G5 => vec![""],
            Column::Gi => vec!["1", "2", "3"],
            Column::G0i => vec!["1", "2", "3", "5"],
            Column::Gij => vec!["12", "13", "23"],
            Column::G5i => vec!["0", "1", "2", "3"],
        }
    }

    pub fn header(&self) -> String {
        match self {
            Column::Discrete(d) => d.symbol().to_string(),
            Column::G0 => "γ₀".into(),
            Column::Gi => "γᵢ".into(),
            Column::G5 => "γ₅".into(),
            Column::G0i => "γ₀ᵢ".into(),
            Column::Gij => "γᵢⱼ".into(),
            Column::G5i => "γ₅ᵢ".into(),
        }
    }

    pub fn ascii(&self) -> String {
        match self {
            Column::Discrete(d) => d.ascii().to_string(),
            Column::G0 => "g0".into(),
            Column::Gi => "gi".into(),
            Column::G5 => "g5".into(),
            Column::G0i => "g0i".into(),
            Column::Gij => "gij".into(),
            Column::G5i => "g5i".into(),
        }
    }

    fn element(&self, index: &str) -> Matrix4 {
        let gi = |c: char| -> Matrix4 {
            match c {
                '5' => gamma5(),
                d => gamma(d.to_digit(10).unwrap() as usize).unwrap(),
            }
        };
        let ch: Vec<char> = index.chars().collect();
        match self {
            Column::Discrete(_) => unreachable!("discrete columns are operators"),
            Column::G0 => gi('0'),
            Column::G5 => gi('5'),
            Column::Gi => gi(ch[0]),
            Column::G0i => gi('0') * gi(ch[0]),
            Column::Gij => gi(ch[0]) * gi(ch[1]),
            Column::G5i => gi('5') * gi(ch[0]),
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.header())
    }
}

fn subscript(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            '0' => '₀',
            '1' => '₁',
            '2' => '₂',
            '3' => '₃',
            '5' => '₅',
            o => o,
        })
        .collect()
}

/// One concrete operator of the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub row: Discrete,
    pub column: Column,
    pub index: String,
    /// Typeset name, e.g. `𝒫γ₀₁` or `-𝒞𝒫`.
    pub name: String,
    pub op: SymOperator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateGrid {
    pub momentum: Momentum,
    pub cells: Vec<Vec<Vec<Candidate>>>,
}

impl CandidateGrid {
    pub fn cell(&self, row: Discrete, col: Column) -> &[Candidate] {
        let c = Column::all().iter().position(|x| *x == col).unwrap();
        &self.cells[row as usize][c]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().flatten().map(|c| c.len()).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Candidate> {
        self.cells.iter().flatten().flatten()
    }
}

/// Populates all `8 × 14` cells with `row ∘ column` at momentum `p`.
pub fn enumerate_candidates(p: &Momentum) -> CandidateGrid {
    let cols = Column::all();
    let cells = Discrete::ALL
        .iter()
        .map(|row| {
            let r = row.operator(p);
            cols.iter()
                .map(|col| match col {
                    Column::Discrete(d) => {
                        let op = compose(&r, &d.operator(p));
                        let name = match identify(&op, p, TAU_ZERO * 10.0) {
                            e @ RelationEntry::Signed { .. } => e.render(),
                            RelationEntry::Raw(_) => format!("{}{}", row.symbol(), d.symbol()),
                        };
                        vec![Candidate { row: *row, column: *col, index: String::new(), name, op }]
                    }
                    _ => col
                        .indices()
                        .into_iter()
                        .map(|idx| {
                            let x = SymOperator::linear(col.element(idx), format!("{}{}", col.ascii().trim_end_matches(['i', 'j']), idx));
                            let op = compose(&r, &x);
                            let base = match col {
                                Column::G0 => "γ₀".to_string(),
                                Column::G5 => "γ₅".to_string(),
                                _ => format!("γ{}", subscript(idx)),
                            };
                            let prefix = if *row == Discrete::One { String::new() } else { row.symbol().to_string() };
                            Candidate { row: *row, column: *col, index: idx.to_string(), name: format!("{prefix}{base}"), op }
                        })
                        .collect(),
                })
                .collect()
        })
        .collect();
    CandidateGrid { momentum: *p, cells }
}

/// Verdicts for one candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateVerdict {
    pub name: String,
    pub index: String,
    pub constraint: bool,
    pub fpk: bool,
    pub fpk_worst_relative_residual: f64,
}

impl CandidateVerdict {
    pub fn admitted(&self) -> bool {
        self.constraint && self.fpk
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleGrid {
    pub momentum: Momentum,
    pub convention: AntilinearConvention,
    pub trials: usize,
    pub seed: u64,
    pub cells: Vec<Vec<Vec<CandidateVerdict>>>,
}

impl AdmissibleGrid {
    pub fn cell(&self, row: Discrete, col: Column) -> &[CandidateVerdict] {
        let c = Column::all().iter().position(|x| *x == col).unwrap();
        &self.cells[row as usize][c]
    }

    /// Index strings of the admitted operators in a cell.
    pub fn admitted_indices(&self, row: Discrete, col: Column) -> BTreeSet<String> {
        self.cell(row, col).iter().filter(|v| v.admitted()).map(|v| v.index.clone()).collect()
    }

    pub fn admitted_count(&self) -> usize {
        self.cells.iter().flatten().flatten().filter(|v| v.admitted()).count()
    }
}

/// Keeps candidates passing both the constraint and the FPK test. Each
/// candidate draws its trial spinors from its own stream.
pub fn filter_admissible(grid: &CandidateGrid, trials: usize, seed: u64, conv: AntilinearConvention) -> AdmissibleGrid {
    let flat: Vec<(usize, usize, usize, &Candidate)> = grid
        .cells
        .iter()
        .enumerate()
        .flat_map(|(r, row)| {
            row.iter().enumerate().flat_map(move |(c, cell)| cell.iter().enumerate().map(move |(k, cand)| (r, c, k, cand)))
        })
        .collect();
    let verdicts: Vec<(usize, usize, CandidateVerdict)> = flat
        .par_iter()
        .enumerate()
        .map(|(n, (r, c, _, cand))| {
            let constraint = constraint_check(&cand.op, conv, TAU_ZERO).passed;
            let d = DualOperator::new(cand.op.clone());
            let v = fpk_viability(&d, trials, rng::derive(seed, &format!("fpk-cell-{n}")), TAU_FPK);
            (*r, *c, CandidateVerdict {
                name: cand.name.clone(),
                index: cand.index.clone(),
                constraint,
                fpk: v.passed,
                fpk_worst_relative_residual: v.worst_relative_residual,
            })
        })
        .collect();
    let ncols = Column::all().len();
    let mut cells = vec![vec![Vec::new(); ncols]; Discrete::ALL.len()];
    for (r, c, v) in verdicts {
        cells[r][c].push(v);
    }
    AdmissibleGrid { momentum: grid.momentum, convention: conv, trials, seed, cells }
}

/// Set difference for one cell against a reference table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDiff {
    pub row: Discrete,
    pub column: Column,
    /// In the reference but not admitted.
    pub missing: Vec<String>,
    /// Admitted but absent from the reference.
    pub extra: Vec<String>,
}

/// Cell-by-cell comparison with `reference(row, col)` index sets.
pub fn compare_grid(grid: &AdmissibleGrid, reference: impl Fn(Discrete, Column) -> BTreeSet<String>) -> Vec<CellDiff> {
    let mut out = Vec::new();
    for row in Discrete::ALL {
        for col in Column::all() {
            let got = grid.admitted_indices(row, col);
            let want = reference(row, col);
            if got != want {
                out.push(CellDiff {
                    row,
                    column: col,
                    missing: want.difference(&got).cloned().collect(),
                    extra: got.difference(&want).cloned().collect(),
                });
            }
        }
    }
    out
}

/// Real linear combination of duals of one antilinearity class. The
/// constraint is re-checked on the result.
pub fn sum_duals(deltas: &[DualOperator], weights: &[f64]) -> Result<DualOperator> {
    if deltas.is_empty() || deltas.len() != weights.len() {
        return Err(Error::InvalidArgument("need one weight per dual and at least one dual".into()));
    }
    let anti = deltas[0].op.antilinear;
    if deltas.iter().any(|d| d.op.antilinear != anti) {
        return Err(Error::MixedAntilinearity);
    }
    if let Some(d) = deltas.iter().find(|d| !d.admissible) {
        return Err(Error::InvalidArgument(format!("{} is not admissible", d.label)));
    }
    let m = deltas.iter().zip(weights).fold(Matrix4::zero(), |acc, (d, w)| acc + d.op.matrix * *w);
    let label = deltas
        .iter()
        .zip(weights)
        .map(|(d, w)| format!("{w}*{}", d.label))
        .collect::<Vec<_>>()
        .join("+");
    Ok(DualOperator::new(SymOperator::new(m, anti, label)))
}

/// Parses a gamma token (`g0`, `g2`, `g5`, `g03`, `g05`, `g13`, `g52`) into
/// its column and index.
fn parse_gamma(tok: &str) -> Option<(Column, String)> {
    let digits = tok.strip_prefix('g')?;
    let ch: Vec<char> = digits.chars().collect();
    let col = match ch.as_slice() {
        ['0'] => Column::G0,
        ['5'] => Column::G5,
        ['1' | '2' | '3'] => Column::Gi,
        ['0', '1' | '2' | '3' | '5'] => Column::G0i,
        ['5', '0' | '1' | '2' | '3'] => Column::G5i,
        [a @ '1'..='3', b @ '1'..='3'] if a < b => Column::Gij,
        _ => return None,
    };
    let idx = match col {
        Column::G0 | Column::G5 => String::new(),
        Column::Gi | Column::G0i | Column::G5i => ch.last().unwrap().to_string(),
        _ => digits.to_string(),
    };
    Some((col, idx))
}

/// Parses a dual label at momentum `p`: a discrete operator (`I`, `CT`), a
/// gamma token (`g1`), a product `ROW*GAMMA` (`CT*g51`), or a sum of such
/// terms joined by `+`, each optionally prefixed by a real weight `w*`.
pub fn parse_dual(label: &str, p: &Momentum) -> Result<DualOperator> {
    let terms: Vec<&str> = label.split('+').map(str::trim).collect();
    if terms.len() > 1 {
        let mut ops = Vec::new();
        let mut weights = Vec::new();
        for t in terms {
            let (w, rest) = match t.split_once('*') {
                Some((a, b)) if a.parse::<f64>().is_ok() => (a.parse::<f64>().unwrap(), b),
                _ => (1.0, t),
            };
            ops.push(parse_dual(rest, p)?);
            weights.push(w);
        }
        return sum_duals(&ops, &weights);
    }
    let bad = || Error::Parse(format!("unrecognised dual label '{label}'"));
    let t = label.trim();
    let (row, gam) = match t.split_once('*') {
        Some((r, g)) => (Discrete::parse(r).ok_or_else(bad)?, Some(g.trim())),
        None if t.starts_with('g') => (Discrete::One, Some(t)),
        None => (Discrete::parse(t).ok_or_else(bad)?, None),
    };
    let r = row.operator(p);
    let op = match gam {
        None => r.relabel(row.ascii()),
        Some(g) => {
            let (col, idx) = parse_gamma(g).ok_or_else(bad)?;
            let x = SymOperator::linear(col.element(&idx), g);
            compose(&r, &x).relabel(t)
        }
    };
    Ok(DualOperator::new(op))
}

/// Operators of the candidate grid selected cell by cell, e.g. from a
/// reference table or from an admissibility run.
pub fn select_candidates(grid: &CandidateGrid, keep: impl Fn(Discrete, Column) -> BTreeSet<String>) -> Vec<DualOperator> {
    let mut out = Vec::new();
    for row in Discrete::ALL {
        for col in Column::all() {
            let want = keep(row, col);
            for cand in grid.cell(row, col) {
                if want.contains(&cand.index) {
                    out.push(DualOperator::new(cand.op.clone().relabel(cand.name.clone())));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{dot, ZERO};
    use crate::spinor::random_spinor;
    use crate::symmetry::{charge_conjugation, parity};

    fn rest() -> Momentum {
        Momentum::rest(1.0).unwrap()
    }

    #[test]
    fn dirac_dual_is_psi_bar() {
        let psi = random_spinor(3);
        let got = dual(&psi, &DualOperator::dirac());
        let bar = gamma(0).unwrap().left_mul_covec(&vec_conj(&psi.components));
        assert_eq!(got, bar);
        let zero = Spinor::new([ZERO; 4], crate::spinor::SpinorKind::Given);
        assert_eq!(dual(&zero, &DualOperator::from_discrete(Discrete::CT, &rest())), [ZERO; 4]);
    }

    #[test]
    fn ct_dual_two_orders_agree() {
        let p = rest();
        let psi = random_spinor(11);
        let ct = DualOperator::from_discrete(Discrete::CT, &p);
        let direct = dot(&dual(&psi, &ct), &psi.components);
        let c = charge_conjugation();
        let t = Discrete::T.operator(&p);
        let stepwise = c.apply(&t.apply(&psi.components));
        let chi = gamma(0).unwrap().left_mul_covec(&vec_conj(&stepwise));
        assert!((direct - dot(&chi, &psi.components)).norm() < 1e-12);
    }

    #[test]
    fn constraint_examples() {
        let conv = AntilinearConvention::Dagger;
        assert!(constraint_check(&SymOperator::identity(), conv, TAU_ZERO).passed);
        assert!(!constraint_check(&SymOperator::linear(gamma5(), "g5"), conv, TAU_ZERO).passed);
        assert!(constraint_check(&SymOperator::linear(gamma(0).unwrap(), "g0"), conv, TAU_ZERO).passed);
    }

    #[test]
    fn block_form_for_admissible_linear() {
        let r = constraint_check(&SymOperator::linear(gamma(0).unwrap(), "g0"), AntilinearConvention::Dagger, TAU_ZERO);
        let b = r.blocks.unwrap();
        assert!(b.b_hermitian && b.c_hermitian && b.d_is_a_dagger);
    }

    #[test]
    fn fpk_viability_examples() {
        let p = rest();
        assert!(fpk_viability(&DualOperator::dirac(), 100, 1, TAU_FPK).passed);
        let cg2 = compose(&charge_conjugation(), &SymOperator::linear(gamma(2).unwrap(), "g2"));
        assert!(fpk_viability(&DualOperator::new(cg2), 100, 2, TAU_FPK).passed);
        // γ3 is not in the printed row 𝟙, but the identities hold for it as for any Δ.
        let g3 = DualOperator::new(SymOperator::linear(gamma(3).unwrap(), "g3"));
        assert!(fpk_viability(&g3, 100, 3, TAU_FPK).passed);
        assert!(constraint_check(&g3.op, AntilinearConvention::Dagger, TAU_ZERO).passed);
        let _ = parity(&p);
    }

    #[test]
    fn grid_shape_and_count() {
        let g = enumerate_candidates(&rest());
        assert_eq!(g.cells.len(), 8);
        assert!(g.cells.iter().all(|r| r.len() == 14));
        assert_eq!(g.count(), 8 * (8 + 1 + 3 + 1 + 4 + 3 + 4));
        assert_eq!(g.cell(Discrete::One, Column::Discrete(Discrete::One))[0].name, "𝟙");
        let pg0 = &g.cell(Discrete::P, Column::G0)[0];
        assert_eq!(pg0.name, "𝒫γ₀");
        assert!(pg0.op.matrix.approx_eq(&(parity(&rest()).matrix * gamma(0).unwrap()), 1e-12));
        assert_eq!(g.cell(Discrete::T, Column::Discrete(Discrete::T))[0].name, "-𝟙");
        assert_eq!(g.cell(Discrete::P, Column::Discrete(Discrete::C))[0].name, "-𝒞𝒫");
    }

    #[test]
    fn sums_of_duals() {
        let p = rest();
        let one = DualOperator::dirac();
        let g0 = DualOperator::new(SymOperator::linear(gamma(0).unwrap(), "g0"));
        assert!(sum_duals(&[one.clone(), g0], &[1.0, 1.0]).unwrap().admissible);
        assert!(sum_duals(&[one], &[2.0]).unwrap().admissible);
        let c = DualOperator::from_discrete(Discrete::C, &p);
        let pp = DualOperator::from_discrete(Discrete::P, &p);
        assert_eq!(sum_duals(&[c, pp], &[1.0, 1.0]), Err(Error::MixedAntilinearity));
    }

    #[test]
    fn parse_dual_labels() {
        let p = Momentum::rest(1.0).unwrap();
        let ct = parse_dual("CT", &p).unwrap();
        assert!(!ct.op.antilinear);
        let t = parse_dual("T*g52", &p).unwrap();
        assert!(t.op.antilinear);
        let g = parse_dual("g1", &p).unwrap();
        assert!(g.op.matrix.approx_eq(&gamma(1).unwrap(), 0.0));
        assert!(parse_dual("g11", &p).is_err());
        assert!(parse_dual("Q", &p).is_err());
        let s = parse_dual("I + 0.5*P", &p).unwrap();
        assert!(s.op.matrix.approx_eq(&(Matrix4::identity() + gamma(0).unwrap() * 0.5), 1e-15));
        assert!(matches!(parse_dual("I + C", &p), Err(Error::MixedAntilinearity)));
    }

}
