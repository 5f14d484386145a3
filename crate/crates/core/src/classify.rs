//! Table-driven Lounesto classification with the subclasses opened by
//! general duals, constraint checks and witness search.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{vec_max_abs, C64, I, ONE, ZERO};
use crate::bilinear::{bilinears, fpk_check, BilinearSet};
use crate::dual::DualOperator;
use crate::error::{Error, Result};
use crate::momentum::Momentum;
use crate::rng;
use crate::spinor::{family, random_spinor_with, FamilyKind, Spinor, SpinorKind};

/// Vanishing flags for `(σ, ω, J, K, S)`; `true` means zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanishingPattern {
    pub zero: [bool; 5],
    pub scale: f64,
    /// Distance in decades between the closest quantity and the threshold.
    pub margin: f64,
}

impl VanishingPattern {
    pub fn nonzero(&self) -> [bool; 5] {
        self.zero.map(|z| !z)
    }

    pub fn render(&self) -> String {
        self.zero.iter().map(|z| if *z { "=0" } else { "≠0" }).collect::<Vec<_>>().join(" ")
    }
}

/// Sizes of `(σ, ω, J, K, S)`: moduli and max-norms.
pub fn magnitudes(b: &BilinearSet) -> [f64; 5] {
    [b.sigma.norm(), b.omega.norm(), vec_max_abs(&b.j), vec_max_abs(&b.k), vec_max_abs(&b.s)]
}

/// Thresholds each quantity at `tol · max(magnitudes)`.
pub fn vanishing_pattern(b: &BilinearSet, tol: f64) -> VanishingPattern {
    let mags = magnitudes(b);
    let scale = mags.iter().cloned().fold(0.0, f64::max);
    let thr = tol * scale;
    let zero = mags.map(|m| scale == 0.0 || m < thr);
    let margin = if scale == 0.0 {
        f64::INFINITY
    } else {
        mags.iter()
            .map(|m| if *m == 0.0 { f64::INFINITY } else { (m / thr).log10().abs() })
            .fold(f64::INFINITY, f64::min)
    };
    VanishingPattern { zero, scale, margin }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Allowed,
    Forbidden,
    Unclassifiable,
}

/// A Table I class or subclass, a Table II pattern, or the all-zero case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LounestoLabel {
    pub verdict: Verdict,
    pub major: u8,
    pub sub: Option<u8>,
}

impl LounestoLabel {
    pub const fn allowed(major: u8, sub: Option<u8>) -> Self {
        LounestoLabel { verdict: Verdict::Allowed, major, sub }
    }

    pub const fn forbidden(major: u8, sub: u8) -> Self {
        LounestoLabel { verdict: Verdict::Forbidden, major, sub: Some(sub) }
    }

    pub const UNCLASSIFIABLE: LounestoLabel = LounestoLabel { verdict: Verdict::Unclassifiable, major: 0, sub: None };

    pub fn parse(s: &str) -> Option<LounestoLabel> {
        let t = s.trim();
        all_labels().into_iter().find(|l| l.to_string() == t)
    }

    /// Pattern of nonzero flags this label stands for.
    pub fn pattern(&self) -> Option<[bool; 5]> {
        TABLE_I
            .iter()
            .chain(TABLE_II.iter())
            .find(|(l, _)| l == self)
            .map(|(_, p)| *p)
    }
}

impl fmt::Display for LounestoLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.verdict, self.sub) {
            (Verdict::Unclassifiable, _) => write!(f, "unclassifiable"),
            (Verdict::Allowed, None) => write!(f, "{}", self.major),
            (Verdict::Allowed, Some(s)) => write!(f, "{}.{}", self.major, s),
            (Verdict::Forbidden, s) => write!(f, "{}.{}*", self.major, s.unwrap_or(0)),
        }
    }
}

const fn p(s: u8, w: u8, j: u8, k: u8, sv: u8) -> [bool; 5] {
    [s == 1, w == 1, j == 1, k == 1, sv == 1]
}

/// Allowed classes: nonzero flags for `(σ, ω, J, K, S)`.
pub const TABLE_I: [(LounestoLabel, [bool; 5]); 19] = [
    (LounestoLabel::allowed(1, None), p(1, 1, 1, 1, 1)),
    (LounestoLabel::allowed(1, Some(1)), p(1, 1, 1, 1, 0)),
    (LounestoLabel::allowed(1, Some(2)), p(1, 1, 1, 0, 1)),
    (LounestoLabel::allowed(1, Some(3)), p(1, 1, 1, 0, 0)),
    (LounestoLabel::allowed(1, Some(4)), p(1, 1, 0, 1, 1)),
    (LounestoLabel::allowed(1, Some(5)), p(1, 1, 0, 0, 0)),
    (LounestoLabel::allowed(1, Some(6)), p(1, 1, 0, 0, 1)),
    (LounestoLabel::allowed(1, Some(7)), p(1, 1, 0, 1, 0)),
    (LounestoLabel::allowed(2, None), p(1, 0, 1, 1, 1)),
    (LounestoLabel::allowed(2, Some(1)), p(1, 0, 1, 1, 0)),
    (LounestoLabel::allowed(3, None), p(0, 1, 1, 1, 1)),
    (LounestoLabel::allowed(3, Some(1)), p(0, 1, 1, 1, 0)),
    (LounestoLabel::allowed(4, None), p(0, 0, 1, 1, 1)),
    (LounestoLabel::allowed(4, Some(1)), p(0, 0, 0, 1, 1)),
    (LounestoLabel::allowed(5, None), p(0, 0, 1, 0, 1)),
    (LounestoLabel::allowed(5, Some(1)), p(0, 0, 0, 0, 1)),
    (LounestoLabel::allowed(6, None), p(0, 0, 1, 1, 0)),
    (LounestoLabel::allowed(6, Some(1)), p(0, 0, 0, 1, 0)),
    (LounestoLabel::allowed(7, None), p(0, 0, 1, 0, 0)),
];

/// Forbidden patterns.
pub const TABLE_II: [(LounestoLabel, [bool; 5]); 12] = [
    (LounestoLabel::forbidden(2, 2), p(1, 0, 1, 0, 1)),
    (LounestoLabel::forbidden(2, 3), p(1, 0, 1, 0, 0)),
    (LounestoLabel::forbidden(2, 4), p(1, 0, 0, 1, 1)),
    (LounestoLabel::forbidden(2, 5), p(1, 0, 0, 1, 0)),
    (LounestoLabel::forbidden(2, 6), p(1, 0, 0, 0, 1)),
    (LounestoLabel::forbidden(2, 7), p(1, 0, 0, 0, 0)),
    (LounestoLabel::forbidden(3, 2), p(0, 1, 1, 0, 1)),
    (LounestoLabel::forbidden(3, 3), p(0, 1, 1, 0, 0)),
    (LounestoLabel::forbidden(3, 4), p(0, 1, 0, 1, 1)),
    (LounestoLabel::forbidden(3, 5), p(0, 1, 0, 1, 0)),
    (LounestoLabel::forbidden(3, 6), p(0, 1, 0, 0, 1)),
    (LounestoLabel::forbidden(3, 7), p(0, 1, 0, 0, 0)),
];

pub fn all_labels() -> Vec<LounestoLabel> {
    TABLE_I
        .iter()
        .chain(TABLE_II.iter())
        .map(|(l, _)| *l)
        .chain(std::iter::once(LounestoLabel::UNCLASSIFIABLE))
        .collect()
}

/// Label for a nonzero-flag pattern; total over all 32 patterns.
pub fn lookup(nonzero: [bool; 5]) -> LounestoLabel {
    TABLE_I
        .iter()
        .chain(TABLE_II.iter())
        .find(|(_, p)| *p == nonzero)
        .map(|(l, _)| *l)
        .unwrap_or(LounestoLabel::UNCLASSIFIABLE)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: LounestoLabel,
    pub pattern: VanishingPattern,
}

pub fn classify(b: &BilinearSet, tol: f64) -> Classification {
    let pattern = vanishing_pattern(b, tol);
    Classification { label: lookup(pattern.nonzero()), pattern }
}

/// One algebraic condition evaluated on a bilinear set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintItem {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
    /// Reported for inspection only; does not enter [`ConstraintSummary::all_pass`].
    pub informational: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ConstraintSummary {
    pub items: Vec<ConstraintItem>,
}

impl ConstraintSummary {
    pub fn all_pass(&self) -> bool {
        self.items.iter().filter(|i| !i.informational).all(|i| i.pass)
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn enforced(&self) -> impl Iterator<Item = &ConstraintItem> {
        self.items.iter().filter(|i| !i.informational)
    }
}

/// `max |c·S_μν - ε_μναβ S^αβ| / max|S|`.
fn duality_residual(b: &BilinearSet, c: C64) -> f64 {
    let smax = vec_max_abs(&b.s);
    if smax == 0.0 {
        return 0.0;
    }
    let mut r: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            r = r.max((b.s_at(mu, nu) * c - b.s_dual(mu, nu)).norm());
        }
    }
    r / smax
}

/// Evaluates the conditions that accompany the subclasses opened by general
/// duals.
///
/// With `σ, ω ≠ 0` and `J = 0` or `K = 0` the FPK identities force
/// `J² = 0`, hence `σ = s·iω` with `s = ±1`, and then
/// `ε_μναβ S^αβ = 2i·s·S_μν`. The branch-correlated form is enforced; the
/// fixed-sign form `2iS = εS` is listed as informational.
///
/// With `S = 0` and `J, K ≠ 0`, `J_μK_ν = J_νK_μ` is enforced.
pub fn verify_constraints(label: &LounestoLabel, b: &BilinearSet, tol: f64) -> ConstraintSummary {
    let mut items = Vec::new();
    let Some(nz) = label.pattern() else { return ConstraintSummary::default() };
    if label.verdict != Verdict::Allowed {
        return ConstraintSummary::default();
    }
    let [s_nz, w_nz, j_nz, k_nz, big_s_nz] = nz;
    if s_nz && w_nz && (!j_nz || !k_nz) {
        let size = b.sigma.norm().max(b.omega.norm());
        let r_plus = (b.sigma - I * b.omega).norm() / size;
        let r_minus = (b.sigma + I * b.omega).norm() / size;
        let branch = if r_plus <= r_minus { 1.0 } else { -1.0 };
        items.push(ConstraintItem {
            name: "sigma = ±i omega".into(),
            residual: r_plus.min(r_minus),
            pass: r_plus.min(r_minus) <= tol,
            informational: false,
        });
        let r_branch = duality_residual(b, C64::new(0.0, 2.0 * branch));
        items.push(ConstraintItem {
            name: format!("2i({})S = eps S  [sigma = {}i omega]", if branch > 0.0 { "+1" } else { "-1" }, if branch > 0.0 { "+" } else { "-" }),
            residual: r_branch,
            pass: r_branch <= tol,
            informational: false,
        });
        let r_lit = duality_residual(b, C64::new(0.0, 2.0));
        items.push(ConstraintItem { name: "2iS = eps S (fixed sign)".into(), residual: r_lit, pass: r_lit <= tol, informational: true });
    }
    if !s_nz && !w_nz && !j_nz && big_s_nz {
        let r = duality_residual(b, C64::new(0.0, 2.0)).min(duality_residual(b, C64::new(0.0, -2.0)));
        items.push(ConstraintItem { name: "±2iS = eps S (singular sector)".into(), residual: r, pass: r <= tol, informational: true });
    }
    if j_nz && k_nz && !big_s_nz {
        let mut r: f64 = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                r = r.max((b.j[mu] * b.k[nu] - b.j[nu] * b.k[mu]).norm());
            }
        }
        let r = r / (vec_max_abs(&b.j) * vec_max_abs(&b.k));
        items.push(ConstraintItem { name: "J_m K_n = J_n K_m".into(), residual: r, pass: r <= tol, informational: false });
    }
    ConstraintSummary { items }
}

/// A spinor and dual realising a target label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: LounestoLabel,
    pub spinor: Spinor,
    pub dual: String,
    pub bilinears: BilinearSet,
    pub constraints: ConstraintSummary,
    pub source: String,
}

/// Spinors with entries in `{0, ±1, ±i}`, zero excluded, in a fixed order.
pub fn sparse_pool() -> Vec<Spinor> {
    let vals = [ZERO, ONE, -ONE, I, -I];
    let mut out = Vec::with_capacity(624);
    for a in vals {
        for b in vals {
            for c in vals {
                for d in vals {
                    let v = [a, b, c, d];
                    if v.iter().any(|z| z.norm() > 0.0) {
                        out.push(Spinor::new(v, SpinorKind::Given));
                    }
                }
            }
        }
    }
    out
}

/// Dirac and singular families at rest and at one fixed moving frame.
pub fn family_pool(mass: f64) -> Vec<Spinor> {
    let moving = Momentum::on_shell(mass, [0.3 * mass, -0.2 * mass, 0.5 * mass]).expect("finite");
    let rest = Momentum::rest(mass).expect("positive mass");
    let mut out = Vec::new();
    for p in [rest, moving] {
        for kind in FamilyKind::ALL {
            out.extend(family(kind, &p).members().cloned());
        }
    }
    out
}

/// Labels every `(ψ, Δ)` pair and keeps the first pair per target that
/// passes the FPK identities and the enforced constraints.
fn scan(
    targets: &[LounestoLabel],
    found: &mut [Option<Witness>],
    spinors: impl IndexedParallelIterator<Item = Spinor>,
    duals: &[DualOperator],
    source: &str,
    tol_class: f64,
    tol_fpk: f64,
) {
    let open: Vec<usize> = (0..targets.len()).filter(|k| found[*k].is_none()).collect();
    if open.is_empty() {
        return;
    }
    let hits: Vec<Vec<(usize, Witness)>> = spinors
        .map(|psi| {
            let mut local: Vec<(usize, Witness)> = Vec::new();
            for d in duals {
                let b = bilinears(&psi, d);
                let label = classify(&b, tol_class).label;
                let Some(k) = open.iter().copied().find(|k| targets[*k] == label) else { continue };
                if local.iter().any(|(j, _)| *j == k) || !fpk_check(&b, tol_fpk).all_pass() {
                    continue;
                }
                let c = verify_constraints(&label, &b, tol_fpk);
                if c.all_pass() {
                    local.push((k, Witness { label, spinor: psi, dual: d.label.clone(), bilinears: b, constraints: c, source: source.into() }));
                }
            }
            local
        })
        .collect();
    for (k, w) in hits.into_iter().flatten() {
        if found[k].is_none() {
            found[k] = Some(w);
        }
    }
}

/// Searches structured pools first (sparse spinors, then families), then
/// `budget` Gaussian spinors, for all targets in one pass. For each target
/// the first hit in that order is kept.
pub fn find_witnesses(targets: &[LounestoLabel], duals: &[DualOperator], budget: usize, seed: u64, mass: f64, tol_class: f64, tol_fpk: f64) -> Result<Vec<Option<Witness>>> {
    if let Some(t) = targets.iter().find(|t| t.verdict != Verdict::Allowed) {
        return Err(Error::InvalidArgument(format!("{t} is not an allowed class")));
    }
    let mut found: Vec<Option<Witness>> = vec![None; targets.len()];
    scan(targets, &mut found, sparse_pool().into_par_iter(), duals, "sparse", tol_class, tol_fpk);
    scan(targets, &mut found, family_pool(mass).into_par_iter(), duals, "families", tol_class, tol_fpk);
    const CHUNK: usize = 1024;
    let mut start = 0;
    while start < budget && found.iter().any(|f| f.is_none()) {
        let end = (start + CHUNK).min(budget);
        let draws = (start..end).into_par_iter().map(|t| random_spinor_with(&mut rng::stream(seed, t as u64)));
        scan(targets, &mut found, draws, duals, "gaussian", tol_class, tol_fpk);
        start = end;
    }
    Ok(found)
}

pub fn find_witness(target: &LounestoLabel, duals: &[DualOperator], budget: usize, seed: u64, mass: f64, tol_class: f64, tol_fpk: f64) -> Result<Option<Witness>> {
    Ok(find_witnesses(&[*target], duals, budget, seed, mass, tol_class, tol_fpk)?.pop().flatten())
}

/// Counts labels over `trials` Gaussian spinors per dual. Keys are
/// `(dual label, class label)`.
pub fn census(duals: &[DualOperator], trials: usize, seed: u64, tol: f64) -> BTreeMap<(String, String), usize> {
    let mut out = BTreeMap::new();
    for (n, d) in duals.iter().enumerate() {
        let s = rng::derive(seed, &format!("census-{n}"));
        let labels: Vec<LounestoLabel> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let psi = random_spinor_with(&mut rng::stream(s, t as u64));
                classify(&bilinears(&psi, d), tol).label
            })
            .collect();
        for l in labels {
            *out.entry((d.label.clone(), l.to_string())).or_insert(0) += 1;
        }
    }
    out
}
