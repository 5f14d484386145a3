//! One test per acceptance criterion. Each prints a `PASS`/`FAIL` line with
//! its diagnostics before asserting.

use lounesto::algebra::{Matrix4, C64};
use lounesto::bilinear::{bilinears, property_suite};
use lounesto::classify::{all_labels, classify, find_witnesses, sparse_pool, verify_constraints, Verdict};
use lounesto::cli::{admitted_duals, run, tabulated_duals};
use lounesto::clifford::{derive_eta, gamma, EtaReality};
use lounesto::dual::{compare_grid, enumerate_candidates, filter_admissible, AntilinearConvention};
use lounesto::momentum::{probe_momenta, Momentum};
use lounesto::reference;
use lounesto::rng;
use lounesto::spinor::{random_spinor_with, FamilyKind};
use lounesto::spinsum::{family_spin_sum, propagator_core, table_v, CovarianceVerdict, EnergyWeighting, StarForm};
use lounesto::symmetry::{relation_table, Discrete};

const SEED: u64 = 42;
/// Relative entrywise tolerance for explicit matrices.
const TOL_MATRIX: f64 = 1e-8;
/// Relative residual for FPK and aggregate identities.
const TOL_FPK: f64 = 1e-8;
/// Relative residual for the covariant fit.
const TOL_FIT: f64 = 1e-7;
/// Relative vanishing threshold for classification.
const TOL_CLASS: f64 = 1e-8;

/// Written to the raw handle so the line shows even when output is captured.
fn verdict(n: u32, name: &str, ok: bool, detail: &str) {
    use std::io::Write;
    let line = format!("ACCEPTANCE {n} {name}: {} {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
}

fn rel(a: &Matrix4, b: &Matrix4) -> f64 {
    (*a - *b).max_abs() / b.max_abs()
}

#[test]
fn criterion_1_admissible_dual_grid() {
    let p = Momentum::rest(1.0).unwrap();
    let grid = enumerate_candidates(&p);
    let adm = filter_admissible(&grid, 200, SEED, AntilinearConvention::Dagger);
    let diffs = compare_grid(&adm, reference::table_iv);
    let alt = filter_admissible(&grid, 200, SEED, AntilinearConvention::Transpose);
    let alt_diffs = compare_grid(&alt, reference::table_iv);
    println!("candidates {} admitted {} (dagger) / {} (transpose)", grid.count(), adm.admitted_count(), alt.admitted_count());
    for d in &diffs {
        println!("  {} x {}: missing {:?} extra {:?}", d.row.symbol(), d.column.header(), d.missing, d.extra);
    }
    println!("  transpose convention differs in {} cells", alt_diffs.len());
    let ok = diffs.is_empty();
    verdict(1, "dual table", ok, &format!("({} of 112 cells differ)", diffs.len()));
    assert!(ok);
}

#[test]
fn criterion_2_operator_products() {
    let moving = Momentum::on_shell(1.0, [0.4, -0.3, 0.7]).unwrap();
    let mut bad = Vec::new();
    for p in [Momentum::rest(1.0).unwrap(), moving] {
        let tab = relation_table(&p);
        for r in Discrete::ALL {
            for c in Discrete::ALL {
                if tab.get(r, c) != &reference::table_iii(r, c) {
                    bad.push(format!("{}·{} = {}", r.ascii(), c.ascii(), tab.get(r, c).render()));
                }
            }
        }
    }
    let ok = bad.is_empty();
    verdict(2, "operator products", ok, &format!("({} mismatches) {:?}", bad.len(), bad));
    assert!(ok);
}

#[test]
fn criterion_3_spin_sum_behaviour() {
    let probes = probe_momenta(SEED, 5, 1.0).unwrap();
    let tv = table_v(&probes, TOL_FIT);
    let mut bad = Vec::new();
    for d in Discrete::ALL {
        for k in FamilyKind::ALL {
            let cell = tv.cell(d, k);
            let want = reference::table_v(d, k);
            let got = cell.verdict();
            let mut line = format!("  {:4} {:20} computed {:3} reference {:3}", d.ascii(), k.name(), cell.mark(), want.mark());
            if got != Some(want) {
                bad.push(format!("{}/{}", d.ascii(), k.name()));
                line.push_str("  <- differs");
            }
            if want == CovarianceVerdict::CovariantStar {
                if let lounesto::spinsum::TableVCell::Verdict { star_form, fit, .. } = cell {
                    let expected_ok = match (k, star_form) {
                        (FamilyKind::Regular, Some(StarForm::SlashPmMassGamma5 { .. })) => true,
                        (FamilyKind::SingularDegenerate, Some(StarForm::MassGamma5)) => true,
                        _ => false,
                    };
                    line.push_str(&format!("  form {:?} [{}]", star_form.map(|s| s.describe()), fit));
                    if !expected_ok {
                        bad.push(format!("{}/{} star form", d.ascii(), k.name()));
                        line.push_str("  <- star form differs");
                    }
                }
            }
            println!("{line}");
        }
    }
    let ok = bad.is_empty();
    verdict(3, "spin sum behaviour", ok, &format!("({} discrepancies) {:?}", bad.len(), bad));
    assert!(ok);
}

#[test]
fn criterion_4_explicit_matrices() {
    let probes = probe_momenta(SEED, 5, 1.0).unwrap();
    let worst = |f: &dyn Fn(&Momentum) -> (Matrix4, Matrix4)| probes.iter().map(|p| {
        let (got, want) = f(p);
        rel(&got, &want)
    }).fold(0.0, f64::max);
    let checks: Vec<(&str, f64)> = vec![
        ("regular spin sum, CT = i(m g5 - pslash)", worst(&|p| (family_spin_sum(FamilyKind::Regular, Discrete::CT, p).unwrap(), reference::ct_regular_spin_sum(p)))),
        ("regular core, CT (symmetric weighting)", worst(&|p| (propagator_core(FamilyKind::Regular, Discrete::CT, p, EnergyWeighting::Symmetric).unwrap().s_of_p, reference::ct_core_regular(p)))),
        ("singular core, CT (symmetric weighting)", worst(&|p| (propagator_core(FamilyKind::Singular, Discrete::CT, p, EnergyWeighting::Symmetric).unwrap().s_of_p, reference::ct_core_singular(p)))),
        ("octet core, CT = -i pslash (p0 = E)", worst(&|p| (propagator_core(FamilyKind::SingularDegenerate, Discrete::CT, p, EnergyWeighting::OffShell(p.energy)).unwrap().s_of_p, reference::ct_octet(p)))),
        ("singular spin sum, T", worst(&|p| (family_spin_sum(FamilyKind::Singular, Discrete::T, p).unwrap(), reference::t_spin_sum_singular(p)))),
    ];
    let diagnostics: Vec<(&str, f64)> = vec![
        ("regular spin sum, CT = i(m g5 - g5 pslash)", worst(&|p| {
            let g5 = lounesto::clifford::gamma5();
            (family_spin_sum(FamilyKind::Regular, Discrete::CT, p).unwrap(), (g5 * p.mass - g5 * p.slash()) * C64::new(0.0, 1.0))
        })),
        ("singular spin sum CT, halved", worst(&|p| (family_spin_sum(FamilyKind::Singular, Discrete::CT, p).unwrap() * 0.5, reference::ct_spin_sum_singular(p)))),
        ("octet spin sum CT = -2i g5 pslash", worst(&|p| (family_spin_sum(FamilyKind::SingularDegenerate, Discrete::CT, p).unwrap(), (lounesto::clifford::gamma5() * p.slash()) * C64::new(0.0, -2.0)))),
        ("regular particle spin sum, T vs printed T matrix", worst(&|p| (family_spin_sum(FamilyKind::Regular, Discrete::T, p).unwrap(), reference::t_spin_sum_singular(p)))),
        ("octet core CT, symmetric weighting", worst(&|p| (propagator_core(FamilyKind::SingularDegenerate, Discrete::CT, p, EnergyWeighting::Symmetric).unwrap().s_of_p, reference::ct_octet(p)))),
    ];
    let mut ok = true;
    for (name, r) in &checks {
        let pass = *r <= TOL_MATRIX;
        ok &= pass;
        println!("  {:52} worst relative {:.3e} {}", name, r, if pass { "ok" } else { "differs" });
    }
    for (name, r) in &diagnostics {
        println!("  [diagnostic] {:39} worst relative {:.3e}", name, r);
    }
    // With Δ = 𝒞𝒯 = iγ5, Σψ¬ψ = -i(Σψψ†)γ5γ0, so a target S needs
    // Σψψ† = iSγ0γ5, which must be positive semidefinite for any family.
    let p = probes[0];
    let needed = reference::ct_octet(&p) * gamma(0).unwrap() * lounesto::clifford::gamma5() * C64::new(0.0, 1.0);
    let h = nalgebra::Matrix4::from_fn(|r, c| needed[(r, c)]);
    let eig = h.symmetric_eigenvalues();
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    println!("  [diagnostic] -i pslash would need sum psi psi^dagger with min eigenvalue {min:.3e} (must be >= 0)");
    let failed = checks.iter().filter(|(_, r)| *r > TOL_MATRIX).count();
    verdict(4, "explicit matrices", ok, &format!("({failed} of {} checks differ)", checks.len()));
    assert!(ok);
}

#[test]
fn criterion_5_identity_suite() {
    let p = Momentum::rest(1.0).unwrap();
    let duals = tabulated_duals(&p);
    let mut ok = true;
    let mut worst = [0.0f64; 5];
    for (n, d) in duals.iter().enumerate() {
        let s = property_suite(d, 1000, rng::derive(SEED, &format!("suite-{n}")), TOL_FPK);
        for (w, x) in worst.iter_mut().zip([s.fpk_worst, s.trace_worst, s.boomerang_worst, s.aggregate_worst, s.spinor_aggregate_worst]) {
            *w = w.max(x);
        }
        if !s.passed {
            println!("  {} fails: {:?}", d.label, s);
        }
        ok &= s.passed;
    }
    println!("  duals {} worst fpk {:.2e} trace {:.2e} boomerang {:.2e} aggregate {:.2e} Z-vs-spinor {:.2e}", duals.len(), worst[0], worst[1], worst[2], worst[3], worst[4]);
    verdict(5, "identity suite", ok, &format!("({} duals x 1000 spinors)", duals.len()));
    assert!(ok);
}

#[test]
fn criterion_6_no_forbidden_patterns() {
    let p = Momentum::rest(1.0).unwrap();
    let mut duals = admitted_duals(&p, SEED);
    duals.extend(tabulated_duals(&p));
    let n = duals.len();
    let random_hits: usize = (0..100_000usize)
        .filter(|t| {
            let psi = random_spinor_with(&mut rng::stream(SEED, *t as u64));
            classify(&bilinears(&psi, &duals[t % n]), TOL_CLASS).label.verdict == Verdict::Forbidden
        })
        .count();
    let sparse = sparse_pool();
    let sparse_hits: usize = sparse
        .iter()
        .map(|psi| duals.iter().filter(|d| classify(&bilinears(psi, d), TOL_CLASS).label.verdict == Verdict::Forbidden).count())
        .sum();
    println!("  random trials 100000, forbidden {random_hits}; sparse pool {} x {} duals, forbidden {sparse_hits}", sparse.len(), n);
    let ok = random_hits == 0 && sparse_hits == 0;
    verdict(6, "no forbidden patterns", ok, "");
    assert!(ok);
}

#[test]
fn criterion_7_witness_constraints() {
    let p = Momentum::rest(1.0).unwrap();
    let duals = admitted_duals(&p, SEED);
    let targets: Vec<_> = all_labels().into_iter().filter(|l| l.verdict == Verdict::Allowed).collect();
    let found = find_witnesses(&targets, &duals, 4096, SEED, 1.0, TOL_CLASS, TOL_FPK).unwrap();
    let mut ok = true;
    let (mut j_zero, mut s_zero) = (0, 0);
    for (t, w) in targets.iter().zip(&found) {
        let Some(w) = w else {
            println!("  {t:4} no witness");
            continue;
        };
        let nz = t.pattern().unwrap();
        let c = verify_constraints(t, &w.bilinears, TOL_FPK);
        if nz[0] && nz[1] && !nz[2] {
            j_zero += 1;
        }
        if nz[2] && nz[3] && !nz[4] {
            s_zero += 1;
        }
        ok &= c.all_pass();
        let items: Vec<String> = c.items.iter().map(|i| format!("{}{} {:.1e} {}", if i.informational { "[info] " } else { "" }, i.name, i.residual, if i.pass { "ok" } else { "no" })).collect();
        println!("  {t:4} {:8} {:6} {}", w.source, w.dual, items.join("; "));
    }
    println!("  checked J=0 witnesses in class 1: {j_zero}; S=0 witnesses with J,K nonzero: {s_zero}");
    ok &= j_zero > 0 && s_zero > 0;
    verdict(7, "witness constraints", ok, "");
    assert!(ok);
}

#[test]
fn criterion_8_eta_family() {
    let free = derive_eta(EtaReality::RealEntries, false);
    let parity = derive_eta(EtaReality::RealEntries, true);
    let herm = derive_eta(EtaReality::Hermitian, false);
    let z = [[C64::new(0.0, 0.0); 2]; 2];
    let one = [[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
    let upper = Matrix4::from_blocks(z, one, z, z);
    let lower = Matrix4::from_blocks(z, z, one, z);
    let g0 = gamma(0).unwrap();
    let ok = free.dimension() == 2
        && free.contains(&upper, 1e-10)
        && free.contains(&lower, 1e-10)
        && parity.dimension() == 1
        && parity.contains(&g0, 1e-10)
        && !parity.contains(&upper, 1e-10);
    println!("  dimensions: real {} / parity {} / hermitian {}", free.dimension(), parity.dimension(), herm.dimension());
    verdict(8, "metric family", ok, "");
    assert!(ok);
}

fn run_capture(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(args.iter().copied(), &mut out, &mut err);
    (code, out)
}

#[test]
fn criterion_9_determinism() {
    let invocations: Vec<Vec<&str>> = vec![
        vec!["lounesto", "table-v", "--seed", "42"],
        vec!["lounesto", "census", "--trials", "300", "--seed", "7", "--format", "csv"],
        vec!["lounesto", "enumerate-duals", "--trials", "20", "--format", "markdown"],
        vec!["lounesto", "witness", "--class", "1.6", "--budget", "64"],
        vec!["lounesto", "fpk-check", "--trials", "20", "--dual", "CT", "--dual", "P*g01"],
        vec!["lounesto", "spin-sum", "--family", "degenerate", "--dual", "CT", "--momentum", "0.3,-0.2,0.5"],
    ];
    let mut ok = true;
    for args in &invocations {
        let (c1, a) = run_capture(args);
        let (c2, b) = run_capture(args);
        let same = a == b && c1 == c2 && !a.is_empty();
        println!("  {:60} {} bytes {}", args[1..].join(" "), a.len(), if same { "identical" } else { "DIFFER" });
        ok &= same;
    }
    verdict(9, "determinism", ok, "");
    assert!(ok);
}
