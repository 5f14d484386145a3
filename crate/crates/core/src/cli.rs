//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::algebra::{Matrix4, C64};
use crate::bilinear::{bilinears, fpk_check, property_suite, BilinearSet, FpkReport};
use crate::classify::{all_labels, census, classify, find_witnesses, verify_constraints, LounestoLabel, Verdict, TABLE_I, TABLE_II};
use crate::clifford::{derive_eta, EtaReality};
use crate::dual::{enumerate_candidates, filter_admissible, parse_dual, select_candidates, AntilinearConvention, Column, DualOperator};
use crate::error::{Error, Result};
use crate::momentum::{probe_momenta, Momentum};
use crate::reference;
use crate::report::{parse_reals, ConfigOverrides, OutputFormat, Report, RunConfig, Table};
use crate::rng;
use crate::spinor::{FamilyKind, Spinor};
use crate::spinsum::{covariance_analysis, family_spin_sum, propagator_core, table_v, EnergyWeighting};
use crate::symmetry::{relation_table, Discrete};

/// Trials used when admissibility is computed on the way to another command.
const ADMISSIBILITY_TRIALS: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "lounesto", version, about = "Spinor bilinears with general duals: classification, dual tables and spin sums")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Flat `key = value` config file (seed, mass, momentum, trials, format, tau_*).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    /// Momentum as `px,py,pz` or `E,px,py,pz` (checked against the mass shell).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub momentum: Option<String>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// json, csv or markdown.
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true)]
    pub tau_zero: Option<f64>,
    #[arg(long, global = true)]
    pub tau_fpk: Option<f64>,
    #[arg(long, global = true)]
    pub tau_class: Option<f64>,
    #[arg(long, global = true)]
    pub tau_fit: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one spinor under one dual.
    Classify(SpinorArgs),
    /// Print the bilinear covariants and FPK residuals.
    Bilinears(SpinorArgs),
    /// FPK, trace and boomerang identities over random spinors.
    FpkCheck {
        /// Dual labels; defaults to the Dirac dual plus every tabulated dual.
        #[arg(long)]
        dual: Vec<String>,
    },
    /// Build the row-by-column dual grid and filter it.
    EnumerateDuals {
        #[arg(long)]
        verify: bool,
        /// How the constraint reads for antilinear Δ: dagger or transpose.
        #[arg(long, default_value = "dagger")]
        convention: String,
    },
    /// Class counts over random spinors.
    Census {
        #[arg(long)]
        dual: Vec<String>,
    },
    /// Search for spinor and dual realising allowed classes.
    Witness {
        /// Target class such as `1.6`; all allowed classes when absent.
        #[arg(long)]
        class: Option<String>,
        /// Gaussian draws after the structured pools.
        #[arg(long, default_value_t = 4096)]
        budget: usize,
    },
    /// Spin sum, propagator core and covariance fit for one family and dual.
    SpinSum {
        /// regular, singular or degenerate.
        #[arg(long, default_value = "regular")]
        family: String,
        #[arg(long, default_value = "CT")]
        dual: String,
        /// symmetric, or offshell[:p0] (p0 defaults to E).
        #[arg(long, default_value = "symmetric")]
        weighting: String,
        #[arg(long, default_value_t = 5)]
        probes: usize,
    },
    /// Spin-sum behaviour grid for all eight duals and three families.
    TableV {
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 5)]
        probes: usize,
    },
    /// Allowed and forbidden patterns and the operator product table.
    Tables {
        #[arg(long)]
        verify: bool,
    },
    /// Solve the metric conditions for η.
    DeriveEta {
        #[arg(long)]
        parity: bool,
        /// Hermitian η instead of real entries.
        #[arg(long)]
        hermitian: bool,
    },
}

#[derive(Debug, Args)]
pub struct SpinorArgs {
    /// Eight reals: re0,im0,re1,im1,re2,im2,re3,im3.
    #[arg(long, allow_hyphen_values = true)]
    pub spinor: String,
    /// Dual label: I, P, C, T, CP, CT, PT, CPT, a gamma token such as g1 or
    /// g05, a product such as CT*g51, or a weighted sum such as I+0.5*P.
    #[arg(long, default_value = "I")]
    pub dual: String,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Bilinears(_) => "bilinears",
            Command::FpkCheck { .. } => "fpk-check",
            Command::EnumerateDuals { .. } => "enumerate-duals",
            Command::Census { .. } => "census",
            Command::Witness { .. } => "witness",
            Command::SpinSum { .. } => "spin-sum",
            Command::TableV { .. } => "table-v",
            Command::Tables { .. } => "tables",
            Command::DeriveEta { .. } => "derive-eta",
        }
    }
}

fn fmt_f(x: f64) -> String {
    let s = format!("{x:.9}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0".into()
    } else {
        s
    }
}

fn fmt_c(z: C64) -> String {
    match (fmt_f(z.re).as_str(), fmt_f(z.im).as_str()) {
        ("0", "0") => "0".into(),
        (re, "0") => re.into(),
        ("0", im) => format!("{im}i"),
        (re, im) if im.starts_with('-') => format!("{re}{im}i"),
        (re, im) => format!("{re}+{im}i"),
    }
}

fn matrix_table(m: &Matrix4) -> Table {
    let mut t = Table::new(&["row", "c0", "c1", "c2", "c3"]);
    for r in 0..4 {
        let mut row = vec![r.to_string()];
        row.extend((0..4).map(|c| fmt_c(m[(r, c)])));
        t.push(row);
    }
    t
}

fn bilinear_table(b: &BilinearSet) -> Table {
    let mut t = Table::new(&["quantity", "value"]);
    t.push(vec!["sigma".into(), fmt_c(b.sigma)]);
    t.push(vec!["omega".into(), fmt_c(b.omega)]);
    for mu in 0..4 {
        t.push(vec![format!("J_{mu}"), fmt_c(b.j[mu])]);
    }
    for mu in 0..4 {
        t.push(vec![format!("K_{mu}"), fmt_c(b.k[mu])]);
    }
    for (n, (mu, nu)) in crate::bilinear::PAIRS.iter().enumerate() {
        t.push(vec![format!("S_{mu}{nu}"), fmt_c(b.s[n])]);
    }
    t
}

fn fpk_table(r: &FpkReport) -> Table {
    let mut t = Table::new(&["identity", "relative residual", "pass"]);
    for k in 0..4 {
        t.push(vec![FpkReport::NAMES[k].into(), format!("{:.3e}", r.residuals[k]), r.pass[k].to_string()]);
    }
    t
}

fn parse_spinor(s: &str) -> Result<Spinor> {
    Spinor::from_reals(&parse_reals(s)?)
}

fn parse_label(s: &str) -> Result<LounestoLabel> {
    LounestoLabel::parse(s).ok_or_else(|| Error::Parse(format!("unknown class '{s}'")))
}

/// Dirac dual followed by every dual printed in the admissibility table.
pub fn tabulated_duals(p: &Momentum) -> Vec<DualOperator> {
    let grid = enumerate_candidates(p);
    let mut v = vec![DualOperator::dirac().relabel("Dirac")];
    v.extend(select_candidates(&grid, reference::table_iv));
    v
}

/// Duals that pass the constraint and FPK filter at `p`.
pub fn admitted_duals(p: &Momentum, seed: u64) -> Vec<DualOperator> {
    let grid = enumerate_candidates(p);
    let adm = filter_admissible(&grid, ADMISSIBILITY_TRIALS, seed, AntilinearConvention::Dagger);
    select_candidates(&grid, |r, c| adm.admitted_indices(r, c))
}

fn resolve_duals(labels: &[String], p: &Momentum) -> Result<Vec<DualOperator>> {
    if labels.is_empty() {
        return Ok(tabulated_duals(p));
    }
    labels.iter().map(|l| parse_dual(l, p)).collect()
}

fn parse_weighting(s: &str, p: &Momentum) -> Result<EnergyWeighting> {
    match s.trim() {
        "symmetric" => Ok(EnergyWeighting::Symmetric),
        "offshell" => Ok(EnergyWeighting::OffShell(p.energy)),
        o => match o.strip_prefix("offshell:") {
            Some(v) => v.parse::<f64>().map(EnergyWeighting::OffShell).map_err(|_| Error::Parse(format!("bad p0 '{v}'"))),
            None => Err(Error::Parse(format!("unknown weighting '{o}'"))),
        },
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report values serialise")
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Report> {
    let p = cfg.momentum_value()?;
    let tol = cfg.tolerances;
    let name = cmd.name();
    Ok(match cmd {
        Command::Classify(a) => {
            let psi = parse_spinor(&a.spinor)?;
            let d = parse_dual(&a.dual, &p)?;
            let b = bilinears(&psi, &d);
            let c = classify(&b, tol.class);
            let cons = verify_constraints(&c.label, &b, tol.fpk);
            let mut t = Table::new(&["field", "value"]);
            t.push(vec!["dual".into(), d.label.clone()]);
            t.push(vec!["class".into(), c.label.to_string()]);
            t.push(vec!["pattern (s w J K S)".into(), c.pattern.render()]);
            t.push(vec!["margin (decades)".into(), format!("{:.3}", c.pattern.margin)]);
            for i in &cons.items {
                t.push(vec![i.name.clone(), format!("{:.3e} {}", i.residual, if i.pass { "pass" } else { "fail" })]);
            }
            let res = json!({"dual": d.label, "admissible": d.admissible, "label": c.label.to_string(), "classification": to_value(&c), "constraints": to_value(&cons), "bilinears": to_value(&b)});
            Report::new(name, cfg, res).with_table("classification", t).with_table("bilinears", bilinear_table(&b))
        }
        Command::Bilinears(a) => {
            let psi = parse_spinor(&a.spinor)?;
            let d = parse_dual(&a.dual, &p)?;
            let b = bilinears(&psi, &d);
            let f = fpk_check(&b, tol.fpk);
            let res = json!({"dual": d.label, "bilinears": to_value(&b), "fpk": to_value(&f)});
            Report::new(name, cfg, res).with_table("bilinears", bilinear_table(&b)).with_table("FPK identities", fpk_table(&f))
        }
        Command::FpkCheck { dual } => {
            let duals = resolve_duals(dual, &p)?;
            let mut t = Table::new(&["dual", "fpk", "trace", "boomerang", "aggregate", "Z vs 4 psi dual", "pass"]);
            let mut out = Vec::new();
            for (n, d) in duals.iter().enumerate() {
                let s = property_suite(d, cfg.trials, rng::derive(cfg.seed, &format!("fpk-check-{n}")), tol.fpk);
                t.push(vec![
                    s.dual.clone(),
                    format!("{:.3e}", s.fpk_worst),
                    format!("{:.3e}", s.trace_worst),
                    format!("{:.3e}", s.boomerang_worst),
                    format!("{:.3e}", s.aggregate_worst),
                    format!("{:.3e}", s.spinor_aggregate_worst),
                    s.passed.to_string(),
                ]);
                out.push(s);
            }
            let all = out.iter().all(|s| s.passed);
            Report::new(name, cfg, json!({"all_pass": all, "duals": to_value(&out)})).with_table("identity residuals (worst relative)", t)
        }
        Command::EnumerateDuals { verify, convention } => {
            let conv = match convention.as_str() {
                "dagger" => AntilinearConvention::Dagger,
                "transpose" => AntilinearConvention::Transpose,
                o => return Err(Error::Parse(format!("unknown convention '{o}'"))),
            };
            let grid = enumerate_candidates(&p);
            let adm = filter_admissible(&grid, cfg.trials, cfg.seed, conv);
            let cols = Column::all();
            let mut headers = vec!["".to_string()];
            headers.extend(cols.iter().map(|c| c.header()));
            let mut t = Table { headers, rows: Vec::new() };
            for row in Discrete::ALL {
                let mut r = vec![row.symbol().to_string()];
                for col in &cols {
                    let names: Vec<String> = adm.cell(row, *col).iter().filter(|v| v.admitted()).map(|v| v.name.clone()).collect();
                    r.push(if names.is_empty() { "-".into() } else { names.join(", ") });
                }
                t.push(r);
            }
            let diffs = crate::dual::compare_grid(&adm, reference::table_iv);
            let mut rep = Report::new(name, cfg, json!({"candidates": grid.count(), "admitted": adm.admitted_count(), "grid": to_value(&adm), "differences": to_value(&diffs)}))
                .with_table("admissible duals", t);
            if *verify {
                let mut dt = Table::new(&["row", "column", "missing", "extra"]);
                for d in &diffs {
                    let show = |v: &[String]| v.iter().map(|i| if i.is_empty() { "(operator)".to_string() } else { i.clone() }).collect::<Vec<_>>().join(" ");
                    dt.push(vec![d.row.symbol().into(), d.column.header(), show(&d.missing), show(&d.extra)]);
                }
                rep = rep.with_table("differences from the reference table", dt);
                rep.verified = Some(diffs.is_empty());
            }
            rep
        }
        Command::Census { dual } => {
            let duals = resolve_duals(dual, &p)?;
            let counts = census(&duals, cfg.trials, cfg.seed, tol.class);
            let mut t = Table::new(&["dual", "class", "count"]);
            let mut rows = Vec::new();
            for ((d, l), n) in &counts {
                t.push(vec![d.clone(), l.clone(), n.to_string()]);
                rows.push(json!({"dual": d, "class": l, "count": n}));
            }
            let forbidden: usize = counts.iter().filter(|((_, l), _)| l.ends_with('*')).map(|(_, n)| n).sum();
            Report::new(name, cfg, json!({"counts": rows, "forbidden_total": forbidden})).with_table("class census", t)
        }
        Command::Witness { class, budget } => {
            let targets: Vec<LounestoLabel> = match class {
                Some(c) => vec![parse_label(c)?],
                None => all_labels().into_iter().filter(|l| l.verdict == Verdict::Allowed).collect(),
            };
            let duals = admitted_duals(&p, cfg.seed);
            let found = find_witnesses(&targets, &duals, *budget, rng::derive(cfg.seed, "witness"), cfg.mass, tol.class, tol.fpk)?;
            let mut t = Table::new(&["class", "found", "source", "dual", "spinor", "constraints"]);
            let mut out = Vec::new();
            for (target, w) in targets.iter().zip(&found) {
                match w {
                    Some(w) => t.push(vec![
                        target.to_string(),
                        "yes".into(),
                        w.source.clone(),
                        w.dual.clone(),
                        w.spinor.components.iter().map(|z| fmt_c(*z)).collect::<Vec<_>>().join(", "),
                        w.constraints.items.iter().map(|i| format!("{}: {:.1e}", i.name, i.residual)).collect::<Vec<_>>().join("; "),
                    ]),
                    None => t.push(vec![target.to_string(), "no".into(), "-".into(), "-".into(), "-".into(), "-".into()]),
                }
                out.push(json!({"class": target.to_string(), "witness": to_value(w)}));
            }
            Report::new(name, cfg, json!({"witnesses": out})).with_table("witnesses", t)
        }
        Command::SpinSum { family, dual, weighting, probes } => {
            let kind = FamilyKind::parse(family).ok_or_else(|| Error::Parse(format!("unknown family '{family}'")))?;
            let d = Discrete::parse(dual).ok_or_else(|| Error::Parse(format!("spin sums take a discrete dual, got '{dual}'")))?;
            let w = parse_weighting(weighting, &p)?;
            let sum = family_spin_sum(kind, d, &p)?;
            let core = propagator_core(kind, d, &p, w)?;
            let pr = probe_momenta(cfg.seed, *probes, cfg.mass)?;
            let fit = covariance_analysis(kind, d, &pr, tol.fit)?;
            let mut ft = Table::new(&["field", "value"]);
            ft.push(vec!["verdict".into(), fit.verdict.mark().into()]);
            ft.push(vec!["fit".into(), fit.coefficients.render()]);
            ft.push(vec!["relative residual".into(), format!("{:.3e}", fit.residual)]);
            if let Some(s) = fit.star_form {
                ft.push(vec!["star form".into(), s.describe()]);
            }
            Report::new(name, cfg, json!({"family": kind.name(), "dual": d.ascii(), "spin_sum": to_value(&sum), "propagator_core": to_value(&core), "covariance": to_value(&fit)}))
                .with_table("spin sum", matrix_table(&sum))
                .with_table("propagator core", matrix_table(&core.s_of_p))
                .with_table("covariance fit", ft)
        }
        Command::TableV { verify, probes } => {
            let pr = probe_momenta(cfg.seed, *probes, cfg.mass)?;
            let tv = table_v(&pr, tol.fit);
            let mut t = Table::new(&["Δ", "Regular spinors", "Singular spinors", "Singular spinors (with degeneracy beyond spin)"]);
            let mut mismatches = Vec::new();
            for d in Discrete::ALL {
                let mut r = vec![d.symbol().to_string()];
                for k in FamilyKind::ALL {
                    let cell = tv.cell(d, k);
                    let want = reference::table_v(d, k);
                    if cell.verdict() != Some(want) {
                        mismatches.push(json!({"dual": d.ascii(), "family": k.name(), "computed": cell.mark(), "reference": want.mark()}));
                    }
                    r.push(cell.mark());
                }
                t.push(r);
            }
            let mut rep = Report::new(name, cfg, json!({"table": to_value(&tv), "mismatches": mismatches}));
            rep = rep.with_table("spin sum behaviour", t);
            if *verify {
                rep.verified = Some(mismatches.is_empty());
            }
            rep
        }
        Command::Tables { verify } => {
            let mut t1 = Table::new(&["class", "sigma", "omega", "J", "K", "S"]);
            for (l, pat) in TABLE_I.iter().chain(TABLE_II.iter()) {
                let mut r = vec![l.to_string()];
                r.extend(pat.iter().map(|nz| if *nz { "≠0".to_string() } else { "=0".to_string() }));
                t1.push(r);
            }
            let rel = relation_table(&p);
            let mut headers = vec!["".to_string()];
            headers.extend(Discrete::ALL.iter().map(|d| d.symbol().to_string()));
            let mut t3 = Table { headers, rows: Vec::new() };
            let mut mismatches = Vec::new();
            for r in Discrete::ALL {
                let mut row = vec![r.symbol().to_string()];
                for c in Discrete::ALL {
                    let got = rel.get(r, c);
                    if *got != reference::table_iii(r, c) {
                        mismatches.push(json!({"row": r.ascii(), "col": c.ascii(), "computed": got.render(), "reference": reference::table_iii(r, c).render()}));
                    }
                    row.push(got.render());
                }
                t3.push(row);
            }
            let mut rep = Report::new(name, cfg, json!({"allowed": TABLE_I.len(), "forbidden": TABLE_II.len(), "relation_mismatches": mismatches}))
                .with_table("allowed and forbidden patterns", t1)
                .with_table("operator products (row · column)", t3);
            if *verify {
                rep.verified = Some(mismatches.is_empty());
            }
            rep
        }
        Command::DeriveEta { parity, hermitian } => {
            let reality = if *hermitian { EtaReality::Hermitian } else { EtaReality::RealEntries };
            let sol = derive_eta(reality, *parity);
            let mut rep = Report::new(name, cfg, json!({"dimension": sol.dimension(), "solution": to_value(&sol)}));
            for (k, m) in sol.basis.iter().enumerate() {
                rep = rep.with_table(&format!("basis element {k}"), matrix_table(m));
            }
            rep
        }
    })
}

fn overrides(g: &GlobalArgs) -> Result<ConfigOverrides> {
    Ok(ConfigOverrides {
        seed: g.seed,
        tau_zero: g.tau_zero,
        tau_fpk: g.tau_fpk,
        tau_class: g.tau_class,
        tau_fit: g.tau_fit,
        momentum: g.momentum.as_deref().map(parse_reals).transpose()?,
        mass: g.mass,
        trials: g.trials,
        format: g.format.as_deref().map(str::parse::<OutputFormat>).transpose()?,
    })
}

/// Runs one invocation, writing the report to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = (|| -> Result<(Report, OutputFormat)> {
        let file = cli.global.config.as_deref().map(ConfigOverrides::from_file).transpose()?;
        let cfg = RunConfig::resolve(file.as_ref(), &overrides(&cli.global)?)?;
        Ok((execute(&cli.command, &cfg)?, cfg.format))
    })();
    match result.and_then(|(r, f)| r.render(f).map(|s| (r, s))) {
        Ok((rep, text)) => {
            let _ = out.write_all(text.as_bytes());
            if rep.verified == Some(false) {
                let _ = writeln!(err, "verification failed: computed table differs from the reference one");
                2
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
