use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use bbcap_core::table::{format_g, write_profile_csv, write_scan_csv, write_sweep_csv, SweepRow};
use bbcap_core::{
    analytic_k, capacity_factor, capacity_report, coherent_information, kernel_ce, kernel_q, mutual_information,
    occupation_profile, q_alt_bound, verify_no_squeezing, CapacityReport, ChannelSpec, GaussianModeState, ModeParams,
    NoiseModel, OccupationPoint, PhysicalInputs, Quantity, SpectrumSolution,
};
use clap::ValueEnum;
use rayon::prelude::*;

use crate::config::{parse_selection, unit_grid, Opts, RowKind, SweepConfig};
use crate::error::{CliError, Result};

const DEFAULT_SWEEP_POINTS: usize = 11;
const DEFAULT_PROFILE_POINTS: usize = 200;
const DEFAULT_FIGURE_POINTS: usize = 101;

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| CliError::Pool(e.to_string()))
}

/// Writes to `path`, or to stdout when no path is given.
fn emit(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

fn row(spec: &ChannelSpec, kind: RowKind, sol: &bbcap_core::Result<SpectrumSolution>) -> SweepRow {
    let mut r = SweepRow {
        model: spec.model.as_str().to_string(),
        quantity: kind.as_str().to_string(),
        eta: spec.eta,
        nbar: spec.nbar,
        rho_t: spec.rho_t,
        y0: f64::NAN,
        f: f64::NAN,
        factor: f64::NAN,
        error: None,
    };
    match sol {
        Ok(s) => {
            r.y0 = s.y0;
            r.f = s.f_value;
            r.factor = match kind {
                RowKind::Factor(_) => s.factor,
                RowKind::QAlt => q_alt_bound(s.factor),
            };
        }
        Err(e) => r.error = Some(format!("{}: {e}", e.kind())),
    }
    r
}

fn point_rows(spec: &ChannelSpec, kinds: &[RowKind]) -> Vec<SweepRow> {
    let mut ce = None;
    let mut rows = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        let r = match kind {
            RowKind::Factor(Quantity::Ce) | RowKind::QAlt => {
                let sol = ce.get_or_insert_with(|| capacity_factor(Quantity::Ce, spec));
                row(spec, kind, sol)
            }
            RowKind::Factor(q) => row(spec, kind, &capacity_factor(q, spec)),
        };
        rows.push(r);
    }
    rows
}

/// One row per channel per kind, in input order whatever the thread count.
pub fn sweep_rows(specs: &[ChannelSpec], kinds: &[RowKind], jobs: usize) -> Result<Vec<SweepRow>> {
    let grouped: Vec<Vec<SweepRow>> = pool(jobs)?.install(|| specs.par_iter().map(|s| point_rows(s, kinds)).collect());
    Ok(grouped.into_iter().flatten().collect())
}

pub fn run_sweep(o: &Opts) -> Result<()> {
    let mut cfg = SweepConfig::resolve(o, "0")?;
    if o.eta.is_none() {
        cfg.etas = unit_grid(cfg.points.unwrap_or(DEFAULT_SWEEP_POINTS))?;
    }
    let kinds = parse_selection(o.quantity.as_deref().unwrap_or("all"))?;
    let specs: Vec<ChannelSpec> = cfg.etas.iter().map(|&e| cfg.spec(e)).collect();
    let rows = sweep_rows(&specs, &kinds, cfg.jobs)?;
    emit(cfg.out.as_deref(), |w| write_sweep_csv(w, &rows))
}

/// Optimal occupations on `points` equally spaced frequencies up to `xmax`.
///
/// Without `xmax` the grid ends a quarter past the last support interval.
pub fn profile_points(
    quantity: Quantity,
    spec: &ChannelSpec,
    points: usize,
    xmax: Option<f64>,
) -> Result<Vec<OccupationPoint>> {
    let sol = capacity_factor(quantity, spec)?;
    let xmax = xmax.unwrap_or_else(|| sol.support.last().map_or(1.0, |s| 1.25 * s.1));
    let xs: Vec<f64> = (1..=points).map(|i| xmax * i as f64 / points as f64).collect();
    if sol.support.is_empty() {
        return Ok(xs.into_iter().map(|x| OccupationPoint { x, n: 0.0, clamped: true }).collect());
    }
    Ok(occupation_profile(quantity, spec, sol.y0, &xs)?)
}

fn single_quantity(o: &Opts, default: &str) -> Result<Quantity> {
    match parse_selection(o.quantity.as_deref().unwrap_or(default))?.as_slice() {
        [RowKind::Factor(q)] => Ok(*q),
        _ => Err(CliError::config("profile needs one of ce, c_lower, q_lower")),
    }
}

pub fn run_profile(o: &Opts) -> Result<()> {
    let cfg = SweepConfig::resolve(o, "0.5")?;
    let quantity = single_quantity(o, "c_lower")?;
    let spec = cfg.spec(cfg.single_eta()?);
    let pts = profile_points(quantity, &spec, cfg.points.unwrap_or(DEFAULT_PROFILE_POINTS), cfg.xmax)?;
    emit(cfg.out.as_deref(), |w| write_profile_csv(w, &pts))
}

pub fn write_report<W: Write + ?Sized>(w: &mut W, r: &CapacityReport) -> io::Result<()> {
    let rc = r.rc_bits_per_sec;
    writeln!(w, "model            {}", r.spec.model)?;
    writeln!(w, "eta              {}", format_g(r.spec.eta))?;
    if r.spec.model == NoiseModel::WhiteNoise {
        writeln!(w, "nbar             {}", format_g(r.spec.nbar))?;
    }
    writeln!(w, "rho_t            {}", format_g(r.spec.rho_t))?;
    writeln!(w, "power_w          {}", format_g(r.inputs.power))?;
    writeln!(w, "temperature_k    {}", format_g(r.inputs.temperature))?;
    writeln!(w, "time_s           {}", format_g(r.inputs.transmission_time))?;
    writeln!(w, "rc_bits_per_s    {}", format_g(rc))?;
    if r.spec.has_char_freq() {
        writeln!(
            w,
            "y0               ce={} c_lower={} q_lower={}",
            format_g(r.y0_ce),
            format_g(r.y0_c),
            format_g(r.y0_q)
        )?;
    }
    writeln!(w)?;
    writeln!(w, "{:<10} {:>18} {:>18} {:>18}", "quantity", "factor", "bits_per_s", "bits")?;
    for (name, factor) in r.factors() {
        writeln!(
            w,
            "{:<10} {:>18} {:>18} {:>18}",
            name,
            format_g(factor),
            format_g(factor * rc),
            format_g(r.absolute(factor))
        )?;
    }
    Ok(())
}

pub fn run_report(o: &Opts) -> Result<()> {
    let cfg = SweepConfig::resolve(o, "0.5")?;
    let power = cfg.power.ok_or_else(|| CliError::config("report needs --power"))?;
    let inputs = PhysicalInputs::new(power, cfg.temperature, cfg.time)?;
    let report = capacity_report(&cfg.spec(cfg.single_eta()?), &inputs)?;
    emit(cfg.out.as_deref(), |w| write_report(w, &report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

/// White-noise levels of the fig2 sweep.
pub const FIG2_NBAR: [f64; 4] = [0.01, 0.1, 1.0, 10.0];
/// Thermal ratios of the fig4 sweep.
pub const FIG4_RHO: [f64; 5] = [0.1, 0.25, 0.41, 1.0, 2.0];
/// Photon numbers `N` of the fig7 scans (`λ₊ + λ₋ = 2N + 1`).
pub const FIG7_N: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

fn write_file(dir: &Path, name: &str, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<PathBuf> {
    let path = dir.join(name);
    emit(Some(&path), body)?;
    Ok(path)
}

/// Writes the CSV files behind one figure into `dir` and returns their paths.
pub fn figure_data(fig: Figure, dir: &Path, points: usize, jobs: usize) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let etas = unit_grid(points)?;
    let all = parse_selection("all")?;
    let sweep = |name: &str, specs: Vec<ChannelSpec>| -> Result<Vec<PathBuf>> {
        let rows = sweep_rows(&specs, &all, jobs)?;
        Ok(vec![write_file(dir, name, |w| write_sweep_csv(w, &rows))?])
    };
    let profiles = |stem: &str, spec: ChannelSpec| -> Result<Vec<PathBuf>> {
        let per: Vec<Result<Vec<OccupationPoint>>> = pool(jobs)?
            .install(|| Quantity::ALL.par_iter().map(|&q| profile_points(q, &spec, 2 * points, None)).collect());
        let mut out = Vec::new();
        for (q, pts) in Quantity::ALL.iter().zip(per) {
            let pts = pts?;
            out.push(write_file(dir, &format!("{stem}_{}.csv", q.as_str()), |w| write_profile_csv(w, &pts))?);
        }
        Ok(out)
    };
    match fig {
        Figure::Fig1 => sweep("fig1.csv", etas.iter().map(|&e| ChannelSpec::loss(e)).collect()),
        Figure::Fig2 => sweep(
            "fig2.csv",
            FIG2_NBAR.iter().flat_map(|&n| etas.iter().map(move |&e| ChannelSpec::white(e, n))).collect(),
        ),
        Figure::Fig3 => profiles("fig3", ChannelSpec::white(0.7, 1.0)),
        Figure::Fig4 => sweep(
            "fig4.csv",
            FIG4_RHO.iter().flat_map(|&r| etas.iter().map(move |&e| ChannelSpec::thermal(e, r))).collect(),
        ),
        Figure::Fig5 => profiles("fig5", ChannelSpec::thermal(0.7, 0.41)),
        Figure::Fig6 => sweep("fig6.csv", etas.iter().map(|&e| ChannelSpec::dephasing(e)).collect()),
        Figure::Fig7 => {
            let ch = ModeParams::new(0.0, 0.1, 0.8)?;
            let mut out = Vec::new();
            for n in FIG7_N {
                let scan = verify_no_squeezing(n, &ch, points)?;
                let name = format!("fig7_sum_{}.csv", format_g(2.0 * n + 1.0));
                out.push(write_file(dir, &name, |w| write_scan_csv(w, &scan.samples))?);
            }
            Ok(out)
        }
    }
}

pub fn run_figure(fig: Figure, o: &Opts) -> Result<()> {
    let points = o.points.unwrap_or(DEFAULT_FIGURE_POINTS);
    let dir = o.out.clone().unwrap_or_else(|| PathBuf::from("."));
    for path in figure_data(fig, &dir, points, o.jobs.unwrap_or(0))? {
        println!("{}", path.display());
    }
    Ok(())
}

/// One verification check.
#[derive(Debug, Clone)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub passed: bool,
    pub error: Option<String>,
}

impl Check {
    fn near(suite: &'static str, name: String, observed: bbcap_core::Result<f64>, expected: f64, tol: f64) -> Self {
        match observed {
            Ok(v) => Check { suite, name, observed: v, expected, passed: (v - expected).abs() <= tol, error: None },
            Err(e) => Check::failed(suite, name, expected, e),
        }
    }

    fn holds(suite: &'static str, name: String, observed: f64, expected: f64, ok: bool) -> Self {
        Check { suite, name, observed, expected, passed: ok, error: None }
    }

    fn failed(suite: &'static str, name: String, expected: f64, e: bbcap_core::CapacityError) -> Self {
        Check { suite, name, observed: f64::NAN, expected, passed: false, error: Some(e.to_string()) }
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{status} {} {}: observed={} expected={}",
            self.suite,
            self.name,
            format_g(self.observed),
            format_g(self.expected)
        );
        if let Some(e) = &self.error {
            s.push_str(&format!(" error={e}"));
        }
        s
    }
}

pub const SUITES: [&str; 5] = ["analytic", "oracle", "ordering", "limits", "no-squeezing"];

fn analytic_suite(etas: &[f64]) -> Vec<Check> {
    let mut specs = Vec::new();
    for &e in etas {
        specs.push(ChannelSpec::loss(e));
        specs.push(ChannelSpec::white(e, 1.0));
        specs.push(ChannelSpec::thermal(e, 0.5));
        specs.push(ChannelSpec::thermal(e, 2.0));
    }
    specs
        .par_iter()
        .map(|s| {
            let name = format!(
                "c_lower {} eta={} nbar={} rho_t={}",
                s.model,
                format_g(s.eta),
                format_g(s.nbar),
                format_g(s.rho_t)
            );
            match analytic_k(s) {
                Ok(k) => Check::near("analytic", name, capacity_factor(Quantity::CLower, s).map(|x| x.factor), k, 1e-5),
                Err(e) => Check::failed("analytic", name, f64::NAN, e),
            }
        })
        .collect()
}

fn oracle_suite() -> Vec<Check> {
    let mut out = Vec::new();
    for &(n, nbar, eta) in &[(0.5, 0.0, 0.3), (1.0, 0.1, 0.8), (2.0, 1.0, 0.5), (5.0, 0.3, 0.95), (0.01, 2.0, 0.1)] {
        let p = match ModeParams::new(n, nbar, eta) {
            Ok(p) => p,
            Err(e) => {
                out.push(Check::failed("oracle", format!("params n={n}"), f64::NAN, e));
                continue;
            }
        };
        let s = GaussianModeState::thermal(n);
        let tag = format!("n={} nbar={} eta={}", format_g(n), format_g(nbar), format_g(eta));
        let pairs = [
            ("ce", kernel_ce(&p), s.as_ref().map_err(Clone::clone).and_then(|s| mutual_information(s, &p))),
            ("q_lower", kernel_q(&p), s.as_ref().map_err(Clone::clone).and_then(|s| coherent_information(s, &p))),
        ];
        for (what, kernel, oracle) in pairs {
            let name = format!("{what} {tag}");
            match kernel {
                Ok(k) => out.push(Check::near("oracle", name, oracle, k, 1e-9)),
                Err(e) => out.push(Check::failed("oracle", name, f64::NAN, e)),
            }
        }
    }
    out
}

fn ordering_suite(etas: &[f64]) -> Vec<Check> {
    let mut specs = Vec::new();
    for &e in etas {
        specs.push(ChannelSpec::loss(e));
        specs.push(ChannelSpec::white(e, 1.0));
        specs.push(ChannelSpec::thermal(e, 0.41));
        specs.push(ChannelSpec::dephasing(e));
    }
    let per: Vec<Vec<Check>> = specs
        .par_iter()
        .map(|s| {
            let tag = format!("{} eta={}", s.model, format_g(s.eta));
            let fs: bbcap_core::Result<Vec<f64>> =
                Quantity::ALL.iter().map(|&q| capacity_factor(q, s).map(|x| x.factor)).collect();
            let [ce, k, q] = match fs {
                Ok(v) => [v[0], v[1], v[2]],
                Err(e) => return vec![Check::failed("ordering", tag, f64::NAN, e)],
            };
            let slack = 1e-9;
            let qmax = q.max(q_alt_bound(ce));
            vec![
                Check::holds("ordering", format!("c_lower<=ce {tag}"), k, ce, k <= ce + slack),
                Check::holds("ordering", format!("c_lower<=1 {tag}"), k, 1.0, k <= 1.0 + slack),
                Check::holds("ordering", format!("q<=ce/2 {tag}"), qmax, ce / 2.0, qmax <= ce / 2.0 + slack),
            ]
        })
        .collect();
    per.into_iter().flatten().collect()
}

fn limits_suite() -> Vec<Check> {
    let factor = |q, s: ChannelSpec| capacity_factor(q, &s).map(|x| x.factor);
    let mut out = vec![
        Check::near("limits", "ce loss eta=1".into(), factor(Quantity::Ce, ChannelSpec::loss(1.0)), 2.0, 1e-6),
        Check::near("limits", "ce loss eta=0.5".into(), factor(Quantity::Ce, ChannelSpec::loss(0.5)), 1.0, 1e-3),
        Check::near(
            "limits",
            "q_lower loss eta=0.5".into(),
            factor(Quantity::QLower, ChannelSpec::loss(0.5)),
            0.0,
            1e-6,
        ),
        Check::near(
            "limits",
            "c_lower thermal rho_t=0 eta=0.3".into(),
            factor(Quantity::CLower, ChannelSpec::thermal(0.3, 0.0)),
            0.3f64.sqrt(),
            1e-6,
        ),
    ];
    for q in Quantity::ALL {
        let name = format!("{} white nbar=1e-6 vs loss eta=0.7", q.as_str());
        match factor(q, ChannelSpec::loss(0.7)) {
            Ok(reference) => {
                out.push(Check::near("limits", name, factor(q, ChannelSpec::white(0.7, 1e-6)), reference, 1e-3))
            }
            Err(e) => out.push(Check::failed("limits", name, f64::NAN, e)),
        }
    }
    out
}

fn no_squeezing_suite(points: usize) -> Vec<Check> {
    let ch = match ModeParams::new(0.0, 0.1, 0.8) {
        Ok(c) => c,
        Err(e) => return vec![Check::failed("no-squeezing", "channel".into(), 0.0, e)],
    };
    FIG7_N
        .iter()
        .map(|&n| {
            let name = format!("argmax lambda_diff sum={}", format_g(2.0 * n + 1.0));
            match verify_no_squeezing(n, &ch, points) {
                Ok(s) => Check::holds("no-squeezing", name, s.argmax_diff, 0.0, s.achieved_at_zero),
                Err(e) => Check::failed("no-squeezing", name, 0.0, e),
            }
        })
        .collect()
}

/// Runs the selected suites (all when `suite` is `None`).
pub fn verify_checks(suite: Option<&str>, etas: &[f64], points: usize, jobs: usize) -> Result<Vec<Check>> {
    let selected: Vec<&str> = match suite {
        None | Some("all") => SUITES.to_vec(),
        Some(s) if SUITES.contains(&s) => vec![s],
        Some(s) => {
            return Err(CliError::config(format!("unknown suite '{s}' (expected one of {})", SUITES.join(", "))))
        }
    };
    let pool = pool(jobs)?;
    let mut checks = Vec::new();
    for s in selected {
        checks.extend(pool.install(|| match s {
            "analytic" => analytic_suite(etas),
            "oracle" => oracle_suite(),
            "ordering" => ordering_suite(etas),
            "limits" => limits_suite(),
            _ => no_squeezing_suite(points),
        }));
    }
    Ok(checks)
}

pub fn run_verify(o: &Opts) -> Result<()> {
    let etas = match &o.eta {
        Some(_) => SweepConfig::resolve(o, "0")?.etas,
        None => (1..=10).map(|i| i as f64 / 10.0).collect(),
    };
    let points = o.points.unwrap_or(DEFAULT_FIGURE_POINTS);
    if points < 2 {
        return Err(CliError::config(format!("points = {points} must be >= 2")));
    }
    let checks = verify_checks(o.suite.as_deref(), &etas, points, o.jobs.unwrap_or(0))?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    emit(o.out.as_deref(), |w| {
        for c in &checks {
            writeln!(w, "{}", c.line())?;
        }
        writeln!(w, "{} of {} checks passed", checks.len() - failed, checks.len())
    })?;
    if failed > 0 {
        return Err(CliError::Verify { failed, total: checks.len() });
    }
    Ok(())
}
