use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use static_vacua::catalog::default_catalog;
use static_vacua::csv::{fmt_f64, to_csv};
use static_vacua::diagnostics::{default_levels, hawking_mass, run_report, verify, ReportConfig};
use static_vacua::horizon::{default_classification_tol, sds_radii, virtual_mass_with_tol};
use static_vacua::shooting::{birkhoff_check, integrate, scaled_step, ShootingConfig};
use static_vacua::{build, classify, surface_gravity_curve, virtual_mass, ModelKind, ModelTriple};

pub const OUT_DIR_ENV: &str = "STATIC_VACUA_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "static-vacua", version, about = "Static vacuum metrics with cosmological constant")]
pub struct Cli {
    /// Directory for output files when `--output` is not given; stdout if unset.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Output file; overrides the output directory.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Catalog table: horizons, extremum of u and horizon types.
    Models(ModelsArgs),
    /// Normalized surface gravities of both horizons against the mass.
    Figure1(Figure1Args),
    /// Horizon type of each surface gravity.
    Classify(KappaArgs),
    /// Virtual mass of a set of horizon surface gravities.
    VirtualMass(KappaArgs),
    /// Runs every diagnostic on the default catalog; exits 1 on a breach.
    Verify(VerifyArgs),
    /// Shoots from both Schwarzschild–de Sitter horizons and compares with the closed form.
    Shoot(ShootArgs),
    /// Hawking mass of the level sets of u.
    Hawking(HawkingArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelsArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Figure1Args {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KappaArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated surface gravities normalized by max u.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub kappas: Vec<f64>,
    /// Half-width of the cylindrical band around √n.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 100)]
    pub grid_points: usize,
    #[arg(long, default_value_t = 50)]
    pub level_points: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub fd_step: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ShootArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',', default_value = "0.02,0.1,0.18")]
    pub masses: Vec<f64>,
    /// Step at unit horizon radius; smaller horizons use a proportionally smaller step.
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,
    /// Largest admissible deviation from the closed form.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    /// Writes the outer-horizon trajectory of the first mass as CSV.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HawkingArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "kottler-hyperbolic")]
    pub kind: String,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub genus: Option<u32>,
    #[arg(long, default_value_t = 20)]
    pub levels: usize,
}

/// Invalid input detected by the front end itself.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Whether the command found an invariant breach.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Clean,
    Breach,
}

struct Sink<'a> {
    out_dir: Option<&'a Path>,
    common: &'a Common,
    stem: &'a str,
    default_format: Format,
}

impl Sink<'_> {
    fn format(&self) -> Format {
        self.common.format.unwrap_or(self.default_format)
    }

    fn emit(&self, text: &str) -> Result<()> {
        let ext = match self.format() {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        let path = match (&self.common.output, self.out_dir) {
            (Some(p), _) => Some(p.clone()),
            (None, Some(dir)) => Some(dir.join(format!("{}.{ext}", self.stem))),
            (None, None) => None,
        };
        match path {
            Some(p) => write_file(&p, text),
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn envelope(command: &str, config: &impl Serialize, result: serde_json::Value) -> Result<String> {
    let doc = json!({
        "tool": "static-vacua",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "result": result,
    });
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    Ok(text)
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let out_dir = cli.out_dir.as_deref();
    match &cli.command {
        Command::Models(a) => models(out_dir, a),
        Command::Figure1(a) => figure1(out_dir, a),
        Command::Classify(a) => classify_cmd(out_dir, a),
        Command::VirtualMass(a) => virtual_mass_cmd(out_dir, a),
        Command::Verify(a) => verify_cmd(out_dir, a),
        Command::Shoot(a) => shoot(out_dir, a),
        Command::Hawking(a) => hawking(out_dir, a),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn models(out_dir: Option<&Path>, a: &ModelsArgs) -> Result<Outcome> {
    let sink = Sink { out_dir, common: &a.common, stem: "models", default_format: Format::Csv };
    let reports = default_catalog(a.common.n)
        .into_iter()
        .map(|t| build(t).map(|m| m.report()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let text = match sink.format() {
        Format::Json => envelope("models", a, serde_json::to_value(&reports)?)?,
        Format::Csv => {
            let mut out = String::from(
                "kind,n,mass,extremum,u_extremum,horizon,radius,grad_norm,kappa,horizon_type\n",
            );
            for r in &reports {
                let head = format!(
                    "{},{},{},{},{}",
                    r.kind,
                    r.n,
                    opt(r.mass),
                    serde_json::to_value(r.u_extremum.kind)?.as_str().unwrap_or_default(),
                    fmt_f64(r.u_extremum.value)
                );
                if r.horizons.is_empty() {
                    out.push_str(&format!("{head},,,,,\n"));
                }
                for h in &r.horizons {
                    let ty = h
                        .horizon_type
                        .map(|t| serde_json::to_value(t).map(|v| v.as_str().unwrap_or_default().to_owned()))
                        .transpose()?
                        .unwrap_or_default();
                    out.push_str(&format!(
                        "{head},{},{},{},{},{ty}\n",
                        h.label,
                        fmt_f64(h.radius),
                        fmt_f64(h.grad_norm),
                        fmt_f64(h.kappa)
                    ));
                }
            }
            out
        }
    };
    sink.emit(&text)?;
    Ok(Outcome::Clean)
}

fn figure1(out_dir: Option<&Path>, a: &Figure1Args) -> Result<Outcome> {
    let sink = Sink { out_dir, common: &a.common, stem: "figure1", default_format: Format::Csv };
    let rows = surface_gravity_curve(a.common.n, a.points)?;
    let text = match sink.format() {
        Format::Csv => to_csv(&["m", "k_plus", "k_minus"], &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()),
        Format::Json => {
            // JSON has no infinity; the m = 0 inner value is written as null.
            let cells: Vec<_> = rows
                .iter()
                .map(|r| json!({"m": r[0], "k_plus": r[1], "k_minus": r[2].is_finite().then_some(r[2])}))
                .collect();
            envelope("figure1", a, json!(cells))?
        }
    };
    sink.emit(&text)?;
    Ok(Outcome::Clean)
}

fn check_kappas(a: &KappaArgs) -> Result<f64> {
    if a.kappas.is_empty() {
        return Err(usage("--kappas needs at least one value"));
    }
    if let Some(k) = a.kappas.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
        return Err(usage(format!("surface gravities must be finite and nonnegative, got {k}")));
    }
    let tol = a.tol.unwrap_or_else(|| default_classification_tol(a.common.n));
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(usage(format!("--tol must be finite and nonnegative, got {tol}")));
    }
    if a.common.n < 3 {
        return Err(usage(format!("--n must be at least 3, got {}", a.common.n)));
    }
    Ok(tol)
}

fn classify_cmd(out_dir: Option<&Path>, a: &KappaArgs) -> Result<Outcome> {
    let sink = Sink { out_dir, common: &a.common, stem: "classify", default_format: Format::Csv };
    let tol = check_kappas(a)?;
    let types: Vec<_> = a.kappas.iter().map(|k| classify(*k, a.common.n, tol)).collect();
    let text = match sink.format() {
        Format::Csv => {
            let mut out = String::from("kappa,horizon_type\n");
            for (k, t) in a.kappas.iter().zip(&types) {
                let name = serde_json::to_value(t)?;
                out.push_str(&format!("{},{}\n", fmt_f64(*k), name.as_str().unwrap_or_default()));
            }
            out
        }
        Format::Json => {
            let cells: Vec<_> =
                a.kappas.iter().zip(&types).map(|(k, t)| json!({"kappa": k, "horizon_type": t})).collect();
            envelope("classify", a, json!(cells))?
        }
    };
    sink.emit(&text)?;
    Ok(Outcome::Clean)
}

fn virtual_mass_cmd(out_dir: Option<&Path>, a: &KappaArgs) -> Result<Outcome> {
    let sink = Sink { out_dir, common: &a.common, stem: "virtual_mass", default_format: Format::Json };
    let tol = check_kappas(a)?;
    let res = match a.tol {
        None => virtual_mass(&a.kappas, a.common.n)?,
        Some(_) => virtual_mass_with_tol(&a.kappas, a.common.n, tol)?,
    };
    let text = match sink.format() {
        Format::Json => envelope("virtual-mass", a, serde_json::to_value(res)?)?,
        Format::Csv => {
            let region = serde_json::to_value(res.region_kind)?;
            format!(
                "mass,region_kind,kappa_max,extrapolated\n{},{},{},{}\n",
                fmt_f64(res.mass),
                region.as_str().unwrap_or_default(),
                fmt_f64(res.kappa_max),
                res.extrapolated
            )
        }
    };
    sink.emit(&text)?;
    Ok(Outcome::Clean)
}

fn verify_cmd(out_dir: Option<&Path>, a: &VerifyArgs) -> Result<Outcome> {
    let sink = Sink { out_dir, common: &a.common, stem: "verify", default_format: Format::Json };
    if a.grid_points < 2 || a.level_points < 2 || !(a.fd_step > 0.0) {
        return Err(usage("grid sizes must be at least 2 and --fd-step positive"));
    }
    let config = ReportConfig { grid_points: a.grid_points, level_points: a.level_points, fd_step: a.fd_step };
    let mut reports = Vec::new();
    let mut breaches = Vec::new();
    for triple in default_catalog(a.common.n) {
        let model = build(triple)?;
        let report = run_report(&model, &config)
            .with_context(|| format!("diagnostics on {}", triple.kind))?;
        breaches.extend(verify(&report));
        reports.push(report);
    }
    for b in &breaches {
        eprintln!("breach: {} {} = {:e} (limit {:e})", b.kind, b.check, b.value, b.limit);
    }
    let text = match sink.format() {
        Format::Json => envelope(
            "verify",
            a,
            json!({"passed": breaches.is_empty(), "breaches": breaches, "reports": reports}),
        )?,
        Format::Csv => {
            let mut out = String::from("kind,check,value,limit\n");
            for b in &breaches {
                out.push_str(&format!("{},{},{},{}\n", b.kind, b.check, fmt_f64(b.value), fmt_f64(b.limit)));
            }
            out
        }
    };
    sink.emit(&text)?;
    Ok(if breaches.is_empty() { Outcome::Clean } else { Outcome::Breach })
}

fn shoot(out_dir: Option<&Path>, a: &ShootArgs) -> Result<Outcome> {
    let sink = Sink { out_dir, common: &a.common, stem: "shoot", default_format: Format::Csv };
    let n = a.common.n;
    if a.masses.is_empty() {
        return Err(usage("--masses needs at least one value"));
    }
    if !(a.step > 0.0 && a.tolerance > 0.0) {
        return Err(usage("--step and --tolerance must be positive"));
    }
    let report = birkhoff_check(n, &a.masses, a.step)?;
    if let Some(path) = &a.trajectory {
        let (_, rp) = sds_radii(n, a.masses[0])?;
        let mut cfg = ShootingConfig::new(n, 1, rp);
        cfg.step = scaled_step(a.step, rp);
        cfg.s_max = 2.0 * std::f64::consts::PI;
        write_file(path, &integrate(&cfg)?.to_csv())?;
    }
    let mut breach = false;
    for r in &report.rows {
        let kappa_error = (r.kappa_normalized - r.kappa_model).abs();
        let worst = [r.u_max_error, r.locus_error, r.profile_deviation, kappa_error]
            .into_iter()
            .fold(0.0, f64::max);
        if !(worst <= a.tolerance) {
            eprintln!("breach: m = {} ({}) deviates by {worst:e}", r.mass, r.label);
            breach = true;
        }
    }
    let text = match sink.format() {
        Format::Json => envelope("shoot", a, serde_json::to_value(&report)?)?,
        Format::Csv => {
            let mut out = String::from(
                "m,horizon,r0,kappa_normalized,kappa_model,u_max,u_max_error,locus_radius,locus_error,profile_deviation,arclength_deviation,max_drift\n",
            );
            for r in &report.rows {
                let nums = [
                    r.r0,
                    r.kappa_normalized,
                    r.kappa_model,
                    r.u_max,
                    r.u_max_error,
                    r.locus_radius,
                    r.locus_error,
                    r.profile_deviation,
                    r.arclength_deviation,
                    r.max_drift,
                ];
                let cells: Vec<String> = nums.iter().map(|v| fmt_f64(*v)).collect();
                out.push_str(&format!("{},{},{}\n", fmt_f64(r.mass), r.label, cells.join(",")));
            }
            out
        }
    };
    sink.emit(&text)?;
    Ok(if breach { Outcome::Breach } else { Outcome::Clean })
}

fn hawking(out_dir: Option<&Path>, a: &HawkingArgs) -> Result<Outcome> {
    let sink = Sink { out_dir, common: &a.common, stem: "hawking", default_format: Format::Csv };
    let kind: ModelKind = a.kind.parse()?;
    let mut triple = ModelTriple::new(kind, a.common.n);
    triple.mass = a.mass.or(kind.has_mass().then_some(match kind {
        ModelKind::KottlerHyperbolic => 0.3,
        _ => 1.0,
    }));
    triple.genus = a.genus;
    let model = build(triple)?;
    if a.levels < 2 {
        return Err(usage("--levels must be at least 2"));
    }
    let levels = default_levels(&model, a.levels)?;
    let rows = levels
        .iter()
        .map(|t| hawking_mass(&model, *t).map(|m| vec![*t, m]))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let text = match sink.format() {
        Format::Csv => to_csv(&["t", "hawking_mass"], &rows),
        Format::Json => {
            let cells: Vec<_> = rows.iter().map(|r| json!({"t": r[0], "hawking_mass": r[1]})).collect();
            envelope("hawking", a, json!(cells))?
        }
    };
    sink.emit(&text)?;
    Ok(Outcome::Clean)
}
