//! Command-line front end: figure data export, tomography and certification.
//!
//! Physical inputs are taken in µm, ms and kg; everything inside the
//! library is SI. A `--config` file holds the same keys as the long flags
//! (without the dashes) and flags override it.

use crate::certify::{self, CertifyOptions, Fault};
use crate::crosswigner::{
    cw_free_params, cw_screen_params, cw_slits_params, default_axes, eval_cw_free, eval_cw_screen,
    eval_cw_slits, gouy_delta_free, gouy_delta_slit, PhaseSpaceField, Provenance,
};
use crate::grid::Axis;
use crate::io::{self, Format, Meta};
use crate::oracle::wigner_field;
use crate::propagation::ScreenState;
use crate::reconstruction::{self, SinogramKind, TomographyOptions};
use crate::states::PhysicalConfig;
use crate::{Complex64, Error, Result};
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

const UM: f64 = 1e-6;
const MS: f64 = 1e-3;

#[derive(Parser, Debug)]
#[command(name = "xwigner", version, about = "Cross-Wigner distributions of Gaussian states through a double slit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cross-Wigner of the freely evolved state against the initial state.
    FreeCw(Common),
    /// Slit-slit and screen cross-Wigner fields.
    SlitCw(Common),
    /// |Δμ| over (γ, t) and |Δμ′| over (γ, τ).
    GouyMap(Common),
    /// Sinograms and filtered-backprojection reconstructions.
    Reconstruct(Common),
    /// Closed forms against the quadrature oracle; prints a pass/fail table.
    Certify(Common),
}

#[derive(Args, Debug, Default, Clone)]
pub struct Common {
    /// key=value file with the same keys as the long flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// particle mass [kg]
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<f64>,
    /// initial width σ₀ [µm]
    #[arg(long, allow_hyphen_values = true)]
    pub sigma0: Option<f64>,
    /// position-momentum correlation γ
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// slit width β [µm]
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// slit separation d [µm]
    #[arg(long, allow_hyphen_values = true)]
    pub dslit: Option<f64>,
    /// source-to-slit time t [ms]
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// slit-to-screen time τ [ms]
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    /// output grid size `nx,nk`
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// grid half-spans `x,k` in µm and 1/µm
    #[arg(long, allow_hyphen_values = true)]
    pub span: Option<String>,
    /// reconstruction window `lo,hi,n` in ms
    #[arg(long, allow_hyphen_values = true)]
    pub tau_window: Option<String>,
    /// γ sweep `lo,hi,n`
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_range: Option<String>,
    /// time sweep `lo,hi,n` in ms
    #[arg(long, allow_hyphen_values = true)]
    pub t_range: Option<String>,
    /// drop the Gouy phase difference from the emitted cross-Wigner
    #[arg(long)]
    pub no_gouy: bool,
    /// scale every emitted grid to unit max |value|
    #[arg(long)]
    pub normalize: bool,
    /// output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// grid file format: csv or bin
    #[arg(long)]
    pub format: Option<String>,
    /// label recorded in every file header
    #[arg(long)]
    pub run_id: Option<String>,
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}

/// Sweep `lo..=hi` with `n` points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|i| if i + 1 == self.n { self.hi } else { self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64 })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub phys: PhysicalConfig,
    pub nx: usize,
    pub nk: usize,
    /// Half-spans in m and 1/m; the default axes are used when absent.
    pub span: Option<(f64, f64)>,
    pub scenario: String,
    pub out: PathBuf,
    pub format: Format,
    pub normalize: bool,
    pub no_gouy: bool,
    /// Seconds.
    pub tau_window: Range,
    pub gamma_range: Range,
    /// Seconds.
    pub t_range: Range,
    pub run_id: String,
    pub fault: Option<Fault>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            phys: PhysicalConfig::neutron(),
            nx: 201,
            nk: 201,
            span: None,
            scenario: String::new(),
            out: PathBuf::from("out"),
            format: Format::Csv,
            normalize: false,
            no_gouy: false,
            tau_window: Range { lo: 0.0, hi: 2.0, n: 128 },
            gamma_range: Range { lo: -3.0, hi: 3.0, n: 61 },
            t_range: Range { lo: 1.0 * MS, hi: 100.0 * MS, n: 100 },
            run_id: "0".into(),
            fault: None,
        }
    }
}

pub const SCENARIOS: [&str; 5] = ["free-cw", "slit-cw", "gouy-map", "reconstruct", "certify"];

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.phys.validate()?;
        if self.nx < 16 || self.nk < 16 {
            return Err(Error::config("grid", format!("sizes must be >= 16, got {},{}", self.nx, self.nk)));
        }
        if let Some((x, k)) = self.span {
            if !(x > 0.0 && k > 0.0 && x.is_finite() && k.is_finite()) {
                return Err(Error::config("span", "spans must be positive"));
            }
        }
        if !SCENARIOS.contains(&self.scenario.as_str()) {
            return Err(Error::config("scenario", format!("unknown scenario '{}'", self.scenario)));
        }
        for (name, r) in [("gamma-range", self.gamma_range), ("t-range", self.t_range)] {
            if r.n == 0 || !(r.hi >= r.lo) || (r.n > 1 && r.hi == r.lo) {
                return Err(Error::config(name, "empty range"));
            }
        }
        if self.t_range.lo < 0.0 {
            return Err(Error::config("t-range", "times must be >= 0"));
        }
        Ok(())
    }

    pub fn axes(&self) -> Result<(Axis, Axis)> {
        match self.span {
            Some((x, k)) => Ok((Axis::symmetric(x, self.nx)?, Axis::symmetric(k, self.nk)?)),
            None => default_axes(&self.phys, self.nx, self.nk),
        }
    }

    fn meta(&self, figure: &str, normalized: bool) -> Meta {
        let p = &self.phys;
        vec![
            ("scenario".into(), self.scenario.clone()),
            ("figure".into(), figure.into()),
            ("run_id".into(), self.run_id.clone()),
            ("normalization".into(), if normalized { "max-abs" } else { "none" }.into()),
            (
                "params".into(),
                format!(
                    "mass={:?} sigma0={:?} gamma={:?} beta={:?} d={:?} t={:?} tau={:?}",
                    p.mass, p.sigma0, p.gamma, p.beta, p.d, p.t, p.tau
                ),
            ),
        ]
    }
}

fn parse_list(field: &str, s: &str, n: usize) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::config(field, format!("expected {n} comma-separated numbers, got '{s}'")))?;
    if v.len() != n || v.iter().any(|x| !x.is_finite()) {
        return Err(Error::config(field, format!("expected {n} comma-separated numbers, got '{s}'")));
    }
    Ok(v)
}

fn parse_count(field: &str, x: f64) -> Result<usize> {
    if x >= 0.0 && x.fract() == 0.0 && x < u32::MAX as f64 {
        Ok(x as usize)
    } else {
        Err(Error::config(field, format!("expected a non-negative integer, got {x}")))
    }
}

fn parse_range(field: &str, s: &str, unit: f64) -> Result<Range> {
    let v = parse_list(field, s, 3)?;
    Ok(Range {
        lo: v[0] * unit,
        hi: v[1] * unit,
        n: parse_count(field, v[2])?,
    })
}

fn parse_f64(field: &str, s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::config(field, format!("not a number: '{s}'")))
}

fn parse_bool(field: &str, s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::config(field, format!("not a boolean: '{other}'"))),
    }
}

impl Common {
    /// Fill unset flags from `key=value` pairs.
    pub fn merge_file(&mut self, kv: &[(String, String)]) -> Result<()> {
        for (k, v) in kv {
            let key = k.replace('_', "-");
            let set_f = |slot: &mut Option<f64>| -> Result<()> {
                if slot.is_none() {
                    *slot = Some(parse_f64(&key, v)?);
                }
                Ok(())
            };
            let set_s = |slot: &mut Option<String>| {
                if slot.is_none() {
                    *slot = Some(v.clone());
                }
            };
            match key.as_str() {
                "mass" => set_f(&mut self.mass)?,
                "sigma0" => set_f(&mut self.sigma0)?,
                "gamma" => set_f(&mut self.gamma)?,
                "beta" => set_f(&mut self.beta)?,
                "dslit" => set_f(&mut self.dslit)?,
                "t" => set_f(&mut self.t)?,
                "tau" => set_f(&mut self.tau)?,
                "grid" => set_s(&mut self.grid),
                "span" => set_s(&mut self.span),
                "tau-window" => set_s(&mut self.tau_window),
                "gamma-range" => set_s(&mut self.gamma_range),
                "t-range" => set_s(&mut self.t_range),
                "format" => set_s(&mut self.format),
                "run-id" => set_s(&mut self.run_id),
                "out" => {
                    if self.out.is_none() {
                        self.out = Some(PathBuf::from(v));
                    }
                }
                "no-gouy" => self.no_gouy |= parse_bool(&key, v)?,
                "normalize" => self.normalize |= parse_bool(&key, v)?,
                other => return Err(Error::config(other, "unknown configuration key")),
            }
        }
        Ok(())
    }

    pub fn to_run_config(&self, scenario: &str) -> Result<RunConfig> {
        let mut c = self.clone();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            c.merge_file(&io::parse_key_values(&text)?)?;
        }
        let mut r = RunConfig {
            scenario: scenario.into(),
            ..RunConfig::default()
        };
        let p = &mut r.phys;
        if let Some(v) = c.mass {
            p.mass = v;
        }
        if let Some(v) = c.sigma0 {
            p.sigma0 = v * UM;
        }
        if let Some(v) = c.gamma {
            p.gamma = v;
        }
        if let Some(v) = c.beta {
            p.beta = v * UM;
        }
        if let Some(v) = c.dslit {
            p.d = v * UM;
        }
        if let Some(v) = c.t {
            p.t = v * MS;
        }
        if let Some(v) = c.tau {
            p.tau = v * MS;
        }
        if let Some(s) = &c.grid {
            let v = parse_list("grid", s, 2)?;
            r.nx = parse_count("grid", v[0])?;
            r.nk = parse_count("grid", v[1])?;
        }
        if let Some(s) = &c.span {
            let v = parse_list("span", s, 2)?;
            r.span = Some((v[0] * UM, v[1] / UM));
        }
        if let Some(s) = &c.tau_window {
            r.tau_window = parse_range("tau-window", s, MS)?;
        }
        if let Some(s) = &c.gamma_range {
            r.gamma_range = parse_range("gamma-range", s, 1.0)?;
        }
        if let Some(s) = &c.t_range {
            r.t_range = parse_range("t-range", s, MS)?;
        }
        if let Some(s) = &c.format {
            r.format = s.parse()?;
        }
        if let Some(o) = &c.out {
            r.out = o.clone();
        }
        if let Some(id) = &c.run_id {
            r.run_id = id.clone();
        }
        r.no_gouy = c.no_gouy;
        r.normalize = c.normalize;
        r.fault = match c.inject_fault.as_deref() {
            None => None,
            Some("a5-sign") => Some(Fault::A5Sign),
            Some(other) => return Err(Error::config("inject-fault", format!("unknown fault '{other}'"))),
        };
        r.validate()?;
        Ok(r)
    }
}

fn ensure_dir(p: &Path) -> Result<()> {
    std::fs::create_dir_all(p).map_err(|source| Error::Io {
        path: p.to_path_buf(),
        source,
    })
}

fn emit(cfg: &RunConfig, name: &str, field: &PhaseSpaceField, figure: &str, extra: Meta) -> Result<PathBuf> {
    let field = if cfg.normalize { field.normalized() } else { field.clone() };
    let path = cfg.out.join(format!("{name}.{}", cfg.format.extension()));
    let mut meta = cfg.meta(figure, cfg.normalize);
    meta.extend(extra);
    io::save_field(&path, &field, cfg.format, &meta)?;
    Ok(path)
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

/// Files written by each command, in order.
pub type Written = Vec<PathBuf>;

pub fn cmd_free_cw(cfg: &RunConfig) -> Result<Written> {
    ensure_dir(&cfg.out)?;
    let p = &cfg.phys;
    let (xa, ka) = cfg.axes()?;
    let params = cw_free_params(p, p.t)?;
    let bare = params.without_gouy();
    let mut out = Vec::new();

    let primary = if cfg.no_gouy { bare } else { params };
    let f = PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_free(&primary, x, k));
    out.push(emit(cfg, "free_cw", &f, "fig2", vec![kv("gouy", !cfg.no_gouy), kv("delta_mu", format!("{:?}", params.delta_mu))])?);
    if !cfg.no_gouy {
        let g = PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_free(&bare, x, k));
        out.push(emit(cfg, "free_cw_nogouy", &g, "fig2", vec![kv("gouy", false)])?);
    }

    let mut rows = Vec::new();
    for t in cfg.t_range.values() {
        let q = cw_free_params(p, t)?;
        let q = if cfg.no_gouy { q.without_gouy() } else { q };
        for x in xa.values() {
            let v = eval_cw_free(&q, x, 0.0);
            rows.push(vec![t, x, v.re, v.im]);
        }
    }
    let path = cfg.out.join("free_cw_slice_k0.csv");
    let mut meta = cfg.meta("fig3a", false);
    meta.push(kv("units", "t=s,x=m"));
    io::save_table(&path, &meta, &["t", "x", "re", "im"], &rows)?;
    out.push(path);
    Ok(out)
}

pub fn cmd_slit_cw(cfg: &RunConfig) -> Result<Written> {
    ensure_dir(&cfg.out)?;
    let p = &cfg.phys;
    let (xa, ka) = cfg.axes()?;
    let mut out = Vec::new();

    let sp = cw_slits_params(p)?;
    let f = PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_slits(&sp, x, k));
    out.push(emit(cfg, "slits_cw", &f, "fig5", Vec::new())?);

    let params = cw_screen_params(p)?;
    let bare = params.without_gouy();
    let primary = if cfg.no_gouy { bare } else { params };
    let f = PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_screen(&primary, x, k));
    out.push(emit(
        cfg,
        "screen_cw",
        &f,
        "fig7",
        vec![kv("gouy", !cfg.no_gouy), kv("delta_mu_prime", format!("{:?}", params.delta_mu_prime))],
    )?);
    if !cfg.no_gouy {
        let g = PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_screen(&bare, x, k));
        out.push(emit(cfg, "screen_cw_nogouy", &g, "fig8", vec![kv("gouy", false)])?);
    }

    let mut rows = Vec::new();
    for tau in cfg.t_range.values() {
        if tau <= 0.0 {
            continue;
        }
        let q = cw_screen_params(&PhysicalConfig { tau, ..*p })?;
        let q = if cfg.no_gouy { q.without_gouy() } else { q };
        for x in xa.values() {
            let v = eval_cw_screen(&q, x, 0.0);
            rows.push(vec![tau, x, v.re, v.im]);
        }
    }
    let path = cfg.out.join("screen_cw_slice_k0.csv");
    let mut meta = cfg.meta("fig3b", false);
    meta.push(kv("units", "tau=s,x=m"));
    io::save_table(&path, &meta, &["tau", "x", "re", "im"], &rows)?;
    out.push(path);
    Ok(out)
}

pub fn cmd_gouy_map(cfg: &RunConfig) -> Result<Written> {
    ensure_dir(&cfg.out)?;
    let p = &cfg.phys;
    let mut free = Vec::new();
    let mut slit = Vec::new();
    for g in cfg.gamma_range.values() {
        let c = p.with_gamma(g);
        for t in cfg.t_range.values() {
            free.push(vec![g, t, gouy_delta_free(&c, t)?.abs()]);
            if t > 0.0 {
                slit.push(vec![g, t, gouy_delta_slit(&PhysicalConfig { tau: t, ..c })?.abs()]);
            }
        }
    }
    let a = cfg.out.join("gouy_free.csv");
    let mut meta = cfg.meta("fig1a", false);
    meta.push(kv("units", "t=s,abs_delta_mu=rad"));
    io::save_table(&a, &meta, &["gamma", "t", "abs_delta_mu"], &free)?;
    let b = cfg.out.join("gouy_slit.csv");
    let mut meta = cfg.meta("fig1b", false);
    meta.push(kv("units", "tau=s,abs_delta_mu_prime=rad"));
    io::save_table(&b, &meta, &["gamma", "tau", "abs_delta_mu_prime"], &slit)?;
    Ok(vec![a, b])
}

/// L2 errors and angular metadata of one reconstruction run.
#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionMetrics {
    pub l2_wigner: f64,
    pub l2_cw: f64,
    pub theta_span_deg: f64,
    pub theta_max_deg: f64,
    pub scale_x: f64,
    pub chirp_scaled: f64,
    pub n_proj: usize,
}

pub fn cmd_reconstruct(cfg: &RunConfig) -> Result<(Written, ReconstructionMetrics)> {
    ensure_dir(&cfg.out)?;
    let p = &cfg.phys;
    let (xa, ka) = cfg.axes()?;
    let opts = TomographyOptions::default();
    let w = cfg.tau_window;
    let taus = reconstruction::tau_window(p, w.lo, w.hi, w.n)?;
    let mut out = Vec::new();

    let mut results = Vec::new();
    for (kind, name) in [(SinogramKind::Intensity, "intensity"), (SinogramKind::Interference, "interference")] {
        let (sino, map, proj) = reconstruction::measure(p, &taus, kind, &opts)?;
        let field = reconstruction::backproject_grid(p, &proj, &map, xa, ka, &opts.fbp)?;
        let field = if kind == SinogramKind::Interference { field.map(|v| v * 0.5) } else { field };

        let mut rows = Vec::with_capacity(sino.values.len());
        for (i, &tau) in sino.tau_axis.iter().enumerate() {
            for (j, v) in sino.row(i).iter().enumerate() {
                rows.push(vec![tau, sino.x_axis.value(j) * sino.row_scale[i], *v]);
            }
        }
        let path = cfg.out.join(format!("sinogram_{name}.csv"));
        let mut meta = cfg.meta("fig10", false);
        meta.push(kv("units", "tau=s,x=m"));
        meta.push(kv("scale_x", format!("{:?}", map.scale_x)));
        meta.push(kv("chirp_scaled", format!("{:?}", map.chirp_scaled)));
        io::save_table(&path, &meta, &["tau", "x", "value"], &rows)?;
        out.push(path);
        results.push((field, map));
    }

    let scr = ScreenState::new(p)?;
    let wig_ref = wigner_field(&scr, xa, ka)?;
    let sp = cw_slits_params(p)?;
    let cw_ref = PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| Complex64::new(eval_cw_slits(&sp, x, k).re, 0.0));
    let l2_wigner = reconstruction::l2_relative_error(&results[0].0, &wig_ref)?;
    let l2_cw = reconstruction::l2_relative_error(&results[1].0, &cw_ref)?;
    out.push(emit(cfg, "wigner_fbp", &results[0].0, "fig10b", Vec::new())?);
    out.push(emit(cfg, "cw_fbp", &results[1].0, "fig10d", Vec::new())?);

    let map = &results[0].1;
    let n = map.theta.len();
    let span = reconstruction::coverage(&map.theta);
    let m = ReconstructionMetrics {
        l2_wigner,
        l2_cw,
        theta_span_deg: span.to_degrees(),
        theta_max_deg: map.theta_max.to_degrees(),
        scale_x: map.scale_x,
        chirp_scaled: map.chirp_scaled,
        n_proj: n,
    };
    let path = cfg.out.join("metrics.csv");
    let mut meta = cfg.meta("fig10", false);
    meta.push(kv("central_region", "inner half of each axis"));
    meta.push(kv("tau_window", format!("{:?},{:?},{}", w.lo, w.hi, w.n)));
    io::save_table(
        &path,
        &meta,
        &["l2_wigner", "l2_cw", "theta_span_deg", "theta_max_deg", "scale_x", "chirp_scaled", "n_proj"],
        &[vec![m.l2_wigner, m.l2_cw, m.theta_span_deg, m.theta_max_deg, m.scale_x, m.chirp_scaled, n as f64]],
    )?;
    out.push(path);
    Ok((out, m))
}

pub fn cmd_certify(cfg: &RunConfig) -> Result<certify::Report> {
    let opts = CertifyOptions {
        nx: cfg.nx,
        nk: cfg.nk,
        fault: cfg.fault,
    };
    certify::run(&cfg.phys, &opts)
}

/// Parse `args`, run the command, print diagnostics and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("XWIGNER_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::config("XWIGNER_THREADS", format!("expected a positive integer, got '{v}'")))?;
    // a second initialisation in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn list(files: &[PathBuf]) {
    for f in files {
        println!("{}", f.display());
    }
}

fn dispatch(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::FreeCw(c) => list(&cmd_free_cw(&c.to_run_config("free-cw")?)?),
        Command::SlitCw(c) => list(&cmd_slit_cw(&c.to_run_config("slit-cw")?)?),
        Command::GouyMap(c) => list(&cmd_gouy_map(&c.to_run_config("gouy-map")?)?),
        Command::Reconstruct(c) => {
            let (files, m) = cmd_reconstruct(&c.to_run_config("reconstruct")?)?;
            list(&files);
            println!(
                "l2_wigner={:.4} l2_cw={:.4} theta_span_deg={:.3} n_proj={}",
                m.l2_wigner, m.l2_cw, m.theta_span_deg, m.n_proj
            );
        }
        Command::Certify(c) => {
            let cfg = c.to_run_config("certify")?;
            let report = cmd_certify(&cfg)?;
            let text = report.to_text();
            print!("{text}");
            if c.out.is_some() {
                ensure_dir(&cfg.out)?;
                let path = cfg.out.join("certify.txt");
                std::fs::write(&path, &text).map_err(|source| Error::Io { path, source })?;
            }
            if !report.passed() {
                for f in report.failures() {
                    eprintln!("FAILED {}", f.name);
                }
                return Ok(3);
            }
        }
    }
    Ok(0)
}
