//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chain::{
    classify_regime, lambda_param, limit_correlators, magnetization, prefactor_set, LambdaParam, ModelSpec, Source,
};
use crate::error::{Error, Result};
use crate::oracle::{discord_numeric, DEFAULT_GRID};
use crate::scaling::{
    continuity_report, discord_profile_with, fit_decay, perturb_xstate, DiscordAsymptote, Precision, ScalingProfile,
    DEFAULT_CONTINUITY_SLACK,
};
use crate::thermal::{build_chain_hamiltonian, check_area_law_with, contiguous_cuts, CheckOptions, Geometry};
use crate::xstate::{discord_breakdown, from_correlators, limit_discord, random_xstate, PairCorrelators};

pub mod config;
pub mod svg;
pub mod table;

use table::{format_number, format_opt, Table};

#[derive(Parser, Debug, Clone)]
#[command(name = "spin-discord", version, about = "Two-qubit discord, spin-chain discord scaling and thermal area-law checks")]
pub struct RunConfig {
    /// `key = value` file with defaults for any flag; flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Discord of one X state given by its correlators.
    Discord(DiscordArgs),
    /// Two-site discord over a range of separations.
    Scan(ScanArgs),
    /// Area-law checks on thermal states of a small lattice.
    Thermal(ThermalArgs),
    /// Regime, magnetization, long-range order and amplitudes of a model.
    Prefactors(PrefactorArgs),
    /// Discord differences of nearby X states against the continuity bound.
    Continuity(ContinuityArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Xxz,
    Xy,
    Tfim,
    Xyfield,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
}

impl ModelArgs {
    pub fn spec(&self) -> Result<ModelSpec> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::Validation(format!("--{name} is required for --model {:?}", self.model).to_lowercase()))
        };
        let m = match self.model {
            ModelKind::Xxz => ModelSpec::Xxz { delta: need(self.delta, "delta")? },
            ModelKind::Xy => ModelSpec::Xy { alpha: need(self.alpha, "alpha")? },
            ModelKind::Tfim => ModelSpec::Tfim { h: need(self.h, "h")? },
            ModelKind::Xyfield => ModelSpec::XyField { gamma: need(self.gamma, "gamma")?, h: need(self.h, "h")? },
        };
        m.validate()?;
        Ok(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Svg,
    Both,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct DiscordArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub sz: f64,
    /// Magnetization of the second qubit when it differs from the first.
    #[arg(long, allow_hyphen_values = true)]
    pub sz_j: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xx: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub yy: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub zz: f64,
    /// Also run the numerical measurement optimization.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Exact,
    Asymptotic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    Auto,
    Double,
    Extended,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct ScanArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub rmin: usize,
    #[arg(long)]
    pub rmax: usize,
    #[arg(long, value_enum, default_value = "exact")]
    pub source: SourceArg,
    #[arg(long, value_enum, default_value = "auto")]
    pub precision: PrecisionArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeometryArg {
    Open,
    Periodic,
    Grid,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct ThermalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "open")]
    pub geometry: GeometryArg,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Inverse temperatures, comma separated; `inf` is the ground state.
    #[arg(long, value_delimiter = ',', required = true)]
    pub beta: Vec<f64>,
    /// Region A is sites `0..cut`.
    #[arg(long, conflicts_with = "all_cuts")]
    pub cut: Option<usize>,
    /// Check every block of consecutive sites.
    #[arg(long)]
    pub all_cuts: bool,
    /// Largest system on which single-site discord is computed.
    #[arg(long, default_value_t = crate::thermal::SINGLE_SITE_ORACLE_MAX_SITES)]
    pub single_site_max: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct PrefactorArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct ContinuityArgs {
    #[arg(long, default_value_t = 100)]
    pub pairs: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Mixing weights are log-uniform in [eps-min, eps-max].
    #[arg(long, default_value_t = 1e-4)]
    pub eps_min: f64,
    #[arg(long, default_value_t = 0.05)]
    pub eps_max: f64,
    #[arg(long, default_value_t = DEFAULT_CONTINUITY_SLACK)]
    pub slack: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `argv` after merging any `--config` file underneath the flags.
pub fn parse(argv: &[String]) -> std::result::Result<RunConfig, ParseFailure> {
    let merged = config::merge_args(argv).map_err(ParseFailure::Config)?;
    RunConfig::try_parse_from(merged).map_err(ParseFailure::Clap)
}

#[derive(Debug)]
pub enum ParseFailure {
    Config(Error),
    Clap(clap::Error),
}

/// Entry point of the binary; returns the process exit status.
pub fn main_with_args(argv: &[String]) -> i32 {
    let cfg = match parse(argv) {
        Ok(c) => c,
        Err(ParseFailure::Clap(e)) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
        Err(ParseFailure::Config(e)) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cfg, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    match &cfg.command {
        Command::Discord(a) => run_discord(a, out),
        Command::Scan(a) => run_scan(a, out),
        Command::Thermal(a) => run_thermal(a, out),
        Command::Prefactors(a) => run_prefactors(a, out),
        Command::Continuity(a) => run_continuity(a, out),
    }
}

fn kv(out: &mut dyn Write, key: &str, value: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{key} = {value}")?;
    Ok(())
}

fn run_discord(a: &DiscordArgs, out: &mut dyn Write) -> Result<()> {
    let c = PairCorrelators::new(a.sz, a.sz_j.unwrap_or(a.sz), a.xx, a.yy, a.zz);
    let state = from_correlators(&c)?;
    let margin = state.lemma1_margin();
    let analytic = if c.sz_i == c.sz_j { discord_breakdown(&c).ok() } else { None };
    let numeric = if a.oracle || analytic.is_none() {
        Some(discord_numeric(&state.to_density_matrix()?, DEFAULT_GRID)?)
    } else {
        None
    };
    let (d, j, i, method) = match (&analytic, &numeric) {
        (Some(b), _) => (b.discord, b.classical_correlation, b.mutual_information, "analytic"),
        (None, Some(n)) => (n.discord, n.classical_correlation, n.mutual_information, "oracle"),
        (None, None) => unreachable!("oracle runs whenever the analytic path is unavailable"),
    };
    kv(out, "D", format_number(d))?;
    kv(out, "J", format_number(j))?;
    kv(out, "I", format_number(i))?;
    kv(out, "lemma1_margin", format_number(margin))?;
    kv(out, "method", method)?;
    if let (Some(n), Some(_)) = (&numeric, &analytic) {
        kv(out, "D_oracle", format_number(n.discord))?;
    }
    Ok(())
}

fn write_output(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

fn model_metadata(t: &mut Table, m: &ModelSpec) -> Result<()> {
    t.comment("model", m);
    t.comment("regime", classify_regime(m)?);
    if let Ok(set) = prefactor_set(m) {
        for (name, v) in
            [("A_z", set.a_z), ("A_x", set.a_x), ("A_1", set.a_1), ("A_2", set.a_2), ("A_3", set.a_3), ("A_4", set.a_4)]
        {
            if let Some(v) = v {
                t.comment(name, format_number(v));
            }
        }
    }
    Ok(())
}

/// CSV table of a sweep.
pub fn scan_table(m: &ModelSpec, profile: &ScalingProfile, source: Source) -> Result<Table> {
    let mut t = Table::new(&["r", "sz", "xx", "yy", "zz", "D", "D_asym", "J", "I", "lemma1"]);
    model_metadata(&mut t, m)?;
    t.comment("source", source);
    if let Ok(a) = DiscordAsymptote::new(m) {
        t.comment("D_inf", format_number(a.limit()));
    }
    match fit_decay(&profile.records) {
        Ok(fit) => {
            t.comment("fit_law", fit.law);
            t.comment("fit_exponent_or_rate", format_number(fit.exponent_or_rate));
            t.comment("fit_amplitude", format_number(fit.amplitude));
            t.comment("fit_r_squared", format_number(fit.r_squared));
            t.comment("fit_ratio_n", format_opt(fit.ratio_n));
        }
        Err(e) => t.comment("fit", format!("unavailable ({e})")),
    }
    let fallbacks: Vec<String> =
        profile.records.iter().filter(|r| r.oracle_fallback).map(|r| r.r.to_string()).collect();
    if !fallbacks.is_empty() {
        t.comment("oracle_fallback_r", fallbacks.join(" "));
    }
    for rej in &profile.rejected {
        t.comment("rejected", format!("r={} {}", rej.r, rej.reason));
    }
    for rec in &profile.records {
        let c = &rec.correlators;
        t.push(vec![
            rec.r.to_string(),
            format_number(c.sz_i),
            format_number(c.xx),
            format_number(c.yy),
            format_number(c.zz),
            format_number(rec.discord),
            format_opt(rec.discord_asym),
            format_number(rec.classical_correlation),
            format_number(rec.mutual_information),
            rec.lemma1.to_string(),
        ]);
    }
    Ok(t)
}

fn scan_plot(m: &ModelSpec, profile: &ScalingProfile) -> Result<svg::Plot> {
    let regime = classify_regime(m)?;
    let offset = regime.has_limit_offset();
    let limit = DiscordAsymptote::new(m).map(|a| a.limit()).unwrap_or(0.0);
    let computed = profile
        .records
        .iter()
        .map(|r| (r.r as f64, if offset { r.discord_minus_limit.abs() } else { r.discord }))
        .collect();
    let asym = profile
        .records
        .iter()
        .filter_map(|r| r.discord_asym.map(|d| (r.r as f64, if offset { (d - limit).abs() } else { d })))
        .collect();
    let y_label = if offset { "|D(r) - D_inf|" } else { "D(r)" };
    Ok(svg::Plot {
        title: format!("{m} [{regime}]"),
        x_label: "r".into(),
        y_label: y_label.into(),
        x_scale: if regime.is_critical() { svg::XScale::Log } else { svg::XScale::Linear },
        series: vec![
            svg::Series { label: "computed".into(), color: "black", dashed: false, points: computed },
            svg::Series { label: "asymptotic".into(), color: "#c0392b", dashed: true, points: asym },
        ],
    })
}

fn run_scan(a: &ScanArgs, out: &mut dyn Write) -> Result<()> {
    let m = a.model.spec()?;
    let source = match a.source {
        SourceArg::Exact => Source::Exact,
        SourceArg::Asymptotic => Source::Asymptotic,
    };
    let precision = match a.precision {
        PrecisionArg::Auto => Precision::Auto,
        PrecisionArg::Double => Precision::Double,
        PrecisionArg::Extended => Precision::Extended,
    };
    let profile = discord_profile_with(&m, a.rmin, a.rmax, source, precision)?;
    let table = scan_table(&m, &profile, source)?;
    let csv = table.to_csv();
    match (&a.out, a.format) {
        (None, OutputFormat::Csv) => out.write_all(csv.as_bytes())?,
        (None, _) => return Err(Error::Validation("svg output needs --out".into())),
        (Some(path), fmt) => {
            if fmt != OutputFormat::Svg {
                write_output(path, &csv)?;
                writeln!(out, "wrote {} rows to {}", table.rows.len(), path.display())?;
            }
            if fmt != OutputFormat::Csv {
                let svg_path = path.with_extension("svg");
                write_output(&svg_path, &scan_plot(&m, &profile)?.render())?;
                writeln!(out, "wrote plot to {}", svg_path.display())?;
            }
        }
    }
    Ok(())
}

fn format_cut(cut: &[usize]) -> String {
    match (cut.first(), cut.last()) {
        (Some(a), Some(b)) if b - a + 1 == cut.len() => format!("{a}-{b}"),
        _ => cut.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(";"),
    }
}

fn run_thermal(a: &ThermalArgs, out: &mut dyn Write) -> Result<()> {
    let m = a.model.spec()?;
    let geometry = match a.geometry {
        GeometryArg::Open => Geometry::OpenChain,
        GeometryArg::Periodic => Geometry::PeriodicChain,
        GeometryArg::Grid => Geometry::Grid {
            rows: a.rows.ok_or_else(|| Error::Validation("--rows is required for a grid".into()))?,
            cols: a.cols.ok_or_else(|| Error::Validation("--cols is required for a grid".into()))?,
        },
    };
    let h = build_chain_hamiltonian(&m, a.n, geometry)?;
    let cuts = if a.all_cuts {
        contiguous_cuts(a.n)
    } else {
        let k = a.cut.unwrap_or(a.n / 2);
        if k == 0 || k >= a.n {
            return Err(Error::Validation(format!("--cut must be in 1..{}, got {k}", a.n)));
        }
        vec![(0..k).collect()]
    };
    if let Some(b) = a.beta.iter().find(|b| b.is_nan() || **b < 0.0) {
        return Err(Error::Validation(format!("beta = {b} must be nonnegative")));
    }
    let spectrum = h.diagonalize();
    let opts = CheckOptions { single_site_max_sites: a.single_site_max, ..CheckOptions::default() };
    let jobs: Vec<(f64, &Vec<usize>)> = a.beta.iter().flat_map(|&b| cuts.iter().map(move |c| (b, c))).collect();
    let checks = jobs
        .par_iter()
        .map(|(b, c)| check_area_law_with(&h, &spectrum, c, *b, opts))
        .collect::<Result<Vec<_>>>()?;

    let mut t = Table::new(&[
        "beta",
        "cut",
        "boundary_size",
        "max_term_norm",
        "bound",
        "I",
        "intermediate_bound",
        "free_energy_gap",
        "D_single_site",
        "satisfied",
    ]);
    model_metadata(&mut t, &m)?;
    t.comment("n", a.n);
    t.comment("geometry", geometry);
    for c in &checks {
        if !c.satisfied {
            warn!("area-law check failed at beta = {}, cut {}", c.beta, format_cut(&c.cut));
        }
        writeln!(
            out,
            "beta = {}, cut = {}, I = {}, bound = {}, satisfied = {}",
            format_number(c.beta),
            format_cut(&c.cut),
            format_number(c.mutual_info),
            format_number(c.bound),
            c.satisfied
        )?;
        t.push(vec![
            format_number(c.beta),
            format_cut(&c.cut),
            c.boundary_size.to_string(),
            format_number(c.max_term_norm),
            format_number(c.bound),
            format_number(c.mutual_info),
            format_number(c.intermediate_bound),
            format_opt(c.free_energy_gap),
            format_opt(c.single_site_discord),
            c.satisfied.to_string(),
        ]);
    }
    if let Some(path) = &a.out {
        write_output(path, &t.to_csv())?;
    }
    Ok(())
}

fn run_prefactors(a: &PrefactorArgs, out: &mut dyn Write) -> Result<()> {
    let m = a.model.spec()?;
    let regime = classify_regime(&m)?;
    let mut t = Table::new(&["quantity", "value"]);
    let mut row = |k: &str, v: String| t.push(vec![k.to_string(), v]);
    row("regime", regime.to_string());
    if let Some((gamma, h)) = m.free_fermion() {
        row("magnetization", format_number(magnetization(&m)?));
        row("xx_inf", format_number(limit_correlators(&m)?.xx));
        if h > 0.0 {
            match lambda_param(gamma, h) {
                LambdaParam::Real(l) => row("lambda", format_number(l)),
                LambdaParam::Oscillatory { value, modulus } => {
                    row("lambda_re", format_number(value.re));
                    row("lambda_im", format_number(value.im));
                    row("lambda_modulus", format_number(modulus));
                }
            }
        }
    }
    let set = prefactor_set(&m)?;
    for (name, v) in [("A_z", set.a_z), ("A_x", set.a_x), ("A_1", set.a_1), ("A_2", set.a_2), ("A_3", set.a_3), ("A_4", set.a_4)]
    {
        if let Some(v) = v {
            row(name, format_number(v));
        }
    }
    row("glaisher", format_number(set.glaisher));
    if let Ok(lim) = limit_correlators(&m) {
        if let Ok(d) = limit_discord(&lim) {
            row("D_inf", format_number(d));
        }
    }
    for r in &t.rows {
        kv(out, &r[0], &r[1])?;
    }
    if let Some(path) = &a.out {
        t.comment("model", m);
        write_output(path, &t.to_csv())?;
    }
    Ok(())
}

fn run_continuity(a: &ContinuityArgs, out: &mut dyn Write) -> Result<()> {
    if !(a.eps_min > 0.0 && a.eps_min <= a.eps_max && a.eps_max <= 0.1) {
        return Err(Error::Validation(format!(
            "need 0 < eps-min <= eps-max <= 0.1, got {} and {}",
            a.eps_min, a.eps_max
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (l0, l1) = (a.eps_min.ln(), a.eps_max.ln());
    let pairs: Vec<_> = (0..a.pairs)
        .map(|_| {
            let s = random_xstate(&mut rng, false);
            let eps = (l0 + (l1 - l0) * rand::Rng::gen::<f64>(&mut rng)).exp();
            let p = perturb_xstate(&mut rng, &s, eps);
            (s, p)
        })
        .collect();
    let rows = continuity_report(&pairs, a.slack)?;
    let mut t = Table::new(&["t", "D_rho", "D_sigma", "delta_D", "bound_term", "ratio", "flagged"]);
    t.comment("seed", a.seed);
    t.comment("slack", format_number(a.slack));
    for r in &rows {
        t.push(vec![
            format_number(r.t),
            format_number(r.discord_rho),
            format_number(r.discord_sigma),
            format_number(r.delta_d),
            format_number(r.bound_term),
            format_number(r.ratio),
            r.flagged.to_string(),
        ]);
    }
    let flagged = rows.iter().filter(|r| r.flagged).count();
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    kv(out, "pairs", rows.len())?;
    kv(out, "flagged", flagged)?;
    kv(out, "max_ratio", format_number(max_ratio))?;
    match &a.out {
        Some(path) => write_output(path, &t.to_csv())?,
        None => out.write_all(t.to_csv().as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        std::iter::once("spin-discord").chain(s.split_whitespace()).map(str::to_string).collect()
    }

    fn run_str(s: &str) -> Result<String> {
        let cfg = parse(&args(s)).map_err(|e| Error::Validation(format!("{e:?}")))?;
        let mut buf = Vec::new();
        run(&cfg, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn bell_discord_is_ln2() {
        let out = run_str("discord --sz 0 --xx 1 --yy -1 --zz 1").unwrap();
        assert!(out.starts_with("D = 0.693147180560\n"), "{out}");
        assert!(out.contains("method = analytic"));
    }

    #[test]
    fn missing_model_parameter_is_a_validation_error() {
        let err = run_str("scan --model tfim --rmin 5 --rmax 20").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(matches!(parse(&args("scan --model ising --h 1 --rmin 2 --rmax 5")), Err(ParseFailure::Clap(_))));
    }

    #[test]
    fn not_a_state_exits_3() {
        let err = run_str("discord --sz 0 --xx 1 --yy 1 --zz 1").unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn scan_table_columns() {
        let out = run_str("scan --model tfim --h 2 --rmin 5 --rmax 12").unwrap();
        let t = Table::parse(&out).unwrap();
        assert_eq!(t.header.join(","), "r,sz,xx,yy,zz,D,D_asym,J,I,lemma1");
        assert_eq!(t.rows.len(), 8);
        assert_eq!(t.meta("regime"), Some("TFIM_Para"));
    }

    #[test]
    fn prefactor_listing() {
        let out = run_str("prefactors --model xxz --delta 0").unwrap();
        assert!(out.contains("A_x = 0.588352664"), "{out}");
        let out = run_str("prefactors --model xyfield --gamma 0.5 --h 0.3").unwrap();
        assert!(out.contains("lambda_modulus") && out.contains("A_4"));
    }

    #[test]
    fn thermal_summary_line() {
        let out = run_str("thermal --model xxz --delta 1 --n 4 --beta 1 --cut 2").unwrap();
        assert!(out.contains("satisfied = true"), "{out}");
    }
}
