//! The `spiral` command line: spectra, energy surfaces, loop reports,
//! eigenfunction samples and three-delta convergence tables.
//!
//! Exit codes: 0 success, 2 input or parameter error, 3 numerical or
//! tracking failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::format::{round12, sig12};
use crate::holonomy::{evolution_matrix, loop_permutation, EvolutionOptions, TrackOptions, ORIENTATION};
use crate::params::{from_slice, make_params, BCParams, Coupling, ParameterPath, PolarLoop, SliceCoords};
use crate::regularize::convergence_study;
use crate::spectrum::{node_count, spectrum_window, wavefunction, Domain, EnergyLevel, Side, SpectrumOptions};

#[derive(Parser, Debug)]
#[command(name = "spiral", version, about = "Point-interaction box: spectra, spirals and loop holonomy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lowest eigenvalues with momenta and node counts.
    Spectrum(SpectrumArgs),
    /// Energy levels on an (alpha, beta) grid of one slice.
    Surface(SurfaceArgs),
    /// Follow levels around a polar loop and report the index shift.
    Loop(LoopArgs),
    /// Sample one eigenfunction.
    Wave(WaveArgs),
    /// Three-delta spectra against the point interaction.
    Converge(ConvergeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Slice style: give --gamma0 --alpha --beta instead of the full quadruple.
    #[arg(long, allow_negative_numbers = true)]
    gamma0: Option<f64>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<BCParams> {
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::InvalidArgument(format!("missing --{name}")));
        match self.gamma0 {
            Some(g0) => {
                if self.gamma.is_some() || self.delta.is_some() {
                    return Err(Error::InvalidArgument("give either --gamma0 or --gamma/--delta, not both".into()));
                }
                from_slice(SliceCoords::new(g0, need(self.alpha, "alpha")?, need(self.beta, "beta")?)?)
            }
            None => make_params(
                need(self.alpha, "alpha")?,
                need(self.beta, "beta")?,
                need(self.gamma, "gamma")?,
                need(self.delta, "delta")?,
            ),
        }
    }
}

#[derive(Args, Debug, Clone)]
struct BoxArgs {
    /// Box length.
    #[arg(long = "L", default_value_t = 1.0)]
    length: f64,
    /// Split fraction; the interaction sits a distance rL from the left wall.
    #[arg(long, default_value_t = 0.618034)]
    r: f64,
    #[arg(long = "root-tol", default_value_t = 1e-10)]
    root_tol: f64,
}

impl BoxArgs {
    fn domain(&self) -> Result<Domain> {
        Domain::new(self.length, self.r)
    }

    fn options(&self) -> Result<SpectrumOptions> {
        if !(self.root_tol > 0.0) {
            return Err(Error::InvalidArgument("--root-tol must be positive".into()));
        }
        Ok(SpectrumOptions { root_tol: self.root_tol, ..Default::default() })
    }
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    /// Write here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    domain: BoxArgs,
    #[arg(long, default_value_t = 6)]
    levels: usize,
    /// Report only levels above this energy (indices stay absolute).
    #[arg(long, allow_negative_numbers = true)]
    floor: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct SurfaceArgs {
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    gamma0: f64,
    #[arg(long = "alpha-min", default_value_t = -2.0, allow_negative_numbers = true)]
    alpha_min: f64,
    #[arg(long = "alpha-max", default_value_t = 0.0, allow_negative_numbers = true)]
    alpha_max: f64,
    #[arg(long = "alpha-steps", default_value_t = 101)]
    alpha_steps: usize,
    #[arg(long = "beta-min", default_value_t = -1.0, allow_negative_numbers = true)]
    beta_min: f64,
    #[arg(long = "beta-max", default_value_t = 1.0, allow_negative_numbers = true)]
    beta_max: f64,
    #[arg(long = "beta-steps", default_value_t = 101)]
    beta_steps: usize,
    #[arg(long, default_value_t = 4)]
    levels: usize,
    #[command(flatten)]
    domain: BoxArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct LoopArgs {
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    gamma0: f64,
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    /// Signed turns; positive is counterclockwise in (alpha, beta).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    turns: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta0: f64,
    /// Vertices along the whole loop.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long, default_value_t = 6)]
    levels: usize,
    /// Also compute the evolution matrix of the loop.
    #[arg(long)]
    overlaps: bool,
    /// Extra levels carried above the reported ones for --overlaps.
    #[arg(long, default_value_t = 8)]
    buffer: usize,
    /// Move the circle centre by `dalpha,dbeta`.
    #[arg(long = "center-offset", allow_hyphen_values = true)]
    center_offset: Option<String>,
    #[command(flatten)]
    domain: BoxArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct WaveArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    domain: BoxArgs,
    /// Absolute level index, counted from the bottom of the spectrum.
    #[arg(long, default_value_t = 0)]
    level: usize,
    /// Points per side of the interaction.
    #[arg(long, default_value_t = 512)]
    samples: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    domain: BoxArgs,
    /// Comma-separated half-spacings.
    #[arg(long = "a-list", default_value = "1e-2,1e-3,1e-4")]
    a_list: String,
    #[arg(long, default_value_t = 5)]
    levels: usize,
    #[command(flatten)]
    out: OutArgs,
}

// Highest level index the wave command accepts.
const MAX_LEVEL: usize = 100_000;

/// One cell of a table.
enum Cell {
    Num(f64),
    Int(i64),
    Text(&'static str),
    Empty,
}

struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => sig12(*x),
                    Cell::Int(i) => i.to_string(),
                    Cell::Text(t) => (*t).to_string(),
                    Cell::Empty => String::new(),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    fn json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (k, c) in self.header.iter().zip(row) {
                    let v = match c {
                        Cell::Num(x) => finite_json(*x),
                        Cell::Int(i) => json!(i),
                        Cell::Text(t) => json!(t),
                        Cell::Empty => Value::Null,
                    };
                    m.insert((*k).to_string(), v);
                }
                Value::Object(m)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("json");
        s.push('\n');
        s
    }

    fn render(&self, format: Option<Format>) -> String {
        match format.unwrap_or(Format::Csv) {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }
}

fn finite_json(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

// every float in a JSON tree rounded to 12 significant digits
fn round_tree(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => finite_json(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(round_tree).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_tree(v))).collect()),
        other => other,
    }
}

fn emit(text: &str, out: &OutArgs) -> Result<()> {
    match &out.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut lock = std::io::stdout().lock();
            match lock.write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::InvalidArgument(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn need_levels(levels: usize) -> Result<()> {
    if levels == 0 {
        return Err(Error::InvalidArgument("--levels must be at least 1".into()));
    }
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ConstraintViolation { .. }
        | Error::NonFinite(_)
        | Error::DegenerateDelta
        | Error::SingularPoint
        | Error::InvalidGamma0
        | Error::PathThroughSingularity { .. }
        | Error::InvalidPath(_)
        | Error::InvalidDomain(_)
        | Error::InvalidArgument(_)
        | Error::OutOfDomain(_)
        | Error::UnrepresentableParams
        | Error::NearPole { .. } => 2,
        Error::FloorTooHigh { .. }
        | Error::NoConvergence { .. }
        | Error::MissedRoots { .. }
        | Error::NotAnEigenvalue { .. }
        | Error::DomainMismatch
        | Error::StepUnderflow { .. }
        | Error::SpectraMismatch(_)
        | Error::GaugeAmbiguity { .. }
        | Error::TruncationLeak { .. } => 3,
    }
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<()> {
    need_levels(a.levels)?;
    let p = a.params.resolve()?;
    let d = a.domain.domain()?;
    let c = Coupling::from(p);
    let w = spectrum_window(&c, &d, a.levels, a.floor.unwrap_or(f64::NEG_INFINITY), &a.domain.options()?)?;
    let mut rows = Vec::new();
    for l in &w.levels {
        let nodes = node_count(&wavefunction(l, &c, &d)?);
        rows.push(vec![Cell::Int(l.index as i64), Cell::Num(l.energy), Cell::Num(l.momentum), Cell::Int(nodes as i64)]);
    }
    emit(&Table { header: &["n", "energy", "momentum", "nodes"], rows }.render(a.out.format), &a.out)
}

fn grid(min: f64, max: f64, steps: usize, name: &str) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) || min > max || steps == 0 || (steps == 1 && min != max) {
        return Err(Error::InvalidArgument(format!("invalid {name} range [{min}, {max}] with {steps} steps")));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    Ok((0..steps).map(|j| if j + 1 == steps { max } else { min + (max - min) * j as f64 / (steps - 1) as f64 }).collect())
}

fn cmd_surface(a: &SurfaceArgs) -> Result<()> {
    need_levels(a.levels)?;
    if a.gamma0 == 0.0 {
        return Err(Error::InvalidGamma0);
    }
    let d = a.domain.domain()?;
    let opts = a.domain.options()?;
    let alphas = grid(a.alpha_min, a.alpha_max, a.alpha_steps, "alpha")?;
    let betas = grid(a.beta_min, a.beta_max, a.beta_steps, "beta")?;
    let points: Vec<(f64, f64)> = alphas.iter().flat_map(|&al| betas.iter().map(move |&be| (al, be))).collect();
    let blocks: Vec<Result<Vec<Vec<Cell>>>> = points
        .par_iter()
        .map(|&(alpha, beta)| {
            let s = SliceCoords { gamma0: a.gamma0, alpha, beta };
            let marker = if s.is_singular() {
                Some("singular")
            } else if beta == 0.0 {
                Some("degenerate")
            } else {
                None
            };
            if let Some(m) = marker {
                return Ok(vec![vec![Cell::Num(alpha), Cell::Num(beta), Cell::Text(m), Cell::Empty]]);
            }
            let c = Coupling::from(from_slice(s)?);
            let w = spectrum_window(&c, &d, a.levels, f64::NEG_INFINITY, &opts)?;
            Ok(w.levels
                .iter()
                .map(|l| vec![Cell::Num(alpha), Cell::Num(beta), Cell::Int(l.index as i64), Cell::Num(l.energy)])
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for b in blocks {
        rows.extend(b?);
    }
    emit(&Table { header: &["alpha", "beta", "level", "energy"], rows }.render(a.out.format), &a.out)
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::InvalidArgument(format!("expected `dalpha,dbeta`, got `{s}`"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
}

/// Outcome of the loop command: the JSON report and whether the measured
/// shift obeys `shift = 2 * ORIENTATION * winding`.
fn cmd_loop(a: &LoopArgs) -> Result<bool> {
    need_levels(a.levels)?;
    if a.out.format == Some(Format::Csv) {
        return Err(Error::InvalidArgument("loop reports are JSON only".into()));
    }
    let d = a.domain.domain()?;
    let spectrum = a.domain.options()?;
    let center_offset = a.center_offset.as_deref().map(parse_pair).transpose()?.unwrap_or((0.0, 0.0));
    let path = ParameterPath::polar_loop(PolarLoop {
        gamma0: a.gamma0,
        rho: a.rho,
        theta0: a.theta0,
        turns: a.turns,
        steps: a.steps,
        center_offset,
    })?;
    let mut result = loop_permutation(&path, &d, a.levels, &TrackOptions { spectrum, ..Default::default() })?;
    if a.overlaps {
        let opts = EvolutionOptions { buffer: a.buffer, spectrum, ..Default::default() };
        result.evolution = Some(evolution_matrix(&path, &d, a.levels, &opts)?);
    }
    let ok = result.shift == 2 * ORIENTATION * result.winding;
    let tree = round_tree(serde_json::to_value(&result).expect("serializable report"));
    let mut text = serde_json::to_string_pretty(&tree).expect("json");
    text.push('\n');
    emit(&text, &a.out)?;
    if !ok {
        eprintln!(
            "error: shift {} does not equal 2 * {} * winding {}",
            result.shift, ORIENTATION, result.winding
        );
    }
    Ok(ok)
}

fn cmd_wave(a: &WaveArgs) -> Result<()> {
    if a.samples < 2 {
        return Err(Error::InvalidArgument("--samples must be at least 2".into()));
    }
    if a.level > MAX_LEVEL {
        return Err(Error::InvalidArgument(format!("level {} does not exist (at most {MAX_LEVEL})", a.level)));
    }
    let p = a.params.resolve()?;
    let d = a.domain.domain()?;
    let c = Coupling::from(p);
    let w = spectrum_window(&c, &d, a.level + 1, f64::NEG_INFINITY, &a.domain.options()?)?;
    let level: EnergyLevel = *w
        .levels
        .iter()
        .find(|l| l.index == a.level)
        .ok_or_else(|| Error::InvalidArgument(format!("level {} does not exist", a.level)))?;
    let wf = wavefunction(&level, &c, &d)?;
    let (left, right) = (d.left_len(), d.right_len());
    let n = a.samples;
    let mut rows = Vec::with_capacity(2 * n + 2);
    let mut push = |x: f64, side: Side| -> Result<()> {
        rows.push(vec![Cell::Num(x), Cell::Num(wf.value(x, side)?)]);
        Ok(())
    };
    for j in 0..n {
        push(-left + left * j as f64 / n as f64, Side::Left)?;
    }
    push(0.0, Side::Left)?;
    push(0.0, Side::Right)?;
    for j in 1..=n {
        push(if j == n { right } else { right * j as f64 / n as f64 }, Side::Right)?;
    }
    emit(&Table { header: &["x", "psi"], rows }.render(a.out.format), &a.out)
}

fn cmd_converge(a: &ConvergeArgs) -> Result<()> {
    need_levels(a.levels)?;
    let p = a.params.resolve()?;
    let d = a.domain.domain()?;
    let a_list = a
        .a_list
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("bad --a-list entry `{s}`"))))
        .collect::<Result<Vec<f64>>>()?;
    let rows = convergence_study(&p, &d, &a_list, a.levels)?
        .iter()
        .map(|r| vec![Cell::Num(r.a), Cell::Int(r.level as i64), Cell::Num(r.energy), Cell::Num(r.abs_error)])
        .collect();
    emit(&Table { header: &["a", "level", "energy", "abs_error"], rows }.render(a.out.format), &a.out)
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a).map(|_| true),
        Command::Surface(a) => cmd_surface(a).map(|_| true),
        Command::Loop(a) => cmd_loop(a),
        Command::Wave(a) => cmd_wave(a).map(|_| true),
        Command::Converge(a) => cmd_converge(a).map(|_| true),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 3,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run_from_env() -> i32 {
    run(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g = grid(-2.0, 0.0, 101, "alpha").unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!((g[0], g[50], g[100]), (-2.0, -1.0, 0.0));
        assert_eq!(grid(0.3, 0.3, 1, "beta").unwrap(), vec![0.3]);
        assert!(grid(1.0, 0.0, 5, "beta").is_err());
        assert!(grid(0.0, 1.0, 1, "beta").is_err());
    }

    #[test]
    fn offsets_parse() {
        assert_eq!(parse_pair("5,5").unwrap(), (5.0, 5.0));
        assert_eq!(parse_pair("-0.5, 2").unwrap(), (-0.5, 2.0));
        assert!(parse_pair("5").is_err());
    }

    #[test]
    fn parameter_styles_are_exclusive() {
        let full = ParamArgs { alpha: Some(-1.0), beta: Some(0.0), gamma: Some(-1.0), delta: Some(0.0), gamma0: None };
        assert_eq!(full.resolve().unwrap(), BCParams::free());
        let mixed = ParamArgs { gamma0: Some(-1.0), ..full.clone() };
        assert!(matches!(mixed.resolve(), Err(Error::InvalidArgument(_))));
        let slice = ParamArgs { alpha: Some(-1.0), beta: Some(0.5), gamma: None, delta: None, gamma0: Some(-1.0) };
        assert_eq!(slice.resolve().unwrap().delta, 0.0);
        let bad = ParamArgs { alpha: Some(1.0), beta: Some(1.0), gamma: Some(1.0), delta: Some(1.0), gamma0: None };
        assert_eq!(exit_code(&bad.resolve().unwrap_err()), 2);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["spiral", "spectrum", "--levels", "x"]), 2);
        assert_eq!(run(["spiral", "nonsense"]), 2);
    }
}
