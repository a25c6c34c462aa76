//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::negativity::Temperature;
use crate::phases::{classify, ground_state};
use crate::reconstruct::{observables_from_rho, rho_from_observables, ObservableSet};
use crate::spectrum::{analytic_spectrum, CouplingParams};
use crate::density::thermal_density_matrix;
use crate::sweep::{
    field_dropout, max_negativity_over, run_sweep, threshold_temperature_in, Axis, Base, Dataset,
    FreeAxes, Quantity, RealUnits, SearchBox, SweepMode, SweepSpec, Value, K_B_CM1, MU_B_CM1,
};

#[derive(Debug, Parser)]
#[command(name = "trimer", version, about = "Negativities of the mixed spin-(1,1/2,1) Heisenberg trimer")]
pub struct Cli {
    #[command(flatten)]
    pub globals: Globals,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Dimensionless,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Globals {
    /// Exchange coupling J (sets the energy unit)
    #[arg(long = "J", global = true, allow_negative_numbers = true)]
    pub j: Option<f64>,
    /// S1-S2 coupling
    #[arg(long = "J1", global = true, allow_negative_numbers = true)]
    pub j1: Option<f64>,
    /// Magnetic field h = g mu_B B
    #[arg(long = "h", global = true, allow_negative_numbers = true)]
    pub h: Option<f64>,
    /// k_B T; 0 is the ground state
    #[arg(long = "T", global = true, allow_negative_numbers = true)]
    pub t: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Units::Dimensionless)]
    pub units: Units,
    #[arg(long = "J-cm1", global = true, allow_negative_numbers = true)]
    pub j_cm1: Option<f64>,
    #[arg(long = "J1-cm1", global = true, allow_negative_numbers = true)]
    pub j1_cm1: Option<f64>,
    /// Lande factor (real units, default 2)
    #[arg(long = "g", global = true)]
    pub g: Option<f64>,
    #[arg(long = "B-tesla", global = true, allow_negative_numbers = true)]
    pub b_tesla: Option<f64>,
    #[arg(long = "T-kelvin", global = true, allow_negative_numbers = true)]
    pub t_kelvin: Option<f64>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The 18 energy levels, lowest first
    Spectrum,
    /// Five negativities and the entanglement class
    Report,
    /// Ground-state manifold and its entanglement class
    Classify,
    /// Grid sweep
    Sweep(SweepArgs),
    /// Highest temperature (or first field) where n_tri stays at or above a target
    Threshold(ThresholdArgs),
    /// Maximum tripartite negativity over temperature, or temperature and field
    Maxneg(MaxnegArgs),
    /// Rebuild rho from local observables, or emit them with --emit
    Reconstruct(ReconstructArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = ["gs_map", "thermal_map", "t_scan", "h_scan"])]
    pub mode: String,
    /// Outer axis: J1 (gs_map), T (thermal_map, t_scan) or h (h_scan)
    #[arg(long, allow_negative_numbers = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    #[arg(long, default_value_t = 501)]
    pub x_steps: usize,
    /// Inner field axis of the two-dimensional modes
    #[arg(long, allow_negative_numbers = true)]
    pub y_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y_max: Option<f64>,
    #[arg(long, default_value_t = 501)]
    pub y_steps: usize,
    /// Comma-separated columns out of n_mu_s1,n_s1_s2,n_mu_full,n_s1_full,n_tri,class
    #[arg(long, value_delimiter = ',')]
    pub quantities: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Along {
    Temperature,
    Field,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, default_value_t = 0.0)]
    pub target: f64,
    #[arg(long, value_enum, default_value_t = Along::Temperature)]
    pub along: Along,
    /// Upper end of the scan, in the current units
    #[arg(long)]
    pub max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Free {
    T,
    Th,
}

#[derive(Debug, Args)]
pub struct MaxnegArgs {
    #[arg(long, value_enum, default_value_t = Free::T)]
    pub free: Free,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub h_max: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// ObservableSet JSON file ("-" for stdin)
    #[arg(long, required_unless_present = "emit")]
    pub observables: Option<PathBuf>,
    /// Print the observables of the thermal state instead
    #[arg(long)]
    pub emit: bool,
}

/// Failure with its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) | Error::SingularInput(_) => 2,
            _ => 1,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError { code: 1, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

impl Globals {
    fn base(&self) -> CliResult<Base> {
        let dimless = [self.j, self.j1, self.h, self.t].iter().any(Option::is_some);
        let real = [self.j_cm1, self.j1_cm1, self.g, self.b_tesla, self.t_kelvin].iter().any(Option::is_some);
        let b = match self.units {
            Units::Dimensionless => {
                if real {
                    return Err(CliError::usage("real-unit flags need --units real"));
                }
                let params = CouplingParams {
                    j: self.j.unwrap_or(1.0),
                    j1: self.j1.unwrap_or(0.0),
                    h: self.h.unwrap_or(0.0),
                };
                Base::Dimensionless { params, t: self.t.unwrap_or(0.0) }
            }
            Units::Real => {
                if dimless {
                    return Err(CliError::usage("--J/--J1/--h/--T cannot be combined with --units real"));
                }
                let j_cm1 = self.j_cm1.ok_or_else(|| CliError::usage("--units real requires --J-cm1"))?;
                Base::Real(RealUnits {
                    j_cm1,
                    j1_cm1: self.j1_cm1.unwrap_or(0.0),
                    g: self.g.unwrap_or(2.0),
                    b_tesla: self.b_tesla.unwrap_or(0.0),
                    t_kelvin: self.t_kelvin.unwrap_or(0.0),
                })
            }
        };
        b.validate()?;
        Ok(b)
    }
}

/// Unit of J1, field and temperature in the base's own units, per |J|.
fn scales(b: &Base) -> CliResult<[f64; 3]> {
    match b {
        Base::Dimensionless { params, .. } => {
            let s = params.j.abs();
            if s == 0.0 {
                return Err(CliError::usage("--J must be nonzero"));
            }
            Ok([s; 3])
        }
        Base::Real(u) => {
            let s = u.j_cm1.abs();
            if s == 0.0 || u.g == 0.0 {
                return Err(CliError::usage("--J-cm1 and --g must be nonzero"));
            }
            Ok([s, s / (u.g.abs() * MU_B_CM1), s / K_B_CM1])
        }
    }
}

fn num_row(values: &[f64]) -> Vec<Value> {
    values.iter().map(|&x| Value::Num(x)).collect()
}

fn dataset(columns: &[&str], rows: Vec<Vec<Value>>) -> Dataset {
    Dataset { columns: columns.iter().map(|s| s.to_string()).collect(), rows }
}

fn params_row(b: &Base) -> (Vec<String>, Vec<Value>) {
    (b.parameter_columns().iter().map(|s| s.to_string()).collect(), num_row(&b.parameter_values()))
}

fn spectrum(b: &Base) -> CliResult<Dataset> {
    let (p, _) = b.physical()?;
    let rows = analytic_spectrum(&p)?
        .iter()
        .map(|e| {
            vec![
                Value::Text(e.level.to_string()),
                Value::Num(e.s_total()),
                Value::Num(e.sz()),
                Value::Text(e.branch().to_string()),
                Value::Num(e.energy),
            ]
        })
        .collect();
    Ok(dataset(&["level", "s_total", "sz", "branch", "energy"], rows))
}

fn report(b: &Base) -> CliResult<Dataset> {
    let r = b.report()?;
    let (mut columns, mut row) = params_row(b);
    columns.extend(Quantity::ALL.iter().map(|q| q.name().to_string()));
    row.extend(num_row(&r.values()));
    row.push(Value::Text(classify(&r).label().to_string()));
    Ok(Dataset { columns, rows: vec![row] })
}

fn classify_cmd(b: &Base) -> CliResult<Dataset> {
    let (p, _) = b.with_temperature(0.0).physical()?;
    let g = ground_state(&p)?;
    let r = b.with_temperature(0.0).report()?;
    let (mut columns, mut row) = params_row(&b.with_temperature(0.0));
    columns.extend(["ground_state", "degeneracy", "energy", "class"].map(String::from));
    row.extend([
        Value::Text(g.to_string()),
        Value::Num(g.degeneracy() as f64),
        Value::Num(g.energy),
        Value::Text(classify(&r).label().to_string()),
    ]);
    Ok(Dataset { columns, rows: vec![row] })
}

fn sweep(b: &Base, a: &SweepArgs) -> CliResult<Dataset> {
    let mode = SweepMode::from_name(&a.mode).ok_or_else(|| CliError::usage(format!("unknown mode {}", a.mode)))?;
    let [sj, sh, st] = scales(b)?;
    let (x_lo, x_hi) = match mode {
        SweepMode::GsMap => (-2.0 * sj, 4.0 * sj),
        SweepMode::ThermalMap | SweepMode::TScan => (0.0, 3.0 * st),
        SweepMode::HScan => (0.0, 3.5 * sh),
    };
    let axis1 = Axis::new(a.x_min.unwrap_or(x_lo), a.x_max.unwrap_or(x_hi), a.x_steps);
    let axis2 = (mode.dims() == 2)
        .then(|| Axis::new(a.y_min.unwrap_or(0.0), a.y_max.unwrap_or(3.5 * sh), a.y_steps));
    if axis2.is_none() && (a.y_min.is_some() || a.y_max.is_some()) {
        return Err(CliError::usage(format!("{} takes one axis", mode.name())));
    }
    let quantities = if a.quantities.is_empty() {
        Quantity::ALL.to_vec()
    } else {
        a.quantities
            .iter()
            .map(|s| Quantity::from_name(s.trim()).ok_or_else(|| CliError::usage(format!("unknown quantity {s}"))))
            .collect::<CliResult<Vec<_>>>()?
    };
    Ok(run_sweep(&SweepSpec { mode, base: *b, axis1, axis2, quantities })?)
}

fn threshold(b: &Base, a: &ThresholdArgs) -> CliResult<Dataset> {
    let [_, sh, st] = scales(b)?;
    let cols = b.parameter_columns();
    match a.along {
        Along::Temperature => {
            let r = threshold_temperature_in(b, a.target, a.max.unwrap_or(10.0 * st))?;
            Ok(dataset(&[cols[3], "found"], vec![vec![Value::Num(r.value), Value::Text(r.found.to_string())]]))
        }
        Along::Field => {
            let r = field_dropout(b, a.target, a.max.unwrap_or(5.0 * sh))?;
            Ok(dataset(&[cols[2], "found"], vec![vec![Value::Num(r.value), Value::Text(r.found.to_string())]]))
        }
    }
}

fn maxneg(b: &Base, a: &MaxnegArgs) -> CliResult<Dataset> {
    let [_, sh, st] = scales(b)?;
    let sbox = SearchBox {
        t: (0.0, a.t_max.unwrap_or(3.0 * st)),
        h: (0.0, a.h_max.unwrap_or(3.5 * sh)),
        t_steps: a.steps,
        h_steps: a.steps,
    };
    let free = match a.free {
        Free::T => FreeAxes::T,
        Free::Th => FreeAxes::TH,
    };
    let m = max_negativity_over(b, free, &sbox)?;
    let cols = b.parameter_columns();
    Ok(dataset(&["n_tri", cols[3], cols[2]], vec![num_row(&[m.value, m.t, m.h])]))
}

fn thermal_beta(b: &Base) -> CliResult<(CouplingParams, f64)> {
    match b.physical()? {
        (p, Temperature::Beta(beta)) => Ok((p, beta)),
        (_, Temperature::Zero) => Err(CliError::usage("reconstruction needs a temperature > 0")),
    }
}

fn reconstruct(b: &Base, a: &ReconstructArgs, format: Format) -> CliResult<String> {
    let (p, beta) = thermal_beta(b)?;
    if a.emit {
        let o = observables_from_rho(&thermal_density_matrix(&p, beta)?)?;
        return match format {
            Format::Json => Ok(serde_json::to_string_pretty(&o).map_err(|e| CliError { code: 1, message: e.to_string() })?),
            Format::Csv => Ok(dataset(&ObservableSet::FIELDS, vec![num_row(&o.values())]).to_csv()?),
        };
    }
    let path = a.observables.as_ref().expect("clap requires --observables");
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path)?
    };
    let o: ObservableSet =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("bad observables JSON: {e}")))?;
    let r = rho_from_observables(&o, beta, p.h)?;
    let rep = crate::negativity::report_from_density(&r.density)?;
    let mut columns: Vec<&str> = Quantity::ALL.iter().map(|q| q.name()).collect();
    columns.extend(["residual", "min_eigenvalue"]);
    let mut row = num_row(&rep.values());
    row.push(Value::Text(classify(&rep).label().to_string()));
    row.extend(num_row(&[r.residual, r.min_eigenvalue]));
    render(&dataset(&columns, vec![row]), format)
}

fn render(d: &Dataset, format: Format) -> CliResult<String> {
    Ok(match format {
        Format::Csv => d.to_csv()?,
        Format::Json => d.to_json()? + "\n",
    })
}

fn execute(cli: &Cli) -> CliResult<String> {
    let b = cli.globals.base()?;
    let f = cli.globals.format;
    match &cli.command {
        Command::Spectrum => render(&spectrum(&b)?, f),
        Command::Report => render(&report(&b)?, f),
        Command::Classify => render(&classify_cmd(&b)?, f),
        Command::Sweep(a) => render(&sweep(&b, a)?, f),
        Command::Threshold(a) => render(&threshold(&b, a)?, f),
        Command::Maxneg(a) => render(&maxneg(&b, a)?, f),
        Command::Reconstruct(a) => reconstruct(&b, a, f),
    }
}

/// Parses arguments, runs, writes output; returns the exit status.
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
    let out = execute(&cli).and_then(|text| {
        match &cli.globals.out {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    });
    match out {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
