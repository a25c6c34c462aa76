//! Parameter sweeps, threshold searches and the real-unit front end.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::negativity::{full_report, NegativityReport, Temperature, NEG_TOL};
use crate::phases::classify;
use crate::spectrum::CouplingParams;

/// Boltzmann constant in cm^-1/K.
pub const K_B_CM1: f64 = 0.6950348;
/// Bohr magneton in cm^-1/T.
pub const MU_B_CM1: f64 = 0.4668645;

/// Physical inputs; energies in wavenumbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealUnits {
    pub j_cm1: f64,
    pub j1_cm1: f64,
    pub g: f64,
    pub b_tesla: f64,
    pub t_kelvin: f64,
}

impl RealUnits {
    pub fn validate(&self) -> Result<()> {
        check_finite("J_cm1", self.j_cm1)?;
        check_finite("J1_cm1", self.j1_cm1)?;
        check_finite("g", self.g)?;
        check_finite("B_tesla", self.b_tesla)?;
        check_finite("T_kelvin", self.t_kelvin)?;
        if self.t_kelvin < 0.0 {
            return Err(Error::InvalidParameter(format!("T_kelvin must be >= 0, got {}", self.t_kelvin)));
        }
        Ok(())
    }

    pub fn field_cm1(&self) -> f64 {
        self.g * MU_B_CM1 * self.b_tesla
    }

    pub fn params(&self) -> CouplingParams {
        CouplingParams { j: self.j_cm1, j1: self.j1_cm1, h: self.field_cm1() }
    }

    /// k_B T in cm^-1.
    pub fn kt_cm1(&self) -> f64 {
        K_B_CM1 * self.t_kelvin
    }

    pub fn temperature(&self) -> Result<Temperature> {
        Temperature::from_kt(self.kt_cm1())
    }

    /// Same point in units of |J|: (params with J = sign J, k_B T/|J|).
    pub fn dimensionless(&self) -> Result<(CouplingParams, f64)> {
        self.validate()?;
        let s = self.j_cm1.abs();
        if s == 0.0 {
            return Err(Error::InvalidParameter("J_cm1 must be nonzero".into()));
        }
        let p = self.params();
        Ok((CouplingParams { j: p.j / s, j1: p.j1 / s, h: p.h / s }, self.kt_cm1() / s))
    }

    pub fn report(&self) -> Result<NegativityReport> {
        self.validate()?;
        full_report(&self.params(), self.temperature()?)
    }

    pub fn kelvin_from_cm1(kt: f64) -> f64 {
        kt / K_B_CM1
    }

    pub fn tesla_from_cm1(&self, h: f64) -> f64 {
        h / (self.g * MU_B_CM1)
    }
}

/// Where a sweep point lives: a dimensionless base with k_B T, or real units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Base {
    Dimensionless { params: CouplingParams, t: f64 },
    Real(RealUnits),
}

impl Base {
    pub fn validate(&self) -> Result<()> {
        match self {
            Base::Dimensionless { params, t } => {
                params.validate()?;
                Temperature::from_kt(*t).map(|_| ())
            }
            Base::Real(u) => u.validate(),
        }
    }

    /// Column names for (J, J1, field, temperature).
    pub fn parameter_columns(&self) -> [&'static str; 4] {
        match self {
            Base::Dimensionless { .. } => ["J", "J1", "h", "T"],
            Base::Real(_) => ["J_cm1", "J1_cm1", "B_tesla", "T_kelvin"],
        }
    }

    pub fn parameter_values(&self) -> [f64; 4] {
        match self {
            Base::Dimensionless { params, t } => [params.j, params.j1, params.h, *t],
            Base::Real(u) => [u.j_cm1, u.j1_cm1, u.b_tesla, u.t_kelvin],
        }
    }

    pub fn with_j1(&self, j1: f64) -> Self {
        match *self {
            Base::Dimensionless { params, t } => Base::Dimensionless { params: CouplingParams { j1, ..params }, t },
            Base::Real(u) => Base::Real(RealUnits { j1_cm1: j1, ..u }),
        }
    }

    /// Field in the base's own units (h, or tesla).
    pub fn with_field(&self, h: f64) -> Self {
        match *self {
            Base::Dimensionless { params, t } => Base::Dimensionless { params: params.with_field(h), t },
            Base::Real(u) => Base::Real(RealUnits { b_tesla: h, ..u }),
        }
    }

    /// Temperature in the base's own units (k_B T, or kelvin).
    pub fn with_temperature(&self, t: f64) -> Self {
        match *self {
            Base::Dimensionless { params, .. } => Base::Dimensionless { params, t },
            Base::Real(u) => Base::Real(RealUnits { t_kelvin: t, ..u }),
        }
    }

    pub fn field(&self) -> f64 {
        self.parameter_values()[2]
    }

    pub fn temp(&self) -> f64 {
        self.parameter_values()[3]
    }

    /// Coupling parameters and temperature in common energy units.
    pub fn physical(&self) -> Result<(CouplingParams, Temperature)> {
        self.validate()?;
        match self {
            Base::Dimensionless { params, t } => Ok((*params, Temperature::from_kt(*t)?)),
            Base::Real(u) => Ok((u.params(), u.temperature()?)),
        }
    }

    pub fn report(&self) -> Result<NegativityReport> {
        let (p, t) = self.physical()?;
        full_report(&p, t)
    }

    pub fn n_tri(&self) -> Result<f64> {
        Ok(self.report()?.n_tri)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// J1 (outer) x h (inner) at T = 0.
    GsMap,
    /// T (outer) x h (inner) at fixed J1.
    ThermalMap,
    TScan,
    HScan,
}

impl SweepMode {
    pub fn name(&self) -> &'static str {
        match self {
            SweepMode::GsMap => "gs_map",
            SweepMode::ThermalMap => "thermal_map",
            SweepMode::TScan => "t_scan",
            SweepMode::HScan => "h_scan",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [SweepMode::GsMap, SweepMode::ThermalMap, SweepMode::TScan, SweepMode::HScan]
            .into_iter()
            .find(|m| m.name() == s)
    }

    pub fn dims(&self) -> usize {
        match self {
            SweepMode::GsMap | SweepMode::ThermalMap => 2,
            SweepMode::TScan | SweepMode::HScan => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Axis { min, max, steps }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        check_finite(name, self.min)?;
        check_finite(name, self.max)?;
        if self.steps < 2 {
            return Err(Error::InvalidParameter(format!("{name}: steps must be >= 2")));
        }
        if self.max < self.min {
            return Err(Error::InvalidParameter(format!("{name}: max < min")));
        }
        Ok(())
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.steps {
            self.max
        } else {
            self.min + (self.max - self.min) * k as f64 / (self.steps - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|k| self.value(k)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    NMuS1,
    NS1S2,
    NMuFull,
    NS1Full,
    NTri,
    Class,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::NMuS1,
        Quantity::NS1S2,
        Quantity::NMuFull,
        Quantity::NS1Full,
        Quantity::NTri,
        Quantity::Class,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Class => "class",
            q => NegativityReport::FIELDS[*q as usize],
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.name() == s)
    }

    fn cell(&self, r: &NegativityReport) -> Value {
        match self {
            Quantity::Class => Value::Text(classify(r).label().to_string()),
            q => Value::Num(r.values()[*q as usize]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub mode: SweepMode,
    pub base: Base,
    /// Outer axis: J1 for gs_map, T for thermal_map and t_scan, h for h_scan.
    pub axis1: Axis,
    /// Inner axis (field) for the two-dimensional modes.
    pub axis2: Option<Axis>,
    pub quantities: Vec<Quantity>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.axis1.validate("axis1")?;
        match (self.mode.dims(), &self.axis2) {
            (2, Some(a)) => a.validate("axis2")?,
            (2, None) => return Err(Error::InvalidParameter(format!("{} needs a second axis", self.mode.name()))),
            (_, Some(_)) => return Err(Error::InvalidParameter(format!("{} takes one axis", self.mode.name()))),
            _ => {}
        }
        let temps = match self.mode {
            SweepMode::ThermalMap | SweepMode::TScan => Some(self.axis1),
            _ => None,
        };
        if let Some(a) = temps {
            if a.min < 0.0 {
                return Err(Error::InvalidParameter("temperatures must be >= 0".into()));
            }
        }
        if self.quantities.is_empty() {
            return Err(Error::InvalidParameter("no quantities requested".into()));
        }
        Ok(())
    }

    /// Grid points in row order.
    pub fn points(&self) -> Vec<Base> {
        let b = &self.base;
        let outer = self.axis1.values();
        let inner = self.axis2.map(|a| a.values()).unwrap_or_default();
        let mut out = Vec::with_capacity(outer.len() * inner.len().max(1));
        for &x in &outer {
            match self.mode {
                SweepMode::GsMap => {
                    for &y in &inner {
                        out.push(b.with_j1(x).with_field(y).with_temperature(0.0));
                    }
                }
                SweepMode::ThermalMap => {
                    for &y in &inner {
                        out.push(b.with_temperature(x).with_field(y));
                    }
                }
                SweepMode::TScan => out.push(b.with_temperature(x)),
                SweepMode::HScan => out.push(b.with_field(x)),
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Num(f64),
    Text(String),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Num(x) => Some(*x),
            Value::Text(_) => None,
        }
    }

    /// 17 significant digits for numbers.
    pub fn to_field(&self) -> String {
        match self {
            Value::Num(x) => format!("{x:.16e}"),
            Value::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Dataset {
    pub fn column(&self, name: &str) -> Option<Vec<&Value>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.to_string());
        wr.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            wr.write_record(r.iter().map(Value::to_field)).map_err(io)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Dataset> {
    spec.validate()?;
    let points = spec.points();
    let rows = points
        .par_iter()
        .map(|b| {
            let r = b.report()?;
            let mut row: Vec<Value> = b.parameter_values().into_iter().map(Value::Num).collect();
            row.extend(spec.quantities.iter().map(|q| q.cell(&r)));
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut columns: Vec<String> = spec.base.parameter_columns().iter().map(|s| s.to_string()).collect();
    columns.extend(spec.quantities.iter().map(|q| q.name().to_string()));
    Ok(Dataset { columns, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    /// Crossing location; 0 when not found.
    pub value: f64,
    pub found: bool,
}

const COARSE: usize = 400;

/// Bisection between `inside` (f >= target) and `outside` (f < target).
fn bisect(f: &dyn Fn(f64) -> Result<f64>, target: f64, mut inside: f64, mut outside: f64) -> Result<f64> {
    while (outside - inside).abs() > 1e-5 * inside.abs().max(outside.abs()) {
        let mid = 0.5 * (inside + outside);
        if f(mid)? >= target {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(0.5 * (inside + outside))
}

fn effective_target(target: f64) -> Result<f64> {
    check_finite("target", target)?;
    if target < 0.0 {
        return Err(Error::InvalidParameter(format!("target must be >= 0, got {target}")));
    }
    Ok(target.max(NEG_TOL))
}

/// Largest temperature (base units) with n_tri >= target; searched up to `t_max`,
/// extended while the top of the range is still above target.
pub fn threshold_temperature_in(base: &Base, target: f64, t_max: f64) -> Result<Threshold> {
    base.validate()?;
    let target = effective_target(target)?;
    check_finite("t_max", t_max)?;
    if t_max <= 0.0 {
        return Err(Error::InvalidParameter("t_max must be > 0".into()));
    }
    let f = |t: f64| base.with_temperature(t).n_tri();
    let mut top = t_max;
    for _ in 0..20 {
        if f(top)? < target {
            break;
        }
        top *= 2.0;
    }
    if f(top)? >= target {
        return Err(Error::NoBracket(format!("n_tri >= {target} up to T = {top}")));
    }
    let grid: Vec<f64> = (1..=COARSE).map(|k| top * k as f64 / COARSE as f64).collect();
    let vals = grid.par_iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
    match vals.iter().rposition(|&v| v >= target) {
        Some(k) => Ok(Threshold { value: bisect(&f, target, grid[k], grid[k + 1])?, found: true }),
        None if f(0.0)? >= target => Ok(Threshold { value: bisect(&f, target, 0.0, grid[0])?, found: true }),
        None => Ok(Threshold { value: 0.0, found: false }),
    }
}

/// Threshold temperature in the units of `p` (k_B T), default search box 10x the energy scale.
pub fn threshold_temperature(p: &CouplingParams, target: f64) -> Result<Threshold> {
    let base = Base::Dimensionless { params: *p, t: 0.0 };
    threshold_temperature_in(&base, target, 10.0 * p.energy_scale())
}

/// Kelvin threshold for real-unit inputs; `u.t_kelvin` is ignored.
pub fn threshold_temperature_real(u: &RealUnits, target: f64) -> Result<Threshold> {
    let t_max = RealUnits::kelvin_from_cm1(10.0 * u.params().energy_scale());
    threshold_temperature_in(&Base::Real(*u), target, t_max)
}

/// First field (base units) where n_tri falls from >= target to below it, scanning [0, h_max].
pub fn field_dropout(base: &Base, target: f64, h_max: f64) -> Result<Threshold> {
    base.validate()?;
    let target = effective_target(target)?;
    check_finite("h_max", h_max)?;
    if h_max <= 0.0 {
        return Err(Error::InvalidParameter("h_max must be > 0".into()));
    }
    let f = |h: f64| base.with_field(h).n_tri();
    let grid: Vec<f64> = (0..=COARSE).map(|k| h_max * k as f64 / COARSE as f64).collect();
    let vals = grid.par_iter().map(|&h| f(h)).collect::<Result<Vec<_>>>()?;
    for k in 0..COARSE {
        if vals[k] >= target && vals[k + 1] < target {
            return Ok(Threshold { value: bisect(&f, target, grid[k], grid[k + 1])?, found: true });
        }
    }
    Ok(Threshold { value: 0.0, found: false })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeAxes {
    T,
    TH,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub t: (f64, f64),
    pub h: (f64, f64),
    pub t_steps: usize,
    pub h_steps: usize,
}

impl SearchBox {
    /// T in [0, t_max] and h in [0, h_max] on a 201 x 201 grid.
    pub fn new(t_max: f64, h_max: f64) -> Self {
        SearchBox { t: (0.0, t_max), h: (0.0, h_max), t_steps: 201, h_steps: 201 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Maximum {
    pub value: f64,
    pub t: f64,
    pub h: f64,
}

/// Maximum of n_tri over the free axes; grid scan then compass refinement.
pub fn max_negativity_over(base: &Base, free: FreeAxes, sbox: &SearchBox) -> Result<Maximum> {
    base.validate()?;
    let t_axis = Axis::new(sbox.t.0, sbox.t.1, sbox.t_steps);
    t_axis.validate("t")?;
    if sbox.t.0 < 0.0 {
        return Err(Error::InvalidParameter("temperatures must be >= 0".into()));
    }
    let h_axis = match free {
        FreeAxes::T => Axis::new(base.field(), base.field(), 2),
        FreeAxes::TH => {
            let a = Axis::new(sbox.h.0, sbox.h.1, sbox.h_steps);
            a.validate("h")?;
            a
        }
    };
    let f = |t: f64, h: f64| base.with_temperature(t).with_field(h).n_tri();
    let pts: Vec<(f64, f64)> = t_axis
        .values()
        .into_iter()
        .flat_map(|t| h_axis.values().into_iter().map(move |h| (t, h)))
        .collect();
    let vals = pts.par_iter().map(|&(t, h)| f(t, h)).collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for k in 1..vals.len() {
        if vals[k] > vals[best] {
            best = k;
        }
    }
    let (mut t, mut h) = pts[best];
    let mut v = vals[best];
    let dt0 = (t_axis.max - t_axis.min) / (t_axis.steps - 1) as f64;
    let dh0 = (h_axis.max - h_axis.min) / (h_axis.steps - 1) as f64;
    let (mut dt, mut dh) = (dt0, dh0);
    let floor = 1e-6;
    while dt > floor * dt0.max(f64::MIN_POSITIVE) || dh > floor * dh0.max(f64::MIN_POSITIVE) {
        let mut moved = false;
        let mut cands = vec![(t + dt, h), (t - dt, h)];
        if free == FreeAxes::TH {
            cands.push((t, h + dh));
            cands.push((t, h - dh));
        }
        for (ct, ch) in cands {
            let ct = ct.clamp(t_axis.min, t_axis.max);
            let ch = ch.clamp(h_axis.min, h_axis.max);
            let cv = f(ct, ch)?;
            if cv > v {
                (t, h, v) = (ct, ch, cv);
                moved = true;
            }
        }
        if !moved {
            dt *= 0.5;
            dh *= 0.5;
        }
    }
    Ok(Maximum { value: v, t, h })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dimless(j: f64, j1: f64, h: f64, t: f64) -> Base {
        Base::Dimensionless { params: CouplingParams { j, j1, h }, t }
    }

    #[test]
    fn axis_endpoints_exact() {
        let a = Axis::new(-2.0, 4.0, 7);
        assert_eq!(a.values(), vec![-2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(Axis::new(0.0, 1.0, 1).validate("x").is_err());
        assert!(Axis::new(1.0, 0.0, 3).validate("x").is_err());
    }

    #[test]
    fn gs_map_rows_and_order() {
        let spec = SweepSpec {
            mode: SweepMode::GsMap,
            base: dimless(1.0, 0.0, 0.0, 0.0),
            axis1: Axis::new(0.0, 2.0, 3),
            axis2: Some(Axis::new(0.0, 1.0, 3)),
            quantities: Quantity::ALL.to_vec(),
        };
        let d = run_sweep(&spec).unwrap();
        assert_eq!(d.rows.len(), 9);
        assert_eq!(d.columns, ["J", "J1", "h", "T", "n_mu_s1", "n_s1_s2", "n_mu_full", "n_s1_full", "n_tri", "class"]);
        let j1: Vec<f64> = d.column("J1").unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
        assert_eq!(j1, [0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0]);
        assert_eq!(run_sweep(&spec).unwrap().to_csv().unwrap(), d.to_csv().unwrap());
    }

    #[test]
    fn csv_round_trips_floats() {
        let spec = SweepSpec {
            mode: SweepMode::TScan,
            base: dimless(1.0, 1.5, 0.8, 0.0),
            axis1: Axis::new(0.1, 0.7, 4),
            axis2: None,
            quantities: vec![Quantity::NTri],
        };
        let d = run_sweep(&spec).unwrap();
        let text = d.to_csv().unwrap();
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        for (rec, row) in rd.records().zip(&d.rows) {
            let x: f64 = rec.unwrap()[4].parse().unwrap();
            assert_eq!(x.to_bits(), row[4].as_f64().unwrap().to_bits());
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut spec = SweepSpec {
            mode: SweepMode::ThermalMap,
            base: dimless(1.0, 1.5, 0.0, 0.0),
            axis1: Axis::new(-0.1, 1.0, 3),
            axis2: Some(Axis::new(0.0, 1.0, 3)),
            quantities: vec![Quantity::NTri],
        };
        assert!(run_sweep(&spec).is_err());
        spec.axis1.min = 0.0;
        spec.axis2 = None;
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn real_units_match_dimensionless() {
        let u = RealUnits { j_cm1: 90.3, j1_cm1: 4.0, g: 2.1667, b_tesla: 50.0, t_kelvin: 60.0 };
        let (p, t) = u.dimensionless().unwrap();
        let a = u.report().unwrap();
        let b = full_report(&p, Temperature::from_kt(t).unwrap()).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn polarized_threshold() {
        let p = CouplingParams { j: 1.0, j1: 0.5, h: 5.0 };
        let r = threshold_temperature(&p, 1e-3).unwrap();
        assert!(!r.found);
        assert_eq!(r.value, 0.0);
        // weak thermal activation above the saturated ground state
        let r = threshold_temperature(&p, 0.0).unwrap();
        assert!(r.found && r.value > 1.0 && r.value < 2.0, "{r:?}");
    }

    #[test]
    fn threshold_brackets_target() {
        let p = CouplingParams { j: 1.0, j1: 0.0, h: 0.0 };
        let r = threshold_temperature(&p, 0.1).unwrap();
        assert!(r.found);
        let at = |t: f64| full_report(&p, Temperature::from_kt(t).unwrap()).unwrap().n_tri;
        assert!(at(r.value * (1.0 - 1e-4)) >= 0.1);
        assert!(at(r.value * (1.0 + 1e-4)) < 0.1);
    }

    #[test]
    fn max_at_corner_equals_ground_value() {
        let base = dimless(1.0, 0.5, 0.0, 0.0);
        let m = max_negativity_over(&base, FreeAxes::TH, &SearchBox::new(1.0, 0.2)).unwrap();
        let g = full_report(&CouplingParams { j: 1.0, j1: 0.5, h: 1e-9 }, Temperature::Zero).unwrap().n_tri;
        assert!((m.value - g).abs() < 1e-9, "{m:?} {g}");
    }
}
