//! Hamiltonian, closed-form spectrum and partition function of the trimer.
//!
//! Basis ordering: flat = m*9 + a*3 + b with m = 1/2 - mu, a = 1 - s1, b = 1 - s2.
//! The central spin-1/2 is the slowest index, S2 the fastest.

use std::cmp::Ordering;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::linalg::{numeric_diagonalize, Eigen};

pub const DIM: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub j: f64,
    pub j1: f64,
    pub h: f64,
}

impl CouplingParams {
    pub fn new(j: f64, j1: f64, h: f64) -> Result<Self> {
        let p = CouplingParams { j, j1, h };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("J", self.j)?;
        check_finite("J1", self.j1)?;
        check_finite("h", self.h)
    }

    /// max(1, |J|, |J1|, |h|), used to scale absolute tolerances.
    pub fn energy_scale(&self) -> f64 {
        1f64.max(self.j.abs()).max(self.j1.abs()).max(self.h.abs())
    }

    pub fn with_field(&self, h: f64) -> Self {
        CouplingParams { h, ..*self }
    }
}

/// A single basis ket |mu, s1, s2>, spins stored as twice / once their z value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub mu2: i8,
    pub s1: i8,
    pub s2: i8,
}

impl BasisIndex {
    pub fn new(mu2: i8, s1: i8, s2: i8) -> Self {
        debug_assert!(mu2 == 1 || mu2 == -1);
        debug_assert!((-1..=1).contains(&s1) && (-1..=1).contains(&s2));
        BasisIndex { mu2, s1, s2 }
    }

    pub fn flat(&self) -> usize {
        let m = ((1 - self.mu2) / 2) as usize;
        let a = (1 - self.s1) as usize;
        let b = (1 - self.s2) as usize;
        m * 9 + a * 3 + b
    }

    pub fn from_flat(k: usize) -> Self {
        assert!(k < DIM);
        let m = (k / 9) as i8;
        let a = ((k / 3) % 3) as i8;
        let b = (k % 3) as i8;
        BasisIndex { mu2: 1 - 2 * m, s1: 1 - a, s2: 1 - b }
    }

    /// Twice the total magnetization.
    pub fn sz2(&self) -> i8 {
        self.mu2 + 2 * (self.s1 + self.s2)
    }

    pub fn flipped(&self) -> Self {
        BasisIndex { mu2: -self.mu2, s1: -self.s1, s2: -self.s2 }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mu = if self.mu2 > 0 { "+1/2" } else { "-1/2" };
        write!(f, "|{mu},{},{}>", self.s1, self.s2)
    }
}

fn ket(mu2: i8, s1: i8, s2: i8) -> usize {
    BasisIndex::new(mu2, s1, s2).flat()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    None,
    I,
    II,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::None => write!(f, "-"),
            Branch::I => write!(f, "I"),
            Branch::II => write!(f, "II"),
        }
    }
}

/// Quantum numbers of one eigenstate: 2S, 2Sz and the branch for the
/// repeated S = 3/2 and S = 1/2 multiplets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Level {
    pub s2: u8,
    pub sz2: i8,
    pub branch: Branch,
}

impl Level {
    pub const fn new(s2: u8, sz2: i8, branch: Branch) -> Self {
        Level { s2, sz2, branch }
    }

    pub fn s_total(&self) -> f64 {
        self.s2 as f64 / 2.0
    }

    pub fn sz(&self) -> f64 {
        self.sz2 as f64 / 2.0
    }

    /// Energy at zero field.
    pub fn zero_field_energy(&self, p: &CouplingParams) -> f64 {
        let (j, j1) = (p.j, p.j1);
        match (self.s2, self.branch) {
            (5, _) => j + j1,
            (3, Branch::I) => 0.5 * j - j1,
            (3, _) => -1.5 * j + j1,
            (1, Branch::I) => -2.0 * j1,
            _ => -j - j1,
        }
    }

    pub fn energy(&self, p: &CouplingParams) -> f64 {
        self.zero_field_energy(p) - p.h * self.sz()
    }

    /// Table of the 18 eigenstates in a fixed order.
    pub fn all() -> &'static [Level; DIM] {
        &ALL_LEVELS
    }

    pub fn flipped(&self) -> Self {
        Level { sz2: -self.sz2, ..*self }
    }

    /// Fixed-coefficient eigenvector in the product basis.
    pub fn vector(&self) -> [f64; DIM] {
        let mut v = [0.0; DIM];
        let s: i8 = if self.sz2 > 0 { 1 } else { -1 };
        let sf = s as f64;
        let r2 = 2f64.sqrt();
        let mut put = |k: usize, c: f64| v[k] += c;
        match (self.s2, self.sz2.abs(), self.branch) {
            (5, 5, _) => put(ket(s, s, s), 1.0),
            (5, 3, _) => {
                let c = (0.4f64).sqrt();
                put(ket(s, s, 0), c);
                put(ket(s, 0, s), c);
                put(ket(-s, s, s), c / r2);
            }
            (5, 1, _) => {
                let a = 1.0 / 10f64.sqrt();
                let b = 1.0 / 5f64.sqrt();
                put(ket(s, s, -s), a);
                put(ket(s, 0, 0), 2.0 * a);
                put(ket(s, -s, s), a);
                put(ket(-s, s, 0), b);
                put(ket(-s, 0, s), b);
            }
            (3, 3, Branch::I) => {
                let c = -sf / r2;
                put(ket(s, s, 0), c);
                put(ket(s, 0, s), -c);
            }
            (3, 3, _) => {
                let c = -sf / 10f64.sqrt();
                put(ket(s, s, 0), c);
                put(ket(s, 0, s), c);
                put(ket(-s, s, s), -2.0 * r2 * c);
            }
            (3, 1, Branch::I) => {
                let a = -sf / 3f64.sqrt();
                let b = -sf / 6f64.sqrt();
                put(ket(s, s, -s), a);
                put(ket(s, -s, s), -a);
                put(ket(-s, s, 0), b);
                put(ket(-s, 0, s), -b);
            }
            (3, 1, _) => {
                // same relative sign in both Sz sectors
                let a = 1.0 / 15f64.sqrt();
                let b = -(0.3f64).sqrt();
                put(ket(s, s, -s), a);
                put(ket(s, 0, 0), 2.0 * a);
                put(ket(s, -s, s), a);
                put(ket(-s, s, 0), b);
                put(ket(-s, 0, s), b);
            }
            (1, 1, Branch::I) => {
                let a = 1.0 / 3f64.sqrt();
                put(ket(s, s, -s), a);
                put(ket(s, 0, 0), -a);
                put(ket(s, -s, s), a);
            }
            (1, 1, _) => {
                let a = 1.0 / 6f64.sqrt();
                let b = -1.0 / 3f64.sqrt();
                put(ket(s, s, -s), a);
                put(ket(s, -s, s), -a);
                put(ket(-s, s, 0), b);
                put(ket(-s, 0, s), -b);
            }
            _ => unreachable!("invalid level {self:?}"),
        }
        v
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = match self.branch {
            Branch::None => String::new(),
            br => format!("^{br}"),
        };
        write!(f, "|{}/2,{}/2>{}", self.s2, self.sz2, b)
    }
}

const ALL_LEVELS: [Level; DIM] = [
    Level::new(5, 5, Branch::None),
    Level::new(5, 3, Branch::None),
    Level::new(5, 1, Branch::None),
    Level::new(5, -1, Branch::None),
    Level::new(5, -3, Branch::None),
    Level::new(5, -5, Branch::None),
    Level::new(3, 3, Branch::I),
    Level::new(3, 1, Branch::I),
    Level::new(3, -1, Branch::I),
    Level::new(3, -3, Branch::I),
    Level::new(3, 3, Branch::II),
    Level::new(3, 1, Branch::II),
    Level::new(3, -1, Branch::II),
    Level::new(3, -3, Branch::II),
    Level::new(1, 1, Branch::I),
    Level::new(1, -1, Branch::I),
    Level::new(1, 1, Branch::II),
    Level::new(1, -1, Branch::II),
];

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub level: Level,
    pub energy: f64,
    pub amplitudes: [f64; DIM],
}

impl SpectrumEntry {
    pub fn s_total(&self) -> f64 {
        self.level.s_total()
    }

    pub fn sz(&self) -> f64 {
        self.level.sz()
    }

    pub fn branch(&self) -> Branch {
        self.level.branch
    }
}

fn level_order(a: &Level, b: &Level) -> Ordering {
    (a.s2, a.sz2, a.branch).cmp(&(b.s2, b.sz2, b.branch))
}

/// All 18 eigenpairs, energy ascending, exact ties ordered by quantum numbers.
pub fn analytic_spectrum(p: &CouplingParams) -> Result<Vec<SpectrumEntry>> {
    p.validate()?;
    let mut out: Vec<SpectrumEntry> = Level::all()
        .iter()
        .map(|l| SpectrumEntry { level: *l, energy: l.energy(p), amplitudes: l.vector() })
        .collect();
    out.sort_by(|a, b| {
        a.energy
            .partial_cmp(&b.energy)
            .unwrap_or(Ordering::Equal)
            .then_with(|| level_order(&a.level, &b.level))
    });
    Ok(out)
}

pub fn ground_energy(p: &CouplingParams) -> f64 {
    Level::all().iter().map(|l| l.energy(p)).fold(f64::INFINITY, f64::min)
}

fn spin_half() -> (DMatrix<f64>, DMatrix<f64>) {
    let sz = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, -0.5]);
    let sp = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    (sz, sp)
}

fn spin_one() -> (DMatrix<f64>, DMatrix<f64>) {
    let r2 = 2f64.sqrt();
    let sz = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.0, -1.0]));
    let sp = DMatrix::from_row_slice(3, 3, &[0.0, r2, 0.0, 0.0, 0.0, r2, 0.0, 0.0, 0.0]);
    (sz, sp)
}

/// Spin operators (Sz, S+) of mu, S1, S2 embedded in the 18-dim space.
pub fn site_operators() -> [(DMatrix<f64>, DMatrix<f64>); 3] {
    let (hz, hp) = spin_half();
    let (oz, op) = spin_one();
    let i2 = DMatrix::<f64>::identity(2, 2);
    let i3 = DMatrix::<f64>::identity(3, 3);
    let emb = |a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>| a.kronecker(b).kronecker(c);
    [
        (emb(&hz, &i3, &i3), emb(&hp, &i3, &i3)),
        (emb(&i2, &oz, &i3), emb(&i2, &op, &i3)),
        (emb(&i2, &i3, &oz), emb(&i2, &i3, &op)),
    ]
}

fn heis(a: &(DMatrix<f64>, DMatrix<f64>), b: &(DMatrix<f64>, DMatrix<f64>)) -> DMatrix<f64> {
    let (az, ap) = a;
    let (bz, bp) = b;
    let am = ap.transpose();
    let bm = bp.transpose();
    az * bz + (ap * &bm + am * bp) * 0.5
}

pub fn build_hamiltonian(p: &CouplingParams) -> Result<DMatrix<f64>> {
    p.validate()?;
    let [mu, s1, s2] = site_operators();
    let h = (heis(&s1, &mu) + heis(&s2, &mu)) * p.j + heis(&s1, &s2) * p.j1
        - (&mu.0 + &s1.0 + &s2.0) * p.h;
    Ok(h)
}

/// Numerical eigendecomposition of the Hamiltonian, for cross-checks.
pub fn numeric_spectrum(p: &CouplingParams) -> Result<Eigen> {
    numeric_diagonalize(&build_hamiltonian(p)?)
}

fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// ln Z from the closed-form cosh expression.
pub fn ln_partition_function(p: &CouplingParams, beta: f64) -> Result<f64> {
    p.validate()?;
    check_beta(beta)?;
    let (j, j1, h, b) = (p.j, p.j1, p.h, beta);
    let ln2 = std::f64::consts::LN_2;
    let c52 = ln_cosh(2.5 * b * h);
    let c32 = ln_cosh(1.5 * b * h);
    let c12 = ln_cosh(0.5 * b * h);
    let k54 = ln2 + 0.25 * b * j + ln_cosh(1.25 * b * j);
    let terms = [
        c52 - b * j,
        c32 + k54,
        c32 - 0.5 * b * (j - 4.0 * j1),
        c12 + k54,
        c12 + 3.0 * b * j1,
        c12 + ln2 + 0.25 * b * (j + 8.0 * j1) + ln_cosh(0.75 * b * j),
    ];
    Ok(ln2 - b * j1 + log_sum_exp(&terms))
}

pub fn partition_function(p: &CouplingParams, beta: f64) -> Result<f64> {
    let lz = ln_partition_function(p, beta)?;
    if beta == 0.0 {
        return Ok(DIM as f64);
    }
    Ok(lz.exp())
}

/// Z * exp(beta * e0), finite for any beta.
pub fn shifted_partition_function(p: &CouplingParams, beta: f64) -> Result<f64> {
    Ok((ln_partition_function(p, beta)? + beta * ground_energy(p)).exp())
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta < 0.0 || beta == f64::INFINITY {
        return Err(Error::InvalidParameter(format!("beta must be finite and >= 0, got {beta}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts() -> Vec<CouplingParams> {
        vec![
            CouplingParams { j: 1.0, j1: 0.5, h: 0.3 },
            CouplingParams { j: -1.0, j1: 1.7, h: 2.2 },
            CouplingParams { j: 0.4, j1: -0.9, h: -1.1 },
        ]
    }

    #[test]
    fn flat_roundtrip() {
        for k in 0..DIM {
            assert_eq!(BasisIndex::from_flat(k).flat(), k);
            assert_eq!(BasisIndex::from_flat(k).flipped().flat(), 17 - k);
        }
        assert_eq!(ket(1, 1, 1), 0);
        assert_eq!(ket(-1, 1, 1), 9);
        assert_eq!(ket(-1, -1, -1), 17);
    }

    #[test]
    fn vectors_are_eigenvectors() {
        for p in pts() {
            let h = build_hamiltonian(&p).unwrap();
            for l in Level::all() {
                let v = DVector::from_row_slice(&l.vector());
                assert!((v.norm() - 1.0).abs() < 1e-14, "{l}");
                let r = &h * &v - &v * l.energy(&p);
                assert!(r.amax() < 1e-13, "{l}: residual {}", r.amax());
            }
        }
    }

    #[test]
    fn vectors_orthonormal() {
        let ls = Level::all();
        for a in ls {
            for b in ls {
                let d: f64 = a.vector().iter().zip(b.vector()).map(|(x, y)| x * y).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-14, "{a} {b}");
            }
        }
    }

    #[test]
    fn sorted_spectrum_matches_numeric() {
        for p in pts() {
            let a = analytic_spectrum(&p).unwrap();
            let n = numeric_spectrum(&p).unwrap();
            for (e, x) in a.iter().zip(n.values.iter()) {
                assert!((e.energy - x).abs() < 1e-10 * p.energy_scale());
            }
        }
    }

    #[test]
    fn partition_function_direct_sum() {
        for p in pts() {
            for beta in [0.0, 0.3, 2.0, 17.0] {
                let z: f64 = Level::all().iter().map(|l| (-beta * l.energy(&p)).exp()).sum();
                let zc = partition_function(&p, beta).unwrap();
                assert!((z - zc).abs() <= 1e-12 * z, "{z} {zc}");
            }
        }
        let p = CouplingParams { j: 1.0, j1: 0.0, h: 0.0 };
        assert_eq!(partition_function(&p, 0.0).unwrap(), 18.0);
    }

    #[test]
    fn shifted_z_is_finite_at_large_beta() {
        let p = CouplingParams { j: 1.0, j1: 2.0, h: 0.5 };
        let z = shifted_partition_function(&p, 1e4).unwrap();
        assert!(z.is_finite() && z >= 1.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CouplingParams::new(f64::NAN, 0.0, 0.0).is_err());
        let p = CouplingParams { j: 1.0, j1: 0.0, h: 0.0 };
        assert!(partition_function(&p, -1.0).is_err());
    }
}
