//! Bipartite and tripartite negativities.

use nalgebra::{Matrix3, Matrix5};
use serde::{Deserialize, Serialize};

use crate::density::{
    default_degeneracy_tol, ground_state_density_matrix, partial_transpose, reduce,
    DensityMatrix, Reduced, Subsystem, TransposedMatrix,
};
use crate::elements::{MuGridElements, OmegaElements, Populations, RhoElements, Sector};
use crate::error::{Error, Result};
use crate::linalg::{sym2_eigenvalues, sym3_eigenvalues, sym_eigenvalues};
use crate::spectrum::CouplingParams;

/// Eigenvalues above -NEG_TOL count as non-negative.
pub const NEG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NegativityReport {
    pub n_mu_s1: f64,
    pub n_s1_s2: f64,
    pub n_mu_full: f64,
    pub n_s1_full: f64,
    pub n_tri: f64,
}

impl NegativityReport {
    pub const FIELDS: [&'static str; 5] = ["n_mu_s1", "n_s1_s2", "n_mu_full", "n_s1_full", "n_tri"];

    /// Builds the report; the tripartite value is the geometric mean of
    /// N_{mu|S1S2}, N_{S1|muS2} and N_{S2|muS1} = N_{S1|muS2}.
    pub fn from_parts(n_mu_s1: f64, n_s1_s2: f64, n_mu_full: f64, n_s1_full: f64) -> Self {
        NegativityReport { n_mu_s1, n_s1_s2, n_mu_full, n_s1_full, n_tri: tripartite(n_mu_full, n_s1_full) }
    }

    pub fn values(&self) -> [f64; 5] {
        [self.n_mu_s1, self.n_s1_s2, self.n_mu_full, self.n_s1_full, self.n_tri]
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        let k = Self::FIELDS.iter().position(|f| *f == name)?;
        Some(self.values()[k])
    }
}

pub fn tripartite(n_mu_full: f64, n_s1_full: f64) -> f64 {
    if n_mu_full > NEG_TOL && n_s1_full > NEG_TOL {
        ((n_mu_full.ln() + 2.0 * n_s1_full.ln()) / 3.0).exp()
    } else {
        0.0
    }
}

/// Sum of |lambda| over eigenvalues below -NEG_TOL.
pub fn negativity_from_eigenvalues(values: &[f64]) -> f64 {
    values.iter().filter(|&&x| x < -NEG_TOL).fold(0.0, |acc, x| acc - x)
}

pub fn negativity_of(t: &TransposedMatrix) -> f64 {
    let mut total = 0.0;
    for k in 0..t.blocks.len() {
        let b = t.block(k);
        let ev = if b.nrows() == 1 { vec![b[(0, 0)]] } else { sym_eigenvalues(&b) };
        total += negativity_from_eigenvalues(&ev);
    }
    total
}

/// Numeric route: reduce, transpose, diagonalize discovered blocks.
pub fn report_from_density(rho: &DensityMatrix) -> Result<NegativityReport> {
    let ms1 = reduce(rho, Reduced::MuS1)?;
    let s1s2 = reduce(rho, Reduced::S1S2)?;
    Ok(NegativityReport::from_parts(
        negativity_of(&partial_transpose(&ms1, Subsystem::Mu)?),
        negativity_of(&partial_transpose(&s1s2, Subsystem::S1)?),
        negativity_of(&partial_transpose(rho, Subsystem::Mu)?),
        negativity_of(&partial_transpose(rho, Subsystem::S1)?),
    ))
}

/// Coefficients of lambda^3 - a lambda^2 + b lambda + c for a symmetric 3x3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cubic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Cubic {
    pub fn of(m: &Matrix3<f64>) -> Self {
        let a = m.trace();
        let b = m[(0, 0)] * (m[(1, 1)] + m[(2, 2)]) + m[(1, 1)] * m[(2, 2)]
            - m[(0, 1)].powi(2)
            - m[(1, 2)].powi(2)
            - m[(0, 2)].powi(2);
        Cubic { a, b, c: -m.determinant() }
    }
}

/// Trigonometric roots of the characteristic cubic, ascending.
///
/// p and q are taken from the traceless part of the matrix, which equals
/// p = (a/3)^2 - b/3 and q = (a/3)^3 - (a/3)(b/2) - c/2 without the cancellation.
/// Near-degenerate cases go to the numeric solver.
pub fn trig_cubic_roots(m: &Matrix3<f64>) -> [f64; 3] {
    let a3 = m.trace() / 3.0;
    let d = m - Matrix3::identity() * a3;
    let p = (d * d).trace() / 6.0;
    let q = d.determinant() / 2.0;
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let disc = p * p * p - q * q;
    if p <= 1e-20 * scale * scale || disc < 1e-8 * p * p * p {
        return sym3_eigenvalues(m);
    }
    let sgn = if q < 0.0 { -1.0 } else { 1.0 };
    let phi = (disc.sqrt() / q).atan();
    let r = 2.0 * sgn * p.sqrt();
    let tau = 2.0 * std::f64::consts::PI / 3.0;
    let mut out = [0.0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        *o = a3 + r * (phi / 3.0 + tau * (i + 1) as f64).cos();
    }
    out.sort_by(f64::total_cmp);
    out
}

fn pair(x: f64, y: f64, z: f64) -> [f64; 2] {
    let (lo, hi) = sym2_eigenvalues(x, y, z);
    [lo, hi]
}

/// Eigenvalues of rho_{mu S1}^{T_mu}; per sector [lambda1, lambda2, lambda3].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuS1Eigs {
    pub minus: [f64; 3],
    pub plus: [f64; 3],
}

impl MuS1Eigs {
    pub fn all(&self) -> Vec<f64> {
        [self.minus, self.plus].concat()
    }
}

pub fn analytic_eigs_mu_s1(w: &OmegaElements) -> MuS1Eigs {
    let one = |s: Sector| {
        let [lo, hi] = pair(w.w11.get(s), w.w22.get(s.other()), w.w24.get(s));
        [w.w33.get(s), lo, hi]
    };
    MuS1Eigs { minus: one(Sector::Minus), plus: one(Sector::Plus) }
}

/// Eigenvalues of rho_{S1 S2}^{T_S1}: lambda1..3 each twice, plus the cubic roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S1S2Eigs {
    pub lambda: [f64; 3],
    pub cubic: [f64; 3],
}

impl S1S2Eigs {
    pub fn all(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(9);
        for x in self.lambda {
            v.push(x);
            v.push(x);
        }
        v.extend(self.cubic);
        v
    }
}

pub fn s1s2_cubic_block(m: &MuGridElements) -> Matrix3<f64> {
    Matrix3::new(
        m.m11.minus, m.m24.minus, m.m37,
        m.m24.minus, m.m55, m.m24.plus,
        m.m37, m.m24.plus, m.m11.plus,
    )
}

pub fn analytic_eigs_s1_s2(m: &MuGridElements) -> S1S2Eigs {
    let [lo, hi] = pair(m.m22.minus, m.m22.plus, m.m35);
    S1S2Eigs { lambda: [m.m33, lo, hi], cubic: trig_cubic_roots(&s1s2_cubic_block(m)) }
}

/// Eigenvalues of rho^{T_mu}; per sector lambda1..lambda9.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullMuEigs {
    pub minus: [f64; 9],
    pub plus: [f64; 9],
}

impl FullMuEigs {
    pub fn all(&self) -> Vec<f64> {
        [self.minus, self.plus].concat()
    }
}

pub fn analytic_eigs_full_mu(r: &RhoElements) -> FullMuEigs {
    let one = |s: Sector| {
        let a = r.sector(s);
        let b = r.sector(s.other());
        let [l3, l4] = pair(a.r11, a.r66 + a.r68, SQRT_2 * a.r2_10);
        let [l5, l6] = pair(a.r22 - a.r24, b.r33 - b.r37, a.r3_11 - a.r3_13);
        let [l8, l9] = pair(a.r22 + a.r24, b.r55 + b.r35, 3f64.sqrt() * a.r5_11);
        [a.r99, a.r66 - a.r68, l3, l4, l5, l6, b.r33 + b.r37 - b.r35, l8, l9]
    };
    FullMuEigs { minus: one(Sector::Minus), plus: one(Sector::Plus) }
}

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Blocks of rho^{T_S1}: the 3x3 with closed-form roots and the 5x5 solved numerically.
pub fn full_s1_blocks(r: &RhoElements, s: Sector) -> (Matrix3<f64>, Matrix5<f64>) {
    let a = r.sector(s);
    let b = r.sector(s.other());
    let q2 = Matrix3::new(
        a.r33, a.r3_11, b.r3_11,
        a.r3_11, a.r66, b.r35,
        b.r3_11, b.r35, b.r22,
    );
    #[rustfmt::skip]
    let q3 = Matrix5::from_row_slice(&[
        a.r11, a.r24, a.r2_10, a.r37, a.r3_13,
        a.r24, a.r55, a.r5_11, b.r68, b.r5_11,
        a.r2_10, a.r5_11, a.r66, b.r3_13, b.r35,
        a.r37, b.r68, b.r3_13, b.r99, b.r2_10,
        a.r3_13, b.r5_11, b.r35, b.r2_10, b.r22,
    ]);
    (q2, q3)
}

/// Eigenvalues of rho^{T_S1}; per sector [lambda1, cubic roots, 5x5 roots].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullS1Eigs {
    pub minus: [f64; 9],
    pub plus: [f64; 9],
}

impl FullS1Eigs {
    pub fn all(&self) -> Vec<f64> {
        [self.minus, self.plus].concat()
    }
}

pub fn eigs_full_s1(r: &RhoElements) -> FullS1Eigs {
    let one = |s: Sector| {
        let (q2, q3) = full_s1_blocks(r, s);
        let c = trig_cubic_roots(&q2);
        let mut e5: Vec<f64> = q3.symmetric_eigenvalues().iter().copied().collect();
        e5.sort_by(f64::total_cmp);
        let mut out = [0.0; 9];
        out[0] = r.sector(s).r33;
        out[1..4].copy_from_slice(&c);
        out[4..].copy_from_slice(&e5);
        out
    };
    FullS1Eigs { minus: one(Sector::Minus), plus: one(Sector::Plus) }
}

/// Analytic route from element maps.
pub fn report_from_populations(pop: &Populations) -> NegativityReport {
    let om = OmegaElements::from_populations(pop);
    let mg = MuGridElements::from_populations(pop);
    let rho = RhoElements::from_populations(pop);
    NegativityReport::from_parts(
        negativity_from_eigenvalues(&analytic_eigs_mu_s1(&om).all()),
        negativity_from_eigenvalues(&analytic_eigs_s1_s2(&mg).all()),
        negativity_from_eigenvalues(&analytic_eigs_full_mu(&rho).all()),
        negativity_from_eigenvalues(&eigs_full_s1(&rho).all()),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Temperature {
    Zero,
    Beta(f64),
}

impl Temperature {
    /// From k_B T; zero means the ground state.
    pub fn from_kt(t: f64) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidParameter(format!("temperature must be finite and >= 0, got {t}")));
        }
        Ok(if t == 0.0 { Temperature::Zero } else { Temperature::Beta(1.0 / t) })
    }
}

pub fn full_report(p: &CouplingParams, t: Temperature) -> Result<NegativityReport> {
    match t {
        Temperature::Zero => {
            if p.j == 0.0 {
                return Err(Error::InvalidParameter("ground-state analysis requires J != 0".into()));
            }
            let rho = ground_state_density_matrix(p, default_degeneracy_tol(p))?;
            report_from_density(&rho)
        }
        Temperature::Beta(beta) => Ok(report_from_populations(&Populations::thermal(p, beta)?)),
    }
}

pub fn tripartite_negativity(p: &CouplingParams, t: Temperature) -> Result<f64> {
    Ok(full_report(p, t)?.n_tri)
}

/// Determinant of the 2x2 full-mu block whose lower root is lambda_5^-.
fn lambda5_det(p: &CouplingParams, beta: f64) -> Result<f64> {
    let r = RhoElements::thermal(p, beta)?;
    let (a, b) = (r.minus, r.plus);
    Ok((a.r22 - a.r24) * (b.r33 - b.r37) - (a.r3_11 - a.r3_13).powi(2))
}

/// Smallest beta at which lambda_5^- turns negative on cooling, if any within beta*scale <= 60.
pub fn lambda5_onset_beta(p: &CouplingParams) -> Result<Option<f64>> {
    p.validate()?;
    let scale = p.energy_scale();
    let n = 600;
    let beta_at = |k: usize| 1e-3 * (6e4f64).powf(k as f64 / n as f64) / scale;
    let mut lo = beta_at(0);
    if lambda5_det(p, lo)? < 0.0 {
        return Ok(None);
    }
    for k in 1..=n {
        let hi = beta_at(k);
        if lambda5_det(p, hi)? < 0.0 {
            let mut hi = hi;
            while hi - lo > 1e-13 * hi {
                let mid = 0.5 * (lo + hi);
                if lambda5_det(p, mid)? < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Some(0.5 * (lo + hi)));
        }
        lo = hi;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{pure_state, thermal_density_matrix};
    use crate::spectrum::{Branch, Level};

    #[test]
    fn cubic_matches_numeric() {
        let m = Matrix3::new(0.3, 0.05, -0.02, 0.05, 0.2, 0.07, -0.02, 0.07, 0.1);
        let t = trig_cubic_roots(&m);
        let n = sym3_eigenvalues(&m);
        for k in 0..3 {
            assert!((t[k] - n[k]).abs() < 1e-15);
        }
        let c = Cubic::of(&m);
        for x in t {
            let r = x.powi(3) - c.a * x * x + c.b * x + c.c;
            assert!(r.abs() < 1e-15);
        }
    }

    #[test]
    fn cubic_degenerate_inputs() {
        let m = Matrix3::identity() * 0.25;
        assert_eq!(trig_cubic_roots(&m), [0.25; 3]);
        let m = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0);
        let r = trig_cubic_roots(&m);
        assert!((r[0] - 1.0).abs() < 1e-14 && (r[2] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn pure_singlet_pair() {
        let rho = pure_state(Level::new(1, 1, Branch::I));
        let r = report_from_density(&rho).unwrap();
        assert!((r.n_s1_s2 - 1.0).abs() < 1e-9);
        assert!(r.n_mu_full.abs() < 1e-9);
    }

    #[test]
    fn analytic_matches_numeric_report() {
        let p = CouplingParams { j: 1.0, j1: 1.5, h: 0.8 };
        for beta in [0.5, 2.0, 8.0] {
            let a = full_report(&p, Temperature::Beta(beta)).unwrap();
            let n = report_from_density(&thermal_density_matrix(&p, beta).unwrap()).unwrap();
            for (x, y) in a.values().iter().zip(n.values()) {
                assert!((x - y).abs() < 1e-10, "{a:?} {n:?}");
            }
        }
    }

    #[test]
    fn tripartite_zero_when_factor_vanishes() {
        assert_eq!(tripartite(0.0, 0.5), 0.0);
        assert!((tripartite(0.125, 0.5) - (0.125f64 * 0.25).cbrt()).abs() < 1e-15);
    }

    #[test]
    fn lambda5_onset() {
        let target = 2.0 / 3.0 * 4f64.ln();
        let b = lambda5_onset_beta(&CouplingParams { j: 1.0, j1: 2.0, h: 0.8 }).unwrap().unwrap();
        assert!((b - target).abs() < 1e-9 * target);
        let b2 = lambda5_onset_beta(&CouplingParams { j: 2.0, j1: 3.0, h: 1.6 }).unwrap().unwrap();
        assert!((2.0 * b2 - target).abs() < 1e-9 * target);
    }
}
