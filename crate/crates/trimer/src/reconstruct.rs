//! Local observables and the reconstruction of a thermal density matrix from them.

use std::f64::consts::SQRT_2;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::elements::{RhoElements, RhoSector};
use crate::error::{check_finite, Error, Result};
use crate::linalg::sym_eigenvalues;
use crate::negativity::{report_from_density, NegativityReport};
use crate::spectrum::{check_beta, site_operators, DIM};

/// Nine single-site and pair observables; S1 and S2 are equivalent.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ObservableSet {
    /// <mu^z>
    pub mz_mu: f64,
    /// <S_i^z>
    pub mz_s: f64,
    /// <mu^z S_i^z>
    pub c_mus: f64,
    /// <S_1^z S_2^z>
    pub c_ss: f64,
    /// <(S_1^z)^2 S_2^z>
    pub c_qss: f64,
    /// <mu^x S_i^x>
    pub x_mus: f64,
    /// <S_1^x S_2^x>
    pub x_ss: f64,
    /// <mu^x (S_1^x)^2 S_2^x>
    pub x_mixed: f64,
    /// <(S_1^x)^2 (S_2^x)^2>
    pub x_quad: f64,
}

impl ObservableSet {
    pub const FIELDS: [&'static str; 9] =
        ["mz_mu", "mz_s", "c_mus", "c_ss", "c_qss", "x_mus", "x_ss", "x_mixed", "x_quad"];

    pub fn values(&self) -> [f64; 9] {
        [
            self.mz_mu, self.mz_s, self.c_mus, self.c_ss, self.c_qss, self.x_mus, self.x_ss,
            self.x_mixed, self.x_quad,
        ]
    }

    fn validate(&self) -> Result<()> {
        for (n, v) in Self::FIELDS.iter().zip(self.values()) {
            check_finite(n, v)?;
        }
        Ok(())
    }

    /// Image under the global spin flip (h -> -h).
    pub fn flipped(&self) -> Self {
        ObservableSet { mz_mu: -self.mz_mu, mz_s: -self.mz_s, c_qss: -self.c_qss, ..*self }
    }
}

fn expect(rho: &DensityMatrix, op: &DMatrix<f64>) -> f64 {
    rho.entries.component_mul(&op.transpose()).sum()
}

/// Traces of the nine operators against any 18x18 density matrix.
pub fn observables_from_rho(rho: &DensityMatrix) -> Result<ObservableSet> {
    if rho.dim() != DIM {
        return Err(Error::InvalidParameter("observables need the full trimer matrix".into()));
    }
    let [mu, s1, s2] = site_operators();
    let x = |(_, p): &(DMatrix<f64>, DMatrix<f64>)| (p + p.transpose()) * 0.5;
    let (mx, s1x, s2x) = (x(&mu), x(&s1), x(&s2));
    let (mz, s1z, s2z) = (&mu.0, &s1.0, &s2.0);
    let s1x2 = &s1x * &s1x;
    Ok(ObservableSet {
        mz_mu: expect(rho, mz),
        mz_s: expect(rho, s1z),
        c_mus: expect(rho, &(mz * s1z)),
        c_ss: expect(rho, &(s1z * s2z)),
        c_qss: expect(rho, &(s1z * s1z * s2z)),
        x_mus: expect(rho, &(&mx * &s1x)),
        x_ss: expect(rho, &(&s1x * &s2x)),
        x_mixed: expect(rho, &(&mx * &s1x2 * &s2x)),
        x_quad: expect(rho, &(&s1x2 * &s2x * &s2x)),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub elements: RhoElements,
    pub density: DensityMatrix,
    /// Largest mismatch between the input and the observables of the result.
    pub residual: f64,
    pub min_eigenvalue: f64,
}

/// Below this eigenvalue the reconstruction is reported as non-physical.
pub const PHYSICAL_TOL: f64 = 1e-9;

/// Rebuild rho from the observables, inverse temperature and field.
pub fn rho_from_observables(obs: &ObservableSet, beta: f64, h: f64) -> Result<Reconstruction> {
    obs.validate()?;
    check_beta(beta)?;
    check_finite("h", h)?;
    let x = beta * h;
    if x == 0.0 {
        return Err(Error::SingularInput("reconstruction needs beta*h != 0".into()));
    }
    if x.abs() > 700.0 {
        return Err(Error::SingularInput(format!("beta*h = {x} is out of range")));
    }
    let elements = if x > 0.0 {
        solve_positive(obs, x)
    } else {
        let e = solve_positive(&obs.flipped(), -x);
        RhoElements { minus: e.plus, plus: e.minus }
    };
    let density = elements.assemble();
    let back = observables_from_rho(&density)?;
    let residual = obs
        .values()
        .iter()
        .zip(back.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let min_eigenvalue = sym_eigenvalues(&density.entries)[0];
    if min_eigenvalue < -PHYSICAL_TOL || !min_eigenvalue.is_finite() {
        return Err(Error::NonPhysical { min_eigenvalue, residual });
    }
    Ok(Reconstruction { elements, density, residual, min_eigenvalue })
}

/// Closed-form inversion for x = beta*h > 0, every hyperbolic factor
/// carried with its exponential prefactor so nothing overflows.
fn solve_positive(o: &ObservableSet, x: f64) -> RhoElements {
    let e1 = (-x).exp();
    let e2 = (-2.0 * x).exp();
    let e3 = (-3.0 * x).exp();
    let sh_x = 0.5 * (1.0 - e2);
    let ch_x = 0.5 * (1.0 + e2);
    let sh_h = 0.5 * (1.0 - e1);
    let ch_h = 0.5 * (1.0 + e1);
    let ch_2x = 0.5 * (1.0 + e2 * e2);
    let k1 = 2.0 * ch_x - e1;
    let k2 = 4.0 * ch_x * ch_x - 2.0 * e1 * ch_x - e2;
    let half_sig = 1.0 / (1.0 + e1);

    let a1 = -8.0 * sh_x;
    let c1 = -0.5 * a1 * a1 * sh_h;
    let d1 = a1 * c1 * ch_h * ch_h;
    let ee1 = -a1 * d1 * ch_x * ch_h;

    let al1 = 2.0 * (2.0 * o.mz_mu * ch_h - sh_h);
    let al2 = -2.0 * (o.mz_s * ch_h + 2.0 * o.c_mus * sh_h);
    let al3 = 2.0 * (al1 * ch_h - 8.0 * o.c_mus * sh_x);
    let al4 = -0.5 * a1 * (2.0 * al3 * ch_x + al2 * a1 * sh_h);
    let al5 = -2.0 * sh_h * (2.0 * ch_x + e1) * al4 + d1 * o.c_qss;

    let r11 = al5 / ee1;
    let r22 = -2.0 * ch_x * r11 + al3 / c1 + al4 / (2.0 * d1);
    let r33 = ch_2x * r11 - o.c_ss * half_sig / 2.0 + k1 * al4 / (2.0 * d1);
    let r99 = e1 * r11 + al4 / d1;
    let r66 = -2.0 * e1 * ch_x * r11 + al1 / a1 - 0.5 * k1 * (al4 / d1) + e1 * al3 / c1;
    let r66p = e1 * r66;
    let r99p = e3 * r99;
    let r55 = half_sig - k2 * r11 - 2.0 * (r33 + r66) - k1 * (r99 + 2.0 * r22);

    let r2_10 = 2.0 * SQRT_2 * half_sig.powi(3) * o.x_mixed;
    let r3_13 = (2.0 * ch_x + e1) * r2_10 - SQRT_2 * half_sig * o.x_mus;
    let r37 = 2.0 * half_sig * o.x_quad
        - 0.5 * (k2 * r11 + k1 * (4.0 * r22 + r99) + 2.0 * (r33 + 2.0 * r55 + 2.0 * r66));
    let xs = half_sig * o.x_ss;
    let r35 = (e1 * xs - (1.0 + e2) * (r37 + r3_13 / SQRT_2) + SQRT_2 * e1 * r3_13) / (1.0 + e1).powi(2);
    let r24 = (xs - 2.0 * r35 + SQRT_2 * r3_13) / (1.0 + e2);
    let r3_11 = r2_10 * e1 - r3_13;
    let r5_11 = r2_10 * e1;
    let r68 = r24 * e1 - SQRT_2 * r3_13;

    let minus = RhoSector {
        r11, r22, r33, r55, r66, r99, r24, r2_10, r35, r37, r3_11, r3_13, r5_11, r68,
    };
    let e5 = (-5.0 * x).exp();
    let plus = RhoSector {
        r11: e5 * r11,
        r22: e3 * r22,
        r33: e1 * r33,
        r55: e1 * r55,
        r66: r66p,
        r99: r99p,
        r24: e3 * r24,
        r2_10: e3 * r2_10,
        r35: e1 * r35,
        r37: e1 * r37,
        r3_11: e1 * r3_11,
        r3_13: e1 * r3_13,
        r5_11: e1 * r5_11,
        r68: e1 * r68,
    };
    RhoElements { minus, plus }
}

pub fn negativity_from_observables(obs: &ObservableSet, beta: f64, h: f64) -> Result<NegativityReport> {
    let r = rho_from_observables(obs, beta, h)?;
    report_from_density(&r.density)
}
