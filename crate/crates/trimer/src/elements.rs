//! Closed-form matrix elements of the thermal density matrices.
//!
//! Every element is a Boltzmann-weighted sum over named eigenstates, so the
//! shifted weights from `boltzmann_weights` keep it finite at any beta.
//! The "-" sector holds the positive-magnetization states, "+" is its spin flip.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::density::{boltzmann_weights, DensityMatrix, Layout};
use crate::error::Result;
use crate::spectrum::{BasisIndex, Branch, CouplingParams, Level, DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    Minus,
    Plus,
}

impl Sector {
    pub fn other(self) -> Self {
        match self {
            Sector::Minus => Sector::Plus,
            Sector::Plus => Sector::Minus,
        }
    }

    fn sign(self) -> i8 {
        match self {
            Sector::Minus => 1,
            Sector::Plus => -1,
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            Sector::Minus => "-",
            Sector::Plus => "+",
        }
    }

    pub const BOTH: [Sector; 2] = [Sector::Minus, Sector::Plus];
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pm {
    pub minus: f64,
    pub plus: f64,
}

impl Pm {
    pub fn get(&self, s: Sector) -> f64 {
        match s {
            Sector::Minus => self.minus,
            Sector::Plus => self.plus,
        }
    }

    fn build(f: impl Fn(Sector) -> f64) -> Self {
        Pm { minus: f(Sector::Minus), plus: f(Sector::Plus) }
    }
}

fn level_slot(l: Level) -> usize {
    Level::all().iter().position(|x| *x == l).expect("known level")
}

/// Normalized populations of the 18 levels.
#[derive(Debug, Clone, Copy)]
pub struct Populations([f64; DIM]);

impl Populations {
    pub fn thermal(p: &CouplingParams, beta: f64) -> Result<Self> {
        Ok(Populations(boltzmann_weights(p, beta)?))
    }

    pub fn from_weights(weighted: &[(Level, f64)]) -> Self {
        let mut w = [0.0; DIM];
        for (l, x) in weighted {
            w[level_slot(*l)] += x;
        }
        Populations(w)
    }

    /// Population of (2S, branch) at magnetization sigma * k / 2.
    fn at(&self, s: Sector, s2: u8, k: i8, br: Branch) -> f64 {
        self.0[level_slot(Level::new(s2, s.sign() * k, br))]
    }
}

/// Shorthands for one sector: f5(k) = P(5/2, sigma k/2), and so on.
struct W<'a> {
    p: &'a Populations,
    s: Sector,
}

impl W<'_> {
    fn f5(&self, k: i8) -> f64 {
        self.p.at(self.s, 5, k, Branch::None)
    }
    fn a3(&self, k: i8) -> f64 {
        self.p.at(self.s, 3, k, Branch::I)
    }
    fn b3(&self, k: i8) -> f64 {
        self.p.at(self.s, 3, k, Branch::II)
    }
    fn a1(&self, k: i8) -> f64 {
        self.p.at(self.s, 1, k, Branch::I)
    }
    fn b1(&self, k: i8) -> f64 {
        self.p.at(self.s, 1, k, Branch::II)
    }
}

/// Non-zero elements of rho_{mu S1} and its mu-transpose.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OmegaElements {
    pub w11: Pm,
    pub w22: Pm,
    pub w33: Pm,
    pub w24: Pm,
}

impl OmegaElements {
    pub fn from_populations(pop: &Populations) -> Self {
        let w = |s| W { p: pop, s };
        OmegaElements {
            w11: Pm::build(|s| {
                let w = w(s);
                (30.0 * w.f5(5) + 12.0 * w.f5(3) + 3.0 * w.f5(1) + 3.0 * w.b3(3)
                    + 15.0 * w.a3(3) + 2.0 * w.b3(1) + 10.0 * w.a3(1) + 5.0 * w.b1(1)
                    + 10.0 * w.a1(1))
                    / 30.0
            }),
            w22: Pm::build(|s| {
                let w = w(s);
                (12.0 * w.f5(3) + 12.0 * w.f5(1) + 6.0 * w.f5(-1) + 3.0 * w.b3(3)
                    + 15.0 * w.a3(3) + 8.0 * w.b3(1) + 9.0 * w.b3(-1) + 5.0 * w.a3(-1)
                    + 10.0 * w.b1(-1) + 10.0 * w.a1(1))
                    / 30.0
            }),
            w33: Pm::build(|s| {
                let w = w(s);
                (6.0 * w.f5(-3) + 3.0 * w.f5(1) + 6.0 * w.f5(-1) + 24.0 * w.b3(-3)
                    + 2.0 * w.b3(1) + 9.0 * w.b3(-1) + 10.0 * w.a3(1) + 5.0 * w.a3(-1)
                    + 5.0 * w.b1(1) + 10.0 * w.b1(-1) + 10.0 * w.a1(1))
                    / 30.0
            }),
            w24: Pm::build(|s| {
                let w = w(s);
                SQRT_2
                    * (6.0 * w.f5(3) + 6.0 * w.f5(1) + 3.0 * w.f5(-1) - 6.0 * w.b3(3)
                        - 6.0 * w.b3(1) - 3.0 * w.b3(-1) + 5.0 * w.a3(-1) - 5.0 * w.b1(-1))
                    / 30.0
            }),
        }
    }

    pub fn thermal(p: &CouplingParams, beta: f64) -> Result<Self> {
        Ok(Self::from_populations(&Populations::thermal(p, beta)?))
    }

    /// Positions in the 6x6 rho_{mu S1} (mu slowest), "-" sector.
    pub fn positions() -> [(&'static str, (usize, usize)); 4] {
        [("w11", (0, 0)), ("w22", (1, 1)), ("w33", (2, 2)), ("w24", (1, 3))]
    }

    pub fn named(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        for s in Sector::BOTH {
            let x = s.suffix();
            m.insert(format!("w11{x}"), self.w11.get(s));
            m.insert(format!("w22{x}"), self.w22.get(s));
            m.insert(format!("w33{x}"), self.w33.get(s));
            m.insert(format!("w24{x}"), self.w24.get(s));
        }
        m
    }
}

/// Non-zero elements of rho_{S1 S2}.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MuGridElements {
    pub m11: Pm,
    pub m22: Pm,
    pub m24: Pm,
    pub m33: f64,
    pub m55: f64,
    pub m35: f64,
    pub m37: f64,
}

impl MuGridElements {
    pub fn from_populations(pop: &Populations) -> Self {
        let w = |s| W { p: pop, s };
        let both = |f: &dyn Fn(&W) -> f64| f(&w(Sector::Minus)) + f(&w(Sector::Plus));
        MuGridElements {
            m11: Pm::build(|s| {
                let w = w(s);
                (5.0 * w.f5(5) + w.f5(3) + 4.0 * w.b3(3)) / 5.0
            }),
            m22: Pm::build(|s| {
                let w = w(s);
                (12.0 * w.f5(3) + 6.0 * w.f5(1) + 3.0 * w.b3(3) + 15.0 * w.a3(3)
                    + 9.0 * w.b3(1) + 5.0 * w.a3(1) + 10.0 * w.b1(1))
                    / 30.0
            }),
            m24: Pm::build(|s| {
                let w = w(s);
                (12.0 * w.f5(3) + 6.0 * w.f5(1) + 3.0 * w.b3(3) - 15.0 * w.a3(3)
                    + 9.0 * w.b3(1) - 5.0 * w.a3(1) - 10.0 * w.b1(1))
                    / 30.0
            }),
            m33: both(&|w| {
                (3.0 * w.f5(1) + 2.0 * w.b3(1) + 10.0 * w.a3(1) + 5.0 * w.b1(1) + 10.0 * w.a1(1))
                    / 30.0
            }),
            m55: both(&|w| (6.0 * w.f5(1) + 4.0 * w.b3(1) + 5.0 * w.a1(1)) / 15.0),
            m35: both(&|w| (3.0 * w.f5(1) + 2.0 * w.b3(1) - 5.0 * w.a1(1)) / 15.0),
            m37: both(&|w| {
                (3.0 * w.f5(1) + 2.0 * w.b3(1) - 10.0 * w.a3(1) - 5.0 * w.b1(1) + 10.0 * w.a1(1))
                    / 30.0
            }),
        }
    }

    pub fn thermal(p: &CouplingParams, beta: f64) -> Result<Self> {
        Ok(Self::from_populations(&Populations::thermal(p, beta)?))
    }

    pub fn named(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        for s in Sector::BOTH {
            let x = s.suffix();
            m.insert(format!("m11{x}"), self.m11.get(s));
            m.insert(format!("m22{x}"), self.m22.get(s));
            m.insert(format!("m24{x}"), self.m24.get(s));
        }
        m.insert("m33".into(), self.m33);
        m.insert("m55".into(), self.m55);
        m.insert("m35".into(), self.m35);
        m.insert("m37".into(), self.m37);
        m
    }
}

/// Distinct elements of the full 18x18 rho in one magnetization sector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RhoSector {
    pub r11: f64,
    pub r22: f64,
    pub r33: f64,
    pub r55: f64,
    pub r66: f64,
    pub r99: f64,
    pub r24: f64,
    pub r2_10: f64,
    pub r35: f64,
    pub r37: f64,
    pub r3_11: f64,
    pub r3_13: f64,
    pub r5_11: f64,
    pub r68: f64,
}

/// Labels of the distinct elements with every "-" sector position they occupy.
pub const RHO_LABELS: [(&str, &[(usize, usize)]); 14] = [
    ("r11", &[(0, 0)]),
    ("r22", &[(1, 1), (3, 3)]),
    ("r33", &[(2, 2), (6, 6)]),
    ("r55", &[(4, 4)]),
    ("r66", &[(10, 10), (12, 12)]),
    ("r99", &[(9, 9)]),
    ("r24", &[(1, 3)]),
    ("r2_10", &[(1, 9), (3, 9)]),
    ("r35", &[(2, 4), (6, 4)]),
    ("r37", &[(2, 6)]),
    ("r3_11", &[(2, 10), (6, 12)]),
    ("r3_13", &[(2, 12), (6, 10)]),
    ("r5_11", &[(4, 10), (4, 12)]),
    ("r68", &[(10, 12)]),
];

impl RhoSector {
    fn from_weights(w: &W) -> Self {
        RhoSector {
            r11: w.f5(5),
            r22: (4.0 * w.f5(3) + w.b3(3) + 5.0 * w.a3(3)) / 10.0,
            r33: (3.0 * w.f5(1) + 2.0 * w.b3(1) + 10.0 * w.a3(1) + 5.0 * w.b1(1) + 10.0 * w.a1(1))
                / 30.0,
            r55: (6.0 * w.f5(1) + 4.0 * w.b3(1) + 5.0 * w.a1(1)) / 15.0,
            r66: (6.0 * w.f5(1) + 9.0 * w.b3(1) + 5.0 * w.a3(1) + 10.0 * w.b1(1)) / 30.0,
            r99: (w.f5(3) + 4.0 * w.b3(3)) / 5.0,
            r24: (4.0 * w.f5(3) + w.b3(3) - 5.0 * w.a3(3)) / 10.0,
            r2_10: SQRT_2 * (w.f5(3) - w.b3(3)) / 5.0,
            r35: (3.0 * w.f5(1) + 2.0 * w.b3(1) - 5.0 * w.a1(1)) / 15.0,
            r37: (3.0 * w.f5(1) + 2.0 * w.b3(1) - 10.0 * w.a3(1) - 5.0 * w.b1(1)
                + 10.0 * w.a1(1))
                / 30.0,
            r3_11: -SQRT_2 * (-3.0 * w.f5(1) + 3.0 * w.b3(1) - 5.0 * w.a3(1) + 5.0 * w.b1(1))
                / 30.0,
            r3_13: -SQRT_2 * (-3.0 * w.f5(1) + 3.0 * w.b3(1) + 5.0 * w.a3(1) - 5.0 * w.b1(1))
                / 30.0,
            r5_11: SQRT_2 * (w.f5(1) - w.b3(1)) / 5.0,
            r68: (6.0 * w.f5(1) + 9.0 * w.b3(1) - 5.0 * w.a3(1) - 10.0 * w.b1(1)) / 30.0,
        }
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        Some(match label {
            "r11" => self.r11,
            "r22" => self.r22,
            "r33" => self.r33,
            "r55" => self.r55,
            "r66" => self.r66,
            "r99" => self.r99,
            "r24" => self.r24,
            "r2_10" => self.r2_10,
            "r35" => self.r35,
            "r37" => self.r37,
            "r3_11" => self.r3_11,
            "r3_13" => self.r3_13,
            "r5_11" => self.r5_11,
            "r68" => self.r68,
            _ => return None,
        })
    }

    pub fn set(&mut self, label: &str, x: f64) {
        let slot = match label {
            "r11" => &mut self.r11,
            "r22" => &mut self.r22,
            "r33" => &mut self.r33,
            "r55" => &mut self.r55,
            "r66" => &mut self.r66,
            "r99" => &mut self.r99,
            "r24" => &mut self.r24,
            "r2_10" => &mut self.r2_10,
            "r35" => &mut self.r35,
            "r37" => &mut self.r37,
            "r3_11" => &mut self.r3_11,
            "r3_13" => &mut self.r3_13,
            "r5_11" => &mut self.r5_11,
            "r68" => &mut self.r68,
            _ => unreachable!("unknown label {label}"),
        };
        *slot = x;
    }
}

fn flip(k: usize) -> usize {
    BasisIndex::from_flat(k).flipped().flat()
}

/// Both sectors of the full density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RhoElements {
    pub minus: RhoSector,
    pub plus: RhoSector,
}

impl RhoElements {
    pub fn from_populations(pop: &Populations) -> Self {
        RhoElements {
            minus: RhoSector::from_weights(&W { p: pop, s: Sector::Minus }),
            plus: RhoSector::from_weights(&W { p: pop, s: Sector::Plus }),
        }
    }

    pub fn thermal(p: &CouplingParams, beta: f64) -> Result<Self> {
        Ok(Self::from_populations(&Populations::thermal(p, beta)?))
    }

    pub fn sector(&self, s: Sector) -> &RhoSector {
        match s {
            Sector::Minus => &self.minus,
            Sector::Plus => &self.plus,
        }
    }

    /// Read the labelled elements off an 18x18 matrix (first listed position).
    pub fn read(rho: &DensityMatrix) -> Self {
        let mut out = RhoElements::default();
        for (label, pos) in RHO_LABELS {
            let (i, j) = pos[0];
            out.minus.set(label, rho.entries[(i, j)]);
            out.plus.set(label, rho.entries[(flip(i), flip(j))]);
        }
        out
    }

    /// Assemble the full 18x18 matrix.
    pub fn assemble(&self) -> DensityMatrix {
        let mut m = DMatrix::zeros(DIM, DIM);
        for (label, pos) in RHO_LABELS {
            for &(i, j) in pos {
                let a = self.minus.get(label).unwrap();
                let b = self.plus.get(label).unwrap();
                m[(i, j)] = a;
                m[(j, i)] = a;
                m[(flip(i), flip(j))] = b;
                m[(flip(j), flip(i))] = b;
            }
        }
        DensityMatrix { layout: Layout::trimer(), entries: m }
    }

    pub fn named(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        for s in Sector::BOTH {
            for (label, _) in RHO_LABELS {
                m.insert(format!("{label}{}", s.suffix()), self.sector(s).get(label).unwrap());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{reduce, thermal_density_matrix, Reduced};

    fn points() -> Vec<(CouplingParams, f64)> {
        vec![
            (CouplingParams { j: 1.0, j1: 0.37, h: 0.61 }, 1.3),
            (CouplingParams { j: -0.8, j1: 1.4, h: -0.9 }, 0.7),
            (CouplingParams { j: 2.1, j1: -0.5, h: 1.7 }, 3.1),
        ]
    }

    #[test]
    fn rho_labels_match_numeric_matrix() {
        for (p, beta) in points() {
            let num = thermal_density_matrix(&p, beta).unwrap();
            let an = RhoElements::thermal(&p, beta).unwrap().assemble();
            let d = (&num.entries - &an.entries).amax();
            assert!(d < 1e-15, "max deviation {d}");
        }
    }

    #[test]
    fn read_inverts_assemble() {
        let (p, beta) = points()[0];
        let e = RhoElements::thermal(&p, beta).unwrap();
        assert_eq!(RhoElements::read(&e.assemble()), e);
    }

    #[test]
    fn omega_matches_partial_trace() {
        for (p, beta) in points() {
            let r = reduce(&thermal_density_matrix(&p, beta).unwrap(), Reduced::MuS1).unwrap();
            let om = OmegaElements::thermal(&p, beta).unwrap();
            let e = &r.entries;
            for (s, f) in [(Sector::Minus, 0usize), (Sector::Plus, 5usize)] {
                let ix = |k: usize| if f == 0 { k } else { f - k };
                assert!((e[(ix(0), ix(0))] - om.w11.get(s)).abs() < 1e-15);
                assert!((e[(ix(1), ix(1))] - om.w22.get(s)).abs() < 1e-15);
                assert!((e[(ix(2), ix(2))] - om.w33.get(s)).abs() < 1e-15);
                assert!((e[(ix(1), ix(3))] - om.w24.get(s)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn mu_grid_matches_partial_trace() {
        for (p, beta) in points() {
            let r = reduce(&thermal_density_matrix(&p, beta).unwrap(), Reduced::S1S2).unwrap();
            let m = MuGridElements::thermal(&p, beta).unwrap();
            let e = &r.entries;
            let close = |a: f64, b: f64| assert!((a - b).abs() < 1e-15, "{a} {b}");
            close(e[(0, 0)], m.m11.minus);
            close(e[(8, 8)], m.m11.plus);
            close(e[(1, 1)], m.m22.minus);
            close(e[(7, 7)], m.m22.plus);
            close(e[(1, 3)], m.m24.minus);
            close(e[(5, 7)], m.m24.plus);
            close(e[(2, 2)], m.m33);
            close(e[(4, 4)], m.m55);
            close(e[(2, 4)], m.m35);
            close(e[(2, 6)], m.m37);
        }
    }

    #[test]
    fn plus_sector_is_field_reversal() {
        let (p, beta) = points()[0];
        let a = RhoElements::thermal(&p, beta).unwrap();
        let b = RhoElements::thermal(&p.with_field(-p.h), beta).unwrap();
        assert_eq!(a.minus, b.plus);
        assert_eq!(a.plus, b.minus);
    }
}
