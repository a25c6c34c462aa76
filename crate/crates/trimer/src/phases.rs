//! Ground-state phases, boundary lines and entanglement classes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::density::{default_degeneracy_tol, ground_levels, mixture_of};
use crate::error::{Error, Result};
use crate::negativity::{report_from_density, NegativityReport};
use crate::spectrum::{Branch, CouplingParams, Level};

const L52: Level = Level::new(5, 5, Branch::None);
const L32A: Level = Level::new(3, 3, Branch::I);
const L32B: Level = Level::new(3, 3, Branch::II);
const L12A: Level = Level::new(1, 1, Branch::I);
const L12B: Level = Level::new(1, 1, Branch::II);

fn multiplet(s2: u8, br: Branch) -> Vec<Level> {
    (0..=s2).map(|k| Level::new(s2, s2 as i8 - 2 * k as i8, br)).collect()
}

fn doublet(br: Branch) -> Vec<Level> {
    multiplet(1, br)
}

/// Degenerate ground-state manifolds, ordered by descending field then J1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Manifold {
    FiveThreeII,
    ThreeOneII,
    FiveThreeI,
    ThreeOneI,
    Iso2,
    ThreeThree,
    Iso1,
    OneOne,
    ZeroPlus4,
    Zero5,
    ZeroPlus3,
    ZeroPlus2,
    ZeroPlus1,
    ZeroMinus4,
    ZeroMinus3,
    ZeroMinus2,
    ZeroMinus1,
}

impl Manifold {
    pub const ALL: [Manifold; 17] = [
        Manifold::FiveThreeII,
        Manifold::ThreeOneII,
        Manifold::FiveThreeI,
        Manifold::ThreeOneI,
        Manifold::Iso2,
        Manifold::ThreeThree,
        Manifold::Iso1,
        Manifold::OneOne,
        Manifold::ZeroPlus4,
        Manifold::Zero5,
        Manifold::ZeroPlus3,
        Manifold::ZeroPlus2,
        Manifold::ZeroPlus1,
        Manifold::ZeroMinus4,
        Manifold::ZeroMinus3,
        Manifold::ZeroMinus2,
        Manifold::ZeroMinus1,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Manifold::FiveThreeII => "FI^II_5/2-3/2",
            Manifold::ThreeOneII => "FI^II_3/2-1/2",
            Manifold::FiveThreeI => "FI^I_5/2-3/2",
            Manifold::ThreeOneI => "FI^I_3/2-1/2",
            Manifold::Iso2 => "FI_1^2",
            Manifold::ThreeThree => "FI_3/2-3/2",
            Manifold::Iso1 => "FI_1^1",
            Manifold::OneOne => "FI_1/2-1/2",
            Manifold::ZeroPlus4 => "FI_0+^4",
            Manifold::Zero5 => "FI_0^5",
            Manifold::ZeroPlus3 => "FI_0+^3",
            Manifold::ZeroPlus2 => "FI_0+^2",
            Manifold::ZeroPlus1 => "FI_0+^1",
            Manifold::ZeroMinus4 => "FI_0-^4",
            Manifold::ZeroMinus3 => "FI_0-^3",
            Manifold::ZeroMinus2 => "FI_0-^2",
            Manifold::ZeroMinus1 => "FI_0-^1",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|m| m.name() == s)
    }

    pub fn members(&self) -> Vec<Level> {
        let cat = |parts: &[Vec<Level>]| parts.concat();
        match self {
            Manifold::FiveThreeII => vec![L52, L32B],
            Manifold::ThreeOneII => vec![L32B, L12B],
            Manifold::FiveThreeI => vec![L52, L32A],
            Manifold::ThreeOneI => vec![L32A, L12A],
            Manifold::Iso2 => vec![L32A, L32B, L52],
            Manifold::ThreeThree => vec![L32A, L32B],
            Manifold::Iso1 => vec![L12A, L12B, L32A, L32B],
            Manifold::OneOne => vec![L12A, L12B],
            Manifold::ZeroPlus4 => cat(&[doublet(Branch::I), doublet(Branch::II)]),
            Manifold::Zero5 => doublet(Branch::I),
            Manifold::ZeroPlus3 => doublet(Branch::II),
            Manifold::ZeroPlus2 => cat(&[doublet(Branch::II), multiplet(3, Branch::II)]),
            Manifold::ZeroPlus1 => multiplet(3, Branch::II),
            Manifold::ZeroMinus4 => cat(&[doublet(Branch::I), multiplet(3, Branch::I)]),
            Manifold::ZeroMinus3 => multiplet(3, Branch::I),
            Manifold::ZeroMinus2 => cat(&[multiplet(5, Branch::None), multiplet(3, Branch::I)]),
            Manifold::ZeroMinus1 => multiplet(5, Branch::None),
        }
    }

    /// A parameter point (|J| = 1) where this manifold is the ground state.
    pub fn canonical_point(&self) -> CouplingParams {
        let (j, j1, h) = match self {
            Manifold::FiveThreeII => (1.0, 0.5, 2.5),
            Manifold::ThreeOneII => (1.0, 0.5, 0.5),
            Manifold::FiveThreeI => (1.0, 1.5, 3.5),
            Manifold::ThreeOneI => (1.0, 1.5, 2.0),
            Manifold::Iso2 => (1.0, 1.0, 2.5),
            Manifold::ThreeThree => (1.0, 1.0, 2.0),
            Manifold::Iso1 => (1.0, 1.0, 1.5),
            Manifold::OneOne => (1.0, 1.0, 1.0),
            Manifold::ZeroPlus4 => (1.0, 1.0, 0.0),
            Manifold::Zero5 => (1.0, 2.0, 0.0),
            Manifold::ZeroPlus3 => (1.0, 0.5, 0.0),
            Manifold::ZeroPlus2 => (1.0, 0.25, 0.0),
            Manifold::ZeroPlus1 => (1.0, 0.0, 0.0),
            Manifold::ZeroMinus4 => (-1.0, 0.5, 0.0),
            Manifold::ZeroMinus3 => (-1.0, 0.375, 0.0),
            Manifold::ZeroMinus2 => (-1.0, 0.25, 0.0),
            Manifold::ZeroMinus1 => (-1.0, 0.0, 0.0),
        };
        CouplingParams { j, j1, h }
    }

    /// Equal-weight mixture of the member eigenstates.
    pub fn report(&self) -> NegativityReport {
        let m = self.members();
        let w = 1.0 / m.len() as f64;
        let pairs: Vec<(Level, f64)> = m.into_iter().map(|l| (l, w)).collect();
        report_from_density(&mixture_of(&pairs)).expect("trimer layout")
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GroundKind {
    Pure(Level),
    Manifold(Manifold),
    /// Accidental degeneracy not among the named manifolds.
    Unlisted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateLabel {
    pub kind: GroundKind,
    pub members: Vec<Level>,
    pub energy: f64,
}

impl GroundStateLabel {
    pub fn degeneracy(&self) -> usize {
        self.members.len()
    }
}

impl fmt::Display for GroundStateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GroundKind::Pure(l) => write!(f, "{l}"),
            GroundKind::Manifold(m) => write!(f, "{m}"),
            GroundKind::Unlisted => {
                let names: Vec<String> = self.members.iter().map(|l| l.to_string()).collect();
                write!(f, "{{{}}}", names.join(","))
            }
        }
    }
}

fn same_set(a: &[Level], b: &[Level]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.contains(x))
}

pub fn ground_state(p: &CouplingParams) -> Result<GroundStateLabel> {
    ground_state_with_tol(p, default_degeneracy_tol(p))
}

pub fn ground_state_with_tol(p: &CouplingParams, tol: f64) -> Result<GroundStateLabel> {
    if p.j == 0.0 {
        return Err(Error::InvalidParameter("ground-state analysis requires J != 0".into()));
    }
    let members = ground_levels(p, tol)?;
    let energy = members.iter().map(|l| l.energy(p)).fold(f64::INFINITY, f64::min);
    let kind = if members.len() == 1 {
        GroundKind::Pure(members[0])
    } else {
        let flipped: Vec<Level> = members.iter().map(|l| l.flipped()).collect();
        Manifold::ALL
            .iter()
            .find(|m| {
                let want = m.members();
                same_set(&want, &members) || same_set(&want, &flipped)
            })
            .map_or(GroundKind::Unlisted, |m| GroundKind::Manifold(*m))
    };
    Ok(GroundStateLabel { kind, members, energy })
}

/// Level crossings between the top-magnetization states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryLine {
    FiveThreeI,
    FiveThreeII,
    ThreeOneI,
    ThreeOneII,
    ThreeThree,
    OneOne,
}

impl BoundaryLine {
    pub const ALL: [BoundaryLine; 6] = [
        BoundaryLine::FiveThreeI,
        BoundaryLine::FiveThreeII,
        BoundaryLine::ThreeOneI,
        BoundaryLine::ThreeOneII,
        BoundaryLine::ThreeThree,
        BoundaryLine::OneOne,
    ];

    pub fn levels(&self) -> (Level, Level) {
        match self {
            BoundaryLine::FiveThreeI => (L52, L32A),
            BoundaryLine::FiveThreeII => (L52, L32B),
            BoundaryLine::ThreeOneI => (L32A, L12A),
            BoundaryLine::ThreeOneII => (L32B, L12B),
            BoundaryLine::ThreeThree => (L32A, L32B),
            BoundaryLine::OneOne => (L12A, L12B),
        }
    }

    /// Field at which the two states cross; None when both carry the same
    /// magnetization, in which case the crossing is the line J1 = J.
    pub fn field(&self, j: f64, j1: f64) -> Option<f64> {
        let (a, b) = self.levels();
        let p = CouplingParams { j, j1, h: 0.0 };
        let dsz = a.sz() - b.sz();
        if dsz == 0.0 {
            return None;
        }
        Some((a.zero_field_energy(&p) - b.zero_field_energy(&p)) / dsz)
    }

    /// The crossing condition as a residual that vanishes on the line.
    pub fn residual(&self, p: &CouplingParams) -> f64 {
        let (a, b) = self.levels();
        a.energy(p) - b.energy(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntanglementClass {
    #[serde(rename = "0-0")]
    Type00,
    #[serde(rename = "1-1")]
    Type11,
    /// Tripartite negativity without any reduced pair entanglement.
    #[serde(rename = "2-0")]
    Type20,
    #[serde(rename = "2-1")]
    Type21,
    #[serde(rename = "2-2")]
    Type22,
    #[serde(rename = "2-3")]
    Type23,
}

impl EntanglementClass {
    pub fn label(&self) -> &'static str {
        match self {
            EntanglementClass::Type00 => "0-0",
            EntanglementClass::Type11 => "1-1",
            EntanglementClass::Type20 => "2-0",
            EntanglementClass::Type21 => "2-1",
            EntanglementClass::Type22 => "2-2",
            EntanglementClass::Type23 => "2-3",
        }
    }
}

impl fmt::Display for EntanglementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub const CLASSIFY_TOL: f64 = 1e-9;

pub fn classify(r: &NegativityReport) -> EntanglementClass {
    classify_with_tol(r, CLASSIFY_TOL)
}

pub fn classify_with_tol(r: &NegativityReport, tol: f64) -> EntanglementClass {
    let tri = r.n_tri > tol;
    let ms = r.n_mu_s1 > tol;
    let ss = r.n_s1_s2 > tol;
    match (tri, ms, ss) {
        (false, false, false) => EntanglementClass::Type00,
        (false, _, _) => EntanglementClass::Type11,
        (true, false, false) => EntanglementClass::Type20,
        (true, false, true) => EntanglementClass::Type21,
        (true, true, false) => EntanglementClass::Type22,
        (true, true, true) => EntanglementClass::Type23,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldRow {
    pub manifold: Manifold,
    pub report: NegativityReport,
    pub class: EntanglementClass,
}

pub fn manifold_suite() -> Vec<ManifoldRow> {
    Manifold::ALL
        .iter()
        .map(|m| {
            let report = m.report();
            ManifoldRow { manifold: *m, report, class: classify(&report) }
        })
        .collect()
}

/// Ground state and its class at one parameter point.
pub fn classify_ground_state(p: &CouplingParams) -> Result<(GroundStateLabel, NegativityReport, EntanglementClass)> {
    let g = ground_state(p)?;
    let w = 1.0 / g.degeneracy() as f64;
    let pairs: Vec<(Level, f64)> = g.members.iter().map(|l| (*l, w)).collect();
    let r = report_from_density(&mixture_of(&pairs))?;
    let c = classify(&r);
    Ok((g, r, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_points_resolve() {
        for m in Manifold::ALL {
            let g = ground_state(&m.canonical_point()).unwrap();
            assert_eq!(g.kind, GroundKind::Manifold(m), "{m}");
            assert_eq!(g.degeneracy(), m.members().len());
        }
    }

    #[test]
    fn member_counts() {
        assert_eq!(Manifold::ZeroPlus2.members().len(), 6);
        assert_eq!(Manifold::ZeroMinus2.members().len(), 10);
        assert_eq!(Manifold::Iso1.members().len(), 4);
        assert_eq!(Manifold::Iso2.members().len(), 3);
    }

    #[test]
    fn pure_phase() {
        let g = ground_state(&CouplingParams { j: 1.0, j1: 2.0, h: 0.5 }).unwrap();
        assert_eq!(g.kind, GroundKind::Pure(L12A));
    }

    #[test]
    fn rejects_zero_j() {
        assert!(ground_state(&CouplingParams { j: 0.0, j1: 1.0, h: 0.0 }).is_err());
    }

    #[test]
    fn closed_form_boundaries_for_positive_j() {
        let j1 = 0.7;
        let f = |b: BoundaryLine| b.field(1.0, j1).unwrap();
        assert!((f(BoundaryLine::FiveThreeI) - (2.0 * j1 + 0.5)).abs() < 1e-15);
        assert!((f(BoundaryLine::FiveThreeII) - 2.5).abs() < 1e-15);
        assert!((f(BoundaryLine::ThreeOneI) - (j1 + 0.5)).abs() < 1e-15);
        assert!((f(BoundaryLine::ThreeOneII) - (2.0 * j1 - 0.5)).abs() < 1e-15);
        assert!(BoundaryLine::ThreeThree.field(1.0, j1).is_none());
        let on = CouplingParams { j: 1.0, j1: 1.0, h: 0.3 };
        assert_eq!(BoundaryLine::ThreeThree.residual(&on), 0.0);
        assert_eq!(BoundaryLine::OneOne.residual(&on), 0.0);
    }

    #[test]
    fn classify_rules() {
        let r = |a, b, c, d| NegativityReport::from_parts(a, b, c, d);
        assert_eq!(classify(&r(0.0, 0.0, 0.0, 0.0)), EntanglementClass::Type00);
        assert_eq!(classify(&r(0.0, 1.0, 0.0, 1.0)), EntanglementClass::Type11);
        assert_eq!(classify(&r(0.0, 0.25, 0.167, 0.5)), EntanglementClass::Type21);
        assert_eq!(classify(&r(0.1, 0.0, 0.2, 0.2)), EntanglementClass::Type22);
        assert_eq!(classify(&r(0.1, 0.1, 0.2, 0.2)), EntanglementClass::Type23);
        assert_eq!(classify(&r(0.0, 0.0, 0.2, 0.2)), EntanglementClass::Type20);
    }

    #[test]
    fn flipped_field_same_manifold() {
        let p = CouplingParams { j: 1.0, j1: 0.5, h: -2.5 };
        let g = ground_state(&p).unwrap();
        assert_eq!(g.kind, GroundKind::Manifold(Manifold::FiveThreeII));
    }
}
