//! Density matrices, partial traces and partial transposes.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{check_beta, ground_energy, CouplingParams, Level, DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    Mu,
    S1,
    S2,
}

impl Subsystem {
    fn name(self) -> &'static str {
        match self {
            Subsystem::Mu => "mu",
            Subsystem::S1 => "S1",
            Subsystem::S2 => "S2",
        }
    }

    fn dim(self) -> usize {
        match self {
            Subsystem::Mu => 2,
            _ => 3,
        }
    }
}

/// Which spins a density matrix lives on, slowest index first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layout(Vec<Subsystem>);

impl Layout {
    pub fn trimer() -> Self {
        Layout(vec![Subsystem::Mu, Subsystem::S1, Subsystem::S2])
    }

    pub fn mu_s1() -> Self {
        Layout(vec![Subsystem::Mu, Subsystem::S1])
    }

    pub fn s1_s2() -> Self {
        Layout(vec![Subsystem::S1, Subsystem::S2])
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.0
    }

    pub fn dims(&self) -> Vec<usize> {
        self.0.iter().map(|s| s.dim()).collect()
    }

    pub fn dim(&self) -> usize {
        self.dims().iter().product()
    }

    pub fn position(&self, s: Subsystem) -> Result<usize> {
        self.0.iter().position(|&x| x == s).ok_or(Error::MissingSubsystem(s.name()))
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.0.iter().map(|s| s.name()).collect();
        write!(f, "{}", names.join("⊗"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub layout: Layout,
    pub entries: DMatrix<f64>,
}

impl DensityMatrix {
    pub fn new(layout: Layout, entries: DMatrix<f64>) -> Result<Self> {
        let n = layout.dim();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::InvalidParameter(format!(
                "expected {n}x{n} entries for {layout}, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(DensityMatrix { layout, entries })
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

/// Normalized Boltzmann weights of the 18 levels, shifted by the ground energy.
pub fn boltzmann_weights(p: &CouplingParams, beta: f64) -> Result<[f64; DIM]> {
    p.validate()?;
    check_beta(beta)?;
    let e0 = ground_energy(p);
    let mut w = [0.0; DIM];
    for (k, l) in Level::all().iter().enumerate() {
        w[k] = (-beta * (l.energy(p) - e0)).exp();
    }
    let z: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= z);
    Ok(w)
}

pub fn mixture_of(weighted: &[(Level, f64)]) -> DensityMatrix {
    let mut m = DMatrix::zeros(DIM, DIM);
    for (l, w) in weighted {
        if *w == 0.0 {
            continue;
        }
        let v = l.vector();
        for i in 0..DIM {
            if v[i] == 0.0 {
                continue;
            }
            for j in 0..DIM {
                m[(i, j)] += w * (v[i] * v[j]);
            }
        }
    }
    DensityMatrix { layout: Layout::trimer(), entries: m }
}

pub fn pure_state(level: Level) -> DensityMatrix {
    mixture_of(&[(level, 1.0)])
}

pub fn thermal_density_matrix(p: &CouplingParams, beta: f64) -> Result<DensityMatrix> {
    let w = boltzmann_weights(p, beta)?;
    let pairs: Vec<(Level, f64)> = Level::all().iter().copied().zip(w).collect();
    Ok(mixture_of(&pairs))
}

/// Levels within `tol` of the ground energy.
pub fn ground_levels(p: &CouplingParams, tol: f64) -> Result<Vec<Level>> {
    p.validate()?;
    let e0 = ground_energy(p);
    Ok(Level::all().iter().copied().filter(|l| l.energy(p) - e0 <= tol).collect())
}

pub fn default_degeneracy_tol(p: &CouplingParams) -> f64 {
    1e-9 * p.energy_scale()
}

/// Equal-weight mixture of the degenerate ground manifold.
pub fn ground_state_density_matrix(p: &CouplingParams, tol: f64) -> Result<DensityMatrix> {
    let g = ground_levels(p, tol)?;
    let w = 1.0 / g.len() as f64;
    let pairs: Vec<(Level, f64)> = g.into_iter().map(|l| (l, w)).collect();
    Ok(mixture_of(&pairs))
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

fn digits(mut k: usize, dims: &[usize]) -> Vec<usize> {
    let mut d = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        d[i] = k % dims[i];
        k /= dims[i];
    }
    d
}

/// Trace out one subsystem.
pub fn partial_trace(rho: &DensityMatrix, traced: Subsystem) -> Result<DensityMatrix> {
    let pos = rho.layout.position(traced)?;
    let dims = rho.layout.dims();
    let kept: Vec<Subsystem> =
        rho.layout.0.iter().copied().filter(|&s| s != traced).collect();
    let kdims: Vec<usize> = kept.iter().map(|s| s.dim()).collect();
    let kstr = strides(&kdims);
    let n = kdims.iter().product();
    let mut out = DMatrix::zeros(n, n);
    let full = rho.dim();
    for i in 0..full {
        let di = digits(i, &dims);
        for j in 0..full {
            let dj = digits(j, &dims);
            if di[pos] != dj[pos] {
                continue;
            }
            let (mut a, mut b, mut q) = (0, 0, 0);
            for k in 0..dims.len() {
                if k == pos {
                    continue;
                }
                a += di[k] * kstr[q];
                b += dj[k] * kstr[q];
                q += 1;
            }
            out[(a, b)] += rho.entries[(i, j)];
        }
    }
    Ok(DensityMatrix { layout: Layout(kept), entries: out })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduced {
    MuS1,
    S1S2,
}

/// rho_{mu S1} (trace over S2) or rho_{S1 S2} (trace over mu).
pub fn reduce(rho: &DensityMatrix, keep: Reduced) -> Result<DensityMatrix> {
    match keep {
        Reduced::MuS1 => partial_trace(rho, Subsystem::S2),
        Reduced::S1S2 => partial_trace(rho, Subsystem::Mu),
    }
}

/// Swap the indices of one subsystem between row and column.
pub fn partial_transpose_raw(m: &DMatrix<f64>, dims: &[usize], axis: usize) -> DMatrix<f64> {
    let st = strides(dims);
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        let ai = (i / st[axis]) % dims[axis];
        for j in 0..n {
            let aj = (j / st[axis]) % dims[axis];
            let ii = i + aj * st[axis] - ai * st[axis];
            let jj = j + ai * st[axis] - aj * st[axis];
            out[(ii, jj)] = m[(i, j)];
        }
    }
    out
}

/// Connected components of the nonzero pattern, each sorted, ordered by first index.
pub fn discover_blocks(m: &DMatrix<f64>, tol: f64) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let cut = tol * m.amax();
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut comp = Vec::new();
        seen[start] = true;
        while let Some(i) = stack.pop() {
            comp.push(i);
            for j in 0..n {
                if !seen[j] && (m[(i, j)].abs() > cut || m[(j, i)].abs() > cut) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        blocks.push(comp);
    }
    blocks
}

pub const BLOCK_TOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct TransposedMatrix {
    pub layout: Layout,
    pub part: Subsystem,
    pub entries: DMatrix<f64>,
    pub blocks: Vec<Vec<usize>>,
}

impl TransposedMatrix {
    pub fn block(&self, k: usize) -> DMatrix<f64> {
        let b = &self.blocks[k];
        DMatrix::from_fn(b.len(), b.len(), |r, c| self.entries[(b[r], b[c])])
    }

    /// Undo the transpose.
    pub fn restore(&self) -> Result<DensityMatrix> {
        let axis = self.layout.position(self.part)?;
        let e = partial_transpose_raw(&self.entries, &self.layout.dims(), axis);
        Ok(DensityMatrix { layout: self.layout.clone(), entries: e })
    }
}

pub fn partial_transpose(rho: &DensityMatrix, part: Subsystem) -> Result<TransposedMatrix> {
    let axis = rho.layout.position(part)?;
    let entries = partial_transpose_raw(&rho.entries, &rho.layout.dims(), axis);
    let blocks = discover_blocks(&entries, BLOCK_TOL);
    Ok(TransposedMatrix { layout: rho.layout.clone(), part, entries, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> CouplingParams {
        CouplingParams { j: 1.0, j1: 0.7, h: 0.4 }
    }

    #[test]
    fn thermal_trace_and_symmetry() {
        let r = thermal_density_matrix(&p(), 1.3).unwrap();
        assert!((r.trace() - 1.0).abs() < 1e-14);
        assert!((&r.entries - r.entries.transpose()).amax() == 0.0);
    }

    #[test]
    fn beta_zero_is_maximally_mixed() {
        let r = thermal_density_matrix(&p(), 0.0).unwrap();
        let want = DMatrix::<f64>::identity(DIM, DIM) / DIM as f64;
        assert!((r.entries - want).amax() < 1e-15);
    }

    #[test]
    fn reduced_shapes_and_traces() {
        let r = thermal_density_matrix(&p(), 2.0).unwrap();
        let a = reduce(&r, Reduced::MuS1).unwrap();
        let b = reduce(&r, Reduced::S1S2).unwrap();
        assert_eq!(a.dim(), 6);
        assert_eq!(b.dim(), 9);
        assert_eq!(a.layout, Layout::mu_s1());
        assert!((a.trace() - 1.0).abs() < 1e-14 && (b.trace() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn transpose_is_involution() {
        let r = thermal_density_matrix(&p(), 0.8).unwrap();
        for s in [Subsystem::Mu, Subsystem::S1, Subsystem::S2] {
            let t = partial_transpose(&r, s).unwrap();
            assert_eq!(t.restore().unwrap().entries, r.entries);
        }
    }

    #[test]
    fn transpose_missing_subsystem() {
        let r = reduce(&thermal_density_matrix(&p(), 0.8).unwrap(), Reduced::S1S2).unwrap();
        assert!(partial_transpose(&r, Subsystem::Mu).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        let a = DMatrix::from_row_slice(2, 2, &[0.7, 0.1, 0.1, 0.3]);
        let b = DMatrix::from_row_slice(3, 3, &[0.5, 0.0, 0.1, 0.0, 0.2, 0.0, 0.1, 0.0, 0.3]);
        let rho = DensityMatrix::new(Layout::mu_s1(), a.kronecker(&b)).unwrap();
        let ra = partial_trace(&rho, Subsystem::S1).unwrap();
        let rb = partial_trace(&rho, Subsystem::Mu).unwrap();
        assert!((ra.entries - a).amax() < 1e-15);
        assert!((rb.entries - b).amax() < 1e-15);
    }

    #[test]
    fn blocks_partition_indices() {
        let r = thermal_density_matrix(&p(), 1.0).unwrap();
        let t = partial_transpose(&r, Subsystem::Mu).unwrap();
        let mut all: Vec<usize> = t.blocks.concat();
        all.sort_unstable();
        assert_eq!(all, (0..DIM).collect::<Vec<_>>());
        let mut sizes: Vec<usize> = t.blocks.iter().map(|b| b.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 3, 3, 5, 5]);
    }

    #[test]
    fn ground_mixture_zero_field() {
        let q = CouplingParams { j: 1.0, j1: 0.0, h: 0.0 };
        let g = ground_levels(&q, default_degeneracy_tol(&q)).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.iter().all(|l| l.s2 == 3));
    }
}
