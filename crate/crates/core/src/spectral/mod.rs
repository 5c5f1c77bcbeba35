//! Momentum-space diagonalization of the walk.
//!
//! On the torus the evolution operator is block diagonal in the momenta
//! `(n, m) ∈ {0, …, N−1}²`. Each block is the 4×4 unitary
//!
//! ```text
//! H_{n,m}(A) = diag(ω^{−n}, ω^{n}, ω^{−m}, ω^{m}) · A,     ω = e^{2πi/N},
//! ```
//!
//! acting on the Fourier amplitudes `ψ̂(n, m) = N^{-1} Σ_{x,y} ψ(x, y) ω^{−(nx + my)}`.
//! Eigenpairs come from a complex Schur factorization (the blocks are normal,
//! so the Schur vectors are an orthonormal eigenbasis) or, for the Grover
//! coin, from the closed forms in [`grover`].

pub mod cluster;
pub mod coefficients;
pub mod grover;
mod reconstruct;

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::linalg::Schur;
use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::coin::{Coin, CoinMatrix};
use crate::error::{Result, WalkError};
use crate::state::Lattice;

pub use cluster::CLUSTER_TOL;
pub use coefficients::{grover_class_table, origin_coefficients, ClassCoefficient, ExpansionTerm, GroverClassTable, OriginExpansion};
pub use grover::{degeneracy_class, grover_eigenvalues, grover_eigenvectors, DegeneracyClass};
pub use reconstruct::evolve_spectral;

/// Eigen residual accepted from the numeric solver.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-10;

pub type BlockMatrix = Matrix4<Complex64>;
pub type BlockVector = Vector4<Complex64>;

/// `ω^j` for `j ∈ 0..N`.
#[derive(Debug, Clone)]
pub(crate) struct Phases {
    pub(crate) n: usize,
    table: Vec<Complex64>,
}

impl Phases {
    pub(crate) fn new(n: usize) -> Self {
        let table = (0..n).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).collect();
        Phases { n, table }
    }

    /// `ω^e` for any integer exponent.
    #[inline]
    pub(crate) fn pow(&self, e: i64) -> Complex64 {
        self.table[e.rem_euclid(self.n as i64) as usize]
    }
}

/// `H_{n,m}(A)` with the convention above.
pub fn block_matrix(coin: &Coin, n: usize, m: usize, size: usize) -> BlockMatrix {
    block_matrix_with(&Phases::new(size), coin.entries(), n, m)
}

fn block_matrix_with(ph: &Phases, a: &CoinMatrix, n: usize, m: usize) -> BlockMatrix {
    let (n, m) = (n as i64, m as i64);
    let d = [ph.pow(-n), ph.pow(n), ph.pow(-m), ph.pow(m)];
    BlockMatrix::from_fn(|i, j| d[i] * a[(i, j)])
}

/// One momentum block with its eigenpairs.
#[derive(Debug, Clone)]
pub struct MomentumBlock {
    pub n: usize,
    pub m: usize,
    pub h: BlockMatrix,
    pub eigenvalues: [Complex64; 4],
    /// Unit vectors; orthonormal as a set.
    pub eigenvectors: [BlockVector; 4],
}

impl MomentumBlock {
    /// `‖H v_k − λ_k v_k‖`.
    pub fn residual(&self, k: usize) -> f64 {
        (self.h * self.eigenvectors[k] - self.eigenvectors[k] * self.eigenvalues[k]).norm()
    }

    pub fn max_residual(&self) -> f64 {
        (0..4).map(|k| self.residual(k)).fold(0.0, f64::max)
    }

    /// `max |V†V − I|` over the eigenvector matrix.
    pub fn orthonormality_defect(&self) -> f64 {
        let v = BlockMatrix::from_columns(&self.eigenvectors);
        (v.adjoint() * v - BlockMatrix::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `v_k v_k†`.
    pub fn projector(&self, k: usize) -> BlockMatrix {
        self.eigenvectors[k] * self.eigenvectors[k].adjoint()
    }

    /// Sum of the projectors whose eigenvalue lies within `tol` of `lambda`.
    pub fn eigenspace_projector(&self, lambda: Complex64, tol: f64) -> BlockMatrix {
        (0..4)
            .filter(|&k| (self.eigenvalues[k] - lambda).norm() < tol)
            .map(|k| self.projector(k))
            .fold(BlockMatrix::zeros(), |acc, p| acc + p)
    }
}

/// Builds `H_{n,m}(A)` and diagonalizes it numerically.
pub fn build_block(coin: &Coin, n: usize, m: usize, size: usize) -> Result<MomentumBlock> {
    Lattice::new(size)?;
    if n >= size || m >= size {
        return Err(crate::error::domain(format!("momenta ({n},{m}) must lie in 0..{size}")));
    }
    numeric_block(&Phases::new(size), coin.entries(), n, m)
}

fn numeric_block(ph: &Phases, a: &CoinMatrix, n: usize, m: usize) -> Result<MomentumBlock> {
    let h = block_matrix_with(ph, a, n, m);
    let schur = Schur::try_new(h, f64::EPSILON, 0).ok_or(WalkError::EigenSolver { n, m })?;
    let (q, t) = schur.unpack();
    let eigenvalues = [t[(0, 0)], t[(1, 1)], t[(2, 2)], t[(3, 3)]];
    let eigenvectors = [0, 1, 2, 3].map(|k| q.column(k).into_owned());
    let block = MomentumBlock { n, m, h, eigenvalues, eigenvectors };
    if block.max_residual() >= EIGEN_RESIDUAL_TOL {
        return Err(WalkError::EigenSolver { n, m });
    }
    Ok(block)
}

/// Where a decomposition's eigenpairs came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenSource {
    Numeric,
    GroverClosedForm,
}

/// A set of momentum labels `(n, m, k)` sharing one eigenvalue.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    pub value: Complex64,
    pub members: Vec<(usize, usize, usize)>,
}

impl EigenCluster {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

/// All `N²` blocks of one coin plus the eigenvalue clusters across blocks.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    coin_label: String,
    lattice: Lattice,
    source: EigenSource,
    blocks: Vec<MomentumBlock>,
    /// Sorted by multiplicity (descending), then by phase.
    clusters: Vec<EigenCluster>,
}

impl SpectralDecomposition {
    /// Numeric eigenpairs for every block, built in parallel.
    pub fn numeric(coin: &Coin, size: usize) -> Result<Self> {
        let lattice = Lattice::new(size)?;
        let ph = Phases::new(size);
        let blocks = (0..size * size)
            .into_par_iter()
            .map(|i| numeric_block(&ph, coin.entries(), i / size, i % size))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(coin.label().to_owned(), lattice, EigenSource::Numeric, blocks))
    }

    /// Grover-coin eigenpairs from the closed-form eigenvalues and eigenvectors.
    pub fn grover_closed_form(size: usize) -> Result<Self> {
        let lattice = Lattice::new(size)?;
        let coin = Coin::grover();
        let ph = Phases::new(size);
        let blocks = (0..size * size)
            .map(|i| {
                let (n, m) = (i / size, i % size);
                MomentumBlock {
                    n,
                    m,
                    h: block_matrix_with(&ph, coin.entries(), n, m),
                    eigenvalues: grover::eigenvalues_unchecked(n, m, size),
                    eigenvectors: grover::eigenvectors_unchecked(n, m, size),
                }
            })
            .collect();
        Ok(Self::assemble(coin.label().to_owned(), lattice, EigenSource::GroverClosedForm, blocks))
    }

    fn assemble(coin_label: String, lattice: Lattice, source: EigenSource, blocks: Vec<MomentumBlock>) -> Self {
        let labels: Vec<(usize, usize, usize)> =
            blocks.iter().flat_map(|b| (0..4).map(move |k| (b.n, b.m, k))).collect();
        let values: Vec<Complex64> = blocks.iter().flat_map(|b| b.eigenvalues).collect();
        let mut clusters: Vec<EigenCluster> = cluster::cluster_indices(&values, CLUSTER_TOL)
            .into_iter()
            .map(|idx| EigenCluster {
                value: cluster::centroid(&values, &idx),
                members: idx.iter().map(|&i| labels[i]).collect(),
            })
            .collect();
        clusters.sort_by(|a, b| {
            b.multiplicity().cmp(&a.multiplicity()).then(a.value.arg().total_cmp(&b.value.arg()))
        });
        SpectralDecomposition { coin_label, lattice, source, blocks, clusters }
    }

    pub fn coin_label(&self) -> &str {
        &self.coin_label
    }

    pub fn size(&self) -> usize {
        self.lattice.size()
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn source(&self) -> EigenSource {
        self.source
    }

    pub fn blocks(&self) -> &[MomentumBlock] {
        &self.blocks
    }

    pub fn block(&self, n: usize, m: usize) -> &MomentumBlock {
        &self.blocks[n * self.size() + m]
    }

    pub fn clusters(&self) -> &[EigenCluster] {
        &self.clusters
    }

    pub fn eigenvalue_count(&self) -> usize {
        self.clusters.iter().map(EigenCluster::multiplicity).sum()
    }

    /// Multiplicity of the cluster containing `value`, or zero.
    pub fn multiplicity_of(&self, value: Complex64) -> usize {
        self.cluster_near(value).map_or(0, EigenCluster::multiplicity)
    }

    pub fn cluster_near(&self, value: Complex64) -> Option<&EigenCluster> {
        self.clusters.iter().find(|c| (c.value - value).norm() < CLUSTER_TOL)
    }

    /// Eigenvalues (cluster centroids) that occur in every block.
    pub fn common_eigenvalues(&self) -> Vec<Complex64> {
        let sites = self.lattice.sites();
        self.clusters
            .iter()
            .filter(|c| {
                let mut seen = vec![false; sites];
                for &(n, m, _) in &c.members {
                    seen[n * self.size() + m] = true;
                }
                seen.iter().all(|&s| s)
            })
            .map(|c| c.value)
            .collect()
    }

    pub fn report(&self) -> SpectrumReport {
        SpectrumReport {
            coin: self.coin_label.clone(),
            n: self.size(),
            source: self.source,
            eigenvalue_count: self.eigenvalue_count(),
            clusters: self
                .clusters
                .iter()
                .map(|c| ClusterEntry { value: [c.value.re, c.value.im], multiplicity: c.multiplicity() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterEntry {
    pub value: [f64; 2],
    pub multiplicity: usize,
}

/// Exportable summary of the eigenvalue clusters.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub coin: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub source: EigenSource,
    pub eigenvalue_count: usize,
    pub clusters: Vec<ClusterEntry>,
}

impl SpectrumReport {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "re,im,multiplicity")?;
        for c in &self.clusters {
            writeln!(out, "{:e},{:e},{}", c.value[0], c.value[1], c.multiplicity)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn grover_zero_block_is_the_coin() {
        let b = build_block(&Coin::grover(), 0, 0, 5).unwrap();
        assert_eq!(b.h, *Coin::grover().entries());
        let ev = sorted(b.eigenvalues.to_vec());
        let want = [c(-1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)];
        for (a, w) in ev.iter().zip(want) {
            assert!((a - w).norm() < 1e-12, "{a} vs {w}");
        }
    }

    #[test]
    fn block_matrix_convention() {
        let coin = Coin::a2();
        let h = block_matrix(&coin, 2, 3, 7);
        let w = Complex64::from_polar(1.0, 2.0 * PI / 7.0);
        let d = [w.powi(-2), w.powi(2), w.powi(-3), w.powi(3)];
        for i in 0..4 {
            for j in 0..4 {
                assert!((h[(i, j)] - d[i] * coin.entry(i, j)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn numeric_blocks_are_unimodular_and_orthonormal() {
        for coin in [Coin::grover(), Coin::a1(), Coin::a2(), Coin::symmetric_family(0.2).unwrap()] {
            let d = SpectralDecomposition::numeric(&coin, 7).unwrap();
            for b in d.blocks() {
                for l in b.eigenvalues {
                    assert!((l.norm() - 1.0).abs() < 1e-12);
                }
                assert!(b.max_residual() < EIGEN_RESIDUAL_TOL);
                assert!(b.orthonormality_defect() < 1e-12);
            }
            assert_eq!(d.eigenvalue_count(), 4 * 49);
        }
    }

    #[test]
    fn out_of_range_momenta() {
        assert!(build_block(&Coin::grover(), 5, 0, 5).is_err());
        assert!(build_block(&Coin::grover(), 0, 0, 4).is_err());
    }

    #[test]
    fn grover_census() {
        for size in [5usize, 7] {
            let d = SpectralDecomposition::numeric(&Coin::grover(), size).unwrap();
            let n2 = size * size;
            assert_eq!(d.multiplicity_of(c(-1.0, 0.0)), n2 + 2);
            assert_eq!(d.multiplicity_of(c(1.0, 0.0)), n2);
            assert_eq!(d.clusters()[0].multiplicity(), n2 + 2);
        }
    }

    #[test]
    fn report_is_sorted_and_serializes() {
        let d = SpectralDecomposition::numeric(&Coin::grover(), 5).unwrap();
        let r = d.report();
        assert!(r.clusters.windows(2).all(|w| w[0].multiplicity >= w[1].multiplicity));
        assert_eq!(r.clusters[0].multiplicity, 27);
        assert_eq!(r.clusters[1].multiplicity, 25);
        let mut buf = Vec::new();
        r.write_json(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["clusters"][0]["multiplicity"], 27);
        assert!((v["clusters"][0]["value"][0].as_f64().unwrap() + 1.0).abs() < 1e-12);
    }
}
