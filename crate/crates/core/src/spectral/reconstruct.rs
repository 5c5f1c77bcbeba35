//! Time evolution through the eigen-expansion: transform to momentum space,
//! multiply each block by `Σ_k λ_kᵗ v_k v_k†`, and transform back.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{BlockMatrix, BlockVector, Phases, SpectralDecomposition};
use crate::coin::Coin;
use crate::error::{domain, Result};
use crate::state::{Spinor, WalkState};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `ψ(t)` from the eigen-expansion of `coin`'s blocks.
pub fn evolve_spectral(initial: &WalkState, coin: &Coin, t: u64) -> Result<WalkState> {
    SpectralDecomposition::numeric(coin, initial.size())?.evolve(initial, t)
}

// One 1-D DFT pass along either axis of the (x, y, chirality) array, with
// 1/√N per pass. Forward maps positions to momenta with ω^{−jx}; the inverse
// maps momenta back with ω^{+jx}.
fn dft_axis(ph: &Phases, data: &[Complex64], along_x: bool, forward: bool) -> Vec<Complex64> {
    let n = ph.n;
    let half = (n as i64 - 1) / 2;
    let coord = |i: usize| i as i64 - half;
    // exponent for output index `o` fed by input index `i`
    let exponent = |o: usize, i: usize| if forward { -(o as i64) * coord(i) } else { i as i64 * coord(o) };
    let scale = 1.0 / (n as f64).sqrt();
    let mut out = vec![ZERO; data.len()];
    out.par_chunks_mut(4 * n).enumerate().for_each(|(a, row)| {
        for b in 0..n {
            let mut acc = [ZERO; 4];
            for j in 0..n {
                let (src, phase) = if along_x {
                    ((j * n + b) * 4, ph.pow(exponent(a, j)))
                } else {
                    ((a * n + j) * 4, ph.pow(exponent(b, j)))
                };
                for s in 0..4 {
                    acc[s] += data[src + s] * phase;
                }
            }
            for s in 0..4 {
                row[4 * b + s] = acc[s] * scale;
            }
        }
    });
    out
}

impl SpectralDecomposition {
    /// `Σ_k λ_kᵗ v_k v_k†` for block `(n, m)`.
    pub fn block_propagator(&self, n: usize, m: usize, t: u64) -> BlockMatrix {
        let b = self.block(n, m);
        (0..4).fold(BlockMatrix::zeros(), |acc, k| acc + b.projector(k) * b.eigenvalues[k].powu(t as u32))
    }

    /// `ψ(t)` for an arbitrary initial state of matching size.
    pub fn evolve(&self, initial: &WalkState, t: u64) -> Result<WalkState> {
        let n = self.size();
        if initial.size() != n {
            return Err(domain(format!("state has N={} but decomposition has N={n}", initial.size())));
        }
        let ph = Phases::new(n);
        let along_y = dft_axis(&ph, initial.amplitudes(), false, true);
        let mut hat = dft_axis(&ph, &along_y, true, true);
        hat.par_chunks_mut(4).enumerate().for_each(|(i, spin)| {
            let u = self.block_propagator(i / n, i % n, t);
            let v = u * BlockVector::from([spin[0], spin[1], spin[2], spin[3]]);
            spin.copy_from_slice(v.as_slice());
        });
        let back_x = dft_axis(&ph, &hat, true, false);
        let amps = dft_axis(&ph, &back_x, false, false);
        Ok(WalkState::from_parts_unchecked(self.lattice(), amps, initial.time() + t))
    }

    /// Amplitude at `(x, y)` after `t` steps for a walker that started at
    /// `source` with chirality weights `spinor`. Costs `O(N²)`.
    pub fn localized_amplitude(&self, source: (i64, i64), spinor: &Spinor, x: i64, y: i64, t: u64) -> Result<Spinor> {
        let lat = self.lattice();
        lat.check_site(source.0, source.1)?;
        lat.check_site(x, y)?;
        let n = self.size();
        let ph = Phases::new(n);
        let s = BlockVector::from(*spinor);
        let (dx, dy) = (x - source.0, y - source.1);
        let mut acc = BlockVector::zeros();
        for a in 0..n {
            for b in 0..n {
                let phase = ph.pow(a as i64 * dx + b as i64 * dy);
                acc += self.block_propagator(a, b, t) * s * phase;
            }
        }
        let scale = 1.0 / (n * n) as f64;
        Ok([acc[0] * scale, acc[1] * scale, acc[2] * scale, acc[3] * scale])
    }
}
