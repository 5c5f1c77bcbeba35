//! Direct time evolution: coin followed by the chirality-conditioned shift.
//!
//! One step maps
//!
//! ```text
//! R(x, y) ← row_R(A) · ψ(x−1, y)      L(x, y) ← row_L(A) · ψ(x+1, y)
//! U(x, y) ← row_U(A) · ψ(x, y−1)      D(x, y) ← row_D(A) · ψ(x, y+1)
//! ```
//!
//! with periodic wraparound. Each output site reads only old values, so rows
//! are processed in parallel into a second buffer and the result does not
//! depend on how the rows are partitioned.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coin::Coin;
use crate::state::{Lattice, WalkState};

// Below this many sites the rayon fork/join overhead dominates.
const PARALLEL_MIN_SITES: usize = 1024;

/// Reusable evolution kernel for one coin on one lattice size.
#[derive(Debug, Clone)]
pub struct Stepper {
    lattice: Lattice,
    rows: [[Complex64; 4]; 4],
    /// `prev[i] = (i − 1) mod N`
    prev: Vec<usize>,
    /// `next[i] = (i + 1) mod N`
    next: Vec<usize>,
}

#[inline(always)]
fn dot(row: &[Complex64; 4], v: &[Complex64]) -> Complex64 {
    row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3]
}

impl Stepper {
    pub fn new(coin: &Coin, lattice: Lattice) -> Self {
        let n = lattice.size();
        let mut rows = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, a) in row.iter_mut().enumerate() {
                *a = coin.entry(i, j);
            }
        }
        Stepper {
            lattice,
            rows,
            prev: (0..n).map(|i| (i + n - 1) % n).collect(),
            next: (0..n).map(|i| (i + 1) % n).collect(),
        }
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    fn fill_row(&self, ix: usize, src: &[Complex64], out: &mut [Complex64]) {
        let n = self.lattice.size();
        let row_left = &src[4 * n * self.prev[ix]..4 * n * (self.prev[ix] + 1)];
        let row_right = &src[4 * n * self.next[ix]..4 * n * (self.next[ix] + 1)];
        let row_here = &src[4 * n * ix..4 * n * (ix + 1)];
        for iy in 0..n {
            let o = &mut out[4 * iy..4 * iy + 4];
            o[0] = dot(&self.rows[0], &row_left[4 * iy..4 * iy + 4]);
            o[1] = dot(&self.rows[1], &row_right[4 * iy..4 * iy + 4]);
            let down = 4 * self.prev[iy];
            o[2] = dot(&self.rows[2], &row_here[down..down + 4]);
            let up = 4 * self.next[iy];
            o[3] = dot(&self.rows[3], &row_here[up..up + 4]);
        }
    }

    /// Writes one step of `src` into `dst`. Both hold `4 N²` amplitudes.
    pub fn apply(&self, src: &[Complex64], dst: &mut [Complex64]) {
        let n = self.lattice.size();
        assert_eq!(src.len(), 4 * n * n);
        assert_eq!(dst.len(), src.len());
        if self.lattice.sites() >= PARALLEL_MIN_SITES {
            dst.par_chunks_mut(4 * n).enumerate().for_each(|(ix, out)| self.fill_row(ix, src, out));
        } else {
            dst.chunks_mut(4 * n).enumerate().for_each(|(ix, out)| self.fill_row(ix, src, out));
        }
    }
}

/// Double-buffered trajectory of a single walk.
#[derive(Debug, Clone)]
pub struct Evolver {
    stepper: Stepper,
    current: Vec<Complex64>,
    scratch: Vec<Complex64>,
    time: u64,
}

impl Evolver {
    pub fn new(initial: &WalkState, coin: &Coin) -> Self {
        let lattice = initial.lattice();
        Evolver {
            stepper: Stepper::new(coin, lattice),
            current: initial.amplitudes().to_vec(),
            scratch: vec![Complex64::new(0.0, 0.0); initial.amplitudes().len()],
            time: initial.time(),
        }
    }

    pub fn advance(&mut self) {
        self.stepper.apply(&self.current, &mut self.scratch);
        std::mem::swap(&mut self.current, &mut self.scratch);
        self.time += 1;
    }

    pub fn advance_by(&mut self, steps: u64) {
        for _ in 0..steps {
            self.advance();
        }
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.current
    }

    /// Amplitudes of the four chiralities at a centered site.
    pub fn spinor_at(&self, x: i64, y: i64) -> [Complex64; 4] {
        let base = 4 * self.stepper.lattice().site_index(x, y);
        [self.current[base], self.current[base + 1], self.current[base + 2], self.current[base + 3]]
    }

    pub fn state(&self) -> WalkState {
        WalkState::from_parts_unchecked(self.stepper.lattice(), self.current.clone(), self.time)
    }

    pub fn into_state(self) -> WalkState {
        WalkState::from_parts_unchecked(self.stepper.lattice(), self.current, self.time)
    }
}

/// One step of the walk.
pub fn step(state: &WalkState, coin: &Coin) -> WalkState {
    evolve(state, coin, 1)
}

/// `steps` applications of [`step`]; `steps = 0` returns a copy of the input.
pub fn evolve(state: &WalkState, coin: &Coin, steps: u64) -> WalkState {
    if steps == 0 {
        return state.clone();
    }
    let mut ev = Evolver::new(state, coin);
    ev.advance_by(steps);
    ev.into_state()
}
