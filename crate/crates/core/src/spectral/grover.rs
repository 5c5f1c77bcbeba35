//! Closed-form eigenpairs of the Grover-coin momentum blocks, and the orbits
//! of momenta that share the non-trivial eigenvalues.
//!
//! With `ξ_j = 2πj/N` and `c = cos ξ_n + cos ξ_m` the spectrum of `H_{n,m}` is
//! `{−1, 1, λ₃, λ₄}` where `λ₃,₄ = (−c ∓ i√(4 − c²))/2` (so `Im λ₃ ≤ 0`);
//! on the diagonal `n = m` this is `{−1, 1, −ωⁿ, −ω⁻ⁿ}`. Index `k` always
//! refers to this ordering: `k = 0` is the −1 eigenvalue, `k = 1` the +1.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{BlockVector, Phases};
use crate::error::{domain, Result};
use crate::state::Lattice;

fn xi(j: usize, size: usize) -> f64 {
    2.0 * PI * j as f64 / size as f64
}

fn check(n: usize, m: usize, size: usize) -> Result<()> {
    Lattice::new(size)?;
    if n >= size || m >= size {
        return Err(domain(format!("momenta ({n},{m}) must lie in 0..{size}")));
    }
    Ok(())
}

/// The four Grover eigenvalues of `H_{n,m}` in the fixed order described above.
pub fn grover_eigenvalues(n: usize, m: usize, size: usize) -> Result<[Complex64; 4]> {
    check(n, m, size)?;
    Ok(eigenvalues_unchecked(n, m, size))
}

pub(crate) fn eigenvalues_unchecked(n: usize, m: usize, size: usize) -> [Complex64; 4] {
    let one = Complex64::new(1.0, 0.0);
    if n == m {
        let w = Complex64::from_polar(1.0, xi(n, size));
        return [-one, one, -w, -w.conj()];
    }
    let c = xi(n, size).cos() + xi(m, size).cos();
    let s = (4.0 - c * c).max(0.0).sqrt();
    [-one, one, Complex64::new(-c / 2.0, -s / 2.0), Complex64::new(-c / 2.0, s / 2.0)]
}

/// Unit eigenvectors matching [`grover_eigenvalues`] index by index.
pub fn grover_eigenvectors(n: usize, m: usize, size: usize) -> Result<[BlockVector; 4]> {
    check(n, m, size)?;
    Ok(eigenvectors_unchecked(n, m, size))
}

fn unit(v: [Complex64; 4]) -> BlockVector {
    let v = BlockVector::from(v);
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

// Vectors for the block (0, j), j > 0, with b = ω^{−j}.
fn axis_vectors(b: Complex64, lambdas: &[Complex64; 4]) -> [[Complex64; 4]; 4] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut out = [[one, -one, zero, zero]; 4];
    for k in 1..4 {
        let l = lambdas[k];
        out[k] = [l + b, l + b, b * l + b, 2.0 * l * l + b * l - b];
    }
    out
}

pub(crate) fn eigenvectors_unchecked(n: usize, m: usize, size: usize) -> [BlockVector; 4] {
    let ph = Phases::new(size);
    let lambdas = eigenvalues_unchecked(n, m, size);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let raw: [[Complex64; 4]; 4] = if n == m {
        let a = ph.pow(-(n as i64));
        [[-a, one, -a, one], [a, one, a, one], [zero, -one, zero, one], [-one, zero, one, zero]]
    } else if n == 0 {
        axis_vectors(ph.pow(-(m as i64)), &lambdas)
    } else if m == 0 {
        // the (0, n) vectors with the horizontal and vertical pairs exchanged
        axis_vectors(ph.pow(-(n as i64)), &lambdas).map(|v| [v[2], v[3], v[0], v[1]])
    } else if n + m == size {
        let ai = ph.pow(n as i64);
        let p = [zero, -one, one, zero]; // eigenvalue −ωⁿ
        let q = [-one, zero, zero, one]; // eigenvalue −ω⁻ⁿ
        let (v3, v4) = if xi(n, size).sin() > 0.0 { (p, q) } else { (q, p) };
        [[one, -ai, -ai, one], [one, ai, ai, one], v3, v4]
    } else {
        let a = ph.pow(-(n as i64));
        let b = ph.pow(-(m as i64));
        lambdas.map(|l| {
            let l2 = l * l;
            [
                a * a * l2 + (a + a * a * b) * l + a * b,
                l2 + (a + b) * l + a * b,
                a * b * l2 + (b + a * a * b) * l + a * b,
                2.0 * a * l2 * l + (1.0 + a * a + a * b) * l2 - a * b,
            ]
        })
    };
    raw.map(unit)
}

/// Shape of a momentum orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    Axis,
    Diagonal,
    Generic,
}

/// Momenta whose blocks share the non-trivial eigenvalues of a representative.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyClass {
    pub representative: (usize, usize),
    pub kind: OrbitKind,
    /// Deduplicated, representative first.
    pub members: Vec<(usize, usize)>,
    /// `λ₃`, `λ₄` of the representative.
    pub shared: [Complex64; 2],
}

impl DegeneracyClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, nm: (usize, usize)) -> bool {
        self.members.contains(&nm)
    }
}

/// Orbit of `(n, m)` under `j ↦ N − j` on either index and the swap `n ↔ m`,
/// taken in the three shapes
///
/// - `m = 0`: `{(n,0), (0,n), (N−n,0), (0,N−n)}`;
/// - `n = m`: `{(n,n), (n,N−n)}`;
/// - otherwise the eight sign/swap images of `(n, m)`.
///
/// An input `(0, m)` is treated as its axis partner `(m, 0)`. `(0, 0)` has no
/// orbit; its block stands alone.
pub fn degeneracy_class(n: usize, m: usize, size: usize) -> Result<DegeneracyClass> {
    check(n, m, size)?;
    let (n, m) = match (n, m) {
        (0, 0) => return Err(domain("the (0,0) block has no degeneracy orbit")),
        (0, m) => (m, 0),
        nm => nm,
    };
    let r = |j: usize| (size - j) % size;
    let (kind, candidates) = if m == 0 {
        (OrbitKind::Axis, vec![(n, 0), (0, n), (r(n), 0), (0, r(n))])
    } else if n == m {
        (OrbitKind::Diagonal, vec![(n, n), (n, r(n))])
    } else {
        (
            OrbitKind::Generic,
            vec![(n, m), (n, r(m)), (r(n), m), (r(n), r(m)), (m, n), (m, r(n)), (r(m), n), (r(m), r(n))],
        )
    };
    let mut members: Vec<(usize, usize)> = Vec::with_capacity(candidates.len());
    for c in candidates {
        if !members.contains(&c) {
            members.push(c);
        }
    }
    let ev = eigenvalues_unchecked(n, m, size);
    Ok(DegeneracyClass { representative: (n, m), kind, members, shared: [ev[2], ev[3]] })
}

/// Representatives whose orbits partition all non-zero momenta:
/// `(n,0)` for `1 ≤ n ≤ (N−1)/2`, `(n,n)` for `1 ≤ n ≤ N−1`, and `(n,m)` for
/// `1 ≤ n < m ≤ (N−1)/2`.
pub fn class_representatives(size: usize) -> Vec<(usize, usize)> {
    let h = (size - 1) / 2;
    let mut reps: Vec<(usize, usize)> = (1..=h).map(|n| (n, 0)).collect();
    reps.extend((1..size).map(|n| (n, n)));
    for n in 1..h {
        reps.extend((n + 1..=h).map(|m| (n, m)));
    }
    reps
}
