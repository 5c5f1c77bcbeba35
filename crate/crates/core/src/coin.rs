//! Coin (chirality) operators.
//!
//! A coin is a 4×4 unitary acting on the chirality space, with basis order
//! `(R, L, U, D)`. Row `i` of the coin produces the amplitude that moves in
//! direction `i` on the next step.

use std::fmt;
use std::path::Path;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result, WalkError};

/// Residual allowed for the built-in coins.
pub const BUILTIN_UNITARITY_TOL: f64 = 1e-12;
/// Residual allowed for user-supplied coins (decimal-entered matrices).
pub const USER_UNITARITY_TOL: f64 = 1e-9;

pub type CoinMatrix = Matrix4<Complex64>;

/// Internal degree of freedom selecting the shift direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Chirality {
    R,
    L,
    U,
    D,
}

impl Chirality {
    pub const ALL: [Chirality; 4] = [Chirality::R, Chirality::L, Chirality::U, Chirality::D];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Chirality::R => "R",
            Chirality::L => "L",
            Chirality::U => "U",
            Chirality::D => "D",
        }
    }
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Chirality {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "R" | "r" => Ok(Chirality::R),
            "L" | "l" => Ok(Chirality::L),
            "U" | "u" => Ok(Chirality::U),
            "D" | "d" => Ok(Chirality::D),
            other => Err(domain(format!("unknown chirality '{other}'"))),
        }
    }
}

/// A validated 4×4 unitary coin with a short label.
#[derive(Debug, Clone, PartialEq)]
pub struct Coin {
    entries: CoinMatrix,
    label: String,
}

fn real(rows: [[f64; 4]; 4]) -> CoinMatrix {
    CoinMatrix::from_fn(|i, j| Complex64::new(rows[i][j], 0.0))
}

impl Coin {
    fn builtin(entries: CoinMatrix, label: impl Into<String>) -> Self {
        let coin = Coin { entries, label: label.into() };
        debug_assert!(coin.unitarity_residual() < BUILTIN_UNITARITY_TOL);
        coin
    }

    /// The Grover (diffusion) coin: −1/2 on the diagonal, +1/2 elsewhere.
    pub fn grover() -> Self {
        let mut rows = [[0.5; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = -0.5;
        }
        Self::builtin(real(rows), "grover")
    }

    /// Comparison coin with entries in {0, ±1/√2}; spreads without a central peak.
    pub fn a1() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::builtin(
            real([
                [0.0, 0.0, -s, s],
                [0.0, 0.0, s, s],
                [s, -s, 0.0, 0.0],
                [s, s, 0.0, 0.0],
            ]),
            "a1",
        )
    }

    /// Comparison coin with entries in {0, ±1/√3}.
    pub fn a2() -> Self {
        let s = 1.0 / 3f64.sqrt();
        Self::builtin(
            real([
                [-s, 0.0, s, s],
                [0.0, -s, -s, s],
                [s, -s, s, 0.0],
                [s, s, 0.0, s],
            ]),
            "a2",
        )
    }

    /// Real symmetric one-parameter family with `q = 1 − p`. Every member keeps
    /// ±1 in the spectrum of every momentum block; `p = 1/2` is the Grover coin.
    pub fn symmetric_family(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(domain(format!("symmetric family parameter p={p} must lie in (0,1)")));
        }
        let q = 1.0 - p;
        let r = (p * q).sqrt();
        Ok(Self::builtin(
            real([
                [-p, q, r, r],
                [q, -p, r, r],
                [r, r, -q, p],
                [r, r, p, -q],
            ]),
            format!("a4:{p}"),
        ))
    }

    /// Wraps caller-supplied entries after checking unitarity at [`USER_UNITARITY_TOL`].
    pub fn custom(entries: CoinMatrix, label: impl Into<String>) -> Result<Self> {
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(domain("coin entries must be finite"));
        }
        let coin = Coin { entries, label: label.into() };
        let residual = coin.unitarity_residual();
        if residual >= USER_UNITARITY_TOL {
            return Err(WalkError::NotUnitary { residual });
        }
        Ok(coin)
    }

    /// Parses a coin from JSON: a 4×4 row-major array of `[re, im]` pairs.
    pub fn from_json_str(json: &str, label: impl Into<String>) -> Result<Self> {
        let rows: [[[f64; 2]; 4]; 4] = serde_json::from_str(json)?;
        let entries = CoinMatrix::from_fn(|i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
        Self::custom(entries, label)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".to_owned());
        Self::from_json_str(&text, label)
    }

    pub fn to_json_string(&self) -> String {
        let rows: Vec<Vec<[f64; 2]>> = (0..4)
            .map(|i| (0..4).map(|j| [self.entries[(i, j)].re, self.entries[(i, j)].im]).collect())
            .collect();
        serde_json::to_string(&rows).expect("plain arrays always serialize")
    }

    #[inline]
    pub fn entries(&self) -> &CoinMatrix {
        &self.entries
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `max |C†C − I|` over all entries.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.entries.adjoint() * self.entries;
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn is_real_symmetric(&self) -> bool {
        self.is_real() && (0..4).all(|i| (0..4).all(|j| self.entries[(i, j)] == self.entries[(j, i)]))
    }
}
