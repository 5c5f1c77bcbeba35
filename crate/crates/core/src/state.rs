//! Wavefunction on the periodic N×N lattice.
//!
//! Coordinates are centered: `x, y ∈ {−(N−1)/2, …, (N−1)/2}`.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coin::Chirality;
use crate::error::{domain, Result};

/// Allowed deviation of the total norm from one.
pub const NORM_TOL: f64 = 1e-10;
/// Allowed deviation of `Σ|weight|²` from one for an [`InitialSpec`].
pub const SPEC_NORM_TOL: f64 = 1e-12;

pub type Spinor = [Complex64; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Geometry of an odd-sized torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    size: usize,
}

impl Lattice {
    pub fn new(size: usize) -> Result<Self> {
        if size < 3 || size % 2 == 0 {
            return Err(domain(format!("lattice size must be odd and at least 3, got {size}")));
        }
        Ok(Lattice { size })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    /// `(N−1)/2`, the largest coordinate.
    #[inline]
    pub fn half(&self) -> i64 {
        (self.size as i64 - 1) / 2
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.size * self.size
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        let h = self.half();
        (-h..=h).contains(&x) && (-h..=h).contains(&y)
    }

    /// Maps a centered coordinate to `0..N`.
    #[inline]
    pub fn offset(&self, c: i64) -> usize {
        (c + self.half()) as usize
    }

    /// Inverse of [`Lattice::offset`].
    #[inline]
    pub fn coord(&self, i: usize) -> i64 {
        i as i64 - self.half()
    }

    /// Wraps any integer coordinate onto the centered range.
    pub fn wrap(&self, c: i64) -> i64 {
        let n = self.size as i64;
        (c + self.half()).rem_euclid(n) - self.half()
    }

    /// Domain error unless `(x, y)` lies on the lattice.
    pub fn check_site(&self, x: i64, y: i64) -> Result<()> {
        if self.contains(x, y) {
            Ok(())
        } else {
            let h = self.half();
            Err(domain(format!("site ({x},{y}) outside lattice range [-{h},{h}]²")))
        }
    }

    #[inline]
    pub(crate) fn site_index(&self, x: i64, y: i64) -> usize {
        self.offset(x) * self.size + self.offset(y)
    }
}

/// Complex weights on `(R, L, U, D)` at a single starting site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialSpec {
    weights: Spinor,
}

impl InitialSpec {
    pub fn new(weights: Spinor) -> Result<Self> {
        let norm = spinor_norm_sqr(&weights);
        if !norm.is_finite() || (norm - 1.0).abs() > SPEC_NORM_TOL {
            return Err(domain(format!("initial weights have Σ|w|² = {norm}, expected 1")));
        }
        Ok(InitialSpec { weights })
    }

    /// Rescales arbitrary nonzero weights to unit norm; also returns the norm²
    /// that was supplied.
    pub fn normalized(weights: Spinor) -> Result<(Self, f64)> {
        let norm = spinor_norm_sqr(&weights);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(domain("initial weights must not all vanish"));
        }
        let scale = 1.0 / norm.sqrt();
        let weights = weights.map(|w| w * scale);
        Ok((InitialSpec { weights }, norm))
    }

    pub fn pure(chirality: Chirality) -> Self {
        let mut weights = [ZERO; 4];
        weights[chirality.index()] = Complex64::new(1.0, 0.0);
        InitialSpec { weights }
    }

    /// `α = β = −γ = −ζ = e^{iθ}/2`; the family whose return probability decays.
    pub fn delocalizing(theta: f64) -> Self {
        let a = Complex64::from_polar(0.5, theta);
        InitialSpec { weights: [a, a, -a, -a] }
    }

    /// `(α, β, 0, 0)` with real `α` and `β = √(1−α²)`.
    pub fn two_component(alpha: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&alpha) {
            return Err(domain(format!("alpha={alpha} must lie in [-1,1]")));
        }
        let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
        Self::new([Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0), ZERO, ZERO])
    }

    #[inline]
    pub fn weights(&self) -> &Spinor {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, c: Chirality) -> Complex64 {
        self.weights[c.index()]
    }
}

pub(crate) fn spinor_norm_sqr(s: &Spinor) -> f64 {
    s.iter().map(|z| z.norm_sqr()).sum()
}

/// Amplitude field over `(x, y, chirality)` plus the step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    lattice: Lattice,
    amps: Vec<Complex64>,
    time: u64,
}

impl WalkState {
    /// Amplitude one at `(x, y, chirality)`.
    pub fn pure_state(size: usize, chirality: Chirality, x: i64, y: i64) -> Result<Self> {
        Self::localized(size, x, y, &InitialSpec::pure(chirality))
    }

    /// `spec`'s weights placed at the origin.
    pub fn origin_superposition(size: usize, spec: &InitialSpec) -> Result<Self> {
        Self::localized(size, 0, 0, spec)
    }

    pub fn localized(size: usize, x: i64, y: i64, spec: &InitialSpec) -> Result<Self> {
        let lattice = Lattice::new(size)?;
        lattice.check_site(x, y)?;
        let mut amps = vec![ZERO; 4 * lattice.sites()];
        let base = 4 * lattice.site_index(x, y);
        amps[base..base + 4].copy_from_slice(spec.weights());
        Ok(WalkState { lattice, amps, time: 0 })
    }

    /// Builds a state from a full amplitude vector laid out as
    /// `[(x_offset * N + y_offset) * 4 + chirality]`.
    pub fn from_amplitudes(size: usize, amps: Vec<Complex64>, time: u64) -> Result<Self> {
        let lattice = Lattice::new(size)?;
        if amps.len() != 4 * lattice.sites() {
            return Err(domain(format!(
                "expected {} amplitudes for N={size}, got {}",
                4 * lattice.sites(),
                amps.len()
            )));
        }
        let state = WalkState { lattice, amps, time };
        let norm = state.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(domain(format!("state norm² = {norm}, expected 1")));
        }
        Ok(state)
    }

    pub(crate) fn from_parts_unchecked(lattice: Lattice, amps: Vec<Complex64>, time: u64) -> Self {
        debug_assert_eq!(amps.len(), 4 * lattice.sites());
        WalkState { lattice, amps, time }
    }

    #[inline]
    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.lattice.size()
    }

    #[inline]
    pub fn time(&self) -> u64 {
        self.time
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn amplitude(&self, x: i64, y: i64, c: Chirality) -> Result<Complex64> {
        self.lattice.check_site(x, y)?;
        Ok(self.amps[4 * self.lattice.site_index(x, y) + c.index()])
    }

    pub fn spinor(&self, x: i64, y: i64) -> Result<Spinor> {
        self.lattice.check_site(x, y)?;
        let base = 4 * self.lattice.site_index(x, y);
        let mut s = [ZERO; 4];
        s.copy_from_slice(&self.amps[base..base + 4]);
        Ok(s)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Σ_S |ψ(x, y, S)|²`.
    pub fn probability_at(&self, x: i64, y: i64) -> Result<f64> {
        Ok(spinor_norm_sqr(&self.spinor(x, y)?))
    }

    /// Per-chirality probabilities at a site.
    pub fn chirality_probabilities(&self, x: i64, y: i64) -> Result<[f64; 4]> {
        Ok(self.spinor(x, y)?.map(|z| z.norm_sqr()))
    }

    pub fn probability_grid(&self) -> ProbabilityGrid {
        let values = self.amps.chunks_exact(4).map(|s| s.iter().map(|z| z.norm_sqr()).sum()).collect();
        ProbabilityGrid { lattice: self.lattice, time: self.time, values }
    }

    /// If every amplitude outside one site vanishes, returns that site and its spinor.
    pub fn single_site_support(&self) -> Option<((i64, i64), Spinor)> {
        let n = self.lattice.size();
        let mut found = None;
        for (site, chunk) in self.amps.chunks_exact(4).enumerate() {
            if chunk.iter().any(|z| *z != ZERO) {
                if found.is_some() {
                    return None;
                }
                let x = self.lattice.coord(site / n);
                let y = self.lattice.coord(site % n);
                let mut s = [ZERO; 4];
                s.copy_from_slice(chunk);
                found = Some(((x, y), s));
            }
        }
        found
    }

    /// Cyclic translation by `(dx, dy)`.
    pub fn translated(&self, dx: i64, dy: i64) -> WalkState {
        let lat = self.lattice;
        let n = lat.size();
        let mut amps = vec![ZERO; self.amps.len()];
        for ix in 0..n {
            for iy in 0..n {
                let tx = lat.offset(lat.wrap(lat.coord(ix) + dx));
                let ty = lat.offset(lat.wrap(lat.coord(iy) + dy));
                let src = 4 * (ix * n + iy);
                let dst = 4 * (tx * n + ty);
                amps[dst..dst + 4].copy_from_slice(&self.amps[src..src + 4]);
            }
        }
        WalkState { lattice: lat, amps, time: self.time }
    }

    /// Largest per-amplitude distance to another state of the same size.
    pub fn max_abs_diff(&self, other: &WalkState) -> f64 {
        assert_eq!(self.size(), other.size(), "states live on different lattices");
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Site probabilities of a state at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityGrid {
    lattice: Lattice,
    time: u64,
    values: Vec<f64>,
}

/// Metadata carried by the JSON grid export.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridMetadata {
    pub coin: String,
    pub initial: String,
}

#[derive(Serialize)]
struct GridJson<'a> {
    coin: &'a str,
    #[serde(rename = "N")]
    n: usize,
    t: u64,
    initial: &'a str,
    x_min: i64,
    x_max: i64,
    /// `p[x - x_min][y - x_min]`
    p: Vec<&'a [f64]>,
}

impl ProbabilityGrid {
    pub fn size(&self) -> usize {
        self.lattice.size()
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn get(&self, x: i64, y: i64) -> Result<f64> {
        self.lattice.check_site(x, y)?;
        Ok(self.values[self.lattice.site_index(x, y)])
    }

    pub fn origin(&self) -> f64 {
        self.values[self.lattice.site_index(0, 0)]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `(x, y, p)` for every site, x-major in ascending coordinates.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, f64)> + '_ {
        let n = self.lattice.size();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.lattice.coord(i / n), self.lattice.coord(i % n), p))
    }

    /// Largest value and the first site (in [`ProbabilityGrid::iter`] order) attaining it.
    pub fn max(&self) -> (i64, i64, f64) {
        self.iter().fold((0, 0, f64::NEG_INFINITY), |best, cur| if cur.2 > best.2 { cur } else { best })
    }

    pub fn max_abs_diff(&self, other: &ProbabilityGrid) -> f64 {
        assert_eq!(self.size(), other.size(), "grids have different sizes");
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,y,p")?;
        for (x, y, p) in self.iter() {
            writeln!(out, "{x},{y},{p:e}")?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W, meta: &GridMetadata) -> Result<()> {
        let n = self.lattice.size();
        let doc = GridJson {
            coin: &meta.coin,
            n,
            t: self.time,
            initial: &meta.initial,
            x_min: -self.lattice.half(),
            x_max: self.lattice.half(),
            p: self.values.chunks_exact(n).collect(),
        };
        serde_json::to_writer_pretty(out, &doc)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_rejects_even_and_tiny() {
        assert!(Lattice::new(4).is_err());
        assert!(Lattice::new(1).is_err());
        assert!(Lattice::new(0).is_err());
        assert!(Lattice::new(3).is_ok());
    }

    #[test]
    fn wrap_is_centered() {
        let lat = Lattice::new(5).unwrap();
        assert_eq!(lat.wrap(3), -2);
        assert_eq!(lat.wrap(-3), 2);
        assert_eq!(lat.wrap(12), 2);
        assert_eq!(lat.wrap(0), 0);
    }

    #[test]
    fn pure_state_basics() {
        let s = WalkState::pure_state(5, Chirality::R, 0, 0).unwrap();
        assert_eq!(s.norm_sqr(), 1.0);
        assert_eq!(s.amplitudes().iter().filter(|z| **z != ZERO).count(), 1);
        assert_eq!(s.probability_at(0, 0).unwrap(), 1.0);
        assert_eq!(s.probability_at(1, -2).unwrap(), 0.0);
        assert_eq!(s.time(), 0);
        assert!(WalkState::pure_state(51, Chirality::R, 0, 0).is_ok());
    }

    #[test]
    fn pure_state_errors() {
        assert!(WalkState::pure_state(4, Chirality::R, 0, 0).is_err());
        assert!(WalkState::pure_state(5, Chirality::R, 3, 0).is_err());
        let s = WalkState::pure_state(5, Chirality::U, 2, -2).unwrap();
        assert!(s.probability_at(0, 3).is_err());
    }

    #[test]
    fn origin_superposition_reduces_to_pure() {
        let spec = InitialSpec::new([Complex64::new(1.0, 0.0), ZERO, ZERO, ZERO]).unwrap();
        assert_eq!(
            WalkState::origin_superposition(7, &spec).unwrap(),
            WalkState::pure_state(7, Chirality::R, 0, 0).unwrap()
        );
    }

    #[test]
    fn unnormalized_spec_rejected() {
        let one = Complex64::new(1.0, 0.0);
        assert!(InitialSpec::new([one, one, ZERO, ZERO]).is_err());
        let (spec, norm) = InitialSpec::normalized([one, one, ZERO, ZERO]).unwrap();
        assert_eq!(norm, 2.0);
        assert!((spinor_norm_sqr(spec.weights()) - 1.0).abs() < 1e-15);
        assert!(InitialSpec::normalized([ZERO; 4]).is_err());
    }

    #[test]
    fn delocalizing_spec_is_normalized() {
        for theta in [0.0, 1.0 / 3.0, 1.0] {
            let spec = InitialSpec::delocalizing(theta);
            assert!(InitialSpec::new(*spec.weights()).is_ok());
            let s = WalkState::origin_superposition(51, &spec).unwrap();
            assert!((s.probability_at(0, 0).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn grid_and_exports() {
        let s = WalkState::pure_state(3, Chirality::D, 1, -1).unwrap();
        let g = s.probability_grid();
        assert_eq!(g.total(), 1.0);
        assert_eq!(g.max(), (1, -1, 1.0));
        let mut csv = Vec::new();
        g.write_csv(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "x,y,p");
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[1], "-1,-1,0e0");
        assert!(lines.contains(&"1,-1,1e0"));

        let mut json = Vec::new();
        let meta = GridMetadata { coin: "grover".into(), initial: "D".into() };
        g.write_json(&mut json, &meta).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(v["N"], 3);
        assert_eq!(v["coin"], "grover");
        assert_eq!(v["p"][2][0], 1.0);
    }

    #[test]
    fn single_site_support_detection() {
        let s = WalkState::pure_state(5, Chirality::L, -1, 2).unwrap();
        let ((x, y), sp) = s.single_site_support().unwrap();
        assert_eq!((x, y), (-1, 2));
        assert_eq!(sp[1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn translation_wraps() {
        let s = WalkState::pure_state(5, Chirality::R, 2, 0).unwrap();
        let t = s.translated(1, -3);
        assert_eq!(t.probability_at(-2, 2).unwrap(), 1.0);
    }

    #[test]
    fn from_amplitudes_checks_norm() {
        let mut amps = vec![ZERO; 36];
        assert!(WalkState::from_amplitudes(3, amps.clone(), 0).is_err());
        amps[5] = Complex64::new(0.0, 1.0);
        assert!(WalkState::from_amplitudes(3, amps, 4).is_ok());
    }
}
