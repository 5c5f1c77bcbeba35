//! Long-time averages of the probability of finding the walker back at its
//! starting site.
//!
//! For an origin-localized start the amplitude there is a finite sum
//! `Σ_λ g_λ λᵗ` over distinct eigenvalues, so the Cesàro average of its
//! squared modulus is `Σ_λ |g_λ|²`: cross terms between distinct eigenvalues
//! average out. Restricting to even (odd) times keeps cross terms between
//! `λ` and `−λ`, so the grouping there is by `λ²`.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::coin::{Chirality, Coin};
use crate::error::{domain, Result, WalkError};
use crate::evolve::Evolver;
use crate::spectral::cluster::cluster_indices;
use crate::spectral::{OriginExpansion, SpectralDecomposition, CLUSTER_TOL};
use crate::state::{InitialSpec, Lattice, Spinor, WalkState};

/// Which time steps enter the average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    All,
    Even,
    Odd,
}

impl Parity {
    pub fn admits(self, t: u64) -> bool {
        match self {
            Parity::All => true,
            Parity::Even => t % 2 == 0,
            Parity::Odd => t % 2 == 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::All => "all",
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Parity {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Parity::All),
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(domain(format!("unknown parity '{other}' (expected all|even|odd)"))),
        }
    }
}

/// How a report's numbers were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Method {
    Empirical { steps: u64 },
    ExactSpectral,
    ClosedForm,
    Limit,
}

fn serialize_per_chirality<S: Serializer>(v: &[Option<f64>; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(None)?;
    for c in Chirality::ALL {
        if let Some(p) = v[c.index()] {
            map.serialize_entry(c.as_str(), &p)?;
        }
    }
    map.end()
}

/// Time-averaged probabilities at one site, split by chirality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeAverageReport {
    pub coin: String,
    /// `None` for the infinite-lattice limit.
    #[serde(rename = "N")]
    pub size: Option<usize>,
    /// Starting weights on `(R, L, U, D)`, when the start is a single site.
    pub initial: Option<Spinor>,
    pub site: (i64, i64),
    pub parity: Parity,
    pub method: Method,
    #[serde(serialize_with = "serialize_per_chirality")]
    pub per_chirality: [Option<f64>; 4],
    /// Sum over chiralities; `None` unless all four are known.
    pub total: Option<f64>,
}

impl TimeAverageReport {
    fn complete(
        coin: &str,
        size: Option<usize>,
        initial: Option<Spinor>,
        site: (i64, i64),
        parity: Parity,
        method: Method,
        values: [f64; 4],
    ) -> Self {
        TimeAverageReport {
            coin: coin.to_owned(),
            size,
            initial,
            site,
            parity,
            method,
            per_chirality: values.map(Some),
            total: Some(values.iter().sum()),
        }
    }

    pub fn get(&self, c: Chirality) -> Option<f64> {
        self.per_chirality[c.index()]
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}

/// Finite-`T` average over `t = 0 … T−1` (restricted to `parity`; restricted
/// averages divide by the number of admitted times).
pub fn empirical_time_average(
    initial: &WalkState,
    coin: &Coin,
    steps: u64,
    site: (i64, i64),
    parity: Parity,
) -> Result<TimeAverageReport> {
    if steps == 0 {
        return Err(domain("the averaging window needs at least one step"));
    }
    initial.lattice().check_site(site.0, site.1)?;
    let mut ev = Evolver::new(initial, coin);
    let mut sums = [0.0f64; 4];
    let mut count = 0u64;
    for t in 0..steps {
        if parity.admits(t) {
            let spinor = ev.spinor_at(site.0, site.1);
            for (acc, a) in sums.iter_mut().zip(spinor) {
                *acc += a.norm_sqr();
            }
            count += 1;
        }
        if t + 1 < steps {
            ev.advance();
        }
    }
    if count == 0 {
        return Err(domain(format!("no {parity} times in a window of {steps} steps")));
    }
    let values = sums.map(|s| s / count as f64);
    let start = initial.single_site_support().map(|(_, s)| s);
    Ok(TimeAverageReport::complete(
        coin.label(),
        Some(initial.size()),
        start,
        site,
        parity,
        Method::Empirical { steps },
        values,
    ))
}

/// Infinite-time average at the origin for a walker started there.
pub fn exact_time_average(
    coin: &Coin,
    initial: &InitialSpec,
    size: usize,
    site: (i64, i64),
    parity: Parity,
) -> Result<TimeAverageReport> {
    Lattice::new(size)?.check_site(site.0, site.1)?;
    if site != (0, 0) {
        return Err(WalkError::Unsupported("exact averages are only available at the starting site".into()));
    }
    let decomp = SpectralDecomposition::numeric(coin, size)?;
    Ok(exact_time_average_with(&decomp, initial, parity))
}

/// As [`exact_time_average`] for a general state, which must be supported on
/// the origin alone.
pub fn exact_time_average_for_state(coin: &Coin, initial: &WalkState, parity: Parity) -> Result<TimeAverageReport> {
    match initial.single_site_support() {
        Some(((0, 0), spinor)) => {
            let spec = InitialSpec::new(spinor)?;
            exact_time_average(coin, &spec, initial.size(), (0, 0), parity)
        }
        _ => Err(WalkError::Unsupported("exact averages need a walker started at the origin alone".into())),
    }
}

/// Reuses a prebuilt decomposition.
pub fn exact_time_average_with(
    decomp: &SpectralDecomposition,
    initial: &InitialSpec,
    parity: Parity,
) -> TimeAverageReport {
    let expansion = OriginExpansion::new(decomp, initial);
    let values = parity_averages(&expansion, parity);
    TimeAverageReport::complete(
        decomp.coin_label(),
        Some(decomp.size()),
        Some(*initial.weights()),
        (0, 0),
        parity,
        Method::ExactSpectral,
        values,
    )
}

fn parity_averages(expansion: &OriginExpansion, parity: Parity) -> [f64; 4] {
    let n2 = (expansion.size() * expansion.size()) as f64;
    let terms = expansion.terms();
    let groups: Vec<Vec<usize>> = match parity {
        Parity::All => (0..terms.len()).map(|i| vec![i]).collect(),
        Parity::Even | Parity::Odd => {
            let squares: Vec<Complex64> = terms.iter().map(|t| t.value * t.value).collect();
            cluster_indices(&squares, CLUSTER_TOL)
        }
    };
    let mut out = [0.0; 4];
    for (s, value) in out.iter_mut().enumerate() {
        *value = groups
            .iter()
            .map(|g| {
                let sum: Complex64 = g
                    .iter()
                    .map(|&i| {
                        let c = terms[i].coefficient[s] / n2;
                        if parity == Parity::Odd {
                            c * terms[i].value
                        } else {
                            c
                        }
                    })
                    .sum();
                sum.norm_sqr()
            })
            .sum();
    }
    out
}

/// Grover walk, start `R` at the origin, chirality `R`: the polynomial in `1/N`
/// for the requested parity.
pub fn grover_closed_form(size: usize, parity: Parity) -> Result<f64> {
    Lattice::new(size)?;
    let n = size as f64;
    let tail = -2.0 / n.powi(3) + 5.0 / (4.0 * n.powi(4));
    Ok(match parity {
        Parity::All => 1.0 / 8.0 + 5.0 / (4.0 * n * n) + tail,
        Parity::Even => 1.0 / 4.0 + 3.0 / (2.0 * n * n) + tail,
        Parity::Odd => 1.0 / (n * n) + tail,
    })
}

/// Closed-form report (chirality `R` only).
pub fn grover_closed_form_report(size: usize, parity: Parity) -> Result<TimeAverageReport> {
    let p = grover_closed_form(size, parity)?;
    Ok(TimeAverageReport {
        coin: Coin::grover().label().to_owned(),
        size: Some(size),
        initial: Some(*InitialSpec::pure(Chirality::R).weights()),
        site: (0, 0),
        parity,
        method: Method::ClosedForm,
        per_chirality: [Some(p), None, None, None],
        total: None,
    })
}

fn k_l() -> f64 {
    (1.0 / 8.0 + 2.0 / (PI * PI) - 1.0 / PI).sqrt()
}

fn k_u() -> f64 {
    (1.0 / 8.0 + 1.0 / (2.0 * PI * PI) - 1.0 / (2.0 * PI)).sqrt()
}

/// Grover walk on the infinite lattice: time-averaged probability of chirality
/// `c` at the origin for a start with weights `(α, β, γ, ζ)` there.
pub fn limit_time_average(initial: &InitialSpec, c: Chirality) -> f64 {
    let [a, b, g, z] = *initial.weights();
    // the chirality-R expression with the weights permuted by the lattice symmetry
    let (a, b, g, z) = match c {
        Chirality::R => (a, b, g, z),
        Chirality::L => (b, a, g, z),
        Chirality::U => (g, z, a, b),
        Chirality::D => (z, g, a, b),
    };
    (a / (2.0 * 2f64.sqrt()) - b * k_l() + (g + z) * k_u()).norm_sqr()
}

pub fn limit_report(initial: &InitialSpec) -> TimeAverageReport {
    let values = Chirality::ALL.map(|c| limit_time_average(initial, c));
    TimeAverageReport::complete(
        Coin::grover().label(),
        None,
        Some(*initial.weights()),
        (0, 0),
        Parity::All,
        Method::Limit,
        values,
    )
}

/// Special points of the two-component family `(α, √(1−α²), 0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaExtrema {
    /// Zero of the `R` average.
    pub alpha_min: f64,
    /// `π/√(16 − 8π + 2π²)`. The `R` average is largest at `−alpha_max` on
    /// this branch (`β ≥ 0`); at `+alpha_max` the `L` average vanishes.
    pub alpha_max: f64,
}

pub fn alpha_extrema() -> AlphaExtrema {
    let d = 16.0 - 8.0 * PI + 2.0 * PI * PI;
    AlphaExtrema { alpha_min: (1.0 - PI * PI / d).sqrt(), alpha_max: PI / d.sqrt() }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaSample {
    pub alpha: f64,
    pub p_r: f64,
    pub p_l: f64,
}

/// Limit averages of chiralities `R` and `L` on `samples` evenly spaced `α ∈ [−1, 1]`.
pub fn scan_alpha(samples: usize) -> Result<Vec<AlphaSample>> {
    if samples < 2 {
        return Err(domain("scan needs at least two samples"));
    }
    (0..samples)
        .map(|i| {
            let alpha = (-1.0 + 2.0 * i as f64 / (samples - 1) as f64).clamp(-1.0, 1.0);
            let spec = InitialSpec::two_component(alpha)?;
            Ok(AlphaSample {
                alpha,
                p_r: limit_time_average(&spec, Chirality::R),
                p_l: limit_time_average(&spec, Chirality::L),
            })
        })
        .collect()
}

pub fn write_alpha_csv<W: Write>(rows: &[AlphaSample], mut out: W) -> Result<()> {
    writeln!(out, "alpha,p_R,p_L")?;
    for r in rows {
        writeln!(out, "{:e},{:e},{:e}", r.alpha, r.p_r, r.p_l)?;
    }
    Ok(())
}

/// Verdict of the common-eigenvalue criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub localizing: bool,
    /// Eigenvalues present in every momentum block.
    pub common_eigenvalues: Vec<Complex64>,
    /// Largest cluster multiplicity in the whole spectrum.
    pub max_multiplicity: usize,
}

/// A coin localizes when some eigenvalue appears in every momentum block:
/// its multiplicity then grows like `N²`.
pub fn localization_predictor(coin: &Coin, size: usize) -> Result<Prediction> {
    Ok(localization_predictor_with(&SpectralDecomposition::numeric(coin, size)?))
}

pub fn localization_predictor_with(decomp: &SpectralDecomposition) -> Prediction {
    let mut candidates: Vec<Complex64> = Vec::new();
    for &l in &decomp.block(0, 0).eigenvalues {
        if candidates.iter().all(|c| (c - l).norm() >= CLUSTER_TOL) {
            candidates.push(l);
        }
    }
    let mut common: Vec<Complex64> = candidates
        .into_iter()
        .filter(|&c| decomp.blocks().iter().all(|b| b.eigenvalues.iter().any(|&l| (l - c).norm() < CLUSTER_TOL)))
        .collect();
    common.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    Prediction {
        localizing: !common.is_empty(),
        common_eigenvalues: common,
        max_multiplicity: decomp.clusters().first().map_or(0, |c| c.multiplicity()),
    }
}

/// The two lattice-sum limits entering the infinite-lattice averages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralConstants {
    /// `1/4 − 1/π`
    pub i1: f64,
    /// `1/4 − 1/(2π)`
    pub i2: f64,
    pub i1_quadrature: f64,
    pub i2_quadrature: f64,
}

const QUADRATURE_DEGREE: usize = 100;
const QUADRATURE_TOL: f64 = 1e-6;

fn i1_integrand(x: f64, y: f64) -> f64 {
    let (cx, cy) = (x.cos(), y.cos());
    2.0 * (cx + cy - 2.0 * cx * cy) / (-2.0 + cx + cy)
}

fn i2_integrand(x: f64, y: f64) -> f64 {
    let (sx, sy) = (x.sin(), y.sin());
    8.0 * sx * sx * sy * sy / (2.0 - (2.0 * x).cos() - (2.0 * y).cos())
}

/// Closed forms, cross-checked by tensor Gauss–Legendre quadrature.
pub fn integral_constants() -> Result<IntegralConstants> {
    let gl = GaussLegendre::new(QUADRATURE_DEGREE).map_err(|e| WalkError::Consistency(e.to_string()))?;
    let double = |f: fn(f64, f64) -> f64, hi: f64| gl.integrate(0.0, hi, |x| gl.integrate(0.0, hi, |y| f(x, y)));
    let i1_quadrature = double(i1_integrand, PI) / (8.0 * PI * PI);
    let i2_quadrature = double(i2_integrand, PI / 2.0) / (2.0 * PI * PI);
    let out = IntegralConstants { i1: 0.25 - 1.0 / PI, i2: 0.25 - 0.5 / PI, i1_quadrature, i2_quadrature };
    for (name, exact, quad) in [("I1", out.i1, i1_quadrature), ("I2", out.i2, i2_quadrature)] {
        if (exact - quad).abs() > QUADRATURE_TOL {
            return Err(WalkError::Consistency(format!("{name}: closed form {exact} vs quadrature {quad}")));
        }
    }
    Ok(out)
}

/// Finite-lattice versions of `I₁` and `I₂`: the `L` and `U` components of
/// the −1 eigenprojection of a Grover walker started in `R`, summed over the
/// non-zero momenta and divided by `N²`.
pub fn riemann_sums(size: usize) -> Result<(f64, f64)> {
    Lattice::new(size)?;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for n in 0..size {
        for m in 0..size {
            if n == 0 && m == 0 {
                continue;
            }
            let (x, y) = (2.0 * PI * n as f64 / size as f64, 2.0 * PI * m as f64 / size as f64);
            s1 += i1_integrand(x, y) / 8.0;
            s2 += i2_integrand(x / 2.0, y / 2.0) / 8.0;
        }
    }
    let n2 = (size * size) as f64;
    Ok((s1 / n2, s2 / n2))
}
