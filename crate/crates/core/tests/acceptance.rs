//! Acceptance suite: every criterion at its stated tolerance, one PASS/FAIL
//! line each. Exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use num_complex::Complex64;
use qwalk::spectral::{build_block, grover_eigenvalues, SpectralDecomposition};
use qwalk::timeavg::{
    alpha_extrema, empirical_time_average, exact_time_average_with, limit_time_average,
    localization_predictor_with, Parity,
};
use qwalk::{evolve, Chirality, Coin, InitialSpec, WalkState};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Largest distance after greedily pairing each of `got` with its nearest
/// unused entry of `want`.
fn multiset_distance(got: &[Complex64], want: &[Complex64]) -> f64 {
    let mut pool = want.to_vec();
    let mut worst = 0.0f64;
    for g in got {
        let (i, d) = pool
            .iter()
            .enumerate()
            .map(|(i, w)| (i, (w - g).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("equal lengths");
        worst = worst.max(d);
        pool.swap_remove(i);
    }
    worst
}

fn pure_r() -> InitialSpec {
    InitialSpec::pure(Chirality::R)
}

fn grover_exact(size: usize, spec: &InitialSpec, parity: Parity) -> qwalk::timeavg::TimeAverageReport {
    let d = SpectralDecomposition::numeric(&Coin::grover(), size).expect("grover spectrum");
    exact_time_average_with(&d, spec, parity)
}

fn c1_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for n in [3usize, 5, 7, 9, 11] {
        let exact = grover_exact(n, &pure_r(), Parity::All).get(Chirality::R).unwrap();
        let want = 1.0 / 8.0 + 5.0 / (4.0 * (n * n) as f64) - 2.0 / (n as f64).powi(3) + 5.0 / (4.0 * (n as f64).powi(4));
        worst = worst.max((exact - want).abs());
    }
    outcome(worst < 1e-10, format!("max |exact - closed form| = {worst:.2e} over N in {{3,5,7,9,11}}"))
}

fn c2_parity_split() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_mix = 0.0f64;
    for n in [3usize, 5, 7, 9, 11] {
        let d = SpectralDecomposition::numeric(&Coin::grover(), n).unwrap();
        let get = |p| exact_time_average_with(&d, &pure_r(), p).get(Chirality::R).unwrap();
        let (all, even, odd) = (get(Parity::All), get(Parity::Even), get(Parity::Odd));
        let nf = n as f64;
        let tail = -2.0 / nf.powi(3) + 5.0 / (4.0 * nf.powi(4));
        worst = worst.max((even - (0.25 + 1.5 / (nf * nf) + tail)).abs());
        worst = worst.max((odd - (1.0 / (nf * nf) + tail)).abs());
        worst_mix = worst_mix.max((all - (even + odd) / 2.0).abs());
    }
    outcome(
        worst < 1e-10 && worst_mix < 1e-10,
        format!("max parity error {worst:.2e}, max |all - (even+odd)/2| = {worst_mix:.2e}"),
    )
}

fn c3_limits() -> Outcome {
    let spec = pure_r();
    let got = Chirality::ALL.map(|c| limit_time_average(&spec, c));
    let want = [
        1.0 / 8.0,
        1.0 / 8.0 + 2.0 / (PI * PI) - 1.0 / PI,
        1.0 / 8.0 + 1.0 / (2.0 * PI * PI) - 1.0 / (2.0 * PI),
        1.0 / 8.0 + 1.0 / (2.0 * PI * PI) - 1.0 / (2.0 * PI),
    ];
    let value_err = got.iter().zip(&want).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
    let limit = 0.5 + 3.0 / (PI * PI) - 2.0 / PI;
    let total_err = (got.iter().sum::<f64>() - limit).abs();
    let totals: Vec<f64> = [5usize, 9, 15, 21]
        .iter()
        .map(|&n| grover_exact(n, &spec, Parity::All).total.unwrap())
        .collect();
    let gaps: Vec<f64> = totals.iter().map(|t| t - limit).collect();
    let monotone = gaps.windows(2).all(|w| w[1].abs() < w[0].abs()) && gaps.iter().all(|g| *g > 0.0);
    let near = gaps[3].abs() < 0.01;
    outcome(
        value_err < 1e-15 && total_err < 1e-15 && monotone && near,
        format!(
            "limit values err {value_err:.1e}, total {limit:.5}; finite-N totals {} (N=21 gap {:.4})",
            totals.iter().map(|t| format!("{t:.5}")).collect::<Vec<_>>().join(", "),
            gaps[3]
        ),
    )
}

// dense grid over α ∈ [-1, 1] with spacing 1e-5
fn alpha_grid() -> impl Iterator<Item = (f64, f64)> {
    let samples = 200_001usize;
    (0..samples).map(move |i| {
        let a = (-1.0 + 2.0 * i as f64 / (samples - 1) as f64).clamp(-1.0, 1.0);
        (a, limit_time_average(&InitialSpec::two_component(a).unwrap(), Chirality::R))
    })
}

fn c4a_alpha_root() -> Outcome {
    let (root, p) = alpha_grid().filter(|(a, _)| *a >= 0.0).min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    let formula = alpha_extrema().alpha_min;
    outcome(
        (root - 0.26357).abs() <= 1e-4 && (formula - 0.26357).abs() <= 1e-4,
        format!("P_R vanishes at alpha = {root:.5} (P_R = {p:.1e}); closed form alpha_min = {formula:.5}"),
    )
}

fn c4b_alpha_max() -> Outcome {
    let target = PI / (16.0 - 8.0 * PI + 2.0 * PI * PI).sqrt();
    let (arg, p) = alpha_grid().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    outcome(
        (arg - target).abs() <= 1e-4,
        format!("max of P_R over [-1,1] at alpha = {arg:.5} (P_R = {p:.5}); expected {target:.5}"),
    )
}

fn c5_delocalizing() -> Outcome {
    let mut worst_limit = 0.0f64;
    let mut worst_ratio = f64::INFINITY;
    let d9 = SpectralDecomposition::numeric(&Coin::grover(), 9).unwrap();
    let d19 = SpectralDecomposition::numeric(&Coin::grover(), 19).unwrap();
    let mut detail = Vec::new();
    for theta in [0.0, 1.0 / 3.0, 1.0] {
        let spec = InitialSpec::delocalizing(theta);
        for c in Chirality::ALL {
            worst_limit = worst_limit.max(limit_time_average(&spec, c));
        }
        let t9 = exact_time_average_with(&d9, &spec, Parity::All).total.unwrap();
        let t19 = exact_time_average_with(&d19, &spec, Parity::All).total.unwrap();
        worst_ratio = worst_ratio.min(t9 / t19);
        detail.push(format!("theta={theta:.3}: {t9:.5} -> {t19:.5}"));
    }
    outcome(
        worst_limit < 1e-12 && worst_ratio >= 2.0,
        format!("max limit component {worst_limit:.1e}; min drop N=9->19 {worst_ratio:.2}x ({})", detail.join("; ")),
    )
}

fn c6_census() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [5usize, 7, 9] {
        let d = SpectralDecomposition::numeric(&Coin::grover(), n).unwrap();
        let minus = d.multiplicity_of(Complex64::new(-1.0, 0.0));
        let plus = d.multiplicity_of(Complex64::new(1.0, 0.0));
        ok &= minus == n * n + 2 && plus == n * n && d.eigenvalue_count() == 4 * n * n;
        detail.push(format!("N={n}: -1 x{minus}, +1 x{plus}"));
    }
    outcome(ok, detail.join("; "))
}

fn c7_backends() -> Outcome {
    let coins = [Coin::grover(), Coin::a1(), Coin::a2(), Coin::symmetric_family(1.0 / 3.0).unwrap()];
    let mut worst = 0.0f64;
    let mut worst_norm = 0.0f64;
    for coin in &coins {
        for n in [3usize, 5, 7] {
            let d = SpectralDecomposition::numeric(coin, n).unwrap();
            let start = WalkState::origin_superposition(n, &InitialSpec::delocalizing(0.7)).unwrap();
            let off = WalkState::pure_state(n, Chirality::U, 1, -1).unwrap();
            for s0 in [start, off] {
                let mut direct = s0.clone();
                for t in 0..=50u64 {
                    let spectral = d.evolve(&s0, t).unwrap();
                    worst = worst.max(spectral.max_abs_diff(&direct));
                    worst_norm = worst_norm.max((direct.norm_sqr() - 1.0).abs());
                    direct = evolve::step(&direct, coin);
                }
            }
        }
    }
    outcome(
        worst < 1e-10 && worst_norm < 1e-10,
        format!("max amplitude gap {worst:.2e}, max norm drift {worst_norm:.2e}"),
    )
}

fn c8_empirical() -> Outcome {
    let start = WalkState::pure_state(5, Chirality::R, 0, 0).unwrap();
    let target = grover_exact(5, &pure_r(), Parity::All).get(Chirality::R).unwrap();
    let err = |steps| {
        let r = empirical_time_average(&start, &Coin::grover(), steps, (0, 0), Parity::All).unwrap();
        (r.get(Chirality::R).unwrap() - target).abs()
    };
    let (e20, e10) = (err(20_000), err(10_000));
    let ratio = e10 / e20;
    outcome(
        e20 <= 2e-3 && (1.3..=3.0).contains(&ratio),
        format!("error T=20000: {e20:.2e}, T=10000: {e10:.2e}, ratio {ratio:.2}"),
    )
}

fn c9_predictor() -> Outcome {
    let cases = [
        (Coin::grover(), true),
        (Coin::symmetric_family(1.0 / 3.0).unwrap(), true),
        (Coin::a1(), false),
        (Coin::a2(), false),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (coin, expected) in &cases {
        let mut verdicts = Vec::new();
        let mut totals = Vec::new();
        for n in [5usize, 9, 15] {
            let d = SpectralDecomposition::numeric(coin, n).unwrap();
            verdicts.push(localization_predictor_with(&d).localizing);
            totals.push(exact_time_average_with(&d, &pure_r(), Parity::All).total.unwrap());
        }
        let above_floor = totals.iter().all(|&t| t > 0.05);
        let consistent = verdicts.iter().all(|v| v == expected) && above_floor == *expected;
        ok &= consistent;
        detail.push(format!(
            "{}: {} (totals {})",
            coin.label(),
            if verdicts[0] { "localizing" } else { "spreading" },
            totals.iter().map(|t| format!("{t:.4}")).collect::<Vec<_>>().join("/")
        ));
    }
    outcome(ok, detail.join("; "))
}

fn c10a_grover_eigenvalues() -> Outcome {
    let coin = Coin::grover();
    let mut worst = 0.0f64;
    for n in [5usize, 7, 9] {
        for a in 0..n {
            for b in 0..n {
                let got = build_block(&coin, a, b, n).unwrap().eigenvalues;
                worst = worst.max(multiset_distance(&got, &grover_eigenvalues(a, b, n).unwrap()));
            }
        }
    }
    outcome(worst < 1e-10, format!("max multiset distance {worst:.2e}"))
}

// ±√(i cos ξ_n cos ξ_m ± f), f = √(sin² ξ_m + cos² ξ_n cos² ξ_m)
fn a1_printed(n: usize, m: usize, size: usize) -> [Complex64; 4] {
    let (xn, xm) = (2.0 * PI * n as f64 / size as f64, 2.0 * PI * m as f64 / size as f64);
    let (cn, cm, sm) = (xn.cos(), xm.cos(), xm.sin());
    let f = (sm * sm + cn * cn * cm * cm).sqrt();
    let p = Complex64::new(f, cn * cm).sqrt();
    let q = Complex64::new(-f, cn * cm).sqrt();
    [p, -p, q, -q]
}

fn c10b_a1_eigenvalues() -> Outcome {
    let coin = Coin::a1();
    let mut worst = 0.0f64;
    let mut worst_at = (0, 0, 0);
    for size in [5usize, 7, 9] {
        for n in 0..size {
            for m in 0..size {
                let got = build_block(&coin, n, m, size).unwrap().eigenvalues;
                let d = multiset_distance(&got, &a1_printed(n, m, size));
                if d > worst {
                    worst = d;
                    worst_at = (size, n, m);
                }
            }
        }
    }
    let (size, n, m) = worst_at;
    let modulus = a1_printed(n, m, size)[0].norm();
    outcome(
        worst < 1e-10,
        format!("max multiset distance {worst:.2e} at N={size} (n,m)=({n},{m}); printed |lambda| there = {modulus:.4}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Outcome); 12] = [
        ("1", "closed-form finite-N time average", c1_closed_form),
        ("2", "even/odd time averages", c2_parity_split),
        ("3", "infinite-lattice limits and finite-N trend", c3_limits),
        ("4a", "alpha scan: root location", c4a_alpha_root),
        ("4b", "alpha scan: maximum location", c4b_alpha_max),
        ("5", "delocalizing family", c5_delocalizing),
        ("6", "Grover degeneracy census", c6_census),
        ("7", "direct vs spectral evolution", c7_backends),
        ("8", "empirical convergence", c8_empirical),
        ("9", "localization predictor", c9_predictor),
        ("10a", "Grover eigenvalue closed forms", c10a_grover_eigenvalues),
        ("10b", "A1 eigenvalue closed forms", c10b_a1_eigenvalues),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("{} criterion {id}: {name} -- {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    } else {
        println!("all criteria passed");
        ExitCode::SUCCESS
    }
}
