//! `qwalk` — simulate and analyse two-dimensional coined quantum walks on an
//! odd N×N torus.

mod parse;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qwalk::timeavg::{self, Parity, TimeAverageReport};
use qwalk::{Chirality, Coin, GridMetadata, SpectralDecomposition, WalkError, WalkState};

use crate::parse::{parse_coin, parse_initial, ParsedInitial};

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Coined quantum walks on a two-dimensional torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a walker from the origin and write the probability grid.
    Simulate {
        #[arg(long, default_value = "grover")]
        coin: String,
        /// Odd lattice side length.
        #[arg(long, short = 'n')]
        n: usize,
        #[arg(long)]
        steps: u64,
        /// R|L|U|D or custom:a,b,c,d
        #[arg(long, default_value = "R", allow_hyphen_values = true)]
        initial: String,
        #[arg(long, short, default_value = "-")]
        output: String,
        #[arg(long, value_enum, default_value_t = GridFormat::Csv)]
        format: GridFormat,
        #[arg(long, value_enum, default_value_t = Backend::Direct)]
        backend: Backend,
    },
    /// Eigenvalue clusters of all momentum blocks.
    Spectrum {
        #[arg(long, default_value = "grover")]
        coin: String,
        #[arg(long, short = 'n')]
        n: usize,
        #[arg(long, value_enum, default_value_t = SpectrumFormat::Json)]
        format: SpectrumFormat,
        #[arg(long, short, default_value = "-")]
        output: String,
    },
    /// Time-averaged return probability at a site.
    Timeavg {
        #[arg(long, default_value = "grover")]
        coin: String,
        /// Lattice size (not used by `limit`).
        #[arg(long, short = 'n')]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
        #[arg(long, default_value = "all")]
        parity: Parity,
        /// Averaging window for `empirical`.
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long, default_value = "R", allow_hyphen_values = true)]
        initial: String,
        /// Site as `x,y`.
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        site: String,
        #[arg(long, short, default_value = "-")]
        output: String,
    },
    /// Limiting return probabilities along `(α, √(1−α²), 0, 0)`, as CSV.
    ScanAlpha {
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[arg(long, short, default_value = "-")]
        output: String,
    },
    /// Spectral localization predictor.
    Predict {
        #[arg(long, default_value = "grover")]
        coin: String,
        #[arg(long, short = 'n')]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GridFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectrumFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Direct,
    Spectral,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Empirical,
    Exact,
    ClosedForm,
    Limit,
}

enum CliError {
    Usage(String),
    Walk(WalkError),
}

impl From<WalkError> for CliError {
    fn from(e: WalkError) -> Self {
        CliError::Walk(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Walk(WalkError::Io(e))
    }
}

impl From<parse::ParseError> for CliError {
    fn from(e: parse::ParseError) -> Self {
        CliError::Usage(e.0)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Walk(e) => match e {
                WalkError::Domain(_) | WalkError::NotUnitary { .. } | WalkError::Unsupported(_) => 2,
                WalkError::EigenSolver { .. } | WalkError::Consistency(_) => 3,
                WalkError::Io(_) | WalkError::Json(_) => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Walk(e) => e.to_string(),
        }
    }
}

/// Where data goes, and where the human-readable summary goes (stderr when
/// data occupies stdout).
struct Sink {
    data: Box<dyn Write>,
    to_stdout: bool,
}

impl Sink {
    fn open(path: &str) -> Result<Self, CliError> {
        if path == "-" {
            Ok(Sink { data: Box::new(BufWriter::new(io::stdout().lock())), to_stdout: true })
        } else {
            Ok(Sink { data: Box::new(BufWriter::new(File::create(path)?)), to_stdout: false })
        }
    }

    fn summary(&self, line: &str) {
        if self.to_stdout {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }

    fn finish(mut self) -> Result<(), CliError> {
        self.data.flush()?;
        Ok(())
    }
}

fn initial_from(arg: &str) -> Result<ParsedInitial, CliError> {
    let parsed = parse_initial(arg)?;
    if parsed.needs_warning() {
        eprintln!(
            "warning: initial weights have norm {:.6}; normalizing",
            parsed.supplied_norm_sqr.sqrt()
        );
    }
    Ok(parsed)
}

fn parse_site(s: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Usage(format!("site '{s}' must be written as x,y"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn report_summary(sink: &Sink, r: &TimeAverageReport) {
    for c in Chirality::ALL {
        if let Some(v) = r.get(c) {
            sink.summary(&format!("p_{}: {v:.6}", c.as_str()));
        }
    }
    if let Some(total) = r.total {
        sink.summary(&format!("total: {total:.6}"));
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { coin, n, steps, initial, output, format, backend } => {
            let coin = parse_coin(&coin)?;
            let init = initial_from(&initial)?;
            let start = WalkState::origin_superposition(n, &init.spec)?;
            let state = match backend {
                Backend::Direct => qwalk::evolve(&start, &coin, steps),
                Backend::Spectral => qwalk::evolve_spectral(&start, &coin, steps)?,
            };
            let grid = state.probability_grid();
            let mut sink = Sink::open(&output)?;
            match format {
                GridFormat::Csv => grid.write_csv(&mut sink.data)?,
                GridFormat::Json => {
                    let meta = GridMetadata { coin: coin.label().to_owned(), initial: initial.clone() };
                    grid.write_json(&mut sink.data, &meta)?
                }
            }
            let (mx, my, mp) = grid.max();
            sink.summary(&format!("origin probability: {:.6}", grid.origin()));
            sink.summary(&format!("maximum: {mp:.6} at ({mx}, {my})"));
            sink.finish()
        }
        Command::Spectrum { coin, n, format, output } => {
            let coin = parse_coin(&coin)?;
            let report = SpectralDecomposition::numeric(&coin, n)?.report();
            let mut sink = Sink::open(&output)?;
            match format {
                SpectrumFormat::Json => report.write_json(&mut sink.data)?,
                SpectrumFormat::Csv => report.write_csv(&mut sink.data)?,
            }
            sink.summary(&format!("distinct eigenvalues: {}", report.eigenvalue_count));
            if let Some(top) = report.clusters.first() {
                sink.summary(&format!(
                    "largest cluster: {} at {}",
                    top.multiplicity,
                    fmt_complex(Complex64::new(top.value[0], top.value[1]))
                ));
            }
            sink.finish()
        }
        Command::Timeavg { coin, n, method, parity, steps, initial, site, output } => {
            let coin = parse_coin(&coin)?;
            let init = initial_from(&initial)?;
            let site = parse_site(&site)?;
            let need_n = || n.ok_or_else(|| CliError::Usage("--n is required for this method".into()));
            let need_grover = |what: &str| {
                if coin != Coin::grover() {
                    Err(CliError::Walk(WalkError::Unsupported(format!("{what} is only available for the grover coin"))))
                } else {
                    Ok(())
                }
            };
            let report = match method {
                MethodArg::Empirical => {
                    let steps = steps.ok_or_else(|| CliError::Usage("--steps is required for empirical".into()))?;
                    let start = WalkState::origin_superposition(need_n()?, &init.spec)?;
                    timeavg::empirical_time_average(&start, &coin, steps, site, parity)?
                }
                MethodArg::Exact => timeavg::exact_time_average(&coin, &init.spec, need_n()?, site, parity)?,
                MethodArg::ClosedForm => {
                    need_grover("the closed form")?;
                    if init.spec != qwalk::InitialSpec::pure(Chirality::R) || site != (0, 0) {
                        return Err(WalkError::Unsupported(
                            "the closed form covers a walker started in R and observed at the origin".into(),
                        )
                        .into());
                    }
                    timeavg::grover_closed_form_report(need_n()?, parity)?
                }
                MethodArg::Limit => {
                    need_grover("the infinite-lattice limit")?;
                    if parity != Parity::All || site != (0, 0) {
                        return Err(WalkError::Unsupported(
                            "the limit covers the all-times average at the origin".into(),
                        )
                        .into());
                    }
                    timeavg::limit_report(&init.spec)
                }
            };
            let mut sink = Sink::open(&output)?;
            report.write_json(&mut sink.data)?;
            writeln!(sink.data)?;
            report_summary(&sink, &report);
            sink.finish()
        }
        Command::ScanAlpha { samples, output } => {
            let rows = timeavg::scan_alpha(samples)?;
            let mut sink = Sink::open(&output)?;
            timeavg::write_alpha_csv(&rows, &mut sink.data)?;
            let ext = timeavg::alpha_extrema();
            sink.summary(&format!("p_R vanishes at alpha = {:.6}", ext.alpha_min));
            sink.summary(&format!("p_R is largest at alpha = {:.6}", -ext.alpha_max));
            sink.finish()
        }
        Command::Predict { coin, n } => {
            let coin = parse_coin(&coin)?;
            let p = timeavg::localization_predictor(&coin, n)?;
            let mut out = io::stdout().lock();
            writeln!(out, "localizing: {}", if p.localizing { "yes" } else { "no" })?;
            writeln!(out, "max multiplicity: {}", p.max_multiplicity)?;
            for z in &p.common_eigenvalues {
                writeln!(out, "common eigenvalue: {}", fmt_complex(*z))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = std::env::var("QWALK_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Walk(WalkError::Io(e))) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
