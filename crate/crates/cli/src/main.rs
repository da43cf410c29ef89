//! Command-line front end: exact identity verifiers, the boundary-matrix
//! catalog and classifier, chain spectra, Bethe solving, thermodynamic
//! kernels and scattering amplitudes. JSON reports go to stdout, human
//! summaries to stderr; exit 0 = all checks passed, 1 = a check failed,
//! 2 = usage error.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::process::ExitCode;
use std::sync::Arc;
use yangian_kit::bethe::{self, OpenBoundary, Series};
use yangian_kit::boundary::{self, KSolution};
use yangian_kit::chain::{self, ChainContext};
use yangian_kit::error::Error;
use yangian_kit::grading::{catalog_specs, GradingSpec};
use yangian_kit::rmatrix;
use yangian_kit::scattering::{self, AmplitudeSpec};
use yangian_kit::thermo::{self, KernelContext};

#[derive(Parser)]
#[command(
    name = "ykit",
    version,
    about = "reflection matrices and open spin chains for so/sp/osp Yangian R matrices"
)]
struct Cli {
    /// Worker threads for parallel sections (0 = rayon default)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Memory budget for dense chain computations
    #[arg(long, global = true, default_value_t = 1024)]
    mem_budget_mb: usize,
    /// Emit machine-readable JSON on stdout
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact identity verifiers
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Boundary-matrix catalog
    Catalog {
        #[command(subcommand)]
        what: CatalogCmd,
    },
    /// Executable classification of boundary families
    Classify {
        #[command(subcommand)]
        what: ClassifyCmd,
    },
    /// Dense spectrum of the double-row transfer matrix
    Spectrum(SpectrumArgs),
    /// Bethe-root machinery
    Bethe {
        #[command(subcommand)]
        what: BetheCmd,
    },
    /// Fourier-space kernels, resolvents and hole energies
    Thermo {
        #[command(subcommand)]
        what: ThermoCmd,
    },
    /// Bulk and boundary scattering amplitudes
    Scatter {
        #[command(subcommand)]
        what: ScatterCmd,
    },
    /// Built-in exact-identity test battery
    Selftest {
        /// Small algebras only
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Yang–Baxter equation on the tensor cube
    Ybe {
        #[arg(long)]
        algebra: String,
    },
    /// Crossing and unitarity of the physical R matrix
    Crossing {
        #[arg(long)]
        algebra: String,
    },
    /// Reflection equation for a boundary matrix (JSON or @file)
    Reflection {
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        k: String,
    },
    /// Dual reflection equation for the crossed partner K⁺
    DualReflection {
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        k: String,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List representative solutions per admissible family
    List {
        #[arg(long)]
        algebra: Option<String>,
        /// Re-verify every catalog member
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Subcommand)]
enum ClassifyCmd {
    /// Enumerate the diagonal families admissible for an algebra
    Diagonal {
        #[arg(long)]
        algebra: String,
    },
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    algebra: String,
    #[arg(long)]
    sites: usize,
    /// Boundary JSON, e.g. '{"family":"D1","params":{"c":"1/2"}}'
    #[arg(long, default_value = r#"{"family":"I"}"#)]
    boundary: String,
    /// Complex evaluation point, e.g. 0.3+0.1i
    #[arg(long)]
    lambda: String,
}

#[derive(Subcommand)]
enum BetheCmd {
    /// Newton search for Bethe states in one occupation sector
    Solve {
        /// so | sp
        #[arg(long)]
        series: String,
        /// Rank k of the series; so uses so(2k+1) unless --n says otherwise
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Matrix dimension n (overrides --k)
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        sites: usize,
        #[arg(long, default_value = r#"{"family":"I"}"#)]
        boundary: String,
        /// Occupation numbers per sea, comma-separated
        #[arg(long, value_delimiter = ',')]
        m: Vec<usize>,
        /// Λ sample points for the report
        #[arg(long, value_delimiter = ',', default_values_t = vec!["0.23".to_string(), "0.77".to_string()])]
        lambda: Vec<String>,
    },
}

#[derive(Subcommand)]
enum ThermoCmd {
    /// Kernel matrix, resolvent and hole energies at a frequency (or grid)
    Kernels {
        #[arg(long)]
        series: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        omega: Option<f64>,
        /// Sweep start:stop:step, emits CSV on stdout
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value = r#"{"family":"I"}"#)]
        boundary: String,
    },
}

#[derive(Subcommand)]
enum ScatterCmd {
    /// Hole–hole bulk amplitude S₀(λ)
    Bulk {
        #[arg(long)]
        series: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: f64,
    },
    /// Boundary amplitude factors k₀, k₁ (closed form and integral route)
    Boundary {
        #[arg(long)]
        series: String,
        #[arg(long)]
        n: usize,
        /// Boundary family: D1 | D2 | D3 | D4
        #[arg(long)]
        family: String,
        /// D3 integer parameter
        #[arg(long)]
        m: Option<usize>,
        /// Boundary parameter ξ (D1/D2) or ξ− (D4), exact rational
        #[arg(long)]
        xi: Option<String>,
        /// Second boundary parameter ξ+ for D4
        #[arg(long)]
        xi2: Option<String>,
        #[arg(long)]
        lambda: f64,
    },
}

fn parse_series(series: &str, k: usize, n: Option<usize>) -> Result<Series, Error> {
    match series {
        "so" => {
            let dim = n.unwrap_or(2 * k + 1);
            Series::from_spec(&GradingSpec::so(dim)?)
        }
        "sp" => Series::from_spec(&GradingSpec::sp(n.unwrap_or(2 * k))?),
        other => Err(Error::BadAlgebra(other.to_string())),
    }
}

/// Accepts decimal complex values like `0.3+0.1i`, `-0.5i`, `1.2`, and exact
/// rationals like `3/10+1/10i`.
fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(g) = yangian_kit::ratfunc::parse_gaussian(&t) {
        return Ok(g.to_complex());
    }
    let bad = || Error::Parse(format!("cannot parse complex value {s}"));
    if let Some(im) = t.strip_suffix('i') {
        // find the split between real and imaginary parts: the last +/- not
        // part of an exponent
        let bytes = im.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx];
            if (c == b'+' || c == b'-') && bytes[idx - 1] != b'e' && bytes[idx - 1] != b'E' {
                split = Some(idx);
                break;
            }
        }
        let (re_s, im_s) = match split {
            Some(idx) => (&im[..idx], &im[idx..]),
            None => ("0", im),
        };
        let re: f64 = if re_s.is_empty() { 0.0 } else { re_s.parse().map_err(|_| bad())? };
        let im: f64 = match im_s {
            "" | "+" => 1.0,
            "-" => -1.0,
            v => v.parse().map_err(|_| bad())?,
        };
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0))
    }
}

fn parse_k(arg: &str, algebra: Option<&str>) -> Result<KSolution, Error> {
    let text = if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path)?
    } else {
        arg.to_string()
    };
    let v: Value = serde_json::from_str(&text)?;
    let spec = match algebra {
        Some(a) => Some(Arc::new(GradingSpec::parse(a)?)),
        None => None,
    };
    KSolution::from_json(&v, spec.as_ref())
}

struct Reporter {
    json: bool,
    reports: Vec<Value>,
    failed: bool,
}

impl Reporter {
    fn new(json: bool) -> Self {
        Reporter { json, reports: Vec::new(), failed: false }
    }

    fn add_identity(&mut self, rep: yangian_kit::report::IdentityReport) {
        if !rep.passed() {
            self.failed = true;
        }
        eprintln!(
            "[{}] {} {} ({} ms)",
            if rep.passed() { "pass" } else { "FAIL" },
            rep.identity,
            rep.algebra,
            rep.elapsed_ms
        );
        self.reports.push(serde_json::to_value(&rep).unwrap());
    }

    fn add_value(&mut self, label: &str, v: Value) {
        eprintln!("{label}");
        self.reports.push(v);
    }

    fn finish(self) -> ExitCode {
        if self.json {
            let out = if self.reports.len() == 1 {
                self.reports.into_iter().next().unwrap()
            } else {
                Value::Array(self.reports)
            };
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        if self.failed {
            ExitCode::from(1)
        } else {
            ExitCode::SUCCESS
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let mut rep = Reporter::new(cli.json);
    match cli.command {
        Command::Verify { what } => match what {
            VerifyCmd::Ybe { algebra } => {
                let spec = Arc::new(GradingSpec::parse(&algebra)?);
                rep.add_identity(rmatrix::verify_ybe(&spec)?);
            }
            VerifyCmd::Crossing { algebra } => {
                let spec = Arc::new(GradingSpec::parse(&algebra)?);
                rep.add_identity(rmatrix::verify_crossing_unitarity(&spec)?);
            }
            VerifyCmd::Reflection { algebra, k } => {
                let k = parse_k(&k, algebra.as_deref())?;
                rep.add_identity(boundary::verify_reflection(&k)?);
            }
            VerifyCmd::DualReflection { algebra, k } => {
                let k = parse_k(&k, algebra.as_deref())?;
                let kp = boundary::dualize_k(&k)?;
                rep.add_identity(boundary::verify_dual_reflection(&kp)?);
            }
        },
        Command::Catalog { what } => match what {
            CatalogCmd::List { algebra, verify } => {
                let specs: Vec<Arc<GradingSpec>> = match algebra {
                    Some(a) => vec![Arc::new(GradingSpec::parse(&a)?)],
                    None => catalog_specs().into_iter().map(Arc::new).collect(),
                };
                for spec in specs {
                    for k in boundary::catalog(&spec) {
                        let mut v = k.to_json();
                        if verify {
                            let r = boundary::verify_reflection(&k)?;
                            if !r.passed() {
                                rep.failed = true;
                            }
                            v["reflection"] = json!(if r.passed() { "pass" } else { "fail" });
                        }
                        rep.add_value(&format!("{} {}", spec.descriptor(), k.family), v);
                    }
                }
            }
        },
        Command::Classify { what } => match what {
            ClassifyCmd::Diagonal { algebra } => {
                let spec = Arc::new(GradingSpec::parse(&algebra)?);
                let families = boundary::classify_diagonal(&spec)?;
                for f in &families {
                    eprintln!(
                        "{}: {} free parameter(s){}",
                        f.family,
                        if f.free_parameters == usize::MAX {
                            "function-valued".to_string()
                        } else {
                            f.free_parameters.to_string()
                        },
                        if f.constraints.is_empty() {
                            String::new()
                        } else {
                            format!("; constraint {}", f.constraints.join(", "))
                        }
                    );
                }
                rep.add_value(
                    &format!("{} diagonal families: {}", algebra, families.len()),
                    json!({
                        "schema": "yangian-kit/classification-v1",
                        "algebra": algebra,
                        "families": families,
                    }),
                );
            }
        },
        Command::Spectrum(args) => {
            let spec = GradingSpec::parse(&args.algebra)?;
            let series = Series::from_spec(&spec)?;
            let bjson: Value = serde_json::from_str(&args.boundary)?;
            let b = OpenBoundary::from_json(&bjson, series)?;
            let mut ctx = ChainContext::new(series, b, args.sites)?;
            ctx.mem_budget_mb = cli.mem_budget_mb;
            let lambda = parse_complex(&args.lambda)?;
            let record = chain::spectrum(&ctx, lambda)?;
            let maxres = record.residuals.iter().cloned().fold(0.0f64, f64::max);
            rep.add_value(
                &format!(
                    "{} N={} λ={}: {} eigenvalues, max residual {:.2e}",
                    args.algebra,
                    args.sites,
                    lambda,
                    record.eigenvalues.len(),
                    maxres
                ),
                json!({
                    "schema": "yangian-kit/spectrum-v1",
                    "algebra": args.algebra,
                    "sites": args.sites,
                    "record": record,
                }),
            );
        }
        Command::Bethe { what } => match what {
            BetheCmd::Solve { series, k, n, sites, boundary, m, lambda } => {
                let series = parse_series(&series, k, n)?;
                let bjson: Value = serde_json::from_str(&boundary)?;
                let b = OpenBoundary::from_json(&bjson, series)?;
                let mut sectors = m;
                sectors.resize(series.num_seas(), 0);
                let states =
                    bethe::solve_bae(series, &b, sites, &sectors, &bethe::SolveOptions::default())?;
                eprintln!(
                    "{} N={} {} sector {:?}: {} state(s)",
                    series.descriptor(),
                    sites,
                    b.label(),
                    sectors,
                    states.len()
                );
                let mut out = Vec::new();
                for st in &states {
                    let res = bethe::bae_residuals(st)?;
                    let samples: Result<Vec<Value>, Error> = lambda
                        .iter()
                        .map(|s| {
                            let pt = parse_complex(s)?;
                            let v = bethe::eigenvalue_value(st, pt)?;
                            Ok(json!({"lambda": s, "value": [v.re, v.im]}))
                        })
                        .collect();
                    out.push(json!({
                        "roots": st
                            .roots
                            .iter()
                            .map(|sea| sea.iter().map(|r| [r.re, r.im]).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                        "max_residual": res.iter().flatten().cloned().fold(0.0f64, f64::max),
                        "quantum_numbers": st.quantum_numbers(),
                        "energy": bethe::energy(st),
                        "eigenvalue_samples": samples?,
                    }));
                }
                rep.add_value(
                    "bethe states",
                    json!({
                        "schema": "yangian-kit/bethe-v1",
                        "series": series.descriptor(),
                        "sites": sites,
                        "boundary": b.label(),
                        "sector": sectors,
                        "states": out,
                    }),
                );
            }
        },
        Command::Thermo { what } => match what {
            ThermoCmd::Kernels { series, k, omega, grid, boundary } => {
                let series = parse_series(&series, k, None)?;
                let bjson: Value = serde_json::from_str(&boundary)?;
                let b = OpenBoundary::from_json(&bjson, series)?;
                let ctx = KernelContext::no_holes(series, b)?;
                match (omega, grid) {
                    (Some(w), None) => {
                        let kk = thermo::kernel_hat(series, w);
                        let rr = thermo::resolvent_hat(series, w);
                        let eps = thermo::hole_energy_hat(series, w).ok();
                        let (f, g, phi0, phi1) = thermo::density_correction_hat(&ctx, w)?;
                        rep.add_value(
                            &format!("{} kernels at ω={w}", series.descriptor()),
                            json!({
                                "schema": "yangian-kit/thermo-v1",
                                "series": series.descriptor(),
                                "omega": w,
                                "kernel": kk.rows().into_iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
                                "resolvent": rr.rows().into_iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
                                "hole_energies": eps,
                                "f": f, "g": g, "phi0": phi0, "phi1": phi1,
                            }),
                        );
                    }
                    (None, Some(grid)) => {
                        let parts: Vec<f64> = grid
                            .split(':')
                            .map(|p| p.parse::<f64>().map_err(|_| Error::Parse(grid.clone())))
                            .collect::<Result<_, _>>()?;
                        let [start, stop, step] = parts.as_slice() else {
                            return Err(Error::Parse("grid must be start:stop:step".into()));
                        };
                        println!("omega,phi0_1,phi1_1,eps_1");
                        let mut w = *start;
                        while w <= *stop + 1e-12 {
                            let (_, _, phi0, phi1) = thermo::density_correction_hat(&ctx, w)?;
                            let eps = thermo::hole_energy_hat(series, w)
                                .map(|e| e[0])
                                .unwrap_or(f64::NAN);
                            println!("{w},{},{},{eps}", phi0[0], phi1[0]);
                            w += step;
                        }
                    }
                    _ => return Err(Error::Parse("need exactly one of --omega / --grid".into())),
                }
            }
        },
        Command::Scatter { what } => match what {
            ScatterCmd::Bulk { series, n, lambda } => {
                let series = parse_series(&series, n / 2, Some(n))?;
                let s0 = scattering::bulk_amplitude(series, lambda)?;
                let unit = (s0 * scattering::bulk_amplitude(series, -lambda)?
                    - Complex64::new(1.0, 0.0))
                .norm();
                rep.add_value(
                    &format!(
                        "{} S0({lambda}) = {:.10}{:+.10}i  (unitarity defect {:.2e})",
                        series.descriptor(),
                        s0.re,
                        s0.im,
                        unit
                    ),
                    json!({
                        "schema": "yangian-kit/scatter-v1",
                        "series": series.descriptor(),
                        "lambda": lambda,
                        "s0": [s0.re, s0.im],
                        "unitarity_defect": unit,
                    }),
                );
            }
            ScatterCmd::Boundary { series, n, family, m, xi, xi2, lambda } => {
                let series = parse_series(&series, n / 2, Some(n))?;
                let parse_rat = |s: &Option<String>| -> Result<Option<_>, Error> {
                    match s {
                        None => Ok(None),
                        Some(s) => Ok(Some(yangian_kit::ratfunc::parse_gaussian(s)?.re)),
                    }
                };
                let b = match family.as_str() {
                    "D1" => OpenBoundary::D1 {
                        xi: parse_rat(&xi)?.ok_or_else(|| Error::Parse("D1 needs --xi".into()))?,
                    },
                    "D2" => OpenBoundary::D2 {
                        xi1: parse_rat(&xi)?.ok_or_else(|| Error::Parse("D2 needs --xi".into()))?,
                    },
                    "D3" => OpenBoundary::D3 {
                        m: m.ok_or_else(|| Error::Parse("D3 needs --m".into()))?,
                    },
                    "D4" => OpenBoundary::D4 {
                        xi_minus: parse_rat(&xi)?
                            .ok_or_else(|| Error::Parse("D4 needs --xi".into()))?,
                        xi_plus: parse_rat(&xi2)?
                            .ok_or_else(|| Error::Parse("D4 needs --xi2".into()))?,
                    },
                    other => return Err(Error::Parse(format!("unknown family {other}"))),
                };
                let aspec = AmplitudeSpec::new(series, b.clone(), lambda)?;
                let k1 = scattering::boundary_k1_closed(&aspec)?;
                let k0 = match scattering::boundary_k0_closed(series, lambda) {
                    Ok(v) => Some(v),
                    Err(Error::Unsupported(_)) => None,
                    Err(e) => return Err(e),
                };
                let k0i = scattering::boundary_k0_integral(series, lambda)?;
                let k1i = scattering::boundary_k1_integral(series, &b, lambda)?;
                rep.add_value(
                    &format!(
                        "{} {} λ={lambda}: k1 = {:.8}{:+.8}i  (integral {:.8}{:+.8}i)",
                        series.descriptor(),
                        b.label(),
                        k1.re,
                        k1.im,
                        k1i.re,
                        k1i.im
                    ),
                    json!({
                        "schema": "yangian-kit/scatter-v1",
                        "series": series.descriptor(),
                        "family": family,
                        "lambda": lambda,
                        "k0_closed": k0.map(|v| [v.re, v.im]),
                        "k0_integral": [k0i.re, k0i.im],
                        "k1_closed": [k1.re, k1.im],
                        "k1_integral": [k1i.re, k1i.im],
                    }),
                );
            }
        },
        Command::Selftest { quick } => {
            let specs: Vec<Arc<GradingSpec>> = if quick {
                ["so:3", "so:4", "sp:2", "osp:1:2"]
                    .iter()
                    .map(|s| Arc::new(GradingSpec::parse(s).unwrap()))
                    .collect()
            } else {
                catalog_specs().into_iter().map(Arc::new).collect()
            };
            for spec in &specs {
                rep.add_identity(rmatrix::verify_ybe(spec)?);
                rep.add_identity(rmatrix::verify_crossing_unitarity(spec)?);
            }
            let reflection_set: Vec<&str> = if quick {
                vec!["so:3", "so:4", "sp:2"]
            } else {
                vec![
                    "so:3", "so:4", "so:5", "so:6", "sp:2", "sp:4", "osp:1:2", "osp:2:2",
                    "osp:2:4", "osp:4:2",
                ]
            };
            for name in reflection_set {
                let spec = Arc::new(GradingSpec::parse(name)?);
                for k in boundary::catalog(&spec) {
                    rep.add_identity(boundary::verify_reflection(&k)?);
                }
            }
        }
    }
    Ok(rep.finish())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::BadAlgebra(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
