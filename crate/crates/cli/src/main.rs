//! Command-line front end: parse ring / complex / sequence descriptions,
//! run the certificate pipelines, and emit JSON artifacts plus a short
//! human summary on stderr.
//!
//! Exit codes: 0 on success (verified output), 1 on usage errors, 2 on
//! pipeline failures (the failure taxonomy is reported as JSON).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use ghostlevel::complex::FreeComplex;
use ghostlevel::fgmodule::{depth, IdealGens, ModulePresentation};
use ghostlevel::groebner::groebner_basis;
use ghostlevel::koszul::koszul_object;
use ghostlevel::level::{
    ghost_certificate, ghost_certificate_with_exponents, level_upper_bound, rdim_report,
    CertFailure, RdimOptions,
};
use ghostlevel::poly::{AlgebraElement, Poly};
use ghostlevel::ring::{MonomialOrder, RingSpec, DEFAULT_PRIME};
use ghostlevel::wire::{
    certificate_to_wire, complex_to_wire, plan_to_wire, presentation_to_wire, rdim_report_to_wire,
    wire_to_complex, wire_to_presentation, BuildPlanWire, ComplexWire, PresentationWire,
    SCHEMA_VERSION,
};

#[derive(Parser)]
#[command(
    name = "ghostlevel",
    about = "Level certificates for perfect complexes over polynomial rings",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct CommonArgs {
    /// Ring syntax: `Fp[n],p=<prime>`, `Fp[n]` (default prime 32003) or `Q[n]`
    #[arg(long, default_value = "Fp[2],p=32003")]
    ring: String,
    /// Monomial order: grevlex | lex
    #[arg(long, default_value = "grevlex")]
    order: String,
    /// Write the JSON artifact here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build and verify a ghost certificate for a sequence
    GhostCert {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated sequence, e.g. `x0,x1`
        #[arg(long)]
        seq: String,
        /// JSON file with the base complex M (default: the free rank-1 complex)
        #[arg(long)]
        module: Option<PathBuf>,
        /// JSON file with the test generator G (default: the free rank-1 complex)
        #[arg(long)]
        generator: Option<PathBuf>,
        /// Comma-separated exponent overrides, e.g. `0,1`
        #[arg(long)]
        exponents: Option<String>,
    },
    /// Depth of an ideal on a finitely presented module via Koszul homology
    Depth {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated ideal generators
        #[arg(long)]
        ideal: String,
        /// JSON file with a module presentation (default: the free rank-1 module)
        #[arg(long)]
        module: Option<PathBuf>,
    },
    /// Constructive level upper bound (and lower bound for Koszul targets)
    Level {
        #[command(flatten)]
        common: CommonArgs,
        /// Target: `koszul:x0,x1`, `file:<path>` or `free:<rank>@<degree>`
        #[arg(long)]
        target: String,
    },
    /// Full dimension report: certificate, exact Koszul level, sample battery
    VerifyTheorem {
        /// Number of variables
        #[arg(long)]
        nvars: usize,
        /// Prime characteristic
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        p: u64,
        /// Monomial order: grevlex | lex
        #[arg(long, default_value = "grevlex")]
        order: String,
        /// Number of random sample complexes in the battery
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Seed for the sample battery
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Refuse rings with more than this many variables
        #[arg(long, default_value_t = 3)]
        max_nvars: usize,
        /// JSON files with candidate generators to re-verify against
        #[arg(long)]
        generator: Vec<PathBuf>,
        /// Write the JSON artifact here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Groebner basis of an ideal (debugging aid)
    Groebner {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated generators
        #[arg(long)]
        gens: String,
    },
}

enum AppError {
    Usage(String),
    Pipeline(CertFailure),
}

impl From<ghostlevel::Error> for AppError {
    fn from(e: ghostlevel::Error) -> Self {
        AppError::Usage(e.to_string())
    }
}

impl From<CertFailure> for AppError {
    fn from(e: CertFailure) -> Self {
        match e {
            CertFailure::InvalidInput(msg) => AppError::Usage(msg),
            other => AppError::Pipeline(other),
        }
    }
}

#[derive(Serialize)]
struct FailureWire {
    schema_version: u32,
    failure: FailureDetail,
}

#[derive(Serialize)]
struct FailureDetail {
    kind: String,
    factor: Option<usize>,
    message: String,
}

fn failure_wire(f: &CertFailure) -> FailureWire {
    let (kind, factor) = match f {
        CertFailure::NotGhost(s) => ("not_ghost", Some(*s)),
        CertFailure::CompositionZero => ("composition_zero", None),
        CertFailure::PreconditionFailed(_) => ("precondition_failed", None),
        CertFailure::UnsupportedGenerator(_) => ("unsupported_generator", None),
        CertFailure::InvalidInput(_) => ("invalid_input", None),
    };
    FailureWire {
        schema_version: SCHEMA_VERSION,
        failure: FailureDetail { kind: kind.into(), factor, message: f.to_string() },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Pipeline(f)) => {
            let wire = failure_wire(&f);
            let json = serde_json::to_string_pretty(&wire).expect("failure serializes");
            println!("{json}");
            eprintln!("failure: {f}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.cmd {
        Cmd::GhostCert { common, seq, module, generator, exponents } => {
            let ring = parse_ring(&common.ring, &common.order)?;
            let m = load_complex_or_free(ring, module.as_deref())?;
            let g = load_complex_or_free(ring, generator.as_deref())?;
            let xs = parse_sequence(ring, &seq)?;
            let cert = match exponents {
                None => ghost_certificate(&g, &m, &xs)?,
                Some(spec) => {
                    let ns = parse_exponents(&spec)?;
                    ghost_certificate_with_exponents(&g, &m, &xs, &ns)?
                }
            };
            let wire = certificate_to_wire(&cert);
            emit(&wire, common.out.as_deref())?;
            eprintln!(
                "certificate: {} ghost factor(s), composite nonzero, level lower bound {}",
                cert.chain_length(),
                cert.implied_level_lower_bound()
            );
            Ok(())
        }
        Cmd::Depth { common, ideal, module } => {
            let ring = parse_ring(&common.ring, &common.order)?;
            let m = load_presentation_or_free(ring, module.as_deref())?;
            let gens = parse_polys(ring, &ideal)?;
            let a = IdealGens::from_polys(&gens);
            let value = depth(&a, &m);
            let homology = ghostlevel::fgmodule::koszul_homology(&a, &m);
            let nonzero: Vec<usize> = (0..homology.len())
                .filter(|&i| !homology[i].is_zero_module())
                .collect();
            #[derive(Serialize)]
            struct DepthWire {
                schema_version: u32,
                ring: RingSpec,
                ideal: Vec<String>,
                module: PresentationWire,
                depth: ghostlevel::fgmodule::Depth,
                nonzero_koszul_homology: Vec<usize>,
            }
            let wire = DepthWire {
                schema_version: SCHEMA_VERSION,
                ring,
                ideal: gens.iter().map(|p| p.to_string()).collect(),
                module: presentation_to_wire(&m),
                depth: value,
                nonzero_koszul_homology: nonzero,
            };
            emit(&wire, common.out.as_deref())?;
            eprintln!("depth: {value}");
            Ok(())
        }
        Cmd::Level { common, target } => {
            let ring = parse_ring(&common.ring, &common.order)?;
            let g = FreeComplex::stalk(ring, 0, 1);
            let (x, lower) = parse_target(ring, &g, &target)?;
            let (upper, plan) = level_upper_bound(&g, &x)?;
            #[derive(Serialize)]
            struct LevelWire {
                schema_version: u32,
                ring: RingSpec,
                target: String,
                complex: ComplexWire,
                upper_bound: usize,
                plan: BuildPlanWire,
                lower_bound: Option<usize>,
                exact: Option<bool>,
            }
            let wire = LevelWire {
                schema_version: SCHEMA_VERSION,
                ring,
                target: target.clone(),
                complex: complex_to_wire(&x),
                upper_bound: upper,
                plan: plan_to_wire(&plan),
                lower_bound: lower,
                exact: lower.map(|l| l == upper),
            };
            emit(&wire, common.out.as_deref())?;
            match lower {
                Some(l) => eprintln!("level: lower bound {l}, upper bound {upper}"),
                None => eprintln!("level: upper bound {upper}"),
            }
            Ok(())
        }
        Cmd::VerifyTheorem { nvars, p, order, samples, seed, max_nvars, generator, out } => {
            let ring = RingSpec::new(p, nvars, parse_order(&order)?)
                .map_err(|e| AppError::Usage(e.to_string()))?;
            let mut candidates = Vec::new();
            for path in &generator {
                candidates.push(load_complex(ring, path)?);
            }
            let opts = RdimOptions { samples, seed, max_nvars, candidate_generators: candidates };
            let report = rdim_report(ring, &opts)?;
            let wire = rdim_report_to_wire(&report);
            emit(&wire, out.as_deref())?;
            eprintln!(
                "dim {}: level lower bound {}, generation-time evidence {}, {} sample(s), verified: {}",
                report.dim,
                report.rdim_lower_bound(),
                report.gentime_evidence(),
                report.battery.len(),
                report.verified()
            );
            if !report.verified() {
                return Err(AppError::Pipeline(CertFailure::PreconditionFailed(
                    "the dimension report did not verify".into(),
                )));
            }
            Ok(())
        }
        Cmd::Groebner { common, gens } => {
            let ring = parse_ring(&common.ring, &common.order)?;
            let ps = parse_polys(ring, &gens)?;
            let gb = groebner_basis(ring, &ps).map_err(|e| AppError::Usage(e.to_string()))?;
            #[derive(Serialize)]
            struct GroebnerWire {
                schema_version: u32,
                ring: RingSpec,
                gens: Vec<String>,
                basis: Vec<String>,
            }
            let wire = GroebnerWire {
                schema_version: SCHEMA_VERSION,
                ring,
                gens: ps.iter().map(|q| q.to_string()).collect(),
                basis: gb.gens().iter().map(|v| v[0].to_string()).collect(),
            };
            emit(&wire, common.out.as_deref())?;
            eprintln!("basis: {} element(s)", gb.gens().len());
            Ok(())
        }
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&std::path::Path>) -> Result<(), AppError> {
    let mut json = serde_json::to_string_pretty(value)
        .map_err(|e| AppError::Usage(format!("serialization failed: {e}")))?;
    json.push('\n');
    match out {
        None => {
            print!("{json}");
            Ok(())
        }
        Some(path) => std::fs::write(path, json)
            .map_err(|e| AppError::Usage(format!("cannot write {}: {e}", path.display()))),
    }
}

fn parse_order(s: &str) -> Result<MonomialOrder, AppError> {
    match s {
        "grevlex" => Ok(MonomialOrder::Grevlex),
        "lex" => Ok(MonomialOrder::Lex),
        other => Err(AppError::Usage(format!(
            "--order must be grevlex or lex, got {other}"
        ))),
    }
}

/// `Fp[n],p=<prime>` | `Fp[n]` | `Q[n]`
fn parse_ring(spec: &str, order: &str) -> Result<RingSpec, AppError> {
    let order = parse_order(order)?;
    let bad = || AppError::Usage(format!("--ring syntax is Fp[n],p=<prime> or Q[n], got {spec}"));
    let spec = spec.trim();
    let (base, tail) = match spec.split_once(']') {
        Some((head, tail)) => (head, tail),
        None => return Err(bad()),
    };
    let (kind, nvars) = base.split_once('[').ok_or_else(bad)?;
    let nvars: usize = nvars.parse().map_err(|_| bad())?;
    match kind {
        "Q" => {
            if !tail.is_empty() {
                return Err(bad());
            }
            Ok(RingSpec { characteristic: 0, num_vars: nvars, order })
        }
        "Fp" => {
            let p = if tail.is_empty() {
                DEFAULT_PRIME
            } else {
                let tail = tail.strip_prefix(',').ok_or_else(bad)?;
                let val = tail.strip_prefix("p=").ok_or_else(bad)?;
                val.parse().map_err(|_| bad())?
            };
            RingSpec::new(p, nvars, order).map_err(|e| AppError::Usage(e.to_string()))
        }
        _ => Err(bad()),
    }
}

fn parse_polys(ring: RingSpec, csv: &str) -> Result<Vec<Poly>, AppError> {
    csv.split(',')
        .map(|s| Poly::parse(ring, s).map_err(|e| AppError::Usage(format!("bad polynomial '{s}': {e}"))))
        .collect()
}

fn parse_sequence(ring: RingSpec, csv: &str) -> Result<Vec<AlgebraElement>, AppError> {
    Ok(parse_polys(ring, csv)?
        .into_iter()
        .map(AlgebraElement::in_degree_zero)
        .collect())
}

fn parse_exponents(csv: &str) -> Result<Vec<u32>, AppError> {
    csv.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| AppError::Usage(format!("bad exponent '{s}'")))
        })
        .collect()
}

fn load_complex(ring: RingSpec, path: &std::path::Path) -> Result<FreeComplex, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let wire: ComplexWire = serde_json::from_str(&text)
        .map_err(|e| AppError::Usage(format!("bad complex JSON in {}: {e}", path.display())))?;
    if wire.ring != ring {
        return Err(AppError::Usage(format!(
            "{} is over a different ring than the command line",
            path.display()
        )));
    }
    wire_to_complex(&wire).map_err(|e| AppError::Usage(e.to_string()))
}

fn load_complex_or_free(
    ring: RingSpec,
    path: Option<&std::path::Path>,
) -> Result<FreeComplex, AppError> {
    match path {
        None => Ok(FreeComplex::stalk(ring, 0, 1)),
        Some(p) => load_complex(ring, p),
    }
}

fn load_presentation_or_free(
    ring: RingSpec,
    path: Option<&std::path::Path>,
) -> Result<ModulePresentation, AppError> {
    match path {
        None => Ok(ModulePresentation::free(ring, 1)),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| AppError::Usage(format!("cannot read {}: {e}", p.display())))?;
            let wire: PresentationWire = serde_json::from_str(&text)
                .map_err(|e| AppError::Usage(format!("bad module JSON in {}: {e}", p.display())))?;
            if wire.ring != ring {
                return Err(AppError::Usage(format!(
                    "{} is over a different ring than the command line",
                    p.display()
                )));
            }
            wire_to_presentation(&wire).map_err(|e| AppError::Usage(e.to_string()))
        }
    }
}

/// `koszul:<seq>` (with a certified lower bound), `file:<path>` or
/// `free:<rank>@<degree>`.
fn parse_target(
    ring: RingSpec,
    g: &FreeComplex,
    target: &str,
) -> Result<(FreeComplex, Option<usize>), AppError> {
    if let Some(seq) = target.strip_prefix("koszul:") {
        let xs = parse_sequence(ring, seq)?;
        let k = koszul_object(g, &xs).map_err(|e| AppError::Usage(e.to_string()))?;
        // a certificate on the same sequence bounds the level of the
        // (shifted) Koszul complex from below
        let lower = match ghost_certificate(g, g, &xs) {
            Ok(cert) => Some(cert.implied_level_lower_bound()),
            Err(_) => None,
        };
        return Ok((k, lower));
    }
    if let Some(path) = target.strip_prefix("file:") {
        return Ok((load_complex(ring, std::path::Path::new(path))?, None));
    }
    if let Some(spec) = target.strip_prefix("free:") {
        let (rank, degree) = match spec.split_once('@') {
            Some((r, d)) => (
                r.parse().map_err(|_| AppError::Usage(format!("bad rank '{r}'")))?,
                d.parse().map_err(|_| AppError::Usage(format!("bad degree '{d}'")))?,
            ),
            None => (
                spec.parse().map_err(|_| AppError::Usage(format!("bad rank '{spec}'")))?,
                0,
            ),
        };
        return Ok((FreeComplex::stalk(ring, degree, rank), None));
    }
    Err(AppError::Usage(format!(
        "--target must be koszul:<seq>, file:<path> or free:<rank>@<degree>, got {target}"
    )))
}
