//! The `fimod` command line: loads modules from presentation or explicit
//! files and surfaces the engine's invariants, homology, filtrations,
//! projective-dimension classification, complexes and fuzzing.
//!
//! Exit codes: 0 success, 1 usage or input errors, 2 a certified property
//! violation (an engine or input bug), 3 an honest window-limited result.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fimod_cli::formats::{self, FormatError};
use fimod_cli::fuzz::{self, FuzzProfile, SuiteConfig};
use fimod_core::complex as fcomplex;
use fimod_core::filtration::{self, FiltrationVerdict, PdClassification};
use fimod_core::homology;
use fimod_core::module::ExtendedDegree;
use fimod_core::TruncatedFIModule;

#[derive(Parser)]
#[command(
    name = "fimod",
    version,
    about = "Homological invariants of FI-modules on a finite degree window"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FileArgs {
    /// Input module file (a presentation, or explicit matrices)
    file: PathBuf,
    /// Write the machine-readable report here ("-" for stdout)
    #[arg(long)]
    json: Option<PathBuf>,
    /// Trailing degrees that must be torsion-free before torsion data is
    /// certified
    #[arg(long, default_value_t = 2)]
    margin: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check the functor relations of a module file
    Validate(FileArgs),
    /// Dimension sequence, generating degree and torsion degree
    Invariants(FileArgs),
    /// Homology groups and homological degrees through step smax
    Homology {
        #[command(flatten)]
        file: FileArgs,
        #[arg(long, default_value_t = 3)]
        smax: usize,
    },
    /// Test for a filtration by induced modules
    IsFiltered(FileArgs),
    /// Extract and verify the canonical filtration
    Filtration(FileArgs),
    /// Classify the projective dimension
    Pd(FileArgs),
    /// Apply the shift functor and print the resulting module
    Shift {
        #[command(flatten)]
        file: FileArgs,
        #[arg(short = 'd', default_value_t = 1)]
        distance: usize,
    },
    /// Apply the derivative functor and print the resulting module
    Derivative(FileArgs),
    /// Build and verify the finite complex of filtered modules
    NagpalComplex(FileArgs),
    /// Evaluate the regularity bounds and the shift inequality
    RegularityCheck {
        #[command(flatten)]
        file: FileArgs,
        #[arg(long, default_value_t = 3)]
        smax: usize,
    },
    /// Run random presentations through the whole invariant suite
    Fuzz {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Restrict to one field (Q, F2, Fp:3, ...)
        #[arg(long)]
        field: Option<String>,
        #[arg(long, default_value_t = 3)]
        smax: usize,
        #[arg(long, default_value_t = 2)]
        margin: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Outcome levels, ordered by severity for exit-code purposes.
#[derive(PartialEq, Eq, PartialOrd, Ord, Clone, Copy)]
enum Status {
    Ok,
    Uncertified,
    Violation,
}

impl Status {
    fn text(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Uncertified => "uncertified",
            Status::Violation => "violation",
        }
    }

    fn exit(self) -> ExitCode {
        match self {
            Status::Ok => ExitCode::SUCCESS,
            Status::Uncertified => ExitCode::from(3),
            Status::Violation => ExitCode::from(2),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Usage problems exit 1; help and version print and exit 0.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(status) => status.exit(),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn load(args: &FileArgs) -> Result<(TruncatedFIModule, &'static str), String> {
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| format!("cannot read {}: {e}", args.file.display()))?;
    match formats::load_module(&text) {
        Ok(pair) => Ok(pair),
        Err(FormatError::Semantic(m)) => Err(m),
        Err(e) => Err(e.to_string()),
    }
}

fn emit(args_json: &Option<PathBuf>, report: &Value) -> Result<(), String> {
    if let Some(path) = args_json {
        let text = serde_json::to_string_pretty(report).expect("report serializes");
        if path.as_os_str() == "-" {
            println!("{text}");
        } else {
            std::fs::write(path, text + "\n")
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        }
    }
    Ok(())
}

fn envelope(command: &str, file: &FileArgs, kind: &str, v: &TruncatedFIModule) -> Value {
    json!({
        "command": command,
        "input": file.file.display().to_string(),
        "format": kind,
        "field": formats::field_text(v.field()),
        "window": v.window(),
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    let (Value::Object(b), Value::Object(e)) = (&mut base, extra) else {
        unreachable!("reports are objects")
    };
    b.extend(e);
    base
}

fn ext(e: ExtendedDegree) -> String {
    format!("{e}")
}

fn run(cli: Cli) -> Result<Status, String> {
    match cli.command {
        Command::Validate(args) => {
            let text = std::fs::read_to_string(&args.file)
                .map_err(|e| format!("cannot read {}: {e}", args.file.display()))?;
            // Parse without the loader so an invalid module is reported
            // rather than rejected.
            let is_explicit = text.lines().any(|l| l.trim_start().starts_with("dims"));
            let (module, kind) = if is_explicit {
                (formats::parse_explicit(&text).map_err(|e| e.to_string())?, "explicit")
            } else {
                let pf = formats::parse_presentation(&text).map_err(|e| e.to_string())?;
                (formats::materialize(&pf).map_err(|e| e.to_string())?, "presentation")
            };
            let report = module.validate();
            let status = if report.is_valid() { Status::Ok } else { Status::Violation };
            let body = json!({
                "valid": report.is_valid(),
                "violations": report.violations.iter().map(|v| json!({
                    "degree": v.degree,
                    "relation": v.relation,
                    "first_difference": v.first_difference.map(|(r, c)| vec![r, c]),
                })).collect::<Vec<_>>(),
                "status": status.text(),
            });
            emit(&args.json, &merge(envelope("validate", &args, kind, &module), body))?;
            if report.is_valid() {
                println!("valid: all functor relations hold");
            } else {
                println!("INVALID: {} violated relations", report.violations.len());
                for v in report.violations.iter().take(10) {
                    println!("  degree {}: {}", v.degree, v.relation);
                }
            }
            Ok(status)
        }
        Command::Invariants(args) => {
            let (module, kind) = load(&args)?;
            let (gd, gd_cert) = homology::generating_degree(&module);
            let (td, td_cert) = module.torsion_degree(args.margin);
            let (torsion, _, split_cert) = module.torsion_split(args.margin);
            let status =
                if gd_cert && td_cert && split_cert { Status::Ok } else { Status::Uncertified };
            let body = json!({
                "dims": module.dims(),
                "gd": ext(gd),
                "gd_certified": gd_cert,
                "td": ext(td),
                "td_certified": td_cert,
                "torsion_dims": torsion.dims(),
                "torsion_certified": split_cert,
                "zero": module.is_zero(),
                "status": status.text(),
            });
            emit(&args.json, &merge(envelope("invariants", &args, kind, &module), body))?;
            println!("dims: {:?}", module.dims());
            println!("gd = {gd} ({})", if gd_cert { "certified" } else { "window-limited" });
            println!("td = {td} ({})", if td_cert { "certified" } else { "window-limited" });
            Ok(status)
        }
        Command::Homology { file: args, smax } => {
            let (module, kind) = load(&args)?;
            let report = homology::homology(&module, smax);
            let all_cert = (0..=smax).all(|s| report.certified(s));
            let status = if all_cert { Status::Ok } else { Status::Uncertified };
            let body = json!({
                "smax": smax,
                "entries": report.entries.iter().map(|e| json!({
                    "s": e.s,
                    "hd": ext(e.hd),
                    "certified": e.certified,
                    "dims": e.value.dims,
                    "horizon": e.horizon.map(ext),
                })).collect::<Vec<_>>(),
                "step_degrees": report.step_degrees.iter().map(|d| ext(*d)).collect::<Vec<_>>(),
                "computed_up_to": report.computed_up_to,
                "complete": report.complete,
                "status": status.text(),
            });
            emit(&args.json, &merge(envelope("homology", &args, kind, &module), body))?;
            for e in &report.entries {
                println!(
                    "hd_{} = {} ({}), dims {:?}",
                    e.s,
                    e.hd,
                    if e.certified { "certified" } else { "window-limited" },
                    e.value.dims
                );
            }
            Ok(status)
        }
        Command::IsFiltered(args) => {
            let (module, kind) = load(&args)?;
            let report = filtration::is_sharp_filtered(&module);
            let status = match report.verdict {
                FiltrationVerdict::Uncertified => Status::Uncertified,
                _ => Status::Ok,
            };
            let body = json!({
                "verdict": format!("{:?}", report.verdict),
                "refuted_at": report.refuted_at,
                "certified_up_to": report.certified_up_to,
                "status": status.text(),
            });
            emit(&args.json, &merge(envelope("is-filtered", &args, kind, &module), body))?;
            match report.verdict {
                FiltrationVerdict::Yes => println!("filtered: yes"),
                FiltrationVerdict::No => println!(
                    "filtered: no (nonzero first homology at degree {})",
                    report.refuted_at.unwrap_or(0)
                ),
                FiltrationVerdict::Uncertified => println!("filtered: window-limited"),
            }
            Ok(status)
        }
        Command::Filtration(args) => {
            let (module, kind) = load(&args)?;
            let pre = filtration::is_sharp_filtered(&module);
            let (status, body) = match pre.verdict {
                FiltrationVerdict::Yes => match filtration::extract_filtration(&module) {
                    Ok(report) => {
                        let poly = filtration::dimension_polynomial_check(&module, &report);
                        let status = if poly.verified { Status::Ok } else { Status::Violation };
                        (
                            status,
                            json!({
                                "verdict": "Yes",
                                "layers": report.layers.iter().map(|l| json!({
                                    "degree": l.degree,
                                    "dim": l.bottom.dim,
                                    "layer_dims": l.dims,
                                })).collect::<Vec<_>>(),
                                "polynomial": {
                                    "coefficients": poly.coefficients,
                                    "verified": poly.verified,
                                },
                                "status": status.text(),
                            }),
                        )
                    }
                    Err(e) => (
                        Status::Violation,
                        json!({"verdict": "Yes", "error": e, "status": "violation"}),
                    ),
                },
                FiltrationVerdict::No => (
                    Status::Ok,
                    json!({
                        "verdict": "No",
                        "refuted_at": pre.refuted_at,
                        "status": "ok",
                    }),
                ),
                FiltrationVerdict::Uncertified => (
                    Status::Uncertified,
                    json!({"verdict": "Uncertified", "status": "uncertified"}),
                ),
            };
            emit(&args.json, &merge(envelope("filtration", &args, kind, &module), body.clone()))?;
            println!("{}", serde_json::to_string_pretty(&body).unwrap());
            Ok(status)
        }
        Command::Pd(args) => {
            let (module, kind) = load(&args)?;
            let report = filtration::classify_pd(&module);
            let status = match report.classification {
                PdClassification::Uncertified => Status::Uncertified,
                _ => Status::Ok,
            };
            let body = json!({
                "classification": format!("{:?}", report.classification),
                "components": report.components.iter().map(|c| json!({
                    "degree": c.degree,
                    "dim": c.dim,
                    "projective": c.projective,
                })).collect::<Vec<_>>(),
                "reason": report.reason,
                "status": status.text(),
            });
            emit(&args.json, &merge(envelope("pd", &args, kind, &module), body))?;
            println!("pd: {:?} ({})", report.classification, report.reason);
            Ok(status)
        }
        Command::Shift { file: args, distance } => {
            let (module, kind) = load(&args)?;
            if module.window() < distance {
                return transform_window_error(&args, kind, &module, "shift", distance);
            }
            let shifted = module.shift_by(distance).expect("window checked");
            let body = json!({
                "distance": distance,
                "dims": shifted.dims(),
                "result_window": shifted.window(),
                "status": "ok",
            });
            emit(&args.json, &merge(envelope("shift", &args, kind, &module), body))?;
            print!("{}", formats::serialize_explicit(&shifted));
            Ok(Status::Ok)
        }
        Command::Derivative(args) => {
            let (module, kind) = load(&args)?;
            if module.window() < 1 {
                return transform_window_error(&args, kind, &module, "derivative", 1);
            }
            let derived = module.derivative().expect("window checked");
            let body = json!({
                "dims": derived.dims(),
                "result_window": derived.window(),
                "status": "ok",
            });
            emit(&args.json, &merge(envelope("derivative", &args, kind, &module), body))?;
            print!("{}", formats::serialize_explicit(&derived));
            Ok(Status::Ok)
        }
        Command::NagpalComplex(args) => {
            let (module, kind) = load(&args)?;
            let c = fcomplex::build_filtered_complex(&module, args.margin);
            let verification = fcomplex::verify_complex(&c);
            let max_torsion = c
                .stages
                .iter()
                .flat_map(|s| {
                    s.torsion_dims.iter().enumerate().filter(|(_, &d)| d > 0).map(|(n, _)| n + 1)
                })
                .max()
                .unwrap_or(0);
            let resolves = fcomplex::shifted_complex_resolves(&c, max_torsion).ok();
            let status = if !verification.ok() || resolves == Some(false) {
                Status::Violation
            } else if !c.complete {
                Status::Uncertified
            } else {
                Status::Ok
            };
            let body = json!({
                "complete": c.complete,
                "stop_reason": c.stop_reason,
                "length": c.length(),
                "stages": c.stages.iter().map(|s| json!({
                    "shift_amount": s.shift_amount,
                    "term_dims": s.term.dims(),
                    "torsion_dims": s.torsion_dims,
                    "gd_term": ext(s.gd_term),
                })).collect::<Vec<_>>(),
                "checks": verification.checks.iter().map(|ck| json!({
                    "name": ck.name, "ok": ck.ok, "detail": ck.detail,
                })).collect::<Vec<_>>(),
                "homology_dims": verification.homology_dims,
                "resolves_after_shift": max_torsion,
                "resolves": resolves,
                "status": status.text(),
            });
            emit(&args.json, &merge(envelope("nagpal-complex", &args, kind, &module), body))?;
            println!(
                "complex: {} stages, length {}, verification {}",
                c.stages.len(),
                c.length(),
                if verification.ok() { "ok" } else { "FAILED" }
            );
            for f in verification.failures() {
                println!("  FAILED {}: {}", f.name, f.detail);
            }
            Ok(status)
        }
        Command::RegularityCheck { file: args, smax } => {
            let (module, kind) = load(&args)?;
            let reg = homology::check_regularity(&module, smax, args.margin);
            let shift_checks = if module.window() >= 1 {
                homology::check_shift_inequality(&module, smax).ok()
            } else {
                None
            };
            let violated = !reg.certified_violations().is_empty()
                || shift_checks.iter().flatten().any(|c| c.certified && !c.holds);
            let all_cert = reg.checks.iter().all(|c| c.certified)
                && shift_checks.iter().flatten().all(|c| c.certified);
            let status = if violated {
                Status::Violation
            } else if all_cert {
                Status::Ok
            } else {
                Status::Uncertified
            };
            let body = json!({
                "gd": ext(reg.gd),
                "td": ext(reg.td),
                "td_certified": reg.td_certified,
                "bounds": reg.checks.iter().map(|c| json!({
                    "name": c.name,
                    "s": c.s,
                    "hd": ext(c.hd),
                    "bound": c.bound,
                    "holds": c.holds,
                    "certified": c.certified,
                })).collect::<Vec<_>>(),
                "shift_inequality": shift_checks.iter().flatten().map(|c| json!({
                    "s": c.s,
                    "lhs": ext(c.lhs),
                    "rhs": ext(c.rhs),
                    "holds": c.holds,
                    "certified": c.certified,
                })).collect::<Vec<_>>(),
                "status": status.text(),
            });
            emit(&args.json, &merge(envelope("regularity-check", &args, kind, &module), body))?;
            for c in &reg.checks {
                println!(
                    "s = {}: hd = {} <= {} [{}] {}",
                    c.s,
                    c.hd,
                    c.bound.map_or("-inf".into(), |b| b.to_string()),
                    c.name,
                    if c.holds { "ok" } else { "VIOLATED" }
                );
            }
            Ok(status)
        }
        Command::Fuzz { count, seed, field, smax, margin, json: json_path } => {
            let field = match field {
                Some(f) => Some(formats::parse_field(&f)?),
                None => None,
            };
            let profile = FuzzProfile::default();
            let cfg = SuiteConfig { smax, margin, ..SuiteConfig::default() };
            let summary = fuzz::run_fuzz(count, seed, field, &profile, &cfg);
            let status = if summary.total_violations > 0 {
                Status::Violation
            } else if summary.total_uncertified > 0 {
                Status::Uncertified
            } else {
                Status::Ok
            };
            let mut value = serde_json::to_value(&summary).expect("summary serializes");
            value
                .as_object_mut()
                .unwrap()
                .insert("status".into(), Value::String(status.text().into()));
            emit(&json_path, &value)?;
            println!(
                "fuzz: {} cases, {} filtered yes / {} no, {} violations, {} window-limited notes",
                summary.count,
                summary.filtered_yes,
                summary.filtered_no,
                summary.total_violations,
                summary.total_uncertified
            );
            for case in summary.cases.iter().filter(|c| !c.violations.is_empty()) {
                println!("  {}: {:?}", case.name, case.violations);
            }
            Ok(status)
        }
    }
}

fn transform_window_error(
    args: &FileArgs,
    kind: &str,
    module: &TruncatedFIModule,
    command: &str,
    needed: usize,
) -> Result<Status, String> {
    let body = json!({
        "error": format!("window {} too small for {command} by {needed}", module.window()),
        "status": "uncertified",
    });
    emit(&args.json, &merge(envelope(command, args, kind, module), body))?;
    eprintln!("window {} too small (need {needed})", module.window());
    Ok(Status::Uncertified)
}
