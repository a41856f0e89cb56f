use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use planeaut::dvr::remove_pole;
use planeaut::equivariant::{
    centralizer_structure_noncyclic, classify_ad_centralizer, classify_fiber_centralizer, DiagonalGroup,
    FiniteDiagonalGroup, NoncyclicGroup,
};
use planeaut::family::{linearize_family_generic, remove_all_poles, verify_family};
use planeaut::fields::{DvrContext, Field};
use planeaut::group::{linearize_over_field, verify_linearization};
use planeaut::json;
use planeaut::plane::decompose_endo;
use planeaut::selftest::{run_suite, SUITES};
use planeaut::{random, Error};

/// Exact computations with polynomial automorphisms of the affine plane.
///
/// Exit codes: 0 success, 1 verification failed, 2 invalid input, 3 mathematical failure.
#[derive(Parser)]
#[command(name = "planeaut", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Field for inputs that do not name one, e.g. "Q", "Q(zeta_6)", "Q(x)".
    #[arg(long, global = true)]
    field: Option<String>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// f∘g for {"f": map, "g": map}.
    Compose { input: String },
    /// Inverse of an automorphism.
    Invert { input: String },
    /// Amalgam word of an automorphism, innermost factor first.
    Decompose { input: String },
    /// Degrees of the elementary factors.
    Polydegree { input: String },
    /// Structure of the equivariant automorphisms of a diagonal group.
    Centralizer {
        /// Comma-separated polydegree; omit for the global centralizer of a non-cyclic group.
        #[arg(long, value_delimiter = ',')]
        polydegree: Option<Vec<u32>>,
        /// Order of the roots of unity; 0 or absent for a torus.
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// Exponents "a,b" of one generator; repeat for a non-cyclic finite group.
        #[arg(long, required = true, allow_hyphen_values = true)]
        weight: Vec<String>,
        /// Describe the fiber centralizer instead of the full one.
        #[arg(long)]
        fiber: bool,
    },
    /// Conjugate a group action to a linear one.
    Linearize { input: String },
    /// Make a linearizer integral at x = a: input {"psi": map, "rho": [matrix, ...]}.
    RemovePole {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Linearize a family over κ[x] and remove all poles.
    Family { input: String },
    /// Re-check a report: input {"family": ..., "report": ...}.
    Verify { input: String },
    /// Run oracle suites (PLANEAUT_SEED sets the seed).
    Selftest {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Result payload and exit code.
type Outcome = (Value, u8);

fn read_input(arg: &str) -> Result<Value, Error> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Schema(format!("stdin: {e}")))?;
        s
    } else if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Schema(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("invalid JSON: {e}")))
}

fn field_flag(cli_field: &Option<String>) -> Result<Option<Field>, Error> {
    cli_field.as_deref().map(json::parse_field).transpose()
}

fn pair(s: &str) -> Result<(i64, i64), Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((
            a.parse().map_err(|_| Error::Schema(format!("bad weight {s:?}")))?,
            b.parse().map_err(|_| Error::Schema(format!("bad weight {s:?}")))?,
        )),
        _ => Err(Error::Schema(format!("weight must be \"a,b\", got {s:?}"))),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let field = field_flag(&cli.field)?;
    let f = field.as_ref();
    match &cli.command {
        Command::Compose { input } => {
            let v = read_input(input)?;
            let get = |k: &str| v.get(k).ok_or_else(|| Error::Schema(format!("missing \"{k}\"")));
            let a = json::endo_from_json(get("f")?, f)?;
            let b = json::endo_from_json(get("g")?, f.or(Some(a.field())))?;
            Ok((json::endo_to_json(&a.compose(&b)?), 0))
        }
        Command::Invert { input } => {
            let a = json::aut_from_json(&read_input(input)?, f)?;
            Ok((json::endo_to_json(a.inverse()), 0))
        }
        Command::Decompose { input } => {
            let e = json::endo_from_json(&read_input(input)?, f)?;
            Ok((json::decomposition_to_json(&decompose_endo(&e)?), 0))
        }
        Command::Polydegree { input } => {
            let e = json::endo_from_json(&read_input(input)?, f)?;
            Ok((json!({"polydegree": decompose_endo(&e)?.polydegree()}), 0))
        }
        Command::Centralizer { polydegree, k, weight, fiber } => {
            let weights = weight.iter().map(|w| pair(w)).collect::<Result<Vec<_>, _>>()?;
            let desc = match polydegree {
                Some(d) => {
                    if weights.len() != 1 {
                        return Err(Error::Schema("a polydegree query takes exactly one --weight".into()));
                    }
                    let (a, b) = weights[0];
                    let g = DiagonalGroup { a, b, k: *k };
                    if *fiber {
                        classify_fiber_centralizer(d, &g)?
                    } else {
                        classify_ad_centralizer(d, &g)?
                    }
                }
                None if *k == 0 => {
                    let [(a, b)] = weights[..] else {
                        return Err(Error::Schema("a torus takes exactly one --weight".into()));
                    };
                    centralizer_structure_noncyclic(&NoncyclicGroup::Torus(a, b))?
                }
                None => centralizer_structure_noncyclic(&NoncyclicGroup::Finite(FiniteDiagonalGroup { k: *k, gens: weights }))?,
            };
            Ok((json::centralizer_to_json(&desc), 0))
        }
        Command::Linearize { input } => {
            let g = json::group_from_json(&read_input(input)?, None, f)?;
            let (psi, rho) = linearize_over_field(&g)?;
            let ok = verify_linearization(&psi, &g, &rho);
            Ok((json!({"psi": json::aut_to_json(&psi), "rho": json::rep_to_json(&rho), "verified": ok}), if ok { 0 } else { 1 }))
        }
        Command::RemovePole { input, at } => {
            let v = read_input(input)?;
            let psi = json::aut_from_json(v.get("psi").ok_or_else(|| Error::Schema("missing \"psi\"".into()))?, f)?;
            let field = psi.field().clone();
            let ctx = field.rf_ctx().ok_or_else(|| Error::Schema("remove-pole needs a function field".into()))?;
            let rho = json::rep_from_json(v.get("rho").ok_or_else(|| Error::Schema("missing \"rho\"".into()))?, &field.base_field())?;
            let center = json::parse_scalar_str(at, &field.base_field())?
                .as_cyclo()
                .ok_or_else(|| Error::Schema("--at must be a constant".into()))?;
            let dvr = DvrContext::new(ctx.clone(), center);
            let (alpha, psi_t, trace) = remove_pole(&psi, &rho, &dvr)?;
            Ok((
                json!({"alpha": json::aut_to_json(&alpha), "psi": json::aut_to_json(&psi_t), "trace": json::kr_trace_to_json(&trace)}),
                0,
            ))
        }
        Command::Family { input } => {
            let nu = json::family_from_json(&read_input(input)?)?;
            let (psi, rho) = linearize_family_generic(&nu)?;
            let report = remove_all_poles(&psi, &rho, &nu)?;
            Ok((json::report_to_json(&report), if report.verified { 0 } else { 1 }))
        }
        Command::Verify { input } => {
            let v = read_input(input)?;
            let nu = json::family_from_json(v.get("family").ok_or_else(|| Error::Schema("missing \"family\"".into()))?)?;
            let report = json::report_from_json(v.get("report").ok_or_else(|| Error::Schema("missing \"report\"".into()))?, nu.field())?;
            let ok = verify_family(&report, &nu);
            Ok((json!({"verified": ok}), if ok { 0 } else { 1 }))
        }
        Command::Selftest { suite } => {
            let seed = random::env_seed();
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                return Err(Error::Schema(format!("unknown suite {suite:?}; choose from {}", SUITES.join(", "))));
            };
            // suites are independent pure workloads
            let reports: Vec<_> = std::thread::scope(|s| {
                let handles: Vec<_> = names.iter().map(|n| s.spawn(move || run_suite(n, seed).expect("known suite"))).collect();
                handles.into_iter().map(|h| h.join().expect("suite worker panicked")).collect()
            });
            let ok = reports.iter().all(|r| r.passed());
            let body: Vec<Value> = reports.iter().map(json::suite_to_json).collect();
            Ok((json!({"seed": seed, "suites": body, "passed": ok}), if ok { 0 } else { 1 }))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Schema(_) | Error::DescriptorMismatch(_) => 2,
        _ => 3,
    }
}

fn emit(cli: &Cli, v: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    match &cli.output {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    std::panic::set_hook(Box::new(|_| {}));
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&cli)));
    let (payload, code) = match outcome {
        Ok(Ok(o)) => o,
        Ok(Err(e)) => (json::error_to_json(&e), exit_code_for(&e)),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (json!({"error": "InternalError", "message": msg}), 3)
        }
    };
    if let Err(e) = emit(&cli, &payload) {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
