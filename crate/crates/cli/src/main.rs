//! `u3rb`: verification, Groebner bases and conjugation search for
//! Rota-Baxter operators on upper-triangular 3x3 matrices.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use u3rb::catalog::{self, CaseOptions, CaseSpec, VerifyOptions};
use u3rb::formats::{self, CaseFile, GbReport, OperatorFile, SystemFile, WitnessFile};
use u3rb::groebner::{buchberger, Limits};
use u3rb::rb::generate_system;
use u3rb::transform::{
    build_psi, canonicalize_idempotent, canonicalize_nilpotent, conjugate_operator,
    find_conjugation, theta13, AutoParams, SearchOptions, SearchResult,
};
use u3rb::{Error, MonomialOrder, MultiPoly, Operator, Rational, UTMatrix};

#[derive(Parser)]
#[command(name = "u3rb", version, about)]
struct Cli {
    /// Worker threads for parallel steps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the catalog of forty families.
    VerifyCatalog {
        /// Only these families (repeatable).
        #[arg(long = "family")]
        families: Vec<String>,
        /// Random specializations per family for the closure checks.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check the RB identity for an operator file.
    Check {
        file: PathBuf,
        /// Override the weight stored in the file.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Emit the polynomial system of an ansatz or case preset.
    System {
        #[arg(long, conflicts_with = "ansatz", required_unless_present = "ansatz")]
        preset: Option<String>,
        /// A case file (only its ansatz is used).
        #[arg(long)]
        ansatz: Option<PathBuf>,
        #[arg(long, default_value = "grevlex")]
        order: MonomialOrder,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Compute a reduced Groebner basis of a system file.
    Gb {
        file: PathBuf,
        /// Override the order stored in the file (`lex`, `grevlex`, `elim:k`).
        #[arg(long)]
        order: Option<MonomialOrder>,
        #[command(flatten)]
        limits: LimitArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decide membership of a polynomial in the ideal of a system file.
    Member {
        sysfile: PathBuf,
        poly: String,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Canonical form of a nilpotent or idempotent matrix.
    Canonicalize {
        matrix: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Conjugate an operator by psi or theta13.
    Conjugate {
        opfile: PathBuf,
        #[command(flatten)]
        psi: PsiArgs,
        #[arg(long)]
        theta: bool,
        /// Also divide by this scalar.
        #[arg(long, allow_hyphen_values = true)]
        scale: Option<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Search for a witness conjugating one operator to (a multiple of) another.
    FindConj {
        op1: PathBuf,
        op2: PathBuf,
        #[arg(long)]
        allow_theta: bool,
        #[arg(long)]
        no_scaling: bool,
        #[command(flatten)]
        limits: LimitArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Nilpotency degree of an operator, or the RB index of the catalog.
    RbIndex {
        opfile: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Replay a case of the classification.
    Case {
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        preset: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
        /// Skip the full system and use the template system only.
        #[arg(long)]
        reduced_only: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long)]
    max_pairs: Option<usize>,
    /// Seconds per Groebner basis computation.
    #[arg(long)]
    timeout: Option<u64>,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        let mut l = match self.timeout {
            Some(s) => Limits::with_timeout(Duration::from_secs(s)),
            None => Limits::unlimited(),
        };
        l.max_pairs = self.max_pairs;
        l
    }
}

#[derive(Args)]
struct PsiArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
}

impl PsiArgs {
    fn any(&self) -> bool {
        [
            &self.alpha,
            &self.beta,
            &self.gamma,
            &self.delta,
            &self.epsilon,
        ]
        .iter()
        .any(|a| a.is_some())
    }

    fn params(&self) -> anyhow::Result<AutoParams> {
        let get = |a: &Option<String>, default: i64| -> anyhow::Result<Rational> {
            match a {
                Some(s) => Ok(s.parse()?),
                None => Ok(Rational::from_int(default)),
            }
        };
        Ok(AutoParams::new(
            get(&self.alpha, 1)?,
            get(&self.beta, 0)?,
            get(&self.gamma, 0)?,
            get(&self.delta, 1)?,
            get(&self.epsilon, 0)?,
        ))
    }
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Pass,
    Fail,
}

fn write_json<T: serde::Serialize>(path: &Option<PathBuf>, value: &T) -> anyhow::Result<()> {
    if let Some(p) = path {
        std::fs::write(p, formats::to_json(value)?)
            .with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_operator(path: &Path) -> anyhow::Result<Operator<MultiPoly>> {
    let f = OperatorFile::read(path).with_context(|| path.display().to_string())?;
    f.to_operator().with_context(|| path.display().to_string())
}

fn read_rational_operator(path: &Path) -> anyhow::Result<Operator<Rational>> {
    read_operator(path)?.as_rational().ok_or_else(|| {
        anyhow!(Error::Format(format!(
            "{}: operator has parameters",
            path.display()
        )))
    })
}

fn read_system(path: &Path) -> anyhow::Result<SystemFile> {
    formats::read_json(path).with_context(|| path.display().to_string())
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::VerifyCatalog {
            families,
            samples,
            seed,
            json,
        } => {
            let entries = catalog::load_catalog();
            for f in &families {
                if catalog::find_entry(&entries, f).is_none() {
                    return Err(Error::InvalidArgument(format!("unknown family `{f}`")).into());
                }
            }
            let report = catalog::verify_entries(
                &entries,
                &VerifyOptions {
                    samples,
                    seed,
                    families,
                },
            )?;
            print!("{}", report.to_text());
            for e in &report.entries {
                if e.image_dimension > 2 {
                    println!("{}: image dimension {}", e.id, e.image_dimension);
                }
            }
            write_json(&json, &report)?;
            Ok(if report.all_ok {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
        Command::Check { file, weight, json } => {
            let mut r = read_operator(&file)?;
            if let Some(w) = weight {
                r = r.with_weight(w.parse()?);
            }
            let res = r.rb_residual();
            let ok = res.is_zero();
            println!(
                "RB weight {}: {}",
                r.weight(),
                if ok { "YES" } else { "NO" }
            );
            let mut faults = Vec::new();
            for (u, v, m) in &res.entries {
                if !m.is_zero() {
                    println!("  pair ({u}, {v}): {m}");
                    faults.push(
                        json!({"x": u.to_string(), "y": v.to_string(), "residual": m.to_string()}),
                    );
                }
            }
            write_json(
                &json,
                &json!({
                    "schema_version": formats::SCHEMA_VERSION,
                    "weight": r.weight().to_string(),
                    "rota_baxter": ok,
                    "nonzero_pairs": faults,
                }),
            )?;
            Ok(if ok { Outcome::Pass } else { Outcome::Fail })
        }
        Command::System {
            preset,
            ansatz,
            order,
            out,
        } => {
            let spec = match (preset, ansatz) {
                (Some(p), _) => CaseSpec::preset(&p)?,
                (None, Some(path)) => {
                    let f: CaseFile =
                        formats::read_json(&path).with_context(|| path.display().to_string())?;
                    CaseSpec::from_file(f)?
                }
                (None, None) => unreachable!("clap requires one source"),
            };
            let g = generate_system(&spec.ansatz, order)?;
            emit(
                &out,
                &formats::to_json(&SystemFile::from_system(&g.system))?,
            )?;
            Ok(Outcome::Pass)
        }
        Command::Gb {
            file,
            order,
            limits,
            json,
        } => {
            let mut sys = read_system(&file)?.to_system()?;
            if let Some(o) = order {
                sys = sys.with_order(o);
            }
            let gb = buchberger(&sys, &limits.limits())?;
            let cert = gb.certify()?;
            for g in &gb.basis {
                println!("{}", g.to_string_with_order(gb.order()));
            }
            eprintln!(
                "{} elements, {} pairs, {} reductions, certificate {}",
                gb.basis.len(),
                gb.stats.pairs_processed,
                gb.stats.reductions,
                if cert.ok() { "ok" } else { "FAILED" }
            );
            write_json(&json, &GbReport::new(&gb, Some(&cert)))?;
            Ok(if cert.ok() {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
        Command::Member {
            sysfile,
            poly,
            limits,
        } => {
            let sys = read_system(&sysfile)?.to_system()?;
            let p = MultiPoly::parse(&poly, &sys.table).map_err(Error::from)?;
            let gb = buchberger(&sys, &limits.limits())?;
            let nf = gb.normal_form(&p)?;
            if nf.is_zero() {
                println!("member: YES");
                Ok(Outcome::Pass)
            } else {
                println!("member: NO (normal form {nf})");
                Ok(Outcome::Fail)
            }
        }
        Command::Canonicalize { matrix, json } => {
            let m = UTMatrix::<Rational>::parse(&matrix, 3).map_err(Error::from)?;
            let (kind, form, witness) = if m.is_strictly_upper() {
                let c = canonicalize_nilpotent(&m)?;
                ("nilpotent", c.form.to_string(), c.witness)
            } else if m.is_idempotent() {
                let c = canonicalize_idempotent(&m)?;
                ("idempotent", c.form.to_string(), c.witness)
            } else {
                bail!(Error::InvalidArgument(format!(
                    "{m} is neither nilpotent nor idempotent"
                )));
            };
            let replay = witness.apply_element(&m)?;
            println!("form {form}");
            println!("witness {witness}");
            write_json(
                &json,
                &json!({
                    "schema_version": formats::SCHEMA_VERSION,
                    "input": m.to_string(),
                    "kind": kind,
                    "form": form,
                    "witness": witness,
                }),
            )?;
            Ok(if replay.to_string() == form {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
        Command::Conjugate {
            opfile,
            psi,
            theta,
            scale,
            out,
        } => {
            let r = read_operator(&opfile)?;
            if theta == psi.any() {
                bail!(Error::InvalidArgument(
                    "give either --theta or psi parameters (--alpha ... --epsilon)".into()
                ));
            }
            let phi = if theta {
                theta13()
            } else {
                build_psi(&psi.params()?)?
            };
            let mut c = conjugate_operator(&r, &phi);
            if let Some(k) = scale {
                c = u3rb::rb::scale_operator(&c, &k.parse()?)?;
            }
            emit(&out, &formats::to_json(&OperatorFile::from_operator(&c))?)?;
            Ok(Outcome::Pass)
        }
        Command::FindConj {
            op1,
            op2,
            allow_theta,
            no_scaling,
            limits,
            json,
        } => {
            let r = read_rational_operator(&op1)?;
            let s = read_rational_operator(&op2)?;
            let opts = SearchOptions {
                allow_theta,
                allow_scaling: !no_scaling,
                limits: limits.limits(),
                ..SearchOptions::default()
            };
            match find_conjugation(&r, &s, &opts)? {
                SearchResult::Found(w) => {
                    let ok = w.apply_operator(&r)? == s;
                    println!("witness {w}");
                    println!("replay: {}", if ok { "ok" } else { "FAILED" });
                    write_json(&json, &WitnessFile::new(w))?;
                    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
                }
                SearchResult::NotFound(branches) => {
                    println!("none found");
                    for b in &branches {
                        println!(
                            "  {}: {}",
                            if b.theta { "theta13 . psi" } else { "psi" },
                            if b.inconsistent {
                                "constraint ideal is <1>"
                            } else {
                                "no rational witness"
                            }
                        );
                    }
                    write_json(
                        &json,
                        &json!({"schema_version": formats::SCHEMA_VERSION, "found": false, "branches": branches}),
                    )?;
                    Ok(Outcome::Fail)
                }
            }
        }
        Command::RbIndex { opfile, json } => match opfile {
            Some(p) => {
                let r = read_operator(&p)?;
                let d = catalog::nilpotency_degree(&r);
                match d {
                    Some(d) => println!("nilpotency degree {d}"),
                    None => println!("not nilpotent"),
                }
                write_json(
                    &json,
                    &json!({"schema_version": formats::SCHEMA_VERSION, "nilpotency_degree": d}),
                )?;
                Ok(if d.is_some() {
                    Outcome::Pass
                } else {
                    Outcome::Fail
                })
            }
            None => {
                let idx = catalog::rb_index(&catalog::load_catalog());
                for (id, d) in &idx.degrees {
                    println!("{id:<4} {d}");
                }
                println!("rb-index {}", idx.index);
                println!("R^2 != 0: {}", idx.square_nonzero.join(", "));
                write_json(&json, &idx)?;
                Ok(Outcome::Pass)
            }
        },
        Command::Case {
            preset,
            file,
            limits,
            reduced_only,
            json,
        } => {
            let spec = match (preset, file) {
                (Some(p), _) => CaseSpec::preset(&p)?,
                (None, Some(path)) => {
                    let f: CaseFile =
                        formats::read_json(&path).with_context(|| path.display().to_string())?;
                    CaseSpec::from_file(f)?
                }
                (None, None) => unreachable!("clap requires one source"),
            };
            let mut opts = CaseOptions {
                reduced_only,
                max_pairs: limits.max_pairs,
                ..CaseOptions::default()
            };
            if let Some(t) = limits.timeout {
                opts.timeout = Duration::from_secs(t);
            }
            let report = catalog::run_case(&spec, &opts)?;
            print!("{}", report.to_text());
            write_json(&json, &report)?;
            if report.resource_limited {
                return Err(anyhow::Error::new(ResourceLimitHit)
                    .context(format!("case {} ran out of budget", spec.name())));
            }
            Ok(if report.ok() {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
    }
}

#[derive(Debug)]
struct ResourceLimitHit;

impl std::fmt::Display for ResourceLimitHit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("resource limit")
    }
}

impl std::error::Error for ResourceLimitHit {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ResourceLimitHit>().is_some() {
        return 3;
    }
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::ResourceLimit(_) => 3,
                Error::Parse(_)
                | Error::Format(_)
                | Error::Json(_)
                | Error::InvalidArgument(_)
                | Error::UnknownVariable(_) => 2,
                _ => 1,
            };
        }
        if cause.downcast_ref::<u3rb::ParseError>().is_some()
            || cause.downcast_ref::<serde_json::Error>().is_some()
            || cause.downcast_ref::<std::io::Error>().is_some()
        {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
