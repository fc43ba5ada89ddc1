//! `coulsum`: batch front end for the summation algorithms and the Coulomb
//! integral workbench.
//!
//! Exit codes: 0 when every requested check passes, 2 for unparsable input
//! or an unphysical state, 3 when a derivation finds nothing, 4 when a proof
//! fails, 5 when a numeric check fails.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coulsum::coulomb::{
    derive_contiguous, derive_dependencies, derive_unmixed, make_state, relation, verify_relation, CoulombError,
    Integral, RELATION_NAMES,
};
use coulsum::exactalg::Var;
use coulsum::hyperterm::{parse_term_in, HyperTerm};
use coulsum::numeric::{
    check_identity_numeric, integral_by_quadrature, integral_value, resolve_wavefunction, standard_identities,
    Identity, NumericConfig, NumericError, CONFIG_ENV, DEFAULT_STATES,
};
use coulsum::telescope::{
    gosper, parameterized_gosper, parse_certificate, serialize_certificate, verify_certificate, zeilberger,
    Recurrence, TelescopeCertificate, TelescopeError, DEFAULT_MAX_ORDER,
};

#[derive(Parser)]
#[command(name = "coulsum", version, about = "Hypergeometric summation and relativistic Coulomb integrals")]
struct Cli {
    /// Numeric configuration file (TOML).
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Indefinite summation by Gosper's algorithm.
    Gosper {
        /// The summand, or a file holding it.
        term: String,
        #[command(flatten)]
        common: TermArgs,
    },
    /// Creative telescoping: a recurrence for the definite sum.
    Zeilberger {
        term: String,
        #[arg(long)]
        recvar: String,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: usize,
        #[command(flatten)]
        common: TermArgs,
    },
    /// Linear dependencies among similar terms.
    Pgosper {
        /// At least two terms, each given inline or as a file.
        #[arg(required = true, num_args = 2..)]
        terms: Vec<String>,
        #[command(flatten)]
        common: TermArgs,
    },
    /// Re-verify a certificate file and print the proof.
    Prove { certfile: PathBuf },
    /// The Coulomb integral workbench.
    Coulomb {
        #[command(subcommand)]
        action: CoulombCommand,
    },
}

#[derive(Args)]
struct TermArgs {
    /// Summation variable.
    #[arg(long, default_value = "k")]
    sumvar: String,
    /// Write the certificate here. With several certificates the file
    /// name gets a `-<i>` suffix before its extension.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CoulombCommand {
    /// Derive the three-term recurrence of A, B or C by Zeilberger.
    Derive {
        which: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dependencies among the five series Z, X, Y, U, V.
    Deps {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derive the contiguous relations L1, L2, L3 and Chebyshev.
    Contiguous,
    /// Prove a relation symbolically, optionally checking it numerically.
    Verify {
        /// A relation name or `all`.
        name: String,
        /// Also check numerically on a grid of states and powers.
        #[arg(long)]
        numeric: bool,
        #[command(flatten)]
        grid: GridArgs,
        /// Seed for the free constants of `two_param`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = ["text", "json"], default_value = "text")]
        format: String,
    },
    /// Evaluate A_p, B_p or C_p at a state.
    Eval {
        #[arg(long)]
        which: String,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long = "Z")]
        z: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        kappa: i64,
        #[arg(long)]
        tol: Option<f64>,
        /// Also integrate the fitted wave functions and compare.
        #[arg(long)]
        quadrature: bool,
    },
}

#[derive(Args)]
struct GridArgs {
    /// A single state instead of the default ones (needs --n and --kappa).
    #[arg(long = "Z", requires_all = ["n", "kappa"])]
    z: Option<i64>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<i64>,
    /// Powers to check; defaults to 0,1,2,3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    p: Vec<i64>,
    #[arg(long)]
    tol: Option<f64>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

const PARSE: u8 = 2;
const DERIVATION: u8 = 3;
const PROOF: u8 = 4;
const NUMERIC: u8 = 5;

impl From<TelescopeError> for Failure {
    fn from(e: TelescopeError) -> Failure {
        let code = match e {
            TelescopeError::Parse(_) | TelescopeError::Malformed(_) => PARSE,
            TelescopeError::VerificationFailed { .. } => PROOF,
            TelescopeError::NotSimilar(_)
            | TelescopeError::NotSummable { .. }
            | TelescopeError::NoRecurrenceFound { .. }
            | TelescopeError::NoDependency => DERIVATION,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<CoulombError> for Failure {
    fn from(e: CoulombError) -> Failure {
        match e {
            CoulombError::UnphysicalState(_) | CoulombError::UnknownRelation(_) => Failure::new(PARSE, e.to_string()),
            CoulombError::ProofFailed { .. } => Failure::new(PROOF, e.to_string()),
            CoulombError::Derivation(t) => {
                let mut f = Failure::from(t);
                // A certificate of our own derivation that fails to verify is
                // a derivation failure, not a proof failure of user input.
                if f.code == PROOF {
                    f.code = DERIVATION;
                }
                f
            }
        }
    }
}

impl From<NumericError> for Failure {
    fn from(e: NumericError) -> Failure {
        match e {
            NumericError::Coulomb(c) => Failure::from(c),
            NumericError::Config(_) => Failure::new(PARSE, e.to_string()),
            _ => Failure::new(NUMERIC, e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Gosper { term, common } => {
            let t = read_term(term, &common.sumvar)?;
            let c = gosper(&t)?;
            emit_certificates(&[c], common.out.as_deref())
        }
        Command::Zeilberger { term, recvar, max_order, common } => {
            let t = read_term(term, &common.sumvar)?;
            let c = zeilberger(&t, Var::new(recvar), *max_order)?;
            emit_certificates(&[c], common.out.as_deref())
        }
        Command::Pgosper { terms, common } => {
            let ts = terms
                .iter()
                .map(|s| read_term(s, &common.sumvar))
                .collect::<Result<Vec<_>, _>>()?;
            let certs = parameterized_gosper(&ts)?;
            emit_certificates(&certs, common.out.as_deref())
        }
        Command::Prove { certfile } => {
            let text = std::fs::read_to_string(certfile)
                .map_err(|e| Failure::new(PARSE, format!("{}: {e}", certfile.display())))?;
            let c = parse_certificate(&text)?;
            let report = verify_certificate(&c)?;
            Ok(format!("{}PASS\n", report.transcript))
        }
        Command::Coulomb { action } => run_coulomb(action, &load_config(cli.config.as_deref())?),
    }
}

fn load_config(path: Option<&Path>) -> Result<NumericConfig, Failure> {
    match path {
        Some(p) => Ok(NumericConfig::load(p)?),
        None => Ok(NumericConfig::default()),
    }
}

/// Inline term text, or the contents of a file of that name.
fn read_term(arg: &str, sumvar: &str) -> Result<HyperTerm, Failure> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Failure::new(PARSE, format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    parse_term_in(text.trim(), Var::new(sumvar)).map_err(|e| Failure::new(PARSE, e.to_string()))
}

fn numbered(out: &Path, i: usize) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}-{i}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{i}"),
    };
    out.with_file_name(name)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))
}

fn describe(c: &TelescopeCertificate) -> Result<String, Failure> {
    let mut s = String::new();
    match c.recvar {
        Some(_) if c.sigma.len() == c.order + 1 && c.inputs.len() == 1 => {
            let _ = writeln!(s, "recurrence: {}", Recurrence::from_certificate(c)?);
        }
        _ if c.inputs.len() > 1 => {
            let parts: Vec<String> = c
                .sigma
                .iter()
                .enumerate()
                .map(|(i, sg)| format!("({sg})*F{i}"))
                .collect();
            let _ = writeln!(s, "dependency: sum_k [{}] = 0", parts.join(" + "));
        }
        _ => {}
    }
    let _ = writeln!(s, "certificate: {}", c.certificate);
    let _ = writeln!(s, "G(0) = {}", c.boundary.g_at_start);
    let _ = writeln!(s, "conclusion: {}", c.boundary.conclusion);
    for sc in &c.side_conditions {
        let _ = writeln!(s, "assuming: {sc}");
    }
    Ok(s)
}

/// Print each certificate and write it out when asked.
fn emit_certificates(certs: &[TelescopeCertificate], out: Option<&Path>) -> Outcome {
    let mut s = String::new();
    for (i, c) in certs.iter().enumerate() {
        verify_certificate(c).map_err(|e| Failure::new(DERIVATION, e.to_string()))?;
        if certs.len() > 1 {
            let _ = writeln!(s, "[{}]", i + 1);
        }
        s.push_str(&describe(c)?);
        if let Some(out) = out {
            let path = if certs.len() > 1 { numbered(out, i + 1) } else { out.to_path_buf() };
            write_file(&path, &serialize_certificate(c))?;
            let _ = writeln!(s, "written: {}", path.display());
        }
    }
    Ok(s)
}

fn parse_which(s: &str) -> Result<Integral, Failure> {
    Integral::from_name(s).ok_or_else(|| Failure::new(PARSE, format!("unknown integral `{s}`, expected A, B or C")))
}

fn run_coulomb(action: &CoulombCommand, cfg: &NumericConfig) -> Outcome {
    match action {
        CoulombCommand::Derive { which, out } => {
            let which = parse_which(which)?;
            let d = derive_unmixed(which)?;
            let mut s = String::new();
            let _ = writeln!(s, "{which:?}_p: {}", d.recurrence);
            let closed = Recurrence::new(Var::P, &d.closed_form, "closed form");
            let _ = writeln!(s, "closed form: {closed}");
            let _ = writeln!(s, "matches closed form after reduction: {}", d.matches_closed_form);
            if let Some(out) = out {
                write_file(out, &serialize_certificate(&d.certificate))?;
                let _ = writeln!(s, "written: {}", out.display());
            }
            if !d.matches_closed_form {
                return Err(Failure::new(DERIVATION, format!("{s}derived recurrence differs from the closed form")));
            }
            Ok(s)
        }
        CoulombCommand::Deps { out } => {
            let d = derive_dependencies()?;
            let mut s = String::new();
            let _ = writeln!(s, "dimension: {}", d.dimension);
            for (i, c) in d.certificates.iter().enumerate() {
                let parts: Vec<String> = c
                    .sigma
                    .iter()
                    .zip(&d.basis.series)
                    .filter(|(sg, _)| !sg.is_zero())
                    .map(|(sg, ser)| format!("({sg})*{ser}"))
                    .collect();
                let _ = writeln!(s, "[{}] {} = 0", i + 1, parts.join(" + "));
                if let Some(out) = out {
                    let path = numbered(out, i + 1);
                    write_file(&path, &serialize_certificate(c))?;
                    let _ = writeln!(s, "written: {}", path.display());
                }
            }
            for (name, _) in &d.known {
                let _ = writeln!(s, "{name}: in the span");
            }
            if !d.known_span {
                return Err(Failure::new(DERIVATION, format!("{s}known relations are not all in the span")));
            }
            Ok(s)
        }
        CoulombCommand::Contiguous => {
            let mut s = String::new();
            let mut ok = true;
            for r in derive_contiguous()? {
                let parts: Vec<String> = r
                    .certificate
                    .sigma
                    .iter()
                    .enumerate()
                    .map(|(i, sg)| format!("({sg})*F{i}"))
                    .collect();
                let _ = writeln!(s, "{}: {} = 0", r.name, parts.join(" + "));
                let _ = writeln!(s, "{}: matches closed form: {}", r.name, r.matches_closed_form);
                ok &= r.matches_closed_form;
            }
            if !ok {
                return Err(Failure::new(DERIVATION, format!("{s}a contiguous relation differs from its closed form")));
            }
            Ok(s)
        }
        CoulombCommand::Verify { name, numeric, grid, seed, format } => {
            verify(name, *numeric, grid, *seed, format == "json", cfg)
        }
        CoulombCommand::Eval { which, p, z, n, kappa, tol, quadrature } => {
            let which = parse_which(which)?;
            let mut cfg = cfg.clone();
            if let Some(t) = tol {
                cfg.rel_tol = *t;
                cfg.validate()?;
            }
            // Reject unphysical states before any numeric work.
            make_state::<f64>(*z, *n, *kappa, &cfg.alpha()?)?;
            let value = integral_value(*z, *n, *kappa, which, *p, &cfg)?;
            let mut s = format!(
                "{which:?}_{p} = {value:.17e} (Z={z}, n={n}, kappa={kappa}, series, {} bits)\n",
                cfg.effective_precision()
            );
            if *quadrature {
                let wf = resolve_wavefunction(*z, *n, *kappa, &cfg)?;
                let q = integral_by_quadrature(Some(&wf), which, *p, cfg.quadrature_nodes, cfg.rel_tol.max(1e-8))?;
                let rel = (q - value).abs() / value.abs().max(1e-300);
                let _ = writeln!(s, "{which:?}_{p} = {q:.17e} (quadrature, relative difference {rel:.1e})");
                if rel > cfg.rel_tol.max(1e-8) {
                    return Err(Failure::new(NUMERIC, format!("{s}quadrature and series disagree")));
                }
            }
            Ok(s)
        }
    }
}

fn verify(name: &str, numeric: bool, grid: &GridArgs, seed: u64, json: bool, cfg: &NumericConfig) -> Outcome {
    let names: Vec<&str> = if name == "all" {
        RELATION_NAMES.to_vec()
    } else {
        relation(name)?;
        vec![name]
    };
    let mut cfg = cfg.clone();
    if let Some(t) = grid.tol {
        cfg.rel_tol = t;
        cfg.validate()?;
    }
    let states: Vec<(i64, i64, i64)> = match (grid.z, grid.n, grid.kappa) {
        (Some(z), Some(n), Some(k)) => {
            make_state::<f64>(z, n, k, &cfg.alpha()?)?;
            vec![(z, n, k)]
        }
        _ => DEFAULT_STATES.to_vec(),
    };
    let ps: Vec<i64> = if grid.p.is_empty() { vec![0, 1, 2, 3] } else { grid.p.clone() };
    let identities = standard_identities();
    let mut s = String::new();
    let mut failure: Option<Failure> = None;
    for name in names {
        match verify_relation(name) {
            Ok(rep) => {
                let _ = writeln!(s, "== {name}");
                s.push_str(&rep.transcript);
                if !rep.transcript.ends_with('\n') {
                    s.push('\n');
                }
            }
            Err(e) => {
                let f = Failure::from(e);
                let _ = writeln!(s, "== {name}\nFAIL: {}", f.message);
                failure.get_or_insert(f);
                continue;
            }
        }
        if numeric {
            let id: &Identity = identities.iter().find(|i| i.name == name).expect("every relation has an identity");
            match check_identity_numeric(id, &states, &ps, &cfg, seed) {
                Ok(r) => {
                    s.push_str(&if json { r.to_json() + "\n" } else { r.to_text() });
                    if !r.passed {
                        failure.get_or_insert(Failure::new(NUMERIC, format!("numeric check of {name} failed")));
                    }
                }
                Err(e) => {
                    let f = Failure::from(e);
                    let _ = writeln!(s, "numeric check: {}", f.message);
                    failure.get_or_insert(f);
                }
            }
        }
    }
    match failure {
        None => Ok(s),
        Some(f) => {
            print!("{s}");
            Err(f)
        }
    }
}
