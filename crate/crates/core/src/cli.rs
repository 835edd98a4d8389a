//! Command-line interface. [`run`] parses arguments and executes one
//! command, writing to the given streams and returning the exit status:
//! 0 success, 1 violations or failed hypotheses, 2 input or usage errors,
//! 3 search violations under `--fail-on-violation`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::format::{read_lie, read_rep, write_lie, write_rep, LieFile};
use crate::generators::{direct_sum, monomial_coalgebra_rep, tensor_product};
use crate::poly::GroupKind;
use crate::rep::{
    check_layer_relations, extract_layers, verify_comodule_axioms, verify_fundamental_relation, CheckMode,
    CoefficientFamily, VerificationReport,
};
use crate::scalars::{FieldSpec, Prime};
use crate::search::{run_conjecture_search, GeneratorMix, SearchConfig};
use crate::structure::{construct_h1_charp, exponential_form_h1};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SEARCH_VIOLATION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "heisenrep", version, about = "Exact representations of G_a and H_1")]
pub struct Cli {
    /// Machine-readable JSON report on standard output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Suppress human-readable output.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyMode {
    Axioms,
    Relation,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a REP file against the comodule axioms and/or the product law.
    Verify {
        rep: PathBuf,
        #[arg(long, value_enum, default_value_t = VerifyMode::Both)]
        mode: VerifyMode,
    },
    /// Build the representation determined by layer data.
    Construct {
        lie: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Same representation as `construct`, via layered exponentials.
    Expform {
        lie: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Extract Frobenius layers from a prime-field REP file.
    Factor {
        rep: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Also check the layer conditions.
        #[arg(long)]
        check: bool,
    },
    /// Representation on all monomials of degree at most D.
    Coalg {
        #[arg(long, default_value = "H1")]
        group: String,
        #[arg(long = "char", conflicts_with = "rational", required_unless_present = "rational")]
        characteristic: Option<u64>,
        #[arg(long)]
        rational: bool,
        #[arg(long)]
        max_degree: u32,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Tensor product of two REP files.
    Tensor {
        #[arg(long, num_args = 1, required = true)]
        rep: Vec<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Direct sum of two REP files.
    Sum {
        #[arg(long, num_args = 1, required = true)]
        rep: Vec<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Seeded search for representations failing the layer conditions.
    Search {
        #[arg(long = "char")]
        characteristic: u64,
        /// Maximum candidate dimension; defaults to (p+1)/2.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated `category=weight` list; categories are
        /// coalgebra, subcoalgebra, tensor, direct_sum, lie_construct.
        #[arg(long)]
        mix: Option<String>,
        /// Stop at the first violation.
        #[arg(long)]
        fail_fast: bool,
        /// Exit with status 3 when a violation is found.
        #[arg(long)]
        fail_on_violation: bool,
    },
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    json: bool,
    quiet: bool,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Hypothesis(_) | Error::NotNilpotent | Error::FactorialNotInvertible(..) => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    }
}

impl Ctx<'_> {
    fn say(&mut self, msg: impl std::fmt::Display) {
        if !self.quiet && !self.json {
            let _ = writeln!(self.out, "{msg}");
        }
    }

    fn emit_json(&mut self, v: &Value) {
        if self.json {
            let _ = writeln!(self.out, "{}", serde_json::to_string_pretty(v).expect("json values serialize"));
        }
    }

    fn fail(&mut self, e: &Error) -> i32 {
        let code = exit_code(e);
        if self.json {
            self.emit_json(&json!({ "ok": false, "error": e.to_string(), "exit": code }));
        }
        let _ = writeln!(self.err, "error: {e}");
        code
    }

    fn read(&mut self, path: &Path) -> Result<String, Error> {
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    fn read_rep(&mut self, path: &Path) -> Result<CoefficientFamily, Error> {
        let text = self.read(path)?;
        read_rep(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    fn read_lie(&mut self, path: &Path) -> Result<LieFile, Error> {
        let text = self.read(path)?;
        read_lie(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    /// Writes `text` to `out`, or to standard output when no path is given.
    fn write(&mut self, out: Option<&Path>, text: &str) -> Result<(), Error> {
        match out {
            Some(p) => fs::write(p, text).map_err(Error::from),
            None => self.out.write_all(text.as_bytes()).map_err(Error::from),
        }
    }

    fn write_family(&mut self, out: Option<&Path>, f: &CoefficientFamily) -> i32 {
        if let Err(e) = self.write(out, &write_rep(f)) {
            return self.fail(&e);
        }
        if let Some(p) = out {
            self.say(format_args!(
                "wrote {} ({} {}-dimensional, {} coefficient matrices)",
                p.display(),
                f.group(),
                f.dim(),
                f.len()
            ));
            self.emit_json(&json!({
                "ok": true,
                "out": p.display().to_string(),
                "group": f.group().to_string(),
                "dimension": f.dim(),
                "coefficients": f.len(),
            }));
        }
        EXIT_OK
    }
}

fn report_json(name: &str, r: &VerificationReport) -> Value {
    let violations: Vec<Value> = r
        .violations()
        .iter()
        .map(|v| {
            json!({
                "site": v.site.to_string(),
                "description": v.description,
                "lhs": v.lhs.to_string(),
                "rhs": v.rhs.to_string(),
            })
        })
        .collect();
    json!({ "check": name, "ok": r.ok(), "violations": violations })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    let mut ctx = Ctx { out, err, json: cli.json, quiet: cli.quiet };
    match cli.command {
        Command::Verify { rep, mode } => verify(&mut ctx, &rep, mode),
        Command::Construct { lie, out } => construct(&mut ctx, &lie, out.as_deref(), false),
        Command::Expform { lie, out } => construct(&mut ctx, &lie, out.as_deref(), true),
        Command::Factor { rep, out, check } => factor(&mut ctx, &rep, out.as_deref(), check),
        Command::Coalg { group, characteristic, rational, max_degree, out } => {
            let field = match (characteristic, rational) {
                (Some(p), false) => FieldSpec::prime(p),
                _ => Ok(FieldSpec::Rational),
            };
            let result = GroupKind::parse(&group)
                .and_then(|g| Ok((g, field?)))
                .and_then(|(g, field)| monomial_coalgebra_rep(field, g, max_degree));
            match result {
                Ok(f) => ctx.write_family(out.as_deref(), &f),
                Err(e) => ctx.fail(&e),
            }
        }
        Command::Tensor { rep, out } => combine(&mut ctx, &rep, out.as_deref(), tensor_product),
        Command::Sum { rep, out } => combine(&mut ctx, &rep, out.as_deref(), direct_sum),
        Command::Search { characteristic, dim, budget, seed, mix, fail_fast, fail_on_violation } => {
            let cfg = Prime::new(characteristic).and_then(|p| {
                let mut cfg = SearchConfig::new(p);
                if let Some(d) = dim {
                    cfg.target_dim = d;
                }
                if let Some(m) = mix {
                    cfg.mix = GeneratorMix::parse(&m)?;
                }
                cfg.budget = budget;
                cfg.seed = seed;
                cfg.fail_fast = fail_fast;
                Ok(cfg)
            });
            match cfg.and_then(|c| run_conjecture_search(&c)) {
                Ok(report) => {
                    ctx.say(&report);
                    ctx.emit_json(&serde_json::to_value(&report).expect("report serializes"));
                    if fail_on_violation && !report.violations.is_empty() {
                        EXIT_SEARCH_VIOLATION
                    } else {
                        EXIT_OK
                    }
                }
                Err(e) => ctx.fail(&e),
            }
        }
    }
}

fn verify(ctx: &mut Ctx, path: &Path, mode: VerifyMode) -> i32 {
    let f = match ctx.read_rep(path) {
        Ok(f) => f,
        Err(e) => return ctx.fail(&e),
    };
    let mut checks = Vec::new();
    if mode != VerifyMode::Relation {
        checks.push(("axioms", verify_comodule_axioms(&f)));
    }
    if mode != VerifyMode::Axioms {
        checks.push(("relation", verify_fundamental_relation(&f)));
    }
    let ok = checks.iter().all(|(_, r)| r.ok());
    for (name, r) in &checks {
        ctx.say(format_args!("{name}: {r}"));
    }
    ctx.emit_json(&json!({
        "ok": ok,
        "group": f.group().to_string(),
        "dimension": f.dim(),
        "checks": checks.iter().map(|(n, r)| report_json(n, r)).collect::<Vec<_>>(),
    }));
    if ok {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

fn construct(ctx: &mut Ctx, path: &Path, out: Option<&Path>, exponential: bool) -> i32 {
    let result = ctx.read_lie(path).and_then(|file| {
        let lie = file.to_lie()?;
        if exponential && lie.dim() == 1 {
            let _ = writeln!(ctx.err, "note: every 1-dimensional representation is trivial; the exponential form is the identity");
        }
        if exponential {
            CoefficientFamily::from_polynomial_matrix(&exponential_form_h1(&lie)?, GroupKind::H1)
        } else {
            construct_h1_charp(&lie)
        }
    });
    match result {
        Ok(f) => ctx.write_family(out, &f),
        Err(e) => ctx.fail(&e),
    }
}

fn factor(ctx: &mut Ctx, path: &Path, out: Option<&Path>, check: bool) -> i32 {
    let layers = match ctx.read_rep(path).and_then(|f| extract_layers(&f)) {
        Ok(l) => l,
        Err(e) => return ctx.fail(&e),
    };
    if let Err(e) = ctx.write(out, &write_lie(&LieFile::from_layers(&layers))) {
        return ctx.fail(&e);
    }
    if let Some(p) = out {
        ctx.say(format_args!("wrote {} ({} layer(s))", p.display(), layers.layers.len()));
    }
    let mut value = json!({ "ok": true, "layers": layers.layers.len() });
    let mut code = EXIT_OK;
    if check {
        let r = check_layer_relations(&layers, CheckMode::Report);
        if out.is_some() {
            ctx.say(format_args!("layer conditions: {r}"));
        } else {
            let _ = writeln!(ctx.err, "layer conditions: {r}");
        }
        value["ok"] = json!(r.ok());
        value["check"] = report_json("layers", &r);
        if !r.ok() {
            code = EXIT_VIOLATION;
        }
    }
    if out.is_some() {
        ctx.emit_json(&value);
    }
    code
}

fn combine(
    ctx: &mut Ctx,
    reps: &[PathBuf],
    out: Option<&Path>,
    op: fn(&CoefficientFamily, &CoefficientFamily) -> crate::Result<CoefficientFamily>,
) -> i32 {
    if reps.len() != 2 {
        let _ = writeln!(ctx.err, "error: expected exactly two --rep inputs, found {}", reps.len());
        return EXIT_INPUT;
    }
    let result = ctx
        .read_rep(&reps[0])
        .and_then(|a| Ok((a, ctx.read_rep(&reps[1])?)))
        .and_then(|(a, b)| op(&a, &b));
    match result {
        Ok(f) => ctx.write_family(out, &f),
        Err(e) => ctx.fail(&e),
    }
}
