mod cache;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use cache::{hex_digest, Cache, CacheKey};
use qschur::coeffs::{enumerate_st, StMode};
use qschur::fforacle::{run_suite, Suite, SuiteReport};
use qschur::permat::{lower_set, member, xi_size};
use qschur::stab::stab_check;
use qschur::{Algebra, AlgebraType, Element, IndexSet, PeriodicMatrix};

#[derive(Parser, Debug)]
#[command(name = "qschur", version, about = "Exact products and bases for affine type C Schur algebras and their stabilizations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Expected period of the input matrices
    #[arg(long, global = true)]
    n: Option<i64>,

    /// Truncation degree, or `stab` for the stabilized algebra (default: inferred)
    #[arg(long, global = true, value_parser = parse_level)]
    d: Option<LevelArg>,

    /// Algebra type
    #[arg(long = "type", global = true, default_value = "c", value_parser = parse_type)]
    ty: AlgebraType,

    /// Field size for the counting oracle
    #[arg(long, global = true, default_value_t = 2)]
    q: u8,

    /// Largest ambient dimension for the counting oracle
    #[arg(long, global = true, default_value_t = 6)]
    max_dim: usize,

    /// Seed for randomized oracle instances
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Cache root (overrides SCHUR_CACHE_DIR)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    #[arg(long, global = true)]
    no_cache: bool,

    /// Reject products of incompatible fibers instead of returning zero
    #[arg(long, global = true)]
    strict: bool,

    /// Dump the admissible (S, T) pairs of each tridiagonal product to stderr
    #[arg(long, global = true)]
    emit_st_pairs: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Product of two elements (matrix or element JSON files)
    Mult { left: PathBuf, right: PathBuf },
    /// Canonical basis element {A}
    Canonical { matrix: PathBuf },
    /// Monomial basis element m_A
    Monomial { matrix: PathBuf },
    /// Compare bivariate coefficients against finite products of p-shifts
    StabCheck { b: PathBuf, a: PathBuf },
    /// Finite-field verification sweeps
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Closed forms of the counting lemmas against enumeration
    Counting {
        /// Run one suite instead of all
        #[arg(long)]
        suite: Option<Suite>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LevelArg {
    Finite(i64),
    Stab,
}

fn parse_level(s: &str) -> std::result::Result<LevelArg, String> {
    if s == "stab" {
        return Ok(LevelArg::Stab);
    }
    s.parse::<i64>().map(LevelArg::Finite).map_err(|_| format!("expected an integer or `stab`, got `{s}`"))
}

fn parse_type(s: &str) -> std::result::Result<AlgebraType, String> {
    AlgebraType::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| format!("unknown type `{s}` (c, ji, ij, ii)"))
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] qschur::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Core(e) => e.exit_code(),
            _ => 2,
        }
    }

    fn payload(&self) -> serde_json::Value {
        let kind = match self.code() {
            3 => "resource",
            4 => "integrity",
            _ => "input",
        };
        match self {
            CliError::Core(qschur::Error::Integrity { what, witness }) => {
                json!({ "error": kind, "code": self.code(), "message": what, "witness": witness })
            }
            e => json!({ "error": kind, "code": self.code(), "message": e.to_string() }),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn main() {
    let cli = Cli::parse();
    let mut out = Vec::new();
    let res = run(&cli, &mut out);
    std::io::stdout().write_all(&out).ok();
    if let Err(e) = res {
        eprintln!("{}", e.payload());
        process::exit(e.code());
    }
}

fn run(cli: &Cli, out: &mut Vec<u8>) -> Result<()> {
    let cache = if cli.no_cache { None } else { Cache::open(cli.cache_dir.as_deref())? };
    let ctx = Ctx { cli, cache };
    match &cli.cmd {
        Cmd::Mult { left, right } => ctx.mult(left, right, out),
        Cmd::Canonical { matrix } => ctx.basis(matrix, Op::Canonical, out),
        Cmd::Monomial { matrix } => ctx.basis(matrix, Op::Monomial, out),
        Cmd::StabCheck { b, a } => ctx.stab_check(b, a, out),
        Cmd::Verify { what: VerifyCmd::Counting { suite } } => ctx.verify(*suite, out),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    Canonical,
    Monomial,
}

impl Op {
    fn name(self) -> &'static str {
        match self {
            Op::Canonical => "canonical",
            Op::Monomial => "monomial",
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    cache: Option<Cache>,
}

enum Input {
    Matrix(PeriodicMatrix),
    Element(Element),
}

fn read_input(path: &Path) -> Result<Input> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let bad = |e: serde_json::Error| CliError::Input(format!("{}: {e}", path.display()));
    if value.get("terms").is_some() {
        Ok(Input::Element(serde_json::from_value(value).map_err(bad)?))
    } else {
        Ok(Input::Matrix(serde_json::from_value(value).map_err(bad)?))
    }
}

fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("serializable")
}

fn d_label(d: Option<i64>) -> String {
    d.map_or_else(|| "stab".to_string(), |d| d.to_string())
}

impl Ctx<'_> {
    fn check_n(&self, n: i64) -> Result<()> {
        match self.cli.n {
            Some(m) if m != n => Err(CliError::Input(format!("input has period {n}, expected {m}"))),
            _ => Ok(()),
        }
    }

    /// The degree of the algebra a bare matrix is read in.
    fn level_of(&self, m: &PeriodicMatrix) -> Option<i64> {
        match self.cli.d {
            Some(LevelArg::Finite(d)) => Some(d),
            Some(LevelArg::Stab) => None,
            None => xi_size(m).filter(|&d| member(m, IndexSet::Xi(self.cli.ty, d))),
        }
    }

    fn element(&self, input: Input) -> Result<Element> {
        let e = match input {
            Input::Matrix(m) => Element::basis(self.cli.ty, self.level_of(&m), &m),
            Input::Element(e) => {
                let want = self.cli.d.map(|l| match l {
                    LevelArg::Finite(d) => Some(d),
                    LevelArg::Stab => None,
                });
                if want.is_some_and(|w| w != e.d) {
                    return Err(CliError::Input(format!("element has d = {}, --d asks for another algebra", d_label(e.d))));
                }
                e
            }
        };
        self.check_n(e.n)?;
        e.validate().map_err(|x| CliError::Input(x.to_string()))?;
        Ok(e)
    }

    fn matrix(&self, path: &Path) -> Result<PeriodicMatrix> {
        match read_input(path)? {
            Input::Matrix(m) => {
                self.check_n(m.n())?;
                Ok(m)
            }
            Input::Element(_) => Err(CliError::Input(format!("{}: expected a matrix, found an element", path.display()))),
        }
    }

    fn algebra(&self, n: i64, d: Option<i64>) -> Algebra {
        match d {
            Some(_) => Algebra::finite(n),
            None => Algebra::stable(n, self.cli.ty),
        }
    }

    fn cached(&self, key: &CacheKey, compute: impl FnOnce() -> Result<Element>) -> Result<Element> {
        if let Some(c) = &self.cache {
            if let Some(v) = c.get(key) {
                if let Ok(e) = serde_json::from_str(&v) {
                    return Ok(e);
                }
            }
        }
        let e = compute()?;
        if let Some(c) = &self.cache {
            if let Err(err) = c.put(key, &to_json(&e)) {
                eprintln!("warning: cache write failed: {err}");
            }
        }
        Ok(e)
    }

    fn emit(&self, e: &Element, out: &mut Vec<u8>) -> Result<()> {
        match self.cli.format {
            Format::Json => {
                serde_json::to_writer(&mut *out, e).map_err(std::io::Error::from)?;
                out.push(b'\n');
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(["matrix", "poly"])?;
                for (m, p) in &e.terms {
                    w.write_record([to_json(m), p.to_string()])?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }

    fn mult(&self, left: &Path, right: &Path, out: &mut Vec<u8>) -> Result<()> {
        let x = self.element(read_input(left)?)?;
        let y = self.element(read_input(right)?)?;
        if x.ty != y.ty || x.n != y.n || x.d != y.d {
            return Err(CliError::Input(format!(
                "operands live in different algebras: ({}, n={}, d={}) and ({}, n={}, d={})",
                x.ty,
                x.n,
                d_label(x.d),
                y.ty,
                y.n,
                d_label(y.d)
            )));
        }
        let compatible = x.terms.keys().any(|b| y.terms.keys().any(|a| b.co() == a.ro()));
        if self.cli.strict && !compatible {
            return Err(CliError::Input("no term of the left factor has co equal to ro of a term of the right factor".into()));
        }
        if self.cli.emit_st_pairs {
            let mode = if x.d.is_some() { StMode::Finite } else { StMode::Shifted(x.ty) };
            for b in x.terms.keys() {
                let Some(alpha) = b.tri_alpha() else { continue };
                for a in y.terms.keys().filter(|a| b.co() == a.ro()) {
                    eprintln!("{}", json!({ "b": b, "a": a, "pairs": enumerate_st(a, &alpha, mode) }));
                }
            }
        }
        let key = CacheKey {
            ty: x.ty.to_string(),
            n: x.n,
            d: d_label(x.d),
            matrix: hex_digest(format!("{}*{}", to_json(&x), to_json(&y)).as_bytes()),
            op: "mult".into(),
        };
        let alg = self.algebra(x.n, x.d);
        let z = self.cached(&key, || Ok(alg.mult(&x, &y)?))?;
        self.emit(&z, out)
    }

    fn basis_element(&self, alg: &Algebra, a: &PeriodicMatrix, d: Option<i64>, op: Op) -> Result<Element> {
        let ty = self.cli.ty;
        let key = CacheKey { ty: ty.to_string(), n: a.n(), d: d_label(d), matrix: to_json(a), op: op.name().into() };
        self.cached(&key, || {
            Ok(match op {
                Op::Canonical => alg.canonical(a, ty, d)?,
                Op::Monomial => alg.monomial_basis_element(a, ty, d)?,
            })
        })
    }

    fn basis(&self, path: &Path, op: Op, out: &mut Vec<u8>) -> Result<()> {
        let a = self.matrix(path)?;
        let d = self.level_of(&a);
        let set = match d {
            Some(d) => IndexSet::Xi(self.cli.ty, d),
            None => IndexSet::XiTilde(self.cli.ty),
        };
        if !member(&a, set) {
            return Err(CliError::Input(format!("{a:?} is not a member of {set}")));
        }
        let alg = self.algebra(a.n(), d);
        let e = self.basis_element(&alg, &a, d, op)?;
        if self.cli.format == Format::Json || op == Op::Monomial {
            return self.emit(&e, out);
        }
        // transition matrix from the standard basis, columns {A''} over the lower set of A
        let mut keys = lower_set(&a, set);
        keys.push(a.clone());
        keys.sort();
        let mut w = csv::Writer::from_writer(&mut *out);
        let header: Vec<String> = std::iter::once(String::new()).chain(keys.iter().map(to_json)).collect();
        w.write_record(&header)?;
        let cols: Vec<Element> = keys.iter().map(|k| self.basis_element(&alg, k, d, op)).collect::<Result<_>>()?;
        for row in &keys {
            let cells = cols.iter().map(|c| c.coeff(row).to_string());
            w.write_record(std::iter::once(to_json(row)).chain(cells))?;
        }
        w.flush()?;
        Ok(())
    }

    fn stab_check(&self, b: &Path, a: &Path, out: &mut Vec<u8>) -> Result<()> {
        let (b, a) = (self.matrix(b)?, self.matrix(a)?);
        let ty = self.cli.ty;
        for m in [&a, &b] {
            if !member(m, IndexSet::XiTilde(ty)) {
                return Err(CliError::Input(format!("{m:?} is not a member of {}", IndexSet::XiTilde(ty))));
            }
        }
        if self.cli.strict && b.co() != a.ro() {
            return Err(qschur::Error::FiberMismatch { co: b.co(), ro: a.ro() }.into());
        }
        let rep = stab_check(&b, &a, ty)?;
        match self.cli.format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &rep).map_err(std::io::Error::from)?;
                out.push(b'\n');
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(["p", "match"])?;
                for (p, ok) in &rep.checked {
                    w.write_record([p.to_string(), ok.to_string()])?;
                }
                w.flush()?;
            }
        }
        if !rep.ok {
            return Err(qschur::Error::integrity("bivariate coefficients disagree with finite products", (&b, &a, &rep.checked)).into());
        }
        Ok(())
    }

    fn verify(&self, suite: Option<Suite>, out: &mut Vec<u8>) -> Result<()> {
        let suites: Vec<Suite> = suite.map_or_else(|| Suite::ALL.to_vec(), |s| vec![s]);
        let reports: Vec<SuiteReport> =
            suites.iter().map(|&s| run_suite(s, self.cli.q, self.cli.max_dim, self.cli.seed)).collect::<qschur::Result<_>>()?;
        match self.cli.format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &reports).map_err(std::io::Error::from)?;
                out.push(b'\n');
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(["suite", "q", "instance", "params", "enumerated", "closed_form", "printed_form", "ok"])?;
                for c in reports.iter().flat_map(|r| &r.cases) {
                    w.write_record([
                        c.suite.to_string(),
                        c.q.to_string(),
                        c.instance.clone(),
                        c.params.clone(),
                        c.enumerated.to_string(),
                        c.closed_form.clone(),
                        c.printed_form.clone().unwrap_or_default(),
                        c.ok.to_string(),
                    ])?;
                }
                w.flush()?;
            }
        }
        for r in &reports {
            r.verify()?;
        }
        Ok(())
    }
}
