//! Command-line surface. [`run`] parses arguments, dispatches and returns the exit status:
//! 0 on success, 1 on a domain error, 2 on a usage error.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::autom::{Endo, GeneratorWord};
use crate::error::{Error, Result};
use crate::io::{trace_from_json, trace_to_json, word_from_json, word_to_json};
use crate::navigator::{connect, reduce_rank_once, reduce_to_rank1, NavTrace};
use crate::necklace::{moment_element, poisson_bracket, Alphabet, NecklaceSum};
use crate::parse::{parse_free, parse_ncpoly, parse_scalar, print_aliased, print_cycsum, resolve_arrow_name};
use crate::polymat::{pm_factor, psi_embed, ElemFactor, PolyMat, UniPoly, Var};
use crate::primitive::solve_primitive;
use crate::quiver::{Arrow, NCPoly, Orientation, QuiverSpec};
use crate::repspace::{cmat_from_rows, cmat_to_rows, CMat, FiberKind, RepPoint, DEFAULT_TOL};

#[derive(Parser, Debug)]
#[command(
    name = "zigzag",
    version,
    about = "Noncommutative symplectic automorphisms of zigzag quivers and their phase-space action"
)]
pub struct Cli {
    /// Rank (number of arrows between the two vertices).
    #[arg(long, global = true, default_value_t = 1)]
    r: usize,
    /// Matrix size for random points.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Moment value τ, e.g. `1` or `(1+2i)`.
    #[arg(long, global = true, default_value = "1", allow_hyphen_values = true)]
    tau: String,
    #[arg(long, global = true, default_value = "zigzag")]
    orientation: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the result to this file instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Path-algebra and necklace operations.
    #[command(subcommand)]
    Nc(NcCmd),
    /// Symplectic automorphisms given as generator words.
    #[command(subcommand)]
    Auto(AutoCmd),
    /// Invertible polynomial matrices and their embedding.
    #[command(subcommand)]
    Gl(GlCmd),
    /// Necklace primitives.
    #[command(subcommand)]
    Primitive(PrimitiveCmd),
    /// Points of the phase space.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Reduction to rank one and connecting words.
    #[command(subcommand)]
    Nav(NavCmd),
}

#[derive(Subcommand, Debug)]
enum NcCmd {
    /// Product `f g` (f after g).
    Mul {
        #[arg(short = 'f')]
        f: String,
        #[arg(short = 'g')]
        g: String,
    },
    /// Necklace derivative of `f` with respect to one arrow.
    Derive {
        #[arg(short = 'f')]
        f: String,
        #[arg(short = 'g')]
        g: String,
    },
    /// Necklace bracket `{f, g}`.
    Bracket {
        #[arg(short = 'f')]
        f: String,
        #[arg(short = 'g')]
        g: String,
    },
    /// The moment element and its vertex components.
    Moment,
}

#[derive(Args, Debug)]
struct WordArg {
    /// Word file (JSON), `-` for stdin.
    #[arg(short = 'w', long = "word")]
    word: Option<String>,
    /// Single generator kind instead of a word file.
    #[arg(long)]
    kind: Option<String>,
    /// Necklace for triangular and op-triangular kinds.
    #[arg(short = 'f')]
    f: Option<String>,
    /// Matrix (JSON rows) for affine_gl.
    #[arg(short = 'T')]
    t: Option<String>,
}

#[derive(Subcommand, Debug)]
enum AutoCmd {
    /// Images of every arrow.
    Build(WordArg),
    /// Images of the first word followed by the second.
    Compose {
        /// Give exactly two: `-w FIRST -w SECOND`.
        #[arg(short = 'w', long = "word", required = true)]
        words: Vec<String>,
    },
    /// Inverse word.
    Invert(WordArg),
    /// Symplecticity and reducedness.
    Check {
        #[command(flatten)]
        word: WordArg,
        /// Check each generator separately and skip the expansion; reports symplecticity only.
        /// Words produced by `nav` are too large to expand.
        #[arg(long)]
        per_generator: bool,
    },
    /// Crossed matrices `N` and `M`.
    Matrices(WordArg),
    /// Images of `a`, `a*` modulo the `d`s and `b`s.
    Project0(WordArg),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VarArg {
    A,
    #[value(name = "a*")]
    AStar,
}

impl From<VarArg> for Var {
    fn from(v: VarArg) -> Var {
        match v {
            VarArg::A => Var::A,
            VarArg::AStar => Var::AStar,
        }
    }
}

#[derive(Subcommand, Debug)]
enum GlCmd {
    /// Elementary factorization.
    Factor {
        /// JSON rows of polynomial strings, e.g. `[["1","a^2"],["0","1"]]`.
        #[arg(short = 'm')]
        m: String,
        #[arg(long, value_enum, default_value = "a")]
        var: VarArg,
    },
    /// Generator word realizing the matrix as a crossed matrix.
    Psi {
        #[arg(short = 'm')]
        m: String,
        #[arg(long, value_enum, default_value = "a")]
        var: VarArg,
    },
}

#[derive(Subcommand, Debug)]
enum PrimitiveCmd {
    /// Find `f` with `∂f/∂g_k = u_k`.
    Solve {
        /// Comma-separated generator letters.
        #[arg(short = 'G', value_delimiter = ',')]
        g: Vec<String>,
        /// One component per generator, in order.
        #[arg(short = 'u')]
        u: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Cprime,
    Cdoubleprime,
}

#[derive(Subcommand, Debug)]
enum RepCmd {
    /// Seeded point of the fiber.
    Random {
        #[arg(long, value_enum, default_value = "cprime")]
        kind: KindArg,
    },
    /// Moment residual of a point.
    Moment {
        #[arg(short = 'p')]
        p: String,
    },
    /// Matrix of a path-algebra element at a point.
    Eval {
        #[arg(short = 'p')]
        p: String,
        #[arg(short = 'f')]
        f: String,
    },
    /// Right action of a word.
    Act {
        #[arg(short = 'p')]
        p: String,
        #[command(flatten)]
        word: WordArg,
    },
    /// Equality of gauge classes.
    OrbitEq {
        #[arg(short = 'p')]
        p: String,
        #[arg(short = 'q')]
        q: String,
    },
    /// Closed-form flow of `tr(Y^k v e_αβ w)`.
    Flow {
        #[arg(short = 'p')]
        p: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    /// RK4 integration of `tr(Y^k v m w)` (m defaults to the identity).
    FlowOde {
        #[arg(short = 'p')]
        p: String,
        #[arg(long)]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        /// Coupling as JSON rows of `[re, im]` pairs.
        #[arg(long)]
        m: Option<String>,
    },
    /// Value of `tr(Y^k v m w)`.
    Hamiltonian {
        #[arg(short = 'p')]
        p: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum NavCmd {
    /// Kill the last column of `v` and row of `w`.
    Reduce {
        #[arg(short = 'p')]
        p: String,
    },
    /// Reduce all the way to rank one.
    Reduce1 {
        #[arg(short = 'p')]
        p: String,
    },
    /// Word carrying `p` to `q`.
    Connect {
        #[arg(short = 'p')]
        p: String,
        #[arg(short = 'q')]
        q: String,
        /// Refuse the rank-one bridge when the two reductions differ.
        #[arg(long)]
        strict: bool,
    },
    /// Replay a trace and compare with its recorded final point.
    Replay {
        #[arg(short = 't')]
        trace: String,
    },
}

struct Ctx<'a> {
    cli: &'a Cli,
    stdin: &'a mut dyn Read,
}

impl Ctx<'_> {
    fn spec(&self) -> Result<QuiverSpec> {
        QuiverSpec::new(self.cli.r, self.cli.orientation.parse::<Orientation>()?)
    }

    fn read(&mut self, src: &str) -> Result<String> {
        if src == "-" {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(|e| Error::Invalid(e.to_string()))?;
            Ok(s)
        } else {
            std::fs::read_to_string(src).map_err(|e| Error::Invalid(format!("{src}: {e}")))
        }
    }

    fn read_json(&mut self, src: &str) -> Result<Value> {
        let text = self.read(src)?;
        serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{src}: {e}")))
    }

    fn point(&mut self, src: &str) -> Result<RepPoint> {
        let v = self.read_json(src)?;
        Ok(RepPoint::from_json(&v)?.with_tol(self.cli.tol))
    }

    fn word(&mut self, arg: &WordArg, spec: &QuiverSpec) -> Result<GeneratorWord> {
        if let Some(src) = &arg.word {
            return word_from_json(&self.read_json(src)?, spec);
        }
        let kind = arg.kind.as_deref().ok_or_else(|| Error::Invalid("give -w FILE or --kind".into()))?;
        let mut g = json!({"kind": kind});
        if let Some(f) = &arg.f {
            g["f"] = Value::String(f.clone());
        }
        if let Some(t) = &arg.t {
            g["T"] = serde_json::from_str(t).map_err(|e| Error::Invalid(format!("-T: {e}")))?;
        }
        Ok(GeneratorWord::new(vec![crate::io::generator_from_json(&g, spec)?]))
    }
}

/// Output of one command: text and its JSON form.
struct Out {
    text: String,
    json: Value,
}

fn out(text: impl Into<String>, json: Value) -> Out {
    Out { text: text.into(), json }
}

/// `re+imi` with 17 significant digits.
pub fn fmt_c64(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{sign}{:.16e}i", z.re, z.im.abs())
}

fn fmt_cmat(m: &CMat) -> String {
    let mut s = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_c64(m[(i, j)])).collect();
        s.push_str(&row.join("  "));
        s.push('\n');
    }
    s
}

fn c_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn print_poly(p: &NCPoly, spec: &QuiverSpec) -> String {
    match spec.orientation {
        Orientation::Zigzag | Orientation::SingleX => print_aliased(p, spec),
        Orientation::AllD => p.to_string(),
    }
}

fn single_arrow(spec: &QuiverSpec, name: &str) -> Result<(i64, Arrow)> {
    let p = resolve_arrow_name(spec, name).ok_or_else(|| Error::UnknownLetter(name.to_string()))?;
    let mut terms = p.terms();
    match (terms.next(), terms.next()) {
        (Some((path, c)), None) if path.arrows.len() == 1 => {
            let sign = if c == &crate::scalar::GaussScalar::from_int(1) { 1 } else { -1 };
            Ok((sign, path.arrows[0]))
        }
        _ => Err(Error::Invalid(format!("{name} is not a single arrow"))),
    }
}

fn endo_json(e: &Endo) -> Value {
    let spec = e.spec();
    let images: serde_json::Map<String, Value> =
        spec.arrows().into_iter().map(|a| (a.name(), Value::String(e.image(a).to_string()))).collect();
    Value::Object(images)
}

fn unipoly_from(text: &str, var: Var) -> Result<UniPoly> {
    let alph = Alphabet::free(&[var.name()]);
    let p = parse_free(text, &alph)?;
    let mut coeffs = Vec::new();
    for (w, c) in p.terms() {
        if coeffs.len() <= w.len() {
            coeffs.resize(w.len() + 1, crate::scalar::GaussScalar::from_int(0));
        }
        coeffs[w.len()] = c.clone();
    }
    Ok(UniPoly::new(coeffs, var))
}

fn polymat_from(text: &str, var: Var) -> Result<PolyMat> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("-m: {e}")))?;
    let rows = v.as_array().ok_or_else(|| Error::Invalid("-m must be an array of rows".into()))?;
    let rows: Vec<Vec<UniPoly>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Invalid("row must be an array".into()))?
                .iter()
                .map(|e| match e {
                    Value::String(s) => unipoly_from(s, var),
                    Value::Number(n) => unipoly_from(&n.to_string(), var),
                    other => Err(Error::Invalid(format!("bad entry {other}"))),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    PolyMat::from_rows(rows, var)
}

fn coupling(text: Option<&str>, r: usize) -> Result<CMat> {
    match text {
        None => Ok(CMat::identity(r, r)),
        Some(t) => {
            let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(t).map_err(|e| Error::Invalid(format!("--m: {e}")))?;
            cmat_from_rows(&rows, r, r)
        }
    }
}

fn trace_text(t: &NavTrace) -> String {
    let mut s = format!("generators: {}\n", t.word.len());
    for st in &t.steps {
        s.push_str(&format!(
            "rank {} {} {}: shear {}, residual {:.3e}, killed {:.3e}\n",
            st.rank, st.stage, st.case, st.shear, st.residual, st.killed
        ));
    }
    s.push_str(&format!("max residual: {:.3e}\n", t.max_residual()));
    s
}

fn dispatch(ctx: &mut Ctx) -> Result<Out> {
    let cli = ctx.cli;
    match &cli.cmd {
        Cmd::Nc(op) => {
            let spec = ctx.spec()?;
            match op {
                NcCmd::Mul { f, g } => {
                    let p = parse_ncpoly(f, &spec)?.mul(&parse_ncpoly(g, &spec)?);
                    Ok(out(print_poly(&p, &spec), json!({"result": p.to_string()})))
                }
                NcCmd::Derive { f, g } => {
                    let w = NecklaceSum::from_poly(&parse_ncpoly(f, &spec)?)?;
                    let (sign, arrow) = single_arrow(&spec, g)?;
                    let mut d = w.derivative(arrow);
                    if sign < 0 {
                        d = -d;
                    }
                    Ok(out(print_poly(&d, &spec), json!({"result": d.to_string()})))
                }
                NcCmd::Bracket { f, g } => {
                    let a = NecklaceSum::from_poly(&parse_ncpoly(f, &spec)?)?;
                    let b = NecklaceSum::from_poly(&parse_ncpoly(g, &spec)?)?;
                    let p = poisson_bracket(&a, &b, &spec).to_poly();
                    Ok(out(print_poly(&p, &spec), json!({"result": p.to_string()})))
                }
                NcCmd::Moment => {
                    let (c, c1, c2) = moment_element(&spec);
                    let text = format!(
                        "c = {}\nc1 = {}\nc2 = {}",
                        print_poly(&c, &spec),
                        print_poly(&c1, &spec),
                        print_poly(&c2, &spec)
                    );
                    Ok(out(text, json!({"c": c.to_string(), "c1": c1.to_string(), "c2": c2.to_string()})))
                }
            }
        }
        Cmd::Auto(op) => {
            let spec = ctx.spec()?;
            match op {
                AutoCmd::Build(w) => {
                    let e = ctx.word(w, &spec)?.expand(&spec)?;
                    Ok(out(e.to_string(), endo_json(&e)))
                }
                AutoCmd::Compose { words } => {
                    if words.len() != 2 {
                        return Err(Error::Invalid(format!("compose needs two words, got {}", words.len())));
                    }
                    let a = word_from_json(&ctx.read_json(&words[0])?, &spec)?.expand(&spec)?;
                    let b = word_from_json(&ctx.read_json(&words[1])?, &spec)?.expand(&spec)?;
                    let e = a.compose(&b)?;
                    Ok(out(e.to_string(), endo_json(&e)))
                }
                AutoCmd::Invert(w) => {
                    let inv = ctx.word(w, &spec)?.invert(&spec)?;
                    let v = word_to_json(&inv, &spec);
                    Ok(out(serde_json::to_string_pretty(&v).expect("json"), v))
                }
                AutoCmd::Check { word, per_generator: true } => {
                    let sym = ctx.word(word, &spec)?.generators_symplectic(&spec)?;
                    Ok(out(format!("symplectic: {sym}"), json!({"symplectic": sym})))
                }
                AutoCmd::Check { word, per_generator: false } => {
                    let word = ctx.word(word, &spec)?;
                    let e = word.expand(&spec)?;
                    let (sym, red) = (e.is_symplectic(), e.is_reduced());
                    Ok(out(format!("symplectic: {sym}\nreduced: {red}"), json!({"symplectic": sym, "reduced": red})))
                }
                AutoCmd::Matrices(w) => {
                    let e = ctx.word(w, &spec)?.expand(&spec)?;
                    let (n, m) = (e.crossed_n(), e.crossed_m());
                    Ok(out(format!("N =\n{n}M =\n{m}"), json!({"N": n.to_string(), "M": m.to_string()})))
                }
                AutoCmd::Project0(w) => {
                    let e = ctx.word(w, &spec)?.expand(&spec)?;
                    let (pa, pas) = e.project_q0();
                    Ok(out(format!("a -> {pa}\na* -> {pas}"), json!({"a": pa.to_string(), "a*": pas.to_string()})))
                }
            }
        }
        Cmd::Gl(op) => match op {
            GlCmd::Factor { m, var } => {
                let a = polymat_from(m, (*var).into())?;
                let fs = pm_factor(&a)?;
                let items: Vec<String> = fs
                    .iter()
                    .map(|f| match f {
                        ElemFactor::Transvection(al, be, p) => format!("I + ({p}) e{al}{be}"),
                        ElemFactor::ScalarMat(t) => format!("const {}", crate::io::smat_to_json(t)),
                    })
                    .collect();
                Ok(out(items.join("\n"), json!({"factors": items})))
            }
            GlCmd::Psi { m, var } => {
                let a = polymat_from(m, (*var).into())?;
                let spec = QuiverSpec::zigzag(a.n)?;
                let w = psi_embed(&spec, &a)?;
                let v = word_to_json(&w, &spec);
                Ok(out(serde_json::to_string_pretty(&v).expect("json"), v))
            }
        },
        Cmd::Primitive(PrimitiveCmd::Solve { g, u }) => {
            let alph = Alphabet::free(g);
            let letters: Vec<_> = (0..g.len() as u16).collect();
            let comps = u.iter().map(|s| parse_free(s, &alph)).collect::<Result<Vec<_>>>()?;
            let f = solve_primitive(&letters, &comps)?;
            let text = print_cycsum(&f, &alph);
            Ok(out(text.clone(), json!({"f": text})))
        }
        Cmd::Rep(op) => {
            let tau = parse_scalar(&cli.tau)?.to_c64();
            match op {
                RepCmd::Random { kind } => {
                    let kind = match kind {
                        KindArg::Cprime => FiberKind::Cprime,
                        KindArg::Cdoubleprime => FiberKind::Cdoubleprime,
                    };
                    let p = RepPoint::random_fiber_point(cli.n, cli.r, tau, cli.seed, kind)?;
                    let v = p.to_json();
                    Ok(out(serde_json::to_string_pretty(&v).expect("json"), v))
                }
                RepCmd::Moment { p } => {
                    let p = ctx.point(p)?;
                    let (a, rel) = (p.moment_residual(), p.relative_residual());
                    Ok(out(
                        format!("residual: {a:.16e}\nrelative: {rel:.16e}\non fiber: {}", p.on_fiber()),
                        json!({"residual": a, "relative": rel, "on_fiber": p.on_fiber()}),
                    ))
                }
                RepCmd::Eval { p, f } => {
                    let p = ctx.point(p)?;
                    let m = p.eval_poly(&parse_ncpoly(f, &p.spec())?)?;
                    Ok(out(fmt_cmat(&m), json!({"rows": cmat_to_rows(&m)})))
                }
                RepCmd::Act { p, word } => {
                    let p = ctx.point(p)?;
                    let w = ctx.word(word, &p.spec())?;
                    let v = p.act_word(&w)?.to_json();
                    Ok(out(serde_json::to_string_pretty(&v).expect("json"), v))
                }
                RepCmd::OrbitEq { p, q } => {
                    let (p, q) = (ctx.point(p)?, ctx.point(q)?);
                    let eq = p.orbit_equal(&q, cli.tol.max(1e-6))?;
                    Ok(out(eq.to_string(), json!({"orbit_equal": eq})))
                }
                RepCmd::Flow { p, k, alpha, beta, t } => {
                    let v = ctx.point(p)?.flow_elementary(*k, *alpha, *beta, *t)?.to_json();
                    Ok(out(serde_json::to_string_pretty(&v).expect("json"), v))
                }
                RepCmd::FlowOde { p, k, t, steps, m } => {
                    let p = ctx.point(p)?;
                    let m = coupling(m.as_deref(), p.r)?;
                    let v = p.flow_ode(*k, &m, *t, *steps)?.to_json();
                    Ok(out(serde_json::to_string_pretty(&v).expect("json"), v))
                }
                RepCmd::Hamiltonian { p, k, m } => {
                    let p = ctx.point(p)?;
                    let m = coupling(m.as_deref(), p.r)?;
                    let h = p.hamiltonian(*k, &m);
                    Ok(out(fmt_c64(h), json!({"value": c_json(h)})))
                }
            }
        }
        Cmd::Nav(op) => match op {
            NavCmd::Reduce { p } => {
                let p = ctx.point(p)?;
                let (q, w) = reduce_rank_once(&p)?;
                let t = NavTrace { start: p, word: w, steps: Vec::new(), final_point: q };
                Ok(out(trace_text(&t), trace_to_json(&t)))
            }
            NavCmd::Reduce1 { p } => {
                let t = reduce_to_rank1(&ctx.point(p)?)?;
                Ok(out(trace_text(&t), trace_to_json(&t)))
            }
            NavCmd::Connect { p, q, strict } => {
                let (p, q) = (ctx.point(p)?, ctx.point(q)?);
                let w = connect(&p, &q, *strict)?;
                let v = word_to_json(&w, &p.spec());
                Ok(out(serde_json::to_string_pretty(&v).expect("json"), v))
            }
            NavCmd::Replay { trace } => {
                let t = trace_from_json(&ctx.read_json(trace)?)?;
                let got = t.start.act_word(&t.word)?;
                let dev = [
                    (&got.x, &t.final_point.x),
                    (&got.y, &t.final_point.y),
                    (&got.v, &t.final_point.v),
                    (&got.w, &t.final_point.w),
                ]
                .iter()
                .map(|(a, b)| (*a - *b).iter().map(|z| z.norm()).fold(0.0, f64::max))
                .fold(0.0, f64::max);
                let ok = dev <= 1e-8 * (1.0 + t.final_point.scale());
                Ok(out(format!("max deviation: {dev:.16e}\nok: {ok}"), json!({"max_deviation": dev, "ok": ok})))
            }
        },
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let mut ctx = Ctx { cli: &cli, stdin };
    match dispatch(&mut ctx) {
        Ok(o) => {
            let text = if cli.json { serde_json::to_string_pretty(&o.json).expect("json") } else { o.text };
            let text = if text.ends_with('\n') { text } else { text + "\n" };
            match &cli.output {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => 0,
                    Err(e) => {
                        let _ = writeln!(stderr, "error[Io]: {}: {e}", path.display());
                        1
                    }
                },
                None => {
                    let _ = write!(stdout, "{text}");
                    0
                }
            }
        }
        Err(e) => {
            if cli.json {
                let _ = writeln!(stdout, "{}", json!({"error": {"code": e.code(), "message": e.to_string()}}));
            }
            let _ = writeln!(stderr, "error[{}]: {e}", e.code());
            1
        }
    }
}
