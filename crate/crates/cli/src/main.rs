use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use stmod::fpmod::{self, GradedModule, IsoOutcome, Library, ModuleFile};
use stmod::resolve::{self, ChartFormat, ExtChart};
use stmod::rootspin::{self, GroupForm, RootSystem, SpinCertificate, SpinReport};
use stmod::steenrod::syntax::{parse_algebra, parse_element};
use stmod::{Error, Result};

/// Finite modules over the subalgebras A(n) of the mod 2 Steenrod algebra.
#[derive(Parser)]
#[command(name = "stmod", version)]
struct Cli {
    /// Emit a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Directory holding `NAME.mod` fixtures.
    #[arg(long, global = true, value_name = "DIR")]
    fixture_dir: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Source {
    /// A fixture from the library.
    #[arg(long, value_name = "NAME")]
    fixture: Option<String>,
    /// A module definition file.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// A module expression, e.g. `tensor(Joker, Joker)`.
    #[arg(long, value_name = "EXPR")]
    expr: Option<String>,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Second {
    /// Second operand: a fixture.
    #[arg(long, value_name = "NAME")]
    with_fixture: Option<String>,
    /// Second operand: a module definition file.
    #[arg(long, value_name = "PATH")]
    with_file: Option<PathBuf>,
    /// Second operand: a module expression.
    #[arg(long, value_name = "EXPR")]
    with_expr: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Csv,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Adjoint,
    SimplyConnected,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sequence {
    Bott,
    P11,
}

#[derive(Subcommand)]
enum Verb {
    /// Parse a module file and print it in normalized form.
    Define(Source),
    /// Check the relations of the algebra, listing witnesses for failures.
    Validate(Source),
    /// Tensor product with the diagonal action.
    Tensor {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        with: Second,
    },
    /// Linear dual.
    Dual(Source),
    /// Shift all degrees.
    Suspend {
        #[command(flatten)]
        src: Source,
        #[arg(long, allow_hyphen_values = true)]
        by: i32,
    },
    /// Split off free summands.
    Reduce(Source),
    /// Loop (kernel of the injective hull's cover) or its inverse.
    Loop {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        inverse: bool,
        #[arg(long, default_value_t = 1)]
        times: u32,
    },
    /// Cyclic module ALG / ALG{relations}.
    Quotient {
        #[arg(long)]
        algebra: String,
        /// A relation element; repeat for several.
        #[arg(long = "rel", required = true)]
        relations: Vec<String>,
    },
    /// Extend scalars to a larger algebra.
    Induce {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        to: String,
    },
    /// Restrict scalars to a subalgebra.
    Restrict {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        to: String,
    },
    /// Double all degrees, Sq^k acting as Sq^2k.
    Double(Source),
    /// Ext chart of the module with F2 coefficients.
    Ext {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 8)]
        smax: usize,
        #[arg(long, default_value_t = 24)]
        tmax: i32,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Ext of the module with coefficients in a second module.
    Extgroups {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        with: Second,
        #[arg(long, default_value_t = 8)]
        smax: usize,
        #[arg(long, default_value_t = 24)]
        tmax: i32,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Find the shift d with D(M) isomorphic to M[-d].
    CheckSelfdual {
        #[command(flatten)]
        src: Source,
        /// Discard free summands first.
        #[arg(long)]
        stable: bool,
    },
    /// Check exactness of a built-in sequence or of a module's minimal resolution.
    CheckExact {
        #[arg(long, value_enum, conflicts_with_all = ["fixture", "file", "expr"])]
        sequence: Option<Sequence>,
        #[arg(long, default_value_t = 6)]
        length: usize,
        #[arg(long, value_name = "NAME")]
        fixture: Option<String>,
        #[arg(long, value_name = "PATH")]
        file: Option<PathBuf>,
        #[arg(long, value_name = "EXPR")]
        expr: Option<String>,
        #[arg(long, default_value_t = 6)]
        smax: usize,
        #[arg(long, default_value_t = 20)]
        tmax: i32,
    },
    /// Does the adjoint representation lift to Spin?
    SpinCheck {
        /// Root system, e.g. E7.
        #[arg(long = "type", value_name = "TYPE", required_unless_present = "un")]
        kind: Option<String>,
        #[arg(long, value_enum, default_value_t = Form::Adjoint)]
        form: Form,
        /// Extra lattice generator in weight coordinates, comma separated (custom form).
        #[arg(long = "extra", value_name = "WEIGHT", allow_hyphen_values = true)]
        extra: Vec<String>,
        /// The unitary group U(n).
        #[arg(long, conflicts_with = "kind")]
        un: Option<usize>,
    },
    /// List fixtures, or verify each against its recorded expectations.
    Fixtures {
        #[arg(long)]
        verify: bool,
    },
}

/// Text output, JSON result, JSON certificate, and whether the answer is a failure.
struct Outcome {
    text: String,
    result: Value,
    certificate: Value,
    failed: bool,
}

impl Outcome {
    fn ok(text: String, result: Value) -> Outcome {
        Outcome {
            text,
            result,
            certificate: Value::Null,
            failed: false,
        }
    }
}

struct Ctx {
    lib: Library,
    inputs: Vec<Value>,
}

impl Ctx {
    fn load(
        &mut self,
        fixture: Option<&str>,
        file: Option<&PathBuf>,
        expr: Option<&str>,
    ) -> Result<GradedModule> {
        if let Some(name) = fixture {
            self.inputs.push(json!({"fixture": name}));
            return Ok(self.lib.module(name)?.as_ref().clone());
        }
        if let Some(path) = file {
            self.inputs
                .push(json!({"file": path.display().to_string()}));
            return ModuleFile::parse(&read(path)?)?.to_module();
        }
        let e = expr.expect("clap enforces one source");
        self.inputs.push(json!({"expr": e}));
        fpmod::eval(e, &self.lib)
    }

    fn source(&mut self, s: &Source) -> Result<GradedModule> {
        self.load(s.fixture.as_deref(), s.file.as_ref(), s.expr.as_deref())
    }

    fn second(&mut self, s: &Second) -> Result<GradedModule> {
        self.load(
            s.with_fixture.as_deref(),
            s.with_file.as_ref(),
            s.with_expr.as_deref(),
        )
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn module_json(m: &GradedModule) -> Value {
    let dims: BTreeMap<String, usize> = m
        .dims()
        .into_iter()
        .map(|(d, n)| (d.to_string(), n))
        .collect();
    json!({
        "name": m.name(),
        "algebra": m.algebra().name(),
        "dims": dims,
        "text": ModuleFile::from_module(m).serialize(),
    })
}

fn module_outcome(m: &GradedModule) -> Outcome {
    Outcome::ok(ModuleFile::from_module(m).serialize(), module_json(m))
}

fn chart_json(c: &ExtChart) -> Value {
    let entries: Vec<Value> = c
        .entries
        .iter()
        .map(|(&(s, t), &n)| json!({"s": s, "t": t, "dim": n}))
        .collect();
    json!({"s_max": c.s_max, "t_max": c.t_max, "entries": entries})
}

fn chart_outcome(c: &ExtChart, format: Format, certificate: Value) -> Outcome {
    let f = match format {
        Format::Ascii => ChartFormat::Ascii,
        Format::Csv => ChartFormat::Csv,
        Format::Svg => ChartFormat::Svg,
    };
    Outcome {
        text: resolve::render_chart(c, f),
        result: chart_json(c),
        certificate,
        failed: false,
    }
}

fn map_json(m: &fpmod::ModuleMap) -> Value {
    let mats: BTreeMap<String, Vec<String>> = m
        .matrices()
        .iter()
        .map(|(d, a)| {
            let rows = (0..a.rows())
                .map(|r| {
                    (0..a.cols())
                        .map(|c| if a.get(r, c) { '1' } else { '0' })
                        .collect()
                })
                .collect();
            (d.to_string(), rows)
        })
        .collect();
    json!({"shift": m.shift(), "matrices": mats})
}

fn spin_outcome(r: &SpinReport) -> Outcome {
    let (cert_text, cert) = match &r.certificate {
        SpinCertificate::Coordinates(v) => {
            let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            (
                format!("certificate: ({})", s.join(", ")),
                json!({"coordinates": v}),
            )
        }
        SpinCertificate::NonIntegral(i, q) => (
            format!("certificate: coordinate {i} is {q}"),
            json!({"coordinate": i, "value": q.to_string()}),
        ),
    };
    let rho: Vec<String> = r.rho.iter().map(|q| q.to_string()).collect();
    Outcome {
        text: format!("{}\n{cert_text}\n", r.verdict()),
        result: json!({
            "group": r.group,
            "spin": r.in_lattice,
            "rho": rho,
            "lattice": r.lattice_name,
            "verdict": r.verdict(),
        }),
        certificate: cert,
        failed: false,
    }
}

fn run(cli: &Cli, ctx: &mut Ctx) -> Result<Outcome> {
    Ok(match &cli.verb {
        Verb::Define(s) => {
            if let Some(path) = &s.file {
                ctx.inputs.push(json!({"file": path.display().to_string()}));
                let f = ModuleFile::parse(&read(path)?)?;
                let m = f.to_module()?;
                Outcome::ok(f.serialize(), module_json(&m))
            } else if let Some(name) = &s.fixture {
                ctx.inputs.push(json!({"fixture": name}));
                let f = ctx.lib.file(name)?;
                Outcome::ok(f.serialize(), module_json(&f.to_module()?))
            } else {
                module_outcome(&ctx.source(s)?)
            }
        }
        Verb::Validate(s) => {
            let m = ctx.source(s)?;
            let v = m.validate()?;
            let witnesses: Vec<Value> = v
                .iter()
                .map(|w| json!({"relation": w.relation, "degree": w.degree, "label": w.label}))
                .collect();
            let text = if v.is_empty() {
                format!("{} is a valid {}-module\n", m.name(), m.algebra().name())
            } else {
                let mut t = format!("{} fails {} relation(s):\n", m.name(), v.len());
                for w in &v {
                    t.push_str(&format!("  {w}\n"));
                }
                t
            };
            Outcome {
                text,
                result: json!({"valid": v.is_empty()}),
                certificate: json!(witnesses),
                failed: !v.is_empty(),
            }
        }
        Verb::Tensor { src, with } => {
            let a = ctx.source(src)?;
            let b = ctx.second(with)?;
            module_outcome(&fpmod::tensor(&a, &b)?)
        }
        Verb::Dual(s) => module_outcome(&fpmod::dual(&ctx.source(s)?)?),
        Verb::Suspend { src, by } => module_outcome(&ctx.source(src)?.suspend(*by)),
        Verb::Reduce(s) => {
            let m = ctx.source(s)?;
            let d = fpmod::reduce(&m)?;
            let free: Vec<String> = d.free_part.iter().map(|x| x.to_string()).collect();
            let free = if free.is_empty() {
                "none".to_string()
            } else {
                free.join(" ")
            };
            let text = format!(
                "free summands in degrees: {free}\n{}",
                ModuleFile::from_module(&d.reduced).serialize()
            );
            Outcome {
                text,
                result: json!({"free_part": d.free_part, "reduced": module_json(&d.reduced)}),
                certificate: json!({"splitting_bijective": d.witness.is_bijective()}),
                failed: false,
            }
        }
        Verb::Loop {
            src,
            inverse,
            times,
        } => {
            let mut m = ctx.source(src)?;
            for _ in 0..*times {
                m = if *inverse {
                    fpmod::oloop_module(&m)?
                } else {
                    fpmod::loop_module(&m)?
                };
            }
            module_outcome(&m)
        }
        Verb::Quotient { algebra, relations } => {
            ctx.inputs
                .push(json!({"algebra": algebra, "relations": relations}));
            let a = parse_algebra(algebra)?;
            let gens = relations
                .iter()
                .map(|r| parse_element(r, Some(a.ambient_n())))
                .collect::<Result<Vec<_>>>()?;
            module_outcome(&fpmod::quotient_by_left_ideal(&a, &gens)?)
        }
        Verb::Induce { src, to } => {
            let m = ctx.source(src)?;
            module_outcome(&fpmod::induce(&parse_algebra(to)?, &m)?)
        }
        Verb::Restrict { src, to } => {
            let m = ctx.source(src)?;
            module_outcome(&fpmod::restrict(&m, &parse_algebra(to)?)?)
        }
        Verb::Double(s) => module_outcome(&fpmod::double(&ctx.source(s)?)?),
        Verb::Ext {
            src,
            smax,
            tmax,
            format,
        } => {
            let m = ctx.source(src)?;
            let res = resolve::minimal_resolution(&m, *smax, *tmax)?;
            let chart = resolve::chart_of(&res);
            let cert = json!({
                "generators": res
                    .generator_counts()
                    .into_iter()
                    .map(|((s, t), n)| json!({"s": s, "t": t, "count": n}))
                    .collect::<Vec<_>>(),
                "minimal": res.minimality_failure().is_none(),
            });
            chart_outcome(&chart, *format, cert)
        }
        Verb::Extgroups {
            src,
            with,
            smax,
            tmax,
            format,
        } => {
            let m = ctx.source(src)?;
            let n = ctx.second(with)?;
            chart_outcome(
                &resolve::ext_groups(&m, &n, *smax, *tmax)?,
                *format,
                Value::Null,
            )
        }
        Verb::CheckSelfdual { src, stable } => {
            let m = ctx.source(src)?;
            let base = if *stable {
                fpmod::reduce(&m)?.reduced
            } else {
                m.clone()
            };
            let word = if *stable {
                "stably self-dual"
            } else {
                "self-dual"
            };
            match fpmod::selfdual_shift(&m, *stable)? {
                Some(d) => {
                    let iso = match fpmod::iso_test(&fpmod::dual(&base)?, &base.suspend(-d))? {
                        IsoOutcome::Isomorphic(f) => map_json(&f),
                        _ => Value::Null,
                    };
                    Outcome {
                        text: format!("{word} with shift {d}\n"),
                        result: json!({"selfdual": true, "shift": d}),
                        certificate: iso,
                        failed: false,
                    }
                }
                None => Outcome::ok(
                    format!("not {word}\n"),
                    json!({"selfdual": false, "shift": Value::Null}),
                ),
            }
        }
        Verb::CheckExact {
            sequence,
            length,
            fixture,
            file,
            expr,
            smax,
            tmax,
        } => {
            let (maps, what) = match sequence {
                Some(Sequence::Bott) => {
                    ctx.inputs.push(json!({"sequence": "bott"}));
                    (fpmod::bott_sequence()?, "Bott sequence".to_string())
                }
                Some(Sequence::P11) => {
                    ctx.inputs
                        .push(json!({"sequence": "p11", "length": length}));
                    (
                        fpmod::p11_resolution(*length)?,
                        format!("periodic resolution of length {length}"),
                    )
                }
                None => {
                    if fixture.is_none() && file.is_none() && expr.is_none() {
                        return Err(Error::Invalid(
                            "check-exact needs --sequence or a module source".into(),
                        ));
                    }
                    let m = ctx.load(fixture.as_deref(), file.as_ref(), expr.as_deref())?;
                    let res = resolve::minimal_resolution(&m, *smax, *tmax)?;
                    (
                        res.chain(),
                        format!("minimal resolution of {} through t = {tmax}", m.name()),
                    )
                }
            };
            match fpmod::check_exact(&maps) {
                Ok(()) => Outcome::ok(
                    format!("exact: {what} ({} maps)\n", maps.len()),
                    json!({"exact": true, "maps": maps.len()}),
                ),
                Err(f) => Outcome {
                    text: format!(
                        "not exact: {what} fails at stage {} degree {}: {}\n",
                        f.stage, f.degree, f.reason
                    ),
                    result: json!({"exact": false}),
                    certificate: json!({"stage": f.stage, "degree": f.degree, "reason": f.reason}),
                    failed: true,
                },
            }
        }
        Verb::SpinCheck {
            kind,
            form,
            extra,
            un,
        } => {
            if let Some(n) = un {
                ctx.inputs.push(json!({"un": n}));
                return Ok(spin_outcome(&rootspin::u_n_adjoint_spin(*n)?));
            }
            let kind = kind.as_deref().expect("clap requires --type without --un");
            ctx.inputs.push(json!({"type": kind, "extra": extra}));
            let rs: RootSystem = kind.parse()?;
            let g = match form {
                Form::Adjoint => GroupForm::adjoint(rs),
                Form::SimplyConnected => GroupForm::simply_connected(rs),
                Form::Custom => {
                    let weights = extra
                        .iter()
                        .map(|w| {
                            w.split(',')
                                .map(|x| x.trim().parse::<i64>())
                                .collect::<std::result::Result<Vec<_>, _>>()
                                .map_err(|_| Error::Invalid(format!("bad weight `{w}`")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    GroupForm::custom(rs, &weights)?
                }
            };
            spin_outcome(&rootspin::adjoint_spin(&g))
        }
        Verb::Fixtures { verify } => {
            let names = ctx.lib.names()?;
            ctx.inputs
                .push(json!({"dir": ctx.lib.dir().display().to_string()}));
            if !verify {
                let mut text = names.join("\n");
                text.push('\n');
                return Ok(Outcome::ok(text, json!(names)));
            }
            let mut text = String::new();
            let mut report = Vec::new();
            let mut failed = false;
            for name in &names {
                let checks = fpmod::verify_fixture(name, &ctx.lib)?;
                let bad: Vec<(String, String)> = checks
                    .iter()
                    .filter_map(|(d, r)| r.as_ref().err().map(|e| (d.clone(), e.to_string())))
                    .collect();
                if bad.is_empty() {
                    text.push_str(&format!("ok   {name} ({} checks)\n", checks.len()));
                } else {
                    failed = true;
                    for (d, e) in &bad {
                        text.push_str(&format!("FAIL {name}: {d}: {e}\n"));
                    }
                }
                let fails: Vec<Value> = bad
                    .iter()
                    .map(|(d, e)| json!({"check": d, "error": e}))
                    .collect();
                report.push(json!({"fixture": name, "checks": checks.len(), "failures": fails}));
            }
            text.push_str(&format!(
                "{} fixtures, {}\n",
                names.len(),
                if failed { "failures above" } else { "all ok" }
            ));
            Outcome {
                text,
                result: json!(report),
                certificate: Value::Null,
                failed,
            }
        }
    })
}

fn verb_name(v: &Verb) -> &'static str {
    match v {
        Verb::Define(_) => "define",
        Verb::Validate(_) => "validate",
        Verb::Tensor { .. } => "tensor",
        Verb::Dual(_) => "dual",
        Verb::Suspend { .. } => "suspend",
        Verb::Reduce(_) => "reduce",
        Verb::Loop { .. } => "loop",
        Verb::Quotient { .. } => "quotient",
        Verb::Induce { .. } => "induce",
        Verb::Restrict { .. } => "restrict",
        Verb::Double(_) => "double",
        Verb::Ext { .. } => "ext",
        Verb::Extgroups { .. } => "extgroups",
        Verb::CheckSelfdual { .. } => "check-selfdual",
        Verb::CheckExact { .. } => "check-exact",
        Verb::SpinCheck { .. } => "spin-check",
        Verb::Fixtures { .. } => "fixtures",
    }
}

fn emit(cli: &Cli, body: &str) -> ExitCode {
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{body}"),
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let lib = match &cli.fixture_dir {
        Some(d) => Library::new(d.clone()),
        None => Library::shipped(),
    };
    let mut ctx = Ctx {
        lib,
        inputs: Vec::new(),
    };
    let verb = verb_name(&cli.verb);
    match run(&cli, &mut ctx) {
        Ok(o) => {
            let body = if cli.json {
                let env = json!({"verb": verb, "inputs": ctx.inputs, "result": o.result, "certificate": o.certificate});
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&env).expect("json values serialize")
                )
            } else {
                o.text
            };
            let code = emit(&cli, &body);
            if o.failed {
                ExitCode::from(1)
            } else {
                code
            }
        }
        Err(e) => {
            if cli.json {
                let env = json!({"verb": verb, "inputs": ctx.inputs, "error": e.to_string()});
                println!(
                    "{}",
                    serde_json::to_string_pretty(&env).expect("json values serialize")
                );
            }
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
