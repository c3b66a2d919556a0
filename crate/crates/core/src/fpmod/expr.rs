//! Module expressions and the fixture library.
//!
//! ```text
//! expr    := primary ('[' INT ']')*            postfix suspension
//! primary := NAME                              a fixture
//!          | 'quotient(' ALG ';' elt (',' elt)* ')'
//!          | 'hopf(' ALG ',' ALG ')'           H//K
//!          | 'free(' ALG ')' | 'trivial(' ALG ')' | 'ideal(' ALG ')'
//!          | 'dual(' expr ')' | 'loop(' expr ')' | 'oloop(' expr ')'
//!          | 'double(' expr ')' | 'reduced(' expr ')'
//!          | 'tensor(' expr ',' expr ')' | 'sum(' expr (',' expr)* ')'
//!          | 'induce(' ALG ',' expr ')' | 'restrict(' expr ',' ALG ')'
//! ```

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use super::file::ModuleFile;
use super::functors::{
    augmentation_ideal, double, dual, hopf_quotient, induce, quotient_by_left_ideal, restrict,
    tensor,
};
use super::iso::{iso_test, selfdual_shift, IsoOutcome};
use super::margolis::margolis_homology;
use super::module::GradedModule;
use super::reduce::reduce;
use super::stable::{loop_module, oloop_module};
use crate::error::{Error, Result};
use crate::steenrod::syntax::{parse_algebra, parse_element};
use crate::steenrod::SubAlgebra;

/// The fixtures shipped with this crate.
pub fn default_fixture_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
}

/// Named modules read from `<dir>/<name>.mod`.
pub struct Library {
    dir: PathBuf,
    cache: Mutex<HashMap<String, (Arc<ModuleFile>, Arc<GradedModule>)>>,
}

impl Library {
    pub fn new(dir: impl Into<PathBuf>) -> Library {
        Library {
            dir: dir.into(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn shipped() -> Library {
        Library::new(default_fixture_dir())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Fixture names, sorted.
    pub fn names(&self) -> Result<Vec<String>> {
        let rd = std::fs::read_dir(&self.dir)
            .map_err(|e| Error::Io(format!("{}: {e}", self.dir.display())))?;
        let mut out: Vec<String> = rd
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let p = e.path();
                (p.extension()? == "mod")
                    .then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
            })
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn file(&self, name: &str) -> Result<Arc<ModuleFile>> {
        Ok(self.load(name)?.0)
    }

    pub fn module(&self, name: &str) -> Result<Arc<GradedModule>> {
        Ok(self.load(name)?.1)
    }

    fn load(&self, name: &str) -> Result<(Arc<ModuleFile>, Arc<GradedModule>)> {
        if let Some(x) = self.cache.lock().unwrap().get(name) {
            return Ok(x.clone());
        }
        let path = self.dir.join(format!("{name}.mod"));
        if !path.is_file() {
            return Err(Error::UnknownFixture(name.to_string()));
        }
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let f = ModuleFile::parse(&text)?;
        let m = f.to_module()?;
        let x = (Arc::new(f), Arc::new(m));
        self.cache
            .lock()
            .unwrap()
            .insert(name.to_string(), x.clone());
        Ok(x)
    }
}

/// Split at top-level separators (`,` or `;`), tracking `()` and `[]`.
fn split_args(s: &str) -> Vec<(char, &str)> {
    let mut out = Vec::new();
    let (mut depth, mut start, mut sep) = (0i32, 0, ',');
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' | ';' if depth == 0 => {
                out.push((sep, s[start..i].trim()));
                sep = c;
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((sep, s[start..].trim()));
    out
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        col: 1,
        msg: msg.into(),
    }
}

/// Evaluate a module expression against a fixture library.
pub fn eval(text: &str, lib: &Library) -> Result<GradedModule> {
    let t = text.trim();
    // trailing suspensions
    if t.ends_with(']') {
        let mut depth = 0;
        for (i, c) in t.char_indices().rev() {
            match c {
                ']' => depth += 1,
                '[' => {
                    depth -= 1;
                    if depth == 0 {
                        let inner = &t[i + 1..t.len() - 1];
                        if let Ok(k) = inner.trim().parse::<i32>() {
                            return Ok(eval(&t[..i], lib)?.suspend(k));
                        }
                        break;
                    }
                }
                _ => {}
            }
        }
    }
    let Some(open) = t.find('(') else {
        if t.is_empty()
            || !t
                .chars()
                .all(|c| c.is_alphanumeric() || c == '_' || c == '-')
        {
            return Err(bad(format!("cannot read module expression `{t}`")));
        }
        return Ok(lib.module(t)?.as_ref().clone());
    };
    if !t.ends_with(')') {
        return Err(bad(format!("unbalanced expression `{t}`")));
    }
    let head = t[..open].trim();
    let args = split_args(&t[open + 1..t.len() - 1]);
    let want = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(bad(format!("{head} takes {n} argument(s)")))
        }
    };
    let alg = |s: &str| -> Result<Arc<SubAlgebra>> { parse_algebra(s) };
    match head {
        "quotient" => {
            let a = alg(args[0].1)?;
            if args.len() < 2 || args[1].0 != ';' {
                return Err(bad("quotient(ALG; elements)"));
            }
            let gens = args[1..]
                .iter()
                .map(|(_, e)| parse_element(e, Some(a.ambient_n())))
                .collect::<Result<Vec<_>>>()?;
            quotient_by_left_ideal(&a, &gens)
        }
        "hopf" => {
            want(2)?;
            hopf_quotient(&alg(args[0].1)?, &*alg(args[1].1)?)
        }
        "free" => {
            want(1)?;
            Ok(GradedModule::regular(&alg(args[0].1)?).as_ref().clone())
        }
        "trivial" => {
            want(1)?;
            Ok(GradedModule::trivial(alg(args[0].1)?))
        }
        "ideal" => {
            want(1)?;
            augmentation_ideal(&alg(args[0].1)?)
        }
        "dual" => {
            want(1)?;
            dual(&eval(args[0].1, lib)?)
        }
        "loop" => {
            want(1)?;
            loop_module(&eval(args[0].1, lib)?)
        }
        "oloop" => {
            want(1)?;
            oloop_module(&eval(args[0].1, lib)?)
        }
        "double" => {
            want(1)?;
            double(&eval(args[0].1, lib)?)
        }
        "reduced" => {
            want(1)?;
            Ok(reduce(&eval(args[0].1, lib)?)?.reduced)
        }
        "tensor" => {
            want(2)?;
            tensor(&eval(args[0].1, lib)?, &eval(args[1].1, lib)?)
        }
        "sum" => {
            let parts = args
                .iter()
                .map(|(_, e)| eval(e, lib))
                .collect::<Result<Vec<_>>>()?;
            let a = parts
                .first()
                .ok_or_else(|| bad("sum of nothing"))?
                .algebra()
                .clone();
            let refs: Vec<&GradedModule> = parts.iter().collect();
            GradedModule::direct_sum(t, &a, &refs)
        }
        "induce" => {
            want(2)?;
            induce(&alg(args[0].1)?, &eval(args[1].1, lib)?)
        }
        "restrict" => {
            want(2)?;
            restrict(&eval(args[0].1, lib)?, &alg(args[1].1)?)
        }
        _ => Err(bad(format!("unknown function `{head}`"))),
    }
}

fn parse_dims(s: &str) -> Result<BTreeMap<i32, usize>> {
    s.split_whitespace()
        .map(|p| {
            let (d, n) = p
                .split_once(':')
                .ok_or_else(|| bad(format!("expected degree:dim, got `{p}`")))?;
            Ok((
                d.parse().map_err(|_| bad(p))?,
                n.parse().map_err(|_| bad(p))?,
            ))
        })
        .collect()
}

fn parse_shift(s: &str) -> Result<Option<i32>> {
    match s.trim() {
        "none" => Ok(None),
        x => Ok(Some(x.parse().map_err(|_| {
            bad(format!("expected a shift or `none`, got `{x}`"))
        })?)),
    }
}

/// Check one `expect` directive against a module.
///
/// ```text
/// valid
/// dims D:N ...                     nonzero dimensions by degree
/// iso EXPR                         isomorphic to a module expression
/// stable-iso EXPR                  isomorphic after removing free summands
/// selfdual SHIFT|none              D(M) ≅ M[-SHIFT]
/// stable-selfdual SHIFT|none
/// free D ...                       degrees of the free summands (or `none`)
/// margolis S D:N ...               P(1,S) homology
/// ```
pub fn check_expectation(m: &GradedModule, directive: &str, lib: &Library) -> Result<()> {
    let (kw, rest) = directive
        .trim()
        .split_once(char::is_whitespace)
        .unwrap_or((directive.trim(), ""));
    let rest = rest.trim();
    let fail = |msg: String| Err(Error::Invalid(format!("expect {directive}: {msg}")));
    match kw {
        "valid" => {
            let v = m.validate()?;
            if v.is_empty() {
                Ok(())
            } else {
                fail(
                    v.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join("; "),
                )
            }
        }
        "dims" => {
            let want = parse_dims(rest)?;
            if m.dims() == want {
                Ok(())
            } else {
                fail(format!("dimensions are {:?}", m.dims()))
            }
        }
        "iso" | "stable-iso" => {
            let other = eval(rest, lib)?;
            let (a, b) = if kw == "iso" {
                (m.clone(), other)
            } else {
                (reduce(m)?.reduced, reduce(&other)?.reduced)
            };
            match iso_test(&a, &b)? {
                IsoOutcome::Isomorphic(_) => Ok(()),
                IsoOutcome::NotIsomorphic(why) => fail(why),
                IsoOutcome::Indeterminate => Err(Error::Indeterminate),
            }
        }
        "selfdual" | "stable-selfdual" => {
            let want = parse_shift(rest)?;
            let got = selfdual_shift(m, kw == "stable-selfdual")?;
            if got == want {
                Ok(())
            } else {
                fail(format!("shift is {got:?}"))
            }
        }
        "free" => {
            let mut want: Vec<i32> = if rest == "none" {
                Vec::new()
            } else {
                rest.split_whitespace()
                    .map(|x| x.parse().map_err(|_| bad(x)))
                    .collect::<Result<_>>()?
            };
            want.sort();
            let mut got = reduce(m)?.free_part;
            got.sort();
            if got == want {
                Ok(())
            } else {
                fail(format!("free summands in degrees {got:?}"))
            }
        }
        "margolis" => {
            let (s, dims) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let s: u32 = s.parse().map_err(|_| bad(s))?;
            let want = parse_dims(dims)?;
            let got = margolis_homology(m, s)?;
            if got == want {
                Ok(())
            } else {
                fail(format!("homology is {got:?}"))
            }
        }
        _ => Err(bad(format!("unknown expectation `{kw}`"))),
    }
}

/// Validate a fixture and check each of its expectations; returns one
/// `(directive, outcome)` per check, starting with validation.
pub fn verify_fixture(name: &str, lib: &Library) -> Result<Vec<(String, Result<()>)>> {
    let f = lib.file(name)?;
    let m = lib.module(name)?;
    let mut out = vec![("valid".to_string(), check_expectation(&m, "valid", lib))];
    for e in &f.expects {
        out.push((e.clone(), check_expectation(&m, e, lib)));
    }
    Ok(out)
}
