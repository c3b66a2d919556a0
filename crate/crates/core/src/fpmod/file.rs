//! Line-oriented module files.
//!
//! ```text
//! # comment
//! module <name> over <algebra>
//! generator <label> degree <int>
//! action <generator of the algebra> <label> = <label> [+ <label> ...]
//! action <generator of the algebra> <label> = 0
//! expect <directive>
//! ```
//! `generator` lines list the basis of the module; actions not listed are
//! zero. Labels are nonempty and contain no whitespace, `+` or `=`.
//! `expect` lines are checked by [`crate::fpmod::check_expectation`].

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use super::module::GradedModule;
use crate::error::{Error, Result};
use crate::f2linalg::F2Matrix;
use crate::steenrod::syntax::{parse_algebra_at, parse_element_at};
use crate::steenrod::SubAlgebra;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Line {
    Blank,
    Comment(String),
    Module,
    Generator(usize),
    Action(usize),
    Expect(String),
}

/// A parsed module file, keeping comments and line order for round trips.
#[derive(Clone, Debug)]
pub struct ModuleFile {
    pub name: String,
    pub algebra: Arc<SubAlgebra>,
    /// Basis elements as `(label, degree)` in file order.
    pub basis: Vec<(String, i32)>,
    /// `(algebra generator index, source label, target labels)`.
    pub actions: Vec<(usize, String, Vec<String>)>,
    pub expects: Vec<String>,
    lines: Vec<Line>,
}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && !s.contains(|c: char| c.is_whitespace() || c == '+' || c == '=')
}

impl ModuleFile {
    pub fn parse(text: &str) -> Result<ModuleFile> {
        let mut header: Option<(String, Arc<SubAlgebra>)> = None;
        let mut basis: Vec<(String, i32)> = Vec::new();
        let mut seen: HashMap<String, i32> = HashMap::new();
        let mut actions: Vec<(usize, String, Vec<String>)> = Vec::new();
        let mut expects = Vec::new();
        let mut lines = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let err = |col: usize, msg: &str| Error::Parse {
                line: line_no,
                col,
                msg: msg.to_string(),
            };
            let indent = raw.len() - raw.trim_start().len();
            let t = raw.trim();
            if t.is_empty() {
                lines.push(Line::Blank);
                continue;
            }
            if let Some(c) = t.strip_prefix('#') {
                lines.push(Line::Comment(c.trim().to_string()));
                continue;
            }
            let (kw, rest) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
            let rest_col = indent + kw.len() + 1 + (rest.len() - rest.trim_start().len()) + 1;
            let rest = rest.trim();
            match kw {
                "module" => {
                    if header.is_some() {
                        return Err(err(1, "second module line"));
                    }
                    let Some((name, alg)) = rest.split_once(" over ") else {
                        return Err(err(rest_col, "expected `module <name> over <algebra>`"));
                    };
                    let name = name.trim();
                    if !valid_label(name) {
                        return Err(err(rest_col, "invalid module name"));
                    }
                    let alg_col = rest_col + rest.find(" over ").unwrap() + 5;
                    let a = parse_algebra_at(alg.trim(), line_no, alg_col)?;
                    header = Some((name.to_string(), a));
                    lines.push(Line::Module);
                }
                _ if header.is_none() => return Err(err(1, "file must start with a module line")),
                "generator" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    if parts.len() != 3 || parts[1] != "degree" {
                        return Err(err(rest_col, "expected `generator <label> degree <int>`"));
                    }
                    if !valid_label(parts[0]) {
                        return Err(err(rest_col, "invalid label"));
                    }
                    let d: i32 = parts[2]
                        .parse()
                        .map_err(|_| err(rest_col, "degree is not an integer"))?;
                    if seen.insert(parts[0].to_string(), d).is_some() {
                        return Err(err(rest_col, &format!("duplicate label {}", parts[0])));
                    }
                    lines.push(Line::Generator(basis.len()));
                    basis.push((parts[0].to_string(), d));
                }
                "action" => {
                    let alg = &header.as_ref().unwrap().1;
                    let Some((lhs, rhs)) = rest.split_once('=') else {
                        return Err(err(rest_col, "expected `=`"));
                    };
                    let lhs = lhs.trim_end();
                    let Some((elt, label)) = lhs.rsplit_once(char::is_whitespace) else {
                        return Err(err(rest_col, "expected `action <element> <label> = ...`"));
                    };
                    let e =
                        parse_element_at(elt.trim(), Some(alg.ambient_n()), line_no, rest_col - 1)?;
                    let g = alg.generator_index(&e).ok_or_else(|| {
                        err(
                            rest_col,
                            &format!("{} is not a generator of {}", elt.trim(), alg.name()),
                        )
                    })?;
                    let label_col = rest_col + lhs.len() - label.len();
                    let src_deg = *seen
                        .get(label)
                        .ok_or_else(|| err(label_col, &format!("unknown label {label}")))?;
                    let rhs_col = rest_col + rest.find('=').unwrap() + 1;
                    let rhs = rhs.trim();
                    let mut targets = Vec::new();
                    if rhs != "0" {
                        for tgt in rhs.split('+') {
                            let tgt = tgt.trim();
                            let deg = *seen
                                .get(tgt)
                                .ok_or_else(|| err(rhs_col, &format!("unknown label {tgt}")))?;
                            if deg != src_deg + alg.gen_degree(g) as i32 {
                                return Err(err(
                                    rhs_col,
                                    &format!(
                                        "{tgt} has degree {deg}, expected {}",
                                        src_deg + alg.gen_degree(g) as i32
                                    ),
                                ));
                            }
                            targets.push(tgt.to_string());
                        }
                    }
                    lines.push(Line::Action(actions.len()));
                    actions.push((g, label.to_string(), targets));
                }
                "expect" => {
                    lines.push(Line::Expect(rest.to_string()));
                    expects.push(rest.to_string());
                }
                _ => return Err(err(indent + 1, &format!("unknown keyword `{kw}`"))),
            }
        }
        let (name, algebra) = header.ok_or(Error::Parse {
            line: 1,
            col: 1,
            msg: "empty module file".into(),
        })?;
        Ok(ModuleFile {
            name,
            algebra,
            basis,
            actions,
            expects,
            lines,
        })
    }

    pub fn to_module(&self) -> Result<GradedModule> {
        let alg = &self.algebra;
        let mut by_deg: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        let mut pos: HashMap<&str, usize> = HashMap::new();
        for (l, d) in &self.basis {
            let v = by_deg.entry(*d).or_default();
            pos.insert(l, v.len());
            v.push(l.clone());
        }
        let deg: HashMap<&str, i32> = self.basis.iter().map(|(l, d)| (l.as_str(), *d)).collect();
        let mut mats: HashMap<(usize, i32), F2Matrix> = HashMap::new();
        let dim = |d: i32| by_deg.get(&d).map_or(0, |v| v.len());
        for (g, src, tgts) in &self.actions {
            let d = deg[src.as_str()];
            let k = alg.gen_degree(*g) as i32;
            let m = mats
                .entry((*g, d))
                .or_insert_with(|| F2Matrix::zeros(dim(d + k), dim(d)));
            for t in tgts {
                let (r, c) = (pos[t.as_str()], pos[src.as_str()]);
                m.set(r, c, !m.get(r, c));
            }
        }
        GradedModule::from_parts(self.name.clone(), alg.clone(), by_deg.clone(), |g, d| {
            let k = alg.gen_degree(g) as i32;
            mats.get(&(g, d))
                .cloned()
                .unwrap_or_else(|| F2Matrix::zeros(dim(d + k), dim(d)))
        })
    }

    /// Describe a module in file form, with nonzero generator actions only.
    pub fn from_module(m: &GradedModule) -> ModuleFile {
        let alg = m.algebra().clone();
        // labels the file grammar cannot carry become `v{deg}_{i}`
        let rename = m
            .degrees()
            .into_iter()
            .flat_map(|d| m.labels(d))
            .any(|l| !valid_label(l));
        let label = |d: i32, i: usize| -> String {
            let l = &m.labels(d)[i];
            if !rename || (valid_label(l) && !l.starts_with('v')) {
                return l.clone();
            }
            let deg = if d < 0 {
                format!("m{}", -d)
            } else {
                d.to_string()
            };
            format!("v{deg}_{i}")
        };
        let mut basis = Vec::new();
        for d in m.degrees() {
            basis.extend((0..m.dim(d)).map(|i| (label(d, i), d)));
        }
        let mut actions = Vec::new();
        for d in m.degrees() {
            for g in 0..alg.num_gens() {
                let k = alg.gen_degree(g) as i32;
                let a = m.gen_action(g, d);
                for j in 0..m.dim(d) {
                    let tgts: Vec<String> = a.column(j).ones().map(|i| label(d + k, i)).collect();
                    if !tgts.is_empty() {
                        actions.push((g, label(d, j), tgts));
                    }
                }
            }
        }
        let mut lines = vec![Line::Module];
        lines.extend((0..basis.len()).map(Line::Generator));
        lines.extend((0..actions.len()).map(Line::Action));
        let name: String = m
            .name()
            .chars()
            .map(|c| if c.is_whitespace() { '_' } else { c })
            .collect();
        ModuleFile {
            name,
            algebra: alg,
            basis,
            actions,
            expects: Vec::new(),
            lines,
        }
    }

    /// Normalized text: single spaces, one item per line, comments kept.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            match l {
                Line::Blank => out.push('\n'),
                Line::Comment(c) if c.is_empty() => out.push_str("#\n"),
                Line::Comment(c) => writeln!(out, "# {c}").unwrap(),
                Line::Module => {
                    writeln!(out, "module {} over {}", self.name, self.algebra.name()).unwrap()
                }
                Line::Generator(i) => {
                    let (l, d) = &self.basis[*i];
                    writeln!(out, "generator {l} degree {d}").unwrap();
                }
                Line::Action(i) => {
                    let (g, src, tgts) = &self.actions[*i];
                    let rhs = if tgts.is_empty() {
                        "0".to_string()
                    } else {
                        tgts.join(" + ")
                    };
                    writeln!(out, "action {} {src} = {rhs}", self.algebra.gen_name(*g)).unwrap();
                }
                Line::Expect(e) => writeln!(out, "expect {e}").unwrap(),
            }
        }
        out
    }
}

/// Normalize whitespace line by line, for comparing files.
pub fn normalize_whitespace(text: &str) -> String {
    text.lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
        .trim()
        .to_string()
}
