use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::f2linalg::{Echelon, F2Matrix, F2Vector};
use crate::steenrod::{wall_relations, SteenrodElt, SubAlgebra, WallRelation};

/// A finite graded left module over a [`SubAlgebra`].
///
/// Only generator actions are stored; the action of every basis element of
/// the algebra is derived from its generator word on first use.
pub struct GradedModule {
    name: String,
    algebra: Arc<SubAlgebra>,
    min_degree: i32,
    labels: Vec<Vec<String>>,
    // gens[g][i]: degree min_degree+i to min_degree+i+|g|
    gens: Vec<Vec<F2Matrix>>,
    cache: OnceLock<Vec<Vec<F2Matrix>>>,
}

impl Clone for GradedModule {
    fn clone(&self) -> Self {
        GradedModule {
            name: self.name.clone(),
            algebra: self.algebra.clone(),
            min_degree: self.min_degree,
            labels: self.labels.clone(),
            gens: self.gens.clone(),
            cache: OnceLock::new(),
        }
    }
}

impl fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} over {} dims {:?}",
            self.name,
            self.algebra,
            self.dims()
        )
    }
}

/// A failed relation: `relation` acts nonzero on the basis vector `label`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub relation: String,
    pub degree: i32,
    pub label: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} is nonzero on {} (degree {})",
            self.relation, self.label, self.degree
        )
    }
}

fn cached_wall_relations(k: u32) -> Result<Arc<Vec<WallRelation>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<WallRelation>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(&k) {
        return Ok(r.clone());
    }
    let r = Arc::new(wall_relations(k)?);
    cache.lock().unwrap().insert(k, r.clone());
    Ok(r)
}

impl GradedModule {
    /// Build a module from a basis and generator actions. `action(g, d)` must
    /// return the matrix from degree `d` to `d + |g|` for every degree `d`
    /// carrying basis elements.
    pub fn from_parts(
        name: impl Into<String>,
        algebra: Arc<SubAlgebra>,
        basis: BTreeMap<i32, Vec<String>>,
        mut action: impl FnMut(usize, i32) -> F2Matrix,
    ) -> Result<GradedModule> {
        let basis: BTreeMap<i32, Vec<String>> =
            basis.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        let (min_degree, labels) = match (basis.keys().next(), basis.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (
                lo,
                (lo..=hi)
                    .map(|d| basis.get(&d).cloned().unwrap_or_default())
                    .collect::<Vec<_>>(),
            ),
            _ => (0, Vec::new()),
        };
        let dim = |d: i32| -> usize {
            let i = d - min_degree;
            if i < 0 || i as usize >= labels.len() {
                0
            } else {
                labels[i as usize].len()
            }
        };
        let mut gens = Vec::with_capacity(algebra.num_gens());
        for g in 0..algebra.num_gens() {
            let k = algebra.gen_degree(g) as i32;
            let mut per = Vec::with_capacity(labels.len());
            for i in 0..labels.len() {
                let d = min_degree + i as i32;
                let m = if labels[i].is_empty() {
                    F2Matrix::zeros(dim(d + k), 0)
                } else {
                    action(g, d)
                };
                if m.rows() != dim(d + k) || m.cols() != dim(d) {
                    return Err(Error::DimensionMismatch(format!(
                        "action of {} from degree {d} is {}x{}, expected {}x{}",
                        algebra.gen_name(g),
                        m.rows(),
                        m.cols(),
                        dim(d + k),
                        dim(d)
                    )));
                }
                per.push(m);
            }
            gens.push(per);
        }
        Ok(GradedModule {
            name: name.into(),
            algebra,
            min_degree,
            labels,
            gens,
            cache: OnceLock::new(),
        })
    }

    pub fn zero(algebra: Arc<SubAlgebra>) -> GradedModule {
        Self::from_parts("0", algebra, BTreeMap::new(), |_, _| unreachable!()).unwrap()
    }

    /// F_2 in degree 0 with trivial action.
    pub fn trivial(algebra: Arc<SubAlgebra>) -> GradedModule {
        let basis = BTreeMap::from([(0, vec!["1".to_string()])]);
        Self::from_parts("F2", algebra, basis, |_, _| F2Matrix::zeros(0, 1)).unwrap()
    }

    /// The algebra acting on itself by left multiplication.
    pub fn regular(algebra: &Arc<SubAlgebra>) -> Arc<GradedModule> {
        algebra
            .regular
            .get_or_init(|| {
                let mut basis: BTreeMap<i32, Vec<String>> = BTreeMap::new();
                for d in 0..=algebra.top_degree() {
                    let ls = algebra
                        .in_degree(d)
                        .iter()
                        .map(|&b| word_label(algebra, b))
                        .collect();
                    basis.insert(d as i32, ls);
                }
                let name = algebra.name().to_string();
                Arc::new(
                    Self::from_parts(name, algebra.clone(), basis, |g, d| {
                        algebra.left_gen(g, d as u32)
                    })
                    .unwrap(),
                )
            })
            .clone()
    }

    /// The free module on generators in the given degrees, truncated above
    /// `max_degree` when given (the truncation is a quotient module).
    pub fn free(
        algebra: &Arc<SubAlgebra>,
        gen_degrees: &[i32],
        max_degree: Option<i32>,
    ) -> GradedModule {
        let top = algebra.top_degree() as i32;
        let mut basis: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        // index[(d)] -> list of (generator, algebra basis element)
        let mut index: BTreeMap<i32, Vec<(usize, usize)>> = BTreeMap::new();
        for d in gen_degrees.iter().copied().min().unwrap_or(0)
            ..=gen_degrees.iter().copied().max().unwrap_or(-1) + top
        {
            if max_degree.is_some_and(|m| d > m) {
                break;
            }
            for (i, &gd) in gen_degrees.iter().enumerate() {
                if d < gd || d > gd + top {
                    continue;
                }
                for &b in algebra.in_degree((d - gd) as u32) {
                    index.entry(d).or_default().push((i, b));
                    basis
                        .entry(d)
                        .or_default()
                        .push(format!("{}.g{i}", word_label(algebra, b)));
                }
            }
        }
        let regular = Self::regular(algebra);
        let name = format!(
            "free({})",
            gen_degrees
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        Self::from_parts(name, algebra.clone(), basis, |g, d| {
            let k = algebra.gen_degree(g) as i32;
            let src = &index[&d];
            let tgt = index.get(&(d + k)).cloned().unwrap_or_default();
            let pos: HashMap<(usize, usize), usize> =
                tgt.iter().enumerate().map(|(p, &x)| (x, p)).collect();
            let mut m = F2Matrix::zeros(tgt.len(), src.len());
            for (c, &(i, b)) in src.iter().enumerate() {
                let bd = algebra.degree_of(b);
                let prod = regular.gen_action(g, bd as i32);
                for r in prod.column(algebra.pos_in_degree(b)).ones() {
                    let target_elt = algebra.in_degree(bd + k as u32)[r];
                    // absent above the truncation
                    if let Some(&r) = pos.get(&(i, target_elt)) {
                        m.set(r, c, true);
                    }
                }
            }
            m
        })
        .unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn algebra(&self) -> &Arc<SubAlgebra> {
        &self.algebra
    }

    fn idx(&self, d: i32) -> Option<usize> {
        let i = d - self.min_degree;
        (i >= 0 && (i as usize) < self.labels.len()).then_some(i as usize)
    }

    pub fn dim(&self, d: i32) -> usize {
        self.idx(d).map_or(0, |i| self.labels[i].len())
    }

    pub fn labels(&self, d: i32) -> &[String] {
        self.idx(d).map_or(&[], |i| self.labels[i].as_slice())
    }

    pub fn min_degree(&self) -> Option<i32> {
        (!self.labels.is_empty()).then_some(self.min_degree)
    }

    pub fn max_degree(&self) -> Option<i32> {
        (!self.labels.is_empty()).then(|| self.min_degree + self.labels.len() as i32 - 1)
    }

    /// Degrees with nonzero dimension, ascending.
    pub fn degrees(&self) -> Vec<i32> {
        (0..self.labels.len())
            .filter(|&i| !self.labels[i].is_empty())
            .map(|i| self.min_degree + i as i32)
            .collect()
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.degrees()
            .into_iter()
            .map(|d| (d, self.dim(d)))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.labels.iter().map(|v| v.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn basis_map(&self) -> BTreeMap<i32, Vec<String>> {
        self.degrees()
            .into_iter()
            .map(|d| (d, self.labels(d).to_vec()))
            .collect()
    }

    /// Action of generator `g` from degree `d`.
    pub fn gen_action(&self, g: usize, d: i32) -> F2Matrix {
        let k = self.algebra.gen_degree(g) as i32;
        match self.idx(d) {
            Some(i) => self.gens[g][i].clone(),
            None => F2Matrix::zeros(self.dim(d + k), 0),
        }
    }

    fn action_cache(&self) -> &Vec<Vec<F2Matrix>> {
        self.cache.get_or_init(|| {
            let alg = &self.algebra;
            let mut out: Vec<Vec<F2Matrix>> = Vec::with_capacity(alg.dim());
            for b in 0..alg.dim() {
                let bd = alg.degree_of(b) as i32;
                let per = (0..self.labels.len())
                    .map(|i| {
                        let d = self.min_degree + i as i32;
                        match alg.parent(b) {
                            None => F2Matrix::identity(self.dim(d)),
                            Some((g, p)) => {
                                let pd = alg.degree_of(p) as i32;
                                self.gen_action(g, d + pd).mul(&out[p][i])
                            }
                        }
                    })
                    .collect();
                debug_assert!(bd >= 0);
                out.push(per);
            }
            out
        })
    }

    /// Action of algebra basis element `b` from degree `d`.
    pub fn action(&self, b: usize, d: i32) -> F2Matrix {
        let bd = self.algebra.degree_of(b) as i32;
        match self.idx(d) {
            Some(i) => self.action_cache()[b][i].clone(),
            None => F2Matrix::zeros(self.dim(d + bd), 0),
        }
    }

    /// Action of a homogeneous element of the algebra from degree `d`.
    pub fn act_elt(&self, e: &SteenrodElt, d: i32) -> Result<F2Matrix> {
        let k = e.degree().unwrap_or(0) as i32;
        if !e.is_homogeneous() {
            return Err(Error::Unsupported(format!("{e} is not homogeneous")));
        }
        let mut m = F2Matrix::zeros(self.dim(d + k), self.dim(d));
        for b in self.algebra.decompose(e)? {
            m.add_assign(&self.action(b, d));
        }
        Ok(m)
    }

    /// Every relation that fails, with a witness basis vector. Over A(k) the
    /// relations checked are Wall's; over other algebras they are the
    /// relations recorded while computing the closure.
    pub fn validate(&self) -> Result<Vec<Violation>> {
        let alg = &self.algebra;
        let mut out = Vec::new();
        if let Some(k) = self.wall_index() {
            for rel in cached_wall_relations(k)?.iter() {
                let deg = rel
                    .words
                    .first()
                    .map_or(0, |w| w.iter().map(|&i| 1i32 << i).sum::<i32>());
                for d in self.degrees() {
                    let mut op = F2Matrix::zeros(self.dim(d + deg), self.dim(d));
                    for w in &rel.words {
                        let mut m = F2Matrix::identity(self.dim(d));
                        let mut cur = d;
                        for &i in w.iter().rev() {
                            m = self.gen_action(i as usize, cur).mul(&m);
                            cur += 1 << i;
                        }
                        op.add_assign(&m);
                    }
                    if let Some(c) = (0..op.cols()).find(|&c| !op.column(c).is_zero()) {
                        out.push(Violation {
                            relation: rel.to_string(),
                            degree: d,
                            label: self.labels(d)[c].clone(),
                        });
                        break;
                    }
                }
            }
            return Ok(out);
        }
        for rel in alg.closure_relations() {
            let pd = alg.degree_of(rel.parent) as i32;
            let k = alg.gen_degree(rel.gen) as i32;
            for d in self.degrees() {
                let mut op = self
                    .gen_action(rel.gen, d + pd)
                    .mul(&self.action(rel.parent, d));
                for &v in &rel.value {
                    op.add_assign(&self.action(v, d));
                }
                debug_assert_eq!(op.rows(), self.dim(d + pd + k));
                if let Some(c) = (0..op.cols()).find(|&c| !op.column(c).is_zero()) {
                    let mut text = format!(
                        "{} {}",
                        alg.gen_name(rel.gen),
                        alg.word_string(alg.word(rel.parent))
                    );
                    for &v in &rel.value {
                        text.push_str(&format!(" + {}", alg.word_string(alg.word(v))));
                    }
                    out.push(Violation {
                        relation: text,
                        degree: d,
                        label: self.labels(d)[c].clone(),
                    });
                    break;
                }
            }
        }
        Ok(out)
    }

    /// Some(k) when the generators are exactly Sq^1, ..., Sq^{2^k}.
    fn wall_index(&self) -> Option<u32> {
        let gens = self.algebra.generators();
        let amb = Some(self.algebra.ambient_n());
        let k = gens.len().checked_sub(1)? as u32;
        (0..=k)
            .all(|i| SteenrodElt::sq(1 << i, amb).ok().as_ref() == Some(&gens[i as usize]))
            .then_some(k)
    }

    pub fn is_valid(&self) -> Result<bool> {
        Ok(self.validate()?.is_empty())
    }

    /// Shift every degree up by `k`.
    pub fn suspend(&self, k: i32) -> GradedModule {
        let mut m = self.clone();
        if !m.labels.is_empty() {
            m.min_degree += k;
        }
        if k != 0 {
            m.name = format!("{}[{k}]", self.name);
        }
        m
    }

    /// Direct sum; labels are prefixed with the summand index.
    pub fn direct_sum(
        name: impl Into<String>,
        algebra: &Arc<SubAlgebra>,
        parts: &[&GradedModule],
    ) -> Result<GradedModule> {
        for p in parts {
            if p.algebra != *algebra {
                return Err(Error::Unsupported(format!(
                    "{} is over {}, not {}",
                    p.name, p.algebra, algebra
                )));
            }
        }
        let mut basis: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for (i, p) in parts.iter().enumerate() {
            for d in p.degrees() {
                basis
                    .entry(d)
                    .or_default()
                    .extend(p.labels(d).iter().map(|l| format!("{i}:{l}")));
            }
        }
        Self::from_parts(name, algebra.clone(), basis, |g, d| {
            let k = algebra.gen_degree(g) as i32;
            let rows: usize = parts.iter().map(|p| p.dim(d + k)).sum();
            let cols: usize = parts.iter().map(|p| p.dim(d)).sum();
            let mut m = F2Matrix::zeros(rows, cols);
            let (mut r0, mut c0) = (0, 0);
            for p in parts {
                let a = p.gen_action(g, d);
                for r in 0..a.rows() {
                    for c in a.row(r).ones() {
                        m.set(r0 + r, c0 + c, true);
                    }
                }
                r0 += p.dim(d + k);
                c0 += p.dim(d);
            }
            m
        })
    }

    /// The submodule generated by the given homogeneous vectors, as per-degree
    /// spans.
    pub fn generated_submodule(&self, elems: &[(i32, F2Vector)]) -> BTreeMap<i32, Echelon> {
        let mut vecs: BTreeMap<i32, Vec<F2Vector>> = BTreeMap::new();
        for (d, v) in elems {
            for b in 0..self.algebra.dim() {
                let e = d + self.algebra.degree_of(b) as i32;
                if self.dim(e) == 0 {
                    continue;
                }
                let w = self.action(b, *d).mul_vec(v);
                if !w.is_zero() {
                    vecs.entry(e).or_default().push(w);
                }
            }
        }
        vecs.into_iter()
            .map(|(d, vs)| {
                let mut ech = Echelon::new(self.dim(d), vs.len());
                for v in &vs {
                    ech.insert(v);
                }
                (d, ech)
            })
            .collect()
    }

    /// The quotient by a submodule given as per-degree spans (missing degrees
    /// are zero). Returns the quotient and the projection matrices.
    pub fn quotient(
        &self,
        sub: &BTreeMap<i32, Echelon>,
        name: impl Into<String>,
    ) -> Result<(GradedModule, BTreeMap<i32, F2Matrix>)> {
        let keep: BTreeMap<i32, Vec<usize>> = self
            .degrees()
            .into_iter()
            .map(|d| {
                (
                    d,
                    sub.get(&d)
                        .map_or_else(|| (0..self.dim(d)).collect(), |e| e.complement_positions()),
                )
            })
            .collect();
        let project = |d: i32, v: &F2Vector| -> F2Vector {
            let r = match sub.get(&d) {
                Some(e) => e.reduce(v).0,
                None => v.clone(),
            };
            let ks = keep.get(&d).map_or(&[][..], |k| k.as_slice());
            F2Vector::from_indices(
                ks.len(),
                ks.iter()
                    .enumerate()
                    .filter(|(_, &p)| r.get(p))
                    .map(|(i, _)| i),
            )
        };
        let basis: BTreeMap<i32, Vec<String>> = keep
            .iter()
            .map(|(&d, ks)| (d, ks.iter().map(|&p| self.labels(d)[p].clone()).collect()))
            .collect();
        let q = Self::from_parts(name, self.algebra.clone(), basis, |g, d| {
            let k = self.algebra.gen_degree(g) as i32;
            let a = self.gen_action(g, d);
            let cols: Vec<F2Vector> = keep[&d]
                .iter()
                .map(|&p| project(d + k, &a.column(p)))
                .collect();
            F2Matrix::from_columns(keep.get(&(d + k)).map_or(0, |k| k.len()), &cols)
        })?;
        let proj = self
            .degrees()
            .into_iter()
            .map(|d| {
                let cols: Vec<F2Vector> = (0..self.dim(d))
                    .map(|c| project(d, &F2Vector::unit(self.dim(d), c)))
                    .collect();
                (d, F2Matrix::from_columns(keep[&d].len(), &cols))
            })
            .collect();
        Ok((q, proj))
    }

    /// The submodule with the given independent basis vectors in each degree,
    /// which must be closed under the action. Returns it with the inclusion
    /// matrices.
    pub fn submodule(
        &self,
        basis: &BTreeMap<i32, Vec<F2Vector>>,
        name: impl Into<String>,
    ) -> Result<(GradedModule, BTreeMap<i32, F2Matrix>)> {
        let mut ech: BTreeMap<i32, Echelon> = BTreeMap::new();
        for (&d, vs) in basis {
            let mut e = Echelon::new(self.dim(d), vs.len());
            for v in vs {
                if !e.insert(v) {
                    return Err(Error::Unsupported(
                        "submodule basis vectors are dependent".into(),
                    ));
                }
            }
            ech.insert(d, e);
        }
        let label = |d: i32, v: &F2Vector| -> String {
            v.ones()
                .map(|i| self.labels(d)[i].clone())
                .collect::<Vec<_>>()
                .join("+")
        };
        let labels: BTreeMap<i32, Vec<String>> = basis
            .iter()
            .map(|(&d, vs)| (d, vs.iter().map(|v| label(d, v)).collect()))
            .collect();
        let mut err = None;
        let m = Self::from_parts(name, self.algebra.clone(), labels, |g, d| {
            let k = self.algebra.gen_degree(g) as i32;
            let a = self.gen_action(g, d);
            let n_out = basis.get(&(d + k)).map_or(0, |v| v.len());
            let cols: Vec<F2Vector> = basis[&d]
                .iter()
                .map(|v| {
                    let w = a.mul_vec(v);
                    match ech.get(&(d + k)).and_then(|e| e.coords(&w)) {
                        Some(c) => c,
                        None if w.is_zero() => F2Vector::zeros(n_out),
                        None => {
                            err = Some(Error::Invalid(format!(
                                "subspace not closed under the action in degree {d}"
                            )));
                            F2Vector::zeros(n_out)
                        }
                    }
                })
                .collect();
            F2Matrix::from_columns(n_out, &cols)
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        let incl = basis
            .iter()
            .map(|(&d, vs)| (d, F2Matrix::from_columns(self.dim(d), vs)))
            .collect();
        Ok((m, incl))
    }

    /// Positive-degree part of the algebra acting: the span of all
    /// `g * x` with `g` a generator, per degree.
    pub fn decomposables(&self) -> BTreeMap<i32, Echelon> {
        let mut out = BTreeMap::new();
        for d in self.degrees() {
            let mut vs = Vec::new();
            for g in 0..self.algebra.num_gens() {
                let k = self.algebra.gen_degree(g) as i32;
                vs.extend(self.gen_action(g, d - k).columns());
            }
            let mut e = Echelon::new(self.dim(d), vs.len());
            for v in &vs {
                e.insert(v);
            }
            out.insert(d, e);
        }
        out
    }

    /// Dimensions of the indecomposables `M / A^+ M`, per degree.
    pub fn generator_dims(&self) -> BTreeMap<i32, usize> {
        self.decomposables()
            .into_iter()
            .map(|(d, e)| (d, self.dim(d) - e.dim()))
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    /// Labels equal, degrees equal, generator matrices equal.
    pub fn same_presentation(&self, other: &GradedModule) -> bool {
        self.algebra == other.algebra
            && self.basis_map() == other.basis_map()
            && (0..self.algebra.num_gens()).all(|g| {
                self.degrees()
                    .iter()
                    .all(|&d| self.gen_action(g, d) == other.gen_action(g, d))
            })
    }

    /// The set of degrees carrying basis elements.
    pub fn support(&self) -> BTreeSet<i32> {
        self.degrees().into_iter().collect()
    }
}

/// Label for an algebra basis element: its generator word without spaces.
pub fn word_label(alg: &SubAlgebra, b: usize) -> String {
    let w = alg.word(b);
    if w.is_empty() {
        "1".into()
    } else {
        w.iter().map(|&g| alg.gen_name(g).to_string()).collect()
    }
}
