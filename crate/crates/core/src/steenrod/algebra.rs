//! The finite algebras A(n) and their subalgebras.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use super::element::{milnor_primitive, SteenrodElt};
use super::milnor::MilnorBasisElt;
use crate::error::{Error, Result};
use crate::f2linalg::{Echelon, F2Matrix, F2Vector};
use crate::fpmod::GradedModule;

static MAX_AMBIENT: AtomicU32 = AtomicU32::new(3);

/// Raise or lower the largest n for which A(n) may be materialized.
pub fn set_max_ambient(n: u32) {
    MAX_AMBIENT.store(n, Ordering::SeqCst);
}

/// The Milnor basis of A(n), indexed degree by degree.
pub struct Ambient {
    n: u32,
    by_degree: Vec<Vec<MilnorBasisElt>>,
    index: HashMap<MilnorBasisElt, usize>,
}

impl Ambient {
    pub fn get(n: u32) -> Result<Arc<Ambient>> {
        if n > MAX_AMBIENT.load(Ordering::SeqCst) {
            return Err(Error::Unsupported(format!(
                "A({n}) exceeds the configured ambient limit"
            )));
        }
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Ambient>>>> = OnceLock::new();
        let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
        Ok(cache
            .entry(n)
            .or_insert_with(|| Arc::new(Ambient::build(n)))
            .clone())
    }

    fn build(n: u32) -> Ambient {
        let bounds: Vec<u32> = (0..=n as usize)
            .map(|i| 1u32 << (n as usize + 1 - i))
            .collect();
        let mut all = Vec::new();
        let mut cur = vec![0u32; bounds.len()];
        loop {
            all.push(MilnorBasisElt::new(cur.clone()));
            let mut i = 0;
            while i < cur.len() {
                cur[i] += 1;
                if cur[i] < bounds[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
            if i == cur.len() {
                break;
            }
        }
        all.sort();
        let top = all.last().map_or(0, |e| e.degree()) as usize;
        let mut by_degree = vec![Vec::new(); top + 1];
        let mut index = HashMap::new();
        for e in all {
            let d = e.degree() as usize;
            index.insert(e.clone(), by_degree[d].len());
            by_degree[d].push(e);
        }
        Ambient {
            n,
            by_degree,
            index,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.by_degree.iter().map(|v| v.len()).sum()
    }

    pub fn top_degree(&self) -> u32 {
        (self.by_degree.len() - 1) as u32
    }

    pub fn dim_in(&self, d: u32) -> usize {
        self.by_degree.get(d as usize).map_or(0, |v| v.len())
    }

    pub fn basis_in(&self, d: u32) -> &[MilnorBasisElt] {
        self.by_degree.get(d as usize).map_or(&[], |v| v.as_slice())
    }

    /// Coordinates of the degree-`d` component of `e`.
    pub fn vector(&self, e: &SteenrodElt, d: u32) -> F2Vector {
        let mut v = F2Vector::zeros(self.dim_in(d));
        for t in e.terms() {
            if t.degree() == d {
                v.flip(self.index[t]);
            }
        }
        v
    }

    pub fn element(&self, d: u32, v: &F2Vector) -> SteenrodElt {
        let terms = v.ones().map(|i| self.by_degree[d as usize][i].clone());
        SteenrodElt::from_terms(terms, Some(self.n)).expect("basis of A(n) lies in A(n)")
    }
}

/// `gen * basis[parent]` equals the sum of `value`; one per dependent
/// candidate met during closure. Together they present the algebra.
#[derive(Clone, Debug)]
pub struct ClosureRelation {
    pub gen: usize,
    pub parent: usize,
    pub value: Vec<usize>,
}

/// A subalgebra of A(n) given by generators, with a basis of generator words.
///
/// Basis element `i` is the value of the word `word(i)`; each nonunit basis
/// element is `gen * basis[parent]` for a recorded pair, found breadth-first:
/// by degree, then generator index, then parent index.
pub struct SubAlgebra {
    ambient: Arc<Ambient>,
    name: String,
    generators: Vec<SteenrodElt>,
    gen_names: Vec<String>,
    basis: Vec<SteenrodElt>,
    degrees: Vec<u32>,
    words: Vec<Vec<usize>>,
    parents: Vec<Option<(usize, usize)>>,
    by_degree: Vec<Vec<usize>>,
    pos: Vec<usize>,
    coord: Vec<Echelon>,
    left_gen: Vec<Vec<F2Matrix>>,
    relations: Vec<ClosureRelation>,
    sub_hopf: bool,
    commutative: bool,
    pub(crate) regular: OnceLock<Arc<GradedModule>>,
}

impl PartialEq for SubAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.ambient.n == other.ambient.n && self.generators == other.generators
    }
}

impl Eq for SubAlgebra {}

impl fmt::Debug for SubAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl fmt::Display for SubAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Short name for a generator: `Sq^k`, `P(1,s)`, or the Milnor expansion.
pub fn generator_name(e: &SteenrodElt) -> String {
    if e.terms().len() == 1 {
        let t = e.terms().iter().next().unwrap();
        let ex = t.exponents();
        if ex.len() == 1 {
            return format!("Sq^{}", ex[0]);
        }
        if ex.last() == Some(&1) && ex[..ex.len() - 1].iter().all(|&r| r == 0) {
            return format!("P(1,{})", ex.len() - 1);
        }
    }
    format!("({e})")
}

fn sq_gens(k: u32, n: u32) -> Result<Vec<SteenrodElt>> {
    (0..=k).map(|i| SteenrodElt::sq(1 << i, Some(n))).collect()
}

fn q_gens(k: u32, n: u32) -> Result<Vec<SteenrodElt>> {
    (0..=k).map(|i| milnor_primitive(i, n)).collect()
}

impl SubAlgebra {
    /// A(n) itself.
    pub fn a(n: u32) -> Result<Arc<SubAlgebra>> {
        Self::a_in(n, n)
    }

    /// A(k) as a subalgebra of A(n), k <= n.
    pub fn a_in(k: u32, n: u32) -> Result<Arc<SubAlgebra>> {
        if k > n {
            return Err(Error::OutOfAmbient(format!("A({k}) is not in A({n})")));
        }
        Self::closure(&sq_gens(k, n)?, n)
    }

    /// E(n) inside A(n): exterior on P(1,0), ..., P(1,n).
    pub fn e(n: u32) -> Result<Arc<SubAlgebra>> {
        Self::e_in(n, n)
    }

    pub fn e_in(k: u32, n: u32) -> Result<Arc<SubAlgebra>> {
        Self::closure(&q_gens(k, n)?, n)
    }

    /// The subalgebra of A(n) generated by `gens`. Results are cached, so equal
    /// requests share one value.
    pub fn closure(gens: &[SteenrodElt], n: u32) -> Result<Arc<SubAlgebra>> {
        let ambient = Ambient::get(n)?;
        let mut tagged = Vec::with_capacity(gens.len());
        for g in gens {
            let g = g.in_ambient(Some(n))?;
            match g.degree() {
                Some(d) if d > 0 => tagged.push(g),
                _ => {
                    return Err(Error::Unsupported(format!(
                        "generator {g} must be homogeneous of positive degree"
                    )))
                }
            }
        }
        static CACHE: OnceLock<Mutex<HashMap<(u32, Vec<SteenrodElt>), Arc<SubAlgebra>>>> =
            OnceLock::new();
        let key = (n, tagged.clone());
        if let Some(a) = CACHE
            .get_or_init(Default::default)
            .lock()
            .unwrap()
            .get(&key)
        {
            return Ok(a.clone());
        }
        let built = Arc::new(Self::build(ambient, tagged)?);
        let mut cache = CACHE.get().unwrap().lock().unwrap();
        Ok(cache.entry(key).or_insert(built).clone())
    }

    fn build(ambient: Arc<Ambient>, generators: Vec<SteenrodElt>) -> Result<SubAlgebra> {
        let n = ambient.n;
        let amb = Some(n);
        let gdeg: Vec<u32> = generators.iter().map(|g| g.degree().unwrap()).collect();
        let top = ambient.top_degree();
        let mut basis = vec![SteenrodElt::one(amb)];
        let mut degrees = vec![0u32];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut parents = vec![None];
        let mut by_degree: Vec<Vec<usize>> = vec![vec![0]];
        let mut coord = vec![{
            let mut e = Echelon::new(1, 1);
            e.insert(&F2Vector::unit(1, 0));
            e
        }];
        let mut relations = Vec::new();
        for d in 1..=top {
            let mut cands = Vec::new();
            for (g, gen) in generators.iter().enumerate() {
                if gdeg[g] > d {
                    continue;
                }
                for &p in &by_degree[(d - gdeg[g]) as usize] {
                    cands.push((g, p, gen.mul(&basis[p])?));
                }
            }
            let mut span = Echelon::new(ambient.dim_in(d), cands.len());
            let mut here = Vec::new();
            let mut dependent = Vec::new();
            for (g, p, val) in cands {
                if span.insert(&ambient.vector(&val, d)) {
                    let i = basis.len();
                    let mut w = vec![g];
                    w.extend(&words[p]);
                    basis.push(val);
                    degrees.push(d);
                    words.push(w);
                    parents.push(Some((g, p)));
                    here.push(i);
                } else {
                    dependent.push((g, p, val));
                }
            }
            let mut ech = Echelon::new(ambient.dim_in(d), here.len());
            for &i in &here {
                ech.insert(&ambient.vector(&basis[i], d));
            }
            for (g, p, val) in dependent {
                let c = ech
                    .coords(&ambient.vector(&val, d))
                    .expect("dependent candidate lies in span");
                relations.push(ClosureRelation {
                    gen: g,
                    parent: p,
                    value: c.ones().map(|k| here[k]).collect(),
                });
            }
            by_degree.push(here);
            coord.push(ech);
        }
        while by_degree.len() > 1 && by_degree.last().unwrap().is_empty() {
            by_degree.pop();
            coord.pop();
        }
        let mut pos = vec![0; basis.len()];
        for list in &by_degree {
            for (k, &i) in list.iter().enumerate() {
                pos[i] = k;
            }
        }
        let mut alg = SubAlgebra {
            name: String::new(),
            gen_names: generators.iter().map(generator_name).collect(),
            ambient,
            generators,
            basis,
            degrees,
            words,
            parents,
            by_degree,
            pos,
            coord,
            left_gen: Vec::new(),
            relations,
            sub_hopf: false,
            commutative: false,
            regular: OnceLock::new(),
        };
        alg.left_gen = (0..alg.generators.len())
            .map(|g| {
                (0..alg.by_degree.len() as u32)
                    .map(|d| {
                        let e = d + gdeg[g];
                        let cols: Vec<F2Vector> = alg.by_degree[d as usize]
                            .iter()
                            .map(|&b| {
                                let prod = alg.generators[g].mul(&alg.basis[b]).unwrap();
                                alg.coords_in_degree(e, &prod)
                                    .expect("closed under generators")
                            })
                            .collect();
                        F2Matrix::from_columns(alg.dim_in(e), &cols)
                    })
                    .collect()
            })
            .collect();
        alg.sub_hopf = alg.check_sub_hopf();
        alg.commutative = alg.generators.iter().enumerate().all(|(i, a)| {
            alg.generators[i + 1..]
                .iter()
                .all(|b| a.mul(b).unwrap() == b.mul(a).unwrap())
        });
        alg.name = alg.default_name();
        Ok(alg)
    }

    fn default_name(&self) -> String {
        let n = self.ambient.n;
        let k = self.generators.len() as u32;
        let suffix = |m: u32| {
            if m == n {
                String::new()
            } else {
                format!(" in A({n})")
            }
        };
        if k > 0 && sq_gens(k - 1, n).ok().as_ref() == Some(&self.generators) {
            return format!("A({}){}", k - 1, suffix(k - 1));
        }
        if k > 0 && q_gens(k - 1, n).ok().as_ref() == Some(&self.generators) {
            return format!("E({}){}", k - 1, suffix(k - 1));
        }
        format!("A({n})[{}]", self.gen_names.join(", "))
    }

    fn check_sub_hopf(&self) -> bool {
        // Annihilator of S_d inside the dual of A(n)_d.
        let ann: Vec<F2Matrix> = (0..=self.ambient.top_degree())
            .map(|d| {
                let cols: Vec<F2Vector> = self
                    .in_degree(d)
                    .iter()
                    .map(|&b| self.ambient.vector(&self.basis[b], d))
                    .collect();
                let s = F2Matrix::from_columns(self.ambient.dim_in(d), &cols);
                F2Matrix::from_rows(self.ambient.dim_in(d), &s.transpose().kernel_basis())
            })
            .collect();
        for g in &self.generators {
            let k = g.degree().unwrap();
            for i in 0..=k {
                let mut c = F2Matrix::zeros(self.ambient.dim_in(i), self.ambient.dim_in(k - i));
                for (l, r) in g.coproduct() {
                    if l.degree() == Some(i) {
                        let li = self.ambient.vector(&l, i).first_one().unwrap();
                        let ri = self.ambient.vector(&r, k - i).first_one().unwrap();
                        c.set(li, ri, !c.get(li, ri));
                    }
                }
                if !ann[i as usize].mul(&c).is_zero()
                    || !c.mul(&ann[(k - i) as usize].transpose()).is_zero()
                {
                    return false;
                }
            }
        }
        true
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn ambient_n(&self) -> u32 {
        self.ambient.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn top_degree(&self) -> u32 {
        (self.by_degree.len() - 1) as u32
    }

    pub fn generators(&self) -> &[SteenrodElt] {
        &self.generators
    }

    pub fn gen_name(&self, g: usize) -> &str {
        &self.gen_names[g]
    }

    pub fn gen_degree(&self, g: usize) -> u32 {
        self.generators[g].degree().unwrap()
    }

    pub fn num_gens(&self) -> usize {
        self.generators.len()
    }

    /// Index of the generator equal to `e`.
    pub fn generator_index(&self, e: &SteenrodElt) -> Option<usize> {
        let e = e.in_ambient(Some(self.ambient.n)).ok()?;
        self.generators.iter().position(|g| *g == e)
    }

    pub fn basis(&self) -> &[SteenrodElt] {
        &self.basis
    }

    pub fn degree_of(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn in_degree(&self, d: u32) -> &[usize] {
        self.by_degree.get(d as usize).map_or(&[], |v| v.as_slice())
    }

    pub fn dim_in(&self, d: u32) -> usize {
        self.in_degree(d).len()
    }

    pub fn pos_in_degree(&self, i: usize) -> usize {
        self.pos[i]
    }

    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn parent(&self, i: usize) -> Option<(usize, usize)> {
        self.parents[i]
    }

    pub fn closure_relations(&self) -> &[ClosureRelation] {
        &self.relations
    }

    pub fn is_sub_hopf(&self) -> bool {
        self.sub_hopf
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    /// Left multiplication by generator `g` from degree `d`.
    pub fn left_gen(&self, g: usize, d: u32) -> F2Matrix {
        match self.left_gen[g].get(d as usize) {
            Some(m) => m.clone(),
            None => F2Matrix::zeros(self.dim_in(d + self.gen_degree(g)), 0),
        }
    }

    pub fn word_string(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|&g| self.gen_names[g].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Coordinates of a homogeneous degree-`d` element over `in_degree(d)`.
    pub fn coords_in_degree(&self, d: u32, e: &SteenrodElt) -> Option<F2Vector> {
        let v = self.ambient.vector(e, d);
        match self.coord.get(d as usize) {
            Some(ech) => ech.coords(&v),
            None => v.is_zero().then(|| F2Vector::zeros(0)),
        }
    }

    /// Basis indices summing to `e`.
    pub fn decompose(&self, e: &SteenrodElt) -> Result<Vec<usize>> {
        let e = e.in_ambient(Some(self.ambient.n))?;
        let mut out = Vec::new();
        for (d, part) in e.components() {
            let c = self
                .coords_in_degree(d, &part)
                .ok_or_else(|| Error::NotSubalgebra(format!("{part} is not in {}", self.name)))?;
            out.extend(c.ones().map(|k| self.by_degree[d as usize][k]));
        }
        Ok(out)
    }

    pub fn contains(&self, e: &SteenrodElt) -> bool {
        self.decompose(e).is_ok()
    }

    /// `e` as a sum of generator words.
    pub fn expression(&self, e: &SteenrodElt) -> Result<Vec<Vec<usize>>> {
        Ok(self
            .decompose(e)?
            .into_iter()
            .map(|i| self.words[i].clone())
            .collect())
    }

    /// Whether `other` is a subalgebra of `self` (same ambient).
    pub fn contains_algebra(&self, other: &SubAlgebra) -> bool {
        self.ambient.n == other.ambient.n && other.generators.iter().all(|g| self.contains(g))
    }

    /// The basis index of the top-degree element, which must be unique.
    pub fn integral(&self) -> Result<usize> {
        match self.by_degree.last() {
            Some(v) if v.len() == 1 => Ok(v[0]),
            _ => Err(Error::NotFrobenius),
        }
    }

    /// Index of the basis element equal to `e`, when `e` is one.
    pub fn basis_index(&self, e: &SteenrodElt) -> Option<usize> {
        let d = e.degree()?;
        let c = self.coords_in_degree(d, e)?;
        (c.count_ones() == 1).then(|| self.by_degree[d as usize][c.first_one().unwrap()])
    }
}
